import Papa from "papaparse"
import { z } from "zod"

/** Raised for any input that does not match a documented CSV schema. */
export class SchemaError extends Error {}

export interface DynamicsRow {
  cell_id: string
  rep: number
  ones_count: number
  mean_occupation: number
  retained_snapshots: number
}

export interface RunsRow {
  cell_id: string
  seed: string
  n: number
  k: number
  N: number
  variant: string
  selection: string
  covered: boolean
  iterations: number
  evaluations: number
}

export interface SweepRow {
  cell_id: string
  n: number
  k: number
  N: number
  variant: string
  selection: string
  reps: number
  mean_evals: number
  std_evals: number
  lb_evals: number
  ratio: number
}

const INT_PATTERN = /^[+-]?\d+$/

// Columns are written by a float formatter that can emit nan and inf
// literals, so plain Number() coercion (which maps any garbage to NaN)
// is not safe here.
function parseFloatStrict(raw: string): number | null {
  const s = raw.trim().toLowerCase()
  if (s === "nan") return NaN
  if (s === "inf" || s === "infinity") return Infinity
  if (s === "-inf" || s === "-infinity") return -Infinity
  if (s === "") return null
  const value = Number(s)
  return Number.isNaN(value) ? null : value
}

const intField = z
  .string()
  .refine((s) => INT_PATTERN.test(s.trim()), { message: "expected an integer" })
  .transform((s) => Number(s.trim()))

const floatField = z
  .string()
  .transform((s, ctx) => {
    const value = parseFloatStrict(s)
    if (value === null) {
      ctx.addIssue({ code: z.ZodIssueCode.custom, message: `not a number: '${s}'` })
      return z.NEVER
    }
    return value
  })

const boolField = z
  .enum(["true", "false"])
  .transform((s) => s === "true")

const dynamicsRowSchema = z.object({
  cell_id: z.string().min(1),
  rep: intField,
  ones_count: intField,
  mean_occupation: floatField,
  retained_snapshots: intField,
})

const runsRowSchema = z.object({
  cell_id: z.string().min(1),
  seed: z.string().min(1),
  n: intField,
  k: intField,
  N: intField,
  variant: z.string().min(1),
  selection: z.string().min(1),
  covered: boolField,
  iterations: intField,
  evaluations: intField,
})

const sweepRowSchema = z.object({
  cell_id: z.string().min(1),
  n: intField,
  k: intField,
  N: intField,
  variant: z.string().min(1),
  selection: z.string().min(1),
  reps: intField,
  mean_evals: floatField,
  std_evals: floatField,
  lb_evals: floatField,
  ratio: floatField,
})

export const DYNAMICS_COLUMNS = Object.keys(dynamicsRowSchema.shape)
export const RUNS_COLUMNS = Object.keys(runsRowSchema.shape)
export const SWEEP_COLUMNS = Object.keys(sweepRowSchema.shape)

interface RawTable {
  fields: string[]
  records: Record<string, string>[]
}

function parseRaw(text: string, label: string): RawTable {
  const result = Papa.parse<Record<string, string>>(text, {
    header: true,
    skipEmptyLines: true,
  })
  if (result.errors.length > 0) {
    const first = result.errors[0]!
    throw new SchemaError(`${label}: malformed CSV (${first.message})`)
  }
  const fields = result.meta.fields ?? []
  return { fields, records: result.data }
}

function requireColumns(table: RawTable, columns: string[], label: string): void {
  const missing = columns.filter((c) => !table.fields.includes(c))
  if (missing.length > 0) {
    throw new SchemaError(
      `${label}: missing column(s) ${missing.join(", ")}; ` +
        `expected header ${columns.join(",")}`
    )
  }
}

function coerceRows<T>(table: RawTable, schema: z.ZodType<T, z.ZodTypeDef, unknown>, label: string): T[] {
  const rows: T[] = []
  table.records.forEach((record, i) => {
    const parsed = schema.safeParse(record)
    if (!parsed.success) {
      const issue = parsed.error.issues[0]!
      const where = issue.path.length > 0 ? ` in column ${issue.path.join(".")}` : ""
      throw new SchemaError(`${label}: row ${i + 2}${where}: ${issue.message}`)
    }
    rows.push(parsed.data)
  })
  return rows
}

export function parseDynamicsCsv(text: string, label = "dynamics"): DynamicsRow[] {
  const table = parseRaw(text, label)
  requireColumns(table, DYNAMICS_COLUMNS, label)
  return coerceRows(table, dynamicsRowSchema, label)
}

export function parseRunsCsv(text: string, label = "runs"): RunsRow[] {
  const table = parseRaw(text, label)
  requireColumns(table, RUNS_COLUMNS, label)
  return coerceRows(table, runsRowSchema, label)
}

export function parseSweepCsv(text: string, label = "sweep"): SweepRow[] {
  const table = parseRaw(text, label)
  requireColumns(table, SWEEP_COLUMNS, label)
  return coerceRows(table, sweepRowSchema, label)
}

export type RuntimeTable =
  | { kind: "runs"; rows: RunsRow[] }
  | { kind: "sweep"; rows: SweepRow[] }

/** Accept either per-repetition results or the aggregated grid, by header. */
export function parseRuntimeCsv(text: string, label = "input"): RuntimeTable {
  const table = parseRaw(text, label)
  const has = (cols: string[]) => cols.every((c) => table.fields.includes(c))
  if (has(RUNS_COLUMNS)) {
    return { kind: "runs", rows: coerceRows(table, runsRowSchema, label) }
  }
  if (has(SWEEP_COLUMNS)) {
    return { kind: "sweep", rows: coerceRows(table, sweepRowSchema, label) }
  }
  throw new SchemaError(
    `${label}: header matches neither the per-run schema (${RUNS_COLUMNS.join(",")}) ` +
      `nor the sweep schema (${SWEEP_COLUMNS.join(",")})`
  )
}

export interface CellIdParts {
  benchmark: string
  n: number
  k: number
  N: number
  variant: string
  selection: string
}

const CELL_ID_PATTERN = /^([a-z0-9]+)_n(\d+)_k(\d+)_N(\d+)_([a-z]+)_([a-z]+)$/

/** Cell ids look like ojzj_n50_k2_N196_random_fair; null when they do not. */
export function parseCellId(cellId: string): CellIdParts | null {
  const m = CELL_ID_PATTERN.exec(cellId)
  if (m === null) return null
  return {
    benchmark: m[1]!,
    n: Number(m[2]!),
    k: Number(m[3]!),
    N: Number(m[4]!),
    variant: m[5]!,
    selection: m[6]!,
  }
}
