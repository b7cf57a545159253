#!/usr/bin/env node
import { readFileSync, writeFileSync } from "node:fs"
import { parseArgs } from "node:util"
import { parseDynamicsCsv, parseRuntimeCsv, SchemaError } from "./csv.js"
import { renderOccupationProfile, DEFAULT_OCCUPATION_OPTIONS } from "./occupation.js"
import { renderRuntimeComparison, DEFAULT_RUNTIME_OPTIONS } from "./runtime.js"

const USAGE = `usage: render --kind occupation|runtime --in <csv> --out <image.svg> [--width W] [--height H]

  occupation  line chart of mean occupation per ones-count level (dynamics.csv)
  runtime     bar chart and text table of mean evaluations (runs.csv or sweep.csv)

Output is deterministic SVG; rerunning on the same input reproduces it byte
for byte. Warnings about skipped cells go to stderr.`

function fail(message: string): never {
  process.stderr.write(`render: error: ${message}\n`)
  process.exit(1)
}

function positiveInt(raw: string | undefined, name: string, fallback: number): number {
  if (raw === undefined) return fallback
  const value = Number(raw)
  if (!Number.isInteger(value) || value < 100) {
    fail(`${name} must be an integer >= 100, got '${raw}'`)
  }
  return value
}

function main(argv: string[] = process.argv.slice(2)): void {
  let parsed
  try {
    parsed = parseArgs({
      args: argv,
      options: {
        kind: { type: "string" },
        in: { type: "string" },
        out: { type: "string" },
        width: { type: "string" },
        height: { type: "string" },
        help: { type: "boolean", short: "h" },
      },
      allowPositionals: false,
    })
  } catch (error) {
    fail((error as Error).message)
  }
  const values = parsed.values

  if (values.help) {
    process.stdout.write(USAGE + "\n")
    process.exit(0)
  }

  const kind = values.kind
  if (kind !== "occupation" && kind !== "runtime") {
    fail(`--kind must be occupation or runtime, got '${kind ?? ""}'`)
  }
  if (values.in === undefined) fail("--in is required")
  if (values.out === undefined) fail("--out is required")
  if (!values.out.endsWith(".svg")) {
    fail(`only vector output is supported; --out must end in .svg, got '${values.out}'`)
  }

  let text: string
  try {
    text = readFileSync(values.in, "utf8")
  } catch (error) {
    fail(`cannot read ${values.in}: ${(error as Error).message}`)
  }

  let svg: string
  let warnings: string[]
  let tableText: string | null = null
  try {
    if (kind === "occupation") {
      const rows = parseDynamicsCsv(text, values.in)
      const figure = renderOccupationProfile(rows, {
        width: positiveInt(values.width, "--width", DEFAULT_OCCUPATION_OPTIONS.width),
        height: positiveInt(values.height, "--height", DEFAULT_OCCUPATION_OPTIONS.height),
      })
      svg = figure.svg
      warnings = figure.warnings
    } else {
      const table = parseRuntimeCsv(text, values.in)
      const figure = renderRuntimeComparison(table, {
        width: positiveInt(values.width, "--width", DEFAULT_RUNTIME_OPTIONS.width),
        height: positiveInt(values.height, "--height", DEFAULT_RUNTIME_OPTIONS.height),
      })
      svg = figure.svg
      warnings = figure.warnings
      tableText = figure.table
    }
  } catch (error) {
    if (error instanceof SchemaError) fail(error.message)
    throw error
  }

  for (const warning of warnings) {
    process.stderr.write(`render: warning: ${warning}\n`)
  }
  try {
    writeFileSync(values.out, svg)
  } catch (error) {
    fail(`cannot write ${values.out}: ${(error as Error).message}`)
  }
  if (tableText !== null) {
    process.stdout.write(tableText + "\n")
  }
  process.stderr.write(`render: wrote ${values.out}\n`)
}

main()
