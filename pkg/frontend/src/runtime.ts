import { RuntimeTable, RunsRow, SweepRow } from "./csv.js"
import { runtimeLowerBound } from "./constants.js"
import { linearScale, ticks, formatCount } from "./scale.js"
import { Margins, px, seriesColor, tag, escapeXml, wrapSvg } from "./svg.js"

export interface RuntimeOptions {
  width: number
  height: number
}

export const DEFAULT_RUNTIME_OPTIONS: RuntimeOptions = {
  width: 820,
  height: 500,
}

const MARGINS: Margins = { top: 52, right: 28, bottom: 96, left: 84 }

export interface RuntimeCell {
  cellId: string
  n: number
  k: number
  N: number
  reps: number
  meanEvals: number
  lowerBound: number | null
}

export interface RuntimeFigure {
  svg: string
  table: string
  warnings: string[]
  cells: RuntimeCell[]
}

function aggregateRuns(rows: RunsRow[], warnings: string[]): RuntimeCell[] {
  interface Acc {
    n: number
    k: number
    N: number
    sum: number
    covered: number
    total: number
  }
  const byCell = new Map<string, Acc>()
  for (const row of rows) {
    let acc = byCell.get(row.cell_id)
    if (acc === undefined) {
      acc = { n: row.n, k: row.k, N: row.N, sum: 0, covered: 0, total: 0 }
      byCell.set(row.cell_id, acc)
    }
    acc.total += 1
    if (!row.covered) continue
    acc.sum += row.evaluations
    acc.covered += 1
  }
  const cells: RuntimeCell[] = []
  for (const [cellId, acc] of byCell.entries()) {
    if (acc.covered === 0) {
      warnings.push(`cell ${cellId}: no repetition reached full coverage, skipped`)
      continue
    }
    if (acc.covered < acc.total) {
      warnings.push(`cell ${cellId}: mean over ${acc.covered} of ${acc.total} repetitions`)
    }
    cells.push({
      cellId,
      n: acc.n,
      k: acc.k,
      N: acc.N,
      reps: acc.covered,
      meanEvals: acc.sum / acc.covered,
      lowerBound: null,
    })
  }
  return cells
}

function aggregateSweep(rows: SweepRow[], warnings: string[]): RuntimeCell[] {
  const cells: RuntimeCell[] = []
  for (const row of rows) {
    if (!Number.isFinite(row.mean_evals)) {
      warnings.push(`cell ${row.cell_id}: mean is not finite, skipped`)
      continue
    }
    cells.push({
      cellId: row.cell_id,
      n: row.n,
      k: row.k,
      N: row.N,
      reps: row.reps,
      meanEvals: row.mean_evals,
      lowerBound: null,
    })
  }
  return cells
}

/**
 * One bar per parameter cell, ordered by (n, k, N). The dashed marker on
 * each bar is the closed-form floor (3(e-1)/8) N n^k, evaluated here; cells
 * without a jump parameter carry no marker.
 */
export function buildRuntimeCells(table: RuntimeTable): { cells: RuntimeCell[]; warnings: string[] } {
  const warnings: string[] = []
  const cells = table.kind === "runs" ? aggregateRuns(table.rows, warnings) : aggregateSweep(table.rows, warnings)
  for (const cell of cells) {
    if (cell.k >= 1) {
      cell.lowerBound = runtimeLowerBound(cell.n, cell.k, cell.N)
    } else {
      warnings.push(`cell ${cell.cellId}: no closed-form runtime floor for k=0, marker omitted`)
    }
  }
  cells.sort((a, b) => a.n - b.n || a.k - b.k || a.N - b.N || (a.cellId < b.cellId ? -1 : 1))
  return { cells, warnings }
}

function formatTable(cells: RuntimeCell[]): string {
  const header = ["cell", "n", "k", "N", "reps", "mean evals", "floor", "mean/floor"]
  const body = cells.map((c) => [
    c.cellId,
    String(c.n),
    String(c.k),
    String(c.N),
    String(c.reps),
    c.meanEvals.toFixed(1),
    c.lowerBound === null ? "-" : c.lowerBound.toFixed(1),
    c.lowerBound === null ? "-" : (c.meanEvals / c.lowerBound).toFixed(3),
  ])
  const rows = [header, ...body]
  const widths = header.map((_, col) => Math.max(...rows.map((r) => r[col]!.length)))
  return rows
    .map((r) => r.map((value, col) => (col === 0 ? value.padEnd(widths[col]!) : value.padStart(widths[col]!))).join("  "))
    .join("\n")
}

export function renderRuntimeComparison(
  table: RuntimeTable,
  options: RuntimeOptions = DEFAULT_RUNTIME_OPTIONS
): RuntimeFigure {
  const { width, height } = options
  const { cells, warnings } = buildRuntimeCells(table)

  const left = MARGINS.left
  const right = width - MARGINS.right
  const top = MARGINS.top
  const bottom = height - MARGINS.bottom

  const parts: string[] = []
  parts.push(tag("rect", { width, height, fill: "#ffffff" }))
  parts.push(
    tag(
      "text",
      { x: (left + right) / 2, y: 24, "text-anchor": "middle", "font-size": 15, fill: "#111" },
      "mean evaluations until full front coverage"
    )
  )

  if (cells.length === 0) {
    warnings.push("no plottable cells in input")
    parts.push(
      tag(
        "text",
        { x: (left + right) / 2, y: (top + bottom) / 2, "text-anchor": "middle", "font-size": 14, fill: "#666" },
        "no data"
      )
    )
    return {
      svg: wrapSvg(width, height, parts.join("\n")),
      table: formatTable(cells),
      warnings,
      cells,
    }
  }

  const peaks = cells.map((c) => Math.max(c.meanEvals, c.lowerBound ?? 0))
  const yMax = Math.max(...peaks) * 1.12
  const yScale = linearScale([0, yMax], [bottom, top])

  const band = (right - left) / cells.length
  const barWidth = band * 0.58

  const gridLines: string[] = []
  const yTickLabels: string[] = []
  for (const value of ticks(0, yMax, 6)) {
    const y = yScale(value)
    gridLines.push(
      tag("line", { x1: px(left), y1: px(y), x2: px(right), y2: px(y), stroke: "#e4e4e4", "stroke-width": 1 })
    )
    yTickLabels.push(
      tag(
        "text",
        { x: px(left - 8), y: px(y + 4), "text-anchor": "end", "font-size": 11, fill: "#444" },
        formatCount(value)
      )
    )
  }
  parts.push(`<g class="grid">${gridLines.join("")}</g>`)
  parts.push(tag("line", { x1: px(left), y1: px(bottom), x2: px(right), y2: px(bottom), stroke: "#333", "stroke-width": 1 }))
  parts.push(tag("line", { x1: px(left), y1: px(top), x2: px(left), y2: px(bottom), stroke: "#333", "stroke-width": 1 }))
  parts.push(`<g class="ticks">${yTickLabels.join("")}</g>`)
  parts.push(
    tag(
      "text",
      {
        x: 22,
        y: px((top + bottom) / 2),
        "text-anchor": "middle",
        "font-size": 12,
        fill: "#333",
        transform: `rotate(-90 22 ${px((top + bottom) / 2)})`,
      },
      "evaluations"
    )
  )

  cells.forEach((cell, index) => {
    const x0 = left + band * index
    const barX = x0 + (band - barWidth) / 2
    const barY = yScale(cell.meanEvals)
    parts.push(
      tag("rect", {
        class: "bar",
        "data-cell": cell.cellId,
        "data-mean": String(cell.meanEvals),
        "data-reps": cell.reps,
        x: px(barX),
        y: px(barY),
        width: px(barWidth),
        height: px(bottom - barY),
        fill: seriesColor(index),
        "fill-opacity": 0.82,
      })
    )
    parts.push(
      tag(
        "text",
        { x: px(x0 + band / 2), y: px(barY - 6), "text-anchor": "middle", "font-size": 11, fill: "#222" },
        formatCount(cell.meanEvals)
      )
    )
    if (cell.lowerBound !== null) {
      const lbY = yScale(cell.lowerBound)
      parts.push(
        tag("line", {
          class: "bound",
          "data-cell": cell.cellId,
          "data-lb": String(cell.lowerBound),
          x1: px(x0 + band * 0.08),
          y1: px(lbY),
          x2: px(x0 + band * 0.92),
          y2: px(lbY),
          stroke: "#222",
          "stroke-width": 1.4,
          "stroke-dasharray": "5 3",
        })
      )
    }
    const labelY = bottom + 16
    const label = `n=${cell.n} N=${cell.N}`
    parts.push(
      tag(
        "text",
        { x: px(x0 + band / 2), y: px(labelY), "text-anchor": "middle", "font-size": 11, fill: "#333" },
        escapeXml(label)
      )
    )
    const subLabel = cell.k >= 1 ? `k=${cell.k}` : ""
    if (subLabel !== "") {
      parts.push(
        tag(
          "text",
          { x: px(x0 + band / 2), y: px(labelY + 14), "text-anchor": "middle", "font-size": 10, fill: "#666" },
          subLabel
        )
      )
    }
  })

  parts.push(
    tag(
      "text",
      { x: px(left), y: px(height - 10), "font-size": 10, fill: "#555" },
      "dashed marker: closed-form floor (3(e-1)/8) N n^k"
    )
  )

  return { svg: wrapSvg(width, height, parts.join("\n")), table: formatTable(cells), warnings, cells }
}
