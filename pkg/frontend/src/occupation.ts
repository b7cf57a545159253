import { DynamicsRow, parseCellId } from "./csv.js"
import { occupationCeiling } from "./constants.js"
import { linearScale, ticks } from "./scale.js"
import { Margins, px, seriesColor, tag, escapeXml, wrapSvg } from "./svg.js"

export interface OccupationOptions {
  width: number
  height: number
}

export const DEFAULT_OCCUPATION_OPTIONS: OccupationOptions = {
  width: 860,
  height: 520,
}

const MARGINS: Margins = { top: 52, right: 190, bottom: 58, left: 66 }

interface SeriesPoint {
  level: number
  mean: number
  reps: number
}

interface Series {
  cellId: string
  label: string
  points: SeriesPoint[]
}

export interface OccupationFigure {
  svg: string
  warnings: string[]
  seriesCount: number
}

function seriesLabel(cellId: string): string {
  const parts = parseCellId(cellId)
  if (parts === null) return cellId
  return `N=${parts.N} ${parts.variant}/${parts.selection}`
}

function seriesSortKey(cellId: string): (string | number)[] {
  const parts = parseCellId(cellId)
  if (parts === null) return [1, cellId]
  return [0, parts.benchmark, parts.n, parts.k, parts.N, parts.variant, parts.selection]
}

function compareKeys(a: (string | number)[], b: (string | number)[]): number {
  for (let i = 0; i < Math.min(a.length, b.length); i++) {
    const x = a[i]!
    const y = b[i]!
    if (x < y) return -1
    if (x > y) return 1
  }
  return a.length - b.length
}

/**
 * Collapse per-repetition rows into one point per (cell, ones-count level):
 * the mean over repetitions, taken in file order so that reruns agree to
 * the last bit. Levels whose every repetition is NaN produce no point.
 */
export function buildSeries(rows: DynamicsRow[]): { series: Series[]; warnings: string[] } {
  const byCell = new Map<string, Map<number, { sum: number; reps: number }>>()
  for (const row of rows) {
    let levels = byCell.get(row.cell_id)
    if (levels === undefined) {
      levels = new Map()
      byCell.set(row.cell_id, levels)
    }
    if (!Number.isFinite(row.mean_occupation)) continue
    const acc = levels.get(row.ones_count)
    if (acc === undefined) {
      levels.set(row.ones_count, { sum: row.mean_occupation, reps: 1 })
    } else {
      acc.sum += row.mean_occupation
      acc.reps += 1
    }
  }

  const warnings: string[] = []
  const series: Series[] = []
  const cellIds = [...byCell.keys()].sort((a, b) => compareKeys(seriesSortKey(a), seriesSortKey(b)))
  for (const cellId of cellIds) {
    const levels = byCell.get(cellId)!
    const points: SeriesPoint[] = [...levels.entries()]
      .map(([level, acc]) => ({ level, mean: acc.sum / acc.reps, reps: acc.reps }))
      .sort((a, b) => a.level - b.level)
    if (points.length === 0) {
      warnings.push(`cell ${cellId}: no finite occupation values, skipped`)
      continue
    }
    series.push({ cellId, label: seriesLabel(cellId), points })
  }
  return { series, warnings }
}

function subtitleFor(series: Series[]): string {
  const settings = new Set<string>()
  for (const s of series) {
    const parts = parseCellId(s.cellId)
    if (parts === null) return ""
    settings.add(`n=${parts.n}, k=${parts.k}`)
  }
  return settings.size === 1 ? [...settings][0]! : ""
}

export function renderOccupationProfile(
  rows: DynamicsRow[],
  options: OccupationOptions = DEFAULT_OCCUPATION_OPTIONS
): OccupationFigure {
  const { width, height } = options
  const { series, warnings } = buildSeries(rows)
  const ceiling = occupationCeiling()

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
      "mean occupation per ones-count level"
    )
  )

  if (series.length === 0) {
    warnings.push("no plottable cells in input")
    parts.push(
      tag(
        "text",
        { x: (left + right) / 2, y: (top + bottom) / 2, "text-anchor": "middle", "font-size": 14, fill: "#666" },
        "no data"
      )
    )
    return { svg: wrapSvg(width, height, parts.join("\n")), warnings, seriesCount: 0 }
  }

  const subtitle = subtitleFor(series)
  if (subtitle !== "") {
    parts.push(
      tag(
        "text",
        { x: (left + right) / 2, y: 42, "text-anchor": "middle", "font-size": 12, fill: "#555" },
        subtitle
      )
    )
  }

  const levels = series.flatMap((s) => s.points.map((p) => p.level))
  const means = series.flatMap((s) => s.points.map((p) => p.mean))
  const xMin = Math.min(...levels)
  const xMax = Math.max(...levels)
  const yMax = Math.max(...means, ceiling) * 1.08

  const xScale = linearScale([xMin, xMax], [left, right])
  const yScale = linearScale([0, yMax], [bottom, top])

  // Grid and axes.
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
        String(Math.round(value * 100) / 100)
      )
    )
  }
  const xTickLabels: string[] = []
  for (const value of ticks(xMin, xMax, 8)) {
    if (!Number.isInteger(value)) continue
    const x = xScale(value)
    xTickLabels.push(
      tag("line", { x1: px(x), y1: px(bottom), x2: px(x), y2: px(bottom + 5), stroke: "#444", "stroke-width": 1 })
    )
    xTickLabels.push(
      tag(
        "text",
        { x: px(x), y: px(bottom + 19), "text-anchor": "middle", "font-size": 11, fill: "#444" },
        String(value)
      )
    )
  }
  parts.push(`<g class="grid">${gridLines.join("")}</g>`)
  parts.push(tag("line", { x1: px(left), y1: px(bottom), x2: px(right), y2: px(bottom), stroke: "#333", "stroke-width": 1 }))
  parts.push(tag("line", { x1: px(left), y1: px(top), x2: px(left), y2: px(bottom), stroke: "#333", "stroke-width": 1 }))
  parts.push(`<g class="ticks">${yTickLabels.join("")}${xTickLabels.join("")}</g>`)
  parts.push(
    tag(
      "text",
      { x: px((left + right) / 2), y: px(height - 16), "text-anchor": "middle", "font-size": 12, fill: "#333" },
      "ones count"
    )
  )
  parts.push(
    tag(
      "text",
      {
        x: 18,
        y: px((top + bottom) / 2),
        "text-anchor": "middle",
        "font-size": 12,
        fill: "#333",
        transform: `rotate(-90 18 ${px((top + bottom) / 2)})`,
      },
      "mean occupation"
    )
  )

  // Predicted ceiling for the boundary levels, recomputed here.
  const refY = yScale(ceiling)
  parts.push(
    tag("line", {
      class: "reference",
      "data-value": String(ceiling),
      x1: px(left),
      y1: px(refY),
      x2: px(right),
      y2: px(refY),
      stroke: "#555",
      "stroke-width": 1,
      "stroke-dasharray": "6 4",
    })
  )
  parts.push(
    tag(
      "text",
      { x: px(right - 4), y: px(refY - 6), "text-anchor": "end", "font-size": 11, fill: "#555" },
      "4e/(e-1)"
    )
  )

  series.forEach((s, index) => {
    const color = seriesColor(index)
    const coords = s.points.map((p) => `${px(xScale(p.level))},${px(yScale(p.mean))}`).join(" ")
    const circles = s.points
      .map((p) =>
        tag("circle", {
          class: "point",
          "data-cell": s.cellId,
          "data-level": p.level,
          "data-mean": String(p.mean),
          "data-reps": p.reps,
          cx: px(xScale(p.level)),
          cy: px(yScale(p.mean)),
          r: 2.4,
          fill: color,
        })
      )
      .join("")
    parts.push(
      `<g class="series" data-cell="${escapeXml(s.cellId)}">` +
        tag("polyline", { points: coords, fill: "none", stroke: color, "stroke-width": 1.6 }) +
        circles +
        "</g>"
    )
  })

  // Legend, to the right of the plot area.
  const legendX = right + 14
  const legend = series.map((s, index) => {
    const y = top + 10 + index * 20
    return (
      tag("line", {
        x1: px(legendX),
        y1: px(y),
        x2: px(legendX + 22),
        y2: px(y),
        stroke: seriesColor(index),
        "stroke-width": 2,
      }) +
      tag(
        "text",
        { x: px(legendX + 28), y: px(y + 4), "font-size": 11, fill: "#333" },
        escapeXml(s.label)
      )
    )
  })
  parts.push(`<g class="legend">${legend.join("")}</g>`)

  return { svg: wrapSvg(width, height, parts.join("\n")), warnings, seriesCount: series.length }
}
