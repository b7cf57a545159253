import { describe, expect, it } from "vitest"
import { readFileSync, writeFileSync } from "node:fs"
import { join } from "node:path"
import Papa from "papaparse"
import { CLI_PATH, FIXTURES, byClass, elements, runCli, runCliRaw, tempDir } from "./helpers.js"

const FIXTURE = join(FIXTURES, "dynamics.csv")

// Recompute the expected per-level means straight from the fixture with a
// separate CSV parse, so the comparison does not share code with the
// renderer's own ingestion path.
function expectedMeans(): Map<string, Map<number, number>> {
  const text = readFileSync(FIXTURE, "utf8")
  const parsed = Papa.parse<Record<string, string>>(text, { header: true, skipEmptyLines: true })
  expect(parsed.errors).toEqual([])
  const sums = new Map<string, Map<number, { sum: number; count: number }>>()
  for (const record of parsed.data) {
    const cell = record.cell_id!
    const level = Number(record.ones_count)
    const value = Number(record.mean_occupation)
    if (Number.isNaN(value)) continue
    if (!sums.has(cell)) sums.set(cell, new Map())
    const acc = sums.get(cell)!.get(level)
    if (acc === undefined) {
      sums.get(cell)!.set(level, { sum: value, count: 1 })
    } else {
      acc.sum += value
      acc.count += 1
    }
  }
  const means = new Map<string, Map<number, number>>()
  for (const [cell, levels] of sums) {
    means.set(cell, new Map([...levels].map(([level, acc]) => [level, acc.sum / acc.count])))
  }
  return means
}

describe("occupation profile round trip", () => {
  it("plots endpoint means that equal the fixture values exactly", () => {
    const out = join(tempDir(), "occupation.svg")
    runCli(["--kind", "occupation", "--in", FIXTURE, "--out", out])
    const svg = readFileSync(out, "utf8")

    const points = byClass(elements(svg, "circle"), "point")
    expect(points.length).toBeGreaterThan(0)

    const plotted = new Map<string, Map<number, number>>()
    for (const point of points) {
      const cell = point["data-cell"]!
      if (!plotted.has(cell)) plotted.set(cell, new Map())
      plotted.get(cell)!.set(Number(point["data-level"]), Number(point["data-mean"]))
    }

    const expected = expectedMeans()
    expect([...plotted.keys()].sort()).toEqual([...expected.keys()].sort())

    for (const [cell, levels] of expected) {
      const series = plotted.get(cell)!
      const sorted = [...levels.keys()].sort((a, b) => a - b)
      const lo = sorted[0]!
      const hi = sorted[sorted.length - 1]!
      // The two endpoint levels are the ones the reference line speaks to.
      expect(series.get(lo)).toBe(levels.get(lo))
      expect(series.get(hi)).toBe(levels.get(hi))
      // Interior levels round-trip exactly as well.
      for (const level of sorted) {
        expect(series.get(level)).toBe(levels.get(level))
      }
    }
  })

  it("draws the reference line at 4e/(e-1) within 1e-6", () => {
    const out = join(tempDir(), "occupation.svg")
    runCli(["--kind", "occupation", "--in", FIXTURE, "--out", out])
    const svg = readFileSync(out, "utf8")

    const reference = byClass(elements(svg, "line"), "reference")
    expect(reference).toHaveLength(1)
    const value = Number(reference[0]!["data-value"])
    const ceiling = (4 * Math.E) / (Math.E - 1)
    expect(Math.abs(value - ceiling)).toBeLessThanOrEqual(1e-6)
  })

  it("is deterministic byte for byte", () => {
    const dir = tempDir()
    const first = join(dir, "a.svg")
    const second = join(dir, "b.svg")
    runCli(["--kind", "occupation", "--in", FIXTURE, "--out", first])
    runCli(["--kind", "occupation", "--in", FIXTURE, "--out", second])
    expect(readFileSync(first, "utf8")).toBe(readFileSync(second, "utf8"))
  })

  it("draws one series per cell with a legend entry each", () => {
    const out = join(tempDir(), "occupation.svg")
    runCli(["--kind", "occupation", "--in", FIXTURE, "--out", out])
    const svg = readFileSync(out, "utf8")
    const seriesGroups = svg.match(/<g class="series"/g) ?? []
    expect(seriesGroups).toHaveLength(3)
    expect(svg).toContain("N=98 random/fair")
    expect(svg).toContain("N=196 random/fair")
    expect(svg).toContain("N=392 random/fair")
    expect(svg).toContain("4e/(e-1)")
  })

  it("skips a cell whose values are all nan, with a warning", () => {
    const dir = tempDir()
    const input = join(dir, "dynamics.csv")
    writeFileSync(
      input,
      "cell_id,rep,ones_count,mean_occupation,retained_snapshots\n" +
        "good_cell,0,2,3.5,4\n" +
        "good_cell,0,3,4.25,4\n" +
        "bad_cell,0,2,nan,0\n" +
        "bad_cell,0,3,nan,0\n"
    )
    const out = join(dir, "occupation.svg")
    const result = runCliRaw(["--kind", "occupation", "--in", input, "--out", out])
    expect(result.status).toBe(0)
    expect(result.stderr).toContain("bad_cell: no finite occupation values, skipped")
    const svg = readFileSync(out, "utf8")
    expect(svg).toContain('data-cell="good_cell"')
    expect(svg).not.toContain('data-cell="bad_cell"')
  })

  it("renders an empty chart with a warning when nothing is plottable", () => {
    const dir = tempDir()
    const input = join(dir, "dynamics.csv")
    writeFileSync(input, "cell_id,rep,ones_count,mean_occupation,retained_snapshots\n")
    const out = join(dir, "occupation.svg")
    const result = runCliRaw(["--kind", "occupation", "--in", input, "--out", out])
    expect(result.status).toBe(0)
    expect(result.stderr).toContain("no plottable cells")
    expect(readFileSync(out, "utf8")).toContain("no data")
  })

  it("runs standalone from the committed fixture", () => {
    // The whole chain in this test only touches the built CLI and the
    // fixture file; nothing imports or shells out to the simulator.
    expect(CLI_PATH.endsWith("dist/cli.js")).toBe(true)
    const out = join(tempDir(), "occupation.svg")
    const result = runCliRaw(["--kind", "occupation", "--in", FIXTURE, "--out", out])
    expect(result.status).toBe(0)
    expect(readFileSync(out, "utf8")).toContain("<svg")
  })
})
