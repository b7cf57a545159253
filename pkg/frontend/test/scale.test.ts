import { describe, expect, it } from "vitest"
import { formatCount, linearScale, niceStep, ticks } from "../src/scale.js"
import { occupationCeiling, runtimeLowerBound } from "../src/constants.js"

describe("linear scale", () => {
  it("maps domain endpoints onto range endpoints", () => {
    const scale = linearScale([0, 10], [100, 500])
    expect(scale(0)).toBe(100)
    expect(scale(10)).toBe(500)
    expect(scale(5)).toBe(300)
  })

  it("inverts for a flipped range", () => {
    const scale = linearScale([0, 1], [400, 40])
    expect(scale(0)).toBe(400)
    expect(scale(1)).toBe(40)
  })

  it("collapses a zero-width domain to the range midpoint", () => {
    const scale = linearScale([3, 3], [0, 100])
    expect(scale(3)).toBe(50)
  })
})

describe("tick generation", () => {
  it("rounds steps up the 1/2/5 ladder", () => {
    expect(niceStep(0.7)).toBe(1)
    expect(niceStep(3)).toBe(5)
    expect(niceStep(0.04)).toBe(0.05)
    expect(niceStep(120)).toBe(200)
    expect(niceStep(1)).toBe(1)
  })

  it("covers the domain with round values", () => {
    expect(ticks(0, 7.5, 6)).toEqual([0, 2, 4, 6])
    expect(ticks(0, 100, 5)).toEqual([0, 20, 40, 60, 80, 100])
    expect(ticks(2, 48, 8)).toEqual([10, 20, 30, 40])
  })

  it("degenerates to a single tick for an empty domain", () => {
    expect(ticks(4, 4)).toEqual([4])
  })
})

describe("count formatting", () => {
  it("uses k and M suffixes", () => {
    expect(formatCount(315734)).toBe("316k")
    expect(formatCount(1530000)).toBe("1.53M")
    expect(formatCount(1000000)).toBe("1M")
    expect(formatCount(999)).toBe("999")
    expect(formatCount(2.5)).toBe("2.5")
    expect(formatCount(0)).toBe("0")
  })
})

describe("reference quantities", () => {
  it("evaluates the occupancy ceiling near 6.328", () => {
    expect(occupationCeiling()).toBeGreaterThan(6.3279)
    expect(occupationCeiling()).toBeLessThan(6.3280)
  })

  it("evaluates the runtime floor for the standard grid", () => {
    expect(runtimeLowerBound(50, 2, 98)).toBeGreaterThan(157000)
    expect(runtimeLowerBound(50, 2, 98)).toBeLessThan(158500)
    expect(runtimeLowerBound(50, 2, 196)).toBeCloseTo(2 * runtimeLowerBound(50, 2, 98), 6)
    expect(runtimeLowerBound(30, 3, 108)).toBeGreaterThan(1.8e6)
  })
})
