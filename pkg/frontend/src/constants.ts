/**
 * Closed-form reference quantities drawn on the charts.
 *
 * These are evaluated here, from scratch, rather than read out of the
 * simulator's CSV output. Matching values across the two independent
 * evaluations is part of the point of the figures.
 */

const E = Math.E

/** Ceiling for the mean occupation of the boundary levels, 4e/(e-1). */
export function occupationCeiling(): number {
  return (4 * E) / (E - 1)
}

/**
 * Lower bound on expected evaluations until full front coverage for the
 * jump-valley benchmark: (3(e-1)/8) * N * n^k.
 */
export function runtimeLowerBound(n: number, k: number, N: number): number {
  return ((3 * (E - 1)) / 8) * N * Math.pow(n, k)
}
