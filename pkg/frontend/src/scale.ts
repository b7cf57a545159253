export interface LinearScale {
  (value: number): number
  domain: [number, number]
  range: [number, number]
}

export function linearScale(domain: [number, number], range: [number, number]): LinearScale {
  const [d0, d1] = domain
  const [r0, r1] = range
  const span = d1 - d0
  const scale = ((value: number) => {
    if (span === 0) return (r0 + r1) / 2
    return r0 + ((value - d0) / span) * (r1 - r0)
  }) as LinearScale
  scale.domain = domain
  scale.range = range
  return scale
}

/** Round a raw step up to the nearest 1/2/5 times a power of ten. */
export function niceStep(rawStep: number): number {
  if (!(rawStep > 0)) return 1
  const magnitude = Math.pow(10, Math.floor(Math.log10(rawStep)))
  const residual = rawStep / magnitude
  if (residual <= 1) return magnitude
  if (residual <= 2) return 2 * magnitude
  if (residual <= 5) return 5 * magnitude
  return 10 * magnitude
}

export function ticks(min: number, max: number, targetCount = 6): number[] {
  if (min === max) return [min]
  const step = niceStep((max - min) / Math.max(1, targetCount))
  const start = Math.ceil(min / step) * step
  const values: number[] = []
  // Pad the comparison to keep the top tick despite float drift.
  for (let v = start; v <= max + step * 1e-9; v += step) {
    values.push(Math.abs(v) < step * 1e-9 ? 0 : v)
  }
  return values
}

/** 1530000 -> "1.53M", 315734 -> "316k"; plain numbers below 1000. */
export function formatCount(value: number): string {
  if (!Number.isFinite(value)) return String(value)
  const abs = Math.abs(value)
  if (abs >= 1e6) return trimmed(value / 1e6, 2) + "M"
  if (abs >= 1e3) return trimmed(value / 1e3, 0) + "k"
  if (Number.isInteger(value)) return String(value)
  return trimmed(value, 2)
}

function trimmed(value: number, decimals: number): string {
  const fixed = value.toFixed(decimals)
  return fixed.includes(".") ? fixed.replace(/\.?0+$/, "") : fixed
}
