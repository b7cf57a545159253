export function escapeXml(text: string): string {
  return text
    .replace(/&/g, "&amp;")
    .replace(/</g, "&lt;")
    .replace(/>/g, "&gt;")
    .replace(/"/g, "&quot;")
    .replace(/'/g, "&apos;")
}

/** Pixel coordinates get two decimals; data-* attributes keep full precision. */
export function px(value: number): string {
  return value.toFixed(2)
}

export function attrs(pairs: Record<string, string | number>): string {
  return Object.entries(pairs)
    .map(([key, value]) => `${key}="${escapeXml(String(value))}"`)
    .join(" ")
}

export function tag(name: string, pairs: Record<string, string | number>, body = ""): string {
  const head = `<${name} ${attrs(pairs)}`
  return body === "" ? `${head}/>` : `${head}>${body}</${name}>`
}

export interface Margins {
  top: number
  right: number
  bottom: number
  left: number
}

export function wrapSvg(width: number, height: number, content: string): string {
  return (
    `<svg xmlns="http://www.w3.org/2000/svg" width="${width}" height="${height}" ` +
    `viewBox="0 0 ${width} ${height}" font-family="Helvetica, Arial, sans-serif">\n` +
    content +
    "\n</svg>\n"
  )
}

export const PALETTE = ["#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b"]

export function seriesColor(index: number): string {
  return PALETTE[index % PALETTE.length]!
}
