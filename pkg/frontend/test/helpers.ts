import { spawnSync } from "node:child_process"
import { mkdtempSync } from "node:fs"
import { tmpdir } from "node:os"
import { join, dirname } from "node:path"
import { fileURLToPath } from "node:url"

const here = dirname(fileURLToPath(import.meta.url))

export const CLI_PATH = join(here, "..", "dist", "cli.js")
export const FIXTURES = join(here, "fixtures")

export function tempDir(): string {
  return mkdtempSync(join(tmpdir(), "figures-"))
}

export function runCli(args: string[]): { stdout: string; stderr: string } {
  const result = runCliRaw(args)
  if (result.status !== 0) {
    throw new Error(`render exited ${result.status}: ${result.stderr}`)
  }
  return { stdout: result.stdout, stderr: result.stderr }
}

export function runCliRaw(args: string[]): { status: number | null; stdout: string; stderr: string } {
  const result = spawnSync(process.execPath, [CLI_PATH, ...args], { encoding: "utf8" })
  return { status: result.status, stdout: result.stdout, stderr: result.stderr }
}

/** Pull every element of a given tag name out of SVG text, as attribute maps. */
export function elements(svg: string, tagName: string): Record<string, string>[] {
  const out: Record<string, string>[] = []
  const tagPattern = new RegExp(`<${tagName}\\b([^>]*?)/?>`, "g")
  const attrPattern = /([\w:-]+)="([^"]*)"/g
  for (const match of svg.matchAll(tagPattern)) {
    const record: Record<string, string> = {}
    for (const attr of match[1]!.matchAll(attrPattern)) {
      record[attr[1]!] = attr[2]!
    }
    out.push(record)
  }
  return out
}

export function byClass(records: Record<string, string>[], cls: string): Record<string, string>[] {
  return records.filter((r) => r.class === cls)
}
