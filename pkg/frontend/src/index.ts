export {
  SchemaError,
  parseDynamicsCsv,
  parseRunsCsv,
  parseSweepCsv,
  parseRuntimeCsv,
  parseCellId,
  DYNAMICS_COLUMNS,
  RUNS_COLUMNS,
  SWEEP_COLUMNS,
} from "./csv.js"
export type { DynamicsRow, RunsRow, SweepRow, RuntimeTable, CellIdParts } from "./csv.js"
export { occupationCeiling, runtimeLowerBound } from "./constants.js"
export { linearScale, niceStep, ticks, formatCount } from "./scale.js"
export {
  renderOccupationProfile,
  buildSeries,
  DEFAULT_OCCUPATION_OPTIONS,
} from "./occupation.js"
export type { OccupationFigure, OccupationOptions } from "./occupation.js"
export {
  renderRuntimeComparison,
  buildRuntimeCells,
  DEFAULT_RUNTIME_OPTIONS,
} from "./runtime.js"
export type { RuntimeFigure, RuntimeCell, RuntimeOptions } from "./runtime.js"
