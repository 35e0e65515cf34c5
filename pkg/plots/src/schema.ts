import * as fs from "fs";

export const REDUCED_COLUMNS = ["t", "phi1", "K", "H", "het_residual"];
export const TOY_COLUMNS = [
  "t",
  "re_a1", "im_a1", "re_a2", "im_a2", "re_b1", "im_b1", "re_b2", "im_b2",
  "K", "inv1", "inv2", "inv3", "inv4",
];
export const PDE_COLUMNS = [
  "t", "M", "E", "P",
  "I_alpha1", "I_alpha2", "I_beta1", "I_beta2",
  "A_L", "A_H", "apriori_ratio",
];

export type SeriesKind = "reduced" | "toy" | "pde";

export interface Series {
  kind: SeriesKind;
  path: string;
  columns: string[];
  rows: number[][];
  sidecar: Record<string, unknown> | null;
}

const SCHEMAS: Record<SeriesKind, string[]> = {
  reduced: REDUCED_COLUMNS,
  toy: TOY_COLUMNS,
  pde: PDE_COLUMNS,
};

function detectKind(columns: string[]): SeriesKind {
  for (const [kind, expected] of Object.entries(SCHEMAS) as [SeriesKind, string[]][]) {
    if (expected.length === columns.length && expected.every((c, i) => c === columns[i])) {
      return kind;
    }
  }
  // name the first expected-but-missing column of the closest schema
  let best: SeriesKind = "reduced";
  let bestHits = -1;
  for (const [kind, expected] of Object.entries(SCHEMAS) as [SeriesKind, string[]][]) {
    const hits = expected.filter((c) => columns.includes(c)).length;
    if (hits > bestHits) {
      bestHits = hits;
      best = kind;
    }
  }
  const missing = SCHEMAS[best].find((c) => !columns.includes(c));
  throw new Error(
    `unrecognised CSV schema (closest: ${best}); missing column ${missing ?? "?"}`,
  );
}

export function loadSeries(path: string): Series {
  const text = fs.readFileSync(path, "utf-8");
  const lines = text.split(/\r?\n/).filter((line) => line.length > 0);
  if (lines.length < 2) {
    throw new Error(`${path}: CSV needs a header and at least one row`);
  }
  const columns = lines[0].split(",");
  const kind = detectKind(columns);
  const rows = lines.slice(1).map((line) => line.split(",").map(Number));
  for (const row of rows) {
    if (row.length !== columns.length || row.some((v) => Number.isNaN(v))) {
      throw new Error(`${path}: malformed numeric row`);
    }
  }
  let sidecar: Record<string, unknown> | null = null;
  if (fs.existsSync(`${path}.json`)) {
    sidecar = JSON.parse(fs.readFileSync(`${path}.json`, "utf-8"));
  }
  return { kind, path, columns, rows, sidecar };
}

export function column(series: Series, name: string): number[] {
  const idx = series.columns.indexOf(name);
  if (idx < 0) {
    throw new Error(`${series.path}: missing column ${name}`);
  }
  return series.rows.map((row) => row[idx]);
}

/** K(t) per model level: reduced/toy carry K, the PDE carries I_alpha1. */
export function exchangeCurve(series: Series): { label: string; t: number[]; k: number[] } {
  if (series.kind === "pde") {
    return { label: "pde", t: column(series, "t"), k: column(series, "I_alpha1") };
  }
  return { label: series.kind, t: column(series, "t"), k: column(series, "K") };
}
