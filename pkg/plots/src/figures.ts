import { Series, column, exchangeCurve } from "./schema";
import { Figure, PALETTE, fmt, plotScales } from "./svg";

export type FigureKind = "exchange" | "phase-portrait" | "drift" | "residual-scaling";

function extent(values: number[]): [number, number] {
  let lo = Infinity;
  let hi = -Infinity;
  for (const v of values) {
    if (!Number.isFinite(v)) continue;
    lo = Math.min(lo, v);
    hi = Math.max(hi, v);
  }
  if (!(hi > lo)) {
    hi = lo + 1;
  }
  return [lo, hi];
}

function pad([lo, hi]: [number, number], frac = 0.06): [number, number] {
  const span = hi - lo;
  return [lo - frac * span, hi + frac * span];
}

/** |K - K(0)| is largest at the half period; exposes the exchange defect. */
export function exchangeDefect(t: number[], k: number[]): { tHalf: number; defect: number } {
  let best = 0;
  let tHalf = t[0];
  for (let i = 0; i < t.length; i += 1) {
    const exc = Math.abs(k[i] - k[0]);
    if (exc > best) {
      best = exc;
      tHalf = t[i];
    }
  }
  const kt = k[t.indexOf(tHalf)];
  return { tHalf, defect: Math.abs(1 - k[0] - kt) };
}

export function renderExchange(inputs: Series[]): string {
  const curves = inputs.map(exchangeCurve);
  const fig = new Figure("low/high intensity exchange K(t) across model levels");
  const tAll = curves.flatMap((c) => c.t);
  const { x, y } = plotScales(pad(extent(tAll)), [0, 1]);
  fig.axes(x, y, "t", "K");
  const entries: { label: string; color: string }[] = [];
  const seen = new Map<string, number>();
  curves.forEach((curve, i) => {
    const n = seen.get(curve.label) ?? 0;
    seen.set(curve.label, n + 1);
    const label = n === 0 ? curve.label : `${curve.label}-${n + 1}`;
    fig.polyline(x, y, curve.t, curve.k, PALETTE[i % PALETTE.length]);
    entries.push({ label, color: PALETTE[i % PALETTE.length] });
  });
  fig.legend(entries);
  const { defect } = exchangeDefect(curves[0].t, curves[0].k);
  fig.note(`|1 - K(0) - K(T)| = ${fmt(defect)} (${curves[0].label})`);
  return fig.render();
}

/** Separatrix K(1-K)(27/4 + 3 sqrt(K(1-K)) cos phi) = 21/16 in (phi, K). */
export function separatrixPoints(samples = 512): { phi: number[]; k: number[] } {
  const phi: number[] = [];
  const k: number[] = [];
  for (let i = 0; i <= samples; i += 1) {
    const kk = 0.02 + (0.96 * i) / samples;
    const q = kk * (1 - kk);
    const c = (21 / 16 / q - 27 / 4) / (3 * Math.sqrt(q));
    if (c < -1 || c > 1) continue;
    phi.push(Math.acos(c));
    k.push(kk);
  }
  return { phi, k };
}

export function residualOnSeparatrix(phi: number, k: number): number {
  const q = k * (1 - k);
  return q * (27 / 4 + 3 * Math.sqrt(q) * Math.cos(phi)) - 21 / 16;
}

function wrapAngle(a: number): number {
  let v = (a + Math.PI) % (2 * Math.PI);
  if (v < 0) v += 2 * Math.PI;
  return v - Math.PI;
}

export function renderPhasePortrait(inputs: Series[]): string {
  const reduced = inputs.find((s) => s.kind === "reduced");
  if (!reduced) {
    throw new Error("phase-portrait needs a reduced-series CSV");
  }
  const fig = new Figure("planar orbit with the heteroclinic level set");
  const { x, y } = plotScales([-Math.PI, Math.PI], [0, 1]);
  fig.axes(x, y, "phi1 (wrapped)", "K");
  const sep = separatrixPoints();
  fig.polyline(x, y, sep.phi, sep.k, "#888888", true);
  fig.polyline(x, y, sep.phi.map((p) => -p), sep.k, "#888888", true);
  const phi = column(reduced, "phi1").map(wrapAngle);
  const k = column(reduced, "K");
  // break the polyline at wrap jumps so no spurious horizontal strokes appear
  let segPhi: number[] = [];
  let segK: number[] = [];
  for (let i = 0; i < phi.length; i += 1) {
    if (i > 0 && Math.abs(phi[i] - phi[i - 1]) > Math.PI) {
      fig.polyline(x, y, segPhi, segK, PALETTE[0]);
      segPhi = [];
      segK = [];
    }
    segPhi.push(phi[i]);
    segK.push(k[i]);
  }
  fig.polyline(x, y, segPhi, segK, PALETTE[0]);
  for (const [pe, ke] of [[0, 0.5], [Math.PI, 0.5], [-Math.PI, 0.5]] as const) {
    fig.marker(x, y, pe, ke, "#333333");
  }
  fig.legend([
    { label: "orbit", color: PALETTE[0] },
    { label: "separatrix", color: "#888888" },
  ]);
  return fig.render();
}

const DRIFT_FLOOR = 1e-18;

export function renderDrift(inputs: Series[]): string {
  const pde = inputs.find((s) => s.kind === "pde");
  if (!pde) {
    throw new Error("drift needs a pde-series CSV");
  }
  const t = column(pde, "t");
  const fig = new Figure("conserved-functional relative drift");
  const series = (["M", "E", "P"] as const).map((name) => {
    const vals = column(pde, name);
    const scale = Math.max(Math.abs(vals[0]), DRIFT_FLOOR);
    return {
      name,
      drift: vals.map((v) => Math.max(Math.abs(v - vals[0]) / scale, DRIFT_FLOOR)),
    };
  });
  const hi = Math.max(...series.flatMap((s) => s.drift), 1e-12);
  const { x, y } = plotScales(pad(extent(t)), [DRIFT_FLOOR, hi * 10]);
  y.log = true;
  const decades: number[] = [];
  for (let e = -18; e <= Math.ceil(Math.log10(hi * 10)); e += 3) {
    decades.push(Math.pow(10, e));
  }
  fig.axes(x, y, "t", "relative drift", decades);
  series.forEach((s, i) => fig.polyline(x, y, t, s.drift, PALETTE[i]));
  fig.legend(series.map((s, i) => ({ label: s.name, color: PALETTE[i] })));
  return fig.render();
}

function mStarOf(series: Series): number {
  const cfg = (series.sidecar as { config?: { m?: number; n?: number } } | null)?.config;
  if (cfg && typeof cfg.m === "number" && typeof cfg.n === "number") {
    return Math.max(Math.abs(cfg.m), Math.abs(cfg.n));
  }
  return NaN;
}

function deltaOf(series: Series): number {
  const cfg = (series.sidecar as { config?: { delta?: number } } | null)?.config;
  return cfg && typeof cfg.delta === "number" ? cfg.delta : 0.5;
}

export function renderResidualScaling(inputs: Series[]): string {
  const pdes = inputs.filter((s) => s.kind === "pde");
  if (pdes.length === 0) {
    throw new Error("residual-scaling needs pde-series CSVs");
  }
  const fig = new Figure("off-cluster residual norm vs m_star");
  const curves = pdes.map((series) => {
    const mStar = mStarOf(series);
    const delta = deltaOf(series);
    const aLow = column(series, "A_L");
    const aHigh = column(series, "A_H");
    const weighted = aLow.map((v, i) => Math.pow(mStar, delta) * v + aHigh[i]);
    return { mStar, t: column(series, "t"), weighted };
  });
  const tHi = Math.max(...curves.flatMap((c) => c.t));
  const wHi = Math.max(...curves.flatMap((c) => c.weighted), 1e-12);
  const { x, y } = plotScales([0, tHi * 1.06], [0, wHi * 1.1]);
  fig.axes(x, y, "t", "m_star^d A_L + A_H");
  curves.forEach((c, i) => fig.polyline(x, y, c.t, c.weighted, PALETTE[i]));
  fig.legend(curves.map((c, i) => ({
    label: `m_star=${Number.isNaN(c.mStar) ? "?" : c.mStar}`,
    color: PALETTE[i],
  })));
  if (curves.length >= 2) {
    const [a, b] = curves;
    const ratio = Math.max(...a.weighted) / Math.max(...b.weighted);
    const expected = Math.pow(b.mStar / a.mStar, 0.5);
    fig.note(`max-norm ratio = ${fmt(ratio)}; (m2/m1)^(1/2) = ${fmt(expected)}`);
  }
  return fig.render();
}

export function render(kind: FigureKind, inputs: Series[]): string {
  switch (kind) {
    case "exchange":
      return renderExchange(inputs);
    case "phase-portrait":
      return renderPhasePortrait(inputs);
    case "drift":
      return renderDrift(inputs);
    case "residual-scaling":
      return renderResidualScaling(inputs);
    default:
      throw new Error(`unknown figure kind ${kind as string}`);
  }
}
