/** Minimal deterministic SVG scene: fixed canvas, fixed fonts, no timestamps. */

export const WIDTH = 720;
export const HEIGHT = 480;
export const MARGIN = { left: 72, right: 24, top: 40, bottom: 48 };

export const PALETTE = ["#1f6f8b", "#c0392b", "#7d8f2f", "#6c3f99", "#b8860b"];

export function fmt(value: number): string {
  if (!Number.isFinite(value)) return "0";
  const rounded = Number(value.toPrecision(6));
  return Object.is(rounded, -0) ? "0" : String(rounded);
}

export interface Scale {
  domain: [number, number];
  range: [number, number];
  log?: boolean;
}

export function scaled(scale: Scale, value: number): number {
  const [d0, d1] = scale.domain;
  const [r0, r1] = scale.range;
  const v = scale.log ? Math.log10(value) : value;
  const lo = scale.log ? Math.log10(d0) : d0;
  const hi = scale.log ? Math.log10(d1) : d1;
  const t = hi === lo ? 0.5 : (v - lo) / (hi - lo);
  return r0 + t * (r1 - r0);
}

export function niceTicks(lo: number, hi: number, count = 5): number[] {
  if (!(hi > lo)) return [lo];
  const span = hi - lo;
  const step = Math.pow(10, Math.floor(Math.log10(span / count)));
  const err = (span / count) / step;
  const factor = err >= 7.5 ? 10 : err >= 3.5 ? 5 : err >= 1.5 ? 2 : 1;
  const s = step * factor;
  const start = Math.ceil(lo / s) * s;
  const ticks: number[] = [];
  for (let v = start; v <= hi + 1e-12 * span; v += s) {
    ticks.push(Number(v.toPrecision(12)));
  }
  return ticks;
}

export class Figure {
  private parts: string[] = [];

  constructor(readonly title: string) {
    this.parts.push(
      `<svg xmlns="http://www.w3.org/2000/svg" width="${WIDTH}" height="${HEIGHT}" viewBox="0 0 ${WIDTH} ${HEIGHT}">`,
      `<rect width="${WIDTH}" height="${HEIGHT}" fill="#ffffff"/>`,
      `<text x="${WIDTH / 2}" y="24" font-family="monospace" font-size="14" text-anchor="middle">${title}</text>`,
    );
  }

  axes(x: Scale, y: Scale, xLabel: string, yLabel: string, yTicks?: number[]): void {
    const { left, top } = MARGIN;
    const right = WIDTH - MARGIN.right;
    const bottom = HEIGHT - MARGIN.bottom;
    this.parts.push(
      `<rect x="${left}" y="${top}" width="${right - left}" height="${bottom - top}" fill="none" stroke="#333333"/>`,
    );
    for (const tick of niceTicks(x.domain[0], x.domain[1])) {
      const px = scaled(x, tick);
      this.parts.push(
        `<line x1="${fmt(px)}" y1="${bottom}" x2="${fmt(px)}" y2="${bottom + 4}" stroke="#333333"/>`,
        `<text x="${fmt(px)}" y="${bottom + 18}" font-family="monospace" font-size="10" text-anchor="middle">${fmt(tick)}</text>`,
      );
    }
    const ticks = yTicks ?? niceTicks(y.domain[0], y.domain[1]);
    for (const tick of ticks) {
      const py = scaled(y, tick);
      this.parts.push(
        `<line x1="${left - 4}" y1="${fmt(py)}" x2="${left}" y2="${fmt(py)}" stroke="#333333"/>`,
        `<text x="${left - 8}" y="${fmt(py)}" font-family="monospace" font-size="10" text-anchor="end" dominant-baseline="middle">${fmt(tick)}</text>`,
      );
    }
    this.parts.push(
      `<text x="${(left + right) / 2}" y="${HEIGHT - 12}" font-family="monospace" font-size="12" text-anchor="middle">${xLabel}</text>`,
      `<text x="18" y="${(top + bottom) / 2}" font-family="monospace" font-size="12" text-anchor="middle" transform="rotate(-90 18 ${(top + bottom) / 2})">${yLabel}</text>`,
    );
  }

  polyline(x: Scale, y: Scale, xs: number[], ys: number[], color: string,
           dashed = false): void {
    const pts: string[] = [];
    for (let i = 0; i < xs.length; i += 1) {
      if (!Number.isFinite(xs[i]) || !Number.isFinite(ys[i])) continue;
      pts.push(`${fmt(scaled(x, xs[i]))},${fmt(scaled(y, ys[i]))}`);
    }
    const dash = dashed ? ' stroke-dasharray="6 4"' : "";
    this.parts.push(
      `<polyline points="${pts.join(" ")}" fill="none" stroke="${color}" stroke-width="1.5"${dash}/>`,
    );
  }

  marker(x: Scale, y: Scale, px: number, py: number, color: string): void {
    this.parts.push(
      `<circle cx="${fmt(scaled(x, px))}" cy="${fmt(scaled(y, py))}" r="3.5" fill="${color}"/>`,
    );
  }

  legend(entries: { label: string; color: string }[]): void {
    entries.forEach((entry, i) => {
      const y = MARGIN.top + 16 + 16 * i;
      const x = WIDTH - MARGIN.right - 150;
      this.parts.push(
        `<line x1="${x}" y1="${y - 4}" x2="${x + 24}" y2="${y - 4}" stroke="${entry.color}" stroke-width="2"/>`,
        `<text x="${x + 30}" y="${y}" font-family="monospace" font-size="11">${entry.label}</text>`,
      );
    });
  }

  note(text: string, line = 0): void {
    this.parts.push(
      `<text x="${MARGIN.left + 8}" y="${MARGIN.top + 16 + 14 * line}" font-family="monospace" font-size="11">${text}</text>`,
    );
  }

  render(): string {
    return this.parts.join("\n") + "\n</svg>\n";
  }
}

export function plotScales(xDomain: [number, number], yDomain: [number, number],
                           logY = false): { x: Scale; y: Scale } {
  return {
    x: { domain: xDomain, range: [MARGIN.left, WIDTH - MARGIN.right] },
    y: { domain: yDomain, range: [HEIGHT - MARGIN.bottom, MARGIN.top], log: logY },
  };
}
