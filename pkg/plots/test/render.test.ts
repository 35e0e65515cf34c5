import * as fs from "fs";
import * as os from "os";
import * as path from "path";
import { describe, expect, it } from "vitest";

import {
  exchangeDefect,
  render,
  residualOnSeparatrix,
  separatrixPoints,
} from "../src/figures";
import { column, loadSeries } from "../src/schema";
import { main } from "../src/render";

const FIXTURES = path.join(__dirname, "fixtures");
const reducedCsv = path.join(FIXTURES, "reduced.csv");
const toyCsv = path.join(FIXTURES, "toy_gauged.csv");
const pdeCsv = path.join(FIXTURES, "pde.csv");

function tmpFile(name: string): string {
  const dir = fs.mkdtempSync(path.join(os.tmpdir(), "plots-"));
  return path.join(dir, name);
}

describe("schema", () => {
  it("loads and classifies the three series kinds", () => {
    expect(loadSeries(reducedCsv).kind).toBe("reduced");
    expect(loadSeries(toyCsv).kind).toBe("toy");
    expect(loadSeries(pdeCsv).kind).toBe("pde");
  });

  it("refuses a CSV with a mismatched header, naming the column", () => {
    const bad = tmpFile("bad.csv");
    fs.writeFileSync(bad, "t,phi1,K,H\n0,0,0.2,1\n");
    expect(() => loadSeries(bad)).toThrow(/missing column het_residual/);
  });

  it("exposes sidecar configuration", () => {
    const series = loadSeries(pdeCsv);
    expect(series.sidecar).not.toBeNull();
    const cfg = (series.sidecar as { config: { m: number } }).config;
    expect(cfg.m).toBe(5);
  });
});

describe("figure math", () => {
  it("puts the separatrix overlay on the exact level set", () => {
    const { phi, k } = separatrixPoints();
    expect(phi.length).toBeGreaterThan(100);
    for (let i = 0; i < phi.length; i += 1) {
      expect(Math.abs(residualOnSeparatrix(phi[i], k[i]))).toBeLessThan(1e-12);
    }
  });

  it("measures the exchange defect from the curve", () => {
    const series = loadSeries(reducedCsv);
    const { defect } = exchangeDefect(column(series, "t"), column(series, "K"));
    // fixture orbit starts at K0=0.25 inside the separatrix
    expect(defect).toBeLessThan(1e-5);
  });
});

describe("rendering", () => {
  const cases: [string, string[]][] = [
    ["exchange", [reducedCsv, toyCsv, pdeCsv]],
    ["phase-portrait", [reducedCsv]],
    ["drift", [pdeCsv]],
    ["residual-scaling", [pdeCsv]],
  ];

  for (const [kind, inputs] of cases) {
    it(`renders ${kind} deterministically`, () => {
      const series = inputs.map(loadSeries);
      const first = render(kind as never, series);
      const second = render(kind as never, inputs.map(loadSeries));
      expect(first).toBe(second);
      expect(first.startsWith("<svg")).toBe(true);
      expect(first).toContain("</svg>");
      expect(first).not.toMatch(/NaN|Infinity/);
    });
  }

  it("annotates the exchange figure with the defect", () => {
    const svg = render("exchange", [loadSeries(reducedCsv)]);
    expect(svg).toContain("|1 - K(0) - K(T)|");
  });

  it("requires a reduced series for the phase portrait", () => {
    expect(() => render("phase-portrait", [loadSeries(pdeCsv)])).toThrow(
      /needs a reduced-series/,
    );
  });
});

describe("cli", () => {
  it("renders through the command line interface", () => {
    const out = tmpFile("fig.svg");
    const code = main(["--kind", "exchange", "--in", reducedCsv, toyCsv, "--out", out]);
    expect(code).toBe(0);
    const bytes = fs.readFileSync(out, "utf-8");
    expect(bytes).toContain("</svg>");
  });

  it("rejects unknown kinds", () => {
    expect(main(["--kind", "nope", "--in", reducedCsv, "--out", "x.svg"])).toBe(1);
  });

  it("fails cleanly on schema mismatch", () => {
    const bad = tmpFile("bad.csv");
    fs.writeFileSync(bad, "a,b\n1,2\n");
    const out = tmpFile("fig.svg");
    expect(main(["--kind", "drift", "--in", bad, "--out", out])).toBe(1);
  });
});
