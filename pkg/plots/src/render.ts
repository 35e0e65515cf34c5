import * as fs from "fs";
import * as path from "path";

import { FigureKind, render } from "./figures";
import { loadSeries } from "./schema";

const KINDS: FigureKind[] = ["exchange", "phase-portrait", "drift", "residual-scaling"];

function usage(): string {
  return "usage: render --kind <exchange|phase-portrait|drift|residual-scaling> --in <csv...> --out <svg>";
}

export function main(argv: string[]): number {
  let kind: string | null = null;
  const inputs: string[] = [];
  let out: string | null = null;
  for (let i = 0; i < argv.length; i += 1) {
    const arg = argv[i];
    if (arg === "--kind") {
      kind = argv[++i];
    } else if (arg === "--in") {
      while (i + 1 < argv.length && !argv[i + 1].startsWith("--")) {
        inputs.push(argv[++i]);
      }
    } else if (arg === "--out") {
      out = argv[++i];
    } else {
      process.stderr.write(`unknown argument ${arg}\n${usage()}\n`);
      return 1;
    }
  }
  if (!kind || !KINDS.includes(kind as FigureKind) || inputs.length === 0 || !out) {
    process.stderr.write(usage() + "\n");
    return 1;
  }
  try {
    const series = inputs.map(loadSeries);
    const svg = render(kind as FigureKind, series);
    fs.mkdirSync(path.dirname(path.resolve(out)), { recursive: true });
    fs.writeFileSync(out, svg);
  } catch (err) {
    process.stderr.write(`error: ${(err as Error).message}\n`);
    return 1;
  }
  return 0;
}

if (require.main === module) {
  process.exit(main(process.argv.slice(2)));
}
