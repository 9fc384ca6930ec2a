/**
 * `plots render --spec <batch.json>` renders every figure in the batch.
 *
 * Relative input/output paths in the spec resolve against the spec file's
 * directory. Exit codes: 0 ok, 2 bad spec, 3 I/O trouble.
 */

import { mkdirSync, readFileSync, writeFileSync } from "fs";
import { dirname, isAbsolute, resolve } from "path";
import { SchemaError } from "./csv.js";
import { FigureSpec, renderFigure } from "./figures.js";

interface Batch {
  figures: FigureSpec[];
}

function resolveAgainst(base: string, path: string): string {
  return isAbsolute(path) ? path : resolve(base, path);
}

export function renderBatch(specPath: string): string[] {
  const base = dirname(resolve(specPath));
  const batch = JSON.parse(readFileSync(specPath, "utf8")) as Batch;
  if (!Array.isArray(batch.figures) || batch.figures.length === 0) {
    throw new SchemaError("spec must contain a non-empty figures array");
  }
  const written: string[] = [];
  for (const fig of batch.figures) {
    const spec: FigureSpec = { ...fig };
    if (spec.kind === "sweep") {
      spec.input = resolveAgainst(base, spec.input);
    } else if (spec.kind === "convergence") {
      spec.inputs = spec.inputs.map((p) => resolveAgainst(base, p));
    } else {
      throw new SchemaError(`unknown figure kind ${JSON.stringify((fig as { kind?: string }).kind)}`);
    }
    const svg = renderFigure(spec);
    const outPath = resolveAgainst(base, fig.out);
    mkdirSync(dirname(outPath), { recursive: true });
    writeFileSync(outPath, svg);
    written.push(outPath);
  }
  return written;
}

export function main(argv: string[]): number {
  if (argv[0] !== "render") {
    console.error("usage: plots render --spec <figures.json>");
    return 2;
  }
  const flag = argv.indexOf("--spec");
  if (flag < 0 || !argv[flag + 1]) {
    console.error("missing --spec <figures.json>");
    return 2;
  }
  try {
    const written = renderBatch(argv[flag + 1]);
    for (const path of written) console.log(path);
    return 0;
  } catch (err) {
    if (err instanceof SchemaError || err instanceof SyntaxError) {
      console.error(`spec error: ${(err as Error).message}`);
      return 2;
    }
    console.error(`i/o error: ${(err as Error).message}`);
    return 3;
  }
}

if (process.argv[1] && process.argv[1].endsWith("cli.js")) {
  process.exit(main(process.argv.slice(2)));
}
