#!/usr/bin/env node
/** Plot CLI for solver outputs.
 *
 * Usage:
 *   polydg-plot convergence --in table.csv --out fig.svg
 *   polydg-plot cut         --in cut.csv [--exact exact.csv] --out fig.svg
 *   polydg-plot contour     --in final.vtk [--field p] --out fig.svg
 *   polydg-plot troubled    --in final.vtk --out fig.svg
 *
 * Exit codes: 0 success, 2 bad arguments or malformed input.
 */
import { plotConvergence, plotCut, plotContour, plotTroubled } from "./plots.js";
import { InputError } from "./errors.js";

const KINDS = ["convergence", "cut", "contour", "troubled"] as const;
type Kind = (typeof KINDS)[number];

interface Args {
  kind: Kind;
  in: string;
  out: string;
  exact?: string;
  field?: string;
}

export function parseArgs(argv: string[]): Args {
  if (argv.length === 0) throw new InputError(`usage: polydg-plot <${KINDS.join("|")}> --in FILE --out FILE`);
  const kind = argv[0] as Kind;
  if (!KINDS.includes(kind))
    throw new InputError(`unknown plot kind ${JSON.stringify(argv[0])}; expected one of ${KINDS.join(", ")}`);
  const opts: Record<string, string> = {};
  for (let i = 1; i < argv.length; i += 2) {
    const flag = argv[i];
    if (!flag.startsWith("--") || i + 1 >= argv.length)
      throw new InputError(`bad argument ${JSON.stringify(flag)}`);
    opts[flag.slice(2)] = argv[i + 1];
  }
  for (const k of Object.keys(opts))
    if (!["in", "out", "exact", "field"].includes(k))
      throw new InputError(`unknown option --${k}`);
  if (!opts.in || !opts.out)
    throw new InputError("both --in and --out are required");
  return { kind, in: opts.in, out: opts.out, exact: opts.exact, field: opts.field };
}

export function run(argv: string[]): number {
  try {
    const a = parseArgs(argv);
    switch (a.kind) {
      case "convergence": plotConvergence(a.in, a.out); break;
      case "cut": plotCut(a.in, a.out, a.exact); break;
      case "contour": plotContour(a.in, a.out, a.field ?? "rho"); break;
      case "troubled": plotTroubled(a.in, a.out); break;
    }
    return 0;
  } catch (e) {
    if (e instanceof InputError) {
      process.stderr.write(`error: ${e.message}\n`);
      return 2;
    }
    throw e;
  }
}

const invokedDirectly = process.argv[1] && import.meta.url.endsWith(
  process.argv[1].split("/").pop() ?? "@",
);
if (invokedDirectly) process.exit(run(process.argv.slice(2)));
