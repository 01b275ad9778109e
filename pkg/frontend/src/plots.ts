import { writeFileSync } from "node:fs";
import { readCsv, column, Table } from "./csv.js";
import { readVtk } from "./vtk.js";
import { figure, PanelSpec, Series, PALETTE, colormap } from "./svg.js";
import { InputError } from "./errors.js";

const VARS = ["rho", "u", "v", "p"] as const;

function leastSquaresSlope(logx: number[], logy: number[]): number {
  const n = logx.length;
  const mx = logx.reduce((a, b) => a + b, 0) / n;
  const my = logy.reduce((a, b) => a + b, 0) / n;
  let num = 0, den = 0;
  for (let i = 0; i < n; i++) {
    num += (logx[i] - mx) * (logy[i] - my);
    den += (logx[i] - mx) ** 2;
  }
  if (den === 0) throw new InputError("mesh sizes are all identical");
  return num / den;
}

/** Log-log error vs mesh size plus error vs CPU time, with a reference
 *  slope triangle for the fitted order. */
export function plotConvergence(inPath: string, outPath: string): void {
  const t = readCsv(inPath, ["order_rho"]);
  const h = column(t, "h", inPath);
  if (h.length < 2) throw new InputError(`need at least 2 rows in ${inPath}`);
  if (h.some((v) => v <= 0)) throw new InputError(`non-positive h in ${inPath}`);

  const errCols = VARS.map((v) => `L2_${v}`).filter((c) => t.columns.has(c));
  if (errCols.length === 0)
    throw new InputError(`no L2_* error columns in ${inPath}`);
  for (const c of errCols)
    if (column(t, c, inPath).some((v) => v <= 0))
      throw new InputError(`non-positive error in column ${c} of ${inPath}`);

  const rhoCol = t.columns.has("L2_rho") ? "L2_rho" : errCols[0];
  const rho = column(t, rhoCol, inPath);
  const slope = leastSquaresSlope(h.map(Math.log), rho.map(Math.log));

  const mkSeries = (xs: number[]): Series[] =>
    errCols.map((c, k) => ({
      x: xs,
      y: t.columns.get(c)!,
      label: c,
      color: PALETTE[k],
      mode: "both" as const,
    }));

  // reference slope segment anchored to the density curve
  const refSlope = Math.max(1, Math.round(slope));
  const hRef = [h[h.length - 1], h[0]];
  const eRef = [rho[rho.length - 1], rho[rho.length - 1] * Math.pow(h[0] / h[h.length - 1], refSlope)];

  const panels: PanelSpec[] = [
    {
      title: `error vs mesh size  (fit ${slope.toFixed(2)}, ref ${refSlope})`,
      xLabel: "h", yLabel: "L2 error", xLog: true, yLog: true,
      series: [
        ...mkSeries(h),
        { x: hRef, y: eRef, color: "#888", dash: "4 3", label: `slope ${refSlope}` },
      ],
    },
  ];
  if (t.columns.has("cpu_s")) {
    const cpu = column(t, "cpu_s", inPath);
    if (cpu.every((v) => v > 0))
      panels.push({
        title: "error vs CPU time",
        xLabel: "CPU [s]", yLabel: "L2 error", xLog: true, yLog: true,
        series: mkSeries(cpu),
      });
  }
  writeFileSync(outPath, figure(panels));
}

function cutAbscissa(t: Table, path: string): number[] {
  return column(t, "s", path);
}

/** Overlay the sampled solution (scatter) against the exact profile
 *  (line), one panel per primitive variable present. */
export function plotCut(inPath: string, outPath: string, exactPath?: string): void {
  const t = readCsv(inPath);
  const s = cutAbscissa(t, inPath);
  const present = VARS.filter((v) => t.columns.has(v));
  if (present.length === 0)
    throw new InputError(`no variable columns (rho,u,v,p) in ${inPath}`);

  // exact values: either exact_* columns inline or a second file sharing
  // the abscissa
  let exact: Table | null = null;
  let exactSource = inPath;
  if (exactPath) {
    exact = readCsv(exactPath);
    exactSource = exactPath;
    const se = cutAbscissa(exact, exactPath);
    if (se.length !== s.length || se.some((v, i) => Math.abs(v - s[i]) > 1e-9))
      throw new InputError(
        `abscissa mismatch between ${inPath} and ${exactPath}`,
      );
  } else if (VARS.some((v) => t.columns.has(`exact_${v}`))) {
    exact = t;
  } else {
    process.stderr.write("warning: no exact profile available, plotting numerical data only\n");
  }

  const panels: PanelSpec[] = present.map((v) => {
    const series: Series[] = [];
    if (exact) {
      const ename = exact === t ? `exact_${v}` : exact.columns.has(`exact_${v}`) ? `exact_${v}` : v;
      if (exact.columns.has(ename))
        series.push({ x: s, y: column(exact, ename, exactSource), label: "exact", color: "#888", mode: "line" });
    }
    series.push({ x: s, y: column(t, v, inPath), label: "numerical", color: PALETTE[0], mode: "scatter" });
    return { title: v, xLabel: "s", yLabel: v, series };
  });
  writeFileSync(outPath, figure(panels, 260, 220));
}

function renderTriangles(
  pts: Float64Array, tris: Uint32Array, fill: (c: number) => string, outPath: string,
): void {
  let [x0, y0, x1, y1] = [Infinity, Infinity, -Infinity, -Infinity];
  for (let p = 0; p < pts.length / 2; p++) {
    x0 = Math.min(x0, pts[2 * p]); x1 = Math.max(x1, pts[2 * p]);
    y0 = Math.min(y0, pts[2 * p + 1]); y1 = Math.max(y1, pts[2 * p + 1]);
  }
  const W = 640;
  const H = Math.max(64, Math.round((W * (y1 - y0)) / (x1 - x0 || 1)));
  const px = (x: number) => ((x - x0) / (x1 - x0 || 1)) * W;
  const py = (y: number) => H - ((y - y0) / (y1 - y0 || 1)) * H;
  const parts: string[] = [];
  for (let c = 0; c < tris.length / 3; c++) {
    const [a, b, d] = [tris[3 * c], tris[3 * c + 1], tris[3 * c + 2]];
    if (a === b || b === d) continue; // degenerate placeholder cells
    const pg = [a, b, d]
      .map((v) => `${px(pts[2 * v]).toFixed(1)},${py(pts[2 * v + 1]).toFixed(1)}`)
      .join(" ");
    parts.push(`<polygon points="${pg}" fill="${fill(c)}" stroke="none"/>`);
  }
  const svg = `<svg xmlns="http://www.w3.org/2000/svg" width="${W}" height="${H}">\n<rect width="${W}" height="${H}" fill="white"/>\n${parts.join("\n")}\n</svg>\n`;
  writeFileSync(outPath, svg);
}

/** Filled-triangle pseudocolor map of one nodal field from a VTK file. */
export function plotContour(inPath: string, outPath: string, fieldName = "rho"): void {
  const g = readVtk(inPath);
  const f = g.scalars.get(fieldName);
  if (!f)
    throw new InputError(
      `field ${JSON.stringify(fieldName)} not in ${inPath} (have: ${[...g.scalars.keys()].join(", ")})`,
    );
  let lo = Infinity, hi = -Infinity;
  for (const v of f) { lo = Math.min(lo, v); hi = Math.max(hi, v); }
  const span = hi - lo || 1;
  renderTriangles(g.points, g.triangles, (c) => {
    const m = (f[g.triangles[3 * c]] + f[g.triangles[3 * c + 1]] + f[g.triangles[3 * c + 2]]) / 3;
    return colormap((m - lo) / span);
  }, outPath);
}

/** Map of limiter-activated regions: beta > 0 shown in red. */
export function plotTroubled(inPath: string, outPath: string): void {
  const g = readVtk(inPath);
  const beta = g.scalars.get("beta");
  if (!beta) throw new InputError(`field "beta" not in ${inPath}`);
  renderTriangles(g.points, g.triangles, (c) => {
    const m = Math.max(beta[g.triangles[3 * c]], beta[g.triangles[3 * c + 1]], beta[g.triangles[3 * c + 2]]);
    return m > 0 ? "#d62728" : "#e8e8e8";
  }, outPath);
}
