/** Minimal SVG figure builder: panels with linear or log axes. */

export interface Series {
  x: number[];
  y: number[];
  label?: string;
  color?: string;
  /** "line", "scatter", or "both" */
  mode?: "line" | "scatter" | "both";
  dash?: string;
}

export interface PanelSpec {
  title?: string;
  xLabel?: string;
  yLabel?: string;
  xLog?: boolean;
  yLog?: boolean;
  series: Series[];
  /** extra raw SVG injected in data space via the panel's transform */
  annotations?: ((toX: (v: number) => number, toY: (v: number) => number) => string)[];
}

export const PALETTE = ["#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b"];

const esc = (s: string) =>
  s.replace(/&/g, "&amp;").replace(/</g, "&lt;").replace(/>/g, "&gt;");

function niceTicks(lo: number, hi: number, n = 5): number[] {
  if (!(hi > lo)) return [lo];
  const span = hi - lo;
  const step0 = span / n;
  const mag = Math.pow(10, Math.floor(Math.log10(step0)));
  const step = [1, 2, 2.5, 5, 10].map((m) => m * mag).find((s) => span / s <= n + 1) ?? mag * 10;
  const out: number[] = [];
  for (let t = Math.ceil(lo / step) * step; t <= hi + 1e-12 * span; t += step) out.push(t);
  return out;
}

function logTicks(lo: number, hi: number): number[] {
  const out: number[] = [];
  for (let e = Math.floor(lo); e <= Math.ceil(hi); e++) out.push(e);
  return out;
}

const fmt = (v: number): string => {
  if (v === 0) return "0";
  const a = Math.abs(v);
  if (a >= 1e4 || a < 1e-3) return v.toExponential(0);
  return String(Number(v.toPrecision(6)));
};

function renderPanel(p: PanelSpec, ox: number, oy: number, w: number, h: number): string {
  const finite = (vals: number[]) => vals.filter((v) => Number.isFinite(v));
  const tx = (v: number) => (p.xLog ? Math.log10(v) : v);
  const ty = (v: number) => (p.yLog ? Math.log10(v) : v);
  const xs = p.series.flatMap((s) => finite(s.x.map(tx)));
  const ys = p.series.flatMap((s) => finite(s.y.map(ty)));
  let [x0, x1] = [Math.min(...xs), Math.max(...xs)];
  let [y0, y1] = [Math.min(...ys), Math.max(...ys)];
  if (!(x1 > x0)) [x0, x1] = [x0 - 0.5, x1 + 0.5];
  if (!(y1 > y0)) [y0, y1] = [y0 - 0.5, y1 + 0.5];
  const padX = 0.05 * (x1 - x0);
  const padY = 0.08 * (y1 - y0);
  x0 -= padX; x1 += padX; y0 -= padY; y1 += padY;

  const px = (v: number) => ox + ((tx(v) - x0) / (x1 - x0)) * w;
  const py = (v: number) => oy + h - ((ty(v) - y0) / (y1 - y0)) * h;

  const parts: string[] = [];
  parts.push(`<rect x="${ox}" y="${oy}" width="${w}" height="${h}" fill="white" stroke="#444"/>`);

  const xticks = p.xLog ? logTicks(x0, x1) : niceTicks(x0, x1);
  const yticks = p.yLog ? logTicks(y0, y1) : niceTicks(y0, y1);
  for (const t of xticks) {
    const X = ox + ((t - x0) / (x1 - x0)) * w;
    if (X < ox - 1 || X > ox + w + 1) continue;
    parts.push(`<line x1="${X}" y1="${oy}" x2="${X}" y2="${oy + h}" stroke="#ddd"/>`);
    const label = p.xLog ? `1e${t}` : fmt(t);
    parts.push(`<text x="${X}" y="${oy + h + 14}" font-size="10" text-anchor="middle">${label}</text>`);
  }
  for (const t of yticks) {
    const Y = oy + h - ((t - y0) / (y1 - y0)) * h;
    if (Y < oy - 1 || Y > oy + h + 1) continue;
    parts.push(`<line x1="${ox}" y1="${Y}" x2="${ox + w}" y2="${Y}" stroke="#ddd"/>`);
    const label = p.yLog ? `1e${t}` : fmt(t);
    parts.push(`<text x="${ox - 4}" y="${Y + 3}" font-size="10" text-anchor="end">${label}</text>`);
  }

  p.series.forEach((s, k) => {
    const color = s.color ?? PALETTE[k % PALETTE.length];
    const pts = s.x
      .map((xv, j) => [xv, s.y[j]] as const)
      .filter(([xv, yv]) => Number.isFinite(tx(xv)) && Number.isFinite(ty(yv)));
    const mode = s.mode ?? "line";
    if (mode !== "scatter" && pts.length > 1) {
      const d = pts.map(([xv, yv], j) => `${j ? "L" : "M"}${px(xv).toFixed(2)},${py(yv).toFixed(2)}`).join("");
      parts.push(`<path d="${d}" fill="none" stroke="${color}" stroke-width="1.5"${s.dash ? ` stroke-dasharray="${s.dash}"` : ""}/>`);
    }
    if (mode !== "line") {
      for (const [xv, yv] of pts)
        parts.push(`<circle cx="${px(xv).toFixed(2)}" cy="${py(yv).toFixed(2)}" r="2.4" fill="${color}"/>`);
    }
  });

  if (p.annotations) for (const a of p.annotations) parts.push(a(px, py));

  // legend
  const labeled = p.series.filter((s) => s.label);
  labeled.forEach((s, k) => {
    const color = s.color ?? PALETTE[p.series.indexOf(s) % PALETTE.length];
    const Y = oy + 14 + 14 * k;
    parts.push(`<line x1="${ox + w - 86}" y1="${Y - 3}" x2="${ox + w - 66}" y2="${Y - 3}" stroke="${color}" stroke-width="2"/>`);
    parts.push(`<text x="${ox + w - 62}" y="${Y}" font-size="10">${esc(s.label!)}</text>`);
  });

  if (p.title)
    parts.push(`<text x="${ox + w / 2}" y="${oy - 8}" font-size="12" font-weight="bold" text-anchor="middle">${esc(p.title)}</text>`);
  if (p.xLabel)
    parts.push(`<text x="${ox + w / 2}" y="${oy + h + 30}" font-size="11" text-anchor="middle">${esc(p.xLabel)}</text>`);
  if (p.yLabel)
    parts.push(`<text x="${ox - 40}" y="${oy + h / 2}" font-size="11" text-anchor="middle" transform="rotate(-90 ${ox - 40} ${oy + h / 2})">${esc(p.yLabel)}</text>`);
  return parts.join("\n");
}

/** Lay panels out in a row and return the complete SVG document. */
export function figure(panels: PanelSpec[], panelW = 340, panelH = 260): string {
  const mL = 60, mR = 20, mT = 30, mB = 45, gap = 50;
  const W = panels.length * (mL + panelW + mR) + (panels.length - 1) * gap;
  const H = mT + panelH + mB;
  const body = panels
    .map((p, k) => renderPanel(p, k * (mL + panelW + mR + gap) + mL, mT, panelW, panelH))
    .join("\n");
  return `<svg xmlns="http://www.w3.org/2000/svg" width="${W}" height="${H}" font-family="Helvetica,Arial,sans-serif">\n<rect width="${W}" height="${H}" fill="white"/>\n${body}\n</svg>\n`;
}

/** Map v in [0,1] to a perceptual blue-to-yellow ramp. */
export function colormap(v: number): string {
  const t = Math.min(1, Math.max(0, v));
  // coarse viridis approximation via three anchor blends
  const stops = [
    [68, 1, 84],
    [59, 82, 139],
    [33, 145, 140],
    [94, 201, 98],
    [253, 231, 37],
  ];
  const x = t * (stops.length - 1);
  const i = Math.min(stops.length - 2, Math.floor(x));
  const f = x - i;
  const c = stops[i].map((a, k) => Math.round(a + f * (stops[i + 1][k] - a)));
  return `rgb(${c[0]},${c[1]},${c[2]})`;
}
