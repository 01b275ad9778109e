import { readFileSync } from "node:fs";
import { InputError } from "./errors.js";

export interface VtkGrid {
  points: Float64Array; // x0 y0 x1 y1 ... (z dropped)
  triangles: Uint32Array; // a0 b0 c0 a1 ...
  scalars: Map<string, Float64Array>; // per-point data
}

/** Parse a legacy ASCII VTK UNSTRUCTURED_GRID with triangle cells. */
export function readVtk(path: string): VtkGrid {
  let text: string;
  try {
    text = readFileSync(path, "utf8");
  } catch {
    throw new InputError(`cannot read input file: ${path}`);
  }
  const tok = text.split(/\s+/).filter((t) => t.length > 0);
  let i = 0;
  const next = (): string => {
    if (i >= tok.length) throw new InputError(`truncated VTK file: ${path}`);
    return tok[i++];
  };
  const nextNum = (what: string): number => {
    const v = Number(next());
    if (Number.isNaN(v)) throw new InputError(`bad ${what} in ${path}`);
    return v;
  };
  const seek = (kw: string): boolean => {
    while (i < tok.length) {
      if (tok[i++] === kw) return true;
    }
    return false;
  };

  if (!seek("POINTS")) throw new InputError(`no POINTS section in ${path}`);
  const nPts = nextNum("point count");
  next(); // dtype
  const points = new Float64Array(2 * nPts);
  for (let p = 0; p < nPts; p++) {
    points[2 * p] = nextNum("coordinate");
    points[2 * p + 1] = nextNum("coordinate");
    nextNum("coordinate"); // z
  }

  if (!seek("CELLS")) throw new InputError(`no CELLS section in ${path}`);
  const nCells = nextNum("cell count");
  nextNum("cell list size");
  const triangles = new Uint32Array(3 * nCells);
  for (let c = 0; c < nCells; c++) {
    const n = nextNum("cell size");
    if (n !== 3)
      throw new InputError(`cell ${c} of ${path} is not a triangle`);
    for (let k = 0; k < 3; k++) {
      const v = nextNum("vertex index");
      if (v < 0 || v >= nPts)
        throw new InputError(`vertex index out of range in ${path}`);
      triangles[3 * c + k] = v;
    }
  }

  const scalars = new Map<string, Float64Array>();
  while (seek("SCALARS")) {
    const name = next();
    next(); // dtype
    if (!seek("default")) break; // LOOKUP_TABLE default
    const arr = new Float64Array(nPts);
    for (let p = 0; p < nPts; p++) arr[p] = nextNum(`scalar ${name}`);
    scalars.set(name, arr);
  }
  if (scalars.size === 0)
    throw new InputError(`no point scalars in ${path}`);
  return { points, triangles, scalars };
}
