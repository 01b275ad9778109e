import { describe, expect, it, beforeAll } from "vitest";
import { existsSync, mkdtempSync, readFileSync, statSync } from "node:fs";
import { tmpdir } from "node:os";
import { join } from "node:path";
import { run, parseArgs } from "../src/cli.js";
import { readCsv } from "../src/csv.js";
import { readVtk } from "../src/vtk.js";
import { InputError } from "../src/errors.js";

const FX = join(__dirname, "fixtures");
let out: string;

beforeAll(() => {
  out = mkdtempSync(join(tmpdir(), "polydg-plot-"));
});

describe("argument parsing", () => {
  it("rejects unknown kinds and missing flags", () => {
    expect(() => parseArgs(["histogram", "--in", "a", "--out", "b"])).toThrow(InputError);
    expect(() => parseArgs(["cut", "--in", "a"])).toThrow(InputError);
    expect(() => parseArgs(["cut", "--in", "a", "--out", "b", "--nope", "c"])).toThrow(InputError);
    expect(() => parseArgs([])).toThrow(InputError);
  });
  it("accepts the documented forms", () => {
    const a = parseArgs(["contour", "--in", "f.vtk", "--out", "o.svg", "--field", "p"]);
    expect(a.kind).toBe("contour");
    expect(a.field).toBe("p");
  });
});

describe("csv reader", () => {
  it("parses the golden convergence table", () => {
    const t = readCsv(join(FX, "convergence.csv"), ["order_rho"]);
    expect(t.nRows).toBe(3);
    expect(t.columns.get("h")![0]).toBeGreaterThan(t.columns.get("h")![2]);
    expect(t.columns.get("L2_rho")!.every((v) => v > 0)).toBe(true);
  });
  it("rejects malformed and empty files", () => {
    expect(() => readCsv(join(FX, "malformed.csv"))).toThrow(InputError);
    expect(() => readCsv(join(FX, "empty.csv"))).toThrow(InputError);
    expect(() => readCsv(join(FX, "header_only.csv"))).toThrow(InputError);
    expect(() => readCsv(join(FX, "does_not_exist.csv"))).toThrow(InputError);
  });
});

describe("vtk reader", () => {
  it("parses the golden solution file", () => {
    const g = readVtk(join(FX, "solution.vtk"));
    expect(g.points.length / 2).toBeGreaterThan(100);
    expect(g.scalars.has("rho")).toBe(true);
    expect(g.scalars.has("beta")).toBe(true);
    expect(g.triangles.length % 3).toBe(0);
  });
  it("rejects a truncated file", () => {
    expect(() => readVtk(join(FX, "bad.vtk"))).toThrow(InputError);
  });
});

describe("plot convergence", () => {
  it("produces a two-panel SVG and exits 0", () => {
    const o = join(out, "conv.svg");
    expect(run(["convergence", "--in", join(FX, "convergence.csv"), "--out", o])).toBe(0);
    const svg = readFileSync(o, "utf8");
    expect(svg).toContain("<svg");
    expect(svg).toContain("error vs mesh size");
    expect(svg).toContain("error vs CPU time");
    expect(svg).toContain("slope");
  });
  it("exits 2 on malformed input and writes nothing", () => {
    const o = join(out, "never.svg");
    expect(run(["convergence", "--in", join(FX, "malformed.csv"), "--out", o])).toBe(2);
    expect(run(["convergence", "--in", join(FX, "header_only.csv"), "--out", o])).toBe(2);
    expect(existsSync(o)).toBe(false);
  });
  it("is idempotent: rerun produces the identical file", () => {
    const a = join(out, "conv_a.svg");
    const b = join(out, "conv_b.svg");
    run(["convergence", "--in", join(FX, "convergence.csv"), "--out", a]);
    run(["convergence", "--in", join(FX, "convergence.csv"), "--out", b]);
    expect(readFileSync(a, "utf8")).toBe(readFileSync(b, "utf8"));
  });
});

describe("plot cut", () => {
  it("overlays inline exact columns", () => {
    const o = join(out, "cut.svg");
    expect(run(["cut", "--in", join(FX, "cut.csv"), "--out", o])).toBe(0);
    const svg = readFileSync(o, "utf8");
    expect(svg).toContain("exact");
    expect(svg).toContain("numerical");
    // four variable panels
    expect((svg.match(/font-weight="bold"/g) ?? []).length).toBe(4);
  });
  it("accepts a separate exact file with matching abscissa", () => {
    const o = join(out, "cut2.svg");
    expect(run(["cut", "--in", join(FX, "cut_noexact.csv"),
      "--exact", join(FX, "cut_exact.csv"), "--out", o])).toBe(0);
    expect(statSync(o).size).toBeGreaterThan(1000);
  });
  it("exits 2 on abscissa mismatch", () => {
    expect(run(["cut", "--in", join(FX, "cut_noexact.csv"),
      "--exact", join(FX, "cut_mismatch.csv"), "--out", join(out, "x.svg")])).toBe(2);
  });
  it("warns but succeeds without any exact profile", () => {
    const o = join(out, "cut3.svg");
    expect(run(["cut", "--in", join(FX, "cut_noexact.csv"), "--out", o])).toBe(0);
    expect(existsSync(o)).toBe(true);
  });
});

describe("plot contour and troubled maps", () => {
  it("renders a pseudocolor field", () => {
    const o = join(out, "contour.svg");
    expect(run(["contour", "--in", join(FX, "solution.vtk"),
      "--field", "p", "--out", o])).toBe(0);
    expect(readFileSync(o, "utf8")).toContain("<polygon");
  });
  it("exits 2 for a missing field", () => {
    expect(run(["contour", "--in", join(FX, "solution.vtk"),
      "--field", "entropy", "--out", join(out, "x.svg")])).toBe(2);
  });
  it("renders the limiter map from beta", () => {
    const o = join(out, "troubled.svg");
    expect(run(["troubled", "--in", join(FX, "solution.vtk"), "--out", o])).toBe(0);
    expect(readFileSync(o, "utf8")).toContain("<polygon");
  });
  it("exits 2 on a truncated VTK file", () => {
    expect(run(["contour", "--in", join(FX, "bad.vtk"),
      "--out", join(out, "x.svg")])).toBe(2);
  });
});
