import * as fs from "node:fs";
import * as path from "node:path";
import { fileURLToPath } from "node:url";

import { describe, expect, it } from "vitest";

import {
  ERROR_RATE_COLUMNS,
  EXPONENT_COLUMNS,
  SchemaError,
  groupBy,
  parseErrorRateCsv,
  parseExponentCsv,
} from "../src/schema.js";

const FIXTURES = path.join(path.dirname(fileURLToPath(import.meta.url)), "fixtures");

const read = (name: string) => fs.readFileSync(path.join(FIXTURES, name), "utf-8");

describe("error-rate schema", () => {
  it("parses an analytic sweep", () => {
    const rows = parseErrorRateCsv(read("fig01.csv"));
    expect(rows).toHaveLength(25);
    const first = rows[0]!;
    expect(first.scheme).toBe("oopsk");
    expect(first.coherence).toBe("coherent");
    expect(first.M).toBe(4);
    expect(first.K).toBe(0);
    expect(first.pe).toBeGreaterThan(0);
    expect(first.pe).toBeLessThan(1);
    // analytic files carry no simulation cells
    expect(first.pe_mc).toBeNull();
    expect(first.trials).toBeNull();
    expect(first.seed).toBeNull();
  });

  it("understands an unbounded Rician factor", () => {
    const header = ERROR_RATE_COLUMNS.join(",");
    const row = "oopsk,coherent,4,0.5,inf,1.0,1.0,3.0,0.25,,,,,,";
    const rows = parseErrorRateCsv(`${header}\n${row}`);
    expect(rows[0]!.K).toBe(Infinity);
  });

  it("rejects a header mismatch", () => {
    const doctored = read("fig01.csv").replace("scheme,", "modulation,");
    expect(() => parseErrorRateCsv(doctored)).toThrow(SchemaError);
    expect(() => parseErrorRateCsv(doctored)).toThrow(/header mismatch/);
  });

  it("rejects a garbled numeric cell", () => {
    const lines = read("fig01.csv").split("\n");
    lines[3] = lines[3]!.replace(/^oopsk,coherent,4/, "oopsk,coherent,abc");
    expect(() => parseErrorRateCsv(lines.join("\n"))).toThrow(/column M/);
  });

  it("rejects an empty file", () => {
    expect(() => parseErrorRateCsv("")).toThrow(/empty/);
  });

  it("rejects a truncated row", () => {
    const header = ERROR_RATE_COLUMNS.join(",");
    expect(() => parseErrorRateCsv(`${header}\noopsk,coherent,4,0.5`)).toThrow(
      /cells/,
    );
  });
});

describe("exponent schema", () => {
  it("parses a reliability sweep", () => {
    const rows = parseExponentCsv(read("fig10.csv"));
    expect(rows).toHaveLength(18);
    const first = rows[0]!;
    expect(first.scheme).toBe("oofsk");
    expect(first.rate_nats).toBe(0);
    expect(first.exponent).toBeGreaterThanOrEqual(0);
  });

  it("keeps column order as the contract", () => {
    expect(EXPONENT_COLUMNS.join(",")).toBe(
      "scheme,coherence,M,nu,snr,rate_nats,exponent,rho_star,integ_stderr",
    );
    expect(ERROR_RATE_COLUMNS.join(",")).toBe(
      "scheme,coherence,M,nu,K,omega,snr,ebn0_db,pe,pc_s0,pc_s1,pe_mc,mc_stderr,trials,seed",
    );
  });
});

describe("groupBy", () => {
  it("preserves first-seen key order and row order", () => {
    const rows = [
      { k: "b", v: 1 },
      { k: "a", v: 2 },
      { k: "b", v: 3 },
    ];
    const groups = groupBy(rows, (row) => row.k);
    expect([...groups.keys()]).toEqual(["b", "a"]);
    expect(groups.get("b")!.map((row) => row.v)).toEqual([1, 3]);
  });
});
