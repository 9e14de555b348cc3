/**
 * Typed views of the peakysim CSV outputs.
 *
 * The two headers below are frozen interface contracts with the data
 * producer; a file whose header deviates in any way is rejected rather
 * than guessed at.  Empty cells mean "not produced by that command" and
 * parse to null.
 */

import Papa from "papaparse";

export const ERROR_RATE_COLUMNS = [
  "scheme",
  "coherence",
  "M",
  "nu",
  "K",
  "omega",
  "snr",
  "ebn0_db",
  "pe",
  "pc_s0",
  "pc_s1",
  "pe_mc",
  "mc_stderr",
  "trials",
  "seed",
] as const;

export const EXPONENT_COLUMNS = [
  "scheme",
  "coherence",
  "M",
  "nu",
  "snr",
  "rate_nats",
  "exponent",
  "rho_star",
  "integ_stderr",
] as const;

export interface ErrorRateRow {
  scheme: string;
  coherence: string;
  M: number;
  nu: number;
  K: number;
  omega: number;
  snr: number;
  ebn0_db: number;
  pe: number | null;
  pc_s0: number | null;
  pc_s1: number | null;
  pe_mc: number | null;
  mc_stderr: number | null;
  trials: number | null;
  seed: number | null;
}

export interface ExponentRow {
  scheme: string;
  coherence: string;
  M: number;
  nu: number;
  snr: number;
  rate_nats: number;
  exponent: number;
  rho_star: number | null;
  integ_stderr: number | null;
}

/** Raised for any malformed input file; the message names the problem. */
export class SchemaError extends Error {
  constructor(message: string) {
    super(message);
    this.name = "SchemaError";
  }
}

function requireNumber(raw: string, column: string, line: number): number {
  // the producer writes "inf" for an unbounded Rician K factor
  if (raw === "inf") return Infinity;
  const value = Number(raw);
  if (raw === "" || !Number.isFinite(value)) {
    throw new SchemaError(
      `line ${line}: column ${column} expected a number, got ${JSON.stringify(raw)}`,
    );
  }
  return value;
}

function optionalNumber(raw: string, column: string, line: number): number | null {
  if (raw === "") return null;
  return requireNumber(raw, column, line);
}

function splitRows(
  text: string,
  expected: readonly string[],
  label: string,
): string[][] {
  if (text.trim() === "") {
    throw new SchemaError(`${label}: file is empty`);
  }
  const parsed = Papa.parse<string[]>(text.trim(), { skipEmptyLines: true });
  if (parsed.errors.length > 0) {
    const first = parsed.errors[0]!;
    throw new SchemaError(`${label}: ${first.message} (row ${first.row})`);
  }
  const rows = parsed.data;
  const header = rows[0];
  if (header === undefined) {
    throw new SchemaError(`${label}: file is empty`);
  }
  if (header.join(",") !== expected.join(",")) {
    throw new SchemaError(
      `${label}: header mismatch\n  expected ${expected.join(",")}\n  found    ${header.join(",")}`,
    );
  }
  for (const [index, row] of rows.entries()) {
    if (row.length !== expected.length) {
      throw new SchemaError(
        `${label}: line ${index + 1} has ${row.length} cells, expected ${expected.length}`,
      );
    }
  }
  return rows.slice(1);
}

/** Parse an error-rate sweep (the analytic/simulate CSV schema). */
export function parseErrorRateCsv(text: string, label = "error-rate CSV"): ErrorRateRow[] {
  return splitRows(text, ERROR_RATE_COLUMNS, label).map((cells, index) => {
    const line = index + 2;
    const cell = (i: number) => cells[i] ?? "";
    return {
      scheme: cell(0),
      coherence: cell(1),
      M: requireNumber(cell(2), "M", line),
      nu: requireNumber(cell(3), "nu", line),
      K: requireNumber(cell(4), "K", line),
      omega: requireNumber(cell(5), "omega", line),
      snr: requireNumber(cell(6), "snr", line),
      ebn0_db: requireNumber(cell(7), "ebn0_db", line),
      pe: optionalNumber(cell(8), "pe", line),
      pc_s0: optionalNumber(cell(9), "pc_s0", line),
      pc_s1: optionalNumber(cell(10), "pc_s1", line),
      pe_mc: optionalNumber(cell(11), "pe_mc", line),
      mc_stderr: optionalNumber(cell(12), "mc_stderr", line),
      trials: optionalNumber(cell(13), "trials", line),
      seed: optionalNumber(cell(14), "seed", line),
    };
  });
}

/** Parse a reliability-function sweep (the exponent CSV schema). */
export function parseExponentCsv(text: string, label = "exponent CSV"): ExponentRow[] {
  return splitRows(text, EXPONENT_COLUMNS, label).map((cells, index) => {
    const line = index + 2;
    const cell = (i: number) => cells[i] ?? "";
    return {
      scheme: cell(0),
      coherence: cell(1),
      M: requireNumber(cell(2), "M", line),
      nu: requireNumber(cell(3), "nu", line),
      snr: requireNumber(cell(4), "snr", line),
      rate_nats: requireNumber(cell(5), "rate_nats", line),
      exponent: requireNumber(cell(6), "exponent", line),
      rho_star: optionalNumber(cell(7), "rho_star", line),
      integ_stderr: optionalNumber(cell(8), "integ_stderr", line),
    };
  });
}

/**
 * Group rows into one series per key, preserving first-seen order of
 * keys and row order within each series.
 */
export function groupBy<Row>(rows: Row[], key: (row: Row) => string): Map<string, Row[]> {
  const groups = new Map<string, Row[]>();
  for (const row of rows) {
    const k = key(row);
    const bucket = groups.get(k);
    if (bucket === undefined) {
      groups.set(k, [row]);
    } else {
      bucket.push(row);
    }
  }
  return groups;
}
