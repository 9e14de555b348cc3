/**
 * Batch figure renderer.
 *
 * Usage: render_all --data-dir DIR --out-dir DIR [--svg]
 *
 * Reads the CSV sweeps for every cataloged figure from the data
 * directory and writes one 1200x800 image per figure into the output
 * directory.  Any missing or malformed input is reported and the exit
 * code is nonzero, but the remaining figures still render.
 */

import { pathToFileURL } from "node:url";

import { renderAll } from "./render.js";

export function parseArgs(argv: string[]): {
  dataDir: string;
  outDir: string;
  preferSvg: boolean;
} {
  let dataDir: string | undefined;
  let outDir: string | undefined;
  let preferSvg = false;
  for (let i = 0; i < argv.length; i++) {
    const arg = argv[i];
    if (arg === "--data-dir") {
      dataDir = argv[++i];
    } else if (arg === "--out-dir") {
      outDir = argv[++i];
    } else if (arg === "--svg") {
      preferSvg = true;
    } else {
      throw new Error(`unknown argument ${arg}`);
    }
  }
  if (dataDir === undefined || outDir === undefined) {
    throw new Error("usage: render_all --data-dir DIR --out-dir DIR [--svg]");
  }
  return { dataDir, outDir, preferSvg };
}

export function main(argv: string[]): number {
  let args;
  try {
    args = parseArgs(argv);
  } catch (error) {
    console.error((error as Error).message);
    return 2;
  }
  const outcome = renderAll(args.dataDir, args.outDir, { preferSvg: args.preferSvg });
  for (const file of outcome.written) {
    console.log(`wrote ${file}`);
  }
  for (const failure of outcome.failures) {
    console.error(`${failure.id}: ${failure.message}`);
  }
  console.log(
    `${outcome.written.length} figures rendered, ${outcome.failures.length} failed`,
  );
  return outcome.failures.length === 0 ? 0 : 1;
}

const invokedDirectly =
  process.argv[1] !== undefined &&
  import.meta.url === pathToFileURL(process.argv[1]).href;
if (invokedDirectly) {
  process.exitCode = main(process.argv.slice(2));
}
