/**
 * Chart assembly and server-side rendering.
 *
 * Strict view layer: every plotted value is read from a CSV cell; the
 * only transformations are grouping rows into curves and dropping
 * points a log axis cannot show.  Charts are rendered headlessly to
 * 1200x800 SVG, and rasterized to PNG when the rasterizer is present.
 */

import * as fs from "node:fs";
import * as path from "node:path";
import { createRequire } from "node:module";
import * as echarts from "echarts";

import {
  FigureSpec,
  FIGURES,
  HEIGHT,
  M_LINE_TYPES,
  NU_COLORS,
  WIDTH,
} from "./figures.js";
import {
  ErrorRateRow,
  ExponentRow,
  SchemaError,
  groupBy,
  parseErrorRateCsv,
  parseExponentCsv,
} from "./schema.js";

export interface Curve {
  label: string;
  nu: number;
  color: string;
  lineType: (typeof M_LINE_TYPES)[number];
  /** [x, y] pairs in file order. */
  points: Array<[number, number]>;
}

function nuColor(nu: number): string {
  const color = NU_COLORS.get(nu);
  if (color === undefined) {
    throw new SchemaError(`no color assigned for duty cycle nu=${nu}`);
  }
  return color;
}

function errorRateCurves(texts: string[], spec: FigureSpec): Curve[] {
  const perSource = texts.map((text, i) =>
    parseErrorRateCsv(text, `${spec.id} source ${spec.sources[i]}`),
  );
  const alphabetSizes = new Set(perSource.flat().map((row) => row.M));
  const curves: Curve[] = [];
  perSource.forEach((rows, sourceIndex) => {
    for (const [key, group] of groupBy(rows, (row) => `${row.M}|${row.nu}`)) {
      const first = group[0]!;
      const points: Array<[number, number]> = [];
      for (const row of group) {
        const y = row.pe ?? row.pe_mc;
        if (y === null) continue;
        if (spec.yScale === "log" && y <= 0) continue;
        points.push([row.ebn0_db, y]);
      }
      curves.push({
        label:
          alphabetSizes.size > 1 ? `M=${first.M}, ν=${first.nu}` : `ν=${first.nu}`,
        nu: first.nu,
        color: nuColor(first.nu),
        lineType: M_LINE_TYPES[sourceIndex % M_LINE_TYPES.length]!,
        points,
      });
      void key;
    }
  });
  return curves;
}

function exponentCurves(texts: string[], spec: FigureSpec): Curve[] {
  const curves: Curve[] = [];
  texts.forEach((text, sourceIndex) => {
    const rows = parseExponentCsv(text, `${spec.id} source ${spec.sources[sourceIndex]}`);
    for (const [, group] of groupBy(rows, (row) => `${row.nu}`)) {
      const first = group[0]!;
      curves.push({
        label: `ν=${first.nu}`,
        nu: first.nu,
        color: nuColor(first.nu),
        lineType: "solid",
        points: group.map((row) => [row.rate_nats, row.exponent]),
      });
    }
  });
  return curves;
}

/** Group file contents into styled curves; rejects empty inputs. */
export function buildCurves(spec: FigureSpec, texts: string[]): Curve[] {
  const curves =
    spec.kind === "error-rate"
      ? errorRateCurves(texts, spec)
      : exponentCurves(texts, spec);
  if (curves.length === 0) {
    throw new SchemaError(`${spec.id}: no series found in input`);
  }
  if (curves.length !== spec.expectedSeries) {
    throw new SchemaError(
      `${spec.id}: expected ${spec.expectedSeries} series, found ${curves.length}`,
    );
  }
  for (const curve of curves) {
    if (curve.points.length === 0) {
      throw new SchemaError(`${spec.id}: series ${curve.label} has no plottable points`);
    }
  }
  return curves;
}

/** Translate a figure spec plus its curves into an echarts option. */
export function buildChartOption(spec: FigureSpec, curves: Curve[]): echarts.EChartsOption {
  const xLabel = spec.kind === "error-rate" ? "Eb/N0 (dB)" : "rate (nats/symbol)";
  const yLabel =
    spec.kind === "error-rate" ? "symbol error probability" : "error exponent";
  return {
    animation: false,
    backgroundColor: "#ffffff",
    title: { text: spec.title, left: "center", top: 12 },
    legend: { orient: "vertical", right: 16, top: 64, data: curves.map((c) => c.label) },
    grid: { left: 90, right: 190, top: 64, bottom: 70 },
    xAxis: {
      type: "value",
      name: xLabel,
      nameLocation: "middle",
      nameGap: 32,
      min: "dataMin",
      max: "dataMax",
    },
    yAxis: {
      type: spec.yScale === "log" ? "log" : "value",
      name: yLabel,
      nameLocation: "middle",
      nameGap: 64,
    },
    series: curves.map((curve) => ({
      type: "line" as const,
      name: curve.label,
      data: curve.points,
      showSymbol: false,
      lineStyle: { width: 2, color: curve.color, type: curve.lineType },
      itemStyle: { color: curve.color },
    })),
  };
}

function readSource(dataDir: string, source: string): string {
  const full = path.join(dataDir, source);
  try {
    return fs.readFileSync(full, "utf-8");
  } catch (error) {
    throw new SchemaError(`missing input ${full}: ${(error as Error).message}`);
  }
}

/** Render one figure to an SVG string (1200x800). */
export function renderFigureSvg(spec: FigureSpec, dataDir: string): string {
  const texts = spec.sources.map((source) => readSource(dataDir, source));
  const curves = buildCurves(spec, texts);
  const chart = echarts.init(null, null, {
    renderer: "svg",
    ssr: true,
    width: WIDTH,
    height: HEIGHT,
  });
  try {
    chart.setOption(buildChartOption(spec, curves));
    return chart.renderToSVGString();
  } finally {
    chart.dispose();
  }
}

type PngRasterizer = (svg: string) => Buffer;

let rasterizer: PngRasterizer | null | undefined;

/** The PNG rasterizer, or null when the native module is unavailable. */
export function pngRasterizer(): PngRasterizer | null {
  if (rasterizer === undefined) {
    try {
      const require = createRequire(import.meta.url);
      const { Resvg } = require("@resvg/resvg-js");
      rasterizer = (svg: string) => Buffer.from(new Resvg(svg).render().asPng());
    } catch {
      rasterizer = null;
    }
  }
  return rasterizer;
}

export interface RenderOutcome {
  written: string[];
  failures: Array<{ id: string; message: string }>;
}

/**
 * Render every cataloged figure from dataDir into outDir.  PNG when the
 * rasterizer is available (unless preferSvg), SVG otherwise.  Failures
 * are collected per figure so one bad input cannot hide the others.
 */
export function renderAll(
  dataDir: string,
  outDir: string,
  options: { preferSvg?: boolean } = {},
): RenderOutcome {
  fs.mkdirSync(outDir, { recursive: true });
  const toPng = options.preferSvg ? null : pngRasterizer();
  const outcome: RenderOutcome = { written: [], failures: [] };
  for (const spec of FIGURES) {
    try {
      const svg = renderFigureSvg(spec, dataDir);
      const target = path.join(outDir, `${spec.id}.${toPng ? "png" : "svg"}`);
      fs.writeFileSync(target, toPng ? toPng(svg) : svg);
      outcome.written.push(target);
    } catch (error) {
      outcome.failures.push({ id: spec.id, message: (error as Error).message });
    }
  }
  return outcome;
}
