/**
 * Declarative catalog of the figures this package renders.
 *
 * Each figure names its input CSVs (relative to the data directory),
 * which of the two schemas they follow, and how the curves are styled.
 * The renderer consumes only these specs plus the CSV contents — every
 * number plotted comes straight out of a file.
 */

export type FigureKind = "error-rate" | "exponent";
export type YScale = "log" | "linear";

export interface FigureSpec {
  /** Output stem and identifier, e.g. "fig01". */
  id: string;
  /** Human-readable chart title describing the scenario. */
  title: string;
  /** Which CSV schema the sources follow. */
  kind: FigureKind;
  /** Input CSVs relative to the data directory, in legend order. */
  sources: string[];
  /** Error-rate curves live on a log axis, exponent curves on linear. */
  yScale: YScale;
  /** Curves expected after grouping — a render sanity check. */
  expectedSeries: number;
}

export const WIDTH = 1200;
export const HEIGHT = 800;

/**
 * Fixed color cycle keyed by duty cycle, shared by every figure so the
 * same nu is the same color everywhere.
 */
export const NU_COLORS: ReadonlyMap<number, string> = new Map([
  [1.0, "#1f77b4"],
  [0.8, "#ff7f0e"],
  [0.6, "#2ca02c"],
  [0.5, "#d62728"],
  [0.4, "#9467bd"],
  [0.3, "#8c564b"],
  [0.2, "#e377c2"],
  [0.1, "#17becf"],
  [0.01, "#7f7f7f"],
]);

/** Line dashes distinguish alphabet sizes when a figure mixes them. */
export const M_LINE_TYPES = ["solid", "dashed", "dotted"] as const;

export const FIGURES: FigureSpec[] = [
  {
    id: "fig01",
    title: "4-ary on-off PSK, coherent, Rayleigh fading",
    kind: "error-rate",
    sources: ["fig01.csv"],
    yScale: "log",
    expectedSeries: 5,
  },
  {
    id: "fig02",
    title: "8-ary on-off PSK, coherent, Rayleigh fading",
    kind: "error-rate",
    sources: ["fig02.csv"],
    yScale: "log",
    expectedSeries: 5,
  },
  {
    id: "fig03",
    title: "16-ary on-off FSK, coherent, Rayleigh fading",
    kind: "error-rate",
    sources: ["fig03.csv"],
    yScale: "log",
    expectedSeries: 4,
  },
  {
    id: "fig04",
    title: "On-off PSK, noncoherent, Rician K=10",
    kind: "error-rate",
    sources: ["fig04/fig04_m2.csv", "fig04/fig04_m4.csv", "fig04/fig04_m8.csv"],
    yScale: "log",
    expectedSeries: 15,
  },
  {
    id: "fig05",
    title: "16-ary on-off FSK, noncoherent, Rayleigh fading",
    kind: "error-rate",
    sources: ["fig05.csv"],
    yScale: "log",
    expectedSeries: 6,
  },
  {
    id: "fig06",
    title: "16-ary on-off FSK, noncoherent, Rician K=5",
    kind: "error-rate",
    sources: ["fig06.csv"],
    yScale: "log",
    expectedSeries: 6,
  },
  {
    id: "fig07",
    title: "16-ary on-off PSK, noncoherent, Rician K=1, SNR 0 dB",
    kind: "exponent",
    sources: ["fig07.csv"],
    yScale: "linear",
    expectedSeries: 5,
  },
  {
    id: "fig08",
    title: "16-ary on-off PSK, noncoherent, Rician K=1, SNR 0 dB (mid rates)",
    kind: "exponent",
    sources: ["fig08.csv"],
    yScale: "linear",
    expectedSeries: 5,
  },
  {
    id: "fig09",
    title: "16-ary on-off PSK, noncoherent, Rician K=1, SNR -10 dB",
    kind: "exponent",
    sources: ["fig09.csv"],
    yScale: "linear",
    expectedSeries: 3,
  },
  {
    id: "fig10",
    title: "Binary on-off FSK, noncoherent, Rayleigh fading, SNR 0 dB",
    kind: "exponent",
    sources: ["fig10.csv"],
    yScale: "linear",
    expectedSeries: 6,
  },
  {
    id: "fig11",
    title: "16-ary on-off PSK, coherent, Rician K=1, SNR 0 dB",
    kind: "exponent",
    sources: ["fig11.csv"],
    yScale: "linear",
    expectedSeries: 5,
  },
];
