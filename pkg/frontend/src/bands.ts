// Band presentation. Labels, boundaries, and classifications all come from
// the service's band table; the only thing owned here is a fixed color ramp
// assigned by position (worst row first), so a renamed or re-cut table would
// still color correctly without any code change.

import type { BandRow } from "./api.js";

export const BAND_COLOR_RAMP: readonly string[] = [
  "#7f1d1d",
  "#b91c1c",
  "#ea580c",
  "#d97706",
  "#ca8a04",
  "#84cc16",
  "#22c55e",
  "#16a34a",
  "#0d9488",
  "#0284c7",
];

/** Map each fetched band label to a ramp color by its row position. */
export function bandColors(bands: readonly BandRow[]): Map<string, string> {
  const colors = new Map<string, string>();
  bands.forEach((band, i) => {
    colors.set(band.label, BAND_COLOR_RAMP[i % BAND_COLOR_RAMP.length]!);
  });
  return colors;
}

export interface GaugeSegment {
  label: string;
  color: string;
  // fraction of the gauge width, from the band's own bounds
  widthPct: number;
}

export function gaugeSegments(bands: readonly BandRow[]): GaugeSegment[] {
  const colors = bandColors(bands);
  return bands.map((band) => ({
    label: band.label,
    color: colors.get(band.label)!,
    widthPct: (band.upper - band.lower) * 100,
  }));
}
