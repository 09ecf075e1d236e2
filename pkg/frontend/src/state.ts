import type {
  BandRow,
  CoefficientSummary,
  PredictionResponse,
  TuneResponse,
} from "./api.js";

export type RegressorName = "x1" | "x2" | "x3" | "x4" | "x5";

export interface SliderSpec {
  name: RegressorName;
  index: number;
  title: string;
  min: number;
  max: number;
  step: number;
  initial: number;
  integer: boolean;
}

// Domain bounds per regressor; the service re-validates, these only shape
// the widgets. x3 moves in whole inspectors.
export const SLIDER_SPECS: readonly SliderSpec[] = [
  { name: "x1", index: 1, title: "Preparation time (h)", min: 0.1, max: 8, step: 0.1, initial: 1.0, integer: false },
  { name: "x2", index: 2, title: "Meeting time (h)", min: 0, max: 6, step: 0.1, initial: 2.0, integer: false },
  { name: "x3", index: 3, title: "Inspectors", min: 1, max: 10, step: 1, initial: 3, integer: true },
  { name: "x4", index: 4, title: "Team experience (y)", min: 0, max: 15, step: 0.5, initial: 4.0, integer: false },
  { name: "x5", index: 5, title: "Size (log10 FP)", min: 1, max: 4, step: 0.05, initial: 2.0, integer: false },
];

export function specFor(name: RegressorName): SliderSpec {
  const spec = SLIDER_SPECS.find((s) => s.name === name);
  if (!spec) throw new Error(`unknown regressor ${name}`);
  return spec;
}

/** Regressors a model actually uses (process has no size term). */
export function regressorsFor(model: "process" | "team"): RegressorName[] {
  const names = SLIDER_SPECS.map((s) => s.name);
  return model === "team" ? names : names.filter((n) => n !== "x5");
}

export interface PlannerState {
  bands: BandRow[];
  coefficientSets: CoefficientSummary[];
  selected: CoefficientSummary | null;
  sliders: Record<RegressorName, number>;
  solveFor: RegressorName;
  prediction: PredictionResponse | null;
  tune: TuneResponse | null;
  tuneMessage: string | null;
  offline: boolean;
  error: string | null;
  busy: boolean;
}

export function initialState(): PlannerState {
  const sliders = {} as Record<RegressorName, number>;
  for (const spec of SLIDER_SPECS) sliders[spec.name] = spec.initial;
  return {
    bands: [],
    coefficientSets: [],
    selected: null,
    sliders,
    solveFor: "x3",
    prediction: null,
    tune: null,
    tuneMessage: null,
    offline: false,
    error: null,
    busy: false,
  };
}
