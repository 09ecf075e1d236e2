// Controller for the what-if planner. Owns all state transitions and all
// service traffic; rendering is delegated to a callback so the logic runs
// identically under a browser and under node tests with a mocked client.

import {
  ApiClient,
  ApiError,
  OfflineError,
  type BandRow,
  type IntegerCandidate,
  type PredictionResponse,
  type TuneResponse,
} from "./api.js";
import { debounce, LatestWins, type Debounced } from "./debounce.js";
import {
  initialState,
  regressorsFor,
  specFor,
  type PlannerState,
  type RegressorName,
} from "./state.js";

export type RenderFn = (state: Readonly<PlannerState>) => void;

export interface PlannerOptions {
  debounceMs?: number;
}

export class Planner {
  readonly state: PlannerState = initialState();

  private readonly predictGate = new LatestWins();
  private readonly tuneGate = new LatestWins();
  private readonly requestPredict: Debounced<[]>;

  constructor(
    private readonly api: ApiClient,
    private readonly render: RenderFn,
    options: PlannerOptions = {},
  ) {
    this.requestPredict = debounce(
      () => void this.predictNow(),
      options.debounceMs ?? 150,
    );
  }

  /** Load the band table and coefficient listing; flags offline on failure. */
  async init(): Promise<void> {
    try {
      const [bands, sets] = await Promise.all([
        this.api.bands(),
        this.api.coefficients(),
      ]);
      this.state.bands = bands;
      this.state.coefficientSets = sets;
      this.state.offline = false;
      const first = sets[0];
      if (first) {
        await this.selectCoefficients(first.coeff_id);
        return;
      }
    } catch (err) {
      this.fail(err);
    }
    this.render(this.state);
  }

  async selectCoefficients(coeffId: string): Promise<void> {
    const found = this.state.coefficientSets.find(
      (c) => c.coeff_id === coeffId,
    );
    this.state.selected = found ?? null;
    this.state.prediction = null;
    this.state.tune = null;
    this.state.tuneMessage = null;
    this.state.error = null;
    this.requestPredict.cancel();
    if (found) {
      await this.predictNow();
    } else {
      this.render(this.state);
    }
  }

  /** Slider moved: update immediately, predict after the debounce window. */
  setSlider(name: RegressorName, value: number): void {
    const spec = specFor(name);
    if (value < spec.min || value > spec.max) {
      throw new Error(`${name}=${value} outside [${spec.min}, ${spec.max}]`);
    }
    this.state.sliders[name] = spec.integer ? Math.round(value) : value;
    this.render(this.state);
    if (this.state.selected) this.requestPredict();
  }

  /** The regressor the next solve will adjust. */
  setSolveFor(name: RegressorName): void {
    this.state.solveFor = name;
    this.render(this.state);
  }

  activeRegressors(): RegressorName[] {
    const model = this.state.selected?.model ?? "team";
    return regressorsFor(model);
  }

  private currentX(): Record<string, number> {
    const x: Record<string, number> = {};
    for (const name of this.activeRegressors()) {
      x[name] = this.state.sliders[name];
    }
    return x;
  }

  /** Un-debounced predict at the current slider state (still tokened). */
  async predictNow(): Promise<void> {
    const selected = this.state.selected;
    if (!selected) return;
    const token = this.predictGate.begin();
    this.state.busy = true;
    this.render(this.state);
    try {
      const prediction = await this.api.predict(
        selected.coeff_id,
        this.currentX(),
      );
      if (!this.predictGate.isCurrent(token)) return;
      this.apply((s) => {
        s.prediction = prediction;
      });
    } catch (err) {
      if (!this.predictGate.isCurrent(token)) return;
      this.fail(err);
      this.render(this.state);
    }
  }

  /**
   * Solve the chosen regressor so the prediction lands at the foot of
   * `band`, then confirm with a fresh predict. Infeasible solutions leave
   * the sliders untouched and surface the reason instead.
   */
  async solveToBand(band: BandRow): Promise<void> {
    const selected = this.state.selected;
    if (!selected) return;
    const solveSpec = specFor(this.state.solveFor);
    const fixed: Record<string, number> = {};
    for (const name of this.activeRegressors()) {
      if (name !== this.state.solveFor) fixed[name] = this.state.sliders[name];
    }
    const token = this.tuneGate.begin();
    try {
      const tune = await this.api.tune(
        selected.coeff_id,
        band.lower,
        solveSpec.index,
        fixed,
      );
      if (!this.tuneGate.isCurrent(token)) return;
      this.state.tune = tune;
      this.state.error = null;
      this.state.offline = false;
      if (!tune.feasible) {
        this.state.tuneMessage =
          `solved ${solveSpec.name} = ${tune.value} is outside its ` +
          `allowed range; sliders unchanged`;
        this.render(this.state);
        return;
      }
      this.state.tuneMessage = `${solveSpec.name} solved to ${tune.value}`;
      this.state.sliders[this.state.solveFor] = tune.value;
      await this.predictNow();
    } catch (err) {
      if (!this.tuneGate.isCurrent(token)) return;
      this.fail(err);
      this.render(this.state);
    }
  }

  /** Apply one of the whole-inspector alternatives offered by a solve. */
  async applyCandidate(candidate: IntegerCandidate): Promise<void> {
    this.state.sliders.x3 = candidate.value;
    this.state.tuneMessage = `x3 set to ${candidate.value}`;
    await this.predictNow();
  }

  lastPrediction(): PredictionResponse | null {
    return this.state.prediction;
  }

  lastTune(): TuneResponse | null {
    return this.state.tune;
  }

  private apply(mutate: (s: PlannerState) => void): void {
    mutate(this.state);
    this.state.busy = false;
    this.state.error = null;
    this.state.offline = false;
    this.render(this.state);
  }

  private fail(err: unknown): void {
    this.state.busy = false;
    if (err instanceof OfflineError) {
      this.state.offline = true;
      this.state.error = null;
    } else if (err instanceof ApiError) {
      // the service's error class, verbatim
      this.state.error = `${err.errorClass}: ${err.message}`;
    } else {
      this.state.error = String(err);
    }
  }
}
