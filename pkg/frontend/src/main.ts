// Browser entry point: builds the widgets and re-renders them from planner
// state. Everything displayed is lifted verbatim out of service responses.

import { ApiClient } from "./api.js";
import { bandColors, gaugeSegments } from "./bands.js";
import { Planner } from "./planner.js";
import { SLIDER_SPECS, type RegressorName } from "./state.js";

const app = document.getElementById("app");
if (!app) throw new Error("missing #app mount point");

const el = <K extends keyof HTMLElementTagNameMap>(
  tag: K,
  className?: string,
  text?: string,
): HTMLElementTagNameMap[K] => {
  const node = document.createElement(tag);
  if (className) node.className = className;
  if (text !== undefined) node.textContent = text;
  return node;
};

const offlineBanner = el("div", "banner offline hidden",
  "service unreachable - check that the analytics service is running");
const errorStrip = el("div", "banner error hidden");
const coeffSelect = el("select", "coeff-select");
const coeffMeta = el("span", "coeff-meta");
const slidersBox = el("div", "sliders");
const gaugeBox = el("div", "gauge");
const needle = el("div", "needle");
const readout = el("div", "readout");
const outOfRangeBadge = el("span", "badge hidden", "out of range");
const targetBox = el("div", "targets");
const solveForSelect = el("select", "solvefor-select");
const tuneBox = el("div", "tune-result");

const sliderInputs = new Map<RegressorName, HTMLInputElement>();
const sliderValues = new Map<RegressorName, HTMLElement>();

function buildStaticLayout(): void {
  app!.append(offlineBanner, errorStrip);

  const pickerRow = el("div", "row");
  pickerRow.append(el("label", "", "Coefficient set: "), coeffSelect, coeffMeta);
  app!.append(pickerRow);

  for (const spec of SLIDER_SPECS) {
    const row = el("div", "slider-row");
    const input = el("input");
    input.type = "range";
    input.min = String(spec.min);
    input.max = String(spec.max);
    input.step = String(spec.step);
    input.value = String(spec.initial);
    input.addEventListener("input", () => {
      planner.setSlider(spec.name, Number(input.value));
    });
    const value = el("span", "slider-value", String(spec.initial));
    row.append(el("label", "", `${spec.title} (${spec.name})`), input, value);
    slidersBox.append(row);
    sliderInputs.set(spec.name, input);
    sliderValues.set(spec.name, value);
  }
  app!.append(slidersBox);

  gaugeBox.append(needle);
  const gaugeWrap = el("div", "gauge-wrap");
  gaugeWrap.append(gaugeBox, readout, outOfRangeBadge);
  app!.append(gaugeWrap);

  const solveRow = el("div", "row");
  solveRow.append(el("label", "", "Solve for: "), solveForSelect,
    el("span", "", " target band:"), targetBox);
  app!.append(solveRow, tuneBox);

  coeffSelect.addEventListener("change", () => {
    void planner.selectCoefficients(coeffSelect.value);
  });
  solveForSelect.addEventListener("change", () => {
    planner.setSolveFor(solveForSelect.value as RegressorName);
  });
}

function render(): void {
  const state = planner.state;
  offlineBanner.classList.toggle("hidden", !state.offline);
  errorStrip.classList.toggle("hidden", !state.error);
  errorStrip.textContent = state.error ?? "";

  // coefficient picker reflects the listing
  if (coeffSelect.options.length !== state.coefficientSets.length) {
    coeffSelect.replaceChildren(
      ...state.coefficientSets.map((c) => {
        const opt = el("option", "", `${c.coeff_id} (${c.model})`);
        opt.value = c.coeff_id;
        return opt;
      }),
    );
  }
  if (state.selected) {
    coeffSelect.value = state.selected.coeff_id;
    const r2 = state.selected.r_squared;
    coeffMeta.textContent =
      ` fitted ${state.selected.fitted_at}` +
      (r2 === null ? "" : `, r² ${r2.toFixed(3)}`);
  }

  const active = new Set(planner.activeRegressors());
  const interactive = state.selected !== null && !state.offline;
  for (const spec of SLIDER_SPECS) {
    const input = sliderInputs.get(spec.name)!;
    const row = input.parentElement!;
    row.classList.toggle("hidden", !active.has(spec.name));
    input.disabled = !interactive;
    input.value = String(state.sliders[spec.name]);
    sliderValues.get(spec.name)!.textContent = String(state.sliders[spec.name]);
  }

  // solve-for choices follow the active model
  const names = planner.activeRegressors();
  if (solveForSelect.options.length !== names.length) {
    solveForSelect.replaceChildren(
      ...names.map((name) => {
        const opt = el("option", "", name);
        opt.value = name;
        return opt;
      }),
    );
  }
  solveForSelect.value = state.solveFor;

  renderGauge();
  renderTargets(interactive);
  renderTune();
}

function renderGauge(): void {
  const state = planner.state;
  // segments are rebuilt only when the band table arrives
  if (state.bands.length && gaugeBox.childElementCount <= 1) {
    for (const seg of gaugeSegments(state.bands)) {
      const piece = el("div", "segment");
      piece.style.width = `${seg.widthPct}%`;
      piece.style.background = seg.color;
      piece.title = seg.label;
      gaugeBox.insertBefore(piece, needle);
    }
  }
  const p = state.prediction;
  if (!p) {
    readout.textContent = "no prediction yet";
    needle.classList.add("hidden");
    outOfRangeBadge.classList.add("hidden");
    return;
  }
  outOfRangeBadge.classList.toggle("hidden", !p.out_of_range);
  if (p.y_clamped === null) {
    // team model: unbounded metric, no gauge position
    needle.classList.add("hidden");
    readout.textContent = `predicted value ${p.y_raw}`;
    return;
  }
  needle.classList.remove("hidden");
  needle.style.left = `${p.y_clamped * 100}%`;
  const colors = bandColors(state.bands);
  readout.textContent =
    `raw ${p.y_raw}  clamped ${p.y_clamped}` +
    (p.band ? `  band ${p.band}` : "");
  readout.style.color = (p.band && colors.get(p.band)) || "inherit";
}

function renderTargets(interactive: boolean): void {
  const state = planner.state;
  if (targetBox.childElementCount !== state.bands.length) {
    const colors = bandColors(state.bands);
    targetBox.replaceChildren(
      ...state.bands.map((band) => {
        const button = el("button", "target", band.label);
        button.style.borderColor = colors.get(band.label) ?? "#888";
        button.addEventListener("click", () => {
          void planner.solveToBand(band);
        });
        return button;
      }),
    );
  }
  for (const child of targetBox.children) {
    (child as HTMLButtonElement).disabled = !interactive;
  }
}

function renderTune(): void {
  const state = planner.state;
  tuneBox.replaceChildren();
  if (state.tuneMessage) {
    const msg = el("div", state.tune?.feasible === false ? "struck" : "",
      state.tuneMessage);
    tuneBox.append(msg);
  }
  const candidates = state.tune?.integer_candidates;
  if (candidates) {
    const row = el("div", "candidates");
    for (const candidate of candidates) {
      const button = el(
        "button", "candidate",
        `${candidate.value} inspectors -> ${candidate.y_raw}` +
          (candidate.band ? ` (${candidate.band})` : ""),
      );
      if (!candidate.feasible) button.classList.add("struck");
      button.addEventListener("click", () => {
        void planner.applyCandidate(candidate);
      });
      row.append(button);
    }
    tuneBox.append(row);
  }
}

const planner = new Planner(new ApiClient(), render);
buildStaticLayout();
void planner.init();
