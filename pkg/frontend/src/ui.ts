/** DOM screens: create-trial form, enroll card, outcome form, banners.
 *
 * Rendering is plain DOM construction; every displayed number is a
 * value the service returned.
 */

import { ApiError, TrialApi } from "./api.js";
import type { TrialConfigInput, TrialView } from "./api.js";
import { bfChart, weightChart } from "./charts.js";
import {
  bannerFor,
  logBfSeries,
  statusLabel,
  summarize,
  weightSeries,
} from "./state.js";
import {
  parseNumberField,
  validateConfig,
  validateCovariate,
  validateOutcome,
} from "./validate.js";
import type { FieldError } from "./validate.js";

const CONFIG_FIELDS: Array<{ name: keyof TrialConfigInput; label: string }> = [
  { name: "mu_A", label: "Arm A mean (mu_A)" },
  { name: "mu_B", label: "Arm B mean (mu_B)" },
  { name: "beta", label: "Covariate coefficient (beta)" },
  { name: "sd", label: "Outcome SD (sd)" },
  { name: "budget", label: "Patient budget" },
  { name: "omega", label: "State-evolution variance (omega)" },
  { name: "c_A", label: "Prior variance, intercept (c_A)" },
  { name: "c_B", label: "Prior variance, arm effect (c_B)" },
  { name: "c_beta", label: "Prior variance, covariate (c_beta)" },
  { name: "V", label: "Observation variance (V)" },
  { name: "seed", label: "Seed" },
];

function el<K extends keyof HTMLElementTagNameMap>(
  tag: K,
  attrs: Record<string, string> = {},
  text?: string,
): HTMLElementTagNameMap[K] {
  const node = document.createElement(tag);
  for (const [k, v] of Object.entries(attrs)) node.setAttribute(k, v);
  if (text !== undefined) node.textContent = text;
  return node;
}

function showErrors(form: HTMLElement, errors: FieldError[]): void {
  form.querySelectorAll(".field-error").forEach((n) => (n.textContent = ""));
  for (const err of errors) {
    const slot = form.querySelector<HTMLElement>(
      `.field-error[data-field="${err.field}"]`,
    );
    if (slot) slot.textContent = err.message;
    else {
      const general = form.querySelector<HTMLElement>(".form-error");
      if (general) general.textContent = `${err.field}: ${err.message}`;
    }
  }
}

export class Console {
  private trialId: string | null = null;

  constructor(
    private readonly api: TrialApi,
    private readonly root: HTMLElement,
  ) {}

  start(): void {
    this.renderCreateForm();
  }

  // -- create-trial screen --------------------------------------------

  private renderCreateForm(): void {
    this.root.replaceChildren();
    const form = el("form", { class: "create-form" });
    form.append(el("h2", {}, "Create trial"));

    for (const f of CONFIG_FIELDS) {
      const row = el("label", { class: "field-row" }, f.label + " ");
      row.append(el("input", { name: f.name, type: "text" }));
      row.append(el("span", {
        class: "field-error",
        "data-field": f.name,
      }));
      form.append(row);
    }
    const ruleRow = el("label", { class: "field-row" }, "Allocation rule ");
    const ruleSel = el("select", { name: "rule" });
    ruleSel.append(el("option", { value: "EQ6" }, "EQ6 (probit weight)"));
    ruleSel.append(el("option", { value: "EQ5" }, "EQ5 (spread ratio)"));
    ruleRow.append(ruleSel);
    ruleRow.append(el("span", { class: "field-error", "data-field": "rule" }));
    form.append(ruleRow);

    const stopRow = el("label", { class: "field-row" }, "Early stopping ");
    const stopBox = el("input", { name: "stopping_enabled", type: "checkbox" });
    (stopBox as HTMLInputElement).checked = true;
    stopRow.append(stopBox);
    form.append(stopRow);

    form.append(el("div", { class: "form-error" }));
    form.append(el("button", { type: "submit" }, "Create"));
    form.addEventListener("submit", (ev) => {
      ev.preventDefault();
      void this.submitCreate(form);
    });
    this.root.append(form);
  }

  private readConfig(form: HTMLElement): TrialConfigInput {
    const cfg: TrialConfigInput = {};
    for (const f of CONFIG_FIELDS) {
      const input = form.querySelector<HTMLInputElement>(
        `input[name="${f.name}"]`,
      );
      if (!input) continue;
      const value = parseNumberField(input.value);
      if (value !== null) (cfg as Record<string, unknown>)[f.name] = value;
    }
    const rule = form.querySelector<HTMLSelectElement>('select[name="rule"]');
    if (rule) cfg.rule = rule.value as "EQ5" | "EQ6";
    const stop = form.querySelector<HTMLInputElement>(
      'input[name="stopping_enabled"]',
    );
    if (stop) cfg.stopping_enabled = stop.checked;
    return cfg;
  }

  private async submitCreate(form: HTMLElement): Promise<void> {
    const cfg = this.readConfig(form);
    const errors = validateConfig(cfg);
    if (errors.length) {
      showErrors(form, errors);
      return;
    }
    try {
      const { trial_id } = await this.api.createTrial(cfg);
      this.trialId = trial_id;
      await this.refresh();
    } catch (err) {
      if (err instanceof ApiError) {
        showErrors(form, [
          { field: err.body.field ?? "form", message: err.body.message },
        ]);
      } else {
        showErrors(form, [{ field: "form", message: String(err) }]);
      }
    }
  }

  // -- live trial screen ------------------------------------------------

  async refresh(): Promise<void> {
    if (!this.trialId) return;
    const view = await this.api.getTrial(this.trialId);
    this.renderTrial(view);
  }

  private renderTrial(view: TrialView): void {
    this.root.replaceChildren();
    const summary = summarize(view);

    const banner = bannerFor(view.status);
    if (banner === "stop") {
      this.root.append(
        el("div", { class: "banner banner-stop" },
           "STOP — decisive evidence reached; enrollment is closed."),
      );
    } else if (banner === "exhausted") {
      this.root.append(
        el("div", { class: "banner banner-exhausted" },
           "Patient budget exhausted; enrollment is closed."),
      );
    }

    this.root.append(el("h2", {}, `Trial ${view.trial_id}`));
    this.root.append(el("p", { class: "status" }, statusLabel(view.status)));
    this.root.append(
      el("p", { class: "summary" },
         `Enrolled ${summary.enrolled}/${summary.budget} — ` +
         `arm A: ${summary.nA}, arm B: ${summary.nB}` +
         (summary.lastBf !== null
           ? ` — latest BF ${summary.lastBf.toPrecision(4)}`
           : "")),
    );

    const charts = el("div", { class: "charts" });
    charts.insertAdjacentHTML("beforeend", weightChart(weightSeries(view)));
    const bfThreshold =
      Number((view.config["bf"] as Record<string, unknown>)?.["threshold"]
             ?? 0.01);
    charts.insertAdjacentHTML(
      "beforeend", bfChart(logBfSeries(view), bfThreshold));
    this.root.append(charts);

    if (view.status === "ENROLLING") this.root.append(this.enrollForm());
    if (view.status === "AWAITING_OUTCOME" && view.pending) {
      this.root.append(this.pendingCard(view));
    }
    this.root.append(this.recordsTable(view));
  }

  private enrollForm(): HTMLElement {
    const form = el("form", { class: "enroll-form" });
    form.append(el("h3", {}, "Enroll next patient"));
    const row = el("label", {}, "Covariate x (0..1) ");
    const input = el("input", { name: "x", type: "text" });
    row.append(input);
    row.append(el("span", { class: "field-error", "data-field": "x" }));
    form.append(row);
    form.append(el("div", { class: "form-error" }));
    form.append(el("button", { type: "submit" }, "Enroll"));
    form.addEventListener("submit", (ev) => {
      ev.preventDefault();
      const x = Number(input.value);
      const errors = validateCovariate(x);
      if (errors.length) {
        showErrors(form, errors);
        return;
      }
      void this.doEnroll(form, x);
    });
    return form;
  }

  private async doEnroll(form: HTMLElement, x: number): Promise<void> {
    if (!this.trialId) return;
    try {
      await this.api.enroll(this.trialId, x);
      await this.refresh();
    } catch (err) {
      if (err instanceof ApiError) {
        showErrors(form, [
          { field: err.body.field ?? "form", message: err.body.message },
        ]);
      } else {
        showErrors(form, [{ field: "form", message: String(err) }]);
      }
    }
  }

  private pendingCard(view: TrialView): HTMLElement {
    const pending = view.pending!;
    const card = el("div", { class: "pending-card" });
    card.append(el("h3", {}, `Patient ${pending.t} assigned`));
    card.append(
      el("p", {},
         `Randomization weight wA = ${pending.wA.toFixed(4)} — ` +
         `assigned arm ${pending.arm} (covariate x = ${pending.x}).`),
    );
    const form = el("form", { class: "outcome-form" });
    const row = el("label", {}, "Observed outcome y ");
    const input = el("input", { name: "y", type: "text" });
    row.append(input);
    row.append(el("span", { class: "field-error", "data-field": "y" }));
    form.append(row);
    form.append(el("div", { class: "form-error" }));
    form.append(el("button", { type: "submit" }, "Record outcome"));
    form.addEventListener("submit", (ev) => {
      ev.preventDefault();
      const y = Number(input.value);
      const errors = validateOutcome(y);
      if (errors.length) {
        showErrors(form, errors);
        return;
      }
      void this.doOutcome(form, pending.t, y);
    });
    card.append(form);
    return card;
  }

  private async doOutcome(
    form: HTMLElement,
    t: number,
    y: number,
  ): Promise<void> {
    if (!this.trialId) return;
    try {
      await this.api.recordOutcome(this.trialId, t, y);
      await this.refresh();
    } catch (err) {
      if (err instanceof ApiError) {
        showErrors(form, [
          { field: err.body.field ?? "form", message: err.body.message },
        ]);
      } else {
        showErrors(form, [{ field: "form", message: String(err) }]);
      }
    }
  }

  private recordsTable(view: TrialView): HTMLElement {
    const table = el("table", { class: "records" });
    const head = el("tr");
    for (const h of ["t", "x", "wA", "arm", "y", "BF"]) {
      head.append(el("th", {}, h));
    }
    table.append(head);
    for (const r of view.records.slice().reverse()) {
      const tr = el("tr");
      tr.append(el("td", {}, String(r.t)));
      tr.append(el("td", {}, r.x.toFixed(3)));
      tr.append(el("td", {}, r.wA.toFixed(4)));
      tr.append(el("td", {}, r.arm));
      tr.append(el("td", {}, r.y.toFixed(3)));
      tr.append(el("td", {}, r.bf === null ? "—" : r.bf.toPrecision(4)));
      table.append(tr);
    }
    return table;
  }
}
