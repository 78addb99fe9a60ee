/** Pure view-model derivations from a server TrialView.
 *
 * All statistics come from the service; this module only reshapes them
 * for display (labels, banner selection, chart series).
 */

import type { TrialView, TrialStatus } from "./api.js";

export type BannerKind = "none" | "stop" | "exhausted";

export interface ChartSeries {
  /** 1-based patient indices for the points in `values`. */
  ts: number[];
  values: number[];
}

export function bannerFor(status: TrialStatus): BannerKind {
  if (status === "STOPPED_DECISIVE") return "stop";
  if (status === "BUDGET_EXHAUSTED") return "exhausted";
  return "none";
}

export function statusLabel(status: TrialStatus): string {
  switch (status) {
    case "ENROLLING":
      return "Enrolling — next patient may be enrolled";
    case "AWAITING_OUTCOME":
      return "Awaiting outcome for the pending patient";
    case "STOPPED_DECISIVE":
      return "Stopped early — decisive evidence";
    case "BUDGET_EXHAUSTED":
      return "Budget exhausted";
  }
}

/** Randomization-weight series wA(t), straight from the server. */
export function weightSeries(view: TrialView): ChartSeries {
  return {
    ts: view.weight_trajectory.map((_, i) => i + 1),
    values: view.weight_trajectory.slice(),
  };
}

/** log10 Bayes-factor series; patients without a computable BF are
 * skipped rather than plotted as gaps. */
export function logBfSeries(view: TrialView): ChartSeries {
  const ts: number[] = [];
  const values: number[] = [];
  view.bf_trajectory.forEach((bf, i) => {
    if (bf !== null && bf > 0) {
      ts.push(i + 1);
      values.push(Math.log10(bf));
    }
  });
  return { ts, values };
}

export interface TrialSummary {
  enrolled: number;
  nA: number;
  nB: number;
  budget: number;
  lastBf: number | null;
}

export function summarize(view: TrialView): TrialSummary {
  let lastBf: number | null = null;
  for (let i = view.bf_trajectory.length - 1; i >= 0; i--) {
    const bf = view.bf_trajectory[i];
    if (bf !== null && bf !== undefined) {
      lastBf = bf;
      break;
    }
  }
  return {
    enrolled: view.records.length,
    nA: view.nA,
    nB: view.nB,
    budget: Number(view.config["budget"] ?? 0),
    lastBf,
  };
}
