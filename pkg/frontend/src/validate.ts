/** Client-side validation for the create-trial form.
 *
 * Mirrors the server's configuration constraints so most mistakes are
 * caught before the request; the server response remains authoritative.
 */

import type { TrialConfigInput } from "./api.js";

export interface FieldError {
  field: string;
  message: string;
}

function finite(v: unknown): v is number {
  return typeof v === "number" && Number.isFinite(v);
}

/** Parse one raw form string into a config value, or null when blank. */
export function parseNumberField(raw: string): number | null {
  const trimmed = raw.trim();
  if (trimmed === "") return null;
  const value = Number(trimmed);
  return Number.isFinite(value) ? value : NaN;
}

/** Validate a candidate config; empty list means it can be submitted. */
export function validateConfig(cfg: TrialConfigInput): FieldError[] {
  const errors: FieldError[] = [];
  const requireFinite = (field: keyof TrialConfigInput) => {
    const v = cfg[field];
    if (v !== undefined && !finite(v)) {
      errors.push({ field, message: `${field} must be a finite number` });
      return false;
    }
    return true;
  };

  for (const f of ["mu_A", "mu_B", "beta"] as const) {
    requireFinite(f);
  }
  if (requireFinite("sd") && cfg.sd !== undefined && cfg.sd <= 0) {
    errors.push({ field: "sd", message: "sd must be > 0" });
  }
  if (requireFinite("V") && cfg.V !== undefined && cfg.V <= 0) {
    errors.push({ field: "V", message: "V must be > 0" });
  }
  if (requireFinite("omega") && cfg.omega !== undefined && cfg.omega < 0) {
    errors.push({ field: "omega", message: "omega must be >= 0" });
  }
  for (const f of ["c_A", "c_B", "c_beta"] as const) {
    if (requireFinite(f) && cfg[f] !== undefined && (cfg[f] as number) < 0) {
      errors.push({ field: f, message: `${f} must be >= 0` });
    }
  }
  if (cfg.budget !== undefined) {
    if (!Number.isInteger(cfg.budget) || cfg.budget < 0) {
      errors.push({
        field: "budget",
        message: "budget must be a non-negative integer",
      });
    }
  }
  if (cfg.seed !== undefined && !Number.isInteger(cfg.seed)) {
    errors.push({ field: "seed", message: "seed must be an integer" });
  }
  if (cfg.rule !== undefined && cfg.rule !== "EQ5" && cfg.rule !== "EQ6") {
    errors.push({ field: "rule", message: "rule must be EQ5 or EQ6" });
  }
  if (cfg.bf !== undefined) {
    const { sigma_delta_sq, threshold, lam } = cfg.bf;
    if (lam !== undefined && !finite(lam)) {
      errors.push({ field: "bf", message: "lam must be a finite number" });
    }
    if (sigma_delta_sq !== undefined &&
        (!finite(sigma_delta_sq) || sigma_delta_sq < 0)) {
      errors.push({ field: "bf", message: "sigma_delta_sq must be >= 0" });
    }
    if (threshold !== undefined &&
        (!finite(threshold) || threshold <= 0 || threshold >= 1)) {
      errors.push({
        field: "bf",
        message: "threshold must lie strictly between 0 and 1",
      });
    }
  }
  return errors;
}

/** Validate a covariate entry for the enroll form. */
export function validateCovariate(x: number): FieldError[] {
  if (!finite(x) || x < 0 || x > 1) {
    return [{ field: "x", message: "x must be a number in [0, 1]" }];
  }
  return [];
}

/** Validate an outcome entry for the outcome form. */
export function validateOutcome(y: number): FieldError[] {
  if (!finite(y)) {
    return [{ field: "y", message: "y must be a finite number" }];
  }
  return [];
}
