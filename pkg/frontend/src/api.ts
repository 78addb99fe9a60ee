/** Typed client for the trial-conduct HTTP service.
 *
 * The console never computes statistics itself: every number rendered
 * comes straight out of these responses.
 */

export interface BfPriors {
  lam?: number;
  sigma_delta_sq?: number;
  threshold?: number;
}

export interface TrialConfigInput {
  mu_A?: number;
  mu_B?: number;
  beta?: number;
  sd?: number;
  budget?: number;
  omega?: number;
  c_A?: number;
  c_B?: number;
  c_beta?: number;
  V?: number;
  rule?: "EQ5" | "EQ6";
  bf?: BfPriors;
  stopping_enabled?: boolean;
  seed?: number;
}

export type TrialStatus =
  | "ENROLLING"
  | "AWAITING_OUTCOME"
  | "STOPPED_DECISIVE"
  | "BUDGET_EXHAUSTED";

export interface PatientRecord {
  t: number;
  x: number;
  wA: number;
  arm: "A" | "B";
  y: number;
  bf: number | null;
}

export interface PendingPatient {
  t: number;
  x: number;
  wA: number;
  arm: "A" | "B";
}

export interface TrialView {
  trial_id: string;
  config: Record<string, unknown>;
  status: TrialStatus;
  records: PatientRecord[];
  pending: PendingPatient | null;
  weight_trajectory: number[];
  bf_trajectory: (number | null)[];
  nA: number;
  nB: number;
}

export interface EnrollResponse {
  t: number;
  wA: number;
  arm: "A" | "B";
  rule: string;
  status: TrialStatus;
}

export interface OutcomeResponse {
  t: number;
  bf: number | null;
  decisive: boolean;
  status: TrialStatus;
  posterior_summary: { m: number[]; C_diag: number[] };
}

export interface ApiErrorBody {
  code: string;
  message: string;
  field?: string;
}

export class ApiError extends Error {
  constructor(
    readonly status: number,
    readonly body: ApiErrorBody,
  ) {
    super(body.message);
  }
}

export type FetchLike = (
  input: string,
  init?: RequestInit,
) => Promise<Response>;

export class TrialApi {
  constructor(
    private readonly baseUrl: string = "",
    private readonly fetchImpl: FetchLike = (...args) => fetch(...args),
  ) {}

  private async request<T>(
    method: string,
    path: string,
    body?: unknown,
  ): Promise<T> {
    const resp = await this.fetchImpl(this.baseUrl + path, {
      method,
      headers: body === undefined ? {} : { "Content-Type": "application/json" },
      body: body === undefined ? undefined : JSON.stringify(body),
    });
    const payload = await resp.json();
    if (!resp.ok) {
      throw new ApiError(resp.status, payload as ApiErrorBody);
    }
    return payload as T;
  }

  healthz(): Promise<{ status: string }> {
    return this.request("GET", "/api/healthz");
  }

  createTrial(config: TrialConfigInput): Promise<{ trial_id: string }> {
    return this.request("POST", "/api/trials", config);
  }

  getTrial(trialId: string): Promise<TrialView> {
    return this.request("GET", `/api/trials/${trialId}`);
  }

  enroll(trialId: string, x: number): Promise<EnrollResponse> {
    return this.request("POST", `/api/trials/${trialId}/patients`, { x });
  }

  recordOutcome(
    trialId: string,
    t: number,
    y: number,
  ): Promise<OutcomeResponse> {
    return this.request(
      "POST",
      `/api/trials/${trialId}/patients/${t}/outcome`,
      { y },
    );
  }
}
