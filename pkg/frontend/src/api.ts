// Thin typed client over the quanttm HTTP API. The UI never recomputes
// monetary values: everything displayed comes straight from these responses.

import type {
  ApiErrorBody,
  EmergencyRankEntry,
  EstimatesPayload,
  FactorOut,
  PlotSeriesOut,
  ProjectDoc,
  ProjectEnvelope,
  QuantifiedOut,
  RosiResponse,
} from "./types";

export class ApiError extends Error {
  constructor(
    public status: number,
    public code: string,
    message: string,
    public path?: string | null,
  ) {
    super(message);
  }
}

export class StaleRevisionError extends ApiError {}

async function throwFromResponse(response: Response): Promise<never> {
  let body: ApiErrorBody | null = null;
  try {
    body = (await response.json()) as ApiErrorBody;
  } catch {
    // non-JSON error body; fall through to a generic error
  }
  const status = body?.status ?? response.status;
  const code = body?.code ?? "http_error";
  const message = body?.message ?? `request failed with status ${response.status}`;
  if (status === 409) throw new StaleRevisionError(status, code, message, body?.path);
  throw new ApiError(status, code, message, body?.path);
}

export class ApiClient {
  constructor(public base: string = "") {}

  private url(path: string): string {
    return this.base + path;
  }

  private async getJson<T>(path: string): Promise<T> {
    const response = await fetch(this.url(path));
    if (!response.ok) await throwFromResponse(response);
    return (await response.json()) as T;
  }

  async getProject(): Promise<ProjectEnvelope> {
    return this.getJson<ProjectEnvelope>("/project");
  }

  async putProject(document: ProjectDoc, revision: string): Promise<string> {
    const response = await fetch(this.url("/project"), {
      method: "PUT",
      headers: { "Content-Type": "application/json", "If-Match": revision },
      body: JSON.stringify(document),
    });
    if (!response.ok) await throwFromResponse(response);
    const body = (await response.json()) as { revision: string };
    return body.revision;
  }

  async classify(name: string): Promise<string[]> {
    const response = await fetch(this.url("/classify"), {
      method: "POST",
      headers: { "Content-Type": "application/json" },
      body: JSON.stringify({ name }),
    });
    if (!response.ok) await throwFromResponse(response);
    const body = (await response.json()) as { principles: string[] };
    return body.principles;
  }

  async factors(principles: string[]): Promise<FactorOut[]> {
    const qs = encodeURIComponent(principles.join(","));
    const body = await this.getJson<{ factors: FactorOut[] }>(`/factors?principles=${qs}`);
    return body.factors;
  }

  async putEstimates(
    scenarioId: string,
    payload: EstimatesPayload,
    revision: string,
  ): Promise<{ revision: string; warnings: string[] }> {
    const response = await fetch(this.url(`/scenarios/${encodeURIComponent(scenarioId)}/estimates`), {
      method: "PUT",
      headers: { "Content-Type": "application/json", "If-Match": revision },
      body: JSON.stringify(payload),
    });
    if (!response.ok) await throwFromResponse(response);
    return (await response.json()) as { revision: string; warnings: string[] };
  }

  async quantify(): Promise<QuantifiedOut[]> {
    return this.getJson<QuantifiedOut[]>("/quantify");
  }

  async plots(): Promise<PlotSeriesOut[]> {
    return this.getJson<PlotSeriesOut[]>("/plots");
  }

  async emergencyRank(): Promise<EmergencyRankEntry[]> {
    return this.getJson<EmergencyRankEntry[]>("/rank?by=emergency");
  }

  async rosi(
    annualCost: number,
    mitigationRate: number,
    threatIds: string[],
    name = "what-if control",
  ): Promise<RosiResponse> {
    const response = await fetch(this.url("/rosi"), {
      method: "POST",
      headers: { "Content-Type": "application/json" },
      body: JSON.stringify({
        annual_cost: annualCost,
        mitigation_rate: mitigationRate,
        threat_ids: threatIds,
        name,
      }),
    });
    if (!response.ok) await throwFromResponse(response);
    return (await response.json()) as RosiResponse;
  }
}
