// Wire types for the quanttm HTTP API.

export interface Money {
  amount_minor: number;
  currency: string;
}

export interface FactorOut {
  id: string;
  name: string;
  tangibility: "tangible" | "intangible";
  applicable_principles: string[];
  loss_kind: "one_time" | "persistent";
  builtin: boolean;
}

export interface ContributionOut {
  effect_id: string;
  amount: Money;
}

export interface QuantifiedOut {
  threat_id: string;
  threat: string;
  q: Money;
  duration_hours: number | "inf";
  contributions: ContributionOut[];
  reference?: Money;
  reference_diverges?: boolean;
}

export interface PlotSeriesOut {
  kind: "impact_bar" | "tangible_intangible_pie" | "factor_pie" | "recovery_timeline";
  name: string;
  labels: string[];
  values: number[];
  currency: string;
}

export interface RosiResponse {
  control: string;
  mitigated_impact: Money;
  control_cost: Money;
  absolute_return: Money;
  cost_effective: boolean;
}

export interface EmergencyRankEntry {
  rank: number;
  threat_id: string;
  threat: string;
  mtpd_hours: number | null;
}

export interface ProjectEnvelope {
  revision: string;
  project: ProjectDoc;
}

// Only the parts of the document the wizard reads or edits.
export interface ProjectDoc {
  schema_version: number;
  metadata: { name: string; currency: string; [key: string]: unknown };
  threat_model: {
    threats: { id: string; name: string; description: string }[];
    [key: string]: unknown;
  };
  scenarios: {
    threat_id: string;
    effects: { id: string; description: string; [key: string]: unknown }[];
  }[];
  classifications: Record<string, string[]>;
  catalog_extensions: FactorOut[];
  bia_records: unknown[];
  [key: string]: unknown;
}

export interface StageInput {
  recovery_level: number;
  days: number;
}

export interface EstimatesPayload {
  estimated_effects: string[];
  one_time: { effect_id: string; factor_id: string; amount: Money }[];
  persistent: {
    effect_id: string;
    factor_id: string;
    daily_loss: Money;
    stages: StageInput[];
  }[];
  mtpd_hours: number | null;
  currency: string;
}

export interface ApiErrorBody {
  status: number;
  code: string;
  message: string;
  path?: string | null;
}
