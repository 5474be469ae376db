// Wizard state: the five steps, per-threat progress, and the working
// revision token. Every change is persisted so a reload restores the exact
// step and inputs.

import { loadStored, removeStored, saveStored, storageKeys } from "./storage";

export type WizardStep =
  | "threat_entry"
  | "classification_review"
  | "factor_selection"
  | "loss_input"
  | "results";

export const STEP_ORDER: WizardStep[] = [
  "threat_entry",
  "classification_review",
  "factor_selection",
  "loss_input",
  "results",
];

export interface StageDraft {
  level: number;
  days: string;
}

export type FactorDraft =
  | { kind: "one_time"; amount: string; effectId: string }
  | { kind: "persistent"; daily: string; stages: StageDraft[]; effectId: string };

export interface ThreatProgress {
  name: string;
  threatId: string | null;
  effects: { id: string; description: string }[];
  principles: string[];
  classified: boolean;
  heuristicEmpty: boolean;
  factors: string[];
  drafts: Record<string, FactorDraft>;
  mtpdHours: string;
  submitted: boolean;
  warnings: string[];
}

export interface WizardState {
  step: WizardStep;
  revision: string | null;
  currency: string;
  projectName: string;
  threats: ThreatProgress[];
}

export function emptyState(): WizardState {
  return {
    step: "threat_entry",
    revision: null,
    currency: "USD",
    projectName: "",
    threats: [],
  };
}

type Listener = (state: WizardState) => void;

export class WizardStore {
  private state: WizardState;
  private listeners: Listener[] = [];

  constructor(initial?: WizardState) {
    this.state = initial ?? loadStored<WizardState>(storageKeys.wizard) ?? emptyState();
  }

  get(): WizardState {
    return this.state;
  }

  set(patch: Partial<WizardState>): void {
    this.state = { ...this.state, ...patch };
    saveStored(storageKeys.wizard, this.state);
    for (const listener of this.listeners) listener(this.state);
  }

  updateThreat(index: number, patch: Partial<ThreatProgress>): void {
    const threats = this.state.threats.slice();
    threats[index] = { ...threats[index], ...patch };
    this.set({ threats });
  }

  subscribe(listener: Listener): () => void {
    this.listeners.push(listener);
    return () => {
      this.listeners = this.listeners.filter((l) => l !== listener);
    };
  }

  reset(): void {
    removeStored(storageKeys.wizard);
    this.state = emptyState();
    for (const listener of this.listeners) listener(this.state);
  }
}

/** Which steps are reachable given current progress (earlier steps always are). */
export function stepReachable(state: WizardState, step: WizardStep): boolean {
  const target = STEP_ORDER.indexOf(step);
  if (target <= STEP_ORDER.indexOf(state.step)) return true;
  return maxReachable(state) >= target;
}

export function maxReachable(state: WizardState): number {
  const resolved = state.threats.filter((t) => t.threatId !== null);
  if (resolved.length === 0) return 0;
  if (!resolved.every((t) => t.classified && t.principles.length > 0)) return 1;
  // factor selection may legitimately end with zero factors (zero-loss threat)
  if (!resolved.every((t) => t.submitted)) return 3;
  return 4;
}
