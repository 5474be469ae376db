// Wizard orchestration: five ordered screens, step gating, and the shared
// context (API client, store, cached project document, factor suggestions).

import { ApiClient } from "./api";
import { STEP_ORDER, WizardStep, WizardStore, maxReachable, stepReachable } from "./state";
import type { ThreatProgress } from "./state";
import type { FactorOut, ProjectDoc } from "./types";
import { renderThreatEntry } from "./screens/threatEntry";
import { persistClassifications, renderClassificationReview } from "./screens/classificationReview";
import { renderFactorSelection } from "./screens/factorSelection";
import { renderLossInput } from "./screens/lossInput";
import { renderResults } from "./screens/results";

const STEP_TITLES: Record<WizardStep, string> = {
  threat_entry: "1. Threats",
  classification_review: "2. Classification",
  factor_selection: "3. Impact factors",
  loss_input: "4. Loss estimates",
  results: "5. Results",
};

export interface WizardContext {
  store: WizardStore;
  client: ApiClient;
  project: ProjectDoc | null;
  refreshProject(): Promise<void>;
  suggestions(threat: ThreatProgress): Promise<FactorOut[]>;
  invalidateSuggestions(): void;
  goto(step: WizardStep): void;
}

export function createWizard(
  root: HTMLElement,
  client: ApiClient,
  store: WizardStore = new WizardStore(),
): WizardContext {
  const suggestionCache = new Map<string, Promise<FactorOut[]>>();

  const ctx: WizardContext = {
    store,
    client,
    project: null,
    async refreshProject() {
      const envelope = await client.getProject();
      ctx.project = envelope.project;
      store.set({
        revision: envelope.revision,
        currency: envelope.project.metadata.currency,
        projectName: envelope.project.metadata.name,
      });
    },
    suggestions(threat: ThreatProgress) {
      const key = `${threat.threatId}:${threat.principles.join(",")}`;
      let cached = suggestionCache.get(key);
      if (!cached) {
        cached = client.factors(threat.principles);
        suggestionCache.set(key, cached);
      }
      return cached;
    },
    invalidateSuggestions() {
      suggestionCache.clear();
    },
    goto(step: WizardStep) {
      store.set({ step });
    },
  };

  const shell = document.createElement("div");
  shell.className = "wizard";
  const header = document.createElement("header");
  const title = document.createElement("h1");
  title.textContent = "Business impact analysis";
  header.appendChild(title);
  const subtitle = document.createElement("p");
  subtitle.id = "project-name";
  header.appendChild(subtitle);
  shell.appendChild(header);

  const nav = document.createElement("nav");
  nav.className = "wizard-nav";
  shell.appendChild(nav);

  const content = document.createElement("section");
  content.className = "wizard-content";
  shell.appendChild(content);

  const footer = document.createElement("footer");
  footer.className = "wizard-footer";
  const backButton = document.createElement("button");
  backButton.id = "back-button";
  backButton.textContent = "Back";
  const nextButton = document.createElement("button");
  nextButton.id = "next-button";
  nextButton.textContent = "Next";
  const footerError = document.createElement("span");
  footerError.id = "footer-error";
  footerError.className = "error";
  footer.append(backButton, footerError, nextButton);
  shell.appendChild(footer);
  root.appendChild(shell);

  const renderNav = () => {
    const state = store.get();
    nav.innerHTML = "";
    for (const step of STEP_ORDER) {
      const button = document.createElement("button");
      button.dataset.step = step;
      button.textContent = STEP_TITLES[step];
      button.disabled = !stepReachable(state, step);
      button.classList.toggle("active", state.step === step);
      button.addEventListener("click", () => {
        if (!button.disabled) ctx.goto(step);
      });
      nav.appendChild(button);
    }
  };

  const renderScreen = () => {
    const state = store.get();
    subtitle.textContent = state.projectName;
    content.innerHTML = "";
    footerError.textContent = "";
    switch (state.step) {
      case "threat_entry":
        renderThreatEntry(content, ctx);
        break;
      case "classification_review":
        renderClassificationReview(content, ctx);
        break;
      case "factor_selection":
        renderFactorSelection(content, ctx);
        break;
      case "loss_input":
        renderLossInput(content, ctx);
        break;
      case "results":
        renderResults(content, ctx);
        break;
    }
    const index = STEP_ORDER.indexOf(state.step);
    backButton.disabled = index === 0;
    nextButton.disabled = index >= STEP_ORDER.length - 1
      || maxReachable(state) <= index;
    nextButton.style.display = state.step === "results" ? "none" : "";
  };

  backButton.addEventListener("click", () => {
    const index = STEP_ORDER.indexOf(store.get().step);
    if (index > 0) ctx.goto(STEP_ORDER[index - 1]);
  });

  nextButton.addEventListener("click", () => {
    void (async () => {
      const state = store.get();
      const index = STEP_ORDER.indexOf(state.step);
      if (index >= STEP_ORDER.length - 1) return;
      try {
        if (state.step === "classification_review") {
          await persistClassifications(ctx);
        }
        ctx.goto(STEP_ORDER[index + 1]);
      } catch (error) {
        footerError.textContent = error instanceof Error ? error.message : String(error);
      }
    })();
  });

  store.subscribe(() => {
    renderNav();
    renderScreen();
  });
  renderNav();
  renderScreen();

  // pick up the project context in the background on first mount
  if (store.get().revision === null) {
    void ctx.refreshProject().catch(() => {
      footerError.textContent = "cannot reach the analysis service";
    });
  }
  return ctx;
}
