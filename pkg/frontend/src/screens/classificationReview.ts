// Step 2: review heuristic CIAA classifications, toggle principles by hand,
// and persist the result into the project.

import { StaleRevisionError } from "../api";
import type { WizardContext } from "../wizard";

const PRINCIPLES = ["Confidentiality", "Integrity", "Availability", "Accountability"];

export function renderClassificationReview(container: HTMLElement, ctx: WizardContext): void {
  const state = ctx.store.get();

  const intro = document.createElement("p");
  intro.className = "help";
  intro.textContent =
    "Check which security objectives each threat affects. The selection "
    + "drives which impact factors get suggested next.";
  container.appendChild(intro);

  state.threats.forEach((threat, index) => {
    if (threat.threatId === null) return;
    const block = document.createElement("section");
    block.className = "threat-block";
    block.dataset.threat = threat.name;
    const heading = document.createElement("h3");
    heading.textContent = threat.name;
    block.appendChild(heading);
    if (threat.effects.length > 0) {
      const effects = document.createElement("p");
      effects.className = "effects";
      effects.textContent = "Business disruptions: "
        + threat.effects.map((e) => e.description).join("; ");
      block.appendChild(effects);
    }
    if (threat.heuristicEmpty) {
      const note = document.createElement("p");
      note.className = "warning-badge";
      note.textContent = "No automatic match: pick the affected objectives manually.";
      block.appendChild(note);
    }
    for (const principle of PRINCIPLES) {
      const toggle = document.createElement("button");
      toggle.className = "principle-toggle";
      toggle.dataset.principle = principle;
      const active = threat.principles.includes(principle);
      toggle.classList.toggle("active", active);
      toggle.setAttribute("aria-pressed", String(active));
      toggle.textContent = principle;
      toggle.addEventListener("click", () => {
        const current = ctx.store.get().threats[index];
        const next = current.principles.includes(principle)
          ? current.principles.filter((p) => p !== principle)
          : PRINCIPLES.filter((p) => current.principles.includes(p) || p === principle);
        ctx.store.updateThreat(index, { principles: next, factors: [], drafts: {} });
      });
      block.appendChild(toggle);
    }
    container.appendChild(block);
  });

  const status = document.createElement("p");
  status.id = "review-status";
  container.appendChild(status);
}

/** Persist the reviewed classifications into the project document. */
export async function persistClassifications(ctx: WizardContext): Promise<void> {
  await ctx.refreshProject();
  const project = ctx.project!;
  const state = ctx.store.get();
  const classifications = { ...project.classifications };
  for (const threat of state.threats) {
    if (threat.threatId && threat.principles.length > 0) {
      classifications[threat.threatId] = threat.principles;
    }
  }
  const doc = { ...project, classifications };
  try {
    const revision = await ctx.client.putProject(doc, state.revision!);
    ctx.store.set({ revision });
  } catch (error) {
    if (error instanceof StaleRevisionError) {
      throw new Error("project changed in another tab; reload to continue");
    }
    throw error;
  }
}
