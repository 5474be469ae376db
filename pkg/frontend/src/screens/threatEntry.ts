// Step 1: enter threat names, resolve them against the project's technical
// threat model, and classify each against the CIAA principles.

import { classifyLocally } from "../classifyLocal";
import type { ThreatProgress } from "../state";
import type { WizardContext } from "../wizard";

function badge(text: string): HTMLElement {
  const el = document.createElement("span");
  el.className = "badge";
  el.textContent = text;
  return el;
}

export function renderThreatEntry(container: HTMLElement, ctx: WizardContext): void {
  const state = ctx.store.get();

  const intro = document.createElement("p");
  intro.className = "help";
  intro.textContent =
    "Enter the threats to analyze, one per line. They must already exist in "
    + "the project's technical threat model (ask your technical team to add "
    + "missing ones; attack probabilities stay on the technical side).";
  container.appendChild(intro);

  const storageNote = document.createElement("p");
  storageNote.className = "storage-note";
  storageNote.textContent =
    "Where your data lives: all analysis data is stored in the project file "
    + "on the server you connected to. Wizard progress is kept only in this "
    + "browser's local storage and can be cleared with \"Start over\".";
  container.appendChild(storageNote);

  const textarea = document.createElement("textarea");
  textarea.id = "threat-names";
  textarea.rows = 5;
  textarea.placeholder = "malware\ninsider threat\nbotnet";
  textarea.value = state.threats.map((t) => t.name).join("\n");
  container.appendChild(textarea);

  const classifyButton = document.createElement("button");
  classifyButton.id = "classify-button";
  classifyButton.textContent = "Classify threats";
  container.appendChild(classifyButton);

  const rows = document.createElement("div");
  rows.id = "classified-rows";
  container.appendChild(rows);

  const renderRows = () => {
    rows.innerHTML = "";
    for (const threat of ctx.store.get().threats) {
      const row = document.createElement("div");
      row.className = "threat-row";
      row.dataset.threat = threat.name;
      const name = document.createElement("strong");
      name.textContent = threat.name;
      row.appendChild(name);
      if (threat.threatId === null) {
        const err = document.createElement("span");
        err.className = "error";
        err.textContent = " not in the project threat model";
        row.appendChild(err);
      } else if (threat.principles.length === 0) {
        const none = document.createElement("span");
        none.className = "warning-badge";
        none.textContent = "no automatic match; classify manually in the next step";
        row.appendChild(none);
      } else {
        for (const principle of threat.principles) row.appendChild(badge(principle));
      }
      rows.appendChild(row);
    }
  };
  renderRows();

  classifyButton.addEventListener("click", () => {
    void (async () => {
      const names = textarea.value
        .split("\n")
        .map((line) => line.trim())
        .filter((line) => line.length > 0);
      if (names.length === 0) {
        ctx.store.set({ threats: [] });
        renderRows();
        return;
      }
      await ctx.refreshProject();
      const project = ctx.project!;
      const previous = new Map(ctx.store.get().threats.map((t) => [t.name, t]));
      const threats: ThreatProgress[] = [];
      for (const name of names) {
        const existing = previous.get(name);
        if (existing && existing.classified) {
          threats.push(existing);
          continue;
        }
        const match = project.threat_model.threats.find(
          (t) => t.name.toLowerCase() === name.toLowerCase() || t.id === name,
        );
        const scenario = match
          ? project.scenarios.find((s) => s.threat_id === match.id)
          : undefined;
        let principles: string[] = [];
        if (match) {
          try {
            principles = await ctx.client.classify(name);
          } catch {
            principles = classifyLocally(name); // offline fallback
          }
        }
        threats.push({
          name,
          threatId: match?.id ?? null,
          effects: scenario
            ? scenario.effects.map((e) => ({ id: e.id, description: e.description }))
            : [],
          principles,
          classified: match !== undefined,
          heuristicEmpty: principles.length === 0,
          factors: [],
          drafts: {},
          mtpdHours: "",
          submitted: false,
          warnings: [],
        });
      }
      ctx.store.set({ threats });
      renderRows();
    })();
  });
}
