// Step 3: pick suggested impact factors per threat (grouped tangible before
// intangible) and add custom factors particular to the business.

import { StaleRevisionError } from "../api";
import type { FactorOut } from "../types";
import type { WizardContext } from "../wizard";

function slugify(name: string): string {
  return name.toLowerCase().replace(/[^a-z0-9]+/g, "_").replace(/^_+|_+$/g, "");
}

export function renderFactorSelection(container: HTMLElement, ctx: WizardContext): void {
  const state = ctx.store.get();

  const intro = document.createElement("p");
  intro.className = "help";
  intro.textContent =
    "These factors are suggestions derived from each threat's security "
    + "objectives; deselect what does not apply and add factors particular "
    + "to your business.";
  container.appendChild(intro);

  state.threats.forEach((threat, index) => {
    if (threat.threatId === null) return;
    const block = document.createElement("section");
    block.className = "threat-block";
    block.dataset.threat = threat.name;
    const heading = document.createElement("h3");
    heading.textContent = `${threat.name} (${threat.principles.join(", ")})`;
    block.appendChild(heading);
    const list = document.createElement("div");
    list.className = "factor-list";
    list.textContent = "loading suggestions...";
    block.appendChild(list);

    void ctx.suggestions(threat).then((factors) => {
      list.innerHTML = "";
      // group by principle first (a factor shows up under its first matching
      // one), tangible before intangible within each group
      const shown = new Set<string>();
      for (const principle of threat.principles) {
        const matching = factors.filter(
          (f) => f.applicable_principles.includes(principle) && !shown.has(f.id));
        if (matching.length === 0) continue;
        const principleHeading = document.createElement("h4");
        principleHeading.className = "principle-group";
        principleHeading.textContent = principle;
        list.appendChild(principleHeading);
        let lastGroup = "";
        for (const factor of matching) {
          shown.add(factor.id);
          const group = factor.tangibility === "tangible" ? "Tangible" : "Intangible";
          if (group !== lastGroup) {
            const h = document.createElement("h5");
            h.textContent = group;
            list.appendChild(h);
            lastGroup = group;
          }
          const label = document.createElement("label");
          label.className = "factor-option";
          const checkbox = document.createElement("input");
          checkbox.type = "checkbox";
          checkbox.dataset.factor = factor.id;
          checkbox.checked = threat.factors.includes(factor.id);
          checkbox.addEventListener("change", () => {
            const current = ctx.store.get().threats[index];
            const factorsSelected = checkbox.checked
              ? [...current.factors, factor.id]
              : current.factors.filter((f) => f !== factor.id);
            ctx.store.updateThreat(index, { factors: factorsSelected });
          });
          label.appendChild(checkbox);
          const text = document.createElement("span");
          text.textContent = ` ${factor.name} `;
          label.appendChild(text);
          const kind = document.createElement("em");
          kind.className = "kind-chip";
          kind.textContent = factor.loss_kind === "one_time" ? "one-time" : "persistent";
          label.appendChild(kind);
          list.appendChild(label);
        }
      }
    });

    // custom factor creation
    const custom = document.createElement("div");
    custom.className = "custom-factor";
    const nameInput = document.createElement("input");
    nameInput.type = "text";
    nameInput.placeholder = "Custom factor name";
    nameInput.className = "custom-factor-name";
    const tangibility = document.createElement("select");
    tangibility.className = "custom-factor-tangibility";
    for (const option of ["tangible", "intangible"]) {
      const o = document.createElement("option");
      o.value = option;
      o.textContent = option;
      tangibility.appendChild(o);
    }
    const kind = document.createElement("select");
    kind.className = "custom-factor-kind";
    for (const option of ["one_time", "persistent"]) {
      const o = document.createElement("option");
      o.value = option;
      o.textContent = option === "one_time" ? "one-time" : "persistent";
      kind.appendChild(o);
    }
    const addButton = document.createElement("button");
    addButton.className = "add-custom-factor";
    addButton.textContent = "Add custom factor";
    const error = document.createElement("span");
    error.className = "error";
    addButton.addEventListener("click", () => {
      void (async () => {
        error.textContent = "";
        const name = nameInput.value.trim();
        if (!name) {
          error.textContent = "factor name required";
          return;
        }
        try {
          await addCustomFactor(ctx, index, {
            id: slugify(name),
            name,
            tangibility: tangibility.value as FactorOut["tangibility"],
            applicable_principles: ctx.store.get().threats[index].principles,
            loss_kind: kind.value as FactorOut["loss_kind"],
            builtin: false,
          });
          nameInput.value = "";
        } catch (e) {
          error.textContent = e instanceof Error ? e.message : String(e);
        }
      })();
    });
    custom.append(nameInput, tangibility, kind, addButton, error);
    block.appendChild(custom);
    container.appendChild(block);
  });
}

async function addCustomFactor(
  ctx: WizardContext,
  threatIndex: number,
  factor: FactorOut,
): Promise<void> {
  await ctx.refreshProject();
  const project = ctx.project!;
  if (project.catalog_extensions.some((f) => f.id === factor.id)) {
    // already defined; just select it
  } else {
    const doc = { ...project, catalog_extensions: [...project.catalog_extensions, factor] };
    try {
      const revision = await ctx.client.putProject(doc, ctx.store.get().revision!);
      ctx.store.set({ revision });
      await ctx.refreshProject();
    } catch (error) {
      if (error instanceof StaleRevisionError) {
        throw new Error("project changed in another tab; reload to continue");
      }
      throw error;
    }
  }
  const current = ctx.store.get().threats[threatIndex];
  if (!current.factors.includes(factor.id)) {
    ctx.store.updateThreat(threatIndex, { factors: [...current.factors, factor.id] });
  }
  ctx.invalidateSuggestions();
}
