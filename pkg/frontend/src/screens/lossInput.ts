// Step 4: collect loss estimates. One-time factors take a single amount;
// persistent factors take a daily loss plus editable recovery stages
// (level slider 0-1 and a days field). Submits one estimate record per
// threat scenario.

import { ApiError, StaleRevisionError } from "../api";
import { parseMajorToMinor } from "../money";
import type { FactorDraft, StageDraft } from "../state";
import type { EstimatesPayload } from "../types";
import type { WizardContext } from "../wizard";

function defaultDraft(kind: "one_time" | "persistent", effectId: string): FactorDraft {
  if (kind === "one_time") return { kind, amount: "", effectId };
  return { kind, daily: "", stages: [{ level: 0, days: "1" }], effectId };
}

function stagesDecrease(stages: StageDraft[]): boolean {
  for (let i = 1; i < stages.length; i++) {
    if (stages[i].level < stages[i - 1].level) return true;
  }
  return false;
}

function stagePreview(stages: StageDraft[]): HTMLElement {
  // flat segment per stage: residual share of the daily loss over its days
  const width = 240;
  const height = 48;
  const svg = document.createElementNS("http://www.w3.org/2000/svg", "svg");
  svg.setAttribute("viewBox", `0 0 ${width} ${height}`);
  svg.setAttribute("class", "stage-preview");
  svg.setAttribute("width", String(width));
  svg.setAttribute("height", String(height));
  const totalDays = stages.reduce((a, s) => a + (Number(s.days) || 0), 0) || 1;
  let x = 0;
  let path = "";
  for (const stage of stages) {
    const days = Number(stage.days) || 0;
    const w = (days / totalDays) * width;
    const y = 4 + stage.level * (height - 8);
    if (w > 0) {
      path += `${path ? "L" : "M"} ${x} ${y} L ${x + w} ${y} `;
      x += w;
    }
  }
  const line = document.createElementNS("http://www.w3.org/2000/svg", "path");
  line.setAttribute("d", path.trim() || "M 0 4 L 240 4");
  line.setAttribute("fill", "none");
  line.setAttribute("stroke", "#4472a8");
  line.setAttribute("stroke-width", "2");
  svg.appendChild(line);
  return svg as unknown as HTMLElement;
}

export function renderLossInput(container: HTMLElement, ctx: WizardContext): void {
  const state = ctx.store.get();

  const intro = document.createElement("p");
  intro.className = "help";
  intro.textContent =
    `Amounts are in ${state.currency}. A recovery stage (level, days) means `
    + "the business runs at that level of normal for that many days; "
    + "(0, 4) models a four-day full outage.";
  container.appendChild(intro);

  state.threats.forEach((threat, index) => {
    if (threat.threatId === null) return;
    const block = document.createElement("section");
    block.className = "threat-block";
    block.dataset.threat = threat.name;
    const heading = document.createElement("h3");
    heading.textContent = threat.name;
    block.appendChild(heading);

    if (threat.submitted) {
      const done = document.createElement("span");
      done.className = "badge done";
      done.textContent = "estimates saved";
      block.appendChild(done);
    }
    for (const warning of threat.warnings) {
      const badge = document.createElement("span");
      badge.className = "warning-badge";
      badge.textContent = warning;
      block.appendChild(badge);
    }

    if (threat.factors.length === 0) {
      const warn = document.createElement("p");
      warn.className = "warning-badge zero-loss";
      warn.textContent =
        "Zero loss: no impact factors selected, this threat will be stored "
        + "as assessed with no monetary impact.";
      block.appendChild(warn);
    }

    void ctx.suggestions(threat).then((available) => {
      const byId = new Map(available.map((f) => [f.id, f]));
      for (const factorId of threat.factors) {
        const meta = byId.get(factorId);
        const kind = meta?.loss_kind ?? "one_time";
        const draft = threat.drafts[factorId] ?? defaultDraft(kind, threat.effects[0]?.id ?? "");
        block.appendChild(renderFactorRow(ctx, index, factorId, meta?.name ?? factorId, draft));
      }
    });

    // MTPD input
    const mtpdLabel = document.createElement("label");
    mtpdLabel.className = "mtpd";
    mtpdLabel.textContent = "Maximum tolerable period of disruption (hours): ";
    const mtpd = document.createElement("input");
    mtpd.type = "number";
    mtpd.min = "1";
    mtpd.className = "mtpd-input";
    mtpd.value = threat.mtpdHours;
    mtpd.addEventListener("change", () => {
      ctx.store.updateThreat(index, { mtpdHours: mtpd.value, submitted: false });
    });
    mtpdLabel.appendChild(mtpd);
    block.appendChild(mtpdLabel);

    const error = document.createElement("p");
    error.className = "error submit-error";
    block.appendChild(error);

    const save = document.createElement("button");
    save.className = "save-estimates";
    save.textContent = "Save estimates";
    save.addEventListener("click", () => {
      void (async () => {
        error.textContent = "";
        try {
          await submitEstimates(ctx, index);
        } catch (e) {
          if (e instanceof StaleRevisionError) {
            error.textContent = "project changed in another tab; reload to continue";
          } else if (e instanceof ApiError) {
            error.textContent = e.path ? `${e.path}: ${e.message}` : e.message;
          } else {
            error.textContent = e instanceof Error ? e.message : String(e);
          }
        }
      })();
    });
    block.appendChild(save);
    container.appendChild(block);
  });
}

function renderFactorRow(
  ctx: WizardContext,
  threatIndex: number,
  factorId: string,
  factorName: string,
  draft: FactorDraft,
): HTMLElement {
  const threat = ctx.store.get().threats[threatIndex];
  const row = document.createElement("div");
  row.className = "factor-row";
  row.dataset.factor = factorId;
  const title = document.createElement("h5");
  title.textContent = factorName;
  row.appendChild(title);

  const update = (next: FactorDraft) => {
    const current = ctx.store.get().threats[threatIndex];
    ctx.store.updateThreat(threatIndex, {
      drafts: { ...current.drafts, [factorId]: next },
      submitted: false,
    });
  };

  if (threat.effects.length > 1) {
    const effectSelect = document.createElement("select");
    effectSelect.className = "effect-select";
    for (const effect of threat.effects) {
      const option = document.createElement("option");
      option.value = effect.id;
      option.textContent = effect.description;
      option.selected = effect.id === draft.effectId;
      effectSelect.appendChild(option);
    }
    effectSelect.addEventListener("change", () => {
      update({ ...draft, effectId: effectSelect.value });
    });
    const label = document.createElement("label");
    label.textContent = "Affected disruption: ";
    label.appendChild(effectSelect);
    row.appendChild(label);
  }

  if (draft.kind === "one_time") {
    const label = document.createElement("label");
    label.textContent = "One-time amount: ";
    const amount = document.createElement("input");
    amount.type = "text";
    amount.className = "amount-input";
    amount.value = draft.amount;
    const error = document.createElement("span");
    error.className = "error";
    amount.addEventListener("change", () => {
      error.textContent = "";
      if (amount.value.trim() !== "") {
        try {
          parseMajorToMinor(amount.value, ctx.store.get().currency);
        } catch (e) {
          error.textContent = e instanceof Error ? e.message : String(e);
          return;
        }
      }
      update({ ...draft, amount: amount.value });
    });
    label.appendChild(amount);
    row.appendChild(label);
    row.appendChild(error);
    return row;
  }

  // persistent factor
  const dailyLabel = document.createElement("label");
  dailyLabel.textContent = "Daily loss: ";
  const daily = document.createElement("input");
  daily.type = "text";
  daily.className = "daily-input";
  daily.value = draft.daily;
  const dailyError = document.createElement("span");
  dailyError.className = "error";
  daily.addEventListener("change", () => {
    dailyError.textContent = "";
    if (daily.value.trim() !== "") {
      try {
        parseMajorToMinor(daily.value, ctx.store.get().currency);
      } catch (e) {
        dailyError.textContent = e instanceof Error ? e.message : String(e);
        return;
      }
    }
    update({ ...draft, daily: daily.value });
  });
  dailyLabel.appendChild(daily);
  row.appendChild(dailyLabel);
  row.appendChild(dailyError);

  const stages = document.createElement("div");
  stages.className = "stage-rows";
  draft.stages.forEach((stage, stageIndex) => {
    const stageRow = document.createElement("div");
    stageRow.className = "stage-row";

    const slider = document.createElement("input");
    slider.type = "range";
    slider.min = "0";
    slider.max = "1";
    slider.step = "0.05";
    slider.className = "level-slider";
    slider.value = String(stage.level);

    const levelBox = document.createElement("input");
    levelBox.type = "number";
    levelBox.min = "0";
    levelBox.max = "1";
    levelBox.step = "0.05";
    levelBox.className = "level-input";
    levelBox.value = String(stage.level);

    const levelError = document.createElement("span");
    levelError.className = "error level-error";

    const setLevel = (value: number) => {
      const nextStages = draft.stages.map((s, i) =>
        i === stageIndex ? { ...s, level: value } : s);
      update({ ...draft, stages: nextStages });
    };
    slider.addEventListener("change", () => setLevel(Number(slider.value)));
    levelBox.addEventListener("change", () => {
      levelError.textContent = "";
      const value = Number(levelBox.value);
      if (Number.isNaN(value) || value < 0 || value > 1) {
        levelError.textContent = "recovery level must be between 0 and 1";
        return;
      }
      setLevel(value);
    });

    const days = document.createElement("input");
    days.type = "number";
    days.min = "0";
    days.className = "days-input";
    days.value = stage.days;
    const daysError = document.createElement("span");
    daysError.className = "error days-error";
    days.addEventListener("change", () => {
      daysError.textContent = "";
      const value = Number(days.value);
      if (Number.isNaN(value) || value < 0) {
        daysError.textContent = "days must be zero or more";
        return;
      }
      const nextStages = draft.stages.map((s, i) =>
        i === stageIndex ? { ...s, days: days.value } : s);
      update({ ...draft, stages: nextStages });
    });

    const remove = document.createElement("button");
    remove.className = "remove-stage";
    remove.textContent = "remove";
    remove.addEventListener("click", () => {
      if (draft.stages.length <= 1) return;
      update({ ...draft, stages: draft.stages.filter((_, i) => i !== stageIndex) });
    });

    const levelText = document.createElement("span");
    levelText.textContent = " recovery level ";
    const daysText = document.createElement("span");
    daysText.textContent = " for days ";
    stageRow.append(slider, levelText, levelBox, levelError, daysText, days, daysError, remove);
    stages.appendChild(stageRow);
  });
  row.appendChild(stages);

  const addStage = document.createElement("button");
  addStage.className = "add-stage";
  addStage.textContent = "Add recovery stage";
  addStage.addEventListener("click", () => {
    const last = draft.stages[draft.stages.length - 1];
    update({ ...draft, stages: [...draft.stages, { level: last?.level ?? 0, days: "1" }] });
  });
  row.appendChild(addStage);

  if (stagesDecrease(draft.stages)) {
    const warn = document.createElement("span");
    warn.className = "warning-badge decreasing-levels";
    warn.textContent = "recovery levels decrease over time; double-check the curve";
    row.appendChild(warn);
  }
  row.appendChild(stagePreview(draft.stages));
  return row;
}

/** Build and submit the estimate record for one threat's scenario. */
export async function submitEstimates(ctx: WizardContext, threatIndex: number): Promise<void> {
  const state = ctx.store.get();
  const threat = state.threats[threatIndex];
  if (!threat.threatId) throw new Error("threat not resolved against the project");
  const currency = state.currency;
  const payload: EstimatesPayload = {
    estimated_effects: threat.effects.map((e) => e.id),
    one_time: [],
    persistent: [],
    mtpd_hours: threat.mtpdHours.trim() === "" ? null : Number(threat.mtpdHours),
    currency,
  };
  for (const [factorId, draft] of Object.entries(threat.drafts)) {
    if (!threat.factors.includes(factorId)) continue;
    const effectId = draft.effectId || threat.effects[0]?.id || "";
    if (draft.kind === "one_time") {
      if (draft.amount.trim() === "") continue;
      payload.one_time.push({
        effect_id: effectId,
        factor_id: factorId,
        amount: { amount_minor: parseMajorToMinor(draft.amount, currency), currency },
      });
    } else {
      if (draft.daily.trim() === "") continue;
      payload.persistent.push({
        effect_id: effectId,
        factor_id: factorId,
        daily_loss: { amount_minor: parseMajorToMinor(draft.daily, currency), currency },
        stages: draft.stages.map((s) => ({
          recovery_level: s.level,
          days: Number(s.days),
        })),
      });
    }
  }
  const result = await ctx.client.putEstimates(threat.threatId, payload, state.revision!);
  ctx.store.set({ revision: result.revision });
  ctx.store.updateThreat(threatIndex, { submitted: true, warnings: result.warnings });
}
