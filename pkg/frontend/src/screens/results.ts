// Step 5: the dashboard. Yearly loss bar chart across threats, per-threat
// tangible/intangible and factor pies, recovery timelines, emergency
// ranking, and a live ROSI what-if panel. Every monetary figure shown is
// the API's value verbatim.

import { ApiError } from "../api";
import { renderBarChart, renderPieChart, renderStepChart } from "../charts";
import { formatMoney } from "../money";
import { loadStored, saveStored, storageKeys } from "../storage";
import type { PlotSeriesOut } from "../types";
import type { WizardContext } from "../wizard";

export function renderResults(container: HTMLElement, ctx: WizardContext): void {
  const charts = document.createElement("div");
  charts.id = "charts";
  container.appendChild(charts);

  void (async () => {
    let series: PlotSeriesOut[];
    let offline = false;
    try {
      series = await ctx.client.plots();
      saveStored(storageKeys.plotsCache, series);
    } catch {
      const cached = loadStored<PlotSeriesOut[]>(storageKeys.plotsCache);
      if (!cached) {
        const err = document.createElement("p");
        err.className = "error";
        err.textContent = "results unavailable: the API cannot be reached and no cached charts exist";
        charts.appendChild(err);
        return;
      }
      series = cached;
      offline = true;
    }
    if (offline) {
      const note = document.createElement("p");
      note.className = "warning-badge offline-note";
      note.textContent = "API unreachable: showing the last cached charts (read-only)";
      charts.appendChild(note);
    }

    const bar = series.find((s) => s.kind === "impact_bar");
    if (bar) {
      const section = document.createElement("section");
      section.id = "impact-bar";
      const h = document.createElement("h3");
      h.textContent = "Yearly loss by threat";
      section.appendChild(h);
      renderBarChart(section, bar);
      charts.appendChild(section);
    }

    const byThreat = new Map<string, PlotSeriesOut[]>();
    for (const s of series) {
      if (s.kind === "impact_bar") continue;
      const key = s.kind === "recovery_timeline" ? s.name.split(":")[0] : s.name;
      byThreat.set(key, [...(byThreat.get(key) ?? []), s]);
    }
    for (const [threatName, threatSeries] of byThreat) {
      const section = document.createElement("section");
      section.className = "threat-charts";
      section.dataset.threat = threatName;
      const h = document.createElement("h3");
      h.textContent = threatName;
      section.appendChild(h);
      for (const s of threatSeries) {
        if (s.kind === "recovery_timeline") renderStepChart(section, s);
        else renderPieChart(section, s);
      }
      charts.appendChild(section);
    }
  })();

  // emergency ranking
  const emergency = document.createElement("section");
  emergency.id = "emergency-ranking";
  const emergencyTitle = document.createElement("h3");
  emergencyTitle.textContent = "Most emergent first (lowest tolerable downtime)";
  emergency.appendChild(emergencyTitle);
  const list = document.createElement("ol");
  emergency.appendChild(list);
  container.appendChild(emergency);
  void ctx.client
    .emergencyRank()
    .then((entries) => {
      for (const entry of entries) {
        const item = document.createElement("li");
        item.dataset.threat = entry.threat;
        item.textContent = entry.mtpd_hours === null
          ? `${entry.threat} (no tolerable-period estimate)`
          : `${entry.threat} (tolerates ${entry.mtpd_hours} h)`;
        list.appendChild(item);
      }
    })
    .catch(() => {
      emergency.remove();
    });

  // ROSI what-if panel
  const panel = document.createElement("section");
  panel.id = "rosi-panel";
  const title = document.createElement("h3");
  title.textContent = "Control what-if (return on security investment)";
  panel.appendChild(title);

  const threatSelect = document.createElement("select");
  threatSelect.multiple = true;
  threatSelect.id = "rosi-threats";
  for (const threat of ctx.store.get().threats) {
    if (!threat.threatId) continue;
    const option = document.createElement("option");
    option.value = threat.threatId;
    option.textContent = threat.name;
    threatSelect.appendChild(option);
  }
  const threatLabel = document.createElement("label");
  threatLabel.textContent = "Mitigated threats: ";
  threatLabel.appendChild(threatSelect);
  panel.appendChild(threatLabel);

  const costInput = document.createElement("input");
  costInput.type = "number";
  costInput.id = "rosi-cost";
  costInput.min = "0";
  costInput.placeholder = "yearly cost";
  const costLabel = document.createElement("label");
  costLabel.textContent = " Yearly cost: ";
  costLabel.appendChild(costInput);
  panel.appendChild(costLabel);

  const rateInput = document.createElement("input");
  rateInput.type = "number";
  rateInput.id = "rosi-rate";
  rateInput.min = "0";
  rateInput.max = "1";
  rateInput.step = "0.05";
  rateInput.value = "1";
  const rateLabel = document.createElement("label");
  rateLabel.textContent = " Mitigation rate: ";
  rateLabel.appendChild(rateInput);
  panel.appendChild(rateLabel);

  const evaluate = document.createElement("button");
  evaluate.id = "rosi-evaluate";
  evaluate.textContent = "Evaluate";
  panel.appendChild(evaluate);

  const output = document.createElement("p");
  output.id = "rosi-result";
  panel.appendChild(output);

  evaluate.addEventListener("click", () => {
    void (async () => {
      output.textContent = "";
      output.className = "";
      const threatIds = Array.from(threatSelect.selectedOptions).map((o) => o.value);
      const cost = Number(costInput.value);
      const rate = Number(rateInput.value);
      if (threatIds.length === 0 || Number.isNaN(cost) || cost < 0
          || Number.isNaN(rate) || rate < 0 || rate > 1) {
        output.textContent = "pick at least one threat, a non-negative cost, and a rate in [0, 1]";
        output.className = "error";
        return;
      }
      try {
        const result = await ctx.client.rosi(cost, rate, threatIds);
        const amount = document.createElement("strong");
        amount.className = "rosi-return";
        amount.textContent = formatMoney(
          result.absolute_return.amount_minor, result.absolute_return.currency);
        output.appendChild(amount);
        output.appendChild(document.createTextNode(
          result.cost_effective ? ", cost-effective" : ", not cost-effective"));
      } catch (e) {
        output.className = "error";
        output.textContent = e instanceof ApiError ? e.message : String(e);
      }
    })();
  });
  container.appendChild(panel);

  const restart = document.createElement("button");
  restart.id = "start-over";
  restart.textContent = "Start over";
  restart.addEventListener("click", () => ctx.store.reset());
  container.appendChild(restart);
}
