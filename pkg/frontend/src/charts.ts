// Hand-rolled SVG charts. Geometry uses arithmetic, but every displayed
// monetary figure is the verbatim string form of the API-provided value.

import type { PlotSeriesOut } from "./types";

const SVG_NS = "http://www.w3.org/2000/svg";

function svgElement<K extends keyof SVGElementTagNameMap>(
  tag: K,
  attrs: Record<string, string | number>,
): SVGElementTagNameMap[K] {
  const el = document.createElementNS(SVG_NS, tag);
  for (const [key, value] of Object.entries(attrs)) {
    el.setAttribute(key, String(value));
  }
  return el;
}

/** The exact text shown for an API-provided numeric value. */
export function displayValue(value: number): string {
  return String(value);
}

const PALETTE = ["#4472a8", "#d9823b", "#5c9e61", "#b35454", "#7d6aa8", "#5a8a8d",
                 "#a8863f", "#9e5c88"];

export function renderBarChart(container: HTMLElement, series: PlotSeriesOut): void {
  const width = 520;
  const height = 220;
  const pad = 28;
  const svg = svgElement("svg", {
    viewBox: `0 0 ${width} ${height}`,
    width, height, role: "img",
    "data-kind": series.kind,
    "data-name": series.name,
  });
  const max = Math.max(...series.values, 1);
  const slot = (width - 2 * pad) / Math.max(series.values.length, 1);
  series.values.forEach((value, i) => {
    const barHeight = (value / max) * (height - 70);
    const x = pad + i * slot + slot * 0.15;
    const y = height - 40 - barHeight;
    svg.appendChild(svgElement("rect", {
      x, y, width: slot * 0.7, height: Math.max(barHeight, 1),
      fill: PALETTE[i % PALETTE.length],
      "data-label": series.labels[i],
    }));
    const valueText = svgElement("text", {
      x: pad + i * slot + slot / 2, y: y - 6,
      "text-anchor": "middle", "font-size": 11, class: "bar-value",
      "data-value": displayValue(value),
    });
    valueText.textContent = displayValue(value);
    svg.appendChild(valueText);
    const label = svgElement("text", {
      x: pad + i * slot + slot / 2, y: height - 22,
      "text-anchor": "middle", "font-size": 11, class: "bar-label",
    });
    label.textContent = series.labels[i];
    svg.appendChild(label);
  });
  const caption = svgElement("text", {
    x: width / 2, y: height - 6, "text-anchor": "middle", "font-size": 11,
    fill: "#555",
  });
  caption.textContent = `${series.name} (${series.currency})`;
  svg.appendChild(caption);
  container.appendChild(svg);
}

export function renderPieChart(container: HTMLElement, series: PlotSeriesOut): void {
  const size = 180;
  const radius = 70;
  const cx = size / 2;
  const cy = size / 2;
  const wrapper = document.createElement("div");
  wrapper.className = "pie-chart";
  wrapper.dataset.kind = series.kind;
  wrapper.dataset.name = series.name;
  const svg = svgElement("svg", { viewBox: `0 0 ${size} ${size}`, width: size, height: size });
  const total = series.values.reduce((a, b) => a + b, 0);
  if (total > 0) {
    let angle = -Math.PI / 2;
    series.values.forEach((value, i) => {
      if (value <= 0) return;
      const sweep = (value / total) * 2 * Math.PI;
      const x1 = cx + radius * Math.cos(angle);
      const y1 = cy + radius * Math.sin(angle);
      const end = angle + (sweep >= 2 * Math.PI ? sweep - 1e-4 : sweep);
      const x2 = cx + radius * Math.cos(end);
      const y2 = cy + radius * Math.sin(end);
      const large = sweep > Math.PI ? 1 : 0;
      svg.appendChild(svgElement("path", {
        d: `M ${cx} ${cy} L ${x1} ${y1} A ${radius} ${radius} 0 ${large} 1 ${x2} ${y2} Z`,
        fill: PALETTE[i % PALETTE.length],
        "data-label": series.labels[i],
      }));
      angle += sweep;
    });
  }
  wrapper.appendChild(svg);
  const legend = document.createElement("ul");
  legend.className = "pie-legend";
  series.labels.forEach((label, i) => {
    const item = document.createElement("li");
    const swatch = document.createElement("span");
    swatch.className = "swatch";
    swatch.style.background = PALETTE[i % PALETTE.length];
    item.appendChild(swatch);
    const text = document.createElement("span");
    text.className = "pie-value";
    text.dataset.value = displayValue(series.values[i]);
    text.textContent = `${label}: ${displayValue(series.values[i])} ${series.currency}`;
    item.appendChild(text);
    legend.appendChild(item);
  });
  wrapper.appendChild(legend);
  const title = document.createElement("h4");
  title.textContent = series.name;
  container.appendChild(title);
  container.appendChild(wrapper);
}

export function renderStepChart(container: HTMLElement, series: PlotSeriesOut): void {
  const width = 420;
  const height = 160;
  const pad = 30;
  const wrapper = document.createElement("div");
  wrapper.className = "step-chart";
  wrapper.dataset.kind = series.kind;
  wrapper.dataset.name = series.name;
  const title = document.createElement("h4");
  title.textContent = series.name;
  wrapper.appendChild(title);

  // labels look like "day 0-4": segment boundaries on the x axis
  const bounds = series.labels.map((label) => {
    const match = /day\s+([\d.]+)-([\d.]+)/.exec(label);
    return match ? [Number(match[1]), Number(match[2])] : [0, 1];
  });
  const maxDay = Math.max(...bounds.map(([, end]) => end), 1);
  const maxValue = Math.max(...series.values, 1);
  const svg = svgElement("svg", { viewBox: `0 0 ${width} ${height}`, width, height });
  const x = (day: number) => pad + (day / maxDay) * (width - 2 * pad);
  const y = (value: number) => height - pad - (value / maxValue) * (height - 2 * pad);
  let path = "";
  bounds.forEach(([start, end], i) => {
    const value = series.values[i];
    path += `${path ? "L" : "M"} ${x(start)} ${y(value)} L ${x(end)} ${y(value)} `;
  });
  svg.appendChild(svgElement("path", {
    d: path.trim(), fill: "none", stroke: PALETTE[0], "stroke-width": 2,
  }));
  svg.appendChild(svgElement("line", {
    x1: pad, y1: height - pad, x2: width - pad, y2: height - pad,
    stroke: "#999", "stroke-width": 1,
  }));
  wrapper.appendChild(svg);
  const legend = document.createElement("ul");
  legend.className = "step-legend";
  series.labels.forEach((label, i) => {
    const item = document.createElement("li");
    item.className = "step-value";
    item.dataset.value = displayValue(series.values[i]);
    item.textContent = `${label}: ${displayValue(series.values[i])} ${series.currency}/day`;
    legend.appendChild(item);
  });
  wrapper.appendChild(legend);
  container.appendChild(wrapper);
}
