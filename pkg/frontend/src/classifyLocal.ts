// Offline fallback: the same case-insensitive whole-word matching the
// service applies, over the embedded keyword table export.

import { KEYWORD_TABLE } from "./keywordTable";

const PRINCIPLE_ORDER = ["Confidentiality", "Integrity", "Availability", "Accountability"];

export function normalizeThreatName(text: string): string {
  const cleaned = text
    .toLowerCase()
    .replace(/[^a-z0-9]+/g, " ")
    .trim();
  return cleaned.replace(/\s+/g, " ");
}

export function classifyLocally(name: string): string[] {
  const haystack = ` ${normalizeThreatName(name)} `;
  const matched = new Set<string>();
  for (const entry of KEYWORD_TABLE) {
    for (const keyword of entry.keywords) {
      if (haystack.includes(` ${normalizeThreatName(keyword)} `)) {
        for (const principle of entry.principles) matched.add(principle);
        break;
      }
    }
  }
  return PRINCIPLE_ORDER.filter((p) => matched.has(p));
}
