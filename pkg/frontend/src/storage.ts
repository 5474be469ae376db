// Wizard persistence in browser-local storage, under a versioned namespace.

const WIZARD_KEY = "quanttm.wizard.v1";
const PLOTS_CACHE_KEY = "quanttm.plotsCache.v1";

export function loadStored<T>(key: string): T | null {
  if (typeof localStorage === "undefined") return null;
  try {
    const raw = localStorage.getItem(key);
    return raw ? (JSON.parse(raw) as T) : null;
  } catch {
    return null;
  }
}

export function saveStored(key: string, value: unknown): void {
  if (typeof localStorage === "undefined") return;
  try {
    localStorage.setItem(key, JSON.stringify(value));
  } catch {
    // full or unavailable storage must never break the wizard
  }
}

export function removeStored(key: string): void {
  if (typeof localStorage === "undefined") return;
  try {
    localStorage.removeItem(key);
  } catch {
    // ignore
  }
}

export const storageKeys = { wizard: WIZARD_KEY, plotsCache: PLOTS_CACHE_KEY };
