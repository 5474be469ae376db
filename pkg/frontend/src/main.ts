// Entry point: mount the wizard onto #app. The API base defaults to the
// serving origin; set window.QUANTTM_API_BASE to point elsewhere.

import { ApiClient } from "./api";
import { createWizard } from "./wizard";

declare global {
  interface Window {
    QUANTTM_API_BASE?: string;
  }
}

export function bootstrap(root: HTMLElement): void {
  const base = window.QUANTTM_API_BASE ?? "";
  createWizard(root, new ApiClient(base));
}

const appRoot = typeof document !== "undefined" ? document.getElementById("app") : null;
if (appRoot) {
  bootstrap(appRoot);
}
