// DOM-driving helpers for the wizard tests.

export async function until(
  condition: () => boolean,
  label = "condition",
  timeoutMs = 15000,
): Promise<void> {
  const deadline = Date.now() + timeoutMs;
  while (Date.now() < deadline) {
    if (condition()) return;
    await new Promise((resolve) => setTimeout(resolve, 25));
  }
  throw new Error(`timed out waiting for ${label}`);
}

export function click(root: ParentNode, selector: string): void {
  const el = root.querySelector<HTMLElement>(selector);
  if (!el) throw new Error(`no element matches ${selector}`);
  el.dispatchEvent(new window.MouseEvent("click", { bubbles: true }));
}

export function setValue(
  root: ParentNode,
  selector: string,
  value: string,
): void {
  const el = root.querySelector<HTMLInputElement | HTMLTextAreaElement>(selector);
  if (!el) throw new Error(`no element matches ${selector}`);
  el.value = value;
  el.dispatchEvent(new window.Event("change", { bubbles: true }));
}

export function text(root: ParentNode, selector: string): string {
  const el = root.querySelector<HTMLElement>(selector);
  if (!el) throw new Error(`no element matches ${selector}`);
  return el.textContent ?? "";
}

export function mount(): HTMLElement {
  document.body.innerHTML = "";
  const root = document.createElement("div");
  document.body.appendChild(root);
  return root;
}
