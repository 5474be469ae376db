// Starts two real analysis services for the browser tests: one on the
// workshop project (mutated by the wizard run) and one on the bundled
// case-study fixture. Both serve writable temp copies.

import { spawn, type ChildProcess } from "node:child_process";
import { copyFileSync, mkdtempSync } from "node:fs";
import { tmpdir } from "node:os";
import { dirname, join } from "node:path";
import { fileURLToPath } from "node:url";

const here = dirname(fileURLToPath(import.meta.url));
const repoRoot = join(here, "..", "..");

const SERVICES = [
  { source: join(here, "data", "focus-group.json"), port: 8931 },
  { source: join(repoRoot, "src", "quanttm", "fixtures", "swiss-sme.json"), port: 8932 },
];

async function waitReady(port: number, timeoutMs = 30000): Promise<void> {
  const deadline = Date.now() + timeoutMs;
  let lastError: unknown = null;
  while (Date.now() < deadline) {
    try {
      const response = await fetch(`http://127.0.0.1:${port}/project`);
      if (response.ok) return;
    } catch (error) {
      lastError = error;
    }
    await new Promise((resolve) => setTimeout(resolve, 200));
  }
  throw new Error(`service on port ${port} did not come up: ${lastError}`);
}

export default async function setup(): Promise<() => void> {
  const workdir = mkdtempSync(join(tmpdir(), "quanttm-ui-"));
  const children: ChildProcess[] = [];
  for (const service of SERVICES) {
    const projectCopy = join(workdir, `project-${service.port}.json`);
    copyFileSync(service.source, projectCopy);
    const child = spawn(
      "python3",
      ["-m", "quanttm.cli", "serve", "--project", projectCopy,
       "--port", String(service.port), "--host", "127.0.0.1"],
      { stdio: "ignore" },
    );
    children.push(child);
  }
  await Promise.all(SERVICES.map((s) => waitReady(s.port)));
  return () => {
    for (const child of children) child.kill("SIGTERM");
  };
}
