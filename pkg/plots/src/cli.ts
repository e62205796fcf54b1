// Shared entry-point wrapper: each figure script validates argv, renders,
// and only then writes the output file (no file on failure).

import { writeFileSync } from "node:fs";

export function runCli(
  name: string,
  argNames: string[],
  renderFn: (...inputs: string[]) => string,
): void {
  const args = process.argv.slice(2);
  if (args.length !== argNames.length + 1) {
    process.stderr.write(`usage: ${name} ${argNames.map((a) => `<${a}>`).join(" ")} <out.svg>\n`);
    process.exit(2);
  }
  const inputs = args.slice(0, -1);
  const outPath = args[args.length - 1];
  let svg: string;
  try {
    svg = renderFn(...inputs);
  } catch (e) {
    process.stderr.write(`${name}: ${(e as Error).message}\n`);
    process.exit(1);
  }
  writeFileSync(outPath, svg!, "utf-8");
  process.stdout.write(`${outPath}\n`);
}
