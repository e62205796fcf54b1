// Minimal deterministic SVG builder: fixed canvas, numeric formatting with
// 6 decimals, and machine-readable axis metadata on the root element so
// tests (and humans) can assert domains and scales without rendering.

export interface Scale {
  kind: "linear" | "log";
  domain: [number, number];
  range: [number, number];
}

export function linearScale(domain: [number, number], range: [number, number]): Scale {
  return { kind: "linear", domain, range };
}

export function logScale(domain: [number, number], range: [number, number]): Scale {
  if (domain[0] <= 0 || domain[1] <= 0) {
    throw new Error(`log scale requires a positive domain, got [${domain}]`);
  }
  return { kind: "log", domain, range };
}

export function apply(scale: Scale, value: number): number {
  const [d0, d1] = scale.domain;
  const [r0, r1] = scale.range;
  let t: number;
  if (scale.kind === "log") {
    t = (Math.log10(value) - Math.log10(d0)) / (Math.log10(d1) - Math.log10(d0) || 1);
  } else {
    t = (value - d0) / (d1 - d0 || 1);
  }
  return r0 + t * (r1 - r0);
}

const fmt = (v: number): string => {
  const s = v.toFixed(6);
  return s === "-0.000000" ? "0.000000" : s;
};

export interface Series {
  label: string;
  color: string;
  xs: number[];
  ys: number[];
}

export interface FigureSpec {
  title: string;
  xLabel: string;
  yLabel: string;
  x: Scale;
  y: Scale;
  series: Series[];
  hLines?: { value: number; label: string; color: string }[];
}

export const WIDTH = 640;
export const HEIGHT = 400;
export const MARGIN = { left: 64, right: 16, top: 32, bottom: 44 };

function ticks(scale: Scale, count = 5): number[] {
  const [d0, d1] = scale.domain;
  if (scale.kind === "log") {
    const lo = Math.ceil(Math.log10(d0));
    const hi = Math.floor(Math.log10(d1));
    const out: number[] = [];
    for (let e = lo; e <= hi; e++) out.push(Math.pow(10, e));
    return out.length >= 2 ? out : [d0, d1];
  }
  const out: number[] = [];
  for (let i = 0; i <= count; i++) out.push(d0 + ((d1 - d0) * i) / count);
  return out;
}

const tickText = (v: number): string =>
  Math.abs(v) >= 1e4 || (Math.abs(v) < 1e-3 && v !== 0) ? v.toExponential(0) : String(Math.round(v * 1000) / 1000);

export function render(spec: FigureSpec): string {
  const lines: string[] = [];
  const xd = spec.x.domain;
  const yd = spec.y.domain;
  lines.push(
    `<svg xmlns="http://www.w3.org/2000/svg" width="${WIDTH}" height="${HEIGHT}" ` +
    `viewBox="0 0 ${WIDTH} ${HEIGHT}" data-x-scale="${spec.x.kind}" data-y-scale="${spec.y.kind}" ` +
    `data-x-domain="${xd[0]},${xd[1]}" data-y-domain="${fmt(yd[0])},${fmt(yd[1])}">`,
  );
  lines.push(`<rect width="${WIDTH}" height="${HEIGHT}" fill="white"/>`);
  lines.push(`<text x="${WIDTH / 2}" y="20" text-anchor="middle" font-size="14">${spec.title}</text>`);

  const plotX0 = MARGIN.left;
  const plotX1 = WIDTH - MARGIN.right;
  const plotY0 = HEIGHT - MARGIN.bottom;
  const plotY1 = MARGIN.top;
  lines.push(`<line x1="${plotX0}" y1="${plotY0}" x2="${plotX1}" y2="${plotY0}" stroke="black"/>`);
  lines.push(`<line x1="${plotX0}" y1="${plotY0}" x2="${plotX0}" y2="${plotY1}" stroke="black"/>`);

  for (const t of ticks(spec.x)) {
    const px = apply(spec.x, t);
    lines.push(`<line x1="${fmt(px)}" y1="${plotY0}" x2="${fmt(px)}" y2="${plotY0 + 4}" stroke="black"/>`);
    lines.push(`<text x="${fmt(px)}" y="${plotY0 + 18}" text-anchor="middle" font-size="10">${tickText(t)}</text>`);
  }
  for (const t of ticks(spec.y)) {
    const py = apply(spec.y, t);
    lines.push(`<line x1="${plotX0 - 4}" y1="${fmt(py)}" x2="${plotX0}" y2="${fmt(py)}" stroke="black"/>`);
    lines.push(`<text x="${plotX0 - 8}" y="${fmt(py + 3)}" text-anchor="end" font-size="10">${tickText(t)}</text>`);
  }
  lines.push(
    `<text x="${(plotX0 + plotX1) / 2}" y="${HEIGHT - 8}" text-anchor="middle" font-size="12">${spec.xLabel}</text>`,
  );
  lines.push(
    `<text x="16" y="${(plotY0 + plotY1) / 2}" text-anchor="middle" font-size="12" ` +
    `transform="rotate(-90 16 ${(plotY0 + plotY1) / 2})">${spec.yLabel}</text>`,
  );

  for (const h of spec.hLines ?? []) {
    const py = apply(spec.y, h.value);
    lines.push(
      `<line x1="${plotX0}" y1="${fmt(py)}" x2="${plotX1}" y2="${fmt(py)}" ` +
      `stroke="${h.color}" stroke-dasharray="6,4" data-ref="${h.label}"/>`,
    );
  }

  let legendY = plotY1 + 6;
  for (const s of spec.series) {
    const pts = s.xs.map((x, i) => `${fmt(apply(spec.x, x))},${fmt(apply(spec.y, s.ys[i]))}`).join(" ");
    lines.push(`<polyline fill="none" stroke="${s.color}" stroke-width="1.5" data-series="${s.label}" points="${pts}"/>`);
    lines.push(`<line x1="${plotX1 - 110}" y1="${legendY}" x2="${plotX1 - 90}" y2="${legendY}" stroke="${s.color}" stroke-width="2"/>`);
    lines.push(`<text x="${plotX1 - 84}" y="${legendY + 3}" font-size="10">${s.label}</text>`);
    legendY += 14;
  }

  lines.push("</svg>");
  return lines.join("\n") + "\n";
}

export function extent(values: number[], padFraction = 0.05): [number, number] {
  let lo = Infinity;
  let hi = -Infinity;
  for (const v of values) {
    if (v < lo) lo = v;
    if (v > hi) hi = v;
  }
  if (!isFinite(lo) || !isFinite(hi)) throw new Error("no finite values to plot");
  if (lo === hi) {
    lo -= 0.5;
    hi += 0.5;
  }
  const pad = (hi - lo) * padFraction;
  return [lo - pad, hi + pad];
}
