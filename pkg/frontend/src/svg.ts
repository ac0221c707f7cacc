/** Minimal deterministic SVG assembly (fixed number formatting, no DOM). */

export function fmt(value: number): string {
  const rounded = Math.round(value * 100) / 100;
  return Object.is(rounded, -0) ? "0" : String(rounded);
}

export function esc(text: string): string {
  return text
    .replace(/&/g, "&amp;")
    .replace(/</g, "&lt;")
    .replace(/>/g, "&gt;")
    .replace(/"/g, "&quot;");
}

export function el(
  tag: string,
  attrs: Record<string, string | number>,
  children?: string | string[],
): string {
  const attrText = Object.entries(attrs)
    .map(([key, value]) => ` ${key}="${typeof value === "number" ? fmt(value) : esc(value)}"`)
    .join("");
  if (children === undefined) return `<${tag}${attrText}/>`;
  const body = Array.isArray(children) ? children.join("") : children;
  return `<${tag}${attrText}>${body}</${tag}>`;
}

export function text(
  x: number,
  y: number,
  content: string,
  attrs: Record<string, string | number> = {},
): string {
  return el("text", { x, y, "font-family": "Helvetica, Arial, sans-serif", ...attrs }, esc(content));
}

export function svgDocument(width: number, height: number, body: string[]): string {
  return [
    `<svg xmlns="http://www.w3.org/2000/svg" width="${fmt(width)}" height="${fmt(height)}" ` +
    `viewBox="0 0 ${fmt(width)} ${fmt(height)}">`,
    el("rect", { x: 0, y: 0, width, height, fill: "#ffffff" }),
    ...body,
    "</svg>",
    "",
  ].join("\n");
}
