// Progress chart: plots the increase-rate series computed by the server
// (simple moving average of solve times over the first window). The client
// never recomputes it; with fewer than 10 solves it shows a placeholder.

const W = 420;
const H = 180;
const PAD = 28;

export function renderChart(container: HTMLElement, ratios: number[]): void {
  container.replaceChildren();
  const doc = container.ownerDocument;
  if (ratios.length === 0) {
    const note = doc.createElement("p");
    note.className = "chart-placeholder";
    note.textContent = "collecting data: chart appears after 10 solved mazes";
    container.appendChild(note);
    return;
  }
  const svg = doc.createElementNS("http://www.w3.org/2000/svg", "svg");
  svg.setAttribute("viewBox", `0 0 ${W} ${H}`);
  svg.setAttribute("width", String(W));
  svg.setAttribute("height", String(H));

  const lo = Math.min(1, ...ratios);
  const hi = Math.max(1, ...ratios);
  const span = hi - lo || 1;
  const x = (i: number) =>
    ratios.length === 1 ? W / 2 : PAD + (i * (W - 2 * PAD)) / (ratios.length - 1);
  const y = (v: number) => H - PAD - ((v - lo) * (H - 2 * PAD)) / span;

  const baseline = doc.createElementNS(svg.namespaceURI, "line");
  baseline.setAttribute("x1", String(PAD));
  baseline.setAttribute("x2", String(W - PAD));
  baseline.setAttribute("y1", String(y(1)));
  baseline.setAttribute("y2", String(y(1)));
  baseline.setAttribute("class", "chart-baseline");
  svg.appendChild(baseline);

  const line = doc.createElementNS(svg.namespaceURI, "polyline");
  line.setAttribute("points", ratios.map((v, i) => `${x(i)},${y(v)}`).join(" "));
  line.setAttribute("class", "chart-line");
  line.setAttribute("fill", "none");
  svg.appendChild(line);

  for (let i = 0; i < ratios.length; i++) {
    const dot = doc.createElementNS(svg.namespaceURI, "circle");
    dot.setAttribute("cx", String(x(i)));
    dot.setAttribute("cy", String(y(ratios[i])));
    dot.setAttribute("r", "2.5");
    dot.setAttribute("class", "chart-dot");
    dot.setAttribute("data-value", String(ratios[i]));
    svg.appendChild(dot);
  }
  container.appendChild(svg);
}
