import init, * as rankexp from "./pkg/rankexp_web.js";

const text = document.getElementById("graph");
const report = document.getElementById("report");
const canvas = document.getElementById("canvas");
const ctx = canvas.getContext("2d");
const palette = ["#4e79a7", "#f28e2b", "#59a14f", "#b07aa1", "#76b7b2", "#edc948", "#ff9da7", "#9c755f"];

// Current drawing: positions plus what the click handler may act on.
let view = { positions: new Map(), editable: false };
let pending = null;

function call(f) {
  try {
    return JSON.parse(f());
  } catch (e) {
    report.textContent = String(e);
    return null;
  }
}

function circle(labels, cx, cy, r) {
  const pos = new Map();
  labels.forEach((v, i) => {
    const t = (2 * Math.PI * i) / Math.max(labels.length, 1) - Math.PI / 2;
    pos.set(v, [cx + r * Math.cos(t), cy + r * Math.sin(t)]);
  });
  return pos;
}

function draw(graph, positions, style = {}) {
  ctx.clearRect(0, 0, canvas.width, canvas.height);
  for (const [u, v] of graph.edges) {
    const [a, b] = [positions.get(u), positions.get(v)];
    const cross = style.cross && style.cross(u, v);
    ctx.strokeStyle = cross ? "#d62728" : "#888";
    ctx.lineWidth = cross ? 2.5 : 1;
    ctx.beginPath();
    ctx.moveTo(...a);
    ctx.lineTo(...b);
    ctx.stroke();
  }
  const small = graph.vertices.length > 12;
  for (const v of graph.vertices) {
    const [x, y] = positions.get(v);
    ctx.fillStyle = style.fill ? style.fill(v) : v === pending ? "#d62728" : "#4e79a7";
    ctx.beginPath();
    ctx.arc(x, y, small ? 7 : 14, 0, 2 * Math.PI);
    ctx.fill();
    ctx.fillStyle = "#000";
    ctx.font = small ? "9px monospace" : "13px monospace";
    ctx.fillText(v, x + (small ? 9 : 16), y - (small ? 6 : 10));
  }
}

function showGraph() {
  const g = call(() => rankexp.graph(text.value));
  if (!g) return;
  view = { positions: circle(g.graph.vertices, 360, 360, 280), editable: true, graph: g.graph };
  draw(g.graph, view.positions);
}

function replaceGraph(result) {
  if (!result) return;
  text.value = result.edge_list;
  view.graph = result.graph;
  draw(result.graph, view.positions);
}

function characterize() {
  const c = call(() => rankexp.characterize(text.value));
  if (!c) return;
  const lines = [
    `rank-width ${c.rank_width}`,
    `linear rank-width ${c.linear_rank_width}`,
    c.distance_hereditary ? "distance-hereditary" : "not distance-hereditary",
    c.obstructions.length ? `obstructions: ${c.obstructions.join(", ")}` : "no C5, N or Q vertex-minor",
    `tree witness: ${c.tree_witness_size ?? "none"}${c.tree_witness_size ? " vertices" : ""}`,
    `path witness: ${c.path_witness_size ?? "none"}${c.path_witness_size ? " vertices" : ""}`,
  ];
  report.textContent = lines.join("\n");
}

function expand(linear) {
  const x = call(() => rankexp.expand(text.value, linear));
  if (!x) return;
  // One small circle per sector, sectors on a large circle.
  const nodes = Object.keys(x.sectors);
  const centres = circle(nodes, 360, 360, nodes.length > 1 ? 250 : 0);
  const sectorOf = new Map();
  const positions = new Map();
  nodes.forEach((node, i) => {
    const [cx, cy] = centres.get(node);
    const members = x.sectors[node];
    circle(members, cx, cy, members.length > 1 ? 55 : 0).forEach((p, v) => positions.set(v, p));
    members.forEach((v) => sectorOf.set(v, i));
  });
  const loose = x.host.vertices.filter((v) => !positions.has(v));
  circle(loose, 360, 360, 340).forEach((p, v) => positions.set(v, p));
  const pivots = new Set(x.pivot_set);
  view = { positions, editable: false };
  draw(x.host, positions, {
    cross: (u, v) => sectorOf.has(u) && sectorOf.has(v) && sectorOf.get(u) !== sectorOf.get(v),
    fill: (v) => (pivots.has(v) ? "#bbb" : palette[(sectorOf.get(v) ?? 0) % palette.length]),
  });
  report.textContent = [
    `k = ${x.k}`,
    `host: ${x.host.vertices.length} vertices (bound ${x.size_bound}), pivot set of ${x.pivot_set.length}`,
    `${linear ? "path" : "tree"}-decomposition width ${x.width} (bound ${x.width_bound})`,
    x.issues.length ? `issues:\n${x.issues.join("\n")}` : "all checks hold",
  ].join("\n");
}

canvas.addEventListener("click", (ev) => {
  if (!view.editable) return;
  const r = canvas.getBoundingClientRect();
  const [mx, my] = [ev.clientX - r.left, ev.clientY - r.top];
  let hit = null;
  for (const [v, [x, y]] of view.positions) {
    if ((x - mx) ** 2 + (y - my) ** 2 < 16 ** 2) hit = v;
  }
  if (hit === null) return;
  if (!ev.shiftKey) {
    pending = null;
    replaceGraph(call(() => rankexp.local_complement(text.value, hit)));
  } else if (pending === null || pending === hit) {
    pending = hit;
    draw(view.graph, view.positions);
  } else {
    const u = pending;
    pending = null;
    replaceGraph(call(() => rankexp.pivot(text.value, u, hit)));
  }
});

await init();
document.getElementById("draw").onclick = showGraph;
document.getElementById("characterize").onclick = characterize;
document.getElementById("expand").onclick = () => expand(false);
document.getElementById("expand-linear").onclick = () => expand(true);
showGraph();
