import init, { blt_summary, type_one, singer } from "./pkg/flockgq_web.js";

const $ = (id) => document.getElementById(id);

function show(text) {
  const v = JSON.parse(text);
  if (v.error) {
    $("status").textContent = "error: " + v.error;
    $("out").textContent = "";
    return;
  }
  const graph = v.graph;
  if (graph) {
    const s = graph.srg;
    $("status").textContent = s.v !== undefined
      ? `hemisystem: ${v.hemisystem}, ${v.size} elements, srg(${s.v}, ${s.k}, ${s.lambda}, ${s.mu})`
      : `hemisystem: ${v.hemisystem}, graph is not strongly regular (${s.failure})`;
    draw(graph);
    delete v.graph;
  } else {
    $("status").textContent = `BLT-set: ${v.passed}`;
    clear();
  }
  $("out").textContent = JSON.stringify(v, null, 1);
}

function clear() {
  const c = $("graph");
  c.getContext("2d").clearRect(0, 0, c.width, c.height);
}

// Vertices on a circle, edges as faint chords.
function draw(graph) {
  clear();
  if (!graph.edges) return;
  const c = $("graph");
  const ctx = c.getContext("2d");
  const n = graph.vertices;
  const r = c.width / 2 - 12;
  const pos = Array.from({ length: n }, (_, i) => {
    const t = (2 * Math.PI * i) / n;
    return [c.width / 2 + r * Math.cos(t), c.height / 2 + r * Math.sin(t)];
  });
  ctx.strokeStyle = `rgba(30, 70, 160, ${Math.min(0.6, 200 / graph.edges.length + 0.03)})`;
  ctx.beginPath();
  for (const [a, b] of graph.edges) {
    ctx.moveTo(...pos[a]);
    ctx.lineTo(...pos[b]);
  }
  ctx.stroke();
  ctx.fillStyle = "#222";
  for (const [x, y] of pos) ctx.fillRect(x - 1.5, y - 1.5, 3, 3);
}

function run(f) {
  $("status").textContent = "working…";
  setTimeout(() => show(f()), 0);
}

await init();
$("status").textContent = "ready";
$("blt-go").onclick = () => run(() => blt_summary($("blt-family").value, Number($("blt-q").value)));
$("t1-go").onclick = () =>
  run(() => type_one($("t1-family").value, Number($("t1-q").value), Number($("t1-ell").value), $("t1-s").value, $("t1-o").value));
$("singer-go").onclick = () => run(() => singer(Number($("singer-q").value)));
