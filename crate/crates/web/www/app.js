import init, { Demo } from "./pkg/rsup_web.js";

const $ = (id) => document.getElementById(id);
let demo = null;
let current = 0;
let trace = [];

function fail(err) {
  $("error").textContent = String(err);
}

function build() {
  $("error").textContent = "";
  try {
    demo = new Demo($("one-way").checked, $("block").checked, $("initial").value);
  } catch (err) {
    demo = null;
    $("summary").textContent = "";
    return fail(err);
  }
  $("summary").textContent = JSON.stringify(JSON.parse(demo.summary()), null, 2);
  trace = [];
  show(demo.initialState() ?? 0);
}

function show(state) {
  current = state;
  const view = JSON.parse(demo.state(state));
  $("trace").textContent = trace.join(",") || "(empty)";
  const box = $("enabled");
  box.replaceChildren();
  for (const ev of view.enabled) {
    const b = document.createElement("button");
    b.className = ev.controllable ? "ev" : "ev unc";
    b.textContent = ev.label ? `${ev.id} ${ev.label}` : String(ev.id);
    b.onclick = () => { trace.push(ev.id); show(ev.next); };
    box.appendChild(b);
  }
  $("state").textContent = JSON.stringify(view, null, 2);
}

$("build").onclick = build;
$("reset").onclick = () => { if (demo) { trace = []; show(demo.initialState() ?? 0); } };
$("goto").onclick = () => {
  if (!demo) return;
  $("error").textContent = "";
  try {
    const text = $("witness").value;
    const state = demo.locate(text);
    trace = text.split(/[ ,]+/).filter((t) => t).map(Number);
    show(state);
  } catch (err) { fail(err); }
};
$("solve").onclick = () => {
  if (!demo) return;
  $("error").textContent = "";
  const raw = $("target").value.trim();
  const target = raw === "" ? -1 : Number(raw);
  try {
    const report = demo.solve(current, Number($("event").value), target, $("literal").checked);
    $("solution").textContent = JSON.stringify(JSON.parse(report), null, 2);
  } catch (err) { fail(err); }
};

init().then(build, fail);
