import init, { design, code_params, simulate } from "./pkg/eaqldpc_web.js";

const $ = (id) => document.getElementById(id);

function source() {
  return {
    family: $("family").value,
    a: Number($("a").value),
    b: Number($("b").value),
    type: $("type").value,
  };
}

function show(el, text) {
  const res = JSON.parse(text);
  el.classList.toggle("error", "error" in res);
  return res;
}

function renderDesign() {
  const s = source();
  const out = $("design-out");
  const res = show(out, design(s.family, s.a, s.b, 40));
  if (res.error) { out.textContent = res.error; return; }
  const lines = res.blocks.map((blk) => blk.join("  "));
  if (res.b > res.blocks.length) lines.push(`... ${res.b - res.blocks.length} more`);
  out.textContent =
    `${res.name}: v = ${res.v}, b = ${res.b}, block size ${res.mu}, r = ${res.r}\n\n` + lines.join("\n");
}

function renderParams() {
  const s = source();
  const out = $("params-out");
  out.textContent = "working...";
  setTimeout(() => {
    const res = show(out, code_params(s.family, s.a, s.b, s.type));
    if (res.error) { out.textContent = res.error; return; }
    const d = res.d ?? (res.d_upper ? `${res.d_lower}..${res.d_upper}` : `>=${res.d_lower}`);
    out.textContent =
      `${res.name} Type ${res.type}: [[${res.n},${res.k},${d};${res.c}]]\n` +
      `rank H = ${res.rank}, rate = ${res.rate}, net rate = ${res.net_rate}\n` +
      `distance: ${res.certification}`;
  }, 0);
}

function renderSim() {
  const s = source();
  const out = $("sim-out");
  out.textContent = "simulating...";
  setTimeout(() => {
    const res = show(out, simulate(s.family, s.a, s.b, s.type,
      Number($("fm").value), Number($("trials").value), Number($("seed").value)));
    if (res.error) { out.textContent = res.error; return; }
    out.textContent =
      `${res.name} Type ${res.type}, n = ${res.n}, f_m = ${res.f_m}\n` +
      `${res.errors} block errors in ${res.trials} trials: BLER ${res.bler.toExponential(3)}\n` +
      `95% interval [${res.ci_low.toExponential(3)}, ${res.ci_high.toExponential(3)}]`;
  }, 0);
}

$("family").addEventListener("change", () => {
  const sts = $("family").value === "STS";
  $("a-label").textContent = sts ? "v" : "m";
  $("b-wrap").hidden = sts;
  if (sts) $("a").value = 9;
});

await init();
$("show-design").addEventListener("click", renderDesign);
$("show-params").addEventListener("click", renderParams);
$("run-sim").addEventListener("click", renderSim);
