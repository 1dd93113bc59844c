import init, { specular_report, solve_svg, sweep } from "./pkg/specular_web.js";

const $ = (id) => document.getElementById(id);

function fail(el, err) {
  el.innerHTML = "";
  const p = document.createElement("p");
  p.className = "error";
  p.textContent = String(err);
  el.appendChild(p);
}

function runSpecular() {
  try {
    $("sd-out").textContent = specular_report($("sd-expr").value, Number($("sd-x").value));
  } catch (e) {
    fail($("sd-out"), e);
  }
}

function runSolve() {
  try {
    $("solve-out").innerHTML = solve_svg($("problem").value, $("solve-scheme").value, Number($("solve-h").value));
  } catch (e) {
    fail($("solve-out"), e);
  }
}

function runSweep() {
  $("sweep-table").textContent = "";
  try {
    const out = sweep($("problem").value, $("sweep-schemes").value,
      Number($("sweep-kmin").value), Number($("sweep-kmax").value));
    $("sweep-plot").innerHTML = out.svg;
    $("sweep-table").textContent = out.table;
    out.free();
  } catch (e) {
    fail($("sweep-plot"), e);
  }
}

await init();
$("sd-run").addEventListener("click", runSpecular);
$("solve-run").addEventListener("click", runSolve);
$("sweep-run").addEventListener("click", runSweep);
runSpecular();
runSolve();
