// Built with: wasm-pack build crates/web --target web --out-dir www/pkg
import init, { conical_volume, cusp_table, hyperelliptic } from "./pkg/wpvol_web.js";

const $ = (id) => document.getElementById(id);

function table(rows, cols) {
  const head = "<tr>" + cols.map((c) => `<th>${c}</th>`).join("") + "</tr>";
  const body = rows
    .map((r) => "<tr>" + cols.map((c) => `<td>${r[c]}</td>`).join("") + "</tr>")
    .join("");
  return `<table>${head}${body}</table>`;
}

function guarded(out, f) {
  try {
    f();
  } catch (e) {
    out.innerHTML = `<span class="err">${String(e)}</span>`;
  }
}

await init();

$("cone-go").onclick = () =>
  guarded($("cone-out"), () => {
    const r = JSON.parse(conical_volume($("cone-t").value, $("cone-merged").checked));
    $("cone-out").textContent =
      `admissible: ${r.admissible}\nV = ${r.V}\nvol = ${r.vol_coeff} · π^${r.pi_exp} ≈ ${r.decimal}`;
  });

$("cusp-go").onclick = () =>
  guarded($("cusp-out"), () => {
    const rows = JSON.parse(cusp_table(Number($("cusp-n").value)));
    $("cusp-out").innerHTML = table(rows, ["n", "V", "vol_coeff", "pi_exp", "decimal"]);
  });

$("hyp-go").onclick = () =>
  guarded($("hyp-out"), () => {
    const h = JSON.parse(hyperelliptic(Number($("hyp-g").value)));
    $("hyp-out").innerHTML =
      table(h.rows, ["g", "n", "v_norm", "vol_coeff", "pi_exp", "decimal"]) +
      "<p>Consecutive ratios vol(H<sub>g</sub>)/vol(H<sub>g−1</sub>)</p>" +
      table(h.ratios, ["g", "ratio_coeff", "ratio_pi_exp"]);
  });
