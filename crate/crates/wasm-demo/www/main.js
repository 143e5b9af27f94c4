import init, { fit_and_spectrum, averaged_curves, landscape } from "./pkg/resent_wasm_demo.js";

const $ = (id) => document.getElementById(id);
const num = (id) => Number($(id).value);
const status = (msg) => { $("status").textContent = msg; };

// Draws one or more series on a canvas with a shared y range.
function plot(canvas, series, { log = false, points = false } = {}) {
  const ctx = canvas.getContext("2d");
  const { width: w, height: h } = canvas;
  ctx.clearRect(0, 0, w, h);
  const tf = (v) => (log ? Math.log10(Math.max(v, 1e-40)) : v);
  let lo = Infinity, hi = -Infinity, n = 0;
  for (const s of series) {
    n = Math.max(n, s.y.length);
    for (const v of s.y) { lo = Math.min(lo, tf(v)); hi = Math.max(hi, tf(v)); }
  }
  if (lo === hi) { lo -= 1; hi += 1; }
  const pad = 24;
  const X = (i) => pad + (i / Math.max(n - 1, 1)) * (w - 2 * pad);
  const Y = (v) => h - pad - ((tf(v) - lo) / (hi - lo)) * (h - 2 * pad);
  ctx.strokeStyle = "#bbb";
  ctx.strokeRect(pad, pad, w - 2 * pad, h - 2 * pad);
  if (!log && lo < 0 && hi > 0) {
    ctx.beginPath(); ctx.moveTo(pad, Y(0)); ctx.lineTo(w - pad, Y(0)); ctx.stroke();
  }
  ctx.fillStyle = "#555";
  ctx.font = "11px sans-serif";
  ctx.fillText(log ? `1e${hi.toFixed(0)}` : hi.toPrecision(3), 2, pad - 6);
  ctx.fillText(log ? `1e${lo.toFixed(0)}` : lo.toPrecision(3), 2, h - 6);
  for (const s of series) {
    ctx.strokeStyle = ctx.fillStyle = s.color;
    if (s.points || points) {
      s.y.forEach((v, i) => ctx.fillRect(X(i) - 1.5, Y(v) - 1.5, 3, 3));
    } else {
      ctx.beginPath();
      s.y.forEach((v, i) => (i ? ctx.lineTo(X(i), Y(v)) : ctx.moveTo(X(i), Y(v))));
      ctx.stroke();
    }
  }
}

const fmt = (a) => Array.from(a, (v) => v.toPrecision(6)).join(", ");

function fitParams() {
  return [$("fit-family").value, num("fit-order"), num("fit-eta"), num("fit-n"), num("fit-noise"), BigInt(num("fit-seed"))];
}

function runFit() {
  const v = fit_and_spectrum(...fitParams());
  plot($("fit-curve"), [
    { y: v.y, color: "#000", points: true },
    { y: v.ols_curve, color: "#999" },
    { y: v.fit_curve, color: "#06c" },
  ]);
  plot($("fit-acf"), [{ y: v.autocorr, color: "#06c" }]);
  plot($("fit-power"), [{ y: v.corr_power, color: "#c60" }], { log: true });
  $("fit-summary").textContent =
    `least squares  [mse, mlp, total] = [${fmt(v.ols_loss)}]\n` +
    `entropy loss   [mse, mlp, total] = [${fmt(v.fit_loss)}]  converged: ${v.converged}`;
}

function runAverage() {
  const v = averaged_curves($("avg-family").value, num("avg-order"), num("avg-n"), num("avg-reps"), BigInt(num("avg-seed")));
  plot($("avg-acf"), [{ y: v.mean_autocorr, color: "#06c" }]);
  plot($("avg-sig"), [{ y: v.mean_signature, color: "#c60" }], { log: true });
  $("avg-summary").textContent =
    `mean rho(1) = ${v.mean_autocorr[1].toPrecision(5)}\n` +
    `1 - MLP percentiles (5, 50, 95) = [${fmt(v.bracket)}]`;
}

function runLandscape() {
  const [fam, order, eta, n, noise, seed] = fitParams();
  const v = landscape(fam, order, eta, num("ls-axis"), num("ls-span"), num("ls-steps"), n, noise, seed);
  plot($("ls-plot"), [
    { y: v.mse, color: "#999" },
    { y: v.total, color: "#06c" },
  ]);
}

function guarded(f) {
  return () => {
    try { f(); status(""); } catch (e) { status(String(e)); }
  };
}

await init();
$("fit-run").onclick = guarded(runFit);
$("avg-run").onclick = guarded(runAverage);
$("ls-run").onclick = guarded(runLandscape);
guarded(() => { runFit(); runAverage(); runLandscape(); })();
