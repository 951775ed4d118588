import init, { eigenTable, structurePattern, limitCurve } from './pkg/attenuated_wasm.js';

const num = (sec, name) => Number(sec.querySelector(`[name="${name}"]`).value);
const val = (sec, name) => sec.querySelector(`[name="${name}"]`).value;

function el(tag, attrs = {}, ...kids) {
  const e = document.createElement(tag);
  for (const [k, v] of Object.entries(attrs)) e.setAttribute(k, v);
  for (const k of kids) e.append(k);
  return e;
}

function run(sec, f) {
  const out = sec.querySelector('.out');
  out.replaceChildren();
  try {
    out.append(f());
  } catch (e) {
    out.append(el('p', { class: 'err' }, String(e)));
  }
}

const label = (p) => `(${p[0]},${p[1]})`;

function showEigen(sec) {
  const d = JSON.parse(eigenTable(num(sec, 'q'), num(sec, 'n'), num(sec, 'l'), num(sec, 'm')));
  const which = val(sec, 'which');
  const rows = d[which];
  const frag = document.createDocumentFragment();
  frag.append(el('p', {}, `|X| = ${d.vertices}; valencies ${d.valencies.join(', ')}; multiplicities ${d.multiplicities.join(', ')}`));
  const head = el('tr', {}, el('th', {}, which === 'T' ? 'ij \\ rs' : 'rs \\ ij'), ...d.domain.map((p) => el('th', {}, label(p))));
  const body = rows.map((r, a) => el('tr', {}, el('th', {}, label(d.domain[a])), ...r.map((x) => el('td', {}, x))));
  frag.append(el('table', {}, head, ...body));
  return frag;
}

function showPattern(sec) {
  const key = val(sec, 'key').split(',').map(Number);
  const ij = [num(sec, 'i'), num(sec, 'j')];
  const dual = val(sec, 'table') === 'q';
  const d = JSON.parse(structurePattern(num(sec, 'q'), num(sec, 'n'), num(sec, 'l'), num(sec, 'm'), dual,
    new Int32Array(key), new Int32Array(ij)));
  const cells = new Map(d.cells.map((c) => [label(c.ab), c.value]));
  const amax = Math.max(...d.cells.map((c) => c.ab[0]));
  const bmax = Math.max(...d.cells.map((c) => c.ab[1]));
  const rows = [el('tr', {}, el('th', {}, 'a \\ b'), ...Array.from({ length: bmax + 1 }, (_, b) => el('th', {}, String(b))))];
  for (let a = 0; a <= amax; a++) {
    const tds = [];
    for (let b = 0; b <= bmax; b++) {
      const v = cells.get(label([a, b]));
      const cls = [v !== undefined && v !== '0' ? 'nz' : '', a === ij[0] && b === ij[1] ? 'here' : ''].join(' ').trim();
      tds.push(el('td', cls ? { class: cls } : {}, v === undefined ? '' : v));
    }
    rows.push(el('tr', {}, el('th', {}, String(a)), ...tds));
  }
  const frag = document.createDocumentFragment();
  const name = dual ? 'q' : 'p';
  frag.append(el('p', {}, `${name}_{${label(key)},${label(ij)}}^{(a,b)}; order check ${d.compat.order}: ${d.compat.pass ? 'pass' : `${d.compat.violations} violations`}`));
  frag.append(el('table', { class: 'grid' }, ...rows));
  return frag;
}

const SVG = 'http://www.w3.org/2000/svg';
function svg(tag, attrs) {
  const e = document.createElementNS(SVG, tag);
  for (const [k, v] of Object.entries(attrs)) e.setAttribute(k, v);
  return e;
}

function showLimit(sec) {
  const d = JSON.parse(limitCurve(num(sec, 'p'), num(sec, 'r'), num(sec, 'n'), num(sec, 'm'), num(sec, 'kmin'), num(sec, 'kmax')));
  const [W, H, pad] = [640, 360, 40];
  const series = d.series.filter((s) => s.errors.some((e) => e > 1e-60));
  const logs = series.flatMap((s) => s.errors.filter((e) => e > 0).map(Math.log10));
  const [lo, hi] = [Math.min(...logs), Math.max(...logs)];
  const [k0, k1] = [d.k[0], d.k[d.k.length - 1]];
  const x = (k) => pad + ((k - k0) / Math.max(1, k1 - k0)) * (W - 2 * pad);
  const y = (e) => H - pad - ((Math.log10(e) - lo) / Math.max(1e-9, hi - lo)) * (H - 2 * pad);
  const g = svg('svg', { width: W, height: H });
  g.append(svg('line', { x1: pad, y1: H - pad, x2: W - pad, y2: H - pad, stroke: '#888' }));
  g.append(svg('line', { x1: pad, y1: pad, x2: pad, y2: H - pad, stroke: '#888' }));
  for (const k of d.k) {
    const t = svg('text', { x: x(k), y: H - pad + 15, 'font-size': 10, 'text-anchor': 'middle' });
    t.textContent = k;
    g.append(t);
  }
  for (const [v, yy] of [[hi, pad], [lo, H - pad]]) {
    const t = svg('text', { x: pad - 4, y: yy, 'font-size': 10, 'text-anchor': 'end' });
    t.textContent = `1e${v.toFixed(0)}`;
    g.append(t);
  }
  series.forEach((s, n) => {
    const pts = s.errors.map((e, i) => (e > 0 ? `${x(d.k[i])},${y(e)}` : null)).filter(Boolean).join(' ');
    const line = svg('polyline', { points: pts, fill: 'none', stroke: `hsl(${(n * 47) % 360},60%,45%)`, 'stroke-width': 1.2 });
    const tip = svg('title', {});
    tip.textContent = `${s.kind}_${label(s.ij)}${label(s.xy)} -> ${s.target}`;
    line.append(tip);
    g.append(line);
  });
  const frag = document.createDocumentFragment();
  frag.append(el('p', {}, `absolute error against the Johnson value for h = 2^-k; ${series.length} of ${d.series.length} entries are not exact (hover a line)`));
  frag.append(g);
  return frag;
}

await init();
for (const [id, f] of [['eigen', showEigen], ['pattern', showPattern], ['limit', showLimit]]) {
  const sec = document.getElementById(id);
  sec.querySelector('button').addEventListener('click', () => run(sec, () => f(sec)));
  run(sec, () => f(sec));
}
