//! One line per acceptance criterion.
//!
//! Exits nonzero if any of criteria 1-9 fails, or if 10 or 11 stop failing in
//! the documented way. Set `ACCEPTANCE_STRICT=1` to exit nonzero on any FAIL.

use std::time::{Duration, Instant};

use attenuated_core::attenuated::{build_scheme, BruteTensor, Index2, SchemeInstance, SchemeParams};
use attenuated_core::bispectral::{build_operators, verify_algebra, verify_differences, verify_recurrences};
use attenuated_core::exactnum::{int, ExactScalar, QValue};
use attenuated_core::johnson::{embedding_phi, limit_check, JohnsonParams, LimitConfig, LimitKind};
use attenuated_core::spectra::{brute_krein, krein_nonnegative, wilson_duality_check, EigenGrid, IdempotentSet, KreinTensor};
use attenuated_core::structure::{
    bivariate_v, bivariate_v_star, check_p_compat, check_q_compat, intersection_formula, krein_formula, verify_v, verify_v_star,
    ParameterTensor,
};
use attenuated_core::subconstituent::{default_bases, verify_subconstituent};
use attenuated_core::unipoly::{verify_e_relations, verify_k_relations, RelationId};

const SETS: [(u64, i64, i64, i64); 4] = [(2, 3, 2, 2), (2, 4, 2, 2), (3, 2, 1, 1), (2, 4, 1, 2)];

struct Scheme {
    inst: SchemeInstance,
    p: BruteTensor,
    grid: EigenGrid,
    idem: IdempotentSet,
    krein: KreinTensor,
}

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: impl Into<String>) -> Outcome {
    Outcome { pass, detail: detail.into() }
}

fn label(s: &Scheme) -> String {
    let p = s.inst.params();
    format!("({},{},{},{})", p.q, p.n, p.l, p.m)
}

/// Every product `A_a A_b` at once: `cnt[(a*k + b)*nv + y]` is its `(x, y)` entry
/// for the current row `x`. Checks (i), (iii), commutativity and that each product
/// equals `sum_c p_ab^c A_c` with the counted table.
fn axioms_by_products(s: &Scheme) -> Result<usize, String> {
    let inst = &s.inst;
    let nv = inst.num_vertices();
    let k = inst.domain().len();
    let mut seen = vec![false; k];
    let mut checked = 0;
    for x in 0..nv {
        let rx = inst.class_row(x);
        for y in 0..nv {
            if (rx[y] == 0) != (x == y) || inst.class_row(y)[x] != rx[y] {
                return Err(format!("pair ({x},{y}) breaks (i) or (iii)"));
            }
            seen[rx[y] as usize] = true;
        }
        let mut cnt = vec![0u64; k * k * nv];
        for z in 0..nv {
            let a = rx[z] as usize;
            let rz = inst.class_row(z);
            for y in 0..nv {
                cnt[(a * k + rz[y] as usize) * nv + y] += 1;
            }
        }
        for a in 0..k {
            for b in 0..k {
                for y in 0..nv {
                    let v = cnt[(a * k + b) * nv + y];
                    if v != cnt[(b * k + a) * nv + y] {
                        return Err(format!("A_{a} A_{b} != A_{b} A_{a} at ({x},{y})"));
                    }
                    if v != s.p.by_index(a, b, rx[y] as usize) {
                        return Err(format!("(A_{a} A_{b})({x},{y}) = {v} disagrees with p"));
                    }
                    checked += 1;
                }
            }
        }
    }
    if seen.contains(&false) {
        return Err("an empty class".into());
    }
    Ok(checked)
}

fn criterion_1(schemes: &[Scheme], build_time: Duration) -> Outcome {
    let mut total = 0;
    for s in schemes {
        match axioms_by_products(s) {
            Ok(n) => total += n,
            Err(e) => return outcome(false, format!("{}: {e}", label(s))),
        }
    }
    let ok = build_time < Duration::from_secs(300);
    outcome(ok, format!("{total} product entries exact over 4 schemes, build {:.1}s", build_time.as_secs_f64()))
}

fn criterion_2(schemes: &[Scheme]) -> Outcome {
    for s in schemes {
        let nv = s.inst.num_vertices();
        let k = s.inst.domain().len();
        let mut rows = vec![0u64; k];
        for &c in s.inst.class_row(0) {
            rows[c as usize] += 1;
        }
        let want: Vec<ExactScalar> = rows.iter().map(|&v| int(v as i64)).collect();
        if s.grid.valencies() != want {
            return outcome(false, format!("{}: T(0,0) differs from row sums {rows:?}", label(s)));
        }
        if rows.iter().sum::<u64>() != nv as u64 {
            return outcome(false, format!("{}: row sums do not total {nv}", label(s)));
        }
    }
    let mut small: Vec<u64> = schemes[0].inst.valencies().unwrap();
    small.sort_unstable();
    let ok = small == [1, 6, 9, 24, 72];
    outcome(ok, format!("(2,3,2,2) valencies {small:?}"))
}

fn criterion_3(schemes: &[Scheme]) -> Outcome {
    let mut n = 0;
    for s in schemes {
        let mut all = verify_recurrences(&s.grid).unwrap();
        all.extend(verify_differences(&s.grid).unwrap());
        if let Some(bad) = all.iter().find(|r| !r.passes()) {
            return outcome(false, format!("{}: {}", label(s), bad.to_json()));
        }
        n += all.len();
    }
    outcome(true, format!("{n} residuals zero"))
}

fn criterion_4() -> Outcome {
    let mut n = 0;
    let mut families = Vec::new();
    for q in [2u64, 3] {
        let qv = QValue::from_order(q).unwrap();
        for big_n in 0..=5 {
            for s in 0..=5 {
                let mut all = verify_k_relations(big_n, s, &qv);
                if s <= big_n {
                    all.extend(verify_e_relations(big_n, s, &qv).unwrap());
                }
                if let Some(bad) = all.iter().find(|r| !r.passes()) {
                    return outcome(false, format!("q={q}: {}", bad.describe()));
                }
                for r in &all {
                    if !families.contains(&r.relation) {
                        families.push(r.relation);
                    }
                }
                n += all.len();
            }
        }
    }
    let ok = [RelationId::CrecK, RelationId::DiffK, RelationId::RecE, RelationId::CdiffE].iter().all(|f| families.contains(f));
    outcome(ok, format!("{n} residuals zero, {} families", families.len()))
}

fn criterion_5(schemes: &[Scheme]) -> Outcome {
    for s in schemes {
        let params = s.inst.params();
        let dom = s.grid.domain();
        let pf = intersection_formula(params).unwrap();
        let qf = krein_formula(params).unwrap();
        let pb = ParameterTensor::from_brute(&s.p, dom, pf.keys());
        let qb = ParameterTensor::from_krein(&s.krein, dom, qf.keys());
        let (mp, mq) = (pf.mismatches(&pb), qf.mismatches(&qb));
        if !mp.is_empty() || !mq.is_empty() {
            return outcome(false, format!("{}: {} p and {} q mismatches", label(s), mp.len(), mq.len()));
        }
        if !krein_nonnegative(&s.krein) {
            return outcome(false, format!("{}: negative Krein parameter", label(s)));
        }
    }
    outcome(true, "formula p and q tables equal the counted ones")
}

fn criterion_6(schemes: &[Scheme]) -> Outcome {
    let mut bases_total = 0;
    for s in schemes {
        let ops = build_operators(s.inst.params()).unwrap();
        if let Some(bad) = verify_algebra(&ops).unwrap().iter().find(|r| !r.passes()) {
            return outcome(false, format!("{}: {}", label(s), bad.to_json()));
        }
        let bases = default_bases(s.inst.num_vertices());
        let reps = verify_subconstituent(&s.inst, &s.grid, &s.idem, &s.p, &s.krein, &bases).unwrap();
        if let Some(bad) = reps.iter().find(|r| !r.passes()) {
            return outcome(false, format!("{}: {}", label(s), bad.to_json()));
        }
        bases_total += bases.len();
    }
    outcome(bases_total >= 3 * schemes.len(), format!("operator relations exact, {bases_total} base vertices"))
}

/// Offsets `(a - i, b - j)` over the nonzero entries of one key.
fn offsets(t: &ParameterTensor, key: Index2) -> Vec<Index2> {
    let mut v: Vec<Index2> = t.nonzero().filter(|((k, _, _), _)| *k == key).map(|((_, ij, ab), _)| (ab.0 - ij.0, ab.1 - ij.1)).collect();
    v.sort_unstable();
    v.dedup();
    v
}

fn line_and_cross(t: &ParameterTensor, line: Index2, cross: Index2) -> Result<(), String> {
    // the line key moves one coordinate only; the other never moves both the same way
    for o in offsets(t, line) {
        let along = if line == (0, 1) { o.0 == 0 } else { o.1 == 0 };
        if !along || o.0.abs() > 1 || o.1.abs() > 1 {
            return Err(format!("key {line:?} offset {o:?}"));
        }
    }
    for o in offsets(t, cross) {
        if o.0.abs() > 1 || o.1.abs() > 1 || o == (1, 1) || o == (-1, -1) {
            return Err(format!("key {cross:?} offset {o:?}"));
        }
    }
    Ok(())
}

fn criterion_7(schemes: &[Scheme]) -> Outcome {
    for s in schemes {
        let params = s.inst.params();
        let pf = intersection_formula(params).unwrap();
        let qf = krein_formula(params).unwrap();
        let (cp, cq) = (check_p_compat(&pf), check_q_compat(&qf));
        if !cp.passes() || !cq.passes() || !cp.witnesses.is_empty() || !cq.witnesses.is_empty() {
            return outcome(false, format!("{}: {} + {} witnesses", label(s), cp.violations, cq.violations));
        }
        let k = s.grid.domain().len();
        let has = |p: Index2| s.grid.domain().contains(p);
        if has((1, 0)) && has((0, 1)) {
            if let Err(e) = line_and_cross(&pf, (0, 1), (1, 0)).and_then(|_| line_and_cross(&qf, (1, 0), (0, 1))) {
                return outcome(false, format!("{}: {e}", label(s)));
            }
        }
        let ops = build_operators(params).unwrap();
        let pts = s.grid.domain().points();
        for (r, c) in ops.y_raw.nonzero_positions() {
            let d = (pts[r].0 - pts[c].0, pts[r].1 - pts[c].1);
            if d == (1, 1) || d == (-1, -1) {
                return outcome(false, format!("{}: Y has offset {d:?}", label(s)));
            }
        }
        for (r, c) in ops.x_raw.nonzero_positions() {
            if pts[r].0 != pts[c].0 || (pts[r].1 - pts[c].1).abs() > 1 {
                return outcome(false, format!("{}: X leaves the line at {r},{c}", label(s)));
            }
        }
        if !ops.xs_raw.is_diagonal() || !ops.ys_raw.is_diagonal() || k == 0 {
            return outcome(false, format!("{}: dual operators not diagonal", label(s)));
        }
    }
    outcome(true, "zero witnesses, sparsity patterns hold")
}

fn criterion_8(schemes: &[Scheme]) -> Outcome {
    for s in schemes {
        let params = s.inst.params();
        let v = bivariate_v(&intersection_formula(params).unwrap()).unwrap();
        let vs = bivariate_v_star(&krein_formula(params).unwrap()).unwrap();
        let (rv, rvs) = (verify_v(&v, &s.grid), verify_v_star(&vs, &s.grid));
        if !rv.passes() || !rvs.passes() {
            return outcome(false, format!("{}: v {} / v* {}", label(s), rv.to_json(), rvs.to_json()));
        }
    }
    outcome(true, "v and v* reproduce T and U, multidegrees exact")
}

fn criterion_9(schemes: &[Scheme]) -> Outcome {
    let mut n = 0;
    for s in schemes {
        let res = wilson_duality_check(&s.grid);
        if res.iter().any(|r| r.residual != int(0)) {
            return outcome(false, format!("{}: nonzero duality residual", label(s)));
        }
        n += res.len();
    }
    outcome(true, format!("{n} residuals zero"))
}

/// The criterion itself, and whether the result matches the documented finding:
/// injective, first label coordinate preserved, second coordinate not.
fn criterion_10() -> (Outcome, bool) {
    let mut details = Vec::new();
    let (mut pass, mut as_documented) = (true, true);
    for l in [1, 2] {
        let inst = SchemeInstance::construct(&SchemeParams::new(2, 3, l, 2).unwrap()).unwrap();
        let r = embedding_phi(&inst).unwrap();
        pass &= r.passes();
        as_documented &= r.injective && r.violation_count > 0 && r.first_coordinate_violations == 0;
        details.push(format!(
            "l={l}: injective={}, {} of {} pairs change relation",
            r.injective, r.violation_count, r.pairs_checked
        ));
    }
    (outcome(pass, details.join("; ")), as_documented)
}

/// The criterion itself, and whether the result matches the documented finding:
/// every tail monotone, cardinality and eigenvalues converging at first order.
fn criterion_11() -> (Outcome, bool) {
    let t = Instant::now();
    let cfg = LimitConfig::standard(2, JohnsonParams::new(3, 3, 2).unwrap());
    let rep = limit_check(&cfg).unwrap();
    let elapsed = t.elapsed();
    let monotone = rep.entries.iter().all(|e| e.monotone_tail);
    let worst = rep.entries.iter().map(|e| e.final_relative).fold(0.0, f64::max);
    let card = rep.entries.iter().find(|e| e.kind == LimitKind::Cardinality).unwrap();
    let fast = elapsed < Duration::from_secs(120);
    let pass = rep.passes() && fast;
    let as_documented = monotone && fast && worst < 1e-5 && card.target == int(12);
    let detail = format!(
        "{} entries, all tails monotone={monotone}, {} above tolerance, worst relative error {worst:.2e}, cardinality {:.2e}, {:.2}s",
        rep.entries.len(),
        rep.failures().count(),
        card.final_relative,
        elapsed.as_secs_f64()
    );
    (outcome(pass, detail), as_documented)
}

fn main() {
    let strict = std::env::var("ACCEPTANCE_STRICT").is_ok_and(|v| v == "1");
    let t = Instant::now();
    let schemes: Vec<Scheme> = SETS
        .iter()
        .map(|&(q, n, l, m)| {
            let params = SchemeParams::new(q, n, l, m).unwrap();
            let (inst, p) = build_scheme(&params).unwrap();
            inst.check_basic_axioms().unwrap();
            let grid = EigenGrid::new(&params).unwrap();
            let idem = IdempotentSet::new(&inst, &grid).unwrap();
            let krein = brute_krein(&inst, &idem).unwrap();
            Scheme { inst, p, grid, idem, krein }
        })
        .collect();
    let build_time = t.elapsed();

    let (c10, c10_documented) = criterion_10();
    let (c11, c11_documented) = criterion_11();
    let results = [
        ("scheme axioms", criterion_1(&schemes, build_time)),
        ("valencies", criterion_2(&schemes)),
        ("bispectral sweep", criterion_3(&schemes)),
        ("univariate relations", criterion_4()),
        ("structure constants", criterion_5(&schemes)),
        ("algebra relations", criterion_6(&schemes)),
        ("order compatibility", criterion_7(&schemes)),
        ("bivariate polynomials", criterion_8(&schemes)),
        ("Wilson duality", criterion_9(&schemes)),
        ("embedding", c10),
        ("limit", c11),
    ];
    let mut ok = true;
    for (i, (name, o)) in results.iter().enumerate() {
        println!("criterion {:>2} {:<22} {}  {}", i + 1, name, if o.pass { "PASS" } else { "FAIL" }, o.detail);
        let expected = match i + 1 {
            10 => c10_documented,
            11 => c11_documented,
            _ => o.pass,
        };
        ok &= expected && (o.pass || !strict);
    }
    let passed = results.iter().filter(|(_, o)| o.pass).count();
    println!("{passed}/{} criteria pass ({:.1}s)", results.len(), t.elapsed().as_secs_f64());
    if !c10_documented || !c11_documented {
        println!("criterion 10 or 11 no longer matches its documented result");
    }
    if !ok {
        std::process::exit(1);
    }
}
