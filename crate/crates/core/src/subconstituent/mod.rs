//! Dual adjacency matrices and dual idempotents with respect to a base
//! vertex, the vanishing pattern of `E* A E*` and `E A* E`, and the
//! tridiagonal relations between `A_10, A_01` and their duals.

mod dense;

use num_traits::Zero;
use serde_json::{json, Value};

use crate::attenuated::{BruteTensor, Index2, SchemeInstance};
use crate::error::{Error, Result};
use crate::exactnum::{fmt_exact, int, ExactScalar, QValue};
use crate::par::map_range;
use crate::spectra::{EigenGrid, IdempotentSet, KreinTensor};

pub use dense::{clear_denominators, integer_combination, IntMatrix};

const E10: Index2 = (1, 0);
const E01: Index2 = (0, 1);

/// Positions `0`, `|X|/2` and `|X| - 1`, without repeats.
pub fn default_bases(num_vertices: usize) -> Vec<usize> {
    let mut v = vec![0, num_vertices / 2, num_vertices.saturating_sub(1)];
    v.dedup();
    v
}

/// `E*_ij` and `A*_rs` for one base vertex, both diagonal.
#[derive(Clone, Debug)]
pub struct DualPair {
    base: usize,
    /// Class of `(base, y)` for every `y`.
    classes: Vec<u8>,
    /// `astar[rs][y] = U_rs(class(base, y))`.
    astar: Vec<Vec<ExactScalar>>,
}

impl DualPair {
    pub fn build(inst: &SchemeInstance, grid: &EigenGrid, idem: &IdempotentSet, base: usize) -> Result<Self> {
        let n = inst.num_vertices();
        if base >= n {
            return Err(Error::InvalidParameter(format!("base vertex {base} out of range (|X| = {n})")));
        }
        let k = grid.len();
        let classes = inst.class_row(base).to_vec();
        let astar: Vec<Vec<ExactScalar>> =
            (0..k).map(|rs| classes.iter().map(|&c| grid.u_at(rs, c as usize).clone()).collect()).collect();
        let dual = DualPair { base, classes, astar };
        dual.check(inst, grid, idem)?;
        Ok(dual)
    }

    fn check(&self, inst: &SchemeInstance, grid: &EigenGrid, idem: &IdempotentSet) -> Result<()> {
        let n = self.classes.len();
        let card = int(n as i64);
        let fail = |s: String| Err(Error::Invariant(format!("dual pair at base {}: {s}", self.base)));
        // The E* partition the vertices with block sizes equal to the valencies.
        let sizes = self.estar_sizes();
        let val = inst.valencies()?;
        if sizes.iter().zip(&val).any(|(&a, &b)| a as u64 != b) {
            return fail(format!("E* sizes {sizes:?} differ from valencies {val:?}"));
        }
        for (rs, diag) in self.astar.iter().enumerate() {
            for (y, v) in diag.iter().enumerate() {
                if v != &(&card * idem.entry(inst, rs, self.base, y)) {
                    return fail(format!("A*{:?} at {y} differs from |X| E_rs(x, y)", grid.domain().points()[rs]));
                }
            }
        }
        if self.astar[0].iter().any(|v| v != &int(1)) {
            return fail("A*_00 is not the identity".into());
        }
        Ok(())
    }

    pub fn base(&self) -> usize {
        self.base
    }

    pub fn classes(&self) -> &[u8] {
        &self.classes
    }

    /// Diagonal of `A*_rs` by domain position.
    pub fn astar(&self, rs: usize) -> &[ExactScalar] {
        &self.astar[rs]
    }

    /// Number of vertices in each `E*_ij`.
    pub fn estar_sizes(&self) -> Vec<usize> {
        let mut s = vec![0; self.astar.len()];
        for &c in &self.classes {
            s[c as usize] += 1;
        }
        s
    }
}

/// `N[c1][c2][c3] = #{(y, z) : c(x,y) = c1, c(x,z) = c2, c(y,z) = c3}`.
fn triple_counts(inst: &SchemeInstance, dual: &DualPair, k: usize) -> Vec<u64> {
    let n = inst.num_vertices();
    let cls = dual.classes();
    let parts = map_range(n, |y| {
        let mut local = vec![0u64; k * k];
        let row = inst.class_row(y);
        for z in 0..n {
            local[cls[z] as usize * k + row[z] as usize] += 1;
        }
        (cls[y] as usize, local)
    });
    let mut out = vec![0u64; k * k * k];
    for (c1, local) in parts {
        for (i, v) in local.into_iter().enumerate() {
            out[c1 * k * k + i] += v;
        }
    }
    out
}

#[derive(Clone, Debug, PartialEq)]
pub struct LemmaFailure {
    /// 1 for `E* A E*`, 2 for `E A* E`.
    pub part: u8,
    pub triple: (Index2, Index2, Index2),
    pub matrix_nonzero: bool,
    pub parameter_nonzero: bool,
}

#[derive(Clone, Debug, PartialEq)]
pub struct LemmaReport {
    pub base: usize,
    pub checked: usize,
    pub failures: Vec<LemmaFailure>,
}

impl LemmaReport {
    pub fn passes(&self) -> bool {
        self.failures.is_empty()
    }

    pub fn to_json(&self) -> Value {
        json!({
            "base": self.base,
            "checked": self.checked,
            "pass": self.passes(),
            "failures": self.failures.iter().map(|f| json!({
                "part": f.part,
                "triple": [[f.triple.0.0, f.triple.0.1], [f.triple.1.0, f.triple.1.1], [f.triple.2.0, f.triple.2.1]],
                "matrix_nonzero": f.matrix_nonzero,
                "parameter_nonzero": f.parameter_nonzero,
            })).collect::<Vec<_>>(),
        })
    }
}

/// `E*_ij A_mn E*_rs != 0` iff `p_{ij,mn}^{rs} != 0`, and
/// `E_ij A*_mn E_rs != 0` iff `q_{ij,mn}^{rs} != 0`, for every triple.
///
/// The first matrix is nonzero iff some `(y, z)` has `y` in `E*_ij`, `z` in
/// `E*_rs` and `(y, z)` in `R_mn`. For the second, with `u_c = U(c) / |X|`,
/// `||E_ij A*_mn E_rs||^2 = sum N[c1][c2][c3] U_mn(c1) U_mn(c2) u_ij(c3) u_rs(c3)`.
pub fn verify_lemma_eae(
    inst: &SchemeInstance,
    grid: &EigenGrid,
    dual: &DualPair,
    p: &BruteTensor,
    krein: &KreinTensor,
) -> LemmaReport {
    let k = grid.len();
    let pts = grid.domain().points();
    let cnt = triple_counts(inst, dual, k);
    let at = |c1: usize, c2: usize, c3: usize| cnt[(c1 * k + c2) * k + c3];
    let card = grid.cardinality();
    let mut failures = Vec::new();
    for ij in 0..k {
        for mn in 0..k {
            for rs in 0..k {
                let triple = (pts[ij], pts[mn], pts[rs]);
                let m1 = at(ij, rs, mn) > 0;
                let p1 = p.by_index(ij, mn, rs) != 0;
                if m1 != p1 {
                    failures.push(LemmaFailure { part: 1, triple, matrix_nonzero: m1, parameter_nonzero: p1 });
                }
                let mut norm = ExactScalar::zero();
                for c3 in 0..k {
                    let w = grid.u_at(ij, c3) * grid.u_at(rs, c3);
                    if w.is_zero() {
                        continue;
                    }
                    let mut s = ExactScalar::zero();
                    for c1 in 0..k {
                        for c2 in 0..k {
                            let c = at(c1, c2, c3);
                            if c != 0 {
                                s += int(c as i64) * grid.u_at(mn, c1) * grid.u_at(mn, c2);
                            }
                        }
                    }
                    norm += s * w;
                }
                let norm = norm / (card * card);
                if norm < ExactScalar::zero() {
                    failures.push(LemmaFailure { part: 2, triple, matrix_nonzero: true, parameter_nonzero: true });
                    continue;
                }
                let m2 = !norm.is_zero();
                let p2 = !krein.by_index(ij, mn, rs).is_zero();
                if m2 != p2 {
                    failures.push(LemmaFailure { part: 2, triple, matrix_nonzero: m2, parameter_nonzero: p2 });
                }
            }
        }
    }
    LemmaReport { base: dual.base(), checked: 2 * k * k * k, failures }
}

/// Scalars entering the tridiagonal relations.
#[derive(Clone, Debug, PartialEq)]
pub struct CentralParams {
    pub k: ExactScalar,
    pub eta0: ExactScalar,
    /// `eta1 = e0 I - A_01`.
    pub e0: ExactScalar,
    /// `gamma = g0 I + g1 A_01`.
    pub g0: ExactScalar,
    pub g1: ExactScalar,
    /// `rho = rho0 I + rho1 A_01 + rho2 A_01^2`.
    pub rho: [ExactScalar; 3],
    pub chi: ExactScalar,
    pub zeta: ExactScalar,
    /// `xi = xi0 I + xi1 A*_10`.
    pub xi0: ExactScalar,
    pub xi1: ExactScalar,
}

fn div(a: ExactScalar, b: ExactScalar, what: &str) -> Result<ExactScalar> {
    if b.is_zero() {
        return Err(Error::SingularCoefficient(format!("{what} has a vanishing denominator")));
    }
    Ok(a / b)
}

impl CentralParams {
    pub fn new(q: &QValue, n: i64, l: i64, m: i64) -> Result<Self> {
        let one = int(1);
        let qq = q.value().clone();
        let p = |e: i64| q.pow(e);
        let om = |e: i64| int(1) - q.pow(e);
        let k = &qq + &one / &qq;
        let eta0 = p(l - 1) * (div(int(2) * om(n - m - 1), om(1), "eta0")? + p(n - m - 1) * om(1));
        let e0 = -div(om(m), om(1), "eta1")?;
        let g1 = -om(1);
        let g0 = om(1) * &e0 + p(l - 1) * (&one + p(n - m + 1));
        let c2 = div(p(2 * l - 1) * om(n - m + 2) * om(n - m), om(1).pow(2), "rho")?;
        let rho0 = &qq * &e0 * (&e0 + &eta0) + c2;
        let rho1 = -(&qq * (int(2) * &e0 + &eta0));
        let chi = p(-m) * div(om(n - 1), om(n - m), "chi")? * (om(m) - div(om(n), om(m), "chi")?);
        let zeta = (om(m) - p(l)) / &qq;
        let xi0 = (om(m) - p(l) * div(om(n), om(m), "xi")?) / &qq;
        let xi1 = div(p(m - 2) * om(1) * om(n - m), om(n - 1), "xi")?;
        Ok(CentralParams { k, eta0, e0, g0, g1, rho: [rho0, rho1, qq], chi, zeta, xi0, xi1 })
    }

    pub fn to_json(&self) -> Value {
        json!({
            "eta0": fmt_exact(&self.eta0),
            "gamma": [fmt_exact(&self.g0), fmt_exact(&self.g1)],
            "rho": self.rho.iter().map(fmt_exact).collect::<Vec<_>>(),
            "chi": fmt_exact(&self.chi),
            "zeta": fmt_exact(&self.zeta),
            "xi": [fmt_exact(&self.xi0), fmt_exact(&self.xi1)],
        })
    }
}

/// One matrix identity: residual is zero or the entry of largest magnitude.
#[derive(Clone, Debug, PartialEq)]
pub struct MatrixCheck {
    pub name: &'static str,
    pub worst: Option<(usize, usize, i128)>,
}

impl MatrixCheck {
    fn of(name: &'static str, m: &IntMatrix) -> Self {
        MatrixCheck { name, worst: m.worst() }
    }

    pub fn passes(&self) -> bool {
        self.worst.is_none()
    }

    pub fn to_json(&self) -> Value {
        json!({
            "relation": self.name,
            "pass": self.passes(),
            "worst": self.worst.map(|(r, c, v)| json!({"row": r, "col": c, "value": v.to_string()})),
        })
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct TridiagonalReport {
    pub base: usize,
    pub checks: Vec<MatrixCheck>,
}

impl TridiagonalReport {
    pub fn passes(&self) -> bool {
        self.checks.iter().all(MatrixCheck::passes)
    }

    pub fn to_json(&self) -> Value {
        json!({
            "base": self.base,
            "pass": self.passes(),
            "checks": self.checks.iter().map(MatrixCheck::to_json).collect::<Vec<_>>(),
        })
    }
}

fn sum(terms: Vec<(ExactScalar, IntMatrix)>) -> Result<IntMatrix> {
    integer_combination(&terms)
}

fn anti_diag(d: &[i128], a: &crate::attenuated::Adjacency, n: usize) -> Result<IntMatrix> {
    let dense = IntMatrix::from_adjacency(a, n);
    let mut out = IntMatrix::diag_left(d, &dense)?;
    out.add_scaled(&IntMatrix::diag_right(&dense, d)?, 1)?;
    Ok(out)
}

/// `[A_01, A*_10] = 0` and the four tridiagonal relations, as exact
/// `|X| x |X|` integer matrices after clearing denominators, together with
/// the commutation of `gamma, rho, eta1, xi` with the generators they serve.
pub fn verify_tridiagonal(inst: &SchemeInstance, grid: &EigenGrid, dual: &DualPair) -> Result<TridiagonalReport> {
    let params = *inst.params();
    let dom = grid.domain();
    let (Some(i10), Some(i01)) = (dom.index_of(E10), dom.index_of(E01)) else {
        return Ok(TridiagonalReport { base: dual.base(), checks: Vec::new() });
    };
    let cp = CentralParams::new(grid.q(), params.n, params.l, params.m)?;
    let n = inst.num_vertices();
    let a = inst.adjacency(i10);
    let b = inst.adjacency(i01);
    let (d1, l1) = clear_denominators(dual.astar(i10))?;
    let (d2, l2) = clear_denominators(dual.astar(i01))?;
    let l1 = ExactScalar::from(l1);
    let l2 = ExactScalar::from(l2);
    let id = IntMatrix::identity(n);
    let ad = IntMatrix::from_adjacency(a, n);
    let bd = IntMatrix::from_adjacency(b, n);
    let qq = grid.q().value().clone();
    let one_m_q = int(1) - &qq;
    let mut checks = Vec::new();

    // [A_01, A*_10]
    checks.push(MatrixCheck::of("relsub0", &IntMatrix::commutator_diag(&d1, &bd)?));

    // [A_10, k A D A - A^2 D - D A^2 + gamma {A, D} + rho D], D = A*_10.
    {
        let dm = IntMatrix::diagonal(&d1);
        let a_d = IntMatrix::adj_left(a, &dm)?;
        let d_a = IntMatrix::diag_left(&d1, &ad)?;
        let mut anti = a_d.clone();
        anti.add_scaled(&d_a, 1)?;
        let b_d = IntMatrix::adj_left(b, &dm)?;
        let r = sum(vec![
            (cp.k.clone(), IntMatrix::adj_right(&a_d, a)?),
            (int(-1), IntMatrix::adj_left(a, &a_d)?),
            (int(-1), IntMatrix::adj_right(&d_a, a)?),
            (cp.g0.clone(), anti.clone()),
            (cp.g1.clone(), IntMatrix::adj_left(b, &anti)?),
            (cp.rho[0].clone(), dm),
            (cp.rho[1].clone(), b_d.clone()),
            (cp.rho[2].clone(), IntMatrix::adj_left(b, &b_d)?),
        ])?;
        checks.push(MatrixCheck::of("relsub1", &IntMatrix::commutator_adj(a, &r)?));
    }

    // [D, k D A D - D^2 A - A D^2 + (1-q) chi {D, A} + q chi^2 A], scaled by L1^2.
    {
        let d_a = IntMatrix::diag_left(&d1, &ad)?;
        let sq: Vec<i128> = d1.iter().map(|v| v * v).collect();
        let r = sum(vec![
            (cp.k.clone(), IntMatrix::diag_right(&d_a, &d1)?),
            (int(-1), IntMatrix::diag_left(&sq, &ad)?),
            (int(-1), IntMatrix::diag_right(&ad, &sq)?),
            (&one_m_q * &cp.chi * &l1, anti_diag(&d1, a, n)?),
            (&qq * &cp.chi * &cp.chi * &l1 * &l1, ad.clone()),
        ])?;
        checks.push(MatrixCheck::of("relsub2", &IntMatrix::commutator_diag(&d1, &r)?));
    }

    // [B, k B D B - B^2 D - D B^2 + (1-q) zeta {B, D} + q zeta^2 D], D = A*_01.
    {
        let dm = IntMatrix::diagonal(&d2);
        let b_d = IntMatrix::adj_left(b, &dm)?;
        let d_b = IntMatrix::diag_left(&d2, &bd)?;
        let mut anti = b_d.clone();
        anti.add_scaled(&d_b, 1)?;
        let r = sum(vec![
            (cp.k.clone(), IntMatrix::adj_right(&b_d, b)?),
            (int(-1), IntMatrix::adj_left(b, &b_d)?),
            (int(-1), IntMatrix::adj_right(&d_b, b)?),
            (&one_m_q * &cp.zeta, anti),
            (&qq * &cp.zeta * &cp.zeta, dm),
        ])?;
        checks.push(MatrixCheck::of("relsub3", &IntMatrix::commutator_adj(b, &r)?));
    }

    // [D, k D B D - D^2 B - B D^2 + (1-q) xi {D, B} + q xi^2 B], D = A*_01, scaled by L2^2.
    let xi: Vec<ExactScalar> = dual.astar(i10).iter().map(|t| &cp.xi0 + &cp.xi1 * t).collect();
    let (xv, lx) = clear_denominators(&xi)?;
    let lx = ExactScalar::from(lx);
    {
        let d_b = IntMatrix::diag_left(&d2, &bd)?;
        let sq: Vec<i128> = d2.iter().map(|v| v * v).collect();
        let xsq: Vec<i128> = xv.iter().map(|v| v * v).collect();
        let r = sum(vec![
            (cp.k.clone(), IntMatrix::diag_right(&d_b, &d2)?),
            (int(-1), IntMatrix::diag_left(&sq, &bd)?),
            (int(-1), IntMatrix::diag_right(&bd, &sq)?),
            (&one_m_q * &l2 / &lx, IntMatrix::diag_left(&xv, &anti_diag(&d2, b, n)?)?),
            (&qq * &l2 * &l2 / (&lx * &lx), IntMatrix::diag_left(&xsq, &bd)?),
        ])?;
        checks.push(MatrixCheck::of("relsub4", &IntMatrix::commutator_diag(&d2, &r)?));
    }

    // Central elements against the generators they serve.
    let b2 = IntMatrix::adj_left(b, &bd)?;
    let gamma = sum(vec![(cp.g0.clone(), id.clone()), (cp.g1.clone(), bd.clone())])?;
    let rho = sum(vec![(cp.rho[0].clone(), id.clone()), (cp.rho[1].clone(), bd.clone()), (cp.rho[2].clone(), b2)])?;
    let eta1 = sum(vec![(cp.e0.clone(), id), (int(-1), bd.clone())])?;
    for (name_a, name_d, m) in [
        ("gamma_a10", "gamma_as10", &gamma),
        ("rho_a10", "rho_as10", &rho),
        ("eta1_a10", "eta1_as10", &eta1),
    ] {
        checks.push(MatrixCheck::of(name_a, &IntMatrix::commutator_adj(a, m)?));
        checks.push(MatrixCheck::of(name_d, &IntMatrix::commutator_diag(&d1, m)?));
    }
    checks.push(MatrixCheck::of("xi_a01", &IntMatrix::commutator_diag(&xv, &bd)?));
    Ok(TridiagonalReport { base: dual.base(), checks })
}

/// Everything checked for one base vertex.
#[derive(Clone, Debug, PartialEq)]
pub struct BaseReport {
    pub base: usize,
    pub lemma: LemmaReport,
    pub tridiagonal: TridiagonalReport,
}

impl BaseReport {
    pub fn passes(&self) -> bool {
        self.lemma.passes() && self.tridiagonal.passes()
    }

    pub fn to_json(&self) -> Value {
        json!({
            "base": self.base,
            "pass": self.passes(),
            "lemma": self.lemma.to_json(),
            "tridiagonal": self.tridiagonal.to_json(),
        })
    }
}

pub fn verify_subconstituent(
    inst: &SchemeInstance,
    grid: &EigenGrid,
    idem: &IdempotentSet,
    p: &BruteTensor,
    krein: &KreinTensor,
    bases: &[usize],
) -> Result<Vec<BaseReport>> {
    bases
        .iter()
        .map(|&x| {
            let dual = DualPair::build(inst, grid, idem, x)?;
            Ok(BaseReport {
                base: x,
                lemma: verify_lemma_eae(inst, grid, &dual, p, krein),
                tridiagonal: verify_tridiagonal(inst, grid, &dual)?,
            })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::attenuated::{build_scheme, SchemeParams};
    use crate::spectra::brute_krein;

    fn setup(q: u64, n: i64, l: i64, m: i64) -> (SchemeInstance, BruteTensor, EigenGrid, IdempotentSet, KreinTensor) {
        let s = SchemeParams::new(q, n, l, m).unwrap();
        let (inst, p) = build_scheme(&s).unwrap();
        let g = EigenGrid::new(&s).unwrap();
        let idem = IdempotentSet::new(&inst, &g).unwrap();
        let kr = brute_krein(&inst, &idem).unwrap();
        (inst, p, g, idem, kr)
    }

    #[test]
    fn dual_pair_examples() {
        let (inst, _, g, idem, _) = setup(2, 3, 2, 2);
        let d = DualPair::build(&inst, &g, &idem, 0).unwrap();
        // Domain order (0,0),(0,1),(1,0),(0,2),(1,1).
        assert_eq!(d.estar_sizes(), vec![1, 9, 24, 6, 72]);
        assert!(d.astar(0).iter().all(|v| v == &int(1)));
        assert!(DualPair::build(&inst, &g, &idem, 112).is_err());
    }

    #[test]
    fn lemma_and_relations() {
        for (q, n, l, m) in [(2, 3, 2, 2), (3, 2, 1, 1), (2, 4, 1, 2)] {
            let (inst, p, g, idem, kr) = setup(q, n, l, m);
            let reps = verify_subconstituent(&inst, &g, &idem, &p, &kr, &default_bases(inst.num_vertices())).unwrap();
            assert_eq!(reps.len(), 3);
            for r in reps {
                assert!(r.passes(), "{}", r.to_json());
                assert_eq!(r.tridiagonal.checks.len(), 12);
            }
        }
    }

    #[test]
    fn identity_slice() {
        let (inst, p, g, idem, kr) = setup(2, 3, 2, 2);
        let d = DualPair::build(&inst, &g, &idem, 5).unwrap();
        let cnt = triple_counts(&inst, &d, g.len());
        let k = g.len();
        for mn in 0..k {
            for rs in 0..k {
                assert_eq!(cnt[rs * k + mn] > 0, mn == rs);
            }
        }
        assert!(verify_lemma_eae(&inst, &g, &d, &p, &kr).passes());
    }

    #[test]
    fn perturbed_scalar_is_detected() {
        let (inst, _, g, idem, _) = setup(2, 3, 2, 2);
        let d = DualPair::build(&inst, &g, &idem, 0).unwrap();
        let mut bad = d.clone();
        let i10 = g.domain().index_of(E10).unwrap();
        bad.astar[i10][1] += int(1);
        let rep = verify_tridiagonal(&inst, &g, &bad).unwrap();
        assert!(!rep.passes());
    }
}
