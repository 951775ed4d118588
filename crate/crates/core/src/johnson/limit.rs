//! `q -> 1` with `q = p^h` and `l = log_p(r-1) / h`, in high precision.

use serde_json::{json, Value};

use super::{t_tilde, u_tilde, JohnsonParams};
use crate::attenuated::Index2;
use crate::error::{Error, Result};
use crate::exactnum::{fmt_exact, q_binomial, ExactScalar, Field, HighPrecisionReal};
use crate::par::map_range;
use crate::unipoly::{e_generic, k_generic, q_generic};

#[derive(Clone, Debug, PartialEq)]
pub struct LimitConfig {
    pub p: u64,
    pub johnson: JohnsonParams,
    /// `h = 2^{-k}` for each `k`, in the order given.
    pub exponents: Vec<u32>,
    pub precision: usize,
    /// Number of trailing points over which `e(h)` must decrease.
    pub tail: usize,
    pub tolerance: f64,
}

impl LimitConfig {
    /// `k = 4..=20`, 256 bits, tail 8, relative tolerance `1e-8`.
    pub fn standard(p: u64, johnson: JohnsonParams) -> Self {
        LimitConfig { p, johnson, exponents: (4..=20).collect(), precision: 256, tail: 8, tolerance: 1e-8 }
    }

    fn validate(&self) -> Result<()> {
        self.johnson.validate()?;
        if self.p < 2 {
            return Err(Error::InvalidParameter(format!("p must be at least 2, got {}", self.p)));
        }
        if self.exponents.is_empty() || self.exponents.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::InvalidParameter("h-sequence must be nonempty and strictly decreasing".into()));
        }
        if self.tail < 2 || self.tail > self.exponents.len() {
            return Err(Error::InvalidParameter(format!("tail {} does not fit {} points", self.tail, self.exponents.len())));
        }
        Ok(())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum LimitKind {
    Eigenvalue,
    DualEigenvalue,
    Cardinality,
}

impl LimitKind {
    pub fn name(self) -> &'static str {
        match self {
            LimitKind::Eigenvalue => "T",
            LimitKind::DualEigenvalue => "U",
            LimitKind::Cardinality => "cardinality",
        }
    }
}

#[derive(Clone, Debug)]
pub struct LimitEntry {
    pub kind: LimitKind,
    /// Johnson-side index `(i, j)` and variable `(x, y)`.
    pub ij: Index2,
    pub xy: Index2,
    pub target: ExactScalar,
    pub values: Vec<HighPrecisionReal>,
    pub errors: Vec<HighPrecisionReal>,
    pub monotone_tail: bool,
    pub final_relative: f64,
    pub within_tolerance: bool,
}

impl LimitEntry {
    pub fn passes(&self) -> bool {
        self.monotone_tail && self.within_tolerance
    }
}

#[derive(Clone, Debug)]
pub struct LimitReport {
    pub config: LimitConfig,
    pub entries: Vec<LimitEntry>,
}

impl LimitReport {
    pub fn passes(&self) -> bool {
        self.entries.iter().all(LimitEntry::passes)
    }

    pub fn failures(&self) -> impl Iterator<Item = &LimitEntry> {
        self.entries.iter().filter(|e| !e.passes())
    }

    pub fn to_json(&self) -> Value {
        let c = &self.config;
        json!({
            "p": c.p,
            "r": c.johnson.r,
            "n": c.johnson.n,
            "m": c.johnson.m,
            "h": c.exponents.iter().map(|k| format!("2^-{k}")).collect::<Vec<_>>(),
            "precision": c.precision,
            "tail": c.tail,
            "tolerance": c.tolerance,
            "entries": self.entries.iter().map(|e| json!({
                "kind": e.kind.name(),
                "ij": [e.ij.0, e.ij.1],
                "xy": [e.xy.0, e.xy.1],
                "target": fmt_exact(&e.target),
                "values": e.values.iter().map(|v| v.to_decimal_digits(30)).collect::<Vec<_>>(),
                "errors": e.errors.iter().map(|v| v.to_decimal_digits(12)).collect::<Vec<_>>(),
                "monotone_tail": e.monotone_tail,
                "final_relative": format!("{:e}", e.final_relative),
                "within_tolerance": e.within_tolerance,
                "passes": e.passes(),
            })).collect::<Vec<_>>(),
            "passes": self.passes(),
        })
    }
}

struct Point {
    q: HighPrecisionReal,
    ql: HighPrecisionReal,
}

fn point(cfg: &LimitConfig, k: u32) -> Point {
    let prec = cfg.precision;
    let one = HighPrecisionReal::from_i64(1, prec);
    let h = one.clone() / HighPrecisionReal::from_i64(1i64 << k, prec);
    let ln_p = HighPrecisionReal::from_i64(cfg.p as i64, prec).ln();
    let q = (h.clone() * ln_p.clone()).exp();
    let ell = HighPrecisionReal::from_i64(cfg.johnson.r - 1, prec).ln() / (h.clone() * ln_p.clone());
    let ql = (ell * h * ln_p).exp();
    Point { q, ql }
}

/// `T_ji(y, x)` of the attenuated side at real `q` and `q^l`.
fn t_attenuated(jp: &JohnsonParams, pt: &Point, ij: Index2, xy: Index2) -> Result<HighPrecisionReal> {
    let (i, j) = ij;
    let (x, y) = xy;
    let (n, m) = (jp.n, jp.m);
    if j + x > m {
        return Ok(HighPrecisionReal::from_i64(0, pt.q.precision()));
    }
    let k = k_generic(i, m - j, &pt.ql, &pt.q, x)?;
    let e = e_generic(j, n - x, m - x, &pt.q, y)?;
    Ok(pt.ql.powi(j) * k * e)
}

/// `U_ji(y, x)` of the attenuated side.
fn u_attenuated(jp: &JohnsonParams, pt: &Point, ij: Index2, xy: Index2) -> Result<HighPrecisionReal> {
    let (i, j) = ij;
    let (x, y) = xy;
    let (n, m) = (jp.n, jp.m);
    let ratio = q_binomial(n, m, &pt.q) / q_binomial(n - i, m - i, &pt.q);
    let k = k_generic(i, m - y, &pt.ql, &pt.q, x)?;
    let qq = q_generic(j, n - i, m - i, &pt.q, y)?;
    Ok(ratio * k * qq)
}

fn cardinality(jp: &JohnsonParams, pt: &Point) -> HighPrecisionReal {
    q_binomial(jp.n, jp.m, &pt.q) * pt.ql.powi(jp.m)
}

/// Evaluates every eigenvalue, dual eigenvalue and the cardinality along the
/// h-sequence and compares with the Johnson values.
pub fn limit_check(cfg: &LimitConfig) -> Result<LimitReport> {
    cfg.validate()?;
    let jp = cfg.johnson;
    let (r, n, m) = (jp.r, jp.n, jp.m);
    let dom = jp.eigen_domain();
    let mut specs: Vec<(LimitKind, Index2, Index2, ExactScalar)> = Vec::new();
    for &ij in &dom {
        for &xy in &dom {
            specs.push((LimitKind::Eigenvalue, ij, xy, t_tilde(r, n, m, ij.0, ij.1, xy.0, xy.1)));
        }
    }
    for &ij in &dom {
        for &xy in &dom {
            specs.push((LimitKind::DualEigenvalue, ij, xy, u_tilde(r, n, m, ij.0, ij.1, xy.0, xy.1)));
        }
    }
    specs.push((LimitKind::Cardinality, (0, 0), (0, 0), jp.cardinality()));
    let points: Vec<Point> = cfg.exponents.iter().map(|&k| point(cfg, k)).collect();
    let nh = points.len();
    let flat = map_range(specs.len() * nh, |t| {
        let (s, h) = (t / nh, t % nh);
        let (kind, ij, xy, _) = &specs[s];
        match kind {
            LimitKind::Eigenvalue => t_attenuated(&jp, &points[h], *ij, *xy),
            LimitKind::DualEigenvalue => u_attenuated(&jp, &points[h], *ij, *xy),
            LimitKind::Cardinality => Ok(cardinality(&jp, &points[h])),
        }
    });
    let mut flat = flat.into_iter();
    let mut entries = Vec::with_capacity(specs.len());
    for (kind, ij, xy, target) in specs {
        let values = (0..nh).map(|_| flat.next().expect("one value per point")).collect::<Result<Vec<_>>>()?;
        let tgt = HighPrecisionReal::from_exact(&target, cfg.precision);
        let errors: Vec<HighPrecisionReal> = values.iter().map(|v| (v.clone() - tgt.clone()).abs()).collect();
        let scale = tgt.to_f64().abs().max(1.0);
        // below this the error is rounding, not approximation
        let floor = scale * 2f64.powi(64 - cfg.precision as i32);
        let e: Vec<f64> = errors.iter().map(HighPrecisionReal::to_f64).collect();
        let monotone_tail = e[nh - cfg.tail..].windows(2).all(|w| w[1] < w[0] || (w[0] <= floor && w[1] <= floor));
        let final_relative = e[nh - 1] / scale;
        let within_tolerance = final_relative < cfg.tolerance;
        entries.push(LimitEntry { kind, ij, xy, target, values, errors, monotone_tail, final_relative, within_tolerance });
    }
    Ok(LimitReport { config: cfg.clone(), entries })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactnum::int;

    fn cfg() -> LimitConfig {
        LimitConfig::standard(2, JohnsonParams::new(3, 3, 2).unwrap())
    }

    #[test]
    fn regime_keeps_ql_fixed() {
        let c = cfg();
        let pt = point(&c, 10);
        assert!((pt.ql.to_f64() - 2.0).abs() < 1e-60);
        assert!((pt.q.to_f64() - 2f64.powf(1.0 / 1024.0)).abs() < 1e-14);
    }

    #[test]
    fn trivial_entry_is_exact() {
        let rep = limit_check(&cfg()).unwrap();
        let e = rep.entries.iter().find(|e| e.kind == LimitKind::Eigenvalue && e.ij == (0, 0)).unwrap();
        assert_eq!(e.target, int(1));
        assert!(e.passes());
        assert!(e.errors.iter().all(|v| v.to_f64() < 1e-60));
    }

    #[test]
    fn errors_shrink_like_h() {
        let rep = limit_check(&cfg()).unwrap();
        for e in &rep.entries {
            assert!(e.monotone_tail, "{:?} {:?} {:?}", e.kind, e.ij, e.xy);
            let n = e.errors.len();
            let (a, b) = (e.errors[n - 2].to_f64(), e.errors[n - 1].to_f64());
            if b > 1e-50 {
                // halving h at least halves the error
                assert!(a / b > 1.99, "{:?} {:?} {:?} {a} {b}", e.kind, e.ij, e.xy);
            }
        }
        let card = rep.entries.iter().find(|e| e.kind == LimitKind::Cardinality).unwrap();
        assert_eq!(card.target, int(12));
    }

    #[test]
    fn spec_example_entry() {
        let rep = limit_check(&cfg()).unwrap();
        let e = rep
            .entries
            .iter()
            .find(|e| e.kind == LimitKind::Eigenvalue && e.ij == (1, 0) && e.xy == (0, 0))
            .unwrap();
        assert_eq!(e.target, int(2));
        assert!(e.monotone_tail);
    }

    #[test]
    fn bad_sequences_rejected() {
        let mut c = cfg();
        c.exponents = vec![5, 4];
        assert!(limit_check(&c).is_err());
        let mut c = cfg();
        c.tail = 40;
        assert!(limit_check(&c).is_err());
    }
}
