use std::fs::File;
use std::io::{BufReader, BufWriter};
use std::time::Instant;

use serde_json::{json, Value};

use attenuated_core::attenuated::{
    brute_intersection_numbers, build_scheme, FieldContext, read_scheme, write_scheme, BruteTensor, Index2, SchemeInstance, SchemeParams,
};
use attenuated_core::bispectral::{build_operators, verify_algebra, verify_differences, verify_recurrences};
use attenuated_core::exactnum::{fmt_exact, int, QValue};
use attenuated_core::johnson::{
    binary_specialization, embedding_phi, enumerate_johnson, limit_check, JohnsonParams, LimitConfig, MAX_JOHNSON_VERTICES,
};
use attenuated_core::spectra::{brute_krein, check_grid, krein_nonnegative, wilson_duality_check, EigenGrid, IdempotentSet, KreinTensor};
use attenuated_core::structure::{
    bivariate_v, bivariate_v_star, check_p_compat, check_q_compat, intersection_formula, krein_formula, verify_v, verify_v_star,
    ParameterTensor,
};
use attenuated_core::subconstituent::{default_bases, verify_subconstituent};
use attenuated_core::unipoly::{verify_e_relations, verify_k_relations};
use attenuated_core::Error;

use crate::args::{Cli, Command, Fixture, Format, LimitArgs, SchemeArgs, Scope, TableKind, TablesArgs, VerifyArgs};
use crate::report::{Check, VerificationReport};

/// Failure listings in reports are truncated to this many items.
const LIST_CAP: usize = 20;

#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Core(Error),
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        CliError::Core(e)
    }
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Usage(s) => write!(f, "{s}"),
            CliError::Core(e) => write!(f, "{e}"),
        }
    }
}

impl CliError {
    /// 1 usage or configuration, 2 verification failure, 3 internal invariant.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => 1,
            CliError::Core(e) => match e {
                Error::InvalidParameter(_)
                | Error::FieldNotInTable(_)
                | Error::OutOfDomain(..)
                | Error::TooLarge(_)
                | Error::Format(_)
                | Error::UndefinedOrder(_) => 1,
                Error::Axiom { .. } => 2,
                _ => 3,
            },
        }
    }
}

/// What a command produced: the text to emit and whether everything passed.
pub struct Outcome {
    pub text: String,
    pub pass: bool,
}

pub fn run(cli: &Cli) -> Result<Outcome, CliError> {
    match &cli.command {
        Command::Build(a) => build(cli, a),
        Command::Verify(a) => verify(cli, a),
        Command::Tables(a) => tables(cli, a),
        Command::Limit(a) => limit(cli, a),
        Command::Embed(a) => embed(cli, a),
    }
}

/// Parameters for commands that enumerate, so the field must be in the table.
fn params_from(a: &SchemeArgs) -> Result<SchemeParams, CliError> {
    if let Some(q) = a.q {
        FieldContext::new(q)?;
    }
    formula_params(a)
}

fn formula_params(a: &SchemeArgs) -> Result<SchemeParams, CliError> {
    match (a.q, a.n, a.l, a.m) {
        (Some(q), Some(n), Some(l), Some(m)) => Ok(SchemeParams::new(q, n, l, m)?),
        _ => Err(CliError::Usage("give all of -q -n -l -m, or --input".into())),
    }
}

fn params_json(p: &SchemeParams) -> Value {
    json!({"q": p.q, "n": p.n, "l": p.l, "m": p.m})
}

fn read_input(path: &std::path::Path) -> Result<SchemeInstance, CliError> {
    let f = File::open(path).map_err(|e| CliError::Usage(format!("{}: {e}", path.display())))?;
    Ok(read_scheme(BufReader::new(f))?)
}

/// The instance and its counted intersection numbers, which also checks axiom (iv).
fn load(a: &SchemeArgs) -> Result<(SchemeInstance, BruteTensor), CliError> {
    match &a.input {
        Some(path) => {
            let inst = read_input(path)?;
            inst.check_basic_axioms()?;
            let p = brute_intersection_numbers(&inst)?;
            Ok((inst, p))
        }
        None => Ok(build_scheme(&params_from(a)?)?),
    }
}

fn scheme_params(a: &SchemeArgs) -> Result<SchemeParams, CliError> {
    match &a.input {
        Some(path) => Ok(*read_input(path)?.params()),
        None => formula_params(a),
    }
}

fn build(cli: &Cli, a: &SchemeArgs) -> Result<Outcome, CliError> {
    if a.input.is_some() {
        return Err(CliError::Usage("build enumerates from -q -n -l -m".into()));
    }
    let (inst, _) = load(a)?;
    let vals = inst.valencies()?;
    if let Some(path) = &cli.output {
        let f = File::create(path).map_err(|e| CliError::Usage(format!("{}: {e}", path.display())))?;
        write_scheme(&inst, BufWriter::new(f))?;
    }
    let classes = inst.domain().points();
    let text = match cli.format {
        Format::Json => {
            let v = json!({
                "params": params_json(inst.params()),
                "vertices": inst.num_vertices(),
                "classes": classes.iter().map(|c| json!([c.0, c.1])).collect::<Vec<_>>(),
                "valencies": vals,
                "axioms": "pass",
                "output": cli.output.as_ref().map(|p| p.display().to_string()),
            });
            pretty(&v)
        }
        Format::Csv => {
            let mut s = String::from("i,j,valency\n");
            for (c, v) in classes.iter().zip(&vals) {
                s.push_str(&format!("{},{},{v}\n", c.0, c.1));
            }
            s
        }
    };
    Ok(Outcome { text, pass: true })
}

fn pretty(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("serializable");
    s.push('\n');
    s
}

fn capped<T>(items: impl Iterator<Item = T>, f: impl Fn(T) -> Value) -> Vec<Value> {
    items.take(LIST_CAP).map(f).collect()
}

fn unipoly_check(q: &QValue) -> attenuated_core::Result<Check> {
    let mut all = Vec::new();
    for n in 0..=5 {
        for s in 0..=5 {
            all.extend(verify_k_relations(n, s, q));
            if s <= n {
                all.extend(verify_e_relations(n, s, q)?);
            }
        }
    }
    let bad: Vec<_> = all.iter().filter(|r| !r.passes()).collect();
    Ok(Check::new("unipoly.relations", all.len(), bad.len(), json!({"failing": capped(bad.iter(), |r| json!(r.describe()))})))
}

fn spectra_checks(rep: &mut VerificationReport, inst: &SchemeInstance, p: &BruteTensor, grid: &EigenGrid, idem: &attenuated_core::Result<IdempotentSet>) {
    let k = grid.len();
    rep.run("spectra.grid", || {
        check_grid(grid)?;
        Ok(Check::new("spectra.grid", k * k, 0, json!({})))
    });
    rep.run("spectra.valencies", || {
        let counted = inst.valencies()?;
        let formula = grid.valencies();
        let bad = counted.iter().zip(&formula).filter(|(c, f)| int(**c as i64) != **f).count();
        let detail = json!({"counted": counted, "formula": formula.iter().map(fmt_exact).collect::<Vec<_>>()});
        Ok(Check::new("spectra.valencies", k, bad, detail))
    });
    rep.run("spectra.wilson_duality", || {
        let res = wilson_duality_check(grid);
        let bad: Vec<_> = res.iter().filter(|r| !num_traits_is_zero(&r.residual)).collect();
        let detail = json!({"failing": capped(bad.iter(), |r| json!({"ij": [r.ij.0, r.ij.1], "rs": [r.rs.0, r.rs.1], "residual": fmt_exact(&r.residual)}))});
        Ok(Check::new("spectra.wilson_duality", res.len(), bad.len(), detail))
    });
    rep.run("spectra.idempotents", || {
        let idem = idem.as_ref().map_err(Clone::clone)?;
        let r = idem.verify(inst, p, grid)?;
        Ok(Check::new("spectra.idempotents", r.algebra_checks, 0, serde_json::to_value(&r).expect("serializable")))
    });
    rep.run("unipoly.relations", || unipoly_check(grid.q()));
}

fn num_traits_is_zero(x: &attenuated_core::exactnum::ExactScalar) -> bool {
    x == &int(0)
}

fn bispectral_checks(rep: &mut VerificationReport, grid: &EigenGrid) {
    for (name, f) in [
        ("bispectral.recurrences", verify_recurrences as fn(&EigenGrid) -> attenuated_core::Result<Vec<_>>),
        ("bispectral.differences", verify_differences),
    ] {
        rep.run(name, || {
            let res = f(grid)?;
            let bad: Vec<_> = res.iter().filter(|r| !r.passes()).collect();
            Ok(Check::new(name, res.len(), bad.len(), json!({"failing": capped(bad.iter(), |r| r.to_json())})))
        });
    }
    rep.run("bispectral.algebra", || {
        let ops = build_operators(grid.params())?;
        let res = verify_algebra(&ops)?;
        let bad = res.iter().filter(|r| !r.passes()).count();
        Ok(Check::new("bispectral.algebra", res.len(), bad, json!(res.iter().map(|r| r.to_json()).collect::<Vec<_>>())))
    });
}

fn poison(t: &mut ParameterTensor, key: Index2) -> Result<(), CliError> {
    let (ij, ab) = ((0, 0), (0, 2));
    if !t.domain().contains(ab) || !t.keys().contains(&key) {
        return Err(CliError::Usage("poisoned fixtures need m >= 2 and l >= 2".into()));
    }
    let v = t.get(key, ij, ab) + int(1);
    t.set(key, ij, ab, v);
    Ok(())
}

fn table_check(name: &str, formula: &ParameterTensor, counted: &ParameterTensor) -> Check {
    let bad = formula.mismatches(counted);
    let n = formula.keys().len() * formula.domain().len() * formula.domain().len();
    Check::new(name, n, bad.len(), json!({"mismatches": capped(bad.iter(), |m| json!(m.to_string()))}))
}

fn structure_checks(
    rep: &mut VerificationReport,
    p: &BruteTensor,
    grid: &EigenGrid,
    krein: &attenuated_core::Result<KreinTensor>,
    fixture: Option<Fixture>,
) -> Result<(), CliError> {
    let params = grid.params();
    let dom = grid.domain().clone();
    let mut pf = intersection_formula(params)?;
    let mut qf = krein_formula(params)?;
    match fixture {
        Some(Fixture::PoisonedP) => poison(&mut pf, (1, 0))?,
        Some(Fixture::PoisonedQ) => poison(&mut qf, (0, 1))?,
        None => {}
    }
    let keys = pf.keys().to_vec();
    rep.run("structure.p_formula", || Ok(table_check("structure.p_formula", &pf, &ParameterTensor::from_brute(p, &dom, &keys))));
    rep.run("structure.q_formula", || {
        let kr = krein.as_ref().map_err(Clone::clone)?;
        let mut c = table_check("structure.q_formula", &qf, &ParameterTensor::from_krein(kr, &dom, qf.keys()));
        c.detail["krein_nonnegative"] = json!(krein_nonnegative(kr));
        if !krein_nonnegative(kr) {
            c.pass = false;
            c.failures += 1;
        }
        Ok(c)
    });
    for (name, r) in [("structure.p_compat", check_p_compat(&pf)), ("structure.q_compat", check_q_compat(&qf))] {
        rep.run(name, || Ok(Check::new(name, r.checked, r.violations, r.to_json())));
    }
    rep.run("structure.v", || {
        let r = verify_v(&bivariate_v(&pf)?, grid);
        let bad = r.multidegree.len() + r.incompatible.len() + r.evaluation.len();
        Ok(Check::new("structure.v", dom.len() * dom.len(), bad, r.to_json()))
    });
    rep.run("structure.vstar", || {
        let r = verify_v_star(&bivariate_v_star(&qf)?, grid);
        let bad = r.multidegree.len() + r.incompatible.len() + r.evaluation.len();
        Ok(Check::new("structure.vstar", dom.len() * dom.len(), bad, r.to_json()))
    });
    Ok(())
}

fn johnson_checks(rep: &mut VerificationReport, inst: &SchemeInstance) {
    let p = *inst.params();
    let r = (p.q as i64).checked_pow(p.l as u32).map(|v| v + 1);
    let jp = match r.map(|r| JohnsonParams::new(r, p.n, p.m)) {
        Some(Ok(jp)) => jp,
        _ => {
            rep.checks.push(Check::new("johnson", 0, 0, json!({"skipped": "needs q^l + 1 > 2"})));
            return;
        }
    };
    let small = jp.cardinality() <= int(MAX_JOHNSON_VERTICES as i64);
    if small {
        rep.run("johnson.eigenvalues", || {
            let js = enumerate_johnson(&jp)?;
            let f = js.verify_eigens();
            let k = js.domain().len();
            Ok(Check::new("johnson.eigenvalues", k * k * k, f.len(), json!({"scheme": jp.to_string(), "failing": capped(f.iter(), |s| json!(s))})))
        });
    }
    rep.run("johnson.binary", || {
        let res = binary_specialization(p.n, p.m);
        let bad: Vec<_> = res.iter().filter(|r| !num_traits_is_zero(&r.2)).collect();
        Ok(Check::new("johnson.binary", res.len(), bad.len(), json!({"failing": capped(bad.iter(), |r| json!([[r.0 .0, r.0 .1], [r.1 .0, r.1 .1]]))})))
    });
    if small {
        rep.run("johnson.embedding", || {
            let e = embedding_phi(inst)?;
            let failures = e.violation_count + usize::from(!e.injective);
            Ok(Check::new("johnson.embedding", e.pairs_checked, failures, e.to_json()))
        });
    }
    rep.run("johnson.limit", || {
        let cfg = LimitConfig::standard(inst.field().p(), jp);
        let l = limit_check(&cfg)?;
        Ok(limit_summary(&l))
    });
}

fn limit_summary(l: &attenuated_core::johnson::LimitReport) -> Check {
    let worst = l.entries.iter().map(|e| e.final_relative).fold(0.0, f64::max);
    let detail = json!({
        "p": l.config.p,
        "johnson": l.config.johnson.to_string(),
        "worst_final_relative": format!("{worst:e}"),
        "tolerance": l.config.tolerance,
        "all_tails_monotone": l.entries.iter().all(|e| e.monotone_tail),
        "failing": capped(l.failures(), |e| json!({
            "kind": e.kind.name(), "ij": [e.ij.0, e.ij.1], "xy": [e.xy.0, e.xy.1],
            "final_relative": format!("{:e}", e.final_relative), "monotone_tail": e.monotone_tail,
        })),
    });
    Check::new("johnson.limit", l.entries.len(), l.failures().count(), detail)
}

fn subconstituent_checks(
    rep: &mut VerificationReport,
    inst: &SchemeInstance,
    p: &BruteTensor,
    grid: &EigenGrid,
    idem: &attenuated_core::Result<IdempotentSet>,
    krein: &attenuated_core::Result<KreinTensor>,
    bases: &[usize],
) {
    for &x in bases {
        let name = format!("subconstituent.base_{x}");
        rep.run(&name, || {
            let idem = idem.as_ref().map_err(Clone::clone)?;
            let kr = krein.as_ref().map_err(Clone::clone)?;
            let r = verify_subconstituent(inst, grid, idem, p, kr, &[x])?.remove(0);
            let count = r.lemma.checked + r.tridiagonal.checks.len();
            let failures = r.lemma.failures.len() + r.tridiagonal.checks.iter().filter(|c| !c.passes()).count();
            Ok(Check::new(&name, count, failures, r.to_json()))
        });
    }
}

fn verify(cli: &Cli, a: &VerifyArgs) -> Result<Outcome, CliError> {
    let t0 = Instant::now();
    let (inst, p) = load(&a.scheme)?;
    let load_millis = t0.elapsed().as_millis();
    let params = *inst.params();
    let bases = match &a.bases {
        Some(b) if b.is_empty() || b.iter().any(|&x| x >= inst.num_vertices()) => {
            return Err(CliError::Usage(format!("base vertices must lie in [0, {})", inst.num_vertices())));
        }
        Some(b) => b.clone(),
        None => default_bases(inst.num_vertices()),
    };
    let grid = EigenGrid::new(&params)?;
    let want = |s: Scope| a.scope == Scope::All || a.scope == s;
    let need_idem = want(Scope::Spectra) || want(Scope::Structure) || want(Scope::Subconstituent) || a.fixture.is_some();
    let idem = if need_idem { IdempotentSet::new(&inst, &grid) } else { Err(Error::Invariant("not computed".into())) };
    let krein = match &idem {
        Ok(i) if want(Scope::Structure) || want(Scope::Subconstituent) || a.fixture.is_some() => brute_krein(&inst, i),
        Ok(_) => Err(Error::Invariant("not computed".into())),
        Err(e) => Err(e.clone()),
    };
    let mut pj = params_json(&params);
    pj["vertices"] = json!(inst.num_vertices());
    pj["bases"] = json!(bases);
    let mut rep = VerificationReport::new(&format!("verify --scope {:?}", a.scope).to_lowercase(), pj, !cli.no_timings);
    let mut axioms = Check::new("axioms", inst.num_vertices() * inst.num_vertices(), 0, json!({"classes": inst.domain().len()}));
    if !cli.no_timings {
        axioms.millis = Some(load_millis);
    }
    rep.checks.push(axioms);
    if want(Scope::Spectra) {
        spectra_checks(&mut rep, &inst, &p, &grid, &idem);
    }
    if want(Scope::Bispectral) {
        bispectral_checks(&mut rep, &grid);
    }
    if want(Scope::Structure) || a.fixture.is_some() {
        structure_checks(&mut rep, &p, &grid, &krein, a.fixture)?;
    }
    if want(Scope::Subconstituent) {
        subconstituent_checks(&mut rep, &inst, &p, &grid, &idem, &krein, &bases);
    }
    if want(Scope::Johnson) {
        johnson_checks(&mut rep, &inst);
    }
    let mut text = match cli.format {
        Format::Json => {
            let mut v = rep.to_json();
            if !cli.no_timings {
                v["total_millis"] = json!(t0.elapsed().as_millis());
            }
            pretty(&v)
        }
        Format::Csv => rep.to_csv(),
    };
    if text.is_empty() {
        text.push('\n');
    }
    Ok(Outcome { text, pass: rep.passes() })
}

fn tables(cli: &Cli, a: &TablesArgs) -> Result<Outcome, CliError> {
    let params = scheme_params(&a.scheme)?;
    let csv = cli.format == Format::Csv;
    let text = match a.kind {
        TableKind::Eigen => {
            let g = EigenGrid::new(&params)?;
            if csv {
                g.to_csv()
            } else {
                let pts = g.domain().points();
                let rows: Vec<Value> = (0..g.len())
                    .flat_map(|i| {
                        let g = &g;
                        (0..g.len()).map(move |r| {
                            json!({"ij": [pts[i].0, pts[i].1], "rs": [pts[r].0, pts[r].1], "T": fmt_exact(g.t_at(i, r)), "U": fmt_exact(g.u_at(r, i))})
                        })
                    })
                    .collect();
                pretty(&json!({"params": params_json(&params), "eigen": rows}))
            }
        }
        TableKind::P | TableKind::Q => {
            let t = if a.kind == TableKind::P { intersection_formula(&params)? } else { krein_formula(&params)? };
            if csv {
                t.to_csv()
            } else {
                pretty(&json!({"params": params_json(&params), "kind": format!("{:?}", a.kind).to_lowercase(), "entries": t.to_json()}))
            }
        }
        TableKind::V | TableKind::Vstar => {
            let polys = if a.kind == TableKind::V {
                bivariate_v(&intersection_formula(&params)?)?
            } else {
                bivariate_v_star(&krein_formula(&params)?)?
            };
            if csv {
                let mut s = String::from("i,j,poly\n");
                for ((i, j), p) in &polys {
                    s.push_str(&format!("{i},{j},{p}\n"));
                }
                s
            } else {
                let rows: Vec<Value> =
                    polys.iter().map(|(&(i, j), p)| json!({"ij": [i, j], "poly": p.to_string(), "coeffs": p.to_json()})).collect();
                pretty(&json!({"params": params_json(&params), "kind": format!("{:?}", a.kind).to_lowercase(), "polys": rows}))
            }
        }
    };
    Ok(Outcome { text, pass: true })
}

fn limit(cli: &Cli, a: &LimitArgs) -> Result<Outcome, CliError> {
    if a.k_min > a.k_max || a.k_max > 62 {
        return Err(CliError::Usage("need k-min <= k-max <= 62".into()));
    }
    let cfg = LimitConfig {
        p: a.p,
        johnson: JohnsonParams::new(a.r, a.n, a.m)?,
        exponents: (a.k_min..=a.k_max).collect(),
        precision: a.precision,
        tail: a.tail,
        tolerance: a.tolerance,
    };
    let t0 = Instant::now();
    let rep = limit_check(&cfg)?;
    let text = match cli.format {
        Format::Json => {
            let mut v = rep.to_json();
            if !cli.no_timings {
                v["total_millis"] = json!(t0.elapsed().as_millis());
            }
            pretty(&v)
        }
        Format::Csv => {
            let mut s = String::from("kind,i,j,x,y,target,final_error,final_relative,monotone_tail,pass\n");
            for e in &rep.entries {
                s.push_str(&format!(
                    "{},{},{},{},{},{},{},{:e},{},{}\n",
                    e.kind.name(),
                    e.ij.0,
                    e.ij.1,
                    e.xy.0,
                    e.xy.1,
                    fmt_exact(&e.target),
                    e.errors.last().map(|v| v.to_decimal_digits(12)).unwrap_or_default(),
                    e.final_relative,
                    e.monotone_tail,
                    e.passes()
                ));
            }
            s
        }
    };
    Ok(Outcome { text, pass: rep.passes() })
}

fn embed(cli: &Cli, a: &SchemeArgs) -> Result<Outcome, CliError> {
    let inst = match &a.input {
        Some(path) => read_input(path)?,
        None => SchemeInstance::construct(&params_from(a)?)?,
    };
    let rep = embedding_phi(&inst)?;
    let text = match cli.format {
        Format::Json => {
            let mut v = rep.to_json();
            v["params"] = params_json(inst.params());
            pretty(&v)
        }
        Format::Csv => {
            let mut s = String::from("x,y,johnson_i,johnson_j,attenuated_i,attenuated_j\n");
            for v in &rep.violations {
                s.push_str(&format!("{},{},{},{},{},{}\n", v.x, v.y, v.johnson.0, v.johnson.1, v.attenuated.0, v.attenuated.1));
            }
            s
        }
    };
    Ok(Outcome { text, pass: rep.passes() })
}
