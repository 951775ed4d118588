//! Browser bindings. Each export takes plain numbers and returns a JSON string.

use serde_json::{json, Value};
use wasm_bindgen::prelude::*;

use attenuated_core::attenuated::SchemeParams;
use attenuated_core::exactnum::fmt_exact;
use attenuated_core::johnson::{limit_check, JohnsonParams, LimitConfig};
use attenuated_core::spectra::EigenGrid;
use attenuated_core::structure::{check_p_compat, check_q_compat, intersection_formula, krein_formula};

/// Demo inputs beyond this are refused to keep the page responsive.
const MAX_CLASSES: usize = 28;

fn params(q: u32, n: i32, l: i32, m: i32) -> Result<SchemeParams, String> {
    let p = SchemeParams::new(q as u64, n as i64, l as i64, m as i64).map_err(|e| e.to_string())?;
    if p.domain().len() > MAX_CLASSES {
        return Err(format!("{} classes; the demo stops at {MAX_CLASSES}", p.domain().len()));
    }
    Ok(p)
}

/// Exact `T_ij(r, s)` and `U_rs(i, j)` over the whole domain.
pub fn eigen_table(q: u32, n: i32, l: i32, m: i32) -> Result<Value, String> {
    let p = params(q, n, l, m)?;
    let g = EigenGrid::new(&p).map_err(|e| e.to_string())?;
    let pts = g.domain().points();
    let k = g.len();
    let t: Vec<Vec<String>> = (0..k).map(|a| (0..k).map(|b| fmt_exact(g.t_at(a, b))).collect()).collect();
    let u: Vec<Vec<String>> = (0..k).map(|b| (0..k).map(|a| fmt_exact(g.u_at(b, a))).collect()).collect();
    Ok(json!({
        "domain": pts.iter().map(|x| json!([x.0, x.1])).collect::<Vec<_>>(),
        "vertices": fmt_exact(g.cardinality()),
        "valencies": g.valencies().iter().map(fmt_exact).collect::<Vec<_>>(),
        "multiplicities": g.multiplicities().iter().map(fmt_exact).collect::<Vec<_>>(),
        "T": t,
        "U": u,
    }))
}

/// Support of `p_{key,ij}^{ab}` (or the Krein analogue) for fixed `ij`, as the
/// set of `ab` with a nonzero value, plus the order check for the whole table.
pub fn structure_pattern(q: u32, n: i32, l: i32, m: i32, dual: bool, key: Vec<i32>, ij: Vec<i32>) -> Result<Value, String> {
    let p = params(q, n, l, m)?;
    let t = if dual { krein_formula(&p) } else { intersection_formula(&p) }.map_err(|e| e.to_string())?;
    let (key, ij) = match (key.as_slice(), ij.as_slice()) {
        ([a, b], [c, d]) => ((*a as i64, *b as i64), (*c as i64, *d as i64)),
        _ => return Err("key and ij take two entries each".into()),
    };
    if !t.keys().contains(&key) {
        return Err(format!("key must be one of {:?}", t.keys()));
    }
    if !t.domain().contains(ij) {
        return Err(format!("{ij:?} is outside the domain"));
    }
    let cells: Vec<Value> = t
        .domain()
        .points()
        .iter()
        .map(|&ab| json!({"ab": [ab.0, ab.1], "value": fmt_exact(&t.get(key, ij, ab))}))
        .collect();
    let compat = if dual { check_q_compat(&t) } else { check_p_compat(&t) };
    Ok(json!({"n": p.n, "l": p.l, "m": p.m, "key": [key.0, key.1], "ij": [ij.0, ij.1], "cells": cells, "compat": compat.to_json()}))
}

/// Error of every eigenvalue along `h = 2^-k`, for `k` in `k_min..=k_max`.
pub fn limit_curve(p: u32, r: i32, n: i32, m: i32, k_min: u32, k_max: u32) -> Result<Value, String> {
    if k_min > k_max || k_max > 30 {
        return Err("need k_min <= k_max <= 30".into());
    }
    let jp = JohnsonParams::new(r as i64, n as i64, m as i64).map_err(|e| e.to_string())?;
    if jp.eigen_domain().len() > 10 {
        return Err("the demo stops at 10 eigenspaces".into());
    }
    let mut cfg = LimitConfig::standard(p as u64, jp);
    cfg.exponents = (k_min..=k_max).collect();
    cfg.tail = cfg.tail.min(cfg.exponents.len()).max(2);
    if cfg.exponents.len() < 2 {
        return Err("need at least two values of k".into());
    }
    let rep = limit_check(&cfg).map_err(|e| e.to_string())?;
    let series: Vec<Value> = rep
        .entries
        .iter()
        .map(|e| {
            json!({
                "kind": e.kind.name(),
                "ij": [e.ij.0, e.ij.1],
                "xy": [e.xy.0, e.xy.1],
                "target": fmt_exact(&e.target),
                "errors": e.errors.iter().map(|v| v.to_f64()).collect::<Vec<_>>(),
            })
        })
        .collect();
    Ok(json!({"k": cfg.exponents, "series": series}))
}

fn out(v: Result<Value, String>) -> Result<String, JsValue> {
    v.map(|v| v.to_string()).map_err(|e| JsValue::from_str(&e))
}

#[wasm_bindgen(js_name = eigenTable)]
pub fn eigen_table_js(q: u32, n: i32, l: i32, m: i32) -> Result<String, JsValue> {
    out(eigen_table(q, n, l, m))
}

#[wasm_bindgen(js_name = structurePattern)]
pub fn structure_pattern_js(q: u32, n: i32, l: i32, m: i32, dual: bool, key: Vec<i32>, ij: Vec<i32>) -> Result<String, JsValue> {
    out(structure_pattern(q, n, l, m, dual, key, ij))
}

#[wasm_bindgen(js_name = limitCurve)]
pub fn limit_curve_js(p: u32, r: i32, n: i32, m: i32, k_min: u32, k_max: u32) -> Result<String, JsValue> {
    out(limit_curve(p, r, n, m, k_min, k_max))
}
