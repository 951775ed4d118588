use proptest::prelude::*;

use attenuated_core::attenuated::{read_scheme, write_scheme, SchemeInstance, SchemeParams};
use attenuated_core::exactnum::{fmt_exact, int, parse_exact, q_binomial, ratio, ExactScalar, HighPrecisionReal, QValue};
use attenuated_core::johnson::{t_tilde, u_tilde, JohnsonParams};
use attenuated_core::spectra::EigenGrid;
use attenuated_core::structure::{intersection_formula, krein_formula};

fn small_params() -> impl Strategy<Value = SchemeParams> {
    (prop::sample::select(vec![2u64, 3, 4]), 0i64..=3, 0i64..=2)
        .prop_flat_map(|(q, n, l)| (Just(q), Just(n), Just(l), 0..=n))
        .prop_map(|(q, n, l, m)| SchemeParams::new(q, n, l, m).unwrap())
        .prop_filter("desk-sized", |p| p.cardinality().unwrap() <= int(400))
}

fn rational() -> impl Strategy<Value = ExactScalar> {
    (-50i64..50, 1i64..20).prop_map(|(a, b)| ratio(a, b))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn q_binomial_pascal(n in 1i64..9, k in 1i64..9, q in rational()) {
        prop_assume!(k <= n);
        let lhs = q_binomial(n, k, &q);
        let rhs = q_binomial(n - 1, k - 1, &q) + num_traits::pow(q.clone(), k as usize) * q_binomial(n - 1, k, &q);
        prop_assert_eq!(lhs, rhs);
        prop_assert_eq!(q_binomial(n, k, &q), q_binomial(n, n - k, &q));
    }

    #[test]
    fn exact_text_round_trip(x in rational()) {
        prop_assert_eq!(parse_exact(&fmt_exact(&x)).unwrap(), x);
    }

    #[test]
    fn real_exp_inverts_ln(a in 1i64..1000, b in 1i64..1000) {
        let x = HighPrecisionReal::from_exact(&ratio(a, b), 256);
        let back = x.ln().exp();
        prop_assert!((back - x.clone()).abs().to_f64() <= 1e-60 * x.to_f64().max(1.0));
    }

    #[test]
    fn eigenvalues_are_orthogonal(p in small_params()) {
        // sum_rs T_ij(r,s) U_rs(a,b) = |X| delta
        let g = EigenGrid::new(&p).unwrap();
        let k = g.len();
        for ij in 0..k {
            for ab in 0..k {
                let s: ExactScalar = (0..k).map(|rs| g.t_at(ij, rs) * g.u_at(rs, ab)).sum();
                let want = if ij == ab { g.cardinality().clone() } else { int(0) };
                prop_assert_eq!(s, want);
            }
        }
    }

    #[test]
    fn adjacency_sum_is_all_ones(p in small_params()) {
        // J has eigenvalue |X| on E_00 and 0 elsewhere
        let g = EigenGrid::new(&p).unwrap();
        for rs in 0..g.len() {
            let s: ExactScalar = (0..g.len()).map(|ij| g.t_at(ij, rs).clone()).sum();
            prop_assert_eq!(s, if rs == 0 { g.cardinality().clone() } else { int(0) });
        }
        prop_assert_eq!(g.multiplicities().into_iter().sum::<ExactScalar>(), g.cardinality().clone());
    }

    #[test]
    fn counted_rows_match_formulas(p in small_params()) {
        let inst = SchemeInstance::construct(&p).unwrap();
        let g = EigenGrid::new(&p).unwrap();
        prop_assert_eq!(int(inst.num_vertices() as i64), g.cardinality().clone());
        let x = inst.num_vertices() / 2;
        let mut rows = vec![0i64; g.len()];
        for &c in inst.class_row(x) {
            rows[c as usize] += 1;
        }
        prop_assert_eq!(rows.into_iter().map(int).collect::<Vec<_>>(), g.valencies());
    }

    #[test]
    fn intersection_columns_sum_to_valency(p in small_params()) {
        let g = EigenGrid::new(&p).unwrap();
        let t = intersection_formula(&p).unwrap();
        let vals = g.valencies();
        for &key in t.keys() {
            let kv = &vals[g.domain().index_of(key).unwrap()];
            for &ab in g.domain().points() {
                prop_assert_eq!(&t.column_sum(key, ab), kv);
            }
        }
    }

    #[test]
    fn krein_columns_sum_to_multiplicity(p in small_params()) {
        let g = EigenGrid::new(&p).unwrap();
        let t = krein_formula(&p).unwrap();
        let mults = g.multiplicities();
        for &key in t.keys() {
            let mv = &mults[g.domain().index_of(key).unwrap()];
            for &ab in g.domain().points() {
                prop_assert_eq!(&t.column_sum(key, ab), mv);
            }
        }
    }

    #[test]
    fn scheme_file_round_trip(p in small_params()) {
        let inst = SchemeInstance::construct(&p).unwrap();
        let mut buf = Vec::new();
        write_scheme(&inst, &mut buf).unwrap();
        let back = read_scheme(buf.as_slice()).unwrap();
        prop_assert_eq!(back.params(), inst.params());
        prop_assert_eq!(back.num_vertices(), inst.num_vertices());
        for x in 0..inst.num_vertices() {
            prop_assert_eq!(back.class_row(x), inst.class_row(x));
        }
    }

    #[test]
    fn domain_is_deg_lex(p in small_params()) {
        let d = p.domain();
        for (k, &pt) in d.points().iter().enumerate() {
            prop_assert_eq!(d.index_of(pt), Some(k));
        }
        for w in d.points().windows(2) {
            prop_assert!((w[0].0 + w[0].1, w[0].0) < (w[1].0 + w[1].1, w[1].0));
        }
    }

    #[test]
    fn johnson_eigenvalues_are_orthogonal(r in 3i64..7, n in 0i64..6, m in 0i64..6) {
        prop_assume!(m <= n);
        let jp = JohnsonParams::new(r, n, m).unwrap();
        let dom = jp.eigen_domain();
        let size = jp.cardinality();
        for &ij in &dom {
            for &ab in &dom {
                let s: ExactScalar = dom.iter().map(|&xy| t_tilde(r, n, m, ij.0, ij.1, xy.0, xy.1) * u_tilde(r, n, m, xy.0, xy.1, ab.0, ab.1)).sum();
                prop_assert_eq!(s, if ij == ab { size.clone() } else { int(0) }, "{:?} {:?}", ij, ab);
            }
        }
    }
}

#[test]
fn q_value_orders() {
    for q in [2u64, 3, 4, 5] {
        assert_eq!(QValue::from_order(q).unwrap().value(), &int(q as i64));
    }
}
