mod common;

use proptest::prelude::*;

use common::*;
use tachibana::curvature::{Basis, Name};
use tachibana::expr::{is_zero, parse, Domain, Expr, FloatPoint, Layout, SamplePlan, ZeroVerdict};
use tachibana::tensor::{
    act, curvature_action, curvature_operator, kulkarni_nomizu_general, tachibana as q_tensor, walker_sum, wedge_endomorphism, wedge_form, Approx,
    Tensor, Valence,
};

fn layout() -> Layout {
    Layout::new(vec!["x1".into(), "x2".into()])
}

fn plan(l: &Layout) -> SamplePlan {
    SamplePlan::new(l, &Domain::default(), 11, 1e-9)
}

/// Sum of `c * x1^a * x2^b * exp(k*x1)` over `(1 + x1^2 + x2^2)^d`.
fn expr_text() -> impl Strategy<Value = String> {
    let term = (-5i64..=5, 0u32..3, 0u32..3, -2i64..=2).prop_map(|(c, a, b, k)| format!("({c})*x1^{a}*x2^{b}*exp({k}*x1)"));
    (prop::collection::vec(term, 1..4), 0u32..3).prop_map(|(ts, d)| format!("({})/(1+x1^2+x2^2)^{d}", ts.join("+")))
}

fn same(a: &Expr, b: &Expr, p: &SamplePlan) -> bool {
    is_zero(&a.sub(b), p).is_zero()
}

fn shifted(pt: &FloatPoint, l: &Layout, i: usize, h: f64) -> FloatPoint {
    let mut p = pt.clone();
    p.slots[l.coord_slot(i)] += h;
    p.coords[i] += h;
    p
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn expr_field_laws(a in expr_text(), b in expr_text(), c in expr_text()) {
        let l = layout();
        let p = plan(&l);
        let (a, b, c) = (parse(&a, &l).unwrap(), parse(&b, &l).unwrap(), parse(&c, &l).unwrap());
        prop_assert!(same(&a.add(&b), &b.add(&a), &p));
        prop_assert!(same(&a.mul(&b), &b.mul(&a), &p));
        prop_assert!(same(&a.mul(&b.add(&c)), &a.mul(&b).add(&a.mul(&c)), &p));
        prop_assert!(same(&a.add(&b).sub(&b), &a, &p));
        prop_assert!(same(&a.mul(&b).mul(&c), &a.mul(&b.mul(&c)), &p));
        if !b.is_zero() {
            prop_assert!(same(&a.div(&b).unwrap().mul(&b), &a, &p));
        }
    }

    #[test]
    fn exact_cancellation_is_symbolic(a in expr_text(), b in expr_text()) {
        let l = layout();
        let p = plan(&l);
        let (a, b) = (parse(&a, &l).unwrap(), parse(&b, &l).unwrap());
        let d = a.add(&b).sub(&b).sub(&a).simplify();
        prop_assert_eq!(is_zero(&d, &p), ZeroVerdict::ZeroSymbolic);
    }

    #[test]
    fn nonzero_is_detected(a in expr_text()) {
        let l = layout();
        let p = plan(&l);
        let a = parse(&a, &l).unwrap();
        let bumped = a.add(&parse("x1*x2^2/1000", &l).unwrap());
        prop_assert!(matches!(is_zero(&bumped.sub(&a), &p), ZeroVerdict::Nonzero(_)));
        if !a.simplify().is_zero() {
            prop_assert!(matches!(is_zero(&a, &p), ZeroVerdict::Nonzero(_)));
        }
    }

    #[test]
    fn derivative_matches_finite_difference(a in expr_text(), i in 0usize..2) {
        let l = layout();
        let p = plan(&l);
        let e = parse(&a, &l).unwrap();
        let d = e.diff(i, &l).unwrap();
        for pt in p.float.iter().take(4) {
            let h = 1e-4;
            let f = |s: f64| e.eval_f64(&shifted(pt, &l, i, s));
            let fd: f64 = (8.0 * (f(h) - f(-h)) - (f(2.0 * h) - f(-2.0 * h))) / (12.0 * h);
            let exact: f64 = d.eval_f64(pt);
            prop_assert!((fd - exact).abs() <= 1e-6 * (1.0 + exact.abs()), "{} vs {}", fd, exact);
        }
    }
}

fn sym2(n: usize, v: &[f64]) -> Tensor<Approx> {
    Tensor::from_fn(n, Valence::new(0, 2), |i| {
        let (a, b) = (i[0].min(i[1]), i[0].max(i[1]));
        Approx::new(v[a * n + b])
    })
}

fn covector(n: usize, v: &[f64]) -> Tensor<Approx> {
    Tensor::from_fn(n, Valence::new(0, 1), |i| Approx::new(v[i[0]]))
}

fn vals(t: &Tensor<Approx>) -> Vec<f64> {
    t.data().iter().map(|x| x.v).collect()
}

fn vanishes(t: &Tensor<Approx>) -> bool {
    let scale = 1.0 + t.data().iter().map(|x| x.m.abs().max(x.v.abs())).fold(0.0, f64::max);
    max_abs(&vals(t)) <= 1e-9 * scale
}

fn agree(a: &Tensor<Approx>, b: &Tensor<Approx>) -> bool {
    vanishes(&a.sub(b).unwrap())
}

/// Numeric bases of curvature-like tensors on the test charts.
fn bases() -> Vec<(&'static str, Basis<Approx>)> {
    let mut out = Vec::new();
    for name in ["example1", "example2", "example4-corrected", "sphere-product"] {
        let s = suite(name);
        let pts = s.chart().sample_plan(3, 1e-9).float;
        out.push((name, s.numeric(&pts, 1).pop().unwrap().1));
    }
    out
}

const GCT: [Name; 4] = [Name::R, Name::C, Name::W, Name::G];

proptest! {
    #![proptest_config(ProptestConfig::with_cases(20))]

    #[test]
    fn action_on_wedge_endomorphism(v in prop::collection::vec(-2.0f64..2.0, 16)) {
        for (name, b) in bases() {
            let n = b.dim();
            let a = sym2(n, &v);
            for dn in GCT {
                let d = b.get(dn).unwrap();
                let op = curvature_operator(&d, b.inverse()).unwrap();
                let lhs = act(&op, &wedge_endomorphism(&a).unwrap()).unwrap();
                let da = curvature_action(&d, &a, b.inverse()).unwrap();
                let rhs = Tensor::from_fn(n, Valence::new(1, 5), |i| {
                    let (m, x1, x2, c, x, y) = (i[0], i[1], i[2], i[3], i[4], i[5]);
                    let mut s = 0.0;
                    if m == x1 {
                        s += da.get(&[x2, c, x, y]).v;
                    }
                    if m == x2 {
                        s -= da.get(&[x1, c, x, y]).v;
                    }
                    Approx::new(s)
                });
                prop_assert!(agree(&lhs, &rhs), "{} {}", name, dn);
            }
        }
    }

    #[test]
    fn action_is_a_derivation_on_kulkarni_nomizu(v in prop::collection::vec(-2.0f64..2.0, 16), w in prop::collection::vec(-2.0f64..2.0, 16)) {
        for (name, b) in bases() {
            let n = b.dim();
            let (a, e) = (sym2(n, &v), sym2(n, &w));
            for dn in [Name::R, Name::P, Name::S2, Name::K] {
                let Ok(d) = b.get(dn) else { continue };
                if d.rank() != 4 {
                    continue;
                }
                let ae = kulkarni_nomizu_general(&a, &e).unwrap();
                let lhs = curvature_action(&d, &ae, b.inverse()).unwrap();
                let de = curvature_action(&d, &e, b.inverse()).unwrap();
                let da = curvature_action(&d, &a, b.inverse()).unwrap();
                let rhs = kulkarni_nomizu_general(&a, &de).unwrap().add(&kulkarni_nomizu_general(&e, &da).unwrap()).unwrap();
                prop_assert!(agree(&lhs, &rhs), "{} {}", name, dn);
            }
        }
    }

    #[test]
    fn walker_identities(v in prop::collection::vec(-2.0f64..2.0, 16)) {
        for (name, b) in bases() {
            let n = b.dim();
            let a = sym2(n, &v);
            let op = wedge_endomorphism(&a).unwrap();
            let cyc = Tensor::from_fn(n, Valence::new(1, 3), |i| {
                let (m, x, y, c) = (i[0], i[1], i[2], i[3]);
                Approx::new(op.get(&[m, x, y, c]).v + op.get(&[m, y, c, x]).v + op.get(&[m, c, x, y]).v)
            });
            prop_assert!(vanishes(&cyc));
            for dn in GCT {
                let d = b.get(dn).unwrap();
                let q = q_tensor(&a, &d).unwrap();
                prop_assert!(vanishes(&walker_sum(&q).unwrap()), "{} {}", name, dn);
            }
        }
    }

    #[test]
    fn tachibana_is_skew_in_operator_pair(v in prop::collection::vec(-2.0f64..2.0, 16)) {
        for (_, b) in bases() {
            let a = sym2(b.dim(), &v);
            for dn in [Name::R, Name::S, Name::P] {
                let q = q_tensor(&a, &b.get(dn).unwrap()).unwrap();
                let k = q.rank();
                let mut perm: Vec<usize> = (0..k).collect();
                perm.swap(k - 2, k - 1);
                prop_assert!(agree(&q, &q.permute(&perm).neg()));
            }
        }
    }

    #[test]
    fn tachibana_vanishes_exactly_on_dependent_pairs(v in prop::collection::vec(-2.0f64..2.0, 16), w in prop::collection::vec(-2.0f64..2.0, 16), c in -3.0f64..3.0) {
        let n = 4;
        let a = sym2(n, &v);
        let ca = a.scale(&Approx::new(c));
        prop_assert!(vanishes(&q_tensor(&a, &ca).unwrap()));
        let e = sym2(n, &w);
        let q = q_tensor(&a, &e).unwrap();
        let indep = {
            let (x, y) = (vals(&a), vals(&e));
            let (xx, yy, xy): (f64, f64, f64) = (x.iter().map(|t| t * t).sum(), y.iter().map(|t| t * t).sum(), x.iter().zip(&y).map(|(s, t)| s * t).sum());
            xx * yy - xy * xy > 1e-3 * xx * yy
        };
        prop_assume!(indep);
        prop_assert!(!vanishes(&q));
    }

    #[test]
    fn metric_kulkarni_nomizu_is_injective(v in prop::collection::vec(-2.0f64..2.0, 16)) {
        for (_, b) in bases() {
            let h = sym2(b.dim(), &v);
            prop_assume!(max_abs(&vals(&h)) > 1e-3);
            let gh = kulkarni_nomizu_general(b.metric(), &h).unwrap();
            prop_assert!(max_abs(&vals(&gh)) > 1e-6 * max_abs(&vals(&h)));
            prop_assert!(!vanishes(&wedge_form(&h, b.metric()).unwrap()));
        }
    }

    #[test]
    fn covector_cyclic_criterion(v in prop::collection::vec(-2.0f64..2.0, 16), p in prop::collection::vec(-2.0f64..2.0, 4)) {
        let b = &bases()[1].1;
        let n = b.dim();
        let pi = covector(n, &p);
        prop_assume!(max_abs(&p) > 0.1);
        let cyclic = |a: &Tensor<Approx>| {
            let wf = wedge_form(a, b.metric()).unwrap();
            Tensor::from_fn(n, Valence::new(0, 5), |i| {
                let (x1, x2, x3, x, y) = (i[0], i[1], i[2], i[3], i[4]);
                let t = |u: usize, s: usize, r: usize| pi.get(&[u]).v * wf.get(&[s, r, x, y]).v;
                Approx::new(t(x1, x2, x3) + t(x2, x3, x1) + t(x3, x1, x2))
            })
        };
        let lhs_condition = |a: &Tensor<Approx>| {
            Tensor::from_fn(n, Valence::new(0, 3), |i| Approx::new(pi.get(&[i[0]]).v * a.get(&[i[1], i[2]]).v - pi.get(&[i[1]]).v * a.get(&[i[0], i[2]]).v))
        };
        let pp = Tensor::from_fn(n, Valence::new(0, 2), |i| Approx::new(p[i[0]] * p[i[1]]));
        prop_assert!(vanishes(&cyclic(&pp)));
        prop_assert!(vanishes(&lhs_condition(&pp)));
        let a = sym2(n, &v);
        prop_assert_eq!(vanishes(&cyclic(&a)), vanishes(&lhs_condition(&a)));
    }
}

#[test]
fn einstein_walker_criteria() {
    for (name, einstein) in [("sphere", true), ("sphere-product", true), ("example1", false), ("example2", false), ("example4-corrected", false)] {
        let s = suite(name);
        let pts = s.chart().sample_plan(5, 1e-9).float;
        let b = s.numeric(&pts, 1).pop().unwrap().1;
        let p = b.get(Name::P).unwrap();
        let qg = walker_sum(&q_tensor(b.metric(), &p).unwrap()).unwrap();
        assert_eq!(vanishes(&qg), einstein, "{name} Q(g,P)");
        let qs = walker_sum(&q_tensor(&b.get(Name::S).unwrap(), &p).unwrap()).unwrap();
        let kappa = b.scalar(Name::Kappa).unwrap().v;
        let z = b.get(Name::Z).unwrap();
        let degenerate = kappa.abs() < 1e-9 || vanishes(&z);
        assert!(!vanishes(&qs) || degenerate, "{name} Q(S,P)");
        if einstein {
            assert!(vanishes(&qs), "{name} Q(S,P)");
        }
        if name == "example4-corrected" {
            assert!(degenerate && !vanishes(&qs), "scalar-flat without a vanishing Q(S,P) cyclic sum");
        }
    }
}
