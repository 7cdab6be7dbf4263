use super::*;

fn lay() -> Layout {
    let mut l = Layout::new(vec!["x1".into(), "x2".into(), "x3".into()]);
    l.params.push(ParamSym { name: "a".into(), positive: true });
    l.funcs.push(FuncSym { name: "f".into(), arg: 1, positive: true });
    l
}

fn p(s: &str) -> Expr {
    parse(s, &lay()).unwrap()
}

fn r(e: &Expr) -> String {
    render(e, &lay())
}

#[test]
fn display_forms() {
    assert_eq!(r(&p("3*exp(x1)/(1+2*exp(x1))^2")), "3*exp(x1)/(1+2*exp(x1))^2");
    assert_eq!(r(&p("-exp(x1)/6")), "-1/6*exp(x1)");
    assert_eq!(r(&p("1/(x1+2)^2")), "1/(2+x1)^2");
    assert_eq!(r(&p("(x1+2)^2/(4*x1^2)")), "(2+x1)^2/(4*x1^2)");
    assert_eq!(r(&p("4*exp(2*x1)/a")), "4*exp(2*x1)/a");
    assert_eq!(r(&p("x1*x3")), "x1*x3");
    assert_eq!(r(&p("3/(4*x1^2)")), "3/(4*x1^2)");
    assert_eq!(r(&p("0*x1")), "0");
    assert_eq!(r(&p("f'^2*f''")), "f'^2*f''");
}

#[test]
fn render_round_trips() {
    for s in [
        "3*exp(x1)/(1+2*exp(x1))^2",
        "(x2-x1)/(x1*x3+1)",
        "exp(1/2*x1-x2)*a^-3",
        "f(x2)/(1+f'(x2)^2)",
        "1/(1+x1^2+x2^2)^2",
    ] {
        let e = p(s);
        let back = p(&r(&e));
        assert_eq!(back, e, "{s} -> {}", r(&e));
    }
}

#[test]
fn cancellation_is_exact() {
    let e = p("(x1^2-1)/(x1-1)");
    assert!(!e.simplify().has_denominator());
    assert_eq!(r(&e), "1+x1");
    let z = p("1/(1+x1) - x2/(x2+x1*x2)");
    assert!(z.is_zero());
}

#[test]
fn derivatives() {
    let l = lay();
    let e = p("1/(1+2*exp(x1))");
    let d = e.diff(0, &l).unwrap();
    assert_eq!(d, p("-2*exp(x1)/(1+2*exp(x1))^2"));
    assert_eq!(p("f*x2").diff(1, &l).unwrap(), p("f+f'*x2"));
    assert_eq!(p("f").diff(0, &l).unwrap(), Expr::zero());
    assert!(matches!(p("f''").diff(1, &l), Err(ExprError::DerivativeOrder(_))));
    assert_eq!(p("exp(x1/2)").diff(0, &l).unwrap(), p("exp(x1/2)/2"));
}

#[test]
fn parse_errors() {
    let l = lay();
    assert!(matches!(parse("exp(x1*x2)", &l), Err(ExprError::Parse { .. })));
    assert!(matches!(parse("exp(1+x1)", &l), Err(ExprError::Parse { .. })));
    assert!(matches!(parse("y", &l), Err(ExprError::Parse { pos: 0, .. })));
    assert!(matches!(parse("x1^x2", &l), Err(ExprError::Parse { .. })));
    assert!(matches!(parse("f'''", &l), Err(ExprError::Parse { .. })));
    assert!(matches!(parse("1/(x1-x1)", &l), Err(ExprError::Parse { .. })));
    assert!(matches!(parse("f(x1)", &l), Err(ExprError::Parse { .. })));
}

#[test]
fn exact_evaluation() {
    let l = lay();
    let a = Assignment {
        coords: vec![rational(1, 2), rational(2, 1), rational(-1, 3)],
        params: vec![rational(3, 1)],
        funcs: vec![[rational(1, 1), rational(2, 1), rational(5, 1)]],
    };
    assert_eq!(p("a*x1/(1+x3)").eval(&l, &a).unwrap(), Value::Exact(rational(9, 4)));
    assert_eq!(p("1/(x2-2)").eval(&l, &a), Err(ExprError::Pole));
    let v = p("exp(x1)").eval(&l, &a).unwrap().to_f64();
    assert!((v - 0.5f64.exp()).abs() < 1e-12);
}

#[test]
fn zero_test_grades() {
    let l = lay();
    let plan = SamplePlan::new(&l, &Domain::default(), 0, DEFAULT_TOLERANCE);
    assert_eq!(plan.len(), BATCHES * BATCH_SIZE);
    assert_eq!(is_zero(&p("x1-x1"), &plan), ZeroVerdict::ZeroSymbolic);
    match is_zero(&p("x1^2-x1^2+1/1000000"), &plan) {
        ZeroVerdict::Nonzero(w) => assert!(w.relative > 0.0),
        v => panic!("{v:?}"),
    }
    let a = SamplePlan::new(&l, &Domain::default(), 7, DEFAULT_TOLERANCE);
    let b = SamplePlan::new(&l, &Domain::default(), 7, DEFAULT_TOLERANCE);
    assert_eq!(a.float[3].coords, b.float[3].coords);
}
