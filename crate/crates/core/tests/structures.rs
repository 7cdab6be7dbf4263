mod common;

use common::suite;
use tachibana::curvature::Name;
use tachibana::structures::catalog;
use tachibana::structures::condition::{parse, ConditionError, Side};
use tachibana::structures::{report, Engine, Options, Status};

#[test]
fn parses_the_condition_forms() {
    let c = parse("P.calS = 0").unwrap();
    assert_eq!((c.lhs, c.rhs), (Side::Action(Name::P, Name::CalS), Side::Zero));
    let c = parse("R.R=L*Q(g,R)").unwrap();
    assert_eq!(c.rhs, Side::Scaled(Name::Metric, Name::R));
    assert_eq!(c.id(), "R.R=L*Q(g,R)");
    let c = parse(" P.S = R.S ").unwrap();
    assert_eq!(c.id(), "P.S=R.S");
    assert_eq!(parse("Q(S,P)=0").unwrap().lhs, Side::Q(Name::S, Name::P));
}

#[test]
fn reports_parse_errors_with_columns() {
    assert!(matches!(parse("R.R"), Err(ConditionError::Parse { .. })));
    assert!(matches!(parse("R.R = L*Z(g,R)"), Err(ConditionError::Parse { .. })));
    assert!(matches!(parse("R.R = 0 0"), Err(ConditionError::Parse { .. })));
    assert!(matches!(parse("L*Q(g,R) = L*Q(S,R)"), Err(ConditionError::Parse { .. })));
    match parse("R.R = foo") {
        Err(ConditionError::Parse { col, .. }) => assert_eq!(col, 7),
        other => panic!("{other:?}"),
    }
}

#[test]
fn rejects_valence_mismatches() {
    assert!(matches!(parse("S.R = 0"), Err(ConditionError::Valence(_))));
    assert!(matches!(parse("R.R = Q(g,S)"), Err(ConditionError::Valence(_))));
    assert!(matches!(parse("R.S = L*Q(R,S)"), Err(ConditionError::Valence(_))));
    assert!(matches!(parse("0 = 0"), Err(ConditionError::Valence(_))));
    assert!(parse("P.calS = L*Q(g,calS)").is_ok());
}

#[test]
fn extracted_scalar_is_reported() {
    let s = suite("example2");
    let e = Engine::new(&s, Options::default());
    let v = parse("P.R = L*Q(S,R)").unwrap().run(&e);
    assert_eq!(v.status, Status::HoldsSymbolic);
    assert_eq!(v.value.as_deref(), Some("L=2/3 (constant)"));
    let v = parse("R.S = L*Q(S,S)").unwrap().run(&e);
    assert_eq!(v.status, Status::Fails);
    let s1 = suite("example1");
    let e1 = Engine::new(&s1, Options::default());
    assert_eq!(parse("R.S = L*Q(S,S)").unwrap().run(&e1).status, Status::Improper);
}

#[test]
fn numeric_grading_agrees_with_symbolic() {
    let s = suite("example1");
    let sym = Engine::new(&s, Options::default());
    let num = Engine::new(&s, Options { numeric_only: true, ..Options::default() });
    for c in ["R.R=0", "P.calR=0", "P.P=L*Q(S,P)", "G.R=0"] {
        let c = parse(c).unwrap();
        assert_eq!(c.run(&sym).status.holds(), c.run(&num).status.holds(), "{}", c.id());
    }
    assert_eq!(parse("R.R=0").unwrap().run(&num).status, Status::HoldsNumeric);
}

#[test]
fn text_and_kv_carry_the_same_fields() {
    let s = suite("example1");
    let e = Engine::new(&s, Options::default());
    let sections = catalog::report(&e);
    let text = report::text("example1", &sections);
    let kv = report::kv("example1", &sections);
    let all: Vec<_> = sections.iter().flat_map(|s| &s.rows).collect();
    for (i, v) in all.iter().enumerate() {
        for (k, x) in report::fields(v) {
            let x = x.replace('\n', " ");
            assert!(kv.contains(&format!("row.{i}.{k}={x}\n")), "kv row {i} {k}");
        }
        assert!(text.contains(&report::line(v)), "text row {}", v.id);
    }
    let c = report::counts(all.iter().copied());
    assert!(kv.contains(&format!("summary.holds={}\n", c.holds)));
    assert!(text.contains(&format!("holds={} fails={}", c.holds, c.fails)));
    assert_eq!(kv.lines().filter(|l| l.ends_with(".title=scalar conditions")).count(), 1);
}

#[test]
fn every_section_is_populated_on_a_published_chart() {
    let s = suite("example2");
    let e = Engine::new(&s, Options::default());
    let sections = catalog::report(&e);
    for t in ["scalar conditions", "symmetries", "semisymmetric type", "pseudosymmetric type", "walker type", "venzi", "roter", "lowering", "identities", "statements", "consequences", "published"] {
        let sec = sections.iter().find(|s| s.title == t).unwrap_or_else(|| panic!("{t}"));
        assert!(!sec.rows.is_empty(), "{t}");
    }
}

#[test]
fn flat_chart_is_trivially_symmetric() {
    let s = suite("flat");
    let e = Engine::new(&s, Options::default());
    let sc = catalog::scalar_conditions(&e);
    for id in ["einstein", "kappa=0", "constant-curvature", "locally-symmetric"] {
        assert!(sc.iter().any(|v| v.id == id && v.status.holds()), "{id}");
    }
    let ps = catalog::pseudosymmetric(&e);
    assert!(ps.iter().all(|v| v.status == Status::Improper || v.status.holds()));
}
