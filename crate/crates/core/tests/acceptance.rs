//! Acceptance gate: one PASS/FAIL line per criterion, asserted at the end.

mod common;

use std::io::Write;
use std::time::Instant;

use common::{random_suite, suite};
use tachibana::curvature::{approx, bianchi_residuals, CurvatureSuite, Name};
use tachibana::expr::{parse, Coeff, Expr};
use tachibana::fixtures::{fixture, loadable};
use tachibana::structures::catalog::{self, Section};
use tachibana::structures::condition::{self, Side};
use tachibana::structures::{venzi, Engine, Env, Options, Ratio, Scal, Status, Verdict};

const WALKER_IDS: [&str; 10] = [
    "walker(R.R)=0",
    "walker(G.G)=0",
    "walker(C.C)=0",
    "walker(W.W)=0",
    "walker(K.K)=0",
    "walker(R.W)=0",
    "walker(W.R)=0",
    "walker(P.R)=0",
    "walker(C.K)=0",
    "walker(K.C)=0",
];

struct Gate {
    lines: Vec<(usize, bool, String)>,
}

impl Gate {
    fn record(&mut self, n: usize, problems: Vec<String>, ok_detail: &str) {
        let pass = problems.is_empty();
        let detail = if pass { ok_detail.to_string() } else { problems.join("; ") };
        // Written to the stderr handle directly so the lines survive output capture.
        let _ = writeln!(std::io::stderr().lock(), "criterion {n} {}: {detail}", if pass { "PASS" } else { "FAIL" });
        self.lines.push((n, pass, detail));
    }
}

fn fixture_names() -> Vec<&'static str> {
    loadable().map(|f| f.name).collect()
}

fn numeric(points: usize) -> Options {
    Options { numeric_only: true, points, ..Options::default() }
}

fn rows(sections: &[Section]) -> impl Iterator<Item = &Verdict> {
    sections.iter().flat_map(|s| &s.rows)
}

fn section<'a>(sections: &'a [Section], title: &str) -> &'a [Verdict] {
    &sections.iter().find(|s| s.title == title).unwrap_or_else(|| panic!("no section {title}")).rows
}

fn row<'a>(rows: &'a [Verdict], id: &str) -> Option<&'a Verdict> {
    rows.iter().find(|v| v.id == id)
}

fn expr(s: &CurvatureSuite, text: &str) -> Expr {
    parse(text, &s.chart().layout).unwrap_or_else(|e| panic!("{text}: {e}"))
}

fn sym_equal(a: &Expr, b: &Expr) -> bool {
    a.sub(b).simplify().is_zero()
}

fn run(e: &Engine, cond: &str) -> Verdict {
    condition::parse(cond).unwrap_or_else(|err| panic!("{cond}: {err}")).run(e)
}

fn criterion1(gate: &mut Gate) {
    let mut bad = Vec::new();
    let t0 = Instant::now();
    let s = suite("example1");
    let e = Engine::new(&s, Options::default());
    let sections = catalog::report(&e);
    let elapsed = t0.elapsed();
    let cases: [(Name, &[usize], &str); 6] = [
        (Name::S, &[1, 1], "1/2"),
        (Name::S, &[2, 2], "exp(x2)/2"),
        (Name::R, &[1, 2, 1, 2], "-exp(x1+x2)/2"),
        (Name::P, &[0, 1, 1, 0], "-exp(x1)/6"),
        (Name::P, &[1, 3, 1, 3], "1/6"),
        (Name::P, &[2, 3, 2, 3], "exp(x2)/6"),
    ];
    for (n, idx, want) in cases {
        let t = s.get(n).unwrap();
        if !sym_equal(t.get(idx), &expr(&s, want)) {
            bad.push(format!("{n}{idx:?} = {}", s.chart().render(t.get(idx))));
        }
    }
    let kappa = s.basis.scalar(Name::Kappa).unwrap();
    if !sym_equal(&kappa, &expr(&s, "exp(-x1)")) {
        bad.push(format!("kappa = {}", s.chart().render(&kappa)));
    }
    if rows(&sections).count() == 0 {
        bad.push("empty report".into());
    }
    if elapsed.as_secs_f64() >= 10.0 {
        bad.push(format!("suite and report took {elapsed:?}"));
    }
    gate.record(1, bad, &format!("7 entries symbolic, suite and report in {:.2}s", elapsed.as_secs_f64()));
}

fn criterion2(gate: &mut Gate) {
    let mut bad = Vec::new();
    let s = suite("example2");
    let e = Engine::new(&s, Options::default());
    let published = tachibana::structures::published::rows(&e);
    for v in &published {
        if !v.status.holds() {
            bad.push(format!("{} {}", v.id, v.status.as_str()));
        }
    }
    for table in ["R[", "S[", "kappa=", "P[", "R.R[", "Q(g,R)[", "Q(S,R)[", "P.R["] {
        if !published.iter().any(|v| v.id.starts_with(table)) {
            bad.push(format!("no published {table} rows"));
        }
    }
    let cases = [
        ("R.R=L*Q(g,R)", "exp(x1)/(2*exp(x1)+1)^3"),
        ("P.R=L*Q(S,R)", "2/3"),
        ("P.R=L*Q(g,R)", "2*exp(x1)/(3*(2*exp(x1)+1)^3)"),
    ];
    for (cond, want) in cases {
        let c = condition::parse(cond).unwrap();
        let (Some(lhs), Some(rhs)) = (c.lhs.texpr(), c.rhs.texpr()) else { panic!("{cond}") };
        let r = e.ratio(&e.eval(&lhs, &Env::none()).unwrap(), &e.eval(&rhs, &Env::none()).unwrap());
        match r {
            Ratio::Holds { l, .. } => {
                let d = e.scal_diff(&l, &Scal::Sym(expr(&s, want)));
                if !matches!(e.grade_scalar(&d), tachibana::structures::Grade::Zero { numeric: false }) {
                    bad.push(format!("{cond}: L = {}", e.render_scal(&l)));
                }
            }
            other => bad.push(format!("{cond}: {other:?}")),
        }
    }
    gate.record(2, bad, &format!("{} published rows hold, 3 scalars match", published.len()));
}

fn expect(bad: &mut Vec<String>, label: &str, v: Option<&Verdict>, want: Status) {
    match v {
        Some(v) if v.status == want => {}
        Some(v) => bad.push(format!("{label} {}: {} (want {})", v.id, v.status.as_str(), want.as_str())),
        None => bad.push(format!("{label}: missing row")),
    }
}

fn criterion3(gate: &mut Gate) {
    let mut bad = Vec::new();
    let s1 = suite("example1");
    let e1 = Engine::new(&s1, Options::default());
    for (c, want) in [("P.R=0", Status::HoldsSymbolic), ("P.S=0", Status::HoldsSymbolic), ("P.calR=0", Status::Fails), ("P.calS=0", Status::Fails)] {
        expect(&mut bad, "example1", Some(&run(&e1, c)), want);
    }

    let s3 = suite("example3-x1-reading");
    let e3 = Engine::new(&s3, Options::default());
    let v = run(&e3, "P.S=L*Q(g,S)");
    expect(&mut bad, "example3", Some(&v), Status::HoldsSymbolic);
    match &v.scalar {
        Some(Scal::Sym(l)) if sym_equal(l, &expr(&s3, "1/a")) => {}
        other => bad.push(format!("example3 L = {other:?}")),
    }
    expect(&mut bad, "example3", Some(&run(&e3, "P.calS=0")), Status::HoldsSymbolic);

    let s4 = suite("example4-corrected");
    let e4 = Engine::new(&s4, Options::default());
    let sc = catalog::scalar_conditions(&e4);
    expect(&mut bad, "example4", row(&sc, "kappa=0"), Status::HoldsSymbolic);
    expect(&mut bad, "example4", row(&sc, "einstein"), Status::Fails);
    expect(&mut bad, "example4", Some(&run(&e4, "P.S=0")), Status::HoldsSymbolic);
    expect(&mut bad, "example4", Some(&run(&e4, "P.calS=0")), Status::HoldsSymbolic);
    gate.record(3, bad, "example1, example3 (x1 reading) and example4 (corrected) verdict sets exact");
}

fn criterion4(gate: &mut Gate) {
    let mut bad = Vec::new();
    let mut checked = 0;
    for name in fixture_names() {
        let s = suite(name);
        let e = Engine::new(&s, Options::default());
        let w = catalog::walker_rows(&e);
        for id in WALKER_IDS {
            checked += 1;
            match row(&w, id) {
                Some(v) if v.status.holds() => {}
                Some(v) => bad.push(format!("{name} {id}: {}", v.status.as_str())),
                None => bad.push(format!("{name} {id}: missing")),
            }
        }
        let rp = row(&w, "walker(R.P)=0").map(|v| v.status.holds());
        let rs = row(&catalog::semisymmetric(&e), "R.S=0").map(|v| v.status.holds());
        if rp.is_none() || rp != rs {
            bad.push(format!("{name}: walker(R.P)=0 is {rp:?} but R.S=0 is {rs:?}"));
        }
        let want = match name {
            "example1" => Some(true),
            "example2" => Some(false),
            _ => None,
        };
        if want.is_some() && rp != want {
            bad.push(format!("{name}: walker(R.P)=0 is {rp:?}"));
        }
    }
    for dim in [3, 4] {
        for seed in 0..5 {
            let s = random_suite(seed, dim);
            let e = Engine::new(&s, numeric(8));
            let w = catalog::walker_rows(&e);
            for id in WALKER_IDS {
                checked += 1;
                match row(&w, id) {
                    Some(v) if v.status.holds() => {}
                    Some(v) => bad.push(format!("random {seed}/{dim} {id}: {}", v.status.as_str())),
                    None => bad.push(format!("random {seed}/{dim} {id}: missing")),
                }
            }
        }
    }
    gate.record(4, bad, &format!("{checked} walker checks hold, walker(R.P)=0 matches R.S=0 on every fixture"));
}

fn certified_or_holds(v: &Verdict) -> bool {
    v.status.holds() || v.status == Status::NotApplicable || v.certificate.is_some()
}

/// Rows that need third derivatives of free function symbols.
fn unavailable_by_limitation(v: &Verdict) -> bool {
    v.status == Status::Unavailable && v.note.as_deref().is_some_and(|n| n.contains("not representable"))
}

fn criterion5(gate: &mut Gate) {
    let mut bad = Vec::new();
    let mut checked = 0;
    let mut skipped = 0;
    let symmetry_ids = |id: &str| {
        let (t, p) = id.split_once(':').unwrap_or(("", ""));
        (["R", "G", "C", "W", "K"].contains(&t) && ["skew12", "skew34", "pairsym", "bianchi1"].contains(&p)) || id == "P:skew12" || id == "P:bianchi1"
    };
    for name in fixture_names() {
        let s = suite(name);
        let e = Engine::new(&s, Options::default());
        let mut rs: Vec<Verdict> = catalog::axioms(&e).into_iter().filter(|v| symmetry_ids(&v.id)).collect();
        rs.extend(catalog::identities(&e));
        rs.extend(catalog::statements(&e));
        for v in &rs {
            checked += 1;
            if unavailable_by_limitation(v) {
                skipped += 1;
            } else if !certified_or_holds(v) {
                bad.push(format!("{name} {}: {}", v.id, v.status.as_str()));
            }
        }
        for id in ["trace(C)=0", "trace(Z)=0", "P.S=R.S", "R.W=R.R", "K.C=K.K"] {
            if !rs.iter().any(|v| v.id == id && v.status.holds()) {
                bad.push(format!("{name} {id} not holding"));
            }
        }
        let nabla_g = s.covariant_derivative(&s.basis.metric().clone()).unwrap();
        if nabla_g.data().iter().any(|x| !x.simplify().is_zero()) {
            bad.push(format!("{name}: nabla g nonzero"));
        }
        match bianchi_residuals(&s.basis) {
            Ok((first, second)) => {
                if first.data().iter().chain(second.data()).any(|x| !x.simplify().is_zero()) {
                    bad.push(format!("{name}: Bianchi residual nonzero"));
                }
            }
            Err(_) if name.starts_with("example3") => skipped += 1,
            Err(err) => bad.push(format!("{name}: Bianchi {err}")),
        }
    }
    for dim in [3, 4] {
        for seed in 0..10 {
            let s = random_suite(seed, dim);
            let e = Engine::new(&s, numeric(4));
            let mut rs: Vec<Verdict> = catalog::axioms(&e).into_iter().filter(|v| symmetry_ids(&v.id)).collect();
            rs.extend(catalog::identities(&e));
            rs.extend(catalog::statements(&e));
            for v in &rs {
                checked += 1;
                if !certified_or_holds(v) && !unavailable_by_limitation(v) {
                    bad.push(format!("random {seed}/{dim} {}: {}", v.id, v.status.as_str()));
                }
            }
        }
    }
    gate.record(5, bad, &format!("{checked} identity, statement and symmetry rows hold or are certified ({skipped} need f''')"));
}

fn criterion6(gate: &mut Gate) {
    let mut bad = Vec::new();
    let s3 = suite("example3-x1-reading");
    let e3 = Engine::new(&s3, Options::default());
    let r = venzi::solve(&e3, Name::P);
    let want: Vec<Vec<Coeff>> = vec![[0, 1, 0, 0, 0].iter().map(|&x| Coeff::int(x)).collect()];
    if r.forms != want || r.null != vec![true] || !r.verdict.status.holds() {
        bad.push(format!("example3 venzi(P): forms {:?} null {:?} {}", r.forms, r.null, r.verdict.status.as_str()));
    }
    expect(&mut bad, "example3", Some(&run(&e3, "W.W=0")), Status::HoldsSymbolic);
    for name in ["example1", "example2"] {
        let s = suite(name);
        let e = Engine::new(&s, Options::default());
        let r = venzi::solve(&e, Name::P);
        if !r.forms.is_empty() {
            bad.push(format!("{name} venzi(P) forms {:?}", r.forms));
        }
    }
    gate.record(6, bad, "venzi(P) null line (0,1,0,0,0) on example3, empty on examples 1 and 2");
}

fn criterion7(gate: &mut Gate) {
    let mut bad = Vec::new();
    let (mut active, mut certified) = (0, 0);
    for name in fixture_names() {
        let s = suite(name);
        let e = Engine::new(&s, Options::default());
        let sections = catalog::report(&e);
        for v in section(&sections, "consequences") {
            assert!(v.id.starts_with("if "), "{}", v.id);
            if v.status != Status::NotApplicable {
                active += 1;
            }
            if v.status == Status::Fails && v.certificate.is_some() {
                certified += 1;
            } else if !(v.status.holds() || v.status == Status::NotApplicable) {
                bad.push(format!("{name} {}: {}", v.id, v.status.as_str()));
            }
        }
    }
    gate.record(7, bad, &format!("{active} active consequences hold, {certified} failing ones carry certificates"));
}

fn has_full_certificate(v: &Verdict) -> bool {
    v.certificate.as_ref().is_some_and(|c| !c.residual.is_empty() && c.evidence.len() >= 3 && !c.analysis.is_empty())
}

fn criterion8(gate: &mut Gate) {
    let mut bad = Vec::new();
    let s1 = suite("example1");
    let e1 = Engine::new(&s1, Options::default());
    let p1 = tachibana::structures::published::rows(&e1);
    match row(&p1, "R=S^S") {
        Some(v) if v.status == Status::Fails && has_full_certificate(v) => {}
        other => bad.push(format!("example1 R=S^S: {:?}", other.map(|v| (v.status, v.certificate.is_some())))),
    }
    let s3 = suite("example3");
    let e3 = Engine::new(&s3, Options::default());
    let p3 = tachibana::structures::published::rows(&e3);
    let certs = p3.iter().filter(|v| has_full_certificate(v)).count();
    if certs == 0 || p3.iter().any(|v| !v.status.holds() && !has_full_certificate(v)) {
        bad.push(format!("example3 literal reading: {certs} certificates over {} rows", p3.len()));
    }
    match fixture("example4-verbatim").map(|f| f.load()) {
        Some(Err(err)) if err.to_string().contains("degree 3") => {}
        Some(Err(err)) => bad.push(format!("example4-verbatim diagnostic: {err}")),
        Some(Ok(_)) => bad.push("example4-verbatim loaded".into()),
        None => bad.push("no example4-verbatim fixture".into()),
    }
    gate.record(8, bad, &format!("R=S^S certified, {certs} example3 certificates, example4-verbatim rejected"));
}

/// Re-evaluates a failing zero condition at its witness.
fn witness_relative(e: &Engine, v: &Verdict) -> Option<f64> {
    let c = condition::parse(&v.id).ok()?;
    if c.rhs != Side::Zero {
        return None;
    }
    let w = v.witness.as_ref()?;
    let t = e.eval_exact(&c.lhs.texpr()?, &Env::none()).ok()?;
    let a = approx(t.get(&w.index), &e.plan.float[w.point])?;
    Some(a.relative())
}

fn criterion9(gate: &mut Gate) {
    let mut bad = Vec::new();
    let (mut zeros, mut fails, mut reevaluated) = (0, 0, 0);
    for name in fixture_names() {
        let s = suite(name);
        let sym = Engine::new(&s, Options::default());
        let num = Engine::new(&s, numeric(4));
        if num.points.len() != 4 {
            bad.push(format!("{name}: {} numeric points", num.points.len()));
            continue;
        }
        let a = catalog::report(&sym);
        let b = catalog::report(&num);
        for (x, y) in rows(&a).zip(rows(&b)) {
            assert_eq!(x.id, y.id);
            match x.status {
                Status::HoldsSymbolic => {
                    zeros += 1;
                    if !y.status.holds() {
                        bad.push(format!("{name} {}: symbolic Holds, numeric {}", x.id, y.status.as_str()));
                    }
                }
                Status::Fails => {
                    fails += 1;
                    if let Some(w) = &x.witness {
                        if w.relative <= 1e-6 {
                            bad.push(format!("{name} {}: witness relative {:e}", x.id, w.relative));
                        }
                    }
                    if let Some(r) = witness_relative(&sym, x) {
                        reevaluated += 1;
                        if r <= 1e-6 {
                            bad.push(format!("{name} {}: re-evaluated witness relative {r:e}", x.id));
                        }
                    }
                    if y.status != Status::Fails {
                        bad.push(format!("{name} {}: symbolic Fails, numeric {}", x.id, y.status.as_str()));
                    }
                }
                _ => {}
            }
        }
    }
    gate.record(9, bad, &format!("{zeros} symbolic zeros confirmed at 4 points, {fails} failures confirmed ({reevaluated} witnesses re-evaluated)"));
}

#[test]
fn acceptance() {
    let mut gate = Gate { lines: Vec::new() };
    criterion1(&mut gate);
    criterion2(&mut gate);
    criterion3(&mut gate);
    criterion4(&mut gate);
    criterion5(&mut gate);
    criterion6(&mut gate);
    criterion7(&mut gate);
    criterion8(&mut gate);
    criterion9(&mut gate);
    let failed: Vec<String> = gate.lines.iter().filter(|l| !l.1).map(|l| format!("criterion {}: {}", l.0, l.2)).collect();
    assert!(failed.is_empty(), "{}", failed.join("\n"));
}
