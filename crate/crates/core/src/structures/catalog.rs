//! The registered checks, in report order.

use crate::curvature::Name;

use super::engine::{Engine, Env};
use super::logic::{item, known, run_theorem, verdict_for, Claim, Hypothesis, Item, Theorem};
use super::texpr::{act, diff, diff_scaled, kn, lin, named, outer_of, permute, q, special, walker, Sc, TExpr};
use super::{roter, venzi, Confidence, Status, Verdict};

pub struct Section {
    pub title: &'static str,
    pub rows: Vec<Verdict>,
}

fn g() -> TExpr {
    named(Name::Metric)
}
fn s() -> TExpr {
    named(Name::S)
}
fn s2() -> TExpr {
    named(Name::S2)
}
fn r() -> TExpr {
    named(Name::R)
}
fn p() -> TExpr {
    named(Name::P)
}
fn w() -> TExpr {
    named(Name::W)
}
fn e_() -> TExpr {
    named(Name::E)
}
fn wedge_s() -> TExpr {
    named(Name::WedgeS)
}

fn n() -> Sc {
    Sc::Dim
}
fn nm1() -> Sc {
    Sc::dim_minus(1)
}
fn l() -> Sc {
    Sc::l()
}
fn kappa() -> Sc {
    Sc::Kappa
}
/// `L + 1/(n-1)`.
fn l_shift() -> Sc {
    l().add(nm1().inv())
}

fn zero(t: TExpr) -> Claim {
    Claim::Zero(t)
}
fn equal(a: TExpr, b: TExpr) -> Claim {
    Claim::Zero(diff(a, b))
}
/// `a = s*b`.
fn equal_scaled(a: TExpr, s: Sc, b: TExpr) -> Claim {
    Claim::Zero(diff_scaled(a, s, b))
}
fn scalar_zero(s: Sc) -> Claim {
    Claim::Nonzero(s).not()
}
fn all(cs: Vec<Claim>) -> Claim {
    Claim::All(cs)
}
fn any(cs: Vec<Claim>) -> Claim {
    Claim::Any(cs)
}

fn einstein() -> Claim {
    zero(named(Name::Z))
}
fn constant_curvature() -> Claim {
    zero(w())
}
fn quadratic() -> Claim {
    zero(special::ricci_quadratic())
}
fn quadratic_trace() -> Claim {
    zero(special::ricci_quadratic_trace())
}
fn kappa2_relation() -> Claim {
    scalar_zero(Sc::Kappa2.sub(kappa().mul(kappa()).div(n())))
}
fn s_wedge_s() -> Claim {
    equal(kn(s(), s()), kn(g(), s2()))
}
fn cond() -> Claim {
    zero(special::cond())
}
fn s_s2_form() -> Claim {
    zero(special::s_s2_form())
}
/// `(n-1)E = κS - S²`.
fn e_contracted() -> Claim {
    zero(lin(vec![(nm1(), e_()), (kappa().neg(), s()), (Sc::int(1), s2())]))
}
/// `nS² = κS`.
fn s2_proportional() -> Claim {
    zero(lin(vec![(n(), s2()), (kappa().neg(), s())]))
}

fn d(name: Name) -> TExpr {
    named(name)
}

fn riemannian_einstein() -> Item {
    item("Riemannian => einstein", Claim::Riemannian.implies(einstein()))
}

fn quadratic_items() -> Vec<Item> {
    vec![item("n^2*S2-2n*kappa*S+kappa^2*g=0", quadratic()), item("kappa2=kappa^2/n", kappa2_relation()), riemannian_einstein()]
}

/// `Π(X1)D(X2,X3,...) + Π(X2)D(X3,X1,...) + Π(X3)D(X1,X2,...)` for a (0,4) D.
pub fn venzi_residual(pi: &[crate::expr::Coeff], dt: TExpr) -> TExpr {
    let o = outer_of(TExpr::Form(pi.to_vec()), dt);
    lin(vec![(Sc::int(1), o.clone()), (Sc::int(1), permute(o.clone(), &[1, 2, 0, 3, 4])), (Sc::int(1), permute(o, &[2, 0, 1, 3, 4]))])
}

/// `Π(X2)A(X1,X3) - Π(X1)A(X2,X3)`.
pub fn venzi_form(pi: &[crate::expr::Coeff], a: TExpr) -> TExpr {
    let o = outer_of(TExpr::Form(pi.to_vec()), a);
    diff(permute(o.clone(), &[1, 0, 2]), o)
}

fn check(e: &Engine, id: &str, c: Claim) -> Verdict {
    verdict_for(e, id.to_string(), &c, &Env::none(), None)
}

pub fn signature(e: &Engine) -> Verdict {
    let conf = e.confidence();
    match e.suite.chart().signature_survey(&e.plan) {
        Some(((pos, neg), constant)) => {
            let v = Verdict::new("signature", Status::HoldsNumeric, Confidence::Numeric).value(format!("({pos},{neg})"));
            if constant {
                v.note(if neg == 0 { "Riemannian" } else { "semi-Riemannian" })
            } else {
                v.note("signature changes across the sample")
            }
        }
        None => Verdict::new("signature", Status::Unavailable, conf).note("no pole-free sample point"),
    }
}

const AXIOM_TENSORS: [Name; 6] = [Name::R, Name::G, Name::C, Name::W, Name::K, Name::P];

pub fn axioms(e: &Engine) -> Vec<Verdict> {
    let mut out = Vec::new();
    for name in AXIOM_TENSORS {
        let t = d(name);
        out.push(check(e, &format!("{name}:skew12"), zero(lin(vec![(Sc::int(1), t.clone()), (Sc::int(1), permute(t.clone(), &[1, 0, 2, 3]))]))));
        out.push(check(e, &format!("{name}:skew34"), zero(lin(vec![(Sc::int(1), t.clone()), (Sc::int(1), permute(t.clone(), &[0, 1, 3, 2]))]))));
        out.push(check(e, &format!("{name}:pairsym"), equal(t.clone(), permute(t.clone(), &[2, 3, 0, 1]))));
        out.push(check(
            e,
            &format!("{name}:bianchi1"),
            zero(lin(vec![(Sc::int(1), t.clone()), (Sc::int(1), permute(t.clone(), &[1, 2, 0, 3])), (Sc::int(1), permute(t, &[2, 0, 1, 3]))])),
        ));
    }
    let pt = p();
    out.push(check(
        e,
        "P:cyclic234",
        zero(lin(vec![(Sc::int(1), pt.clone()), (Sc::int(1), permute(pt.clone(), &[0, 2, 3, 1])), (Sc::int(1), permute(pt, &[0, 3, 1, 2]))])),
    ));
    out
}

pub fn scalar_conditions(e: &Engine) -> Vec<Verdict> {
    let rows: Vec<(&str, Claim)> = vec![
        ("einstein", einstein()),
        ("kappa=0", scalar_zero(kappa())),
        ("constant-curvature", constant_curvature()),
        ("conformally-flat", zero(d(Name::C))),
        ("quasi-einstein", Claim::QuasiEinstein),
        ("ricci-simple", Claim::RicciSimple),
        ("ricci-symmetric", zero(d(Name::GradS))),
        ("codazzi", zero(special::codazzi())),
        ("locally-symmetric", zero(d(Name::GradR))),
        ("gradP=0", zero(d(Name::GradP))),
        ("cyclic-gradP-first=0", zero(special::cyclic_grad_p_first())),
        ("cyclic-gradP-last=0", zero(special::cyclic_grad_p_last())),
        ("cond=0", cond()),
        ("s-s2-form=0", s_s2_form()),
        ("S^S=g^S2", s_wedge_s()),
        ("n^2*S2-2n*kappa*S+kappa^2*g=0", quadratic()),
        ("n*S2-2kappa*S+kappa2*g=0", quadratic_trace()),
        ("kappa2=kappa^2/n", kappa2_relation()),
        ("n*S2=kappa*S", s2_proportional()),
        ("E=S2", equal(e_(), s2())),
        ("(n-1)E=kappa*S-S2", e_contracted()),
        ("n(n-1)R.S=kappa*Q(g,S)", zero(lin(vec![(n().mul(nm1()), act(r(), s())), (kappa().neg(), q(g(), s()))]))),
    ];
    let mut out = vec![signature(e)];
    out.extend(rows.into_iter().map(|(id, c)| check(e, id, c)));
    out.push(e.check_ratio("R=lambda*S^S", &r(), &kn(s(), s()), &Env::none()));
    out
}

const ACTORS: [Name; 6] = [Name::R, Name::G, Name::C, Name::W, Name::K, Name::P];
const TARGETS: [Name; 10] = [Name::R, Name::S, Name::P, Name::C, Name::W, Name::K, Name::Metric, Name::CalR, Name::CalS, Name::CalP];

pub fn semisymmetric(e: &Engine) -> Vec<Verdict> {
    let mut out = Vec::new();
    for a in ACTORS {
        for h in TARGETS {
            out.push(e.check_zero(format!("{a}.{h}=0"), &act(d(a), d(h)), &Env::none()));
        }
    }
    out
}

pub fn pseudosymmetric(e: &Engine) -> Vec<Verdict> {
    let mut out = Vec::new();
    for a in ACTORS {
        for h in TARGETS {
            if h == Name::Metric {
                continue;
            }
            for b in [Name::Metric, Name::S] {
                out.push(e.check_ratio(format!("{a}.{h}=L*Q({b},{h})"), &act(d(a), d(h)), &q(d(b), d(h)), &Env::none()));
            }
        }
    }
    out
}

pub fn walker_rows(e: &Engine) -> Vec<Verdict> {
    let pairs = [
        (Name::R, Name::R),
        (Name::G, Name::G),
        (Name::C, Name::C),
        (Name::W, Name::W),
        (Name::K, Name::K),
        (Name::R, Name::W),
        (Name::W, Name::R),
        (Name::P, Name::R),
        (Name::C, Name::K),
        (Name::K, Name::C),
        (Name::R, Name::P),
        (Name::P, Name::P),
        (Name::W, Name::P),
    ];
    let mut out: Vec<Verdict> = pairs.iter().map(|(a, b)| e.check_zero(format!("walker({a}.{b})=0"), &walker(act(d(*a), d(*b))), &Env::none())).collect();
    out.push(e.check_zero("walker(Q(g,P))=0", &walker(q(g(), p())), &Env::none()));
    out.push(e.check_zero("walker(Q(S,P))=0", &walker(q(s(), p())), &Env::none()));
    out
}

pub fn venzi_rows(e: &Engine) -> Vec<Verdict> {
    [Name::R, Name::W, Name::P].iter().map(|n| venzi::solve(e, *n).verdict).collect()
}

pub fn roter_rows(e: &Engine) -> Vec<Verdict> {
    vec![roter::solve(e, false).verdict, roter::solve(e, true).verdict]
}

/// Lowering `D·calH` against `D·H`.
pub fn commutation(e: &Engine) -> Vec<Verdict> {
    let mut out = Vec::new();
    for a in [Name::R, Name::W, Name::P] {
        for (h, at) in [(Name::CalS, 1), (Name::CalR, 3), (Name::CalP, 3)] {
            let lowered = h.lowered().expect("raised name");
            out.push(e.check_zero(format!("lower({a}.{h})={a}.{lowered}"), &diff(TExpr::Lower(Box::new(act(d(a), d(h))), at), act(d(a), d(lowered))), &Env::none()));
        }
    }
    out
}

/// Relations every metric satisfies.
pub fn identities(e: &Engine) -> Vec<Verdict> {
    let inv_nm1 = nm1().inv();
    let mut rows: Vec<(String, TExpr)> = Vec::new();
    for h in [Name::S, Name::R, Name::P] {
        rows.push((format!("P.{h}=R.{h}-Q(S,{h})/(n-1)"), lin(vec![(Sc::int(1), act(p(), d(h))), (Sc::int(-1), act(r(), d(h))), (inv_nm1.clone(), q(s(), d(h)))])));
    }
    rows.push(("R.W=R.R".into(), diff(act(r(), w()), act(r(), r()))));
    let mut printed: Vec<(String, TExpr)> = Vec::new();
    printed.push((
        "W.R=R.R-kappa/(2n(n-1))*Q(g,R)".into(),
        lin(vec![(Sc::int(1), act(w(), r())), (Sc::int(-1), act(r(), r())), (kappa().div(Sc::int(2).mul(n()).mul(nm1())), q(g(), r()))]),
    ));
    rows.push((
        "W.R=R.R-kappa/(n(n-1))*Q(g,R)".into(),
        lin(vec![(Sc::int(1), act(w(), r())), (Sc::int(-1), act(r(), r())), (kappa().div(n().mul(nm1())), q(g(), r()))]),
    ));
    rows.push(("K.C=K.K".into(), diff(act(d(Name::K), d(Name::C)), act(d(Name::K), d(Name::K)))));
    printed.push((
        "C.K=K.K-kappa/(2(n-1)(n-2))*Q(g,K)".into(),
        lin(vec![
            (Sc::int(1), act(d(Name::C), d(Name::K))),
            (Sc::int(-1), act(d(Name::K), d(Name::K))),
            (kappa().div(Sc::int(2).mul(nm1()).mul(Sc::dim_minus(2))), q(g(), d(Name::K))),
        ]),
    ));
    rows.push((
        "C.K=K.K+kappa/((n-1)(n-2))*Q(g,K)".into(),
        lin(vec![
            (Sc::int(1), act(d(Name::C), d(Name::K))),
            (Sc::int(-1), act(d(Name::K), d(Name::K))),
            (kappa().div(nm1().mul(Sc::dim_minus(2))).neg(), q(g(), d(Name::K))),
        ]),
    ));
    rows.push(("P.S=R.S".into(), diff(act(p(), s()), act(r(), s()))));
    rows.push(("P.(S^S)=R.(S^S)".into(), diff(act(p(), kn(s(), s())), act(r(), kn(s(), s())))));
    rows.push(("R.wedgeS=wedge(R.S)".into(), diff(act(r(), wedge_s()), wedge_of(act(r(), s())))));
    rows.push(("P=R-wedgeS/(n-1)".into(), lin(vec![(Sc::int(1), p()), (Sc::int(-1), r()), (inv_nm1.clone(), wedge_s())])));
    rows.push(("Q(g,R)+Q(g,R)swap=0".into(), lin(vec![(Sc::int(1), q(g(), r())), (Sc::int(1), permute(q(g(), r()), &[0, 1, 2, 3, 5, 4]))])));
    rows.push(("trace(C)=0".into(), TExpr::Contract(Box::new(d(Name::C)), 0, 3)));
    rows.push(("trace(Z)=0".into(), TExpr::Contract(Box::new(d(Name::Z)), 0, 1)));
    rows.push(("lower(R.calR)=R.R".into(), diff(TExpr::Lower(Box::new(act(r(), d(Name::CalR))), 3), act(r(), r()))));
    rows.push(("lower(R.calS)=R.S".into(), diff(TExpr::Lower(Box::new(act(r(), d(Name::CalS))), 1), act(r(), s()))));
    rows.push(("R.g=0".into(), act(r(), g())));
    let mut out: Vec<Verdict> = rows.into_iter().map(|(id, t)| e.check_zero(id, &t, &Env::none())).collect();
    out.extend(printed.into_iter().map(|(id, t)| verdict_for(e, id, &zero(t), &Env::none(), Some(GAUSS_FACTOR))));
    out
}

/// `wedge_A` for a (0,4) `A` built as `A(X2,X3,·,·)g(X1,X4) - A(X1,X3,·,·)g(X2,X4)`.
fn wedge_of(a: TExpr) -> TExpr {
    let o = outer_of(a, g());
    lin(vec![(Sc::int(1), permute(o.clone(), &[1, 2, 4, 5, 0, 3])), (Sc::int(-1), permute(o, &[0, 2, 4, 5, 1, 3]))])
}

/// Free-standing equivalences and implications.
pub fn statements(e: &Engine) -> Vec<Verdict> {
    let rr = || act(r(), r());
    let rp = || act(r(), p());
    let pt = p();
    let skew34 = zero(lin(vec![(Sc::int(1), pt.clone()), (Sc::int(1), permute(pt.clone(), &[0, 1, 3, 2]))]));
    let cyclic = zero(lin(vec![(Sc::int(1), pt.clone()), (Sc::int(1), permute(pt.clone(), &[0, 2, 3, 1])), (Sc::int(1), permute(pt, &[0, 3, 1, 2]))]));
    let mut rows: Vec<(String, Claim)> = vec![
        ("P:skew34 <=> einstein".into(), skew34.iff(einstein())),
        ("P:cyclic234 <=> einstein".into(), cyclic.iff(einstein())),
        ("P.G=0 <=> einstein".into(), zero(act(p(), d(Name::G))).iff(einstein())),
        ("cyclic-gradP-first=0 <=> codazzi".into(), zero(special::cyclic_grad_p_first()).iff(zero(special::codazzi()))),
        ("cyclic-gradP-last=0 <=> ricci-symmetric".into(), zero(special::cyclic_grad_p_last()).iff(zero(d(Name::GradS)))),
        ("gradR=0 <=> gradP=0".into(), zero(d(Name::GradR)).iff(zero(d(Name::GradP)))),
        ("R.R=0 <=> R.P=0".into(), zero(rr()).iff(zero(rp()))),
        ("R.R=L*Q(g,R) <=> R.P=L*Q(g,P)".into(), Claim::SameRatio([rr(), q(g(), r()), rp(), q(g(), p())])),
        ("P.S=L*Q(g,S) <=> R.S=L*Q(g,S)".into(), Claim::SameRatio([act(p(), s()), q(g(), s()), act(r(), s()), q(g(), s())])),
        ("walker(Q(g,P))=0 <=> einstein".into(), zero(walker(q(g(), p()))).iff(einstein())),
        ("walker(Q(S,P))=0 => kappa*(n*S-kappa*g)=0".into(), zero(walker(q(s(), p()))).implies(kappa_traceless())),
        ("n^2*S2-2n*kappa*S+kappa^2*g=0 <=> n*S2-2kappa*S+kappa2*g=0".into(), quadratic().iff(quadratic_trace())),
        ("Riemannian and n^2*S2-2n*kappa*S+kappa^2*g=0 => einstein".into(), all(vec![Claim::Riemannian, quadratic()]).implies(einstein())),
        ("Riemannian => (venzi(P) <=> constant-curvature)".into(), Claim::Riemannian.implies(Claim::Venzi(Name::P).iff(constant_curvature()))),
        ("walker(R.P)=0 <=> R.S=0".into(), zero(walker(rp())).iff(zero(act(r(), s())))),
        (
            "R.wedgeS=(wedgeS.wedgeS)/(n-1) => walker(P.P)=0".into(),
            equal_scaled(act(r(), wedge_s()), nm1().inv(), act(wedge_s(), wedge_s())).implies(zero(walker(act(p(), p())))),
        ),
        ("lower(P.calS)=P.S <=> (S^S)(X1,X2,X,Y)=2(X^_S2 Y)(X1,X2)".into(), zero(diff(TExpr::Lower(Box::new(act(p(), d(Name::CalS))), 1), act(p(), s()))).iff(zero(special::s_wedge_identity()))),
        ("lower(P.calR)=P.R <=> einstein".into(), zero(diff(TExpr::Lower(Box::new(act(p(), d(Name::CalR))), 3), act(p(), r()))).iff(einstein())),
        ("lower(P.calP)=P.P <=> einstein".into(), zero(diff(TExpr::Lower(Box::new(act(p(), d(Name::CalP))), 3), act(p(), p()))).iff(einstein())),
        ("Q(S,P)=0 => einstein or kappa=0".into(), zero(q(s(), p())).implies(any(vec![einstein(), scalar_zero(kappa())]))),
        ("Q(g,P)=0 => einstein".into(), zero(q(g(), p())).implies(einstein())),
        ("Q(S,R)=0 and P.calR=0 => P.calS=0".into(), all(vec![zero(q(s(), r())), zero(act(p(), d(Name::CalR)))]).implies(zero(act(p(), d(Name::CalS))))),
    ];
    for dn in [Name::C, Name::W, Name::K] {
        rows.push((format!("{dn}.R=0 <=> {dn}.P=0"), zero(act(d(dn), r())).iff(zero(act(d(dn), p())))));
        rows.push((format!("{dn}.R=L*Q(g,R) <=> {dn}.P=L*Q(g,P)"), Claim::SameRatio([act(d(dn), r()), q(g(), r()), act(d(dn), p()), q(g(), p())])));
    }
    for h in [Name::R, Name::P, Name::C, Name::W, Name::K] {
        let hyp = zero(q(s(), d(h)));
        rows.push((format!("Q(S,{h})=0 => (P.{h}=0 <=> R.{h}=0)"), hyp.clone().implies(zero(act(p(), d(h))).iff(zero(act(r(), d(h)))))));
        rows.push((
            format!("Q(S,{h})=0 => (P.{h}=L*Q(g,{h}) <=> R.{h}=L*Q(g,{h}))"),
            hyp.implies(Claim::SameRatio([act(p(), d(h)), q(g(), d(h)), act(r(), d(h)), q(g(), d(h))])),
        ));
    }
    let mut out: Vec<Verdict> = rows.into_iter().map(|(id, c)| check(e, &id, c)).collect();
    let printed = zero(walker(q(s(), p()))).iff(kappa_traceless());
    out.push(verdict_for(e, "walker(Q(S,P))=0 <=> kappa*(n*S-kappa*g)=0".into(), &printed, &Env::none(), Some(WALKER_QSP)));
    out
}

/// `κ(nS - κg) = 0`.
fn kappa_traceless() -> Claim {
    zero(lin(vec![(kappa(), special::traceless_ricci_n())]))
}

fn pseudo(lhs: TExpr, rhs: TExpr) -> Hypothesis {
    Hypothesis::Pseudo { label: format!("{lhs}=L*{rhs}"), lhs, rhs }
}

fn premise(label: &str, claim: Claim) -> Hypothesis {
    Hypothesis::Claim { label: label.to_string(), claim }
}

/// `R = λ A∧A` with `A = S/(n-1) + L g`.
fn shifted_square() -> Claim {
    let a = lin(vec![(nm1().inv(), s()), (l(), g())]);
    Claim::Ratio(r(), kn(a.clone(), a))
}

pub const ROTER_PRINTED: &str = "the printed relation omits the -S term produced by the Ricci contraction of R = c1 g^g + c2 g^S + c3 S^S; the relation without it fails while the contracted form holds";
pub const DEGENERATE_L: &str = "stated without a condition on L, but for L = -1/(n-1) the hypothesis reduces to a semisymmetry condition of R, which does not force this relation";
pub const VENZI_KAPPA: &str = "W is trace-free, so contracting the cyclic W identity puts no constraint on kappa; a null form can make both P and W Venzi spaces with kappa nonzero";
pub const GAUSS_FACTOR: &str = "with G = g^g/2 one has G.D = Q(g,D), so W = R - kappa/(n(n-1)) G and C = K + kappa/((n-1)(n-2)) G give the coefficients without the factor 1/2, and with a plus sign for C.K";
pub const WALKER_QSP: &str = "contracting the cyclic sum of Q(S,P) only gives the forward implication; with kappa = 0 the right side holds while the cyclic sum need not vanish";
pub const E_SIGN: &str = "with L = 0 this relation disagrees in the sign of the kappa*S term with the one stated for P.calP=0; the computed E follows the latter";

pub fn theorems() -> Vec<Theorem> {
    let calr = || d(Name::CalR);
    let cals = || d(Name::CalS);
    let calp = || d(Name::CalP);
    let rr = || act(r(), r());
    let ps = || act(p(), s());
    let rs = || act(r(), s());
    let qsr = || q(s(), r());
    let qsp = || q(s(), p());
    let not_shift = || Claim::Nonzero(l_shift());
    let shift_zero = || scalar_zero(l_shift());
    let ss2 = || item("S^S=g^S2", s_wedge_s());
    let ss2_degenerate = || known("S^S=g^S2", s_wedge_s(), DEGENERATE_L);
    let mut out = Vec::new();

    out.push(Theorem {
        hypothesis: premise("walker(P.P)=0", zero(walker(act(p(), p())))),
        items: vec![
            item("n(n-1)R.S=kappa*Q(g,S)", zero(lin(vec![(n().mul(nm1()), rs()), (kappa().neg(), q(g(), s()))]))),
            ss2(),
            item("n^2*S2-2n*kappa*S+kappa^2*g=0", quadratic()),
            riemannian_einstein(),
        ],
    });

    out.push(Theorem {
        hypothesis: premise("lower(P.calS)=P.S", zero(diff(TExpr::Lower(Box::new(act(p(), cals())), 1), ps()))),
        items: vec![
            item("n*S2=kappa*S", s2_proportional()),
            item("kappa*S=kappa^2/n*g", zero(lin(vec![(kappa(), s()), (kappa().mul(kappa()).div(n()).neg(), g())]))),
            item("kappa nonzero => einstein", Claim::Nonzero(kappa()).implies(einstein())),
        ],
    });

    out.push(Theorem {
        hypothesis: pseudo(act(p(), r()), q(g(), r())),
        items: vec![
            item("R.R=L*Q(g,R) <=> Q(S,R)=0", equal_scaled(rr(), l(), q(g(), r())).iff(zero(qsr()))),
            item(
                "not ricci-simple => (R.R=L*Q(g,R) <=> R=lambda*S^S)",
                Claim::RicciSimple.not().implies(equal_scaled(rr(), l(), q(g(), r())).iff(Claim::Ratio(r(), kn(s(), s())))),
            ),
            item("not quasi-einstein => (R.R=0 <=> R=lambda*A^A, A=S/(n-1)+L*g)", Claim::QuasiEinstein.not().implies(zero(rr()).iff(shifted_square()))),
            item("P.S=L*Q(g,S) <=> cond=0", equal_scaled(ps(), l(), q(g(), s())).iff(cond())),
            item(
                "E=S2-(n-1)/(n-2)*L*(n*S-kappa*g)",
                zero(lin(vec![
                    (Sc::int(1), e_()),
                    (Sc::int(-1), s2()),
                    (nm1().div(Sc::dim_minus(2)).mul(l()), special::traceless_ricci_n()),
                ])),
            ),
        ],
    });

    out.push(Theorem {
        hypothesis: pseudo(act(p(), r()), qsr()),
        items: vec![
            item("R.R=(L+1/(n-1))*Q(S,R)", equal_scaled(rr(), l_shift(), qsr())),
            item("R.R=0 <=> Q(S,R)=0 or L=-1/(n-1)", zero(rr()).iff(any(vec![zero(qsr()), shift_zero()]))),
            item("ricci-simple => (P.R=0 <=> R=lambda*S^S)", Claim::RicciSimple.implies(zero(act(p(), r())).iff(Claim::Ratio(r(), kn(s(), s()))))),
            item("P.S=0 <=> (L+1/(n-1))*cond=0", zero(ps()).iff(zero(lin(vec![(l_shift(), special::cond())])))),
            item("(L-(n-2)/(n-1))*(E-S2)=0", {
                let c = l().sub(Sc::dim_minus(2).div(nm1()));
                zero(lin(vec![(c.clone(), e_()), (c.neg(), s2())]))
            }),
        ],
    });

    out.push(Theorem {
        hypothesis: premise("P.R=0", zero(act(p(), r()))),
        items: vec![
            item("R.R=0 <=> Q(S,R)=0", zero(rr()).iff(zero(qsr()))),
            item("not ricci-simple => (R.R=0 <=> R=lambda*S^S)", Claim::RicciSimple.not().implies(zero(rr()).iff(Claim::Ratio(r(), kn(s(), s()))))),
            item("P.S=0 <=> cond=0", zero(ps()).iff(cond())),
            item("E=S2", equal(e_(), s2())),
        ],
    });

    let mut items = vec![
        item(
            "P.R=L*Q(g,R) <=> R.wedgeS=L*Q(g,wedgeS)+Q(S,wedgeS)/(n-1)",
            equal_scaled(act(p(), r()), l(), q(g(), r())).iff(zero(lin(vec![
                (Sc::int(1), act(r(), wedge_s())),
                (l().neg(), q(g(), wedge_s())),
                (nm1().inv().neg(), q(s(), wedge_s())),
            ]))),
        ),
        item("R.P=L*Q(g,P) <=> Q(S,P)=0", equal_scaled(act(r(), p()), l(), q(g(), p())).iff(zero(qsp()))),
        item("R.R=L*Q(g,R) <=> Q(S,P)=0", equal_scaled(rr(), l(), q(g(), r())).iff(zero(qsp()))),
        item(
            "n(n-1)R.S=(n^2*L-n*L+kappa)*Q(g,S)",
            zero(lin(vec![(n().mul(nm1()), rs()), (n().mul(nm1()).mul(l()).add(kappa()).neg(), q(g(), s()))])),
        ),
        item("(n-1)E=kappa*S-S2", e_contracted()),
    ];
    items.extend(quadratic_items());
    items.push(item("L*n^2*(n*S-kappa*g)=0", zero(lin(vec![(l().mul(n()).mul(n()), special::traceless_ricci_n())]))));
    items.push(item("L nonzero => einstein", Claim::Nonzero(l()).implies(einstein())));
    out.push(Theorem { hypothesis: pseudo(act(p(), p()), q(g(), p())), items });

    out.push(Theorem {
        hypothesis: pseudo(act(p(), p()), qsp()),
        items: vec![
            item(
                "P.R=L*Q(S,R) <=> R.wedgeS=(L+1/(n-1))*Q(S,wedgeS)",
                equal_scaled(act(p(), r()), l(), qsr()).iff(equal_scaled(act(r(), wedge_s()), l_shift(), q(s(), wedge_s()))),
            ),
            item(
                "R.R=L*Q(S,R) <=> R.wedgeS+Q(S,R)=(L+1/(n-1))*Q(S,wedgeS)",
                equal_scaled(rr(), l(), qsr()).iff(zero(lin(vec![(Sc::int(1), act(r(), wedge_s())), (Sc::int(1), qsr()), (l_shift().neg(), q(s(), wedge_s()))]))),
            ),
            item("R.P=L*Q(S,P) <=> Q(S,P)=0", equal_scaled(act(r(), p()), l(), qsp()).iff(zero(qsp()))),
            known(
                "n(n-1)R.S=(1+(n-1)*kappa*L)*Q(g,S)",
                zero(lin(vec![(n().mul(nm1()), rs()), (Sc::int(1).add(nm1().mul(kappa()).mul(l())).neg(), q(g(), s()))])),
                DEGENERATE_L,
            ),
            known("(n-1)E=kappa*S-S2", e_contracted(), DEGENERATE_L),
            item("L+1/(n-1) nonzero => n^2*S2-2n*kappa*S+kappa^2*g=0", not_shift().implies(quadratic())),
            item("L+1/(n-1) nonzero => kappa2=kappa^2/n", not_shift().implies(kappa2_relation())),
            item("Riemannian and L+1/(n-1) nonzero => einstein", all(vec![Claim::Riemannian, not_shift()]).implies(einstein())),
            known("L*kappa*(n*S-kappa*g)=0", zero(lin(vec![(l().mul(kappa()), special::traceless_ricci_n())])), DEGENERATE_L),
        ],
    });

    let mut items = vec![
        item("P.wedgeS=0 => P.R=0", zero(act(p(), wedge_s())).implies(zero(act(p(), r())))),
        item("Q(S,P)=0 => R.P=0 or R.R=0", zero(qsp()).implies(any(vec![zero(act(r(), p())), zero(rr())]))),
        item("(n-1)E=kappa*S-S2", e_contracted()),
    ];
    items.extend(quadratic_items());
    items.push(item("n(n-1)R.S=kappa*Q(g,S)", zero(lin(vec![(n().mul(nm1()), rs()), (kappa().neg(), q(g(), s()))]))));
    items.push(ss2());
    out.push(Theorem { hypothesis: premise("P.P=0", zero(act(p(), p()))), items });

    let mut items = vec![ss2()];
    items.extend(quadratic_items());
    items.push(item(
        "(n-1)E=L*(n-1)*kappa*g+(kappa-L*(n-1)*n)*S-S2",
        zero(lin(vec![
            (nm1(), e_()),
            (l().mul(nm1()).mul(kappa()).neg(), g()),
            (kappa().sub(l().mul(nm1()).mul(n())).neg(), s()),
            (Sc::int(1), s2()),
        ])),
    ));
    out.push(Theorem { hypothesis: pseudo(act(p(), cals()), q(g(), cals())), items });

    let mut items = vec![ss2()];
    items.extend(quadratic_items());
    items.push(item("(n-1)E=kappa*S-S2", e_contracted()));
    out.push(Theorem { hypothesis: premise("P.calS=0", zero(act(p(), cals()))), items });

    let mut items = vec![
        item("P.S=L*Q(g,S)", equal_scaled(ps(), l(), q(g(), s()))),
        item("R.S=L*Q(g,S)", equal_scaled(rs(), l(), q(g(), s()))),
        item("E=L*kappa*g-L*n*S+S2", zero(lin(vec![(Sc::int(1), e_()), (l().mul(kappa()).neg(), g()), (l().mul(n()), s()), (Sc::int(-1), s2())]))),
    ];
    items.extend(quadratic_items());
    items.push(ss2());
    items.push(item("P.calS=L*Q(g,calS) <=> cond=0 or s-s2-form=0", equal_scaled(act(p(), cals()), l(), q(g(), cals())).iff(any(vec![cond(), s_s2_form()]))));
    out.push(Theorem { hypothesis: pseudo(act(p(), calr()), q(g(), calr())), items });

    out.push(Theorem {
        hypothesis: pseudo(act(p(), calr()), q(s(), calr())),
        items: vec![
            item("L+1/(n-1)=0 => R.R=0", shift_zero().implies(zero(rr()))),
            item("P.S=0", zero(ps())),
            item("R.S=0", zero(rs())),
            item("E=S2", equal(e_(), s2())),
            item("L+1/(n-1) nonzero => n^2*S2-2n*kappa*S+kappa^2*g=0", not_shift().implies(quadratic())),
            item("L+1/(n-1) nonzero => kappa2=kappa^2/n", not_shift().implies(kappa2_relation())),
            ss2_degenerate(),
            known("n*S2=kappa*S", s2_proportional(), DEGENERATE_L),
            known("kappa*S=kappa2*g", zero(lin(vec![(kappa(), s()), (Sc::Kappa2.neg(), g())])), DEGENERATE_L),
            known("kappa nonzero => einstein", Claim::Nonzero(kappa()).implies(einstein()), DEGENERATE_L),
            item(
                "L+1/(n-1) nonzero => (P.calS=L*Q(g,calS) <=> cond=0)",
                not_shift().implies(equal_scaled(act(p(), cals()), l(), q(g(), cals())).iff(cond())),
            ),
        ],
    });

    let mut items = vec![item("P.S=0", zero(ps())), item("R.S=0", zero(rs())), item("E=S2", equal(e_(), s2()))];
    items.push(item("n*S2=kappa*S", s2_proportional()));
    items.push(item("kappa*S=kappa2*g", zero(lin(vec![(kappa(), s()), (Sc::Kappa2.neg(), g())]))));
    items.push(item("kappa nonzero => einstein", Claim::Nonzero(kappa()).implies(einstein())));
    items.extend(quadratic_items());
    items.push(item("P.calS=0 <=> cond=0 or s-s2-form=0", zero(act(p(), cals())).iff(any(vec![cond(), s_s2_form()]))));
    items.push(item("Q(S,R)=0 => P.calS=0", zero(qsr()).implies(zero(act(p(), cals())))));
    out.push(Theorem { hypothesis: premise("P.calR=0", zero(act(p(), calr()))), items });

    out.push(Theorem {
        hypothesis: pseudo(act(p(), calp()), q(g(), calp())),
        items: vec![
            known(
                "(n-1)E=L*n*kappa*g-(L*n^2+kappa)*S-S2",
                zero(lin(vec![(nm1(), e_()), (l().mul(n()).mul(kappa()).neg(), g()), (l().mul(n()).mul(n()).add(kappa()), s()), (Sc::int(1), s2())])),
                E_SIGN,
            ),
            item("n^2*S2-2n*kappa*S+kappa^2*g=0", quadratic()),
            item("kappa2=kappa^2/n", kappa2_relation()),
            item(
                "cond=0 => n/(n-1)*R.calS=Q(S,calS)/(n-1)-n*L/(n-1)*Q(g,calS)",
                cond().implies(zero(lin(vec![
                    (n().div(nm1()), act(r(), cals())),
                    (nm1().inv().neg(), q(s(), cals())),
                    (n().mul(l()).div(nm1()), q(g(), cals())),
                ]))),
            ),
            ss2(),
        ],
    });

    out.push(Theorem {
        hypothesis: pseudo(act(p(), calp()), q(s(), calp())),
        items: vec![
            item(
                "(L-1)(n-1)E=-(1+L(n-1))kappa*S+(1+L(n^2-1))S2",
                zero(lin(vec![
                    (l().sub(Sc::int(1)).mul(nm1()), e_()),
                    (Sc::int(1).add(l().mul(nm1())).mul(kappa()), s()),
                    (Sc::int(1).add(l().mul(n().mul(n()).sub(Sc::int(1)))).neg(), s2()),
                ])),
            ),
            item("L+1/(n-1) nonzero => n^2*S2-2n*kappa*S+kappa^2*g=0", not_shift().implies(quadratic())),
            item("L+1/(n-1) nonzero => kappa2=kappa^2/n", not_shift().implies(kappa2_relation())),
            item(
                "cond=0 and L+1/(n-1) nonzero => n/(n-1)*P.calS=(L-1/(n-1)^2)*Q(S,calS)",
                all(vec![cond(), not_shift()]).implies(zero(lin(vec![
                    (n().div(nm1()), act(p(), cals())),
                    (l().sub(nm1().mul(nm1()).inv()).neg(), q(s(), cals())),
                ]))),
            ),
            ss2_degenerate(),
        ],
    });

    out.push(Theorem {
        hypothesis: premise("P.calP=0", zero(act(p(), calp()))),
        items: vec![
            item("(n-1)E=kappa*S-S2", e_contracted()),
            item("n^2*S2-2n*kappa*S+kappa^2*g=0", quadratic()),
            item("kappa2=kappa^2/n", kappa2_relation()),
            item(
                "cond=0 => n/(n-1)*R.calS=Q(S,calS)/(n-1)",
                cond().implies(zero(lin(vec![(n().div(nm1()), act(r(), cals())), (nm1().inv().neg(), q(s(), cals()))]))),
            ),
            ss2(),
        ],
    });

    let (c1, c2, c3) = (Sc::c(1), Sc::c(2), Sc::c(3));
    let roter_terms = |extra: i64| {
        zero(lin(vec![
            (Sc::int(2).mul(c3.clone()), s2()),
            (kappa().mul(c2.clone()).add(Sc::int(2).mul(nm1()).mul(c1.clone())).neg(), g()),
            (Sc::int(2).mul(kappa()).mul(c3.clone()).add(Sc::dim_minus(2).mul(c2.clone())).add(Sc::int(extra)).neg(), s()),
        ]))
    };
    out.push(Theorem {
        hypothesis: Hypothesis::Roter { generalized: false },
        items: vec![
            known("2c3*S2=(kappa*c2+2(n-1)c1)g+(2kappa*c3+(n-2)c2)S", roter_terms(0), ROTER_PRINTED),
            item("2c3*S2=(kappa*c2+2(n-1)c1)g+(2kappa*c3+(n-2)c2-1)S", roter_terms(-1)),
        ],
    });

    let avoid = || nm1().inv().neg();
    let equivalents: Vec<(&str, Claim)> = vec![
        ("P.calS=0", zero(act(p(), cals()))),
        ("P.calS=L*Q(g,calS)", Claim::Ratio(act(p(), cals()), q(g(), cals()))),
        ("P.calR=0", zero(act(p(), calr()))),
        ("P.calR=L*Q(g,calR)", Claim::Ratio(act(p(), calr()), q(g(), calr()))),
        ("P.calR=L*Q(S,calR), L!=-1/(n-1)", Claim::RatioAvoiding(act(p(), calr()), q(s(), calr()), avoid())),
        ("P.P=0", zero(act(p(), p()))),
        ("P.P=L*Q(g,P)", Claim::Ratio(act(p(), p()), q(g(), p()))),
        ("P.P=L*Q(S,P), L!=-1/(n-1)", Claim::RatioAvoiding(act(p(), p()), qsp(), avoid())),
        ("P.calP=0", zero(act(p(), calp()))),
        ("P.calP=L*Q(g,calP)", Claim::Ratio(act(p(), calp()), q(g(), calp()))),
        ("P.calP=L*Q(S,calP), L!=-1/(n-1)", Claim::RatioAvoiding(act(p(), calp()), q(s(), calp()), avoid())),
    ];
    let mut items = vec![item("constant-curvature <=> einstein", constant_curvature().iff(einstein()))];
    for (label, c) in equivalents {
        items.push(item(format!("Riemannian => ({label} <=> constant-curvature)"), Claim::Riemannian.implies(c.iff(constant_curvature()))));
    }
    out.push(Theorem { hypothesis: Hypothesis::Roter { generalized: true }, items });
    out
}

pub fn theorem_rows(e: &Engine) -> Vec<Verdict> {
    let mut out = Vec::new();
    for t in theorems() {
        out.extend(run_theorem(e, &t));
    }
    out.extend(venzi_consequences(e));
    out
}

/// Consequences for a Venzi space of `P`, one group per found form.
pub fn venzi_consequences(e: &Engine) -> Vec<Verdict> {
    let head = "if venzi(P)";
    let res = venzi::solve(e, Name::P);
    let ids = ["W.W=Q(Z,W)", "kappa=0 if also venzi(R) or venzi(W)"];
    if !res.verdict.status.holds() || res.forms.is_empty() {
        let why = match res.verdict.status {
            Status::Improper => "P vanishes identically".to_string(),
            s if s.holds() => "no constant form found".to_string(),
            _ => "premise fails".to_string(),
        };
        return ids.iter().map(|id| Verdict::new(format!("{head} then {id}"), Status::NotApplicable, res.verdict.confidence).note(why.clone())).collect();
    }
    let z = d(Name::Z);
    let mut out = vec![check(e, &format!("{head} then W.W=Q(Z,W)"), equal(act(w(), w()), q(z.clone(), w())))];
    for (pi, null) in res.forms.iter().zip(&res.null) {
        let tag = format!("Pi=({})", pi.iter().map(|c| c.to_string()).collect::<Vec<_>>().join(","));
        let venzi_r = zero(venzi_residual(pi, r()));
        let venzi_w = zero(venzi_residual(pi, w()));
        if *null {
            out.push(check(e, &format!("{head} with null {tag} then venzi(W) with {tag}"), venzi_w.clone()));
        } else {
            out.push(check(e, &format!("{head} with non-null {tag} then W=0"), zero(w())));
        }
        out.push(check(e, &format!("{head} with {tag} then (venzi(R) with Pi <=> Pi(X2)S(X1,X3)=Pi(X1)S(X2,X3))"), venzi_r.clone().iff(zero(venzi_form(pi, s())))));
        out.push(check(e, &format!("{head} with {tag} then (venzi(W) with Pi <=> Pi(X2)Z(X1,X3)=Pi(X1)Z(X2,X3))"), venzi_w.clone().iff(zero(venzi_form(pi, z.clone())))));
        out.push(verdict_for(
            e,
            format!("{head} with {tag} then kappa=0 if also venzi(R) or venzi(W)"),
            &any(vec![venzi_r, venzi_w]).implies(scalar_zero(kappa())),
            &Env::none(),
            Some(VENZI_KAPPA),
        ));
    }
    out
}

/// The whole report, in fixed order.
pub fn report(e: &Engine) -> Vec<Section> {
    vec![
        Section { title: "scalar conditions", rows: scalar_conditions(e) },
        Section { title: "symmetries", rows: axioms(e) },
        Section { title: "semisymmetric type", rows: semisymmetric(e) },
        Section { title: "pseudosymmetric type", rows: pseudosymmetric(e) },
        Section { title: "walker type", rows: walker_rows(e) },
        Section { title: "venzi", rows: venzi_rows(e) },
        Section { title: "roter", rows: roter_rows(e) },
        Section { title: "lowering", rows: commutation(e) },
        Section { title: "identities", rows: identities(e) },
        Section { title: "statements", rows: statements(e) },
        Section { title: "consequences", rows: theorem_rows(e) },
        Section { title: "published", rows: super::published::rows(e) },
    ]
}
