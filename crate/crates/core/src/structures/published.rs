//! Published component tables and statements for the bundled example charts.

use crate::curvature::Name;
use crate::expr::{self, Coeff};

use super::engine::{Engine, Env, Scal, Val};
use super::logic::{verdict_for, Claim};
use super::texpr::{act, diff, named, q, TExpr};
use super::venzi;
use super::{Certificate, Status, Verdict};

/// Tensor a table entry refers to.
#[derive(Clone, Copy, Debug)]
pub enum Table {
    Named(Name),
    /// `D.H`
    Act(Name, Name),
    /// `Q(A,H)`
    Q(Name, Name),
}

impl Table {
    fn texpr(&self) -> TExpr {
        match *self {
            Table::Named(n) => named(n),
            Table::Act(d, h) => act(named(d), named(h)),
            Table::Q(a, h) => q(named(a), named(h)),
        }
    }

    fn label(&self) -> String {
        match self {
            Table::Named(n) => n.to_string(),
            Table::Act(d, h) => format!("{d}.{h}"),
            Table::Q(a, h) => format!("Q({a},{h})"),
        }
    }
}

/// `t[index] = value`, one-based.
#[derive(Clone, Copy, Debug)]
pub struct Entry {
    pub table: Table,
    pub index: &'static [usize],
    pub value: &'static str,
}

#[derive(Clone, Debug)]
pub enum Statement {
    /// A claim over the chart.
    Claim(&'static str, Claim),
    /// `lhs = value * rhs`, with the scalar compared to `value`.
    Scaled { lhs: TExpr, value: &'static str, rhs: TExpr },
    /// A null Venzi form of `d` proportional to `form`.
    NullVenzi(Name, &'static [i64]),
}

pub struct Published {
    pub entries: Vec<Entry>,
    pub statements: Vec<Statement>,
    /// Attached to the certificate of any failing row.
    pub analysis: &'static str,
}

const R: Name = Name::R;
const S: Name = Name::S;
const P: Name = Name::P;
const G: Name = Name::Metric;

fn nm(n: Name) -> Table {
    Table::Named(n)
}

fn en(table: Table, index: &'static [usize], value: &'static str) -> Entry {
    Entry { table, index, value }
}

fn zero(a: TExpr) -> Claim {
    Claim::Zero(a)
}

fn ax(d: Name, h: Name) -> TExpr {
    act(named(d), named(h))
}

fn qq(a: Name, h: Name) -> TExpr {
    q(named(a), named(h))
}

fn example1() -> Published {
    let entries = vec![
        en(nm(R), &[2, 3, 2, 3], "-exp(x1+x2)/2"),
        en(nm(S), &[2, 2], "1/2"),
        en(nm(S), &[3, 3], "exp(x2)/2"),
        en(nm(Name::Kappa), &[], "exp(-x1)"),
        en(nm(P), &[1, 2, 2, 1], "-exp(x1)/6"),
        en(nm(P), &[2, 4, 2, 4], "1/6"),
        en(nm(P), &[3, 4, 3, 4], "exp(x2)/6"),
        en(nm(P), &[1, 3, 3, 1], "-exp(x1+x2)/6"),
        en(nm(P), &[2, 3, 2, 3], "-exp(x1+x2)/3"),
        en(nm(P), &[2, 3, 3, 2], "exp(x1+x2)/3"),
    ];
    let statements = vec![
        Statement::Claim("R.R=0", zero(ax(R, R))),
        Statement::Claim("R.S=0", zero(ax(R, S))),
        Statement::Claim("P.S=0", zero(ax(P, S))),
        Statement::Claim("R.P=0", zero(ax(R, P))),
        Statement::Claim("P.R=0", zero(ax(P, R))),
        Statement::Claim("Q(S,R)=0", zero(qq(S, R))),
        Statement::Claim("R=S^S", zero(diff(named(R), super::texpr::kn(named(S), named(S))))),
        Statement::Scaled { lhs: ax(P, P), value: "-1/3", rhs: qq(S, P) },
        Statement::Claim("P.calR!=0", zero(ax(P, Name::CalR)).not()),
        Statement::Claim("P.calS!=0", zero(ax(P, Name::CalS)).not()),
    ];
    Published { entries, statements, analysis: "published value differs from the computed one; R equals exp(x1)*(S^S), not S^S" }
}

fn example2() -> Published {
    const A: &str = "-exp(x1)/(2*exp(x1)+1)";
    const B: &str = "-exp(2*x1)/(2*exp(x1)+1)";
    const V: &str = "-(exp(2*x1)-exp(x1))/(6*exp(x1)+3)";
    const V2: &str = "-2*(exp(2*x1)-exp(x1))/(6*exp(x1)+3)";
    const NV: &str = "(exp(2*x1)-exp(x1))/(6*exp(x1)+3)";
    const U: &str = "exp(2*x1)*(exp(x1)-1)/(2*exp(x1)+1)^3";
    const NU: &str = "-exp(2*x1)*(exp(x1)-1)/(2*exp(x1)+1)^3";
    const QG: &str = "exp(x1)*(exp(x1)-1)";
    const NQG: &str = "-exp(x1)*(exp(x1)-1)";
    const PR: &str = "2*exp(2*x1)*(exp(x1)-1)/(3*(2*exp(x1)+1)^3)";
    const NPR: &str = "-2*exp(2*x1)*(exp(x1)-1)/(3*(2*exp(x1)+1)^3)";
    let mut entries = vec![
        en(nm(R), &[1, 2, 1, 2], A),
        en(nm(R), &[1, 3, 1, 3], A),
        en(nm(R), &[1, 4, 1, 4], A),
        en(nm(R), &[2, 3, 2, 3], B),
        en(nm(R), &[2, 4, 2, 4], B),
        en(nm(R), &[3, 4, 3, 4], B),
        en(nm(S), &[1, 1], "3*exp(x1)/(2*exp(x1)+1)^2"),
        en(nm(S), &[2, 2], "exp(x1)/(2*exp(x1)+1)"),
        en(nm(S), &[3, 3], "exp(x1)/(2*exp(x1)+1)"),
        en(nm(S), &[4, 4], "exp(x1)/(2*exp(x1)+1)"),
        en(nm(Name::Kappa), &[], "6*exp(x1)*(1+exp(x1))/(1+2*exp(x1))^3"),
        en(nm(P), &[1, 2, 2, 1], V2),
        en(nm(P), &[1, 3, 3, 1], V2),
        en(nm(P), &[1, 4, 4, 1], V2),
        en(nm(P), &[2, 3, 2, 3], V),
        en(nm(P), &[2, 3, 3, 2], NV),
        en(nm(P), &[2, 4, 2, 4], V),
        en(nm(P), &[2, 4, 4, 2], NV),
        en(nm(P), &[3, 4, 3, 4], V),
        en(nm(P), &[3, 4, 4, 3], NV),
    ];
    let six: [(&'static [usize], bool); 6] = [
        (&[1, 2, 2, 3, 1, 3], true),
        (&[1, 2, 2, 4, 1, 4], true),
        (&[1, 3, 2, 3, 1, 2], false),
        (&[1, 3, 3, 4, 1, 4], true),
        (&[1, 4, 2, 4, 1, 2], false),
        (&[1, 4, 3, 4, 1, 3], false),
    ];
    for (table, pos, neg) in [
        (Table::Act(R, R), U, NU),
        (Table::Q(G, R), QG, NQG),
        (Table::Q(S, R), U, NU),
        (Table::Act(P, R), PR, NPR),
    ] {
        for (idx, plus) in six {
            entries.push(en(table, idx, if plus { pos } else { neg }));
        }
    }
    let statements = vec![
        Statement::Scaled { lhs: ax(R, R), value: "exp(x1)/(2*exp(x1)+1)^3", rhs: qq(G, R) },
        Statement::Claim("R.R=Q(S,R)", zero(diff(ax(R, R), qq(S, R)))),
        Statement::Scaled { lhs: ax(R, S), value: "exp(x1)/(2*exp(x1)+1)^3", rhs: qq(G, S) },
        Statement::Scaled { lhs: ax(P, S), value: "exp(x1)/(2*exp(x1)+1)^3", rhs: qq(G, S) },
        Statement::Scaled { lhs: ax(P, R), value: "2*exp(x1)/(3*(2*exp(x1)+1)^3)", rhs: qq(G, R) },
        Statement::Scaled { lhs: ax(P, R), value: "2/3", rhs: qq(S, R) },
    ];
    Published { entries, statements, analysis: "published value differs from the computed one" }
}

fn example3_entries() -> Vec<Entry> {
    vec![
        en(nm(R), &[1, 2, 1, 2], "-exp(2*x1)*x4^2"),
        en(nm(R), &[1, 2, 1, 3], "-exp(2*x1)"),
        en(nm(R), &[1, 4, 1, 4], "-exp(2*x1)"),
        en(nm(R), &[1, 5, 1, 5], "-f*exp(2*x1)"),
        en(nm(R), &[2, 3, 2, 3], "exp(4*x1)/a"),
        en(nm(R), &[2, 4, 3, 4], "-exp(4*x1)/a"),
        en(nm(R), &[2, 4, 2, 4], "-exp(2*x1)*(a+exp(2*x1)*x4^2)/a"),
        en(nm(R), &[2, 5, 2, 5], "-exp(2*x1)*(2*a*f*f''-a*f'^2+4*f^2*exp(2*x1)*x4^2)/(4*a*f)"),
        en(nm(R), &[2, 5, 3, 5], "-f*exp(4*x1)/a"),
        en(nm(R), &[4, 5, 4, 5], "-f*exp(4*x1)/a"),
        en(nm(S), &[1, 1], "4"),
        en(nm(S), &[2, 2], "(2*a*f*f''-a*f'^2+4*a*f^2+16*f^2*exp(2*x1)*x4^2)/(4*a*f^2)"),
        en(nm(S), &[2, 3], "4*exp(2*x1)/a"),
        en(nm(S), &[4, 4], "4*exp(2*x1)/a"),
        en(nm(S), &[5, 5], "4*f*exp(2*x1)/a"),
        en(nm(Name::Kappa), &[], "20/a"),
        en(nm(P), &[1, 2, 2, 1], "-a*(2*f*f''-f'^2+4*f^2)/(16*f^2)"),
        en(nm(P), &[2, 3, 2, 2], "exp(2*x1)*(2*f*f''-f'^2+4*f^2)/(16*f^2)"),
        en(nm(P), &[2, 4, 2, 4], "-exp(2*x1)*(-2*f*f''+f'^2+12*f^2)/(16*f^2)"),
        en(nm(P), &[2, 4, 4, 2], "exp(2*x1)"),
        en(nm(P), &[2, 5, 2, 5], "exp(2*x1)*(-6*f*f''+3*f'^2+4*f^2)/(16*f)"),
        en(nm(P), &[2, 5, 5, 2], "exp(2*x1)*(2*f*f''-f'^2)/(4*f)"),
        en(Table::Act(R, R), &[1, 2, 2, 4, 1, 4], "exp(2*x1)"),
        en(Table::Act(R, R), &[1, 4, 2, 4, 1, 2], "-exp(2*x1)"),
        en(Table::Act(R, R), &[1, 2, 2, 5, 1, 5], "exp(2*x1)*(2*f*f''-f'^2)/(4*f)"),
        en(Table::Act(R, R), &[1, 5, 2, 5, 1, 2], "-exp(2*x1)*(2*f*f''-f'^2)/(4*f)"),
        en(Table::Act(R, R), &[2, 3, 2, 4, 2, 4], "-exp(4*x1)/a"),
        en(Table::Act(R, R), &[2, 4, 2, 4, 2, 3], "2*exp(4*x1)/a"),
        en(Table::Act(R, R), &[2, 3, 2, 5, 2, 5], "-exp(4*x1)*(2*f*f''-f'^2)/(4*a*f)"),
        en(Table::Act(R, R), &[2, 5, 2, 5, 2, 3], "exp(4*x1)*(2*f*f''-f'^2)/(2*a*f)"),
        en(Table::Act(R, R), &[2, 5, 4, 5, 2, 4], "exp(4*x1)*(2*f*f''-f'^2)/(4*a*f)"),
        en(Table::Act(R, R), &[2, 4, 2, 5, 4, 5], "exp(4*x1)*(-2*f*f''+f'^2+4*f^2)/(4*a*f)"),
        en(Table::Act(R, R), &[2, 4, 4, 5, 2, 5], "-f*exp(4*x1)/a"),
        en(Table::Q(G, R), &[1, 2, 2, 4, 1, 4], "a*exp(2*x1)"),
        en(Table::Q(G, R), &[1, 4, 2, 4, 1, 2], "-a*exp(2*x1)"),
        en(Table::Q(G, R), &[2, 4, 4, 5, 2, 5], "-f*exp(4*x1)"),
        en(Table::Q(G, R), &[1, 2, 2, 5, 1, 5], "a*exp(2*x1)*(2*f*f''-f'^2)/(4*f)"),
        en(Table::Q(G, R), &[1, 5, 2, 5, 1, 2], "-a*exp(2*x1)*(2*f*f''-f'^2)/(4*f)"),
        en(Table::Q(G, R), &[2, 3, 2, 4, 2, 4], "-exp(4*x1)"),
        en(Table::Q(G, R), &[2, 4, 2, 4, 2, 3], "2*exp(4*x1)"),
        en(Table::Q(G, R), &[2, 4, 2, 5, 4, 5], "exp(4*x1)*(-2*f*f''+4*f^2+f'^2)/(4*f)"),
        en(Table::Q(G, R), &[2, 3, 2, 5, 2, 5], "-exp(4*x1)*(2*f*f''-f'^2)/(4*f)"),
        en(Table::Q(G, R), &[2, 5, 2, 5, 2, 3], "exp(4*x1)*(2*f*f''-f'^2)/(2*f)"),
        en(Table::Q(G, R), &[2, 5, 4, 5, 2, 4], "exp(4*x1)*(2*f*f''-f'^2)/(4*f)"),
    ]
}

fn example3_statements() -> Vec<Statement> {
    vec![
        Statement::NullVenzi(P, &[0, 1, 0, 0, 0]),
        Statement::Claim("W.W=0", zero(ax(Name::W, Name::W))),
        Statement::Scaled { lhs: ax(R, R), value: "1/a", rhs: qq(G, R) },
        Statement::Scaled { lhs: ax(P, S), value: "1/a", rhs: qq(G, S) },
        Statement::Claim("P.S!=0", zero(ax(P, S)).not()),
        Statement::Claim("P.calS=0", zero(ax(P, Name::CalS))),
    ]
}

fn example3() -> Published {
    Published {
        entries: example3_entries(),
        statements: example3_statements(),
        analysis: "the published tables are in terms of exp(2*x1) while this reading of the metric has exp(2*x2); see the example3-x1-reading chart",
    }
}

fn example3_x1() -> Published {
    Published { entries: example3_entries(), statements: example3_statements(), analysis: "published value differs from the computed one" }
}

fn example4() -> Published {
    let entries = vec![
        en(nm(R), &[1, 4, 1, 4], "-3*x1/4"),
        en(nm(S), &[1, 1], "3/(4*x1^2)"),
        en(nm(Name::Kappa), &[], "0"),
        en(nm(P), &[1, 2, 1, 1], "1/(4*x1^2)"),
        en(nm(P), &[1, 3, 1, 3], "(x1+2)^2/(4*x1^2)"),
        en(nm(P), &[1, 4, 4, 1], "3*x1/4"),
        en(nm(P), &[1, 4, 1, 4], "-x1/2"),
    ];
    let statements = vec![
        Statement::Claim("R.R=0", zero(ax(R, R))),
        Statement::Claim("R.S=0", zero(ax(R, S))),
        Statement::Claim("Q(S,R)=0", zero(qq(S, R))),
        Statement::Claim("P.R=0", zero(ax(P, R))),
        Statement::Claim("P.calS=0", zero(ax(P, Name::CalS))),
        Statement::Claim("P.S=0", zero(ax(P, S))),
        Statement::Claim("not einstein", Claim::Ratio(named(S), named(G)).not()),
    ];
    Published { entries, statements, analysis: "published value differs from the computed one on the corrected line element" }
}

/// Published data for a bundled chart, by chart name.
pub fn published(chart: &str) -> Option<Published> {
    Some(match chart {
        "example1" => example1(),
        "example2" => example2(),
        "example3" => example3(),
        "example3-x1-reading" => example3_x1(),
        "example4-corrected" => example4(),
        _ => return None,
    })
}

fn component(v: &Val, idx: &[usize]) -> Scal {
    match v {
        Val::Sym(t) => Scal::Sym(t.get(idx).clone()),
        Val::Num(ts) => Scal::Num(ts.iter().map(|t| *t.get(idx)).collect()),
    }
}

fn scal_certificate(e: &Engine, claim: &str, residual: &Scal, analysis: &str) -> Certificate {
    let xs = e.to_sampled(residual);
    let evidence = e.points.iter().zip(&xs).take(3).map(|((i, _), x)| (*i, x.v)).collect();
    Certificate { claim: claim.to_string(), residual: e.render_scal(residual), evidence, analysis: analysis.to_string() }
}

fn expected(e: &Engine, s: &str) -> Result<Scal, String> {
    expr::parse(s, &e.suite.chart().layout).map(|x| Scal::Sym(x.simplify())).map_err(|err| err.to_string())
}

/// Compares `computed - expected` to zero, attaching a certificate on failure.
fn compare(e: &Engine, id: String, computed: &Scal, want: &Scal, analysis: &str) -> Verdict {
    let d = e.scal_diff(computed, want);
    let mut v = e.verdict_from_grade(id.clone(), e.grade_scalar(&d)).value(format!("computed {}", e.render_scal(computed)));
    if v.status == Status::Fails {
        v.certificate = Some(scal_certificate(e, &id, &d, analysis));
    }
    v
}

pub fn entry_row(e: &Engine, x: &Entry, analysis: &str) -> Verdict {
    let id = if x.index.is_empty() {
        format!("{}={}", x.table.label(), x.value)
    } else {
        let idx: Vec<String> = x.index.iter().map(|i| i.to_string()).collect();
        format!("{}[{}]={}", x.table.label(), idx.join(","), x.value)
    };
    let want = match expected(e, x.value) {
        Ok(w) => w,
        Err(m) => return Verdict::new(id, Status::Unavailable, e.confidence()).note(m),
    };
    let idx: Vec<usize> = x.index.iter().map(|i| i - 1).collect();
    match e.eval(&x.table.texpr(), &Env::none()) {
        Err(err) => Verdict::new(id, Status::Unavailable, e.confidence()).note(err.to_string()),
        Ok(v) => compare(e, id, &component(&v, &idx), &want, analysis),
    }
}

pub fn statement_row(e: &Engine, s: &Statement, analysis: &str) -> Verdict {
    match s {
        Statement::Claim(label, c) => verdict_for(e, label.to_string(), c, &Env::none(), Some(analysis)),
        Statement::Scaled { lhs, value, rhs } => {
            let id = format!("{lhs}=({value})*{rhs}");
            let v = e.check_ratio(id.clone(), lhs, rhs, &Env::none());
            let Some(l) = v.scalar.clone() else {
                let mut v = v;
                if v.status == Status::Fails || v.status == Status::Improper {
                    let residual = v.witness.as_ref().map(|w| w.to_string()).unwrap_or_else(|| "both sides vanish".into());
                    let evidence = v.witness.as_ref().map(|w| vec![(w.point, w.value)]).unwrap_or_default();
                    v.status = Status::Fails;
                    v.certificate = Some(Certificate { claim: id, residual, evidence, analysis: analysis.to_string() });
                }
                return v;
            };
            match expected(e, value) {
                Err(m) => Verdict::new(id, Status::Unavailable, e.confidence()).note(m),
                Ok(want) => compare(e, id, &l, &want, analysis),
            }
        }
        Statement::NullVenzi(d, form) => {
            let txt: Vec<String> = form.iter().map(|x| x.to_string()).collect();
            let id = format!("venzi({d}) has null Pi=({})", txt.join(","));
            let res = venzi::solve(e, *d);
            let target: Vec<Coeff> = form.iter().map(|&x| Coeff::int(x)).collect();
            let found = res.forms.iter().zip(&res.null).any(|(f, &null)| null && proportional(f, &target));
            if found {
                Verdict::holds(id, res.verdict.confidence == super::Confidence::Numeric).value(res.verdict.value.unwrap_or_default())
            } else {
                let shown: Vec<String> = res.forms.iter().map(|f| format!("({})", f.iter().map(|c| c.to_string()).collect::<Vec<_>>().join(","))).collect();
                let mut v = Verdict::new(id.clone(), Status::Fails, res.verdict.confidence).value(format!("forms [{}]", shown.join(", ")));
                v.certificate = Some(Certificate { claim: id, residual: format!("solution forms [{}] null {:?}", shown.join(", "), res.null), evidence: Vec::new(), analysis: analysis.to_string() });
                v
            }
        }
    }
}

fn proportional(a: &[Coeff], b: &[Coeff]) -> bool {
    let Some(p) = b.iter().position(|x| !x.is_zero()) else { return false };
    if a[p].is_zero() {
        return false;
    }
    let k = a[p].div(&b[p]);
    a.iter().zip(b).all(|(x, y)| *x == k.mul(y))
}

/// Published rows for a chart, or nothing for charts without published data.
pub fn rows(e: &Engine) -> Vec<Verdict> {
    let Some(name) = e.suite.chart().name.as_deref() else { return Vec::new() };
    let Some(p) = published(name) else { return Vec::new() };
    let mut out: Vec<Verdict> = p.entries.iter().map(|x| entry_row(e, x, p.analysis)).collect();
    out.extend(p.statements.iter().map(|s| statement_row(e, s, p.analysis)));
    out
}
