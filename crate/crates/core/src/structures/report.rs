//! Text and key-value rendering of verdicts.

use std::fmt::Write;

use super::catalog::Section;
use super::{Status, Verdict};

/// The witness or extracted value shown in the third column.
pub fn detail(v: &Verdict) -> String {
    match (&v.value, &v.witness) {
        (Some(x), Some(w)) => format!("{x}; {w}"),
        (Some(x), None) => x.clone(),
        (None, Some(w)) => w.to_string(),
        (None, None) => "-".to_string(),
    }
}

/// `check-id | status | witness-or-value | confidence`
pub fn line(v: &Verdict) -> String {
    format!("{} | {} | {} | {}", v.id, v.status.as_str(), detail(v), v.confidence)
}

/// Ordered fields of one verdict, shared by both formats.
pub fn fields(v: &Verdict) -> Vec<(&'static str, String)> {
    let mut out = vec![("id", v.id.clone()), ("status", v.status.as_str().to_string()), ("detail", detail(v)), ("confidence", v.confidence.to_string())];
    if let Some(n) = &v.note {
        out.push(("note", n.clone()));
    }
    if let Some(c) = &v.certificate {
        out.push(("certificate.claim", c.claim.clone()));
        out.push(("certificate.residual", c.residual.clone()));
        let ev: Vec<String> = c.evidence.iter().map(|(p, x)| format!("point {p}: {x:.6e}")).collect();
        out.push(("certificate.evidence", ev.join("; ")));
        out.push(("certificate.analysis", c.analysis.clone()));
    }
    out
}

fn one_line(s: &str) -> String {
    s.replace('\n', " ")
}

pub fn verdict_text(v: &Verdict) -> String {
    let mut s = line(v);
    s.push('\n');
    for (k, x) in fields(v).into_iter().skip(4) {
        let _ = writeln!(s, "    {k}: {}", one_line(&x));
    }
    s
}

pub fn verdict_kv(prefix: &str, v: &Verdict) -> String {
    let mut s = String::new();
    for (k, x) in fields(v) {
        let _ = writeln!(s, "{prefix}.{k}={}", one_line(&x));
    }
    s
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct Counts {
    pub holds: usize,
    pub fails: usize,
    pub improper: usize,
    pub not_applicable: usize,
    pub unavailable: usize,
    pub certificates: usize,
}

pub fn counts<'a>(rows: impl IntoIterator<Item = &'a Verdict>) -> Counts {
    let mut c = Counts::default();
    for v in rows {
        match v.status {
            Status::HoldsSymbolic | Status::HoldsNumeric => c.holds += 1,
            Status::Fails => c.fails += 1,
            Status::Improper => c.improper += 1,
            Status::NotApplicable => c.not_applicable += 1,
            Status::Unavailable => c.unavailable += 1,
        }
        c.certificates += v.certificate.is_some() as usize;
    }
    c
}

fn summary(c: &Counts) -> [(&'static str, usize); 6] {
    [
        ("holds", c.holds),
        ("fails", c.fails),
        ("improper", c.improper),
        ("not_applicable", c.not_applicable),
        ("unavailable", c.unavailable),
        ("certificates", c.certificates),
    ]
}

pub fn text(title: &str, sections: &[Section]) -> String {
    let mut s = format!("# {title}\n");
    for sec in sections {
        let _ = writeln!(s, "\n## {}", sec.title);
        for v in &sec.rows {
            s.push_str(&verdict_text(v));
        }
    }
    let c = counts(sections.iter().flat_map(|x| &x.rows));
    let parts: Vec<String> = summary(&c).iter().map(|(k, n)| format!("{k}={n}")).collect();
    let _ = writeln!(s, "\nsummary: {}", parts.join(" "));
    s
}

pub fn kv(title: &str, sections: &[Section]) -> String {
    let mut s = format!("report.chart={title}\n");
    let mut i = 0;
    for (j, sec) in sections.iter().enumerate() {
        let _ = writeln!(s, "section.{j}.title={}", sec.title);
        let _ = writeln!(s, "section.{j}.rows={}", sec.rows.len());
        for v in &sec.rows {
            s.push_str(&verdict_kv(&format!("row.{i}"), v));
            i += 1;
        }
    }
    let c = counts(sections.iter().flat_map(|x| &x.rows));
    for (k, n) in summary(&c) {
        let _ = writeln!(s, "summary.{k}={n}");
    }
    s
}
