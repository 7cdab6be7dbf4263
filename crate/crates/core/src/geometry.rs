//! Charts: metric specs, validation, inverse metric, signature.

use std::sync::Arc;

use nalgebra::{DMatrix, SymmetricEigen};
use thiserror::Error;

use crate::expr::{self, is_zero, render, Domain, Expr, ExprError, FloatPoint, FuncSym, Key, Layout, ParamSym, SamplePlan};

#[derive(Clone, Debug, Error, PartialEq)]
pub enum ChartError {
    #[error("line {line}: {msg}")]
    Syntax { line: usize, msg: String },
    #[error("line {line}: {source}")]
    Expr { line: usize, source: ExprError },
    #[error("line {line}: line element term '{term}' has degree {degree} in the differentials; expected 2")]
    LineElement { line: usize, term: String, degree: i32 },
    #[error("conflicting assignments g[{i},{j}] and g[{j},{i}]")]
    Asymmetric { i: usize, j: usize },
    #[error("metric determinant is identically zero")]
    Degenerate,
    #[error("metric is degenerate at the evaluation point")]
    DegenerateAt,
    #[error("dimension must be at least 3, got {0}")]
    Dimension(usize),
}

/// A coordinate chart with an exact metric.
#[derive(Clone, Debug)]
pub struct Chart {
    pub name: Option<String>,
    pub layout: Arc<Layout>,
    /// Row-major `n x n` metric components.
    pub metric: Vec<Expr>,
    pub domain: Domain,
}

fn syntax(line: usize, msg: impl Into<String>) -> ChartError {
    ChartError::Syntax { line, msg: msg.into() }
}

fn parse_bound(s: &str, line: usize) -> Result<f64, ChartError> {
    let e = expr::parse(s, &Layout::default()).map_err(|source| ChartError::Expr { line, source })?;
    e.as_constant().map(|c| c.to_f64()).ok_or_else(|| syntax(line, "range bounds must be numbers"))
}

/// Parse `name(coord)` from a function declaration.
fn func_head(s: &str, line: usize) -> Result<(String, String), ChartError> {
    let open = s.find('(').ok_or_else(|| syntax(line, "expected 'function <name>(<coord>)'"))?;
    let close = s.find(')').filter(|c| *c > open).ok_or_else(|| syntax(line, "missing ')'"))?;
    if !s[close + 1..].trim().is_empty() {
        return Err(syntax(line, "unexpected text after ')'"));
    }
    Ok((s[..open].trim().to_string(), s[open + 1..close].trim().to_string()))
}

fn valid_ident(s: &str) -> bool {
    let mut c = s.chars();
    matches!(c.next(), Some(ch) if ch.is_ascii_alphabetic() || ch == '_') && c.all(|ch| ch.is_ascii_alphanumeric() || ch == '_')
}

enum Entry {
    Component { line: usize, i: usize, j: usize, text: String },
    LineElement { line: usize, text: String },
}

/// Load and validate a metric spec.
pub fn load_chart(text: &str) -> Result<Chart, ChartError> {
    let mut dim: Option<usize> = None;
    let mut coords: Option<Vec<String>> = None;
    let mut params = Vec::new();
    let mut funcs: Vec<(String, String, bool, usize)> = Vec::new();
    let mut ranges: Vec<(String, f64, f64, usize)> = Vec::new();
    let mut entries = Vec::new();
    let mut name = None;
    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let l = raw.split('#').next().unwrap_or("").trim();
        if l.is_empty() {
            continue;
        }
        if let Some(rest) = l.strip_prefix("param ") {
            let words: Vec<&str> = rest.split_whitespace().collect();
            match words.as_slice() {
                [n] => params.push(ParamSym { name: n.to_string(), positive: false }),
                [n, "positive"] => params.push(ParamSym { name: n.to_string(), positive: true }),
                _ => return Err(syntax(line, "expected 'param <name> [positive]'")),
            }
            continue;
        }
        if let Some(rest) = l.strip_prefix("function ") {
            let (head, positive) = match rest.trim().strip_suffix("positive") {
                Some(h) => (h.trim(), true),
                None => (rest.trim(), false),
            };
            let (f, c) = func_head(head, line)?;
            funcs.push((f, c, positive, line));
            continue;
        }
        if let Some(rest) = l.strip_prefix("range ") {
            let words: Vec<&str> = rest.split_whitespace().collect();
            let [c, lo, hi] = words.as_slice() else {
                return Err(syntax(line, "expected 'range <coord> <lo> <hi>'"));
            };
            let (lo, hi) = (parse_bound(lo, line)?, parse_bound(hi, line)?);
            if !(lo < hi) {
                return Err(syntax(line, "empty range"));
            }
            ranges.push((c.to_string(), lo, hi, line));
            continue;
        }
        let Some((lhs, rhs)) = l.split_once('=') else {
            return Err(syntax(line, "expected a declaration or an assignment"));
        };
        let (lhs, rhs) = (lhs.trim(), rhs.trim());
        match lhs {
            "dim" => dim = Some(rhs.parse().map_err(|_| syntax(line, "dim must be an integer"))?),
            "coords" => coords = Some(rhs.split(|c: char| c.is_whitespace() || c == ',').filter(|s| !s.is_empty()).map(String::from).collect()),
            "name" => name = Some(rhs.to_string()),
            "ds2" => entries.push(Entry::LineElement { line, text: rhs.to_string() }),
            _ => {
                let inner = lhs
                    .strip_prefix("g[")
                    .and_then(|s| s.strip_suffix(']'))
                    .ok_or_else(|| syntax(line, format!("unknown key '{lhs}'")))?;
                let (a, b) = inner.split_once(',').ok_or_else(|| syntax(line, "expected g[i,j]"))?;
                let i: usize = a.trim().parse().map_err(|_| syntax(line, "bad index"))?;
                let j: usize = b.trim().parse().map_err(|_| syntax(line, "bad index"))?;
                entries.push(Entry::Component { line, i, j, text: rhs.to_string() });
            }
        }
    }
    let n = match (dim, &coords) {
        (Some(d), Some(c)) if c.len() != d => return Err(syntax(0, format!("dim = {d} but {} coordinates", c.len()))),
        (Some(d), _) => d,
        (None, Some(c)) => c.len(),
        (None, None) => return Err(syntax(0, "missing 'dim' or 'coords'")),
    };
    if n < 3 {
        return Err(ChartError::Dimension(n));
    }
    let coords = coords.unwrap_or_else(|| (1..=n).map(|i| format!("x{i}")).collect());
    let mut layout = Layout::new(coords.clone());
    for c in &coords {
        if !valid_ident(c) || layout.coords.iter().filter(|x| *x == c).count() > 1 || c == "exp" {
            return Err(syntax(0, format!("bad coordinate name '{c}'")));
        }
    }
    for p in params {
        if layout.is_taken(&p.name) || !valid_ident(&p.name) {
            return Err(syntax(0, format!("symbol '{}' declared twice or invalid", p.name)));
        }
        layout.params.push(p);
    }
    for (f, c, positive, line) in funcs {
        if layout.is_taken(&f) || !valid_ident(&f) {
            return Err(syntax(line, format!("symbol '{f}' declared twice or invalid")));
        }
        let arg = layout.coord_index(&c).ok_or_else(|| syntax(line, format!("unknown coordinate '{c}'")))?;
        layout.funcs.push(FuncSym { name: f, arg, positive });
    }
    let mut domain = Domain { ranges: vec![None; n] };
    for (c, lo, hi, line) in ranges {
        let i = layout.coord_index(&c).ok_or_else(|| syntax(line, format!("unknown coordinate '{c}'")))?;
        domain.ranges[i] = Some((lo, hi));
    }
    let mut slots: Vec<Option<(Expr, usize)>> = vec![None; n * n];
    let assign = |i: usize, j: usize, e: Expr, line: usize, slots: &mut Vec<Option<(Expr, usize)>>| -> Result<(), ChartError> {
        for (a, b) in [(i, j), (j, i)] {
            match &slots[a * n + b] {
                Some((old, _)) if *old != e => return Err(ChartError::Asymmetric { i: i + 1, j: j + 1 }),
                _ => slots[a * n + b] = Some((e.clone(), line)),
            }
        }
        Ok(())
    };
    for entry in entries {
        match entry {
            Entry::Component { line, i, j, text } => {
                if i == 0 || j == 0 || i > n || j > n {
                    return Err(syntax(line, format!("index out of range in g[{i},{j}]")));
                }
                let e = expr::parse(&text, &layout).map_err(|source| ChartError::Expr { line, source })?;
                assign(i - 1, j - 1, e, line, &mut slots)?;
            }
            Entry::LineElement { line, text } => {
                for (i, j, e) in line_element(&text, &layout, line)? {
                    assign(i, j, e, line, &mut slots)?;
                }
            }
        }
    }
    let metric: Vec<Expr> = slots.into_iter().map(|s| s.map(|(e, _)| e).unwrap_or_default()).collect();
    let chart = Chart { name, layout: Arc::new(layout), metric, domain };
    if chart.determinant().is_zero() {
        return Err(ChartError::Degenerate);
    }
    Ok(chart)
}

/// Split `sum c_ij dx_i dx_j` into metric components.
fn line_element(text: &str, base: &Layout, line: usize) -> Result<Vec<(usize, usize, Expr)>, ChartError> {
    let n = base.dim();
    let mut l = base.clone();
    for c in &base.coords {
        let d = format!("d{c}");
        if l.is_taken(&d) {
            return Err(syntax(line, format!("differential name '{d}' clashes with a symbol")));
        }
        l.extras.push(d);
    }
    let e = expr::parse(text, &l).map_err(|source| ChartError::Expr { line, source })?;
    let w = base.base_width();
    for (a, _) in e.atoms() {
        if a.terms().iter().any(|(k, _)| k.len() > w) {
            return Err(syntax(line, "differentials may not appear in a denominator"));
        }
    }
    let diffs = |k: &Key| -> Vec<i32> { (0..n).map(|i| k.get(l.extra_slot(i))).collect() };
    for (k, c) in e.numer().terms() {
        let d = diffs(k);
        let degree: i32 = d.iter().sum();
        if degree != 2 || d.iter().any(|x| *x < 0) {
            let term = expr::render(&Expr::monomial(k.clone(), c.clone()), &l);
            return Err(ChartError::LineElement { line, term, degree });
        }
    }
    let mut out = Vec::new();
    for i in 0..n {
        for j in i..n {
            let want: Vec<i32> = (0..n).map(|s| (s == i) as i32 + (s == j) as i32).collect();
            let part = e.filter_numerator(&|k| diffs(k) == want).map_keys(&|k| k.truncate(w));
            if part.is_zero() {
                continue;
            }
            let v = if i == j { part } else { part.scale(&expr::Coeff::ratio(1, 2)) };
            out.push((i, j, v));
        }
    }
    Ok(out)
}

/// Connected blocks of the metric's nonzero pattern.
fn blocks(m: &[Expr], n: usize) -> Vec<Vec<usize>> {
    let mut parent: Vec<usize> = (0..n).collect();
    fn find(p: &mut [usize], x: usize) -> usize {
        let mut r = x;
        while p[r] != r {
            r = p[r];
        }
        p[x] = r;
        r
    }
    for i in 0..n {
        for j in i + 1..n {
            if !m[i * n + j].is_zero() {
                let (a, b) = (find(&mut parent, i), find(&mut parent, j));
                parent[a.max(b)] = a.min(b);
            }
        }
    }
    let mut out: Vec<Vec<usize>> = Vec::new();
    for i in 0..n {
        let r = find(&mut parent, i);
        match out.iter_mut().find(|b| b[0] == r) {
            Some(b) => b.push(i),
            None => out.push(vec![i]),
        }
    }
    out
}

/// Laplace expansion along the first row.
pub fn determinant(m: &[Expr], k: usize) -> Expr {
    match k {
        0 => Expr::one(),
        1 => m[0].clone(),
        2 => m[0].mul(&m[3]).sub(&m[1].mul(&m[2])),
        _ => {
            let mut terms = Vec::new();
            for c in 0..k {
                if m[c].is_zero() {
                    continue;
                }
                let minor = minor(m, k, 0, c);
                let d = determinant(&minor, k - 1);
                let t = m[c].mul(&d);
                terms.push(if c % 2 == 1 { t.neg() } else { t });
            }
            Expr::sum(terms.iter())
        }
    }
}

fn minor(m: &[Expr], k: usize, r: usize, c: usize) -> Vec<Expr> {
    let mut out = Vec::with_capacity((k - 1) * (k - 1));
    for i in 0..k {
        if i == r {
            continue;
        }
        for j in 0..k {
            if j != c {
                out.push(m[i * k + j].clone());
            }
        }
    }
    out
}

impl Chart {
    pub fn dim(&self) -> usize {
        self.layout.dim()
    }

    pub fn g(&self, i: usize, j: usize) -> &Expr {
        &self.metric[i * self.dim() + j]
    }

    fn block_matrix(&self, b: &[usize]) -> Vec<Expr> {
        let mut m = Vec::with_capacity(b.len() * b.len());
        for &i in b {
            for &j in b {
                m.push(self.g(i, j).clone());
            }
        }
        m
    }

    pub fn determinant(&self) -> Expr {
        let n = self.dim();
        let mut acc = Expr::one();
        for b in blocks(&self.metric, n) {
            acc = acc.mul(&determinant(&self.block_matrix(&b), b.len()));
        }
        acc
    }

    /// Block-wise adjugate inverse, checked symbolically against `g`.
    pub fn inverse_metric(&self) -> Result<Vec<Expr>, ChartError> {
        let n = self.dim();
        let mut inv = vec![Expr::zero(); n * n];
        for b in blocks(&self.metric, n) {
            let k = b.len();
            let m = self.block_matrix(&b);
            let det = determinant(&m, k);
            if det.is_zero() {
                return Err(ChartError::Degenerate);
            }
            for r in 0..k {
                for c in 0..k {
                    let cof = if k == 1 { Expr::one() } else { determinant(&minor(&m, k, c, r), k - 1) };
                    let cof = if (r + c) % 2 == 1 { cof.neg() } else { cof };
                    inv[b[r] * n + b[c]] = cof.div(&det).map_err(|_| ChartError::Degenerate)?;
                }
            }
        }
        for i in 0..n {
            for j in 0..n {
                let terms: Vec<Expr> = (0..n).map(|k| inv[i * n + k].mul(self.g(k, j))).collect();
                let mut s = Expr::sum(terms.iter());
                if i == j {
                    s = s.sub(&Expr::one());
                }
                if !s.simplify().is_zero() {
                    return Err(ChartError::Degenerate);
                }
            }
        }
        Ok(inv)
    }

    /// Sign counts `(positive, negative)` of the metric's eigenvalues at a point.
    pub fn signature_at(&self, pt: &FloatPoint) -> Result<(usize, usize), ChartError> {
        let n = self.dim();
        let m = DMatrix::from_fn(n, n, |i, j| self.g(i, j).eval_f64(pt));
        if m.iter().any(|x| !x.is_finite()) {
            return Err(ChartError::DegenerateAt);
        }
        let eig = SymmetricEigen::new(m);
        let scale = eig.eigenvalues.iter().fold(0.0f64, |a, b| a.max(b.abs())).max(1.0);
        let mut pos = 0;
        let mut neg = 0;
        for v in eig.eigenvalues.iter() {
            if v.abs() <= 1e-10 * scale {
                return Err(ChartError::DegenerateAt);
            }
            if *v > 0.0 {
                pos += 1;
            } else {
                neg += 1;
            }
        }
        Ok((pos, neg))
    }

    /// Sample plan honoring the chart's domain hints.
    pub fn sample_plan(&self, seed: u64, tolerance: f64) -> SamplePlan {
        SamplePlan::new(&self.layout, &self.domain, seed, tolerance)
    }

    /// Signature at every plan point where it can be computed: the first one
    /// seen and whether it was constant.
    pub fn signature_survey(&self, plan: &SamplePlan) -> Option<((usize, usize), bool)> {
        let mut first = None;
        let mut constant = true;
        for pt in &plan.float {
            if let Ok(s) = self.signature_at(pt) {
                match first {
                    None => first = Some(s),
                    Some(f) if f != s => constant = false,
                    _ => {}
                }
            }
        }
        first.map(|f| (f, constant))
    }

    pub fn render(&self, e: &Expr) -> String {
        render(e, &self.layout)
    }

    /// `is_zero` against this chart's default plan.
    pub fn is_zero_default(&self, e: &Expr) -> bool {
        is_zero(e, &self.sample_plan(0, expr::DEFAULT_TOLERANCE)).is_zero()
    }
}
