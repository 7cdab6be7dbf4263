//! Built-in metric specs and seeded random metrics.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::geometry::{load_chart, Chart, ChartError};

/// A named metric spec.
#[derive(Clone, Copy, Debug)]
pub struct Fixture {
    pub name: &'static str,
    pub spec: &'static str,
    pub note: Option<&'static str>,
}

const EXAMPLE1: &str = "\
name = example1
dim = 4
coords = x1 x2 x3 x4
g[1,1] = exp(x1)
g[2,2] = exp(x1)
g[3,3] = exp(x1 + x2)
g[4,4] = 1
";

const EXAMPLE2: &str = "\
name = example2
dim = 4
coords = x1 x2 x3 x4
g[1,1] = 1 + 2*exp(x1)
g[2,2] = 1 + 2*exp(x1)
g[3,3] = 1 + 2*exp(x1)
g[4,4] = 1 + 2*exp(x1)
";

const EXAMPLE3: &str = "\
name = example3
dim = 5
coords = x1 x2 x3 x4 x5
param a positive
function f(x2) positive
ds2 = a*dx1^2 + exp(2*x2)*x4^2*dx2^2 + 2*exp(2*x2)*dx2*dx3 + exp(2*x2)*dx4^2 + exp(2*x2)*f*dx5^2
";

const EXAMPLE3_X1: &str = "\
name = example3-x1-reading
dim = 5
coords = x1 x2 x3 x4 x5
param a positive
function f(x2) positive
ds2 = a*dx1^2 + exp(2*x1)*x4^2*dx2^2 + 2*exp(2*x1)*dx2*dx3 + exp(2*x1)*dx4^2 + exp(2*x1)*f*dx5^2
";

const EXAMPLE4_VERBATIM: &str = "\
name = example4-verbatim
dim = 4
coords = x1 x2 x3 x4
ds2 = x1*x3*dx1^2 + 2*dx1*dx2 + (2+dx1)^2*dx3 + x1^3*dx4^2
";

const EXAMPLE4_CORRECTED: &str = "\
name = example4-corrected
dim = 4
coords = x1 x2 x3 x4
range x1 1/7 3
range x3 1/7 3
ds2 = x1*x3*dx1^2 + 2*dx1*dx2 + (2+x1)^2*dx3^2 + x1^3*dx4^2
";

const FLAT: &str = "\
name = flat
dim = 4
coords = x1 x2 x3 x4
g[1,1] = 1
g[2,2] = 1
g[3,3] = 1
g[4,4] = 1
";

const SPHERE: &str = "\
name = sphere
dim = 4
coords = x1 x2 x3 x4
g[1,1] = 4/(1 + x1^2 + x2^2 + x3^2 + x4^2)^2
g[2,2] = 4/(1 + x1^2 + x2^2 + x3^2 + x4^2)^2
g[3,3] = 4/(1 + x1^2 + x2^2 + x3^2 + x4^2)^2
g[4,4] = 4/(1 + x1^2 + x2^2 + x3^2 + x4^2)^2
";

const SPHERE_PRODUCT: &str = "\
name = sphere-product
dim = 4
coords = x1 x2 x3 x4
g[1,1] = 4/(1 + x1^2 + x2^2)^2
g[2,2] = 4/(1 + x1^2 + x2^2)^2
g[3,3] = 4/(1 + x3^2 + x4^2)^2
g[4,4] = 4/(1 + x3^2 + x4^2)^2
";

pub const FIXTURES: [Fixture; 9] = [
    Fixture { name: "example1", spec: EXAMPLE1, note: None },
    Fixture { name: "example2", spec: EXAMPLE2, note: None },
    Fixture {
        name: "example3",
        spec: EXAMPLE3,
        note: Some("exponential factors read as exp(2*x2) exactly as printed; compare example3-x1-reading"),
    },
    Fixture {
        name: "example3-x1-reading",
        spec: EXAMPLE3_X1,
        note: Some("exponential factors read as exp(2*x1); this reading reproduces the published component tables"),
    },
    Fixture {
        name: "example4-verbatim",
        spec: EXAMPLE4_VERBATIM,
        note: Some("the term (2+dx1)^2*dx3 is not quadratic in the differentials, so this spec is rejected; use example4-corrected"),
    },
    Fixture {
        name: "example4-corrected",
        spec: EXAMPLE4_CORRECTED,
        note: Some("curated reading with (2+x1)^2*dx3^2 in place of the malformed term"),
    },
    Fixture { name: "flat", spec: FLAT, note: None },
    Fixture { name: "sphere", spec: SPHERE, note: Some("round 4-sphere in stereographic coordinates") },
    Fixture { name: "sphere-product", spec: SPHERE_PRODUCT, note: Some("product of two round 2-spheres: Einstein, not of constant curvature") },
];

pub fn fixture(name: &str) -> Option<&'static Fixture> {
    FIXTURES.iter().find(|f| f.name == name)
}

/// Every fixture that loads.
pub fn loadable() -> impl Iterator<Item = &'static Fixture> {
    FIXTURES.iter().filter(|f| f.name != "example4-verbatim")
}

impl Fixture {
    pub fn load(&self) -> Result<Chart, ChartError> {
        load_chart(self.spec)
    }
}

fn small_poly(rng: &mut ChaCha8Rng, vars: &[String], constant: i64) -> String {
    let mut s = constant.to_string();
    for v in vars {
        let c: i64 = rng.gen_range(-2..=2);
        if c != 0 {
            s.push_str(&format!(" + ({c})*{v}"));
        }
    }
    for (i, v) in vars.iter().enumerate() {
        for w in &vars[i..] {
            if rng.gen_bool(0.3) {
                let c: i64 = rng.gen_range(1..=2);
                s.push_str(&format!(" + {c}*{v}*{w}"));
            }
        }
    }
    s
}

/// Seeded metric spec with polynomial diagonal entries and one
/// off-diagonal entry.
pub fn random_spec(seed: u64, dim: usize) -> String {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let coords: Vec<String> = (1..=dim).map(|i| format!("x{i}")).collect();
    let mut s = format!("name = random-{dim}-{seed}\ndim = {dim}\ncoords = {}\n", coords.join(" "));
    for c in &coords {
        s.push_str(&format!("range {c} -1/2 1/2\n"));
    }
    for i in 0..dim {
        let vars: Vec<String> = coords.iter().filter(|_| rng.gen_bool(0.6)).cloned().collect();
        s.push_str(&format!("g[{},{}] = {}\n", i + 1, i + 1, small_poly(&mut rng, &vars, 8)));
    }
    let i = rng.gen_range(0..dim);
    let j = (i + rng.gen_range(1..dim)) % dim;
    let vars = vec![coords[rng.gen_range(0..dim)].clone()];
    s.push_str(&format!("g[{},{}] = {}\n", i.min(j) + 1, i.max(j) + 1, small_poly(&mut rng, &vars, 1)));
    s
}

pub fn random_chart(seed: u64, dim: usize) -> Result<Chart, ChartError> {
    load_chart(&random_spec(seed, dim))
}
