//! Serializable reports and their plain-text rendering.
//!
//! Every report carries `"schema": 1`; the plain form prints the same values.

use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use evo_core::baric::WeightedTrainIdentity;
use evo_core::canonical::CanonicalInvariants;
use evo_core::corpus::CorpusRow;
use evo_core::dynamics::PeriodicityProfile;
use evo_core::poly2::{CompatibleStructure, StrictionReport};
use evo_core::Vector;

pub const SCHEMA: u32 = 1;

pub trait Emit: Serialize {
    fn plain(&self) -> String;

    fn emit(&self, json: bool) -> String {
        if json {
            serde_json::to_string_pretty(self).expect("reports serialize")
        } else {
            self.plain().trim_end().to_string()
        }
    }
}

fn row(out: &mut String, key: &str, value: impl std::fmt::Display) {
    let _ = writeln!(out, "{key:<16}{value}");
}

fn list<T: std::fmt::Display>(xs: &[T]) -> String {
    let parts: Vec<String> = xs.iter().map(|x| x.to_string()).collect();
    format!("({})", parts.join(","))
}

fn striction_text(s: &Option<StrictionReport>) -> String {
    match s {
        Some(r) => format!("σ={}, E={{{}}}", r.sigma, join(&r.exponents)),
        None => "none (monomial)".into(),
    }
}

fn join<T: std::fmt::Display>(xs: &[T]) -> String {
    xs.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(",")
}

/// Train polynomial with its coefficients listed lowest degree first.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TrainSection {
    pub polynomial: String,
    pub coefficients: Vec<u16>,
    pub degree: usize,
    pub valuation: usize,
    pub striction: Option<StrictionReport>,
    /// Irreducible factors over `F_2` with multiplicities, when `T ∈ F_2[X]`.
    pub factors: Option<Vec<(String, u32)>>,
}

impl TrainSection {
    fn plain_into(&self, out: &mut String) {
        row(out, "train", &self.polynomial);
        row(out, "  degree", self.degree);
        row(out, "  valuation", self.valuation);
        row(out, "  striction", striction_text(&self.striction));
        if let Some(fs) = &self.factors {
            let text: Vec<String> = fs
                .iter()
                .map(|(f, e)| if *e == 1 { format!("({f})") } else { format!("({f})^{e}") })
                .collect();
            row(out, "  factors", if text.is_empty() { "1".into() } else { text.join(" ") });
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CanonicalSection {
    /// Invariant factors of the restricted `F_2`-linear map, ascending.
    pub invariant_factors: Vec<String>,
    /// `dim_{F_2} V^k(A)` for `k = 0..=N`.
    pub image_dims: Vec<usize>,
    /// Chain lengths, when `V` is nilpotent over `F_2`.
    pub nilpotent_blocks: Option<Vec<usize>>,
    /// `(s, t, q, r)`, when the invariant factors have the periodic shape.
    pub periodic: Option<CanonicalInvariants>,
    pub note: Option<String>,
}

impl CanonicalSection {
    fn plain_into(&self, out: &mut String) {
        row(out, "invariants", list(&self.invariant_factors));
        row(out, "  image dims", list(&self.image_dims));
        if let Some(s) = &self.nilpotent_blocks {
            row(out, "  blocks s", list(s));
        }
        if let Some(c) = &self.periodic {
            row(
                out,
                "  (s,t,q,r)",
                format!("s={} t={} q={} r={}", list(&c.s), list(&c.t), c.q, c.r),
            );
        }
        if let Some(n) = &self.note {
            row(out, "  note", n);
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BaricSection {
    pub weight: Vec<u16>,
    pub kernel_dim: usize,
    /// Least `ν` with `V^ν(ker ω) = 0`; absent when there is none.
    pub kernel_nilpotency: Option<usize>,
    pub idempotent: Option<Vector>,
    /// Minimal Bernstein `(n, p)`.
    pub bernstein: Option<(usize, usize)>,
    pub weighted_train: Option<WeightedTrainIdentity>,
}

impl BaricSection {
    fn plain_into(&self, out: &mut String) {
        row(out, "weight", list(&self.weight));
        row(out, "  ker ω dim", self.kernel_dim);
        match self.kernel_nilpotency {
            Some(nu) => row(out, "  ker ν", nu),
            None => row(out, "  ker ν", "V is not nilpotent on ker ω"),
        }
        if let Some(e) = &self.idempotent {
            row(out, "  idempotent", e);
        }
        if let Some((n, p)) = self.bernstein {
            row(out, "  bernstein", format!("({n},{p})"));
        }
        if let Some(w) = &self.weighted_train {
            row(
                out,
                "  weighted T",
                format!("degree {}, α={}", w.degree, list(&w.coefficients)),
            );
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AnalysisReport {
    pub schema: u32,
    pub field: String,
    pub dim: usize,
    pub evolution_basis: bool,
    pub classification: PeriodicityProfile,
    /// `(n, p)` with `V^{n+p} = V^n`, minimal.
    pub profile: (usize, u64),
    pub train: TrainSection,
    pub canonical: Option<CanonicalSection>,
    pub baric: Option<BaricSection>,
    pub flags: Vec<String>,
}

impl Emit for AnalysisReport {
    fn plain(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(
            out,
            "{}; train polynomial {}",
            self.classification.label(),
            self.train.polynomial
        );
        row(&mut out, "field", &self.field);
        row(&mut out, "dimension", self.dim);
        row(&mut out, "natural basis", self.evolution_basis);
        row(&mut out, "profile", format!("({},{})", self.profile.0, self.profile.1));
        self.train.plain_into(&mut out);
        if let Some(c) = &self.canonical {
            c.plain_into(&mut out);
        }
        if let Some(b) = &self.baric {
            b.plain_into(&mut out);
        }
        for f in &self.flags {
            row(&mut out, "flag", f);
        }
        out
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct OrbitOut {
    pub schema: u32,
    pub element: Vector,
    pub preperiod: usize,
    pub period: usize,
    pub operator: (usize, u64),
    pub orbit: Vec<Vector>,
    pub entry_point: Vector,
    /// `x = periodic + nilpotent` with `V^d(periodic) = periodic`.
    pub periodic_part: Vector,
    pub nilpotent_part: Vector,
}

impl Emit for OrbitOut {
    fn plain(&self) -> String {
        let mut out = String::new();
        row(&mut out, "element", &self.element);
        row(&mut out, "preperiod", self.preperiod);
        row(&mut out, "period", self.period);
        row(&mut out, "operator", format!("({},{})", self.operator.0, self.operator.1));
        row(&mut out, "entry point", &self.entry_point);
        row(&mut out, "periodic part", &self.periodic_part);
        row(&mut out, "nilpotent part", &self.nilpotent_part);
        let path: Vec<String> = self.orbit.iter().map(|v| v.to_string()).collect();
        row(&mut out, "orbit", path.join(" -> "));
        out
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TrainOut {
    pub schema: u32,
    pub field: String,
    pub train: TrainSection,
}

impl Emit for TrainOut {
    fn plain(&self) -> String {
        let mut out = String::new();
        row(&mut out, "field", &self.field);
        self.train.plain_into(&mut out);
        out
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CanonOut {
    pub schema: u32,
    pub field: String,
    pub profile: (usize, u64),
    pub canonical: CanonicalSection,
}

impl Emit for CanonOut {
    fn plain(&self) -> String {
        let mut out = String::new();
        row(&mut out, "field", &self.field);
        row(&mut out, "profile", format!("({},{})", self.profile.0, self.profile.1));
        self.canonical.plain_into(&mut out);
        out
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SemiIsoOut {
    pub schema: u32,
    /// `yes`, `no`, or `necessary_conditions_only`.
    pub verdict: String,
    /// For extension fields: whether the restricted maps are similar.
    pub similar_after_restriction: bool,
    pub invariants_a: Vec<String>,
    pub invariants_b: Vec<String>,
}

impl Emit for SemiIsoOut {
    fn plain(&self) -> String {
        let mut out = String::new();
        row(&mut out, "verdict", &self.verdict);
        row(&mut out, "similar", self.similar_after_restriction);
        row(&mut out, "invariants A", list(&self.invariants_a));
        row(&mut out, "invariants B", list(&self.invariants_b));
        out
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct StrictionOut {
    pub schema: u32,
    pub polynomial: String,
    pub bits: String,
    pub striction: StrictionReport,
    pub factors: Vec<(String, u32)>,
    pub compatible: Option<CompatibleStructure>,
}

impl Emit for StrictionOut {
    fn plain(&self) -> String {
        let mut out = String::new();
        let s = &self.striction;
        row(&mut out, "polynomial", &self.polynomial);
        row(&mut out, "bits", &self.bits);
        row(&mut out, "exponents", format!("E={{{}}}", join(&s.exponents)));
        row(&mut out, "sigma", format!("σ={}", s.sigma));
        row(&mut out, "valuation", s.valuation);
        row(&mut out, "degree", s.degree);
        let fs: Vec<String> = self
            .factors
            .iter()
            .map(|(f, e)| if *e == 1 { format!("({f})") } else { format!("({f})^{e}") })
            .collect();
        row(&mut out, "factors", fs.join(" "));
        if let Some(c) = &self.compatible {
            row(&mut out, "compatible", format!("F_2^{}, X^{} part", c.p, c.valuation));
            for (b, block) in c.partition.iter().enumerate() {
                let members: Vec<String> =
                    block.iter().map(|&i| c.factors[i].0.to_string()).collect();
                row(
                    &mut out,
                    &format!("  block {}", b + 1),
                    format!("{{{}}} product {}", members.join("; "), c.block_product(b)),
                );
                for chain in &c.subdivisions[b] {
                    let links: Vec<String> = chain.iter().map(|p| p.to_string()).collect();
                    row(&mut out, "    chain", links.join(" | "));
                }
            }
        }
        out
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BaricOut {
    pub schema: u32,
    pub field: String,
    pub baric: BaricSection,
}

impl Emit for BaricOut {
    fn plain(&self) -> String {
        let mut out = String::new();
        row(&mut out, "field", &self.field);
        self.baric.plain_into(&mut out);
        out
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CorpusOut {
    pub schema: u32,
    pub pass: usize,
    pub flag: usize,
    pub fail: usize,
    pub rows: Vec<CorpusRow>,
}

impl Emit for CorpusOut {
    fn plain(&self) -> String {
        let mut out = String::new();
        let w = self.rows.iter().map(|r| r.id.len()).max().unwrap_or(2).max(2);
        let _ = writeln!(out, "{:<w$}  {:<6} {:<28} {:<28} NOTE", "ID", "STATUS", "PAPER", "ORACLE");
        for r in &self.rows {
            let _ = writeln!(
                out,
                "{:<w$}  {:<6} {:<28} {:<28} {}",
                r.id, r.status.to_string(), r.paper, r.oracle, r.note
            );
        }
        let _ = writeln!(out, "{} PASS, {} FLAG, {} FAIL", self.pass, self.flag, self.fail);
        out
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Written {
    pub schema: u32,
    pub path: String,
    pub dim: usize,
}

impl Emit for Written {
    fn plain(&self) -> String {
        format!("wrote {} (dimension {})", self.path, self.dim)
    }
}
