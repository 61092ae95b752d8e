//! Subcommand implementations: load, compute, assemble a report.

use std::fmt;

use evo_core::baric::{
    bernstein_profile, build_weighted_as, check_weight, weighted_train_identity,
};
use evo_core::canonical::{
    build_a_s, build_a_st, build_companion_checked, build_cycle_tail, image_dims,
    invariant_factors, nilpotent_invariants, periodic_invariants, semi_isomorphic, SemiIso,
};
use evo_core::corpus::{run_corpus, tally};
use evo_core::dynamics::{
    classify, element_decomposition, element_profile, orbit as orbit_of, train_polynomial,
    verify_identity, PeriodicityProfile, TrainPolynomial,
};
use evo_core::generators::{
    cyclic, dynsys_algebra, f4_infinity_system, perturbed_weighted_as, quadratic_map,
    random_algebra, remark_algebra, rule150, rule90, AlgebraKind,
};
use evo_core::poly2::compatible_structure;
use evo_core::{Algebra, Error, Field, Poly2, PolyF, Vector};

use crate::report::*;
use crate::GenKind;

/// Default for `--seed`.
pub const DEFAULT_SEED: u64 = 0x5eed;

#[derive(Debug)]
pub enum CliError {
    Core(Error),
    /// Malformed command-line argument.
    Arg(String),
    Io(String),
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Core(e) => write!(f, "{e}"),
            CliError::Arg(m) => write!(f, "bad argument: {m}"),
            CliError::Io(m) => write!(f, "i/o error: {m}"),
        }
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        CliError::Core(e)
    }
}

impl CliError {
    /// 2 parse, 3 invariant, 4 anything else.
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Arg(_) | CliError::Core(Error::Parse { .. }) => 2,
            CliError::Core(
                Error::InvariantViolation(_) | Error::NotAMorphism { .. } | Error::ZeroWeight,
            ) => 3,
            _ => 4,
        }
    }
}

type Result<T> = std::result::Result<T, CliError>;

fn load(path: &str) -> Result<Algebra> {
    let text = std::fs::read_to_string(path).map_err(|e| CliError::Io(format!("{path}: {e}")))?;
    Ok(Algebra::from_json(&text)?)
}

fn arg<T>(r: evo_core::Result<T>) -> Result<T> {
    r.map_err(|e| CliError::Arg(e.to_string()))
}

fn profile_pair(p: &PeriodicityProfile) -> (usize, u64) {
    (p.preperiod(), p.period())
}

fn factors_text(p: &Poly2) -> Result<Vec<(String, u32)>> {
    Ok(p.factor()?.into_iter().map(|(f, e)| (f.to_string(), e)).collect())
}

fn train_section(t: &TrainPolynomial) -> Result<TrainSection> {
    let factors = match t.poly.to_poly2() {
        Some(p) => Some(factors_text(&p)?),
        None => None,
    };
    Ok(TrainSection {
        polynomial: t.poly.to_string(),
        coefficients: t.poly.coeffs().iter().map(|c| c.0).collect(),
        degree: t.degree,
        valuation: t.valuation,
        striction: t.striction.clone(),
        factors,
    })
}

fn strings(ps: &[Poly2]) -> Vec<String> {
    ps.iter().map(|p| p.to_string()).collect()
}

fn canonical_section(a: &Algebra, profile: &PeriodicityProfile) -> Result<CanonicalSection> {
    let factors = invariant_factors(a.operator().m2());
    let mut section = CanonicalSection {
        invariant_factors: strings(&factors),
        image_dims: image_dims(a),
        nilpotent_blocks: None,
        periodic: None,
        note: None,
    };
    if !a.field().is_prime() {
        section.note = Some(format!(
            "invariants of the F_2-restriction; canonical parameters need F_2, not {}",
            a.field()
        ));
        return Ok(section);
    }
    if profile.is_nilpotent() {
        section.nilpotent_blocks = Some(nilpotent_invariants(a)?);
        return Ok(section);
    }
    match periodic_invariants(a) {
        Ok(inv) => section.periodic = Some(inv),
        Err(Error::UnexpectedFactorShape { factor, q }) => {
            section.note = Some(format!(
                "no (s,t,q,r) form: factor {factor} is not a power of X^{q}+1"
            ));
        }
        Err(e) => return Err(e.into()),
    }
    Ok(section)
}

fn baric_section(a: &Algebra) -> Result<BaricSection> {
    let b = check_weight(a)?;
    let nu = b.kernel_nilpotency();
    let mut section = BaricSection {
        weight: b.omega.iter().map(|c| c.0).collect(),
        kernel_dim: b.kernel_basis.len(),
        kernel_nilpotency: nu,
        idempotent: None,
        bernstein: None,
        weighted_train: None,
    };
    if nu.is_some() {
        let bp = bernstein_profile(&b)?;
        section.idempotent = Some(bp.quasi_constant.idempotent.clone());
        section.bernstein = Some((bp.n, bp.p));
        section.weighted_train = Some(weighted_train_identity(&b)?);
    }
    Ok(section)
}

/// `T | X^n (X^p + 1)`: over `F_2` by division, otherwise by checking that
/// `X^n(X^p+1)` annihilates `V` (which the minimal `T` then divides).
fn check_consistency(a: &Algebra, t: &TrainPolynomial, n: usize, p: u64) -> Result<()> {
    let bound = Poly2::x_pow_plus_one(p as usize).shl(n);
    let ok = match t.poly.to_poly2() {
        Some(t2) => t2.divides(&bound),
        None => verify_identity(a, &PolyF::from_poly2(a.field(), &bound))?.holds,
    };
    if ok {
        Ok(())
    } else {
        Err(Error::InvariantViolation(format!(
            "train polynomial {} does not divide X^{n}(X^{p}+1)",
            t.poly
        ))
        .into())
    }
}

pub fn analyze(path: &str) -> Result<AnalysisReport> {
    let a = load(path)?;
    let classification = classify(&a)?;
    let profile = profile_pair(&classification);
    let t = train_polynomial(&a)?;
    check_consistency(&a, &t, profile.0, profile.1)?;
    let mut flags = Vec::new();
    if profile.1 > a.restricted_dim() as u64 && a.field().is_prime() {
        flags.push(format!(
            "period {} exceeds dimension {}",
            profile.1,
            a.dim()
        ));
    }
    let canonical = Some(canonical_section(&a, &classification)?);
    let baric = match a.weight() {
        Some(_) => Some(baric_section(&a)?),
        None => None,
    };
    if let Some(b) = &baric {
        if b.kernel_nilpotency.is_none() {
            flags.push("weighted, but V is not nilpotent on ker ω".into());
        }
    }
    Ok(AnalysisReport {
        schema: SCHEMA,
        field: a.field().to_string(),
        dim: a.dim(),
        evolution_basis: a.is_evolution(),
        classification,
        profile,
        train: train_section(&t)?,
        canonical,
        baric,
        flags,
    })
}

pub fn orbit(path: &str, element: &str) -> Result<OrbitOut> {
    let a = load(path)?;
    let x = arg(Vector::parse(element))?;
    if x.dim() != a.dim() {
        return Err(CliError::Arg(format!(
            "element has {} coordinates, algebra has dimension {}",
            x.dim(),
            a.dim()
        )));
    }
    if let Some(c) = x.0.iter().find(|c| !a.field().contains(**c)) {
        return Err(CliError::Arg(format!("{c} is not an element of {}", a.field())));
    }
    let prof = element_profile(&a, &x)?;
    let orb = orbit_of(&a, &x)?;
    let (periodic_part, nilpotent_part) = element_decomposition(&a, &x)?;
    Ok(OrbitOut {
        schema: SCHEMA,
        element: x,
        preperiod: prof.preperiod,
        period: prof.period,
        operator: profile_pair(&prof.operator),
        orbit: orb.orbit,
        entry_point: orb.entry_point,
        periodic_part,
        nilpotent_part,
    })
}

pub fn train(path: &str) -> Result<TrainOut> {
    let a = load(path)?;
    let t = train_polynomial(&a)?;
    Ok(TrainOut {
        schema: SCHEMA,
        field: a.field().to_string(),
        train: train_section(&t)?,
    })
}

pub fn canon(path: &str) -> Result<CanonOut> {
    let a = load(path)?;
    let profile = classify(&a)?;
    Ok(CanonOut {
        schema: SCHEMA,
        field: a.field().to_string(),
        profile: profile_pair(&profile),
        canonical: canonical_section(&a, &profile)?,
    })
}

pub fn semi_iso(pa: &str, pb: &str) -> Result<SemiIsoOut> {
    let (a, b) = (load(pa)?, load(pb)?);
    let verdict = semi_isomorphic(&a, &b)?;
    let (name, similar) = match verdict {
        SemiIso::Yes => ("yes", true),
        SemiIso::No => ("no", false),
        SemiIso::NecessaryConditionsOnly { passed } => ("necessary_conditions_only", passed),
    };
    Ok(SemiIsoOut {
        schema: SCHEMA,
        verdict: name.into(),
        similar_after_restriction: similar,
        invariants_a: strings(&invariant_factors(a.operator().m2())),
        invariants_b: strings(&invariant_factors(b.operator().m2())),
    })
}

pub fn striction(poly: &str, field_degree: Option<u32>) -> Result<StrictionOut> {
    let p = arg(Poly2::parse_bits(poly))?;
    let report = p.striction()?;
    let compatible = match field_degree {
        Some(m) => Some(compatible_structure(&p, m)?),
        None => None,
    };
    Ok(StrictionOut {
        schema: SCHEMA,
        polynomial: p.to_string(),
        bits: p.to_bits_string(),
        striction: report,
        factors: factors_text(&p)?,
        compatible,
    })
}

pub fn baric(path: &str) -> Result<BaricOut> {
    let a = load(path)?;
    if a.weight().is_none() {
        return Err(CliError::Arg(format!("{path} has no weight")));
    }
    Ok(BaricOut {
        schema: SCHEMA,
        field: a.field().to_string(),
        baric: baric_section(&a)?,
    })
}

pub fn verify_paper() -> CorpusOut {
    let rows = run_corpus();
    let (pass, flag, fail) = tally(&rows);
    CorpusOut { schema: SCHEMA, pass, flag, fail, rows }
}

/// Parameters of `gen`; each kind reads the ones it needs.
#[derive(Debug, Default)]
pub struct GenParams {
    pub n: Option<usize>,
    pub dim: Option<usize>,
    pub field_degree: u32,
    pub s: Option<String>,
    pub t: Option<String>,
    pub q: Option<u64>,
    pub p: Option<usize>,
    pub c: Option<u64>,
    pub m: Option<u64>,
    pub poly: Option<String>,
    pub general: bool,
    pub seed: u64,
}

fn need<T: Copy>(v: Option<T>, name: &str) -> Result<T> {
    v.ok_or_else(|| CliError::Arg(format!("--{name} is required")))
}

fn parse_list<T: std::str::FromStr>(v: &Option<String>, name: &str) -> Result<Vec<T>> {
    let text = v.as_deref().ok_or_else(|| CliError::Arg(format!("--{name} is required")))?;
    if text.trim().is_empty() {
        return Ok(Vec::new());
    }
    text.split(',')
        .map(|x| {
            x.trim()
                .parse()
                .map_err(|_| CliError::Arg(format!("--{name}: bad entry {x:?}")))
        })
        .collect()
}

pub fn generate(kind: GenKind, g: &GenParams) -> Result<Algebra> {
    let field = || arg(Field::new(g.field_degree, None));
    let a = match kind {
        GenKind::Rule90 => rule90(need(g.n, "n")?)?,
        GenKind::Rule150 => rule150(need(g.n, "n")?)?,
        GenKind::Cyclic => cyclic(need(g.n, "n")?)?,
        GenKind::Remark => remark_algebra(),
        GenKind::Quadratic => {
            dynsys_algebra(&quadratic_map(need(g.c, "c")?, need(g.m, "m")?)?).0
        }
        GenKind::F4Infinity => dynsys_algebra(&f4_infinity_system()).0,
        GenKind::Random => {
            let kind = if g.general { AlgebraKind::General } else { AlgebraKind::Evolution };
            random_algebra(field()?, need(g.dim, "dim")?, g.seed, kind)?
        }
        GenKind::As => build_a_s(&parse_list::<usize>(&g.s, "s")?)?,
        GenKind::Ast => build_a_st(
            &parse_list::<usize>(&g.s, "s")?,
            &parse_list::<u32>(&g.t, "t")?,
            need(g.q, "q")?,
            field()?,
        )?,
        GenKind::CycleTail => build_cycle_tail(need(g.p, "p")?, need(g.n, "n")?)?,
        GenKind::Companion => {
            let text = g
                .poly
                .as_deref()
                .ok_or_else(|| CliError::Arg("--poly is required".into()))?;
            let f = field()?;
            let p = if f.is_prime() || !text.contains(',') {
                PolyF::from_poly2(f, &arg(Poly2::parse_bits(text))?)
            } else {
                arg(PolyF::parse(f, text))?
            };
            build_companion_checked(&p)?
        }
        GenKind::WeightedAs => build_weighted_as(&parse_list::<usize>(&g.s, "s")?, field()?)?,
        GenKind::PerturbedWeightedAs => {
            perturbed_weighted_as(&parse_list::<usize>(&g.s, "s")?, field()?, g.seed)?
        }
    };
    Ok(a)
}
