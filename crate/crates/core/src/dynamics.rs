//! Orbits, periodicity profiles and train polynomials of `V`.
//!
//! Operator-level answers come from the minimal polynomial of the
//! restricted-scalars matrix `M₂`: writing `μ = X^v g` with `g(0) = 1`,
//! `V^{n+p} = V^n` iff `n >= v` and `g | X^p + 1`. The brute-force routes
//! (visited tables of vectors or matrices) are kept alongside as oracles.

use std::collections::HashMap;

use serde::{Deserialize, Serialize};

use crate::algebra::{restricted_basis, scalar_matrix, Algebra, Vector};
use crate::bits::{BitMatrix, BitVec, Eliminator};
use crate::error::{Error, Result};
use crate::field::{Elem, Field};
use crate::poly2::{Poly2, StrictionReport};
use crate::polyf::PolyF;

/// Trajectory of one element under `V`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct OrbitReport {
    pub preperiod: usize,
    pub period: usize,
    /// `x, V(x), ..., V^{m+d-1}(x)`, all distinct.
    pub orbit: Vec<Vector>,
    /// `V^m(x)`, the first element on the cycle.
    pub entry_point: Vector,
}

/// Iterates `V` from `x` until the first repeat.
pub fn orbit(a: &Algebra, x: &Vector) -> Result<OrbitReport> {
    let mut y = a.evolution_apply(x)?;
    let mut seen: HashMap<Vector, usize> = HashMap::new();
    let mut orbit = vec![x.clone()];
    seen.insert(x.clone(), 0);
    loop {
        if let Some(&m) = seen.get(&y) {
            let period = orbit.len() - m;
            return Ok(OrbitReport {
                preperiod: m,
                period,
                entry_point: orbit[m].clone(),
                orbit,
            });
        }
        seen.insert(y.clone(), orbit.len());
        orbit.push(y.clone());
        y = a.evolve(&y);
    }
}

/// `x^{[n]} = V^{n-1}(x)`, with `x^{[1]} = x`.
pub fn plenary_power(a: &Algebra, x: &Vector, n: usize) -> Result<Vector> {
    if n == 0 {
        return Err(Error::InvalidInput("plenary powers start at n = 1".into()));
    }
    let mut y = x.clone();
    for _ in 1..n {
        y = a.evolution_apply(&y)?;
    }
    Ok(y)
}

/// Minimal `(period, preperiod)` behaviour of `V`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum PeriodicityProfile {
    /// `V^n = 0`, `V^{n-1} ≠ 0`.
    Nilpotent { degree: usize },
    /// `V^n(x) = e` for every `x ≠ 0`.
    QuasiConstant { degree: usize, idempotent: Vector },
    /// `V^{n+p} = V^n` with `(p, n)` lexicographically least.
    UltimatelyPeriodic { preperiod: usize, period: u64 },
}

impl PeriodicityProfile {
    pub fn preperiod(&self) -> usize {
        match self {
            PeriodicityProfile::Nilpotent { degree } => *degree,
            PeriodicityProfile::QuasiConstant { degree, .. } => *degree,
            PeriodicityProfile::UltimatelyPeriodic { preperiod, .. } => *preperiod,
        }
    }

    pub fn period(&self) -> u64 {
        match self {
            PeriodicityProfile::UltimatelyPeriodic { period, .. } => *period,
            _ => 1,
        }
    }

    pub fn is_nilpotent(&self) -> bool {
        matches!(self, PeriodicityProfile::Nilpotent { .. })
    }

    pub fn label(&self) -> String {
        match self {
            PeriodicityProfile::Nilpotent { degree } => format!("nilpotent of degree {degree}"),
            PeriodicityProfile::QuasiConstant { degree, idempotent } => {
                format!("quasi-constant of degree {degree}, e = {idempotent}")
            }
            PeriodicityProfile::UltimatelyPeriodic { preperiod, period } => {
                format!("ultimately periodic ({preperiod},{period})")
            }
        }
    }
}

/// Minimal annihilating polynomial of `v` under `m`.
pub fn local_minimal_polynomial(m: &BitMatrix, v: &BitVec) -> (Poly2, Vec<BitVec>) {
    let n = m.rows();
    let mut elim = Eliminator::new(n, n + 1);
    let mut krylov = Vec::new();
    let mut w = v.clone();
    loop {
        match elim.insert(&w) {
            Ok(()) => {
                krylov.push(w.clone());
                w = m.apply(&w);
            }
            Err(combo) => {
                let k = krylov.len();
                let mut exps: Vec<usize> = combo.ones().collect();
                exps.push(k);
                return (Poly2::from_exponents(&exps), krylov);
            }
        }
    }
}

/// Minimal polynomial of a square bit matrix: the lcm of the local
/// minimal polynomials of unit vectors outside the Krylov span so far.
pub fn minimal_polynomial(m: &BitMatrix) -> Poly2 {
    let n = m.rows();
    let mut span = Eliminator::span_only(n);
    let mut acc = Poly2::one();
    for i in 0..n {
        let e = BitVec::unit(n, i);
        if span.contains(&e) {
            continue;
        }
        let (mu, krylov) = local_minimal_polynomial(m, &e);
        acc = acc.lcm(&mu);
        for w in &krylov {
            let _ = span.insert(w);
        }
        if span.rank() == n {
            break;
        }
    }
    acc
}

fn profile_from_minpoly(mu: &Poly2) -> Result<PeriodicityProfile> {
    let v = mu.valuation().expect("minimal polynomial is nonzero");
    let g = mu.exact_div(&Poly2::monomial(v));
    if g.is_one() {
        Ok(PeriodicityProfile::Nilpotent { degree: v })
    } else {
        Ok(PeriodicityProfile::UltimatelyPeriodic {
            preperiod: v,
            period: g.order_mod()?,
        })
    }
}

/// Profile of `V` from the minimal polynomial of `M₂`.
pub fn operator_profile(a: &Algebra) -> Result<PeriodicityProfile> {
    let op = a.operator();
    profile_from_minpoly(&minimal_polynomial(op.m2()))
}

/// Largest number of matrix powers the brute-force oracle will visit.
pub const BRUTE_FORCE_LIMIT: usize = 1 << 16;

/// Profile by iterating `M₂` and recording the first repeated power.
pub fn brute_force_profile(a: &Algebra) -> Result<PeriodicityProfile> {
    let op = a.operator();
    let m = op.m2();
    let mut seen: HashMap<BitMatrix, usize> = HashMap::new();
    let mut p = BitMatrix::identity(m.rows());
    for k in 0..BRUTE_FORCE_LIMIT {
        if let Some(&j) = seen.get(&p) {
            return Ok(if p.is_zero() {
                PeriodicityProfile::Nilpotent { degree: j }
            } else {
                PeriodicityProfile::UltimatelyPeriodic {
                    preperiod: j,
                    period: (k - j) as u64,
                }
            });
        }
        let next = p.mul(m);
        seen.insert(p, k);
        p = next;
    }
    Err(Error::Unsupported(format!(
        "no repeat within {BRUTE_FORCE_LIMIT} powers"
    )))
}

/// Operator profile, upgraded to quasi-constant when that structure holds.
pub fn classify(a: &Algebra) -> Result<PeriodicityProfile> {
    if let Some((degree, idempotent)) = quasi_constant_check(a) {
        return Ok(PeriodicityProfile::QuasiConstant { degree, idempotent });
    }
    operator_profile(a)
}

/// Element profile checked against the operator profile.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ElementProfile {
    pub preperiod: usize,
    pub period: usize,
    pub operator: PeriodicityProfile,
}

/// `(m, d)` of `x`, certified by `m <= n` and `d | p`.
pub fn element_profile(a: &Algebra, x: &Vector) -> Result<ElementProfile> {
    let orb = orbit(a, x)?;
    let op = operator_profile(a)?;
    if orb.preperiod > op.preperiod() || op.period() % orb.period as u64 != 0 {
        return Err(Error::InvariantViolation(format!(
            "element ({},{}) does not fit operator ({},{})",
            orb.preperiod,
            orb.period,
            op.preperiod(),
            op.period()
        )));
    }
    Ok(ElementProfile {
        preperiod: orb.preperiod,
        period: orb.period,
        operator: op,
    })
}

/// The unique split `x = a + b` with `V^d(a) = a` and `V^m(b) = 0`, where
/// `(m, d)` is the profile of `x`.
pub fn element_decomposition(alg: &Algebra, x: &Vector) -> Result<(Vector, Vector)> {
    let orb = orbit(alg, x)?;
    let p = alg.field().degree();
    let op = alg.operator();
    let m = op.m2();
    let n = m.rows();
    let periodic = m
        .pow(orb.period as u64)
        .add(&BitMatrix::identity(n))
        .kernel();
    let nil = m.pow(orb.preperiod as u64).kernel();
    let mut cols = periodic.clone();
    cols.extend(nil.iter().cloned());
    let system = BitMatrix::from_columns(n, &cols);
    let sol = system.solve(&x.to_bits(p)).ok_or_else(|| {
        Error::NotPeriodic(format!("{x} is not in ker V^m + ker(V^d - id)"))
    })?;
    let mut a_bits = BitVec::zeros(n);
    for (k, v) in periodic.iter().enumerate() {
        if sol.get(k) {
            a_bits.xor_assign(v);
        }
    }
    let a = Vector::from_bits(&a_bits, p);
    let b = x.add(&a);
    Ok((a, b))
}

/// `Some((1, e))` exactly for the idempotent line `F_2⟨e⟩`, `e² = e`.
pub fn quasi_constant_check(a: &Algebra) -> Option<(usize, Vector)> {
    if a.field().is_prime() && a.dim() == 1 && a.squares()[0].0[0] == Elem::ONE {
        Some((1, Vector::unit(1, 0)))
    } else {
        None
    }
}

/// Why `V^n` is not constant on nonzero elements.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum QcWitness {
    /// Two nonzero elements with different images.
    Differ(Vector, Vector),
    /// A nonzero element whose image vanishes.
    Vanishes(Vector),
}

/// For algebras other than `F_2⟨e⟩`, a witness that `V^n` is not constant
/// on nonzero elements. Takes `x = e_1`, `y = e_2` (or `α e_1` in dimension 1
/// over a proper extension) and `x + y`: if `V^n(x) = V^n(y)` then
/// `V^n(x + y) = 0` by additivity.
pub fn quasi_constant_counterexample(a: &Algebra, n: usize) -> Option<QcWitness> {
    let d = a.dim();
    let x = Vector::unit(d, 0);
    let y = if d >= 2 {
        Vector::unit(d, 1)
    } else if !a.field().is_prime() {
        x.scale(&a.field(), Elem(2))
    } else {
        // F_2, dimension 1: only one nonzero element.
        let vx = a.evolve_n(&x, n);
        return vx.is_zero().then_some(QcWitness::Vanishes(x));
    };
    let (vx, vy) = (a.evolve_n(&x, n), a.evolve_n(&y, n));
    if vx != vy {
        Some(QcWitness::Differ(x, y))
    } else {
        Some(QcWitness::Vanishes(x.add(&y)))
    }
}

/// Least `q` that is a multiple of `p` and exceeds `n`; `V^{2q} = V^q`.
pub fn stabilization_index(n: usize, p: u64) -> u64 {
    (n as u64 / p + 1) * p
}

/// Minimal monic `T ∈ F[X]` with `T(V) = 0`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TrainPolynomial {
    pub poly: PolyF,
    pub degree: usize,
    pub valuation: usize,
    /// Absent when `T` is a monomial (nilpotent `V`).
    pub striction: Option<StrictionReport>,
}

fn flatten(m: &BitMatrix) -> BitVec {
    let n = m.cols();
    let mut out = BitVec::zeros(m.rows() * n);
    for i in 0..m.rows() {
        for j in m.row(i).ones() {
            out.set(i * n + j, true);
        }
    }
    out
}

/// Solves `M₂^n + Σ_{k<n} L_{α_k} M₂^k = 0` for `n = 0, 1, ...` over the
/// coefficient bits of the `α_k`, returning the first solvable degree.
pub fn train_polynomial(a: &Algebra) -> Result<TrainPolynomial> {
    let field = a.field();
    let p = field.degree() as usize;
    let d = a.dim();
    let op = a.operator();
    let m = op.m2();
    let n_bits = m.rows();
    let scalars: Vec<BitMatrix> = field.basis().map(|b| scalar_matrix(&field, d, b)).collect();
    let mut elim = Eliminator::new(n_bits * n_bits, p * (n_bits + 1));
    let mut power = BitMatrix::identity(n_bits);
    for n in 0..=n_bits {
        let (res, combo) = elim.reduce(&flatten(&power));
        if res.is_zero() {
            let mut coeffs = vec![Elem::ZERO; n + 1];
            coeffs[n] = Elem::ONE;
            for t in combo.ones() {
                coeffs[t / p] += Elem(1 << (t % p));
            }
            let poly = PolyF::new(field, coeffs)?;
            return finish_train(field, poly);
        }
        for l in &scalars {
            if elim.insert(&flatten(&l.mul(&power))).is_err() {
                return Err(Error::InvariantViolation(format!(
                    "train identity of degree {n} is not unique"
                )));
            }
        }
        power = power.mul(m);
    }
    unreachable!("the minimal polynomial of M₂ annihilates V")
}

fn finish_train(field: Field, poly: PolyF) -> Result<TrainPolynomial> {
    let degree = poly.degree().expect("monic");
    let valuation = poly.valuation().expect("monic");
    let striction = poly.striction().ok();
    if let Some(s) = &striction {
        let m = field.degree() as usize;
        if s.sigma % m != 0 {
            return Err(Error::InvariantViolation(format!(
                "field {field} is not inside F_2^{} for T = {poly}",
                s.sigma
            )));
        }
        if (degree - valuation) % s.sigma != 0
            || s.exponents.iter().any(|e| (e - valuation) % s.sigma != 0)
        {
            return Err(Error::InvariantViolation(format!(
                "exponents of {poly} are not of the form v + kσ"
            )));
        }
    }
    Ok(TrainPolynomial {
        poly,
        degree,
        valuation,
        striction,
    })
}

/// Outcome of checking `P(V) = 0`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct IdentityCheck {
    pub holds: bool,
    pub witness: Option<Vector>,
}

/// `P(V)(x) = Σ α_k V^k(x)` evaluated by direct iteration.
pub fn apply_polynomial(a: &Algebra, poly: &PolyF, x: &Vector) -> Vector {
    let field = a.field();
    let mut acc = Vector::zeros(a.dim());
    let mut y = x.clone();
    for (k, &c) in poly.coeffs().iter().enumerate() {
        if k > 0 {
            y = a.evolve(&y);
        }
        if !c.is_zero() {
            acc.add_assign(&y.scale(&field, c));
        }
    }
    acc
}

/// Whether `P(V)` vanishes on every `β_a e_i` (hence everywhere, by
/// additivity); on failure the first offending basis element is returned.
pub fn verify_identity(a: &Algebra, poly: &PolyF) -> Result<IdentityCheck> {
    if poly.field != a.field() {
        return Err(Error::FieldMismatch);
    }
    for x in restricted_basis(&a.field(), a.dim()) {
        if !apply_polynomial(a, poly, &x).is_zero() {
            return Ok(IdentityCheck {
                holds: false,
                witness: Some(x),
            });
        }
    }
    Ok(IdentityCheck {
        holds: true,
        witness: None,
    })
}

/// [`verify_identity`] for a polynomial with coefficients in `F_2`.
pub fn verify_identity_f2(a: &Algebra, poly: &Poly2) -> IdentityCheck {
    verify_identity(a, &PolyF::from_poly2(a.field(), poly)).expect("same field by construction")
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cyclic4() -> Algebra {
        let sq = (0..4).map(|i| Vector::unit(4, (i + 1) % 4)).collect();
        Algebra::new(Field::F2, sq).unwrap()
    }

    #[test]
    fn cyclic_example() {
        let a = cyclic4();
        assert_eq!(
            operator_profile(&a).unwrap(),
            PeriodicityProfile::UltimatelyPeriodic { preperiod: 0, period: 4 }
        );
        let o = orbit(&a, &Vector::from_bits01(&[1, 0, 1, 0])).unwrap();
        assert_eq!((o.preperiod, o.period), (0, 2));
        let o = orbit(&a, &Vector::from_bits01(&[1, 1, 1, 1])).unwrap();
        assert_eq!((o.preperiod, o.period), (0, 1));
        assert_eq!(brute_force_profile(&a).unwrap(), operator_profile(&a).unwrap());
        let t = train_polynomial(&a).unwrap();
        assert_eq!(t.poly.to_poly2().unwrap(), Poly2::x_pow_plus_one(4));
    }

    #[test]
    fn minimal_polynomial_of_identity_and_zero() {
        assert_eq!(minimal_polynomial(&BitMatrix::identity(3)), Poly2::from_u64(0b11));
        assert_eq!(minimal_polynomial(&BitMatrix::zeros(3, 3)), Poly2::x());
    }

    #[test]
    fn zero_algebra_line() {
        let a = Algebra::new(Field::F2, vec![Vector::zeros(1)]).unwrap();
        let t = train_polynomial(&a).unwrap();
        assert_eq!(t.poly.to_poly2().unwrap(), Poly2::x());
        assert_eq!(operator_profile(&a).unwrap(), PeriodicityProfile::Nilpotent { degree: 1 });
    }

    #[test]
    fn quasi_constant_line() {
        let a = Algebra::new(Field::F2, vec![Vector::unit(1, 0)]).unwrap();
        assert_eq!(quasi_constant_check(&a), Some((1, Vector::unit(1, 0))));
        let f4 = Field::new(2, None).unwrap();
        let b = Algebra::new(f4, vec![Vector::unit(1, 0)]).unwrap();
        assert_eq!(quasi_constant_check(&b), None);
        assert!(quasi_constant_counterexample(&b, 3).is_some());
    }
}
