//! Weighted (baric) algebras: quasi-constant structure, Bernstein-periodic
//! profiles and weighted train identities.
//!
//! Everything reduces to `V` on `ker ω` plus one unit representative `e₀`:
//! writing `x = λe₀ + z` with `λ = ω(x)`, `V^k(x) = λ^{2^k} V^k(e₀) + V^k(z)`,
//! and the identities split by powers of `λ`.

use serde::{Deserialize, Serialize};

use crate::algebra::{restricted_basis, Algebra, Vector};
use crate::bits::{BitVec, Eliminator};
use crate::canonical::build_a_s;
use crate::error::{Error, Result};
use crate::field::{Elem, Field};

/// A validated weight with a kernel basis and a unit representative.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BaricStructure {
    pub algebra: Algebra,
    pub omega: Vec<Elem>,
    pub kernel_basis: Vec<Vector>,
    /// An element of weight 1.
    pub unit_rep: Vector,
}

pub fn check_weight(a: &Algebra) -> Result<BaricStructure> {
    a.check_morphism()?;
    let field = a.field();
    let omega = a.weight().expect("checked").to_vec();
    let d = a.dim();
    let j = omega.iter().position(|w| !w.is_zero()).expect("nonzero weight");
    let inv = field.inv(omega[j])?;
    let kernel_basis: Vec<Vector> = (0..d)
        .filter(|&i| i != j)
        .map(|i| {
            let mut z = Vector::unit(d, i);
            z.0[j] = field.mul(omega[i], inv);
            z
        })
        .collect();
    let unit_rep = Vector::unit(d, j).scale(&field, inv);
    for z in &kernel_basis {
        if a.weight_of(&a.evolve(z)) != Some(Elem::ZERO) {
            return Err(Error::InvariantViolation(format!("V({z}) leaves ker ω")));
        }
    }
    Ok(BaricStructure {
        algebra: a.clone(),
        omega,
        kernel_basis,
        unit_rep,
    })
}

impl BaricStructure {
    fn field(&self) -> Field {
        self.algebra.field()
    }

    /// `F_2`-spanning set of `ker ω`: `β_a z` for kernel basis vectors `z`.
    fn kernel_f2_basis(&self) -> Vec<Vector> {
        let f = self.field();
        self.kernel_basis
            .iter()
            .flat_map(|z| f.basis().map(move |b| z.scale(&f, b)))
            .collect()
    }

    /// Least `n` with `V^n = 0` on `ker ω`, if any.
    pub fn kernel_nilpotency(&self) -> Option<usize> {
        let a = &self.algebra;
        let bound = a.restricted_dim();
        let mut zs = self.kernel_basis.clone();
        for n in 0..=bound {
            if zs.iter().all(|z| z.is_zero()) {
                return Some(n);
            }
            zs = zs.iter().map(|z| a.evolve(z)).collect();
        }
        None
    }

    /// Another weight-1 element, `e₀ + z₁` (or `e₀` in dimension 1).
    pub fn alternate_unit(&self) -> Vector {
        match self.kernel_basis.first() {
            Some(z) => self.unit_rep.add(z),
            None => self.unit_rep.clone(),
        }
    }

    /// Deterministic sample of elements: restricted basis, `e₀`, and sums.
    fn samples(&self) -> Vec<Vector> {
        let a = &self.algebra;
        let mut xs = restricted_basis(&a.field(), a.dim());
        let k = xs.len();
        for i in 0..k {
            xs.push(xs[i].add(&xs[(i + 1) % k]));
        }
        xs.push(self.unit_rep.clone());
        xs.push(self.alternate_unit());
        xs
    }
}

/// `ω(x)^{2^n (2^p - 1)}`, reducing the exponent modulo `2^m - 1`.
fn weight_power(field: &Field, w: Elem, n: usize, p: usize) -> Elem {
    if w.is_zero() {
        return Elem::ZERO;
    }
    // λ^{2^n(2^p - 1)} = Frob^n(λ^{2^p - 1}) = Frob^n(Frob^p(λ) / λ).
    let ratio = field.div(field.frobenius(w, p as u64), w).expect("nonzero");
    field.frobenius(ratio, n as u64)
}

/// Weighted quasi-constant data: `V^n(x) = ω(x)^{2^n} e`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BaricQuasiConstant {
    pub degree: usize,
    pub idempotent: Vector,
}

pub fn baric_quasi_constant(b: &BaricStructure) -> Result<BaricQuasiConstant> {
    let a = &b.algebra;
    let f = a.field();
    let nu = b.kernel_nilpotency().ok_or(Error::KernelNotNilpotent)?;
    let e = a.evolve_n(&b.unit_rep, nu);
    if a.evolve(&e) != e || a.weight_of(&e) != Some(Elem::ONE) {
        return Err(Error::InvariantViolation(format!("{e} is not a weight-1 idempotent")));
    }
    if a.evolve_n(&b.alternate_unit(), nu) != e {
        return Err(Error::InvariantViolation("idempotent depends on the unit representative".into()));
    }
    for x in b.samples() {
        let w = a.weight_of(&x).expect("weighted");
        let lhs = a.evolve_n(&x, nu);
        let rhs = e.scale(&f, f.frobenius(w, nu as u64));
        if lhs != rhs {
            return Err(Error::InvariantViolation(format!("V^{nu}({x}) ≠ ω(x)^(2^{nu}) e")));
        }
    }
    Ok(BaricQuasiConstant { degree: nu, idempotent: e })
}

/// Minimal `(p, n)` with `V^{n+p}(x) = ω(x)^{2^n(2^p-1)} V^n(x)` for all `x`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BernsteinProfile {
    pub n: usize,
    pub p: usize,
    pub quasi_constant: BaricQuasiConstant,
}

/// Uses the exact criterion: the identity holds iff `V^n(ker ω) = 0` and
/// `V^{n+p}(e₀) = V^n(e₀)`.
pub fn bernstein_profile(b: &BaricStructure) -> Result<BernsteinProfile> {
    let a = &b.algebra;
    let f = a.field();
    let qc = baric_quasi_constant(b)?;
    let nu = qc.degree;
    let bound = a.restricted_dim() + 1;
    let holds = |n: usize, p: usize| {
        n >= nu && a.evolve_n(&b.unit_rep, n + p) == a.evolve_n(&b.unit_rep, n)
    };
    let (p, n) = (1..=bound)
        .flat_map(|p| (0..=bound).map(move |n| (p, n)))
        .find(|&(p, n)| holds(n, p))
        .ok_or_else(|| Error::InvariantViolation("no Bernstein identity found".into()))?;
    for x in b.samples() {
        let w = a.weight_of(&x).expect("weighted");
        let lhs = a.evolve_n(&x, n + p);
        let rhs = a.evolve_n(&x, n).scale(&f, weight_power(&f, w, n, p));
        if lhs != rhs {
            return Err(Error::InvariantViolation(format!(
                "B({n},{p}) identity fails at {x}"
            )));
        }
    }
    Ok(BernsteinProfile { n, p, quasi_constant: qc })
}

/// `V^n(x) + Σ_{k<n} α_k ω(x)^{2^n - 2^k} V^k(x) = 0`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct WeightedTrainIdentity {
    pub degree: usize,
    pub coefficients: Vec<Elem>,
}

/// Whether some weighted train identity of degree `n` exists.
///
/// With `x = λe₀ + z`: `λ = 0` forces `V^n(ker ω) = 0`; `z = 0` forces
/// `V^n(e₀) = Σ α_k V^k(e₀)`; the remaining terms `Σ α_k λ^{2^n-2^k} V^k(z)`
/// must vanish for every `λ`, and since the monomials `λ^c`,
/// `0 <= c < 2^m - 1`, are independent functions on `F^×`, this splits into
/// one condition per residue class of `2^n - 2^k` modulo `2^m - 1`.
pub fn weighted_identity_exists(b: &BaricStructure, n: usize) -> bool {
    let a = &b.algebra;
    let f = a.field();
    let m = f.degree() as usize;
    let kernel = b.kernel_f2_basis();
    if kernel.iter().any(|z| !a.evolve_n(z, n).is_zero()) {
        return false;
    }
    let nbits = a.restricted_dim();
    let class = |k: usize| -> usize {
        // (2^n - 2^k) mod (2^m - 1) depends on n, k mod m only.
        let modulus = (1usize << m) - 1;
        if modulus == 1 {
            return 0;
        }
        let pn = 1usize << (n % m);
        let pk = 1usize << (k % m);
        (pn + modulus - pk) % modulus
    };
    let classes: Vec<usize> = {
        let mut cs: Vec<usize> = (0..n).map(class).collect();
        cs.sort_unstable();
        cs.dedup();
        cs
    };
    let block = kernel.len() * nbits;
    let len = nbits + classes.len() * block;
    // Column for unknown bit (k, c): β_c V^k(e₀) then β_c V^k(w) per kernel w
    // in the block of k's class.
    let mut elim = Eliminator::new(len, n * m + 1);
    let mut target = BitVec::zeros(len);
    for bit in a.evolve_n(&b.unit_rep, n).to_bits(f.degree()).ones() {
        target.set(bit, true);
    }
    for k in 0..n {
        let ci = classes.binary_search(&class(k)).expect("listed");
        let vk_e0 = a.evolve_n(&b.unit_rep, k);
        let vk_ws: Vec<Vector> = kernel.iter().map(|w| a.evolve_n(w, k)).collect();
        for beta in f.basis() {
            let mut col = BitVec::zeros(len);
            for bit in vk_e0.scale(&f, beta).to_bits(f.degree()).ones() {
                col.set(bit, true);
            }
            for (wi, vw) in vk_ws.iter().enumerate() {
                let off = nbits + ci * block + wi * nbits;
                for bit in vw.scale(&f, beta).to_bits(f.degree()).ones() {
                    col.set(off + bit, true);
                }
            }
            let _ = elim.insert(&col);
        }
    }
    elim.contains(&target)
}

/// The minimal weighted train identity: degree `ν + 1` with `α_ν = 1`,
/// after confirming that no degree `<= ν` admits one.
pub fn weighted_train_identity(b: &BaricStructure) -> Result<WeightedTrainIdentity> {
    let a = &b.algebra;
    let f = a.field();
    let qc = baric_quasi_constant(b)?;
    let nu = qc.degree;
    if let Some(n) = (0..=nu).find(|&n| weighted_identity_exists(b, n)) {
        return Err(Error::InvariantViolation(format!(
            "weighted train identity of degree {n} <= ν = {nu}"
        )));
    }
    let degree = nu + 1;
    let mut coefficients = vec![Elem::ZERO; degree];
    coefficients[nu] = Elem::ONE;
    // Direct check of V^{ν+1}(x) = ω(x)^{2^ν} V^ν(x).
    for x in b.samples() {
        let w = a.weight_of(&x).expect("weighted");
        let lhs = a.evolve_n(&x, degree);
        let rhs = a.evolve_n(&x, nu).scale(&f, f.frobenius(w, nu as u64));
        if lhs != rhs {
            return Err(Error::InvariantViolation(format!(
                "weighted identity of degree {degree} fails at {x}"
            )));
        }
    }
    let sum = coefficients.iter().fold(Elem::ZERO, |acc, &c| acc + c);
    if sum != Elem::ONE {
        return Err(Error::InvariantViolation("train coefficients do not sum to 1".into()));
    }
    Ok(WeightedTrainIdentity { degree, coefficients })
}

/// Weighted `A(s)`: `e² = e` with `ω(e) = 1`, and the chains of `A(s)`
/// spanning `ker ω`; mixed products are zero.
pub fn build_weighted_as(s: &[usize], field: Field) -> Result<Algebra> {
    let chains = build_a_s(s)?;
    let d = chains.dim() + 1;
    if d > crate::algebra::MAX_DIM {
        return Err(Error::Shape(format!("dimension {d} exceeds 64")));
    }
    let mut squares = vec![Vector::unit(d, 0)];
    for sq in chains.squares() {
        let mut v = Vector::zeros(d);
        v.0[1..].copy_from_slice(&sq.0);
        squares.push(v);
    }
    let mut weight = vec![Elem::ZERO; d];
    weight[0] = Elem::ONE;
    Algebra::new(field, squares)?.with_zero_table().with_weight(weight)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn two_dim(weight: [u16; 2], z_idem: bool) -> Algebra {
        let z = if z_idem { Vector::unit(2, 1) } else { Vector::zeros(2) };
        Algebra::new(Field::F2, vec![Vector::unit(2, 0), z])
            .unwrap()
            .with_zero_table()
            .with_weight_unchecked(weight.iter().map(|&w| Elem(w)).collect())
            .unwrap()
    }

    #[test]
    fn weight_checks() {
        let b = check_weight(&two_dim([1, 0], false)).unwrap();
        assert_eq!(b.kernel_basis, vec![Vector::unit(2, 1)]);
        assert_eq!(check_weight(&two_dim([1, 1], false)), Err(Error::NotAMorphism { i: 2, j: 2 }));
        assert_eq!(check_weight(&two_dim([0, 0], false)), Err(Error::ZeroWeight));
    }

    #[test]
    fn weighted_line_and_plane() {
        let b = check_weight(&build_weighted_as(&[1], Field::F2).unwrap()).unwrap();
        let qc = baric_quasi_constant(&b).unwrap();
        assert_eq!(qc, BaricQuasiConstant { degree: 1, idempotent: Vector::unit(2, 0) });
        let bp = bernstein_profile(&b).unwrap();
        assert_eq!((bp.n, bp.p), (1, 1));
        let t = weighted_train_identity(&b).unwrap();
        assert_eq!(t.coefficients, vec![Elem::ZERO, Elem::ONE]);

        let line = Algebra::new(Field::F2, vec![Vector::unit(1, 0)])
            .unwrap()
            .with_zero_table()
            .with_weight(vec![Elem::ONE])
            .unwrap();
        let b = check_weight(&line).unwrap();
        assert_eq!(baric_quasi_constant(&b).unwrap().degree, 0);
        let bp = bernstein_profile(&b).unwrap();
        assert_eq!((bp.n, bp.p), (0, 1));
        assert_eq!(weighted_train_identity(&b).unwrap().coefficients, vec![Elem::ONE]);
    }

    #[test]
    fn deeper_kernels() {
        let b = check_weight(&build_weighted_as(&[2, 1], Field::F2).unwrap()).unwrap();
        assert_eq!(b.algebra.dim(), 4);
        assert_eq!(baric_quasi_constant(&b).unwrap().degree, 2);
        let b = check_weight(&build_weighted_as(&[3, 1], Field::F2).unwrap()).unwrap();
        let bp = bernstein_profile(&b).unwrap();
        assert_eq!((bp.n, bp.p), (3, 1));
        let f4 = Field::new(2, None).unwrap();
        let b = check_weight(&build_weighted_as(&[2], f4).unwrap()).unwrap();
        assert_eq!(weighted_train_identity(&b).unwrap().degree, 3);
    }

    #[test]
    fn idempotent_kernel_is_rejected() {
        let b = check_weight(&two_dim([1, 0], true)).unwrap();
        assert_eq!(baric_quasi_constant(&b), Err(Error::KernelNotNilpotent));
        assert_eq!(bernstein_profile(&b).map(|_| ()), Err(Error::KernelNotNilpotent));
        assert_eq!(weighted_train_identity(&b).map(|_| ()), Err(Error::KernelNotNilpotent));
        assert!(build_weighted_as(&[], Field::F2).is_err());
    }
}
