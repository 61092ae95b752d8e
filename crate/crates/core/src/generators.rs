//! Constructors for the example families: cellular automata, finite
//! dynamical systems, companion-type examples and seeded random algebras.
//!
//! Paper-style tables index bases from 1; these builders use 0-based
//! indices internally, so `e_1` is index 0.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::algebra::{Algebra, Vector};
use crate::error::{Error, Result};
use crate::field::{Elem, Field};
use crate::fmatrix::hadamard_composite;
use crate::numtheory::lcm_u64;

/// Linear cellular automaton on the ring `Z/nZ`: `e_i² = e_{i-1} + e_{i+1}`.
pub fn rule90(n: usize) -> Result<Algebra> {
    ring_rule(n, false)
}

/// `e_i² = e_{i-1} + e_i + e_{i+1}`.
pub fn rule150(n: usize) -> Result<Algebra> {
    ring_rule(n, true)
}

fn ring_rule(n: usize, center: bool) -> Result<Algebra> {
    if n < 3 {
        return Err(Error::SizeTooSmall(n));
    }
    let squares = (0..n)
        .map(|i| {
            let mut v = Vector::zeros(n);
            v.0[(i + 1) % n] += Elem::ONE;
            v.0[(i + n - 1) % n] += Elem::ONE;
            if center {
                v.0[i] += Elem::ONE;
            }
            v
        })
        .collect();
    Ok(Algebra::new(Field::F2, squares)?.with_zero_table())
}

/// `V(e_i) = e_{i+1}` cyclically (indices mod `n`).
pub fn cyclic(n: usize) -> Result<Algebra> {
    if n == 0 {
        return Err(Error::SizeTooSmall(n));
    }
    let squares = (0..n).map(|i| Vector::unit(n, (i + 1) % n)).collect();
    Ok(Algebra::new(Field::F2, squares)?.with_zero_table())
}

/// The three-dimensional algebra `V: e_1 → e_2 → e_3 → e_1 + e_3`, the
/// companion algebra of `X³ + X² + 1`.
pub fn remark_algebra() -> Algebra {
    Algebra::new(
        Field::F2,
        vec![
            Vector::from_bits01(&[0, 1, 0]),
            Vector::from_bits01(&[0, 0, 1]),
            Vector::from_bits01(&[1, 0, 1]),
        ],
    )
    .expect("valid table")
    .with_zero_table()
}

/// A finite dynamical system `f: {0..N-1} → {0..N-1}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DynSys {
    map: Vec<usize>,
}

impl DynSys {
    pub fn new(map: Vec<usize>) -> Result<Self> {
        let n = map.len();
        if n == 0 {
            return Err(Error::InvalidInput("empty dynamical system".into()));
        }
        if let Some(&bad) = map.iter().find(|&&y| y >= n) {
            return Err(Error::InvalidInput(format!("image {bad} outside 0..{n}")));
        }
        Ok(DynSys { map })
    }

    pub fn size(&self) -> usize {
        self.map.len()
    }

    pub fn map(&self) -> &[usize] {
        &self.map
    }

    pub fn apply(&self, x: usize) -> usize {
        self.map[x]
    }

    pub fn iterate(&self, x: usize, k: usize) -> usize {
        (0..k).fold(x, |y, _| self.map[y])
    }

    /// Whether `f^a = f^b` as maps.
    pub fn powers_agree(&self, a: usize, b: usize) -> bool {
        (0..self.size()).all(|x| self.iterate(x, a) == self.iterate(x, b))
    }
}

/// `x ↦ x² + c mod m`.
pub fn quadratic_map(c: u64, m: u64) -> Result<DynSys> {
    if m < 2 {
        return Err(Error::InvalidInput(format!("modulus {m} < 2")));
    }
    let map = (0..m).map(|x| ((x * x + c) % m) as usize).collect();
    DynSys::new(map)
}

/// `F_4 ∪ {∞}` with `f(x) = x + x^{-1}` off `{0, ∞}` and `f = ∞` on them.
/// Points are indexed `0, 1, α, α², ∞` → `0..5`.
pub fn f4_infinity_system() -> DynSys {
    DynSys::new(vec![4, 0, 1, 1, 4]).expect("valid map")
}

/// Combinatorial profile of a functional graph.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FunctionalProfile {
    /// Longest tail before a point enters its cycle.
    pub max_tail: usize,
    /// lcm of the cycle lengths.
    pub cycle_lcm: u64,
}

pub fn functional_profile(d: &DynSys) -> FunctionalProfile {
    let n = d.size();
    let mut max_tail = 0;
    let mut cycle_lcm = 1u64;
    for x in 0..n {
        let mut seen = vec![usize::MAX; n];
        let (mut y, mut k) = (x, 0);
        while seen[y] == usize::MAX {
            seen[y] = k;
            y = d.apply(y);
            k += 1;
        }
        max_tail = max_tail.max(seen[y]);
        cycle_lcm = lcm_u64(cycle_lcm, (k - seen[y]) as u64).expect("small cycles");
    }
    FunctionalProfile { max_tail, cycle_lcm }
}

/// `e_i² = e_{f(i)}`, with the functional-graph profile of `f`.
pub fn dynsys_algebra(d: &DynSys) -> (Algebra, FunctionalProfile) {
    let n = d.size();
    let squares = (0..n).map(|i| Vector::unit(n, d.apply(i))).collect();
    let a = Algebra::new(Field::F2, squares)
        .expect("dimension checked by DynSys")
        .with_zero_table();
    (a, functional_profile(d))
}

/// Shape of randomly generated algebras.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum AlgebraKind {
    /// Random symmetric full table.
    General,
    /// Random squares, zero off-diagonal products.
    Evolution,
}

fn random_vector(rng: &mut ChaCha8Rng, field: &Field, d: usize, density: f64) -> Vector {
    Vector(
        (0..d)
            .map(|_| {
                if rng.gen_bool(density) {
                    Elem(rng.gen_range(1..field.order()) as u16)
                } else {
                    Elem::ZERO
                }
            })
            .collect(),
    )
}

/// Deterministic random algebra. Each coordinate is nonzero with a
/// seed-dependent density, so both sparse (often nilpotent) and dense
/// (often invertible) operators show up.
pub fn random_algebra(field: Field, dim: usize, seed: u64, kind: AlgebraKind) -> Result<Algebra> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let density = [0.2, 0.35, 0.5, 0.7][rng.gen_range(0..4)];
    let squares: Vec<Vector> = (0..dim)
        .map(|_| random_vector(&mut rng, &field, dim, density))
        .collect();
    let a = Algebra::new(field, squares.clone())?;
    match kind {
        AlgebraKind::Evolution => Ok(a.with_zero_table()),
        AlgebraKind::General => {
            let mut table = vec![vec![Vector::zeros(dim); dim]; dim];
            for i in 0..dim {
                table[i][i] = squares[i].clone();
                for j in i + 1..dim {
                    let v = random_vector(&mut rng, &field, dim, density);
                    table[i][j] = v.clone();
                    table[j][i] = v;
                }
            }
            a.with_table(table)
        }
    }
}

/// Nilpotency of `V` for an algebra with a natural basis, via its structure
/// matrix: `S^d = 0` over `F_2`; over `F_{2^q}`, the Hadamard composite
/// `S S^{⊙2} ⋯ S^{⊙2^{k-1}}` vanishing for some `k <= q·d`.
pub fn evolution_nilpotency_check(a: &Algebra) -> Result<bool> {
    if !a.is_evolution() {
        return Err(Error::NotEvolutionAlgebra);
    }
    let op = a.operator();
    let s = op.s();
    if a.field().is_prime() {
        return Ok(hadamard_composite(s, a.dim()).is_zero());
    }
    let mut acc = s.clone();
    for k in 1..=a.restricted_dim() {
        if acc.is_zero() {
            return Ok(true);
        }
        acc = acc.mul(&s.hadamard_frobenius(k as u64));
    }
    Ok(acc.is_zero())
}

/// Weighted `A(s)` with random perturbations that keep `ω = (1, 0, ..., 0)`
/// a morphism: `e² = e + z₀`, kernel squares and mixed products drawn from
/// `ker ω`. With probability one half the kernel squares stay strictly
/// "upward" along the basis order, so the kernel remains nilpotent.
pub fn perturbed_weighted_as(s: &[usize], field: Field, seed: u64) -> Result<Algebra> {
    let base = crate::baric::build_weighted_as(s, field)?;
    let d = base.dim();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let upward = rng.gen_bool(0.5);
    let kernel_vec = |rng: &mut ChaCha8Rng, from: usize| {
        let mut v = random_vector(rng, &field, d, 0.3);
        v.0[0] = Elem::ZERO;
        for c in v.0.iter_mut().take(from) {
            *c = Elem::ZERO;
        }
        v
    };
    let mut table = base.table().expect("weighted builder stores a table").clone();
    // e² = e + z₀.
    let mut e2 = kernel_vec(&mut rng, 1);
    e2.0[0] = Elem::ONE;
    table[0][0] = e2;
    for i in 1..d {
        let from = if upward { i + 1 } else { 1 };
        let extra = kernel_vec(&mut rng, from);
        table[i][i] = table[i][i].add(&extra);
        for j in i + 1..d {
            let v = kernel_vec(&mut rng, 1);
            table[i][j] = v.clone();
            table[j][i] = v;
        }
        let v = kernel_vec(&mut rng, 1);
        table[0][i] = v.clone();
        table[i][0] = v;
    }
    let squares = (0..d).map(|i| table[i][i].clone()).collect();
    Algebra::new(field, squares)?
        .with_table(table)?
        .with_weight(base.weight().expect("weighted").to_vec())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dynamics::operator_profile;

    #[test]
    fn rule_tables() {
        let a = rule90(3).unwrap();
        assert_eq!(a.squares()[0], Vector::from_bits01(&[0, 1, 1]));
        assert_eq!(a.squares()[1], Vector::from_bits01(&[1, 0, 1]));
        assert_eq!(a.squares()[2], Vector::from_bits01(&[1, 1, 0]));
        let b = rule150(3).unwrap();
        assert!(b.squares().iter().all(|v| *v == Vector::from_bits01(&[1, 1, 1])));
        assert_eq!(rule90(2), Err(Error::SizeTooSmall(2)));
    }

    #[test]
    fn quadratic_tables() {
        let d = quadratic_map(2, 13).unwrap();
        assert_eq!((d.apply(4), d.apply(9), d.apply(5), d.apply(8)), (5, 5, 1, 1));
        assert_eq!(d.apply(1), 3);
        assert_eq!(quadratic_map(0, 2).unwrap().map(), &[0, 1]);
        assert_eq!(quadratic_map(1, 3).unwrap().map(), &[1, 2, 2]);
        assert!(d.powers_agree(8, 4));
        assert!(d.powers_agree(7, 3));
        assert!(!d.powers_agree(6, 2));
    }

    #[test]
    fn functional_profiles() {
        let (a, fp) = dynsys_algebra(&quadratic_map(2, 13).unwrap());
        assert_eq!(fp, FunctionalProfile { max_tail: 3, cycle_lcm: 4 });
        let op = operator_profile(&a).unwrap();
        assert_eq!((op.preperiod(), op.period()), (3, 4));
        let fp = functional_profile(&f4_infinity_system());
        assert_eq!(fp, FunctionalProfile { max_tail: 3, cycle_lcm: 1 });
        let id = DynSys::new(vec![0, 1]).unwrap();
        assert_eq!(functional_profile(&id), FunctionalProfile { max_tail: 0, cycle_lcm: 1 });
    }

    #[test]
    fn random_is_deterministic() {
        let f4 = Field::new(2, None).unwrap();
        let a = random_algebra(f4, 3, 7, AlgebraKind::General).unwrap();
        assert_eq!(a, random_algebra(f4, 3, 7, AlgebraKind::General).unwrap());
        assert!(a.table().is_some());
        let e = random_algebra(Field::F2, 4, 1, AlgebraKind::Evolution).unwrap();
        assert!(e.is_evolution());
    }

    #[test]
    fn nilpotency_criteria() {
        assert!(evolution_nilpotency_check(&rule90(4).unwrap()).unwrap());
        assert!(!evolution_nilpotency_check(&cyclic(4).unwrap()).unwrap());
        let zero = Algebra::new(Field::F2, vec![Vector::zeros(2); 2]).unwrap();
        assert!(evolution_nilpotency_check(&zero).unwrap());
    }
}
