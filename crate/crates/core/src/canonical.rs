//! Similitude invariants of `V` and the canonical-form builders.
//!
//! Over `F_2` two algebras are semi-isomorphic exactly when their evolution
//! matrices are similar, i.e. have the same invariant factors, which we get
//! from a Smith normal form of `XI - M` over `F_2[X]`.

use serde::{Deserialize, Serialize};

use crate::algebra::{Algebra, Vector};
use crate::bits::{BitMatrix, Eliminator};
use crate::dynamics::{operator_profile, PeriodicityProfile};
use crate::error::{Error, Result};
use crate::field::{Elem, Field};
use crate::poly2::Poly2;
use crate::polyf::PolyF;

/// Invariant factors of a square bit matrix, ascending: each divides the
/// next and the last one is the minimal polynomial. Constant factors are
/// dropped, so the degrees sum to the matrix size.
pub fn invariant_factors(m: &BitMatrix) -> Vec<Poly2> {
    assert!(m.is_square(), "invariant factors need a square matrix");
    let n = m.rows();
    let mut a: Vec<Vec<Poly2>> = (0..n)
        .map(|i| {
            (0..n)
                .map(|j| {
                    let mut e = if m.get(i, j) { Poly2::one() } else { Poly2::zero() };
                    if i == j {
                        e = e.add(&Poly2::x());
                    }
                    e
                })
                .collect()
        })
        .collect();

    for t in 0..n {
        loop {
            // Pivot: nonzero entry of least degree in the trailing block.
            let mut best: Option<(usize, usize, usize)> = None;
            for (i, row) in a.iter().enumerate().skip(t) {
                for (j, e) in row.iter().enumerate().skip(t) {
                    if let Some(d) = e.degree() {
                        if best.is_none_or(|b| d < b.2) {
                            best = Some((i, j, d));
                        }
                    }
                }
            }
            let Some((pi, pj, _)) = best else { break };
            a.swap(t, pi);
            for row in a.iter_mut() {
                row.swap(t, pj);
            }
            let pivot = a[t][t].clone();
            let mut clean = true;
            for i in t + 1..n {
                if a[i][t].is_zero() {
                    continue;
                }
                let (q, r) = a[i][t].divmod(&pivot).expect("nonzero pivot");
                for k in t..n {
                    let sub = q.mul(&a[t][k]);
                    a[i][k] = a[i][k].add(&sub);
                }
                clean &= r.is_zero();
            }
            for j in t + 1..n {
                if a[t][j].is_zero() {
                    continue;
                }
                let (q, r) = a[t][j].divmod(&pivot).expect("nonzero pivot");
                for row in a.iter_mut().skip(t) {
                    let sub = q.mul(&row[t]);
                    row[j] = row[j].add(&sub);
                }
                clean &= r.is_zero();
            }
            if !clean {
                continue;
            }
            // The pivot must divide everything left; otherwise fold the
            // offending row into row t and go again.
            let bad = (t + 1..n).find(|&i| (t + 1..n).any(|j| !pivot.divides(&a[i][j]) && !a[i][j].is_zero()));
            match bad {
                Some(i) => {
                    for k in t..n {
                        let v = a[i][k].clone();
                        a[t][k] = a[t][k].add(&v);
                    }
                }
                None => break,
            }
        }
    }
    let mut out: Vec<Poly2> = (0..n)
        .map(|i| a[i][i].clone())
        .filter(|p| p.degree().unwrap_or(0) >= 1)
        .collect();
    out.sort_by_key(|p| p.degree());
    out
}

/// Ranks of `M₂^k` for `k = 0..=N`: dimensions over `F_2` of `V^k(A)`.
pub fn image_dims(a: &Algebra) -> Vec<usize> {
    let op = a.operator();
    let m = op.m2();
    let mut p = BitMatrix::identity(m.rows());
    let mut out = Vec::with_capacity(m.rows() + 1);
    for _ in 0..=m.rows() {
        out.push(p.rank());
        p = p.mul(m);
    }
    out
}

fn require_f2(a: &Algebra) -> Result<()> {
    if a.field().is_prime() {
        Ok(())
    } else {
        Err(Error::InvalidInput(format!(
            "canonical invariants are defined over F_2, not {}",
            a.field()
        )))
    }
}

/// Block sizes `s` (weakly decreasing) of a nil-plenary algebra over `F_2`.
pub fn nilpotent_invariants(a: &Algebra) -> Result<Vec<usize>> {
    require_f2(a)?;
    if !operator_profile(a)?.is_nilpotent() {
        return Err(Error::NotNilpotent);
    }
    let mut s: Vec<usize> = invariant_factors(a.operator().m2())
        .iter()
        .map(|f| f.degree().expect("nonconstant"))
        .collect();
    s.sort_unstable_by(|x, y| y.cmp(x));
    Ok(s)
}

fn check_decreasing(name: &str, xs: &[usize], min: usize) -> Result<()> {
    if xs.windows(2).any(|w| w[0] < w[1]) {
        return Err(Error::Shape(format!("{name} must be weakly decreasing: {xs:?}")));
    }
    if xs.iter().any(|&x| x < min) {
        return Err(Error::Shape(format!("{name} entries must be >= {min}: {xs:?}")));
    }
    Ok(())
}

fn check_dim(d: usize) -> Result<()> {
    if d == 0 || d > crate::algebra::MAX_DIM {
        return Err(Error::Shape(format!("dimension {d} outside 1..=64")));
    }
    Ok(())
}

/// Appends chains `x → x² → … → 0` of the given lengths to `squares`.
fn push_chains(squares: &mut Vec<Vec<(usize, Elem)>>, lengths: &[usize]) {
    for &len in lengths {
        let start = squares.len();
        for j in 0..len {
            if j + 1 < len {
                squares.push(vec![(start + j + 1, Elem::ONE)]);
            } else {
                squares.push(Vec::new());
            }
        }
    }
}

/// Appends cycles `b_1 → b_2 → … → b_L → b_1`.
fn push_cycles(squares: &mut Vec<Vec<(usize, Elem)>>, lengths: &[usize]) {
    for &len in lengths {
        let start = squares.len();
        for j in 0..len {
            squares.push(vec![(start + (j + 1) % len, Elem::ONE)]);
        }
    }
}

fn assemble(field: Field, sparse: Vec<Vec<(usize, Elem)>>) -> Result<Algebra> {
    let d = sparse.len();
    check_dim(d)?;
    let squares = sparse
        .into_iter()
        .map(|entries| {
            let mut v = Vector::zeros(d);
            for (k, c) in entries {
                v.0[k] += c;
            }
            v
        })
        .collect();
    Ok(Algebra::new(field, squares)?.with_zero_table())
}

/// `A(s)`: chains `e_{i,1} → … → e_{i,s_i} → 0`.
pub fn build_a_s(s: &[usize]) -> Result<Algebra> {
    if s.is_empty() {
        return Err(Error::Shape("s must be non-empty".into()));
    }
    check_decreasing("s", s, 1)?;
    let mut sq = Vec::new();
    push_chains(&mut sq, s);
    assemble(Field::F2, sq)
}

/// `A_(s,t)`: nilpotent chains of lengths `s` plus cycles of lengths
/// `2^{t_i} q`, over a field `F ⊆ F_{2^{2^{t_1} q}}`.
pub fn build_a_st(s: &[usize], t: &[u32], q: u64, field: Field) -> Result<Algebra> {
    check_decreasing("s", s, 1)?;
    if t.is_empty() {
        return Err(Error::Shape("t must be non-empty".into()));
    }
    if t.windows(2).any(|w| w[0] < w[1]) {
        return Err(Error::Shape(format!("t must be weakly decreasing: {t:?}")));
    }
    if q == 0 || q % 2 == 0 {
        return Err(Error::Shape(format!("q must be odd, got {q}")));
    }
    let lengths: Vec<usize> = t
        .iter()
        .map(|&ti| 1usize.checked_shl(ti).and_then(|x| x.checked_mul(q as usize)))
        .collect::<Option<_>>()
        .ok_or_else(|| Error::Shape("cycle length overflows".into()))?;
    let top = lengths[0] as u64;
    if top % field.degree() as u64 != 0 {
        return Err(Error::IncompatibleField {
            field_degree: field.degree(),
            detail: format!("{field} is not a subfield of F_2^{top}"),
        });
    }
    let total: usize = s.iter().sum::<usize>() + lengths.iter().sum::<usize>();
    check_dim(total)?;
    let mut sq = Vec::new();
    push_chains(&mut sq, s);
    push_cycles(&mut sq, &lengths);
    assemble(field, sq)
}

/// Tail of length `n` feeding a cycle of length `p`:
/// `a_1 → … → a_n → b_1 → … → b_p → b_1`.
pub fn build_cycle_tail(p: usize, n: usize) -> Result<Algebra> {
    if p == 0 {
        return Err(Error::Shape("period must be >= 1".into()));
    }
    check_dim(n + p)?;
    let mut sq: Vec<Vec<(usize, Elem)>> = (0..n).map(|j| vec![(j + 1, Elem::ONE)]).collect();
    push_cycles(&mut sq, &[p]);
    assemble(Field::F2, sq)
}

/// Companion algebra `C_P`: `e_i² = e_{i+1}` for `i < n` and
/// `e_n² = Σ α_k e_{k+1}` for `P = X^n + Σ α_k X^k`.
pub fn build_companion(p: &PolyF) -> Result<Algebra> {
    let n = p.degree().unwrap_or(0);
    if n == 0 || !p.is_monic() {
        return Err(Error::Shape(format!("companion needs a monic polynomial of degree >= 1, got {p}")));
    }
    let mut sq: Vec<Vec<(usize, Elem)>> = (0..n - 1).map(|j| vec![(j + 1, Elem::ONE)]).collect();
    sq.push((0..n).map(|k| (k, p.coeff(k))).filter(|(_, c)| !c.is_zero()).collect());
    assemble(p.field, sq)
}

/// [`build_companion`] that refuses fields for which `P(V) = 0` fails,
/// i.e. `F_{2^m}` with `m ∤ σ(P)`.
pub fn build_companion_checked(p: &PolyF) -> Result<Algebra> {
    if let Ok(s) = p.striction() {
        let m = p.field.degree() as usize;
        if s.sigma % m != 0 {
            return Err(Error::IncompatibleField {
                field_degree: m as u32,
                detail: format!("{m} does not divide σ({p}) = {}", s.sigma),
            });
        }
    }
    build_companion(p)
}

/// The data of a train-algebra canonical form: nilpotent chain lengths
/// (the `X^v` part) and companion blocks `C_D` with multiplicities.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TrainSelection {
    pub valuations: Vec<usize>,
    pub blocks: Vec<(Poly2, usize)>,
}

impl TrainSelection {
    /// The annihilating polynomial promised by the construction:
    /// `X^{max v} · lcm(D)`.
    pub fn annihilator(&self) -> Poly2 {
        let v = self.valuations.iter().copied().max().unwrap_or(0);
        self.blocks
            .iter()
            .fold(Poly2::monomial(v), |acc, (d, _)| acc.lcm(d))
    }
}

pub fn build_train_algebra(sel: &TrainSelection, field: Field) -> Result<Algebra> {
    if sel.valuations.contains(&0) {
        return Err(Error::Shape("chain lengths must be >= 1".into()));
    }
    let m = field.degree() as usize;
    for (d, mult) in &sel.blocks {
        if *mult == 0 {
            return Err(Error::Shape(format!("multiplicity of {d} must be >= 1")));
        }
        if !d.constant_term() || d.degree().unwrap_or(0) == 0 {
            return Err(Error::Shape(format!("divisor {d} must have degree >= 1 and D(0) = 1")));
        }
        let sigma = d.striction()?.sigma;
        if sigma % m != 0 {
            return Err(Error::IncompatibleField {
                field_degree: m as u32,
                detail: format!("{m} does not divide σ({d}) = {sigma}"),
            });
        }
    }
    let mut sq = Vec::new();
    push_chains(&mut sq, &sel.valuations);
    for (d, mult) in &sel.blocks {
        let n = d.degree().expect("checked");
        for _ in 0..*mult {
            let start = sq.len();
            for j in 0..n - 1 {
                sq.push(vec![(start + j + 1, Elem::ONE)]);
            }
            sq.push((0..n).filter(|&k| d.coeff(k)).map(|k| (start + k, Elem::ONE)).collect());
        }
    }
    assemble(field, sq)
}

/// `(s, t, q, r)` classifying an ultimately periodic algebra over `F_2`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CanonicalInvariants {
    pub s: Vec<usize>,
    pub t: Vec<u32>,
    pub q: u64,
    pub r: u32,
}

pub fn periodic_invariants(a: &Algebra) -> Result<CanonicalInvariants> {
    require_f2(a)?;
    let (n, p) = match operator_profile(a)? {
        PeriodicityProfile::UltimatelyPeriodic { preperiod, period } => (preperiod, period),
        other => return Err(Error::NotPeriodic(other.label())),
    };
    let r = p.trailing_zeros();
    let q = p >> r;
    let base = Poly2::x_pow_plus_one(q as usize);
    let mut s = Vec::new();
    let mut t = Vec::new();
    for f in invariant_factors(a.operator().m2()) {
        let v = f.valuation().expect("nonzero");
        if v > 0 {
            s.push(v);
        }
        let g = f.exact_div(&Poly2::monomial(v));
        if g.is_one() {
            continue;
        }
        let k = (0..=r + 8)
            .find(|&k| base.pow(1u64 << k) == g)
            .ok_or_else(|| Error::UnexpectedFactorShape {
                factor: g.to_string(),
                q,
            })?;
        t.push(k);
    }
    s.sort_unstable_by(|x, y| y.cmp(x));
    t.sort_unstable_by(|x, y| y.cmp(x));
    let dim: u64 = s.iter().sum::<usize>() as u64 + t.iter().map(|&k| 1u64 << k).sum::<u64>() * q;
    if dim != a.dim() as u64 || t.first() != Some(&r) || s.first().copied().unwrap_or(0) != n {
        return Err(Error::InvariantViolation(format!(
            "invariants s={s:?} t={t:?} q={q} r={r} inconsistent with profile ({n},{p}) and dim {}",
            a.dim()
        )));
    }
    Ok(CanonicalInvariants { s, t, q, r })
}

/// Verdict of the semi-isomorphism test.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "verdict", rename_all = "snake_case")]
pub enum SemiIso {
    Yes,
    No,
    /// Over a proper extension only similarity after restriction of
    /// scalars is checked, which is necessary but not sufficient.
    NecessaryConditionsOnly { passed: bool },
}

pub fn semi_isomorphic(a: &Algebra, b: &Algebra) -> Result<SemiIso> {
    if a.field() != b.field() {
        return Err(Error::FieldMismatch);
    }
    if a.dim() != b.dim() {
        return Err(Error::DimensionMismatch {
            expected: a.dim(),
            found: b.dim(),
        });
    }
    let same = invariant_factors(a.operator().m2()) == invariant_factors(b.operator().m2());
    Ok(if a.field().is_prime() {
        if same {
            SemiIso::Yes
        } else {
            SemiIso::No
        }
    } else {
        SemiIso::NecessaryConditionsOnly { passed: same }
    })
}

/// For nilpotent `V`: a finite set `ℱ` whose iterates span the algebra
/// over `F_2`, chosen greedily from the restricted basis by decreasing
/// nilpotency height.
pub fn nilpotent_generators(a: &Algebra) -> Result<Vec<Vector>> {
    if !operator_profile(a)?.is_nilpotent() {
        return Err(Error::NotNilpotent);
    }
    let p = a.field().degree();
    let op = a.operator();
    let m = op.m2();
    let n = m.rows();
    let height = |v: &crate::bits::BitVec| {
        let mut w = v.clone();
        let mut h = 0;
        while !w.is_zero() {
            w = m.apply(&w);
            h += 1;
        }
        h
    };
    let mut candidates: Vec<(usize, usize)> =
        (0..n).map(|i| (height(&crate::bits::BitVec::unit(n, i)), i)).collect();
    candidates.sort_by(|x, y| y.0.cmp(&x.0).then(x.1.cmp(&y.1)));
    let mut span = Eliminator::span_only(n);
    let mut gens = Vec::new();
    for (_, i) in candidates {
        let e = crate::bits::BitVec::unit(n, i);
        if span.contains(&e) {
            continue;
        }
        let mut w = e.clone();
        while !w.is_zero() {
            let _ = span.insert(&w);
            w = m.apply(&w);
        }
        gens.push(Vector::from_bits(&e, p));
        if span.rank() == n {
            break;
        }
    }
    Ok(gens)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bits::BitVec;

    /// Invariant factors rebuilt from kernel dimensions of `f(M)^k` for the
    /// irreducible factors `f` of the characteristic polynomial.
    fn oracle(m: &BitMatrix) -> Vec<Poly2> {
        let n = m.rows();
        let mu = crate::dynamics::minimal_polynomial(m);
        let mut blocks: Vec<Vec<Poly2>> = Vec::new();
        for (f, e) in mu.factor().unwrap() {
            let fm = f.eval_with(m, BitMatrix::zeros(n, n), BitMatrix::identity(n), |a, b| a.add(b), |a, b| a.mul(b));
            let dims: Vec<usize> = (0..=e as u64 + 1).map(|k| n - fm.pow(k).rank()).collect();
            let deg = f.degree().unwrap();
            // Number of Jordan-type blocks of size >= k is (dims[k]-dims[k-1])/deg.
            let mut sizes = Vec::new();
            for k in 1..=e as usize {
                let ge_k = (dims[k] - dims[k - 1]) / deg;
                let ge_k1 = (dims[k + 1] - dims[k]) / deg;
                for _ in 0..ge_k - ge_k1 {
                    sizes.push(f.pow(k as u64));
                }
            }
            sizes.sort_by_key(|p| std::cmp::Reverse(p.degree()));
            blocks.push(sizes);
        }
        let count = blocks.iter().map(|b| b.len()).max().unwrap_or(0);
        let mut out: Vec<Poly2> = (0..count)
            .map(|i| blocks.iter().fold(Poly2::one(), |acc, b| match b.get(i) {
                Some(p) => acc.mul(p),
                None => acc,
            }))
            .collect();
        out.reverse();
        out
    }

    fn mat(rows: &[&str]) -> BitMatrix {
        let n = rows[0].len();
        let rows: Vec<BitVec> = rows
            .iter()
            .map(|r| BitVec::from_bools(&r.bytes().map(|b| b == b'1').collect::<Vec<_>>()))
            .collect();
        BitMatrix::from_rows(n, &rows)
    }

    #[test]
    fn small_examples() {
        // Chains of lengths 2 and 1.
        let m = mat(&["000", "100", "000"]);
        assert_eq!(invariant_factors(&m), vec![Poly2::x(), Poly2::monomial(2)]);
        assert_eq!(
            invariant_factors(&BitMatrix::identity(2)),
            vec![Poly2::from_u64(0b11), Poly2::from_u64(0b11)]
        );
        let c = crate::generators::remark_algebra();
        assert_eq!(invariant_factors(c.operator().m2()), vec![Poly2::from_u64(0b1101)]);
    }

    #[test]
    fn smith_form_matches_kernel_oracle() {
        for seed in 0..150 {
            let a = crate::generators::random_algebra(Field::F2, 1 + seed as usize % 6, seed, crate::generators::AlgebraKind::Evolution).unwrap();
            let m = a.operator().m2().clone();
            assert_eq!(invariant_factors(&m), oracle(&m), "seed {seed}");
        }
    }

    #[test]
    fn canonical_examples() {
        assert_eq!(nilpotent_invariants(&build_a_s(&[2, 1]).unwrap()).unwrap(), vec![2, 1]);
        let r4 = crate::generators::rule90(4).unwrap();
        assert_eq!(nilpotent_invariants(&r4).unwrap(), vec![2, 2]);
        let zero = Algebra::new(Field::F2, vec![Vector::zeros(1)]).unwrap();
        assert_eq!(nilpotent_invariants(&zero).unwrap(), vec![1]);
        let c4 = crate::generators::cyclic(4).unwrap();
        assert_eq!(
            periodic_invariants(&c4).unwrap(),
            CanonicalInvariants { s: vec![], t: vec![2], q: 1, r: 2 }
        );
        let r3 = crate::generators::rule90(3).unwrap();
        assert_eq!(
            periodic_invariants(&r3).unwrap(),
            CanonicalInvariants { s: vec![1], t: vec![0, 0], q: 1, r: 0 }
        );
        let st = build_a_st(&[1], &[0], 3, Field::F2).unwrap();
        assert_eq!(
            periodic_invariants(&st).unwrap(),
            CanonicalInvariants { s: vec![1], t: vec![0], q: 3, r: 0 }
        );
        let ct = build_cycle_tail(3, 2).unwrap();
        assert_eq!(
            operator_profile(&ct).unwrap(),
            PeriodicityProfile::UltimatelyPeriodic { preperiod: 2, period: 3 }
        );
    }

    #[test]
    fn companion_is_remark_algebra() {
        let p = PolyF::from_poly2(Field::F2, &Poly2::from_u64(0b1101));
        assert_eq!(build_companion(&p).unwrap(), crate::generators::remark_algebra());
        let f4 = Field::new(2, None).unwrap();
        let q = PolyF::from_poly2(f4, &Poly2::from_u64(0b1101));
        assert!(matches!(build_companion_checked(&q), Err(Error::IncompatibleField { .. })));
    }

    #[test]
    fn train_algebra_examples() {
        let sel = TrainSelection {
            valuations: vec![1],
            blocks: vec![(Poly2::from_u64(0b111), 1)],
        };
        let a = build_train_algebra(&sel, Field::F2).unwrap();
        assert_eq!(a.dim(), 3);
        assert!(crate::dynamics::verify_identity_f2(&a, &Poly2::from_u64(0b1110)).holds);
        let f4 = Field::new(2, None).unwrap();
        assert!(matches!(build_train_algebra(&sel, f4), Err(Error::IncompatibleField { .. })));
        let id = TrainSelection {
            valuations: vec![],
            blocks: vec![(Poly2::from_u64(0b11), 2)],
        };
        let b = build_train_algebra(&id, Field::F2).unwrap();
        assert_eq!(b.squares(), &[Vector::unit(2, 0), Vector::unit(2, 1)]);
    }

    #[test]
    fn semi_iso_examples() {
        let a = build_a_s(&[2, 1]).unwrap();
        let b = build_a_s(&[3]).unwrap();
        assert_eq!(semi_isomorphic(&a, &b).unwrap(), SemiIso::No);
        assert_eq!(semi_isomorphic(&a, &a).unwrap(), SemiIso::Yes);
        let f4 = Field::new(2, None).unwrap();
        let c = build_a_st(&[], &[1], 1, f4).unwrap();
        assert_eq!(
            semi_isomorphic(&c, &c).unwrap(),
            SemiIso::NecessaryConditionsOnly { passed: true }
        );
    }

    #[test]
    fn generators_span() {
        let a = build_a_s(&[3, 2, 2]).unwrap();
        let gens = nilpotent_generators(&a).unwrap();
        assert_eq!(gens.len(), 3);
    }
}
