//! The paper's worked examples, replayed against the oracles.
//!
//! Each row compares a claimed value with a computed one. `Pass` means the
//! claim is confirmed. `Flag` means the claimed identity holds but the
//! claimed minimal value differs from the computed one (both are kept).
//! `Fail` means the claim is false as an identity.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::algebra::{Algebra, Vector};
use crate::canonical::{build_companion, build_companion_checked};
use crate::dynamics::{
    brute_force_profile, operator_profile, orbit, quasi_constant_check, train_polynomial,
    verify_identity, verify_identity_f2, PeriodicityProfile,
};
use crate::error::{Error, Result};
use crate::field::{Elem, Field};
use crate::generators::{
    cyclic, dynsys_algebra, evolution_nilpotency_check, f4_infinity_system,
    quadratic_map, remark_algebra, rule150, rule90, DynSys,
};
use crate::baric::{
    baric_quasi_constant, bernstein_profile, build_weighted_as, check_weight,
    weighted_train_identity,
};
use crate::poly2::{compatible_structure, Poly2};
use crate::polyf::PolyF;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "UPPERCASE")]
pub enum Status {
    Pass,
    Flag,
    Fail,
}

impl fmt::Display for Status {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Status::Pass => "PASS",
            Status::Flag => "FLAG",
            Status::Fail => "FAIL",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CorpusRow {
    pub id: String,
    pub claim: String,
    pub paper: String,
    pub oracle: String,
    pub status: Status,
    pub note: String,
}

impl CorpusRow {
    fn new(id: &str, claim: &str, paper: impl ToString, oracle: impl ToString, ok: bool) -> Self {
        CorpusRow {
            id: id.to_string(),
            claim: claim.to_string(),
            paper: paper.to_string(),
            oracle: oracle.to_string(),
            status: if ok { Status::Pass } else { Status::Fail },
            note: String::new(),
        }
    }

    fn with_note(mut self, note: impl Into<String>) -> Self {
        self.note = note.into();
        self
    }
}

/// A claimed profile in the paper's `(n, p)` notation.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Claim {
    Nilpotent(usize),
    Periodic(usize, u64),
}

impl fmt::Display for Claim {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Claim::Nilpotent(n) => write!(f, "nilpotent {n}"),
            Claim::Periodic(n, p) => write!(f, "({n},{p})"),
        }
    }
}

impl Claim {
    fn identity(self) -> Poly2 {
        match self {
            Claim::Nilpotent(n) => Poly2::monomial(n),
            Claim::Periodic(n, p) => Poly2::monomial(n + p as usize).add(&Poly2::monomial(n)),
        }
    }

    fn matches(self, prof: &PeriodicityProfile) -> bool {
        match (self, prof) {
            (Claim::Nilpotent(n), PeriodicityProfile::Nilpotent { degree }) => n == *degree,
            (Claim::Periodic(n, p), PeriodicityProfile::UltimatelyPeriodic { preperiod, period }) => {
                n == *preperiod && p == *period
            }
            _ => false,
        }
    }
}

fn show(prof: &PeriodicityProfile) -> String {
    match prof {
        PeriodicityProfile::Nilpotent { degree } => format!("nilpotent {degree}"),
        other => format!("({},{})", other.preperiod(), other.period()),
    }
}

/// Compares a claimed profile with the min-poly profile (itself checked
/// against brute force). The claim's identity is tested literally; if it
/// fails, the swapped reading `(p, n)` is tried before reporting `Fail`.
fn profile_row(id: &str, claim: &str, a: &Algebra, paper: Claim) -> Result<CorpusRow> {
    let prof = operator_profile(a)?;
    let brute = brute_force_profile(a)?;
    if prof != brute {
        return Ok(CorpusRow::new(id, claim, paper, show(&prof), false)
            .with_note(format!("brute force disagrees: {}", show(&brute))));
    }
    let holds = verify_identity_f2(a, &paper.identity()).holds;
    let mut row = CorpusRow::new(id, claim, paper, show(&prof), holds);
    if holds && !paper.matches(&prof) {
        row.status = Status::Flag;
        row.note = format!("{} holds but is not minimal", paper.identity());
    } else if !holds {
        if let Claim::Periodic(n, p) = paper {
            let swapped = Claim::Periodic(p as usize, n as u64);
            if verify_identity_f2(a, &swapped.identity()).holds {
                row.status = Status::Flag;
                row.note = format!("holds with components swapped: {swapped}");
            }
        }
    }
    Ok(row)
}

fn identity_row(id: &str, claim: &str, a: &Algebra, poly: &Poly2) -> CorpusRow {
    let check = verify_identity_f2(a, poly);
    let oracle = match &check.witness {
        None => "holds".to_string(),
        Some(x) => format!("fails at {x}"),
    };
    CorpusRow::new(id, claim, format!("{poly} = 0"), oracle, check.holds)
}

fn element_row(id: &str, a: &Algebra, x: &[u8], paper: (usize, usize)) -> Result<CorpusRow> {
    let x = Vector::from_bits01(x);
    let o = orbit(a, &x)?;
    let claim = format!("{x} is ({},{})-periodic", paper.0, paper.1);
    Ok(CorpusRow::new(
        id,
        &claim,
        format!("({},{})", paper.0, paper.1),
        format!("({},{})", o.preperiod, o.period),
        (o.preperiod, o.period) == paper,
    ))
}

fn p(bits: u64) -> Poly2 {
    Poly2::from_u64(bits)
}

fn show_chains(chains: &[Vec<Vec<Poly2>>]) -> String {
    let blocks: Vec<String> = chains
        .iter()
        .map(|block| {
            let cs: Vec<String> = block
                .iter()
                .map(|c| {
                    let fs: Vec<String> = c.iter().map(|f| f.to_string()).collect();
                    format!("{{{}}}", fs.join(", "))
                })
                .collect();
            cs.join(" ")
        })
        .collect();
    format!("[{}]", blocks.join("; "))
}

fn show_partition(part: &[Vec<usize>]) -> String {
    let blocks: Vec<String> = part
        .iter()
        .map(|b| {
            let ix: Vec<String> = b.iter().map(|i| (i + 1).to_string()).collect();
            format!("{{{}}}", ix.join(","))
        })
        .collect();
    format!("{{{}}}", blocks.join(","))
}

fn compat_row(
    id: &str,
    t: &Poly2,
    field_degree: u32,
    partition: Vec<Vec<usize>>,
    chains: Vec<Vec<Vec<Poly2>>>,
) -> Result<CorpusRow> {
    let s = compatible_structure(t, field_degree)?;
    let claim = format!("F_{} partition and subdivision of {t}", 1u32 << field_degree);
    let paper = format!("{} {}", show_partition(&partition), show_chains(&chains));
    let oracle = format!("{} {}", show_partition(&s.partition), show_chains(&s.subdivisions));
    Ok(CorpusRow::new(id, &claim, paper, oracle, s.partition == partition && s.subdivisions == chains))
}

fn factor_row(id: &str, t: &Poly2, paper: Vec<(Poly2, u32)>) -> Result<CorpusRow> {
    let got = t.factor()?;
    let fmt = |fs: &[(Poly2, u32)]| {
        let parts: Vec<String> = fs.iter().map(|(f, e)| format!("({f})^{e}")).collect();
        parts.join(" ")
    };
    Ok(CorpusRow::new(id, &format!("factorization of {t}"), fmt(&paper), fmt(&got), got == paper))
}

fn striction_row(id: &str, t: &Poly2, sigma: usize) -> Result<CorpusRow> {
    let got = t.striction()?.sigma;
    Ok(CorpusRow::new(id, &format!("σ({t})"), sigma, got, got == sigma))
}

fn dynsys_claim_row(id: &str, claim: &str, d: &DynSys, paper: Claim) -> Result<CorpusRow> {
    let (a, fp) = dynsys_algebra(d);
    let mut row = profile_row(id, claim, &a, paper)?;
    let prof = operator_profile(&a)?;
    if (prof.preperiod(), prof.period()) != (fp.max_tail, fp.cycle_lcm) {
        row.status = Status::Fail;
        row.note = format!(
            "functional graph gives ({},{}) but the algebra gives {}",
            fp.max_tail,
            fp.cycle_lcm,
            show(&prof)
        );
    }
    Ok(row)
}

fn companion_row(id: &str, field_degree: u32, expect_holds: bool) -> Result<CorpusRow> {
    let field = Field::new(field_degree, None)?;
    let t = Poly2::from_exponents(&[12, 10, 4, 0]);
    let poly = PolyF::from_poly2(field, &t);
    let a = build_companion(&poly)?;
    let check = verify_identity(&a, &poly)?;
    let claim = format!("companion of {t} over {field} satisfies T(V) = 0");
    let paper = if expect_holds { "holds" } else { "fails" };
    let oracle = match &check.witness {
        None => "holds".to_string(),
        Some(x) => format!("fails at {x}"),
    };
    let mut row = CorpusRow::new(id, &claim, paper, oracle, check.holds == expect_holds);
    // The checked builder must agree with the divisibility condition.
    if build_companion_checked(&poly).is_ok() != expect_holds {
        row.status = Status::Fail;
        row.note = "checked builder disagrees with the identity".into();
    }
    Ok(row)
}

/// `x + 1/x` on `F_4 ∪ {∞}`, points indexed `0, 1, α, α², ∞`.
fn f4_infinity_from_field() -> Result<DynSys> {
    let f = Field::new(2, None)?;
    let inf = 4;
    let map = (0..5u16)
        .map(|i| {
            if i == 0 || i == inf {
                return Ok(inf as usize);
            }
            let x = Elem(i);
            let y = f.add(x, f.inv(x)?);
            Ok(y.0 as usize)
        })
        .collect::<Result<Vec<_>>>()?;
    DynSys::new(map)
}

type CaseFn = fn(&str) -> Result<CorpusRow>;

fn cases() -> Vec<(&'static str, CaseFn)> {
    vec![
        ("cyclic4/profile", |id| {
            profile_row(id, "V(e_i) = e_{i+1} cyclically is (0,4)-periodic", &cyclic(4)?, Claim::Periodic(0, 4))
        }),
        ("cyclic4/element/e1", |id| element_row(id, &cyclic(4)?, &[1, 0, 0, 0], (0, 4))),
        ("cyclic4/element/e1+e2", |id| element_row(id, &cyclic(4)?, &[1, 1, 0, 0], (0, 4))),
        ("cyclic4/element/e1+e3", |id| element_row(id, &cyclic(4)?, &[1, 0, 1, 0], (0, 2))),
        ("cyclic4/element/e1+e2+e3+e4", |id| element_row(id, &cyclic(4)?, &[1, 1, 1, 1], (0, 1))),
        ("dynsys/mod13/table", |id| {
            let d = quadratic_map(2, 13)?;
            let listed = [(4, 5), (9, 5), (5, 1), (8, 1), (1, 3), (3, 11), (10, 11), (11, 6), (2, 6), (6, 12), (7, 12), (12, 3)];
            let ok = listed.iter().all(|&(x, y)| d.apply(x) == y);
            Ok(CorpusRow::new(id, "x² + 2 mod 13 values", "as listed", if ok { "as listed" } else { "differs" }, ok))
        }),
        ("dynsys/mod13/identity", |id| {
            let d = quadratic_map(2, 13)?;
            let (a, _) = dynsys_algebra(&d);
            let ok = d.powers_agree(8, 4);
            let mut row = identity_row(id, "f^8 = f^4", &a, &Poly2::from_exponents(&[8, 4]));
            row.status = if ok && row.status == Status::Pass { Status::Pass } else { Status::Fail };
            Ok(row)
        }),
        ("dynsys/mod13/profile", |id| {
            dynsys_claim_row(id, "algebra of x² + 2 mod 13 is (4,4)-periodic", &quadratic_map(2, 13)?, Claim::Periodic(4, 4))
        }),
        ("dynsys/f4-infinity/table", |id| {
            let ok = f4_infinity_from_field()? == f4_infinity_system();
            Ok(CorpusRow::new(id, "f(α) = f(α²) = 1, f(1) = 0, f(0) = f(∞) = ∞", "as listed", if ok { "as listed" } else { "differs" }, ok))
        }),
        ("dynsys/f4-infinity/profile", |id| {
            dynsys_claim_row(id, "x + 1/x on F_4 ∪ {∞} is (1,3)-periodic", &f4_infinity_system(), Claim::Periodic(1, 3))
        }),
        ("rule90/ring3/profile", |id| profile_row(id, "rule 90, n = 3, is (1,2)-periodic", &rule90(3)?, Claim::Periodic(1, 2))),
        ("rule90/ring4/profile", |id| profile_row(id, "rule 90, n = 4, is nilpotent of degree 4", &rule90(4)?, Claim::Nilpotent(4))),
        ("rule90/ring6/profile", |id| profile_row(id, "rule 90, n = 6, is (2,4)-periodic", &rule90(6)?, Claim::Periodic(2, 4))),
        ("rule90/ring8/profile", |id| profile_row(id, "rule 90, n = 8, is nilpotent of degree 8", &rule90(8)?, Claim::Nilpotent(8))),
        ("rule90/ring12/profile", |id| profile_row(id, "rule 90, n = 12, is (4,8)-periodic", &rule90(12)?, Claim::Periodic(4, 8))),
        ("rule90/ring5/identity", |id| Ok(identity_row(id, "V^5 = V^3 + V", &rule90(5)?, &Poly2::from_exponents(&[5, 3, 1])))),
        ("rule90/ring7/identity", |id| Ok(identity_row(id, "V^7 = V^5 + V", &rule90(7)?, &Poly2::from_exponents(&[7, 5, 1])))),
        ("rule90/ring13/identity", |id| {
            Ok(identity_row(id, "V^13 = V^11 + V^9 + V^3 + V", &rule90(13)?, &Poly2::from_exponents(&[13, 11, 9, 3, 1])))
        }),
        ("rule90/ring5/train", |id| {
            let t = train_polynomial(&rule90(5)?)?.poly.to_poly2().expect("F_2 coefficients");
            let target = Poly2::from_exponents(&[5, 3, 1]);
            Ok(CorpusRow::new(id, "train polynomial divides X^5+X^3+X", target.to_string(), t.to_string(), t.divides(&target)))
        }),
        ("rule150/ring3/profile", |id| profile_row(id, "rule 150, n = 3, is (2,1)-periodic", &rule150(3)?, Claim::Periodic(2, 1))),
        ("rule150/ring4/profile", |id| profile_row(id, "rule 150, n = 4, is (0,4)-periodic", &rule150(4)?, Claim::Periodic(0, 4))),
        ("rule150/ring6/profile", |id| profile_row(id, "rule 150, n = 6, is (4,2)-periodic", &rule150(6)?, Claim::Periodic(4, 2))),
        ("rule150/ring8/profile", |id| profile_row(id, "rule 150, n = 8, is (0,8)-periodic", &rule150(8)?, Claim::Periodic(0, 8))),
        ("rule150/ring5/identity", |id| {
            Ok(identity_row(id, "T(V) = 0, T = X^5-X^4-X^3-X^2-X-1", &rule150(5)?, &Poly2::from_exponents(&[5, 4, 3, 2, 1, 0])))
        }),
        ("rule150/ring7/identity", |id| {
            Ok(identity_row(id, "T(V) = 0, T = X^7-X^6-X^3-X^2-X-1", &rule150(7)?, &Poly2::from_exponents(&[7, 6, 3, 2, 1, 0])))
        }),
        ("remark/identity", |id| Ok(identity_row(id, "V^3 + V^2 + id = 0", &remark_algebra(), &p(0b1101)))),
        ("remark/identity-8", |id| Ok(identity_row(id, "V^8 = V", &remark_algebra(), &Poly2::from_exponents(&[8, 1])))),
        ("remark/train", |id| {
            let t = train_polynomial(&remark_algebra())?.poly.to_poly2().expect("F_2 coefficients");
            Ok(CorpusRow::new(id, "train polynomial of degree 3", "X^3+X^2+1", t.to_string(), t == p(0b1101)))
        }),
        ("remark/order", |id| {
            let o = p(0b1101).order_mod()?;
            Ok(CorpusRow::new(id, "X^3+X^2+1 divides X^8 - X", 7, o, o == 7))
        }),
        ("remark/profile", |id| profile_row(id, "the remark algebra is (1,7)-periodic", &remark_algebra(), Claim::Periodic(1, 7))),
        ("striction/ex1", |id| striction_row(id, &Poly2::from_exponents(&[12, 10, 4, 0]), 2)),
        ("striction/ex2", |id| striction_row(id, &Poly2::x_pow_plus_one(6), 6)),
        ("striction/ex3", |id| striction_row(id, &Poly2::from_exponents(&[12, 9, 3, 0]), 3)),
        ("factor/ex1", |id| {
            factor_row(id, &Poly2::from_exponents(&[12, 10, 4, 0]), vec![(p(0b11), 2), (p(0b111), 2), (p(0b1101), 2)])
        }),
        ("factor/ex2", |id| factor_row(id, &Poly2::x_pow_plus_one(6), vec![(p(0b11), 2), (p(0b111), 2)])),
        ("factor/ex3", |id| {
            factor_row(id, &Poly2::from_exponents(&[12, 9, 3, 0]), vec![(p(0b11), 2), (p(0b111), 2), (p(0b1001001), 1)])
        }),
        ("compat/ex1/F2", |id| {
            let (f1, f2, f3) = (p(0b11), p(0b111), p(0b1101));
            compat_row(
                id,
                &Poly2::from_exponents(&[12, 10, 4, 0]),
                1,
                vec![vec![0], vec![1], vec![2]],
                vec![
                    vec![vec![f1.clone(), f1.square()]],
                    vec![vec![f2.clone(), f2.square()]],
                    vec![vec![f3.clone(), f3.square()]],
                ],
            )
        }),
        ("compat/ex1/F4", |id| {
            compat_row(
                id,
                &Poly2::from_exponents(&[12, 10, 4, 0]),
                2,
                vec![vec![0], vec![1], vec![2]],
                vec![vec![vec![p(0b101)]], vec![vec![p(0b10101)]], vec![vec![p(0b1010001)]]],
            )
        }),
        ("compat/ex2/F2", |id| {
            let (f1, f2) = (p(0b11), p(0b111));
            compat_row(
                id,
                &Poly2::x_pow_plus_one(6),
                1,
                vec![vec![0], vec![1]],
                vec![vec![vec![f1.clone(), f1.square()]], vec![vec![f2.clone(), f2.square()]]],
            )
        }),
        ("compat/ex2/F4", |id| {
            compat_row(id, &Poly2::x_pow_plus_one(6), 2, vec![vec![0], vec![1]], vec![vec![vec![p(0b101)]], vec![vec![p(0b10101)]]])
        }),
        ("compat/ex2/F8", |id| {
            compat_row(id, &Poly2::x_pow_plus_one(6), 3, vec![vec![0, 1]], vec![vec![vec![p(0b1001), p(0b1000001)]]])
        }),
        ("compat/ex3/F2", |id| {
            let (f1, f2) = (p(0b11), p(0b111));
            compat_row(
                id,
                &Poly2::from_exponents(&[12, 9, 3, 0]),
                1,
                vec![vec![0], vec![1], vec![2]],
                vec![
                    vec![vec![f1.clone(), f1.square()]],
                    vec![vec![f2.clone(), f2.square()]],
                    vec![vec![p(0b1001001)]],
                ],
            )
        }),
        ("compat/ex3/F8", |id| {
            compat_row(
                id,
                &Poly2::from_exponents(&[12, 9, 3, 0]),
                3,
                vec![vec![0, 1], vec![2]],
                vec![vec![vec![p(0b1001), p(0b1000001)]], vec![vec![p(0b1001001)]]],
            )
        }),
        ("companion/F2", |id| companion_row(id, 1, true)),
        ("companion/F4", |id| companion_row(id, 2, true)),
        ("companion/F8", |id| companion_row(id, 3, false)),
        ("quasi-constant/F2-line", |id| {
            let a = Algebra::new(Field::F2, vec![Vector::unit(1, 0)])?;
            let got = quasi_constant_check(&a);
            let ok = got == Some((1, Vector::unit(1, 0)));
            Ok(CorpusRow::new(id, "F_2⟨e⟩, e² = e, is quasi-constant of degree 1", "degree 1", format!("{got:?}"), ok))
        }),
        ("quasi-constant/F4-line", |id| {
            let a = Algebra::new(Field::new(2, None)?, vec![Vector::unit(1, 0)])?;
            let got = quasi_constant_check(&a);
            Ok(CorpusRow::new(id, "quasi-constant algebras need F = F_2", "none over F_4", format!("{got:?}"), got.is_none()))
        }),
        ("evolution/rule90-ring4", |id| {
            let a = rule90(4)?;
            let got = evolution_nilpotency_check(&a)?;
            let ok = got && operator_profile(&a)?.is_nilpotent();
            Ok(CorpusRow::new(id, "S S^⊙2 ⋯ = 0 detects nilpotency", "nilpotent", got, ok))
        }),
        ("evolution/cyclic4", |id| {
            let got = evolution_nilpotency_check(&cyclic(4)?)?;
            Ok(CorpusRow::new(id, "a (0,4)-periodic algebra is not nilpotent", "not nilpotent", got, !got))
        }),
        ("baric/weighted-a1", |id| {
            let b = check_weight(&build_weighted_as(&[1], Field::F2)?)?;
            let qc = baric_quasi_constant(&b)?;
            let bp = bernstein_profile(&b)?;
            let wt = weighted_train_identity(&b)?;
            let oracle = format!(
                "quasi-constant ({}, {}), B({},{}), train degree {}",
                qc.degree, qc.idempotent, bp.n, bp.p, wt.degree
            );
            let ok = qc.degree == 1 && qc.idempotent == Vector::unit(2, 0) && (bp.n, bp.p) == (1, 1) && wt.degree == 2;
            Ok(CorpusRow::new(id, "weighted A(1): e² = e, z² = 0", "quasi-constant (1, e)", oracle, ok))
        }),
    ]
}

/// Evaluates every row (in parallel when enabled), sorted by id.
pub fn run_corpus() -> Vec<CorpusRow> {
    let cases = cases();
    let mut rows = crate::par::map(&cases, |(id, f)| {
        f(id).unwrap_or_else(|e: Error| {
            CorpusRow::new(id, "evaluation", "-", format!("error: {e}"), false)
        })
    });
    rows.sort_by(|a, b| a.id.cmp(&b.id));
    rows
}

/// Number of rows with each status: `(pass, flag, fail)`.
pub fn tally(rows: &[CorpusRow]) -> (usize, usize, usize) {
    rows.iter().fold((0, 0, 0), |(p, f, x), r| match r.status {
        Status::Pass => (p + 1, f, x),
        Status::Flag => (p, f + 1, x),
        Status::Fail => (p, f, x + 1),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn corpus_has_no_failures() {
        let rows = run_corpus();
        for r in &rows {
            assert_ne!(r.status, Status::Fail, "{r:?}");
        }
        let ids: Vec<&str> = rows.iter().map(|r| r.id.as_str()).collect();
        let mut sorted = ids.clone();
        sorted.sort();
        assert_eq!(ids, sorted);
    }

    #[test]
    fn known_discrepancies_are_flagged() {
        let rows = run_corpus();
        let get = |id: &str| rows.iter().find(|r| r.id == id).unwrap();
        let r = get("rule90/ring3/profile");
        assert_eq!((r.status, r.paper.as_str(), r.oracle.as_str()), (Status::Flag, "(1,2)", "(1,1)"));
        assert_eq!(get("rule90/ring4/profile").oracle, "nilpotent 2");
        assert_eq!(get("dynsys/mod13/profile").oracle, "(3,4)");
        assert_eq!(get("remark/profile").oracle, "(0,7)");
        let f4 = get("dynsys/f4-infinity/profile");
        assert_eq!((f4.status, f4.oracle.as_str()), (Status::Flag, "(3,1)"));
        assert!(f4.note.contains("swapped"));
        assert_eq!(get("rule90/ring13/identity").status, Status::Pass);
    }
}
