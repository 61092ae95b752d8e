//! Algebras given by structure constants, and their evolution operator.
//!
//! Only the squares `e_i²` matter for `V`: in characteristic 2 the cross
//! terms of `(Σ λ_i e_i)²` come with a factor 2, so
//! `V(Σ λ_i e_i) = Σ λ_i² e_i²`. The full table is optional and only used
//! for weights and for debug cross-checks.

use std::fmt;
use std::sync::OnceLock;

use serde::{Deserialize, Serialize};

use crate::bits::{BitMatrix, BitVec};
use crate::error::{Error, Result};
use crate::field::{Elem, Field, FieldSpec};
use crate::fmatrix::FMatrix;

/// Largest supported algebra dimension.
pub const MAX_DIM: usize = 64;

/// Coordinates of an algebra element in the algebra's basis.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Vector(pub Vec<Elem>);

impl Vector {
    pub fn zeros(d: usize) -> Self {
        Vector(vec![Elem::ZERO; d])
    }

    /// Basis vector `e_{i+1}` (0-based `i`).
    pub fn unit(d: usize, i: usize) -> Self {
        let mut v = Vector::zeros(d);
        v.0[i] = Elem::ONE;
        v
    }

    /// 0/1 coordinates from a bit pattern, lowest index first.
    pub fn from_bits01(bits: &[u8]) -> Self {
        Vector(bits.iter().map(|&b| Elem(b as u16)).collect())
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|c| c.is_zero())
    }

    pub fn add(&self, other: &Vector) -> Vector {
        debug_assert_eq!(self.dim(), other.dim());
        Vector(self.0.iter().zip(&other.0).map(|(&a, &b)| a + b).collect())
    }

    pub fn add_assign(&mut self, other: &Vector) {
        for (a, &b) in self.0.iter_mut().zip(&other.0) {
            *a += b;
        }
    }

    pub fn scale(&self, field: &Field, lambda: Elem) -> Vector {
        Vector(self.0.iter().map(|&c| field.mul(lambda, c)).collect())
    }

    /// Parses `"c1,c2,...,cd"` (coordinate bitmasks).
    pub fn parse(s: &str) -> Result<Vector> {
        s.split(',')
            .map(|t| {
                t.trim()
                    .parse::<u16>()
                    .map(Elem)
                    .map_err(|_| Error::InvalidInput(format!("bad coordinate {t:?}")))
            })
            .collect::<Result<Vec<_>>>()
            .map(Vector)
    }

    /// `F_2`-coordinates after restriction of scalars: bit `i·p + b` is
    /// bit `b` of coordinate `i`.
    pub fn to_bits(&self, p: u32) -> BitVec {
        let p = p as usize;
        let mut out = BitVec::zeros(self.dim() * p);
        for (i, c) in self.0.iter().enumerate() {
            for b in 0..p {
                if (c.0 >> b) & 1 == 1 {
                    out.set(i * p + b, true);
                }
            }
        }
        out
    }

    pub fn from_bits(bits: &BitVec, p: u32) -> Vector {
        let p = p as usize;
        let d = bits.len() / p;
        let mut v = Vector::zeros(d);
        for k in bits.ones() {
            v.0[k / p].0 |= 1 << (k % p);
        }
        v
    }
}

impl fmt::Display for Vector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(|c| c.to_string()).collect();
        write!(f, "({})", parts.join(","))
    }
}

impl fmt::Debug for Vector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

/// A finite-dimensional commutative algebra over `F_{2^p}`.
#[derive(Clone, PartialEq, Eq)]
pub struct Algebra {
    field: Field,
    squares: Vec<Vector>,
    table: Option<Vec<Vec<Vector>>>,
    weight: Option<Vec<Elem>>,
}

impl Algebra {
    /// `squares[i]` holds the coordinates of `e_i²`.
    pub fn new(field: Field, squares: Vec<Vector>) -> Result<Self> {
        let d = squares.len();
        if d == 0 || d > MAX_DIM {
            return Err(Error::InvalidInput(format!(
                "dimension {d} outside 1..={MAX_DIM}"
            )));
        }
        for row in &squares {
            check_vector(&field, d, row)?;
        }
        Ok(Algebra {
            field,
            squares,
            table: None,
            weight: None,
        })
    }

    /// Attaches the full product table `table[i][j] = e_i e_j`, which must be
    /// symmetric and agree with the squares on the diagonal.
    pub fn with_table(mut self, table: Vec<Vec<Vector>>) -> Result<Self> {
        let d = self.dim();
        if table.len() != d {
            return Err(Error::DimensionMismatch {
                expected: d,
                found: table.len(),
            });
        }
        for (i, row) in table.iter().enumerate() {
            if row.len() != d {
                return Err(Error::DimensionMismatch {
                    expected: d,
                    found: row.len(),
                });
            }
            for v in row {
                check_vector(&self.field, d, v)?;
            }
            if row[i] != self.squares[i] {
                return Err(Error::InvariantViolation(format!(
                    "table entry ({}, {}) differs from the square of e{}",
                    i + 1,
                    i + 1,
                    i + 1
                )));
            }
        }
        for i in 0..d {
            for j in 0..i {
                if table[i][j] != table[j][i] {
                    return Err(Error::InvariantViolation(format!(
                        "table is not symmetric at ({}, {})",
                        j + 1,
                        i + 1
                    )));
                }
            }
        }
        self.table = Some(table);
        Ok(self)
    }

    /// Full table with zero off-diagonal products (a natural basis).
    pub fn with_zero_table(self) -> Self {
        let d = self.dim();
        let table = (0..d)
            .map(|i| {
                (0..d)
                    .map(|j| if i == j { self.squares[i].clone() } else { Vector::zeros(d) })
                    .collect()
            })
            .collect();
        Algebra {
            table: Some(table),
            ..self
        }
    }

    /// Attaches a weight after checking that it is a nonzero morphism.
    pub fn with_weight(self, weight: Vec<Elem>) -> Result<Self> {
        let a = self.with_weight_unchecked(weight)?;
        a.check_morphism()?;
        Ok(a)
    }

    /// Attaches a weight of the right shape without the morphism check.
    pub fn with_weight_unchecked(mut self, weight: Vec<Elem>) -> Result<Self> {
        check_vector(&self.field, self.dim(), &Vector(weight.clone()))?;
        self.weight = Some(weight);
        Ok(self)
    }

    /// `ω ≠ 0` and `ω(e_i e_j) = ω(e_i) ω(e_j)` for all `i <= j`.
    pub fn check_morphism(&self) -> Result<()> {
        let w = self
            .weight
            .as_ref()
            .ok_or_else(|| Error::InvalidInput("algebra has no weight".into()))?;
        let table = self.table.as_ref().ok_or_else(|| {
            Error::InvalidInput("weight checks need the full multiplication table".into())
        })?;
        if w.iter().all(|c| c.is_zero()) {
            return Err(Error::ZeroWeight);
        }
        // Squares first: they are the data V actually depends on.
        let pairs = (0..self.dim())
            .map(|i| (i, i))
            .chain((0..self.dim()).flat_map(|i| (i + 1..self.dim()).map(move |j| (i, j))));
        for (i, j) in pairs {
            let lhs = self.weigh(w, &table[i][j]);
            if lhs != self.field.mul(w[i], w[j]) {
                return Err(Error::NotAMorphism { i: i + 1, j: j + 1 });
            }
        }
        Ok(())
    }

    fn weigh(&self, w: &[Elem], x: &Vector) -> Elem {
        w.iter()
            .zip(&x.0)
            .fold(Elem::ZERO, |acc, (&a, &b)| acc + self.field.mul(a, b))
    }

    #[inline]
    pub fn field(&self) -> Field {
        self.field
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.squares.len()
    }

    /// Dimension over `F_2` after restriction of scalars.
    #[inline]
    pub fn restricted_dim(&self) -> usize {
        self.dim() * self.field.degree() as usize
    }

    pub fn squares(&self) -> &[Vector] {
        &self.squares
    }

    pub fn table(&self) -> Option<&Vec<Vec<Vector>>> {
        self.table.as_ref()
    }

    pub fn weight(&self) -> Option<&[Elem]> {
        self.weight.as_deref()
    }

    /// `ω(x)`, when a weight is attached.
    pub fn weight_of(&self, x: &Vector) -> Option<Elem> {
        self.weight.as_ref().map(|w| self.weigh(w, x))
    }

    /// Whether off-diagonal products vanish (a natural basis); true when no
    /// table is stored, since the squares are then all that is known.
    pub fn is_evolution(&self) -> bool {
        match &self.table {
            None => true,
            Some(t) => (0..self.dim())
                .all(|i| (0..self.dim()).all(|j| i == j || t[i][j].is_zero())),
        }
    }

    fn check_conforms(&self, x: &Vector) -> Result<()> {
        if x.dim() != self.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                found: x.dim(),
            });
        }
        if x.0.iter().any(|c| !self.field.contains(*c)) {
            return Err(Error::InvalidInput(format!(
                "{x} has a coordinate outside {}",
                self.field
            )));
        }
        Ok(())
    }

    /// `V(x) = Σ λ_i² e_i²`.
    pub fn evolution_apply(&self, x: &Vector) -> Result<Vector> {
        self.check_conforms(x)?;
        let v = self.evolve(x);
        #[cfg(debug_assertions)]
        if let Some(full) = self.product(x, x) {
            debug_assert_eq!(full, v, "diagonal formula disagrees with the full table");
        }
        Ok(v)
    }

    /// Unchecked `V`, for hot loops over vectors already known to conform.
    pub(crate) fn evolve(&self, x: &Vector) -> Vector {
        let mut out = Vector::zeros(self.dim());
        for (i, &l) in x.0.iter().enumerate() {
            if l.is_zero() {
                continue;
            }
            let l2 = self.field.square(l);
            for (o, &s) in out.0.iter_mut().zip(&self.squares[i].0) {
                *o += self.field.mul(l2, s);
            }
        }
        out
    }

    /// `V^k(x)`.
    pub(crate) fn evolve_n(&self, x: &Vector, k: usize) -> Vector {
        (0..k).fold(x.clone(), |y, _| self.evolve(&y))
    }

    /// `x y` through the full table, when present.
    pub fn product(&self, x: &Vector, y: &Vector) -> Option<Vector> {
        let table = self.table.as_ref()?;
        let f = self.field;
        let mut out = Vector::zeros(self.dim());
        for (i, &a) in x.0.iter().enumerate() {
            for (j, &b) in y.0.iter().enumerate() {
                let c = f.mul(a, b);
                if !c.is_zero() {
                    out.add_assign(&table[i][j].scale(&f, c));
                }
            }
        }
        Some(out)
    }

    pub fn operator(&self) -> SemilinearOperator {
        SemilinearOperator::new(self.field, &self.squares)
    }

    /// Parses the JSON algebra file format.
    pub fn from_json(text: &str) -> Result<Algebra> {
        let file: AlgebraFile = serde_json::from_str(text).map_err(|e| Error::Parse {
            location: format!("line {} column {}", e.line(), e.column()),
            message: e.to_string(),
        })?;
        file.into_algebra()
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&AlgebraFile::from(self)).expect("plain data serializes")
    }
}

impl fmt::Debug for Algebra {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Algebra")
            .field("field", &self.field)
            .field("squares", &self.squares)
            .field("table", &self.table.is_some())
            .field("weight", &self.weight)
            .finish()
    }
}

fn check_vector(field: &Field, d: usize, v: &Vector) -> Result<()> {
    if v.dim() != d {
        return Err(Error::DimensionMismatch {
            expected: d,
            found: v.dim(),
        });
    }
    if let Some(c) = v.0.iter().find(|c| !field.contains(**c)) {
        return Err(Error::InvalidInput(format!("{c} is not an element of {field}")));
    }
    Ok(())
}

/// On-disk form; entries are field-element bitmasks, indices 0-based.
#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct AlgebraFile {
    field: FieldSpec,
    dim: usize,
    squares: Vec<Vec<u16>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    table: Option<Vec<Vec<Vec<u16>>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    weight: Option<Vec<u16>>,
}

impl From<&Algebra> for AlgebraFile {
    fn from(a: &Algebra) -> Self {
        let raw = |v: &Vector| v.0.iter().map(|c| c.0).collect::<Vec<u16>>();
        AlgebraFile {
            field: FieldSpec {
                p: a.field.degree(),
                modulus: Some(a.field.modulus()),
            },
            dim: a.dim(),
            squares: a.squares.iter().map(raw).collect(),
            table: a
                .table
                .as_ref()
                .map(|t| t.iter().map(|row| row.iter().map(raw).collect()).collect()),
            weight: a.weight.as_ref().map(|w| w.iter().map(|c| c.0).collect()),
        }
    }
}

impl AlgebraFile {
    fn into_algebra(self) -> Result<Algebra> {
        let parse_err = |location: String, message: String| Error::Parse { location, message };
        let field = Field::new(self.field.p, self.field.modulus)
            .map_err(|e| parse_err("field".into(), e.to_string()))?;
        let d = self.dim;
        if d == 0 || d > MAX_DIM {
            return Err(parse_err("dim".into(), format!("{d} outside 1..={MAX_DIM}")));
        }
        let to_vec = |loc: String, row: Vec<u16>| -> Result<Vector> {
            if row.len() != d {
                return Err(parse_err(loc, format!("expected {d} coordinates, found {}", row.len())));
            }
            if let Some(c) = row.iter().find(|&&c| !field.contains(Elem(c))) {
                return Err(parse_err(loc, format!("{c} is not an element of {field}")));
            }
            Ok(Vector(row.into_iter().map(Elem).collect()))
        };
        if self.squares.len() != d {
            return Err(parse_err(
                "squares".into(),
                format!("expected {d} rows, found {}", self.squares.len()),
            ));
        }
        let squares = self
            .squares
            .into_iter()
            .enumerate()
            .map(|(i, row)| to_vec(format!("squares[{i}]"), row))
            .collect::<Result<Vec<_>>>()?;
        let mut a = Algebra::new(field, squares)?;
        if let Some(table) = self.table {
            if table.len() != d {
                return Err(parse_err("table".into(), format!("expected {d} rows")));
            }
            let mut rows = Vec::with_capacity(d);
            for (i, row) in table.into_iter().enumerate() {
                if row.len() != d {
                    return Err(parse_err(format!("table[{i}]"), format!("expected {d} entries")));
                }
                rows.push(
                    row.into_iter()
                        .enumerate()
                        .map(|(j, v)| to_vec(format!("table[{i}][{j}]"), v))
                        .collect::<Result<Vec<_>>>()?,
                );
            }
            a = a.with_table(rows)?;
        }
        if let Some(w) = self.weight {
            let w = to_vec("weight".into(), w)?;
            a = a.with_weight(w.0).map_err(|e| match e {
                Error::NotAMorphism { .. } | Error::ZeroWeight | Error::InvalidInput(_) => {
                    Error::InvariantViolation(e.to_string())
                }
                other => other,
            })?;
        }
        Ok(a)
    }
}

/// The evolution operator in matrix-plus-Frobenius form, `V(x) = S·Frob(x)`,
/// with its `F_2`-linear expansion built on first use.
#[derive(Clone, Debug)]
pub struct SemilinearOperator {
    field: Field,
    s: FMatrix,
    m2: OnceLock<BitMatrix>,
}

impl SemilinearOperator {
    pub fn new(field: Field, squares: &[Vector]) -> Self {
        let cols: Vec<Vec<Elem>> = squares.iter().map(|v| v.0.clone()).collect();
        SemilinearOperator {
            field,
            s: FMatrix::from_columns(field, &cols),
            m2: OnceLock::new(),
        }
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn dim(&self) -> usize {
        self.s.rows()
    }

    /// Structure matrix; column `i` holds `e_i²`.
    pub fn s(&self) -> &FMatrix {
        &self.s
    }

    pub fn apply(&self, x: &Vector) -> Vector {
        let frob: Vec<Elem> = x.0.iter().map(|&c| self.field.square(c)).collect();
        Vector(self.s.apply(&frob))
    }

    /// `F_2`-matrix of `V`: column `i·p + a` is the expansion of
    /// `V(β_a e_i) = β_a² e_i²` with `β_a = X^a`.
    pub fn m2(&self) -> &BitMatrix {
        self.m2.get_or_init(|| {
            let p = self.field.degree();
            let d = self.dim();
            let cols: Vec<BitVec> = (0..d)
                .flat_map(|i| {
                    let col = Vector(self.s.column(i));
                    self.field
                        .basis()
                        .map(move |beta| col.scale(&self.field, self.field.square(beta)).to_bits(p))
                        .collect::<Vec<_>>()
                })
                .collect();
            BitMatrix::from_columns(d * p as usize, &cols)
        })
    }
}

/// `F_2`-matrix of scalar multiplication by `lambda` on `F^d`.
pub fn scalar_matrix(field: &Field, d: usize, lambda: Elem) -> BitMatrix {
    let p = field.degree() as usize;
    let mut m = BitMatrix::zeros(d * p, d * p);
    for (a, beta) in field.basis().enumerate() {
        let img = field.mul(lambda, beta);
        for b in 0..p {
            if (img.0 >> b) & 1 == 1 {
                for i in 0..d {
                    m.set(i * p + b, i * p + a, true);
                }
            }
        }
    }
    m
}

/// The `F_2`-basis `{β_a e_i}` of the algebra, in restricted-scalar order.
pub fn restricted_basis(field: &Field, d: usize) -> Vec<Vector> {
    (0..d)
        .flat_map(|i| {
            field.basis().map(move |beta| {
                let mut v = Vector::zeros(d);
                v.0[i] = beta;
                v
            })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rule90_3() -> Algebra {
        Algebra::new(
            Field::F2,
            vec![
                Vector::from_bits01(&[0, 1, 1]),
                Vector::from_bits01(&[1, 0, 1]),
                Vector::from_bits01(&[1, 1, 0]),
            ],
        )
        .unwrap()
        .with_zero_table()
    }

    #[test]
    fn apply_examples() {
        let a = rule90_3();
        let e1 = Vector::unit(3, 0);
        assert_eq!(a.evolution_apply(&e1).unwrap(), Vector::from_bits01(&[0, 1, 1]));
        let x = Vector::from_bits01(&[1, 1, 0]);
        assert_eq!(a.evolution_apply(&x).unwrap(), x);
        assert!(a.evolution_apply(&Vector::zeros(3)).unwrap().is_zero());
        assert!(matches!(
            a.evolution_apply(&Vector::zeros(2)),
            Err(Error::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn f4_line_expansion() {
        let f4 = Field::new(2, Some(0b111)).unwrap();
        let a = Algebra::new(f4, vec![Vector(vec![Elem::ONE])]).unwrap();
        let op = a.operator();
        let m = op.m2();
        assert_eq!(m.column(0), BitVec::from_bools(&[true, false]));
        assert_eq!(m.column(1), BitVec::from_bools(&[true, true]));
    }

    #[test]
    fn f2_expansion_is_s() {
        let a = rule90_3();
        let m = a.operator().m2().clone();
        for i in 0..3 {
            for j in 0..3 {
                assert_eq!(m.get(i, j), a.squares()[j].0[i].0 == 1);
            }
        }
    }

    #[test]
    fn json_roundtrip_and_errors() {
        let a = rule90_3();
        let b = Algebra::from_json(&a.to_json()).unwrap();
        assert_eq!(a, b);
        let line = Algebra::from_json(r#"{"field":{"p":1,"modulus":2},"dim":1,"squares":[[1]]}"#).unwrap();
        assert_eq!(line.squares()[0], Vector(vec![Elem::ONE]));
        assert!(matches!(
            Algebra::from_json(r#"{"field":{"p":1},"dim":1}"#),
            Err(Error::Parse { .. })
        ));
        let bad_weight = r#"{"field":{"p":1},"dim":2,"squares":[[1,0],[0,0]],
            "table":[[[1,0],[0,0]],[[0,0],[0,0]]],"weight":[1,1]}"#;
        assert!(matches!(Algebra::from_json(bad_weight), Err(Error::InvariantViolation(_))));
        let asym = r#"{"field":{"p":1},"dim":2,"squares":[[1,0],[0,0]],
            "table":[[[1,0],[1,0]],[[0,0],[0,0]]]}"#;
        assert!(matches!(Algebra::from_json(asym), Err(Error::InvariantViolation(_))));
    }

    #[test]
    fn scalar_matrix_matches_field() {
        let f = Field::new(3, None).unwrap();
        let lambda = Elem(0b110);
        let m = scalar_matrix(&f, 2, lambda);
        for x in [Elem(1), Elem(5), Elem(7)] {
            let v = Vector(vec![x, Elem(3)]);
            assert_eq!(Vector::from_bits(&m.apply(&v.to_bits(3)), 3), v.scale(&f, lambda));
        }
    }
}
