//! Subspaces of `F^ell` in canonical form.
//!
//! A subspace is stored as the nonzero rows of its RREF basis, so two
//! subspaces are equal exactly when their stored bases are equal. The zero
//! subspace is a `0 x ell` matrix.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::field::FieldSpec;
use crate::matrix::Matrix;

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "SubspaceRepr", into = "SubspaceRepr")]
pub struct Subspace {
    basis: Matrix,
}

#[derive(Serialize, Deserialize)]
struct SubspaceRepr {
    ambient: usize,
    p: u64,
    basis: Vec<Vec<u64>>,
}

impl TryFrom<SubspaceRepr> for Subspace {
    type Error = Error;
    fn try_from(r: SubspaceRepr) -> Result<Self> {
        let field = FieldSpec::new(r.p)?;
        let rows: Vec<Vec<i64>> = r
            .basis
            .iter()
            .map(|row| {
                row.iter()
                    .map(|&v| {
                        if v >= field.p() as u64 {
                            Err(Error::BadParams(format!("entry {v} is not a residue mod {}", field.p())))
                        } else {
                            Ok(v as i64)
                        }
                    })
                    .collect()
            })
            .collect::<Result<_>>()?;
        Ok(Subspace::span_of(&Matrix::from_rows(field, r.ambient, &rows)?))
    }
}

impl From<Subspace> for SubspaceRepr {
    fn from(s: Subspace) -> Self {
        SubspaceRepr {
            ambient: s.ambient_dim(),
            p: s.field().p() as u64,
            basis: s.basis.row_iter().map(|r| r.iter().map(|&v| v as u64).collect()).collect(),
        }
    }
}

impl Subspace {
    /// Row span of `rows`, canonicalized.
    pub fn span_of(rows: &Matrix) -> Subspace {
        let r = rows.rref();
        let keep: Vec<usize> = (0..r.rank).collect();
        Subspace { basis: r.matrix.select_rows(&keep) }
    }

    pub fn zero(field: FieldSpec, ambient: usize) -> Subspace {
        Subspace { basis: Matrix::zeros(field, 0, ambient) }
    }

    pub fn full(field: FieldSpec, ambient: usize) -> Subspace {
        Subspace { basis: Matrix::identity(field, ambient) }
    }

    /// Span of the standard basis vectors with the given indices.
    pub fn coordinate(field: FieldSpec, ambient: usize, coords: &[usize]) -> Subspace {
        let m = Matrix::from_fn(field, coords.len(), ambient, |i, j| u32::from(coords[i] == j));
        Subspace::span_of(&m)
    }

    pub fn basis(&self) -> &Matrix {
        &self.basis
    }

    pub fn dim(&self) -> usize {
        self.basis.rows()
    }

    pub fn ambient_dim(&self) -> usize {
        self.basis.cols()
    }

    pub fn field(&self) -> FieldSpec {
        self.basis.field()
    }

    pub fn is_zero(&self) -> bool {
        self.dim() == 0
    }

    pub fn is_full(&self) -> bool {
        self.dim() == self.ambient_dim()
    }

    fn compatible(&self, other: &Subspace) -> Result<()> {
        if self.field() != other.field() {
            return Err(Error::MixedFields(self.field().p(), other.field().p()));
        }
        if self.ambient_dim() != other.ambient_dim() {
            return Err(Error::AmbientMismatch(self.ambient_dim(), other.ambient_dim()));
        }
        Ok(())
    }

    pub fn contains_vector(&self, v: &[u32]) -> bool {
        if v.len() != self.ambient_dim() {
            return false;
        }
        let stacked = Matrix::vstack(self.field(), self.ambient_dim(), &[&self.basis, &Matrix::row_vector(self.field(), v)])
            .expect("shapes checked");
        stacked.rank() == self.dim()
    }

    pub fn contains(&self, other: &Subspace) -> Result<bool> {
        self.compatible(other)?;
        Ok(self.sum(other)?.dim() == self.dim())
    }

    pub fn sum(&self, other: &Subspace) -> Result<Subspace> {
        self.compatible(other)?;
        let m = Matrix::vstack(self.field(), self.ambient_dim(), &[&self.basis, &other.basis])?;
        Ok(Subspace::span_of(&m))
    }

    pub fn sum_all<'a>(field: FieldSpec, ambient: usize, parts: impl IntoIterator<Item = &'a Subspace>) -> Result<Subspace> {
        let mut acc = Subspace::zero(field, ambient);
        for s in parts {
            acc = acc.sum(s)?;
        }
        Ok(acc)
    }

    /// The annihilator `{n : b . n = 0 for all b in self}`, as a subspace of
    /// the same ambient space (dual identified with `F^ell` by the dot product).
    pub fn annihilator(&self) -> Subspace {
        Subspace::span_of(&self.basis.kernel())
    }

    /// Intersection computed as the annihilator of the sum of annihilators.
    pub fn intersect(&self, other: &Subspace) -> Result<Subspace> {
        self.compatible(other)?;
        Ok(self.annihilator().sum(&other.annihilator())?.annihilator())
    }

    /// Folds pairwise intersection left to right.
    pub fn intersect_all<'a>(field: FieldSpec, ambient: usize, parts: impl IntoIterator<Item = &'a Subspace>) -> Result<Subspace> {
        let mut acc = Subspace::full(field, ambient);
        for s in parts {
            acc = acc.intersect(s)?;
        }
        Ok(acc)
    }

    /// Image under the map `x -> x * phi`.
    pub fn apply_map(&self, phi: &Matrix) -> Result<Subspace> {
        let l = self.ambient_dim();
        if phi.shape() != (l, l) {
            return Err(Error::ShapeMismatch(format!("map is {}x{}, ambient is {l}", phi.rows(), phi.cols())));
        }
        if phi.field() != self.field() {
            return Err(Error::MixedFields(self.field().p(), phi.field().p()));
        }
        Ok(Subspace::span_of(&self.basis.matmul(phi)?))
    }

    /// True iff the parts form a direct sum equal to the whole ambient space.
    pub fn is_direct_sum_full(parts: &[Subspace]) -> Result<bool> {
        let Some(first) = parts.first() else {
            return Ok(false);
        };
        let (field, ambient) = (first.field(), first.ambient_dim());
        let total: usize = parts.iter().map(Subspace::dim).sum();
        let sum = Subspace::sum_all(field, ambient, parts)?;
        Ok(total == ambient && sum.is_full())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn gf(p: u64) -> FieldSpec {
        FieldSpec::new(p).unwrap()
    }

    fn span(p: u64, cols: usize, rows: &[&[i64]]) -> Subspace {
        Subspace::span_of(&Matrix::from_rows(gf(p), cols, rows).unwrap())
    }

    #[test]
    fn span_of_examples() {
        let full = Subspace::span_of(&Matrix::identity(gf(3), 4));
        assert!(full.is_full());
        assert_eq!(full.dim(), 4);
        let z = Subspace::span_of(&Matrix::zeros(gf(3), 3, 4));
        assert_eq!(z, Subspace::zero(gf(3), 4));
        assert_eq!(z.dim(), 0);
        let s = span(2, 2, &[&[1, 0], &[1, 0]]);
        assert_eq!(s.dim(), 1);
        assert_eq!(s, span(2, 2, &[&[1, 0]]));
    }

    #[test]
    fn canonical_equality() {
        assert_eq!(span(5, 3, &[&[1, 2, 3], &[0, 1, 1]]), span(5, 3, &[&[1, 3, 4], &[2, 4, 1]]));
    }

    #[test]
    fn sum_examples() {
        let u = span(3, 3, &[&[1, 2, 0], &[0, 0, 1]]);
        assert_eq!(u.sum(&Subspace::zero(gf(3), 3)).unwrap(), u);
        assert_eq!(u.sum(&u).unwrap(), u);
        let e1 = Subspace::coordinate(gf(3), 3, &[0]);
        let e2 = Subspace::coordinate(gf(3), 3, &[1]);
        assert_eq!(e1.sum(&e2).unwrap().dim(), 2);
        assert_eq!(u.sum(&Subspace::zero(gf(3), 4)), Err(Error::AmbientMismatch(3, 4)));
    }

    #[test]
    fn intersect_examples() {
        let u = span(3, 3, &[&[1, 2, 0], &[0, 0, 1]]);
        assert_eq!(u.intersect(&Subspace::full(gf(3), 3)).unwrap(), u);
        let e1 = Subspace::coordinate(gf(3), 3, &[0]);
        let e2 = Subspace::coordinate(gf(3), 3, &[1]);
        assert!(e1.intersect(&e2).unwrap().is_zero());
        let a = span(3, 2, &[&[1, 1]]);
        let b = span(3, 2, &[&[1, 2]]);
        assert!(a.intersect(&b).unwrap().is_zero());
        // two planes in F^3 meet in a line
        let p1 = Subspace::coordinate(gf(3), 3, &[0, 1]);
        let p2 = Subspace::coordinate(gf(3), 3, &[1, 2]);
        assert_eq!(p1.intersect(&p2).unwrap(), e2);
        assert!(matches!(u.intersect(&Subspace::zero(gf(3), 2)), Err(Error::AmbientMismatch(..))));
    }

    #[test]
    fn annihilator_of_extremes() {
        assert!(Subspace::full(gf(5), 3).annihilator().is_zero());
        assert!(Subspace::zero(gf(5), 3).annihilator().is_full());
    }

    #[test]
    fn apply_map_examples() {
        let s = span(5, 3, &[&[1, 2, 0]]);
        assert_eq!(s.apply_map(&Matrix::identity(gf(5), 3)).unwrap(), s);
        let phi = Matrix::from_rows(gf(5), 3, &[[1, 2, 0], [0, 1, 3], [4, 0, 2]]).unwrap();
        assert!(phi.is_invertible());
        assert!(Subspace::full(gf(5), 3).apply_map(&phi).unwrap().is_full());
        assert_eq!(s.apply_map(&Matrix::identity(gf(5), 3).scale(3)).unwrap(), s);
        assert!(matches!(s.apply_map(&Matrix::identity(gf(5), 2)), Err(Error::ShapeMismatch(_))));
        // row-vector convention: e1 * phi is the first row of phi
        let e1 = Subspace::coordinate(gf(5), 3, &[0]);
        assert_eq!(e1.apply_map(&phi).unwrap(), span(5, 3, &[&[1, 2, 0]]));
    }

    #[test]
    fn direct_sum_examples() {
        let e1 = Subspace::coordinate(gf(3), 2, &[0]);
        let e2 = Subspace::coordinate(gf(3), 2, &[1]);
        assert!(Subspace::is_direct_sum_full(&[e1.clone(), e2]).unwrap());
        assert!(!Subspace::is_direct_sum_full(&[e1.clone(), e1]).unwrap());
        assert!(!Subspace::is_direct_sum_full(&[]).unwrap());
    }

    #[test]
    fn contains_vector() {
        let s = span(3, 3, &[&[1, 2, 0]]);
        assert!(s.contains_vector(&[2, 1, 0]));
        assert!(!s.contains_vector(&[1, 0, 0]));
        assert!(!s.contains_vector(&[1, 2]));
    }

    #[test]
    fn json_recanonicalizes() {
        let s: Subspace = serde_json::from_str(r#"{"ambient":3,"p":3,"basis":[[2,1,0],[1,2,0]]}"#).unwrap();
        assert_eq!(s.dim(), 1);
        assert_eq!(serde_json::to_string(&s).unwrap(), r#"{"ambient":3,"p":3,"basis":[[1,2,0]]}"#);
        let z: Subspace = serde_json::from_str(r#"{"ambient":2,"p":2,"basis":[]}"#).unwrap();
        assert_eq!(z, Subspace::zero(gf(2), 2));
    }
}
