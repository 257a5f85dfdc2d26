//! Dense matrices over a prime field.
//!
//! Storage is row-major `u32` residues. Vectors are `1 x n` matrices and linear
//! maps act on row vectors from the right (`x -> x * M`).
//!
//! Elimination always picks the first nonzero entry in column order, so
//! [`Matrix::rref`] output is reproducible byte-for-byte.

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::field::{FieldElement, FieldSpec};

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "MatrixRepr", into = "MatrixRepr")]
pub struct Matrix {
    rows: usize,
    cols: usize,
    field: FieldSpec,
    data: Vec<u32>,
}

#[derive(Serialize, Deserialize)]
struct MatrixRepr {
    rows: usize,
    cols: usize,
    p: u64,
    data: Vec<Vec<u64>>,
}

impl TryFrom<MatrixRepr> for Matrix {
    type Error = Error;
    fn try_from(r: MatrixRepr) -> Result<Self> {
        let field = FieldSpec::new(r.p)?;
        if r.data.len() != r.rows || r.data.iter().any(|row| row.len() != r.cols) {
            return Err(Error::ShapeMismatch(format!(
                "declared {}x{} does not match data",
                r.rows, r.cols
            )));
        }
        let mut data = Vec::with_capacity(r.rows * r.cols);
        for v in r.data.into_iter().flatten() {
            if v >= field.p() as u64 {
                return Err(Error::BadParams(format!("entry {v} is not a residue mod {}", field.p())));
            }
            data.push(v as u32);
        }
        Ok(Matrix { rows: r.rows, cols: r.cols, field, data })
    }
}

impl From<Matrix> for MatrixRepr {
    fn from(m: Matrix) -> Self {
        MatrixRepr {
            rows: m.rows,
            cols: m.cols,
            p: m.field.p() as u64,
            data: (0..m.rows).map(|i| m.row(i).iter().map(|&v| v as u64).collect()).collect(),
        }
    }
}

/// Result of Gauss-Jordan elimination.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Rref {
    pub matrix: Matrix,
    pub rank: usize,
    pub pivot_cols: Vec<usize>,
}

impl Matrix {
    pub fn zeros(field: FieldSpec, rows: usize, cols: usize) -> Self {
        Matrix { rows, cols, field, data: vec![0; rows * cols] }
    }

    pub fn identity(field: FieldSpec, n: usize) -> Self {
        let mut m = Self::zeros(field, n, n);
        for i in 0..n {
            m.data[i * n + i] = 1;
        }
        m
    }

    pub fn diagonal(field: FieldSpec, diag: &[u32]) -> Self {
        let n = diag.len();
        let mut m = Self::zeros(field, n, n);
        for (i, &d) in diag.iter().enumerate() {
            m.data[i * n + i] = d % field.p();
        }
        m
    }

    /// Builds a matrix from signed integer rows, reducing each entry mod p.
    ///
    /// `cols` is needed to give an empty row list a definite width.
    pub fn from_rows<R: AsRef<[i64]>>(field: FieldSpec, cols: usize, rows: &[R]) -> Result<Self> {
        let mut data = Vec::with_capacity(rows.len() * cols);
        for r in rows {
            let r = r.as_ref();
            if r.len() != cols {
                return Err(Error::ShapeMismatch(format!("row of length {} in a {cols}-column matrix", r.len())));
            }
            data.extend(r.iter().map(|&v| field.reduce(v)));
        }
        Ok(Matrix { rows: rows.len(), cols, field, data })
    }

    /// Builds a matrix from raw residues, which must already lie in `[0, p)`.
    pub fn from_residues(field: FieldSpec, rows: usize, cols: usize, data: Vec<u32>) -> Result<Self> {
        if data.len() != rows * cols {
            return Err(Error::ShapeMismatch(format!("{} entries for {rows}x{cols}", data.len())));
        }
        if data.iter().any(|&v| v >= field.p()) {
            return Err(Error::BadParams("entry out of residue range".into()));
        }
        Ok(Matrix { rows, cols, field, data })
    }

    pub fn row_vector(field: FieldSpec, entries: &[u32]) -> Self {
        Matrix {
            rows: 1,
            cols: entries.len(),
            field,
            data: entries.iter().map(|&v| v % field.p()).collect(),
        }
    }

    pub fn from_fn(field: FieldSpec, rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> u32) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j) % field.p());
            }
        }
        Matrix { rows, cols, field, data }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn shape(&self) -> (usize, usize) {
        (self.rows, self.cols)
    }

    pub fn field(&self) -> FieldSpec {
        self.field
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn entry(&self, i: usize, j: usize) -> u32 {
        self.data[i * self.cols + j]
    }

    pub fn get(&self, i: usize, j: usize) -> FieldElement {
        self.field.element(self.entry(i, j) as i64)
    }

    pub fn set(&mut self, i: usize, j: usize, v: u32) {
        self.data[i * self.cols + j] = v % self.field.p();
    }

    pub fn row(&self, i: usize) -> &[u32] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn row_iter(&self) -> impl Iterator<Item = &[u32]> + '_ {
        (0..self.rows).map(move |i| self.row(i))
    }

    pub fn data(&self) -> &[u32] {
        &self.data
    }

    pub fn to_rows(&self) -> Vec<Vec<u32>> {
        self.row_iter().map(<[u32]>::to_vec).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|&v| v == 0)
    }

    fn check_field(&self, other: &Matrix) -> Result<()> {
        if self.field != other.field {
            return Err(Error::MixedFields(self.field.p(), other.field.p()));
        }
        Ok(())
    }

    pub fn transpose(&self) -> Matrix {
        Matrix::from_fn(self.field, self.cols, self.rows, |i, j| self.entry(j, i))
    }

    pub fn matmul(&self, other: &Matrix) -> Result<Matrix> {
        self.check_field(other)?;
        if self.cols != other.rows {
            return Err(Error::ShapeMismatch(format!(
                "{}x{} times {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let f = self.field;
        let p = f.p() as u64;
        let mut out = vec![0u32; self.rows * other.cols];
        // Accumulate in u64 and reduce lazily: each product is < 2^62, so at most
        // a handful fit before reduction is needed for large p.
        let mut acc = vec![0u64; other.cols];
        for i in 0..self.rows {
            acc.iter_mut().for_each(|a| *a = 0);
            for (k, &a) in self.row(i).iter().enumerate() {
                if a == 0 {
                    continue;
                }
                for (slot, &b) in acc.iter_mut().zip(other.row(k)) {
                    *slot = (*slot + a as u64 * b as u64) % p;
                }
            }
            for (o, a) in out[i * other.cols..(i + 1) * other.cols].iter_mut().zip(&acc) {
                *o = *a as u32;
            }
        }
        Ok(Matrix { rows: self.rows, cols: other.cols, field: f, data: out })
    }

    /// Product with a column vector, `M * x`.
    pub fn mul_vec(&self, x: &[u32]) -> Result<Vec<u32>> {
        if x.len() != self.cols {
            return Err(Error::ShapeMismatch(format!("{}x{} times vector of length {}", self.rows, self.cols, x.len())));
        }
        let f = self.field;
        Ok(self
            .row_iter()
            .map(|r| r.iter().zip(x).fold(0, |acc, (&a, &b)| f.add(acc, f.mul(a, b))))
            .collect())
    }

    pub fn add(&self, other: &Matrix) -> Result<Matrix> {
        self.check_field(other)?;
        if self.shape() != other.shape() {
            return Err(Error::ShapeMismatch("matrix sum".into()));
        }
        let f = self.field;
        let data = self.data.iter().zip(&other.data).map(|(&a, &b)| f.add(a, b)).collect();
        Ok(Matrix { data, ..self.clone() })
    }

    pub fn scale(&self, c: u32) -> Matrix {
        let f = self.field;
        let c = c % f.p();
        Matrix { data: self.data.iter().map(|&a| f.mul(a, c)).collect(), ..self.clone() }
    }

    /// Stacks matrices vertically. All parts must share column count and field.
    pub fn vstack(field: FieldSpec, cols: usize, parts: &[&Matrix]) -> Result<Matrix> {
        let mut data = Vec::new();
        let mut rows = 0;
        for m in parts {
            if m.field != field {
                return Err(Error::MixedFields(field.p(), m.field.p()));
            }
            if m.cols != cols {
                return Err(Error::ShapeMismatch(format!("vstack of {} columns onto {cols}", m.cols)));
            }
            data.extend_from_slice(&m.data);
            rows += m.rows;
        }
        Ok(Matrix { rows, cols, field, data })
    }

    pub fn hstack(&self, other: &Matrix) -> Result<Matrix> {
        self.check_field(other)?;
        if self.rows != other.rows {
            return Err(Error::ShapeMismatch("hstack row counts differ".into()));
        }
        let mut data = Vec::with_capacity(self.data.len() + other.data.len());
        for i in 0..self.rows {
            data.extend_from_slice(self.row(i));
            data.extend_from_slice(other.row(i));
        }
        Ok(Matrix { rows: self.rows, cols: self.cols + other.cols, field: self.field, data })
    }

    pub fn select_rows(&self, idx: &[usize]) -> Matrix {
        let mut data = Vec::with_capacity(idx.len() * self.cols);
        for &i in idx {
            data.extend_from_slice(self.row(i));
        }
        Matrix { rows: idx.len(), cols: self.cols, field: self.field, data }
    }

    pub fn select_cols(&self, range: std::ops::Range<usize>) -> Matrix {
        let width = range.len();
        Matrix::from_fn(self.field, self.rows, width, |i, j| self.entry(i, range.start + j))
    }

    /// Reduced row echelon form with deterministic first-nonzero pivoting.
    pub fn rref(&self) -> Rref {
        let f = self.field;
        let cols = self.cols;
        let mut m = self.data.clone();
        let mut pivot_cols = Vec::new();
        let mut r = 0;
        for c in 0..cols {
            if r == self.rows {
                break;
            }
            let Some(piv) = (r..self.rows).find(|&i| m[i * cols + c] != 0) else {
                continue;
            };
            if piv != r {
                for j in 0..cols {
                    m.swap(piv * cols + j, r * cols + j);
                }
            }
            let inv = f.inv(m[r * cols + c]).expect("pivot is nonzero");
            for j in c..cols {
                m[r * cols + j] = f.mul(m[r * cols + j], inv);
            }
            let (before, rest) = m.split_at_mut(r * cols);
            let (pivot_row, after) = rest.split_at_mut(cols);
            for row in before.chunks_exact_mut(cols).chain(after.chunks_exact_mut(cols)) {
                let factor = row[c];
                if factor == 0 {
                    continue;
                }
                for j in c..cols {
                    row[j] = f.mul_sub(row[j], factor, pivot_row[j]);
                }
            }
            pivot_cols.push(c);
            r += 1;
        }
        Rref {
            matrix: Matrix { rows: self.rows, cols, field: f, data: m },
            rank: r,
            pivot_cols,
        }
    }

    pub fn rank(&self) -> usize {
        self.rref().rank
    }

    /// Basis of the right null space `{x : M x^T = 0}`, one vector per row.
    ///
    /// Rows are ordered by free column; each has a 1 in its free column.
    pub fn kernel(&self) -> Matrix {
        let Rref { matrix: r, rank, pivot_cols } = self.rref();
        let f = self.field;
        let mut is_pivot = vec![false; self.cols];
        for &c in &pivot_cols {
            is_pivot[c] = true;
        }
        let free: Vec<usize> = (0..self.cols).filter(|&c| !is_pivot[c]).collect();
        let mut out = Matrix::zeros(f, free.len(), self.cols);
        for (k, &fc) in free.iter().enumerate() {
            out.data[k * self.cols + fc] = 1;
            for (i, &pc) in pivot_cols.iter().enumerate().take(rank) {
                out.data[k * self.cols + pc] = f.neg(r.entry(i, fc));
            }
        }
        out
    }

    pub fn invert(&self) -> Result<Matrix> {
        if !self.is_square() {
            return Err(Error::ShapeMismatch(format!("cannot invert {}x{}", self.rows, self.cols)));
        }
        let n = self.rows;
        let aug = self.hstack(&Matrix::identity(self.field, n))?.rref();
        if aug.rank < n || aug.pivot_cols.iter().take(n).enumerate().any(|(i, &c)| c != i) {
            return Err(Error::Singular);
        }
        Ok(aug.matrix.select_cols(n..2 * n))
    }

    pub fn is_invertible(&self) -> bool {
        self.is_square() && self.rank() == self.rows
    }

    /// Solves `self * X = rhs` for some `X`, free variables set to zero.
    pub fn solve(&self, rhs: &Matrix) -> Result<Matrix> {
        if self.rows != rhs.rows {
            return Err(Error::ShapeMismatch("solve: row counts differ".into()));
        }
        let n = self.cols;
        let aug = self.hstack(rhs)?.rref();
        if aug.pivot_cols.iter().any(|&c| c >= n) {
            return Err(Error::Inconsistent);
        }
        let mut x = Matrix::zeros(self.field, n, rhs.cols);
        for (i, &pc) in aug.pivot_cols.iter().enumerate() {
            for j in 0..rhs.cols {
                x.data[pc * rhs.cols + j] = aug.matrix.entry(i, n + j);
            }
        }
        Ok(x)
    }

    /// Solves `X * self = rhs` for some `X`.
    pub fn solve_left(&self, rhs: &Matrix) -> Result<Matrix> {
        Ok(self.transpose().solve(&rhs.transpose())?.transpose())
    }

    /// Kronecker product. For row vectors this is `u ⊗ v` with the first factor
    /// most significant.
    pub fn kronecker(&self, other: &Matrix) -> Result<Matrix> {
        self.check_field(other)?;
        let f = self.field;
        let (br, bc) = other.shape();
        Ok(Matrix::from_fn(f, self.rows * br, self.cols * bc, |i, j| {
            f.mul(self.entry(i / br, j / bc), other.entry(i % br, j % bc))
        }))
    }
}

impl fmt::Display for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, row) in self.row_iter().enumerate() {
            if i > 0 {
                writeln!(f)?;
            }
            write!(f, "[")?;
            for (j, v) in row.iter().enumerate() {
                if j > 0 {
                    write!(f, " ")?;
                }
                write!(f, "{v}")?;
            }
            write!(f, "]")?;
        }
        Ok(())
    }
}

/// Incrementally maintained echelon basis of a row space.
///
/// Rows are stored normalized (leading entry 1) and keyed by their leading
/// column. Reduction against the stored rows in increasing pivot order leaves
/// either zero or a vector whose leading column is new.
#[derive(Debug, Clone)]
pub struct RowEchelon {
    field: FieldSpec,
    cols: usize,
    rows: BTreeMap<usize, Vec<u32>>,
}

impl RowEchelon {
    pub fn new(field: FieldSpec, cols: usize) -> Self {
        RowEchelon { field, cols, rows: BTreeMap::new() }
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn reduce(&self, v: &mut [u32]) {
        let f = self.field;
        for (&pc, row) in &self.rows {
            let c = v[pc];
            if c == 0 {
                continue;
            }
            for j in pc..self.cols {
                v[j] = f.mul_sub(v[j], c, row[j]);
            }
        }
    }

    pub fn contains(&self, v: &[u32]) -> bool {
        let mut w = v.to_vec();
        self.reduce(&mut w);
        w.iter().all(|&x| x == 0)
    }

    /// Inserts a row; returns whether it enlarged the span.
    pub fn insert(&mut self, mut v: Vec<u32>) -> bool {
        debug_assert_eq!(v.len(), self.cols);
        self.reduce(&mut v);
        let Some(lead) = v.iter().position(|&x| x != 0) else {
            return false;
        };
        let inv = self.field.inv(v[lead]).expect("nonzero");
        for x in &mut v[lead..] {
            *x = self.field.mul(*x, inv);
        }
        self.rows.insert(lead, v);
        true
    }

    pub fn to_matrix(&self) -> Matrix {
        let data = self.rows.values().flatten().copied().collect();
        Matrix { rows: self.rows.len(), cols: self.cols, field: self.field, data }
    }
}
