//! Explicit `(ell = r^m, r)` family of `(r + 1) m` subspaces over any field
//! with more than two elements.
//!
//! Fix `v_1..v_r = e_1..e_r` and `v_{r+1} = -(e_1 + ... + e_r)`, so that any
//! `r` of the `r + 1` vectors form a basis of `F^r` and they sum to zero.
//! `V = (F^r)^{⊗m}` is identified with `F^ell` through iterated Kronecker
//! products, first factor most significant.
//!
//! For position `k` and index `i` (both 1-based below):
//!
//! * `A_{k,i}` is spanned by all tensors with `v_i` in position `k`;
//! * `Phi_{(k,i),t}` (`t = 1..r-1`) acts only on position `k`. In the basis
//!   `{v_j : j != i}` of that factor it scales `v_{i+t}` by `lambda` and fixes
//!   the rest, where `i + t` is reduced into `1..=r+1`.

use crate::error::{Error, Result};
use crate::field::FieldSpec;
use crate::matrix::Matrix;
use crate::subspace::Subspace;

use super::MsrSubspaceFamily;

/// `v_1, .., v_{r+1}` as `1 x r` row vectors (index 0 holds `v_1`).
pub fn construction_vectors(field: FieldSpec, r: usize) -> Vec<Matrix> {
    let mut vs: Vec<Matrix> = (0..r)
        .map(|i| Matrix::from_fn(field, 1, r, |_, j| u32::from(i == j)))
        .collect();
    vs.push(Matrix::from_fn(field, 1, r, |_, _| field.neg(1)));
    vs
}

/// `v_{idx[0]} ⊗ ... ⊗ v_{idx[m-1]}` with 1-based indices into `vs`.
pub fn tensor_of(vs: &[Matrix], idx: &[usize]) -> Result<Matrix> {
    let field = vs[0].field();
    let mut acc = Matrix::from_fn(field, 1, 1, |_, _| 1);
    for &i in idx {
        let v = vs.get(i.wrapping_sub(1)).ok_or_else(|| Error::IndexOutOfRange(format!("vector index {i}")))?;
        acc = acc.kronecker(v)?;
    }
    Ok(acc)
}

/// All tuples in `{1..=base}^len`, lexicographic.
fn tuples(base: usize, len: usize) -> Vec<Vec<usize>> {
    let mut out = vec![Vec::new()];
    for _ in 0..len {
        out = out
            .into_iter()
            .flat_map(|t| {
                (1..=base).map(move |x| {
                    let mut t = t.clone();
                    t.push(x);
                    t
                })
            })
            .collect();
    }
    out
}

/// `i + t` reduced into `1..=modulus`.
fn shift(i: usize, t: usize, modulus: usize) -> usize {
    (i - 1 + t) % modulus + 1
}

/// Single-factor map on `F^r`: diagonal in the basis `{v_j : j != i}` with
/// `lambda` on `v_target` and 1 elsewhere, written in standard coordinates for
/// the row-vector convention (`D = B^{-1} diag B`, rows of `B` are the `v_j`).
fn factor_map(vs: &[Matrix], i: usize, target: usize, lambda: u32) -> Result<Matrix> {
    let field = vs[0].field();
    let r = vs[0].cols();
    let others: Vec<usize> = (1..=r + 1).filter(|&j| j != i).collect();
    let rows: Vec<&Matrix> = others.iter().map(|&j| &vs[j - 1]).collect();
    let b = Matrix::vstack(field, r, &rows)?;
    let eig: Vec<u32> = others.iter().map(|&j| if j == target { lambda } else { 1 }).collect();
    b.invert()?.matmul(&Matrix::diagonal(field, &eig))?.matmul(&b)
}

pub fn construct_tensor_family(r: usize, m: usize, field: FieldSpec, lambda: u32) -> Result<MsrSubspaceFamily> {
    if field.p() <= 2 {
        return Err(Error::FieldTooSmall(field.p()));
    }
    if lambda >= field.p() || lambda <= 1 {
        return Err(Error::BadLambda(lambda));
    }
    if r < 2 || m < 1 {
        return Err(Error::BadParams(format!("need r >= 2 and m >= 1, got r = {r}, m = {m}")));
    }
    let ell = u32::try_from(m)
        .ok()
        .and_then(|m| r.checked_pow(m))
        .filter(|&l| l <= 1 << 12)
        .ok_or_else(|| Error::BadParams(format!("r^m = {r}^{m} is too large")))?;
    let vs = construction_vectors(field, r);
    let mut subspaces = Vec::with_capacity((r + 1) * m);
    let mut maps = Vec::with_capacity((r + 1) * m);
    for k in 0..m {
        let left = Matrix::identity(field, r.pow(k as u32));
        let right = Matrix::identity(field, r.pow((m - k - 1) as u32));
        for i in 1..=r + 1 {
            let mut gens = Vec::new();
            for mut t in tuples(r + 1, m - 1) {
                t.insert(k, i);
                gens.push(tensor_of(&vs, &t)?);
            }
            let refs: Vec<&Matrix> = gens.iter().collect();
            subspaces.push(Subspace::span_of(&Matrix::vstack(field, ell, &refs)?));

            let mut row = Vec::with_capacity(r - 1);
            for t in 1..r {
                let d = factor_map(&vs, i, shift(i, t, r + 1), lambda)?;
                row.push(left.kronecker(&d)?.kronecker(&right)?);
            }
            maps.push(row);
        }
    }
    MsrSubspaceFamily::new(ell, r, field, subspaces, maps)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn gf(p: u64) -> FieldSpec {
        FieldSpec::new(p).unwrap()
    }

    #[test]
    fn vectors_sum_to_zero() {
        for (p, r) in [(3, 2), (5, 3), (7, 4)] {
            let vs = construction_vectors(gf(p), r);
            let mut acc = Matrix::zeros(gf(p), 1, r);
            for v in &vs {
                acc = acc.add(v).unwrap();
            }
            assert!(acc.is_zero());
        }
    }

    #[test]
    fn shift_is_one_based() {
        assert_eq!(shift(1, 1, 3), 2);
        assert_eq!(shift(3, 1, 3), 1);
        assert_eq!(shift(2, 2, 4), 4);
        assert_eq!(shift(4, 3, 4), 3);
    }

    #[test]
    fn smallest_instance_by_hand() {
        // r = 2, m = 1, GF(3), lambda = 2: lines spanned by (1,0), (0,1), (2,2)
        let fam = construct_tensor_family(2, 1, gf(3), 2).unwrap();
        let f = gf(3);
        assert_eq!(fam.k(), 3);
        assert_eq!(fam.subspace(0), &Subspace::coordinate(f, 2, &[0]));
        assert_eq!(fam.subspace(1), &Subspace::coordinate(f, 2, &[1]));
        assert_eq!(fam.subspace(2), &Subspace::span_of(&Matrix::from_rows(f, 2, &[[1, 1]]).unwrap()));
        // Phi_{1,1}: basis {v2, v3}, scale v2 by 2: v1 = -(v2+v3) -> -(2 v2 + v3) = (1, 2)
        let phi = &fam.maps()[0][0];
        assert_eq!(phi, &Matrix::from_rows(f, 2, &[[1, 2], [0, 2]]).unwrap());
        assert!(fam.verify().unwrap().passed);
    }

    #[test]
    fn rejects_bad_inputs() {
        assert_eq!(construct_tensor_family(2, 1, gf(2), 1), Err(Error::FieldTooSmall(2)));
        assert_eq!(construct_tensor_family(2, 1, gf(3), 1), Err(Error::BadLambda(1)));
        assert_eq!(construct_tensor_family(2, 1, gf(3), 0), Err(Error::BadLambda(0)));
        assert_eq!(construct_tensor_family(2, 1, gf(3), 3), Err(Error::BadLambda(3)));
        assert!(matches!(construct_tensor_family(1, 1, gf(3), 2), Err(Error::BadParams(_))));
        assert!(matches!(construct_tensor_family(2, 0, gf(3), 2), Err(Error::BadParams(_))));
        assert!(matches!(construct_tensor_family(3, 40, gf(3), 2), Err(Error::BadParams(_))));
    }

    #[test]
    fn tensor_basis_is_eigenbasis() {
        let (r, m, lambda) = (3, 2, 2);
        let f = gf(5);
        let fam = construct_tensor_family(r, m, f, lambda).unwrap();
        let vs = construction_vectors(f, r);
        for k in 0..m {
            for i in 1..=r + 1 {
                let idx = k * (r + 1) + (i - 1);
                for phi in &fam.maps()[idx] {
                    for t in tuples(r + 1, m) {
                        if t.contains(&i) {
                            continue;
                        }
                        let x = tensor_of(&vs, &t).unwrap();
                        let y = x.matmul(phi).unwrap();
                        assert!(y == x || y == x.scale(lambda), "k={k} i={i} t={t:?}");
                    }
                }
            }
        }
    }
}
