//! Random codes with constant repair matrices, for soundness sweeps.
//!
//! Proposals are built around the explicit tensor family: pick `k` of its
//! subspaces, move everything by a random change of basis `G`, choose a random
//! basis of each moved subspace as `S_m`, a random invertible `C_{0,m}`, and
//! `C_{j,m} = G^{-1} Phi_{m,j} G C_{0,m}`. A proposal is kept only if
//! [`check_msr_scheme`] passes at every systematic node.

use rand::Rng;

use crate::error::{Error, Result};
use crate::field::FieldSpec;
use crate::matrix::Matrix;
use crate::msr_family::construct_tensor_family;

use super::{check_msr_scheme, ConstantRepairScheme, VectorCodeSystematic};

pub fn random_matrix<R: Rng + ?Sized>(rng: &mut R, field: FieldSpec, rows: usize, cols: usize) -> Matrix {
    Matrix::from_fn(field, rows, cols, |_, _| rng.gen_range(0..field.p()))
}

pub fn random_invertible<R: Rng + ?Sized>(rng: &mut R, field: FieldSpec, n: usize) -> Matrix {
    loop {
        let m = random_matrix(rng, field, n, n);
        if m.is_invertible() {
            return m;
        }
    }
}

fn propose<R: Rng + ?Sized>(rng: &mut R, n: usize, r: usize, ell: usize, field: FieldSpec) -> Result<(VectorCodeSystematic, ConstantRepairScheme)> {
    let k = n - r;
    let depth = (1..=12u32)
        .find(|&d| r.pow(d) == ell)
        .ok_or_else(|| Error::BadParams(format!("ell = {ell} is not a power of r = {r}")))? as usize;
    let lambda = rng.gen_range(2..field.p());
    let base = construct_tensor_family(r, depth, field, lambda)?;
    if k > base.k() {
        return Err(Error::BadParams(format!("k = {k} exceeds the {} available subspaces", base.k())));
    }
    let mut pool: Vec<usize> = (0..base.k()).collect();
    let mut picked = Vec::with_capacity(k);
    for _ in 0..k {
        picked.push(pool.swap_remove(rng.gen_range(0..pool.len())));
    }
    let g = random_invertible(rng, field, ell);
    let g_inv = g.invert()?;
    let mut repair = Vec::with_capacity(k);
    let mut parity = vec![Vec::with_capacity(k); r];
    for &idx in &picked {
        let basis = base.subspace(idx).basis().matmul(&g)?;
        repair.push(random_invertible(rng, field, ell / r).matmul(&basis)?);
        let c0 = random_invertible(rng, field, ell);
        parity[0].push(c0.clone());
        for (row, phi) in parity[1..].iter_mut().zip(&base.maps()[idx]) {
            row.push(g_inv.matmul(phi)?.matmul(&g)?.matmul(&c0)?);
        }
    }
    Ok((VectorCodeSystematic::new(n, k, ell, field, parity)?, ConstantRepairScheme::new(n, k, ell, field, repair)?))
}

/// Draws proposals until one passes the repair checks, giving up after
/// `max_attempts`.
pub fn random_constant_instance<R: Rng + ?Sized>(
    rng: &mut R,
    n: usize,
    r: usize,
    ell: usize,
    field: FieldSpec,
    max_attempts: usize,
) -> Result<Option<(VectorCodeSystematic, ConstantRepairScheme)>> {
    if r == 0 || r >= n {
        return Err(Error::BadParams(format!("need 1 <= r < n, got n = {n}, r = {r}")));
    }
    for _ in 0..max_attempts {
        let (code, scheme) = propose(rng, n, r, ell, field)?;
        let general = scheme.to_general();
        let mut ok = true;
        for m in 0..code.k() {
            ok &= check_msr_scheme(&code, &general, m)?.passed;
        }
        if ok {
            return Ok(Some((code, scheme)));
        }
    }
    Ok(None)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn generated_instances_pass_checks() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let f = FieldSpec::new(3).unwrap();
        let (code, scheme) = random_constant_instance(&mut rng, 5, 2, 4, f, 10).unwrap().unwrap();
        assert_eq!((code.n(), code.k(), code.ell()), (5, 3, 4));
        assert_eq!(scheme.matrix(0).shape(), (2, 4));
    }

    #[test]
    fn too_many_nodes_rejected() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let f = FieldSpec::new(3).unwrap();
        // ell = 2 gives only three subspaces
        assert!(random_constant_instance(&mut rng, 6, 2, 2, f, 5).is_err());
        assert!(random_constant_instance(&mut rng, 5, 2, 6, f, 5).is_err());
    }
}
