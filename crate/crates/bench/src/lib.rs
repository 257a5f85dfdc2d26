//! Deterministic inputs shared by the benchmarks.

use msrlab::{construct_tensor_family, FieldSpec, MapConstraint, Matrix, MsrSubspaceFamily};

pub fn field(p: u64) -> FieldSpec {
    FieldSpec::new(p).expect("prime")
}

/// A dense `n x n` matrix from a linear congruential sequence, full of
/// nonzero structure but reproducible without an RNG.
pub fn dense_matrix(p: u64, n: usize) -> Matrix {
    let mut state: u64 = 0x9e37_79b9;
    Matrix::from_fn(field(p), n, n, |_, _| {
        state = state.wrapping_mul(6_364_136_223_846_793_005).wrapping_add(1_442_695_040_888_963_407);
        ((state >> 33) % p) as u32
    })
}

pub fn family(r: usize, m: usize, p: u64) -> MsrSubspaceFamily {
    construct_tensor_family(r, m, field(p), 2).expect("valid parameters")
}

/// Every subspace of the family fixed, the heaviest invariant-map system it yields.
pub fn fixing_all(f: &MsrSubspaceFamily) -> Vec<MapConstraint> {
    f.subspaces().iter().cloned().map(MapConstraint::fixing).collect()
}
