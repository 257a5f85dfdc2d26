//! Brute-force references that share no code with the elimination routines.
//!
//! Everything here works on raw generator rows with plain modular arithmetic
//! and explicit enumeration, so it is only usable for tiny fields and
//! dimensions.

use std::collections::BTreeSet;

use rand::Rng;

/// Every vector in the span of `gens` over GF(p) (enumerates `p^gens.len()`
/// combinations).
pub fn span_elements(p: u32, ell: usize, gens: &[Vec<u32>]) -> BTreeSet<Vec<u32>> {
    let mut out = BTreeSet::new();
    let total = (p as u64).pow(gens.len() as u32);
    for mut code in 0..total {
        let mut v = vec![0u64; ell];
        for g in gens {
            let c = code % p as u64;
            code /= p as u64;
            for (x, &y) in v.iter_mut().zip(g) {
                *x = (*x + c * y as u64) % p as u64;
            }
        }
        out.insert(v.into_iter().map(|x| x as u32).collect());
    }
    out
}

fn times_map(p: u32, ell: usize, a: &[u32], psi: &[u32]) -> Vec<u32> {
    (0..ell)
        .map(|y| (0..ell).map(|x| a[x] as u64 * psi[x * ell + y] as u64).sum::<u64>() % p as u64)
        .map(|v| v as u32)
        .collect()
}

/// One brute-force constraint: generators of `A` and of `B`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RawConstraint {
    pub source: Vec<Vec<u32>>,
    pub target: Vec<Vec<u32>>,
}

/// Number of `ell x ell` matrices `psi` (row-vector convention) with
/// `a * psi ∈ span(target)` for every source generator `a` of every constraint.
pub fn count_invariant_maps(p: u32, ell: usize, constraints: &[RawConstraint]) -> u64 {
    let targets: Vec<BTreeSet<Vec<u32>>> = constraints.iter().map(|c| span_elements(p, ell, &c.target)).collect();
    let total = (p as u64).pow((ell * ell) as u32);
    let mut psi = vec![0u32; ell * ell];
    let mut count = 0;
    for mut code in 0..total {
        for x in psi.iter_mut() {
            *x = (code % p as u64) as u32;
            code /= p as u64;
        }
        let ok = constraints
            .iter()
            .zip(&targets)
            .all(|(c, t)| c.source.iter().all(|a| t.contains(&times_map(p, ell, a, &psi))));
        if ok {
            count += 1;
        }
    }
    count
}

pub fn random_rows<R: Rng + ?Sized>(rng: &mut R, p: u32, ell: usize, max_rows: usize) -> Vec<Vec<u32>> {
    let n = rng.gen_range(0..=max_rows);
    (0..n).map(|_| (0..ell).map(|_| rng.gen_range(0..p)).collect()).collect()
}

pub fn random_constraints<R: Rng + ?Sized>(rng: &mut R, p: u32, ell: usize, max_constraints: usize) -> Vec<RawConstraint> {
    let n = rng.gen_range(1..=max_constraints);
    (0..n)
        .map(|_| RawConstraint { source: random_rows(rng, p, ell, ell), target: random_rows(rng, p, ell, ell) })
        .collect()
}

/// `log_p(count)` when `count` is an exact power of `p`.
pub fn exact_log(p: u32, mut count: u64) -> Option<usize> {
    let mut e = 0;
    while count > 1 {
        if !count.is_multiple_of(p as u64) {
            return None;
        }
        count /= p as u64;
        e += 1;
    }
    (count == 1).then_some(e)
}
