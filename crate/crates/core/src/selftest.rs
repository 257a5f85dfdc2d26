//! Seeded cross-checks of the elimination-based routines against brute force.
//!
//! The report is a pure function of the seed.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::Result;
use crate::field::FieldSpec;
use crate::invariant::{decay_trace, invariant_dim, MapConstraint, PrefixOrder};
use crate::matrix::Matrix;
use crate::msr_family::construct_tensor_family;
use crate::oracle::{count_invariant_maps, random_constraints, random_rows, span_elements, RawConstraint};
use crate::repair::{evenodd_code, evenodd_repair, EvenoddNode};
use crate::subspace::Subspace;

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CheckResult {
    pub name: String,
    pub cases: usize,
    pub failures: usize,
    /// Enough to replay the first failing case.
    pub first_failure: Option<String>,
}

impl CheckResult {
    fn new(name: &str) -> Self {
        CheckResult { name: name.into(), cases: 0, failures: 0, first_failure: None }
    }

    fn record(&mut self, ok: bool, describe: impl FnOnce() -> String) {
        self.cases += 1;
        if !ok {
            self.failures += 1;
            if self.first_failure.is_none() {
                self.first_failure = Some(describe());
            }
        }
    }

    pub fn passed(&self) -> bool {
        self.failures == 0
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SelftestReport {
    pub seed: u64,
    pub checks: Vec<CheckResult>,
}

impl SelftestReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(CheckResult::passed)
    }

    pub fn to_text(&self) -> String {
        let mut s = format!("selftest seed={}\n", self.seed);
        for c in &self.checks {
            s.push_str(&format!(
                "{:<28} cases={:<5} failures={} {}\n",
                c.name,
                c.cases,
                c.failures,
                if c.passed() { "PASS" } else { "FAIL" }
            ));
            if let Some(f) = &c.first_failure {
                s.push_str(&format!("  first failure: {f}\n"));
            }
        }
        s.push_str(if self.passed() { "overall PASS\n" } else { "overall FAIL\n" });
        s
    }
}

fn gf(p: u32) -> FieldSpec {
    FieldSpec::new(p as u64).expect("small prime")
}

fn to_subspace(field: FieldSpec, ell: usize, rows: &[Vec<u32>]) -> Subspace {
    let data = rows.iter().flatten().copied().collect();
    Subspace::span_of(&Matrix::from_residues(field, rows.len(), ell, data).expect("residues in range"))
}

fn to_constraints(field: FieldSpec, ell: usize, raw: &[RawConstraint]) -> Vec<MapConstraint> {
    raw.iter()
        .map(|c| {
            MapConstraint::new(to_subspace(field, ell, &c.source), to_subspace(field, ell, &c.target))
                .expect("same field and ambient")
        })
        .collect()
}

/// Compares `p^invariant_dim` with an exhaustive count of qualifying maps.
pub fn invariant_vs_bruteforce<R: Rng + ?Sized>(rng: &mut R, p: u32, ell: usize, sets: usize) -> Result<CheckResult> {
    let mut res = CheckResult::new(&format!("invariant-bruteforce-p{p}-l{ell}"));
    let field = gf(p);
    for _ in 0..sets {
        let raw = random_constraints(rng, p, ell, 3);
        let dim = invariant_dim(field, ell, &to_constraints(field, ell, &raw))?;
        let count = count_invariant_maps(p, ell, &raw);
        res.record((p as u64).pow(dim as u32) == count, || format!("p={p} ell={ell} dim={dim} count={count} constraints={raw:?}"));
    }
    Ok(res)
}

/// Canonical RREF equality agrees with equality of enumerated spans.
pub fn canonical_vs_bruteforce<R: Rng + ?Sized>(rng: &mut R, cases: usize) -> CheckResult {
    let mut res = CheckResult::new("rref-canonical");
    for _ in 0..cases {
        let p = if rng.gen_bool(0.5) { 2 } else { 3 };
        let ell = rng.gen_range(1..=3);
        let a = random_rows(rng, p, ell, 3);
        // half the time b is a random recombination of a, so equal spans occur
        let b = if rng.gen_bool(0.5) && !a.is_empty() {
            let n = rng.gen_range(1..=a.len() + 1);
            (0..n)
                .map(|_| {
                    let coeffs: Vec<u32> = a.iter().map(|_| rng.gen_range(0..p)).collect();
                    (0..ell)
                        .map(|j| a.iter().zip(&coeffs).map(|(row, &c)| row[j] * c).sum::<u32>() % p)
                        .collect()
                })
                .collect()
        } else {
            random_rows(rng, p, ell, 3)
        };
        let field = gf(p);
        let canon = to_subspace(field, ell, &a) == to_subspace(field, ell, &b);
        let brute = span_elements(p, ell, &a) == span_elements(p, ell, &b);
        res.record(canon == brute, || format!("p={p} a={a:?} b={b:?}"));
    }
    res
}

/// `dim A + dim B = dim(A + B) + dim(A ∩ B)` and, for trivially intersecting
/// families, `sum dim U_i <= (s - 1) dim(sum U_i)`.
pub fn lattice_identities<R: Rng + ?Sized>(rng: &mut R, cases: usize) -> Result<(CheckResult, CheckResult)> {
    let mut modular = CheckResult::new("dimension-modularity");
    let mut dim_ub = CheckResult::new("subspace-sum-inequality");
    let field = gf(3);
    for _ in 0..cases {
        let a = to_subspace(field, 4, &random_rows(rng, 3, 4, 4));
        let b = to_subspace(field, 4, &random_rows(rng, 3, 4, 4));
        let lhs = a.dim() + b.dim();
        let rhs = a.sum(&b)?.dim() + a.intersect(&b)?.dim();
        modular.record(lhs == rhs, || format!("a={:?} b={:?}", a.basis().to_rows(), b.basis().to_rows()));
    }
    while dim_ub.cases < cases {
        let s = rng.gen_range(2..=4);
        let us: Vec<Subspace> = (0..s).map(|_| to_subspace(field, 4, &random_rows(rng, 3, 4, 4))).collect();
        if !Subspace::intersect_all(field, 4, &us)?.is_zero() {
            continue;
        }
        let total: usize = us.iter().map(Subspace::dim).sum();
        let sum = Subspace::sum_all(field, 4, &us)?.dim();
        dim_ub.record(total <= (s - 1) * sum, || {
            format!("{:?}", us.iter().map(|u| u.basis().to_rows()).collect::<Vec<_>>())
        });
    }
    Ok((modular, dim_ub))
}

/// All 16 EVENODD codewords, every node, one symbol per helper.
pub fn evenodd_exhaustive() -> Result<CheckResult> {
    let mut res = CheckResult::new("evenodd-repair");
    let code = evenodd_code();
    for bits in 0u32..16 {
        let data = vec![vec![bits & 1, (bits >> 1) & 1], vec![(bits >> 2) & 1, (bits >> 3) & 1]];
        let cw = code.encode(&data)?;
        for node in EvenoddNode::ALL {
            let out = evenodd_repair(node, &cw)?;
            let ok = out.block == cw[node.index()]
                && out.bandwidth.total == 3
                && out.bandwidth.per_helper.iter().all(|&(_, b)| b == 1);
            res.record(ok, || format!("node={node} data={data:?}"));
        }
    }
    Ok(res)
}

/// Construction validity and decay along random prefix orders.
pub fn construction_and_decay<R: Rng + ?Sized>(rng: &mut R) -> Result<(CheckResult, CheckResult)> {
    let mut cons = CheckResult::new("construction-verify");
    let mut decay = CheckResult::new("geometric-decay");
    for (r, m, p, lambda) in [(2, 1, 3, 2), (2, 2, 3, 2), (3, 1, 5, 3), (2, 2, 5, 4)] {
        let fam = construct_tensor_family(r, m, gf(p), lambda)?;
        let ok = fam.verify()?.passed && fam.k() == (r + 1) * m && fam.bound_check().passed;
        cons.record(ok, || format!("r={r} m={m} p={p} lambda={lambda}"));
        for _ in 0..3 {
            let seed = rng.gen::<u64>();
            let trace = decay_trace(&fam, &PrefixOrder::Random(seed))?;
            decay.record(trace.passed(), || format!("r={r} m={m} p={p} lambda={lambda} order=random:{seed}"));
        }
    }
    Ok((cons, decay))
}

pub fn run_selftest(seed: u64) -> Result<SelftestReport> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut checks = vec![
        invariant_vs_bruteforce(&mut rng, 2, 2, 50)?,
        invariant_vs_bruteforce(&mut rng, 3, 2, 50)?,
        invariant_vs_bruteforce(&mut rng, 2, 3, 10)?,
        canonical_vs_bruteforce(&mut rng, 200),
    ];
    let (modular, dim_ub) = lattice_identities(&mut rng, 200)?;
    checks.push(modular);
    checks.push(dim_ub);
    checks.push(evenodd_exhaustive()?);
    let (cons, decay) = construction_and_decay(&mut rng)?;
    checks.push(cons);
    checks.push(decay);
    Ok(SelftestReport { seed, checks })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn selftest_passes_and_is_deterministic() {
        let a = run_selftest(5).unwrap();
        assert!(a.passed(), "{}", a.to_text());
        assert_eq!(a.to_text(), run_selftest(5).unwrap().to_text());
    }
}
