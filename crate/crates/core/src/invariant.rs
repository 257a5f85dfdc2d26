//! Spaces of linear maps sending prescribed subspaces into others.
//!
//! A map `psi` on `F^ell` is an `ell x ell` matrix acting on row vectors,
//! vectorized row-major into `ell^2` unknowns (`psi[x][y]` at `x * ell + y`).
//! The condition `a * psi ∈ B` for a basis row `a` of `A` is written through a
//! basis `N` of the annihilator of `B` as `a * psi * n^T = 0` for each row `n`,
//! which in the vectorized unknowns is the single row `a ⊗ n`. A constraint
//! `A -> B` thus contributes `dim(A) * (ell - dim(B))` equations.

use num::{BigUint, One};
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::field::FieldSpec;
use crate::matrix::{Matrix, RowEchelon};
use crate::msr_family::MsrSubspaceFamily;
use crate::subspace::Subspace;

/// The requirement `psi(source) ⊆ target`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MapConstraint {
    pub source: Subspace,
    pub target: Subspace,
}

impl MapConstraint {
    pub fn new(source: Subspace, target: Subspace) -> Result<Self> {
        if source.field() != target.field() {
            return Err(Error::MixedFields(source.field().p(), target.field().p()));
        }
        if source.ambient_dim() != target.ambient_dim() {
            return Err(Error::AmbientMismatch(source.ambient_dim(), target.ambient_dim()));
        }
        Ok(MapConstraint { source, target })
    }

    /// `psi(s) ⊆ s`.
    pub fn fixing(s: Subspace) -> Self {
        MapConstraint { target: s.clone(), source: s }
    }

    pub fn ambient_dim(&self) -> usize {
        self.source.ambient_dim()
    }
}

/// Accumulates constraint equations so that prefix dimensions can be read off
/// without re-eliminating from scratch.
#[derive(Debug, Clone)]
pub struct InvariantSystem {
    field: FieldSpec,
    ell: usize,
    equations: RowEchelon,
}

impl InvariantSystem {
    pub fn new(field: FieldSpec, ell: usize) -> Self {
        InvariantSystem { field, ell, equations: RowEchelon::new(field, ell * ell) }
    }

    pub fn push(&mut self, c: &MapConstraint) -> Result<()> {
        if c.source.field() != self.field {
            return Err(Error::MixedFields(self.field.p(), c.source.field().p()));
        }
        if c.ambient_dim() != self.ell {
            return Err(Error::AmbientMismatch(self.ell, c.ambient_dim()));
        }
        let ann = c.target.annihilator();
        for a in c.source.basis().row_iter() {
            let a = Matrix::row_vector(self.field, a);
            for n in ann.basis().row_iter() {
                let row = a.kronecker(&Matrix::row_vector(self.field, n))?;
                self.equations.insert(row.data().to_vec());
                if self.equations.rank() == self.ell * self.ell {
                    return Ok(());
                }
            }
        }
        Ok(())
    }

    pub fn dim(&self) -> usize {
        self.ell * self.ell - self.equations.rank()
    }

    /// Basis of the solution space as a subspace of `F^{ell^2}`.
    pub fn space(&self) -> Subspace {
        Subspace::span_of(&self.equations.to_matrix().kernel())
    }
}

fn system(field: FieldSpec, ell: usize, constraints: &[MapConstraint]) -> Result<InvariantSystem> {
    let mut sys = InvariantSystem::new(field, ell);
    for c in constraints {
        sys.push(c)?;
    }
    Ok(sys)
}

/// `{psi : psi(A_i) ⊆ B_i for all i}` inside `F^{ell^2}`.
pub fn invariant_space(field: FieldSpec, ell: usize, constraints: &[MapConstraint]) -> Result<Subspace> {
    Ok(system(field, ell, constraints)?.space())
}

/// Dimension of [`invariant_space`].
pub fn invariant_dim(field: FieldSpec, ell: usize, constraints: &[MapConstraint]) -> Result<usize> {
    Ok(system(field, ell, constraints)?.dim())
}

/// Reshapes a vectorized map back into an `ell x ell` matrix.
pub fn unvectorize(field: FieldSpec, ell: usize, v: &[u32]) -> Result<Matrix> {
    Matrix::from_residues(field, ell, ell, v.to_vec())
}

/// Order in which subspaces are added to the decay trace.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum PrefixOrder {
    Identity,
    Random(u64),
    Explicit(Vec<usize>),
}

impl PrefixOrder {
    pub fn resolve(&self, k: usize) -> Result<Vec<usize>> {
        match self {
            PrefixOrder::Identity => Ok((0..k).collect()),
            PrefixOrder::Random(seed) => {
                let mut v: Vec<usize> = (0..k).collect();
                v.shuffle(&mut ChaCha8Rng::seed_from_u64(*seed));
                Ok(v)
            }
            PrefixOrder::Explicit(v) => {
                let mut seen = vec![false; k];
                if v.len() != k || v.iter().any(|&i| i >= k || std::mem::replace(&mut seen[i], true)) {
                    return Err(Error::BadParams(format!("{v:?} is not a permutation of 0..{k}")));
                }
                Ok(v.clone())
            }
        }
    }
}

impl std::str::FromStr for PrefixOrder {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        if s == "identity" {
            return Ok(PrefixOrder::Identity);
        }
        if let Some(seed) = s.strip_prefix("random:") {
            return seed
                .parse()
                .map(PrefixOrder::Random)
                .map_err(|_| Error::BadParams(format!("bad seed in {s:?}")));
        }
        s.split(',')
            .map(|x| x.trim().parse::<usize>())
            .collect::<std::result::Result<Vec<_>, _>>()
            .map(PrefixOrder::Explicit)
            .map_err(|_| Error::BadParams(format!("order must be identity, random:<seed> or a comma list, got {s:?}")))
    }
}

/// One row of a decay trace. The bound `ell^2 ((2r-1)/(2r))^t` is kept as an
/// exact reduced fraction.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DecayRow {
    pub t: usize,
    pub dim: usize,
    pub bound_numerator: BigUint,
    pub bound_denominator: BigUint,
    /// `I_t * 2r <= (2r-1) * I_{t-1}`; true at `t = 0`.
    pub step_ok: bool,
    /// `I_t <= bound`.
    pub curve_ok: bool,
}

impl DecayRow {
    pub fn pass(&self) -> bool {
        self.step_ok && self.curve_ok
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DecayTrace {
    pub family: String,
    pub ell: usize,
    pub r: usize,
    pub order: Vec<usize>,
    pub rows: Vec<DecayRow>,
}

impl DecayTrace {
    pub fn dims(&self) -> Vec<usize> {
        self.rows.iter().map(|r| r.dim).collect()
    }

    /// Every per-step and cumulative inequality holds and the final dimension
    /// is at least one.
    pub fn passed(&self) -> bool {
        self.rows.iter().all(DecayRow::pass) && self.rows.last().is_some_and(|r| r.dim >= 1)
    }

    pub fn first_violation(&self) -> Option<&DecayRow> {
        self.rows.iter().find(|r| !r.pass())
    }

    /// Turns a violation into an error.
    pub fn ensure_holds(&self) -> Result<()> {
        if let Some(row) = self.first_violation() {
            let prev = self.rows[row.t.saturating_sub(1)].dim;
            return Err(Error::DecayViolated { step: row.t, dim: row.dim, prev });
        }
        Ok(())
    }

    pub fn to_csv(&self) -> String {
        let mut s = String::from("t,I_t,bound_numerator,bound_denominator,pass\n");
        for r in &self.rows {
            s.push_str(&format!(
                "{},{},{},{},{}\n",
                r.t,
                r.dim,
                r.bound_numerator,
                r.bound_denominator,
                r.pass()
            ));
        }
        s
    }
}

fn gcd(a: &BigUint, b: &BigUint) -> BigUint {
    let (mut a, mut b) = (a.clone(), b.clone());
    while b != BigUint::ZERO {
        let r = &a % &b;
        a = b;
        b = r;
    }
    a
}

/// `I_t = I(H_{o(1)}, .., H_{o(t)})` for `t = 0..k`, checked against the
/// geometric decay bound at each step.
pub fn decay_trace(f: &MsrSubspaceFamily, order: &PrefixOrder) -> Result<DecayTrace> {
    if f.r() < 2 {
        return Err(Error::BadParams("decay bound needs r >= 2".into()));
    }
    if !f.verify()?.passed {
        return Err(Error::VerificationRequired);
    }
    let order = order.resolve(f.k())?;
    let (ell, r) = (f.ell(), f.r());
    let mut sys = InvariantSystem::new(f.field(), ell);
    let ell2 = BigUint::from(ell * ell);
    let (num_step, den_step) = (BigUint::from(2 * r - 1), BigUint::from(2 * r));
    let mut num = BigUint::one();
    let mut den = BigUint::one();
    let mut rows = Vec::with_capacity(f.k() + 1);
    let mut prev = ell * ell;
    for t in 0..=f.k() {
        if t > 0 {
            sys.push(&MapConstraint::fixing(f.subspace(order[t - 1]).clone()))?;
            num *= &num_step;
            den *= &den_step;
        }
        let dim = sys.dim();
        let bn = &ell2 * &num;
        let g = gcd(&bn, &den);
        let step_ok = t == 0 || dim * 2 * r <= (2 * r - 1) * prev;
        let curve_ok = BigUint::from(dim) * &den <= bn;
        rows.push(DecayRow { t, dim, bound_numerator: &bn / &g, bound_denominator: &den / &g, step_ok, curve_ok });
        prev = dim;
    }
    Ok(DecayTrace { family: f.label(), ell, r, order, rows })
}

fn fixing_prefix(f: &MsrSubspaceFamily, t: usize) -> Vec<MapConstraint> {
    f.subspaces()[..t].iter().cloned().map(MapConstraint::fixing).collect()
}

/// The three dimensions compared in the decay proof for index `t` (1-based)
/// and map `j` (0 = identity):
/// `I(H_1..H_{t-1}, H_t)`, `I(.., Phi_{t,j}(H_t) -> H_t)` and
/// `I(.., Phi_{t,j}(H_t) -> Phi_{t,1}(H_t))`.
pub fn isomorphism_dims(f: &MsrSubspaceFamily, t: usize, j: usize) -> Result<[usize; 3]> {
    if t == 0 || t > f.k() {
        return Err(Error::IndexOutOfRange(format!("t = {t} with k = {}", f.k())));
    }
    if f.r() < 2 || j >= f.r() {
        return Err(Error::IndexOutOfRange(format!("j = {j} with r = {}", f.r())));
    }
    let (field, ell) = (f.field(), f.ell());
    let h = f.subspace(t - 1);
    let image_j = h.apply_map(&f.map(t - 1, j)?)?;
    let image_1 = h.apply_map(&f.map(t - 1, 1)?)?;
    let base = fixing_prefix(f, t - 1);
    let with = |c: MapConstraint| -> Result<usize> {
        let mut cs = base.clone();
        cs.push(c);
        invariant_dim(field, ell, &cs)
    };
    Ok([
        with(MapConstraint::fixing(h.clone()))?,
        with(MapConstraint::new(image_j.clone(), h.clone())?)?,
        with(MapConstraint::new(image_j, image_1)?)?,
    ])
}

/// True iff the three dimensions of [`isomorphism_dims`] agree.
pub fn decay_isomorphism_check(f: &MsrSubspaceFamily, t: usize, j: usize) -> Result<bool> {
    let [a, b, c] = isomorphism_dims(f, t, j)?;
    Ok(a == b && a == c)
}

/// The two facts that force the joint solution space to zero: the images of
/// `H_t` span `F^ell`, and `H_t ∩ Phi_{t,1}(H_t) = {0}`.
pub fn proof_disjointness(f: &MsrSubspaceFamily, t: usize) -> Result<bool> {
    if t == 0 || t > f.k() || f.r() < 2 {
        return Err(Error::IndexOutOfRange(format!("t = {t}")));
    }
    let images = f.images(t - 1)?;
    let spans = Subspace::sum_all(f.field(), f.ell(), &images)?.is_full();
    let disjoint = images[0].intersect(&images[1])?.is_zero();
    Ok(spans && disjoint)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ProofStep {
    pub t: usize,
    pub previous: usize,
    pub current: usize,
    /// `sum_j I(.., Phi_j H_t -> H_t) + sum_j I(.., Phi_j H_t -> Phi_1 H_t)`.
    pub paired_sum: usize,
}

impl ProofStep {
    /// `paired_sum = 2r * current` and `paired_sum <= (2r-1) * previous`.
    pub fn holds(&self, r: usize) -> bool {
        self.paired_sum == 2 * r * self.current && self.paired_sum <= (2 * r - 1) * self.previous
    }
}

/// Evaluates every quantity in the decay argument for step `t` (1-based).
pub fn proof_step(f: &MsrSubspaceFamily, t: usize) -> Result<ProofStep> {
    if t == 0 || t > f.k() || f.r() < 2 {
        return Err(Error::IndexOutOfRange(format!("t = {t}")));
    }
    let (field, ell) = (f.field(), f.ell());
    let base = fixing_prefix(f, t - 1);
    let previous = invariant_dim(field, ell, &base)?;
    let images = f.images(t - 1)?;
    let mut paired_sum = 0;
    for img in &images {
        for target in [&images[0], &images[1]] {
            let mut cs = base.clone();
            cs.push(MapConstraint::new(img.clone(), target.clone())?);
            paired_sum += invariant_dim(field, ell, &cs)?;
        }
    }
    let mut cs = base;
    cs.push(MapConstraint::fixing(images[0].clone()));
    let current = invariant_dim(field, ell, &cs)?;
    Ok(ProofStep { t, previous, current, paired_sum })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::msr_family::construct_tensor_family;

    fn gf(p: u64) -> FieldSpec {
        FieldSpec::new(p).unwrap()
    }

    #[test]
    fn no_constraints_gives_everything() {
        assert_eq!(invariant_dim(gf(3), 4, &[]).unwrap(), 16);
        assert!(invariant_space(gf(3), 3, &[]).unwrap().is_full());
    }

    #[test]
    fn full_into_zero_only_zero_map() {
        let c = MapConstraint::new(Subspace::full(gf(3), 3), Subspace::zero(gf(3), 3)).unwrap();
        assert_eq!(invariant_dim(gf(3), 3, &[c]).unwrap(), 0);
    }

    #[test]
    fn single_fixed_subspace_block_triangular() {
        for (ell, d) in [(2, 1), (4, 2), (5, 2), (6, 3)] {
            let h = Subspace::coordinate(gf(5), ell, &(0..d).collect::<Vec<_>>());
            let dim = invariant_dim(gf(5), ell, &[MapConstraint::fixing(h)]).unwrap();
            assert_eq!(dim, ell * ell - d * (ell - d));
        }
    }

    #[test]
    fn space_elements_satisfy_constraints() {
        let f = gf(3);
        let a = Subspace::span_of(&Matrix::from_rows(f, 3, &[[1, 2, 0]]).unwrap());
        let b = Subspace::span_of(&Matrix::from_rows(f, 3, &[[0, 1, 1], [1, 0, 0]]).unwrap());
        let c = MapConstraint::new(a.clone(), b.clone()).unwrap();
        let space = invariant_space(f, 3, &[c]).unwrap();
        assert_eq!(space.dim(), 9 - 1);
        for v in space.basis().row_iter() {
            let psi = unvectorize(f, 3, v).unwrap();
            assert!(b.contains(&a.apply_map(&psi).unwrap()).unwrap());
        }
    }

    #[test]
    fn tensor_family_first_subspace() {
        let fam = construct_tensor_family(2, 2, gf(3), 2).unwrap();
        let dim = invariant_dim(gf(3), 4, &[MapConstraint::fixing(fam.subspace(0).clone())]).unwrap();
        assert_eq!(dim, 12);
    }

    #[test]
    fn decay_for_small_family() {
        let fam = construct_tensor_family(2, 2, gf(3), 2).unwrap();
        let tr = decay_trace(&fam, &PrefixOrder::Identity).unwrap();
        assert_eq!(tr.rows.len(), 7);
        assert_eq!(tr.rows[0].dim, 16);
        assert!(tr.passed(), "{}", tr.to_csv());
        assert_eq!(tr.rows[1].dim, 12);
        // (3/4)^1 * 16 = 12
        assert_eq!(tr.rows[1].bound_numerator, BigUint::from(12u32));
        assert_eq!(tr.rows[1].bound_denominator, BigUint::from(1u32));
    }

    #[test]
    fn decay_rejects_unverified() {
        let f = gf(3);
        let h = Subspace::coordinate(f, 2, &[0]);
        let fam = MsrSubspaceFamily::new(2, 2, f, vec![h], vec![vec![Matrix::identity(f, 2)]]).unwrap();
        assert_eq!(decay_trace(&fam, &PrefixOrder::Identity), Err(Error::VerificationRequired));
    }

    #[test]
    fn decay_of_empty_family() {
        let fam = MsrSubspaceFamily::new(4, 2, gf(3), vec![], vec![]).unwrap();
        let tr = decay_trace(&fam, &PrefixOrder::Identity).unwrap();
        assert_eq!(tr.dims(), vec![16]);
        assert!(tr.passed());
    }

    #[test]
    fn order_parsing() {
        assert_eq!("identity".parse::<PrefixOrder>().unwrap(), PrefixOrder::Identity);
        assert_eq!("random:7".parse::<PrefixOrder>().unwrap(), PrefixOrder::Random(7));
        assert_eq!("2,0,1".parse::<PrefixOrder>().unwrap(), PrefixOrder::Explicit(vec![2, 0, 1]));
        assert!("random:x".parse::<PrefixOrder>().is_err());
        assert!(PrefixOrder::Explicit(vec![0, 0]).resolve(2).is_err());
        assert!(PrefixOrder::Explicit(vec![0]).resolve(2).is_err());
        let a = PrefixOrder::Random(3).resolve(9).unwrap();
        assert_eq!(a, PrefixOrder::Random(3).resolve(9).unwrap());
        let mut s = a.clone();
        s.sort();
        assert_eq!(s, (0..9).collect::<Vec<_>>());
    }

    #[test]
    fn isomorphism_and_disjointness() {
        let fam = construct_tensor_family(2, 2, gf(3), 2).unwrap();
        for t in 1..=fam.k() {
            assert!(decay_isomorphism_check(&fam, t, 0).unwrap());
            assert!(decay_isomorphism_check(&fam, t, 1).unwrap());
            assert!(proof_disjointness(&fam, t).unwrap());
            let step = proof_step(&fam, t).unwrap();
            assert!(step.holds(2), "{step:?}");
        }
        assert!(decay_isomorphism_check(&fam, 0, 0).is_err());
        assert!(decay_isomorphism_check(&fam, 7, 0).is_err());
        assert!(decay_isomorphism_check(&fam, 1, 2).is_err());
    }

    #[test]
    fn csv_layout() {
        let fam = construct_tensor_family(2, 1, gf(3), 2).unwrap();
        let csv = decay_trace(&fam, &PrefixOrder::Identity).unwrap().to_csv();
        let mut lines = csv.lines();
        assert_eq!(lines.next(), Some("t,I_t,bound_numerator,bound_denominator,pass"));
        assert_eq!(lines.next(), Some("0,4,4,1,true"));
        assert_eq!(lines.next(), Some("1,3,3,1,true"));
    }
}
