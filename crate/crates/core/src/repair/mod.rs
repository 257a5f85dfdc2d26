//! Systematic vector codes and their linear repair schemes.
//!
//! A code stores `k` data blocks `c_0..c_{k-1}` of length `ell` and `r = n - k`
//! parity blocks `c_{k+i} = sum_j C_{i,j} c_j` (column-vector convention, all
//! indices 0-based). Repairing systematic node `m` downloads `S_{i,m} c_{k+i}`
//! from each parity node and `ell / r` symbols from every other systematic node.

mod evenodd;
pub mod random;

use num::rational::Ratio;
use serde::{Deserialize, Serialize};

pub use evenodd::{evenodd_code, evenodd_constant_instance, evenodd_repair, evenodd_scheme, EvenoddNode};

use crate::error::{Error, Result};
use crate::field::FieldSpec;
use crate::matrix::Matrix;
use crate::msr_family::MsrSubspaceFamily;
use crate::subspace::Subspace;

pub type Block = Vec<u32>;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "CodeRepr", into = "CodeRepr")]
pub struct VectorCodeSystematic {
    n: usize,
    k: usize,
    ell: usize,
    field: FieldSpec,
    /// `parity[i][j] = C_{i,j}`, an `r x k` grid.
    parity: Vec<Vec<Matrix>>,
}

#[derive(Serialize, Deserialize)]
struct CodeRepr {
    n: usize,
    k: usize,
    ell: usize,
    p: u64,
    parity: Vec<Vec<Matrix>>,
}

impl TryFrom<CodeRepr> for VectorCodeSystematic {
    type Error = Error;
    fn try_from(c: CodeRepr) -> Result<Self> {
        VectorCodeSystematic::new(c.n, c.k, c.ell, FieldSpec::new(c.p)?, c.parity)
    }
}

impl From<VectorCodeSystematic> for CodeRepr {
    fn from(c: VectorCodeSystematic) -> Self {
        CodeRepr { n: c.n, k: c.k, ell: c.ell, p: c.field.p() as u64, parity: c.parity }
    }
}

fn check_params(n: usize, k: usize, ell: usize) -> Result<usize> {
    if k == 0 || k >= n {
        return Err(Error::BadParams(format!("need 1 <= k < n, got n = {n}, k = {k}")));
    }
    let r = n - k;
    if ell == 0 || !ell.is_multiple_of(r) {
        return Err(Error::BadParams(format!("r = {r} must divide ell = {ell}")));
    }
    Ok(r)
}

impl VectorCodeSystematic {
    pub fn new(n: usize, k: usize, ell: usize, field: FieldSpec, parity: Vec<Vec<Matrix>>) -> Result<Self> {
        let r = check_params(n, k, ell)?;
        if parity.len() != r || parity.iter().any(|row| row.len() != k) {
            return Err(Error::ShapeMismatch(format!("parity grid must be {r}x{k}")));
        }
        for (i, row) in parity.iter().enumerate() {
            for (j, c) in row.iter().enumerate() {
                if c.field() != field || c.shape() != (ell, ell) {
                    return Err(Error::ShapeMismatch(format!("C[{i}][{j}] is not {ell}x{ell} over {field}")));
                }
                if !c.is_invertible() {
                    return Err(Error::BadParams(format!("C[{i}][{j}] is not invertible")));
                }
            }
        }
        Ok(VectorCodeSystematic { n, k, ell, field, parity })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn r(&self) -> usize {
        self.n - self.k
    }

    pub fn ell(&self) -> usize {
        self.ell
    }

    pub fn field(&self) -> FieldSpec {
        self.field
    }

    pub fn parity(&self, i: usize, j: usize) -> &Matrix {
        &self.parity[i][j]
    }

    pub fn encode(&self, data: &[Block]) -> Result<Vec<Block>> {
        if data.len() != self.k || data.iter().any(|b| b.len() != self.ell) {
            return Err(Error::ShapeMismatch(format!("expected {} blocks of length {}", self.k, self.ell)));
        }
        let f = self.field;
        let mut out: Vec<Block> = data.iter().map(|b| b.iter().map(|&x| x % f.p()).collect()).collect();
        for row in &self.parity {
            let mut acc = vec![0; self.ell];
            for (c, d) in row.iter().zip(data) {
                for (a, x) in acc.iter_mut().zip(c.mul_vec(d)?) {
                    *a = f.add(*a, x);
                }
            }
            out.push(acc);
        }
        Ok(out)
    }

    /// Rows `node*ell .. (node+1)*ell` of the `n ell x k ell` generator.
    pub fn generator_block(&self, node: usize) -> Matrix {
        let (ell, k) = (self.ell, self.k);
        if node < k {
            Matrix::from_fn(self.field, ell, k * ell, |a, b| u32::from(b == node * ell + a))
        } else {
            let row = &self.parity[node - k];
            Matrix::from_fn(self.field, ell, k * ell, |a, b| row[b / ell].entry(a, b % ell))
        }
    }

    /// Exhaustive MDS check: every `k` blocks determine the data. Cost grows
    /// with `C(n, k)`, so this is a diagnostic for tiny codes only.
    pub fn is_mds(&self) -> bool {
        let blocks: Vec<Matrix> = (0..self.n).map(|i| self.generator_block(i)).collect();
        let mut subset: Vec<usize> = (0..self.k).collect();
        loop {
            let parts: Vec<&Matrix> = subset.iter().map(|&i| &blocks[i]).collect();
            let g = Matrix::vstack(self.field, self.k * self.ell, &parts).expect("same shape");
            if !g.is_invertible() {
                return false;
            }
            // next combination
            let mut i = self.k;
            while i > 0 && subset[i - 1] == self.n - self.k + i - 1 {
                i -= 1;
            }
            if i == 0 {
                return true;
            }
            subset[i - 1] += 1;
            for j in i..self.k {
                subset[j] = subset[j - 1] + 1;
            }
        }
    }
}

/// Repair matrices `S_{i,m}` (`ell/r x ell`) for every parity `i` and systematic node `m`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GeneralRepairScheme {
    n: usize,
    k: usize,
    ell: usize,
    field: FieldSpec,
    /// `matrices[i][m] = S_{i,m}`.
    matrices: Vec<Vec<Matrix>>,
}

/// Repair matrices that depend only on the node being repaired.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConstantRepairScheme {
    n: usize,
    k: usize,
    ell: usize,
    field: FieldSpec,
    matrices: Vec<Matrix>,
}

fn check_repair_matrix(s: &Matrix, field: FieldSpec, ell: usize, r: usize, what: &str) -> Result<()> {
    if s.field() != field || s.shape() != (ell / r, ell) {
        return Err(Error::ShapeMismatch(format!("{what} must be {}x{ell} over {field}", ell / r)));
    }
    if s.rank() != ell / r {
        return Err(Error::BadParams(format!("{what} does not have full row rank")));
    }
    Ok(())
}

impl GeneralRepairScheme {
    pub fn new(n: usize, k: usize, ell: usize, field: FieldSpec, matrices: Vec<Vec<Matrix>>) -> Result<Self> {
        let r = check_params(n, k, ell)?;
        if matrices.len() != r || matrices.iter().any(|row| row.len() != k) {
            return Err(Error::ShapeMismatch(format!("repair grid must be {r}x{k}")));
        }
        for (i, row) in matrices.iter().enumerate() {
            for (m, s) in row.iter().enumerate() {
                check_repair_matrix(s, field, ell, r, &format!("S[{i}][{m}]"))?;
            }
        }
        Ok(GeneralRepairScheme { n, k, ell, field, matrices })
    }

    pub fn matrix(&self, i: usize, m: usize) -> &Matrix {
        &self.matrices[i][m]
    }

    fn fits(&self, code: &VectorCodeSystematic) -> Result<()> {
        if (self.n, self.k, self.ell, self.field) != (code.n, code.k, code.ell, code.field) {
            return Err(Error::ShapeMismatch("scheme parameters differ from code".into()));
        }
        Ok(())
    }
}

impl ConstantRepairScheme {
    pub fn new(n: usize, k: usize, ell: usize, field: FieldSpec, matrices: Vec<Matrix>) -> Result<Self> {
        let r = check_params(n, k, ell)?;
        if matrices.len() != k {
            return Err(Error::ShapeMismatch(format!("need {k} repair matrices")));
        }
        for (m, s) in matrices.iter().enumerate() {
            check_repair_matrix(s, field, ell, r, &format!("S[{m}]"))?;
        }
        Ok(ConstantRepairScheme { n, k, ell, field, matrices })
    }

    pub fn matrix(&self, m: usize) -> &Matrix {
        &self.matrices[m]
    }

    /// `S_{i,m} = S_m` for every parity `i`.
    pub fn to_general(&self) -> GeneralRepairScheme {
        let r = self.n - self.k;
        GeneralRepairScheme {
            n: self.n,
            k: self.k,
            ell: self.ell,
            field: self.field,
            matrices: vec![self.matrices.clone(); r],
        }
    }
}

/// Either scheme kind, as stored on disk.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "SchemeRepr", into = "SchemeRepr")]
pub enum RepairScheme {
    Constant(ConstantRepairScheme),
    General(GeneralRepairScheme),
}

#[derive(Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
enum SchemeRepr {
    Constant { n: usize, k: usize, ell: usize, p: u64, repair: Vec<Matrix> },
    General { n: usize, k: usize, ell: usize, p: u64, repair: Vec<Vec<Matrix>> },
}

impl TryFrom<SchemeRepr> for RepairScheme {
    type Error = Error;
    fn try_from(s: SchemeRepr) -> Result<Self> {
        Ok(match s {
            SchemeRepr::Constant { n, k, ell, p, repair } => {
                RepairScheme::Constant(ConstantRepairScheme::new(n, k, ell, FieldSpec::new(p)?, repair)?)
            }
            SchemeRepr::General { n, k, ell, p, repair } => {
                RepairScheme::General(GeneralRepairScheme::new(n, k, ell, FieldSpec::new(p)?, repair)?)
            }
        })
    }
}

impl From<RepairScheme> for SchemeRepr {
    fn from(s: RepairScheme) -> Self {
        match s {
            RepairScheme::Constant(c) => {
                SchemeRepr::Constant { n: c.n, k: c.k, ell: c.ell, p: c.field.p() as u64, repair: c.matrices }
            }
            RepairScheme::General(g) => {
                SchemeRepr::General { n: g.n, k: g.k, ell: g.ell, p: g.field.p() as u64, repair: g.matrices }
            }
        }
    }
}

impl RepairScheme {
    pub fn to_general(&self) -> GeneralRepairScheme {
        match self {
            RepairScheme::Constant(c) => c.to_general(),
            RepairScheme::General(g) => g.clone(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct InterferenceCheck {
    pub other: usize,
    /// `R(S_{0,m} C_{0,m'}) = ... = R(S_{r-1,m} C_{r-1,m'})`.
    pub aligned: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SchemeReport {
    pub node: usize,
    /// `R(S_{i,m} C_{i,m})` over all parities is a direct sum equal to `F^ell`.
    pub full_regeneration: bool,
    pub interference: Vec<InterferenceCheck>,
    pub passed: bool,
}

pub fn check_msr_scheme(code: &VectorCodeSystematic, scheme: &GeneralRepairScheme, m: usize) -> Result<SchemeReport> {
    scheme.fits(code)?;
    if m >= code.k {
        return Err(Error::IndexOutOfRange(format!("node {m} is not systematic (k = {})", code.k)));
    }
    let r = code.r();
    let own: Vec<Subspace> = (0..r)
        .map(|i| Ok(Subspace::span_of(&scheme.matrix(i, m).matmul(code.parity(i, m))?)))
        .collect::<Result<_>>()?;
    let full_regeneration = Subspace::is_direct_sum_full(&own)?;
    let mut interference = Vec::new();
    for other in (0..code.k).filter(|&o| o != m) {
        let first = Subspace::span_of(&scheme.matrix(0, m).matmul(code.parity(0, other))?);
        let mut aligned = true;
        for i in 1..r {
            aligned &= Subspace::span_of(&scheme.matrix(i, m).matmul(code.parity(i, other))?) == first;
        }
        interference.push(InterferenceCheck { other, aligned });
    }
    let passed = full_regeneration && interference.iter().all(|c| c.aligned);
    Ok(SchemeReport { node: m, full_regeneration, interference, passed })
}

/// `(n - 1) ell / (n - k)`.
pub fn cutset_bound(n: usize, k: usize, ell: usize) -> Result<Ratio<u64>> {
    let r = check_params(n, k, ell)?;
    Ok(Ratio::new(((n - 1) * ell) as u64, r as u64))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Transmission {
    pub helper: usize,
    pub symbols: Vec<u32>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct BandwidthReport {
    pub node: usize,
    /// `(helper, symbols downloaded)`.
    pub per_helper: Vec<(usize, usize)>,
    pub total: usize,
    pub cutset: Ratio<u64>,
}

impl BandwidthReport {
    fn from_transmissions(node: usize, tx: &[Transmission], cutset: Ratio<u64>) -> Self {
        let per_helper: Vec<(usize, usize)> = tx.iter().map(|t| (t.helper, t.symbols.len())).collect();
        let total = per_helper.iter().map(|&(_, b)| b).sum();
        BandwidthReport { node, per_helper, total, cutset }
    }

    pub fn meets_cutset(&self) -> bool {
        Ratio::from_integer(self.total as u64) == self.cutset
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct RepairOutcome {
    pub block: Block,
    pub transmissions: Vec<Transmission>,
    pub bandwidth: BandwidthReport,
}

fn check_erased(code: &VectorCodeSystematic, node: usize, blocks: &[Option<Block>]) -> Result<()> {
    if blocks.len() != code.n {
        return Err(Error::ShapeMismatch(format!("codeword has {} blocks, expected {}", blocks.len(), code.n)));
    }
    for (i, b) in blocks.iter().enumerate() {
        match b {
            Some(b) if i != node && b.len() == code.ell => {}
            None if i == node => {}
            _ if i == node => return Err(Error::BadParams(format!("block {node} must be erased"))),
            _ => return Err(Error::ShapeMismatch(format!("block {i} missing or of wrong length"))),
        }
    }
    Ok(())
}

/// Erases block `node` of a full codeword.
pub fn erase(codeword: &[Block], node: usize) -> Vec<Option<Block>> {
    codeword.iter().enumerate().map(|(i, b)| (i != node).then(|| b.clone())).collect()
}

/// Regenerates systematic block `m` from `ell / r` symbols per helper.
///
/// Parity `i` sends `S_{i,m} c_{k+i}`. Systematic `m'` sends
/// `S_{0,m} C_{0,m'} c_{m'}`; since all `S_{i,m} C_{i,m'}` share a row space,
/// each interference term `S_{i,m} C_{i,m'} c_{m'}` is a fixed linear image of
/// what `m'` sent and can be subtracted. The cleaned parity symbols stack to
/// `[S_{i,m} C_{i,m}]_i c_m`, a full-rank square system.
pub fn repair_node(
    code: &VectorCodeSystematic,
    scheme: &GeneralRepairScheme,
    m: usize,
    blocks: &[Option<Block>],
) -> Result<RepairOutcome> {
    let report = check_msr_scheme(code, scheme, m)?;
    if !report.passed {
        return Err(Error::SchemeInvalid(format!("scheme fails MSR repair checks at node {m}")));
    }
    check_erased(code, m, blocks)?;
    let f = code.field;
    let (k, r) = (code.k, code.r());
    let block = |i: usize| blocks[i].as_ref().expect("checked");

    let mut tx = Vec::with_capacity(code.n - 1);
    for i in 0..r {
        tx.push(Transmission { helper: k + i, symbols: scheme.matrix(i, m).mul_vec(block(k + i))? });
    }
    let mut parity_syms: Vec<Vec<u32>> = tx.iter().map(|t| t.symbols.clone()).collect();
    for other in (0..k).filter(|&o| o != m) {
        let sent_map = scheme.matrix(0, m).matmul(code.parity(0, other))?;
        let sent = sent_map.mul_vec(block(other))?;
        for (i, syms) in parity_syms.iter_mut().enumerate() {
            let x = sent_map.solve_left(&scheme.matrix(i, m).matmul(code.parity(i, other))?)?;
            for (s, v) in syms.iter_mut().zip(x.mul_vec(&sent)?) {
                *s = f.sub(*s, v);
            }
        }
        tx.push(Transmission { helper: other, symbols: sent });
    }
    tx.sort_by_key(|t| t.helper);

    let own: Vec<Matrix> = (0..r).map(|i| scheme.matrix(i, m).matmul(code.parity(i, m))).collect::<Result<_>>()?;
    let refs: Vec<&Matrix> = own.iter().collect();
    let system = Matrix::vstack(f, code.ell, &refs)?;
    let rhs: Vec<u32> = parity_syms.into_iter().flatten().collect();
    let solved = system.solve(&Matrix::row_vector(f, &rhs).transpose())?;
    debug_assert!(system.is_invertible());
    let out: Block = solved.data().to_vec();

    let bandwidth = BandwidthReport::from_transmissions(m, &tx, cutset_bound(code.n, k, code.ell)?);
    Ok(RepairOutcome { block: out, transmissions: tx, bandwidth })
}

/// Repairs any node from arbitrary per-helper linear functionals: helper `h`
/// sends `F_h c_h`, and the decoder is found by solving for the target block
/// as a combination of everything received.
pub fn repair_with_functionals(
    code: &VectorCodeSystematic,
    node: usize,
    functionals: &[(usize, Matrix)],
    blocks: &[Option<Block>],
) -> Result<RepairOutcome> {
    check_erased(code, node, blocks)?;
    let f = code.field;
    let width = code.k * code.ell;
    let mut received = Vec::new();
    let mut tx = Vec::new();
    let mut parts = Vec::new();
    for (h, func) in functionals {
        if *h == node || *h >= code.n {
            return Err(Error::BadParams(format!("helper {h} cannot assist node {node}")));
        }
        let syms = func.mul_vec(blocks[*h].as_ref().expect("checked"))?;
        received.extend_from_slice(&syms);
        tx.push(Transmission { helper: *h, symbols: syms });
        parts.push(func.matmul(&code.generator_block(*h))?);
    }
    let refs: Vec<&Matrix> = parts.iter().collect();
    let seen = Matrix::vstack(f, width, &refs)?;
    let decoder = seen
        .solve_left(&code.generator_block(node))
        .map_err(|_| Error::SchemeInvalid(format!("functionals do not determine node {node}")))?;
    let out = decoder.mul_vec(&received)?;
    let bandwidth = BandwidthReport::from_transmissions(node, &tx, cutset_bound(code.n, code.k, code.ell)?);
    Ok(RepairOutcome { block: out, transmissions: tx, bandwidth })
}

/// Builds `H_m = R(S_m)` and `Phi_{m,j} : x -> x C_{j,m} C_{0,m}^{-1}` without
/// checking the scheme first.
pub fn extract_family_unchecked(code: &VectorCodeSystematic, scheme: &ConstantRepairScheme) -> Result<MsrSubspaceFamily> {
    scheme.to_general().fits(code)?;
    let r = code.r();
    let mut subspaces = Vec::with_capacity(code.k);
    let mut maps = Vec::with_capacity(code.k);
    for m in 0..code.k {
        subspaces.push(Subspace::span_of(scheme.matrix(m)));
        let base_inv = code.parity(0, m).invert()?;
        maps.push((1..r).map(|j| code.parity(j, m).matmul(&base_inv)).collect::<Result<Vec<_>>>()?);
    }
    MsrSubspaceFamily::new(code.ell, r, code.field, subspaces, maps)
}

/// [`extract_family_unchecked`] after confirming the constant scheme passes the
/// repair checks at every systematic node.
pub fn extract_family(code: &VectorCodeSystematic, scheme: &ConstantRepairScheme) -> Result<MsrSubspaceFamily> {
    let general = scheme.to_general();
    for m in 0..code.k {
        if !check_msr_scheme(code, &general, m)?.passed {
            return Err(Error::SchemeInvalid(format!("constant scheme fails at node {m}")));
        }
    }
    extract_family_unchecked(code, scheme)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn gf(p: u64) -> FieldSpec {
        FieldSpec::new(p).unwrap()
    }

    #[test]
    fn cutset_examples() {
        assert_eq!(cutset_bound(4, 2, 2).unwrap(), Ratio::from_integer(3));
        assert_eq!(cutset_bound(5, 4, 3).unwrap(), Ratio::from_integer(12));
        assert_eq!(cutset_bound(14, 10, 16).unwrap(), Ratio::from_integer(52));
        assert_eq!(cutset_bound(7, 4, 3).unwrap(), Ratio::from_integer(6));
        assert!(cutset_bound(4, 2, 3).is_err());
        assert!(cutset_bound(4, 4, 2).is_err());
        assert!(cutset_bound(4, 0, 2).is_err());
    }

    fn identity_code(n: usize, k: usize, ell: usize, p: u64) -> VectorCodeSystematic {
        let f = gf(p);
        let parity = vec![vec![Matrix::identity(f, ell); k]; n - k];
        VectorCodeSystematic::new(n, k, ell, f, parity).unwrap()
    }

    #[test]
    fn encode_examples() {
        let code = identity_code(3, 1, 2, 5);
        assert_eq!(code.encode(&[vec![3, 4]]).unwrap(), vec![vec![3, 4], vec![3, 4], vec![3, 4]]);
        let code = identity_code(4, 2, 2, 3);
        assert_eq!(code.encode(&[vec![0, 0], vec![0, 0]]).unwrap(), vec![vec![0, 0]; 4]);
        assert!(code.encode(&[vec![0, 0]]).is_err());
    }

    #[test]
    fn rejects_singular_parity() {
        let f = gf(3);
        let parity = vec![vec![Matrix::zeros(f, 2, 2)]];
        assert!(matches!(VectorCodeSystematic::new(2, 1, 2, f, parity), Err(Error::BadParams(_))));
    }

    #[test]
    fn coinciding_spans_fail_regeneration() {
        let f = gf(3);
        let code = identity_code(4, 2, 2, 3);
        let s = Matrix::from_rows(f, 2, &[[1, 1]]).unwrap();
        let scheme = GeneralRepairScheme::new(4, 2, 2, f, vec![vec![s.clone(); 2]; 2]).unwrap();
        let rep = check_msr_scheme(&code, &scheme, 0).unwrap();
        assert!(!rep.full_regeneration);
        assert!(!rep.passed);
        let erased = erase(&code.encode(&[vec![1, 2], vec![0, 1]]).unwrap(), 0);
        assert!(matches!(repair_node(&code, &scheme, 0, &erased), Err(Error::SchemeInvalid(_))));
    }

    #[test]
    fn r_equals_one_needs_invertible_s() {
        let f = gf(5);
        let c = Matrix::from_rows(f, 2, &[[1, 2], [3, 4]]).unwrap();
        let code = VectorCodeSystematic::new(3, 2, 2, f, vec![vec![c.clone(), Matrix::identity(f, 2)]]).unwrap();
        let s = Matrix::from_rows(f, 2, &[[2, 1], [1, 1]]).unwrap();
        let scheme = GeneralRepairScheme::new(3, 2, 2, f, vec![vec![s.clone(), s]]).unwrap();
        let rep = check_msr_scheme(&code, &scheme, 0).unwrap();
        assert!(rep.full_regeneration && rep.passed);
        // rank-deficient S is rejected when the scheme is built
        let bad = Matrix::from_rows(f, 2, &[[1, 1], [2, 2]]).unwrap();
        assert!(GeneralRepairScheme::new(3, 2, 2, f, vec![vec![bad.clone(), bad]]).is_err());
        let data = vec![vec![1, 4], vec![2, 3]];
        let cw = code.encode(&data).unwrap();
        let out = repair_node(&code, &scheme.clone(), 0, &erase(&cw, 0)).unwrap();
        assert_eq!(out.block, data[0]);
        assert_eq!(out.bandwidth.total, 4);
        assert!(out.bandwidth.meets_cutset());
    }

    #[test]
    fn identity_code_extraction_fails_verify() {
        let f = gf(3);
        let code = identity_code(4, 2, 2, 3);
        let s = Matrix::from_rows(f, 2, &[[1, 0]]).unwrap();
        let scheme = ConstantRepairScheme::new(4, 2, 2, f, vec![s.clone(), s]).unwrap();
        assert!(matches!(extract_family(&code, &scheme), Err(Error::SchemeInvalid(_))));
        let fam = extract_family_unchecked(&code, &scheme).unwrap();
        assert_eq!(fam.maps()[0][0], Matrix::identity(f, 2));
        assert!(!fam.verify().unwrap().passed);
    }

    #[test]
    fn k_one_extraction() {
        let f = gf(3);
        let c2 = Matrix::from_rows(f, 2, &[[0, 1], [1, 0]]).unwrap();
        let code = VectorCodeSystematic::new(3, 1, 2, f, vec![vec![Matrix::identity(f, 2)], vec![c2]]).unwrap();
        let s = Matrix::from_rows(f, 2, &[[1, 0]]).unwrap();
        let scheme = ConstantRepairScheme::new(3, 1, 2, f, vec![s]).unwrap();
        let fam = extract_family(&code, &scheme).unwrap();
        assert_eq!(fam.k(), 1);
        let rep = fam.verify().unwrap();
        assert!(rep.passed && rep.invariance.is_empty());
    }

    #[test]
    fn scheme_json_roundtrip() {
        let (code, scheme) = evenodd_constant_instance();
        let s = serde_json::to_string(&RepairScheme::Constant(scheme.clone())).unwrap();
        assert!(s.starts_with(r#"{"kind":"constant","n":3,"k":1,"ell":2,"p":2,"repair":["#));
        assert_eq!(serde_json::from_str::<RepairScheme>(&s).unwrap(), RepairScheme::Constant(scheme));
        let g = RepairScheme::General(evenodd_scheme());
        let back: RepairScheme = serde_json::from_str(&serde_json::to_string(&g).unwrap()).unwrap();
        assert_eq!(back, g);
        let c = serde_json::to_string(&code).unwrap();
        assert!(c.starts_with(r#"{"n":3,"k":1,"ell":2,"p":2,"parity":[[{"rows":2"#));
        assert_eq!(serde_json::from_str::<VectorCodeSystematic>(&c).unwrap(), code);
    }

    #[test]
    fn erased_codeword_validation() {
        let code = identity_code(3, 1, 2, 5);
        let cw = code.encode(&[vec![1, 2]]).unwrap();
        let mut bad: Vec<Option<Block>> = cw.iter().cloned().map(Some).collect();
        assert!(check_erased(&code, 0, &bad).is_err());
        bad[0] = None;
        assert!(check_erased(&code, 0, &bad).is_ok());
        bad[1] = None;
        assert!(check_erased(&code, 0, &bad).is_err());
    }
}
