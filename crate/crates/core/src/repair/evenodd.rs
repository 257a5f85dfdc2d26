//! The (4, 2) EVENODD code over GF(2) with two bits per node.
//!
//! | S1 | S2 | P1      | P2           |
//! |----|----|---------|--------------|
//! | a1 | b1 | a1 + b1 | a2 + b1      |
//! | a2 | b2 | a2 + b2 | a1 + a2 + b2 |
//!
//! Each node is repaired from one bit per helper:
//!
//! * S1: `(S2, P1, P2)` send `(b1, a1 + b1, a2 + b1)`
//! * S2: `(S1, P1, P2)` send `(a2, a2 + b2, a2 + b1)`
//! * P1: `(S1, S2, P2)` send `(a1, b1, a1 + a2 + b2)`
//! * P2: `(S1, S2, P1)` send `(a2, b1, (a1 + b1) + (a2 + b2))`

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::field::FieldSpec;
use crate::matrix::Matrix;

use super::{erase, repair_node, repair_with_functionals, Block, ConstantRepairScheme, GeneralRepairScheme, RepairOutcome, VectorCodeSystematic};

fn gf2() -> FieldSpec {
    FieldSpec::new(2).expect("2 is prime")
}

fn mat(rows: &[[i64; 2]]) -> Matrix {
    Matrix::from_rows(gf2(), 2, rows).expect("2 columns")
}

pub fn evenodd_code() -> VectorCodeSystematic {
    let id = mat(&[[1, 0], [0, 1]]);
    // P2 = (a2, a1 + a2) + (b1, b2)
    let c21 = mat(&[[0, 1], [1, 1]]);
    VectorCodeSystematic::new(4, 2, 2, gf2(), vec![vec![id.clone(), id.clone()], vec![c21, id]])
        .expect("valid EVENODD parameters")
}

/// Repair matrices for the two systematic nodes, read off the transmissions
/// above: for S1 both parities send their first bit; for S2, P1 sends its
/// second bit and P2 its first.
pub fn evenodd_scheme() -> GeneralRepairScheme {
    let first = mat(&[[1, 0]]);
    let second = mat(&[[0, 1]]);
    GeneralRepairScheme::new(4, 2, 2, gf2(), vec![vec![first.clone(), second], vec![first.clone(), first]])
        .expect("valid scheme")
}

/// The part of EVENODD that admits constant repair matrices.
///
/// S1 is repaired with `S = (1 0)` from both parities, but no single `S`
/// works for S2 (both `C_{i,2}` are the identity, so the two parity spans
/// always coincide). Fixing `b = 0` leaves a (3, 1, 2) code in which S1 is
/// the only systematic node; its constant scheme yields a one-subspace family.
pub fn evenodd_constant_instance() -> (VectorCodeSystematic, ConstantRepairScheme) {
    let code = evenodd_code();
    let shortened = VectorCodeSystematic::new(
        3,
        1,
        2,
        gf2(),
        vec![vec![code.parity(0, 0).clone()], vec![code.parity(1, 0).clone()]],
    )
    .expect("valid");
    let scheme = ConstantRepairScheme::new(3, 1, 2, gf2(), vec![mat(&[[1, 0]])]).expect("valid");
    (shortened, scheme)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum EvenoddNode {
    S1,
    S2,
    P1,
    P2,
}

impl EvenoddNode {
    pub const ALL: [EvenoddNode; 4] = [EvenoddNode::S1, EvenoddNode::S2, EvenoddNode::P1, EvenoddNode::P2];

    pub fn index(self) -> usize {
        self as usize
    }
}

impl fmt::Display for EvenoddNode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            EvenoddNode::S1 => "S1",
            EvenoddNode::S2 => "S2",
            EvenoddNode::P1 => "P1",
            EvenoddNode::P2 => "P2",
        };
        f.write_str(s)
    }
}

impl FromStr for EvenoddNode {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_uppercase().as_str() {
            "S1" | "0" => Ok(EvenoddNode::S1),
            "S2" | "1" => Ok(EvenoddNode::S2),
            "P1" | "2" => Ok(EvenoddNode::P1),
            "P2" | "3" => Ok(EvenoddNode::P2),
            _ => Err(Error::BadParams(format!("unknown EVENODD node {s:?}"))),
        }
    }
}

/// Repairs one node of a full EVENODD codeword, using the systematic engine
/// for S1/S2 and the fixed parity-repair functionals for P1/P2.
pub fn evenodd_repair(node: EvenoddNode, codeword: &[Block]) -> Result<RepairOutcome> {
    let code = evenodd_code();
    let erased = erase(codeword, node.index());
    match node {
        EvenoddNode::S1 | EvenoddNode::S2 => repair_node(&code, &evenodd_scheme(), node.index(), &erased),
        EvenoddNode::P1 => {
            let f = [(0, mat(&[[1, 0]])), (1, mat(&[[1, 0]])), (3, mat(&[[0, 1]]))];
            repair_with_functionals(&code, 2, &f, &erased)
        }
        EvenoddNode::P2 => {
            let f = [(0, mat(&[[0, 1]])), (1, mat(&[[1, 0]])), (2, mat(&[[1, 1]]))];
            repair_with_functionals(&code, 3, &f, &erased)
        }
    }
}
