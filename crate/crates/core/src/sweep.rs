//! Construction size against the `4 r ln(ell)` upper bound over a grid of
//! `(r, m)`.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::field::FieldSpec;
use crate::msr_family::{construct_tensor_family, upper_bound};

pub const DEFAULT_CEILING: usize = 81;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepRow {
    pub r: usize,
    pub m: usize,
    pub ell: usize,
    pub k_construct: usize,
    pub bound: f64,
    pub gap_ratio: f64,
    pub within_bound: bool,
    pub verified: Option<bool>,
}

#[derive(Debug, Clone)]
pub struct SweepConfig {
    pub rs: Vec<usize>,
    pub ms: Vec<usize>,
    pub field: FieldSpec,
    pub lambda: u32,
    pub ceiling: usize,
    pub verify: bool,
}

/// Builds each family in the grid and tabulates its size against the bound.
/// The whole grid is checked against the ceiling before anything is built.
pub fn sweep(cfg: &SweepConfig) -> Result<Vec<SweepRow>> {
    for &r in &cfg.rs {
        for &m in &cfg.ms {
            let ell = u32::try_from(m).ok().and_then(|m| r.checked_pow(m)).unwrap_or(usize::MAX);
            if ell > cfg.ceiling {
                return Err(Error::CeilingExceeded { ell, ceiling: cfg.ceiling });
            }
        }
    }
    let mut rows = Vec::new();
    for &r in &cfg.rs {
        for &m in &cfg.ms {
            let fam = construct_tensor_family(r, m, cfg.field, cfg.lambda)?;
            let (ell, k) = (fam.ell(), fam.k());
            let bound = upper_bound(ell, r);
            let verified = if cfg.verify { Some(fam.verify()?.passed) } else { None };
            rows.push(SweepRow {
                r,
                m,
                ell,
                k_construct: k,
                bound,
                gap_ratio: k as f64 / bound,
                within_bound: fam.bound_check().passed,
                verified,
            });
        }
    }
    Ok(rows)
}

pub fn to_csv(rows: &[SweepRow]) -> String {
    let mut s = String::from("r,m,ell,k_construct,bound,gap_ratio,within_bound,verified\n");
    for row in rows {
        let verified = row.verified.map_or(String::from("-"), |v| v.to_string());
        s.push_str(&format!(
            "{},{},{},{},{:.6},{:.6},{},{}\n",
            row.r, row.m, row.ell, row.k_construct, row.bound, row.gap_ratio, row.within_bound, verified
        ));
    }
    s
}
