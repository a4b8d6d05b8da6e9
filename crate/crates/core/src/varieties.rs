//! Symbolic varieties of flags of right ideals `X(d_1, ..., d_k; A)`.
//!
//! A flag variety is described only by its algebra and its reduced dimensions.
//! Isotropy is p-relative (a zero-cycle of degree prime to p) and depends only on
//! `v_p(gcd d_i)` and the p-primary part of the algebra.

use crate::brauer::{index, p_primary, BrauerClass, CentralSimpleAlgebra};
use crate::error::{domain, Result};
use crate::exact::{checked_mul, gcd_list, Prime};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FlagVariety {
    algebra: CentralSimpleAlgebra,
    dims: Vec<u64>,
}

/// Drops the forced entries `0` and `degree` from a strictly increasing flag.
///
/// Returns the remaining dimensions and whether the variety is a point.
pub fn normalize(dims: &[u64], degree: u64) -> Result<(Vec<u64>, bool)> {
    if let Some(w) = dims.windows(2).find(|w| w[0] >= w[1]) {
        return Err(domain(format!(
            "flag dimensions must be strictly increasing, got {} before {}",
            w[0], w[1]
        )));
    }
    if let Some(&d) = dims.iter().find(|&&d| d > degree) {
        return Err(domain(format!(
            "flag dimension {d} exceeds degree {degree}"
        )));
    }
    let kept: Vec<u64> = dims
        .iter()
        .copied()
        .filter(|&d| d != 0 && d != degree)
        .collect();
    let trivial = kept.is_empty();
    Ok((kept, trivial))
}

impl FlagVariety {
    pub fn new(algebra: CentralSimpleAlgebra, dims: &[u64]) -> Result<Self> {
        let (dims, _) = normalize(dims, algebra.degree())?;
        Ok(FlagVariety { algebra, dims })
    }

    /// The generalized Severi-Brauer variety `X(d; A)`.
    pub fn severi_brauer(algebra: CentralSimpleAlgebra, d: u64) -> Result<Self> {
        Self::new(algebra, &[d])
    }

    pub fn algebra(&self) -> &CentralSimpleAlgebra {
        &self.algebra
    }

    pub fn class(&self) -> &BrauerClass {
        self.algebra.class()
    }

    /// Normalized dimensions (no 0, no degree).
    pub fn dims(&self) -> &[u64] {
        &self.dims
    }

    pub fn is_trivial(&self) -> bool {
        self.dims.is_empty()
    }

    /// `v_p(gcd d_i)`, or `None` for the point.
    pub fn level(&self, p: Prime) -> Result<Option<u32>> {
        if self.is_trivial() {
            return Ok(None);
        }
        Ok(Some(p.valuation(gcd_list(&self.dims)?)?))
    }
}

/// `v_p` of the index of the p-primary part of `class`.
pub fn p_index_valuation(class: &BrauerClass, p: Prime) -> Result<u32> {
    p.valuation(index(&p_primary(class, p)?)?)
}

pub fn is_isotropic(x: &FlagVariety, p: Prime) -> Result<bool> {
    match x.level(p)? {
        None => Ok(true),
        Some(u) => Ok(u >= p_index_valuation(x.class(), p)?),
    }
}

/// Dimension `p^k (p^n - p^k)` of `X(p^k; D)` for `D` of degree `p^n`.
pub fn gsb_dimension(k: u32, n: u32, p: Prime) -> Result<u64> {
    if k > n {
        return Err(domain(format!("level {k} exceeds n = {n}")));
    }
    let pk = p.pow(k)?;
    checked_mul(pk, p.pow(n)? - pk)
}

/// Dimension of the upper p-motive: 0 for isotropic flags, else `p^u (p^n - p^u)`.
pub fn canonical_p_dimension(x: &FlagVariety, p: Prime) -> Result<u64> {
    if is_isotropic(x, p)? {
        return Ok(0);
    }
    let u = x.level(p)?.expect("anisotropic flags are nonempty");
    gsb_dimension(u, p_index_valuation(x.class(), p)?, p)
}
