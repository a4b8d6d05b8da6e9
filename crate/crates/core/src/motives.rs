//! Upper motives of flag varieties and the index reduction formula.
//!
//! The upper motive of an anisotropic `X(d_1, ..., d_k; A)` with coefficients in
//! a field of characteristic p is the upper summand `M_{u,D}` of `X(p^u; D)`,
//! where `u = v_p(gcd d_i)` and `D` is the division algebra of the p-primary
//! part of `A`. Its isomorphism class depends only on `(u, <[D]>)`, so
//! [`UpperSummand`] stores exactly that.
//!
//! Two independent decision procedures are provided:
//!
//! * [`motives_isomorphic`]: equal levels and equal cyclic subgroups;
//! * [`oracle_isomorphic`]: mutual isotropy over the function fields, decided
//!   by [`index_reduction`], plus equality of the (p-incompressible) dimensions.

use serde::Serialize;

use crate::brauer::{
    combine, index, is_p_primary, p_primary, same_model, same_subgroup, tensor, BrauerClass,
    CentralSimpleAlgebra,
};
use crate::error::{domain, Error, Result};
use crate::exact::{checked_mul, gcd, Prime};
use crate::varieties::{gsb_dimension, is_isotropic, p_index_valuation, FlagVariety};

/// The summand `M_{level, D}` together with the subgroup `<[D]>` it depends on.
#[derive(Debug, Clone, Serialize)]
pub struct UpperSummand {
    #[serde(serialize_with = "serialize_prime")]
    p: Prime,
    level: u32,
    /// `ind(D) = p^n`.
    n: u32,
    generator: BrauerClass,
    /// Elements of `<[D]>`, sorted.
    subgroup: Vec<BrauerClass>,
}

fn serialize_prime<S: serde::Serializer>(p: &Prime, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_u64(p.get())
}

impl UpperSummand {
    /// `M_{level, D}`; requires `D` p-primary with `level < v_p(ind D)`.
    pub fn new(p: Prime, level: u32, generator: BrauerClass) -> Result<Self> {
        if !is_p_primary(&generator, p)? {
            return Err(domain(format!("{generator} is not {p}-primary")));
        }
        let n = p.valuation(index(&generator)?)?;
        if level >= n {
            return Err(domain(format!(
                "level {level} is not below n = {n}; the summand would be Tate"
            )));
        }
        let mut subgroup = Vec::new();
        let mut acc = BrauerClass::zero(generator.model());
        loop {
            subgroup.push(acc.clone());
            acc = tensor(&acc, &generator)?;
            if acc.is_zero() {
                break;
            }
        }
        subgroup.sort_by(|a, b| a.payload().cmp(b.payload()));
        Ok(UpperSummand {
            p,
            level,
            n,
            generator,
            subgroup,
        })
    }

    pub fn p(&self) -> Prime {
        self.p
    }

    pub fn level(&self) -> u32 {
        self.level
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn generator(&self) -> &BrauerClass {
        &self.generator
    }

    pub fn subgroup(&self) -> &[BrauerClass] {
        &self.subgroup
    }

    /// Canonical p-dimension `p^level (p^n - p^level)`.
    pub fn dimension(&self) -> Result<u64> {
        gsb_dimension(self.level, self.n, self.p)
    }

    fn check_compatible(&self, other: &UpperSummand) -> Result<()> {
        if !same_model(self.generator.model(), other.generator.model()) {
            return Err(Error::Model(
                "upper motives over different field models".into(),
            ));
        }
        if self.p != other.p {
            return Err(domain(format!(
                "upper motives for different primes {} and {}",
                self.p, other.p
            )));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Serialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum UpperMotive {
    /// The motive of `Spec F`.
    Tate,
    Upper(UpperSummand),
}

impl UpperMotive {
    pub fn is_tate(&self) -> bool {
        matches!(self, UpperMotive::Tate)
    }

    pub fn as_upper(&self) -> Option<&UpperSummand> {
        match self {
            UpperMotive::Upper(m) => Some(m),
            UpperMotive::Tate => None,
        }
    }

    pub fn dimension(&self) -> Result<u64> {
        match self {
            UpperMotive::Tate => Ok(0),
            UpperMotive::Upper(m) => m.dimension(),
        }
    }
}

/// `mu_{k,j}` for `j = 1..=p^n`, `p^n = ind(D')`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct MuProfile {
    pub k: u32,
    /// `values[j - 1] = mu_{k,j}`.
    pub values: Vec<u64>,
}

impl MuProfile {
    pub fn get(&self, j: u64) -> Option<u64> {
        self.values
            .get(usize::try_from(j).ok()?.checked_sub(1)?)
            .copied()
    }

    pub fn gcd(&self) -> u64 {
        self.values.iter().copied().fold(0, gcd)
    }

    pub fn min(&self) -> u64 {
        self.values.iter().copied().min().unwrap_or(0)
    }

    /// All `j` attaining the minimum.
    pub fn minimizers(&self) -> Vec<u64> {
        let m = self.min();
        (1..)
            .zip(&self.values)
            .filter(|&(_, &v)| v == m)
            .map(|(j, _)| j)
            .collect()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct IndexReduction {
    pub profile: MuProfile,
    pub reduced_index: u64,
}

struct ReductionInput {
    pk: u64,
    pn: u64,
}

fn check_reduction_input(
    d: &BrauerClass,
    k: u32,
    dp: &BrauerClass,
    p: Prime,
) -> Result<ReductionInput> {
    if !same_model(d.model(), dp.model()) {
        return Err(Error::Model(format!(
            "{d} and {dp} live in different field models"
        )));
    }
    for c in [d, dp] {
        if !is_p_primary(c, p)? {
            return Err(domain(format!("{c} is not {p}-primary")));
        }
    }
    let n = p.valuation(index(dp)?)?;
    if k > n {
        return Err(domain(format!(
            "k = {k} exceeds n = {n} for D' = {dp} (index {})",
            index(dp)?
        )));
    }
    Ok(ReductionInput {
        pk: p.pow(k)?,
        pn: p.pow(n)?,
    })
}

fn mu_unchecked(pk: u64, j: u64, d: &BrauerClass, dp: &BrauerClass) -> Result<u64> {
    let j = i64::try_from(j).map_err(|_| Error::Overflow(format!("j = {j}")))?;
    let twisted = tensor(d, &combine(dp, -j))?;
    checked_mul(pk / gcd(j as u64, pk), index(&twisted)?)
}

/// `mu_{k,j}^{D,D'} = p^k / gcd(j, p^k) * ind(D - j D')`.
pub fn mu(k: u32, j: u64, d: &BrauerClass, dp: &BrauerClass, p: Prime) -> Result<u64> {
    if j == 0 {
        return Err(domain("mu is defined for j >= 1"));
    }
    let input = check_reduction_input(d, k, dp, p)?;
    mu_unchecked(input.pk, j, d, dp)
}

pub fn mu_profile(d: &BrauerClass, k: u32, dp: &BrauerClass, p: Prime) -> Result<MuProfile> {
    let input = check_reduction_input(d, k, dp, p)?;
    let values = (1..=input.pn)
        .map(|j| mu_unchecked(input.pk, j, d, dp))
        .collect::<Result<Vec<_>>>()?;
    Ok(MuProfile { k, values })
}

/// Index of `D` over the function field of `X(p^k; D')`, with its mu profile.
///
/// Fails with [`Error::InternalInvariant`] if gcd and min of the profile differ
/// or the result does not divide `ind(D)`.
pub fn reduce(d: &BrauerClass, k: u32, dp: &BrauerClass, p: Prime) -> Result<IndexReduction> {
    let profile = mu_profile(d, k, dp, p)?;
    let (g, m) = (profile.gcd(), profile.min());
    if g != m {
        return Err(Error::InternalInvariant(format!(
            "mu profile {:?} for D = {d}, k = {k}, D' = {dp}: gcd {g} != min {m}",
            profile.values
        )));
    }
    let ind = index(d)?;
    if ind % g != 0 {
        return Err(Error::InternalInvariant(format!(
            "reduced index {g} of {d} does not divide its index {ind}"
        )));
    }
    Ok(IndexReduction {
        profile,
        reduced_index: g,
    })
}

pub fn index_reduction(d: &BrauerClass, k: u32, dp: &BrauerClass, p: Prime) -> Result<u64> {
    Ok(reduce(d, k, dp, p)?.reduced_index)
}

pub fn upper_motive_of(x: &FlagVariety, p: Prime) -> Result<UpperMotive> {
    if is_isotropic(x, p)? {
        return Ok(UpperMotive::Tate);
    }
    let level = x.level(p)?.expect("anisotropic flags are nonempty");
    let gen = p_primary(x.class(), p)?;
    Ok(UpperMotive::Upper(UpperSummand::new(p, level, gen)?))
}

/// Equal levels and `<[D]> = <[D']>`.
pub fn motives_isomorphic(m: &UpperMotive, n: &UpperMotive) -> Result<bool> {
    match (m, n) {
        (UpperMotive::Tate, UpperMotive::Tate) => Ok(true),
        (UpperMotive::Tate, _) | (_, UpperMotive::Tate) => Ok(false),
        (UpperMotive::Upper(a), UpperMotive::Upper(b)) => {
            a.check_compatible(b)?;
            Ok(a.level == b.level && same_subgroup(&a.generator, &b.generator)?)
        }
    }
}

/// Mutual isotropy of the underlying generalized Severi-Brauer varieties over each
/// other's function fields, plus equality of their dimensions.
pub fn oracle_isomorphic(m: &UpperSummand, n: &UpperSummand) -> Result<bool> {
    m.check_compatible(n)?;
    let p = m.p;
    // X(p^k; D) over F(X(p^l; D')) and X(p^l; D') over F(X(p^k; D))
    let forward = p.valuation(index_reduction(&m.generator, n.level, &n.generator, p)?)?;
    let backward = p.valuation(index_reduction(&n.generator, m.level, &m.generator, p)?)?;
    let same_dimension = m.dimension()? == n.dimension()?;
    Ok(forward <= m.level && backward <= n.level && same_dimension)
}

/// Whether two flag varieties have isomorphic upper p-motives.
pub fn compare_flag_upper_motives(x: &FlagVariety, y: &FlagVariety, p: Prime) -> Result<bool> {
    if !same_model(x.class().model(), y.class().model()) {
        return Err(Error::Model(
            "flag varieties over different field models".into(),
        ));
    }
    motives_isomorphic(&upper_motive_of(x, p)?, &upper_motive_of(y, p)?)
}

/// All upper p-motives of `PGL_1(A)`-homogeneous varieties: Tate and `M_{l, D}` for `l < n`.
pub fn enumerate_upper_motives(a: &CentralSimpleAlgebra, p: Prime) -> Result<Vec<UpperMotive>> {
    let gen = p_primary(a.class(), p)?;
    let n = p_index_valuation(&gen, p)?;
    let mut out = vec![UpperMotive::Tate];
    for level in 0..n {
        out.push(UpperMotive::Upper(UpperSummand::new(
            p,
            level,
            gen.clone(),
        )?));
    }
    Ok(out)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Dichotomy {
    Equal,
    Disjoint,
}

/// Compares the sets of upper p-motives of `PGL_1(A)` and `PGL_1(A')`: they either
/// coincide or share only the Tate motive.
pub fn dichotomy_check(
    a: &CentralSimpleAlgebra,
    b: &CentralSimpleAlgebra,
    p: Prime,
) -> Result<Dichotomy> {
    if !same_model(a.class().model(), b.class().model()) {
        return Err(Error::Model("algebras over different field models".into()));
    }
    let xs = enumerate_upper_motives(a, p)?;
    let ys = enumerate_upper_motives(b, p)?;
    let contains = |set: &[UpperMotive], m: &UpperMotive| -> Result<bool> {
        for x in set {
            if motives_isomorphic(x, m)? {
                return Ok(true);
            }
        }
        Ok(false)
    };
    let mut shared = Vec::new();
    for x in &xs {
        if contains(&ys, x)? {
            shared.push(x);
        }
    }
    let mut ys_in_xs = true;
    for y in &ys {
        ys_in_xs &= contains(&xs, y)?;
    }
    if shared.len() == xs.len() && ys_in_xs {
        Ok(Dichotomy::Equal)
    } else if shared.iter().all(|m| m.is_tate()) {
        Ok(Dichotomy::Disjoint)
    } else {
        Err(Error::InternalInvariant(format!(
            "upper motive sets of {} and {} neither coincide nor meet only in Tate",
            a.class(),
            b.class()
        )))
    }
}
