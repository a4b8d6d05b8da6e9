//! Brute-force oracles, audit reports and deterministic sweeps.
//!
//! The oracles here recompute from first principles (set enumeration, exhaustive
//! scans) and do not call the fast paths they are compared against. The one
//! exception is [`crate::motives::index_reduction`], which has no more primitive
//! definition and is validated only through its internal identities.

use std::collections::{BTreeMap, BTreeSet};
use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::brauer::{
    combine, exponent, index, is_p_primary, same_subgroup, tensor, BrauerClass,
    CentralSimpleAlgebra, FieldModel, IndexTable, Payload, Place,
};
use crate::error::{domain, Error, Result};
use crate::exact::{gcd, Fraction, Prime};
use crate::motives::{
    dichotomy_check, motives_isomorphic, mu_profile, oracle_isomorphic, reduce, Dichotomy,
    UpperMotive, UpperSummand,
};

/// `<c> = <d>` by listing both subgroups element by element.
pub fn subgroup_bruteforce(c: &BrauerClass, d: &BrauerClass) -> Result<bool> {
    // forces the model check before any enumeration
    tensor(c, d)?;
    Ok(cyclic_span(c)? == cyclic_span(d)?)
}

fn cyclic_span(c: &BrauerClass) -> Result<BTreeSet<Payload>> {
    let mut seen = BTreeSet::new();
    let mut acc = BrauerClass::zero(c.model());
    while seen.insert(acc.payload().clone()) {
        acc = tensor(&acc, c)?;
    }
    Ok(seen)
}

/// A tuple `(k, n, l, n')` with `p^k (p^n - p^k) = p^l (p^n' - p^l)`.
pub type DimensionCoincidence = (u32, u32, u32, u32);

/// All solutions of the dimension equation with `k < n <= bound`, `l < n' <= bound`.
pub fn cor1_dimension_scan(p: Prime, bound: u32) -> Result<Vec<DimensionCoincidence>> {
    if bound > 8 {
        return Err(domain(format!("scan bound {bound} exceeds 8")));
    }
    let p = p.get() as u128;
    let dim = |k: u32, n: u32| p.pow(k) * (p.pow(n) - p.pow(k));
    let shapes: Vec<(u32, u32)> = (1..=bound)
        .flat_map(|n| (0..n).map(move |k| (k, n)))
        .collect();
    let mut out = Vec::new();
    for &(k, n) in &shapes {
        for &(l, m) in &shapes {
            if dim(k, n) == dim(l, m) {
                out.push((k, n, l, m));
            }
        }
    }
    Ok(out)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Verdict {
    #[serde(rename = "equivalent")]
    Equivalent,
    #[serde(rename = "VIOLATION")]
    Violation,
}

/// The three assertions of the level/subgroup equivalence for `D`, `D'` of index `p^n`.
#[derive(Debug, Clone, Serialize)]
pub struct Theorem1Report {
    pub d: BrauerClass,
    pub d_prime: BrauerClass,
    pub n: u32,
    /// `M_{l,D} ~ M_{l,D'}` for some `l < n` (via the mutual-isotropy oracle).
    pub some_level: bool,
    /// `<[D]> = <[D']>`.
    pub same_subgroup: bool,
    /// `M_{l,D} ~ M_{l,D'}` for every `l < n`.
    pub every_level: bool,
    pub verdict: Verdict,
}

fn equal_index_shape(d: &BrauerClass, dp: &BrauerClass, p: Prime) -> Result<u32> {
    for c in [d, dp] {
        if !is_p_primary(c, p)? {
            return Err(domain(format!("{c} is not {p}-primary")));
        }
    }
    let (a, b) = (index(d)?, index(dp)?);
    if a != b {
        return Err(domain(format!("indices {a} and {b} differ")));
    }
    let n = p.valuation(a)?;
    if n == 0 {
        return Err(domain("classes are split; there are no anisotropic levels"));
    }
    Ok(n)
}

pub fn theorem1_report(d: &BrauerClass, dp: &BrauerClass, p: Prime) -> Result<Theorem1Report> {
    let n = equal_index_shape(d, dp, p)?;
    let mut per_level = Vec::with_capacity(n as usize);
    for l in 0..n {
        let m = UpperSummand::new(p, l, d.clone())?;
        let mp = UpperSummand::new(p, l, dp.clone())?;
        per_level.push(oracle_isomorphic(&m, &mp)?);
    }
    let some_level = per_level.iter().any(|&b| b);
    let every_level = per_level.iter().all(|&b| b);
    let same = same_subgroup(d, dp)?;
    let verdict = if some_level == same && same == every_level {
        Verdict::Equivalent
    } else {
        Verdict::Violation
    };
    Ok(Theorem1Report {
        d: d.clone(),
        d_prime: dp.clone(),
        n,
        some_level,
        same_subgroup: same,
        every_level,
        verdict,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum AuditVerdict {
    Pass,
    Fail,
    HypothesesNotMet,
}

/// Minimizers of the mu profile under the hypotheses `exp(D) >= exp(D')` and
/// isotropy of `X(p^k; D)` over `F(X(p^k; D'))`.
#[derive(Debug, Clone, Serialize)]
pub struct Prop1Report {
    pub d: BrauerClass,
    pub d_prime: BrauerClass,
    pub k: u32,
    pub exponent_hypothesis: bool,
    pub isotropy_hypothesis: bool,
    pub reduced_index: u64,
    pub minimizers: Vec<u64>,
    pub verdict: AuditVerdict,
}

pub fn prop1_audit(d: &BrauerClass, dp: &BrauerClass, k: u32, p: Prime) -> Result<Prop1Report> {
    let n = equal_index_shape(d, dp, p)?;
    if k >= n {
        return Err(domain(format!("k = {k} must be below n = {n}")));
    }
    let reduction = reduce(d, k, dp, p)?;
    let exponent_hypothesis = exponent(d)? >= exponent(dp)?;
    let isotropy_hypothesis = p.valuation(reduction.reduced_index)? <= k;
    let minimizers = reduction.profile.minimizers();
    let verdict = if !(exponent_hypothesis && isotropy_hypothesis) {
        AuditVerdict::HypothesesNotMet
    } else if minimizers.iter().all(|j| j % p.get() != 0) {
        AuditVerdict::Pass
    } else {
        AuditVerdict::Fail
    };
    Ok(Prop1Report {
        d: d.clone(),
        d_prime: dp.clone(),
        k,
        exponent_hypothesis,
        isotropy_hypothesis,
        reduced_index: reduction.reduced_index,
        minimizers,
        verdict,
    })
}

/// Nonzero p-primary classes of one field model, swept pairwise.
#[derive(Debug, Clone)]
pub struct Corpus {
    pub label: String,
    pub p: Prime,
    pub classes: Vec<BrauerClass>,
}

impl Corpus {
    /// Every `M_{l,D}` with `D` in the corpus and `l < n`.
    pub fn upper_summands(&self) -> Result<Vec<UpperSummand>> {
        let mut out = Vec::new();
        for c in &self.classes {
            let n = self.p.valuation(index(c)?)?;
            for l in 0..n {
                out.push(UpperSummand::new(self.p, l, c.clone())?);
            }
        }
        Ok(out)
    }

    /// Ordered pairs of classes with equal index.
    pub fn equal_index_pairs(&self) -> Result<Vec<(&BrauerClass, &BrauerClass)>> {
        let indices = self.classes.iter().map(index).collect::<Result<Vec<_>>>()?;
        let mut out = Vec::new();
        for (i, c) in self.classes.iter().enumerate() {
            for (j, d) in self.classes.iter().enumerate() {
                if indices[i] == indices[j] {
                    out.push((c, d));
                }
            }
        }
        Ok(out)
    }
}

/// All classes `a / p^n` of `Q/Z` with `p` not dividing `a`, `1 <= n <= max_n`.
pub fn local_corpus(p: Prime, max_n: u32) -> Result<Corpus> {
    let model = FieldModel::local();
    let mut classes = Vec::new();
    for n in 1..=max_n {
        let pn = p.pow(n)?;
        for a in (1..pn).filter(|a| a % p.get() != 0) {
            classes.push(BrauerClass::local(&model, Fraction::new(a as i64, pn)?)?);
        }
    }
    Ok(Corpus {
        label: format!("local p={p} n<={max_n}"),
        p,
        classes,
    })
}

/// A random global model with 2-4 finite places and a few p-primary classes.
///
/// Each class has invariants `a / p^e` (`e <= max_n`) at all places but the
/// last, whose invariant is forced by reciprocity. Prime-to-p multiples and
/// p-multiples of the first class are added so that both equal and unequal
/// subgroups occur.
pub fn random_global_corpus(
    p: Prime,
    max_n: u32,
    rng: &mut impl Rng,
    label: String,
) -> Result<Corpus> {
    let places: Vec<Place> = (1..=rng.random_range(2..=4))
        .map(|i| Place::finite(format!("v{i}")))
        .collect();
    let model = FieldModel::global(places.clone())?;
    let top = p.pow(max_n)? as i64;
    let mut classes: Vec<BrauerClass> = Vec::new();
    for _ in 0..3 {
        let mut invariants = Vec::new();
        let mut total = Fraction::ZERO;
        for place in &places[..places.len() - 1] {
            let den = p.pow(rng.random_range(0..=max_n))?;
            let inv = Fraction::new(rng.random_range(0..top), den)?;
            total = total.checked_add(inv)?;
            invariants.push((place.id.clone(), inv));
        }
        invariants.push((places[places.len() - 1].id.clone(), -total));
        classes.push(BrauerClass::global(&model, invariants)?);
    }
    let base = classes[0].clone();
    let unit = loop {
        let t = rng.random_range(1..top.max(2));
        if !(t as u64).is_multiple_of(p.get()) {
            break t;
        }
    };
    classes.push(combine(&base, unit));
    classes.push(combine(&base, p.get() as i64));
    classes.push(tensor(&base, &classes[1])?);
    Ok(Corpus {
        label,
        p,
        classes: dedup_nonzero(classes),
    })
}

pub fn random_global_corpora(p: Prime, max_n: u32, count: usize, seed: u64) -> Result<Vec<Corpus>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ p.get().wrapping_mul(0x9e37_79b9_7f4a_7c15));
    (0..count)
        .map(|i| random_global_corpus(p, max_n, &mut rng, format!("global p={p} #{i}")))
        .collect()
}

fn dedup_nonzero(classes: Vec<BrauerClass>) -> Vec<BrauerClass> {
    let mut seen = BTreeSet::new();
    classes
        .into_iter()
        .filter(|c| !c.is_zero() && seen.insert(c.payload().clone()))
        .collect()
}

/// Index rule of a generated abstract table, as a function of the element's
/// component orders.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TableFamily {
    /// `ind = exp`.
    Exponent,
    /// `ind = p * exp` off zero.
    Shifted,
    /// `ind = exp^2`.
    Squared,
    /// `ind = product of component orders`.
    ProductOfOrders,
    /// On `Z/p x Z/p`: `p` on the axes, `p^2` elsewhere.
    Biquaternion,
}

impl TableFamily {
    fn index_for(self, p: u64, orders: &[u64]) -> u64 {
        let exp = orders.iter().copied().max().unwrap_or(1);
        if exp == 1 {
            return 1;
        }
        match self {
            TableFamily::Exponent => exp,
            TableFamily::Shifted => exp * p,
            TableFamily::Squared => exp * exp,
            TableFamily::ProductOfOrders => orders.iter().product(),
            TableFamily::Biquaternion => {
                if orders.iter().filter(|&&o| o > 1).count() > 1 {
                    p * p
                } else {
                    p
                }
            }
        }
    }
}

pub fn family_table(p: Prime, exponents: &[u32], family: TableFamily) -> Result<IndexTable> {
    let moduli = exponents
        .iter()
        .map(|&e| p.pow(e))
        .collect::<Result<Vec<_>>>()?;
    let total: u64 = moduli.iter().product();
    let mut entries = BTreeMap::new();
    for mut code in 0..total {
        let mut elem = vec![0; moduli.len()];
        for (slot, &m) in elem.iter_mut().zip(&moduli).rev() {
            *slot = code % m;
            code /= m;
        }
        let orders: Vec<u64> = elem
            .iter()
            .zip(&moduli)
            .map(|(&x, &m)| m / gcd(x, m))
            .collect();
        entries.insert(elem, family.index_for(p.get(), &orders));
    }
    Ok(IndexTable {
        p: p.get(),
        exponents: exponents.to_vec(),
        entries,
    })
}

/// Built-in axiom-valid abstract models for `p`, each swept over all its nonzero elements.
pub fn abstract_corpora(p: Prime) -> Result<Vec<Corpus>> {
    use TableFamily::*;
    let shapes: &[(&[u32], TableFamily)] = &[
        (&[1], Exponent),
        (&[2], Exponent),
        (&[3], Exponent),
        (&[1], Shifted),
        (&[2], Shifted),
        (&[1], Squared),
        (&[2], Squared),
        (&[1, 1], ProductOfOrders),
        (&[2, 1], ProductOfOrders),
        (&[2, 1], Exponent),
        (&[1, 1], Biquaternion),
    ];
    shapes
        .iter()
        .map(|&(exponents, family)| {
            let model = FieldModel::abstract_group(&family_table(p, exponents, family)?)?;
            abstract_corpus(&model, format!("abstract p={p} {exponents:?} {family:?}"))
        })
        .collect()
}

/// Every nonzero element of an abstract model.
pub fn abstract_corpus(model: &Arc<FieldModel>, label: String) -> Result<Corpus> {
    let group = model
        .as_abstract()
        .ok_or_else(|| Error::Model(format!("{} model is not abstract", model.kind())))?;
    let p = group.p();
    let classes = group
        .elements()
        .map(|e| {
            let e: Vec<i64> = e.into_iter().map(|x| x as i64).collect();
            BrauerClass::abstract_element(model, &e)
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(Corpus {
        label,
        p,
        classes: dedup_nonzero(classes),
    })
}

/// Whether some class in the corpus has exponent strictly below its index.
pub fn has_exp_below_index(corpus: &Corpus) -> Result<bool> {
    for c in &corpus.classes {
        if exponent(c)? < index(c)? {
            return Ok(true);
        }
    }
    Ok(false)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SweepConfig {
    pub primes: Vec<u64>,
    /// Bound on `v_p` of indices in the local and global models.
    pub max_n: u32,
    pub seed: u64,
    /// Random global models per prime.
    pub global_models: usize,
    pub abstract_models: bool,
}

impl Default for SweepConfig {
    fn default() -> Self {
        SweepConfig {
            primes: vec![2, 3],
            max_n: 3,
            seed: 0,
            global_models: 500,
            abstract_models: true,
        }
    }
}

impl SweepConfig {
    pub fn corpora(&self) -> Result<Vec<Corpus>> {
        if self.max_n > 4 {
            return Err(domain(format!("max_n = {} exceeds 4", self.max_n)));
        }
        let mut out = Vec::new();
        for &p in &self.primes {
            let p = Prime::new(p)?;
            out.push(local_corpus(p, self.max_n)?);
            out.extend(random_global_corpora(
                p,
                self.max_n,
                self.global_models,
                self.seed,
            )?);
            if self.abstract_models {
                out.extend(abstract_corpora(p)?);
            }
        }
        Ok(out)
    }
}

/// Cases and failures of one kind of check.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct Tally {
    pub cases: usize,
    pub failures: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub first_failure: Option<String>,
}

impl Tally {
    /// `Ok(true)` passes; `Ok(false)` and errors fail with `context` recorded.
    pub fn record(&mut self, outcome: Result<bool>, context: impl FnOnce() -> String) {
        self.cases += 1;
        let failure = match outcome {
            Ok(true) => return,
            Ok(false) => context(),
            Err(e) => format!("{}: {e}", context()),
        };
        self.failures += 1;
        self.first_failure.get_or_insert(failure);
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct SweepSummary {
    pub corpora: usize,
    pub theorem1: Tally,
    pub prop1: Tally,
    pub criterion_vs_oracle: Tally,
    pub mu_profiles: Tally,
    pub subgroup: Tally,
    pub dichotomy: Tally,
    pub cor1: Tally,
}

impl SweepSummary {
    pub fn total_cases(&self) -> usize {
        self.tallies().iter().map(|t| t.cases).sum()
    }

    pub fn total_failures(&self) -> usize {
        self.tallies().iter().map(|t| t.failures).sum()
    }

    fn tallies(&self) -> [&Tally; 7] {
        [
            &self.theorem1,
            &self.prop1,
            &self.criterion_vs_oracle,
            &self.mu_profiles,
            &self.subgroup,
            &self.dichotomy,
            &self.cor1,
        ]
    }
}

/// Every profile entry a power of p, gcd equal to min, and the result dividing `ind(D)`.
pub fn check_mu_profile(d: &BrauerClass, k: u32, dp: &BrauerClass, p: Prime) -> Result<bool> {
    let profile = mu_profile(d, k, dp, p)?;
    let all_powers = profile.values.iter().all(|&v| p.is_power(v));
    let g = profile.values.iter().copied().fold(0, gcd);
    let m = profile.values.iter().copied().min().unwrap_or(0);
    Ok(all_powers && g == m && index(d)? % g == 0)
}

/// Runs every differential check over one corpus.
pub fn sweep_corpus(corpus: &Corpus, summary: &mut SweepSummary) -> Result<()> {
    let p = corpus.p;
    summary.corpora += 1;
    let label = &corpus.label;

    for c in &corpus.classes {
        for d in &corpus.classes {
            summary.subgroup.record(
                same_subgroup(c, d).and_then(|fast| Ok(fast == subgroup_bruteforce(c, d)?)),
                || format!("[{label}] same_subgroup({c}, {d}) disagrees with enumeration"),
            );
            summary.dichotomy.record(dichotomy_agrees(c, d, p), || {
                format!("[{label}] dichotomy({c}, {d})")
            });
        }
    }

    for (d, dp) in corpus.equal_index_pairs()? {
        summary.theorem1.record(
            theorem1_report(d, dp, p).map(|r| r.verdict == Verdict::Equivalent),
            || format!("[{label}] theorem1({d}, {dp})"),
        );
        let n = p.valuation(index(d)?)?;
        for k in 0..n {
            summary.prop1.record(
                prop1_audit(d, dp, k, p).map(|r| r.verdict != AuditVerdict::Fail),
                || format!("[{label}] prop1({d}, {dp}, k={k})"),
            );
        }
    }

    let summands = corpus.upper_summands()?;
    let mut reductions: BTreeSet<(Payload, u32, Payload)> = BTreeSet::new();
    let mut by_payload: BTreeMap<Payload, &BrauerClass> = BTreeMap::new();
    for m in &summands {
        by_payload.insert(m.generator().payload().clone(), m.generator());
    }
    for m in &summands {
        for n in &summands {
            let fast = motives_isomorphic(
                &UpperMotive::Upper(m.clone()),
                &UpperMotive::Upper(n.clone()),
            );
            let slow = oracle_isomorphic(m, n);
            summary
                .criterion_vs_oracle
                .record(fast.and_then(|a| Ok(a == slow?)), || {
                    format!(
                        "[{label}] M({}, {}) vs M({}, {})",
                        m.level(),
                        m.generator(),
                        n.level(),
                        n.generator()
                    )
                });
            reductions.insert((
                m.generator().payload().clone(),
                n.level(),
                n.generator().payload().clone(),
            ));
        }
    }
    for (d, k, dp) in &reductions {
        let (d, dp) = (by_payload[d], by_payload[dp]);
        summary
            .mu_profiles
            .record(check_mu_profile(d, *k, dp, p), || {
                format!("[{label}] mu profile D={d} k={k} D'={dp}")
            });
    }
    Ok(())
}

fn dichotomy_agrees(c: &BrauerClass, d: &BrauerClass, p: Prime) -> Result<bool> {
    let a = CentralSimpleAlgebra::division(c.clone())?;
    let b = CentralSimpleAlgebra::division(d.clone())?;
    let verdict = dichotomy_check(&a, &b, p)?;
    Ok((verdict == Dichotomy::Equal) == same_subgroup(c, d)?)
}

/// Only diagonal solutions expected.
pub fn cor1_is_diagonal(p: Prime, bound: u32) -> Result<bool> {
    Ok(cor1_dimension_scan(p, bound)?
        .iter()
        .all(|&(k, n, l, m)| k == l && n == m))
}

pub fn run_sweep(config: &SweepConfig) -> Result<SweepSummary> {
    let mut summary = SweepSummary::default();
    for corpus in config.corpora()? {
        sweep_corpus(&corpus, &mut summary)?;
    }
    for &p in &config.primes {
        let p = Prime::new(p)?;
        summary.cor1.record(cor1_is_diagonal(p, 6), || {
            format!("cor1 scan p={p} bound=6")
        });
    }
    Ok(summary)
}
