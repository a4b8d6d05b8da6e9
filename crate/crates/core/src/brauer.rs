//! Field models, Brauer classes and their discrete invariants.
//!
//! Three models of `Br(F)` are supported:
//!
//! * [`FieldModel::Local`]: `Br(F) = Q/Z`, a class is a single Hasse invariant.
//! * [`FieldModel::Global`]: a finite list of places; a class is a sparse vector
//!   of local invariants summing to zero, with invariants at real places in
//!   `{0, 1/2}`. Index equals exponent (lcm of the local orders).
//! * [`FieldModel::Abstract`]: a finite abelian p-group `prod Z/p^e_i` with an
//!   explicit index table. This is the only model in which the exponent of a
//!   class may be strictly smaller than its index.
//!
//! Classes carry an `Arc` to their model; combining classes of different
//! models is an [`Error::Model`].

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::hash::{Hash, Hasher};
use std::sync::Arc;

use serde::ser::{SerializeMap, SerializeSeq};
use serde::{Serialize, Serializer};

use crate::error::{domain, Error, Result};
use crate::exact::{checked_mul, checked_pow, gcd, inverse_mod, lcm, Fraction, Prime};

/// Largest abstract group accepted; A5 is checked over all pairs.
pub const MAX_ABSTRACT_ORDER: u64 = 4096;

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
pub struct Place {
    pub id: String,
    pub real: bool,
}

impl Place {
    pub fn finite(id: impl Into<String>) -> Self {
        Place {
            id: id.into(),
            real: false,
        }
    }

    pub fn real(id: impl Into<String>) -> Self {
        Place {
            id: id.into(),
            real: true,
        }
    }
}

/// Unvalidated description of an abstract Brauer p-group and its index table.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IndexTable {
    pub p: u64,
    pub exponents: Vec<u32>,
    pub entries: BTreeMap<Vec<u64>, u64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub enum Axiom {
    /// `ind(0) = 1`
    A1,
    /// `exp(g) | ind(g)`
    A2,
    /// `ind(g)` is a power of p
    A3,
    /// `ind(t g) = ind(g)` for t coprime to p
    A4,
    /// `ind(g + h) | ind(g) ind(h)`
    A5,
}

impl Axiom {
    pub fn describe(self) -> &'static str {
        match self {
            Axiom::A1 => "index of zero is 1",
            Axiom::A2 => "exponent divides index",
            Axiom::A3 => "index is a power of p",
            Axiom::A4 => "index invariant under prime-to-p multiples",
            Axiom::A5 => "index of a sum divides the product of indices",
        }
    }
}

/// First witness of a failed axiom, plus how many cases failed in total.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct AxiomViolation {
    pub axiom: Axiom,
    /// Elements involved: `[g]` for A1-A3, `[g]` with `multiplier` for A4, `[g, h]` for A5.
    pub witness: Vec<Vec<u64>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub multiplier: Option<u64>,
    pub failures: usize,
}

impl fmt::Display for AxiomViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{:?} ({}) fails at {:?}",
            self.axiom,
            self.axiom.describe(),
            self.witness
        )?;
        if let Some(t) = self.multiplier {
            write!(f, " with t = {t}")?;
        }
        write!(f, " [{} case(s)]", self.failures)
    }
}

/// Dense form of a validated abstract model: elements are encoded in mixed radix.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AbstractGroup {
    p: Prime,
    exponents: Vec<u32>,
    moduli: Vec<u64>,
    index: Vec<u64>,
}

impl AbstractGroup {
    /// Shape checks only; the axioms are checked separately.
    fn from_table(table: &IndexTable) -> Result<Self> {
        let p = Prime::new(table.p)?;
        if table.exponents.is_empty() {
            return Err(domain("abstract model needs at least one cyclic factor"));
        }
        if table.exponents.contains(&0) {
            return Err(domain("abstract model exponents must be >= 1"));
        }
        let moduli = table
            .exponents
            .iter()
            .map(|&e| p.pow(e))
            .collect::<Result<Vec<_>>>()?;
        let order = moduli
            .iter()
            .try_fold(1u64, |acc, &m| checked_mul(acc, m))?;
        if order > MAX_ABSTRACT_ORDER {
            return Err(domain(format!(
                "abstract group of order {order} exceeds the limit {MAX_ABSTRACT_ORDER}"
            )));
        }
        let mut index = vec![0u64; order as usize];
        let mut group = AbstractGroup {
            p,
            exponents: table.exponents.clone(),
            moduli,
            index: Vec::new(),
        };
        for (elem, &ind) in &table.entries {
            if elem.len() != group.moduli.len()
                || elem.iter().zip(&group.moduli).any(|(x, m)| x >= m)
            {
                return Err(domain(format!(
                    "index table key {elem:?} is not a reduced element of the group"
                )));
            }
            if ind == 0 {
                return Err(domain(format!("index table value for {elem:?} is 0")));
            }
            index[group.encode(elem)] = ind;
        }
        if let Some(pos) = index.iter().position(|&v| v == 0) {
            return Err(domain(format!(
                "index table is partial: no entry for {:?}",
                group.decode(pos)
            )));
        }
        group.index = index;
        Ok(group)
    }

    pub fn p(&self) -> Prime {
        self.p
    }

    pub fn exponents(&self) -> &[u32] {
        &self.exponents
    }

    pub fn order(&self) -> usize {
        self.index.len()
    }

    fn encode(&self, elem: &[u64]) -> usize {
        elem.iter()
            .zip(&self.moduli)
            .fold(0usize, |acc, (&x, &m)| acc * m as usize + x as usize)
    }

    fn decode(&self, mut code: usize) -> Vec<u64> {
        let mut out = vec![0; self.moduli.len()];
        for (slot, &m) in out.iter_mut().zip(&self.moduli).rev() {
            *slot = (code % m as usize) as u64;
            code /= m as usize;
        }
        out
    }

    fn reduce(&self, elem: &[i64]) -> Vec<u64> {
        elem.iter()
            .zip(&self.moduli)
            .map(|(&x, &m)| (x as i128).rem_euclid(m as i128) as u64)
            .collect()
    }

    fn add(&self, a: &[u64], b: &[u64]) -> Vec<u64> {
        a.iter()
            .zip(b)
            .zip(&self.moduli)
            .map(|((&x, &y), &m)| ((x as u128 + y as u128) % m as u128) as u64)
            .collect()
    }

    fn scale(&self, a: &[u64], t: i64) -> Vec<u64> {
        a.iter()
            .zip(&self.moduli)
            .map(|(&x, &m)| (x as i128 * t as i128).rem_euclid(m as i128) as u64)
            .collect()
    }

    fn element_order(&self, a: &[u64]) -> u64 {
        a.iter()
            .zip(&self.moduli)
            .map(|(&x, &m)| m / gcd(x, m))
            .max()
            .unwrap_or(1)
    }

    fn index_of(&self, a: &[u64]) -> u64 {
        self.index[self.encode(a)]
    }

    /// All elements in mixed-radix order.
    pub fn elements(&self) -> impl Iterator<Item = Vec<u64>> + '_ {
        (0..self.order()).map(|c| self.decode(c))
    }

    fn group_exponent(&self) -> u64 {
        self.moduli.iter().copied().max().unwrap_or(1)
    }

    fn violations(&self) -> Vec<AxiomViolation> {
        let mut found: BTreeMap<Axiom, AxiomViolation> = BTreeMap::new();
        let mut record = |axiom, witness: Vec<Vec<u64>>, multiplier| {
            found
                .entry(axiom)
                .or_insert(AxiomViolation {
                    axiom,
                    witness,
                    multiplier,
                    failures: 0,
                })
                .failures += 1;
        };
        let elems: Vec<Vec<u64>> = self.elements().collect();
        let zero = vec![0; self.moduli.len()];
        if self.index_of(&zero) != 1 {
            record(Axiom::A1, vec![zero.clone()], None);
        }
        for g in &elems {
            let ind = self.index_of(g);
            if !ind.is_multiple_of(self.element_order(g)) {
                record(Axiom::A2, vec![g.clone()], None);
            }
            if !self.p.is_power(ind) {
                record(Axiom::A3, vec![g.clone()], None);
            }
        }
        let units: Vec<u64> = (1..self.group_exponent())
            .filter(|t| t % self.p.get() != 0)
            .collect();
        for g in &elems {
            let ind = self.index_of(g);
            for &t in &units {
                if self.index_of(&self.scale(g, t as i64)) != ind {
                    record(Axiom::A4, vec![g.clone()], Some(t));
                }
            }
        }
        for g in &elems {
            for h in &elems {
                let lhs = self.index_of(&self.add(g, h)) as u128;
                let rhs = self.index_of(g) as u128 * self.index_of(h) as u128;
                if !rhs.is_multiple_of(lhs) {
                    record(Axiom::A5, vec![g.clone(), h.clone()], None);
                }
            }
        }
        found.into_values().collect()
    }
}

/// Checks axioms A1-A5 by full enumeration. A partial or malformed table is an error;
/// an empty vector means the table is valid.
pub fn validate_index_table(table: &IndexTable) -> Result<Vec<AxiomViolation>> {
    Ok(AbstractGroup::from_table(table)?.violations())
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum FieldModel {
    Local,
    Global { places: Vec<Place> },
    Abstract(AbstractGroup),
}

impl FieldModel {
    pub fn local() -> Arc<FieldModel> {
        Arc::new(FieldModel::Local)
    }

    pub fn global(places: Vec<Place>) -> Result<Arc<FieldModel>> {
        let mut seen = BTreeSet::new();
        for place in &places {
            if !seen.insert(place.id.as_str()) {
                return Err(domain(format!("duplicate place id {:?}", place.id)));
            }
        }
        Ok(Arc::new(FieldModel::Global { places }))
    }

    /// Builds an abstract model; rejects tables failing any axiom.
    pub fn abstract_group(table: &IndexTable) -> Result<Arc<FieldModel>> {
        let group = AbstractGroup::from_table(table)?;
        let violations = group.violations();
        if !violations.is_empty() {
            return Err(Error::InvalidIndexTable(violations));
        }
        Ok(Arc::new(FieldModel::Abstract(group)))
    }

    pub fn kind(&self) -> &'static str {
        match self {
            FieldModel::Local => "local",
            FieldModel::Global { .. } => "global",
            FieldModel::Abstract(_) => "abstract",
        }
    }

    pub fn places(&self) -> &[Place] {
        match self {
            FieldModel::Global { places } => places,
            _ => &[],
        }
    }

    pub fn as_abstract(&self) -> Option<&AbstractGroup> {
        match self {
            FieldModel::Abstract(g) => Some(g),
            _ => None,
        }
    }
}

pub(crate) fn same_model(a: &Arc<FieldModel>, b: &Arc<FieldModel>) -> bool {
    Arc::ptr_eq(a, b) || **a == **b
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Payload {
    Local(Fraction),
    /// Sorted by place position in the model; zero invariants omitted.
    Global(Vec<(usize, Fraction)>),
    Abstract(Vec<u64>),
}

/// An element of `Br(F)` in one of the models.
#[derive(Clone)]
pub struct BrauerClass {
    model: Arc<FieldModel>,
    payload: Payload,
}

impl BrauerClass {
    pub fn zero(model: &Arc<FieldModel>) -> Self {
        let payload = match &**model {
            FieldModel::Local => Payload::Local(Fraction::ZERO),
            FieldModel::Global { .. } => Payload::Global(Vec::new()),
            FieldModel::Abstract(g) => Payload::Abstract(vec![0; g.moduli.len()]),
        };
        BrauerClass {
            model: model.clone(),
            payload,
        }
    }

    pub fn local(model: &Arc<FieldModel>, inv: Fraction) -> Result<Self> {
        match **model {
            FieldModel::Local => Ok(BrauerClass {
                model: model.clone(),
                payload: Payload::Local(inv),
            }),
            _ => Err(Error::Model(format!(
                "local invariant given for a {} model",
                model.kind()
            ))),
        }
    }

    /// A global class from `(place id, invariant)` pairs; unlisted places carry 0.
    pub fn global<S: AsRef<str>>(
        model: &Arc<FieldModel>,
        invariants: impl IntoIterator<Item = (S, Fraction)>,
    ) -> Result<Self> {
        let FieldModel::Global { places } = &**model else {
            return Err(Error::Model(format!(
                "place invariants given for a {} model",
                model.kind()
            )));
        };
        let mut sparse: BTreeMap<usize, Fraction> = BTreeMap::new();
        let mut total = Fraction::ZERO;
        for (id, inv) in invariants {
            let id = id.as_ref();
            let pos = places
                .iter()
                .position(|pl| pl.id == id)
                .ok_or_else(|| domain(format!("unknown place {id:?}")))?;
            if sparse.contains_key(&pos) {
                return Err(domain(format!("place {id:?} listed twice")));
            }
            if places[pos].real && inv.den() > 2 {
                return Err(domain(format!(
                    "real place {id:?} has invariant {inv}; must be 0 or 1/2"
                )));
            }
            total = total.checked_add(inv)?;
            if !inv.is_zero() {
                sparse.insert(pos, inv);
            }
            // zero entries still occupy the slot so duplicates are caught
            sparse.entry(pos).or_insert(Fraction::ZERO);
        }
        if !total.is_zero() {
            return Err(domain(format!(
                "local invariants sum to {total}, not 0 (reciprocity)"
            )));
        }
        Ok(BrauerClass {
            model: model.clone(),
            payload: Payload::Global(sparse.into_iter().filter(|(_, f)| !f.is_zero()).collect()),
        })
    }

    /// An element of an abstract model; components are reduced modulo `p^e_i`.
    pub fn abstract_element(model: &Arc<FieldModel>, elem: &[i64]) -> Result<Self> {
        let FieldModel::Abstract(g) = &**model else {
            return Err(Error::Model(format!(
                "group element given for a {} model",
                model.kind()
            )));
        };
        if elem.len() != g.moduli.len() {
            return Err(domain(format!(
                "element {elem:?} has {} components, group has {}",
                elem.len(),
                g.moduli.len()
            )));
        }
        Ok(BrauerClass {
            model: model.clone(),
            payload: Payload::Abstract(g.reduce(elem)),
        })
    }

    pub fn model(&self) -> &Arc<FieldModel> {
        &self.model
    }

    pub fn payload(&self) -> &Payload {
        &self.payload
    }

    pub fn is_zero(&self) -> bool {
        match &self.payload {
            Payload::Local(f) => f.is_zero(),
            Payload::Global(v) => v.is_empty(),
            Payload::Abstract(v) => v.iter().all(|&x| x == 0),
        }
    }

    fn check_model(&self, other: &BrauerClass) -> Result<()> {
        if same_model(&self.model, &other.model) {
            Ok(())
        } else {
            Err(Error::Model(format!(
                "classes {self} and {other} live in different field models"
            )))
        }
    }

    fn with_payload(&self, payload: Payload) -> Self {
        BrauerClass {
            model: self.model.clone(),
            payload,
        }
    }

    fn abstract_group(&self) -> &AbstractGroup {
        self.model
            .as_abstract()
            .expect("abstract payload in a non-abstract model")
    }
}

impl PartialEq for BrauerClass {
    fn eq(&self, other: &Self) -> bool {
        self.payload == other.payload && same_model(&self.model, &other.model)
    }
}

impl Eq for BrauerClass {}

impl Hash for BrauerClass {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.payload.hash(state);
    }
}

impl fmt::Debug for BrauerClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "BrauerClass({}: {})", self.model.kind(), self)
    }
}

impl fmt::Display for BrauerClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.payload {
            Payload::Local(x) => write!(f, "{x}"),
            Payload::Global(v) => {
                let places = self.model.places();
                f.write_str("{")?;
                for (i, (pos, x)) in v.iter().enumerate() {
                    if i > 0 {
                        f.write_str(", ")?;
                    }
                    write!(f, "{}: {x}", places[*pos].id)?;
                }
                f.write_str("}")
            }
            Payload::Abstract(v) => {
                let parts: Vec<String> = v.iter().map(u64::to_string).collect();
                write!(f, "({})", parts.join(", "))
            }
        }
    }
}

/// Serialized as `"num/den"`, a `{place: "num/den"}` map, or an integer list.
impl Serialize for BrauerClass {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        match &self.payload {
            Payload::Local(x) => x.serialize(serializer),
            Payload::Global(v) => {
                let places = self.model.places();
                let mut map = serializer.serialize_map(Some(v.len()))?;
                let mut sorted: Vec<(&str, &Fraction)> = v
                    .iter()
                    .map(|(pos, x)| (places[*pos].id.as_str(), x))
                    .collect();
                sorted.sort();
                for (id, x) in sorted {
                    map.serialize_entry(id, x)?;
                }
                map.end()
            }
            Payload::Abstract(v) => {
                let mut seq = serializer.serialize_seq(Some(v.len()))?;
                for x in v {
                    seq.serialize_element(x)?;
                }
                seq.end()
            }
        }
    }
}

/// Order of the class in `Br(F)`.
pub fn exponent(c: &BrauerClass) -> Result<u64> {
    match &c.payload {
        Payload::Local(x) => Ok(x.order()),
        Payload::Global(v) => v.iter().try_fold(1, |acc, (_, x)| lcm(acc, x.order())),
        Payload::Abstract(v) => Ok(c.abstract_group().element_order(v)),
    }
}

/// Schur index of the class.
pub fn index(c: &BrauerClass) -> Result<u64> {
    match &c.payload {
        Payload::Local(x) => Ok(x.order()),
        // over a global field the index is the lcm of the local indices
        Payload::Global(v) => v.iter().try_fold(1, |acc, (_, x)| lcm(acc, x.order())),
        Payload::Abstract(v) => Ok(c.abstract_group().index_of(v)),
    }
}

/// `t * c` in additive notation (the class of `A^{tensor t}`).
pub fn combine(c: &BrauerClass, t: i64) -> BrauerClass {
    let payload = match &c.payload {
        Payload::Local(x) => Payload::Local(x.scale(t)),
        Payload::Global(v) => Payload::Global(
            v.iter()
                .map(|&(pos, x)| (pos, x.scale(t)))
                .filter(|(_, x)| !x.is_zero())
                .collect(),
        ),
        Payload::Abstract(v) => Payload::Abstract(c.abstract_group().scale(v, t)),
    };
    c.with_payload(payload)
}

/// Sum in `Br(F)`.
pub fn tensor(c: &BrauerClass, d: &BrauerClass) -> Result<BrauerClass> {
    c.check_model(d)?;
    let payload = match (&c.payload, &d.payload) {
        (Payload::Local(x), Payload::Local(y)) => Payload::Local(x.checked_add(*y)?),
        (Payload::Global(x), Payload::Global(y)) => {
            let mut merged: BTreeMap<usize, Fraction> = x.iter().copied().collect();
            for &(pos, inv) in y {
                let slot = merged.entry(pos).or_insert(Fraction::ZERO);
                *slot = slot.checked_add(inv)?;
            }
            Payload::Global(merged.into_iter().filter(|(_, f)| !f.is_zero()).collect())
        }
        (Payload::Abstract(x), Payload::Abstract(y)) => {
            Payload::Abstract(c.abstract_group().add(x, y))
        }
        _ => unreachable!("payload kind always matches its model"),
    };
    Ok(c.with_payload(payload))
}

/// The p-primary component of `c`.
pub fn p_primary(c: &BrauerClass, p: Prime) -> Result<BrauerClass> {
    let exp = exponent(c)?;
    let (a, rest) = p.split(exp)?;
    let pa = checked_pow(p.get(), a)?;
    // e = 1 mod p^a and e = 0 mod rest
    let e = checked_mul(rest, inverse_mod(rest % pa, pa)?)?;
    let e = i64::try_from(e).map_err(|_| Error::Overflow(format!("multiplier {e}")))?;
    Ok(combine(c, e))
}

/// Whether every nonzero multiple order is a power of p.
pub fn is_p_primary(c: &BrauerClass, p: Prime) -> Result<bool> {
    Ok(p.is_power(exponent(c)?))
}

/// Whether `<c> = <d>`, by exhaustive multiple search up to the common exponent.
pub fn same_subgroup(c: &BrauerClass, d: &BrauerClass) -> Result<bool> {
    c.check_model(d)?;
    let exp = exponent(c)?;
    if exp != exponent(d)? {
        return Ok(false);
    }
    Ok(is_multiple(c, d, exp)? && is_multiple(d, c, exp)?)
}

fn is_multiple(gen: &BrauerClass, target: &BrauerClass, exp: u64) -> Result<bool> {
    let mut acc = BrauerClass::zero(&gen.model);
    for _ in 0..exp {
        if acc == *target {
            return Ok(true);
        }
        acc = tensor(&acc, gen)?;
    }
    Ok(false)
}

/// A central simple algebra up to isomorphism: its Brauer class and degree.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CentralSimpleAlgebra {
    class: BrauerClass,
    degree: u64,
}

impl CentralSimpleAlgebra {
    pub fn new(class: BrauerClass, degree: u64) -> Result<Self> {
        if degree == 0 {
            return Err(domain("algebra degree must be >= 1"));
        }
        let ind = index(&class)?;
        if !degree.is_multiple_of(ind) {
            return Err(domain(format!(
                "degree {degree} is not a multiple of the index {ind} of {class}"
            )));
        }
        Ok(CentralSimpleAlgebra { class, degree })
    }

    /// The division algebra in the class (degree = index).
    pub fn division(class: BrauerClass) -> Result<Self> {
        let ind = index(&class)?;
        Self::new(class, ind)
    }

    pub fn class(&self) -> &BrauerClass {
        &self.class
    }

    pub fn degree(&self) -> u64 {
        self.degree
    }
}

#[cfg(test)]
pub(crate) mod tests {
    use super::*;
    use proptest::prelude::*;

    fn f(n: i64, d: u64) -> Fraction {
        Fraction::new(n, d).unwrap()
    }

    fn p(n: u64) -> Prime {
        Prime::new(n).unwrap()
    }

    fn local(n: i64, d: u64) -> BrauerClass {
        BrauerClass::local(&FieldModel::local(), f(n, d)).unwrap()
    }

    pub(crate) fn table(p: u64, exponents: &[u32], entries: &[(&[u64], u64)]) -> IndexTable {
        IndexTable {
            p,
            exponents: exponents.to_vec(),
            entries: entries.iter().map(|(k, v)| (k.to_vec(), *v)).collect(),
        }
    }

    fn z4_table(values: [u64; 4]) -> IndexTable {
        table(
            2,
            &[2],
            &[
                (&[0], values[0]),
                (&[1], values[1]),
                (&[2], values[2]),
                (&[3], values[3]),
            ],
        )
    }

    fn three_places() -> Arc<FieldModel> {
        FieldModel::global(vec![
            Place::finite("v1"),
            Place::finite("v2"),
            Place::finite("v3"),
        ])
        .unwrap()
    }

    #[test]
    fn exponent_examples() {
        assert_eq!(exponent(&local(3, 4)).unwrap(), 4);
        let g = three_places();
        let c =
            BrauerClass::global(&g, [("v1", f(1, 2)), ("v2", f(1, 3)), ("v3", f(1, 6))]).unwrap();
        assert_eq!(exponent(&c).unwrap(), 6);
        let m = FieldModel::abstract_group(&z4_table([1, 4, 2, 4])).unwrap();
        let two = BrauerClass::abstract_element(&m, &[2]).unwrap();
        assert_eq!(exponent(&two).unwrap(), 2);
    }

    #[test]
    fn index_examples() {
        assert_eq!(index(&local(3, 4)).unwrap(), 4);
        let g = three_places();
        let c =
            BrauerClass::global(&g, [("v1", f(1, 2)), ("v2", f(1, 3)), ("v3", f(1, 6))]).unwrap();
        // lcm of the local denominators, which also equals the exponent here
        let dens = [2u64, 3, 6];
        let oracle = dens.iter().fold(1, |acc, &d| acc * d / gcd(acc, d));
        assert_eq!(index(&c).unwrap(), oracle);
        assert_eq!(index(&c).unwrap(), exponent(&c).unwrap());

        let m = FieldModel::abstract_group(&table(2, &[1], &[(&[0], 1), (&[1], 4)])).unwrap();
        let one = BrauerClass::abstract_element(&m, &[1]).unwrap();
        assert_eq!(index(&one).unwrap(), 4);
        assert_eq!(exponent(&one).unwrap(), 2);
    }

    /// Axiom check written directly from the definitions, for Z/p^e only.
    fn cyclic_axioms_oracle(p: u64, modulus: u64, ind: &[u64]) -> BTreeSet<Axiom> {
        let mut bad = BTreeSet::new();
        let ord = |g: u64| modulus / gcd(g, modulus);
        let is_ppow = |mut x: u64| {
            while x.is_multiple_of(p) {
                x /= p;
            }
            x == 1
        };
        if ind[0] != 1 {
            bad.insert(Axiom::A1);
        }
        for g in 0..modulus {
            let i = ind[g as usize];
            if !i.is_multiple_of(ord(g)) {
                bad.insert(Axiom::A2);
            }
            if !is_ppow(i) {
                bad.insert(Axiom::A3);
            }
            for t in (1..modulus).filter(|t| t % p != 0) {
                if ind[(g * t % modulus) as usize] != i {
                    bad.insert(Axiom::A4);
                }
            }
            for h in 0..modulus {
                if !(ind[g as usize] * ind[h as usize])
                    .is_multiple_of(ind[((g + h) % modulus) as usize])
                {
                    bad.insert(Axiom::A5);
                }
            }
        }
        bad
    }

    fn axioms(v: &[AxiomViolation]) -> BTreeSet<Axiom> {
        v.iter().map(|x| x.axiom).collect()
    }

    #[test]
    fn validate_examples() {
        let ok = [1, 4, 2, 4];
        assert!(cyclic_axioms_oracle(2, 4, &ok).is_empty());
        assert!(validate_index_table(&z4_table(ok)).unwrap().is_empty());

        let v = validate_index_table(&z4_table([2, 4, 2, 4])).unwrap();
        assert_eq!(v[0].axiom, Axiom::A1);
        assert_eq!(v[0].witness, vec![vec![0]]);

        // Only the checker decides: the oracle and the checker agree that ind(1) = 2
        // is below the order 4 of the generator.
        let tricky = [1, 2, 4, 2];
        let expected = cyclic_axioms_oracle(2, 4, &tricky);
        assert_eq!(expected, BTreeSet::from([Axiom::A2]));
        let v = validate_index_table(&z4_table(tricky)).unwrap();
        assert_eq!(axioms(&v), expected);
        assert_eq!(v[0].witness, vec![vec![1]]);
        assert_eq!(v[0].failures, 2);
    }

    #[test]
    fn validate_reports_every_axiom() {
        // ind(2) = 3 breaks A3; ind(1) != ind(3) breaks A4; ind(1+1) = 16 breaks A5 (4 * 4)
        let v = validate_index_table(&z4_table([1, 4, 3, 8])).unwrap();
        let found = axioms(&v);
        assert_eq!(found, cyclic_axioms_oracle(2, 4, &[1, 4, 3, 8]));
        assert!(found.contains(&Axiom::A3) && found.contains(&Axiom::A4));

        let a5 = [1, 4, 32, 4];
        let v = validate_index_table(&z4_table(a5)).unwrap();
        assert!(axioms(&v).contains(&Axiom::A5));
        assert!(cyclic_axioms_oracle(2, 4, &a5).contains(&Axiom::A5));
    }

    #[test]
    fn validate_rejects_partial_or_malformed() {
        let partial = table(2, &[2], &[(&[0], 1), (&[1], 4)]);
        assert!(matches!(
            validate_index_table(&partial),
            Err(Error::Domain(_))
        ));
        let out_of_range = table(2, &[1], &[(&[0], 1), (&[2], 2)]);
        assert!(validate_index_table(&out_of_range).is_err());
        let not_prime = table(4, &[1], &[(&[0], 1)]);
        assert!(validate_index_table(&not_prime).is_err());
        assert!(matches!(
            FieldModel::abstract_group(&z4_table([1, 2, 4, 2])),
            Err(Error::InvalidIndexTable(_))
        ));
    }

    #[test]
    fn combine_and_tensor_examples() {
        assert_eq!(combine(&local(1, 4), -1), local(3, 4));
        assert_eq!(combine(&local(1, 4), 2), local(1, 2));
        let g = FieldModel::global(vec![Place::finite("v1"), Place::finite("v2")]).unwrap();
        let c = BrauerClass::global(&g, [("v1", f(1, 4)), ("v2", f(3, 4))]).unwrap();
        let expect = BrauerClass::global(&g, [("v1", f(3, 4)), ("v2", f(1, 4))]).unwrap();
        assert_eq!(combine(&c, 3), expect);

        assert!(tensor(&local(1, 4), &local(3, 4)).unwrap().is_zero());
        assert_eq!(tensor(&local(1, 4), &local(1, 4)).unwrap(), local(1, 2));
        assert!(matches!(tensor(&local(1, 4), &c), Err(Error::Model(_))));
    }

    #[test]
    fn global_construction_is_validated() {
        let g = FieldModel::global(vec![Place::finite("v1"), Place::real("r")]).unwrap();
        assert!(BrauerClass::global(&g, [("v1", f(1, 2))]).is_err());
        assert!(BrauerClass::global(&g, [("v1", f(1, 4)), ("r", f(3, 4))]).is_err());
        assert!(BrauerClass::global(&g, [("w", f(0, 1))]).is_err());
        assert!(BrauerClass::global(&g, [("v1", f(1, 2)), ("v1", f(1, 2))]).is_err());
        let c = BrauerClass::global(&g, [("v1", f(1, 2)), ("r", f(1, 2))]).unwrap();
        assert_eq!(index(&c).unwrap(), 2);
        let zero_listed = BrauerClass::global(&g, [("v1", f(0, 1))]).unwrap();
        assert_eq!(zero_listed, BrauerClass::zero(&g));
        assert!(FieldModel::global(vec![Place::finite("a"), Place::finite("a")]).is_err());
    }

    /// The unique multiple of `c` of p-power order whose complement has prime-to-p order.
    fn p_primary_oracle(c: &BrauerClass, p: u64) -> BrauerClass {
        let exp = exponent(c).unwrap();
        let mut candidates = Vec::new();
        for t in 0..exp as i64 {
            let part = combine(c, t);
            let rest = tensor(c, &combine(&part, -1)).unwrap();
            let mut o = exponent(&part).unwrap();
            while o.is_multiple_of(p) {
                o /= p;
            }
            if o == 1 && !exponent(&rest).unwrap().is_multiple_of(p) && !candidates.contains(&part)
            {
                candidates.push(part);
            }
        }
        assert_eq!(candidates.len(), 1);
        candidates.pop().unwrap()
    }

    #[test]
    fn p_primary_examples() {
        let c = local(1, 12);
        assert_eq!(p_primary_oracle(&c, 2), local(3, 4));
        assert_eq!(p_primary(&c, p(2)).unwrap(), local(3, 4));
        assert_eq!(tensor(&local(3, 4), &local(1, 3)).unwrap(), c);
        assert_eq!(p_primary_oracle(&c, 3), local(1, 3));
        assert_eq!(p_primary(&c, p(3)).unwrap(), local(1, 3));
        assert!(p_primary(&local(1, 4), p(3)).unwrap().is_zero());
        assert!(p_primary(&local(0, 1), p(2)).unwrap().is_zero());
    }

    #[test]
    fn same_subgroup_examples() {
        assert!(same_subgroup(&local(1, 4), &local(3, 4)).unwrap());
        assert!(!same_subgroup(&local(1, 4), &local(1, 2)).unwrap());
        let g = FieldModel::global(vec![Place::finite("v1"), Place::finite("v2")]).unwrap();
        let a = BrauerClass::global(&g, [("v1", f(1, 4)), ("v2", f(3, 4))]).unwrap();
        let b = BrauerClass::global(&g, [("v1", f(3, 4)), ("v2", f(1, 4))]).unwrap();
        assert!(same_subgroup(&a, &b).unwrap());
        assert!(matches!(
            same_subgroup(&a, &local(1, 4)),
            Err(Error::Model(_))
        ));
    }

    #[test]
    fn algebra_degree_must_be_multiple_of_index() {
        assert!(CentralSimpleAlgebra::new(local(1, 4), 8).is_ok());
        assert!(CentralSimpleAlgebra::new(local(1, 4), 6).is_err());
        assert!(CentralSimpleAlgebra::new(local(0, 1), 0).is_err());
        assert_eq!(
            CentralSimpleAlgebra::division(local(1, 8))
                .unwrap()
                .degree(),
            8
        );
    }

    #[test]
    fn serialization_shapes() {
        let g = FieldModel::global(vec![Place::finite("v2"), Place::finite("v1")]).unwrap();
        let c = BrauerClass::global(&g, [("v1", f(1, 4)), ("v2", f(3, 4))]).unwrap();
        assert_eq!(c.to_string(), "{v2: 3/4, v1: 1/4}");
        let m = FieldModel::abstract_group(&table(
            2,
            &[1, 1],
            &[(&[0, 0], 1), (&[0, 1], 2), (&[1, 0], 2), (&[1, 1], 4)],
        ))
        .unwrap();
        let e = BrauerClass::abstract_element(&m, &[1, -1]).unwrap();
        assert_eq!(e.to_string(), "(1, 1)");
        assert_eq!(index(&e).unwrap(), 4);
    }

    fn product_of_orders_model(p: u64, exponents: &[u32]) -> Arc<FieldModel> {
        let moduli: Vec<u64> = exponents.iter().map(|&e| p.pow(e)).collect();
        let mut entries = BTreeMap::new();
        let total: u64 = moduli.iter().product();
        for mut code in 0..total {
            let mut elem = vec![0; moduli.len()];
            for (slot, &m) in elem.iter_mut().zip(&moduli).rev() {
                *slot = code % m;
                code /= m;
            }
            let ind = elem
                .iter()
                .zip(&moduli)
                .map(|(&x, &m)| m / gcd(x, m))
                .product();
            entries.insert(elem, ind);
        }
        FieldModel::abstract_group(&IndexTable {
            p,
            exponents: exponents.to_vec(),
            entries,
        })
        .unwrap()
    }

    fn any_local() -> impl Strategy<Value = BrauerClass> {
        (1u64..200).prop_flat_map(|d| (0..d as i64).prop_map(move |n| local(n, d)))
    }

    proptest! {
        #[test]
        fn exponent_divides_index_abstract(x in 0i64..9, y in 0i64..3) {
            let m = product_of_orders_model(3, &[2, 1]);
            let c = BrauerClass::abstract_element(&m, &[x, y]).unwrap();
            let (e, i) = (exponent(&c).unwrap(), index(&c).unwrap());
            prop_assert_eq!(i % e, 0);
            prop_assert_eq!(i == 1, c.is_zero());
        }

        #[test]
        fn local_index_equals_exponent(c in any_local()) {
            prop_assert_eq!(index(&c).unwrap(), exponent(&c).unwrap());
            prop_assert_eq!(index(&c).unwrap() == 1, c.is_zero());
        }

        #[test]
        fn prime_to_exponent_multiples_keep_index(c in any_local(), t in -50i64..50) {
            let e = exponent(&c).unwrap();
            prop_assume!(gcd(t.unsigned_abs(), e) == 1);
            prop_assert_eq!(index(&combine(&c, t)).unwrap(), index(&c).unwrap());
        }

        #[test]
        fn primary_decomposition(c in any_local(), q in prop::sample::select(vec![2u64, 3, 5, 7])) {
            let cp = p_primary(&c, p(q)).unwrap();
            let rest = tensor(&c, &combine(&cp, -1)).unwrap();
            prop_assert_eq!(tensor(&cp, &rest).unwrap(), c.clone());
            let e = exponent(&c).unwrap();
            let mut qpart = 1;
            let mut x = e;
            while x.is_multiple_of(q) { x /= q; qpart *= q; }
            prop_assert_eq!(exponent(&cp).unwrap(), qpart);
            prop_assert!(!exponent(&rest).unwrap().is_multiple_of(q));
        }

        #[test]
        fn same_subgroup_is_an_equivalence(a in any_local(), b in any_local(), c in any_local()) {
            prop_assert!(same_subgroup(&a, &a).unwrap());
            let ab = same_subgroup(&a, &b).unwrap();
            prop_assert_eq!(ab, same_subgroup(&b, &a).unwrap());
            if ab && same_subgroup(&b, &c).unwrap() {
                prop_assert!(same_subgroup(&a, &c).unwrap());
            }
        }
    }
}
