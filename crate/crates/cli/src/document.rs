//! Input documents: a field model, an optional default prime and named algebras.

use std::collections::BTreeMap;
use std::sync::Arc;

use flagmotive::brauer::index;
use flagmotive::{
    BrauerClass, CentralSimpleAlgebra, FieldModel, Fraction, IndexTable, Place, Prime,
};
use serde::Deserialize;
use serde_json::Value;

use crate::error::CliError;

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawDocument {
    model: RawModel,
    #[serde(default)]
    p: Option<u64>,
    #[serde(default)]
    algebras: BTreeMap<String, RawAlgebra>,
}

#[derive(Debug, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase", deny_unknown_fields)]
enum RawModel {
    Local,
    Global {
        places: Vec<RawPlace>,
    },
    Abstract {
        p: u64,
        exponents: Vec<u32>,
        /// Keys are comma-separated coordinates, e.g. `"1,0"`.
        index_table: BTreeMap<String, u64>,
    },
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawPlace {
    id: String,
    #[serde(default)]
    real: bool,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawAlgebra {
    class: Value,
    #[serde(default)]
    degree: Option<u64>,
}

#[derive(Debug)]
pub struct Document {
    pub model: Arc<FieldModel>,
    pub p: Option<Prime>,
    pub algebras: BTreeMap<String, CentralSimpleAlgebra>,
}

impl Document {
    pub fn parse(text: &str) -> Result<Self, CliError> {
        let raw: RawDocument =
            serde_json::from_str(text).map_err(|e| CliError::Input(format!("document: {e}")))?;
        let model = build_model(raw.model)?;
        let p = raw
            .p
            .map(|p| Prime::new(p).map_err(|e| CliError::at("p", e)))
            .transpose()?;
        let mut algebras = BTreeMap::new();
        for (name, a) in raw.algebras {
            let field = format!("algebras.{name}");
            let class =
                parse_class(&model, &a.class).map_err(|e| e.within(&format!("{field}.class")))?;
            let degree = match a.degree {
                Some(d) => d,
                None => index(&class).map_err(|e| CliError::at(&field, e))?,
            };
            let algebra = CentralSimpleAlgebra::new(class, degree)
                .map_err(|e| CliError::at(&format!("{field}.degree"), e))?;
            algebras.insert(name, algebra);
        }
        Ok(Document { model, p, algebras })
    }

    pub fn algebra(&self, name: &str) -> Result<&CentralSimpleAlgebra, CliError> {
        self.algebras
            .get(name)
            .ok_or_else(|| CliError::Input(format!("unknown algebra {name:?}")))
    }

    /// The prime to work at: flag, then document, then the prime of an abstract model.
    pub fn prime(&self, flag: Option<u64>) -> Result<Prime, CliError> {
        if let Some(p) = flag {
            return Prime::new(p).map_err(|e| CliError::at("--p", e));
        }
        if let Some(p) = self.p {
            return Ok(p);
        }
        if let Some(group) = self.model.as_abstract() {
            return Ok(group.p());
        }
        Err(CliError::Input(
            "no prime given: pass --p or set \"p\" in the document".into(),
        ))
    }
}

fn build_model(raw: RawModel) -> Result<Arc<FieldModel>, CliError> {
    match raw {
        RawModel::Local => Ok(FieldModel::local()),
        RawModel::Global { places } => {
            let places = places
                .into_iter()
                .map(|p| Place {
                    id: p.id,
                    real: p.real,
                })
                .collect();
            FieldModel::global(places).map_err(|e| CliError::at("model.places", e))
        }
        RawModel::Abstract {
            p,
            exponents,
            index_table,
        } => {
            let mut entries = BTreeMap::new();
            for (key, ind) in index_table {
                let element = parse_coordinates(&key)
                    .map_err(|e| e.within(&format!("model.index_table[{key:?}]")))?;
                entries.insert(element, ind);
            }
            let table = IndexTable {
                p,
                exponents,
                entries,
            };
            FieldModel::abstract_group(&table).map_err(|e| CliError::at("model.index_table", e))
        }
    }
}

fn parse_coordinates(key: &str) -> Result<Vec<u64>, CliError> {
    key.split(',')
        .map(|s| {
            s.trim()
                .parse::<u64>()
                .map_err(|_| CliError::Input(format!("bad coordinate {s:?}")))
        })
        .collect()
}

fn parse_fraction(v: &Value) -> Result<Fraction, CliError> {
    match v {
        Value::String(s) => s
            .parse()
            .map_err(|e| CliError::Input(format!("bad fraction {s:?}: {e}"))),
        other => Err(CliError::Input(format!(
            "expected a \"num/den\" string, got {other}"
        ))),
    }
}

fn parse_class(model: &Arc<FieldModel>, v: &Value) -> Result<BrauerClass, CliError> {
    match &**model {
        FieldModel::Local => BrauerClass::local(model, parse_fraction(v)?).map_err(CliError::Core),
        FieldModel::Global { .. } => {
            let Value::Object(map) = v else {
                return Err(CliError::Input(format!(
                    "expected a map from place id to invariant, got {v}"
                )));
            };
            let invariants = map
                .iter()
                .map(|(id, x)| Ok((id.as_str(), parse_fraction(x).map_err(|e| e.within(id))?)))
                .collect::<Result<Vec<_>, CliError>>()?;
            BrauerClass::global(model, invariants).map_err(CliError::Core)
        }
        FieldModel::Abstract(_) => {
            let Value::Array(xs) = v else {
                return Err(CliError::Input(format!(
                    "expected a list of integer coordinates, got {v}"
                )));
            };
            let coords = xs
                .iter()
                .map(|x| {
                    x.as_i64()
                        .ok_or_else(|| CliError::Input(format!("bad coordinate {x}")))
                })
                .collect::<Result<Vec<_>, _>>()?;
            BrauerClass::abstract_element(model, &coords).map_err(CliError::Core)
        }
    }
}

/// A flag specification `d1,d2,...@Name`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FlagSpec {
    pub dims: Vec<u64>,
    pub algebra: String,
}

impl std::str::FromStr for FlagSpec {
    type Err = CliError;

    fn from_str(s: &str) -> Result<Self, CliError> {
        let bad = || {
            CliError::Input(format!(
                "malformed flag specification {s:?}, expected d1,d2,...@Name"
            ))
        };
        let (dims, name) = s.split_once('@').ok_or_else(bad)?;
        if name.is_empty() || dims.trim().is_empty() {
            return Err(bad());
        }
        let dims = dims
            .split(',')
            .map(|d| d.trim().parse::<u64>().map_err(|_| bad()))
            .collect::<Result<Vec<_>, _>>()?;
        Ok(FlagSpec {
            dims,
            algebra: name.to_string(),
        })
    }
}
