use std::collections::BTreeMap;

use flagmotive::brauer::{exponent, index, p_primary};
use flagmotive::exact::is_prime;
use flagmotive::motives::{
    dichotomy_check, enumerate_upper_motives, motives_isomorphic, oracle_isomorphic, reduce,
    upper_motive_of,
};
use flagmotive::oracles::{
    abstract_corpus, cor1_is_diagonal, sweep_corpus, Corpus, SweepConfig, SweepSummary,
};
use flagmotive::{BrauerClass, FlagVariety, Prime, UpperMotive};
use serde::Serialize;
use serde_json::{json, Value};

use crate::document::{Document, FlagSpec};
use crate::error::CliError;

/// A result document, and an error to report after printing it (exit 3 paths).
pub struct Outcome {
    pub document: Value,
    pub failure: Option<CliError>,
}

impl Outcome {
    fn ok(document: impl Serialize) -> Result<Self, CliError> {
        Ok(Outcome {
            document: to_value(document)?,
            failure: None,
        })
    }
}

fn to_value(v: impl Serialize) -> Result<Value, CliError> {
    serde_json::to_value(v).map_err(|e| CliError::Input(format!("serialization: {e}")))
}

/// Prime divisors of `m`, ascending.
fn prime_divisors(mut m: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut q = 2;
    while m > 1 {
        if is_prime(m) {
            out.push(m);
            break;
        }
        if m.is_multiple_of(q) {
            out.push(q);
            while m.is_multiple_of(q) {
                m /= q;
            }
        }
        q += 1;
    }
    out
}

#[derive(Serialize)]
struct ClassSummary<'a> {
    class: &'a BrauerClass,
    exponent: u64,
    index: u64,
}

pub fn index_cmd(doc: &Document, name: &str) -> Result<Outcome, CliError> {
    let a = doc.algebra(name)?;
    let exp = exponent(a.class())?;
    let primes = match doc.model.as_abstract() {
        Some(group) if exp > 1 => vec![group.p().get()],
        _ => prime_divisors(exp),
    };
    let mut parts = Vec::new();
    for p in primes {
        let c = p_primary(a.class(), Prime::new(p)?)?;
        parts.push((p, exponent(&c)?, index(&c)?, c));
    }
    let p_primary: BTreeMap<u64, ClassSummary> = parts
        .iter()
        .map(|(p, exponent, index, class)| {
            (
                *p,
                ClassSummary {
                    class,
                    exponent: *exponent,
                    index: *index,
                },
            )
        })
        .collect();
    Outcome::ok(json!({
        "algebra": name,
        "class": a.class(),
        "degree": a.degree(),
        "exponent": exp,
        "index": index(a.class())?,
        "p_primary": p_primary,
    }))
}

pub fn reduce_cmd(
    doc: &Document,
    d: &str,
    k: u32,
    dp: &str,
    p: Option<u64>,
) -> Result<Outcome, CliError> {
    let p = doc.prime(p)?;
    let (dc, dpc) = (doc.algebra(d)?.class(), doc.algebra(dp)?.class());
    let r = reduce(dc, k, dpc, p)?;
    Outcome::ok(json!({
        "D": d,
        "D_prime": dp,
        "k": k,
        "p": p.get(),
        "mu_profile": r.profile.values,
        "gcd": r.profile.gcd(),
        "min": r.profile.min(),
        "minimizers": r.profile.minimizers(),
        "reduced_index": r.reduced_index,
    }))
}

fn motive_view(m: &UpperMotive) -> Result<Value, CliError> {
    Ok(match m {
        UpperMotive::Tate => json!({"kind": "tate", "dimension": 0}),
        UpperMotive::Upper(s) => json!({
            "kind": "upper",
            "p": s.p().get(),
            "level": s.level(),
            "n": s.n(),
            "generator": s.generator(),
            "subgroup_order": s.subgroup().len(),
            "dimension": s.dimension()?,
        }),
    })
}

/// Oracle answer: mutual isotropy for two upper summands, dimension for the rest.
fn oracle_answer(x: &UpperMotive, y: &UpperMotive) -> Result<bool, CliError> {
    Ok(match (x, y) {
        (UpperMotive::Upper(a), UpperMotive::Upper(b)) => oracle_isomorphic(a, b)?,
        _ => x.dimension()? == y.dimension()?,
    })
}

pub fn iso_cmd(doc: &Document, x: &str, y: &str, p: Option<u64>) -> Result<Outcome, CliError> {
    let p = doc.prime(p)?;
    let flag = |spec: &str| -> Result<(FlagVariety, UpperMotive), CliError> {
        let parsed: FlagSpec = spec.parse()?;
        let algebra = doc.algebra(&parsed.algebra)?.clone();
        let variety = FlagVariety::new(algebra, &parsed.dims)
            .map_err(|e| CliError::at(&format!("flag {spec:?}"), e))?;
        let upper = upper_motive_of(&variety, p)?;
        Ok((variety, upper))
    };
    let (vx, mx) = flag(x)?;
    let (vy, my) = flag(y)?;
    let isomorphic = motives_isomorphic(&mx, &my)?;
    let oracle_agrees = oracle_answer(&mx, &my)? == isomorphic;
    let document = json!({
        "p": p.get(),
        "x": {"flag": x, "dims": vx.dims(), "upper": motive_view(&mx)?},
        "y": {"flag": y, "dims": vy.dims(), "upper": motive_view(&my)?},
        "isomorphic": isomorphic,
        "oracle_agrees": oracle_agrees,
    });
    let failure = (!oracle_agrees)
        .then(|| CliError::Disagreement(format!("criterion says {isomorphic} for {x} vs {y}")));
    Ok(Outcome { document, failure })
}

pub fn enumerate_cmd(doc: &Document, name: &str, p: Option<u64>) -> Result<Outcome, CliError> {
    let p = doc.prime(p)?;
    let motives = enumerate_upper_motives(doc.algebra(name)?, p)?
        .iter()
        .map(motive_view)
        .collect::<Result<Vec<_>, _>>()?;
    Outcome::ok(json!({
        "algebra": name,
        "p": p.get(),
        "count": motives.len(),
        "motives": motives,
    }))
}

pub fn dichotomy_cmd(
    doc: &Document,
    a: &str,
    b: &str,
    p: Option<u64>,
) -> Result<Outcome, CliError> {
    let p = doc.prime(p)?;
    let verdict = dichotomy_check(doc.algebra(a)?, doc.algebra(b)?, p)?;
    Outcome::ok(json!({"A": a, "A_prime": b, "p": p.get(), "result": verdict}))
}

/// Nonzero p-primary parts of the document's algebras, plus every element of an abstract model.
fn document_corpus(doc: &Document, p: Prime) -> Result<Corpus, CliError> {
    if doc.model.as_abstract().is_some() {
        return Ok(abstract_corpus(
            &doc.model,
            "document (all elements)".into(),
        )?);
    }
    let mut classes: Vec<BrauerClass> = Vec::new();
    for a in doc.algebras.values() {
        let c = p_primary(a.class(), p)?;
        if !c.is_zero() && !classes.contains(&c) {
            classes.push(c);
        }
    }
    Ok(Corpus {
        label: format!("document p={p}"),
        p,
        classes,
    })
}

#[derive(Serialize)]
struct CheckReport<'a> {
    config: &'a SweepConfig,
    source: &'static str,
    summary: &'a SweepSummary,
    total_cases: usize,
    total_failures: usize,
}

pub fn check_cmd(doc: Option<&Document>, config: &SweepConfig) -> Result<Outcome, CliError> {
    let mut summary = SweepSummary::default();
    let mut config = config.clone();
    let source = match doc {
        None => {
            summary = flagmotive::oracles::run_sweep(&config)?;
            "built-in"
        }
        Some(doc) => {
            if let Some(group) = doc.model.as_abstract() {
                config.primes = vec![group.p().get()];
            }
            for &p in &config.primes {
                let p = Prime::new(p)?;
                sweep_corpus(&document_corpus(doc, p)?, &mut summary)?;
                summary.cor1.record(cor1_is_diagonal(p, 6), || {
                    format!("cor1 scan p={p} bound=6")
                });
            }
            "document"
        }
    };
    let report = CheckReport {
        config: &config,
        source,
        summary: &summary,
        total_cases: summary.total_cases(),
        total_failures: summary.total_failures(),
    };
    let failure = (report.total_failures > 0).then(|| {
        CliError::Disagreement(format!(
            "{} of {} checks failed",
            report.total_failures, report.total_cases
        ))
    });
    Ok(Outcome {
        document: to_value(&report)?,
        failure,
    })
}
