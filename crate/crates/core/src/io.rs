//! JSON formats for polynomial systems and root sets.
//!
//! System: `{"n": 2, "polys": [{"terms": [{"exps": [0, 2], "coef": [1.0, 0.0]}, ...]}, ...]}`
//! with an optional free-form `"meta"` object.
//!
//! Roots: `{"roots": [{"z": [[re, im], ...], "residual": f}, ...], "method": "...", "seed": k, ...}`.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::config::Tolerances;
use crate::error::{Error, Result};
use crate::poly::{Exponent, PolySystem, Polynomial};
use crate::solver::RootResult;

pub const VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Debug, Clone, Serialize, Deserialize)]
struct TermJson {
    exps: Vec<u32>,
    coef: [f64; 2],
}

#[derive(Debug, Clone, Serialize, Deserialize)]
struct PolyJson {
    terms: Vec<TermJson>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
struct SystemJson {
    n: usize,
    polys: Vec<PolyJson>,
    #[serde(skip_serializing_if = "Option::is_none")]
    meta: Option<Value>,
}

fn perr(msg: impl Into<String>) -> Error {
    Error::Parse(msg.into())
}

fn field<'a>(obj: &'a Value, key: &str, ctx: &str) -> Result<&'a Value> {
    obj.get(key)
        .ok_or_else(|| perr(format!("{ctx}: missing field \"{key}\"")))
}

fn parse_term(v: &Value, n: usize, ctx: &str) -> Result<(Exponent, Complex64)> {
    let exps = field(v, "exps", ctx)?
        .as_array()
        .ok_or_else(|| perr(format!("{ctx}: \"exps\" must be an array")))?;
    if exps.len() != n {
        return Err(perr(format!(
            "{ctx}: \"exps\" has length {}, expected {n}",
            exps.len()
        )));
    }
    let exps = exps
        .iter()
        .enumerate()
        .map(|(i, e)| {
            e.as_u64()
                .and_then(|x| u32::try_from(x).ok())
                .ok_or_else(|| perr(format!("{ctx}: exponent {i} is not a nonnegative integer")))
        })
        .collect::<Result<Vec<u32>>>()?;
    let coef = field(v, "coef", ctx)?;
    let c = match coef {
        Value::Array(a) if a.len() == 2 => {
            let re = a[0].as_f64();
            let im = a[1].as_f64();
            match (re, im) {
                (Some(re), Some(im)) => Complex64::new(re, im),
                _ => return Err(perr(format!("{ctx}: \"coef\" entries must be numbers"))),
            }
        }
        Value::Number(x) => Complex64::new(x.as_f64().unwrap(), 0.0),
        _ => return Err(perr(format!("{ctx}: \"coef\" must be [re, im]"))),
    };
    if !c.re.is_finite() || !c.im.is_finite() {
        return Err(perr(format!("{ctx}: coefficient is not finite")));
    }
    Ok((Exponent::new(exps), c))
}

/// Parses a system from JSON text. Errors name the offending polynomial and
/// term by zero-based index.
pub fn parse_system(text: &str) -> Result<PolySystem> {
    let root: Value = serde_json::from_str(text).map_err(|e| perr(format!("invalid JSON: {e}")))?;
    let n = field(&root, "n", "system")?
        .as_u64()
        .ok_or_else(|| perr("system: \"n\" must be a positive integer"))? as usize;
    let polys = field(&root, "polys", "system")?
        .as_array()
        .ok_or_else(|| perr("system: \"polys\" must be an array"))?;
    let parsed = polys
        .iter()
        .enumerate()
        .map(|(pi, p)| {
            let ctx = format!("poly {pi}");
            let terms = field(p, "terms", &ctx)?
                .as_array()
                .ok_or_else(|| perr(format!("{ctx}: \"terms\" must be an array")))?;
            let terms = terms
                .iter()
                .enumerate()
                .map(|(ti, t)| parse_term(t, n, &format!("poly {pi}, term {ti}")))
                .collect::<Result<Vec<_>>>()?;
            Polynomial::from_terms(n, terms).map_err(|e| perr(format!("{ctx}: {e}")))
        })
        .collect::<Result<Vec<_>>>()?;
    PolySystem::new(parsed)
}

/// Serializes a system, terms in column order, with optional metadata.
pub fn system_to_json(sys: &PolySystem, meta: Option<Value>) -> String {
    let doc = SystemJson {
        n: sys.n(),
        polys: sys
            .polys()
            .iter()
            .map(|p| PolyJson {
                terms: p
                    .terms()
                    .map(|(e, c)| TermJson {
                        exps: e.exps().to_vec(),
                        coef: [c.re, c.im],
                    })
                    .collect(),
            })
            .collect(),
        meta,
    };
    serde_json::to_string_pretty(&doc).expect("system serializes")
}

/// Metadata block of a parsed system file, if present.
pub fn system_meta(text: &str) -> Result<Option<Value>> {
    let root: Value = serde_json::from_str(text).map_err(|e| perr(format!("invalid JSON: {e}")))?;
    Ok(root.get("meta").cloned())
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct RootJson {
    pub z: Vec<[f64; 2]>,
    pub residual: f64,
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct RootsJson {
    pub roots: Vec<RootJson>,
    pub method: String,
    pub seed: u64,
    pub random_combinations: bool,
    pub tolerances: Tolerances,
    pub version: String,
}

impl RootsJson {
    pub fn from_result(res: &RootResult) -> Self {
        RootsJson {
            roots: res
                .roots
                .iter()
                .zip(&res.residuals)
                .map(|(z, &residual)| RootJson {
                    z: z.iter().map(|c| [c.re, c.im]).collect(),
                    residual,
                })
                .collect(),
            method: format!("{}-{}", res.method.pipeline, res.method.factorization),
            seed: res.seed,
            random_combinations: res.method.random_combinations,
            tolerances: res.method.tolerances,
            version: VERSION.to_string(),
        }
    }

    pub fn points(&self) -> Vec<Vec<Complex64>> {
        self.roots
            .iter()
            .map(|r| r.z.iter().map(|p| Complex64::new(p[0], p[1])).collect())
            .collect()
    }
}

pub fn roots_to_json(res: &RootResult) -> String {
    serde_json::to_string_pretty(&RootsJson::from_result(res)).expect("roots serialize")
}

pub fn parse_roots(text: &str) -> Result<RootsJson> {
    serde_json::from_str(text).map_err(|e| perr(format!("invalid roots file: {e}")))
}
