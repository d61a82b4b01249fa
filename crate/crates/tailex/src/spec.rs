//! The `name:key=value,...` mini-language for models, scalers and measures.

use std::collections::BTreeMap;

use tailex_core::risk_measures::Measure;
use tailex_core::scalers::Scaler;
use tailex_core::tail_models::{BetaModel, Burr, Exponential, HallModel, Student, TailModel};

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum SpecError {
    #[error("empty {0} specification")]
    Empty(&'static str),
    #[error("unknown {kind} '{name}' (expected one of: {expected})")]
    UnknownName { kind: &'static str, name: String, expected: &'static str },
    #[error("'{name}' is missing required key '{key}'")]
    MissingKey { name: String, key: &'static str },
    #[error("'{name}' does not take key '{key}'")]
    UnknownKey { name: String, key: String },
    #[error("key '{key}' given twice")]
    DuplicateKey { key: String },
    #[error("key '{key}' has invalid value '{value}'")]
    BadValue { key: String, value: String },
    #[error("malformed entry '{0}', expected key=value")]
    Malformed(String),
    #[error("{0}")]
    Invalid(String),
}

struct Parsed {
    name: String,
    kv: BTreeMap<String, f64>,
}

fn parse_raw(s: &str, kind: &'static str) -> Result<Parsed, SpecError> {
    let s = s.trim();
    if s.is_empty() {
        return Err(SpecError::Empty(kind));
    }
    let (name, rest) = s.split_once(':').unwrap_or((s, ""));
    let mut kv = BTreeMap::new();
    for entry in rest.split(',').map(str::trim).filter(|e| !e.is_empty()) {
        let (k, v) = entry.split_once('=').ok_or_else(|| SpecError::Malformed(entry.to_string()))?;
        let (k, v) = (k.trim(), v.trim());
        let x: f64 = v.parse().map_err(|_| SpecError::BadValue { key: k.to_string(), value: v.to_string() })?;
        if !x.is_finite() {
            return Err(SpecError::BadValue { key: k.to_string(), value: v.to_string() });
        }
        if kv.insert(k.to_string(), x).is_some() {
            return Err(SpecError::DuplicateKey { key: k.to_string() });
        }
    }
    Ok(Parsed { name: name.trim().to_ascii_lowercase(), kv })
}

impl Parsed {
    /// Takes the listed keys (defaults for optional ones) and rejects leftovers.
    fn take<const N: usize>(mut self, keys: [(&'static str, Option<f64>); N]) -> Result<[f64; N], SpecError> {
        let mut out = [0.0; N];
        for (slot, (key, default)) in out.iter_mut().zip(keys) {
            *slot = match (self.kv.remove(key), default) {
                (Some(v), _) => v,
                (None, Some(d)) => d,
                (None, None) => return Err(SpecError::MissingKey { name: self.name.clone(), key }),
            };
        }
        if let Some(key) = self.kv.into_keys().next() {
            return Err(SpecError::UnknownKey { name: self.name, key });
        }
        Ok(out)
    }
}

fn invalid(e: tailex_core::Error) -> SpecError {
    SpecError::Invalid(e.to_string())
}

/// `burr:a=,b=`, `student:v=`, `beta:a=,b=`, `hall:b=,alpha=,c=,d=,varrho=`, `exponential:rate=`.
pub fn parse_model(s: &str) -> Result<Box<dyn TailModel>, SpecError> {
    let p = parse_raw(s, "model")?;
    Ok(match p.name.as_str() {
        "burr" => {
            let [a, b] = p.take([("a", None), ("b", None)])?;
            Box::new(Burr::new(a, b).map_err(invalid)?)
        }
        "student" => {
            let [v] = p.take([("v", None)])?;
            Box::new(Student::new(v).map_err(invalid)?)
        }
        "beta" => {
            let [a, b] = p.take([("a", None), ("b", None)])?;
            Box::new(BetaModel::new(a, b).map_err(invalid)?)
        }
        "hall" => {
            let [b, alpha, c, d, varrho] =
                p.take([("b", Some(1.0)), ("alpha", None), ("c", Some(0.0)), ("d", Some(0.0)), ("varrho", Some(-1.0))])?;
            Box::new(HallModel::new(b, alpha, c, d, varrho).map_err(invalid)?)
        }
        "exponential" => {
            let [rate] = p.take([("rate", Some(1.0))])?;
            Box::new(Exponential::new(rate).map_err(invalid)?)
        }
        _ => {
            return Err(SpecError::UnknownName {
                kind: "model",
                name: p.name,
                expected: "burr, student, beta, hall, exponential",
            })
        }
    })
}

/// `beta:a=,b=`, `uniform`, `unit`.
pub fn parse_scaler(s: &str) -> Result<Scaler, SpecError> {
    let p = parse_raw(s, "scaler")?;
    match p.name.as_str() {
        "beta" => {
            let [a, b] = p.take([("a", None), ("b", None)])?;
            Scaler::beta(a, b).map_err(invalid)
        }
        "uniform" => p.take([]).map(|_| Scaler::uniform()),
        "unit" => p.take([]).map(|_| Scaler::Unit),
        _ => Err(SpecError::UnknownName { kind: "scaler", name: p.name, expected: "beta, uniform, unit" }),
    }
}

/// `expectile`, `hg:kappa=K`, `deflated-tail[:x=X]`, `deflated-var`.
pub fn parse_measure(s: &str) -> Result<Measure, SpecError> {
    let p = parse_raw(s, "measure")?;
    match p.name.as_str() {
        "expectile" => p.take([]).map(|_| Measure::Expectile),
        "hg" => {
            let [kappa] = p.take([("kappa", None)])?;
            if !(kappa >= 1.0) {
                return Err(SpecError::BadValue { key: "kappa".into(), value: kappa.to_string() });
            }
            Ok(Measure::Hg { kappa })
        }
        "deflated-tail" => {
            let [x] = p.take([("x", Some(f64::NAN))])?;
            Ok(Measure::DeflatedTail { x: if x.is_nan() { None } else { Some(x) } })
        }
        "deflated-var" => p.take([]).map(|_| Measure::DeflatedVar),
        _ => Err(SpecError::UnknownName {
            kind: "measure",
            name: p.name,
            expected: "expectile, hg:kappa=K, deflated-tail, deflated-var",
        }),
    }
}

/// `q1,q2,...` or `a:b:geom` (20 points with `1 - q` geometric from `1 - a` to `1 - b`),
/// optionally `a:b:geom:n`.
pub fn parse_q_grid(s: &str) -> Result<Vec<f64>, SpecError> {
    let bad = |v: &str| SpecError::BadValue { key: "q".into(), value: v.to_string() };
    let num = |v: &str| v.trim().parse::<f64>().map_err(|_| bad(v));
    let parts: Vec<&str> = s.split(':').collect();
    let grid = match parts.as_slice() {
        [a, b, "geom"] | [a, b, "geom", _] => {
            let n = match parts.get(3) {
                Some(n) => n.trim().parse::<usize>().map_err(|_| bad(n))?,
                None => 20,
            };
            let (a, b) = (num(a)?, num(b)?);
            if !(0.0 < a && a < b && b < 1.0) || n < 2 {
                return Err(SpecError::Invalid(format!("geometric grid needs 0 < a < b < 1 and n ≥ 2, got {s}")));
            }
            let (la, lb) = ((1.0 - a).ln(), (1.0 - b).ln());
            (0..n).map(|i| 1.0 - (la + (lb - la) * i as f64 / (n - 1) as f64).exp()).collect()
        }
        [_] => s.split(',').map(num).collect::<Result<Vec<_>, _>>()?,
        _ => return Err(bad(s)),
    };
    if grid.iter().any(|q| !(*q > 0.0 && *q < 1.0)) {
        return Err(SpecError::Invalid(format!("every q must lie in (0, 1): {s}")));
    }
    if grid.windows(2).any(|w| !(w[0] < w[1])) {
        return Err(SpecError::Invalid(format!("q grid must be strictly increasing: {s}")));
    }
    Ok(grid)
}

pub fn parse_orders(s: &str) -> Result<Vec<u8>, SpecError> {
    let mut out = Vec::new();
    for part in s.split(',').map(str::trim) {
        let k: u8 = part.parse().map_err(|_| SpecError::BadValue { key: "orders".into(), value: part.into() })?;
        if !(1..=3).contains(&k) {
            return Err(SpecError::BadValue { key: "orders".into(), value: part.into() });
        }
        if !out.contains(&k) {
            out.push(k);
        }
    }
    out.sort_unstable();
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn models_round_trip() {
        assert_eq!(parse_model("burr:a=2,b=1.5").unwrap().name(), "burr:a=2,b=1.5");
        assert!(parse_model("student:v=1.2").is_ok());
        assert!(parse_model("hall:alpha=3").is_ok());
    }

    #[test]
    fn errors_name_the_key() {
        let e = parse_model("burr:a=2").err().unwrap().to_string();
        assert!(e.contains("'b'"), "{e}");
        let e = parse_model("burr:a=2,b=x").err().unwrap().to_string();
        assert!(e.contains("'b'"), "{e}");
        let e = parse_model("student:v=2,w=1").err().unwrap().to_string();
        assert!(e.contains("'w'"), "{e}");
        let e = parse_measure("hg").unwrap_err().to_string();
        assert!(e.contains("'kappa'"), "{e}");
    }

    #[test]
    fn geometric_grid() {
        let g = parse_q_grid("0.99:0.999999:geom").unwrap();
        assert_eq!(g.len(), 20);
        assert!((g[0] - 0.99).abs() < 1e-15 && (g[19] - 0.999999).abs() < 1e-15);
        assert!(parse_q_grid("0.9,0.8").is_err());
        assert_eq!(parse_q_grid("0.9979").unwrap(), vec![0.9979]);
    }

    #[test]
    fn orders() {
        assert_eq!(parse_orders("3,1,2").unwrap(), vec![1, 2, 3]);
        assert!(parse_orders("4").is_err());
    }
}
