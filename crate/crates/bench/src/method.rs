use std::fmt;
use std::str::FromStr;

use crate::error::BenchError;

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Method {
    Mgm,
    Qi,
    Qseg,
    /// Masks read from the manifest's `external` map under this key.
    External(String),
}

impl FromStr for Method {
    type Err = BenchError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.trim() {
            "mgm" => Ok(Method::Mgm),
            "qi" => Ok(Method::Qi),
            "qseg" => Ok(Method::Qseg),
            other => match other.strip_prefix("external:") {
                Some(name) if !name.is_empty() => Ok(Method::External(name.to_string())),
                _ => Err(BenchError::Config(format!("unknown method {other:?}"))),
            },
        }
    }
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Method::Mgm => f.write_str("mgm"),
            Method::Qi => f.write_str("qi"),
            Method::Qseg => f.write_str("qseg"),
            Method::External(name) => write!(f, "external:{name}"),
        }
    }
}

/// Parses a comma-separated method list, rejecting empty lists and repeats.
pub fn parse_methods(list: &str) -> Result<Vec<Method>, BenchError> {
    let mut out: Vec<Method> = Vec::new();
    for part in list.split(',').filter(|p| !p.trim().is_empty()) {
        let m: Method = part.parse()?;
        if out.contains(&m) {
            return Err(BenchError::Config(format!("method {m} listed twice")));
        }
        out.push(m);
    }
    if out.is_empty() {
        return Err(BenchError::Config("no methods selected".into()));
    }
    Ok(out)
}
