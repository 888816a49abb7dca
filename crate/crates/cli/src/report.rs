//! JSON-lines report writer and process exit classification.

use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::Path;

use serde::Serialize;
use serde_json::{Map, Value};

/// One violated parameter constraint.
#[derive(Clone, Debug, PartialEq)]
pub struct Violation {
    pub constraint: String,
    pub detail: String,
}

impl Violation {
    pub fn new(constraint: impl Into<String>, detail: impl Into<String>) -> Self {
        Violation {
            constraint: constraint.into(),
            detail: detail.into(),
        }
    }
}

#[derive(Debug)]
pub enum Failure {
    Invalid(Vec<Violation>),
    Core(jetcascade::Error),
    Internal(String),
}

impl Failure {
    pub fn exit_code(&self) -> u8 {
        match self {
            Failure::Invalid(_) => 2,
            Failure::Core(jetcascade::Error::Resource(_)) => 3,
            Failure::Core(_) => 2,
            Failure::Internal(_) => 4,
        }
    }

    pub fn messages(&self) -> Vec<String> {
        match self {
            Failure::Invalid(vs) => vs
                .iter()
                .map(|v| format!("validation failed: {} ({})", v.constraint, v.detail))
                .collect(),
            Failure::Core(e) => vec![e.to_string()],
            Failure::Internal(m) => vec![format!("internal error: {m}")],
        }
    }

    pub fn invalid(constraint: impl Into<String>, detail: impl Into<String>) -> Self {
        Failure::Invalid(vec![Violation::new(constraint, detail)])
    }
}

impl From<jetcascade::Error> for Failure {
    fn from(e: jetcascade::Error) -> Self {
        Failure::Core(e)
    }
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Self {
        Failure::Internal(format!("i/o: {e}"))
    }
}

/// Fail with every violation at once, or succeed if there are none.
pub fn check(violations: Vec<Violation>) -> Result<(), Failure> {
    if violations.is_empty() {
        Ok(())
    } else {
        Err(Failure::Invalid(violations))
    }
}

pub fn read_input(path: &Path, what: &str) -> Result<String, Failure> {
    std::fs::read_to_string(path)
        .map_err(|e| Failure::invalid(format!("{what} readable"), format!("{}: {e}", path.display())))
}

pub struct Report {
    out: Box<dyn Write>,
}

impl Report {
    pub fn open(path: Option<&Path>) -> Result<Self, Failure> {
        let out: Box<dyn Write> = match path {
            Some(p) => Box::new(BufWriter::new(File::create(p).map_err(|e| {
                Failure::invalid("output writable", format!("{}: {e}", p.display()))
            })?)),
            None => Box::new(BufWriter::new(io::stdout())),
        };
        Ok(Report { out })
    }

    /// Write `{"record": kind, ...fields of value}` as one line. Non-object
    /// values go under `"value"`.
    pub fn emit<T: Serialize>(&mut self, kind: &str, value: &T) -> Result<(), Failure> {
        let v = serde_json::to_value(value).map_err(|e| Failure::Internal(e.to_string()))?;
        let mut map = Map::new();
        map.insert("record".into(), Value::String(kind.into()));
        match v {
            Value::Object(fields) => map.extend(fields),
            other => {
                map.insert("value".into(), other);
            }
        }
        writeln!(self.out, "{}", Value::Object(map))?;
        Ok(())
    }

    pub fn finish(mut self) -> Result<(), Failure> {
        self.out.flush()?;
        Ok(())
    }
}
