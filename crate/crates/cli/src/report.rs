//! Self-describing report documents: flat `key = value` lines with
//! string, number, and number-array values. Numbers carry 17 significant
//! digits so a re-parsed report reproduces the run exactly; infinities
//! serialize as the literal `inf`.

use std::fmt::Write as _;

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Clone, Debug, PartialEq)]
pub enum Value {
    Num(f64),
    Text(String),
    List(Vec<f64>),
}

#[derive(Clone, Debug)]
pub struct Report {
    entries: Vec<(String, Value)>,
}

pub fn fmt_num(v: f64) -> String {
    if v.is_nan() {
        "nan".to_string()
    } else if v == f64::INFINITY {
        "inf".to_string()
    } else if v == f64::NEG_INFINITY {
        "-inf".to_string()
    } else {
        format!("{v:.16e}")
    }
}

fn parse_num(s: &str) -> Result<f64, String> {
    match s {
        "inf" => Ok(f64::INFINITY),
        "-inf" => Ok(f64::NEG_INFINITY),
        "nan" => Ok(f64::NAN),
        _ => s.parse().map_err(|_| format!("bad number {s:?}")),
    }
}

impl Report {
    pub fn new(command: &str) -> Self {
        let mut r = Report { entries: Vec::new() };
        r.num("schema_version", SCHEMA_VERSION as f64);
        r.text("command", command);
        r
    }

    pub fn num(&mut self, key: &str, v: f64) {
        self.entries.push((key.to_string(), Value::Num(v)));
    }

    pub fn text(&mut self, key: &str, v: &str) {
        self.entries.push((key.to_string(), Value::Text(v.to_string())));
    }

    pub fn list(&mut self, key: &str, v: &[f64]) {
        self.entries.push((key.to_string(), Value::List(v.to_vec())));
    }

    pub fn get(&self, key: &str) -> Option<&Value> {
        self.entries.iter().find(|(k, _)| k == key).map(|(_, v)| v)
    }

    /// The machine format: one `key = value` line per entry, strings
    /// quoted, arrays bracketed.
    pub fn render_structured(&self) -> String {
        let mut out = String::new();
        for (k, v) in &self.entries {
            match v {
                Value::Num(n) => writeln!(out, "{k} = {}", fmt_num(*n)).unwrap(),
                Value::Text(s) => writeln!(out, "{k} = {s:?}").unwrap(),
                Value::List(xs) => {
                    let body: Vec<String> = xs.iter().map(|x| fmt_num(*x)).collect();
                    writeln!(out, "{k} = [{}]", body.join(", ")).unwrap();
                }
            }
        }
        out
    }

    /// The human format: same content, plain numbers, no quoting.
    pub fn render_text(&self) -> String {
        let mut out = String::new();
        for (k, v) in &self.entries {
            match v {
                Value::Num(n) => writeln!(out, "{k}: {n}").unwrap(),
                Value::Text(s) => writeln!(out, "{k}: {s}").unwrap(),
                Value::List(xs) => {
                    let body: Vec<String> = xs.iter().map(|x| x.to_string()).collect();
                    writeln!(out, "{k}: [{}]", body.join(", ")).unwrap();
                }
            }
        }
        out
    }

    /// Inverse of [`render_structured`].
    pub fn parse(doc: &str) -> Result<Report, String> {
        let mut entries = Vec::new();
        for line in doc.lines() {
            let line = line.trim();
            if line.is_empty() {
                continue;
            }
            let (k, raw) = line
                .split_once(" = ")
                .ok_or_else(|| format!("missing ' = ' in {line:?}"))?;
            let raw = raw.trim();
            let value = if let Some(body) = raw.strip_prefix('[') {
                let body = body.strip_suffix(']').ok_or_else(|| format!("unterminated array in {line:?}"))?;
                let xs = body
                    .split(',')
                    .filter(|s| !s.trim().is_empty())
                    .map(|s| parse_num(s.trim()))
                    .collect::<Result<Vec<f64>, _>>()?;
                Value::List(xs)
            } else if let Some(body) = raw.strip_prefix('"') {
                let body = body.strip_suffix('"').ok_or_else(|| format!("unterminated string in {line:?}"))?;
                Value::Text(body.to_string())
            } else {
                Value::Num(parse_num(raw)?)
            };
            entries.push((k.to_string(), value));
        }
        Ok(Report { entries })
    }
}
