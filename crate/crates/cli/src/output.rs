//! Records and their JSON-lines / CSV encodings.

use std::io::Write;

use serde_json::{Map, Value};
use wpvol::scalars::{format_rational, PiGraded};
use wpvol::{PolyQ, Rational};

/// A value with a JSON form and a flat text form for CSV.
pub trait Cell {
    fn json(&self) -> Value;
    fn text(&self) -> String;
}

impl Cell for Rational {
    fn json(&self) -> Value {
        Value::String(format_rational(self))
    }
    fn text(&self) -> String {
        format_rational(self)
    }
}

impl Cell for PolyQ {
    fn json(&self) -> Value {
        serde_json::to_value(self).expect("polynomials serialize")
    }
    fn text(&self) -> String {
        self.to_string()
    }
}

impl Cell for Vec<Rational> {
    fn json(&self) -> Value {
        Value::Array(self.iter().map(Cell::json).collect())
    }
    fn text(&self) -> String {
        self.iter().map(format_rational).collect::<Vec<_>>().join(";")
    }
}

impl Cell for bool {
    fn json(&self) -> Value {
        Value::Bool(*self)
    }
    fn text(&self) -> String {
        self.to_string()
    }
}

impl Cell for usize {
    fn json(&self) -> Value {
        Value::from(*self)
    }
    fn text(&self) -> String {
        self.to_string()
    }
}

impl Cell for i64 {
    fn json(&self) -> Value {
        Value::from(*self)
    }
    fn text(&self) -> String {
        self.to_string()
    }
}

impl Cell for &str {
    fn json(&self) -> Value {
        Value::String(self.to_string())
    }
    fn text(&self) -> String {
        self.to_string()
    }
}

impl Cell for String {
    fn json(&self) -> Value {
        Value::String(self.clone())
    }
    fn text(&self) -> String {
        self.clone()
    }
}

impl<T: Cell> Cell for Option<T> {
    fn json(&self) -> Value {
        self.as_ref().map_or(Value::Null, Cell::json)
    }
    fn text(&self) -> String {
        self.as_ref().map(Cell::text).unwrap_or_default()
    }
}

#[derive(Clone, Debug, Default)]
pub struct Record {
    fields: Vec<(String, Value, String)>,
}

impl Record {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn put(mut self, key: &str, v: impl Cell) -> Self {
        self.fields.push((key.to_string(), v.json(), v.text()));
        self
    }

    /// `vol_coeff`, `pi_exp` and, when requested, an approximate `decimal`.
    pub fn put_vol(self, vol: &PiGraded, decimal: Option<usize>) -> Self {
        let r = self.put("vol_coeff", vol.coeff.clone()).put("pi_exp", vol.pi_exp as usize);
        match decimal {
            Some(d) => r.put("decimal", vol.to_decimal(d)),
            None => r,
        }
    }

    fn to_json(&self) -> Value {
        let mut m = Map::new();
        for (k, v, _) in &self.fields {
            m.insert(k.clone(), v.clone());
        }
        Value::Object(m)
    }
}

/// Records sharing one CSV header.
#[derive(Clone, Debug, Default)]
pub struct Section {
    pub records: Vec<Record>,
}

impl Section {
    pub fn of(records: Vec<Record>) -> Self {
        Self { records }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

pub fn emit(out: &mut impl Write, sections: &[Section], format: Format) -> std::io::Result<()> {
    match format {
        Format::Json => {
            for r in sections.iter().flat_map(|s| &s.records) {
                writeln!(out, "{}", r.to_json())?;
            }
        }
        Format::Csv => {
            let mut first = true;
            for s in sections.iter().filter(|s| !s.records.is_empty()) {
                if !first {
                    writeln!(out)?;
                }
                first = false;
                let mut w = csv::Writer::from_writer(Vec::new());
                w.write_record(s.records[0].fields.iter().map(|f| &f.0))?;
                for r in &s.records {
                    w.write_record(r.fields.iter().map(|f| &f.2))?;
                }
                out.write_all(&w.into_inner().map_err(|e| e.into_error())?)?;
            }
        }
    }
    Ok(())
}
