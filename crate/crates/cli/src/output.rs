//! Rendering of results as CSV or JSON at a fixed number of significant
//! digits. Identical inputs give byte-identical output.

use serde_json::{Map, Value};
use squeeze_bench::export::format_sig;

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug, Clone, Copy)]
pub struct Style {
    pub format: Format,
    pub precision: usize,
}

impl Style {
    pub fn fmt(&self, x: f64) -> String {
        format_sig(x, self.precision)
    }

    /// `x` rounded to the display precision, as a JSON number.
    pub fn num(&self, x: f64) -> Value {
        if !x.is_finite() {
            return Value::Null;
        }
        let rounded: f64 = self.fmt(x).parse().expect("formatted float parses");
        serde_json::Number::from_f64(rounded).map_or(Value::Null, Value::Number)
    }

    pub fn opt(&self, x: Option<f64>) -> Value {
        x.map_or(Value::Null, |v| self.num(v))
    }

    pub fn csv_opt(&self, x: Option<f64>) -> String {
        x.map_or_else(|| "none".to_string(), |v| self.fmt(v))
    }
}

/// A JSON object builder that keeps insertion order.
#[derive(Default)]
pub struct Obj(Map<String, Value>);

impl Obj {
    pub fn new() -> Self {
        Obj(Map::new())
    }

    pub fn put(mut self, key: &str, v: impl Into<Value>) -> Self {
        self.0.insert(key.to_string(), v.into());
        self
    }

    pub fn done(self) -> Value {
        Value::Object(self.0)
    }
}

pub fn json_document(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("JSON values serialize");
    s.push('\n');
    s
}

/// Header plus rows, comma separated, LF terminated.
pub fn csv_table(header: &[&str], rows: &[Vec<String>]) -> String {
    let mut out = header.join(",");
    out.push('\n');
    for r in rows {
        out.push_str(&r.join(","));
        out.push('\n');
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rounding_in_json() {
        let s = Style { format: Format::Json, precision: 4 };
        assert_eq!(s.num(0.8151704067).to_string(), "0.8152");
        assert_eq!(s.num(f64::NAN), Value::Null);
        assert_eq!(s.csv_opt(None), "none");
        let o = Obj::new().put("b", 1).put("a", 2).done();
        assert_eq!(o.to_string(), r#"{"b":1,"a":2}"#);
    }

    #[test]
    fn csv_shape() {
        let t = csv_table(&["x", "y"], &[vec!["1".into(), "2".into()]]);
        assert_eq!(t, "x,y\n1,2\n");
    }
}
