//! Format-neutral output rows and their plain, CSV and JSON-lines renderings.

use derange_core::Integer;
use serde_json::{Map, Value};

#[derive(Debug, Clone, PartialEq)]
pub enum Field {
    /// Arbitrary-size integer; a string in machine formats.
    Int(Integer),
    Small(u64),
    Float(f64),
    Bool(bool),
    Text(String),
}

impl Field {
    fn to_json(&self) -> Value {
        match self {
            Field::Int(n) => Value::String(n.to_string()),
            Field::Small(n) => Value::from(*n),
            Field::Float(x) => Value::from(*x),
            Field::Bool(b) => Value::Bool(*b),
            Field::Text(s) => Value::String(s.clone()),
        }
    }

    fn to_text(&self) -> String {
        match self {
            Field::Int(n) => n.to_string(),
            Field::Small(n) => n.to_string(),
            Field::Float(x) => format!("{x:e}"),
            Field::Bool(b) => b.to_string(),
            Field::Text(s) => s.clone(),
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct OutputRecord {
    fields: Vec<(&'static str, Field)>,
}

impl OutputRecord {
    pub fn new() -> Self {
        OutputRecord::default()
    }

    pub fn with(mut self, key: &'static str, value: Field) -> Self {
        self.fields.push((key, value));
        self
    }

    pub fn get(&self, key: &str) -> Option<&Field> {
        self.fields.iter().find(|(k, _)| *k == key).map(|(_, v)| v)
    }

    pub fn to_json(&self) -> Value {
        let map: Map<String, Value> = self
            .fields
            .iter()
            .map(|(k, v)| (k.to_string(), v.to_json()))
            .collect();
        Value::Object(map)
    }

    pub fn json_line(&self) -> String {
        self.to_json().to_string()
    }

    pub fn csv_header(&self) -> String {
        self.fields
            .iter()
            .map(|(k, _)| *k)
            .collect::<Vec<_>>()
            .join(",")
    }

    pub fn csv_row(&self) -> String {
        self.fields
            .iter()
            .map(|(_, v)| csv_escape(&v.to_text()))
            .collect::<Vec<_>>()
            .join(",")
    }

    /// Whitespace-separated values.
    pub fn plain_row(&self) -> String {
        self.fields
            .iter()
            .map(|(_, v)| v.to_text())
            .collect::<Vec<_>>()
            .join(" ")
    }

    pub fn plain_header(&self) -> String {
        self.fields
            .iter()
            .map(|(k, _)| *k)
            .collect::<Vec<_>>()
            .join(" ")
    }
}

fn csv_escape(s: &str) -> String {
    if s.contains([',', '"', '\n']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn big_integers_are_strings_in_json() {
        let big: Integer = "123456789012345678901234567890".parse().unwrap();
        let r = OutputRecord::new()
            .with("n", Field::Small(3))
            .with("value", Field::Int(big));
        assert_eq!(
            r.json_line(),
            r#"{"n":3,"value":"123456789012345678901234567890"}"#
        );
        assert_eq!(r.csv_header(), "n,value");
        assert_eq!(r.csv_row(), "3,123456789012345678901234567890");
    }

    #[test]
    fn csv_quotes_commas() {
        let r = OutputRecord::new().with("input", Field::Text("p=3, l=1".into()));
        assert_eq!(r.csv_row(), "\"p=3, l=1\"");
    }
}
