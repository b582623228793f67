//! One verdict per lattice, rendered as a text line or a JSON object with
//! the same fields.

use serde_json::{Map, Value};

#[derive(Debug, Clone)]
pub struct Report {
    key: String,
    verdict: &'static str,
    fields: Vec<(&'static str, Value)>,
    /// Indented lines following the verdict in text mode.
    detail: Vec<(&'static str, Value)>,
    /// Verbatim text following the verdict in text mode.
    body: Option<(&'static str, String)>,
}

impl Report {
    pub fn new(key: String, verdict: &'static str) -> Self {
        Report {
            key,
            verdict,
            fields: Vec::new(),
            detail: Vec::new(),
            body: None,
        }
    }

    /// Adds a `name=value` field to the verdict line.
    pub fn field(mut self, name: &'static str, value: impl Into<Value>) -> Self {
        self.fields.push((name, value.into()));
        self
    }

    /// Adds an indented `name: value` line below the verdict.
    pub fn detail(mut self, name: &'static str, value: impl Into<Value>) -> Self {
        self.detail.push((name, value.into()));
        self
    }

    /// Attaches multi-line text printed as is after the verdict.
    pub fn body(mut self, name: &'static str, text: String) -> Self {
        self.body = Some((name, text));
        self
    }

    pub fn text(&self) -> String {
        let mut out = format!("{}: {}", self.key, self.verdict);
        for (name, value) in &self.fields {
            out.push(' ');
            out.push_str(&render_field(name, value));
        }
        for (name, value) in &self.detail {
            out.push_str(&format!("\n  {name}: {}", plain(value)));
        }
        if let Some((_, text)) = &self.body {
            out.push('\n');
            out.push_str(text.trim_end());
        }
        out
    }

    pub fn json(&self) -> String {
        let mut m = Map::new();
        m.insert("lattice".into(), self.key.clone().into());
        m.insert("verdict".into(), self.verdict.into());
        for (name, value) in self.fields.iter().chain(&self.detail) {
            m.insert((*name).into(), value.clone());
        }
        if let Some((name, text)) = &self.body {
            m.insert((*name).into(), text.clone().into());
        }
        Value::Object(m).to_string()
    }
}

fn plain(v: &Value) -> String {
    match v {
        Value::String(s) => s.clone(),
        Value::Array(items) => items.iter().map(plain).collect::<Vec<_>>().join(" "),
        other => other.to_string(),
    }
}

/// `(key=value)` for parenthesized fields, `key=value` otherwise.
fn render_field(name: &str, value: &Value) -> String {
    match name {
        "assignments" | "converged" | "cutoff" | "reason" => {
            let inner = match name {
                "converged" => format!("converged k={}", plain(value)),
                "reason" => plain(value),
                _ => format!("{name}={}", plain(value)),
            };
            format!("({inner})")
        }
        _ => format!("{name}={}", plain(value)),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn text_and_json_agree() {
        let r = Report::new("L1".into(), "holds").field("assignments", 512);
        assert_eq!(r.text(), "L1: holds (assignments=512)");
        assert_eq!(
            r.json(),
            r#"{"assignments":512,"lattice":"L1","verdict":"holds"}"#
        );
        let r = Report::new("L2".into(), "passes").field("converged", 3);
        assert_eq!(r.text(), "L2: passes (converged k=3)");
        let r = Report::new("L1".into(), "refutes").field("pair", "(a1,a7')");
        assert_eq!(r.text(), "L1: refutes pair=(a1,a7')");
        let r = Report::new("L1".into(), "mge").detail("kept", vec!["345", "9AB"]);
        assert_eq!(r.text(), "L1: mge\n  kept: 345 9AB");
        assert_eq!(
            r.json(),
            r#"{"kept":["345","9AB"],"lattice":"L1","verdict":"mge"}"#
        );
    }
}
