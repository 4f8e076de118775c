//! Single-line JSON summary records with a fixed key order.

use std::fmt;

#[derive(Debug, Default)]
pub struct Summary {
    fields: Vec<(&'static str, String)>,
}

impl Summary {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn float(&mut self, key: &'static str, v: f64) -> &mut Self {
        let text = if v.is_finite() { format!("{v:.16e}") } else { "null".into() };
        self.fields.push((key, text));
        self
    }

    pub fn int(&mut self, key: &'static str, v: usize) -> &mut Self {
        self.fields.push((key, v.to_string()));
        self
    }

    pub fn flag(&mut self, key: &'static str, v: bool) -> &mut Self {
        self.fields.push((key, v.to_string()));
        self
    }

    /// Plain identifiers only; no escaping is done.
    pub fn text(&mut self, key: &'static str, v: &str) -> &mut Self {
        self.fields.push((key, format!("\"{v}\"")));
        self
    }
}

impl fmt::Display for Summary {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        for (n, (k, v)) in self.fields.iter().enumerate() {
            if n > 0 {
                f.write_str(",")?;
            }
            write!(f, "\"{k}\":{v}")?;
        }
        f.write_str("}")
    }
}
