use std::fmt::Display;

/// Ordered `key: value` lines plus free-form blocks.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Report {
    lines: Vec<String>,
}

impl Report {
    pub fn new(echo: &str) -> Self {
        let mut r = Self::default();
        r.field("command", echo);
        r
    }

    pub fn field(&mut self, key: &str, value: impl Display) -> &mut Self {
        self.lines.push(format!("{key}: {value}"));
        self
    }

    pub fn line(&mut self, text: impl Into<String>) -> &mut Self {
        self.lines.push(text.into());
        self
    }

    /// Indented multi-line block under a heading.
    pub fn block(&mut self, heading: &str, body: &str) -> &mut Self {
        self.lines.push(format!("{heading}:"));
        self.lines.extend(body.lines().map(|l| format!("  {l}")));
        self
    }

    pub fn lines(&self) -> &[String] {
        &self.lines
    }

    pub fn render(&self) -> String {
        let mut s = self.lines.join("\n");
        s.push('\n');
        s
    }
}

/// Space-separated shortest round-trip decimals.
pub fn fmt_vec(x: &[f64]) -> String {
    x.iter()
        .map(|v| format!("{v}"))
        .collect::<Vec<_>>()
        .join(" ")
}

/// Space-separated 1-based indices, or `-` when empty.
pub fn fmt_indices(x: &[usize]) -> String {
    if x.is_empty() {
        return "-".into();
    }
    x.iter()
        .map(|i| (i + 1).to_string())
        .collect::<Vec<_>>()
        .join(" ")
}
