//! Structured-text and JSON reports.

use serde_json::Value;

/// One command's output in both renderings.
#[derive(Clone, Debug, PartialEq)]
pub struct Report {
    pub text: String,
    pub json: Value,
}

/// Key/value lines and aligned tables.
#[derive(Default)]
pub struct TextDoc {
    out: String,
}

impl TextDoc {
    pub fn kv(&mut self, key: &str, value: impl AsRef<str>) -> &mut Self {
        self.out.push_str(key);
        self.out.push_str(": ");
        self.out.push_str(value.as_ref());
        self.out.push('\n');
        self
    }

    pub fn table(&mut self, title: &str, headers: &[&str], rows: &[Vec<String>]) -> &mut Self {
        self.out.push('\n');
        self.out.push_str(title);
        self.out.push_str(":\n");
        let mut width: Vec<usize> = headers.iter().map(|h| h.chars().count()).collect();
        for r in rows {
            for (w, c) in width.iter_mut().zip(r) {
                *w = (*w).max(c.chars().count());
            }
        }
        let line = |cells: Vec<&str>| {
            let mut s = String::from(" ");
            for (i, (c, w)) in cells.iter().zip(&width).enumerate() {
                s.push(' ');
                s.push_str(c);
                if i + 1 < cells.len() {
                    s.push_str(&" ".repeat(w - c.chars().count() + 1));
                }
            }
            let mut s = s.trim_end().to_string();
            s.push('\n');
            s
        };
        self.out.push_str(&line(headers.to_vec()));
        for r in rows {
            self.out.push_str(&line(r.iter().map(String::as_str).collect()));
        }
        self.out.push('\n');
        self
    }

    pub fn finish(self) -> String {
        let mut s = self.out;
        while s.ends_with("\n\n") {
            s.pop();
        }
        s
    }
}

pub fn yes_no(b: bool) -> &'static str {
    if b {
        "yes"
    } else {
        "no"
    }
}
