use serde::Serialize;
use sha2::{Digest, Sha256};

/// One line of `--json` output. Every command emits records of this shape.
#[derive(Debug, Serialize)]
struct Record<'a> {
    command: &'a str,
    input: &'a str,
    digest: &'a str,
    kind: &'a str,
    outcome: &'a str,
    value: &'a str,
    count: u64,
}

/// Buffers a command's output so it is emitted in one piece, either as text
/// lines or as flat JSON records.
pub struct Output {
    json: bool,
    command: &'static str,
    input: String,
    digest: String,
    lines: Vec<String>,
}

pub fn sha256_hex(bytes: &[u8]) -> String {
    hex::encode(Sha256::digest(bytes))
}

impl Output {
    pub fn new(
        json: bool,
        command: &'static str,
        input: impl Into<String>,
        digest: String,
    ) -> Self {
        Self {
            json,
            command,
            input: input.into(),
            digest,
            lines: Vec::new(),
        }
    }

    /// Header naming the input and its digest; text mode only.
    pub fn header(&mut self) {
        if !self.json {
            self.lines.push(format!(
                "% {} {} sha256 {}",
                self.command, self.input, self.digest
            ));
        }
    }

    /// Text-only line, dropped in JSON mode.
    pub fn text(&mut self, line: impl Into<String>) {
        if !self.json {
            self.lines.push(line.into());
        }
    }

    /// A record; in text mode `line` is printed instead.
    pub fn emit(
        &mut self,
        kind: &str,
        outcome: &str,
        value: &str,
        count: u64,
        line: impl Into<String>,
    ) {
        if self.json {
            self.record(kind, outcome, value, count);
        } else {
            self.lines.push(line.into());
        }
    }

    /// JSON-only record, dropped in text mode.
    pub fn record(&mut self, kind: &str, outcome: &str, value: &str, count: u64) {
        if self.json {
            let record = Record {
                command: self.command,
                input: &self.input,
                digest: &self.digest,
                kind,
                outcome,
                value,
                count,
            };
            self.lines
                .push(serde_json::to_string(&record).expect("records serialize"));
        }
    }

    pub fn render(&self) -> String {
        let mut out = String::new();
        for line in &self.lines {
            out.push_str(line);
            out.push('\n');
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn json_records_are_flat_lines() {
        let mut out = Output::new(true, "models", "p.lp", "ab".into());
        out.header();
        out.text("ignored");
        out.emit("model", "ok", "{p}", 1, "{p}");
        assert_eq!(
            out.render(),
            "{\"command\":\"models\",\"input\":\"p.lp\",\"digest\":\"ab\",\"kind\":\"model\",\"outcome\":\"ok\",\"value\":\"{p}\",\"count\":1}\n"
        );
    }

    #[test]
    fn text_mode() {
        let mut out = Output::new(false, "verify", "p.lp", "ab".into());
        out.header();
        out.emit("check", "pass", "x", 1, "line");
        assert_eq!(out.render(), "% verify p.lp sha256 ab\nline\n");
    }

    #[test]
    fn digest_of_empty_input() {
        assert_eq!(
            sha256_hex(b""),
            "e3b0c44298fc1c149afbf4c8996fb92427ae41e4649b934ca495991b7852b855"
        );
    }
}
