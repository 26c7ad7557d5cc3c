use std::io::{self, Write};

use clap::ValueEnum;
use mstd::{IntegerSet, Scd};
use serde_json::{json, Value};

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, ValueEnum)]
pub enum Format {
    /// `(a|d1,...,dn)`
    #[default]
    Scd,
    /// `{a,b,...}`
    Set,
    /// one JSON object per line
    Jsonl,
}

pub struct Out {
    pub format: Format,
    sink: io::BufWriter<io::Stdout>,
}

impl Out {
    pub fn new(format: Format) -> Self {
        Self {
            format,
            sink: io::BufWriter::new(io::stdout()),
        }
    }

    pub fn line(&mut self, text: impl AsRef<str>) -> io::Result<()> {
        writeln!(self.sink, "{}", text.as_ref())
    }

    /// Text form in scd/set mode, the JSON record in jsonl mode.
    pub fn record(&mut self, text: impl AsRef<str>, record: Value) -> io::Result<()> {
        match self.format {
            Format::Jsonl => writeln!(self.sink, "{record}"),
            _ => self.line(text),
        }
    }

    pub fn set(&mut self, a: &IntegerSet) -> io::Result<()> {
        match self.format {
            Format::Scd => self.line(scd_text(a)),
            Format::Set => self.line(a.to_string()),
            Format::Jsonl => {
                let r = set_record(a);
                writeln!(self.sink, "{r}")
            }
        }
    }

    pub fn flush(&mut self) -> io::Result<()> {
        self.sink.flush()
    }
}

pub fn scd_text(a: &IntegerSet) -> String {
    Scd::from_set(a)
        .map(|s| s.to_string())
        .unwrap_or_else(|_| "{}".into())
}

pub fn set_record(a: &IntegerSet) -> Value {
    json!({
        "kind": "set",
        "scd": scd_text(a),
        "elements": a.elements(),
        "cardinality": a.len(),
        "diameter": a.diameter(),
    })
}
