//! Line-delimited `key=value` reports.

use std::fmt::{self, Display};
use std::time::Duration;

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Report {
    pub command: String,
    fields: Vec<(String, String)>,
    /// Attached exports, printed after the fields between `begin`/`end`
    /// markers.
    dumps: Vec<(String, String)>,
    elapsed: Option<Duration>,
}

impl Report {
    pub fn new(command: &str) -> Self {
        Self {
            command: command.to_string(),
            ..Self::default()
        }
    }

    pub fn field(&mut self, key: &str, value: impl Display) -> &mut Self {
        self.fields.push((key.to_string(), value.to_string()));
        self
    }

    pub fn get(&self, key: &str) -> Option<&str> {
        self.fields.iter().find(|(k, _)| k == key).map(|(_, v)| v.as_str())
    }

    pub fn dump(&mut self, name: &str, text: String) -> &mut Self {
        self.dumps.push((name.to_string(), text));
        self
    }

    pub fn set_elapsed(&mut self, d: Duration) {
        self.elapsed = Some(d);
    }
}

impl Display for Report {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "command={}", self.command)?;
        for (k, v) in &self.fields {
            writeln!(f, "{k}={v}")?;
        }
        if let Some(d) = self.elapsed {
            writeln!(f, "elapsed_ms={}", d.as_millis())?;
        }
        for (name, text) in &self.dumps {
            writeln!(f, "begin {name}")?;
            f.write_str(text)?;
            if !text.ends_with('\n') {
                writeln!(f)?;
            }
            writeln!(f, "end {name}")?;
        }
        Ok(())
    }
}
