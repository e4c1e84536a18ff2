use dqt_core::Error;
use serde_json::{json, Map, Value};

pub const SCHEMA_VERSION: u64 = 1;

pub const EXIT_OK: u8 = 0;
pub const EXIT_FAILURE: u8 = 1;
pub const EXIT_USAGE: u8 = 2;
pub const EXIT_RANGE: u8 = 3;
pub const EXIT_BUDGET: u8 = 4;

/// Output of one subcommand, in both formats.
#[derive(Debug)]
pub struct Report {
    pub command: String,
    pub text: String,
    pub payload: Value,
    pub exit_code: u8,
}

impl Report {
    pub fn new(command: &str, text: String, payload: Value) -> Self {
        Report {
            command: command.to_string(),
            text,
            payload,
            exit_code: EXIT_OK,
        }
    }

    pub fn with_exit(mut self, code: u8) -> Self {
        self.exit_code = code;
        self
    }

    /// JSON keys come out sorted because `serde_json::Map` is a `BTreeMap`.
    pub fn render(&self, json: bool) -> String {
        if !json {
            return self.text.clone();
        }
        let mut root = Map::new();
        root.insert("schema".into(), json!(SCHEMA_VERSION));
        root.insert("command".into(), json!(self.command));
        root.insert("result".into(), self.payload.clone());
        let mut out = serde_json::to_string_pretty(&Value::Object(root)).expect("JSON value");
        out.push('\n');
        out
    }
}

#[derive(Debug)]
pub struct CliError {
    pub code: u8,
    pub message: String,
}

impl CliError {
    pub fn usage(message: impl Into<String>) -> Self {
        CliError {
            code: EXIT_USAGE,
            message: message.into(),
        }
    }

    pub fn budget(message: impl Into<String>) -> Self {
        CliError {
            code: EXIT_BUDGET,
            message: message.into(),
        }
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::RangeOverflow { .. } => EXIT_RANGE,
            Error::InvalidArgument(_)
            | Error::Precondition(_)
            | Error::DimensionMismatch { .. }
            | Error::Capacity(_)
            | Error::NonPhysicalState => EXIT_USAGE,
            _ => EXIT_FAILURE,
        };
        let message = match e {
            Error::RangeOverflow {
                needed_k,
                available_k,
            } => format!(
                "field too small: needs an ordered range of k >= {needed_k}, this field has k = {available_k}"
            ),
            other => other.to_string(),
        };
        CliError { code, message }
    }
}

/// Right-aligned fixed-width table.
pub fn table(headers: &[&str], rows: &[Vec<String>]) -> String {
    let mut widths: Vec<usize> = headers.iter().map(|h| h.len()).collect();
    for row in rows {
        for (w, cell) in widths.iter_mut().zip(row) {
            *w = (*w).max(cell.len());
        }
    }
    let line = |cells: Vec<&str>| {
        let parts: Vec<String> = cells
            .iter()
            .zip(&widths)
            .map(|(c, &w)| format!("{c:>w$}"))
            .collect();
        parts.join("  ").trim_end().to_string() + "\n"
    };
    let mut out = line(headers.to_vec());
    let rule: Vec<String> = widths.iter().map(|&w| "-".repeat(w)).collect();
    out += &line(rule.iter().map(String::as_str).collect());
    for row in rows {
        out += &line(row.iter().map(String::as_str).collect());
    }
    out
}

/// `a+bi` for a Gaussian integer, with unit coefficients and zero parts elided.
pub fn gaussian(a: i64, b: i64) -> String {
    let imag = |b: i64| match b {
        1 => "i".to_string(),
        -1 => "-i".to_string(),
        _ => format!("{b}i"),
    };
    match (a, b) {
        (a, 0) => a.to_string(),
        (0, b) => imag(b),
        (a, b) if b > 0 => format!("{a}+{}", imag(b)),
        (a, b) => format!("{a}{}", imag(b)),
    }
}

/// `|y,x1..xn>` label of basis index `i` in a `1 + n` qubit register.
pub fn ket(i: usize, n: usize) -> String {
    let y = i >> n;
    let x = i & ((1 << n) - 1);
    format!("|{y},{}>", dqt_core::modal::format_bits(x, n))
}
