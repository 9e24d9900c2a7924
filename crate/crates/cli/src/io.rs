//! File formats: source and mechanism JSON in, JSON and CSV out.

use std::fs;
use std::io::Write;
use std::path::Path;

use serde::Deserialize;
use serde_json::{json, Value};

use tvpriv::probability::{validate_pmf, Channel, JointSource, Mechanism, ULabels};

use crate::CliError;

/// A joint source as stored on disk.
#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SourceFile {
    #[serde(default)]
    pub name: Option<String>,
    pub p_y: Vec<f64>,
    #[serde(rename = "P_x_given_y")]
    pub p_x_given_y: Vec<Vec<f64>>,
    #[serde(default)]
    pub y_values: Option<Vec<f64>>,
}

impl SourceFile {
    pub fn into_source(self) -> Result<JointSource, CliError> {
        let field = |name: &'static str| {
            move |e: tvpriv::Error| CliError::Validation(format!("{name}: {e}"))
        };
        let p_y = validate_pmf(&self.p_y).map_err(field("p_y"))?;
        let channel = Channel::from_rows(&self.p_x_given_y).map_err(field("P_x_given_y"))?;
        JointSource::new(p_y, channel, self.y_values).map_err(|e| {
            let name = match e {
                tvpriv::Error::NonPositivePrior { .. } => "p_y",
                tvpriv::Error::InvalidYValues => "y_values",
                tvpriv::Error::DimensionMismatch { .. }
                    if self.p_x_given_y[0].len() == self.p_y.len() =>
                {
                    "y_values"
                }
                _ => "P_x_given_y",
            };
            CliError::Validation(format!("{name}: {e}"))
        })
    }
}

fn read(path: &Path) -> Result<String, CliError> {
    fs::read_to_string(path)
        .map_err(|e| CliError::Validation(format!("cannot read {}: {e}", path.display())))
}

fn parse<T: for<'de> Deserialize<'de>>(path: &Path, text: &str) -> Result<T, CliError> {
    serde_json::from_str(text).map_err(|e| CliError::Validation(format!("{}: {e}", path.display())))
}

pub fn load_source(path: &Path) -> Result<(Option<String>, JointSource), CliError> {
    let file: SourceFile = parse(path, &read(path)?)?;
    let name = file.name.clone();
    Ok((name, file.into_source()?))
}

#[derive(Debug, Deserialize)]
#[serde(rename_all = "lowercase")]
enum LabelKind {
    Opaque,
    Symbols,
    Estimates,
}

/// `p_{U|Y}` with one row per released symbol.
#[derive(Debug, Deserialize)]
struct MechanismFile {
    p_u_given_y: Vec<Vec<f64>>,
    #[serde(default)]
    u_labels: Option<Vec<f64>>,
    #[serde(default)]
    label_kind: Option<LabelKind>,
}

#[derive(Debug, Deserialize)]
struct SolveFile {
    mechanism: MechanismFile,
}

/// Reads a bare mechanism or the full output of `solve`.
pub fn load_mechanism(path: &Path) -> Result<Mechanism, CliError> {
    let text = read(path)?;
    let value: Value = parse(path, &text)?;
    let file: MechanismFile = if value.get("mechanism").is_some() {
        parse::<SolveFile>(path, &text)?.mechanism
    } else {
        parse(path, &text)?
    };
    let rows = file.p_u_given_y;
    let u = rows.len();
    let y = rows.first().map_or(0, Vec::len);
    // rows are released symbols, columns are symbols of Y
    let channel = Channel::from_rows(&rows)
        .map_err(|e| CliError::Validation(format!("mechanism.p_u_given_y ({u} x {y}): {e}")))?;
    let labels = match (file.label_kind, file.u_labels) {
        (None | Some(LabelKind::Opaque), _) | (_, None) => ULabels::Opaque,
        (Some(LabelKind::Estimates), Some(v)) => ULabels::Estimates(v),
        (Some(LabelKind::Symbols), Some(v)) => {
            let symbols = v
                .iter()
                .map(|&s| {
                    (s >= 0.0 && s.fract() == 0.0)
                        .then_some(s as usize)
                        .ok_or_else(|| {
                            CliError::Validation(format!(
                                "mechanism.u_labels: {s} is not a symbol index"
                            ))
                        })
                })
                .collect::<Result<Vec<_>, _>>()?;
            ULabels::Symbols(symbols)
        }
    };
    Mechanism::new(channel, labels)
        .map_err(|e| CliError::Validation(format!("mechanism.u_labels: {e}")))
}

/// Rounds to 12 significant digits.
pub fn round12(v: f64) -> f64 {
    if v == 0.0 || !v.is_finite() {
        return if v == 0.0 { 0.0 } else { v };
    }
    format!("{v:.11e}").parse().expect("formatted float parses")
}

pub fn num(v: f64) -> Value {
    json!(round12(v))
}

pub fn nums(v: &[f64]) -> Value {
    Value::Array(v.iter().map(|&x| num(x)).collect())
}

pub fn rows(m: &[Vec<f64>]) -> Value {
    Value::Array(m.iter().map(|r| nums(r)).collect())
}

/// Writes `text` to `out`, or to stdout when no path is given.
pub fn emit(out: Option<&Path>, text: &str) -> Result<(), CliError> {
    match out {
        Some(path) => fs::write(path, text)
            .map_err(|e| CliError::Validation(format!("cannot write {}: {e}", path.display()))),
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout
                .write_all(text.as_bytes())
                .map_err(|e| CliError::Internal(format!("stdout: {e}")))
        }
    }
}

pub fn json_text(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("values serialize");
    s.push('\n');
    s
}
