//! JSON instance files.

use std::collections::BTreeMap;
use std::path::Path;

use serde::Deserialize;
use serde_json::{json, Value};

use quasishift::{
    validate_latin_square, CheckResult, MarkovShift, QuasigroupShift, Section, SftPresentation,
    ShiftError,
};

use crate::CliError;

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct InstanceFile {
    pub alphabet: Vec<String>,
    pub op_table: Vec<Vec<String>>,
    #[serde(default)]
    pub transitions: Option<Vec<Vec<u8>>>,
    #[serde(default)]
    pub forbidden_words: Option<Vec<Vec<String>>>,
    #[serde(default)]
    pub base: Option<String>,
    /// Class (named by any member) to its chosen representative.
    #[serde(default)]
    pub section: Option<BTreeMap<String, String>>,
}

/// A loaded instance together with the checks run while building it.
pub struct Loaded {
    pub qs: QuasigroupShift,
    pub section: Section,
    /// Block length of the presentation when built from forbidden words.
    pub block_len: Option<usize>,
    pub checks: Vec<CheckResult>,
}

pub fn read(path: &Path) -> Result<InstanceFile, CliError> {
    let text = std::fs::read_to_string(path).map_err(|e| CliError::Input(format!("{}: {e}", path.display())))?;
    serde_json::from_str(&text).map_err(|e| CliError::Input(format!("{}: {e}", path.display())))
}

fn domain(checks: Vec<CheckResult>) -> CliError {
    CliError::Domain {
        report: json!({ "passed": false, "checks": crate::report::checks(&checks) }),
    }
}

impl InstanceFile {
    pub fn load(&self) -> Result<Loaded, CliError> {
        let n = self.alphabet.len();
        let mut checks = Vec::new();
        let op = match validate_latin_square(&self.alphabet, &self.op_table) {
            Ok(op) => op,
            Err(quasishift::QuasigroupError::Alphabet(e)) => return Err(CliError::Input(e.to_string())),
            Err(quasishift::QuasigroupError::Shape { expected }) => {
                return Err(CliError::Input(format!("op_table must be {expected}×{expected}")))
            }
            Err(e) => {
                checks.push(CheckResult::fail("op_table is a Latin square", e.to_string()));
                return Err(domain(checks));
            }
        };
        checks.push(CheckResult::pass("op_table is a Latin square"));
        let e_name = match &self.base {
            Some(name) => name.clone(),
            None => op.alphabet().name(0).to_string(),
        };
        let e = op
            .alphabet()
            .lookup(&e_name)
            .map_err(|err| CliError::Input(format!("base: {err}")))?;

        let (built, block_len) = match (&self.transitions, &self.forbidden_words) {
            (Some(matrix), None) => {
                if matrix.len() != n || matrix.iter().any(|row| row.len() != n) {
                    return Err(CliError::Input(format!("transitions must be {n}×{n}")));
                }
                if matrix.iter().flatten().any(|&x| x > 1) {
                    return Err(CliError::Input("transitions must contain only 0 and 1".into()));
                }
                let bools: Vec<Vec<bool>> = matrix.iter().map(|r| r.iter().map(|&x| x == 1).collect()).collect();
                // matrix rows follow the file's alphabet order
                let shift = MarkovShift::from_fn(op.alphabet().clone(), |a, b| {
                    let (i, j) = (self.position(op.alphabet().name(a)), self.position(op.alphabet().name(b)));
                    bools[i][j]
                });
                let shift = match shift {
                    Ok(s) => s,
                    Err(err) => {
                        checks.push(CheckResult::fail("transitions define an essential shift", err.to_string()));
                        return Err(domain(checks));
                    }
                };
                checks.push(CheckResult::pass("transitions define an essential shift"));
                (QuasigroupShift::build(shift, op, e), None)
            }
            (None, Some(words)) => {
                let sft = match SftPresentation::from_names(&self.alphabet, words) {
                    Ok(s) => s,
                    Err(err @ (ShiftError::Alphabet(_) | ShiftError::ZeroLength)) => {
                        return Err(CliError::Input(format!("forbidden_words: {err}")))
                    }
                    Err(err) => {
                        checks.push(CheckResult::fail("forbidden words define an essential shift", err.to_string()));
                        return Err(domain(checks));
                    }
                };
                checks.push(CheckResult::pass("forbidden words define an essential shift"));
                match QuasigroupShift::from_sft(&sft, &op, e) {
                    Ok((qs, hb)) => (Ok(qs), Some(hb.forward.width())),
                    Err(err) => (Err(err), None),
                }
            }
            _ => {
                return Err(CliError::Input(
                    "exactly one of transitions and forbidden_words is required".into(),
                ))
            }
        };
        let qs = match built {
            Ok(qs) => qs,
            Err(err) => {
                checks.push(CheckResult::fail("operation is compatible with the shift", err.to_string()));
                return Err(domain(checks));
            }
        };
        checks.push(CheckResult::pass("operation is compatible with the shift"));

        let section = match &self.section {
            None => Section::min(&qs),
            Some(map) if block_len.is_some() && !map.is_empty() => {
                return Err(CliError::Input("section is not supported with forbidden_words".into()))
            }
            Some(map) => {
                let mut overrides = BTreeMap::new();
                for (member, pick) in map {
                    let lookup = |name: &str| {
                        qs.alphabet()
                            .lookup(name)
                            .map_err(|err| CliError::Input(format!("section: {err}")))
                    };
                    overrides.insert(lookup(member)?, lookup(pick)?);
                }
                match Section::with_overrides(&qs, &overrides) {
                    Ok(s) => s,
                    Err(err) => {
                        checks.push(CheckResult::fail("section picks one member per class", err.to_string()));
                        return Err(domain(checks));
                    }
                }
            }
        };
        Ok(Loaded {
            qs,
            section,
            block_len,
            checks,
        })
    }

    fn position(&self, name: &str) -> usize {
        self.alphabet.iter().position(|s| s == name).expect("name comes from the alphabet")
    }
}

/// The instance reduced to its canonical form, for echoing in reports.
pub fn describe(qs: &QuasigroupShift) -> Value {
    let alphabet = qs.alphabet();
    json!({
        "alphabet": alphabet.names(),
        "base": alphabet.name(qs.e()),
        "op_table": qs.op().table_names(),
        "transitions": qs.shift().matrix_01(),
    })
}
