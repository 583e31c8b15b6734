//! Text format for generator matrices.
//!
//! ```text
//! # comment
//! form: descartes            (or `lorentz:<n>`)
//! involutive: yes            (optional; default yes for descartes, no otherwise)
//!
//! -1,0,0,0
//! 2,1,0,0
//! 2,0,1,0
//! 2,0,0,1
//!
//! ...            one block of rows per matrix, blocks separated by blank lines
//! ```
//!
//! Entries are integers or rationals `a/b`.

use std::path::Path;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;
use orbitcount_core::form::FormKind;
use orbitcount_core::orbit::{GeneratorSet, RationalMatrix};
use orbitcount_core::QuadraticForm;

use crate::error::{CliError, CliResult};

#[derive(Debug, Clone)]
pub struct GenFile {
    pub form: QuadraticForm,
    pub involutive: bool,
    pub matrices: Vec<RationalMatrix>,
}

fn parse_entry(tok: &str) -> Option<BigRational> {
    let tok = tok.trim();
    match tok.split_once('/') {
        Some((n, d)) => {
            let n: BigInt = n.trim().parse().ok()?;
            let d: BigInt = d.trim().parse().ok()?;
            (!d.is_zero()).then(|| BigRational::new(n, d))
        }
        None => tok.parse::<BigInt>().ok().map(BigRational::from_integer),
    }
}

fn parse_form(value: &str) -> CliResult<QuadraticForm> {
    let value = value.trim();
    if value.eq_ignore_ascii_case("descartes") {
        return Ok(QuadraticForm::descartes());
    }
    if let Some(n) = value.strip_prefix("lorentz:") {
        let n: usize = n
            .trim()
            .parse()
            .map_err(|_| CliError::invalid(format!("bad lorentz dimension `{n}`")))?;
        return Ok(QuadraticForm::lorentz(n)?);
    }
    Err(CliError::invalid(format!("unknown form `{value}`")))
}

impl GenFile {
    pub fn parse(text: &str) -> CliResult<GenFile> {
        let mut form = None;
        let mut involutive = None;
        let mut blocks: Vec<Vec<(usize, Vec<BigRational>)>> = vec![Vec::new()];
        for (lineno, raw) in text.lines().enumerate() {
            let lineno = lineno + 1;
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                if !blocks.last().expect("non-empty").is_empty() {
                    blocks.push(Vec::new());
                }
                continue;
            }
            if let Some((key, value)) = line.split_once(':') {
                if key.trim().chars().all(|c| c.is_ascii_alphabetic()) {
                    match key.trim() {
                        "form" => form = Some(parse_form(value)?),
                        "involutive" => {
                            involutive = Some(match value.trim() {
                                "yes" | "true" => true,
                                "no" | "false" => false,
                                v => {
                                    return Err(CliError::invalid(format!("line {lineno}: bad involutive flag `{v}`")))
                                }
                            })
                        }
                        k => return Err(CliError::invalid(format!("line {lineno}: unknown key `{k}`"))),
                    }
                    continue;
                }
            }
            let row = line
                .split(',')
                .map(parse_entry)
                .collect::<Option<Vec<_>>>()
                .ok_or_else(|| CliError::invalid(format!("line {lineno}: malformed matrix row `{line}`")))?;
            blocks.last_mut().expect("non-empty").push((lineno, row));
        }
        let form = form.ok_or_else(|| CliError::invalid("missing `form:` header"))?;
        let dim = form.dim();
        let mut matrices = Vec::new();
        for block in blocks.into_iter().filter(|b| !b.is_empty()) {
            let first = block[0].0;
            if block.len() != dim {
                return Err(CliError::invalid(format!(
                    "matrix starting at line {first} has {} rows, expected {dim}",
                    block.len()
                )));
            }
            if let Some((lineno, row)) = block.iter().find(|(_, r)| r.len() != dim) {
                return Err(CliError::invalid(format!(
                    "line {lineno}: matrix row has {} entries, expected {dim}",
                    row.len()
                )));
            }
            matrices.push(RationalMatrix::from_rows(block.into_iter().map(|(_, r)| r).collect())?);
        }
        if matrices.is_empty() {
            return Err(CliError::invalid("no generator matrices"));
        }
        let involutive = involutive.unwrap_or(form.kind() == FormKind::Descartes);
        Ok(GenFile {
            form,
            involutive,
            matrices,
        })
    }

    pub fn load(path: &Path) -> CliResult<GenFile> {
        let text = std::fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
        GenFile::parse(&text).map_err(|e| match e {
            CliError::Invalid(m) => CliError::Invalid(format!("{}: {m}", path.display())),
            e => e,
        })
    }

    /// Build the generating set; fails unless every matrix preserves the form exactly.
    pub fn generator_set(&self) -> CliResult<GeneratorSet> {
        Ok(GeneratorSet::from_exact(self.form.clone(), self.matrices.clone())?)
    }
}
