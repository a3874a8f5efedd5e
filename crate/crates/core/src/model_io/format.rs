//! The line-oriented `.stab` model format.
//!
//! ```text
//! # comment
//! qubits 2
//! term 1 ZZ
//! term 1/2 XX
//! ```
//!
//! Optional `format 1`, `name <text>` and `lattice <text>` lines carry
//! metadata. Couplings are decimals or `p/q` fractions, never floats.

use std::fmt::Write as _;

use crate::error::{Error, Result};
use crate::model::{format_rational, parse_rational, Rational, StabilizerModel};
use crate::pauli::PauliOperator;

pub const FORMAT_VERSION: u32 = 1;

/// Splits a line into whitespace-separated tokens with 1-based columns.
fn tokens(line: &str) -> Vec<(usize, &str)> {
    let mut out = Vec::new();
    let mut start = None;
    for (col, (i, c)) in line.char_indices().enumerate() {
        match (c.is_whitespace(), start) {
            (false, None) => start = Some((col + 1, i)),
            (true, Some((sc, si))) => {
                out.push((sc, &line[si..i]));
                start = None;
            }
            _ => {}
        }
    }
    if let Some((sc, si)) = start {
        out.push((sc, &line[si..]));
    }
    out
}

fn strip_comment(line: &str) -> &str {
    match line.find('#') {
        Some(i) => &line[..i],
        None => line,
    }
}

/// Remainder of the line after the keyword, trimmed.
fn rest_after<'a>(line: &'a str, keyword: &str) -> &'a str {
    let t = line.trim_start();
    t[keyword.len()..].trim()
}

pub fn parse_model(text: &str) -> Result<StabilizerModel> {
    let mut n: Option<usize> = None;
    let mut name = None;
    let mut lattice = None;
    let mut generators = Vec::new();
    let mut couplings: Vec<Rational> = Vec::new();

    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        let line = strip_comment(raw);
        let toks = tokens(line);
        let Some(&(kcol, keyword)) = toks.first() else {
            continue;
        };
        match keyword {
            "format" => {
                let (col, v) = toks
                    .get(1)
                    .copied()
                    .ok_or_else(|| Error::parse(line_no, kcol, "missing format version"))?;
                if v.parse::<u32>().ok() != Some(FORMAT_VERSION) {
                    return Err(Error::parse(
                        line_no,
                        col,
                        format!("unsupported format version '{v}'"),
                    ));
                }
            }
            "name" => name = Some(rest_after(line, "name").to_string()),
            "lattice" => lattice = Some(rest_after(line, "lattice").to_string()),
            "qubits" => {
                if n.is_some() {
                    return Err(Error::parse(line_no, kcol, "duplicate qubits line"));
                }
                let (col, v) = toks
                    .get(1)
                    .copied()
                    .ok_or_else(|| Error::parse(line_no, kcol, "missing qubit count"))?;
                let count: usize = v
                    .parse()
                    .map_err(|_| Error::parse(line_no, col, format!("invalid qubit count '{v}'")))?;
                if count == 0 {
                    return Err(Error::parse(line_no, col, "qubit count must be positive"));
                }
                if toks.len() > 2 {
                    return Err(Error::parse(line_no, toks[2].0, "unexpected token"));
                }
                n = Some(count);
            }
            "term" => {
                let n = n.ok_or_else(|| {
                    Error::parse(line_no, kcol, "term before the qubits line")
                })?;
                if toks.len() != 3 {
                    let col = toks.get(3).map_or(kcol, |t| t.0);
                    return Err(Error::parse(
                        line_no,
                        col,
                        "expected 'term <coupling> <pauli-string>'",
                    ));
                }
                let (jcol, jtext) = toks[1];
                let j = parse_rational(jtext).ok_or_else(|| {
                    Error::parse(line_no, jcol, format!("invalid coupling '{jtext}'"))
                })?;
                let (pcol, ptext) = toks[2];
                let p: PauliOperator = ptext.parse().map_err(|e| match e {
                    Error::Parse { column, message, .. } => {
                        Error::parse(line_no, pcol + column - 1, message)
                    }
                    other => other,
                })?;
                if p.n_qubits() != n {
                    return Err(Error::parse(
                        line_no,
                        pcol,
                        format!("Pauli string has length {}, expected {n}", p.n_qubits()),
                    ));
                }
                generators.push(p);
                couplings.push(j);
            }
            other => {
                return Err(Error::parse(
                    line_no,
                    kcol,
                    format!("unknown keyword '{other}'"),
                ))
            }
        }
    }

    let n = n.ok_or_else(|| Error::Validation("missing 'qubits' line".into()))?;
    let mut model = StabilizerModel::new(n, generators, couplings)?;
    if let Some(name) = name {
        model = model.with_name(name);
    }
    if let Some(lattice) = lattice {
        model = model.with_lattice(lattice);
    }
    Ok(model)
}

/// Canonical, byte-deterministic serialization.
pub fn serialize_model(model: &StabilizerModel) -> String {
    let mut out = String::new();
    writeln!(out, "format {FORMAT_VERSION}").unwrap();
    if let Some(name) = model.name() {
        writeln!(out, "name {name}").unwrap();
    }
    if let Some(lattice) = model.lattice() {
        writeln!(out, "lattice {lattice}").unwrap();
    }
    writeln!(out, "qubits {}", model.n_qubits()).unwrap();
    for (g, j) in model.generators().iter().zip(model.couplings()) {
        writeln!(out, "term {} {g}", format_rational(j)).unwrap();
    }
    out
}

/// Same generators, couplings and metadata.
pub fn same_model(a: &StabilizerModel, b: &StabilizerModel) -> bool {
    a.n_qubits() == b.n_qubits()
        && a.generators() == b.generators()
        && a.couplings() == b.couplings()
        && a.name() == b.name()
        && a.lattice() == b.lattice()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn single_qubit_document() {
        let m = parse_model("qubits 1\nterm 1 Z").unwrap();
        assert_eq!(m.n_qubits(), 1);
        assert_eq!(m.n_generators(), 1);
        assert_eq!(m.rank(), 1);
    }

    #[test]
    fn comments_and_fractions() {
        let text = "# two spins\nqubits 2   # count\n\nterm 3/4 ZZ\nterm 0.5 XX\n";
        let m = parse_model(text).unwrap();
        assert_eq!(m.couplings(), &[Rational::new(3, 4), Rational::new(1, 2)]);
    }

    #[test]
    fn round_trip_is_exact() {
        let text = "format 1\nname pair\nlattice chain 2\nqubits 2\nterm 3/4 ZZ\nterm 2 XX\n";
        let m = parse_model(text).unwrap();
        assert_eq!(serialize_model(&m), text);
        assert!(same_model(&parse_model(&serialize_model(&m)).unwrap(), &m));
    }

    #[test]
    fn bad_pauli_character_reports_position() {
        let err = parse_model("qubits 3\nterm 1 XQZ").unwrap_err();
        assert_eq!(
            err,
            Error::Parse {
                line: 2,
                column: 9,
                message: "invalid Pauli character 'Q'".into()
            }
        );
    }

    #[test]
    fn noncommuting_terms_fail_validation() {
        let err = parse_model("qubits 4\nterm 1 XXII\nterm 1 ZXII").unwrap_err();
        assert_eq!(
            err,
            Error::Validation("generators 1 and 2 do not commute".into())
        );
    }

    #[test]
    fn structural_errors() {
        assert!(matches!(
            parse_model("term 1 Z"),
            Err(Error::Parse { line: 1, .. })
        ));
        assert!(matches!(
            parse_model("qubits 2\nterm 1 Z"),
            Err(Error::Parse { line: 2, column: 8, .. })
        ));
        assert!(matches!(
            parse_model("qubits 1\nterm x Z"),
            Err(Error::Parse { line: 2, column: 6, .. })
        ));
        assert!(matches!(
            parse_model("qubits 1\nspin 1 Z"),
            Err(Error::Parse { line: 2, column: 1, .. })
        ));
        assert!(matches!(parse_model("qubits 1\n"), Err(Error::Validation(_))));
        assert!(matches!(parse_model("qubits 1\nterm -1 Z"), Err(Error::Validation(_))));
    }
}
