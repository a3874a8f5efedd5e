//! Site orderings: sequences of (site, axis) slots that define Pauli paths.
//!
//! Every site appears once with axis Z and once with axis X, so a path
//! has `l_* = 2N` steps. A σ^y factor is built by its Z slot and its X
//! slot, in whichever order they occur.

use std::fmt::{self, Write as _};

use crate::error::{Error, Result};
use crate::model::StabilizerModel;
use crate::model_io::builders::{build_toric, toric_h, toric_v};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Axis {
    Z,
    X,
}

impl Axis {
    pub fn as_char(self) -> char {
        match self {
            Axis::Z => 'Z',
            Axis::X => 'X',
        }
    }
}

impl fmt::Display for Axis {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.as_char())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SiteOrdering {
    n_qubits: usize,
    slots: Vec<(usize, Axis)>,
}

impl SiteOrdering {
    pub fn new(n_qubits: usize, slots: Vec<(usize, Axis)>) -> Result<Self> {
        let mut seen = vec![[false; 2]; n_qubits];
        for &(site, axis) in &slots {
            if site >= n_qubits {
                return Err(Error::Validation(format!(
                    "slot site {site} out of range for {n_qubits} qubits"
                )));
            }
            let flag = &mut seen[site][axis as usize];
            if *flag {
                return Err(Error::Validation(format!(
                    "duplicate slot ({site}, {axis})"
                )));
            }
            *flag = true;
        }
        for (site, s) in seen.iter().enumerate() {
            for (axis, present) in [(Axis::Z, s[0]), (Axis::X, s[1])] {
                if !present {
                    return Err(Error::Validation(format!(
                        "missing slot ({site}, {axis})"
                    )));
                }
            }
        }
        Ok(SiteOrdering { n_qubits, slots })
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn slots(&self) -> &[(usize, Axis)] {
        &self.slots
    }

    /// Path length `l_*`.
    pub fn l_star(&self) -> usize {
        self.slots.len()
    }

    /// All Z slots for sites `0..N`, then all X slots.
    pub fn lexicographic(n: usize) -> Self {
        let slots = (0..n)
            .map(|s| (s, Axis::Z))
            .chain((0..n).map(|s| (s, Axis::X)))
            .collect();
        SiteOrdering { n_qubits: n, slots }
    }
}

/// Vertical ("white") links column by column, top to bottom, then
/// horizontal ("black") links row by row, left to right.
fn white_columns_black_rows(l: usize) -> Vec<usize> {
    let mut out = Vec::with_capacity(2 * l * l);
    for c in 0..l {
        for r in 0..l {
            out.push(toric_v(l, r, c));
        }
    }
    for r in 0..l {
        for c in 0..l {
            out.push(toric_h(l, r, c));
        }
    }
    out
}

fn black_columns_white_rows(l: usize) -> Vec<usize> {
    let mut out = Vec::with_capacity(2 * l * l);
    for c in 0..l {
        for r in 0..l {
            out.push(toric_h(l, r, c));
        }
    }
    for r in 0..l {
        for c in 0..l {
            out.push(toric_v(l, r, c));
        }
    }
    out
}

/// Two-pass toric ordering. The Z pass walks white columns then black
/// rows, the X pass black columns then white rows. With `swapped` the
/// two site sequences are exchanged between the passes.
pub fn toric_ordering(l: usize, swapped: bool) -> SiteOrdering {
    let (zs, xs) = if swapped {
        (black_columns_white_rows(l), white_columns_black_rows(l))
    } else {
        (white_columns_black_rows(l), black_columns_white_rows(l))
    };
    let slots = zs
        .into_iter()
        .map(|s| (s, Axis::Z))
        .chain(xs.into_iter().map(|s| (s, Axis::X)))
        .collect();
    SiteOrdering {
        n_qubits: 2 * l * l,
        slots,
    }
}

/// Side length of a toric-code model, from its lattice hint or by
/// matching the generators against the builder.
pub fn toric_size(model: &StabilizerModel) -> Option<usize> {
    if let Some(hint) = model.lattice() {
        let mut it = hint.split_whitespace();
        if it.next() == Some("toric") {
            if let Some(l) = it.next().and_then(|v| v.parse::<usize>().ok()) {
                if 2 * l * l == model.n_qubits() {
                    return Some(l);
                }
            }
        }
    }
    let l = ((model.n_qubits() / 2) as f64).sqrt().round() as usize;
    if l >= 2 && 2 * l * l == model.n_qubits() {
        let reference = build_toric(l).ok()?;
        if reference.generators() == model.generators() {
            return Some(l);
        }
    }
    None
}

/// Named orderings: `toric-zx`, `toric-xz` (passes swapped) and
/// `lex-zx` (alias `lexicographic-zx`).
pub fn builtin_ordering(name: &str, model: &StabilizerModel) -> Result<SiteOrdering> {
    match name {
        "lex-zx" | "lexicographic-zx" => Ok(SiteOrdering::lexicographic(model.n_qubits())),
        "toric-zx" | "toric-xz" => {
            let l = toric_size(model).ok_or_else(|| {
                Error::Argument(format!("ordering '{name}' needs a toric-code model"))
            })?;
            Ok(toric_ordering(l, name == "toric-xz"))
        }
        other => Err(Error::Argument(format!(
            "unknown builtin ordering '{other}' (expected toric-zx, toric-xz or lex-zx)"
        ))),
    }
}

/// Parses `slot <site> <Z|X>` lines; `#` starts a comment.
pub fn parse_ordering(text: &str, model: &StabilizerModel) -> Result<SiteOrdering> {
    let mut slots = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        let line = raw.split('#').next().unwrap_or("");
        let toks: Vec<&str> = line.split_whitespace().collect();
        if toks.is_empty() {
            continue;
        }
        let col = |t: &str| line.find(t).map_or(1, |i| line[..i].chars().count() + 1);
        if toks[0] != "slot" {
            return Err(Error::parse(line_no, col(toks[0]), format!("unknown keyword '{}'", toks[0])));
        }
        if toks.len() != 3 {
            return Err(Error::parse(line_no, 1, "expected 'slot <site> <Z|X>'"));
        }
        let site: usize = toks[1]
            .parse()
            .map_err(|_| Error::parse(line_no, col(toks[1]), format!("invalid site '{}'", toks[1])))?;
        let axis = match toks[2] {
            "Z" => Axis::Z,
            "X" => Axis::X,
            other => {
                return Err(Error::parse(
                    line_no,
                    line.rfind(other).map_or(1, |i| line[..i].chars().count() + 1),
                    format!("axis must be Z or X, got '{other}'"),
                ))
            }
        };
        slots.push((site, axis));
    }
    SiteOrdering::new(model.n_qubits(), slots)
}

pub fn serialize_ordering(ordering: &SiteOrdering) -> String {
    let mut out = String::new();
    for &(site, axis) in ordering.slots() {
        writeln!(out, "slot {site} {axis}").unwrap();
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model_io::builders::build_ising;

    #[test]
    fn toric_orderings_cover_every_slot() {
        for l in 2..=4 {
            let m = build_toric(l).unwrap();
            for name in ["toric-zx", "toric-xz", "lex-zx"] {
                let o = builtin_ordering(name, &m).unwrap();
                assert_eq!(o.l_star(), 2 * m.n_qubits());
                SiteOrdering::new(m.n_qubits(), o.slots().to_vec()).unwrap();
            }
        }
    }

    #[test]
    fn toric_zx_traversal_l2() {
        // Z pass: vertical links by column, then horizontal links by row.
        let o = toric_ordering(2, false);
        let z: Vec<usize> = o.slots()[..8].iter().map(|s| s.0).collect();
        let x: Vec<usize> = o.slots()[8..].iter().map(|s| s.0).collect();
        assert_eq!(z, vec![4, 6, 5, 7, 0, 1, 2, 3]);
        assert_eq!(x, vec![0, 2, 1, 3, 4, 5, 6, 7]);
        assert!(o.slots()[..8].iter().all(|s| s.1 == Axis::Z));
    }

    #[test]
    fn toric_orderings_need_a_toric_model() {
        let m = build_ising(1, 3, false).unwrap();
        assert!(matches!(builtin_ordering("toric-zx", &m), Err(Error::Argument(_))));
        // Without the lattice hint the generators still identify the code.
        let bare = StabilizerModel::new(
            8,
            build_toric(2).unwrap().generators().to_vec(),
            build_toric(2).unwrap().couplings().to_vec(),
        )
        .unwrap();
        assert_eq!(toric_size(&bare), Some(2));
    }

    #[test]
    fn ordering_file_round_trip() {
        let m = build_toric(2).unwrap();
        let mut slots = toric_ordering(2, false).slots().to_vec();
        slots.reverse();
        let o = SiteOrdering::new(8, slots).unwrap();
        let text = serialize_ordering(&o);
        assert_eq!(parse_ordering(&text, &m).unwrap(), o);
    }

    #[test]
    fn duplicate_and_missing_slots() {
        let err = SiteOrdering::new(1, vec![(0, Axis::Z), (0, Axis::Z)]).unwrap_err();
        assert!(err.to_string().contains("duplicate"));
        let err = SiteOrdering::new(1, vec![(0, Axis::Z)]).unwrap_err();
        assert!(err.to_string().contains("missing"));
        let m = build_ising(1, 2, false).unwrap();
        assert!(matches!(
            parse_ordering("slot 0 Y", &m),
            Err(Error::Parse { line: 1, column: 8, .. })
        ));
    }
}
