//! Benchmark lattices: the toric code and nearest-neighbour Ising models.

use crate::error::{Error, Result};
use crate::model::{Rational, StabilizerModel};
use crate::pauli::{PauliKind, PauliOperator};

/// Horizontal link to the right of vertex (r, c).
#[inline]
pub fn toric_h(l: usize, r: usize, c: usize) -> usize {
    (r % l) * l + (c % l)
}

/// Vertical link below vertex (r, c).
#[inline]
pub fn toric_v(l: usize, r: usize, c: usize) -> usize {
    l * l + (r % l) * l + (c % l)
}

/// Toric code on an L×L torus: qubits on the 2L² links, L² vertex
/// terms (Z⊗4) followed by L² plaquette terms (X⊗4), all with J = 1.
pub fn build_toric(l: usize) -> Result<StabilizerModel> {
    if l < 2 {
        return Err(Error::Argument(format!("toric code needs L >= 2, got {l}")));
    }
    let n = 2 * l * l;
    let mut gens = Vec::with_capacity(n);
    for r in 0..l {
        for c in 0..l {
            let mut p = PauliOperator::identity(n);
            for q in [
                toric_h(l, r, c),
                toric_h(l, r, c + l - 1),
                toric_v(l, r, c),
                toric_v(l, r + l - 1, c),
            ] {
                p.set(q, PauliKind::Z);
            }
            gens.push(p);
        }
    }
    for r in 0..l {
        for c in 0..l {
            let mut p = PauliOperator::identity(n);
            for q in [
                toric_h(l, r, c),
                toric_h(l, r + 1, c),
                toric_v(l, r, c),
                toric_v(l, r, c + 1),
            ] {
                p.set(q, PauliKind::X);
            }
            gens.push(p);
        }
    }
    let m = gens.len();
    Ok(StabilizerModel::new(n, gens, vec![Rational::from_integer(1); m])?
        .with_name(format!("toric-L{l}"))
        .with_lattice(format!("toric {l}")))
}

/// `σ^z_i σ^z_j` on nearest-neighbour bonds of a chain (`dims = 1`) or
/// square lattice (`dims = 2`), J = 1. On a periodic 2×2 lattice the
/// right/down bonds coincide pairwise and are kept as separate terms.
pub fn build_ising(dims: usize, l: usize, periodic: bool) -> Result<StabilizerModel> {
    if l < 2 {
        return Err(Error::Argument(format!("Ising model needs L >= 2, got {l}")));
    }
    let mut bonds = Vec::new();
    match dims {
        1 => {
            for i in 0..l - 1 {
                bonds.push((i, i + 1));
            }
            if periodic && l > 2 {
                bonds.push((l - 1, 0));
            } else if periodic {
                bonds.push((1, 0));
            }
        }
        2 => {
            let site = |r: usize, c: usize| r * l + c;
            for r in 0..l {
                for c in 0..l {
                    if c + 1 < l {
                        bonds.push((site(r, c), site(r, c + 1)));
                    } else if periodic {
                        bonds.push((site(r, c), site(r, 0)));
                    }
                    if r + 1 < l {
                        bonds.push((site(r, c), site(r + 1, c)));
                    } else if periodic {
                        bonds.push((site(r, c), site(0, c)));
                    }
                }
            }
        }
        d => {
            return Err(Error::Argument(format!(
                "Ising builder supports 1 or 2 dimensions, got {d}"
            )))
        }
    }
    let n = if dims == 1 { l } else { l * l };
    let gens: Vec<PauliOperator> = bonds
        .iter()
        .map(|&(a, b)| {
            let mut p = PauliOperator::identity(n);
            p.set(a, PauliKind::Z);
            p.set(b, PauliKind::Z);
            p
        })
        .collect();
    let m = gens.len();
    let boundary = if periodic { "periodic" } else { "open" };
    Ok(StabilizerModel::new(n, gens, vec![Rational::from_integer(1); m])?
        .with_name(format!("ising-{dims}d-L{l}-{boundary}"))
        .with_lattice(format!("ising {dims} {l} {boundary}")))
}
