//! Spectral gaps from symmetrized generators.

use rayon::prelude::*;

use super::coset::CosetBuilder;
use super::dense::{generator_dense, symmetrized_dense, DenseGibbs};
use super::linalg::sym_eigen;
use super::Family;
use crate::bath::BathSpec;
use crate::error::{Error, Result};
use crate::model::StabilizerModel;

/// Eigenvalues at or below this fraction of the largest one count as zero.
pub const ZERO_MODE_RELATIVE: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GapMethod {
    Dense,
    Coset,
}

impl GapMethod {
    pub fn name(self) -> &'static str {
        match self {
            GapMethod::Dense => "dense",
            GapMethod::Coset => "coset",
        }
    }
}

impl std::str::FromStr for GapMethod {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "dense" => Ok(GapMethod::Dense),
            "coset" => Ok(GapMethod::Coset),
            _ => Err(Error::Argument(format!(
                "unknown method '{s}', expected dense or coset"
            ))),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct GapResult {
    pub gap: f64,
    pub zero_modes: usize,
    pub largest: f64,
    pub method: GapMethod,
    /// Coset index holding the gap eigenvalue (coset method only).
    pub witness_block: Option<usize>,
}

/// Gap of a spectrum of a PSD operator with a single expected zero mode.
pub fn spectral_gap(eigenvalues: &[f64], method: GapMethod) -> Result<GapResult> {
    let largest = eigenvalues.iter().copied().fold(0.0f64, |m, x| m.max(x.abs()));
    let threshold = ZERO_MODE_RELATIVE * largest;
    let zero_modes = eigenvalues.iter().filter(|&&x| x <= threshold).count();
    if zero_modes != 1 {
        return Err(Error::NonPrimitive { zero_modes });
    }
    let gap = eigenvalues
        .iter()
        .copied()
        .filter(|&x| x > threshold)
        .fold(f64::INFINITY, f64::min);
    Ok(GapResult {
        gap,
        zero_modes,
        largest,
        method,
        witness_block: None,
    })
}

pub fn dense_gap(model: &StabilizerModel, bath: &BathSpec, family: Family) -> Result<GapResult> {
    let l = generator_dense(model, bath, family)?;
    let gibbs = DenseGibbs::new(model, bath.beta())?;
    let (vals, _) = sym_eigen(&symmetrized_dense(&l, &gibbs));
    spectral_gap(&vals, GapMethod::Dense)
}

/// Smallest few eigenvalues and the largest of one block.
struct BlockSummary {
    low: Vec<f64>,
    high: f64,
}

const KEEP_LOW: usize = 4;

/// Gap over all coset blocks, diagonalized in parallel. The reduction runs
/// in coset order, so the result does not depend on thread scheduling.
pub fn coset_gap(model: &StabilizerModel, bath: &BathSpec, family: Family) -> Result<GapResult> {
    let builder = CosetBuilder::new(model, bath, family)?;
    let summaries: Vec<BlockSummary> = (0..builder.n_cosets())
        .into_par_iter()
        .map(|i| {
            let (vals, _) = sym_eigen(&builder.block(i).symmetrized());
            BlockSummary {
                low: vals.iter().take(KEEP_LOW).copied().collect(),
                high: vals.last().copied().unwrap_or(0.0),
            }
        })
        .collect();
    let largest = summaries
        .iter()
        .flat_map(|s| s.low.iter().chain(std::iter::once(&s.high)))
        .fold(0.0f64, |m, x| m.max(x.abs()));
    let threshold = ZERO_MODE_RELATIVE * largest;
    let mut zero_modes = 0;
    let mut gap = f64::INFINITY;
    let mut witness = None;
    for (i, s) in summaries.iter().enumerate() {
        for &x in &s.low {
            if x <= threshold {
                zero_modes += 1;
            } else if x < gap {
                gap = x;
                witness = Some(i);
            }
        }
    }
    if zero_modes != 1 {
        return Err(Error::NonPrimitive { zero_modes });
    }
    Ok(GapResult {
        gap,
        zero_modes,
        largest,
        method: GapMethod::Coset,
        witness_block: witness,
    })
}

pub fn compute_gap(
    model: &StabilizerModel,
    bath: &BathSpec,
    family: Family,
    method: GapMethod,
) -> Result<GapResult> {
    match method {
        GapMethod::Dense => dense_gap(model, bath, family),
        GapMethod::Coset => coset_gap(model, bath, family),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::Rational;
    use crate::model_io::build_ising;

    #[test]
    fn heatbath_gap_is_one_at_infinite_temperature() {
        for m in [build_ising(1, 2, false).unwrap(), build_ising(2, 2, true).unwrap()] {
            let bath = BathSpec::glauber(0.0).unwrap();
            for method in [GapMethod::Dense, GapMethod::Coset] {
                let g = compute_gap(&m, &bath, Family::HeatBath, method).unwrap();
                assert!((g.gap - 1.0).abs() < 1e-9, "{method:?}: {}", g.gap);
            }
        }
    }

    #[test]
    fn dense_and_coset_agree() {
        let m = build_ising(1, 3, false).unwrap();
        for beta in [0.3, 1.0] {
            let bath = BathSpec::metropolis(beta).unwrap();
            for family in Family::ALL {
                let a = dense_gap(&m, &bath, family).unwrap().gap;
                let b = coset_gap(&m, &bath, family).unwrap().gap;
                assert!((a - b).abs() < 1e-9 * a.max(1.0), "{family}: {a} vs {b}");
            }
        }
    }

    #[test]
    fn single_qubit_davies_closed_form() {
        let m = StabilizerModel::new(1, vec!["Z".parse().unwrap()], vec![Rational::from_integer(1)])
            .unwrap();
        let beta = 0.8;
        let bath = BathSpec::glauber(beta).unwrap();
        let (hp, hm, h0) = (bath.rate_f64(2.0), bath.rate_f64(-2.0), bath.rate_f64(0.0));
        let want = (2.0 * (hp + hm)).min(hp + hm + 2.0 * h0);
        let g = dense_gap(&m, &bath, Family::Davies).unwrap();
        assert!((g.gap - want).abs() < 1e-12);
    }

    #[test]
    fn degenerate_spectrum_is_rejected() {
        assert_eq!(
            spectral_gap(&[0.0, 0.0, 1.0], GapMethod::Dense),
            Err(Error::NonPrimitive { zero_modes: 2 })
        );
    }
}
