use num_traits::{Signed, ToPrimitive};

use crate::error::Result;
use crate::model::{Rational, StabilizerModel, DEFAULT_SYNDROME_RANK_CAP};

/// Gibbs state `ρ = Σ_a ρ_a P(a)` over realized syndromes, indexed by
/// their coordinates in the model's syndrome basis. Weights are kept in
/// log form so large β does not underflow.
#[derive(Debug, Clone)]
pub struct GibbsData {
    beta: f64,
    n_qubits: usize,
    rank: usize,
    /// `ε(a) · scale`
    energies: Vec<i128>,
    log_weights: Vec<f64>,
    log_z: f64,
    norm_h: Rational,
}

impl GibbsData {
    pub fn new(model: &StabilizerModel, beta: f64) -> Result<Self> {
        let syndromes = model.realized_syndromes(DEFAULT_SYNDROME_RANK_CAP)?;
        let energies: Vec<i128> = syndromes
            .iter()
            .map(|s| model.energy_units(s.bits()))
            .collect();
        let e: Vec<f64> = energies.iter().map(|&u| model.units_to_f64(u)).collect();
        let shift = e.iter().copied().fold(f64::INFINITY, f64::min);
        let sum: f64 = e.iter().map(|&x| (-beta * (x - shift)).exp()).sum();
        let rank = model.rank();
        let degeneracy = (model.n_qubits() - rank) as f64 * std::f64::consts::LN_2;
        let log_z = -beta * shift + sum.ln() + degeneracy;
        let log_weights = e.iter().map(|&x| -beta * x - log_z).collect();
        let norm_h = energies
            .iter()
            .map(|&u| model.units_to_rational(u).abs())
            .max()
            .unwrap_or_default();
        Ok(GibbsData {
            beta,
            n_qubits: model.n_qubits(),
            rank,
            energies,
            log_weights,
            log_z,
            norm_h,
        })
    }

    pub fn beta(&self) -> f64 {
        self.beta
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn len(&self) -> usize {
        self.energies.len()
    }

    pub fn is_empty(&self) -> bool {
        self.energies.is_empty()
    }

    pub fn energy_units(&self, c: usize) -> i128 {
        self.energies[c]
    }

    /// `ln ρ_a` for the syndrome with coordinates `c`.
    pub fn log_weight(&self, c: usize) -> f64 {
        self.log_weights[c]
    }

    pub fn weight(&self, c: usize) -> f64 {
        self.log_weights[c].exp()
    }

    /// `ln Z` with `Z = tr e^{-βH}`.
    pub fn log_partition(&self) -> f64 {
        self.log_z
    }

    /// Rank of each eigenprojector, `2^{N - rank}`.
    pub fn degeneracy(&self) -> f64 {
        2f64.powi((self.n_qubits - self.rank) as i32)
    }

    /// `‖H‖ = max_a |ε(a)|` over realized syndromes.
    pub fn norm_h(&self) -> Rational {
        self.norm_h
    }

    /// `ln ‖ρ^{-1}‖ = -ln min_a ρ_a`.
    pub fn log_inverse_norm(&self) -> f64 {
        -self.log_weights.iter().copied().fold(f64::INFINITY, f64::min)
    }

    /// `Σ_a 2^{N-rank} ρ_a`, which should equal one.
    pub fn total_weight(&self) -> f64 {
        self.degeneracy() * self.log_weights.iter().map(|x| x.exp()).sum::<f64>()
    }

    pub fn norm_h_f64(&self) -> f64 {
        self.norm_h.to_f64().unwrap_or(f64::NAN)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model_io::{build_ising, build_toric};

    #[test]
    fn weights_are_normalized() {
        for m in [build_toric(2).unwrap(), build_ising(2, 2, true).unwrap()] {
            for beta in [0.0, 0.3, 2.0] {
                let g = GibbsData::new(&m, beta).unwrap();
                assert!((g.total_weight() - 1.0).abs() < 1e-12);
                assert!((0..g.len()).all(|c| g.weight(c) > 0.0));
            }
        }
    }

    #[test]
    fn maximally_mixed_at_zero() {
        let m = build_ising(1, 3, false).unwrap();
        let g = GibbsData::new(&m, 0.0).unwrap();
        assert!((g.log_inverse_norm() - 3.0 * std::f64::consts::LN_2).abs() < 1e-12);
    }

    #[test]
    fn toric_norm() {
        let g = GibbsData::new(&build_toric(2).unwrap(), 1.0).unwrap();
        assert_eq!(g.norm_h(), Rational::from_integer(8));
    }
}
