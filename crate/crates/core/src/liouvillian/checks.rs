//! Comparison constants, Poincaré and ergodicity checks, and mixing-time
//! bounds on top of the exact generators.

use nalgebra::{DMatrix, DVector};
use num_traits::ToPrimitive;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::dense::{
    dirichlet_dense_from_generator, generator_dense, heatbath_dense, operator_from_coefficients,
    partial_trace_site, symmetrized_dense, DenseGibbs,
};
use super::gibbs::GibbsData;
use super::linalg::{hermitian_norm, sym_eigen};
use super::Family;
use crate::bath::BathSpec;
use crate::bits::Bits;
use crate::error::{Error, Result};
use crate::model::StabilizerModel;
use crate::pauli::{PauliKind, Syndrome};

/// `G_j(a)` for raw syndrome bits, computed in log space.
pub(crate) fn g_function_units(model: &StabilizerModel, beta: f64, site: usize, a: &Bits) -> f64 {
    let exps: Vec<f64> = PauliKind::ALL
        .iter()
        .map(|&k| beta * model.units_to_f64(model.bohr_units(a, model.site_syndrome(site, k).bits())))
        .collect();
    let top = exps.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let log_mean = top + (exps.iter().map(|x| (x - top).exp()).sum::<f64>() / 4.0).ln();
    (-0.5 * log_mean).exp()
}

/// `G_j(a) = (¼ Σ_{α_j} e^{β ω^{α_j}(a)})^{-1/2}`, the heat-bath weight of
/// syndrome `a` at site `j`. Any syndrome pattern is accepted.
pub fn g_function(model: &StabilizerModel, bath: &BathSpec, site: usize, a: &Syndrome) -> Result<f64> {
    if site >= model.n_qubits() {
        return Err(Error::Argument(format!(
            "site {site} out of range for {} qubits",
            model.n_qubits()
        )));
    }
    if a.len() != model.n_generators() {
        return Err(Error::Argument(format!(
            "syndrome has {} bits, model has {} generators",
            a.len(),
            model.n_generators()
        )));
    }
    Ok(g_function_units(model, bath.beta(), site, a.bits()))
}

#[derive(Debug, Clone, PartialEq)]
pub struct TauAndR {
    /// `max_{j,a} 2 G_j(a)² / h_min`.
    pub tau: f64,
    /// `1/τ`.
    pub r: f64,
    /// `½ h_min e^{-2βJ S*}`.
    pub r_lower: f64,
    pub h_min: f64,
    pub s_star: usize,
}

/// Comparison constant between the heat-bath and Davies Dirichlet forms.
/// `G_j` only depends on the syndrome bits of generators touching `j`, so
/// the maximum runs over realized local patterns.
pub fn tau_and_r(model: &StabilizerModel, bath: &BathSpec) -> Result<TauAndR> {
    let h_min = bath.h_min(model)?;
    let beta = bath.beta();
    let mut g2_max: f64 = 0.0;
    let mut s_star = 0;
    for j in 0..model.n_qubits() {
        let gens = model.generators_on_site(j);
        s_star = s_star.max(gens.len());
        for pattern in model.local_realized_patterns(gens) {
            let a = Bits::from_indices(
                model.n_generators(),
                gens.iter()
                    .enumerate()
                    .filter(|(i, _)| (pattern >> i) & 1 == 1)
                    .map(|(_, &k)| k),
            );
            g2_max = g2_max.max(g_function_units(model, beta, j, &a).powi(2));
        }
    }
    let tau = 2.0 * g2_max / h_min;
    let jf = model.max_coupling().to_f64().unwrap_or(f64::NAN);
    Ok(TauAndR {
        tau,
        r: 1.0 / tau,
        r_lower: 0.5 * h_min * (-2.0 * beta * jf * s_star as f64).exp(),
        h_min,
        s_star,
    })
}

/// `(Var_ρ(f), E(f))` for a Hermitian observable with real coefficients
/// `f` in the normalized Pauli basis.
pub fn variance_and_dirichlet(gibbs: &DenseGibbs, f: &[f64], e_hat: &DMatrix<f64>) -> (f64, f64) {
    let v = DVector::from_column_slice(f);
    let metric = gibbs.kms_metric();
    let mean: f64 = gibbs.rho_vector().iter().zip(f).map(|(r, x)| r * x).sum();
    let var = v.dot(&(&metric * &v)) - mean * mean;
    let e = v.dot(&(e_hat * &v));
    (var, e)
}

#[derive(Debug, Clone, PartialEq)]
pub struct PoincareReport {
    pub gap: f64,
    pub samples: usize,
    pub violations: usize,
    /// `min (E - λ Var)` over the random observables.
    pub min_margin: f64,
    /// `|E - λ Var|` for the gap eigenvector.
    pub eigenvector_residual: f64,
}

pub const POINCARE_TOLERANCE: f64 = 1e-10;

/// Draws a Hermitian observable with unit coefficient norm.
pub fn random_observable(n: usize, rng: &mut impl Rng) -> Vec<f64> {
    let mut f: Vec<f64> = (0..1usize << (2 * n)).map(|_| rng.random_range(-1.0..1.0)).collect();
    let norm = f.iter().map(|x| x * x).sum::<f64>().sqrt();
    f.iter_mut().for_each(|x| *x /= norm);
    f
}

/// Checks `λ Var_ρ(f) ≤ E(f)` on `samples` seeded random observables and
/// on the gap eigenvector, where it must be tight.
pub fn poincare_check(
    model: &StabilizerModel,
    bath: &BathSpec,
    family: Family,
    samples: usize,
    seed: u64,
) -> Result<PoincareReport> {
    let l = generator_dense(model, bath, family)?;
    let gibbs = DenseGibbs::new(model, bath.beta())?;
    let e_hat = dirichlet_dense_from_generator(&l, &gibbs);
    let (vals, vecs) = sym_eigen(&symmetrized_dense(&l, &gibbs));
    let gap = super::gap::spectral_gap(&vals, super::GapMethod::Dense)?.gap;
    let idx = vals.iter().position(|&x| x == gap).unwrap_or(1);
    let down = gibbs.sandwich(&gibbs.rho_minus_quarter);
    let eig = &down * vecs.column(idx);
    let (var, e) = variance_and_dirichlet(&gibbs, eig.as_slice(), &e_hat);
    let eigenvector_residual = (e - gap * var).abs();

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut violations = 0;
    let mut min_margin = f64::INFINITY;
    for _ in 0..samples {
        let f = random_observable(model.n_qubits(), &mut rng);
        let (var, e) = variance_and_dirichlet(&gibbs, &f, &e_hat);
        let margin = e - gap * var;
        min_margin = min_margin.min(margin);
        if margin < -POINCARE_TOLERANCE {
            violations += 1;
        }
    }
    Ok(PoincareReport {
        gap,
        samples,
        violations,
        min_margin,
        eigenvector_residual,
    })
}

/// `|||f||| = Σ_k ‖f - ptr_k f‖` for a Hermitian observable given by its
/// Pauli coefficients.
pub fn oscillator_norm(n: usize, f: &[f64]) -> f64 {
    let op = operator_from_coefficients(n, f);
    (0..n)
        .map(|k| hermitian_norm(&(&op - partial_trace_site(n, k, &op))))
        .sum()
}

#[derive(Debug, Clone, PartialEq)]
pub struct ErgodicityPoint {
    pub t: f64,
    /// `‖T_t f - tr(ρ f)‖`
    pub lhs: f64,
    /// `e^{-(1-κ)t} |||f|||`
    pub rhs: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ErgodicityReport {
    pub kappa: f64,
    pub oscillator_norm: f64,
    pub points: Vec<ErgodicityPoint>,
    pub holds: bool,
}

/// Evolves `f` under the exact heat-bath semigroup and checks
/// `‖T_t f - tr(ρf)‖ ≤ e^{-(1-κ)t} |||f|||` at every time in `times`.
pub fn ergodicity_check(
    model: &StabilizerModel,
    bath: &BathSpec,
    f: &[f64],
    times: &[f64],
    kappa: f64,
) -> Result<ErgodicityReport> {
    if !(kappa < 1.0) {
        return Err(Error::Argument(format!(
            "ergodicity bound needs κ < 1, got {kappa}"
        )));
    }
    let n = model.n_qubits();
    if f.len() != 1usize << (2 * n) {
        return Err(Error::Argument(format!(
            "observable has {} coefficients, expected {}",
            f.len(),
            1usize << (2 * n)
        )));
    }
    let q = heatbath_dense(model, bath)?;
    let gibbs = DenseGibbs::new(model, bath.beta())?;
    let (vals, vecs) = sym_eigen(&symmetrized_dense(&q, &gibbs));
    let up = gibbs.sandwich(&gibbs.rho_quarter);
    let down = gibbs.sandwich(&gibbs.rho_minus_quarter);
    let fv = DVector::from_column_slice(f);
    let projected = vecs.transpose() * (&up * &fv);
    let mean: f64 = gibbs.rho_vector().iter().zip(f).map(|(r, x)| r * x).sum();
    let osc = oscillator_norm(n, f);
    let sd = ((1u64 << n) as f64).sqrt();

    let mut points = Vec::with_capacity(times.len());
    let mut holds = true;
    for &t in times {
        let decayed = DVector::from_iterator(
            vals.len(),
            projected.iter().zip(&vals).map(|(c, l)| c * (-t * l).exp()),
        );
        let mut evolved = &down * (&vecs * decayed);
        // Subtract tr(ρf)·I; the identity has coefficient √d on e_0.
        evolved[0] -= mean * sd;
        let lhs = hermitian_norm(&operator_from_coefficients(n, evolved.as_slice()));
        let rhs = (-(1.0 - kappa) * t).exp() * osc;
        holds &= lhs <= rhs * (1.0 + 1e-9) + 1e-12;
        points.push(ErgodicityPoint { t, lhs, rhs });
    }
    Ok(ErgodicityReport {
        kappa,
        oscillator_norm: osc,
        points,
        holds,
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct MixingTimeBound {
    /// `(1 + ½ ln‖ρ^{-1}‖)/λ` with the exact `‖ρ^{-1}‖`.
    pub exact: f64,
    /// Same with `ln‖ρ^{-1}‖ ≤ 2β‖H‖ + N ln 2`.
    pub energy: f64,
    pub log_inverse_norm: f64,
    pub log_inverse_norm_bound: f64,
}

pub fn mixing_time_bound(gap: f64, gibbs: &GibbsData) -> Result<MixingTimeBound> {
    if !(gap > 0.0 && gap.is_finite()) {
        return Err(Error::Argument(format!("gap must be positive, got {gap}")));
    }
    let log_inv = gibbs.log_inverse_norm();
    let log_bound = 2.0 * gibbs.beta() * gibbs.norm_h_f64()
        + gibbs.n_qubits() as f64 * std::f64::consts::LN_2;
    Ok(MixingTimeBound {
        exact: (1.0 + 0.5 * log_inv) / gap,
        energy: (1.0 + 0.5 * log_bound) / gap,
        log_inverse_norm: log_inv,
        log_inverse_norm_bound: log_bound,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::Rational;
    use crate::model_io::{build_ising, build_toric};
    use crate::pauli::PauliOperator;

    fn single_qubit() -> StabilizerModel {
        StabilizerModel::new(1, vec!["Z".parse().unwrap()], vec![Rational::from_integer(1)])
            .unwrap()
    }

    #[test]
    fn g_single_qubit_closed_form() {
        let m = single_qubit();
        for beta in [0.0, 0.5, 2.0] {
            let bath = BathSpec::glauber(beta).unwrap();
            let g = g_function(&m, &bath, 0, &Syndrome::zero(1)).unwrap();
            let want = (0.5 * (1.0 + (-2.0 * beta).exp())).powf(-0.5);
            assert!((g - want).abs() < 1e-14);
        }
    }

    #[test]
    fn g_squared_ratio_is_boltzmann() {
        let m = build_toric(2).unwrap();
        let bath = BathSpec::glauber(0.37).unwrap();
        for c in [0u64, 5, 17, 63] {
            let a = m.syndrome_from_coordinates(c);
            for j in 0..m.n_qubits() {
                for kind in PauliKind::NONTRIVIAL {
                    let p = PauliOperator::single(m.n_qubits(), j, kind);
                    let w = m.bohr_frequency(&a, &p).unwrap().to_f64().unwrap();
                    let flipped = a.xor(m.site_syndrome(j, kind));
                    let g0 = g_function(&m, &bath, j, &a).unwrap();
                    let g1 = g_function(&m, &bath, j, &flipped).unwrap();
                    assert!((g1 * g1 / (g0 * g0) - (0.37 * w).exp()).abs() < 1e-12);
                }
            }
        }
    }

    #[test]
    fn tau_closed_forms() {
        let m = single_qubit();
        let beta = 0.6;
        let bath = BathSpec::metropolis(beta).unwrap();
        let t = tau_and_r(&m, &bath).unwrap();
        let want = 4.0 / ((1.0 + (-2.0 * beta).exp()) * t.h_min);
        assert!((t.tau - want).abs() < 1e-12);
        let t0 = tau_and_r(&m, &BathSpec::glauber(0.0).unwrap()).unwrap();
        assert!((t0.tau - 2.0 / t0.h_min).abs() < 1e-14);
        assert!(t.r >= t.r_lower);
    }

    #[test]
    fn identity_has_no_variance() {
        let m = build_ising(1, 2, false).unwrap();
        let bath = BathSpec::glauber(0.4).unwrap();
        let gibbs = DenseGibbs::new(&m, 0.4).unwrap();
        let e_hat = dirichlet_dense_from_generator(&generator_dense(&m, &bath, Family::Davies).unwrap(), &gibbs);
        let mut f = vec![0.0; 16];
        f[0] = 2.0;
        let (var, e) = variance_and_dirichlet(&gibbs, &f, &e_hat);
        assert!(var.abs() < 1e-12 && e.abs() < 1e-12);
    }

    #[test]
    fn poincare_holds_and_is_tight() {
        let m = build_ising(1, 2, false).unwrap();
        for family in Family::ALL {
            let r = poincare_check(&m, &BathSpec::glauber(0.5).unwrap(), family, 20, 7).unwrap();
            assert_eq!(r.violations, 0);
            assert!(r.eigenvector_residual < 1e-9);
        }
    }

    #[test]
    fn ergodicity_saturates_at_infinite_temperature() {
        let m = build_ising(1, 2, false).unwrap();
        let mut f = vec![0.0; 16];
        f[PauliOperator::single(2, 0, PauliKind::X).index() as usize] = 2.0;
        let r = ergodicity_check(&m, &BathSpec::glauber(0.0).unwrap(), &f, &[0.1, 1.0, 5.0], 0.0)
            .unwrap();
        assert!(r.holds);
        for p in &r.points {
            assert!((p.lhs - p.rhs).abs() < 1e-12, "{p:?}");
        }
    }

    #[test]
    fn mixing_time_at_infinite_temperature() {
        let m = build_ising(1, 3, false).unwrap();
        let g = GibbsData::new(&m, 0.0).unwrap();
        let b = mixing_time_bound(0.5, &g).unwrap();
        assert!((b.exact - (1.0 + 1.5 * std::f64::consts::LN_2) / 0.5).abs() < 1e-12);
        assert!(b.energy >= b.exact);
        assert!(mixing_time_bound(1.0, &g).unwrap().exact < b.exact);
        assert!(mixing_time_bound(0.0, &g).is_err());
    }
}
