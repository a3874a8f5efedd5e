//! Explicit Hilbert-space construction of the heat-bath and Davies
//! generators for small systems.
//!
//! Superoperators are real matrices in the Hilbert–Schmidt normalized
//! Hermitian Pauli basis `e_μ = σ_μ / √d`, with `μ` the Pauli index
//! (low N bits x, next N bits z). Generators are in the Heisenberg picture;
//! the Schrödinger adjoint is the transpose.

use nalgebra::DMatrix;
use num_complex::Complex64;
use rayon::prelude::*;
use std::collections::BTreeMap;

use super::linalg::{hermitian_function, sym_eigen};
use super::Family;
use crate::bath::BathSpec;
use crate::error::{Error, Result};
use crate::model::{StabilizerModel, DEFAULT_SYNDROME_RANK_CAP};
use crate::pauli::{PauliKind, PauliOperator};

pub const DEFAULT_DENSE_CAP: usize = 6;

type CMat = DMatrix<Complex64>;

fn check_cap(model: &StabilizerModel, cap: usize) -> Result<()> {
    if model.n_qubits() > cap {
        return Err(Error::Resource(format!(
            "dense construction is limited to {cap} qubits, model has {}; use the coset method",
            model.n_qubits()
        )));
    }
    Ok(())
}

#[inline]
fn i_pow(k: u32) -> Complex64 {
    match k % 4 {
        0 => Complex64::new(1.0, 0.0),
        1 => Complex64::new(0.0, 1.0),
        2 => Complex64::new(-1.0, 0.0),
        _ => Complex64::new(0.0, -1.0),
    }
}

/// `⟨c ⊕ x| σ |c⟩ = i^{|x∧z|} (-1)^{|z∧c|}`; Y = iXZ on each site.
pub fn pauli_matrix(p: &PauliOperator) -> CMat {
    let n = p.n_qubits();
    let d = 1usize << n;
    let x = p.x_bits().to_u64() as usize;
    let z = p.z_bits().to_u64() as usize;
    let phase = i_pow((x & z).count_ones());
    let mut m = CMat::zeros(d, d);
    for c in 0..d {
        let sign = if (z & c).count_ones() % 2 == 1 { -1.0 } else { 1.0 };
        m[(c ^ x, c)] = phase * sign;
    }
    m
}

pub fn pauli_index_matrix(n: usize, mu: u64) -> CMat {
    pauli_matrix(&PauliOperator::from_index(n, mu))
}

pub fn hamiltonian_matrix(model: &StabilizerModel) -> CMat {
    let d = 1usize << model.n_qubits();
    let mut h = CMat::zeros(d, d);
    for (g, j) in model.generators().iter().zip(model.couplings()) {
        let jf = num_traits::ToPrimitive::to_f64(j).unwrap_or(f64::NAN);
        h -= pauli_matrix(g) * Complex64::new(jf, 0.0);
    }
    h
}

/// `tr(σ_μ Y)` using the one-entry-per-row structure of σ_μ.
fn pauli_trace(n: usize, mu: u64, y: &CMat) -> Complex64 {
    let d = 1usize << n;
    let m = (1u64 << n) - 1;
    let x = (mu & m) as usize;
    let z = ((mu >> n) & m) as usize;
    let phase = i_pow((x & z).count_ones());
    let mut acc = Complex64::new(0.0, 0.0);
    for c in 0..d {
        let sign = if (z & c).count_ones() % 2 == 1 { -1.0 } else { 1.0 };
        acc += phase * sign * y[(c, c ^ x)];
    }
    acc
}

/// Coefficients `tr(e_μ X)` of an operator in the normalized Pauli basis.
pub fn pauli_coefficients(n: usize, x: &CMat) -> Vec<Complex64> {
    let sd = (1u64 << n) as f64;
    (0..1u64 << (2 * n))
        .map(|mu| pauli_trace(n, mu, x) / sd.sqrt())
        .collect()
}

/// Operator with the given real coefficients in the normalized basis.
pub fn operator_from_coefficients(n: usize, coeffs: &[f64]) -> CMat {
    let d = 1usize << n;
    let scale = 1.0 / (d as f64).sqrt();
    let mut out = CMat::zeros(d, d);
    for (mu, &c) in coeffs.iter().enumerate() {
        if c != 0.0 {
            out += pauli_index_matrix(n, mu as u64) * Complex64::new(c * scale, 0.0);
        }
    }
    out
}

/// Real matrix of a Hermiticity-preserving map in the normalized Pauli basis.
pub fn superoperator_matrix<F>(n: usize, map: F) -> DMatrix<f64>
where
    F: Fn(&CMat) -> CMat + Sync,
{
    let dim = 1usize << (2 * n);
    let d = (1u64 << n) as f64;
    let columns: Vec<Vec<f64>> = (0..dim as u64)
        .into_par_iter()
        .map(|nu| {
            let y = map(&pauli_index_matrix(n, nu));
            (0..dim as u64)
                .map(|mu| pauli_trace(n, mu, &y).re / d)
                .collect()
        })
        .collect();
    DMatrix::from_fn(dim, dim, |r, c| columns[c][r])
}

/// Normalized partial trace over one site, `¼ Σ_α σ_α f σ_α`.
pub(crate) fn partial_trace_site(n: usize, site: usize, f: &CMat) -> CMat {
    let mut out = CMat::zeros(f.nrows(), f.ncols());
    for kind in PauliKind::ALL {
        let s = pauli_matrix(&PauliOperator::single(n, site, kind));
        out += &s * f * &s;
    }
    out * Complex64::new(0.25, 0.0)
}

/// Dense Gibbs state and the powers needed for the Dirichlet machinery.
#[derive(Debug, Clone)]
pub struct DenseGibbs {
    pub n: usize,
    pub rho: CMat,
    pub rho_half: CMat,
    pub rho_quarter: CMat,
    pub rho_minus_quarter: CMat,
}

impl DenseGibbs {
    pub fn new(model: &StabilizerModel, beta: f64) -> Result<Self> {
        check_cap(model, DEFAULT_DENSE_CAP)?;
        let h = hamiltonian_matrix(model);
        // Shift by the ground energy before exponentiating.
        let ground = num_traits::ToPrimitive::to_f64(&model.ground_energy()).unwrap_or(0.0);
        let unnorm = hermitian_function(&h, |e| (-beta * (e - ground)).exp());
        let z = unnorm.trace().re;
        let rho = unnorm / Complex64::new(z, 0.0);
        let rho_half = hermitian_function(&rho, |x| x.max(0.0).sqrt());
        let rho_quarter = hermitian_function(&rho, |x| x.max(0.0).powf(0.25));
        let rho_minus_quarter = hermitian_function(&rho, |x| x.max(f64::MIN_POSITIVE).powf(-0.25));
        Ok(DenseGibbs {
            n: model.n_qubits(),
            rho,
            rho_half,
            rho_quarter,
            rho_minus_quarter,
        })
    }

    /// `tr(e_μ ρ)`.
    pub fn rho_vector(&self) -> Vec<f64> {
        pauli_coefficients(self.n, &self.rho)
            .iter()
            .map(|c| c.re)
            .collect()
    }

    /// Matrix of `X ↦ A X A` in the Pauli basis.
    pub fn sandwich(&self, a: &CMat) -> DMatrix<f64> {
        superoperator_matrix(self.n, |x| a * x * a)
    }

    /// `Γ^{1/2}: X ↦ ρ^{1/2} X ρ^{1/2}`, the KMS metric.
    pub fn kms_metric(&self) -> DMatrix<f64> {
        self.sandwich(&self.rho_half)
    }
}

/// Heat-bath generator `Q(f) = Σ_j ptr_j(γ_j† f γ_j) - f` with
/// `γ_j = (ptr_j e^{-βH})^{-1/2} e^{-βH/2}`.
pub fn heatbath_dense(model: &StabilizerModel, bath: &BathSpec) -> Result<DMatrix<f64>> {
    check_cap(model, DEFAULT_DENSE_CAP)?;
    let n = model.n_qubits();
    let beta = bath.beta();
    let h = hamiltonian_matrix(model);
    let ground = num_traits::ToPrimitive::to_f64(&model.ground_energy()).unwrap_or(0.0);
    let boltz = hermitian_function(&h, |e| (-beta * (e - ground)).exp());
    let half = hermitian_function(&h, |e| (-0.5 * beta * (e - ground)).exp());
    let gammas: Vec<CMat> = (0..n)
        .map(|j| {
            let local = partial_trace_site(n, j, &boltz);
            hermitian_function(&local, |x| x.powf(-0.5)) * &half
        })
        .collect();
    let paulis: Vec<[CMat; 4]> = (0..n)
        .map(|j| PauliKind::ALL.map(|k| pauli_matrix(&PauliOperator::single(n, j, k))))
        .collect();
    Ok(superoperator_matrix(n, |f| {
        let mut out = -f * Complex64::new(n as f64, 0.0);
        for (g, sig) in gammas.iter().zip(&paulis) {
            let inner = g.adjoint() * f * g;
            for s in sig {
                out += s * &inner * s * Complex64::new(0.25, 0.0);
            }
        }
        out
    }))
}

/// Realized eigenprojectors `P(b) = Π_k ½(I + (-1)^{b_k} g_k)`, indexed by
/// syndrome coordinates.
pub fn syndrome_projectors(model: &StabilizerModel) -> Result<Vec<CMat>> {
    check_cap(model, DEFAULT_DENSE_CAP)?;
    let d = 1usize << model.n_qubits();
    let gens: Vec<CMat> = model.generators().iter().map(pauli_matrix).collect();
    let id = CMat::identity(d, d);
    Ok(model
        .realized_syndromes(DEFAULT_SYNDROME_RANK_CAP)?
        .iter()
        .map(|b| {
            let mut p = id.clone();
            for (k, g) in gens.iter().enumerate() {
                let sign = if b.get(k) { -0.5 } else { 0.5 };
                p = p * (&id * Complex64::new(0.5, 0.0) + g * Complex64::new(sign, 0.0));
            }
            p
        })
        .collect())
}

/// Davies generator with single-site Pauli couplings and jump operators
/// `S^ω_{α_j} = Σ_{b : ω^{α_j}(b) = ω} σ_{α_j} P(b)`, grouped by exact ω.
pub fn davies_dense(model: &StabilizerModel, bath: &BathSpec) -> Result<DMatrix<f64>> {
    check_cap(model, DEFAULT_DENSE_CAP)?;
    bath.check_model(model)?;
    let n = model.n_qubits();
    let d = 1usize << n;
    let projectors = syndrome_projectors(model)?;
    let syndromes = model.realized_syndromes(DEFAULT_SYNDROME_RANK_CAP)?;
    let mut jumps: Vec<(f64, CMat)> = Vec::new();
    for j in 0..n {
        for kind in PauliKind::NONTRIVIAL {
            let p = PauliOperator::single(n, j, kind);
            let sigma = pauli_matrix(&p);
            let e = model.site_syndrome(j, kind).bits().clone();
            let mut groups: BTreeMap<i128, CMat> = BTreeMap::new();
            for (b, proj) in syndromes.iter().zip(&projectors) {
                let w = model.bohr_units(b.bits(), &e);
                *groups.entry(w).or_insert_with(|| CMat::zeros(d, d)) += &sigma * proj;
            }
            for (w, s) in groups {
                jumps.push((bath.rate(&model.units_to_rational(w)), s));
            }
        }
    }
    let mut k = CMat::zeros(d, d);
    for (h, s) in &jumps {
        k += s.adjoint() * s * Complex64::new(*h, 0.0);
    }
    let half = Complex64::new(0.5, 0.0);
    Ok(superoperator_matrix(n, |f| {
        let mut out = -(&k * f + f * &k) * half;
        for (h, s) in &jumps {
            out += s.adjoint() * f * s * Complex64::new(*h, 0.0);
        }
        out
    }))
}

pub fn generator_dense(
    model: &StabilizerModel,
    bath: &BathSpec,
    family: Family,
) -> Result<DMatrix<f64>> {
    match family {
        Family::Davies => davies_dense(model, bath),
        Family::HeatBath => heatbath_dense(model, bath),
    }
}

/// `Ê = -Γ^{1/2} ∘ L`: the matrix of `f ↦ -ρ^{1/2} L(f) ρ^{1/2}`, so that
/// `E(f) = ⟨f, Ê f⟩`.
pub fn dirichlet_dense_from_generator(l: &DMatrix<f64>, gibbs: &DenseGibbs) -> DMatrix<f64> {
    -(gibbs.kms_metric() * l)
}

/// `K = Γ^{1/4} (-L) Γ^{-1/4}`, symmetric and similar to `-L`.
pub fn symmetrized_dense(l: &DMatrix<f64>, gibbs: &DenseGibbs) -> DMatrix<f64> {
    let up = gibbs.sandwich(&gibbs.rho_quarter);
    let down = gibbs.sandwich(&gibbs.rho_minus_quarter);
    let k = -(up * l * down);
    0.5 * (&k + k.transpose())
}

/// Residuals of the structural identities of a generator.
#[derive(Debug, Clone, PartialEq)]
pub struct StructuralResiduals {
    /// `max |L(I)|`
    pub unitality: f64,
    /// `max |L*(ρ)|`
    pub fixed_point: f64,
    /// `max |Γ^{1/2} L - Lᵀ Γ^{1/2}|`
    pub detailed_balance: f64,
    /// Largest imaginary part among the eigenvalues of `L`.
    pub spectrum_imaginary: f64,
}

pub fn structural_residuals(l: &DMatrix<f64>, gibbs: &DenseGibbs) -> StructuralResiduals {
    let unitality = l.column(0).amax();
    let r = DMatrix::from_column_slice(l.nrows(), 1, &gibbs.rho_vector());
    let fixed_point = (l.transpose() * r).amax();
    let g = gibbs.kms_metric();
    let detailed_balance = (&g * l - l.transpose() * &g).amax();
    let spectrum_imaginary = general_spectrum(l)
        .map(|v| v.iter().fold(0.0f64, |acc, z| acc.max(z.im.abs())))
        .unwrap_or(f64::NAN);
    StructuralResiduals {
        unitality,
        fixed_point,
        detailed_balance,
        spectrum_imaginary,
    }
}

/// Eigenvalues of a general real matrix via an iteration-capped real
/// Schur decomposition; `None` when it fails to converge.
///
/// The deflation test is relative to the neighbouring diagonal entries,
/// which stalls next to exact zero eigenvalues; the matrix is therefore
/// shifted by `2‖M‖_F` first and the shift removed afterwards.
pub fn general_spectrum(m: &DMatrix<f64>) -> Option<Vec<Complex64>> {
    let n = m.nrows();
    let shift = 2.0 * m.norm() + 1.0;
    let shifted = m + DMatrix::<f64>::identity(n, n) * shift;
    let schur = nalgebra::linalg::Schur::try_new(shifted, 1e-15, 200 * n.max(10))?;
    Some(
        schur
            .complex_eigenvalues()
            .iter()
            .map(|z| z - Complex64::new(shift, 0.0))
            .collect(),
    )
}

/// Eigenvalues of the symmetrized generator, ascending.
pub fn dense_spectrum(l: &DMatrix<f64>, gibbs: &DenseGibbs) -> Vec<f64> {
    sym_eigen(&symmetrized_dense(l, gibbs)).0
}
