//! Block-diagonal Dirichlet matrices over cosets of the stabilizer group.
//!
//! For a coset representative `γ0` the operators `P(a) σ(γ0)`, `a` over
//! realized syndromes, span an invariant subspace of both generators. With
//! the orthonormal basis `|a⟩ = P(a) σ(γ0) / √(2^{N-rank})`, `-L` acts as a
//! real matrix `C` and the Dirichlet matrix is `Ê[a][b] = D_a C[a][b]` with
//! `D_a = √(ρ_a ρ_{a⊕e(γ0)})`.

use nalgebra::DMatrix;
use num_complex::Complex64;
use rayon::prelude::*;

use super::checks::g_function_units;
use super::dense::{pauli_coefficients, pauli_matrix, syndrome_projectors};
use super::gibbs::GibbsData;
use super::Family;
use crate::bath::BathSpec;
use crate::bits::Bits;
use crate::error::{Error, Result};
use crate::model::{pauli_from_symplectic, StabilizerModel};
use crate::pauli::{PauliKind, PauliOperator};

/// Default cap on both the number of cosets and the block dimension.
pub const DEFAULT_COSET_CAP: usize = 1 << 20;

/// `-L` restricted to one coset subspace.
#[derive(Debug, Clone)]
pub struct CosetBlock {
    pub representative: PauliOperator,
    pub family: Family,
    /// Coordinates of `e(γ0)` in the syndrome basis.
    pub shift: u64,
    /// Matrix of `-L` in the `|a⟩` basis, indexed by syndrome coordinates.
    pub coeffs: DMatrix<f64>,
    /// `ln D_a`.
    pub log_d: Vec<f64>,
}

impl CosetBlock {
    pub fn dim(&self) -> usize {
        self.log_d.len()
    }

    /// `Ê[a][b] = D_a C[a][b]`.
    pub fn dirichlet(&self) -> DMatrix<f64> {
        let n = self.dim();
        DMatrix::from_fn(n, n, |a, b| self.coeffs[(a, b)] * self.log_d[a].exp())
    }

    /// `D^{1/2} C D^{-1/2}`, symmetric with the spectrum of `-L` on the coset.
    /// Uses only ratios of `D`, so it stays finite at large β.
    pub fn symmetrized(&self) -> DMatrix<f64> {
        let n = self.dim();
        let k = DMatrix::from_fn(n, n, |a, b| {
            let c = self.coeffs[(a, b)];
            if c == 0.0 {
                0.0
            } else {
                c * (0.5 * (self.log_d[a] - self.log_d[b])).exp()
            }
        });
        0.5 * (&k + k.transpose())
    }

    pub fn is_identity_coset(&self) -> bool {
        self.representative.is_identity()
    }
}

/// Representatives of `P_N / S`: symplectic vectors vanishing on the pivot
/// columns of the row-reduced generators.
pub fn coset_representatives(model: &StabilizerModel) -> Result<Vec<PauliOperator>> {
    let free = free_columns(model);
    check_coset_caps(model, free.len())?;
    Ok((0..1u64 << free.len())
        .map(|c| representative(model, &free, c))
        .collect())
}

fn free_columns(model: &StabilizerModel) -> Vec<usize> {
    let pivots = model.generator_basis().pivots();
    (0..2 * model.n_qubits())
        .filter(|c| !pivots.contains(c))
        .collect()
}

fn representative(model: &StabilizerModel, free: &[usize], c: u64) -> PauliOperator {
    let mut v = Bits::zeros(2 * model.n_qubits());
    for (i, &col) in free.iter().enumerate() {
        if (c >> i) & 1 == 1 {
            v.set(col, true);
        }
    }
    pauli_from_symplectic(&v)
}

fn check_coset_caps(model: &StabilizerModel, free: usize) -> Result<()> {
    let cap = DEFAULT_COSET_CAP.trailing_zeros() as usize;
    if model.rank() > cap {
        return Err(Error::Resource(format!(
            "coset blocks would have dimension 2^{}, cap is 2^{cap}",
            model.rank()
        )));
    }
    if free > cap {
        return Err(Error::Resource(format!(
            "model has 2^{free} stabilizer cosets, cap is 2^{cap}"
        )));
    }
    Ok(())
}

/// Everything shared by the blocks of one model/bath/family triple.
pub struct CosetBuilder<'m> {
    model: &'m StabilizerModel,
    family: Family,
    free: Vec<usize>,
    dim: usize,
    log_rho: Vec<f64>,
    /// Coordinate masks of `e(α_j)`, `[site][kind]`.
    flips: Vec<[u64; 4]>,
    /// Davies: `ω^{α_j}(a)` in units, `[site][kind][a]`.
    omega: Vec<[Vec<i128>; 4]>,
    /// Davies: `h(ω^{α_j}(a))`, same layout.
    rates: Vec<[Vec<f64>; 4]>,
    /// Heat-bath: `G_j(a)`, `[site][a]`.
    g: Vec<Vec<f64>>,
}

impl<'m> CosetBuilder<'m> {
    pub fn new(model: &'m StabilizerModel, bath: &BathSpec, family: Family) -> Result<Self> {
        let free = free_columns(model);
        check_coset_caps(model, free.len())?;
        bath.check_model(model)?;
        let gibbs = GibbsData::new(model, bath.beta())?;
        let dim = gibbs.len();
        let n = model.n_qubits();
        let basis = model.syndrome_basis();
        let flips: Vec<[u64; 4]> = (0..n)
            .map(|j| {
                PauliKind::ALL.map(|k| {
                    basis
                        .coordinates(model.site_syndrome(j, k).bits())
                        .expect("single-site syndromes are realized")
                })
            })
            .collect();
        let syndromes: Vec<Bits> = (0..dim as u64).map(|c| basis.combine(c)).collect();
        let mut omega = Vec::new();
        let mut rates = Vec::new();
        let mut g = Vec::new();
        match family {
            Family::Davies => {
                for j in 0..n {
                    let om = PauliKind::ALL.map(|k| {
                        let e = model.site_syndrome(j, k).bits();
                        syndromes
                            .iter()
                            .map(|a| model.bohr_units(a, e))
                            .collect::<Vec<_>>()
                    });
                    let rt = std::array::from_fn(|k| {
                        om[k]
                            .iter()
                            .map(|&w| bath.rate(&model.units_to_rational(w)))
                            .collect()
                    });
                    omega.push(om);
                    rates.push(rt);
                }
            }
            Family::HeatBath => {
                for j in 0..n {
                    g.push(
                        syndromes
                            .iter()
                            .map(|a| g_function_units(model, bath.beta(), j, a))
                            .collect(),
                    );
                }
            }
        }
        Ok(CosetBuilder {
            model,
            family,
            free,
            dim,
            log_rho: (0..dim).map(|c| gibbs.log_weight(c)).collect(),
            flips,
            omega,
            rates,
            g,
        })
    }

    pub fn n_cosets(&self) -> usize {
        1 << self.free.len()
    }

    pub fn block_dim(&self) -> usize {
        self.dim
    }

    /// Block for the coset with index `index` (bit `i` sets free column `i`).
    pub fn block(&self, index: usize) -> CosetBlock {
        let model = self.model;
        let n = model.n_qubits();
        let rep = representative(model, &self.free, index as u64);
        let e_rep = model.syndrome(&rep).expect("representative has model width");
        let shift = model
            .syndrome_basis()
            .coordinates(e_rep.bits())
            .expect("Pauli syndromes are realized");
        let dim = self.dim;
        let mut c = DMatrix::<f64>::zeros(dim, dim);
        for j in 0..n {
            let theta = PauliKind::ALL.map(|k| {
                PauliOperator::single(n, j, k).commutation_sign(&rep)
            });
            match self.family {
                Family::Davies => {
                    for k in 1..4 {
                        let (om, rt) = (&self.omega[j][k], &self.rates[j][k]);
                        let f = self.flips[j][k] as usize;
                        for a in 0..dim {
                            let ag = a ^ shift as usize;
                            c[(a, a)] += 0.5 * (rt[a] + rt[ag]);
                            if om[a] == om[ag] {
                                c[(a, a ^ f)] -= theta[k] * rt[a];
                            }
                        }
                    }
                }
                Family::HeatBath => {
                    let g = &self.g[j];
                    for a in 0..dim {
                        c[(a, a)] += 1.0;
                        for (k, &th) in theta.iter().enumerate() {
                            let b = a ^ self.flips[j][k] as usize;
                            c[(a, b)] -= th * 0.25 * g[b] * g[b ^ shift as usize];
                        }
                    }
                }
            }
        }
        let log_d = (0..dim)
            .map(|a| 0.5 * (self.log_rho[a] + self.log_rho[a ^ shift as usize]))
            .collect();
        CosetBlock {
            representative: rep,
            family: self.family,
            shift,
            coeffs: c,
            log_d,
        }
    }
}

/// All coset blocks, in representative order.
pub fn dirichlet_blocks(
    model: &StabilizerModel,
    bath: &BathSpec,
    family: Family,
) -> Result<Vec<CosetBlock>> {
    let builder = CosetBuilder::new(model, bath, family)?;
    Ok((0..builder.n_cosets())
        .into_par_iter()
        .map(|i| builder.block(i))
        .collect())
}

/// `Σ_c U_c Ê_c U_c†` in the normalized Pauli basis, where the columns of
/// `U_c` are the Pauli coefficients of `|a⟩`. Small models only.
pub fn reassemble_dense(
    model: &StabilizerModel,
    blocks: &[CosetBlock],
) -> Result<DMatrix<Complex64>> {
    let n = model.n_qubits();
    let projectors = syndrome_projectors(model)?;
    let dim = 1usize << (2 * n);
    let norm = Complex64::new(1.0 / (2f64.powi((n - model.rank()) as i32)).sqrt(), 0.0);
    let mut out = DMatrix::<Complex64>::zeros(dim, dim);
    for block in blocks {
        let sigma = pauli_matrix(&block.representative);
        let cols: Vec<Vec<Complex64>> = projectors
            .iter()
            .map(|p| pauli_coefficients(n, &(p * &sigma * norm)))
            .collect();
        let u = DMatrix::from_fn(dim, cols.len(), |r, c| cols[c][r]);
        let e = block.dirichlet().map(|x| Complex64::new(x, 0.0));
        out += &u * e * u.adjoint();
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::liouvillian::dense::{dirichlet_dense_from_generator, generator_dense, DenseGibbs};
    use crate::liouvillian::linalg::sym_eigen;
    use crate::model::Rational;
    use crate::model_io::{build_ising, build_toric};

    #[test]
    fn toric_block_shape() {
        let m = build_toric(2).unwrap();
        assert_eq!(coset_representatives(&m).unwrap().len(), 1024);
        let b = CosetBuilder::new(&m, &BathSpec::glauber(0.3).unwrap(), Family::Davies).unwrap();
        assert_eq!((b.n_cosets(), b.block_dim()), (1024, 64));
    }

    #[test]
    fn representatives_hit_distinct_cosets() {
        let m = build_ising(1, 3, false).unwrap();
        let reps = coset_representatives(&m).unwrap();
        assert_eq!(reps.len(), 64 / 4);
        let vec = |p: &PauliOperator| {
            Bits::from_indices(6, p.x_bits().ones().chain(p.z_bits().ones().map(|i| 3 + i)))
        };
        for (i, p) in reps.iter().enumerate() {
            for q in &reps[i + 1..] {
                assert!(!m.generator_basis().contains(&vec(p).xor(&vec(q))));
            }
        }
    }

    #[test]
    fn blocks_match_dense_oracle() {
        let z = StabilizerModel::new(1, vec!["Z".parse().unwrap()], vec![Rational::from_integer(1)])
            .unwrap();
        for m in [z, build_ising(1, 2, false).unwrap()] {
            for beta in [0.0, 0.3, 1.0] {
                let bath = BathSpec::glauber(beta).unwrap();
                let gibbs = DenseGibbs::new(&m, beta).unwrap();
                for family in Family::ALL {
                    let l = generator_dense(&m, &bath, family).unwrap();
                    let oracle = dirichlet_dense_from_generator(&l, &gibbs);
                    let blocks = dirichlet_blocks(&m, &bath, family).unwrap();
                    let re = reassemble_dense(&m, &blocks).unwrap();
                    let diff = DMatrix::from_fn(oracle.nrows(), oracle.ncols(), |r, c| {
                        (re[(r, c)] - Complex64::new(oracle[(r, c)], 0.0)).norm()
                    });
                    assert!(diff.amax() < 1e-10, "{family} β={beta}: {}", diff.amax());
                }
            }
        }
    }

    #[test]
    fn identity_coset_has_gibbs_zero_mode() {
        let m = build_toric(2).unwrap();
        for family in Family::ALL {
            let b = CosetBuilder::new(&m, &BathSpec::metropolis(0.5).unwrap(), family)
                .unwrap()
                .block(0);
            assert!(b.is_identity_coset());
            let k = b.symmetrized();
            let v = nalgebra::DVector::from_iterator(b.dim(), b.log_d.iter().map(|x| (0.5 * x).exp()));
            assert!((&k * &v).amax() < 1e-12);
            let (vals, _) = sym_eigen(&k);
            assert!(vals[0] > -1e-10 && vals[1] > 1e-6);
        }
    }
}
