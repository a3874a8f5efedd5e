//! Locality data and the κ(β) condition number of the heat-bath generator.
//!
//! κ < 1 certifies a system-size independent gap `λ_Q ≥ 1 - κ`; the unit
//! root of κ defines the critical inverse temperature β*. Three variants
//! are provided, each an upper bound on the next:
//! `numeric ≤ proposition ≤ simplified`.

use std::fmt;

use num_traits::ToPrimitive;
use rayon::prelude::*;

use crate::bath::BathSpec;
use crate::error::{Error, Result};
use crate::model::{Rational, StabilizerModel};
use crate::pauli::PauliKind;

/// Cap on `2^{|S_j|}` local patterns for the numeric variant.
pub const LOCAL_PATTERN_CAP: usize = 1 << 20;

/// Default absolute tolerance (in units of βJ) for [`critical_beta`].
pub const DEFAULT_BETA_TOL: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq)]
pub struct SiteNeighborhood {
    pub site: usize,
    /// N_j: the site itself first, then the other sites in ascending order.
    pub neighbors: Vec<usize>,
    /// S_j: generators whose support contains the site.
    pub supports: Vec<usize>,
    /// `|S_j ∩ S_m|` for each `m` in `neighbors`.
    pub shared: Vec<usize>,
    /// Largest coupling among generators touching any site of N_j.
    pub coupling: Rational,
}

#[derive(Debug, Clone, PartialEq)]
pub struct AdjacencyData {
    pub sites: Vec<SiteNeighborhood>,
}

impl AdjacencyData {
    /// `max_j |S_j|`.
    pub fn s_star_max(&self) -> usize {
        self.sites.iter().map(|s| s.supports.len()).max().unwrap_or(0)
    }

    /// `min_j |S_j|`.
    pub fn s_star_min(&self) -> usize {
        self.sites.iter().map(|s| s.supports.len()).min().unwrap_or(0)
    }
}

pub fn adjacency(model: &StabilizerModel) -> AdjacencyData {
    let n = model.n_qubits();
    let supports: Vec<Vec<usize>> = model.generators().iter().map(|g| g.support()).collect();
    let sites = (0..n)
        .map(|j| {
            let s_j = model.generators_on_site(j).to_vec();
            let mut others: Vec<usize> = s_j
                .iter()
                .flat_map(|&k| supports[k].iter().copied())
                .filter(|&m| m != j)
                .collect();
            others.sort_unstable();
            others.dedup();
            let mut neighbors = vec![j];
            neighbors.extend(others);
            let shared = neighbors
                .iter()
                .map(|&m| {
                    let s_m = model.generators_on_site(m);
                    s_j.iter().filter(|k| s_m.contains(k)).count()
                })
                .collect();
            let coupling = model.max_coupling_of(
                neighbors
                    .iter()
                    .flat_map(|&m| model.generators_on_site(m).iter().copied()),
            );
            SiteNeighborhood {
                site: j,
                neighbors,
                supports: s_j,
                shared,
                coupling,
            }
        })
        .collect();
    AdjacencyData { sites }
}

/// `ε(m, j) = max_{α_j, τ_m} Σ_k J_k e_k(α_j) e_k(τ_m)`.
pub fn epsilon_pair(model: &StabilizerModel, m: usize, j: usize) -> Rational {
    let mut best = Rational::from_integer(0);
    for a in PauliKind::NONTRIVIAL {
        let ea = model.site_syndrome(j, a).bits();
        for t in PauliKind::NONTRIVIAL {
            let et = model.site_syndrome(m, t).bits();
            let s: Rational = ea.and(et).ones().map(|k| model.couplings()[k]).sum();
            best = best.max(s);
        }
    }
    best
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum KappaVariant {
    Simplified,
    Proposition,
    Numeric,
}

impl KappaVariant {
    pub const ALL: [KappaVariant; 3] = [
        KappaVariant::Simplified,
        KappaVariant::Proposition,
        KappaVariant::Numeric,
    ];

    pub fn name(self) -> &'static str {
        match self {
            KappaVariant::Simplified => "simplified",
            KappaVariant::Proposition => "proposition",
            KappaVariant::Numeric => "numeric",
        }
    }
}

impl fmt::Display for KappaVariant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl std::str::FromStr for KappaVariant {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "simplified" => Ok(KappaVariant::Simplified),
            "proposition" => Ok(KappaVariant::Proposition),
            "numeric" => Ok(KappaVariant::Numeric),
            other => Err(Error::Argument(format!(
                "unknown κ variant '{other}' (expected simplified, proposition or numeric)"
            ))),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct KappaReport {
    pub variant: KappaVariant,
    pub beta: f64,
    pub kappa: f64,
    /// κ_j per site.
    pub per_site: Vec<f64>,
    pub argmax_site: usize,
}

fn report(variant: KappaVariant, beta: f64, per_site: Vec<f64>) -> KappaReport {
    let (argmax_site, kappa) = per_site
        .iter()
        .copied()
        .enumerate()
        .fold((0, 0.0f64), |(bi, bv), (i, v)| if v > bv { (i, v) } else { (bi, bv) });
    KappaReport {
        variant,
        beta,
        kappa,
        per_site,
        argmax_site,
    }
}

fn check_beta(beta: f64) -> Result<()> {
    if !beta.is_finite() || beta < 0.0 {
        return Err(Error::Argument(format!(
            "inverse temperature must be finite and nonnegative, got {beta}"
        )));
    }
    Ok(())
}

fn to_f64(r: &Rational) -> f64 {
    r.to_f64().unwrap_or(f64::NAN)
}

/// `3(|N_j|-1) e^{2βJ|S_j|} Σ_{l<m} (e^{2βJ|S_j∩S_m|} - 1)`; the double
/// sum counts each `m` once per earlier element, i.e. with weight equal
/// to its position in N_j.
pub fn kappa_simplified(model: &StabilizerModel, beta: f64) -> Result<KappaReport> {
    check_beta(beta)?;
    let adj = adjacency(model);
    let per_site = adj
        .sites
        .iter()
        .map(|s| {
            let bj = beta * to_f64(&s.coupling);
            let sum: f64 = s
                .shared
                .iter()
                .enumerate()
                .map(|(pos, &c)| pos as f64 * (2.0 * bj * c as f64).exp_m1())
                .sum();
            3.0 * (s.neighbors.len() - 1) as f64 * (2.0 * bj * s.supports.len() as f64).exp() * sum
        })
        .collect();
    Ok(report(KappaVariant::Simplified, beta, per_site))
}

/// `w_α = Σ_{k ∈ e(α_j)} J_k` for α ∈ {I, X, Y, Z}.
fn flip_weights(model: &StabilizerModel, j: usize) -> [f64; 4] {
    PauliKind::ALL.map(|a| {
        to_f64(
            &model
                .site_syndrome(j, a)
                .bits()
                .ones()
                .map(|k| model.couplings()[k])
                .sum::<Rational>(),
        )
    })
}

/// `‖γ_j‖² = (¼ Σ_α e^{-2β w_α})^{-1}`.
fn gamma_norm_sq(model: &StabilizerModel, j: usize, beta: f64) -> f64 {
    let w = flip_weights(model, j);
    1.0 / (0.25 * w.iter().map(|&x| (-2.0 * beta * x).exp()).sum::<f64>())
}

pub fn kappa_proposition(model: &StabilizerModel, beta: f64) -> Result<KappaReport> {
    check_beta(beta)?;
    let adj = adjacency(model);
    let per_site = adj
        .sites
        .iter()
        .map(|s| {
            let sum: f64 = s
                .neighbors
                .iter()
                .enumerate()
                .skip(1)
                .map(|(pos, &m)| {
                    pos as f64 * (2.0 * beta * to_f64(&epsilon_pair(model, m, s.site))).exp_m1()
                })
                .sum();
            3.0 * (s.neighbors.len() - 1) as f64 * gamma_norm_sq(model, s.site, beta) * sum
        })
        .collect();
    Ok(report(KappaVariant::Proposition, beta, per_site))
}

/// Heat-bath weights `G_j` over local patterns of the generators in S_j.
struct LocalG<'a> {
    model: &'a StabilizerModel,
    /// S_j
    gens: &'a [usize],
    /// For α ∈ {I,X,Y,Z}: mask over `gens` of flipped generators.
    flips: [u64; 4],
    beta: f64,
}

impl<'a> LocalG<'a> {
    fn new(model: &'a StabilizerModel, j: usize, gens: &'a [usize], beta: f64) -> Self {
        let flips = PauliKind::ALL.map(|a| local_mask(model.site_syndrome(j, a).bits(), gens));
        LocalG {
            model,
            gens,
            flips,
            beta,
        }
    }

    /// `G_j(a) = (¼ Σ_α e^{βω^α(a)})^{-1/2}` for a local pattern `a`.
    fn g(&self, a: u64) -> f64 {
        let scaled = self.model.scaled_couplings();
        let s: f64 = self
            .flips
            .iter()
            .map(|&mask| {
                let mut units = 0i128;
                for (i, &k) in self.gens.iter().enumerate() {
                    if (mask >> i) & 1 == 1 {
                        let j2 = 2 * scaled[k];
                        units += if (a >> i) & 1 == 1 { j2 } else { -j2 };
                    }
                }
                (self.beta * self.model.units_to_f64(units)).exp()
            })
            .sum();
        (0.25 * s).powf(-0.5)
    }
}

fn local_mask(bits: &crate::bits::Bits, gens: &[usize]) -> u64 {
    gens.iter()
        .enumerate()
        .filter(|(_, &k)| bits.get(k))
        .fold(0, |acc, (i, _)| acc | (1 << i))
}

/// Exact `‖γ_j‖` and `‖∂_m γ_j‖` for every `m ∈ N_j` (position 0 is j).
pub fn gamma_norms(
    model: &StabilizerModel,
    site: &SiteNeighborhood,
    beta: f64,
) -> Result<(f64, Vec<f64>)> {
    let gens = &site.supports;
    if gens.len() >= 64 || (1usize << gens.len()) > LOCAL_PATTERN_CAP {
        return Err(Error::Resource(format!(
            "site {} touches {} generators; local pattern enumeration is capped at 2^20",
            site.site,
            gens.len()
        )));
    }
    let local = LocalG::new(model, site.site, gens, beta);
    let patterns = 1u64 << gens.len();
    let g: Vec<f64> = (0..patterns).map(|a| local.g(a)).collect();
    let norm = g.iter().copied().fold(0.0, f64::max);
    let derivs = site
        .neighbors
        .iter()
        .map(|&m| {
            let taus = PauliKind::ALL.map(|t| local_mask(model.site_syndrome(m, t).bits(), gens));
            (0..patterns)
                .map(|a| {
                    let avg: f64 = taus.iter().map(|&t| g[(a ^ t) as usize]).sum::<f64>() / 4.0;
                    (g[a as usize] - avg).abs()
                })
                .fold(0.0, f64::max)
        })
        .collect();
    Ok((norm, derivs))
}

/// `κ_num = max_j 4(|N_j|-1) ‖γ_j‖ Σ_m pos(m) ‖∂_m γ_j‖` with exact norms.
/// With `optimal_order` the sites of N_j \ {j} are arranged by decreasing
/// `‖∂_m γ_j‖`, which minimizes the sum over all admissible orderings.
pub fn kappa_numeric_with(
    model: &StabilizerModel,
    beta: f64,
    optimal_order: bool,
) -> Result<KappaReport> {
    check_beta(beta)?;
    let adj = adjacency(model);
    let per_site = adj
        .sites
        .par_iter()
        .map(|s| {
            let (norm, mut derivs) = gamma_norms(model, s, beta)?;
            if optimal_order {
                derivs[1..].sort_by(|a, b| b.total_cmp(a));
            }
            let sum: f64 = derivs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(pos, d)| pos as f64 * d)
                .sum();
            Ok(4.0 * (s.neighbors.len() - 1) as f64 * norm * sum)
        })
        .collect::<Result<Vec<f64>>>()?;
    Ok(report(KappaVariant::Numeric, beta, per_site))
}

pub fn kappa_numeric(model: &StabilizerModel, beta: f64) -> Result<KappaReport> {
    kappa_numeric_with(model, beta, false)
}

pub fn kappa(model: &StabilizerModel, variant: KappaVariant, beta: f64) -> Result<KappaReport> {
    match variant {
        KappaVariant::Simplified => kappa_simplified(model, beta),
        KappaVariant::Proposition => kappa_proposition(model, beta),
        KappaVariant::Numeric => kappa_numeric(model, beta),
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct CriticalBeta {
    /// `+∞` when κ stays below one for every β.
    pub beta_star: f64,
    /// `κ(β*)`; NaN when β* is infinite.
    pub kappa_at_root: f64,
    pub iterations: usize,
}

impl CriticalBeta {
    pub fn is_finite(&self) -> bool {
        self.beta_star.is_finite()
    }
}

/// Largest β with κ(β) < 1, by bracketing and bisection to absolute
/// tolerance `tol / J`.
pub fn critical_beta(
    model: &StabilizerModel,
    variant: KappaVariant,
    tol: f64,
) -> Result<CriticalBeta> {
    if !(tol > 0.0) {
        return Err(Error::Argument(format!("tolerance must be positive, got {tol}")));
    }
    let adj = adjacency(model);
    let infinite = CriticalBeta {
        beta_star: f64::INFINITY,
        kappa_at_root: f64::NAN,
        iterations: 0,
    };
    if adj.sites.iter().all(|s| s.neighbors.len() <= 1) {
        return Ok(infinite);
    }
    let j = to_f64(&model.max_coupling());
    let tol = tol / j;
    let k = |b: f64| kappa(model, variant, b).map(|r| r.kappa);

    let mut lo = 0.0;
    let mut hi = 1.0 / j;
    let mut iterations = 0;
    while k(hi)? < 1.0 {
        lo = hi;
        hi *= 2.0;
        iterations += 1;
        if hi * j > 1e6 {
            return Ok(infinite);
        }
    }
    while hi - lo > tol {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if k(mid)? < 1.0 {
            lo = mid;
        } else {
            hi = mid;
        }
        iterations += 1;
    }
    Ok(CriticalBeta {
        beta_star: lo,
        kappa_at_root: k(lo)?,
        iterations,
    })
}

/// Root of the first-order expansion `κ_j ≈ 6βJ(|N_j|-1) Σ_{l<m} |S_j∩S_m|`.
pub fn first_order_beta_estimate(model: &StabilizerModel) -> f64 {
    let adj = adjacency(model);
    let slope = adj
        .sites
        .iter()
        .map(|s| {
            let sum: f64 = s
                .shared
                .iter()
                .enumerate()
                .map(|(pos, &c)| (pos * c) as f64)
                .sum();
            6.0 * to_f64(&s.coupling) * (s.neighbors.len() - 1) as f64 * sum
        })
        .fold(0.0, f64::max);
    if slope > 0.0 {
        1.0 / slope
    } else {
        f64::INFINITY
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct HighTempBound {
    /// `½ h_min e^{-2βJS_*} (1 - κ)`, or 0 when κ ≥ 1.
    pub value: f64,
    pub kappa: KappaReport,
    pub h_min: f64,
    /// `S_* = max_j |S_j|` (used in the bound).
    pub s_star: usize,
    /// `min_j |S_j|`, reported for comparison.
    pub s_star_min: usize,
    pub warning: Option<String>,
}

pub fn high_temp_gap_bound(
    model: &StabilizerModel,
    bath: &BathSpec,
    variant: KappaVariant,
) -> Result<HighTempBound> {
    let beta = bath.beta();
    let kappa = kappa(model, variant, beta)?;
    let h_min = bath.h_min(model)?;
    let adj = adjacency(model);
    let s_star = adj.s_star_max();
    let j = to_f64(&model.max_coupling());
    let prefactor = 0.5 * h_min * (-2.0 * beta * j * s_star as f64).exp();
    let (value, warning) = if kappa.kappa < 1.0 {
        (prefactor * (1.0 - kappa.kappa), None)
    } else {
        (
            0.0,
            Some(format!(
                "κ = {:.6e} ≥ 1 at β = {beta}; the high-temperature bound is vacuous",
                kappa.kappa
            )),
        )
    };
    Ok(HighTempBound {
        value,
        kappa,
        h_min,
        s_star,
        s_star_min: adj.s_star_min(),
        warning,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model_io::{build_ising, build_toric};

    fn single_qubit() -> StabilizerModel {
        StabilizerModel::new(1, vec!["Z".parse().unwrap()], vec![Rational::from_integer(1)])
            .unwrap()
    }

    #[test]
    fn ising_2d_neighborhoods() {
        let m = build_ising(2, 4, true).unwrap();
        for s in adjacency(&m).sites {
            assert_eq!(s.neighbors.len(), 5);
            assert_eq!(s.supports.len(), 4);
            assert_eq!(s.shared[0], 4);
            assert!(s.shared[1..].iter().all(|&c| c == 1));
        }
    }

    #[test]
    fn chain_interior_site() {
        let m = build_ising(1, 5, false).unwrap();
        let adj = adjacency(&m);
        assert_eq!(adj.sites[2].neighbors, vec![2, 1, 3]);
        assert_eq!(adj.sites[2].supports.len(), 2);
        assert_eq!(adj.sites[0].neighbors.len(), 2);
    }

    #[test]
    fn toric_links_touch_four_generators() {
        let m = build_toric(2).unwrap();
        assert!(adjacency(&m).sites.iter().all(|s| s.supports.len() == 4));
    }

    #[test]
    fn epsilon_pair_values() {
        let m = build_ising(2, 3, true).unwrap();
        assert_eq!(epsilon_pair(&m, 1, 0), Rational::from_integer(1));
        let chain = build_ising(1, 5, false).unwrap();
        assert_eq!(epsilon_pair(&chain, 4, 0), Rational::from_integer(0));
        let adj = adjacency(&m);
        for s in &adj.sites {
            for (&mm, &c) in s.neighbors.iter().zip(&s.shared) {
                assert!(epsilon_pair(&m, mm, s.site) <= Rational::from_integer(c as i128));
            }
        }
    }

    #[test]
    fn all_variants_vanish_at_zero() {
        for m in [build_ising(2, 3, true).unwrap(), build_toric(2).unwrap()] {
            for v in KappaVariant::ALL {
                assert_eq!(kappa(&m, v, 0.0).unwrap().kappa, 0.0);
            }
        }
    }

    #[test]
    fn single_qubit_is_trivial() {
        let m = single_qubit();
        for v in KappaVariant::ALL {
            assert_eq!(kappa(&m, v, 2.0).unwrap().kappa, 0.0);
            assert!(critical_beta(&m, v, 1e-12).unwrap().beta_star.is_infinite());
        }
        assert!(first_order_beta_estimate(&m).is_infinite());
    }

    #[test]
    fn dominance_chain() {
        for m in [
            build_ising(2, 3, true).unwrap(),
            build_ising(1, 4, false).unwrap(),
            build_toric(2).unwrap(),
        ] {
            for beta in [0.001, 0.01, 0.05, 0.2] {
                let s = kappa_simplified(&m, beta).unwrap().kappa;
                let p = kappa_proposition(&m, beta).unwrap().kappa;
                let n = kappa_numeric(&m, beta).unwrap().kappa;
                let o = kappa_numeric_with(&m, beta, true).unwrap().kappa;
                assert!(o <= n + 1e-15 && n <= p * (1.0 + 1e-12) && p <= s * (1.0 + 1e-12));
            }
        }
    }

    #[test]
    fn simplified_ising_closed_form() {
        let m = build_ising(2, 4, true).unwrap();
        for beta in [1e-3f64, 1e-2, 1e-1] {
            let want = 120.0 * (8.0 * beta).exp() * (2.0 * beta).exp_m1();
            let got = kappa_simplified(&m, beta).unwrap().kappa;
            assert!(((got - want) / want).abs() <= 1e-12);
        }
    }

    #[test]
    fn critical_beta_brackets_ising() {
        let m = build_ising(2, 4, true).unwrap();
        let r = critical_beta(&m, KappaVariant::Simplified, 1e-12).unwrap();
        assert!((248.0..=250.0).contains(&(1.0 / r.beta_star)));
        assert!((r.kappa_at_root - 1.0).abs() <= 1e-9);
        assert!((first_order_beta_estimate(&m) - 1.0 / 240.0).abs() < 1e-15);
    }

    #[test]
    fn theorem_bound_at_infinite_temperature() {
        let m = build_ising(1, 3, false).unwrap();
        let bath = BathSpec::glauber(0.0).unwrap();
        let b = high_temp_gap_bound(&m, &bath, KappaVariant::Simplified).unwrap();
        assert_eq!(b.value, 0.25);
        assert!(b.warning.is_none());
        let hot = BathSpec::glauber(5.0).unwrap();
        let b = high_temp_gap_bound(&m, &hot, KappaVariant::Simplified).unwrap();
        assert_eq!(b.value, 0.0);
        assert!(b.warning.is_some());
    }
}
