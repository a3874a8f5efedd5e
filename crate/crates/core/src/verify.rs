//! The inequality ledger: every bound the crate computes, checked against
//! the exact gaps of the same model and bath.

use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::barrier::{
    generalized_barrier_exact, low_temp_gap_bound, max_penalty, PenaltyMode,
    DEFAULT_EXHAUSTIVE_CAP, EXACT_BARRIER_MAX_QUBITS,
};
use crate::bath::BathSpec;
use crate::error::Result;
use crate::high_temp::{high_temp_gap_bound, kappa_numeric, KappaVariant};
use crate::liouvillian::checks::random_observable;
use crate::liouvillian::coset::reassemble_dense;
use crate::liouvillian::{
    compute_gap, dirichlet_blocks, dirichlet_dense_from_generator, ergodicity_check,
    generator_dense, poincare_check, structural_residuals, tau_and_r, DenseGibbs, Family,
    GapMethod, DEFAULT_DENSE_CAP,
};
use crate::model::StabilizerModel;
use crate::model_io::{builtin_ordering, toric_size, Axis, SiteOrdering};

/// Largest model for which the coset blocks are reassembled densely.
pub const ORACLE_MAX_QUBITS: usize = 4;

/// Slack for inequalities between independently computed floats.
pub const RELATIVE_SLACK: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Status {
    Pass,
    Fail,
    Skipped,
}

impl Status {
    pub fn name(self) -> &'static str {
        match self {
            Status::Pass => "pass",
            Status::Fail => "fail",
            Status::Skipped => "skipped",
        }
    }
}

/// One checked inequality `value ≥ bound` (or `value ≤ bound` for
/// residuals); `margin` is positive when the check passes.
#[derive(Debug, Clone, PartialEq)]
pub struct LedgerEntry {
    pub name: String,
    pub status: Status,
    pub value: f64,
    pub bound: f64,
    pub margin: f64,
    pub note: Option<String>,
}

impl LedgerEntry {
    fn at_least(name: impl Into<String>, value: f64, bound: f64) -> Self {
        let margin = value - bound;
        let ok = margin >= -RELATIVE_SLACK * bound.abs().max(1e-300);
        LedgerEntry {
            name: name.into(),
            status: if ok { Status::Pass } else { Status::Fail },
            value,
            bound,
            margin,
            note: None,
        }
    }

    fn at_most(name: impl Into<String>, value: f64, bound: f64) -> Self {
        let margin = bound - value;
        LedgerEntry {
            name: name.into(),
            status: if margin >= 0.0 { Status::Pass } else { Status::Fail },
            value,
            bound,
            margin,
            note: None,
        }
    }

    fn skipped(name: impl Into<String>, note: impl Into<String>) -> Self {
        LedgerEntry {
            name: name.into(),
            status: Status::Skipped,
            value: f64::NAN,
            bound: f64::NAN,
            margin: f64::NAN,
            note: Some(note.into()),
        }
    }

    fn with_note(mut self, note: impl Into<String>) -> Self {
        self.note = Some(note.into());
        self
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Ledger {
    pub beta: f64,
    pub gap_davies: f64,
    pub gap_heatbath: f64,
    pub gap_method: GapMethod,
    pub entries: Vec<LedgerEntry>,
}

impl Ledger {
    pub fn all_passed(&self) -> bool {
        self.entries.iter().all(|e| e.status != Status::Fail)
    }

    pub fn failures(&self) -> impl Iterator<Item = &LedgerEntry> {
        self.entries.iter().filter(|e| e.status == Status::Fail)
    }
}

#[derive(Debug, Clone)]
pub struct VerifyOptions {
    /// Orderings tested in the low-temperature bound; empty means
    /// [`default_orderings`].
    pub orderings: Vec<(String, SiteOrdering)>,
    pub poincare_samples: usize,
    pub seed: u64,
    pub ergodicity_times: Vec<f64>,
}

impl Default for VerifyOptions {
    fn default() -> Self {
        VerifyOptions {
            orderings: Vec::new(),
            poincare_samples: 100,
            seed: 0,
            ergodicity_times: vec![0.1, 1.0, 5.0],
        }
    }
}

/// Z-then-X and X-then-Z lexicographic orderings, the toric orderings for
/// toric models, and an optimal ordering for models small enough for the
/// exact barrier search.
pub fn default_orderings(model: &StabilizerModel) -> Result<Vec<(String, SiteOrdering)>> {
    let n = model.n_qubits();
    let mut out = vec![
        ("lex-zx".to_string(), SiteOrdering::lexicographic(n)),
        (
            "lex-xz".to_string(),
            SiteOrdering::new(
                n,
                (0..n)
                    .map(|s| (s, Axis::X))
                    .chain((0..n).map(|s| (s, Axis::Z)))
                    .collect(),
            )?,
        ),
    ];
    if toric_size(model).is_some() {
        for name in ["toric-zx", "toric-xz"] {
            out.push((name.to_string(), builtin_ordering(name, model)?));
        }
    }
    if n <= EXACT_BARRIER_MAX_QUBITS {
        out.push(("optimal".to_string(), generalized_barrier_exact(model)?.1));
    }
    Ok(out)
}

/// Runs every check that fits the model size. Dense-only checks are
/// skipped above the dense cap; gaps then come from the coset blocks.
pub fn verify(model: &StabilizerModel, bath: &BathSpec, options: &VerifyOptions) -> Result<Ledger> {
    let n = model.n_qubits();
    let beta = bath.beta();
    let dense = n <= DEFAULT_DENSE_CAP;
    let method = if dense { GapMethod::Dense } else { GapMethod::Coset };
    let lambda_d = compute_gap(model, bath, Family::Davies, method)?.gap;
    let lambda_q = compute_gap(model, bath, Family::HeatBath, method)?.gap;
    let mut entries = Vec::new();

    if dense {
        let gibbs = DenseGibbs::new(model, beta)?;
        for family in Family::ALL {
            let l = generator_dense(model, bath, family)?;
            let r = structural_residuals(&l, &gibbs);
            entries.push(LedgerEntry::at_most(format!("unitality_{family}"), r.unitality, 1e-10));
            entries.push(LedgerEntry::at_most(format!("fixed_point_{family}"), r.fixed_point, 1e-10));
            entries.push(LedgerEntry::at_most(
                format!("detailed_balance_{family}"),
                r.detailed_balance,
                1e-10,
            ));
            entries.push(LedgerEntry::at_most(
                format!("real_spectrum_{family}"),
                r.spectrum_imaginary,
                1e-9,
            ));
            if n <= ORACLE_MAX_QUBITS {
                let oracle = dirichlet_dense_from_generator(&l, &gibbs);
                let blocks = dirichlet_blocks(model, bath, family)?;
                let diff = max_difference(&reassemble_dense(model, &blocks)?, &oracle);
                entries.push(LedgerEntry::at_most(format!("coset_oracle_{family}"), diff, 1e-10));
            } else {
                entries.push(LedgerEntry::skipped(
                    format!("coset_oracle_{family}"),
                    format!("dense reassembly limited to {ORACLE_MAX_QUBITS} qubits"),
                ));
            }
            let p = poincare_check(model, bath, family, options.poincare_samples, options.seed)?;
            entries.push(
                LedgerEntry::at_least(format!("poincare_{family}"), p.min_margin, -1e-10)
                    .with_note(format!("{} random observables", p.samples)),
            );
        }
    } else {
        for name in ["structural", "coset_oracle", "poincare"] {
            entries.push(LedgerEntry::skipped(
                name,
                format!("dense construction limited to {DEFAULT_DENSE_CAP} qubits"),
            ));
        }
    }

    let h_min = bath.h_min(model)?;
    let orderings = if options.orderings.is_empty() {
        default_orderings(model)?
    } else {
        options.orderings.clone()
    };
    for (name, ordering) in &orderings {
        let mode = PenaltyMode::Exhaustive { cap: DEFAULT_EXHAUSTIVE_CAP };
        match max_penalty(model, ordering, mode) {
            Ok(mp) => {
                let bound = low_temp_gap_bound(&mp.penalty, beta, h_min, ordering.l_star());
                entries.push(LedgerEntry::at_least(format!("eq5[{name}]"), lambda_d, bound));
            }
            Err(e) => entries.push(LedgerEntry::skipped(format!("eq5[{name}]"), e.to_string())),
        }
    }

    let tr = tau_and_r(model, bath)?;
    entries.push(LedgerEntry::at_least("comparison", lambda_d, tr.r * lambda_q));
    entries.push(LedgerEntry::at_least("comparison_constant", tr.r, tr.r_lower));

    let kappa = kappa_numeric(model, beta)?.kappa;
    if kappa < 1.0 {
        entries.push(LedgerEntry::at_least("heatbath_kappa", lambda_q, 1.0 - kappa));
    } else {
        entries.push(LedgerEntry::skipped("heatbath_kappa", format!("κ_num = {kappa} ≥ 1")));
    }
    let thm1 = high_temp_gap_bound(model, bath, KappaVariant::Numeric)?;
    entries.push(LedgerEntry::at_least("thm1", lambda_d, thm1.value));

    if dense && kappa < 1.0 && !options.ergodicity_times.is_empty() {
        let mut rng = ChaCha8Rng::seed_from_u64(options.seed);
        let f = random_observable(n, &mut rng);
        let r = ergodicity_check(model, bath, &f, &options.ergodicity_times, kappa)?;
        let worst = r
            .points
            .iter()
            .map(|p| p.rhs - p.lhs)
            .fold(f64::INFINITY, f64::min);
        let mut e = LedgerEntry::at_least("ergodicity", worst, 0.0);
        e.status = if r.holds { Status::Pass } else { Status::Fail };
        entries.push(e);
    } else {
        entries.push(LedgerEntry::skipped(
            "ergodicity",
            "needs κ_num < 1 and a dense-size model",
        ));
    }

    Ok(Ledger {
        beta,
        gap_davies: lambda_d,
        gap_heatbath: lambda_q,
        gap_method: method,
        entries,
    })
}

fn max_difference(a: &DMatrix<Complex64>, b: &DMatrix<f64>) -> f64 {
    a.iter()
        .zip(b.iter())
        .map(|(x, &y)| (x - Complex64::new(y, 0.0)).norm())
        .fold(0.0, f64::max)
}
