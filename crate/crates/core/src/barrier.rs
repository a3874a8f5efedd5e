//! Pauli paths, energy penalties and the generalized energy barrier.
//!
//! For a Pauli `η` and an ordering Γ the path `η_0 = I, η_1, …, η_{l*} = η`
//! switches on η's factors one (site, axis) slot at a time. Only the
//! generators commuting with η itself (the set G_η) are counted: the
//! penalty is `2J · max_l #{g ∈ G_η : g anticommutes with η_l}`.

use num_traits::Zero;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::bits::Bits;
use crate::error::{Error, Result};
use crate::model::{Rational, StabilizerModel};
use crate::model_io::{Axis, SiteOrdering};
use crate::pauli::{PauliKind, PauliOperator};

/// Default cap on `4^N` for exhaustive enumeration.
pub const DEFAULT_EXHAUSTIVE_CAP: u64 = 1 << 26;

/// Largest model handled by [`generalized_barrier_exact`].
pub const EXACT_BARRIER_MAX_QUBITS: usize = 4;

#[derive(Debug, Clone, PartialEq)]
pub struct PenaltyResult {
    pub penalty: Rational,
    /// First step `l` at which the maximum is reached.
    pub argmax_step: usize,
    pub violated_count: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PenaltyMode {
    Exhaustive { cap: u64 },
    Sampled { count: u64, seed: u64 },
}

#[derive(Debug, Clone, PartialEq)]
pub struct MaxPenalty {
    pub penalty: Rational,
    pub violated_count: usize,
    pub witness: PauliOperator,
    pub argmax_step: usize,
    /// Number of Paulis evaluated.
    pub evaluated: u64,
    /// True for exhaustive runs; sampled values are lower bounds.
    pub exact: bool,
}

fn check_dims(model: &StabilizerModel, n: usize) -> Result<()> {
    if n != model.n_qubits() {
        return Err(Error::Dimension {
            expected: model.n_qubits(),
            found: n,
        });
    }
    Ok(())
}

/// Axis component of `η` at `site`.
fn has_component(eta: &PauliOperator, site: usize, axis: Axis) -> bool {
    match axis {
        Axis::Z => eta.z_bits().get(site),
        Axis::X => eta.x_bits().get(site),
    }
}

pub fn pauli_path(eta: &PauliOperator, gamma: &SiteOrdering) -> Result<Vec<PauliOperator>> {
    if eta.n_qubits() != gamma.n_qubits() {
        return Err(Error::Dimension {
            expected: gamma.n_qubits(),
            found: eta.n_qubits(),
        });
    }
    let mut cur = PauliOperator::identity(eta.n_qubits());
    let mut path = Vec::with_capacity(gamma.l_star() + 1);
    path.push(cur.clone());
    for &(site, axis) in gamma.slots() {
        if has_component(eta, site, axis) {
            let kind = match axis {
                Axis::Z => PauliKind::Z,
                Axis::X => PauliKind::X,
            };
            cur.compose_assign(&PauliOperator::single(eta.n_qubits(), site, kind));
        }
        path.push(cur.clone());
    }
    Ok(path)
}

/// Syndromes of single-site Z and X per site, as packed words.
struct SlotTable {
    words: usize,
    z: Vec<Vec<u64>>,
    x: Vec<Vec<u64>>,
    two_j: Rational,
}

impl SlotTable {
    fn new(model: &StabilizerModel) -> Self {
        let m = model.n_generators();
        let words = m.div_ceil(64).max(1);
        let pack = |b: &Bits| {
            let mut w = b.words().to_vec();
            w.resize(words, 0);
            w
        };
        SlotTable {
            words,
            z: (0..model.n_qubits())
                .map(|s| pack(model.site_syndrome(s, PauliKind::Z).bits()))
                .collect(),
            x: (0..model.n_qubits())
                .map(|s| pack(model.site_syndrome(s, PauliKind::X).bits()))
                .collect(),
            two_j: model.max_coupling() * 2,
        }
    }

    fn slot(&self, site: usize, axis: Axis) -> &[u64] {
        match axis {
            Axis::Z => &self.z[site],
            Axis::X => &self.x[site],
        }
    }

    /// (max violated count, first step reaching it) along the path of
    /// the Pauli whose components are given by `x(site)`, `z(site)`.
    fn evaluate(
        &self,
        gamma: &SiteOrdering,
        x: impl Fn(usize) -> bool,
        z: impl Fn(usize) -> bool,
        scratch: &mut Vec<u64>,
        commuting: &mut Vec<u64>,
    ) -> (usize, usize) {
        commuting.clear();
        commuting.resize(self.words, 0);
        for site in 0..self.z.len() {
            if x(site) {
                xor_into(commuting, &self.x[site]);
            }
            if z(site) {
                xor_into(commuting, &self.z[site]);
            }
        }
        for w in commuting.iter_mut() {
            *w = !*w;
        }
        scratch.clear();
        scratch.resize(self.words, 0);
        let (mut best, mut best_step) = (0usize, 0usize);
        for (l, &(site, axis)) in gamma.slots().iter().enumerate() {
            let on = match axis {
                Axis::Z => z(site),
                Axis::X => x(site),
            };
            if !on {
                continue;
            }
            xor_into(scratch, self.slot(site, axis));
            let count: usize = scratch
                .iter()
                .zip(commuting.iter())
                .map(|(a, b)| (a & b).count_ones() as usize)
                .sum();
            if count > best {
                best = count;
                best_step = l + 1;
            }
        }
        (best, best_step)
    }
}

#[inline]
fn xor_into(acc: &mut [u64], v: &[u64]) {
    for (a, b) in acc.iter_mut().zip(v) {
        *a ^= b;
    }
}

pub fn energy_penalty(
    model: &StabilizerModel,
    eta: &PauliOperator,
    gamma: &SiteOrdering,
) -> Result<PenaltyResult> {
    check_dims(model, eta.n_qubits())?;
    check_dims(model, gamma.n_qubits())?;
    let table = SlotTable::new(model);
    let (count, step) = table.evaluate(
        gamma,
        |s| eta.x_bits().get(s),
        |s| eta.z_bits().get(s),
        &mut Vec::new(),
        &mut Vec::new(),
    );
    Ok(PenaltyResult {
        penalty: table.two_j * count as i128,
        argmax_step: step,
        violated_count: count,
    })
}

pub fn max_penalty(
    model: &StabilizerModel,
    gamma: &SiteOrdering,
    mode: PenaltyMode,
) -> Result<MaxPenalty> {
    check_dims(model, gamma.n_qubits())?;
    match mode {
        PenaltyMode::Exhaustive { cap } => max_penalty_exhaustive(model, gamma, cap),
        PenaltyMode::Sampled { count, seed } => max_penalty_sampled(model, gamma, count, seed),
    }
}

fn max_penalty_exhaustive(
    model: &StabilizerModel,
    gamma: &SiteOrdering,
    cap: u64,
) -> Result<MaxPenalty> {
    let n = model.n_qubits();
    let total = if 2 * n < 64 { 1u64 << (2 * n) } else { u64::MAX };
    if 2 * n >= 64 || total > cap {
        return Err(Error::Resource(format!(
            "exhaustive enumeration of 4^{n} Paulis exceeds the cap of {cap}; use sampled mode (--samples/--seed)"
        )));
    }
    let table = SlotTable::new(model);
    const CHUNK: u64 = 1 << 12;
    let chunks = total.div_ceil(CHUNK);
    // (count, index, step); ties resolve to the smallest index.
    let best = (0..chunks)
        .into_par_iter()
        .map(|c| {
            let mut scratch = Vec::new();
            let mut commuting = Vec::new();
            let mut best = (0usize, 0u64, 0usize);
            for idx in c * CHUNK..((c + 1) * CHUNK).min(total) {
                let (count, step) = table.evaluate(
                    gamma,
                    |s| (idx >> s) & 1 == 1,
                    |s| (idx >> (n + s)) & 1 == 1,
                    &mut scratch,
                    &mut commuting,
                );
                if count > best.0 {
                    best = (count, idx, step);
                }
            }
            best
        })
        .reduce(
            || (0, 0, 0),
            |a, b| {
                if b.0 > a.0 || (b.0 == a.0 && b.1 < a.1) {
                    b
                } else {
                    a
                }
            },
        );
    Ok(MaxPenalty {
        penalty: table.two_j * best.0 as i128,
        violated_count: best.0,
        witness: PauliOperator::from_index(n, best.1),
        argmax_step: best.2,
        evaluated: total,
        exact: true,
    })
}

/// Draws the `i`-th sampled Pauli: half uniform nonidentity strings, a
/// quarter products of random generator subsets, a quarter strings of
/// weight at most four.
fn sample_pauli(model: &StabilizerModel, rng: &mut ChaCha8Rng, i: u64) -> PauliOperator {
    let n = model.n_qubits();
    match i % 4 {
        0 | 1 => loop {
            let mut p = PauliOperator::identity(n);
            for s in 0..n {
                p.set(s, PauliKind::ALL[rng.random_range(0..4)]);
            }
            if !p.is_identity() {
                return p;
            }
        },
        2 => {
            let mut p = PauliOperator::identity(n);
            for g in model.generators() {
                if rng.random_bool(0.5) {
                    p.compose_assign(g);
                }
            }
            p
        }
        _ => {
            let mut p = PauliOperator::identity(n);
            let w = rng.random_range(1..=n.min(4));
            for _ in 0..w {
                let s = rng.random_range(0..n);
                p.set(s, PauliKind::NONTRIVIAL[rng.random_range(0..3)]);
            }
            p
        }
    }
}

fn max_penalty_sampled(
    model: &StabilizerModel,
    gamma: &SiteOrdering,
    count: u64,
    seed: u64,
) -> Result<MaxPenalty> {
    if count == 0 {
        return Err(Error::Argument("sample count must be positive".into()));
    }
    let n = model.n_qubits();
    let table = SlotTable::new(model);
    const CHUNK: u64 = 1 << 12;
    let chunks = count.div_ceil(CHUNK);
    // Each chunk draws from its own ChaCha stream so the result does not
    // depend on how rayon partitions the work.
    let best = (0..chunks)
        .into_par_iter()
        .map(|c| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream(c);
            let mut scratch = Vec::new();
            let mut commuting = Vec::new();
            let mut best: (usize, u64, usize, Option<PauliOperator>) = (0, u64::MAX, 0, None);
            for i in c * CHUNK..((c + 1) * CHUNK).min(count) {
                let eta = sample_pauli(model, &mut rng, i);
                let (k, step) = table.evaluate(
                    gamma,
                    |s| eta.x_bits().get(s),
                    |s| eta.z_bits().get(s),
                    &mut scratch,
                    &mut commuting,
                );
                if best.3.is_none() || k > best.0 {
                    best = (k, i, step, Some(eta));
                }
            }
            best
        })
        .reduce(
            || (0, u64::MAX, 0, None),
            |a, b| {
                if b.3.is_some() && (a.3.is_none() || b.0 > a.0 || (b.0 == a.0 && b.1 < a.1)) {
                    b
                } else {
                    a
                }
            },
        );
    Ok(MaxPenalty {
        penalty: table.two_j * best.0 as i128,
        violated_count: best.0,
        witness: best.3.unwrap_or_else(|| PauliOperator::identity(n)),
        argmax_step: best.2,
        evaluated: count,
        exact: false,
    })
}

/// Exact generalized energy barrier `min_Γ max_η ε_Γ(η)` by branch and
/// bound over slot sequences; returns the value and an optimal ordering.
pub fn generalized_barrier_exact(model: &StabilizerModel) -> Result<(Rational, SiteOrdering)> {
    let n = model.n_qubits();
    if n > EXACT_BARRIER_MAX_QUBITS {
        return Err(Error::Resource(format!(
            "exact barrier search is limited to {EXACT_BARRIER_MAX_QUBITS} qubits, model has {n}"
        )));
    }
    if model.n_generators() > 64 {
        return Err(Error::Resource(
            "exact barrier search supports at most 64 generators".into(),
        ));
    }
    let table = SlotTable::new(model);
    let n_paulis = 1usize << (2 * n);
    let commuting: Vec<u64> = (0..n_paulis)
        .map(|idx| {
            let mut s = 0u64;
            for site in 0..n {
                if (idx >> site) & 1 == 1 {
                    s ^= table.x[site][0];
                }
                if (idx >> (n + site)) & 1 == 1 {
                    s ^= table.z[site][0];
                }
            }
            !s
        })
        .collect();
    let slots: Vec<(usize, Axis)> = (0..n)
        .flat_map(|s| [(s, Axis::Z), (s, Axis::X)])
        .collect();

    let lex = SiteOrdering::lexicographic(n);
    let mut best_count = max_penalty_exhaustive(model, &lex, u64::MAX)?.violated_count;
    let mut best_order = lex.slots().to_vec();

    struct Search<'a> {
        n: usize,
        table: &'a SlotTable,
        slots: &'a [(usize, Axis)],
        commuting: &'a [u64],
        best_count: &'a mut usize,
        best_order: &'a mut Vec<(usize, Axis)>,
    }

    impl Search<'_> {
        fn dfs(&mut self, used: u32, order: &mut Vec<(usize, Axis)>, state: &[u64], worst: usize) {
            if worst >= *self.best_count {
                return;
            }
            if order.len() == self.slots.len() {
                *self.best_count = worst;
                *self.best_order = order.clone();
                return;
            }
            for (i, &(site, axis)) in self.slots.iter().enumerate() {
                if used & (1 << i) != 0 {
                    continue;
                }
                let bit = match axis {
                    Axis::X => site,
                    Axis::Z => self.n + site,
                };
                let flip = self.table.slot(site, axis)[0];
                let mut next = state.to_vec();
                let mut w = worst;
                for (idx, s) in next.iter_mut().enumerate() {
                    if (idx >> bit) & 1 == 1 {
                        *s ^= flip;
                        w = w.max((*s & self.commuting[idx]).count_ones() as usize);
                    }
                }
                order.push((site, axis));
                self.dfs(used | (1 << i), order, &next, w);
                order.pop();
            }
        }
    }

    if best_count > 0 {
        let mut search = Search {
            n,
            table: &table,
            slots: &slots,
            commuting: &commuting,
            best_count: &mut best_count,
            best_order: &mut best_order,
        };
        search.dfs(0, &mut Vec::new(), &vec![0u64; n_paulis], 0);
    }
    Ok((
        table.two_j * best_count as i128,
        SiteOrdering::new(n, best_order)?,
    ))
}

/// Low-temperature bound `h_min / (4 l_*) · e^{-2β ε̄}`.
pub fn low_temp_gap_bound(epsilon_bar: &Rational, beta: f64, h_min: f64, l_star: usize) -> f64 {
    use num_traits::ToPrimitive;
    let eps = epsilon_bar.to_f64().unwrap_or(f64::NAN);
    let decay = if epsilon_bar.is_zero() {
        1.0
    } else {
        (-2.0 * beta * eps).exp()
    };
    h_min / (4.0 * l_star as f64) * decay
}
