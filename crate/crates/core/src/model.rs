//! Stabilizer Hamiltonians `H = -Σ_k J_k g_k` with exact rational couplings.
//!
//! Eigenspaces are labelled by syndromes `b ∈ {0,1}^M` with energy
//! `ε(b) = -Σ_k J_k (-1)^{b_k}`. Only syndromes in the image of the
//! syndrome map are realized; for dependent generator sets (toric code,
//! periodic lattices) that image is a proper subspace.
//!
//! Energies are tracked as integers over a common denominator so that
//! Bohr frequencies can be grouped by exact equality.

use num_integer::Integer;
use num_rational::Ratio;
use num_traits::{Signed, ToPrimitive, Zero};

use crate::bits::{Bits, Gf2Basis};
use crate::error::{Error, Result};
use crate::pauli::{product_with_phase, PauliKind, PauliOperator, Syndrome};

pub type Rational = Ratio<i128>;

/// Default cap on `rank` for full syndrome enumeration.
pub const DEFAULT_SYNDROME_RANK_CAP: usize = 24;

#[derive(Debug, Clone)]
pub struct StabilizerModel {
    n_qubits: usize,
    generators: Vec<PauliOperator>,
    couplings: Vec<Rational>,
    /// Common denominator of the couplings.
    scale: i128,
    /// `J_k · scale`.
    scaled: Vec<i128>,
    syndrome_space: Gf2Basis,
    generator_space: Gf2Basis,
    site_syndromes: Vec<[Syndrome; 4]>,
    site_generators: Vec<Vec<usize>>,
    name: Option<String>,
    lattice: Option<String>,
}

impl StabilizerModel {
    pub fn new(
        n_qubits: usize,
        generators: Vec<PauliOperator>,
        couplings: Vec<Rational>,
    ) -> Result<Self> {
        if n_qubits == 0 {
            return Err(Error::Validation("model needs at least one qubit".into()));
        }
        if generators.is_empty() {
            return Err(Error::Validation("model needs at least one term".into()));
        }
        if generators.len() != couplings.len() {
            return Err(Error::Validation(format!(
                "{} generators but {} couplings",
                generators.len(),
                couplings.len()
            )));
        }
        for g in &generators {
            if g.n_qubits() != n_qubits {
                return Err(Error::Dimension {
                    expected: n_qubits,
                    found: g.n_qubits(),
                });
            }
        }
        for (k, (g, j)) in generators.iter().zip(&couplings).enumerate() {
            if !j.is_positive() {
                return Err(Error::Validation(format!(
                    "coupling of term {} must be positive, got {}",
                    k + 1,
                    format_rational(j)
                )));
            }
            if g.is_identity() {
                return Err(Error::Validation(format!(
                    "term {} is the identity",
                    k + 1
                )));
            }
        }
        for a in 0..generators.len() {
            for b in a + 1..generators.len() {
                if generators[a].anticommutes_with(&generators[b]) {
                    return Err(Error::Validation(format!(
                        "generators {} and {} do not commute",
                        a + 1,
                        b + 1
                    )));
                }
            }
        }
        check_no_minus_identity(n_qubits, &generators)?;

        let mut scale: i128 = 1;
        for j in &couplings {
            scale = checked_lcm(scale, *j.denom()).ok_or_else(|| {
                Error::Validation("coupling denominators overflow 128-bit arithmetic".into())
            })?;
        }
        let mut scaled = Vec::with_capacity(couplings.len());
        for j in &couplings {
            let v = j
                .numer()
                .checked_mul(scale / j.denom())
                .ok_or_else(|| Error::Validation("coupling too large".into()))?;
            scaled.push(v);
        }
        // Bohr frequencies are sums of up to 2·M scaled couplings.
        let total = scaled
            .iter()
            .try_fold(0i128, |acc, &v| acc.checked_add(v.checked_mul(4)?));
        if total.is_none() {
            return Err(Error::Validation("coupling sum overflows".into()));
        }

        let m = generators.len();
        let mut site_syndromes = Vec::with_capacity(n_qubits);
        for site in 0..n_qubits {
            let entry = PauliKind::ALL.map(|kind| {
                let p = PauliOperator::single(n_qubits, site, kind);
                raw_syndrome(&generators, &p)
            });
            site_syndromes.push(entry);
        }
        let syndrome_space = Gf2Basis::from_vectors(
            m,
            site_syndromes
                .iter()
                .flat_map(|s| [s[1].bits(), s[3].bits()]),
        );
        let generator_space = Gf2Basis::from_vectors(
            2 * n_qubits,
            generators.iter().map(symplectic_vector).collect::<Vec<_>>().iter(),
        );
        let mut site_generators = vec![Vec::new(); n_qubits];
        for (k, g) in generators.iter().enumerate() {
            for s in g.support() {
                site_generators[s].push(k);
            }
        }

        Ok(StabilizerModel {
            n_qubits,
            generators,
            couplings,
            scale,
            scaled,
            syndrome_space,
            generator_space,
            site_syndromes,
            site_generators,
            name: None,
            lattice: None,
        })
    }

    pub fn with_name(mut self, name: impl Into<String>) -> Self {
        self.name = Some(name.into());
        self
    }

    pub fn with_lattice(mut self, lattice: impl Into<String>) -> Self {
        self.lattice = Some(lattice.into());
        self
    }

    pub fn name(&self) -> Option<&str> {
        self.name.as_deref()
    }

    pub fn lattice(&self) -> Option<&str> {
        self.lattice.as_deref()
    }

    #[inline]
    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    /// Number of generators `M`.
    #[inline]
    pub fn n_generators(&self) -> usize {
        self.generators.len()
    }

    pub fn generators(&self) -> &[PauliOperator] {
        &self.generators
    }

    pub fn couplings(&self) -> &[Rational] {
        &self.couplings
    }

    /// GF(2) rank of the generator list.
    pub fn rank(&self) -> usize {
        self.syndrome_space.rank()
    }

    /// `J = max_k J_k`.
    pub fn max_coupling(&self) -> Rational {
        self.couplings.iter().copied().max().expect("non-empty")
    }

    /// Largest coupling among the listed generators (zero when empty).
    pub fn max_coupling_of(&self, gens: impl IntoIterator<Item = usize>) -> Rational {
        gens.into_iter()
            .map(|k| self.couplings[k])
            .max()
            .unwrap_or_else(Rational::zero)
    }

    /// Common denominator used for exact energy arithmetic.
    pub fn energy_scale(&self) -> i128 {
        self.scale
    }

    pub fn scaled_couplings(&self) -> &[i128] {
        &self.scaled
    }

    /// Basis of the realized-syndrome subspace.
    pub fn syndrome_basis(&self) -> &Gf2Basis {
        &self.syndrome_space
    }

    /// Row-reduced generators as 2N-bit symplectic vectors (x then z).
    pub fn generator_basis(&self) -> &Gf2Basis {
        &self.generator_space
    }

    /// Generators whose support contains `site` (the set S_j).
    pub fn generators_on_site(&self, site: usize) -> &[usize] {
        &self.site_generators[site]
    }

    pub fn syndrome(&self, p: &PauliOperator) -> Result<Syndrome> {
        if p.n_qubits() != self.n_qubits {
            return Err(Error::Dimension {
                expected: self.n_qubits,
                found: p.n_qubits(),
            });
        }
        Ok(raw_syndrome(&self.generators, p))
    }

    /// Syndrome of the single-site Pauli `kind` on `site` (precomputed).
    pub fn site_syndrome(&self, site: usize, kind: PauliKind) -> &Syndrome {
        &self.site_syndromes[site][kind as usize]
    }

    pub fn is_realized(&self, b: &Syndrome) -> bool {
        b.len() == self.n_generators() && self.syndrome_space.contains(b.bits())
    }

    /// Coordinates of a realized syndrome in the syndrome basis.
    pub fn syndrome_coordinates(&self, b: &Syndrome) -> Option<u64> {
        self.syndrome_space.coordinates(b.bits())
    }

    pub fn syndrome_from_coordinates(&self, coords: u64) -> Syndrome {
        Syndrome::from_bits(self.syndrome_space.combine(coords))
    }

    /// All `2^rank` realized syndromes, indexed by their coordinates.
    pub fn realized_syndromes(&self, rank_cap: usize) -> Result<Vec<Syndrome>> {
        let r = self.rank();
        if r > rank_cap || r > 62 {
            return Err(Error::Resource(format!(
                "syndrome rank {r} exceeds enumeration cap {rank_cap}"
            )));
        }
        Ok((0..1u64 << r)
            .map(|c| self.syndrome_from_coordinates(c))
            .collect())
    }

    /// `ε(b)` as an exact rational.
    pub fn energy(&self, b: &Syndrome) -> Rational {
        Rational::new(self.energy_units(b.bits()), self.scale)
    }

    /// `ε(b) · scale`.
    pub fn energy_units(&self, b: &Bits) -> i128 {
        self.scaled
            .iter()
            .enumerate()
            .map(|(k, &j)| if b.get(k) { j } else { -j })
            .sum()
    }

    /// Ground energy `-Σ_k J_k`.
    pub fn ground_energy(&self) -> Rational {
        -self.couplings.iter().copied().sum::<Rational>()
    }

    /// `ω^p(a) = ε(a) - ε(a ⊕ e(p))` for a realized syndrome `a`.
    pub fn bohr_frequency(&self, a: &Syndrome, p: &PauliOperator) -> Result<Rational> {
        if !self.is_realized(a) {
            return Err(Error::Argument(format!(
                "syndrome {a} is not realized by the model"
            )));
        }
        self.bohr_frequency_unrealized(a, p)
    }

    /// Same as [`Self::bohr_frequency`] but accepts any syndrome pattern.
    pub fn bohr_frequency_unrealized(&self, a: &Syndrome, p: &PauliOperator) -> Result<Rational> {
        if a.len() != self.n_generators() {
            return Err(Error::Argument(format!(
                "syndrome has {} bits, model has {} generators",
                a.len(),
                self.n_generators()
            )));
        }
        let e = self.syndrome(p)?;
        Ok(Rational::new(
            self.bohr_units(a.bits(), e.bits()),
            self.scale,
        ))
    }

    /// `ω · scale` for syndrome bits `a` and excitation `e`.
    pub fn bohr_units(&self, a: &Bits, e: &Bits) -> i128 {
        e.ones()
            .map(|k| {
                let j = 2 * self.scaled[k];
                if a.get(k) {
                    j
                } else {
                    -j
                }
            })
            .sum()
    }

    pub fn units_to_f64(&self, units: i128) -> f64 {
        Rational::new(units, self.scale).to_f64().unwrap_or(f64::NAN)
    }

    pub fn units_to_rational(&self, units: i128) -> Rational {
        Rational::new(units, self.scale)
    }

    /// Realized restrictions of syndromes to the generator subset `gens`,
    /// encoded with bit `i` standing for `gens[i]`.
    pub fn local_realized_patterns(&self, gens: &[usize]) -> Vec<u64> {
        assert!(gens.len() <= 30, "local pattern set too large");
        let mut basis: Vec<u64> = Vec::new();
        for row in self.syndrome_space.rows() {
            let mut v = 0u64;
            for (i, &k) in gens.iter().enumerate() {
                if row.get(k) {
                    v |= 1 << i;
                }
            }
            let mut r = v;
            for &b in &basis {
                r = r.min(r ^ b);
            }
            if r != 0 {
                basis.push(r);
                basis.sort_unstable_by(|a, b| b.cmp(a));
            }
        }
        let mut out = Vec::with_capacity(1 << basis.len());
        for c in 0..1u64 << basis.len() {
            let mut v = 0;
            for (i, &b) in basis.iter().enumerate() {
                if (c >> i) & 1 == 1 {
                    v ^= b;
                }
            }
            out.push(v);
        }
        out.sort_unstable();
        out
    }
}

fn raw_syndrome(generators: &[PauliOperator], p: &PauliOperator) -> Syndrome {
    let mut bits = Bits::zeros(generators.len());
    for (k, g) in generators.iter().enumerate() {
        if p.anticommutes_with(g) {
            bits.set(k, true);
        }
    }
    Syndrome::from_bits(bits)
}

fn symplectic_vector(p: &PauliOperator) -> Bits {
    let n = p.n_qubits();
    let mut v = Bits::zeros(2 * n);
    for j in p.x_bits().ones() {
        v.set(j, true);
    }
    for j in p.z_bits().ones() {
        v.set(n + j, true);
    }
    v
}

/// Inverse of the x-then-z layout used by [`StabilizerModel::generator_basis`].
pub fn pauli_from_symplectic(v: &Bits) -> PauliOperator {
    let n = v.len() / 2;
    let mut x = Bits::zeros(n);
    let mut z = Bits::zeros(n);
    for i in v.ones() {
        if i < n {
            x.set(i, true);
        } else {
            z.set(i - n, true);
        }
    }
    PauliOperator::from_bits(x, z)
}

/// Rejects generator sets whose group contains `-I`: every GF(2)
/// dependency among the generators must multiply to `+I`.
fn check_no_minus_identity(n: usize, generators: &[PauliOperator]) -> Result<()> {
    let m = generators.len();
    // Rows: (symplectic vector, combination of original generators).
    let mut rows: Vec<(Bits, Bits, usize)> = Vec::new();
    for (k, g) in generators.iter().enumerate() {
        let mut v = symplectic_vector(g);
        let mut combo = Bits::zeros(m);
        combo.set(k, true);
        for (row, rc, p) in &rows {
            if v.get(*p) {
                v.xor_assign(row);
                combo.xor_assign(rc);
            }
        }
        let pivot = v.ones().next();
        match pivot {
            Some(p) => rows.push((v, combo, p)),
            None => {
                let factors: Vec<&PauliOperator> = combo.ones().map(|i| &generators[i]).collect();
                let (phase, prod) = product_with_phase(n, factors);
                debug_assert!(prod.is_identity());
                if phase != 0 {
                    let idx: Vec<String> = combo.ones().map(|i| (i + 1).to_string()).collect();
                    return Err(Error::Validation(format!(
                        "generators {} multiply to -I; the stabilizer group must exclude -I",
                        idx.join(", ")
                    )));
                }
            }
        }
    }
    Ok(())
}

fn checked_lcm(a: i128, b: i128) -> Option<i128> {
    let g = a.gcd(&b);
    (a / g).checked_mul(b)
}

/// Parses a coupling written as an integer, a decimal (`0.25`, `1e-3`)
/// or a fraction `p/q`.
pub fn parse_rational(s: &str) -> Option<Rational> {
    let s = s.trim();
    if s.is_empty() {
        return None;
    }
    if let Some((p, q)) = s.split_once('/') {
        let p: i128 = p.trim().parse().ok()?;
        let q: i128 = q.trim().parse().ok()?;
        if q == 0 {
            return None;
        }
        return Some(Rational::new(p, q));
    }
    let (mantissa, exponent) = match s.find(['e', 'E']) {
        Some(i) => (&s[..i], s[i + 1..].parse::<i32>().ok()?),
        None => (s, 0),
    };
    let (negative, mantissa) = match mantissa.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, mantissa.strip_prefix('+').unwrap_or(mantissa)),
    };
    let (int_part, frac_part) = mantissa.split_once('.').unwrap_or((mantissa, ""));
    if int_part.is_empty() && frac_part.is_empty() {
        return None;
    }
    if !int_part.chars().chain(frac_part.chars()).all(|c| c.is_ascii_digit()) {
        return None;
    }
    let digits = format!("{int_part}{frac_part}");
    let mut numer: i128 = digits.trim_start_matches('0').parse().unwrap_or(0);
    if digits.trim_start_matches('0').len() > 30 {
        return None;
    }
    let mut denom_pow = frac_part.len() as i32 - exponent;
    if denom_pow < 0 {
        numer = numer.checked_mul(10i128.checked_pow((-denom_pow) as u32)?)?;
        denom_pow = 0;
    }
    let denom = 10i128.checked_pow(denom_pow as u32)?;
    if negative {
        numer = -numer;
    }
    Some(Rational::new(numer, denom))
}

/// Canonical text form: `p` for integers, `p/q` otherwise.
pub fn format_rational(r: &Rational) -> String {
    if r.is_integer() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}
