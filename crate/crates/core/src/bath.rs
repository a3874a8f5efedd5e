//! Thermal bath rate functions satisfying the KMS condition
//! `h(-ω) = e^{-βω} h(ω)`.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use num_traits::ToPrimitive;

use crate::error::{Error, Result};
use crate::model::{format_rational, Rational, StabilizerModel};
use crate::pauli::PauliKind;

/// Relative tolerance for the KMS check on custom tables.
pub const KMS_TOLERANCE: f64 = 1e-12;

/// Largest number of generators one single-site Pauli may flip before
/// local Bohr-frequency enumeration gives up.
const LOCAL_PATTERN_CAP: usize = 20;

#[derive(Debug, Clone, PartialEq)]
pub enum RatePreset {
    /// `h(ω) = 1 / (1 + e^{-βω})`
    Glauber,
    /// `h(ω) = min(1, e^{βω})`
    Metropolis,
    /// Explicit rates per Bohr frequency.
    Custom(BTreeMap<Rational, f64>),
}

impl RatePreset {
    pub fn name(&self) -> &'static str {
        match self {
            RatePreset::Glauber => "glauber",
            RatePreset::Metropolis => "metropolis",
            RatePreset::Custom(_) => "custom",
        }
    }
}

impl std::str::FromStr for RatePreset {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "glauber" => Ok(RatePreset::Glauber),
            "metropolis" => Ok(RatePreset::Metropolis),
            other => Err(Error::Argument(format!(
                "unknown bath preset '{other}' (expected glauber or metropolis)"
            ))),
        }
    }
}

impl fmt::Display for RatePreset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct BathSpec {
    beta: f64,
    preset: RatePreset,
}

impl BathSpec {
    pub fn new(beta: f64, preset: RatePreset) -> Result<Self> {
        if !beta.is_finite() || beta < 0.0 {
            return Err(Error::Argument(format!(
                "inverse temperature must be finite and nonnegative, got {beta}"
            )));
        }
        if let RatePreset::Custom(table) = &preset {
            check_custom_table(beta, table)?;
        }
        Ok(BathSpec { beta, preset })
    }

    pub fn glauber(beta: f64) -> Result<Self> {
        Self::new(beta, RatePreset::Glauber)
    }

    pub fn metropolis(beta: f64) -> Result<Self> {
        Self::new(beta, RatePreset::Metropolis)
    }

    pub fn beta(&self) -> f64 {
        self.beta
    }

    pub fn preset(&self) -> &RatePreset {
        &self.preset
    }

    /// `h(ω)`. Custom tables return NaN for frequencies they do not list;
    /// [`BathSpec::check_model`] rules that out for a given model.
    pub fn rate(&self, omega: &Rational) -> f64 {
        match &self.preset {
            RatePreset::Custom(table) => table.get(omega).copied().unwrap_or(f64::NAN),
            _ => self.rate_f64(omega.to_f64().unwrap_or(f64::NAN)),
        }
    }

    /// Preset rate at a floating frequency (custom tables: NaN).
    pub fn rate_f64(&self, omega: f64) -> f64 {
        let x = self.beta * omega;
        match &self.preset {
            RatePreset::Glauber => 1.0 / (1.0 + (-x).exp()),
            RatePreset::Metropolis => x.exp().min(1.0),
            RatePreset::Custom(_) => f64::NAN,
        }
    }

    /// Ensures every realized Bohr frequency of `model` has a rate.
    pub fn check_model(&self, model: &StabilizerModel) -> Result<()> {
        if let RatePreset::Custom(table) = &self.preset {
            for w in realized_bohr_frequencies(model)? {
                if !table.contains_key(&w) {
                    return Err(Error::Validation(format!(
                        "custom rate table has no entry for Bohr frequency {}",
                        format_rational(&w)
                    )));
                }
            }
        }
        Ok(())
    }

    /// Smallest rate over all realized single-site Bohr frequencies.
    pub fn h_min(&self, model: &StabilizerModel) -> Result<f64> {
        self.check_model(model)?;
        let h = realized_bohr_frequencies(model)?
            .iter()
            .map(|w| self.rate(w))
            .fold(f64::INFINITY, f64::min);
        if !(h > 0.0) {
            return Err(Error::Validation(format!(
                "bath rates must be positive, smallest is {h}"
            )));
        }
        Ok(h)
    }
}

fn check_custom_table(beta: f64, table: &BTreeMap<Rational, f64>) -> Result<()> {
    for (w, &h) in table {
        if !(h.is_finite() && h > 0.0) {
            return Err(Error::Validation(format!(
                "rate at ω = {} must be positive and finite",
                format_rational(w)
            )));
        }
        let Some(&h_neg) = table.get(&-*w) else {
            return Err(Error::Validation(format!(
                "rate table lists ω = {} but not its negative",
                format_rational(w)
            )));
        };
        let expected = (-beta * w.to_f64().unwrap_or(f64::NAN)).exp() * h;
        if ((h_neg - expected) / expected).abs() > KMS_TOLERANCE {
            return Err(Error::Validation(format!(
                "rate table violates KMS at ω = {}: h(-ω) = {h_neg}, e^(-βω)h(ω) = {expected}",
                format_rational(w)
            )));
        }
    }
    Ok(())
}

/// All `ω^{α_j}(a)` over sites `j`, nontrivial single-site Paulis and
/// realized syndromes `a` (restricted to the generators `α_j` flips).
pub fn realized_bohr_frequencies(model: &StabilizerModel) -> Result<BTreeSet<Rational>> {
    let mut out = BTreeSet::new();
    for j in 0..model.n_qubits() {
        for kind in PauliKind::NONTRIVIAL {
            let flipped: Vec<usize> = model.site_syndrome(j, kind).bits().ones().collect();
            if flipped.len() > LOCAL_PATTERN_CAP {
                return Err(Error::Resource(format!(
                    "site {j} flips {} generators; local enumeration is capped at {LOCAL_PATTERN_CAP}",
                    flipped.len()
                )));
            }
            let couplings = model.scaled_couplings();
            for pattern in model.local_realized_patterns(&flipped) {
                let units: i128 = flipped
                    .iter()
                    .enumerate()
                    .map(|(i, &k)| {
                        let j2 = 2 * couplings[k];
                        if (pattern >> i) & 1 == 1 {
                            j2
                        } else {
                            -j2
                        }
                    })
                    .sum();
                out.insert(model.units_to_rational(units));
            }
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn single_qubit() -> StabilizerModel {
        StabilizerModel::new(1, vec!["Z".parse().unwrap()], vec![Rational::from_integer(1)])
            .unwrap()
    }

    #[test]
    fn glauber_at_zero_frequency_is_half() {
        let bath = BathSpec::glauber(1.7).unwrap();
        assert_eq!(bath.rate(&Rational::from_integer(0)), 0.5);
    }

    #[test]
    fn presets_satisfy_kms() {
        for bath in [BathSpec::glauber(1.0).unwrap(), BathSpec::metropolis(1.0).unwrap()] {
            for w in [-3.0, -0.5, 0.0, 2.0, 7.25] {
                let lhs = bath.rate_f64(-w);
                let rhs = (-w).exp() * bath.rate_f64(w);
                assert!((lhs - rhs).abs() <= 1e-14 * rhs.max(1e-300), "{w}");
            }
        }
    }

    #[test]
    fn single_qubit_h_min() {
        let m = single_qubit();
        let bath = BathSpec::glauber(1.0).unwrap();
        let expected = 1.0 / (1.0 + 2f64.exp());
        assert!((bath.h_min(&m).unwrap() - expected).abs() < 1e-15);
        let freqs = realized_bohr_frequencies(&m).unwrap();
        let want: BTreeSet<_> = [-2, 0, 2].into_iter().map(Rational::from_integer).collect();
        assert_eq!(freqs, want);
    }

    #[test]
    fn custom_tables_are_checked() {
        let beta = 0.5;
        let mut table = BTreeMap::new();
        table.insert(Rational::from_integer(2), 1.0);
        table.insert(Rational::from_integer(-2), (-1.0f64).exp());
        table.insert(Rational::from_integer(0), 0.7);
        let bath = BathSpec::new(beta, RatePreset::Custom(table.clone())).unwrap();
        assert_eq!(bath.h_min(&single_qubit()).unwrap(), (-1.0f64).exp());

        table.insert(Rational::from_integer(-2), 0.5);
        assert!(matches!(
            BathSpec::new(beta, RatePreset::Custom(table)),
            Err(Error::Validation(_))
        ));
    }

    #[test]
    fn negative_beta_is_rejected() {
        assert!(BathSpec::glauber(-1.0).is_err());
        assert!(BathSpec::glauber(f64::NAN).is_err());
    }
}
