//! Exact Davies and heat-bath generators for small models: dense
//! superoperators, coset-block Dirichlet matrices, spectral gaps and the
//! inequality checks built on them.

pub mod checks;
pub mod coset;
pub mod dense;
pub mod gap;
pub mod gibbs;
pub mod linalg;

use std::fmt;
use std::str::FromStr;

use crate::error::Error;

pub use checks::{
    ergodicity_check, g_function, mixing_time_bound, oscillator_norm, poincare_check,
    tau_and_r, variance_and_dirichlet, ErgodicityReport, MixingTimeBound, PoincareReport,
    TauAndR,
};
pub use coset::{coset_representatives, dirichlet_blocks, CosetBlock, DEFAULT_COSET_CAP};
pub use dense::{
    davies_dense, dirichlet_dense_from_generator, generator_dense, heatbath_dense,
    structural_residuals, symmetrized_dense, DenseGibbs, StructuralResiduals, DEFAULT_DENSE_CAP,
};
pub use gap::{compute_gap, coset_gap, dense_gap, spectral_gap, GapMethod, GapResult};
pub use gibbs::GibbsData;

/// Which generator a matrix was built from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Family {
    Davies,
    HeatBath,
}

impl Family {
    pub const ALL: [Family; 2] = [Family::Davies, Family::HeatBath];

    pub fn name(self) -> &'static str {
        match self {
            Family::Davies => "davies",
            Family::HeatBath => "heatbath",
        }
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Family {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Error> {
        match s.to_ascii_lowercase().as_str() {
            "davies" => Ok(Family::Davies),
            "heatbath" | "heat-bath" => Ok(Family::HeatBath),
            _ => Err(Error::Argument(format!(
                "unknown generator '{s}', expected davies or heatbath"
            ))),
        }
    }
}
