//! Reading and writing models and orderings, plus the builtin lattices.

mod builders;
mod format;
mod ordering;

pub use builders::{build_ising, build_toric, toric_h, toric_v};
pub use format::{parse_model, same_model, serialize_model, FORMAT_VERSION};
pub use ordering::{
    builtin_ordering, parse_ordering, serialize_ordering, toric_ordering, toric_size, Axis,
    SiteOrdering,
};
