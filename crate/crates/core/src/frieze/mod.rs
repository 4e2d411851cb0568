//! SL₃-friezes from families specialized to 1.

pub mod algorithm;
pub mod grid;
pub mod layout;
pub mod validate;

pub use algorithm::{
    almost_continuous_at, evaluators, quiddity_rows, quiddity_rows_with, AlmostContinuous,
    Collapsing, Searching, DEFAULT_METHOD,
};
pub use grid::{dual_mismatch, dual_rows, extend_rows, FriezeFile, FriezeGrid, QuiddityRows};
pub use layout::{build_plucker_frieze_map, parse_rendered, render_frieze, MapEntry, Slot};
pub use validate::{determinant, validate_frieze, validate_with, FriezeReport, Orientation};

use crate::error::Result;
use crate::mutation::ValuedFamily;

/// The frieze of a family specialized to 1.
pub fn frieze_of(vf: &ValuedFamily, method: &dyn AlmostContinuous) -> Result<FriezeGrid> {
    extend_rows(&quiddity_rows_with(vf, method)?)
}
