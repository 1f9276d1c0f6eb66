//! From a circle weight to moments, Verblunsky coefficients and orthogonal
//! polynomials.

mod levinson;
mod moments;
mod oracle;
mod quadrature;
mod recurrence;
mod weight;

pub use levinson::{levinson, levinson_with_polynomial, VerblunskySequence, DEGENERACY_MARGIN};
pub use moments::{compute_moments, MomentTable, TableMeta};
pub use oracle::{gram_schmidt_oracle, OracleResult, CONDITION_LIMIT};
pub use quadrature::{dft, dft_index, Quadrature, MAX_QUADRATURE};
pub use recurrence::{forward_recurrence, reconstruct_weight, reversed, PolynomialPair};
pub use weight::{WeightKind, WeightSpec};

pub(crate) use quadrature::{resolve, tail_magnitude};
pub(crate) use weight::{complex_list, grid_point};
