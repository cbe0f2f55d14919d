//! Local-unitary orbit dimensions of n-qubit pure states.
//!
//! The group `SU(2)^n` acts on `(C^2)^{⊗n}` factor by factor. For a state
//! `|ψ⟩` the isotropy Lie algebra is the solution space of a homogeneous real
//! linear system whose `2^{n+1} × (3n+1)` coefficient matrix `M` is assembled
//! from the amplitudes of `|ψ⟩`; the orbit through `|ψ⟩` has dimension
//! `rank M − 1`.
//!
//! The crate builds `M` (exactly over the rationals or in floating point),
//! computes its rank, extracts isotropy bases, and provides the supporting
//! machinery used to reason about lower bounds on the rank: closed-form column
//! inner products, GF(2) parity witnesses, and local-unitary frame
//! adjustments.

pub mod error;
pub mod inner_products;
pub mod lie_action;
pub mod lu_adjust;
pub mod orbit_matrix;
pub mod rank;
pub mod state;
pub mod z2;

pub use error::{Error, Result};
pub use lie_action::{
    apply_algebra, apply_group, triple_columns, Generator, LocalAlgebraElement, LocalUnitary,
    Su2Coordinates, Triple,
};
pub use lu_adjust::{So3Rotation, Su2Element};
pub use orbit_matrix::{
    isotropy_basis, min_orbit_bound, orbit_dimension, rank_exact, rank_float, verify_isotropy,
    IsotropyElement, OrbitMatrix, RankPath, DEFAULT_TOLERANCE,
};
pub use state::{MultiIndex, PureState};
