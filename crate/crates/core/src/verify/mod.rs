//! Independent numerical oracles used to check the closed forms.

pub mod envelope;
pub mod mixed;
pub mod walk;

pub use envelope::{concave_envelope, UpperHull};
pub use mixed::{check_mixed_equilibrium, MixedCheck};
pub use walk::{simulate_two_barrier, RandomWalkConfig, WalkReport};
