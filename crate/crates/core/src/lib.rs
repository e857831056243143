//! Adaptive filtered schemes for first-order Hamilton-Jacobi equations on
//! uniform grids, with the smoothness indicators that drive them.

pub mod error;
pub mod filter;
pub mod grid;
pub mod harness;
pub mod hamiltonian;
pub mod highorder;
pub mod indicators1d;
pub mod indicators2d;
pub mod monotone;
pub mod par;
pub mod problems;

pub use error::{Error, Result};
pub use filter::{af_evolve, af_step, evolve, EpsilonRule, Method, SolverConfig, TimeGrid};
pub use grid::{BoundaryCondition, Field1D, Field2D, Grid1D, Grid2D};
pub use hamiltonian::Hamiltonian;
pub use highorder::{HighOrderScheme, StaggeredForm};
pub use indicators1d::{Indicator1DConfig, Variant1D};
pub use indicators2d::{Indicator2DConfig, PostMap, Variant2D};
pub use monotone::{MonotoneScheme, Slopes};
