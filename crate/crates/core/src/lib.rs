//! Betti numbers of moduli spaces of one-dimensional sheaves on the
//! projective plane, computed exactly from Gopakumar-Vafa invariants of
//! local P2 through the local/relative correspondence.
//!
//! The pipeline: [`localcurve`] evaluates twisted elliptic-curve series,
//! [`treesum`] and [`gfunctional`] assemble the graph sum in two independent
//! ways, and [`solver`] turns the result into shifted Poincare polynomials.
//! [`asymptotics`] and [`refinedhn`] check the closed formulas for leading
//! Betti numbers and the Harder-Narasimhan recursions.

pub mod asymptotics;
pub mod data;
pub mod exactalg;
pub mod gfunctional;
pub mod localcurve;
pub mod partitions;
pub mod refinedhn;
pub mod solver;
pub mod treesum;

pub use exactalg::{GaussRat, HalfLaurent, RatFun, TwoVarSeries};
pub use solver::{GvTable, OmegaHat, OmegaPoly};
