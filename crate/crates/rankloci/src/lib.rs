//! Exact computation of sample points on the low-rank locus of a linear
//! matrix pencil `A(x) = A0 + x1 A1 + ... + xn An`.
//!
//! Given the pencil and a target rank `r`, the solver returns a rational
//! parametrization of finitely many points meeting every connected
//! component of `{x in R^n : rank A(x) <= r}`, with certified isolation of
//! the real solutions and multilinear Bézout degree bounds. Everything is
//! exact over `Q`: Gröbner bases by Buchberger's algorithm, change of
//! ordering by linear algebra, real roots by Descartes bisection with a
//! Sturm cross-check.

pub mod bounds;
pub mod driver;
pub mod genericity;
pub mod groebner;
pub mod incidence;
pub mod lagrange;
pub mod monomial;
pub mod poly;
pub mod ratpar;
pub mod rational;
pub mod realroots;
pub mod rng;
pub mod unipoly;

pub use bounds::{delta, delta_oracle, profile, BezoutProfile};
pub use driver::{low_rank, LevelRecord, SolveConfig, SolveError, SolveOutput, SolveTrace};
pub use genericity::{CheckLevel, CheckOutcome, GenericityReport};
pub use groebner::{GbError, Ideal, ShapePositionBasis};
pub use incidence::{IncidenceSystem, LinearMatrix};
pub use lagrange::LagrangeSystem;
pub use poly::{MultiPoly, VarSet};
pub use ratpar::RationalParametrization;
pub use rational::{format_rational, parse_rational, Rational};
pub use realroots::IsolatedRealPoint;
pub use rng::Sampler;
pub use unipoly::UniPoly;
