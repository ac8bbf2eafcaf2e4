//! Critical points of Laurent polynomials with positive coefficients.
//!
//! A Laurent polynomial `W = Σ aₙ xⁿ` with `aₙ > 0` restricts to the
//! positive real torus, where the substitution `xᵢ = exp(uᵢ)` turns it into
//! a finite sum of exponentials `W(u) = Σ aₙ e^{⟨u,n⟩}` — a smooth, strictly
//! convex function whenever the exponents span `ℝᵈ`. If additionally the
//! origin lies strictly inside the Newton polytope of `W`, the function is
//! proper and attains a unique global minimum: the *conifold point*. Its
//! critical value `T` controls everything downstream — the moments
//! `M_k = [x⁰] W^k` grow like `T^k` (so the associated period series has
//! radius of convergence `1/T`), and for potentials built from toric fans
//! `T` is sandwiched by topological data of the fan.
//!
//! The crate is organized in layers:
//!
//! * [`laurent`] — exact polynomials over `BigRational`, parsing, and
//!   log-coordinate evaluation up to second order;
//! * [`polytope`] + [`simplex`] — exact rational linear programming that
//!   decides the interiority hypothesis and produces checkable
//!   certificates for both outcomes;
//! * [`solver`] — a damped Newton iteration with a positive-definiteness
//!   certificate for the minimum it finds;
//! * [`moments`] — exact big-integer moment sequences and the growth-rate
//!   estimator that cross-checks the solver;
//! * [`toric`] — standard potentials of reflexive-type fans and the bounds
//!   `d + 1 ≤ T ≤ #rays`;
//! * [`report`] + [`cli`] — deterministic JSON documents and the command
//!   line on top of them.
//!
//! Everything upstream of the solver is exact rational arithmetic; floats
//! enter only where a limit genuinely lives in `ℝ` (the critical point, its
//! spectrum, and growth estimates).

pub mod cli;
pub mod laurent;
pub mod linalg;
pub mod moments;
pub mod polytope;
pub mod rational;
pub mod report;
pub mod simplex;
pub mod solver;
pub mod toric;

pub use laurent::{LaurentError, LaurentPolynomial, LogPoint};
pub use moments::{
    dk_report, growth_estimate, moment_sequence, moment_sequence_with, DkReport, MomentOptions,
    MomentSequence, MomentsError,
};
pub use polytope::{
    nonvanishing_certificate, validate_support, NonvanishingCertificate, PolytopeError,
    SupportValidation,
};
pub use solver::{
    certify_morse, find_conifold_point, find_conifold_point_from, ConifoldReport, SolverError,
    SolverOptions,
};
pub use toric::{builtin_fan, builtin_fan_names, potential_from_fan, toric_report, FanInput,
    ToricError, ToricReport};
