//! Designing relationship weights so that selfish players reach socially
//! desirable equilibria in finite static games.
//!
//! The crate models n-player static cost games ([`game`]), relationship
//! networks that let players internalize each other's costs
//! ([`relationship`]), and two designers for the relationship weight vector:
//!
//! * [`design::order_and_design`] — exact: visits pure profiles in ascending
//!   social cost and solves an L1-minimizing linear program ([`lp`]) that
//!   makes the profile a pure Nash equilibrium of the modified game.
//! * [`entropy::gradient_descent`] — approximate: descends the expected
//!   social cost of the entropy-regularized (quantal-response) equilibrium,
//!   differentiated implicitly through the solver's fixed point.
//!
//! [`scenarios`] builds the traffic and prisoner's-dilemma families used by
//! the experiment harness in [`experiments`]; [`io`] handles the JSON file
//! formats consumed by the CLI.

pub mod design;
pub mod entropy;
pub mod experiments;
pub mod game;
pub mod io;
pub mod lp;
pub mod relationship;
pub mod scenarios;

pub use design::{achieved_outcome, design, order_and_design, DesignConfig, SignMode};
pub use entropy::{gradient_descent, solve, EntropyNashConfig, GdConfig};
pub use game::{
    best_social_profile, enumerate_pure_nash, expected_cost, expected_cost_vector,
    expected_social_cost, is_pure_nash, social_cost, MixedProfile, PureProfile, SocialCost,
    StaticGame, Tensor,
};
pub use lp::{solve_lp, LinearProgram, LpOutcome};
pub use relationship::{modify_costs, NetworkSet, RelationshipType};

/// Crate-wide error type.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("profile space too large: {0} profiles exceeds guard of {1}")]
    ProfileGuard(usize, usize),
    #[error("linear program: {0}")]
    Lp(#[from] lp::LpError),
    #[error("gradient descent diverged: {0}")]
    Divergence(String),
    #[error("no interior symmetric equilibrium: {0}")]
    NoInteriorEquilibrium(String),
    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
