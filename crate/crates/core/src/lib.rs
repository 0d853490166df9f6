//! Two-person zero-sum matrix games and the spectral objects tied to them.
//!
//! * [`solver`] computes the value and optimal mixed strategies by linear programming
//!   ([`lp`]) and cross-checks small games by support enumeration.
//! * [`spectral`] covers Perron roots of positive matrices, kernels, stochastic
//!   eigenvectors and Gordan's alternative.
//! * [`claims`] audits the relations between the two on concrete matrices or on seeded
//!   [`ensemble`]s and emits [`claims::ClaimReport`]s.

pub mod claims;
pub mod ensemble;
pub mod error;
pub mod game;
pub mod io;
pub mod lp;
pub mod solver;
pub mod spectral;

pub use claims::{Auditor, ClaimId, ClaimReport, Quantity, Verdict, VerdictSummary};
pub use ensemble::{generate_ensemble, EnsembleFamily, EnsembleSpec};
pub use error::{Error, Result};
pub use game::{payoff, validate_strategy, GameMatrix, MixedStrategy, Player};
pub use io::{parse_matrix, render_matrix, to_json, MatrixFormat};
pub use lp::{solve_lp, LinearProgram, LpSolution, LpStatus};
pub use solver::{
    all_row_optima_dominated, is_optimal_dominated, oracle_solve, solve_game, GameSolution,
    OracleSolution,
};
pub use spectral::{
    gordan, matrix_rank, null_space, perron, stochastic_eigenvector, GordanBranch, GordanVerdict,
    KernelBasis, SpectralCert,
};
