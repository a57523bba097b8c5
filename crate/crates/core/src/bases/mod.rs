//! Fibers, Graver and Markov bases, indispensability.

mod coeff;
mod fiber;
mod graver;
mod markov;
mod oracle;
mod set;

pub use fiber::{fiber_by_degree, fiber_of, is_indispensable, Fiber, Grading};
pub use graver::{graver, graver_plain_completion};
pub(crate) use markov::minimal_markov_from_graver;
pub use markov::{indispensable_set, is_markov_basis, minimal_markov};
pub use oracle::{graver_bruteforce, kernel_ball, proper_semiconformal_decomposition};
pub use set::{conformal_leq, is_semiconformal_sum, BasisKind, BasisSet};

/// Size caps; exceeding one is an error, never a silent truncation.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Limits {
    pub fiber_cap: usize,
    pub graver_cap: usize,
}

impl Default for Limits {
    fn default() -> Self {
        Limits {
            fiber_cap: 10_000_000,
            graver_cap: 1_000_000,
        }
    }
}
