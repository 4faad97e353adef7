//! Minmax-regret broadcast centers on trees with interval edge weights.

pub mod broadcast;
pub mod buckets;
mod error;
pub mod format;
pub mod generate;
pub mod oracle;
pub mod ordered_index;
pub mod scenario_regret;
pub mod solver;
pub mod tree;

pub use broadcast::{Scenario, Schedule};
pub use buckets::BucketArray;
pub use error::{Error, Result};
pub use format::{parse_tree_file, write_tree_file, ParseError, TreeFile};
pub use ordered_index::OrderedIndex;
pub use scenario_regret::{CandidateScenario, ExtremeTables, RegretReport, SuccState};
pub use solver::{solve, solve_naive, SolveResult};
pub use tree::{BranchView, Tree, Vertex, Weight, WeightInterval};

#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../README.md")]
    mod readme {}
    #[doc = include_str!("../../../book/src/intro.md")]
    mod intro {}
    #[doc = include_str!("../../../book/src/model.md")]
    mod model {}
    #[doc = include_str!("../../../book/src/broadcast.md")]
    mod broadcast {}
    #[doc = include_str!("../../../book/src/regret.md")]
    mod regret {}
    #[doc = include_str!("../../../book/src/fast.md")]
    mod fast {}
    #[doc = include_str!("../../../book/src/solver.md")]
    mod solver {}
    #[doc = include_str!("../../../book/src/verification.md")]
    mod verification {}
}
