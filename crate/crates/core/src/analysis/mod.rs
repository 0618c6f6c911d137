//! Embedding, closedness, FVP checking, node comparison and tree queries.

pub mod closed;
pub mod compare;
pub mod embed;
pub mod fvp;
pub mod query;

pub use closed::{annotate_closedness, is_closed, Closedness};
pub use compare::{compare_nodes, renaming, BindingDiff, ComparisonReport};
pub use embed::{embeds, whistle_check};
pub use fvp::{check_fvp, flat_term, FvpLimits, FvpVerdict, OpReport, OpVerdict, UncertainReason};
pub use query::{query_tree, Highlight, QueryHit};
