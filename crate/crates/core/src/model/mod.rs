//! Problem and regularizer data model shared by every other module.

mod index;
mod problem;
mod regularizer;

pub use index::{embed, extract, IndexSet};
pub use problem::{LossKind, ProblemData};
pub use regularizer::{GroupPartition, Penalty, RegularizerSpec};
