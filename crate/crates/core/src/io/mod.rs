//! Data in and out: synthetic instances, libsvm and group files, binary
//! bundles, and run reports.

mod bundle;
mod groups;
mod libsvm;
mod report;
mod synthetic;

pub use bundle::{read_bundle, write_bundle, BundleMeta, BUNDLE_MAGIC};
pub use groups::{parse_groups, read_groups};
pub use libsvm::{parse_libsvm, read_libsvm, write_libsvm};
pub use report::{write_bench, write_report, BenchRow, ReportFormat, RunReport};
pub use synthetic::{gen_synthetic, Sampler, Synthetic, SyntheticSpec, FULL_FACTOR_MAX_DIM};
