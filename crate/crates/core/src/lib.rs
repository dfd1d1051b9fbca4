//! Trees whose maximum eigenvalue multiplicity forces every other eigenvalue
//! to be simple (k-NIM trees): classification, exhaustive and
//! generating-function enumeration, and numeric spectral checks.

pub mod classify;
pub mod enumerate;
pub mod multiplicity;
pub mod nim_ogf;
pub mod series;
pub mod skeleton;
pub mod spectral;
pub mod tree;

pub use classify::{classify_k_nim, count_k_nim_oracle, ClassifyError, DeltaRule, KNimVerdict, Verdict};
pub use enumerate::enumerate_free_trees;
pub use multiplicity::{
    delta_brute_force, max_multiplicity, multiplicity_profile, path_cover_number, MultiplicityProfile,
};
pub use series::{binomial_series, Parity, PowerTable, SeriesError, TriSeries};
pub use skeleton::{skeleton_signature, SkeletonSignature};
pub use tree::{parse_edge_list, CanonicalCode, Tree, TreeError};
