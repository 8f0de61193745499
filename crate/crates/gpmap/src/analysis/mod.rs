//! Landscape observables computed from a census: information content,
//! rotation classes, neutral clusters, robustness, and information-density
//! curves with their theoretical baselines.

pub mod clusters;
pub mod curves;
pub mod distance;
pub mod hamming;
pub mod info;
pub mod rotation;
pub mod union_find;

pub use clusters::{find_clusters, ClusterComponent, ClusterMode, ClusterSet};
pub use curves::{
    all_density_curves, binomial, compressed_baseline, cumulative_space, density_curve,
    epistasis_sign, mean_curve, no_epistasis_baseline, robustness_profile, DensityCurve,
    RobustnessProfile, EPISTASIS_DEADBAND,
};
pub use distance::{
    counts_by_distance_bitmap, counts_by_distance_pairwise, viable_counts_by_distance,
};
pub use hamming::{hamming_neighbors, robustness, viable_edges};
pub use info::{functional_information, InfoContent};
pub use rotation::{rotation_classes, RotationClass, RotationClasses};
