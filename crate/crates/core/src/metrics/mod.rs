//! Structural measurements: degree tails, BFS distances, balls, and the
//! comparison of graph neighbourhoods with Pólya-point samples.

mod distance;
mod local;
mod tail;

pub use distance::{
    ball_extract, bfs_distances, bfs_eccentricity, diameter_estimate, typical_distance_sample, Ball,
    DiameterEstimate, DiameterMethod, DistanceSummary, EXACT_DIAMETER_LIMIT, UNREACHED,
};
pub use local::{ball_stats, local_limit_compare, BallStats, LocalLimitReport};
pub use tail::{degree_tail_fit, tail_fit, TailEstimator, TailFit, MIN_DISTINCT_DEGREES};
