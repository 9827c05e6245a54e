//! Distances on graphons.
//!
//! Step graphons are handled exactly through their block matrices; general
//! kernels are carried as cell-averaged grids. The crate computes the
//! integer-valued Varadhan (shortest-path) distance, its heat-kernel
//! characterization, the communicability distance with its spectral
//! embedding, and the neighbourhood, similarity and cut metrics. A sampler
//! draws W-random graphs to compare finite shortest paths with the limit.
//!
//! ```
//! use graphon::{builtin, delta_sets, Graphon, Hops, IntervalSet};
//!
//! let c6 = builtin::cycle(6).unwrap();
//! let w: Graphon = c6.clone().into();
//! let x = IntervalSet::block(c6.partition(), 0);
//! let z = IntervalSet::block(c6.partition(), 3);
//! assert_eq!(delta_sets(&w, &x, &z).unwrap(), Hops::Finite(3));
//! ```

pub mod bitset;
pub mod builtin;
pub mod cli;
pub mod connectivity;
pub mod error;
pub mod graphon;
pub mod io;
pub mod linalg;
pub mod metrics;
pub mod partition;
pub mod sampler;
pub mod varadhan;

pub use connectivity::{diameter, is_connected, laplacian_kernel_dim, Hops, KernelDim};
pub use error::{Error, Result};
pub use graphon::{coarsen, mat, BlockFunction, Graphon, GridGraphon, StepGraphon};
pub use linalg::{analytic_transform, expm, sym_eig, SpectralData, TaylorFamily};
pub use metrics::{
    communicability_distance, communicability_embedding, cut_distance_homogeneous, cut_norm,
    merge_twins, neighbourhood_distance, similarity_distance, Embedding,
};
pub use partition::{IntervalSet, Partition};
pub use sampler::{compare_with_varadhan, empirical_distance_profile, sample_graph, SampledGraph};
pub use varadhan::{
    delta_sets, distance_field, general_varadhan_slope, heat_expectation, varadhan_distance,
    varadhan_slope, DistanceField, Generator, SlopeEstimate, TimeGrid,
};
