//! A metric on the real line, equivalent to the usual one, into which every
//! finite metric space embeds isometrically.
//!
//! Each unit interval `J_n = [n−1, n]` carries the pullback metric
//! `d_n(x, y) = max(min(|x − y|, 1/n), D(f_n(x), f_n(y)))` where `f_n` is a
//! Hilbert-type curve onto `[0, n]^n` and `D` is the sup metric. The
//! interval metrics are glued end to end, and the usual metric is glued on
//! at `0` for the negative half-line. A finite space is embedded by mapping
//! it into `[0, n]^n` with the Kuratowski map and pulling the images back
//! along the curve.
//!
//! All arithmetic is exact. Distances that depend on curve values at
//! non-dyadic parameters come back as certified intervals.

// Error variants carry exact rational witnesses; index loops mirror the matrix notation.
#![allow(clippy::result_large_err, clippy::needless_range_loop)]

pub mod embed;
pub mod metricspace;
pub mod numerics;
pub mod spacefilling;
pub mod universal;
pub mod verify;

pub use embed::{certify, embed_space, kuratowski, Certificate, EmbedError, EmbeddingResult};
pub use metricspace::{generate, params, validate, EmbeddingParams, FiniteMetricSpace, SpaceKind};
pub use numerics::{parse_number, to_dyadic_within, DistInterval, Dyadic, Rational};
pub use spacefilling::{
    cell_of_index, curve_point, curve_point_exact, index_of_cell, preimage, CubeBox, CubePoint,
    CurveCell,
};
pub use universal::{bridge_cost, d_eps_combine, interval_metric, universal_dist, RealParam};
pub use verify::CheckReport;
