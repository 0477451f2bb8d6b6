//! Finite space → `[0, n]^n` (Kuratowski map) → `J_n` (curve preimages),
//! with a certificate bounding the isometry defect.
//!
//! Preimages are only resolved to depth `k`, so each curve image sits within
//! `δ = n·2^(-k)` of its target. Sup distances between images then differ
//! from the source distances by at most `2δ`, and the `min(|x−y|, 1/n)` term
//! can add at most another `(1/n − (dist − 2δ))⁺ ≤ 2δ` because every source
//! distance is at least `1/n`. Hence every pair is off by at most `4δ`.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::metricspace::{params, EmbeddingParams, FiniteMetricSpace, MetricError};
use crate::numerics::{DistInterval, Dyadic, Rational};
use crate::spacefilling::{curve_point_exact, preimage, CubePoint, CurveError};
use crate::universal::{universal_dist, RealParam, UniversalError};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum EmbedError {
    #[error(transparent)]
    Metric(#[from] MetricError),
    #[error("cube dimension {n} too small: need at least {needed}")]
    DimensionTooSmall { n: u32, needed: String },
    #[error("depth {depth} too small to keep preimages apart (4·delta = {four_delta} ≥ eps = {eps}); minimal depth: {minimal}")]
    DepthTooSmall { depth: u64, minimal: u64, four_delta: Rational, eps: Rational },
    #[error("embedding does not belong to this space: {0}")]
    Mismatch(String),
    #[error(transparent)]
    Curve(#[from] CurveError),
    #[error(transparent)]
    Universal(#[from] UniversalError),
}

impl EmbedError {
    pub fn kind(&self) -> &'static str {
        match self {
            EmbedError::Metric(m) => m.kind(),
            EmbedError::DimensionTooSmall { .. } => "dimension-too-small",
            EmbedError::DepthTooSmall { .. } => "depth-too-small",
            EmbedError::Mismatch(_) => "mismatch",
            EmbedError::Curve(_) => "curve",
            EmbedError::Universal(_) => "universal",
        }
    }
}

/// Kuratowski map: point `i` goes to `(d(x_i, x_1), …, d(x_i, x_p), 0, …, 0)`
/// in `[0, n]^n`.
pub fn kuratowski(x: &FiniteMetricSpace, n: u32) -> Result<Vec<CubePoint>, EmbedError> {
    let p = x.len();
    let n_rat = Rational::from_integer(i64::from(n));
    if (n as usize) < p || n_rat < x.diameter() {
        let needed = Rational::max_of(&Rational::from_integer(p as i64), &x.diameter());
        return Err(EmbedError::DimensionTooSmall { n, needed: needed.to_string() });
    }
    Ok(x.matrix()
        .iter()
        .map(|row| {
            let mut coords = row.clone();
            coords.resize(n as usize, Rational::zero());
            CubePoint::new(coords).expect("coordinates within [0, n]")
        })
        .collect())
}

/// `δ = n·2^(-k)`.
pub fn residual_bound(n: u32, depth: u64) -> Rational {
    Rational::scaled_pow2(n, depth)
}

/// Smallest depth with `4·n·2^(-k) < eps`.
pub fn minimal_depth(n: u32, eps: &Rational) -> u64 {
    // 2^(-k) < eps / (4n)
    let target = eps / &Rational::from_integer(4 * i64::from(n));
    let k = target.log2_ceil_recip();
    if Rational::pow2_neg(k) == target {
        k + 1
    } else {
        k
    }
}

/// Smallest depth with `4·n·2^(-k) ≤ 10^(-6)` that also keeps preimages apart.
pub fn default_depth(params: &EmbeddingParams) -> u64 {
    let micro = Rational::new(1, 1_000_000).expect("nonzero");
    let fine = (micro / Rational::from_integer(4 * i64::from(params.n))).log2_ceil_recip();
    fine.max(minimal_depth(params.n, &params.eps))
}

/// Analytic per-pair bound `2δ + (1/n − (dist − 2δ))⁺`.
pub fn pair_deviation_bound(dist: &Rational, n: u32, delta: &Rational) -> Rational {
    let two_delta = delta + delta;
    let slack = Rational::from_integer(i64::from(n)).recip() - (dist - &two_delta);
    let slack = Rational::max_of(&slack, &Rational::zero());
    two_delta + slack
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PairBound {
    pub i: usize,
    pub j: usize,
    pub bound: Rational,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct EmbeddingResult {
    pub params: EmbeddingParams,
    pub depth: u64,
    pub delta: Rational,
    pub labels: Vec<String>,
    pub points: Vec<Dyadic>,
    pub cube_images: Vec<CubePoint>,
    pub targets: Vec<CubePoint>,
    pub pair_bounds: Vec<PairBound>,
}

impl EmbeddingResult {
    /// `4δ`, the bound every pair is certified against.
    pub fn deviation_bound(&self) -> Rational {
        &self.delta * &Rational::from_integer(4)
    }
}

/// Embeds `x` at curve depth `k`, requiring `4δ < eps` so distinct points
/// receive distinct parameters.
pub fn embed_space(x: &FiniteMetricSpace, depth: u64) -> Result<EmbeddingResult, EmbedError> {
    let pr = params(x)?;
    let four_delta = residual_bound(pr.n, depth) * Rational::from_integer(4);
    if four_delta >= pr.eps {
        return Err(EmbedError::DepthTooSmall {
            depth,
            minimal: minimal_depth(pr.n, &pr.eps),
            four_delta,
            eps: pr.eps,
        });
    }
    build(x, pr, depth)
}

/// [`embed_space`] without the `4δ < eps` precondition, for inspecting what
/// goes wrong at small depths.
pub fn embed_space_unchecked(x: &FiniteMetricSpace, depth: u64) -> Result<EmbeddingResult, EmbedError> {
    let pr = params(x)?;
    build(x, pr, depth)
}

fn build(x: &FiniteMetricSpace, pr: EmbeddingParams, depth: u64) -> Result<EmbeddingResult, EmbedError> {
    let n = pr.n;
    let targets = kuratowski(x, n)?;
    let points = targets
        .par_iter()
        .map(|y| preimage(n, y, depth))
        .collect::<Result<Vec<_>, _>>()?;
    let cube_images = points
        .par_iter()
        .map(|t| curve_point_exact(n, t))
        .collect::<Result<Vec<_>, _>>()?;
    let delta = residual_bound(n, depth);
    let mut pair_bounds = Vec::new();
    for i in 0..x.len() {
        for j in i + 1..x.len() {
            pair_bounds.push(PairBound { i, j, bound: pair_deviation_bound(x.dist(i, j), n, &delta) });
        }
    }
    Ok(EmbeddingResult {
        params: pr,
        depth,
        delta,
        labels: x.labels().to_vec(),
        points,
        cube_images,
        targets,
        pair_bounds,
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PairCertificate {
    pub i: usize,
    pub j: usize,
    pub expected: Rational,
    pub enclosure: DistInterval,
    /// `max(|lo − expected|, |hi − expected|)`.
    pub deviation: Rational,
    pub bound: Rational,
    pub distinct: bool,
    pub pass: bool,
}

/// Outcome of [`certify`].
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Certificate {
    pub tol: Rational,
    /// `4δ + tol`.
    pub threshold: Rational,
    pub pass: bool,
    pub worst_pair: Option<(usize, usize)>,
    pub worst_deviation: Rational,
    pub collisions: Vec<(usize, usize)>,
    pub pairs: Vec<PairCertificate>,
}

/// Encloses the glued distance between every pair of embedded points and
/// checks it against the source distance.
///
/// A pair passes if its parameters differ and the whole enclosure lies
/// within `4δ + tol` of the source distance.
pub fn certify(x: &FiniteMetricSpace, result: &EmbeddingResult, tol: &Rational) -> Result<Certificate, EmbedError> {
    if result.points.len() != x.len() || result.labels != x.labels() {
        return Err(EmbedError::Mismatch(format!(
            "{} points for a {}-point space",
            result.points.len(),
            x.len()
        )));
    }
    if result.params != params(x)? {
        return Err(EmbedError::Mismatch("parameters differ".into()));
    }
    let threshold = result.deviation_bound() + tol;
    let index_pairs: Vec<(usize, usize)> =
        (0..x.len()).flat_map(|i| (i + 1..x.len()).map(move |j| (i, j))).collect();
    let pairs = index_pairs
        .par_iter()
        .zip(result.pair_bounds.par_iter())
        .map(|(&(i, j), pb)| {
            let ti = RealParam::from(&result.points[i]);
            let tj = RealParam::from(&result.points[j]);
            let enclosure = universal_dist(&ti, &tj, tol)?;
            let expected = x.dist(i, j).clone();
            let deviation = Rational::max_of(&(enclosure.lo() - &expected).abs(), &(enclosure.hi() - &expected).abs());
            let distinct = ti != tj;
            let pass = distinct && deviation <= threshold;
            Ok(PairCertificate { i, j, expected, enclosure, deviation, bound: pb.bound.clone(), distinct, pass })
        })
        .collect::<Result<Vec<_>, EmbedError>>()?;

    let collisions = pairs.iter().filter(|p| !p.distinct).map(|p| (p.i, p.j)).collect::<Vec<_>>();
    let worst = pairs.iter().fold(None::<&PairCertificate>, |acc, p| match acc {
        Some(w) if w.deviation >= p.deviation => Some(w),
        _ => Some(p),
    });
    Ok(Certificate {
        tol: tol.clone(),
        threshold,
        pass: pairs.iter().all(|p| p.pass),
        worst_pair: worst.map(|w| (w.i, w.j)),
        worst_deviation: worst.map(|w| w.deviation.clone()).unwrap_or_else(Rational::zero),
        collisions,
        pairs,
    })
}

/// Serialized form of an embedding together with its certificate.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct EmbeddingArtifact {
    pub params: EmbeddingParams,
    pub depth: u64,
    pub delta: Rational,
    pub deviation_bound: Rational,
    pub labels: Vec<String>,
    pub points: Vec<Dyadic>,
    pub cube_images: Vec<CubePoint>,
    pub targets: Vec<CubePoint>,
    pub certificate: Certificate,
}

impl EmbeddingArtifact {
    pub fn new(result: &EmbeddingResult, certificate: Certificate) -> Self {
        EmbeddingArtifact {
            params: result.params.clone(),
            depth: result.depth,
            delta: result.delta.clone(),
            deviation_bound: result.deviation_bound(),
            labels: result.labels.clone(),
            points: result.points.clone(),
            cube_images: result.cube_images.clone(),
            targets: result.targets.clone(),
            certificate,
        }
    }
}
