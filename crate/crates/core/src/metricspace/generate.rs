use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::{FiniteMetricSpace, MetricError};
use crate::numerics::Rational;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SpaceKind {
    /// Distinct rational points in a cube under the sup metric.
    RandomEuclidean,
    /// Random positive symmetric weights closed under shortest paths.
    RandomShortestPath,
    /// Every pair at distance 1.
    Uniform,
}

impl SpaceKind {
    pub const ALL: [SpaceKind; 3] = [SpaceKind::RandomEuclidean, SpaceKind::RandomShortestPath, SpaceKind::Uniform];

    pub fn name(self) -> &'static str {
        match self {
            SpaceKind::RandomEuclidean => "random_euclidean",
            SpaceKind::RandomShortestPath => "random_shortest_path",
            SpaceKind::Uniform => "uniform",
        }
    }
}

impl FromStr for SpaceKind {
    type Err = MetricError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        SpaceKind::ALL
            .into_iter()
            .find(|k| k.name() == s)
            .ok_or_else(|| MetricError::UnknownKind(s.to_string()))
    }
}

const CUBE_DIM: usize = 3;
const EXTENT: i64 = 4;
const MAX_DENOMINATOR: i64 = 5;

/// The points behind `random_euclidean`: `p` distinct points of
/// `[0, 4]^3` on a grid of spacing `1/den`, `den ∈ 1..=5`.
pub fn sup_metric_points(p: usize, seed: u64) -> Vec<Vec<Rational>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let den = rng.gen_range(1..=MAX_DENOMINATOR);
    let mut grid: Vec<[i64; CUBE_DIM]> = Vec::with_capacity(p);
    while grid.len() < p {
        let candidate: [i64; CUBE_DIM] = std::array::from_fn(|_| rng.gen_range(0..=EXTENT * den));
        if !grid.contains(&candidate) {
            grid.push(candidate);
        }
    }
    grid.iter()
        .map(|pt| pt.iter().map(|&a| Rational::frac(a, den)).collect())
        .collect()
}

fn sup_distance(a: &[Rational], b: &[Rational]) -> Rational {
    a.iter().zip(b).map(|(x, y)| (x - y).abs()).max().unwrap_or_else(Rational::zero)
}

fn shortest_path_matrix(p: usize, rng: &mut ChaCha8Rng) -> Vec<Vec<Rational>> {
    let den = rng.gen_range(1..=MAX_DENOMINATOR);
    let mut m = vec![vec![Rational::zero(); p]; p];
    for i in 0..p {
        for j in i + 1..p {
            let w = Rational::frac(rng.gen_range(1..=EXTENT * den), den);
            m[i][j] = w.clone();
            m[j][i] = w;
        }
    }
    for via in 0..p {
        for i in 0..p {
            for j in 0..p {
                let detour = &m[i][via] + &m[via][j];
                if detour < m[i][j] {
                    m[i][j] = detour;
                }
            }
        }
    }
    m
}

/// Deterministic test space of `p ≥ 2` points for the given seed.
pub fn generate(kind: SpaceKind, p: usize, seed: u64) -> FiniteMetricSpace {
    assert!(p >= 2, "generated spaces need at least two points");
    let matrix = match kind {
        SpaceKind::Uniform => (0..p)
            .map(|i| (0..p).map(|j| if i == j { Rational::zero() } else { Rational::one() }).collect())
            .collect(),
        SpaceKind::RandomEuclidean => {
            let pts = sup_metric_points(p, seed);
            pts.iter().map(|a| pts.iter().map(|b| sup_distance(a, b)).collect()).collect()
        }
        SpaceKind::RandomShortestPath => shortest_path_matrix(p, &mut ChaCha8Rng::seed_from_u64(seed)),
    };
    FiniteMetricSpace::from_matrix(matrix).expect("generators produce valid metrics")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn uniform_is_equilateral() {
        let x = generate(SpaceKind::Uniform, 3, 99);
        assert_eq!(x.min_distance(), Some(Rational::one()));
        assert_eq!(x.diameter(), Rational::one());
    }

    #[test]
    fn shortest_path_spaces_validate() {
        for seed in 0..200 {
            let x = generate(SpaceKind::RandomShortestPath, 4, seed);
            assert!(super::super::validate(x.labels().to_vec(), x.matrix().to_vec()).is_ok());
        }
    }

    #[test]
    fn euclidean_pair_is_sup_distance() {
        for seed in 0..50 {
            let pts = sup_metric_points(2, seed);
            let x = generate(SpaceKind::RandomEuclidean, 2, seed);
            assert_eq!(x.dist(0, 1), &sup_distance(&pts[0], &pts[1]));
        }
    }

    #[test]
    fn reproducible_per_seed() {
        for kind in SpaceKind::ALL {
            assert_eq!(generate(kind, 6, 17), generate(kind, 6, 17));
        }
        assert_ne!(generate(SpaceKind::RandomShortestPath, 6, 1), generate(SpaceKind::RandomShortestPath, 6, 2));
    }

    #[test]
    fn kind_names_round_trip() {
        for kind in SpaceKind::ALL {
            assert_eq!(kind.name().parse::<SpaceKind>().unwrap(), kind);
        }
        assert!(matches!("gaussian".parse::<SpaceKind>(), Err(MetricError::UnknownKind(_))));
    }
}
