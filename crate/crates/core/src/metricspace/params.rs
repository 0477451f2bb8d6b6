use num_bigint::BigInt;
use num_traits::ToPrimitive;
use serde::{Deserialize, Serialize};

use super::{FiniteMetricSpace, MetricError};
use crate::numerics::Rational;

/// Size parameters of the embedding of a finite space.
///
/// `q = ⌈diam⌉`, `r = ⌈1/eps⌉` and `n = max(p, q, r)`, which guarantees
/// `n ≥ diam` (Kuratowski images fit in `[0, n]^n`) and `eps ≥ 1/n` (the
/// space is `1/n`-dispersed). With floors in place of the ceilings neither
/// guarantee holds in general; `floor_rule` records what floors would give.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct EmbeddingParams {
    pub p: usize,
    pub eps: Rational,
    pub diam: Rational,
    pub q: u64,
    pub r: u64,
    pub n: u32,
    pub floor_rule: FloorRule,
}

/// Parameters under `q = ⌊diam⌋`, `r = ⌊1/eps⌋` and whether the two
/// guarantees still hold with them.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FloorRule {
    pub q: u64,
    pub r: u64,
    pub n: u64,
    pub covers_diameter: bool,
    pub dispersed: bool,
}

impl FloorRule {
    pub fn agrees(&self, params: &EmbeddingParams) -> bool {
        self.n == u64::from(params.n)
    }
}

impl EmbeddingParams {
    /// `1/n`.
    pub fn dispersion(&self) -> Rational {
        Rational::from_integer(i64::from(self.n)).recip()
    }
}

fn to_u64(v: BigInt) -> Result<u64, MetricError> {
    v.to_u64().ok_or_else(|| MetricError::DimensionTooLarge(v.to_string()))
}

pub fn params(x: &FiniteMetricSpace) -> Result<EmbeddingParams, MetricError> {
    let p = x.len();
    let eps = x.min_distance().ok_or(MetricError::Singleton)?;
    let diam = x.diameter();
    let inv = eps.recip();
    let q = to_u64(diam.ceil())?;
    let r = to_u64(inv.ceil())?;
    let n_wide = (p as u64).max(q).max(r);
    let n = u32::try_from(n_wide).map_err(|_| MetricError::DimensionTooLarge(n_wide.to_string()))?;

    let fq = to_u64(diam.floor())?;
    let fr = to_u64(inv.floor())?;
    let fnn = (p as u64).max(fq).max(fr);
    let fn_rat = Rational::from_integer(BigInt::from(fnn));
    let floor_rule = FloorRule {
        q: fq,
        r: fr,
        n: fnn,
        covers_diameter: fn_rat >= diam,
        dispersed: eps >= fn_rat.recip(),
    };
    Ok(EmbeddingParams { p, eps, diam, q, r, n, floor_rule })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn two_point(d: Rational) -> FiniteMetricSpace {
        FiniteMetricSpace::from_matrix(vec![vec![Rational::zero(), d.clone()], vec![d, Rational::zero()]]).unwrap()
    }

    #[test]
    fn unit_pair() {
        let pr = params(&two_point(Rational::one())).unwrap();
        assert_eq!((pr.p, pr.q, pr.r, pr.n), (2, 1, 1, 2));
        assert_eq!(pr.eps, Rational::one());
        assert_eq!(pr.diam, Rational::one());
        assert!(pr.floor_rule.agrees(&pr));
    }

    #[test]
    fn two_fifths_needs_ceiling() {
        let pr = params(&two_point(Rational::frac(2, 5))).unwrap();
        assert_eq!((pr.q, pr.r, pr.n), (1, 3, 3));
        assert!(pr.eps >= pr.dispersion());
        assert_eq!(pr.floor_rule.n, 2);
        assert!(!pr.floor_rule.dispersed);
    }

    #[test]
    fn equilateral_triple() {
        let one = Rational::one();
        let z = Rational::zero();
        let x = FiniteMetricSpace::from_matrix(vec![
            vec![z.clone(), one.clone(), one.clone()],
            vec![one.clone(), z.clone(), one.clone()],
            vec![one.clone(), one, z],
        ])
        .unwrap();
        let pr = params(&x).unwrap();
        assert_eq!((pr.p, pr.q, pr.r, pr.n), (3, 1, 1, 3));
    }

    #[test]
    fn large_diameter_needs_ceiling() {
        let pr = params(&two_point(Rational::frac(5, 2))).unwrap();
        assert_eq!(pr.n, 3);
        assert_eq!(pr.floor_rule.n, 2);
        assert!(!pr.floor_rule.covers_diameter);
    }

    #[test]
    fn singleton_rejected() {
        let x = FiniteMetricSpace::from_matrix(vec![vec![Rational::zero()]]).unwrap();
        assert_eq!(params(&x), Err(MetricError::Singleton));
    }
}
