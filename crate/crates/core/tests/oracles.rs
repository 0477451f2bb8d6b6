//! Checks against computations that do not share code with the library's
//! refinement paths.

use num_bigint::BigUint;
use univmetric::numerics::{to_dyadic_within, Dyadic, Rational};
use univmetric::spacefilling::{cell_of_index, curve_point_exact, index_of_cell};
use univmetric::universal::{d_eps_combine, interval_metric, universal_dist, RealParam};

/// Classic two-dimensional Hilbert index → (x, y) on a `side × side` grid.
fn d2xy(side: u64, d: u64) -> (u64, u64) {
    let (mut x, mut y) = (0u64, 0u64);
    let mut t = d;
    let mut s = 1;
    while s < side {
        let rx = 1 & (t / 2);
        let ry = 1 & (t ^ rx);
        if ry == 0 {
            if rx == 1 {
                x = s - 1 - x;
                y = s - 1 - y;
            }
            std::mem::swap(&mut x, &mut y);
        }
        x += s * rx;
        y += s * ry;
        t /= 4;
        s *= 2;
    }
    (x, y)
}

#[test]
fn planar_curve_matches_classic_hilbert_order() {
    for k in 0..=6u64 {
        let side = 1u64 << k;
        for d in 0..side * side {
            let cell = cell_of_index(2, k, &BigUint::from(d)).unwrap();
            let (x, y) = d2xy(side, d);
            assert_eq!(cell.cell_coords, vec![BigUint::from(x), BigUint::from(y)], "k={k} d={d}");
        }
    }
}

#[test]
fn high_dimensional_index_round_trip() {
    for n in [5u32, 8, 13] {
        let k = 4u64;
        for seed in 0..40u64 {
            let i = (BigUint::from(seed) * BigUint::from(0x9E37_79B9_7F4A_7C15u64)) % (BigUint::from(1u32) << (u64::from(n) * k));
            let cell = cell_of_index(n, k, &i).unwrap();
            assert_eq!(index_of_cell(n, k, &cell.cell_coords).unwrap(), i);
        }
    }
}

/// `d_n` from exact curve values at dyadic parameters only.
fn exact_dn(n: u32, a: &Dyadic, b: &Dyadic) -> Rational {
    let gap = (a.to_rational() - b.to_rational()).abs();
    let eps = Rational::from_integer(i64::from(n)).recip();
    let big_d = curve_point_exact(n, a).unwrap().sup_distance(&curve_point_exact(n, b).unwrap());
    d_eps_combine(&gap, &eps, &big_d).unwrap()
}

#[test]
fn enclosures_agree_with_dyadic_neighbours() {
    // Replace x, y by dyadics x', y' within 2^(-n·K) of them. Then
    // |d_n(x,y) − d_n(x',y')| ≤ 2·(2n·2^(-K)) by the curve's modulus,
    // so the enclosure must meet that window around the exact value.
    let tol = Rational::new(1, 1_000_000_000).unwrap();
    let samples = [(2u32, (4, 3), (5, 3)), (2, (11, 10), (19, 10)), (3, (7, 3), (17, 7)), (4, (10, 3), (31, 8)), (3, (2, 1), (5, 2))];
    for (n, (xp, xq), (yp, yq)) in samples {
        let x = Rational::frac(xp, xq);
        let y = Rational::frac(yp, yq);
        let enc = interval_metric(n, &RealParam::new(x.clone()), &RealParam::new(y.clone()), &tol).unwrap();
        let big_k = 12u64;
        let depth = u64::from(n) * big_k;
        let xd = to_dyadic_within(&x, depth);
        let yd = to_dyadic_within(&y, depth);
        let approx = exact_dn(n, &xd, &yd);
        let slack = Rational::scaled_pow2(4 * n, big_k) + Rational::pow2_neg(depth) * Rational::from_integer(2);
        assert!(enc.lo() <= &(&approx + &slack), "n={n} x={x} y={y}: {enc} vs {approx}");
        assert!(enc.hi() >= &(&approx - &slack), "n={n} x={x} y={y}: {enc} vs {approx}");
    }
}

#[test]
fn glued_distance_matches_hand_chain() {
    // d(1/3, 13/4) = d_1(1/3, 1) + d_2(1,2) + d_3(2,3) + d_4(3, 13/4)
    //             = 2/3 + 2 + 3 + d_4(3, 13/4), the last term exact (dyadic ends).
    let tail = exact_dn(4, &Dyadic::from_integer(3), &Dyadic::new(13, 2));
    let expected = Rational::frac(2, 3) + Rational::from_integer(5) + tail;
    let got = universal_dist(&RealParam::new(Rational::frac(1, 3)), &RealParam::new(Rational::frac(13, 4)), &Rational::one()).unwrap();
    assert!(got.is_exact());
    assert_eq!(got.lo(), &expected);
}

#[test]
fn bridge_equals_interval_length_times_index() {
    for k in 1..=40u32 {
        let start = Dyadic::from_integer(k - 1);
        let end = Dyadic::from_integer(k);
        assert_eq!(exact_dn(k, &start, &end), Rational::from_integer(i64::from(k)));
        assert_eq!(univmetric::bridge_cost(k).unwrap(), Rational::from_integer(i64::from(k)));
    }
}
