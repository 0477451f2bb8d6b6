//! Property suites over the whole construction, producing reports with
//! replayable witnesses.
//!
//! Sampled suites derive one ChaCha stream per case from the seed, so a
//! report does not depend on how cases are scheduled across threads.

use std::collections::HashSet;

use num_bigint::BigUint;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::embed::{certify, default_depth, embed_space, kuratowski};
use crate::metricspace::{generate, params, SpaceKind};
use crate::numerics::{DistInterval, Rational};
use crate::spacefilling::{cell_of_index, index_of_cell, CubePoint, CurveCell};
use crate::universal::{interval_metric, universal_dist, RealParam};

pub const CURVE_MAX_DIM: u32 = 4;
pub const CURVE_MAX_DEPTH: u64 = 3;
pub const MODULUS_MAX_DIM: u32 = 4;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum VerifyError {
    #[error("scale exceeded: {what} = {got} > {limit} (exhaustive cost grows as 2^(n·k))")]
    ScaleExceeded { what: &'static str, got: u64, limit: u64 },
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}

/// One failed case, with every input needed to replay it.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Witness {
    pub check: String,
    pub inputs: Vec<(String, String)>,
    pub expected: String,
    pub got: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CheckReport {
    pub name: String,
    pub seed: Option<u64>,
    pub cases_run: u64,
    pub skipped: u64,
    pub notes: Vec<String>,
    pub failures: Vec<Witness>,
    pub pass: bool,
}

impl CheckReport {
    fn new(name: &str, seed: Option<u64>, cases_run: u64, failures: Vec<Witness>) -> Self {
        CheckReport {
            name: name.to_string(),
            seed,
            cases_run,
            skipped: 0,
            notes: Vec::new(),
            pass: failures.is_empty(),
            failures,
        }
    }
}

fn witness(check: &str, inputs: &[(&str, String)], expected: impl ToString, got: impl ToString) -> Witness {
    Witness {
        check: check.to_string(),
        inputs: inputs.iter().map(|(k, v)| (k.to_string(), v.clone())).collect(),
        expected: expected.to_string(),
        got: got.to_string(),
    }
}

fn case_rng(seed: u64, case: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(case);
    rng
}

/// Exhaustive grid checks of the curve for every `1 ≤ n ≤ n_max`,
/// `1 ≤ k ≤ k_max`: bijectivity onto the grid, index inversion, face
/// adjacency, entry/exit junctions, corner shape and parent nesting.
pub fn check_curve(n_max: u32, k_max: u64) -> Result<CheckReport, VerifyError> {
    if n_max > CURVE_MAX_DIM {
        return Err(VerifyError::ScaleExceeded { what: "n_max", got: u64::from(n_max), limit: u64::from(CURVE_MAX_DIM) });
    }
    if k_max > CURVE_MAX_DEPTH {
        return Err(VerifyError::ScaleExceeded { what: "k_max", got: k_max, limit: CURVE_MAX_DEPTH });
    }
    let grids: Vec<(u32, u64)> = (1..=n_max).flat_map(|n| (1..=k_max).map(move |k| (n, k))).collect();
    let results: Vec<(u64, Vec<Witness>)> = grids.par_iter().map(|&(n, k)| check_curve_level(n, k)).collect();
    let mut failures = check_curve_roots(n_max);
    let mut cells = 0;
    let mut top = 0;
    for ((count, mut f), &grid) in results.into_iter().zip(&grids) {
        cells += count;
        if grid == (n_max, k_max) {
            top = count;
        }
        failures.append(&mut f);
    }
    let mut report = CheckReport::new("curve", None, cells, failures);
    report.notes.push(format!("n in 1..={n_max}, k in 1..={k_max}"));
    report.notes.push(format!("grid n={n_max} k={k_max}: {top} cells"));
    Ok(report)
}

fn check_curve_roots(n_max: u32) -> Vec<Witness> {
    let mut failures = Vec::new();
    for n in 1..=n_max {
        let root = cell_of_index(n, 0, &BigUint::default()).expect("root cell");
        let origin = vec![Rational::zero(); n as usize];
        let mut far = origin.clone();
        far[0] = Rational::from_integer(i64::from(n));
        if root.entry.coords() != origin.as_slice() || root.exit.coords() != far.as_slice() {
            failures.push(witness(
                "root orientation",
                &[("n", n.to_string())],
                "entry at origin, exit at (n, 0, ..., 0)",
                format!("entry {} exit {}", root.entry, root.exit),
            ));
        }
    }
    failures
}

fn check_curve_level(n: u32, k: u64) -> (u64, Vec<Witness>) {
    let total = 1u64 << (u64::from(n) * k);
    let side = Rational::scaled_pow2(n, k);
    let cells: Vec<CurveCell> = (0..total)
        .map(|i| cell_of_index(n, k, &BigUint::from(i)).expect("index in range"))
        .collect();
    let mut failures = Vec::new();
    let at = |i: u64| vec![("n", n.to_string()), ("k", k.to_string()), ("i", i.to_string())];

    let mut seen = HashSet::new();
    for (i, cell) in cells.iter().enumerate() {
        let i = i as u64;
        if !cell.cell_coords.iter().all(|c| c.bits() <= k) || !seen.insert(cell.cell_coords.clone()) {
            failures.push(witness("grid bijectivity", &at(i), "fresh in-range grid cell", format!("{:?}", cell.cell_coords)));
        }
        match index_of_cell(n, k, &cell.cell_coords) {
            Ok(back) if back == BigUint::from(i) => {}
            other => failures.push(witness("index inversion", &at(i), i, format!("{other:?}"))),
        }
        if !corner_pair_ok(cell, &side) {
            failures.push(witness("entry/exit corners", &at(i), "corners one edge apart", format!("{} -> {}", cell.entry, cell.exit)));
        }
        if k > 0 {
            let parent = cell_of_index(n, k - 1, &BigUint::from(i >> n)).expect("parent in range");
            if !parent.cell_box().contains_box(&cell.cell_box()) {
                failures.push(witness("nesting", &at(i), "child box inside parent box", format!("{:?}", cell.cell_coords)));
            }
            let children = 1u64 << n;
            if i.is_multiple_of(children) && parent.entry != cell.entry {
                failures.push(witness("first child entry", &at(i), &parent.entry, &cell.entry));
            }
            if i % children == children - 1 && parent.exit != cell.exit {
                failures.push(witness("last child exit", &at(i), &parent.exit, &cell.exit));
            }
        }
    }
    if seen.len() as u64 != total {
        failures.push(witness("grid surjectivity", &at(total), total, seen.len()));
    }
    for (i, pair) in cells.windows(2).enumerate() {
        let i = i as u64;
        let steps: Vec<BigUint> = pair[0]
            .cell_coords
            .iter()
            .zip(&pair[1].cell_coords)
            .map(|(a, b)| if a >= b { a - b } else { b - a })
            .collect();
        let moved = steps.iter().filter(|d| **d != BigUint::default()).count();
        if moved != 1 || !steps.iter().all(|d| d.bits() <= 1) {
            failures.push(witness("face adjacency", &at(i), "one coordinate moves by 1", format!("{steps:?}")));
        }
        if pair[0].exit != pair[1].entry {
            failures.push(witness("junction", &at(i), &pair[1].entry, &pair[0].exit));
        }
    }
    (total, failures)
}

fn corner_pair_ok(cell: &CurveCell, side: &Rational) -> bool {
    let b = cell.cell_box();
    let is_corner = |p: &CubePoint| {
        p.coords()
            .iter()
            .zip(b.lower().coords())
            .all(|(x, lo)| x == lo || *x == lo + side)
    };
    let differing: Vec<_> = cell
        .entry
        .coords()
        .iter()
        .zip(cell.exit.coords())
        .filter(|(a, b)| a != b)
        .collect();
    is_corner(&cell.entry)
        && is_corner(&cell.exit)
        && differing.len() == 1
        && (differing[0].0 - differing[0].1).abs() == *side
}

/// A random rational in `[lo, hi]`, biased towards integers and dyadics so
/// interval boundaries and exact paths get exercised.
pub fn sample_rational(rng: &mut ChaCha8Rng, lo: &Rational, hi: &Rational) -> Rational {
    let den: i64 = match rng.gen_range(0..8) {
        0 => 1,
        1 => 1 << rng.gen_range(1..12),
        _ => rng.gen_range(1..=1000),
    };
    let den_r = Rational::from_integer(den);
    let a = (lo * &den_r).ceil();
    let b = (hi * &den_r).floor();
    if a > b {
        return lo.clone();
    }
    let span = &b - &a;
    let offset: num_bigint::BigInt = rng.gen_range(0..=span.try_into().unwrap_or(i64::MAX)).into();
    Rational::new(a + offset, den).expect("positive denominator")
}

/// Sampled triangle inequality, symmetry and identity checks for the glued
/// metric on `[range_lo, range_hi]`.
pub fn check_axioms(samples: u64, range_lo: &Rational, range_hi: &Rational, tol: &Rational, seed: u64) -> Result<CheckReport, VerifyError> {
    if range_lo > range_hi {
        return Err(VerifyError::InvalidArgument(format!("empty range [{range_lo}, {range_hi}]")));
    }
    if !tol.is_positive() {
        return Err(VerifyError::InvalidArgument(format!("tolerance {tol} must be positive")));
    }
    let failures: Vec<Witness> = (0..samples)
        .into_par_iter()
        .flat_map_iter(|case| {
            let mut rng = case_rng(seed, case);
            let x = sample_rational(&mut rng, range_lo, range_hi);
            let y = if rng.gen_range(0..16) == 0 { x.clone() } else { sample_rational(&mut rng, range_lo, range_hi) };
            let z = sample_rational(&mut rng, range_lo, range_hi);
            axiom_case(&x, &y, &z, tol, seed, case)
        })
        .collect();
    Ok(CheckReport::new("axioms", Some(seed), samples, failures))
}

/// Checks one triple; public so failures can be replayed from a witness.
pub fn axiom_case(x: &Rational, y: &Rational, z: &Rational, tol: &Rational, seed: u64, case: u64) -> Vec<Witness> {
    let inputs = [
        ("seed", seed.to_string()),
        ("case", case.to_string()),
        ("x", x.to_string()),
        ("y", y.to_string()),
        ("z", z.to_string()),
        ("tol", tol.to_string()),
    ];
    let pts = [RealParam::new(x.clone()), RealParam::new(y.clone()), RealParam::new(z.clone())];
    let mut failures = Vec::new();
    let mut dist = |a: usize, b: usize| -> Option<DistInterval> {
        match universal_dist(&pts[a], &pts[b], tol) {
            Ok(d) => Some(d),
            Err(e) => {
                failures.push(witness("evaluation", &inputs, "an enclosure", e));
                None
            }
        }
    };
    let (Some(dxy), Some(dyz), Some(dxz), Some(dyx), Some(dxx)) = (dist(0, 1), dist(1, 2), dist(0, 2), dist(1, 0), dist(0, 0)) else {
        return failures;
    };
    for (name, long, a, b) in [("triangle x-z", &dxz, &dxy, &dyz), ("triangle x-y", &dxy, &dxz, &dyz), ("triangle y-z", &dyz, &dxy, &dxz)] {
        let detour = a.hi() + b.hi();
        if long.lo() > &detour {
            failures.push(witness(name, &inputs, format!("lo <= {detour}"), long));
        }
    }
    if dxy != dyx {
        failures.push(witness("symmetry", &inputs, &dxy, &dyx));
    }
    if dxx != DistInterval::exact(Rational::zero()) {
        failures.push(witness("identity", &inputs, "[0, 0]", &dxx));
    }
    if (x == y) != (dxy == DistInterval::exact(Rational::zero())) {
        failures.push(witness("indiscernibles", &inputs, x == y, &dxy));
    }
    for d in [&dxy, &dyz, &dxz] {
        if &d.width() > tol {
            failures.push(witness("width", &inputs, format!("<= {tol}"), d.width()));
        }
    }
    failures
}

/// Generates spaces, embeds them at the default depth (or `depth`), and
/// checks Kuratowski exactness, preimage residuals and the `4δ` isometry
/// certificate.
pub fn check_isometry(space_count: u64, p_max: usize, depth: Option<u64>, tol: &Rational, seed: u64) -> Result<CheckReport, VerifyError> {
    if p_max == 0 {
        return Err(VerifyError::InvalidArgument("p_max must be at least 1".into()));
    }
    let outcomes: Vec<(bool, Vec<Witness>)> = (0..space_count)
        .into_par_iter()
        .map(|case| {
            let mut rng = case_rng(seed, case);
            let p = rng.gen_range(1..=p_max);
            let kind = SpaceKind::ALL[rng.gen_range(0..SpaceKind::ALL.len())];
            let space_seed: u64 = rng.gen();
            if p == 1 {
                return (true, Vec::new());
            }
            (false, isometry_case(kind, p, space_seed, depth, tol, seed, case))
        })
        .collect();
    let skipped = outcomes.iter().filter(|(s, _)| *s).count() as u64;
    let failures = outcomes.into_iter().flat_map(|(_, f)| f).collect();
    let mut report = CheckReport::new("isometry", Some(seed), space_count - skipped, failures);
    report.skipped = skipped;
    if skipped > 0 {
        report.notes.push(format!("{skipped} singleton spaces skipped: a single point embeds trivially at 0"));
    }
    Ok(report)
}

pub fn isometry_case(kind: SpaceKind, p: usize, space_seed: u64, depth: Option<u64>, tol: &Rational, seed: u64, case: u64) -> Vec<Witness> {
    let inputs = [
        ("seed", seed.to_string()),
        ("case", case.to_string()),
        ("kind", kind.name().to_string()),
        ("p", p.to_string()),
        ("space_seed", space_seed.to_string()),
    ];
    let mut failures = Vec::new();
    let x = generate(kind, p, space_seed);
    let pr = match params(&x) {
        Ok(pr) => pr,
        Err(e) => return vec![witness("params", &inputs, "parameters", e)],
    };
    let n_rat = Rational::from_integer(i64::from(pr.n));
    if (pr.n as usize) < p || n_rat < pr.diam || pr.eps < n_rat.recip() {
        failures.push(witness("params guarantees", &inputs, "n >= p, n >= diam, eps >= 1/n", format!("{pr:?}")));
    }
    match kuratowski(&x, pr.n) {
        Ok(images) => {
            for i in 0..p {
                for j in 0..p {
                    if &images[i].sup_distance(&images[j]) != x.dist(i, j) {
                        failures.push(witness("kuratowski exactness", &inputs, x.dist(i, j), images[i].sup_distance(&images[j])));
                    }
                }
            }
        }
        Err(e) => failures.push(witness("kuratowski", &inputs, "images", e)),
    }
    let k = depth.unwrap_or_else(|| default_depth(&pr));
    let res = match embed_space(&x, k) {
        Ok(r) => r,
        Err(e) => {
            failures.push(witness("embed", &inputs, "embedding", e));
            return failures;
        }
    };
    for (img, target) in res.cube_images.iter().zip(&res.targets) {
        let r = img.sup_distance(target);
        if r > res.delta {
            failures.push(witness("preimage residual", &inputs, format!("<= {}", res.delta), r));
        }
    }
    match certify(&x, &res, tol) {
        Ok(cert) => {
            let bound = res.deviation_bound();
            for pc in &cert.pairs {
                if pc.deviation > bound || !pc.distinct {
                    failures.push(witness(
                        "isometry deviation",
                        &inputs,
                        format!("pair ({}, {}) within {bound}", pc.i, pc.j),
                        format!("deviation {} distinct {}", pc.deviation, pc.distinct),
                    ));
                }
            }
        }
        Err(e) => failures.push(witness("certify", &inputs, "certificate", e)),
    }
    failures
}

/// Sampled continuity moduli of `d_n` for pairs with `|x − y| ≤ 2^(-n·k)`:
/// upper `hi ≤ 2n·2^(-k)` and lower `lo ≥ min(|x − y|, 1/n)`.
pub fn check_modulus(n: u32, k: u64, samples: u64, seed: u64) -> Result<CheckReport, VerifyError> {
    if n == 0 {
        return Err(VerifyError::InvalidArgument("n must be at least 1".into()));
    }
    if n > MODULUS_MAX_DIM {
        return Err(VerifyError::ScaleExceeded { what: "n", got: u64::from(n), limit: u64::from(MODULUS_MAX_DIM) });
    }
    let step = Rational::pow2_neg(u64::from(n) * k);
    let upper = Rational::scaled_pow2(2 * n, k);
    // Tight enough that the refinement always reaches depth k.
    let tol = Rational::scaled_pow2(n, k + 2);
    let top = Rational::from_integer(i64::from(n));
    let bottom = &top - &Rational::one();
    let eps = top.recip();
    let failures: Vec<Witness> = (0..samples)
        .into_par_iter()
        .flat_map_iter(|case| {
            let mut rng = case_rng(seed, case);
            let x = sample_rational(&mut rng, &bottom, &top);
            let h = match rng.gen_range(0..10) {
                0 => Rational::zero(),
                1 => step.clone(),
                _ => sample_rational(&mut rng, &Rational::zero(), &Rational::one()) * &step,
            };
            let y = if &x + &h <= top { &x + &h } else { &x - &h };
            modulus_case(n, k, &x, &y, &upper, &eps, &tol, seed, case)
        })
        .collect();
    Ok(CheckReport::new("modulus", Some(seed), samples, failures))
}

#[allow(clippy::too_many_arguments)]
fn modulus_case(n: u32, k: u64, x: &Rational, y: &Rational, upper: &Rational, eps: &Rational, tol: &Rational, seed: u64, case: u64) -> Vec<Witness> {
    let inputs = [
        ("seed", seed.to_string()),
        ("case", case.to_string()),
        ("n", n.to_string()),
        ("k", k.to_string()),
        ("x", x.to_string()),
        ("y", y.to_string()),
    ];
    let d = match interval_metric(n, &RealParam::new(x.clone()), &RealParam::new(y.clone()), tol) {
        Ok(d) => d,
        Err(e) => return vec![witness("evaluation", &inputs, "an enclosure", e)],
    };
    let gap = (x - y).abs();
    let floor = Rational::min_of(&gap, eps);
    let mut failures = Vec::new();
    if d.hi() > upper {
        failures.push(witness("upper modulus", &inputs, format!("hi <= {upper}"), &d));
    }
    if d.lo() < &floor {
        failures.push(witness("lower modulus", &inputs, format!("lo >= {floor}"), &d));
    }
    if n == 1 && d != DistInterval::exact(gap.clone()) {
        failures.push(witness("identity curve", &inputs, DistInterval::exact(gap), &d));
    }
    failures
}

/// Runs every suite at desk scale.
pub fn check_all(seed: u64) -> Vec<CheckReport> {
    let tol = Rational::new(1, 1_000_000_000).expect("nonzero");
    let mut reports = vec![check_curve(CURVE_MAX_DIM, CURVE_MAX_DEPTH).expect("pinned scale")];
    reports.push(
        check_axioms(2000, &Rational::from_integer(-2), &Rational::from_integer(5), &tol, seed).expect("valid range"),
    );
    reports.push(check_isometry(50, 6, None, &tol, seed).expect("valid scale"));
    for n in 1..=3 {
        reports.push(check_modulus(n, 3, 300, seed).expect("pinned scale"));
    }
    reports
}

impl CheckReport {
    pub fn one_line(&self) -> String {
        format!(
            "{} {}: {} cases, {} skipped, {} failures",
            if self.pass { "PASS" } else { "FAIL" },
            self.name,
            self.cases_run,
            self.skipped,
            self.failures.len()
        )
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn tol() -> Rational {
        Rational::new(1, 1_000_000_000).unwrap()
    }

    #[test]
    fn curve_small_scales() {
        let r = check_curve(2, 2).unwrap();
        assert!(r.pass, "{:?}", r.failures);
        assert_eq!(r.cases_run, 2 + 4 + 4 + 16);
        assert!(r.notes.iter().any(|n| n == "grid n=2 k=2: 16 cells"));
        let r = check_curve(3, 2).unwrap();
        assert!(r.notes.iter().any(|n| n == "grid n=3 k=2: 64 cells"));
        let r = check_curve(1, 3).unwrap();
        assert!(r.pass);
        assert_eq!(r.cases_run, 2 + 4 + 8);
    }

    #[test]
    fn curve_scale_limits() {
        assert!(matches!(check_curve(5, 1), Err(VerifyError::ScaleExceeded { what: "n_max", .. })));
        assert!(matches!(check_curve(2, 4), Err(VerifyError::ScaleExceeded { what: "k_max", .. })));
    }

    #[test]
    fn degenerate_triple() {
        let x = Rational::frac(7, 3);
        assert!(axiom_case(&x, &x, &x, &tol(), 0, 0).is_empty());
    }

    #[test]
    fn axioms_across_zero() {
        let r = check_axioms(200, &Rational::from_integer(-1), &Rational::one(), &tol(), 3).unwrap();
        assert!(r.pass, "{:?}", r.failures);
    }

    #[test]
    fn axioms_report_is_deterministic() {
        let a = check_axioms(100, &Rational::zero(), &Rational::from_integer(5), &tol(), 9).unwrap();
        let b = check_axioms(100, &Rational::zero(), &Rational::from_integer(5), &tol(), 9).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn isometry_small_run() {
        let r = check_isometry(12, 5, None, &tol(), 1).unwrap();
        assert!(r.pass, "{:?}", r.failures);
        assert_eq!(r.cases_run + r.skipped, 12);
    }

    #[test]
    fn isometry_uniform_triple() {
        assert!(isometry_case(SpaceKind::Uniform, 3, 0, None, &tol(), 0, 0).is_empty());
    }

    #[test]
    fn singleton_spaces_are_skipped() {
        let r = check_isometry(10, 1, None, &tol(), 5).unwrap();
        assert_eq!(r.skipped, 10);
        assert_eq!(r.cases_run, 0);
        assert!(r.pass);
        assert_eq!(r.notes.len(), 1);
    }

    #[test]
    fn modulus_runs() {
        for (n, k) in [(1, 5), (2, 3), (3, 2)] {
            let r = check_modulus(n, k, 100, 2).unwrap();
            assert!(r.pass, "n={n} k={k} {:?}", r.failures);
        }
        assert!(matches!(check_modulus(5, 1, 1, 0), Err(VerifyError::ScaleExceeded { .. })));
    }

    #[test]
    fn modulus_degenerate_pair() {
        let x = Rational::frac(5, 3);
        let upper = Rational::scaled_pow2(4, 3);
        let f = modulus_case(2, 3, &x, &x, &upper, &Rational::frac(1, 2), &Rational::scaled_pow2(2, 5), 0, 0);
        assert!(f.is_empty());
    }

    #[test]
    fn sampled_rationals_stay_in_range() {
        let mut rng = case_rng(0, 0);
        let lo = Rational::frac(-2, 1);
        let hi = Rational::frac(5, 1);
        for _ in 0..1000 {
            let v = sample_rational(&mut rng, &lo, &hi);
            assert!(v >= lo && v <= hi);
        }
        let one = Rational::one();
        assert_eq!(sample_rational(&mut rng, &one, &one), one);
    }
}
