use proptest::prelude::*;
use tadda::distributions::{tail_masses, DiscreteEmpirical, PredictiveDistribution, SkewNormal};

fn example() -> SkewNormal {
    SkewNormal::from_parts(-0.15, 0.4, 8.0).unwrap()
}

/// Composite Simpson rule on `n` (even) panels; independent of the
/// Owen's-T route used by the library CDF.
fn simpson<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, n: usize) -> f64 {
    let h = (b - a) / n as f64;
    let mut s = f(a) + f(b);
    for i in 1..n {
        let x = a + i as f64 * h;
        s += if i % 2 == 1 { 4.0 } else { 2.0 } * f(x);
    }
    s * h / 3.0
}

#[test]
fn density_integrates_to_one() {
    let d = example();
    let total = simpson(|x| d.pdf(x).unwrap(), -5.0, 5.0, 20_000);
    assert!((total - 1.0).abs() < 1e-8, "{total}");
}

#[test]
fn density_is_derivative_of_cdf() {
    let d = example();
    for x in [-0.3, 0.0, 0.12, 0.5, 1.1] {
        let h = 1e-5;
        let fd = (d.cdf(x + h) - d.cdf(x - h)) / (2.0 * h);
        assert!((fd - d.pdf(x).unwrap()).abs() < 1e-6, "x={x}: {fd} vs {}", d.pdf(x).unwrap());
    }
}

#[test]
fn cdf_matches_pdf_quadrature() {
    for (xi, omega, alpha) in [(-0.15, 0.4, 8.0), (0.0, 1.0, -3.0), (1.0, 0.2, 0.5), (0.0, 1.0, 0.0)] {
        let d = SkewNormal::from_parts(xi, omega, alpha).unwrap();
        let lo = xi - 12.0 * omega;
        for k in 0..=20 {
            let x = xi - 3.0 * omega + k as f64 * 0.35 * omega;
            let q = simpson(|t| d.pdf(t).unwrap(), lo, x, 40_000);
            assert!((d.cdf(x) - q).abs() < 1e-9, "({xi},{omega},{alpha}) x={x}: {} vs {q}", d.cdf(x));
        }
    }
}

#[test]
fn cdf_matches_monte_carlo() {
    let d = example();
    let mut s = d.sample(10_000_000, 2024);
    s.sort_by(f64::total_cmp);
    let n = s.len() as f64;
    let mut worst: f64 = 0.0;
    for k in 0..=60 {
        let x = -0.4 + k as f64 * 0.025;
        let emp = s.partition_point(|&v| v <= x) as f64 / n;
        worst = worst.max((emp - d.cdf(x)).abs());
    }
    assert!(worst < 3e-4, "sup distance {worst}");
}

#[test]
fn confidence_above_tolerance() {
    let p = example().prob_above(0.048);
    assert!((p - 0.62).abs() <= 0.01, "{p}");
}

#[test]
fn quantile_round_trip() {
    for (xi, omega, alpha) in [(-0.15, 0.4, 8.0), (0.0, 1.0, 0.0), (2.0, 3.0, -5.0)] {
        let d = SkewNormal::from_parts(xi, omega, alpha).unwrap();
        let lo = d.quantile(0.001).unwrap();
        let hi = d.quantile(0.999).unwrap();
        for k in 0..=50 {
            let x = lo + (hi - lo) * k as f64 / 50.0;
            let back = d.quantile(d.cdf(x)).unwrap();
            assert!((back - x).abs() < 1e-7, "({xi},{omega},{alpha}) {x} -> {back}");
        }
        for p in [0.01, 0.3, 0.5, 0.77, 0.99] {
            assert!((d.cdf(d.quantile(p).unwrap()) - p).abs() <= 1e-9);
        }
    }
}

#[test]
fn sample_mean_within_three_standard_errors() {
    let d = example();
    let s = d.sample(10_000_000, 99);
    let n = s.len() as f64;
    let m = s.iter().sum::<f64>() / n;
    let se = (d.variance() / n).sqrt();
    assert!((m - d.mean()).abs() < 3.0 * se, "{m} vs {}", d.mean());
    assert!((m - 0.167).abs() < 0.002);
}

#[test]
fn normal_reduction_ks_distance() {
    let d = SkewNormal::from_parts(0.0, 1.0, 0.0).unwrap();
    let mut s = d.sample(1_000_000, 5);
    s.sort_by(f64::total_cmp);
    let n = s.len() as f64;
    let ks = s
        .iter()
        .enumerate()
        .map(|(i, &x)| {
            let f = d.cdf(x);
            (f - i as f64 / n).abs().max(((i + 1) as f64 / n - f).abs())
        })
        .fold(0.0, f64::max);
    assert!(ks < 0.002, "KS {ks}");
}

#[test]
fn skew_direction_orders_mean_and_median() {
    for alpha in [-10.0, -3.0, -0.5, 0.5, 3.0, 10.0] {
        for omega in [0.1, 1.0, 4.0] {
            let d = SkewNormal::from_parts(0.2, omega, alpha).unwrap();
            if alpha > 0.0 {
                assert!(d.mean() > d.median());
            } else {
                assert!(d.mean() < d.median());
            }
        }
    }
}

#[test]
fn continuous_tail_identities() {
    let d = example();
    for t in [-1.0, -0.048, 0.0, 0.048, 0.7] {
        assert_eq!(d.prob_at(t), 0.0);
        assert!((d.prob_below(t) - d.cdf(t)).abs() <= 1e-9);
        assert!((d.prob_above(t) - (1.0 - d.cdf(t))).abs() <= 1e-9);
        assert!((d.prob_below(t) + d.prob_at(t) + d.prob_above(t) - 1.0).abs() <= 1e-12);
    }
}

fn atoms_strategy() -> impl Strategy<Value = Vec<f64>> {
    let value = prop_oneof![
        (-3.0..3.0f64),
        Just(0.0),
        Just(0.048),
        Just(-0.048),
        Just(1.0),
    ];
    prop::collection::vec(value, 1..=12)
}

proptest! {
    #[test]
    fn discrete_mass_identities(atoms in atoms_strategy(), t in -3.0..3.0f64) {
        let d = DiscreteEmpirical::new(atoms.clone()).unwrap();
        for t in [t, atoms[0], -0.048, 0.048] {
            let sum = d.prob_below(t) + d.prob_at(t) + d.prob_above(t);
            prop_assert!((sum - 1.0).abs() <= 1e-12);
            prop_assert!((d.prob_below(t) - (d.cdf(t) - d.prob_at(t))).abs() <= 1e-12);
            prop_assert!((d.prob_above(t) - (1.0 - d.cdf(t))).abs() <= 1e-12);
        }
    }

    #[test]
    fn discrete_tail_masses_count_exactly(atoms in atoms_strategy(), eps in prop_oneof![Just(0.048), 0.001..1.0f64]) {
        let d = DiscreteEmpirical::new(atoms.clone()).unwrap();
        let w = atoms.len() as f64;
        let t = d.tail_probs(eps);
        let below = atoms.iter().filter(|&&a| a < -eps).count() as f64;
        let at = atoms.iter().filter(|&&a| a == -eps).count() as f64;
        let above = atoms.iter().filter(|&&a| a > eps).count() as f64;
        let inside = atoms.iter().filter(|&&a| a > -eps && a <= eps).count() as f64;
        prop_assert_eq!((t.below, t.at_minus, t.above), (below / w, at / w, above / w));
        prop_assert_eq!(below + at + above + inside, w);
        prop_assert_eq!(tail_masses(&d, eps), t);
    }

    #[test]
    fn type1_is_generalized_inverse(atoms in atoms_strategy(), p in 0.0001..=1.0f64) {
        let d = DiscreteEmpirical::new(atoms).unwrap();
        let q = d.quantile_type1(p).unwrap();
        // smallest atom whose cdf reaches p
        let sorted = d.sorted_atoms();
        let brute = sorted.iter().copied().find(|&x| d.cdf(x) >= p - 1e-9).unwrap();
        prop_assert_eq!(q, brute);
        prop_assert!(d.quantile(d.cdf(q)).unwrap() <= q);
    }

    #[test]
    fn discrete_cdf_monotone(atoms in atoms_strategy(), a in -4.0..4.0f64, b in -4.0..4.0f64) {
        let d = DiscreteEmpirical::new(atoms).unwrap();
        let (lo, hi) = if a < b { (a, b) } else { (b, a) };
        prop_assert!(d.cdf(lo) <= d.cdf(hi));
        prop_assert_eq!(d.cdf(-1e9), 0.0);
        prop_assert_eq!(d.cdf(1e9), 1.0);
    }
}
