mod common;

use common::{oracle_expected, oracle_grid_min, random_atoms, rng};
use proptest::prelude::*;
use tadda::opf::{self, brute_force_opf, expected_score, Grid};
use tadda::{DiscreteEmpirical, OpfCase, PredictiveDistribution, ScoreKind, ScoreSpec, SkewNormal};

const E: f64 = 0.048;
const TADDA_KINDS: [ScoreKind; 3] = [ScoreKind::Tadda1L1, ScoreKind::Tadda1L2, ScoreKind::Tadda2L1];

fn spec(kind: ScoreKind, eps: f64) -> ScoreSpec {
    ScoreSpec::new(kind, Some(eps)).unwrap()
}

fn example() -> SkewNormal {
    SkewNormal::from_parts(-0.15, 0.4, 8.0).unwrap()
}

#[test]
fn closed_forms_beat_grid_on_random_windows() {
    let mut r = rng(7);
    for _ in 0..300 {
        for eps in [0.01, E, 0.3] {
            let atoms = random_atoms(&mut r, eps);
            let d = DiscreteEmpirical::new(atoms.clone()).unwrap();
            for kind in TADDA_KINDS {
                let res = opf::opf(&d, &spec(kind, eps)).unwrap();
                let got = oracle_expected(kind, eps, &atoms, res.value);
                let (best, at) = oracle_grid_min(kind, eps, &atoms);
                assert!(
                    got <= best + 1e-9,
                    "{kind:?} eps {eps} atoms {atoms:?}: opf {} ({}) scores {got}, grid {best} at {at}",
                    res.value,
                    res.case
                );
            }
        }
    }
}

proptest! {
    #[test]
    fn closed_forms_beat_grid_on_arbitrary_atoms(
        atoms in prop::collection::vec(-2.0..2.0f64, 1..10),
        eps in 0.005..0.5f64,
    ) {
        let d = DiscreteEmpirical::new(atoms.clone()).unwrap();
        for kind in TADDA_KINDS {
            let res = opf::opf(&d, &spec(kind, eps)).unwrap();
            let got = oracle_expected(kind, eps, &atoms, res.value);
            let (best, _) = oracle_grid_min(kind, eps, &atoms);
            prop_assert!(got <= best + 1e-9, "{:?}: {} vs {}", kind, got, best);
        }
    }

    #[test]
    fn median_and_mean_minimize_ae_and_se(atoms in prop::collection::vec(-2.0..2.0f64, 1..10)) {
        let d = DiscreteEmpirical::new(atoms.clone()).unwrap();
        let (best_ae, _) = oracle_grid_min(ScoreKind::Ae, E, &atoms);
        let (best_se, _) = oracle_grid_min(ScoreKind::Se, E, &atoms);
        prop_assert!(oracle_expected(ScoreKind::Ae, E, &atoms, opf::opf_ae(&d)) <= best_ae + 1e-12);
        prop_assert!(oracle_expected(ScoreKind::Se, E, &atoms, opf::opf_se(&d)) <= best_se + 1e-12);
    }

    #[test]
    fn tadda1_l1_lies_between_boundary_and_median(
        xi in -1.0..1.0f64,
        omega in 0.05..1.0f64,
        alpha in -10.0..10.0f64,
        eps in 0.01..0.3f64,
    ) {
        let d = SkewNormal::from_parts(xi, omega, alpha).unwrap();
        let m = d.median();
        let v = opf::opf_tadda1_l1(&d, eps).unwrap().value;
        if m > eps {
            prop_assert!(eps <= v && v <= m + 1e-9, "{} not in [{}, {}]", v, eps, m);
        } else if m < -eps {
            prop_assert!(m - 1e-9 <= v && v <= -eps, "{} not in [{}, {}]", v, m, -eps);
        } else {
            prop_assert_eq!(v, m);
        }
    }

    #[test]
    fn wide_tolerance_gives_median_and_mean(atoms in prop::collection::vec(-2.0..2.0f64, 1..12)) {
        let d = DiscreteEmpirical::new(atoms).unwrap();
        let eps = 10.0;
        prop_assert_eq!(opf::opf_tadda1_l1(&d, eps).unwrap().value, d.median());
        prop_assert_eq!(opf::opf_tadda1_l2(&d, eps).unwrap().value, d.mean());
        prop_assert_eq!(opf::opf_tadda2_l1(&d, eps).unwrap().value, d.median());
    }

    #[test]
    fn opf_respects_sign_symmetry(atoms in prop::collection::vec(-2.0..2.0f64, 1..12), eps in 0.005..0.5f64) {
        let d = DiscreteEmpirical::new(atoms.clone()).unwrap();
        let mirrored = DiscreteEmpirical::new(atoms.iter().map(|a| -a).collect()).unwrap();
        // L2 has a unique minimizer, so it must mirror exactly
        let a = opf::opf_tadda1_l2(&d, eps).unwrap().value;
        let b = opf::opf_tadda1_l2(&mirrored, eps).unwrap().value;
        prop_assert!((a + b).abs() < 1e-12);
    }
}

#[test]
fn wide_tolerance_on_skew_normal() {
    let d = example();
    assert_eq!(opf::opf_tadda1_l1(&d, 100.0).unwrap().value, d.median());
    assert_eq!(opf::opf_tadda1_l2(&d, 100.0).unwrap().value, d.mean());
}

#[test]
fn skew_normal_example_opf() {
    let r = opf::opf_tadda1_l1(&example(), E).unwrap();
    assert!((r.value - 0.060).abs() < 1e-3, "{}", r.value);
    assert_eq!(r.case, OpfCase::HighConfidencePositive);
    assert_eq!(r.case.label(), "high-confidence-positive");
}

#[test]
fn skew_normal_example_matches_brute_force() {
    let d = example();
    let grid = Grid::new(-0.2, 0.4, 1e-3).unwrap();
    for kind in TADDA_KINDS {
        let s = spec(kind, E);
        let closed = opf::opf(&d, &s).unwrap().value;
        let brute = brute_force_opf(&d, &s, &grid, 1_000_000, 17).unwrap();
        let tol = if kind == ScoreKind::Tadda1L2 { 1e-3 } else { 2e-3 };
        assert!((closed - brute).abs() <= tol, "{kind:?}: closed {closed} brute {brute}");
    }
}

#[test]
fn shrunk_mean_on_skew_normal() {
    let r = opf::opf_tadda1_l2(&example(), E).unwrap();
    assert_eq!(r.case, OpfCase::ShrunkMeanPositive);
    assert!(E < r.value && r.value < example().mean());
}

#[test]
fn zero_beats_mean_under_tadda_for_skew_normal() {
    let d = example();
    let s = ScoreSpec::tadda1_l1(E).unwrap();
    let zero = expected_score(&d, &s, 0.0, 2_000_000, 5).unwrap();
    let mean = expected_score(&d, &s, d.mean(), 2_000_000, 5).unwrap();
    let best = expected_score(&d, &s, opf::opf_tadda1_l1(&d, E).unwrap().value, 2_000_000, 5).unwrap();
    assert!(zero < mean);
    assert!(best < zero);
}

#[test]
fn even_split_goes_to_tolerance_boundary() {
    let d = DiscreteEmpirical::new(vec![-1.0, 1.0]).unwrap();
    let r = opf::opf_tadda1_l1(&d, E).unwrap();
    assert!(r.value.abs() <= E);
    let (best, _) = oracle_grid_min(ScoreKind::Tadda1L1, E, &[-1.0, 1.0]);
    assert!(oracle_expected(ScoreKind::Tadda1L1, E, &[-1.0, 1.0], r.value) <= best + 1e-12);
}

#[test]
fn discrete_expected_score_is_exact() {
    let atoms = vec![-0.3, 0.0, 0.2, 0.5];
    let d = DiscreteEmpirical::new(atoms.clone()).unwrap();
    for kind in TADDA_KINDS {
        let got = expected_score(&d, &spec(kind, E), 0.07, 0, 0).unwrap();
        assert!((got - oracle_expected(kind, E, &atoms, 0.07)).abs() < 1e-15);
    }
}

#[test]
fn rejects_bad_tolerance() {
    let d = example();
    assert!(opf::opf_tadda1_l1(&d, 0.0).is_err());
    assert!(opf::opf_tadda2_l1(&d, -1.0).is_err());
    assert!(opf::opf_tadda1_l2(&d, f64::NAN).is_err());
}
