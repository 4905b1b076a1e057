//! Shared oracles for the integration tests. The score functions here are
//! written out from their definitions independently of the library.

#![allow(dead_code)]

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use tadda::ScoreKind;

pub fn oracle_score(kind: ScoreKind, eps: f64, y_hat: f64, y: f64) -> f64 {
    let d = y_hat - y;
    let inside = |v: f64| -eps <= v && v <= eps;
    match kind {
        ScoreKind::Ae => d.abs(),
        ScoreKind::Se => d * d,
        ScoreKind::Tadda1L1 | ScoreKind::Tadda1L2 => {
            let wrong_up = y_hat > eps && y < -eps;
            let wrong_down = y_hat < -eps && y > eps;
            let gap = if wrong_up {
                y_hat - eps
            } else if wrong_down {
                -(y_hat + eps)
            } else {
                0.0
            };
            if kind == ScoreKind::Tadda1L1 {
                d.abs() + gap
            } else {
                d * d + gap * gap
            }
        }
        ScoreKind::Tadda2L1 => {
            let upper = (y > eps && y_hat <= eps) || (inside(y) && y_hat > eps);
            let lower = (y < -eps && y_hat >= -eps) || (inside(y) && y_hat < -eps);
            let gap = if upper {
                (y_hat - eps).abs()
            } else if lower {
                (y_hat + eps).abs()
            } else {
                0.0
            };
            d.abs() + gap
        }
    }
}

/// Exact expected score under equal-weight atoms, summed in order.
pub fn oracle_expected(kind: ScoreKind, eps: f64, atoms: &[f64], y_hat: f64) -> f64 {
    atoms.iter().map(|&y| oracle_score(kind, eps, y_hat, y)).sum::<f64>() / atoms.len() as f64
}

/// Minimum exact expected score over a `1e-3` grid covering the atoms and
/// the tolerance region with some margin.
pub fn oracle_grid_min(kind: ScoreKind, eps: f64, atoms: &[f64]) -> (f64, f64) {
    let lo = atoms.iter().copied().fold(-eps, f64::min) - 0.01;
    let hi = atoms.iter().copied().fold(eps, f64::max) + 0.01;
    let n = ((hi - lo) / 1e-3).ceil() as usize;
    let mut best = (f64::INFINITY, f64::NAN);
    for i in 0..=n {
        let x = lo + i as f64 * 1e-3;
        let v = oracle_expected(kind, eps, atoms, x);
        if v < best.0 {
            best = (v, x);
        }
    }
    best
}

/// Random window-style atom sets: many exact zeros, repeated values,
/// atoms snapped onto the tolerance boundaries, and log-changes of counts.
pub fn random_atoms(rng: &mut ChaCha8Rng, eps: f64) -> Vec<f64> {
    let n = rng.random_range(1..=12);
    let mut atoms: Vec<f64> = Vec::with_capacity(n);
    for _ in 0..n {
        let r: f64 = rng.random();
        let a = if r < 0.25 {
            0.0
        } else if r < 0.35 {
            if rng.random_bool(0.5) { eps } else { -eps }
        } else if r < 0.45 && !atoms.is_empty() {
            atoms[rng.random_range(0..atoms.len())]
        } else if r < 0.7 {
            let a: u32 = rng.random_range(0..60);
            let b: u32 = rng.random_range(0..60);
            ((a as f64) + 1.0).ln() - ((b as f64) + 1.0).ln()
        } else {
            rng.random_range(-1.5..1.5)
        };
        atoms.push(a);
    }
    atoms
}

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}
