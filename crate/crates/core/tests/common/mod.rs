//! Shared helpers and independent oracles for the integration suites.

#![allow(dead_code)]

use num_complex::Complex64;
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

use cperiod::signal::Builtin;
use cperiod::{Signal, UnitComplex};

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Random unit multiplier: half rational (small p/q), half declared
/// irrational.
pub fn random_unit(rng: &mut ChaCha8Rng) -> UnitComplex {
    if rng.gen_bool(0.5) {
        let q = rng.gen_range(1..=6u64);
        let p = rng.gen_range(-(q as i64)..=q as i64);
        UnitComplex::from_rational(p, q).expect("q >= 1")
    } else {
        UnitComplex::from_phi(rng.gen_range(-1.0..1.0)).expect("finite phi")
    }
}

/// Pool of Lipschitz-registered builtins for randomized criteria.
pub fn builtin_pool() -> Vec<(&'static str, Signal)> {
    vec![
        (
            "exponential",
            Builtin::Exponential { mu: 1.0 }.build().unwrap(),
        ),
        (
            "exponential-slow",
            Builtin::Exponential { mu: 0.437 }.build().unwrap(),
        ),
        ("cosine", Builtin::Cosine.build().unwrap()),
        ("kader-g", Builtin::KaderG.build().unwrap()),
        (
            "strina",
            Builtin::StrinaSeries { p: 3, q: 1, n: 8 }.build().unwrap(),
        ),
        (
            "haraux-2",
            Builtin::HarauxSouplet { base: 2, n: 8 }.build().unwrap(),
        ),
        (
            "haraux-3",
            Builtin::HarauxSouplet { base: 3, n: 8 }.build().unwrap(),
        ),
        (
            "devries",
            Builtin::Devries {
                ps: vec![],
                i_max: Some(3),
            }
            .build()
            .unwrap(),
        ),
        ("dugorocne", Builtin::DugorocneF { n: 8 }.build().unwrap()),
        ("bohr", Builtin::BohrRecurrent { n_max: 4 }.build().unwrap()),
    ]
}

/// Brute-force admissible set for the orbit lemma: all `l <= l_hi` with
/// `|c^l - target| < epsilon`, each power recomputed from scratch.
pub fn orbit_oracle(phi: f64, target: Complex64, epsilon: f64, l_hi: u64) -> Vec<u64> {
    let mut out = Vec::new();
    for l in 1..=l_hi {
        let angle = (phi * l as f64).rem_euclid(2.0);
        let z = Complex64::cis(std::f64::consts::PI * angle);
        if (z - target).norm() < epsilon {
            out.push(l);
        }
    }
    out
}

/// Pointwise defect of a scalar signal at a single `t` (test-side oracle).
pub fn pointwise_defect(f: &Signal, t: f64, tau: f64, c: Complex64) -> f64 {
    let a = f.eval(t + tau).unwrap();
    let b = f.eval(t).unwrap();
    a.iter()
        .zip(b.iter())
        .map(|(x, y)| (x - c * y).norm_sqr())
        .sum::<f64>()
        .sqrt()
}
