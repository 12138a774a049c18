//! Seeded random polynomials for sweeps and property tests.

use std::sync::Arc;

use rand::Rng;

use crate::algebra::{Elem, Idyll};
use crate::oag::OagValue;
use crate::poly::Polynomial;
use crate::scalar::Scalar;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GenConfig {
    pub max_degree: usize,
    /// Levels (and OAG coordinates) are drawn from `0..=max_level`.
    pub max_level: i64,
    /// Also draw half-integer levels.
    pub halves: bool,
    /// Probability that an inner coefficient is zero.
    pub zero_prob: f64,
}

impl Default for GenConfig {
    fn default() -> Self {
        GenConfig { max_degree: 5, max_level: 3, halves: false, zero_prob: 0.25 }
    }
}

fn level<S: Scalar, R: Rng>(rank: usize, cfg: &GenConfig, rng: &mut R) -> OagValue<S> {
    let coords = (0..rank)
        .map(|_| {
            if cfg.halves {
                S::from_ratio(rng.gen_range(0..=2 * cfg.max_level), 2)
            } else {
                S::from_int(rng.gen_range(0..=cfg.max_level))
            }
        })
        .collect();
    OagValue::Finite(coords)
}

/// A random nonzero element, or `None` if the idyll has no generator.
pub fn random_unit<S: Scalar, R: Rng>(idyll: &Idyll<S>, cfg: &GenConfig, rng: &mut R) -> Option<Elem<S>> {
    if let Some(units) = idyll.units() {
        return Some(units[rng.gen_range(0..units.len())].clone());
    }
    Some(match idyll {
        Idyll::Rationals => {
            let n = rng.gen_range(1..=9) * if rng.gen_bool(0.5) { 1 } else { -1 };
            Elem::Rat(S::from_int(n))
        }
        Idyll::Phase => Elem::Phase(S::from_ratio(rng.gen_range(0..12), 12)),
        Idyll::Oag(n) => Elem::Val(level(*n, cfg, rng)),
        Idyll::Extension(e) => {
            let u = random_unit(&e.base, cfg, rng)?;
            Elem::ext(u, level(e.rank, cfg, rng))
        }
        _ => return None,
    })
}

/// A random polynomial of degree between 1 and `max_degree` with nonzero
/// leading coefficient.
pub fn random_poly<S: Scalar, R: Rng>(idyll: &Arc<Idyll<S>>, cfg: &GenConfig, rng: &mut R) -> Polynomial<S> {
    let n = rng.gen_range(1..=cfg.max_degree.max(1));
    let terms = (0..=n).filter_map(|i| {
        if i < n && rng.gen_bool(cfg.zero_prob) {
            return None;
        }
        random_unit(idyll, cfg, rng).map(|c| (i, c))
    });
    Polynomial::new(idyll.clone(), terms.collect::<Vec<_>>()).expect("distinct degrees")
}
