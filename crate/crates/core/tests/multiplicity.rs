use std::sync::Arc;

use idyll::gen::{random_poly, random_unit, GenConfig};
use idyll::mult::lift::{lift_chain, lift_factorization};
use idyll::mult::{
    degree_bound_check, divide_once, mult_closed_form, multiplicity, root_candidates, search_lower_bound, Engine,
};
use idyll::newton::initial_form_at;
use idyll::oracle::exhaustive_multiplicity;
use idyll::poly::{factor_check, sign_of_poly, trop_of_rational};
use idyll::{Elem, Idyll, OagValue, Polynomial, Rat, Scalar};
use proptest::prelude::*;
use rand::rngs::StdRng;
use rand::SeedableRng;

fn over(name: &str) -> Arc<Idyll> {
    Arc::new(Idyll::from_name(name).unwrap())
}

fn random(name: &str, seed: u64, cfg: &GenConfig) -> Polynomial {
    random_poly(&over(name), cfg, &mut StdRng::seed_from_u64(seed))
}

fn mult(f: &Polynomial, a: &Elem) -> usize {
    multiplicity(f, a).unwrap().0
}

fn nonzero_candidates(f: &Polynomial) -> Vec<Elem> {
    root_candidates(f).unwrap().into_iter().filter(|a| !a.is_zero()).collect()
}

/// `Π (x − r)` times `x² + 1`, whose rational roots are exactly the `r`.
fn with_roots(roots: &[i64]) -> Polynomial {
    let q = over("field:Q");
    let mut coeffs = vec![Rat::from_int(1), Rat::from_int(0), Rat::from_int(1)];
    for r in roots {
        let mut next = vec![Rat::from_int(0); coeffs.len() + 1];
        for (i, c) in coeffs.iter().enumerate() {
            next[i + 1] += c.clone();
            next[i] -= c.clone() * Rat::from_int(*r);
        }
        coeffs = next;
    }
    let terms = coeffs.into_iter().enumerate().filter(|(_, c)| *c != Rat::from_int(0)).map(|(i, c)| (i, Elem::Rat(c)));
    Polynomial::new(q, terms.collect::<Vec<_>>()).unwrap()
}

fn small_cfg() -> GenConfig {
    GenConfig { max_degree: 5, max_level: 3, halves: true, zero_prob: 0.25 }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn multiplicity_is_that_of_the_initial_form(seed in any::<u64>(), name in prop::sample::select(vec!["trop-real", "trop"])) {
        let f = random(name, seed, &small_cfg());
        for a in nonzero_candidates(&f) {
            let n = initial_form_at(&f, &a).unwrap().to_base().unwrap();
            let base_one = n.idyll().one();
            prop_assert_eq!(mult(&f, &a), exhaustive_multiplicity(&n, &base_one).unwrap(), "{} at {}", f, a);
        }
    }

    #[test]
    fn truncated_search_stays_below_the_initial_form(seed in any::<u64>(), cap in 1usize..40) {
        let f = random("trop-real", seed, &GenConfig { max_degree: 7, ..small_cfg() });
        for a in nonzero_candidates(&f) {
            let n = initial_form_at(&f, &a).unwrap().to_base().unwrap();
            let bound = exhaustive_multiplicity(&n, &n.idyll().one()).unwrap();
            let (m, exact) = search_lower_bound(&f, &a, cap).unwrap();
            prop_assert!(m <= bound);
            if exact {
                prop_assert_eq!(m, bound);
            }
        }
    }

    #[test]
    fn morphisms_do_not_lower_multiplicity(
        roots in prop::collection::vec(prop::sample::select(vec![-6i64, -4, -3, -2, -1, 1, 2, 3, 4, 6, 12]), 1..=4),
        p in prop::sample::select(vec![2u64, 3]),
    ) {
        let f = with_roots(&roots);
        let s = sign_of_poly(&f).unwrap();
        let t = trop_of_rational(&f, p).unwrap();
        let mut distinct = roots.clone();
        distinct.sort();
        distinct.dedup();
        for r in distinct {
            let count = roots.iter().filter(|x| **x == r).count();
            let a = Elem::Rat(Rat::from_int(r));
            prop_assert_eq!(mult(&f, &a), count);
            let sign = Elem::Sign(if r > 0 { 1 } else { -1 });
            prop_assert!(count <= mult(&s, &sign));
            let v = idyll::algebra::valuation::padic_valuation(&Rat::from_int(r), p).unwrap();
            prop_assert!(count <= mult(&t, &Elem::ext(Elem::One, v)));
        }
    }

    #[test]
    fn monomial_substitution_moves_roots(
        seed in any::<u64>(),
        name in prop::sample::select(vec!["sign", "krasner", "quot:GF(5)/{1,4}", "trop", "trop-real"]),
    ) {
        let b = over(name);
        let mut rng = StdRng::seed_from_u64(seed);
        let cfg = GenConfig { max_degree: 4, max_level: 2, ..small_cfg() };
        let f = random_poly(&b, &cfg, &mut rng);
        let c = random_unit(&b, &cfg, &mut rng).unwrap();
        let fc = f.monomial_substitute(&c).unwrap();
        let roots = if b.is_finite() { nonzero_candidates(&f) } else { vec![random_unit(&b, &cfg, &mut rng).unwrap()] };
        for ca in roots {
            let a = b.mul(&b.inv(&c).unwrap(), &ca).unwrap();
            prop_assert_eq!(mult(&fc, &a), mult(&f, &ca));
        }
    }

    #[test]
    fn initial_form_multiplicity_ignores_the_level(seed in any::<u64>(), name in prop::sample::select(vec!["trop-real", "trop", "ext:quot:GF(5)/{1,4}:1"])) {
        let f = random(name, seed, &GenConfig { max_degree: 4, ..small_cfg() });
        for a in nonzero_candidates(&f) {
            let init = initial_form_at(&f, &a).unwrap();
            let n = init.to_base().unwrap();
            let one = f.idyll().one();
            prop_assert_eq!(mult(&init.poly, &one), mult(&n, &n.idyll().one()));
        }
    }

    #[test]
    fn lifts_divide_and_keep_the_initial_form(seed in any::<u64>(), name in prop::sample::select(vec!["trop-real", "trop", "ext:sign:2"])) {
        let f = random(name, seed, &small_cfg());
        for a in nonzero_candidates(&f) {
            let m = mult(&f, &a);
            let chain = lift_chain(&f, &a).unwrap();
            prop_assert_eq!(chain.len(), m);
            prop_assert!(chain.verify(&f).unwrap());
            let n = initial_form_at(&f, &a).unwrap().to_base().unwrap();
            for g in divide_once(&n, &n.idyll().one()).unwrap() {
                let lifted = lift_factorization(&f, &a, &g).unwrap();
                prop_assert!(factor_check(&f, &a, &lifted).unwrap());
            }
        }
    }

    #[test]
    fn degree_bound(seed in any::<u64>(), name in prop::sample::select(vec!["krasner", "sign", "trop", "trop-real", "trop:rank-2", "ext:sign:2"])) {
        let f = random(name, seed, &GenConfig { max_degree: 6, ..small_cfg() });
        let r = degree_bound_check(&f, Engine::Both).unwrap();
        prop_assert!(r.pass, "{}: {} > {}", f, r.sum, r.degree);
    }
}

#[test]
fn closed_forms_on_small_levels() {
    let t = over("trop");
    let f = Polynomial::new(
        t,
        [(0, 2), (1, 1), (2, 0), (3, 0)].map(|(i, v)| (i, Elem::ext(Elem::One, OagValue::from_ints(&[v])))),
    )
    .unwrap();
    let one = Elem::ext(Elem::One, OagValue::from_ints(&[1]));
    assert_eq!(mult_closed_form(&f, &one).unwrap(), 2);
    assert_eq!(mult(&f, &one), 2);
}
