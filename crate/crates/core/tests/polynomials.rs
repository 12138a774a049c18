use std::sync::Arc;

use idyll::algebra::valuation::{padic_valuation, sign_of_rational};
use idyll::gen::{random_poly, random_unit, GenConfig};
use idyll::mult::divide_once;
use idyll::newton::{argmin_set, initial_form_at, initial_form_recursive, initial_form_split, newton_polygon};
use idyll::poly::{factor_check, sign_of_poly, trop_of_rational};
use idyll::text::{format_poly, parse_poly, poly_from_json, poly_to_json};
use idyll::{Elem, FormalSum, Idyll, OagValue, Polynomial, Rat, Scalar};
use proptest::prelude::*;
use rand::rngs::StdRng;
use rand::SeedableRng;

fn over(name: &str) -> Arc<Idyll> {
    Arc::new(Idyll::from_name(name).unwrap())
}

fn random(name: &str, seed: u64, cfg: GenConfig) -> Polynomial {
    random_poly(&over(name), &cfg, &mut StdRng::seed_from_u64(seed))
}

const NAMES: &[&str] = &[
    "krasner",
    "sign",
    "f1pm",
    "field:Q",
    "field:GF(7)",
    "quot:GF(5)/{1,4}",
    "phase",
    "oag:rank-2",
    "trop",
    "trop-real",
    "trop:rank-2",
    "trop-real:rank-3",
    "ext:quot:GF(7)/{1,6}:2",
];

fn rational_poly() -> impl Strategy<Value = Polynomial> {
    prop::collection::vec(-30i64..=30, 1..=6).prop_filter_map("nonzero", |cs| {
        let terms: Vec<(usize, Elem)> =
            cs.iter().enumerate().filter(|(_, c)| **c != 0).map(|(i, c)| (i, Elem::Rat(Rat::from_int(*c)))).collect();
        (!terms.is_empty()).then(|| Polynomial::new(over("field:Q"), terms).unwrap())
    })
}

fn sorted(s: &FormalSum) -> Vec<Elem> {
    let mut v = s.terms().to_vec();
    v.sort();
    v
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(500))]

    #[test]
    fn grammar_round_trips(seed in any::<u64>(), name in prop::sample::select(NAMES), halves in any::<bool>()) {
        let cfg = GenConfig { max_degree: 7, halves, ..GenConfig::default() };
        let f = random(name, seed, cfg);
        let text = format_poly(&f);
        prop_assert_eq!(&parse_poly(&text, f.idyll().clone()).unwrap(), &f, "{}", text);
        prop_assert_eq!(&poly_from_json::<Rat>(&poly_to_json(&f)).unwrap(), &f);
    }

    #[test]
    fn substitution_carries_factorizations(
        seed in any::<u64>(),
        name in prop::sample::select(vec!["sign", "krasner", "quot:GF(5)/{1,4}"]),
    ) {
        let b = over(name);
        let mut rng = StdRng::seed_from_u64(seed);
        let cfg = GenConfig { max_degree: 5, ..GenConfig::default() };
        let f = random_poly(&b, &cfg, &mut rng);
        let c = random_unit(&b, &cfg, &mut rng).unwrap();
        let a = random_unit(&b, &cfg, &mut rng).unwrap();
        let ca = b.mul(&c, &a).unwrap();
        let fc = f.monomial_substitute(&c).unwrap();
        for g in divide_once(&f, &ca).unwrap() {
            let gc = g.monomial_substitute(&c).unwrap().scale(&c).unwrap();
            prop_assert!(factor_check(&fc, &a, &gc).unwrap(), "{} at {} by {}", f, ca, g);
        }
    }

    #[test]
    fn evaluation_commutes_with_morphisms(f in rational_poly(), a in (-6i64..=6).prop_filter("nonzero", |a| *a != 0), p in prop::sample::select(vec![2u64, 3, 5])) {
        let a = Elem::Rat(Rat::from_int(a));
        let sum = f.eval_sum(&a).unwrap();
        let Elem::Rat(q) = &a else { unreachable!() };

        let signs = FormalSum::new(sum.terms().iter().map(|t| match t { Elem::Rat(r) => sign_of_rational(r), _ => unreachable!() }));
        let direct = sign_of_poly(&f).unwrap().eval_sum(&sign_of_rational(q)).unwrap();
        prop_assert_eq!(sorted(&signs), sorted(&direct));

        let trop = |r: &Rat| Elem::ext(Elem::One, padic_valuation(r, p).unwrap());
        let vals = FormalSum::new(sum.terms().iter().map(|t| match t { Elem::Rat(r) => trop(r), _ => unreachable!() }));
        let direct = trop_of_rational(&f, p).unwrap().eval_sum(&trop(q)).unwrap();
        prop_assert_eq!(sorted(&vals), sorted(&direct));
    }

    #[test]
    fn argmin_is_the_hull_face(seed in any::<u64>(), num in -12i64..=12, den in 1i64..=4) {
        let cfg = GenConfig { max_degree: 8, max_level: 4, halves: true, zero_prob: 0.3 };
        let f = random("trop", seed, cfg);
        let s = Rat::from_ratio(num, den);
        let (set, _) = argmin_set(&f, &OagValue::scalar(s.clone())).unwrap();
        let np = newton_polygon(&f).unwrap();
        let face: Vec<usize> = match np.edge_with_slope(&-s.clone()) {
            Some(e) => {
                let y0 = np.hull.iter().find(|p| p.0 == e.start).unwrap().1.clone();
                np.points
                    .iter()
                    .filter(|(i, y)| *i >= e.start && *i <= e.end && *y == y0.clone() - s.clone() * Rat::from_int((*i - e.start) as i64))
                    .map(|p| p.0)
                    .collect()
            }
            None => {
                let h = &np.hull;
                let k = (0..h.len())
                    .find(|&k| {
                        let left = k == 0 || np.edges[k - 1].slope < -s.clone();
                        let right = k + 1 == h.len() || np.edges[k].slope > -s.clone();
                        left && right
                    })
                    .unwrap();
                vec![h[k].0]
            }
        };
        prop_assert_eq!(set, face);
    }

    #[test]
    fn initial_forms_one_coordinate_at_a_time(
        seed in any::<u64>(),
        name in prop::sample::select(vec!["trop:rank-2", "trop:rank-3", "trop-real:rank-2", "ext:sign:3"]),
        gamma in prop::collection::vec((-3i64..=3, 1i64..=2), 3),
    ) {
        let cfg = GenConfig { max_degree: 6, max_level: 3, halves: true, zero_prob: 0.2 };
        let f = random(name, seed, cfg);
        let rank = f.idyll().as_extension().unwrap().rank;
        let g = OagValue::Finite(gamma[..rank].iter().map(|(n, d)| Rat::from_ratio(*n, *d)).collect());
        prop_assert_eq!(initial_form_recursive(&f, &g).unwrap(), initial_form_split(&f, &g).unwrap());
    }

    #[test]
    fn initial_form_moves_with_the_unit(seed in any::<u64>(), level in (-4i64..=4, 1i64..=2), b in prop::sample::select(vec![1i8, -1])) {
        let f = random("trop-real", seed, GenConfig { halves: true, ..GenConfig::default() });
        let gamma = OagValue::scalar(Rat::from_ratio(level.0, level.1));
        let at_b = initial_form_at(&f, &Elem::ext(Elem::Sign(b), gamma.clone())).unwrap();
        let fb = f.monomial_substitute(&Elem::ext(Elem::Sign(b), OagValue::zero(1))).unwrap();
        let at_one = initial_form_at(&fb, &Elem::ext(Elem::Sign(1), gamma)).unwrap();
        prop_assert_eq!(at_b, at_one);
    }
}
