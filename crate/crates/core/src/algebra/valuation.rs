//! Morphisms out of the rational field: the sign map `Q → S` and the
//! `p`-adic valuations `Q → T`.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::Zero;

use crate::algebra::Elem;
use crate::error::{structural, Result};
use crate::oag::OagValue;
use crate::scalar::Scalar;

pub fn is_prime(p: u64) -> bool {
    if p < 2 {
        return false;
    }
    let mut d = 2u64;
    while d * d <= p {
        if p.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

/// Sign of a rational as an element of the sign idyll (`0` maps to zero).
pub fn sign_of_rational<S: Scalar>(q: &S) -> Elem<S> {
    if q.is_zero() {
        Elem::Zero
    } else if q.is_positive() {
        Elem::Sign(1)
    } else {
        Elem::Sign(-1)
    }
}

fn multiplicity_of(mut n: BigInt, p: &BigInt) -> i64 {
    let mut k = 0;
    loop {
        let (q, r) = n.div_rem(p);
        if !r.is_zero() {
            return k;
        }
        n = q;
        k += 1;
    }
}

/// The `p`-adic valuation `v_p(q)` as a rank-one value; `v_p(0) = ∞`.
pub fn padic_valuation<S: Scalar>(q: &S, p: u64) -> Result<OagValue<S>> {
    if !is_prime(p) {
        return structural(format!("{p} is not prime"));
    }
    if q.is_zero() {
        return Ok(OagValue::Infinity);
    }
    let big = q.to_big();
    let p = BigInt::from(p);
    let v = multiplicity_of(big.numer().clone(), &p) - multiplicity_of(big.denom().clone(), &p);
    Ok(OagValue::scalar(S::from_int(v)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_rational::BigRational;

    type Q = BigRational;

    fn int(n: i64) -> Q {
        Q::from_int(n)
    }

    #[test]
    fn signs() {
        assert_eq!(sign_of_rational(&int(-7)), Elem::Sign(-1));
        assert_eq!(sign_of_rational(&int(3)), Elem::Sign(1));
        assert_eq!(sign_of_rational(&int(0)), Elem::Zero);
    }

    #[test]
    fn seventy_two() {
        assert_eq!(padic_valuation(&int(72), 2).unwrap(), OagValue::from_ints(&[3]));
        assert_eq!(padic_valuation(&int(72), 3).unwrap(), OagValue::from_ints(&[2]));
        assert_eq!(padic_valuation(&int(0), 2).unwrap(), OagValue::Infinity);
        assert_eq!(padic_valuation(&Q::from_ratio(5, 12), 2).unwrap(), OagValue::from_ints(&[-2]));
    }

    #[test]
    fn composite_modulus_is_rejected() {
        assert!(padic_valuation(&int(12), 6).is_err());
    }

    #[test]
    fn primality() {
        let primes: Vec<u64> = (0..30).filter(|&n| is_prime(n)).collect();
        assert_eq!(primes, vec![2, 3, 5, 7, 11, 13, 17, 19, 23, 29]);
    }
}
