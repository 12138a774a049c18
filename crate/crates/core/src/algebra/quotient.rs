//! Quotient hyperfields `GF(p) / G` for a subgroup `G ≤ GF(p)^×`.

use crate::algebra::valuation::is_prime;
use crate::error::{structural, Result};

/// `GF(p)/G`. Classes are represented by their smallest member.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct QuotientHyperfield {
    p: u64,
    subgroup: Vec<u64>,
    canon: Vec<u64>,
    reps: Vec<u64>,
}

impl QuotientHyperfield {
    pub fn new(p: u64, subgroup: &[u64]) -> Result<Self> {
        if !is_prime(p) {
            return structural(format!("{p} is not prime"));
        }
        let mut g: Vec<u64> = subgroup.iter().map(|&x| x % p).collect();
        g.sort_unstable();
        g.dedup();
        if g.is_empty() || g[0] == 0 {
            return structural("subgroup must be a nonempty set of units");
        }
        if !g.contains(&1) {
            return structural("subgroup must contain 1");
        }
        for &a in &g {
            for &b in &g {
                if g.binary_search(&(a * b % p)).is_err() {
                    return structural(format!("{{{}}} is not closed under multiplication", join(&g)));
                }
            }
        }
        let mut canon = vec![0u64; p as usize];
        let mut reps = Vec::new();
        for r in 1..p {
            if canon[r as usize] != 0 {
                continue;
            }
            reps.push(r);
            for &h in &g {
                canon[(r * h % p) as usize] = r;
            }
        }
        Ok(QuotientHyperfield { p, subgroup: g, canon, reps })
    }

    pub fn prime(&self) -> u64 {
        self.p
    }

    pub fn subgroup(&self) -> &[u64] {
        &self.subgroup
    }

    /// Canonical representatives of the nonzero classes.
    pub fn classes(&self) -> &[u64] {
        &self.reps
    }

    /// Canonical representative of the class of `r` (`0` for zero).
    pub fn canonical(&self, r: u64) -> u64 {
        self.canon[(r % self.p) as usize]
    }

    pub fn is_canonical(&self, r: u64) -> bool {
        r < self.p && self.canonical(r) == r
    }

    pub fn mul(&self, a: u64, b: u64) -> u64 {
        self.canonical(a * b % self.p)
    }

    pub fn inv(&self, a: u64) -> u64 {
        self.canonical(mod_pow(a, self.p - 2, self.p))
    }

    pub fn coset(&self, r: u64) -> impl Iterator<Item = u64> + '_ {
        self.subgroup.iter().map(move |&h| r * h % self.p)
    }

    /// Whether representatives of the given classes can be chosen to sum to
    /// zero in `GF(p)`.
    pub fn is_null(&self, classes: &[u64]) -> bool {
        let p = self.p as usize;
        let mut reach = vec![false; p];
        reach[0] = true;
        for &c in classes {
            let mut next = vec![false; p];
            for (s, _) in reach.iter().enumerate().filter(|(_, &r)| r) {
                for x in self.coset(c) {
                    next[(s + x as usize) % p] = true;
                }
            }
            reach = next;
        }
        reach[0]
    }

    pub fn name(&self) -> String {
        format!("quot:GF({})/{{{}}}", self.p, join(&self.subgroup))
    }
}

fn join(xs: &[u64]) -> String {
    xs.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(",")
}

pub(crate) fn mod_pow(mut base: u64, mut exp: u64, m: u64) -> u64 {
    let mut acc = 1 % m;
    base %= m;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = acc * base % m;
        }
        base = base * base % m;
        exp >>= 1;
    }
    acc
}
