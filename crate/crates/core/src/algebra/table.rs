//! User-supplied finite idylls given by a multiplication table and a null
//! predicate.
//!
//! Such descriptors are taken on trust: run
//! [`check_idyll_axioms`](crate::algebra::axioms::check_idyll_axioms) before
//! computing with one.

use std::fmt;
use std::sync::Arc;

use crate::error::{structural, Result};

pub type NullPredicate = Arc<dyn Fn(&[u32]) -> bool + Send + Sync>;

/// Elements are `0..size`; index `0` is the zero and index `1` the one.
#[derive(Clone)]
pub struct FiniteIdyll {
    pub name: String,
    pub mul: Vec<Vec<u32>>,
    pub epsilon: Option<u32>,
    pub null: NullPredicate,
    pub whole: bool,
    pub pasture: bool,
}

impl FiniteIdyll {
    pub fn new(name: impl Into<String>, mul: Vec<Vec<u32>>, epsilon: Option<u32>, null: NullPredicate) -> Result<Self> {
        let n = mul.len();
        if n < 2 {
            return structural("a finite idyll needs at least the elements 0 and 1");
        }
        if mul.iter().any(|row| row.len() != n || row.iter().any(|&x| x as usize >= n)) {
            return structural("multiplication table is not square or has out-of-range entries");
        }
        if epsilon.is_some_and(|e| e as usize >= n) {
            return structural("epsilon out of range");
        }
        Ok(FiniteIdyll { name: name.into(), mul, epsilon, null, whole: false, pasture: false })
    }

    pub fn size(&self) -> usize {
        self.mul.len()
    }

    pub fn with_flags(mut self, whole: bool, pasture: bool) -> Self {
        self.whole = whole;
        self.pasture = pasture;
        self
    }

    /// `F_1`: `{0, 1}` with null ideal `{0}`. Not an idyll (it has no `ε`);
    /// useful as a negative control.
    pub fn f1() -> Self {
        FiniteIdyll::new("F1", vec![vec![0, 0], vec![0, 1]], None, Arc::new(|s: &[u32]| s.is_empty()))
            .expect("valid table")
    }
}

impl fmt::Debug for FiniteIdyll {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("FiniteIdyll")
            .field("name", &self.name)
            .field("size", &self.size())
            .field("epsilon", &self.epsilon)
            .finish()
    }
}
