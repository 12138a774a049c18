//! Null test for the phase hyperfield `C / R_{>0}`.
//!
//! A phase is an exact rational angle `θ ∈ [0, 1)` standing for `e^{2πiθ}`.
//! A sum of phases is null iff `0` lies in the relative interior of the
//! convex hull of the corresponding unit vectors.

use crate::scalar::Scalar;

/// Reduces an angle to `[0, 1)`.
pub fn normalize_angle<S: Scalar>(theta: &S) -> S {
    theta.fract_part()
}

/// Decides whether `Σ e^{2πiθ_k}` is null, given the angles (any order,
/// repetitions allowed, already normalized to `[0, 1)`).
pub fn is_null_phase<S: Scalar>(angles: &[S]) -> bool {
    if angles.is_empty() {
        return true;
    }
    let mut dirs: Vec<S> = angles.to_vec();
    dirs.sort();
    dirs.dedup();
    let half = S::from_ratio(1, 2);
    match dirs.len() {
        1 => false,
        // the hull is a segment; 0 is inside only for an antipodal pair
        2 => dirs[1].clone() - dirs[0].clone() == half,
        _ => {
            // three distinct points on the circle span the plane; 0 is
            // interior iff no closed half-plane through 0 holds them all
            let mut max_gap = S::one() - dirs[dirs.len() - 1].clone() + dirs[0].clone();
            for w in dirs.windows(2) {
                let gap = w[1].clone() - w[0].clone();
                if gap > max_gap {
                    max_gap = gap;
                }
            }
            max_gap < half
        }
    }
}
