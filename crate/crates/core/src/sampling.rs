//! Seeded random rational parameter points for the exact-identity suites.

use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::algebra::rational::{pow, rat};
use crate::algebra::ParamPoint;
use crate::partition::{eigenvalue_e, partitions_up_to};

/// Largest numerator and denominator drawn.
const MAXD: i64 = 7;

/// True when `q^i t^j = 1` for some `0 ≤ i, j ≤ bound` not both zero, or when two partitions
/// of size `≤ degmax` share an eigenvalue `e(κ)`. Such points break the triangular solves or
/// produce vanishing hook factors.
pub fn is_resonant(pt: &ParamPoint, degmax: u32) -> bool {
    let bound = degmax as i64 + pt.nvars as i64 + 1;
    for i in 0..=bound {
        for j in 0..=bound {
            if (i, j) != (0, 0) && (pow(&pt.q, i) * pow(&pt.t, j)).is_one() {
                return true;
            }
        }
    }
    let parts = partitions_up_to(degmax, pt.nvars);
    let mut evs: Vec<_> = parts.iter().map(|k| eigenvalue_e(k, &pt.q, &pt.t, pt.nvars)).collect();
    evs.sort();
    evs.windows(2).any(|w| w[0] == w[1])
}

fn draw(rng: &mut ChaCha8Rng) -> crate::algebra::Rational {
    rat(rng.gen_range(1..=MAXD), rng.gen_range(1..=MAXD))
}

/// `count` points with `q, t` positive and different from 1 and `a` negative, drawn from a
/// ChaCha8 stream seeded with `seed`; resonant points are skipped.
pub fn sample_points(seed: u64, count: usize, n: usize, degmax: u32) -> Vec<ParamPoint> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::with_capacity(count);
    while out.len() < count {
        let q = draw(&mut rng);
        let t = draw(&mut rng);
        let a = -draw(&mut rng);
        if q.is_one() || t.is_one() || a.is_zero() {
            continue;
        }
        let pt = ParamPoint::new(q, t, a, n);
        if !is_resonant(&pt, degmax) && !out.contains(&pt) {
            out.push(pt);
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::rational::int;

    #[test]
    fn deterministic_and_distinct() {
        let a = sample_points(7, 5, 3, 4);
        assert_eq!(a, sample_points(7, 5, 3, 4));
        assert_ne!(a, sample_points(8, 5, 3, 4));
        for p in &a {
            assert!(!is_resonant(p, 4));
            assert!(p.a < int(0));
        }
    }

    #[test]
    fn resonance_detection() {
        assert!(is_resonant(&ParamPoint::new(rat(1, 3), int(3), int(-1), 2), 2));
        assert!(is_resonant(&ParamPoint::new(int(2), rat(1, 2), int(-1), 2), 3));
        assert!(!is_resonant(&ParamPoint::new(rat(2, 5), rat(3, 7), int(-1), 2), 3));
    }
}
