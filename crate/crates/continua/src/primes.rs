//! Odd-prime bookkeeping for arc insertion grids.
//!
//! Every tendril arc instance gets its own prime so that the rational grids
//! `t/p^e` used to log points on distinct arcs (and distinct respawn instances
//! of the same arc) can never collide at a non-integer abscissa: two reduced
//! fractions with different prime-power denominators are equal only if both are
//! integers. The prime 2 is reserved for the main-line dyadic grid, so arcs are
//! assigned odd primes only.
//!
//! The assignment is a fixed bijection: tendril number `n ≥ 1`, collapse count
//! `c ≥ 0`, and side (top/bottom) map through the Cantor pairing function to a
//! rank, and the rank indexes the odd primes in order. Verified spot values:
//! tendril 1 instance 0 gets (3, 5); tendril 2 instance 0 gets (7, 11).

use std::sync::Mutex;
use std::sync::OnceLock;

/// Arc side selector for prime assignment.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Side {
    Top,
    Bottom,
}

/// Cantor pairing function (a, b) -> (a+b)(a+b+1)/2 + b.
fn cantor(a: u64, b: u64) -> u64 {
    (a + b) * (a + b + 1) / 2 + b
}

fn prime_cache() -> &'static Mutex<Vec<u64>> {
    static CACHE: OnceLock<Mutex<Vec<u64>>> = OnceLock::new();
    CACHE.get_or_init(|| Mutex::new(vec![2, 3, 5, 7, 11, 13]))
}

fn is_prime_against(cands: &[u64], m: u64) -> bool {
    for &p in cands {
        if p * p > m {
            break;
        }
        if m % p == 0 {
            return false;
        }
    }
    true
}

/// The 1-based `i`-th prime (nth_prime(1) = 2).
pub fn nth_prime(i: u64) -> u64 {
    assert!(i >= 1, "primes are 1-indexed");
    let mut cache = prime_cache().lock().expect("prime cache poisoned");
    while (cache.len() as u64) < i {
        let mut m = cache.last().copied().unwrap_or(1) + 2;
        loop {
            if is_prime_against(&cache, m) {
                break;
            }
            m += 2;
        }
        cache.push(m);
    }
    cache[(i - 1) as usize]
}

/// The odd prime assigned to arc (tendril `n ≥ 1`, collapse count `c`, `side`).
///
/// Distinct (n, c, side) triples receive distinct odd primes, and 2 is never
/// assigned (it belongs to the main-line dyadic grid).
pub fn arc_prime(n: u32, c: u32, side: Side) -> u64 {
    assert!(n >= 1, "tendrils are numbered from 1");
    let bit = match side {
        Side::Top => 0,
        Side::Bottom => 1,
    };
    let rank = 2 * cantor((n - 1) as u64, c as u64) + bit + 1;
    nth_prime(rank + 1)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn spot_values() {
        assert_eq!(nth_prime(1), 2);
        assert_eq!(nth_prime(10), 29);
        assert_eq!(arc_prime(1, 0, Side::Top), 3);
        assert_eq!(arc_prime(1, 0, Side::Bottom), 5);
        assert_eq!(arc_prime(2, 0, Side::Top), 7);
        assert_eq!(arc_prime(2, 0, Side::Bottom), 11);
    }

    #[test]
    fn injective_and_odd() {
        let mut seen = std::collections::HashSet::new();
        for n in 1..=6 {
            for c in 0..6 {
                for side in [Side::Top, Side::Bottom] {
                    let p = arc_prime(n, c, side);
                    assert!(p % 2 == 1, "arc prime {p} must be odd");
                    assert!(seen.insert(p), "prime {p} assigned twice");
                }
            }
        }
    }
}
