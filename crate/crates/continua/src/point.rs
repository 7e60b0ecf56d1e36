//! Finitely supported rational points under the supremum metric.
//!
//! The ambient space is the set of sequences of rationals with finite support,
//! metrized by d(x, y) = max over coordinates of |x_i − y_i|. A point stores
//! only its nonzero coordinates, keyed by coordinate index in sorted order, so
//! equality, hashing, and serialization are canonical.
//!
//! Verified properties (unit and property tests): the metric axioms hold
//! exactly; a sequence is fast Cauchy when consecutive distances satisfy
//! d(x_i, x_{i+1}) < 2^{−i} strictly, indexed from 0.

use std::collections::BTreeMap;

use num_traits::{Signed, Zero};

use crate::rat::{pow2, Rat};

/// A finitely supported point: sorted map from coordinate index to a nonzero value.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SparsePoint {
    coords: BTreeMap<u32, Rat>,
}

impl SparsePoint {
    /// The origin (empty support).
    pub fn origin() -> Self {
        SparsePoint { coords: BTreeMap::new() }
    }

    /// Build from (index, value) pairs; zero values are dropped.
    ///
    /// # Panics
    /// Panics if the same index appears twice — callers validate duplicates
    /// before constructing points.
    pub fn from_pairs(pairs: impl IntoIterator<Item = (u32, Rat)>) -> Self {
        let mut coords = BTreeMap::new();
        for (i, v) in pairs {
            if v.is_zero() {
                continue;
            }
            let old = coords.insert(i, v);
            assert!(old.is_none(), "duplicate coordinate index {i}");
        }
        SparsePoint { coords }
    }

    /// The value at coordinate `i` (zero when outside the support).
    pub fn coord(&self, i: u32) -> Rat {
        self.coords.get(&i).cloned().unwrap_or_else(Rat::zero)
    }

    /// Iterate over (index, value) pairs in increasing index order.
    pub fn iter(&self) -> impl Iterator<Item = (&u32, &Rat)> {
        self.coords.iter()
    }

    /// Number of nonzero coordinates.
    pub fn support_len(&self) -> usize {
        self.coords.len()
    }

    /// Supremum distance to another point, exactly.
    pub fn sup_dist(&self, other: &Self) -> Rat {
        let mut best = Rat::zero();
        let mut consider = |cand: Rat| {
            if cand > best {
                best = cand;
            }
        };
        let mut a = self.coords.iter().peekable();
        let mut b = other.coords.iter().peekable();
        loop {
            match (a.peek(), b.peek()) {
                (Some(&(ka, va)), Some(&(kb, vb))) => match ka.cmp(kb) {
                    std::cmp::Ordering::Less => {
                        consider(va.abs());
                        a.next();
                    }
                    std::cmp::Ordering::Greater => {
                        consider(vb.abs());
                        b.next();
                    }
                    std::cmp::Ordering::Equal => {
                        consider((va - vb).abs());
                        a.next();
                        b.next();
                    }
                },
                (Some(&(_, va)), None) => {
                    consider(va.abs());
                    a.next();
                }
                (None, Some(&(_, vb))) => {
                    consider(vb.abs());
                    b.next();
                }
                (None, None) => break,
            }
        }
        best
    }

    /// Scale every coordinate by `c` (zero `c` collapses to the origin).
    pub fn scale(&self, c: &Rat) -> Self {
        if c.is_zero() {
            return SparsePoint::origin();
        }
        SparsePoint {
            coords: self.coords.iter().map(|(i, v)| (*i, v * c)).collect(),
        }
    }

    /// Coordinatewise sum; exact cancellations drop out of the support.
    pub fn add(&self, other: &Self) -> Self {
        let mut coords = self.coords.clone();
        for (i, v) in &other.coords {
            let entry = coords.entry(*i).or_insert_with(Rat::zero);
            *entry += v;
            if entry.is_zero() {
                coords.remove(i);
            }
        }
        SparsePoint { coords }
    }
}

/// True when `points` is fast Cauchy: d(x_i, x_{i+1}) < 2^{−i} strictly, i from 0.
///
/// An empty or single-point sequence is vacuously fast Cauchy. Note the index
/// convention: the very first gap must already be below 2^0 = 1, so a sequence
/// whose first two points are at distance exactly 1 is not fast Cauchy.
pub fn verify_fast_cauchy(points: &[SparsePoint]) -> bool {
    points
        .windows(2)
        .enumerate()
        .all(|(i, w)| w[0].sup_dist(&w[1]) < pow2(-(i as i32)))
}
