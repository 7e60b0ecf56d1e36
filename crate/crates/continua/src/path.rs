//! ε-paths through a net, with forbidden regions.
//!
//! An ε-path from x to y is a finite sequence of net points starting at x and
//! ending at y whose consecutive distances are strictly below ε. A path lies
//! within an allowed region when *all* of its points do — endpoints included,
//! so a forbidden endpoint means no path exists at all.
//!
//! The search is an exhaustive breadth-first scan of the whole net: `Absent`
//! answers are proofs that no path exists at this resolution, not timeouts, and
//! returned witnesses are shortest paths (hence canonical for a fixed net and
//! deterministic across runs).

use std::collections::VecDeque;

use num_traits::Zero;

use crate::error::{Error, Result};
use crate::net::FiniteNet;
use crate::rat::Rat;

/// A metric ball used as a forbidden obstacle.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Ball {
    pub center: usize,
    pub radius: Rat,
    /// Closed balls use d ≤ r; open balls use d < r.
    pub closed: bool,
}

/// A forbidden region: the union of finitely many balls (empty = no obstacle).
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Region {
    pub balls: Vec<Ball>,
}

impl Region {
    pub fn empty() -> Self {
        Region { balls: Vec::new() }
    }

    pub fn single(center: usize, radius: Rat, closed: bool) -> Self {
        Region { balls: vec![Ball { center, radius, closed }] }
    }

    /// True when net point `v` lies inside the region.
    pub fn contains(&self, net: &FiniteNet, v: usize) -> bool {
        self.balls.iter().any(|b| {
            let d = net.dist(v, b.center);
            if b.closed {
                d <= b.radius
            } else {
                d < b.radius
            }
        })
    }
}

/// A concrete ε-path: the visited net points in order, plus the ε it satisfies.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PathWitness {
    pub points: Vec<usize>,
    pub eps: Rat,
}

impl PathWitness {
    /// Re-check this witness against a net: endpoints match, consecutive steps
    /// are strictly below ε, and no point touches the forbidden region.
    pub fn verify(&self, net: &FiniteNet, x: usize, y: usize, forbidden: &Region) -> bool {
        if self.points.first() != Some(&x) || self.points.last() != Some(&y) {
            return false;
        }
        if self.points.iter().any(|&v| v >= net.len() || forbidden.contains(net, v)) {
            return false;
        }
        self.points.windows(2).all(|w| net.dist(w[0], w[1]) < self.eps)
    }
}

/// Exhaustive BFS for an ε-path from `x` to `y` avoiding `forbidden`.
///
/// Returns `Ok(None)` when provably no path exists at this ε (including the
/// case of a forbidden endpoint). The witness, when present, is a shortest
/// path, with ties broken toward smaller point indices.
pub fn eps_path(
    net: &FiniteNet,
    x: usize,
    y: usize,
    eps: &Rat,
    forbidden: &Region,
) -> Result<Option<PathWitness>> {
    let n = net.len();
    if x >= n {
        return Err(Error::Index { index: x, size: n });
    }
    if y >= n {
        return Err(Error::Index { index: y, size: n });
    }
    if *eps <= Rat::zero() {
        return Err(Error::invalid("ε must be positive"));
    }
    for b in &forbidden.balls {
        if b.center >= n {
            return Err(Error::Index { index: b.center, size: n });
        }
    }

    let allowed: Vec<bool> = (0..n).map(|v| !forbidden.contains(net, v)).collect();
    if !allowed[x] || !allowed[y] {
        return Ok(None);
    }

    let mut prev: Vec<usize> = vec![usize::MAX; n];
    let mut seen = vec![false; n];
    let mut queue = VecDeque::new();
    seen[x] = true;
    queue.push_back(x);
    while let Some(u) = queue.pop_front() {
        if u == y {
            let mut path = vec![y];
            let mut v = y;
            while v != x {
                v = prev[v];
                path.push(v);
            }
            path.reverse();
            return Ok(Some(PathWitness { points: path, eps: eps.clone() }));
        }
        for v in 0..n {
            if !seen[v] && allowed[v] && net.dist(u, v) < *eps {
                seen[v] = true;
                prev[v] = u;
                queue.push_back(v);
            }
        }
    }
    Ok(None)
}
