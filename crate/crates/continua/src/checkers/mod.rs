//! Bounded-resolution condition checkers.
//!
//! Each checker evaluates one topological condition on a finite net at an
//! explicit [`Resolution`], returning a three-valued [`Verdict`] whose
//! `Holds`/`Fails` statuses always carry replayable evidence. The checkers
//! never guess: when the grids or the tuple budget are too coarse to decide,
//! the verdict is `Inconclusive`.
//!
//! Conventions shared by all checkers:
//!
//! - only the first `min(res.n_points, net.len())` net points participate,
//!   in tuple enumeration *and* in path searches;
//! - ε grids and δ grids are strictly descending; a quantifier instantiated
//!   "for all grid ε" is decided at its binding grid value, which is exact
//!   for the grid-bounded reading (path sets shrink with ε, balls grow with
//!   their radius);
//! - scans visit tuples in lexicographic enumeration order and the first
//!   witness in that order wins, regardless of evaluation parallelism.

pub mod basic;
pub mod btw;
pub mod circ;
pub mod lc;
pub mod ord;

pub use basic::{check_conn, check_cpct, check_ndegen};
pub use btw::check_btw;
pub use circ::check_circ;
pub use lc::check_lc;
pub use ord::check_ord;

use std::collections::VecDeque;

use crate::error::Result;
use crate::exec;
use crate::net::FiniteNet;
use crate::resolution::{CheckerKind, Resolution, SpaceRef, Status, Verdict, Witness};

/// Sentinel label for points excluded from a component labeling.
pub(crate) const NO_LABEL: u32 = u32::MAX;

/// Number of working points for a checker run: the resolution's `n_points`
/// capped by the net size.
pub(crate) fn working_len(net: &FiniteNet, res: &Resolution) -> usize {
    res.n_points.min(net.len())
}

pub(crate) fn verdict(
    checker: CheckerKind,
    status: Status,
    witness: Witness,
    res: &Resolution,
    net_len: usize,
) -> Verdict {
    Verdict {
        checker,
        space: SpaceRef::Base,
        status,
        witness,
        resolution: res.clone(),
        net_len,
    }
}

/// Precomputed adjacency lists over the first `m` net points.
///
/// For each ordered pair with `d(i,j) < eps[0]` the row of `i` stores
/// `(j, kmax)` where `kmax` is the largest grid index with `d(i,j) < eps[kmax]`;
/// since the grid is strictly descending, the edge is usable at scale `k`
/// exactly when `k <= kmax`. Rows are sorted by neighbor index, which makes
/// every BFS below deterministic.
pub(crate) struct AdjacencyCache {
    rows: Vec<Vec<(u32, u8)>>,
}

impl AdjacencyCache {
    pub(crate) fn build(net: &FiniteNet, m: usize, eps: &[crate::rat::Rat]) -> Self {
        assert!(!eps.is_empty() && eps.len() <= 256, "ε grid must have 1..=256 values");
        let rows = exec::pmap_range(m, |i| {
            let mut row = Vec::new();
            for j in 0..m {
                if i == j {
                    continue;
                }
                let d = net.dist(i, j);
                if d >= eps[0] {
                    continue;
                }
                let mut kmax = 0u8;
                for (k, e) in eps.iter().enumerate().skip(1) {
                    if d < *e {
                        kmax = k as u8;
                    } else {
                        break;
                    }
                }
                row.push((j as u32, kmax));
            }
            row
        });
        AdjacencyCache { rows }
    }

    /// Component labels at grid scale `k` among `allowed` points. The label of
    /// a component is the smallest point index it contains; excluded points get
    /// [`NO_LABEL`].
    pub(crate) fn components(&self, allowed: &[bool], k: u8) -> Vec<u32> {
        let m = self.rows.len();
        debug_assert_eq!(allowed.len(), m);
        let mut labels = vec![NO_LABEL; m];
        let mut queue = VecDeque::new();
        for start in 0..m {
            if !allowed[start] || labels[start] != NO_LABEL {
                continue;
            }
            labels[start] = start as u32;
            queue.push_back(start);
            while let Some(v) = queue.pop_front() {
                for &(w, kmax) in &self.rows[v] {
                    let w = w as usize;
                    if kmax >= k && allowed[w] && labels[w] == NO_LABEL {
                        labels[w] = start as u32;
                        queue.push_back(w);
                    }
                }
            }
        }
        labels
    }

    /// Shortest path from `x` to `y` at grid scale `k` through `allowed`
    /// points, or `None` when unreachable (including excluded endpoints).
    /// Ties break toward smaller point indices, as in [`crate::path::eps_path`].
    pub(crate) fn path(&self, allowed: &[bool], k: u8, x: usize, y: usize) -> Option<Vec<usize>> {
        if !allowed[x] || !allowed[y] {
            return None;
        }
        if x == y {
            return Some(vec![x]);
        }
        let m = self.rows.len();
        let mut prev = vec![NO_LABEL; m];
        let mut seen = vec![false; m];
        let mut queue = VecDeque::new();
        seen[x] = true;
        queue.push_back(x);
        while let Some(v) = queue.pop_front() {
            for &(w, kmax) in &self.rows[v] {
                let w = w as usize;
                if kmax < k || !allowed[w] || seen[w] {
                    continue;
                }
                seen[w] = true;
                prev[w] = v as u32;
                if w == y {
                    let mut path = vec![y];
                    let mut cur = y;
                    while cur != x {
                        cur = prev[cur] as usize;
                        path.push(cur);
                    }
                    path.reverse();
                    return Some(path);
                }
                queue.push_back(w);
            }
        }
        None
    }
}

/// The five-checker conjunction characterizing arcs: non-degeneracy, total
/// boundedness, connectedness, local connectedness, and the order condition.
pub fn classify_arc(net: &FiniteNet, res: &Resolution) -> Result<Vec<Verdict>> {
    Ok(vec![
        check_ndegen(net, res)?,
        check_cpct(net, res)?,
        check_conn(net, res)?,
        check_lc(net, res)?,
        check_ord(net, res)?,
    ])
}

/// The five-checker conjunction characterizing circles: as [`classify_arc`]
/// with the cyclic-order condition replacing the order condition.
pub fn classify_circle(net: &FiniteNet, res: &Resolution) -> Result<Vec<Verdict>> {
    Ok(vec![
        check_ndegen(net, res)?,
        check_cpct(net, res)?,
        check_conn(net, res)?,
        check_lc(net, res)?,
        check_circ(net, res)?,
    ])
}

/// Combined status of a composite run: any `Fails` dominates, then any
/// `Inconclusive`, otherwise `Holds`.
pub fn composite_status(verdicts: &[Verdict]) -> Status {
    if verdicts.iter().any(|v| v.status == Status::Fails) {
        Status::Fails
    } else if verdicts.iter().any(|v| v.status != Status::Holds) {
        Status::Inconclusive
    } else {
        Status::Holds
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::point::SparsePoint;
    use crate::presentation::Presentation;
    use crate::rat::{rat, Rat};

    pub(crate) fn line_pres(xs: &[(i64, i64)]) -> Presentation {
        let points = xs
            .iter()
            .map(|&(n, d)| SparsePoint::from_pairs(vec![(0u32, rat(n, d))]))
            .collect();
        Presentation::new("test line".to_string(), points).unwrap()
    }

    #[test]
    fn cache_edges_respect_grid_scales() {
        let pres = line_pres(&[(0, 1), (1, 4), (1, 2)]);
        let net = FiniteNet::from_presentation(&pres, 3, 0).unwrap();
        let eps: Vec<Rat> = vec![rat(1, 2), rat(3, 8), rat(5, 16)];
        let cache = AdjacencyCache::build(&net, 3, &eps);
        // d(0,1) = 1/4 < all three scales -> kmax 2; d(1,2) = 1/4 likewise;
        // d(0,2) = 1/2, not < 1/2 -> no edge.
        assert_eq!(cache.rows[0], vec![(1, 2)]);
        assert_eq!(cache.rows[1], vec![(0, 2), (2, 2)]);
        assert_eq!(cache.rows[2], vec![(1, 2)]);
    }

    #[test]
    fn components_and_paths_are_deterministic() {
        // Points 0,1,2 chained; point 3 isolated beyond the coarsest scale.
        let pres = line_pres(&[(0, 1), (1, 4), (1, 2), (7, 2)]);
        let net = FiniteNet::from_presentation(&pres, 4, 0).unwrap();
        let eps: Vec<Rat> = vec![rat(1, 2)];
        let cache = AdjacencyCache::build(&net, 4, &eps);
        let allowed = vec![true; 4];
        assert_eq!(cache.components(&allowed, 0), vec![0, 0, 0, 3]);
        assert_eq!(cache.path(&allowed, 0, 0, 2), Some(vec![0, 1, 2]));
        assert_eq!(cache.path(&allowed, 0, 0, 3), None);
        // Excluding the middle point disconnects the chain.
        let blocked = vec![true, false, true, true];
        assert_eq!(cache.components(&blocked, 0), vec![0, NO_LABEL, 2, 3]);
        assert_eq!(cache.path(&blocked, 0, 0, 2), None);
    }
}
