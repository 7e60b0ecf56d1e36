//! Non-degeneracy, total-boundedness, and connectedness checkers.
//!
//! These three conditions are decidable on a finite net relative to the given
//! grids: `ndegen` and `conn` never return `Inconclusive`, and `cpct` does so
//! only when a greedy cover overruns the tuple budget.

use num_traits::Zero;

use crate::error::{Error, Result};
use crate::net::FiniteNet;
use crate::rat::{int, Rat};
use crate::resolution::{CheckerKind, Resolution, Status, Verdict, Witness};

use super::{verdict, working_len};

/// Does the net witness at least two distinct points?
///
/// Scans pairs in lexicographic order and reports the first one at positive
/// distance. `Fails` (all pairwise distances collapse to zero) can only be
/// refuted, never repaired, by enlarging `n_points`.
pub fn check_ndegen(net: &FiniteNet, res: &Resolution) -> Result<Verdict> {
    res.validate()?;
    if net.is_empty() {
        return Err(Error::invalid("non-degeneracy requires a nonempty net"));
    }
    let m = working_len(net, res);
    for i in 0..m {
        for j in (i + 1)..m {
            let d = net.dist(i, j);
            if !d.is_zero() {
                return Ok(verdict(
                    CheckerKind::Ndegen,
                    Status::Holds,
                    Witness::Pair { i, j, dist: d },
                    res,
                    m,
                ));
            }
        }
    }
    Ok(verdict(
        CheckerKind::Ndegen,
        Status::Fails,
        Witness::AllZero { n: m },
        res,
        m,
    ))
}

/// Is the net totally bounded at every grid ε?
///
/// For each grid ε a greedy cover by closed ε-balls is built: the center of
/// the next ball is always the first point not yet covered. On a finite net
/// the cover always completes, so the checker cannot return `Fails`; but if
/// more than `tuple_budget` centers are needed at some ε the verdict is
/// `Inconclusive`, with the `budget + 1` greedy centers as evidence — by
/// construction they are pairwise farther than ε apart.
pub fn check_cpct(net: &FiniteNet, res: &Resolution) -> Result<Verdict> {
    res.validate()?;
    let m = working_len(net, res);
    let mut covers: Vec<(Rat, Vec<usize>)> = Vec::new();
    for eps in &res.eps_grid {
        let mut centers: Vec<usize> = Vec::new();
        let mut covered = vec![false; m];
        while let Some(u) = covered.iter().position(|&c| !c) {
            if centers.len() == res.tuple_budget {
                centers.push(u);
                return Ok(verdict(
                    CheckerKind::Cpct,
                    Status::Inconclusive,
                    Witness::CoverBudget {
                        eps: eps.clone(),
                        centers,
                    },
                    res,
                    m,
                ));
            }
            centers.push(u);
            for i in u..m {
                if !covered[i] && net.dist(u, i) <= *eps {
                    covered[i] = true;
                }
            }
        }
        covers.push((eps.clone(), centers));
    }
    Ok(verdict(
        CheckerKind::Cpct,
        Status::Holds,
        Witness::Covers { covers },
        res,
        m,
    ))
}

/// Is the net ε-connected at every grid ε?
///
/// Points are clustered by the reflexive-transitive closure of
/// `d(i,j) < 2ε`. A single cluster at every grid ε yields `Holds`; otherwise
/// the coarsest splitting ε yields `Fails` with the two-sided partition as
/// evidence. At net level a cluster split is exactly a decomposition into two
/// nonempty parts whose open 2ε-enlargements are disjoint: a point within 2ε
/// of both sides would merge their clusters.
pub fn check_conn(net: &FiniteNet, res: &Resolution) -> Result<Verdict> {
    res.validate()?;
    let m = working_len(net, res);
    let ke = res.eps_grid.len();
    if m <= 1 {
        let per_eps = res.eps_grid.iter().map(|e| (e.clone(), m)).collect();
        return Ok(verdict(
            CheckerKind::Conn,
            Status::Holds,
            Witness::Connected { per_eps },
            res,
            m,
        ));
    }

    // Bucket each pair at the largest grid index k with d < 2·eps[k]; the
    // grid is descending, so the pair is an edge at scale k' iff k' <= k.
    let thresholds: Vec<Rat> = res.eps_grid.iter().map(|e| int(2) * e).collect();
    let row_buckets: Vec<Vec<Vec<(u32, u32)>>> = crate::exec::pmap_range(m, |i| {
        let mut buckets = vec![Vec::new(); ke];
        for j in (i + 1)..m {
            let d = net.dist(i, j);
            if d >= thresholds[0] {
                continue;
            }
            let mut kmax = 0;
            for (k, t) in thresholds.iter().enumerate().skip(1) {
                if d < *t {
                    kmax = k;
                } else {
                    break;
                }
            }
            buckets[kmax].push((i as u32, j as u32));
        }
        buckets
    });

    // Union-find, adding buckets from the finest scale up: after processing
    // bucket k the structure holds exactly the edges usable at eps[k].
    let mut parent: Vec<u32> = (0..m as u32).collect();
    fn find(parent: &mut [u32], mut v: u32) -> u32 {
        while parent[v as usize] != v {
            parent[v as usize] = parent[parent[v as usize] as usize];
            v = parent[v as usize];
        }
        v
    }
    let mut clusters = m;
    let mut counts = vec![0usize; ke];
    for k in (0..ke).rev() {
        for row in &row_buckets {
            for &(i, j) in &row[k] {
                let (ri, rj) = (find(&mut parent, i), find(&mut parent, j));
                if ri != rj {
                    parent[ri.max(rj) as usize] = ri.min(rj);
                    clusters -= 1;
                }
            }
        }
        counts[k] = clusters;
    }

    match (0..ke).find(|&k| counts[k] > 1) {
        None => {
            let per_eps = res
                .eps_grid
                .iter()
                .zip(counts)
                .map(|(e, c)| (e.clone(), c))
                .collect();
            Ok(verdict(
                CheckerKind::Conn,
                Status::Holds,
                Witness::Connected { per_eps },
                res,
                m,
            ))
        }
        Some(kstar) => {
            // Recover the cluster of point 0 at the splitting scale by BFS.
            let mut in_left = vec![false; m];
            in_left[0] = true;
            let mut queue = std::collections::VecDeque::from([0usize]);
            while let Some(v) = queue.pop_front() {
                for w in 0..m {
                    if !in_left[w] && net.dist(v, w) < thresholds[kstar] {
                        in_left[w] = true;
                        queue.push_back(w);
                    }
                }
            }
            let left: Vec<usize> = (0..m).filter(|&i| in_left[i]).collect();
            let right: Vec<usize> = (0..m).filter(|&i| !in_left[i]).collect();
            Ok(verdict(
                CheckerKind::Conn,
                Status::Fails,
                Witness::ClusterSplit {
                    eps: res.eps_grid[kstar].clone(),
                    left,
                    right,
                },
                res,
                m,
            ))
        }
    }
}
