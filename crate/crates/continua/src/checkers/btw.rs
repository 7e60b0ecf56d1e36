//! Betweenness checker: does `y` separate `x` from `z` at the given grids?
//!
//! The underlying condition asks, for every δ, for some δ′ < δ and ε < δ′ such
//! that every ε-path from `x` to `z` meets the closed δ′-ball at `y`. On the
//! grids this is instantiated per grid δ with the best available candidates:
//! the next grid value as δ′ and the finest grid ε. Both choices are exact for
//! the grid-bounded reading — a path avoiding a smaller closed ball also
//! avoids nothing more, and the finest ε admits the fewest paths — so a grid δ
//! either passes at its best candidate or fails at every candidate the grids
//! offer.

use crate::error::{Error, Result};
use crate::net::FiniteNet;
use crate::rat::Rat;
use crate::resolution::{CheckerKind, Resolution, Status, Verdict, Witness};

use super::{verdict, working_len, AdjacencyCache};

/// Indices `t` of grid δs that the grids can actually test: a finer grid δ′
/// must exist (`t + 1` in range) and the finest grid ε must lie below δ.
pub(crate) fn testable_deltas(res: &Resolution) -> Vec<usize> {
    let eps_last = res.eps_grid.last().expect("validated ε grid is nonempty");
    (0..res.delta_grid.len().saturating_sub(1))
        .filter(|&t| *eps_last < res.delta_grid[t])
        .collect()
}

/// Mask of working points outside the δ′-ball at `mid` (closed or open).
pub(crate) fn outside_ball(net: &FiniteNet, m: usize, mid: usize, radius: &Rat, closed: bool) -> Vec<bool> {
    (0..m)
        .map(|i| {
            let d = net.dist(i, mid);
            if closed {
                d > *radius
            } else {
                d >= *radius
            }
        })
        .collect()
}

pub fn check_btw(net: &FiniteNet, x: usize, y: usize, z: usize, res: &Resolution) -> Result<Verdict> {
    res.validate()?;
    let m = working_len(net, res);
    for idx in [x, y, z] {
        if idx >= m {
            return Err(Error::Index { index: idx, size: m });
        }
    }
    if x == y || y == z || x == z {
        return Err(Error::invalid("betweenness needs three distinct point indices"));
    }

    let testable = testable_deltas(res);
    if testable.is_empty() {
        return Ok(verdict(
            CheckerKind::Btw { x, y, z },
            Status::Inconclusive,
            Witness::NoTestableDelta,
            res,
            m,
        ));
    }

    let eps_last = res.eps_grid.last().expect("validated ε grid is nonempty");
    let cache = AdjacencyCache::build(net, m, std::slice::from_ref(eps_last));
    let mut per_delta = Vec::new();
    for t in testable {
        let delta = res.delta_grid[t].clone();
        let dprime = res.delta_grid[t + 1].clone();
        let allowed = outside_ball(net, m, y, &dprime, true);
        match cache.path(&allowed, 0, x, z) {
            Some(path) => {
                return Ok(verdict(
                    CheckerKind::Btw { x, y, z },
                    Status::Fails,
                    Witness::AvoidingPath {
                        delta,
                        dprime,
                        eps: eps_last.clone(),
                        path,
                    },
                    res,
                    m,
                ));
            }
            None => per_delta.push((delta, dprime, eps_last.clone())),
        }
    }
    Ok(verdict(
        CheckerKind::Btw { x, y, z },
        Status::Holds,
        Witness::Schedule { per_delta },
        res,
        m,
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::checkers::tests::line_pres;
    use crate::rat::rat;

    fn res(eps: &[(i64, i64)], delta: &[(i64, i64)]) -> Resolution {
        Resolution {
            n_points: 100,
            eps_grid: eps.iter().map(|&(n, d)| rat(n, d)).collect(),
            delta_grid: delta.iter().map(|&(n, d)| rat(n, d)).collect(),
            max_path_len: 64,
            tuple_budget: 1000,
        }
    }

    /// Dyadic grid on [0,1] with spacing 1/8, ordered by value.
    fn grid_net() -> FiniteNet {
        let pts: Vec<(i64, i64)> = (0..=8).map(|k| (k, 8)).collect();
        let pres = line_pres(&pts);
        FiniteNet::from_presentation(&pres, 9, 0).unwrap()
    }

    #[test]
    fn middle_point_separates_on_a_line() {
        let net = grid_net();
        // x = 0, y = 1/2 (index 4), z = 1 (index 8).
        let v = check_btw(&net, 0, 4, 8, &res(&[(1, 4), (3, 16)], &[(1, 2), (1, 4), (1, 8)])).unwrap();
        assert_eq!(v.status, Status::Holds);
        match v.witness {
            Witness::Schedule { ref per_delta } => {
                // Testable δs: 1/2 (δ′=1/4) and 1/4 (δ′=1/8); ε is always 3/16.
                assert_eq!(per_delta.len(), 2);
                assert_eq!(per_delta[0], (rat(1, 2), rat(1, 4), rat(3, 16)));
                assert_eq!(per_delta[1], (rat(1, 4), rat(1, 8), rat(3, 16)));
            }
            ref w => panic!("unexpected witness {w:?}"),
        }
    }

    #[test]
    fn endpoint_never_separates() {
        let net = grid_net();
        // y = 0 is an endpoint: the path from 3/8 to 1 avoids its ball.
        let v = check_btw(&net, 3, 0, 8, &res(&[(1, 4), (3, 16)], &[(1, 2), (1, 4), (1, 8)])).unwrap();
        assert_eq!(v.status, Status::Fails);
        match v.witness {
            Witness::AvoidingPath { ref delta, ref dprime, ref eps, ref path } => {
                assert_eq!((delta.clone(), dprime.clone(), eps.clone()), (rat(1, 2), rat(1, 4), rat(3, 16)));
                assert_eq!(path.first(), Some(&3));
                assert_eq!(path.last(), Some(&8));
                // Every path point stays outside the closed 1/4-ball at 0.
                for &p in path {
                    assert!(net.dist(p, 0) > rat(1, 4));
                }
            }
            ref w => panic!("unexpected witness {w:?}"),
        }
    }

    #[test]
    fn coarse_grids_are_inconclusive() {
        let net = grid_net();
        // Only one δ: no finer δ′ exists.
        let v = check_btw(&net, 0, 4, 8, &res(&[(1, 16)], &[(1, 2)])).unwrap();
        assert_eq!(v.status, Status::Inconclusive);
        assert_eq!(v.witness, Witness::NoTestableDelta);
        // ε not below any δ: 1/4 is not < 1/4.
        let v = check_btw(&net, 0, 4, 8, &res(&[(1, 4)], &[(1, 4), (1, 8)])).unwrap();
        assert_eq!(v.status, Status::Inconclusive);
    }

    #[test]
    fn symmetric_in_endpoints() {
        let net = grid_net();
        let r = res(&[(1, 4), (3, 16)], &[(1, 2), (1, 4), (1, 8)]);
        for (x, y, z) in [(0usize, 4usize, 8usize), (1, 0, 8), (2, 5, 7)] {
            let a = check_btw(&net, x, y, z, &r).unwrap();
            let b = check_btw(&net, z, y, x, &r).unwrap();
            assert_eq!(a.status, b.status);
        }
    }

    #[test]
    fn rejects_degenerate_arguments() {
        let net = grid_net();
        let r = res(&[(1, 16)], &[(1, 2), (1, 4)]);
        assert!(check_btw(&net, 0, 0, 8, &r).is_err());
        assert!(check_btw(&net, 0, 4, 0, &r).is_err());
        assert!(check_btw(&net, 0, 4, 99, &r).is_err());
    }
}
