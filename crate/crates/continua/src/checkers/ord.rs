//! Order condition: every point triple admits a betweenness arrangement.
//!
//! A triple `{a, b, c}` passes when at least one of its three arrangements
//! — `b` between `a` and `c`, `a` between `b` and `c`, `c` between `a` and `b`
//! — satisfies the betweenness condition of [`super::check_btw`] at the given
//! grids. Triples are scanned in lexicographic order up to the tuple budget.
//! A triple whose three arrangements all fail is a definitive `Fails` (on
//! arc-like nets some arrangement must separate); exhausting the budget with
//! undecided triples remaining is `Inconclusive`.

use crate::error::Result;
use crate::net::FiniteNet;
use crate::resolution::{ArrangementFail, CheckerKind, Resolution, Status, Verdict, Witness};

use super::btw::{outside_ball, testable_deltas};
use super::{verdict, working_len, AdjacencyCache, NO_LABEL};

pub fn check_ord(net: &FiniteNet, res: &Resolution) -> Result<Verdict> {
    res.validate()?;
    let m = working_len(net, res);
    if m < 3 {
        return Ok(verdict(
            CheckerKind::Ord,
            Status::Holds,
            Witness::TriplesScanned { count: 0 },
            res,
            m,
        ));
    }
    let testable = testable_deltas(res);
    if testable.is_empty() {
        return Ok(verdict(
            CheckerKind::Ord,
            Status::Inconclusive,
            Witness::TriplesUndecided { count: 0, pending: None },
            res,
            m,
        ));
    }

    let eps_last = res.eps_grid.last().expect("validated ε grid is nonempty");
    let cache = AdjacencyCache::build(net, m, std::slice::from_ref(eps_last));
    // Component labels outside the closed δ′-ball at each potential middle
    // point, one labeling per testable δ. An arrangement (x, mid, z) fails at
    // a testable δ exactly when x and z share a label: the shared component
    // contains an ε-path avoiding the ball.
    let labels: Vec<Vec<Vec<u32>>> = crate::exec::pmap_range(m, |mid| {
        testable
            .iter()
            .map(|&t| {
                let allowed = outside_ball(net, m, mid, &res.delta_grid[t + 1], true);
                cache.components(&allowed, 0)
            })
            .collect()
    });
    let first_fail = |x: usize, mid: usize, z: usize| -> Option<usize> {
        (0..testable.len()).find(|&ti| {
            let lab = &labels[mid][ti];
            lab[x] != NO_LABEL && lab[z] != NO_LABEL && lab[x] == lab[z]
        })
    };

    let mut scanned = 0usize;
    for a in 0..m {
        for b in (a + 1)..m {
            for c in (b + 1)..m {
                if scanned == res.tuple_budget {
                    return Ok(verdict(
                        CheckerKind::Ord,
                        Status::Inconclusive,
                        Witness::TriplesUndecided {
                            count: scanned,
                            pending: Some([a, b, c]),
                        },
                        res,
                        m,
                    ));
                }
                scanned += 1;
                let arrangements = [(a, b, c), (b, a, c), (a, c, b)];
                let mut fails = Vec::new();
                for &(x, mid, z) in &arrangements {
                    match first_fail(x, mid, z) {
                        None => {
                            fails.clear();
                            break;
                        }
                        Some(ti) => fails.push((x, mid, z, ti)),
                    }
                }
                if fails.len() == 3 {
                    let fails = fails
                        .into_iter()
                        .map(|(x, mid, z, ti)| {
                            let t = testable[ti];
                            let dprime = res.delta_grid[t + 1].clone();
                            let allowed = outside_ball(net, m, mid, &dprime, true);
                            let path = cache
                                .path(&allowed, 0, x, z)
                                .expect("shared component label implies an avoiding path");
                            ArrangementFail {
                                mid,
                                delta: res.delta_grid[t].clone(),
                                dprime,
                                eps: eps_last.clone(),
                                path,
                            }
                        })
                        .collect();
                    return Ok(verdict(
                        CheckerKind::Ord,
                        Status::Fails,
                        Witness::TripleFail {
                            triple: [a, b, c],
                            fails,
                        },
                        res,
                        m,
                    ));
                }
            }
        }
    }
    Ok(verdict(
        CheckerKind::Ord,
        Status::Holds,
        Witness::TriplesScanned { count: scanned },
        res,
        m,
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::checkers::tests::line_pres;
    use crate::rat::{rat, Rat};

    fn res(eps: &[(i64, i64)], delta: &[(i64, i64)], budget: usize) -> Resolution {
        Resolution {
            n_points: 100,
            eps_grid: eps.iter().map(|&(n, d)| rat(n, d)).collect(),
            delta_grid: delta.iter().map(|&(n, d)| rat(n, d)).collect(),
            max_path_len: 64,
            tuple_budget: budget,
        }
    }

    fn chain_net() -> FiniteNet {
        let pts: Vec<(i64, i64)> = (0..=8).map(|k| (k, 8)).collect();
        FiniteNet::from_presentation(&line_pres(&pts), 9, 0).unwrap()
    }

    /// Eight points on a circle of circumference 1, quotient metric.
    fn circle_net() -> FiniteNet {
        FiniteNet::from_matrix_fn(8, 0, |i, j| {
            let steps = (i as i64 - j as i64).unsigned_abs().min(8 - (i as i64 - j as i64).unsigned_abs());
            Rat::from_integer((steps as i64).into()) * rat(1, 8)
        })
        .unwrap()
    }

    #[test]
    fn chain_net_is_order_like() {
        let v = check_ord(&chain_net(), &res(&[(3, 16)], &[(1, 4), (1, 16)], 1000)).unwrap();
        assert_eq!(v.status, Status::Holds);
        assert_eq!(v.witness, Witness::TriplesScanned { count: 84 });
    }

    #[test]
    fn circle_net_fails_on_the_first_triple() {
        let v = check_ord(&circle_net(), &res(&[(3, 16)], &[(1, 4), (1, 16)], 1000)).unwrap();
        assert_eq!(v.status, Status::Fails);
        match v.witness {
            Witness::TripleFail { triple, ref fails } => {
                assert_eq!(triple, [0, 1, 2]);
                assert_eq!(fails.len(), 3);
                for f in fails {
                    // Every witness path avoids the closed δ′-ball at its mid.
                    assert_eq!(f.dprime, rat(1, 16));
                    for &p in &f.path {
                        assert!(circle_net().dist(p, f.mid) > f.dprime);
                    }
                }
            }
            ref w => panic!("unexpected witness {w:?}"),
        }
    }

    #[test]
    fn budget_truncation_reports_the_pending_triple() {
        let v = check_ord(&chain_net(), &res(&[(3, 16)], &[(1, 4), (1, 16)], 10)).unwrap();
        assert_eq!(v.status, Status::Inconclusive);
        assert_eq!(
            v.witness,
            Witness::TriplesUndecided { count: 10, pending: Some([0, 2, 6]) }
        );
    }

    #[test]
    fn no_testable_delta_is_inconclusive() {
        let v = check_ord(&chain_net(), &res(&[(3, 16)], &[(1, 4)], 1000)).unwrap();
        assert_eq!(v.status, Status::Inconclusive);
        assert_eq!(v.witness, Witness::TriplesUndecided { count: 0, pending: None });
    }

    #[test]
    fn tiny_nets_hold_vacuously() {
        let pts: Vec<(i64, i64)> = vec![(0, 1), (1, 2)];
        let net = FiniteNet::from_presentation(&line_pres(&pts), 2, 0).unwrap();
        let v = check_ord(&net, &res(&[(3, 16)], &[(1, 4), (1, 16)], 1000)).unwrap();
        assert_eq!(v.status, Status::Holds);
        assert_eq!(v.witness, Witness::TriplesScanned { count: 0 });
    }
}
