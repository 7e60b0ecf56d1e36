//! Cyclic-order condition: every 4-tuple admits a circular arrangement.
//!
//! A 4-tuple passes when some cyclic arrangement `x_0, x_1, x_2, x_3` (three
//! arrangements up to rotation and reflection) satisfies both clauses:
//!
//! 1. *adjacency*: for each position `i` there is a fine path from `x_i` to
//!    `x_{i+1}` staying clear of the closed balls at the two opposite points
//!    (for arbitrarily small radii — on the grids: radius at the finest grid δ,
//!    path at the finest grid ε, requiring a second grid δ below the one being
//!    tested);
//! 2. *separation*: along each diagonal there is no fine path from `x_i` to
//!    `x_{i+2}` avoiding the open balls at the two middle points (for every
//!    ball radius — on the grids decided at the finest δ, the hardest
//!    instance, with the finest ε).
//!
//! Both grid instantiations are exact collapses of their quantifier prefixes:
//! path sets shrink as ε shrinks, and allowed regions grow as the forbidden
//! radius shrinks, so the extreme grid values dominate all others.

use std::collections::HashMap;

use crate::error::Result;
use crate::net::FiniteNet;
use crate::resolution::{CheckerKind, CircClauseFail, Resolution, Status, Verdict, Witness};

use super::btw::outside_ball;
use super::{verdict, working_len, AdjacencyCache, NO_LABEL};

/// The three cyclic arrangements of a sorted 4-tuple, up to rotation and
/// reflection.
fn arrangements(t: [usize; 4]) -> [[usize; 4]; 3] {
    let [a, b, c, d] = t;
    [[a, b, c, d], [a, b, d, c], [a, c, b, d]]
}

pub fn check_circ(net: &FiniteNet, res: &Resolution) -> Result<Verdict> {
    res.validate()?;
    let m = working_len(net, res);
    if m < 4 {
        return Ok(verdict(
            CheckerKind::Circ,
            Status::Holds,
            Witness::TuplesScanned { count: 0 },
            res,
            m,
        ));
    }
    if res.delta_grid.len() < 2 {
        // The adjacency clause quantifies "for all δ there is a radius below
        // δ": no grid δ has a finer companion to instantiate it.
        return Ok(verdict(
            CheckerKind::Circ,
            Status::Inconclusive,
            Witness::TuplesUndecided { count: 0 },
            res,
            m,
        ));
    }

    let eps_last = res.eps_grid.last().expect("validated ε grid is nonempty");
    let radius = res.delta_grid.last().expect("checked above").clone();
    let cache = AdjacencyCache::build(net, m, std::slice::from_ref(eps_last));

    // Component labelings outside a two-ball forbidden region, memoized by the
    // unordered pair of centers and the ball kind.
    let mut memo: HashMap<(usize, usize, bool), Vec<u32>> = HashMap::new();
    let allowed_mask = |f1: usize, f2: usize, closed: bool| -> Vec<bool> {
        let a = outside_ball(net, m, f1, &radius, closed);
        let b = outside_ball(net, m, f2, &radius, closed);
        a.into_iter().zip(b).map(|(x, y)| x && y).collect()
    };
    macro_rules! labels {
        ($f1:expr, $f2:expr, $closed:expr) => {{
            let key = ($f1.min($f2), $f1.max($f2), $closed);
            if !memo.contains_key(&key) {
                let mask = allowed_mask(key.0, key.1, key.2);
                memo.insert(key, cache.components(&mask, 0));
            }
            &memo[&key]
        }};
    }

    let mut scanned = 0usize;
    for a in 0..m {
        for b in (a + 1)..m {
            for c in (b + 1)..m {
                for d in (c + 1)..m {
                    if scanned == res.tuple_budget {
                        return Ok(verdict(
                            CheckerKind::Circ,
                            Status::Inconclusive,
                            Witness::TuplesUndecided { count: scanned },
                            res,
                            m,
                        ));
                    }
                    scanned += 1;
                    let mut fails: Vec<CircClauseFail> = Vec::new();
                    for order in arrangements([a, b, c, d]) {
                        let mut fail = None;
                        for i in 0..4usize {
                            let (x, y) = (order[i], order[(i + 1) % 4]);
                            let (f1, f2) = (order[(i + 2) % 4], order[(i + 3) % 4]);
                            let lab = labels!(f1, f2, true);
                            let connected =
                                lab[x] != NO_LABEL && lab[y] != NO_LABEL && lab[x] == lab[y];
                            if !connected {
                                fail = Some(CircClauseFail {
                                    order,
                                    clause: 1,
                                    position: i as u8,
                                    radius: radius.clone(),
                                    eps: eps_last.clone(),
                                    path: None,
                                });
                                break;
                            }
                        }
                        if fail.is_none() {
                            for i in 0..2usize {
                                let (x, y) = (order[i], order[i + 2]);
                                let (f1, f2) = (order[i + 1], order[(i + 3) % 4]);
                                let lab = labels!(f1, f2, false);
                                let connected =
                                    lab[x] != NO_LABEL && lab[y] != NO_LABEL && lab[x] == lab[y];
                                if connected {
                                    let mask = allowed_mask(f1, f2, false);
                                    let path = cache
                                        .path(&mask, 0, x, y)
                                        .expect("shared label implies a path");
                                    fail = Some(CircClauseFail {
                                        order,
                                        clause: 2,
                                        position: i as u8,
                                        radius: radius.clone(),
                                        eps: eps_last.clone(),
                                        path: Some(path),
                                    });
                                    break;
                                }
                            }
                        }
                        match fail {
                            Some(f) => fails.push(f),
                            None => {
                                fails.clear();
                                break;
                            }
                        }
                    }
                    if fails.len() == 3 {
                        return Ok(verdict(
                            CheckerKind::Circ,
                            Status::Fails,
                            Witness::TupleFail {
                                tuple: [a, b, c, d],
                                fails,
                            },
                            res,
                            m,
                        ));
                    }
                }
            }
        }
    }
    Ok(verdict(
        CheckerKind::Circ,
        Status::Holds,
        Witness::TuplesScanned { count: scanned },
        res,
        m,
    ))
}
