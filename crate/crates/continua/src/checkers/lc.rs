//! Local connectedness: stable local component counts around sampled balls.
//!
//! For each sampled pair — a center `c` among the working points and a radius
//! `r` from the δ grid — the checker counts ε-components of the open ball
//! `A = B_r(c)` within the open ball `B = B_2r(c)` at every grid ε. A *candidate*
//! scale is a grid ε with at least one finer grid value; a candidate is
//! *stable* when the count at every finer grid scale equals its own. A pair
//! passes when some candidate is stable. A pair with no stable candidate is a
//! local split: the component structure keeps changing all the way down the
//! grid, which on the examples this tool targets pins an accumulation of
//! distinct local pieces. Pairs are scanned center-major in grid order; the
//! first failing pair in that order is reported.

use crate::error::Result;
use crate::net::FiniteNet;
use crate::resolution::{CheckerKind, Resolution, Status, Verdict, Witness};

use super::{verdict, working_len, AdjacencyCache, NO_LABEL};

struct SplitCore {
    /// Pair index (center-major), kept for first-in-order selection.
    pair: usize,
    /// Index into the ε grid of the first scale splitting candidate 0.
    ksplit: usize,
    /// Lex-first pair of A-points sharing a component at the candidate scale
    /// but not at the splitting scale.
    a: usize,
    b: usize,
}

pub fn check_lc(net: &FiniteNet, res: &Resolution) -> Result<Verdict> {
    res.validate()?;
    let m = working_len(net, res);
    let dlen = res.delta_grid.len();
    let total = m * dlen;
    if total == 0 {
        return Ok(verdict(
            CheckerKind::Lc,
            Status::Holds,
            Witness::PairsScanned { count: 0 },
            res,
            m,
        ));
    }
    let ke = res.eps_grid.len();
    if ke < 2 {
        // No grid scale has a finer companion: no candidate can be certified
        // stable, and no split can be exhibited either.
        return Ok(verdict(
            CheckerKind::Lc,
            Status::Inconclusive,
            Witness::PairsUndecided { count: 0 },
            res,
            m,
        ));
    }

    let cache = AdjacencyCache::build(net, m, &res.eps_grid);
    let limit = total.min(res.tuple_budget);
    let results: Vec<Option<SplitCore>> = crate::exec::pmap_range(limit, |pair| {
        let c = pair / dlen;
        let r = &res.delta_grid[pair % dlen];
        let two_r = crate::rat::int(2) * r;
        let bmask: Vec<bool> = (0..m).map(|i| net.dist(i, c) < two_r).collect();
        let apts: Vec<usize> = (0..m).filter(|&i| net.dist(i, c) < *r).collect();
        if apts.len() <= 1 {
            return None;
        }
        let labelings: Vec<Vec<u32>> = (0..ke)
            .map(|k| cache.components(&bmask, k as u8))
            .collect();
        let counts: Vec<usize> = labelings
            .iter()
            .map(|lab| {
                let mut ls: Vec<u32> = apts.iter().map(|&i| lab[i]).collect();
                debug_assert!(ls.iter().all(|&l| l != NO_LABEL), "A-points lie inside B");
                ls.sort_unstable();
                ls.dedup();
                ls.len()
            })
            .collect();
        let stable = |k: usize| counts[k + 1..].iter().all(|c| *c == counts[k]);
        if (0..ke - 1).any(stable) {
            return None;
        }
        // Candidate 0 is unstable like all the others; report its first
        // splitting scale and a lex-first pair of A-points separated there.
        let ksplit = (1..ke)
            .find(|&k| counts[k] != counts[0])
            .expect("candidate 0 is unstable");
        for (ai, &a) in apts.iter().enumerate() {
            for &b in &apts[ai + 1..] {
                if labelings[0][a] == labelings[0][b] && labelings[ksplit][a] != labelings[ksplit][b] {
                    return Some(SplitCore { pair, ksplit, a, b });
                }
            }
        }
        unreachable!("a strict refinement separates some A-pair");
    });

    if let Some(core) = results.into_iter().flatten().next() {
        let c = core.pair / dlen;
        let r = res.delta_grid[core.pair % dlen].clone();
        return Ok(verdict(
            CheckerKind::Lc,
            Status::Fails,
            Witness::LocalSplit {
                center: c,
                r,
                eps: res.eps_grid[0].clone(),
                eps_fine: res.eps_grid[core.ksplit].clone(),
                a: core.a,
                b: core.b,
            },
            res,
            m,
        ));
    }
    if limit < total {
        return Ok(verdict(
            CheckerKind::Lc,
            Status::Inconclusive,
            Witness::PairsUndecided { count: limit },
            res,
            m,
        ));
    }
    Ok(verdict(
        CheckerKind::Lc,
        Status::Holds,
        Witness::PairsScanned { count: total },
        res,
        m,
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::checkers::tests::line_pres;
    use crate::rat::rat;

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

    #[test]
    fn chain_is_locally_connected() {
        // Both scales see the same adjacency, so every count is stable.
        let v = check_lc(&chain_net(), &res(&[(3, 16), (5, 32)], &[(1, 4)], 1000)).unwrap();
        assert_eq!(v.status, Status::Holds);
        assert_eq!(v.witness, Witness::PairsScanned { count: 9 });
    }

    #[test]
    fn detached_point_forces_a_local_split() {
        // {0, 1/8, 1/2}: at scale 3/16 the first two points cluster, at 1/16
        // they separate, and no candidate is ever stable inside B_2(0).
        let net = FiniteNet::from_presentation(&line_pres(&[(0, 1), (1, 8), (1, 2)]), 3, 0).unwrap();
        let v = check_lc(&net, &res(&[(3, 16), (1, 16)], &[(1, 1)], 1000)).unwrap();
        assert_eq!(v.status, Status::Fails);
        match v.witness {
            Witness::LocalSplit { center, ref r, ref eps, ref eps_fine, a, b } => {
                assert_eq!(center, 0);
                assert_eq!(*r, rat(1, 1));
                assert_eq!(*eps, rat(3, 16));
                assert_eq!(*eps_fine, rat(1, 16));
                assert_eq!((a, b), (0, 1));
            }
            ref w => panic!("unexpected witness {w:?}"),
        }
    }

    #[test]
    fn budget_truncation_is_inconclusive() {
        let v = check_lc(&chain_net(), &res(&[(3, 16), (5, 32)], &[(1, 4)], 5)).unwrap();
        assert_eq!(v.status, Status::Inconclusive);
        assert_eq!(v.witness, Witness::PairsUndecided { count: 5 });
    }

    #[test]
    fn single_scale_grid_is_inconclusive() {
        let v = check_lc(&chain_net(), &res(&[(3, 16)], &[(1, 4)], 1000)).unwrap();
        assert_eq!(v.status, Status::Inconclusive);
        assert_eq!(v.witness, Witness::PairsUndecided { count: 0 });
    }
}
