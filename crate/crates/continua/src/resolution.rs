//! Resolutions, verdicts, and witnesses.
//!
//! A [`Resolution`] fixes everything finite about a check: how many points of
//! the presentation participate, which ε and δ grids instantiate the metric
//! quantifiers (always listed strictly descending), a path-length bound carried
//! for reporting, and a budget on how many tuples/pairs a scan may visit.
//!
//! A [`Verdict`] is three-valued. `Holds` and `Fails` carry replayable evidence
//! in their [`Witness`]; `Inconclusive` means the resolution was too coarse or
//! the budget ran out before the scan could decide — never a silent failure.

use crate::error::{Error, Result};
use crate::rat::Rat;

/// Bounded-resolution parameters for a check.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Resolution {
    /// Number of presentation points requested for the net.
    pub n_points: usize,
    /// ε grid, strictly descending, all positive.
    pub eps_grid: Vec<Rat>,
    /// δ grid, strictly descending, all positive (may be empty for checks that
    /// take no δ quantifier).
    pub delta_grid: Vec<Rat>,
    /// Declared path-length bound. Path searches are exhaustive breadth-first
    /// scans whose witnesses are shortest paths, so this bound never truncates
    /// a search; it is validated and recorded for reporting.
    pub max_path_len: usize,
    /// Budget on scanned tuples/pairs/cover points before giving up as
    /// Inconclusive.
    pub tuple_budget: usize,
}

fn check_grid(name: &str, grid: &[Rat]) -> Result<()> {
    use num_traits::Zero;
    for w in grid.windows(2) {
        if w[0] <= w[1] {
            return Err(Error::invalid(format!("{name} grid must be strictly descending")));
        }
    }
    if let Some(last) = grid.last() {
        if *last <= Rat::zero() {
            return Err(Error::invalid(format!("{name} grid values must be positive")));
        }
    }
    Ok(())
}

impl Resolution {
    pub fn validate(&self) -> Result<()> {
        if self.n_points == 0 {
            return Err(Error::invalid("resolution needs n_points ≥ 1"));
        }
        if self.eps_grid.is_empty() {
            return Err(Error::invalid("resolution needs a nonempty ε grid"));
        }
        check_grid("ε", &self.eps_grid)?;
        check_grid("δ", &self.delta_grid)?;
        if self.max_path_len == 0 {
            return Err(Error::invalid("resolution needs max_path_len ≥ 1"));
        }
        if self.tuple_budget == 0 {
            return Err(Error::invalid("resolution needs tuple_budget ≥ 1"));
        }
        Ok(())
    }
}

/// Three-valued outcome of a bounded-resolution check.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Status {
    Holds,
    Fails,
    Inconclusive,
}

impl Status {
    pub fn as_str(&self) -> &'static str {
        match self {
            Status::Holds => "Holds",
            Status::Fails => "Fails",
            Status::Inconclusive => "Inconclusive",
        }
    }

    pub fn parse(s: &str) -> Result<Self> {
        match s {
            "Holds" => Ok(Status::Holds),
            "Fails" => Ok(Status::Fails),
            "Inconclusive" => Ok(Status::Inconclusive),
            _ => Err(Error::invalid(format!("unknown status {s:?}"))),
        }
    }
}

/// Which space a verdict was computed on: the presentation itself, or its
/// one-point compactification rooted at `base`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SpaceRef {
    Base,
    Compactified { base: usize },
}

/// Checker identity, including per-call arguments where the checker takes any.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CheckerKind {
    /// Some pair of net points at positive distance.
    Ndegen,
    /// Finite ε-net covers at every grid ε.
    Cpct,
    /// No cluster split at any grid ε.
    Conn,
    /// Stable local ε-components around every sampled ball pair.
    Lc,
    /// Point `y` lies between `x` and `z`: every fine path meets a ball at `y`.
    Btw { x: usize, y: usize, z: usize },
    /// Every triple admits a betweenness arrangement.
    Ord,
    /// Every 4-tuple admits a cyclic arrangement.
    Circ,
    /// Evidence that no ε-net of budget size covers (used by the line check).
    Noncompact,
}

impl CheckerKind {
    pub fn name(&self) -> &'static str {
        match self {
            CheckerKind::Ndegen => "ndegen",
            CheckerKind::Cpct => "cpct",
            CheckerKind::Conn => "conn",
            CheckerKind::Lc => "lc",
            CheckerKind::Btw { .. } => "btw",
            CheckerKind::Ord => "ord",
            CheckerKind::Circ => "circ",
            CheckerKind::Noncompact => "noncompact",
        }
    }
}

/// One refuted betweenness arrangement inside an order-condition failure:
/// with middle `mid`, the recorded path avoids the closed `dprime`-ball at
/// `mid` while stepping below `eps`, refuting the grid δ `delta`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ArrangementFail {
    pub mid: usize,
    pub delta: Rat,
    pub dprime: Rat,
    pub eps: Rat,
    pub path: Vec<usize>,
}

/// One refuted clause inside a cyclic-arrangement failure. `order` lists the
/// 4-tuple in the cyclic order tried; `position` is the index i of the failing
/// clause instance. Clause 1 failures record the obstacle radius ρ (`radius`)
/// at which no avoiding path from position i to i+1 exists; clause 2 failures
/// record the ball radius δ (`radius`) and the diagonal path (i to i+2) that
/// avoids both open δ-balls.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CircClauseFail {
    pub order: [usize; 4],
    pub clause: u8,
    pub position: u8,
    pub radius: Rat,
    pub eps: Rat,
    pub path: Option<Vec<usize>>,
}

/// Replayable evidence attached to a verdict.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Witness {
    None,
    /// ndegen Holds: first pair at positive distance.
    Pair { i: usize, j: usize, dist: Rat },
    /// ndegen Fails: all pairs among n points at distance zero.
    AllZero { n: usize },
    /// cpct Holds: greedy cover centers for each grid ε.
    Covers { covers: Vec<(Rat, Vec<usize>)> },
    /// cpct Inconclusive / noncompact Holds: budget+1 greedy centers, pairwise
    /// farther than ε apart.
    CoverBudget { eps: Rat, centers: Vec<usize> },
    /// conn Holds: single cluster at each grid ε.
    Connected { per_eps: Vec<(Rat, usize)> },
    /// conn Fails: the 2ε-cluster bipartition at the reported ε.
    ClusterSplit { eps: Rat, left: Vec<usize>, right: Vec<usize> },
    /// btw Holds: for each testable grid δ, the chosen (δ′, ε) pair.
    Schedule { per_delta: Vec<(Rat, Rat, Rat)> },
    /// btw Fails: a path avoiding the closed δ′-ball at the middle point.
    AvoidingPath { delta: Rat, dprime: Rat, eps: Rat, path: Vec<usize> },
    /// btw Inconclusive: no grid δ had both a finer δ′ and a finer ε.
    NoTestableDelta,
    /// ord Holds: the number of triples scanned (complete scan).
    TriplesScanned { count: usize },
    /// ord Fails: a triple all three of whose arrangements are refuted.
    TripleFail { triple: [usize; 3], fails: Vec<ArrangementFail> },
    /// ord Inconclusive: scan truncated or some triple undecided.
    TriplesUndecided { count: usize, pending: Option<[usize; 3]> },
    /// lc Holds: the number of (center, radius) pairs scanned (complete scan).
    PairsScanned { count: usize },
    /// lc Fails: around ball (center, r), the ε-classes of a and b merge at
    /// `eps` but split at the finer grid value `eps_fine`.
    LocalSplit { center: usize, r: Rat, eps: Rat, eps_fine: Rat, a: usize, b: usize },
    /// lc Inconclusive: scan truncated by the budget or grids too coarse.
    PairsUndecided { count: usize },
    /// circ Holds: the number of 4-tuples scanned (complete scan).
    TuplesScanned { count: usize },
    /// circ Fails: a 4-tuple all of whose cyclic arrangements are refuted.
    TupleFail { tuple: [usize; 4], fails: Vec<CircClauseFail> },
    /// circ Inconclusive: scan truncated or grids too coarse.
    TuplesUndecided { count: usize },
}

/// Outcome of one checker run.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Verdict {
    pub checker: CheckerKind,
    pub space: SpaceRef,
    pub status: Status,
    pub witness: Witness,
    pub resolution: Resolution,
    /// Actual net size used (may be smaller than `resolution.n_points`).
    pub net_len: usize,
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rat::rat;

    fn res(eps: &[(i64, i64)], delta: &[(i64, i64)]) -> Resolution {
        Resolution {
            n_points: 10,
            eps_grid: eps.iter().map(|&(n, d)| rat(n, d)).collect(),
            delta_grid: delta.iter().map(|&(n, d)| rat(n, d)).collect(),
            max_path_len: 100,
            tuple_budget: 1000,
        }
    }

    #[test]
    fn validation_enforces_descending_positive_grids() {
        assert!(res(&[(1, 2), (1, 4)], &[]).validate().is_ok());
        assert!(res(&[(1, 4), (1, 2)], &[]).validate().is_err());
        assert!(res(&[(1, 2), (1, 2)], &[]).validate().is_err());
        assert!(res(&[(1, 2), (0, 1)], &[]).validate().is_err());
        assert!(res(&[], &[]).validate().is_err());
        assert!(res(&[(1, 2)], &[(1, 2), (1, 4)]).validate().is_ok());
        let mut r = res(&[(1, 2)], &[]);
        r.tuple_budget = 0;
        assert!(r.validate().is_err());
    }

    #[test]
    fn status_round_trips() {
        for s in [Status::Holds, Status::Fails, Status::Inconclusive] {
            assert_eq!(Status::parse(s.as_str()).unwrap(), s);
        }
        assert!(Status::parse("Maybe").is_err());
    }
}
