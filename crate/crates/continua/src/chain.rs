//! Chained copies of the staged construction, welded end to end, and the
//! square wrap that turns the chain into a circle test.
//!
//! [`run_pi4_chain`] runs one staged build per table index `m = 1..=m_max`,
//! rescales each resulting point cloud from its native `[−1,1] × [0,1]` box
//! into the unit square, shrinks copy `m` by `2^{−m}`, and lays the copies
//! along coordinate axis 0 so that each copy's right endpoint coincides with
//! the next copy's left endpoint (the *weld*). Copy `m` keeps its heights on
//! its own private axis `m`, so distinct copies meet only at welds. The point
//! `(1, 0, 0, …)` is appended as the limit of the copies.
//!
//! [`circle_wrap`] places that chain as one side of a unit square whose other
//! three sides are straight dyadic segments, producing a space that is
//! circle-like exactly when the chain is arc-like.
//!
//! Verified behaviors:
//! - copy `m` occupies axis-0 interval `[1 − 2^{1−m}, 1 − 2^{−m}]`; the limit
//!   point sits at axis-0 distance exactly `2^{−m_max}` from the last weld;
//! - consecutive copies share exactly the weld point and nothing else; the
//!   constructor errors if a duplicate appears anywhere but a weld;
//! - a table index above `m_max` is an error (a silently unused table would
//!   misdescribe the space being built);
//! - the wrap's four corner points are shared between adjacent sides exactly
//!   once each; everything is deterministic in its inputs.

use crate::error::{Error, Result};
use crate::point::SparsePoint;
use crate::presentation::Presentation;
use crate::rat::{fmt_rat, int, pow2, rat, Rat};
use crate::tendril::{run_sigma3, Sigma3Params};
use crate::wtable::{UTable, WTable};

/// Affine images of one staged run, in chain coordinates.
///
/// Native `(x, y)` with `x ∈ [−1, 1]` maps to axis-0 value
/// `1 − 2^{1−m} + (x+1)/2^{m+1}` and axis-`m` value `y/2^m`.
fn copy_images(state_log: &[(Rat, Rat)], m: u32) -> Result<Vec<SparsePoint>> {
    let prefix = int(1) - pow2(1 - m as i32);
    let scale_u = pow2(-(m as i32 + 1));
    let scale_w = pow2(-(m as i32));
    let one = int(1);
    let mut images = Vec::with_capacity(state_log.len());
    for (x, y) in state_log {
        if y > &one {
            return Err(Error::invalid(format!(
                "copy {m}: logged height {} exceeds the unit box",
                fmt_rat(y)
            )));
        }
        let u = &prefix + (x + &one) * &scale_u;
        let w = y * &scale_w;
        images.push(SparsePoint::from_pairs([(0u32, u), (m, w)]));
    }
    Ok(images)
}

/// The weld point between copies `m` and `m+1`: axis-0 value `1 − 2^{−m}`.
fn weld_point(m: u32) -> SparsePoint {
    SparsePoint::from_pairs([(0u32, int(1) - pow2(-(m as i32)))])
}

/// Run one staged build per table index and weld the rescaled copies into a
/// chain along axis 0, with the limit point `(1, 0, 0, …)` appended.
///
/// A missing table index is treated as an empty stage table; a table index
/// above `m_max` is rejected.
pub fn run_pi4_chain(
    u: &UTable,
    m_max: u32,
    stages: u32,
    params: &Sigma3Params,
) -> Result<Presentation> {
    if m_max == 0 {
        return Err(Error::invalid("need at least one chained copy"));
    }
    if let Some((m, _)) = u.tables().find(|(m, _)| *m > m_max) {
        return Err(Error::invalid(format!(
            "table {m} lies beyond the last chained copy {m_max}"
        )));
    }
    let empty = WTable::new();
    let mut points: Vec<SparsePoint> = Vec::new();
    for m in 1..=m_max {
        let table = u.get(m).unwrap_or(&empty);
        let state = run_sigma3(table, stages, params)
            .map_err(|e| Error::invalid(format!("copy {m}: {e}")))?;
        let log: Vec<(Rat, Rat)> = state.log.iter().map(|e| (e.x.clone(), e.y.clone())).collect();
        let images = copy_images(&log, m)?;
        // Within one copy the map is injective (axis 0 determines x, axis m
        // determines y) and copies overlap only at welds, so the only
        // duplicate each copy may produce is the weld into its predecessor.
        let weld = weld_point(m - 1);
        for img in images {
            if points.contains(&img) {
                if m == 1 || img != weld {
                    return Err(Error::invalid(format!(
                        "copy {m}: duplicate point off the weld"
                    )));
                }
                continue;
            }
            points.push(img);
        }
    }
    points.push(SparsePoint::from_pairs([(0u32, int(1))]));
    Presentation::new("pi4-chain", points)
}

/// Wrap the chain into a square: three straight sides on a dyadic grid of
/// step `1/side_step_denom`, with the chain (its coordinates shifted up one
/// axis) as the fourth side from the origin to `(0, 1, 0, …)`.
pub fn circle_wrap(
    u: &UTable,
    m_max: u32,
    stages: u32,
    params: &Sigma3Params,
    side_step_denom: u32,
) -> Result<Presentation> {
    if side_step_denom == 0 {
        return Err(Error::invalid("side grid step needs a positive denominator"));
    }
    let chain = run_pi4_chain(u, m_max, stages, params)?;
    let d = side_step_denom as i64;
    let mut points: Vec<SparsePoint> = Vec::new();
    let push_unique = |p: SparsePoint, points: &mut Vec<SparsePoint>| {
        if !points.contains(&p) {
            points.push(p);
        }
    };
    // Side from the origin to (1, 0, …), then up to (1, 1, 0, …), then back
    // to (0, 1, 0, …); corners shared with the previous side are dropped.
    for k in 0..=d {
        push_unique(SparsePoint::from_pairs([(0u32, rat(k, d))]), &mut points);
    }
    for k in 0..=d {
        push_unique(
            SparsePoint::from_pairs([(0u32, int(1)), (1u32, rat(k, d))]),
            &mut points,
        );
    }
    for k in 0..=d {
        push_unique(
            SparsePoint::from_pairs([(0u32, rat(k, d)), (1u32, int(1))]),
            &mut points,
        );
    }
    // The chain becomes the fourth side: shift every axis up by one, so it
    // runs from the origin to (0, 1, 0, …) on the slice where axis 0 is 0.
    for p in chain.points() {
        let shifted =
            SparsePoint::from_pairs(p.iter().map(|(&i, r)| (i + 1, r.clone())));
        push_unique(shifted, &mut points);
    }
    Presentation::new("circle-wrap", points)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rat::rat;

    fn empty_u() -> UTable {
        UTable::new()
    }

    #[test]
    fn copy_one_occupies_the_left_half() {
        let params = Sigma3Params::default();
        let pres = run_pi4_chain(&empty_u(), 1, 1, &params).unwrap();
        let us: Vec<Rat> = pres.points()[..pres.len() - 1]
            .iter()
            .map(|p| p.coord(0))
            .collect();
        assert_eq!(us.iter().min().unwrap(), &int(0));
        assert_eq!(us.iter().max().unwrap(), &rat(1, 2));
        assert_eq!(pres.points().last().unwrap(), &SparsePoint::from_pairs([(0u32, int(1))]));
    }

    #[test]
    fn welds_are_shared_exactly_once() {
        let params = Sigma3Params::default();
        let single = run_sigma3(&WTable::new(), 2, &params).unwrap().log.len();
        let pres = run_pi4_chain(&empty_u(), 3, 2, &params).unwrap();
        // Three identical copies, two welds deduplicated, one limit point.
        assert_eq!(pres.len(), 3 * single - 2 + 1);
        for m in 1..=2u32 {
            assert!(pres.points().contains(&weld_point(m)));
        }
    }

    #[test]
    fn limit_point_sits_one_tail_step_beyond_the_last_weld() {
        let params = Sigma3Params::default();
        let pres = run_pi4_chain(&empty_u(), 3, 1, &params).unwrap();
        let limit = pres.points().last().unwrap();
        let far = weld_point(3);
        assert!(pres.points().contains(&far));
        assert_eq!(limit.sup_dist(&far), pow2(-3));
        // No point of the chain is closer to the limit than the far weld.
        let nearest = pres.points()[..pres.len() - 1]
            .iter()
            .map(|p| limit.sup_dist(p))
            .min()
            .unwrap();
        assert_eq!(nearest, pow2(-3));
    }

    #[test]
    fn rejects_tables_beyond_the_last_copy() {
        let mut u = UTable::new();
        u.insert(4, WTable::new()).unwrap();
        let err = run_pi4_chain(&u, 3, 1, &Sigma3Params::default())
            .unwrap_err()
            .to_string();
        assert!(err.contains("beyond the last chained copy"), "{err}");
    }

    #[test]
    fn wrap_shares_each_corner_once() {
        let params = Sigma3Params::default();
        let chain = run_pi4_chain(&empty_u(), 2, 1, &params).unwrap();
        let wrap = circle_wrap(&empty_u(), 2, 1, &params, 8).unwrap();
        // Three 9-point sides lose 2 shared corners; the chain loses its two
        // endpoints (origin and limit) to the side grid.
        assert_eq!(wrap.len(), 3 * 9 - 2 + chain.len() - 2);
        for corner in [
            SparsePoint::origin(),
            SparsePoint::from_pairs([(0u32, int(1))]),
            SparsePoint::from_pairs([(0u32, int(1)), (1u32, int(1))]),
            SparsePoint::from_pairs([(1u32, int(1))]),
        ] {
            assert_eq!(wrap.points().iter().filter(|p| **p == corner).count(), 1);
        }
    }

    #[test]
    fn wrap_is_deterministic() {
        let params = Sigma3Params::default();
        let a = circle_wrap(&empty_u(), 2, 2, &params, 8).unwrap();
        let b = circle_wrap(&empty_u(), 2, 2, &params, 8).unwrap();
        assert_eq!(a.render(), b.render());
    }
}
