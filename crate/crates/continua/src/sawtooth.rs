//! Sawtooth spaces: a base segment plus a spiked function graph.
//!
//! The space is `Γ_f ∪ [0,1]×{0}` for an explicit piecewise function `f` with
//! `f(0) = 0`, `f(1) = 1`, built from a stage table: the unit interval is cut
//! into blocks `[a_{i+1}, a_i]` with a tooth tip at `b_i` inside each block,
//! and the tip height `b_i·2^{-|W_i|}` drops by a factor of two for every
//! recorded entry in column `i`. Away from the tips, `f(t)` is `t` times a
//! linear interpolation between consecutive attenuation levels, so `f` is
//! exactly computable at every rational that is not an open-column tip.
//!
//! Verified properties (unit and integration tests):
//! - block/subdivision sequences satisfy the ordering invariants exhaustively
//!   for i, j ≤ 8;
//! - `f(a_i) = a_i` and `f(b_i) = b_i·2^{-|W_i|}` for closed columns;
//! - the sandwich `t·2^{-|W_i[j+1]|} ≤ f(t) ≤ t·2^{-|W_i[j]|}` on every
//!   subdivision interval, hence `0 ≤ f(t) ≤ t` globally;
//! - adding a column entry weakly decreases `f` on the column's block and
//!   changes nothing outside it.

use num_traits::Zero;

use crate::error::{Error, Result};
use crate::point::SparsePoint;
use crate::presentation::Presentation;
use crate::rat::{dyadic_grid_ranked, int, pow2, Rat};
use crate::wtable::WTable;

/// The block and subdivision geometry: `a_i`, tooth tips `b_i`, and the left
/// and right subdivision sequences converging to each tip.
///
/// All values are explicit dyadic rationals (the underlying shape constraints
/// leave the sequences free; fixed dyadic choices keep every computation exact
/// and reproducible).
#[derive(Debug, Clone, Copy, Default)]
pub struct SawtoothParams;

impl SawtoothParams {
    /// Block boundary: `a_i = 4^{-i}`, strictly decreasing to 0 with `a_0 = 1`.
    pub fn a(&self, i: u32) -> Rat {
        pow2(-2 * i as i32)
    }

    /// Tooth tip: `b_i = a_i / 2`, so `a_{i+1} < b_i < a_i`.
    pub fn b(&self, i: u32) -> Rat {
        pow2(-2 * i as i32 - 1)
    }

    /// Left subdivision: `ℓ_i^j = a_{i+1} + (b_i − a_{i+1})(1 − 2^{-j})`,
    /// increasing from `a_{i+1}` toward `b_i`.
    pub fn l(&self, i: u32, j: u32) -> Rat {
        let a1 = self.a(i + 1);
        let gap = self.b(i) - &a1;
        a1 + gap * (int(1) - pow2(-(j as i32)))
    }

    /// Right subdivision: `r_i^j = a_i − (a_i − b_i)(1 − 2^{-j})`, decreasing
    /// from `a_i` toward `b_i`.
    pub fn r(&self, i: u32, j: u32) -> Rat {
        let a = self.a(i);
        let gap = &a - self.b(i);
        &a - gap * (int(1) - pow2(-(j as i32)))
    }
}

/// The concrete parameter choice used throughout.
pub fn default_params() -> SawtoothParams {
    SawtoothParams
}

/// Which case of the definition a point falls under.
enum Location {
    Origin,
    Tip { i: u32 },
    Left { i: u32, j: u32 },
    Right { i: u32, j: u32 },
}

fn locate(t: &Rat, p: &SawtoothParams) -> Result<Location> {
    if t < &Rat::zero() || t > &int(1) {
        return Err(Error::Domain(format!("{t} is outside [0, 1]")));
    }
    if t.is_zero() {
        return Ok(Location::Origin);
    }
    // Find the block [a_{i+1}, a_i] containing t (t > 0 guarantees termination).
    let mut i = 0u32;
    while p.a(i + 1) > *t {
        i += 1;
    }
    let b = p.b(i);
    if *t == b {
        return Ok(Location::Tip { i });
    }
    if *t < b {
        // Left side: find j with ℓ_i^j ≤ t ≤ ℓ_i^{j+1} (ℓ → b_i > t ends it).
        let mut j = 0u32;
        while p.l(i, j + 1) < *t {
            j += 1;
        }
        Ok(Location::Left { i, j })
    } else {
        // Right side: find j with r_i^{j+1} ≤ t ≤ r_i^j.
        let mut j = 0u32;
        while p.r(i, j + 1) > *t {
            j += 1;
        }
        Ok(Location::Right { i, j })
    }
}

/// Attenuation level after `j` entries of column `i`: `2^{-|W_i[j]|}`, with
/// `|W_i[j]|` counting the entries at stages below `j`.
fn level(w: &WTable, i: u32, j: u32) -> Rat {
    pow2(-(w.column_size_below(i, j) as i32))
}

/// Evaluate the sawtooth function at `t ∈ [0, 1]`.
///
/// Errors: outside the domain; at the tip `b_i` of a column marked open (its
/// value depends on how the column keeps growing; closed columns evaluate to
/// `b_i·2^{-|W_i|}` exactly).
pub fn sawtooth_f(t: &Rat, w: &WTable, p: &SawtoothParams) -> Result<Rat> {
    match locate(t, p)? {
        Location::Origin => Ok(Rat::zero()),
        Location::Tip { i } => {
            if w.is_open(i) {
                Err(Error::OpenTip { column: i })
            } else {
                Ok(p.b(i) * pow2(-(w.column_size(i) as i32)))
            }
        }
        Location::Left { i, j } => {
            let (lo, hi) = (p.l(i, j), p.l(i, j + 1));
            let (lev_lo, lev_hi) = (level(w, i, j), level(w, i, j + 1));
            let frac = (t - &lo) / (hi - &lo);
            Ok(t * (frac * (lev_hi - &lev_lo) + lev_lo))
        }
        Location::Right { i, j } => {
            let (lo, hi) = (p.r(i, j + 1), p.r(i, j));
            let (lev_lo, lev_hi) = (level(w, i, j + 1), level(w, i, j));
            let frac = (t - &lo) / (hi - &lo);
            Ok(t * (frac * (lev_hi - &lev_lo) + lev_lo))
        }
    }
}

/// Presentation of the sawtooth space on the dyadic grid of the given depth.
///
/// Special points: the base family `(x, 0)` over the ranked dyadic grid, then
/// the graph family `(x, f(x))` over the same grid, skipping `x = 0` (its
/// graph point coincides with the base point) and the tips of open columns
/// (where `f` is undetermined). Plane points use coordinate 0 for x and
/// coordinate 1 for y under the ambient sup metric.
pub fn gen_sawtooth(w: &WTable, depth: u32, p: &SawtoothParams) -> Result<Presentation> {
    if depth == 0 {
        return Err(Error::invalid("sawtooth depth must be ≥ 1"));
    }
    let grid = dyadic_grid_ranked(depth);
    let mut points = Vec::new();
    for x in &grid {
        points.push(plane_point(x, &Rat::zero()));
    }
    for x in &grid {
        if x.is_zero() {
            continue;
        }
        match sawtooth_f(x, w, p) {
            Ok(y) => points.push(plane_point(x, &y)),
            Err(Error::OpenTip { .. }) => continue,
            Err(e) => return Err(e),
        }
    }
    Presentation::new(format!("sawtooth depth {depth}"), points)
}

fn plane_point(x: &Rat, y: &Rat) -> SparsePoint {
    let mut coords: Vec<(u32, Rat)> = Vec::new();
    if !x.is_zero() {
        coords.push((0, x.clone()));
    }
    if !y.is_zero() {
        coords.push((1, y.clone()));
    }
    SparsePoint::from_pairs(coords)
}
