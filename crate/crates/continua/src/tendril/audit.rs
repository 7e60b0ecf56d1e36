//! Per-stage audit of the tendril construction's bookkeeping promises, all
//! checked with exact rational arithmetic on breakpoints and logged points:
//!
//! 1. the collapse interpolant never exceeds the collapsed top arc;
//! 2. strict ordering: main line < bottom arc < top arc within each column,
//!    and every arc of a smaller column lies strictly above larger columns;
//! 3. no logged point falls below the main line;
//! 4. the main line is pointwise nondecreasing across a transition;
//! 5. a point on the main line stays on it, and no logged x-coordinate lies
//!    strictly inside any attachment interval (ℓ_n, r_n);
//! 6. a live tendril rises at most 2^{−s} above the main line, where s is its
//!    spawn stage;
//! 7. a collapse triggered by the k-th entry (0-based) of column n moves the
//!    main line by at most 2^{−n−k} in sup norm;
//! 8. attachments sit exactly at the stage-0 formulas, or strictly inside the
//!    spawn zone (−1/(2s), −1/(2s+2)) for a stage-s respawn.
//!
//! A violation aborts with the offending item; reports therefore only exist
//! for states that passed every applicable item.

use std::fmt::Write as _;
use std::ops::Bound;

use crate::error::{Error, Result};
use crate::rat::{fmt_rat, int, pow2, rat};

use super::{strictly_below, StageState};

/// Outcome of one audit item on one state.
#[derive(Debug, Clone)]
pub enum ItemStatus {
    Pass { checks: usize },
    Skipped { reason: String },
}

/// All eight item outcomes for one audited state.
#[derive(Debug, Clone)]
pub struct AuditReport {
    pub stage: u32,
    pub items: Vec<(u8, ItemStatus)>,
}

impl AuditReport {
    pub fn render(&self) -> String {
        let mut out = format!("stage {}\n  data conditions: pass\n", self.stage);
        for (item, status) in &self.items {
            match status {
                ItemStatus::Pass { checks } => {
                    let noun = if *checks == 1 { "check" } else { "checks" };
                    writeln!(out, "  item ({item}): pass [{checks} {noun}]").unwrap();
                }
                ItemStatus::Skipped { reason } => {
                    writeln!(out, "  item ({item}): skipped ({reason})").unwrap();
                }
            }
        }
        out
    }
}

fn fail(stage: u32, item: u8, msg: impl Into<String>) -> Error {
    Error::invalid(format!("stage {stage}: audit item ({item}): {}", msg.into()))
}

/// Audit the state: structural data conditions first, then the eight items.
/// Errors name the offending condition or item.
pub fn check_stage_invariants(state: &StageState) -> Result<AuditReport> {
    state
        .validate_data()
        .map_err(|e| Error::invalid(format!("stage {}: data conditions: {e}", state.stage)))?;
    let items = vec![
        (1, item1(state)?),
        (2, item2(state)?),
        (3, item3(state)?),
        (4, item4(state)?),
        (5, item5(state)?),
        (6, item6(state)?),
        (7, item7(state)?),
        (8, item8(state)?),
    ];
    Ok(AuditReport { stage: state.stage, items })
}

fn item1(state: &StageState) -> Result<ItemStatus> {
    let Some(rec) = &state.last_collapse else {
        return Ok(ItemStatus::Skipped { reason: "no collapse in the latest transition".into() });
    };
    let excess = rec
        .interp
        .max_signed_diff(&rec.old_top)
        .map_err(|e| fail(state.stage, 1, e.to_string()))?;
    if excess > int(0) {
        return Err(fail(
            state.stage,
            1,
            format!("interpolant exceeds the collapsed top arc by {}", fmt_rat(&excess)),
        ));
    }
    Ok(ItemStatus::Pass { checks: 1 })
}

fn item2(state: &StageState) -> Result<ItemStatus> {
    let one = int(1);
    let wrap = |e: Error| fail(state.stage, 2, e.to_string());
    let mut checks = 0usize;
    for td in &state.tendrils {
        let main_r = state.main.restrict(&td.r, &one).map_err(wrap)?;
        strictly_below(&main_r, &td.bottom, &[&td.r])
            .map_err(|e| fail(state.stage, 2, format!("column {}: main/bottom: {e}", td.n)))?;
        let main_l = state.main.restrict(&td.l, &one).map_err(wrap)?;
        strictly_below(&main_l, &td.top, &[&td.l])
            .map_err(|e| fail(state.stage, 2, format!("column {}: main/top: {e}", td.n)))?;
        let top_r = td.top.restrict(&td.r, &one).map_err(wrap)?;
        strictly_below(&td.bottom, &top_r, &[&one])
            .map_err(|e| fail(state.stage, 2, format!("column {}: bottom/top: {e}", td.n)))?;
        checks += 3;
    }
    for i in 0..state.tendrils.len() {
        for j in (i + 1)..state.tendrils.len() {
            let upper = &state.tendrils[i];
            let lower = &state.tendrils[j];
            let ceiling = upper.bottom.restrict(&lower.l, &one).map_err(wrap)?;
            strictly_below(&lower.top, &ceiling, &[]).map_err(|e| {
                fail(state.stage, 2, format!("columns {}/{}: {e}", upper.n, lower.n))
            })?;
            checks += 1;
        }
    }
    Ok(ItemStatus::Pass { checks })
}

fn item3(state: &StageState) -> Result<ItemStatus> {
    let mut checks = 0usize;
    for entry in &state.log {
        let floor = state
            .main
            .eval(&entry.x)
            .map_err(|e| fail(state.stage, 3, e.to_string()))?;
        if entry.y < floor {
            return Err(fail(
                state.stage,
                3,
                format!(
                    "logged point ({}, {}) fell below the main line ({})",
                    fmt_rat(&entry.x),
                    fmt_rat(&entry.y),
                    fmt_rat(&floor)
                ),
            ));
        }
        checks += 1;
    }
    Ok(ItemStatus::Pass { checks })
}

fn item4(state: &StageState) -> Result<ItemStatus> {
    let Some(prev) = &state.prev_main else {
        return Ok(ItemStatus::Skipped { reason: "no prior stage".into() });
    };
    let drop = prev
        .max_signed_diff(&state.main)
        .map_err(|e| fail(state.stage, 4, e.to_string()))?;
    if drop > int(0) {
        return Err(fail(
            state.stage,
            4,
            format!("main line decreased by {} somewhere", fmt_rat(&drop)),
        ));
    }
    Ok(ItemStatus::Pass { checks: 1 })
}

fn item5(state: &StageState) -> Result<ItemStatus> {
    let wrap = |e: Error| fail(state.stage, 5, e.to_string());
    let mut checks = 0usize;
    if let Some(prev) = &state.prev_main {
        for entry in &state.log {
            if entry.stage >= state.stage {
                continue;
            }
            let was_on_main = prev.eval(&entry.x).map_err(wrap)? == entry.y;
            if was_on_main && state.main.eval(&entry.x).map_err(wrap)? != entry.y {
                return Err(fail(
                    state.stage,
                    5,
                    format!("point at x = {} left the main line", fmt_rat(&entry.x)),
                ));
            }
            checks += 1;
        }
    }
    // Only points on the main line are barred from attachment intervals;
    // points on a live arc may sit above one (the top arc spans (ℓ_n, r_n)).
    for td in &state.tendrils {
        let range = (Bound::Excluded(td.l.clone()), Bound::Excluded(td.r.clone()));
        for (x, &i) in state.xindex.range(range) {
            let entry = &state.log[i];
            if state.main.eval(x).map_err(wrap)? == entry.y {
                return Err(fail(
                    state.stage,
                    5,
                    format!(
                        "main-line point at x = {} lies inside the attachment interval of column {}",
                        fmt_rat(x),
                        td.n
                    ),
                ));
            }
            checks += 1;
        }
    }
    Ok(ItemStatus::Pass { checks })
}

fn item6(state: &StageState) -> Result<ItemStatus> {
    let one = int(1);
    let wrap = |e: Error| fail(state.stage, 6, e.to_string());
    let mut checks = 0usize;
    for td in &state.tendrils {
        let base = state.main.restrict(&td.l, &one).map_err(wrap)?;
        let height = td.top.max_signed_diff(&base).map_err(wrap)?;
        let limit = pow2(-(td.spawn_stage as i32));
        if height > limit {
            return Err(fail(
                state.stage,
                6,
                format!(
                    "column {} spawned at stage {} rises {} > {}",
                    td.n,
                    td.spawn_stage,
                    fmt_rat(&height),
                    fmt_rat(&limit)
                ),
            ));
        }
        checks += 1;
    }
    Ok(ItemStatus::Pass { checks })
}

fn item7(state: &StageState) -> Result<ItemStatus> {
    let Some(rec) = &state.last_collapse else {
        return Ok(ItemStatus::Skipped { reason: "no collapse in the latest transition".into() });
    };
    let prev = state
        .prev_main
        .as_ref()
        .ok_or_else(|| fail(state.stage, 7, "collapse recorded without a prior main line"))?;
    let delta = prev
        .sup_abs_diff(&state.main)
        .map_err(|e| fail(state.stage, 7, e.to_string()))?;
    let limit = pow2(-((rec.column + rec.entry_index) as i32));
    if delta > limit {
        return Err(fail(
            state.stage,
            7,
            format!(
                "entry {} of column {} moved the main line by {} > {}",
                rec.entry_index,
                rec.column,
                fmt_rat(&delta),
                fmt_rat(&limit)
            ),
        ));
    }
    Ok(ItemStatus::Pass { checks: 1 })
}

fn item8(state: &StageState) -> Result<ItemStatus> {
    let mut checks = 0usize;
    for td in &state.tendrils {
        if td.spawn_stage == 0 {
            let ni = td.n as i64;
            let l0 = rat(-(ni + 1), 2 * ni);
            let r0 = rat(-(2 * ni + 3), 2 * (2 * ni + 1));
            if td.l != l0 || td.r != r0 {
                return Err(fail(
                    state.stage,
                    8,
                    format!("column {} deviates from the stage-0 attachment formulas", td.n),
                ));
            }
        } else {
            let si = td.spawn_stage as i64;
            let lo = rat(-1, 2 * si);
            let hi = rat(-1, 2 * si + 2);
            if !(lo < td.l && td.r < hi) {
                return Err(fail(
                    state.stage,
                    8,
                    format!(
                        "column {} attachments ({}, {}) escape the stage-{} zone ({}, {})",
                        td.n,
                        fmt_rat(&td.l),
                        fmt_rat(&td.r),
                        td.spawn_stage,
                        fmt_rat(&lo),
                        fmt_rat(&hi)
                    ),
                ));
            }
        }
        checks += 1;
    }
    Ok(ItemStatus::Pass { checks })
}

#[cfg(test)]
mod tests {
    use super::super::{init_stage0, Sigma3Params};
    use super::*;

    #[test]
    fn stage0_report_shape() {
        let state = init_stage0(&Sigma3Params::default()).unwrap();
        let report = check_stage_invariants(&state).unwrap();
        assert_eq!(report.stage, 0);
        assert_eq!(report.items.len(), 8);
        for (item, status) in &report.items {
            match status {
                ItemStatus::Pass { .. } => assert!([2, 3, 5, 6, 8].contains(item)),
                ItemStatus::Skipped { .. } => assert!([1, 4, 7].contains(item)),
            }
        }
        let text = report.render();
        assert!(text.contains("stage 0"));
        assert!(text.contains("item (8): pass"));
    }

    #[test]
    fn detects_a_sunk_point() {
        let mut state = init_stage0(&Sigma3Params::default()).unwrap();
        // Corrupt the log: a point strictly below the main line.
        state.log[1].y = rat(-1, 4);
        let err = check_stage_invariants(&state).unwrap_err().to_string();
        assert!(err.contains("item (3)"), "{err}");
    }

    #[test]
    fn detects_a_detached_arc() {
        let mut state = init_stage0(&Sigma3Params::default()).unwrap();
        state.tendrils[2].l = rat(-33, 50);
        let err = check_stage_invariants(&state).unwrap_err().to_string();
        assert!(err.contains("data conditions"), "{err}");
    }
}
