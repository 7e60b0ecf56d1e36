//! Stage machine for the collapsing-tendril line: a piecewise-linear main
//! segment over [−1, 1] decorated with finitely many two-arc tendrils that
//! collapse into the main line when their table column receives an entry, and
//! then respawn smaller and closer to x = 0.
//!
//! Verified behaviour (unit tests here; per-stage bookkeeping in [`audit`]):
//! - stage-0 layout: main line ≡ 0, attachments ℓ_n = −1/2 − 1/(2n) and
//!   r_n = −1/2 − 1/(2n+1), both arcs of tendril n meeting at (1, 2⁻ⁿ);
//! - a collapse at column n folds exactly the logged points strictly below the
//!   surviving bottom arc (all logged points when n = 1) into the new main
//!   line, which is the pointwise max of the old line and their interpolant;
//! - tendrils respawned at stage s land strictly inside (−1/(2s), −1/(2s+2)),
//!   avoid every logged x-coordinate, and rise to height g/2^{m+s−1} above the
//!   main line at x = 1, where g is the gap below the surviving bottom arc;
//! - grid insertions (dyadic on the main line, prime-power per arc) are capped
//!   by a deterministic stride that always keeps a dense tail near x = 1, and
//!   a re-generated x-coordinate must reproduce its logged y exactly.

pub mod audit;

use std::collections::BTreeMap;
use std::ops::Bound;

use num_traits::ToPrimitive;

use crate::error::{Error, Result};
use crate::plf::PLFunction;
use crate::point::SparsePoint;
use crate::presentation::Presentation;
use crate::primes::{arc_prime, Side};
use crate::rat::{fmt_rat, int, pow2, rat, Rat};
use crate::wtable::WTable;

/// Size and truncation knobs for a tendril-line run.
#[derive(Debug, Clone)]
pub struct Sigma3Params {
    /// Number of materialized tendril columns (1..=tendril_count).
    pub tendril_count: u32,
    /// Cap on the dyadic exponent for main-line insertions.
    pub dyadic_depth: u32,
    /// Arc grids use denominator p^e with the largest e ≥ 1 with p^e ≤ this.
    pub max_denominator: u64,
    /// Per-arc, per-stage cap on inserted grid points (stride subsampling).
    pub arc_budget: usize,
    /// Number of highest-x grid candidates always kept at full density.
    pub tail_keep: usize,
    /// Gap value used when tendril 1 respawns (no arc survives above it).
    pub boundary_gap: Rat,
}

impl Default for Sigma3Params {
    fn default() -> Self {
        Sigma3Params {
            tendril_count: 3,
            dyadic_depth: 9,
            max_denominator: 256,
            arc_budget: 192,
            tail_keep: 24,
            boundary_gap: rat(1, 16),
        }
    }
}

/// Where a logged special point came from.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Provenance {
    /// Inserted on the main line.
    Main,
    /// Inserted on the top arc of the given column.
    Top(u32),
    /// Inserted on the bottom arc of the given column.
    Bottom(u32),
}

/// One logged special point. The log is append-only and coordinates never
/// change once logged; collapses move the main line up to meet them instead.
#[derive(Debug, Clone)]
pub struct LogEntry {
    pub x: Rat,
    pub y: Rat,
    /// Stage at which the point was logged.
    pub stage: u32,
    pub provenance: Provenance,
}

/// One live tendril: a top arc over [l, 1] and a bottom arc over [r, 1] that
/// attach to the main line at x = l resp. x = r and meet each other at x = 1.
#[derive(Debug, Clone)]
pub struct Tendril {
    /// Column number, from 1.
    pub n: u32,
    pub l: Rat,
    pub r: Rat,
    pub top: PLFunction,
    pub bottom: PLFunction,
    /// Stage at which this instance spawned (0 for the initial layout).
    pub spawn_stage: u32,
    /// Collapse count of column n when this instance spawned; selects the
    /// instance's grid primes, so every instance gets fresh denominators.
    pub instance: u32,
}

impl Tendril {
    pub fn top_prime(&self) -> u64 {
        arc_prime(self.n, self.instance, Side::Top)
    }

    pub fn bottom_prime(&self) -> u64 {
        arc_prime(self.n, self.instance, Side::Bottom)
    }
}

/// What the latest collapse did; retained for the transition audit items.
#[derive(Debug, Clone)]
pub struct CollapseRecord {
    pub stage: u32,
    /// Triggering column n (columns n..=tendril_count collapsed).
    pub column: u32,
    /// 0-based count of entries processed in this column before this one.
    pub entry_index: u32,
    /// Attachment ℓ_n of the collapsed instance.
    pub old_left: Rat,
    /// Top arc of the collapsed instance.
    pub old_top: PLFunction,
    /// The interpolant through the folded points on [old_left, 1].
    pub interp: PLFunction,
}

/// Full construction state after some number of stages.
#[derive(Debug, Clone)]
pub struct StageState {
    pub stage: u32,
    /// Main line on [−1, 1].
    pub main: PLFunction,
    /// Live tendrils; always exactly columns 1..=tendril_count, in order.
    pub tendrils: Vec<Tendril>,
    /// Append-only log of special points, in insertion order.
    pub log: Vec<LogEntry>,
    /// x-coordinate → log index; special points have pairwise distinct x.
    xindex: BTreeMap<Rat, usize>,
    /// Per column (index n−1): entries processed so far. The value before a
    /// collapse is the k of that collapse's 2^{−n−k} main-line bound.
    pub entries_processed: Vec<u32>,
    /// Per column: collapses suffered so far (selects prime instances).
    pub collapse_counts: Vec<u32>,
    /// Main line before the latest stage transition (None at stage 0).
    pub prev_main: Option<PLFunction>,
    /// Collapse performed by the latest transition, if any.
    pub last_collapse: Option<CollapseRecord>,
    pub params: Sigma3Params,
}

/// The arc 𝔪 + c·(x − a)/(1 − a) over [a, 1]: it rises from the main line at
/// its attachment x = a to height c above the main line at x = 1.
fn make_arc(main: &PLFunction, attach: &Rat, coeff: &Rat) -> Result<PLFunction> {
    let one = int(1);
    let base = main.restrict(attach, &one)?;
    let den = &one - attach;
    let c1 = coeff / &den;
    let c0 = -(coeff * attach) / &den;
    Ok(base.add_linear(&c0, &c1))
}

fn plane_point(x: &Rat, y: &Rat) -> SparsePoint {
    SparsePoint::from_pairs([(0u32, x.clone()), (1u32, y.clone())])
}

/// Largest e ≥ 1 with p^e ≤ cap, further capped by the stage number.
fn exponent_for(p: u64, stage: u32, cap: u64) -> u32 {
    let mut e = 1u32;
    let mut v = p;
    while e < stage && v.saturating_mul(p) <= cap {
        v *= p;
        e += 1;
    }
    e
}

/// Indices kept under the per-arc budget: every ⌈n/budget⌉-th candidate plus
/// the `tail` highest-x candidates, ascending and deduplicated.
fn stride_select(n: usize, budget: usize, tail: usize) -> Vec<usize> {
    if n <= budget {
        return (0..n).collect();
    }
    let step = n.div_ceil(budget);
    let mut keep: Vec<usize> = (0..n).step_by(step).collect();
    keep.extend(n.saturating_sub(tail)..n);
    keep.sort_unstable();
    keep.dedup();
    keep
}

fn ceil_to_i64(r: &Rat) -> Result<i64> {
    r.ceil()
        .to_integer()
        .to_i64()
        .ok_or_else(|| Error::invalid("grid index out of i64 range"))
}

/// Initial state: main line ≡ 0, stage-0 tendrils, the two seed points
/// (−1, 0) and (1, 0) logged (in that order).
pub fn init_stage0(params: &Sigma3Params) -> Result<StageState> {
    if params.tendril_count == 0 {
        return Err(Error::invalid("need at least one tendril column"));
    }
    if params.dyadic_depth == 0 || params.dyadic_depth > 30 {
        return Err(Error::invalid("dyadic depth must be in 1..=30"));
    }
    if params.arc_budget == 0 {
        return Err(Error::invalid("arc budget must be positive"));
    }
    if params.boundary_gap <= int(0) || params.boundary_gap >= int(1) {
        return Err(Error::invalid("boundary gap must lie strictly between 0 and 1"));
    }
    let t = params.tendril_count;
    let main = PLFunction::constant(int(-1), int(1), int(0))?;
    let mut state = StageState {
        stage: 0,
        main,
        tendrils: Vec::with_capacity(t as usize),
        log: Vec::new(),
        xindex: BTreeMap::new(),
        entries_processed: vec![0; t as usize],
        collapse_counts: vec![0; t as usize],
        prev_main: None,
        last_collapse: None,
        params: params.clone(),
    };
    for n in 1..=t {
        let ni = n as i64;
        let l = rat(-(ni + 1), 2 * ni);
        let r = rat(-(2 * ni + 3), 2 * (2 * ni + 1));
        let coeff = pow2(-(n as i32));
        let top = make_arc(&state.main, &l, &coeff)?;
        let bottom = make_arc(&state.main, &r, &coeff)?;
        state.tendrils.push(Tendril { n, l, r, top, bottom, spawn_stage: 0, instance: 0 });
    }
    state.log_point(int(-1), int(0), Provenance::Main)?;
    state.log_point(int(1), int(0), Provenance::Main)?;
    Ok(state)
}

impl StageState {
    /// The logged point at exactly this x-coordinate, if any.
    pub fn lookup_x(&self, x: &Rat) -> Option<&LogEntry> {
        self.xindex.get(x).map(|&i| &self.log[i])
    }

    /// Append (x, y) unless x is already logged. Returns false on an exact
    /// duplicate; errors if a logged x reappears with a different y, since the
    /// construction promises one special point per x-coordinate.
    fn log_point(&mut self, x: Rat, y: Rat, provenance: Provenance) -> Result<bool> {
        if let Some(&i) = self.xindex.get(&x) {
            let old = &self.log[i];
            if old.y != y {
                return Err(Error::invalid(format!(
                    "x-uniqueness violation at x = {}: logged y = {} at stage {}, regenerated y = {}",
                    fmt_rat(&x),
                    fmt_rat(&old.y),
                    old.stage,
                    fmt_rat(&y)
                )));
            }
            return Ok(false);
        }
        self.xindex.insert(x.clone(), self.log.len());
        let stage = self.stage;
        self.log.push(LogEntry { x, y, stage, provenance });
        Ok(true)
    }

    /// Collapse columns n..=tendril_count into the main line. The logged
    /// points strictly below the surviving bottom arc (all of them when
    /// n = 1) become breakpoints of the new main line, which is the pointwise
    /// max of the old line and their left-to-right interpolant on [ℓ_n, 1].
    ///
    /// The collapsed columns are removed; callers respawn them immediately via
    /// [`StageState::spawn_tendrils`].
    pub fn collapse_from(&mut self, n: u32) -> Result<()> {
        let t = self.params.tendril_count;
        if n == 0 || n > t {
            return Err(Error::invalid(format!("collapse column {n} outside 1..={t}")));
        }
        if self.tendrils.len() != t as usize {
            return Err(Error::invalid("collapse requires all columns live"));
        }
        let idx = (n - 1) as usize;
        let old = self.tendrils[idx].clone();
        let one = int(1);
        let bound = if n >= 2 { Some(self.tendrils[idx - 1].bottom.clone()) } else { None };

        let mut anchors: Vec<(Rat, Rat)> = Vec::new();
        anchors.push((old.l.clone(), self.main.eval(&old.l)?));
        for (x, &i) in self.xindex.range(old.l.clone()..=one.clone()) {
            let entry = &self.log[i];
            let keep = match &bound {
                Some(b) => entry.y < b.eval(x)?,
                None => true,
            };
            if keep {
                anchors.push((entry.x.clone(), entry.y.clone()));
            }
        }
        anchors.push((one.clone(), int(0)));
        anchors.sort_by(|a, b| a.0.cmp(&b.0));
        let mut dedup: Vec<(Rat, Rat)> = Vec::with_capacity(anchors.len());
        for (x, y) in anchors {
            if let Some((px, py)) = dedup.last() {
                if *px == x {
                    if *py != y {
                        return Err(Error::invalid(format!(
                            "collapse anchors disagree at x = {}",
                            fmt_rat(&x)
                        )));
                    }
                    continue;
                }
            }
            dedup.push((x, y));
        }
        let interp = PLFunction::new(dedup)?;

        let lifted = self.main.restrict(&old.l, &one)?.max_with(&interp)?;
        let minus_one = int(-1);
        self.main = if old.l > minus_one {
            PLFunction::concat(&self.main.restrict(&minus_one, &old.l)?, &lifted)?
        } else {
            lifted
        };

        // Every collapsed instance retires its primes, including the columns
        // above n that collapse collaterally.
        for tendril in &self.tendrils[idx..] {
            self.collapse_counts[(tendril.n - 1) as usize] += 1;
        }
        self.tendrils.truncate(idx);

        let k = self.entries_processed[idx];
        self.entries_processed[idx] += 1;
        self.last_collapse = Some(CollapseRecord {
            stage: self.stage,
            column: n,
            entry_index: k,
            old_left: old.l,
            old_top: old.top,
            interp,
        });
        Ok(())
    }

    /// The spawn gap for column n with its current attachment ℓ_n: the sup of
    /// (surviving bottom arc − main line) over [ℓ_n, 1], or the configured
    /// boundary gap when no arc survives above (n = 1).
    pub fn gap(&self, n: u32) -> Result<Rat> {
        if n == 1 {
            return Ok(self.params.boundary_gap.clone());
        }
        let tendril = self
            .tendrils
            .iter()
            .find(|t| t.n == n)
            .ok_or_else(|| Error::invalid(format!("column {n} is not live")))?;
        let survivor = self
            .tendrils
            .iter()
            .find(|t| t.n == n - 1)
            .ok_or_else(|| Error::invalid(format!("column {} is not live", n - 1)))?;
        let one = int(1);
        let above = survivor.bottom.restrict(&tendril.l, &one)?;
        let below = self.main.restrict(&tendril.l, &one)?;
        above.max_signed_diff(&below)
    }

    /// Respawn columns n..=tendril_count at stage `stage`, strictly inside the
    /// zone (−1/(2·stage), −1/(2·stage+2)), with attachments avoiding every
    /// logged x-coordinate and no logged point between any new ℓ and r.
    pub fn spawn_tendrils(&mut self, n: u32, stage: u32) -> Result<()> {
        let t = self.params.tendril_count;
        if n == 0 || n > t {
            return Err(Error::invalid(format!("spawn column {n} outside 1..={t}")));
        }
        if stage == 0 {
            return Err(Error::invalid("respawns happen at stages ≥ 1"));
        }
        if self.tendrils.len() != (n - 1) as usize {
            return Err(Error::invalid("spawn expects columns n.. to have been collapsed"));
        }
        let si = stage as i64;
        let zone_lo = rat(-1, 2 * si);
        let zone_hi = rat(-1, 2 * si + 2);
        if let Some(prev) = self.tendrils.last() {
            if prev.r >= zone_lo {
                return Err(Error::invalid(format!(
                    "surviving attachment r_{} = {} is not left of the stage-{stage} zone",
                    prev.n,
                    fmt_rat(&prev.r)
                )));
            }
        }
        let slots = (t - n + 1) as i64;
        let width = &zone_hi - &zone_lo;
        let parts = int(2 * slots + 1);
        let two = int(2);
        let mut prev_bound = zone_lo.clone();
        let mut attachments: Vec<(Rat, Rat)> = Vec::with_capacity(slots as usize);
        for j in 0..slots {
            let mut l = &zone_lo + &width * int(2 * j + 1) / &parts;
            while self.xindex.contains_key(&l) {
                l = (&prev_bound + &l) / &two;
            }
            let mut r = &zone_lo + &width * int(2 * j + 2) / &parts;
            loop {
                let hit = self
                    .xindex
                    .range((Bound::Excluded(l.clone()), Bound::Included(r.clone())))
                    .next()
                    .map(|(x, _)| x.clone());
                match hit {
                    Some(x) => r = (&l + &x) / &two,
                    None => break,
                }
            }
            if !(prev_bound < l && l < r) {
                return Err(Error::invalid("attachment slot collapsed while avoiding logged points"));
            }
            prev_bound = r.clone();
            attachments.push((l, r));
        }

        let one = int(1);
        let g = if n == 1 {
            self.params.boundary_gap.clone()
        } else {
            let l0 = &attachments[0].0;
            let survivor = &self.tendrils[(n - 2) as usize].bottom;
            survivor
                .restrict(l0, &one)?
                .max_signed_diff(&self.main.restrict(l0, &one)?)?
        };
        if g <= int(0) {
            return Err(Error::invalid("spawn gap must be positive"));
        }
        for (j, (l, r)) in attachments.into_iter().enumerate() {
            let m = n + j as u32;
            let coeff = &g * pow2(-((m + stage - 1) as i32));
            let top = make_arc(&self.main, &l, &coeff)?;
            let bottom = make_arc(&self.main, &r, &coeff)?;
            self.tendrils.push(Tendril {
                n: m,
                l,
                r,
                top,
                bottom,
                spawn_stage: stage,
                instance: self.collapse_counts[(m - 1) as usize],
            });
        }
        Ok(())
    }

    /// Run the insertion rules for stage `stage` (≥ 1): dyadic grid points on
    /// the main line outside every attachment interval, then prime-power grid
    /// points on each live arc, capped by the stride budget.
    pub fn insert_points(&mut self, stage: u32) -> Result<()> {
        if stage == 0 {
            return Err(Error::invalid("stage 0 logs only the two seed points"));
        }
        // Main line: x = t/2^e in (−1, 1) ∖ {0}, skipping attachment zones.
        let e = stage.min(self.params.dyadic_depth);
        let denom: i64 = 1 << e;
        for t in -(denom - 1)..=(denom - 1) {
            if t == 0 {
                continue;
            }
            let x = rat(t, denom);
            if self.tendrils.iter().any(|td| td.l < x && x < td.r) {
                continue;
            }
            let y = self.main.eval(&x)?;
            self.log_point(x, y, Provenance::Main)?;
        }
        // Arcs: x = t/p^e in [attachment, 1) ∖ {0} on each arc's own prime.
        let arcs: Vec<(Provenance, u64, Rat, PLFunction)> = self
            .tendrils
            .iter()
            .flat_map(|td| {
                [
                    (Provenance::Top(td.n), td.top_prime(), td.l.clone(), td.top.clone()),
                    (Provenance::Bottom(td.n), td.bottom_prime(), td.r.clone(), td.bottom.clone()),
                ]
            })
            .collect();
        for (provenance, p, lo, arc) in arcs {
            let e = exponent_for(p, stage, self.params.max_denominator);
            let denom_u = p.pow(e);
            let denom_i = i64::try_from(denom_u)
                .map_err(|_| Error::invalid("arc grid denominator out of range"))?;
            let t_min = ceil_to_i64(&(&lo * int(denom_i)))?;
            let mut cands: Vec<(Rat, Rat)> = Vec::new();
            for t in t_min..denom_i {
                if t == 0 {
                    continue;
                }
                let x = rat(t, denom_i);
                let y = arc.eval(&x)?;
                cands.push((x, y));
            }
            for i in stride_select(cands.len(), self.params.arc_budget, self.params.tail_keep) {
                let (x, y) = cands[i].clone();
                self.log_point(x, y, provenance)?;
            }
        }
        Ok(())
    }

    /// Structural conditions on the current state, checked exactly:
    /// contiguous live columns; ℓ_n < r_n < 0 with the global attachment chain
    /// increasing; arcs attached to the main line at ℓ_n resp. r_n; both arcs
    /// meeting at x = 1.
    pub fn validate_data(&self) -> Result<()> {
        let t = self.params.tendril_count;
        if self.tendrils.len() != t as usize {
            return Err(Error::invalid(format!(
                "expected {t} live tendrils, found {}",
                self.tendrils.len()
            )));
        }
        let zero = int(0);
        let one = int(1);
        let mut prev_r: Option<&Rat> = None;
        for (i, tendril) in self.tendrils.iter().enumerate() {
            if tendril.n != i as u32 + 1 {
                return Err(Error::invalid("live columns must be 1..=tendril_count in order"));
            }
            if !(tendril.l < tendril.r && tendril.r < zero) {
                return Err(Error::invalid(format!(
                    "column {}: need ℓ < r < 0, got ℓ = {}, r = {}",
                    tendril.n,
                    fmt_rat(&tendril.l),
                    fmt_rat(&tendril.r)
                )));
            }
            if let Some(pr) = prev_r {
                if pr >= &tendril.l {
                    return Err(Error::invalid(format!(
                        "attachment chain not increasing at column {}",
                        tendril.n
                    )));
                }
            }
            prev_r = Some(&tendril.r);
            if tendril.top.eval(&tendril.l)? != self.main.eval(&tendril.l)? {
                return Err(Error::invalid(format!(
                    "column {}: top arc detached from the main line at ℓ",
                    tendril.n
                )));
            }
            if tendril.bottom.eval(&tendril.r)? != self.main.eval(&tendril.r)? {
                return Err(Error::invalid(format!(
                    "column {}: bottom arc detached from the main line at r",
                    tendril.n
                )));
            }
            if tendril.top.eval(&one)? != tendril.bottom.eval(&one)? {
                return Err(Error::invalid(format!(
                    "column {}: arcs do not meet at x = 1",
                    tendril.n
                )));
            }
        }
        Ok(())
    }
}

/// Check f(x) < g(x) at every union breakpoint (hence everywhere between,
/// by linearity), allowing equality exactly at the listed abscissae.
pub(crate) fn strictly_below(f: &PLFunction, g: &PLFunction, allow_eq: &[&Rat]) -> Result<()> {
    if f.domain() != g.domain() {
        return Err(Error::invalid("strict comparison requires identical domains"));
    }
    for x in f.union_xs(g) {
        let fv = f.eval(&x)?;
        let gv = g.eval(&x)?;
        if fv > gv {
            return Err(Error::invalid(format!("ordering violated at x = {}", fmt_rat(&x))));
        }
        if fv == gv && !allow_eq.iter().any(|a| **a == x) {
            return Err(Error::invalid(format!("functions touch at x = {}", fmt_rat(&x))));
        }
    }
    Ok(())
}

fn validate_table(w: &WTable, stages: u32, params: &Sigma3Params) -> Result<()> {
    w.validate()?;
    if let Some(h) = w.horizon() {
        if stages > h {
            return Err(Error::invalid(format!(
                "requested {stages} stages but the table's horizon is {h}"
            )));
        }
    }
    for (col, column) in w.columns() {
        if column.stages.is_empty() {
            continue;
        }
        if col == 0 || col > params.tendril_count {
            return Err(Error::invalid(format!(
                "table column {col} has entries but only columns 1..={} are materialized",
                params.tendril_count
            )));
        }
        if column.stages.contains(&0) {
            return Err(Error::invalid(format!(
                "table column {col} has an entry at stage 0; entries enter at stages ≥ 1"
            )));
        }
    }
    Ok(())
}

/// One stage transition: process at most one trigger (the lowest entered
/// column; same-stage entries in higher columns are not processed and do not
/// advance their column's entry count), then run the insertion rules.
fn step_stage(state: &mut StageState, w: &WTable, stage: u32) -> Result<()> {
    state.prev_main = Some(state.main.clone());
    state.last_collapse = None;
    state.stage = stage;
    if let Some(&n) = w.triggers_at(stage).iter().min() {
        state.collapse_from(n)?;
        state.spawn_tendrils(n, stage)?;
    }
    state.insert_points(stage)?;
    Ok(())
}

/// Run the construction for the given number of stages. Deterministic: the
/// same table, params, and stage count always produce the same state and the
/// same log order.
pub fn run_sigma3(w: &WTable, stages: u32, params: &Sigma3Params) -> Result<StageState> {
    validate_table(w, stages, params)?;
    let mut state = init_stage0(params)?;
    for stage in 1..=stages {
        step_stage(&mut state, w, stage)?;
    }
    Ok(state)
}

/// Like [`run_sigma3`], but audits the state after stage 0 and after every
/// transition, aborting on the first violated item.
pub fn run_sigma3_with_audit(
    w: &WTable,
    stages: u32,
    params: &Sigma3Params,
) -> Result<(StageState, Vec<audit::AuditReport>)> {
    validate_table(w, stages, params)?;
    let mut state = init_stage0(params)?;
    let mut reports = vec![audit::check_stage_invariants(&state)?];
    for stage in 1..=stages {
        step_stage(&mut state, w, stage)?;
        reports.push(audit::check_stage_invariants(&state)?);
    }
    Ok((state, reports))
}

/// The presentation enumerated from the log in insertion order, embedded as
/// plane points (coordinate 0 = x, coordinate 1 = y).
pub fn presentation_from(state: &StageState, label: impl Into<String>) -> Result<Presentation> {
    let points = state.log.iter().map(|e| plane_point(&e.x, &e.y)).collect();
    Presentation::new(label, points)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn t(table: &[(u32, &[u32])]) -> WTable {
        let mut w = WTable::new();
        for (col, stages) in table {
            for s in *stages {
                w.insert(*col, *s);
            }
        }
        w
    }

    #[test]
    fn stage0_layout() {
        let state = init_stage0(&Sigma3Params::default()).unwrap();
        assert_eq!(state.main.breakpoints(), &[(int(-1), int(0)), (int(1), int(0))]);
        let expect = [
            (rat(-1, 1), rat(-5, 6)),
            (rat(-3, 4), rat(-7, 10)),
            (rat(-2, 3), rat(-9, 14)),
        ];
        for (tendril, (l, r)) in state.tendrils.iter().zip(expect) {
            assert_eq!(tendril.l, l);
            assert_eq!(tendril.r, r);
            let peak = pow2(-(tendril.n as i32));
            assert_eq!(tendril.top.eval(&int(1)).unwrap(), peak);
            assert_eq!(tendril.bottom.eval(&int(1)).unwrap(), peak);
            assert_eq!(tendril.top.eval(&tendril.l).unwrap(), int(0));
            assert_eq!(tendril.bottom.eval(&tendril.r).unwrap(), int(0));
        }
        assert_eq!(state.log.len(), 2);
        assert_eq!(state.log[0].x, int(-1));
        assert_eq!(state.log[1].x, int(1));
        state.validate_data().unwrap();
    }

    #[test]
    fn stage0_primes() {
        let state = init_stage0(&Sigma3Params::default()).unwrap();
        let primes: Vec<(u64, u64)> =
            state.tendrils.iter().map(|t| (t.top_prime(), t.bottom_prime())).collect();
        assert_eq!(primes, vec![(3, 5), (7, 11), (19, 23)]);
    }

    #[test]
    fn early_collapse_keeps_main_flat() {
        // An entry before any grid insertions folds only the seed points, so
        // the main line stays at 0 and the respawn rides a flat line.
        let w = t(&[(1, &[1])]);
        let state = run_sigma3(&w, 1, &Sigma3Params::default()).unwrap();
        let rec = state.last_collapse.as_ref().unwrap();
        assert_eq!(rec.column, 1);
        assert_eq!(rec.entry_index, 0);
        assert_eq!(rec.interp.breakpoints(), &[(int(-1), int(0)), (int(1), int(0))]);
        // Respawned attachments: stage-1 zone is (−1/2, −1/4), split in 7.
        let expect = [
            (rat(-13, 28), rat(-3, 7)),
            (rat(-11, 28), rat(-5, 14)),
            (rat(-9, 28), rat(-2, 7)),
        ];
        for (tendril, (l, r)) in state.tendrils.iter().zip(expect) {
            assert_eq!((tendril.l.clone(), tendril.r.clone()), (l, r));
            assert_eq!(tendril.spawn_stage, 1);
            assert_eq!(tendril.instance, 1);
            // Heights g/2^{m}: g = 1/16 for a column-1 respawn.
            let peak = rat(1, 16) * pow2(-(tendril.n as i32));
            assert_eq!(tendril.top.eval(&int(1)).unwrap(), peak);
            assert_eq!(tendril.bottom.eval(&int(1)).unwrap(), peak);
        }
        let primes: Vec<(u64, u64)> =
            state.tendrils.iter().map(|t| (t.top_prime(), t.bottom_prime())).collect();
        assert_eq!(primes, vec![(13, 17), (29, 31), (53, 59)]);
        state.validate_data().unwrap();
    }

    #[test]
    fn collapse_folds_logged_points_onto_main() {
        // Two quiet stages populate the stage-0 arcs; the stage-3 entry in
        // column 2 folds every logged point below 𝔟₁ into the main line.
        let w = t(&[(2, &[3])]);
        let state = run_sigma3(&w, 3, &Sigma3Params::default()).unwrap();
        let rec = state.last_collapse.as_ref().unwrap();
        assert_eq!((rec.column, rec.entry_index), (2, 0));
        let b1 = &state.tendrils[0].bottom;
        let mut folded = 0usize;
        for entry in &state.log {
            if entry.stage >= 3 || entry.x < rec.old_left {
                continue;
            }
            let on_main = state.main.eval(&entry.x).unwrap() == entry.y;
            match entry.provenance {
                Provenance::Top(1) | Provenance::Bottom(1) => {
                    // Survivors stay strictly above the new main line.
                    assert!(!on_main || entry.y == b1.eval(&entry.x).unwrap());
                    assert!(state.main.eval(&entry.x).unwrap() <= entry.y);
                }
                _ => {
                    assert!(on_main, "x = {} not folded", fmt_rat(&entry.x));
                    folded += 1;
                }
            }
        }
        assert!(folded > 20, "expected a substantial fold, got {folded}");
        // Tendril 1 was untouched: still the stage-0 instance.
        assert_eq!(state.tendrils[0].spawn_stage, 0);
        assert_eq!(state.tendrils[0].instance, 0);
        assert_eq!(state.tendrils[1].spawn_stage, 3);
        assert_eq!(state.tendrils[1].instance, 1);
        assert_eq!(state.collapse_counts, vec![0, 1, 1]);
        assert_eq!(state.entries_processed, vec![0, 1, 0]);
        state.validate_data().unwrap();
    }

    #[test]
    fn respawn_gap_positive_and_bounded() {
        let w = t(&[(2, &[3])]);
        let state = run_sigma3(&w, 3, &Sigma3Params::default()).unwrap();
        let g = state.gap(2).unwrap();
        assert!(g > int(0));
        // The gap is at most the surviving bottom arc's peak height.
        let b1_peak = pow2(-1);
        assert!(g <= b1_peak);
        // Respawned column 2 rises to exactly g/2^{2+3−1} at x = 1.
        let t2 = &state.tendrils[1];
        let rise = t2.top.eval(&int(1)).unwrap() - state.main.eval(&int(1)).unwrap();
        assert_eq!(rise, &g * pow2(-4));
    }

    #[test]
    fn regenerated_points_reproduce_logged_y() {
        // Stages 4..6 regenerate the stage-1..3 grids (denominators saturate),
        // so every re-generated x must hit its logged y exactly; log_point
        // errors otherwise, which would fail the run.
        let w = t(&[(1, &[2])]);
        let state = run_sigma3(&w, 6, &Sigma3Params::default()).unwrap();
        for entry in &state.log {
            assert!(entry.y >= state.main.eval(&entry.x).unwrap() || entry.y == int(0));
        }
    }

    #[test]
    fn mixed_schedule_audits_clean() {
        let w = t(&[(1, &[2]), (2, &[4])]);
        let (state, reports) = run_sigma3_with_audit(&w, 5, &Sigma3Params::default()).unwrap();
        assert_eq!(reports.len(), 6);
        assert_eq!(state.stage, 5);
        for report in &reports {
            for (item, status) in &report.items {
                if matches!(status, audit::ItemStatus::Skipped { .. }) {
                    assert!([1, 4, 5, 7].contains(item), "item ({item}) skipped unexpectedly");
                }
            }
        }
    }

    #[test]
    fn rejects_malformed_tables() {
        let p = Sigma3Params::default();
        assert!(run_sigma3(&t(&[(0, &[1])]), 2, &p).is_err());
        assert!(run_sigma3(&t(&[(4, &[1])]), 2, &p).is_err());
        assert!(run_sigma3(&t(&[(1, &[0])]), 2, &p).is_err());
        let mut w = t(&[(1, &[1])]);
        w.set_horizon(Some(3));
        assert!(run_sigma3(&w, 5, &p).is_err());
        assert!(run_sigma3(&w, 3, &p).is_ok());
    }

    #[test]
    fn deterministic_presentation() {
        let w = t(&[(1, &[2]), (3, &[4])]);
        let a = run_sigma3(&w, 5, &Sigma3Params::default()).unwrap();
        let b = run_sigma3(&w, 5, &Sigma3Params::default()).unwrap();
        let pa = presentation_from(&a, "run").unwrap();
        let pb = presentation_from(&b, "run").unwrap();
        assert_eq!(pa.render(), pb.render());
    }

    #[test]
    fn stride_respects_budget_and_tail() {
        let keep = stride_select(100, 10, 5);
        assert!(keep.len() <= 10 + 5);
        assert!(keep.windows(2).all(|w| w[0] < w[1]));
        assert!(keep.contains(&0));
        for i in 95..100 {
            assert!(keep.contains(&i));
        }
        assert_eq!(stride_select(7, 10, 3), vec![0, 1, 2, 3, 4, 5, 6]);
    }

    #[test]
    fn exponent_caps() {
        assert_eq!(exponent_for(3, 1, 256), 1);
        assert_eq!(exponent_for(3, 9, 256), 5); // 3^5 = 243 ≤ 256 < 3^6
        assert_eq!(exponent_for(5, 9, 256), 3);
        assert_eq!(exponent_for(17, 9, 256), 1); // 17² = 289 > 256
        assert_eq!(exponent_for(3, 3, 256), 3);
    }
}
