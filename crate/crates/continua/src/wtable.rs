//! Stage tables: the finite inputs driving the generator constructions.
//!
//! A [`WTable`] records, per column `n`, the finite set of stage numbers at
//! which an element enters that column, plus an *open* marker for columns that
//! should be treated as still growable (the desk-scale stand-in for a
//! genuinely infinite column). A [`UTable`] is a finite family of W-tables
//! indexed by `m ≥ 1`, used by the chained constructions.
//!
//! File formats (strict, canonical render):
//!
//! ```text
//! horizon 40
//! col 1 : 4 12 20 28
//! col 2 : 8 24 ...
//! ```
//!
//! The `horizon` line is optional; a trailing `...` marks an open column. A
//! U-table is a sequence of `table <m>` headers each followed by W-table lines.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt::Write as _;

use crate::error::{Error, Result};

/// One column of a stage table.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct WColumn {
    /// Stages at which an element enters this column.
    pub stages: BTreeSet<u32>,
    /// Whether the column is marked as still growable.
    pub open: bool,
}

/// Finite stage table: column index ↦ entry stages.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct WTable {
    columns: BTreeMap<u32, WColumn>,
    stage_horizon: Option<u32>,
}

impl WTable {
    pub fn new() -> Self {
        WTable::default()
    }

    /// Record an element entering column `col` at stage `stage`.
    pub fn insert(&mut self, col: u32, stage: u32) {
        self.columns.entry(col).or_default().stages.insert(stage);
    }

    /// Mark a column open (growable); creates the column if absent.
    pub fn set_open(&mut self, col: u32, open: bool) {
        self.columns.entry(col).or_default().open = open;
    }

    pub fn set_horizon(&mut self, horizon: Option<u32>) {
        self.stage_horizon = horizon;
    }

    pub fn horizon(&self) -> Option<u32> {
        self.stage_horizon
    }

    pub fn columns(&self) -> impl Iterator<Item = (u32, &WColumn)> {
        self.columns.iter().map(|(n, c)| (*n, c))
    }

    pub fn column(&self, n: u32) -> Option<&WColumn> {
        self.columns.get(&n)
    }

    /// |W_n|: total number of recorded entries in column `n`.
    pub fn column_size(&self, n: u32) -> usize {
        self.columns.get(&n).map_or(0, |c| c.stages.len())
    }

    /// Is column `n` marked open?
    pub fn is_open(&self, n: u32) -> bool {
        self.columns.get(&n).is_some_and(|c| c.open)
    }

    /// |W_n[i]|: number of entries in column `n` with stage below `i`.
    pub fn column_size_below(&self, n: u32, i: u32) -> usize {
        self.columns
            .get(&n)
            .map_or(0, |c| c.stages.range(..i).count())
    }

    /// Columns with an entry at exactly stage `s`, ascending.
    pub fn triggers_at(&self, s: u32) -> Vec<u32> {
        self.columns
            .iter()
            .filter(|(_, c)| c.stages.contains(&s))
            .map(|(n, _)| *n)
            .collect()
    }

    /// Largest recorded stage across all columns, if any.
    pub fn max_stage(&self) -> Option<u32> {
        self.columns
            .values()
            .filter_map(|c| c.stages.iter().next_back().copied())
            .max()
    }

    /// Check the horizon invariant: every stored stage lies below the horizon.
    pub fn validate(&self) -> Result<()> {
        if let Some(h) = self.stage_horizon {
            for (n, c) in &self.columns {
                if let Some(&top) = c.stages.iter().next_back() {
                    if top >= h {
                        return Err(Error::invalid(format!(
                            "column {n} stores stage {top}, not below the horizon {h}"
                        )));
                    }
                }
            }
        }
        Ok(())
    }

    /// Canonical text rendering.
    pub fn render(&self) -> String {
        let mut out = String::new();
        if let Some(h) = self.stage_horizon {
            let _ = writeln!(out, "horizon {h}");
        }
        for (n, c) in &self.columns {
            let _ = write!(out, "col {n} :");
            for s in &c.stages {
                let _ = write!(out, " {s}");
            }
            if c.open {
                let _ = write!(out, " ...");
            }
            let _ = writeln!(out);
        }
        out
    }

    /// Strict parse of the canonical format (blank lines allowed between rows).
    pub fn parse(text: &str) -> Result<Self> {
        let mut table = WTable::new();
        let mut seen_col = false;
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.trim();
            if line.is_empty() {
                continue;
            }
            let mut words = line.split_whitespace();
            match words.next() {
                Some("horizon") => {
                    if seen_col || table.stage_horizon.is_some() {
                        return Err(Error::parse(lineno + 1, "horizon must be a single first line"));
                    }
                    let h = words
                        .next()
                        .ok_or_else(|| Error::parse(lineno + 1, "horizon needs a value"))?;
                    if words.next().is_some() {
                        return Err(Error::parse(lineno + 1, "trailing tokens after horizon"));
                    }
                    table.stage_horizon = Some(
                        h.parse()
                            .map_err(|_| Error::parse(lineno + 1, format!("bad horizon {h:?}")))?,
                    );
                }
                Some("col") => {
                    seen_col = true;
                    let n: u32 = words
                        .next()
                        .ok_or_else(|| Error::parse(lineno + 1, "col needs an index"))?
                        .parse()
                        .map_err(|_| Error::parse(lineno + 1, "bad column index"))?;
                    if words.next() != Some(":") {
                        return Err(Error::parse(lineno + 1, "expected ':' after column index"));
                    }
                    if table.columns.contains_key(&n) {
                        return Err(Error::parse(lineno + 1, format!("duplicate column {n}")));
                    }
                    let mut col = WColumn::default();
                    for w in words {
                        if w == "..." {
                            col.open = true;
                            continue;
                        }
                        if col.open {
                            return Err(Error::parse(lineno + 1, "'...' must come last"));
                        }
                        let s: u32 = w
                            .parse()
                            .map_err(|_| Error::parse(lineno + 1, format!("bad stage {w:?}")))?;
                        if !col.stages.insert(s) {
                            return Err(Error::parse(lineno + 1, format!("duplicate stage {s}")));
                        }
                    }
                    table.columns.insert(n, col);
                }
                Some(other) => {
                    return Err(Error::parse(lineno + 1, format!("unknown directive {other:?}")));
                }
                None => unreachable!("empty lines are skipped"),
            }
        }
        table.validate()?;
        Ok(table)
    }
}

/// Family of stage tables indexed by `m ≥ 1`.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct UTable {
    tables: BTreeMap<u32, WTable>,
}

impl UTable {
    pub fn new() -> Self {
        UTable::default()
    }

    pub fn insert(&mut self, m: u32, table: WTable) -> Result<()> {
        if m == 0 {
            return Err(Error::invalid("table indices start at 1"));
        }
        self.tables.insert(m, table);
        Ok(())
    }

    pub fn get(&self, m: u32) -> Option<&WTable> {
        self.tables.get(&m)
    }

    pub fn tables(&self) -> impl Iterator<Item = (u32, &WTable)> {
        self.tables.iter().map(|(m, t)| (*m, t))
    }

    pub fn render(&self) -> String {
        let mut out = String::new();
        for (m, t) in &self.tables {
            let _ = writeln!(out, "table {m}");
            out.push_str(&t.render());
        }
        out
    }

    pub fn parse(text: &str) -> Result<Self> {
        let mut u = UTable::new();
        let mut current: Option<(u32, String)> = None;
        let flush = |cur: &mut Option<(u32, String)>, u: &mut UTable| -> Result<()> {
            if let Some((m, body)) = cur.take() {
                if u.tables.contains_key(&m) {
                    return Err(Error::invalid(format!("duplicate table {m}")));
                }
                u.insert(m, WTable::parse(&body)?)?;
            }
            Ok(())
        };
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.trim();
            if line.is_empty() {
                continue;
            }
            if let Some(rest) = line.strip_prefix("table ") {
                flush(&mut current, &mut u)?;
                let m: u32 = rest
                    .trim()
                    .parse()
                    .map_err(|_| Error::parse(lineno + 1, format!("bad table index {rest:?}")))?;
                current = Some((m, String::new()));
            } else {
                match current.as_mut() {
                    Some((_, body)) => {
                        body.push_str(line);
                        body.push('\n');
                    }
                    None => {
                        return Err(Error::parse(lineno + 1, "lines before the first 'table <m>' header"));
                    }
                }
            }
        }
        flush(&mut current, &mut u)?;
        Ok(u)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn wtable_round_trips_canonically() {
        let text = "horizon 40\ncol 1 : 4 12 20 28\ncol 2 : 8 24 ...\ncol 5 : ...\n";
        let t = WTable::parse(text).unwrap();
        assert_eq!(t.render(), text);
        assert_eq!(t.column_size(1), 4);
        assert_eq!(t.column_size_below(1, 13), 2);
        assert_eq!(t.column_size_below(1, 12), 1);
        assert!(t.is_open(2));
        assert!(!t.is_open(1));
        assert_eq!(t.column_size(5), 0);
        assert_eq!(t.triggers_at(8), vec![2]);
        assert_eq!(t.triggers_at(4), vec![1]);
        assert_eq!(t.max_stage(), Some(28));
    }

    #[test]
    fn wtable_rejects_malformed_input() {
        assert!(WTable::parse("col 1 : 4 ... 9\n").is_err());
        assert!(WTable::parse("col 1 : 4 4\n").is_err());
        assert!(WTable::parse("col 1 : 4\ncol 1 : 5\n").is_err());
        assert!(WTable::parse("col 1 4\n").is_err());
        assert!(WTable::parse("col 1 : 4\nhorizon 9\n").is_err());
        // Horizon invariant: stage 9 is not below horizon 9.
        assert!(WTable::parse("horizon 9\ncol 1 : 9\n").is_err());
        assert!(WTable::parse("horizon 9\ncol 1 : 8\n").is_ok());
    }

    #[test]
    fn utable_round_trips() {
        let text = "table 1\ncol 1 : 2\ntable 2\nhorizon 9\ncol 1 : 3 4\ncol 2 : ...\n";
        let u = UTable::parse(text).unwrap();
        assert_eq!(u.render(), text);
        assert_eq!(u.get(1).unwrap().column_size(1), 1);
        assert_eq!(u.get(2).unwrap().horizon(), Some(9));
        assert!(u.get(3).is_none());
        assert!(UTable::parse("col 1 : 2\n").is_err());
        assert!(UTable::parse("table 0\ncol 1 : 2\n").is_err());
        assert!(UTable::parse("table 1\ntable 1\n").is_err());
    }
}
