//! Presented spaces: a countable list of special points in the sup-metric
//! sequence space, with an exact pairwise metric and a canonical text format.
//!
//! A presentation is the finite prefix we actually hold of a countable dense
//! sequence. Point order matters: checkers and net builders always consume
//! points in presentation order, so enumeration order is part of the data.
//!
//! # File format
//!
//! ```text
//! ambient sup-metric
//! point 0 :
//! point 1 : 0:1/2
//! point 2 : 0:1/1 3:-2/3
//! ```
//!
//! One header line, then one line per point with consecutive ids from 0.
//! Coordinates are `index:num/den` pairs sorted by index; zero coordinates are
//! never written (an origin point has an empty list). Rendering a parsed file
//! reproduces it byte for byte.

use std::collections::HashMap;

use crate::error::{Error, Result};
use crate::point::SparsePoint;
use crate::rat::{fmt_rat, parse_rat, Rat};

/// A labelled, ordered list of distinct special points.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Presentation {
    /// Human-readable name; not serialized, so it never affects reproducibility.
    pub label: String,
    points: Vec<SparsePoint>,
}

impl Presentation {
    /// Build from points; rejects duplicate points (the metric must be positive
    /// on distinct indices).
    pub fn new(label: impl Into<String>, points: Vec<SparsePoint>) -> Result<Self> {
        let mut seen: HashMap<&SparsePoint, usize> = HashMap::new();
        for (i, p) in points.iter().enumerate() {
            if let Some(j) = seen.insert(p, i) {
                return Err(Error::invalid(format!(
                    "points {j} and {i} are identical; special points must be distinct"
                )));
            }
        }
        Ok(Presentation { label: label.into(), points })
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn points(&self) -> &[SparsePoint] {
        &self.points
    }

    pub fn point(&self, i: usize) -> Result<&SparsePoint> {
        self.points.get(i).ok_or(Error::Index { index: i, size: self.points.len() })
    }

    /// Distance between points `i` and `j` to within 2^{−k}.
    ///
    /// The sup metric on finitely supported points is exactly computable, so the
    /// returned value is exact regardless of `k`; the precision parameter is part
    /// of the interface contract and is validated but does not change the value.
    pub fn metric_approx(&self, i: usize, j: usize, _k: u32) -> Result<Rat> {
        Ok(self.point(i)?.sup_dist(self.point(j)?))
    }

    /// Canonical text form (see module docs).
    pub fn render(&self) -> String {
        let mut out = String::from("ambient sup-metric\n");
        for (id, p) in self.points.iter().enumerate() {
            out.push_str(&format!("point {id} :"));
            for (i, v) in p.iter() {
                out.push_str(&format!(" {}:{}", i, fmt_rat(v)));
            }
            out.push('\n');
        }
        out
    }

    /// Parse the canonical text form. The label is not stored in files; the
    /// caller provides it (e.g. from the file name).
    pub fn parse(text: &str, label: impl Into<String>) -> Result<Self> {
        let mut lines = text.lines().enumerate();
        match lines.next() {
            Some((_, "ambient sup-metric")) => {}
            Some((n, other)) => {
                return Err(Error::parse(n + 1, format!("expected `ambient sup-metric`, got {other:?}")))
            }
            None => return Err(Error::parse(1, "empty presentation file")),
        }
        let mut points = Vec::new();
        for (n, line) in lines {
            let lineno = n + 1;
            if line.is_empty() {
                continue;
            }
            let rest = line
                .strip_prefix("point ")
                .ok_or_else(|| Error::parse(lineno, format!("expected `point <id> : ...`, got {line:?}")))?;
            let (id_s, coords_s) = rest
                .split_once(" :")
                .ok_or_else(|| Error::parse(lineno, "missing ` :` separator"))?;
            let id: usize = id_s
                .parse()
                .map_err(|_| Error::parse(lineno, format!("bad point id {id_s:?}")))?;
            if id != points.len() {
                return Err(Error::parse(
                    lineno,
                    format!("point ids must be consecutive from 0; expected {}, got {id}", points.len()),
                ));
            }
            let mut pairs: Vec<(u32, Rat)> = Vec::new();
            for tok in coords_s.split_whitespace() {
                let (idx_s, val_s) = tok
                    .split_once(':')
                    .ok_or_else(|| Error::parse(lineno, format!("bad coordinate token {tok:?}")))?;
                let idx: u32 = idx_s
                    .parse()
                    .map_err(|_| Error::parse(lineno, format!("bad coordinate index {idx_s:?}")))?;
                let val = parse_rat(val_s).map_err(|e| Error::parse(lineno, e.to_string()))?;
                if num_traits::Zero::is_zero(&val) {
                    return Err(Error::parse(lineno, "zero coordinates must be omitted"));
                }
                if let Some((last, _)) = pairs.last() {
                    if *last >= idx {
                        return Err(Error::parse(lineno, "coordinate indices must strictly increase"));
                    }
                }
                pairs.push((idx, val));
            }
            points.push(SparsePoint::from_pairs(pairs));
        }
        Presentation::new(label, points).map_err(|e| match e {
            Error::Invalid(msg) => Error::invalid(format!("invalid presentation: {msg}")),
            other => other,
        })
    }
}
