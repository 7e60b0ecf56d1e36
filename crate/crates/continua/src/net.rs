//! Finite nets: the first n special points with their exact pairwise distances.
//!
//! A net is the bounded-resolution object every checker consumes. Distances are
//! exact rationals; the declared precision k is carried along for reporting but
//! never degrades values. For small nets the full upper-triangle matrix is
//! materialized; past a size threshold distances are recomputed from the points
//! on demand (callers that need repeated neighborhood scans build adjacency
//! structures instead of touching a quadratic matrix).
//!
//! Invariants (enforced by construction, checkable exhaustively): the matrix is
//! symmetric with zero diagonal, entries are nonnegative, and the triangle
//! inequality holds — `verify_triangle` scans all ordered triples and reports
//! the first violation.

use num_traits::Zero;

use crate::error::{Error, Result};
use crate::exec;
use crate::point::SparsePoint;
use crate::presentation::Presentation;
use crate::rat::{fmt_rat, parse_rat, Rat};

/// Above this size the dense matrix is skipped and distances are recomputed
/// from points on demand (quadratic rational storage gets expensive fast).
const DENSE_LIMIT: usize = 800;

/// Finite metric net over the first n points of a presentation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FiniteNet {
    n: usize,
    k: u32,
    /// Backing points when built from a presentation (empty for matrix-built nets).
    points: Vec<SparsePoint>,
    /// Upper triangle, row-major (i < j), when materialized.
    dense: Option<Vec<Rat>>,
}

fn tri_index(n: usize, i: usize, j: usize) -> usize {
    debug_assert!(i < j && j < n);
    i * (2 * n - i - 1) / 2 + (j - i - 1)
}

impl FiniteNet {
    /// Build the net over the first `n` points of `pres` at declared precision `k`.
    pub fn from_presentation(pres: &Presentation, n: usize, k: u32) -> Result<Self> {
        if n == 0 {
            return Err(Error::invalid("a net needs at least one point"));
        }
        if n > pres.len() {
            return Err(Error::Index { index: n, size: pres.len() });
        }
        let points: Vec<SparsePoint> = pres.points()[..n].to_vec();
        let dense = if n <= DENSE_LIMIT {
            // Parallel by row: row i holds distances to j in i+1..n.
            let rows = exec::pmap_range(n, |i| {
                (i + 1..n).map(|j| points[i].sup_dist(&points[j])).collect::<Vec<_>>()
            });
            Some(rows.into_iter().flatten().collect())
        } else {
            None
        };
        Ok(FiniteNet { n, k, points, dense })
    }

    /// Build a net directly from a symmetric distance function (used for
    /// compactified spaces and synthetic tests). `f(i, j)` is consulted only for
    /// i < j; the diagonal is zero by construction.
    pub fn from_matrix_fn(n: usize, k: u32, f: impl Fn(usize, usize) -> Rat) -> Result<Self> {
        if n == 0 {
            return Err(Error::invalid("a net needs at least one point"));
        }
        let mut dense = Vec::with_capacity(n * (n - 1) / 2);
        for i in 0..n {
            for j in i + 1..n {
                let d = f(i, j);
                if d < Rat::zero() {
                    return Err(Error::invalid(format!("negative distance at ({i}, {j})")));
                }
                dense.push(d);
            }
        }
        Ok(FiniteNet { n, k, points: Vec::new(), dense: Some(dense) })
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    pub fn precision(&self) -> u32 {
        self.k
    }

    /// Exact distance between net points `i` and `j`.
    ///
    /// # Panics
    /// Panics if an index is out of range (checkers validate up front).
    pub fn dist(&self, i: usize, j: usize) -> Rat {
        assert!(i < self.n && j < self.n, "net index out of range");
        if i == j {
            return Rat::zero();
        }
        let (a, b) = if i < j { (i, j) } else { (j, i) };
        match &self.dense {
            Some(d) => d[tri_index(self.n, a, b)].clone(),
            None => self.points[a].sup_dist(&self.points[b]),
        }
    }

    /// Exhaustive triangle-inequality check; returns the first violating triple.
    pub fn verify_triangle(&self) -> std::result::Result<(), (usize, usize, usize)> {
        for i in 0..self.n {
            for j in i + 1..self.n {
                let dij = self.dist(i, j);
                for k in 0..self.n {
                    if k == i || k == j {
                        continue;
                    }
                    if dij > self.dist(i, k) + self.dist(k, j) {
                        return Err((i, j, k));
                    }
                }
            }
        }
        Ok(())
    }

    /// Canonical text export: header then upper-triangle entries in lex order.
    ///
    /// ```text
    /// net 3 20
    /// d 0 1 1/2
    /// d 0 2 1/1
    /// d 1 2 1/2
    /// ```
    pub fn export(&self) -> String {
        let mut out = format!("net {} {}\n", self.n, self.k);
        for i in 0..self.n {
            for j in i + 1..self.n {
                out.push_str(&format!("d {} {} {}\n", i, j, fmt_rat(&self.dist(i, j))));
            }
        }
        out
    }

    /// Parse the text export. The result is always dense-backed.
    pub fn import(text: &str) -> Result<Self> {
        let mut lines = text.lines().enumerate();
        let (n, k) = match lines.next() {
            Some((_, header)) => {
                let parts: Vec<&str> = header.split_whitespace().collect();
                match parts.as_slice() {
                    ["net", n_s, k_s] => {
                        let n: usize = n_s
                            .parse()
                            .map_err(|_| Error::parse(1, format!("bad net size {n_s:?}")))?;
                        let k: u32 = k_s
                            .parse()
                            .map_err(|_| Error::parse(1, format!("bad precision {k_s:?}")))?;
                        (n, k)
                    }
                    _ => return Err(Error::parse(1, format!("expected `net <n> <k>`, got {header:?}"))),
                }
            }
            None => return Err(Error::parse(1, "empty net file")),
        };
        if n == 0 {
            return Err(Error::parse(1, "a net needs at least one point"));
        }
        let mut dense: Vec<Option<Rat>> = vec![None; n * (n - 1) / 2];
        for (ln, line) in lines {
            let lineno = ln + 1;
            if line.is_empty() {
                continue;
            }
            let parts: Vec<&str> = line.split_whitespace().collect();
            let [tag, i_s, j_s, v_s] = parts.as_slice() else {
                return Err(Error::parse(lineno, format!("expected `d <i> <j> <num/den>`, got {line:?}")));
            };
            if *tag != "d" {
                return Err(Error::parse(lineno, format!("unknown record {tag:?}")));
            }
            let i: usize = i_s.parse().map_err(|_| Error::parse(lineno, "bad index"))?;
            let j: usize = j_s.parse().map_err(|_| Error::parse(lineno, "bad index"))?;
            if !(i < j && j < n) {
                return Err(Error::parse(lineno, format!("indices ({i}, {j}) must satisfy i < j < {n}")));
            }
            let v = parse_rat(v_s).map_err(|e| Error::parse(lineno, e.to_string()))?;
            if v < Rat::zero() {
                return Err(Error::parse(lineno, "distances must be nonnegative"));
            }
            let slot = &mut dense[tri_index(n, i, j)];
            if slot.is_some() {
                return Err(Error::parse(lineno, format!("duplicate entry for ({i}, {j})")));
            }
            *slot = Some(v);
        }
        let dense: Vec<Rat> = dense
            .into_iter()
            .enumerate()
            .map(|(idx, v)| v.ok_or_else(|| Error::invalid(format!("missing distance entry #{idx}"))))
            .collect::<Result<_>>()?;
        Ok(FiniteNet { n, k, points: Vec::new(), dense: Some(dense) })
    }
}
