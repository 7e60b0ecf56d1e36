//! Exact piecewise-linear functions on a closed rational interval.
//!
//! A function is stored as its breakpoint list (x strictly increasing) and
//! linearly interpolated between breakpoints. All operations are exact:
//! evaluation, pointwise max (with crossing points inserted where the two
//! graphs intersect transversally), and suprema of differences over the common
//! domain. Because a difference of two piecewise-linear functions is again
//! piecewise linear with breakpoints in the union of the operands' breakpoints,
//! suprema are computed by scanning that finite union — no approximation.

use num_traits::Zero;

use crate::error::{Error, Result};
use crate::rat::Rat;

/// Piecewise-linear function given by breakpoints with strictly increasing x.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PLFunction {
    pts: Vec<(Rat, Rat)>,
}

impl PLFunction {
    /// Build from breakpoints; requires at least two and strictly increasing x.
    pub fn new(pts: Vec<(Rat, Rat)>) -> Result<Self> {
        if pts.len() < 2 {
            return Err(Error::invalid("piecewise-linear function needs at least two breakpoints"));
        }
        for w in pts.windows(2) {
            if w[0].0 >= w[1].0 {
                return Err(Error::invalid(format!(
                    "breakpoint abscissae must strictly increase (got {} then {})",
                    w[0].0, w[1].0
                )));
            }
        }
        Ok(PLFunction { pts })
    }

    /// The constant function `y` on [lo, hi].
    pub fn constant(lo: Rat, hi: Rat, y: Rat) -> Result<Self> {
        PLFunction::new(vec![(lo, y.clone()), (hi, y)])
    }

    /// Domain endpoints (lo, hi).
    pub fn domain(&self) -> (&Rat, &Rat) {
        (&self.pts[0].0, &self.pts[self.pts.len() - 1].0)
    }

    /// Breakpoints, in increasing x order.
    pub fn breakpoints(&self) -> &[(Rat, Rat)] {
        &self.pts
    }

    /// Evaluate at `x`; errors outside the domain.
    pub fn eval(&self, x: &Rat) -> Result<Rat> {
        match self.pts.binary_search_by(|(px, _)| px.cmp(x)) {
            Ok(i) => Ok(self.pts[i].1.clone()),
            Err(0) => Err(Error::Domain(format!(
                "{} is left of the domain [{}, {}]",
                x,
                self.domain().0,
                self.domain().1
            ))),
            Err(i) if i == self.pts.len() => Err(Error::Domain(format!(
                "{} is right of the domain [{}, {}]",
                x,
                self.domain().0,
                self.domain().1
            ))),
            Err(i) => {
                let (x0, y0) = &self.pts[i - 1];
                let (x1, y1) = &self.pts[i];
                Ok(y0 + (y1 - y0) * (x - x0) / (x1 - x0))
            }
        }
    }

    /// Restrict to [lo, hi] ⊆ domain, introducing endpoint breakpoints as needed.
    pub fn restrict(&self, lo: &Rat, hi: &Rat) -> Result<Self> {
        if lo >= hi {
            return Err(Error::invalid("restriction interval must have lo < hi"));
        }
        let mut pts = vec![(lo.clone(), self.eval(lo)?)];
        for (x, y) in &self.pts {
            if x > lo && x < hi {
                pts.push((x.clone(), y.clone()));
            }
        }
        pts.push((hi.clone(), self.eval(hi)?));
        PLFunction::new(pts)
    }

    /// Join two functions whose domains abut at a shared breakpoint.
    ///
    /// Requires `left`'s right endpoint to equal `right`'s left endpoint in both
    /// coordinates (the functions agree at the seam).
    pub fn concat(left: &Self, right: &Self) -> Result<Self> {
        let l_end = &left.pts[left.pts.len() - 1];
        let r_start = &right.pts[0];
        if l_end != r_start {
            return Err(Error::invalid(format!(
                "cannot join at a seam where the pieces disagree: ({}, {}) vs ({}, {})",
                l_end.0, l_end.1, r_start.0, r_start.1
            )));
        }
        let mut pts = left.pts.clone();
        pts.extend(right.pts.iter().skip(1).cloned());
        PLFunction::new(pts)
    }

    /// Sorted union of this function's and `other`'s breakpoint abscissae.
    pub fn union_xs(&self, other: &Self) -> Vec<Rat> {
        let mut xs: Vec<Rat> = self
            .pts
            .iter()
            .map(|(x, _)| x.clone())
            .chain(other.pts.iter().map(|(x, _)| x.clone()))
            .collect();
        xs.sort();
        xs.dedup();
        xs
    }

    /// Pointwise maximum over a common domain, with crossings made explicit.
    pub fn max_with(&self, other: &Self) -> Result<Self> {
        if self.domain() != other.domain() {
            return Err(Error::invalid("pointwise max requires identical domains"));
        }
        let xs = self.union_xs(other);
        let mut pts: Vec<(Rat, Rat)> = Vec::with_capacity(xs.len());
        for (idx, x) in xs.iter().enumerate() {
            let f = self.eval(x)?;
            let g = other.eval(x)?;
            // Transversal crossing strictly inside the previous gap: insert the
            // intersection so the maximum stays piecewise linear on our breakpoints.
            if idx > 0 {
                let x_prev = &xs[idx - 1];
                let d_prev = self.eval(x_prev)? - other.eval(x_prev)?;
                let d_here = &f - &g;
                let zero = Rat::zero();
                let crosses = (d_prev > zero && d_here < zero) || (d_prev < zero && d_here > zero);
                if crosses {
                    let theta = &d_prev / (&d_prev - &d_here);
                    let x_star = x_prev + theta * (x - x_prev);
                    let y_star = self.eval(&x_star)?;
                    pts.push((x_star, y_star));
                }
            }
            pts.push((x.clone(), f.max(g)));
        }
        Ok(PLFunction::new(normalize(pts))?)
    }

    /// Pointwise sum with the affine map `x ↦ c0 + c1·x` (exact: an affine
    /// shift of a piecewise-linear function keeps the same breakpoint
    /// abscissae).
    pub fn add_linear(&self, c0: &Rat, c1: &Rat) -> Self {
        PLFunction {
            pts: self
                .pts
                .iter()
                .map(|(x, y)| (x.clone(), y + c0 + c1 * x))
                .collect(),
        }
    }

    /// Exact maximum of (self − other) over the common domain (domains must match).
    pub fn max_signed_diff(&self, other: &Self) -> Result<Rat> {
        if self.domain() != other.domain() {
            return Err(Error::invalid("difference supremum requires identical domains"));
        }
        let xs = self.union_xs(other);
        let mut best: Option<Rat> = None;
        for x in &xs {
            let d = self.eval(x)? - other.eval(x)?;
            if best.as_ref().map_or(true, |b| &d > b) {
                best = Some(d);
            }
        }
        Ok(best.expect("nonempty breakpoint union"))
    }

    /// Exact maximum of |self − other| over the common domain.
    pub fn sup_abs_diff(&self, other: &Self) -> Result<Rat> {
        let a = self.max_signed_diff(other)?;
        let b = other.max_signed_diff(self)?;
        Ok(a.max(b))
    }
}

/// Drop interior breakpoints that are exactly collinear with their neighbors.
fn normalize(pts: Vec<(Rat, Rat)>) -> Vec<(Rat, Rat)> {
    let mut out: Vec<(Rat, Rat)> = Vec::with_capacity(pts.len());
    for p in pts {
        while out.len() >= 2 {
            let (x0, y0) = &out[out.len() - 2];
            let (x1, y1) = &out[out.len() - 1];
            let collinear = (y1 - y0) * (&p.0 - x0) == (&p.1 - y0) * (x1 - x0);
            if collinear {
                out.pop();
            } else {
                break;
            }
        }
        out.push(p);
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rat::{int, rat};

    fn f(pts: &[(i64, i64, i64, i64)]) -> PLFunction {
        // (xn, xd, yn, yd) quadruples
        PLFunction::new(pts.iter().map(|&(a, b, c, d)| (rat(a, b), rat(c, d))).collect()).unwrap()
    }

    #[test]
    fn eval_interpolates_exactly() {
        let g = f(&[(0, 1, 0, 1), (1, 1, 1, 1), (2, 1, 0, 1)]);
        assert_eq!(g.eval(&rat(1, 2)).unwrap(), rat(1, 2));
        assert_eq!(g.eval(&rat(3, 2)).unwrap(), rat(1, 2));
        assert_eq!(g.eval(&int(2)).unwrap(), int(0));
        assert!(g.eval(&int(3)).is_err());
        assert!(g.eval(&rat(-1, 2)).is_err());
    }

    #[test]
    fn max_with_inserts_crossings() {
        // f = x on [0,1]; g = 1 - x on [0,1]; max has a kink at 1/2.
        let a = f(&[(0, 1, 0, 1), (1, 1, 1, 1)]);
        let b = f(&[(0, 1, 1, 1), (1, 1, 0, 1)]);
        let m = a.max_with(&b).unwrap();
        assert_eq!(m.eval(&rat(1, 2)).unwrap(), rat(1, 2));
        assert_eq!(m.eval(&rat(1, 4)).unwrap(), rat(3, 4));
        assert_eq!(m.eval(&rat(3, 4)).unwrap(), rat(3, 4));
        assert!(m.breakpoints().iter().any(|(x, _)| *x == rat(1, 2)));
    }

    #[test]
    fn sup_diff_is_exact_on_breakpoint_union() {
        let a = f(&[(0, 1, 0, 1), (1, 1, 1, 1)]);
        let b = f(&[(0, 1, 0, 1), (1, 2, 1, 1), (1, 1, 1, 1)]);
        // b - a peaks at x = 1/2 where b = 1, a = 1/2.
        assert_eq!(b.max_signed_diff(&a).unwrap(), rat(1, 2));
        assert_eq!(a.max_signed_diff(&b).unwrap(), int(0));
        assert_eq!(a.sup_abs_diff(&b).unwrap(), rat(1, 2));
    }

    #[test]
    fn restrict_and_concat_round_trip() {
        let g = f(&[(0, 1, 0, 1), (1, 1, 1, 1), (2, 1, 0, 1)]);
        let left = g.restrict(&int(0), &rat(1, 2)).unwrap();
        let right = g.restrict(&rat(1, 2), &int(2)).unwrap();
        let joined = PLFunction::concat(&left, &right).unwrap();
        for x in [int(0), rat(1, 3), rat(1, 2), int(1), rat(7, 4), int(2)] {
            assert_eq!(joined.eval(&x).unwrap(), g.eval(&x).unwrap());
        }
    }

    #[test]
    fn normalization_drops_collinear_interior_points() {
        let a = f(&[(0, 1, 0, 1), (1, 1, 1, 1)]);
        let b = f(&[(0, 1, -1, 1), (1, 2, 0, 1), (1, 1, 1, 1)]);
        // max = a everywhere except on [0, x*] where b < a... actually a >= b on [0,1]
        // with equality only at x = 1, so the max is a; normalization collapses the
        // redundant union breakpoint at 1/2.
        let m = a.max_with(&b).unwrap();
        assert_eq!(m.breakpoints().len(), 2);
    }
}
