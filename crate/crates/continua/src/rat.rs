//! Exact rational arithmetic: type alias, constructors, powers of two, and the
//! canonical `num/den` text form used by every file format in this crate.
//!
//! All metric data in the library is exact. Rationals are always serialized as
//! `num/den` with the denominator strictly positive and the fraction reduced, so
//! emitted files are byte-reproducible. Parsing additionally accepts a bare
//! integer as shorthand for `n/1`.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

/// Exact rational number. All distances, radii, and coordinates use this type.
pub type Rat = BigRational;

/// The integer `n` as a rational.
pub fn int(n: i64) -> Rat {
    BigRational::from_integer(BigInt::from(n))
}

/// The rational `num/den` (reduced, denominator normalized positive).
///
/// # Panics
/// Panics if `den == 0`; use [`parse_rat`] for untrusted input.
pub fn rat(num: i64, den: i64) -> Rat {
    assert!(den != 0, "rational with zero denominator");
    BigRational::new(BigInt::from(num), BigInt::from(den))
}

/// `2^e` for any integer exponent, exactly.
pub fn pow2(e: i32) -> Rat {
    if e >= 0 {
        BigRational::from_integer(BigInt::one() << e as usize)
    } else {
        BigRational::new(BigInt::one(), BigInt::one() << (-e) as usize)
    }
}

/// Canonical text form: always `num/den`, reduced, denominator positive.
pub fn fmt_rat(r: &Rat) -> String {
    format!("{}/{}", r.numer(), r.denom())
}

/// Parse a rational in `num/den` form (or a bare integer, read as `n/1`).
///
/// The result is canonicalized: reduced and with a positive denominator, so
/// `parse_rat("2/-4")` equals `-1/2`.
pub fn parse_rat(s: &str) -> Result<Rat> {
    let (num_s, den_s) = match s.split_once('/') {
        Some((a, b)) => (a, b),
        None => (s, "1"),
    };
    let num: BigInt = num_s
        .parse()
        .map_err(|_| Error::invalid(format!("bad rational numerator {num_s:?}")))?;
    let den: BigInt = den_s
        .parse()
        .map_err(|_| Error::invalid(format!("bad rational denominator {den_s:?}")))?;
    if den.is_zero() {
        return Err(Error::invalid(format!("zero denominator in rational {s:?}")));
    }
    Ok(BigRational::new(num, den))
}

/// Absolute value.
pub fn abs(r: &Rat) -> Rat {
    r.abs()
}

/// All dyadic rationals in [0, 1] with denominator dividing `2^depth`, in rank
/// order: ascending denominator, then ascending numerator. The sequence starts
/// 0, 1, 1/2, 1/4, 3/4, 1/8, 3/8, … and has `2^depth + 1` entries.
pub fn dyadic_grid_ranked(depth: u32) -> Vec<Rat> {
    assert!(depth <= 30, "dyadic grid depth out of desk-scale range");
    let mut out = vec![Rat::zero(), Rat::one()];
    for e in 1..=depth {
        let den = 1u64 << e;
        for num in (1..den).step_by(2) {
            out.push(BigRational::new(BigInt::from(num), BigInt::from(den)));
        }
    }
    out
}

/// Parse a comma-separated list of rationals, e.g. `"1/2,1/4,1/8"`.
pub fn parse_rat_list(s: &str) -> Result<Vec<Rat>> {
    if s.trim().is_empty() {
        return Ok(Vec::new());
    }
    s.split(',').map(|tok| parse_rat(tok.trim())).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn round_trip_is_canonical() {
        let r = parse_rat("2/-4").unwrap();
        assert_eq!(fmt_rat(&r), "-1/2");
        assert_eq!(parse_rat(&fmt_rat(&r)).unwrap(), r);
        assert_eq!(fmt_rat(&int(3)), "3/1");
        assert_eq!(fmt_rat(&Rat::zero()), "0/1");
    }

    #[test]
    fn pow2_both_signs() {
        assert_eq!(pow2(0), int(1));
        assert_eq!(pow2(5), int(32));
        assert_eq!(pow2(-3), rat(1, 8));
        assert_eq!(pow2(3) * pow2(-3), int(1));
    }

    #[test]
    fn parse_rejects_garbage() {
        assert!(parse_rat("1/0").is_err());
        assert!(parse_rat("a/2").is_err());
        assert!(parse_rat("1/2/3").is_err());
        assert!(parse_rat("").is_err());
        assert_eq!(parse_rat("7").unwrap(), int(7));
        assert_eq!(parse_rat("-3/6").unwrap(), rat(-1, 2));
    }

    #[test]
    fn list_parsing() {
        let g = parse_rat_list("1/2,1/4,1/8").unwrap();
        assert_eq!(g, vec![rat(1, 2), rat(1, 4), rat(1, 8)]);
        assert!(parse_rat_list("").unwrap().is_empty());
        assert!(parse_rat_list("1/2,,1/4").is_err());
    }
}
