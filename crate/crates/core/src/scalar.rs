//! Coefficient types.
//!
//! The algebra layer (jets, polynomials, row reduction, the RK action) is
//! written against [`Scalar`]. Exact rationals are the instantiation every
//! decision procedure relies on; `f64`/`f32` instantiations exist for quick
//! numerical experiments where exact zero tests are not needed.

use std::fmt::{Debug, Display};
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{FromPrimitive, Num, One, Signed, ToPrimitive, Zero};

/// Field-like coefficient type.
pub trait Scalar:
    Num + Signed + Clone + PartialOrd + Debug + Display + FromStr + FromPrimitive + Send + Sync
{
    /// Real `n`-th root when it exists in this type. For rationals this is
    /// `Some` only when the root is itself rational.
    fn exact_root(&self, n: u32) -> Option<Self>;

    fn to_f64(&self) -> f64;

    fn from_ratio(num: i64, den: i64) -> Self {
        Self::from_i64(num).unwrap() / Self::from_i64(den).unwrap()
    }

    fn from_count(n: usize) -> Self {
        <Self as FromPrimitive>::from_usize(n).unwrap()
    }

    /// Truncated product of two coefficient sequences: entries `0..=n` of
    /// `a * b`.
    fn convolve(a: &[Self], b: &[Self], n: usize) -> Vec<Self> {
        let mut out = vec![Self::zero(); n + 1];
        for (i, x) in a.iter().take(n + 1).enumerate() {
            if x.is_zero() {
                continue;
            }
            for (j, y) in b.iter().take(n + 1 - i).enumerate() {
                out[i + j] = out[i + j].clone() + x.clone() * y.clone();
            }
        }
        out
    }
}

impl Scalar for BigRational {
    fn exact_root(&self, n: u32) -> Option<Self> {
        if n == 0 {
            return None;
        }
        if n == 1 || self.is_zero() {
            return Some(self.clone());
        }
        if self.is_negative() && n.is_multiple_of(2) {
            return None;
        }
        let num = int_root(self.numer(), n)?;
        let den = int_root(self.denom(), n)?;
        Some(BigRational::new(num, den))
    }

    fn to_f64(&self) -> f64 {
        ToPrimitive::to_f64(self).unwrap_or(f64::NAN)
    }

    // Clear denominators once, convolve integers, reduce once per entry.
    fn convolve(a: &[Self], b: &[Self], n: usize) -> Vec<Self> {
        let (ia, da) = integer_multiple(&a[..a.len().min(n + 1)]);
        let (ib, db) = integer_multiple(&b[..b.len().min(n + 1)]);
        let den = da * db;
        let mut out = vec![BigInt::zero(); n + 1];
        for (i, x) in ia.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            for (j, y) in ib.iter().take(n + 1 - i).enumerate() {
                out[i + j] += x * y;
            }
        }
        out.into_iter()
            .map(|c| BigRational::new(c, den.clone()))
            .collect()
    }
}

/// `(v * l, l)` with `l` the lcm of the denominators.
fn integer_multiple(v: &[BigRational]) -> (Vec<BigInt>, BigInt) {
    let l = v.iter().fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
    let ints = v.iter().map(|c| c.numer() * (&l / c.denom())).collect();
    (ints, l)
}

fn int_root(v: &BigInt, n: u32) -> Option<BigInt> {
    let r = if v.is_negative() {
        -(-v).nth_root(n)
    } else {
        v.nth_root(n)
    };
    (num_traits::pow(r.clone(), n as usize) == *v).then_some(r)
}

impl Scalar for f64 {
    fn exact_root(&self, n: u32) -> Option<Self> {
        if n == 0 || (*self < 0.0 && n.is_multiple_of(2)) {
            return None;
        }
        Some(self.signum() * self.abs().powf(1.0 / n as f64))
    }

    fn to_f64(&self) -> f64 {
        *self
    }
}

impl Scalar for f32 {
    fn exact_root(&self, n: u32) -> Option<Self> {
        if n == 0 || (*self < 0.0 && n.is_multiple_of(2)) {
            return None;
        }
        Some(self.signum() * self.abs().powf(1.0 / n as f32))
    }

    fn to_f64(&self) -> f64 {
        *self as f64
    }
}

/// Exact rational from an `f64` (every finite double is a dyadic rational).
pub fn rational_from_f64(v: f64) -> Option<BigRational> {
    BigRational::from_float(v)
}

/// Parses `"p/q"`, `"p"` or a decimal literal such as `"-0.25"` into an exact
/// rational.
pub fn parse_rational(s: &str) -> Option<BigRational> {
    let s = s.trim();
    if s.is_empty() {
        return None;
    }
    if let Some((int_part, frac_part)) = s.split_once('.') {
        let negative = int_part.starts_with('-');
        let digits = int_part.trim_start_matches(['-', '+']);
        if (digits.is_empty() && frac_part.is_empty())
            || !digits.chars().all(|c| c.is_ascii_digit())
            || !frac_part.chars().all(|c| c.is_ascii_digit())
        {
            return None;
        }
        let mantissa: BigInt = format!("{}{}", digits, frac_part).parse().ok()?;
        let scale = num_traits::pow(BigInt::from(10), frac_part.len());
        let value = BigRational::new(mantissa, scale);
        return Some(if negative { -value } else { value });
    }
    BigRational::from_str(s).ok()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64, d: i64) -> BigRational {
        BigRational::from_ratio(n, d)
    }

    #[test]
    fn rational_roots() {
        assert_eq!(q(1, 4).exact_root(2), Some(q(1, 2)));
        assert_eq!(q(-8, 27).exact_root(3), Some(q(-2, 3)));
        assert_eq!(q(2, 1).exact_root(2), None);
        assert_eq!(q(-4, 1).exact_root(2), None);
        assert_eq!(q(5, 7).exact_root(1), Some(q(5, 7)));
    }

    #[test]
    fn float_roots() {
        assert!((8.0f64.exact_root(3).unwrap() - 2.0).abs() < 1e-12);
        assert!(((-8.0f64).exact_root(3).unwrap() + 2.0).abs() < 1e-12);
        assert!((-1.0f64).exact_root(2).is_none());
    }

    #[test]
    fn parses_literals() {
        assert_eq!(parse_rational("1/2"), Some(q(1, 2)));
        assert_eq!(parse_rational("-3"), Some(q(-3, 1)));
        assert_eq!(parse_rational("0.25"), Some(q(1, 4)));
        assert_eq!(parse_rational("-1.5"), Some(q(-3, 2)));
        assert_eq!(parse_rational(".5"), Some(q(1, 2)));
        assert_eq!(parse_rational("1/0"), None);
        assert_eq!(parse_rational("abc"), None);
        assert_eq!(parse_rational("."), None);
    }
}
