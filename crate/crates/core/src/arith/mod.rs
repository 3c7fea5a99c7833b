//! Arithmetic over the rationals: dense univariate polynomials, modular
//! arithmetic and factorization over `Q[x]`.

pub mod factor;
pub mod modp;
pub mod qpoly;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

pub use qpoly::QPoly;

/// Rational numbers.
pub type Q = BigRational;

pub fn q(n: i64) -> Q {
    Q::from_integer(BigInt::from(n))
}

pub fn q_frac(n: i64, d: i64) -> Q {
    Q::new(BigInt::from(n), BigInt::from(d))
}

pub fn q_int(n: BigInt) -> Q {
    Q::from_integer(n)
}

/// Parses `"n"` or `"n/d"` (no decimal point, no exponent).
pub fn parse_q(s: &str) -> Option<Q> {
    let s = s.trim();
    let (num, den) = match s.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (s, "1"),
    };
    let num: BigInt = num.parse().ok()?;
    let den: BigInt = den.parse().ok()?;
    if den.is_zero() {
        return None;
    }
    Some(Q::new(num, den))
}

pub fn format_q(x: &Q) -> String {
    if x.denom().is_one() {
        x.numer().to_string()
    } else {
        format!("{}/{}", x.numer(), x.denom())
    }
}

/// `floor(x)` as an integer.
pub fn floor_q(x: &Q) -> BigInt {
    x.numer().div_floor(x.denom())
}

/// Rounds `x` to the nearest multiple of `2^-bits` (ties towards -inf).
pub fn round_dyadic(x: &Q, bits: u64) -> Q {
    let scale = BigInt::one() << bits;
    let scaled = x * Q::from_integer(scale.clone());
    let half = q_frac(1, 2);
    let n = floor_q(&(scaled + half));
    Q::new(n, scale)
}

/// A rational upper bound for `sqrt(x)`, `x >= 0`, within `2^-bits` relative-ish slack.
pub fn sqrt_upper(x: &Q, bits: u64) -> Q {
    if x.is_zero() {
        return Q::zero();
    }
    debug_assert!(!x.is_negative());
    let scale = BigInt::one() << (2 * bits);
    let scaled = (x * Q::from_integer(scale)).ceil().to_integer();
    let mut r = scaled.sqrt();
    if &r * &r < scaled {
        r += 1;
    }
    Q::new(r, BigInt::one() << bits)
}

/// A rational lower bound for `sqrt(x)`, `x >= 0`.
pub fn sqrt_lower(x: &Q, bits: u64) -> Q {
    if x.is_zero() {
        return Q::zero();
    }
    let scale = BigInt::one() << (2 * bits);
    let scaled = (x * Q::from_integer(scale)).floor().to_integer();
    Q::new(scaled.sqrt(), BigInt::one() << bits)
}

/// Exact conversion of a finite `f64`.
pub fn q_from_f64(x: f64) -> Q {
    Q::from_float(x).unwrap_or_else(Q::zero)
}

pub fn q_to_f64(x: &Q) -> f64 {
    use num_traits::ToPrimitive;
    x.to_f64().unwrap_or_else(|| {
        // Huge numerators/denominators: shift both down first.
        let nb = x.numer().bits() as i64;
        let db = x.denom().bits() as i64;
        let shift_n = (nb - 60).max(0) as usize;
        let shift_d = (db - 60).max(0) as usize;
        let n = (x.numer() >> shift_n).to_f64().unwrap_or(0.0);
        let d = (x.denom() >> shift_d).to_f64().unwrap_or(1.0);
        n / d * 2f64.powi(shift_n as i32 - shift_d as i32)
    })
}

/// Decimal rendering with `digits` significant fractional digits (display only).
pub fn q_to_decimal(x: &Q, digits: usize) -> String {
    let neg = x.is_negative();
    let a = x.abs();
    let scale = BigInt::from(10).pow(digits as u32);
    let scaled = (a * Q::from_integer(scale.clone()) + q_frac(1, 2)).floor().to_integer();
    let (int, frac) = scaled.div_rem(&scale);
    let mut frac_s = frac.to_string();
    while frac_s.len() < digits {
        frac_s.insert(0, '0');
    }
    let sign = if neg && !(int.is_zero() && frac.is_zero()) { "-" } else { "" };
    if digits == 0 {
        format!("{sign}{int}")
    } else {
        format!("{sign}{int}.{frac_s}")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_and_format() {
        assert_eq!(parse_q("3/6"), Some(q_frac(1, 2)));
        assert_eq!(parse_q("-7"), Some(q(-7)));
        assert_eq!(parse_q("1.5"), None);
        assert_eq!(parse_q("1/0"), None);
        assert_eq!(format_q(&q_frac(-4, 6)), "-2/3");
    }

    #[test]
    fn sqrt_bounds_bracket() {
        let two = q(2);
        let up = sqrt_upper(&two, 40);
        let lo = sqrt_lower(&two, 40);
        assert!(&up * &up >= two);
        assert!(&lo * &lo <= two);
        assert!(up - lo < q_frac(1, 1 << 30));
    }

    #[test]
    fn decimal_rendering() {
        assert_eq!(q_to_decimal(&q_frac(1, 3), 4), "0.3333");
        assert_eq!(q_to_decimal(&q_frac(-5, 2), 1), "-2.5");
    }
}
