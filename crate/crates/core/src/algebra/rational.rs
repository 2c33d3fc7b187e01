use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};

use super::AlgebraError;

/// Arbitrary-precision exact fraction, always kept in lowest terms with a
/// positive denominator.
pub type Rational = BigRational;

/// Builds `num/den` in canonical form.
pub fn rat(num: i64, den: i64) -> Result<Rational, AlgebraError> {
    if den == 0 {
        return Err(AlgebraError::ZeroDenominator);
    }
    Ok(BigRational::new(BigInt::from(num), BigInt::from(den)))
}

/// Integer as a rational.
pub fn int(n: i64) -> Rational {
    BigRational::from_integer(BigInt::from(n))
}

/// Parses `"p/q"` or `"p"` (surrounding whitespace is tolerated).
pub fn parse_rational(s: &str) -> Result<Rational, AlgebraError> {
    let t = s.trim();
    let (num, den) = match t.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (t, "1"),
    };
    let num: BigInt = num
        .parse()
        .map_err(|_| AlgebraError::Parse(s.to_string()))?;
    let den: BigInt = den
        .parse()
        .map_err(|_| AlgebraError::Parse(s.to_string()))?;
    if den.is_zero() {
        return Err(AlgebraError::ZeroDenominator);
    }
    Ok(BigRational::new(num, den))
}

/// Canonical text form: `"p/q"`, or `"p"` for integers.
pub fn fmt_rational(r: &Rational) -> String {
    if r.is_integer() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

/// Decimal rendering with 17 significant digits.
pub fn to_decimal(r: &Rational) -> String {
    let v = r.to_f64().unwrap_or(f64::NAN);
    format!("{v:.16e}")
}

/// 2^e for any integer exponent.
pub fn pow2(e: i64) -> Rational {
    let p = BigInt::one() << e.unsigned_abs();
    if e >= 0 {
        BigRational::from_integer(p)
    } else {
        BigRational::new(BigInt::one(), p)
    }
}

/// n!
pub fn factorial(n: u64) -> BigInt {
    (1..=n).fold(BigInt::one(), |acc, i| acc * i)
}

/// n choose k, zero when k > n.
pub fn binomial(n: u64, k: u64) -> BigInt {
    if k > n {
        return BigInt::zero();
    }
    let k = k.min(n - k);
    let mut acc = BigInt::one();
    for i in 0..k {
        acc = acc * (n - i) / (i + 1);
    }
    acc
}

/// ∏_{r=0}^{k-1} (x - r); the empty product is 1.
pub fn falling_factorial(x: &Rational, k: usize) -> Rational {
    let mut acc = Rational::one();
    for r in 0..k {
        acc *= x - int(r as i64);
    }
    acc
}
