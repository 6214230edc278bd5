use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;

use super::AlgebraError;

/// Arbitrary-precision rational. `Ratio` keeps the denominator positive and
/// the pair reduced after every operation.
pub type Scalar = BigRational;

pub fn int(v: i64) -> Scalar {
    Scalar::from_integer(BigInt::from(v))
}

/// Panics on a zero denominator.
pub fn ratio(num: i64, den: i64) -> Scalar {
    Scalar::new(BigInt::from(num), BigInt::from(den))
}

/// Canonical wire form: `"num/den"` in lowest terms, integers as `"num"`.
pub fn format_scalar(x: &Scalar) -> String {
    x.to_string()
}

pub fn parse_scalar(s: &str) -> Result<Scalar, AlgebraError> {
    let bad = || AlgebraError::BadScalar(s.to_string());
    let t = s.trim();
    match t.split_once('/') {
        None => t.parse::<BigInt>().map(Scalar::from_integer).map_err(|_| bad()),
        Some((n, d)) => {
            let n: BigInt = n.trim().parse().map_err(|_| bad())?;
            let d: BigInt = d.trim().parse().map_err(|_| bad())?;
            if d.is_zero() {
                return Err(bad());
            }
            Ok(Scalar::new(n, d))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn canonical_strings() {
        assert_eq!(format_scalar(&ratio(6, -4)), "-3/2");
        assert_eq!(format_scalar(&int(4)), "4");
        assert_eq!(format_scalar(&ratio(0, 7)), "0");
    }

    #[test]
    fn parse_normalizes() {
        assert_eq!(parse_scalar("6/-4").unwrap(), ratio(-3, 2));
        assert_eq!(parse_scalar(" 12 ").unwrap(), int(12));
        assert!(parse_scalar("1/0").is_err());
        assert!(parse_scalar("x").is_err());
        assert!(parse_scalar("1.5").is_err());
    }
}
