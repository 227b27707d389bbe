use num_bigint::{BigInt, Sign};
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

/// Exact rational scalar. `BigRational` keeps the invariant
/// gcd(|num|, den) = 1 with den > 0 for us.
pub type RationalValue = BigRational;

/// Parses "p/q" or "p" (decimal integers, optional sign).
pub fn parse_rational(s: &str) -> Option<RationalValue> {
    let s = s.trim();
    match s.split_once('/') {
        Some((p, q)) => {
            let p: BigInt = p.trim().parse().ok()?;
            let q: BigInt = q.trim().parse().ok()?;
            if q.is_zero() {
                return None;
            }
            Some(BigRational::new(p, q))
        }
        None => {
            let p: BigInt = s.parse().ok()?;
            Some(BigRational::from_integer(p))
        }
    }
}

/// Renders as "p/q", or "p" when the denominator is 1.
pub fn rational_to_string(q: &RationalValue) -> String {
    if q.denom().is_one() {
        q.numer().to_string()
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}

/// True iff `n` is a perfect square in Z.
pub fn is_square_int(n: &BigInt) -> bool {
    match n.sign() {
        Sign::Minus => false,
        Sign::NoSign => true,
        Sign::Plus => {
            let r = n.sqrt();
            &r * &r == *n
        }
    }
}

/// True iff `q` is the square of a rational number.
pub fn is_square_rational(q: &RationalValue) -> bool {
    if q.is_negative() {
        return false;
    }
    is_square_int(q.numer()) && is_square_int(q.denom())
}
