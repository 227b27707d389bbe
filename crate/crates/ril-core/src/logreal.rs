//! Natural-log-scale reals that remember an exact witness when they are logs
//! of rationals. Comparisons go through exact integer power comparisons when
//! both sides carry witnesses; otherwise floats with a near-tie margin.

use num_bigint::{BigInt, BigUint};
use num_traits::{One, Signed, ToPrimitive, Zero};
use std::cmp::Ordering;

const FLOAT_MARGIN: f64 = 1e-12;
/// Bit budget for an exact cross-power comparison before falling back to
/// floats; beyond this the float gap is far above the margin anyway.
const EXACT_BIT_CAP: u64 = 1 << 28;

/// ln(num/den)/root, with num/den ≥ 1 enforced by flipping when needed is the
/// caller's job: values here are always ≥ 0 in the exact branch.
#[derive(Debug, Clone, PartialEq, Eq)]
struct ExactLog {
    num: BigUint,
    den: BigUint,
    root: u32,
}

#[derive(Debug, Clone)]
pub struct LogReal {
    value: f64,
    exact: Option<ExactLog>,
}

fn ln_biguint(n: &BigUint) -> f64 {
    // exact for small n, mantissa+exponent split for big ones
    if let Some(v) = n.to_f64() {
        if v.is_finite() {
            return v.ln();
        }
    }
    let bits = n.bits();
    let top = (n >> (bits - 64)).to_f64().unwrap();
    top.ln() + (bits - 64) as f64 * std::f64::consts::LN_2
}

impl LogReal {
    pub fn zero() -> Self {
        LogReal {
            value: 0.0,
            exact: Some(ExactLog {
                num: BigUint::one(),
                den: BigUint::one(),
                root: 1,
            }),
        }
    }

    /// ln(n) for n ≥ 1, with exact witness.
    pub fn ln_int(n: &BigUint) -> Self {
        assert!(!n.is_zero(), "ln of zero");
        LogReal {
            value: ln_biguint(n),
            exact: Some(ExactLog {
                num: n.clone(),
                den: BigUint::one(),
                root: 1,
            }),
        }
    }

    pub fn ln_u64(n: u64) -> Self {
        Self::ln_int(&BigUint::from(n))
    }

    /// ln(|n|) of a nonzero integer.
    pub fn ln_abs(n: &BigInt) -> Self {
        Self::ln_int(&n.abs().to_biguint().unwrap())
    }

    /// ln(num/den)/root for num/den ≥ 1.
    pub fn ln_ratio_root(num: &BigUint, den: &BigUint, root: u32) -> Self {
        assert!(!num.is_zero() && !den.is_zero() && root >= 1);
        assert!(num >= den, "exact LogReal witnesses must be non-negative");
        LogReal {
            value: (ln_biguint(num) - ln_biguint(den)) / root as f64,
            exact: Some(ExactLog {
                num: num.clone(),
                den: den.clone(),
                root,
            }),
        }
    }

    /// A plain float value with no exact witness.
    pub fn approx(value: f64) -> Self {
        LogReal { value, exact: None }
    }

    pub fn value(&self) -> f64 {
        self.value
    }

    pub fn is_exact(&self) -> bool {
        self.exact.is_some()
    }

    /// Divides by a positive integer (e.g. B_S = C_S/(d_S−1)).
    pub fn div_u32(&self, k: u32) -> Self {
        assert!(k >= 1);
        LogReal {
            value: self.value / k as f64,
            exact: self.exact.as_ref().map(|e| ExactLog {
                num: e.num.clone(),
                den: e.den.clone(),
                root: e.root.checked_mul(k).expect("root overflow"),
            }),
        }
    }

    /// Multiplies by a small positive integer (e.g. 3·B_S).
    pub fn mul_u32(&self, k: u32) -> Self {
        assert!(k >= 1);
        LogReal {
            value: self.value * k as f64,
            exact: self.exact.as_ref().map(|e| ExactLog {
                num: e.num.pow(k),
                den: e.den.pow(k),
                root: e.root,
            }),
        }
    }

    /// Compares self against other; exact on near-ties when both carry
    /// witnesses, float margin otherwise (ties within the margin collapse to
    /// Equal, which never certifies a strict inequality).
    pub fn cmp_log(&self, other: &Self) -> Ordering {
        let diff = self.value - other.value;
        let tol = FLOAT_MARGIN * (1.0 + self.value.abs() + other.value.abs());
        if diff.abs() > tol {
            return diff.partial_cmp(&0.0).unwrap();
        }
        match (&self.exact, &other.exact) {
            (Some(a), Some(b)) => cmp_exact(a, b),
            _ => Ordering::Equal,
        }
    }

    pub fn gt(&self, other: &Self) -> bool {
        self.cmp_log(other) == Ordering::Greater
    }

    pub fn lt(&self, other: &Self) -> bool {
        self.cmp_log(other) == Ordering::Less
    }

    pub fn le(&self, other: &Self) -> bool {
        self.cmp_log(other) != Ordering::Greater
    }

    /// (num, den, root) when this value is exactly ln(num/den)/root.
    pub fn exact_ratio_root(&self) -> Option<(BigUint, BigUint, u32)> {
        self.exact
            .as_ref()
            .map(|e| (e.num.clone(), e.den.clone(), e.root))
    }

    /// The integer n when this value is exactly ln(n).
    pub fn exact_integer(&self) -> Option<BigUint> {
        self.exact
            .as_ref()
            .filter(|e| e.den.is_one() && e.root == 1)
            .map(|e| e.num.clone())
    }
}

/// Compares mult·a against b, exactly when both sides carry witnesses and the
/// cross powers fit the bit budget.
pub fn cmp_scaled(mult: &BigUint, a: &LogReal, b: &LogReal) -> Ordering {
    let m = mult.to_f64().unwrap_or(f64::INFINITY);
    let lhs = m * a.value;
    let diff = lhs - b.value;
    let tol = FLOAT_MARGIN * (1.0 + lhs.abs() + b.value.abs());
    if diff.abs() > tol {
        return diff.partial_cmp(&0.0).unwrap();
    }
    if let (Some(ea), Some(eb)) = (&a.exact, &b.exact) {
        // mult·ln(n1/d1)/r1 vs ln(n2/d2)/r2
        // ⇔ n1^(mult·r2)·d2^r1 vs n2^r1·d1^(mult·r2)
        let e_lhs = mult * BigUint::from(eb.root);
        let bits = ea.num.bits().max(ea.den.bits()) * e_lhs.to_u64().unwrap_or(u64::MAX)
            + eb.num.bits().max(eb.den.bits()) * ea.root as u64;
        if bits <= EXACT_BIT_CAP {
            if let Some(e_lhs) = e_lhs.to_u32() {
                let l = ea.num.pow(e_lhs) * eb.den.pow(ea.root);
                let r = eb.num.pow(ea.root) * ea.den.pow(e_lhs);
                return l.cmp(&r);
            }
        }
    }
    Ordering::Equal
}

fn cmp_exact(a: &ExactLog, b: &ExactLog) -> Ordering {
    let bits = a.num.bits().max(a.den.bits()) * b.root as u64
        + b.num.bits().max(b.den.bits()) * a.root as u64;
    if bits > EXACT_BIT_CAP {
        return Ordering::Equal;
    }
    let l = a.num.pow(b.root) * b.den.pow(a.root);
    let r = b.num.pow(a.root) * a.den.pow(b.root);
    l.cmp(&r)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exact_tie_breaks() {
        // ln 2 vs ln 10 / 2 = ln sqrt(10): sqrt(10) > 2 ... wait 4 < 10
        let a = LogReal::ln_u64(2);
        let b = LogReal::ln_u64(10).div_u32(2);
        assert_eq!(a.cmp_log(&b), Ordering::Less);
        // ln 4 / 2 == ln 2 exactly, floats would agree but exactness matters
        let c = LogReal::ln_u64(4).div_u32(2);
        assert_eq!(a.cmp_log(&c), Ordering::Equal);
        // boundary case from orbit certification: h(2) = ln 2 is NOT > B_S = ln 2
        assert!(!LogReal::ln_u64(2).gt(&LogReal::ln_u64(2)));
        assert!(LogReal::ln_u64(5).gt(&LogReal::ln_u64(2)));
    }

    #[test]
    fn scaled_comparison() {
        // 3·ln 2 vs ln 8: equal exactly
        let two = LogReal::ln_u64(2);
        let eight = LogReal::ln_u64(8);
        assert_eq!(cmp_scaled(&BigUint::from(3u32), &two, &eight), Ordering::Equal);
        assert_eq!(
            cmp_scaled(&BigUint::from(4u32), &two, &eight),
            Ordering::Greater
        );
        assert_eq!(cmp_scaled(&BigUint::from(2u32), &two, &eight), Ordering::Less);
    }

    #[test]
    fn ln_of_large_integers() {
        let n = BigUint::from(3u32).pow(10_000);
        let l = LogReal::ln_int(&n);
        let expect = 10_000.0 * 3f64.ln();
        assert!((l.value() - expect).abs() < 1e-6 * expect);
    }

    #[test]
    fn mul_preserves_exactness() {
        let b = LogReal::ln_u64(2).mul_u32(3);
        assert_eq!(b.cmp_log(&LogReal::ln_u64(8)), Ordering::Equal);
    }
}
