use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use super::rational::is_square_rational;
use super::ExactError;

/// Dense univariate polynomial over Z, coefficients lowest degree first.
/// The zero polynomial is the empty coefficient list.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct IntPoly {
    coeffs: Vec<BigInt>,
}

/// Polynomial in the variable `t`, used for Q(t) coefficient work.
pub type PolyOverT = IntPoly;

impl IntPoly {
    pub fn new(mut coeffs: Vec<BigInt>) -> Self {
        while coeffs.last().map_or(false, |c| c.is_zero()) {
            coeffs.pop();
        }
        IntPoly { coeffs }
    }

    pub fn zero() -> Self {
        IntPoly { coeffs: vec![] }
    }

    pub fn constant(c: BigInt) -> Self {
        Self::new(vec![c])
    }

    pub fn from_i64(coeffs: &[i64]) -> Self {
        Self::new(coeffs.iter().map(|&c| BigInt::from(c)).collect())
    }

    /// The monomial `x`.
    pub fn var() -> Self {
        Self::from_i64(&[0, 1])
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn is_constant(&self) -> bool {
        self.coeffs.len() <= 1
    }

    /// Degree; the zero polynomial reports degree 0 here, guard with `is_zero`.
    pub fn degree(&self) -> usize {
        self.coeffs.len().saturating_sub(1)
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    pub fn coeff(&self, i: usize) -> BigInt {
        self.coeffs.get(i).cloned().unwrap_or_else(BigInt::zero)
    }

    /// Leading coefficient; zero for the zero polynomial.
    pub fn leading(&self) -> BigInt {
        self.coeffs.last().cloned().unwrap_or_else(BigInt::zero)
    }

    pub fn add(&self, other: &Self) -> Self {
        let n = self.coeffs.len().max(other.coeffs.len());
        let mut out = Vec::with_capacity(n);
        for i in 0..n {
            out.push(self.coeff(i) + other.coeff(i));
        }
        Self::new(out)
    }

    pub fn sub(&self, other: &Self) -> Self {
        let n = self.coeffs.len().max(other.coeffs.len());
        let mut out = Vec::with_capacity(n);
        for i in 0..n {
            out.push(self.coeff(i) - other.coeff(i));
        }
        Self::new(out)
    }

    pub fn neg(&self) -> Self {
        IntPoly {
            coeffs: self.coeffs.iter().map(|c| -c).collect(),
        }
    }

    pub fn mul(&self, other: &Self) -> Self {
        if self.is_zero() || other.is_zero() {
            return Self::zero();
        }
        let mut out = vec![BigInt::zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        Self::new(out)
    }

    pub fn scale(&self, k: &BigInt) -> Self {
        Self::new(self.coeffs.iter().map(|c| c * k).collect())
    }

    pub fn pow(&self, mut e: u32) -> Self {
        let mut base = self.clone();
        let mut acc = Self::constant(BigInt::one());
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base);
            }
        }
        acc
    }

    /// Substitutes `inner` for the variable: self(inner(x)).
    pub fn compose(&self, inner: &Self) -> Self {
        // Horner scheme.
        let mut acc = Self::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc.mul(inner).add(&Self::constant(c.clone()));
        }
        acc
    }

    pub fn eval(&self, x: &BigInt) -> BigInt {
        let mut acc = BigInt::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc * x + c;
        }
        acc
    }

    pub fn eval_rational(&self, x: &BigRational) -> BigRational {
        let mut acc = BigRational::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc * x + BigRational::from_integer(c.clone());
        }
        acc
    }

    pub fn derivative(&self) -> Self {
        if self.coeffs.len() <= 1 {
            return Self::zero();
        }
        Self::new(
            self.coeffs[1..]
                .iter()
                .enumerate()
                .map(|(i, c)| c * BigInt::from(i as u64 + 1))
                .collect(),
        )
    }

    /// gcd of the coefficients, non-negative; 0 for the zero polynomial.
    pub fn content(&self) -> BigInt {
        let mut g = BigInt::zero();
        for c in &self.coeffs {
            g = g.gcd(c);
            if g.is_one() {
                break;
            }
        }
        g
    }

    /// Primitive part with positive leading coefficient.
    pub fn primitive_part(&self) -> Self {
        if self.is_zero() {
            return Self::zero();
        }
        let mut c = self.content();
        if self.leading().is_negative() {
            c = -c;
        }
        Self::new(self.coeffs.iter().map(|x| x / &c).collect())
    }

    /// Reduces every coefficient mod 2 onto {0, 1}.
    pub fn reduce_mod2(&self) -> Self {
        Self::new(
            self.coeffs
                .iter()
                .map(|c| BigInt::from(c.mod_floor(&BigInt::from(2))))
                .collect(),
        )
    }

    /// Pseudo-remainder: ℓ(g)^(deg f − deg g + 1)·f mod g, computed over Z.
    fn pseudo_rem(&self, g: &Self) -> Self {
        debug_assert!(!g.is_zero());
        let mut r = self.clone();
        let dg = g.degree();
        let lg = g.leading();
        while !r.is_zero() && r.degree() >= dg {
            let dr = r.degree();
            let lr = r.leading();
            // r <- lg*r - lr*x^(dr-dg)*g
            let mut shifted = vec![BigInt::zero(); dr - dg];
            shifted.extend(g.coeffs.iter().map(|c| c * &lr));
            r = r.scale(&lg).sub(&Self::new(shifted));
            debug_assert!(r.is_zero() || r.degree() < dr);
        }
        r
    }

    /// Primitive gcd over Z via a primitive pseudo-remainder sequence.
    pub fn gcd(&self, other: &Self) -> Self {
        if self.is_zero() {
            return other.primitive_part();
        }
        if other.is_zero() {
            return self.primitive_part();
        }
        let (mut a, mut b) = if self.degree() >= other.degree() {
            (self.primitive_part(), other.primitive_part())
        } else {
            (other.primitive_part(), self.primitive_part())
        };
        while !b.is_zero() {
            let r = a.pseudo_rem(&b).primitive_part();
            a = b;
            b = r;
        }
        let g = a.primitive_part();
        // the gcd of the contents re-enters for non-primitive inputs
        let cg = self.content().gcd(&other.content());
        g.scale(&cg)
    }

    /// Display with variable name `var`, highest degree first.
    pub fn render(&self, var: &str) -> String {
        if self.is_zero() {
            return "0".to_string();
        }
        let mut parts = Vec::new();
        for (i, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let term = match i {
                0 => c.to_string(),
                _ => {
                    let v = if i == 1 {
                        var.to_string()
                    } else {
                        format!("{var}^{i}")
                    };
                    if c.is_one() {
                        v
                    } else if (-c).is_one() {
                        format!("-{v}")
                    } else {
                        format!("{c}*{v}")
                    }
                }
            };
            parts.push(term);
        }
        let mut s = String::new();
        for (k, t) in parts.iter().enumerate() {
            if k == 0 {
                s.push_str(t);
            } else if let Some(stripped) = t.strip_prefix('-') {
                s.push_str(" - ");
                s.push_str(stripped);
            } else {
                s.push_str(" + ");
                s.push_str(t);
            }
        }
        s
    }
}

/// Exact polynomial square root over Q: returns g with g² = f when one exists.
pub fn poly_sqrt_rational(f: &IntPoly) -> Option<Vec<BigRational>> {
    if f.is_zero() {
        return Some(vec![]);
    }
    let d = f.degree();
    if d % 2 != 0 {
        return None;
    }
    let lead = BigRational::from_integer(f.leading());
    if !is_square_rational(&lead) {
        return None;
    }
    let m = d / 2;
    let mut g = vec![BigRational::zero(); m + 1];
    g[m] = BigRational::new(lead.numer().sqrt(), lead.denom().sqrt());
    // match coefficients of x^(d-1) down to x^m
    for k in 1..=m {
        // coefficient of x^(d-k) in g^2 using entries g[m], ..., g[m-k+1]
        let mut acc = BigRational::zero();
        for j in 1..k {
            acc += &g[m - j] * &g[m - (k - j)];
        }
        let target = BigRational::from_integer(f.coeff(d - k));
        let two_lead = BigRational::from_integer(BigInt::from(2)) * &g[m];
        g[m - k] = (target - acc) / two_lead;
    }
    // verify the full square
    let mut sq = vec![BigRational::zero(); d + 1];
    for i in 0..=m {
        for j in 0..=m {
            let prod = &g[i] * &g[j];
            sq[i + j] += prod;
        }
    }
    for i in 0..=d {
        if sq[i] != BigRational::from_integer(f.coeff(i)) {
            return None;
        }
    }
    Some(g)
}

/// True iff `f` = g² for a polynomial g with rational coefficients.
pub fn is_square_poly(f: &PolyOverT) -> Result<bool, ExactError> {
    if f.is_zero() {
        return Err(ExactError::ZeroPolynomial);
    }
    Ok(poly_sqrt_rational(f).is_some())
}

/// (gcd(f, f'), f mod 2, f') — the squarefree/gcd toolkit for Q(t) work.
/// f is squarefree over Q iff the returned gcd is constant.
pub fn squarefree_and_gcd_tools(
    f: &PolyOverT,
) -> Result<(PolyOverT, PolyOverT, PolyOverT), ExactError> {
    if f.is_zero() {
        return Err(ExactError::ZeroPolynomial);
    }
    let df = f.derivative();
    let g = f.gcd(&df).primitive_part();
    Ok((g, f.reduce_mod2(), df))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(coeffs: &[i64]) -> IntPoly {
        IntPoly::from_i64(coeffs)
    }

    #[test]
    fn arithmetic_basics() {
        let f = p(&[1, 0, 1]); // x^2 + 1
        let g = p(&[0, 1]); // x
        assert_eq!(f.mul(&g), p(&[0, 1, 0, 1]));
        assert_eq!(f.compose(&f), p(&[2, 0, 2, 0, 1])); // x^4 + 2x^2 + 2
        assert_eq!(f.eval(&BigInt::from(2)), BigInt::from(5));
        assert_eq!(f.derivative(), p(&[0, 2]));
    }

    #[test]
    fn square_poly_examples() {
        assert!(is_square_poly(&p(&[1, 2, 1])).unwrap()); // (t+1)^2
        assert!(!is_square_poly(&p(&[0, 1])).unwrap()); // odd degree
        assert!(is_square_poly(&p(&[0, 0, 4])).unwrap()); // (2t)^2
        assert!(!is_square_poly(&p(&[0, 0, 2])).unwrap()); // sqrt(2) t is irrational
        assert!(is_square_poly(&IntPoly::zero()).is_err());
    }

    #[test]
    fn square_poly_quarter_coefficients() {
        // (t/2 + 1)^2 = t^2/4 + t + 1; clear denominators: t^2 + 4t + 4 = (t+2)^2
        assert!(is_square_poly(&p(&[4, 4, 1])).unwrap());
        // t^2 + t + 1 is not a rational square
        assert!(!is_square_poly(&p(&[1, 1, 1])).unwrap());
    }

    #[test]
    fn gcd_and_squarefree() {
        let f = p(&[-1, 0, 1]); // t^2 - 1
        let (g, _, _) = squarefree_and_gcd_tools(&f).unwrap();
        assert!(g.is_constant());

        let f = p(&[1, 2, 1]); // (t+1)^2
        let (g, _, _) = squarefree_and_gcd_tools(&f).unwrap();
        assert_eq!(g.degree(), 1);

        // c = -t^2 + t + 3: reduction mod 2 is t^2 + t + 1, derivative of
        // the reduction is 2t + 1 = 1 after reducing again
        let c = p(&[3, 1, -1]);
        let (_, cbar, _) = squarefree_and_gcd_tools(&c).unwrap();
        assert_eq!(cbar, p(&[1, 1, 1]));
        assert_eq!(cbar.derivative().reduce_mod2(), p(&[1]));
    }

    #[test]
    fn gcd_common_factor() {
        let f = p(&[-1, 0, 1]); // (t-1)(t+1)
        let g = p(&[2, 3, 1]); // (t+1)(t+2)
        assert_eq!(f.gcd(&g), p(&[1, 1]));
        let h = p(&[6]).mul(&f);
        let k = p(&[4]).mul(&f);
        assert_eq!(h.gcd(&k), f.scale(&BigInt::from(2)));
    }
}
