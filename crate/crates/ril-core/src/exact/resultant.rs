use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use super::poly::IntPoly;
use super::ExactError;

/// Exact determinant by Bareiss fraction-free elimination. All divisions are
/// exact over Z, so intermediate entries stay polynomial-sized.
pub fn bareiss_determinant(mut m: Vec<Vec<BigInt>>) -> BigInt {
    let n = m.len();
    if n == 0 {
        return BigInt::one();
    }
    let mut sign = 1i32;
    let mut prev = BigInt::one();
    for k in 0..n - 1 {
        if m[k][k].is_zero() {
            match (k + 1..n).find(|&i| !m[i][k].is_zero()) {
                Some(i) => {
                    m.swap(k, i);
                    sign = -sign;
                }
                None => return BigInt::zero(),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let num = &m[i][j] * &m[k][k] - &m[i][k] * &m[k][j];
                m[i][j] = num / &prev;
            }
            m[i][k] = BigInt::zero();
        }
        prev = m[k][k].clone();
    }
    let det = m[n - 1][n - 1].clone();
    if sign < 0 {
        -det
    } else {
        det
    }
}

fn sylvester_matrix(f: &[BigInt], g: &[BigInt], df: usize, dg: usize) -> Vec<Vec<BigInt>> {
    // f, g highest-degree-first coefficient lists of lengths df+1, dg+1
    let n = df + dg;
    let mut m = vec![vec![BigInt::zero(); n]; n];
    for r in 0..dg {
        for (j, c) in f.iter().enumerate() {
            m[r][r + j] = c.clone();
        }
    }
    for r in 0..df {
        for (j, c) in g.iter().enumerate() {
            m[dg + r][r + j] = c.clone();
        }
    }
    m
}

/// Resultant of two nonzero integer polynomials via the Sylvester determinant,
/// equal to ℓ(f)^deg(g) · ∏_{f(α)=0} g(α).
pub fn resultant(f: &IntPoly, g: &IntPoly) -> Result<BigInt, ExactError> {
    if f.is_zero() || g.is_zero() {
        return Err(ExactError::ZeroPolynomial);
    }
    let df = f.degree();
    let dg = g.degree();
    if df == 0 {
        return Ok(f.leading().pow(dg as u32));
    }
    if dg == 0 {
        return Ok(g.leading().pow(df as u32));
    }
    let fc: Vec<BigInt> = f.coeffs().iter().rev().cloned().collect();
    let gc: Vec<BigInt> = g.coeffs().iter().rev().cloned().collect();
    Ok(bareiss_determinant(sylvester_matrix(&fc, &gc, df, dg)))
}

/// Resultant of two binary forms of common degree `d`, given as
/// lowest-degree-first coefficient lists of length d+1 (in the dehomogenizing
/// variable). Vanishes iff the forms share a projective root.
pub fn resultant_forms(f: &[BigInt], g: &[BigInt], d: usize) -> BigInt {
    assert!(d >= 1 && f.len() == d + 1 && g.len() == d + 1);
    let fc: Vec<BigInt> = f.iter().rev().cloned().collect();
    let gc: Vec<BigInt> = g.iter().rev().cloned().collect();
    bareiss_determinant(sylvester_matrix(&fc, &gc, d, d))
}

/// Discriminant Δ(f) = (−1)^{d(d−1)/2} · Res(f, f′) / ℓ(f), exact rational.
pub fn discriminant_oracle(f: &IntPoly) -> Result<BigRational, ExactError> {
    if f.is_zero() || f.degree() < 1 {
        return Err(ExactError::ZeroPolynomial);
    }
    let d = f.degree();
    if d == 1 {
        return Ok(BigRational::one());
    }
    let res = resultant(f, &f.derivative())?;
    let mut val = BigRational::new(res, f.leading());
    if (d * (d - 1) / 2) % 2 == 1 {
        val = -val;
    }
    Ok(val)
}
