//! Dominant rational self-maps of P^N with rational coefficients: points,
//! homogeneous coordinate maps, evaluation, composition with content
//! cancellation, and the unicritical family a(x−c)^d + b.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::exact::{parse_rational, rational_to_string, resultant_forms, IntPoly, RationalValue};
use crate::logreal::LogReal;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum MapError {
    #[error("point lies in the indeterminacy locus of the composite map")]
    IndeterminatePoint,
    #[error("dimension mismatch: {0} vs {1}")]
    DimensionMismatch(usize, usize),
    #[error("invalid map data: {0}")]
    Invalid(String),
}

/// Point of P^N(Q) as coprime integer coordinates, first nonzero positive.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ProjPointQ {
    coords: Vec<BigInt>,
}

impl ProjPointQ {
    pub fn new(coords: Vec<BigInt>) -> Result<Self, MapError> {
        if coords.is_empty() || coords.iter().all(|c| c.is_zero()) {
            return Err(MapError::Invalid("projective point must be nonzero".into()));
        }
        Ok(Self::canonicalize(coords))
    }

    fn canonicalize(coords: Vec<BigInt>) -> Self {
        let mut g = BigInt::zero();
        if coords.iter().any(|c| c.magnitude().is_one()) {
            g = BigInt::one();
        } else {
            for c in &coords {
                g = g.gcd(c);
                if g.is_one() {
                    break;
                }
            }
        }
        let first = coords.iter().find(|c| !c.is_zero()).unwrap();
        if first.is_negative() {
            g = -g;
        }
        ProjPointQ {
            coords: coords.iter().map(|c| c / &g).collect(),
        }
    }

    /// Affine rational x on P^1, embedded as [p : q].
    pub fn from_affine(x: &RationalValue) -> Self {
        Self::new(vec![x.numer().clone(), x.denom().clone()]).unwrap()
    }

    pub fn from_i64(coords: &[i64]) -> Self {
        Self::new(coords.iter().map(|&c| BigInt::from(c)).collect()).unwrap()
    }

    /// Parses "p/q" (P^1 affine) or "[a:b:...]" homogeneous coordinates.
    pub fn parse(s: &str) -> Result<Self, MapError> {
        let s = s.trim();
        if let Some(inner) = s.strip_prefix('[').and_then(|t| t.strip_suffix(']')) {
            let coords: Option<Vec<BigInt>> = inner
                .split(':')
                .map(|c| c.trim().parse::<BigInt>().ok())
                .collect();
            let coords = coords.ok_or_else(|| MapError::Invalid(format!("bad point '{s}'")))?;
            Self::new(coords)
        } else {
            let x =
                parse_rational(s).ok_or_else(|| MapError::Invalid(format!("bad point '{s}'")))?;
            Ok(Self::from_affine(&x))
        }
    }

    pub fn coords(&self) -> &[BigInt] {
        &self.coords
    }

    /// Ambient dimension N.
    pub fn dim(&self) -> usize {
        self.coords.len() - 1
    }

    /// Affine value x = X/Y for P^1 points away from infinity.
    pub fn affine(&self) -> Option<RationalValue> {
        if self.coords.len() != 2 || self.coords[1].is_zero() {
            return None;
        }
        Some(BigRational::new(self.coords[0].clone(), self.coords[1].clone()))
    }

    /// Weil height: ln of the max coordinate magnitude (coprime coordinates).
    pub fn height(&self) -> LogReal {
        let m = self.coords.iter().map(|c| c.abs()).max().unwrap();
        LogReal::ln_abs(&m)
    }

    pub fn render(&self) -> String {
        let inner: Vec<String> = self.coords.iter().map(|c| c.to_string()).collect();
        format!("[{}]", inner.join(":"))
    }
}

/// A single monomial coeff · ∏ Xᵢ^eᵢ in N+1 variables.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Monomial {
    pub exps: Vec<u32>,
    pub coeff: BigInt,
}

/// Sparse homogeneous polynomial in N+1 variables.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct HomogPoly {
    nvars: usize,
    terms: Vec<Monomial>,
}

impl HomogPoly {
    pub fn new(nvars: usize, mut terms: Vec<Monomial>) -> Self {
        terms.retain(|t| !t.coeff.is_zero());
        terms.sort_by(|a, b| a.exps.cmp(&b.exps));
        let mut merged: Vec<Monomial> = Vec::with_capacity(terms.len());
        for t in terms {
            if let Some(last) = merged.last_mut() {
                if last.exps == t.exps {
                    last.coeff += t.coeff;
                    continue;
                }
            }
            merged.push(t);
        }
        merged.retain(|t| !t.coeff.is_zero());
        HomogPoly {
            nvars,
            terms: merged,
        }
    }

    pub fn zero(nvars: usize) -> Self {
        HomogPoly {
            nvars,
            terms: vec![],
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> &[Monomial] {
        &self.terms
    }

    pub fn total_degree(&self) -> Option<u32> {
        let degs: Vec<u32> = self
            .terms
            .iter()
            .map(|t| t.exps.iter().sum::<u32>())
            .collect();
        match degs.first() {
            None => None,
            Some(&d) if degs.iter().all(|&e| e == d) => Some(d),
            _ => None,
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut terms = self.terms.clone();
        terms.extend(other.terms.iter().cloned());
        Self::new(self.nvars, terms)
    }

    pub fn mul(&self, other: &Self) -> Self {
        let mut terms = Vec::with_capacity(self.terms.len() * other.terms.len());
        for a in &self.terms {
            for b in &other.terms {
                let exps = a.exps.iter().zip(&b.exps).map(|(x, y)| x + y).collect();
                terms.push(Monomial {
                    exps,
                    coeff: &a.coeff * &b.coeff,
                });
            }
        }
        Self::new(self.nvars, terms)
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut acc = HomogPoly::new(
            self.nvars,
            vec![Monomial {
                exps: vec![0; self.nvars],
                coeff: BigInt::one(),
            }],
        );
        for _ in 0..e {
            acc = acc.mul(self);
        }
        acc
    }

    pub fn eval(&self, coords: &[BigInt]) -> BigInt {
        let mut acc = BigInt::zero();
        for t in &self.terms {
            let mut term = t.coeff.clone();
            for (x, &e) in coords.iter().zip(&t.exps) {
                if e > 0 {
                    term *= x.pow(e);
                }
            }
            acc += term;
        }
        acc
    }

    fn content(&self) -> BigInt {
        let mut g = BigInt::zero();
        for t in &self.terms {
            g = g.gcd(&t.coeff);
        }
        g
    }
}

/// Self-map of P^N given by N+1 homogeneous integer forms of common degree,
/// with unit integer content across all coefficients.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HomogMap {
    dim: usize,
    degree: u32,
    coords: Vec<HomogPoly>,
    /// Cached for N=1 only (resultant of the coordinate forms ≠ 0).
    morphism_p1: Option<bool>,
}

impl HomogMap {
    pub fn new(dim: usize, coords: Vec<HomogPoly>) -> Result<Self, MapError> {
        if coords.len() != dim + 1 {
            return Err(MapError::Invalid(format!(
                "expected {} coordinate polynomials, got {}",
                dim + 1,
                coords.len()
            )));
        }
        let mut degree = None;
        for c in &coords {
            if c.is_zero() {
                continue;
            }
            match (degree, c.total_degree()) {
                (_, None) => {
                    return Err(MapError::Invalid(
                        "coordinate polynomial is not homogeneous".into(),
                    ))
                }
                (None, Some(d)) => degree = Some(d),
                (Some(d0), Some(d)) if d0 == d => {}
                _ => {
                    return Err(MapError::Invalid(
                        "coordinate polynomials have mixed degrees".into(),
                    ))
                }
            }
        }
        let degree = degree.ok_or_else(|| MapError::Invalid("zero map".into()))?;
        if degree < 1 {
            return Err(MapError::Invalid("map degree must be at least 1".into()));
        }
        // clear the joint integer content
        let mut g = BigInt::zero();
        for c in &coords {
            g = g.gcd(&c.content());
        }
        let coords: Vec<HomogPoly> = coords
            .into_iter()
            .map(|c| {
                HomogPoly::new(
                    c.nvars,
                    c.terms
                        .into_iter()
                        .map(|t| Monomial {
                            exps: t.exps,
                            coeff: t.coeff / &g,
                        })
                        .collect(),
                )
            })
            .collect();
        let mut map = HomogMap {
            dim,
            degree,
            coords,
            morphism_p1: None,
        };
        // The resultant is a (2d)×(2d) determinant; precompute it only at
        // desk scale and leave huge composites to on-demand computation.
        if dim == 1 && degree <= 32 {
            map.morphism_p1 = Some(!map.p1_form_resultant().is_zero());
        }
        Ok(map)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn degree(&self) -> u32 {
        self.degree
    }

    pub fn coord_polys(&self) -> &[HomogPoly] {
        &self.coords
    }

    /// Coefficient list (lowest X-power first, length degree+1) of a P^1
    /// coordinate form in the basis X^i Y^(d-i).
    fn p1_form_coeffs(&self, idx: usize) -> Vec<BigInt> {
        let d = self.degree as usize;
        let mut out = vec![BigInt::zero(); d + 1];
        for t in &self.coords[idx].terms {
            out[t.exps[0] as usize] += &t.coeff;
        }
        out
    }

    fn p1_form_resultant(&self) -> BigInt {
        resultant_forms(
            &self.p1_form_coeffs(0),
            &self.p1_form_coeffs(1),
            self.degree as usize,
        )
    }

    /// Morphism test on P^1: the coordinate forms share no projective root.
    /// Precomputed for degree ≤ 32; computed on demand above that.
    pub fn is_morphism_p1(&self) -> Result<bool, MapError> {
        if self.dim != 1 {
            return Err(MapError::DimensionMismatch(self.dim, 1));
        }
        Ok(self
            .morphism_p1
            .unwrap_or_else(|| !self.p1_form_resultant().is_zero()))
    }

    pub fn evaluate(&self, p: &ProjPointQ) -> Result<ProjPointQ, MapError> {
        if p.dim() != self.dim {
            return Err(MapError::DimensionMismatch(self.dim, p.dim()));
        }
        let vals: Vec<BigInt> = self.coords.iter().map(|c| c.eval(p.coords())).collect();
        if vals.iter().all(|v| v.is_zero()) {
            return Err(MapError::IndeterminatePoint);
        }
        Ok(ProjPointQ::canonicalize(vals))
    }

    /// Substitutes `inner` into `self`, then cancels polynomial content:
    /// integer and monomial content always; on P^1 the full common factor of
    /// the two binary forms (via univariate gcd over Z).
    pub fn compose(&self, inner: &Self) -> Result<Self, MapError> {
        if self.dim != inner.dim {
            return Err(MapError::DimensionMismatch(self.dim, inner.dim));
        }
        let nv = self.dim + 1;
        let mut new_coords = Vec::with_capacity(nv);
        for c in &self.coords {
            let mut acc = HomogPoly::zero(nv);
            for t in &c.terms {
                let mut term = HomogPoly::new(
                    nv,
                    vec![Monomial {
                        exps: vec![0; nv],
                        coeff: t.coeff.clone(),
                    }],
                );
                for (i, &e) in t.exps.iter().enumerate() {
                    if e > 0 {
                        term = term.mul(&inner.coords[i].pow(e));
                    }
                }
                acc = acc.add(&term);
            }
            new_coords.push(acc);
        }
        // monomial content: strip the min exponent of each variable
        let mut min_exps = vec![u32::MAX; nv];
        for c in &new_coords {
            if c.is_zero() {
                continue;
            }
            for i in 0..nv {
                let var_min = c.terms.iter().map(|t| t.exps[i]).min().unwrap();
                min_exps[i] = min_exps[i].min(var_min);
            }
        }
        for m in min_exps.iter_mut() {
            if *m == u32::MAX {
                *m = 0;
            }
        }
        if min_exps.iter().any(|&m| m > 0) {
            new_coords = new_coords
                .into_iter()
                .map(|c| {
                    HomogPoly::new(
                        nv,
                        c.terms
                            .into_iter()
                            .map(|t| Monomial {
                                exps: t.exps.iter().zip(&min_exps).map(|(e, m)| e - m).collect(),
                                coeff: t.coeff,
                            })
                            .collect(),
                    )
                })
                .collect();
        }
        let mut composed = Self::new(self.dim, new_coords)?;
        if self.dim == 1 {
            composed = composed.cancel_p1_common_factor();
        }
        Ok(composed)
    }

    /// Divides out the gcd of the two binary forms on P^1. Monomial content
    /// is already gone, so the common factor is visible in the
    /// dehomogenizations.
    fn cancel_p1_common_factor(self) -> Self {
        let d = self.degree as usize;
        // monomial content is gone, so a coordinate whose dehomogenization is
        // constant rules out any nonconstant common factor
        let dehomog_deg = |idx: usize| {
            self.coords[idx]
                .terms()
                .iter()
                .map(|t| t.exps[0])
                .max()
                .unwrap_or(0)
        };
        if dehomog_deg(0) == 0 || dehomog_deg(1) == 0 {
            return self;
        }
        let f0 = IntPoly::new(self.p1_form_coeffs(0));
        let f1 = IntPoly::new(self.p1_form_coeffs(1));
        let g = f0.gcd(&f1);
        if g.is_constant() {
            return self;
        }
        let q0 = exact_div(&f0, &g);
        let q1 = exact_div(&f1, &g);
        let rebuild = |q: &IntPoly, orig_deg: usize| -> HomogPoly {
            // original form = Y^(d-orig_deg)·hom(f); quotient keeps the same
            // Y-padding and drops e from the homogenization degree
            let pad = d - orig_deg;
            let terms = q
                .coeffs()
                .iter()
                .enumerate()
                .filter(|(_, c)| !c.is_zero())
                .map(|(i, c)| Monomial {
                    exps: vec![i as u32, (q.degree() - i + pad) as u32],
                    coeff: c.clone(),
                })
                .collect();
            HomogPoly::new(2, terms)
        };
        let c0 = rebuild(&q0, f0.degree());
        let c1 = rebuild(&q1, f1.degree());
        Self::new(1, vec![c0, c1]).expect("cancelled map stays valid")
    }
}

/// Exact polynomial division, panics on nonzero remainder (callers divide by
/// a known factor).
fn exact_div(f: &IntPoly, g: &IntPoly) -> IntPoly {
    let mut rem: Vec<BigRational> = f
        .coeffs()
        .iter()
        .map(|c| BigRational::from_integer(c.clone()))
        .collect();
    let dg = g.degree();
    let lg = BigRational::from_integer(g.leading());
    let mut quot = vec![BigRational::zero(); f.degree() - dg + 1];
    for k in (0..quot.len()).rev() {
        let q = &rem[k + dg] / &lg;
        quot[k] = q.clone();
        for (j, gc) in g.coeffs().iter().enumerate() {
            let sub = &q * &BigRational::from_integer(gc.clone());
            rem[k + j] -= sub;
        }
    }
    assert!(rem.iter().all(|r| r.is_zero()), "non-exact division");
    IntPoly::new(
        quot.iter()
            .map(|q| {
                assert!(q.denom().is_one(), "non-integral quotient");
                q.numer().clone()
            })
            .collect(),
    )
}

/// a(x−c)^d + b on P^1.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct UnicriticalMap {
    pub a: RationalValue,
    pub c: RationalValue,
    pub b: RationalValue,
    pub d: u32,
}

impl UnicriticalMap {
    pub fn new(a: RationalValue, c: RationalValue, b: RationalValue, d: u32) -> Result<Self, MapError> {
        if a.is_zero() {
            return Err(MapError::Invalid("unicritical leading term a = 0".into()));
        }
        if d < 2 {
            return Err(MapError::Invalid("unicritical degree must be >= 2".into()));
        }
        Ok(UnicriticalMap { a, c, b, d })
    }

    /// x^d + c with integer c.
    pub fn power_plus(c: i64, d: u32) -> Self {
        Self::new(
            BigRational::one(),
            BigRational::zero(),
            BigRational::from_integer(BigInt::from(c)),
            d,
        )
        .unwrap()
    }

    pub fn apply_affine(&self, x: &RationalValue) -> RationalValue {
        let mut shifted = x - &self.c;
        let base = shifted.clone();
        for _ in 1..self.d {
            shifted *= &base;
        }
        &self.a * shifted + &self.b
    }

    /// All maps in a quadratic Galois family share this form x ↦ a(x−c)²+b.
    pub fn is_integral(&self) -> bool {
        self.a.is_integer() && self.b.is_integer() && self.c.is_integer()
    }

    /// Homogenizes to a degree-d self-map of P^1 with cleared denominators.
    pub fn to_homog(&self) -> HomogMap {
        let d = self.d;
        // numerator: a(X − cY)^d + b·Y^d over Q, then clear denominators
        let mut num = vec![BigRational::zero(); d as usize + 1]; // index = X power
        let negc = -&self.c;
        // binomial expansion of (X + (−c)Y)^d
        let mut binom = BigInt::one();
        for i in 0..=d {
            // coefficient of X^i Y^(d−i): C(d,i)·(−c)^(d−i)
            let mut pow = BigRational::one();
            for _ in 0..(d - i) {
                pow *= &negc;
            }
            num[i as usize] =
                &self.a * BigRational::from_integer(binom.clone()) * pow;
            // next binomial coefficient
            binom = &binom * BigInt::from((d - i) as u64) / BigInt::from(i as u64 + 1);
        }
        num[0] += &self.b;
        let den_poly = [BigRational::one()]; // Y^d coefficient of the denominator
        let mut lcm = BigInt::one();
        for c in num.iter().chain(den_poly.iter()) {
            lcm = lcm.lcm(c.denom());
        }
        let int_of = |c: &BigRational| -> BigInt { (c * BigRational::from_integer(lcm.clone())).to_integer() };
        let coord0 = HomogPoly::new(
            2,
            num.iter()
                .enumerate()
                .map(|(i, c)| Monomial {
                    exps: vec![i as u32, d - i as u32],
                    coeff: int_of(c),
                })
                .collect(),
        );
        let coord1 = HomogPoly::new(
            2,
            vec![Monomial {
                exps: vec![0, d],
                coeff: lcm.clone(),
            }],
        );
        HomogMap::new(1, vec![coord0, coord1]).expect("unicritical map is well formed")
    }

    /// Dehomogenized coordinate polynomial as a univariate integer polynomial,
    /// defined for integral parameters.
    pub fn to_int_poly(&self) -> Option<IntPoly> {
        if !self.is_integral() {
            return None;
        }
        let shift = IntPoly::new(vec![-self.c.to_integer(), BigInt::one()]);
        let powed = shift.pow(self.d);
        Some(
            powed
                .scale(&self.a.to_integer())
                .add(&IntPoly::constant(self.b.to_integer())),
        )
    }
}

/// JSON wire form of a single map.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase", deny_unknown_fields)]
pub enum MapJson {
    Unicritical {
        a: String,
        c: String,
        b: String,
        d: u32,
    },
    Homog {
        n: usize,
        degree: u32,
        coords: Vec<Vec<(String, String)>>,
    },
}

/// Parsed map: the homogeneous form plus the unicritical parameters when the
/// map was given in that shape (the Galois tower needs them).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FamilyMap {
    pub homog: HomogMap,
    pub unicritical: Option<UnicriticalMap>,
}

impl FamilyMap {
    pub fn from_unicritical(u: UnicriticalMap) -> Self {
        FamilyMap {
            homog: u.to_homog(),
            unicritical: Some(u),
        }
    }

    pub fn from_homog(h: HomogMap) -> Self {
        FamilyMap {
            homog: h,
            unicritical: None,
        }
    }

    pub fn from_json(j: &MapJson) -> Result<Self, MapError> {
        match j {
            MapJson::Unicritical { a, c, b, d } => {
                let parse = |s: &str| {
                    parse_rational(s)
                        .ok_or_else(|| MapError::Invalid(format!("bad rational '{s}'")))
                };
                let u = UnicriticalMap::new(parse(a)?, parse(c)?, parse(b)?, *d)?;
                Ok(Self::from_unicritical(u))
            }
            MapJson::Homog { n, degree, coords } => {
                let nv = *n + 1;
                let mut polys = Vec::with_capacity(coords.len());
                for coord in coords {
                    let mut terms = Vec::with_capacity(coord.len());
                    for (exps_s, coeff_s) in coord {
                        let exps: Option<Vec<u32>> =
                            exps_s.split(',').map(|e| e.trim().parse().ok()).collect();
                        let exps = exps
                            .filter(|e| e.len() == nv)
                            .ok_or_else(|| MapError::Invalid(format!("bad exponents '{exps_s}'")))?;
                        let coeff: BigInt = coeff_s
                            .trim()
                            .parse()
                            .map_err(|_| MapError::Invalid(format!("bad coefficient '{coeff_s}'")))?;
                        terms.push(Monomial { exps, coeff });
                    }
                    polys.push(HomogPoly::new(nv, terms));
                }
                let h = HomogMap::new(*n, polys)?;
                if h.degree() != *degree {
                    return Err(MapError::Invalid(format!(
                        "declared degree {} but polynomials have degree {}",
                        degree,
                        h.degree()
                    )));
                }
                Ok(Self::from_homog(h))
            }
        }
    }

    pub fn to_json(&self) -> MapJson {
        if let Some(u) = &self.unicritical {
            MapJson::Unicritical {
                a: rational_to_string(&u.a),
                c: rational_to_string(&u.c),
                b: rational_to_string(&u.b),
                d: u.d,
            }
        } else {
            let h = &self.homog;
            MapJson::Homog {
                n: h.dim(),
                degree: h.degree(),
                coords: h
                    .coord_polys()
                    .iter()
                    .map(|c| {
                        c.terms()
                            .iter()
                            .map(|t| {
                                let exps: Vec<String> =
                                    t.exps.iter().map(|e| e.to_string()).collect();
                                (exps.join(","), t.coeff.to_string())
                            })
                            .collect()
                    })
                    .collect(),
            }
        }
    }
}

/// Convenience constructors for the families the examples keep reusing.
pub mod presets {
    use super::*;

    /// x^2 − x
    pub fn x2_minus_x() -> FamilyMap {
        let h = HomogMap::new(
            1,
            vec![
                HomogPoly::new(
                    2,
                    vec![
                        Monomial { exps: vec![2, 0], coeff: BigInt::one() },
                        Monomial { exps: vec![1, 1], coeff: -BigInt::one() },
                    ],
                ),
                HomogPoly::new(2, vec![Monomial { exps: vec![0, 2], coeff: BigInt::one() }]),
            ],
        )
        .unwrap();
        FamilyMap::from_homog(h)
    }

    /// 3x^2
    pub fn three_x2() -> FamilyMap {
        let h = HomogMap::new(
            1,
            vec![
                HomogPoly::new(2, vec![Monomial { exps: vec![2, 0], coeff: BigInt::from(3) }]),
                HomogPoly::new(2, vec![Monomial { exps: vec![0, 2], coeff: BigInt::one() }]),
            ],
        )
        .unwrap();
        FamilyMap::from_homog(h)
    }

    /// x^d + c
    pub fn power_plus(c: i64, d: u32) -> FamilyMap {
        FamilyMap::from_unicritical(UnicriticalMap::power_plus(c, d))
    }

    /// a·x^2 + b with integer a, b (critical point 0)
    pub fn quadratic(a: i64, b: i64) -> FamilyMap {
        FamilyMap::from_unicritical(
            UnicriticalMap::new(
                BigRational::from_integer(BigInt::from(a)),
                BigRational::zero(),
                BigRational::from_integer(BigInt::from(b)),
                2,
            )
            .unwrap(),
        )
    }

    /// The five-map family {±x², ±(x²−1), 2x²−1} from the finitely ramified
    /// tower example.
    pub fn five_map_family() -> Vec<FamilyMap> {
        vec![
            quadratic(1, 0),
            quadratic(-1, 0),
            quadratic(1, -1),
            quadratic(-1, 1),
            quadratic(2, -1),
        ]
    }

    /// Cremona involution [YZ : XZ : XY] on P^2.
    pub fn cremona() -> HomogMap {
        HomogMap::new(
            2,
            vec![
                HomogPoly::new(3, vec![Monomial { exps: vec![0, 1, 1], coeff: BigInt::one() }]),
                HomogPoly::new(3, vec![Monomial { exps: vec![1, 0, 1], coeff: BigInt::one() }]),
                HomogPoly::new(3, vec![Monomial { exps: vec![1, 1, 0], coeff: BigInt::one() }]),
            ],
        )
        .unwrap()
    }
}
