//! Galois towers of iterated quadratics: discriminant recursion, ramification
//! support, irreducibility and maximality certificates, stability hypotheses,
//! and the function-field criterion over Q(t).

use std::collections::BTreeSet;

use num_bigint::{BigInt, BigUint};
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::exact::{
    factor_partial, is_probable_prime, is_square_int, is_square_poly, FactorBudget, IntPoly,
    PolyOverT,
};
use crate::heights::{
    escape_certificate, family_constants, galois_escape_predicate, EscapeOutcome,
};
use crate::maps::{FamilyMap, ProjPointQ, UnicriticalMap};
use crate::random::MeasuredFamily;

#[derive(Debug, thiserror::Error)]
pub enum GaloisError {
    #[error("family is empty")]
    EmptyFamily,
    #[error("map {0} is not quadratic")]
    NotQuadratic(usize),
    #[error("map {0} has non-integral coefficients")]
    NonIntegral(usize),
    #[error("maps do not share a critical point")]
    MixedCriticalPoint,
    #[error("sequence prefix too short: need {need}, have {have}")]
    PrefixTooShort { need: usize, have: usize },
    #[error("map index {0} out of range")]
    BadIndex(usize),
    #[error("inseparable tower: critical value vanishes at level {0}")]
    InseparableTower(usize),
    #[error("factoring failed: {0}")]
    Factor(String),
}

/// A family of quadratics a(x−c)² + b over Z with a common critical point c.
#[derive(Debug, Clone)]
pub struct QuadFamily {
    maps: Vec<UnicriticalMap>,
    leads: Vec<BigInt>,
    crit: BigInt,
}

impl QuadFamily {
    pub fn new(maps: Vec<UnicriticalMap>) -> Result<Self, GaloisError> {
        if maps.is_empty() {
            return Err(GaloisError::EmptyFamily);
        }
        for (i, m) in maps.iter().enumerate() {
            if m.d != 2 {
                return Err(GaloisError::NotQuadratic(i));
            }
            if !m.is_integral() {
                return Err(GaloisError::NonIntegral(i));
            }
            if m.c != maps[0].c {
                return Err(GaloisError::MixedCriticalPoint);
            }
        }
        let leads = maps.iter().map(|m| m.a.to_integer()).collect();
        let crit = maps[0].c.to_integer();
        Ok(QuadFamily { maps, leads, crit })
    }

    /// {x² + c_i} for the given integer constants.
    pub fn power_plus(cs: &[i64]) -> Self {
        let maps = cs
            .iter()
            .map(|&c| UnicriticalMap::power_plus(c, 2))
            .collect();
        Self::new(maps).unwrap()
    }

    pub fn maps(&self) -> &[UnicriticalMap] {
        &self.maps
    }

    pub fn critical_point(&self) -> &BigInt {
        &self.crit
    }

    fn check_prefix(&self, prefix: &[usize], n_max: usize) -> Result<(), GaloisError> {
        if prefix.len() < n_max {
            return Err(GaloisError::PrefixTooShort {
                need: n_max,
                have: prefix.len(),
            });
        }
        match prefix.iter().find(|&&i| i >= self.maps.len()) {
            Some(&i) => Err(GaloisError::BadIndex(i)),
            None => Ok(()),
        }
    }

    fn apply(&self, i: usize, x: &BigInt) -> BigInt {
        let m = &self.maps[i];
        let t = x - &self.crit;
        m.a.to_integer() * &t * &t + m.b.to_integer()
    }

    /// Right-iteration critical orbit: γ_m⁺(c) = θ_1∘…∘θ_m(c) for 1 ≤ m ≤ n_max.
    pub fn critical_values(
        &self,
        prefix: &[usize],
        n_max: usize,
    ) -> Result<Vec<BigInt>, GaloisError> {
        self.check_prefix(prefix, n_max)?;
        let mut out = Vec::with_capacity(n_max);
        for m in 1..=n_max {
            let mut x = self.crit.clone();
            for &i in prefix[..m].iter().rev() {
                x = self.apply(i, &x);
            }
            out.push(x);
        }
        Ok(out)
    }

    /// γ_n⁺ as an exact integer polynomial (composition θ_1∘…∘θ_n).
    pub fn compose_poly(&self, prefix: &[usize], n: usize) -> Result<IntPoly, GaloisError> {
        self.check_prefix(prefix, n)?;
        let mut f = IntPoly::var();
        for &i in &prefix[..n] {
            let theta = self.maps[i].to_int_poly().expect("integral quadratic");
            f = f.compose(&theta);
        }
        Ok(f)
    }
}

/// One level of the tower: leading term ℓ_{γ,n}, degree 2ⁿ, the critical
/// value γ_n⁺(c), and the discriminant magnitude |Δ_{γ,n}|.
#[derive(Debug, Clone)]
pub struct TowerLevel {
    pub n: usize,
    pub leading: BigInt,
    pub degree_log2: u32,
    pub critical_value: BigInt,
    pub abs_disc: BigUint,
    pub separable: bool,
}

/// Discriminant recursion with Δ_0 = 1, ℓ_0 = 1, d_0 = 1:
/// |Δ_n| = 2^{2ⁿ} · |ℓ_{n−1}| · |ℓ(θ_n)|^{2^{n−1}(2ⁿ−1)} · |γ_n⁺(c)| · Δ_{n−1}².
/// The sign is left undetermined; magnitudes only. Δ = 0 once a critical
/// value vanishes (inseparable from that level on).
pub fn discriminant_chain(
    family: &QuadFamily,
    prefix: &[usize],
    n_max: usize,
) -> Result<Vec<TowerLevel>, GaloisError> {
    let crit_values = family.critical_values(prefix, n_max)?;
    let mut levels: Vec<TowerLevel> = Vec::with_capacity(n_max);
    let mut lead_prev = BigInt::one();
    let mut disc_prev = BigUint::one();
    let mut separable = true;
    for n in 1..=n_max {
        let a_n = &family.leads[prefix[n - 1]];
        let b_n = &crit_values[n - 1];
        let e_half: u32 = 1u32 << (n - 1);
        let lead = a_n.pow(e_half) * &lead_prev;
        if b_n.is_zero() {
            separable = false;
        }
        let abs_disc = if separable {
            let two_pow = BigUint::one() << (1usize << n);
            let lead_factor = e_half as u64 * ((1u64 << n) - 1);
            two_pow
                * lead_prev.magnitude()
                * a_n.magnitude().pow(u32::try_from(lead_factor).expect("depth too large"))
                * b_n.magnitude()
                * (&disc_prev * &disc_prev)
        } else {
            BigUint::zero()
        };
        levels.push(TowerLevel {
            n,
            leading: lead.clone(),
            degree_log2: n as u32,
            critical_value: b_n.clone(),
            abs_disc: abs_disc.clone(),
            separable,
        });
        lead_prev = lead;
        disc_prev = abs_disc;
    }
    Ok(levels)
}

/// Prime support of the ramification locus through level n: primes dividing
/// the degrees (2), a leading term ℓ(θ_m), or a critical value γ_m⁺(c).
#[derive(Debug, Clone, Serialize)]
pub struct SupportReport {
    pub primes: BTreeSet<BigUint>,
    /// False when some factorization gave up on a cofactor; the support is
    /// then a subset of the true one.
    pub complete: bool,
}

pub fn ramification_support(
    family: &QuadFamily,
    prefix: &[usize],
    n: usize,
    budget: &FactorBudget,
) -> Result<SupportReport, GaloisError> {
    let crit_values = family.critical_values(prefix, n)?;
    if let Some(m) = crit_values.iter().position(|v| v.is_zero()) {
        return Err(GaloisError::InseparableTower(m + 1));
    }
    let mut primes = BTreeSet::new();
    primes.insert(BigUint::from(2u32));
    let mut complete = true;
    let mut absorb = |v: &BigInt| -> Result<(), GaloisError> {
        if v.magnitude().is_one() {
            return Ok(());
        }
        let f = factor_partial(v, budget).map_err(|e| GaloisError::Factor(e.to_string()))?;
        for (p, _) in f.found {
            primes.insert(p);
        }
        if !f.complete {
            complete = false;
        }
        Ok(())
    };
    for &i in &prefix[..n] {
        absorb(&family.leads[i])?;
    }
    for v in &crit_values {
        absorb(v)?;
    }
    Ok(SupportReport { primes, complete })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case", tag = "status")]
pub enum IrreducibilityVerdict {
    Certified,
    /// The square test failed at this chain index; the criterion is
    /// sufficient only — no reducibility claim.
    Inconclusive { first_failing: usize },
}

/// Certified when −ℓ_{γ,1}γ_1⁺(c), ℓ_{γ,1}γ_2⁺(c), …, ℓ_{γ,1}γ_n⁺(c) are all
/// non-squares in Q (the minus sign on index 1 only).
pub fn irreducibility_certificate(
    family: &QuadFamily,
    prefix: &[usize],
    n: usize,
) -> Result<IrreducibilityVerdict, GaloisError> {
    let crit_values = family.critical_values(prefix, n)?;
    let l1 = &family.leads[prefix[0]];
    for (m, b) in crit_values.iter().enumerate() {
        let mut v = l1 * b;
        if m == 0 {
            v = -v;
        }
        if is_square_int(&v) {
            return Ok(IrreducibilityVerdict::Inconclusive { first_failing: m + 1 });
        }
    }
    Ok(IrreducibilityVerdict::Certified)
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct MaxWitness {
    #[serde(with = "biguint_decimal")]
    pub prime: BigUint,
    pub valuation: u32,
}

/// Decimal-string (de)serialization for JSON-facing prime witnesses.
mod biguint_decimal {
    use num_bigint::BigUint;
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(v: &BigUint, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&v.to_string())
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<BigUint, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case", tag = "status")]
pub enum MaximalityVerdict {
    CertifiedMaximal { witness: MaxWitness },
    /// No usable prime found; the valuation criterion is sufficient only.
    Undetermined,
    Inseparable,
}

/// Searches γ_n⁺(c) for a prime p with: p odd, p ∤ ℓ(θ_m) for m ≤ n,
/// p ∤ γ_m⁺(c) for m < n, and v_p(γ_n⁺(c)) odd. Finding one certifies the
/// maximal step K_{γ,n}/K_{γ,n−1}.
pub fn maximality_certificate(
    family: &QuadFamily,
    prefix: &[usize],
    n: usize,
    budget: &FactorBudget,
) -> Result<MaximalityVerdict, GaloisError> {
    let crit_values = family.critical_values(prefix, n)?;
    if crit_values.iter().any(|v| v.is_zero()) {
        return Ok(MaximalityVerdict::Inseparable);
    }
    let f = factor_partial(&crit_values[n - 1], budget)
        .map_err(|e| GaloisError::Factor(e.to_string()))?;
    let two = BigUint::from(2u32);
    'cand: for (p, e) in &f.found {
        if e % 2 == 0 || *p == two {
            continue;
        }
        let p_int = BigInt::from(p.clone());
        for &i in &prefix[..n] {
            if (&family.leads[i] % &p_int).is_zero() {
                continue 'cand;
            }
        }
        for b in &crit_values[..n - 1] {
            if (b % &p_int).is_zero() {
                continue 'cand;
            }
        }
        return Ok(MaximalityVerdict::CertifiedMaximal {
            witness: MaxWitness {
                prime: p.clone(),
                valuation: *e,
            },
        });
    }
    Ok(MaximalityVerdict::Undetermined)
}

/// Re-verifies a recorded witness from scratch: primality, the divisibility
/// conditions, and the odd valuation by direct division.
pub fn verify_maximality_witness(
    family: &QuadFamily,
    prefix: &[usize],
    n: usize,
    witness: &MaxWitness,
) -> Result<bool, GaloisError> {
    let crit_values = family.critical_values(prefix, n)?;
    let p = &witness.prime;
    if *p == BigUint::from(2u32) || !is_probable_prime(p, 40) {
        return Ok(false);
    }
    let p_int = BigInt::from(p.clone());
    for &i in &prefix[..n] {
        if (&family.leads[i] % &p_int).is_zero() {
            return Ok(false);
        }
    }
    for b in &crit_values[..n - 1] {
        if (b % &p_int).is_zero() {
            return Ok(false);
        }
    }
    let mut v = 0u32;
    let mut rest = crit_values[n - 1].clone();
    while !rest.is_zero() && (&rest % &p_int).is_zero() {
        rest /= &p_int;
        v += 1;
    }
    Ok(v % 2 == 1 && v == witness.valuation)
}

/// Hypothesis report for the stability theorem on S = {x² + c_i}: (1) some
/// −c_i is a non-square integer, (2) 0 is an escape point. The theorem's
/// probability constant is non-effective and never computed.
#[derive(Debug, Clone, Serialize)]
pub struct StabilityReport {
    pub distinct: bool,
    pub some_neg_c_nonsquare: bool,
    pub escape_inequality: bool,
    pub escape_level: Option<usize>,
    pub applies: bool,
}

pub fn stability_hypotheses(cs: &[BigInt], r_max: usize) -> StabilityReport {
    let mut sorted = cs.to_vec();
    sorted.sort();
    sorted.dedup();
    let distinct = sorted.len() == cs.len();
    let some_neg_c_nonsquare = cs.iter().any(|c| !is_square_int(&(-c)));
    let params: Vec<(BigInt, u32)> = cs.iter().map(|c| (c.clone(), 2)).collect();
    let escape_inequality = galois_escape_predicate(&params);
    let escape_level = stability_escape_level(cs, r_max);
    StabilityReport {
        distinct,
        some_neg_c_nonsquare,
        escape_inequality,
        escape_level,
        applies: distinct
            && some_neg_c_nonsquare
            && (escape_inequality || escape_level.is_some()),
    }
}

fn stability_escape_level(cs: &[BigInt], r_max: usize) -> Option<usize> {
    let maps: Vec<FamilyMap> = cs
        .iter()
        .map(|c| {
            let mut u = UnicriticalMap::power_plus(0, 2);
            u.b = crate::exact::RationalValue::from_integer(c.clone());
            FamilyMap::from_unicritical(u)
        })
        .collect();
    let family = MeasuredFamily::uniform(maps).ok()?;
    let constants = family_constants(&family, &vec![None; cs.len()]).ok()?;
    let zero = ProjPointQ::from_i64(&[0, 1]);
    match escape_certificate(&family, &constants, &zero, r_max, 1_000_000) {
        Ok(EscapeOutcome::Certified(cert)) => Some(cert.level),
        _ => None,
    }
}

/// Quadratic family x² + c_i(t) over Q(t), c_i ∈ Z[t].
#[derive(Debug, Clone)]
pub struct FFQuadFamily {
    cs: Vec<PolyOverT>,
}

impl FFQuadFamily {
    pub fn new(cs: Vec<PolyOverT>) -> Result<Self, GaloisError> {
        if cs.is_empty() {
            return Err(GaloisError::EmptyFamily);
        }
        Ok(FFQuadFamily { cs })
    }

    pub fn constants(&self) -> &[PolyOverT] {
        &self.cs
    }

    /// γ_m⁺(0) ∈ Z[t] for 1 ≤ m ≤ n_max (right iteration, recomputed per m).
    pub fn critical_values(
        &self,
        prefix: &[usize],
        n_max: usize,
    ) -> Result<Vec<PolyOverT>, GaloisError> {
        if prefix.len() < n_max {
            return Err(GaloisError::PrefixTooShort {
                need: n_max,
                have: prefix.len(),
            });
        }
        if let Some(&i) = prefix.iter().find(|&&i| i >= self.cs.len()) {
            return Err(GaloisError::BadIndex(i));
        }
        let mut out = Vec::with_capacity(n_max);
        for m in 1..=n_max {
            let mut v = IntPoly::zero();
            for &i in prefix[..m].iter().rev() {
                v = v.mul(&v).add(&self.cs[i]);
            }
            out.push(v);
        }
        Ok(out)
    }
}

/// Per-map report for the function-field criterion: c ∈ Z[t] with ℓ(c) = ±1,
/// deg c = d > 0 common to the family, and d/dt(c̄) = 1 over F_2.
#[derive(Debug, Clone, Serialize)]
pub struct FFConditionReport {
    pub index: usize,
    pub unit_leading: bool,
    pub degree: usize,
    pub positive_degree: bool,
    pub derivative_mod2_is_one: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct FFCheckReport {
    pub per_map: Vec<FFConditionReport>,
    pub common_degree: Option<usize>,
    pub applies: bool,
}

pub fn function_field_check(family: &FFQuadFamily) -> FFCheckReport {
    let per_map: Vec<FFConditionReport> = family
        .cs
        .iter()
        .enumerate()
        .map(|(index, c)| {
            let lead = c.leading();
            let dbar = c.reduce_mod2().derivative().reduce_mod2();
            FFConditionReport {
                index,
                unit_leading: lead.magnitude().is_one(),
                degree: c.degree(),
                positive_degree: c.degree() > 0 && !c.is_zero(),
                derivative_mod2_is_one: dbar.is_constant() && dbar.coeff(0).is_one(),
            }
        })
        .collect();
    let d0 = per_map.first().map(|r| r.degree);
    let common = per_map.iter().all(|r| Some(r.degree) == d0);
    let all_ok = per_map
        .iter()
        .all(|r| r.unit_leading && r.positive_degree && r.derivative_mod2_is_one);
    FFCheckReport {
        common_degree: if common { d0 } else { None },
        applies: common && all_ok,
        per_map,
    }
}

/// Per-level verification over Q(t): deg γ_n⁺(0) = 2^{n−1}d, squarefree
/// (gcd with the derivative is constant), unit leading coefficient, and a
/// new irreducible factor not dividing any earlier critical value.
#[derive(Debug, Clone, Serialize)]
pub struct FFLevelReport {
    pub n: usize,
    pub degree_ok: bool,
    pub squarefree: bool,
    pub unit_leading: bool,
    pub new_factor: bool,
}

impl FFLevelReport {
    pub fn violation(&self) -> Option<&'static str> {
        if !self.degree_ok {
            Some("degree")
        } else if !self.squarefree {
            Some("squarefree")
        } else if !self.unit_leading {
            Some("leading")
        } else if !self.new_factor {
            Some("new-factor")
        } else {
            None
        }
    }
}

pub fn ff_tower_verify(
    family: &FFQuadFamily,
    prefix: &[usize],
    n_max: usize,
) -> Result<Vec<FFLevelReport>, GaloisError> {
    let values = family.critical_values(prefix, n_max)?;
    let d = family.cs[0].degree();
    let mut product = IntPoly::constant(BigInt::one());
    let mut out = Vec::with_capacity(n_max);
    for (idx, g) in values.iter().enumerate() {
        let n = idx + 1;
        let expected = (1usize << (n - 1)) * d;
        let degree_ok = g.degree() == expected && !g.is_zero();
        let squarefree = !g.is_zero() && g.gcd(&g.derivative()).is_constant();
        let unit_leading = g.leading().magnitude().is_one();
        let new_factor = !g.is_zero() && g.degree() > g.gcd(&product).degree();
        out.push(FFLevelReport {
            n,
            degree_ok,
            squarefree,
            unit_leading,
            new_factor,
        });
        product = product.mul(g);
    }
    Ok(out)
}

/// JSON-facing tower summary: per level the discriminant magnitude, prime
/// support, and the two certificates.
#[derive(Debug, Clone, Serialize)]
pub struct TowerLevelReport {
    pub n: usize,
    pub abs_disc: String,
    pub critical_value: String,
    pub separable: bool,
    pub support: Vec<String>,
    pub support_complete: bool,
    pub irreducibility: IrreducibilityVerdict,
    pub maximality: MaximalityVerdict,
}

#[derive(Debug, Clone, Serialize)]
pub struct TowerReport {
    pub prefix: Vec<usize>,
    pub levels: Vec<TowerLevelReport>,
}

pub fn tower_report(
    family: &QuadFamily,
    prefix: &[usize],
    n_max: usize,
    budget: &FactorBudget,
) -> Result<TowerReport, GaloisError> {
    let chain = discriminant_chain(family, prefix, n_max)?;
    let mut levels = Vec::with_capacity(n_max);
    for level in &chain {
        let n = level.n;
        let (support, support_complete) = if level.separable {
            let s = ramification_support(family, prefix, n, budget)?;
            (
                s.primes.iter().map(|p| p.to_string()).collect(),
                s.complete,
            )
        } else {
            (Vec::new(), false)
        };
        let irreducibility = irreducibility_certificate(family, prefix, n)?;
        let maximality = maximality_certificate(family, prefix, n, budget)?;
        levels.push(TowerLevelReport {
            n,
            abs_disc: level.abs_disc.to_string(),
            critical_value: level.critical_value.to_string(),
            separable: level.separable,
            support,
            support_complete,
            irreducibility,
            maximality,
        });
    }
    Ok(TowerReport {
        prefix: prefix[..n_max].to_vec(),
        levels,
    })
}

/// Frozen square-test chain for the irreducibility certificate, for display.
pub fn irreducibility_chain(
    family: &QuadFamily,
    prefix: &[usize],
    n: usize,
) -> Result<Vec<BigInt>, GaloisError> {
    let crit_values = family.critical_values(prefix, n)?;
    let l1 = &family.leads[prefix[0]];
    Ok(crit_values
        .iter()
        .enumerate()
        .map(|(m, b)| if m == 0 { -(l1 * b) } else { l1 * b })
        .collect())
}

/// FF-side irreducibility via the same chain with polynomial square tests.
pub fn ff_irreducibility_certificate(
    family: &FFQuadFamily,
    prefix: &[usize],
    n: usize,
) -> Result<IrreducibilityVerdict, GaloisError> {
    let values = family.critical_values(prefix, n)?;
    for (m, b) in values.iter().enumerate() {
        let v = if m == 0 { b.neg() } else { b.clone() };
        if v.is_zero() {
            return Ok(IrreducibilityVerdict::Inconclusive { first_failing: m + 1 });
        }
        if is_square_poly(&v).unwrap_or(false) {
            return Ok(IrreducibilityVerdict::Inconclusive { first_failing: m + 1 });
        }
    }
    Ok(IrreducibilityVerdict::Certified)
}
