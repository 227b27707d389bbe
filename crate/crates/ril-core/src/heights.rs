//! Height control for map families: the constants d_S, C_S, B_S, the Tate
//! telescoping bound, escape-point certification, total-orbit finiteness, and
//! orbit counting along sampled trajectories.

use std::collections::{HashSet, VecDeque};

use num_bigint::{BigInt, BigUint};
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::logreal::{cmp_scaled, LogReal};
use crate::maps::{FamilyMap, MapError, ProjPointQ};
use crate::random::{HeightTrace, MeasuredFamily};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum HeightError {
    #[error("family contains a degree-1 map, so it is not height controlled")]
    NotHeightControlled,
    #[error("no closed-form height constant for map {0} and no override supplied")]
    MissingConstant(usize),
    #[error("enumeration budget exceeded ({0} evaluations)")]
    BudgetExceeded(usize),
    #[error("trace does not reach heights beyond the counting bound")]
    TraceTooShort,
    #[error("sandwich requires h(P) > B_S")]
    SandwichInapplicable,
    #[error(transparent)]
    Map(#[from] MapError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ConstantSource {
    ClosedFormUnicritical,
    UserSupplied,
}

/// The height-control data of a family: d_S = min degree, C_S = max per-map
/// constant, B_S = C_S/(d_S − 1).
#[derive(Debug, Clone)]
pub struct FamilyConstants {
    pub d_s: u32,
    pub c_s: LogReal,
    pub b_s: LogReal,
    pub sources: Vec<ConstantSource>,
}

/// C(x^d + c) = ln|2c| for integer c ≠ 0; pure power maps have exact height
/// multiplicativity over Q, so C = 0.
pub fn height_constant_unicritical(c: &BigInt, _d: u32) -> LogReal {
    if c.is_zero() {
        LogReal::zero()
    } else {
        LogReal::ln_abs(&(c * 2))
    }
}

/// Computes FamilyConstants. Each map must either have the closed form
/// x^d + c with integer c, or carry a user-supplied constant in `overrides`.
pub fn family_constants(
    family: &MeasuredFamily,
    overrides: &[Option<LogReal>],
) -> Result<FamilyConstants, HeightError> {
    let mut d_s = u32::MAX;
    let mut c_s = LogReal::zero();
    let mut sources = Vec::with_capacity(family.maps().len());
    for (i, m) in family.maps().iter().enumerate() {
        let d = m.homog.degree();
        if d < 2 {
            return Err(HeightError::NotHeightControlled);
        }
        d_s = d_s.min(d);
        let (c_phi, source) = match overrides.get(i).cloned().flatten() {
            Some(c) => (c, ConstantSource::UserSupplied),
            None => {
                let u = m
                    .unicritical
                    .as_ref()
                    .filter(|u| u.a.is_one() && u.c.is_zero() && u.b.is_integer())
                    .ok_or(HeightError::MissingConstant(i))?;
                (
                    height_constant_unicritical(&u.b.to_integer(), d),
                    ConstantSource::ClosedFormUnicritical,
                )
            }
        };
        if c_s.le(&c_phi) {
            c_s = c_phi.clone();
        }
        sources.push(source);
    }
    let b_s = c_s.div_u32(d_s - 1);
    Ok(FamilyConstants {
        d_s,
        c_s,
        b_s,
        sources,
    })
}

/// Empirical fallback when no closed form exists: the max observed gap
/// |h(φ(P)) − d·h(P)| over sampled small points. This is an estimate, not a
/// certificate — it can only under-report the true constant.
pub fn estimate_height_constant(map: &FamilyMap, coord_bound: i64) -> f64 {
    let d = f64::from(map.homog.degree());
    let mut worst = 0.0f64;
    for num in -coord_bound..=coord_bound {
        for den in 1..=coord_bound {
            let p = match ProjPointQ::new(vec![BigInt::from(num), BigInt::from(den)]) {
                Ok(p) => p,
                Err(_) => continue,
            };
            if let Ok(q) = map.homog.evaluate(&p) {
                let gap = (q.height().value() - d * p.height().value()).abs();
                worst = worst.max(gap);
            }
        }
    }
    worst
}

/// Applies the composition indexed by `rho` (outermost first) to Q.
pub fn apply_string(
    family: &MeasuredFamily,
    rho: &[usize],
    q: &ProjPointQ,
) -> Result<(ProjPointQ, u64), MapError> {
    let mut cur = q.clone();
    let mut deg: u64 = 1;
    for &i in rho.iter().rev() {
        cur = family.maps()[i].homog.evaluate(&cur)?;
        deg *= u64::from(family.maps()[i].homog.degree());
    }
    Ok((cur, deg))
}

/// |h(ρ(Q))/deg ρ − h(Q)|, exact inputs, float output.
pub fn tate_gap(
    family: &MeasuredFamily,
    rho: &[usize],
    q: &ProjPointQ,
) -> Result<f64, HeightError> {
    let (val, deg) = apply_string(family, rho, q)?;
    Ok((val.height().value() / deg as f64 - q.height().value()).abs())
}

/// Checks the telescoping bound gap ≤ B_S. Compared in floats with a 1e-12
/// margin; near-ties escalate to the exact cross-power comparison
/// M1^(d_S−1) vs (M0^(d_S−1)·K)^deg with integer arithmetic.
pub fn tate_bound_holds(
    family: &MeasuredFamily,
    constants: &FamilyConstants,
    rho: &[usize],
    q: &ProjPointQ,
) -> Result<bool, HeightError> {
    let (val, deg) = apply_string(family, rho, q)?;
    let h1 = val.height().value();
    let h0 = q.height().value();
    let b = constants.b_s.value();
    let gap = (h1 / deg as f64 - h0).abs();
    if gap <= b - 1e-12 {
        return Ok(true);
    }
    if gap >= b + 1e-12 {
        return Ok(false);
    }
    // Near tie: h(ρQ) = ln M1, h(Q) = ln M0, B_S = ln(K)/(d_S−1). The bound is
    // |ln M1 − D ln M0| ≤ D ln K/(d_S−1), i.e. integer comparisons of
    // M1^e vs M0^(De)·K^D and M0^(De) vs M1^e·K^D with e = d_S−1.
    let e = constants.d_s - 1;
    let m1 = max_abs_coord(&val);
    let m0 = max_abs_coord(q);
    let k = exact_c_value(constants).ok_or(HeightError::MissingConstant(0))?;
    let d32 = u32::try_from(deg).map_err(|_| HeightError::BudgetExceeded(0))?;
    let lhs = m1.pow(e);
    let rhs = m0.pow(d32 * e) * k.pow(d32);
    let upper_ok = lhs <= rhs;
    let lower_ok = m0.pow(d32 * e) <= m1.pow(e) * k.pow(d32);
    Ok(upper_ok && lower_ok)
}

fn max_abs_coord(p: &ProjPointQ) -> BigUint {
    p.coords()
        .iter()
        .map(|c| c.abs().to_biguint().unwrap())
        .max()
        .unwrap()
}

/// e^{C_S} as an exact integer when C_S = ln|2c| came from the closed form.
fn exact_c_value(constants: &FamilyConstants) -> Option<BigUint> {
    if constants.c_s.value() == 0.0 {
        return Some(BigUint::one());
    }
    constants.c_s.exact_integer()
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct EscapeWitness {
    /// Map indices of the string, outermost first.
    pub string: Vec<usize>,
    pub value: String,
    pub height: f64,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct EscapeCertificate {
    pub level: usize,
    pub b_s: f64,
    pub witnesses: Vec<EscapeWitness>,
    /// B_{S,P,1} = min over level-r strings of (h(g(P)) − B_S)/deg(g) > 0.
    pub ratio_lower: f64,
    /// B_{S,P,2} = h(P) + B_S.
    pub ratio_upper: f64,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(tag = "outcome", rename_all = "kebab-case")]
pub enum EscapeOutcome {
    Certified(EscapeCertificate),
    NotCertified { r_max: usize },
}

/// Finds the least r ≤ r_max such that every length-r index string g has
/// h(g(P)) > B_S strictly (level 0 = the identity). Enumerates all s^r
/// strings; dedup to functions would only remove redundant checks.
pub fn escape_certificate(
    family: &MeasuredFamily,
    constants: &FamilyConstants,
    p: &ProjPointQ,
    r_max: usize,
    eval_budget: usize,
) -> Result<EscapeOutcome, HeightError> {
    let s = family.maps().len();
    let mut level: Vec<(Vec<usize>, ProjPointQ)> = vec![(vec![], p.clone())];
    let mut spent = 0usize;
    for r in 0..=r_max {
        let all_escape = level
            .iter()
            .all(|(_, q)| constants.b_s.lt(&q.height()));
        if all_escape {
            let witnesses: Vec<EscapeWitness> = level
                .iter()
                .map(|(g, q)| EscapeWitness {
                    string: g.clone(),
                    value: q.render(),
                    height: q.height().value(),
                })
                .collect();
            let b = constants.b_s.value();
            let ratio_lower = level
                .iter()
                .map(|(g, q)| {
                    let deg: f64 = g
                        .iter()
                        .map(|&i| f64::from(family.maps()[i].homog.degree()))
                        .product();
                    (q.height().value() - b) / deg
                })
                .fold(f64::INFINITY, f64::min);
            return Ok(EscapeOutcome::Certified(EscapeCertificate {
                level: r,
                b_s: b,
                witnesses,
                ratio_lower,
                ratio_upper: p.height().value() + b,
            }));
        }
        if r == r_max {
            break;
        }
        spent += level.len() * s;
        if spent > eval_budget {
            return Err(HeightError::BudgetExceeded(eval_budget));
        }
        let mut next = Vec::with_capacity(level.len() * s);
        for (g, q) in &level {
            for (i, m) in family.maps().iter().enumerate() {
                let v = m.homog.evaluate(q)?;
                let mut ng = vec![i];
                ng.extend_from_slice(g);
                next.push((ng, v));
            }
        }
        level = next;
    }
    Ok(EscapeOutcome::NotCertified { r_max })
}

/// Sufficient escape condition for 0 under an integer unicritical family
/// {x^{d_i} + c_i}: |c_i^{d_j} + c_j| ≥ 2·max|c_i| for all i, j.
pub fn galois_escape_predicate(params: &[(BigInt, u32)]) -> bool {
    if params.iter().any(|(c, _)| c.is_zero()) {
        return false;
    }
    let max_c: BigInt = params.iter().map(|(c, _)| c.abs()).max().unwrap();
    let bound = &max_c * 2;
    for (c_i, _) in params {
        for (c_j, d_j) in params {
            let v = c_i.pow(*d_j) + c_j;
            if v.abs() < bound {
                return false;
            }
        }
    }
    true
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(tag = "verdict", rename_all = "kebab-case")]
pub enum OrbitClosureResult {
    Finite {
        points: Vec<String>,
    },
    InfiniteCertified {
        witness_string: Vec<usize>,
        value: String,
        height: f64,
    },
    Unknown {
        budget: usize,
    },
}

/// Breadth-first closure of P under every map. Finite when the closure
/// stabilizes; InfiniteCertified as soon as a reached value has height
/// strictly above B_S (heights then grow without bound along that branch);
/// Unknown once the budget runs out.
pub fn total_orbit_closure(
    family: &MeasuredFamily,
    constants: &FamilyConstants,
    p: &ProjPointQ,
    point_budget: usize,
    depth_budget: usize,
) -> Result<OrbitClosureResult, HeightError> {
    let mut seen: HashSet<ProjPointQ> = HashSet::new();
    let mut queue: VecDeque<(ProjPointQ, Vec<usize>, usize)> = VecDeque::new();
    seen.insert(p.clone());
    queue.push_back((p.clone(), vec![], 0));
    while let Some((q, path, depth)) = queue.pop_front() {
        if constants.b_s.lt(&q.height()) {
            return Ok(OrbitClosureResult::InfiniteCertified {
                witness_string: path,
                value: q.render(),
                height: q.height().value(),
            });
        }
        if depth >= depth_budget {
            return Ok(OrbitClosureResult::Unknown {
                budget: point_budget,
            });
        }
        for (i, m) in family.maps().iter().enumerate() {
            let v = m.homog.evaluate(&q)?;
            if seen.insert(v.clone()) {
                if seen.len() > point_budget {
                    return Ok(OrbitClosureResult::Unknown {
                        budget: point_budget,
                    });
                }
                let mut np = vec![i];
                np.extend_from_slice(&path);
                queue.push_back((v, np, depth + 1));
            }
        }
    }
    let mut points: Vec<String> = seen.iter().map(|p| p.render()).collect();
    points.sort();
    Ok(OrbitClosureResult::Finite { points })
}

/// Counts trace steps n with h(γ_n(P)) ≤ B. An index count: it equals the
/// point count when `distinctness_property` holds.
pub fn orbit_height_count(trace: &HeightTrace, b: f64) -> Result<usize, HeightError> {
    let last = trace
        .records
        .last()
        .ok_or(HeightError::TraceTooShort)?;
    let ln_b = b.ln();
    if last.ln_height <= ln_b {
        return Err(HeightError::TraceTooShort);
    }
    Ok(trace
        .records
        .iter()
        .filter(|r| r.ln_height <= ln_b)
        .count())
}

/// Least-squares slope of count(B) against ln B over a geometric ladder of
/// bounds; tends to 1/ln δ for left orbits.
pub fn slope_estimate(trace: &HeightTrace, ladder: &[f64]) -> Result<f64, HeightError> {
    let mut xs = Vec::new();
    let mut ys = Vec::new();
    for &b in ladder {
        let count = orbit_height_count(trace, b)?;
        xs.push(b.ln());
        ys.push(count as f64);
    }
    let n = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let cov: f64 = xs.iter().zip(&ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let var: f64 = xs.iter().map(|x| (x - mx) * (x - mx)).sum();
    Ok(cov / var)
}

/// h(P) > 3·B_S, exactly: then all left/right orbit points are pairwise
/// distinct and index counts equal point counts.
pub fn distinctness_property(constants: &FamilyConstants, p: &ProjPointQ) -> bool {
    cmp_scaled(&BigUint::from(3u32), &constants.b_s, &p.height()) == std::cmp::Ordering::Less
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(tag = "verdict", rename_all = "kebab-case")]
pub enum PositivityVerdict {
    /// s ≥ 3 distinct integer parameters: the cited quadratic-family result
    /// applies (not independently verified here).
    Applicable { s: usize },
    NotApplicable { s: usize },
    RejectedRepeatedParameter,
}

/// Informational check for families {x² + c_i} with distinct integer c_i.
pub fn quadratic_positivity_predicate(cs: &[BigInt]) -> PositivityVerdict {
    let mut sorted = cs.to_vec();
    sorted.sort();
    sorted.dedup();
    if sorted.len() != cs.len() {
        return PositivityVerdict::RejectedRepeatedParameter;
    }
    if cs.len() >= 3 {
        PositivityVerdict::Applicable { s: cs.len() }
    } else {
        PositivityVerdict::NotApplicable { s: cs.len() }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::maps::presets;
    use crate::random::{
        left_orbit, sample_sequence, Engine, MeasuredFamily, SequenceSample, EXACT_CAP_DEFAULT,
    };

    fn fam(maps: Vec<FamilyMap>) -> MeasuredFamily {
        MeasuredFamily::uniform(maps).unwrap()
    }

    #[test]
    fn unicritical_constants() {
        assert!((height_constant_unicritical(&BigInt::from(3), 2).value() - 6f64.ln()).abs() < 1e-15);
        assert_eq!(height_constant_unicritical(&BigInt::zero(), 5).value(), 0.0);
        assert!((height_constant_unicritical(&BigInt::from(-1), 2).value() - 2f64.ln()).abs() < 1e-15);
    }

    #[test]
    fn family_constants_examples() {
        let f = fam(vec![presets::power_plus(3, 2), presets::power_plus(5, 2)]);
        let c = family_constants(&f, &[None, None]).unwrap();
        assert_eq!(c.d_s, 2);
        assert!((c.c_s.value() - 10f64.ln()).abs() < 1e-15);
        assert!((c.b_s.value() - 10f64.ln()).abs() < 1e-15);

        let f = fam(vec![presets::power_plus(1, 2), presets::power_plus(-1, 3)]);
        let c = family_constants(&f, &[None, None]).unwrap();
        assert_eq!(c.d_s, 2);
        assert!((c.b_s.value() - 2f64.ln()).abs() < 1e-15);

        // degree-1 map: identity as homog map
        use crate::maps::{FamilyMap, HomogMap, HomogPoly, Monomial};
        let id = HomogMap::new(
            1,
            vec![
                HomogPoly::new(2, vec![Monomial { exps: vec![1, 0], coeff: BigInt::one() }]),
                HomogPoly::new(2, vec![Monomial { exps: vec![0, 1], coeff: BigInt::one() }]),
            ],
        )
        .unwrap();
        let f = fam(vec![FamilyMap::from_homog(id), presets::power_plus(1, 2)]);
        assert_eq!(
            family_constants(&f, &[None, None]).unwrap_err(),
            HeightError::NotHeightControlled
        );

        // no closed form without override; override fixes it
        let f = fam(vec![presets::quadratic(2, -1)]);
        assert_eq!(
            family_constants(&f, &[None]).unwrap_err(),
            HeightError::MissingConstant(0)
        );
        let c = family_constants(&f, &[Some(LogReal::ln_u64(7))]).unwrap();
        assert_eq!(c.sources, vec![ConstantSource::UserSupplied]);
        assert!((c.b_s.value() - 7f64.ln()).abs() < 1e-14);
    }

    #[test]
    fn tate_gap_examples() {
        let f = fam(vec![presets::power_plus(1, 2)]);
        let c = family_constants(&f, &[None]).unwrap();
        let zero = ProjPointQ::from_i64(&[0, 1]);
        assert_eq!(tate_gap(&f, &[], &zero).unwrap(), 0.0);
        // (x²+1)∘(x²+1) at 0 → 2; |ln2/4 − 0| ≤ ln 2
        let gap = tate_gap(&f, &[0, 0], &zero).unwrap();
        assert!((gap - 2f64.ln() / 4.0).abs() < 1e-15);
        assert!(tate_bound_holds(&f, &c, &[0, 0], &zero).unwrap());
    }

    #[test]
    fn tate_bound_property_run() {
        let f = fam(vec![presets::power_plus(3, 2), presets::power_plus(5, 2)]);
        let c = family_constants(&f, &[None, None]).unwrap();
        let mut rng_state = 0x9e3779b97f4a7c15u64;
        let mut next = || {
            rng_state = rng_state.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            rng_state >> 33
        };
        for _ in 0..200 {
            let len = (next() % 7) as usize;
            let rho: Vec<usize> = (0..len).map(|_| (next() % 2) as usize).collect();
            let num = (next() % 201) as i64 - 100;
            let den = (next() % 100) as i64 + 1;
            let q = ProjPointQ::new(vec![BigInt::from(num.max(1)), BigInt::from(den)]).unwrap();
            assert!(tate_bound_holds(&f, &c, &rho, &q).unwrap());
        }
    }

    #[test]
    fn escape_levels() {
        // S={x²+3, x²+5}, P=0: level exactly 2
        let f = fam(vec![presets::power_plus(3, 2), presets::power_plus(5, 2)]);
        let c = family_constants(&f, &[None, None]).unwrap();
        let zero = ProjPointQ::from_i64(&[0, 1]);
        match escape_certificate(&f, &c, &zero, 5, 100_000).unwrap() {
            EscapeOutcome::Certified(cert) => {
                assert_eq!(cert.level, 2);
                assert_eq!(cert.witnesses.len(), 4);
                assert!(cert.ratio_lower > 0.0);
                let heights: Vec<f64> = cert.witnesses.iter().map(|w| w.height).collect();
                for (h, v) in heights.iter().zip([12.0f64, 14.0, 28.0, 30.0]) {
                    assert!((h - v.ln()).abs() < 1e-12);
                }
            }
            other => panic!("expected certification, got {other:?}"),
        }

        // h(P) > B_S → level 0
        let p = ProjPointQ::from_i64(&[100, 1]);
        match escape_certificate(&f, &c, &p, 3, 100_000).unwrap() {
            EscapeOutcome::Certified(cert) => assert_eq!(cert.level, 0),
            other => panic!("{other:?}"),
        }

        // S={x²−1}, P=0: periodic orbit 0 → −1 → 0, never certified
        let f = fam(vec![presets::power_plus(-1, 2)]);
        let c = family_constants(&f, &[None]).unwrap();
        match escape_certificate(&f, &c, &zero, 8, 100_000).unwrap() {
            EscapeOutcome::NotCertified { r_max } => assert_eq!(r_max, 8),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn boundary_height_does_not_certify() {
        // S={x²+1}, P=0: orbit 0,1,2,5; at r=2 the value 2 has h = ln 2 = B_S
        // exactly — strictness must reject level 2 and certify at level 3.
        let f = fam(vec![presets::power_plus(1, 2)]);
        let c = family_constants(&f, &[None]).unwrap();
        let zero = ProjPointQ::from_i64(&[0, 1]);
        match escape_certificate(&f, &c, &zero, 5, 100_000).unwrap() {
            EscapeOutcome::Certified(cert) => assert_eq!(cert.level, 3),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn galois_escape_examples() {
        let p35 = vec![(BigInt::from(3), 2u32), (BigInt::from(5), 2)];
        assert!(galois_escape_predicate(&p35));
        let p1 = vec![(BigInt::from(1), 2u32)];
        assert!(galois_escape_predicate(&p1)); // |1+1| = 2 ≥ 2, boundary holds
        let pm1 = vec![(BigInt::from(-1), 2u32)];
        assert!(!galois_escape_predicate(&pm1)); // |1−1| = 0 < 2
    }

    #[test]
    fn orbit_closure_verdicts() {
        // five-map family: Orb_S(0) = {0, ±1}
        let f = fam(presets::five_map_family());
        let c = family_constants(
            &f,
            &[
                None,
                Some(LogReal::zero()),
                Some(LogReal::ln_u64(2)),
                Some(LogReal::ln_u64(2)),
                Some(LogReal::ln_u64(4)),
            ],
        )
        .unwrap();
        let zero = ProjPointQ::from_i64(&[0, 1]);
        match total_orbit_closure(&f, &c, &zero, 1000, 64).unwrap() {
            OrbitClosureResult::Finite { points } => {
                let mut p = points;
                p.sort();
                // −1 canonicalizes to [1:−1] (first nonzero coordinate positive)
                assert_eq!(p, vec!["[0:1]", "[1:-1]", "[1:1]"]);
            }
            other => panic!("{other:?}"),
        }

        // S={x²+1}, P=0 → InfiniteCertified at the value 5 (depth 3)
        let f = fam(vec![presets::power_plus(1, 2)]);
        let c = family_constants(&f, &[None]).unwrap();
        match total_orbit_closure(&f, &c, &zero, 1000, 64).unwrap() {
            OrbitClosureResult::InfiniteCertified { value, height, witness_string } => {
                assert_eq!(value, "[5:1]");
                assert_eq!(witness_string.len(), 3);
                assert!((height - 5f64.ln()).abs() < 1e-15);
            }
            other => panic!("{other:?}"),
        }

        // fixed point
        let f = fam(vec![presets::power_plus(0, 2)]);
        let c = family_constants(&f, &[None]).unwrap();
        let one = ProjPointQ::from_i64(&[1, 1]);
        match total_orbit_closure(&f, &c, &one, 1000, 64).unwrap() {
            OrbitClosureResult::Finite { points } => assert_eq!(points, vec!["[1:1]"]),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn orbit_counting_geometric() {
        // constant family {x²}, P=[3:1]: h(γ_n(P)) = 2^n·ln 3; count for
        // B = 2^10·ln 3 is 11 (n = 0..10)
        let f = fam(vec![presets::power_plus(0, 2)]);
        let s = SequenceSample::constant(0, 14);
        let p = ProjPointQ::from_i64(&[3, 1]);
        let t = left_orbit(&f, &s, &p, 14, Engine::Exact, EXACT_CAP_DEFAULT).unwrap();
        let b = 1024.0 * 3f64.ln();
        assert_eq!(orbit_height_count(&t, b).unwrap(), 11);
        // B below h(P): only n=0 has h ≤ B? h(P)=ln3 ≈ 1.09 > B=1 → 0 counts;
        // TraceTooShort never triggers since later heights exceed 1
        assert_eq!(orbit_height_count(&t, 1.0).unwrap(), 0);
        // bound beyond the trace
        assert_eq!(
            orbit_height_count(&t, 1e300).unwrap_err(),
            HeightError::TraceTooShort
        );
    }

    #[test]
    fn slope_matches_inverse_log_delta() {
        let f = fam(vec![presets::power_plus(1, 2), presets::power_plus(-1, 3)]);
        let s = sample_sequence(&f, 11, 400);
        let p = ProjPointQ::from_i64(&[3, 1]);
        let t = left_orbit(&f, &s, &p, 400, Engine::LogApprox, EXACT_CAP_DEFAULT).unwrap();
        // geometric ladder of bounds spanning the middle of the trace:
        // ln B from 40 to 240
        let ladder: Vec<f64> = (1..=6).map(|k| (40.0 * k as f64).exp()).collect();
        let slope = slope_estimate(&t, &ladder).unwrap();
        let expect = 1.0 / f.log_delta();
        assert!((slope - expect).abs() / expect < 0.15, "slope {slope} vs {expect}");
    }

    #[test]
    fn distinctness_examples() {
        let f = fam(vec![presets::power_plus(1, 2)]);
        let c = family_constants(&f, &[None]).unwrap();
        assert!(!distinctness_property(&c, &ProjPointQ::from_i64(&[3, 1])));
        assert!(distinctness_property(&c, &ProjPointQ::from_i64(&[9, 1])));
        assert!(!distinctness_property(&c, &ProjPointQ::from_i64(&[1, 1])));
        // exact boundary: h = ln 8 = 3 ln 2 = 3B_S, not strict
        assert!(!distinctness_property(&c, &ProjPointQ::from_i64(&[8, 1])));
    }

    #[test]
    fn positivity_predicate() {
        let cs3 = vec![BigInt::from(1), BigInt::from(2), BigInt::from(3)];
        assert!(matches!(
            quadratic_positivity_predicate(&cs3),
            PositivityVerdict::Applicable { s: 3 }
        ));
        let cs2 = vec![BigInt::from(1), BigInt::from(2)];
        assert!(matches!(
            quadratic_positivity_predicate(&cs2),
            PositivityVerdict::NotApplicable { s: 2 }
        ));
        let rep = vec![BigInt::from(1), BigInt::from(1), BigInt::from(2)];
        assert!(matches!(
            quadratic_positivity_predicate(&rep),
            PositivityVerdict::RejectedRepeatedParameter
        ));
    }
}
