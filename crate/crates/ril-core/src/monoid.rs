//! Growth of composition monoids: exact lattice-point counts in weighted
//! simplices, the simplex-volume asymptotic, multiplicative independence of
//! degree vectors, and the sandwich count of functions with h(f(P)) ≤ B.

use std::collections::HashSet;

use num_bigint::{BigInt, BigUint};
use num_traits::{One, Signed, Zero};
use thiserror::Error;

use crate::exact::{factor_partial, FactorBudget};
use crate::logreal::LogReal;
use crate::maps::{HomogMap, ProjPointQ};
use crate::random::MeasuredFamily;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum MonoidError {
    #[error("sandwich requires h(P) > B_S strictly")]
    SandwichInapplicable,
    #[error("degree list must not be empty and all entries must be >= 2")]
    BadDegrees,
    #[error("could not fully factor {0} within budget")]
    FactorBudget(String),
}

const FLOAT_MARGIN: f64 = 1e-12;

/// #{e ∈ N^s : Σ e_i c_i ≤ B}. When every weight is ln of an integer and the
/// bound carries an exact witness, boundary ties are resolved by integer
/// power comparison (∏ d_i^{e_i})^root · den ≤ num; otherwise floats with a
/// small margin.
pub fn lattice_count_simplex(c: &[LogReal], b: &LogReal) -> u64 {
    assert!(!c.is_empty(), "weight vector must be nonempty");
    assert!(c.iter().all(|w| w.value() > 0.0), "weights must be positive");
    if b.value() < -FLOAT_MARGIN {
        return 0;
    }
    let exact_ds: Option<Vec<BigUint>> = c.iter().map(|w| w.exact_integer()).collect();
    if let (Some(ds), Some((num, den, root))) = (exact_ds, exact_parts(b)) {
        return count_exact(&ds, &num, &den, root, 0, BigUint::one());
    }
    count_float(
        &c.iter().map(|w| w.value()).collect::<Vec<_>>(),
        b.value() + FLOAT_MARGIN,
        0,
        0.0,
    )
}

fn exact_parts(b: &LogReal) -> Option<(BigUint, BigUint, u32)> {
    b.exact_ratio_root()
}

fn count_exact(
    ds: &[BigUint],
    num: &BigUint,
    den: &BigUint,
    root: u32,
    idx: usize,
    prod: BigUint,
) -> u64 {
    if idx == ds.len() {
        return u64::from(prod.pow(root) * den <= *num);
    }
    let mut total = 0;
    let mut p = prod;
    loop {
        if p.pow(root) * den > *num {
            break;
        }
        total += count_exact(ds, num, den, root, idx + 1, p.clone());
        p *= &ds[idx];
    }
    total
}

fn count_float(c: &[f64], budget: f64, idx: usize, acc: f64) -> u64 {
    if idx == c.len() {
        return u64::from(acc <= budget);
    }
    let mut total = 0;
    let mut e = 0u64;
    loop {
        let s = acc + e as f64 * c[idx];
        if s > budget {
            break;
        }
        total += count_float(c, budget, idx + 1, s);
        e += 1;
    }
    total
}

/// Leading-order volume term B^s/(s!·∏ c_i).
pub fn simplex_asymptotic(c: &[f64], b: f64) -> f64 {
    let s = c.len();
    let fact: f64 = (1..=s).map(|k| k as f64).product();
    b.powi(s as i32) / (fact * c.iter().product::<f64>())
}

/// True iff the only integer solution of ∏ d_i^{e_i} = 1 is e = 0, decided
/// by the rank over Q of the prime-exponent matrix of the d_i.
pub fn multiplicative_independence(ds: &[u64]) -> Result<bool, MonoidError> {
    if ds.is_empty() || ds.iter().any(|&d| d < 2) {
        return Err(MonoidError::BadDegrees);
    }
    let budget = FactorBudget::default();
    let mut primes: Vec<BigUint> = Vec::new();
    let mut rows: Vec<Vec<BigInt>> = Vec::new();
    for &d in ds {
        let f = factor_partial(&BigInt::from(d), &budget)
            .map_err(|_| MonoidError::FactorBudget(d.to_string()))?;
        if !f.complete {
            return Err(MonoidError::FactorBudget(d.to_string()));
        }
        let mut row = vec![BigInt::zero(); primes.len()];
        for (p, e) in &f.found {
            match primes.iter().position(|q| q == p) {
                Some(j) => row[j] = BigInt::from(*e),
                None => {
                    primes.push(p.clone());
                    for r in rows.iter_mut() {
                        r.push(BigInt::zero());
                    }
                    row.push(BigInt::from(*e));
                }
            }
        }
        row.resize(primes.len(), BigInt::zero());
        rows.push(row);
    }
    Ok(rank(rows) == ds.len())
}

/// Rank over Q by fraction-free elimination.
fn rank(mut m: Vec<Vec<BigInt>>) -> usize {
    let rows = m.len();
    if rows == 0 {
        return 0;
    }
    let cols = m[0].len();
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let pivot = (r..rows).find(|&i| !m[i][c].is_zero());
        let Some(p) = pivot else { continue };
        m.swap(r, p);
        for i in r + 1..rows {
            if m[i][c].is_zero() {
                continue;
            }
            let (a, b) = (m[r][c].clone(), m[i][c].clone());
            for j in c..cols {
                m[i][j] = &m[i][j] * &a - &m[r][j] * &b;
            }
        }
        r += 1;
    }
    r
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SandwichCounts {
    pub lower: u64,
    /// Exact deduplicated function count; None when the search hit the
    /// length cap before it could be sure no longer word still qualifies.
    pub middle: Option<u64>,
    pub upper: u64,
}

/// Sandwiches #{f ∈ M_S : h(f(P)) ≤ B} between lattice counts at the
/// thresholds ln B − ln(h(P) ± B_S): h(f(P)) lies within deg(f)·(h(P) ± B_S)
/// by telescoping, so ln deg f ≤ ln B − ln(h(P)+B_S) suffices and
/// ln deg f ≤ ln B − ln(h(P)−B_S) is necessary. `ln_b` is ln B.
pub fn function_count_sandwich(
    family: &MeasuredFamily,
    b_s: f64,
    p: &ProjPointQ,
    ln_b: f64,
    length_cap: usize,
) -> Result<SandwichCounts, MonoidError> {
    let hp = p.height().value();
    if hp <= b_s {
        return Err(MonoidError::SandwichInapplicable);
    }
    let weights: Vec<LogReal> = family
        .degrees()
        .iter()
        .map(|&d| LogReal::ln_u64(u64::from(d)))
        .collect();
    let w_f64: Vec<f64> = weights.iter().map(|w| w.value()).collect();
    let lower_threshold = ln_b - (hp + b_s).ln();
    let upper_threshold = ln_b - (hp - b_s).ln();
    let lower = lattice_count_free_commutative(&w_f64, lower_threshold);
    let upper = lattice_count_free_commutative(&w_f64, upper_threshold);

    // explicit count: breadth-first over words, deduplicated by the
    // canonical composed map; complete once every word of the next length
    // must exceed the necessary threshold
    let d_min_ln = w_f64.iter().cloned().fold(f64::INFINITY, f64::min);
    let mut seen: HashSet<String> = HashSet::new();
    let mut qualifying = 0u64;
    // the identity (length 0) always has h(id(P)) = h(P) ≤ B here
    let b_val = ln_b.exp();
    if hp <= b_val + FLOAT_MARGIN {
        qualifying += 1;
    }
    seen.insert("id".into());
    let mut frontier: Vec<HomogMap> = vec![];
    let mut complete = false;
    for len in 1..=length_cap {
        if (len as f64) * d_min_ln > upper_threshold + FLOAT_MARGIN {
            complete = true;
            break;
        }
        let mut next = Vec::new();
        let parents: Vec<HomogMap> = if len == 1 {
            family.maps().iter().map(|m| m.homog.clone()).collect()
        } else {
            let mut v = Vec::new();
            for f in &frontier {
                for g in family.maps() {
                    // h(ρ(P)) ≥ deg ρ · (h(P) − B_S), so once the log-degree
                    // passes the upper threshold neither this word nor any
                    // extension of it can land under B; prune here
                    let ln_deg =
                        (f.degree() as f64).ln() + (g.homog.degree() as f64).ln();
                    if ln_deg > upper_threshold + FLOAT_MARGIN {
                        continue;
                    }
                    v.push(g.homog.compose(f).expect("same dimension"));
                }
            }
            v
        };
        for h in parents {
            if (h.degree() as f64).ln() > upper_threshold + FLOAT_MARGIN {
                continue;
            }
            let key = canonical_key(&h);
            if seen.insert(key) {
                if let Ok(v) = h.evaluate(p) {
                    if v.height().value() <= b_val + FLOAT_MARGIN {
                        qualifying += 1;
                    }
                }
                next.push(h);
            }
        }
        frontier = next;
        if frontier.is_empty() {
            complete = true;
            break;
        }
    }
    Ok(SandwichCounts {
        lower,
        middle: if complete { Some(qualifying) } else { None },
        upper,
    })
}

/// Lattice count over the free commutative monoid at a float threshold
/// (ln-degree scale).
fn lattice_count_free_commutative(w: &[f64], threshold: f64) -> u64 {
    if threshold < -FLOAT_MARGIN {
        return 0;
    }
    count_float(w, threshold + FLOAT_MARGIN, 0, 0.0)
}

/// Dedup key for a projective map: coefficients with the overall sign fixed
/// so that the first nonzero coefficient is positive.
fn canonical_key(h: &HomogMap) -> String {
    let mut flip = false;
    'outer: for c in h.coord_polys() {
        for t in c.terms() {
            flip = t.coeff.is_negative();
            break 'outer;
        }
    }
    let mut out = String::new();
    for c in h.coord_polys() {
        out.push('|');
        for t in c.terms() {
            let coeff = if flip { -&t.coeff } else { t.coeff.clone() };
            out.push_str(&format!(
                "{}:{};",
                coeff,
                t.exps
                    .iter()
                    .map(|e| e.to_string())
                    .collect::<Vec<_>>()
                    .join(",")
            ));
        }
    }
    out
}
