//! Probability layer: weighted map families, seeded i.i.d. sequence
//! sampling, left/right orbit engines (exact and log-approximate), dynamical
//! degree, variance, and law-of-iterated-logarithm statistics.

use num_bigint::{BigInt, BigUint};
use num_traits::{One, Signed, ToPrimitive, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::exact::RationalValue;
use crate::logreal::LogReal;
use crate::maps::{FamilyMap, MapError, ProjPointQ};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum RandomError {
    #[error("weights must be strictly positive and sum exactly to 1")]
    BadWeights,
    #[error("family is empty or mixes ambient dimensions")]
    BadFamily,
    #[error("variance of log-degree is zero")]
    ZeroVariance,
    #[error("law-of-iterated-logarithm statistic needs n >= 16, got {0}")]
    NTooSmall(usize),
    #[error("exact engine capped at depth {cap}, requested {requested}")]
    ExactCapExceeded { requested: usize, cap: usize },
    #[error(transparent)]
    Map(#[from] MapError),
}

/// Default depth cap for the exact-height engine: heights roughly square per
/// step, so digit counts double and n ≈ 25 is already infeasible.
pub const EXACT_CAP_DEFAULT: usize = 20;

/// A finite family S with a strictly positive probability vector ν.
#[derive(Debug, Clone)]
pub struct MeasuredFamily {
    maps: Vec<FamilyMap>,
    weights: Vec<RationalValue>,
    log_delta: f64,
    sigma_sq: f64,
    /// Cumulative inverse-CDF thresholds: index i is drawn when the 64-bit
    /// uniform u satisfies thresholds[i-1] <= u < thresholds[i]; the last
    /// entry is implicit. floor(cum_i · 2^64) over exact rationals.
    thresholds: Vec<u64>,
}

impl MeasuredFamily {
    pub fn new(maps: Vec<FamilyMap>, weights: Vec<RationalValue>) -> Result<Self, RandomError> {
        if maps.is_empty() || maps.len() != weights.len() {
            return Err(RandomError::BadFamily);
        }
        let dim = maps[0].homog.dim();
        if maps.iter().any(|m| m.homog.dim() != dim) {
            return Err(RandomError::BadFamily);
        }
        if weights.iter().any(|w| !w.is_positive()) {
            return Err(RandomError::BadWeights);
        }
        let total: RationalValue = weights.iter().sum();
        if !total.is_one() {
            return Err(RandomError::BadWeights);
        }
        let mut log_delta = 0.0;
        for (m, w) in maps.iter().zip(&weights) {
            log_delta += rat_to_f64(w) * f64::from(m.homog.degree()).ln();
        }
        let mut sigma_sq = 0.0;
        for (m, w) in maps.iter().zip(&weights) {
            let dev = f64::from(m.homog.degree()).ln() - log_delta;
            sigma_sq += rat_to_f64(w) * dev * dev;
        }
        let mut thresholds = Vec::with_capacity(maps.len() - 1);
        let two64 = BigInt::one() << 64u32;
        let mut cum = RationalValue::zero();
        for w in &weights[..weights.len() - 1] {
            cum += w;
            let scaled = (&cum * RationalValue::from_integer(two64.clone())).floor();
            let t = scaled
                .to_integer()
                .to_u64()
                .expect("cumulative weight below 1 scales into u64 range");
            thresholds.push(t);
        }
        Ok(MeasuredFamily {
            maps,
            weights,
            log_delta,
            sigma_sq,
            thresholds,
        })
    }

    pub fn uniform(maps: Vec<FamilyMap>) -> Result<Self, RandomError> {
        let s = maps.len();
        let w = RationalValue::new(BigInt::one(), BigInt::from(s as u64));
        Self::new(maps, vec![w; s])
    }

    pub fn maps(&self) -> &[FamilyMap] {
        &self.maps
    }

    pub fn weights(&self) -> &[RationalValue] {
        &self.weights
    }

    pub fn dim(&self) -> usize {
        self.maps[0].homog.dim()
    }

    pub fn degrees(&self) -> Vec<u32> {
        self.maps.iter().map(|m| m.homog.degree()).collect()
    }

    /// ln δ where δ = ∏ deg(φ)^{ν(φ)}.
    pub fn log_delta(&self) -> f64 {
        self.log_delta
    }

    /// Variance of ln deg(φ) under ν.
    pub fn sigma_sq(&self) -> f64 {
        self.sigma_sq
    }
}

fn rat_to_f64(r: &RationalValue) -> f64 {
    r.to_f64().expect("weight fits f64")
}

/// Seeded i.i.d. index stream from ν.
///
/// The sampler is pinned: ChaCha8 keyed by the 64-bit seed; each draw takes
/// 64 bits and inverts the exact cumulative distribution.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SequenceSample {
    pub seed: u64,
    pub indices: Vec<usize>,
}

pub fn sample_sequence(family: &MeasuredFamily, seed: u64, n_max: usize) -> SequenceSample {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let indices = (0..n_max)
        .map(|_| {
            let u: u64 = rng.gen();
            family.thresholds.partition_point(|&t| t <= u)
        })
        .collect();
    SequenceSample { seed, indices }
}

impl SequenceSample {
    pub fn constant(index: usize, n_max: usize) -> Self {
        SequenceSample {
            seed: 0,
            indices: vec![index; n_max],
        }
    }

    pub fn from_indices(indices: Vec<usize>) -> Self {
        SequenceSample { seed: 0, indices }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Engine {
    Exact,
    LogApprox,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Direction {
    Left,
    Right,
}

/// One step of an orbit trace. Heights are stored through their natural log
/// (`ln_height` = ln h) so million-fold degree growth stays representable;
/// `height` additionally carries the exact value when the engine is exact.
#[derive(Debug, Clone)]
pub struct TraceRecord {
    pub n: usize,
    /// ln deg(γ_n), an exact partial sum of ln deg(θ_i).
    pub log_deg: f64,
    /// deg(γ_n) as an exact integer.
    pub deg: BigUint,
    /// h(γ_n(P)) when the exact engine produced it.
    pub height: Option<LogReal>,
    /// ln h(γ_n(P)); −∞ encodes h = 0.
    pub ln_height: f64,
    pub engine: Engine,
    /// Bound on |ln_height − ln h_true| (0 for the exact engine).
    pub error_bound: f64,
}

impl TraceRecord {
    /// h(γ_n(P)) as a float; ∞ when the value outgrew f64.
    pub fn height_value(&self) -> f64 {
        self.ln_height.exp()
    }
}

#[derive(Debug, Clone)]
pub struct HeightTrace {
    pub records: Vec<TraceRecord>,
    /// Step at which evaluation hit the indeterminacy locus, if any.
    pub aborted_at: Option<usize>,
}

/// Float shadow of a family map for the log-approximate engine.
struct FloatMap {
    degree: f64,
    degree_int: u32,
    coords: Vec<Vec<(Vec<u32>, f64)>>,
}

impl FloatMap {
    fn new(m: &FamilyMap) -> Self {
        let h = &m.homog;
        let coords: Vec<Vec<(Vec<u32>, f64)>> = h
            .coord_polys()
            .iter()
            .map(|c| {
                c.terms()
                    .iter()
                    .map(|t| (t.exps.clone(), bigint_to_f64(&t.coeff)))
                    .collect()
            })
            .collect();
        FloatMap {
            degree: f64::from(h.degree()),
            degree_int: h.degree(),
            coords,
        }
    }

    /// Evaluates every coordinate and a rigorous bound on its absolute error,
    /// given that each |x_i| carries absolute error ≤ e_c. Per term the
    /// interval bound |c|·(∏(|x_i|+e_c)^{e_i} − ∏|x_i|^{e_i}) is used, plus
    /// rounding slack proportional to the term magnitude.
    fn eval(&self, x: &[f64], e_c: f64) -> Vec<(f64, f64)> {
        self.coords
            .iter()
            .map(|c| {
                let mut v = 0.0f64;
                let mut dv = 0.0f64;
                for (exps, co) in c {
                    let mut t = *co;
                    let mut t_abs = co.abs();
                    let mut t_hi = co.abs();
                    for (xi, &e) in x.iter().zip(exps) {
                        for _ in 0..e {
                            t *= xi;
                            t_abs *= xi.abs();
                            t_hi *= xi.abs() + e_c;
                        }
                    }
                    v += t;
                    let e_total = exps.iter().sum::<u32>() as f64;
                    dv += (t_hi - t_abs).max(0.0) + (e_total + 2.0) * F64_EPS * t_hi;
                }
                // summation rounding over the terms
                dv += c.len() as f64 * F64_EPS * v.abs();
                (v, dv)
            })
            .collect()
    }
}

fn bigint_to_f64(b: &BigInt) -> f64 {
    b.to_f64().unwrap_or(f64::INFINITY)
}

/// Scaled-coordinate height walker: coordinates kept with max |x_i| = 1 and
/// the log of the true max coordinate accumulated separately. Content is not
/// reduced, so on families that preserve coprimality (integer unicritical
/// orbits) the accumulated log is the Weil height up to float error.
struct LogApproxState {
    coords: Vec<f64>,
    /// L = ln(max |unreduced integer coordinate|); saturates to ∞ in f64 but
    /// `ln_l` keeps tracking ln L past that point.
    l: f64,
    ln_l: f64,
    /// Absolute error bound on L, tracked directly while small.
    abs_err: f64,
    /// Relative error bound on L (= bound on |Δ ln L| to first order).
    rel_err: f64,
    /// Absolute error bound on the scaled coordinates.
    coord_err: f64,
}

const L_SWITCH: f64 = 1e100;
const F64_EPS: f64 = f64::EPSILON;

impl LogApproxState {
    fn start(p: &ProjPointQ) -> Self {
        let m = p
            .coords()
            .iter()
            .map(|c| c.abs())
            .max()
            .unwrap();
        let mf = bigint_to_f64(&m);
        let coords = p.coords().iter().map(|c| bigint_to_f64(c) / mf).collect();
        let l = mf.ln();
        LogApproxState {
            coords,
            l,
            ln_l: if l > 0.0 { l.ln() } else { f64::NEG_INFINITY },
            abs_err: 0.0,
            rel_err: 0.0,
            coord_err: F64_EPS,
        }
    }

    fn step(&mut self, fm: &FloatMap) -> Result<(), MapError> {
        let vals = fm.eval(&self.coords, self.coord_err);
        let v: Vec<f64> = vals.iter().map(|(v, _)| *v).collect();
        let m = v.iter().fold(0.0f64, |a, &b| a.max(b.abs()));
        let eval_err = vals.iter().map(|(_, d)| *d).fold(0.0, f64::max);
        if m < 1e-290 {
            // all coordinates vanish (or underflow): treat as indeterminate
            return Err(MapError::IndeterminatePoint);
        }
        let ln_m = m.ln();
        let step_err = eval_err / m + 2.0 * F64_EPS;
        let new_l = fm.degree * self.l + ln_m;
        if new_l < L_SWITCH {
            self.abs_err = fm.degree * self.abs_err + step_err;
            self.rel_err = if new_l > 0.0 { self.abs_err / new_l } else { self.abs_err };
            self.ln_l = if new_l > 0.0 { new_l.ln() } else { f64::NEG_INFINITY };
        } else {
            // past the switch the additive terms are < 1e-98 relatively
            self.ln_l += fm.degree.ln()
                + if self.l.is_finite() { (ln_m / (fm.degree * self.l)).ln_1p() } else { 0.0 };
            // rel_err gains step_err/(d·L), negligible; keep it frozen
        }
        self.l = new_l;
        self.coords = v.iter().map(|x| x / m).collect();
        // Rescaled coordinate error: value error plus the error transferred
        // from the max coordinate, plus division rounding. Clamped at the
        // trivial bound 2 (both true and computed scaled coordinates lie in
        // [-1,1]), so deep traces report a saturated "no certified digits"
        // bound instead of a meaningless overflow.
        self.coord_err = (2.0 * eval_err / m + 2.0 * F64_EPS).min(2.0);
        let _ = fm.degree_int;
        Ok(())
    }
}

fn push_exact_record(
    records: &mut Vec<TraceRecord>,
    n: usize,
    log_deg: f64,
    deg: BigUint,
    p: &ProjPointQ,
) {
    let h = p.height();
    let hv = h.value();
    records.push(TraceRecord {
        n,
        log_deg,
        deg,
        height: Some(h),
        ln_height: if hv > 0.0 { hv.ln() } else { f64::NEG_INFINITY },
        engine: Engine::Exact,
        error_bound: 0.0,
    });
}

fn push_approx_record(
    records: &mut Vec<TraceRecord>,
    n: usize,
    log_deg: f64,
    deg: BigUint,
    st: &LogApproxState,
) {
    records.push(TraceRecord {
        n,
        log_deg,
        deg,
        height: None,
        ln_height: st.ln_l,
        engine: Engine::LogApprox,
        error_bound: st.rel_err.max(if st.l < 1.0 { st.abs_err } else { 0.0 }),
    });
}

/// Left orbit γ_n^− = θ_n ∘ … ∘ θ_1: incremental, O(n) evaluations.
pub fn left_orbit(
    family: &MeasuredFamily,
    sample: &SequenceSample,
    p: &ProjPointQ,
    n_max: usize,
    engine: Engine,
    exact_cap: usize,
) -> Result<HeightTrace, RandomError> {
    orbit(family, sample, p, n_max, engine, exact_cap, Direction::Left)
}

/// Right orbit γ_n^+ = θ_1 ∘ … ∘ θ_n: the innermost map changes with n, so
/// each level is recomputed inner-to-outer (O(n²) evaluations total).
pub fn right_orbit(
    family: &MeasuredFamily,
    sample: &SequenceSample,
    p: &ProjPointQ,
    n_max: usize,
    engine: Engine,
    exact_cap: usize,
) -> Result<HeightTrace, RandomError> {
    orbit(family, sample, p, n_max, engine, exact_cap, Direction::Right)
}

pub fn orbit(
    family: &MeasuredFamily,
    sample: &SequenceSample,
    p: &ProjPointQ,
    n_max: usize,
    engine: Engine,
    exact_cap: usize,
    direction: Direction,
) -> Result<HeightTrace, RandomError> {
    if engine == Engine::Exact && n_max > exact_cap {
        return Err(RandomError::ExactCapExceeded {
            requested: n_max,
            cap: exact_cap,
        });
    }
    assert!(sample.indices.len() >= n_max, "sample too short for depth");
    let degs = family.degrees();
    let mut log_deg = 0.0;
    let mut deg = BigUint::one();
    let mut records = Vec::with_capacity(n_max + 1);
    let mut aborted_at = None;

    match (engine, direction) {
        (Engine::Exact, Direction::Left) => {
            push_exact_record(&mut records, 0, 0.0, BigUint::one(), p);
            let mut cur = p.clone();
            for n in 1..=n_max {
                let idx = sample.indices[n - 1];
                match family.maps[idx].homog.evaluate(&cur) {
                    Ok(next) => cur = next,
                    Err(MapError::IndeterminatePoint) => {
                        aborted_at = Some(n);
                        break;
                    }
                    Err(e) => return Err(e.into()),
                }
                log_deg += f64::from(degs[idx]).ln();
                deg *= BigUint::from(degs[idx]);
                push_exact_record(&mut records, n, log_deg, deg.clone(), &cur);
            }
        }
        (Engine::Exact, Direction::Right) => {
            push_exact_record(&mut records, 0, 0.0, BigUint::one(), p);
            'levels: for n in 1..=n_max {
                let mut cur = p.clone();
                for i in (0..n).rev() {
                    let idx = sample.indices[i];
                    match family.maps[idx].homog.evaluate(&cur) {
                        Ok(next) => cur = next,
                        Err(MapError::IndeterminatePoint) => {
                            aborted_at = Some(n);
                            break 'levels;
                        }
                        Err(e) => return Err(e.into()),
                    }
                }
                let idx = sample.indices[n - 1];
                log_deg += f64::from(degs[idx]).ln();
                deg *= BigUint::from(degs[idx]);
                push_exact_record(&mut records, n, log_deg, deg.clone(), &cur);
            }
        }
        (Engine::LogApprox, Direction::Left) => {
            let floats: Vec<FloatMap> = family.maps.iter().map(FloatMap::new).collect();
            let mut st = LogApproxState::start(p);
            push_approx_record(&mut records, 0, 0.0, BigUint::one(), &st);
            for n in 1..=n_max {
                let idx = sample.indices[n - 1];
                if let Err(MapError::IndeterminatePoint) = st.step(&floats[idx]) {
                    aborted_at = Some(n);
                    break;
                }
                log_deg += f64::from(degs[idx]).ln();
                deg *= BigUint::from(degs[idx]);
                push_approx_record(&mut records, n, log_deg, deg.clone(), &st);
            }
        }
        (Engine::LogApprox, Direction::Right) => {
            let floats: Vec<FloatMap> = family.maps.iter().map(FloatMap::new).collect();
            let st0 = LogApproxState::start(p);
            push_approx_record(&mut records, 0, 0.0, BigUint::one(), &st0);
            'rlevels: for n in 1..=n_max {
                let mut st = LogApproxState::start(p);
                for i in (0..n).rev() {
                    let idx = sample.indices[i];
                    if let Err(MapError::IndeterminatePoint) = st.step(&floats[idx]) {
                        aborted_at = Some(n);
                        break 'rlevels;
                    }
                }
                let idx = sample.indices[n - 1];
                log_deg += f64::from(degs[idx]).ln();
                deg *= BigUint::from(degs[idx]);
                push_approx_record(&mut records, n, log_deg, deg.clone(), &st);
            }
        }
    }
    Ok(HeightTrace {
        records,
        aborted_at,
    })
}

/// Law-of-iterated-logarithm statistic on a log-degree walk:
/// X_n = (ln deg γ_n − n ln δ)/(σ√(2 n ln ln n)), returned as (X_n, −X_n).
pub fn lil_statistic(
    family: &MeasuredFamily,
    log_deg_at_n: f64,
    n: usize,
) -> Result<(f64, f64), RandomError> {
    if family.sigma_sq() == 0.0 {
        return Err(RandomError::ZeroVariance);
    }
    if n < 16 {
        return Err(RandomError::NTooSmall(n));
    }
    let sigma = family.sigma_sq().sqrt();
    let denom = sigma * (2.0 * n as f64 * (n as f64).ln().ln()).sqrt();
    let x = (log_deg_at_n - n as f64 * family.log_delta()) / denom;
    Ok((x, -x))
}

/// Height analog of the statistic: (ln h(γ_n(P)) − n ln δ)/(σ√(2n ln ln n)).
pub fn lil_statistic_height(
    family: &MeasuredFamily,
    ln_height: f64,
    n: usize,
) -> Result<(f64, f64), RandomError> {
    if family.sigma_sq() == 0.0 {
        return Err(RandomError::ZeroVariance);
    }
    if n < 16 {
        return Err(RandomError::NTooSmall(n));
    }
    let sigma = family.sigma_sq().sqrt();
    let denom = sigma * (2.0 * n as f64 * (n as f64).ln().ln()).sqrt();
    let x = (ln_height - n as f64 * family.log_delta()) / denom;
    Ok((x, -x))
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct TrialStats {
    pub trial: usize,
    pub depth_reached: usize,
    /// deg(γ_n)^{1/n} at the final step.
    pub root_deg: f64,
    /// h(γ_n(P))^{1/n} at the final step (0 when the height is 0).
    pub root_height: f64,
    /// Running max over n ≥ 16 of the degree-walk LIL statistic.
    pub lil_max: Option<f64>,
    /// Running min/max of h(γ_n(P))/deg(γ_n) over n ≥ 1.
    pub ratio_min: f64,
    pub ratio_max: f64,
    pub final_error_bound: f64,
    pub aborted_at: Option<usize>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SummaryStats {
    pub mean: f64,
    pub median: f64,
    pub q05: f64,
    pub q95: f64,
}

impl SummaryStats {
    pub fn of(values: &[f64]) -> Self {
        let mut v: Vec<f64> = values.iter().cloned().filter(|x| x.is_finite()).collect();
        if v.is_empty() {
            return SummaryStats {
                mean: f64::NAN,
                median: f64::NAN,
                q05: f64::NAN,
                q95: f64::NAN,
            };
        }
        v.sort_by(|a, b| a.partial_cmp(b).unwrap());
        let mean = v.iter().sum::<f64>() / v.len() as f64;
        let q = |p: f64| v[((v.len() - 1) as f64 * p).round() as usize];
        SummaryStats {
            mean,
            median: q(0.5),
            q05: q(0.05),
            q95: q(0.95),
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct MonteCarloReport {
    pub trials: usize,
    pub depth: usize,
    pub engine: Engine,
    pub direction: Direction,
    pub seed: u64,
    pub log_delta: f64,
    pub sigma_sq: f64,
    pub per_trial: Vec<TrialStats>,
    pub root_deg: SummaryStats,
    pub root_height: SummaryStats,
    pub ratio_min: SummaryStats,
    pub ratio_max: SummaryStats,
}

fn trial_stats(trace: &HeightTrace, trial: usize, family: &MeasuredFamily) -> TrialStats {
    let last = trace.records.last().unwrap();
    let n = last.n;
    let root_deg = if n > 0 { (last.log_deg / n as f64).exp() } else { 1.0 };
    let root_height = if n > 0 && last.ln_height.is_finite() {
        // h^{1/n} = exp(ln(h)/n), which tends to δ when h ≈ δ^n·h(P)
        (last.ln_height / n as f64).exp()
    } else {
        0.0
    };
    let mut lil_max: Option<f64> = None;
    let mut ratio_min = f64::INFINITY;
    let mut ratio_max = f64::NEG_INFINITY;
    for r in &trace.records {
        if r.n >= 16 {
            if let Ok((x, _)) = lil_statistic(family, r.log_deg, r.n) {
                lil_max = Some(lil_max.map_or(x, |m: f64| m.max(x)));
            }
        }
        if r.n >= 1 {
            // h/deg = exp(ln h − ln deg), finite since h ≈ deg·h(P)
            let ratio = (r.ln_height - r.log_deg).exp();
            ratio_min = ratio_min.min(ratio);
            ratio_max = ratio_max.max(ratio);
        }
    }
    TrialStats {
        trial,
        depth_reached: n,
        root_deg,
        root_height,
        lil_max,
        ratio_min,
        ratio_max,
        final_error_bound: last.error_bound,
        aborted_at: trace.aborted_at,
    }
}

/// Runs independent seeded trials in parallel and aggregates. Per-trial seeds
/// are drawn up-front from the master seed, so the report is a deterministic
/// function of (family, point, parameters, seed) regardless of thread count.
#[allow(clippy::too_many_arguments)]
pub fn monte_carlo_report(
    family: &MeasuredFamily,
    p: &ProjPointQ,
    trials: usize,
    depth: usize,
    engine: Engine,
    direction: Direction,
    seed: u64,
    exact_cap: usize,
) -> Result<MonteCarloReport, RandomError> {
    let mut seeder = ChaCha8Rng::seed_from_u64(seed);
    let trial_seeds: Vec<u64> = (0..trials).map(|_| seeder.gen()).collect();
    let per_trial: Result<Vec<TrialStats>, RandomError> = trial_seeds
        .par_iter()
        .enumerate()
        .map(|(i, &ts)| {
            let sample = sample_sequence(family, ts, depth);
            let trace = orbit(family, &sample, p, depth, engine, exact_cap, direction)?;
            Ok(trial_stats(&trace, i, family))
        })
        .collect();
    let per_trial = per_trial?;
    let collect = |f: &dyn Fn(&TrialStats) -> f64| -> Vec<f64> {
        per_trial.iter().map(f).collect()
    };
    Ok(MonteCarloReport {
        trials,
        depth,
        engine,
        direction,
        seed,
        log_delta: family.log_delta(),
        sigma_sq: family.sigma_sq(),
        root_deg: SummaryStats::of(&collect(&|t| t.root_deg)),
        root_height: SummaryStats::of(&collect(&|t| t.root_height)),
        ratio_min: SummaryStats::of(&collect(&|t| t.ratio_min)),
        ratio_max: SummaryStats::of(&collect(&|t| t.ratio_max)),
        per_trial,
    })
}

/// Renders a trace as CSV with columns n, log_deg, log_height, engine,
/// error_bound; log_height is ln h (−inf encodes h = 0).
pub fn trace_to_csv(trace: &HeightTrace) -> String {
    let mut out = String::from("n,log_deg,log_height,engine,error_bound\n");
    for r in &trace.records {
        let engine = match r.engine {
            Engine::Exact => "exact",
            Engine::LogApprox => "log-approx",
        };
        out.push_str(&format!(
            "{},{},{},{},{}\n",
            r.n, r.log_deg, r.ln_height, engine, r.error_bound
        ));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::maps::presets;
    use num_bigint::BigInt;

    fn x2_x3_family() -> MeasuredFamily {
        MeasuredFamily::uniform(vec![presets::power_plus(1, 2), presets::power_plus(-1, 3)])
            .unwrap()
    }

    #[test]
    fn dynamical_degree_closed_forms() {
        let single = MeasuredFamily::uniform(vec![presets::power_plus(0, 2)]).unwrap();
        assert!((single.log_delta() - 2f64.ln()).abs() < 1e-15);
        assert_eq!(single.sigma_sq(), 0.0);

        let f = x2_x3_family();
        assert!((f.log_delta() - 6f64.ln() / 2.0).abs() < 1e-15);

        let w = MeasuredFamily::new(
            vec![presets::power_plus(0, 2), presets::power_plus(0, 3)],
            vec![
                RationalValue::new(BigInt::one(), BigInt::from(3)),
                RationalValue::new(BigInt::from(2), BigInt::from(3)),
            ],
        )
        .unwrap();
        let expect = 2f64.ln() / 3.0 + 2.0 * 3f64.ln() / 3.0;
        assert!((w.log_delta() - expect).abs() < 1e-15);
    }

    #[test]
    fn weights_validation() {
        let bad = MeasuredFamily::new(
            vec![presets::power_plus(0, 2), presets::power_plus(0, 3)],
            vec![
                RationalValue::new(BigInt::one(), BigInt::from(2)),
                RationalValue::new(BigInt::one(), BigInt::from(3)),
            ],
        );
        assert_eq!(bad.unwrap_err(), RandomError::BadWeights);
    }

    #[test]
    fn sampling_is_deterministic_and_degenerate_weights_work() {
        let f = x2_x3_family();
        let a = sample_sequence(&f, 42, 100);
        let b = sample_sequence(&f, 42, 100);
        assert_eq!(a, b);
        assert!(a.indices.iter().any(|&i| i == 0) && a.indices.iter().any(|&i| i == 1));

        let degenerate = MeasuredFamily::new(
            vec![presets::power_plus(0, 2), presets::power_plus(0, 3)],
            vec![
                RationalValue::from_integer(BigInt::one()),
                RationalValue::zero(),
            ],
        );
        // zero weight rejected outright
        assert_eq!(degenerate.unwrap_err(), RandomError::BadWeights);
        let single = MeasuredFamily::uniform(vec![presets::power_plus(0, 2)]).unwrap();
        let s = sample_sequence(&single, 7, 50);
        assert!(s.indices.iter().all(|&i| i == 0));
    }

    #[test]
    fn empirical_frequencies_match_weights() {
        let f = x2_x3_family();
        let s = sample_sequence(&f, 1234, 1_000_000);
        let ones = s.indices.iter().filter(|&&i| i == 1).count() as f64;
        let n = 1_000_000f64;
        // binomial sd = sqrt(n·p·(1−p)) = 500
        assert!((ones - n / 2.0).abs() < 3.0 * 500.0, "ones = {ones}");
    }

    #[test]
    fn constant_quadratic_right_orbit_values() {
        let f = MeasuredFamily::uniform(vec![presets::power_plus(1, 2)]).unwrap();
        let s = SequenceSample::constant(0, 3);
        let p = ProjPointQ::from_i64(&[0, 1]);
        let t = right_orbit(&f, &s, &p, 3, Engine::Exact, EXACT_CAP_DEFAULT).unwrap();
        let heights: Vec<f64> = t.records.iter().map(|r| r.height.clone().unwrap().value()).collect();
        // orbit 0 → 1 → 2 → 5
        assert_eq!(heights[0], 0.0);
        assert_eq!(heights[1], 0.0);
        assert!((heights[2] - 2f64.ln()).abs() < 1e-15);
        assert!((heights[3] - 5f64.ln()).abs() < 1e-15);
    }

    #[test]
    fn left_right_asymmetry_example() {
        // S = {x²−x, 3x²}: sending θ_n = x²−x at the last (innermost for the
        // right orbit) slot kills the height; for the left orbit only θ_1
        // matters.
        let f = MeasuredFamily::uniform(vec![presets::x2_minus_x(), presets::three_x2()]).unwrap();
        let p = ProjPointQ::from_i64(&[1, 1]);
        // indices 1,1,...,1,0: right orbit value is γ(1) with inner x²−x ↦ 0
        let mut idx = vec![1usize; 6];
        idx[5] = 0;
        let s = SequenceSample::from_indices(idx);
        let t = right_orbit(&f, &s, &p, 6, Engine::Exact, EXACT_CAP_DEFAULT).unwrap();
        assert_eq!(t.records[6].height.clone().unwrap().value(), 0.0);
        assert!(t.records[5].height.clone().unwrap().value() > 1.0);

        // left orbit with θ_1 = x²−x: height 0 forever
        let mut idx = vec![1usize; 6];
        idx[0] = 0;
        let s = SequenceSample::from_indices(idx);
        let t = left_orbit(&f, &s, &p, 6, Engine::Exact, EXACT_CAP_DEFAULT).unwrap();
        for r in &t.records[1..] {
            assert_eq!(r.height.clone().unwrap().value(), 0.0);
        }
    }

    #[test]
    fn exact_cap_enforced() {
        let f = x2_x3_family();
        let s = sample_sequence(&f, 1, 30);
        let p = ProjPointQ::from_i64(&[3, 1]);
        let e = left_orbit(&f, &s, &p, 30, Engine::Exact, 20).unwrap_err();
        assert_eq!(e, RandomError::ExactCapExceeded { requested: 30, cap: 20 });
    }

    #[test]
    fn engines_agree_within_bound() {
        let f = x2_x3_family();
        let s = sample_sequence(&f, 9, 15);
        let p = ProjPointQ::from_i64(&[3, 1]);
        let exact = left_orbit(&f, &s, &p, 15, Engine::Exact, 20).unwrap();
        let approx = left_orbit(&f, &s, &p, 15, Engine::LogApprox, 20).unwrap();
        for (re, ra) in exact.records.iter().zip(&approx.records) {
            let he = re.height.clone().unwrap().value();
            let ha = ra.ln_height.exp();
            let tol = if he > 0.0 { he * ra.error_bound + 1e-12 } else { 1e-12 };
            assert!(
                (he - ha).abs() <= tol,
                "n={} exact={he} approx={ha} bound={}",
                re.n,
                ra.error_bound
            );
            assert!(ra.error_bound <= 1e-9 * (1.0 + he) || he == 0.0);
        }
    }

    #[test]
    fn deep_log_approx_matches_dynamical_degree() {
        let f = x2_x3_family();
        let s = sample_sequence(&f, 5, 2000);
        let p = ProjPointQ::from_i64(&[3, 1]);
        let t = left_orbit(&f, &s, &p, 2000, Engine::LogApprox, 20).unwrap();
        let last = t.records.last().unwrap();
        assert_eq!(last.n, 2000);
        let root_deg = (last.log_deg / 2000.0).exp();
        assert!((root_deg - 6f64.sqrt()).abs() < 0.05, "root_deg = {root_deg}");
        // ln h / n → ln δ, so (ln h)/n should be near log_delta
        let growth = last.ln_height / 2000.0;
        assert!((growth - f.log_delta()).abs() < 0.05, "growth = {growth}");
    }

    #[test]
    fn lil_statistic_guards_and_extreme_path() {
        let f = x2_x3_family();
        assert_eq!(lil_statistic(&f, 1.0, 10).unwrap_err(), RandomError::NTooSmall(10));
        let const_fam = MeasuredFamily::uniform(vec![presets::power_plus(0, 2)]).unwrap();
        assert_eq!(lil_statistic(&const_fam, 1.0, 100).unwrap_err(), RandomError::ZeroVariance);

        // path drawing only x³: ln deg = 100 ln 3
        let n = 100usize;
        let (x, neg) = lil_statistic(&f, 100.0 * 3f64.ln(), n).unwrap();
        let sigma = (3f64.ln() - 2f64.ln()) / 2.0;
        let expect = 100.0 * (3f64.ln() - 6f64.ln() / 2.0)
            / (sigma * (2.0 * 100.0 * (100f64).ln().ln()).sqrt());
        assert!((x - expect).abs() < 1e-12);
        assert_eq!(neg, -x);
    }

    #[test]
    fn monte_carlo_deterministic_and_tate_ratio() {
        let f = x2_x3_family();
        let p = ProjPointQ::from_i64(&[3, 1]);
        let r1 = monte_carlo_report(&f, &p, 8, 15, Engine::Exact, Direction::Right, 42, 20).unwrap();
        let r2 = monte_carlo_report(&f, &p, 8, 15, Engine::Exact, Direction::Right, 42, 20).unwrap();
        assert_eq!(
            serde_json::to_string(&r1).unwrap(),
            serde_json::to_string(&r2).unwrap()
        );
        // Tate: h(γ_n(P))/deg ∈ [h(P)−B_S, h(P)+B_S] with B_S = ln 2 here
        let hp = 3f64.ln();
        let b = 2f64.ln();
        for t in &r1.per_trial {
            assert!(t.ratio_min >= hp - b - 1e-9, "{}", t.ratio_min);
            assert!(t.ratio_max <= hp + b + 1e-9, "{}", t.ratio_max);
        }
    }

    #[test]
    fn degree_invariance_left_vs_right() {
        let f = x2_x3_family();
        let s = sample_sequence(&f, 3, 12);
        let p = ProjPointQ::from_i64(&[3, 1]);
        let l = left_orbit(&f, &s, &p, 12, Engine::Exact, 20).unwrap();
        let r = right_orbit(&f, &s, &p, 12, Engine::Exact, 20).unwrap();
        for (a, b) in l.records.iter().zip(&r.records) {
            assert_eq!(a.deg, b.deg);
        }
    }

    #[test]
    fn csv_shape() {
        let f = x2_x3_family();
        let s = sample_sequence(&f, 3, 4);
        let p = ProjPointQ::from_i64(&[3, 1]);
        let t = left_orbit(&f, &s, &p, 4, Engine::Exact, 20).unwrap();
        let csv = trace_to_csv(&t);
        let mut lines = csv.lines();
        assert_eq!(lines.next().unwrap(), "n,log_deg,log_height,engine,error_bound");
        assert_eq!(lines.count(), 5);
    }
}
