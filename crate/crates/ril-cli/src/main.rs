//! `ril` — command-line workbench for random iteration of rational maps:
//! seeded simulations, escape/orbit certificates, monoid counts, and Galois
//! tower reports. All randomness is explicit via --seed; outputs are a
//! deterministic function of the arguments.

use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{anyhow, bail, Context, Result};
use clap::{Args, Parser, Subcommand};
use serde::{Deserialize, Serialize};

use ril_core::exact::{parse_rational, FactorBudget, IntPoly};
use ril_core::heights::{
    escape_certificate, family_constants, orbit_height_count, slope_estimate,
    total_orbit_closure, EscapeCertificate, EscapeOutcome, FamilyConstants, OrbitClosureResult,
};
use ril_core::logreal::LogReal;
use ril_core::maps::{FamilyMap, MapJson, ProjPointQ};
use ril_core::monoid::{function_count_sandwich, lattice_count_simplex, simplex_asymptotic};
use ril_core::random::{
    left_orbit, monte_carlo_report, orbit, sample_sequence, trace_to_csv, Direction, Engine,
    MeasuredFamily,
};
use ril_core::galois::{
    ff_tower_verify, function_field_check, tower_report, FFQuadFamily, IrreducibilityVerdict,
    MaximalityVerdict, QuadFamily,
};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Exit codes: 0 success, 1 error, 2 certification-negative (a sufficient
/// criterion came back inconclusive — not an error, not a success).
const EXIT_INCONCLUSIVE: u8 = 2;

#[derive(Parser)]
#[command(name = "ril", version, about = "random-iteration arithmetic workbench")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Monte Carlo degree/height simulation over a measured family
    Simulate(SimulateArgs),
    /// Escape-point certificate: least level r with h strictly above B_S
    EscapeCert(EscapeArgs),
    /// Total-orbit closure: Finite set, infinite-orbit witness, or Unknown
    OrbitClosure(ClosureArgs),
    /// Count orbit points of height ≤ B along one sampled sequence
    OrbitCount(OrbitCountArgs),
    /// Lattice count in the weighted simplex, with the volume asymptotic
    MonoidCount(MonoidArgs),
    /// Galois tower arithmetic for quadratic families
    Galois {
        #[command(subcommand)]
        cmd: GaloisCmd,
    },
    /// Dump the height-control constants of a family
    Constants(ConstantsArgs),
    /// Re-validate an emitted certificate from its recorded witnesses
    Verify(VerifyArgs),
}

#[derive(Subcommand)]
enum GaloisCmd {
    /// Discriminants, ramification, irreducibility, maximality per level
    Tower(TowerArgs),
    /// Function-field criterion over Q(t) plus per-level tower verification
    FfCheck(FfCheckArgs),
}

/// Family file: {"version":1, "maps":[...], "weights":["1/2","1/2"]?}.
#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct FamilyFile {
    version: u32,
    maps: Vec<MapJson>,
    #[serde(default)]
    weights: Option<Vec<String>>,
}

/// Function-field family file: {"version":1, "cs":[[coeffs lowest-first]]}.
#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct FfFamilyFile {
    version: u32,
    cs: Vec<Vec<i64>>,
}

fn load_family(path: &PathBuf) -> Result<MeasuredFamily> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    let file: FamilyFile =
        serde_json::from_str(&text).with_context(|| format!("parsing {}", path.display()))?;
    if file.version != 1 {
        bail!("unsupported family schema version {}", file.version);
    }
    let maps: Result<Vec<FamilyMap>> = file
        .maps
        .iter()
        .map(|j| FamilyMap::from_json(j).map_err(|e| anyhow!("map: {e}")))
        .collect();
    let maps = maps?;
    match file.weights {
        Some(ws) => {
            let weights: Result<Vec<_>> = ws
                .iter()
                .map(|s| parse_rational(s).ok_or_else(|| anyhow!("bad weight '{s}'")))
                .collect();
            Ok(MeasuredFamily::new(maps, weights?)?)
        }
        None => Ok(MeasuredFamily::uniform(maps)?),
    }
}

fn load_quad_family(path: &PathBuf) -> Result<QuadFamily> {
    let family = load_family(path)?;
    let maps: Result<Vec<_>> = family
        .maps()
        .iter()
        .enumerate()
        .map(|(i, m)| {
            m.unicritical
                .clone()
                .ok_or_else(|| anyhow!("map {i} is not in unicritical form"))
        })
        .collect();
    Ok(QuadFamily::new(maps?)?)
}

fn parse_point(s: &str) -> Result<ProjPointQ> {
    ProjPointQ::parse(s).map_err(|e| anyhow!("bad point '{s}': {e}"))
}

fn parse_engine(s: &str) -> Result<Engine> {
    match s {
        "exact" => Ok(Engine::Exact),
        "log-approx" => Ok(Engine::LogApprox),
        _ => bail!("engine must be 'exact' or 'log-approx'"),
    }
}

fn parse_direction(s: &str) -> Result<Direction> {
    match s {
        "left" => Ok(Direction::Left),
        "right" => Ok(Direction::Right),
        _ => bail!("direction must be 'left' or 'right'"),
    }
}

/// "ln:42" → exact ln 42; a bare float → inexact value on the ln scale.
fn parse_log_value(s: &str) -> Result<LogReal> {
    if let Some(n) = s.strip_prefix("ln:") {
        let v: u64 = n.parse().with_context(|| format!("bad integer in '{s}'"))?;
        if v == 0 {
            bail!("ln:0 is not a valid log value");
        }
        Ok(LogReal::ln_u64(v))
    } else {
        let v: f64 = s.parse().with_context(|| format!("bad log value '{s}'"))?;
        Ok(LogReal::approx(v))
    }
}

/// Per-map constant overrides: "auto,ln:2,0.7" — "auto" uses the closed
/// form (x^d + c only), anything else is a C(φ) value on the ln scale.
fn build_constants(family: &MeasuredFamily, overrides: &Option<String>) -> Result<FamilyConstants> {
    let n = family.maps().len();
    let parsed: Vec<Option<LogReal>> = match overrides {
        None => vec![None; n],
        Some(spec) => {
            let entries: Vec<&str> = spec.split(',').map(str::trim).collect();
            if entries.len() != n {
                bail!("--constants needs {n} entries, got {}", entries.len());
            }
            entries
                .iter()
                .map(|e| {
                    if *e == "auto" {
                        Ok(None)
                    } else {
                        parse_log_value(e).map(Some)
                    }
                })
                .collect::<Result<_>>()?
        }
    };
    Ok(family_constants(family, &parsed)?)
}

fn write_output(out: &Option<PathBuf>, text: &str) -> Result<()> {
    match out {
        Some(path) => {
            fs::write(path, text).with_context(|| format!("writing {}", path.display()))?
        }
        None => println!("{text}"),
    }
    Ok(())
}

fn to_json<T: Serialize>(value: &T) -> Result<String> {
    Ok(serde_json::to_string_pretty(value)?)
}

#[derive(Args)]
struct SimulateArgs {
    #[arg(long)]
    family: PathBuf,
    #[arg(long)]
    point: String,
    #[arg(long)]
    seed: u64,
    #[arg(long, default_value_t = 100)]
    trials: usize,
    #[arg(long, default_value_t = 1000)]
    depth: usize,
    #[arg(long, default_value = "log-approx")]
    engine: String,
    #[arg(long, default_value = "left")]
    direction: String,
    /// Exact-engine depth cap (heights grow doubly exponentially)
    #[arg(long, default_value_t = 20)]
    exact_cap: usize,
    #[arg(long)]
    out: Option<PathBuf>,
    /// Also write the first trial's height trace as CSV
    #[arg(long)]
    trace_csv: Option<PathBuf>,
}

fn cmd_simulate(args: &SimulateArgs) -> Result<u8> {
    let family = load_family(&args.family)?;
    let p = parse_point(&args.point)?;
    let engine = parse_engine(&args.engine)?;
    let direction = parse_direction(&args.direction)?;
    let report = monte_carlo_report(
        &family,
        &p,
        args.trials,
        args.depth,
        engine,
        direction,
        args.seed,
        args.exact_cap,
    )?;
    if let Some(csv_path) = &args.trace_csv {
        let first_seed = ChaCha8Rng::seed_from_u64(args.seed).gen::<u64>();
        let sample = sample_sequence(&family, first_seed, args.depth);
        let trace = orbit(
            &family,
            &sample,
            &p,
            args.depth,
            engine,
            args.exact_cap,
            direction,
        )?;
        fs::write(csv_path, trace_to_csv(&trace))
            .with_context(|| format!("writing {}", csv_path.display()))?;
    }
    write_output(&args.out, &to_json(&report)?)?;
    Ok(0)
}

#[derive(Args)]
struct EscapeArgs {
    /// Per-map height-constant overrides, e.g. "auto,ln:2"
    #[arg(long)]
    constants: Option<String>,
    #[arg(long)]
    family: PathBuf,
    #[arg(long)]
    point: String,
    #[arg(long, default_value_t = 8)]
    r_max: usize,
    #[arg(long, default_value_t = 1_000_000)]
    eval_budget: usize,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
enum CertificateJson {
    EscapeCertificate(EscapeCertificate),
    OrbitClosure(OrbitClosureResult),
}

fn cmd_escape_cert(args: &EscapeArgs) -> Result<u8> {
    let family = load_family(&args.family)?;
    let constants = build_constants(&family, &args.constants)?;
    let p = parse_point(&args.point)?;
    match escape_certificate(&family, &constants, &p, args.r_max, args.eval_budget)? {
        EscapeOutcome::Certified(cert) => {
            write_output(&args.out, &to_json(&CertificateJson::EscapeCertificate(cert))?)?;
            Ok(0)
        }
        EscapeOutcome::NotCertified { r_max } => {
            write_output(
                &args.out,
                &to_json(&serde_json::json!({"kind": "not-certified", "r_max": r_max}))?,
            )?;
            Ok(EXIT_INCONCLUSIVE)
        }
    }
}

#[derive(Args)]
struct ClosureArgs {
    /// Per-map height-constant overrides, e.g. "auto,ln:2"
    #[arg(long)]
    constants: Option<String>,
    #[arg(long)]
    family: PathBuf,
    #[arg(long)]
    point: String,
    #[arg(long, default_value_t = 100_000)]
    point_budget: usize,
    #[arg(long, default_value_t = 64)]
    depth_budget: usize,
    #[arg(long)]
    out: Option<PathBuf>,
}

fn cmd_orbit_closure(args: &ClosureArgs) -> Result<u8> {
    let family = load_family(&args.family)?;
    let constants = build_constants(&family, &args.constants)?;
    let p = parse_point(&args.point)?;
    let result = total_orbit_closure(
        &family,
        &constants,
        &p,
        args.point_budget,
        args.depth_budget,
    )?;
    let code = match &result {
        OrbitClosureResult::Unknown { .. } => EXIT_INCONCLUSIVE,
        _ => 0,
    };
    write_output(&args.out, &to_json(&CertificateJson::OrbitClosure(result))?)?;
    Ok(code)
}

#[derive(Args)]
struct OrbitCountArgs {
    #[arg(long)]
    family: PathBuf,
    #[arg(long)]
    point: String,
    #[arg(long)]
    seed: u64,
    #[arg(long, default_value_t = 400)]
    depth: usize,
    /// ln B — the height bound on the natural-log scale
    #[arg(long)]
    bound_ln: f64,
    #[arg(long, default_value = "log-approx")]
    engine: String,
    #[arg(long, default_value_t = 20)]
    exact_cap: usize,
    #[arg(long)]
    out: Option<PathBuf>,
}

fn cmd_orbit_count(args: &OrbitCountArgs) -> Result<u8> {
    let family = load_family(&args.family)?;
    let p = parse_point(&args.point)?;
    let engine = parse_engine(&args.engine)?;
    let sample = sample_sequence(&family, args.seed, args.depth);
    let trace = left_orbit(&family, &sample, &p, args.depth, engine, args.exact_cap)?;
    // the bound is given as ln B; the counter takes B on the height scale
    let count = orbit_height_count(&trace, args.bound_ln.exp())?;
    let ladder: Vec<f64> = (1..=8)
        .map(|i| (args.bound_ln * i as f64 / 8.0).exp())
        .collect();
    let slope = slope_estimate(&trace, &ladder)?;
    let log_delta = family.log_delta();
    let report = serde_json::json!({
        "count": count,
        "slope_estimate": slope,
        "log_delta": log_delta,
        "expected_slope": 1.0 / log_delta,
        "seed": args.seed,
        "depth": args.depth,
        "bound_ln": args.bound_ln,
    });
    write_output(&args.out, &serde_json::to_string_pretty(&report)?)?;
    Ok(0)
}

#[derive(Args)]
struct MonoidArgs {
    /// Per-map height-constant overrides, e.g. "auto,ln:2"
    #[arg(long)]
    constants: Option<String>,
    /// Comma-separated weights, e.g. "ln:2,ln:3" (exact) or "0.693,1.098"
    #[arg(long)]
    weights: String,
    /// Length bound, e.g. "ln:100" or a float (natural-log scale)
    #[arg(long)]
    bound: String,
    /// Optional sandwich mode: count functions with h(f(P)) ≤ B
    #[arg(long)]
    family: Option<PathBuf>,
    #[arg(long)]
    point: Option<String>,
    #[arg(long, default_value_t = 40)]
    length_cap: usize,
    #[arg(long)]
    out: Option<PathBuf>,
}

fn cmd_monoid_count(args: &MonoidArgs) -> Result<u8> {
    let weights: Result<Vec<LogReal>> =
        args.weights.split(',').map(|s| parse_log_value(s.trim())).collect();
    let weights = weights?;
    if weights.is_empty() {
        bail!("need at least one weight");
    }
    let bound = parse_log_value(args.bound.trim())?;
    let count = lattice_count_simplex(&weights, &bound);
    let w_f64: Vec<f64> = weights.iter().map(|w| w.value()).collect();
    let asymptotic = simplex_asymptotic(&w_f64, bound.value());
    let mut report = serde_json::json!({
        "count": count,
        "asymptotic": asymptotic,
        "ratio": count as f64 / asymptotic,
    });
    if let (Some(fam_path), Some(point)) = (&args.family, &args.point) {
        let family = load_family(fam_path)?;
        let constants = build_constants(&family, &args.constants)?;
        let p = parse_point(point)?;
        let sandwich = function_count_sandwich(
            &family,
            constants.b_s.value(),
            &p,
            bound.value(),
            args.length_cap,
        )?;
        report["sandwich"] = serde_json::json!({
            "lower": sandwich.lower,
            "middle": sandwich.middle,
            "upper": sandwich.upper,
        });
    }
    write_output(&args.out, &serde_json::to_string_pretty(&report)?)?;
    Ok(0)
}

#[derive(Args)]
struct TowerArgs {
    #[arg(long)]
    family: PathBuf,
    /// Comma-separated map indices, outermost first, e.g. "0,0,1"
    #[arg(long)]
    prefix: String,
    #[arg(long, default_value_t = 6)]
    depth: usize,
    #[arg(long)]
    out: Option<PathBuf>,
}

fn parse_prefix(s: &str) -> Result<Vec<usize>> {
    s.split(',')
        .map(|t| {
            t.trim()
                .parse()
                .map_err(|_| anyhow!("bad prefix index '{t}'"))
        })
        .collect()
}

fn cmd_galois_tower(args: &TowerArgs) -> Result<u8> {
    let family = load_quad_family(&args.family)?;
    let prefix = parse_prefix(&args.prefix)?;
    let budget = FactorBudget::default();
    let report = tower_report(&family, &prefix, args.depth, &budget)?;
    let inconclusive = report.levels.iter().any(|l| {
        !matches!(l.maximality, MaximalityVerdict::CertifiedMaximal { .. })
            || matches!(
                l.irreducibility,
                IrreducibilityVerdict::Inconclusive { .. }
            )
    });
    write_output(&args.out, &to_json(&report)?)?;
    Ok(if inconclusive { EXIT_INCONCLUSIVE } else { 0 })
}

#[derive(Args)]
struct FfCheckArgs {
    #[arg(long)]
    family: PathBuf,
    #[arg(long, default_value_t = 5)]
    depth: usize,
    /// Verify one specific sequence; otherwise sample 10 with --seed
    #[arg(long)]
    prefix: Option<String>,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    out: Option<PathBuf>,
}

fn cmd_galois_ff_check(args: &FfCheckArgs) -> Result<u8> {
    let text = fs::read_to_string(&args.family)
        .with_context(|| format!("reading {}", args.family.display()))?;
    let file: FfFamilyFile = serde_json::from_str(&text)
        .with_context(|| format!("parsing {}", args.family.display()))?;
    if file.version != 1 {
        bail!("unsupported family schema version {}", file.version);
    }
    let cs: Vec<IntPoly> = file.cs.iter().map(|c| IntPoly::from_i64(c)).collect();
    let s = cs.len();
    let family = FFQuadFamily::new(cs)?;
    let check = function_field_check(&family);
    let mut ok = check.applies;
    let mut towers = Vec::new();
    if args.depth > 0 && ok {
        let prefixes: Vec<Vec<usize>> = match (&args.prefix, args.seed) {
            (Some(p), _) => vec![parse_prefix(p)?],
            (None, Some(seed)) => {
                let mut rng = ChaCha8Rng::seed_from_u64(seed);
                (0..10)
                    .map(|_| (0..args.depth).map(|_| rng.gen_range(0..s)).collect())
                    .collect()
            }
            (None, None) => bail!("need --prefix or --seed for tower verification"),
        };
        for prefix in prefixes {
            let levels = ff_tower_verify(&family, &prefix, args.depth)?;
            let violations: Vec<_> = levels
                .iter()
                .filter_map(|l| l.violation().map(|v| (l.n, v)))
                .collect();
            if !violations.is_empty() {
                ok = false;
            }
            towers.push(serde_json::json!({
                "prefix": prefix,
                "levels": levels,
                "violations": violations,
            }));
        }
    }
    let report = serde_json::json!({
        "criterion": check,
        "towers": towers,
    });
    write_output(&args.out, &serde_json::to_string_pretty(&report)?)?;
    Ok(if ok { 0 } else { EXIT_INCONCLUSIVE })
}

#[derive(Args)]
struct ConstantsArgs {
    /// Per-map height-constant overrides, e.g. "auto,ln:2"
    #[arg(long)]
    constants: Option<String>,
    #[arg(long)]
    family: PathBuf,
    #[arg(long)]
    out: Option<PathBuf>,
}

fn constants_json(c: &FamilyConstants) -> serde_json::Value {
    serde_json::json!({
        "d_s": c.d_s,
        "c_s": c.c_s.value(),
        "b_s": c.b_s.value(),
        "c_s_exact": c.c_s.is_exact(),
        "b_s_exact": c.b_s.is_exact(),
        "sources": c.sources,
    })
}

fn cmd_constants(args: &ConstantsArgs) -> Result<u8> {
    let family = load_family(&args.family)?;
    let constants = build_constants(&family, &args.constants)?;
    write_output(&args.out, &serde_json::to_string_pretty(&constants_json(&constants))?)?;
    Ok(0)
}

#[derive(Args)]
struct VerifyArgs {
    /// Per-map height-constant overrides, e.g. "auto,ln:2"
    #[arg(long)]
    constants: Option<String>,
    /// Certificate JSON emitted by escape-cert or orbit-closure
    #[arg(long)]
    cert: PathBuf,
    #[arg(long)]
    family: PathBuf,
    #[arg(long)]
    point: String,
}

/// Recomputes a certificate's claims from its recorded witnesses: escape
/// witnesses must re-evaluate to points of height strictly above B_S; a
/// Finite closure must be exactly closed under every map; an infinite-orbit
/// witness must re-evaluate with height above B_S.
fn cmd_verify(args: &VerifyArgs) -> Result<u8> {
    let family = load_family(&args.family)?;
    let constants = build_constants(&family, &args.constants)?;
    let p = parse_point(&args.point)?;
    let text = fs::read_to_string(&args.cert)
        .with_context(|| format!("reading {}", args.cert.display()))?;
    let cert: CertificateJson = serde_json::from_str(&text)?;
    let ok = match cert {
        CertificateJson::EscapeCertificate(c) => {
            let mut ok = (c.b_s - constants.b_s.value()).abs() < 1e-12;
            for w in &c.witnesses {
                let mut q = p.clone();
                // witness strings are outermost-first
                for &i in w.string.iter().rev() {
                    let m = family
                        .maps()
                        .get(i)
                        .ok_or_else(|| anyhow!("witness index {i} out of range"))?;
                    q = m.homog.evaluate(&q)?;
                }
                let h = q.height();
                ok &= w.string.len() == c.level
                    && q.render() == w.value
                    && constants.b_s.lt(&h)
                    && (h.value() - w.height).abs() < 1e-12;
            }
            ok
        }
        CertificateJson::OrbitClosure(OrbitClosureResult::Finite { points }) => {
            let set: Result<Vec<ProjPointQ>> = points
                .iter()
                .map(|s| parse_point(s))
                .collect();
            let set = set?;
            let mut ok = set.contains(&p);
            for q in &set {
                for m in family.maps() {
                    ok &= set.contains(&m.homog.evaluate(q)?);
                }
            }
            ok
        }
        CertificateJson::OrbitClosure(OrbitClosureResult::InfiniteCertified {
            witness_string,
            value,
            height,
        }) => {
            let mut q = p.clone();
            for &i in witness_string.iter().rev() {
                let m = family
                    .maps()
                    .get(i)
                    .ok_or_else(|| anyhow!("witness index {i} out of range"))?;
                q = m.homog.evaluate(&q)?;
            }
            let h = q.height();
            q.render() == value && constants.b_s.lt(&h) && (h.value() - height).abs() < 1e-12
        }
        CertificateJson::OrbitClosure(OrbitClosureResult::Unknown { .. }) => false,
    };
    println!("{}", serde_json::json!({"verified": ok}));
    Ok(if ok { 0 } else { EXIT_INCONCLUSIVE })
}

fn run() -> Result<u8> {
    if let Ok(threads) = std::env::var("RIL_THREADS") {
        let n: usize = threads
            .parse()
            .map_err(|_| anyhow!("RIL_THREADS must be a positive integer"))?;
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
            .ok();
    }
    let cli = Cli::parse();
    match &cli.cmd {
        Cmd::Simulate(a) => cmd_simulate(a),
        Cmd::EscapeCert(a) => cmd_escape_cert(a),
        Cmd::OrbitClosure(a) => cmd_orbit_closure(a),
        Cmd::OrbitCount(a) => cmd_orbit_count(a),
        Cmd::MonoidCount(a) => cmd_monoid_count(a),
        Cmd::Galois { cmd } => match cmd {
            GaloisCmd::Tower(a) => cmd_galois_tower(a),
            GaloisCmd::FfCheck(a) => cmd_galois_ff_check(a),
        },
        Cmd::Constants(a) => cmd_constants(a),
        Cmd::Verify(a) => cmd_verify(a),
    }
}

fn main() -> ExitCode {
    match run() {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
    }
}
