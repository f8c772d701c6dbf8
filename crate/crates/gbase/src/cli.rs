//! Command-line front end.
//!
//! Subcommands: `base`, `expand`, `eval`, `cdf`, `charfn`, `series`,
//! `verify`. Output is deterministic for identical inputs: CSV floats are
//! printed with 17 significant digits, grids are closed on both ends
//! (truncating at the upper bound on step mismatch), and parallel work is
//! split into fixed chunks merged in index order. `GBASE_THREADS` caps the
//! worker count (0 or unset = automatic). A JSON config file passed via
//! `--config` supplies defaults for any flag left unset.

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};
use num_bigint::BigUint;
use rayon::prelude::*;
use serde::Deserialize;

use crate::base::{LinearRecurrenceBase, RecurrenceCoefficients};
use crate::gfun::{parse_function_spec, GAdditiveFunction};
use crate::{empirical, series, transform, verify, Error, Result};

/// Defaults shared by every subcommand, loadable from `--config`.
#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub coeffs: Option<String>,
    pub max_level: Option<usize>,
    /// Function spec in the mini-language.
    pub f: Option<String>,
    /// Frequency grid "lo:hi:step".
    pub t_grid: Option<String>,
    /// Enumeration range bound.
    pub n: Option<u64>,
    /// Product truncation level.
    pub k: Option<usize>,
    /// Output format where a choice exists: "csv" or "json".
    pub format: Option<String>,
    /// Tolerance override for convergence verdicts.
    pub tol: Option<f64>,
}

impl RunConfig {
    fn load(path: &PathBuf) -> Result<Self> {
        let text = std::fs::read_to_string(path)?;
        let cfg: RunConfig = serde_json::from_str(&text)?;
        if let Some(tol) = cfg.tol {
            if !(tol > 0.0) {
                return Err(Error::Parse(format!("tolerance must be > 0, got {tol}")));
            }
        }
        Ok(cfg)
    }
}

#[derive(Parser)]
#[command(
    name = "gbase",
    about = "Linear recurrence numeration bases and digit-additive limit laws",
    version
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug, Clone, Default)]
struct Common {
    /// Recurrence coefficients "a0,a1,...".
    #[arg(long)]
    coeffs: Option<String>,
    /// Highest precomputed base level.
    #[arg(long)]
    max_level: Option<usize>,
    /// JSON file with defaults for unset flags.
    #[arg(long)]
    config: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Command {
    /// Construct a base and report its invariants.
    Base {
        #[command(flatten)]
        common: Common,
        #[command(subcommand)]
        action: BaseAction,
    },
    /// Greedy digit expansion of an integer.
    Expand {
        #[command(flatten)]
        common: Common,
        /// Integer to expand (decimal, arbitrary size).
        #[arg(long)]
        n: String,
        /// "text" (default) or "json".
        #[arg(long)]
        format: Option<String>,
    },
    /// Evaluate a digit-additive function at an integer.
    Eval {
        #[command(flatten)]
        common: Common,
        /// Function spec (geom:..., poly:..., table:PATH, sum:(..)+(..)).
        #[arg(long)]
        f: Option<String>,
        #[arg(long)]
        n: String,
    },
    /// Empirical distribution function on a value grid.
    Cdf {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        f: Option<String>,
        /// Enumeration bound N.
        #[arg(long = "N", visible_alias = "n")]
        n: Option<u64>,
        /// Value grid "lo:hi:step".
        #[arg(long)]
        grid: String,
    },
    /// Characteristic function over a frequency grid.
    Charfn {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        f: Option<String>,
        /// "product" (block-ratio product, default) or "empirical".
        #[arg(long, default_value = "product")]
        method: String,
        /// Frequency grid "lo:hi:step".
        #[arg(long = "t-grid")]
        t_grid: Option<String>,
        /// Product truncation level K.
        #[arg(long = "K", visible_alias = "k")]
        k: Option<usize>,
        /// Enumeration bound for the empirical method.
        #[arg(long = "N")]
        n: Option<u64>,
    },
    /// Canonical series diagnostics.
    Series {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        f: Option<String>,
        /// One of "s1", "s2", "order2".
        #[arg(long)]
        which: String,
        /// Number of layers.
        #[arg(long)]
        terms: Option<usize>,
        /// Convergence tolerance override.
        #[arg(long)]
        tol: Option<f64>,
    },
    /// Run a named invariant suite; exit code 0 iff everything passes.
    Verify {
        /// One of base, digits, transform, series, empirical, all.
        #[arg(long, default_value = "all")]
        suite: String,
    },
}

#[derive(Subcommand)]
enum BaseAction {
    /// Print the base summary as JSON.
    Info,
}

/// 17 significant digits, locale-independent.
fn fmt17(x: f64) -> String {
    format!("{x:.16e}")
}

/// Parses a closed grid "lo:hi:step"; truncates at `hi` when the step does
/// not divide the span exactly.
fn parse_grid(spec: &str) -> Result<Vec<f64>> {
    let parts: Vec<&str> = spec.split(':').collect();
    if parts.len() != 3 {
        return Err(Error::Parse(format!(
            "grid must be lo:hi:step, got {spec:?}"
        )));
    }
    let lo: f64 = parts[0]
        .parse()
        .map_err(|e| Error::Parse(format!("grid lo {:?}: {e}", parts[0])))?;
    let hi: f64 = parts[1]
        .parse()
        .map_err(|e| Error::Parse(format!("grid hi {:?}: {e}", parts[1])))?;
    let step: f64 = parts[2]
        .parse()
        .map_err(|e| Error::Parse(format!("grid step {:?}: {e}", parts[2])))?;
    if !(step > 0.0) {
        return Err(Error::Parse(format!("grid step must be > 0, got {step}")));
    }
    if hi < lo {
        return Err(Error::Parse(format!("empty grid: hi {hi} < lo {lo}")));
    }
    let count = ((hi - lo) / step + 1e-9).floor() as usize + 1;
    Ok((0..count).map(|i| lo + i as f64 * step).collect())
}

fn parse_big(s: &str) -> Result<BigUint> {
    s.parse::<BigUint>()
        .map_err(|e| Error::Parse(format!("integer {s:?}: {e}")))
}

struct Resolved {
    base: LinearRecurrenceBase,
    config: RunConfig,
}

const DEFAULT_MAX_LEVEL: usize = 64;

fn resolve(common: &Common) -> Result<Resolved> {
    let config = match &common.config {
        Some(path) => RunConfig::load(path)?,
        None => RunConfig::default(),
    };
    let coeffs_str = common
        .coeffs
        .clone()
        .or_else(|| config.coeffs.clone())
        .ok_or_else(|| Error::Parse("missing --coeffs (or config \"coeffs\")".into()))?;
    let max_level = common
        .max_level
        .or(config.max_level)
        .unwrap_or(DEFAULT_MAX_LEVEL);
    let base = LinearRecurrenceBase::build(RecurrenceCoefficients::parse(&coeffs_str)?, max_level)?;
    Ok(Resolved { base, config })
}

fn resolve_function(flag: &Option<String>, config: &RunConfig) -> Result<GAdditiveFunction> {
    let spec = flag
        .clone()
        .or_else(|| config.f.clone())
        .ok_or_else(|| Error::Parse("missing --f (or config \"f\")".into()))?;
    parse_function_spec(&spec)
}

fn init_threads() {
    if let Ok(var) = std::env::var("GBASE_THREADS") {
        if let Ok(n) = var.trim().parse::<usize>() {
            if n > 0 {
                // Ignore the error if a global pool already exists.
                let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
            }
        }
    }
}

/// Entry point; returns the process exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            // clap renders its own usage text; exit code 2 for usage errors.
            let _ = e.print();
            return if e.use_stderr() { 2 } else { 0 };
        }
    };
    init_threads();
    let stdout = std::io::stdout();
    let mut out = std::io::BufWriter::new(stdout.lock());
    match dispatch(cli, &mut out) {
        Ok(code) => {
            let _ = out.flush();
            code
        }
        Err(e) => {
            let _ = out.flush();
            eprintln!("error: {e}");
            1
        }
    }
}

fn dispatch(cli: Cli, out: &mut impl Write) -> Result<i32> {
    match cli.command {
        Command::Base { common, action } => {
            let r = resolve(&common)?;
            match action {
                BaseAction::Info => cmd_base_info(&r.base, out)?,
            }
            Ok(0)
        }
        Command::Expand { common, n, format } => {
            let r = resolve(&common)?;
            let format = format.or(r.config.format).unwrap_or_else(|| "text".into());
            cmd_expand(&r.base, &parse_big(&n)?, &format, out)?;
            Ok(0)
        }
        Command::Eval { common, f, n } => {
            let r = resolve(&common)?;
            let f = resolve_function(&f, &r.config)?;
            let value = f.eval(&r.base, &parse_big(&n)?)?;
            writeln!(out, "{}", fmt17(value))?;
            Ok(0)
        }
        Command::Cdf { common, f, n, grid } => {
            let r = resolve(&common)?;
            let f = resolve_function(&f, &r.config)?;
            let n = n
                .or(r.config.n)
                .ok_or_else(|| Error::Parse("missing --N (or config \"n\")".into()))?;
            let z_grid = parse_grid(&grid)?;
            cmd_cdf(&r.base, &f, n, &z_grid, out)?;
            Ok(0)
        }
        Command::Charfn {
            common,
            f,
            method,
            t_grid,
            k,
            n,
        } => {
            let r = resolve(&common)?;
            let f = resolve_function(&f, &r.config)?;
            let grid_spec = t_grid
                .or_else(|| r.config.t_grid.clone())
                .ok_or_else(|| Error::Parse("missing --t-grid (or config \"t_grid\")".into()))?;
            let ts = parse_grid(&grid_spec)?;
            match method.as_str() {
                "product" => {
                    let k = k.or(r.config.k).unwrap_or(25);
                    cmd_charfn_product(&r.base, &f, &ts, k, out)?;
                }
                "empirical" => {
                    let n = n
                        .or(r.config.n)
                        .ok_or_else(|| Error::Parse("missing --N (or config \"n\")".into()))?;
                    cmd_charfn_empirical(&r.base, &f, &ts, n, out)?;
                }
                other => {
                    return Err(Error::Parse(format!(
                        "unknown method {other:?}; expected product or empirical"
                    )))
                }
            }
            Ok(0)
        }
        Command::Series {
            common,
            f,
            which,
            terms,
            tol,
        } => {
            let r = resolve(&common)?;
            let f = resolve_function(&f, &r.config)?;
            let terms = terms
                .or(r.config.n.map(|n| n as usize))
                .ok_or_else(|| Error::Parse("missing --terms".into()))?;
            let tol = tol.or(r.config.tol).unwrap_or(series::SERIES_TOL);
            if !(tol > 0.0) {
                return Err(Error::Parse(format!("tolerance must be > 0, got {tol}")));
            }
            cmd_series(&r.base, &f, &which, terms, tol, out)?;
            Ok(0)
        }
        Command::Verify { suite } => {
            let checks = verify::run_suite(&suite)?;
            let mut failures = 0usize;
            for c in &checks {
                if c.pass {
                    writeln!(out, "ok {}", c.name)?;
                } else {
                    failures += 1;
                    writeln!(out, "FAIL {}: {}", c.name, c.detail)?;
                }
            }
            writeln!(out, "# {} checks, {} failed", checks.len(), failures)?;
            Ok(if failures == 0 { 0 } else { 1 })
        }
    }
}

fn cmd_base_info(base: &LinearRecurrenceBase, out: &mut impl Write) -> Result<()> {
    // Assembled by hand so floats keep 17 significant digits.
    let coeffs: Vec<String> = base
        .coeffs()
        .as_slice()
        .iter()
        .map(|a| a.to_string())
        .collect();
    let g: Vec<String> = base.g_all().iter().map(|g| format!("\"{g}\"")).collect();
    writeln!(out, "{{")?;
    writeln!(out, "  \"d\": {},", base.order())?;
    writeln!(out, "  \"coeffs\": [{}],", coeffs.join(", "))?;
    writeln!(out, "  \"alpha\": {},", fmt17(base.alpha()))?;
    writeln!(out, "  \"kappa\": {},", fmt17(base.kappa()))?;
    writeln!(out, "  \"kappa_err\": {},", fmt17(base.kappa_err()))?;
    writeln!(out, "  \"pisot\": \"{}\",", base.pisot())?;
    writeln!(out, "  \"primitive\": {},", base.primitive())?;
    writeln!(out, "  \"G\": [{}]", g.join(", "))?;
    writeln!(out, "}}")?;
    Ok(())
}

fn cmd_expand(
    base: &LinearRecurrenceBase,
    n: &BigUint,
    format: &str,
    out: &mut impl Write,
) -> Result<()> {
    let word = crate::digits::greedy_expand(base, n)?;
    match format {
        "text" => {
            writeln!(out, "{word}")?;
        }
        "json" => {
            let digits: Vec<String> = word.msf().iter().map(|d| d.to_string()).collect();
            writeln!(out, "{{\"n\": \"{n}\", \"digits\": [{}]}}", digits.join(", "))?;
        }
        other => {
            return Err(Error::Parse(format!(
                "unknown format {other:?}; expected text or json"
            )))
        }
    }
    Ok(())
}

fn cmd_cdf(
    base: &LinearRecurrenceBase,
    f: &GAdditiveFunction,
    n: u64,
    z_grid: &[f64],
    out: &mut impl Write,
) -> Result<()> {
    let points = empirical::empirical_cdf(base, f, n, z_grid)?;
    writeln!(out, "z,F_N")?;
    for (z, v) in points {
        writeln!(out, "{},{}", fmt17(z), fmt17(v))?;
    }
    Ok(())
}

fn cmd_charfn_product(
    base: &LinearRecurrenceBase,
    f: &GAdditiveFunction,
    ts: &[f64],
    k: usize,
    out: &mut impl Write,
) -> Result<()> {
    let rows: Vec<Result<(f64, num_complex::Complex64, f64)>> = ts
        .par_iter()
        .map(|&t| {
            let trace = transform::h_sequence(base, f, t, k)?;
            let phi = trace.phi_partial[k];
            let increment = if k >= 1 {
                (phi - trace.phi_partial[k - 1]).norm()
            } else {
                f64::NAN
            };
            Ok((t, phi, increment))
        })
        .collect();
    writeln!(out, "t,re,im,abs,k")?;
    let mut max_increment = 0.0f64;
    for row in rows {
        let (t, phi, incr) = row?;
        writeln!(
            out,
            "{},{},{},{},{k}",
            fmt17(t),
            fmt17(phi.re),
            fmt17(phi.im),
            fmt17(phi.norm())
        )?;
        if incr.is_finite() {
            max_increment = max_increment.max(incr);
        }
    }
    // Truncation witness: the largest last increment over the grid.
    writeln!(out, "# max_last_increment,{}", fmt17(max_increment))?;
    Ok(())
}

fn cmd_charfn_empirical(
    base: &LinearRecurrenceBase,
    f: &GAdditiveFunction,
    ts: &[f64],
    n: u64,
    out: &mut impl Write,
) -> Result<()> {
    let values = empirical::empirical_charfn_many(base, f, n, ts)?;
    writeln!(out, "t,re,im,abs")?;
    for (&t, z) in ts.iter().zip(values) {
        writeln!(
            out,
            "{},{},{},{}",
            fmt17(t),
            fmt17(z.re),
            fmt17(z.im),
            fmt17(z.norm())
        )?;
    }
    Ok(())
}

fn cmd_series(
    base: &LinearRecurrenceBase,
    f: &GAdditiveFunction,
    which: &str,
    terms: usize,
    tol: f64,
    out: &mut impl Write,
) -> Result<()> {
    let write_rows = |out: &mut dyn Write, rep: &series::SeriesReport| -> Result<()> {
        for n in 0..rep.terms.len() {
            writeln!(
                out,
                "{n},{},{}",
                fmt17(rep.terms[n]),
                fmt17(rep.partial_sums[n])
            )?;
        }
        Ok(())
    };
    writeln!(out, "n,term,partial_sum")?;
    match which {
        "s1" => {
            let mut rep = series::s1_terms(base, f, terms)?;
            rep.reassess(tol);
            write_rows(out, &rep)?;
            writeln!(out, "# verdict: {}", rep.verdict)?;
        }
        "s2" => {
            let mut rep = series::s2_terms(base, f, terms)?;
            rep.reassess(tol);
            write_rows(out, &rep)?;
            writeln!(out, "# verdict: {}", rep.verdict)?;
        }
        "order2" => {
            let (mut first, mut second) = series::order2_series(base, f, terms)?;
            first.reassess(tol);
            second.reassess(tol);
            write_rows(out, &first)?;
            writeln!(out, "# verdict_first: {}", first.verdict)?;
            writeln!(out, "# verdict_s2: {}", second.verdict)?;
        }
        other => {
            return Err(Error::Parse(format!(
                "unknown series {other:?}; expected s1, s2, or order2"
            )))
        }
    }
    Ok(())
}
