//! Command-line frontend: every subcommand is a thin shell over one
//! library operation, emitting plot-ready CSV (or a single value) to
//! stdout or `--out`.

mod format;

use clap::{Parser, Subcommand, ValueEnum};
use flipdist::bitspace::BitString;
use flipdist::maxsat::{self, ClauseFn, SubsetBudget};
use flipdist::mutation::{self, FitnessLevels};
use flipdist::onemax;
use flipdist::oracle::{simulate_ea, RngSeed};
use flipdist::runtime::{self, BasisFn};
use flipdist::scalar::Scalar;
use flipdist::walsh::{transform, FunctionTable};
use flipdist::BigRational;
use format::{fmt_float, fmt_rational};
use num_bigint::BigInt;
use num_traits::{One, Zero};
use rayon::prelude::*;
use std::fs::File;
use std::io::{self, BufRead, BufReader, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::str::FromStr;

#[derive(Parser)]
#[command(
    name = "flipdist",
    version,
    about = "Exact fitness distributions under bit-flip mutation and exact (1+lambda) EA runtimes on Onemax"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// Write output to this file instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Command {
    /// Dump the n-th order Krawtchouk matrix as integer CSV.
    Krawtchouk {
        #[arg(long)]
        n: usize,
    },
    /// Walsh-transform a value table ("bitstring,value" rows) and dump
    /// the coefficients as "w,coefficient" rows.
    Walsh {
        /// Value table file, one "bitstring,value" row per string.
        #[arg(long)]
        table: PathBuf,
        /// Exact rational arithmetic; values may be fractions.
        #[arg(long)]
        exact: bool,
    },
    /// Post-mutation fitness distribution (p, fitness, probability) for
    /// an enumerated table, the Onemax family, or a MAX-SAT instance.
    Distribution(DistributionArgs),
    /// Fitness-level transition matrix of the Onemax family, with the
    /// target fitness values as CSV header.
    OnemaxVarpi {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        p: String,
        /// Offspring per generation (best-of-lambda fold).
        #[arg(long, default_value_t = 1)]
        lambda: usize,
        #[arg(long)]
        exact: bool,
    },
    /// Expected (1+lambda) EA runtime on Onemax at one p, or a CSV curve
    /// over a p range.
    OnemaxRuntime {
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = 1)]
        lambda: usize,
        /// Bit-flip probability (decimal or fraction like 1/50).
        #[arg(long, conflicts_with = "p_range")]
        p: Option<String>,
        /// Sweep "start:stop:count" emitting one (p, runtime) row each.
        #[arg(long)]
        p_range: Option<String>,
        #[arg(long)]
        exact: bool,
    },
    /// Optimal mutation rate per n: CSV rows (n, p_star, runtime, c_n).
    OptimalP {
        /// Inclusive range "lo:hi" (or a single n).
        #[arg(long)]
        n_range: String,
        #[arg(long, default_value_t = 1)]
        lambda: usize,
    },
    /// Runtime as a function of offspring count at fixed n and p.
    LambdaSweep {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        p: String,
        /// Inclusive range "lo:hi".
        #[arg(long)]
        lambda_range: String,
    },
    /// Least-squares fit of a named basis to a two-column CSV.
    Fit {
        #[arg(long, value_enum)]
        basis: FitBasis,
        /// CSV file with x,y rows (a header line is skipped).
        #[arg(long)]
        input: PathBuf,
    },
    /// F matrix of the falsified-clause count of a CNF instance at one
    /// assignment (or one clause's Walsh coefficients).
    MaxsatFmatrix {
        /// DIMACS CNF file.
        #[arg(long)]
        cnf: PathBuf,
        /// Assignment bits, leftmost bit = variable 1.
        #[arg(long)]
        x: String,
        #[arg(long, default_value_t = 2)]
        mmax: usize,
        #[arg(long)]
        exact: bool,
        /// Override the power cap of the subset expansion.
        #[arg(long)]
        max_power: Option<usize>,
        /// Override the subset-count cap of the expansion.
        #[arg(long)]
        max_subsets: Option<u64>,
        /// Dump the Walsh coefficients of this clause (0-based index)
        /// instead of the F matrix.
        #[arg(long)]
        clause_walsh: Option<usize>,
        /// Which indicator the coefficient dump refers to.
        #[arg(long, value_enum, default_value_t = WhichClauseFn::Falsified)]
        which: WhichClauseFn,
    },
    /// Monte-Carlo mean hitting time of the (1+lambda) EA on Onemax.
    Simulate {
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = 1)]
        lambda: usize,
        #[arg(long)]
        p: String,
        #[arg(long, default_value_t = 10_000)]
        runs: u64,
        #[arg(long, default_value_t = 1)]
        seed: u64,
    },
}

#[derive(clap::Args)]
struct DistributionArgs {
    #[arg(long, value_enum)]
    source: DistSource,
    /// Bit-flip probability (decimal or fraction).
    #[arg(long)]
    p: String,
    /// Dimension (Onemax source).
    #[arg(long)]
    n: Option<usize>,
    /// Solution bits (table and MAX-SAT sources; optional for Onemax).
    #[arg(long)]
    x: Option<String>,
    /// Weight of the solution (Onemax source; alternative to --x).
    #[arg(long)]
    ones: Option<usize>,
    /// Value table file for --source table.
    #[arg(long)]
    table: Option<PathBuf>,
    /// DIMACS CNF file for --source maxsat.
    #[arg(long)]
    cnf: Option<PathBuf>,
    /// Highest moment row to build (defaults to the level count - 1).
    #[arg(long)]
    mmax: Option<usize>,
    /// Enumerate the attained level set of g instead of assuming the
    /// full 0..=|C| ladder (MAX-SAT source, small n only).
    #[arg(long)]
    prune_levels: bool,
    #[arg(long)]
    exact: bool,
    /// Override the power cap of the MAX-SAT subset expansion.
    #[arg(long)]
    max_power: Option<usize>,
    /// Override the subset-count cap of the MAX-SAT subset expansion.
    #[arg(long)]
    max_subsets: Option<u64>,
}

#[derive(Clone, Copy, ValueEnum)]
enum DistSource {
    Onemax,
    Table,
    Maxsat,
}

#[derive(Clone, Copy, ValueEnum)]
enum FitBasis {
    /// E = A n + B n ln n
    Nlogn,
    /// E = A + B / lambda
    InvLambda,
}

#[derive(Clone, Copy, ValueEnum, PartialEq)]
enum WhichClauseFn {
    Satisfied,
    Falsified,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let mut out: Box<dyn Write> = match &cli.out {
        Some(path) => match File::create(path) {
            Ok(f) => Box::new(BufWriter::new(f)),
            Err(e) => {
                eprintln!("error: cannot create {}: {e}", path.display());
                return ExitCode::FAILURE;
            }
        },
        None => Box::new(BufWriter::new(io::stdout())),
    };
    match run(cli.command, &mut out).and_then(|()| out.flush().map_err(|e| e.to_string())) {
        Ok(()) => ExitCode::SUCCESS,
        Err(msg) => {
            eprintln!("error: {msg}");
            ExitCode::FAILURE
        }
    }
}

fn run(command: Command, out: &mut dyn Write) -> Result<(), String> {
    match command {
        Command::Krawtchouk { n } => {
            let k = flipdist::KrawtchoukMatrix::build(n);
            k.write_csv(out).map_err(|e| e.to_string())
        }
        Command::Walsh { table, exact } => walsh_cmd(&table, exact, out),
        Command::Distribution(args) => distribution_cmd(args, out),
        Command::OnemaxVarpi { n, p, lambda, exact } => varpi_cmd(n, &p, lambda, exact, out),
        Command::OnemaxRuntime { n, lambda, p, p_range, exact } => {
            runtime_cmd(n, lambda, p.as_deref(), p_range.as_deref(), exact, out)
        }
        Command::OptimalP { n_range, lambda } => optimal_cmd(&n_range, lambda, out),
        Command::LambdaSweep { n, p, lambda_range } => {
            lambda_sweep_cmd(n, &p, &lambda_range, out)
        }
        Command::Fit { basis, input } => fit_cmd(basis, &input, out),
        Command::MaxsatFmatrix {
            cnf,
            x,
            mmax,
            exact,
            max_power,
            max_subsets,
            clause_walsh,
            which,
        } => maxsat_cmd(
            &cnf, &x, mmax, exact, max_power, max_subsets, clause_walsh, which, out,
        ),
        Command::Simulate { n, lambda, p, runs, seed } => {
            let p = parse_prob_f64(&p)?;
            let result = simulate_ea(n, lambda, p, runs, RngSeed(seed)).map_err(stringify)?;
            writeln!(out, "mean,ci99_halfwidth,runs,generator").map_err(stringify)?;
            writeln!(
                out,
                "{},{},{},{}",
                fmt_float(result.mean),
                fmt_float(result.ci99_halfwidth),
                result.runs,
                result.generator
            )
            .map_err(stringify)
        }
    }
}

fn stringify<E: std::fmt::Display>(e: E) -> String {
    e.to_string()
}

/// Parse a probability or value: decimal ("0.25"), fraction ("1/4"), or
/// integer, as an exact rational.
fn parse_rational(s: &str) -> Result<BigRational, String> {
    let s = s.trim();
    if let Some((num, den)) = s.split_once('/') {
        let num = BigInt::from_str(num.trim()).map_err(|e| format!("bad numerator: {e}"))?;
        let den = BigInt::from_str(den.trim()).map_err(|e| format!("bad denominator: {e}"))?;
        if den.is_zero() {
            return Err("zero denominator".into());
        }
        return Ok(BigRational::new(num, den));
    }
    let (sign, body) = match s.strip_prefix('-') {
        Some(rest) => (-BigInt::one(), rest),
        None => (BigInt::one(), s),
    };
    let (int_part, frac_part) = match body.split_once('.') {
        Some((i, f)) => (i, f),
        None => (body, ""),
    };
    if int_part.is_empty() && frac_part.is_empty() {
        return Err(format!("cannot parse {s:?} as a number"));
    }
    let digits = format!("{int_part}{frac_part}");
    let value = BigInt::from_str(if digits.is_empty() { "0" } else { &digits })
        .map_err(|e| format!("cannot parse {s:?}: {e}"))?;
    let scale = BigInt::from(10u32).pow(frac_part.len() as u32);
    Ok(BigRational::new(sign * value, scale))
}

fn parse_prob_f64(s: &str) -> Result<f64, String> {
    let r = parse_rational(s)?;
    Ok(r.to_f64())
}

fn parse_usize_range(s: &str) -> Result<(usize, usize), String> {
    match s.split_once(':') {
        Some((a, b)) => {
            let lo = a.trim().parse().map_err(|e| format!("bad range start: {e}"))?;
            let hi = b.trim().parse().map_err(|e| format!("bad range end: {e}"))?;
            if lo > hi {
                return Err(format!("empty range {s:?}"));
            }
            Ok((lo, hi))
        }
        None => {
            let v = s.trim().parse().map_err(|e| format!("bad range: {e}"))?;
            Ok((v, v))
        }
    }
}

fn parse_f64_grid(s: &str) -> Result<Vec<f64>, String> {
    let parts: Vec<&str> = s.split(':').collect();
    if parts.len() != 3 {
        return Err(format!("expected start:stop:count, got {s:?}"));
    }
    let start = parse_prob_f64(parts[0])?;
    let stop = parse_prob_f64(parts[1])?;
    let count: usize = parts[2].trim().parse().map_err(|e| format!("bad count: {e}"))?;
    if count < 2 {
        return Err("grid needs at least 2 points".into());
    }
    let step = (stop - start) / (count - 1) as f64;
    Ok((0..count).map(|i| start + step * i as f64).collect())
}

fn parse_bits(s: &str) -> Result<BitString, String> {
    s.parse::<BitString>().map_err(stringify)
}

/// Read a "bitstring,value" table covering all 2^n strings.
fn read_table<S: Scalar>(
    path: &Path,
    parse: impl Fn(&str) -> Result<S, String>,
) -> Result<FunctionTable<S>, String> {
    let file = File::open(path).map_err(|e| format!("cannot open {}: {e}", path.display()))?;
    let mut n: Option<usize> = None;
    let mut slots: Vec<Option<S>> = Vec::new();
    for (lineno, line) in BufReader::new(file).lines().enumerate() {
        let line = line.map_err(stringify)?;
        let trimmed = line.trim();
        if trimmed.is_empty() || trimmed.starts_with('#') {
            continue;
        }
        let (bits, value) = trimmed
            .split_once(',')
            .ok_or_else(|| format!("line {}: expected bitstring,value", lineno + 1))?;
        let x = parse_bits(bits.trim())?;
        let n = *n.get_or_insert_with(|| {
            slots = vec![None; 1 << x.len()];
            x.len()
        });
        if x.len() != n {
            return Err(format!("line {}: inconsistent bit length", lineno + 1));
        }
        let idx = x.to_index();
        if slots[idx].is_some() {
            return Err(format!("line {}: duplicate entry for {x}", lineno + 1));
        }
        slots[idx] = Some(parse(value.trim())?);
    }
    let n = n.ok_or("empty table")?;
    let values: Option<Vec<S>> = slots.into_iter().collect();
    let values = values.ok_or("table does not cover all strings")?;
    FunctionTable::new(n, values).map_err(stringify)
}

fn walsh_cmd(table: &Path, exact: bool, out: &mut dyn Write) -> Result<(), String> {
    writeln!(out, "w,coefficient").map_err(stringify)?;
    if exact {
        let f = read_table::<BigRational>(table, |s| parse_rational(s))?;
        let e = transform(&f);
        for (i, c) in e.coeffs().iter().enumerate() {
            let w = BitString::from_index(i, f.n());
            writeln!(out, "{w},{}", fmt_rational(c)).map_err(stringify)?;
        }
    } else {
        let f = read_table::<f64>(table, |s| parse_prob_f64(s))?;
        let e = transform(&f);
        for (i, c) in e.coeffs().iter().enumerate() {
            let w = BitString::from_index(i, f.n());
            writeln!(out, "{w},{}", fmt_float(*c)).map_err(stringify)?;
        }
    }
    Ok(())
}

fn budget_from(max_power: Option<usize>, max_subsets: Option<u64>) -> SubsetBudget {
    let mut budget = SubsetBudget::default();
    if let Some(mp) = max_power {
        budget.max_power = mp;
    }
    if let Some(ms) = max_subsets {
        budget.max_subsets = ms;
    }
    budget
}

fn distribution_cmd(args: DistributionArgs, out: &mut dyn Write) -> Result<(), String> {
    if args.exact {
        let p = parse_rational(&args.p)?;
        let (f, levels) = distribution_inputs::<BigRational>(&args, |s| parse_rational(s))?;
        let pi = mutation::distribution(&f, &levels, &p).map_err(stringify)?;
        writeln!(out, "p,fitness,probability").map_err(stringify)?;
        for (xi, pr) in levels.values().iter().zip(pi.entries()) {
            writeln!(out, "{},{},{}", fmt_rational(&p), fmt_rational(xi), fmt_rational(pr))
                .map_err(stringify)?;
        }
    } else {
        let p = parse_prob_f64(&args.p)?;
        let (f, levels) = distribution_inputs::<f64>(&args, |s| parse_prob_f64(s))?;
        let pi = mutation::distribution(&f, &levels, &p).map_err(stringify)?;
        writeln!(out, "p,fitness,probability").map_err(stringify)?;
        for (xi, pr) in levels.values().iter().zip(pi.entries()) {
            writeln!(out, "{},{},{}", fmt_float(p), fmt_float(*xi), fmt_float(*pr))
                .map_err(stringify)?;
        }
    }
    Ok(())
}

fn distribution_inputs<S: Scalar>(
    args: &DistributionArgs,
    parse_value: impl Fn(&str) -> Result<S, String>,
) -> Result<(flipdist::FMatrix<S>, FitnessLevels<S>), String> {
    match args.source {
        DistSource::Onemax => {
            let n = args.n.ok_or("--n is required for --source onemax")?;
            let ones = match (&args.x, args.ones) {
                (Some(bits), None) => {
                    let x = parse_bits(bits)?;
                    if x.len() != n {
                        return Err(format!("--x has {} bits, expected {n}", x.len()));
                    }
                    x.popcount()
                }
                (None, Some(ones)) => ones,
                (None, None) => return Err("need --x or --ones".into()),
                (Some(_), Some(_)) => return Err("--x and --ones are exclusive".into()),
            };
            let levels = onemax::onemax_levels::<S>(n);
            let mmax = args.mmax.unwrap_or(levels.q() - 1);
            let f = onemax::onemax_f::<S>(n, ones, mmax).map_err(stringify)?;
            Ok((f, levels))
        }
        DistSource::Table => {
            let path = args.table.as_ref().ok_or("--table is required")?;
            let table = read_table::<S>(path, parse_value)?;
            let bits = args.x.as_ref().ok_or("--x is required for --source table")?;
            let x = parse_bits(bits)?;
            let levels = FitnessLevels::from_table(&table);
            let mmax = args.mmax.unwrap_or(levels.q() - 1);
            let f = mutation::build_f_enumerative(&table, mmax, &x).map_err(stringify)?;
            Ok((f, levels))
        }
        DistSource::Maxsat => {
            let path = args.cnf.as_ref().ok_or("--cnf is required")?;
            let instance = read_cnf(path)?;
            let bits = args.x.as_ref().ok_or("--x is required for --source maxsat")?;
            let x = parse_bits(bits)?;
            let levels = if args.prune_levels {
                instance.clauses.attained_g_levels::<S>().map_err(stringify)?
            } else {
                instance.clauses.default_g_levels::<S>()
            };
            let mmax = args.mmax.unwrap_or(levels.q() - 1);
            let budget = budget_from(args.max_power, args.max_subsets);
            let f = maxsat::maxsat_f::<S>(&instance.clauses, &x, mmax, &budget)
                .map_err(stringify)?;
            Ok((f, levels))
        }
    }
}

fn read_cnf(path: &Path) -> Result<maxsat::DimacsInstance, String> {
    let file = File::open(path).map_err(|e| format!("cannot open {}: {e}", path.display()))?;
    let instance = maxsat::parse_dimacs(BufReader::new(file)).map_err(stringify)?;
    for w in &instance.warnings {
        eprintln!("warning: {w}");
    }
    Ok(instance)
}

fn varpi_cmd(
    n: usize,
    p: &str,
    lambda: usize,
    exact: bool,
    out: &mut dyn Write,
) -> Result<(), String> {
    if exact {
        let p = parse_rational(p)?;
        let vp = onemax::varpi(n, &p).map_err(stringify)?;
        let vp = runtime::varpi_lambda(&vp, lambda).map_err(stringify)?;
        write_varpi(&vp, |v: &BigRational| fmt_rational(v), out)
    } else {
        let p = parse_prob_f64(p)?;
        let vp = runtime::varpi_stable_f64(n, p).map_err(stringify)?;
        let vp = runtime::varpi_lambda(&vp, lambda).map_err(stringify)?;
        write_varpi(&vp, |v: &f64| fmt_float(*v), out)
    }
}

fn write_varpi<S: Scalar>(
    vp: &onemax::VarpiMatrix<S>,
    fmt: impl Fn(&S) -> String,
    out: &mut dyn Write,
) -> Result<(), String> {
    let header: Vec<String> = (0..vp.q())
        .map(|j| format!("to_{}", 2 * j as i64 - vp.n() as i64))
        .collect();
    writeln!(out, "fitness,{}", header.join(",")).map_err(stringify)?;
    for i in 0..vp.q() {
        let cells: Vec<String> = vp.row(i).iter().map(&fmt).collect();
        writeln!(out, "{},{}", 2 * i as i64 - vp.n() as i64, cells.join(","))
            .map_err(stringify)?;
    }
    Ok(())
}

fn runtime_cmd(
    n: usize,
    lambda: usize,
    p: Option<&str>,
    p_range: Option<&str>,
    exact: bool,
    out: &mut dyn Write,
) -> Result<(), String> {
    match (p, p_range) {
        (Some(p), None) => {
            if exact {
                let p = parse_rational(p)?;
                let e = runtime::onemax_expected_runtime_exact(n, lambda, &p)
                    .map_err(stringify)?;
                writeln!(out, "{}", fmt_rational(&e)).map_err(stringify)
            } else {
                let p = parse_prob_f64(p)?;
                let e = runtime::onemax_expected_runtime_f64(n, lambda, p).map_err(stringify)?;
                writeln!(out, "{}", fmt_float(e)).map_err(stringify)
            }
        }
        (None, Some(range)) => {
            let grid = parse_f64_grid(range)?;
            let rows: Vec<(f64, Result<f64, flipdist::Error>)> = grid
                .par_iter()
                .map(|&p| (p, runtime::onemax_expected_runtime_f64(n, lambda, p)))
                .collect();
            writeln!(out, "p,expected_runtime").map_err(stringify)?;
            for (p, e) in rows {
                let e = e.map_err(stringify)?;
                writeln!(out, "{},{}", fmt_float(p), fmt_float(e)).map_err(stringify)?;
            }
            Ok(())
        }
        _ => Err("exactly one of --p or --p-range is required".into()),
    }
}

fn optimal_cmd(n_range: &str, lambda: usize, out: &mut dyn Write) -> Result<(), String> {
    let (lo, hi) = parse_usize_range(n_range)?;
    let rows: Vec<(usize, Result<runtime::OptimalP, flipdist::Error>)> = (lo..=hi)
        .into_par_iter()
        .map(|n| (n, runtime::optimal_p(n, lambda)))
        .collect();
    writeln!(out, "n,p_star,expected_runtime,c_n").map_err(stringify)?;
    for (n, opt) in rows {
        let opt = opt.map_err(stringify)?;
        writeln!(
            out,
            "{n},{:.5},{:.3},{:.5}",
            opt.p_star,
            opt.runtime,
            opt.p_star * n as f64
        )
        .map_err(stringify)?;
    }
    Ok(())
}

fn lambda_sweep_cmd(
    n: usize,
    p: &str,
    lambda_range: &str,
    out: &mut dyn Write,
) -> Result<(), String> {
    let p = parse_prob_f64(p)?;
    let (lo, hi) = parse_usize_range(lambda_range)?;
    if lo == 0 {
        return Err("lambda range must start at 1".into());
    }
    let rows: Vec<(usize, Result<f64, flipdist::Error>)> = (lo..=hi)
        .into_par_iter()
        .map(|lambda| (lambda, runtime::onemax_expected_runtime_f64(n, lambda, p)))
        .collect();
    writeln!(out, "lambda,expected_runtime").map_err(stringify)?;
    for (lambda, e) in rows {
        let e = e.map_err(stringify)?;
        writeln!(out, "{lambda},{}", fmt_float(e)).map_err(stringify)?;
    }
    Ok(())
}

fn fit_cmd(basis: FitBasis, input: &Path, out: &mut dyn Write) -> Result<(), String> {
    let file = File::open(input).map_err(|e| format!("cannot open {}: {e}", input.display()))?;
    let mut points = Vec::new();
    for line in BufReader::new(file).lines() {
        let line = line.map_err(stringify)?;
        let trimmed = line.trim();
        if trimmed.is_empty() || trimmed.starts_with('#') {
            continue;
        }
        let Some((x, y)) = trimmed.split_once(',') else { continue };
        match (x.trim().parse::<f64>(), y.trim().parse::<f64>()) {
            (Ok(x), Ok(y)) => points.push((x, y)),
            _ => continue, // header or junk line
        }
    }
    let basis: &[BasisFn] = match basis {
        FitBasis::Nlogn => &[BasisFn::X, BasisFn::XLnX],
        FitBasis::InvLambda => &[BasisFn::Constant, BasisFn::InvX],
    };
    let coeffs = runtime::fit_least_squares(&points, basis).map_err(stringify)?;
    writeln!(out, "basis,coefficient").map_err(stringify)?;
    for (b, c) in basis.iter().zip(&coeffs) {
        writeln!(out, "{},{}", b.label(), fmt_float(*c)).map_err(stringify)?;
    }
    Ok(())
}

#[allow(clippy::too_many_arguments)]
fn maxsat_cmd(
    cnf: &Path,
    x: &str,
    mmax: usize,
    exact: bool,
    max_power: Option<usize>,
    max_subsets: Option<u64>,
    clause_walsh: Option<usize>,
    which: WhichClauseFn,
    out: &mut dyn Write,
) -> Result<(), String> {
    let instance = read_cnf(cnf)?;
    if let Some(idx) = clause_walsh {
        let clause = instance
            .clauses
            .clauses()
            .get(idx)
            .ok_or_else(|| format!("clause index {idx} out of range"))?;
        let which = match which {
            WhichClauseFn::Satisfied => ClauseFn::Satisfied,
            WhichClauseFn::Falsified => ClauseFn::Falsified,
        };
        writeln!(out, "w,coefficient").map_err(stringify)?;
        // the expansion is supported on submasks of the clause's
        // variable set; enumerate exactly those
        let positions = clause.v().one_positions();
        let n = instance.clauses.n();
        for sub in 0..(1usize << positions.len()) {
            let mut w = BitString::zeros(n);
            for (bit, &pos) in positions.iter().enumerate() {
                if (sub >> bit) & 1 == 1 {
                    w.set(pos, true);
                }
            }
            if exact {
                let c = maxsat::clause_walsh_coeff::<BigRational>(clause, &w, which)
                    .map_err(stringify)?;
                writeln!(out, "{w},{}", fmt_rational(&c)).map_err(stringify)?;
            } else {
                let c =
                    maxsat::clause_walsh_coeff::<f64>(clause, &w, which).map_err(stringify)?;
                writeln!(out, "{w},{}", fmt_float(c)).map_err(stringify)?;
            }
        }
        return Ok(());
    }
    let x = parse_bits(x)?;
    let budget = budget_from(max_power, max_subsets);
    if exact {
        let f = maxsat::maxsat_f::<BigRational>(&instance.clauses, &x, mmax, &budget)
            .map_err(stringify)?;
        for m in 0..=f.m_max() {
            let row: Vec<String> = f.row(m).iter().map(fmt_rational).collect();
            writeln!(out, "{}", row.join(",")).map_err(stringify)?;
        }
    } else {
        let f = maxsat::maxsat_f::<f64>(&instance.clauses, &x, mmax, &budget)
            .map_err(stringify)?;
        for m in 0..=f.m_max() {
            let row: Vec<String> = f.row(m).iter().map(|v| fmt_float(*v)).collect();
            writeln!(out, "{}", row.join(",")).map_err(stringify)?;
        }
    }
    Ok(())
}
