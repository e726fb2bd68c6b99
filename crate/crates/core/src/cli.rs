//! The `stabkit` command line.
//!
//! Exit codes: 0 success, 1 a verification check failed, 2 usage error,
//! 3 a resource cap would be exceeded.

use std::collections::BTreeSet;
use std::ffi::OsString;
use std::fmt::Write as _;
use std::io::Write as _;
use std::path::PathBuf;

use clap::{Parser, Subcommand, ValueEnum};
use num_bigint::BigInt;
use num_traits::ToPrimitive;
use serde::Serialize;

use crate::combinatorics::{
    gaussian_binomial, kappa, lagrangian_count, stabilizer_count, transversal_count, ExactRational,
    Prime,
};
use crate::error::{Error, Result};
use crate::potential::{
    expected_design, frame_potential_bruteforce, frame_potential_fixed_state, hilbert_dimension,
    FramePotentialReport,
};
use crate::stabilizer::{
    eigen_residual, enumerate_states, overlap_exact, state_vector, STATE_TOLERANCE,
};
use crate::symplectic::{
    enumerate_lagrangians, enumerate_subspaces, extensions_through, intersection_spectrum,
    LagrangianSubspace, PhaseVector, Subspace,
};
use crate::weyl::{verify_commutation, verify_composition, verify_trace, weyl_basis_symbolic};
use crate::{symplectic, Caps};

pub const EXIT_OK: i32 = 0;
pub const EXIT_CHECK_FAILED: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_CAP: i32 = 3;

/// Tolerance for numeric frame potentials against exact values.
pub const POTENTIAL_TOLERANCE: f64 = 1e-9;

#[derive(Debug, Parser)]
#[command(
    name = "stabkit",
    version,
    about = "Stabilizer states, frame potentials and design checks"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,

    #[command(flatten)]
    pub common: Common,
}

#[derive(Debug, clap::Args)]
pub struct Common {
    /// Output format.
    #[arg(long, global = true, value_enum)]
    pub format: Option<Format>,

    /// Write to this file instead of stdout.
    #[arg(long, global = true)]
    pub output: Option<PathBuf>,

    /// Maximum number of subspaces an enumeration may visit.
    #[arg(long, global = true, default_value_t = symplectic::DEFAULT_ENUMERATION_CAP,
          value_parser = clap::value_parser!(u64).range(1..))]
    pub enumeration_cap: u64,

    /// Maximum number of stabilizer states realized as vectors.
    #[arg(long, global = true, default_value_t = crate::stabilizer::DEFAULT_STATE_CAP,
          value_parser = clap::value_parser!(u64).range(1..))]
    pub state_cap: u64,

    /// Maximum number of pairs visited by double sums.
    #[arg(long, global = true, default_value_t = crate::potential::DEFAULT_PAIR_CAP,
          value_parser = clap::value_parser!(u64).range(1..))]
    pub pair_cap: u64,

    /// Maximum Hilbert-space dimension of dense matrices.
    #[arg(long, global = true, default_value_t = crate::weyl::DEFAULT_MATRIX_CAP,
          value_parser = clap::value_parser!(u64).range(1..))]
    pub matrix_cap: u64,

    /// Reserved; every command is deterministic.
    #[arg(long, global = true)]
    pub seed: Option<u64>,

    /// Worker threads (default: available parallelism).
    #[arg(long, global = true, env = "STABKIT_THREADS",
          value_parser = clap::value_parser!(u64).range(1..))]
    pub threads: Option<u64>,
}

impl Common {
    pub fn caps(&self) -> Caps {
        Caps {
            enumeration: self.enumeration_cap,
            states: self.state_cap,
            pairs: self.pair_cap,
            matrix: self.matrix_cap,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Table,
    Csv,
    Json,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Method {
    /// Exact engines only.
    Exact,
    Recursion,
    Combinatorial,
    /// Double sum over all pairs of realized states.
    Bruteforce,
    /// Single sum against one reference state.
    FixedState,
    /// Exact engines plus the double sum.
    All,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Enumeration {
    Lagrangians,
    States,
    Spectrum,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Frame potentials, Welch bounds and design flags.
    FramePotential {
        /// Qudit dimension: a value, `a..b` (inclusive) or a comma list.
        #[arg(long, value_parser = parse_values)]
        d: Values,
        #[arg(long, value_parser = parse_values)]
        n: Values,
        #[arg(long, value_parser = parse_values)]
        t: Values,
        #[arg(long, value_enum, default_value_t = Method::Exact)]
        method: Method,
    },
    /// Stream Lagrangians or states, or tabulate an intersection spectrum.
    Enumerate {
        #[arg(value_enum)]
        what: Enumeration,
        #[arg(long)]
        d: u64,
        #[arg(long)]
        n: usize,
        /// Include state vectors (`states` only).
        #[arg(long)]
        amplitudes: bool,
    },
    /// Run the cross-check suite for one (d, n).
    Verify {
        #[arg(long)]
        d: u64,
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = 4)]
        t_max: u32,
    },
}

/// A sorted, duplicate-free list of parameter values.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Values(pub Vec<u64>);

/// Parses `7`, `1..3` or `2,3,5..7`.
pub fn parse_values(s: &str) -> std::result::Result<Values, String> {
    let mut out = BTreeSet::new();
    for part in s.split(',') {
        let part = part.trim();
        let num = |x: &str| {
            x.trim()
                .parse::<u64>()
                .map_err(|_| format!("not a non-negative integer: {x:?}"))
        };
        match part.split_once("..") {
            Some((a, b)) => {
                let (a, b) = (num(a)?, num(b)?);
                if a > b {
                    return Err(format!("empty range {part}"));
                }
                out.extend(a..=b);
            }
            None => {
                out.insert(num(part)?);
            }
        }
    }
    Ok(Values(out.into_iter().collect()))
}

/// Parses arguments, runs the command and returns the exit code. Output goes
/// to stdout or `--output`; diagnostics go to stderr.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let _ = e.print();
            return code;
        }
    };
    let mut out = String::new();
    let code = match execute(&cli, &mut out) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            return exit_code(&e);
        }
    };
    let written = match &cli.common.output {
        Some(path) => std::fs::write(path, out.as_bytes()),
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout
                .write_all(out.as_bytes())
                .and_then(|_| stdout.flush())
        }
    };
    if let Err(e) = written {
        eprintln!("error: {e}");
        return EXIT_USAGE;
    }
    code
}

pub fn exit_code(e: &Error) -> i32 {
    match e {
        Error::CapExceeded { .. } => EXIT_CAP,
        _ => EXIT_USAGE,
    }
}

/// Runs a parsed command, appending its output to `out`.
pub fn execute(cli: &Cli, out: &mut String) -> Result<i32> {
    let mut pool = rayon::ThreadPoolBuilder::new();
    if let Some(t) = cli.common.threads {
        pool = pool.num_threads(t as usize);
    }
    let pool = pool
        .build()
        .map_err(|e| Error::InvalidArgument(format!("cannot start worker pool: {e}")))?;
    pool.install(|| dispatch(cli, out))
}

fn dispatch(cli: &Cli, out: &mut String) -> Result<i32> {
    let caps = cli.common.caps();
    match &cli.command {
        Command::FramePotential { d, n, t, method } => {
            let format = cli.common.format.unwrap_or(Format::Table);
            let rows = frame_potential_rows(d, n, t, *method, &caps)?;
            render_reports(&rows, format, out)?;
            Ok(EXIT_OK)
        }
        Command::Enumerate {
            what,
            d,
            n,
            amplitudes,
        } => {
            let d = Prime::new(*d)?;
            check_n(*n)?;
            enumerate(*what, d, *n, *amplitudes, cli.common.format, &caps, out)?;
            Ok(EXIT_OK)
        }
        Command::Verify { d, n, t_max } => {
            let d = Prime::new(*d)?;
            check_n(*n)?;
            if *t_max == 0 {
                return Err(Error::InvalidArgument("t-max must be at least 1".into()));
            }
            let ok = verify(d, *n, *t_max, &caps, out)?;
            Ok(if ok { EXIT_OK } else { EXIT_CHECK_FAILED })
        }
    }
}

fn check_n(n: usize) -> Result<()> {
    if n == 0 {
        return Err(Error::InvalidArgument("n must be at least 1".into()));
    }
    Ok(())
}

fn to_usize(v: u64, what: &str) -> Result<usize> {
    usize::try_from(v).map_err(|_| Error::InvalidArgument(format!("{what} too large: {v}")))
}

/// One report per `(d, n, t)`, sorted.
pub fn frame_potential_rows(
    ds: &Values,
    ns: &Values,
    ts: &Values,
    method: Method,
    caps: &Caps,
) -> Result<Vec<FramePotentialReport>> {
    let primes =
        ds.0.iter()
            .map(|&d| Prime::new(d))
            .collect::<Result<Vec<_>>>()?;
    let mut rows = Vec::new();
    for &d in &primes {
        for &n in &ns.0 {
            let n = to_usize(n, "n")?;
            check_n(n)?;
            for &t in &ts.0 {
                let t = u32::try_from(t).ok().filter(|&t| t >= 1).ok_or_else(|| {
                    Error::InvalidArgument(format!("t must be in 1..2^32 (got {t})"))
                })?;
                let mut rep = FramePotentialReport::exact(d, n, t)?;
                rep.value_bruteforce = match method {
                    Method::Bruteforce | Method::All => {
                        Some(frame_potential_bruteforce(d, n, t, caps)?)
                    }
                    Method::FixedState => Some(frame_potential_fixed_state(d, n, t, caps)?),
                    Method::Exact | Method::Recursion | Method::Combinatorial => None,
                };
                rows.push(rep);
            }
        }
    }
    Ok(rows)
}

/// Twelve significant digits.
pub fn decimal(r: &ExactRational) -> String {
    format!("{:.11e}", r.to_f64())
}

fn float(x: Option<f64>) -> String {
    x.map(|v| v.to_string()).unwrap_or_default()
}

pub const CSV_HEADER: [&str; 12] = [
    "d",
    "n",
    "t",
    "D",
    "recursion",
    "combinatorial",
    "bruteforce",
    "welch",
    "is_design",
    "recursion_decimal",
    "combinatorial_decimal",
    "welch_decimal",
];

fn csv_bytes<R: AsRef<[u8]>>(
    header: &[&str],
    rows: impl Iterator<Item = Vec<R>>,
) -> Result<String> {
    let mut w = csv::WriterBuilder::new()
        .terminator(csv::Terminator::Any(b'\n'))
        .from_writer(Vec::new());
    let io = |e: csv::Error| Error::InvalidArgument(format!("csv: {e}"));
    w.write_record(header).map_err(io)?;
    for row in rows {
        w.write_record(&row).map_err(io)?;
    }
    let bytes = w
        .into_inner()
        .map_err(|e| Error::InvalidArgument(format!("csv: {e}")))?;
    Ok(String::from_utf8(bytes).expect("csv output is UTF-8"))
}

fn json_lines<T: Serialize>(items: impl IntoIterator<Item = T>, out: &mut String) -> Result<()> {
    for item in items {
        let line = serde_json::to_string(&item)
            .map_err(|e| Error::InvalidArgument(format!("json: {e}")))?;
        out.push_str(&line);
        out.push('\n');
    }
    Ok(())
}

fn table(header: &[&str], rows: &[Vec<String>], out: &mut String) {
    let mut widths: Vec<usize> = header.iter().map(|h| h.len()).collect();
    for row in rows {
        for (w, cell) in widths.iter_mut().zip(row) {
            *w = (*w).max(cell.chars().count());
        }
    }
    let mut line = |cells: Vec<&str>| {
        let padded: Vec<String> = cells
            .iter()
            .zip(&widths)
            .map(|(c, &w)| format!("{c:<w$}"))
            .collect();
        out.push_str(padded.join("  ").trim_end());
        out.push('\n');
    };
    line(header.to_vec());
    for row in rows {
        line(row.iter().map(String::as_str).collect());
    }
}

pub fn render_reports(
    rows: &[FramePotentialReport],
    format: Format,
    out: &mut String,
) -> Result<()> {
    match format {
        Format::Json => json_lines(rows, out),
        Format::Csv => {
            let records = rows.iter().map(|r| {
                vec![
                    r.d.to_string(),
                    r.n.to_string(),
                    r.t.to_string(),
                    r.dimension.to_string(),
                    r.value_recursion.to_string(),
                    r.value_combinatorial.to_string(),
                    float(r.value_bruteforce),
                    r.welch.to_string(),
                    r.is_t_design.to_string(),
                    decimal(&r.value_recursion),
                    decimal(&r.value_combinatorial),
                    decimal(&r.welch),
                ]
            });
            out.push_str(&csv_bytes(&CSV_HEADER, records)?);
            Ok(())
        }
        Format::Table => {
            let header = [
                "d",
                "n",
                "t",
                "D",
                "recursion",
                "combinatorial",
                "decimal",
                "bruteforce",
                "welch",
                "welch_decimal",
                "design",
            ];
            let body: Vec<Vec<String>> = rows
                .iter()
                .map(|r| {
                    vec![
                        r.d.to_string(),
                        r.n.to_string(),
                        r.t.to_string(),
                        r.dimension.to_string(),
                        r.value_recursion.to_string(),
                        r.value_combinatorial.to_string(),
                        decimal(&r.value_combinatorial),
                        r.value_bruteforce.map_or("-".into(), |v| v.to_string()),
                        r.welch.to_string(),
                        decimal(&r.welch),
                        r.is_t_design.to_string(),
                    ]
                })
                .collect();
            table(&header, &body, out);
            Ok(())
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SpectrumRow {
    pub k: usize,
    pub enumerated: u64,
    pub formula: String,
    #[serde(rename = "match")]
    pub matches: bool,
}

/// Intersection dimensions of every Lagrangian against the first enumerated
/// one, next to the closed-form counts.
pub fn spectrum_rows(d: Prime, n: usize, cap: u64) -> Result<Vec<SpectrumRow>> {
    let m0 = first_lagrangian(d, n, cap)?;
    let spectrum = intersection_spectrum(&m0, cap)?;
    spectrum
        .into_iter()
        .map(|(k, count)| {
            let formula = kappa(d, n as u32, k as u32)?;
            Ok(SpectrumRow {
                k,
                enumerated: count,
                matches: BigInt::from(count) == formula,
                formula: formula.to_string(),
            })
        })
        .collect()
}

fn first_lagrangian(d: Prime, n: usize, cap: u64) -> Result<LagrangianSubspace> {
    Ok(enumerate_lagrangians(d, n, cap)?
        .next()
        .expect("phase space has a Lagrangian"))
}

fn only_json(format: Option<Format>, what: &str) -> Result<()> {
    match format {
        None | Some(Format::Json) => Ok(()),
        Some(_) => Err(Error::InvalidArgument(format!(
            "{what} are written as JSON lines only"
        ))),
    }
}

fn enumerate(
    what: Enumeration,
    d: Prime,
    n: usize,
    amplitudes: bool,
    format: Option<Format>,
    caps: &Caps,
    out: &mut String,
) -> Result<()> {
    if amplitudes && what != Enumeration::States {
        return Err(Error::InvalidArgument(
            "--amplitudes applies to states only".into(),
        ));
    }
    match what {
        Enumeration::Lagrangians => {
            only_json(format, "Lagrangians")?;
            json_lines(enumerate_lagrangians(d, n, caps.enumeration)?, out)
        }
        Enumeration::States => {
            only_json(format, "states")?;
            if amplitudes {
                hilbert_dimension(d, n)
                    .ok()
                    .filter(|&dim| dim <= caps.matrix)
                    .ok_or_else(|| {
                        Error::cap(
                            "Hilbert-space dimension",
                            BigInt::from(d.get()).pow(n as u32),
                            caps.matrix,
                        )
                    })?;
            }
            for s in enumerate_states(d, n, caps)? {
                json_lines([s.to_record(amplitudes, caps.matrix)?], out)?;
            }
            Ok(())
        }
        Enumeration::Spectrum => {
            let rows = spectrum_rows(d, n, caps.enumeration)?;
            let cells: Vec<Vec<String>> = rows
                .iter()
                .map(|r| {
                    vec![
                        r.k.to_string(),
                        r.enumerated.to_string(),
                        r.formula.clone(),
                        r.matches.to_string(),
                    ]
                })
                .collect();
            let header = ["k", "enumerated", "formula", "match"];
            match format.unwrap_or(Format::Table) {
                Format::Json => json_lines(&rows, out),
                Format::Csv => {
                    out.push_str(&csv_bytes(&header, cells.into_iter())?);
                    Ok(())
                }
                Format::Table => {
                    table(&header, &cells, out);
                    Ok(())
                }
            }
        }
    }
}

fn ensure_within(what: &'static str, count: BigInt, cap: u64) -> Result<()> {
    match count.to_u64() {
        Some(c) if c <= cap => Ok(()),
        _ => Err(Error::cap(what, count, cap)),
    }
}

/// Refuses up front any (d, n) whose checks would exceed a cap.
fn precheck(d: Prime, n: usize, caps: &Caps) -> Result<()> {
    let dim = BigInt::from(d.get()).pow(n as u32);
    ensure_within("Hilbert-space dimension", dim.clone(), caps.matrix)?;
    ensure_within(
        "subspace enumeration",
        gaussian_binomial(2 * n as u32, n as u32, d),
        caps.enumeration,
    )?;
    let states = stabilizer_count(d, n as u32);
    ensure_within("stabilizer states", states.clone(), caps.states)?;
    ensure_within("stabilizer state pairs", &states * &states, caps.pairs)?;
    let points = &dim * &dim;
    ensure_within("phase-space pairs", &points * &points, caps.pairs)?;
    Ok(())
}

struct Report<'a> {
    out: &'a mut String,
    passed: usize,
    failed: usize,
}

impl Report<'_> {
    fn check(&mut self, name: &str, ok: bool, detail: String) {
        let tag = if ok { "PASS" } else { "FAIL" };
        if ok {
            self.passed += 1;
        } else {
            self.failed += 1;
        }
        let _ = writeln!(self.out, "{tag} {name}: {detail}");
    }
}

fn phase_space(d: Prime, n: usize) -> Vec<PhaseVector> {
    Subspace::full(d, 2 * n)
        .elements()
        .into_iter()
        .map(|c| {
            PhaseVector::new(d, n, &c.iter().map(|&x| x as i64).collect::<Vec<_>>())
                .expect("2n coordinates")
        })
        .collect()
}

fn elements_of(s: &Subspace, n: usize) -> Vec<PhaseVector> {
    s.elements()
        .into_iter()
        .map(|c| {
            PhaseVector::new(s.d(), n, &c.iter().map(|&x| x as i64).collect::<Vec<_>>())
                .expect("2n coordinates")
        })
        .collect()
}

/// The full cross-check suite. Returns whether every check passed.
pub fn verify(d: Prime, n: usize, t_max: u32, caps: &Caps, out: &mut String) -> Result<bool> {
    use rayon::prelude::*;

    precheck(d, n, caps)?;
    let _ = writeln!(out, "verify d={d} n={n} t_max={t_max}");
    let mut rep = Report {
        out,
        passed: 0,
        failed: 0,
    };

    // Weyl relations over all pairs of phase-space points
    let points = phase_space(d, n);
    let bad: usize = points
        .par_iter()
        .map(|u| {
            let mut bad = usize::from(!verify_trace(u, caps.matrix).unwrap_or(false));
            for v in &points {
                let ok = verify_composition(u, v, caps.matrix).unwrap_or(false)
                    && verify_commutation(u, v, caps.matrix).unwrap_or(false);
                bad += usize::from(!ok);
            }
            bad
        })
        .sum();
    let pairs = points.len() * points.len();
    rep.check(
        "weyl-relations",
        bad == 0,
        format!(
            "{} of {pairs} pairs violate composition, commutation or trace",
            bad
        ),
    );

    // Lagrangians, counts, spectrum, transverse count
    let lags: Vec<LagrangianSubspace> = enumerate_lagrangians(d, n, caps.enumeration)?.collect();
    let total = lagrangian_count(d, n as u32);
    rep.check(
        "lagrangian-count",
        BigInt::from(lags.len()) == total,
        format!("enumerated {} expected {total}", lags.len()),
    );
    let spectrum = spectrum_rows(d, n, caps.enumeration)?;
    let all_match = spectrum.iter().all(|r| r.matches);
    let listing: Vec<String> = spectrum
        .iter()
        .map(|r| format!("k={}:{}/{}", r.k, r.enumerated, r.formula))
        .collect();
    rep.check("intersection-spectrum", all_match, listing.join(" "));
    let transverse = spectrum.first().map_or(0, |r| r.enumerated);
    let expected_transverse = transversal_count(d, n as u32);
    rep.check(
        "transverse-count",
        BigInt::from(transverse) == expected_transverse,
        format!("enumerated {transverse} expected {expected_transverse}"),
    );

    // Lagrangians through each K ⊆ M_0, built vs filtered
    let m0 = &lags[0];
    let basis0 = m0.basis()?;
    let mut ext_ok = true;
    let mut ext_total = 0usize;
    for j in 0..=n {
        for coeffs in enumerate_subspaces(d, n, j, caps.enumeration)? {
            let gens: Vec<PhaseVector> = coeffs
                .generators()
                .iter()
                .map(|c| {
                    basis0
                        .iter()
                        .zip(c)
                        .fold(PhaseVector::zero(d, n), |acc, (b, &ci)| {
                            acc.add(&b.scale(ci)).expect("same space")
                        })
                })
                .collect();
            let k = Subspace::span(d, n, &gens)?;
            let built: BTreeSet<LagrangianSubspace> =
                extensions_through(m0, &k)?.into_iter().collect();
            let mut filtered = BTreeSet::new();
            for nn in &lags {
                if m0.intersect(nn)? == k {
                    filtered.insert(nn.clone());
                }
            }
            ext_total += built.len();
            ext_ok &= built == filtered;
        }
    }
    rep.check(
        "extensions-vs-filter",
        ext_ok && ext_total == lags.len(),
        format!("{ext_total} Lagrangians reached through subspaces of M0"),
    );

    // w_B is a representation of each Lagrangian
    let mut law_bad = 0usize;
    let mut law_pairs = 0usize;
    for m in &lags {
        let b = m.basis()?;
        let elems = elements_of(m, n);
        let ops: Vec<_> = elems
            .iter()
            .map(|x| weyl_basis_symbolic(&b, x))
            .collect::<Result<_>>()?;
        for (x, ox) in elems.iter().zip(&ops) {
            for (y, oy) in elems.iter().zip(&ops) {
                let lhs = ox.mul(oy)?;
                let rhs = weyl_basis_symbolic(&b, &x.add(y)?)?;
                law_pairs += 1;
                law_bad += usize::from(lhs != rhs);
            }
        }
    }
    rep.check(
        "basis-group-law",
        law_bad == 0,
        format!("{law_bad} of {law_pairs} products differ"),
    );

    // realized states
    let states: Vec<_> = enumerate_states(d, n, caps)?.collect();
    let vectors: Vec<_> = states
        .par_iter()
        .map(|s| state_vector(s, caps.matrix))
        .collect::<Result<_>>()?;
    rep.check(
        "state-count",
        BigInt::from(states.len()) == stabilizer_count(d, n as u32),
        format!("{} states", states.len()),
    );
    let eig = states
        .par_iter()
        .zip(&vectors)
        .map(|(s, v)| eigen_residual(s, v))
        .reduce(|| 0.0, f64::max);
    rep.check(
        "eigenvalue-equations",
        eig < STATE_TOLERANCE,
        format!(
            "{} states checked against {STATE_TOLERANCE:e}",
            states.len()
        ),
    );
    let dim = vectors[0].dim();
    let gram_ok = vectors.chunks(dim).all(|block| {
        block.iter().enumerate().all(|(i, a)| {
            block.iter().enumerate().all(|(j, b)| {
                let target = if i == j { 1.0 } else { 0.0 };
                (a.inner(b) - num_complex::Complex64::new(target, 0.0)).norm() < STATE_TOLERANCE
            })
        })
    });
    rep.check(
        "basis-orthonormality",
        gram_ok,
        format!("{} bases of {dim} states", vectors.len() / dim),
    );
    let overlap_bad: usize = (0..states.len())
        .into_par_iter()
        .map(|i| {
            (0..states.len())
                .filter(|&j| {
                    let exact = overlap_exact(&states[i], &states[j]).map(|r| r.to_f64());
                    let numeric = vectors[i].inner(&vectors[j]).norm_sqr();
                    exact.map_or(true, |e| (e - numeric).abs() >= STATE_TOLERANCE)
                })
                .count()
        })
        .sum();
    rep.check(
        "overlaps-exact-vs-numeric",
        overlap_bad == 0,
        format!(
            "{overlap_bad} of {} pairs differ",
            states.len() * states.len()
        ),
    );

    // frame potentials
    let mut exact_ok = true;
    let mut numeric_ok = true;
    let mut design_ok = true;
    let mut flags = Vec::new();
    for t in 1..=t_max {
        let r = FramePotentialReport::exact(d, n, t)?;
        exact_ok &= r.value_recursion == r.value_combinatorial && r.value_combinatorial >= r.welch;
        let exact = r.value_combinatorial.to_f64();
        let bf = frame_potential_bruteforce(d, n, t, caps)?;
        let fs = frame_potential_fixed_state(d, n, t, caps)?;
        numeric_ok &=
            (bf - exact).abs() < POTENTIAL_TOLERANCE && (fs - exact).abs() < POTENTIAL_TOLERANCE;
        design_ok &= r.is_t_design == expected_design(d, t);
        flags.push(if r.is_t_design { "T" } else { "F" });
    }
    rep.check(
        "exact-engines",
        exact_ok,
        format!("recursion = combinatorial >= welch for t=1..{t_max}"),
    );
    rep.check(
        "numeric-engines",
        numeric_ok,
        format!("bruteforce and fixed-state within {POTENTIAL_TOLERANCE:e} for t=1..{t_max}"),
    );
    rep.check(
        "design-classification",
        design_ok,
        format!("flags {} for t=1..{t_max}", flags.join("")),
    );

    let (passed, failed) = (rep.passed, rep.failed);
    let _ = writeln!(rep.out, "summary: {passed} passed, {failed} failed");
    Ok(failed == 0)
}
