//! The `bpqn` command-line front end.
//!
//! Exit codes: 0 on success or a passing check, 1 when a circuit fails
//! verification or a bound invariant breaks, 2 on usage, parse, or
//! structural errors.

use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};
use rayon::prelude::*;

use crate::bounds::{bounds_report, BoundsReport, ComplementBase, CSV_HEADER};
use crate::circuit::Circuit;
use crate::combinatorics::{binomial, binomial_usize, MAX_ELEMENT};
use crate::error::Error;
use crate::matrices::{build_matrix, DEFAULT_PRIME};
use crate::synthesis::synth;
use crate::verification::{exhaustive_min_gates, random_semigroup_check, verify_circuit};

/// Largest matrix dimension `table` will take on.
pub const TABLE_MAX_DIMENSION: usize = 10_000;

const SEMIGROUP_TRIALS: usize = 20;

#[derive(Parser, Debug)]
#[command(name = "bpqn", version, about = "Addition circuits for set-disjointness matrices")]
pub struct CliConfig {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(clap::Args, Debug, Clone, Copy)]
pub struct Triple {
    #[arg(short = 'p')]
    pub p: usize,
    #[arg(short = 'q')]
    pub q: usize,
    #[arg(short = 'n')]
    pub n: usize,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Build the circuit for B(p,q,n)
    Synth {
        #[command(flatten)]
        triple: Triple,
        #[arg(short = 'o', long = "output")]
        output: Option<PathBuf>,
        #[arg(long, value_enum, default_value_t = CircuitFormat::Slp)]
        format: CircuitFormat,
        /// Print the per-step gate accounting
        #[arg(long)]
        trace: bool,
    },
    /// Check an SLP file against B(p,q,n)
    Verify {
        #[command(flatten)]
        triple: Triple,
        #[arg(long)]
        circuit: PathBuf,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Report gate counts and every bound for one triple
    Bounds {
        #[command(flatten)]
        triple: Triple,
        /// Seed L(B(1,1,n)) with n-3 instead of 3n-6
        #[arg(long)]
        weak_base: bool,
        #[arg(long, value_enum, default_value_t = ReportFormat::Text)]
        format: ReportFormat,
    },
    /// CSV of bounds over a grid of triples
    Table {
        #[arg(long)]
        p_max: usize,
        #[arg(long)]
        q_max: usize,
        #[arg(long)]
        n_max: usize,
        #[arg(long, value_enum, default_value_t = TableFormat::Csv)]
        format: TableFormat,
        #[arg(long)]
        weak_base: bool,
    },
    /// Apply the transposition principle to an SLP file
    Transpose {
        #[arg(long)]
        circuit: PathBuf,
        #[arg(long)]
        out: PathBuf,
    },
    /// Rank of B(p,q,n) over a prime field
    Rank {
        #[command(flatten)]
        triple: Triple,
        /// May be repeated to cross-check with several primes
        #[arg(long, default_values_t = [DEFAULT_PRIME])]
        prime: Vec<u64>,
    },
    /// Exhaustive minimum-gate search for tiny matrices
    Search {
        #[command(flatten)]
        triple: Triple,
        #[arg(long)]
        budget: usize,
    },
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum CircuitFormat {
    Slp,
    Dot,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum ReportFormat {
    Text,
    Json,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum TableFormat {
    Csv,
}

#[derive(Debug)]
enum Failure {
    /// exit 1
    Check(String),
    /// exit 2
    Usage(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::BoundInvariant { .. } => Failure::Check(e.to_string()),
            _ => Failure::Usage(e.to_string()),
        }
    }
}

fn io_err(path: &Path, e: std::io::Error) -> Failure {
    Failure::Usage(format!("{}: {e}", path.display()))
}

/// Parses `args` (program name first) and runs the subcommand.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let config = match CliConfig::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            if e.use_stderr() {
                let rendered = e.render().to_string();
                let _ = writeln!(err, "{}", rendered.lines().next().unwrap_or("usage error"));
                return 2;
            }
            let _ = write!(out, "{}", e.render());
            return 0;
        }
    };
    match dispatch(config.command, out, err) {
        Ok(code) => code,
        Err(Failure::Check(msg)) => {
            let _ = writeln!(err, "bpqn: {msg}");
            1
        }
        Err(Failure::Usage(msg)) => {
            let _ = writeln!(err, "bpqn: error: {msg}");
            2
        }
    }
}

fn validate(t: Triple) -> Result<(), Failure> {
    if t.n > MAX_ELEMENT as usize {
        return Err(Failure::Usage(format!("n={} exceeds the ground-set cap of {MAX_ELEMENT}", t.n)));
    }
    if t.n < t.p.max(t.q) {
        return Err(Failure::Usage(format!("n={} < max(p,q)={}", t.n, t.p.max(t.q))));
    }
    Ok(())
}

fn read_circuit(path: &Path) -> Result<Circuit, Failure> {
    let text = std::fs::read_to_string(path).map_err(|e| io_err(path, e))?;
    Circuit::parse_slp(&text).map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))
}

fn dispatch(cmd: Command, out: &mut dyn Write, err: &mut dyn Write) -> Result<i32, Failure> {
    let w = |e: std::io::Error| Failure::Usage(e.to_string());
    match cmd {
        Command::Synth {
            triple,
            output,
            format,
            trace,
        } => {
            validate(triple)?;
            let s = synth(triple.p, triple.q, triple.n)?;
            let text = match format {
                CircuitFormat::Slp => s.circuit.to_slp(),
                CircuitFormat::Dot => s.circuit.to_dot(),
            };
            match &output {
                Some(path) => {
                    std::fs::write(path, text).map_err(|e| io_err(path, e))?;
                    if trace {
                        write!(out, "{}", s.trace.report()).map_err(w)?;
                    }
                }
                None => {
                    write!(out, "{text}").map_err(w)?;
                    if trace {
                        write!(err, "{}", s.trace.report()).map_err(w)?;
                    }
                }
            }
            Ok(0)
        }
        Command::Verify { triple, circuit, seed } => {
            validate(triple)?;
            let c = read_circuit(&circuit)?;
            let m = build_matrix(triple.p, triple.q, triple.n)?;
            let report = verify_circuit(&c, &m)?;
            if !report.passed {
                writeln!(out, "FAIL: {} of {} outputs wrong", report.mismatches.len(), report.checked_outputs).map_err(w)?;
                for mm in report.mismatches.iter().take(5) {
                    writeln!(out, "  y{}: expected {} got {}", mm.label, mm.expected, mm.actual).map_err(w)?;
                }
                return Ok(1);
            }
            if !random_semigroup_check(&c, &m, SEMIGROUP_TRIALS, seed)? {
                writeln!(out, "FAIL: random semigroup evaluation disagrees").map_err(w)?;
                return Ok(1);
            }
            writeln!(out, "PASS: {} outputs, {} gates", report.checked_outputs, c.gate_count()).map_err(w)?;
            Ok(0)
        }
        Command::Bounds {
            triple,
            weak_base,
            format,
        } => {
            validate(triple)?;
            let base = if weak_base { ComplementBase::Weak } else { ComplementBase::Exact };
            let r = bounds_report(triple.p, triple.q, triple.n, base)?;
            match format {
                ReportFormat::Text => write!(out, "{}", r.to_text()).map_err(w)?,
                ReportFormat::Json => writeln!(out, "{}", r.to_json()).map_err(w)?,
            }
            Ok(0)
        }
        Command::Table {
            p_max,
            q_max,
            n_max,
            format: TableFormat::Csv,
            weak_base,
        } => {
            let base = if weak_base { ComplementBase::Weak } else { ComplementBase::Exact };
            write!(out, "{}", emit_table(p_max, q_max, n_max, base)?).map_err(w)?;
            Ok(0)
        }
        Command::Transpose { circuit, out: dest } => {
            let c = read_circuit(&circuit)?;
            let t = c.transpose()?;
            std::fs::write(&dest, t.to_slp()).map_err(|e| io_err(&dest, e))?;
            Ok(0)
        }
        Command::Rank { triple, prime } => {
            validate(triple)?;
            let m = build_matrix(triple.p, triple.q, triple.n)?;
            let expected = binomial(triple.n as u64, triple.p.min(triple.q) as i64);
            for pr in prime {
                let r = m.rank_mod_prime(pr)?;
                let full = r == m.rows().min(m.cols());
                writeln!(out, "rank={r} expected={expected} full_rank={full}").map_err(w)?;
            }
            Ok(0)
        }
        Command::Search { triple, budget } => {
            validate(triple)?;
            let m = build_matrix(triple.p, triple.q, triple.n)?;
            match exhaustive_min_gates(&m, budget)? {
                Some(g) => writeln!(out, "{g}").map_err(w)?,
                None => writeln!(out, "none within budget").map_err(w)?,
            }
            Ok(0)
        }
    }
}

/// CSV rows for every `1 ≤ p ≤ p_max`, `1 ≤ q ≤ q_max`, `p + q < n ≤ n_max`,
/// ordered by `p`, then `q`, then `n`. Cells are computed in parallel.
fn emit_table(p_max: usize, q_max: usize, n_max: usize, base: ComplementBase) -> Result<String, Failure> {
    if n_max > MAX_ELEMENT as usize {
        return Err(Failure::Usage(format!("n_max={n_max} exceeds the ground-set cap of {MAX_ELEMENT}")));
    }
    let widest = binomial_usize(n_max, p_max.min(n_max)).max(binomial_usize(n_max, q_max.min(n_max)));
    if widest > TABLE_MAX_DIMENSION {
        return Err(Failure::Usage(format!(
            "grid too large: C({n_max},{}) = {widest} > {TABLE_MAX_DIMENSION}",
            if binomial_usize(n_max, p_max.min(n_max)) >= binomial_usize(n_max, q_max.min(n_max)) { p_max } else { q_max }
        )));
    }
    let mut cells = Vec::new();
    for p in 1..=p_max {
        for q in 1..=q_max {
            for n in p + q + 1..=n_max {
                cells.push((p, q, n));
            }
        }
    }
    let reports: Vec<Result<BoundsReport, Error>> = cells
        .par_iter()
        .map(|&(p, q, n)| bounds_report(p, q, n, base))
        .collect();
    let mut s = String::from(CSV_HEADER);
    s.push('\n');
    for r in reports {
        s.push_str(&r?.csv_row());
        s.push('\n');
    }
    Ok(s)
}

/// The `table` output as a string, for library callers.
pub fn table_csv(p_max: usize, q_max: usize, n_max: usize, base: ComplementBase) -> crate::error::Result<String> {
    emit_table(p_max, q_max, n_max, base).map_err(|f| match f {
        Failure::Check(m) | Failure::Usage(m) => Error::InvalidParameters(m),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn call(args: &[&str]) -> (i32, String, String) {
        let mut out = Vec::new();
        let mut err = Vec::new();
        let mut argv = vec!["bpqn"];
        argv.extend_from_slice(args);
        let code = run(argv, &mut out, &mut err);
        (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
    }

    #[test]
    fn synth_slp_on_stdout() {
        let (code, out, _) = call(&["synth", "-p", "1", "-q", "1", "-n", "5", "--format", "slp"]);
        assert_eq!(code, 0);
        assert_eq!(out.lines().filter(|l| l.starts_with("gate ")).count(), 9);
    }

    #[test]
    fn degenerate_triple_is_usage_error() {
        let (code, _, err) = call(&["synth", "-p", "1", "-q", "2", "-n", "2"]);
        assert_eq!(code, 2);
        assert!(err.contains("n < p+q: zero matrix not representable"));
        assert_eq!(err.lines().count(), 1);
    }

    #[test]
    fn unknown_flag_is_one_line() {
        let (code, _, err) = call(&["synth", "--bogus"]);
        assert_eq!(code, 2);
        assert_eq!(err.lines().count(), 1);
        let (code, _, _) = call(&["frobnicate"]);
        assert_eq!(code, 2);
    }

    #[test]
    fn rank_line() {
        let (code, out, _) = call(&["rank", "-p", "2", "-q", "2", "-n", "5"]);
        assert_eq!(code, 0);
        assert_eq!(out, "rank=10 expected=10 full_rank=true\n");
        let (_, out, _) = call(&["rank", "-p", "1", "-q", "1", "-n", "3", "--prime", "1000003", "--prime", "7"]);
        assert_eq!(out.lines().count(), 2);
        let (code, _, _) = call(&["rank", "-p", "1", "-q", "1", "-n", "3", "--prime", "9"]);
        assert_eq!(code, 2);
    }

    #[test]
    fn search_output() {
        assert_eq!(call(&["search", "-p", "1", "-q", "1", "-n", "3", "--budget", "3"]).1, "3\n");
        assert_eq!(
            call(&["search", "-p", "1", "-q", "1", "-n", "4", "--budget", "5"]).1,
            "none within budget\n"
        );
        assert_eq!(call(&["search", "-p", "1", "-q", "1", "-n", "9", "--budget", "3"]).0, 2);
    }

    #[test]
    fn table_grid() {
        let csv = table_csv(1, 1, 6, ComplementBase::Exact).unwrap();
        let lines: Vec<&str> = csv.lines().collect();
        assert_eq!(lines[0], CSV_HEADER);
        assert_eq!(lines.len(), 5);
        assert!(lines[1].starts_with("1,1,3,3,3,"));

        let csv = table_csv(2, 2, 8, ComplementBase::Exact).unwrap();
        assert!(csv.lines().any(|l| l.starts_with("2,1,5,19,19,")));
        assert!(table_csv(5, 5, 30, ComplementBase::Exact).is_err());
    }

    #[test]
    fn bounds_json() {
        let (code, out, _) = call(&["bounds", "-p", "2", "-q", "1", "-n", "5", "--format", "json"]);
        assert_eq!(code, 0);
        let v: serde_json::Value = serde_json::from_str(&out).unwrap();
        assert_eq!(v["gates_synth"], 19);
        assert_eq!(v["upper_theorem1"]["halves"], true);
        let (code, out, _) = call(&["bounds", "-p", "1", "-q", "1", "-n", "5", "--weak-base"]);
        assert_eq!(code, 0);
        assert!(out.contains("lower_lemma2_dp=2"));
    }
}
