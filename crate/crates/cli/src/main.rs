mod selftest;
mod sim;
mod vectors;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use sike_ffm::costmodel::{
    cost_table, exact_decimal, optimal_m, Algorithm, DelayModel, CSV_HEADER,
};
use sike_ffm::mpcore::MpUint;
use sike_ffm::params::{PrimeSpec, SikePrime};
use sike_ffm::pipesim::{figure6_schedule, render_gantt, simulate, PipelineConfig, Schedule};
use sike_ffm::reducers::{
    barrett_mul, ffm2_mul, montgomery_modmul, naive_modmul, FieldElement, MontgomeryContext,
    DEFAULT_RADIX_BITS,
};

use sim::SimDoc;

#[derive(Parser)]
#[command(
    name = "sike-ffm",
    version,
    about = "Modular multiplication for SIKE primes and a pipelined multiplier model"
)]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Multiply two field elements
    Mul {
        /// Registry name (sikep434, sikep503, sikep610, sikep751) or f,alpha,beta,+|-
        #[arg(long)]
        prime: String,
        #[arg(long, value_enum, default_value_t = MulAlgo::Ffm2)]
        algo: MulAlgo,
        /// Hex, no 0x prefix
        #[arg(long)]
        a: String,
        #[arg(long)]
        b: String,
        /// Montgomery digit size in bits
        #[arg(long, default_value_t = DEFAULT_RADIX_BITS)]
        radix_bits: u32,
    },
    /// Check every algorithm against long division
    Selftest {
        #[arg(long, default_value = "sikep751")]
        prime: String,
        #[arg(long, default_value_t = 1000)]
        trials: usize,
        #[arg(long, default_value_t = 42)]
        seed: u64,
        /// File of `<hexA> <hexB> <hexExpected>` lines
        #[arg(long)]
        vectors: Option<PathBuf>,
        #[arg(long, default_value_t = DEFAULT_RADIX_BITS)]
        radix_bits: u32,
    },
    /// Multiplication-instruction counts per sub-block count m
    Cost {
        /// A single m, or an inclusive range like 1-16 or 1..16
        #[arg(long, default_value = "1-16")]
        m: String,
        /// Modulus width in bits
        #[arg(long, default_value_t = 751)]
        n: u64,
        #[arg(long)]
        csv: bool,
        /// Also report the m minimizing count * delay(k) under this model
        #[arg(long, value_enum)]
        delay: Option<DelayArg>,
    },
    /// Run the pipelined multiplier model
    Sim {
        #[arg(long, default_value = "sikep751")]
        prime: String,
        #[arg(long, default_value_t = 2)]
        interleave: usize,
        #[arg(long, value_enum, default_value_t = SimMode::Paper)]
        mode: SimMode,
        #[arg(long, value_enum, default_value_t = ReportFormat::Text)]
        report: ReportFormat,
        /// Number of random input pairs (default: one batch)
        #[arg(long)]
        count: Option<usize>,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        /// Append a cycle chart to the text report
        #[arg(long)]
        gantt: bool,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum MulAlgo {
    Naive,
    Barrett,
    Ffm2,
    Montgomery,
}

#[derive(Clone, Copy, ValueEnum)]
enum SimMode {
    Paper,
    Causal,
    Figure6,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum ReportFormat {
    Text,
    Json,
}

#[derive(Clone, Copy, ValueEnum)]
enum DelayArg {
    Constant,
    Linear,
    Quadratic,
}

#[derive(Debug, Error)]
enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("{0}")]
    Verification(String),
}

impl CliError {
    fn usage(e: impl ToString) -> Self {
        CliError::Usage(e.to_string())
    }
}

fn parse_prime(s: &str) -> Result<SikePrime, CliError> {
    let spec: PrimeSpec = s.parse().map_err(CliError::usage)?;
    spec.build().map_err(CliError::usage)
}

fn parse_range(s: &str) -> Result<(u64, u64), CliError> {
    let bad = || CliError::Usage(format!("bad m range {s:?}; use N, A-B or A..B"));
    let num = |t: &str| t.trim().parse::<u64>().map_err(|_| bad());
    let (lo, hi) = match s.split_once("..").or_else(|| s.split_once('-')) {
        Some((a, b)) => (num(a)?, num(b.trim_start_matches('='))?),
        None => {
            let v = num(s)?;
            (v, v)
        }
    };
    if lo == 0 || hi < lo {
        return Err(bad());
    }
    Ok((lo, hi))
}

fn cmd_mul(
    prime: &str,
    algo: MulAlgo,
    a: &str,
    b: &str,
    radix_bits: u32,
) -> Result<String, CliError> {
    let prime = parse_prime(prime)?;
    let elem = |v: &str| {
        let v = MpUint::from_hex(v).map_err(CliError::usage)?;
        FieldElement::new(&prime, v).map_err(CliError::usage)
    };
    let (x, y) = (elem(a)?, elem(b)?);
    let r = match algo {
        MulAlgo::Naive => naive_modmul(&x, &y),
        MulAlgo::Barrett => barrett_mul(&x, &y),
        MulAlgo::Ffm2 => ffm2_mul(&x, &y),
        MulAlgo::Montgomery => {
            let ctx = MontgomeryContext::for_prime(&prime, radix_bits).map_err(CliError::usage)?;
            montgomery_modmul(&x, &y, &ctx)
        }
    }
    .map_err(|e| CliError::Verification(e.to_string()))?;
    Ok(format!("{}\n", r.value().to_hex()))
}

fn cmd_cost(m: &str, n: u64, csv: bool, delay: Option<DelayArg>) -> Result<String, CliError> {
    let (lo, hi) = parse_range(m)?;
    if n == 0 {
        return Err(CliError::usage("--n must be >= 1"));
    }
    let rows: Vec<_> = (lo..=hi)
        .map(|m| cost_table(m, n))
        .collect::<Result<_, _>>()
        .map_err(CliError::usage)?;
    let mut out = String::new();
    if csv {
        out.push_str(CSV_HEADER);
        out.push('\n');
        for r in &rows {
            out.push_str(&r.csv_row());
            out.push('\n');
        }
    } else {
        out.push_str(&format!(
            "{:>5} {:>7} {:>12} {:>16} {:>10} {:>10}\n",
            "m", "k_bits", "montgomery", "montgomery_sike", "barrett", "ffm2"
        ));
        for r in &rows {
            out.push_str(&format!(
                "{:>5} {:>7} {:>12} {:>16} {:>10} {:>10}\n",
                r.m,
                r.k_bits,
                exact_decimal(r.montgomery),
                exact_decimal(r.montgomery_sike),
                exact_decimal(r.barrett),
                exact_decimal(r.ffm2)
            ));
        }
    }
    if let Some(d) = delay {
        let model = match d {
            DelayArg::Constant => DelayModel::Constant(1.0),
            DelayArg::Linear => DelayModel::Linear,
            DelayArg::Quadratic => DelayModel::Quadratic,
        };
        let prefix = if csv { "# " } else { "" };
        for a in Algorithm::ALL {
            let o = optimal_m(n, &model, a).map_err(CliError::usage)?;
            out.push_str(&format!(
                "{prefix}optimal {a}: m = {} (k = {}), time {}\n",
                o.m, o.k_bits, o.total_time
            ));
        }
    }
    Ok(out)
}

#[allow(clippy::too_many_arguments)]
fn cmd_sim(
    prime: &str,
    interleave: usize,
    mode: SimMode,
    report: ReportFormat,
    count: Option<usize>,
    seed: u64,
    gantt: bool,
) -> Result<String, CliError> {
    let prime = parse_prime(prime)?;
    if interleave == 0 {
        return Err(CliError::usage("--interleave must be >= 1"));
    }
    let (doc, chart) = match mode {
        SimMode::Figure6 => {
            let s = figure6_schedule(interleave).map_err(CliError::usage)?;
            (
                SimDoc::from_figure6(prime.label(), &s),
                render_gantt(&s.trace, None),
            )
        }
        SimMode::Paper | SimMode::Causal => {
            let schedule = if matches!(mode, SimMode::Paper) {
                Schedule::Paper
            } else {
                Schedule::Causal
            };
            let cfg = PipelineConfig::for_prime(&prime, schedule).with_interleave(interleave);
            let count = count.unwrap_or(interleave);
            if count == 0 {
                return Err(CliError::usage("--count must be >= 1"));
            }
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let inputs: Vec<_> = (0..count)
                .map(|_| {
                    (
                        MpUint::random_below(&mut rng, prime.p()),
                        MpUint::random_below(&mut rng, prime.p()),
                    )
                })
                .collect();
            let run = simulate(&cfg, &prime, &inputs).map_err(CliError::usage)?;
            for ((a, b), got) in inputs.iter().zip(&run.products) {
                let x = FieldElement::new(&prime, a.clone()).map_err(CliError::usage)?;
                let y = FieldElement::new(&prime, b.clone()).map_err(CliError::usage)?;
                let want = naive_modmul(&x, &y).map_err(CliError::usage)?;
                if *got != want {
                    return Err(CliError::Verification(format!(
                        "simulator product {got} differs from {want}"
                    )));
                }
            }
            (
                SimDoc::from_report(&run.report),
                render_gantt(&run.trace, Some(200)),
            )
        }
    };
    match report {
        ReportFormat::Json => {
            let mut s = serde_json::to_string_pretty(&doc).map_err(CliError::usage)?;
            s.push('\n');
            Ok(s)
        }
        ReportFormat::Text => {
            let mut s = doc.to_text();
            if gantt {
                s.push('\n');
                s.push_str(&chart);
            }
            Ok(s)
        }
    }
}

fn run(cli: Cli) -> Result<String, CliError> {
    match cli.cmd {
        Cmd::Mul {
            prime,
            algo,
            a,
            b,
            radix_bits,
        } => cmd_mul(&prime, algo, &a, &b, radix_bits),
        Cmd::Selftest {
            prime,
            trials,
            seed,
            vectors,
            radix_bits,
        } => {
            if trials == 0 {
                return Err(CliError::usage("--trials must be >= 1"));
            }
            let prime = parse_prime(&prime)?;
            let loaded = match &vectors {
                Some(path) => Some((
                    path.display().to_string(),
                    vectors::load(path).map_err(CliError::usage)?,
                )),
                None => None,
            };
            let outcome = selftest::run(
                &prime,
                trials,
                seed,
                radix_bits,
                loaded.as_ref().map(|(n, v)| (n.as_str(), v.as_slice())),
            )
            .map_err(CliError::usage)?;
            if outcome.passed {
                Ok(outcome.text)
            } else {
                print!("{}", outcome.text);
                Err(CliError::Verification("self-test found mismatches".into()))
            }
        }
        Cmd::Cost { m, n, csv, delay } => cmd_cost(&m, n, csv, delay),
        Cmd::Sim {
            prime,
            interleave,
            mode,
            report,
            count,
            seed,
            gantt,
        } => cmd_sim(&prime, interleave, mode, report, count, seed, gantt),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(out) => {
            print!("{out}");
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("error: {e}");
            match e {
                CliError::Usage(_) => ExitCode::from(2),
                CliError::Verification(_) => ExitCode::from(1),
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ranges() {
        assert_eq!(parse_range("8").unwrap(), (8, 8));
        assert_eq!(parse_range("2-64").unwrap(), (2, 64));
        assert_eq!(parse_range("1..16").unwrap(), (1, 16));
        assert_eq!(parse_range("1..=16").unwrap(), (1, 16));
        for bad in ["0", "5-2", "x", "1-", ""] {
            assert!(parse_range(bad).is_err(), "{bad}");
        }
    }
}
