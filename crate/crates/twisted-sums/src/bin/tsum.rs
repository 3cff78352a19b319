//! Batch front end: reads a JSON input document, runs one computation, and
//! writes a JSON (or, for flat tables, CSV) report.
//!
//! Exit codes: 0 success; 1 a checked certificate is invalid; 2 invalid
//! input; 3 a size cap was exceeded; 64 usage error.

use std::fmt::Write as _;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::json;

use twisted_sums::complex_case::complex_certificate;
use twisted_sums::error::{Error, Result};
use twisted_sums::geometry::{
    constructive_bound, gp_recurrence_bound, GeneralPositionSet, PointSet,
};
use twisted_sums::incidence::beck_report;
use twisted_sums::io::{
    envelope, extract_certificate, parse_point_set, parse_rational_values, parse_tuples,
    parse_values, read_json, render_json, write_output, TupleData, ValuesData,
};
use twisted_sums::mc::{sample_frequency_table, sample_sums};
use twisted_sums::pairing::greedy_pairs;
use twisted_sums::scalar::{GaussianRational, Scalar};
use twisted_sums::subsets::{distinct_subset_sums, MAX_SUBSET_CAP};
use twisted_sums::support::{exact_support, support_counts, MAX_EXACT_N};
use twisted_sums::tuple::DistinctTuple;
use twisted_sums::witness::{
    build_certificate, explore_t_asymptotics, verify_certificate, SequenceFamily,
    WitnessCertificate,
};
use twisted_sums::Rational;

#[derive(Parser)]
#[command(
    name = "tsum",
    version,
    about = "Exact supports, bounds, and certificates for permutation-twisted dot products"
)]
struct Cli {
    /// Worker threads; defaults to TSUM_THREADS or all cores.
    #[arg(long, global = true, value_parser = clap::value_parser!(u64).range(1..))]
    threads: Option<u64>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Args)]
struct IoArgs {
    /// Input JSON document; "-" reads standard input.
    #[arg(short, long, default_value = "-")]
    input: String,

    /// Output path; "-" writes standard output.
    #[arg(short, long, default_value = "-")]
    output: String,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
}

#[derive(Subcommand)]
enum Command {
    /// Enumerate the exact support of S(a, b; pi) over all permutations.
    Support {
        #[command(flatten)]
        io: IoArgs,
        /// Output format; csv emits the value,count frequency table.
        #[arg(long, value_enum, default_value = "json")]
        format: Format,
        /// Refuse tuples longer than this (clamped to the built-in cap).
        #[arg(long, default_value_t = MAX_EXACT_N)]
        max_exact_n: usize,
    },
    /// Count distinct subset sums of a list of values.
    SubsetSums {
        #[command(flatten)]
        io: IoArgs,
        /// Refuse lists longer than this (clamped to the built-in cap).
        #[arg(long, default_value_t = MAX_SUBSET_CAP)]
        cap: usize,
    },
    /// Run the greedy superadditive pairing on a rational tuple.
    Pairs {
        #[command(flatten)]
        io: IoArgs,
    },
    /// Build a distinct-sums certificate for rational tuples.
    WitnessReal {
        #[command(flatten)]
        io: IoArgs,
    },
    /// Build a distinct-sums certificate for Gaussian rational tuples.
    WitnessComplex {
        #[command(flatten)]
        io: IoArgs,
        /// Collinearity threshold override for the line-census dichotomy.
        #[arg(long)]
        tau: Option<usize>,
        /// Cap on selected pairs in the spread construction.
        #[arg(long)]
        pairs: Option<usize>,
    },
    /// Evaluate the general-position bound: recurrence and, given points,
    /// the constructive version.
    GpBound {
        /// Point-set JSON document; omit to evaluate the recurrence alone.
        #[arg(short, long)]
        input: Option<String>,
        /// Output path; "-" writes standard output.
        #[arg(short, long, default_value = "-")]
        output: String,
        /// Dimension for the bare recurrence.
        #[arg(long)]
        d: Option<usize>,
        /// Point count for the bare recurrence.
        #[arg(long)]
        m: Option<usize>,
        /// Include the evaluation trace in the report.
        #[arg(long)]
        trace: bool,
    },
    /// Classify a planar point set by the line-census dichotomy.
    Beck {
        #[command(flatten)]
        io: IoArgs,
        /// Collinearity threshold; defaults to max(4, ceil(n/4)).
        #[arg(long)]
        tau: Option<usize>,
    },
    /// Monte Carlo sampling of S(a, b; pi) under uniform random pi.
    Mc {
        #[command(flatten)]
        io: IoArgs,
        #[arg(long, default_value_t = 10_000)]
        samples: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Output format; csv emits the value,frequency table.
        #[arg(long, value_enum, default_value = "json")]
        format: Format,
    },
    /// Tabulate the empirical subset-sum threshold against its predicted
    /// cubic-root growth.
    ExploreT {
        /// Output path; "-" writes standard output.
        #[arg(short, long, default_value = "-")]
        output: String,
        /// Built-in sequence family: squares, geometric, or mixed.
        #[arg(long)]
        family: String,
        /// Sequence length; repeat the flag for several lengths.
        #[arg(long = "m", required = true)]
        ms: Vec<usize>,
    },
    /// Re-check a certificate from scratch against its tuples.
    Verify {
        #[command(flatten)]
        io: IoArgs,
    },
}

fn main() {
    std::process::exit(run());
}

fn run() -> i32 {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0,
                _ => 64,
            };
            let _ = e.print();
            return code;
        }
    };

    let threads = cli.threads.map(|t| t as usize).or_else(|| {
        std::env::var("TSUM_THREADS")
            .ok()
            .and_then(|s| s.parse::<usize>().ok())
            .filter(|&t| t >= 1)
    });
    let outcome = match threads {
        Some(t) => rayon::ThreadPoolBuilder::new()
            .num_threads(t)
            .build()
            .map_err(|e| Error::InvalidParameter(e.to_string()))
            .and_then(|pool| pool.install(|| dispatch(&cli.command))),
        None => dispatch(&cli.command),
    };
    match outcome {
        Ok(code) => code,
        Err(e) => {
            eprintln!(
                "{}",
                json!({ "error": e.code(), "message": e.to_string() })
            );
            match e {
                Error::TooLarge { .. } => 3,
                _ => 2,
            }
        }
    }
}

fn dispatch(command: &Command) -> Result<i32> {
    match command {
        Command::Support {
            io,
            format,
            max_exact_n,
        } => cmd_support(io, *format, *max_exact_n),
        Command::SubsetSums { io, cap } => cmd_subset_sums(io, *cap),
        Command::Pairs { io } => cmd_pairs(io),
        Command::WitnessReal { io } => cmd_witness_real(io),
        Command::WitnessComplex { io, tau, pairs } => cmd_witness_complex(io, *tau, *pairs),
        Command::GpBound {
            input,
            output,
            d,
            m,
            trace,
        } => cmd_gp_bound(input.as_deref(), output, *d, *m, *trace),
        Command::Beck { io, tau } => cmd_beck(io, *tau),
        Command::Mc {
            io,
            samples,
            seed,
            format,
        } => cmd_mc(io, *samples, *seed, *format),
        Command::ExploreT { output, family, ms } => cmd_explore_t(output, family, ms),
        Command::Verify { io } => cmd_verify(io),
    }
}

fn emit<T: serde::Serialize>(output: &str, command: &str, report: &T) -> Result<()> {
    let env = envelope(command, report)?;
    write_output(output, &render_json(&env)?)
}

fn pair_or_self<T: Scalar>(
    a: DistinctTuple<T>,
    b: Option<DistinctTuple<T>>,
) -> (DistinctTuple<T>, DistinctTuple<T>) {
    let b = b.unwrap_or_else(|| a.clone());
    (a, b)
}

fn cmd_support(io: &IoArgs, format: Format, max_exact_n: usize) -> Result<i32> {
    let doc = read_json(&io.input)?;
    match parse_tuples(&doc)? {
        TupleData::Rational(a, b) => {
            let (a, b) = pair_or_self(a, b);
            support_impl(io, format, max_exact_n, &a, &b)
        }
        TupleData::Gaussian(a, b) => {
            let (a, b) = pair_or_self(a, b);
            support_impl(io, format, max_exact_n, &a, &b)
        }
    }
}

fn support_impl<T: Scalar>(
    io: &IoArgs,
    format: Format,
    max_exact_n: usize,
    a: &DistinctTuple<T>,
    b: &DistinctTuple<T>,
) -> Result<i32> {
    match format {
        Format::Json => {
            let summary = exact_support(a, b, max_exact_n)?;
            emit(&io.output, "support", &summary)?;
        }
        Format::Csv => {
            let counts = support_counts(a, b, max_exact_n)?;
            let mut text = String::from("value,count\n");
            for (value, count) in counts {
                let _ = writeln!(text, "{value},{count}");
            }
            write_output(&io.output, &text)?;
        }
    }
    Ok(0)
}

fn cmd_subset_sums(io: &IoArgs, cap: usize) -> Result<i32> {
    let doc = read_json(&io.input)?;
    match parse_values(&doc)? {
        ValuesData::Rational(values) => {
            emit(&io.output, "subset-sums", &distinct_subset_sums(&values, cap)?)?
        }
        ValuesData::Gaussian(values) => {
            emit(&io.output, "subset-sums", &distinct_subset_sums(&values, cap)?)?
        }
    }
    Ok(0)
}

fn cmd_pairs(io: &IoArgs) -> Result<i32> {
    let doc = read_json(&io.input)?;
    let tuple = DistinctTuple::new(parse_rational_values(&doc)?)?;
    let family = greedy_pairs(&tuple)?;
    let report = json!({
        "r": family.r(),
        "pairs_original": family.pairs_original(),
        "family": family,
    });
    emit(&io.output, "pairs", &report)?;
    Ok(0)
}

fn cmd_witness_real(io: &IoArgs) -> Result<i32> {
    let doc = read_json(&io.input)?;
    let TupleData::Rational(a, b) = parse_tuples(&doc)? else {
        return Err(Error::InvalidParameter(
            "witness-real expects rational tuples; use witness-complex".into(),
        ));
    };
    let (a, b) = pair_or_self(a, b);
    let certificate = build_certificate(&a, &b)?;
    let report = json!({
        "kind": "rational",
        "a": a,
        "b": b,
        "claimed_count": certificate.claimed_count,
        "certificate": certificate,
    });
    emit(&io.output, "witness-real", &report)?;
    Ok(0)
}

fn cmd_witness_complex(io: &IoArgs, tau: Option<usize>, pairs: Option<usize>) -> Result<i32> {
    let doc = read_json(&io.input)?;
    let (a, b) = match parse_tuples(&doc)? {
        TupleData::Gaussian(a, b) => pair_or_self(a, b),
        TupleData::Rational(a, b) => {
            // Lift real input onto the real axis of the plane.
            let lift = |t: DistinctTuple<Rational>| {
                DistinctTuple::new(
                    t.entries()
                        .iter()
                        .cloned()
                        .map(GaussianRational::from_re)
                        .collect(),
                )
                .expect("distinctness is preserved by the lift")
            };
            let (a, b) = pair_or_self(a, b);
            (lift(a), lift(b))
        }
    };
    let witness = complex_certificate(&a, &b, tau, pairs)?;
    let mut report = serde_json::to_value(&witness)?;
    let obj = report.as_object_mut().expect("witness serializes to an object");
    obj.insert("kind".into(), json!("gaussian"));
    obj.insert("a".into(), serde_json::to_value(&a)?);
    obj.insert("b".into(), serde_json::to_value(&b)?);
    obj.insert(
        "claimed_count".into(),
        json!(witness.certificate.claimed_count),
    );
    emit(&io.output, "witness-complex", &report)?;
    Ok(0)
}

fn cmd_gp_bound(
    input: Option<&str>,
    output: &str,
    d: Option<usize>,
    m: Option<usize>,
    trace: bool,
) -> Result<i32> {
    match input {
        Some(path) => {
            let doc = read_json(path)?;
            let (d, points) = parse_point_set(&doc)?;
            let set = GeneralPositionSet::validate(PointSet::new(d, points)?)?;
            let bound = constructive_bound(&set)?;
            let mut report = serde_json::to_value(&bound)?;
            if !trace {
                report
                    .as_object_mut()
                    .expect("bound serializes to an object")
                    .remove("trace");
            }
            emit(output, "gp-bound", &report)?;
        }
        None => {
            let (Some(d), Some(m)) = (d, m) else {
                return Err(Error::InvalidParameter(
                    "gp-bound needs either --input or both --d and --m".into(),
                ));
            };
            let mut bound = gp_recurrence_bound(d, m)?;
            if !trace {
                bound.trace = None;
            }
            emit(output, "gp-bound", &bound)?;
        }
    }
    Ok(0)
}

fn cmd_beck(io: &IoArgs, tau: Option<usize>) -> Result<i32> {
    let doc = read_json(&io.input)?;
    let points = match parse_tuples(&doc)? {
        TupleData::Gaussian(a, _) => a,
        TupleData::Rational(a, _) => DistinctTuple::new(
            a.entries()
                .iter()
                .cloned()
                .map(GaussianRational::from_re)
                .collect(),
        )
        .expect("distinctness is preserved by the lift"),
    };
    let report = beck_report(points.entries(), tau)?;
    emit(&io.output, "beck", &report)?;
    Ok(0)
}

fn cmd_mc(io: &IoArgs, samples: u64, seed: u64, format: Format) -> Result<i32> {
    let doc = read_json(&io.input)?;
    match parse_tuples(&doc)? {
        TupleData::Rational(a, b) => {
            let (a, b) = pair_or_self(a, b);
            mc_impl(io, samples, seed, format, &a, &b)
        }
        TupleData::Gaussian(a, b) => {
            let (a, b) = pair_or_self(a, b);
            mc_impl(io, samples, seed, format, &a, &b)
        }
    }
}

fn mc_impl<T: Scalar>(
    io: &IoArgs,
    samples: u64,
    seed: u64,
    format: Format,
    a: &DistinctTuple<T>,
    b: &DistinctTuple<T>,
) -> Result<i32> {
    match format {
        Format::Json => {
            let report = sample_sums(a, b, samples, seed)?;
            emit(&io.output, "mc", &report)?;
        }
        Format::Csv => {
            let table = sample_frequency_table(a, b, samples, seed)?;
            let mut text = String::from("value,frequency\n");
            for (value, count) in table {
                let _ = writeln!(text, "{value},{count}");
            }
            write_output(&io.output, &text)?;
        }
    }
    Ok(0)
}

fn cmd_explore_t(output: &str, family: &str, ms: &[usize]) -> Result<i32> {
    let family: SequenceFamily = family.parse()?;
    let rows = explore_t_asymptotics(family, ms)?;
    emit(output, "explore-t", &json!({ "rows": rows }))?;
    Ok(0)
}

fn cmd_verify(io: &IoArgs) -> Result<i32> {
    let doc = read_json(&io.input)?;
    let body = doc.get("report").cloned().unwrap_or(doc);
    let cert_value = extract_certificate(&body);
    let (report, valid) = match parse_tuples(&body)? {
        TupleData::Rational(a, Some(b)) => {
            let cert: WitnessCertificate<Rational> = serde_json::from_value(cert_value)?;
            let report = verify_certificate(&a, &b, &cert);
            (serde_json::to_value(&report)?, report.valid)
        }
        TupleData::Gaussian(a, Some(b)) => {
            let cert: WitnessCertificate<GaussianRational> = serde_json::from_value(cert_value)?;
            let report = verify_certificate(&a, &b, &cert);
            (serde_json::to_value(&report)?, report.valid)
        }
        _ => {
            return Err(Error::InvalidParameter(
                "verify needs both \"a\" and \"b\" next to the certificate".into(),
            ))
        }
    };
    emit(&io.output, "verify", &report)?;
    Ok(if valid { 0 } else { 1 })
}
