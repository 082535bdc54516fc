use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use tsplab_harness::{
    emit_report, random_onetwo_check, run_cw_experiment, run_gk_experiment,
    run_onetwo_experiment, HarnessError, ReportFormat, Result,
};

use tsplab_core::certificates::{verify_cw_run, verify_greedy_run};
use tsplab_core::exact::{brute_force, held_karp};
use tsplab_core::heuristics::{clarke_wright, greedy_tour, TieBreak, Tour};
use tsplab_core::instances::{
    cw_certificate, gen_cw_instance, gen_gk, gen_one_two, gk_certificate, one_two_certificate,
    read_certificate, read_tsplib, write_certificate, write_tsplib, Certificate, GkKind,
};
use tsplab_core::metrics::Instance;

#[derive(Parser)]
#[command(
    name = "tsplab",
    version,
    about = "Worst-case laboratory for greedy and Clarke-Wright TSP heuristics"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Generate a family instance (and optionally its certificate)
    Generate {
        /// Family: gk, cwgk, or onetwo
        #[arg(long, value_parser = ["gk", "cwgk", "onetwo"])]
        family: String,
        /// Level k for gk/cwgk, city count n for onetwo
        #[arg(long)]
        param: usize,
        /// Metric for the gk family: l1, l2, lp:P, or graphic
        #[arg(long)]
        metric: Option<String>,
        /// Instance output path
        #[arg(long)]
        out: PathBuf,
        /// Also write the family certificate here
        #[arg(long)]
        cert: Option<PathBuf>,
    },
    /// Run a heuristic on an instance file
    Run {
        /// Algorithm: greedy or cw
        #[arg(long, value_parser = ["greedy", "cw"])]
        algo: String,
        /// Instance file
        #[arg(long = "in")]
        input: PathBuf,
        /// Tie-break policy: lex, cert:FILE, or seed:N
        #[arg(long, default_value = "lex")]
        tiebreak: String,
        /// Hub city for cw (defaults to the last city)
        #[arg(long)]
        hub: Option<usize>,
    },
    /// Verify that a certificate is a valid heuristic execution prefix
    Verify {
        /// Instance file
        #[arg(long = "in")]
        input: PathBuf,
        /// Certificate file
        #[arg(long)]
        cert: PathBuf,
        /// Algorithm the certificate claims: greedy or cw
        #[arg(long, default_value = "greedy", value_parser = ["greedy", "cw"])]
        algo: String,
        /// Hub city for cw (defaults to the last city)
        #[arg(long)]
        hub: Option<usize>,
    },
    /// Compute an exact optimum tour
    Exact {
        /// Instance file
        #[arg(long = "in")]
        input: PathBuf,
        /// Method: hk (Held-Karp) or brute
        #[arg(long, default_value = "hk", value_parser = ["hk", "brute"])]
        method: String,
    },
    /// Run a reproducible experiment suite and print its report
    Experiment {
        /// Suite: gk, cw, onetwo, or onetwo-random
        #[arg(long, value_parser = ["gk", "cw", "onetwo", "onetwo-random"])]
        suite: String,
        /// Largest family level (gk defaults to 4, cw to 3)
        #[arg(long)]
        kmax: Option<u32>,
        /// Comma-separated city counts for the 1-2 suites
        #[arg(long)]
        nlist: Option<String>,
        /// Trials per n for onetwo-random
        #[arg(long, default_value_t = 200)]
        trials: u32,
        /// Seed for onetwo-random
        #[arg(long, default_value_t = 42)]
        seed: u64,
        /// Output format: csv or svg
        #[arg(long, default_value = "csv", value_parser = ["csv", "svg"])]
        format: String,
    },
}

fn invalid(msg: String) -> HarnessError {
    HarnessError::Core(tsplab_core::Error::InvalidArgument(msg))
}

fn parse_metric(spec: &str) -> Result<GkKind> {
    match spec {
        "l1" => Ok(GkKind::L1),
        "l2" => Ok(GkKind::L2),
        "graphic" => Ok(GkKind::Graphic),
        other => {
            if let Some(p) = other.strip_prefix("lp:") {
                let p: u32 = p
                    .parse()
                    .map_err(|_| invalid(format!("bad Lp exponent in `{other}`")))?;
                Ok(GkKind::Lp(p))
            } else {
                Err(invalid(format!(
                    "unknown metric `{other}` (expected l1, l2, lp:P, or graphic)"
                )))
            }
        }
    }
}

fn load_instance(path: &Path) -> Result<Instance> {
    let text = fs::read_to_string(path)?;
    Ok(read_tsplib(&text)?)
}

fn load_certificate(path: &Path) -> Result<Certificate> {
    let text = fs::read_to_string(path)?;
    Ok(read_certificate(&text)?)
}

fn parse_tiebreak(spec: &str) -> Result<TieBreak> {
    match spec {
        "lex" => Ok(TieBreak::Lexicographic),
        other => {
            if let Some(path) = other.strip_prefix("cert:") {
                Ok(TieBreak::CertificateFirst(load_certificate(Path::new(
                    path,
                ))?))
            } else if let Some(seed) = other.strip_prefix("seed:") {
                let seed: u64 = seed
                    .parse()
                    .map_err(|_| invalid(format!("bad seed in `{other}`")))?;
                Ok(TieBreak::SeededRandom(seed))
            } else {
                Err(invalid(format!(
                    "unknown tie-break `{other}` (expected lex, cert:FILE, or seed:N)"
                )))
            }
        }
    }
}

fn true_length(scaled: u64, scale: u64) -> String {
    if scaled % scale == 0 {
        (scaled / scale).to_string()
    } else {
        format!("{}", scaled as f64 / scale as f64)
    }
}

fn print_tour(instance: &Instance, tour: &Tour) {
    println!("instance: {} ({} cities)", instance.name(), instance.n());
    match tour.length.exact() {
        Some(scaled) => {
            println!("tour length (scaled): {scaled}");
            if instance.scale() > 1 {
                println!(
                    "tour length (true): {}",
                    true_length(scaled, instance.scale())
                );
            }
        }
        None => println!("tour length: {}", tour.length),
    }
    println!("accepted edges: {}", tour.trace.len());
    let order: Vec<String> = tour.order.iter().map(|c| c.to_string()).collect();
    println!("tour: {}", order.join(" "));
}

fn cmd_generate(
    family: &str,
    param: usize,
    metric: Option<&str>,
    out: &Path,
    cert_out: Option<&Path>,
) -> Result<()> {
    if metric.is_some() && family != "gk" {
        return Err(invalid(format!(
            "--metric only applies to the gk family, not {family}"
        )));
    }
    let (instance, cert) = match family {
        "gk" => {
            let kind = parse_metric(metric.unwrap_or("l1"))?;
            let (instance, meta) = gen_gk(param as u32, kind)?;
            println!(
                "gk level {param}: {} cities, s at id {}, r at id {}",
                instance.n(),
                meta.s_id,
                meta.r_id
            );
            (instance, gk_certificate(param as u32)?)
        }
        "cwgk" => {
            let (instance, meta, hub) = gen_cw_instance(param as u32)?;
            println!(
                "cwgk level {param}: {} cities, hub id {} (scaled hub length {}), s at id {}, r at id {}",
                instance.n(),
                hub.hub_id,
                hub.hub_len_scaled,
                meta.s_id,
                meta.r_id
            );
            (instance, cw_certificate(param as u32)?)
        }
        "onetwo" => {
            let instance = gen_one_two(param)?;
            println!("onetwo n={param}: {} cities", instance.n());
            (instance, one_two_certificate(param)?)
        }
        _ => unreachable!("clap restricts the family values"),
    };
    fs::write(out, write_tsplib(&instance)?)?;
    println!("wrote instance to {}", out.display());
    if let Some(path) = cert_out {
        fs::write(path, write_certificate(&cert))?;
        println!("wrote certificate to {}", path.display());
    }
    Ok(())
}

fn cmd_run(algo: &str, input: &Path, tiebreak: &str, hub: Option<usize>) -> Result<()> {
    let instance = load_instance(input)?;
    let tie = parse_tiebreak(tiebreak)?;
    let tour = match algo {
        "greedy" => {
            println!("algorithm: greedy");
            greedy_tour(&instance, &tie)?
        }
        "cw" => {
            let hub = hub.unwrap_or(instance.n() - 1);
            println!("algorithm: clarke-wright (hub {hub})");
            clarke_wright(&instance, hub, &tie)?
        }
        _ => unreachable!(),
    };
    print_tour(&instance, &tour);
    Ok(())
}

fn cmd_verify(input: &Path, cert_path: &Path, algo: &str, hub: Option<usize>) -> Result<()> {
    let instance = load_instance(input)?;
    let cert = load_certificate(cert_path)?;
    let verdict = match algo {
        "greedy" => verify_greedy_run(&instance, &cert)?,
        "cw" => {
            let hub = hub.unwrap_or(instance.n() - 1);
            verify_cw_run(&instance, hub, &cert)?
        }
        _ => unreachable!(),
    };
    println!("verification: {verdict}");
    if !verdict.passed() {
        let param = match cert.family {
            tsplab_core::instances::Family::Gk(k) | tsplab_core::instances::Family::CwGk(k) => {
                u64::from(k)
            }
            tsplab_core::instances::Family::OneTwo(n) => n as u64,
        };
        return Err(HarnessError::Verification { param, verdict });
    }
    let histogram: Vec<String> = verdict
        .stats
        .length_histogram
        .iter()
        .map(|(len, count)| format!("{len}x{count}"))
        .collect();
    println!("length histogram (scaled): {}", histogram.join(" "));
    Ok(())
}

fn cmd_exact(input: &Path, method: &str) -> Result<()> {
    let instance = load_instance(input)?;
    let opt = match method {
        "hk" => held_karp(&instance)?,
        "brute" => brute_force(&instance)?,
        _ => unreachable!(),
    };
    println!("method: {:?}", opt.method);
    println!("optimum (scaled): {}", opt.length_scaled);
    if instance.scale() > 1 {
        println!(
            "optimum (true): {}",
            true_length(opt.length_scaled, instance.scale())
        );
    }
    let order: Vec<String> = opt.tour.iter().map(|c| c.to_string()).collect();
    println!("tour: {}", order.join(" "));
    Ok(())
}

fn parse_nlist(nlist: Option<&str>, default: &[usize]) -> Result<Vec<usize>> {
    match nlist {
        None => Ok(default.to_vec()),
        Some(text) => text
            .split(',')
            .map(|tok| {
                tok.trim()
                    .parse::<usize>()
                    .map_err(|_| invalid(format!("bad city count `{tok}` in --nlist")))
            })
            .collect(),
    }
}

fn cmd_experiment(
    suite: &str,
    kmax: Option<u32>,
    nlist: Option<&str>,
    trials: u32,
    seed: u64,
    format: &str,
) -> Result<()> {
    let format = match format {
        "csv" => ReportFormat::Csv,
        "svg" => ReportFormat::Svg,
        _ => unreachable!(),
    };
    let report = match suite {
        "gk" => emit_report(&run_gk_experiment(kmax.unwrap_or(4), GkKind::L1)?, format)?,
        "cw" => emit_report(&run_cw_experiment(kmax.unwrap_or(3))?, format)?,
        "onetwo" => {
            let ns = parse_nlist(nlist, &[5, 7, 9, 11, 13])?;
            emit_report(&run_onetwo_experiment(&ns)?, format)?
        }
        "onetwo-random" => {
            if format == ReportFormat::Svg {
                return Err(invalid(
                    "the onetwo-random suite only supports csv output".into(),
                ));
            }
            let ns = parse_nlist(nlist, &[6, 8, 10])?;
            let mut reports = Vec::new();
            for n in ns {
                reports.push(random_onetwo_check(n, trials, seed)?);
            }
            tsplab_harness::random_report_csv(&reports)?
        }
        _ => unreachable!(),
    };
    print!("{report}");
    Ok(())
}

fn dispatch(cli: Cli) -> Result<()> {
    match cli.command {
        Command::Generate {
            family,
            param,
            metric,
            out,
            cert,
        } => cmd_generate(&family, param, metric.as_deref(), &out, cert.as_deref()),
        Command::Run {
            algo,
            input,
            tiebreak,
            hub,
        } => cmd_run(&algo, &input, &tiebreak, hub),
        Command::Verify {
            input,
            cert,
            algo,
            hub,
        } => cmd_verify(&input, &cert, &algo, hub),
        Command::Exact { input, method } => cmd_exact(&input, &method),
        Command::Experiment {
            suite,
            kmax,
            nlist,
            trials,
            seed,
            format,
        } => cmd_experiment(&suite, kmax, nlist.as_deref(), trials, seed, &format),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match dispatch(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            eprintln!("error: {err}");
            ExitCode::from(err.exit_code() as u8)
        }
    }
}
