use std::io::{Read, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Parser, Subcommand, ValueEnum};
use log::warn;
use serde::Serialize;
use serde_json::json;

use powersum::bases::Bases;
use powersum::digits::expand;
use powersum::diophantine::{
    find_obstruction, verify_certificate, ObstructionCertificate, ObstructionSearch, PowerEquation,
};
use powersum::error::Error;
use powersum::lambda::{
    lambda_closed_form_odd, lambda_value, limit_point_census, single_base_lambda_scan, LambdaMode,
    LambdaOptions,
};
use powersum::search::{LengthCache, LengthCertificate, SearchContext, SearchOptions};
use powersum::sets::{enumerate_set, member_parametrized, SetName};
use powersum::term::format_terms;
use powersum::verify::{run_suite, Tier};

/// Exit status for results whose length did not settle under cap doubling.
const EXIT_CAP_UNSTABLE: u8 = 3;

#[derive(Parser, Debug)]
#[command(
    name = "powersum",
    version,
    about = "Shortest signed sums of powers over one or more bases"
)]
struct Cli {
    /// Output format.
    #[arg(long, global = true, value_enum, default_value_t = Output::Table)]
    output: Output,

    /// Length cache file (versioned JSON), used by `length` and `table`.
    #[arg(long, global = true, env = "POWERSUM_CACHE")]
    cache: Option<PathBuf>,

    /// Worker threads for parallel commands.
    #[arg(long, global = true)]
    jobs: Option<usize>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Output {
    Table,
    Json,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Balanced single-base expansion of k.
    Expand {
        #[arg(long)]
        base: u64,
        #[arg(allow_negative_numbers = true)]
        k: i128,
    },
    /// Minimal length of k over a union of bases, with a witness.
    Length {
        /// Comma-separated bases, e.g. 2,5.
        #[arg(long)]
        bases: Bases,
        k: i128,
        /// Fixed term cap (disables cap doubling).
        #[arg(long)]
        cap: Option<i128>,
    },
    /// Minimal lengths for k = 1..=max.
    Table {
        #[arg(long)]
        bases: Bases,
        #[arg(long, default_value_t = 20)]
        max: i128,
    },
    /// Smallest k whose minimal length is exactly h.
    Lambda {
        #[arg(long)]
        bases: Bases,
        #[arg(long)]
        h: u32,
        /// Prove minimality of lengths up to 3 by equation insolubility.
        #[arg(long)]
        certify: bool,
        /// Largest k scanned before giving up.
        #[arg(long)]
        ceiling: Option<i128>,
    },
    /// Members of Q, S, T or their intersection up to a bound.
    Sets {
        #[arg(long)]
        name: SetName,
        #[arg(long, default_value_t = 100)]
        max: u64,
        /// Use the explicit three-part parametrization (S and T only).
        #[arg(long)]
        parametrized: bool,
    },
    /// Search for a modular obstruction certificate.
    ///
    /// Equation grammar: `[+-][C*]B^V [+-] [C*]B^V = C`, whitespace-insensitive,
    /// for example "2^a - 5^b = 19".
    Obstruct {
        #[arg(long = "eq", allow_hyphen_values = true)]
        equation: PowerEquation,
        #[arg(long, default_value_t = 1000)]
        max_modulus: u64,
        /// Exponent floors per variable, comma-separated.
        #[arg(long, value_delimiter = ',')]
        floors: Option<Vec<u32>>,
    },
    /// Check an obstruction certificate (JSON file, or `-` for stdin).
    Replay { path: PathBuf },
    /// lambda_{2,n}(h) for every odd n up to a bound, against the predictions.
    Census {
        #[arg(long)]
        h: u32,
        #[arg(long)]
        odd_max: u64,
    },
    /// Run the claim registry and report pass/fail per claim.
    Verify {
        #[arg(long, default_value = "fast")]
        tier: Tier,
        /// Also write the JSON report to this file.
        #[arg(long)]
        report: Option<PathBuf>,
    },
    /// Compare the odd-base closed form for lambda_g with a direct scan.
    ClosedForm {
        #[arg(long)]
        g: u64,
        #[arg(long, default_value_t = 500)]
        max_value: i128,
    },
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();
    match run(&cli) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e:#}");
            let usage = e.downcast_ref::<Error>().is_some_and(Error::is_usage);
            ExitCode::from(if usage { 2 } else { 1 })
        }
    }
}

fn print_json<T: Serialize>(value: &T) -> Result<()> {
    let text = serde_json::to_string_pretty(value)?;
    match writeln!(std::io::stdout().lock(), "{text}") {
        // a closed pipe (`| head`) is not an error
        Err(e) if e.kind() == std::io::ErrorKind::BrokenPipe => Ok(()),
        other => Ok(other?),
    }
}

fn run(cli: &Cli) -> Result<u8> {
    let json = cli.output == Output::Json;
    match &cli.command {
        Command::Expand { base, k } => {
            let e = expand(*k, *base)?;
            if json {
                print_json(&json!({
                    "base": base,
                    "k": k.to_string(),
                    "expansion": e.to_string(),
                    "digits": e.digits(),
                    "length": e.length(),
                }))?;
            } else {
                println!("{e} (length {})", e.length());
            }
            Ok(0)
        }
        Command::Length { bases, k, cap } => {
            let opts = match cap {
                Some(c) => SearchOptions {
                    certify: true,
                    ..SearchOptions::fixed_cap(*c)
                },
                None => SearchOptions::default(),
            };
            let mut cache = open_cache(cli.cache.as_deref(), bases)?;
            if let Some(len) = cache.as_ref().and_then(|c| c.get(*k)) {
                if json {
                    print_json(&json!({ "k": k, "bases": bases, "length": len, "cached": true }))?;
                } else {
                    println!("{k} over {{{bases}}}: length {len} (cached)");
                }
                return Ok(0);
            }
            let cert = SearchContext::new().min_length(*k, bases, &opts)?;
            if let Some(c) = cache.as_mut() {
                c.record(&cert);
            }
            save_cache(cli.cache.as_deref(), cache.as_ref())?;
            if json {
                print_json(&cert)?;
            } else {
                print_certificate(&cert);
            }
            Ok(if cert.cap_stable {
                0
            } else {
                EXIT_CAP_UNSTABLE
            })
        }
        Command::Table { bases, max } => {
            if *max < 1 {
                return Err(Error::InvalidInput("--max must be >= 1".into()).into());
            }
            let mut cache = open_cache(cli.cache.as_deref(), bases)?;
            let ctx = SearchContext::new();
            let opts = SearchOptions::default();
            let mut rows = Vec::new();
            let mut unstable = false;
            for k in 1..=*max {
                if let Some(len) = cache.as_ref().and_then(|c| c.get(k)) {
                    rows.push(json!({ "k": k, "length": len, "cached": true }));
                    continue;
                }
                let cert = ctx.min_length(k, bases, &opts)?;
                unstable |= !cert.cap_stable;
                if let Some(c) = cache.as_mut() {
                    c.record(&cert);
                }
                rows.push(json!({
                    "k": k,
                    "length": cert.length,
                    "witness": format_terms(&cert.witness),
                    "exact": cert.exact,
                }));
            }
            save_cache(cli.cache.as_deref(), cache.as_ref())?;
            if json {
                print_json(&json!({ "bases": bases, "rows": rows }))?;
            } else {
                println!("{:>6}  {:>6}  witness", "k", "length");
                for r in &rows {
                    let witness = r["witness"].as_str().unwrap_or("(cached)");
                    println!("{:>6}  {:>6}  {witness}", r["k"], r["length"]);
                }
            }
            Ok(if unstable { EXIT_CAP_UNSTABLE } else { 0 })
        }
        Command::Lambda {
            bases,
            h,
            certify,
            ceiling,
        } => {
            let opts = LambdaOptions {
                search: SearchOptions {
                    certify: *certify,
                    ..SearchOptions::default()
                },
                ceiling: *ceiling,
            };
            let rec = lambda_value(bases, *h, &opts)?;
            if json {
                print_json(&rec)?;
            } else {
                println!("lambda_{{{bases}}}({h}) = {}", rec.value);
                println!("witness: {}", format_terms(&rec.witness));
                println!(
                    "mode: {}, cap stable: {}, cap: {}",
                    mode_name(rec.mode),
                    rec.cap_stable,
                    rec.certificate.cap_used
                );
            }
            Ok(if rec.cap_stable { 0 } else { EXIT_CAP_UNSTABLE })
        }
        Command::Sets {
            name,
            max,
            parametrized,
        } => {
            let members = if *parametrized {
                let target = match name {
                    SetName::S => 11,
                    SetName::T => 13,
                    other => bail!(Error::InvalidInput(format!(
                        "--parametrized applies to S and T, not {other}"
                    ))),
                };
                let mut out = Vec::new();
                for n in (3..=*max).step_by(2) {
                    if member_parametrized(n, target)? {
                        out.push(n);
                    }
                }
                out
            } else {
                enumerate_set(*name, *max)?
            };
            if json {
                print_json(&json!({ "name": name.to_string(), "max": max, "members": members }))?;
            } else {
                let words: Vec<String> = members.iter().map(u64::to_string).collect();
                println!("{}", words.join(" "));
            }
            Ok(0)
        }
        Command::Obstruct {
            equation,
            max_modulus,
            floors,
        } => {
            if let Some(f) = floors {
                if f.len() != equation.arity() {
                    return Err(Error::InvalidInput(format!(
                        "--floors needs {} values, got {}",
                        equation.arity(),
                        f.len()
                    ))
                    .into());
                }
            }
            let search = ObstructionSearch {
                floors: floors.clone(),
                ceiling: *max_modulus,
                ..ObstructionSearch::default()
            };
            match find_obstruction(equation, &search) {
                Ok(cert) => {
                    if json {
                        print_json(&cert)?;
                    } else {
                        print_obstruction(&cert);
                    }
                    Ok(0)
                }
                Err(failure) => {
                    if json {
                        print_json(
                            &json!({ "equation": equation.to_string(), "failure": failure.to_string() }),
                        )?;
                    } else {
                        println!("{equation}: {failure}");
                    }
                    Ok(1)
                }
            }
        }
        Command::Replay { path } => {
            let text = if path.as_os_str() == "-" {
                let mut s = String::new();
                std::io::stdin().read_to_string(&mut s)?;
                s
            } else {
                std::fs::read_to_string(path)
                    .with_context(|| format!("reading {}", path.display()))?
            };
            let cert: ObstructionCertificate = serde_json::from_str(&text)
                .map_err(|e| Error::Parse(format!("certificate JSON: {e}")))?;
            let check = verify_certificate(&cert);
            if json {
                print_json(&check)?;
            } else if check.valid {
                println!(
                    "valid: {} has no solutions (modulus {})",
                    cert.equation, cert.modulus
                );
            } else {
                let reason = check.reason.map(|r| r.to_string()).unwrap_or_default();
                println!("invalid: {reason}");
            }
            Ok(if check.valid { 0 } else { 1 })
        }
        Command::Census { h, odd_max } => {
            let report = limit_point_census(*h, *odd_max, cli.jobs, &LambdaOptions::default())?;
            let unstable = report.entries.iter().any(|e| !e.cap_stable);
            if json {
                print_json(&report)?;
            } else {
                println!("h = {h}, odd n in [3, {odd_max}]");
                for (value, count) in &report.frequency {
                    println!("  lambda = {value}: {count} values of n");
                }
                if !report.outliers.is_empty() {
                    let list: Vec<String> = report
                        .outliers
                        .iter()
                        .map(|(n, v)| format!("{n}->{v}"))
                        .collect();
                    println!("  outliers: {}", list.join(" "));
                }
                println!(
                    "  fully certified: {}/{}, mismatches: {}",
                    report.fully_certified,
                    report.entries.len(),
                    report.mismatches.len()
                );
                for m in &report.mismatches {
                    println!(
                        "  mismatch n={}: computed {}, predicted {}",
                        m.n, m.value, m.predicted
                    );
                }
            }
            Ok(if !report.mismatches.is_empty() {
                1
            } else if unstable {
                EXIT_CAP_UNSTABLE
            } else {
                0
            })
        }
        Command::Verify { tier, report } => {
            let r = run_suite(*tier, cli.jobs)?;
            if let Some(path) = report {
                std::fs::write(path, serde_json::to_string_pretty(&r)?)
                    .with_context(|| format!("writing {}", path.display()))?;
            }
            if json {
                print_json(&r)?;
            } else {
                print!("{}", r.to_table());
            }
            Ok(if r.passed() { 0 } else { 1 })
        }
        Command::ClosedForm { g, max_value } => {
            let scan = single_base_lambda_scan(*g, *max_value)?;
            let half = ((g - 1) / 2) as u32;
            let mut rows = Vec::new();
            for (&index, &scanned) in &scan {
                let (h, j) = ((index - 1) / half + 1, (index - 1) % half + 1);
                let (_, formula) = lambda_closed_form_odd(*g, h, j)?;
                rows.push(
                    json!({ "index": index, "h": h, "j": j, "formula": formula, "scan": scanned }),
                );
            }
            let agree = rows.iter().all(|r| r["formula"] == r["scan"]);
            if json {
                print_json(
                    &json!({ "g": g, "max_value": max_value, "agree": agree, "rows": rows }),
                )?;
            } else {
                println!(
                    "{:>6}  {:>4}  {:>4}  {:>12}  {:>12}",
                    "index", "h", "j", "formula", "scan"
                );
                for r in &rows {
                    println!(
                        "{:>6}  {:>4}  {:>4}  {:>12}  {:>12}",
                        r["index"], r["h"], r["j"], r["formula"], r["scan"]
                    );
                }
                println!("{}", if agree { "all agree" } else { "DISAGREEMENT" });
            }
            Ok(if agree { 0 } else { 1 })
        }
    }
}

fn mode_name(mode: LambdaMode) -> &'static str {
    match mode {
        LambdaMode::FullyCertified => "fully-certified",
        LambdaMode::CapBounded => "cap-bounded",
    }
}

fn open_cache(path: Option<&Path>, bases: &Bases) -> Result<Option<LengthCache>> {
    path.map(|p| LengthCache::load(p, bases).with_context(|| format!("loading {}", p.display())))
        .transpose()
}

fn save_cache(path: Option<&Path>, cache: Option<&LengthCache>) -> Result<()> {
    if let (Some(p), Some(c)) = (path, cache) {
        if let Err(e) = c.save(p) {
            warn!("could not write length cache {}: {e}", p.display());
        }
    }
    Ok(())
}

fn print_certificate(cert: &LengthCertificate) {
    println!("{} over {{{}}}: length {}", cert.k, cert.bases, cert.length);
    println!("witness: {}", format_terms(&cert.witness));
    let proof = match &cert.lower_bound {
        _ if cert.length == 1 => "trivial".to_string(),
        Some(p) => format!("proven by {} equation families", p.families.len()),
        None => "cap search only".to_string(),
    };
    println!(
        "cap: {}, cap stable: {}, exact: {}, lower bound: {proof}",
        cert.cap_used, cert.cap_stable, cert.exact
    );
}

fn print_obstruction(cert: &ObstructionCertificate) {
    println!("{}", cert.equation);
    println!("modulus: {}", cert.modulus);
    println!("floors: {:?}", cert.floors);
    for o in &cert.periods {
        println!(
            "  powers of {} mod {}: preperiod {}, period {}",
            o.base, o.modulus, o.preperiod, o.period
        );
    }
    println!(
        "left side residues: {:?}; target residue {} is not attained",
        cert.lhs_residues, cert.target_residue
    );
    for s in &cert.below_floor_scan {
        println!(
            "  {} = {}: solutions {:?}",
            s.variable, s.exponent, s.solutions
        );
    }
}
