use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context};
use clap::{Args, Parser, Subcommand};

use gainforge::catalog::{self, catalog_verify_all, construct, corrupted_w4, rows_to_csv, verify_entries};
use gainforge::io::{format_spectrum, format_verdict, parse_gaingraph, parse_lines, parse_spectrum_values, serialize_gaingraph, serialize_lines};
use gainforge::lines::{
    angle_profile, certify_lines, dismantle, find_basis_partition, gain_to_lines, geometry_lines, lines_to_gain,
    tightness_check, AngleClass, LineSystem,
};
use gainforge::params::Params;
use gainforge::search::{anneal, identify, Objective, SearchConfig, SearchStatus};
use gainforge::switching::{switching_equivalent_tol, switching_isomorphic_tol, SwitchingWitness, DEFAULT_ISO_BUDGET};
use gainforge::{certify_two_ev, eigenvalues, Error, GainGraph};

const EXIT_USAGE: u8 = 2;
const EXIT_EXHAUSTED: u8 = 3;
const EXIT_FAIL: u8 = 4;

#[derive(Parser)]
#[command(name = "gainforge", version, about = "Two-eigenvalue complex unit gain graphs")]
struct Cli {
    /// Numerical tolerance for certification.
    #[arg(long, global = true, default_value_t = 1e-9)]
    tol: f64,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Build a named graph or family.
    Construct {
        name: String,
        /// Parameter assignment such as `x=rot:1/3`, `x=num:0.6,0.8` or `t=5`.
        #[arg(long = "param")]
        params: Vec<String>,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Print the eigenvalues and their clusters.
    Spectrum { file: PathBuf },
    /// Certify the two-eigenvalue property.
    Verify { file: PathBuf },
    /// Decide switching equivalence of two graphs on the same labelled support.
    Equiv { first: PathBuf, second: PathBuf },
    /// Search for a switching isomorphism.
    Iso {
        first: PathBuf,
        second: PathBuf,
        #[arg(long, default_value_t = DEFAULT_ISO_BUDGET)]
        budget: u64,
    },
    /// Convert between gain graphs and line systems.
    #[command(subcommand)]
    Lines(LinesCommand),
    /// Split a line system into tight parts and certify prefix unions.
    Dismantle {
        file: PathBuf,
        /// Parts separated by `;`, each a list of indices and inclusive ranges, e.g. `0-3;4,5,6,7`.
        #[arg(long, conflicts_with = "find", required_unless_present = "find")]
        partition: Option<String>,
        /// Search for a partition into orthonormal bases.
        #[arg(long)]
        find: bool,
        #[arg(long)]
        alpha: Option<f64>,
        #[arg(long, default_value_t = 10_000_000)]
        budget: u64,
    },
    /// Simulated annealing on a fixed underlying graph.
    Search(SearchArgs),
    /// List or verify the catalog.
    Catalog {
        #[arg(long, conflicts_with = "verify_all")]
        list: bool,
        #[arg(long)]
        verify_all: bool,
        /// Restrict to entries with this tag (e.g. `degree4`, `table2`).
        #[arg(long)]
        only: Option<String>,
        /// Append a deliberately corrupted W4 fixture.
        #[arg(long)]
        negative_control: bool,
    },
}

#[derive(Subcommand)]
enum LinesCommand {
    /// Factor a certified gain graph into a line system.
    Export {
        graph: PathBuf,
        #[arg(short, long)]
        output: PathBuf,
    },
    /// Read the gain graph off a line system.
    Import {
        file: PathBuf,
        #[arg(long)]
        alpha: f64,
        #[arg(short, long)]
        output: PathBuf,
    },
    /// Report tightness and the angle profile.
    Check { file: PathBuf },
    /// Write a named line system.
    Build {
        name: String,
        #[arg(long = "param")]
        params: Vec<String>,
        #[arg(short, long)]
        output: PathBuf,
    },
}

#[derive(Args)]
struct SearchArgs {
    #[arg(long)]
    underlying: PathBuf,
    /// Start from the quick profile instead of the default schedule.
    #[arg(long)]
    quick: bool,
    #[arg(long)]
    t0: Option<f64>,
    #[arg(long)]
    alpha: Option<f64>,
    #[arg(long)]
    tau: Option<f64>,
    #[arg(long)]
    iters: Option<usize>,
    #[arg(long)]
    eps: Option<f64>,
    /// Falls back to GAINFORGE_SEED, then 0.
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    chains: Option<usize>,
    #[arg(long)]
    snap: Option<u64>,
    #[arg(long)]
    target_spectrum: Option<PathBuf>,
    #[arg(short, long)]
    output: Option<PathBuf>,
    /// CSV of (temperature, best_f) per cooling step.
    #[arg(long)]
    trace: Option<PathBuf>,
}

fn read(path: &Path) -> anyhow::Result<String> {
    fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))
}

fn read_graph(path: &Path) -> anyhow::Result<GainGraph> {
    parse_gaingraph(&read(path)?).with_context(|| format!("parsing {}", path.display()))
}

fn read_lines(path: &Path) -> anyhow::Result<LineSystem> {
    parse_lines(&read(path)?).with_context(|| format!("parsing {}", path.display()))
}

fn write(path: &Path, text: &str) -> anyhow::Result<()> {
    fs::write(path, text).with_context(|| format!("writing {}", path.display()))
}

fn parse_params(items: &[String]) -> anyhow::Result<Params> {
    let mut p = Params::new();
    for item in items {
        p.parse_assignment(item)?;
    }
    Ok(p)
}

fn parse_partition(text: &str) -> anyhow::Result<Vec<Vec<usize>>> {
    let mut parts = Vec::new();
    for part in text.split(';').map(str::trim).filter(|p| !p.is_empty()) {
        let mut cols = Vec::new();
        for item in part.split(',').map(str::trim) {
            match item.split_once('-') {
                Some((a, b)) => {
                    let (a, b): (usize, usize) = (a.trim().parse()?, b.trim().parse()?);
                    if a > b {
                        bail!("empty range {item}");
                    }
                    cols.extend(a..=b);
                }
                None => cols.push(item.parse().with_context(|| format!("bad index {item:?}"))?),
            }
        }
        parts.push(cols);
    }
    Ok(parts)
}

fn format_witness(w: &SwitchingWitness) -> String {
    let perm: Vec<String> = w.permutation.iter().map(ToString::to_string).collect();
    let diag: Vec<String> = w.diagonal.iter().map(ToString::to_string).collect();
    format!("permutation=[{}] conjugated={} diagonal=[{}]", perm.join(","), w.conjugated, diag.join(", "))
}

fn infer_alpha(lines: &LineSystem) -> anyhow::Result<f64> {
    match angle_profile(lines).class {
        AngleClass::Equiangular(a) | AngleClass::ZeroAlpha(a) => Ok(a),
        other => bail!("cannot infer a single nonzero angle ({other:?}); pass --alpha"),
    }
}

fn run(cli: Cli) -> anyhow::Result<u8> {
    let tol = cli.tol;
    match cli.command {
        Command::Construct { name, params, output } => {
            let g = construct(&name, &parse_params(&params)?)?;
            let text = serialize_gaingraph(&g);
            match output {
                Some(p) => write(&p, &text)?,
                None => print!("{text}"),
            }
            Ok(0)
        }
        Command::Spectrum { file } => {
            print!("{}", format_spectrum(&eigenvalues(&read_graph(&file)?, tol)?));
            Ok(0)
        }
        Command::Verify { file } => {
            let g = read_graph(&file)?;
            let spec = eigenvalues(&g, tol)?;
            let cert = match certify_two_ev(&g, tol) {
                Ok(c) => c,
                Err(Error::Disconnected | Error::EmptyGraph) => None,
                Err(e) => return Err(e.into()),
            };
            println!("{}", format_verdict(cert.as_ref(), &spec));
            Ok(if cert.is_some() { 0 } else { EXIT_FAIL })
        }
        Command::Equiv { first, second } => {
            let (g1, g2) = (read_graph(&first)?, read_graph(&second)?);
            match switching_equivalent_tol(&g1, &g2, tol) {
                Ok(Some(w)) => {
                    println!("EQUIVALENT {}", format_witness(&w));
                    Ok(0)
                }
                Ok(None) => {
                    println!("NOT-EQUIVALENT");
                    Ok(EXIT_FAIL)
                }
                Err(e @ (Error::SupportMismatch | Error::OrderMismatch(..))) => {
                    println!("NOT-EQUIVALENT reason={e}");
                    Ok(EXIT_FAIL)
                }
                Err(e) => Err(e.into()),
            }
        }
        Command::Iso { first, second, budget } => {
            let (g1, g2) = (read_graph(&first)?, read_graph(&second)?);
            match switching_isomorphic_tol(&g1, &g2, budget, tol.max(1e-9)) {
                Ok(Some(w)) => {
                    println!("ISOMORPHIC {}", format_witness(&w));
                    Ok(0)
                }
                Ok(None) => {
                    println!("NOT-ISOMORPHIC");
                    Ok(EXIT_FAIL)
                }
                Err(Error::Timeout { budget }) => {
                    println!("TIMEOUT budget={budget}");
                    Ok(EXIT_EXHAUSTED)
                }
                Err(e) => Err(e.into()),
            }
        }
        Command::Lines(cmd) => run_lines(cmd, tol),
        Command::Dismantle { file, partition, find, alpha, budget } => {
            let lines = read_lines(&file)?;
            let alpha = match alpha {
                Some(a) => a,
                None => infer_alpha(&lines)?,
            };
            let partition = if find {
                match find_basis_partition(&lines, budget) {
                    Ok(Some(p)) => p,
                    Ok(None) => {
                        println!("NO-PARTITION");
                        return Ok(EXIT_EXHAUSTED);
                    }
                    Err(Error::Timeout { budget }) => {
                        println!("TIMEOUT budget={budget}");
                        return Ok(EXIT_EXHAUSTED);
                    }
                    Err(e) => return Err(e.into()),
                }
            } else {
                parse_partition(partition.as_deref().unwrap_or_default())?
            };
            let d = match dismantle(&lines, &partition, alpha) {
                Ok(d) => d,
                Err(e @ Error::PartNotTight { .. }) => {
                    println!("FAIL {e}");
                    return Ok(EXIT_FAIL);
                }
                Err(e) => return Err(e.into()),
            };
            for (i, (part, report)) in partition.iter().zip(&d.parts).enumerate() {
                println!("part {i} size={} tight={} z={:.12}", part.len(), report.is_tight, report.z);
            }
            let mut ok = true;
            for u in &d.unions {
                let spec = eigenvalues(&u.graph, tol)?;
                let status = match &u.certificate {
                    Some(_) => "TWO-EV",
                    None if u.graph.edge_count() == 0 => "EMPTY",
                    None => {
                        ok = false;
                        "NOT-TWO-EV"
                    }
                };
                let clusters: Vec<String> = spec.clusters.iter().map(|(v, m)| format!("{v:.12}x{m}")).collect();
                println!("union t={} n={} {status} spectrum={{{}}}", u.parts, u.columns.len(), clusters.join(", "));
            }
            Ok(if ok { 0 } else { EXIT_FAIL })
        }
        Command::Search(args) => run_search(args),
        Command::Catalog { list, verify_all, only, negative_control } => {
            if list || !verify_all {
                for e in catalog::catalog().iter().filter(|e| only.as_deref().is_none_or(|t| e.has_tag(t))) {
                    println!("{}\torder={}\ttags={}\t{}", e.name, e.order(), e.tags.join(","), e.source);
                }
                return Ok(0);
            }
            let mut rows = catalog_verify_all(tol, only.as_deref());
            if negative_control {
                rows.extend(verify_entries(&[corrupted_w4()], tol));
            }
            print!("{}", rows_to_csv(&rows));
            Ok(if rows.iter().all(|r| r.pass) { 0 } else { EXIT_FAIL })
        }
    }
}

fn run_lines(cmd: LinesCommand, tol: f64) -> anyhow::Result<u8> {
    match cmd {
        LinesCommand::Export { graph, output } => {
            let g = read_graph(&graph)?;
            let Some(cert) = certify_two_ev(&g, tol)? else {
                println!("NOT-TWO-EV");
                return Ok(EXIT_FAIL);
            };
            let lines = gain_to_lines(&g, &cert)?;
            write(&output, &serialize_lines(&lines))?;
            println!("dim={} count={} alpha={:.16e}", lines.dim(), lines.count(), lines.alpha().unwrap_or(f64::NAN));
            Ok(0)
        }
        LinesCommand::Import { file, alpha, output } => {
            let lines = read_lines(&file)?;
            let (g, t) = lines_to_gain(&lines, alpha)?;
            write(&output, &serialize_gaingraph(&g))?;
            println!("tight={} z={:.16e} residual={:.3e}", t.is_tight, t.z, t.residual);
            Ok(0)
        }
        LinesCommand::Check { file } => {
            let lines = read_lines(&file)?;
            let t = tightness_check(&lines);
            let profile = angle_profile(&lines);
            let values: Vec<String> = profile.values.iter().map(|v| format!("{v:.12}")).collect();
            println!("dim={} count={}", lines.dim(), lines.count());
            println!("{} z={:.16e} residual={:.3e}", if t.is_tight { "TIGHT" } else { "NOT-TIGHT" }, t.z, t.residual);
            println!("angles=[{}] class={:?}", values.join(", "), profile.class);
            if let AngleClass::Equiangular(a) | AngleClass::ZeroAlpha(a) = profile.class {
                if let Ok((_, Some(cert))) = certify_lines(&lines, a) {
                    println!("graph TWO-EV theta1={:.16e} theta2={:.16e} m={}", cert.theta1, cert.theta2, cert.m);
                }
            }
            Ok(if t.is_tight { 0 } else { EXIT_FAIL })
        }
        LinesCommand::Build { name, params, output } => {
            let lines = geometry_lines(&name, &parse_params(&params)?)?;
            write(&output, &serialize_lines(&lines))?;
            println!("dim={} count={}", lines.dim(), lines.count());
            Ok(0)
        }
    }
}

fn env_seed() -> anyhow::Result<u64> {
    match std::env::var("GAINFORGE_SEED") {
        Ok(s) => s.trim().parse().context("GAINFORGE_SEED must be an unsigned integer"),
        Err(_) => Ok(0),
    }
}

fn run_search(a: SearchArgs) -> anyhow::Result<u8> {
    let support = read_graph(&a.underlying)?;
    let base = if a.quick { SearchConfig::quick() } else { SearchConfig::default() };
    let cfg = SearchConfig {
        t0: a.t0.unwrap_or(base.t0),
        alpha: a.alpha.unwrap_or(base.alpha),
        tau: a.tau.unwrap_or(base.tau),
        iters_per_temp: a.iters.unwrap_or(base.iters_per_temp),
        epsilon: a.eps.unwrap_or(base.epsilon),
        seed: match a.seed {
            Some(s) => s,
            None => env_seed()?,
        },
        chains: a.chains.unwrap_or(base.chains),
        snap_order: a.snap.unwrap_or(base.snap_order),
    };
    let objective = match &a.target_spectrum {
        Some(p) => Objective::Cospectral(parse_spectrum_values(&read(p)?)?),
        None => Objective::TwoEv,
    };
    let r = anneal(&support, &cfg, &objective)?;
    if let Some(p) = &a.trace {
        let mut csv = String::from("temperature,best_f\n");
        for (t, f) in &r.trace {
            csv.push_str(&format!("{t:.16e},{f:.16e}\n"));
        }
        write(p, &csv)?;
    }
    let status = match r.status {
        SearchStatus::Converged => "CONVERGED",
        SearchStatus::Exhausted => "EXHAUSTED",
    };
    println!("{status} best_f={:.3e} seed={} proposals={}", r.best_f, r.seed, r.proposals);
    let out = match &r.snapped {
        Some((s, cert)) => {
            println!("snapped exact={} theta1={:.16e} theta2={:.16e} m={}", s.is_exact(), cert.theta1, cert.theta2, cert.m);
            if let Some(id) = identify(s, DEFAULT_ISO_BUDGET)? {
                println!("identified {}", id.name);
            }
            s
        }
        None => &r.best_gains,
    };
    if let Some(p) = &a.output {
        write(p, &serialize_gaingraph(out))?;
    }
    Ok(if r.status == SearchStatus::Converged { 0 } else { EXIT_EXHAUSTED })
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(EXIT_USAGE)
        }
    }
}
