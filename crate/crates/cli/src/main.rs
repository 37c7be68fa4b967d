//! `specset`: verification campaigns, extremal ratio search, and
//! numerical-range exports for the spectral-set toolkit.
//!
//! Exit codes: 0 clean, 1 usage or I/O error, 2 when a campaign reports
//! violations (falsification evidence, treated as failure by CI).

mod svg;

use clap::{Args, Parser, Subcommand};
use serde::Serialize;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use specset::cauchy::conjugate_transform_boundary;
use specset::holofun::{boundary_trace, conj_trace, RationalFun};
use specset::hull::convex_hull;
use specset::numrange::{enclosing_domain, numrange_boundary, MatrixJson};
use specset::search::{optimize, SearchConfig};
use specset::verify::{run_check, CheckKind, CheckReport, Ensemble};

const TOOL_VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Parser)]
#[command(name = "specset", version, about = "numerical-range spectral-set toolkit")]
struct Cli {
    /// Worker thread cap; falls back to SPECTRAL_SET_THREADS, then to the
    /// number of cores.
    #[arg(long, global = true)]
    threads: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run randomized verification campaigns.
    Verify(VerifyArgs),
    /// Maximize the ratio ||f(A)|| / sup_{W(A)} |f|.
    Search(SearchArgs),
    /// Export the numerical-range boundary (CSV, optional SVG).
    Range(RangeArgs),
}

#[derive(Args)]
struct VerifyArgs {
    /// Comma-separated list: lemma1,lemma2,theorem,radius,sector,bs
    #[arg(long, default_value = "lemma1,lemma2,theorem,radius,sector,bs")]
    checks: String,
    #[arg(long)]
    trials: u64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Enclosing-domain margin for random trials.
    #[arg(long, default_value_t = 0.1)]
    delta: f64,
    /// Output directory; reports go to stdout when omitted.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct SearchArgs {
    #[arg(long)]
    dim: usize,
    #[arg(long)]
    degree: usize,
    #[arg(long, default_value_t = 8)]
    restarts: usize,
    #[arg(long, default_value_t = 120)]
    iters: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = 0.01)]
    delta: f64,
    /// Output directory; results go to stdout when omitted.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct RangeArgs {
    /// Matrix JSON file: {"dim":n,"re":[[...]],"im":[[...]]}.
    #[arg(long)]
    matrix: PathBuf,
    /// Number of boundary angles.
    #[arg(long, default_value_t = 512)]
    angles: usize,
    /// Margin of the smooth enclosing domain drawn alongside W(A).
    #[arg(long, default_value_t = 0.1)]
    domain_delta: f64,
    /// Function JSON {"numer":[[re,im],...],"denom":[[re,im],...]}; the
    /// identity is used when omitted.
    #[arg(long)]
    function: Option<PathBuf>,
    /// Write an SVG overlay of W(A), the enlarged domain, the f/g image
    /// curves and the hull of conj(f).
    #[arg(long)]
    svg: Option<PathBuf>,
    /// Write the enclosing-domain quadrature nodes as CSV.
    #[arg(long)]
    nodes_out: Option<PathBuf>,
    /// Boundary CSV destination; stdout when omitted.
    #[arg(long)]
    out: Option<PathBuf>,
}

/// Reproduction record written next to every output set.
#[derive(Serialize)]
struct RunManifest {
    command: String,
    config: serde_json::Value,
    seed: u64,
    tool_version: String,
    timestamp: String,
}

impl RunManifest {
    fn new(command: &str, config: serde_json::Value, seed: u64) -> Self {
        let unix = std::time::SystemTime::now()
            .duration_since(std::time::UNIX_EPOCH)
            .map(|d| d.as_secs())
            .unwrap_or(0);
        RunManifest {
            command: command.to_string(),
            config,
            seed,
            tool_version: TOOL_VERSION.to_string(),
            timestamp: unix.to_string(),
        }
    }

    fn reference_line(&self) -> String {
        format!(
            "# manifest: command={} seed={} tool_version={}",
            self.command, self.seed, self.tool_version
        )
    }
}

fn write_or_print(out: &Option<PathBuf>, name: &str, content: &str) -> std::io::Result<()> {
    match out {
        Some(dir) => {
            fs::create_dir_all(dir)?;
            fs::write(dir.join(name), content)
        }
        None => {
            print!("{content}");
            Ok(())
        }
    }
}

fn write_manifest(dir: &Path, manifest: &RunManifest) -> std::io::Result<()> {
    fs::create_dir_all(dir)?;
    fs::write(
        dir.join("manifest.json"),
        serde_json::to_string_pretty(manifest).unwrap(),
    )
}

fn cmd_verify(args: &VerifyArgs) -> Result<u8, String> {
    if args.trials == 0 {
        return Err("empty campaign rejected: --trials must be positive".into());
    }
    let mut kinds = Vec::new();
    for name in args.checks.split(',') {
        let name = name.trim();
        let kind = CheckKind::parse(name).ok_or_else(|| {
            let valid: Vec<&str> = CheckKind::ALL.iter().map(|k| k.name()).collect();
            format!("unknown check '{name}'; valid names: {}", valid.join(", "))
        })?;
        kinds.push(kind);
    }
    let ensemble = Ensemble {
        delta: args.delta,
        ..Ensemble::default()
    };
    let manifest = RunManifest::new(
        "verify",
        serde_json::json!({
            "checks": args.checks,
            "trials": args.trials,
            "delta": args.delta,
            "ensemble": &ensemble,
        }),
        args.seed,
    );
    if let Some(dir) = &args.out {
        write_manifest(dir, &manifest).map_err(|e| e.to_string())?;
    }

    let mut reports: Vec<CheckReport> = Vec::new();
    for kind in &kinds {
        let report = run_check(*kind, &ensemble, args.trials, args.seed)
            .map_err(|e| format!("{}: {e}", kind.name()))?;
        reports.push(report);
    }

    let mut summary = String::new();
    summary.push_str(&manifest.reference_line());
    summary.push('\n');
    summary.push_str("check,trials,violations,excluded,worst_margin,max_ratio\n");
    for r in &reports {
        summary.push_str(&format!(
            "{},{},{},{},{},{}\n",
            r.check_name,
            r.trials,
            r.violations,
            r.excluded,
            r.worst_margin,
            r.max_ratio.map_or(String::new(), |v| v.to_string()),
        ));
    }
    for r in &reports {
        let body = serde_json::json!({
            "manifest": "manifest.json",
            "report": r,
        });
        write_or_print(
            &args.out,
            &format!("{}.json", r.check_name),
            &format!("{}\n", serde_json::to_string_pretty(&body).unwrap()),
        )
        .map_err(|e| e.to_string())?;
    }
    write_or_print(&args.out, "summary.csv", &summary).map_err(|e| e.to_string())?;

    let violations: u64 = reports.iter().map(|r| r.violations).sum();
    if violations > 0 {
        eprintln!("FALSIFICATION EVIDENCE: {violations} violating trial(s); inspect the worst cases");
        Ok(2)
    } else {
        Ok(0)
    }
}

fn cmd_search(args: &SearchArgs) -> Result<u8, String> {
    let config = SearchConfig {
        dim: args.dim,
        degree: args.degree,
        restarts: args.restarts,
        iterations: args.iters,
        delta: args.delta,
        seed: args.seed,
    };
    let manifest = RunManifest::new(
        "search",
        serde_json::to_value(&config).unwrap(),
        args.seed,
    );
    let result = optimize(&config).map_err(|e| e.to_string())?;
    if let Some(dir) = &args.out {
        write_manifest(dir, &manifest).map_err(|e| e.to_string())?;
    }
    let body = serde_json::json!({
        "manifest": "manifest.json",
        "result": &result,
    });
    write_or_print(
        &args.out,
        "search.json",
        &format!("{}\n", serde_json::to_string_pretty(&body).unwrap()),
    )
    .map_err(|e| e.to_string())?;

    let mut history = String::new();
    history.push_str(&manifest.reference_line());
    history.push('\n');
    history.push_str("iteration,ratio\n");
    for (i, r) in &result.history {
        history.push_str(&format!("{i},{r}\n"));
    }
    write_or_print(&args.out, "history.csv", &history).map_err(|e| e.to_string())?;
    Ok(0)
}

fn cmd_range(args: &RangeArgs) -> Result<u8, String> {
    let raw = fs::read_to_string(&args.matrix)
        .map_err(|e| format!("unreadable matrix file {}: {e}", args.matrix.display()))?;
    let mj: MatrixJson =
        serde_json::from_str(&raw).map_err(|e| format!("bad matrix JSON: {e}"))?;
    let a = mj.to_matrix().map_err(|e| e.to_string())?;
    let f = match &args.function {
        Some(path) => {
            let raw = fs::read_to_string(path)
                .map_err(|e| format!("unreadable function file {}: {e}", path.display()))?;
            Some(serde_json::from_str::<RationalFun>(&raw).map_err(|e| format!("bad function JSON: {e}"))?)
        }
        None => None,
    };

    let manifest = RunManifest::new(
        "range",
        serde_json::json!({
            "matrix": args.matrix.display().to_string(),
            "angles": args.angles,
            "domain_delta": args.domain_delta,
        }),
        0,
    );
    let bd = numrange_boundary(&a, args.angles).map_err(|e| e.to_string())?;
    let domain = enclosing_domain(&a, args.domain_delta).map_err(|e| e.to_string())?;

    let mut csv = String::new();
    csv.push_str(&manifest.reference_line());
    csv.push('\n');
    csv.push_str("theta,support,pt_re,pt_im\n");
    for k in 0..bd.angles.len() {
        csv.push_str(&format!(
            "{},{},{},{}\n",
            bd.angles[k], bd.supports[k], bd.points[k].re, bd.points[k].im
        ));
    }
    match &args.out {
        Some(path) => fs::write(path, &csv).map_err(|e| e.to_string())?,
        None => print!("{csv}"),
    }

    if let Some(path) = &args.nodes_out {
        let nodes = domain.boundary_nodes(512).map_err(|e| e.to_string())?;
        let mut node_csv = String::new();
        node_csv.push_str(&manifest.reference_line());
        node_csv.push('\n');
        node_csv.push_str("theta,sig_re,sig_im,nu_re,nu_im,weight,curvature\n");
        for n in &nodes {
            node_csv.push_str(&format!(
                "{},{},{},{},{},{},{}\n",
                n.theta, n.sigma.re, n.sigma.im, n.nu.re, n.nu.im, n.weight, n.curvature
            ));
        }
        fs::write(path, node_csv).map_err(|e| e.to_string())?;
    }

    if let Some(path) = &args.svg {
        let n = 512;
        let nodes = domain.boundary_nodes(n).map_err(|e| e.to_string())?;
        let fun = f.clone().unwrap_or_else(RationalFun::identity);
        let fbar = conj_trace(&fun, &nodes).map_err(|e| e.to_string())?;
        let mut paths = vec![
            svg::LabeledPath {
                id: "numrange",
                stroke: "#1f77b4",
                closed: true,
                points: bd.points.clone(),
            },
            svg::LabeledPath {
                id: "domain",
                stroke: "#2ca02c",
                closed: true,
                points: nodes.iter().map(|nd| nd.sigma).collect(),
            },
            svg::LabeledPath {
                id: "fbar-hull",
                stroke: "#9467bd",
                closed: true,
                points: convex_hull(&fbar.values),
            },
        ];
        if f.is_some() {
            let ftrace = boundary_trace(&fun, &nodes).map_err(|e| e.to_string())?;
            let g = conjugate_transform_boundary(&fun, &domain, n).map_err(|e| e.to_string())?;
            paths.push(svg::LabeledPath {
                id: "f-image",
                stroke: "#d62728",
                closed: true,
                points: ftrace.values,
            });
            paths.push(svg::LabeledPath {
                id: "g-image",
                stroke: "#ff7f0e",
                closed: true,
                points: g.values,
            });
        }
        fs::write(path, svg::render(&paths)).map_err(|e| e.to_string())?;
    }
    Ok(0)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            // help/version requests are clean exits, bad flags are usage errors
            use clap::error::ErrorKind;
            let _ = e.print();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => ExitCode::SUCCESS,
                _ => ExitCode::from(1),
            };
        }
    };

    let threads = cli
        .threads
        .or_else(|| {
            std::env::var("SPECTRAL_SET_THREADS")
                .ok()
                .and_then(|v| v.parse().ok())
        })
        .unwrap_or(0);
    if threads > 0 {
        let _ = rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build_global();
    }

    let outcome = match &cli.command {
        Command::Verify(args) => cmd_verify(args),
        Command::Search(args) => cmd_search(args),
        Command::Range(args) => cmd_range(args),
    };
    match outcome {
        Ok(code) => ExitCode::from(code),
        Err(msg) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
    }
}
