use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use gkdecomp::codec::{self, Corner, EncodedBundle, Scheme};
use gkdecomp::dist::{entropy_of, load_distribution, JointDistribution};
use gkdecomp::network::{self, CapacitatedNetwork};
use gkdecomp::objectives::{
    decomposition_report, default_alpha_grid, rate_region_binary, rate_region_general, DecompositionReport,
};
use gkdecomp::search::{
    brute_force, recursive_spectral, spectral_threshold_search, tradeoff_sweep, Method, ObjectiveKind, SearchError,
    SweepGrid,
};
use gkdecomp::spectral::{spectral_summary, verify_laplacian_identity};
use gkdecomp::{gk_common_information, LabelingPair};

mod output;

use output::{fmt6, write_atomic};

/// Tolerance for the Laplacian identity line of `analyze`.
const LAPLACIAN_TOLERANCE: f64 = 1e-8;

#[derive(Parser)]
#[command(name = "gkdecomp", version, about = "Gacs-Korner decompositions, helper rate regions and zero-error coding")]
struct Cli {
    /// Directory for written artifacts.
    #[arg(long, global = true, env = "GKDECOMP_OUT", default_value = ".")]
    out_dir: PathBuf,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Entropies, components and spectrum of a distribution.
    Analyze { dist: PathBuf },
    /// Search for a labeling pair and write it.
    Decompose {
        dist: PathBuf,
        #[arg(long, value_enum, default_value = "spectral")]
        method: MethodArg,
        /// Lagrangian weight on the helper rate.
        #[arg(long, conflicts_with = "epsilon")]
        lambda: Option<f64>,
        /// Helper-rate budget.
        #[arg(long)]
        epsilon: Option<f64>,
        /// Number of labels for the recursive method.
        #[arg(long, default_value_t = 2)]
        k: usize,
        #[arg(long, default_value = "labeling.json")]
        output: String,
    },
    /// Rate-region rows (alpha, R_X, R_Y, R_H) as CSV.
    Rates {
        dist: PathBuf,
        labeling: PathBuf,
        /// Comma-separated alphas, or start:stop:count.
        #[arg(long)]
        alpha_grid: Option<String>,
        #[arg(long, default_value = "rates.csv")]
        output: String,
    },
    /// Entropy / helper-rate frontier as CSV.
    Tradeoff {
        dist: PathBuf,
        /// `epsilon:` or `lambda:` followed by comma-separated values or start:stop:count.
        #[arg(long)]
        grid: String,
        #[arg(long, value_enum, default_value = "both")]
        method: SweepMethodArg,
        #[arg(long, default_value = "tradeoff.csv")]
        output: String,
    },
    /// Sample, encode, decode and compare one block.
    Simulate {
        dist: PathBuf,
        /// Not needed for the gk scheme.
        labeling: Option<PathBuf>,
        #[arg(long, value_enum)]
        scheme: SchemeArg,
        #[arg(long, default_value_t = 100_000)]
        n: usize,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        #[arg(long, value_enum, default_value = "x")]
        corner: CornerArg,
        #[arg(long)]
        output: Option<String>,
    },
    /// Min-cut feasibility of a labeling on a network.
    Network {
        net: PathBuf,
        dist: PathBuf,
        labeling: PathBuf,
        /// Use the cut-set requirements toward the helper.
        #[arg(long)]
        limited: bool,
        /// Check only this terminal (default: every node with role t).
        #[arg(long)]
        terminal: Option<String>,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum MethodArg {
    Spectral,
    Brute,
    Recursive,
}

#[derive(Clone, Copy, ValueEnum)]
enum SweepMethodArg {
    Spectral,
    Brute,
    Both,
}

#[derive(Clone, Copy, ValueEnum)]
enum SchemeArg {
    Gk,
    BinaryHelper,
    GeneralHelper,
    LimitedHelper,
}

impl From<SchemeArg> for Scheme {
    fn from(s: SchemeArg) -> Self {
        match s {
            SchemeArg::Gk => Scheme::Gk,
            SchemeArg::BinaryHelper => Scheme::BinaryHelper,
            SchemeArg::GeneralHelper => Scheme::GeneralHelper,
            SchemeArg::LimitedHelper => Scheme::LimitedHelper,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum CornerArg {
    X,
    Y,
}

/// Exit status 2 for bad input, 1 for an analysis that ran and failed.
enum Failure {
    Input(anyhow::Error),
    Analysis(anyhow::Error),
}

fn input<E: Into<anyhow::Error>>(e: E) -> Failure {
    Failure::Input(e.into())
}

fn analysis<E: Into<anyhow::Error>>(e: E) -> Failure {
    Failure::Analysis(e.into())
}

type CmdResult = Result<(), Failure>;

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(2) } else { ExitCode::SUCCESS };
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Input(e)) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
        Err(Failure::Analysis(e)) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
    }
}

fn run(cli: Cli) -> CmdResult {
    let out = cli.out_dir;
    match cli.command {
        Command::Analyze { dist } => analyze(&dist),
        Command::Decompose {
            dist,
            method,
            lambda,
            epsilon,
            k,
            output,
        } => decompose(&out, &dist, method, lambda, epsilon, k, &output),
        Command::Rates {
            dist,
            labeling,
            alpha_grid,
            output,
        } => rates(&out, &dist, &labeling, alpha_grid.as_deref(), &output),
        Command::Tradeoff {
            dist,
            grid,
            method,
            output,
        } => tradeoff(&out, &dist, &grid, method, &output),
        Command::Simulate {
            dist,
            labeling,
            scheme,
            n,
            seed,
            corner,
            output,
        } => simulate(&out, &dist, labeling.as_deref(), scheme.into(), n, seed, corner, output),
        Command::Network {
            net,
            dist,
            labeling,
            limited,
            terminal,
        } => network_cmd(&net, &dist, &labeling, limited, terminal.as_deref()),
    }
}

fn load_dist(path: &Path) -> Result<JointDistribution, Failure> {
    load_distribution(path).map_err(|e| input(anyhow::anyhow!("{}: {e}", path.display())))
}

fn load_labeling(path: &Path, joint: &JointDistribution) -> Result<LabelingPair, Failure> {
    let text = std::fs::read_to_string(path).map_err(|e| input(anyhow::anyhow!("{}: {e}", path.display())))?;
    let labels: LabelingPair =
        serde_json::from_str(&text).map_err(|e| input(anyhow::anyhow!("{}: {e}", path.display())))?;
    labels.check_dims(joint).map_err(input)?;
    Ok(labels)
}

fn analyze(path: &Path) -> CmdResult {
    let joint = load_dist(path)?;
    let (h_k, comps) = gk_common_information(&joint);
    let spectrum = spectral_summary(&joint).map_err(analysis)?;
    let lap = verify_laplacian_identity(&joint, LAPLACIAN_TOLERANCE).map_err(analysis)?;
    println!("input: {}", path.display());
    println!("size: {} x {}", joint.n_x(), joint.n_y());
    if !joint.stripped_x().is_empty() || !joint.stripped_y().is_empty() {
        println!("stripped_x: {:?}", joint.stripped_x());
        println!("stripped_y: {:?}", joint.stripped_y());
    }
    println!("H(X): {}", fmt6(entropy_of(&joint.row_sums())));
    println!("H(Y): {}", fmt6(entropy_of(&joint.col_sums())));
    println!("H(K): {}", fmt6(h_k));
    println!("components: {}", comps.count());
    println!("component_weights: {}", join6(comps.weights.entries()));
    println!("singular_values: {}", join6(&spectrum.singular_values));
    println!("maximal_correlation: {}", fmt6(spectrum.maximal_correlation));
    println!("multiplicity_of_one: {}", spectrum.multiplicity_of_one);
    println!("laplacian_nu: {}", fmt6(lap.nu));
    println!("laplacian_residual: {}", fmt6(lap.residual));
    println!("laplacian_identity: {}", if lap.pass { "pass" } else { "fail" });
    if spectrum.degenerate_second {
        println!("warning: sigma_2 is degenerate");
    }
    Ok(())
}

fn join6(values: &[f64]) -> String {
    values.iter().map(|&v| fmt6(v)).collect::<Vec<_>>().join(" ")
}

fn report_json(r: &DecompositionReport) -> Value {
    json!({
        "h_phi_x": r.h_phi_x,
        "h_phi_y": r.h_phi_y,
        "h_x_given_phi_x": r.h_x_given_phi_x,
        "h_y_given_phi_y": r.h_y_given_phi_y,
        "p_err": r.p_err,
        "helper_rate_binary": r.helper_rate_binary,
        "helper_rate_general": r.helper_rate_general,
        "lagrangian": r.lagrangian_at.iter().map(|(l, v)| json!({"lambda": l, "value": v})).collect::<Vec<_>>(),
        "conductance_ratio": r.conductance_ratio.map(|c| c.to_string()),
        "s_x": r.cuts.s_x,
        "s_y": r.cuts.s_y,
        "h_x_cut": r.cuts.h_x_cut,
        "h_y_cut": r.cuts.h_y_cut,
    })
}

#[allow(clippy::too_many_arguments)]
fn decompose(
    out: &Path,
    path: &Path,
    method: MethodArg,
    lambda: Option<f64>,
    epsilon: Option<f64>,
    k: usize,
    output: &str,
) -> CmdResult {
    let joint = load_dist(path)?;
    let kind = match (lambda, epsilon) {
        (_, Some(e)) => ObjectiveKind::Constrained(e),
        (l, None) => ObjectiveKind::Lagrangian(l.unwrap_or(1.0)),
    };
    let search_failure = |e: SearchError| match e {
        SearchError::Infeasible(_) | SearchError::Spectral(_) | SearchError::NonMonotone { .. } => analysis(e),
        _ => input(e),
    };
    let (labels, value, warnings, method_name) = match method {
        MethodArg::Brute => {
            let r = brute_force(&joint, kind).map_err(search_failure)?;
            (r.labeling, Some(r.objective_value), r.warnings, "brute")
        }
        MethodArg::Spectral => {
            let r = spectral_threshold_search(&joint, kind).map_err(search_failure)?;
            (r.labeling, Some(r.objective_value), r.warnings, "spectral")
        }
        MethodArg::Recursive => {
            let ObjectiveKind::Lagrangian(l) = kind else {
                return Err(input(anyhow::anyhow!("the recursive method takes --lambda, not --epsilon")));
            };
            let r = recursive_spectral(&joint, k, l).map_err(search_failure)?;
            (r.labeling, r.objective_trace.last().copied(), r.warnings, "recursive")
        }
    };
    let lambdas: Vec<f64> = lambda.into_iter().collect();
    let report = decomposition_report(&joint, &labels, &lambdas);
    let params = json!({
        "command": "decompose",
        "input": path.display().to_string(),
        "method": method_name,
        "lambda": lambda,
        "epsilon": epsilon,
        "k": matches!(method, MethodArg::Recursive).then_some(k),
    });
    let mut file = serde_json::to_value(&labels).expect("plain data");
    file["params"] = params.clone();
    file["objective"] = json!(kind.to_string());
    file["objective_value"] = json!(value);
    file["report"] = report_json(&report);
    write_atomic(out, output, &(serde_json::to_string_pretty(&file).expect("plain data") + "\n")).map_err(input)?;

    println!("method: {method_name}");
    println!("objective: {kind}");
    if let Some(v) = value {
        println!("objective_value: {}", fmt6(v));
    }
    println!("phi_x: {:?}", labels.phi_x());
    println!("phi_y: {:?}", labels.phi_y());
    println!("num_labels: {}", labels.num_labels());
    println!("H(phi_X): {}", fmt6(report.h_phi_x));
    println!("H(phi_X|phi_Y): {}", fmt6(report.helper_rate_general));
    println!("P_err: {}", fmt6(report.p_err));
    if let Some(h) = report.helper_rate_binary {
        println!("h(P_err): {}", fmt6(h));
    }
    for w in warnings {
        println!("warning: {w}");
    }
    println!("wrote: {output}");
    Ok(())
}

/// `a,b,c` or `start:stop:count` (inclusive, evenly spaced).
fn parse_grid(text: &str) -> anyhow::Result<Vec<f64>> {
    let parts: Vec<&str> = text.split(':').collect();
    let values = if let [start, stop, count] = parts.as_slice() {
        let (start, stop): (f64, f64) = (start.trim().parse()?, stop.trim().parse()?);
        let count: usize = count.trim().parse()?;
        anyhow::ensure!(count >= 1, "grid count must be positive");
        if count == 1 {
            vec![start]
        } else {
            (0..count)
                .map(|k| start + (stop - start) * k as f64 / (count - 1) as f64)
                .collect()
        }
    } else {
        text.split(',').map(|v| v.trim().parse::<f64>()).collect::<Result<_, _>>()?
    };
    anyhow::ensure!(values.iter().all(|v| v.is_finite()), "grid values must be finite");
    anyhow::ensure!(!values.is_empty(), "empty grid");
    Ok(values)
}

fn provenance(fields: &[(&str, String)]) -> String {
    fields.iter().map(|(k, v)| format!("# {k}: {v}\n")).collect()
}

fn rates(out: &Path, path: &Path, labeling: &Path, grid: Option<&str>, output: &str) -> CmdResult {
    let joint = load_dist(path)?;
    let labels = load_labeling(labeling, &joint)?;
    let grid = match grid {
        Some(g) => parse_grid(g).map_err(input)?,
        None => default_alpha_grid(),
    };
    if grid.iter().any(|a| !(0.0..=1.0).contains(a)) {
        return Err(input(anyhow::anyhow!("alpha values must lie in [0, 1]")));
    }
    let region = if labels.is_binary() {
        rate_region_binary(&joint, &labels, &grid).map_err(input)?
    } else {
        rate_region_general(&joint, &labels)
    };
    let mut csv = provenance(&[
        ("command", "rates".into()),
        ("input", path.display().to_string()),
        ("labeling", labeling.display().to_string()),
        ("alpha_grid", grid.iter().map(|a| fmt6(*a)).collect::<Vec<_>>().join(",")),
    ]);
    csv.push_str("alpha,r_x,r_y,r_h\n");
    let rows = if region.dominant_face.is_empty() { &region.corner_points } else { &region.dominant_face };
    for p in rows {
        csv.push_str(&format!(
            "{},{},{},{}\n",
            p.alpha.map(fmt6).unwrap_or_default(),
            fmt6(p.r_x),
            fmt6(p.r_y),
            fmt6(p.r_h)
        ));
    }
    write_atomic(out, output, &csv).map_err(input)?;
    print!("{csv}");
    match region.dominant_face_slope() {
        Some(s) => println!("# dominant_face_slope: {}", fmt6(s)),
        None => println!("# dominant_face_slope: undefined"),
    }
    Ok(())
}

fn tradeoff(out: &Path, path: &Path, grid: &str, method: SweepMethodArg, output: &str) -> CmdResult {
    let joint = load_dist(path)?;
    let (kind, values) = grid
        .split_once(':')
        .ok_or_else(|| input(anyhow::anyhow!("grid must start with epsilon: or lambda:")))?;
    let values = parse_grid(values).map_err(input)?;
    let sweep = match kind {
        "epsilon" => SweepGrid::Epsilon(values.clone()),
        "lambda" => SweepGrid::Lambda(values.clone()),
        other => return Err(input(anyhow::anyhow!("unknown grid kind {other:?}"))),
    };
    let methods: &[Method] = match method {
        SweepMethodArg::Brute => &[Method::BruteForce],
        SweepMethodArg::Spectral => &[Method::Spectral],
        SweepMethodArg::Both => &[Method::BruteForce, Method::Spectral],
    };
    let mut csv = provenance(&[
        ("command", "tradeoff".into()),
        ("input", path.display().to_string()),
        ("grid", grid.to_owned()),
    ]);
    csv.push_str(&format!("{kind},h_phi_x,helper_rate,p_err,objective,method\n"));
    for &m in methods {
        let frontier = tradeoff_sweep(&joint, &sweep, m).map_err(|e| match e {
            SearchError::SizeLimit { .. } | SearchError::BadParameter(_) => input(e),
            other => analysis(other),
        })?;
        for p in frontier {
            csv.push_str(&format!(
                "{},{},{},{},{},{}\n",
                fmt6(p.param),
                fmt6(p.h_phi_x),
                fmt6(p.helper_rate),
                fmt6(p.p_err),
                fmt6(p.objective_value),
                p.method
            ));
        }
    }
    write_atomic(out, output, &csv).map_err(input)?;
    print!("{csv}");
    Ok(())
}

#[allow(clippy::too_many_arguments)]
fn simulate(
    out: &Path,
    path: &Path,
    labeling: Option<&Path>,
    scheme: Scheme,
    n: usize,
    seed: u64,
    corner: CornerArg,
    output: Option<String>,
) -> CmdResult {
    let joint = load_dist(path)?;
    if n == 0 {
        return Err(input(anyhow::anyhow!("--n must be positive")));
    }
    let labels = match (scheme, labeling) {
        (Scheme::Gk, _) => None,
        (_, Some(p)) => Some(load_labeling(p, &joint)?),
        (_, None) => return Err(input(anyhow::anyhow!("the {} scheme needs a labeling file", scheme.name()))),
    };
    if scheme == Scheme::BinaryHelper && labels.as_ref().is_some_and(|l| !l.is_binary()) {
        return Err(input(anyhow::anyhow!("the binary-helper scheme needs a binary labeling")));
    }
    let corner = match corner {
        CornerArg::X => Corner::XSide,
        CornerArg::Y => Corner::YSide,
    };
    let block = codec::sample(&joint, n, seed);
    let run = codec::run_scheme(&joint, labels.as_ref(), scheme, corner, &block).map_err(analysis)?;
    let name = output.unwrap_or_else(|| format!("{}.gksb", scheme.name()));
    let bytes = run.bundle.to_bytes();
    output::write_atomic_bytes(out, &name, &bytes).map_err(input)?;
    // Decode the written file again rather than the in-memory copy.
    let reread = std::fs::read(out.join(&name)).map_err(input)?;
    let bundle = EncodedBundle::from_bytes(&reread).map_err(analysis)?;
    let decoded = codec::decode_bundle(&joint, labels.as_ref(), &bundle).map_err(analysis)?;
    if let Some(i) = codec::first_difference(&block, &decoded) {
        return Err(analysis(anyhow::anyhow!("decoded block differs at position {i}")));
    }

    println!("scheme: {}", scheme.name());
    if scheme == Scheme::BinaryHelper {
        println!("corner: {}", if corner == Corner::XSide { "x" } else { "y" });
    }
    println!("n: {n}");
    println!("seed: {seed}");
    println!("decode: exact");
    println!("{:<14} {:>10} {:>10} {:>10}", "stream", "bits", "rate", "target");
    for s in &run.report.streams {
        let tag = if s.helper_input { " (to helper)" } else { "" };
        println!("{:<14} {:>10} {:>10} {:>10}{tag}", s.name, s.bits, fmt6(s.rate), fmt6(s.target));
    }
    println!("sum_rate: {}", fmt6(run.report.sum_rate));
    println!("sum_target: {}", fmt6(run.report.sum_target));
    println!("bundle_bytes: {}", bytes.len());
    println!("wrote: {name}");
    Ok(())
}

fn network_cmd(net_path: &Path, path: &Path, labeling: &Path, limited: bool, terminal: Option<&str>) -> CmdResult {
    let net = CapacitatedNetwork::load(net_path).map_err(|e| input(anyhow::anyhow!("{}: {e}", net_path.display())))?;
    let joint = load_dist(path)?;
    let labels = load_labeling(labeling, &joint)?;
    let terminals = match terminal {
        Some(id) => vec![net
            .node_index(id)
            .ok_or_else(|| input(anyhow::anyhow!("unknown terminal {id:?}")))?],
        None => net.terminals(),
    };
    if terminals.is_empty() {
        return Err(input(network::NetworkError::MissingRole(network::Role::Terminal)));
    }
    let mut all_pass = true;
    for t in terminals {
        let report = network::check_at(&net, &joint, &labels, t, limited).map_err(input)?;
        println!("terminal: {}", report.terminal);
        println!("variant: {}", if limited { "limited" } else { "omniscient" });
        println!("{report}");
        all_pass &= report.pass;
    }
    if all_pass {
        Ok(())
    } else {
        Err(analysis(anyhow::anyhow!("feasibility check failed")))
    }
}
