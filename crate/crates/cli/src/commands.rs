use std::cmp::Ordering;
use std::collections::BinaryHeap;
use std::fmt;
use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};

use perronet::graph::{largest_component, write_multilayer, write_multiplex};
use perronet::prelude::*;
use perronet::recommend::{ExperimentReport, ExperimentRow};
use perronet::sensitivity::{spectral_impact, ImpactLevel};

use crate::output::{Cell, Report};
use crate::{
    ActionArg, BaselineArg, Cli, Command, CommunicabilityArgs, ConvertArgs, ExperimentArgs, InputFormat, PairingArg,
    RankArgs, RankMode, RunConfig, Scope, SensitivityArgs,
};

#[derive(Debug)]
pub enum CliError {
    Input(String),
    Numerical(String),
    Infeasible(String),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Input(_) => 1,
            CliError::Numerical(_) => 2,
            CliError::Infeasible(_) => 3,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Input(m) | CliError::Numerical(m) | CliError::Infeasible(m) => f.write_str(m),
        }
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        let m = e.to_string();
        match e {
            Error::NoConvergence { .. } | Error::NotPositive { .. } | Error::ComplexDominant { .. } | Error::ZeroProjection => {
                CliError::Numerical(m)
            }
            Error::NoFeasibleRemoval
            | Error::NoEdges
            | Error::DenseCapExceeded { .. }
            | Error::NotMultiplex(_)
            | Error::RequiresUndirected => CliError::Infeasible(m),
            _ => CliError::Input(m),
        }
    }
}

impl From<io::Error> for CliError {
    fn from(e: io::Error) -> Self {
        CliError::Input(e.to_string())
    }
}

type CliResult<T> = std::result::Result<T, CliError>;

pub fn run(cli: &Cli) -> CliResult<()> {
    let cfg = &cli.run;
    validate(cfg)?;
    let net = load(cfg, cli.command.input())?;
    let report = match &cli.command {
        Command::Spectrum(_) => spectrum(cfg, &net)?,
        Command::Communicability(args) => communicability(cfg, &net, args)?,
        Command::Sensitivity(args) => sensitivity(cfg, &net, args)?,
        Command::Rank(mode) => rank(cfg, &net, mode)?,
        Command::Experiment(args) => experiment(cfg, &net, args)?,
        Command::Convert(args) => return convert(&net, args),
    };
    let stdout = io::stdout();
    let mut out = stdout.lock();
    report.write(cfg.format, &mut out)?;
    out.flush()?;
    Ok(())
}

fn validate(cfg: &RunConfig) -> CliResult<()> {
    if !(cfg.gamma >= 0.0 && cfg.gamma.is_finite()) {
        return Err(CliError::Input(format!("--gamma must be nonnegative, got {}", cfg.gamma)));
    }
    if !(cfg.tol > 0.0) {
        return Err(CliError::Input(format!("--tol must be positive, got {}", cfg.tol)));
    }
    Ok(())
}

fn check_top_k(top_k: usize) -> CliResult<()> {
    if top_k == 0 {
        return Err(CliError::Input("--top-k must be at least 1".into()));
    }
    Ok(())
}

fn check_epsilon(eps: f64) -> CliResult<()> {
    if !(eps > 0.0 && eps.is_finite()) {
        return Err(CliError::Input(format!("--epsilon must be positive, got {eps}")));
    }
    Ok(())
}

fn resolve(path: &Path) -> PathBuf {
    if path.exists() || path.is_absolute() {
        return path.to_path_buf();
    }
    match std::env::var_os("PERRON_DATA_DIR") {
        Some(dir) if Path::new(&dir).join(path).exists() => Path::new(&dir).join(path),
        _ => path.to_path_buf(),
    }
}

fn load(cfg: &RunConfig, input: &Path) -> CliResult<Network> {
    let path = resolve(input);
    let net: Network = match cfg.input_format {
        InputFormat::Multiplex => load_multiplex(&path, cfg.gamma, cfg.directed)?.into(),
        InputFormat::Multilayer => load_multilayer(&path, cfg.directed)?.into(),
    };
    if !is_strongly_connected(&net) {
        eprintln!(
            "warning: the network is not strongly connected; the Perron root may not be simple \
             and the Perron vectors may have zero entries"
        );
    }
    Ok(net)
}

fn solver(cfg: &RunConfig) -> PerronOptions {
    PerronOptions::with_tol(cfg.tol)
}

fn solve(cfg: &RunConfig, net: &Network) -> CliResult<PerronTriple> {
    Ok(perron(&supra_operator(net), &solver(cfg))?)
}

fn edit_scope(s: Scope) -> EditScope {
    match s {
        Scope::Entry => EditScope::Entry,
        Scope::Pair => EditScope::Pair,
        Scope::Reciprocal => EditScope::Reciprocal,
    }
}

fn pairing(p: PairingArg, scope: Scope, net: &Network) -> Pairing {
    match p {
        PairingArg::Ordered => Pairing::Ordered,
        PairingArg::Unordered => Pairing::Unordered,
        PairingArg::Auto if !net.is_directed() || scope != Scope::Entry => Pairing::Unordered,
        PairingArg::Auto => Pairing::Ordered,
    }
}

fn edge_cells(e: &EdgeKey) -> Vec<Cell> {
    vec![e.i.into(), e.j.into(), e.k.into(), e.l.into()]
}

fn spectrum(cfg: &RunConfig, net: &Network) -> CliResult<Report> {
    let t = solve(cfg, net)?;
    Ok(Report::record()
        .scalar("nodes", net.nodes())
        .scalar("layers", net.layers())
        .scalar("dim", net.dim())
        .scalar("directed", net.is_directed())
        .scalar("strongly_connected", is_strongly_connected(net))
        .scalar("rho", t.rho)
        .scalar("kappa", t.kappa)
        .scalar("kappa_D", structured_condition_number(&t, Cone::Block, net))
        .scalar("kappa_S", structured_condition_number(&t, Cone::Pattern, net))
        .scalar("iterations", t.iterations)
        .scalar("right_residual", t.right_residual)
        .scalar("left_residual", t.left_residual))
}

fn communicability(cfg: &RunConfig, net: &Network, args: &CommunicabilityArgs) -> CliResult<Report> {
    check_top_k(args.top_k)?;
    let t = solve(cfg, net)?;
    let r = perron_communicability(&t, net.nodes(), net.layers())?;
    let vers = match &args.weights {
        Some(w) => versatility(&eigentensors(&t, net.nodes(), net.layers())?, w)?,
        None => r.versatility.clone(),
    };
    let mut order: Vec<usize> = (0..vers.len()).collect();
    order.sort_by(|&a, &b| vers[b].total_cmp(&vers[a]).then(a.cmp(&b)));
    order.truncate(args.top_k);

    let mut report = Report::record()
        .scalar("rho", r.rho)
        .scalar("c_pn", r.c_pn)
        .scalar("c_pn_marginal", r.c_pn_marginal)
        .scalar("lower", r.lower)
        .scalar("upper_basic", r.upper_basic)
        .scalar("upper_cos", r.upper_cos)
        .scalar("bounds_hold", r.bounds_hold(1e-12))
        .scalar("phi", r.phi)
        .vector("c_y", r.c_y.iter().copied())
        .vector("c_x", r.c_x.iter().copied())
        .vector("versatility_node", order.iter().map(|&i| i + 1))
        .vector("versatility", order.iter().map(|&i| vers[i]));
    if args.total {
        let total = total_communicability0(net, cfg.dense_cap)?;
        report = report
            .scalar("total_communicability", total)
            .scalar("total_over_kappa_c_pn", total / (t.kappa * r.c_pn));
    }
    if args.hub_authority {
        let ha = hub_authority_communicability(net, &solver(cfg))?;
        report = report
            .scalar("hub", ha.hub)
            .scalar("authority", ha.authority)
            .scalar("rho_hub", ha.rho_hub)
            .scalar("rho_authority", ha.rho_authority);
    }
    Ok(report)
}

#[derive(PartialEq)]
struct Product {
    key: f64,
    p: usize,
    q: usize,
}

impl Eq for Product {}

impl Ord for Product {
    fn cmp(&self, other: &Self) -> Ordering {
        self.key.total_cmp(&other.key).then_with(|| (other.p, other.q).cmp(&(self.p, self.q)))
    }
}

impl PartialOrd for Product {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// The `k` largest (or smallest) entries of `κ y xᵀ` over the whole supra
/// matrix, found by walking the two sorted vectors; ties at the cut are
/// all kept before the final tie-broken truncation.
fn extreme_entries(t: &PerronTriple, n: usize, k: usize, largest: bool) -> Vec<(EdgeKey, f64)> {
    let sorted = |v: &[f64]| {
        let mut idx: Vec<usize> = (0..v.len()).collect();
        idx.sort_by(|&a, &b| if largest { v[b].total_cmp(&v[a]) } else { v[a].total_cmp(&v[b]) });
        idx
    };
    let (rows, cols) = (sorted(&t.y), sorted(&t.x));
    let sign = if largest { 1.0 } else { -1.0 };
    let item = |p: usize, q: usize| Product {
        key: sign * t.y[rows[p]] * t.x[cols[q]],
        p,
        q,
    };
    let mut heap = BinaryHeap::from([item(0, 0)]);
    let mut out: Vec<(EdgeKey, f64)> = Vec::new();
    while let Some(top) = heap.pop() {
        // Rounding can reorder near-ties, so keep anything within a few ulps of the cut.
        if out.len() >= k {
            let (cut, current) = (out[k - 1].1 / t.kappa, sign * top.key);
            let slack = 1e-12 * cut.abs();
            if (largest && current < cut - slack) || (!largest && current > cut + slack) {
                break;
            }
        }
        let (a, b) = (rows[top.p], cols[top.q]);
        out.push((EdgeKey::from_flat(a, b, n), t.kappa * t.y[a] * t.x[b]));
        out.sort_by(|x, y| if largest { y.1.total_cmp(&x.1) } else { x.1.total_cmp(&y.1) });
        if top.q + 1 < cols.len() {
            heap.push(item(top.p, top.q + 1));
        }
        if top.q == 0 && top.p + 1 < rows.len() {
            heap.push(item(top.p + 1, 0));
        }
    }
    out.sort_by(|a, b| {
        let by_value = if largest { b.1.total_cmp(&a.1) } else { a.1.total_cmp(&b.1) };
        by_value.then_with(|| a.0.tie_key().cmp(&b.0.tie_key()))
    });
    out.truncate(k);
    out
}

fn sensitivity(cfg: &RunConfig, net: &Network, args: &SensitivityArgs) -> CliResult<Report> {
    check_top_k(args.top_k)?;
    let t = solve(cfg, net)?;
    let entries = if args.impact {
        let mut v = spectral_impact(net, &t, ImpactLevel::Supra);
        v.sort_by(|a, b| a.1.total_cmp(&b.1).then_with(|| a.0.tie_key().cmp(&b.0.tie_key())));
        v.truncate(args.top_k);
        v
    } else if args.structured {
        let mut v = structured_sensitivity_matrix(&t, net).pattern_values();
        v.sort_by(|a, b| {
            let by_value = if args.smallest { a.1.total_cmp(&b.1) } else { b.1.total_cmp(&a.1) };
            by_value.then_with(|| a.0.tie_key().cmp(&b.0.tie_key()))
        });
        v.truncate(args.top_k);
        v
    } else {
        extreme_entries(&t, net.nodes(), args.top_k, !args.smallest)
    };
    let mut table = Report::table(&["i", "j", "k", "l", if args.impact { "impact" } else { "sensitivity" }]);
    for (e, v) in entries {
        let mut row = edge_cells(&e);
        row.push(v.into());
        table.row(row);
    }
    Ok(table)
}

fn rank(cfg: &RunConfig, net: &Network, mode: &RankMode) -> CliResult<Report> {
    let common: &RankArgs = match mode {
        RankMode::Add { common, .. } | RankMode::Remove { common, .. } => common,
    };
    check_top_k(common.top_k)?;
    check_epsilon(common.epsilon)?;
    let t = solve(cfg, net)?;
    let scope = edit_scope(common.scope);
    let pairing = pairing(common.pairing, common.scope, net);
    let (ranked, action) = match mode {
        RankMode::Add {
            absent_only,
            allow_self_loops,
            ..
        } => {
            let opts = InsertionOptions {
                top_k: common.top_k,
                candidates: if common.structured {
                    CandidateSet::Pattern
                } else if *absent_only {
                    CandidateSet::AbsentOnly
                } else {
                    CandidateSet::AllPairs
                },
                pairing,
                allow_self_loops: *allow_self_loops,
            };
            (rank_insertions(&t, net, &opts)?, EdgeAction::Increase(common.epsilon))
        }
        RankMode::Remove {
            decrease,
            allow_disconnect,
            ..
        } => {
            let opts = RemovalOptions {
                top_k: common.top_k,
                require_connected: !allow_disconnect,
                intra_layer_only: common.structured,
                pairing,
                scope,
            };
            let action = if *decrease {
                EdgeAction::Decrease(common.epsilon)
            } else {
                EdgeAction::Remove
            };
            (rank_removals(&t, net, &opts)?, action)
        }
    };

    let mut columns = vec!["i", "j", "k", "l", "score"];
    if common.recompute {
        columns.extend(["rho_new", "connected_after", "flag"]);
    }
    let mut table = Report::table(&columns);
    for r in &ranked {
        let mut row = edge_cells(&r.edge);
        row.push(r.score.into());
        if common.recompute {
            match perturb(net, &r.edge, action, scope) {
                Ok(modified) => {
                    let rho = perron(&supra_operator(&modified), &solver(cfg))?.rho;
                    row.extend([rho.into(), is_strongly_connected(&modified).into(), Cell::Empty]);
                }
                Err(e @ Error::InvalidEdge { .. }) => row.extend([Cell::Empty, Cell::Empty, e.to_string().into()]),
                Err(e) => return Err(e.into()),
            }
        }
        table.row(row);
    }
    Ok(table)
}

/// Edges as `i j k l` or `i j l` lines; `#` starts a comment.
fn parse_edges(text: &str) -> CliResult<Vec<EdgeKey>> {
    let mut edges = Vec::new();
    for (no, line) in text.lines().enumerate() {
        let line = line.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let f: Vec<usize> = line
            .split_whitespace()
            .map(str::parse)
            .collect::<std::result::Result<_, _>>()
            .map_err(|e| CliError::Input(format!("edges line {}: {e}", no + 1)))?;
        edges.push(match f[..] {
            [i, j, k, l] => EdgeKey::new(i, j, k, l),
            [i, j, l] => EdgeKey::intra(i, j, l),
            _ => {
                return Err(CliError::Input(format!(
                    "edges line {}: expected `i j k l` or `i j l`",
                    no + 1
                )))
            }
        });
    }
    Ok(edges)
}

fn experiment(cfg: &RunConfig, net: &Network, args: &ExperimentArgs) -> CliResult<Report> {
    check_top_k(args.top_k)?;
    check_epsilon(args.epsilon)?;
    let action = match args.action {
        ActionArg::Increase => EdgeAction::Increase(args.epsilon),
        ActionArg::Decrease => EdgeAction::Decrease(args.epsilon),
        ActionArg::Remove => EdgeAction::Remove,
    };
    let scope = edit_scope(args.scope);
    let edges = match &args.edges {
        Some(path) => parse_edges(&fs::read_to_string(resolve(path)).map_err(|e| {
            CliError::Input(format!("failed to read {}: {e}", path.display()))
        })?)?,
        None => {
            let t = solve(cfg, net)?;
            let pairing = pairing(PairingArg::Auto, args.scope, net);
            let ranked = if args.action == ActionArg::Increase {
                let mut opts = InsertionOptions::new(args.top_k, net);
                opts.pairing = pairing;
                if args.structured {
                    opts.candidates = CandidateSet::Pattern;
                }
                rank_insertions(&t, net, &opts)?
            } else {
                let opts = RemovalOptions {
                    top_k: args.top_k,
                    require_connected: args.action == ActionArg::Remove,
                    intra_layer_only: args.structured,
                    pairing,
                    scope,
                };
                rank_removals(&t, net, &opts)?
            };
            ranked.into_iter().map(|r| r.edge).collect()
        }
    };
    let pool = match args.baseline {
        Some(BaselineArg::None) => None,
        Some(BaselineArg::All) => Some(BaselinePool::AllPairs),
        Some(BaselineArg::Existing) => Some(BaselinePool::Existing),
        None if args.action == ActionArg::Increase => Some(BaselinePool::AllPairs),
        None => Some(BaselinePool::Existing),
    };
    let cfg = ExperimentConfig {
        action,
        scope,
        baseline: pool.map(|p| (args.seed, p)),
        solver: solver(cfg),
    };
    let report = perturbation_experiment(net, &edges, &cfg)?;
    Ok(experiment_table(&report))
}

fn experiment_table(report: &ExperimentReport) -> Report {
    let mut table = Report::table(&[
        "i",
        "j",
        "k",
        "l",
        "score",
        "rho_before",
        "rho_new",
        "predicted_shift",
        "baseline_i",
        "baseline_j",
        "baseline_k",
        "baseline_l",
        "baseline_rho_new",
        "flag",
    ]);
    for ExperimentRow {
        edge,
        score,
        rho_new,
        predicted_shift,
        baseline_edge,
        baseline_rho_new,
        flag,
    } in &report.rows
    {
        let mut row = edge_cells(edge);
        row.extend([(*score).into(), report.rho_before.into(), (*rho_new).into(), (*predicted_shift).into()]);
        match baseline_edge {
            Some(b) => row.extend(edge_cells(b)),
            None => row.extend(std::iter::repeat(Cell::Empty).take(4)),
        }
        row.push((*baseline_rho_new).into());
        row.push(flag.clone().into());
        table.row(row);
    }
    table
}

fn convert(net: &Network, args: &ConvertArgs) -> CliResult<()> {
    let net = if args.largest_component {
        let keep = largest_component(net);
        if keep.len() < net.nodes() {
            eprintln!("kept {} of {} nodes, relabelled in ascending order", keep.len(), net.nodes());
        }
        net.restrict_nodes(&keep)?
    } else {
        net.clone()
    };
    let text = match args.to {
        InputFormat::Multilayer => write_multilayer(&net),
        InputFormat::Multiplex => match net.as_multiplex() {
            Some(m) => write_multiplex(m),
            None => {
                let m = MultiplexNetwork::from_multilayer(&net.to_multilayer())?;
                eprintln!("coupling gamma = {}; pass it with --gamma when reading the output", m.gamma());
                write_multiplex(&m)
            }
        },
    };
    match &args.output {
        Some(path) => fs::write(path, text).map_err(|e| CliError::Input(format!("failed to write {}: {e}", path.display()))),
        None => {
            let mut out = io::stdout().lock();
            out.write_all(text.as_bytes())?;
            Ok(out.flush()?)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn edges_file_formats() {
        let edges = parse_edges("# header\n2 4 3 2\n1 3 1  # intra\n\n").unwrap();
        assert_eq!(edges, vec![EdgeKey::new(2, 4, 3, 2), EdgeKey::intra(1, 3, 1)]);
        assert!(parse_edges("1 2\n").is_err());
        assert!(parse_edges("1 x 2\n").is_err());
    }

    #[test]
    fn extreme_entries_match_exhaustive_scan() {
        let net: Network = parse_multilayer(include_str!("../../core/data/example1.txt"), true)
            .unwrap()
            .into();
        let t = perron(&supra_operator(&net), &PerronOptions::default()).unwrap();
        let n = net.nodes();
        let d = net.dim();
        let mut all: Vec<(EdgeKey, f64)> = (0..d)
            .flat_map(|a| (0..d).map(move |b| (a, b)))
            .map(|(a, b)| (EdgeKey::from_flat(a, b, n), t.kappa * t.y[a] * t.x[b]))
            .collect();
        all.sort_by(|a, b| b.1.total_cmp(&a.1).then_with(|| a.0.tie_key().cmp(&b.0.tie_key())));
        assert_eq!(extreme_entries(&t, n, 7, true), all[..7].to_vec());
        all.sort_by(|a, b| a.1.total_cmp(&b.1).then_with(|| a.0.tie_key().cmp(&b.0.tie_key())));
        assert_eq!(extreme_entries(&t, n, 7, false), all[..7].to_vec());
    }

    #[test]
    fn error_classes_map_to_exit_codes() {
        assert_eq!(CliError::from(Error::NoFeasibleRemoval).exit_code(), 3);
        assert_eq!(CliError::from(Error::ZeroProjection).exit_code(), 2);
        assert_eq!(CliError::from(Error::Parse { line: 1, message: "x".into() }).exit_code(), 1);
    }
}
