//! Batch front end: samplers -> graphs -> eigenmaps, plus analytic
//! heat-kernel queries and the named verification suites. Every command is
//! deterministic; outputs are CSV/JSON files meant for external plotting.
//!
//! Exit codes: 0 success, 1 validation error, 2 usage error, 3 numeric
//! failure.

use clap::{Args, Parser, Subcommand};
use manifold_heat::eigenmaps::{diffusion_map, eigenmap};
use manifold_heat::embeddings::{
    embedded_curve_length, full_circle_curve, EmbeddingMode, EmbeddingSpec,
};
use manifold_heat::error::Error;
use manifold_heat::graph::{
    build_adjacency, laplacian, rw_spectrum, spectral_decompose, weight_matrix, AdjacencyRule,
    LaplacianKind, SpectralDecomposition, WeightedGraph,
};
use manifold_heat::manifolds::{
    constant_curvature_kernel, point_from_coords, AnalyticManifold, KernelMethod, Point,
};
use manifold_heat::samplers::{make_profile, sample, ProfileKind, ShapeSpec};
use manifold_heat::truncation::{heat_trace, tail_trace_bound, Spectrum};
use manifold_heat::varadhan::varadhan_sweep;
use manifold_heat::{io, suites};
use std::path::PathBuf;
use std::process::ExitCode;

#[derive(Parser)]
#[command(
    name = "mheat",
    version,
    about = "Spectral geometry pipelines with analytic oracles",
    allow_negative_numbers = true
)]
struct Cli {
    /// JSON file mirroring the command line:
    /// {"command": ["sample"], "flags": {"shape": "circle", ...}}
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    #[command(subcommand)]
    command: Option<Command>,
}

#[derive(Subcommand)]
enum Command {
    /// Generate a point cloud and write it as CSV.
    Sample(SampleArgs),
    /// Build a weighted graph from a point cloud and write it as JSON.
    Graph(GraphArgs),
    /// Embed a point cloud through the graph-Laplacian pipeline.
    Embed(EmbedArgs),
    /// Analytic queries against the model manifolds.
    Analytic(AnalyticArgs),
    /// Run a named verification suite.
    Verify(VerifyArgs),
}

#[derive(Args)]
#[command(allow_negative_numbers = true)]
struct SampleArgs {
    /// circle | torus | sphere | barbell | lollipop | photoset
    #[arg(long)]
    shape: String,
    /// Circle/sphere radius; also the lollipop head and barbell default.
    #[arg(long, visible_alias = "R")]
    radius: Option<f64>,
    /// Torus radii.
    #[arg(long)]
    a: Option<f64>,
    #[arg(long)]
    b: Option<f64>,
    /// Barbell sphere radii (default to --radius).
    #[arg(long)]
    r1: Option<f64>,
    #[arg(long)]
    r2: Option<f64>,
    /// Neck radius for barbells and lollipops.
    #[arg(long = "r")]
    neck: Option<f64>,
    /// Cylinder length for barbells and lollipops.
    #[arg(long = "L")]
    length: Option<f64>,
    /// Total point budget.
    #[arg(long)]
    n: Option<usize>,
    /// Grid rows along the profile (overrides the --n heuristic).
    #[arg(long)]
    ns: Option<usize>,
    /// Grid points around each parallel (overrides the --n heuristic).
    #[arg(long)]
    ntheta: Option<usize>,
    #[arg(long)]
    nphi: Option<usize>,
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args)]
#[command(allow_negative_numbers = true)]
struct GraphArgs {
    #[arg(long)]
    points: PathBuf,
    /// knn:K or eps:E
    #[arg(long)]
    rule: String,
    /// Gaussian weight time; omit together with --binary for 0/1 weights.
    #[arg(long)]
    t: Option<f64>,
    /// Keep binary adjacency weights.
    #[arg(long)]
    binary: bool,
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args)]
#[command(allow_negative_numbers = true)]
struct EmbedArgs {
    #[arg(long)]
    points: PathBuf,
    /// Build the graph in place: knn:K or eps:E (needs --t).
    #[arg(long)]
    rule: Option<String>,
    #[arg(long)]
    t: Option<f64>,
    /// Use a previously written graph JSON instead of --rule.
    #[arg(long)]
    graph: Option<PathBuf>,
    /// Inject an explicit weight matrix (graph JSON), bypassing both the
    /// rule and the Gaussian weights.
    #[arg(long = "inject-w")]
    inject_w: Option<PathBuf>,
    /// rw | sym
    #[arg(long, default_value = "rw")]
    laplacian: String,
    /// eigenmap | diffusion
    #[arg(long, default_value = "eigenmap")]
    mode: String,
    #[arg(long)]
    tau: Option<f64>,
    #[arg(long = "N")]
    n: usize,
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args)]
#[command(allow_negative_numbers = true)]
struct AnalyticArgs {
    #[command(subcommand)]
    query: AnalyticQuery,
}

#[derive(Subcommand)]
enum AnalyticQuery {
    /// Evaluate a heat kernel.
    HeatKernel(KernelArgs),
    /// Distance-recovery sweep; optionally write the report CSV.
    Varadhan(VaradhanArgs),
    /// Length of the embedded full circle.
    Length(LengthArgs),
    /// Eigenvalues, heat trace, and truncation budget.
    Spectrum(SpectrumArgs),
}

#[derive(Args)]
#[command(allow_negative_numbers = true)]
struct ManifoldArgs {
    /// circle | torus | sphere | h2 | h3 | cc
    #[arg(long)]
    manifold: String,
    #[arg(long)]
    radius: Option<f64>,
    #[arg(long)]
    a: Option<f64>,
    #[arg(long)]
    b: Option<f64>,
    #[arg(long)]
    kappa: Option<f64>,
    #[arg(long)]
    dim: Option<u32>,
}

#[derive(Args)]
#[command(allow_negative_numbers = true)]
struct KernelArgs {
    #[command(flatten)]
    manifold: ManifoldArgs,
    /// Comma-separated chart coordinates.
    #[arg(long)]
    p: String,
    #[arg(long)]
    q: String,
    #[arg(long)]
    t: f64,
    /// image:M | eigen:N | closed | quad:NODES
    #[arg(long, default_value = "image:10")]
    method: String,
}

#[derive(Args)]
#[command(allow_negative_numbers = true)]
struct VaradhanArgs {
    #[command(flatten)]
    manifold: ManifoldArgs,
    #[arg(long)]
    p: String,
    #[arg(long)]
    q: String,
    /// Comma-separated times.
    #[arg(long)]
    times: String,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
#[command(allow_negative_numbers = true)]
struct LengthArgs {
    #[arg(long, default_value_t = 1.0)]
    radius: f64,
    #[arg(long)]
    t: f64,
    /// Trace-tail tolerance that picks the truncation.
    #[arg(long, default_value_t = 1e-12)]
    tolerance: f64,
}

#[derive(Args)]
#[command(allow_negative_numbers = true)]
struct SpectrumArgs {
    #[command(flatten)]
    manifold: ManifoldArgs,
    #[arg(long)]
    count: usize,
    /// Also print the heat trace at this time.
    #[arg(long = "trace-t")]
    trace_t: Option<f64>,
    /// Also print the minimal truncation for this tail tolerance
    /// (needs --trace-t).
    #[arg(long = "tail-eps")]
    tail_eps: Option<f64>,
}

#[derive(Args)]
#[command(allow_negative_numbers = true)]
struct VerifyArgs {
    #[arg(long)]
    suite: String,
    #[arg(long)]
    out: Option<PathBuf>,
}

fn main() -> ExitCode {
    let mut argv: Vec<String> = std::env::args().collect();
    // --config expands to a synthesized command line before parsing.
    if let Some(pos) = argv.iter().position(|a| a == "--config") {
        if pos + 1 >= argv.len() {
            eprintln!("error: --config needs a file path");
            return ExitCode::from(2);
        }
        if argv.len() != 3 || pos != 1 {
            eprintln!("error: --config replaces the command line and cannot be combined with other arguments");
            return ExitCode::from(2);
        }
        match expand_config(&argv[0], &argv[pos + 1]) {
            Ok(expanded) => argv = expanded,
            Err(e) => {
                eprintln!("error: {e}");
                return ExitCode::from(2);
            }
        }
    }
    let cli = match Cli::try_parse_from(&argv) {
        Ok(cli) => cli,
        // clap exits 0 for --help/--version and 2 for usage errors.
        Err(e) => e.exit(),
    };
    let Some(command) = cli.command else {
        eprintln!("error: a command is required; see --help");
        return ExitCode::from(2);
    };
    match run(command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_class(&e))
        }
    }
}

fn exit_class(e: &Error) -> u8 {
    match e {
        Error::Numeric { .. } | Error::Budget(_) => 3,
        Error::Parse(msg) if msg.starts_with("unknown suite") => 2,
        _ => 1,
    }
}

/// Turn {"command": [...], "flags": {...}} into an argv vector.
fn expand_config(program: &str, path: &str) -> Result<Vec<String>, Error> {
    let text = std::fs::read_to_string(path)?;
    let doc: serde_json::Value =
        serde_json::from_str(&text).map_err(|e| Error::Parse(format!("config JSON: {e}")))?;
    let obj = doc
        .as_object()
        .ok_or_else(|| Error::Parse("config must be an object".into()))?;
    for key in obj.keys() {
        if key != "command" && key != "flags" {
            return Err(Error::Parse(format!("unknown config key `{key}`")));
        }
    }
    let mut argv = vec![program.to_string()];
    let command = obj
        .get("command")
        .and_then(|c| c.as_array())
        .ok_or_else(|| Error::Parse("config needs a `command` array".into()))?;
    for part in command {
        argv.push(
            part.as_str()
                .ok_or_else(|| Error::Parse("command parts must be strings".into()))?
                .to_string(),
        );
    }
    if let Some(flags) = obj.get("flags") {
        let flags = flags
            .as_object()
            .ok_or_else(|| Error::Parse("`flags` must be an object".into()))?;
        for (key, value) in flags {
            match value {
                serde_json::Value::Bool(true) => argv.push(format!("--{key}")),
                serde_json::Value::Bool(false) => {}
                serde_json::Value::String(s) => {
                    argv.push(format!("--{key}"));
                    argv.push(s.clone());
                }
                serde_json::Value::Number(n) => {
                    argv.push(format!("--{key}"));
                    argv.push(n.to_string());
                }
                other => {
                    return Err(Error::Parse(format!(
                        "flag `{key}` has unsupported value {other}"
                    )))
                }
            }
        }
    }
    Ok(argv)
}

fn run(command: Command) -> Result<(), Error> {
    match command {
        Command::Sample(args) => cmd_sample(args),
        Command::Graph(args) => cmd_graph(args),
        Command::Embed(args) => cmd_embed(args),
        Command::Analytic(args) => cmd_analytic(args.query),
        Command::Verify(args) => cmd_verify(args),
    }
}

fn require<T: Copy>(value: Option<T>, flag: &str) -> Result<T, Error> {
    value.ok_or_else(|| Error::Parse(format!("missing required flag --{flag}")))
}

fn revolution_grid(args: &SampleArgs) -> Result<(usize, usize), Error> {
    if let (Some(ns), Some(ntheta)) = (args.ns, args.ntheta) {
        return Ok((ns, ntheta));
    }
    let n = require(args.n, "n")?;
    if n < 12 {
        return Err(Error::domain(
            "revolution sampling needs --n of at least 12",
        ));
    }
    // Ring size roughly the square root of half the budget, so spacing
    // along the profile and around the parallels is comparable.
    let ntheta = args
        .ntheta
        .unwrap_or(((n as f64 / 2.0).sqrt().round() as usize).max(3));
    let ns = args.ns.unwrap_or((n / ntheta).max(3));
    Ok((ns, ntheta))
}

fn cmd_sample(args: SampleArgs) -> Result<(), Error> {
    let spec = match args.shape.as_str() {
        "circle" => ShapeSpec::Circle {
            radius: require(args.radius, "radius")?,
            count: require(args.n, "n")?,
        },
        "torus" => {
            let n_theta = args
                .ntheta
                .or(args.n.map(|n| (n as f64).sqrt().round() as usize));
            let n_theta = n_theta.ok_or_else(|| Error::Parse("need --ntheta or --n".into()))?;
            let n_phi = args.nphi.unwrap_or(n_theta);
            ShapeSpec::TorusGrid {
                a: require(args.a, "a")?,
                b: require(args.b, "b")?,
                n_theta,
                n_phi,
            }
        }
        "sphere" => ShapeSpec::SphereEven {
            radius: require(args.radius, "radius")?,
            count: require(args.n, "n")?,
        },
        "barbell" => {
            let r1 = args.r1.or(args.radius);
            let profile = make_profile(ProfileKind::Barbell {
                r1: require(r1, "r1")?,
                r2: require(args.r2.or(r1), "r2")?,
                length: require(args.length, "L")?,
                neck: require(args.neck, "r")?,
            })?;
            let (n_s, n_theta) = revolution_grid(&args)?;
            ShapeSpec::Revolution {
                profile,
                n_s,
                n_theta,
            }
        }
        "lollipop" => {
            let profile = make_profile(ProfileKind::Lollipop {
                radius: require(args.radius, "radius")?,
                neck: require(args.neck, "r")?,
                length: require(args.length, "L")?,
            })?;
            let (n_s, n_theta) = revolution_grid(&args)?;
            ShapeSpec::Revolution {
                profile,
                n_s,
                n_theta,
            }
        }
        "photoset" => ShapeSpec::PhotoSet,
        other => return Err(Error::Parse(format!("unknown shape `{other}`"))),
    };
    let pc = sample(&spec)?;
    std::fs::write(&args.out, io::point_cloud_to_csv(&pc))?;
    let dim = pc.dim();
    let mut lo = vec![f64::INFINITY; dim];
    let mut hi = vec![f64::NEG_INFINITY; dim];
    for i in 0..pc.len() {
        for (d, &v) in pc.point(i).iter().enumerate() {
            lo[d] = lo[d].min(v);
            hi[d] = hi[d].max(v);
        }
    }
    println!(
        "wrote {} points of dimension {} to {}",
        pc.len(),
        dim,
        args.out.display()
    );
    let lo_s: Vec<String> = lo.iter().map(|v| format!("{v:.4}")).collect();
    let hi_s: Vec<String> = hi.iter().map(|v| format!("{v:.4}")).collect();
    println!(
        "bounding box: [{}] .. [{}]",
        lo_s.join(", "),
        hi_s.join(", ")
    );
    Ok(())
}

fn parse_rule(text: &str) -> Result<AdjacencyRule, Error> {
    if let Some(k) = text.strip_prefix("knn:") {
        let k = k
            .parse()
            .map_err(|_| Error::Parse(format!("bad kNN count `{k}`")))?;
        Ok(AdjacencyRule::KNearest(k))
    } else if let Some(e) = text.strip_prefix("eps:") {
        let eps = e
            .parse()
            .map_err(|_| Error::Parse(format!("bad epsilon `{e}`")))?;
        Ok(AdjacencyRule::Epsilon(eps))
    } else {
        Err(Error::Parse(format!(
            "rule must be knn:K or eps:E, got `{text}`"
        )))
    }
}

fn cmd_graph(args: GraphArgs) -> Result<(), Error> {
    let pc = io::point_cloud_from_csv(&std::fs::read_to_string(&args.points)?)?;
    let adjacency = build_adjacency(&pc, parse_rule(&args.rule)?)?;
    let graph = if args.binary {
        if args.t.is_some() {
            return Err(Error::Parse(
                "--binary and --t are mutually exclusive".into(),
            ));
        }
        adjacency
    } else {
        let t = args
            .t
            .ok_or_else(|| Error::Parse("need --t (or --binary)".into()))?;
        weight_matrix(&adjacency, &pc, t)?
    };
    std::fs::write(&args.out, io::graph_to_json(&graph))?;
    println!(
        "wrote graph with {} vertices and {} edges to {}",
        graph.len(),
        graph.edges().len(),
        args.out.display()
    );
    Ok(())
}

fn decompose_for(kind: &str, graph: &WeightedGraph) -> Result<SpectralDecomposition, Error> {
    match kind {
        "rw" => rw_spectrum(graph),
        "sym" => spectral_decompose(&laplacian(graph, LaplacianKind::Symmetric)?),
        other => Err(Error::Parse(format!(
            "laplacian must be rw or sym, got `{other}`"
        ))),
    }
}

fn cmd_embed(args: EmbedArgs) -> Result<(), Error> {
    let pc = io::point_cloud_from_csv(&std::fs::read_to_string(&args.points)?)?;
    let graph = if let Some(path) = &args.inject_w {
        let g = io::graph_from_json(&std::fs::read_to_string(path)?)?;
        if g.len() != pc.len() {
            return Err(Error::ShapeMismatch(
                "injected matrix size differs from cloud".into(),
            ));
        }
        g
    } else if let Some(path) = &args.graph {
        io::graph_from_json(&std::fs::read_to_string(path)?)?
    } else {
        let rule = args
            .rule
            .as_deref()
            .ok_or_else(|| Error::Parse("need one of --rule, --graph, or --inject-w".into()))?;
        let t = args
            .t
            .ok_or_else(|| Error::Parse("--rule needs --t".into()))?;
        let adjacency = build_adjacency(&pc, parse_rule(rule)?)?;
        weight_matrix(&adjacency, &pc, t)?
    };
    let dec = decompose_for(&args.laplacian, &graph)?;
    let map = match args.mode.as_str() {
        "eigenmap" => eigenmap(&dec, args.n)?,
        "diffusion" => {
            let tau = args
                .tau
                .ok_or_else(|| Error::Parse("diffusion mode needs --tau".into()))?;
            diffusion_map(&dec, tau, args.n)?
        }
        other => {
            return Err(Error::Parse(format!(
                "mode must be eigenmap or diffusion, got `{other}`"
            )))
        }
    };
    std::fs::write(&args.out, io::embedding_to_csv(&map))?;
    let used: Vec<String> = dec.eigenvalues[1..=args.n]
        .iter()
        .map(|v| format!("{v:.9}"))
        .collect();
    println!("leading eigenvalues: {}", used.join(", "));
    println!(
        "wrote {}x{} embedding to {}",
        map.n_rows(),
        map.n_cols(),
        args.out.display()
    );
    Ok(())
}

fn build_manifold(args: &ManifoldArgs) -> Result<AnalyticManifold, Error> {
    match args.manifold.as_str() {
        "circle" => AnalyticManifold::circle(require(args.radius, "radius")?),
        "torus" => AnalyticManifold::flat_torus(require(args.a, "a")?, require(args.b, "b")?),
        "sphere" => Ok(AnalyticManifold::Sphere2),
        "h2" => Ok(AnalyticManifold::Hyperbolic2),
        "h3" => Ok(AnalyticManifold::Hyperbolic3),
        "cc" => AnalyticManifold::constant_curvature(
            require(args.kappa, "kappa")?,
            require(args.dim, "dim")?,
        ),
        other => Err(Error::Parse(format!("unknown manifold `{other}`"))),
    }
}

fn parse_point(manifold: &AnalyticManifold, text: &str) -> Result<Point, Error> {
    let coords: Vec<f64> = text
        .split(',')
        .map(|c| {
            c.trim()
                .parse::<f64>()
                .map_err(|e| Error::Parse(format!("bad coordinate `{c}`: {e}")))
        })
        .collect::<Result<_, _>>()?;
    point_from_coords(manifold, &coords)
}

fn parse_method(text: &str) -> Result<KernelMethod, Error> {
    if let Some(m) = text.strip_prefix("image:") {
        Ok(KernelMethod::ImageSum {
            images: m
                .parse()
                .map_err(|_| Error::Parse(format!("bad image count `{m}`")))?,
        })
    } else if let Some(n) = text.strip_prefix("eigen:") {
        Ok(KernelMethod::EigenSum {
            truncation: n
                .parse()
                .map_err(|_| Error::Parse(format!("bad truncation `{n}`")))?,
        })
    } else if text == "closed" {
        Ok(KernelMethod::ClosedForm)
    } else if let Some(n) = text.strip_prefix("quad:") {
        Ok(KernelMethod::Quadrature {
            nodes: n
                .parse()
                .map_err(|_| Error::Parse(format!("bad node count `{n}`")))?,
        })
    } else {
        Err(Error::Parse(format!(
            "method must be image:M, eigen:N, closed, or quad:K; got `{text}`"
        )))
    }
}

fn cmd_analytic(query: AnalyticQuery) -> Result<(), Error> {
    match query {
        AnalyticQuery::HeatKernel(args) => {
            let manifold = build_manifold(&args.manifold)?;
            let p = parse_point(&manifold, &args.p)?;
            let q = parse_point(&manifold, &args.q)?;
            if let AnalyticManifold::ConstantCurvature { kappa, dim } = manifold {
                let s = manifold.geodesic_distance(&p, &q)?;
                let h = constant_curvature_kernel(kappa, dim, s, args.t)?;
                println!("kernel: {}", io::format_float(h));
                return Ok(());
            }
            let h = manifold.heat_kernel(&p, &q, args.t, &parse_method(&args.method)?)?;
            println!("kernel: {}", io::format_float(h));
            if let Ok(log_h) = manifold.log_heat_kernel(&p, &q, args.t) {
                println!("log-kernel: {}", io::format_float(log_h));
            }
            Ok(())
        }
        AnalyticQuery::Varadhan(args) => {
            let manifold = build_manifold(&args.manifold)?;
            let p = parse_point(&manifold, &args.p)?;
            let q = parse_point(&manifold, &args.q)?;
            let times: Vec<f64> = args
                .times
                .split(',')
                .map(|t| {
                    t.trim()
                        .parse::<f64>()
                        .map_err(|e| Error::Parse(format!("bad time `{t}`: {e}")))
                })
                .collect::<Result<_, _>>()?;
            let report = varadhan_sweep(&manifold, &p, &q, &times)?;
            print!("{}", report.to_csv());
            if report.cut_locus {
                println!("# pair lies on the cut locus");
            }
            if let Some(out) = args.out {
                std::fs::write(&out, report.to_csv())?;
                println!("# wrote {}", out.display());
            }
            Ok(())
        }
        AnalyticQuery::Length(args) => {
            let manifold = AnalyticManifold::circle(args.radius)?;
            let spectrum = Spectrum::circle(args.radius)?;
            let budget = tail_trace_bound(&spectrum, args.t, args.tolerance)?;
            let spec = EmbeddingSpec::new(EmbeddingMode::Rescaled, args.t, budget.truncation)?;
            let len = embedded_curve_length(&manifold, full_circle_curve, &spec, 8)?;
            let truth = 2.0 * std::f64::consts::PI * args.radius;
            println!("truncation: {}", budget.truncation);
            println!("length: {}", io::format_float(len));
            println!("deviation: {}", io::format_float((len - truth).abs()));
            Ok(())
        }
        AnalyticQuery::Spectrum(args) => {
            let manifold = build_manifold(&args.manifold)?;
            let spectrum = Spectrum::from_manifold(&manifold)?;
            let values = spectrum.eigenvalues(args.count)?;
            for (j, v) in values.iter().enumerate() {
                println!("lambda_{j} = {}", io::format_float(*v));
            }
            if let Some(t) = args.trace_t {
                if let Some(eps) = args.tail_eps {
                    let budget = tail_trace_bound(&spectrum, t, eps)?;
                    println!(
                        "truncation: {} (tail {} < {eps})",
                        budget.truncation,
                        io::format_float(budget.tail)
                    );
                    println!(
                        "trace: {}",
                        io::format_float(heat_trace(&spectrum, t, budget.truncation)?)
                    );
                } else {
                    println!(
                        "trace: {}",
                        io::format_float(heat_trace(&spectrum, t, args.count.saturating_sub(1))?)
                    );
                }
            }
            Ok(())
        }
    }
}

fn cmd_verify(args: VerifyArgs) -> Result<(), Error> {
    let report = suites::run_suite(&args.suite)?;
    for a in &report.assertions {
        println!(
            "[{}] {} (observed {:.6e}, bound {:.6e})",
            if a.pass { "pass" } else { "FAIL" },
            a.name,
            a.observed,
            a.bound,
        );
    }
    if let Some(out) = &args.out {
        std::fs::write(out, report.to_json())?;
        println!("wrote report to {}", out.display());
    }
    if report.pass {
        println!("suite {}: pass", report.suite);
        Ok(())
    } else {
        Err(Error::Numeric {
            what: format!("suite {} failed", report.suite),
            residual: report.assertions.iter().filter(|a| !a.pass).count() as f64,
        })
    }
}
