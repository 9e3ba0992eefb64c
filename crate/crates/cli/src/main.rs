use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use anyhow::{anyhow, bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use toric_lg::catalog::{
    load_catalog, support_congruence, validate_all, Catalog, CongruenceReport, ValidationReport,
};
use toric_lg::laurent::parse;
use toric_lg::links::{
    build_del_pezzo_graph, build_fano_snake, enumerate_reflexive_polygons, PolygonClass,
};
use toric_lg::mutation::{
    find_decompositions_along, mutate, validate_decomposition, MutationData, DEFAULT_MAX_SUPPORT,
};
use toric_lg::period::{
    check_reference_file, period_equal, period_sequence, PeriodCache, PeriodFile,
};
use toric_lg::{
    Error, LatticePolytope, LatticeVector, LaurentPolynomial, Parallelism, UnimodularMap,
};

#[derive(Parser)]
#[command(
    name = "toric-lg",
    version,
    about = "Exact checks for toric Landau-Ginzburg models of Fano threefolds"
)]
struct Cli {
    /// Output format.
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    format: Format,
    /// Seed for randomized checks.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Worker threads for parallel work (default: all cores).
    #[arg(long, global = true)]
    jobs: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(Subcommand)]
enum Command {
    /// Validate a dataset: polytopes, degrees, links, period congruences.
    Validate {
        /// Dataset file (default: bundled table).
        #[arg(long)]
        dataset: Option<PathBuf>,
        /// Spread per-row and per-edge checks over threads.
        #[arg(long)]
        parallel: bool,
        #[arg(long, default_value_t = 10)]
        period_depth: u32,
        /// Random unimodular maps applied to each Newton polytope.
        #[arg(long, default_value_t = 0)]
        gl_trials: u32,
    },
    /// Print the period sequence a_0..a_N.
    Period {
        #[command(flatten)]
        input: PolyInput,
        #[arg(long, default_value_t = 10)]
        depth: u32,
        /// Cache directory (falls back to $LG_CACHE_DIR).
        #[arg(long)]
        cache: Option<PathBuf>,
        /// Compare against a reference file {"N": n, "values": [...]}.
        #[arg(long)]
        reference: Option<PathBuf>,
    },
    /// Apply a mutation and compare periods.
    Mutate {
        #[command(flatten)]
        input: PolyInput,
        /// Mutation data file.
        #[arg(long, conflicts_with = "search")]
        decomposition: Option<PathBuf>,
        /// Search along a pivot: x, y, z, or a direction like 1,0,-1.
        #[arg(long)]
        search: Option<String>,
        #[arg(long, default_value_t = DEFAULT_MAX_SUPPORT)]
        max_support: usize,
        #[arg(long, default_value_t = 10)]
        depth: u32,
    },
    /// Newton polytope queries.
    Polytope {
        #[command(flatten)]
        input: PolyInput,
        #[arg(long)]
        dual: bool,
        #[arg(long)]
        nf: bool,
        #[arg(long)]
        points: bool,
    },
    /// Emit a link graph as DOT.
    Graph {
        #[arg(
            long,
            conflicts_with = "delpezzo",
            required_unless_present = "delpezzo"
        )]
        snake: bool,
        #[arg(long)]
        delpezzo: bool,
        #[arg(long)]
        dataset: Option<PathBuf>,
        /// Write DOT here instead of stdout.
        #[arg(long)]
        dot: Option<PathBuf>,
    },
    /// Enumerate reflexive polygons.
    Polygons,
    /// Time period computations.
    Bench {
        #[arg(long, default_value_t = 20)]
        depth: u32,
        #[arg(long, value_delimiter = ',', default_values_t = [1u32, 24, 25])]
        rows: Vec<u32>,
        #[arg(long)]
        parallel: bool,
    },
}

#[derive(Args)]
struct PolyInput {
    /// Laurent polynomial in x, y, z.
    expr: Option<String>,
    /// Use a row of the bundled table.
    #[arg(long, conflicts_with = "expr")]
    row: Option<u32>,
    /// Number of variables for expressions.
    #[arg(long, default_value_t = 3)]
    dim: usize,
}

impl PolyInput {
    fn load(&self) -> Result<LaurentPolynomial> {
        match (&self.expr, self.row) {
            (Some(e), None) => Ok(parse(e, self.dim)?),
            (None, Some(id)) => Ok(Catalog::bundled().row(id)?.polynomial.clone()),
            _ => bail!("give an expression or --row"),
        }
    }
}

/// Command result for exit status 0 or 1.
struct Outcome {
    pass: bool,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let format = cli.format;
    let started = Instant::now();
    let jobs = cli.jobs;
    let result = toric_lg::par::with_jobs(jobs, move || run(cli));
    eprintln!("timing: {:.3}s", started.elapsed().as_secs_f64());
    match result {
        Ok(Outcome { pass: true }) => ExitCode::SUCCESS,
        Ok(Outcome { pass: false }) => ExitCode::from(1),
        Err(e) => {
            let code = exit_code(&e);
            if format == Format::Json {
                let body = serde_json::json!({ "error": format!("{e:#}"), "exit": code });
                println!("{}", serde_json::to_string_pretty(&body).expect("json"));
            }
            eprintln!("error: {e:#}");
            ExitCode::from(code)
        }
    }
}

/// Validation failures are 1; malformed input is 2.
fn exit_code(e: &anyhow::Error) -> u8 {
    match e.downcast_ref::<Error>() {
        Some(
            Error::InvalidDecomposition
            | Error::InvalidMutationData(_)
            | Error::PivotExponentOutOfRange { .. },
        ) => 1,
        Some(Error::InconsistentCatalog(_)) => 1,
        _ => 2,
    }
}

fn emit<T: Serialize>(format: Format, value: &T, text: impl FnOnce() -> String) {
    match format {
        Format::Json => println!(
            "{}",
            serde_json::to_string_pretty(value).expect("report serializes")
        ),
        Format::Text => print!("{}", text()),
    }
}

fn mode(parallel: bool) -> Parallelism {
    if parallel {
        Parallelism::Parallel
    } else {
        Parallelism::Sequential
    }
}

fn run(cli: Cli) -> Result<Outcome> {
    let format = cli.format;
    match cli.command {
        Command::Validate {
            dataset,
            parallel,
            period_depth,
            gl_trials,
        } => cmd_validate(
            format,
            dataset,
            mode(parallel),
            period_depth,
            gl_trials,
            cli.seed,
        ),
        Command::Period {
            input,
            depth,
            cache,
            reference,
        } => cmd_period(format, &input, depth, cache, reference),
        Command::Mutate {
            input,
            decomposition,
            search,
            max_support,
            depth,
        } => cmd_mutate(format, &input, decomposition, search, max_support, depth),
        Command::Polytope {
            input,
            dual,
            nf,
            points,
        } => cmd_polytope(format, &input, dual, nf, points),
        Command::Graph {
            snake,
            delpezzo: _,
            dataset,
            dot,
        } => cmd_graph(format, snake, dataset, dot),
        Command::Polygons => cmd_polygons(format),
        Command::Bench {
            depth,
            rows,
            parallel,
        } => cmd_bench(format, depth, &rows, mode(parallel)),
    }
}

fn load_dataset(path: Option<PathBuf>) -> Result<Catalog> {
    Ok(match path {
        Some(p) => load_catalog(&p).with_context(|| format!("loading {}", p.display()))?,
        None => Catalog::bundled(),
    })
}

#[derive(Serialize)]
struct GlReport {
    seed: u64,
    trials_per_row: u32,
    failures: Vec<u32>,
    pass: bool,
}

#[derive(Serialize)]
struct ValidateReport {
    command: &'static str,
    rows: usize,
    validation: ValidationReport,
    period_depth: u32,
    congruence: Vec<CongruenceReport>,
    gl_invariance: GlReport,
    pass: bool,
}

fn cmd_validate(
    format: Format,
    dataset: Option<PathBuf>,
    mode: Parallelism,
    depth: u32,
    gl_trials: u32,
    seed: u64,
) -> Result<Outcome> {
    let catalog = load_dataset(dataset)?;
    let validation = validate_all(&catalog, mode);
    let congruence = support_congruence(&catalog, depth, mode);
    let gl = gl_invariance(&catalog, gl_trials, seed)?;
    let pass = validation.pass && congruence.iter().all(|c| c.pass) && gl.pass;
    let report = ValidateReport {
        command: "validate",
        rows: catalog.len(),
        validation,
        period_depth: depth,
        congruence,
        gl_invariance: gl,
        pass,
    };
    emit(format, &report, || validate_text(&report));
    Ok(Outcome { pass })
}

fn gl_invariance(catalog: &Catalog, trials: u32, seed: u64) -> Result<GlReport> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut failures = Vec::new();
    for row in catalog.rows() {
        let p = row.newton_polytope()?;
        let nf = p.normal_form()?;
        for _ in 0..trials {
            let u = UnimodularMap::random(3, 3, &mut rng);
            let q = p.apply_unimodular(&u)?;
            let same = q.normal_form()? == nf
                && q.normalized_volume() == p.normalized_volume()
                && q.lattice_points().all == p.lattice_points().all;
            if !same {
                failures.push(row.id);
                break;
            }
        }
    }
    Ok(GlReport {
        seed,
        trials_per_row: trials,
        pass: failures.is_empty(),
        failures,
    })
}

fn mark(ok: bool) -> &'static str {
    if ok {
        "ok"
    } else {
        "FAIL"
    }
}

fn validate_text(r: &ValidateReport) -> String {
    let v = &r.validation;
    let mut s = String::new();
    for row in &v.rows {
        s += &format!(
            "row {:>2}: reflexive {} dual volume {:>4} {} dual points {:>4} {} genus {} expression {}\n",
            row.id,
            mark(row.reflexive),
            row.dual_volume.map_or("-".to_string(), |x| x.to_string()),
            mark(row.volume_ok),
            row.dual_points.map_or("-".to_string(), |x| x.to_string()),
            mark(row.points_ok),
            mark(row.genus_ok),
            mark(row.expression_ok),
        );
    }
    for e in &v.edges {
        s += &format!(
            "edge {:>2} -> {:>2} {:<6}: drop {} reflexive {} containment {}\n",
            e.parent,
            e.child,
            e.link_type.to_string(),
            mark(e.checks.drop),
            mark(e.checks.reflexive),
            mark(e.checks.containment),
        );
    }
    for g in &v.global {
        s += &format!("{}: {} ({})\n", g.name, mark(g.pass), g.detail);
    }
    let bad: Vec<u32> = r
        .congruence
        .iter()
        .filter(|c| !c.pass)
        .map(|c| c.id)
        .collect();
    s += &format!(
        "period support congruence to N={}: {} ({} rows, failing {:?})\n",
        r.period_depth,
        mark(bad.is_empty()),
        r.congruence.len(),
        bad
    );
    s += &format!(
        "unimodular invariance ({} trials/row, seed {}): {}\n",
        r.gl_invariance.trials_per_row,
        r.gl_invariance.seed,
        mark(r.gl_invariance.pass)
    );
    let failures = v.failures();
    if !failures.is_empty() {
        s += "failures:\n";
        for f in failures {
            s += &format!("  {f}\n");
        }
    }
    s += &format!("overall: {}\n", if r.pass { "PASS" } else { "FAIL" });
    s
}

#[derive(Serialize)]
struct PeriodReport {
    hash: String,
    depth: u32,
    values: Vec<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    reference: Option<toric_lg::period::ReferenceReport>,
}

fn cmd_period(
    format: Format,
    input: &PolyInput,
    depth: u32,
    cache: Option<PathBuf>,
    reference: Option<PathBuf>,
) -> Result<Outcome> {
    let f = input.load()?;
    let cache = cache.map(PeriodCache::new).or_else(PeriodCache::from_env);
    let seq = match &cache {
        Some(c) => c.get_or_compute(&f, depth)?,
        None => period_sequence(&f, depth),
    };
    let reference = match reference {
        Some(path) => Some(check_reference_file(&f, &PeriodFile::read(&path)?)?),
        None => None,
    };
    let pass = reference.as_ref().is_none_or(|r| r.pass);
    let report = PeriodReport {
        hash: seq.source.hash.clone(),
        depth,
        values: seq.values.iter().map(ToString::to_string).collect(),
        reference,
    };
    emit(format, &report, || {
        let mut s = report.values.join(" ") + "\n";
        if let Some(r) = &report.reference {
            for w in &r.warnings {
                s += &format!("warning: {w}\n");
            }
            s += &match r.first_mismatch {
                None => format!("reference: match ({} values)\n", r.entries.len()),
                Some(i) => format!("reference: mismatch at i={i}\n"),
            };
        }
        s
    });
    Ok(Outcome { pass })
}

/// `x`, `y`, `z`, an axis index, or a comma-separated direction.
fn parse_pivot(s: &str, dim: usize) -> Result<LatticeVector> {
    let axis = match s {
        "x" => Some(0),
        "y" => Some(1),
        "z" => Some(2),
        _ => s.parse::<usize>().ok(),
    };
    if let Some(i) = axis {
        if i >= dim {
            bail!("pivot {s} out of range for dimension {dim}");
        }
        return Ok(LatticeVector::unit(dim, i));
    }
    let coords = s
        .split(',')
        .map(|c| c.trim().parse::<i64>())
        .collect::<std::result::Result<Vec<_>, _>>()
        .map_err(|_| anyhow!("cannot read pivot {s:?}"))?;
    let v = LatticeVector::new(&coords)?;
    if v.dim() != dim || !v.is_primitive() {
        bail!("pivot direction must be a primitive vector of length {dim}");
    }
    Ok(v)
}

#[derive(Serialize)]
struct MutateReport {
    input: String,
    decomposition: MutationData,
    output: String,
    depth: u32,
    periods_equal: bool,
    first_mismatch: Option<usize>,
}

fn cmd_mutate(
    format: Format,
    input: &PolyInput,
    decomposition: Option<PathBuf>,
    search: Option<String>,
    max_support: usize,
    depth: u32,
) -> Result<Outcome> {
    let f = input.load()?;
    let d: MutationData = match (decomposition, search) {
        (Some(path), _) => {
            let text = std::fs::read_to_string(&path)
                .with_context(|| format!("reading {}", path.display()))?;
            let d: MutationData = serde_json::from_str(&text).map_err(|e| Error::Parse {
                offset: e.column(),
                message: e.to_string(),
            })?;
            if !validate_decomposition(&f, &d)? {
                return Err(Error::InvalidDecomposition.into());
            }
            d
        }
        (None, Some(pivot)) => {
            let h = parse_pivot(&pivot, f.dim())?;
            let found = find_decompositions_along(&f, &h, max_support)?;
            match found.into_iter().find(|d| d.g2().len() > 1) {
                Some(d) => d,
                None => {
                    eprintln!("no decomposition with a non-monomial factor along {pivot}");
                    return Ok(Outcome { pass: false });
                }
            }
        }
        (None, None) => bail!("give --decomposition or --search"),
    };
    let g = mutate(&f, &d)?;
    let cmp = period_equal(&f, &g, depth)?;
    let report = MutateReport {
        input: f.to_string(),
        decomposition: d,
        output: g.to_string(),
        depth,
        periods_equal: cmp.equal,
        first_mismatch: cmp.first_mismatch,
    };
    emit(format, &report, || {
        let verdict = match report.first_mismatch {
            None => format!("periods equal through N={depth}"),
            Some(i) => format!("periods differ at i={i}"),
        };
        format!("{}\n{}\n", report.output, verdict)
    });
    Ok(Outcome { pass: cmp.equal })
}

#[derive(Serialize)]
struct PolytopeReport {
    vertices: Vec<LatticeVector>,
    reflexive: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    dual_vertices: Option<Vec<Vec<String>>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    normal_form: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    points: Option<PointReport>,
}

#[derive(Serialize)]
struct PointReport {
    newton: usize,
    newton_interior: usize,
    dual: Option<usize>,
}

fn cmd_polytope(
    format: Format,
    input: &PolyInput,
    dual: bool,
    nf: bool,
    points: bool,
) -> Result<Outcome> {
    let f = input.load()?;
    let p: LatticePolytope = f.newton_polytope()?;
    let d = p.dual()?;
    let reflexive = d.is_integral();
    let report = PolytopeReport {
        vertices: p.vertices().to_vec(),
        reflexive,
        dual_vertices: dual.then(|| {
            d.vertices()
                .iter()
                .map(|v| v.iter().map(ToString::to_string).collect())
                .collect()
        }),
        normal_form: if nf {
            Some(p.normal_form()?.hex())
        } else {
            None
        },
        points: points.then(|| {
            let lp = p.lattice_points();
            PointReport {
                newton: lp.all,
                newton_interior: lp.interior,
                dual: Some(d.lattice_points().all),
            }
        }),
    };
    emit(format, &report, || {
        let mut s = format!(
            "vertices: {}\n",
            report
                .vertices
                .iter()
                .map(ToString::to_string)
                .collect::<Vec<_>>()
                .join(" ")
        );
        s += &format!("reflexive: {}\n", report.reflexive);
        if let Some(dv) = &report.dual_vertices {
            let shown: Vec<String> = dv.iter().map(|v| format!("({})", v.join(","))).collect();
            s += &format!("dual vertices: {}\n", shown.join(" "));
        }
        if let Some(h) = &report.normal_form {
            s += &format!("normal form: {h}\n");
        }
        if let Some(pt) = &report.points {
            s += &format!(
                "newton: {} points ({} interior)\n",
                pt.newton, pt.newton_interior
            );
            if let Some(n) = pt.dual {
                s += &format!("dual: {n} points\n");
            }
        }
        s
    });
    Ok(Outcome { pass: true })
}

fn cmd_graph(
    format: Format,
    snake: bool,
    dataset: Option<PathBuf>,
    dot: Option<PathBuf>,
) -> Result<Outcome> {
    let graph = if snake {
        build_fano_snake(&load_dataset(dataset)?)?
    } else {
        build_del_pezzo_graph()
    };
    match dot {
        Some(path) => {
            std::fs::write(&path, graph.to_dot())
                .with_context(|| format!("writing {}", path.display()))?;
            emit(format, &graph, || {
                format!(
                    "wrote {} ({} nodes, {} edges)\n",
                    path.display(),
                    graph.nodes.len(),
                    graph.edges.len()
                )
            });
        }
        None => emit(format, &graph, || graph.to_dot()),
    }
    Ok(Outcome { pass: true })
}

fn cmd_polygons(format: Format) -> Result<Outcome> {
    let classes: Vec<PolygonClass> = enumerate_reflexive_polygons();
    emit(format, &classes, || {
        let mut s = String::new();
        for (i, c) in classes.iter().enumerate() {
            let verts: Vec<String> = c
                .representative()
                .vertices()
                .iter()
                .map(ToString::to_string)
                .collect();
            s += &format!(
                "{:>2}: degree {} vertices {} boundary {} nf {}\n",
                i + 1,
                c.degree(),
                verts.join(" "),
                c.boundary_points(),
                c.normal_form().hex()
            );
        }
        s += &format!("{} classes\n", classes.len());
        s
    });
    Ok(Outcome {
        pass: classes.len() == 16,
    })
}

#[derive(Serialize)]
struct BenchRow {
    row: u32,
    depth: u32,
    seconds: f64,
    last_value_digits: usize,
}

fn cmd_bench(format: Format, depth: u32, rows: &[u32], mode: Parallelism) -> Result<Outcome> {
    let catalog = Catalog::bundled();
    let mut out = Vec::new();
    for &id in rows {
        let f = &catalog.row(id)?.polynomial;
        let opts = toric_lg::period::PeriodOptions {
            prune: true,
            parallelism: mode,
        };
        let t = Instant::now();
        let seq = toric_lg::period::period_sequence_with(f, depth, opts);
        out.push(BenchRow {
            row: id,
            depth,
            seconds: t.elapsed().as_secs_f64(),
            last_value_digits: seq.values.last().map_or(0, |v| v.to_string().len()),
        });
    }
    emit(format, &out, || {
        let mut s = format!(
            "{:>4} {:>6} {:>10} {:>8}\n",
            "row", "depth", "seconds", "digits"
        );
        for r in &out {
            s += &format!(
                "{:>4} {:>6} {:>10.3} {:>8}\n",
                r.row, r.depth, r.seconds, r.last_value_digits
            );
        }
        s
    });
    Ok(Outcome { pass: true })
}
