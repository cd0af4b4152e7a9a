use std::fs;
use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use extremal_density::classify::{
    classify_type, compare_with_three_class_hosts, default_beta_grid, exhaustive_ex, q_star_curve,
    search_counterexamples, sweep_connected_graphs, sweep_row, ClassifyConfig, SweepRow,
};
use extremal_density::density::{crossovers, density_curve, DEFAULT_TOL_Q};
use extremal_density::graph::{invariants, parse_graph6, write_graph6};
use extremal_density::lp::{duality_check, parse_rational};
use extremal_density::numeric::{geometric_grid, linear_grid};
use extremal_density::oracle::{convergence_report_with_budget, CountReport, DEFAULT_NODE_BUDGET};
use extremal_density::weighting::spectrum;
use extremal_density::{Error, Graph};

#[derive(Parser)]
#[command(name = "exdens", version, about = "Subgraph densities in quasi-star, quasi-clique and three-class hosts")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Csv,
    Json,
}

#[derive(Args)]
#[group(required = true, multiple = false)]
struct Source {
    /// Edge list (`edges:1-2,2-3` or plain `1-2,2-3`) or graph6 (`g6:Bw`)
    #[arg(long)]
    graph: Option<String>,
    /// P<l>, K<k>, C<k>, star<k> or G6
    #[arg(long)]
    builtin: Option<String>,
    /// Clique size and leaf count `a,b` of the counterexample family
    #[arg(long)]
    family: Option<String>,
}

#[derive(Args)]
struct Output {
    /// Write here instead of standard output
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, value_enum)]
    format: Option<Format>,
}

#[derive(Args)]
struct Grid {
    /// Edge densities `lo:hi:steps` (linear unless --log)
    #[arg(long)]
    beta: Option<String>,
    /// Space the beta samples geometrically
    #[arg(long)]
    log: bool,
    /// Number of q cells in each profile scan
    #[arg(long, default_value_t = 64)]
    grid: usize,
    /// Refinement tolerance on q
    #[arg(long, default_value_t = 1e-10)]
    tol: f64,
    /// Endpoint attribution tolerance on q
    #[arg(long, default_value_t = DEFAULT_TOL_Q)]
    tol_q: f64,
}

#[derive(Subcommand)]
enum Command {
    /// Invariants, weighting spectrum and asymptotic constants
    Analyze {
        #[command(flatten)]
        source: Source,
        /// q for the three-class constant
        #[arg(long, default_value = "1/sqrt2")]
        q: String,
        #[command(flatten)]
        output: Output,
    },
    /// Optimal density over q across a beta grid
    Profile {
        #[command(flatten)]
        source: Source,
        #[command(flatten)]
        grid: Grid,
        #[command(flatten)]
        output: Output,
    },
    /// Edge densities where the densities at q1 and q2 cross
    Crossover {
        #[command(flatten)]
        source: Source,
        #[arg(long)]
        q1: String,
        #[arg(long)]
        q2: String,
        /// Scan `lo:hi:steps` for sign changes (geometric)
        #[arg(long, default_value = "1e-6:1:400")]
        beta: String,
        /// Bisection tolerance on beta
        #[arg(long, default_value_t = 1e-12)]
        tol: f64,
        #[command(flatten)]
        output: Output,
    },
    /// Type pattern (K, SK, TK, STK) of one graph
    Classify {
        #[command(flatten)]
        source: Source,
        #[command(flatten)]
        grid: Grid,
        /// Include the optimal-q curve and its monotonicity report
        #[arg(long)]
        q_curve: bool,
        #[command(flatten)]
        output: Output,
    },
    /// Classify every connected graph up to a vertex count
    ClassifyAll {
        #[arg(long, default_value_t = 5)]
        max_v: usize,
        #[command(flatten)]
        grid: Grid,
        #[command(flatten)]
        output: Output,
    },
    /// Brute-force counts into explicit hosts against the density
    Oracle {
        #[command(flatten)]
        source: Source,
        /// Edge density of the hosts
        #[arg(long)]
        beta: f64,
        #[arg(long, default_value = "1/sqrt2")]
        q: String,
        /// Host sizes, comma separated and increasing
        #[arg(long, default_value = "30,60,120")]
        n_list: String,
        /// Search-tree node limit per count
        #[arg(long, default_value_t = DEFAULT_NODE_BUDGET)]
        budget: u64,
        #[command(flatten)]
        output: Output,
    },
    /// Connected graphs with alpha* > max(alpha, v/2)
    Search {
        #[arg(long, default_value_t = 6)]
        max_v: usize,
        #[command(flatten)]
        output: Output,
    },
    /// Solve the exponent LP and its dual exactly
    Lp {
        #[command(flatten)]
        source: Source,
        /// Rational, e.g. 1/10 or 0.25
        #[arg(long)]
        epsilon: String,
        #[command(flatten)]
        output: Output,
    },
    /// Exact maximum number of copies over small hosts
    Ex {
        #[command(flatten)]
        source: Source,
        #[arg(long)]
        n: usize,
        #[arg(long)]
        e: usize,
        /// Also report the best three-class host of the same size
        #[arg(long)]
        compare: bool,
        #[command(flatten)]
        output: Output,
    },
}

/// Failure with its exit status.
struct Failure {
    code: u8,
    message: String,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::BudgetExceeded { .. } => 3,
            ref e if e.is_invalid_input() => 2,
            _ => 1,
        };
        Failure { code, message: e.to_string() }
    }
}

fn invalid(message: impl Into<String>) -> Failure {
    Failure { code: 2, message: message.into() }
}

type CliResult<T> = std::result::Result<T, Failure>;

fn load_graph(s: &Source) -> CliResult<Graph> {
    if let Some(text) = &s.graph {
        let text = text.trim();
        if let Some(g6) = text.strip_prefix("g6:") {
            return Ok(parse_graph6(g6)?);
        }
        if let Some(list) = text.strip_prefix("edges:") {
            return Ok(Graph::parse_edge_list(list)?);
        }
        // graph6 never contains '-'
        return Ok(if text.contains('-') { Graph::parse_edge_list(text)? } else { parse_graph6(text)? });
    }
    if let Some(name) = &s.builtin {
        return Ok(Graph::builtin(name)?);
    }
    let fam = s.family.as_deref().expect("clap enforces one source");
    let parts: Vec<&str> = fam.split(',').map(str::trim).collect();
    match parts.as_slice() {
        [a, b] => {
            let a = a.parse().map_err(|_| invalid(format!("bad family size {a:?}")))?;
            let b = b.parse().map_err(|_| invalid(format!("bad family size {b:?}")))?;
            Ok(Graph::counterexample_family(a, b)?)
        }
        _ => Err(invalid(format!("family must be `a,b`, got {fam:?}"))),
    }
}

fn parse_q(text: &str) -> CliResult<f64> {
    let t = text.trim();
    let q = if t.eq_ignore_ascii_case("1/sqrt2") {
        std::f64::consts::FRAC_1_SQRT_2
    } else {
        t.parse().map_err(|_| invalid(format!("bad q value {text:?}")))?
    };
    if !(0.0..=1.0).contains(&q) {
        return Err(invalid(format!("q must lie in [0, 1], got {q}")));
    }
    Ok(q)
}

fn parse_betas(text: &str, log: bool) -> CliResult<Vec<f64>> {
    let bad = || invalid(format!("beta range must be `lo:hi:steps`, got {text:?}"));
    let parts: Vec<&str> = text.split(':').collect();
    let [lo, hi, steps] = parts.as_slice() else {
        return Err(bad());
    };
    let lo: f64 = lo.trim().parse().map_err(|_| bad())?;
    let hi: f64 = hi.trim().parse().map_err(|_| bad())?;
    let steps: usize = steps.trim().parse().map_err(|_| bad())?;
    if !(lo > 0.0 && lo < hi && hi <= 1.0 && steps >= 2) {
        return Err(invalid(format!("need 0 < lo < hi <= 1 and steps >= 2, got {text:?}")));
    }
    Ok(if log { geometric_grid(lo, hi, steps) } else { linear_grid(lo, hi, steps) })
}

fn grid_betas(grid: &Grid) -> CliResult<Vec<f64>> {
    match &grid.beta {
        Some(text) => parse_betas(text, grid.log),
        None => Ok(default_beta_grid()),
    }
}

fn config(grid: &Grid) -> CliResult<ClassifyConfig> {
    if grid.grid < 64 {
        return Err(invalid("--grid must be at least 64"));
    }
    Ok(ClassifyConfig { q_grid: grid.grid, refine_tol: grid.tol, tol_q: grid.tol_q, ..ClassifyConfig::default() })
}

fn num(x: f64) -> String {
    format!("{x:.11e}")
}

/// Rounds every float in a JSON tree to 12 significant digits.
fn round_floats(v: Value) -> Value {
    match v {
        Value::Number(n) if n.is_f64() => {
            let x = n.as_f64().expect("f64");
            num(x).parse::<f64>().ok().and_then(|r| serde_json::Number::from_f64(r)).map_or(Value::Null, Value::Number)
        }
        Value::Array(xs) => Value::Array(xs.into_iter().map(round_floats).collect()),
        Value::Object(m) => Value::Object(m.into_iter().map(|(k, x)| (k, round_floats(x))).collect()),
        other => other,
    }
}

enum Rendered {
    Json(Value),
    Csv(Vec<String>, Vec<Vec<String>>),
}

fn render(r: Rendered) -> CliResult<Vec<u8>> {
    match r {
        Rendered::Json(v) => {
            let mut s = serde_json::to_string_pretty(&round_floats(v)).map_err(|e| Failure { code: 1, message: e.to_string() })?;
            s.push('\n');
            Ok(s.into_bytes())
        }
        Rendered::Csv(header, rows) => {
            let mut w = csv::Writer::from_writer(Vec::new());
            let fail = |e: csv::Error| Failure { code: 1, message: e.to_string() };
            w.write_record(&header).map_err(fail)?;
            for row in rows {
                w.write_record(&row).map_err(fail)?;
            }
            w.into_inner().map_err(|e| Failure { code: 1, message: e.to_string() })
        }
    }
}

fn emit(output: &Output, r: Rendered) -> CliResult<()> {
    let bytes = render(r)?;
    match &output.out {
        Some(path) => fs::write(path, bytes).map_err(|e| invalid(format!("cannot write {}: {e}", path.display()))),
        None => std::io::stdout()
            .write_all(&bytes)
            .map_err(|e| Failure { code: 1, message: e.to_string() }),
    }
}

fn to_value<T: serde::Serialize>(x: &T) -> Value {
    serde_json::to_value(x).expect("serialisable")
}

fn sweep_csv(rows: &[SweepRow]) -> Rendered {
    Rendered::Csv(
        SweepRow::CSV_HEADER.iter().map(|s| s.to_string()).collect(),
        rows.iter().map(SweepRow::csv_record).collect(),
    )
}

fn run(cli: Cli) -> CliResult<()> {
    match cli.command {
        Command::Analyze { source, q, output } => {
            let g = load_graph(&source)?;
            let q = parse_q(&q)?;
            let spec = spectrum(&g)?;
            let inv = invariants(&g)?;
            let c1 = if q > 0.0 && q < 1.0 { Some(spec.c1(q)?) } else { None };
            match output.format.unwrap_or(Format::Json) {
                Format::Json => emit(
                    &output,
                    Rendered::Json(json!({
                        "graph": g.to_edge_list(),
                        "graph6": write_graph6(&g),
                        "v": g.order(),
                        "e": g.size(),
                        "alpha": inv.alpha,
                        "alpha_star": spec.alpha_star.to_string(),
                        "A": inv.max_independent_set_count,
                        "automorphisms": inv.automorphism_count,
                        "independent_counts": inv.independent_counts,
                        "C2": spec.c2().to_string(),
                        "q": q,
                        "C1": c1,
                        "ctilde": spec.ctilde,
                        "weightings": spec.total_weightings(),
                        "entries": to_value(&spec.entries),
                    })),
                ),
                Format::Csv => emit(
                    &output,
                    Rendered::Csv(
                        ["r", "y", "b", "mult"].map(String::from).to_vec(),
                        spec.entries
                            .iter()
                            .map(|e| vec![e.r.to_string(), e.y.to_string(), e.b.to_string(), e.mult.to_string()])
                            .collect(),
                    ),
                ),
            }
        }
        Command::Profile { source, grid, output } => {
            let g = load_graph(&source)?;
            let cfg = config(&grid)?;
            let betas = grid_betas(&grid)?;
            let spec = spectrum(&g)?;
            let curve = density_curve(&spec, &g.to_edge_list(), &betas, cfg.q_grid, cfg.refine_tol, cfg.tol_q)?;
            match output.format.unwrap_or(Format::Csv) {
                Format::Json => emit(&output, Rendered::Json(to_value(&curve))),
                Format::Csv => emit(
                    &output,
                    Rendered::Csv(
                        ["beta", "f_T", "q_star", "t_S", "t_K", "winner"].map(String::from).to_vec(),
                        curve
                            .samples
                            .iter()
                            .map(|s| {
                                let p = s.point;
                                vec![num(p.beta), num(p.f_t), num(p.q_star), num(p.t_s), num(p.t_k), s.winner.to_string()]
                            })
                            .collect(),
                    ),
                ),
            }
        }
        Command::Crossover { source, q1, q2, beta, tol, output } => {
            let g = load_graph(&source)?;
            let (q1, q2) = (parse_q(&q1)?, parse_q(&q2)?);
            let betas = parse_betas(&beta, true)?;
            let spec = spectrum(&g)?;
            let found = crossovers(&spec, q1, q2, &betas, tol)?;
            match output.format.unwrap_or(Format::Json) {
                Format::Json => emit(
                    &output,
                    Rendered::Json(json!({ "graph": g.to_edge_list(), "q1": q1, "q2": q2, "crossovers": found })),
                ),
                Format::Csv => emit(
                    &output,
                    Rendered::Csv(vec!["beta".into()], found.iter().map(|b| vec![num(*b)]).collect()),
                ),
            }
        }
        Command::Classify { source, grid, q_curve, output } => {
            let g = load_graph(&source)?;
            let cfg = config(&grid)?;
            let betas = grid_betas(&grid)?;
            match output.format.unwrap_or(Format::Json) {
                Format::Json => {
                    let mut v = to_value(&classify_type(&g, &betas, &cfg)?);
                    if q_curve {
                        v["q_star_curve"] = to_value(&q_star_curve(&g, &betas, &cfg)?);
                    }
                    emit(&output, Rendered::Json(v))
                }
                Format::Csv => emit(&output, sweep_csv(&[sweep_row(&g, &betas, &cfg)?])),
            }
        }
        Command::ClassifyAll { max_v, grid, output } => {
            let cfg = config(&grid)?;
            let betas = grid_betas(&grid)?;
            let rows = sweep_connected_graphs(max_v, &betas, &cfg)?;
            match output.format.unwrap_or(Format::Csv) {
                Format::Json => emit(&output, Rendered::Json(to_value(&rows))),
                Format::Csv => emit(&output, sweep_csv(&rows)),
            }
        }
        Command::Oracle { source, beta, q, n_list, budget, output } => {
            let g = load_graph(&source)?;
            let q = parse_q(&q)?;
            let ns = n_list
                .split(',')
                .map(|s| s.trim().parse::<usize>().map_err(|_| invalid(format!("bad host size {s:?}"))))
                .collect::<CliResult<Vec<_>>>()?;
            let report = convergence_report_with_budget(&g, beta, q, &ns, budget)?;
            match output.format.unwrap_or(Format::Csv) {
                Format::Json => {
                    // counts can exceed the range JSON numbers hold exactly
                    let mut v = to_value(&report);
                    for (row, r) in v["rows"].as_array_mut().expect("rows").iter_mut().zip(&report.rows) {
                        row["hom"] = Value::String(r.hom.to_string());
                        row["injective"] = Value::String(r.injective.to_string());
                        row["copies"] = Value::String(r.copies.to_string());
                    }
                    emit(&output, Rendered::Json(v))
                }
                Format::Csv => emit(
                    &output,
                    Rendered::Csv(
                        CountReport::CSV_HEADER.iter().map(|s| s.to_string()).collect(),
                        report.rows.iter().map(CountReport::csv_record).collect(),
                    ),
                ),
            }
        }
        Command::Search { max_v, output } => {
            let found = search_counterexamples(max_v)?;
            let rows = found
                .iter()
                .map(|g| {
                    let s = spectrum(g)?;
                    Ok(vec![
                        write_graph6(g),
                        g.to_edge_list(),
                        g.order().to_string(),
                        g.size().to_string(),
                        s.alpha.to_string(),
                        s.alpha_star.to_string(),
                    ])
                })
                .collect::<Result<Vec<_>, Error>>()?;
            match output.format.unwrap_or(Format::Csv) {
                Format::Json => {
                    let list: Vec<Value> = rows
                        .iter()
                        .map(|r| json!({"graph6": r[0], "graph": r[1], "v": r[2].parse::<usize>().unwrap(),
                            "e": r[3].parse::<usize>().unwrap(), "alpha": r[4].parse::<usize>().unwrap(), "alpha_star": r[5]}))
                        .collect();
                    emit(&output, Rendered::Json(Value::Array(list)))
                }
                Format::Csv => emit(
                    &output,
                    Rendered::Csv(["graph6", "graph", "v", "e", "alpha", "alpha_star"].map(String::from).to_vec(), rows),
                ),
            }
        }
        Command::Lp { source, epsilon, output } => {
            let g = load_graph(&source)?;
            let eps = parse_rational(&epsilon)?;
            let report = duality_check(&g, &eps)?;
            match output.format.unwrap_or(Format::Json) {
                Format::Json => emit(&output, Rendered::Json(report.to_json())),
                Format::Csv => {
                    let v = g.order();
                    let mut rows = vec![
                        vec!["primal".into(), report.primal.value.to_string()],
                        vec!["dual".into(), report.dual.value.to_string()],
                        vec!["formula".into(), report.formula.as_ref().map_or(String::new(), |f| f.to_string())],
                    ];
                    for (u, x) in report.primal.x.iter().enumerate() {
                        rows.push(vec![format!("x_{}", u + 1), x.to_string()]);
                    }
                    for (u, z) in report.dual.x[..v].iter().enumerate() {
                        rows.push(vec![format!("z_{}", u + 1), z.to_string()]);
                    }
                    for (k, (a, b)) in g.edges().enumerate() {
                        rows.push(vec![format!("y_{}-{}", a + 1, b + 1), report.dual.x[v + k].to_string()]);
                    }
                    emit(&output, Rendered::Csv(vec!["name".into(), "value".into()], rows))
                }
            }
        }
        Command::Ex { source, n, e, compare, output } => {
            let g = load_graph(&source)?;
            let (ex, best) = if compare {
                let c = compare_with_three_class_hosts(n, e, &g)?;
                (c.ex.clone(), Some(c))
            } else {
                (exhaustive_ex(n, e, &g)?, None)
            };
            match output.format.unwrap_or(Format::Csv) {
                Format::Json => {
                    let mut v = json!({
                        "n": ex.n,
                        "e": ex.e,
                        "maximum": ex.maximum.to_string(),
                        "maximiser": ex.maximiser.to_edge_list(),
                        "maximiser_graph6": write_graph6(&ex.maximiser),
                        "hosts_checked": ex.hosts_checked,
                    });
                    if let Some(c) = &best {
                        v["best_host_copies"] = Value::String(c.best_host_copies.to_string());
                        v["best_host_sizes"] = json!([c.best_host_sizes.0, c.best_host_sizes.1, c.best_host_sizes.2]);
                        v["ratio"] = if c.ratio.is_finite() { json!(c.ratio) } else { Value::String("inf".into()) };
                    }
                    emit(&output, Rendered::Json(v))
                }
                Format::Csv => {
                    let mut header: Vec<String> = ["n", "e", "maximum", "maximiser"].map(String::from).to_vec();
                    let mut row = vec![ex.n.to_string(), ex.e.to_string(), ex.maximum.to_string(), write_graph6(&ex.maximiser)];
                    if let Some(c) = &best {
                        header.extend(["best_host_copies", "y", "r", "b", "ratio"].map(String::from));
                        row.extend([
                            c.best_host_copies.to_string(),
                            c.best_host_sizes.0.to_string(),
                            c.best_host_sizes.1.to_string(),
                            c.best_host_sizes.2.to_string(),
                            if c.ratio.is_finite() { num(c.ratio) } else { "inf".into() },
                        ]);
                    }
                    emit(&output, Rendered::Csv(header, vec![row]))
                }
            }
        }
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}
