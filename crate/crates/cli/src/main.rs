//! `gsd`: verify span diagrams, compute Maurer–Cartan residuals of
//! deformations of `Z_k`, decide the simultaneous obstruction and run the
//! acceptance battery.
//!
//! Exit codes: 0 pass, 1 a mathematical failure was found, 2 usage or
//! configuration error.

mod report;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use gsdeform::cochain::{Cochain, GridSpec, MonomialGrid};
use gsdeform::gs::{verify_diagram, APair, Chart, Diagonal, DiagramConfig, SpanDiagram};
use gsdeform::linf::mc_residual;
use gsdeform::quantize::Bivector;
use gsdeform::ratlaurent::{parse_poly_in, EpsFamily, LaurentPoly};
use gsdeform::suite;
use gsdeform::zk::{
    build_zk, simultaneous_verdict, u, undeformed_m, undeformed_phi, z, ClassicalDeformation, ZkGeometry,
    ZkQuantization,
};

use report::{CriterionLine, Failure, McReport, Output, ResidualComponent, ResidualOrder, SuiteReport, VerifyReport};

#[derive(Parser, Debug)]
#[command(name = "gsd", version, about = "Deformations of spans of commutative algebras")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Check that a span diagram is valid: legs are algebra morphisms and
    /// the multiplications are associative.
    Verify {
        #[command(flatten)]
        source: Source,
        #[command(flatten)]
        out: OutputArgs,
        /// Exponent bound of the monomial grid.
        #[arg(long, default_value_t = 3)]
        grid: i64,
    },
    /// Maurer–Cartan residuals of a deformation, order by order.
    Mc {
        #[command(flatten)]
        source: Source,
        #[command(flatten)]
        out: OutputArgs,
        /// Classical deformation `i=I[,t=POLY]`; `t` overrides the shift
        /// `t_I z^I`.
        #[arg(long)]
        classical: Option<String>,
        /// Quantization `eta=canonical` or `eta=FILE` (a bivector on U).
        #[arg(long)]
        quantize: Option<String>,
        /// Highest order of ε.
        #[arg(long, default_value_t = 2)]
        order: usize,
        /// Exponent bound of the monomial grid.
        #[arg(long, default_value_t = 2)]
        grid: i64,
    },
    /// Whether the quantization of `zu ∂_z∧∂_u` combines with the classical
    /// deformation of index `i` on `Z_k` at second order.
    Verdict {
        #[arg(long)]
        k: i64,
        #[arg(long)]
        i: i64,
        #[command(flatten)]
        out: OutputArgs,
    },
    /// Run the acceptance battery.
    Suite {
        #[arg(long, default_value_t = suite::DEFAULT_SEED)]
        seed: u64,
        /// Run a single criterion.
        #[arg(long)]
        criterion: Option<u32>,
        #[command(flatten)]
        out: OutputArgs,
    },
}

#[derive(Args, Debug)]
#[group(required = true, multiple = false)]
struct Source {
    /// The built-in diagram of `Z_k`.
    #[arg(long)]
    zk: Option<i64>,
    /// A diagram configuration file.
    #[arg(long)]
    diagram: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct OutputArgs {
    #[arg(long, value_enum, default_value_t = Format::Text)]
    format: Format,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Text,
}

/// Distinguishes bad input from library failures on valid input.
enum Failed {
    Usage(String),
    Library(gsdeform::Error),
}

impl From<gsdeform::Error> for Failed {
    fn from(e: gsdeform::Error) -> Failed {
        Failed::Library(e)
    }
}

type Run<T> = std::result::Result<T, Failed>;

fn usage<T>(msg: impl Into<String>) -> Run<T> {
    Err(Failed::Usage(msg.into()))
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    if let Err(msg) = configure_threads() {
        eprintln!("gsd: {msg}");
        return ExitCode::from(2);
    }
    let (format, result) = match cli.command {
        Command::Verify { source, out, grid } => (out.format, verify(&source, grid)),
        Command::Mc {
            source,
            out,
            classical,
            quantize,
            order,
            grid,
        } => (out.format, mc(&source, classical.as_deref(), quantize.as_deref(), order, grid)),
        Command::Verdict { k, i, out } => (out.format, verdict(k, i)),
        Command::Suite { seed, criterion, out } => (out.format, run_suite(seed, criterion)),
    };
    match result {
        Ok(out) => {
            let text = match format {
                Format::Json => out.to_json(),
                Format::Text => out.to_text(),
            };
            print!("{text}");
            ExitCode::from(if out.passed() { 0 } else { 1 })
        }
        Err(Failed::Usage(msg)) => {
            eprintln!("gsd: {msg}");
            ExitCode::from(2)
        }
        Err(Failed::Library(e)) => {
            eprintln!("gsd: {e}");
            ExitCode::from(2)
        }
    }
}

fn configure_threads() -> Result<(), String> {
    let Ok(raw) = std::env::var("GSD_THREADS") else {
        return Ok(());
    };
    let n: usize = raw
        .trim()
        .parse()
        .ok()
        .filter(|&n| n > 0)
        .ok_or_else(|| format!("GSD_THREADS must be a positive integer, got `{raw}`"))?;
    rayon::ThreadPoolBuilder::new()
        .num_threads(n)
        .build_global()
        .map_err(|e| e.to_string())
}

fn zk_geometry(k: i64) -> Run<ZkGeometry> {
    if k < 1 {
        return usage(format!("--zk needs k ≥ 1, got {k}"));
    }
    Ok(build_zk(k)?)
}

fn load_diagram(path: &PathBuf) -> Run<SpanDiagram> {
    let text = std::fs::read_to_string(path).or_else(|e| usage(format!("cannot read {}: {e}", path.display())))?;
    let cfg = DiagramConfig::from_json(&text).or_else(|e| usage(format!("{}: {e}", path.display())))?;
    let (_, d) = cfg.build().or_else(|e| usage(format!("{}: {e}", path.display())))?;
    Ok(d)
}

fn source_name(source: &Source) -> String {
    match (&source.zk, &source.diagram) {
        (Some(k), _) => format!("Z_{k}"),
        (_, Some(p)) => p.display().to_string(),
        _ => unreachable!("clap requires one source"),
    }
}

fn verify(source: &Source, grid: i64) -> Run<Output> {
    if grid < 0 {
        return usage("--grid must be nonnegative");
    }
    let d = match (source.zk, &source.diagram) {
        (Some(k), _) => zk_geometry(k)?.span,
        (_, Some(p)) => load_diagram(p)?,
        _ => unreachable!("clap requires one source"),
    };
    let r = verify_diagram(&d, &GridSpec::full(grid))?;
    Ok(Output::Verify(VerifyReport {
        diagram: source_name(source),
        grid,
        passed: r.passed(),
        curvature_zero: r.curvature_zero,
        failures: r
            .failures
            .iter()
            .map(|f| Failure {
                identity: f.identity.clone(),
                inputs: f.counterexample.inputs.iter().map(|m| m.to_string()).collect(),
                left: f.counterexample.left.to_string(),
                right: f.counterexample.right.to_string(),
            })
            .collect(),
    }))
}

/// `i=I[,t=POLY]`.
fn parse_classical(g: &ZkGeometry, spec: &str, order: usize) -> Run<ClassicalDeformation> {
    let mut index = None;
    let mut shift = None;
    for part in spec.split(',') {
        match part.split_once('=') {
            Some(("i", v)) => {
                index = Some(v.trim().parse::<i64>().or_else(|_| usage(format!("bad index `{v}`")))?);
            }
            Some(("t", v)) => {
                let universe = g.a_w.universe();
                shift = Some(parse_poly_in(v, &universe).or_else(|e| usage(format!("bad shift `{v}`: {e}")))?);
            }
            _ => return usage(format!("--classical expects i=I[,t=POLY], got `{spec}`")),
        }
    }
    let Some(i) = index else {
        return usage("--classical needs i=I");
    };
    if !(1..g.k).contains(&i) {
        return usage(format!("--classical needs 1 ≤ i ≤ k - 1, got i = {i} for k = {}", g.k));
    }
    let cd = match shift {
        None => ClassicalDeformation::single(g.k, i, order),
        Some(s) => ClassicalDeformation::with_shift(g.k, s, order),
    };
    cd.or_else(|e| usage(e.to_string()))
}

/// `eta=canonical` or `eta=FILE`.
fn parse_quantize(g: &ZkGeometry, spec: &str) -> Run<ZkQuantization> {
    let Some(("eta", value)) = spec.split_once('=') else {
        return usage(format!("--quantize expects eta=canonical|FILE, got `{spec}`"));
    };
    if value == "canonical" {
        return Ok(ZkQuantization::canonical(g)?);
    }
    let text = std::fs::read_to_string(value).or_else(|e| usage(format!("cannot read {value}: {e}")))?;
    let eta = Bivector::from_config(&text, &[z(), u()]).or_else(|e| usage(format!("{value}: {e}")))?;
    let f_u: LaurentPoly = eta.entry(0, 1);
    let poisson = g
        .poisson_structure(&f_u)
        .or_else(|e| usage(format!("{value}: {f_u} does not define a bivector on Z_{}: {e}", g.k)))?;
    Ok(ZkQuantization::new(g, &poisson)?)
}

/// Largest number of nonzero values listed per residual component.
const TABLE_LIMIT: usize = 64;

fn component(name: &str, c: &Cochain, grid: i64) -> Run<ResidualComponent> {
    let mg = MonomialGrid::for_sources(c.sources(), grid);
    let mut table = Vec::new();
    let mut nonzero = 0usize;
    for idx in 0..mg.len() {
        let ins: Vec<LaurentPoly> = mg.tuple(idx).into_iter().map(LaurentPoly::monomial).collect();
        let val = c.evaluate(&ins)?;
        if val.is_zero() {
            continue;
        }
        nonzero += 1;
        if table.len() < TABLE_LIMIT {
            table.push(report::TableRow {
                inputs: ins.iter().map(|p| p.to_string()).collect(),
                value: val.to_string(),
            });
        }
    }
    Ok(ResidualComponent {
        component: name.to_string(),
        zero: nonzero == 0,
        nonzero,
        table,
    })
}

fn residual_tables(
    d: &SpanDiagram,
    mt: &EpsFamily<Diagonal>,
    pt: &EpsFamily<APair>,
    order: usize,
    grid: i64,
) -> Run<Vec<ResidualOrder>> {
    let mut out = Vec::new();
    for n in 0..=order {
        let r = mc_residual(d, mt, pt, n)?;
        let mut components = Vec::new();
        for (name, chart) in [("g.U", Chart::U), ("g.V", Chart::V), ("g.W", Chart::W)] {
            components.push(component(name, r.g.get(chart), grid)?);
        }
        for (name, chart) in [("a.U", Chart::U), ("a.V", Chart::V)] {
            components.push(component(name, r.a.get(chart), grid)?);
        }
        out.push(ResidualOrder {
            order: n,
            zero: components.iter().all(|c| c.zero),
            components,
        });
    }
    Ok(out)
}

fn mc(source: &Source, classical: Option<&str>, quantize: Option<&str>, order: usize, grid: i64) -> Run<Output> {
    if grid < 0 {
        return usage("--grid must be nonnegative");
    }
    let (d, mt, pt) = match (source.zk, &source.diagram) {
        (Some(k), _) => {
            let g = zk_geometry(k)?;
            if quantize.is_some() && order > 2 {
                return usage("the quantization is computed through order 2; use --order ≤ 2");
            }
            let mt = match quantize {
                Some(q) => parse_quantize(&g, q)?.m_family(order)?,
                None => undeformed_m(&g, order),
            };
            let pt = match classical {
                Some(c) => parse_classical(&g, c, order)?.phi_family(&g),
                None => undeformed_phi(&g, order),
            };
            (g.span, mt, pt)
        }
        (_, Some(p)) => {
            if classical.is_some() || quantize.is_some() {
                return usage("--classical and --quantize need --zk");
            }
            let d = load_diagram(p)?;
            let mt = EpsFamily::from_fn(order, |n| {
                if n == 0 {
                    Diagonal::multiplication(&d)
                } else {
                    Diagonal::zero(&d, 2)
                }
            });
            let pt = EpsFamily::from_fn(order, |n| if n == 0 { APair::legs(&d) } else { APair::zero(&d, 1) });
            (d, mt, pt)
        }
        _ => unreachable!("clap requires one source"),
    };
    let orders = residual_tables(&d, &mt, &pt, order, grid)?;
    Ok(Output::Mc(McReport {
        diagram: source_name(source),
        classical: classical.map(str::to_string),
        quantize: quantize.map(str::to_string),
        order,
        grid,
        passed: orders.iter().all(|o| o.zero),
        orders,
    }))
}

fn verdict(k: i64, i: i64) -> Run<Output> {
    if k < 1 || !(1..k).contains(&i) {
        return usage(format!("need k ≥ 1 and 1 ≤ i ≤ k - 1, got k = {k}, i = {i}"));
    }
    Ok(Output::Verdict(Box::new(simultaneous_verdict(k, i)?)))
}

fn run_suite(seed: u64, criterion: Option<u32>) -> Run<Output> {
    let results = match criterion {
        Some(n) => match suite::run_criterion(n, seed) {
            Some(r) => vec![r],
            None => return usage(format!("no criterion {n}; expected 1 to {}", suite::CRITERIA.len())),
        },
        None => suite::run_all(seed),
    };
    let passed = results.iter().filter(|r| r.passed).count();
    Ok(Output::Suite(SuiteReport {
        seed,
        passed,
        failed: results.len() - passed,
        criteria: results
            .into_iter()
            .map(|r| CriterionLine {
                criterion: r.criterion,
                name: r.name.to_string(),
                passed: r.passed,
                detail: r.detail,
            })
            .collect(),
    }))
}
