use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;
use std::sync::Arc;

use clap::{Args, Parser, Subcommand};

use ffdg::char_sums::all_sums;
use ffdg::embeddings::DEFAULT_ORACLE_BUDGET;
use ffdg::harness::experiment::{count_embeddings, BUDGET_ENV};
use ffdg::harness::report::format_fixed17;
use ffdg::harness::{random_set, run_experiment, ExperimentSpec, GraphSource, SetSource, Suite};
use ffdg::{
    DistanceGraph, FieldElement, FieldSpec, GraphKind, Lengths, PointSet, Space, SphereIndex,
};

#[derive(Parser)]
#[command(
    name = "ffdg",
    version,
    about = "Character sums and distance-graph counts over F_q^d"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Describe a field; with --table, list trace and characters per element.
    Field {
        #[arg(long)]
        q: FieldSpec,
        #[arg(long)]
        table: bool,
    },
    /// Gauss, Kloosterman and Salie sums as CSV.
    Sums {
        #[arg(long)]
        q: FieldSpec,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Sphere sizes and the sigma mean check as CSV.
    Sphere {
        #[arg(long)]
        q: FieldSpec,
        #[arg(long)]
        d: usize,
        #[arg(long)]
        lambda: Option<u32>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Write a seeded Bernoulli point set.
    GenSet {
        #[arg(long)]
        q: FieldSpec,
        #[arg(long)]
        d: usize,
        #[arg(long)]
        density: f64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Count embeddings of a graph file in a set file.
    Count {
        #[arg(long)]
        graph: PathBuf,
        #[arg(long)]
        set: PathBuf,
        /// Use brute-force enumeration.
        #[arg(long)]
        oracle: bool,
        #[command(flatten)]
        budget: Budget,
    },
    /// Run a verification suite and emit a JSON report.
    Verify(VerifyArgs),
}

#[derive(Args)]
struct Budget {
    /// Tuple-edge checks allowed for brute-force enumeration.
    #[arg(long, env = BUDGET_ENV, default_value_t = DEFAULT_ORACLE_BUDGET)]
    budget: u128,
}

#[derive(Args)]
struct VerifyArgs {
    #[arg(long)]
    suite: Suite,
    #[arg(long)]
    q: FieldSpec,
    #[arg(long)]
    d: usize,
    /// Graph file.
    #[arg(long, conflicts_with = "gen")]
    graph: Option<PathBuf>,
    /// Generated graph kind: path, cycle, complete or star.
    #[arg(long, requires = "n")]
    gen: Option<GraphKind>,
    #[arg(long)]
    n: Option<usize>,
    /// Length for every generated edge.
    #[arg(long, default_value_t = 1, conflicts_with = "lambda_seed")]
    lambda: u32,
    /// Draw generated edge lengths from this seed instead.
    #[arg(long)]
    lambda_seed: Option<u64>,
    /// Point-set file; the default is the whole space.
    #[arg(long, conflicts_with = "density")]
    set: Option<PathBuf>,
    #[arg(long)]
    density: Option<f64>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long)]
    oracle: bool,
    #[command(flatten)]
    budget: Budget,
    #[arg(long)]
    out: Option<PathBuf>,
}

fn emit(out: &Option<PathBuf>, text: &str) -> ffdg::Result<()> {
    match out {
        Some(path) => std::fs::write(path, text)?,
        None => std::io::stdout().write_all(text.as_bytes())?,
    }
    Ok(())
}

fn field_info(spec: &FieldSpec, table: bool) -> ffdg::Result<String> {
    let f = spec.build()?;
    let mut s = format!(
        "q = {}\np = {}\nk = {}\nspec = {}\ngenerator = {}\n",
        f.order(),
        f.characteristic(),
        f.degree(),
        f.spec(),
        f.generator()
    );
    if let Some(m) = f.modulus() {
        let coeffs: Vec<String> = m.iter().map(u32::to_string).collect();
        s += &format!("modulus = {}\n", coeffs.join(","));
    }
    if table {
        s += "element,coefficients,trace,chi_re,chi_im,eta\n";
        for a in f.elements() {
            let coeffs: Vec<String> = f.coefficients(a).iter().map(u32::to_string).collect();
            let chi = f.additive_char(a);
            let eta = f
                .quadratic_char(a)
                .map(|e| e.to_string())
                .unwrap_or_default();
            s += &format!(
                "{a},{},{},{},{},{eta}\n",
                coeffs.join(" "),
                f.trace(a),
                format_fixed17(chi.re),
                format_fixed17(chi.im)
            );
        }
    }
    Ok(s)
}

fn opt_str<T: ToString>(v: Option<T>) -> String {
    v.map(|x| x.to_string()).unwrap_or_default()
}

fn sums_csv(spec: &FieldSpec) -> ffdg::Result<String> {
    let f = spec.build()?;
    let mut s = String::from("kind,a,b,value_re,value_im,magnitude,bound,pass\n");
    for r in all_sums(&f) {
        s += &format!(
            "{},{},{},{},{},{},{},{}\n",
            r.kind.name(),
            opt_str(r.a),
            opt_str(r.b),
            format_fixed17(r.value_re),
            format_fixed17(r.value_im),
            format_fixed17(r.magnitude),
            r.bound.map(format_fixed17).unwrap_or_default(),
            r.passes()
        );
    }
    Ok(s)
}

fn sphere_csv(spec: &FieldSpec, d: usize, lambda: Option<u32>) -> ffdg::Result<(String, bool)> {
    let space = Space::new(Arc::new(spec.build()?), d)?;
    let spheres = SphereIndex::build(&space)?;
    let lambdas: Vec<FieldElement> = match lambda {
        Some(l) => vec![space.field().element(l as u64)?],
        None => space.field().nonzero_elements().collect(),
    };
    let mut s = String::from("lambda,size,mean,margin,bound,pass\n");
    let mut ok = true;
    for l in lambdas {
        let c = spheres.sigma_check(l)?;
        ok &= c.holds;
        s += &format!(
            "{},{},{},{},{},{}\n",
            c.lambda,
            c.size,
            format_fixed17(c.mean),
            format_fixed17(c.margin),
            format_fixed17(c.bound),
            c.holds
        );
    }
    Ok((s, ok))
}

fn count(graph: &PathBuf, set: &PathBuf, oracle: bool, budget: u128) -> ffdg::Result<String> {
    let g = DistanceGraph::parse(&std::fs::read_to_string(graph)?)?;
    let a = PointSet::parse(&std::fs::read_to_string(set)?)?;
    let spheres = if oracle {
        None
    } else {
        Some(SphereIndex::build(a.space())?)
    };
    let c = match &spheres {
        Some(sp) => count_embeddings(&a, &g, sp, None)?,
        None => ffdg::count_bruteforce(&a, &g, budget)?,
    };
    Ok(format!(
        "C = {}\nC* = {}\nN = {} ({})\nN* = {} ({})\n",
        c.c,
        c.c_star,
        c.normalized(),
        format_fixed17(c.normalized_f64()),
        c.normalized_star(),
        format_fixed17(c.normalized_star_f64())
    ))
}

fn verify(args: VerifyArgs) -> ffdg::Result<bool> {
    let mut spec = ExperimentSpec::new(args.q, args.d, args.suite);
    spec.graph = match (args.graph, args.gen) {
        (Some(path), _) => Some(GraphSource::File(path)),
        (None, Some(kind)) => {
            let q = spec.field.build()?.order();
            let lengths = match args.lambda_seed {
                Some(seed) => Lengths::Random { seed, q },
                None => Lengths::Uniform(args.lambda),
            };
            Some(GraphSource::Generator {
                kind,
                n: args.n.expect("clap requires --n with --gen"),
                lengths,
            })
        }
        (None, None) => None,
    };
    spec.set = match (args.set, args.density) {
        (Some(path), _) => SetSource::File(path),
        (None, Some(density)) => SetSource::Bernoulli {
            density,
            seed: args.seed,
        },
        (None, None) => SetSource::Full,
    };
    spec.oracle = args.oracle;
    spec.budget = args.budget.budget;
    spec.out = args.out;
    let report = run_experiment(&spec)?;
    if spec.out.is_none() {
        std::io::stdout().write_all(report.to_json()?.as_bytes())?;
    }
    let s = &report.summary;
    eprintln!(
        "checked {} held {} not_applicable {} failed {}",
        s.checked, s.held, s.not_applicable, s.failed
    );
    Ok(report.passed())
}

fn run(cli: Cli) -> ffdg::Result<bool> {
    match cli.command {
        Command::Field { q, table } => {
            print!("{}", field_info(&q, table)?);
            Ok(true)
        }
        Command::Sums { q, out } => {
            let csv = sums_csv(&q)?;
            emit(&out, &csv)?;
            Ok(true)
        }
        Command::Sphere { q, d, lambda, out } => {
            let (csv, ok) = sphere_csv(&q, d, lambda)?;
            emit(&out, &csv)?;
            Ok(ok)
        }
        Command::GenSet {
            q,
            d,
            density,
            seed,
            out,
        } => {
            let space = Space::new(Arc::new(q.build()?), d)?;
            emit(&out, &random_set(&space, density, seed)?.to_text())?;
            Ok(true)
        }
        Command::Count {
            graph,
            set,
            oracle,
            budget,
        } => {
            print!("{}", count(&graph, &set, oracle, budget.budget)?);
            Ok(true)
        }
        Command::Verify(args) => verify(args),
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
