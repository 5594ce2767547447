use std::fs;
use std::net::SocketAddr;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use cognate::eval::foreign::ForeignRegistry;
use cognate::lang::ConstructorSig;
use cognate::query::QueryOp;
use cognate::session::{self, Dataset};
use cognate::surface;
use cognate_cli::bench::{run_suite, Suite};
use cognate_cli::store::{self, Restrict};
use cognate_cli::{select, Failure};

#[derive(Parser)]
#[command(
    name = "cognate",
    version,
    about = "Evaluate programs and query their dependence graphs"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Evaluate a program and save the session.
    Eval {
        program: PathBuf,
        /// Dataset files, as `name=path` or in declaration order.
        datasets: Vec<String>,
        /// Session directory to write.
        #[arg(long, default_value = "session")]
        out: PathBuf,
        /// Print the desugared core program and stop.
        #[arg(long)]
        dump_core: bool,
        #[arg(long)]
        step_limit: Option<u64>,
    },
    /// Run a query against a saved session.
    Query {
        session: PathBuf,
        /// demands, demandedBy, suffices, dualPreimage, linkedInputs or linkedOutputs.
        op: QueryOp,
        /// Paths such as `data[3].co2e` or `out[1]`, or vertex ids.
        #[arg(required = true)]
        selection: Vec<String>,
        #[arg(long, value_enum, default_value_t = Restrict::Both)]
        restrict: Restrict,
    },
    /// Time evaluation and queries over a benchmark suite.
    Bench {
        suite: PathBuf,
        #[arg(long)]
        runs: Option<usize>,
        /// Print the report as JSON.
        #[arg(long)]
        json: bool,
    },
    /// Print a saved session's graph in DOT.
    ExportDot { session: PathBuf },
    /// Serve sessions over HTTP.
    Serve {
        #[arg(long, default_value_t = 8080)]
        port: u16,
        #[arg(long, default_value_t = 64)]
        session_cap: usize,
        #[arg(long)]
        host: Option<std::net::IpAddr>,
    },
}

fn datasets_for(declared: &[String], args: &[String]) -> Result<Vec<Dataset>, Failure> {
    let mut out = Vec::new();
    let mut positional = declared.iter();
    for arg in args {
        let (name, path) = match arg.split_once('=') {
            Some((n, p)) => (n.to_string(), p),
            None => match positional.next() {
                Some(n) => (n.clone(), arg.as_str()),
                None => return Err(Failure::error(format!("no dataset left for `{arg}`"))),
            },
        };
        let path = Path::new(path);
        if !path.is_file() {
            return Err(Failure::missing(format!(
                "{}: no such file",
                path.display()
            )));
        }
        out.push(Dataset::load(name, path).map_err(Failure::error)?);
    }
    Ok(out)
}

fn eval(
    program: &Path,
    args: &[String],
    out: &Path,
    dump_core: bool,
    step_limit: Option<u64>,
) -> Result<(), Failure> {
    let src = fs::read_to_string(program)
        .map_err(|e| Failure::missing(format!("{}: {e}", program.display())))?;
    let at = |e: &dyn std::fmt::Display| Failure::error(format!("{}:{e}", program.display()));
    let parsed = surface::parse(&src).map_err(|e| at(&e))?;
    if dump_core {
        let core = surface::desugar(&parsed, &ConstructorSig::default()).map_err(|e| at(&e))?;
        println!("{core}");
        return Ok(());
    }
    let declared: Vec<String> = parsed.datasets().iter().map(|n| n.to_string()).collect();
    let datasets = datasets_for(&declared, args)?;
    let registry = ForeignRegistry::primitives();
    let s = session::run_source_with(&src, &datasets, &registry, step_limit).map_err(|e| at(&e))?;
    store::save(out, &program.display().to_string(), &s)?;
    println!("{}", s.plain());
    println!(
        "{} vertices, {} edges -> {}",
        s.graph.vertex_count(),
        s.graph.edge_count(),
        out.display()
    );
    Ok(())
}

fn query(dir: &Path, op: QueryOp, specs: &[String], restrict: Restrict) -> Result<(), Failure> {
    let s = store::load(dir)?;
    let sel = select::resolve(&s, specs, op.domain())?;
    let out = s.query(op, &sel, restrict)?;
    print!("{}", s.listing(&out));
    Ok(())
}

fn bench(suite: &Path, runs: Option<usize>, json: bool) -> Result<(), Failure> {
    let (suite, base) = Suite::load(suite)?;
    let report = run_suite(&suite, &base, runs);
    if json {
        println!(
            "{}",
            serde_json::to_string_pretty(&report).map_err(Failure::error)?
        );
    } else {
        println!("{report}");
    }
    Ok(())
}

fn export_dot(dir: &Path) -> Result<(), Failure> {
    let s = store::load(dir)?;
    print!("{}", s.graph.to_dot(|a| s.labels.get(&a).cloned()));
    Ok(())
}

fn serve(port: u16, session_cap: usize, host: Option<std::net::IpAddr>) -> Result<(), Failure> {
    let host = host.unwrap_or(std::net::Ipv4Addr::LOCALHOST.into());
    let config = cognate_service::Config {
        session_cap,
        ..Default::default()
    };
    let rt = tokio::runtime::Runtime::new().map_err(Failure::error)?;
    rt.block_on(cognate_service::serve(SocketAddr::new(host, port), config))
        .map_err(Failure::error)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let r = match &cli.command {
        Command::Eval {
            program,
            datasets,
            out,
            dump_core,
            step_limit,
        } => eval(program, datasets, out, *dump_core, *step_limit),
        Command::Query {
            session,
            op,
            selection,
            restrict,
        } => query(session, *op, selection, *restrict),
        Command::Bench { suite, runs, json } => bench(suite, *runs, *json),
        Command::ExportDot { session } => export_dot(session),
        Command::Serve {
            port,
            session_cap,
            host,
        } => serve(*port, *session_cap, *host),
    };
    match r {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.code as u8)
        }
    }
}
