use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use rauzy_core::diagram::{DiagramMode, Family, RauzyDiagram, DEFAULT_VERTEX_BUDGET};
use rauzy_core::families::FamilyChoice;
use rauzy_core::linalg::DEFAULT_PRECISION;
use rauzy_core::loops::{enumerate_loops, systole_search, DEFAULT_LOOP_BUDGET};
use rauzy_core::perm::parse_moves;
use rauzy_core::suites::{families_report, parse_range, run_suite, Report, Suite, SuiteOptions, DEFAULT_MAX_LEN};
use rauzy_core::suspension::veech_pa_from_loop;
use rauzy_core::Error;

#[derive(Parser)]
#[command(name = "rauzy", version, about = "Rauzy diagrams, loops and certified dilatations")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone)]
struct DiagramArgs {
    /// Base permutation family: hyp or marked.
    #[arg(long)]
    family: Family,
    #[arg(long)]
    n: u32,
    /// Build the labeled diagram instead of the reduced one.
    #[arg(long)]
    labeled: bool,
    /// Vertex budget.
    #[arg(long, default_value_t = DEFAULT_VERTEX_BUDGET)]
    budget: usize,
}

impl DiagramArgs {
    fn build(&self) -> rauzy_core::Result<RauzyDiagram> {
        let mode = if self.labeled { DiagramMode::Labeled } else { DiagramMode::Reduced };
        RauzyDiagram::build_with_budget(&self.family.base(self.n)?, mode, self.budget)
    }
}

#[derive(Subcommand)]
enum Command {
    /// Build a diagram and export it.
    Diagram {
        #[command(flatten)]
        diagram: DiagramArgs,
        /// `dot` or `json` selects the format; anything else is a destination.
        #[arg(long, default_value = "json")]
        out: String,
        /// Destination when `--out` names a format.
        #[arg(long, default_value = "-")]
        output: String,
    },
    /// Stream the closed loops of a diagram as NDJSON.
    Loops {
        #[command(flatten)]
        diagram: DiagramArgs,
        #[arg(long, default_value_t = DEFAULT_MAX_LEN)]
        max_len: usize,
        #[arg(long)]
        primitive_only: bool,
        /// Most loops enumerated before giving up.
        #[arg(long, default_value_t = DEFAULT_LOOP_BUDGET)]
        loop_budget: usize,
        #[arg(long, default_value = "-")]
        out: String,
    },
    /// Certificate for one closed loop.
    Dilatation {
        #[command(flatten)]
        diagram: DiagramArgs,
        #[arg(long)]
        moves: String,
        /// Start vertex; the base permutation by default.
        #[arg(long)]
        base: Option<usize>,
        #[arg(long, default_value_t = DEFAULT_PRECISION)]
        precision: f64,
        #[arg(long, default_value = "-")]
        out: String,
    },
    /// Least dilatation over the primitive loops up to a length.
    Systole {
        #[command(flatten)]
        diagram: DiagramArgs,
        #[arg(long, default_value_t = DEFAULT_MAX_LEN)]
        max_len: usize,
        #[arg(long, default_value_t = DEFAULT_PRECISION)]
        precision: f64,
        #[arg(long, default_value = "-")]
        out: String,
    },
    /// Identities and bounds of the explicit families.
    Families {
        /// A1, A2 or B.
        #[arg(long)]
        which: FamilyChoice,
        #[arg(long, value_parser = range)]
        g_range: (u32, u32),
        #[arg(long, default_value_t = DEFAULT_PRECISION)]
        precision: f64,
        #[arg(long, default_value = "-")]
        out: String,
    },
    /// Run a verification suite.
    Verify {
        #[arg(long)]
        suite: Suite,
        #[arg(long, value_parser = range)]
        n: Option<(u32, u32)>,
        #[arg(long, value_parser = range)]
        g_range: Option<(u32, u32)>,
        #[arg(long, default_value_t = DEFAULT_PRECISION)]
        precision: f64,
        #[arg(long, default_value_t = DEFAULT_MAX_LEN)]
        max_len: usize,
        #[arg(long, default_value_t = DEFAULT_VERTEX_BUDGET)]
        budget: usize,
        #[arg(long, default_value = "-")]
        out: String,
    },
}

fn range(s: &str) -> Result<(u32, u32), String> {
    parse_range(s).map_err(|e| e.to_string())
}

enum Failure {
    /// A mathematical assertion did not hold.
    Assertion(String),
    /// Bad input or exhausted resources.
    Usage(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::CertificationFailed(_)
            | Error::RotationMismatch(_)
            | Error::Commutation { .. }
            | Error::NegativeEntry(..)
            | Error::IllConditioned(..)
            | Error::SelfIntersection => Failure::Assertion(e.to_string()),
            _ => Failure::Usage(e.to_string()),
        }
    }
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Self {
        Failure::Usage(e.to_string())
    }
}

fn sink(dest: &str) -> io::Result<Box<dyn Write>> {
    Ok(if dest == "-" {
        Box::new(BufWriter::new(io::stdout().lock()))
    } else {
        Box::new(BufWriter::new(File::create(PathBuf::from(dest))?))
    })
}

fn write_json<T: serde::Serialize>(dest: &str, value: &T) -> Result<(), Failure> {
    let mut w = sink(dest)?;
    serde_json::to_writer_pretty(&mut w, value).map_err(|e| Failure::Usage(e.to_string()))?;
    writeln!(w)?;
    w.flush()?;
    Ok(())
}

fn report(dest: &str, r: &Report) -> Result<(), Failure> {
    write_json(dest, r)?;
    eprintln!("{}: {}/{} cases pass", r.suite, r.summary.passed, r.summary.total);
    for c in r.failures() {
        eprintln!("FAIL {}", c.name);
    }
    if r.pass() {
        Ok(())
    } else {
        Err(Failure::Assertion(format!("{} failing case(s)", r.summary.failed)))
    }
}

fn run(cli: Cli) -> Result<(), Failure> {
    match cli.command {
        Command::Diagram { diagram, out, output } => {
            let d = diagram.build()?;
            let (format, dest) = match out.as_str() {
                "dot" | "json" => (out.as_str(), output.as_str()),
                other => ("json", other),
            };
            if format == "dot" {
                let mut w = sink(dest)?;
                w.write_all(d.export_dot().as_bytes())?;
                w.flush()?;
            } else {
                write_json(dest, &d.to_json())?;
            }
            eprintln!("{} vertices", d.len());
        }
        Command::Loops { diagram, max_len, primitive_only, loop_budget, out } => {
            let d = diagram.build()?;
            let loops = enumerate_loops(&d, max_len, loop_budget)?;
            let mut w = sink(&out)?;
            let mut count = 0;
            for lp in loops.iter().filter(|l| l.primitive || !primitive_only) {
                serde_json::to_writer(&mut w, &lp.to_wire()).map_err(|e| Failure::Usage(e.to_string()))?;
                writeln!(w)?;
                count += 1;
            }
            w.flush()?;
            eprintln!("{count} loops");
        }
        Command::Dilatation { diagram, moves, base, precision, out } => {
            let d = diagram.build()?;
            let moves = parse_moves(&moves)?;
            let start = base.unwrap_or(d.base());
            if start >= d.len() {
                return Err(Failure::Usage(format!("vertex {start} outside a diagram of {}", d.len())));
            }
            if d.follow(start, &moves) != start {
                return Err(Failure::Usage("the moves do not close up at the start vertex".into()));
            }
            let cert = veech_pa_from_loop(&d, start, &moves, precision)?;
            write_json(&out, &cert)?;
            eprintln!("dilatation {}", cert.dilatation.value);
        }
        Command::Systole { diagram, max_len, precision, out } => {
            let d = diagram.build()?;
            let r = systole_search(&d, max_len, precision)?;
            write_json(&out, &r)?;
            eprintln!("minimum {} over {} primitive loops", r.primitive_min.root.value, r.primitive_loops);
        }
        Command::Families { which, g_range, precision, out } => {
            report(&out, &families_report(which, g_range.0, g_range.1, precision)?)?;
        }
        Command::Verify { suite, n, g_range, precision, max_len, budget, out } => {
            let opts = SuiteOptions { n_range: n, g_range, precision, max_len, vertex_budget: budget };
            report(&out, &run_suite(suite, &opts)?)?;
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    if let Some(threads) = std::env::var("RAUZY_THREADS").ok().and_then(|v| v.parse::<usize>().ok()) {
        let _ = rayon::ThreadPoolBuilder::new().num_threads(threads.max(1)).build_global();
    }
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Assertion(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}
