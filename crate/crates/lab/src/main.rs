use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use clap::error::ErrorKind;
use clap::{CommandFactory, FromArgMatches, Parser, Subcommand};
use meyers_core::mesh::{parse_polygon, regularity_report, triangulate, write_mesh};
use meyers_core::Exec;
use meyers_lab::{experiments, output_path, summary, summary_path, Config, Experiment, LabError, Table};

/// Numerical experiments for P1 Galerkin solutions of divergence-form
/// equations and for elliptic operators on graphs.
#[derive(Parser)]
#[command(name = "meyers-lab", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run the experiment described by a `key = value` config file, write
    /// its CSV and a summary next to it.
    Run {
        config: PathBuf,
        /// run every loop on the calling thread
        #[arg(long)]
        sequential: bool,
    },
    /// Triangulate a convex polygon (one `x y` vertex per line) and print the
    /// mesh; the regularity report goes to stderr.
    Mesh {
        polygon: PathBuf,
        #[arg(long)]
        h: f64,
    },
    /// Recompute the verdicts of saved CSV files.
    Report {
        #[arg(required = true)]
        csv: Vec<PathBuf>,
    },
}

const EXIT_FAIL: u8 = 2;

fn schemas() -> String {
    let mut s = String::from(
        "Exit status: 0 when every verdict passes, 2 when some verdict fails or a cell aborts, 1 on errors.\n\nCSV schemas (one per experiment):\n",
    );
    for e in Experiment::ALL {
        s.push_str(&format!("  {:<19} {}\n", e.name(), experiments::header(e)));
    }
    s.push_str(
        "\nresolvent_sweep rows are kind=bound (one per λ) or kind=scaling (deviation only).\n\
         kernel_bounds rows are kind=pair, increment (x2 set, k = K(x)-K(x2)) or oracle (k = mass).\n\
         embeddings rows are kind=sobolev, holder, lp, grad or holder_p1.\n",
    );
    s
}

fn main() -> ExitCode {
    let parsed = Cli::command()
        .after_long_help(schemas())
        .try_get_matches()
        .and_then(|m| Cli::from_arg_matches(&m));
    let cli = match parsed {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            // usage errors are execution errors; 2 is reserved for failed verdicts
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => ExitCode::SUCCESS,
                _ => ExitCode::FAILURE,
            };
        }
    };
    let result = match cli.command {
        Command::Run { config, sequential } => run(&config, sequential),
        Command::Mesh { polygon, h } => mesh(&polygon, h),
        Command::Report { csv } => report(&csv),
    };
    match result {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(EXIT_FAIL),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::FAILURE
        }
    }
}

fn write(path: &Path, text: &str) -> Result<(), LabError> {
    std::fs::write(path, text).map_err(|e| LabError::Io(format!("cannot write {}: {e}", path.display())))
}

fn run(config: &Path, sequential: bool) -> Result<bool, LabError> {
    let cfg = Config::load(config)?;
    let exec = if sequential { Exec::Sequential } else { Exec::Parallel };
    let start = Instant::now();
    let out = meyers_lab::run(&cfg, exec)?;
    let csv = output_path(&cfg, config);
    write(&csv, &out.table.to_csv())?;
    let text = out.summary();
    write(&summary_path(&csv), &text)?;
    print!("{text}");
    eprintln!(
        "{} rows written to {} in {:.1} s",
        out.table.rows.len(),
        csv.display(),
        start.elapsed().as_secs_f64()
    );
    Ok(out.all_pass())
}

fn mesh(polygon: &Path, h: f64) -> Result<bool, LabError> {
    let text = std::fs::read_to_string(polygon)
        .map_err(|e| LabError::Io(format!("cannot read {}: {e}", polygon.display())))?;
    let poly = parse_polygon(&text)?;
    let tri = triangulate(&poly, h)?;
    let report = regularity_report(&tri);
    print!("{}", write_mesh(&tri));
    eprintln!(
        "{} vertices, {} triangles, h = {}, sigma = {}, admissible = {}",
        tri.num_vertices(),
        tri.num_triangles(),
        report.h,
        report.sigma,
        report.admissible
    );
    for v in &report.violations {
        eprintln!("violation: {v:?}");
    }
    Ok(report.admissible)
}

fn report(paths: &[PathBuf]) -> Result<bool, LabError> {
    let mut all = true;
    for p in paths {
        let text = std::fs::read_to_string(p).map_err(|e| LabError::Io(format!("cannot read {}: {e}", p.display())))?;
        let table = Table::parse(&text).map_err(|e| LabError::Csv(format!("{}: {e}", p.display())))?;
        let verdicts = experiments::verdicts(&table)?;
        all &= !verdicts.is_empty() && verdicts.iter().all(|v| v.pass);
        println!("# {}", p.display());
        print!("{}", summary(table.experiment, &verdicts, &[]));
    }
    Ok(all)
}
