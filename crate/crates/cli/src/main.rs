use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::sync::Arc;

use anyhow::{bail, Context, Result};
use clap::{Parser, Subcommand, ValueEnum};

use intervene::bench::{
    bound_curves, bounds_csv, bucket_means, parse_float_range, parse_int_range, run_battery,
    trials_csv, BatteryConfig,
};
use intervene::graph::{graph_stats, Skeleton};
use intervene::instances::{
    line_of_cliques, random_chordal, random_complete, random_tree, split_graph_instance, Instance,
};
use intervene::meek::Dag;
use intervene::oracle::{GroundTruth, Responder};
use intervene::sepsys::{build_separating_system, construction_size_bound, verify_separating};
use intervene::strategies::Strategy;

#[derive(Parser)]
#[command(name = "intervene", version, about = "Bounded-size intervention design on chordal skeletons")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run strategies over random chordal instances and write per-trial CSV.
    Bench {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        k: usize,
        /// Comma-separated strategy names.
        #[arg(long, default_value = "naive,hybrid", value_delimiter = ',')]
        strategies: Vec<Strategy>,
        /// Instances per density.
        #[arg(long, default_value_t = 10)]
        trials: usize,
        /// `start:stop:step` or a single value.
        #[arg(long, default_value = "1.0")]
        density_grid: String,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Output path; `-` for stdout.
        #[arg(long, default_value = "-")]
        out: PathBuf,
        /// Fill the wall_time_ms column (makes output run-dependent).
        #[arg(long)]
        timing: bool,
    },
    /// Write the reference bound curves over a clique-size range.
    Bounds {
        /// `lo:hi`, inclusive.
        #[arg(long)]
        chi: String,
        #[arg(long)]
        n: usize,
        #[arg(long)]
        k: usize,
        #[arg(long, default_value = "-")]
        out: PathBuf,
    },
    /// Generate a ground-truth instance as `<out>.graph` and `<out>.dag`.
    Gen {
        #[arg(long, value_enum)]
        family: Family,
        #[arg(long)]
        n: Option<usize>,
        #[arg(long, default_value_t = 1.0)]
        density: f64,
        #[arg(long)]
        chi: Option<usize>,
        #[arg(long)]
        alpha: Option<usize>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: PathBuf,
    },
    /// Build and verify an (n, k) separating system.
    Sepsys {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        k: usize,
        /// Print the sets, one per line.
        #[arg(long)]
        emit: bool,
    },
    /// Learn a stored instance with one strategy.
    Run {
        #[arg(long)]
        graph: PathBuf,
        #[arg(long)]
        orientation: PathBuf,
        #[arg(long)]
        strategy: Strategy,
        #[arg(long)]
        k: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Write the transcript here.
        #[arg(long)]
        transcript: Option<PathBuf>,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Family {
    Random,
    Complete,
    Split,
    Line,
    Tree,
}

fn write_out(path: &Path, text: &str) -> Result<()> {
    if path == Path::new("-") {
        io::stdout().write_all(text.as_bytes())?;
    } else {
        fs::write(path, text).with_context(|| format!("writing {}", path.display()))?;
    }
    Ok(())
}

fn need(v: Option<usize>, name: &str) -> Result<usize> {
    v.with_context(|| format!("--{name} is required for this family"))
}

fn generate(family: Family, n: Option<usize>, density: f64, chi: Option<usize>, alpha: Option<usize>, seed: u64) -> Result<Instance> {
    Ok(match family {
        Family::Random => random_chordal(need(n, "n")?, density, seed),
        Family::Complete => random_complete(need(n, "n")?, seed),
        Family::Tree => random_tree(need(n, "n")?, seed),
        Family::Split => split_graph_instance(need(chi, "chi")?, need(alpha, "alpha")?, seed),
        Family::Line => line_of_cliques(need(alpha, "alpha")?, need(chi, "chi")?, seed),
    })
}

fn sidecar(prefix: &Path, ext: &str) -> PathBuf {
    let mut s = prefix.as_os_str().to_owned();
    s.push(ext);
    PathBuf::from(s)
}

fn main() -> Result<()> {
    match Cli::parse().command {
        Command::Bench {
            n,
            k,
            strategies,
            trials,
            density_grid,
            seed,
            out,
            timing,
        } => {
            let config = BatteryConfig {
                n,
                k,
                densities: parse_float_range(&density_grid)?,
                trials,
                seed,
                strategies,
                timing,
            };
            let rows = run_battery(&config)?;
            write_out(&out, &trials_csv(&rows)?)?;
            for (bucket, strategy, mean, count) in bucket_means(&rows) {
                eprintln!("chi~{bucket:<4} {strategy:<9} mean {mean:7.2} over {count}");
            }
        }
        Command::Bounds { chi, n, k, out } => {
            let (lo, hi) = parse_int_range(&chi)?;
            write_out(&out, &bounds_csv(&bound_curves(lo, hi, n, k))?)?;
        }
        Command::Gen {
            family,
            n,
            density,
            chi,
            alpha,
            seed,
            out,
        } => {
            let inst = generate(family, n, density, chi, alpha, seed)?;
            let stats = graph_stats(inst.skeleton())?;
            write_out(&sidecar(&out, ".graph"), &inst.skeleton().to_edge_list())?;
            write_out(&sidecar(&out, ".dag"), &inst.dag.to_arc_list())?;
            eprintln!(
                "n={} edges={} chi={} alpha={}",
                inst.dag.n(),
                inst.skeleton().num_edges(),
                stats.chi,
                stats.alpha
            );
        }
        Command::Sepsys { n, k, emit } => {
            let s = build_separating_system(n, k)?;
            if let Err(e) = verify_separating(&s) {
                bail!("construction failed verification: {e:?}");
            }
            if emit {
                print!("{}", s.to_lines());
            }
            eprintln!(
                "n={n} k={k} sets={} bound={}",
                s.len(),
                construction_size_bound(n, k)
            );
        }
        Command::Run {
            graph,
            orientation,
            strategy,
            k,
            seed,
            transcript,
        } => {
            let text = fs::read_to_string(&graph).with_context(|| format!("reading {}", graph.display()))?;
            let skeleton = Arc::new(Skeleton::parse_edge_list(&text)?);
            let text = fs::read_to_string(&orientation)
                .with_context(|| format!("reading {}", orientation.display()))?;
            let dag = Dag::parse_arcs(skeleton.clone(), &text)?;
            let mut oracle = GroundTruth::new(dag.clone(), k);
            let result = strategy.run(skeleton, k, &mut oracle, seed)?;
            if let Some(path) = transcript {
                write_out(&path, &result.transcript.to_string())?;
            }
            println!(
                "strategy={} interventions={} node_accesses={}",
                strategy,
                result.interventions_used,
                oracle.node_accesses()
            );
            if &result.final_pdag != dag.as_pdag() {
                bail!("learned orientation differs from the ground truth");
            }
        }
    }
    Ok(())
}
