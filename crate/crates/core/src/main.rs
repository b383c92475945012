use std::fs;
use std::io::Read;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Parser, Subcommand, ValueEnum};
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use lassotree::builders::{self, Bipartition, ChildOrder};
use lassotree::child_edge_graph::ChildEdgeGraph;
use lassotree::io::report::{agrees, report_json, report_text};
use lassotree::io::{self as lio, PartialDistances};
use lassotree::oracle::{enumerate_binary_xtrees, enumerate_xtrees, Oracle, MAX_EXHAUSTIVE_LEAVES};
use lassotree::tree::parse_label_list;
use lassotree::{classify, CordSet, HeightMap, LassoKind, XTree};

#[derive(Parser)]
#[command(name = "lassotree", version, about = "Decide whether cord sets lasso rooted X-trees")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Text,
    Jsonl,
}

#[derive(Clone, Copy, ValueEnum)]
enum Kind {
    Equidistant,
    Weak,
    Topological,
}

impl From<Kind> for LassoKind {
    fn from(k: Kind) -> Self {
        match k {
            Kind::Equidistant => LassoKind::Equidistant,
            Kind::Weak => LassoKind::Weak,
            Kind::Topological => LassoKind::Topological,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum BuildKind {
    Equidistant,
    Weak,
    Topological,
    Circular,
    Bipartition,
}

#[derive(clap::Args)]
struct OracleOpts {
    /// Rivals to sample when the leaf set is too large for full enumeration.
    #[arg(long, default_value_t = 200)]
    samples: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

#[derive(Subcommand)]
enum Command {
    /// Classify a cord set against a tree.
    Classify {
        #[arg(long)]
        tree: PathBuf,
        #[arg(long)]
        cords: PathBuf,
        /// Also run the definition-level checks; exit 1 on disagreement.
        #[arg(long)]
        oracle: bool,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
        #[command(flatten)]
        oracle_opts: OracleOpts,
    },
    /// Print a cord set of the requested kind for a tree.
    Build {
        #[arg(long)]
        tree: PathBuf,
        #[arg(long, value_enum)]
        kind: BuildKind,
        /// Labels of one block, for `--kind bipartition`.
        #[arg(long)]
        partition: Option<PathBuf>,
        /// Shuffles child order (circular) or picks a block (bipartition).
        #[arg(long)]
        seed: Option<u64>,
    },
    /// List every X-tree on the given leaves, one Newick string per line.
    Enumerate {
        #[arg(long, value_delimiter = ',', required = true)]
        leaves: Vec<String>,
        #[arg(long)]
        binary: bool,
        #[arg(long)]
        count_only: bool,
    },
    /// Print two cord-isometric weighted trees violating the lasso property.
    Witness {
        #[arg(long)]
        tree: PathBuf,
        #[arg(long)]
        cords: PathBuf,
        #[arg(long, value_enum)]
        kind: Kind,
        #[command(flatten)]
        oracle_opts: OracleOpts,
    },
    /// Distances of a weighted tree on the given cords.
    Distances {
        #[arg(long)]
        tree: PathBuf,
        #[arg(long)]
        cords: PathBuf,
    },
    /// Child-edge graphs in Graphviz format.
    Graph {
        #[arg(long)]
        tree: PathBuf,
        #[arg(long)]
        cords: PathBuf,
    },
    /// A uniformly random cord set of the given size.
    Sample {
        #[arg(long, value_delimiter = ',', required = true)]
        leaves: Vec<String>,
        #[arg(long)]
        count: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
}

fn read_input(path: &Path) -> Result<String> {
    if path == Path::new("-") {
        let mut s = String::new();
        std::io::stdin().read_to_string(&mut s).context("reading standard input")?;
        return Ok(s);
    }
    fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))
}

fn load_tree(path: &Path) -> Result<lio::ParsedNewick> {
    lio::parse_newick(&read_input(path)?).with_context(|| format!("parsing {}", path.display()))
}

fn load_cords(path: &Path, tree: &XTree) -> Result<CordSet> {
    lio::read_cords(&read_input(path)?, Some(tree.labels())).with_context(|| format!("parsing {}", path.display()))
}

fn make_oracle(tree: &XTree, opts: &OracleOpts) -> Result<Oracle> {
    if tree.leaf_count() <= MAX_EXHAUSTIVE_LEAVES {
        Ok(Oracle::new(tree.labels())?)
    } else {
        Ok(Oracle::sampled(tree.labels(), opts.samples, opts.seed)?)
    }
}

fn run(cli: Cli) -> Result<ExitCode> {
    match cli.command {
        Command::Classify { tree, cords, oracle, format, oracle_opts } => {
            let tree = load_tree(&tree)?.tree;
            let cords = load_cords(&cords, &tree)?;
            let report = classify(&tree, &cords)?;
            let oracle_report =
                if oracle { Some(make_oracle(&tree, &oracle_opts)?.check(&tree, &cords)?) } else { None };
            match format {
                Format::Text => print!("{}", report_text(&tree, &cords, &report, oracle_report.as_ref())),
                Format::Jsonl => println!("{}", report_json(&tree, &cords, &report, oracle_report.as_ref())),
            }
            if let Some(o) = &oracle_report {
                if !agrees(&report, o) {
                    eprintln!("error: graph characterization and oracle disagree");
                    return Ok(ExitCode::from(1));
                }
            }
        }
        Command::Build { tree, kind, partition, seed } => {
            let tree = load_tree(&tree)?.tree;
            let cords = match kind {
                BuildKind::Equidistant => builders::min_equidistant_lasso(&tree)?,
                BuildKind::Weak => builders::min_weak_lasso(&tree)?,
                BuildKind::Topological => builders::min_topological_lasso(&tree)?,
                BuildKind::Circular => {
                    let order = seed.map_or(ChildOrder::Canonical, ChildOrder::Shuffled);
                    builders::circular_lasso(&builders::circular_order(&tree, order))?
                }
                BuildKind::Bipartition => {
                    let bp = match partition {
                        Some(path) => {
                            let text = read_input(&path)?;
                            let body: Vec<&str> = text.lines().map(|l| l.split('#').next().unwrap_or("")).collect();
                            let side = parse_label_list(&body.join(" "))?;
                            Bipartition::from_side(tree.labels(), &side)?
                        }
                        None => {
                            let all = Bipartition::all(tree.labels());
                            let mut rng = ChaCha8Rng::seed_from_u64(seed.unwrap_or(0));
                            all.choose(&mut rng).context("no bipartition exists")?.clone()
                        }
                    };
                    builders::bipartition_lasso(&bp)
                }
            };
            print!("{}", lio::write_cords(&cords));
        }
        Command::Enumerate { leaves, binary, count_only } => {
            let labels = parse_label_list(&leaves.join(","))?;
            let trees = if binary { enumerate_binary_xtrees(&labels)? } else { enumerate_xtrees(&labels)? };
            if count_only {
                println!("{}", trees.len());
            } else {
                for t in trees {
                    println!("{t}");
                }
            }
        }
        Command::Witness { tree, cords, kind, oracle_opts } => {
            let tree = load_tree(&tree)?.tree;
            let cords = load_cords(&cords, &tree)?;
            let oracle = make_oracle(&tree, &oracle_opts)?;
            let verdict = match LassoKind::from(kind) {
                LassoKind::Equidistant => oracle.equidistant(&tree, &cords)?,
                LassoKind::Weak => oracle.weak(&tree, &cords)?,
                LassoKind::Topological => oracle.topological(&tree, &cords)?,
            };
            match verdict.witness {
                None => println!("none"),
                Some(w) => {
                    println!("{}", lio::print_heights(&w.heights_tree));
                    println!("{}", lio::print_heights(&w.heights_rival));
                }
            }
        }
        Command::Distances { tree, cords } => {
            let parsed = load_tree(&tree)?;
            let Some(weights) = parsed.weights else {
                bail!("{} has no edge weights", tree.display());
            };
            let heights = HeightMap::from_edge_weights(&parsed.tree, &weights)?;
            let cords = load_cords(&cords, &parsed.tree)?;
            let mut table = PartialDistances::new();
            for c in &cords {
                table.insert(c.clone(), heights.leaf_distance(c.first().as_str(), c.second().as_str())?);
            }
            print!("{}", lio::write_partial_distances(&table));
        }
        Command::Graph { tree, cords } => {
            let tree = load_tree(&tree)?.tree;
            let cords = load_cords(&cords, &tree)?;
            for g in ChildEdgeGraph::build_all(&tree, &cords)?.values() {
                print!("{}", g.to_dot(&tree));
            }
        }
        Command::Sample { leaves, count, seed } => {
            let labels = parse_label_list(&leaves.join(","))?;
            print!("{}", lio::write_cords(&builders::random_cord_set(&labels, count, seed)?));
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
