//! `grpkit` command-line interface.
//!
//! Exit codes: 0 success, 1 a check or scenario failed, 2 usage or input
//! error, 3 a computation hit a resource limit.

use std::fmt::Display;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use grpkit::arith::{primes_up_to, split_prime, FieldSpec};
use grpkit::intlinalg::{mapping_torus_h1, parse_matrix};
use grpkit::low_index::{low_index_subgroups_with, LowIndexOptions, SubgroupClassRecord, DEFAULT_NODE_BUDGET};
use grpkit::permgrp::DEFAULT_ELEMENT_BUDGET;
use grpkit::quotients::{count_epimorphisms, count_homomorphisms, Target};
use grpkit::rewrite::{reidemeister_schreier, tietze_simplify, DEFAULT_TIETZE_EFFORT};
use grpkit::scenarios::{run_scenario, Verdict, SCENARIOS};
use grpkit::verify::{run_manifest, VerifyError, VerifyOptions};
use grpkit::{abelian_invariants, catalog, parse_presentation, CatalogKey, Presentation};

#[derive(Parser)]
#[command(name = "grpkit", version, about = "Computations with finitely presented groups")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Abelian quotient invariants, e.g. `[ 5, 55, 0 ]`.
    Aqi { file: String },
    /// Number of conjugacy classes of subgroups with index in [from, to].
    LowIndex {
        file: String,
        #[arg(long)]
        from: usize,
        #[arg(long)]
        to: usize,
        /// Also list each class as `ordinal: index N size S`.
        #[arg(long)]
        class_sizes: bool,
        #[arg(long, env = "GRPKIT_NODE_BUDGET", default_value_t = DEFAULT_NODE_BUDGET)]
        node_budget: u64,
    },
    /// Presentation of a class representative by Reidemeister-Schreier.
    Rewrite {
        file: String,
        #[arg(long)]
        index: usize,
        /// 1-based class ordinal in canonical order.
        #[arg(long)]
        class: usize,
        #[arg(long)]
        simplify: bool,
        #[arg(long, env = "GRPKIT_NODE_BUDGET", default_value_t = DEFAULT_NODE_BUDGET)]
        node_budget: u64,
    },
    /// Permutation action on the cosets of a class representative.
    CosetAction {
        file: String,
        #[arg(long)]
        index: usize,
        #[arg(long)]
        class: usize,
        /// Print the order of the image.
        #[arg(long)]
        order: bool,
        /// Print whether the image is simple.
        #[arg(long)]
        simple: bool,
        #[arg(long, env = "GRPKIT_NODE_BUDGET", default_value_t = DEFAULT_NODE_BUDGET)]
        node_budget: u64,
    },
    /// Prime splitting, one line per prime: `p: (e,f) (e,f) ...`.
    SplitPrimes {
        /// `Qomega`, `Kweeks` or a polynomial such as `x^3 - x^2 + 1`.
        #[arg(long)]
        field: String,
        #[arg(long)]
        upto: u64,
    },
    /// Epimorphisms onto a built-in target, up to automorphisms of the target.
    CountEpi {
        file: String,
        /// A4, A5, S3, PSL27, Z2, Z3 or Z5.
        #[arg(long)]
        target: String,
        /// Order of Aut(target); computed when omitted (order <= 200 only).
        #[arg(long)]
        aut_order: Option<u64>,
    },
    /// First homology of the mapping torus of M^D.
    MappingTorus {
        /// `phi_s`, `A`, `A6` or a JSON literal such as `[[2,1],[1,1]]`.
        #[arg(long)]
        matrix: String,
        #[arg(long)]
        power: u64,
    },
    /// Run a verification manifest.
    Verify {
        manifest: PathBuf,
        #[arg(long, default_value_t = 0)]
        jobs: usize,
        #[arg(long, default_value_t = 1_000_000)]
        max_cosets: usize,
        #[arg(long, env = "GRPKIT_NODE_BUDGET", default_value_t = DEFAULT_NODE_BUDGET)]
        node_budget: u64,
        /// Omit per-check wall times.
        #[arg(long)]
        no_timing: bool,
    },
    /// Named scenarios.
    Scenario {
        #[command(subcommand)]
        action: ScenarioAction,
    },
}

#[derive(Subcommand)]
enum ScenarioAction {
    /// Run one scenario by name, or `all`.
    Run { name: String },
    /// List scenario names.
    List,
}

/// A failed command and its exit code.
struct Failure {
    code: u8,
    message: String,
}

fn input(e: impl Display) -> Failure {
    Failure {
        code: 2,
        message: e.to_string(),
    }
}

fn resource(e: impl Display) -> Failure {
    Failure {
        code: 3,
        message: e.to_string(),
    }
}

/// A `.grp` file, or a catalog key when no such file exists.
fn load(file: &str) -> Result<Presentation, Failure> {
    let path = Path::new(file);
    if !path.exists() {
        if let Ok(key) = file.parse::<CatalogKey>() {
            return Ok(catalog(key).clone());
        }
    }
    let text = fs::read_to_string(path).map_err(|e| input(format!("{file}: {e}")))?;
    parse_presentation(&text).map_err(|e| input(format!("{file}: {e}")))
}

fn options(node_budget: u64) -> LowIndexOptions {
    LowIndexOptions {
        node_budget,
        ..LowIndexOptions::default()
    }
}

fn class(p: &Presentation, index: usize, ordinal: usize, node_budget: u64) -> Result<SubgroupClassRecord, Failure> {
    let classes = low_index_subgroups_with(p, index, index, &options(node_budget)).map_err(resource)?;
    if ordinal == 0 || ordinal > classes.len() {
        return Err(input(format!(
            "class {ordinal} out of range: {} classes at index {index}",
            classes.len()
        )));
    }
    Ok(classes[ordinal - 1].clone())
}

fn run(cli: Cli) -> Result<u8, Failure> {
    match cli.command {
        Command::Aqi { file } => println!("{}", abelian_invariants(&load(&file)?)),
        Command::LowIndex {
            file,
            from,
            to,
            class_sizes,
            node_budget,
        } => {
            let p = load(&file)?;
            let classes = low_index_subgroups_with(&p, from, to, &options(node_budget)).map_err(|e| match e {
                grpkit::low_index::LowIndexError::InvalidRange { .. } => input(e),
                _ => resource(e),
            })?;
            println!("{}", classes.len());
            if class_sizes {
                for (i, c) in classes.iter().enumerate() {
                    println!("{}: index {} size {}", i + 1, c.index, c.class_size);
                }
            }
        }
        Command::Rewrite {
            file,
            index,
            class: k,
            simplify,
            node_budget,
        } => {
            let p = load(&file)?;
            let c = class(&p, index, k, node_budget)?;
            let mut h = reidemeister_schreier(&p, &c.representative);
            if simplify {
                h = tietze_simplify(&h, DEFAULT_TIETZE_EFFORT);
            }
            println!("{h}");
        }
        Command::CosetAction {
            file,
            index,
            class: k,
            order,
            simple,
            node_budget,
        } => {
            let p = load(&file)?;
            let image = class(&p, index, k, node_budget)?.core_image();
            for (name, g) in p.generators().iter().zip(image.generators()) {
                println!("{name} -> {g}");
            }
            if order {
                println!("order: {}", image.order());
            }
            if simple {
                println!("simple: {}", image.is_simple(DEFAULT_ELEMENT_BUDGET).map_err(resource)?);
            }
        }
        Command::SplitPrimes { field, upto } => {
            let f: FieldSpec = field.parse().map_err(input)?;
            for p in primes_up_to(upto) {
                println!("{}", split_prime(&f, p).map_err(input)?);
            }
        }
        Command::CountEpi { file, target, aut_order } => {
            let p = load(&file)?;
            let q = target.parse::<Target>().map_err(input)?.group();
            let homs = count_homomorphisms(&p, &q).map_err(resource)?;
            let e = count_epimorphisms(&p, &q, aut_order).map_err(resource)?;
            println!("homomorphisms: {homs}");
            println!("epimorphisms: {}", e.total);
            println!("aut order: {}", e.aut_order);
            println!("classes: {}", e.classes);
        }
        Command::MappingTorus { matrix, power } => {
            let m = parse_matrix(&matrix).map_err(input)?;
            println!("{}", mapping_torus_h1(&m, power).map_err(input)?);
        }
        Command::Verify {
            manifest,
            jobs,
            max_cosets,
            node_budget,
            no_timing,
        } => {
            let opts = VerifyOptions {
                jobs,
                max_cosets,
                low_index: options(node_budget),
            };
            let report = run_manifest(&manifest, &opts).map_err(|e| match e {
                VerifyError::Io { .. } | VerifyError::Parse(_) | VerifyError::Unresolved { .. } => input(e),
            })?;
            print!("{}", report.render(!no_timing));
            return Ok(report.exit_code() as u8);
        }
        Command::Scenario { action } => match action {
            ScenarioAction::List => {
                for (name, _) in SCENARIOS {
                    println!("{name}");
                }
            }
            ScenarioAction::Run { name } => {
                let names: Vec<&str> = if name == "all" {
                    SCENARIOS.iter().map(|(n, _)| *n).collect()
                } else {
                    vec![name.as_str()]
                };
                let mut failed = false;
                for n in names {
                    let r = run_scenario(n).map_err(|e| match e {
                        grpkit::scenarios::ScenarioError::Unknown(_) => input(e),
                        _ => resource(e),
                    })?;
                    print!("{r}");
                    failed |= r.verdict == Verdict::Fail;
                }
                return Ok(u8::from(failed));
            }
        },
    }
    Ok(0)
}

fn main() -> ExitCode {
    env_logger::init();
    match run(Cli::parse()) {
        Ok(code) => ExitCode::from(code),
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}
