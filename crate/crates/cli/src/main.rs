//! `ncgraph`: build group tables, scan catalogs, audit pairs and run the
//! repunit search from the command line.
//!
//! Exit status is 0 when nothing was violated, 2 when an audit found a
//! violation, and 1 on usage or I/O errors.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Parser, Subcommand};
use ncgraph::catalog::{
    audit_pair, enumerate_catalog_cached, expand_family, export_group, scan_pairs, CatalogConfig, CertificateCache,
    FamilySpec,
};
use ncgraph::cayfile::read_cay;
use ncgraph::diophantine::{goormaghtigh_search, DiophantineError};
use ncgraph::lab::{case_d_audit, centralizer_chain, CaseDBounds, Picker};

#[derive(Parser)]
#[command(name = "ncgraph", version, about = "Non-commuting graphs of finite groups")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Write the Cayley tables of a family (or one descriptor) as .cay files.
    Build {
        /// `dihedral:3..8`, `heisenberg:2..3:1`, or a descriptor like `dicyclic(4)`.
        #[arg(long)]
        family: String,
        /// A directory, or a `.cay` file when the family has one member.
        #[arg(long)]
        out: PathBuf,
        #[arg(long, default_value_t = 256)]
        max_order: usize,
    },
    /// Enumerate a catalog, scan all pairs and write a JSON report.
    Scan {
        /// JSON catalog configuration; the default catalog when omitted.
        #[arg(long)]
        config: Option<PathBuf>,
        #[arg(long)]
        report: PathBuf,
        /// Directory for cached canonical certificates.
        #[arg(long)]
        cache: Option<PathBuf>,
    },
    /// Compare the non-commuting graphs of two .cay tables and audit the pair.
    Audit {
        #[arg(long)]
        a: PathBuf,
        #[arg(long)]
        b: PathBuf,
    },
    /// Equal repunits in two bases up to the given caps.
    Goormaghtigh {
        #[arg(long)]
        max_base: u64,
        #[arg(long)]
        max_exp: u32,
        /// Print JSON instead of `x y m n value` lines.
        #[arg(long)]
        json: bool,
    },
    /// Centralizer chain of a .cay table, ending in an AC-group.
    Chain {
        #[arg(long)]
        group: PathBuf,
        /// Choose elements at random from this seed instead of the smallest.
        #[arg(long)]
        seed: Option<u64>,
    },
    /// Bounded parameter scan for cross-prime pairs of class equations.
    CaseD {
        #[arg(long, default_value_t = 7)]
        max_prime: u64,
        #[arg(long, default_value_t = 8)]
        max_exp: u32,
        #[arg(long, default_value_t = 50)]
        max_cofactor: u64,
    },
}

enum Status {
    Clean,
    Violation,
}

fn print_json(value: &impl serde::Serialize) -> Result<()> {
    println!("{}", serde_json::to_string_pretty(value)?);
    Ok(())
}

fn build(family: &str, out: &Path, max_order: usize) -> Result<Status> {
    let spec: FamilySpec = family.parse()?;
    let members = expand_family(&spec, max_order)?;
    if members.is_empty() {
        bail!("family {family:?} has no members of order <= {max_order}");
    }
    let single_file = out.extension().is_some_and(|e| e == "cay");
    if single_file && members.len() > 1 {
        bail!("{family:?} has {} members; pass a directory to --out", members.len());
    }
    if !single_file {
        fs::create_dir_all(out).with_context(|| format!("creating {}", out.display()))?;
    }
    for d in members {
        let path = if single_file { out.to_path_buf() } else { out.join(format!("{d}.cay")) };
        let g = export_group(&d, &path, max_order)?;
        println!("{}\t{}\t{}", d, g.order(), path.display());
    }
    Ok(Status::Clean)
}

fn scan(config: Option<&Path>, report: &Path, cache: Option<&Path>) -> Result<Status> {
    let config = match config {
        Some(p) => CatalogConfig::load(p)?,
        None => CatalogConfig::default(),
    };
    let cache = cache.map(CertificateCache::open).transpose()?;
    let entries = enumerate_catalog_cached(&config, cache.as_ref())?;
    let result = scan_pairs(&config, entries)?;
    fs::write(report, result.to_json()).with_context(|| format!("writing {}", report.display()))?;
    let s = &result.summary;
    println!(
        "entries {}  classes {}  non-trivial {}  pairs {}  theorem classes {}  violations {}",
        s.entries,
        s.classes,
        s.nontrivial_classes,
        s.pairs_audited,
        s.theorem_1_2_classes,
        s.theorem_1_2_violations + s.lemma_violations + s.case_a_failures
    );
    if let Some(c) = &cache {
        let st = c.stats();
        eprintln!("cache: {} hits, {} misses, {} spot checks", st.hits, st.misses, st.spot_checks);
    }
    Ok(if result.has_violation() { Status::Violation } else { Status::Clean })
}

fn run(cli: Cli) -> Result<Status> {
    match cli.command {
        Command::Build { family, out, max_order } => build(&family, &out, max_order),
        Command::Scan { config, report, cache } => scan(config.as_deref(), &report, cache.as_deref()),
        Command::Audit { a, b } => {
            let report = audit_pair(&a, &b)?;
            print_json(&report)?;
            Ok(if report.has_violation() { Status::Violation } else { Status::Clean })
        }
        Command::Goormaghtigh { max_base, max_exp, json } => match goormaghtigh_search(max_base, max_exp) {
            Ok(solutions) => {
                if json {
                    print_json(&solutions)?;
                } else {
                    for s in &solutions {
                        println!("{} {} {} {} {}", s.x, s.y, s.m, s.n, s.value);
                    }
                }
                Ok(Status::Clean)
            }
            Err(e @ DiophantineError::UniquenessViolated { .. }) => {
                eprintln!("violation: {e}");
                Ok(Status::Violation)
            }
            Err(e) => Err(e.into()),
        },
        Command::Chain { group, seed } => {
            let g = read_cay(&group)?;
            let picker = seed.map_or(Picker::Smallest, Picker::Seeded);
            print_json(&centralizer_chain(&g, picker)?)?;
            Ok(Status::Clean)
        }
        Command::CaseD { max_prime, max_exp, max_cofactor } => {
            let cert = case_d_audit(CaseDBounds { max_prime, max_exponent: max_exp, max_cofactor, ..Default::default() })?;
            print_json(&cert)?;
            Ok(if cert.is_empty() { Status::Clean } else { Status::Violation })
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(1) } else { ExitCode::SUCCESS };
        }
    };
    match run(cli) {
        Ok(Status::Clean) => ExitCode::SUCCESS,
        Ok(Status::Violation) => ExitCode::from(2),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
    }
}
