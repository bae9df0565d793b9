//! `hexad`: search, verify and classify transitive 3-(v,{4,6},1) designs.
//!
//! Exit codes: 0 ok, 1 negative verdict, 2 bad input, 3 capped run.

mod io;
mod search;

use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{anyhow, Result};
use clap::{Parser, Subcommand, ValueEnum};
use hexad_core::catalog::{self, HexadTag};
use hexad_core::design::{tetrad_count, verify_twbd};
use hexad_core::km::HexadFilter;
use hexad_core::{automorphism_group, canonical_certificate, classify, Classification, Error, PermGroup, SetSystem};
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde_json::json;

use crate::io::{input, read_design, read_group, DesignFile, InputError};

#[derive(Parser)]
#[command(name = "hexad", version, about = "Transitive homogeneous 3-(v,{4,6},1) designs")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Search for designs with a prescribed transitive group.
    Search {
        /// Group file: a `degree v` line and one generator per line.
        #[arg(long, conflicts_with = "catalog_group")]
        group: Option<PathBuf>,
        /// Built-in group or catalog entry id whose base group to use.
        #[arg(long)]
        catalog_group: Option<String>,
        /// Number of points; without a group, the cyclic group of this degree.
        #[arg(long)]
        v: Option<usize>,
        /// Only extend candidates whose hexads form a 2-class symmetric design.
        #[arg(long)]
        two_class_only: bool,
        /// Only extend candidates with these hexad parameters, e.g. "(28,6;1,2;1,2)".
        #[arg(long, conflicts_with = "two_class_only")]
        hexad_params: Option<String>,
        /// Stop after this many designs.
        #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
        limit: Option<u64>,
        /// Stop after this many hexad candidates.
        #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
        candidates: Option<u64>,
        /// Worker threads; defaults to the available parallelism.
        #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
        jobs: Option<u64>,
        /// Output directory; JSON lines go to stdout without it.
        #[arg(long)]
        out: Option<PathBuf>,
        /// Certificate cache mapping certificates to persistent class ids.
        #[arg(long)]
        cache: Option<PathBuf>,
        /// Also write each Kramer–Mesner matrix in libexact's text format.
        #[arg(long, requires = "out")]
        libexact_format: bool,
    },
    /// Check that a design file is a homogeneous 3-(v,{4,6},1) design.
    Verify { file: PathBuf },
    /// Classify the hexads of a design (or the whole system if uniform).
    Classify { file: PathBuf },
    /// Decide whether two designs are isomorphic.
    Iso { a: PathBuf, b: PathBuf },
    /// Full automorphism group of a design.
    Aut { file: PathBuf },
    /// Canonical certificate of a design.
    Canon {
        file: PathBuf,
        /// Check the certificate against this many random relabelings.
        #[arg(long, default_value_t = 0)]
        relabel: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// The embedded catalog of published designs.
    Catalog {
        #[command(subcommand)]
        command: CatalogCommand,
    },
}

#[derive(Subcommand)]
enum CatalogCommand {
    List,
    Verify,
    Export {
        #[arg(long)]
        id: String,
        #[arg(long, value_enum, default_value_t = Format::Json)]
        format: Format,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Json,
}

fn print_json(value: serde_json::Value) {
    println!("{value}");
}

fn hexads_or_all(s: &SetSystem) -> SetSystem {
    let sizes = s.size_distribution();
    if sizes.len() > 1 && sizes.contains_key(&6) {
        s.hexads()
    } else {
        s.clone()
    }
}

fn classification_json(c: &Classification) -> serde_json::Value {
    json!({
        "label": c.label(),
        "replication": c.replication,
        "two_class": c.two_class.map(|p| json!({
            "v": p.v, "k": p.k, "lambda1": p.lambda1, "lambda2": p.lambda2, "delta1": p.delta1, "delta2": p.delta2,
        })),
        "symmetric_lambda": c.symmetric_lambda,
        "biplane": c.is_biplane,
        "semibiplane": c.is_semibiplane,
        "scheme": c.scheme.map(|s| json!({ "n1": s.n1, "n2": s.n2, "p1": s.p1, "p2": s.p2 })),
        "gd": c.gd.map(|g| json!({
            "type": g.kind.to_string(),
            "group_class": g.group_class,
            "group_size": g.group_size,
            "index_formula_regular": g.index_formula_regular,
        })),
    })
}

fn cmd_verify(file: PathBuf) -> Result<ExitCode> {
    let s = read_design(&file)?;
    let report = verify_twbd(&s, 3, &[4, 6], 1);
    let sizes = s.size_distribution();
    let hexads = sizes.get(&6).copied().unwrap_or(0);
    let tetrads = sizes.get(&4).copied().unwrap_or(0);
    let expected_tetrads = tetrad_count(s.v()).ok();
    let homogeneous = hexads == s.v() && Some(tetrads) == expected_tetrads && s.tetrads().is_tactical();
    let ok = report.holds && homogeneous;
    println!("v = {}, {} hexads, {} tetrads", s.v(), hexads, tetrads);
    if report.holds {
        println!("every triple lies in exactly one block");
    } else if let Some((t, n)) = &report.witness {
        println!("triple {t:?} lies in {n} blocks");
    } else if let Some(b) = &report.bad_block {
        println!("block {b:?} has a size outside {{4,6}}");
    }
    println!(
        "{}",
        if ok { "valid homogeneous 3-(v,{4,6},1) design" } else { "not a homogeneous 3-(v,{4,6},1) design" }
    );
    print_json(json!({
        "valid": ok,
        "balanced": report.holds,
        "homogeneous": homogeneous,
        "hexads": hexads,
        "tetrads": tetrads,
        "bad_block": report.bad_block,
        "witness": report.witness,
    }));
    Ok(if ok { ExitCode::SUCCESS } else { ExitCode::from(1) })
}

fn cmd_classify(file: PathBuf) -> Result<ExitCode> {
    let s = read_design(&file)?;
    let c = classify(&hexads_or_all(&s));
    if c.is_semibiplane {
        println!("semi-biplane {}", c.label());
    } else {
        println!("{}", c.label());
    }
    if let Some(sc) = &c.scheme {
        println!("association scheme: n1={} n2={} P1={:?} P2={:?}", sc.n1, sc.n2, sc.p1, sc.p2);
    }
    if let Some(g) = &c.gd {
        println!("{}", g.kind);
    }
    print_json(classification_json(&c));
    Ok(ExitCode::SUCCESS)
}

fn cmd_iso(a: PathBuf, b: PathBuf) -> Result<ExitCode> {
    let (x, y) = (read_design(&a)?, read_design(&b)?);
    let iso = hexad_core::are_isomorphic(&x, &y);
    println!("{}", if iso { "isomorphic" } else { "non-isomorphic" });
    print_json(json!({ "isomorphic": iso }));
    Ok(if iso { ExitCode::SUCCESS } else { ExitCode::from(1) })
}

fn cmd_aut(file: PathBuf) -> Result<ExitCode> {
    let s = read_design(&file)?;
    let (g, order) = automorphism_group(&s)?;
    println!("order {order}");
    let gens: Vec<String> = g.generators().iter().map(|p| p.to_cycle_string()).collect();
    for p in &gens {
        println!("{p}");
    }
    print_json(json!({ "order": order, "transitive": g.is_transitive(), "generators": gens }));
    Ok(ExitCode::SUCCESS)
}

fn cmd_canon(file: PathBuf, relabel: usize, seed: u64) -> Result<ExitCode> {
    let s = read_design(&file)?;
    let cert = canonical_certificate(&s);
    println!("{cert}");
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut stable = true;
    for _ in 0..relabel {
        let mut p: Vec<u32> = (0..s.v() as u32).collect();
        p.shuffle(&mut rng);
        let blocks = s.blocks().iter().map(|b| b.iter().map(|&x| p[x as usize]).collect()).collect();
        stable &= canonical_certificate(&SetSystem::new(s.v(), blocks)?) == cert;
    }
    if relabel > 0 {
        println!(
            "{} random relabelings: {}",
            relabel,
            if stable { "certificate unchanged" } else { "certificate changed" }
        );
    }
    print_json(json!({ "certificate": cert.to_hex(), "relabelings": relabel, "stable": stable }));
    Ok(if stable { ExitCode::SUCCESS } else { ExitCode::from(1) })
}

fn cmd_catalog(cmd: CatalogCommand) -> Result<ExitCode> {
    match cmd {
        CatalogCommand::List => {
            for id in catalog::list() {
                let e = catalog::get(id)?;
                println!("{:<7} v={:<3} {}", id, e.v, e.hexads);
            }
            Ok(ExitCode::SUCCESS)
        }
        CatalogCommand::Verify => {
            let reports = catalog::verify_all();
            println!(
                "{:<7} {:>3} {:>8} {:>6} {:>7} {:<16} {:>6} {:>8} result",
                "id", "v", "balanced", "hexads", "tetrads", "hexad class", "order", "expected"
            );
            let mut failed = 0;
            for r in &reports {
                let pass = r.passed();
                failed += !pass as usize;
                println!(
                    "{:<7} {:>3} {:>8} {:>6} {:>7} {:<16} {:>6} {:>8} {}",
                    r.id,
                    r.v,
                    r.balance.holds,
                    r.hexad_count,
                    r.tetrad_count,
                    r.hexads.to_string(),
                    r.full_order.map_or("-".into(), |o| o.to_string()),
                    r.expected_order.map_or("-".into(), |o| o.to_string()),
                    if pass { "pass" } else { "FAIL" },
                );
                if let Some((t, n)) = &r.balance.witness {
                    println!("        triple {t:?} lies in {n} blocks");
                }
                if let Some(e) = &r.error {
                    println!("        error: {e}");
                }
            }
            println!("{}/{} entries pass", reports.len() - failed, reports.len());
            Ok(if failed == 0 { ExitCode::SUCCESS } else { ExitCode::from(1) })
        }
        CatalogCommand::Export { id, format: Format::Json } => {
            let e = input(catalog::get(&id).map_err(anyhow::Error::from))?;
            let d = e.materialize()?;
            let file = DesignFile::with_orbits(&d, e.baseblocks.clone(), &e.group);
            println!("{}", serde_json::to_string(&file)?);
            Ok(ExitCode::SUCCESS)
        }
    }
}

fn resolve_group(group: Option<PathBuf>, catalog_group: Option<String>, v: Option<usize>) -> Result<PermGroup> {
    let g = match (group, catalog_group, v) {
        (Some(p), _, _) => read_group(&p)?,
        (None, Some(name), _) => input(catalog::named_group(&name).map_err(anyhow::Error::from))?,
        (None, None, Some(v)) => PermGroup::cyclic(v),
        (None, None, None) => return input(Err(anyhow!("one of --group, --catalog-group or --v is required"))),
    };
    if let Some(v) = v {
        if g.degree() != v {
            return input(Err(anyhow!("group has degree {} but --v is {v}", g.degree())));
        }
    }
    Ok(g)
}

fn parse_filter(two_class_only: bool, params: Option<String>) -> Result<HexadFilter> {
    if let Some(p) = params {
        return match input(HexadTag::parse(&p).map_err(anyhow::Error::from))? {
            HexadTag::TwoClass(tc) => Ok(HexadFilter::Params(tc)),
            other => input(Err(anyhow!("--hexad-params expects (v,k;l1,l2;d1,d2), got {other}"))),
        };
    }
    Ok(if two_class_only { HexadFilter::TwoClass } else { HexadFilter::Any })
}

fn run(cli: Cli) -> Result<ExitCode> {
    match cli.command {
        Command::Search {
            group,
            catalog_group,
            v,
            two_class_only,
            hexad_params,
            limit,
            candidates,
            jobs,
            out,
            cache,
            libexact_format,
        } => {
            let group = resolve_group(group, catalog_group, v)?;
            let filter = parse_filter(two_class_only, hexad_params)?;
            let jobs = jobs.map_or_else(|| std::thread::available_parallelism().map_or(1, |n| n.get()), |j| j as usize);
            let args = search::SearchArgs {
                group,
                filter,
                limit,
                candidates,
                jobs,
                out: out.clone(),
                cache,
                libexact: libexact_format,
            };
            let pool = rayon::ThreadPoolBuilder::new().num_threads(jobs).build()?;
            let summary = pool.install(|| search::run(&args))?;
            let line = format!(
                "candidates {} solutions {} classes {}{}",
                summary.candidates,
                summary.solutions,
                summary.classes,
                if summary.capped { " (capped)" } else { "" }
            );
            if out.is_some() {
                println!("{line}");
            } else {
                eprintln!("{line}");
            }
            Ok(if summary.capped { ExitCode::from(3) } else { ExitCode::SUCCESS })
        }
        Command::Verify { file } => cmd_verify(file),
        Command::Classify { file } => cmd_classify(file),
        Command::Iso { a, b } => cmd_iso(a, b),
        Command::Aut { file } => cmd_aut(file),
        Command::Canon { file, relabel, seed } => cmd_canon(file, relabel, seed),
        Command::Catalog { command } => cmd_catalog(command),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            let input_error = e.downcast_ref::<InputError>().is_some()
                || matches!(e.downcast_ref::<Error>(), Some(Error::InadmissibleDegree(_) | Error::NotTransitive));
            ExitCode::from(if input_error { 2 } else { 1 })
        }
    }
}
