use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, ValueEnum};

use cmhodge::cm::DEFAULT_CM_STREAM_CAP;
use cmhodge::io::canonical::to_canonical_json;
use cmhodge::io::catalog::{catalog, catalog_listing, groups_up_to};
use cmhodge::io::instance::{parse_instance_text, Degrees, Instance, InstanceSpec};
use cmhodge::io::report::{
    analyze, certificate_document, deltas_document, oracle, verify_document, AnalyzeOptions,
    OracleOptions,
};
use cmhodge::pohlmann::DEFAULT_SUBSET_CAP;
use cmhodge::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Command {
    /// Full report for the requested degrees.
    Analyze,
    /// List valid monomials.
    Deltas,
    /// Emit coverage certificates.
    Witness,
    /// Check a certificate document.
    Verify,
    /// Cross-check brute force, pruned search and the linear system.
    Oracle,
    /// List built-in groups, or print a catalog entry as instance text.
    Catalog,
}

#[derive(Debug, Parser)]
#[command(name = "cmhodge", version, about = "Hodge classes on CM abelian varieties, computed exactly")]
struct Cli {
    command: Command,
    /// Instance text file (a certificate document for `verify`).
    #[arg(long, conflicts_with = "catalog")]
    input: Option<PathBuf>,
    /// Built-in instance, e.g. `cyclic:8` or `dihedral:8,sub=0.4`.
    #[arg(long)]
    catalog: Option<String>,
    /// A degree, a comma list, or `all`.
    #[arg(long)]
    degree: Option<String>,
    /// With `deltas`: one representative per Galois orbit.
    #[arg(long)]
    orbits_only: bool,
    /// Certificate path: written by `analyze`/`witness`, read by `verify`.
    #[arg(long)]
    certify: Option<PathBuf>,
    /// Limit on subsets scanned by brute-force routes.
    #[arg(long, default_value_t = DEFAULT_SUBSET_CAP)]
    cap: u128,
    /// Worker threads; 0 uses every core.
    #[arg(long, default_value_t = 0)]
    jobs: usize,
    /// With `oracle`: check every CM-type on the embedding set.
    #[arg(long)]
    all_types: bool,
    /// With `--all-types`: largest number of conjugate pairs to stream over.
    #[arg(long, default_value_t = DEFAULT_CM_STREAM_CAP)]
    type_cap: usize,
}

fn load_spec(cli: &Cli) -> Result<InstanceSpec> {
    match (&cli.input, &cli.catalog) {
        (Some(path), _) => parse_instance_text(&std::fs::read_to_string(path)?),
        (None, Some(entry)) => catalog(entry),
        (None, None) => Err(Error::Parse {
            line: 0,
            message: "one of --input or --catalog is required".into(),
        }),
    }
}

fn degrees(cli: &Cli, instance: &Instance) -> Result<Vec<usize>> {
    let d = match &cli.degree {
        Some(text) => text
            .parse::<Degrees>()
            .map_err(|message| Error::Parse { line: 0, message })?,
        None => instance.spec.degrees.clone(),
    };
    Ok(d.resolve(instance.carrier.len()))
}

fn run(cli: &Cli) -> Result<u8> {
    if cli.command == Command::Verify {
        let path = cli.certify.as_ref().or(cli.input.as_ref()).ok_or_else(|| Error::Parse {
            line: 0,
            message: "verify needs --certify PATH or --input PATH".into(),
        })?;
        let verdict = verify_document(&std::fs::read_to_string(path)?, cli.cap)?;
        print!("{}", to_canonical_json(&verdict)?);
        return Ok(if verdict.passed { 0 } else { 3 });
    }
    if cli.command == Command::Catalog && cli.catalog.is_none() && cli.input.is_none() {
        println!("groups with a central involution, order <= 12:");
        for name in groups_up_to(12) {
            println!("  {name}");
        }
        println!("entry grammar:");
        for (form, what) in catalog_listing() {
            println!("  {form:<24} {what}");
        }
        return Ok(0);
    }

    let spec = load_spec(cli)?;
    let instance = spec.build()?;
    let ps = degrees(cli, &instance)?;
    match cli.command {
        Command::Catalog => print!("{}", instance.spec.to_text()),
        Command::Analyze => {
            let opts = AnalyzeOptions {
                degrees: ps.clone(),
                jobs: cli.jobs,
                certificates: cli.certify.is_some(),
            };
            let report = analyze(&instance, &opts)?;
            if let Some(path) = &cli.certify {
                let doc = certificate_document(&instance, &ps, cli.jobs)?;
                std::fs::write(path, doc.to_json()?)?;
            }
            print!("{}", report.to_json()?);
        }
        Command::Deltas => {
            let doc = deltas_document(&instance, &ps, cli.orbits_only, cli.jobs)?;
            print!("{}", to_canonical_json(&doc)?);
        }
        Command::Witness => {
            let text = certificate_document(&instance, &ps, cli.jobs)?.to_json()?;
            match &cli.certify {
                Some(path) => std::fs::write(path, text)?,
                None => print!("{text}"),
            }
        }
        Command::Oracle => {
            let opts = OracleOptions {
                degrees: ps,
                cap: cli.cap,
                all_types: cli.all_types,
                type_cap: cli.type_cap,
                jobs: cli.jobs,
            };
            let report = oracle(&instance, &opts)?;
            print!("{}", to_canonical_json(&report)?);
            return Ok(if report.agree { 0 } else { 3 });
        }
        Command::Verify => unreachable!(),
    }
    Ok(0)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 1 } else { 0 });
        }
    };
    match run(&cli) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("cmhodge: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
