//! The `gkdna` command line: construct, verify, search, example.
//!
//! Exit codes are a stable contract: 0 means success (all requested
//! checks passed), 1 means a verification failure, 2 means a usage or
//! parse error. The environment variable `GKDNA_ENUM_CAP` overrides the
//! default enumeration cap; explicit `--cap` flags win over both.
//!
//! Scientific artifacts (matrices, code files, polynomials, result JSON)
//! never contain timestamps, so repeated runs are byte-identical; the run
//! manifest written next to them carries the timestamp and content hashes.

use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use serde::Serialize;
use sha2::{Digest, Sha256};

use crate::construct::{build_generator, parse_grid_text, CoefficientGrid, GeneratorMatrix};
use crate::dnacode::{
    self, gc_subset, gcw, verify, ConstraintSet, DnaCode, VerifyReport, EXCLUSION_CONVENTION,
};
use crate::group::{dihedral_reversible, GroupSpec, ReversibleListing};
use crate::linalg::{self, DEFAULT_CAP};
use crate::search::{run_search, SearchParams};
use crate::{Error, Result};

const EXAMPLE_GRID: &str = include_str!("../fixtures/example_grid.txt");
const EXAMPLE_MATRIX: &str = include_str!("../fixtures/example_matrix.txt");
const EXAMPLE_CODE: &str = include_str!("../fixtures/example_code.txt");
const EXAMPLE_GC_SUBSET: &str = include_str!("../fixtures/example_gc_subset.txt");
const EXAMPLE_GCW: &str = "16a^8 + 224a^4b^4 + 16b^8";

/// Reversible group matrix ring codes over GF(4) and DNA code search.
#[derive(Parser)]
#[command(name = "gkdna", version, about)]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Build the block generator matrix from a coefficient grid and report
    /// its code parameters.
    Construct(ConstructArgs),
    /// Check a DNA code file against the requested constraints.
    Verify(VerifyArgs),
    /// Seeded hill-climbing search for large codes at a target distance.
    Search(SearchArgs),
    /// Write the bundled worked example and check it against the committed
    /// fixtures.
    Example(ExampleArgs),
}

#[derive(Args)]
struct GroupArgs {
    /// Cayley table file for the outer group (defaults to the dihedral
    /// group of order n).
    #[arg(long)]
    outer_group: Option<PathBuf>,
    /// Comma-separated positions of the outer index-2 subgroup.
    #[arg(long)]
    outer_subgroup: Option<String>,
    /// Position of the outer coset involution.
    #[arg(long)]
    outer_beta: Option<usize>,
    /// Cayley table file for the block group (defaults to the dihedral
    /// group of order k).
    #[arg(long)]
    block_group: Option<PathBuf>,
    /// Comma-separated positions of the block index-2 subgroup.
    #[arg(long)]
    block_subgroup: Option<String>,
    /// Position of the block coset involution.
    #[arg(long)]
    block_beta: Option<usize>,
}

#[derive(Args)]
struct ConstructArgs {
    /// Coefficient grid file: header `n k`, then n rows of k symbols.
    #[arg(long)]
    grid: PathBuf,
    #[command(flatten)]
    groups: GroupArgs,
    /// Enumeration cap in codewords.
    #[arg(long)]
    cap: Option<u64>,
    /// Worker threads for codeword scans.
    #[arg(long, default_value_t = 1)]
    workers: usize,
    /// Directory to write matrix.txt, report.json, and manifest.json.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct VerifyArgs {
    /// DNA code file, one uppercase ACGT word per line.
    #[arg(long)]
    code: PathBuf,
    /// Required minimum distance.
    #[arg(long)]
    d: usize,
    /// Constraints to check, e.g. `hd,rc,gc`.
    #[arg(long)]
    constraints: String,
    /// GC-content target; defaults to half the word length.
    #[arg(long)]
    w: Option<usize>,
    /// Print the JSON report instead of the text summary.
    #[arg(long)]
    json: bool,
}

#[derive(Args)]
struct SearchArgs {
    /// Outer group order (even).
    #[arg(long)]
    n: usize,
    /// Block group order (even).
    #[arg(long)]
    k: usize,
    /// Target minimum distance.
    #[arg(long)]
    d: usize,
    /// GC-content target; defaults to half the code length.
    #[arg(long)]
    w: Option<usize>,
    /// Constraints the code must meet, e.g. `hd,rc`.
    #[arg(long, default_value = "hd,rc")]
    constraints: String,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Maximum fitness evaluations.
    #[arg(long)]
    budget: u64,
    /// Maximum hill-climbing restarts.
    #[arg(long, default_value_t = 1000)]
    restarts: u32,
    /// Enumeration cap in codewords.
    #[arg(long)]
    cap: Option<u64>,
    /// Non-improving steps tolerated before a restart ends.
    #[arg(long, default_value_t = 200)]
    stall_window: u32,
    /// Worker threads for codeword scans; never changes the result.
    #[arg(long, default_value_t = 1)]
    workers: usize,
    /// Write the result JSON (and code dumps) here instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Dump the constructed DNA code when it has at most this many words.
    #[arg(long, default_value_t = 65536)]
    dump_cap: u64,
}

#[derive(Args)]
struct ExampleArgs {
    /// Output directory for the four artifacts and the manifest.
    #[arg(long, default_value = "example-artifacts")]
    out: PathBuf,
    /// Check existing artifacts in the output directory instead of
    /// rewriting them.
    #[arg(long)]
    verify_only: bool,
}

/// Parses arguments and runs; returns the process exit code.
pub fn run() -> i32 {
    let cli = Cli::parse();
    let outcome = match cli.cmd {
        Cmd::Construct(args) => cmd_construct(args),
        Cmd::Verify(args) => cmd_verify(args),
        Cmd::Search(args) => cmd_search(args),
        Cmd::Example(args) => cmd_example(args),
    };
    match outcome {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            2
        }
    }
}

fn env_cap() -> u64 {
    std::env::var("GKDNA_ENUM_CAP")
        .ok()
        .and_then(|s| s.trim().parse().ok())
        .unwrap_or(DEFAULT_CAP)
}

fn parse_positions(s: &str) -> Result<Vec<usize>> {
    s.split(',')
        .filter(|p| !p.trim().is_empty())
        .map(|p| {
            p.trim()
                .parse()
                .map_err(|_| Error::InvalidParameter(format!("bad position {p:?}")))
        })
        .collect()
}

fn load_listing(
    order: usize,
    file: &Option<PathBuf>,
    subgroup: &Option<String>,
    beta: &Option<usize>,
    which: &str,
) -> Result<ReversibleListing> {
    match file {
        None => {
            if order == 0 || !order.is_multiple_of(2) {
                return Err(Error::InvalidParameter(format!(
                    "{which} group order must be even and positive, got {order}"
                )));
            }
            dihedral_reversible(order / 2)
        }
        Some(path) => {
            let text = fs::read_to_string(path)?;
            let group = GroupSpec::parse(&text)?;
            if group.order() != order {
                return Err(Error::InvalidParameter(format!(
                    "{which} group has order {}, the grid expects {order}",
                    group.order()
                )));
            }
            let subgroup = subgroup.as_ref().ok_or_else(|| {
                Error::InvalidParameter(format!("--{which}-subgroup is required with --{which}-group"))
            })?;
            let beta = beta.ok_or_else(|| {
                Error::InvalidParameter(format!("--{which}-beta is required with --{which}-group"))
            })?;
            ReversibleListing::new(&group, &parse_positions(subgroup)?, beta)
        }
    }
}

#[derive(Serialize)]
struct ConstructReport {
    length: usize,
    n: usize,
    k: usize,
    rank: usize,
    codewords: String,
    min_distance: Option<usize>,
    rv_distance: Option<usize>,
    rc_distance: Option<usize>,
    gcw: Option<String>,
    enumerable: bool,
    cap: u64,
    convention: String,
}

fn cmd_construct(args: ConstructArgs) -> Result<i32> {
    let cap = args.cap.unwrap_or_else(env_cap);
    let text = fs::read_to_string(&args.grid)?;
    let (n, k, rows) = parse_grid_text(&text)?;
    let outer = load_listing(
        n,
        &args.groups.outer_group,
        &args.groups.outer_subgroup,
        &args.groups.outer_beta,
        "outer",
    )?;
    let block = load_listing(
        k,
        &args.groups.block_group,
        &args.groups.block_subgroup,
        &args.groups.block_beta,
        "block",
    )?;
    let grid = CoefficientGrid::new(outer, block, rows)?;
    let gm = build_generator(&grid);
    let code = gm.reduce();

    let report = describe_code(&gm, &code, cap, args.workers)?;
    print!("{}", gm.to_text());
    print_construct_report(&report);

    if let Some(dir) = &args.out {
        fs::create_dir_all(dir)?;
        let mut artifacts = BTreeMap::new();
        write_artifact(dir, "matrix.txt", gm.to_text().as_bytes(), &mut artifacts)?;
        write_artifact(
            dir,
            "report.json",
            serde_json::to_string_pretty(&report).expect("serializable").as_bytes(),
            &mut artifacts,
        )?;
        write_manifest(
            dir,
            "construct",
            vec![args.grid.display().to_string()],
            serde_json::json!({ "cap": cap, "workers": args.workers }),
            None,
            artifacts,
        )?;
    }
    Ok(0)
}

fn describe_code(
    gm: &GeneratorMatrix,
    code: &linalg::LinearCode,
    cap: u64,
    workers: usize,
) -> Result<ConstructReport> {
    let rank = code.rank();
    let mut report = ConstructReport {
        length: gm.length(),
        n: gm.n(),
        k: gm.k(),
        rank,
        codewords: code.size_string(),
        min_distance: None,
        rv_distance: None,
        rc_distance: None,
        gcw: None,
        enumerable: false,
        cap,
        convention: EXCLUSION_CONVENTION.to_string(),
    };
    if rank == 0 {
        report.enumerable = true;
        return Ok(report);
    }
    match dnacode::scan_linear_stats(code, cap, workers) {
        Err(Error::CapExceeded { .. }) => {}
        Err(e) => return Err(e),
        Ok(stats) => {
            report.enumerable = true;
            report.min_distance = stats.min_weight;
            // The construction yields reversal-closed codes, so the fast
            // paths apply.
            report.rv_distance = stats.min_weight;
            report.rc_distance = stats.rc_min;
            report.gcw = Some(gcw(code, cap, workers)?.to_string());
        }
    }
    Ok(report)
}

fn print_construct_report(report: &ConstructReport) {
    println!("length: {}", report.length);
    println!("rank: {}", report.rank);
    println!("codewords: {}", report.codewords);
    if report.rank == 0 {
        println!("distances: none (rank 0)");
        return;
    }
    if !report.enumerable {
        println!("distances: unverified (4^{} codewords exceeds cap {})", report.rank, report.cap);
        return;
    }
    if let Some(d) = report.min_distance {
        println!("min_distance: {d}");
    }
    if let Some(d) = report.rv_distance {
        println!("rv_distance: {d}");
    }
    if let Some(d) = report.rc_distance {
        println!("rc_distance: {d}");
    }
    if let Some(g) = &report.gcw {
        println!("gcw: {g}");
    }
    println!("convention: {}", report.convention);
}

fn cmd_verify(args: VerifyArgs) -> Result<i32> {
    let constraints: ConstraintSet = args.constraints.parse()?;
    let text = fs::read_to_string(&args.code)?;
    let code = DnaCode::parse(&text)?;
    let report = verify(&code, args.d, &constraints, args.w);
    if args.json {
        println!("{}", serde_json::to_string_pretty(&report).expect("serializable"));
    } else {
        print_verify_report(&report);
    }
    Ok(if report.all_pass { 0 } else { 1 })
}

fn print_verify_report(report: &VerifyReport) {
    println!("length: {}", report.length);
    println!("words: {}", report.size);
    println!("required d: {}", report.d);
    if let Some(w) = report.w {
        println!("required w: {w}");
    }
    println!("constraints: {}", report.constraints.join(","));
    println!("convention: {}", report.convention);
    for outcome in [&report.hd, &report.rv, &report.rc].into_iter().flatten() {
        let status = if outcome.pass { "pass" } else { "FAIL" };
        match outcome.observed_min {
            Some(min) => {
                print!("{}: {status} (min {min})", outcome.constraint.name());
                if let Some((x, y)) = &outcome.witness {
                    print!(" witness: {x} / {y}");
                }
                println!();
            }
            None => println!("{}: {status} (no admissible pairs)", outcome.constraint.name()),
        }
    }
    if let Some(gc) = &report.gc {
        if gc.pass {
            println!("GC: pass (all words at weight {})", gc.expected_w);
        } else {
            println!(
                "GC: FAIL ({} words off weight {}, e.g. {})",
                gc.violation_count,
                gc.expected_w,
                gc.violations.join(", ")
            );
        }
    }
    println!("result: {}", if report.all_pass { "PASS" } else { "FAIL" });
}

fn cmd_search(args: SearchArgs) -> Result<i32> {
    let params = SearchParams {
        n: args.n,
        k: args.k,
        target_d: args.d,
        w: args.w,
        constraints: args.constraints.parse()?,
        seed: args.seed,
        budget: args.budget,
        restarts: args.restarts,
        cap: args.cap.unwrap_or_else(env_cap),
        stall_window: args.stall_window,
    };
    let result = run_search(&params, args.workers)?;
    let json = serde_json::to_string_pretty(&result).expect("serializable");

    match &args.out {
        None => println!("{json}"),
        Some(path) => {
            let mut artifacts = BTreeMap::new();
            if let Some(parent) = path.parent().filter(|p| !p.as_os_str().is_empty()) {
                fs::create_dir_all(parent)?;
            }
            fs::write(path, format!("{json}\n"))?;
            artifacts.insert(file_name(path), sha256_hex(format!("{json}\n").as_bytes()));

            // Dump the constructed code when it is small enough to be a
            // useful file.
            if let Some(bound) = &result.bound {
                let (_, _, rows) = parse_grid_text(&result.best_grid)?;
                let outer = dihedral_reversible(params.n / 2)?;
                let block = dihedral_reversible(params.k / 2)?;
                let grid = CoefficientGrid::new(outer, block, rows)?;
                let code = build_generator(&grid).reduce();
                if let Some(size) = code.size() {
                    if size <= args.dump_cap as u128 {
                        let dna = DnaCode::from_linear(&code, params.cap)?;
                        let code_path = path.with_extension("code.txt");
                        fs::write(&code_path, dna.to_text())?;
                        artifacts
                            .insert(file_name(&code_path), sha256_hex(dna.to_text().as_bytes()));
                        if let Some(w) = bound.w {
                            let sub = gc_subset(&code, w, params.cap, args.workers)?;
                            let sub_path = path.with_extension("gc_subset.txt");
                            fs::write(&sub_path, sub.to_text())?;
                            artifacts
                                .insert(file_name(&sub_path), sha256_hex(sub.to_text().as_bytes()));
                        }
                    }
                }
            }

            let dir = path.parent().map(Path::to_path_buf).unwrap_or_else(|| PathBuf::from("."));
            let manifest_name = format!("{}.manifest.json", path.file_stem().unwrap().to_string_lossy());
            write_manifest_named(
                &dir,
                &manifest_name,
                "search",
                Vec::new(),
                serde_json::to_value(&params).expect("serializable"),
                Some(params.seed),
                artifacts,
            )?;
            eprintln!("search result written to {}", path.display());
        }
    }
    Ok(0)
}

fn cmd_example(args: ExampleArgs) -> Result<i32> {
    let expected_code = DnaCode::parse(EXAMPLE_CODE).expect("fixture parses");
    let expected_subset = DnaCode::parse(EXAMPLE_GC_SUBSET).expect("fixture parses");

    if args.verify_only {
        return example_verify_existing(&args.out, &expected_code, &expected_subset);
    }

    // Build everything from the committed grid.
    let (n, k, rows) = parse_grid_text(EXAMPLE_GRID)?;
    let outer = dihedral_reversible(n / 2)?;
    let block = dihedral_reversible(k / 2)?;
    let grid = CoefficientGrid::new(outer, block, rows)?;
    let gm = build_generator(&grid);
    let code = gm.reduce();

    let mut failures: Vec<String> = Vec::new();
    let mut check = |name: &str, ok: bool| {
        if !ok {
            failures.push(name.to_string());
        }
    };

    check("matrix", gm.to_text() == EXAMPLE_MATRIX);
    check("rank", code.rank() == 4);
    let stats = dnacode::scan_linear_stats(&code, DEFAULT_CAP, 1)?;
    check("min_distance", stats.min_weight == Some(4));
    check("rc_distance", stats.rc_min == Some(4));
    let dna = DnaCode::from_linear(&code, DEFAULT_CAP)?;
    check("code", dna == expected_code);
    let gcw_text = gcw(&code, DEFAULT_CAP, 1)?.to_string();
    check("gcw", gcw_text == EXAMPLE_GCW);
    let subset = gc_subset(&code, 4, DEFAULT_CAP, 1)?;
    check("gc_subset", subset == expected_subset && subset.len() == 224);

    if !failures.is_empty() {
        eprintln!("example self-check failed: {}", failures.join(", "));
        return Ok(1);
    }

    fs::create_dir_all(&args.out)?;
    let mut artifacts = BTreeMap::new();
    write_artifact(&args.out, "matrix.txt", gm.to_text().as_bytes(), &mut artifacts)?;
    write_artifact(&args.out, "code.txt", dna.to_text().as_bytes(), &mut artifacts)?;
    write_artifact(&args.out, "gc_subset.txt", subset.to_text().as_bytes(), &mut artifacts)?;
    write_artifact(&args.out, "gcw.txt", format!("{gcw_text}\n").as_bytes(), &mut artifacts)?;
    write_manifest(
        &args.out,
        "example",
        Vec::new(),
        serde_json::json!({ "grid": EXAMPLE_GRID }),
        None,
        artifacts,
    )?;

    // Re-read what was written: the files must parse and match.
    match example_verify_existing(&args.out, &expected_code, &expected_subset)? {
        0 => {
            println!("example artifacts written to {}", args.out.display());
            println!("all checks passed: matrix, code (256 words, d = 4), gc_subset (224 words), gcw");
            Ok(0)
        }
        other => Ok(other),
    }
}

fn example_verify_existing(
    dir: &Path,
    expected_code: &DnaCode,
    expected_subset: &DnaCode,
) -> Result<i32> {
    let mut failures: Vec<String> = Vec::new();

    let matrix_text = fs::read_to_string(dir.join("matrix.txt"))?;
    if matrix_text != EXAMPLE_MATRIX {
        failures.push("matrix.txt".into());
    }
    match DnaCode::parse(&fs::read_to_string(dir.join("code.txt"))?) {
        Ok(code) if &code == expected_code => {}
        _ => failures.push("code.txt".into()),
    }
    match DnaCode::parse(&fs::read_to_string(dir.join("gc_subset.txt"))?) {
        Ok(sub) if &sub == expected_subset => {}
        _ => failures.push("gc_subset.txt".into()),
    }
    let gcw_text = fs::read_to_string(dir.join("gcw.txt"))?;
    if gcw_text.trim() != EXAMPLE_GCW {
        failures.push("gcw.txt".into());
    }

    if failures.is_empty() {
        Ok(0)
    } else {
        eprintln!("example artifacts failed checks: {}", failures.join(", "));
        Ok(1)
    }
}

#[derive(Serialize)]
struct RunManifest {
    command: String,
    inputs: Vec<String>,
    params: serde_json::Value,
    seed: Option<u64>,
    tool_version: String,
    timestamp_unix: u64,
    /// Artifact file name -> SHA-256 of its bytes.
    artifacts: BTreeMap<String, String>,
}

fn sha256_hex(bytes: &[u8]) -> String {
    let digest = Sha256::digest(bytes);
    digest.iter().map(|b| format!("{b:02x}")).collect()
}

fn file_name(path: &Path) -> String {
    path.file_name().map(|n| n.to_string_lossy().into_owned()).unwrap_or_default()
}

fn write_artifact(
    dir: &Path,
    name: &str,
    bytes: &[u8],
    artifacts: &mut BTreeMap<String, String>,
) -> Result<()> {
    fs::write(dir.join(name), bytes)?;
    artifacts.insert(name.to_string(), sha256_hex(bytes));
    Ok(())
}

fn write_manifest(
    dir: &Path,
    command: &str,
    inputs: Vec<String>,
    params: serde_json::Value,
    seed: Option<u64>,
    artifacts: BTreeMap<String, String>,
) -> Result<()> {
    write_manifest_named(dir, "manifest.json", command, inputs, params, seed, artifacts)
}

#[allow(clippy::too_many_arguments)]
fn write_manifest_named(
    dir: &Path,
    name: &str,
    command: &str,
    inputs: Vec<String>,
    params: serde_json::Value,
    seed: Option<u64>,
    artifacts: BTreeMap<String, String>,
) -> Result<()> {
    let manifest = RunManifest {
        command: command.to_string(),
        inputs,
        params,
        seed,
        tool_version: env!("CARGO_PKG_VERSION").to_string(),
        timestamp_unix: std::time::SystemTime::now()
            .duration_since(std::time::UNIX_EPOCH)
            .map(|d| d.as_secs())
            .unwrap_or(0),
        artifacts,
    };
    fs::write(
        dir.join(name),
        format!("{}\n", serde_json::to_string_pretty(&manifest).expect("serializable")),
    )?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::DnaWord;

    #[test]
    fn fixtures_are_consistent() {
        let code = DnaCode::parse(EXAMPLE_CODE).unwrap();
        assert_eq!(code.len(), 256);
        assert_eq!(code.word_length(), 8);
        let subset = DnaCode::parse(EXAMPLE_GC_SUBSET).unwrap();
        assert_eq!(subset.len(), 224);
        for w in subset.words() {
            assert_eq!(w.gc_weight(), 4);
            assert!(code.contains(w));
        }
        // Fixture words listed include both all-A and all-T.
        assert!(code.contains(&DnaWord::parse("AAAAAAAA").unwrap()));
        assert!(code.contains(&DnaWord::parse("TTTTTTTT").unwrap()));
    }

    #[test]
    fn example_matrix_fixture_matches_the_grid() {
        let (n, k, rows) = parse_grid_text(EXAMPLE_GRID).unwrap();
        let outer = dihedral_reversible(n / 2).unwrap();
        let block = dihedral_reversible(k / 2).unwrap();
        let grid = CoefficientGrid::new(outer, block, rows).unwrap();
        assert_eq!(build_generator(&grid).to_text(), EXAMPLE_MATRIX);
    }
}
