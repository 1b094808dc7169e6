//! Command-line front end: `analyze` (existing matrices), `mutate` (the
//! mini-language pipeline), and `demo` (built-in worked example with a
//! self-check).
//!
//! All artifacts land under the `--out` directory and are byte-stable
//! across runs; diagnostics go to stderr and the exit code is 0 or 1.

use std::collections::BTreeSet;
use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, ensure, Context, Result};
use clap::{Parser, Subcommand, ValueEnum};

use crate::ingest::{
    load_matrix_csv, load_results_dir, sidecar_manifest_path, write_manifest_csv, write_matrix_csv,
};
use crate::matrix::{KillMatrix, MutantId};
use crate::minilang::harness::{parse_test_suite, record_tests, run_kill_matrix};
use crate::minilang::interp::DEFAULT_STEP_LIMIT;
use crate::minilang::mutate::{
    apply_edit, generate_mutants, parse_operator_set, MutationOperator,
};
use crate::minilang::parser::parse_program;
use crate::minilang::printer::print_program;
use crate::minilang::demo::demo_matrix;
use crate::report::{build_report, render_dmsg_dot, render_report_csv, render_summary};
use crate::subsumption::{build_dmsg, filter_redundant, group_mutants, Dmsg, GroupId};

#[derive(Parser)]
#[command(
    name = "mutsub",
    version,
    about = "Kill-matrix analysis: mutant subsumption graphs, redundant-mutant filtering, and a mini-language mutation harness"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Analyze a kill matrix and write report.csv, dmsg.dot, and summary.txt
    Analyze(AnalyzeArgs),
    /// Mutate a program, run its tests into a kill matrix, then analyze it
    Mutate(MutateArgs),
    /// Run the built-in worked example and self-check its group structure
    Demo(DemoArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    /// Kill-matrix CSV (with optional sidecar manifest)
    Matrix,
    /// Directory of per-mutant test results
    Results,
    /// Mini-language source; mutants are generated and executed
    Minilang,
}

#[derive(clap::Args)]
struct AnalyzeArgs {
    /// Matrix CSV, results directory, or program source (see --format)
    #[arg(long)]
    input: PathBuf,
    /// How to interpret --input
    #[arg(long, value_enum, default_value_t = Format::Matrix)]
    format: Format,
    /// Test-suite file; required with --format minilang
    #[arg(long)]
    tests: Option<PathBuf>,
    /// Comma-separated operator tags, e.g. AOR,ROR (minilang only; default all)
    #[arg(long)]
    operators: Option<String>,
    /// Statement budget per execution (minilang only)
    #[arg(long)]
    step_limit: Option<u64>,
    /// Output directory for all artifacts
    #[arg(long)]
    out: PathBuf,
    /// Do not write dmsg.dot
    #[arg(long)]
    no_graph: bool,
    /// Do not write report.csv
    #[arg(long)]
    no_csv: bool,
}

#[derive(clap::Args)]
struct MutateArgs {
    /// Program source file
    #[arg(long)]
    input: PathBuf,
    /// Test-suite file: one `<id>,<name=value;...>` row per test
    #[arg(long)]
    tests: PathBuf,
    /// Comma-separated operator tags, e.g. AOR,ROR (default all)
    #[arg(long)]
    operators: Option<String>,
    /// Statement budget per execution
    #[arg(long, default_value_t = DEFAULT_STEP_LIMIT)]
    step_limit: u64,
    /// Output directory for all artifacts
    #[arg(long)]
    out: PathBuf,
    /// Do not write dmsg.dot
    #[arg(long)]
    no_graph: bool,
    /// Do not write report.csv
    #[arg(long)]
    no_csv: bool,
}

#[derive(clap::Args)]
struct DemoArgs {
    /// Output directory for the demo artifacts
    #[arg(long, default_value = "demo")]
    out: PathBuf,
}

/// Which artifacts to emit; summary.txt is unconditional.
#[derive(Debug, Clone, Copy)]
struct EmitFlags {
    csv: bool,
    graph: bool,
}

pub fn run() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(err) => {
            // Help and version requests are successes; everything else is a
            // usage error reported on stderr.
            let code = if err.use_stderr() {
                ExitCode::FAILURE
            } else {
                ExitCode::SUCCESS
            };
            let _ = err.print();
            return code;
        }
    };
    let result = match cli.command {
        Command::Analyze(args) => cmd_analyze(args),
        Command::Mutate(args) => cmd_mutate(args),
        Command::Demo(args) => cmd_demo(args),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            eprintln!("error: {err:#}");
            ExitCode::FAILURE
        }
    }
}

fn cmd_analyze(args: AnalyzeArgs) -> Result<()> {
    let emit = EmitFlags {
        csv: !args.no_csv,
        graph: !args.no_graph,
    };
    match args.format {
        Format::Minilang => {
            let tests = args
                .tests
                .context("--format minilang requires --tests")?;
            let summary = mutate_pipeline(
                &args.input,
                &tests,
                args.operators.as_deref(),
                args.step_limit.unwrap_or(DEFAULT_STEP_LIMIT),
                &args.out,
                emit,
            )?;
            print!("{summary}");
            Ok(())
        }
        Format::Matrix | Format::Results => {
            ensure!(
                args.tests.is_none(),
                "--tests only applies to --format minilang"
            );
            ensure!(
                args.operators.is_none(),
                "--operators only applies to --format minilang"
            );
            ensure!(
                args.step_limit.is_none(),
                "--step-limit only applies to --format minilang"
            );
            let matrix = match args.format {
                Format::Matrix => load_matrix_csv(&args.input)?,
                Format::Results => load_results_dir(&args.input)?,
                Format::Minilang => unreachable!("handled above"),
            };
            ensure!(
                !matrix.mutants().is_empty(),
                "no mutants in {}",
                args.input.display()
            );
            let summary = analyze_matrix(&matrix, &args.out, emit)?;
            print!("{summary}");
            Ok(())
        }
    }
}

fn cmd_mutate(args: MutateArgs) -> Result<()> {
    let emit = EmitFlags {
        csv: !args.no_csv,
        graph: !args.no_graph,
    };
    let summary = mutate_pipeline(
        &args.input,
        &args.tests,
        args.operators.as_deref(),
        args.step_limit,
        &args.out,
        emit,
    )?;
    print!("{summary}");
    Ok(())
}

fn cmd_demo(args: DemoArgs) -> Result<()> {
    let matrix = demo_matrix();
    let dmsg = build_dmsg(group_mutants(&matrix)).expect("demo groups are valid by construction");
    let (check_output, ok) = check_demo_structure(&matrix, &dmsg, &expected_demo_structure());
    print!("{check_output}");
    if !ok {
        bail!("demo self-check failed");
    }
    let summary = emit_artifacts(
        &matrix,
        &dmsg,
        &args.out,
        EmitFlags {
            csv: true,
            graph: true,
        },
    )?;
    print!("{summary}");
    Ok(())
}

/// Parse, mutate, execute, persist the matrix, then analyze it. Returns the
/// summary text. Zero generated mutants is not an error: the matrix and an
/// all-zero summary are still written.
fn mutate_pipeline(
    source_path: &Path,
    tests_path: &Path,
    operators: Option<&str>,
    step_limit: u64,
    out: &Path,
    emit: EmitFlags,
) -> Result<String> {
    let source = fs::read_to_string(source_path)
        .with_context(|| format!("reading {}", source_path.display()))?;
    let program = parse_program(&source)
        .map_err(|e| anyhow::anyhow!("{}: {e}", source_path.display()))?;

    let suite_text = fs::read_to_string(tests_path)
        .with_context(|| format!("reading {}", tests_path.display()))?;
    let rows = parse_test_suite(tests_path, &suite_text)?;
    ensure!(
        !rows.is_empty(),
        "{}: test suite contains no tests",
        tests_path.display()
    );
    let tests = record_tests(&program, rows, step_limit)?;

    let operator_set: BTreeSet<MutationOperator> = match operators {
        Some(list) => parse_operator_set(list)?,
        None => MutationOperator::ALL.into_iter().collect(),
    };
    let mutants = generate_mutants(&program, &operator_set);
    let matrix = run_kill_matrix(
        &program,
        &mutants,
        &tests,
        step_limit,
        &source_path.display().to_string(),
    )?;

    fs::create_dir_all(out).with_context(|| format!("creating {}", out.display()))?;
    let matrix_path = out.join("matrix.csv");
    write_matrix_csv(&matrix_path, &matrix)?;
    write_manifest_csv(&sidecar_manifest_path(&matrix_path), matrix.mutants())?;
    let mutants_dir = out.join("mutants");
    fs::create_dir_all(&mutants_dir)
        .with_context(|| format!("creating {}", mutants_dir.display()))?;
    for mutant in &mutants {
        let mutated = apply_edit(&program, &mutant.edit);
        let path = mutants_dir.join(format!("mutant_{}.mlang", mutant.id));
        fs::write(&path, print_program(&mutated))
            .with_context(|| format!("writing {}", path.display()))?;
    }

    analyze_matrix(&matrix, out, emit)
}

/// Group, build the graph, and write the requested artifacts. Returns the
/// summary text (always also written to summary.txt).
fn analyze_matrix(matrix: &KillMatrix, out: &Path, emit: EmitFlags) -> Result<String> {
    let dmsg = build_dmsg(group_mutants(matrix))?;
    emit_artifacts(matrix, &dmsg, out, emit)
}

fn emit_artifacts(matrix: &KillMatrix, dmsg: &Dmsg, out: &Path, emit: EmitFlags) -> Result<String> {
    fs::create_dir_all(out).with_context(|| format!("creating {}", out.display()))?;
    if emit.csv {
        let rows = build_report(matrix, dmsg)?;
        let path = out.join("report.csv");
        fs::write(&path, render_report_csv(&rows))
            .with_context(|| format!("writing {}", path.display()))?;
    }
    if emit.graph {
        let path = out.join("dmsg.dot");
        fs::write(&path, render_dmsg_dot(dmsg))
            .with_context(|| format!("writing {}", path.display()))?;
    }
    let summary = render_summary(matrix, dmsg);
    let path = out.join("summary.txt");
    fs::write(&path, &summary).with_context(|| format!("writing {}", path.display()))?;
    Ok(summary)
}

/// What the built-in example must produce. Public so tests can corrupt a
/// copy and confirm the self-check trips.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DemoExpectation {
    /// Member sets in group-id order.
    pub groups: Vec<BTreeSet<MutantId>>,
    pub edges: BTreeSet<(GroupId, GroupId)>,
    /// Ids of the subsuming groups.
    pub subsuming: BTreeSet<GroupId>,
    pub survivors: BTreeSet<MutantId>,
}

pub fn expected_demo_structure() -> DemoExpectation {
    DemoExpectation {
        groups: vec![
            BTreeSet::from([1, 4]),
            BTreeSet::from([2, 3, 6]),
            BTreeSet::from([5]),
        ],
        edges: BTreeSet::from([(0, 1), (1, 2)]),
        subsuming: BTreeSet::from([0]),
        survivors: BTreeSet::from([0, 7]),
    }
}

fn format_members(members: &BTreeSet<MutantId>) -> String {
    let inner = members
        .iter()
        .map(|id| id.to_string())
        .collect::<Vec<_>>()
        .join(",");
    format!("{{{inner}}}")
}

fn format_group_list(groups: &[BTreeSet<MutantId>]) -> String {
    groups.iter().map(format_members).collect::<Vec<_>>().join(" ")
}

fn check_line(out: &mut String, all_ok: &mut bool, name: &str, expected: &str, actual: &str) {
    if expected == actual {
        let _ = writeln!(out, "demo: {name} ok");
    } else {
        *all_ok = false;
        let _ = writeln!(out, "demo: {name} MISMATCH: expected {expected}, got {actual}");
    }
}

fn format_edges(edges: &BTreeSet<(GroupId, GroupId)>) -> String {
    if edges.is_empty() {
        return "none".to_string();
    }
    edges
        .iter()
        .map(|(a, b)| format!("g{a}->g{b}"))
        .collect::<Vec<_>>()
        .join(" ")
}

fn format_group_ids(ids: &BTreeSet<GroupId>) -> String {
    ids.iter().map(|id| format!("g{id}")).collect::<Vec<_>>().join(" ")
}

/// Compare the computed structure against the expectation, producing one
/// check line per aspect. Returns the lines and whether everything matched.
pub fn check_demo_structure(
    matrix: &KillMatrix,
    dmsg: &Dmsg,
    expected: &DemoExpectation,
) -> (String, bool) {
    let mut out = String::new();
    let mut ok = true;

    let actual_groups: Vec<BTreeSet<MutantId>> =
        dmsg.groups.iter().map(|g| g.members.clone()).collect();
    check_line(
        &mut out,
        &mut ok,
        "groups",
        &format_group_list(&expected.groups),
        &format_group_list(&actual_groups),
    );

    check_line(
        &mut out,
        &mut ok,
        "edges",
        &format_edges(&expected.edges),
        &format_edges(&dmsg.edges),
    );

    let actual_subsuming: BTreeSet<GroupId> = dmsg
        .groups
        .iter()
        .filter(|g| g.is_subsuming)
        .map(|g| g.id)
        .collect();
    check_line(
        &mut out,
        &mut ok,
        "subsuming",
        &format_group_ids(&expected.subsuming),
        &format_group_ids(&actual_subsuming),
    );

    // The filter must retain exactly one member of each expected subsuming
    // group and nothing else.
    let retained = filter_redundant(dmsg);
    let filter_ok = retained.len() == expected.subsuming.len()
        && expected.subsuming.iter().all(|gid| {
            expected
                .groups
                .get(*gid as usize)
                .is_some_and(|members| retained.intersection(members).count() == 1)
        });
    if filter_ok {
        let _ = writeln!(out, "demo: filter ok");
    } else {
        ok = false;
        let _ = writeln!(
            out,
            "demo: filter MISMATCH: expected one representative from each of {}, got {}",
            format_group_ids(&expected.subsuming),
            format_members(&retained),
        );
    }

    let actual_survivors: BTreeSet<MutantId> = matrix
        .mutants()
        .iter()
        .map(|m| m.id)
        .filter(|&id| {
            !matrix
                .is_killed(id)
                .expect("mutant taken from the matrix itself")
        })
        .collect();
    check_line(
        &mut out,
        &mut ok,
        "survivors",
        &format_members(&expected.survivors),
        &format_members(&actual_survivors),
    );

    (out, ok)
}
