use std::fs;
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;

use omdp_core::analysis::{digraph_checks, facet_vertex_matrix, parse_facet_vertex_matrix, DigraphReport};
use omdp_core::campaign::{check_digraph, run_theorem, CampaignCase, CampaignConfig, Tier, Verdict, BUILTIN_CASES};
use omdp_core::encoder::{format_solution, parse_dimacs, parse_solution, EncodingMode, InstanceBuilder, SolverOutput, VarMap};
use omdp_core::om::{program_digraph, FacetSet, GroundSet};
use omdp_core::paths::{direct_path_types, expand_relabelings, revisit_families, CatalogCase, PathType};
use omdp_core::solver::{decode_assignment, solve, SolveStatus};

#[derive(Parser)]
#[command(name = "omdp", version, about = "SAT certificates for monotone diameters of oriented matroid programs")]
struct Cli {
    /// TOML configuration file (solver backend, command, timeout, jobs).
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Solver timeout in seconds, overriding the configuration.
    #[arg(long, global = true)]
    timeout: Option<f64>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Write the CNF of one campaign instance or of a facet-vertex matrix.
    Encode {
        /// Built-in campaign case.
        #[arg(long, conflicts_with = "matrix")]
        case: Option<String>,
        /// Instance id within the case (defaults to the first).
        #[arg(long, requires = "case")]
        instance: Option<String>,
        /// Encoding mode: `extended` or `paper-exact`.
        #[arg(long, requires = "case")]
        mode: Option<EncodingMode>,
        /// Facet-vertex matrix file.
        #[arg(long, requires = "dim")]
        matrix: Option<PathBuf>,
        /// Dimension `d` of the program.
        #[arg(long)]
        dim: Option<usize>,
        /// Output file; DIMACS goes to stdout when omitted.
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Solve one DIMACS file and print the result as JSON.
    Solve {
        cnf: PathBuf,
        /// Also write the model in competition format.
        #[arg(long)]
        solution: Option<PathBuf>,
    },
    /// Test whether a facet-vertex matrix is the digraph of an oriented matroid program.
    CheckDigraph {
        /// Facet-vertex matrix file.
        file: PathBuf,
        /// Dimension `d` of the program.
        #[arg(long)]
        dim: usize,
        /// Results directory (default `results`).
        #[arg(long)]
        results: Option<PathBuf>,
    },
    /// Print a path catalog as JSON lines: a catalog id or `direct-<d>`.
    Paths {
        #[arg(long)]
        case: String,
        /// Print every relabeling instead of the family templates.
        #[arg(long)]
        expand: bool,
    },
    /// Run a campaign case, or `all` cases of the selected tier.
    Prove {
        /// Built-in case name, or `all`.
        case: String,
        /// Encoding mode: `extended` (default for campaigns) or `paper-exact`.
        #[arg(long)]
        mode: Option<EncodingMode>,
        /// `fast` or `extended`; selects the cases run by `all`.
        #[arg(long)]
        tier: Option<Tier>,
        /// Instances solved in parallel.
        #[arg(long)]
        jobs: Option<usize>,
        /// Keep each instance's CNF and raw solver output.
        #[arg(long)]
        keep_artifacts: bool,
        /// Re-solve instances that have a cached record.
        #[arg(long)]
        force: bool,
        /// Skip the remaining instances after the first unexpected result.
        #[arg(long)]
        fail_fast: bool,
        /// Results directory (default `results`).
        #[arg(long)]
        results: Option<PathBuf>,
    },
    /// Decode solver output into the program's facet-vertex matrix.
    Extract {
        /// Solution file with `s` and `v` lines.
        solver_output: PathBuf,
        /// Dimension `d` of the program.
        #[arg(long)]
        dim: usize,
        /// Number of facets `n`.
        #[arg(long)]
        facets: usize,
        #[arg(long, value_enum, default_value_t = ExtractFormat::FacetVertex)]
        format: ExtractFormat,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum ExtractFormat {
    FacetVertex,
    Json,
}

fn load_config(cli: &Cli) -> Result<CampaignConfig> {
    let mut cfg = match &cli.config {
        Some(p) => CampaignConfig::from_toml_file(p).with_context(|| format!("reading {}", p.display()))?,
        None => CampaignConfig::default(),
    };
    cfg.solver = cfg.solver.with_env_override();
    if let Some(t) = cli.timeout {
        cfg.solver.timeout_secs = t;
    }
    cfg.solver.validate()?;
    Ok(cfg)
}

fn print_json(value: &impl Serialize) -> Result<()> {
    println!("{}", serde_json::to_string_pretty(value)?);
    Ok(())
}

fn read(path: &Path) -> Result<String> {
    fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))
}

fn encode(
    case: Option<String>,
    instance: Option<String>,
    mode: Option<EncodingMode>,
    matrix: Option<PathBuf>,
    dim: Option<usize>,
    output: Option<PathBuf>,
) -> Result<()> {
    let built = match (case, matrix) {
        (Some(name), None) => {
            let mut case = CampaignCase::builtin(&name)?;
            if let Some(m) = mode {
                case.mode = m;
            }
            let specs = case.instances();
            let spec = match &instance {
                None => &specs[0],
                Some(id) => specs.iter().find(|s| &s.id == id).with_context(|| {
                    format!("no instance `{id}`; available: {}", specs.iter().map(|s| s.id.as_str()).collect::<Vec<_>>().join(", "))
                })?,
            };
            case.build_instance(spec, &case.exclusion_paths()?)?
        }
        (None, Some(path)) => {
            let m = parse_facet_vertex_matrix(&read(&path)?, dim.context("--dim is required with --matrix")?)?;
            InstanceBuilder::new(GroundSet::new(m.dim(), m.facets())?).columns(m.columns()).build()?
        }
        _ => bail!("pass exactly one of --case or --matrix"),
    };
    match output {
        Some(path) => {
            built.formula.write_dimacs(BufWriter::new(fs::File::create(&path)?))?;
            print_json(&serde_json::json!({
                "output": path,
                "variables": built.formula.variable_count(),
                "clauses": built.formula.len(),
                "sections": built.counts,
            }))
        }
        None => Ok(built.formula.write_dimacs(BufWriter::new(io::stdout().lock()))?),
    }
}

#[derive(Serialize)]
struct PathLine<'a> {
    family: Option<usize>,
    length: usize,
    labels: &'a [FacetSet],
}

fn paths(case: &str, expand: bool) -> Result<()> {
    let mut out = BufWriter::new(io::stdout().lock());
    let mut emit = |family: Option<usize>, p: &PathType| -> Result<()> {
        let line = PathLine { family, length: p.len(), labels: &p.labels };
        writeln!(out, "{}", serde_json::to_string(&line)?)?;
        Ok(())
    };
    if let Some(d) = case.strip_prefix("direct-") {
        let d: usize = d.parse().context("direct-<d> needs a dimension")?;
        if !(1..=7).contains(&d) {
            bail!("direct paths are listed for 1 <= d <= 7");
        }
        for p in direct_path_types(d) {
            emit(None, &p)?;
        }
        return Ok(());
    }
    let catalog: CatalogCase = case.parse()?;
    for fam in revisit_families(catalog) {
        if expand {
            for p in expand_relabelings(&fam) {
                emit(Some(fam.index), &p)?;
            }
        } else {
            emit(Some(fam.index), &fam.template)?;
        }
    }
    Ok(())
}

fn selected_cases(name: &str, tier: Option<Tier>) -> Result<Vec<CampaignCase>> {
    if name == "all" {
        let tier = tier.unwrap_or(Tier::Fast);
        let mut out = Vec::new();
        for n in BUILTIN_CASES {
            let c = CampaignCase::builtin(n)?;
            if !c.opt_in && (tier == Tier::Extended || c.tier == Tier::Fast) {
                out.push(c);
            }
        }
        return Ok(out);
    }
    let case = CampaignCase::builtin(name)?;
    if case.tier == Tier::Extended && tier == Some(Tier::Fast) {
        bail!("case {name} belongs to the extended tier");
    }
    Ok(vec![case])
}

#[derive(Serialize)]
struct Extracted {
    d: usize,
    n: usize,
    chirotope: String,
    vertices: Vec<FacetSet>,
    arcs: Vec<(FacetSet, FacetSet)>,
    matrix: Option<String>,
    report: DigraphReport,
}

fn extract(path: &Path, d: usize, n: usize, format: ExtractFormat) -> Result<()> {
    let text = read(path)?;
    let ground = GroundSet::new(d, n)?;
    let vm = VarMap::new(ground);
    let max_var = text
        .lines()
        .filter_map(|l| l.trim().strip_prefix('v'))
        .flat_map(|rest| rest.split_whitespace().filter_map(|t| t.parse::<i64>().ok()))
        .map(|x| x.unsigned_abs() as u32)
        .max()
        .unwrap_or(0);
    let values = match parse_solution(&text, max_var.max(vm.basis_count()))? {
        SolverOutput::Sat(v) => v,
        SolverOutput::Unsat => bail!("solver output is UNSATISFIABLE; there is no model to extract"),
        SolverOutput::Unknown => bail!("solver output has no model"),
    };
    let chi = decode_assignment(&values, &vm)?;
    let dg = program_digraph(&chi)?;
    let matrix = facet_vertex_matrix(&dg).ok().map(|m| m.emit());
    match format {
        ExtractFormat::FacetVertex => {
            print!("{}", matrix.context("the decoded program has no vertices")?);
            Ok(())
        }
        ExtractFormat::Json => print_json(&Extracted {
            d,
            n,
            chirotope: chi.signs().iter().map(|&s| if s > 0 { '+' } else { '-' }).collect(),
            vertices: dg.vertices.clone(),
            arcs: dg.arcs.iter().map(|&(a, b)| (dg.vertices[a], dg.vertices[b])).collect(),
            matrix,
            report: digraph_checks(&dg),
        }),
    }
}

fn run(cli: Cli) -> Result<ExitCode> {
    let mut cfg = load_config(&cli)?;
    match cli.command {
        Command::Encode { case, instance, mode, matrix, dim, output } => encode(case, instance, mode, matrix, dim, output)?,
        Command::Solve { cnf, solution } => {
            let formula = parse_dimacs(&read(&cnf)?)?;
            let result = solve(&formula, &cfg.solver);
            if let Some(path) = solution {
                let out = match (&result.status, &result.assignment) {
                    (SolveStatus::Sat, Some(a)) => SolverOutput::Sat(a.clone()),
                    (SolveStatus::Unsat, _) => SolverOutput::Unsat,
                    _ => SolverOutput::Unknown,
                };
                fs::write(path, format_solution(&out))?;
            }
            print_json(&result)?;
            if result.status == SolveStatus::Error {
                return Ok(ExitCode::FAILURE);
            }
        }
        Command::CheckDigraph { file, dim, results } => {
            if let Some(r) = results {
                cfg.results_dir = r;
            }
            print_json(&check_digraph(&file, dim, &cfg)?)?;
        }
        Command::Paths { case, expand } => paths(&case, expand)?,
        Command::Prove { case, mode, tier, jobs, keep_artifacts, force, fail_fast, results } => {
            if let Some(j) = jobs {
                cfg.solver.parallel_instances = j;
            }
            if let Some(r) = results {
                cfg.results_dir = r;
            }
            cfg.keep_artifacts |= keep_artifacts;
            cfg.force |= force;
            cfg.fail_fast |= fail_fast;
            cfg.solver.validate()?;
            let mut all_hold = true;
            for mut c in selected_cases(&case, tier)? {
                if let Some(m) = mode {
                    c.mode = m;
                }
                let manifest = run_theorem(&c, &cfg)?;
                all_hold &= manifest.verdict == Verdict::TheoremHolds;
                print_json(&manifest)?;
            }
            if !all_hold {
                return Ok(ExitCode::FAILURE);
            }
        }
        Command::Extract { solver_output, dim, facets, format } => extract(&solver_output, dim, facets, format)?,
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
