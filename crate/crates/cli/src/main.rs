use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context};
use clap::{Parser, Subcommand};

use omep_core::analysis::{all_full_c_matrices, c_matrix, classify_pair, dof_summary, replication_vector};
use omep_core::constructions::{build_a12, build_a8, build_omep_bl, build_series, catalog_design, SeriesVariant, CATALOG};
use omep_core::io::{read_any, PlanFormat};
use omep_core::linalg::rational_spectrum;
use omep_core::oa::oa_from_field;
use omep_core::verify::{all_passed, render_json_lines, render_text, run_suite, verify_ww, DesignSource, Suite};
use omep_core::{OrthogonalArray, Plan};

/// Orthogonal main effect plans on small blocks.
#[derive(Debug, Parser)]
#[command(name = "omep", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Build a plan and write it as a plan file.
    Generate {
        /// a12:1, a12:2, a12:3, a8, series:i, series:ii, series:iii or omep-bl.
        family: String,
        /// Number of blocks for the series families (at least 3).
        #[arg(long)]
        n: Option<usize>,
        /// Block design for omep-bl: a, b, c, d or half:V.
        #[arg(long)]
        design: Option<String>,
        /// Block size for omep-bl; the array comes from the field of this order.
        #[arg(long, conflicts_with = "oa")]
        k: Option<usize>,
        /// Orthogonal array file for omep-bl.
        #[arg(long)]
        oa: Option<PathBuf>,
        /// Output path; standard output if omitted.
        #[arg(short, long)]
        output: Option<PathBuf>,
        /// text or csv; defaults from the output extension.
        #[arg(long)]
        format: Option<String>,
    },
    /// Replications, pair relations, C-matrices and degrees of freedom of a plan file.
    Analyze {
        path: PathBuf,
        /// Factors whose C-matrices to print (default: all).
        #[arg(long = "factor", value_name = "NAME")]
        factors: Vec<String>,
        /// Eliminate only these factors (comma separated) instead of all others.
        #[arg(long, value_delimiter = ',', value_name = "NAMES")]
        eliminate: Option<Vec<String>>,
    },
    /// Run a verification suite: a12, a8, series:N[:VARIANT], omep-bl:NAME, ww or all.
    Verify {
        suite: String,
        /// One JSON record per claim instead of text.
        #[arg(long)]
        json: bool,
        /// Plan file for the ww suite.
        #[arg(long)]
        plan: Option<PathBuf>,
    },
    /// Write the field orthogonal array OA(k^2, k+1, k, 2).
    Oa {
        #[arg(long)]
        k: u64,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// List the built-in block designs.
    Catalog,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}

/// `Ok(false)` means a verification failure.
fn run(command: Command) -> anyhow::Result<bool> {
    match command {
        Command::Generate {
            family,
            n,
            design,
            k,
            oa,
            output,
            format,
        } => {
            let plan = generate(&family, n, design.as_deref(), k, oa.as_deref())?;
            let format = match (&format, &output) {
                (Some(f), _) => f.parse()?,
                (None, Some(path)) => PlanFormat::from_path(path),
                (None, None) => PlanFormat::Text,
            };
            let text = format.write(&plan);
            match &output {
                Some(path) => {
                    fs::write(path, text).with_context(|| format!("writing {}", path.display()))?;
                    println!("{}", summary(&family, &plan));
                    println!("written to {}", path.display());
                }
                None => {
                    print!("{text}");
                    eprintln!("{}", summary(&family, &plan));
                }
            }
            Ok(true)
        }
        Command::Analyze {
            path,
            factors,
            eliminate,
        } => {
            let text = fs::read_to_string(&path).with_context(|| format!("reading {}", path.display()))?;
            let plan = read_any(&text).with_context(|| format!("parsing {}", path.display()))?;
            print!("{}", analyze(&plan, &factors, eliminate.as_deref())?);
            Ok(true)
        }
        Command::Verify { suite, json, plan } => {
            let reports = if suite == "ww" {
                let path = plan.context("the ww suite needs --plan FILE")?;
                let text = fs::read_to_string(&path).with_context(|| format!("reading {}", path.display()))?;
                verify_ww(Some(&read_any(&text)?))?
            } else {
                if plan.is_some() {
                    bail!("--plan is only used by the ww suite");
                }
                run_suite(&suite.parse::<Suite>()?)?
            };
            print!("{}", if json { render_json_lines(&reports) } else { render_text(&reports) });
            Ok(all_passed(&reports))
        }
        Command::Oa { k, output } => {
            let text = oa_from_field(k)?.to_text();
            match output {
                Some(path) => fs::write(&path, text).with_context(|| format!("writing {}", path.display()))?,
                None => print!("{text}"),
            }
            Ok(true)
        }
        Command::Catalog => {
            for name in CATALOG {
                let d = catalog_design(name)?;
                println!("{name}  {d}");
            }
            println!("half:V  V treatments in two blocks of size k, the smallest prime power with 2k > V");
            Ok(true)
        }
    }
}

fn generate(family: &str, n: Option<usize>, design: Option<&str>, k: Option<usize>, oa: Option<&Path>) -> anyhow::Result<Plan> {
    let needs_n = family.starts_with("series:");
    if n.is_some() && !needs_n {
        bail!("--n only applies to the series families");
    }
    if family != "omep-bl" && (design.is_some() || k.is_some() || oa.is_some()) {
        bail!("--design, --k and --oa only apply to omep-bl");
    }
    if let Some(v) = family.strip_prefix("a12:") {
        return Ok(build_a12(v.parse()?));
    }
    if let Some(v) = family.strip_prefix("series:") {
        let variant: SeriesVariant = v.parse()?;
        let n = n.context("series families need --n")?;
        return Ok(build_series(variant, n)?);
    }
    match family {
        "a8" => Ok(build_a8()),
        "omep-bl" => {
            let source: DesignSource = design.context("omep-bl needs --design")?.parse()?;
            let design = source.design()?;
            let block = design.block_size().context("design blocks have unequal sizes")?;
            let array = match (k, oa) {
                (_, Some(path)) => {
                    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
                    OrthogonalArray::from_text(&text).with_context(|| format!("parsing {}", path.display()))?
                }
                (Some(k), None) if k != block => bail!("--k {k} does not match the design's block size {block}"),
                _ => oa_from_field(block as u64)?,
            };
            Ok(build_omep_bl(&design, &array)?)
        }
        _ => bail!("unknown family `{family}`"),
    }
}

fn summary(family: &str, plan: &Plan) -> String {
    let block = plan.block_index();
    let factors: Vec<String> = plan
        .factors()
        .iter()
        .enumerate()
        .filter(|(i, _)| Some(*i) != block)
        .map(|(_, f)| format!("{}({})", f.name(), f.level_count()))
        .collect();
    let mut s = format!("{family}: {} runs, {} treatment factors {}", plan.runs(), factors.len(), factors.join(" "));
    match plan.block_factor() {
        Some(b) => s.push_str(&format!(", {} blocks (factor {})", b.level_count(), b.name())),
        None => s.push_str(", unblocked"),
    }
    s.push('.');
    for note in plan.notes() {
        s.push_str(&format!(" Note: {note}."));
    }
    s
}

fn analyze(plan: &Plan, selected: &[String], eliminate: Option<&[String]>) -> anyhow::Result<String> {
    let mut out = String::new();
    let names = plan.factor_names();
    for f in selected {
        plan.factor_index(f)?;
    }
    out.push_str(&format!("runs: {}\n", plan.runs()));
    if let Some(b) = plan.block_factor() {
        out.push_str(&format!("block factor: {}\n", b.name()));
    }

    out.push_str("replications:\n");
    for name in &names {
        let r: Vec<String> = replication_vector(plan, name)?.iter().map(usize::to_string).collect();
        out.push_str(&format!("  {name}: {}\n", r.join(" ")));
    }

    out.push_str("pairs:\n");
    for (i, a) in names.iter().enumerate() {
        for b in &names[i + 1..] {
            out.push_str(&format!("  {a},{b} {}\n", classify_pair(plan, a, b)?));
        }
    }

    let targets: Vec<&str> = if selected.is_empty() { names.clone() } else { selected.iter().map(String::as_str).collect() };
    out.push_str("C-matrices:\n");
    let full = all_full_c_matrices(plan)?;
    for t in targets {
        let (label, c) = match eliminate {
            None => (format!("C_{t}"), full[plan.factor_index(t)?].clone()),
            Some(elim) => {
                let elim: Vec<&str> = elim.iter().map(String::as_str).collect();
                (format!("C_{{{t};{}}}", elim.join(",")), c_matrix(plan, t, t, &elim)?.matrix)
            }
        };
        out.push_str(&format!("  {label} = {c}\n"));
        out.push_str(&format!("    spectrum: {}\n", rational_spectrum(&c)?.notation()));
    }

    let dof = dof_summary(plan)?;
    out.push_str(&format!(
        "dof: model {}, residual {}{}\n",
        dof.model_df,
        dof.residual_df,
        if dof.is_saturated() { " (saturated)" } else { "" }
    ));
    out.push_str("plan (factors as rows):\n");
    out.push_str(&plan.render_rows());
    if !out.ends_with('\n') {
        out.push('\n');
    }
    Ok(out)
}
