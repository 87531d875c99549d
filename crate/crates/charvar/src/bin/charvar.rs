//! Command-line front end: compute strata of torus-knot exteriors,
//! run the splice analysis and census, render the standard figures, and
//! verify the headline results.

use charvar::arcs::{trace_arc_numeric, KnotSide};
use charvar::pillowcase::{apply_gluing_segment, canonicalize, Angle};
use charvar::presentation::GluingMatrix;
use charvar::splice::SpliceAnalysis;
use charvar::svg::{render, standard_figures, FigureSpec, Layer, Window};
use clap::{Args, Parser, Subcommand};
use serde::Serialize;
use std::path::PathBuf;
use std::process::ExitCode;

const EXIT_OK: u8 = 0;
const EXIT_VERIFY_FAILED: u8 = 1;
const EXIT_PROVISIONAL: u8 = 2;
const EXIT_USAGE: u8 = 64;

#[derive(Parser)]
#[command(
    name = "charvar",
    version,
    about = "SU(2) character varieties of spliced torus-knot exteriors"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Strata of a torus-knot or composite-knot exterior.
    Arcs(ArcsArgs),
    /// Full splice analysis: fiber product, components, census.
    Splice(SpliceArgs),
    /// Run the verification suite.
    Verify(VerifyArgs),
}

#[derive(Args)]
struct ArcsArgs {
    /// Torus-knot parameters p q.
    #[arg(num_args = 0..=2, allow_negative_numbers = true)]
    pq: Vec<i64>,
    /// Composite knot as summand pairs: p1,q1 p2,q2 … (or one flat list).
    #[arg(long, num_args = 1.., allow_hyphen_values = true)]
    sum: Vec<String>,
    /// Oracle sample count (default 64·|p·q| per arc).
    #[arg(long)]
    samples: Option<usize>,
    /// Write the JSON report here.
    #[arg(long)]
    json: Option<PathBuf>,
    /// Write an SVG of the boundary images here.
    #[arg(long)]
    svg: Option<PathBuf>,
}

#[derive(Args)]
struct SpliceArgs {
    /// Left knot as p,q.
    #[arg(allow_hyphen_values = true)]
    left: String,
    /// Right knot as p,q (or use --sum for a composite).
    #[arg(allow_hyphen_values = true)]
    right: Option<String>,
    /// Right composite knot: flat list p1,q1,p2,q2,…
    #[arg(long, allow_hyphen_values = true)]
    sum: Option<String>,
    /// Gluing matrix a,b,c,d acting by μ ↦ μ^a λ^b, λ ↦ μ^c λ^d.
    #[arg(long, default_value = "1,0,-1,-1", allow_hyphen_values = true)]
    matrix: String,
    /// Write the census JSON here.
    #[arg(long)]
    json: Option<PathBuf>,
    /// Write the overlay SVG here.
    #[arg(long)]
    svg: Option<PathBuf>,
}

#[derive(Args)]
struct VerifyArgs {
    /// Only check that the spliced manifolds are homology spheres.
    #[arg(long)]
    homology_only: bool,
    /// Additionally write fig1.svg … fig5.svg.
    #[arg(long)]
    figures: bool,
    /// Directory for the figures (default: current directory).
    #[arg(long, default_value = ".")]
    figures_dir: PathBuf,
}

fn parse_pairs(text: &str) -> Result<Vec<(i64, i64)>, String> {
    let nums: Result<Vec<i64>, _> = text
        .split(',')
        .filter(|s| !s.trim().is_empty())
        .map(|s| s.trim().parse::<i64>())
        .collect();
    let nums = nums.map_err(|e| format!("bad integer in {text:?}: {e}"))?;
    if nums.is_empty() || nums.len() % 2 != 0 {
        return Err(format!("expected pairs p,q in {text:?}"));
    }
    Ok(nums.chunks(2).map(|c| (c[0], c[1])).collect())
}

#[derive(Serialize)]
struct OracleSummary {
    arc: (i64, i64),
    samples: usize,
    max_residual_to_line: f64,
    min_meridian_angle: f64,
    max_meridian_angle: f64,
}

#[derive(Serialize)]
struct ArcsReport {
    piece: String,
    strata: Vec<charvar::arcs::Stratum>,
    oracle: Vec<OracleSummary>,
}

fn cmd_arcs(args: &ArcsArgs) -> Result<u8, String> {
    let summands: Vec<(i64, i64)> = if !args.sum.is_empty() {
        parse_pairs(&args.sum.join(","))?
    } else if args.pq.len() == 2 {
        vec![(args.pq[0], args.pq[1])]
    } else {
        return Err("give p q or --sum".into());
    };
    let side = KnotSide::new(&summands).map_err(|e| e.to_string())?;
    let mut oracle = Vec::new();
    for &(p, q) in &side.summands {
        for (a, b) in charvar::arcs::arc_labels(p, q) {
            let n = args.samples.unwrap_or(64 * (p * q).unsigned_abs() as usize);
            let trace = trace_arc_numeric(p, q, a, b, n).map_err(|e| e.to_string())?;
            let slope = -(p * q) as f64;
            let intercept = std::f64::consts::PI * a as f64;
            let mut worst = 0.0f64;
            let mut min_x = f64::INFINITY;
            let mut max_x = f64::NEG_INFINITY;
            for &(x, y) in &trace {
                worst = worst.max(charvar::arcs::residual_to_line(x, y, slope, intercept));
                min_x = min_x.min(x);
                max_x = max_x.max(x);
            }
            oracle.push(OracleSummary {
                arc: (a, b),
                samples: n,
                max_residual_to_line: worst,
                min_meridian_angle: min_x,
                max_meridian_angle: max_x,
            });
        }
    }
    let report = ArcsReport {
        piece: charvar::arcs::piece_label(&side.summands),
        strata: side.strata.clone(),
        oracle,
    };
    let text = serde_json::to_string_pretty(&report).map_err(|e| e.to_string())?;
    match &args.json {
        Some(path) => std::fs::write(path, &text).map_err(|e| e.to_string())?,
        None => println!("{text}"),
    }
    if let Some(path) = &args.svg {
        let fig = FigureSpec {
            window: Window::near_origin(),
            layers: vec![
                Layer {
                    class: "abelian",
                    segments: side
                        .strata
                        .iter()
                        .filter(|s| s.is_abelian())
                        .map(|s| s.boundary_image.clone())
                        .collect(),
                },
                Layer {
                    class: "irreducible",
                    segments: side
                        .strata
                        .iter()
                        .filter(|s| !s.is_abelian())
                        .map(|s| s.boundary_image.clone())
                        .collect(),
                },
            ],
            annotations: vec![],
            title: format!("boundary image of {}", report.piece),
        };
        std::fs::write(path, render(&fig)).map_err(|e| e.to_string())?;
    }
    Ok(EXIT_OK)
}

fn cmd_splice(args: &SpliceArgs) -> Result<u8, String> {
    let left_pairs = parse_pairs(&args.left)?;
    if left_pairs.len() != 1 {
        return Err("left side must be a single p,q".into());
    }
    let right_pairs = match (&args.right, &args.sum) {
        (Some(r), None) => parse_pairs(r)?,
        (None, Some(s)) => parse_pairs(s)?,
        (Some(_), Some(_)) => return Err("give either RIGHT or --sum, not both".into()),
        (None, None) => return Err("give RIGHT or --sum".into()),
    };
    let m = parse_pairs(&args.matrix)?;
    if m.len() != 2 {
        return Err("--matrix needs a,b,c,d".into());
    }
    let h = GluingMatrix::new(m[0].0, m[0].1, m[1].0, m[1].1).map_err(|e| e.to_string())?;
    let left = KnotSide::new(&left_pairs).map_err(|e| e.to_string())?;
    let right = KnotSide::new(&right_pairs).map_err(|e| e.to_string())?;
    let analysis = SpliceAnalysis::new(left, right, h).map_err(|e| e.to_string())?;
    let report = analysis.census();
    let text = serde_json::to_string_pretty(&report).map_err(|e| e.to_string())?;
    match &args.json {
        Some(path) => std::fs::write(path, &text).map_err(|e| e.to_string())?,
        None => println!("{text}"),
    }
    if let Some(path) = &args.svg {
        let fig = FigureSpec {
            window: Window::near_origin(),
            layers: vec![
                Layer {
                    class: "abelian",
                    segments: analysis
                        .left
                        .strata
                        .iter()
                        .filter(|s| s.is_abelian())
                        .map(|s| s.boundary_image.clone())
                        .collect(),
                },
                Layer {
                    class: "irreducible",
                    segments: analysis
                        .left
                        .strata
                        .iter()
                        .filter(|s| !s.is_abelian())
                        .map(|s| s.boundary_image.clone())
                        .collect(),
                },
                Layer {
                    class: "image",
                    segments: analysis
                        .right
                        .strata
                        .iter()
                        .map(|s| apply_gluing_segment(&analysis.h, &s.boundary_image))
                        .collect(),
                },
            ],
            annotations: analysis.loci.iter().map(|l| l.representative_point()).collect(),
            title: format!("{} against glued {}", report.left_piece, report.right_piece),
        };
        std::fs::write(path, render(&fig)).map_err(|e| e.to_string())?;
    }
    eprintln!(
        "{} components; isolated by tangent dimension: {:?}; circles: {}",
        report.components.len(),
        report.counts.isolated_by_zariski,
        report.counts.circles
    );
    if report.provisional {
        eprintln!("warning: some numerical ranks were flagged; results provisional");
        return Ok(EXIT_PROVISIONAL);
    }
    Ok(EXIT_OK)
}

fn cmd_verify(args: &VerifyArgs) -> Result<u8, String> {
    let results = if args.homology_only {
        charvar::acceptance::run_homology_only()
    } else {
        charvar::acceptance::run_all()
    };
    let mut all_ok = true;
    for r in &results {
        let status = if r.passed { "PASS" } else { "FAIL" };
        println!("criterion {}: {} — {}", r.id, status, r.title);
        for d in &r.details {
            println!("    {d}");
        }
        all_ok &= r.passed;
    }
    if args.figures {
        for (name, svg) in standard_figures().map_err(|e| e.to_string())? {
            let path = args.figures_dir.join(name);
            std::fs::write(&path, svg).map_err(|e| e.to_string())?;
            println!("wrote {}", path.display());
        }
    }
    let special = canonicalize(Angle::of(1, 14), Angle::of(-1, 14));
    println!("distinguished intersection point: {special}");
    Ok(if all_ok { EXIT_OK } else { EXIT_VERIFY_FAILED })
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            // clap prints help/version through the error display.
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { EXIT_USAGE } else { EXIT_OK });
        }
    };
    let outcome = match &cli.command {
        Command::Arcs(a) => cmd_arcs(a),
        Command::Splice(a) => cmd_splice(a),
        Command::Verify(a) => cmd_verify(a),
    };
    match outcome {
        Ok(code) => ExitCode::from(code),
        Err(msg) => {
            eprintln!("error: {msg}");
            ExitCode::from(EXIT_USAGE)
        }
    }
}
