//! Command-line surface over the construction pipeline.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use polyrep::construct::{
    closed_form_rep, construct_prep, mu_count, prism_lift, projectivize_pointed, pyramid_lift,
    ClosedFormKind,
};
use polyrep::hrep::HPolytope;
use polyrep::io::{
    emit_hrep, emit_prep, emit_sparse_polys_json, emit_sparse_polys_text, grid_eval_csv,
    parse_hrep, Format,
};
use polyrep::lattice::{build_face_lattice, enumerate_vertices, validate_hrep};
use polyrep::metrics::{compute_metrics, RhoMode};
use polyrep::num::{format_rat, parse_rat, Rat, RatVec};
use polyrep::verify::{
    equivalence_test, member_hrep, member_prep, structural_checks, EquivalenceConfig, EvalMode,
};
use polyrep::{Error, Result};

#[derive(Parser)]
#[command(name = "polyrep", version, about = "Exact polynomial descriptions of simple polytopes")]
struct Cli {
    /// Seed for all pseudo-random sampling.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,

    /// Total sample budget for equivalence testing.
    #[arg(long, global = true, default_value_t = 10_000)]
    samples: usize,

    /// Interior-point centrality assumption for the exponent choice.
    #[arg(long, global = true, value_enum, default_value_t = RhoArg::Exact)]
    rho: RhoArg,

    /// Output format where both are supported.
    #[arg(long, global = true, value_enum, default_value_t = FormatArg::Text)]
    format: FormatArg,

    /// Write output to a file instead of stdout.
    #[arg(short = 'o', long, global = true)]
    output: Option<PathBuf>,

    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Clone, Copy, ValueEnum)]
enum RhoArg {
    Dimension,
    Exact,
}

impl From<RhoArg> for RhoMode {
    fn from(r: RhoArg) -> Self {
        match r {
            RhoArg::Dimension => RhoMode::Dimension,
            RhoArg::Exact => RhoMode::Exact,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum FormatArg {
    Json,
    Text,
}

#[derive(Clone, Copy, ValueEnum)]
enum BaseArg {
    Cube,
    Simplex,
}

#[derive(Subcommand)]
enum Cmd {
    /// Check that an input system is bounded, irredundant, and simple.
    Validate { input: PathBuf },
    /// Print the f-vector and all faces.
    Lattice { input: PathBuf },
    /// Print the distance minima, the step scale, diameter bounds, and the
    /// chosen exponent.
    Metrics { input: PathBuf },
    /// Construct the polynomial system and write it out.
    Construct { input: PathBuf },
    /// Evaluate both membership oracles at one point.
    Eval {
        input: PathBuf,
        /// Comma-separated rational coordinates, e.g. `1/2,-3,0`.
        #[arg(long)]
        point: String,
    },
    /// Construct, then run the sampling equivalence test and the structural
    /// checks; exits nonzero on any disagreement.
    Verify { input: PathBuf },
    /// Lift a closed-form base description into one more dimension.
    Lift {
        #[command(subcommand)]
        kind: LiftCmd,
    },
    /// Map a pointed unbounded polyhedron onto a polytope.
    Projectivize {
        input: PathBuf,
        /// Index of the vertex to translate to the origin (default: first).
        #[arg(long)]
        vertex: Option<usize>,
    },
    /// Print the polynomial count for a given dimension.
    Mu { d: usize },
    /// Evaluate the system on a grid and emit CSV.
    Grid {
        input: PathBuf,
        /// Box as `lo1,lo2[,lo3]:hi1,hi2[,hi3]`.
        #[arg(long)]
        bbox: String,
        /// Rational step size.
        #[arg(long)]
        step: String,
    },
}

#[derive(Subcommand)]
enum LiftCmd {
    Prism {
        #[arg(value_enum)]
        base: BaseArg,
        dim: usize,
    },
    Pyramid {
        #[arg(value_enum)]
        base: BaseArg,
        dim: usize,
    },
}

fn read_hrep(path: &PathBuf) -> Result<HPolytope> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Error::Unsupported(format!("cannot read {}: {e}", path.display())))?;
    parse_hrep(&text)
}

fn parse_point(s: &str, dim: usize) -> Result<RatVec> {
    let coords: Vec<Rat> = s
        .split(',')
        .map(|c| parse_rat(c).map_err(|msg| Error::Parse { line: 0, msg }))
        .collect::<Result<_>>()?;
    if coords.len() != dim {
        return Err(Error::DimensionMismatch {
            expected: dim,
            got: coords.len(),
        });
    }
    Ok(coords)
}

/// Unit-cube/simplex vertex lists for the pyramid normalization.
fn base_vertices(base: BaseArg, d: usize) -> Vec<RatVec> {
    match base {
        BaseArg::Cube => (0..(1u32 << d))
            .map(|mask| {
                (0..d)
                    .map(|j| {
                        if mask & (1 << j) != 0 {
                            polyrep::num::rat(1)
                        } else {
                            polyrep::num::rat(-1)
                        }
                    })
                    .collect()
            })
            .collect(),
        BaseArg::Simplex => {
            let mut vs = vec![polyrep::num::zeros(d)];
            for i in 0..d {
                let mut v = polyrep::num::zeros(d);
                v[i] = polyrep::num::rat(1);
                vs.push(v);
            }
            vs
        }
    }
}

fn write_out(output: &Option<PathBuf>, content: &str) -> Result<()> {
    match output {
        Some(path) => std::fs::write(path, content)
            .map_err(|e| Error::Unsupported(format!("cannot write {}: {e}", path.display()))),
        None => {
            print!("{content}");
            Ok(())
        }
    }
}

/// Runs one command; `Ok(code)` is the process exit code.
fn run(cli: &Cli) -> Result<u8> {
    match &cli.cmd {
        Cmd::Validate { input } => {
            let h = read_hrep(input)?;
            let vertices = enumerate_vertices(&h)?;
            let report = validate_hrep(&h, &vertices);
            let mut out = String::new();
            if report.is_valid() {
                out.push_str(&format!(
                    "valid: {} rows, {} vertices, simple\n",
                    h.m(),
                    vertices.len()
                ));
            } else {
                for issue in &report.issues {
                    out.push_str(&format!("issue: {issue:?}\n"));
                }
            }
            write_out(&cli.output, &out)?;
            Ok(if report.is_valid() { 0 } else { 2 })
        }
        Cmd::Lattice { input } => {
            let h = read_hrep(input)?;
            let vertices = enumerate_vertices(&h)?;
            let lattice = build_face_lattice(&h, &vertices);
            let mut out = format!("f-vector: {:?}\n", lattice.f_vector());
            for k in 0..h.dim {
                for face in lattice.faces(k) {
                    out.push_str(&format!(
                        "face k={} facets={:?} vertices={:?}\n",
                        k, face.facet_indices, face.vertex_ids
                    ));
                }
            }
            write_out(&cli.output, &out)?;
            Ok(0)
        }
        Cmd::Metrics { input } => {
            let h = read_hrep(input)?;
            let vertices = enumerate_vertices(&h)?;
            let lattice = build_face_lattice(&h, &vertices);
            let m = compute_metrics(&h, &lattice, cli.rho.into())?;
            let mut out = String::new();
            out.push_str(&format!(
                "shift: ({})\n",
                m.shift.iter().map(format_rat).collect::<Vec<_>>().join(", ")
            ));
            out.push_str(&format!("diam_sq: {}\n", format_rat(&m.diam_sq)));
            out.push_str(&format!("diam_upper: {}\n", format_rat(&m.diam_upper)));
            out.push_str(&format!("r_min: {}\n", format_rat(&m.r_min)));
            for (k, eps) in m.eps_k_sq.iter().enumerate() {
                match eps {
                    Some(v) => out.push_str(&format!("eps_{k}_sq: {}\n", format_rat(v))),
                    None => out.push_str(&format!("eps_{k}_sq: none\n")),
                }
            }
            out.push_str(&format!("eps_bar: {}\n", format_rat(&m.eps_bar)));
            out.push_str(&format!("exponent_p: {}\n", m.exponent_p));
            write_out(&cli.output, &out)?;
            Ok(0)
        }
        Cmd::Construct { input } => {
            let h = read_hrep(input)?;
            let prep = construct_prep(&h, cli.rho.into())?;
            let format = match cli.format {
                FormatArg::Json => Format::Json,
                FormatArg::Text => Format::Text,
            };
            write_out(&cli.output, &emit_prep(&prep, format))?;
            Ok(0)
        }
        Cmd::Eval { input, point } => {
            let h = read_hrep(input)?;
            let x = parse_point(point, h.dim)?;
            let prep = construct_prep(&h, cli.rho.into())?;
            let vh = member_hrep(&h, &x);
            let vp = member_prep(&prep, &x, EvalMode::Guarded)?;
            let mut out = format!("member_hrep: {}\n", vh.inside);
            for (id, val) in &vh.violated {
                out.push_str(&format!("  violated {id}: {}\n", format_rat(val)));
            }
            out.push_str(&format!("member_prep: {}\n", vp.inside));
            for (id, val) in &vp.violated {
                out.push_str(&format!("  violated {id}: {}\n", format_rat(val)));
            }
            write_out(&cli.output, &out)?;
            Ok(0)
        }
        Cmd::Verify { input } => {
            let h = read_hrep(input)?;
            let vertices = enumerate_vertices(&h)?;
            let lattice = build_face_lattice(&h, &vertices);
            let metrics = compute_metrics(&h, &lattice, cli.rho.into())?;
            let prep = construct_prep(&h, cli.rho.into())?;
            let cfg = EquivalenceConfig {
                seed: cli.seed,
                samples: cli.samples,
                eps_bar: metrics.eps_bar.clone(),
            };
            let report = equivalence_test(&h, &prep, &cfg)?;
            let structure = structural_checks(&h, &lattice, &prep);
            let mut out = String::new();
            for (class, n) in &report.class_counts {
                out.push_str(&format!("class {class}: {n} samples\n"));
            }
            out.push_str(&format!("total: {}\n", report.total));
            out.push_str(&format!("disagreements: {}\n", report.disagreements.len()));
            for d in &report.disagreements {
                out.push_str(&format!(
                    "  sample {} ({}) hrep={} prep={}\n",
                    d.index, d.class, d.in_hrep, d.in_prep
                ));
            }
            out.push_str(&format!(
                "structural checks: {}\n",
                if structure.passed() { "pass" } else { "fail" }
            ));
            for f in &structure.failures {
                out.push_str(&format!("  {f}\n"));
            }
            write_out(&cli.output, &out)?;
            Ok(if report.agreed() && structure.passed() {
                0
            } else {
                3
            })
        }
        Cmd::Lift { kind } => {
            let (polys, note) = match kind {
                LiftCmd::Prism { base, dim } => {
                    let rep = closed_form_rep(base_kind(*base), *dim);
                    (prism_lift(&rep), String::new())
                }
                LiftCmd::Pyramid { base, dim } => {
                    let rep = closed_form_rep(base_kind(*base), *dim);
                    let (polys, map) = pyramid_lift(&rep, &base_vertices(*base, *dim))?;
                    (
                        polys,
                        format!("# base scale {}\n", format_rat(&map.scale)),
                    )
                }
            };
            let body = match cli.format {
                FormatArg::Json => emit_sparse_polys_json(&polys),
                FormatArg::Text => format!("{note}{}", emit_sparse_polys_text(&polys)),
            };
            write_out(&cli.output, &body)?;
            Ok(0)
        }
        Cmd::Projectivize { input, vertex } => {
            let h = read_hrep(input)?;
            let proj = projectivize_pointed(&h, *vertex)?;
            let mut out = format!(
                "# direction c = ({})\n",
                proj.c.iter().map(format_rat).collect::<Vec<_>>().join(", ")
            );
            out.push_str(&format!(
                "# vertex at origin: ({})\n",
                proj.vertex
                    .iter()
                    .map(format_rat)
                    .collect::<Vec<_>>()
                    .join(", ")
            ));
            out.push_str(&emit_hrep(&proj.polytope));
            write_out(&cli.output, &out)?;
            Ok(0)
        }
        Cmd::Mu { d } => {
            if *d < 2 {
                return Err(Error::Unsupported(
                    "polynomial count defined for d >= 2".to_string(),
                ));
            }
            write_out(&cli.output, &format!("{}\n", mu_count(*d)))?;
            Ok(0)
        }
        Cmd::Grid { input, bbox, step } => {
            let h = read_hrep(input)?;
            let (lo_s, hi_s) = bbox.split_once(':').ok_or_else(|| Error::Parse {
                line: 0,
                msg: "bbox must be `lo1,lo2[,lo3]:hi1,hi2[,hi3]`".to_string(),
            })?;
            let lo = parse_point(lo_s, h.dim)?;
            let hi = parse_point(hi_s, h.dim)?;
            let step = parse_rat(step).map_err(|msg| Error::Parse { line: 0, msg })?;
            let prep = construct_prep(&h, cli.rho.into())?;
            let csv = grid_eval_csv(&h, &prep, &lo, &hi, &step)?;
            write_out(&cli.output, &csv)?;
            Ok(0)
        }
    }
}

fn base_kind(b: BaseArg) -> ClosedFormKind {
    match b {
        BaseArg::Cube => ClosedFormKind::Cube,
        BaseArg::Simplex => ClosedFormKind::Simplex,
    }
}

fn exit_code_for(e: &Error) -> u8 {
    match e {
        Error::Parse { .. } => 5,
        Error::ResourceGuard(_) => 4,
        _ => 2,
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code_for(&e))
        }
    }
}
