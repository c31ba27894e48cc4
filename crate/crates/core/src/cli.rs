//! Command-line surface: generate and verify formula files, emit arrays and
//! 1-D rules, print point-count bounds.
//!
//! Exit codes: 0 success/pass, 1 verification failure, 2 usage error,
//! 3 construction infeasible.

use crate::bch::{bch_dual_array_with, ArrayBuildOptions};
use crate::build::{
    bounds, build_ball, build_cross_polytope, build_cube, build_cubical_shell, build_gaussian,
    build_orthant, build_radial_exponential, build_simplex, build_simplex3, build_spherical_shell,
    build_sphere5, ArrayFamily, BuildOptions, Sphere5Kind,
};
use crate::format::FormulaFile;
use crate::formula::CubatureFormula;
use crate::hadamard::{hadamard_matrix, hadamard_to_oa};
use crate::kerdock::kerdock_array_seeded;
use crate::measure::MeasureSpec;
use crate::oa::{self, OrthogonalArray, VerifyMode};
use crate::quad::{
    convolutional_chebyshev, equal_weight_find, exp_ray_2point, gauss_2point_uniform,
    gauss_from_moments, QuadMeasure,
};
use crate::verify::{
    verify_exhaustive_budgeted, verify_sampled, verify_structural, Certificate,
    BUDGET_EXHAUSTIVE, TOL_EXHAUSTIVE, TOL_SAMPLED,
};
use crate::{Error, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use std::path::PathBuf;

pub const EXIT_OK: i32 = 0;
pub const EXIT_VERIFY_FAIL: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_INFEASIBLE: i32 = 3;

/// Environment variable overriding the exhaustive operation budget.
pub const BUDGET_ENV: &str = "CUBATURE_OP_BUDGET";

#[derive(Parser, Debug)]
#[command(name = "cubature", about = "Cubature formulas from orthogonal-array thinning")]
pub struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Construct a formula, verify it, and write it as a text file.
    Generate(GenerateArgs),
    /// Re-verify a formula file against exact moments.
    Verify(VerifyArgs),
    /// Construct an orthogonal array and print it.
    Oa(OaArgs),
    /// Print a 1-D quadrature rule.
    Quad(QuadArgs),
    /// Print point-count bounds.
    Bounds(BoundsArgs),
}

#[derive(ValueEnum, Clone, Copy, Debug)]
enum RegionArg {
    Cube,
    CubicalShell,
    Gaussian,
    Sphere,
    Ball,
    SphericalShell,
    Simplex,
    CrossPolytope,
    ExponentialOrthant,
    RadialExponential,
}

#[derive(ValueEnum, Clone, Copy, Debug)]
enum FamilyArg {
    Auto,
    Bch,
    Kerdock,
    Hadamard,
}

impl From<FamilyArg> for ArrayFamily {
    fn from(f: FamilyArg) -> Self {
        match f {
            FamilyArg::Auto => ArrayFamily::Auto,
            FamilyArg::Bch => ArrayFamily::Bch,
            FamilyArg::Kerdock => ArrayFamily::Kerdock,
            FamilyArg::Hadamard => ArrayFamily::Hadamard,
        }
    }
}

#[derive(Args, Debug)]
struct GenerateArgs {
    #[arg(long, value_enum)]
    region: RegionArg,
    /// Ambient coordinate count (barycentric count for the simplex).
    #[arg(long)]
    dim: usize,
    #[arg(long)]
    degree: u32,
    /// Factor alphabet size override (probed when omitted).
    #[arg(long)]
    q: Option<u32>,
    #[arg(long, value_enum, default_value = "auto")]
    array_family: FamilyArg,
    /// Inner radius for shell regions.
    #[arg(long)]
    shell_r: Option<f64>,
    #[arg(long)]
    out: Option<PathBuf>,
    /// Monomial count for sampled verification of large formulas.
    #[arg(long, default_value_t = 10_000)]
    verify_count: u64,
    #[arg(long, default_value_t = 42)]
    seed: u64,
}

#[derive(Args, Debug)]
struct VerifyArgs {
    path: PathBuf,
    #[arg(long, default_value = "auto")]
    strategy: String,
    #[arg(long)]
    tol: Option<f64>,
    #[arg(long, default_value_t = 10_000)]
    count: u64,
    #[arg(long, default_value_t = 42)]
    seed: u64,
    /// Degree to check (defaults to the file's claim).
    #[arg(long)]
    degree: Option<u32>,
}

#[derive(Args, Debug)]
struct OaArgs {
    #[arg(long, default_value_t = 2)]
    q: u32,
    #[arg(long)]
    m: u32,
    #[arg(long)]
    strength: u32,
    #[arg(long, default_value = "bch")]
    family: String,
    #[arg(long, default_value = "auto")]
    verify: String,
    #[arg(long, default_value_t = 20_000)]
    count: u64,
    #[arg(long, default_value_t = 10)]
    seed: u64,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct QuadArgs {
    /// One of: convolutional, gauss2, exp2, equal-weight, from-moments.
    #[arg(long)]
    kind: String,
    #[arg(long)]
    s: Option<u32>,
    #[arg(long)]
    q: Option<u32>,
    #[arg(long)]
    degree: Option<u32>,
    /// Measure for equal-weight: gaussian | exponential-ray.
    #[arg(long)]
    measure: Option<String>,
    /// Moment list for from-moments, comma separated.
    #[arg(long)]
    moments: Option<String>,
    /// Point count for from-moments.
    #[arg(long)]
    points: Option<usize>,
}

#[derive(Args, Debug)]
struct BoundsArgs {
    #[arg(long)]
    dim: usize,
    #[arg(long)]
    degree: u32,
    #[arg(long, default_value_t = false)]
    symmetric: bool,
}

/// Entry point used by the binary; returns the process exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return EXIT_USAGE;
        }
    };
    let outcome = match cli.command {
        Command::Generate(a) => cmd_generate(a),
        Command::Verify(a) => cmd_verify(a),
        Command::Oa(a) => cmd_oa(a),
        Command::Quad(a) => cmd_quad(a),
        Command::Bounds(a) => cmd_bounds(a),
    };
    match outcome {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            match e {
                Error::Infeasible(_) | Error::NonConvergence(_) => EXIT_INFEASIBLE,
                Error::VerificationFailed(_) | Error::ConstructionCheck(_) => EXIT_VERIFY_FAIL,
                _ => EXIT_USAGE,
            }
        }
    }
}

fn op_budget() -> u64 {
    std::env::var(BUDGET_ENV)
        .ok()
        .and_then(|v| v.parse().ok())
        .unwrap_or(BUDGET_EXHAUSTIVE)
}

fn cmd_generate(a: GenerateArgs) -> Result<i32> {
    let opts = BuildOptions {
        family: a.array_family.into(),
        q: a.q,
        array: ArrayBuildOptions { seed: a.seed, ..Default::default() },
    };
    let t = a.degree;
    let formula = match a.region {
        RegionArg::Cube => build_cube(a.dim, t, &opts)?,
        RegionArg::CubicalShell => {
            build_cubical_shell(a.dim, t, shell_r(&a)?, &opts)?
        }
        RegionArg::Gaussian => {
            if t == 5 && a.dim >= 6 && matches!(opts.family, ArrayFamily::Auto) {
                build_sphere5(a.dim, Sphere5Kind::Gaussian, &opts)?
            } else {
                build_gaussian(a.dim, t, &opts)?
            }
        }
        RegionArg::Sphere => {
            if t == 5 && a.dim >= 6 {
                build_sphere5(a.dim, Sphere5Kind::Sphere, &opts)?
            } else {
                let g = build_gaussian(a.dim, t, &opts)?;
                crate::build::radial_project_sphere(&g, t)?
            }
        }
        RegionArg::Ball => build_ball(a.dim, t, &opts)?,
        RegionArg::SphericalShell => {
            build_spherical_shell(a.dim, t, shell_r(&a)?, &opts)?
        }
        RegionArg::Simplex => {
            if t == 3 {
                build_simplex3(a.dim)?
            } else {
                if a.dim < 2 {
                    return Err(Error::InvalidParameter("simplex needs dim >= 2".into()));
                }
                build_simplex(a.dim - 1, t, &opts)?
            }
        }
        RegionArg::CrossPolytope => build_cross_polytope(a.dim, t, &opts)?,
        RegionArg::ExponentialOrthant => build_orthant(a.dim, t, &opts)?,
        RegionArg::RadialExponential => build_radial_exponential(a.dim, t, &opts)?,
    };

    // Verify before reporting success: structural where provenance exists,
    // then exhaustive within budget or the sampled battery.
    let mut summaries = Vec::new();
    if formula.provenance.is_some() {
        let cert = verify_structural(&formula, t)?;
        if !cert.pass {
            return Err(Error::VerificationFailed("structural certificate failed".into()));
        }
        summaries.push(cert.summary());
    }
    let cert = verify_auto(&formula, t, a.verify_count, a.seed)?;
    if !cert.pass {
        return Err(Error::VerificationFailed(format!(
            "generated formula failed verification: {}",
            cert.summary()
        )));
    }
    summaries.push(cert.summary());

    let array_note = formula
        .provenance
        .as_ref()
        .map(|p| {
            format!(
                " array={:?}(rows={},strength={:?})",
                p.array.provenance(),
                p.array.rows_count(),
                p.array.strength()
            )
        })
        .unwrap_or_default();
    let file = FormulaFile {
        formula,
        certificate_summary: summaries.join("; "),
        generator: format!(
            "region={:?} dim={} degree={} family={:?} q={:?} seed={}{array_note}",
            a.region, a.dim, a.degree, a.array_family, a.q, a.seed
        )
        .to_lowercase(),
    };
    println!("points {}", file.formula.count());
    println!("certificate {}", file.certificate_summary);
    if let Some(path) = &a.out {
        file.write_to(path)?;
        println!("wrote {}", path.display());
    }
    Ok(EXIT_OK)
}

fn shell_r(a: &GenerateArgs) -> Result<f64> {
    a.shell_r
        .ok_or_else(|| Error::InvalidParameter("shell regions need --shell-r".into()))
}

fn verify_auto(f: &CubatureFormula, t: u32, count: u64, seed: u64) -> Result<Certificate> {
    match verify_exhaustive_budgeted(f, t, TOL_EXHAUSTIVE, op_budget()) {
        Ok(c) => Ok(c),
        Err(Error::BudgetExceeded(_)) => verify_sampled(f, t, TOL_SAMPLED, count, seed),
        Err(e) => Err(e),
    }
}

fn cmd_verify(a: VerifyArgs) -> Result<i32> {
    let file = FormulaFile::read_from(&a.path)?;
    let f = &file.formula;
    let t = a.degree.unwrap_or(f.degree);
    let cert = match a.strategy.as_str() {
        "auto" => verify_auto(f, t, a.count, a.seed)?,
        "exhaustive" => {
            verify_exhaustive_budgeted(f, t, a.tol.unwrap_or(TOL_EXHAUSTIVE), op_budget())?
        }
        "sampled" => verify_sampled(f, t, a.tol.unwrap_or(TOL_SAMPLED), a.count, a.seed)?,
        "structural" => {
            return Err(Error::InvalidParameter(
                "structural verification needs in-process provenance; files carry only points"
                    .into(),
            ))
        }
        other => {
            return Err(Error::InvalidParameter(format!("unknown strategy `{other}`")));
        }
    };
    println!("certificate {}", cert.summary());
    if let Some(worst) = &cert.worst_monomial {
        println!("worst-monomial {:?}", worst);
    }
    Ok(if cert.pass { EXIT_OK } else { EXIT_VERIFY_FAIL })
}

fn cmd_oa(a: OaArgs) -> Result<i32> {
    let array: OrthogonalArray = match a.family.as_str() {
        "bch" => bch_dual_array_with(
            a.q,
            a.m,
            a.strength,
            &ArrayBuildOptions { sampled_count: a.count, seed: a.seed, ..Default::default() },
        )?,
        "kerdock" => {
            if a.strength != 5 {
                return Err(Error::InvalidParameter("Kerdock arrays have strength 5".into()));
            }
            kerdock_array_seeded(a.m, a.seed)?
        }
        "hadamard" => {
            let h = hadamard_matrix(1usize << a.m)?;
            hadamard_to_oa(&h)?
        }
        other => return Err(Error::InvalidParameter(format!("unknown family `{other}`"))),
    };
    // optional re-verification pass at the requested strength
    match a.verify.as_str() {
        "auto" => {}
        "exhaustive" => {
            let rep =
                oa::verify_strength(&array, a.strength, VerifyMode::Exhaustive, op_budget())?;
            if !rep.passes {
                return Err(Error::VerificationFailed("strength re-check failed".into()));
            }
        }
        "sampled" => {
            let rep = oa::verify_strength(
                &array,
                a.strength,
                VerifyMode::Sampled { count: a.count, seed: a.seed },
                op_budget(),
            )?;
            if !rep.passes {
                return Err(Error::VerificationFailed("strength re-check failed".into()));
            }
        }
        other => return Err(Error::InvalidParameter(format!("unknown verify mode `{other}`"))),
    }
    if array.q() > 10 {
        return Err(Error::InvalidParameter(
            "text output uses one digit per symbol (q <= 10)".into(),
        ));
    }
    let mut out = String::new();
    out.push_str(&format!(
        "{} {} {} {}\n",
        array.q(),
        array.len(),
        array.rows_count(),
        array.strength().unwrap_or(0)
    ));
    for r in 0..array.rows_count() {
        for &s in array.row(r) {
            out.push(char::from_digit(s as u32, 10).unwrap());
        }
        out.push('\n');
    }
    match &a.out {
        Some(path) => std::fs::write(path, out)?,
        None => print!("{out}"),
    }
    Ok(EXIT_OK)
}

fn cmd_quad(a: QuadArgs) -> Result<i32> {
    let quad = match a.kind.as_str() {
        "convolutional" => convolutional_chebyshev(
            a.s.ok_or_else(|| Error::InvalidParameter("--s required".into()))?,
        )?,
        "gauss2" => gauss_2point_uniform(),
        "exp2" => exp_ray_2point(),
        "equal-weight" => {
            let measure = match a.measure.as_deref() {
                Some("gaussian") => QuadMeasure::GaussianUnit,
                Some("exponential-ray") => QuadMeasure::ExponentialRay,
                other => {
                    return Err(Error::InvalidParameter(format!(
                        "--measure gaussian|exponential-ray required, got {other:?}"
                    )))
                }
            };
            equal_weight_find(
                measure,
                a.q.ok_or_else(|| Error::InvalidParameter("--q required".into()))?,
                a.degree.ok_or_else(|| Error::InvalidParameter("--degree required".into()))?,
            )?
        }
        "from-moments" => {
            let list = a
                .moments
                .as_deref()
                .ok_or_else(|| Error::InvalidParameter("--moments required".into()))?;
            let moments: Vec<f64> = list
                .split(',')
                .map(|v| {
                    v.trim()
                        .parse::<f64>()
                        .map_err(|_| Error::InvalidParameter(format!("bad moment `{v}`")))
                })
                .collect::<Result<_>>()?;
            let r = a
                .points
                .ok_or_else(|| Error::InvalidParameter("--points required".into()))?;
            gauss_from_moments(&moments, r)?
        }
        other => return Err(Error::InvalidParameter(format!("unknown kind `{other}`"))),
    };
    println!("degree {}", quad.degree);
    if let Some(z) = &quad.pair_offsets {
        let zs: Vec<String> = z.iter().map(|v| format!("{v}")).collect();
        println!("offsets {}", zs.join(" "));
    }
    for (p, w) in quad.points.iter().zip(&quad.weights) {
        println!("{w} {p}");
    }
    Ok(EXIT_OK)
}

fn cmd_bounds(a: BoundsArgs) -> Result<i32> {
    let b = bounds(a.dim, a.degree, a.symmetric);
    println!("tchakaloff {}", b.tchakaloff);
    if let Some(sym) = b.tchakaloff_symmetric {
        println!("tchakaloff-symmetric {sym}");
    }
    println!("stroud-lower-dim {}", b.stroud_lower_dim);
    println!("stroud-lower-homogeneous {}", b.stroud_lower_homogeneous);
    println!("exact-determination {}", b.exact_determination);
    Ok(EXIT_OK)
}

/// Used by integration tests to construct a measure from CLI-style flags.
pub fn measure_for_region(tag: &str, dim: usize, shell_r: Option<f64>) -> Result<MeasureSpec> {
    crate::format::measure_from_tag(tag, dim, shell_r)
}
