//! Command-line front end.
//!
//! Exit codes: 0 success, 1 domain error, 2 I/O or parse error.

use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::json;

use crate::constitutive::{self, Loads, Strains};
use crate::equilibrium::{self, Bifurcation, FamilyArgs, FamilyRegistry};
use crate::error::{Error, Result};
use crate::kinematics::{format_number, Configuration};
use crate::material::{Material, MaterialParams};

pub const EXIT_OK: i32 = 0;
pub const EXIT_DOMAIN: i32 = 1;
pub const EXIT_INPUT: i32 = 2;

#[derive(Debug, Parser)]
#[command(name = "strainrod", version, about = "Strain-limiting Cosserat rod toolkit")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Direction {
    /// Loads to strains.
    Forward,
    /// Strains to loads.
    Inverse,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Check a parameter file and report moduli, orientation and bifurcation predicates.
    Validate {
        params: PathBuf,
        /// Cross-section radius for the strong orientation test.
        #[arg(long)]
        cross_section_radius: Option<f64>,
    },
    /// Evaluate the constitutive law at one point.
    Eval {
        params: PathBuf,
        #[arg(long, value_enum, default_value = "forward")]
        direction: Direction,
        /// Six components: m1 m2 m3 n1 n2 n3 (forward) or u1 u2 u3 v1 v2 v3 (inverse).
        #[arg(long, num_args = 6, allow_hyphen_values = true, required = true)]
        values: Vec<f64>,
        #[arg(long, value_enum, default_value = "csv")]
        format: Format,
    },
    /// Sweep the trivial and sheared tensile branches.
    Branch {
        params: PathBuf,
        #[arg(long, allow_hyphen_values = true)]
        n_min: f64,
        #[arg(long, allow_hyphen_values = true)]
        n_max: f64,
        #[arg(long, default_value_t = 101)]
        count: usize,
        #[arg(long)]
        out: PathBuf,
    },
    /// Sample an equilibrium family and write the configuration CSV and a JSON descriptor.
    State {
        params: PathBuf,
        /// One of: trivial, sheared, twist, helix, bending.
        #[arg(long)]
        family: String,
        #[arg(long, allow_hyphen_values = true)]
        n_thrust: Option<f64>,
        #[arg(long, allow_hyphen_values = true)]
        m3: Option<f64>,
        #[arg(long, allow_hyphen_values = true)]
        m1: Option<f64>,
        #[arg(long, allow_hyphen_values = true)]
        theta: Option<f64>,
        #[arg(long, allow_hyphen_values = true, default_value_t = 0.0)]
        psi0: f64,
        #[arg(long, default_value_t = 1e-3)]
        grid_h: f64,
        #[arg(long)]
        out: PathBuf,
        /// Descriptor path; defaults to the output path with a `.json` extension.
        #[arg(long)]
        descriptor: Option<PathBuf>,
    },
    /// Check the balance laws on a configuration CSV.
    Check {
        state: PathBuf,
        params: PathBuf,
        #[arg(long, value_enum, default_value = "csv")]
        format: Format,
    },
}

/// Exit code for an error.
pub fn exit_code(err: &Error) -> i32 {
    if err.is_input_error() {
        EXIT_INPUT
    } else {
        EXIT_DOMAIN
    }
}

fn load_material(path: &Path) -> Result<Material> {
    Material::new(MaterialParams::from_json_file(path)?)
}

fn write_file(path: &Path, text: &str) -> Result<()> {
    std::fs::write(path, text).map_err(|e| Error::Io(format!("{}: {e}", path.display())))
}

/// Parses `args` and runs the command; returns the exit code.
pub fn run_from<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_INPUT } else { EXIT_OK };
            let rendered = e.render().to_string();
            if e.use_stderr() {
                let _ = write!(err, "{rendered}");
            } else {
                let _ = write!(out, "{rendered}");
            }
            return code;
        }
    };
    run(&cli.command, out, err)
}

pub fn run(command: &Command, out: &mut dyn Write, err: &mut dyn Write) -> i32 {
    let result = match command {
        Command::Validate {
            params,
            cross_section_radius,
        } => validate(params, *cross_section_radius, out),
        Command::Eval {
            params,
            direction,
            values,
            format,
        } => eval(params, *direction, values, *format, out),
        Command::Branch {
            params,
            n_min,
            n_max,
            count,
            out: path,
        } => branch(params, *n_min, *n_max, *count, path, out),
        Command::State {
            params,
            family,
            n_thrust,
            m3,
            m1,
            theta,
            psi0,
            grid_h,
            out: path,
            descriptor,
        } => {
            let args = FamilyArgs {
                thrust: *n_thrust,
                m3: *m3,
                m1: *m1,
                theta: *theta,
                psi0: *psi0,
            };
            state(params, family, &args, *grid_h, path, descriptor.as_deref(), out)
        }
        Command::Check { state, params, format } => check(state, params, *format, out),
    };
    match result {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            exit_code(&e)
        }
    }
}

fn validate(path: &Path, radius: Option<f64>, out: &mut dyn Write) -> Result<i32> {
    let raw = MaterialParams::from_json_file(path)?;
    let mat = Material::new(raw)?;
    let moduli = raw.derived_moduli();
    let p = mat.params();
    writeln!(out, "valid: yes")?;
    writeln!(
        out,
        "normalized: alpha = {}, beta = {}, zeta = {}, eta = {}, iota = {}, p = {}",
        p.alpha, p.beta, p.zeta, p.eta, p.iota, p.p
    )?;
    writeln!(out, "bending modulus (gamma alpha^2) = {}", moduli.bending)?;
    writeln!(out, "twisting modulus (gamma beta^2) = {}", moduli.twisting)?;
    writeln!(out, "shear modulus (gamma zeta^2) = {}", moduli.shearing)?;
    writeln!(out, "dilatational modulus (gamma eta^2) = {}", moduli.dilatational)?;
    writeln!(out, "twist-stretch coupling (gamma iota) = {}", moduli.twist_stretch)?;
    writeln!(out, "orientation_weak_ok = {}", p.orientation_weak_ok())?;
    if let Some(a) = radius {
        // `a` is given in the file's length unit.
        writeln!(out, "orientation_strong_ok({a}) = {}", raw.orientation_strong_ok(a))?;
    }
    let gap = equilibrium::shear_modulus_gap(&mat);
    writeln!(out, "modulus ordering (eta^2 > zeta^2 + iota^2/beta^2) = {}", gap > 0.0)?;
    writeln!(
        out,
        "limiting dilatation (1/k < beta/sqrt(det)) = {}",
        gap > 0.0 && 1.0 / gap < mat.beta() / mat.det().sqrt()
    )?;
    match equilibrium::shear_threshold(&mat) {
        Bifurcation::Threshold(n) => writeln!(out, "N_thresh = {n:.6} ({})", format_number(n))?,
        Bifurcation::Absent(c) => writeln!(out, "no bifurcation: {c}")?,
    }
    Ok(EXIT_OK)
}

fn eval(path: &Path, direction: Direction, values: &[f64], format: Format, out: &mut dyn Write) -> Result<i32> {
    let mat = load_material(path)?;
    let v: [f64; 6] = values
        .try_into()
        .map_err(|_| Error::Parse(format!("expected 6 values, got {}", values.len())))?;
    if v.iter().any(|x| !x.is_finite()) {
        return Err(Error::InvalidArgument("values must be finite".into()));
    }
    let (names, result, form_name, form) = match direction {
        Direction::Forward => {
            let loads = Loads::new([v[0], v[1], v[2]], [v[3], v[4], v[5]]);
            let strains = constitutive::strains_from_loads(&mat, &loads);
            (
                ["u1", "u2", "u3", "v1", "v2", "v3"],
                strains.to_array(),
                "Qstar",
                constitutive::quad_form_qstar(&mat, &loads),
            )
        }
        Direction::Inverse => {
            let strains = Strains::new([v[0], v[1], v[2]], [v[3], v[4], v[5]]);
            let loads = constitutive::loads_from_strains(&mat, &strains)?;
            (
                ["m1", "m2", "m3", "n1", "n2", "n3"],
                loads.to_array(),
                "Q",
                constitutive::quad_form_q(&mat, &strains),
            )
        }
    };
    match format {
        Format::Csv => {
            writeln!(out, "{},{form_name}", names.join(","))?;
            let row: Vec<String> = result.iter().chain([&form]).map(|x| format_number(*x)).collect();
            writeln!(out, "{}", row.join(","))?;
        }
        Format::Json => {
            let mut map = serde_json::Map::new();
            for (n, x) in names.iter().zip(result) {
                map.insert(n.to_string(), json!(x));
            }
            map.insert(form_name.to_string(), json!(form));
            writeln!(out, "{}", serde_json::Value::Object(map))?;
        }
    }
    Ok(EXIT_OK)
}

pub const BRANCH_HEADER: &str = "N,theta,u3,v3,v_shear_amplitude,branch";

/// Branch sweep CSV text.
pub fn branch_csv(mat: &Material, n_min: f64, n_max: f64, count: usize) -> Result<String> {
    let points = equilibrium::branch_sweep(mat, n_min, n_max, count)?;
    let mut text = String::new();
    if let Bifurcation::Absent(c) = equilibrium::shear_threshold(mat) {
        text.push_str(&format!("# no bifurcation: {c}\n"));
    }
    text.push_str(BRANCH_HEADER);
    text.push('\n');
    for pt in points {
        let nums = [pt.thrust, pt.theta, pt.strains.u3, pt.strains.v3, pt.shear_amplitude()];
        let row: Vec<String> = nums.iter().map(|x| format_number(*x)).collect();
        text.push_str(&format!("{},{}\n", row.join(","), pt.branch.as_str()));
    }
    Ok(text)
}

fn branch(path: &Path, n_min: f64, n_max: f64, count: usize, dest: &Path, out: &mut dyn Write) -> Result<i32> {
    let mat = load_material(path)?;
    let text = branch_csv(&mat, n_min, n_max, count)?;
    write_file(dest, &text)?;
    writeln!(
        out,
        "wrote {} rows to {}",
        text.lines().filter(|l| !l.starts_with('#')).count() - 1,
        dest.display()
    )?;
    Ok(EXIT_OK)
}

fn state(
    path: &Path,
    family: &str,
    args: &FamilyArgs,
    h: f64,
    dest: &Path,
    descriptor: Option<&Path>,
    out: &mut dyn Write,
) -> Result<i32> {
    let mat = load_material(path)?;
    let registry = FamilyRegistry::standard();
    let fam = registry.get(family).ok_or_else(|| {
        Error::InvalidArgument(format!(
            "unknown family '{family}', expected one of {}",
            registry.names().join(", ")
        ))
    })?;
    let sampled = fam.build(&mat, args)?.sample(&mat, fam.name(), h)?;
    let json_path = descriptor
        .map(Path::to_path_buf)
        .unwrap_or_else(|| dest.with_extension("json"));
    write_file(dest, &sampled.configuration.to_csv())?;
    write_file(&json_path, &sampled.descriptor.to_json())?;
    writeln!(
        out,
        "wrote {} samples of '{}' to {} and {}",
        sampled.configuration.len(),
        fam.name(),
        dest.display(),
        json_path.display()
    )?;
    Ok(EXIT_OK)
}

fn check(state: &Path, params: &Path, format: Format, out: &mut dyn Write) -> Result<i32> {
    let mat = load_material(params)?;
    let config = Configuration::read_csv(state)?;
    let report = equilibrium::check_balance(&mat, &config, None, None)?;
    let ok = report.passes();
    match format {
        Format::Csv => {
            writeln!(out, "force_residual,moment_residual,tolerance,h,max_load,verdict")?;
            writeln!(
                out,
                "{},{},{},{},{},{}",
                format_number(report.force),
                format_number(report.moment),
                format_number(report.tolerance()),
                format_number(report.h),
                format_number(report.max_load),
                if ok { "pass" } else { "fail" }
            )?;
        }
        Format::Json => {
            let v = json!({
                "force_residual": report.force,
                "moment_residual": report.moment,
                "tolerance": report.tolerance(),
                "h": report.h,
                "max_load": report.max_load,
                "pass": ok,
            });
            writeln!(out, "{v}")?;
        }
    }
    Ok(if ok { EXIT_OK } else { EXIT_DOMAIN })
}
