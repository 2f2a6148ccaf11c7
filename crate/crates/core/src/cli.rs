//! Command-line front end.
//!
//! Exit codes: 0 success, 1 verification failure, 2 usage error,
//! 3 domain or parse error, 4 I/O error.

use std::ffi::OsString;
use std::fs;

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::chart::ChartPoint;
use crate::error::{Error, Result};
use crate::families::{FamilyCase, Interval, Manifest, PRESETS};
use crate::nullity::{extract_nullity, write_nullity_csv, NullityRow};
use crate::verify::report::write_sink;
use crate::verify::{emit_report, run_suites, GridMode, ReportFormat, SampleGrid, Suite, Tolerances};

pub const EXIT_OK: i32 = 0;
pub const EXIT_VERIFY_FAILED: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_DOMAIN: i32 = 3;
pub const EXIT_IO: i32 = 4;

const DEFAULT_BOX: &str = "-1,1,-1,1,1,3";

const GRAMMAR_HELP: &str = "\
STRUCTURES:
  Exactly one of --preset, --manifest or --case selects the structure.
  Presets: ex1, h3-sl2, heisenberg.
  Inline families: --case case1|case2 with functions --r, --f, --s of z and
  --domain ZMIN,ZMAX (open interval on which r must stay positive).

EXPRESSIONS (r, f, s and manifest components):
  expr     := term ((\"+\" | \"-\") term)*
  term     := unary ((\"*\" | \"/\") unary)*
  unary    := \"-\" unary | power
  power    := primary (\"^\" exponent)?
  exponent := \"-\"? INTEGER | \"(\" \"-\"? INTEGER \")\"
  primary  := NUMBER | VARIABLE | FUNC \"(\" expr \")\" | \"(\" expr \")\"
  FUNC     := sqrt | exp | ln | sin | cos
  VARIABLE := z for r, f, s; x, y, z for manifest components
  \"^\" binds tighter than unary minus: -z^2 is -(z^2).

GRIDS:
  --grid lattice:N | lattice:NX,NY,NZ   inclusive lattice over --box
  --grid random:N                       N seeded uniform points in --box
  --box XMIN,XMAX,YMIN,YMAX,ZMIN,ZMAX   default -1,1,-1,1,1,3
  Random grids use ChaCha8 seeded with --seed, drawing x, y, z in order;
  out-of-domain draws are replaced.

SUITES:
  axioms, L1, L2, L3, curvature, main_theorem, deformation:ALPHA

EXIT CODES:
  0 success, 1 verification failure, 2 usage error,
  3 domain or parse error, 4 I/O error";

/// Parsed command line.
#[derive(Debug, Parser)]
#[command(name = "paracontact", version, about = "Verification engine for 3-dimensional paracontact metric structures")]
#[command(after_long_help = GRAMMAR_HELP)]
pub struct CliConfig {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Write a validated structure manifest.
    #[command(after_long_help = GRAMMAR_HELP)]
    Construct {
        #[command(flatten)]
        structure: StructureArgs,
        /// Output path, `-` for standard output.
        #[arg(long, default_value = "-")]
        out: String,
    },
    /// Run check suites on a grid and write a report.
    #[command(after_long_help = GRAMMAR_HELP)]
    Verify {
        #[command(flatten)]
        structure: StructureArgs,
        /// Comma-separated suite list.
        #[arg(long, value_delimiter = ',', value_parser = parse_suite, default_value = "axioms,L1,L2,L3,curvature,main_theorem")]
        suite: Vec<Suite>,
        #[command(flatten)]
        grid: GridArgs,
        #[command(flatten)]
        tolerances: ToleranceArgs,
        #[arg(long, value_enum, default_value_t = ReportFormat::Json)]
        format: ReportFormat,
        /// Report path, `-` for standard output.
        #[arg(long, default_value = "-")]
        out: String,
    },
    /// Write per-point nullity functions as CSV.
    #[command(after_long_help = GRAMMAR_HELP)]
    Nullity {
        #[command(flatten)]
        structure: StructureArgs,
        #[command(flatten)]
        grid: GridArgs,
        /// CSV path, `-` for standard output.
        #[arg(long, default_value = "-")]
        out: String,
    },
    /// Apply a D-homothetic deformation, write its manifest and a report.
    #[command(after_long_help = GRAMMAR_HELP)]
    Deform {
        #[command(flatten)]
        structure: StructureArgs,
        /// Deformation parameter, must be positive.
        #[arg(long)]
        alpha: f64,
        #[command(flatten)]
        grid: GridArgs,
        #[command(flatten)]
        tolerances: ToleranceArgs,
        #[arg(long, value_enum, default_value_t = ReportFormat::Json)]
        format: ReportFormat,
        /// Deformed manifest path, `-` for standard output.
        #[arg(long, default_value = "-")]
        out: String,
        /// Report path, `-` for standard output.
        #[arg(long, default_value = "-")]
        report: String,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum CaseArg {
    Case1,
    Case2,
}

#[derive(Debug, Args)]
#[command(group(clap::ArgGroup::new("source").required(true).multiple(false).args(["preset", "manifest", "case"])))]
pub struct StructureArgs {
    /// Built-in structure.
    #[arg(long, value_parser = clap::builder::PossibleValuesParser::new(PRESETS))]
    pub preset: Option<String>,
    /// Structure manifest (JSON) path.
    #[arg(long)]
    pub manifest: Option<String>,
    /// Family for an inline structure.
    #[arg(long, value_enum, requires_all = ["r", "f", "s", "domain"])]
    pub case: Option<CaseArg>,
    /// r(z) for an inline family.
    #[arg(long, requires = "case")]
    pub r: Option<String>,
    /// f(z) for an inline family.
    #[arg(long, requires = "case")]
    pub f: Option<String>,
    /// s(z) for an inline family.
    #[arg(long, requires = "case")]
    pub s: Option<String>,
    /// ZMIN,ZMAX open interval for an inline family.
    #[arg(long, requires = "case", allow_hyphen_values = true, value_parser = parse_interval)]
    pub domain: Option<Interval>,
}

#[derive(Debug, Args)]
pub struct GridArgs {
    /// lattice:N, lattice:NX,NY,NZ or random:N.
    #[arg(long, default_value = "lattice:5,5,5", value_parser = parse_grid_mode)]
    pub grid: GridSpec,
    /// XMIN,XMAX,YMIN,YMAX,ZMIN,ZMAX.
    #[arg(long = "box", default_value = DEFAULT_BOX, allow_hyphen_values = true, value_parser = parse_box)]
    pub bounds: [[f64; 2]; 3],
    /// Seed for random grids.
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
}

#[derive(Debug, Args)]
pub struct ToleranceArgs {
    /// Tolerance for first-order identities.
    #[arg(long, default_value_t = Tolerances::default().first_order)]
    pub tol_first_order: f64,
    /// Tolerance for curvature identities.
    #[arg(long, default_value_t = Tolerances::default().curvature)]
    pub tol_curvature: f64,
    /// Frame-based checks skip points with smaller λ.
    #[arg(long, default_value_t = Tolerances::default().lambda_min)]
    pub lambda_min: f64,
}

impl ToleranceArgs {
    fn tolerances(&self) -> Tolerances {
        Tolerances { first_order: self.tol_first_order, curvature: self.tol_curvature, lambda_min: self.lambda_min }
    }
}

/// Grid mode before the seed is attached.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GridSpec {
    Lattice([usize; 3]),
    Random(usize),
}

impl GridArgs {
    fn grid(&self) -> Result<SampleGrid> {
        let mode = match self.grid {
            GridSpec::Lattice(counts) => GridMode::Lattice { counts },
            GridSpec::Random(count) => GridMode::Random { count, seed: self.seed },
        };
        SampleGrid::new(self.bounds, mode)
    }
}

fn parse_suite(s: &str) -> std::result::Result<Suite, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

fn parse_numbers<T: std::str::FromStr>(s: &str, n: usize, what: &str) -> std::result::Result<Vec<T>, String> {
    let parts: Vec<&str> = s.split(',').map(str::trim).collect();
    if parts.len() != n {
        return Err(format!("{what} needs {n} comma-separated values"));
    }
    parts.iter().map(|p| p.parse().map_err(|_| format!("invalid number '{p}' in {what}"))).collect()
}

fn parse_interval(s: &str) -> std::result::Result<Interval, String> {
    let v: Vec<f64> = parse_numbers(s, 2, "domain")?;
    if !(v[0] < v[1]) {
        return Err("domain needs ZMIN < ZMAX".into());
    }
    Ok(Interval::new(v[0], v[1]))
}

fn parse_box(s: &str) -> std::result::Result<[[f64; 2]; 3], String> {
    let v: Vec<f64> = parse_numbers(s, 6, "box")?;
    if v.chunks(2).any(|c| !(c[0] <= c[1])) {
        return Err("box needs MIN <= MAX on every axis".into());
    }
    Ok([[v[0], v[1]], [v[2], v[3]], [v[4], v[5]]])
}

fn parse_grid_mode(s: &str) -> std::result::Result<GridSpec, String> {
    let positive = |v: &[usize]| {
        if v.contains(&0) {
            Err("grid counts must be positive".to_string())
        } else {
            Ok(())
        }
    };
    if let Some(rest) = s.strip_prefix("lattice:") {
        let v: Vec<usize> = if rest.contains(',') { parse_numbers(rest, 3, "lattice")? } else { parse_numbers(rest, 1, "lattice")?.repeat(3) };
        positive(&v)?;
        Ok(GridSpec::Lattice([v[0], v[1], v[2]]))
    } else if let Some(rest) = s.strip_prefix("random:") {
        let v: Vec<usize> = parse_numbers(rest, 1, "random")?;
        positive(&v)?;
        Ok(GridSpec::Random(v[0]))
    } else {
        Err(format!("unknown grid '{s}' (expected lattice:... or random:N)"))
    }
}

impl StructureArgs {
    pub fn manifest(&self) -> Result<Manifest> {
        if let Some(name) = &self.preset {
            return Manifest::preset(name);
        }
        if let Some(path) = &self.manifest {
            return Manifest::from_json(&fs::read_to_string(path)?);
        }
        match (self.case, &self.r, &self.f, &self.s, self.domain) {
            (Some(case), Some(r), Some(f), Some(s), Some(z)) => {
                let case = match case {
                    CaseArg::Case1 => FamilyCase::Case1,
                    CaseArg::Case2 => FamilyCase::Case2,
                };
                Ok(Manifest::family(case, r, f, s, z))
            }
            _ => Err(Error::Manifest("incomplete structure specification".into())),
        }
    }
}

fn exit_code(e: &Error) -> i32 {
    match e {
        Error::Io(_) => EXIT_IO,
        _ => EXIT_DOMAIN,
    }
}

fn execute(command: Command) -> Result<i32> {
    match command {
        Command::Construct { structure, out } => {
            let manifest = structure.manifest()?;
            manifest.build()?;
            write_sink(&(manifest.to_json()? + "\n"), &out)?;
            Ok(EXIT_OK)
        }
        Command::Verify { structure, suite, grid, tolerances, format, out } => {
            let s = structure.manifest()?.build()?;
            let report = run_suites(&s, &suite, &grid.grid()?, &tolerances.tolerances())?;
            emit_report(&report, format, &out)?;
            let passed = report.entries.iter().filter(|e| e.pass).count();
            eprintln!("{passed} of {} checks passed", report.entries.len());
            Ok(if report.all_pass() { EXIT_OK } else { EXIT_VERIFY_FAILED })
        }
        Command::Nullity { structure, grid, out } => {
            let s = structure.manifest()?.build()?;
            let points: Vec<ChartPoint> = grid.grid()?.points(&s);
            if points.is_empty() {
                return Err(Error::EmptyGridAfterExclusions);
            }
            let mut rows = Vec::with_capacity(points.len());
            let mut failed = 0;
            for p in &points {
                match extract_nullity(&s, p) {
                    Ok(n) => rows.push(NullityRow::new(p, &n)),
                    Err(_) => failed += 1,
                }
            }
            if failed > 0 {
                eprintln!("{failed} points skipped: nullity extraction failed");
            }
            let mut buf = Vec::new();
            write_nullity_csv(&rows, &mut buf)?;
            write_sink(&String::from_utf8_lossy(&buf), &out)?;
            Ok(EXIT_OK)
        }
        Command::Deform { structure, alpha, grid, tolerances, format, out, report } => {
            let mut manifest = structure.manifest()?;
            let base = manifest.build()?;
            // Deformations compose multiplicatively.
            manifest.deformation = Some(manifest.deformation.unwrap_or(1.0) * alpha);
            manifest.build()?;
            let r = run_suites(&base, &[Suite::Deformation(alpha)], &grid.grid()?, &tolerances.tolerances())?;
            write_sink(&(manifest.to_json()? + "\n"), &out)?;
            emit_report(&r, format, &report)?;
            Ok(if r.all_pass() { EXIT_OK } else { EXIT_VERIFY_FAILED })
        }
    }
}

/// Parses `args` (including the program name) and runs the command.
pub fn run_cli<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let config = match CliConfig::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
        }
    };
    match execute(config.command) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            exit_code(&e)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn grid_specs_parse() {
        assert_eq!(parse_grid_mode("lattice:5").unwrap(), GridSpec::Lattice([5, 5, 5]));
        assert_eq!(parse_grid_mode("lattice:2,3,4").unwrap(), GridSpec::Lattice([2, 3, 4]));
        assert_eq!(parse_grid_mode("random:100").unwrap(), GridSpec::Random(100));
        assert!(parse_grid_mode("random:0").is_err());
        assert!(parse_grid_mode("hex:3").is_err());
        assert_eq!(parse_box(DEFAULT_BOX).unwrap(), [[-1.0, 1.0], [-1.0, 1.0], [1.0, 3.0]]);
        assert!(parse_box("1,0,0,1,0,1").is_err());
    }

    #[test]
    fn usage_errors_exit_two() {
        assert_eq!(run_cli(["paracontact", "verify"]), EXIT_USAGE);
        assert_eq!(run_cli(["paracontact", "verify", "--preset", "ex1", "--manifest", "m.json"]), EXIT_USAGE);
        assert_eq!(run_cli(["paracontact", "verify", "--preset", "nope"]), EXIT_USAGE);
        assert_eq!(run_cli(["paracontact", "verify", "--preset", "ex1", "--suite", "L9"]), EXIT_USAGE);
        assert_eq!(run_cli(["paracontact", "construct", "--case", "case1", "--r", "z"]), EXIT_USAGE);
    }

    #[test]
    fn command_definition_is_consistent() {
        use clap::CommandFactory;
        CliConfig::command().debug_assert();
    }
}
