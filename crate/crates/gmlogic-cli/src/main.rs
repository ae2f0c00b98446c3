use clap::{Args, Parser, Subcommand, ValueEnum};
use gmlogic::controls::{find_family, SearchOptions};
use gmlogic::frame::{self, ComboKind, PowersetSpec};
use gmlogic::semantics::ml_fragment;
use gmlogic::theories::{decide, Budget, Theory, Verdict};
use gmlogic::{parse, Direction};
use gmlogic_cli::corpus::Shape;
use gmlogic_cli::experiments::{self, Experiment};
use gmlogic_cli::report::Report;
use gmlogic_cli::{CliError, EXIT_ASSERTION, EXIT_USAGE};
use std::collections::BTreeSet;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

/// Finite-frame modal logic of forcing and grounds.
///
/// Formulas use `~ & | -> <->`, `[u] <u>` (up) and `[d] <d>` (down), `true`,
/// `false` and lower-case letters. Exit codes: 3 usage or syntax error,
/// 4 budget exceeded, 5 experiment assertion failed.
#[derive(Parser)]
#[command(name = "gmlogic", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Parse a formula and show its canonical form, size and letters.
    Parse { formula: String },
    /// Print a formula in canonical form.
    Print { formula: String },
    /// Decide validity; exit 0 valid, 1 invalid (countermodel printed), 2 unknown.
    Decide {
        #[arg(long, value_parser = parse_theory)]
        theory: Theory,
        /// Cap on elimination atoms and on valuations examined. The default
        /// decides every formula of size 7 over two letters; countermodel
        /// frames are searched up to 6 worlds.
        #[arg(long, default_value_t = Budget::default().nodes)]
        budget: u64,
        formula: String,
    },
    /// Model-check a formula at the point of a frame file; exit 0 true, 1 false.
    Check {
        #[arg(long)]
        frame: PathBuf,
        formula: String,
    },
    /// Compute the substitution-closed validities at the point and classify them.
    Ml {
        #[arg(long)]
        frame: PathBuf,
        #[arg(long, value_enum)]
        direction: Dir,
        #[arg(long, default_value_t = 1)]
        letters: usize,
        #[arg(long, default_value_t = 5)]
        size: usize,
    },
    /// Search for an independent family of buttons and switches at the point.
    Controls {
        #[arg(long)]
        frame: PathBuf,
        #[arg(long, value_enum)]
        direction: OneDir,
        #[arg(long, default_value_t = 0)]
        buttons: usize,
        #[arg(long, default_value_t = 0)]
        switches: usize,
    },
    /// Write a generated frame to a file.
    Gen(GenArgs),
    /// Run an experiment suite and write its report.
    Experiment {
        #[arg(value_parser = parse_experiment)]
        name: Experiment,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Args)]
struct GenArgs {
    #[arg(long, value_enum)]
    kind: Kind,
    /// World count of a cluster or chain.
    #[arg(long, default_value_t = 2)]
    size: usize,
    /// Button count of a bs or combo frame.
    #[arg(long, default_value_t = 1)]
    buttons: usize,
    /// Switch count of a bs or combo frame.
    #[arg(long, default_value_t = 0)]
    switches: usize,
    /// Cluster size of a combo frame.
    #[arg(long, default_value_t = 2)]
    cluster: usize,
    #[arg(long, value_enum, default_value_t = Graft::Below)]
    graft: Graft,
    /// Button indices of a powerset frame, e.g. `0,1`.
    #[arg(long, default_value = "")]
    button_indices: String,
    /// Parity classes of a powerset frame, e.g. `2,3,4;5,6,7`.
    #[arg(long, default_value = "")]
    classes: String,
    /// Point of a powerset frame (default: every index).
    #[arg(long)]
    point: Option<String>,
    #[arg(short = 'o', long = "output")]
    output: PathBuf,
}

#[derive(Clone, Copy, ValueEnum)]
enum Kind {
    Point,
    Cluster,
    Chain,
    Bs,
    Powerset,
    Combo,
}

#[derive(Clone, Copy, ValueEnum)]
enum Graft {
    Below,
    Above,
}

#[derive(Clone, Copy, ValueEnum)]
enum Dir {
    Up,
    Down,
    Both,
}

#[derive(Clone, Copy, ValueEnum)]
enum OneDir {
    Up,
    Down,
}

impl From<OneDir> for Direction {
    fn from(d: OneDir) -> Direction {
        match d {
            OneDir::Up => Direction::Up,
            OneDir::Down => Direction::Down,
        }
    }
}

fn parse_theory(s: &str) -> Result<Theory, String> {
    Theory::from_name(s).ok_or_else(|| format!("unknown theory {s:?} (pl, s4, s4.2, s5)"))
}

fn parse_experiment(s: &str) -> Result<Experiment, String> {
    s.parse()
}

fn parse_indices(s: &str) -> Result<Vec<usize>, CliError> {
    s.split(',')
        .map(str::trim)
        .filter(|t| !t.is_empty())
        .map(|t| t.parse().map_err(|_| CliError::Usage(format!("bad index {t:?}"))))
        .collect()
}

fn write_file(path: &Path, text: &str) -> Result<(), CliError> {
    std::fs::write(path, text).map_err(|source| CliError::Io {
        path: path.display().to_string(),
        source,
    })
}

fn load(path: &Path) -> Result<gmlogic::PointedModel, CliError> {
    Ok(frame::load(path)?.model())
}

fn frame_name(path: &Path) -> String {
    path.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_default()
}

fn run(cmd: Command) -> Result<i32, CliError> {
    let start = Instant::now();
    match cmd {
        Command::Parse { formula } => {
            let f = parse(&formula)?;
            println!("formula={f}");
            println!("size={}", f.size());
            println!("letters={}", f.letters().into_iter().collect::<Vec<_>>().join(","));
            Ok(0)
        }
        Command::Print { formula } => {
            println!("{}", parse(&formula)?);
            Ok(0)
        }
        Command::Decide { theory, budget, formula } => {
            let f = parse(&formula)?;
            let budget = Budget {
                nodes: budget,
                ..Budget::default()
            };
            match decide(theory, &f, &budget)? {
                Verdict::Valid => {
                    println!("Valid");
                    Ok(0)
                }
                Verdict::Invalid(cm) => {
                    println!("Invalid");
                    let m = &cm.model;
                    print!("{}", frame::render("countermodel", m.frame(), Some(m.point()), m.valuation()));
                    Ok(1)
                }
                Verdict::Unknown(why) => {
                    println!("Unknown: {why}");
                    Ok(2)
                }
            }
        }
        Command::Check { frame, formula } => {
            let f = parse(&formula)?;
            let m = load(&frame)?;
            let holds = gmlogic::semantics::holds_at(&m, m.point(), &f)?;
            println!("{holds}");
            Ok(if holds { 0 } else { 1 })
        }
        Command::Ml {
            frame,
            direction,
            letters,
            size,
        } => {
            let m = load(&frame)?;
            let dirs: BTreeSet<Direction> = match direction {
                Dir::Up => [Direction::Up].into(),
                Dir::Down => [Direction::Down].into(),
                Dir::Both => Direction::ALL.into(),
            };
            let rep = ml_fragment(&m, letters, size, &dirs)?;
            let mut r = Report::new();
            r.push("frame", frame_name(&frame));
            r.push("point", m.point());
            r.push(
                "direction",
                dirs.iter().map(|d| d.name()).collect::<Vec<_>>().join(","),
            );
            r.push_fragment(&rep);
            print!("{}", r.render(start.elapsed()));
            Ok(0)
        }
        Command::Controls {
            frame,
            direction,
            buttons,
            switches,
        } => {
            let m = load(&frame)?;
            match find_family(&m, direction.into(), buttons, switches, &SearchOptions::default())? {
                Some(cert) => {
                    let mut r = Report::new();
                    r.push("frame", frame_name(&frame));
                    r.push("point", m.point());
                    r.push("direction", Direction::from(direction).name());
                    r.push_controls(Some(&cert));
                    r.push("certificate.entries", cert.table.len());
                    r.push("certificate.verified", cert.verify());
                    print!("{}", r.body());
                }
                None => println!("none"),
            }
            Ok(0)
        }
        Command::Gen(args) => {
            let shape = match args.kind {
                Kind::Point => Shape::Point,
                Kind::Cluster => Shape::Cluster(args.size),
                Kind::Chain => Shape::Chain(args.size),
                Kind::Bs => Shape::Bs {
                    buttons: args.buttons,
                    switches: args.switches,
                },
                Kind::Powerset => {
                    let classes = args
                        .classes
                        .split(';')
                        .filter(|c| !c.trim().is_empty())
                        .map(parse_indices)
                        .collect::<Result<Vec<_>, _>>()?;
                    let spec = PowersetSpec {
                        buttons: parse_indices(&args.button_indices)?,
                        classes,
                    };
                    let point = match &args.point {
                        Some(p) => parse_indices(p)?,
                        None => spec.indices(),
                    };
                    Shape::Powerset { spec, point }
                }
                Kind::Combo => Shape::Combo {
                    kind: match args.graft {
                        Graft::Below => ComboKind::ClusterBelowBs,
                        Graft::Above => ComboKind::ClusterAboveBs,
                    },
                    cluster: args.cluster,
                    buttons: args.buttons,
                    switches: args.switches,
                },
            };
            if matches!(shape, Shape::Cluster(0) | Shape::Chain(0) | Shape::Combo { cluster: 0, .. }) {
                return Err(CliError::Usage("sizes must be positive".into()));
            }
            let m = shape.build()?;
            frame::save(&args.output, &shape.to_string(), &m)?;
            Ok(0)
        }
        Command::Experiment { name, out } => {
            let outcome = experiments::run(name)?;
            let text = outcome.full_report().render(start.elapsed());
            if let Some(path) = &out {
                write_file(path, &text)?;
            }
            print!("{text}");
            if outcome.passed() {
                Ok(0)
            } else {
                eprintln!("failed: {}", outcome.failures().join(", "));
                Ok(EXIT_ASSERTION)
            }
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { 0 };
            let _ = e.print();
            return ExitCode::from(code as u8);
        }
    };
    match run(cli.command) {
        Ok(code) => ExitCode::from(code as u8),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
