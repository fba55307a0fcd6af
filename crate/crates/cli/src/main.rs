use std::io::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use rauzy_core::layers::{cells_at, AncestorCheck, ChildRule, LayerSet};
use rauzy_core::layers_a::{boundary_a, build_layers_a, ARule, Cell};
use rauzy_core::layers_b::{boundary_b, build_layers_b, s_table, PrefixSumRule};
use rauzy_core::oracle::{enumerate_domain, ColorConvention, DomainOptions};
use rauzy_core::render::{from_domain, from_layers, to_csv, to_svg, Draw, RenderPoint, RenderSpec};
use rauzy_core::selfrep::{build_domain_w, selfrep_frame, tiling_check, translation_vector};
use rauzy_core::verify;
use rauzy_core::{Error, Frame, Strategy, Substitution, TrimRule, Word};

const EXIT_VALIDATION: u8 = 2;
const EXIT_ACCEPTANCE: u8 = 3;
const EXIT_RESOURCE: u8 = 4;

/// Rauzy fractals, layered constructions and self-replicating tilings.
#[derive(Parser)]
#[command(name = "rauzy", version)]
struct Cli {
    /// Worker threads (default: all cores).
    #[arg(long, global = true, env = "RAUZY_THREADS")]
    threads: Option<usize>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Projected prefix vectors of an iterated substitution word.
    Domain(DomainArgs),
    /// Construction A layers up to a level.
    LayersA(LayerArgs),
    /// Construction B layers up to a level.
    LayersB(LayerArgs),
    /// Boundary points traced through ancestor cells.
    Boundary(BoundaryArgs),
    /// Domain of a self-replicating word.
    Selfrep(SelfrepArgs),
    /// Translated copies of a self-replicating domain.
    Tile(TileArgs),
    /// Run every acceptance check and print the reference tables.
    Verify,
}

#[derive(Args, Clone)]
struct Output {
    /// Write CSV here.
    #[arg(long)]
    csv: Option<PathBuf>,
    /// Write SVG here.
    #[arg(long)]
    svg: Option<PathBuf>,
    /// Dot radius in plane units.
    #[arg(long, default_value_t = 0.01)]
    dot_radius: f64,
}

#[derive(Args)]
struct DomainArgs {
    /// Builtin substitution s0..s3.
    #[arg(long, default_value = "s0", conflicts_with = "sub_json")]
    sub: String,
    /// Substitution as JSON: {"d":3,"rules":[[0,1],[0,2],[0]]}.
    #[arg(long)]
    sub_json: Option<PathBuf>,
    #[arg(long, default_value_t = 9, value_parser = clap::value_parser!(u32).range(0..=60))]
    level: u32,
    /// Allow substitutions that are not Pisot.
    #[arg(long)]
    force: bool,
    /// Color by the letter after each point instead of the step letter.
    #[arg(long)]
    color_next: bool,
    /// Project onto the plane orthogonal to the level's own word vector.
    #[arg(long)]
    approx_frame: bool,
    #[command(flatten)]
    out: Output,
}

#[derive(Args)]
struct LayerArgs {
    #[arg(long, allow_negative_numbers = true, default_value_t = 3,
          value_parser = clap::value_parser!(i32).range(-1..=7))]
    level: i32,
    /// Draw the cell of every point that has children.
    #[arg(long)]
    cells: bool,
    #[command(flatten)]
    out: Output,
}

#[derive(Clone, Copy, ValueEnum)]
enum Construction {
    A,
    B,
}

#[derive(Args)]
struct BoundaryArgs {
    #[arg(long, value_enum, default_value_t = Construction::A)]
    construction: Construction,
    #[arg(long, allow_negative_numbers = true, default_value_t = 5,
          value_parser = clap::value_parser!(i32).range(-1..=10))]
    level: i32,
    /// Test children against every ancestor cell, not only the grandparent's.
    #[arg(long)]
    strict: bool,
    #[arg(long)]
    cells: bool,
    #[command(flatten)]
    out: Output,
}

#[derive(Args)]
struct SelfrepArgs {
    #[arg(long, default_value = "0120")]
    word: String,
    #[arg(long, allow_negative_numbers = true, default_value_t = 5,
          value_parser = clap::value_parser!(i32).range(-1..=8))]
    level: i32,
    /// Letter 2 trims three units (reproduces the tribonacci words from 0102010).
    #[arg(long)]
    exception: bool,
    #[command(flatten)]
    out: Output,
}

#[derive(Args)]
struct TileArgs {
    #[arg(long, default_value = "0120")]
    word: String,
    #[arg(long, allow_negative_numbers = true, default_value_t = 4,
          value_parser = clap::value_parser!(i32).range(-1..=7))]
    level: i32,
    /// Copies with every coefficient in -radius..=radius.
    #[arg(long, default_value_t = 1, value_parser = clap::value_parser!(i64).range(0..=3))]
    radius: i64,
    #[arg(long)]
    exception: bool,
    #[command(flatten)]
    out: Output,
}

fn trim_rule(exception: bool) -> TrimRule {
    if exception {
        TrimRule::LetterTwoTrimsThree
    } else {
        TrimRule::Plain
    }
}

fn emit(points: &[RenderPoint], cells: &[Cell], out: &Output) -> Result<()> {
    if out.csv.is_none() && out.svg.is_none() {
        let mut stdout = std::io::stdout().lock();
        stdout.write_all(to_csv(points).as_bytes())?;
        return Ok(stdout.flush()?);
    }
    if let Some(path) = &out.csv {
        write(path, &to_csv(points))?;
    }
    if let Some(path) = &out.svg {
        let spec = RenderSpec {
            radius: out.dot_radius,
            draw: if cells.is_empty() { Draw::Points } else { Draw::Both },
            ..RenderSpec::default()
        };
        write(path, &to_svg(points, cells, &spec)?)?;
    }
    Ok(())
}

fn write(path: &Path, text: &str) -> Result<()> {
    std::fs::write(path, text).with_context(|| format!("writing {}", path.display()))
}

fn load_substitution(args: &DomainArgs) -> Result<Substitution> {
    match &args.sub_json {
        Some(path) => {
            let text = std::fs::read_to_string(path)
                .with_context(|| format!("reading {}", path.display()))?;
            Ok(Substitution::from_json(&text)?)
        }
        None => Substitution::preset_by_name(&args.sub).ok_or_else(|| {
            Error::InvalidSubstitution(format!("unknown preset {:?}, expected s0..s3", args.sub))
                .into()
        }),
    }
}

fn all_cells<R: ChildRule>(rule: &R, frame: &Frame, set: &LayerSet) -> Result<Vec<Cell>> {
    let mut cells = Vec::new();
    for level in -1..set.max_level() {
        cells.extend(cells_at(rule, frame, set, level)?);
    }
    Ok(cells)
}

fn run_domain(args: &DomainArgs) -> Result<()> {
    let sub = load_substitution(args)?;
    let opts = DomainOptions {
        force: args.force,
        color: if args.color_next {
            ColorConvention::NextLetter
        } else {
            ColorConvention::StepLetter
        },
        ..DomainOptions::default()
    };
    let n = args.level as usize;
    let points = enumerate_domain(&sub, n, &opts)?;
    let frame = if args.approx_frame {
        Frame::from_word_vector(&sub, n)?
    } else if args.force {
        Frame::from_substitution(&sub).or_else(|_| Frame::from_word_vector(&sub, n))?
    } else {
        Frame::from_substitution(&sub)?
    };
    emit(&from_domain(&points, n, &frame), &[], &args.out)
}

fn run_layers(args: &LayerArgs, construction: Construction) -> Result<()> {
    let frame = Frame::rauzy();
    let strategy = Strategy::default();
    let next = (args.level + 1).max(0) as usize;
    let (set, cells) = match construction {
        Construction::A => {
            let set = build_layers_a(args.level, strategy);
            let cells = if args.cells {
                all_cells(&ARule::new(next), &frame, &set)?
            } else {
                Vec::new()
            };
            (set, cells)
        }
        Construction::B => {
            let set = build_layers_b(args.level, strategy);
            let cells = if args.cells {
                all_cells(&PrefixSumRule::new(s_table(next), 3), &frame, &set)?
            } else {
                Vec::new()
            };
            (set, cells)
        }
    };
    emit(&from_layers(&set, &frame), &cells, &args.out)
}

fn run_boundary(args: &BoundaryArgs) -> Result<()> {
    let frame = Frame::rauzy();
    let check = if args.strict {
        AncestorCheck::AllAncestors
    } else {
        AncestorCheck::Grandparent
    };
    let strategy = Strategy::default();
    let next = (args.level + 1).max(0) as usize;
    let (set, cells) = match args.construction {
        Construction::A => {
            let set = boundary_a(args.level, &frame, check, strategy)?;
            let cells = if args.cells {
                all_cells(&ARule::new(next), &frame, &set)?
            } else {
                Vec::new()
            };
            (set, cells)
        }
        Construction::B => {
            let set = boundary_b(args.level, &frame, check, strategy)?;
            let cells = if args.cells {
                all_cells(&PrefixSumRule::new(s_table(next), 3), &frame, &set)?
            } else {
                Vec::new()
            };
            (set, cells)
        }
    };
    let counts: Vec<usize> = (0..=args.level).map(|k| set.level(k).len()).collect();
    eprintln!("boundary points per level: {counts:?}");
    emit(&from_layers(&set, &frame), &cells, &args.out)
}

fn run_selfrep(args: &SelfrepArgs) -> Result<()> {
    let word = Word::parse(&args.word, 3)?;
    let rule = trim_rule(args.exception);
    let frame = selfrep_frame(&word, rule)?;
    let set = build_domain_w(&word, rule, args.level, Strategy::default())?;
    eprintln!("limit direction {:?}, {} points", frame.v_inf(), set.len());
    emit(&from_layers(&set, &frame), &[], &args.out)
}

fn run_tile(args: &TileArgs) -> Result<()> {
    let word = Word::parse(&args.word, 3)?;
    let rule = trim_rule(args.exception);
    let strategy = Strategy::default();
    let report = tiling_check(&word, rule, args.level, args.radius, strategy)?;
    eprintln!(
        "{} copies of {} points; {}/{} pairs share lattice points ({} shared); min distance {:.3e}; coverage {:.3}; disjoint: {}",
        report.translations,
        report.domain_points,
        report.colliding_pairs,
        report.pairs_checked,
        report.shared_points,
        report.min_distance,
        report.coverage,
        report.disjoint()
    );
    let frame = selfrep_frame(&word, rule)?;
    let set = build_domain_w(&word, rule, args.level, strategy)?;
    let r = args.radius;
    let mut shifts = std::collections::BTreeSet::new();
    for c01 in -r..=r {
        for c12 in -r..=r {
            for c02 in -r..=r {
                shifts.insert(translation_vector([c01, c12, c02]));
            }
        }
    }
    let mut points = Vec::new();
    for (copy, t) in shifts.iter().enumerate() {
        for p in set.points() {
            let lattice = &p.lattice + t;
            let q = frame.project(&lattice);
            points.push(RenderPoint {
                lattice,
                x: q.x(),
                y: q.y(),
                letter: copy as i32,
                level: p.level,
            });
        }
    }
    emit(&points, &[], &args.out)
}

fn run_verify() -> Result<bool> {
    println!("Pisot matrices");
    for row in verify::table1()? {
        println!(
            "  {}  M = {:?}  reference {:?}  char poly {:?}  lambda {:.4} (reference {:.4})  pisot {}",
            row.name,
            row.matrix.rows(),
            row.reference.rows(),
            row.polynomial,
            row.lambda,
            row.reference_lambda,
            row.is_pisot
        );
    }
    println!("Self-replicating limits");
    for (word, v, reference) in verify::table2()? {
        println!(
            "  {word:<8} ({:.4}, {:.4}, {:.4})  reference ({:.3}, {:.3}, {:.3})",
            v[0], v[1], v[2], reference[0], reference[1], reference[2]
        );
    }
    println!("Acceptance");
    let outcomes = verify::run_all();
    for o in &outcomes {
        println!("  {}", o.line());
    }
    let failed = outcomes.iter().filter(|o| !o.passed).count();
    println!("{} passed, {} failed", outcomes.len() - failed, failed);
    Ok(failed == 0)
}

fn exit_code(err: &anyhow::Error) -> u8 {
    match err.downcast_ref::<Error>() {
        Some(Error::ResourceCap { .. }) => EXIT_RESOURCE,
        Some(_) => EXIT_VALIDATION,
        None => 1,
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(n) = cli.threads {
        if n == 0 {
            eprintln!("error: --threads must be at least 1");
            return ExitCode::from(EXIT_VALIDATION);
        }
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(n).build_global() {
            eprintln!("error: {e}");
            return ExitCode::FAILURE;
        }
    }
    let result = match &cli.command {
        Command::Domain(a) => run_domain(a),
        Command::LayersA(a) => run_layers(a, Construction::A),
        Command::LayersB(a) => run_layers(a, Construction::B),
        Command::Boundary(a) => run_boundary(a),
        Command::Selfrep(a) => run_selfrep(a),
        Command::Tile(a) => run_tile(a),
        Command::Verify => match run_verify() {
            Ok(true) => Ok(()),
            Ok(false) => return ExitCode::from(EXIT_ACCEPTANCE),
            Err(e) => Err(e),
        },
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(exit_code(&e))
        }
    }
}
