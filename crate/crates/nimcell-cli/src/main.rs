//! `nimcell` — solve heap games, run the automata they emulate, and compile
//! between the two.

mod formats;

use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use formats::{
    load_game, load_input, load_rule, parse_box, to_json_line, to_json_pretty, write_csv_grid,
    write_pbm_grid, write_pbm_rows, CliError, GadgetFile, GameFile, InputFile,
};
use nimcell::cellular::{ca_rows, find_pattern, parse_pattern};
use nimcell::circuits::{bracket_from_rule, gates_from_expr};
use nimcell::games::{solve_invariant, solve_modular, Bounds, Game, PGrid};
use nimcell::reductions::{augment_101, invariant_from_modular, modular_from_gates};
use nimcell::verify::{check_emulation, check_gadget, equiv_bounded};

#[derive(Parser)]
#[command(name = "nimcell", version, about = "Heap games, modular games, and the automata they emulate")]
struct Cli {
    /// Solver worker threads (1 = fully deterministic reference mode;
    /// results are identical for every thread count). Falls back to
    /// NIMCELL_THREADS.
    #[arg(long, global = true)]
    threads: Option<usize>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Pbm,
    Csv,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Target {
    /// The modular game evaluating the circuit.
    Modular,
    /// The pair (G', G'') that differ exactly where 101 occurs.
    #[value(name = "modular-101-pair")]
    Modular101Pair,
    /// The invariant game with the residue-tracking gadget.
    Invariant,
}

#[derive(Subcommand)]
enum Command {
    /// Solve a game file over a box and write the P-grid.
    Solve {
        game: PathBuf,
        /// Box bounds, one exclusive bound per heap: e.g. 25,25
        #[arg(long = "box", value_name = "B0,B1,...")]
        bounds: String,
        /// Output path (stdout when omitted).
        #[arg(short, long)]
        output: Option<PathBuf>,
        /// pbm (two heaps) or csv (any); default picks by dimension.
        #[arg(long, value_enum)]
        format: Option<Format>,
        /// Also write the validity mask of an invariant solve (1 = the cell's
        /// reachable cone stays inside the box, so its value is exact).
        #[arg(long)]
        mask: Option<PathBuf>,
    },
    /// Run an automaton rule file for T rows over window width W.
    Ca {
        rule: PathBuf,
        rows: usize,
        width: usize,
        /// Report the first occurrence of a 0/1 pattern instead of rendering.
        #[arg(long)]
        find: Option<String>,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Compile a rule file (or bracket expression file) into game files.
    Reduce {
        input: PathBuf,
        #[arg(value_enum)]
        target: Target,
        /// One output path; two for modular-101-pair. The invariant target
        /// also writes a `.gadget.json` sidecar next to its output.
        outputs: Vec<PathBuf>,
    },
    /// Compare the P-grids of two games over a box.
    Equiv {
        a: PathBuf,
        b: PathBuf,
        #[arg(long = "box", value_name = "B0,B1,...")]
        bounds: String,
    },
    /// Cross-check a rule's game pipeline or a modular game's gadget.
    Check {
        input: PathBuf,
        /// Emulation check: horizon T and window W.
        #[arg(long, num_args = 2, value_names = ["T", "W"])]
        emulation: Option<Vec<usize>>,
        /// Gadget check over a tape,time box: e.g. 20,20
        #[arg(long, value_name = "W,H")]
        gadget: Option<String>,
        /// Report path (stdout when omitted).
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Render a game file (solved over a box) or a rule file (run for
    /// box-height rows) as a PBM image.
    Render {
        input: PathBuf,
        /// width,height: box bounds for games, window and horizon for rules.
        #[arg(long = "box", value_name = "W,H")]
        bounds: String,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match configure_threads(cli.threads).and_then(|()| run(cli.command)) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}

fn configure_threads(flag: Option<usize>) -> Result<(), CliError> {
    let threads = match flag {
        Some(n) => Some(n),
        None => match std::env::var("NIMCELL_THREADS") {
            Ok(v) => Some(
                v.parse::<usize>()
                    .map_err(|_| CliError::input(format!("NIMCELL_THREADS={v} is not a number")))?,
            ),
            Err(_) => None,
        },
    };
    if let Some(n) = threads {
        rayon::ThreadPoolBuilder::new()
            .num_threads(n.max(1))
            .build_global()
            .map_err(|e| CliError::input(format!("thread pool: {e}")))?;
    }
    Ok(())
}

fn run(command: Command) -> Result<ExitCode, CliError> {
    match command {
        Command::Solve {
            game,
            bounds,
            output,
            format,
            mask,
        } => cmd_solve(&game, &bounds, output.as_deref(), format, mask.as_deref()),
        Command::Ca {
            rule,
            rows,
            width,
            find,
            output,
        } => cmd_ca(&rule, rows, width, find.as_deref(), output.as_deref()),
        Command::Reduce {
            input,
            target,
            outputs,
        } => cmd_reduce(&input, target, &outputs),
        Command::Equiv { a, b, bounds } => cmd_equiv(&a, &b, &bounds),
        Command::Check {
            input,
            emulation,
            gadget,
            output,
        } => cmd_check(&input, emulation.as_deref(), gadget.as_deref(), output.as_deref()),
        Command::Render {
            input,
            bounds,
            output,
        } => cmd_render(&input, &bounds, output.as_deref()),
    }
}

fn emit(path: Option<&Path>, bytes: &[u8]) -> Result<(), CliError> {
    match path {
        Some(p) => std::fs::write(p, bytes)
            .map_err(|e| CliError::input(format!("{}: {e}", p.display()))),
        None => std::io::stdout()
            .write_all(bytes)
            .map_err(|e| CliError::input(format!("stdout: {e}"))),
    }
}

fn solve_game(game: &Game, bounds: &Bounds) -> Result<(PGrid, Option<PGrid>), CliError> {
    match game {
        Game::Invariant(g) => {
            let solved = solve_invariant(g, bounds)?;
            Ok((solved.grid, Some(solved.reliable)))
        }
        Game::Modular(g) => Ok((solve_modular(g, bounds)?, None)),
    }
}

fn render_grid(grid: &PGrid, format: Option<Format>) -> Result<Vec<u8>, CliError> {
    let format = format.unwrap_or(if grid.bounds().dim() == 2 {
        Format::Pbm
    } else {
        Format::Csv
    });
    match format {
        Format::Pbm => write_pbm_grid(grid),
        Format::Csv => Ok(write_csv_grid(grid)),
    }
}

fn cmd_solve(
    game_path: &Path,
    bounds_spec: &str,
    output: Option<&Path>,
    format: Option<Format>,
    mask_path: Option<&Path>,
) -> Result<ExitCode, CliError> {
    let game = load_game(game_path)?;
    let dims = parse_box(bounds_spec)?;
    if dims.len() != game.heap_count() {
        return Err(CliError::shape(format!(
            "box has {} bounds but the game has {} heaps",
            dims.len(),
            game.heap_count()
        )));
    }
    let bounds = Bounds::new(dims)?;
    let (grid, reliable) = solve_game(&game, &bounds)?;
    emit(output, &render_grid(&grid, format)?)?;
    if let Some(mask_path) = mask_path {
        let mask = reliable.unwrap_or_else(|| PGrid::new_true(bounds));
        emit(Some(mask_path), &render_grid(&mask, format)?)?;
    }
    Ok(ExitCode::SUCCESS)
}

fn cmd_ca(
    rule_path: &Path,
    rows: usize,
    width: usize,
    find: Option<&str>,
    output: Option<&Path>,
) -> Result<ExitCode, CliError> {
    let rule = load_rule(rule_path)?;
    if rows == 0 || width == 0 {
        return Err(CliError::input("need at least one row and one column"));
    }
    if let Some(pattern) = find {
        let pattern = parse_pattern(pattern)
            .ok_or_else(|| CliError::input(format!("pattern {pattern:?} is not a 0/1 string")))?;
        if width < pattern.len() {
            return Err(CliError::shape("window is narrower than the pattern"));
        }
        match find_pattern(&rule, &pattern, rows, width) {
            Some((t, i)) => println!("FOUND {t} {i}"),
            None => println!("NOT-FOUND-WITHIN-BOUND"),
        }
        return Ok(ExitCode::SUCCESS);
    }
    let rows = ca_rows(&rule, rows, width);
    emit(output, &write_pbm_rows(&rows))?;
    Ok(ExitCode::SUCCESS)
}

fn cmd_reduce(input: &Path, target: Target, outputs: &[PathBuf]) -> Result<ExitCode, CliError> {
    let gates = match load_input(input)? {
        InputFile::Rule(rule) => gates_from_expr(&bracket_from_rule(&rule))
            .expect("synthesized expressions are brackets"),
        InputFile::Expr(expr) => gates_from_expr(&expr).map_err(CliError::input)?,
        InputFile::Game(_) => {
            return Err(CliError::input(format!(
                "{}: reduce expects a rule or expression file",
                input.display()
            )))
        }
    };

    let expected_outputs = if target == Target::Modular101Pair { 2 } else { 1 };
    if outputs.len() != expected_outputs {
        return Err(CliError::input(format!(
            "target needs {expected_outputs} output path(s), got {}",
            outputs.len()
        )));
    }

    match target {
        Target::Modular => {
            let game = modular_from_gates(&gates);
            emit(
                Some(&outputs[0]),
                &to_json_line(&GameFile::from_game(&Game::Modular(game))),
            )?;
        }
        Target::Modular101Pair => {
            let (prime, dummy) = augment_101(&gates);
            emit(
                Some(&outputs[0]),
                &to_json_line(&GameFile::from_game(&Game::Modular(prime))),
            )?;
            emit(
                Some(&outputs[1]),
                &to_json_line(&GameFile::from_game(&Game::Modular(dummy))),
            )?;
        }
        Target::Invariant => {
            let modular = modular_from_gates(&gates);
            let (invariant, spec) = invariant_from_modular(&modular);
            emit(
                Some(&outputs[0]),
                &to_json_line(&GameFile::from_game(&Game::Invariant(invariant))),
            )?;
            let sidecar = outputs[0].with_extension("gadget.json");
            emit(Some(&sidecar), &to_json_line(&GadgetFile::from_spec(&spec)))?;
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn cmd_equiv(a_path: &Path, b_path: &Path, bounds_spec: &str) -> Result<ExitCode, CliError> {
    let a = load_game(a_path)?;
    let b = load_game(b_path)?;
    let bounds = Bounds::new(parse_box(bounds_spec)?)?;
    match equiv_bounded(&a, &b, &bounds)? {
        Some(pos) => println!("DIFFER at {pos}"),
        None => println!("EQUAL-WITHIN-BOX"),
    }
    Ok(ExitCode::SUCCESS)
}

fn cmd_check(
    input: &Path,
    emulation: Option<&[usize]>,
    gadget: Option<&str>,
    output: Option<&Path>,
) -> Result<ExitCode, CliError> {
    let all_match = match (emulation, gadget) {
        (Some(args), None) => {
            let rule = load_rule(input)?;
            let report = check_emulation(&rule, args[0], args[1])?;
            emit(output, &to_json_pretty(&report))?;
            report.all_match()
        }
        (None, Some(box_spec)) => {
            let game = match load_game(input)? {
                Game::Modular(g) => g,
                Game::Invariant(_) => {
                    return Err(CliError::input(
                        "the gadget check takes the modular game, not its compilation",
                    ))
                }
            };
            let dims = parse_box(box_spec)?;
            if dims.len() != 2 {
                return Err(CliError::shape("gadget box must be tape,time"));
            }
            let report = check_gadget(&game, &Bounds::new(dims)?)?;
            emit(output, &to_json_pretty(&report))?;
            report.all_match()
        }
        _ => {
            return Err(CliError::input(
                "pass exactly one of --emulation T W or --gadget W,H",
            ))
        }
    };
    Ok(if all_match {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    })
}

fn cmd_render(input: &Path, bounds_spec: &str, output: Option<&Path>) -> Result<ExitCode, CliError> {
    let dims = parse_box(bounds_spec)?;
    match load_input(input)? {
        InputFile::Game(game) => {
            if dims.len() != game.heap_count() {
                return Err(CliError::shape(format!(
                    "box has {} bounds but the game has {} heaps",
                    dims.len(),
                    game.heap_count()
                )));
            }
            let (grid, _) = solve_game(&game, &Bounds::new(dims)?)?;
            emit(output, &write_pbm_grid(&grid)?)?;
        }
        InputFile::Rule(rule) => {
            if dims.len() != 2 {
                return Err(CliError::shape("rule rendering takes width,rows"));
            }
            let (width, rows) = (dims[0] as usize, dims[1] as usize);
            if width == 0 || rows == 0 {
                return Err(CliError::input("need at least one row and one column"));
            }
            emit(output, &write_pbm_rows(&ca_rows(&rule, rows, width)))?;
        }
        InputFile::Expr(_) => {
            return Err(CliError::input(
                "render expects a game or rule file; reduce the expression first",
            ))
        }
    }
    Ok(ExitCode::SUCCESS)
}
