//! `chroma`: command-line access to the solver, formulas, strategies and
//! verification harness.
//!
//! Exit codes: 0 success, 1 a verification or conjecture check failed,
//! 2 bad usage or a domain error (malformed partition, unknown or
//! inapplicable strategy, budget out of range).

mod render;

use std::cell::RefCell;
use std::io::{BufRead, Write};
use std::path::PathBuf;

use chroma_core::harness::{
    check_b1p_conjecture, check_nonoptimality_theorem, play_game, scan_with, simulate, verify_guarantee, write_csv,
    HumanInput, Palette, ScanConfig, ScanFilter,
};
use chroma_core::{GameState, Mode, Move, Partition, Player, StrategyId, WinCache};
use clap::{Parser, Subcommand, ValueEnum};

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAIL: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

/// Environment variable naming the optional win-vector cache file.
pub const CACHE_ENV: &str = "CHROMA_CACHE";

#[derive(Parser, Debug)]
#[command(name = "chroma", version, about = "Game chromatic numbers of complete multipartite graphs")]
struct Cli {
    /// Output format.
    #[arg(long, global = true, value_enum, default_value_t = Format::Human)]
    format: Format,

    #[command(subcommand)]
    command: Command,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Human,
    Json,
    Csv,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Exact game chromatic number and win vector by exhaustive search.
    Solve { partition: Partition },
    /// Closed-form value from the summary table, when one applies.
    Formula { partition: Partition },
    /// Every known bound, with the reason when one does not apply.
    Bounds { partition: Partition },
    /// Play one game between two fixed strategies.
    Simulate {
        partition: Partition,
        #[command(flatten)]
        game: GameArgs,
        /// Seed for a bare `random` strategy.
        #[arg(long)]
        seed: Option<u64>,
    },
    /// Play interactively; use `human` for the side(s) you control.
    Play {
        partition: Partition,
        #[command(flatten)]
        game: GameArgs,
    },
    /// Check that a strategy wins against every opponent reply.
    Verify {
        #[arg(required_unless_present = "partition_flag")]
        partition: Option<Partition>,
        #[arg(long = "partition", conflicts_with = "partition")]
        partition_flag: Option<Partition>,
        #[arg(long)]
        colors: u32,
        #[arg(long)]
        side: Player,
        #[arg(long)]
        strategy: StrategyId,
        /// Require every move the rule allows to win, not just the
        /// lowest-index one.
        #[arg(long)]
        universal: bool,
    },
    /// Solve every partition up to a vertex count and compare with the table.
    Scan {
        #[arg(long)]
        max_n: u32,
        #[arg(long, default_value = "all")]
        filter: ScanFilter,
        /// Write the sorted CSV here; rows are streamed to stdout meanwhile.
        #[arg(long)]
        out: Option<PathBuf>,
        /// Worker threads (0 = all cores).
        #[arg(long, default_value_t = 0)]
        jobs: usize,
        /// Record per-row wall time (output then differs between runs).
        #[arg(long)]
        timing: bool,
        /// Also check every rule's guarantees against the solver.
        #[arg(long)]
        triangle: bool,
    },
    /// Mechanical checks of open and proved optimality statements.
    Conjecture {
        #[command(subcommand)]
        which: Conjecture,
    },
}

#[derive(clap::Args, Debug)]
struct GameArgs {
    #[arg(long)]
    colors: u32,
    #[arg(long)]
    alice: String,
    #[arg(long)]
    bob: String,
}

#[derive(Subcommand, Debug)]
enum Conjecture {
    /// Does B1' win for Bob wherever optimal Bob wins?
    B1p {
        #[arg(long)]
        max_n: u32,
        #[arg(long)]
        universal: bool,
    },
    /// Composite rule versus the simple Alice rules on K[4,3,…,3,1,1].
    Nonopt {
        #[arg(long)]
        k: usize,
        #[arg(long)]
        universal: bool,
    },
}

fn mode(universal: bool) -> Mode {
    if universal {
        Mode::Universal
    } else {
        Mode::Deterministic
    }
}

/// Strategy name, where a bare `random` takes `seed` (default 0).
fn strategy(name: &str, seed: Option<u64>) -> chroma_core::Result<StrategyId> {
    if name == "random" {
        return Ok(StrategyId::Random(seed.unwrap_or(0)));
    }
    name.parse()
}

struct Io<'a> {
    out: &'a mut dyn Write,
    err: &'a mut dyn Write,
    format: Format,
}

type CmdResult = Result<i32, Box<dyn std::error::Error>>;

/// Parses `args` (including the program name) and runs the command.
pub fn run<I, T>(args: I, stdin: &mut dyn BufRead, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let text = e.render().to_string();
            let _ = if e.use_stderr() {
                write!(stderr, "{text}")
            } else {
                write!(stdout, "{text}")
            };
            return code;
        }
    };
    let mut io = Io {
        out: stdout,
        err: stderr,
        format: cli.format,
    };
    match dispatch(cli.command, stdin, &mut io) {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(io.err, "error: {e}");
            EXIT_USAGE
        }
    }
}

fn dispatch(cmd: Command, stdin: &mut dyn BufRead, io: &mut Io<'_>) -> CmdResult {
    match cmd {
        Command::Solve { partition } => solve(&partition, io),
        Command::Formula { partition } => {
            render::formula(&partition, io.format, io.out)?;
            Ok(EXIT_OK)
        }
        Command::Bounds { partition } => {
            render::bounds(&partition, io.format, io.out)?;
            Ok(EXIT_OK)
        }
        Command::Simulate { partition, game, seed } => {
            let alice = strategy(&game.alice, seed)?;
            let bob = strategy(&game.bob, seed)?;
            let record = simulate(&partition, game.colors, alice, bob)?;
            render::record(&record, io.format, io.out)?;
            Ok(EXIT_OK)
        }
        Command::Play { partition, game } => play(&partition, &game, stdin, io),
        Command::Verify {
            partition,
            partition_flag,
            colors,
            side,
            strategy,
            universal,
        } => {
            let partition = partition.or(partition_flag).expect("clap requires one of them");
            let v = verify_guarantee(&partition, colors, side, strategy, mode(universal))?;
            render::verdict(&v, io.format, io.out)?;
            Ok(if v.pass { EXIT_OK } else { EXIT_FAIL })
        }
        Command::Scan {
            max_n,
            filter,
            out,
            jobs,
            timing,
            triangle,
        } => scan_cmd(max_n, filter, out, jobs, timing, triangle, io),
        Command::Conjecture { which } => match which {
            Conjecture::B1p { max_n, universal } => {
                let r = check_b1p_conjecture(max_n, mode(universal))?;
                render::b1p(&r, io.format, io.out)?;
                Ok(if r.pass() { EXIT_OK } else { EXIT_FAIL })
            }
            Conjecture::Nonopt { k, universal } => {
                let r = check_nonoptimality_theorem(k, mode(universal))?;
                render::nonopt(&r, io.format, io.out)?;
                Ok(if r.pass() { EXIT_OK } else { EXIT_FAIL })
            }
        },
    }
}

fn solve(partition: &Partition, io: &mut Io<'_>) -> CmdResult {
    let wv = match std::env::var_os(CACHE_ENV) {
        Some(path) => {
            let path = PathBuf::from(path);
            let mut cache = WinCache::load(&path)?;
            let before = cache.len();
            let wv = cache.get_or_solve(partition);
            if cache.len() != before {
                cache.save(&path)?;
            }
            wv
        }
        None => chroma_core::chi_g(partition),
    };
    render::solve(&wv, io.format, io.out)?;
    Ok(EXIT_OK)
}

fn scan_cmd(
    max_n: u32,
    filter: ScanFilter,
    out: Option<PathBuf>,
    jobs: usize,
    timing: bool,
    triangle: bool,
    io: &mut Io<'_>,
) -> CmdResult {
    let config = ScanConfig {
        max_n,
        filter,
        jobs,
        timing,
        triangle,
    };
    let rows = if out.is_some() {
        // Stream rows in completion order while the workers run.
        let (tx, rx) = std::sync::mpsc::channel::<String>();
        std::thread::scope(|scope| {
            let worker = scope.spawn(move || {
                let tx = std::sync::Mutex::new(tx);
                scan_with(&config, &|row| {
                    let _ = tx.lock().expect("channel lock").send(render::csv_line(&row.csv_record()));
                })
            });
            for line in rx {
                let _ = writeln!(io.out, "{line}");
            }
            worker.join().expect("scan thread panicked")
        })?
    } else {
        scan_with(&config, &|_| {})?
    };
    match &out {
        Some(path) => {
            let file = std::fs::File::create(path)?;
            write_csv(&rows, std::io::BufWriter::new(file))?;
            writeln!(io.err, "wrote {} rows to {}", rows.len(), path.display())?;
        }
        None => render::scan(&rows, io.format, io.out)?,
    }
    let violations: usize = rows.iter().map(|r| r.triangle_violations.len()).sum();
    if violations > 0 {
        for v in rows.iter().flat_map(|r| &r.triangle_violations) {
            writeln!(
                io.err,
                "consistency violation: {} as {} wins K[{}] with {} colors against the solver",
                v.strategy, v.side, v.partition, v.budget
            )?;
        }
        return Ok(EXIT_FAIL);
    }
    Ok(EXIT_OK)
}

/// Reads human moves from the input stream, prompting on the output.
struct Prompt<'a, 'b> {
    input: &'a mut dyn BufRead,
    out: &'a RefCell<&'b mut dyn Write>,
}

impl HumanInput for Prompt<'_, '_> {
    fn pick(&mut self, state: &GameState, palette: &Palette, legal: &[Move]) -> Option<Move> {
        let mut out = self.out.borrow_mut();
        let _ = writeln!(out, "{} to move ({} of {} colors used):", state.turn(), state.used(), state.budget());
        for (i, m) in legal.iter().enumerate() {
            let _ = writeln!(out, "  [{i}] {}", render::describe_move(state, palette, *m));
        }
        loop {
            let _ = write!(out, "move> ");
            let _ = out.flush();
            let mut line = String::new();
            match self.input.read_line(&mut line) {
                Ok(0) | Err(_) => return None,
                Ok(_) => {}
            }
            match line.trim().parse::<usize>() {
                Ok(i) if i < legal.len() => return Some(legal[i]),
                _ => {
                    let _ = writeln!(out, "enter a number between 0 and {}", legal.len() - 1);
                }
            }
        }
    }
}

fn play(partition: &Partition, game: &GameArgs, stdin: &mut dyn BufRead, io: &mut Io<'_>) -> CmdResult {
    let alice = strategy(&game.alice, None)?;
    let bob = strategy(&game.bob, None)?;
    let out: RefCell<&mut dyn Write> = RefCell::new(&mut *io.out);
    let mut human = Prompt { input: stdin, out: &out };
    if game.colors >= 1 && game.colors <= partition.n() {
        let empty = GameState::new(partition.clone(), game.colors);
        write!(out.borrow_mut(), "{}", render::board(&empty, &Palette::new(partition.k())))?;
    }
    let mut fixed = false;
    let result = play_game(partition, game.colors, alice, bob, &mut human, &mut |state, palette, mv| {
        let mut w = out.borrow_mut();
        let _ = writeln!(
            w,
            "{} colors part{} with color {}{}",
            mv.mover,
            mv.part,
            mv.color,
            if mv.fresh { " (new)" } else { "" }
        );
        if !fixed && state.fixing_move_played() {
            fixed = true;
            let _ = writeln!(w, "*** fixing move: every part is started, Alice can no longer lose ***");
        }
        let _ = write!(w, "{}", render::board(state, palette));
    });
    match result {
        Ok(record) => {
            let mut w = out.borrow_mut();
            writeln!(w, "outcome: {} ({} colors used)", record.outcome, record.colors_used)?;
            Ok(EXIT_OK)
        }
        Err(chroma_core::Error::Aborted(msg)) => {
            writeln!(io.err, "aborted: {msg}")?;
            Ok(EXIT_USAGE)
        }
        Err(e) => Err(e.into()),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn run_str(args: &[&str]) -> (i32, String, String) {
        let mut out = Vec::new();
        let mut err = Vec::new();
        let argv = std::iter::once("chroma").chain(args.iter().copied());
        let code = run(argv, &mut std::io::empty(), &mut out, &mut err);
        (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
    }

    #[test]
    fn usage_errors_exit_two() {
        assert_eq!(run_str(&[]).0, EXIT_USAGE);
        assert_eq!(run_str(&["solve", "3,0"]).0, EXIT_USAGE);
        assert_eq!(run_str(&["simulate", "3,3", "--colors", "3", "--alice", "zz", "--bob", "b1"]).0, EXIT_USAGE);
        assert_eq!(run_str(&["simulate", "3,3", "--colors", "9", "--alice", "a1", "--bob", "b1"]).0, EXIT_USAGE);
        assert_eq!(run_str(&["--help"]).0, EXIT_OK);
    }

    #[test]
    fn bare_random_takes_seed() {
        assert_eq!(strategy("random", Some(9)).unwrap(), StrategyId::Random(9));
        assert_eq!(strategy("random:4", Some(9)).unwrap(), StrategyId::Random(4));
        assert_eq!(strategy("b1p", None).unwrap(), StrategyId::B1P);
    }
}
