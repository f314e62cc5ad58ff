use std::fs;
use std::io::{self, BufRead, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use braid_core::desugar;
use braid_core::kernel::{TraceMode, DEFAULT_MAX_DEPTH};
use braid_core::syntax;
use braid_core::{Braid, Error, Options, Session};

#[derive(Parser)]
#[command(name = "braid", version, about = "Run programs in the braid language")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run a program, printing the value of each top-level expression.
    Run {
        /// Source file; `-` reads standard input.
        file: PathBuf,
        #[command(flatten)]
        flags: Flags,
    },
    /// Read and evaluate interactively.
    Repl {
        #[command(flatten)]
        flags: Flags,
    },
    /// Print the kernel translation of a program.
    Desugar {
        /// Source file; `-` reads standard input.
        file: PathBuf,
    },
}

#[derive(Args)]
struct Flags {
    /// Object system to preload: none, as, asmi or asmirs.
    #[arg(long, default_value = "none")]
    braid: Braid,
    /// Log every message delivery as a `#send` line.
    #[arg(long)]
    trace_send: bool,
    /// Nesting limit for function application.
    #[arg(long, default_value_t = DEFAULT_MAX_DEPTH)]
    depth: usize,
    /// Seed for `random`.
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

impl Flags {
    fn options(&self) -> Options {
        Options {
            braid: self.braid,
            trace: if self.trace_send {
                TraceMode::Stdout
            } else {
                TraceMode::Off
            },
            max_depth: self.depth,
            seed: self.seed,
        }
    }
}

fn read_source(path: &PathBuf) -> io::Result<String> {
    if path.as_os_str() == "-" {
        io::read_to_string(io::stdin())
    } else {
        fs::read_to_string(path)
            .map_err(|e| io::Error::new(e.kind(), format!("cannot read {}: {e}", path.display())))
    }
}

fn report(e: &Error) -> ExitCode {
    eprintln!("{e}");
    ExitCode::from(e.exit_code() as u8)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Run { file, flags } => run(&file, &flags),
        Command::Desugar { file } => dump(&file),
        Command::Repl { flags } => repl(&flags),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Io(e)) => {
            eprintln!("{e}");
            ExitCode::from(1)
        }
        Err(Failure::Lang(e)) => report(&e),
    }
}

enum Failure {
    Io(io::Error),
    Lang(Error),
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Self {
        Failure::Io(e)
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Lang(e)
    }
}

fn run(file: &PathBuf, flags: &Flags) -> Result<(), Failure> {
    let src = read_source(file)?;
    let session = Session::new(flags.options())?;
    let stdout = io::stdout();
    let mut out = stdout.lock();
    let mut io_err = None;
    session.run_with(&src, |v| {
        if io_err.is_none() {
            io_err = writeln!(out, "{}", session.show(v)).err();
        }
    })?;
    io_err.map_or(Ok(()), |e| Err(e.into()))
}

fn dump(file: &PathBuf) -> Result<(), Failure> {
    let src = read_source(file)?;
    let items = Session::compile(&src)?;
    print!("{}", desugar::dump_program(&items));
    Ok(())
}

fn repl(flags: &Flags) -> Result<(), Failure> {
    let session = Session::new(flags.options())?;
    let stdin = io::stdin();
    let mut lines = stdin.lock().lines();
    let mut buf = String::new();
    loop {
        print!("{}", if buf.is_empty() { "> " } else { ". " });
        io::stdout().flush()?;
        let Some(line) = lines.next() else {
            println!();
            return Ok(());
        };
        let line = line?;
        if buf.is_empty() {
            match line.trim() {
                ":quit" | ":q" => return Ok(()),
                ":env" => {
                    let mut names: Vec<String> = session
                        .interp()
                        .global_names()
                        .iter()
                        .map(|n| n.to_string())
                        .collect();
                    names.sort();
                    println!("{}", names.join(" "));
                    continue;
                }
                t if t.starts_with(":kernel") => {
                    kernel_cmd(t[":kernel".len()..].trim());
                    continue;
                }
                t if t.starts_with(':') => {
                    eprintln!("unknown command {t} (try :quit, :env or :kernel <expr>)");
                    continue;
                }
                "" => continue,
                _ => {}
            }
        }
        buf.push_str(&line);
        buf.push('\n');
        match syntax::parse_program(&buf) {
            Err(e) if e.at_end_of_input() => continue,
            Err(e) => eprintln!("{}", Error::from(e)),
            Ok(_) => {
                if let Err(e) = session.run_with(&buf, |v| println!("{}", session.show(v))) {
                    eprintln!("{e}");
                }
            }
        }
        buf.clear();
    }
}

fn kernel_cmd(src: &str) {
    let shown = syntax::parse_item(src)
        .map_err(Error::from)
        .and_then(|item| Ok(desugar::dump_item(&desugar::desugar_item(&item)?)));
    match shown {
        Ok(text) => println!("{text}"),
        Err(e) => eprintln!("{e}"),
    }
}
