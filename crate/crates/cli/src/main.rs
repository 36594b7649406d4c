use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{ArgGroup, Parser, Subcommand, ValueEnum};

use idpath_cli::derive::{derive, DeriveError, Kind, Target};
use idpath_cli::explain::explain;
use idpath_cli::postulate::telescope_with_postulates;
use idpath_cli::report::{color_from_env, render, Format};
use idpath_cli::run::{check_source, load_signature};
use idpath_core::Signature;

#[derive(Parser)]
#[command(name = "idpath", version, about = "Kernel checker and path witness compiler")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Clone, Copy, ValueEnum)]
enum FormatArg {
    Text,
    Records,
}

#[derive(Subcommand)]
enum Cmd {
    /// Check every directive of a source file.
    Check {
        file: PathBuf,
        /// Enable strong sums even if the file does not set the flag.
        #[arg(long)]
        strong_sums: bool,
        #[arg(long, value_enum, default_value = "text")]
        format: FormatArg,
    },
    /// Run a witness construction and print what it emits.
    #[command(group(ArgGroup::new("target").required(true).args(["ty", "context", "fibration"])))]
    Derive {
        kind: String,
        /// A closed type, e.g. "A".
        #[arg(long = "type")]
        ty: Option<String>,
        /// A telescope, e.g. "(x : A)(b : B x)".
        #[arg(long)]
        context: Option<String>,
        /// A base and fibre separated by `|`, e.g. "(x : A) | (b : B x)".
        #[arg(long)]
        fibration: Option<String>,
        /// A file whose declarations form the signature.
        #[arg(long)]
        sig: Option<PathBuf>,
        #[arg(long)]
        strong_sums: bool,
        /// Also write the output to this file.
        #[arg(long)]
        emit: Option<PathBuf>,
    },
    /// Describe what a derive kind constructs.
    Explain { kind: String },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let code = match cli.cmd {
        Cmd::Check { file, strong_sums, format } => cmd_check(&file, strong_sums, format),
        Cmd::Derive { kind, ty, context, fibration, sig, strong_sums, emit } => {
            let request = match (ty, context, fibration) {
                (Some(t), _, _) => Request::Type(t),
                (_, Some(c), _) => Request::Context(c),
                (_, _, Some(f)) => Request::Fibration(f),
                _ => unreachable!("clap requires one target"),
            };
            cmd_derive(&kind, request, sig.as_deref(), strong_sums, emit.as_deref())
        }
        Cmd::Explain { kind } => match kind.parse::<Kind>() {
            Ok(k) => {
                println!("{}", explain(k));
                0
            }
            Err(e) => {
                eprintln!("{e}");
                2
            }
        },
    };
    ExitCode::from(code)
}

fn cmd_check(file: &Path, strong_sums: bool, format: FormatArg) -> u8 {
    let text = match std::fs::read_to_string(file) {
        Ok(t) => t,
        Err(e) => {
            eprintln!("{}: {e}", file.display());
            return 2;
        }
    };
    let records = match check_source(&text, strong_sums) {
        Ok(r) => r,
        Err(e) => {
            eprintln!("{}:{e}", file.display());
            return 2;
        }
    };
    let format = match format {
        FormatArg::Text => Format::Text,
        FormatArg::Records => Format::Records,
    };
    print!("{}", render(&records, format, color_from_env()));
    if records.iter().all(|r| r.accepted) {
        0
    } else {
        1
    }
}

enum Request {
    Type(String),
    Context(String),
    Fibration(String),
}

/// Splits `base | fibre` at the first `|` outside parentheses.
fn split_fibration(s: &str) -> Option<(&str, &str)> {
    let mut depth = 0i32;
    for (i, c) in s.char_indices() {
        match c {
            '(' => depth += 1,
            ')' => depth -= 1,
            '|' if depth == 0 => return Some((&s[..i], &s[i + 1..])),
            _ => {}
        }
    }
    None
}

fn target(sig: &mut Signature, request: &Request) -> Result<Target, String> {
    match request {
        Request::Type(t) => Ok(Target { tel: telescope_with_postulates(sig, &format!("(x : {t})"))?, split: None }),
        Request::Context(c) => Ok(Target { tel: telescope_with_postulates(sig, c)?, split: None }),
        Request::Fibration(f) => {
            let (base, ext) = split_fibration(f).ok_or("a fibration is written `base | fibre`")?;
            let b = telescope_with_postulates(sig, base)?;
            let tel = telescope_with_postulates(sig, &format!("{base} {ext}"))?;
            Ok(Target { tel, split: Some(b.len()) })
        }
    }
}

fn cmd_derive(kind: &str, request: Request, sig_file: Option<&Path>, strong_sums: bool, emit: Option<&Path>) -> u8 {
    let kind: Kind = match kind.parse() {
        Ok(k) => k,
        Err(e) => {
            eprintln!("{e}");
            return 2;
        }
    };
    let mut sig = match sig_file {
        Some(p) => match std::fs::read_to_string(p).map_err(|e| e.to_string()).and_then(|t| load_signature(&t, strong_sums)) {
            Ok(s) => s,
            Err(e) => {
                eprintln!("{}: {e}", p.display());
                return 2;
            }
        },
        None => {
            let mut s = Signature::new();
            s.strong_sums = strong_sums;
            s
        }
    };
    let target = match target(&mut sig, &request) {
        Ok(t) => t,
        Err(e) => {
            eprintln!("{e}");
            return 2;
        }
    };
    let bundle = match derive(&sig, kind, &target) {
        Ok(b) => b,
        Err(e @ (DeriveError::Input(_) | DeriveError::UnknownKind(_))) => {
            eprintln!("{e}");
            return 2;
        }
        Err(e) => {
            eprintln!("witness failed: {e}");
            return 1;
        }
    };
    let text = bundle.to_text();
    // the output must stand on its own as a source file
    match check_source(&text, false) {
        Ok(rs) if rs.iter().all(|r| r.accepted) => {}
        Ok(rs) => {
            for r in rs.iter().filter(|r| !r.accepted) {
                eprintln!("{}", r.to_text(false));
            }
            eprintln!("witness failed its standalone re-check");
            return 1;
        }
        Err(e) => {
            eprintln!("emitted text does not parse: {e}");
            return 1;
        }
    }
    print!("{text}");
    if let Some(p) = emit {
        if let Err(e) = std::fs::write(p, &text) {
            eprintln!("{}: {e}", p.display());
            return 2;
        }
    }
    0
}
