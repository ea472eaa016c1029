use std::fs;
use std::io::{IsTerminal, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{Context, Result};
use clap::{Args, Parser, Subcommand};
use serde_json::json;

use lazyset::eval::{reduce_with, DEFAULT_FUEL};
use lazyset::harness::{self, Corpus, RunConfig};
use lazyset::oracle::{cross_check, default_pool, EnumBounds, Verdict};
use lazyset::typecheck::Checker;
use lazyset::{
    compile, display_type, parse_internal, parse_source, parse_type, print_expr, BuildMode,
    CheckOptions, Constant, Expr, Kind, Outcome, ParseOptions, TypeEnv, TypeId, TypeStore,
};

/// Semantic subtyping with a divergence type for a call-by-need lambda calculus.
#[derive(Parser)]
#[command(name = "lazyset", version)]
struct Cli {
    /// Machine-readable output.
    #[arg(long, global = true)]
    json: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Typecheck a source program and print its type.
    Check {
        file: PathBuf,
        /// Write the derivation as JSON lines (`-` for stdout).
        #[arg(long, value_name = "FILE")]
        trace: Option<PathBuf>,
        #[command(flatten)]
        lang: LangFlags,
    },
    /// Evaluate a program.
    Run {
        file: PathBuf,
        #[arg(long, default_value_t = DEFAULT_FUEL)]
        fuel: usize,
        /// Write every step as JSON lines (`-` for stdout).
        #[arg(long, value_name = "FILE")]
        trace: Option<PathBuf>,
        /// Read the file as an internal-language program.
        #[arg(long)]
        internal: bool,
        #[command(flatten)]
        lang: LangFlags,
    },
    /// Decide `T1 <= T2`. Exit 0 when it holds, 1 when it does not.
    Subtype { t1: String, t2: String },
    /// Decide whether a type is empty.
    Empty { t: String },
    /// Print the disjunctive normal form of a type, grouped by atom kind.
    Dnf { t: String },
    /// Compare the subtyping verdict for `T1 <= T2` with the finite model.
    OracleCheck {
        t1: String,
        t2: String,
        #[arg(long, default_value_t = 3)]
        depth: usize,
        #[arg(long, default_value_t = 2)]
        relsize: usize,
        /// Comma-separated constants, e.g. `0,1,2,true,false`.
        #[arg(long, value_parser = parse_pool)]
        pool: Option<Pool>,
    },
    /// Check progress and preservation over a corpus and generated programs.
    Soundness {
        /// Directory of `.lzs`/`.lzi` programs; the built-in corpus otherwise.
        #[arg(long)]
        corpus: Option<PathBuf>,
        /// Number of generated programs.
        #[arg(long, default_value_t = 0)]
        fuzz: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 10)]
        size: usize,
        #[arg(long, default_value_t = 10_000)]
        fuel: usize,
        /// Steps per program after which preservation is no longer checked.
        #[arg(long, default_value_t = harness::DEFAULT_PRESERVATION_WINDOW)]
        window: usize,
        #[arg(long, value_name = "FILE")]
        junit: Option<PathBuf>,
    },
}

#[derive(Args, Clone, Copy)]
struct LangFlags {
    /// Accept typecases on `Empty`, `Any` and equivalent types.
    #[arg(long)]
    allow_trivial_case: bool,
}

#[derive(Clone)]
struct Pool(Vec<Constant>);

fn parse_pool(s: &str) -> Result<Pool, String> {
    s.split(',')
        .map(str::trim)
        .map(|c| match c {
            "true" => Ok(Constant::Bool(true)),
            "false" => Ok(Constant::Bool(false)),
            n => n
                .parse::<i64>()
                .map(Constant::int)
                .map_err(|_| format!("`{n}` is not an integer or boolean")),
        })
        .collect::<Result<_, _>>()
        .map(Pool)
}

/// Exit code for usage, parse and validation errors.
const USAGE: u8 = 2;

struct Style {
    on: bool,
}

impl Style {
    fn detect() -> Style {
        let disabled = std::env::var("LAZYSET_COLOR").is_ok_and(|v| v == "0");
        Style {
            on: !disabled && std::io::stdout().is_terminal(),
        }
    }

    fn paint(&self, code: &str, s: &str) -> String {
        if self.on {
            format!("\x1b[{code}m{s}\x1b[0m")
        } else {
            s.to_string()
        }
    }

    fn good(&self, s: &str) -> String {
        self.paint("32", s)
    }

    fn bad(&self, s: &str) -> String {
        self.paint("31", s)
    }
}

struct Ctx {
    json: bool,
    style: Style,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    // Diverging programs build deeply nested terms.
    let worker = std::thread::Builder::new()
        .stack_size(harness::WORKER_STACK)
        .spawn(move || {
            let ctx = Ctx {
                json: cli.json,
                style: Style::detect(),
            };
            dispatch(&ctx, cli.command)
        })
        .expect("spawn main worker");
    match worker.join().expect("main worker panicked") {
        Ok(code) => ExitCode::from(code),
        Err(err) => {
            eprintln!("error: {err:#}");
            ExitCode::from(USAGE)
        }
    }
}

fn dispatch(ctx: &Ctx, command: Command) -> Result<u8> {
    let store = TypeStore::new();
    match command {
        Command::Check { file, trace, lang } => check(ctx, &store, &file, trace.as_deref(), lang),
        Command::Run {
            file,
            fuel,
            trace,
            internal,
            lang,
        } => run(ctx, &store, &file, fuel, trace.as_deref(), internal, lang),
        Command::Subtype { t1, t2 } => {
            let (Some(a), Some(b)) = (ty(&store, &t1), ty(&store, &t2)) else {
                return Ok(USAGE);
            };
            let holds = store.subtype(a, b);
            if ctx.json {
                println!("{}", json!({ "subtype": holds }));
            } else if holds {
                println!("{}", ctx.style.good("holds"));
            } else {
                println!("{}", ctx.style.bad("fails"));
            }
            Ok(if holds { 0 } else { 1 })
        }
        Command::Empty { t } => {
            let Some(a) = ty(&store, &t) else {
                return Ok(USAGE);
            };
            let empty = store.is_empty(a);
            if ctx.json {
                println!("{}", json!({ "empty": empty }));
            } else {
                println!("{}", if empty { "empty" } else { "nonempty" });
            }
            Ok(0)
        }
        Command::Dnf { t } => {
            let Some(a) = ty(&store, &t) else {
                return Ok(USAGE);
            };
            dnf(ctx, &store, a);
            Ok(0)
        }
        Command::OracleCheck {
            t1,
            t2,
            depth,
            relsize,
            pool,
        } => {
            let (Some(a), Some(b)) = (ty(&store, &t1), ty(&store, &t2)) else {
                return Ok(USAGE);
            };
            let pool = pool.map(|p| p.0).unwrap_or_else(default_pool);
            let bounds = EnumBounds::new(depth, pool, relsize);
            Ok(oracle(ctx, &store, a, b, &bounds))
        }
        Command::Soundness {
            corpus,
            fuzz,
            seed,
            size,
            fuel,
            window,
            junit,
        } => {
            let mut programs = match corpus {
                Some(dir) => Corpus::load_dir(&dir)
                    .with_context(|| format!("reading corpus {}", dir.display()))?,
                None => Corpus::curated(),
            };
            programs.extend(Corpus::generated(seed, fuzz, size));
            let config = RunConfig {
                fuel,
                preservation_window: window,
                ..RunConfig::default()
            };
            let report = harness::run_corpus(&programs, &config);
            if let Some(path) = junit {
                fs::write(&path, harness::format_junit(&report))
                    .with_context(|| format!("writing {}", path.display()))?;
            }
            if ctx.json {
                println!("{}", harness::format_json(&report));
            } else {
                print!("{}", harness::format_human(&report));
                let verdict = if report.passed() {
                    ctx.style.good("PASS")
                } else {
                    ctx.style.bad("FAIL")
                };
                println!("{verdict}");
            }
            Ok(if report.passed() { 0 } else { 1 })
        }
    }
}

/// A type in the raw grammar, or `None` after reporting the error.
fn ty(store: &TypeStore, src: &str) -> Option<TypeId> {
    match parse_type(store, src, BuildMode::Raw) {
        Ok(t) => Some(t),
        Err(err) => {
            eprintln!("error: {err}");
            None
        }
    }
}

fn read_program(
    store: &TypeStore,
    file: &Path,
    internal: bool,
    lang: LangFlags,
) -> Result<Result<Expr, u8>> {
    let src = fs::read_to_string(file).with_context(|| format!("reading {}", file.display()))?;
    let opts = ParseOptions {
        allow_trivial_case: lang.allow_trivial_case,
    };
    let parsed = if internal {
        parse_internal(store, &src, opts)
    } else {
        parse_source(store, &src, opts)
    };
    Ok(parsed.map_err(|err| {
        eprintln!("{}:{err}", file.display());
        USAGE
    }))
}

fn trace_sink(path: Option<&Path>) -> Result<Option<Box<dyn Write>>> {
    Ok(match path {
        None => None,
        Some(p) if p == Path::new("-") => Some(Box::new(std::io::stdout())),
        Some(p) => Some(Box::new(std::io::BufWriter::new(
            fs::File::create(p).with_context(|| format!("creating {}", p.display()))?,
        ))),
    })
}

fn check(
    ctx: &Ctx,
    store: &TypeStore,
    file: &Path,
    trace: Option<&Path>,
    lang: LangFlags,
) -> Result<u8> {
    let e = match read_program(store, file, false, lang)? {
        Ok(e) => e,
        Err(code) => return Ok(code),
    };
    let opts = CheckOptions {
        allow_trivial_case: lang.allow_trivial_case,
        trace: trace.is_some(),
    };
    let mut checker = Checker::for_program(store, opts, &e);
    let result = match checker.check_source(&TypeEnv::new(), &e) {
        Ok(r) => r,
        Err(err) => {
            if ctx.json {
                println!("{}", json!({ "error": err.to_string() }));
            } else {
                eprintln!("{}: {}", file.display(), ctx.style.bad(&err.to_string()));
            }
            return Ok(1);
        }
    };
    let shown = display_type(store, result.ty);
    if ctx.json {
        println!("{}", json!({ "type": shown }));
    } else {
        println!("{shown}");
    }
    if let Some(mut sink) = trace_sink(trace)? {
        for t in &result.trace {
            let line =
                json!({ "rule": t.rule, "subject": t.subject, "type": display_type(store, t.ty) });
            writeln!(sink, "{line}")?;
        }
        sink.flush()?;
    }
    Ok(0)
}

/// Terms are included in step traces only up to this step.
const TRACE_TERMS_UP_TO: usize = 1000;

fn run(
    ctx: &Ctx,
    store: &TypeStore,
    file: &Path,
    fuel: usize,
    trace: Option<&Path>,
    internal: bool,
    lang: LangFlags,
) -> Result<u8> {
    let internal = internal || file.extension().is_some_and(|x| x == "lzi");
    let e = match read_program(store, file, internal, lang)? {
        Ok(e) => e,
        Err(code) => return Ok(code),
    };
    let program = if internal { e } else { compile(&e) };
    let mut sink = trace_sink(trace)?;
    let mut io_err = None;
    let r = reduce_with(store, &program, fuel, |i, rule, _, term| {
        if let Some(w) = sink.as_mut() {
            let line = if i <= TRACE_TERMS_UP_TO {
                json!({ "step": i, "rule": rule.to_string(), "term": print_expr(store, term) })
            } else {
                json!({ "step": i, "rule": rule.to_string() })
            };
            if let Err(err) = writeln!(w, "{line}") {
                io_err.get_or_insert(err);
            }
        }
    });
    if let Some(err) = io_err {
        return Err(err.into());
    }
    if let Some(mut w) = sink {
        w.flush()?;
    }
    let (name, detail) = match &r.outcome {
        Outcome::Answer => ("answer", None),
        Outcome::OutOfFuel => ("out-of-fuel", None),
        Outcome::Stuck(reason) => ("stuck", Some(reason.to_string())),
        Outcome::Open(x) => ("open", Some(format!("free variable {x}"))),
    };
    let term = print_expr(store, &r.expr);
    if ctx.json {
        println!(
            "{}",
            json!({ "outcome": name, "steps": r.steps, "term": term, "detail": detail })
        );
    } else {
        let styled = if r.outcome == Outcome::Answer {
            ctx.style.good(name)
        } else {
            ctx.style.bad(name)
        };
        println!("{styled} after {} steps", r.steps);
        if let Some(d) = detail {
            println!("{d}");
        }
        println!("{term}");
    }
    Ok(r.outcome.exit_code() as u8)
}

fn kind_name(k: Kind) -> &'static str {
    match k {
        Kind::Bot => "bot",
        Kind::Basic => "basic",
        Kind::Prod => "prod",
        Kind::Arrow => "arrow",
    }
}

fn dnf(ctx: &Ctx, store: &TypeStore, t: TypeId) {
    let split = store.kind_split(t);
    let show =
        |ids: &[TypeId]| -> Vec<String> { ids.iter().map(|&a| display_type(store, a)).collect() };
    if ctx.json {
        let lines: Vec<_> = Kind::ALL
            .iter()
            .flat_map(|&k| split.get(k).iter().map(move |l| (k, l)))
            .map(|(k, l)| json!({ "kind": kind_name(k), "pos": show(&l.pos), "neg": show(&l.neg) }))
            .collect();
        println!("{}", json!({ "lines": lines }));
        return;
    }
    let mut any = false;
    for k in Kind::ALL {
        for l in split.get(k) {
            any = true;
            let mut parts = show(&l.pos);
            parts.extend(show(&l.neg).into_iter().map(|n| format!("~({n})")));
            if parts.is_empty() {
                parts.push("Any".into());
            }
            println!("{:<5}  {}", kind_name(k), parts.join(" & "));
        }
    }
    if !any {
        println!("Empty");
    }
}

fn oracle(ctx: &Ctx, store: &TypeStore, a: TypeId, b: TypeId, bounds: &EnumBounds) -> u8 {
    let verdict = cross_check(store, a, b, bounds);
    let holds = store.subtype(a, b);
    let (name, witness, code) = match &verdict {
        Verdict::Consistent(w) => ("consistent", w.as_ref().map(|d| d.to_string()), 0),
        Verdict::SoundnessViolation(d) => ("soundness-violation", Some(d.to_string()), 1),
        Verdict::Inconclusive => ("inconclusive", None, 3),
    };
    if ctx.json {
        println!(
            "{}",
            json!({ "subtype": holds, "verdict": name, "witness": witness })
        );
    } else {
        let styled = if code == 0 {
            ctx.style.good(name)
        } else {
            ctx.style.bad(name)
        };
        println!("subtype: {}", if holds { "holds" } else { "fails" });
        println!("verdict: {styled}");
        if let Some(w) = witness {
            println!("witness: {w}");
        }
    }
    code
}
