//! Runs well-typed programs step by step and checks progress and type
//! preservation after every step.

mod generate;
mod report;

use std::path::Path;

use serde::Serialize;

use crate::eval::{step, Rule, StepOutcome};
use crate::lang::{compile, parse_internal, parse_source, Expr, ParseOptions};
use crate::typecheck::{CheckOptions, CheckVerdict, Checker};
use crate::types::{display_type, TypeEnv, TypeId, TypeStore};

pub use generate::{generate, generate_source};
pub use report::{format_human, format_json, format_junit};

/// Steps after which preservation is no longer checked (progress still is).
pub const DEFAULT_PRESERVATION_WINDOW: usize = 300;

/// Diverging programs build deeply nested `let` chains, and terms are
/// traversed recursively.
pub const WORKER_STACK: usize = 1 << 30;

#[derive(Copy, Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Language {
    Source,
    Internal,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CorpusEntry {
    pub id: String,
    pub language: Language,
    pub source: String,
    /// Curated programs must never exhaust the checker's search.
    pub curated: bool,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Corpus {
    pub programs: Vec<CorpusEntry>,
}

const CURATED: &[(&str, &str)] = &[
    ("dup.lzs", include_str!("../../corpus/dup.lzs")),
    (
        "higher_order.lzs",
        include_str!("../../corpus/higher_order.lzs"),
    ),
    ("identity.lzs", include_str!("../../corpus/identity.lzs")),
    (
        "int_or_bool.lzs",
        include_str!("../../corpus/int_or_bool.lzs"),
    ),
    ("letp.lzi", include_str!("../../corpus/letp.lzi")),
    ("loop.lzs", include_str!("../../corpus/loop.lzs")),
    ("neg.lzs", include_str!("../../corpus/neg.lzs")),
    ("neg_neg.lzs", include_str!("../../corpus/neg_neg.lzs")),
    ("neg_true.lzs", include_str!("../../corpus/neg_true.lzs")),
    ("overload.lzs", include_str!("../../corpus/overload.lzs")),
    ("pair_case.lzs", include_str!("../../corpus/pair_case.lzs")),
    (
        "projection.lzs",
        include_str!("../../corpus/projection.lzs"),
    ),
    ("typecase.lzs", include_str!("../../corpus/typecase.lzs")),
];

fn language_of(name: &str) -> Language {
    if name.ends_with(".lzi") {
        Language::Internal
    } else {
        Language::Source
    }
}

impl Corpus {
    /// The built-in curated programs.
    pub fn curated() -> Corpus {
        let programs = CURATED
            .iter()
            .map(|(id, src)| CorpusEntry {
                id: id.to_string(),
                language: language_of(id),
                source: src.trim().to_string(),
                curated: true,
            })
            .collect();
        Corpus { programs }
    }

    /// Every `.lzs` and `.lzi` file of `dir`, in name order.
    pub fn load_dir(dir: &Path) -> std::io::Result<Corpus> {
        let mut programs = Vec::new();
        for entry in std::fs::read_dir(dir)? {
            let path = entry?.path();
            let name = path
                .file_name()
                .and_then(|n| n.to_str())
                .unwrap_or_default()
                .to_string();
            if name.ends_with(".lzs") || name.ends_with(".lzi") {
                let source = std::fs::read_to_string(&path)?.trim().to_string();
                programs.push(CorpusEntry {
                    id: name.clone(),
                    language: language_of(&name),
                    source,
                    curated: true,
                });
            }
        }
        programs.sort_by(|a, b| a.id.cmp(&b.id));
        Ok(Corpus { programs })
    }

    /// `count` generated programs; program `i` uses seed `seed + i`.
    pub fn generated(seed: u64, count: usize, size: usize) -> Corpus {
        let programs = (0..count as u64)
            .map(|i| CorpusEntry {
                id: format!("gen-{:06}", seed + i),
                language: Language::Source,
                source: generate_source(seed + i, size),
                curated: false,
            })
            .collect();
        Corpus { programs }
    }

    pub fn extend(&mut self, other: Corpus) {
        self.programs.extend(other.programs);
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "verdict", content = "detail", rename_all = "kebab-case")]
pub enum Preservation {
    Preserved,
    /// The reduct has no `let`, so the check is not a search, and it failed.
    Refuted(String),
    /// Some `let` split strategy might exist that the checker did not try.
    SearchExhausted(String),
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct StepReport {
    pub index: usize,
    /// `None` for the compiled program before any step.
    pub rule: Option<String>,
    pub type_before: Option<String>,
    #[serde(flatten)]
    pub verdict: Preservation,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum RunOutcome {
    Answer,
    OutOfFuel,
    Stuck,
    Open,
    IllTyped,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ProgramReport {
    pub id: String,
    pub curated: bool,
    pub ty: Option<String>,
    pub outcome: RunOutcome,
    /// Why the program got stuck, demanded a free variable, or did not typecheck.
    pub detail: Option<String>,
    pub steps: usize,
    pub preserved: usize,
    pub exhausted: usize,
    pub refuted: usize,
    /// Synthesized types that were empty.
    pub empty_types: usize,
    /// Whether the final answer checks against the program's type.
    pub answer_typechecks: Option<bool>,
    pub step_reports: Vec<StepReport>,
}

impl ProgramReport {
    /// Stuck, open, ill-typed, refuted, or an answer of the wrong type.
    pub fn hard_failure(&self) -> bool {
        matches!(
            self.outcome,
            RunOutcome::Stuck | RunOutcome::Open | RunOutcome::IllTyped
        ) || self.refuted > 0
            || self.answer_typechecks == Some(false)
            || self.empty_types > 0
            || (self.curated && self.exhausted > 0)
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct Totals {
    pub programs: usize,
    pub answers: usize,
    pub out_of_fuel: usize,
    pub stuck: usize,
    pub open: usize,
    pub ill_typed: usize,
    pub steps: usize,
    pub preserved: usize,
    pub exhausted: usize,
    pub curated_exhausted: usize,
    pub refuted: usize,
    pub empty_types: usize,
    pub failures: usize,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct SoundnessReport {
    pub programs: Vec<ProgramReport>,
    pub totals: Totals,
}

impl SoundnessReport {
    fn from_programs(mut programs: Vec<ProgramReport>) -> Self {
        programs.sort_by(|a, b| a.id.cmp(&b.id));
        let mut t = Totals {
            programs: programs.len(),
            ..Totals::default()
        };
        for p in &programs {
            match p.outcome {
                RunOutcome::Answer => t.answers += 1,
                RunOutcome::OutOfFuel => t.out_of_fuel += 1,
                RunOutcome::Stuck => t.stuck += 1,
                RunOutcome::Open => t.open += 1,
                RunOutcome::IllTyped => t.ill_typed += 1,
            }
            t.steps += p.steps;
            t.preserved += p.preserved;
            t.exhausted += p.exhausted;
            if p.curated {
                t.curated_exhausted += p.exhausted;
            }
            t.refuted += p.refuted;
            t.empty_types += p.empty_types;
            t.failures += p.hard_failure() as usize;
        }
        SoundnessReport {
            programs,
            totals: t,
        }
    }

    pub fn passed(&self) -> bool {
        self.totals.failures == 0
    }
}

#[derive(Copy, Clone, Debug, PartialEq, Eq)]
pub struct RunConfig {
    pub fuel: usize,
    /// Check preservation after each of the first `window` steps; 0 disables it.
    pub preservation_window: usize,
    /// Worker threads; each owns its own type store.
    pub workers: usize,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            fuel: crate::eval::DEFAULT_FUEL,
            preservation_window: DEFAULT_PRESERVATION_WINDOW,
            workers: std::thread::available_parallelism()
                .map(|n| n.get())
                .unwrap_or(1),
        }
    }
}

/// Parses, typechecks and compiles an entry. Returns the program's type and
/// its compiled internal form.
pub fn prepare(store: &TypeStore, entry: &CorpusEntry) -> Result<(TypeId, Expr), String> {
    let opts = ParseOptions::default();
    let e = match entry.language {
        Language::Source => parse_source(store, &entry.source, opts),
        Language::Internal => parse_internal(store, &entry.source, opts),
    }
    .map_err(|e| e.to_string())?;
    let mut checker = Checker::for_program(store, CheckOptions::default(), &e);
    let ty = checker
        .check_source(&TypeEnv::new(), &e)
        .map_err(|e| e.to_string())?
        .ty;
    Ok((ty, compile(&e)))
}

/// Runs one program. Preservation is checked against the type synthesized
/// for the original program.
pub fn run_program(store: &TypeStore, entry: &CorpusEntry, config: &RunConfig) -> ProgramReport {
    let mut report = ProgramReport {
        id: entry.id.clone(),
        curated: entry.curated,
        ty: None,
        outcome: RunOutcome::IllTyped,
        detail: None,
        steps: 0,
        preserved: 0,
        exhausted: 0,
        refuted: 0,
        empty_types: 0,
        answer_typechecks: None,
        step_reports: Vec::new(),
    };
    let (ty, mut cur) = match prepare(store, entry) {
        Ok(p) => p,
        Err(err) => {
            report.detail = Some(err);
            return report;
        }
    };
    report.ty = Some(display_type(store, ty));
    let mut checker = Checker::for_program(store, CheckOptions::default(), &cur);
    let env = TypeEnv::new();
    let check =
        |checker: &mut Checker, report: &mut ProgramReport, index, rule: Option<Rule>, e: &Expr| {
            let verdict = match checker.check_internal(&env, e, ty) {
                CheckVerdict::Holds => {
                    report.preserved += 1;
                    Preservation::Preserved
                }
                CheckVerdict::Fails(msg) if e.contains_let() => {
                    report.exhausted += 1;
                    Preservation::SearchExhausted(msg)
                }
                CheckVerdict::Fails(msg) => {
                    report.refuted += 1;
                    Preservation::Refuted(msg)
                }
            };
            let type_before = checker.synth(&env, e).ok().map(|t| display_type(store, t));
            report.step_reports.push(StepReport {
                index,
                rule: rule.map(|r| r.to_string()),
                type_before,
                verdict,
            });
        };
    if config.preservation_window > 0 {
        check(&mut checker, &mut report, 0, None, &cur);
    }
    loop {
        if report.steps >= config.fuel {
            report.outcome = RunOutcome::OutOfFuel;
            break;
        }
        match step(store, &cur) {
            StepOutcome::Stepped { expr, rule, .. } => {
                report.steps += 1;
                if report.steps <= config.preservation_window {
                    let index = report.steps;
                    check(&mut checker, &mut report, index, Some(rule), &expr);
                }
                cur = expr;
            }
            StepOutcome::IsAnswer => {
                report.outcome = RunOutcome::Answer;
                report.answer_typechecks = Some(checker.check_internal(&env, &cur, ty).holds());
                break;
            }
            StepOutcome::Stuck(reason) => {
                report.outcome = RunOutcome::Stuck;
                report.detail = Some(reason.to_string());
                break;
            }
            StepOutcome::NeedsVariable(x) => {
                report.outcome = RunOutcome::Open;
                report.detail = Some(format!("demands free variable {x}"));
                break;
            }
        }
    }
    report.empty_types = checker.stats.empty_results;
    report
}

/// Runs every program of `corpus`, sharded over worker threads.
pub fn run_corpus(corpus: &Corpus, config: &RunConfig) -> SoundnessReport {
    let workers = config.workers.max(1).min(corpus.programs.len().max(1));
    let mut results = Vec::with_capacity(corpus.programs.len());
    std::thread::scope(|scope| {
        let handles: Vec<_> = (0..workers)
            .map(|w| {
                std::thread::Builder::new()
                    .stack_size(WORKER_STACK)
                    .spawn_scoped(scope, move || {
                        let store = TypeStore::new();
                        corpus
                            .programs
                            .iter()
                            .skip(w)
                            .step_by(workers)
                            .map(|entry| run_program(&store, entry, config))
                            .collect::<Vec<_>>()
                    })
                    .expect("spawn soundness worker")
            })
            .collect();
        for h in handles {
            results.extend(h.join().expect("soundness worker panicked"));
        }
    });
    SoundnessReport::from_programs(results)
}

/// Progress only: every program must reach an answer or run out of fuel.
pub fn run_progress(corpus: &Corpus, fuel: usize) -> SoundnessReport {
    run_corpus(
        corpus,
        &RunConfig {
            fuel,
            preservation_window: 0,
            ..RunConfig::default()
        },
    )
}

/// Progress and preservation.
pub fn run_preservation(corpus: &Corpus, fuel: usize) -> SoundnessReport {
    run_corpus(
        corpus,
        &RunConfig {
            fuel,
            ..RunConfig::default()
        },
    )
}

/// `(fun f (x : Int -> Int) = case y1 = x in Int ? … : 0) bound`, with `n`
/// nested typecases each demanding `x`. The bound expression takes several
/// steps to reach an answer.
pub fn sharing_program(n: usize) -> String {
    let mut body = "1".to_string();
    for i in (1..=n).rev() {
        body = format!("case y{i} = x in Int ? {body} : 0");
    }
    let bound = "(fun g (z : Int -> Int) = z) ((fun h (w : Int -> Int) = w) 4)";
    format!("(fun f (x : Int -> Int) = {body}) ({bound})")
}
