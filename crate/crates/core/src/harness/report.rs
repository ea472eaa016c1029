use std::fmt::Write;

use super::{Preservation, RunOutcome, SoundnessReport};

/// Pretty JSON. A report without programs prints as `{}`.
pub fn format_json(report: &SoundnessReport) -> String {
    if report.programs.is_empty() {
        return "{}".to_string();
    }
    serde_json::to_string_pretty(report).expect("report serializes")
}

fn outcome_name(o: &RunOutcome) -> &'static str {
    match o {
        RunOutcome::Answer => "answer",
        RunOutcome::OutOfFuel => "out-of-fuel",
        RunOutcome::Stuck => "stuck",
        RunOutcome::Open => "open",
        RunOutcome::IllTyped => "ill-typed",
    }
}

/// One line per program, then a totals line of `key=value` pairs.
pub fn format_human(report: &SoundnessReport) -> String {
    let mut out = String::new();
    for p in &report.programs {
        let mark = if p.hard_failure() { "FAIL" } else { "ok  " };
        let _ = write!(
            out,
            "{mark} {:<24} {:<11} steps={} preserved={} exhausted={} refuted={}",
            p.id,
            outcome_name(&p.outcome),
            p.steps,
            p.preserved,
            p.exhausted,
            p.refuted
        );
        if let Some(ty) = &p.ty {
            let _ = write!(out, " type={ty}");
        }
        out.push('\n');
        if let Some(d) = &p.detail {
            let _ = writeln!(out, "     {d}");
        }
        for s in &p.step_reports {
            if let Preservation::Refuted(m) | Preservation::SearchExhausted(m) = &s.verdict {
                let _ = writeln!(
                    out,
                    "     step {} ({}): {m}",
                    s.index,
                    s.rule.as_deref().unwrap_or("start")
                );
            }
        }
    }
    let t = &report.totals;
    let _ = writeln!(
        out,
        "programs={} answers={} out_of_fuel={} stuck={} open={} ill_typed={} steps={} preserved={} exhausted={} \
         curated_exhausted={} refuted={} empty_types={} failures={}",
        t.programs,
        t.answers,
        t.out_of_fuel,
        t.stuck,
        t.open,
        t.ill_typed,
        t.steps,
        t.preserved,
        t.exhausted,
        t.curated_exhausted,
        t.refuted,
        t.empty_types,
        t.failures
    );
    out
}

fn xml_escape(s: &str) -> String {
    s.replace('&', "&amp;")
        .replace('<', "&lt;")
        .replace('>', "&gt;")
        .replace('"', "&quot;")
}

/// A JUnit XML test suite with one test case per program.
pub fn format_junit(report: &SoundnessReport) -> String {
    let mut out = String::from("<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n");
    let _ = writeln!(
        out,
        "<testsuite name=\"soundness\" tests=\"{}\" failures=\"{}\">",
        report.totals.programs, report.totals.failures
    );
    for p in &report.programs {
        let _ = write!(
            out,
            "  <testcase classname=\"soundness\" name=\"{}\"",
            xml_escape(&p.id)
        );
        if p.hard_failure() {
            let mut msg = format!("{} after {} steps", outcome_name(&p.outcome), p.steps);
            if let Some(d) = &p.detail {
                let _ = write!(msg, ": {d}");
            }
            if p.refuted > 0 {
                let _ = write!(msg, "; {} refuted steps", p.refuted);
            }
            let _ = writeln!(
                out,
                ">\n    <failure message=\"{}\"/>\n  </testcase>",
                xml_escape(&msg)
            );
        } else {
            out.push_str("/>\n");
        }
    }
    out.push_str("</testsuite>\n");
    out
}
