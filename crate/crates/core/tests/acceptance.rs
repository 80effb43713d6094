//! One line per acceptance criterion: `PASS`/`FAIL`, the criterion, timing and
//! a summary. Exits non-zero if any criterion fails.

use std::process::ExitCode;
use std::time::{Duration, Instant};

use flowpoly::suites::{run_suite, Check, Suite, SuiteOptions};

struct Criterion {
    id: usize,
    title: &'static str,
    budget: Option<Duration>,
    checks: Vec<Check>,
    elapsed: Duration,
}

fn run(suite: Suite) -> (Vec<Check>, Duration) {
    let start = Instant::now();
    let checks = match run_suite(suite, SuiteOptions::default()) {
        Ok(res) => res.checks,
        Err(e) => vec![Check::new(format!("{suite} suite"), false, format!("error: {e}"))],
    };
    (checks, start.elapsed())
}

fn main() -> ExitCode {
    let secs = Duration::from_secs;
    let mut criteria = Vec::new();
    let mut push = |id, title, budget, (checks, elapsed): (Vec<Check>, Duration)| {
        criteria.push(Criterion { id, title, budget, checks, elapsed });
    };

    push(1, "chamber tables for A2 and A3", Some(secs(5)), run(Suite::Appendix));

    let (cry, cry_time) = run(Suite::Cry);
    let (faces, volumes): (Vec<Check>, Vec<Check>) = cry.into_iter().partition(|c| c.name.starts_with("cry face"));
    push(2, "CRY relative volumes n=3..7", Some(secs(120)), (volumes, cry_time));
    push(3, "CRY face identity n=4..6", None, (faces.into_iter().filter(|c| !c.name.ends_with("n=7")).collect(), Duration::ZERO));

    push(4, "Ehrhart = DP = constant term on [0,4]^r", Some(secs(120)), run(Suite::Oracle));
    push(5, "reciprocity at regular points of A2, A3", None, run(Suite::Reciprocity));
    push(6, "Morris constants", None, run(Suite::Morris));
    push(7, "transmutation t-form = s-form, leading part = volume", None, run(Suite::Lidskii));
    push(8, "divisibility laws r <= 4", None, run(Suite::Divisibility));
    push(9, "symmetry identities", None, run(Suite::Symmetry));
    push(10, "chamber counts", Some(secs(30)), run(Suite::Chambers));

    let mut all_ok = true;
    for c in &criteria {
        let in_budget = c.budget.is_none_or(|b| c.elapsed <= b);
        let (binding, literal): (Vec<&Check>, Vec<&Check>) = c.checks.iter().partition(|x| x.is_binding());
        let ok = !binding.is_empty() && binding.iter().all(|x| x.passed) && in_budget;
        all_ok &= ok;
        let budget = c.budget.map_or(String::new(), |b| format!(" (budget {}s)", b.as_secs()));
        let count = |xs: &[&Check]| format!("{}/{}", xs.iter().filter(|x| x.passed).count(), xs.len());
        if literal.iter().any(|x| !x.passed) {
            println!(
                "FAIL criterion {:>2} (as stated): {} [{} checks]; recorded deviation: {}",
                c.id,
                c.title,
                count(&literal),
                literal[0].deviation.as_deref().unwrap_or_default()
            );
        }
        println!(
            "{} criterion {:>2}{}: {} [{} checks, {:.2}s{}]",
            if ok { "PASS" } else { "FAIL" },
            c.id,
            if literal.is_empty() { "" } else { " (corrected)" },
            c.title,
            count(&binding),
            c.elapsed.as_secs_f64(),
            budget
        );
        for x in c.checks.iter().filter(|x| !x.passed) {
            println!("      failed {}: {}", x.name, x.detail);
        }
    }
    if all_ok {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
