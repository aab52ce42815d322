//! Acceptance run: one line per criterion, nonzero exit if any is red.

use std::process::{Command, ExitCode, Output};
use std::time::{Duration, Instant};

use octrans::prob::{default_cases, verify_duality, ProbabilityBudget};
use serde_json::Value;

const BIN: &str = env!("CARGO_BIN_EXE_octrans");

struct Line {
    id: u8,
    name: &'static str,
    ok: bool,
    detail: String,
}

fn run(args: &[&str]) -> (Output, Duration) {
    let start = Instant::now();
    let out = Command::new(BIN)
        .args(args)
        .env_remove("OCTRANS_MAX_ORDER")
        .output()
        .expect("spawn octrans");
    (out, start.elapsed())
}

fn secs(d: Duration) -> String {
    format!("{:.1} s", d.as_secs_f64())
}

/// Status and failing witnesses of criterion `id` in a suite report.
fn criterion(report: &Value, id: u8) -> (bool, String) {
    let Some(c) = report["criteria"]
        .as_array()
        .and_then(|cs| cs.iter().find(|c| c["id"] == id))
    else {
        return (false, "missing from report".into());
    };
    let checks = c["checks"].as_array().cloned().unwrap_or_default();
    let failing: Vec<String> = checks
        .iter()
        .filter(|k| k["status"] != "pass")
        .map(|k| {
            format!(
                "{}: {}",
                k["property"].as_str().unwrap_or(""),
                k["witnesses"]
            )
        })
        .collect();
    let ok = c["status"] == "pass" && !checks.is_empty();
    let detail = if failing.is_empty() {
        format!("{} checks", checks.len())
    } else {
        failing.join(" | ")
    };
    (ok, detail)
}

fn main() -> ExitCode {
    let mut lines = Vec::new();

    let start = Instant::now();
    let duality: Vec<_> = default_cases()
        .iter()
        .map(|c| verify_duality(c, ProbabilityBudget::default()))
        .collect();
    let elapsed = start.elapsed();
    let failing: Vec<_> = duality
        .iter()
        .filter(|c| !c.passed())
        .map(|c| format!("{}: {:?}", c.property, c.witnesses))
        .collect();
    lines.push(Line {
        id: 1,
        name: "moment-cumulant duality, 20 families, under 10 s",
        ok: failing.is_empty() && elapsed < Duration::from_secs(10),
        detail: if failing.is_empty() {
            secs(elapsed)
        } else {
            failing.join(" | ")
        },
    });

    let (first, first_time) = run(&["verify", "all"]);
    let (second, second_time) = run(&["verify", "all"]);
    let report: Value = serde_json::from_slice(&first.stdout).unwrap_or(Value::Null);

    let named: [(u8, &'static str); 4] = [
        (2, "free factorization with the unit-variance instance"),
        (3, "conditionally free T factorization"),
        (
            4,
            "monotone and conditionally monotone H factorization, dual route",
        ),
        (5, "subordination on every factorization instance"),
    ];
    for (id, name) in named {
        let (ok, detail) = criterion(&report, id);
        lines.push(Line {
            id,
            name,
            ok,
            detail,
        });
    }

    let (sts, sts_time) = run(&["verify", "sts"]);
    let sts_report: Value = serde_json::from_slice(&sts.stdout).unwrap_or(Value::Null);
    let (ok, detail) = criterion(&sts_report, 6);
    let (ok_all, _) = criterion(&report, 6);
    lines.push(Line {
        id: 6,
        name: "Hopf layer on both end-operad instances, under 60 s",
        ok: ok && ok_all && sts.status.success() && sts_time < Duration::from_secs(60),
        detail: format!("{detail}, {}", secs(sts_time)),
    });

    for (id, name) in [
        (7, "classical gl2 factorization"),
        (8, "braid relation on 5 triples"),
        (9, "Fliess matching identities, 10 instances"),
    ] {
        let (ok, detail) = criterion(&report, id);
        lines.push(Line {
            id,
            name,
            ok,
            detail,
        });
    }

    let limit = Duration::from_secs(300);
    let identical = !first.stdout.is_empty() && first.stdout == second.stdout;
    lines.push(Line {
        id: 10,
        name: "verify all under 5 min, byte-identical reports",
        ok: first.status.success()
            && second.status.success()
            && identical
            && first_time < limit
            && second_time < limit,
        detail: format!(
            "exit {:?}/{:?}, {} and {}, {}",
            first.status.code(),
            second.status.code(),
            secs(first_time),
            secs(second_time),
            if identical {
                "identical"
            } else {
                "reports differ"
            }
        ),
    });

    for l in &lines {
        println!(
            "{} criterion {:>2}: {} ({})",
            if l.ok { "PASS" } else { "FAIL" },
            l.id,
            l.name,
            l.detail
        );
    }
    let passed = lines.iter().filter(|l| l.ok).count();
    println!("acceptance: {passed}/{} criteria passed", lines.len());
    if passed == lines.len() {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
