//! Acceptance run: one line per criterion, non-zero exit if any fails.

use std::time::{Duration, Instant};

use ecsusy_cli::{suites, CheckRecord, Command, RunConfig, VerificationReport};
use ecsusy_core::shifted_ho::{apply_pseudo_ladder, shifted_family, LadderDirection};

type Criterion = (&'static str, fn() -> Outcome);

struct Outcome {
    pass: bool,
    detail: String,
}

fn run(command: Command, cfg: &RunConfig) -> (VerificationReport, Duration) {
    let start = Instant::now();
    let report = suites::run(command, cfg, None).expect("valid config");
    (report, start.elapsed())
}

fn with_suites(suites: &[&str]) -> RunConfig {
    RunConfig {
        suites: Some(suites.iter().map(|s| s.to_string()).collect()),
        ..RunConfig::default()
    }
}

fn matching<'a>(report: &'a VerificationReport, prefix: &str) -> Vec<&'a CheckRecord> {
    report
        .checks
        .iter()
        .filter(|c| c.id.starts_with(prefix))
        .collect()
}

/// All records under `prefix` pass, there is at least one, and every residual is within `bound`.
fn all_within(report: &VerificationReport, prefix: &str, bound: f64) -> (bool, usize, f64) {
    let recs = matching(report, prefix);
    let worst = recs.iter().map(|c| c.residual).fold(0.0, f64::max);
    let ok = !recs.is_empty() && recs.iter().all(|c| c.pass && c.residual <= bound);
    (ok, recs.len(), worst)
}

fn get<'a>(report: &'a VerificationReport, id: &str) -> &'a CheckRecord {
    report
        .check(id)
        .unwrap_or_else(|| panic!("missing check {id}"))
}

fn commutator_suite() -> Outcome {
    let (report, took) = run(Command::VerifyCore, &with_suites(&["commutators"]));
    let (ok, n, worst) = all_within(&report, "commutators.", 1e-10);
    // D-PB plus five deformations, each with the ECSusy relations and four triples
    let expected = 6 * 5;
    let fast = took < Duration::from_secs(5);
    Outcome {
        pass: ok && n == expected && fast,
        detail: format!(
            "{n}/{expected} checks, worst {worst:.2e}, {:.2} s",
            took.as_secs_f64()
        ),
    }
}

fn casimir_value() -> Outcome {
    let (report, _) = run(Command::VerifyCore, &with_suites(&["casimir"]));
    let k = get(&report, "casimir.dpb.k.value");
    let p = get(&report, "casimir.dpb.p.value");
    let (central_ok, _, central) = all_within(&report, "casimir.dpb.", f64::INFINITY);
    let central_worst = matching(&report, "casimir.dpb.")
        .iter()
        .filter(|c| c.id.ends_with(".central"))
        .map(|c| c.residual)
        .fold(0.0, f64::max);
    let pass = k.residual < 1e-11 && p.residual < 1e-11 && central_worst < 1e-10 && central_ok;
    Outcome {
        pass,
        detail: format!(
            "k^2 {:.2e}, p^2 {:.2e}, centrality {central_worst:.2e} (all D-PB Casimir checks worst {central:.2e})",
            k.residual, p.residual
        ),
    }
}

fn tables() -> Outcome {
    let cfg = RunConfig {
        dim: 68,
        m_max: 15,
        ..with_suites(&["tables"])
    };
    let (report, _) = run(Command::VerifyTables, &cfg);
    let floats: Vec<_> = report
        .checks
        .iter()
        .filter(|c| c.id.ends_with(".float"))
        .collect();
    let exacts: Vec<_> = report
        .checks
        .iter()
        .filter(|c| c.id.ends_with(".exact"))
        .collect();
    let float_ok = floats.iter().all(|c| c.pass && c.residual < 1e-10);
    let exact_ok = exacts.iter().all(|c| c.pass);
    let mut flagged: Vec<String> = floats
        .iter()
        .filter(|c| c.printed_form_inconsistent)
        .map(|c| c.id.rsplitn(3, '.').nth(2).unwrap_or("").to_string())
        .collect();
    flagged.sort();
    flagged.dedup();
    let m_top = floats
        .iter()
        .filter_map(|c| {
            c.id.split(".m")
                .nth(1)?
                .split('.')
                .next()?
                .parse::<u64>()
                .ok()
        })
        .max();
    let families = floats.len() / 16;
    let pass = float_ok
        && exact_ok
        && floats.len() == exacts.len()
        && floats.len() == 16 * families
        && families == 20
        && m_top == Some(15)
        && flagged == ["tables.one.a_dag.odd", "tables.one.b_dag.even"]
        && get(&report, "tables.misprints").pass;
    Outcome {
        pass,
        detail: format!(
            "{families} row families x m = 0..{}, {} float + {} exact cells, flagged {}",
            m_top.unwrap_or(0),
            floats.len(),
            exacts.len(),
            flagged.join(", ")
        ),
    }
}

fn eigenstructure() -> Outcome {
    let (core, _) = run(Command::VerifyCore, &with_suites(&["eigen"]));
    let (tables, _) = run(Command::VerifyTables, &with_suites(&["structure"]));
    let labels = [
        get(&core, "eigen.even.labels"),
        get(&core, "eigen.odd.labels"),
        get(&tables, "structure.even.eigenvalues"),
        get(&tables, "structure.odd.eigenvalues"),
    ];
    let worst = labels.iter().map(|c| c.residual).fold(0.0, f64::max);
    let class = get(&core, "eigen.classification");
    Outcome {
        pass: worst < 1e-10 && labels.iter().all(|c| c.pass) && class.pass,
        detail: format!(
            "labels m+1/4, m+3/4 worst {worst:.2e}; {}",
            class.detail.as_deref().unwrap_or("")
        ),
    }
}

fn intertwining() -> Outcome {
    let (report, _) = run(Command::VerifyCore, &with_suites(&["intertwining"]));
    let rels: Vec<_> = matching(&report, "intertwining.")
        .into_iter()
        .filter(|c| c.id[13..].chars().all(|ch| ch.is_ascii_digit()))
        .collect();
    let worst = rels.iter().map(|c| c.residual).fold(0.0, f64::max);
    Outcome {
        pass: rels.len() == 16 && rels.iter().all(|c| c.pass) && worst < 1e-10,
        detail: format!("{} relations, worst {worst:.2e}", rels.len()),
    }
}

fn deformed_families() -> Outcome {
    let (report, _) = run(
        Command::VerifyDeform,
        &with_suites(&["families", "quasi_basis"]),
    );
    let even = get(&report, "families.pairing.even");
    let odd = get(&report, "families.pairing.odd");
    let cross = get(&report, "families.cross_pairing");
    let restored = get(&report, "quasi_basis.proportional_restores");
    let pass = even.residual < 1e-10
        && odd.residual < 1e-10
        && cross.residual > 1e-4
        && restored.residual < 1e-9;
    Outcome {
        pass,
        detail: format!(
            "pairings {:.2e}/{:.2e}, cross pairing {:.2e}, S = lambda T partial sums {:.2e}",
            even.residual, odd.residual, cross.residual, restored.residual
        ),
    }
}

fn shifted_ho() -> Outcome {
    let cfg = with_suites(&["family", "ladder", "tilted"]);
    let (report, took) = run(Command::ShiftedHo, &cfg);
    let bio = get(&report, "family.biorthonormality");
    let (ladder_ok, _, ladder) = all_within(&report, "ladder.lower.", 1e-6);
    let even = get(&report, "tilted.pairing.even");
    let odd = get(&report, "tilted.pairing.odd");

    // absolute sup-norm error, reported alongside the scaled check
    let spec = cfg.grid_spec().unwrap();
    let fam = shifted_family(cfg.grid.n_max, cfg.alpha, &spec).unwrap();
    let mut absolute: f64 = 0.0;
    for n in 1..=8 {
        let lowered = apply_pseudo_ladder(&fam.phi[n], cfg.alpha, LadderDirection::Lower);
        let want = fam.phi[n - 1].scale_real((n as f64).sqrt());
        absolute = absolute.max(lowered.interior_distance(&want).unwrap());
    }
    let pass = bio.residual < 1e-8
        && ladder_ok
        && even.residual < 1e-8
        && odd.residual < 1e-8
        && took < Duration::from_secs(30);
    Outcome {
        pass,
        detail: format!(
            "biorthonormality {:.2e}, ladder n<=8 worst {ladder:.2e} (absolute sup {absolute:.3e}), tilted {:.2e}/{:.2e}, {:.2} s",
            bio.residual,
            even.residual,
            odd.residual,
            took.as_secs_f64()
        ),
    }
}

fn bridge() -> Outcome {
    let (report, _) = run(Command::ShiftedHo, &with_suites(&["bridge"]));
    let (ok, n, worst) = all_within(&report, "bridge.", 1e-6);
    Outcome {
        pass: ok && n == 3,
        detail: format!("phi/psi coordinates and ladder round trip, worst {worst:.2e}"),
    }
}

fn determinism() -> Outcome {
    let mut same = true;
    for command in Command::ALL {
        let cfg = RunConfig::default();
        let a = run(command, &cfg).0.to_json();
        let b = run(command, &cfg).0.to_json();
        same &= a == b;
    }
    Outcome {
        pass: same,
        detail: "two runs of every command with the default config".into(),
    }
}

fn main() {
    let criteria: [Criterion; 9] = [
        (
            "su(1,1) commutators, D-PB and five deformations, N = 64, < 5 s",
            commutator_suite,
        ),
        ("Casimir k^2 = p^2 = -3/16", casimir_value),
        ("action tables, float and exact, misprint flags", tables),
        ("parity ladders and spectrum classification", eigenstructure),
        ("intertwining relations under deformation", intertwining),
        (
            "deformed families and quasi-basis restoration",
            deformed_families,
        ),
        ("shifted oscillator on the grid, < 30 s", shifted_ho),
        ("grid-to-matrix bridge", bridge),
        ("determinism", determinism),
    ];
    let mut failed = 0;
    for (i, (name, f)) in criteria.iter().enumerate() {
        let out = f();
        if !out.pass {
            failed += 1;
        }
        println!(
            "criterion {}: {} {name}: {}",
            i + 1,
            if out.pass { "PASS" } else { "FAIL" },
            out.detail
        );
    }
    println!(
        "{} of {} criteria passed",
        criteria.len() - failed,
        criteria.len()
    );
    if failed > 0 {
        std::process::exit(1);
    }
}
