//! The eleven acceptance criteria, each reported on one line.
//!
//! All comparisons are exact; the pinned thresholds are sample counts.

use borel_workbench::borellab::{Check, Status};
use borel_workbench::clireport::{emit_report, exit_code, run_command, run_config, Command, Format, RunConfig};
use serde_json::{json, Value};

const IDENTITY_SAMPLES: usize = 200;
const WORD_SAMPLES: usize = 1000;
const HECKE_PAIRS: usize = 100;
const SPLITTING_SAMPLES: usize = 50;
const GIVE_VECTORS: usize = 10;
const GENERATION_VECTORS: usize = 10;

fn checks(command: Command, p: u32, tweak: impl FnOnce(&mut RunConfig)) -> Vec<Check> {
    let mut cfg = RunConfig::new(command);
    cfg.p = p;
    tweak(&mut cfg);
    cfg.validate().expect("valid configuration");
    run_config(&cfg).checks
}

fn find<'a>(checks: &'a [Check], name: &str) -> Option<&'a Check> {
    checks.iter().find(|c| c.name == name)
}

fn all_pass(checks: &[Check]) -> bool {
    !checks.is_empty() && checks.iter().all(|c| c.status == Status::Pass)
}

fn failing(checks: &[Check]) -> Vec<String> {
    checks.iter().filter(|c| c.status != Status::Pass).map(|c| c.name.clone()).collect()
}

type Outcome = (bool, String);
type Criterion = (&'static str, fn() -> Outcome);

fn identities() -> Outcome {
    let mut notes = Vec::new();
    let mut ok = true;
    for p in [2, 3, 5] {
        let cs = checks(Command::Identities, p, |c| c.trials = IDENTITY_SAMPLES);
        for name in ["trix-identity", "restP-conjugation"] {
            let c = find(&cs, name);
            let good = c.is_some_and(|c| c.status == Status::Pass && c.details["samples"] == json!(IDENTITY_SAMPLES));
            ok &= good;
            if !good {
                notes.push(format!("{name} at p={p}"));
            }
        }
    }
    (ok, format!("{IDENTITY_SAMPLES} samples per identity at p=2,3,5; failing: {notes:?}"))
}

fn round_trips() -> Outcome {
    let mut notes = Vec::new();
    let mut ok = true;
    for p in [2, 3, 5] {
        let cs = checks(Command::Identities, p, |c| c.trials = WORD_SAMPLES);
        for name in ["iwasawa-roundtrip", "bruhat-roundtrip", "vertex-roundtrip"] {
            let good = find(&cs, name)
                .is_some_and(|c| c.status == Status::Pass && c.details["samples"] == json!(WORD_SAMPLES));
            ok &= good;
            if !good {
                notes.push(format!("{name} at p={p}"));
            }
        }
    }
    (ok, format!("{WORD_SAMPLES} words per decomposition at p=2,3,5; failing: {notes:?}"))
}

fn weights() -> Outcome {
    let mut ok = true;
    let mut notes = Vec::new();
    for p in [2u32, 3, 5] {
        let cs = checks(Command::Weights, p, |_| {});
        ok &= all_pass(&cs);
        notes.extend(failing(&cs).into_iter().map(|n| format!("{n} at p={p}")));
        let decomposition = find(&cs, "induced-trivial-decomposition").expect("present");
        if p <= 3 {
            let dims = &decomposition.details["submodule_dims"];
            let expected = json!([0, 1, p, p + 1]);
            ok &= *dims == expected;
            notes.push(format!("p={p} submodule dims {dims}"));
        }
    }
    (ok, notes.join("; "))
}

fn lemma_t() -> Outcome {
    let mut ok = true;
    let mut notes = Vec::new();
    for p in [2, 3] {
        let cs = checks(Command::Hecke, p, |c| c.trials = HECKE_PAIRS);
        ok &= all_pass(&cs);
        notes.extend(failing(&cs).into_iter().map(|n| format!("{n} at p={p}")));
        let terms = &find(&cs, "hecke-character-term").expect("present").details["weights"];
        let (mut with, mut without) = (0, 0);
        for t in terms.as_array().expect("array") {
            if t["character"] == json!(true) && t["pi_term"] == json!(true) {
                with += 1;
            }
            if t["character"] == json!(false) && t["pi_term"] == json!(false) {
                without += 1;
            }
        }
        ok &= with > 0 && without > 0;
        let pairs = &find(&cs, "hecke-equivariance").expect("present").details["weights"];
        ok &= pairs.as_array().expect("array").iter().all(|w| w["pairs"].as_u64() >= Some(HECKE_PAIRS as u64));
        notes.push(format!("p={p}: {with} character weights with the Pi term, {without} without"));
    }
    (ok, format!("{}; {HECKE_PAIRS} pairs per weight", notes.join("; ")))
}

fn recursion() -> Outcome {
    let mut ok = true;
    let mut notes = Vec::new();
    for (ideal, n) in [("T", 1), ("T^2", 2)] {
        for p in [2, 3] {
            let cs = checks(Command::Recursion, p, |c| c.ideal = ideal.into());
            for c in &cs {
                let good = c.status == Status::Pass && c.details["n"] == json!(n);
                ok &= good;
                if !good {
                    notes.push(format!("{} in c-Ind/({ideal}) at p={p}: n = {}", c.name, c.details["n"]));
                }
            }
            ok &= !cs.is_empty();
        }
    }
    (ok, format!("n = 1 for T and n = 2 for T^2 at p=2,3; failing: {notes:?}"))
}

fn lemma_s() -> Outcome {
    let mut ok = true;
    let mut notes = Vec::new();
    for ideal in ["T", "T^2"] {
        for p in [2, 3] {
            let cs = checks(Command::LemmaS, p, |c| c.ideal = ideal.into());
            ok &= all_pass(&cs);
            notes.extend(failing(&cs).into_iter().map(|n| format!("{n} ({ideal}, p={p})")));
            ok &= find(&cs, "lemma-s-pseries").is_some();
        }
    }
    (ok, format!("quotient and principal series models; failing: {notes:?}"))
}

fn principal_series() -> Outcome {
    let mut ok = true;
    let mut notes = Vec::new();
    for p in [2, 3] {
        let cs = checks(Command::Pseries, p, |c| {
            c.level = 2;
            c.trials = SPLITTING_SAMPLES;
        });
        ok &= all_pass(&cs);
        notes.extend(failing(&cs).into_iter().map(|n| format!("{n} at p={p}")));
        let split = &find(&cs, "pseries-splitting").expect("present").details["det_characters"];
        let samples_ok = split.as_array().is_some_and(|a| {
            !a.is_empty() && a.iter().all(|s| s["samples"].as_u64() >= Some(SPLITTING_SAMPLES as u64))
        });
        ok &= samples_ok;
        notes.push(format!("p={p}: {} det characters split", split.as_array().map_or(0, |a| a.len())));
    }
    (ok, notes.join("; "))
}

fn give() -> Outcome {
    let cs = checks(Command::Generation, 3, |c| c.trials = GIVE_VECTORS);
    let cind: Vec<Check> = cs.iter().filter(|c| c.name.starts_with("give-cind-")).cloned().collect();
    let ps: Vec<Check> = cs.iter().filter(|c| c.name.starts_with("give-pseries-")).cloned().collect();
    let ok = cind.len() == GIVE_VECTORS && ps.len() == GIVE_VECTORS && all_pass(&cind) && all_pass(&ps);
    let mut failed = failing(&cind);
    failed.extend(failing(&ps));
    (ok, format!("{} + {} vectors at p=3; failing: {failed:?}", cind.len(), ps.len()))
}

fn generation() -> Outcome {
    let cs = checks(Command::Generation, 2, |c| {
        c.trials = GENERATION_VECTORS;
        c.weight = Some((1, 0));
        c.word_length = 4;
        c.radius = Some(1);
    });
    let trials: Vec<Check> = cs.iter().filter(|c| c.name.starts_with("generation-trial-")).cloned().collect();
    let oracle = find(&cs, "generation-target-oracle").cloned();
    let ok = trials.len() == GENERATION_VECTORS
        && all_pass(&trials)
        && oracle.as_ref().is_some_and(|c| c.status == Status::Pass);
    let dims = oracle.map(|c| c.details).unwrap_or(Value::Null);
    (ok, format!("{} vectors, target {dims}; failing: {:?}", trials.len(), failing(&trials)))
}

fn hom_transfer() -> Outcome {
    let mut ok = true;
    let mut names = Vec::new();
    for p in [2, 3] {
        let cs = checks(Command::HomTransfer, p, |_| {});
        ok &= all_pass(&cs);
        for case in ["supersingular", "sp_to_ind", "char_rigidity", "princ_endo"] {
            ok &= cs.iter().any(|c| c.name.starts_with(&format!("hom-transfer-{case}-")));
        }
        names.extend(failing(&cs));
    }
    (ok, format!("four cases at p=2,3; failing: {names:?}"))
}

fn determinism() -> Outcome {
    let argv = ["borel-workbench", "all", "--p", "2", "--seed", "11", "--trials", "5"];
    let a = run_command(argv, None);
    let b = run_command(argv, None);
    let mut ok = a == b && !a.stdout.is_empty();
    let text = run_command(["borel-workbench", "identities", "--p", "3", "--format", "text", "--seed", "3"], None);
    ok &= text == run_command(["borel-workbench", "identities", "--p", "3", "--format", "text", "--seed", "3"], None);

    let synth = |statuses: &[Status]| -> Vec<Check> {
        statuses.iter().enumerate().map(|(i, s)| Check::new(format!("c{i}"), *s, json!({}), json!({}))).collect()
    };
    let statuses = [Status::Pass, Status::Fail, Status::Inconclusive];
    let mut contract = true;
    for len in 0..=3usize {
        for code in 0..3usize.pow(len as u32) {
            let mut c = code;
            let pick: Vec<Status> = (0..len)
                .map(|_| {
                    let s = statuses[c % 3];
                    c /= 3;
                    s
                })
                .collect();
            let expected = if pick.contains(&Status::Fail) {
                2
            } else if pick.contains(&Status::Inconclusive) {
                3
            } else {
                0
            };
            contract &= exit_code(&synth(&pick)) == expected;
        }
    }
    let usage = run_command(["borel-workbench", "hecke", "--p", "7", "--weight", "9,0"], None);
    contract &= usage.code == 64 && usage.stdout.is_empty() && !usage.stderr.is_empty();
    let doc = run_config(&RunConfig::new(Command::Identities));
    contract &= emit_report(&doc, Format::Json) == emit_report(&doc, Format::Json);
    ok &= contract;
    (
        ok,
        format!(
            "{} report bytes reproduced; exit code contract {}",
            a.stdout.len(),
            if contract { "holds" } else { "broken" }
        ),
    )
}

fn main() {
    let criteria: [Criterion; 11] = [
        ("exact matrix identities", identities),
        ("decomposition round-trips", round_trips),
        ("weights and Ind(1) = 1 + St", weights),
        ("Hecke operator formula and equivariance", lemma_t),
        ("recursion terminates at n = 1 and n = 2", recursion),
        ("reconstruction of s from the Borel", lemma_s),
        ("principal series invariants and splitting", principal_series),
        ("pipeline to I_1-fixed irreducible vectors", give),
        ("P-generation of the radius-1 image", generation),
        ("P-maps that are G-maps", hom_transfer),
        ("determinism and exit codes", determinism),
    ];
    let mut failed = Vec::new();
    for (i, (label, run)) in criteria.iter().enumerate() {
        let (ok, note) = run();
        println!("criterion {:>2} {} {label}: {note}", i + 1, if ok { "PASS" } else { "FAIL" });
        if !ok {
            failed.push(i + 1);
        }
    }
    if !failed.is_empty() {
        eprintln!("failing criteria: {failed:?}");
        std::process::exit(1);
    }
}
