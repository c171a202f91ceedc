//! Acceptance criteria. Prints one PASS/FAIL line per criterion and exits
//! with failure when any criterion fails.

use std::path::Path;
use std::process::ExitCode;
use std::time::Instant;

use meyers_core::Exec;
use meyers_lab::{run, Config, RunOutput, Verdict};

fn config(text: &str) -> Config {
    Config::parse(text, Path::new(".")).expect("acceptance config parses")
}

fn execute(text: &str) -> (RunOutput, f64) {
    let start = Instant::now();
    let out = run(&config(text), Exec::Parallel).expect("acceptance run executes");
    (out, start.elapsed().as_secs_f64())
}

struct Criterion {
    id: &'static str,
    title: &'static str,
    pass: bool,
    detail: String,
}

/// Verdicts named in `names`, all of which must exist and pass; aborted
/// cells fail the criterion.
fn judge(out: &RunOutput, names: &[&str]) -> (bool, String) {
    let mut pass = out.aborted.is_empty();
    let mut parts = Vec::new();
    for name in names {
        match out.verdict(name) {
            Some(v) => {
                pass &= v.pass;
                parts.push(format!("[{}] {}: {}", tag(v), v.name, v.detail));
            }
            None => {
                pass = false;
                parts.push(format!("[missing] {name}"));
            }
        }
    }
    for a in &out.aborted {
        parts.push(format!("[aborted] {}: {}", a.cell, a.error));
    }
    (pass, parts.join("; "))
}

fn tag(v: &Verdict) -> &'static str {
    if v.pass {
        "ok"
    } else {
        "fail"
    }
}

fn with_runtime(mut c: Criterion, secs: f64, limit: Option<f64>) -> Criterion {
    if let Some(limit) = limit {
        c.pass &= secs < limit;
        c.detail.push_str(&format!(" [{secs:.1} s, limit {limit} s]"));
    } else {
        c.detail.push_str(&format!(" [{secs:.1} s]"));
    }
    c
}

fn main() -> ExitCode {
    let mut results = Vec::new();
    let mut report = |c: Criterion| {
        println!("{} {} {}: {}", if c.pass { "PASS" } else { "FAIL" }, c.id, c.title, c.detail);
        results.push(c.pass);
    };

    let (sweep, t1) = execute(
        "experiment = meyers_sweep\n\
         domain = unit_square\n\
         coefficient = checkerboard 1 4 4\n\
         source = constant 1\n\
         p = 2.2\n\
         levels = 3 4 5 6\n",
    );
    let (pass, detail) = judge(&sweep, &["uniform bound p=2.2"]);
    report(with_runtime(Criterion { id: "AC1", title: "meyers uniform bound", pass, detail }, t1, Some(60.0)));

    let (counter, t2) = execute(
        "experiment = counterexample\n\
         eps = 0.5\n\
         p = 2.5 6\n\
         levels = 3 4 5 6\n",
    );
    let (pass, detail) = judge(&counter, &["blow-up p=6", "bounded p=2.5"]);
    report(with_runtime(Criterion { id: "AC2", title: "optimality", pass, detail }, t2, Some(120.0)));

    let (rate, t3) = execute(
        "experiment = rate_theta\n\
         coefficient = identity\n\
         source = constant -1\n\
         levels = 2 3 4 5\n\
         reference_level = 7\n\
         p = 2.2\n\
         eps_probe = 0.5\n\
         center_reference = 0.07367\n",
    );
    let (pass, detail) = judge(&rate, &["center value", "w12 order", "w1p order"]);
    report(with_runtime(Criterion { id: "AC3", title: "convergence", pass, detail }, t3, None));

    let (holder, t4) = execute(
        "experiment = holder_convergence\n\
         coefficient = checkerboard 1 4 4\n\
         source = constant 1\n\
         p = 2.2\n\
         levels = 3 4 5 6\n",
    );
    let (pass, detail) = judge(&holder, &["holder stability", "cauchy decrease"]);
    report(with_runtime(Criterion { id: "AC4", title: "holder stability", pass, detail }, t4, None));

    let (embed, t5) = execute(
        "experiment = embeddings\n\
         sizes = 8 12 16 24\n\
         sobolev_p = 1.5\n\
         holder_p = 4\n\
         equivalence_sizes = 16 32\n\
         equivalence_p = 2 2.2 4\n\
         samples = 20\n\
         seed = 1\n",
    );
    let names: Vec<String> = ["lp", "grad", "holder_p1"]
        .iter()
        .flat_map(|k| ["2", "2.2", "4"].map(|p| format!("{k} equivalence p={p}")))
        .collect();
    let refs: Vec<&str> = names.iter().map(String::as_str).collect();
    let (pass, detail) = judge(&embed, &refs);
    report(with_runtime(Criterion { id: "AC5", title: "norm equivalences", pass, detail }, t5, None));

    let solved = [&sweep, &counter, &rate, &holder];
    let (pass, detail) = judge_all(&solved, "discrete identity");
    report(Criterion { id: "AC6", title: "discrete operator identity", pass, detail });

    let (resolvent, t7) = execute(
        "experiment = resolvent_sweep\n\
         box = 64\n\
         coefficients = uniform perturbed\n\
         perturbation = 0.3\n\
         lambdas = 1 10 100 1000\n\
         rays = 0 0.6\n\
         scaling_lambdas = 4 25 100\n\
         seed = 1\n",
    );
    let mut names = Vec::new();
    for c in ["uniform", "perturbed"] {
        for r in ["0", "0.6"] {
            for v in ["r_inf", "u_inf slope", "r_eta"] {
                names.push(format!("{v} {c} ray={r}pi"));
            }
        }
    }
    let refs: Vec<&str> = names.iter().map(String::as_str).collect();
    let (pass, detail) = judge(&resolvent, &refs);
    report(with_runtime(Criterion { id: "AC7", title: "resolvent estimates", pass, detail }, t7, Some(120.0)));

    let (kernel, t8) = execute(
        "experiment = kernel_bounds\n\
         box = 48\n\
         times = 0.5 1 2 4 8\n\
         coefficients = uniform\n",
    );
    let (pass, detail) = judge(&kernel, &["kernel oracle", "gaussian bound", "holder increment"]);
    report(with_runtime(Criterion { id: "AC8", title: "kernel bounds", pass, detail }, t8, None));

    let (pass, detail) = judge(&resolvent, &["scaling identity"]);
    report(Criterion { id: "AC9", title: "scaling identity", pass, detail });

    let (pass, detail) = judge(&embed, &["sobolev embedding", "holder embedding"]);
    report(Criterion { id: "AC10", title: "embeddings", pass, detail });

    let t11 = Instant::now();
    let seeded = [
        "experiment = embeddings\nsizes = 6 8 10\nequivalence_sizes = 8 12\nsamples = 5\nseed = 7\n",
        "experiment = resolvent_sweep\nbox = 12\nlambdas = 1 10 100\ncoefficients = perturbed\nseed = 7\n",
        "experiment = kernel_bounds\nbox = 12\ntimes = 1 2\ncoefficients = perturbed\nseed = 7\n",
    ];
    let mut same = true;
    let mut parts = Vec::new();
    for text in seeded {
        let a = run(&config(text), Exec::Parallel).expect("first run").table.to_csv();
        let b = run(&config(text), Exec::Parallel).expect("second run").table.to_csv();
        let c = run(&config(text), Exec::Sequential).expect("sequential run").table.to_csv();
        let ok = a == b && a == c;
        same &= ok;
        parts.push(format!("{} {} bytes {}", text.lines().next().unwrap_or(""), a.len(), if ok { "identical" } else { "DIFFER" }));
    }
    report(with_runtime(
        Criterion { id: "AC11", title: "determinism", pass: same, detail: parts.join("; ") },
        t11.elapsed().as_secs_f64(),
        None,
    ));

    let failed = results.iter().filter(|p| !**p).count();
    println!("acceptance: {} of {} criteria pass", results.len() - failed, results.len());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}

fn judge_all(outs: &[&RunOutput], name: &str) -> (bool, String) {
    let mut pass = true;
    let mut parts = Vec::new();
    for out in outs {
        let (p, d) = judge(out, &[name]);
        pass &= p;
        parts.push(format!("{}: {d}", out.table.experiment));
    }
    (pass, parts.join("; "))
}
