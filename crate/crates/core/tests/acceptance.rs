//! Prints one PASS/FAIL line per acceptance criterion and exits nonzero on any failure.

use std::process::Command;
use std::time::Instant;

use zchain::abelian::FgAbGroup;
use zchain::complexes::ChainComplex;
use zchain::factor::gamma;
use zchain::intlinalg::IntMatrix;
use zchain::random::GenConfig;
use zchain::verify::{run_suite, Suite, SuiteReport, VerifyConfig};

const SEED: u64 = 20_261_014;

struct Line {
    id: u32,
    name: &'static str,
    ok: bool,
    detail: String,
}

fn suites(runs: &[(Suite, usize)]) -> (bool, String) {
    let mut parts = Vec::new();
    let mut ok = true;
    for &(suite, cases) in runs {
        let cfg = VerifyConfig { seed: SEED, cases, gen: GenConfig::default() };
        let r: SuiteReport = run_suite(suite, &cfg);
        ok &= r.ok() && r.cases == cases;
        parts.push(format!("{} {}/{}", r.axiom, r.passed, r.cases));
        for f in r.failures.iter().take(3) {
            parts.push(format!("case {}: {}", f.case, f.detail));
        }
    }
    (ok, parts.join("; "))
}

fn golden_gamma() -> (bool, String) {
    let b = ChainComplex::sphere(0, &FgAbGroup::cyclic(2));
    match gamma(&b) {
        Ok(g) => {
            let d = g.complex.diff(1);
            let ok = g.complex.support() == Some((0, 1)) && d.matrix() == &IntMatrix::from_rows(&[[2]]);
            (ok, format!("Γ(Σ^0 Z/2): d_1 = {:?}", d.matrix().row_vectors()))
        }
        Err(e) => (false, e.to_string()),
    }
}

fn determinism() -> (bool, String) {
    let run = || {
        Command::new(env!("CARGO_BIN_EXE_zchain"))
            .args(["verify", "--seed", "1"])
            .output()
            .expect("spawn zchain")
    };
    let (a, b) = (run(), run());
    let ok = a.status.success() && b.status.success() && a.stdout == b.stdout && !a.stdout.is_empty();
    (ok, format!("{} bytes, identical: {}", a.stdout.len(), a.stdout == b.stdout))
}

fn main() {
    let mut lines = Vec::new();
    let mut push = |id, name, (ok, detail): (bool, String)| lines.push(Line { id, name, ok, detail });
    let t = Instant::now();

    push(1, "SNF/HNF on 1000 matrices", suites(&[(Suite::SnfHnf, 1000)]));
    push(2, "factorization of 200 maps", suites(&[(Suite::Factorization, 200)]));
    let (g_ok, g_detail) = suites(&[(Suite::Gamma, 100)]);
    let (gold_ok, gold_detail) = golden_gamma();
    push(3, "cofibrant replacement on 100 complexes", (g_ok && gold_ok, format!("{g_detail}; {gold_detail}")));
    push(
        4,
        "lifting in both configurations",
        suites(&[(Suite::LiftCofAcyclicFib, 100), (Suite::LiftAcyclicCofFib, 100)]),
    );
    push(
        5,
        "cofibrant generation",
        suites(&[(Suite::RlpAcyclicFibrations, 50), (Suite::RlpNonQuasiIsos, 20)]),
    );
    push(6, "properness", suites(&[(Suite::ProperPushout, 50), (Suite::ProperPullback, 50)]));
    push(
        7,
        "monoidal axiom",
        suites(&[(Suite::MonoidalCofibrations, 50), (Suite::MonoidalAcyclic, 25)]),
    );
    push(
        8,
        "oracle cross-checks",
        suites(&[(Suite::QuasiIsoVsCone, 300), (Suite::FreeComplexLemma, 100)]),
    );
    push(9, "byte-identical verify reports", determinism());

    let mut failed = 0;
    for l in &lines {
        let status = if l.ok { "PASS" } else { "FAIL" };
        println!("criterion {} {:<40} {}  ({})", l.id, l.name, status, l.detail);
        failed += usize::from(!l.ok);
    }
    println!("acceptance: {}/{} criteria pass in {:.1?}", lines.len() - failed, lines.len(), t.elapsed());
    if failed > 0 {
        std::process::exit(1);
    }
}
