//! Randomized verification of the model axioms. Each suite runs its cases in
//! parallel; every case owns a generator seeded by `(seed, suite, case)` and
//! results are collected in case order, so reports are reproducible.

use std::panic::{catch_unwind, AssertUnwindSafe};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use rand::Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::abelian::FgAbGroup;
use crate::complexes::{ChainComplex, ChainMap};
use crate::factor::{build_w, build_x, factor_acf_fib, factor_cof_afb, gamma};
use crate::intlinalg::{determinant, hnf, kernel_basis, snf, IntMatrix, IntVector};
use crate::lifting::{find_failing_instance, rlp_instance, solve_lift, GeneratingMap, RlpSquare};
use crate::modelcls::{classify, is_contractible, split_free_complex};
use crate::pushout::{check_proper, mapping_cone, pushout_product, ProperSquare};
use crate::random::{random_matrix, Gen, GenConfig};

pub const SCHEMA_VERSION: &str = "zchain/1";

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Suite {
    SnfHnf,
    Factorization,
    Gamma,
    LiftCofAcyclicFib,
    LiftAcyclicCofFib,
    RlpAcyclicFibrations,
    RlpNonQuasiIsos,
    ProperPushout,
    ProperPullback,
    MonoidalCofibrations,
    MonoidalAcyclic,
    QuasiIsoVsCone,
    FreeComplexLemma,
}

impl Suite {
    pub const ALL: [Suite; 13] = [
        Suite::SnfHnf,
        Suite::Factorization,
        Suite::Gamma,
        Suite::LiftCofAcyclicFib,
        Suite::LiftAcyclicCofFib,
        Suite::RlpAcyclicFibrations,
        Suite::RlpNonQuasiIsos,
        Suite::ProperPushout,
        Suite::ProperPullback,
        Suite::MonoidalCofibrations,
        Suite::MonoidalAcyclic,
        Suite::QuasiIsoVsCone,
        Suite::FreeComplexLemma,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Suite::SnfHnf => "snf_hnf",
            Suite::Factorization => "factorization",
            Suite::Gamma => "gamma",
            Suite::LiftCofAcyclicFib => "lift_cof_acyclic_fib",
            Suite::LiftAcyclicCofFib => "lift_acyclic_cof_fib",
            Suite::RlpAcyclicFibrations => "rlp_acyclic_fibrations",
            Suite::RlpNonQuasiIsos => "rlp_non_quasi_isos",
            Suite::ProperPushout => "proper_pushout",
            Suite::ProperPullback => "proper_pullback",
            Suite::MonoidalCofibrations => "monoidal_cofibrations",
            Suite::MonoidalAcyclic => "monoidal_acyclic",
            Suite::QuasiIsoVsCone => "quasi_iso_vs_cone",
            Suite::FreeComplexLemma => "free_complex_lemma",
        }
    }

    fn index(self) -> u64 {
        Suite::ALL.iter().position(|&s| s == self).unwrap() as u64
    }

    /// Generator limits for this suite, tightened where the constructions
    /// grow quickly with the input.
    fn config(self, base: GenConfig) -> GenConfig {
        match self {
            Suite::MonoidalCofibrations | Suite::MonoidalAcyclic => {
                GenConfig { max_rank: base.max_rank.min(3), max_len: 2, ..base }
            }
            Suite::LiftCofAcyclicFib | Suite::LiftAcyclicCofFib => GenConfig { max_len: 2, ..base },
            _ => base,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct VerifyConfig {
    pub seed: u64,
    pub cases: usize,
    pub gen: GenConfig,
}

impl Default for VerifyConfig {
    fn default() -> Self {
        VerifyConfig { seed: 0, cases: 10, gen: GenConfig::default() }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CaseFailure {
    pub case: usize,
    pub detail: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SuiteReport {
    pub axiom: &'static str,
    pub cases: usize,
    pub passed: usize,
    pub failures: Vec<CaseFailure>,
}

impl SuiteReport {
    pub fn ok(&self) -> bool {
        self.passed == self.cases
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct VerifyReport {
    pub schema_version: &'static str,
    pub seed: u64,
    pub cases: usize,
    pub max_order: u64,
    pub degrees: [i32; 2],
    pub suites: Vec<SuiteReport>,
    pub all_passed: bool,
}

type CaseResult = std::result::Result<(), String>;

fn check(cond: bool, what: &str) -> CaseResult {
    if cond {
        Ok(())
    } else {
        Err(what.to_string())
    }
}

/// Runs one case of a suite; panics inside the case become failures.
pub fn run_single(suite: Suite, seed: u64, case: usize, gen: GenConfig) -> std::result::Result<(), String> {
    let stream = (suite.index() << 40) | case as u64;
    let mut g = Gen::new(seed, stream, suite.config(gen));
    match catch_unwind(AssertUnwindSafe(|| run_case(suite, &mut g))) {
        Ok(r) => r,
        Err(e) => {
            let msg = e
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| e.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_default();
            Err(format!("panic: {msg}"))
        }
    }
}

pub fn run_suite(suite: Suite, cfg: &VerifyConfig) -> SuiteReport {
    let outcomes: Vec<CaseResult> =
        (0..cfg.cases).into_par_iter().map(|case| run_single(suite, cfg.seed, case, cfg.gen)).collect();
    let failures: Vec<CaseFailure> = outcomes
        .into_iter()
        .enumerate()
        .filter_map(|(case, r)| r.err().map(|detail| CaseFailure { case, detail }))
        .collect();
    SuiteReport { axiom: suite.name(), cases: cfg.cases, passed: cfg.cases - failures.len(), failures }
}

pub fn run_all(cfg: &VerifyConfig) -> VerifyReport {
    let suites: Vec<SuiteReport> = Suite::ALL.iter().map(|&s| run_suite(s, cfg)).collect();
    VerifyReport {
        schema_version: SCHEMA_VERSION,
        seed: cfg.seed,
        cases: cfg.cases,
        max_order: cfg.gen.max_order,
        degrees: [cfg.gen.lo, cfg.gen.hi],
        all_passed: suites.iter().all(SuiteReport::ok),
        suites,
    }
}

fn run_case(suite: Suite, g: &mut Gen) -> CaseResult {
    match suite {
        Suite::SnfHnf => case_snf_hnf(g),
        Suite::Factorization => case_factorization(g),
        Suite::Gamma => case_gamma(g),
        Suite::LiftCofAcyclicFib => {
            let p = g.square_cof_vs_acyclic_fib().map_err(|e| e.to_string())?;
            case_lift(&p)
        }
        Suite::LiftAcyclicCofFib => {
            let p = g.square_acyclic_cof_vs_fib().map_err(|e| e.to_string())?;
            case_lift(&p)
        }
        Suite::RlpAcyclicFibrations => case_rlp_acyclic(g),
        Suite::RlpNonQuasiIsos => case_rlp_non_qi(g),
        Suite::ProperPushout => case_proper_pushout(g),
        Suite::ProperPullback => case_proper_pullback(g),
        Suite::MonoidalCofibrations => case_monoidal(g, false),
        Suite::MonoidalAcyclic => case_monoidal(g, true),
        Suite::QuasiIsoVsCone => case_quasi_iso_cone(g),
        Suite::FreeComplexLemma => case_free_lemma(g),
    }
}

// ---------------------------------------------------------------------------
// integer matrix oracles

/// Rank over Q by fraction-free elimination.
fn rational_rank(m: &IntMatrix) -> usize {
    let mut rows: Vec<IntVector> = m.row_vectors();
    let mut rank = 0;
    for c in 0..m.cols() {
        let Some(p) = (rank..rows.len()).find(|&r| !rows[r][c].is_zero()) else { continue };
        rows.swap(rank, p);
        let piv = rows[rank].clone();
        for r in rank + 1..rows.len() {
            let f = rows[r][c].clone();
            if f.is_zero() {
                continue;
            }
            for k in 0..m.cols() {
                rows[r][k] = &rows[r][k] * &piv[c] - &f * &piv[k];
            }
        }
        rank += 1;
    }
    rank
}

fn combinations(n: usize, k: usize) -> Vec<Vec<usize>> {
    fn go(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            cur.push(i);
            go(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(0, n, k, &mut Vec::new(), &mut out);
    out
}

/// A full-column-rank `n × k` lattice basis is saturated iff its maximal minors are coprime.
fn is_saturated(k: &IntMatrix) -> bool {
    if k.cols() == 0 {
        return true;
    }
    let mut g = BigInt::zero();
    for rows in combinations(k.rows(), k.cols()) {
        g = g.gcd(&determinant(&k.select_rows(&rows)));
        if g.is_one() {
            return true;
        }
    }
    false
}

fn is_unimodular(m: &IntMatrix) -> bool {
    determinant(m).abs().is_one()
}

fn case_snf_hnf(g: &mut Gen) -> CaseResult {
    let a = random_matrix(&mut g.rng, 8, 9);
    let s = snf(&a);
    check(&(&s.u * &a) * &s.v == s.d, "U·A·V ≠ D")?;
    check(is_unimodular(&s.u) && is_unimodular(&s.v), "SNF transform not unimodular")?;
    for r in 0..s.d.rows() {
        for c in 0..s.d.cols() {
            if r != c || r >= s.rank {
                check(s.d.get(r, c).is_zero(), "D has a stray entry")?;
            }
        }
    }
    let diag = s.diagonal();
    check(diag.iter().all(|x| x.is_positive()), "nonpositive invariant factor")?;
    check(diag.windows(2).all(|w| w[1].is_multiple_of(&w[0])), "divisibility chain broken")?;
    let r = rational_rank(&a);
    check(s.rank == r, "SNF rank disagrees with rational rank")?;

    let (h, u) = hnf(&a);
    check(&u * &a == h, "U·A ≠ H")?;
    check(is_unimodular(&u), "HNF transform not unimodular")?;
    let mut last: Option<usize> = None;
    for row in 0..h.rows() {
        match h.row(row).iter().position(|x| !x.is_zero()) {
            Some(p) => {
                check(row < r && last.map_or(true, |l| p > l), "H not in echelon form")?;
                check(h.get(row, p).is_positive(), "nonpositive pivot")?;
                for above in 0..row {
                    let x = h.get(above, p);
                    check(!x.is_negative() && x < h.get(row, p), "entry above pivot not reduced")?;
                }
                last = Some(p);
            }
            None => check(row >= r, "zero row inside echelon part")?,
        }
    }

    let k = kernel_basis(&a);
    check(k.rows() == a.cols() && k.cols() == a.cols() - r, "kernel has wrong rank")?;
    check((&a * &k).is_zero(), "kernel vector not in kernel")?;
    check(rational_rank(&k) == k.cols(), "kernel basis dependent")?;
    check(is_saturated(&k), "kernel not saturated")
}

// ---------------------------------------------------------------------------
// model axioms

fn case_factorization(g: &mut Gen) -> CaseResult {
    let a = g.finite_complex();
    let b = g.finite_complex();
    let f = g.chain_map(&a, &b);
    let w = factor_acf_fib(&f).map_err(|e| format!("acf-fib: {e}"))?;
    check(w.right.compose(&w.left).equals(&f), "acf-fib composite differs from f")?;
    let (l, r) = (classify(&w.left), classify(&w.right));
    check(l.is_acyclic_cofibration(), "acf-fib left map is not an acyclic cofibration")?;
    check(r.is_fibration(), "acf-fib right map is not a fibration")?;
    let x = factor_cof_afb(&f).map_err(|e| format!("cof-afb: {e}"))?;
    check(x.right.compose(&x.left).equals(&f), "cof-afb composite differs from f")?;
    let (l, r) = (classify(&x.left), classify(&x.right));
    check(l.is_cofibration(), "cof-afb left map is not a cofibration")?;
    check(r.is_acyclic_fibration(), "cof-afb right map is not an acyclic fibration")
}

fn case_gamma(g: &mut Gen) -> CaseResult {
    let b = g.finite_complex();
    let gm = gamma(&b).map_err(|e| e.to_string())?;
    check(gm.complex.is_degreewise_free(), "Γ(B) not degreewise free")?;
    check(gm.p.is_surjective(), "p not surjective")?;
    let (lo, hi) = gm.p.window().unwrap_or((0, 0));
    for n in lo - 1..=hi + 1 {
        check(gm.p.induced_map(n).is_isomorphism(), &format!("H_{n}(p) not an isomorphism"))?;
    }
    Ok(())
}

fn case_lift(p: &crate::lifting::LiftProblem) -> CaseResult {
    let lift = solve_lift(p).map_err(|e| e.to_string())?;
    check(lift.h.compose(&p.i).equals(&p.f), "h∘i ≠ f")?;
    check(p.q.compose(&lift.h).equals(&p.g), "q∘h ≠ g")
}

/// Samples every `i_n` instance on a random `b'` and `j_n` instances with
/// `a = dx`, `b' = q(x) + z` for a random cycle `z`.
fn case_rlp_acyclic(g: &mut Gen) -> CaseResult {
    let q = g.acyclic_fibration();
    check(classify(&q).is_acyclic_fibration(), "generated map is not an acyclic fibration")?;
    let (a, b) = (q.src().clone(), q.dst().clone());
    let Some((lo, hi)) = q.window() else { return Ok(()) };
    for n in lo - 1..=hi {
        let bn1 = b.group(n + 1);
        let bp = g.hom(&FgAbGroup::free(1), &bn1).matrix().column(0);
        let sq = RlpSquare::new(&q, GeneratingMap::I(n), None, bp).map_err(|e| e.to_string())?;
        check_instance(&sq)?;

        let x = g.hom(&FgAbGroup::free(1), &a.group(n + 1)).matrix().column(0);
        let (cyc, incl) = b.diff(n + 1).kernel();
        let z = incl.apply(&g.hom(&FgAbGroup::free(1), &cyc).matrix().column(0));
        let ax = a.diff(n + 1).apply(&x);
        let qx = q.component(n + 1).apply(&x);
        let bp: IntVector = qx.iter().zip(&z).map(|(s, t)| s + t).collect();
        let sq = RlpSquare::new(&q, GeneratingMap::J(n), Some(ax), bp).map_err(|e| e.to_string())?;
        check_instance(&sq)?;
    }
    Ok(())
}

fn check_instance(sq: &RlpSquare) -> CaseResult {
    let n = sq.gen.degree();
    let h = rlp_instance(sq).ok_or_else(|| format!("{:?} instance unsolvable", sq.gen))?;
    let (src, dst) = (sq.q.src(), sq.q.dst());
    let top = h.component(n + 1).matrix().column(0);
    let bottom = h.component(n).matrix().column(0);
    check(dst.group(n + 1).elements_equal(&sq.q.component(n + 1).apply(&top), &sq.b_prime), "q∘h ≠ b'")?;
    match sq.gen {
        GeneratingMap::J(_) => check(src.group(n).elements_equal(&bottom, &sq.a), "h∘j ≠ a"),
        GeneratingMap::I(_) => Ok(()),
    }
}

/// A surjection that is not a quasi-isomorphism.
fn surjective_non_qi(g: &mut Gen) -> ChainMap {
    for _ in 0..8 {
        let q = match g.rng.gen_range(0..2) {
            0 => {
                let m = g.finite_complex();
                let k = g.finite_complex();
                ChainComplex::direct_sum(&[&m, &k]).projections[0].clone()
            }
            _ => {
                let a = g.finite_complex();
                let b = g.finite_complex();
                let f = g.chain_map(&a, &b);
                build_w(&f).expect("finite target").right
            }
        };
        if !q.is_quasi_iso() {
            return q;
        }
    }
    // C^n M → Σ^{n+1} M has kernel Σ^n M
    let mut m = g.finite_group();
    if m.is_trivial() {
        m = FgAbGroup::cyclic(g.rng.gen_range(2..=4));
    }
    let n = g.rng.gen_range(g.cfg.lo..g.cfg.hi.max(g.cfg.lo + 1));
    let disk = ChainComplex::disk(n, &m);
    let sphere = ChainComplex::sphere(n + 1, &m);
    ChainMap::from_fn(&disk, &sphere, |k| {
        if k == n + 1 {
            IntMatrix::identity(m.ngens())
        } else {
            IntMatrix::zeros(sphere.ngens(k), disk.ngens(k))
        }
    })
    .expect("projection of the disk")
}

fn case_rlp_non_qi(g: &mut Gen) -> CaseResult {
    let q = surjective_non_qi(g);
    check(q.is_surjective() && !q.is_quasi_iso(), "generated map is not a surjective non-quasi-iso")?;
    let sq = find_failing_instance(&q).ok_or("no failing instance found")?;
    check(matches!(sq.gen, GeneratingMap::J(_)), "failing instance is not a j_n square")?;
    check(rlp_instance(&sq).is_none(), "reported instance is solvable")
}

/// A weak equivalence out of `a`: `A → W(f)` or an acyclic fibration onto it.
fn weak_equivalence_from(g: &mut Gen, a: &ChainComplex) -> ChainMap {
    let b = g.finite_complex();
    let f = g.chain_map(a, &b);
    build_w(&f).expect("finite target").left
}

fn case_proper_pushout(g: &mut Gen) -> CaseResult {
    let (i, f) = if g.rng.gen_bool(0.5) {
        let a = g.finite_complex();
        let i = g.cofibration_from(&a);
        let f = weak_equivalence_from(g, &a);
        (i, f)
    } else {
        let a0 = g.finite_complex();
        let b0 = g.finite_complex();
        let h = g.chain_map(&a0, &b0);
        let f = build_x(&h).expect("finite").right;
        let i = g.cofibration_from(f.src());
        (i, f)
    };
    let rep = check_proper(&ProperSquare::Pushout { i, f }).map_err(|e| e.to_string())?;
    check(rep.opposite_quasi_iso && rep.opposite.is_quasi_iso(), "pushed-out map not a quasi-iso")?;
    check(rep.ladder.iter().all(|r| r.comparison_iso), "cokernel comparison not an isomorphism")
}

fn case_proper_pullback(g: &mut Gen) -> CaseResult {
    let a0 = g.finite_complex();
    let b = g.finite_complex();
    let h = g.chain_map(&a0, &b);
    let gmap = build_x(&h).expect("finite").right;
    let q = if g.rng.gen_bool(0.5) {
        let k = g.finite_complex();
        ChainComplex::direct_sum(&[&b, &k]).projections[0].clone()
    } else {
        let l0 = g.finite_complex();
        let k = g.chain_map(&l0, &b);
        build_w(&k).expect("finite").right
    };
    let rep = check_proper(&ProperSquare::Pullback { q, g: gmap }).map_err(|e| e.to_string())?;
    check(rep.opposite_quasi_iso && rep.opposite.is_quasi_iso(), "pulled-back map not a quasi-iso")?;
    check(rep.ladder.iter().all(|r| r.comparison_iso), "kernel comparison not an isomorphism")
}

fn free_cofibration(g: &mut Gen, acyclic: bool) -> ChainMap {
    let a = g.free_complex();
    if acyclic {
        let k = g.contractible_free_complex();
        ChainComplex::direct_sum(&[&a, &k]).inclusions[0].clone()
    } else {
        g.cofibration_from(&a)
    }
}

fn case_monoidal(g: &mut Gen, acyclic: bool) -> CaseResult {
    let i = free_cofibration(g, acyclic);
    let j = free_cofibration(g, false);
    let (i, j) = if g.rng.gen_bool(0.5) { (i, j) } else { (j, i) };
    let cert = pushout_product(&i, &j).map_err(|e| e.to_string())?;
    check(cert.k_injective && classify(&cert.k).is_cofibration(), "k is not a cofibration")?;
    check(cert.m_iso, "coker(k) ≇ U⊗V")?;
    for n in cert.uv.degrees() {
        let (ck, _) = cert.k.cokernel();
        check(ck.group(n).is_isomorphic(&cert.uv.group(n)), &format!("coker(k)_{n} ≇ (U⊗V)_{n}"))?;
    }
    if acyclic {
        check(cert.acyclic_factor, "acyclic factor not detected")?;
        check(cert.k.is_quasi_iso(), "k is not acyclic")?;
    }
    check(cert.holds(), "certificate does not hold")
}

fn case_quasi_iso_cone(g: &mut Gen) -> CaseResult {
    let f = match g.rng.gen_range(0..4) {
        0 => {
            let a = g.mixed_complex();
            let b = g.mixed_complex();
            g.chain_map(&a, &b)
        }
        1 => {
            let a = g.finite_complex();
            weak_equivalence_from(g, &a)
        }
        2 => g.acyclic_fibration(),
        _ => {
            let a = g.mixed_complex();
            ChainMap::identity(&a).add(&g.nullhomotopic(&a, &a))
        }
    };
    let (cone, _) = mapping_cone(&f).map_err(|e| e.to_string())?;
    check(f.is_quasi_iso() == cone.is_acyclic(), "induced-map test disagrees with cone acyclicity")
}

fn case_free_lemma(g: &mut Gen) -> CaseResult {
    let a = if g.rng.gen_bool(0.5) { g.contractible_free_complex() } else { g.free_complex() };
    let acyclic = a.is_acyclic();
    let split = split_free_complex(&a).map_err(|e| e.to_string())?;
    let dprime = split.dprime_all_iso();
    let contraction = is_contractible(&a).map_err(|e| e.to_string())?;
    if let Some(c) = &contraction {
        check(c.verify(), "contraction fails ds + sd = id")?;
    }
    check(acyclic == dprime && dprime == contraction.is_some(), "acyclic / d' iso / contractible disagree")
}
