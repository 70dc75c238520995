//! Constructive lifting: nullhomotopies into acyclic complexes, lifts against
//! acyclic fibrations, the extension `K → T(f,g) → C` attached to a lifting
//! square, and right-lifting instances against the generating maps
//! `i_n: 0 → C^nZ` and `j_n: Σ^nZ → C^nZ`.

use serde::Serialize;

use crate::abelian::{FgAbGroup, GroupHom, PreimageSolver};
use crate::complexes::{ChainComplex, ChainMap};
use crate::error::{Error, Result};
use crate::intlinalg::{unimodular_inverse, zero_vector, IntMatrix, IntVector, LinearSystem};
use crate::modelcls::{classify, split_free_complex};

/// Solves `incl ∘ x = map` degreewise for an injective `incl: S → Y`.
pub fn factor_through_mono(map: &ChainMap, incl: &ChainMap) -> Result<ChainMap> {
    let (x, s) = (map.src(), incl.src());
    let mut comps = Vec::new();
    for n in x.degrees() {
        let solver = PreimageSolver::new(incl.component(n).matrix(), &incl.dst().group(n));
        let m = map.component(n).matrix().clone();
        let cols = (0..m.cols())
            .map(|c| {
                solver
                    .solve(&m.column(c))
                    .ok_or_else(|| Error::PreconditionFailed(format!("map does not factor through the subobject in degree {n}")))
            })
            .collect::<Result<Vec<_>>>()?;
        comps.push(IntMatrix::from_columns(s.ngens(n), &cols));
    }
    if x.support().is_none() {
        return Ok(ChainMap::zero(x, s));
    }
    ChainMap::new(x, s, comps)
}

/// Degree-raising maps `r_n: A_n → K_{n+1}`.
#[derive(Clone, Debug)]
pub struct Homotopy {
    src: ChainComplex,
    dst: ChainComplex,
    lo: i32,
    components: Vec<GroupHom>,
}

impl Homotopy {
    pub fn component(&self, n: i32) -> GroupHom {
        if n >= self.lo {
            if let Some(h) = self.components.get((n - self.lo) as usize) {
                return h.clone();
            }
        }
        GroupHom::zero(&self.src.group(n), &self.dst.group(n + 1))
    }

    pub fn src(&self) -> &ChainComplex {
        &self.src
    }

    pub fn dst(&self) -> &ChainComplex {
        &self.dst
    }

    /// `d r + r d` in degree `n`.
    pub fn boundary(&self, n: i32) -> GroupHom {
        let dr = self.dst.diff(n + 1).compose(&self.component(n));
        let rd = self.component(n - 1).compose(&self.src.diff(n));
        dr.add(&rd)
    }

    /// True iff `d r + r d = k` in every degree.
    pub fn is_nullhomotopy_of(&self, k: &ChainMap) -> bool {
        let Some((lo, hi)) = k.window() else { return true };
        (lo..=hi).all(|n| self.boundary(n).equals(&k.component(n)))
    }

    pub fn is_zero(&self) -> bool {
        self.components.iter().all(GroupHom::is_zero)
    }
}

fn require_acyclic(c: &ChainComplex) -> Result<()> {
    match c.first_homology_degree() {
        Some(n) => Err(Error::NotAcyclic { degree: n }),
        None => Ok(()),
    }
}

/// Solves `d r + r d = k` for `k: A → K` with `A` degreewise free and `K` acyclic.
///
/// With `A = Y ⊕ Z`, first `t: Z_n → K_{n+1}` lifts `k` through `d`, then
/// `s: Y_n → K_{n+1}` lifts `y ↦ k(y) − t(d'y)`, and `r(y + z) = s(y) + t(z)`.
pub fn nullhomotopy(k: &ChainMap) -> Result<Homotopy> {
    let (a, kk) = (k.src(), k.dst());
    let split = split_free_complex(a)?;
    require_acyclic(kk)?;
    let mut components = Vec::new();
    let mut prev_t: Option<IntMatrix> = None;
    for n in a.degrees() {
        let sd = split.degree(n).expect("degree in support");
        let solver = PreimageSolver::new(kk.diff(n + 1).matrix(), &kk.group(n));
        let kn = k.component(n).matrix().clone();
        let lift = |v: &IntVector| solver.solve(v).ok_or(Error::NotAcyclic { degree: n });
        let kz = &kn * &sd.z_in_gens();
        let t_cols = kz.columns().iter().map(lift).collect::<Result<Vec<_>>>()?;
        let t = IntMatrix::from_columns(kk.ngens(n + 1), &t_cols);
        let ky = &kn * &sd.y_in_gens();
        let defect = match &prev_t {
            Some(pt) => &ky - &(pt * &sd.dprime),
            None => ky,
        };
        let s_cols = defect.columns().iter().map(lift).collect::<Result<Vec<_>>>()?;
        let s = IntMatrix::from_columns(kk.ngens(n + 1), &s_cols);
        let r = &(&s * &sd.y_part()) + &(&t * &sd.z_part());
        components.push(GroupHom::new(&a.group(n), &kk.group(n + 1), r)?);
        prev_t = Some(t);
    }
    Ok(Homotopy { src: a.clone(), dst: kk.clone(), lo: a.lo(), components })
}

/// Graded lift of `g` through a surjection `q`, HNF-least on a free basis of each `A_n`.
fn graded_lift(g: &ChainMap, q: &ChainMap) -> Result<Vec<IntMatrix>> {
    let a = g.src();
    a.degrees()
        .map(|n| {
            let (basis, coords) = a.group(n).free_basis().ok_or(Error::NotFree { degree: n })?;
            let solver = PreimageSolver::new(q.component(n).matrix(), &q.dst().group(n));
            let img = g.component(n).matrix() * &basis;
            let cols = img
                .columns()
                .iter()
                .map(|c| {
                    solver
                        .solve(c)
                        .ok_or_else(|| Error::NotAcyclicFibration(format!("not surjective in degree {n}")))
                })
                .collect::<Result<Vec<_>>>()?;
            Ok(&IntMatrix::from_columns(q.src().ngens(n), &cols) * &coords)
        })
        .collect()
}

/// Lifts `g: A → M` through an acyclic fibration `q: L → M` (`A` degreewise free).
pub fn lift_against_acyclic_fibration(g: &ChainMap, q: &ChainMap) -> Result<ChainMap> {
    let a = g.src();
    if let Some(n) = a.first_non_free_degree() {
        return Err(Error::NotFree { degree: n });
    }
    if !q.is_surjective() {
        return Err(Error::NotAcyclicFibration("map is not surjective".into()));
    }
    let (kc, j) = q.kernel();
    if let Some(n) = kc.first_homology_degree() {
        return Err(Error::NotAcyclicFibration(format!("kernel has homology in degree {n}")));
    }
    if a.support().is_none() {
        return Ok(ChainMap::zero(a, q.src()));
    }
    let l = q.src();
    let hp = graded_lift(g, q)?;
    let lo = a.lo();
    let h_at = |n: i32| -> IntMatrix {
        if n < lo || n > a.hi() {
            IntMatrix::zeros(l.ngens(n), a.ngens(n))
        } else {
            hp[(n - lo) as usize].clone()
        }
    };
    // defect e_n = d h' − h' d : A_n → K_{n−1} = (ΣK)_n
    let sk = kc.suspend(1);
    let mut defect = Vec::new();
    for n in a.degrees() {
        let e = &(l.diff(n).matrix() * &h_at(n)) - &(&h_at(n - 1) * a.diff(n).matrix());
        let solver = PreimageSolver::new(j.component(n - 1).matrix(), &l.group(n - 1));
        let cols = e
            .columns()
            .iter()
            .map(|c| solver.solve(c).expect("q(dh' − h'd) = 0, so the defect lies in the kernel"))
            .collect::<Vec<_>>();
        defect.push(IntMatrix::from_columns(kc.ngens(n - 1), &cols));
    }
    let k = ChainMap::new(a, &sk, defect)?;
    let r = nullhomotopy(&k)?;
    ChainMap::from_fn(a, l, |n| &h_at(n) + &(j.component(n).matrix() * r.component(n).matrix()))
}

/// Section `s` of a surjection `p: B → C` with acyclic kernel and `C` degreewise free.
pub fn split_ses(p: &ChainMap) -> Result<ChainMap> {
    lift_against_acyclic_fibration(&ChainMap::identity(p.dst()), p)
}

/// Section of a surjection `r: T → C` onto a degreewise-free contractible complex.
pub fn section_over_contractible(r: &ChainMap) -> Result<ChainMap> {
    let (t, c) = (r.src(), r.dst());
    let split = split_free_complex(c)?;
    if let Some(n) = split.first_non_iso_degree() {
        return Err(Error::NotContractible { degree: n });
    }
    if !r.is_surjective() {
        return Err(Error::PreconditionFailed("map onto the contractible complex is not surjective".into()));
    }
    if c.support().is_none() {
        return Ok(ChainMap::zero(c, t));
    }
    // s̃ on the Y summands
    let tilde: Vec<IntMatrix> = c
        .degrees()
        .map(|n| {
            let sd = split.degree(n).unwrap();
            let solver = PreimageSolver::new(r.component(n).matrix(), &c.group(n));
            let cols: Vec<IntVector> = sd
                .y_in_gens()
                .columns()
                .iter()
                .map(|v| solver.solve(v).expect("r is surjective"))
                .collect();
            IntMatrix::from_columns(t.ngens(n), &cols)
        })
        .collect();
    let lo = c.lo();
    ChainMap::from_fn(c, t, |n| {
        let sd = split.degree(n).unwrap();
        let mut s = &tilde[(n - lo) as usize] * &sd.y_part();
        if let Some(next) = split.degree(n + 1) {
            let inv = unimodular_inverse(&next.dprime).expect("d' is an isomorphism");
            let z_to_y = &inv * &sd.z_part();
            s = &s + &(&(t.diff(n + 1).matrix() * &tilde[(n + 1 - lo) as usize]) * &z_to_y);
        }
        s
    })
}

/// A commutative square `q f = g i` with `i: A → B`, `q: L → M`.
#[derive(Clone, Debug)]
pub struct LiftProblem {
    pub i: ChainMap,
    pub q: ChainMap,
    pub f: ChainMap,
    pub g: ChainMap,
}

impl LiftProblem {
    pub fn new(i: ChainMap, q: ChainMap, f: ChainMap, g: ChainMap) -> Result<Self> {
        if f.src() != i.src() || f.dst() != q.src() || g.src() != i.dst() || g.dst() != q.dst() {
            return Err(Error::DimensionMismatch("lifting square maps do not match".into()));
        }
        if !q.compose(&f).equals(&g.compose(&i)) {
            return Err(Error::PreconditionFailed("lifting square does not commute".into()));
        }
        Ok(LiftProblem { i, q, f, g })
    }

    /// `q h = g` and `h i = f`.
    pub fn is_solution(&self, h: &ChainMap) -> bool {
        self.q.compose(h).equals(&self.g) && h.compose(&self.i).equals(&self.f)
    }
}

/// The extension `K → T → C` of a lifting square, with the pullback
/// `Z̃ = ker((−g, q): B ⊕ L → M)` and its structure maps.
#[derive(Clone, Debug)]
pub struct Extension {
    pub problem: LiftProblem,
    pub kernel: ChainComplex,
    pub t: ChainComplex,
    pub cokernel: ChainComplex,
    pub k: ChainMap,
    pub r: ChainMap,
    /// `j: K → L`
    pub j: ChainMap,
    /// `p: B → C`
    pub p: ChainMap,
    pub ztilde: ChainComplex,
    /// `Z̃ → B ⊕ L`
    pub z_incl: ChainMap,
    pub sum: ChainComplex,
    pub gtilde: ChainMap,
    pub qtilde: ChainMap,
    pub itilde: ChainMap,
    pub ktilde: ChainMap,
    pub ptilde: ChainMap,
}

pub fn build_t(problem: &LiftProblem) -> Result<Extension> {
    let LiftProblem { i, q, f, g } = problem;
    if !i.is_injective() {
        return Err(Error::NotMonoNotEpi("left map is not injective".into()));
    }
    if !q.is_surjective() {
        return Err(Error::NotMonoNotEpi("right map is not surjective".into()));
    }
    let (b, l) = (i.dst(), q.src());
    let ds = ChainComplex::direct_sum(&[b, l]);
    let sum = ds.complex.clone();
    let (inc_b, inc_l) = (&ds.inclusions[0], &ds.inclusions[1]);
    let (pr_b, pr_l) = (&ds.projections[0], &ds.projections[1]);
    let diff = g.neg().compose(pr_b).add(&q.compose(pr_l));
    let (ztilde, z_incl) = diff.kernel();
    let gtilde = pr_l.compose(&z_incl);
    let qtilde = pr_b.compose(&z_incl);
    let itilde = factor_through_mono(&inc_b.compose(i).add(&inc_l.compose(f)), &z_incl)?;
    let (kernel, j) = q.kernel();
    let ktilde = factor_through_mono(&inc_l.compose(&j), &z_incl)?;
    let (t, ptilde) = itilde.cokernel();
    let (cokernel, p) = i.cokernel();
    // T and C are presented on the generators of Z̃ and B
    let k = ChainMap::from_fn(&kernel, &t, |n| ktilde.component(n).matrix().clone())?;
    let r = ChainMap::from_fn(&t, &cokernel, |n| qtilde.component(n).matrix().clone())?;
    Ok(Extension {
        problem: problem.clone(),
        kernel,
        t,
        cokernel,
        k,
        r,
        j,
        p,
        ztilde,
        z_incl,
        sum,
        gtilde,
        qtilde,
        itilde,
        ktilde,
        ptilde,
    })
}

impl Extension {
    /// Exactness of `K → T → C` and the pullback property of `(p̃, q̃)` over `(r, p)`.
    pub fn verify(&self) -> bool {
        if !self.k.is_injective() || !self.r.is_surjective() || !self.r.compose(&self.k).equals(&ChainMap::zero(&self.kernel, &self.cokernel)) {
            return false;
        }
        let Some((lo, hi)) = self.t.support() else { return true };
        (lo..=hi).all(|n| {
            let (kn, rn) = (self.k.component(n), self.r.component(n));
            let ker_r = rn.kernel().1;
            let exact = ker_r.matrix().columns().iter().all(|v| kn.preimage(v).is_some());
            exact && self.pullback_at(n)
        })
    }

    fn pullback_at(&self, n: i32) -> bool {
        // (p̃, q̃): Z̃_n → T_n ⊕ B_n is injective onto ker((r, −p))
        let (t, b, c) = (self.t.group(n), self.problem.i.dst().group(n), self.cokernel.group(n));
        let tb = FgAbGroup::direct_sum(&[&t, &b]);
        let zt = self.ztilde.group(n);
        let pq = IntMatrix::vstack(zt.ngens(), &[self.ptilde.component(n).matrix(), self.qtilde.component(n).matrix()]);
        let pair = GroupHom::new_unchecked(&zt, &tb, pq);
        let rp = IntMatrix::hstack(c.ngens(), &[self.r.component(n).matrix(), &-self.p.component(n).matrix()]);
        let test = GroupHom::new_unchecked(&tb, &c, rp);
        pair.is_injective()
            && test.compose(&pair).is_zero()
            && test.kernel().1.matrix().columns().iter().all(|v| pair.preimage(v).is_some())
    }
}

/// `h = g̃ ñ` for a splitting `n: C → T` with `r n = id`.
pub fn lift_from_splitting(e: &Extension, n: &ChainMap) -> Result<ChainMap> {
    if !e.r.compose(n).equals(&ChainMap::identity(&e.cokernel)) {
        return Err(Error::NotASplitting("r ∘ n ≠ id".into()));
    }
    let (a, b) = (e.problem.i.src(), e.problem.i.dst());
    let ntilde = ChainMap::from_fn(b, &e.ztilde, |deg| {
        // T has the generators of Z̃, so n's matrix already lands in Z̃-coordinates
        let z0 = n.component(deg).matrix() * e.p.component(deg).matrix();
        let b0 = e.qtilde.component(deg).matrix() * &z0;
        let defect = &IntMatrix::identity(b.ngens(deg)) - &b0;
        let solver = PreimageSolver::new(e.problem.i.component(deg).matrix(), &b.group(deg));
        let cols: Vec<IntVector> = defect
            .columns()
            .iter()
            .map(|v| solver.solve(v).unwrap_or_else(|| zero_vector(a.ngens(deg))))
            .collect();
        let corr = IntMatrix::from_columns(a.ngens(deg), &cols);
        &z0 + &(e.itilde.component(deg).matrix() * &corr)
    })?;
    let h = e.gtilde.compose(&ntilde);
    if !e.problem.is_solution(&h) {
        return Err(Error::CertificateFailed("lift extracted from the splitting fails qh = g or hi = f".into()));
    }
    Ok(h)
}

/// The splitting `n = p̃ ∘ (1, h)` induced by a solution `h`.
pub fn splitting_from_lift(e: &Extension, h: &ChainMap) -> Result<ChainMap> {
    if !e.problem.is_solution(h) {
        return Err(Error::PreconditionFailed("map is not a solution of the lifting problem".into()));
    }
    let b = e.problem.i.dst();
    let graph = ChainMap::from_fn(b, &e.sum, |n| {
        IntMatrix::vstack(b.ngens(n), &[&IntMatrix::identity(b.ngens(n)), h.component(n).matrix()])
    })?;
    let into_z = factor_through_mono(&graph, &e.z_incl)?;
    let n = ChainMap::from_fn(&e.cokernel, &e.t, |deg| into_z.component(deg).matrix().clone())?;
    if !e.r.compose(&n).equals(&ChainMap::identity(&e.cokernel)) {
        return Err(Error::CertificateFailed("induced map is not a splitting".into()));
    }
    Ok(n)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum LiftRoute {
    CofibrationVsAcyclicFibration,
    AcyclicCofibrationVsFibration,
}

/// A solution of a lifting square with the route used.
#[derive(Clone, Debug)]
pub struct Lift {
    pub h: ChainMap,
    pub route: LiftRoute,
    pub extension: Extension,
    pub splitting: ChainMap,
}

/// Solves a lifting square in one of the two model-axiom configurations.
pub fn solve_lift(problem: &LiftProblem) -> Result<Lift> {
    let ci = classify(&problem.i);
    let cq = classify(&problem.q);
    let route = if ci.is_cofibration() && cq.is_acyclic_fibration() {
        LiftRoute::CofibrationVsAcyclicFibration
    } else if ci.is_acyclic_cofibration() && cq.is_fibration() {
        LiftRoute::AcyclicCofibrationVsFibration
    } else {
        return Err(Error::NotLiftable(format!(
            "left map labels {:?}, right map labels {:?}",
            ci.labels, cq.labels
        )));
    };
    let extension = build_t(problem)?;
    let splitting = match route {
        LiftRoute::CofibrationVsAcyclicFibration => split_ses(&extension.r)?,
        LiftRoute::AcyclicCofibrationVsFibration => section_over_contractible(&extension.r)?,
    };
    let h = lift_from_splitting(&extension, &splitting)?;
    Ok(Lift { h, route, extension, splitting })
}

/// One of the generating maps over `Z`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum GeneratingMap {
    /// `i_n: 0 → C^nZ`
    I(i32),
    /// `j_n: Σ^nZ → C^nZ`
    J(i32),
}

impl GeneratingMap {
    pub fn degree(&self) -> i32 {
        match *self {
            GeneratingMap::I(n) | GeneratingMap::J(n) => n,
        }
    }

    pub fn map(&self) -> ChainMap {
        let z = FgAbGroup::free(1);
        let n = self.degree();
        let disk = ChainComplex::disk(n, &z);
        match self {
            GeneratingMap::I(_) => ChainMap::zero(&ChainComplex::zero(), &disk),
            GeneratingMap::J(_) => {
                let s = ChainComplex::sphere(n, &z);
                ChainMap::new(&s, &disk, vec![IntMatrix::identity(1)]).expect("inclusion of the sphere")
            }
        }
    }
}

/// A square from a generating map into `q: A → B`: a cycle `a ∈ Z_nA` (only
/// for `j_n`) and `b' ∈ B_{n+1}` with `db' = q(a)`.
#[derive(Clone, Debug)]
pub struct RlpSquare {
    pub q: ChainMap,
    pub gen: GeneratingMap,
    pub a: IntVector,
    pub b_prime: IntVector,
}

impl RlpSquare {
    pub fn new(q: &ChainMap, gen: GeneratingMap, a: Option<IntVector>, b_prime: IntVector) -> Result<Self> {
        let n = gen.degree();
        let (src, dst) = (q.src(), q.dst());
        if b_prime.len() != dst.ngens(n + 1) {
            return Err(Error::DimensionMismatch("b' has the wrong length".into()));
        }
        let a = match (gen, a) {
            (GeneratingMap::I(_), None) => zero_vector(src.ngens(n)),
            (GeneratingMap::J(_), Some(a)) => {
                if a.len() != src.ngens(n) {
                    return Err(Error::DimensionMismatch("a has the wrong length".into()));
                }
                if !src.group(n - 1).is_zero_element(&src.diff(n).apply(&a)) {
                    return Err(Error::PreconditionFailed("a is not a cycle".into()));
                }
                a
            }
            _ => return Err(Error::PreconditionFailed("a is given exactly for j_n squares".into())),
        };
        let lhs = dst.diff(n + 1).apply(&b_prime);
        let rhs = q.component(n).apply(&a);
        if matches!(gen, GeneratingMap::J(_)) && !dst.group(n).elements_equal(&lhs, &rhs) {
            return Err(Error::PreconditionFailed("square does not commute: db' ≠ q(a)".into()));
        }
        Ok(RlpSquare { q: q.clone(), gen, a, b_prime })
    }
}

/// Finds `a' ∈ A_{n+1}` with `q(a') = b'` (and `da' = a` for `j_n`) as one
/// integer system; returns the diagonal `C^nZ → A`, or `None` if unsolvable.
pub fn rlp_instance(sq: &RlpSquare) -> Option<ChainMap> {
    let n = sq.gen.degree();
    let (src, dst) = (sq.q.src(), sq.q.dst());
    let (an, an1, bn1) = (src.group(n), src.group(n + 1), dst.group(n + 1));
    let qm = sq.q.component(n + 1).matrix().clone();
    let a_prime = match sq.gen {
        GeneratingMap::I(_) => PreimageSolver::new(&qm, &bn1).solve(&sq.b_prime)?,
        GeneratingMap::J(_) => {
            let d = src.diff(n + 1).matrix().clone();
            let (ra, rb) = (an.relation_columns(), bn1.relation_columns());
            let k = an1.ngens();
            let rows = an.ngens() + bn1.ngens();
            let mut m = IntMatrix::zeros(rows, k + ra.cols() + rb.cols());
            m.set_block(0, 0, &d);
            m.set_block(0, k, &ra);
            m.set_block(an.ngens(), 0, &qm);
            m.set_block(an.ngens(), k + ra.cols(), &rb);
            let rhs: IntVector = sq.a.iter().chain(sq.b_prime.iter()).cloned().collect();
            let mut x = LinearSystem::new(&m).solve(&rhs)?;
            x.truncate(k);
            x
        }
    };
    let disk = ChainComplex::disk(n, &FgAbGroup::free(1));
    let da = src.diff(n + 1).apply(&a_prime);
    let comps = vec![IntMatrix::from_columns(an.ngens(), &[da]), IntMatrix::from_columns(an1.ngens(), &[a_prime])];
    ChainMap::new(&disk, src, comps).ok()
}

/// Targeted search for an unsolvable instance: an `i_n` square on a target
/// generator outside the image, or a `j_n` square built from homology
/// generators where `H(q)` fails to be injective or surjective.
pub fn find_failing_instance(q: &ChainMap) -> Option<RlpSquare> {
    let (a, b) = (q.src(), q.dst());
    let Some((lo, hi)) = q.window() else { return None };
    for n in lo - 1..=hi {
        let bn1 = b.group(n + 1);
        for gen in 0..bn1.ngens() {
            let mut v = zero_vector(bn1.ngens());
            v[gen] = 1.into();
            if let Ok(sq) = RlpSquare::new(q, GeneratingMap::I(n), None, v) {
                if rlp_instance(&sq).is_none() {
                    return Some(sq);
                }
            }
        }
    }
    for n in lo - 1..=hi + 1 {
        // kernel of H_n(q): a nonzero class [a] with q(a) = db'
        let h = q.induced_map(n);
        let ha = a.homology(n);
        let (_, incl) = h.kernel();
        let bound = PreimageSolver::new(b.diff(n + 1).matrix(), &b.group(n));
        for col in incl.matrix().columns() {
            let a_cyc = ha.cycle_lift.mul_vec(&col);
            if let Some(bp) = bound.solve(&q.component(n).apply(&a_cyc)) {
                if let Ok(sq) = RlpSquare::new(q, GeneratingMap::J(n), Some(a_cyc), bp) {
                    if rlp_instance(&sq).is_none() {
                        return Some(sq);
                    }
                }
            }
        }
        // generators of H_{n+1}B: a = d a* with q(a*) = b*, b' = 0
        let hb = b.homology(n + 1);
        let lift = PreimageSolver::new(q.component(n + 1).matrix(), &b.group(n + 1));
        for bstar in hb.cycle_lift.columns() {
            let Some(astar) = lift.solve(&bstar) else { continue };
            let a_cyc = a.diff(n + 1).apply(&astar);
            if let Ok(sq) = RlpSquare::new(q, GeneratingMap::J(n), Some(a_cyc), zero_vector(b.ngens(n + 1))) {
                if rlp_instance(&sq).is_none() {
                    return Some(sq);
                }
            }
        }
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::factor::gamma;
    use crate::intlinalg::ivec;

    fn z() -> FgAbGroup {
        FgAbGroup::free(1)
    }

    fn sphere_z(n: i32) -> ChainComplex {
        ChainComplex::sphere(n, &z())
    }

    #[test]
    fn nullhomotopy_of_identity_on_disk() {
        let d = ChainComplex::disk(0, &z());
        let id = ChainMap::identity(&d);
        let r = nullhomotopy(&id).unwrap();
        assert!(r.is_nullhomotopy_of(&id));
        let zero = ChainMap::zero(&d, &d);
        assert!(nullhomotopy(&zero).unwrap().is_zero());
    }

    #[test]
    fn nullhomotopy_sphere_into_disk() {
        let s = sphere_z(0);
        let d = ChainComplex::disk(0, &z());
        let k = ChainMap::new(&s, &d, vec![IntMatrix::identity(1)]).unwrap();
        let r = nullhomotopy(&k).unwrap();
        assert_eq!(r.component(0).matrix(), &IntMatrix::identity(1));
        assert!(r.is_nullhomotopy_of(&k));
        let e = nullhomotopy(&ChainMap::identity(&s)).unwrap_err();
        assert_eq!(e, Error::NotAcyclic { degree: 0 });
    }

    #[test]
    fn lift_through_projection() {
        let s = sphere_z(0);
        let ds = ChainComplex::direct_sum(&[&s, &ChainComplex::disk(0, &z())]);
        let q = ds.projections[0].clone();
        let h = lift_against_acyclic_fibration(&ChainMap::identity(&s), &q).unwrap();
        assert!(h.equals(&ds.inclusions[0]));
    }

    #[test]
    fn lift_into_gamma() {
        let b = ChainComplex::sphere(0, &FgAbGroup::cyclic(2));
        let g = gamma(&b).unwrap();
        let s = sphere_z(0);
        let gm = ChainMap::new(&s, &b, vec![IntMatrix::identity(1)]).unwrap();
        let h = lift_against_acyclic_fibration(&gm, &g.p).unwrap();
        assert_eq!(h.component(0).matrix(), &IntMatrix::from_rows(&[[1]]));
        assert!(g.p.compose(&h).equals(&gm));
        let zero = ChainMap::zero(&ChainComplex::zero(), &b);
        let h = lift_against_acyclic_fibration(&zero, &g.p).unwrap();
        assert!(h.src().is_zero_complex());
    }

    #[test]
    fn split_ses_examples() {
        let c = ChainComplex::sphere(1, &z());
        let ds = ChainComplex::direct_sum(&[&c, &ChainComplex::disk(0, &z())]);
        let s = split_ses(&ds.projections[0]).unwrap();
        assert!(s.equals(&ds.inclusions[0]));
        let b = ChainComplex::sphere(0, &FgAbGroup::cyclic(2));
        let w = crate::factor::factor_acf_fib(&ChainMap::zero(&ChainComplex::zero(), &b)).unwrap();
        assert_eq!(split_ses(&w.right).unwrap_err(), Error::NotFree { degree: 0 });
    }

    #[test]
    fn sections_over_contractible() {
        let d = ChainComplex::disk(0, &z());
        let t = ChainComplex::direct_sum(&[&d, &ChainComplex::sphere(0, &FgAbGroup::cyclic(2))]);
        let s = section_over_contractible(&t.projections[0]).unwrap();
        assert!(s.equals(&t.inclusions[0]));
        assert!(section_over_contractible(&ChainMap::identity(&d)).unwrap().equals(&ChainMap::identity(&d)));
        let dd = ChainComplex::direct_sum(&[&d, &d]).complex;
        let sum = ChainMap::new(&dd, &d, vec![IntMatrix::from_rows(&[[1, 1]]), IntMatrix::from_rows(&[[1, 1]])]).unwrap();
        let s = section_over_contractible(&sum).unwrap();
        assert!(sum.compose(&s).equals(&ChainMap::identity(&d)));
        let e = section_over_contractible(&ChainMap::identity(&sphere_z(0))).unwrap_err();
        assert_eq!(e, Error::NotContractible { degree: 0 });
    }

    fn j0() -> ChainMap {
        GeneratingMap::J(0).map()
    }

    #[test]
    fn extension_split_when_maps_vanish() {
        let i = j0();
        let d = i.dst().clone();
        let q = ChainMap::zero(&d, &ChainComplex::zero());
        let f = ChainMap::zero(i.src(), &d);
        let g = ChainMap::zero(&d, &ChainComplex::zero());
        let p = LiftProblem::new(i, q, f, g).unwrap();
        let e = build_t(&p).unwrap();
        assert!(e.verify());
        assert_eq!(e.cokernel.homology(1).group, FgAbGroup::free(1));
        assert!(e.kernel.is_acyclic());
    }

    #[test]
    fn extension_generic_and_round_trip() {
        let i = j0();
        let d = i.dst().clone();
        let q = ChainMap::zero(&d, &ChainComplex::zero());
        let f = ChainMap::new(i.src(), &d, vec![IntMatrix::from_rows(&[[3]])]).unwrap();
        let g = ChainMap::zero(&d, &ChainComplex::zero());
        let p = LiftProblem::new(i, q, f, g).unwrap();
        let lift = solve_lift(&p).unwrap();
        assert_eq!(lift.route, LiftRoute::CofibrationVsAcyclicFibration);
        assert!(lift.extension.verify());
        assert!(p.is_solution(&lift.h));
        let n = splitting_from_lift(&lift.extension, &lift.h).unwrap();
        assert!(n.equals(&lift.splitting));
        let h2 = lift_from_splitting(&lift.extension, &n).unwrap();
        assert!(h2.equals(&lift.h));
    }

    #[test]
    fn identity_left_map() {
        let b = ChainComplex::sphere(0, &FgAbGroup::cyclic(2));
        let g = gamma(&b).unwrap();
        let a = g.complex.clone();
        let i = ChainMap::identity(&a);
        let f = ChainMap::identity(&a);
        let p = LiftProblem::new(i, g.p.clone(), f.clone(), g.p.clone()).unwrap();
        let e = build_t(&p).unwrap();
        assert!(e.cokernel.is_zero_complex());
        let lift = solve_lift(&p).unwrap();
        assert!(lift.h.equals(&f));
    }

    #[test]
    fn solve_lift_examples() {
        let b = ChainComplex::sphere(0, &FgAbGroup::cyclic(2));
        let g = gamma(&b).unwrap();
        let s = sphere_z(0);
        let i = ChainMap::zero(&ChainComplex::zero(), &s);
        let gm = ChainMap::new(&s, &b, vec![IntMatrix::identity(1)]).unwrap();
        let p = LiftProblem::new(i, g.p.clone(), ChainMap::zero(&ChainComplex::zero(), &g.complex), gm).unwrap();
        let lift = solve_lift(&p).unwrap();
        assert_eq!(lift.h.component(0).matrix(), &IntMatrix::from_rows(&[[1]]));

        // acyclic cofibration 0 → C^0Z against a fibration
        let d = ChainComplex::disk(0, &z());
        let m = sphere_z(1);
        let q = ChainMap::new(&d, &m, vec![IntMatrix::zeros(0, 1), IntMatrix::identity(1)]).unwrap();
        let gmap = ChainMap::new(&d, &m, vec![IntMatrix::zeros(0, 1), IntMatrix::from_rows(&[[2]])]).unwrap();
        let i = ChainMap::zero(&ChainComplex::zero(), &d);
        let p = LiftProblem::new(i, q, ChainMap::zero(&ChainComplex::zero(), &d), gmap).unwrap();
        let lift = solve_lift(&p).unwrap();
        assert_eq!(lift.route, LiftRoute::AcyclicCofibrationVsFibration);
        assert!(p.is_solution(&lift.h));

        // neither configuration
        let two = ChainMap::new(&s, &s, vec![IntMatrix::from_rows(&[[2]])]).unwrap();
        let p = LiftProblem::new(two.clone(), ChainMap::identity(&s), two.clone(), ChainMap::identity(&s)).unwrap();
        assert!(matches!(solve_lift(&p), Err(Error::NotLiftable(_))));
    }

    #[test]
    fn rlp_examples() {
        let b = ChainComplex::sphere(0, &FgAbGroup::cyclic(2));
        let g = gamma(&b).unwrap();
        let sq = RlpSquare::new(&g.p, GeneratingMap::J(0), Some(ivec(&[2])), ivec(&[])).unwrap();
        let lift = rlp_instance(&sq).unwrap();
        assert_eq!(lift.component(1).matrix(), &IntMatrix::identity(1));

        let s = sphere_z(0);
        let two = ChainMap::new(&s, &s, vec![IntMatrix::from_rows(&[[2]])]).unwrap();
        let sq = RlpSquare::new(&two, GeneratingMap::I(-1), None, ivec(&[1])).unwrap();
        assert!(rlp_instance(&sq).is_none());
        assert!(find_failing_instance(&two).is_some());
        assert!(find_failing_instance(&g.p).is_none());

        let id = ChainMap::identity(&ChainComplex::disk(0, &z()));
        let sq = RlpSquare::new(&id, GeneratingMap::I(0), None, ivec(&[5])).unwrap();
        assert!(rlp_instance(&sq).is_some());
    }

    #[test]
    fn failing_j_instance_for_surjective_non_quasi_iso() {
        // C^0Z → Σ^1Z is surjective but misses H_1
        let d = ChainComplex::disk(0, &z());
        let s1 = sphere_z(1);
        let q = ChainMap::new(&d, &s1, vec![IntMatrix::zeros(0, 1), IntMatrix::identity(1)]).unwrap();
        assert!(q.is_surjective() && !q.is_quasi_iso());
        let sq = find_failing_instance(&q).unwrap();
        assert!(matches!(sq.gen, GeneratingMap::J(_)));
        assert!(rlp_instance(&sq).is_none());
    }
}
