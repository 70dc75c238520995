//! The two functorial factorizations of a chain map `f: A → B` and the
//! cofibrant replacement `Γ(B) → B`.
//!
//! * `W(f)_n = A_n ⊕ I(B_n) ⊕ I(B_{n+1})` factors `f` as an acyclic
//!   cofibration followed by a fibration.
//! * `X(f)_n = A_n ⊕ I(A_{n−1}) ⊕ I²(A_{n−2}) ⊕ I(B_n) ⊕ I²(B_{n−1})`
//!   factors `f` as a cofibration followed by an acyclic fibration.
//!
//! Each middle complex records which coordinates belong to which summand.

use std::fmt;
use std::ops::Range;

use serde::Serialize;

use crate::abelian::FgAbGroup;
use crate::complexes::{union_window, ChainComplex, ChainMap};
use crate::error::{Error, Result};
use crate::groupring::GroupRingComplex;
use crate::intlinalg::IntMatrix;
use crate::modelcls::{classify, MapClassification};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum Summand {
    /// `A_n`
    A,
    /// `I(B_n)`
    IB,
    /// `Σ⁻¹I(B)`: `I(B_{n+1})` in degree `n`
    DesuspIB,
    /// `ΣI(A)`: `I(A_{n−1})`
    SuspIA,
    /// `Σ²I²(A)`: `I²(A_{n−2})`
    Susp2I2A,
    /// `ΣI²(B)`: `I²(B_{n−1})`
    SuspI2B,
}

impl fmt::Display for Summand {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Summand::A => "A",
            Summand::IB => "I(B)",
            Summand::DesuspIB => "S^-1 I(B)",
            Summand::SuspIA => "S I(A)",
            Summand::Susp2I2A => "S^2 I^2(A)",
            Summand::SuspI2B => "S I^2(B)",
        })
    }
}

/// Ordered summands of one degree with their generator counts.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DegreeLayout {
    pub blocks: Vec<(Summand, usize)>,
}

impl DegreeLayout {
    pub fn total(&self) -> usize {
        self.blocks.iter().map(|b| b.1).sum()
    }

    pub fn range(&self, s: Summand) -> Range<usize> {
        let mut off = 0;
        for &(t, len) in &self.blocks {
            if t == s {
                return off..off + len;
            }
            off += len;
        }
        off..off
    }
}

/// Graded summand bookkeeping of a middle complex.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SummandLayout {
    pub lo: i32,
    pub degrees: Vec<DegreeLayout>,
}

impl SummandLayout {
    pub fn at(&self, n: i32) -> Option<&DegreeLayout> {
        if n < self.lo {
            return None;
        }
        self.degrees.get((n - self.lo) as usize)
    }

    pub fn range(&self, n: i32, s: Summand) -> Range<usize> {
        self.at(n).map_or(0..0, |d| d.range(s))
    }

    pub fn total(&self, n: i32) -> usize {
        self.at(n).map_or(0, DegreeLayout::total)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum FactorKind {
    AcfFib,
    CofAfb,
}

#[derive(Clone, Debug, Serialize)]
pub struct FactorCertificate {
    pub composite_equals: bool,
    pub left: MapClassification,
    pub right: MapClassification,
}

impl FactorCertificate {
    pub fn holds(&self, kind: FactorKind) -> bool {
        self.composite_equals
            && match kind {
                FactorKind::AcfFib => self.left.is_acyclic_cofibration() && self.right.is_fibration(),
                FactorKind::CofAfb => self.left.is_cofibration() && self.right.is_acyclic_fibration(),
            }
    }
}

#[derive(Clone, Debug)]
pub struct Factorization {
    pub kind: FactorKind,
    pub original: ChainMap,
    pub middle: ChainComplex,
    pub left: ChainMap,
    pub right: ChainMap,
    pub layout: SummandLayout,
    pub certificate: Option<FactorCertificate>,
    gr_a: Option<GroupRingComplex>,
    gr_b: GroupRingComplex,
}

impl Factorization {
    /// Classifies both legs and checks `right ∘ left = f`.
    pub fn certify(&self) -> FactorCertificate {
        FactorCertificate {
            composite_equals: self.right.compose(&self.left).equals(&self.original),
            left: classify(&self.left),
            right: classify(&self.right),
        }
    }

    fn certified(mut self) -> Result<Self> {
        let cert = self.certify();
        if !cert.holds(self.kind) {
            return Err(Error::CertificateFailed(format!("{:?} factorization: {cert:?}", self.kind)));
        }
        self.certificate = Some(cert);
        Ok(self)
    }

    /// Induced map between the middle complexes of two factorizations of the
    /// same kind, for a commutative square `f' u = v f`.
    pub fn map_to(&self, other: &Factorization, u: &ChainMap, v: &ChainMap) -> Result<ChainMap> {
        if self.kind != other.kind {
            return Err(Error::PreconditionFailed("factorizations of different kinds".into()));
        }
        if !other.original.compose(u).equals(&v.compose(&self.original)) {
            return Err(Error::PreconditionFailed("square does not commute".into()));
        }
        let (lb, lb2) = (&self.gr_b, &other.gr_b);
        ChainMap::from_fn(&self.middle, &other.middle, |n| {
            let mut m = IntMatrix::zeros(other.layout.total(n), self.layout.total(n));
            let mut put = |s: Summand, block: IntMatrix| {
                let (r, c) = (other.layout.range(n, s), self.layout.range(n, s));
                assert_eq!((block.rows(), block.cols()), (r.len(), c.len()));
                m.set_block(r.start, c.start, &block);
            };
            put(Summand::A, u.component(n).matrix().clone());
            put(Summand::IB, lb.i_f(v, lb2, n));
            match self.kind {
                FactorKind::AcfFib => put(Summand::DesuspIB, lb.i_f(v, lb2, n + 1)),
                FactorKind::CofAfb => {
                    let (la, la2) = (self.gr_a.as_ref().unwrap(), other.gr_a.as_ref().unwrap());
                    put(Summand::SuspIA, la.i_f(u, la2, n - 1));
                    put(Summand::Susp2I2A, la.i2_f(u, la2, n - 2));
                    put(Summand::SuspI2B, lb.i2_f(v, lb2, n - 1));
                }
            }
            m
        })
    }

    /// Generators of a summand in degree `n`, as columns in middle coordinates.
    pub fn summand_basis(&self, n: i32, s: Summand) -> IntMatrix {
        let r = self.layout.range(n, s);
        let mut m = IntMatrix::zeros(self.layout.total(n), r.len());
        for (k, i) in r.enumerate() {
            m.set(i, k, 1.into());
        }
        m
    }

    pub fn source_data(&self) -> Option<&GroupRingComplex> {
        self.gr_a.as_ref()
    }

    pub fn target_data(&self) -> &GroupRingComplex {
        &self.gr_b
    }
}

/// Places blocks into a differential `X_n → X_{n−1}`.
struct BlockMatrix<'a> {
    rows: &'a DegreeLayout,
    cols: &'a DegreeLayout,
    m: IntMatrix,
}

impl<'a> BlockMatrix<'a> {
    fn new(rows: &'a DegreeLayout, cols: &'a DegreeLayout) -> Self {
        BlockMatrix { rows, cols, m: IntMatrix::zeros(rows.total(), cols.total()) }
    }

    fn put(&mut self, row: Summand, col: Summand, block: &IntMatrix) {
        let (r, c) = (self.rows.range(row), self.cols.range(col));
        assert_eq!((block.rows(), block.cols()), (r.len(), c.len()), "block {row}<-{col}");
        self.m.add_block(r.start, c.start, block);
    }
}

fn eye(n: usize) -> IntMatrix {
    IntMatrix::identity(n)
}

fn build_layout(window: Option<(i32, i32)>, make: impl Fn(i32) -> DegreeLayout) -> SummandLayout {
    match window {
        Some((lo, hi)) => SummandLayout { lo, degrees: (lo..=hi).map(make).collect() },
        None => SummandLayout { lo: 0, degrees: Vec::new() },
    }
}

fn groups_for(layout: &SummandLayout, group: impl Fn(i32, Summand) -> FgAbGroup) -> Vec<FgAbGroup> {
    layout
        .degrees
        .iter()
        .enumerate()
        .map(|(k, d)| {
            let n = layout.lo + k as i32;
            let parts: Vec<FgAbGroup> = d.blocks.iter().map(|&(s, _)| group(n, s)).collect();
            FgAbGroup::direct_sum(&parts.iter().collect::<Vec<_>>())
        })
        .collect()
}

fn shift(w: Option<(i32, i32)>, a: i32, b: i32) -> Option<(i32, i32)> {
    w.map(|(lo, hi)| (lo + a, hi + b))
}

fn degreewise_finite(c: &ChainComplex) -> Result<()> {
    match c.degrees().find(|&n| !c.group(n).is_finite()) {
        Some(n) => Err(Error::InfiniteGroup { free_rank: c.group(n).free_rank() }),
        None => Ok(()),
    }
}

/// `W(f)` without the classification certificate.
pub(crate) fn build_w(f: &ChainMap) -> Result<Factorization> {
    let (a, b) = (f.src(), f.dst());
    degreewise_finite(b)?;
    let gb = GroupRingComplex::new(b)?;
    let window = union_window(a.support(), shift(b.support(), -1, 0));
    let layout = build_layout(window, |n| DegreeLayout {
        blocks: vec![(Summand::A, a.ngens(n)), (Summand::IB, gb.i_rank(n)), (Summand::DesuspIB, gb.i_rank(n + 1))],
    });
    let groups = groups_for(&layout, |n, s| match s {
        Summand::A => a.group(n),
        Summand::IB => FgAbGroup::free(gb.i_rank(n)),
        _ => FgAbGroup::free(gb.i_rank(n + 1)),
    });
    let middle = ChainComplex::from_parts(layout.lo, groups, |n| {
        let (src, dst) = (layout.at(n).unwrap(), layout.at(n - 1).unwrap());
        let mut m = BlockMatrix::new(dst, src);
        m.put(Summand::A, Summand::A, a.diff(n).matrix());
        m.put(Summand::IB, Summand::IB, &gb.i_d(n));
        m.put(Summand::DesuspIB, Summand::IB, &-&eye(gb.i_rank(n)));
        m.put(Summand::DesuspIB, Summand::DesuspIB, &-&gb.i_d(n + 1));
        m.m
    })?;
    let left = inclusion_of_a(a, &middle, &layout)?;
    let right = ChainMap::from_fn(&middle, b, |n| {
        let l = layout.at(n).unwrap();
        let mut m = IntMatrix::zeros(b.ngens(n), l.total());
        m.set_block(0, l.range(Summand::A).start, f.component(n).matrix());
        m.set_block(0, l.range(Summand::IB).start, &gb.theta(n));
        m
    })?;
    Ok(Factorization {
        kind: FactorKind::AcfFib,
        original: f.clone(),
        middle,
        left,
        right,
        layout,
        certificate: None,
        gr_a: None,
        gr_b: gb,
    })
}

fn inclusion_of_a(a: &ChainComplex, middle: &ChainComplex, layout: &SummandLayout) -> Result<ChainMap> {
    ChainMap::from_fn(a, middle, |n| {
        let mut m = IntMatrix::zeros(layout.total(n), a.ngens(n));
        m.set_block(layout.range(n, Summand::A).start, 0, &eye(a.ngens(n)));
        m
    })
}

/// `A → W(f) → B`: an acyclic cofibration followed by a fibration, certified.
pub fn factor_acf_fib(f: &ChainMap) -> Result<Factorization> {
    build_w(f)?.certified()
}

/// `X(f)` without the classification certificate.
pub(crate) fn build_x(f: &ChainMap) -> Result<Factorization> {
    let (a, b) = (f.src(), f.dst());
    degreewise_finite(a)?;
    degreewise_finite(b)?;
    let ga = GroupRingComplex::new(a)?;
    let gb = GroupRingComplex::new(b)?;
    let window = union_window(shift(a.support(), 0, 2), shift(b.support(), 0, 1));
    let layout = build_layout(window, |n| DegreeLayout {
        blocks: vec![
            (Summand::A, a.ngens(n)),
            (Summand::SuspIA, ga.i_rank(n - 1)),
            (Summand::Susp2I2A, ga.i2_rank(n - 2)),
            (Summand::IB, gb.i_rank(n)),
            (Summand::SuspI2B, gb.i2_rank(n - 1)),
        ],
    });
    let groups = groups_for(&layout, |n, s| match s {
        Summand::A => a.group(n),
        Summand::SuspIA => FgAbGroup::free(ga.i_rank(n - 1)),
        Summand::Susp2I2A => FgAbGroup::free(ga.i2_rank(n - 2)),
        Summand::IB => FgAbGroup::free(gb.i_rank(n)),
        _ => FgAbGroup::free(gb.i2_rank(n - 1)),
    });
    let middle = ChainComplex::from_parts(layout.lo, groups, |n| {
        let (src, dst) = (layout.at(n).unwrap(), layout.at(n - 1).unwrap());
        let mut m = BlockMatrix::new(dst, src);
        m.put(Summand::A, Summand::A, a.diff(n).matrix());
        // Σα' ↦ θ(α') − Σdα' − f_*(α')
        m.put(Summand::A, Summand::SuspIA, &ga.theta(n - 1));
        m.put(Summand::SuspIA, Summand::SuspIA, &-&ga.i_d(n - 1));
        m.put(Summand::IB, Summand::SuspIA, &-&ga.i_f(f, &gb, n - 1));
        // Σ²α'' ↦ Σα'' + Σ²dα'' + Σf_*α''
        m.put(Summand::SuspIA, Summand::Susp2I2A, &ga.incl(n - 2));
        m.put(Summand::Susp2I2A, Summand::Susp2I2A, &ga.i2_d(n - 2));
        m.put(Summand::SuspI2B, Summand::Susp2I2A, &ga.i2_f(f, &gb, n - 2));
        // β ↦ dβ;  Σβ' ↦ β' − Σdβ'
        m.put(Summand::IB, Summand::IB, &gb.i_d(n));
        m.put(Summand::IB, Summand::SuspI2B, &gb.incl(n - 1));
        m.put(Summand::SuspI2B, Summand::SuspI2B, &-&gb.i2_d(n - 1));
        m.m
    })?;
    let left = inclusion_of_a(a, &middle, &layout)?;
    let right = ChainMap::from_fn(&middle, b, |n| {
        let l = layout.at(n).unwrap();
        let mut m = IntMatrix::zeros(b.ngens(n), l.total());
        m.set_block(0, l.range(Summand::A).start, f.component(n).matrix());
        m.set_block(0, l.range(Summand::IB).start, &gb.theta(n));
        m
    })?;
    Ok(Factorization {
        kind: FactorKind::CofAfb,
        original: f.clone(),
        middle,
        left,
        right,
        layout,
        certificate: None,
        gr_a: Some(ga),
        gr_b: gb,
    })
}

/// `A → X(f) → B`: a cofibration followed by an acyclic fibration, certified.
pub fn factor_cof_afb(f: &ChainMap) -> Result<Factorization> {
    build_x(f)?.certified()
}

/// Cofibrant replacement with its summand layout (`I(B)`, `ΣI²(B)`).
#[derive(Clone, Debug)]
pub struct Gamma {
    pub complex: ChainComplex,
    pub p: ChainMap,
    pub layout: SummandLayout,
}

pub(crate) fn build_gamma(b: &ChainComplex) -> Result<Gamma> {
    degreewise_finite(b)?;
    let gb = GroupRingComplex::new(b)?;
    let layout = build_layout(shift(b.support(), 0, 1), |n| DegreeLayout {
        blocks: vec![(Summand::IB, gb.i_rank(n)), (Summand::SuspI2B, gb.i2_rank(n - 1))],
    });
    let groups = layout.degrees.iter().map(|d| FgAbGroup::free(d.total())).collect();
    let complex = ChainComplex::from_parts(layout.lo, groups, |n| {
        let (src, dst) = (layout.at(n).unwrap(), layout.at(n - 1).unwrap());
        let mut m = BlockMatrix::new(dst, src);
        m.put(Summand::IB, Summand::IB, &gb.i_d(n));
        m.put(Summand::IB, Summand::SuspI2B, &gb.incl(n - 1));
        m.put(Summand::SuspI2B, Summand::SuspI2B, &-&gb.i2_d(n - 1));
        m.m
    })?;
    let p = ChainMap::from_fn(&complex, b, |n| {
        let mut m = IntMatrix::zeros(b.ngens(n), layout.total(n));
        m.set_block(0, 0, &gb.theta(n));
        m
    })?;
    Ok(Gamma { complex, p, layout })
}

/// `p: Γ(B) → B`, a surjective quasi-isomorphism from a degreewise-free complex.
pub fn gamma(b: &ChainComplex) -> Result<Gamma> {
    let g = build_gamma(b)?;
    if let Some(n) = g.complex.first_non_free_degree() {
        return Err(Error::CertificateFailed(format!("Γ not free in degree {n}")));
    }
    if !g.p.is_surjective() || !g.p.is_quasi_iso() {
        return Err(Error::CertificateFailed("Γ → B is not a surjective quasi-isomorphism".into()));
    }
    Ok(g)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::abelian::FgAbGroup;

    fn s0(m: &FgAbGroup) -> ChainComplex {
        ChainComplex::sphere(0, m)
    }

    #[test]
    fn w_of_zero_into_sphere() {
        let b = s0(&FgAbGroup::cyclic(2));
        let f = ChainMap::zero(&ChainComplex::zero(), &b);
        let w = factor_acf_fib(&f).unwrap();
        assert_eq!((w.middle.ngens(0), w.middle.ngens(-1)), (1, 1));
        assert_eq!(w.middle.diff(0).matrix(), &IntMatrix::from_rows(&[[-1]]));
        assert!(w.middle.is_acyclic());
        assert!(w.right.is_surjective());
    }

    #[test]
    fn w_of_identity() {
        let b = s0(&FgAbGroup::cyclic(2));
        let w = factor_acf_fib(&ChainMap::identity(&b)).unwrap();
        assert_eq!(w.middle.ngens(0), 2);
        assert!(w.middle.homology(0).group.is_isomorphic(&FgAbGroup::cyclic(2)));
        assert!(w.certificate.as_ref().unwrap().left.quasi_iso);
    }

    #[test]
    fn w_of_zero_map_is_zero() {
        let z = ChainComplex::zero();
        let w = factor_acf_fib(&ChainMap::identity(&z)).unwrap();
        assert!(w.middle.is_zero_complex());
    }

    #[test]
    fn x_of_zero_source_is_gamma() {
        let b = ChainComplex::disk(0, &FgAbGroup::cyclic(3));
        let x = factor_cof_afb(&ChainMap::zero(&ChainComplex::zero(), &b)).unwrap();
        let g = gamma(&b).unwrap();
        assert_eq!(x.middle, g.complex);
        assert!(x.right.equals(&g.p.between(&x.middle, &b).unwrap()));
    }

    #[test]
    fn x_of_identity() {
        let b = s0(&FgAbGroup::cyclic(2));
        let x = factor_cof_afb(&ChainMap::identity(&b)).unwrap();
        let c = x.certificate.unwrap();
        assert!(c.left.is_cofibration() && c.right.is_acyclic_fibration());
    }

    #[test]
    fn x_rejects_infinite() {
        let b = s0(&FgAbGroup::free(1));
        let e = factor_cof_afb(&ChainMap::identity(&b)).unwrap_err();
        assert_eq!(e, Error::InfiniteGroup { free_rank: 1 });
    }

    #[test]
    fn gamma_examples() {
        let g = gamma(&s0(&FgAbGroup::cyclic(2))).unwrap();
        assert_eq!(g.complex.diff(1).matrix(), &IntMatrix::from_rows(&[[2]]));
        assert!(g.complex.homology(0).group.is_isomorphic(&FgAbGroup::cyclic(2)));
        assert!(g.complex.homology(1).group.is_trivial());
        assert!(gamma(&ChainComplex::zero()).unwrap().complex.is_zero_complex());
        let g = gamma(&s0(&FgAbGroup::cyclic(3))).unwrap();
        assert_eq!((g.complex.ngens(0), g.complex.ngens(1)), (2, 2));
        let (c, _) = g.complex.diff(1).cokernel();
        assert!(c.is_isomorphic(&FgAbGroup::cyclic(3)));
    }

    #[test]
    fn naturality_of_w_and_x() {
        let z2 = FgAbGroup::cyclic(2);
        let z4 = FgAbGroup::cyclic(4);
        let a = s0(&z4);
        let b = s0(&z2);
        let f = ChainMap::new(&a, &b, vec![IntMatrix::from_rows(&[[1]])]).unwrap();
        let id_a = ChainMap::identity(&a);
        let id_b = ChainMap::identity(&b);
        let zero_b = ChainMap::zero(&b, &b);
        let zero_ab = ChainMap::zero(&a, &b);
        // square: zero_ab ∘ id_a = zero_b ∘ f
        for (fact, fact2) in [
            (build_w(&f).unwrap(), build_w(&zero_ab).unwrap()),
            (build_x(&f).unwrap(), build_x(&zero_ab).unwrap()),
        ] {
            let m = fact.map_to(&fact2, &id_a, &zero_b).unwrap();
            assert!(m.compose(&fact.left).equals(&fact2.left.compose(&id_a)));
            assert!(fact2.right.compose(&m).equals(&zero_b.compose(&fact.right)));
        }
        let fw = build_w(&f).unwrap();
        let e = fw.map_to(&fw, &id_a, &id_b).unwrap();
        assert!(e.equals(&ChainMap::identity(&fw.middle)));
    }
}
