//! Bounded chain complexes of finitely presented abelian groups, chain maps,
//! homology and induced maps, suspension, cones, test objects and tensor
//! products.
//!
//! A complex stores groups on a finite support `[lo, hi]` and is trivial
//! outside it. `diff(n)` is the differential `A_n → A_{n−1}`.
//!
//! Sign conventions: `(Σ^k A)_n = A_{n−k}` with differential `(−1)^k d`; the
//! cone is `A ⊕ ΣA` with `d(a + Σa') = da + a' − Σda'`; the tensor
//! differential is `d(a ⊗ b) = da ⊗ b + (−1)^p a ⊗ db` for `a ∈ A_p`.

use std::fmt;

use num_bigint::BigInt;

use crate::abelian::{subquotient, tensor_groups, FgAbGroup, GroupHom, PreimageSolver};
use crate::error::{Error, Result};
use crate::intlinalg::{IntMatrix, IntVector, LinearSystem};

#[derive(Clone)]
pub struct ChainComplex {
    lo: i32,
    groups: Vec<FgAbGroup>,
    /// `diffs[k]` is `d_{lo+k}: A_{lo+k} → A_{lo+k−1}`.
    diffs: Vec<GroupHom>,
}

/// Smallest window covering both (possibly empty) supports.
pub(crate) fn union_window(a: Option<(i32, i32)>, b: Option<(i32, i32)>) -> Option<(i32, i32)> {
    match (a, b) {
        (None, x) | (x, None) => x,
        (Some((l1, h1)), Some((l2, h2))) => Some((l1.min(l2), h1.max(h2))),
    }
}

impl ChainComplex {
    /// Validated complex with `groups[k]` in degree `lo + k` and
    /// `diffs[k]` the matrix of `d: A_{lo+k+1} → A_{lo+k}`.
    pub fn new(lo: i32, groups: Vec<FgAbGroup>, diffs: Vec<IntMatrix>) -> Result<Self> {
        if groups.is_empty() {
            if !diffs.is_empty() {
                return Err(Error::DimensionMismatch("differentials given for an empty complex".into()));
            }
            return Ok(Self::zero());
        }
        if diffs.len() + 1 != groups.len() {
            return Err(Error::DimensionMismatch(format!(
                "{} groups need {} differentials, got {}",
                groups.len(),
                groups.len() - 1,
                diffs.len()
            )));
        }
        let mut homs = Vec::with_capacity(groups.len());
        homs.push(GroupHom::zero(&groups[0], &FgAbGroup::trivial()));
        for (k, m) in diffs.into_iter().enumerate() {
            let h = GroupHom::new(&groups[k + 1], &groups[k], m).map_err(|e| match e {
                Error::IllDefined(msg) => Error::IllDefined(format!("differential in degree {}: {msg}", lo + k as i32 + 1)),
                Error::DimensionMismatch(msg) => {
                    Error::DimensionMismatch(format!("differential in degree {}: {msg}", lo + k as i32 + 1))
                }
                other => other,
            })?;
            homs.push(h);
        }
        let c = ChainComplex { lo, groups, diffs: homs };
        c.check_square_zero()?;
        Ok(c)
    }

    /// Construction from already validated differentials (`homs[k]` leaves
    /// degree `lo + k`, `homs[0]` maps to the trivial group).
    pub(crate) fn from_homs_unchecked(lo: i32, groups: Vec<FgAbGroup>, homs: Vec<GroupHom>) -> Self {
        debug_assert_eq!(groups.len(), homs.len());
        let c = ChainComplex { lo, groups, diffs: homs };
        debug_assert!(c.check_square_zero().is_ok(), "d∘d ≠ 0 in an internal construction");
        c
    }

    /// Builds a complex on `[lo, hi]` from per-degree groups and differential
    /// matrices, validating everything.
    pub(crate) fn from_parts(lo: i32, groups: Vec<FgAbGroup>, diff: impl Fn(i32) -> IntMatrix) -> Result<Self> {
        if groups.is_empty() {
            return Ok(Self::zero());
        }
        let diffs = (1..groups.len()).map(|k| diff(lo + k as i32)).collect();
        Self::new(lo, groups, diffs)
    }

    fn check_square_zero(&self) -> Result<()> {
        for n in self.lo + 1..=self.hi() {
            let dd = self.diff(n - 1).compose(&self.diff(n));
            if !dd.is_zero() {
                return Err(Error::NotAComplex { degree: n });
            }
        }
        Ok(())
    }

    pub fn zero() -> Self {
        ChainComplex { lo: 0, groups: Vec::new(), diffs: Vec::new() }
    }

    /// `Σ^n M`: a single copy of `M` in degree `n`.
    pub fn sphere(n: i32, m: &FgAbGroup) -> Self {
        ChainComplex { lo: n, groups: vec![m.clone()], diffs: vec![GroupHom::zero(m, &FgAbGroup::trivial())] }
    }

    /// `C^n M`: copies of `M` in degrees `n` and `n+1` joined by the identity.
    pub fn disk(n: i32, m: &FgAbGroup) -> Self {
        ChainComplex {
            lo: n,
            groups: vec![m.clone(), m.clone()],
            diffs: vec![GroupHom::zero(m, &FgAbGroup::trivial()), GroupHom::identity(m)],
        }
    }

    pub fn is_zero_complex(&self) -> bool {
        self.groups.iter().all(FgAbGroup::is_trivial)
    }

    /// `None` for the empty complex.
    pub fn support(&self) -> Option<(i32, i32)> {
        (!self.groups.is_empty()).then(|| (self.lo, self.hi()))
    }

    pub fn lo(&self) -> i32 {
        self.lo
    }

    pub fn hi(&self) -> i32 {
        self.lo + self.groups.len() as i32 - 1
    }

    pub fn degrees(&self) -> std::ops::RangeInclusive<i32> {
        self.lo..=self.hi()
    }

    pub fn group(&self, n: i32) -> FgAbGroup {
        self.group_ref(n).cloned().unwrap_or_else(FgAbGroup::trivial)
    }

    fn group_ref(&self, n: i32) -> Option<&FgAbGroup> {
        if n < self.lo {
            return None;
        }
        self.groups.get((n - self.lo) as usize)
    }

    pub fn ngens(&self, n: i32) -> usize {
        self.group_ref(n).map_or(0, FgAbGroup::ngens)
    }

    /// `d_n: A_n → A_{n−1}`.
    pub fn diff(&self, n: i32) -> GroupHom {
        if n >= self.lo && n <= self.hi() {
            let k = (n - self.lo) as usize;
            if k == 0 {
                return GroupHom::zero(&self.groups[0], &FgAbGroup::trivial());
            }
            return self.diffs[k].clone();
        }
        if n == self.hi() + 1 && !self.groups.is_empty() {
            return GroupHom::zero(&FgAbGroup::trivial(), self.groups.last().unwrap());
        }
        GroupHom::zero(&FgAbGroup::trivial(), &FgAbGroup::trivial())
    }

    pub fn is_degreewise_free(&self) -> bool {
        self.groups.iter().all(FgAbGroup::is_free)
    }

    pub fn is_degreewise_finite(&self) -> bool {
        self.groups.iter().all(FgAbGroup::is_finite)
    }

    /// First degree whose group is not free.
    pub fn first_non_free_degree(&self) -> Option<i32> {
        self.degrees().find(|&n| !self.group(n).is_free())
    }

    /// Drops trivial groups at both ends of the support.
    pub fn trimmed(&self) -> Self {
        let nontrivial: Vec<i32> = self.degrees().filter(|&n| self.ngens(n) > 0).collect();
        let (Some(&lo), Some(&hi)) = (nontrivial.first(), nontrivial.last()) else {
            return Self::zero();
        };
        self.restricted(lo, hi)
    }

    /// The same complex stored on the window `[lo, hi]`, which must contain
    /// every degree with generators.
    pub fn restricted(&self, lo: i32, hi: i32) -> Self {
        if lo > hi {
            return Self::zero();
        }
        let groups: Vec<FgAbGroup> = (lo..=hi).map(|n| self.group(n)).collect();
        let mut homs = Vec::with_capacity(groups.len());
        homs.push(GroupHom::zero(&groups[0], &FgAbGroup::trivial()));
        for n in lo + 1..=hi {
            let d = self.diff(n);
            homs.push(GroupHom::new_unchecked(&groups[(n - lo) as usize], &groups[(n - lo - 1) as usize], d.matrix().clone()));
        }
        ChainComplex { lo, groups, diffs: homs }
    }

    /// `Σ^k A`.
    pub fn suspend(&self, k: i32) -> Self {
        if self.groups.is_empty() {
            return Self::zero();
        }
        let sign = if k.rem_euclid(2) == 0 { 1 } else { -1 };
        let homs = self
            .diffs
            .iter()
            .map(|d| if sign == 1 { d.clone() } else { d.neg() })
            .collect();
        ChainComplex { lo: self.lo + k, groups: self.groups.clone(), diffs: homs }
    }

    /// Direct sum of complexes with its summand inclusions and projections.
    pub fn direct_sum(parts: &[&ChainComplex]) -> DirectSum {
        let window = parts.iter().fold(None, |w, c| union_window(w, c.support()));
        let Some((lo, hi)) = window else {
            let complex = Self::zero();
            let inclusions = parts.iter().map(|p| ChainMap::zero(p, &complex)).collect();
            let projections = parts.iter().map(|p| ChainMap::zero(&complex, p)).collect();
            return DirectSum { complex, inclusions, projections };
        };
        let groups: Vec<FgAbGroup> = (lo..=hi)
            .map(|n| {
                let gs: Vec<FgAbGroup> = parts.iter().map(|p| p.group(n)).collect();
                FgAbGroup::direct_sum(&gs.iter().collect::<Vec<_>>())
            })
            .collect();
        let mut homs = vec![GroupHom::zero(&groups[0], &FgAbGroup::trivial())];
        for n in lo + 1..=hi {
            let ds: Vec<GroupHom> = parts.iter().map(|p| p.diff(n)).collect();
            let blocks: Vec<&IntMatrix> = ds.iter().map(GroupHom::matrix).collect();
            homs.push(GroupHom::new_unchecked(
                &groups[(n - lo) as usize],
                &groups[(n - lo - 1) as usize],
                IntMatrix::block_diag(&blocks),
            ));
        }
        let complex = ChainComplex { lo, groups, diffs: homs };
        let mut inclusions = Vec::new();
        let mut projections = Vec::new();
        for (idx, p) in parts.iter().enumerate() {
            let offset = |n: i32| parts[..idx].iter().map(|q| q.ngens(n)).sum::<usize>();
            let incl = ChainMap::from_fn_unchecked(p, &complex, |n| {
                let mut m = IntMatrix::zeros(complex.ngens(n), p.ngens(n));
                m.set_block(offset(n), 0, &IntMatrix::identity(p.ngens(n)));
                m
            });
            let proj = ChainMap::from_fn_unchecked(&complex, p, |n| {
                let mut m = IntMatrix::zeros(p.ngens(n), complex.ngens(n));
                m.set_block(0, offset(n), &IntMatrix::identity(p.ngens(n)));
                m
            });
            inclusions.push(incl);
            projections.push(proj);
        }
        DirectSum { complex, inclusions, projections }
    }

    /// Cone `A ⊕ ΣA` with `d(a + Σa') = da + a' − Σda'`, and the inclusion of `A`.
    pub fn cone(&self) -> (ChainComplex, ChainMap) {
        let Some((lo, hi)) = self.support() else {
            return (Self::zero(), ChainMap::zero(self, &Self::zero()));
        };
        let (lo, hi) = (lo, hi + 1);
        let groups: Vec<FgAbGroup> =
            (lo..=hi).map(|n| FgAbGroup::direct_sum(&[&self.group(n), &self.group(n - 1)])).collect();
        let mut homs = vec![GroupHom::zero(&groups[0], &FgAbGroup::trivial())];
        for n in lo + 1..=hi {
            let (a, a1, a2) = (self.ngens(n), self.ngens(n - 1), self.ngens(n - 2));
            let mut m = IntMatrix::zeros(a1 + a2, a + a1);
            m.set_block(0, 0, self.diff(n).matrix());
            m.set_block(0, a, &IntMatrix::identity(a1));
            m.set_block(a1, a, &-self.diff(n - 1).matrix());
            homs.push(GroupHom::new_unchecked(&groups[(n - lo) as usize], &groups[(n - lo - 1) as usize], m));
        }
        let cone = ChainComplex::from_homs_unchecked(lo, groups, homs);
        let incl = ChainMap::from_fn_unchecked(self, &cone, |n| {
            let mut m = IntMatrix::zeros(cone.ngens(n), self.ngens(n));
            m.set_block(0, 0, &IntMatrix::identity(self.ngens(n)));
            m
        });
        (cone, incl)
    }

    /// Homology in degree `n`, trivial outside the support.
    pub fn homology(&self, n: i32) -> Homology {
        let g = self.group(n);
        let (_, cycles) = self.diff(n).kernel();
        let lift = cycles.matrix().clone();
        let boundaries = self.diff(n + 1).matrix().clone();
        let group = subquotient(&g, &lift, &boundaries);
        let rel = g.relation_columns();
        let system = LinearSystem::new(&IntMatrix::hstack(g.ngens(), &[&lift, &boundaries, &rel]));
        Homology { degree: n, group, cycle_lift: lift, ambient: g, system }
    }

    pub fn is_acyclic(&self) -> bool {
        self.first_homology_degree().is_none()
    }

    /// First degree with nonvanishing homology.
    pub fn first_homology_degree(&self) -> Option<i32> {
        self.degrees().find(|&n| !self.homology(n).group.is_trivial())
    }

    /// Subcomplex generated in each degree by the columns of `gens(n)`; the
    /// spans must be closed under `d`. Returns the subcomplex and its inclusion.
    pub fn subcomplex(&self, gens: impl Fn(i32) -> IntMatrix) -> Result<(ChainComplex, ChainMap)> {
        let Some((lo, hi)) = self.support() else {
            return Ok((Self::zero(), ChainMap::zero(&Self::zero(), self)));
        };
        let gens: Vec<IntMatrix> = (lo..=hi).map(&gens).collect();
        let groups: Vec<FgAbGroup> = (lo..=hi)
            .map(|n| {
                let g = self.group(n);
                subquotient(&g, &gens[(n - lo) as usize], &IntMatrix::zeros(g.ngens(), 0))
            })
            .collect();
        let mut homs = vec![GroupHom::zero(&groups[0], &FgAbGroup::trivial())];
        for n in lo + 1..=hi {
            let below = &gens[(n - lo - 1) as usize];
            let solver = PreimageSolver::new(below, &self.group(n - 1));
            let images = self.diff(n).matrix() * &gens[(n - lo) as usize];
            let mut cols = Vec::with_capacity(images.cols());
            for c in 0..images.cols() {
                let x = solver
                    .solve(&images.column(c))
                    .ok_or_else(|| Error::PreconditionFailed(format!("generators are not closed under d in degree {n}")))?;
                cols.push(x);
            }
            let m = IntMatrix::from_columns(below.cols(), &cols);
            homs.push(GroupHom::new(&groups[(n - lo) as usize], &groups[(n - lo - 1) as usize], m)?);
        }
        let sub = ChainComplex::from_homs_unchecked(lo, groups, homs);
        let incl = ChainMap::from_fn_unchecked(&sub, self, |n| {
            if n < lo || n > hi {
                IntMatrix::zeros(self.ngens(n), 0)
            } else {
                gens[(n - lo) as usize].clone()
            }
        });
        Ok((sub, incl))
    }

    /// Presentation equality over the union of both supports.
    pub fn same_as(&self, other: &ChainComplex) -> bool {
        let Some((lo, hi)) = union_window(self.support(), other.support()) else { return true };
        (lo..=hi).all(|n| {
            self.group(n) == other.group(n) && (n == lo || self.diff(n).matrix() == other.diff(n).matrix())
        })
    }
}

impl PartialEq for ChainComplex {
    fn eq(&self, other: &Self) -> bool {
        self.same_as(other)
    }
}

impl fmt::Debug for ChainComplex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "ChainComplex[")?;
        for n in self.degrees() {
            write!(f, " {n}:{}", self.group(n))?;
            if n > self.lo {
                write!(f, " d={}", self.diff(n).matrix())?;
            }
        }
        write!(f, " ]")
    }
}

/// A direct sum with its structure maps.
pub struct DirectSum {
    pub complex: ChainComplex,
    pub inclusions: Vec<ChainMap>,
    pub projections: Vec<ChainMap>,
}

/// Homology `ker d_n / im d_{n+1}` presented on a basis of cycles.
#[derive(Clone, Debug)]
pub struct Homology {
    pub degree: i32,
    pub group: FgAbGroup,
    /// Columns are cycles in generator coordinates lifting the homology generators.
    pub cycle_lift: IntMatrix,
    ambient: FgAbGroup,
    system: LinearSystem,
}

impl Homology {
    /// Coordinates of the class of a cycle with respect to the homology generators.
    pub fn class_of(&self, cycle: &[BigInt]) -> Option<IntVector> {
        let k = self.cycle_lift.cols();
        self.system.solve(cycle).map(|mut x| {
            x.truncate(k);
            x
        })
    }

    pub fn ambient(&self) -> &FgAbGroup {
        &self.ambient
    }
}

/// `H_n(f)` computed on cycle lifts.
pub fn induced_map(f: &ChainMap, n: i32) -> GroupHom {
    let hs = f.src().homology(n);
    let ht = f.dst().homology(n);
    induced_between(f, &hs, &ht)
}

pub(crate) fn induced_between(f: &ChainMap, hs: &Homology, ht: &Homology) -> GroupHom {
    let images = f.component(hs.degree).matrix() * &hs.cycle_lift;
    let cols: Vec<IntVector> = (0..images.cols())
        .map(|c| ht.class_of(&images.column(c)).expect("image of a cycle is a cycle"))
        .collect();
    let m = IntMatrix::from_columns(ht.group.ngens(), &cols);
    GroupHom::new(&hs.group, &ht.group, m).expect("induced map on homology is well defined")
}

/// A degreewise map commuting with the differentials.
#[derive(Clone)]
pub struct ChainMap {
    src: ChainComplex,
    dst: ChainComplex,
    lo: i32,
    comps: Vec<GroupHom>,
}

impl ChainMap {
    /// Validated chain map; `component(n)` is consulted for every degree of
    /// the source support.
    pub fn from_fn(src: &ChainComplex, dst: &ChainComplex, component: impl Fn(i32) -> IntMatrix) -> Result<Self> {
        let mut comps = Vec::new();
        for n in src.degrees() {
            let h = GroupHom::new(&src.group(n), &dst.group(n), component(n)).map_err(|e| match e {
                Error::IllDefined(msg) => Error::IllDefined(format!("component in degree {n}: {msg}")),
                Error::DimensionMismatch(msg) => Error::DimensionMismatch(format!("component in degree {n}: {msg}")),
                other => other,
            })?;
            comps.push(h);
        }
        let f = ChainMap { src: src.clone(), dst: dst.clone(), lo: src.lo, comps };
        f.check_commutes()?;
        Ok(f)
    }

    pub(crate) fn from_fn_unchecked(src: &ChainComplex, dst: &ChainComplex, component: impl Fn(i32) -> IntMatrix) -> Self {
        let comps = src
            .degrees()
            .map(|n| GroupHom::new_unchecked(&src.group(n), &dst.group(n), component(n)))
            .collect();
        let f = ChainMap { src: src.clone(), dst: dst.clone(), lo: src.lo, comps };
        debug_assert!(f.check_well_defined().is_ok() && f.check_commutes().is_ok(), "invalid internal chain map");
        f
    }

    /// Validated construction from per-degree matrices of the source support.
    pub fn new(src: &ChainComplex, dst: &ChainComplex, components: Vec<IntMatrix>) -> Result<Self> {
        let expected = src.support().map_or(0, |(l, h)| (h - l + 1) as usize);
        if components.len() != expected {
            return Err(Error::DimensionMismatch(format!(
                "chain map needs {expected} components, got {}",
                components.len()
            )));
        }
        let lo = src.lo;
        Self::from_fn(src, dst, |n| components[(n - lo) as usize].clone())
    }

    fn check_well_defined(&self) -> Result<()> {
        for h in &self.comps {
            GroupHom::new(h.src(), h.dst(), h.matrix().clone())?;
        }
        Ok(())
    }

    fn check_commutes(&self) -> Result<()> {
        let Some((lo, hi)) = self.src.support() else { return Ok(()) };
        for n in lo..=hi + 1 {
            let left = self.dst.diff(n).compose(&self.component(n));
            let right = self.component(n - 1).compose(&self.src.diff(n));
            if !left.sub(&right).is_zero() {
                return Err(Error::NotAChainMap { degree: n });
            }
        }
        Ok(())
    }

    pub fn identity(c: &ChainComplex) -> Self {
        Self::from_fn_unchecked(c, c, |n| IntMatrix::identity(c.ngens(n)))
    }

    pub fn zero(src: &ChainComplex, dst: &ChainComplex) -> Self {
        Self::from_fn_unchecked(src, dst, |n| IntMatrix::zeros(dst.ngens(n), src.ngens(n)))
    }

    pub fn src(&self) -> &ChainComplex {
        &self.src
    }

    pub fn dst(&self) -> &ChainComplex {
        &self.dst
    }

    pub fn component(&self, n: i32) -> GroupHom {
        if n >= self.lo {
            if let Some(h) = self.comps.get((n - self.lo) as usize) {
                return h.clone();
            }
        }
        GroupHom::zero(&self.src.group(n), &self.dst.group(n))
    }

    /// `self ∘ inner`.
    pub fn compose(&self, inner: &ChainMap) -> ChainMap {
        assert!(inner.dst == self.src, "composition of non-composable chain maps");
        Self::from_fn_unchecked(&inner.src, &self.dst, |n| self.component(n).matrix() * inner.component(n).matrix())
    }

    pub fn add(&self, other: &ChainMap) -> ChainMap {
        Self::from_fn_unchecked(&self.src, &self.dst, |n| self.component(n).matrix() + other.component(n).matrix())
    }

    pub fn sub(&self, other: &ChainMap) -> ChainMap {
        Self::from_fn_unchecked(&self.src, &self.dst, |n| self.component(n).matrix() - other.component(n).matrix())
    }

    pub fn neg(&self) -> ChainMap {
        Self::from_fn_unchecked(&self.src, &self.dst, |n| -self.component(n).matrix())
    }

    /// Equality as chain maps.
    pub fn equals(&self, other: &ChainMap) -> bool {
        self.src == other.src
            && self.dst == other.dst
            && self.src.degrees().all(|n| self.component(n).equals(&other.component(n)))
    }

    /// Degrees where either side is nontrivial.
    pub fn window(&self) -> Option<(i32, i32)> {
        union_window(self.src.support(), self.dst.support())
    }

    pub fn is_injective(&self) -> bool {
        self.src.degrees().all(|n| self.component(n).is_injective())
    }

    pub fn is_surjective(&self) -> bool {
        self.dst.degrees().all(|n| self.component(n).is_surjective())
    }

    pub fn induced_map(&self, n: i32) -> GroupHom {
        induced_map(self, n)
    }

    /// Quasi-isomorphism test on `[lo − 1, hi + 1]` of the combined support.
    pub fn is_quasi_iso(&self) -> bool {
        let Some((lo, hi)) = self.window() else { return true };
        (lo - 1..=hi + 1).all(|n| induced_map(self, n).is_isomorphism())
    }

    /// Kernel complex with its inclusion into the source.
    pub fn kernel(&self) -> (ChainComplex, ChainMap) {
        let incls: Vec<(i32, IntMatrix)> =
            self.src.degrees().map(|n| (n, self.component(n).kernel().1.matrix().clone())).collect();
        let lo = self.src.lo;
        self.src
            .subcomplex(|n| incls[(n - lo) as usize].1.clone())
            .expect("kernel of a chain map is a subcomplex")
    }

    /// Cokernel complex (presented on the target generators) with its projection.
    pub fn cokernel(&self) -> (ChainComplex, ChainMap) {
        let Some((lo, hi)) = self.dst.support() else {
            return (ChainComplex::zero(), ChainMap::zero(&self.dst, &ChainComplex::zero()));
        };
        let groups: Vec<FgAbGroup> = (lo..=hi).map(|n| self.component(n).cokernel().0).collect();
        let mut homs = vec![GroupHom::zero(&groups[0], &FgAbGroup::trivial())];
        for n in lo + 1..=hi {
            homs.push(GroupHom::new_unchecked(
                &groups[(n - lo) as usize],
                &groups[(n - lo - 1) as usize],
                self.dst.diff(n).matrix().clone(),
            ));
        }
        let coker = ChainComplex::from_homs_unchecked(lo, groups, homs);
        let proj = ChainMap::from_fn_unchecked(&self.dst, &coker, |n| IntMatrix::identity(self.dst.ngens(n)));
        (coker, proj)
    }

    /// The same map regarded between re-windowed copies of its complexes.
    pub fn between(&self, src: &ChainComplex, dst: &ChainComplex) -> Result<ChainMap> {
        Self::from_fn(src, dst, |n| self.component(n).matrix().clone())
    }

    /// `Σ^k f`.
    pub fn suspend(&self, k: i32) -> ChainMap {
        let (s, d) = (self.src.suspend(k), self.dst.suspend(k));
        Self::from_fn_unchecked(&s, &d, |n| self.component(n - k).matrix().clone())
    }
}

impl fmt::Debug for ChainMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "ChainMap {{ src: {:?}, dst: {:?}, components:", self.src, self.dst)?;
        for n in self.src.degrees() {
            write!(f, " {n}:{}", self.component(n).matrix())?;
        }
        write!(f, " }}")
    }
}

/// Degree-`n` block layout of `A ⊗ B`: `(p, offset, size)` for each `A_p ⊗ B_{n−p}`.
fn tensor_layout(a: &ChainComplex, b: &ChainComplex, n: i32) -> Vec<(i32, usize, usize)> {
    let mut out = Vec::new();
    let Some((alo, ahi)) = a.support() else { return out };
    let mut off = 0;
    for p in alo..=ahi {
        let q = n - p;
        let size = a.ngens(p) * b.ngens(q);
        out.push((p, off, size));
        off += size;
    }
    out
}

/// `A ⊗ B` with the Koszul-signed differential.
pub fn tensor(a: &ChainComplex, b: &ChainComplex) -> ChainComplex {
    let (Some((alo, ahi)), Some((blo, bhi))) = (a.support(), b.support()) else {
        return ChainComplex::zero();
    };
    let (lo, hi) = (alo + blo, ahi + bhi);
    let groups: Vec<FgAbGroup> = (lo..=hi)
        .map(|n| {
            let parts: Vec<FgAbGroup> = (alo..=ahi).map(|p| tensor_groups(&a.group(p), &b.group(n - p))).collect();
            FgAbGroup::direct_sum(&parts.iter().collect::<Vec<_>>())
        })
        .collect();
    let mut homs = vec![GroupHom::zero(&groups[0], &FgAbGroup::trivial())];
    for n in lo + 1..=hi {
        let src_layout = tensor_layout(a, b, n);
        let dst_layout = tensor_layout(a, b, n - 1);
        let (rows, cols) = (groups[(n - lo - 1) as usize].ngens(), groups[(n - lo) as usize].ngens());
        let mut m = IntMatrix::zeros(rows, cols);
        for &(p, src_off, size) in &src_layout {
            if size == 0 {
                continue;
            }
            let q = n - p;
            // da ⊗ b lands in block p − 1
            if let Some(&(_, off, sz)) = dst_layout.iter().find(|&&(pp, _, _)| pp == p - 1) {
                if sz > 0 {
                    let blk = a.diff(p).matrix().kronecker(&IntMatrix::identity(b.ngens(q)));
                    m.set_block(off, src_off, &blk);
                }
            }
            // (−1)^p a ⊗ db lands in block p
            if let Some(&(_, off, sz)) = dst_layout.iter().find(|&&(pp, _, _)| pp == p) {
                if sz > 0 {
                    let mut blk = IntMatrix::identity(a.ngens(p)).kronecker(b.diff(q).matrix());
                    if p.rem_euclid(2) == 1 {
                        blk = -&blk;
                    }
                    m.add_block(off, src_off, &blk);
                }
            }
        }
        homs.push(GroupHom::new_unchecked(&groups[(n - lo) as usize], &groups[(n - lo - 1) as usize], m));
    }
    ChainComplex::from_homs_unchecked(lo, groups, homs)
}

/// `f ⊗ g: A ⊗ B → A' ⊗ B'`.
pub fn tensor_map(f: &ChainMap, g: &ChainMap) -> ChainMap {
    let src = tensor(f.src(), g.src());
    let dst = tensor(f.dst(), g.dst());
    ChainMap::from_fn_unchecked(&src, &dst, |n| {
        let mut m = IntMatrix::zeros(dst.ngens(n), src.ngens(n));
        let dst_layout = tensor_layout(f.dst(), g.dst(), n);
        for (p, src_off, size) in tensor_layout(f.src(), g.src(), n) {
            if size == 0 {
                continue;
            }
            if let Some(&(_, off, sz)) = dst_layout.iter().find(|&&(pp, _, _)| pp == p) {
                if sz > 0 {
                    let blk = f.component(p).matrix().kronecker(g.component(n - p).matrix());
                    m.set_block(off, src_off, &blk);
                }
            }
        }
        m
    })
}
