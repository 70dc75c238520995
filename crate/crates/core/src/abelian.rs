//! Finitely generated abelian groups given by presentations, and
//! well-defined homomorphisms between them.
//!
//! A group is `Z^ngens / colspan(relations)`. Elements are integer vectors
//! in generator coordinates; two vectors are equal in the group iff their
//! canonical forms coincide. The canonical form reduces a vector modulo the
//! HNF basis of the relation lattice, so non-pivot coordinates are left
//! untouched and every pivot coordinate lands in `[0, pivot)`.

use std::fmt;
use std::sync::Arc;

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::intlinalg::{
    kernel_basis, lattice_basis, reduce_mod_echelon, snf, unimodular_inverse, IntMatrix,
    IntVector, LinearSystem,
};

struct GroupData {
    ngens: usize,
    relations: IntMatrix,
    /// HNF basis rows of the relation lattice.
    lattice: IntMatrix,
    invariant_factors: Vec<BigInt>,
    free_rank: usize,
}

/// A finitely presented abelian group. Cloning is cheap.
#[derive(Clone)]
pub struct FgAbGroup(Arc<GroupData>);

impl FgAbGroup {
    /// `Z^ngens / colspan(relations)`; `relations` must have `ngens` rows.
    pub fn new(ngens: usize, relations: IntMatrix) -> Result<Self> {
        if relations.rows() != ngens {
            return Err(Error::DimensionMismatch(format!(
                "relation matrix has {} rows, expected {ngens}",
                relations.rows()
            )));
        }
        Ok(Self::from_relations(relations))
    }

    fn from_relations(relations: IntMatrix) -> Self {
        let ngens = relations.rows();
        let lattice = lattice_basis(&relations);
        let s = snf(&lattice.transpose());
        let invariant_factors: Vec<BigInt> = s.diagonal().into_iter().filter(|d| !d.is_one()).collect();
        let free_rank = ngens - s.rank;
        FgAbGroup(Arc::new(GroupData { ngens, relations, lattice, invariant_factors, free_rank }))
    }

    pub fn free(rank: usize) -> Self {
        Self::from_relations(IntMatrix::zeros(rank, 0))
    }

    pub fn trivial() -> Self {
        Self::free(0)
    }

    /// `Z/n`; `n = 0` gives `Z`.
    pub fn cyclic(n: i64) -> Self {
        if n == 0 {
            Self::free(1)
        } else {
            Self::from_relations(IntMatrix::from_rows(&[[n]]))
        }
    }

    /// `⊕ Z/n_i` on one generator per factor (`0` entries give copies of `Z`).
    pub fn from_orders(orders: &[i64]) -> Self {
        let cols: Vec<IntVector> = orders
            .iter()
            .enumerate()
            .filter(|(_, &n)| n != 0)
            .map(|(i, &n)| {
                let mut v = vec![BigInt::zero(); orders.len()];
                v[i] = BigInt::from(n);
                v
            })
            .collect();
        Self::from_relations(IntMatrix::from_columns(orders.len(), &cols))
    }

    pub fn direct_sum(groups: &[&FgAbGroup]) -> Self {
        let blocks: Vec<&IntMatrix> = groups.iter().map(|g| &g.0.relations).collect();
        Self::from_relations(IntMatrix::block_diag(&blocks))
    }

    #[inline]
    pub fn ngens(&self) -> usize {
        self.0.ngens
    }

    pub fn relations(&self) -> &IntMatrix {
        &self.0.relations
    }

    /// HNF basis rows of the relation lattice.
    pub fn relation_lattice(&self) -> &IntMatrix {
        &self.0.lattice
    }

    /// Relation lattice basis as columns, the form used to append to linear systems.
    pub fn relation_columns(&self) -> IntMatrix {
        self.0.lattice.transpose()
    }

    /// Invariant factors `d_1 | d_2 | …`, all at least 2.
    pub fn invariant_factors(&self) -> &[BigInt] {
        &self.0.invariant_factors
    }

    pub fn free_rank(&self) -> usize {
        self.0.free_rank
    }

    pub fn is_trivial(&self) -> bool {
        self.0.free_rank == 0 && self.0.invariant_factors.is_empty()
    }

    /// Torsion-free, hence free since finitely generated.
    pub fn is_free(&self) -> bool {
        self.0.invariant_factors.is_empty()
    }

    pub fn is_finite(&self) -> bool {
        self.0.free_rank == 0
    }

    /// Order of a finite group, `None` if infinite.
    pub fn order(&self) -> Option<BigInt> {
        self.is_finite().then(|| self.0.invariant_factors.iter().product())
    }

    pub fn is_isomorphic(&self, other: &FgAbGroup) -> bool {
        self.0.free_rank == other.0.free_rank && self.0.invariant_factors == other.0.invariant_factors
    }

    pub fn canonical(&self, v: &[BigInt]) -> IntVector {
        assert_eq!(v.len(), self.0.ngens, "element has wrong length");
        let mut w = v.to_vec();
        reduce_mod_echelon(&mut w, &self.0.lattice);
        w
    }

    pub fn is_zero_element(&self, v: &[BigInt]) -> bool {
        self.canonical(v).iter().all(Zero::is_zero)
    }

    pub fn elements_equal(&self, v: &[BigInt], w: &[BigInt]) -> bool {
        let diff: IntVector = v.iter().zip(w).map(|(a, b)| a - b).collect();
        self.is_zero_element(&diff)
    }

    /// All canonical elements of a finite group in lexicographic order of
    /// their coordinates; `None` for infinite groups.
    pub fn elements(&self) -> Option<Vec<IntVector>> {
        if !self.is_finite() {
            return None;
        }
        let n = self.0.ngens;
        // full-rank lattice: the echelon basis is square upper triangular
        let bounds: Vec<BigInt> = (0..n).map(|i| self.0.lattice.get(i, i).clone()).collect();
        let mut out = Vec::new();
        let mut cur = vec![BigInt::zero(); n];
        loop {
            out.push(cur.clone());
            let mut i = n;
            loop {
                if i == 0 {
                    return Some(out);
                }
                i -= 1;
                cur[i] += 1;
                if cur[i] < bounds[i] {
                    break;
                }
                cur[i] = BigInt::zero();
            }
        }
    }

    /// Change of generators into Smith form `⊕ Z/d_i ⊕ Z^r`, dropping trivial factors.
    pub fn smith_coordinates(&self) -> SmithCoordinates {
        let s = snf(&self.0.relations);
        let n = self.0.ngens;
        let diag = |i: usize| if i < s.rank { s.d.get(i, i).clone() } else { BigInt::zero() };
        let keep: Vec<usize> = (0..n).filter(|&i| !diag(i).is_one()).collect();
        let u_inv = unimodular_inverse(&s.u).expect("SNF transform is unimodular");
        SmithCoordinates {
            orders: keep.iter().map(|&i| diag(i)).collect(),
            to_smith: s.u.select_rows(&keep),
            from_smith: u_inv.select_cols(&keep),
        }
    }

    /// For a free group: `(basis, coords)` with `basis` an `ngens × r` matrix
    /// of basis elements and `coords` the `r × ngens` coordinate map, so that
    /// `coords·basis = I`.
    pub fn free_basis(&self) -> Option<(IntMatrix, IntMatrix)> {
        if !self.is_free() {
            return None;
        }
        if self.0.lattice.rows() == 0 {
            let n = self.0.ngens;
            return Some((IntMatrix::identity(n), IntMatrix::identity(n)));
        }
        let sc = self.smith_coordinates();
        Some((sc.from_smith, sc.to_smith))
    }
}

impl PartialEq for FgAbGroup {
    /// Presentation equality: same generators and same relation lattice.
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.0, &other.0) || (self.0.ngens == other.0.ngens && self.0.lattice == other.0.lattice)
    }
}

impl Eq for FgAbGroup {}

impl fmt::Debug for FgAbGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "FgAbGroup({} gens, {})", self.0.ngens, self)
    }
}

impl fmt::Display for FgAbGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_trivial() {
            return write!(f, "0");
        }
        let mut parts: Vec<String> = Vec::new();
        match self.0.free_rank {
            0 => {}
            1 => parts.push("Z".into()),
            r => parts.push(format!("Z^{r}")),
        }
        parts.extend(self.0.invariant_factors.iter().map(|d| format!("Z/{d}")));
        write!(f, "{}", parts.join(" + "))
    }
}

/// Smith-form coordinates of a group: `to_smith` maps generator coordinates
/// to coordinates in `⊕ Z/orders[i]` (order 0 meaning `Z`), `from_smith`
/// maps back.
#[derive(Clone, Debug)]
pub struct SmithCoordinates {
    pub orders: Vec<BigInt>,
    pub to_smith: IntMatrix,
    pub from_smith: IntMatrix,
}

/// The subgroup generated by the columns of `gens`, modulo the group
/// relations plus the lattice spanned by `extra`, presented on one generator
/// per column of `gens`. The map into the ambient group has matrix `gens`.
pub fn subquotient(ambient: &FgAbGroup, gens: &IntMatrix, extra: &IntMatrix) -> FgAbGroup {
    let n = ambient.ngens();
    assert_eq!(gens.rows(), n);
    assert_eq!(extra.rows(), n);
    let k = gens.cols();
    let rel = ambient.relation_columns();
    let system = IntMatrix::hstack(n, &[gens, &rel, extra]);
    let ker = kernel_basis(&system);
    let proj = ker.block(0, 0, k, ker.cols());
    let rows = lattice_basis(&proj);
    FgAbGroup::from_relations(rows.transpose())
}

/// The lattice `{v : M·v ∈ L_dst}` as HNF basis rows.
fn preimage_lattice(matrix: &IntMatrix, dst: &FgAbGroup) -> IntMatrix {
    let n = matrix.cols();
    let rel = dst.relation_columns();
    let system = IntMatrix::hstack(matrix.rows(), &[matrix, &rel]);
    let ker = kernel_basis(&system);
    lattice_basis(&ker.block(0, 0, n, ker.cols()))
}

/// A homomorphism given by its action on the source generators.
#[derive(Clone)]
pub struct GroupHom {
    src: FgAbGroup,
    dst: FgAbGroup,
    matrix: IntMatrix,
}

impl GroupHom {
    /// Validated construction: rejects matrices that do not carry every
    /// source relation into the target relation lattice.
    pub fn new(src: &FgAbGroup, dst: &FgAbGroup, matrix: IntMatrix) -> Result<Self> {
        if matrix.rows() != dst.ngens() || matrix.cols() != src.ngens() {
            return Err(Error::DimensionMismatch(format!(
                "hom matrix is {}x{}, expected {}x{}",
                matrix.rows(),
                matrix.cols(),
                dst.ngens(),
                src.ngens()
            )));
        }
        let images = &matrix * &src.relation_columns();
        for c in 0..images.cols() {
            if !dst.is_zero_element(&images.column(c)) {
                return Err(Error::IllDefined(format!("relation {c} of the source is not carried to zero")));
            }
        }
        Ok(GroupHom { src: src.clone(), dst: dst.clone(), matrix })
    }

    /// Construction without the well-definedness check, for matrices that are
    /// well defined by construction.
    pub(crate) fn new_unchecked(src: &FgAbGroup, dst: &FgAbGroup, matrix: IntMatrix) -> Self {
        debug_assert_eq!((matrix.rows(), matrix.cols()), (dst.ngens(), src.ngens()));
        GroupHom { src: src.clone(), dst: dst.clone(), matrix }
    }

    pub fn identity(g: &FgAbGroup) -> Self {
        Self::new_unchecked(g, g, IntMatrix::identity(g.ngens()))
    }

    pub fn zero(src: &FgAbGroup, dst: &FgAbGroup) -> Self {
        Self::new_unchecked(src, dst, IntMatrix::zeros(dst.ngens(), src.ngens()))
    }

    pub fn src(&self) -> &FgAbGroup {
        &self.src
    }

    pub fn dst(&self) -> &FgAbGroup {
        &self.dst
    }

    pub fn matrix(&self) -> &IntMatrix {
        &self.matrix
    }

    /// `self ∘ inner`.
    pub fn compose(&self, inner: &GroupHom) -> GroupHom {
        assert!(inner.dst == self.src, "composition of non-composable homs");
        Self::new_unchecked(&inner.src, &self.dst, &self.matrix * &inner.matrix)
    }

    pub fn add(&self, other: &GroupHom) -> GroupHom {
        Self::new_unchecked(&self.src, &self.dst, &self.matrix + &other.matrix)
    }

    pub fn sub(&self, other: &GroupHom) -> GroupHom {
        Self::new_unchecked(&self.src, &self.dst, &self.matrix - &other.matrix)
    }

    pub fn neg(&self) -> GroupHom {
        Self::new_unchecked(&self.src, &self.dst, -&self.matrix)
    }

    /// Image of an element, in canonical form.
    pub fn apply(&self, v: &[BigInt]) -> IntVector {
        self.dst.canonical(&self.matrix.mul_vec(v))
    }

    pub fn is_zero(&self) -> bool {
        (0..self.matrix.cols()).all(|c| self.dst.is_zero_element(&self.matrix.column(c)))
    }

    /// Equality as homomorphisms (same groups, same values on generators).
    pub fn equals(&self, other: &GroupHom) -> bool {
        self.src == other.src && self.dst == other.dst && self.sub(other).is_zero()
    }

    pub fn is_injective(&self) -> bool {
        let p = preimage_lattice(&self.matrix, &self.dst);
        (0..p.rows()).all(|r| self.src.is_zero_element(p.row(r)))
    }

    pub fn is_surjective(&self) -> bool {
        let n = self.dst.ngens();
        let rel = self.dst.relation_columns();
        let span = lattice_basis(&IntMatrix::hstack(n, &[&self.matrix, &rel]));
        span.rows() == n && (0..n).all(|i| span.get(i, i).is_one())
    }

    pub fn is_isomorphism(&self) -> bool {
        self.is_injective() && self.is_surjective()
    }

    /// Solver for preimages `x` with `self(x) = y`.
    pub fn preimage_solver(&self) -> PreimageSolver {
        PreimageSolver::new(&self.matrix, &self.dst)
    }

    pub fn preimage(&self, y: &[BigInt]) -> Option<IntVector> {
        self.preimage_solver().solve(y)
    }

    /// Kernel subgroup with its inclusion. Generators are the HNF basis of
    /// the preimage lattice of the target relations.
    pub fn kernel(&self) -> (FgAbGroup, GroupHom) {
        let gens = preimage_lattice(&self.matrix, &self.dst).transpose();
        let n = self.src.ngens();
        let k = subquotient(&self.src, &gens, &IntMatrix::zeros(n, 0));
        let incl = GroupHom::new_unchecked(&k, &self.src, gens);
        (k, incl)
    }

    /// Cokernel presented on the target generators, relations augmented by the image.
    pub fn cokernel(&self) -> (FgAbGroup, GroupHom) {
        let n = self.dst.ngens();
        let rel = IntMatrix::hstack(n, &[self.dst.relations(), &self.matrix]);
        let c = FgAbGroup::from_relations(rel);
        let proj = GroupHom::new_unchecked(&self.dst, &c, IntMatrix::identity(n));
        (c, proj)
    }

    /// Image subgroup presented on the source generators' images.
    pub fn image(&self) -> FgAbGroup {
        subquotient(&self.dst, &self.matrix, &IntMatrix::zeros(self.dst.ngens(), 0))
    }
}

impl fmt::Debug for GroupHom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "GroupHom({:?} -> {:?}, {})", self.src, self.dst, self.matrix)
    }
}

/// Preimage solving for a fixed matrix into a presented group: finds `x`
/// with `M·x ≡ y` modulo the target relations.
#[derive(Clone, Debug)]
pub struct PreimageSolver {
    system: LinearSystem,
    ncols: usize,
}

impl PreimageSolver {
    pub fn new(matrix: &IntMatrix, dst: &FgAbGroup) -> Self {
        let rel = dst.relation_columns();
        let system = LinearSystem::new(&IntMatrix::hstack(matrix.rows(), &[matrix, &rel]));
        PreimageSolver { system, ncols: matrix.cols() }
    }

    pub fn solve(&self, y: &[BigInt]) -> Option<IntVector> {
        self.system.solve(y).map(|mut x| {
            x.truncate(self.ncols);
            x
        })
    }
}

/// Tensor product on generator pairs `(i, j) ↦ i·ngens(b) + j`, with the
/// inflated relations `R_a ⊗ 1` and `1 ⊗ R_b`.
pub fn tensor_groups(a: &FgAbGroup, b: &FgAbGroup) -> FgAbGroup {
    let ra = a.relation_columns().kronecker(&IntMatrix::identity(b.ngens()));
    let rb = IntMatrix::identity(a.ngens()).kronecker(&b.relation_columns());
    FgAbGroup::from_relations(IntMatrix::hstack(a.ngens() * b.ngens(), &[&ra, &rb]))
}

/// `f ⊗ g` on the generator-pair presentations of [`tensor_groups`].
pub fn tensor_homs(f: &GroupHom, g: &GroupHom, src: &FgAbGroup, dst: &FgAbGroup) -> GroupHom {
    GroupHom::new_unchecked(src, dst, f.matrix().kronecker(g.matrix()))
}

/// `Ext¹(C, K)` from the invariant factors of `C`: a copy of `K/nK` for each
/// torsion factor `Z/n` of `C`.
pub fn ext1(c: &FgAbGroup, k: &FgAbGroup) -> FgAbGroup {
    let parts: Vec<FgAbGroup> = c
        .invariant_factors()
        .iter()
        .map(|n| {
            let nk = IntMatrix::scalar(k.ngens(), n);
            FgAbGroup::from_relations(IntMatrix::hstack(k.ngens(), &[k.relations(), &nk]))
        })
        .collect();
    FgAbGroup::direct_sum(&parts.iter().collect::<Vec<_>>())
}

/// A free abelian group with an explicit ordered basis of labels.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FreeBasedGroup {
    labels: Vec<String>,
}

impl FreeBasedGroup {
    pub fn new(labels: Vec<String>) -> Self {
        FreeBasedGroup { labels }
    }

    pub fn rank(&self) -> usize {
        self.labels.len()
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn group(&self) -> FgAbGroup {
        FgAbGroup::free(self.labels.len())
    }
}
