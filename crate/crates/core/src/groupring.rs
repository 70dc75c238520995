//! The group ring `Z[A]` of a finite abelian group, its augmentation ideal
//! `I(A)` and `I²(A) = ker(θ: I(A) → A)`, with explicit bases.
//!
//! `I(A)` is free on `[a] − [0]` for the nonzero canonical elements `a`,
//! listed in lexicographic order of their coordinates. `I²(A)` carries the
//! HNF basis of the kernel lattice of `θ`.

use std::collections::HashMap;

use crate::abelian::{FgAbGroup, FreeBasedGroup, GroupHom};
use crate::complexes::{ChainComplex, ChainMap};
use crate::error::{Error, Result};
use crate::intlinalg::{unit_vector, IntMatrix, IntVector, LinearSystem};

fn elements_of(a: &FgAbGroup) -> Result<Vec<IntVector>> {
    a.elements().ok_or(Error::InfiniteGroup { free_rank: a.free_rank() })
}

fn label(v: &IntVector) -> String {
    let parts: Vec<String> = v.iter().map(ToString::to_string).collect();
    format!("[{}]", parts.join(","))
}

/// `ε: Z[A] → Z` and `θ: Z[A] → A` on the basis `[a]`, all elements in lex order.
#[derive(Clone, Debug)]
pub struct AugmentationData {
    pub base: FgAbGroup,
    pub elements: Vec<IntVector>,
    pub epsilon: GroupHom,
    pub theta: GroupHom,
}

impl AugmentationData {
    pub fn new(a: &FgAbGroup) -> Result<Self> {
        let elements = elements_of(a)?;
        let za = FgAbGroup::free(elements.len());
        let ones = IntMatrix::from_rows(&[vec![1i64; elements.len()]]);
        let epsilon = GroupHom::new_unchecked(&za, &FgAbGroup::free(1), ones);
        let theta = GroupHom::new_unchecked(&za, a, IntMatrix::from_columns(a.ngens(), &elements));
        Ok(AugmentationData { base: a.clone(), elements, epsilon, theta })
    }

    pub fn labels(&self) -> Vec<String> {
        self.elements.iter().map(label).collect()
    }

    /// `I(A) → Z[A]`, `[a] − [0] ↦ e_a − e_0`.
    pub fn ideal_inclusion(&self) -> IntMatrix {
        let n = self.elements.len();
        let mut m = IntMatrix::zeros(n, n.saturating_sub(1));
        for j in 0..n.saturating_sub(1) {
            m.set(j + 1, j, 1.into());
            m.set(0, j, (-1).into());
        }
        m
    }
}

/// `I(A)` with its ordered basis and `θ` restricted to it.
#[derive(Clone, Debug)]
pub struct IGroup {
    base: FgAbGroup,
    elements: Vec<IntVector>,
    index: HashMap<IntVector, usize>,
    free: FreeBasedGroup,
    theta: GroupHom,
}

#[allow(non_snake_case)]
pub fn build_I(a: &FgAbGroup) -> Result<IGroup> {
    let elements: Vec<IntVector> = elements_of(a)?.into_iter().skip(1).collect();
    let index = elements.iter().enumerate().map(|(i, v)| (v.clone(), i)).collect();
    let free = FreeBasedGroup::new(elements.iter().map(|v| format!("{}-[0]", label(v))).collect());
    let theta = GroupHom::new_unchecked(&free.group(), a, IntMatrix::from_columns(a.ngens(), &elements));
    Ok(IGroup { base: a.clone(), elements, index, free, theta })
}

impl IGroup {
    pub fn base(&self) -> &FgAbGroup {
        &self.base
    }

    pub fn rank(&self) -> usize {
        self.elements.len()
    }

    pub fn free(&self) -> &FreeBasedGroup {
        &self.free
    }

    pub fn group(&self) -> FgAbGroup {
        self.free.group()
    }

    /// The element `a` behind the `i`-th basis vector `[a] − [0]`.
    pub fn element(&self, i: usize) -> &IntVector {
        &self.elements[i]
    }

    /// Coordinates of `[a] − [0]`; zero for `a = 0`.
    pub fn basis_vector(&self, a: &[num_bigint::BigInt]) -> IntVector {
        let c = self.base.canonical(a);
        match self.index.get(&c) {
            Some(&i) => unit_vector(self.rank(), i),
            None => vec![0.into(); self.rank()],
        }
    }

    pub fn theta(&self) -> &GroupHom {
        &self.theta
    }
}

/// `I²(A) ⊂ I(A)` with the HNF basis of the kernel lattice.
#[derive(Clone, Debug)]
pub struct I2Group {
    free: FreeBasedGroup,
    inclusion: IntMatrix,
    solver: LinearSystem,
}

#[allow(non_snake_case)]
pub fn build_I2(a: &FgAbGroup) -> Result<I2Group> {
    Ok(I2Group::from_i(&build_I(a)?))
}

impl I2Group {
    pub fn from_i(i: &IGroup) -> Self {
        let inclusion = i.theta.kernel().1.matrix().clone();
        let free = FreeBasedGroup::new((0..inclusion.cols()).map(|k| format!("k{k}")).collect());
        let solver = LinearSystem::new(&inclusion);
        I2Group { free, inclusion, solver }
    }

    pub fn rank(&self) -> usize {
        self.inclusion.cols()
    }

    pub fn free(&self) -> &FreeBasedGroup {
        &self.free
    }

    pub fn group(&self) -> FgAbGroup {
        self.free.group()
    }

    /// `rank(I) × rank(I²)`: the basis of `I²` in `I`-coordinates.
    pub fn inclusion_matrix(&self) -> &IntMatrix {
        &self.inclusion
    }

    /// `I`-coordinates of an element of `I²` to `I²`-coordinates.
    pub fn coordinates(&self, v: &[num_bigint::BigInt]) -> Option<IntVector> {
        self.solver.solve(v)
    }

    /// `I(A)/I²(A)` presented on the `I` basis.
    pub fn quotient(&self) -> FgAbGroup {
        FgAbGroup::new(self.inclusion.rows(), self.inclusion.clone()).expect("dimensions agree")
    }
}

/// Both functors at one group.
#[derive(Clone, Debug)]
pub struct IData {
    pub i: IGroup,
    pub i2: I2Group,
}

impl IData {
    pub fn new(a: &FgAbGroup) -> Result<Self> {
        let i = build_I(a)?;
        let i2 = I2Group::from_i(&i);
        Ok(IData { i, i2 })
    }
}

/// `I(f)` on the bases: `[a] − [0] ↦ [f a] − [0]`.
pub fn i_matrix(f: &GroupHom, src: &IGroup, dst: &IGroup) -> IntMatrix {
    let cols: Vec<IntVector> = (0..src.rank()).map(|i| dst.basis_vector(&f.apply(src.element(i)))).collect();
    IntMatrix::from_columns(dst.rank(), &cols)
}

/// `I²(f)`, obtained by solving against the target inclusion.
pub fn i2_matrix(f: &GroupHom, src: &IData, dst: &IData) -> IntMatrix {
    let imap = i_matrix(f, &src.i, &dst.i);
    let image = &imap * src.i2.inclusion_matrix();
    let cols: Vec<IntVector> = image
        .columns()
        .iter()
        .map(|c| dst.i2.coordinates(c).expect("I(f) preserves the kernel of theta"))
        .collect();
    IntMatrix::from_columns(dst.i2.rank(), &cols)
}

#[allow(non_snake_case)]
pub fn I_map(f: &GroupHom) -> Result<GroupHom> {
    let (src, dst) = (build_I(f.src())?, build_I(f.dst())?);
    Ok(GroupHom::new_unchecked(&src.group(), &dst.group(), i_matrix(f, &src, &dst)))
}

#[allow(non_snake_case)]
pub fn I2_map(f: &GroupHom) -> Result<GroupHom> {
    let (src, dst) = (IData::new(f.src())?, IData::new(f.dst())?);
    Ok(GroupHom::new_unchecked(&src.i2.group(), &dst.i2.group(), i2_matrix(f, &src, &dst)))
}

/// Per-degree `I` and `I²` data of a degreewise-finite bounded complex.
#[derive(Clone, Debug)]
pub struct GroupRingComplex {
    pub complex: ChainComplex,
    lo: i32,
    data: Vec<IData>,
    empty: IData,
}

impl GroupRingComplex {
    pub fn new(b: &ChainComplex) -> Result<Self> {
        let data = b.degrees().map(|n| IData::new(&b.group(n))).collect::<Result<Vec<_>>>()?;
        let empty = IData::new(&FgAbGroup::trivial())?;
        Ok(GroupRingComplex { complex: b.clone(), lo: b.lo(), data, empty })
    }

    pub fn at(&self, n: i32) -> &IData {
        if n < self.lo {
            return &self.empty;
        }
        self.data.get((n - self.lo) as usize).unwrap_or(&self.empty)
    }

    pub fn i_rank(&self, n: i32) -> usize {
        self.at(n).i.rank()
    }

    pub fn i2_rank(&self, n: i32) -> usize {
        self.at(n).i2.rank()
    }

    /// `I(d): I(B_n) → I(B_{n−1})`.
    pub fn i_d(&self, n: i32) -> IntMatrix {
        i_matrix(&self.complex.diff(n), &self.at(n).i, &self.at(n - 1).i)
    }

    pub fn i2_d(&self, n: i32) -> IntMatrix {
        i2_matrix(&self.complex.diff(n), self.at(n), self.at(n - 1))
    }

    /// `θ: I(B_n) → B_n`.
    pub fn theta(&self, n: i32) -> IntMatrix {
        self.at(n).i.theta().matrix().clone()
    }

    /// Inclusion `I²(B_n) → I(B_n)`.
    pub fn incl(&self, n: i32) -> IntMatrix {
        self.at(n).i2.inclusion_matrix().clone()
    }

    /// `I(f_n)` for a chain map from this complex into `dst`'s.
    pub fn i_f(&self, f: &ChainMap, dst: &GroupRingComplex, n: i32) -> IntMatrix {
        i_matrix(&f.component(n), &self.at(n).i, &dst.at(n).i)
    }

    pub fn i2_f(&self, f: &ChainMap, dst: &GroupRingComplex, n: i32) -> IntMatrix {
        i2_matrix(&f.component(n), self.at(n), dst.at(n))
    }

    fn degrees(&self) -> Vec<i32> {
        if self.complex.is_zero_complex() {
            Vec::new()
        } else {
            self.complex.degrees().collect()
        }
    }

    /// The complex `I(B_*)`.
    pub fn i_complex(&self) -> ChainComplex {
        let degs = self.degrees();
        let groups = degs.iter().map(|&n| FgAbGroup::free(self.i_rank(n))).collect();
        let diffs = degs.iter().skip(1).map(|&n| self.i_d(n)).collect();
        ChainComplex::new(self.lo, groups, diffs).expect("I preserves zero maps")
    }

    /// The complex `I²(B_*)`.
    pub fn i2_complex(&self) -> ChainComplex {
        let degs = self.degrees();
        let groups = degs.iter().map(|&n| FgAbGroup::free(self.i2_rank(n))).collect();
        let diffs = degs.iter().skip(1).map(|&n| self.i2_d(n)).collect();
        ChainComplex::new(self.lo, groups, diffs).expect("I² preserves zero maps")
    }
}
