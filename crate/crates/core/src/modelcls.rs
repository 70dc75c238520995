//! Classification of chain maps into cofibrations, fibrations and weak
//! equivalences, and the splitting `A = Y ⊕ Z` of a degreewise-free complex
//! with `d(y + z) = d'(y)`.

use std::collections::BTreeSet;
use std::fmt;

use serde::Serialize;

use crate::abelian::{FreeBasedGroup, GroupHom};
use crate::complexes::{ChainComplex, ChainMap};
use crate::error::{Error, Result};
use crate::intlinalg::{kernel_basis, lattice_basis, unimodular_inverse, IntMatrix, LinearSystem};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum MapLabel {
    Cofibration,
    Fibration,
    WeakEquivalence,
    AcyclicCofibration,
    AcyclicFibration,
}

impl fmt::Display for MapLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            MapLabel::Cofibration => "cofibration",
            MapLabel::Fibration => "fibration",
            MapLabel::WeakEquivalence => "weak_equivalence",
            MapLabel::AcyclicCofibration => "acyclic_cofibration",
            MapLabel::AcyclicFibration => "acyclic_fibration",
        };
        f.write_str(s)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct MapClassification {
    pub injective: bool,
    pub surjective: bool,
    pub coker_degreewise_free: bool,
    pub quasi_iso: bool,
    pub kernel_acyclic: bool,
    pub coker_acyclic: bool,
    pub labels: BTreeSet<MapLabel>,
}

impl MapClassification {
    pub fn has(&self, label: MapLabel) -> bool {
        self.labels.contains(&label)
    }

    pub fn is_cofibration(&self) -> bool {
        self.has(MapLabel::Cofibration)
    }

    pub fn is_fibration(&self) -> bool {
        self.has(MapLabel::Fibration)
    }

    pub fn is_weak_equivalence(&self) -> bool {
        self.has(MapLabel::WeakEquivalence)
    }

    pub fn is_acyclic_cofibration(&self) -> bool {
        self.has(MapLabel::AcyclicCofibration)
    }

    pub fn is_acyclic_fibration(&self) -> bool {
        self.has(MapLabel::AcyclicFibration)
    }

    /// The definitional identities between the booleans and labels.
    pub fn is_consistent(&self) -> bool {
        let cof = self.injective && self.coker_degreewise_free;
        let we = self.quasi_iso;
        self.is_cofibration() == cof
            && self.is_fibration() == self.surjective
            && self.is_weak_equivalence() == we
            && self.is_acyclic_fibration() == (self.surjective && we)
            && self.is_acyclic_fibration() == (self.surjective && self.kernel_acyclic)
            && self.is_acyclic_cofibration() == (cof && we)
            && self.is_acyclic_cofibration() == (cof && self.coker_acyclic)
    }
}

pub fn classify(f: &ChainMap) -> MapClassification {
    let injective = f.is_injective();
    let surjective = f.is_surjective();
    let (coker, _) = f.cokernel();
    let coker_degreewise_free = coker.is_degreewise_free();
    let coker_acyclic = coker.is_acyclic();
    let quasi_iso = f.is_quasi_iso();
    let kernel_acyclic = f.kernel().0.is_acyclic();
    let mut labels = BTreeSet::new();
    let cofibration = injective && coker_degreewise_free;
    if cofibration {
        labels.insert(MapLabel::Cofibration);
    }
    if surjective {
        labels.insert(MapLabel::Fibration);
    }
    if quasi_iso {
        labels.insert(MapLabel::WeakEquivalence);
    }
    if cofibration && quasi_iso {
        labels.insert(MapLabel::AcyclicCofibration);
    }
    if surjective && quasi_iso {
        labels.insert(MapLabel::AcyclicFibration);
    }
    MapClassification { injective, surjective, coker_degreewise_free, quasi_iso, kernel_acyclic, coker_acyclic, labels }
}

/// Per-degree data of the splitting `A_n = Y_n ⊕ Z_n`, all in coordinates
/// of a chosen free basis of `A_n`.
#[derive(Clone, Debug)]
pub struct SplitDegree {
    /// `ngens × r`: free basis of `A_n` in generator coordinates.
    pub basis: IntMatrix,
    /// `r × ngens`: coordinates with respect to `basis`.
    pub coords: IntMatrix,
    /// `r × |Y_n|`, columns span `Y_n`.
    pub y_basis: IntMatrix,
    /// `r × |Z_n|`, columns span `Z_n = ker d_n`.
    pub z_basis: IntMatrix,
    /// `(|Y_n| + |Z_n|) × r`: inverse of `[y_basis | z_basis]`.
    pub decompose: IntMatrix,
    /// `|Z_{n−1}| × |Y_n|`: the injective map `d'`.
    pub dprime: IntMatrix,
}

impl SplitDegree {
    pub fn y_rank(&self) -> usize {
        self.y_basis.cols()
    }

    pub fn z_rank(&self) -> usize {
        self.z_basis.cols()
    }

    /// `Y_n` inside `A_n` in generator coordinates.
    pub fn y_in_gens(&self) -> IntMatrix {
        &self.basis * &self.y_basis
    }

    pub fn z_in_gens(&self) -> IntMatrix {
        &self.basis * &self.z_basis
    }

    /// Maps generator coordinates of `A_n` to the `Y` coordinates.
    pub fn y_part(&self) -> IntMatrix {
        let y = self.y_rank();
        &self.decompose.block(0, 0, y, self.decompose.cols()) * &self.coords
    }

    pub fn z_part(&self) -> IntMatrix {
        let (y, z) = (self.y_rank(), self.z_rank());
        &self.decompose.block(y, 0, z, self.decompose.cols()) * &self.coords
    }
}

/// `A = Y ⊕ Z` with `Z_n = ker d_n` and `d|_Y = d'` injective into `Z_{n−1}`.
#[derive(Clone, Debug)]
pub struct FreeSplitting {
    pub complex: ChainComplex,
    lo: i32,
    degrees: Vec<SplitDegree>,
}

impl FreeSplitting {
    pub fn degree(&self, n: i32) -> Option<&SplitDegree> {
        if n < self.lo {
            return None;
        }
        self.degrees.get((n - self.lo) as usize)
    }

    pub fn y(&self, n: i32) -> FreeBasedGroup {
        let r = self.degree(n).map_or(0, SplitDegree::y_rank);
        FreeBasedGroup::new((0..r).map(|i| format!("y{n}.{i}")).collect())
    }

    pub fn z(&self, n: i32) -> FreeBasedGroup {
        let r = self.degree(n).map_or(0, SplitDegree::z_rank);
        FreeBasedGroup::new((0..r).map(|i| format!("z{n}.{i}")).collect())
    }

    /// `d'_n: Y_n → Z_{n−1}`.
    pub fn dprime(&self, n: i32) -> IntMatrix {
        match self.degree(n) {
            Some(s) => s.dprime.clone(),
            None => IntMatrix::zeros(self.degree(n - 1).map_or(0, SplitDegree::z_rank), 0),
        }
    }

    /// True iff every `d'_{n+1}: Y_{n+1} → Z_n` is an isomorphism.
    pub fn dprime_all_iso(&self) -> bool {
        self.first_non_iso_degree().is_none()
    }

    /// First `n` with `d'_{n+1}` not an isomorphism onto `Z_n`.
    pub fn first_non_iso_degree(&self) -> Option<i32> {
        self.complex.degrees().find(|&n| {
            let z = self.degree(n).map_or(0, SplitDegree::z_rank);
            let dp = self.dprime(n + 1);
            if dp.rows() != z || dp.cols() != z {
                return true;
            }
            z > 0 && unimodular_inverse(&dp).is_none()
        })
    }
}

/// Splits a degreewise-free complex. `Y_n` is spanned by the HNF-least
/// preimages of the HNF basis of `im d_n`.
pub fn split_free_complex(a: &ChainComplex) -> Result<FreeSplitting> {
    if let Some(n) = a.first_non_free_degree() {
        return Err(Error::NotFree { degree: n });
    }
    let mut degrees: Vec<SplitDegree> = Vec::new();
    let mut prev_z: Option<(IntMatrix, IntMatrix)> = None; // (z_basis, coords) of degree n − 1
    for n in a.degrees() {
        let g = a.group(n);
        let (basis, coords) = g.free_basis().expect("degree is free");
        let r = basis.cols();
        // d in free coordinates: coords_{n-1} · D · basis_n
        let d_free = match &prev_z {
            Some((_, prev_coords)) => &(prev_coords * a.diff(n).matrix()) * &basis,
            None => IntMatrix::zeros(0, r),
        };
        let z_basis = kernel_basis(&d_free);
        let image_basis = lattice_basis(&d_free); // rows
        let sys = LinearSystem::new(&d_free);
        let y_cols: Vec<_> = (0..image_basis.rows())
            .map(|i| sys.solve(image_basis.row(i)).expect("image element has a preimage"))
            .collect();
        let y_basis = IntMatrix::from_columns(r, &y_cols);
        let full = IntMatrix::hstack(r, &[&y_basis, &z_basis]);
        let decompose = unimodular_inverse(&full).expect("Y ⊕ Z is a basis of a free group");
        let dprime = match &prev_z {
            Some((prev_zb, _)) => {
                let zsys = LinearSystem::new(prev_zb);
                let cols: Vec<_> = (0..image_basis.rows())
                    .map(|i| zsys.solve(image_basis.row(i)).expect("boundaries are cycles"))
                    .collect();
                IntMatrix::from_columns(prev_zb.cols(), &cols)
            }
            None => IntMatrix::zeros(0, y_basis.cols()),
        };
        prev_z = Some((z_basis.clone(), coords.clone()));
        degrees.push(SplitDegree { basis, coords, y_basis, z_basis, decompose, dprime });
    }
    Ok(FreeSplitting { complex: a.clone(), lo: a.lo(), degrees })
}

/// Contracting homotopy `s` with `ds + sd = id`.
#[derive(Clone, Debug)]
pub struct Contraction {
    pub complex: ChainComplex,
    /// `s_n: A_n → A_{n+1}` for each degree of the support.
    lo: i32,
    components: Vec<GroupHom>,
}

impl Contraction {
    pub fn component(&self, n: i32) -> GroupHom {
        if n >= self.lo {
            if let Some(h) = self.components.get((n - self.lo) as usize) {
                return h.clone();
            }
        }
        GroupHom::zero(&self.complex.group(n), &self.complex.group(n + 1))
    }

    /// Checks `d s + s d = id` in every degree.
    pub fn verify(&self) -> bool {
        let a = &self.complex;
        a.degrees().all(|n| {
            let ds = a.diff(n + 1).compose(&self.component(n));
            let sd = self.component(n - 1).compose(&a.diff(n));
            ds.add(&sd).equals(&GroupHom::identity(&a.group(n)))
        })
    }
}

/// For a degreewise-free complex, returns a contraction iff every `d'` is an isomorphism.
pub fn is_contractible(a: &ChainComplex) -> Result<Option<Contraction>> {
    let split = split_free_complex(a)?;
    if !split.dprime_all_iso() {
        return Ok(None);
    }
    Ok(Some(contraction_from_split(&split)))
}

pub(crate) fn contraction_from_split(split: &FreeSplitting) -> Contraction {
    let a = &split.complex;
    let components = a
        .degrees()
        .map(|n| {
            let src = a.group(n);
            let dst = a.group(n + 1);
            let Some(next) = split.degree(n + 1) else {
                return GroupHom::zero(&src, &dst);
            };
            let cur = split.degree(n).expect("degree in support");
            let inv = unimodular_inverse(&next.dprime).expect("d' is invertible");
            // s(y + z) = d'^{-1}(z), expressed in generator coordinates
            let m = &(&next.y_in_gens() * &inv) * &cur.z_part();
            GroupHom::new_unchecked(&src, &dst, m)
        })
        .collect();
    Contraction { complex: a.clone(), lo: a.lo(), components }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::abelian::FgAbGroup;

    fn z() -> FgAbGroup {
        FgAbGroup::free(1)
    }

    #[test]
    fn classify_doubling() {
        let s = ChainComplex::sphere(0, &z());
        let two = ChainMap::new(&s, &s, vec![IntMatrix::from_rows(&[[2]])]).unwrap();
        let c = classify(&two);
        assert!(c.injective && !c.surjective && !c.coker_degreewise_free);
        assert!(c.labels.is_empty());
        assert!(c.is_consistent());
    }

    #[test]
    fn zero_into_disk_is_acyclic_cofibration() {
        let d = ChainComplex::disk(0, &z());
        let c = classify(&ChainMap::zero(&ChainComplex::zero(), &d));
        assert!(c.is_cofibration() && c.is_acyclic_cofibration());
        assert!(!c.is_fibration());
        assert!(c.is_consistent());
    }

    #[test]
    fn split_disk() {
        let s = split_free_complex(&ChainComplex::disk(0, &z())).unwrap();
        assert_eq!(s.y(1).rank(), 1);
        assert_eq!(s.z(0).rank(), 1);
        assert_eq!(s.z(1).rank(), 0);
        assert!(s.dprime(1).is_identity());
        assert!(s.dprime_all_iso());
    }

    #[test]
    fn split_sphere_and_zero_differential() {
        let s = split_free_complex(&ChainComplex::sphere(0, &z())).unwrap();
        assert_eq!((s.y(0).rank(), s.z(0).rank()), (0, 1));
        assert!(!s.dprime_all_iso());
        let a = ChainComplex::new(0, vec![z(), z()], vec![IntMatrix::zeros(1, 1)]).unwrap();
        let s = split_free_complex(&a).unwrap();
        assert_eq!((s.y(0).rank(), s.y(1).rank()), (0, 0));
        assert_eq!(s.dprime(1).cols(), 0);
        assert!(is_contractible(&a).unwrap().is_none());
    }

    #[test]
    fn split_rejects_torsion() {
        let a = ChainComplex::sphere(2, &FgAbGroup::cyclic(3));
        assert_eq!(split_free_complex(&a).unwrap_err(), Error::NotFree { degree: 2 });
    }

    #[test]
    fn contractions() {
        let d = ChainComplex::disk(0, &z());
        assert!(is_contractible(&d).unwrap().unwrap().verify());
        assert!(is_contractible(&ChainComplex::sphere(0, &z())).unwrap().is_none());
        let sum = ChainComplex::direct_sum(&[&d, &ChainComplex::disk(2, &z())]).complex;
        let c = is_contractible(&sum).unwrap().unwrap();
        assert!(c.verify());
    }

    #[test]
    fn split_with_nontrivial_presentation() {
        // degree 1: Z^2/(1,1) ≅ Z, mapping isomorphically onto degree 0
        let g1 = FgAbGroup::new(2, IntMatrix::from_rows(&[[1], [1]])).unwrap();
        let a = ChainComplex::new(0, vec![z(), g1], vec![IntMatrix::from_rows(&[[1, -1]])]).unwrap();
        let c = is_contractible(&a).unwrap().unwrap();
        assert!(c.verify());
    }
}
