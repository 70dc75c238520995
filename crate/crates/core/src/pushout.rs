//! Pushouts and pullbacks of chain maps, the pushout-product of two
//! cofibrations with its cokernel certificate, and properness checks.

use serde::Serialize;

use crate::complexes::{tensor, tensor_map, ChainComplex, ChainMap};
use crate::error::{Error, Result};
use crate::intlinalg::IntMatrix;
use crate::lifting::factor_through_mono;
use crate::modelcls::{classify, MapClassification};

/// `P = coker((i, −f): A → B ⊕ C)` with its two legs.
#[derive(Clone, Debug)]
pub struct PushoutData {
    pub complex: ChainComplex,
    /// `B → P`
    pub leg_b: ChainMap,
    /// `C → P`
    pub leg_c: ChainMap,
    pub i: ChainMap,
    pub f: ChainMap,
}

pub fn pushout(i: &ChainMap, f: &ChainMap) -> Result<PushoutData> {
    if i.src() != f.src() {
        return Err(Error::DimensionMismatch("pushout span maps have different sources".into()));
    }
    let ds = ChainComplex::direct_sum(&[i.dst(), f.dst()]);
    let span = ds.inclusions[0].compose(i).sub(&ds.inclusions[1].compose(f));
    let (complex, proj) = span.cokernel();
    let leg_b = proj.compose(&ds.inclusions[0]);
    let leg_c = proj.compose(&ds.inclusions[1]);
    Ok(PushoutData { complex, leg_b, leg_c, i: i.clone(), f: f.clone() })
}

impl PushoutData {
    /// The unique `P → X` restricting to `u` on `B` and to `v` on `C`.
    pub fn universal(&self, u: &ChainMap, v: &ChainMap) -> Result<ChainMap> {
        if !u.compose(&self.i).equals(&v.compose(&self.f)) {
            return Err(Error::PreconditionFailed("cocone does not commute over the span".into()));
        }
        ChainMap::from_fn(&self.complex, u.dst(), |n| {
            IntMatrix::hstack(u.dst().ngens(n), &[u.component(n).matrix(), v.component(n).matrix()])
        })
    }
}

/// `Z = ker((−g, q): B ⊕ L → M)` with its two legs.
#[derive(Clone, Debug)]
pub struct PullbackData {
    pub complex: ChainComplex,
    /// `Z → B`
    pub leg_b: ChainMap,
    /// `Z → L`
    pub leg_l: ChainMap,
    pub q: ChainMap,
    pub g: ChainMap,
    incl: ChainMap,
    sum: ChainComplex,
}

pub fn pullback(q: &ChainMap, g: &ChainMap) -> Result<PullbackData> {
    if q.dst() != g.dst() {
        return Err(Error::DimensionMismatch("pullback cospan maps have different targets".into()));
    }
    let ds = ChainComplex::direct_sum(&[g.src(), q.src()]);
    let cospan = q.compose(&ds.projections[1]).sub(&g.compose(&ds.projections[0]));
    let (complex, incl) = cospan.kernel();
    let leg_b = ds.projections[0].compose(&incl);
    let leg_l = ds.projections[1].compose(&incl);
    Ok(PullbackData { complex, leg_b, leg_l, q: q.clone(), g: g.clone(), incl, sum: ds.complex })
}

impl PullbackData {
    /// The unique `X → Z` with legs `u: X → B` and `v: X → L`.
    pub fn universal(&self, u: &ChainMap, v: &ChainMap) -> Result<ChainMap> {
        if !self.g.compose(u).equals(&self.q.compose(v)) {
            return Err(Error::PreconditionFailed("cone does not commute over the cospan".into()));
        }
        let x = u.src();
        let pair = ChainMap::from_fn(x, &self.sum, |n| {
            IntMatrix::vstack(x.ngens(n), &[u.component(n).matrix(), v.component(n).matrix()])
        })?;
        factor_through_mono(&pair, &self.incl)
    }
}

/// Mapping cone of `f: A → B` as the pushout of `A → cone(A)` along `f`, with `B → cone(f)`.
pub fn mapping_cone(f: &ChainMap) -> Result<(ChainComplex, ChainMap)> {
    let (_, incl) = f.src().cone();
    let p = pushout(&incl, f)?;
    Ok((p.complex, p.leg_c))
}

/// Certificate that the pushout-product `k: P → B ⊗ D` of two cofibrations
/// is a cofibration with cokernel `U ⊗ V`.
#[derive(Clone, Debug)]
pub struct PushoutProductCert {
    pub pushout: PushoutData,
    pub k: ChainMap,
    pub u: ChainComplex,
    pub v: ChainComplex,
    pub uv: ChainComplex,
    /// `coker(k) → U ⊗ V`
    pub m: ChainMap,
    pub k_injective: bool,
    pub m_iso: bool,
    pub k_class: MapClassification,
    pub acyclic_factor: bool,
}

impl PushoutProductCert {
    pub fn holds(&self) -> bool {
        self.k_injective
            && self.m_iso
            && self.k_class.is_cofibration()
            && (!self.acyclic_factor || self.k_class.is_acyclic_cofibration())
    }
}

pub fn pushout_product(i: &ChainMap, j: &ChainMap) -> Result<PushoutProductCert> {
    let (ci, cj) = (classify(i), classify(j));
    if !ci.is_cofibration() {
        return Err(Error::NotCofibration("first map".into()));
    }
    if !cj.is_cofibration() {
        return Err(Error::NotCofibration("second map".into()));
    }
    let (a, b, c, d) = (i.src(), i.dst(), j.src(), j.dst());
    let (id_a, id_b, id_c, id_d) =
        (ChainMap::identity(a), ChainMap::identity(b), ChainMap::identity(c), ChainMap::identity(d));
    let i_c = tensor_map(i, &id_c); // A⊗C → B⊗C
    let a_j = tensor_map(&id_a, j); // A⊗C → A⊗D
    let po = pushout(&i_c, &a_j)?;
    let b_j = tensor_map(&id_b, j); // B⊗C → B⊗D
    let i_d = tensor_map(i, &id_d); // A⊗D → B⊗D
    let k = po.universal(&b_j, &i_d)?;
    let (u, _) = i.cokernel();
    let (v, _) = j.cokernel();
    let uv = tensor(&u, &v);
    let (ck, _) = k.cokernel();
    // U, V and coker(k) are presented on the generators of B, D and B ⊗ D
    let m = ChainMap::from_fn(&ck, &uv, |n| IntMatrix::identity(ck.ngens(n)))?;
    let m_iso = m.src().degrees().chain(uv.degrees()).all(|n| m.component(n).is_isomorphism());
    let k_class = classify(&k);
    Ok(PushoutProductCert {
        k_injective: k_class.injective,
        pushout: po,
        k,
        u,
        v,
        uv,
        m,
        m_iso,
        k_class,
        acyclic_factor: ci.is_acyclic_cofibration() || cj.is_acyclic_cofibration(),
    })
}

/// A square whose opposite map must be a weak equivalence.
#[derive(Clone, Debug)]
pub enum ProperSquare {
    /// Pushout of the weak equivalence `f: A → C` along the cofibration `i: A → B`.
    Pushout { i: ChainMap, f: ChainMap },
    /// Pullback of the weak equivalence `g: B → M` along the fibration `q: L → M`.
    Pullback { q: ChainMap, g: ChainMap },
}

/// One degree of the comparison between the two short exact sequences.
#[derive(Clone, Debug, Serialize)]
pub struct LadderRow {
    pub degree: i32,
    /// Homology of the cokernels (pushout) or kernels (pullback) of the two rows.
    pub top: String,
    pub bottom: String,
    /// The induced map between them is an isomorphism.
    pub comparison_iso: bool,
    pub given_iso: bool,
    pub opposite_iso: bool,
}

#[derive(Clone, Debug)]
pub struct ProperReport {
    pub opposite: ChainMap,
    pub opposite_quasi_iso: bool,
    pub ladder: Vec<LadderRow>,
}

fn ladder(
    window: Option<(i32, i32)>,
    top: &ChainComplex,
    bottom: &ChainComplex,
    comparison: &ChainMap,
    given: &ChainMap,
    opposite: &ChainMap,
) -> Vec<LadderRow> {
    let Some((lo, hi)) = window else { return Vec::new() };
    (lo - 1..=hi + 1)
        .map(|n| LadderRow {
            degree: n,
            top: top.homology(n).group.to_string(),
            bottom: bottom.homology(n).group.to_string(),
            comparison_iso: comparison.induced_map(n).is_isomorphism(),
            given_iso: given.induced_map(n).is_isomorphism(),
            opposite_iso: opposite.induced_map(n).is_isomorphism(),
        })
        .collect()
}

pub fn check_proper(square: &ProperSquare) -> Result<ProperReport> {
    match square {
        ProperSquare::Pushout { i, f } => {
            if !classify(i).is_cofibration() {
                return Err(Error::PreconditionFailed("pushout square needs a cofibration".into()));
            }
            if !f.is_quasi_iso() {
                return Err(Error::PreconditionFailed("pushout square needs a weak equivalence".into()));
            }
            let po = pushout(i, f)?;
            let (g, j) = (&po.leg_b, &po.leg_c);
            let (ci, _) = i.cokernel();
            let (cj, _) = j.cokernel();
            // coker(i) and coker(j) are presented on the generators of B and D
            let h = ChainMap::from_fn(&ci, &cj, |n| g.component(n).matrix().clone())?;
            let window = crate::complexes::union_window(g.window(), f.window());
            let rows = ladder(window, &ci, &cj, &h, f, g);
            Ok(ProperReport { opposite_quasi_iso: g.is_quasi_iso(), opposite: g.clone(), ladder: rows })
        }
        ProperSquare::Pullback { q, g } => {
            if !q.is_surjective() {
                return Err(Error::PreconditionFailed("pullback square needs a fibration".into()));
            }
            if !g.is_quasi_iso() {
                return Err(Error::PreconditionFailed("pullback square needs a weak equivalence".into()));
            }
            let pb = pullback(q, g)?;
            let (opp, qt) = (&pb.leg_l, &pb.leg_b);
            let (kq, kq_incl) = q.kernel();
            let (kt, kt_incl) = qt.kernel();
            // ker(q̃) → ker(q) induced by the opposite leg
            let h = factor_through_mono(&opp.compose(&kt_incl), &kq_incl)?;
            let window = crate::complexes::union_window(opp.window(), g.window());
            let rows = ladder(window, &kt, &kq, &h, g, opp);
            Ok(ProperReport { opposite_quasi_iso: opp.is_quasi_iso(), opposite: opp.clone(), ladder: rows })
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::abelian::FgAbGroup;
    use crate::factor::gamma;
    use crate::lifting::GeneratingMap;

    fn z() -> FgAbGroup {
        FgAbGroup::free(1)
    }

    #[test]
    fn pushout_of_zero_maps_is_sum() {
        let b = ChainComplex::sphere(0, &z());
        let c = ChainComplex::disk(1, &FgAbGroup::cyclic(2));
        let zero = ChainComplex::zero();
        let po = pushout(&ChainMap::zero(&zero, &b), &ChainMap::zero(&zero, &c)).unwrap();
        assert_eq!(po.complex, ChainComplex::direct_sum(&[&b, &c]).complex);
    }

    #[test]
    fn pushout_along_identity() {
        let i = GeneratingMap::J(0).map();
        let a = i.src().clone();
        let po = pushout(&i, &ChainMap::identity(&a)).unwrap();
        assert!(po.leg_b.component(0).is_isomorphism() && po.leg_b.component(1).is_isomorphism());
    }

    #[test]
    fn mapping_cone_of_gamma_is_acyclic() {
        let s = ChainComplex::sphere(0, &FgAbGroup::cyclic(2));
        let g = gamma(&s).unwrap();
        let (mc, _) = mapping_cone(&g.p).unwrap();
        assert!(mc.is_acyclic());
    }

    #[test]
    fn universal_properties() {
        let i = GeneratingMap::J(0).map();
        let two = ChainMap::new(i.src(), i.src(), vec![IntMatrix::from_rows(&[[2]])]).unwrap();
        let po = pushout(&i, &two).unwrap();
        let u = po.leg_b.clone();
        let v = po.leg_c.clone();
        let w = po.universal(&u, &v).unwrap();
        assert!(w.equals(&ChainMap::identity(&po.complex)));

        let d = i.dst().clone();
        let q = ChainMap::zero(&d, &ChainComplex::zero());
        let pb = pullback(&q, &ChainMap::zero(&d, &ChainComplex::zero())).unwrap();
        let w = pb.universal(&ChainMap::identity(&d), &ChainMap::zero(&d, &d)).unwrap();
        assert!(pb.leg_b.compose(&w).equals(&ChainMap::identity(&d)));
    }

    #[test]
    fn pushout_products() {
        let s0 = ChainComplex::sphere(0, &z());
        let zero = ChainComplex::zero();
        let e = ChainMap::zero(&zero, &s0);
        let c = pushout_product(&e, &e).unwrap();
        assert!(c.holds());
        assert!(c.k.src().is_zero_complex());
        assert_eq!(c.uv.homology(0).group, z());

        let i0 = GeneratingMap::I(0).map();
        let c = pushout_product(&i0, &e).unwrap();
        assert!(c.holds() && c.acyclic_factor && c.k_class.is_acyclic_cofibration());

        let j0 = GeneratingMap::J(0).map();
        let c = pushout_product(&j0, &j0).unwrap();
        assert!(c.holds() && !c.k_class.quasi_iso);
        let (ck, _) = c.k.cokernel();
        assert!(ck.homology(2).group.is_isomorphic(&z()));
        assert!((-3..=4).filter(|&n| n != 2).all(|n| ck.homology(n).group.is_trivial()));

        let two = ChainMap::new(&s0, &s0, vec![IntMatrix::from_rows(&[[2]])]).unwrap();
        assert!(matches!(pushout_product(&two, &e), Err(Error::NotCofibration(_))));
    }

    #[test]
    fn properness_examples() {
        let j0 = GeneratingMap::J(0).map();
        let a = j0.src().clone();
        let r = check_proper(&ProperSquare::Pushout { i: ChainMap::identity(&a), f: ChainMap::identity(&a) }).unwrap();
        assert!(r.opposite_quasi_iso);

        let s = ChainComplex::sphere(0, &FgAbGroup::cyclic(2));
        let g = gamma(&s).unwrap();
        let (_, incl) = g.complex.cone();
        let r = check_proper(&ProperSquare::Pushout { i: incl, f: g.p.clone() }).unwrap();
        assert!(r.opposite_quasi_iso);
        assert!(r.opposite.src().is_acyclic() && r.opposite.dst().is_acyclic());
        assert!(r.ladder.iter().all(|row| row.comparison_iso && row.given_iso && row.opposite_iso));

        let s0 = ChainComplex::sphere(0, &z());
        let ds = ChainComplex::direct_sum(&[&s0, &ChainComplex::disk(0, &z())]);
        let w = ds.projections[0].clone();
        let r = check_proper(&ProperSquare::Pullback { q: ChainMap::identity(&s0), g: w }).unwrap();
        assert!(r.opposite_quasi_iso);

        let two = ChainMap::new(&s0, &s0, vec![IntMatrix::from_rows(&[[2]])]).unwrap();
        let e = check_proper(&ProperSquare::Pushout { i: ChainMap::identity(&s0), f: two }).unwrap_err();
        assert!(matches!(e, Error::PreconditionFailed(_)));
    }
}
