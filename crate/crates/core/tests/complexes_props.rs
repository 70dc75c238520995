use num_integer::Integer;
use num_traits::ToPrimitive;
use proptest::prelude::*;
use rand::Rng;
use zchain::abelian::{tensor_groups, FgAbGroup, GroupHom};
use zchain::complexes::{tensor, ChainComplex, ChainMap};
use zchain::intlinalg::{IntMatrix, IntVector};
use zchain::pushout::mapping_cone;
use zchain::random::{Gen, GenConfig};

fn gen(seed: u64) -> Gen {
    Gen::new(seed, 0, GenConfig { max_order: 12, ..GenConfig::default() })
}

fn order(g: &FgAbGroup) -> usize {
    g.order().unwrap().to_usize().unwrap()
}

fn distinct(g: &FgAbGroup, xs: impl Iterator<Item = IntVector>) -> usize {
    let mut v: Vec<IntVector> = xs.map(|x| g.canonical(&x)).collect();
    v.sort();
    v.dedup();
    v.len()
}

fn tor(a: &FgAbGroup, b: &FgAbGroup) -> FgAbGroup {
    let mut orders = Vec::new();
    for x in a.invariant_factors() {
        for y in b.invariant_factors() {
            orders.push(x.gcd(y).to_i64().unwrap());
        }
    }
    FgAbGroup::from_orders(&orders)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(96))]

    #[test]
    fn homology_orders_match_brute_force(seed in any::<u64>()) {
        let mut g = gen(seed);
        let c = g.finite_complex();
        for n in c.degrees() {
            let here = c.group(n);
            let below = c.group(n - 1);
            let d = c.diff(n);
            let els = here.elements().unwrap();
            let cycles = els.iter().filter(|x| below.is_zero_element(&d.apply(x))).count();
            let above = c.group(n + 1).elements().unwrap();
            let boundaries = distinct(&here, above.iter().map(|x| c.diff(n + 1).apply(x)));
            prop_assert_eq!(order(&c.homology(n).group) * boundaries, cycles);
        }
    }

    #[test]
    fn maps_into_disks_are_homs_out_of_one_degree(seed in any::<u64>()) {
        let mut g = gen(seed);
        let a = g.finite_complex();
        let m = g.finite_group();
        let n = g.rng.gen_range(a.lo() - 1..=a.hi());
        let disk = ChainComplex::disk(n, &m);
        // hom → chain map → hom
        let phi = g.hom(&a.group(n), &m);
        let built = ChainMap::from_fn(&a, &disk, |k| {
            if k == n {
                phi.matrix().clone()
            } else if k == n + 1 {
                phi.compose(&a.diff(n + 1)).matrix().clone()
            } else {
                IntMatrix::zeros(disk.ngens(k), a.ngens(k))
            }
        }).unwrap();
        prop_assert!(built.component(n).equals(&phi));
        // chain map → hom → chain map
        let f = g.chain_map(&a, &disk);
        let psi = f.component(n);
        let rebuilt = ChainMap::from_fn(&a, &disk, |k| {
            if k == n {
                psi.matrix().clone()
            } else if k == n + 1 {
                psi.compose(&a.diff(n + 1)).matrix().clone()
            } else {
                IntMatrix::zeros(disk.ngens(k), a.ngens(k))
            }
        }).unwrap();
        prop_assert!(rebuilt.equals(&f));
    }

    #[test]
    fn maps_into_spheres_are_homs_out_of_cokernels(seed in any::<u64>()) {
        let mut g = gen(seed);
        let a = g.finite_complex();
        let m = g.finite_group();
        let n = g.rng.gen_range(a.lo()..=a.hi());
        let sphere = ChainComplex::sphere(n, &m);
        let (coker, _) = a.diff(n + 1).cokernel();
        let psi = g.hom(&coker, &m);
        let built = ChainMap::from_fn(&a, &sphere, |k| {
            if k == n { psi.matrix().clone() } else { IntMatrix::zeros(sphere.ngens(k), a.ngens(k)) }
        });
        prop_assert!(built.is_ok());
        let f = g.chain_map(&a, &sphere);
        let back = GroupHom::new(&coker, &m, f.component(n).matrix().clone());
        prop_assert!(back.is_ok());
    }

    #[test]
    fn homology_is_functorial(seed in any::<u64>()) {
        let mut g = gen(seed);
        let (a, b, c) = (g.mixed_complex(), g.mixed_complex(), g.mixed_complex());
        let f = g.chain_map(&a, &b);
        let h = g.chain_map(&b, &c);
        let hf = h.compose(&f);
        for n in a.lo() - 1..=a.hi() + 1 {
            prop_assert!(hf.induced_map(n).equals(&h.induced_map(n).compose(&f.induced_map(n))));
        }
        let id = ChainMap::identity(&a);
        for n in a.degrees() {
            prop_assert!(id.induced_map(n).is_isomorphism());
        }
    }

    #[test]
    fn quasi_isomorphisms_have_acyclic_cones(seed in any::<u64>()) {
        let mut g = gen(seed);
        let f = match g.rng.gen_range(0..3) {
            0 => { let (a, b) = (g.mixed_complex(), g.mixed_complex()); g.chain_map(&a, &b) }
            1 => g.acyclic_fibration(),
            _ => { let a = g.mixed_complex(); ChainMap::identity(&a).add(&g.nullhomotopic(&a, &a)) }
        };
        let (cone, _) = mapping_cone(&f).unwrap();
        prop_assert_eq!(f.is_quasi_iso(), cone.is_acyclic());
    }

    #[test]
    fn cones_are_acyclic_and_suspension_shifts(seed in any::<u64>(), k in -2i32..3) {
        let mut g = gen(seed);
        let a = g.mixed_complex();
        let (cone, incl) = a.cone();
        prop_assert!(cone.is_acyclic());
        prop_assert!(incl.is_injective());
        let s = a.suspend(k);
        for n in a.lo() - 1..=a.hi() + 1 {
            prop_assert!(s.homology(n + k).group.is_isomorphic(&a.homology(n).group));
        }
    }

    #[test]
    fn tensor_unit_and_symmetry(seed in any::<u64>()) {
        let mut g = Gen::new(seed, 0, GenConfig { max_order: 8, max_len: 2, ..GenConfig::default() });
        let (a, b) = (g.mixed_complex(), g.mixed_complex());
        let unit = tensor(&a, &ChainComplex::sphere(0, &FgAbGroup::free(1)));
        let (ab, ba) = (tensor(&a, &b), tensor(&b, &a));
        for n in a.lo() - 1..=a.hi() + 1 {
            prop_assert!(unit.group(n).is_isomorphic(&a.group(n)));
            prop_assert!(unit.homology(n).group.is_isomorphic(&a.homology(n).group));
        }
        for n in a.lo() + b.lo() - 1..=a.hi() + b.hi() + 1 {
            prop_assert!(ab.homology(n).group.is_isomorphic(&ba.homology(n).group));
        }
    }

    #[test]
    fn kunneth_for_free_complexes(seed in any::<u64>()) {
        let mut g = Gen::new(seed, 0, GenConfig { max_rank: 3, max_len: 3, ..GenConfig::default() });
        let (a, b) = (g.free_complex(), g.free_complex());
        let ab = tensor(&a, &b);
        for n in a.lo() + b.lo() - 1..=a.hi() + b.hi() + 1 {
            let mut parts = Vec::new();
            for p in a.lo()..=a.hi() {
                let (hp, hq) = (a.homology(p).group, b.homology(n - p).group);
                parts.push(tensor_groups(&hp, &hq));
                parts.push(tor(&hp, &b.homology(n - 1 - p).group));
            }
            let expected = FgAbGroup::direct_sum(&parts.iter().collect::<Vec<_>>());
            prop_assert!(ab.homology(n).group.is_isomorphic(&expected), "degree {}", n);
        }
    }
}
