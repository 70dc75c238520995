use proptest::prelude::*;
use rand::Rng;
use zchain::complexes::{tensor, tensor_map, ChainComplex, ChainMap};
use zchain::modelcls::classify;
use zchain::pushout::{check_proper, pullback, pushout, pushout_product, ProperSquare};
use zchain::random::{Gen, GenConfig};

fn gen(seed: u64) -> Gen {
    Gen::new(seed, 0, GenConfig { max_order: 8, max_rank: 3, max_len: 2, ..GenConfig::default() })
}

fn cofibration(g: &mut Gen, acyclic: bool) -> ChainMap {
    let a = g.mixed_complex();
    if acyclic {
        let c = g.contractible_free_complex();
        ChainComplex::direct_sum(&[&a, &c]).inclusions[0].clone()
    } else {
        g.cofibration_from(&a)
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(40))]

    #[test]
    fn pushout_maps_are_determined_by_their_legs(seed in any::<u64>()) {
        let mut g = gen(seed);
        let a = g.mixed_complex();
        let i = g.cofibration_from(&a);
        let c = g.mixed_complex();
        let f = g.chain_map(&a, &c);
        let po = pushout(&i, &f).unwrap();
        prop_assert!(po.leg_b.compose(&i).equals(&po.leg_c.compose(&f)));
        let x = g.mixed_complex();
        let w = g.chain_map(&po.complex, &x);
        let back = po.universal(&w.compose(&po.leg_b), &w.compose(&po.leg_c)).unwrap();
        prop_assert!(back.equals(&w));
        // cofibrations are stable under pushout
        prop_assert!(classify(&po.leg_c).is_cofibration());
    }

    #[test]
    fn pullback_maps_are_determined_by_their_legs(seed in any::<u64>()) {
        let mut g = gen(seed);
        let q = g.fibration();
        let b = g.mixed_complex();
        let gm = g.chain_map(&b, q.dst());
        let pb = pullback(&q, &gm).unwrap();
        prop_assert!(gm.compose(&pb.leg_b).equals(&q.compose(&pb.leg_l)));
        let x = g.mixed_complex();
        let w = g.chain_map(&x, &pb.complex);
        let back = pb.universal(&pb.leg_b.compose(&w), &pb.leg_l.compose(&w)).unwrap();
        prop_assert!(back.equals(&w));
        // fibrations are stable under pullback
        prop_assert!(classify(&pb.leg_b).is_fibration());
    }

    #[test]
    fn acyclic_classes_are_stable(seed in any::<u64>()) {
        let mut g = gen(seed);
        let i = cofibration(&mut g, true);
        let c = g.mixed_complex();
        let f = g.chain_map(i.src(), &c);
        prop_assert!(classify(&pushout(&i, &f).unwrap().leg_c).is_acyclic_cofibration());
        let q = g.acyclic_fibration();
        let b = g.mixed_complex();
        let gm = g.chain_map(&b, q.dst());
        prop_assert!(classify(&pullback(&q, &gm).unwrap().leg_b).is_acyclic_fibration());
    }

    #[test]
    fn pushout_products_of_cofibrations(seed in any::<u64>(), acyclic in any::<bool>()) {
        let mut g = gen(seed);
        let i = cofibration(&mut g, acyclic);
        let j = cofibration(&mut g, false);
        let cert = pushout_product(&i, &j).unwrap();
        prop_assert!(cert.holds());
        prop_assert_eq!(cert.acyclic_factor, classify(&i).is_acyclic_cofibration() || classify(&j).is_acyclic_cofibration());
        if cert.acyclic_factor {
            prop_assert!(cert.k.is_quasi_iso());
        }
    }

    #[test]
    fn tensoring_preserves_pushouts(seed in any::<u64>()) {
        let mut g = gen(seed);
        let a = g.mixed_complex();
        let i = g.cofibration_from(&a);
        let c = g.mixed_complex();
        let f = g.chain_map(&a, &c);
        let d = g.free_complex();
        let id = ChainMap::identity(&d);
        let left = tensor(&pushout(&i, &f).unwrap().complex, &d);
        let right = pushout(&tensor_map(&i, &id), &tensor_map(&f, &id)).unwrap().complex;
        let (lo, hi) = left.support().or(right.support()).unwrap_or((0, -1));
        for n in lo - 1..=hi + 1 {
            prop_assert!(left.group(n).is_isomorphic(&right.group(n)), "degree {}", n);
            prop_assert!(left.homology(n).group.is_isomorphic(&right.homology(n).group), "degree {}", n);
        }
    }

    #[test]
    fn the_model_structure_is_proper(seed in any::<u64>()) {
        let mut g = gen(seed);
        let i = cofibration(&mut g, false);
        let f = if g.rng.gen_bool(0.5) {
            let b = g.finite_complex();
            zchain::factor::factor_acf_fib(&g.chain_map(i.src(), &b)).unwrap().left
        } else {
            ChainMap::identity(i.src()).add(&g.nullhomotopic(i.src(), i.src()))
        };
        prop_assume!(f.is_quasi_iso());
        let rep = check_proper(&ProperSquare::Pushout { i, f }).unwrap();
        prop_assert!(rep.opposite_quasi_iso);
        prop_assert!(rep.ladder.iter().all(|r| r.comparison_iso && r.given_iso && r.opposite_iso));

        let q = g.fibration();
        let m = q.dst().clone();
        // Γ(M) → M when M is degreewise finite, else the identity
        let gq = zchain::factor::gamma(&m).map(|r| r.p).unwrap_or_else(|_| ChainMap::identity(&m));
        let rep = check_proper(&ProperSquare::Pullback { q, g: gq }).unwrap();
        prop_assert!(rep.opposite_quasi_iso);
        prop_assert!(rep.ladder.iter().all(|r| r.comparison_iso && r.opposite_iso));
    }
}
