use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};
use proptest::prelude::*;
use rand::Rng;
use zchain::abelian::{ext1, tensor_groups, FgAbGroup, GroupHom};
use zchain::intlinalg::{solve, IntMatrix, IntVector};
use zchain::random::{Gen, GenConfig};

fn gen(seed: u64) -> Gen {
    Gen::new(seed, 0, GenConfig { max_order: 16, ..GenConfig::default() })
}

fn order(g: &FgAbGroup) -> usize {
    g.order().unwrap().to_usize().unwrap()
}

fn cyclic_orders(g: &FgAbGroup) -> Vec<i64> {
    g.invariant_factors().iter().map(|d| d.to_i64().unwrap()).collect()
}

/// `v − w` lies in the relation lattice iff `R·t = v − w` is solvable.
fn in_lattice(g: &FgAbGroup, v: &IntVector, w: &IntVector) -> bool {
    let diff: IntVector = v.iter().zip(w).map(|(a, b)| a - b).collect();
    solve(&g.relations().clone(), &diff).is_some()
}

/// Decides whether `m: Z^k → G` has a section `s` with `m∘s = id_G` by
/// solving for `S` and `T` in `S·R = 0`, `M·S − R·T = I` directly.
fn splits(m: &IntMatrix, g: &FgAbGroup) -> bool {
    let (k, n) = (m.cols(), g.ngens());
    let r = g.relations().clone();
    let rc = r.cols();
    // unknowns: S (k×n, column-major), T (rc×n, column-major)
    let unknowns = k * n + rc * n;
    let eqs = k * rc + n * n;
    let mut a = IntMatrix::zeros(eqs, unknowns);
    let mut b = vec![BigInt::zero(); eqs];
    let s_idx = |row: usize, col: usize| col * k + row;
    let t_idx = |row: usize, col: usize| k * n + col * rc + row;
    // (S·R)_{i,c} = Σ_j S_{i,j} R_{j,c} = 0
    for i in 0..k {
        for c in 0..rc {
            let e = i * rc + c;
            for j in 0..n {
                a.set(e, s_idx(i, j), r.get(j, c).clone());
            }
        }
    }
    // (M·S − R·T)_{i,j} = δ_ij
    for i in 0..n {
        for j in 0..n {
            let e = k * rc + i * n + j;
            for l in 0..k {
                a.set(e, s_idx(l, j), m.get(i, l).clone());
            }
            for c in 0..rc {
                a.set(e, t_idx(c, j), -r.get(i, c).clone());
            }
            if i == j {
                b[e] = BigInt::one();
            }
        }
    }
    solve(&a, &b).is_some()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn canonical_forms_decide_lattice_membership(seed in any::<u64>()) {
        let mut g = gen(seed);
        let grp = if g.rng.gen_bool(0.5) { g.finite_group() } else { g.free_group() };
        let n = grp.ngens();
        let v: IntVector = (0..n).map(|_| g.int(12)).collect();
        let w: IntVector = if g.rng.gen_bool(0.5) {
            // w = v + random relation combination
            let rel = grp.relations();
            let t: IntVector = (0..rel.cols()).map(|_| g.int(3)).collect();
            let shift = rel.mul_vec(&t);
            v.iter().zip(&shift).map(|(a, b)| a + b).collect()
        } else {
            (0..n).map(|_| g.int(12)).collect()
        };
        prop_assert_eq!(grp.canonical(&v) == grp.canonical(&w), in_lattice(&grp, &v, &w));
        prop_assert_eq!(grp.canonical(&grp.canonical(&v)), grp.canonical(&v));
    }

    #[test]
    fn element_enumeration_matches_order(seed in any::<u64>()) {
        let mut g = gen(seed);
        let grp = g.finite_group();
        let els = grp.elements().unwrap();
        prop_assert_eq!(els.len(), order(&grp));
        let prod: i64 = cyclic_orders(&grp).iter().product();
        prop_assert_eq!(prod as usize, els.len());
        prop_assert!(els.windows(2).all(|w| w[0] < w[1]));
        for e in &els {
            prop_assert_eq!(&grp.canonical(e), e);
        }
    }

    #[test]
    fn kernel_and_cokernel_are_exact(seed in any::<u64>()) {
        let mut g = gen(seed);
        let (src, dst) = (g.finite_group(), g.finite_group());
        let h = g.hom(&src, &dst);
        let (k, incl) = h.kernel();
        let (c, proj) = h.cokernel();
        prop_assert!(h.compose(&incl).is_zero());
        prop_assert!(proj.compose(&h).is_zero());
        prop_assert!(incl.is_injective());
        prop_assert!(proj.is_surjective());
        // brute-force oracle: count elements killed by h and the image size
        let els = src.elements().unwrap();
        let killed = els.iter().filter(|x| dst.is_zero_element(&h.apply(x))).count();
        prop_assert_eq!(order(&k), killed);
        let mut image: Vec<IntVector> = els.iter().map(|x| dst.canonical(&h.apply(x))).collect();
        image.sort();
        image.dedup();
        prop_assert_eq!(order(&c) * image.len(), order(&dst));
        prop_assert_eq!(order(&k) * image.len(), order(&src));
    }

    #[test]
    fn freeness_matches_splitting_of_surjections(seed in any::<u64>()) {
        let mut g = Gen::new(seed, 1, GenConfig { max_order: 12, max_rank: 2, ..GenConfig::default() });
        let grp = if g.rng.gen_bool(0.5) { g.finite_group() } else { g.free_group() };
        let n = grp.ngens();
        prop_assume!(n <= 4);
        let k = g.rng.gen_range(n..=4);
        let mut m = IntMatrix::zeros(n, k);
        m.set_block(0, 0, &IntMatrix::identity(n));
        for i in 0..n {
            for j in n..k {
                m.set(i, j, g.int(3));
            }
        }
        let m = &m * &g.unimodular(k);
        let onto = GroupHom::new(&FgAbGroup::free(k), &grp, m.clone()).unwrap();
        prop_assert!(onto.is_surjective());
        prop_assert_eq!(grp.is_free(), splits(&m, &grp));
    }

    #[test]
    fn tensor_and_ext_of_cyclics(m in 1i64..20, n in 1i64..20) {
        let (a, b) = (FgAbGroup::cyclic(m), FgAbGroup::cyclic(n));
        let gcd = m.gcd(&n);
        prop_assert_eq!(order(&tensor_groups(&a, &b)), gcd as usize);
        prop_assert_eq!(order(&ext1(&a, &b)), gcd as usize);
        prop_assert!(ext1(&FgAbGroup::free(2), &b).is_trivial());
        prop_assert!(tensor_groups(&FgAbGroup::free(1), &b).is_isomorphic(&b));
    }

    #[test]
    fn presentation_changes_preserve_isomorphism_type(seed in any::<u64>()) {
        let mut g = gen(seed);
        let grp = g.finite_group();
        let n = grp.ngens();
        let p = g.unimodular(n);
        let rel = &p * grp.relations();
        let other = FgAbGroup::new(n, rel).unwrap();
        prop_assert!(grp.is_isomorphic(&other));
        prop_assert_eq!(cyclic_orders(&grp), cyclic_orders(&other));
    }
}
