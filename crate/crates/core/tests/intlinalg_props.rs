use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use proptest::prelude::*;
use zchain::intlinalg::{determinant, hnf, kernel_basis, rank, snf, solve, unimodular_inverse, IntMatrix, IntVector};

fn matrix(max_dim: usize, bound: i64) -> impl Strategy<Value = IntMatrix> {
    (0..=max_dim, 0..=max_dim).prop_flat_map(move |(r, c)| {
        proptest::collection::vec(-bound..=bound, r * c)
            .prop_map(move |xs| IntMatrix::from_vec(r, c, xs.into_iter().map(BigInt::from).collect()))
    })
}

/// Rank over Q with exact rational elimination on numerator/denominator pairs.
fn rational_rank(m: &IntMatrix) -> usize {
    let mut rows: Vec<Vec<(BigInt, BigInt)>> =
        m.row_vectors().into_iter().map(|r| r.into_iter().map(|x| (x, BigInt::one())).collect()).collect();
    let mut rank = 0;
    for c in 0..m.cols() {
        let Some(p) = (rank..rows.len()).find(|&r| !rows[r][c].0.is_zero()) else { continue };
        rows.swap(rank, p);
        let (pn, pd) = rows[rank][c].clone();
        for r in rank + 1..rows.len() {
            let (xn, xd) = rows[r][c].clone();
            if xn.is_zero() {
                continue;
            }
            // row_r -= (x / p) row_rank
            let (fnum, fden) = (&xn * &pd, &xd * &pn);
            for k in 0..m.cols() {
                let (an, ad) = rows[r][k].clone();
                let (bn, bd) = rows[rank][k].clone();
                let num = &an * &bd * &fden - &bn * &fnum * &ad;
                let den = &ad * &bd * &fden;
                let g = num.gcd(&den);
                rows[r][k] = if g.is_zero() { (BigInt::zero(), BigInt::one()) } else { (num / &g, den / g) };
            }
        }
        rank += 1;
    }
    rank
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn smith_form_is_a_unimodular_diagonalization(a in matrix(8, 9)) {
        let s = snf(&a);
        prop_assert_eq!(&(&s.u * &a) * &s.v, s.d.clone());
        prop_assert!(determinant(&s.u).abs().is_one());
        prop_assert!(determinant(&s.v).abs().is_one());
        let diag = s.diagonal();
        prop_assert!(diag.iter().all(|x| x.is_positive()));
        prop_assert!(diag.windows(2).all(|w| w[1].is_multiple_of(&w[0])));
        for r in 0..s.d.rows() {
            for c in 0..s.d.cols() {
                if r != c || r >= s.rank {
                    prop_assert!(s.d.get(r, c).is_zero());
                }
            }
        }
        prop_assert_eq!(s.rank, rational_rank(&a));
    }

    #[test]
    fn hermite_form_is_reduced_echelon(a in matrix(8, 9)) {
        let (h, u) = hnf(&a);
        prop_assert_eq!(&u * &a, h.clone());
        prop_assert!(unimodular_inverse(&u).is_some());
        let r = rank(&a);
        prop_assert_eq!(r, rational_rank(&a));
        let mut last = None;
        for row in 0..h.rows() {
            match h.row(row).iter().position(|x| !x.is_zero()) {
                Some(p) => {
                    prop_assert!(row < r);
                    prop_assert!(last.map_or(true, |l| p > l));
                    prop_assert!(h.get(row, p).is_positive());
                    for above in 0..row {
                        prop_assert!(!h.get(above, p).is_negative() && h.get(above, p) < h.get(row, p));
                    }
                    last = Some(p);
                }
                None => prop_assert!(row >= r),
            }
        }
    }

    #[test]
    fn kernel_is_saturated_and_complementary(a in matrix(8, 9)) {
        let k = kernel_basis(&a);
        prop_assert!((&a * &k).is_zero());
        prop_assert_eq!(k.cols() + rational_rank(&a), a.cols());
        prop_assert_eq!(rational_rank(&k), k.cols());
        // saturation: every integer vector in the rational span is an integer combination
        if k.cols() > 0 {
            let s = snf(&k);
            prop_assert!(s.diagonal().iter().all(|d| d.is_one()));
        }
    }

    #[test]
    fn solve_recovers_a_preimage(a in matrix(8, 9), seed in any::<u64>()) {
        let x0: IntVector = (0..a.cols()).map(|i| BigInt::from(((seed >> (i % 60)) % 7) as i64 - 3)).collect();
        let b = a.mul_vec(&x0);
        let x = solve(&a, &b).expect("consistent system");
        prop_assert_eq!(a.mul_vec(&x), b);
    }

    #[test]
    fn solve_rejects_non_lattice_targets(k in 2i64..9) {
        let a = IntMatrix::from_rows(&[[k, 0], [0, k]]);
        prop_assert!(solve(&a, &[BigInt::one(), BigInt::zero()]).is_none());
    }
}

#[test]
fn entries_beyond_64_bits() {
    let big: BigInt = "340282366920938463463374607431768211457".parse().unwrap();
    let a = IntMatrix::from_vec(2, 2, vec![big.clone(), BigInt::from(2), BigInt::from(4), big.clone() * 2]);
    let s = snf(&a);
    assert_eq!(&(&s.u * &a) * &s.v, s.d);
    let det = determinant(&a);
    let prod: BigInt = s.diagonal().iter().product();
    assert_eq!(det.abs(), prod);
}
