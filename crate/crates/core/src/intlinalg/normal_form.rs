use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::matrix::{IntMatrix, IntVector};

/// `U·A·V = D` with `U`, `V` unimodular and `D` in Smith normal form.
#[derive(Clone, Debug)]
pub struct SnfResult {
    pub d: IntMatrix,
    pub u: IntMatrix,
    pub v: IntMatrix,
    pub rank: usize,
}

impl SnfResult {
    /// The nonzero diagonal entries `d_1 | d_2 | … | d_rank`.
    pub fn diagonal(&self) -> Vec<BigInt> {
        (0..self.rank).map(|i| self.d.get(i, i).clone()).collect()
    }
}

/// Extended gcd normalized to a nonnegative gcd: `x·a + y·b = g`.
pub(crate) fn xgcd(a: &BigInt, b: &BigInt) -> (BigInt, BigInt, BigInt) {
    let e = a.extended_gcd(b);
    if e.gcd.is_negative() {
        (-e.gcd, -e.x, -e.y)
    } else {
        (e.gcd, e.x, e.y)
    }
}

/// Clears `a[r][col]` against the pivot row `p` using a unimodular
/// combination of the two rows, mirrored onto `u`.
fn eliminate_row_pair(a: &mut IntMatrix, u: &mut IntMatrix, p: usize, r: usize, col: usize) {
    let pa = a.get(p, col).clone();
    let rb = a.get(r, col).clone();
    if rb.is_zero() {
        return;
    }
    if pa.is_zero() {
        a.swap_rows(p, r);
        u.swap_rows(p, r);
        return;
    }
    if rb.is_multiple_of(&pa) {
        let q = -(&rb / &pa);
        a.add_row_multiple(r, p, &q);
        u.add_row_multiple(r, p, &q);
        return;
    }
    let (g, x, y) = xgcd(&pa, &rb);
    let s = -(&rb / &g);
    let t = &pa / &g;
    a.combine_rows(p, r, &x, &y, &s, &t);
    u.combine_rows(p, r, &x, &y, &s, &t);
}

fn eliminate_col_pair(a: &mut IntMatrix, v: &mut IntMatrix, p: usize, c: usize, row: usize) {
    let pa = a.get(row, p).clone();
    let cb = a.get(row, c).clone();
    if cb.is_zero() {
        return;
    }
    if pa.is_zero() {
        a.swap_cols(p, c);
        v.swap_cols(p, c);
        return;
    }
    if cb.is_multiple_of(&pa) {
        let q = -(&cb / &pa);
        a.add_col_multiple(c, p, &q);
        v.add_col_multiple(c, p, &q);
        return;
    }
    let (g, x, y) = xgcd(&pa, &cb);
    let s = -(&cb / &g);
    let t = &pa / &g;
    a.combine_cols(p, c, &x, &y, &s, &t);
    v.combine_cols(p, c, &x, &y, &s, &t);
}

/// Row-style Hermite normal form: returns `(H, U)` with `U·M = H`, `U`
/// unimodular, `H` in row echelon form with positive pivots and the
/// entries above every pivot reduced into `[0, pivot)`.
pub fn hnf(m: &IntMatrix) -> (IntMatrix, IntMatrix) {
    let mut h = m.clone();
    let mut u = IntMatrix::identity(m.rows());
    let mut pr = 0;
    for col in 0..m.cols() {
        if pr == m.rows() {
            break;
        }
        // Euclid down the column: the smallest entry becomes the pivot and
        // reduces the others, which keeps entries far smaller than xgcd combinations
        loop {
            let mut best: Option<usize> = None;
            for r in pr..m.rows() {
                let x = h.get(r, col);
                if !x.is_zero() && best.is_none_or(|b| x.magnitude() < h.get(b, col).magnitude()) {
                    best = Some(r);
                }
            }
            let Some(b) = best else { break };
            if b != pr {
                h.swap_rows(pr, b);
                u.swap_rows(pr, b);
            }
            let pivot = h.get(pr, col).clone();
            let mut done = true;
            for r in pr + 1..m.rows() {
                if h.get(r, col).is_zero() {
                    continue;
                }
                let q = -h.get(r, col).div_floor(&pivot);
                h.add_row_multiple(r, pr, &q);
                u.add_row_multiple(r, pr, &q);
                if !h.get(r, col).is_zero() {
                    done = false;
                }
            }
            if done {
                break;
            }
        }
        if h.get(pr, col).is_zero() {
            continue;
        }
        if h.get(pr, col).is_negative() {
            h.negate_row(pr);
            u.negate_row(pr);
        }
        let pivot = h.get(pr, col).clone();
        for r in 0..pr {
            let q = h.get(r, col).div_floor(&pivot);
            if !q.is_zero() {
                let q = -q;
                h.add_row_multiple(r, pr, &q);
                u.add_row_multiple(r, pr, &q);
            }
        }
        pr += 1;
    }
    (h, u)
}

/// Number of leading nonzero rows of an echelon matrix.
pub(crate) fn echelon_rank(h: &IntMatrix) -> usize {
    (0..h.rows()).take_while(|&r| h.row(r).iter().any(|x| !x.is_zero())).count()
}

/// Pivot column of a nonzero echelon row.
pub(crate) fn pivot_col(row: &[BigInt]) -> Option<usize> {
    row.iter().position(|x| !x.is_zero())
}

/// Smith normal form by alternating gcd row/column elimination, followed by
/// a divisibility repair step.
pub fn snf(m: &IntMatrix) -> SnfResult {
    let (rows, cols) = (m.rows(), m.cols());
    let mut a = m.clone();
    let mut u = IntMatrix::identity(rows);
    let mut v = IntMatrix::identity(cols);
    let mut t = 0;
    while t < rows.min(cols) {
        // smallest nonzero entry of the trailing block as pivot
        let mut best: Option<(usize, usize)> = None;
        for r in t..rows {
            for c in t..cols {
                let x = a.get(r, c);
                if !x.is_zero() && best.is_none_or(|(br, bc)| x.magnitude() < a.get(br, bc).magnitude()) {
                    best = Some((r, c));
                }
            }
        }
        let Some((br, bc)) = best else { break };
        a.swap_rows(t, br);
        u.swap_rows(t, br);
        a.swap_cols(t, bc);
        v.swap_cols(t, bc);
        loop {
            for r in t + 1..rows {
                eliminate_row_pair(&mut a, &mut u, t, r, t);
            }
            for c in t + 1..cols {
                eliminate_col_pair(&mut a, &mut v, t, c, t);
            }
            let col_clear = (t + 1..rows).all(|r| a.get(r, t).is_zero());
            if !col_clear {
                continue;
            }
            let pivot = a.get(t, t).clone();
            let offender =
                (t + 1..rows).find(|&r| (t + 1..cols).any(|c| !a.get(r, c).is_multiple_of(&pivot)));
            match offender {
                Some(r) => {
                    let one = BigInt::one();
                    a.add_row_multiple(t, r, &one);
                    u.add_row_multiple(t, r, &one);
                }
                None => break,
            }
        }
        if a.get(t, t).is_negative() {
            a.negate_row(t);
            u.negate_row(t);
        }
        t += 1;
    }
    let rank = (0..rows.min(cols)).take_while(|&i| !a.get(i, i).is_zero()).count();
    SnfResult { d: a, u, v, rank }
}

pub fn rank(m: &IntMatrix) -> usize {
    echelon_rank(&hnf(m).0)
}

/// Reduces `v` modulo the lattice spanned by the echelon rows of `basis`
/// (positive pivots), bringing each pivot coordinate into `[0, pivot)`.
/// The result is a canonical representative of the coset `v + lattice`.
pub fn reduce_mod_echelon(v: &mut IntVector, basis: &IntMatrix) {
    for r in 0..basis.rows() {
        let row = basis.row(r);
        let Some(p) = pivot_col(row) else { continue };
        let q = v[p].div_floor(&row[p]);
        if q.is_zero() {
            continue;
        }
        for (x, b) in v.iter_mut().zip(row) {
            if !b.is_zero() {
                *x -= &q * b;
            }
        }
    }
}

/// Echelon (HNF) basis rows of the lattice spanned by the columns of `gens`.
pub fn lattice_basis(gens: &IntMatrix) -> IntMatrix {
    let (h, _) = hnf(&gens.transpose());
    let r = echelon_rank(&h);
    h.select_rows(&(0..r).collect::<Vec<_>>())
}

/// Precomputed data for repeatedly solving `M·x = b` over the integers.
#[derive(Clone, Debug)]
pub struct LinearSystem {
    rows: usize,
    cols: usize,
    /// HNF of `Mᵀ` restricted to its nonzero rows.
    echelon: IntMatrix,
    /// Rows of `U` matching `echelon`, so that `(U·Mᵀ)_i = echelon_i`.
    transform: IntMatrix,
    /// HNF basis rows of the integer kernel of `M`.
    kernel: IntMatrix,
}

impl LinearSystem {
    pub fn new(m: &IntMatrix) -> Self {
        let (h, u) = hnf(&m.transpose());
        let r = echelon_rank(&h);
        let lead: Vec<usize> = (0..r).collect();
        let tail: Vec<usize> = (r..m.cols()).collect();
        let kernel_rows = u.select_rows(&tail);
        let kernel = if kernel_rows.rows() == 0 { kernel_rows } else { hnf(&kernel_rows).0 };
        LinearSystem {
            rows: m.rows(),
            cols: m.cols(),
            echelon: h.select_rows(&lead),
            transform: u.select_rows(&lead),
            kernel,
        }
    }

    pub fn rank(&self) -> usize {
        self.echelon.rows()
    }

    /// Kernel basis vectors as rows, HNF-reduced.
    pub fn kernel_rows(&self) -> &IntMatrix {
        &self.kernel
    }

    /// The deterministic least solution: any integer solution reduced modulo
    /// the HNF kernel basis.
    pub fn solve(&self, b: &[BigInt]) -> Option<IntVector> {
        assert_eq!(b.len(), self.rows, "right-hand side has wrong length");
        let mut rest: IntVector = b.to_vec();
        let mut x = vec![BigInt::zero(); self.cols];
        for i in 0..self.echelon.rows() {
            let row = self.echelon.row(i);
            let p = pivot_col(row).expect("echelon row is nonzero");
            if rest[p].is_zero() {
                continue;
            }
            let (q, rem) = rest[p].div_rem(&row[p]);
            if !rem.is_zero() {
                return None;
            }
            for (t, e) in rest.iter_mut().zip(row) {
                if !e.is_zero() {
                    *t -= &q * e;
                }
            }
            for (xi, ui) in x.iter_mut().zip(self.transform.row(i)) {
                if !ui.is_zero() {
                    *xi += &q * ui;
                }
            }
        }
        if rest.iter().any(|t| !t.is_zero()) {
            return None;
        }
        reduce_mod_echelon(&mut x, &self.kernel);
        Some(x)
    }
}

/// Columns form the HNF-reduced basis of the integer kernel `{v : M·v = 0}`.
pub fn kernel_basis(m: &IntMatrix) -> IntMatrix {
    LinearSystem::new(m).kernel_rows().transpose()
}

/// HNF-least integer solution of `M·x = b`, if one exists.
pub fn solve(m: &IntMatrix, b: &[BigInt]) -> Option<IntVector> {
    LinearSystem::new(m).solve(b)
}

/// Inverse of a unimodular matrix, or `None` if `m` is not unimodular.
pub fn unimodular_inverse(m: &IntMatrix) -> Option<IntMatrix> {
    if m.rows() != m.cols() {
        return None;
    }
    let (h, u) = hnf(m);
    h.is_identity().then_some(u)
}

/// Exact determinant (Bareiss fraction-free elimination).
pub fn determinant(m: &IntMatrix) -> BigInt {
    assert_eq!(m.rows(), m.cols(), "determinant of a non-square matrix");
    bareiss_determinant(m)
}

/// Bareiss fraction-free determinant.
pub(crate) fn bareiss_determinant(m: &IntMatrix) -> BigInt {
    let n = m.rows();
    if n == 0 {
        return BigInt::one();
    }
    let mut a = m.clone();
    let mut sign = BigInt::one();
    let mut prev = BigInt::one();
    for k in 0..n - 1 {
        if a.get(k, k).is_zero() {
            match (k + 1..n).find(|&r| !a.get(r, k).is_zero()) {
                Some(r) => {
                    a.swap_rows(k, r);
                    sign = -sign;
                }
                None => return BigInt::zero(),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let val = (a.get(i, j) * a.get(k, k) - a.get(i, k) * a.get(k, j)) / &prev;
                a.set(i, j, val);
            }
        }
        prev = a.get(k, k).clone();
    }
    sign * a.get(n - 1, n - 1)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::intlinalg::matrix::ivec;

    fn m(rows: &[&[i64]]) -> IntMatrix {
        IntMatrix::from_rows(rows)
    }

    #[test]
    fn hnf_of_small_matrix() {
        let a = m(&[&[1, 2], &[3, 4]]);
        let (h, u) = hnf(&a);
        assert_eq!(h, m(&[&[1, 0], &[0, 2]]));
        assert_eq!(&u * &a, h);
        assert_eq!(bareiss_determinant(&u).magnitude(), &num_bigint::BigUint::from(1u32));
    }

    #[test]
    fn hnf_fixes_identity_and_zero() {
        let (h, u) = hnf(&IntMatrix::identity(3));
        assert!(h.is_identity() && u.is_identity());
        let z = m(&[&[0, 0]]);
        assert_eq!(hnf(&z).0, z);
    }

    #[test]
    fn snf_small_cases() {
        let s = snf(&IntMatrix::diagonal(&[2, 3]));
        assert_eq!(s.d, IntMatrix::diagonal(&[1, 6]));
        let s = snf(&m(&[&[2, 4], &[6, 8]]));
        assert_eq!(s.d, IntMatrix::diagonal(&[2, 4]));
        let s = snf(&IntMatrix::zeros(2, 2));
        assert!(s.d.is_zero() && s.u.is_identity() && s.v.is_identity());
        assert_eq!(s.rank, 0);
    }

    #[test]
    fn kernel_examples() {
        assert_eq!(kernel_basis(&m(&[&[2, -4]])), IntMatrix::from_rows(&[[2], [1]]));
        assert_eq!(kernel_basis(&IntMatrix::identity(2)).cols(), 0);
        let empty = IntMatrix::zeros(1, 0);
        let k = kernel_basis(&empty);
        assert_eq!((k.rows(), k.cols()), (0, 0));
    }

    #[test]
    fn solve_examples() {
        assert_eq!(solve(&m(&[&[2]]), &ivec(&[4])), Some(ivec(&[2])));
        assert_eq!(solve(&m(&[&[2]]), &ivec(&[3])), None);
        assert_eq!(solve(&m(&[&[1, 1]]), &ivec(&[0])), Some(ivec(&[0, 0])));
    }

    #[test]
    fn unimodular_inverse_roundtrip() {
        let a = m(&[&[2, 1], &[1, 1]]);
        let inv = unimodular_inverse(&a).unwrap();
        assert!((&a * &inv).is_identity());
        assert!(unimodular_inverse(&m(&[&[2, 0], &[0, 1]])).is_none());
    }
}
