//! Seeded generators of groups, homomorphisms, complexes, chain maps and
//! lifting squares. Every case draws from its own ChaCha stream derived
//! from `(seed, stream)`, so cases are independent and reproducible.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::Zero;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::abelian::{FgAbGroup, GroupHom};
use crate::complexes::{ChainComplex, ChainMap};
use crate::error::Result;
use crate::factor::{build_w, build_x};
use crate::intlinalg::{IntMatrix, IntVector};
use crate::lifting::LiftProblem;

pub fn case_rng(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

/// Size limits for generated objects.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct GenConfig {
    pub lo: i32,
    pub hi: i32,
    pub max_order: u64,
    pub max_rank: usize,
    /// Longest support of a generated complex.
    pub max_len: usize,
}

impl Default for GenConfig {
    fn default() -> Self {
        GenConfig { lo: -3, hi: 4, max_order: 16, max_rank: 4, max_len: 3 }
    }
}

pub struct Gen {
    pub rng: ChaCha8Rng,
    pub cfg: GenConfig,
}

impl Gen {
    pub fn new(seed: u64, stream: u64, cfg: GenConfig) -> Self {
        Gen { rng: case_rng(seed, stream), cfg }
    }

    pub fn int(&mut self, bound: i64) -> BigInt {
        BigInt::from(self.rng.gen_range(-bound..=bound))
    }

    pub fn matrix(&mut self, rows: usize, cols: usize, bound: i64) -> IntMatrix {
        let data = (0..rows * cols).map(|_| self.int(bound)).collect();
        IntMatrix::from_vec(rows, cols, data)
    }

    /// A product of a few random elementary matrices.
    pub fn unimodular(&mut self, n: usize) -> IntMatrix {
        let mut m = IntMatrix::identity(n);
        if n < 2 {
            return m;
        }
        for _ in 0..n + 1 {
            let a = self.rng.gen_range(0..n);
            let b = (a + self.rng.gen_range(1..n)) % n;
            let k = BigInt::from(self.rng.gen_range(-2i64..=2));
            m.add_row_multiple(a, b, &k);
        }
        m
    }

    /// Cyclic orders `≥ 2` with product at most `max_order`.
    fn orders(&mut self, max_order: u64) -> Vec<u64> {
        let mut out = Vec::new();
        let mut room = max_order;
        let k = self.rng.gen_range(0..=2);
        for _ in 0..k {
            if room < 2 {
                break;
            }
            let d = self.rng.gen_range(2..=room.min(9));
            out.push(d);
            room /= d;
        }
        out
    }

    /// A finite group `⊕ Z/d_i` with a scrambled presentation, possibly with a redundant generator.
    pub fn finite_group(&mut self) -> FgAbGroup {
        let orders = self.orders(self.cfg.max_order);
        let mut diag: Vec<i64> = orders.iter().map(|&d| d as i64).collect();
        if self.rng.gen_bool(0.3) {
            diag.push(1);
        }
        self.scrambled(&diag, 0)
    }

    /// `Z^r`, sometimes presented with one extra generator and relation.
    pub fn free_group(&mut self) -> FgAbGroup {
        let r = self.rng.gen_range(0..=self.cfg.max_rank.min(3));
        if self.rng.gen_bool(0.25) {
            self.scrambled(&[1], r)
        } else {
            FgAbGroup::free(r)
        }
    }

    /// `Z^n / colspan(P · D)` where `D` has the given diagonal followed by `free` zero columns.
    fn scrambled(&mut self, diag: &[i64], free: usize) -> FgAbGroup {
        let n = diag.len() + free;
        let p = self.unimodular(n);
        let mut d = IntMatrix::zeros(n, diag.len());
        for (i, &x) in diag.iter().enumerate() {
            d.set(i, i, x.into());
        }
        FgAbGroup::new(n, &p * &d).expect("square presentation")
    }

    /// A random well-defined homomorphism, built in Smith coordinates.
    pub fn hom(&mut self, src: &FgAbGroup, dst: &FgAbGroup) -> GroupHom {
        let ss = src.smith_coordinates();
        let ds = dst.smith_coordinates();
        let k = ds.orders.len();
        let mut images = Vec::with_capacity(ss.orders.len());
        for d in &ss.orders {
            // an element killed by d (any element when d = 0)
            let y: IntVector = ds
                .orders
                .iter()
                .map(|e| {
                    let c = self.int(3);
                    match (d.is_zero(), e.is_zero()) {
                        (true, _) => c,
                        (false, true) => BigInt::zero(),
                        (false, false) => c * (e / e.gcd(d)),
                    }
                })
                .collect();
            images.push(&ds.from_smith * &IntMatrix::from_columns(k, &[y]));
        }
        let cols: Vec<IntVector> = images.iter().map(|m| m.column(0)).collect();
        let y = IntMatrix::from_columns(dst.ngens(), &cols);
        let m = &y * &ss.to_smith;
        GroupHom::new(src, dst, m).expect("Smith-coordinate construction is well defined")
    }

    fn window(&mut self) -> (i32, i32) {
        let len = self.rng.gen_range(1..=self.cfg.max_len as i32);
        let span = (self.cfg.hi - self.cfg.lo + 1).max(1);
        let len = len.min(span);
        let lo = self.rng.gen_range(self.cfg.lo..=self.cfg.hi - len + 1);
        (lo, lo + len - 1)
    }

    fn complex_with(&mut self, mut group: impl FnMut(&mut Self) -> FgAbGroup) -> ChainComplex {
        let (lo, hi) = self.window();
        let groups: Vec<FgAbGroup> = (lo..=hi).map(|_| group(self)).collect();
        let mut diffs: Vec<IntMatrix> = Vec::new();
        let mut prev: Option<GroupHom> = None;
        for k in 1..groups.len() {
            let (src, dst) = (&groups[k], &groups[k - 1]);
            let d = match &prev {
                // land in the kernel of the previous differential
                Some(p) => {
                    let (kg, incl) = p.kernel();
                    if self.rng.gen_bool(0.15) {
                        GroupHom::zero(src, dst)
                    } else {
                        incl.compose(&self.hom(src, &kg))
                    }
                }
                None => self.hom(src, dst),
            };
            diffs.push(d.matrix().clone());
            prev = Some(d);
        }
        ChainComplex::new(lo, groups, diffs).expect("differentials land in cycles")
    }

    pub fn finite_complex(&mut self) -> ChainComplex {
        self.complex_with(Self::finite_group)
    }

    pub fn free_complex(&mut self) -> ChainComplex {
        self.complex_with(Self::free_group)
    }

    /// Any bounded complex of finitely generated groups.
    pub fn mixed_complex(&mut self) -> ChainComplex {
        self.complex_with(|g| if g.rng.gen_bool(0.5) { g.finite_group() } else { g.free_group() })
    }

    /// A contractible degreewise-free complex: a sum of disks with scrambled bases.
    pub fn contractible_free_complex(&mut self) -> ChainComplex {
        let (lo, hi) = self.window();
        let mut parts = Vec::new();
        for n in lo..hi.max(lo + 1) {
            let r = self.rng.gen_range(0..=2);
            if r > 0 {
                parts.push(ChainComplex::disk(n, &FgAbGroup::free(r)));
            }
        }
        let c = ChainComplex::direct_sum(&parts.iter().collect::<Vec<_>>()).complex;
        self.rebased(&c)
    }

    /// An acyclic complex of finite groups: a sum of disks on random finite groups.
    pub fn acyclic_finite_complex(&mut self) -> ChainComplex {
        let (lo, hi) = self.window();
        let mut parts = Vec::new();
        for n in lo..hi.max(lo + 1) {
            if self.rng.gen_bool(0.7) {
                let m = self.finite_group();
                parts.push(ChainComplex::disk(n, &m));
            }
        }
        ChainComplex::direct_sum(&parts.iter().collect::<Vec<_>>()).complex
    }

    /// The same free complex after a random change of basis in every degree.
    pub fn rebased(&mut self, c: &ChainComplex) -> ChainComplex {
        let Some((lo, hi)) = c.support() else { return c.clone() };
        if !c.is_degreewise_free() || (lo..=hi).any(|n| c.group(n).relations().cols() > 0) {
            return c.clone();
        }
        let p: Vec<IntMatrix> = (lo..=hi).map(|n| self.unimodular(c.ngens(n))).collect();
        let pinv: Vec<IntMatrix> =
            p.iter().map(|m| crate::intlinalg::unimodular_inverse(m).expect("unimodular")).collect();
        let groups = (lo..=hi).map(|n| c.group(n)).collect();
        let diffs = (lo + 1..=hi)
            .map(|n| &(&p[(n - 1 - lo) as usize] * c.diff(n).matrix()) * &pinv[(n - lo) as usize])
            .collect();
        ChainComplex::new(lo, groups, diffs).expect("conjugate of a complex")
    }

    /// A random chain map: a sum of maps through `A_n/dA_{n+1} → Z_nB` in
    /// single degrees plus a nullhomotopic `dh + hd`.
    pub fn chain_map(&mut self, a: &ChainComplex, b: &ChainComplex) -> ChainMap {
        let mut f = ChainMap::zero(a, b);
        let Some((lo, hi)) = a.support() else { return f };
        for n in lo..=hi {
            if b.ngens(n) == 0 || self.rng.gen_bool(0.3) {
                continue;
            }
            let (coker, _) = a.diff(n + 1).cokernel();
            let (cyc, incl) = b.diff(n).kernel();
            let h = self.hom(&coker, &cyc);
            let m = incl.matrix() * h.matrix();
            let piece = ChainMap::from_fn(a, b, |k| {
                if k == n {
                    m.clone()
                } else {
                    IntMatrix::zeros(b.ngens(k), a.ngens(k))
                }
            })
            .expect("single-degree map through cycles");
            f = f.add(&piece);
        }
        if self.rng.gen_bool(0.6) {
            f = f.add(&self.nullhomotopic(a, b));
        }
        f
    }

    /// `dh + hd` for a random graded map `h` of degree one.
    pub fn nullhomotopic(&mut self, a: &ChainComplex, b: &ChainComplex) -> ChainMap {
        let Some((lo, hi)) = a.support() else { return ChainMap::zero(a, b) };
        let h: Vec<GroupHom> = (lo - 1..=hi).map(|n| self.hom(&a.group(n), &b.group(n + 1))).collect();
        let hn = |n: i32| -> IntMatrix {
            if n < lo - 1 || n > hi {
                IntMatrix::zeros(b.ngens(n + 1), a.ngens(n))
            } else {
                h[(n - lo + 1) as usize].matrix().clone()
            }
        };
        ChainMap::from_fn(a, b, |n| &(b.diff(n + 1).matrix() * &hn(n)) + &(&hn(n - 1) * a.diff(n).matrix()))
            .expect("dh + hd is a chain map")
    }

    /// A surjection `L → M`: either the projection off an extra summand or
    /// the right map of `W(f)`.
    pub fn fibration(&mut self) -> ChainMap {
        if self.rng.gen_bool(0.5) {
            let m = self.finite_complex();
            let k = self.finite_complex();
            ChainComplex::direct_sum(&[&m, &k]).projections[0].clone()
        } else {
            let a = self.finite_complex();
            let b = self.finite_complex();
            let f = self.chain_map(&a, &b);
            build_w(&f).expect("finite target").right
        }
    }

    /// A surjection with acyclic kernel.
    pub fn acyclic_fibration(&mut self) -> ChainMap {
        match self.rng.gen_range(0..3) {
            0 => {
                let m = self.finite_complex();
                let k = self.acyclic_finite_complex();
                ChainComplex::direct_sum(&[&m, &k]).projections[0].clone()
            }
            1 => {
                let b = self.finite_complex();
                crate::factor::build_gamma(&b).expect("finite").p
            }
            _ => {
                let a = self.finite_complex();
                let b = self.finite_complex();
                let f = self.chain_map(&a, &b);
                build_x(&f).expect("finite").right
            }
        }
    }

    /// A cofibration: the inclusion of `A` into the mapping cone
    /// `A_n ⊕ F_{n−1}`, `d = [[d, φ], [0, −d]]`, of a map `φ: F → A` from a free complex.
    pub fn cofibration_from(&mut self, a: &ChainComplex) -> ChainMap {
        let f0 = self.free_complex();
        let phi = self.chain_map(&f0, a);
        let window = crate::complexes::union_window(a.support(), f0.support().map(|(l, h)| (l + 1, h + 1)));
        let Some((lo, hi)) = window else { return ChainMap::identity(a) };
        let groups: Vec<FgAbGroup> =
            (lo..=hi).map(|n| FgAbGroup::direct_sum(&[&a.group(n), &f0.group(n - 1)])).collect();
        let cone = ChainComplex::from_parts(lo, groups, |n| {
            let (an, fn1) = (a.ngens(n), f0.ngens(n - 1));
            let (am, fm) = (a.ngens(n - 1), f0.ngens(n - 2));
            let mut d = IntMatrix::zeros(am + fm, an + fn1);
            d.set_block(0, 0, a.diff(n).matrix());
            d.set_block(0, an, phi.component(n - 1).matrix());
            d.set_block(am, an, &f0.diff(n - 1).matrix().scaled(&BigInt::from(-1)));
            d
        })
        .expect("mapping cone is a complex");
        ChainMap::from_fn(a, &cone, |n| {
            IntMatrix::vstack(a.ngens(n), &[&IntMatrix::identity(a.ngens(n)), &IntMatrix::zeros(f0.ngens(n - 1), a.ngens(n))])
        })
        .expect("inclusion into the cone")
    }

    /// `(i: A → B, f: A → L, g: B → M, q: L → M)` with `i` a cofibration and `q`
    /// an acyclic fibration: `f = u i`, `g = q u + v π`.
    pub fn square_cof_vs_acyclic_fib(&mut self) -> Result<LiftProblem> {
        let a = self.finite_complex();
        let b0 = self.finite_complex();
        let f0 = self.chain_map(&a, &b0);
        let i = build_x(&f0)?.left;
        let q = self.acyclic_fibration();
        self.square_from(i, q)
    }

    /// Same shape with `i` an acyclic cofibration and `q` a fibration.
    pub fn square_acyclic_cof_vs_fib(&mut self) -> Result<LiftProblem> {
        let a = self.finite_complex();
        let b0 = self.finite_complex();
        let f0 = self.chain_map(&a, &b0);
        let i = build_w(&f0)?.left;
        let q = self.fibration();
        self.square_from(i, q)
    }

    fn square_from(&mut self, i: ChainMap, q: ChainMap) -> Result<LiftProblem> {
        let u = self.chain_map(i.dst(), q.src());
        let (c, pi) = i.cokernel();
        let v = self.chain_map(&c, q.dst());
        let f = u.compose(&i);
        let g = q.compose(&u).add(&v.compose(&pi));
        LiftProblem::new(i, q, f, g)
    }
}

/// A matrix with entries in `[−bound, bound]` and dimensions at most `max_dim`.
pub fn random_matrix(rng: &mut ChaCha8Rng, max_dim: usize, bound: i64) -> IntMatrix {
    let rows = rng.gen_range(0..=max_dim);
    let cols = rng.gen_range(0..=max_dim);
    let data = (0..rows * cols).map(|_| BigInt::from(rng.gen_range(-bound..=bound))).collect();
    IntMatrix::from_vec(rows, cols, data)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn generators_are_deterministic() {
        let cfg = GenConfig::default();
        let mut a = Gen::new(7, 3, cfg);
        let mut b = Gen::new(7, 3, cfg);
        assert_eq!(a.finite_complex(), b.finite_complex());
        let mut c = Gen::new(7, 4, cfg);
        let _ = c.finite_complex();
    }

    #[test]
    fn generated_objects_are_valid() {
        let cfg = GenConfig { max_order: 8, ..GenConfig::default() };
        for case in 0..20 {
            let mut g = Gen::new(1, case, cfg);
            let grp = g.finite_group();
            assert!(grp.is_finite());
            assert!(grp.order().unwrap() <= BigInt::from(8));
            let c = g.finite_complex();
            let d = g.finite_complex();
            let f = g.chain_map(&c, &d);
            assert_eq!(f.src(), &c);
            let k = g.contractible_free_complex();
            assert!(k.is_acyclic() && k.is_degreewise_free());
            assert!(g.acyclic_fibration().is_surjective());
            assert!(g.fibration().is_surjective());
        }
    }

    #[test]
    fn squares_commute() {
        let cfg = GenConfig { max_order: 4, max_len: 2, ..GenConfig::default() };
        for case in 0..4 {
            let mut g = Gen::new(2, case, cfg);
            g.square_cof_vs_acyclic_fib().unwrap();
            g.square_acyclic_cof_vs_fib().unwrap();
        }
    }
}
