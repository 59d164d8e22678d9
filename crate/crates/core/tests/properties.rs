mod common;

use std::sync::Arc;

use proptest::prelude::*;

use fqtnn::field::{FieldSpec, Sign};
use fqtnn::grassmannian::{enumerate, Filter, SubfieldLift, Subspace};
use fqtnn::matrix::MatrixFq;
use fqtnn::structures::{cyclic_shift, cyclic_shift_order, dual_matroid, matroid_of, sign_variation};

const FIELDS: [(u32, u32); 7] = [(2, 1), (3, 1), (5, 1), (7, 1), (2, 2), (3, 2), (13, 1)];

fn field(i: usize) -> Arc<FieldSpec> {
    let (p, r) = FIELDS[i % FIELDS.len()];
    FieldSpec::new(p, r).unwrap()
}

prop_compose! {
    /// A full-rank k x n matrix over one of the test fields.
    fn full_rank()(f in 0..FIELDS.len(), n in 1usize..7)
        (f in Just(f), n in Just(n), k in 0..=n, seed in prop::collection::vec(any::<u32>(), 49))
        -> MatrixFq
    {
        let spec = field(f);
        let q = spec.order();
        let mut codes: Vec<u32> = seed.iter().take(k * n).map(|x| x % q).collect();
        let mut m = MatrixFq::from_codes(&spec, k, n, codes.clone()).unwrap();
        // fall back to a shifted identity block so the rank is always k
        if m.rank() < k {
            for i in 0..k {
                codes[i * n + i] = spec.add(codes[i * n + i], 1);
                for j in 0..i {
                    codes[i * n + j] = 0;
                }
            }
            m = MatrixFq::from_codes(&spec, k, n, codes).unwrap();
        }
        m
    }
}

fn invertible(spec: &Arc<FieldSpec>, k: usize, seed: &[u32]) -> MatrixFq {
    let q = spec.order();
    let codes: Vec<u32> = seed.iter().cycle().take(k * k).map(|x| x % q).collect();
    let g = MatrixFq::from_codes(spec, k, k, codes).unwrap();
    if g.rank() == k {
        g
    } else {
        MatrixFq::identity(spec, k)
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn canonical_form_is_a_class_invariant(m in full_rank(), seed in prop::collection::vec(any::<u32>(), 1..20)) {
        prop_assume!(m.rank() == m.rows());
        let g = invertible(m.spec(), m.rows(), &seed);
        let a = Subspace::canonicalize(&m).unwrap();
        let b = Subspace::canonicalize(&g.mul(&m).unwrap()).unwrap();
        prop_assert_eq!(&a, &b);
        prop_assert!(a.matrix().is_rref());
    }

    #[test]
    fn null_space_is_orthogonal_and_complementary(m in full_rank()) {
        prop_assume!(m.rank() == m.rows());
        let ns = m.null_space_basis().unwrap();
        prop_assert_eq!(ns.rows(), m.cols() - m.rows());
        if ns.rows() > 0 && m.rows() > 0 {
            let prod = m.mul(&ns.transpose()).unwrap();
            prop_assert!(prod.codes().iter().all(|&c| c == 0));
        }
        let v = Subspace::canonicalize(&m).unwrap();
        let back = Subspace::canonicalize(&ns.null_space_basis().unwrap()).unwrap();
        prop_assert_eq!(v, back);
    }

    #[test]
    fn alt_is_an_involution(m in full_rank()) {
        prop_assert_eq!(m.alt_rows().alt_rows(), m);
    }

    #[test]
    fn dual_is_an_involution_and_preserves_tnn(m in full_rank()) {
        prop_assume!(m.rank() == m.rows());
        let v = Subspace::canonicalize(&m).unwrap();
        let d = v.dual();
        prop_assert_eq!(d.k(), v.n() - v.k());
        prop_assert_eq!(d.dual(), v.clone());
        prop_assert_eq!(d.is_tnn(), v.is_tnn());
        prop_assert_eq!(d.is_tp(), v.is_tp());
        prop_assert_eq!(matroid_of(&d), dual_matroid(&matroid_of(&v)));
    }

    #[test]
    fn cyclic_shift_order_divides_n(m in full_rank()) {
        prop_assume!(m.rank() == m.rows() && m.cols() > 0);
        let v = Subspace::canonicalize(&m).unwrap();
        let t = cyclic_shift_order(&v);
        prop_assert_eq!(v.n() % t, 0);
        prop_assert_eq!(cyclic_shift(&v).is_tnn(), v.is_tnn());
    }

    #[test]
    fn sign_is_multiplicative(f in 0..FIELDS.len(), a in any::<u32>(), b in any::<u32>()) {
        let spec = field(f);
        let (a, b) = (a % spec.order(), b % spec.order());
        let expected = match (spec.sign(a), spec.sign(b)) {
            (Sign::Zero, _) | (_, Sign::Zero) => Sign::Zero,
            (x, y) if x == y => Sign::Positive,
            _ => Sign::Negative,
        };
        prop_assert_eq!(spec.sign(spec.mul(a, b)), expected);
        prop_assert_eq!(spec.sign(a), spec.sign_by_euler(a));
    }

    #[test]
    fn sign_variation_ignores_positive_scaling(
        f in 0..FIELDS.len(),
        v in prop::collection::vec(any::<u32>(), 0..7),
        c in any::<u32>(),
    ) {
        let spec = field(f);
        let v: Vec<u32> = v.iter().map(|x| x % spec.order()).collect();
        let positives = spec.positives();
        let c = positives[c as usize % positives.len()];
        let scaled: Vec<u32> = v.iter().map(|&x| spec.mul(c, x)).collect();
        prop_assert_eq!(sign_variation(&spec, &scaled), sign_variation(&spec, &v));
    }

    #[test]
    fn embedding_is_a_ring_homomorphism(pair in 0usize..3, a in any::<u32>(), b in any::<u32>()) {
        let (src, dst) = [((3, 1), (3, 2)), ((5, 1), (5, 2)), ((3, 2), (3, 4))][pair];
        let s = FieldSpec::new(src.0, src.1).unwrap();
        let t = FieldSpec::new(dst.0, dst.1).unwrap();
        let e = s.embedding_into(&t).unwrap();
        let (a, b) = (a % s.order(), b % s.order());
        prop_assert_eq!(e[s.add(a, b) as usize], t.add(e[a as usize], e[b as usize]));
        prop_assert_eq!(e[s.mul(a, b) as usize], t.mul(e[a as usize], e[b as usize]));
        // an even-degree extension makes every subfield element a square
        prop_assert!(t.sign(e[a as usize]).is_nonnegative());
    }
}

#[test]
fn cyclic_shift_preserves_tnn_exhaustively() {
    for (p, k, n) in [(3, 2, 4), (5, 2, 4), (13, 1, 6)] {
        let spec = FieldSpec::new(p, 1).unwrap();
        for v in enumerate(k, n, &spec, Filter::Tnn).unwrap() {
            assert!(cyclic_shift(&v).is_tnn(), "F_{p} {v:?}");
        }
    }
}

#[test]
fn lifted_matroids_are_positroids() {
    let f3 = FieldSpec::new(3, 1).unwrap();
    let f9 = FieldSpec::new(3, 2).unwrap();
    let lift = SubfieldLift::new(&f3, &f9).unwrap();
    let all = enumerate(2, 4, &f3, Filter::All).unwrap();
    assert_eq!(all.len(), 130);
    for v in &all {
        let w = lift.lift(v);
        assert!(w.is_tnn());
        assert_eq!(matroid_of(&w), matroid_of(v));
    }
}
