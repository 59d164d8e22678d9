mod common;

use std::collections::BTreeSet;

use num_bigint::BigUint;
use rand::{rngs::StdRng, Rng, SeedableRng};

use common::*;
use fqtnn::closed_forms::{k1_nonneg, k1_pos};
use fqtnn::field::FieldSpec;
use fqtnn::grassmannian::{count, gaussian_binomial, Filter};
use fqtnn::matrix::{IndexSet, MatrixFq};

#[test]
fn pruned_matches_unpruned_on_small_cases() {
    for (p, r) in prime_powers(9) {
        let spec = FieldSpec::new(p, r).unwrap();
        let q = spec.order() as u64;
        for n in 0..=6 {
            for k in 0..=n {
                let space = q.pow((k * (n - k)) as u32) * common::subsets(n, k).len() as u64;
                if space > 20_000 {
                    continue;
                }
                for filter in [Filter::All, Filter::Tnn, Filter::Tp] {
                    assert_eq!(
                        pruned(&spec, k, n, filter),
                        unpruned(&spec, k, n, filter),
                        "q={q} k={k} n={n} {filter}"
                    );
                }
            }
        }
    }
}

#[test]
fn minors_match_cofactor_expansion() {
    let mut rng = StdRng::seed_from_u64(7);
    for (p, r) in [(3, 1), (5, 1), (2, 3), (3, 2), (13, 1)] {
        let spec = FieldSpec::new(p, r).unwrap();
        for _ in 0..50 {
            let k = rng.gen_range(1..=4);
            let n = rng.gen_range(k..=6);
            let rows: Vec<Vec<u32>> = (0..k)
                .map(|_| (0..n).map(|_| rng.gen_range(0..spec.order())).collect())
                .collect();
            let m = MatrixFq::from_codes(&spec, k, n, rows.concat()).unwrap();
            let lib: Vec<u32> = common::subsets(n, k)
                .iter()
                .map(|cols| {
                    let set = IndexSet::new(cols.iter().map(|c| c + 1).collect(), n).unwrap();
                    m.minor(&set).unwrap()
                })
                .collect();
            let cofactor: Vec<u32> = common::subsets(n, k)
                .iter()
                .map(|cols| {
                    let sub: Vec<Vec<u32>> = rows.iter().map(|r| cols.iter().map(|&c| r[c]).collect()).collect();
                    det_cofactor(&spec, &sub)
                })
                .collect();
            assert_eq!(lib, cofactor);
            assert_eq!(lib, minors(&spec, &rows, n));
        }
    }
}

#[test]
fn subspaces_as_vector_sets() {
    for (p, r, k, n) in [(3, 1, 2, 4), (2, 2, 2, 3), (2, 1, 3, 5), (5, 1, 1, 3), (5, 1, 2, 4)] {
        let spec = FieldSpec::new(p, r).unwrap();
        let spans = spans_by_vector_sets(&spec, k, n);
        let q = spec.order() as u64;
        assert_eq!(BigUint::from(spans.len()), gaussian_binomial(n, k, q));

        // every enumerated subspace has a distinct span that is one of these
        let lib = fqtnn::grassmannian::enumerate(k, n, &spec, Filter::All).unwrap();
        let lib_spans: BTreeSet<_> = lib.iter().map(|v| span_of(&spec, &v.matrix().to_rows(), n)).collect();
        assert_eq!(lib_spans, spans);

        // TNN membership decided from an arbitrary basis of each span
        let mut tnn = 0usize;
        for span in &spans {
            let basis = any_basis(&spec, span, k, n);
            if passes(&spec, &minors(&spec, &basis, n), Filter::Tnn) {
                tnn += 1;
            }
        }
        assert_eq!(BigUint::from(tnn), count(k, n, &spec, Filter::Tnn).unwrap(), "q={q} k={k} n={n}");
    }
}

/// Greedy basis: the first vectors (in set order) that enlarge the span.
fn any_basis(spec: &FieldSpec, span: &BTreeSet<Vec<u32>>, k: usize, n: usize) -> Vec<Vec<u32>> {
    let mut basis: Vec<Vec<u32>> = Vec::new();
    for v in span.iter().rev() {
        let mut b = basis.clone();
        b.push(v.clone());
        if span_of(spec, &b, n).len() == (spec.order() as usize).pow(b.len() as u32) {
            basis = b;
        }
        if basis.len() == k {
            break;
        }
    }
    basis
}

#[test]
fn gaussian_binomial_matches_product_formula() {
    for q in [2u128, 3, 4, 5, 7, 9] {
        for n in 0..=8u32 {
            for k in 0..=n {
                let mut num = 1u128;
                let mut den = 1u128;
                for i in 0..k {
                    num *= q.pow(n - i) - 1;
                    den *= q.pow(i + 1) - 1;
                }
                assert_eq!(
                    gaussian_binomial(n as usize, k as usize, q as u64),
                    BigUint::from(num / den)
                );
            }
        }
    }
}

#[test]
fn k1_formulas_match_direct_point_count() {
    for p in [3u32, 5, 7, 11] {
        let spec = FieldSpec::new(p, 1).unwrap();
        let q = p as u64;
        for n in 1..=4usize {
            // count lines through nonzero vectors, each line has q-1 vectors
            let mut nonneg = 0u64;
            let mut pos = 0u64;
            for x in 1..q.pow(n as u32) {
                let v: Vec<u32> = (0..n).map(|i| ((x / q.pow(i as u32)) % q) as u32).collect();
                if passes(&spec, &v, Filter::Tnn) {
                    nonneg += 1;
                }
                if passes(&spec, &v, Filter::Tp) {
                    pos += 1;
                }
            }
            assert_eq!(k1_nonneg(q, n).unwrap(), (nonneg / (q - 1)).into());
            assert_eq!(k1_pos(q, n).unwrap(), (pos / (q - 1)).into());
        }
    }
}
