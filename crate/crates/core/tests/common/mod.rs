//! Reference implementations used only by the tests. They share nothing with
//! the library beyond field arithmetic and are deliberately naive.
#![allow(dead_code)]

use std::collections::BTreeSet;
use std::sync::Arc;

use fqtnn::field::FieldSpec;
use fqtnn::grassmannian::{Filter, Subspace};
use fqtnn::matrix::MatrixFq;

/// Determinant by cofactor expansion along the first row.
pub fn det_cofactor(spec: &FieldSpec, m: &[Vec<u32>]) -> u32 {
    let k = m.len();
    match k {
        0 => 1,
        1 => m[0][0],
        _ => {
            let mut acc = 0;
            for j in 0..k {
                let minor: Vec<Vec<u32>> = m[1..]
                    .iter()
                    .map(|row| row.iter().enumerate().filter(|&(c, _)| c != j).map(|(_, &x)| x).collect())
                    .collect();
                let term = spec.mul(m[0][j], det_cofactor(spec, &minor));
                acc = if j % 2 == 0 { spec.add(acc, term) } else { spec.sub(acc, term) };
            }
            acc
        }
    }
}

/// All k-subsets of 0..n in lexicographic order.
pub fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    fn rec(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            cur.push(i);
            rec(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(0, n, k, &mut Vec::new(), &mut out);
    out
}

/// Determinant by plain Gaussian elimination on a scratch copy.
pub fn det_elim(spec: &FieldSpec, m: &mut [Vec<u32>]) -> u32 {
    let k = m.len();
    let mut det = 1;
    for c in 0..k {
        let Some(p) = (c..k).find(|&r| m[r][c] != 0) else {
            return 0;
        };
        if p != c {
            m.swap(p, c);
            det = spec.neg(det);
        }
        det = spec.mul(det, m[c][c]);
        let inv = spec.inv(m[c][c]).unwrap();
        for r in c + 1..k {
            let f = spec.mul(m[r][c], inv);
            if f != 0 {
                for j in c..k {
                    let t = spec.mul(f, m[c][j]);
                    m[r][j] = spec.sub(m[r][j], t);
                }
            }
        }
    }
    det
}

/// Maximal minors of a k x n matrix given as rows, lexicographic column sets.
pub fn minors(spec: &FieldSpec, rows: &[Vec<u32>], n: usize) -> Vec<u32> {
    minors_over(spec, rows, &subsets(n, rows.len()))
}

fn minors_over(spec: &FieldSpec, rows: &[Vec<u32>], sets: &[Vec<usize>]) -> Vec<u32> {
    let mut scratch: Vec<Vec<u32>> = vec![vec![0; rows.len()]; rows.len()];
    sets.iter()
        .map(|cols| {
            for (s, r) in scratch.iter_mut().zip(rows) {
                for (x, &c) in s.iter_mut().zip(cols) {
                    *x = r[c];
                }
            }
            det_elim(spec, &mut scratch)
        })
        .collect()
}

/// `squares[a]` is true when `a` is the square of some element.
pub fn square_table(spec: &FieldSpec) -> Vec<bool> {
    let mut t = vec![false; spec.order() as usize];
    for x in 0..spec.order() {
        t[spec.mul(x, x) as usize] = true;
    }
    t
}

/// Filter decision from a list of minors: some common scaling makes all
/// of them squares (TNN), or nonzero squares (TP).
pub fn passes(spec: &FieldSpec, minors: &[u32], filter: Filter) -> bool {
    passes_with(spec, &square_table(spec), minors, filter)
}

pub fn passes_with(spec: &FieldSpec, squares: &[bool], minors: &[u32], filter: Filter) -> bool {
    match filter {
        Filter::All => true,
        Filter::Tnn | Filter::Tp => {
            if filter == Filter::Tp && minors.contains(&0) {
                return false;
            }
            (1..spec.order()).any(|c| minors.iter().all(|&m| squares[spec.mul(c, m) as usize]))
        }
    }
}

/// Unpruned enumeration: every RREF matrix of every pivot set, filtered
/// afterwards. Returned as sorted code vectors.
pub fn unpruned(spec: &Arc<FieldSpec>, k: usize, n: usize, filter: Filter) -> Vec<Vec<u32>> {
    let [all, tnn, tp] = unpruned_all(spec, k, n);
    match filter {
        Filter::All => all,
        Filter::Tnn => tnn,
        Filter::Tp => tp,
    }
}

/// `[all, tnn, tp]` from one unpruned pass.
pub fn unpruned_all(spec: &Arc<FieldSpec>, k: usize, n: usize) -> [Vec<Vec<u32>>; 3] {
    let q = spec.order();
    let squares = square_table(spec);
    let sets = subsets(n, k);
    let mut out: [Vec<Vec<u32>>; 3] = Default::default();
    for pivots in &sets {
        let mut free = Vec::new();
        for (i, &p) in pivots.iter().enumerate() {
            for j in p + 1..n {
                if !pivots.contains(&j) {
                    free.push((i, j));
                }
            }
        }
        let total = (q as u64).pow(free.len() as u32);
        for mut idx in 0..total {
            let mut rows = vec![vec![0u32; n]; k];
            for (i, &p) in pivots.iter().enumerate() {
                rows[i][p] = 1;
            }
            for &(i, j) in &free {
                rows[i][j] = (idx % q as u64) as u32;
                idx /= q as u64;
            }
            let ms = minors_over(spec, &rows, &sets);
            let codes = rows.concat();
            if passes_with(spec, &squares, &ms, Filter::Tp) {
                out[2].push(codes.clone());
            }
            if passes_with(spec, &squares, &ms, Filter::Tnn) {
                out[1].push(codes.clone());
            }
            out[0].push(codes);
        }
    }
    for v in &mut out {
        v.sort();
    }
    out
}

/// Library enumeration as sorted code vectors.
pub fn pruned(spec: &Arc<FieldSpec>, k: usize, n: usize, filter: Filter) -> Vec<Vec<u32>> {
    let mut v: Vec<Vec<u32>> = fqtnn::grassmannian::enumerate(k, n, spec, filter)
        .unwrap()
        .iter()
        .map(|s| s.matrix().codes().to_vec())
        .collect();
    v.sort();
    v
}

/// Subspaces as explicit vector sets: span every k-tuple of vectors of
/// F_q^n and keep the distinct k-dimensional ones. Tiny cases only.
pub fn spans_by_vector_sets(spec: &FieldSpec, k: usize, n: usize) -> BTreeSet<BTreeSet<Vec<u32>>> {
    let q = spec.order() as u64;
    let vectors: Vec<Vec<u32>> = (0..q.pow(n as u32))
        .map(|mut x| {
            (0..n)
                .map(|_| {
                    let d = (x % q) as u32;
                    x /= q;
                    d
                })
                .collect()
        })
        .collect();
    let mut found = BTreeSet::new();
    let target = q.pow(k as u32) as usize;
    let mut stack = vec![(0usize, Vec::<Vec<u32>>::new())];
    while let Some((start, basis)) = stack.pop() {
        if basis.len() == k {
            let span = span_of(spec, &basis, n);
            if span.len() == target {
                found.insert(span);
            }
            continue;
        }
        for i in start..vectors.len() {
            let mut b = basis.clone();
            b.push(vectors[i].clone());
            stack.push((i + 1, b));
        }
    }
    found
}

pub fn span_of(spec: &FieldSpec, basis: &[Vec<u32>], n: usize) -> BTreeSet<Vec<u32>> {
    let q = spec.order() as u64;
    let k = basis.len();
    (0..q.pow(k as u32))
        .map(|mut x| {
            let mut v = vec![0u32; n];
            for b in basis {
                let c = (x % q) as u32;
                x /= q;
                for (vi, &bi) in v.iter_mut().zip(b) {
                    *vi = spec.add(*vi, spec.mul(c, bi));
                }
            }
            v
        })
        .collect()
}

pub fn subspace(spec: &Arc<FieldSpec>, rows: &[Vec<i64>]) -> Subspace {
    Subspace::from_ints(spec, rows).unwrap()
}

pub fn matrix(spec: &Arc<FieldSpec>, rows: &[Vec<i64>]) -> MatrixFq {
    MatrixFq::from_ints(spec, rows).unwrap()
}

/// Prime powers `(p, r)` with `p^r <= max_q`.
pub fn prime_powers(max_q: u32) -> Vec<(u32, u32)> {
    let mut out = Vec::new();
    for p in 2..=max_q {
        if (2..p).any(|d| p % d == 0) {
            continue;
        }
        let mut q = p;
        let mut r = 1;
        while q <= max_q {
            out.push((p, r));
            q *= p;
            r += 1;
        }
    }
    out.sort_by_key(|&(p, r)| p.pow(r));
    out
}
