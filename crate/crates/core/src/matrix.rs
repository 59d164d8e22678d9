//! Dense matrices over a [`FieldSpec`]: row reduction, maximal minors,
//! null spaces and the alternating column-sign transform.

use std::cmp::Ordering;
use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};
use serde_json::{json, Value};
use thiserror::Error;

use crate::field::{FieldDescriptor, FieldError, FieldSpec};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum MatrixError {
    #[error("matrix has rank {rank}, expected full rank {expected}")]
    RankDeficient { rank: usize, expected: usize },
    #[error("index set has {got} elements, expected {expected}")]
    IndexSetSize { got: usize, expected: usize },
    #[error("invalid index set {0:?}: must be strictly increasing within 1..={1}")]
    InvalidIndexSet(Vec<usize>, usize),
    #[error("shape mismatch: {0}")]
    Shape(String),
    #[error("malformed matrix JSON: {0}")]
    Json(String),
    #[error(transparent)]
    Field(#[from] FieldError),
}

/// A sorted subset of `{1, .., n}`, ordered colexicographically.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct IndexSet(Vec<usize>);

impl IndexSet {
    pub fn new(elems: Vec<usize>, n: usize) -> Result<Self, MatrixError> {
        let ok = elems.windows(2).all(|w| w[0] < w[1]) && elems.iter().all(|&e| e >= 1 && e <= n);
        if ok {
            Ok(IndexSet(elems))
        } else {
            Err(MatrixError::InvalidIndexSet(elems, n))
        }
    }

    /// From a column bitmask (bit `j` is column `j + 1`).
    pub fn from_mask(mask: u64) -> Self {
        IndexSet((0..64).filter(|b| mask >> b & 1 == 1).map(|b| b + 1).collect())
    }

    pub fn mask(&self) -> u64 {
        self.0.iter().fold(0, |m, &e| m | 1 << (e - 1))
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn as_slice(&self) -> &[usize] {
        &self.0
    }

    pub fn contains(&self, e: usize) -> bool {
        self.0.binary_search(&e).is_ok()
    }

    pub fn complement(&self, n: usize) -> IndexSet {
        IndexSet((1..=n).filter(|e| !self.contains(*e)).collect())
    }

    /// Zero-based column positions.
    pub fn columns(&self) -> impl Iterator<Item = usize> + '_ {
        self.0.iter().map(|e| e - 1)
    }
}

impl Ord for IndexSet {
    fn cmp(&self, other: &Self) -> Ordering {
        self.0.iter().rev().cmp(other.0.iter().rev())
    }
}

impl PartialOrd for IndexSet {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for IndexSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(|e| e.to_string()).collect();
        write!(f, "{{{}}}", parts.join(","))
    }
}

/// Bitmasks of all `k`-subsets of `n` columns in colex order (Gosper's hack).
pub fn subset_masks(n: usize, k: usize) -> Vec<u64> {
    assert!(n < 64, "at most 63 columns");
    if k > n {
        return Vec::new();
    }
    if k == 0 {
        return vec![0];
    }
    let mut out = Vec::new();
    let mut m: u64 = (1 << k) - 1;
    let limit = 1u64 << n;
    while m < limit {
        out.push(m);
        let c = m & m.wrapping_neg();
        let r = m + c;
        m = (((r ^ m) >> 2) / c) | r;
    }
    out
}

/// All `k`-subsets of `[n]` in colex order.
pub fn k_subsets(n: usize, k: usize) -> Vec<IndexSet> {
    subset_masks(n, k).into_iter().map(IndexSet::from_mask).collect()
}

/// Determinant of a square matrix given row-major as codes; consumes the buffer.
pub(crate) fn det_in_place(spec: &FieldSpec, a: &mut [u32], k: usize) -> u32 {
    let mut det = 1u32;
    for col in 0..k {
        let Some(piv) = (col..k).find(|&r| a[r * k + col] != 0) else {
            return 0;
        };
        if piv != col {
            for j in 0..k {
                a.swap(piv * k + j, col * k + j);
            }
            det = spec.neg(det);
        }
        let pv = a[col * k + col];
        det = spec.mul(det, pv);
        let pinv = spec.inv(pv).expect("pivot is nonzero");
        for r in col + 1..k {
            let f = a[r * k + col];
            if f == 0 {
                continue;
            }
            let factor = spec.mul(f, pinv);
            for j in col..k {
                let v = spec.mul(factor, a[col * k + j]);
                a[r * k + j] = spec.sub(a[r * k + j], v);
            }
        }
    }
    det
}

/// Output of [`MatrixFq::rref`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Rref {
    pub matrix: MatrixFq,
    pub pivots: IndexSet,
    pub rank: usize,
}

#[derive(Clone)]
pub struct MatrixFq {
    rows: usize,
    cols: usize,
    data: Vec<u32>,
    spec: Arc<FieldSpec>,
}

impl PartialEq for MatrixFq {
    fn eq(&self, other: &Self) -> bool {
        self.rows == other.rows
            && self.cols == other.cols
            && self.data == other.data
            && *self.spec == *other.spec
    }
}

impl Eq for MatrixFq {}

impl fmt::Debug for MatrixFq {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "MatrixFq{:?}", self.to_rows_formatted())
    }
}

impl MatrixFq {
    /// From row-major element codes.
    pub fn from_codes(
        spec: &Arc<FieldSpec>,
        rows: usize,
        cols: usize,
        data: Vec<u32>,
    ) -> Result<Self, MatrixError> {
        if data.len() != rows * cols {
            return Err(MatrixError::Shape(format!(
                "{} entries for a {rows}x{cols} matrix",
                data.len()
            )));
        }
        for &c in &data {
            spec.check_code(c as u64)?;
        }
        Ok(MatrixFq {
            rows,
            cols,
            data,
            spec: Arc::clone(spec),
        })
    }

    /// From integer rows, each entry reduced into the prime subfield.
    pub fn from_ints(spec: &Arc<FieldSpec>, rows: &[Vec<i64>]) -> Result<Self, MatrixError> {
        let cols = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|r| r.len() != cols) {
            return Err(MatrixError::Shape("ragged rows".into()));
        }
        let data = rows.iter().flatten().map(|&x| spec.from_int(x)).collect();
        Self::from_codes(spec, rows.len(), cols, data)
    }

    pub fn zeros(spec: &Arc<FieldSpec>, rows: usize, cols: usize) -> Self {
        MatrixFq {
            rows,
            cols,
            data: vec![0; rows * cols],
            spec: Arc::clone(spec),
        }
    }

    pub fn identity(spec: &Arc<FieldSpec>, n: usize) -> Self {
        let mut m = Self::zeros(spec, n, n);
        for i in 0..n {
            m.data[i * n + i] = 1;
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn spec(&self) -> &Arc<FieldSpec> {
        &self.spec
    }

    pub fn codes(&self) -> &[u32] {
        &self.data
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> u32 {
        self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, code: u32) {
        assert!(code < self.spec.order());
        self.data[i * self.cols + j] = code;
    }

    pub fn row(&self, i: usize) -> &[u32] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn to_rows(&self) -> Vec<Vec<u32>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    fn to_rows_formatted(&self) -> Vec<Vec<String>> {
        (0..self.rows)
            .map(|i| self.row(i).iter().map(|&c| self.spec.format_code(c)).collect())
            .collect()
    }

    /// Apply `f` to every entry, possibly moving to another field.
    pub fn map_codes(&self, target: &Arc<FieldSpec>, f: impl Fn(u32) -> u32) -> Self {
        MatrixFq {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|&c| f(c)).collect(),
            spec: Arc::clone(target),
        }
    }

    pub fn mul(&self, other: &MatrixFq) -> Result<MatrixFq, MatrixError> {
        if self.cols != other.rows || *self.spec != *other.spec {
            return Err(MatrixError::Shape(format!(
                "cannot multiply {}x{} by {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let s = &self.spec;
        let mut out = Self::zeros(s, self.rows, other.cols);
        for i in 0..self.rows {
            for j in 0..other.cols {
                let v = (0..self.cols).fold(0, |acc, t| {
                    s.add(acc, s.mul(self.get(i, t), other.get(t, j)))
                });
                out.data[i * other.cols + j] = v;
            }
        }
        Ok(out)
    }

    pub fn transpose(&self) -> MatrixFq {
        let mut out = Self::zeros(&self.spec, self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                out.data[j * self.rows + i] = self.get(i, j);
            }
        }
        out
    }

    /// Reduced row echelon form, pivot columns and rank.
    pub fn rref(&self) -> Rref {
        let s = &self.spec;
        let (rows, cols) = (self.rows, self.cols);
        let mut a = self.data.clone();
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..cols {
            if r == rows {
                break;
            }
            let Some(p) = (r..rows).find(|&i| a[i * cols + c] != 0) else {
                continue;
            };
            if p != r {
                for j in 0..cols {
                    a.swap(p * cols + j, r * cols + j);
                }
            }
            let inv = s.inv(a[r * cols + c]).expect("pivot is nonzero");
            for j in 0..cols {
                a[r * cols + j] = s.mul(a[r * cols + j], inv);
            }
            for i in 0..rows {
                let f = a[i * cols + c];
                if i == r || f == 0 {
                    continue;
                }
                for j in 0..cols {
                    let v = s.mul(f, a[r * cols + j]);
                    a[i * cols + j] = s.sub(a[i * cols + j], v);
                }
            }
            pivots.push(c + 1);
            r += 1;
        }
        Rref {
            matrix: MatrixFq {
                rows,
                cols,
                data: a,
                spec: Arc::clone(s),
            },
            pivots: IndexSet(pivots),
            rank: r,
        }
    }

    pub fn rank(&self) -> usize {
        self.rref().rank
    }

    pub fn is_rref(&self) -> bool {
        self.rref().matrix == *self
    }

    fn require_full_rank(&self) -> Result<Rref, MatrixError> {
        let red = self.rref();
        if red.rank != self.rows {
            return Err(MatrixError::RankDeficient {
                rank: red.rank,
                expected: self.rows,
            });
        }
        Ok(red)
    }

    /// Maximal minor on the columns `cols`, i.e. the Plücker coordinate.
    pub fn minor(&self, cols: &IndexSet) -> Result<u32, MatrixError> {
        if cols.len() != self.rows {
            return Err(MatrixError::IndexSetSize {
                got: cols.len(),
                expected: self.rows,
            });
        }
        if cols.as_slice().last().is_some_and(|&e| e > self.cols) {
            return Err(MatrixError::InvalidIndexSet(cols.0.clone(), self.cols));
        }
        Ok(self.minor_unchecked(cols.as_slice()))
    }

    /// Minor on one-based columns, no validation.
    pub(crate) fn minor_unchecked(&self, cols: &[usize]) -> u32 {
        let k = self.rows;
        let s = &self.spec;
        match k {
            0 => 1,
            1 => self.get(0, cols[0] - 1),
            2 => {
                let (a, b) = (cols[0] - 1, cols[1] - 1);
                s.sub(
                    s.mul(self.get(0, a), self.get(1, b)),
                    s.mul(self.get(0, b), self.get(1, a)),
                )
            }
            _ => {
                let mut buf = Vec::with_capacity(k * k);
                for i in 0..k {
                    for &c in cols {
                        buf.push(self.get(i, c - 1));
                    }
                }
                det_in_place(s, &mut buf, k)
            }
        }
    }

    /// All maximal minors keyed by column set, in colex order.
    pub fn plucker_vector(&self) -> Result<Vec<(IndexSet, u32)>, MatrixError> {
        self.require_full_rank()?;
        Ok(k_subsets(self.cols, self.rows)
            .into_iter()
            .map(|i| {
                let v = self.minor_unchecked(i.as_slice());
                (i, v)
            })
            .collect())
    }

    /// Basis of `{v : M v^T = 0}` as an `(n - k) x n` matrix in RREF.
    pub fn null_space_basis(&self) -> Result<MatrixFq, MatrixError> {
        let red = self.require_full_rank()?;
        let s = &self.spec;
        let n = self.cols;
        let free: Vec<usize> = (1..=n).filter(|c| !red.pivots.contains(*c)).collect();
        let mut out = Self::zeros(s, free.len(), n);
        for (row, &f) in free.iter().enumerate() {
            out.data[row * n + f - 1] = 1;
            for (i, &p) in red.pivots.as_slice().iter().enumerate() {
                out.data[row * n + p - 1] = s.neg(red.matrix.get(i, f - 1));
            }
        }
        Ok(out.rref().matrix)
    }

    /// Scale column `j` (one-based) by `(-1)^(j-1)`.
    pub fn alt_rows(&self) -> MatrixFq {
        let mut out = self.clone();
        for i in 0..self.rows {
            for j in (1..self.cols).step_by(2) {
                out.data[i * self.cols + j] = self.spec.neg(self.get(i, j));
            }
        }
        out
    }

    pub fn to_json(&self) -> Value {
        let entries: Vec<Vec<Value>> = (0..self.rows)
            .map(|i| self.row(i).iter().map(|&c| self.spec.code_to_json(c)).collect())
            .collect();
        json!({
            "k": self.rows,
            "n": self.cols,
            "entries": entries,
            "field": self.spec.descriptor(),
        })
    }

    pub fn from_json(v: &Value) -> Result<MatrixFq, MatrixError> {
        let bad = |m: &str| MatrixError::Json(m.to_string());
        let k = v["k"].as_u64().ok_or_else(|| bad("missing k"))? as usize;
        let n = v["n"].as_u64().ok_or_else(|| bad("missing n"))? as usize;
        let field: FieldDescriptor =
            serde_json::from_value(v["field"].clone()).map_err(|e| bad(&e.to_string()))?;
        let spec = field.build()?;
        let rows = v["entries"].as_array().ok_or_else(|| bad("missing entries"))?;
        if rows.len() != k {
            return Err(bad("row count does not match k"));
        }
        let mut data = Vec::with_capacity(k * n);
        for row in rows {
            let row = row.as_array().ok_or_else(|| bad("row is not an array"))?;
            if row.len() != n {
                return Err(bad("row length does not match n"));
            }
            for e in row {
                data.push(spec.code_from_json(e)?);
            }
        }
        Self::from_codes(&spec, k, n, data)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn f(p: u32) -> Arc<FieldSpec> {
        FieldSpec::new(p, 1).unwrap()
    }

    #[test]
    fn colex_order_of_pairs() {
        let sets: Vec<Vec<usize>> = k_subsets(4, 2).into_iter().map(|s| s.0).collect();
        assert_eq!(
            sets,
            vec![vec![1, 2], vec![1, 3], vec![2, 3], vec![1, 4], vec![2, 4], vec![3, 4]]
        );
        let mut sorted = k_subsets(5, 3);
        sorted.reverse();
        sorted.sort();
        assert_eq!(sorted, k_subsets(5, 3));
    }

    #[test]
    fn rref_examples() {
        let f3 = f(3);
        let id = MatrixFq::identity(&f3, 2);
        let red = id.rref();
        assert_eq!(red.matrix, id);
        assert_eq!(red.pivots.as_slice(), &[1, 2]);

        let m = MatrixFq::from_ints(&f3, &[vec![2, 0, 1, 1], vec![0, 2, 2, 0]]).unwrap();
        let red = m.rref();
        let want = MatrixFq::from_ints(&f3, &[vec![1, 0, 2, 2], vec![0, 1, 1, 0]]).unwrap();
        assert_eq!(red.matrix, want);
        assert_eq!(red.rank, 2);

        let z = MatrixFq::zeros(&f3, 2, 3).rref();
        assert_eq!(z.rank, 0);
        assert!(z.pivots.is_empty());
    }

    #[test]
    fn minor_examples() {
        let f3 = f(3);
        let m = MatrixFq::from_ints(&f3, &[vec![0, 1], vec![1, 0]]).unwrap();
        assert_eq!(m.minor(&IndexSet::new(vec![1, 2], 2).unwrap()).unwrap(), 2);

        let a = MatrixFq::from_ints(&f3, &[vec![1, 0, 2, 2], vec![0, 1, 1, 0]]).unwrap();
        let i34 = IndexSet::new(vec![3, 4], 4).unwrap();
        assert_eq!(a.minor(&i34).unwrap(), 1);
        let b = MatrixFq::from_ints(&f3, &[vec![0, 1, 0, 1], vec![0, 0, 1, 1]]).unwrap();
        assert_eq!(b.minor(&i34).unwrap(), 2);

        let err = a.minor(&IndexSet::new(vec![1], 4).unwrap()).unwrap_err();
        assert_eq!(err, MatrixError::IndexSetSize { got: 1, expected: 2 });
    }

    #[test]
    fn plucker_examples() {
        let f3 = f(3);
        let m = MatrixFq::from_ints(&f3, &[vec![1, 0, 0], vec![0, 1, 0]]).unwrap();
        let pl: Vec<u32> = m.plucker_vector().unwrap().into_iter().map(|x| x.1).collect();
        assert_eq!(pl, vec![1, 0, 0]);

        let a = MatrixFq::from_ints(&f3, &[vec![1, 0, 2, 2], vec![0, 1, 1, 0]]).unwrap();
        let pl = a.plucker_vector().unwrap();
        assert_eq!(pl.len(), 6);
        assert!(pl.iter().all(|(_, c)| f3.sign(*c).is_nonnegative()));

        let scaled = a.map_codes(&f3, |c| f3.mul(2, c));
        assert_eq!(scaled.plucker_vector().unwrap(), pl);

        let deficient = MatrixFq::from_ints(&f3, &[vec![1, 1], vec![2, 2]]).unwrap();
        assert!(matches!(
            deficient.plucker_vector(),
            Err(MatrixError::RankDeficient { rank: 1, expected: 2 })
        ));
    }

    #[test]
    fn null_space_examples() {
        let f3 = f(3);
        let m = MatrixFq::from_ints(&f3, &[vec![1, 0, 1], vec![0, 1, 1]]).unwrap();
        let n = m.null_space_basis().unwrap();
        assert_eq!(n, MatrixFq::from_ints(&f3, &[vec![1, 1, 2]]).unwrap());

        let pad = MatrixFq::from_ints(&f3, &[vec![1, 0, 0, 0], vec![0, 1, 0, 0]]).unwrap();
        let n = pad.null_space_basis().unwrap();
        assert_eq!(
            n,
            MatrixFq::from_ints(&f3, &[vec![0, 0, 1, 0], vec![0, 0, 0, 1]]).unwrap()
        );
    }

    #[test]
    fn alt_examples() {
        let f5 = f(5);
        let v = MatrixFq::from_ints(&f5, &[vec![1, 2, 3, 4]]).unwrap();
        assert_eq!(v.alt_rows(), MatrixFq::from_ints(&f5, &[vec![1, 3, 3, 1]]).unwrap());
        let f4 = FieldSpec::new(2, 2).unwrap();
        let m = MatrixFq::from_codes(&f4, 1, 4, vec![1, 2, 3, 1]).unwrap();
        assert_eq!(m.alt_rows(), m);
    }

    #[test]
    fn json_round_trip() {
        let f9 = FieldSpec::new(3, 2).unwrap();
        let m = MatrixFq::from_codes(&f9, 2, 3, vec![1, 0, 5, 0, 1, 8]).unwrap();
        let v = m.to_json();
        assert_eq!(v["entries"][0][2], json!([2, 1]));
        assert_eq!(MatrixFq::from_json(&v).unwrap(), m);
    }
}
