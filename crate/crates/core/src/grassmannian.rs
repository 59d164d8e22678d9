//! Points of `Gr_{k,n}(F_q)` in canonical (RREF) form, total nonnegativity,
//! the pruned enumerator, duality and subfield lifting.

use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use num_bigint::BigUint;
use num_traits::{One, ToPrimitive};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};
use thiserror::Error;

use crate::field::{FieldError, FieldSpec, Sign};
use crate::matrix::{subset_masks, IndexSet, MatrixError, MatrixFq};

/// Default bound on the search-space estimate `C(n,k) * q^(k(n-k))`.
pub const DEFAULT_WORK_CAP: u64 = 1_000_000_000;

/// Largest supported `n` (column sets are kept in 64-bit masks).
pub const MAX_COLUMNS: usize = 63;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GrassmannianError {
    #[error("need 0 <= k <= n <= {MAX_COLUMNS}, got k={k}, n={n}")]
    InvalidShape { k: usize, n: usize },
    #[error("search space estimate {estimate} exceeds the work cap {cap}")]
    WorkCapExceeded { estimate: BigUint, cap: u64 },
    #[error("cannot lift from degree {source_degree} to degree {target_degree}: target must be an even multiple")]
    DegreeCondition {
        source_degree: u32,
        target_degree: u32,
    },
    #[error("count table is not palindromic at n={n}, k={k}")]
    PalindromyViolation { n: usize, k: usize },
    #[error(transparent)]
    Matrix(#[from] MatrixError),
    #[error(transparent)]
    Field(#[from] FieldError),
}

/// Which points of the Grassmannian to keep.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Filter {
    All,
    Tnn,
    Tp,
}

impl Filter {
    #[inline]
    fn admits(self, s: Sign) -> bool {
        match self {
            Filter::All => true,
            Filter::Tnn => s.is_nonnegative(),
            Filter::Tp => s.is_positive(),
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Filter::All => "all",
            Filter::Tnn => "tnn",
            Filter::Tp => "tp",
        }
    }
}

impl fmt::Display for Filter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Filter {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        match s.to_ascii_lowercase().as_str() {
            "all" => Ok(Filter::All),
            "tnn" | "nonneg" => Ok(Filter::Tnn),
            "tp" | "pos" => Ok(Filter::Tp),
            other => Err(format!("unknown filter '{other}' (expected all, tnn or tp)")),
        }
    }
}

/// A point of `Gr_{k,n}(F_q)`, stored as its RREF representative.
///
/// Two subspaces are equal exactly when their canonical matrices are equal.
#[derive(Clone, PartialEq, Eq)]
pub struct Subspace {
    matrix: MatrixFq,
    pivots: IndexSet,
}

impl fmt::Debug for Subspace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Subspace({:?})", self.matrix)
    }
}

impl Subspace {
    /// Row span of a full-rank matrix.
    pub fn canonicalize(m: &MatrixFq) -> Result<Self, GrassmannianError> {
        let red = m.rref();
        if red.rank != m.rows() {
            return Err(MatrixError::RankDeficient {
                rank: red.rank,
                expected: m.rows(),
            }
            .into());
        }
        Ok(Subspace {
            matrix: red.matrix,
            pivots: red.pivots,
        })
    }

    /// Caller guarantees `matrix` is in RREF with full rank.
    pub(crate) fn from_rref(matrix: MatrixFq, pivot_mask: u64) -> Self {
        Subspace {
            matrix,
            pivots: IndexSet::from_mask(pivot_mask),
        }
    }

    pub fn from_ints(spec: &Arc<FieldSpec>, rows: &[Vec<i64>]) -> Result<Self, GrassmannianError> {
        Self::canonicalize(&MatrixFq::from_ints(spec, rows)?)
    }

    pub fn matrix(&self) -> &MatrixFq {
        &self.matrix
    }

    pub fn pivots(&self) -> &IndexSet {
        &self.pivots
    }

    pub fn k(&self) -> usize {
        self.matrix.rows()
    }

    pub fn n(&self) -> usize {
        self.matrix.cols()
    }

    pub fn spec(&self) -> &Arc<FieldSpec> {
        self.matrix.spec()
    }

    pub fn plucker(&self) -> Vec<(IndexSet, u32)> {
        self.matrix
            .plucker_vector()
            .expect("canonical representatives have full rank")
    }

    /// Every Plücker coordinate of the RREF representative is a square.
    ///
    /// The pivot coordinate equals 1, so no other representative can do better.
    pub fn is_tnn(&self) -> bool {
        let s = self.spec();
        self.plucker().iter().all(|(_, c)| s.sign(*c).is_nonnegative())
    }

    pub fn is_tp(&self) -> bool {
        let s = self.spec();
        self.plucker().iter().all(|(_, c)| s.sign(*c).is_positive())
    }

    pub fn satisfies(&self, filter: Filter) -> bool {
        match filter {
            Filter::All => true,
            Filter::Tnn => self.is_tnn(),
            Filter::Tp => self.is_tp(),
        }
    }

    /// `alt` applied to the orthogonal complement, as a point of `Gr_{n-k,n}`.
    pub fn dual(&self) -> Subspace {
        let perp = self
            .matrix
            .null_space_basis()
            .expect("canonical representatives have full rank");
        Subspace::canonicalize(&perp.alt_rows()).expect("alt preserves rank")
    }

    /// The canonical matrix in the matrix JSON schema.
    pub fn to_json(&self) -> Value {
        self.matrix.to_json()
    }

    pub fn from_json(v: &Value) -> Result<Self, GrassmannianError> {
        Self::canonicalize(&MatrixFq::from_json(v)?)
    }

    /// One JSON line with just the canonical entries.
    pub fn to_json_line(&self) -> String {
        let s = self.spec();
        let rows: Vec<Vec<Value>> = (0..self.k())
            .map(|i| self.matrix.row(i).iter().map(|&c| s.code_to_json(c)).collect())
            .collect();
        json!({"k": self.k(), "n": self.n(), "entries": rows}).to_string()
    }
}

/// Injective map `Gr_{k,n}(F_{p^r}) -> Gr^{>=0}_{k,n}(F_{p^{2mr}})` by entrywise embedding.
pub struct SubfieldLift {
    target: Arc<FieldSpec>,
    table: Vec<u32>,
}

impl SubfieldLift {
    pub fn new(source: &FieldSpec, target: &Arc<FieldSpec>) -> Result<Self, GrassmannianError> {
        let (r, s) = (source.degree(), target.degree());
        if source.characteristic() != target.characteristic() || s % (2 * r) != 0 {
            return Err(GrassmannianError::DegreeCondition {
                source_degree: r,
                target_degree: s,
            });
        }
        Ok(SubfieldLift {
            target: Arc::clone(target),
            table: source.embedding_into(target)?,
        })
    }

    /// Embedding fixes 0 and 1, so RREF shape and pivots carry over.
    pub fn lift(&self, v: &Subspace) -> Subspace {
        let m = v.matrix.map_codes(&self.target, |c| self.table[c as usize]);
        Subspace {
            matrix: m,
            pivots: v.pivots.clone(),
        }
    }
}

pub fn lift(v: &Subspace, target: &Arc<FieldSpec>) -> Result<Subspace, GrassmannianError> {
    Ok(SubfieldLift::new(v.spec(), target)?.lift(v))
}

pub fn binomial(n: usize, k: usize) -> BigUint {
    if k > n {
        return BigUint::from(0u32);
    }
    let k = k.min(n - k);
    let mut acc = BigUint::one();
    for i in 0..k {
        acc = acc * BigUint::from(n - i) / BigUint::from(i + 1);
    }
    acc
}

/// Number of points of `Gr_{k,n}(F_q)`.
pub fn gaussian_binomial(n: usize, k: usize, q: u64) -> BigUint {
    if k > n {
        return BigUint::from(0u32);
    }
    let q = BigUint::from(q);
    let one = BigUint::one();
    let mut num = BigUint::one();
    let mut den = BigUint::one();
    for i in 0..k {
        num *= q.pow((n - i) as u32) - &one;
        den *= q.pow((i + 1) as u32) - &one;
    }
    num / den
}

/// Statistics of a counting run.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CountReport {
    pub count: BigUint,
    /// Nodes visited by the search (candidate columns tried).
    pub nodes: u64,
    /// Per pivot set subtotal, colex order.
    pub per_pivot_set: Vec<(IndexSet, u64)>,
}

/// Depth-first enumerator of RREF matrices with prefix pruning.
///
/// For each pivot set (colex order) the free entries are filled column by
/// column from the left; within a column the free entries are read top to
/// bottom and cycled in lexicographic order of codes. After a column is placed,
/// every maximal minor whose largest column is that column is final, so a
/// minor with a forbidden sign rejects the whole branch.
#[derive(Debug, Clone)]
pub struct Enumerator {
    k: usize,
    n: usize,
    spec: Arc<FieldSpec>,
    filter: Filter,
    work_cap: u64,
    progress: bool,
}

struct Search<'a> {
    en: &'a Enumerator,
    q: u32,
    /// Row-major k x n working matrix.
    m: Vec<u32>,
    pivot_of_col: Vec<Option<usize>>,
    /// Rows that may be nonzero in each column.
    free_rows: Vec<usize>,
    /// For each column c, the (k-1)-subsets of columns < c.
    partners: Vec<Vec<Vec<usize>>>,
    nodes: u64,
    scratch: Vec<u32>,
}

impl<'a> Search<'a> {
    fn new(en: &'a Enumerator, pivot_mask: u64) -> Self {
        let (k, n) = (en.k, en.n);
        let mut pivot_of_col = vec![None; n];
        let mut free_rows = vec![0; n];
        let mut seen = 0;
        for c in 0..n {
            if pivot_mask >> c & 1 == 1 {
                pivot_of_col[c] = Some(seen);
                seen += 1;
            } else {
                free_rows[c] = seen;
            }
        }
        let partners = if en.filter == Filter::All || k == 0 {
            Vec::new()
        } else {
            (0..n)
                .map(|c| {
                    subset_masks(c, k - 1)
                        .into_iter()
                        .map(|m| (0..c).filter(|b| m >> b & 1 == 1).collect())
                        .collect()
                })
                .collect()
        };
        Search {
            en,
            q: en.spec.order(),
            m: vec![0; k * n],
            pivot_of_col,
            free_rows,
            partners,
            nodes: 0,
            scratch: vec![0; k * k],
        }
    }

    #[inline]
    fn minor_with(&mut self, others: &[usize], col: usize) -> u32 {
        let (k, n) = (self.en.k, self.en.n);
        let s = &*self.en.spec;
        let m = &self.m;
        match k {
            1 => m[col],
            2 => {
                let a = others[0];
                s.sub(s.mul(m[a], m[n + col]), s.mul(m[col], m[n + a]))
            }
            _ => {
                for i in 0..k {
                    for (j, &c) in others.iter().enumerate() {
                        self.scratch[i * k + j] = m[i * n + c];
                    }
                    self.scratch[i * k + k - 1] = m[i * n + col];
                }
                crate::matrix::det_in_place(s, &mut self.scratch, k)
            }
        }
    }

    fn column_ok(&mut self, col: usize) -> bool {
        if self.partners.is_empty() {
            return true;
        }
        let filter = self.en.filter;
        for idx in 0..self.partners[col].len() {
            let others = std::mem::take(&mut self.partners[col][idx]);
            let d = self.minor_with(&others, col);
            self.partners[col][idx] = others;
            if !filter.admits(self.en.spec.sign(d)) {
                return false;
            }
        }
        true
    }

    fn run(&mut self, col: usize, visit: &mut dyn FnMut(&[u32])) {
        let (k, n) = (self.en.k, self.en.n);
        if col == n {
            visit(&self.m);
            return;
        }
        if let Some(row) = self.pivot_of_col[col] {
            for i in 0..k {
                self.m[i * n + col] = u32::from(i == row);
            }
            self.nodes += 1;
            if self.column_ok(col) {
                self.run(col + 1, visit);
            }
            return;
        }
        let t = self.free_rows[col];
        for i in t..k {
            self.m[i * n + col] = 0;
        }
        let total = (self.q as u64).pow(t as u32);
        for idx in 0..total {
            // row 0 is the most significant digit
            let mut rest = idx;
            for i in (0..t).rev() {
                self.m[i * n + col] = (rest % self.q as u64) as u32;
                rest /= self.q as u64;
            }
            self.nodes += 1;
            if self.column_ok(col) {
                self.run(col + 1, visit);
            }
        }
    }
}

impl Enumerator {
    pub fn new(
        k: usize,
        n: usize,
        spec: &Arc<FieldSpec>,
        filter: Filter,
    ) -> Result<Self, GrassmannianError> {
        if k > n || n > MAX_COLUMNS {
            return Err(GrassmannianError::InvalidShape { k, n });
        }
        Ok(Enumerator {
            k,
            n,
            spec: Arc::clone(spec),
            filter,
            work_cap: DEFAULT_WORK_CAP,
            progress: false,
        })
    }

    pub fn with_work_cap(mut self, cap: u64) -> Self {
        self.work_cap = cap;
        self
    }

    /// Report finished pivot sets on stderr.
    pub fn with_progress(mut self, on: bool) -> Self {
        self.progress = on;
        self
    }

    pub fn filter(&self) -> Filter {
        self.filter
    }

    /// `C(n,k) * q^(k(n-k))`, the bound checked against the work cap.
    pub fn estimate(&self) -> BigUint {
        binomial(self.n, self.k) * BigUint::from(self.spec.order()).pow((self.k * (self.n - self.k)) as u32)
    }

    pub fn check_cap(&self) -> Result<(), GrassmannianError> {
        let est = self.estimate();
        if est > BigUint::from(self.work_cap) {
            return Err(GrassmannianError::WorkCapExceeded {
                estimate: est,
                cap: self.work_cap,
            });
        }
        Ok(())
    }

    pub fn pivot_masks(&self) -> Vec<u64> {
        subset_masks(self.n, self.k)
    }

    /// Visit every admitted RREF matrix with the given pivot set, in order.
    /// Returns the number of search nodes.
    pub fn visit_pivot_set(&self, pivot_mask: u64, visit: &mut dyn FnMut(&[u32])) -> u64 {
        let mut search = Search::new(self, pivot_mask);
        search.run(0, visit);
        search.nodes
    }

    fn note(&self, done: usize, total: usize) {
        if self.progress {
            eprintln!(
                "[{}] Gr_{{{},{}}}(F_{}): pivot set {done}/{total} done",
                self.filter,
                self.k,
                self.n,
                self.spec.order()
            );
        }
    }

    fn subspace(&self, codes: &[u32], pivot_mask: u64) -> Subspace {
        let m = MatrixFq::from_codes(&self.spec, self.k, self.n, codes.to_vec())
            .expect("enumerated entries are valid codes");
        Subspace::from_rref(m, pivot_mask)
    }

    /// Count in parallel over pivot sets; subtotals are summed in colex order.
    pub fn count(&self) -> Result<CountReport, GrassmannianError> {
        self.check_cap()?;
        let masks = self.pivot_masks();
        let total = masks.len();
        let done = std::sync::atomic::AtomicUsize::new(0);
        let parts: Vec<(u64, u64)> = masks
            .par_iter()
            .map(|&mask| {
                let mut c = 0u64;
                let nodes = self.visit_pivot_set(mask, &mut |_| c += 1);
                let d = done.fetch_add(1, std::sync::atomic::Ordering::Relaxed) + 1;
                self.note(d, total);
                (c, nodes)
            })
            .collect();
        let mut count = BigUint::from(0u32);
        let mut nodes = 0u64;
        let mut per = Vec::with_capacity(total);
        for (&mask, (c, nd)) in masks.iter().zip(parts) {
            count += c;
            nodes += nd;
            per.push((IndexSet::from_mask(mask), c));
        }
        Ok(CountReport {
            count,
            nodes,
            per_pivot_set: per,
        })
    }

    /// All admitted subspaces in the enumeration order.
    pub fn collect(&self) -> Result<Vec<Subspace>, GrassmannianError> {
        self.check_cap()?;
        let masks = self.pivot_masks();
        let chunks: Vec<Vec<Subspace>> = masks
            .par_iter()
            .map(|&mask| {
                let mut out = Vec::new();
                self.visit_pivot_set(mask, &mut |codes| out.push(self.subspace(codes, mask)));
                out
            })
            .collect();
        Ok(chunks.into_iter().flatten().collect())
    }

    /// Sequential streaming visit in the enumeration order.
    pub fn for_each(&self, mut f: impl FnMut(Subspace)) -> Result<(), GrassmannianError> {
        self.check_cap()?;
        let masks = self.pivot_masks();
        let total = masks.len();
        for (i, &mask) in masks.iter().enumerate() {
            self.visit_pivot_set(mask, &mut |codes| f(self.subspace(codes, mask)));
            self.note(i + 1, total);
        }
        Ok(())
    }

    /// Map each pivot set's subspaces in parallel, results concatenated in order.
    pub fn par_map_chunks<T: Send>(
        &self,
        f: impl Fn(Subspace) -> Option<T> + Sync,
    ) -> Result<Vec<T>, GrassmannianError> {
        self.check_cap()?;
        let masks = self.pivot_masks();
        let chunks: Vec<Vec<T>> = masks
            .par_iter()
            .map(|&mask| {
                let mut out = Vec::new();
                self.visit_pivot_set(mask, &mut |codes| {
                    if let Some(t) = f(self.subspace(codes, mask)) {
                        out.push(t)
                    }
                });
                out
            })
            .collect();
        Ok(chunks.into_iter().flatten().collect())
    }
}

pub fn enumerate(
    k: usize,
    n: usize,
    spec: &Arc<FieldSpec>,
    filter: Filter,
) -> Result<Vec<Subspace>, GrassmannianError> {
    Enumerator::new(k, n, spec, filter)?.collect()
}

pub fn count(
    k: usize,
    n: usize,
    spec: &Arc<FieldSpec>,
    filter: Filter,
) -> Result<BigUint, GrassmannianError> {
    Ok(Enumerator::new(k, n, spec, filter)?.count()?.count)
}

/// Triangle of counts `|Gr_{k,n}|` for `0 <= k <= n <= max_n`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CountTable {
    pub q: u32,
    pub filter: Filter,
    pub max_n: usize,
    /// `cells[n][k]`
    pub cells: Vec<Vec<BigUint>>,
}

#[derive(Serialize, Deserialize)]
struct CellJson {
    n: usize,
    k: usize,
    count: serde_json::Number,
}

#[derive(Serialize, Deserialize)]
struct TableJson {
    q: u32,
    filter: Filter,
    cells: Vec<CellJson>,
}

impl CountTable {
    pub fn compute(
        spec: &Arc<FieldSpec>,
        max_n: usize,
        filter: Filter,
        work_cap: u64,
    ) -> Result<Self, GrassmannianError> {
        let mut cells = Vec::with_capacity(max_n + 1);
        for n in 0..=max_n {
            let mut row = Vec::with_capacity(n + 1);
            for k in 0..=n {
                let en = Enumerator::new(k, n, spec, filter)?.with_work_cap(work_cap);
                row.push(en.count()?.count);
            }
            cells.push(row);
        }
        let table = CountTable {
            q: spec.order(),
            filter,
            max_n,
            cells,
        };
        table.check_palindromic()?;
        Ok(table)
    }

    pub fn get(&self, k: usize, n: usize) -> Option<&BigUint> {
        self.cells.get(n).and_then(|row| row.get(k))
    }

    pub fn row(&self, n: usize) -> &[BigUint] {
        &self.cells[n]
    }

    pub fn check_palindromic(&self) -> Result<(), GrassmannianError> {
        for (n, row) in self.cells.iter().enumerate() {
            for k in 0..=n {
                if row[k] != row[n - k] {
                    return Err(GrassmannianError::PalindromyViolation { n, k });
                }
            }
        }
        Ok(())
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::from("n,k,count\n");
        for (n, row) in self.cells.iter().enumerate() {
            for (k, c) in row.iter().enumerate() {
                out.push_str(&format!("{n},{k},{c}\n"));
            }
        }
        out
    }

    pub fn to_json(&self) -> Value {
        let cells = self
            .cells
            .iter()
            .enumerate()
            .flat_map(|(n, row)| {
                row.iter().enumerate().map(move |(k, c)| CellJson {
                    n,
                    k,
                    count: c.to_string().parse().expect("decimal digits form a JSON number"),
                })
            })
            .collect();
        serde_json::to_value(TableJson {
            q: self.q,
            filter: self.filter,
            cells,
        })
        .expect("table serializes")
    }

    pub fn from_json(v: &Value) -> Result<Self, String> {
        let t: TableJson = serde_json::from_value(v.clone()).map_err(|e| e.to_string())?;
        let max_n = t.cells.iter().map(|c| c.n).max().unwrap_or(0);
        let mut cells: Vec<Vec<Option<BigUint>>> = (0..=max_n).map(|n| vec![None; n + 1]).collect();
        for c in t.cells {
            if c.k > c.n {
                return Err(format!("cell k={} exceeds n={}", c.k, c.n));
            }
            let count: BigUint = c.count.to_string().parse().map_err(|_| "bad count".to_string())?;
            cells[c.n][c.k] = Some(count);
        }
        let cells = cells
            .into_iter()
            .enumerate()
            .map(|(n, row)| {
                row.into_iter()
                    .enumerate()
                    .map(|(k, c)| c.ok_or_else(|| format!("missing cell n={n} k={k}")))
                    .collect::<Result<Vec<_>, _>>()
            })
            .collect::<Result<Vec<_>, _>>()?;
        Ok(CountTable {
            q: t.q,
            filter: t.filter,
            max_n,
            cells,
        })
    }

    /// Rows as `u64` where they fit.
    pub fn rows_u64(&self) -> Vec<Vec<u64>> {
        self.cells
            .iter()
            .map(|r| r.iter().map(|c| c.to_u64().unwrap_or(u64::MAX)).collect())
            .collect()
    }
}
