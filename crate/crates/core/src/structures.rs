//! Sign variation, the twisted cyclic shift, matroids of subspaces and
//! positroid realizability, and shape checks on count sequences.

use std::collections::HashSet;
use std::sync::Arc;

use num_bigint::BigUint;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::field::{FieldSpec, Sign};
use crate::grassmannian::{
    Enumerator, Filter, GrassmannianError, Subspace, DEFAULT_WORK_CAP,
};
use crate::matrix::{IndexSet, MatrixError, MatrixFq};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum StructureError {
    #[error("brute force over {count} vectors exceeds the cap {cap}")]
    VectorCap { count: u64, cap: u64 },
    #[error("invalid matroid: {0}")]
    InvalidMatroid(String),
    #[error("witness has shape ({k},{n}) but the matroid has shape ({mk},{mn})")]
    WitnessShape { k: usize, n: usize, mk: usize, mn: usize },
    #[error(transparent)]
    Grassmannian(#[from] GrassmannianError),
    #[error(transparent)]
    Matrix(#[from] MatrixError),
}

/// Number of sign changes after dropping zeros.
pub fn sign_variation(spec: &FieldSpec, v: &[u32]) -> usize {
    let signs: Vec<Sign> = v
        .iter()
        .map(|&c| spec.sign(c))
        .filter(|&s| s != Sign::Zero)
        .collect();
    signs.windows(2).filter(|w| w[0] != w[1]).count()
}

pub const DEFAULT_VECTOR_CAP: u64 = 10_000_000;

/// Largest sign variation over all `q^k` vectors of `V`, with a witness vector.
pub fn max_variation(v: &Subspace, cap: u64) -> Result<(usize, Vec<u32>), StructureError> {
    let s = v.spec();
    let (k, n, q) = (v.k(), v.n(), s.order() as u64);
    let count = q.checked_pow(k as u32).unwrap_or(u64::MAX);
    if count > cap {
        return Err(StructureError::VectorCap { count, cap });
    }
    let m = v.matrix();
    let mut best = (0usize, vec![0u32; n]);
    let mut coeffs = vec![0u32; k];
    for idx in 0..count {
        let mut rest = idx;
        for c in coeffs.iter_mut().rev() {
            *c = (rest % q) as u32;
            rest /= q;
        }
        let vec: Vec<u32> = (0..n)
            .map(|j| (0..k).fold(0, |acc, i| s.add(acc, s.mul(coeffs[i], m.get(i, j)))))
            .collect();
        let var = sign_variation(s, &vec);
        if var > best.0 {
            best = (var, vec);
        }
    }
    Ok(best)
}

/// `(v_1, .., v_n) -> (v_2, .., v_n, (-1)^(k-1) v_1)` applied to every row.
pub fn cyclic_shift(v: &Subspace) -> Subspace {
    let s = v.spec();
    let (k, n) = (v.k(), v.n());
    if n == 0 {
        return v.clone();
    }
    let m = v.matrix();
    let mut data = Vec::with_capacity(k * n);
    for i in 0..k {
        data.extend((1..n).map(|j| m.get(i, j)));
        let first = m.get(i, 0);
        data.push(if k % 2 == 0 { s.neg(first) } else { first });
    }
    let shifted = MatrixFq::from_codes(s, k, n, data).expect("same shape");
    Subspace::canonicalize(&shifted).expect("a coordinate permutation preserves rank")
}

/// Smallest `t >= 1` with `sigma^t(V) = V`.
pub fn cyclic_shift_order(v: &Subspace) -> usize {
    let mut cur = cyclic_shift(v);
    let mut t = 1;
    while cur != *v {
        cur = cyclic_shift(&cur);
        t += 1;
    }
    t
}

/// All `V` with `sigma(V) = V`, in enumeration order.
pub fn fixed_points(
    k: usize,
    n: usize,
    spec: &Arc<FieldSpec>,
    restrict_tnn: bool,
    work_cap: u64,
) -> Result<Vec<Subspace>, StructureError> {
    let filter = if restrict_tnn { Filter::Tnn } else { Filter::All };
    let en = Enumerator::new(k, n, spec, filter)?.with_work_cap(work_cap);
    Ok(en.par_map_chunks(|v| (cyclic_shift(&v) == v).then_some(v))?)
}

/// A matroid given by its bases, kept sorted lexicographically.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "MatroidJson")]
pub struct Matroid {
    pub n: usize,
    pub k: usize,
    bases: Vec<IndexSet>,
}

#[derive(Deserialize)]
struct MatroidJson {
    n: usize,
    k: usize,
    bases: Vec<Vec<usize>>,
}

impl TryFrom<MatroidJson> for Matroid {
    type Error = StructureError;

    fn try_from(m: MatroidJson) -> Result<Self, StructureError> {
        let sets = m
            .bases
            .into_iter()
            .map(|b| IndexSet::new(b, m.n))
            .collect::<Result<Vec<_>, _>>()?;
        Matroid::new(m.n, m.k, sets)
    }
}

impl Matroid {
    /// Validates basis sizes and the basis exchange axiom.
    pub fn new(n: usize, k: usize, bases: Vec<IndexSet>) -> Result<Self, StructureError> {
        let m = Self::from_bases_unchecked(n, k, bases);
        m.validate()?;
        Ok(m)
    }

    pub fn from_lists(n: usize, k: usize, bases: &[&[usize]]) -> Result<Self, StructureError> {
        let sets = bases
            .iter()
            .map(|b| IndexSet::new(b.to_vec(), n))
            .collect::<Result<Vec<_>, _>>()?;
        Self::new(n, k, sets)
    }

    fn from_bases_unchecked(n: usize, k: usize, mut bases: Vec<IndexSet>) -> Self {
        bases.sort_by(|a, b| a.as_slice().cmp(b.as_slice()));
        bases.dedup();
        Matroid { n, k, bases }
    }

    pub fn validate(&self) -> Result<(), StructureError> {
        if self.bases.is_empty() {
            return Err(StructureError::InvalidMatroid("no bases".into()));
        }
        if let Some(b) = self.bases.iter().find(|b| b.len() != self.k) {
            return Err(StructureError::InvalidMatroid(format!("basis {b} does not have size {}", self.k)));
        }
        if let Some(b) = self.bases.iter().find(|b| b.as_slice().last().is_some_and(|&e| e > self.n)) {
            return Err(StructureError::InvalidMatroid(format!("basis {b} leaves [{}]", self.n)));
        }
        let masks: HashSet<u64> = self.bases.iter().map(IndexSet::mask).collect();
        for b1 in &masks {
            for b2 in &masks {
                let mut only1 = b1 & !b2;
                while only1 != 0 {
                    let e = only1 & only1.wrapping_neg();
                    only1 &= only1 - 1;
                    let mut only2 = b2 & !b1;
                    let mut found = false;
                    while only2 != 0 {
                        let f = only2 & only2.wrapping_neg();
                        only2 &= only2 - 1;
                        if masks.contains(&((b1 & !e) | f)) {
                            found = true;
                            break;
                        }
                    }
                    if !found {
                        return Err(StructureError::InvalidMatroid(format!(
                            "basis exchange fails for {} and {}",
                            IndexSet::from_mask(*b1),
                            IndexSet::from_mask(*b2)
                        )));
                    }
                }
            }
        }
        Ok(())
    }

    pub fn bases(&self) -> &[IndexSet] {
        &self.bases
    }

    pub fn len(&self) -> usize {
        self.bases.len()
    }

    pub fn is_empty(&self) -> bool {
        self.bases.is_empty()
    }

    pub fn contains(&self, b: &IndexSet) -> bool {
        self.bases.iter().any(|x| x == b)
    }

    /// Complements of the bases.
    pub fn dual(&self) -> Matroid {
        Self::from_bases_unchecked(
            self.n,
            self.n - self.k,
            self.bases.iter().map(|b| b.complement(self.n)).collect(),
        )
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::to_value(self).expect("matroid serializes")
    }
}

/// Bases are the column sets with a nonzero Plücker coordinate.
pub fn matroid_of(v: &Subspace) -> Matroid {
    let bases = v
        .plucker()
        .into_iter()
        .filter(|(_, c)| *c != 0)
        .map(|(i, _)| i)
        .collect();
    Matroid::from_bases_unchecked(v.n(), v.k(), bases)
}

pub fn dual_matroid(m: &Matroid) -> Matroid {
    m.dual()
}

#[derive(Debug, Clone)]
pub enum PositroidMode {
    /// Scan every totally nonnegative point of `Gr_{k,n}(F_q)`.
    Exhaustive { work_cap: u64 },
    /// Check one candidate subspace.
    Witness(Subspace),
}

impl Default for PositroidMode {
    fn default() -> Self {
        PositroidMode::Exhaustive {
            work_cap: DEFAULT_WORK_CAP,
        }
    }
}

#[derive(Debug, Clone)]
pub struct PositroidAnswer {
    pub is_positroid: bool,
    /// First realizing subspace in enumeration order.
    pub witness: Option<Subspace>,
}

/// Is `m` the matroid of some totally nonnegative subspace over `spec`?
///
/// In witness mode a `false` answer only says the given subspace does not realize `m`.
pub fn is_positroid(
    m: &Matroid,
    spec: &Arc<FieldSpec>,
    mode: PositroidMode,
) -> Result<PositroidAnswer, StructureError> {
    match mode {
        PositroidMode::Witness(v) => {
            if v.k() != m.k || v.n() != m.n {
                return Err(StructureError::WitnessShape {
                    k: v.k(),
                    n: v.n(),
                    mk: m.k,
                    mn: m.n,
                });
            }
            let ok = **v.spec() == **spec && v.is_tnn() && matroid_of(&v) == *m;
            Ok(PositroidAnswer {
                is_positroid: ok,
                witness: ok.then_some(v),
            })
        }
        PositroidMode::Exhaustive { work_cap } => {
            let en = Enumerator::new(m.k, m.n, spec, Filter::Tnn)?.with_work_cap(work_cap);
            en.check_cap()?;
            let mut witness = None;
            for mask in en.pivot_masks() {
                // The pivot set of an RREF representative is always a basis.
                if !m.contains(&IndexSet::from_mask(mask)) {
                    continue;
                }
                en.visit_pivot_set(mask, &mut |codes| {
                    if witness.is_some() {
                        return;
                    }
                    let mat = MatrixFq::from_codes(spec, m.k, m.n, codes.to_vec())
                        .expect("valid codes");
                    let v = Subspace::canonicalize(&mat).expect("RREF has full rank");
                    if matroid_of(&v) == *m {
                        witness = Some(v);
                    }
                });
                if witness.is_some() {
                    break;
                }
            }
            Ok(PositroidAnswer {
                is_positroid: witness.is_some(),
                witness,
            })
        }
    }
}

/// Distinct matroids of the totally nonnegative points of `Gr_{k,n}(F_q)`, sorted.
pub fn positroids(
    k: usize,
    n: usize,
    spec: &Arc<FieldSpec>,
    work_cap: u64,
) -> Result<Vec<Matroid>, StructureError> {
    let en = Enumerator::new(k, n, spec, Filter::Tnn)?.with_work_cap(work_cap);
    let all = en.par_map_chunks(|v| Some(matroid_of(&v)))?;
    let mut set: Vec<Matroid> = all.into_iter().collect::<HashSet<_>>().into_iter().collect();
    set.sort_by(|a, b| {
        let ka: Vec<&[usize]> = a.bases.iter().map(|x| x.as_slice()).collect();
        let kb: Vec<&[usize]> = b.bases.iter().map(|x| x.as_slice()).collect();
        ka.cmp(&kb)
    });
    Ok(set)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct SequenceShape {
    pub palindromic: bool,
    pub unimodal: bool,
    pub log_concave: bool,
}

pub fn sequence_checks(seq: &[BigUint]) -> SequenceShape {
    let palindromic = seq.iter().eq(seq.iter().rev());
    // weakly increasing, then weakly decreasing
    let mut i = 0;
    while i + 1 < seq.len() && seq[i] <= seq[i + 1] {
        i += 1;
    }
    while i + 1 < seq.len() && seq[i] >= seq[i + 1] {
        i += 1;
    }
    let unimodal = i + 1 >= seq.len();
    let log_concave = seq
        .windows(3)
        .all(|w| &w[1] * &w[1] >= &w[0] * &w[2]);
    SequenceShape {
        palindromic,
        unimodal,
        log_concave,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn f(p: u32) -> Arc<FieldSpec> {
        FieldSpec::new(p, 1).unwrap()
    }

    fn big(xs: &[u64]) -> Vec<BigUint> {
        xs.iter().map(|&x| BigUint::from(x)).collect()
    }

    #[test]
    fn sign_variation_examples() {
        let f5 = f(5);
        assert_eq!(sign_variation(&f5, &[1, 0, 2, 3, 4]), 2);
        assert_eq!(sign_variation(&f5, &[0, 0, 0]), 0);
        let f3 = f(3);
        assert_eq!(sign_variation(&f3, &[1, 2, 1, 2]), 3);
    }

    #[test]
    fn max_variation_examples() {
        let f3 = f(3);
        let a = Subspace::from_ints(&f3, &[vec![1, 0, 2, 2], vec![0, 1, 1, 0]]).unwrap();
        let (var, _) = max_variation(&a, DEFAULT_VECTOR_CAP).unwrap();
        assert!(var >= 3);
        let b = Subspace::from_ints(&f3, &[vec![0, 1, 0, 1], vec![0, 0, 1, 1]]).unwrap();
        assert!(max_variation(&b, DEFAULT_VECTOR_CAP).unwrap().0 <= 1);
        let line = Subspace::from_ints(&f3, &[vec![1, 1, 1]]).unwrap();
        assert_eq!(max_variation(&line, DEFAULT_VECTOR_CAP).unwrap().0, 0);
        assert!(matches!(
            max_variation(&a, 5),
            Err(StructureError::VectorCap { count: 9, cap: 5 })
        ));
    }

    #[test]
    fn cyclic_shift_fixes_all_ones() {
        let f13 = f(13);
        let v = Subspace::from_ints(&f13, &[vec![1; 6]]).unwrap();
        assert_eq!(cyclic_shift(&v), v);
    }

    #[test]
    fn matroid_examples() {
        let f5 = f(5);
        let v = Subspace::from_ints(&f5, &[vec![1, 0, 2, 0], vec![0, 1, 0, 1]]).unwrap();
        let m = matroid_of(&v);
        let want = Matroid::from_lists(4, 2, &[&[1, 2], &[2, 3], &[3, 4], &[1, 4]]).unwrap();
        assert_eq!(m, want);
        assert_eq!(m.dual(), m);
        assert_eq!(
            serde_json::to_string(&m).unwrap(),
            r#"{"n":4,"k":2,"bases":[[1,2],[1,4],[2,3],[3,4]]}"#
        );
        let single = Matroid::from_lists(4, 2, &[&[1, 2]]).unwrap();
        assert_eq!(single.dual(), Matroid::from_lists(4, 2, &[&[3, 4]]).unwrap());
        assert_eq!(single.dual().dual(), single);
        let id = Subspace::from_ints(&f5, &[vec![1, 0, 0, 0], vec![0, 1, 0, 0]]).unwrap();
        assert_eq!(matroid_of(&id), single);
    }

    #[test]
    fn matroid_validation() {
        assert!(Matroid::from_lists(4, 2, &[]).is_err());
        assert!(Matroid::from_lists(4, 2, &[&[1, 2, 3]]).is_err());
        // {1,2},{3,4} alone violates exchange
        assert!(Matroid::from_lists(4, 2, &[&[1, 2], &[3, 4]]).is_err());
    }

    #[test]
    fn sequence_shape_examples() {
        let all = sequence_checks(&big(&[1, 63, 400, 703, 400, 63, 1]));
        assert!(all.palindromic && all.unimodal && all.log_concave);
        let pair = sequence_checks(&big(&[1, 1]));
        assert!(pair.palindromic && pair.unimodal && pair.log_concave);
        let zig = sequence_checks(&big(&[1, 2, 1, 2, 1]));
        assert!(zig.palindromic && !zig.unimodal && !zig.log_concave);
    }
}
