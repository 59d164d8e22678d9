//! Named cross-check suites shared by the `verify` command and the bindings.
//!
//! Each suite compares independent routes to the same quantity (closed forms
//! against each other and against the enumerator, tilings against the
//! recurrence, and so on) and reports every disagreement it finds.

use std::str::FromStr;
use std::sync::Arc;

use num_bigint::{BigInt, BigUint};
use serde::Serialize;
use serde_json::Value;

use crate::closed_forms::{
    chebyshev_poly, chebyshev_via_tilings, f3_k2, f5_k2, fibonacci, k1_nonneg,
    k1_nonneg_poly, k1_nonneg_poly_binomial, k1_pos, k1_pos_poly, k1_pos_poly_binomial,
    lemma_2x2_f5_check, lemma_rec_check, lemma_tile_coeff, partial_fraction_check, tilings,
    Polynomial,
};
use crate::field::FieldSpec;
use crate::grassmannian::{
    gaussian_binomial, CountTable, Enumerator, Filter, GrassmannianError, SubfieldLift,
    DEFAULT_WORK_CAP,
};
use crate::structures::{matroid_of, positroids, sequence_checks, SequenceShape, StructureError};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Suite {
    Duality,
    ClosedFormsF3,
    ClosedFormsF5,
    K1,
    Chebyshev,
    LemmaRec,
    Lemma2x2F5,
    PartialFraction,
    Subfield,
    PositroidDual,
    ConjectureScan,
}

impl Suite {
    pub const ALL: [Suite; 11] = [
        Suite::Duality,
        Suite::ClosedFormsF3,
        Suite::ClosedFormsF5,
        Suite::K1,
        Suite::Chebyshev,
        Suite::LemmaRec,
        Suite::Lemma2x2F5,
        Suite::PartialFraction,
        Suite::Subfield,
        Suite::PositroidDual,
        Suite::ConjectureScan,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Suite::Duality => "duality",
            Suite::ClosedFormsF3 => "closed-forms-f3",
            Suite::ClosedFormsF5 => "closed-forms-f5",
            Suite::K1 => "k1",
            Suite::Chebyshev => "chebyshev",
            Suite::LemmaRec => "lemma-rec",
            Suite::Lemma2x2F5 => "lemma-2x2-f5",
            Suite::PartialFraction => "partial-fraction",
            Suite::Subfield => "subfield",
            Suite::PositroidDual => "positroid-dual",
            Suite::ConjectureScan => "conjecture-scan",
        }
    }

    /// Default upper `n` for the enumeration part of the suite.
    pub fn default_max_n(self) -> usize {
        match self {
            Suite::Duality => 5,
            Suite::ClosedFormsF3 => 8,
            Suite::ClosedFormsF5 => 6,
            Suite::K1 => 6,
            Suite::Chebyshev => 20,
            Suite::LemmaRec => 20,
            Suite::Lemma2x2F5 => 0,
            Suite::PartialFraction => 20,
            Suite::Subfield => 4,
            Suite::PositroidDual => 4,
            Suite::ConjectureScan => 6,
        }
    }
}

impl FromStr for Suite {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        Suite::ALL
            .iter()
            .copied()
            .find(|x| x.name() == s)
            .ok_or_else(|| {
                let names: Vec<&str> = Suite::ALL.iter().map(|x| x.name()).collect();
                format!("unknown suite '{s}' (expected one of: {})", names.join(", "))
            })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
}

#[derive(Debug, Clone, Serialize)]
pub struct SuiteReport {
    pub suite: String,
    pub n_range: [usize; 2],
    pub status: Status,
    pub checks: usize,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub failures: Vec<String>,
    /// Informational lines (scan rows, truth tables).
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub notes: Vec<String>,
}

impl SuiteReport {
    fn new(suite: Suite, n_range: [usize; 2]) -> Self {
        SuiteReport {
            suite: suite.name().to_string(),
            n_range,
            status: Status::Pass,
            checks: 0,
            failures: Vec::new(),
            notes: Vec::new(),
        }
    }

    fn check(&mut self, ok: bool, what: impl FnOnce() -> String) {
        self.checks += 1;
        if !ok {
            self.failures.push(what());
        }
    }

    fn finish(mut self) -> Self {
        self.status = if self.failures.is_empty() {
            Status::Pass
        } else {
            Status::Fail
        };
        self
    }

    pub fn passed(&self) -> bool {
        self.status == Status::Pass
    }

    pub fn to_json(&self) -> Value {
        serde_json::to_value(self).expect("report serializes")
    }
}

#[derive(Debug, thiserror::Error)]
pub enum VerifyError {
    #[error(transparent)]
    Grassmannian(#[from] GrassmannianError),
    #[error(transparent)]
    Structure(#[from] StructureError),
    #[error(transparent)]
    Field(#[from] crate::field::FieldError),
}

impl VerifyError {
    pub fn is_work_cap(&self) -> bool {
        matches!(
            self,
            VerifyError::Grassmannian(GrassmannianError::WorkCapExceeded { .. })
                | VerifyError::Structure(StructureError::Grassmannian(
                    GrassmannianError::WorkCapExceeded { .. }
                ))
        )
    }
}

/// `|Gr^{>=0}_{1,n}|` for n = 2..=5, constant-first reference values `(num, den)`.
pub const REFERENCE_K1_NONNEG: [&[(i64, i64)]; 4] = [
    &[(3, 2), (1, 2)],
    &[(7, 4), (1, 1), (1, 4)],
    &[(15, 8), (11, 8), (5, 8), (1, 8)],
    &[(31, 16), (13, 8), (1, 1), (3, 8), (1, 16)],
];

/// `|Gr^{>0}_{1,n}|` for n = 2..=5, reference values.
pub const REFERENCE_K1_POS: [&[(i64, i64)]; 4] = [
    &[(-1, 2), (1, 2)],
    &[(1, 4), (-1, 2), (1, 4)],
    &[(-1, 8), (3, 8), (-3, 8), (1, 8)],
    &[(1, 16), (-1, 4), (3, 8), (-1, 4), (1, 16)],
];

pub struct VerifyOptions {
    pub max_n: Option<usize>,
    pub work_cap: u64,
}

impl Default for VerifyOptions {
    fn default() -> Self {
        VerifyOptions {
            max_n: None,
            work_cap: DEFAULT_WORK_CAP,
        }
    }
}

pub fn run_suite(suite: Suite, opts: &VerifyOptions) -> Result<SuiteReport, VerifyError> {
    let max_n = opts.max_n.unwrap_or_else(|| suite.default_max_n());
    let cap = opts.work_cap;
    Ok(match suite {
        Suite::Duality => duality(max_n, cap)?,
        Suite::ClosedFormsF3 => closed_forms_f3(max_n, cap)?,
        Suite::ClosedFormsF5 => closed_forms_f5(max_n, cap)?,
        Suite::K1 => k1(max_n, cap)?,
        Suite::Chebyshev => chebyshev(max_n),
        Suite::LemmaRec => lemma_rec(max_n),
        Suite::Lemma2x2F5 => lemma_2x2(),
        Suite::PartialFraction => partial_fraction(max_n),
        Suite::Subfield => subfield(max_n, cap)?,
        Suite::PositroidDual => positroid_dual(max_n, cap)?,
        Suite::ConjectureScan => conjecture_scan(max_n, cap)?,
    })
}

fn count_u(k: usize, n: usize, spec: &Arc<FieldSpec>, filter: Filter, cap: u64) -> Result<BigUint, GrassmannianError> {
    Ok(Enumerator::new(k, n, spec, filter)?.with_work_cap(cap).count()?.count)
}

fn to_int(x: &BigUint) -> BigInt {
    BigInt::from(x.clone())
}

/// `alt . perp` on every TNN point of `Gr_{k,n}(F_3)` and `Gr_{k,n}(F_5)`.
fn duality(max_n: usize, cap: u64) -> Result<SuiteReport, VerifyError> {
    let mut rep = SuiteReport::new(Suite::Duality, [0, max_n]);
    for p in [3u32, 5] {
        let spec = FieldSpec::new(p, 1)?;
        for n in 0..=max_n {
            for k in 0..=n {
                let pts = Enumerator::new(k, n, &spec, Filter::Tnn)?.with_work_cap(cap).collect()?;
                let mut images = Vec::with_capacity(pts.len());
                for v in &pts {
                    let d = v.dual();
                    rep.check(d.is_tnn(), || format!("F_{p} ({k},{n}): dual of {v:?} not TNN"));
                    rep.check(d.dual() == *v, || format!("F_{p} ({k},{n}): dual not an involution at {v:?}"));
                    rep.check(complementary(v, &d), || {
                        format!("F_{p} ({k},{n}): Plücker complementarity fails at {v:?}")
                    });
                    images.push(d);
                }
                images.sort_by(|a, b| a.matrix().codes().cmp(b.matrix().codes()));
                images.dedup();
                let other = count_u(n - k, n, &spec, Filter::Tnn, cap)?;
                rep.check(
                    images.len() == pts.len() && BigUint::from(pts.len()) == other,
                    || format!("F_{p} ({k},{n}): {} points, {} distinct images, {other} on the dual side", pts.len(), images.len()),
                );
            }
        }
    }
    Ok(rep.finish())
}

/// One scalar `c` with `Δ_I(dual) = c Δ_{[n]-I}(V)` for all `I`.
pub fn complementary(v: &crate::grassmannian::Subspace, d: &crate::grassmannian::Subspace) -> bool {
    let s = v.spec();
    let n = v.n();
    let pv = v.plucker();
    let pd = d.plucker();
    let mut ratio: Option<u32> = None;
    for (i, di) in &pd {
        let comp = i.complement(n);
        let vi = pv.iter().find(|(j, _)| *j == comp).map(|x| x.1).expect("complement is a k-subset");
        match (vi, *di) {
            (0, 0) => {}
            (0, _) | (_, 0) => return false,
            (a, b) => {
                let r = s.div(b, a).expect("nonzero");
                if *ratio.get_or_insert(r) != r {
                    return false;
                }
            }
        }
    }
    true
}

fn closed_forms_f3(max_n: usize, cap: u64) -> Result<SuiteReport, VerifyError> {
    let mut rep = SuiteReport::new(Suite::ClosedFormsF3, [2, 15.max(max_n)]);
    let f3 = FieldSpec::new(3, 1)?;
    for n in 2..=15.max(max_n) {
        let base = f3_k2(n, 1).expect("n >= 2");
        for v in 2..=6 {
            let x = f3_k2(n, v).expect("n >= 2");
            rep.check(x == base, || format!("n={n}: variant {v} gives {x}, variant 1 gives {base}"));
        }
        rep.check(lemma_tile_coeff(n - 2) == -base.clone(), || {
            format!("n={n}: tiling coefficient disagrees")
        });
        if n <= max_n {
            let e = to_int(&count_u(2, n, &f3, Filter::Tnn, cap)?);
            rep.check(e == base, || format!("n={n}: enumeration {e} vs formula {base}"));
        }
    }
    let prefix: Vec<BigInt> = (2..=6).map(|n| f3_k2(n, 3).unwrap()).collect();
    rep.check(prefix == [1, 7, 32, 120, 400].map(BigInt::from), || {
        format!("prefix {prefix:?}")
    });
    Ok(rep.finish())
}

fn closed_forms_f5(max_n: usize, cap: u64) -> Result<SuiteReport, VerifyError> {
    let mut rep = SuiteReport::new(Suite::ClosedFormsF5, [2, 15.max(max_n)]);
    let f5 = FieldSpec::new(5, 1)?;
    for n in 2..=15.max(max_n) {
        let base = f5_k2(n, 1).expect("n >= 2");
        for v in 2..=3 {
            let x = f5_k2(n, v).expect("n >= 2");
            rep.check(x == base, || format!("n={n}: variant {v} gives {x}, variant 1 gives {base}"));
        }
        if n <= max_n {
            let e = to_int(&count_u(2, n, &f5, Filter::Tnn, cap)?);
            rep.check(e == base, || format!("n={n}: enumeration {e} vs formula {base}"));
        }
    }
    rep.check(partial_fraction_check(20).is_none(), || "partial fractions".into());
    Ok(rep.finish())
}

fn k1(max_n: usize, cap: u64) -> Result<SuiteReport, VerifyError> {
    let mut rep = SuiteReport::new(Suite::K1, [1, max_n]);
    for (p, r) in [(3, 1), (5, 1), (7, 1), (3, 2), (13, 1)] {
        let spec = FieldSpec::new(p, r)?;
        let q = spec.order() as u64;
        for n in 1..=max_n {
            let nn = to_int(&count_u(1, n, &spec, Filter::Tnn, cap)?);
            let pp = to_int(&count_u(1, n, &spec, Filter::Tp, cap)?);
            let fn_ = k1_nonneg(q, n).unwrap();
            let fp = k1_pos(q, n).unwrap();
            rep.check(nn == fn_, || format!("q={q} n={n}: TNN enumeration {nn} vs {fn_}"));
            rep.check(pp == fp, || format!("q={q} n={n}: TP enumeration {pp} vs {fp}"));
        }
    }
    for (idx, n) in (2..=5).enumerate() {
        let expected = Polynomial::from_ratios(REFERENCE_K1_NONNEG[idx]);
        let a = k1_nonneg_poly(n);
        let b = k1_nonneg_poly_binomial(n);
        rep.check(a == expected && b == expected, || {
            format!("n={n}: nonneg polynomial {a} / {b} vs reference {expected}")
        });
        let expected = Polynomial::from_ratios(REFERENCE_K1_POS[idx]);
        let a = k1_pos_poly(n);
        let b = k1_pos_poly_binomial(n);
        rep.check(a == expected && b == expected, || {
            format!("n={n}: positive polynomial {a} / {b} vs reference {expected}")
        });
    }
    Ok(rep.finish())
}

fn chebyshev(max_n: usize) -> SuiteReport {
    let mut rep = SuiteReport::new(Suite::Chebyshev, [0, max_n]);
    for n in 0..=max_n {
        let rec = chebyshev_poly(n);
        match chebyshev_via_tilings(n) {
            Ok(t) => rep.check(t == rec, || format!("n={n}: tilings {t} vs recurrence {rec}")),
            Err(e) => rep.check(false, || format!("n={n}: {e}")),
        }
        if let Ok(ts) = tilings(n) {
            rep.check(BigInt::from(ts.len()) == fibonacci(n + 1), || {
                format!("n={n}: {} tilings", ts.len())
            });
        }
    }
    rep.check(chebyshev_poly(4) == Polynomial::from_ints(&[1, 0, -8, 0, 8]), || {
        "T_4".into()
    });
    for n in 0..=14 {
        let lhs = lemma_tile_coeff(n);
        let rhs = chebyshev_poly(n + 6).coeff(n);
        rep.check(rhs.is_integer() && rhs.to_integer() == lhs, || {
            format!("[x^{n}]T_{} = {rhs}, formula {lhs}", n + 6)
        });
    }
    rep.finish()
}

fn lemma_rec(max_n: usize) -> SuiteReport {
    let mut rep = SuiteReport::new(Suite::LemmaRec, [0, max_n]);
    let r = lemma_rec_check(max_n);
    rep.check(r.initial_ok, || format!("initial values {:?}", r.initial));
    rep.check(r.first_failure.is_none(), || {
        format!("recurrence fails at n={}", r.first_failure.unwrap())
    });
    for n in 2..=max_n.max(2) {
        let a = crate::closed_forms::rec_sequence(n - 2);
        let f = f3_k2(n, 3).unwrap();
        rep.check(a == f, || format!("a_{} = {a} but the count at n={n} is {f}", n - 2));
    }
    rep.finish()
}

fn lemma_2x2() -> SuiteReport {
    let mut rep = SuiteReport::new(Suite::Lemma2x2F5, [0, 0]);
    for row in lemma_2x2_f5_check() {
        rep.notes.push(format!(
            "a={} b={} c={} d={} ad-bc={} nonneg={} same={} opposite={}",
            row.a, row.b, row.c, row.d, row.det, row.det_nonneg, row.same, row.opposite
        ));
        rep.check(row.consistent, || format!("{row:?}"));
    }
    rep.finish()
}

fn partial_fraction(max_m: usize) -> SuiteReport {
    let mut rep = SuiteReport::new(Suite::PartialFraction, [0, max_m]);
    let first = partial_fraction_check(max_m);
    rep.check(first.is_none(), || format!("mismatch at x^{}", first.unwrap()));
    rep.finish()
}

/// Lift `Gr_{2,n}(F_3)` into `Gr^{>=0}_{2,n}(F_9)`.
fn subfield(max_n: usize, cap: u64) -> Result<SuiteReport, VerifyError> {
    let mut rep = SuiteReport::new(Suite::Subfield, [2, max_n]);
    let f3 = FieldSpec::new(3, 1)?;
    let f9 = FieldSpec::new(3, 2)?;
    let lifter = SubfieldLift::new(&f3, &f9)?;
    for n in 2..=max_n {
        for k in 0..=n {
            let pts = Enumerator::new(k, n, &f3, Filter::All)?.with_work_cap(cap).collect()?;
            rep.check(BigUint::from(pts.len()) == gaussian_binomial(n, k, 3), || {
                format!("({k},{n}): {} points", pts.len())
            });
            let mut lifted: Vec<_> = pts.iter().map(|v| lifter.lift(v)).collect();
            for (v, l) in pts.iter().zip(&lifted) {
                rep.check(l.is_tnn(), || format!("({k},{n}): lift of {v:?} not TNN"));
                rep.check(matroid_of(l) == matroid_of(v), || format!("({k},{n}): matroid changed"));
            }
            lifted.sort_by(|a, b| a.matrix().codes().cmp(b.matrix().codes()));
            lifted.dedup();
            rep.check(lifted.len() == pts.len(), || format!("({k},{n}): lift not injective"));
        }
    }
    Ok(rep.finish())
}

/// The dual of every positroid is a positroid.
fn positroid_dual(max_n: usize, cap: u64) -> Result<SuiteReport, VerifyError> {
    let mut rep = SuiteReport::new(Suite::PositroidDual, [1, max_n]);
    let f3 = FieldSpec::new(3, 1)?;
    for n in 1..=max_n {
        for k in 0..=n {
            let ps = positroids(k, n, &f3, cap)?;
            let duals = positroids(n - k, n, &f3, cap)?;
            for m in &ps {
                let d = m.dual();
                rep.check(duals.contains(&d), || format!("({k},{n}): dual of {m:?} is not a positroid"));
            }
        }
    }
    Ok(rep.finish())
}

#[derive(Debug, Clone, Serialize)]
pub struct ScanRow {
    pub q: u32,
    pub n: usize,
    pub row: Vec<String>,
    pub shape: SequenceShape,
}

impl ScanRow {
    pub fn new(q: u32, n: usize, row: &[BigUint]) -> Self {
        ScanRow {
            q,
            n,
            row: row.iter().map(|c| c.to_string()).collect(),
            shape: sequence_checks(row),
        }
    }

    pub fn flagged(&self) -> bool {
        !(self.shape.unimodal && self.shape.log_concave)
    }
}

/// Shapes of the rows of TNN count tables. Never fails on a flagged row.
pub fn scan_rows(fields: &[(u32, u32, usize)], cap: u64) -> Result<Vec<ScanRow>, VerifyError> {
    let mut out = Vec::new();
    for &(p, r, max_n) in fields {
        let spec = FieldSpec::new(p, r)?;
        let t = CountTable::compute(&spec, max_n, Filter::Tnn, cap)?;
        for n in 0..=max_n {
            out.push(ScanRow::new(spec.order(), n, t.row(n)));
        }
    }
    Ok(out)
}

fn conjecture_scan(max_n: usize, cap: u64) -> Result<SuiteReport, VerifyError> {
    let fields = [(3, 1, max_n), (5, 1, max_n.min(5)), (7, 1, max_n.min(5))];
    Ok(scan_report(&scan_rows(&fields, cap)?, [0, max_n]))
}

/// Report for a conjecture scan. Rows that are not unimodal or not
/// log-concave are flagged in the notes; only a non-palindromic row fails.
pub fn scan_report(rows: &[ScanRow], n_range: [usize; 2]) -> SuiteReport {
    let mut rep = SuiteReport::new(Suite::ConjectureScan, n_range);
    for row in rows {
        rep.checks += 1;
        let flag = if row.flagged() { "  <-- not unimodal/log-concave" } else { "" };
        rep.notes.push(format!(
            "q={} n={}: {} palindromic={} unimodal={} log_concave={}{flag}",
            row.q,
            row.n,
            row.row.join(","),
            row.shape.palindromic,
            row.shape.unimodal,
            row.shape.log_concave
        ));
        if !row.shape.palindromic {
            rep.failures.push(format!("q={} n={}: row not palindromic", row.q, row.n));
        }
    }
    rep.finish()
}
