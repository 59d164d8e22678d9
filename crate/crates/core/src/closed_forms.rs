//! Closed forms, recurrences, generating functions and tiling sums for the
//! point counts `|Gr^{>=0}_{1,n}(F_q)|`, `|Gr^{>0}_{1,n}(F_q)|` and
//! `|Gr^{>=0}_{2,n}(F_3)|`, `|Gr^{>=0}_{2,n}(F_5)|`.
//!
//! Each variant of a count is computed from its own formula. None of them
//! share intermediate code, so agreement between them actually means something.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::Serialize;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ClosedFormError {
    #[error("n = {n} is below the minimum {min}")]
    NTooSmall { n: usize, min: usize },
    #[error("unknown variant {variant} (valid: 1..={max})")]
    UnknownVariant { variant: u8, max: u8 },
    #[error("formula needs odd q, got {0}")]
    EvenOrder(u64),
    #[error("denominator has zero constant term")]
    ZeroConstantTerm,
    #[error("tiling enumeration capped at n = {cap}, got {n}")]
    TilingCap { n: usize, cap: usize },
    #[error("expected an integer, got {0}")]
    NotIntegral(String),
}

fn rat(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

fn pow2(e: i64) -> BigRational {
    let two = BigRational::from_integer(BigInt::from(2));
    if e >= 0 {
        num_traits::pow(two, e as usize)
    } else {
        num_traits::pow(two.recip(), (-e) as usize)
    }
}

fn integral(x: BigRational) -> Result<BigInt, ClosedFormError> {
    if x.is_integer() {
        Ok(x.to_integer())
    } else {
        Err(ClosedFormError::NotIntegral(x.to_string()))
    }
}

fn binom(n: i64, k: i64) -> BigInt {
    if k < 0 || n < k {
        return BigInt::zero();
    }
    let mut acc = BigInt::one();
    for i in 0..k {
        acc = acc * BigInt::from(n - i) / BigInt::from(i + 1);
    }
    acc
}

/// Dense univariate polynomial with exact rational coefficients, constant term first.
#[derive(Clone, PartialEq, Eq, Default)]
pub struct Polynomial {
    coeffs: Vec<BigRational>,
}

impl fmt::Debug for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.coeffs.iter().map(|c| c.to_string()).collect();
        write!(f, "[{}]", parts.join(", "))
    }
}

impl fmt::Display for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let sign = if c.is_negative() { "-" } else { "+" };
            if first {
                if c.is_negative() {
                    f.write_str("-")?;
                }
            } else {
                write!(f, " {sign} ")?;
            }
            first = false;
            let a = c.abs();
            let show_coeff = i == 0 || !a.is_one();
            if show_coeff {
                write!(f, "{a}")?;
            }
            match i {
                0 => {}
                1 => f.write_str("x")?,
                _ => write!(f, "x^{i}")?,
            }
        }
        Ok(())
    }
}

impl Polynomial {
    pub fn new(coeffs: Vec<BigRational>) -> Self {
        let mut p = Polynomial { coeffs };
        p.trim();
        p
    }

    pub fn from_ints(coeffs: &[i64]) -> Self {
        Self::new(coeffs.iter().map(|&c| rat(c)).collect())
    }

    /// From `(numerator, denominator)` pairs, constant term first.
    pub fn from_ratios(coeffs: &[(i64, i64)]) -> Self {
        Self::new(
            coeffs
                .iter()
                .map(|&(a, b)| BigRational::new(BigInt::from(a), BigInt::from(b)))
                .collect(),
        )
    }

    pub fn zero() -> Self {
        Polynomial::default()
    }

    pub fn one() -> Self {
        Self::from_ints(&[1])
    }

    pub fn x() -> Self {
        Self::from_ints(&[0, 1])
    }

    pub fn constant(c: BigRational) -> Self {
        Self::new(vec![c])
    }

    fn trim(&mut self) {
        while self.coeffs.last().is_some_and(|c| c.is_zero()) {
            self.coeffs.pop();
        }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn coeff(&self, i: usize) -> BigRational {
        self.coeffs.get(i).cloned().unwrap_or_else(BigRational::zero)
    }

    pub fn coeffs(&self) -> &[BigRational] {
        &self.coeffs
    }

    /// Integer coefficients, if all coefficients are integers.
    pub fn int_coeffs(&self) -> Option<Vec<BigInt>> {
        self.coeffs
            .iter()
            .map(|c| c.is_integer().then(|| c.to_integer()))
            .collect()
    }

    pub fn scale(&self, c: &BigRational) -> Self {
        Self::new(self.coeffs.iter().map(|x| x * c).collect())
    }

    pub fn pow(&self, e: usize) -> Self {
        (0..e).fold(Self::one(), |acc, _| &acc * self)
    }

    pub fn eval(&self, at: &BigRational) -> BigRational {
        self.coeffs
            .iter()
            .rev()
            .fold(BigRational::zero(), |acc, c| acc * at + c)
    }

    /// Constant-first coefficients rendered as strings (`"5/8"`).
    pub fn coeff_strings(&self) -> Vec<String> {
        self.coeffs.iter().map(|c| c.to_string()).collect()
    }
}

impl Add for &Polynomial {
    type Output = Polynomial;
    fn add(self, rhs: &Polynomial) -> Polynomial {
        let len = self.coeffs.len().max(rhs.coeffs.len());
        Polynomial::new((0..len).map(|i| self.coeff(i) + rhs.coeff(i)).collect())
    }
}

impl Sub for &Polynomial {
    type Output = Polynomial;
    fn sub(self, rhs: &Polynomial) -> Polynomial {
        let len = self.coeffs.len().max(rhs.coeffs.len());
        Polynomial::new((0..len).map(|i| self.coeff(i) - rhs.coeff(i)).collect())
    }
}

impl Mul for &Polynomial {
    type Output = Polynomial;
    fn mul(self, rhs: &Polynomial) -> Polynomial {
        if self.is_zero() || rhs.is_zero() {
            return Polynomial::zero();
        }
        let mut out = vec![BigRational::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in rhs.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        Polynomial::new(out)
    }
}

impl Neg for &Polynomial {
    type Output = Polynomial;
    fn neg(self) -> Polynomial {
        Polynomial::new(self.coeffs.iter().map(|c| -c).collect())
    }
}

fn check_odd(q: u64) -> Result<(), ClosedFormError> {
    if q.is_multiple_of(2) {
        Err(ClosedFormError::EvenOrder(q))
    } else {
        Ok(())
    }
}

/// `sum_{i=0}^{n-1} ((q+1)/2)^i`.
pub fn k1_nonneg(q: u64, n: usize) -> Result<BigInt, ClosedFormError> {
    check_odd(q)?;
    if n < 1 {
        return Err(ClosedFormError::NTooSmall { n, min: 1 });
    }
    let half = BigInt::from(q.div_ceil(2));
    Ok((0..n).map(|i| num_traits::pow(half.clone(), i)).sum())
}

/// `((q-1)/2)^(n-1)`.
pub fn k1_pos(q: u64, n: usize) -> Result<BigInt, ClosedFormError> {
    check_odd(q)?;
    if n < 1 {
        return Err(ClosedFormError::NTooSmall { n, min: 1 });
    }
    Ok(num_traits::pow(BigInt::from((q - 1) / 2), n - 1))
}

/// `sum_i ((q+1)/2)^i` expanded as a polynomial in `q`.
pub fn k1_nonneg_poly(n: usize) -> Polynomial {
    let half = Polynomial::from_ratios(&[(1, 2), (1, 2)]);
    (0..n).fold(Polynomial::zero(), |acc, i| &acc + &half.pow(i))
}

/// The same count from the double sum `sum_i sum_{j>=i} C(j,i)/2^j q^i`.
pub fn k1_nonneg_poly_binomial(n: usize) -> Polynomial {
    let coeffs = (0..n as i64)
        .map(|i| {
            (i..n as i64)
                .map(|j| BigRational::from_integer(binom(j, i)) * pow2(-j))
                .fold(BigRational::zero(), |a, b| a + b)
        })
        .collect();
    Polynomial::new(coeffs)
}

/// `((q-1)/2)^(n-1)` expanded as a polynomial in `q`.
pub fn k1_pos_poly(n: usize) -> Polynomial {
    Polynomial::from_ratios(&[(-1, 2), (1, 2)]).pow(n.saturating_sub(1))
}

/// `2^{-(n-1)} sum_i (-1)^{n-1-i} C(n-1,i) q^i`.
pub fn k1_pos_poly_binomial(n: usize) -> Polynomial {
    let m = n.saturating_sub(1) as i64;
    let coeffs = (0..=m)
        .map(|i| {
            let sign = if (m - i) % 2 == 0 { 1 } else { -1 };
            BigRational::from_integer(binom(m, i) * sign) * pow2(-m)
        })
        .collect();
    Polynomial::new(coeffs)
}

fn check_n2(n: usize) -> Result<(), ClosedFormError> {
    if n < 2 {
        Err(ClosedFormError::NTooSmall { n, min: 2 })
    } else {
        Ok(())
    }
}

/// `|Gr^{>=0}_{2,n}(F_3)|` by one of six independent formulas.
pub fn f3_k2(n: usize, variant: u8) -> Result<BigInt, ClosedFormError> {
    check_n2(n)?;
    match variant {
        1 => Ok(f3_k2_nested_sums(n)),
        2 => Ok(f3_k2_binomial_sums(n)),
        3 => f3_k2_closed(n),
        4 => f3_k2_series(n),
        5 => f3_k2_chebyshev(n),
        6 => f3_k2_bivariate(n),
        v => Err(ClosedFormError::UnknownVariant { variant: v, max: 6 }),
    }
}

/// Sums over pivot pair `i<j` and the boundary columns `l<m`.
fn f3_k2_nested_sums(n: usize) -> BigInt {
    let n = n as i64;
    let p2 = |e: i64| BigInt::one() << (e as usize);
    let mut total = BigInt::zero();
    for i in 1..=n {
        for j in i + 1..=n {
            total += p2(n - i - 1);
            for l in j + 1..=n {
                total += BigInt::from(2) * p2(n - i - 2);
                for _m in l + 1..=n {
                    total += p2(n - i - 3);
                }
            }
        }
    }
    total
}

fn f3_k2_binomial_sums(n: usize) -> BigInt {
    let n = n as i64;
    let p2 = |e: i64| BigInt::one() << (e as usize);
    let mut total = BigInt::zero();
    for i in 1..=n {
        let r = n - i;
        if r >= 3 {
            total += p2(r - 3) * binom(r, 3);
        }
        if r >= 2 {
            total += p2(r - 1) * binom(r, 2);
        }
        if r >= 1 {
            total += p2(r - 1) * binom(r, 1);
        }
    }
    total
}

/// `2^{n-4} (n-1) n (n+4) / 3`.
fn f3_k2_closed(n: usize) -> Result<BigInt, ClosedFormError> {
    let n = n as i64;
    integral(pow2(n - 4) * rat((n - 1) * n * (n + 4)) / rat(3))
}

/// `[x^{n-2}] (1-x)/(1-2x)^4`.
fn f3_k2_series(n: usize) -> Result<BigInt, ClosedFormError> {
    let num = Polynomial::from_ints(&[1, -1]);
    let den = Polynomial::from_ints(&[1, -2]).pow(4);
    integral(series_coeff(&num, &den, n - 2)?)
}

/// `[x^{n-2}] (-T_{n+4}(x))`.
fn f3_k2_chebyshev(n: usize) -> Result<BigInt, ClosedFormError> {
    integral(-chebyshev_poly(n + 4).coeff(n - 2))
}

/// Coefficient of `x^{n-2} t^{n+4}` in `(1-tx)/(1-2tx+t^2)`, negated.
///
/// The rational function is the ordinary generating function of `T_j(x)`,
/// so the raw coefficient is `[x^{n-2}] T_{n+4}`, which is minus the count.
fn f3_k2_bivariate(n: usize) -> Result<BigInt, ClosedFormError> {
    let x = Polynomial::x();
    let numerator = vec![Polynomial::one(), -&x];
    let denominator = vec![
        Polynomial::one(),
        x.scale(&rat(-2)),
        Polynomial::one(),
    ];
    let series = bivariate_series(&numerator, &denominator, n + 4);
    integral(-series[n + 4].coeff(n - 2))
}

/// Power series in `t` with polynomial-in-`x` coefficients, up to `t^order`.
/// The `t^0` coefficient of the denominator must be the constant 1.
fn bivariate_series(num: &[Polynomial], den: &[Polynomial], order: usize) -> Vec<Polynomial> {
    assert_eq!(den[0], Polynomial::one());
    let mut out: Vec<Polynomial> = Vec::with_capacity(order + 1);
    for j in 0..=order {
        let mut c = num.get(j).cloned().unwrap_or_default();
        for (i, d) in den.iter().enumerate().skip(1) {
            if i <= j {
                c = &c - &(d * &out[j - i]);
            }
        }
        out.push(c);
    }
    out
}

/// `|Gr^{>=0}_{2,n}(F_5)|` by one of three independent formulas.
pub fn f5_k2(n: usize, variant: u8) -> Result<BigInt, ClosedFormError> {
    check_n2(n)?;
    match variant {
        1 => Ok(f5_k2_sums(n)),
        2 => f5_k2_closed(n),
        3 => f5_k2_series(n),
        v => Err(ClosedFormError::UnknownVariant { variant: v, max: 3 }),
    }
}

fn f5_k2_sums(n: usize) -> BigInt {
    let pw = |b: u32, e: usize| num_traits::pow(BigInt::from(b), e);
    let mut total = BigInt::zero();
    for i in 1..=n {
        for j in i + 1..=n {
            total += pw(3, j - i - 1) * pw(5, n - j);
            for l in j + 1..=n {
                total += BigInt::from(4) * pw(3, j - i - 1) * pw(5, l - j - 1) * pw(7, n - l);
            }
        }
    }
    total
}

/// `(2*7^n - 3*5^n + 1) / 24`.
fn f5_k2_closed(n: usize) -> Result<BigInt, ClosedFormError> {
    let v = BigInt::from(2) * num_traits::pow(BigInt::from(7), n)
        - BigInt::from(3) * num_traits::pow(BigInt::from(5), n)
        + BigInt::one();
    let (quot, rem) = v.div_rem(&BigInt::from(24));
    if rem.is_zero() {
        Ok(quot)
    } else {
        Err(ClosedFormError::NotIntegral(format!("{v}/24")))
    }
}

/// `[x^{n-2}] 1/((1-x)(1-5x)(1-7x))`.
fn f5_k2_series(n: usize) -> Result<BigInt, ClosedFormError> {
    integral(series_coeff(&Polynomial::one(), &f5_denominator(), n - 2)?)
}

pub fn f5_denominator() -> Polynomial {
    &(&Polynomial::from_ints(&[1, -1]) * &Polynomial::from_ints(&[1, -5]))
        * &Polynomial::from_ints(&[1, -7])
}

/// Coefficients `[x^0..=x^m]` of the power series `num/den`.
pub fn series_coeffs(
    num: &Polynomial,
    den: &Polynomial,
    m: usize,
) -> Result<Vec<BigRational>, ClosedFormError> {
    let d0 = den.coeff(0);
    if d0.is_zero() {
        return Err(ClosedFormError::ZeroConstantTerm);
    }
    let mut c: Vec<BigRational> = Vec::with_capacity(m + 1);
    for i in 0..=m {
        let mut v = num.coeff(i);
        for j in 1..=i.min(den.degree().unwrap_or(0)) {
            v -= den.coeff(j) * &c[i - j];
        }
        c.push(v / &d0);
    }
    Ok(c)
}

/// `[x^m] num/den` as a formal power series.
pub fn series_coeff(
    num: &Polynomial,
    den: &Polynomial,
    m: usize,
) -> Result<BigRational, ClosedFormError> {
    Ok(series_coeffs(num, den, m)?.pop().expect("m + 1 coefficients"))
}

/// Chebyshev polynomial of the first kind via `T_{n+1} = 2x T_n - T_{n-1}`.
pub fn chebyshev_poly(n: usize) -> Polynomial {
    let two_x = Polynomial::from_ints(&[0, 2]);
    let (mut prev, mut cur) = (Polynomial::one(), Polynomial::x());
    if n == 0 {
        return prev;
    }
    for _ in 1..n {
        let next = &(&two_x * &cur) - &prev;
        prev = cur;
        cur = next;
    }
    cur
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Piece {
    Square,
    Domino,
}

impl Piece {
    pub fn len(self) -> usize {
        match self {
            Piece::Square => 1,
            Piece::Domino => 2,
        }
    }
}

/// Cover of a `1 x n` strip by squares and dominoes, left to right.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Tiling {
    pub pieces: Vec<Piece>,
}

impl Tiling {
    pub fn len(&self) -> usize {
        self.pieces.iter().map(|p| p.len()).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.pieces.is_empty()
    }

    /// `-1` per domino, `x` for a square in the first cell, `2x` for any other square.
    pub fn weight(&self) -> Polynomial {
        let mut coeff = BigInt::one();
        let mut squares = 0usize;
        let mut pos = 0usize;
        for p in &self.pieces {
            match p {
                Piece::Domino => coeff = -coeff,
                Piece::Square => {
                    squares += 1;
                    if pos != 0 {
                        coeff *= 2;
                    }
                }
            }
            pos += p.len();
        }
        let mut coeffs = vec![BigRational::zero(); squares + 1];
        coeffs[squares] = BigRational::from_integer(coeff);
        Polynomial::new(coeffs)
    }
}

pub const TILING_CAP: usize = 30;

/// All tilings of a `1 x n` strip.
pub fn tilings(n: usize) -> Result<Vec<Tiling>, ClosedFormError> {
    if n > TILING_CAP {
        return Err(ClosedFormError::TilingCap { n, cap: TILING_CAP });
    }
    fn go(rest: usize, cur: &mut Vec<Piece>, out: &mut Vec<Tiling>) {
        if rest == 0 {
            out.push(Tiling {
                pieces: cur.clone(),
            });
            return;
        }
        cur.push(Piece::Square);
        go(rest - 1, cur, out);
        cur.pop();
        if rest >= 2 {
            cur.push(Piece::Domino);
            go(rest - 2, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(n, &mut Vec::new(), &mut out);
    Ok(out)
}

/// `T_n(x)` as the sum of tiling weights.
pub fn chebyshev_via_tilings(n: usize) -> Result<Polynomial, ClosedFormError> {
    Ok(tilings(n)?
        .iter()
        .fold(Polynomial::zero(), |acc, t| &acc + &t.weight()))
}

/// `f_1 = f_2 = 1`.
pub fn fibonacci(n: usize) -> BigInt {
    let (mut a, mut b) = (BigInt::zero(), BigInt::one());
    for _ in 0..n {
        let c = &a + &b;
        a = b;
        b = c;
    }
    a
}

/// `-2^{n-2} (n+1)(n+2)(n+6) / 3`, the `x^n` coefficient of `T_{n+6}`.
pub fn lemma_tile_coeff(n: usize) -> BigInt {
    let n = n as i64;
    integral(-pow2(n - 2) * rat((n + 1) * (n + 2) * (n + 6)) / rat(3))
        .expect("the expression is integral for n >= 0")
}

/// `a_n = 2^{n-2} (n+1)(n+2)(n+6) / 3`.
pub fn rec_sequence(n: usize) -> BigInt {
    let n = n as i64;
    integral(pow2(n - 2) * rat((n + 1) * (n + 2) * (n + 6)) / rat(3))
        .expect("the expression is integral for n >= 0")
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct RecurrenceReport {
    pub initial: Vec<String>,
    pub initial_ok: bool,
    pub max_n: usize,
    /// First `n >= 4` where `a_n - 8a_{n-1} + 24a_{n-2} - 32a_{n-3} + 16a_{n-4} != 0`.
    pub first_failure: Option<usize>,
}

impl RecurrenceReport {
    pub fn passed(&self) -> bool {
        self.initial_ok && self.first_failure.is_none()
    }
}

pub fn lemma_rec_check(max_n: usize) -> RecurrenceReport {
    let a: Vec<BigInt> = (0..=max_n.max(3)).map(rec_sequence).collect();
    let expected = [1, 7, 32, 120].map(BigInt::from);
    let initial_ok = a[..4] == expected;
    let first_failure = (4..=max_n).find(|&n| {
        let v = &a[n] - BigInt::from(8) * &a[n - 1] + BigInt::from(24) * &a[n - 2]
            - BigInt::from(32) * &a[n - 3]
            + BigInt::from(16) * &a[n - 4];
        !v.is_zero()
    });
    RecurrenceReport {
        initial: a[..4].iter().map(|x| x.to_string()).collect(),
        initial_ok,
        max_n,
        first_failure,
    }
}

/// One row of the exhaustive `ad - bc` table over `F_5^{>0} = {1, 4}`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TwoByTwoRow {
    pub a: u32,
    pub b: u32,
    pub c: u32,
    pub d: u32,
    /// `ad - bc` reduced mod 5.
    pub det: u32,
    pub det_nonneg: bool,
    /// `a = c` and `b = d`
    pub same: bool,
    /// `a = -c` and `b = -d`
    pub opposite: bool,
    /// `det_nonneg == (same || opposite)`
    pub consistent: bool,
}

pub fn lemma_2x2_f5_check() -> Vec<TwoByTwoRow> {
    // squares mod 5
    let nonneg = |x: u32| matches!(x, 0 | 1 | 4);
    let neg = |x: u32| (5 - x) % 5;
    let pos = [1u32, 4];
    let mut rows = Vec::with_capacity(16);
    for &a in &pos {
        for &b in &pos {
            for &c in &pos {
                for &d in &pos {
                    let det = (a * d + 5 * 5 - b * c) % 5;
                    let same = a == c && b == d;
                    let opposite = a == neg(c) && b == neg(d);
                    let det_nonneg = nonneg(det);
                    rows.push(TwoByTwoRow {
                        a,
                        b,
                        c,
                        d,
                        det,
                        det_nonneg,
                        same,
                        opposite,
                        consistent: det_nonneg == (same || opposite),
                    });
                }
            }
        }
    }
    rows
}

/// Compare `[x^m] 1/((1-x)(1-5x)(1-7x))` with
/// `49/12 * 7^m - 25/8 * 5^m + 1/24` for `m = 0..=max_m`.
/// Returns the first mismatching `m`.
pub fn partial_fraction_check(max_m: usize) -> Option<usize> {
    let series = series_coeffs(&Polynomial::one(), &f5_denominator(), max_m)
        .expect("constant term is 1");
    (0..=max_m).find(|&m| {
        let r = |a: i64, b: i64| BigRational::new(BigInt::from(a), BigInt::from(b));
        let pf = r(49, 12) * BigRational::from_integer(num_traits::pow(BigInt::from(7), m))
            - r(25, 8) * BigRational::from_integer(num_traits::pow(BigInt::from(5), m))
            + r(1, 24);
        pf != series[m]
    })
}

/// Convenience for callers that want machine integers.
pub fn to_u64(x: &BigInt) -> Option<u64> {
    x.to_u64()
}
