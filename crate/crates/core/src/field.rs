//! Exact arithmetic in `F_{p^r}` together with the square-based sign structure.
//!
//! Elements are carried around as `u32` codes. A code packs the coefficient
//! vector `(c_0, .., c_{r-1})` of the residue class `c_0 + c_1 x + .. + c_{r-1} x^{r-1}`
//! as `c_0 + c_1 p + .. + c_{r-1} p^{r-1}`, so the prime subfield is exactly the
//! codes `0..p` and the canonical element order is the numeric order of codes.
//!
//! An element is *positive* when it is a nonzero square and *negative* when it
//! is not a square at all. In characteristic two every element is a square.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::Arc;

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Largest field order accepted by [`FieldSpec::new`].
pub const DEFAULT_ORDER_CAP: u64 = 1 << 20;

/// Fields up to this order use exp/log/Zech tables for arithmetic.
pub const TABLE_ORDER_LIMIT: u32 = 1 << 16;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum FieldError {
    #[error("{0} is not a prime")]
    NotPrime(u64),
    #[error("extension degree must be at least 1")]
    ZeroDegree,
    #[error("field order {p}^{r} exceeds the cap {cap}")]
    OrderTooLarge { p: u64, r: u32, cap: u64 },
    #[error("modulus {0:?} is not a monic polynomial of degree >= 1 with coefficients below p")]
    MalformedModulus(Vec<u32>),
    #[error("modulus {0:?} is reducible over F_p")]
    ReducibleModulus(Vec<u32>),
    #[error("division by zero")]
    DivisionByZero,
    #[error("operands belong to different fields")]
    MismatchedFields,
    #[error("F_{{{p}^{r}}} is not a subfield of F_{{{target_p}^{s}}}")]
    NotASubfield { p: u32, r: u32, target_p: u32, s: u32 },
    #[error("element code {code} out of range for a field of order {q}")]
    CodeOutOfRange { code: u64, q: u32 },
    #[error("cannot read a field element from {0}")]
    MalformedElement(String),
}

/// Sign class of a field element.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Sign {
    Negative,
    Zero,
    Positive,
}

impl Sign {
    #[inline]
    pub fn is_nonnegative(self) -> bool {
        self != Sign::Negative
    }

    #[inline]
    pub fn is_positive(self) -> bool {
        self == Sign::Positive
    }
}

#[derive(Debug, Clone)]
enum Backend {
    /// r = 1: plain modular arithmetic.
    Prime,
    /// exp/log tables plus Zech logarithms `zech[d] = log(1 + g^d)`.
    Tables {
        exp: Vec<u32>,
        log: Vec<u32>,
        zech: Vec<u32>,
    },
    /// Schoolbook polynomial arithmetic modulo the defining polynomial.
    Poly,
}

const NO_LOG: u32 = u32::MAX;

/// A finite field `F_{p^r}` with its defining modulus and sign table.
#[derive(Clone)]
pub struct FieldSpec {
    p: u32,
    r: u32,
    q: u32,
    modulus: Vec<u32>,
    primitive_root: u32,
    signs: Vec<Sign>,
    backend: Backend,
}

impl fmt::Debug for FieldSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("FieldSpec")
            .field("p", &self.p)
            .field("r", &self.r)
            .field("modulus", &self.modulus)
            .finish()
    }
}

impl PartialEq for FieldSpec {
    fn eq(&self, other: &Self) -> bool {
        self.p == other.p && self.r == other.r && self.modulus == other.modulus
    }
}

impl Eq for FieldSpec {}

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2u64;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

fn prime_factors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut d = 2u64;
    while d * d <= n {
        if n.is_multiple_of(d) {
            out.push(d);
            while n.is_multiple_of(d) {
                n /= d;
            }
        }
        d += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

// Polynomials over F_p, constant-first, not necessarily trimmed.
mod fp_poly {
    pub fn trim(mut a: Vec<u32>) -> Vec<u32> {
        while a.last() == Some(&0) {
            a.pop();
        }
        a
    }

    pub fn mul(a: &[u32], b: &[u32], p: u32) -> Vec<u32> {
        if a.is_empty() || b.is_empty() {
            return Vec::new();
        }
        let mut out = vec![0u64; a.len() + b.len() - 1];
        for (i, &x) in a.iter().enumerate() {
            if x == 0 {
                continue;
            }
            for (j, &y) in b.iter().enumerate() {
                out[i + j] = (out[i + j] + x as u64 * y as u64) % p as u64;
            }
        }
        trim(out.into_iter().map(|c| c as u32).collect())
    }

    /// Remainder of `a` modulo a monic `m`.
    pub fn rem_monic(a: &[u32], m: &[u32], p: u32) -> Vec<u32> {
        let mut a = trim(a.to_vec());
        let dm = m.len() - 1;
        while a.len() > dm {
            let lead = *a.last().unwrap() as u64;
            let shift = a.len() - 1 - dm;
            for (i, &c) in m.iter().enumerate() {
                let sub = lead * c as u64 % p as u64;
                let idx = shift + i;
                a[idx] = ((a[idx] as u64 + p as u64 - sub) % p as u64) as u32;
            }
            a = trim(a);
        }
        a
    }
}

fn digits_of(code: u32, p: u32, r: u32) -> Vec<u32> {
    let mut c = code;
    (0..r)
        .map(|_| {
            let d = c % p;
            c /= p;
            d
        })
        .collect()
}

fn code_of(digits: &[u32], p: u32) -> u32 {
    digits.iter().rev().fold(0u32, |acc, &d| acc * p + d)
}

/// Monic polynomials of the given degree in the modulus search order:
/// coefficient vectors compared lexicographically from the constant term up.
fn monic_candidates(p: u32, degree: u32) -> impl Iterator<Item = Vec<u32>> {
    let count = (p as u64).pow(degree);
    (0..count).map(move |idx| {
        // The constant term is the most significant digit of idx.
        let mut lower = vec![0u32; degree as usize];
        let mut rest = idx;
        for slot in lower.iter_mut().rev() {
            *slot = (rest % p as u64) as u32;
            rest /= p as u64;
        }
        lower.push(1);
        lower
    })
}

/// Trial division by every monic polynomial of degree `1..=deg/2`.
pub fn is_irreducible(modulus: &[u32], p: u32) -> bool {
    let deg = modulus.len() as u32 - 1;
    if deg == 0 {
        return false;
    }
    if deg == 1 {
        return true;
    }
    for d in 1..=deg / 2 {
        for cand in monic_candidates(p, d) {
            if fp_poly::rem_monic(modulus, &cand, p).is_empty() {
                return false;
            }
        }
    }
    true
}

/// Smallest monic irreducible polynomial of degree `r` over `F_p`,
/// comparing coefficient vectors low-degree first.
pub fn smallest_irreducible(p: u32, r: u32) -> Vec<u32> {
    monic_candidates(p, r)
        .find(|m| is_irreducible(m, p))
        .expect("irreducible polynomials exist in every degree")
}

impl FieldSpec {
    /// `F_{p^r}` with the smallest monic irreducible modulus.
    pub fn new(p: u32, r: u32) -> Result<Arc<Self>, FieldError> {
        Self::new_capped(p, r, DEFAULT_ORDER_CAP)
    }

    pub fn new_capped(p: u32, r: u32, cap: u64) -> Result<Arc<Self>, FieldError> {
        Self::check_order(p, r, cap)?;
        Self::build(p, smallest_irreducible(p, r))
    }

    /// Field defined by an explicit monic irreducible modulus (constant-first).
    pub fn with_modulus(p: u32, modulus: Vec<u32>) -> Result<Arc<Self>, FieldError> {
        if modulus.len() < 2 {
            if modulus.len() == 1 {
                return Err(FieldError::ZeroDegree);
            }
            return Err(FieldError::MalformedModulus(modulus));
        }
        let r = modulus.len() as u32 - 1;
        Self::check_order(p, r, DEFAULT_ORDER_CAP)?;
        if *modulus.last().unwrap() != 1 || modulus.iter().any(|&c| c >= p) {
            return Err(FieldError::MalformedModulus(modulus));
        }
        if !is_irreducible(&modulus, p) {
            return Err(FieldError::ReducibleModulus(modulus));
        }
        Self::build(p, modulus)
    }

    fn check_order(p: u32, r: u32, cap: u64) -> Result<(), FieldError> {
        if !is_prime(p as u64) {
            return Err(FieldError::NotPrime(p as u64));
        }
        if r == 0 {
            return Err(FieldError::ZeroDegree);
        }
        match (p as u64).checked_pow(r) {
            Some(q) if q <= cap && q <= u32::MAX as u64 => Ok(()),
            _ => Err(FieldError::OrderTooLarge {
                p: p as u64,
                r,
                cap,
            }),
        }
    }

    fn build(p: u32, modulus: Vec<u32>) -> Result<Arc<Self>, FieldError> {
        let r = modulus.len() as u32 - 1;
        let q = p.pow(r);
        let mut spec = FieldSpec {
            p,
            r,
            q,
            modulus,
            primitive_root: 1,
            signs: Vec::new(),
            backend: if r == 1 { Backend::Prime } else { Backend::Poly },
        };

        let order = (q - 1) as u64;
        let factors = prime_factors(order);
        spec.primitive_root = (1..q)
            .find(|&g| factors.iter().all(|&l| spec.pow(g, order / l) != 1))
            .expect("the unit group is cyclic");

        if r > 1 && q <= TABLE_ORDER_LIMIT {
            let n = (q - 1) as usize;
            let mut exp = vec![0u32; n];
            let mut log = vec![NO_LOG; q as usize];
            let mut x = 1u32;
            for (i, slot) in exp.iter_mut().enumerate() {
                *slot = x;
                log[x as usize] = i as u32;
                x = spec.mul(x, spec.primitive_root);
            }
            let zech = exp
                .iter()
                .map(|&e| {
                    let s = spec.add(1, e);
                    if s == 0 {
                        NO_LOG
                    } else {
                        log[s as usize]
                    }
                })
                .collect();
            spec.backend = Backend::Tables { exp, log, zech };
        }

        let mut signs = vec![Sign::Negative; q as usize];
        signs[0] = Sign::Zero;
        for x in 1..q {
            signs[spec.mul(x, x) as usize] = Sign::Positive;
        }
        spec.signs = signs;
        Ok(Arc::new(spec))
    }

    #[inline]
    pub fn characteristic(&self) -> u32 {
        self.p
    }

    #[inline]
    pub fn degree(&self) -> u32 {
        self.r
    }

    #[inline]
    pub fn order(&self) -> u32 {
        self.q
    }

    /// Defining polynomial, constant term first.
    pub fn modulus(&self) -> &[u32] {
        &self.modulus
    }

    pub fn primitive_root_code(&self) -> u32 {
        self.primitive_root
    }

    pub fn primitive_root(self: &Arc<Self>) -> FieldElement {
        FieldElement::from_code(self, self.primitive_root)
    }

    /// Coefficient vector (constant first) of an element code.
    pub fn digits(&self, code: u32) -> Vec<u32> {
        digits_of(code, self.p, self.r)
    }

    pub fn from_digits(&self, digits: &[u32]) -> Result<u32, FieldError> {
        if digits.len() != self.r as usize || digits.iter().any(|&d| d >= self.p) {
            return Err(FieldError::MalformedModulus(digits.to_vec()));
        }
        Ok(code_of(digits, self.p))
    }

    pub fn check_code(&self, code: u64) -> Result<u32, FieldError> {
        if code < self.q as u64 {
            Ok(code as u32)
        } else {
            Err(FieldError::CodeOutOfRange { code, q: self.q })
        }
    }

    /// Code of the integer `n` reduced into the prime subfield.
    pub fn from_int(&self, n: i64) -> u32 {
        n.rem_euclid(self.p as i64) as u32
    }

    #[inline]
    pub fn sign(&self, code: u32) -> Sign {
        self.signs[code as usize]
    }

    /// Codes of all positive elements, ascending.
    pub fn positives(&self) -> Vec<u32> {
        (0..self.q).filter(|&a| self.sign(a) == Sign::Positive).collect()
    }

    pub fn negatives(&self) -> Vec<u32> {
        (0..self.q).filter(|&a| self.sign(a) == Sign::Negative).collect()
    }

    /// `-1` as an element code.
    pub fn minus_one(&self) -> u32 {
        self.neg(1)
    }

    #[inline]
    pub fn add(&self, a: u32, b: u32) -> u32 {
        match &self.backend {
            Backend::Prime => {
                let s = a + b;
                if s >= self.p {
                    s - self.p
                } else {
                    s
                }
            }
            Backend::Tables { exp, log, zech } => {
                if a == 0 {
                    return b;
                }
                if b == 0 {
                    return a;
                }
                let n = self.q - 1;
                let (la, lb) = (log[a as usize], log[b as usize]);
                let d = if lb >= la { lb - la } else { lb + n - la };
                let z = zech[d as usize];
                if z == NO_LOG {
                    0
                } else {
                    exp[((la + z) % n) as usize]
                }
            }
            Backend::Poly => self.add_digitwise(a, b),
        }
    }

    fn add_digitwise(&self, a: u32, b: u32) -> u32 {
        let (da, db) = (self.digits(a), self.digits(b));
        let sum: Vec<u32> = da.iter().zip(&db).map(|(x, y)| (x + y) % self.p).collect();
        code_of(&sum, self.p)
    }

    #[inline]
    pub fn neg(&self, a: u32) -> u32 {
        match &self.backend {
            Backend::Prime => {
                if a == 0 {
                    0
                } else {
                    self.p - a
                }
            }
            _ => {
                let d: Vec<u32> = self
                    .digits(a)
                    .into_iter()
                    .map(|x| (self.p - x) % self.p)
                    .collect();
                code_of(&d, self.p)
            }
        }
    }

    #[inline]
    pub fn sub(&self, a: u32, b: u32) -> u32 {
        self.add(a, self.neg(b))
    }

    #[inline]
    pub fn mul(&self, a: u32, b: u32) -> u32 {
        match &self.backend {
            Backend::Prime => (a as u64 * b as u64 % self.p as u64) as u32,
            Backend::Tables { exp, log, .. } => {
                if a == 0 || b == 0 {
                    return 0;
                }
                let n = self.q - 1;
                exp[((log[a as usize] + log[b as usize]) % n) as usize]
            }
            Backend::Poly => {
                let prod = fp_poly::mul(&self.digits(a), &self.digits(b), self.p);
                let mut red = fp_poly::rem_monic(&prod, &self.modulus, self.p);
                red.resize(self.r as usize, 0);
                code_of(&red, self.p)
            }
        }
    }

    pub fn pow(&self, a: u32, mut e: u64) -> u32 {
        if let Backend::Tables { exp, log, .. } = &self.backend {
            if a == 0 {
                return if e == 0 { 1 } else { 0 };
            }
            let n = (self.q - 1) as u64;
            return exp[((log[a as usize] as u64 * (e % n)) % n) as usize];
        }
        let mut base = a;
        let mut acc = 1u32;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            e >>= 1;
        }
        acc
    }

    pub fn inv(&self, a: u32) -> Result<u32, FieldError> {
        if a == 0 {
            return Err(FieldError::DivisionByZero);
        }
        Ok(match &self.backend {
            Backend::Tables { exp, log, .. } => {
                let n = self.q - 1;
                exp[((n - log[a as usize]) % n) as usize]
            }
            _ => self.pow(a, self.q as u64 - 2),
        })
    }

    pub fn div(&self, a: u32, b: u32) -> Result<u32, FieldError> {
        Ok(self.mul(a, self.inv(b)?))
    }

    /// Multiplicative order of a nonzero element.
    pub fn multiplicative_order(&self, a: u32) -> Option<u64> {
        if a == 0 {
            return None;
        }
        let n = (self.q - 1) as u64;
        let mut order = n;
        for l in prime_factors(n) {
            while order.is_multiple_of(l) && self.pow(a, order / l) == 1 {
                order /= l;
            }
        }
        Some(order)
    }

    /// Euler-criterion sign: `a^((q-1)/2) = 1` for positives (odd characteristic).
    pub fn sign_by_euler(&self, a: u32) -> Sign {
        if a == 0 {
            Sign::Zero
        } else if self.p == 2 || self.pow(a, (self.q as u64 - 1) / 2) == 1 {
            Sign::Positive
        } else {
            Sign::Negative
        }
    }

    /// Evaluate an `F_p`-polynomial (constant-first) at an element of this field.
    fn eval_prime_poly(&self, poly: &[u32], at: u32) -> u32 {
        poly.iter()
            .rev()
            .fold(0u32, |acc, &c| self.add(self.mul(acc, at), c % self.p))
    }

    /// The embedding of `self` into `target`, as a lookup table on codes.
    ///
    /// The class of `x` in `self` is sent to the smallest root of `self`'s
    /// modulus inside `target`.
    pub fn embedding_into(&self, target: &FieldSpec) -> Result<Vec<u32>, FieldError> {
        if self.p != target.p || !target.r.is_multiple_of(self.r) {
            return Err(FieldError::NotASubfield {
                p: self.p,
                r: self.r,
                target_p: target.p,
                s: target.r,
            });
        }
        let root = (0..target.q)
            .find(|&b| target.eval_prime_poly(&self.modulus, b) == 0)
            .expect("a field of degree divisible by r contains every degree-r extension");
        Ok((0..self.q)
            .map(|a| target.eval_prime_poly(&self.digits(a), root))
            .collect())
    }

    /// Human-readable form of an element: the integer for prime fields,
    /// the constant-first coefficient vector otherwise.
    pub fn format_code(&self, code: u32) -> String {
        if self.r == 1 {
            code.to_string()
        } else {
            let d: Vec<String> = self.digits(code).iter().map(|x| x.to_string()).collect();
            format!("[{}]", d.join(","))
        }
    }

    /// JSON value of an element: integer for prime fields, coefficient array otherwise.
    pub fn code_to_json(&self, code: u32) -> serde_json::Value {
        if self.r == 1 {
            serde_json::Value::from(code)
        } else {
            serde_json::Value::from(self.digits(code))
        }
    }

    pub fn code_from_json(&self, v: &serde_json::Value) -> Result<u32, FieldError> {
        match v {
            serde_json::Value::Number(n) => {
                let x = n
                    .as_u64()
                    .ok_or_else(|| FieldError::MalformedElement(n.to_string()))?;
                self.check_code(x)
            }
            serde_json::Value::Array(items) => {
                let digits: Option<Vec<u32>> =
                    items.iter().map(|d| d.as_u64().map(|d| d as u32)).collect();
                let digits = digits.ok_or_else(|| FieldError::MalformedElement(v.to_string()))?;
                self.from_digits(&digits)
            }
            _ => Err(FieldError::MalformedElement(v.to_string())),
        }
    }

    pub fn descriptor(&self) -> FieldDescriptor {
        FieldDescriptor {
            p: self.p,
            r: self.r,
            modulus: self.modulus.clone(),
        }
    }
}

/// Wire form of a field: `{"p":3,"r":2,"modulus":[1,0,1]}`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FieldDescriptor {
    pub p: u32,
    pub r: u32,
    pub modulus: Vec<u32>,
}

impl FieldDescriptor {
    pub fn build(&self) -> Result<Arc<FieldSpec>, FieldError> {
        if self.modulus.len() as u32 != self.r + 1 {
            return Err(FieldError::MalformedModulus(self.modulus.clone()));
        }
        FieldSpec::with_modulus(self.p, self.modulus.clone())
    }
}

impl Serialize for FieldSpec {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        self.descriptor().serialize(s)
    }
}

/// An element bound to its field.
#[derive(Clone)]
pub struct FieldElement {
    spec: Arc<FieldSpec>,
    code: u32,
}

impl fmt::Debug for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.spec.format_code(self.code))
    }
}

impl fmt::Display for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.spec.format_code(self.code))
    }
}

impl PartialEq for FieldElement {
    fn eq(&self, other: &Self) -> bool {
        self.code == other.code && same_field(&self.spec, &other.spec)
    }
}

impl Eq for FieldElement {}

impl PartialOrd for FieldElement {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        same_field(&self.spec, &other.spec).then(|| self.code.cmp(&other.code))
    }
}

fn same_field(a: &Arc<FieldSpec>, b: &Arc<FieldSpec>) -> bool {
    Arc::ptr_eq(a, b) || **a == **b
}

impl FieldElement {
    /// Panics if `code` is not below the field order.
    pub fn from_code(spec: &Arc<FieldSpec>, code: u32) -> Self {
        assert!(code < spec.q, "element code {code} out of range");
        FieldElement {
            spec: Arc::clone(spec),
            code,
        }
    }

    pub fn from_int(spec: &Arc<FieldSpec>, n: i64) -> Self {
        Self::from_code(spec, spec.from_int(n))
    }

    pub fn zero(spec: &Arc<FieldSpec>) -> Self {
        Self::from_code(spec, 0)
    }

    pub fn one(spec: &Arc<FieldSpec>) -> Self {
        Self::from_code(spec, 1)
    }

    pub fn code(&self) -> u32 {
        self.code
    }

    pub fn spec(&self) -> &Arc<FieldSpec> {
        &self.spec
    }

    pub fn is_zero(&self) -> bool {
        self.code == 0
    }

    pub fn sign(&self) -> Sign {
        self.spec.sign(self.code)
    }

    fn with(&self, code: u32) -> Self {
        FieldElement {
            spec: Arc::clone(&self.spec),
            code,
        }
    }

    fn check(&self, other: &Self) -> Result<(), FieldError> {
        if same_field(&self.spec, &other.spec) {
            Ok(())
        } else {
            Err(FieldError::MismatchedFields)
        }
    }

    pub fn checked_add(&self, other: &Self) -> Result<Self, FieldError> {
        self.check(other)?;
        Ok(self.with(self.spec.add(self.code, other.code)))
    }

    pub fn checked_sub(&self, other: &Self) -> Result<Self, FieldError> {
        self.check(other)?;
        Ok(self.with(self.spec.sub(self.code, other.code)))
    }

    pub fn checked_mul(&self, other: &Self) -> Result<Self, FieldError> {
        self.check(other)?;
        Ok(self.with(self.spec.mul(self.code, other.code)))
    }

    pub fn checked_div(&self, other: &Self) -> Result<Self, FieldError> {
        self.check(other)?;
        Ok(self.with(self.spec.div(self.code, other.code)?))
    }

    pub fn inv(&self) -> Result<Self, FieldError> {
        Ok(self.with(self.spec.inv(self.code)?))
    }

    pub fn pow(&self, e: u64) -> Self {
        self.with(self.spec.pow(self.code, e))
    }

    /// Image under the embedding into a field of the same characteristic
    /// whose degree is a multiple of this field's degree.
    pub fn embed_into(&self, target: &Arc<FieldSpec>) -> Result<Self, FieldError> {
        let table = self.spec.embedding_into(target)?;
        Ok(FieldElement::from_code(target, table[self.code as usize]))
    }
}

impl Add for &FieldElement {
    type Output = FieldElement;
    fn add(self, rhs: Self) -> FieldElement {
        self.checked_add(rhs).expect("elements of different fields")
    }
}

impl Sub for &FieldElement {
    type Output = FieldElement;
    fn sub(self, rhs: Self) -> FieldElement {
        self.checked_sub(rhs).expect("elements of different fields")
    }
}

impl Mul for &FieldElement {
    type Output = FieldElement;
    fn mul(self, rhs: Self) -> FieldElement {
        self.checked_mul(rhs).expect("elements of different fields")
    }
}

impl Neg for &FieldElement {
    type Output = FieldElement;
    fn neg(self) -> FieldElement {
        self.with(self.spec.neg(self.code))
    }
}
