//! Arithmetic in binary extension fields GF(2^m), the absolute trace, and
//! trace-orthogonal (self-dual) bases.
//!
//! Elements are polynomial-basis bit masks: bit `i` is the coefficient of
//! `x^i`. A [`TobBasis`] converts between field elements and coordinate
//! vectors in F_2^m so that `Tr(xy)` becomes the plain dot product of the
//! coordinate vectors.

use std::fmt;

use thiserror::Error;

use crate::cubelike::GroupElement;
use crate::MAX_M;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum FieldError {
    #[error("extension degree {0} outside 1..={MAX_M}")]
    DegreeOutOfRange(u32),
    #[error("modulus {modulus:#x} has degree {actual}, expected {expected}")]
    DegreeMismatch {
        modulus: u32,
        expected: u32,
        actual: u32,
    },
    #[error("modulus {0:#x} is reducible over GF(2)")]
    ReducibleModulus(u32),
    #[error("zero has no multiplicative inverse")]
    ZeroInverse,
    #[error("basis has {got} elements, field degree is {expected}")]
    WrongBasisSize { expected: u32, got: usize },
    #[error("Tr(alpha_{i} * alpha_{j}) = {value}, trace-orthogonality requires {expected}")]
    NotTraceOrthogonal {
        i: usize,
        j: usize,
        value: u8,
        expected: u8,
    },
    #[error("element {0:#x} does not belong to the field")]
    ForeignElement(u32),
    #[error("trace-orthogonal basis search exhausted")]
    SearchExhausted,
}

/// An element of GF(2^m) in polynomial-basis coordinates.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct FieldElement(pub u32);

impl FieldElement {
    pub const ZERO: FieldElement = FieldElement(0);
    pub const ONE: FieldElement = FieldElement(1);

    pub fn bits(self) -> u32 {
        self.0
    }

    pub fn is_zero(self) -> bool {
        self.0 == 0
    }
}

impl std::ops::Add for FieldElement {
    type Output = FieldElement;

    #[allow(clippy::suspicious_arithmetic_impl)]
    fn add(self, rhs: FieldElement) -> FieldElement {
        FieldElement(self.0 ^ rhs.0)
    }
}

impl fmt::LowerHex for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::LowerHex::fmt(&self.0, f)
    }
}

/// Degree of a nonzero GF(2)[x] polynomial stored as a bit mask.
fn degree(p: u64) -> u32 {
    debug_assert!(p != 0);
    63 - p.leading_zeros()
}

fn poly_rem(mut a: u64, b: u64) -> u64 {
    let db = degree(b);
    while a != 0 && degree(a) >= db {
        a ^= b << (degree(a) - db);
    }
    a
}

/// Trial division by every polynomial of degree 1..=deg/2.
pub fn is_irreducible(poly: u32) -> bool {
    if poly < 2 {
        return false;
    }
    let p = poly as u64;
    let d = degree(p);
    for divisor_degree in 1..=d / 2 {
        let lo = 1u64 << divisor_degree;
        for q in lo..(lo << 1) {
            if poly_rem(p, q) == 0 {
                return false;
            }
        }
    }
    true
}

/// A validated binary extension field GF(2^m) with its defining modulus.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct FieldSpec {
    m: u32,
    modulus: u32,
}

impl FieldSpec {
    /// Builds the field from an explicit modulus, or from the smallest
    /// irreducible polynomial of degree `m` with nonzero constant term when
    /// `modulus` is `None`.
    pub fn new(m: u32, modulus: Option<u32>) -> Result<Self, FieldError> {
        if m == 0 || m > MAX_M {
            return Err(FieldError::DegreeOutOfRange(m));
        }
        let modulus = match modulus {
            Some(p) => {
                let actual = if p == 0 { 0 } else { 31 - p.leading_zeros() };
                if p == 0 || actual != m {
                    return Err(FieldError::DegreeMismatch {
                        modulus: p,
                        expected: m,
                        actual,
                    });
                }
                if !is_irreducible(p) {
                    return Err(FieldError::ReducibleModulus(p));
                }
                p
            }
            None => default_modulus(m),
        };
        Ok(FieldSpec { m, modulus })
    }

    pub fn with_default_modulus(m: u32) -> Result<Self, FieldError> {
        Self::new(m, None)
    }

    pub fn m(&self) -> u32 {
        self.m
    }

    pub fn modulus(&self) -> u32 {
        self.modulus
    }

    pub fn order(&self) -> u64 {
        1u64 << self.m
    }

    pub fn mask(&self) -> u32 {
        ((1u64 << self.m) - 1) as u32
    }

    pub fn contains(&self, a: FieldElement) -> bool {
        a.0 & !self.mask() == 0
    }

    /// All field elements in ascending mask order.
    pub fn elements(&self) -> impl Iterator<Item = FieldElement> {
        (0..self.order() as u32).map(FieldElement)
    }

    pub fn mul(&self, a: FieldElement, b: FieldElement) -> FieldElement {
        debug_assert!(self.contains(a) && self.contains(b));
        let mut acc = 0u64;
        let mut x = a.0 as u64;
        let mut y = b.0;
        while y != 0 {
            if y & 1 == 1 {
                acc ^= x;
            }
            x <<= 1;
            y >>= 1;
        }
        FieldElement(poly_rem(acc, self.modulus as u64) as u32)
    }

    pub fn square(&self, a: FieldElement) -> FieldElement {
        self.mul(a, a)
    }

    pub fn pow(&self, a: FieldElement, mut exp: u64) -> FieldElement {
        let mut base = a;
        let mut acc = FieldElement::ONE;
        while exp > 0 {
            if exp & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.square(base);
            exp >>= 1;
        }
        acc
    }

    /// `a^(2^e)`, the e-fold Frobenius image.
    pub fn frobenius(&self, a: FieldElement, e: u32) -> FieldElement {
        (0..e % self.m).fold(a, |acc, _| self.square(acc))
    }

    /// Multiplicative inverse via `a^(2^m - 2)`.
    pub fn inv(&self, a: FieldElement) -> Result<FieldElement, FieldError> {
        if a.is_zero() {
            return Err(FieldError::ZeroInverse);
        }
        Ok(self.pow(a, self.order() - 2))
    }

    /// Absolute trace `a + a^2 + ... + a^(2^(m-1))`, returned as 0 or 1.
    pub fn trace(&self, a: FieldElement) -> u8 {
        let mut sum = FieldElement::ZERO;
        let mut power = a;
        for _ in 0..self.m {
            sum = sum + power;
            power = self.square(power);
        }
        debug_assert!(sum.0 <= 1, "trace escaped the prime field");
        sum.0 as u8
    }

    /// Whether the class of `x` generates the multiplicative group.
    pub fn is_primitive(&self) -> bool {
        let order = self.order() - 1;
        if self.m == 1 {
            // GF(2)^* is trivial; x is 0 or 1 depending on the modulus.
            return self.modulus == 0b11;
        }
        let x = FieldElement(0b10);
        prime_factors(order)
            .into_iter()
            .all(|p| self.pow(x, order / p) != FieldElement::ONE)
    }

    /// Exponent `i` with `x^i = a`, when the modulus is primitive.
    pub fn discrete_log(&self, a: FieldElement) -> Option<u64> {
        if a.is_zero() || !self.is_primitive() {
            return None;
        }
        let x = if self.m == 1 {
            FieldElement::ONE
        } else {
            FieldElement(0b10)
        };
        let mut power = FieldElement::ONE;
        for i in 0..self.order() - 1 {
            if power == a {
                return Some(i);
            }
            power = self.mul(power, x);
        }
        None
    }
}

fn default_modulus(m: u32) -> u32 {
    let lo = (1u32 << m) | 1;
    (lo..(1u32 << (m + 1)))
        .step_by(2)
        .find(|&p| is_irreducible(p))
        .expect("an irreducible polynomial exists in every degree")
}

fn prime_factors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut p = 2;
    while p * p <= n {
        if n.is_multiple_of(p) {
            out.push(p);
            while n.is_multiple_of(p) {
                n /= p;
            }
        }
        p += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

/// A basis `alpha_1..alpha_m` of GF(2^m) over GF(2) with
/// `Tr(alpha_i alpha_j) = [i = j]`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TobBasis {
    field: FieldSpec,
    alphas: Vec<FieldElement>,
}

impl TobBasis {
    /// Validates an explicit basis against the Gram condition.
    pub fn new(field: FieldSpec, alphas: Vec<FieldElement>) -> Result<Self, FieldError> {
        if alphas.len() != field.m() as usize {
            return Err(FieldError::WrongBasisSize {
                expected: field.m(),
                got: alphas.len(),
            });
        }
        if let Some(bad) = alphas.iter().find(|a| !field.contains(**a)) {
            return Err(FieldError::ForeignElement(bad.0));
        }
        for i in 0..alphas.len() {
            for j in i..alphas.len() {
                let value = field.trace(field.mul(alphas[i], alphas[j]));
                let expected = (i == j) as u8;
                if value != expected {
                    return Err(FieldError::NotTraceOrthogonal {
                        i: i + 1,
                        j: j + 1,
                        value,
                        expected,
                    });
                }
            }
        }
        Ok(TobBasis { field, alphas })
    }

    pub fn field(&self) -> &FieldSpec {
        &self.field
    }

    pub fn alphas(&self) -> &[FieldElement] {
        &self.alphas
    }

    /// Coordinates of `x`; coordinate `x_1` is the most significant bit.
    pub fn coords(&self, x: FieldElement) -> GroupElement {
        let m = self.field.m();
        let bits = self
            .alphas
            .iter()
            .enumerate()
            .fold(0u32, |acc, (i, &alpha)| {
                let bit = self.field.trace(self.field.mul(x, alpha)) as u32;
                acc | (bit << (m - 1 - i as u32))
            });
        GroupElement(bits)
    }

    pub fn expand(&self, v: GroupElement) -> FieldElement {
        let m = self.field.m();
        self.alphas
            .iter()
            .enumerate()
            .filter(|(i, _)| (v.bits() >> (m - 1 - *i as u32)) & 1 == 1)
            .fold(FieldElement::ZERO, |acc, (_, &alpha)| acc + alpha)
    }
}

/// Deterministic trace-orthogonal basis for `field`.
///
/// Greedy orthonormalisation of the trace form starting from the polynomial
/// basis. A unit vector `v` is accepted only if the form stays
/// non-alternating on its orthogonal complement, which is what makes the
/// greedy step always extendable. The exhaustive search is kept as a
/// fallback for small fields.
pub fn trace_orthogonal_basis(field: &FieldSpec) -> Result<TobBasis, FieldError> {
    match greedy_orthonormal(field) {
        Some(alphas) => TobBasis::new(*field, alphas),
        None if field.m() <= 6 => exhaustive_trace_orthogonal_basis(field),
        None => Err(FieldError::SearchExhausted),
    }
}

fn greedy_orthonormal(field: &FieldSpec) -> Option<Vec<FieldElement>> {
    let form = |x: FieldElement, y: FieldElement| field.trace(field.mul(x, y)) == 1;
    let mut span: Vec<FieldElement> = (0..field.m()).map(|i| FieldElement(1 << i)).collect();
    let mut alphas = Vec::with_capacity(field.m() as usize);

    while !span.is_empty() {
        let mut candidates: Vec<FieldElement> = span.clone();
        for i in 0..span.len() {
            for j in i + 1..span.len() {
                candidates.push(span[i] + span[j]);
            }
        }
        let mut chosen = None;
        for v in candidates {
            if !form(v, v) {
                continue;
            }
            let complement = reduce_to_basis(
                span.iter()
                    .map(|&w| if form(w, v) { w + v } else { w })
                    .collect(),
            );
            if complement.is_empty() || complement.iter().any(|&w| form(w, w)) {
                chosen = Some((v, complement));
                break;
            }
        }
        let (v, complement) = chosen?;
        alphas.push(v);
        span = complement;
    }
    Some(alphas)
}

/// GF(2) row reduction; returns a basis of the span with zero vectors dropped.
fn reduce_to_basis(vectors: Vec<FieldElement>) -> Vec<FieldElement> {
    let mut pivots: Vec<u32> = Vec::new();
    let mut kept = Vec::new();
    for v in vectors {
        let mut r = v.0;
        for &p in &pivots {
            r = r.min(r ^ p);
        }
        if r != 0 {
            pivots.push(r);
            pivots.sort_unstable_by(|a, b| b.cmp(a));
            kept.push(v);
        }
    }
    kept
}

/// Backtracking search over orthonormal sequences in ascending mask order.
pub fn exhaustive_trace_orthogonal_basis(field: &FieldSpec) -> Result<TobBasis, FieldError> {
    fn extend(field: &FieldSpec, units: &[FieldElement], acc: &mut Vec<FieldElement>) -> bool {
        if acc.len() == field.m() as usize {
            return true;
        }
        let last = acc.last().copied();
        for &u in units {
            if last.is_some_and(|l| u <= l) {
                continue;
            }
            if acc.iter().all(|&a| field.trace(field.mul(a, u)) == 0) {
                acc.push(u);
                if extend(field, units, acc) {
                    return true;
                }
                acc.pop();
            }
        }
        false
    }

    let units: Vec<FieldElement> = field
        .elements()
        .filter(|&x| field.trace(field.square(x)) == 1)
        .collect();
    let mut acc = Vec::new();
    if extend(field, &units, &mut acc) {
        TobBasis::new(*field, acc)
    } else {
        Err(FieldError::SearchExhausted)
    }
}
