//! Exact decision procedure for perfect edge state transfer (PEST) on
//! cubelike graphs.
//!
//! For edge states `e_a - e_b` and `e_c - e_d`, transfer is possible only when
//! `a + b + c + d = 0`. The characters on the hyperplane `{x : (a+b).x = 1}`
//! split into `Omega+` (`(a+c).x = 0`) and `Omega-` (`(a+c).x = 1`). Fixing
//! `x0` in `Omega+`, PEST holds iff `v2(lambda_x0 - lambda_x)` is a common
//! finite `rho` on `Omega-` and at least `rho + 1` on `Omega+`. The
//! transfer times are then `(2u + 1) pi / M` with `M` the gcd of those gaps.

use std::fmt;

use num_integer::Integer;
use num_rational::Ratio;
use thiserror::Error;

use crate::cubelike::{ConnectionSet, GroupElement, Spectrum};
use crate::gf2m::{FieldElement, TobBasis};

/// 2-adic valuation of an integer, `Infinite` for zero.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Valuation {
    Finite(u32),
    Infinite,
}

impl Valuation {
    pub fn is_finite(self) -> bool {
        matches!(self, Valuation::Finite(_))
    }

    pub fn finite(self) -> Option<u32> {
        match self {
            Valuation::Finite(v) => Some(v),
            Valuation::Infinite => None,
        }
    }
}

impl std::ops::Add for Valuation {
    type Output = Valuation;

    fn add(self, rhs: Valuation) -> Valuation {
        match (self, rhs) {
            (Valuation::Finite(a), Valuation::Finite(b)) => Valuation::Finite(a + b),
            _ => Valuation::Infinite,
        }
    }
}

impl fmt::Display for Valuation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Valuation::Finite(v) => write!(f, "{v}"),
            Valuation::Infinite => f.write_str("inf"),
        }
    }
}

pub fn v2(n: i64) -> Valuation {
    if n == 0 {
        Valuation::Infinite
    } else {
        Valuation::Finite(n.trailing_zeros())
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum PairError {
    #[error("edge state needs two distinct endpoints")]
    RepeatedEndpoint,
    #[error("element {0:#b} does not fit the graph dimension")]
    WidthMismatch(u32),
    #[error("pair collapses the Omega partition (a + b = 0 or a + c in {{0, a + b}})")]
    DegeneratePair,
}

/// Source edge state `e_a - e_b` and target edge state `e_c - e_d`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct EdgeStatePair {
    pub a: GroupElement,
    pub b: GroupElement,
    pub c: GroupElement,
    pub d: GroupElement,
}

impl EdgeStatePair {
    /// Requires `a != b` and `c != d`. Trivial pairs, where `{c, d} = {a, b}`,
    /// are accepted here and reported as such by [`check_pest`].
    pub fn new(
        a: GroupElement,
        b: GroupElement,
        c: GroupElement,
        d: GroupElement,
    ) -> Result<Self, PairError> {
        if a == b || c == d {
            return Err(PairError::RepeatedEndpoint);
        }
        Ok(EdgeStatePair { a, b, c, d })
    }

    pub fn from_bits(a: u32, b: u32, c: u32, d: u32) -> Result<Self, PairError> {
        Self::new(
            GroupElement(a),
            GroupElement(b),
            GroupElement(c),
            GroupElement(d),
        )
    }

    pub fn fits(&self, m: u32) -> Result<(), PairError> {
        match [self.a, self.b, self.c, self.d]
            .into_iter()
            .find(|z| !z.fits(m))
        {
            Some(z) => Err(PairError::WidthMismatch(z.0)),
            None => Ok(()),
        }
    }

    pub fn is_trivial(&self) -> bool {
        (self.a, self.b) == (self.c, self.d) || (self.a, self.b) == (self.d, self.c)
    }

    pub fn sum(&self) -> GroupElement {
        self.a + self.b + self.c + self.d
    }

    /// `a + b`.
    pub fn direction(&self) -> GroupElement {
        self.a + self.b
    }

    /// `a + c`.
    pub fn offset(&self) -> GroupElement {
        self.a + self.c
    }

    /// The same pair with the target endpoints swapped.
    pub fn swap_target(&self) -> EdgeStatePair {
        EdgeStatePair {
            c: self.d,
            d: self.c,
            ..*self
        }
    }

    /// The pair with source and target exchanged.
    pub fn reversed(&self) -> EdgeStatePair {
        EdgeStatePair {
            a: self.c,
            b: self.d,
            c: self.a,
            d: self.b,
        }
    }

    pub fn translate(&self, alpha: GroupElement) -> EdgeStatePair {
        EdgeStatePair {
            a: self.a + alpha,
            b: self.b + alpha,
            c: self.c + alpha,
            d: self.d + alpha,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct OmegaPartition {
    /// `a + b`
    pub e: GroupElement,
    /// `a + c`
    pub g: GroupElement,
    pub omega_plus: Vec<GroupElement>,
    pub omega_minus: Vec<GroupElement>,
}

/// Splits `{x : e.x = 1}` by the value of `g.x`. Both halves are listed in
/// ascending mask order.
pub fn omega_sets(m: u32, pair: &EdgeStatePair) -> Result<OmegaPartition, PairError> {
    pair.fits(m)?;
    let e = pair.direction();
    let g = pair.offset();
    if e.is_zero() || g.is_zero() || g == e {
        return Err(PairError::DegeneratePair);
    }
    let (omega_plus, omega_minus): (Vec<_>, Vec<_>) = (0..1u32 << m)
        .map(GroupElement)
        .filter(|x| e.dot(*x))
        .partition(|x| !g.dot(*x));
    Ok(OmegaPartition {
        e,
        g,
        omega_plus,
        omega_minus,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum NegativeReason {
    SumNotZero,
    TrivialPair,
    ValuationNotConstantOnOmegaMinus,
    OmegaMinusValuationInfinite,
    OmegaPlusValuationTooSmall,
}

impl NegativeReason {
    pub fn code(self) -> &'static str {
        match self {
            NegativeReason::SumNotZero => "SumNotZero",
            NegativeReason::TrivialPair => "TrivialPair",
            NegativeReason::ValuationNotConstantOnOmegaMinus => "ValuationNotConstantOnOmegaMinus",
            NegativeReason::OmegaMinusValuationInfinite => "OmegaMinusValuationInfinite",
            NegativeReason::OmegaPlusValuationTooSmall => "OmegaPlusValuationTooSmall",
        }
    }
}

impl fmt::Display for NegativeReason {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.code())
    }
}

/// Solution of the valuation criterion: all transfer times are
/// `(2u + 1) pi / modulus`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct PestTime {
    pub rho: u32,
    pub modulus: u64,
}

impl PestTime {
    /// Minimal positive time as a coefficient of pi.
    pub fn t_min_pi(&self) -> Ratio<i64> {
        Ratio::new(1, self.modulus as i64)
    }

    /// The `u`-th transfer time `(2u + 1) / modulus`, as a coefficient of pi.
    pub fn time_pi(&self, u: u64) -> Ratio<i64> {
        Ratio::new(2 * u as i64 + 1, self.modulus as i64)
    }
}

/// gcd of the nonzero entries; 0 when there are none.
pub fn gcd_ignoring_zeros<'a>(values: impl IntoIterator<Item = &'a i64>) -> u64 {
    values
        .into_iter()
        .filter(|v| **v != 0)
        .fold(0i64, |acc, &v| acc.gcd(&v)) as u64
}

/// Decides whether some `t` has `exp(i t delta) = -1` on every minus gap and
/// `+1` on every plus gap.
pub fn exists_pest_time(
    deltas_plus: &[i64],
    deltas_minus: &[i64],
) -> Result<PestTime, NegativeReason> {
    let mut vals = deltas_minus.iter().map(|&d| v2(d));
    let first = vals
        .next()
        .ok_or(NegativeReason::OmegaMinusValuationInfinite)?;
    if vals.any(|v| v != first) {
        return Err(NegativeReason::ValuationNotConstantOnOmegaMinus);
    }
    let rho = first
        .finite()
        .ok_or(NegativeReason::OmegaMinusValuationInfinite)?;
    if deltas_plus
        .iter()
        .any(|&d| v2(d) < Valuation::Finite(rho + 1))
    {
        return Err(NegativeReason::OmegaPlusValuationTooSmall);
    }
    let modulus = gcd_ignoring_zeros(deltas_plus.iter().chain(deltas_minus));
    Ok(PestTime { rho, modulus })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum PestStatus {
    Positive,
    Negative(NegativeReason),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PestCertificate {
    pub m: u32,
    pub pair: EdgeStatePair,
    pub status: PestStatus,
    pub x0: Option<GroupElement>,
    pub partition: Option<OmegaPartition>,
    /// gcd of `lambda_x0 - lambda_x` over the hyperplane, zeros ignored.
    pub modulus: Option<u64>,
    pub rho: Option<u32>,
    /// `modulus = 2^ell`, set when the modulus is a power of two.
    pub ell: Option<u32>,
    /// Minimal transfer time as a coefficient of pi.
    pub t_min_pi: Option<Ratio<i64>>,
    pub connected: bool,
    pub ab_is_edge: bool,
    pub cd_is_edge: bool,
}

impl PestCertificate {
    pub fn is_positive(&self) -> bool {
        self.status == PestStatus::Positive
    }

    pub fn reason(&self) -> Option<NegativeReason> {
        match self.status {
            PestStatus::Negative(r) => Some(r),
            PestStatus::Positive => None,
        }
    }
}

/// Runs the valuation criterion for `pair` on `Cay(F_2^m, set)`.
pub fn check_pest(set: &ConnectionSet, pair: &EdgeStatePair) -> Result<PestCertificate, PairError> {
    check_pest_with(set, &set.spectrum(), pair, None)
}

/// As [`check_pest`] with an explicit `x0` from `Omega+`.
pub fn check_pest_with_x0(
    set: &ConnectionSet,
    pair: &EdgeStatePair,
    x0: GroupElement,
) -> Result<PestCertificate, PairError> {
    check_pest_with(set, &set.spectrum(), pair, Some(x0))
}

/// Core of the checker, reusing a precomputed spectrum. `x0` defaults to the
/// smallest element of `Omega+`; a supplied `x0` outside `Omega+` is an error.
pub fn check_pest_with(
    set: &ConnectionSet,
    spectrum: &Spectrum,
    pair: &EdgeStatePair,
    x0: Option<GroupElement>,
) -> Result<PestCertificate, PairError> {
    let m = set.m();
    pair.fits(m)?;
    let mut cert = PestCertificate {
        m,
        pair: *pair,
        status: PestStatus::Positive,
        x0: None,
        partition: None,
        modulus: None,
        rho: None,
        ell: None,
        t_min_pi: None,
        connected: set.is_connected(),
        ab_is_edge: set.is_edge(pair.a, pair.b),
        cd_is_edge: set.is_edge(pair.c, pair.d),
    };
    if pair.is_trivial() {
        cert.status = PestStatus::Negative(NegativeReason::TrivialPair);
        return Ok(cert);
    }
    if !pair.sum().is_zero() {
        cert.status = PestStatus::Negative(NegativeReason::SumNotZero);
        return Ok(cert);
    }
    let partition = match omega_sets(m, pair) {
        Ok(p) => p,
        Err(PairError::DegeneratePair) => {
            cert.status = PestStatus::Negative(NegativeReason::TrivialPair);
            return Ok(cert);
        }
        Err(e) => return Err(e),
    };
    let x0 = match x0 {
        Some(x) if partition.omega_plus.contains(&x) => x,
        Some(_) => return Err(PairError::DegeneratePair),
        None => partition.omega_plus[0],
    };
    let base = spectrum.get(x0);
    let plus: Vec<i64> = partition
        .omega_plus
        .iter()
        .filter(|&&x| x != x0)
        .map(|&x| base - spectrum.get(x))
        .collect();
    let minus: Vec<i64> = partition
        .omega_minus
        .iter()
        .map(|&x| base - spectrum.get(x))
        .collect();

    let modulus = gcd_ignoring_zeros(plus.iter().chain(&minus));
    cert.modulus = Some(modulus);
    if modulus.is_power_of_two() {
        cert.ell = Some(modulus.trailing_zeros());
    }
    cert.x0 = Some(x0);
    cert.partition = Some(partition);

    match exists_pest_time(&plus, &minus) {
        Ok(time) => {
            // Both routes to M must agree: the gap gcd and 2^rho.
            assert_eq!(
                time.modulus,
                1u64 << time.rho,
                "gap gcd differs from 2^rho on a positive instance"
            );
            cert.rho = Some(time.rho);
            cert.t_min_pi = Some(time.t_min_pi());
        }
        Err(reason) => cert.status = PestStatus::Negative(reason),
    }
    Ok(cert)
}

/// Every `(c, d)` with a positive certificate from edge state `e_a - e_b`,
/// sorted by `c`. Condition `a + b + c + d = 0` fixes `d = a + b + c`.
pub fn find_pest_partners(
    set: &ConnectionSet,
    a: GroupElement,
    b: GroupElement,
) -> Result<Vec<(GroupElement, GroupElement, PestCertificate)>, PairError> {
    if a == b {
        return Err(PairError::RepeatedEndpoint);
    }
    let spectrum = set.spectrum();
    let mut out = Vec::new();
    for c in (0..set.order() as u32).map(GroupElement) {
        if c == a || c == b {
            continue;
        }
        let d = a + b + c;
        let pair = EdgeStatePair::new(a, b, c, d)?;
        let cert = check_pest_with(set, &spectrum, &pair, None)?;
        if cert.is_positive() {
            out.push((c, d, cert));
        }
    }
    Ok(out)
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum NormalizeError {
    #[error("basis has degree {basis}, connection set has dimension {set}")]
    DimensionMismatch { basis: u32, set: u32 },
    #[error(transparent)]
    Pair(#[from] PairError),
}

/// Result of moving edge `(a, b)` to `(0, 1)`: translate by `a`, then
/// multiply by `(a + b)^-1` in the field, where the field `1` has
/// coordinates `(1, ..., 1)` under the trace-orthogonal basis.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NormalizedEdge {
    pub set: ConnectionSet,
    pub translation: GroupElement,
    pub scale: FieldElement,
    basis: TobBasis,
}

impl NormalizedEdge {
    /// `v -> coords(scale * expand(v + translation))`.
    pub fn map(&self, v: GroupElement) -> GroupElement {
        let field = self.basis.field();
        let x = self.basis.expand(v + self.translation);
        self.basis.coords(field.mul(self.scale, x))
    }

    /// Image of `S` under the linear part only (translations fix `S`).
    fn map_linear(&self, z: GroupElement) -> GroupElement {
        let field = self.basis.field();
        self.basis
            .coords(field.mul(self.scale, self.basis.expand(z)))
    }

    pub fn map_pair(&self, pair: &EdgeStatePair) -> EdgeStatePair {
        EdgeStatePair {
            a: self.map(pair.a),
            b: self.map(pair.b),
            c: self.map(pair.c),
            d: self.map(pair.d),
        }
    }
}

pub fn normalize_edge(
    basis: &TobBasis,
    set: &ConnectionSet,
    a: GroupElement,
    b: GroupElement,
) -> Result<NormalizedEdge, NormalizeError> {
    let m = set.m();
    if basis.field().m() != m {
        return Err(NormalizeError::DimensionMismatch {
            basis: basis.field().m(),
            set: m,
        });
    }
    if a == b {
        return Err(PairError::RepeatedEndpoint.into());
    }
    if !a.fits(m) || !b.fits(m) {
        return Err(PairError::WidthMismatch(a.0.max(b.0)).into());
    }
    let field = basis.field();
    let scale = field
        .inv(basis.expand(a + b))
        .expect("a != b so a + b is a unit");
    let mut normalized = NormalizedEdge {
        set: set.clone(),
        translation: a,
        scale,
        basis: basis.clone(),
    };
    let image: Vec<GroupElement> = set
        .members()
        .iter()
        .map(|&z| normalized.map_linear(z))
        .collect();
    normalized.set = ConnectionSet::new(m, image).expect("linear bijection keeps 0 out");
    Ok(normalized)
}

/// Bound on `ell` for `M = 2^ell` and whether the premise that makes `M` a
/// power of two holds.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct TimeBound {
    pub ell_max: u32,
    pub premise_holds: bool,
}

/// Largest `ell` with `4^ell <= 2s(s + 3)`, i.e. `floor(log2(2s(s+3)) / 2)`.
pub fn ell_max(s: usize) -> u32 {
    let n = 2 * (s as u64) * (s as u64 + 3);
    if n == 0 {
        return 0;
    }
    (63 - n.leading_zeros()) / 2
}

/// Bound for a normalized instance, where the all-ones vector is the unit.
pub fn time_bound(set: &ConnectionSet) -> TimeBound {
    time_bound_along(set, GroupElement::ones(set.m()))
}

/// Bound with `unit` playing the role of the field `1` (the edge direction
/// `a + b` of an unnormalized instance).
pub fn time_bound_along(set: &ConnectionSet, unit: GroupElement) -> TimeBound {
    let premise_holds = set
        .members()
        .iter()
        .any(|&z| z != unit && !set.contains(z + unit));
    TimeBound {
        ell_max: ell_max(set.len()),
        premise_holds,
    }
}
