//! Lifting constructions: a connection set in F_2^m becomes
//! `{(0, z)} ∪ {(1, z)}` in F_2^(m+1). Every character with leading
//! coordinate 1 then has eigenvalue 0, which is what lets bent and Gold
//! (semi-bent) functions produce graphs with perfect edge state transfer.
//!
//! Certificates are never asserted: each one carries a freshly computed
//! [`PestCertificate`] for the designated pair.

use num_rational::Ratio;
use thiserror::Error;

use crate::boolfn::{classify, gold_function, BoolFnError, BooleanFunction};
use crate::cubelike::{ConnectionSet, GraphError, GroupElement};
use crate::gf2m::{FieldSpec, TobBasis};
use crate::pestcheck::{check_pest, EdgeStatePair, PestCertificate};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ConstructionError {
    #[error("function has empty support")]
    EmptySupport,
    #[error("f(0) = 1 would put the identity into the lifted connection set")]
    ZeroInSupport,
    #[error("bent lift needs an even number of variables, got {0}")]
    WrongParity(u32),
    #[error("function is not bent")]
    NotBent,
    #[error(
        "f(1,...,1) = 0; use the complement 1 + f or add a linear term that is odd on (1,...,1)"
    )]
    AllOnesValueZero,
    #[error("k = {k} below the construction minimum {min}")]
    SmallK { k: u32, min: u32 },
    #[error("lift would exceed the supported dimension")]
    TooLarge,
    #[error(transparent)]
    BoolFn(#[from] BoolFnError),
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error("checker disagrees with the construction: {0}")]
    CertificateMismatch(String),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum LiftKind {
    BentLift,
    SemiBentLift,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct LiftOptions {
    /// Run the checker even below the constructions' stated minimum `k`.
    pub allow_small_k: bool,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LiftCertificate {
    pub kind: LiftKind,
    pub base: BooleanFunction,
    pub lifted: ConnectionSet,
    pub pair: EdgeStatePair,
    /// Claimed transfer time as a coefficient of pi.
    pub t_pi: Ratio<i64>,
    pub pest: PestCertificate,
}

/// `{(0, z) : f(z) = 1} ∪ {(1, z) : f(z) = 1}` with the new coordinate leading.
pub fn lift(f: &BooleanFunction) -> Result<ConnectionSet, ConstructionError> {
    let m = f.m();
    if m + 1 > crate::MAX_M {
        return Err(ConstructionError::TooLarge);
    }
    let support = f.support();
    if support.is_empty() {
        return Err(ConstructionError::EmptySupport);
    }
    if support[0].is_zero() {
        return Err(ConstructionError::ZeroInSupport);
    }
    let top = 1u32 << m;
    let lifted = ConnectionSet::new(
        m + 1,
        support.iter().flat_map(|&z| [z, GroupElement(z.0 | top)]),
    )?;

    let base = ConnectionSet::new(m, support)?.spectrum();
    let spectrum = lifted.spectrum();
    for (x, l) in base.iter() {
        assert_eq!(spectrum.get(x), 2 * l, "doubling fails at {x:?}");
        assert_eq!(
            spectrum.get(GroupElement(x.0 | top)),
            0,
            "half-spectrum nonzero at {x:?}"
        );
    }
    Ok(lifted)
}

fn certify(
    kind: LiftKind,
    base: BooleanFunction,
    lifted: ConnectionSet,
    pair: EdgeStatePair,
    t_pi: Ratio<i64>,
) -> Result<LiftCertificate, ConstructionError> {
    let pest = check_pest(&lifted, &pair).expect("designated pair is well formed");
    if !pest.is_positive() || pest.t_min_pi != Some(t_pi) {
        return Err(ConstructionError::CertificateMismatch(format!(
            "expected positive at {t_pi} pi, checker reported {:?} with t_min {:?}",
            pest.status, pest.t_min_pi
        )));
    }
    Ok(LiftCertificate {
        kind,
        base,
        lifted,
        pair,
        t_pi,
        pest,
    })
}

/// Bent lift on F_2^(2k+1) with pair `(0 0..0, 1 1..1) -> (1 0..0, 0 1..1)`
/// and time `pi / 2^k`.
pub fn bent_lift_certificate(
    f: &BooleanFunction,
    options: LiftOptions,
) -> Result<LiftCertificate, ConstructionError> {
    let m = f.m();
    if !m.is_multiple_of(2) {
        return Err(ConstructionError::WrongParity(m));
    }
    let k = m / 2;
    if k < 2 && !options.allow_small_k {
        return Err(ConstructionError::SmallK { k, min: 2 });
    }
    if !classify(f).is_bent() {
        return Err(ConstructionError::NotBent);
    }
    if !f.eval(GroupElement::ones(m)) {
        return Err(ConstructionError::AllOnesValueZero);
    }
    let lifted = lift(f)?;
    let top = GroupElement(1 << m);
    let pair = EdgeStatePair::new(
        GroupElement::ZERO,
        GroupElement::ones(m + 1),
        top,
        GroupElement::ones(m),
    )
    .expect("distinct endpoints");
    certify(
        LiftKind::BentLift,
        f.clone(),
        lifted,
        pair,
        Ratio::new(1, 1 << k),
    )
}

/// Gold lift of `Tr(x^(2^e+1))` on GF(2^m), `m = 2k + 1`, with pair
/// `(0 0..0, 1 1..1) -> (0 1..1, 1 0..0)` and time `pi / 2^(k+1)`.
pub fn semibent_lift_certificate(
    field: &FieldSpec,
    basis: &TobBasis,
    e: u32,
    options: LiftOptions,
) -> Result<LiftCertificate, ConstructionError> {
    let m = field.m();
    if m.is_multiple_of(2) {
        return Err(BoolFnError::BadParameters(format!("m = {m} must be odd")).into());
    }
    let k = (m - 1) / 2;
    if k < 1 && !options.allow_small_k {
        return Err(ConstructionError::SmallK { k, min: 1 });
    }
    let f = gold_function(field, basis, e)?;
    assert_eq!(
        f.weight() as u64,
        field.order() / 2,
        "Gold function must have weight 2^(m-1)"
    );
    let lifted = lift(&f)?;
    let pair = EdgeStatePair::new(
        GroupElement::ZERO,
        GroupElement::ones(m + 1),
        GroupElement::ones(m),
        GroupElement(1 << m),
    )
    .expect("distinct endpoints");
    certify(
        LiftKind::SemiBentLift,
        f,
        lifted,
        pair,
        Ratio::new(1, 1 << (k + 1)),
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::boolfn::inner_product_bent;
    use crate::gf2m::trace_orthogonal_basis;

    #[test]
    fn example_three_lift() {
        let f = inner_product_bent(2, GroupElement(0b1000), false).unwrap();
        let cert = bent_lift_certificate(&f, LiftOptions::default()).unwrap();
        assert_eq!(cert.lifted.len(), 12);
        assert_eq!(cert.t_pi, Ratio::new(1, 4));
        assert_eq!(
            (cert.pair.a.0, cert.pair.b.0, cert.pair.c.0, cert.pair.d.0),
            (0, 0b11111, 0b10000, 0b01111)
        );
    }

    #[test]
    fn example_four_lift() {
        let field = FieldSpec::new(3, Some(0b1101)).unwrap();
        let basis = trace_orthogonal_basis(&field).unwrap();
        let cert = semibent_lift_certificate(&field, &basis, 1, LiftOptions::default()).unwrap();
        let mut expected = vec![
            0b0111, 0b0101, 0b0011, 0b0110, 0b1111, 0b1101, 0b1011, 0b1110,
        ];
        expected.sort();
        let got: Vec<u32> = cert.lifted.members().iter().map(|z| z.0).collect();
        assert_eq!(got, expected);
        assert_eq!(cert.t_pi, Ratio::new(1, 4));
    }

    #[test]
    fn two_element_lift() {
        let f = BooleanFunction::from_support(3, &[GroupElement(0b111)]).unwrap();
        let s = lift(&f).unwrap();
        assert_eq!(s.members(), &[GroupElement(0b0111), GroupElement(0b1111)]);
    }

    #[test]
    fn lift_errors() {
        assert_eq!(
            lift(&BooleanFunction::zero(3).unwrap()),
            Err(ConstructionError::EmptySupport)
        );
        let with_zero = BooleanFunction::from_support(2, &[GroupElement(0)]).unwrap();
        assert_eq!(lift(&with_zero), Err(ConstructionError::ZeroInSupport));
    }

    #[test]
    fn bent_preconditions() {
        // f(1111) = 1 + 1 = 0 without the linear term
        let f = inner_product_bent(2, GroupElement(0), false).unwrap();
        assert_eq!(
            bent_lift_certificate(&f, LiftOptions::default()),
            Err(ConstructionError::AllOnesValueZero)
        );
        let odd = BooleanFunction::zero(3).unwrap();
        assert_eq!(
            bent_lift_certificate(&odd, LiftOptions::default()),
            Err(ConstructionError::WrongParity(3))
        );
        let flat = BooleanFunction::from_support(4, &[GroupElement(1)]).unwrap();
        assert_eq!(
            bent_lift_certificate(&flat, LiftOptions::default()),
            Err(ConstructionError::NotBent)
        );
        let small = inner_product_bent(1, GroupElement(0), false).unwrap();
        assert_eq!(
            bent_lift_certificate(&small, LiftOptions::default()),
            Err(ConstructionError::SmallK { k: 1, min: 2 })
        );
    }

    #[test]
    fn gold_parameters() {
        let field = FieldSpec::with_default_modulus(4).unwrap();
        let basis = trace_orthogonal_basis(&field).unwrap();
        assert!(matches!(
            semibent_lift_certificate(&field, &basis, 1, LiftOptions::default()),
            Err(ConstructionError::BoolFn(BoolFnError::BadParameters(_)))
        ));
    }
}
