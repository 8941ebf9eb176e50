//! Invariant checks shared by the property tests and the acceptance run.
#![allow(dead_code)]

use std::f64::consts::PI;

use nalgebra::DMatrix;
use num_rational::Ratio;
use pest_lab::boolfn::{wht, BooleanFunction};
use pest_lab::cubelike::{eigenprojection_entry, ConnectionSet, GroupElement};
use pest_lab::gf2m::{trace_orthogonal_basis, FieldSpec};
use pest_lab::oracle::{dense_transfer_matrix, sweep_candidate_times, transfer_amplitude};
use pest_lab::pestcheck::{
    check_pest, check_pest_with_x0, normalize_edge, omega_sets, time_bound, EdgeStatePair,
    PestCertificate,
};

pub type Check = Result<(), String>;

macro_rules! ensure {
    ($cond:expr, $($fmt:tt)+) => {
        let ok: bool = $cond;
        if !ok {
            return Err(format!($($fmt)+));
        }
    };
}

fn same_verdict(x: &PestCertificate, y: &PestCertificate) -> bool {
    x.is_positive() == y.is_positive()
        && x.rho == y.rho
        && x.modulus == y.modulus
        && x.t_min_pi == y.t_min_pi
}

pub fn x0_invariance(s: &ConnectionSet, pair: &EdgeStatePair) -> Check {
    let reference = check_pest(s, pair).map_err(|e| e.to_string())?;
    let Some(partition) = &reference.partition else {
        return Ok(());
    };
    for &x0 in &partition.omega_plus {
        let other = check_pest_with_x0(s, pair, x0).map_err(|e| e.to_string())?;
        ensure!(
            same_verdict(&reference, &other),
            "x0 = {x0:?} changes the verdict for {pair:?}"
        );
    }
    Ok(())
}

pub fn translation_invariance(s: &ConnectionSet, pair: &EdgeStatePair) -> Check {
    let reference = check_pest(s, pair).map_err(|e| e.to_string())?;
    for alpha in (0..1u32 << s.m()).map(GroupElement) {
        let moved = check_pest(s, &pair.translate(alpha)).map_err(|e| e.to_string())?;
        ensure!(
            same_verdict(&reference, &moved),
            "translation by {alpha:?} changes {pair:?}"
        );
    }
    Ok(())
}

pub fn scaling_invariance(s: &ConnectionSet, pair: &EdgeStatePair) -> Check {
    let field = FieldSpec::with_default_modulus(s.m()).map_err(|e| e.to_string())?;
    let basis = trace_orthogonal_basis(&field).map_err(|e| e.to_string())?;
    let norm = normalize_edge(&basis, s, pair.a, pair.b).map_err(|e| e.to_string())?;
    let mapped = norm.map_pair(pair);
    ensure!(
        mapped.a.is_zero() && mapped.b == GroupElement::ones(s.m()),
        "edge not moved to (0, 1): {mapped:?}"
    );
    let before = check_pest(s, pair).map_err(|e| e.to_string())?;
    let after = check_pest(&norm.set, &mapped).map_err(|e| e.to_string())?;
    ensure!(
        same_verdict(&before, &after),
        "normalization changes {pair:?}"
    );
    let sorted = |set: &ConnectionSet| {
        let mut v = set.spectrum().values().to_vec();
        v.sort_unstable();
        v
    };
    ensure!(
        sorted(s) == sorted(&norm.set),
        "normalization changes the spectrum"
    );
    Ok(())
}

pub fn partition_sizes(m: u32, pair: &EdgeStatePair) -> Check {
    let p = omega_sets(m, pair).map_err(|e| e.to_string())?;
    let quarter = 1usize << (m - 2);
    ensure!(
        p.omega_plus.len() == quarter && p.omega_minus.len() == quarter,
        "|Omega+| = {}, |Omega-| = {} for m = {m}",
        p.omega_plus.len(),
        p.omega_minus.len()
    );
    Ok(())
}

pub fn parseval(f: &BooleanFunction) -> Check {
    let m = f.m();
    let s = wht(f);
    let energy: i64 = s.values().iter().map(|v| v * v).sum();
    ensure!(
        energy == 1i64 << (2 * m),
        "sum of squares {energy} for m = {m}"
    );
    ensure!(s.values().iter().all(|v| v % 2 == 0), "odd Walsh value");
    Ok(())
}

/// Eigenvalue identities, including `lambda_x = -f^(x) / 2` for `x != 0`.
pub fn spectrum_identities(s: &ConnectionSet) -> Check {
    let m = s.m();
    let sp = s.spectrum();
    let size = s.len() as i64;
    ensure!(sp.get(GroupElement::ZERO) == size, "lambda_0 != |S|");
    ensure!(sp.values().iter().sum::<i64>() == 0, "trace of A is not 0");
    ensure!(
        sp.values().iter().map(|l| l * l).sum::<i64>() == size << m,
        "trace of A^2 is not n|S|"
    );
    let f_hat = wht(&s.indicator());
    for x in (1..1u32 << m).map(GroupElement) {
        ensure!(2 * sp.get(x) == -f_hat.get(x), "lambda != -f^/2 at {x:?}");
    }
    Ok(())
}

/// Character sums over `{x : x . 1 = 1}` and `{x : x . 1 = 0}`.
pub fn hyperplane_character_sums(m: u32) -> Check {
    let ones = GroupElement::ones(m);
    let half = 1i64 << (m - 1);
    for z in (0..1u32 << m).map(GroupElement) {
        let (mut s1, mut s0) = (0i64, 0i64);
        for x in (0..1u32 << m).map(GroupElement) {
            if x.dot(ones) {
                s1 += x.character(z);
            } else {
                s0 += x.character(z);
            }
        }
        let expected1 = match z {
            _ if z.is_zero() => half,
            _ if z == ones => -half,
            _ => 0,
        };
        let expected0 = if z.is_zero() || z == ones { half } else { 0 };
        ensure!(
            (s1, s0) == (expected1, expected0),
            "m = {m}, z = {z:?}: sums ({s1}, {s0})"
        );
    }
    Ok(())
}

/// `E_x (e_a - e_b) = +-E_x (e_c - e_d)` for every eigenprojection, with
/// exact rational entries.
pub fn is_strongly_cospectral(m: u32, a: u32, b: u32, c: u32, d: u32) -> bool {
    let n = 1u32 << m;
    let e = |x: u32, g: u32, h: u32| {
        eigenprojection_entry(m, GroupElement(x), GroupElement(g), GroupElement(h))
    };
    (0..n).all(|x| {
        let u: Vec<Ratio<i64>> = (0..n).map(|g| e(x, g, a) - e(x, g, b)).collect();
        let w: Vec<Ratio<i64>> = (0..n).map(|g| e(x, g, c) - e(x, g, d)).collect();
        u == w || u.iter().zip(&w).all(|(p, q)| *p == -*q)
    })
}

pub fn strong_cospectrality(m: u32, a: u32, b: u32, c: u32, d: u32) -> Check {
    let sc = is_strongly_cospectral(m, a, b, c, d);
    ensure!(
        sc == (a ^ b ^ c ^ d == 0),
        "m = {m}, ({a:b}, {b:b}) ({c:b}, {d:b}): strongly cospectral = {sc}"
    );
    Ok(())
}

pub fn dense_unitary_periodic(s: &ConnectionSet, t: f64) -> Check {
    let h = dense_transfer_matrix(s, t).map_err(|e| e.to_string())?;
    let n = s.order();
    let defect = &h * h.adjoint() - DMatrix::identity(n, n);
    ensure!(
        defect.iter().all(|z| z.norm() < 1e-9),
        "H(t) not unitary at t = {t}"
    );
    let shifted = dense_transfer_matrix(s, t + 2.0 * PI).map_err(|e| e.to_string())?;
    ensure!(
        (&h - &shifted).iter().all(|z| z.norm() < 1e-9),
        "H(t) not 2 pi periodic at t = {t}"
    );
    Ok(())
}

pub fn amplitude_matches_dense(s: &ConnectionSet, pair: &EdgeStatePair, t: f64) -> Check {
    let h = dense_transfer_matrix(s, t).map_err(|e| e.to_string())?;
    let i = |z: GroupElement| z.0 as usize;
    let (a, b, c, d) = (i(pair.a), i(pair.b), i(pair.c), i(pair.d));
    let dense = (h[(c, a)] - h[(c, b)] - h[(d, a)] + h[(d, b)]) / 2.0;
    let fast = transfer_amplitude(s, t, pair);
    ensure!(
        (dense - fast).norm() < 1e-10,
        "amplitude {fast} vs dense {dense}"
    );
    let back = transfer_amplitude(s, t, &pair.reversed());
    ensure!(
        (back.norm() - fast.norm()).abs() < 1e-10,
        "reversed pair differs"
    );
    Ok(())
}

/// Checker verdict against the numeric sweep: positive iff some candidate
/// time hits, and the first hit is the certified minimal time.
pub fn oracle_agrees(
    s: &ConnectionSet,
    pair: &EdgeStatePair,
    tol: f64,
) -> Result<PestCertificate, String> {
    let cert = check_pest(s, pair).map_err(|e| e.to_string())?;
    let sweep = sweep_candidate_times(s, pair, tol).map_err(|e| e.to_string())?;
    if cert.is_positive() {
        let first = sweep
            .hits
            .first()
            .ok_or_else(|| format!("positive {pair:?} but no hit"))?;
        ensure!(
            first.t_pi == cert.t_min_pi,
            "{pair:?}: first hit {:?}, certified {:?}",
            first.t_pi,
            cert.t_min_pi
        );
    } else {
        ensure!(
            sweep.hits.is_empty() && sweep.grid_hits.is_empty(),
            "negative {pair:?} ({:?}) but fidelity {} at {}",
            cert.status,
            sweep.best.fidelity,
            sweep.best.t
        );
    }
    Ok(cert)
}

/// For a positive instance, normalizes `(a, b)` to `(0, 1)` and checks
/// `M = 2^rho` and `rho <= ell_max(|S|)` when the premise holds.
pub fn bound_holds(s: &ConnectionSet, pair: &EdgeStatePair) -> Check {
    let field = FieldSpec::with_default_modulus(s.m()).map_err(|e| e.to_string())?;
    let basis = trace_orthogonal_basis(&field).map_err(|e| e.to_string())?;
    let norm = normalize_edge(&basis, s, pair.a, pair.b).map_err(|e| e.to_string())?;
    let cert = check_pest(&norm.set, &norm.map_pair(pair)).map_err(|e| e.to_string())?;
    ensure!(
        cert.is_positive(),
        "normalized {pair:?} is no longer positive"
    );
    let rho = cert.rho.expect("positive certificates carry rho");
    ensure!(
        cert.modulus == Some(1u64 << rho),
        "M = {:?}, rho = {rho}",
        cert.modulus
    );
    let bound = time_bound(&norm.set);
    if bound.premise_holds {
        ensure!(
            rho <= bound.ell_max,
            "rho = {rho} exceeds {} for |S| = {}",
            bound.ell_max,
            s.len()
        );
    }
    Ok(())
}
