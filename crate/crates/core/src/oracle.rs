//! Floating-point falsifier for the exact checker: transfer amplitudes from
//! the spectral decomposition of `H(t) = exp(i t A)`, and a sweep over the
//! finite set of candidate transfer times.
//!
//! Nothing here certifies anything; verdicts come from [`crate::pestcheck`].

use std::collections::BTreeMap;
use std::f64::consts::PI;

use nalgebra::DMatrix;
use num_complex::Complex64;
use num_rational::Ratio;
use thiserror::Error;

use crate::cubelike::{ConnectionSet, GroupElement, Spectrum};
use crate::pestcheck::{time_bound_along, EdgeStatePair};

/// Largest dimension for which the dense transfer matrix is built.
pub const DENSE_MAX_M: u32 = 10;

/// Grid size of the heuristic scan used when the power-of-two premise fails.
pub const GRID_POINTS: u32 = 1 << 14;

pub const DEFAULT_TOLERANCE: f64 = 1e-9;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum OracleError {
    #[error("dense transfer matrix needs m <= {DENSE_MAX_M}, got {0}")]
    TooLarge(u32),
    #[error("tolerance {0} outside (0, 1e-3]")]
    BadTolerance(f64),
}

#[derive(Clone, Debug, PartialEq)]
pub struct FidelityReport {
    pub t: f64,
    /// `t / pi` when the time is a rational multiple of pi.
    pub t_pi: Option<Ratio<i64>>,
    pub amplitude: Complex64,
    pub fidelity: f64,
    pub tolerance: f64,
}

impl FidelityReport {
    pub fn is_hit(&self) -> bool {
        self.fidelity >= 1.0 - self.tolerance
    }
}

/// `1/2 (e_c - e_d)^T H(t) (e_a - e_b)` as a sum over characters,
/// `1/(2n) sum_x exp(i t lambda_x) [chi_x(c+a) - chi_x(c+b) - chi_x(d+a) + chi_x(d+b)]`.
pub fn transfer_amplitude(set: &ConnectionSet, t: f64, pair: &EdgeStatePair) -> Complex64 {
    transfer_amplitude_with(&set.spectrum(), t, pair)
}

pub fn transfer_amplitude_with(spectrum: &Spectrum, t: f64, pair: &EdgeStatePair) -> Complex64 {
    Series::new(spectrum, pair).at(t)
}

/// The amplitude as `sum_lambda w_lambda exp(i t lambda)`, with character
/// weights merged per distinct eigenvalue so repeated evaluation is cheap.
struct Series {
    terms: Vec<(f64, f64)>,
}

impl Series {
    fn new(spectrum: &Spectrum, pair: &EdgeStatePair) -> Self {
        let EdgeStatePair { a, b, c, d } = *pair;
        let mut merged: BTreeMap<i64, i64> = BTreeMap::new();
        for (x, lambda) in spectrum.iter() {
            let weight =
                x.character(c + a) - x.character(c + b) - x.character(d + a) + x.character(d + b);
            if weight != 0 {
                *merged.entry(lambda).or_default() += weight;
            }
        }
        let scale = 2.0 * (1u64 << spectrum.m()) as f64;
        let terms = merged
            .into_iter()
            .filter(|&(_, w)| w != 0)
            .map(|(lambda, w)| (lambda as f64, w as f64 / scale))
            .collect();
        Series { terms }
    }

    fn at(&self, t: f64) -> Complex64 {
        self.terms
            .iter()
            .map(|&(lambda, w)| Complex64::from_polar(w, t * lambda))
            .sum()
    }

    /// Amplitudes at `t_j = 2 pi j / points` for `j = 1..=points`, advancing
    /// each term by a fixed rotation instead of recomputing sines.
    fn scan(&self, points: u32) -> impl Iterator<Item = (f64, Complex64)> + '_ {
        let step = 2.0 * PI / points as f64;
        let rotations: Vec<Complex64> = self
            .terms
            .iter()
            .map(|&(lambda, _)| Complex64::from_polar(1.0, step * lambda))
            .collect();
        let mut phasors: Vec<Complex64> = self
            .terms
            .iter()
            .map(|&(_, w)| Complex64::new(w, 0.0))
            .collect();
        (1..=points).map(move |j| {
            let mut sum = Complex64::new(0.0, 0.0);
            for (p, r) in phasors.iter_mut().zip(&rotations) {
                *p *= r;
                sum += *p;
            }
            (step * j as f64, sum)
        })
    }
}

pub fn fidelity(amplitude: Complex64) -> f64 {
    amplitude.norm_sqr()
}

/// Report at `t = coefficient * pi`.
pub fn fidelity_at(
    spectrum: &Spectrum,
    pair: &EdgeStatePair,
    coefficient: Ratio<i64>,
    tolerance: f64,
) -> FidelityReport {
    report_at_pi(&Series::new(spectrum, pair), coefficient, tolerance)
}

pub fn fidelity_at_real(
    spectrum: &Spectrum,
    pair: &EdgeStatePair,
    t: f64,
    tolerance: f64,
) -> FidelityReport {
    report(&Series::new(spectrum, pair), t, tolerance)
}

fn report(series: &Series, t: f64, tolerance: f64) -> FidelityReport {
    let amplitude = series.at(t);
    FidelityReport {
        t,
        t_pi: None,
        amplitude,
        fidelity: fidelity(amplitude),
        tolerance,
    }
}

fn report_at_pi(series: &Series, coefficient: Ratio<i64>, tolerance: f64) -> FidelityReport {
    let t = PI * (*coefficient.numer() as f64) / (*coefficient.denom() as f64);
    FidelityReport {
        t_pi: Some(coefficient),
        ..report(series, t, tolerance)
    }
}

/// `H(t) = sum_g exp(i t lambda_g) E_g` with `(E_g)_{u,v} = chi_g(u + v) / n`.
///
/// Every projection depends on `(u, v)` only through `u + v`, so the sum is
/// accumulated once per difference and then spread over the matrix.
pub fn dense_transfer_matrix(
    set: &ConnectionSet,
    t: f64,
) -> Result<DMatrix<Complex64>, OracleError> {
    let m = set.m();
    if m > DENSE_MAX_M {
        return Err(OracleError::TooLarge(m));
    }
    let n = set.order();
    let spectrum = set.spectrum();
    let phases: Vec<Complex64> = spectrum
        .values()
        .iter()
        .map(|&l| Complex64::from_polar(1.0 / n as f64, t * l as f64))
        .collect();
    let by_difference: Vec<Complex64> = (0..n as u32)
        .map(|w| {
            phases
                .iter()
                .enumerate()
                .map(|(g, &p)| p * GroupElement(g as u32).character(GroupElement(w)) as f64)
                .sum()
        })
        .collect();
    Ok(DMatrix::from_fn(n, n, |u, v| by_difference[u ^ v]))
}

#[derive(Clone, Debug, PartialEq)]
pub struct Sweep {
    /// Highest fidelity among the candidate times.
    pub best: FidelityReport,
    /// Candidate times reaching `1 - tolerance`, sorted by `t`.
    pub hits: Vec<FidelityReport>,
    /// Heuristic grid hits, only scanned when the power-of-two premise fails.
    pub grid_hits: Vec<FidelityReport>,
    pub ell_max: u32,
    pub premise_holds: bool,
}

/// Evaluates every `t = (2u + 1) pi / 2^ell` with `ell <= ell_max(|S|)` and
/// `u < 2^ell`, which covers one period `(0, 2 pi)` of the integral spectrum.
pub fn sweep_candidate_times(
    set: &ConnectionSet,
    pair: &EdgeStatePair,
    tolerance: f64,
) -> Result<Sweep, OracleError> {
    if !(tolerance > 0.0 && tolerance <= 1e-3) {
        return Err(OracleError::BadTolerance(tolerance));
    }
    let series = Series::new(&set.spectrum(), pair);
    let bound = time_bound_along(set, pair.direction());

    let mut reports = Vec::new();
    for ell in 0..=bound.ell_max {
        let denom = 1i64 << ell;
        for u in 0..denom {
            reports.push(report_at_pi(
                &series,
                Ratio::new(2 * u + 1, denom),
                tolerance,
            ));
        }
    }
    reports.sort_by(|x, y| x.t.total_cmp(&y.t));

    let best = reports
        .iter()
        .max_by(|x, y| x.fidelity.total_cmp(&y.fidelity))
        .cloned()
        .expect("ell = 0 always contributes t = pi");
    let hits = reports.into_iter().filter(FidelityReport::is_hit).collect();

    // With a single distinct eigenvalue left the fidelity is constant in t.
    let flat = series.terms.len() <= 1 && !report(&series, PI, tolerance).is_hit();
    let grid_hits = if !bound.premise_holds && !flat {
        series
            .scan(GRID_POINTS)
            .filter(|(_, amplitude)| fidelity(*amplitude) >= 1.0 - tolerance)
            .map(|(t, _)| report(&series, t, tolerance))
            .collect()
    } else {
        Vec::new()
    };

    Ok(Sweep {
        best,
        hits,
        grid_hits,
        ell_max: bound.ell_max,
        premise_holds: bound.premise_holds,
    })
}
