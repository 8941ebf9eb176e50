//! Boolean functions on F_2^m, their Walsh–Hadamard spectra, and the bent /
//! semi-bent families used by the lifting constructions.

use std::collections::BTreeMap;

use num_integer::Integer;
use thiserror::Error;

use crate::cubelike::{check_dimension, GraphError, GroupElement};
use crate::gf2m::{FieldSpec, TobBasis};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum BoolFnError {
    #[error("truth table has {got} entries, expected 2^{m}")]
    TableLength { m: u32, got: usize },
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error("invalid parameters: {0}")]
    BadParameters(String),
}

/// A Boolean function given by its truth table; `table[x]` is `f(x)` with
/// `x` read as a [`GroupElement`] mask.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct BooleanFunction {
    m: u32,
    table: Vec<bool>,
}

impl BooleanFunction {
    pub fn new(m: u32, table: Vec<bool>) -> Result<Self, BoolFnError> {
        check_dimension(m)?;
        if table.len() != 1usize << m {
            return Err(BoolFnError::TableLength {
                m,
                got: table.len(),
            });
        }
        Ok(BooleanFunction { m, table })
    }

    pub fn from_fn(m: u32, f: impl Fn(GroupElement) -> bool) -> Result<Self, BoolFnError> {
        check_dimension(m)?;
        let table = (0..1u32 << m).map(|x| f(GroupElement(x))).collect();
        Ok(BooleanFunction { m, table })
    }

    pub fn zero(m: u32) -> Result<Self, BoolFnError> {
        Self::from_fn(m, |_| false)
    }

    /// Indicator function of `support`.
    pub fn from_support(m: u32, support: &[GroupElement]) -> Result<Self, BoolFnError> {
        check_dimension(m)?;
        let mut table = vec![false; 1usize << m];
        for z in support {
            if !z.fits(m) {
                return Err(GraphError::WidthMismatch { element: z.0, m }.into());
            }
            table[z.0 as usize] = true;
        }
        Ok(BooleanFunction { m, table })
    }

    pub fn m(&self) -> u32 {
        self.m
    }

    pub fn table(&self) -> &[bool] {
        &self.table
    }

    pub fn eval(&self, x: GroupElement) -> bool {
        self.table[x.0 as usize]
    }

    /// `supp(f)` in ascending mask order.
    pub fn support(&self) -> Vec<GroupElement> {
        self.table
            .iter()
            .enumerate()
            .filter(|(_, &v)| v)
            .map(|(x, _)| GroupElement(x as u32))
            .collect()
    }

    pub fn weight(&self) -> usize {
        self.table.iter().filter(|&&v| v).count()
    }

    /// `1 + f`.
    pub fn complement(&self) -> BooleanFunction {
        BooleanFunction {
            m: self.m,
            table: self.table.iter().map(|v| !v).collect(),
        }
    }

    pub fn walsh(&self) -> WalshSpectrum {
        wht(self)
    }
}

/// `values[a] = sum_x (-1)^(f(x) + a . x)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct WalshSpectrum {
    m: u32,
    values: Vec<i64>,
}

impl WalshSpectrum {
    pub fn m(&self) -> u32 {
        self.m
    }

    pub fn values(&self) -> &[i64] {
        &self.values
    }

    pub fn get(&self, a: GroupElement) -> i64 {
        self.values[a.0 as usize]
    }

    /// Histogram of the spectrum values.
    pub fn frequencies(&self) -> BTreeMap<i64, usize> {
        let mut out = BTreeMap::new();
        for &v in &self.values {
            *out.entry(v).or_insert(0) += 1;
        }
        out
    }
}

/// In-place unnormalised Walsh–Hadamard butterfly:
/// `data[a] <- sum_x data[x] (-1)^(a . x)`.
pub fn walsh_hadamard_in_place(data: &mut [i64]) {
    let n = data.len();
    assert!(n.is_power_of_two(), "length must be a power of two");
    let mut half = 1;
    while half < n {
        for block in data.chunks_exact_mut(2 * half) {
            let (lo, hi) = block.split_at_mut(half);
            for (u, v) in lo.iter_mut().zip(hi.iter_mut()) {
                let (a, b) = (*u, *v);
                *u = a + b;
                *v = a - b;
            }
        }
        half *= 2;
    }
}

/// Fast Walsh–Hadamard transform of `f`, `O(m 2^m)`.
pub fn wht(f: &BooleanFunction) -> WalshSpectrum {
    let mut values: Vec<i64> = f.table.iter().map(|&v| if v { -1 } else { 1 }).collect();
    walsh_hadamard_in_place(&mut values);
    WalshSpectrum { m: f.m, values }
}

pub fn spectrum_frequencies(f: &BooleanFunction) -> BTreeMap<i64, usize> {
    wht(f).frequencies()
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Classification {
    /// Flat spectrum `|f^(a)| = 2^(m/2)`; `dual` encodes the signs.
    Bent {
        dual: BooleanFunction,
    },
    /// Values in `{0, ±2^(floor(m/2)+1)}`.
    SemiBent,
    /// Values in `{0, ±amplitude}` without being bent or semi-bent.
    Plateaued {
        amplitude: i64,
    },
    Other,
}

impl Classification {
    pub fn is_bent(&self) -> bool {
        matches!(self, Classification::Bent { .. })
    }

    pub fn name(&self) -> &'static str {
        match self {
            Classification::Bent { .. } => "bent",
            Classification::SemiBent => "semi-bent",
            Classification::Plateaued { .. } => "plateaued",
            Classification::Other => "other",
        }
    }
}

/// Amplitude used for semi-bent functions: `2^((m+1)/2)` for odd `m`,
/// `2^(m/2+1)` for even `m`.
pub fn semi_bent_amplitude(m: u32) -> i64 {
    1i64 << (m / 2 + 1)
}

pub fn classify(f: &BooleanFunction) -> Classification {
    let spectrum = wht(f);
    let m = f.m;
    let values = spectrum.values();

    if m.is_multiple_of(2) {
        let flat = 1i64 << (m / 2);
        if values.iter().all(|v| v.abs() == flat) {
            let dual = BooleanFunction {
                m,
                table: values.iter().map(|&v| v < 0).collect(),
            };
            debug_assert!(
                wht(&dual).values().iter().all(|v| v.abs() == flat),
                "dual of a bent function must be bent"
            );
            return Classification::Bent { dual };
        }
    }

    let amplitude = match values.iter().find(|v| **v != 0) {
        Some(v) => v.abs(),
        None => return Classification::Other,
    };
    if values.iter().any(|v| *v != 0 && v.abs() != amplitude) {
        return Classification::Other;
    }
    if amplitude == semi_bent_amplitude(m) {
        Classification::SemiBent
    } else {
        Classification::Plateaued { amplitude }
    }
}

/// Truth table of `x -> Tr(x^(2^e + 1))` in the coordinates of `basis`.
pub fn gold_function(
    field: &FieldSpec,
    basis: &TobBasis,
    e: u32,
) -> Result<BooleanFunction, BoolFnError> {
    let m = field.m();
    if basis.field() != field {
        return Err(BoolFnError::BadParameters(
            "basis belongs to a different field".into(),
        ));
    }
    if m.is_multiple_of(2) {
        return Err(BoolFnError::BadParameters(format!(
            "Gold functions need odd m, got {m}"
        )));
    }
    if e == 0 || e.gcd(&m) != 1 {
        return Err(BoolFnError::BadParameters(format!(
            "need gcd(e, m) = 1 with e >= 1, got e = {e}, m = {m}"
        )));
    }
    BooleanFunction::from_fn(m, |v| {
        let x = basis.expand(v);
        field.trace(field.mul(field.frobenius(x, e), x)) == 1
    })
}

/// `f(x, y) = x . rev(y) + <linear_mask, (x, y)> + affine` on F_2^(2k), where
/// `x` is the leading `k` coordinates and coordinate `z_i` is paired with
/// `z_(2k+1-i)`. With `k = 2`, mask `1000` and no constant this is
/// `z1 z4 + z2 z3 + z1`.
pub fn inner_product_bent(
    k: u32,
    linear_mask: GroupElement,
    affine: bool,
) -> Result<BooleanFunction, BoolFnError> {
    if k == 0 || 2 * k > crate::MAX_M {
        return Err(BoolFnError::BadParameters(format!(
            "k = {k} outside 1..={}",
            crate::MAX_M / 2
        )));
    }
    let m = 2 * k;
    if !linear_mask.fits(m) {
        return Err(GraphError::WidthMismatch {
            element: linear_mask.0,
            m,
        }
        .into());
    }
    let low = (1u32 << k) - 1;
    let f = BooleanFunction::from_fn(m, |z| {
        let x = z.0 >> k;
        let y = (z.0 & low).reverse_bits() >> (32 - k);
        let quadratic = (x & y).count_ones() & 1 == 1;
        quadratic ^ linear_mask.dot(z) ^ affine
    })?;
    debug_assert!(classify(&f).is_bent());
    Ok(f)
}
