//! Cubelike graphs `Cay(F_2^m, S)`: group elements, connection sets and
//! their exact integer spectra.
//!
//! Coordinate `x_1` of an element is the most significant of its `m` bits,
//! so the tuple `(110)` is the mask `0b110`. Characters are
//! `chi_x(z) = (-1)^(x . z)`.

use std::fmt;
use std::ops::{Add, BitXor};

use num_rational::Ratio;
use thiserror::Error;

use crate::boolfn::{walsh_hadamard_in_place, BooleanFunction};
use crate::MAX_M;

/// An element of F_2^m stored as an `m`-bit mask.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct GroupElement(pub u32);

impl GroupElement {
    pub const ZERO: GroupElement = GroupElement(0);

    pub fn bits(self) -> u32 {
        self.0
    }

    pub fn is_zero(self) -> bool {
        self.0 == 0
    }

    /// The all-ones vector of F_2^m.
    pub fn ones(m: u32) -> GroupElement {
        GroupElement(((1u64 << m) - 1) as u32)
    }

    pub fn fits(self, m: u32) -> bool {
        (self.0 as u64) < (1u64 << m)
    }

    /// Standard inner product over F_2.
    pub fn dot(self, other: GroupElement) -> bool {
        (self.0 & other.0).count_ones() & 1 == 1
    }

    /// `chi_self(z)` as `+1` or `-1`.
    pub fn character(self, z: GroupElement) -> i64 {
        if self.dot(z) {
            -1
        } else {
            1
        }
    }

    /// MSB-first binary rendering, `m` characters wide.
    pub fn to_binary(self, m: u32) -> String {
        (0..m)
            .rev()
            .map(|i| if (self.0 >> i) & 1 == 1 { '1' } else { '0' })
            .collect()
    }

    /// Mask for the coordinate tuple `(x_1, ..., x_m)`.
    pub fn from_coords(coords: &[bool]) -> GroupElement {
        GroupElement(coords.iter().fold(0, |acc, &b| (acc << 1) | b as u32))
    }
}

impl Add for GroupElement {
    type Output = GroupElement;

    #[allow(clippy::suspicious_arithmetic_impl)]
    fn add(self, rhs: GroupElement) -> GroupElement {
        GroupElement(self.0 ^ rhs.0)
    }
}

impl BitXor for GroupElement {
    type Output = GroupElement;

    #[allow(clippy::suspicious_arithmetic_impl)]
    fn bitxor(self, rhs: GroupElement) -> GroupElement {
        self + rhs
    }
}

impl fmt::Binary for GroupElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Binary::fmt(&self.0, f)
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GraphError {
    #[error("dimension {0} outside 1..={MAX_M}")]
    DimensionOutOfRange(u32),
    #[error("connection set may not contain the identity")]
    ZeroElement,
    #[error("element {element:#b} does not fit in {m} bits")]
    WidthMismatch { element: u32, m: u32 },
}

pub(crate) fn check_dimension(m: u32) -> Result<(), GraphError> {
    if m == 0 || m > MAX_M {
        Err(GraphError::DimensionOutOfRange(m))
    } else {
        Ok(())
    }
}

/// The connection set `S` of a cubelike graph: sorted, duplicate free and
/// never containing `0`. In characteristic 2 every element is its own
/// negative, so `S = -S` always holds.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ConnectionSet {
    m: u32,
    members: Vec<GroupElement>,
}

impl ConnectionSet {
    /// Sorts and deduplicates `elements`; rejects `0` and out-of-range masks.
    pub fn new(
        m: u32,
        elements: impl IntoIterator<Item = GroupElement>,
    ) -> Result<Self, GraphError> {
        check_dimension(m)?;
        let mut members = Vec::new();
        for z in elements {
            if !z.fits(m) {
                return Err(GraphError::WidthMismatch { element: z.0, m });
            }
            if z.is_zero() {
                return Err(GraphError::ZeroElement);
            }
            members.push(z);
        }
        members.sort_unstable();
        members.dedup();
        Ok(ConnectionSet { m, members })
    }

    /// The support of `f` as a connection set; fails when `f(0) = 1`.
    pub fn from_function(f: &BooleanFunction) -> Result<Self, GraphError> {
        Self::new(f.m(), f.support())
    }

    pub fn m(&self) -> u32 {
        self.m
    }

    pub fn order(&self) -> usize {
        1usize << self.m
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn members(&self) -> &[GroupElement] {
        &self.members
    }

    pub fn contains(&self, z: GroupElement) -> bool {
        self.members.binary_search(&z).is_ok()
    }

    /// Whether `{u, v}` is an edge, i.e. `u + v` lies in `S`.
    pub fn is_edge(&self, u: GroupElement, v: GroupElement) -> bool {
        self.contains(u + v)
    }

    pub fn indicator(&self) -> BooleanFunction {
        BooleanFunction::from_support(self.m, &self.members).expect("members fit the dimension")
    }

    /// Rank of the members over GF(2).
    pub fn rank(&self) -> u32 {
        let mut basis = [0u32; 32];
        let mut rank = 0;
        for z in &self.members {
            let mut r = z.0;
            while r != 0 {
                let lead = 31 - r.leading_zeros() as usize;
                if basis[lead] == 0 {
                    basis[lead] = r;
                    rank += 1;
                    break;
                }
                r ^= basis[lead];
            }
        }
        rank
    }

    /// `<S> = F_2^m`.
    pub fn is_connected(&self) -> bool {
        self.rank() == self.m
    }

    pub fn spectrum(&self) -> Spectrum {
        spectrum(self)
    }
}

/// The `2^m` adjacency eigenvalues `lambda_x = sum_{z in S} chi_x(z)`,
/// indexed by the character label `x`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Spectrum {
    m: u32,
    lambda: Vec<i64>,
}

impl Spectrum {
    pub fn m(&self) -> u32 {
        self.m
    }

    pub fn get(&self, x: GroupElement) -> i64 {
        self.lambda[x.0 as usize]
    }

    pub fn values(&self) -> &[i64] {
        &self.lambda
    }

    pub fn iter(&self) -> impl Iterator<Item = (GroupElement, i64)> + '_ {
        self.lambda
            .iter()
            .enumerate()
            .map(|(x, &l)| (GroupElement(x as u32), l))
    }
}

/// Exact spectrum via the fast Walsh–Hadamard transform of `1_S`.
pub fn spectrum(set: &ConnectionSet) -> Spectrum {
    let mut lambda = vec![0i64; set.order()];
    for z in set.members() {
        lambda[z.0 as usize] = 1;
    }
    walsh_hadamard_in_place(&mut lambda);
    Spectrum { m: set.m, lambda }
}

/// Entry `(g, h)` of the eigenprojection `E_x`, equal to `chi_x(g + h) / 2^m`.
pub fn eigenprojection_entry(
    m: u32,
    x: GroupElement,
    g: GroupElement,
    h: GroupElement,
) -> Ratio<i64> {
    Ratio::new(x.character(g + h), 1i64 << m)
}
