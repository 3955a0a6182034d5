//! The bitwise delta function and delta profiles.
//!
//! For distinct vertices `a` and `b`, `delta(a, b)` is the highest bit
//! position where their binary expansions differ. For an increasing tuple
//! `(a_1, ..., a_r)` the profile is `delta(a_i, a_{i+1})` for `i < r`.
//!
//! Three laws hold for every increasing tuple and are exercised exhaustively
//! in the tests:
//!
//! * A: `delta(a, b) != delta(b, c)` for `a < b < c`;
//! * B: `delta(a_1, a_r)` is the maximum of the profile;
//! * C: for a 4-tuple, `d1 > d2` implies `d1 != d3`.

use std::fmt;

use crate::error::{Error, Result};

/// Highest differing bit position of two vertices.
pub type DeltaValue = usize;

/// Highest bit position at which `a` and `b` differ.
///
/// For `a < b` the bit of `b` at that position is 1 and the bit of `a` is 0.
pub fn delta(a: u64, b: u64) -> Result<DeltaValue> {
    if a == b {
        return Err(Error::EqualVertices(a));
    }
    Ok(delta_unchecked(a, b))
}

#[inline(always)]
pub(crate) fn delta_unchecked(a: u64, b: u64) -> DeltaValue {
    debug_assert_ne!(a, b);
    (63 - (a ^ b).leading_zeros()) as DeltaValue
}

/// A strictly increasing list of vertices.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct OrderedTuple(Vec<u64>);

impl OrderedTuple {
    pub fn new(vertices: Vec<u64>) -> Result<Self> {
        if vertices.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::NotSorted);
        }
        Ok(Self(vertices))
    }

    pub fn as_slice(&self) -> &[u64] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn into_vec(self) -> Vec<u64> {
        self.0
    }
}

impl std::ops::Index<usize> for OrderedTuple {
    type Output = u64;

    fn index(&self, i: usize) -> &u64 {
        &self.0[i]
    }
}

impl fmt::Display for OrderedTuple {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_spaced(f, &self.0)
    }
}

pub(crate) fn write_spaced<T: fmt::Display>(f: &mut fmt::Formatter<'_>, xs: &[T]) -> fmt::Result {
    for (i, x) in xs.iter().enumerate() {
        if i > 0 {
            f.write_str(" ")?;
        }
        write!(f, "{x}")?;
    }
    Ok(())
}

/// Delta values of consecutive members of an [`OrderedTuple`].
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct DeltaProfile(Vec<DeltaValue>);

impl DeltaProfile {
    /// Wraps raw values. Consecutive values must differ, as they do for any
    /// profile produced by [`delta_profile`].
    pub fn from_values(values: Vec<DeltaValue>) -> Result<Self> {
        if values.windows(2).any(|w| w[0] == w[1]) {
            return Err(Error::BadParameters(
                "consecutive profile values must differ".into(),
            ));
        }
        Ok(Self(values))
    }

    pub fn values(&self) -> &[DeltaValue] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn max(&self) -> Option<DeltaValue> {
        self.0.iter().copied().max()
    }
}

pub fn delta_profile(tuple: &OrderedTuple) -> Result<DeltaProfile> {
    if tuple.len() < 2 {
        return Err(Error::TooShort {
            needed: 2,
            got: tuple.len(),
        });
    }
    Ok(DeltaProfile(profile_of(tuple.as_slice())))
}

/// Profile of a slice already known to be strictly increasing.
pub(crate) fn profile_of(vertices: &[u64]) -> Vec<DeltaValue> {
    vertices
        .windows(2)
        .map(|w| delta_unchecked(w[0], w[1]))
        .collect()
}

pub fn check_property_a(a: u64, b: u64, c: u64) -> Result<bool> {
    if !(a < b && b < c) {
        return Err(Error::NotSorted);
    }
    Ok(delta_unchecked(a, b) != delta_unchecked(b, c))
}

pub fn check_property_b(tuple: &OrderedTuple) -> Result<bool> {
    let profile = delta_profile(tuple)?;
    let ends = delta_unchecked(tuple[0], tuple[tuple.len() - 1]);
    Ok(profile.max() == Some(ends))
}

pub fn check_property_c(quad: &OrderedTuple) -> Result<bool> {
    if quad.len() != 4 {
        return Err(Error::WrongArity {
            expected: 4,
            got: quad.len(),
        });
    }
    let p = profile_of(quad.as_slice());
    Ok(p[0] <= p[1] || p[0] != p[2])
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ExtremumTag {
    LocalMin,
    LocalMax,
    Neither,
}

/// One tag per interior profile entry. Entry `k` of the result describes
/// the profile value at 1-based position `k + 2`.
pub fn classify_extrema(profile: &DeltaProfile) -> Vec<ExtremumTag> {
    profile
        .values()
        .windows(3)
        .map(|w| {
            if w[0] > w[1] && w[1] < w[2] {
                ExtremumTag::LocalMin
            } else if w[0] < w[1] && w[1] > w[2] {
                ExtremumTag::LocalMax
            } else {
                ExtremumTag::Neither
            }
        })
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Monotonicity {
    Increasing,
    Decreasing,
    No,
}

/// Monotonicity of a value sequence. A single value counts as increasing.
pub fn monotonicity(values: &[DeltaValue]) -> Result<Monotonicity> {
    if values.is_empty() {
        return Err(Error::EmptyProfile);
    }
    if values.windows(2).all(|w| w[0] < w[1]) {
        Ok(Monotonicity::Increasing)
    } else if values.windows(2).all(|w| w[0] > w[1]) {
        Ok(Monotonicity::Decreasing)
    } else {
        Ok(Monotonicity::No)
    }
}

pub fn is_monotone(profile: &DeltaProfile) -> Result<Monotonicity> {
    monotonicity(profile.values())
}
