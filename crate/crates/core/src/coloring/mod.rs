//! Red/blue colorings of the pairs of `{0, ..., D-1}`.
//!
//! A triple `x < y < z` is *good* for a coloring `phi` when
//! `phi(x, y) = phi(y, z) != phi(x, z)`. The construction needs a coloring
//! in which every `n`-subset of the universe contains a good triple;
//! [`verify_phi`] decides that property and [`random_phi_search`] looks for
//! such colorings by sampling.

pub mod bound;
pub mod steiner;

use std::fmt;
use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::delta::DeltaValue;
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Color {
    Red,
    Blue,
}

impl Color {
    pub fn from_bit(bit: bool) -> Self {
        if bit {
            Color::Blue
        } else {
            Color::Red
        }
    }

    pub fn bit(self) -> bool {
        self == Color::Blue
    }

    pub fn swapped(self) -> Self {
        Color::from_bit(!self.bit())
    }
}

/// Position of the unordered pair `{i, j}`, `i < j`, in the packed vector.
#[inline(always)]
pub fn pair_index(i: usize, j: usize) -> usize {
    debug_assert!(i < j);
    j * (j - 1) / 2 + i
}

fn pair_count(universe: usize) -> usize {
    universe * universe.saturating_sub(1) / 2
}

/// Symmetric coloring of unordered pairs, packed one bit per pair in
/// lower-triangular order. Bit 0 is red, bit 1 is blue.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct PairColoring {
    universe: usize,
    words: Vec<u64>,
}

impl PairColoring {
    /// Every pair gets `color`.
    pub fn uniform(universe: usize, color: Color) -> Self {
        let bits = pair_count(universe);
        let mut words = vec![if color.bit() { u64::MAX } else { 0 }; bits.div_ceil(64)];
        if let Some(last) = words.last_mut() {
            if !bits.is_multiple_of(64) {
                *last &= (1u64 << (bits % 64)) - 1;
            }
        }
        Self { universe, words }
    }

    /// The coloring whose packed bit vector equals the integer `code`.
    /// Only the lowest `C(universe, 2)` bits of `code` are used.
    pub fn from_code(universe: usize, code: u64) -> Self {
        let mut phi = Self::uniform(universe, Color::Red);
        let bits = pair_count(universe);
        if bits > 0 {
            let mask = if bits >= 64 {
                u64::MAX
            } else {
                (1u64 << bits) - 1
            };
            phi.words[0] = code & mask;
        }
        phi
    }

    /// Uniformly random coloring.
    pub fn random<R: Rng + ?Sized>(universe: usize, rng: &mut R) -> Self {
        let mut phi = Self::uniform(universe, Color::Red);
        let bits = pair_count(universe);
        for (w, word) in phi.words.iter_mut().enumerate() {
            let used = (bits - 64 * w).min(64);
            let r: u64 = rng.random();
            *word = if used == 64 {
                r
            } else {
                r & ((1u64 << used) - 1)
            };
        }
        phi
    }

    pub fn universe(&self) -> usize {
        self.universe
    }

    pub fn pair_count(&self) -> usize {
        pair_count(self.universe)
    }

    /// Packed bits as a little-endian word vector.
    pub fn words(&self) -> &[u64] {
        &self.words
    }

    fn check_pair(&self, x: usize, y: usize) -> Result<()> {
        if x == y {
            return Err(Error::EqualArguments(x));
        }
        for v in [x, y] {
            if v >= self.universe {
                return Err(Error::OutOfRange {
                    value: v,
                    size: self.universe,
                });
            }
        }
        Ok(())
    }

    pub fn color(&self, x: DeltaValue, y: DeltaValue) -> Result<Color> {
        self.check_pair(x, y)?;
        Ok(Color::from_bit(self.bit(x, y)))
    }

    pub fn set_color(&mut self, x: DeltaValue, y: DeltaValue, color: Color) -> Result<()> {
        self.check_pair(x, y)?;
        let k = pair_index(x.min(y), x.max(y));
        if color.bit() {
            self.words[k / 64] |= 1 << (k % 64);
        } else {
            self.words[k / 64] &= !(1 << (k % 64));
        }
        Ok(())
    }

    /// Raw color bit of a pair of distinct in-range values, in either order.
    #[inline(always)]
    pub(crate) fn bit(&self, x: usize, y: usize) -> bool {
        let k = if x < y {
            pair_index(x, y)
        } else {
            pair_index(y, x)
        };
        (self.words[k / 64] >> (k % 64)) & 1 == 1
    }

    /// Same coloring with red and blue exchanged.
    pub fn swapped(&self) -> Self {
        let mut out = self.clone();
        let bits = self.pair_count();
        for (w, word) in out.words.iter_mut().enumerate() {
            let used = (bits - 64 * w).min(64);
            *word = !*word
                & if used == 64 {
                    u64::MAX
                } else {
                    (1u64 << used) - 1
                };
        }
        out
    }

    /// The packed bit vector as a big-endian hex number, one digit per four
    /// pairs (pair index 0 is the lowest bit of the last digit).
    pub fn to_hex(&self) -> String {
        let digits = self.pair_count().div_ceil(4);
        (0..digits)
            .rev()
            .map(|d| {
                let nibble = (self.words[d / 16] >> ((d % 16) * 4)) & 0xf;
                char::from_digit(nibble as u32, 16).unwrap()
            })
            .collect()
    }

    pub fn from_hex(universe: usize, hex: &str) -> Result<Self> {
        let bits = pair_count(universe);
        let digits = bits.div_ceil(4);
        if hex.len() != digits {
            return Err(Error::Parse(format!(
                "expected {digits} hex digits for D={universe}, found {}",
                hex.len()
            )));
        }
        let mut phi = Self::uniform(universe, Color::Red);
        for (d, ch) in hex.chars().rev().enumerate() {
            let nibble = ch
                .to_digit(16)
                .ok_or_else(|| Error::Parse(format!("invalid hex digit {ch:?}")))?
                as u64;
            phi.words[d / 16] |= nibble << ((d % 16) * 4);
        }
        let top = 4 * digits;
        if top > bits {
            let last = phi.words.len() - 1;
            if phi.words[last] >> (bits % 64) != 0 {
                return Err(Error::Parse("padding bits must be zero".into()));
            }
        }
        Ok(phi)
    }

    /// True iff `phi(x,y) = phi(y,z) != phi(x,z)`; requires `x < y < z`.
    pub fn is_good_triple(&self, x: DeltaValue, y: DeltaValue, z: DeltaValue) -> Result<bool> {
        if !(x < y && y < z) {
            return Err(Error::NotSorted);
        }
        if z >= self.universe {
            return Err(Error::OutOfRange {
                value: z,
                size: self.universe,
            });
        }
        Ok(self.good(x, y, z))
    }

    /// Good-triple test on three distinct values `x < y < z` (or the mirrored
    /// order `x > y > z`, for which the condition is the same).
    #[inline(always)]
    pub(crate) fn good(&self, x: usize, y: usize, z: usize) -> bool {
        let xy = self.bit(x, y);
        xy == self.bit(y, z) && xy != self.bit(x, z)
    }

    /// Lexicographically first good triple inside the increasing list `set`.
    pub fn find_good_triple(&self, set: &[DeltaValue]) -> Result<Option<[DeltaValue; 3]>> {
        if set.len() < 3 {
            return Err(Error::TooShort {
                needed: 3,
                got: set.len(),
            });
        }
        if set.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::NotSorted);
        }
        if let Some(&last) = set.last() {
            if last >= self.universe {
                return Err(Error::OutOfRange {
                    value: last,
                    size: self.universe,
                });
            }
        }
        Ok(first_good_triple(self, set))
    }
}

pub(crate) fn first_good_triple(phi: &PairColoring, set: &[usize]) -> Option<[usize; 3]> {
    let n = set.len();
    for i in 0..n {
        for j in i + 1..n {
            for k in j + 1..n {
                if phi.good(set[i], set[j], set[k]) {
                    return Some([set[i], set[j], set[k]]);
                }
            }
        }
    }
    None
}

/// Two-line text form: `D=<universe>` then the hex bit vector.
impl fmt::Display for PairColoring {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "D={}", self.universe)?;
        writeln!(f, "{}", self.to_hex())
    }
}

impl FromStr for PairColoring {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let mut lines = s.lines();
        let header = lines
            .next()
            .ok_or_else(|| Error::Parse("missing D= header".into()))?;
        let universe: usize = header
            .trim()
            .strip_prefix("D=")
            .ok_or_else(|| Error::Parse(format!("bad header {header:?}")))?
            .parse()
            .map_err(|e| Error::Parse(format!("bad universe size: {e}")))?;
        let hex = lines
            .next()
            .ok_or_else(|| Error::Parse("missing hex line".into()))?;
        if lines.any(|l| !l.trim().is_empty()) {
            return Err(Error::Parse("trailing content after hex line".into()));
        }
        Self::from_hex(universe, hex.trim())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum PhiCheck {
    Ok,
    /// A good-triple-free `n`-subset, increasing.
    Counterexample(Vec<DeltaValue>),
}

impl PhiCheck {
    pub fn is_ok(&self) -> bool {
        matches!(self, PhiCheck::Ok)
    }
}

fn check_arity(n: usize, universe: usize) -> Result<()> {
    if n < 3 || n > universe {
        return Err(Error::BadArity { n, d: universe });
    }
    Ok(())
}

/// Decides whether every `n`-subset of the universe contains a good triple.
///
/// Grows good-triple-free sets in increasing order and reports the first
/// one (in lexicographic order) that reaches size `n`.
pub fn verify_phi(phi: &PairColoring, n: usize) -> Result<PhiCheck> {
    check_arity(n, phi.universe())?;
    let mut current = Vec::with_capacity(n);
    if extend_free_set(phi, n, 0, &mut current) {
        Ok(PhiCheck::Counterexample(current))
    } else {
        Ok(PhiCheck::Ok)
    }
}

fn extend_free_set(phi: &PairColoring, n: usize, start: usize, current: &mut Vec<usize>) -> bool {
    let universe = phi.universe();
    for z in start..universe {
        if current.len() + (universe - z) < n {
            return false;
        }
        let creates_good = current
            .iter()
            .enumerate()
            .any(|(i, &x)| current[i + 1..].iter().any(|&y| phi.good(x, y, z)));
        if creates_good {
            continue;
        }
        current.push(z);
        if current.len() == n || extend_free_set(phi, n, z + 1, current) {
            return true;
        }
        current.pop();
    }
    false
}

/// RNG for trial `trial` of a search keyed by `seed`: ChaCha8 seeded from
/// `seed`, on stream `trial`.
pub fn trial_rng(seed: u64, trial: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(trial);
    rng
}

/// Samples up to `trials` uniform colorings and returns the first (by trial
/// index) that passes [`verify_phi`]. Trials run in parallel; the outcome
/// depends only on `(universe, n, trials, seed)`.
pub fn random_phi_search(
    universe: usize,
    n: usize,
    trials: u64,
    seed: u64,
) -> Result<Option<PairColoring>> {
    check_arity(n, universe)?;
    if trials == 0 {
        return Err(Error::BadParameters("trials must be at least 1".into()));
    }
    Ok(random_phi_search_indexed(universe, n, trials, seed).map(|(_, phi)| phi))
}

/// Like [`random_phi_search`], also returning the successful trial index.
/// Arguments must already be validated.
pub(crate) fn random_phi_search_indexed(
    universe: usize,
    n: usize,
    trials: u64,
    seed: u64,
) -> Option<(u64, PairColoring)> {
    (0..trials).into_par_iter().find_map_first(|t| {
        let phi = PairColoring::random(universe, &mut trial_rng(seed, t));
        verify_phi(&phi, n)
            .ok()
            .filter(PhiCheck::is_ok)
            .map(|_| (t, phi))
    })
}
