use std::fmt;
use std::hash::{Hash, Hasher};

use crate::error::{Error, Result};
use crate::walk::noise::mix64;

const WORD_BITS: usize = 64;

fn coordinate_key(i: usize) -> u64 {
    mix64((i as u64) ^ 0x6a09_e667_f3bc_c908)
}

/// A vertex of the hypercube `{-1,+1}^N`, packed 64 spins per word.
///
/// Bit `1` encodes spin `+1`. Bits past the dimension are always zero, so the
/// derived equality is exact on the packed words. The hash is an incrementally
/// maintained XOR of per-coordinate keys over the `+1` coordinates, which makes
/// hashing O(1) regardless of `N` while staying a pure function of the bits.
#[derive(Clone, PartialEq, Eq)]
pub struct Configuration {
    dimension: usize,
    words: Vec<u64>,
    fingerprint: u64,
}

impl Configuration {
    /// The all-plus configuration `+`.
    pub fn all_plus(dimension: usize) -> Result<Self> {
        Self::check_dimension(dimension)?;
        let mut words = vec![u64::MAX; dimension.div_ceil(WORD_BITS)];
        let tail = dimension % WORD_BITS;
        if tail != 0 {
            *words.last_mut().unwrap() = (1u64 << tail) - 1;
        }
        let fingerprint = (0..dimension).fold(0, |acc, i| acc ^ coordinate_key(i));
        Ok(Self {
            dimension,
            words,
            fingerprint,
        })
    }

    /// The all-minus configuration `-`.
    pub fn all_minus(dimension: usize) -> Result<Self> {
        Self::check_dimension(dimension)?;
        Ok(Self {
            dimension,
            words: vec![0; dimension.div_ceil(WORD_BITS)],
            fingerprint: 0,
        })
    }

    /// Builds a configuration from spins given as `+1`/`-1`.
    pub fn from_spins(spins: &[i8]) -> Result<Self> {
        let mut c = Self::all_minus(spins.len())?;
        for (i, &s) in spins.iter().enumerate() {
            match s {
                1 => c.set_unchecked(i, true),
                -1 => {}
                other => return Err(Error::invalid(format!("spin must be +1 or -1, got {other}"))),
            }
        }
        Ok(c)
    }

    fn check_dimension(dimension: usize) -> Result<()> {
        if dimension == 0 {
            return Err(Error::invalid("dimension must be at least 1"));
        }
        Ok(())
    }

    fn check_index(&self, i: usize) -> Result<()> {
        if i >= self.dimension {
            return Err(Error::IndexOutOfRange {
                index: i,
                dimension: self.dimension,
            });
        }
        Ok(())
    }

    pub fn dimension(&self) -> usize {
        self.dimension
    }

    pub fn words(&self) -> &[u64] {
        &self.words
    }

    /// Spin at coordinate `i` as `+1` or `-1`.
    pub fn spin(&self, i: usize) -> Result<i8> {
        self.check_index(i)?;
        Ok(if self.is_plus_unchecked(i) { 1 } else { -1 })
    }

    pub fn spins(&self) -> Vec<i8> {
        (0..self.dimension)
            .map(|i| if self.is_plus_unchecked(i) { 1 } else { -1 })
            .collect()
    }

    #[inline]
    pub(crate) fn is_plus_unchecked(&self, i: usize) -> bool {
        (self.words[i / WORD_BITS] >> (i % WORD_BITS)) & 1 == 1
    }

    #[inline]
    pub(crate) fn flip_unchecked(&mut self, i: usize) {
        self.words[i / WORD_BITS] ^= 1u64 << (i % WORD_BITS);
        self.fingerprint ^= coordinate_key(i);
    }

    #[inline]
    pub(crate) fn set_unchecked(&mut self, i: usize, plus: bool) {
        if self.is_plus_unchecked(i) != plus {
            self.flip_unchecked(i);
        }
    }

    /// Toggles coordinate `i` in place.
    pub fn flip_in_place(&mut self, i: usize) -> Result<()> {
        self.check_index(i)?;
        self.flip_unchecked(i);
        Ok(())
    }

    /// Sets coordinate `i` to `+1` (`plus == true`) or `-1`.
    pub fn set(&mut self, i: usize, plus: bool) -> Result<()> {
        self.check_index(i)?;
        self.set_unchecked(i, plus);
        Ok(())
    }

    /// Returns `η^i`: a copy differing from `self` exactly at coordinate `i`.
    pub fn flip_coordinate(&self, i: usize) -> Result<Self> {
        let mut out = self.clone();
        out.flip_in_place(i)?;
        Ok(out)
    }

    /// Number of `-1` spins, i.e. the distance to the all-plus vertex.
    pub fn minus_count(&self) -> usize {
        let plus: u32 = self.words.iter().map(|w| w.count_ones()).sum();
        self.dimension - plus as usize
    }

    /// Number of coordinates where the two configurations disagree.
    pub fn hamming_distance(&self, other: &Self) -> Result<usize> {
        if self.dimension != other.dimension {
            return Err(Error::DimensionMismatch {
                left: self.dimension,
                right: other.dimension,
            });
        }
        Ok(self
            .words
            .iter()
            .zip(&other.words)
            .map(|(a, b)| (a ^ b).count_ones() as usize)
            .sum())
    }

    /// Hamming distance divided by `N`.
    pub fn normalized_distance(&self, other: &Self) -> Result<f64> {
        Ok(self.hamming_distance(other)? as f64 / self.dimension as f64)
    }

    /// Packs the configuration of a dimension `N ≤ 64` into one word.
    pub fn as_u64(&self) -> Option<u64> {
        (self.dimension <= WORD_BITS).then(|| self.words[0])
    }

    /// Inverse of [`Configuration::as_u64`]; bits at or above `dimension` must be zero.
    pub fn from_u64(dimension: usize, bits: u64) -> Result<Self> {
        if dimension > WORD_BITS {
            return Err(Error::invalid("from_u64 supports dimensions up to 64"));
        }
        let mut c = Self::all_minus(dimension)?;
        if dimension < WORD_BITS && bits >> dimension != 0 {
            return Err(Error::invalid("bits set beyond the dimension"));
        }
        for i in 0..dimension {
            if (bits >> i) & 1 == 1 {
                c.flip_unchecked(i);
            }
        }
        Ok(c)
    }
}

pub fn flip_coordinate(c: &Configuration, i: usize) -> Result<Configuration> {
    c.flip_coordinate(i)
}

pub fn hamming_distance(a: &Configuration, b: &Configuration) -> Result<usize> {
    a.hamming_distance(b)
}

impl Hash for Configuration {
    fn hash<H: Hasher>(&self, state: &mut H) {
        state.write_u64(self.fingerprint);
    }
}

impl fmt::Debug for Configuration {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.dimension <= 64 {
            let s: String = (0..self.dimension)
                .map(|i| if self.is_plus_unchecked(i) { '+' } else { '-' })
                .collect();
            write!(f, "Configuration({s})")
        } else {
            write!(
                f,
                "Configuration(N={}, minus={})",
                self.dimension,
                self.minus_count()
            )
        }
    }
}
