use std::fmt;
use std::str::FromStr;

/// Fixed-length binary input vector, bit 0 first.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Retina {
    len: usize,
    words: Vec<u64>,
}

impl Retina {
    pub fn zeros(len: usize) -> Self {
        Self {
            len,
            words: vec![0; len.div_ceil(64)],
        }
    }

    pub fn from_bits(bits: &[bool]) -> Self {
        let mut r = Self::zeros(bits.len());
        for (i, &b) in bits.iter().enumerate() {
            if b {
                r.set(i);
            }
        }
        r
    }

    /// Builds a retina of `len` bits with the given positions lit.
    ///
    /// # Panics
    ///
    /// Panics if a position is out of range.
    pub fn from_ones<I: IntoIterator<Item = usize>>(len: usize, ones: I) -> Self {
        let mut r = Self::zeros(len);
        for i in ones {
            r.set(i);
        }
        r
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    #[inline]
    pub fn get(&self, i: usize) -> bool {
        assert!(i < self.len, "bit {i} out of range for retina of {}", self.len);
        self.words[i / 64] >> (i % 64) & 1 == 1
    }

    #[inline]
    pub fn set(&mut self, i: usize) {
        assert!(i < self.len, "bit {i} out of range for retina of {}", self.len);
        self.words[i / 64] |= 1 << (i % 64);
    }

    pub fn count_ones(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    /// Positions of lit bits in ascending order.
    pub fn ones(&self) -> impl Iterator<Item = usize> + '_ {
        self.words.iter().enumerate().flat_map(|(wi, &w)| {
            let mut rest = w;
            std::iter::from_fn(move || {
                if rest == 0 {
                    return None;
                }
                let bit = rest.trailing_zeros() as usize;
                rest &= rest - 1;
                Some(wi * 64 + bit)
            })
        })
    }

    /// Number of differing bits.
    ///
    /// # Panics
    ///
    /// Panics if the lengths differ.
    pub fn hamming(&self, other: &Retina) -> usize {
        assert_eq!(self.len, other.len, "hamming distance needs equal lengths");
        self.words
            .iter()
            .zip(&other.words)
            .map(|(a, b)| (a ^ b).count_ones() as usize)
            .sum()
    }
}

impl fmt::Debug for Retina {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.len <= 128 {
            write!(f, "Retina({self})")
        } else {
            write!(f, "Retina(len={}, ones={})", self.len, self.count_ones())
        }
    }
}

impl fmt::Display for Retina {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.len {
            f.write_str(if self.get(i) { "1" } else { "0" })?;
        }
        Ok(())
    }
}

/// Parses strings like `"10110100"`, bit 0 leftmost.
impl FromStr for Retina {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bits = s
            .chars()
            .map(|c| match c {
                '0' => Ok(false),
                '1' => Ok(true),
                other => Err(format!("invalid retina character {other:?}")),
            })
            .collect::<Result<Vec<_>, _>>()?;
        Ok(Self::from_bits(&bits))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_and_display() {
        let r: Retina = "10110100".parse().unwrap();
        assert_eq!(r.len(), 8);
        assert_eq!(r.ones().collect::<Vec<_>>(), vec![0, 2, 3, 5]);
        assert_eq!(r.to_string(), "10110100");
        assert!("10x".parse::<Retina>().is_err());
    }

    #[test]
    fn ones_across_word_boundaries() {
        let r = Retina::from_ones(200, [0, 63, 64, 127, 199]);
        assert_eq!(r.ones().collect::<Vec<_>>(), vec![0, 63, 64, 127, 199]);
        assert_eq!(r.count_ones(), 5);
    }

    #[test]
    fn hamming_distance() {
        let a: Retina = "1100".parse().unwrap();
        let b: Retina = "1010".parse().unwrap();
        assert_eq!(a.hamming(&b), 2);
        assert_eq!(a.hamming(&a), 0);
    }
}
