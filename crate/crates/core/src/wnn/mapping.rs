use super::{Retina, WnnConfig, WnnError};
use crate::rng::SplitMix64;

/// Seeded partition of retina bit positions into `X` tuples of `n` bits.
///
/// `order` is a permutation of `[0, padded_len)` read `n` entries at a time;
/// positions at or beyond `retina_len` are padding and always read 0.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TupleMapping {
    retina_len: usize,
    bits_per_tuple: u32,
    order: Vec<u32>,
    // slot[i] = position of retina bit i inside `order`
    slot: Vec<u32>,
    seeded: bool,
}

impl TupleMapping {
    /// Builds the mapping for `retina_len` bits from the configuration's
    /// tuple width and seed.
    ///
    /// The permutation is a Fisher-Yates shuffle of `0..padded_len` driven by
    /// [`SplitMix64`] seeded with `mapping_seed`.
    pub fn build(retina_len: usize, config: &WnnConfig) -> Result<Self, WnnError> {
        config.validate()?;
        check_len(retina_len)?;
        let n = config.bits_per_tuple as usize;
        let padded = retina_len.div_ceil(n) * n;
        let mut order: Vec<u32> = (0..padded as u32).collect();
        SplitMix64::new(config.mapping_seed).shuffle(&mut order);
        let mut mapping = Self::assemble(retina_len, config.bits_per_tuple, order);
        mapping.seeded = true;
        Ok(mapping)
    }

    /// Builds a mapping from an explicit order, e.g. the identity.
    pub fn with_order(
        retina_len: usize,
        bits_per_tuple: u32,
        order: Vec<u32>,
    ) -> Result<Self, WnnError> {
        WnnConfig::new(bits_per_tuple).validate()?;
        check_len(retina_len)?;
        let n = bits_per_tuple as usize;
        let padded = retina_len.div_ceil(n) * n;
        if order.len() != padded {
            return Err(WnnError::Config(format!(
                "order has {} entries, expected {padded}",
                order.len()
            )));
        }
        let mut seen = vec![false; padded];
        for &i in &order {
            let i = i as usize;
            if i >= padded || seen[i] {
                return Err(WnnError::Config(format!(
                    "order is not a permutation of 0..{padded}"
                )));
            }
            seen[i] = true;
        }
        Ok(Self::assemble(retina_len, bits_per_tuple, order))
    }

    /// Identity order: tuple `k` reads bits `k*n .. k*n+n`.
    pub fn identity(retina_len: usize, bits_per_tuple: u32) -> Result<Self, WnnError> {
        let n = bits_per_tuple.max(1) as usize;
        let padded = retina_len.div_ceil(n) * n;
        Self::with_order(retina_len, bits_per_tuple, (0..padded as u32).collect())
    }

    fn assemble(retina_len: usize, bits_per_tuple: u32, order: Vec<u32>) -> Self {
        let mut slot = vec![0u32; retina_len];
        for (pos, &idx) in order.iter().enumerate() {
            if (idx as usize) < retina_len {
                slot[idx as usize] = pos as u32;
            }
        }
        Self {
            retina_len,
            bits_per_tuple,
            order,
            slot,
            seeded: false,
        }
    }

    pub fn retina_len(&self) -> usize {
        self.retina_len
    }

    pub fn padded_len(&self) -> usize {
        self.order.len()
    }

    pub fn bits_per_tuple(&self) -> u32 {
        self.bits_per_tuple
    }

    pub fn tuple_count(&self) -> usize {
        self.order.len() / self.bits_per_tuple as usize
    }

    pub fn order(&self) -> &[u32] {
        &self.order
    }

    /// True when the order was derived from a seed rather than supplied.
    pub fn is_seeded(&self) -> bool {
        self.seeded
    }

    fn check(&self, retina: &Retina) -> Result<(), WnnError> {
        if retina.len() != self.retina_len {
            return Err(WnnError::LengthMismatch {
                expected: self.retina_len,
                actual: retina.len(),
            });
        }
        Ok(())
    }

    /// All `X` tuple addresses, read in mapping order.
    pub fn extract_addresses(&self, retina: &Retina) -> Result<Vec<u64>, WnnError> {
        self.check(retina)?;
        let n = self.bits_per_tuple as usize;
        Ok(self
            .order
            .chunks(n)
            .map(|tuple| {
                tuple.iter().fold(0u64, |addr, &idx| {
                    let idx = idx as usize;
                    let bit = idx < self.retina_len && retina.get(idx);
                    (addr << 1) | bit as u64
                })
            })
            .collect())
    }

    /// Sparse form of [`extract_addresses`](Self::extract_addresses): only
    /// tuples with a nonzero address are listed. Cost is proportional to the
    /// number of lit bits.
    pub fn tuple_addresses(&self, retina: &Retina) -> Result<TupleAddresses, WnnError> {
        self.check(retina)?;
        Ok(self.sparse_from_ones(retina.ones()))
    }

    /// Like [`tuple_addresses`](Self::tuple_addresses) from lit positions
    /// known to be in range.
    pub(crate) fn sparse_from_ones<I: IntoIterator<Item = usize>>(&self, ones: I) -> TupleAddresses {
        let n = self.bits_per_tuple as usize;
        let mut hits: Vec<(u32, u64)> = ones
            .into_iter()
            .map(|i| {
                let pos = self.slot[i] as usize;
                ((pos / n) as u32, 1u64 << (n - 1 - pos % n))
            })
            .collect();
        hits.sort_unstable_by_key(|&(k, _)| k);
        let mut nonzero: Vec<(u32, u64)> = Vec::with_capacity(hits.len());
        for (k, bit) in hits {
            match nonzero.last_mut() {
                Some((last, addr)) if *last == k => *addr |= bit,
                _ => nonzero.push((k, bit)),
            }
        }
        TupleAddresses {
            tuple_count: self.tuple_count(),
            nonzero,
        }
    }
}

fn check_len(retina_len: usize) -> Result<(), WnnError> {
    if retina_len < 1 {
        return Err(WnnError::Config("retina length must be at least 1".into()));
    }
    if retina_len >= u32::MAX as usize - MAX_PAD {
        return Err(WnnError::Config(format!("retina length {retina_len} too large")));
    }
    Ok(())
}

const MAX_PAD: usize = super::MAX_BITS_PER_TUPLE as usize;

/// Tuple addresses in sparse form: every tuple not listed has address 0.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct TupleAddresses {
    tuple_count: usize,
    nonzero: Vec<(u32, u64)>,
}

impl TupleAddresses {
    pub fn from_dense(addresses: &[u64]) -> Self {
        Self {
            tuple_count: addresses.len(),
            nonzero: addresses
                .iter()
                .enumerate()
                .filter(|&(_, &a)| a != 0)
                .map(|(k, &a)| (k as u32, a))
                .collect(),
        }
    }

    pub fn to_dense(&self) -> Vec<u64> {
        let mut dense = vec![0; self.tuple_count];
        for &(k, a) in &self.nonzero {
            dense[k as usize] = a;
        }
        dense
    }

    pub fn tuple_count(&self) -> usize {
        self.tuple_count
    }

    /// `(tuple, address)` pairs with nonzero address, ascending by tuple.
    pub fn nonzero(&self) -> &[(u32, u64)] {
        &self.nonzero
    }

    /// Number of tuples that take part in scoring.
    pub fn effective_count(&self, ignore_zero: bool) -> usize {
        if ignore_zero {
            self.nonzero.len()
        } else {
            self.tuple_count
        }
    }
}
