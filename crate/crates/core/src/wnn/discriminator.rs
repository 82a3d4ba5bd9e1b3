use rustc_hash::FxHashMap;

use super::{TupleAddresses, WnnError};

const MAX_ZERO_SPREAD: usize = 1 << 26;

/// One class's set of `X` counter RAMs.
///
/// Counters for nonzero addresses live in sparse per-tuple tables. The
/// address-0 counter of tuple `k` is stored implicitly as
/// `zero_base - zero_offset[k]`, so a training write costs time proportional
/// to the number of nonzero tuples rather than `X`. `zero_hist[v]` counts the
/// tuples whose offset equals `v`.
#[derive(Debug, Clone)]
pub struct Discriminator {
    tables: Vec<FxHashMap<u64, u64>>,
    zero_base: u64,
    zero_offset: Vec<u64>,
    zero_hist: Vec<usize>,
}

impl Discriminator {
    pub fn new(tuple_count: usize) -> Self {
        Self {
            tables: vec![FxHashMap::default(); tuple_count],
            zero_base: 0,
            zero_offset: vec![0; tuple_count],
            zero_hist: vec![tuple_count],
        }
    }

    pub fn tuple_count(&self) -> usize {
        self.tables.len()
    }

    /// Counter of RAM `tuple` at `address`; absent entries read 0.
    #[inline]
    pub fn counter(&self, tuple: usize, address: u64) -> u64 {
        if address == 0 {
            self.zero_base - self.zero_offset[tuple]
        } else {
            self.tables[tuple].get(&address).copied().unwrap_or(0)
        }
    }

    /// Increments the counter addressed in every tuple. With `ignore_zero`,
    /// tuples whose address is 0 are left alone.
    pub fn train(&mut self, addresses: &TupleAddresses, ignore_zero: bool) -> Result<(), WnnError> {
        debug_assert_eq!(addresses.tuple_count(), self.tuple_count());
        // Check every increment first so a failed write leaves no partial update.
        for &(k, a) in addresses.nonzero() {
            if self.counter(k as usize, a) == u64::MAX {
                return Err(WnnError::CounterOverflow { tuple: k as usize });
            }
        }
        if !ignore_zero {
            if self.zero_base == u64::MAX {
                let tuple = (0..self.tuple_count())
                    .find(|&k| self.zero_offset[k] == 0)
                    .unwrap_or(0);
                return Err(WnnError::CounterOverflow { tuple });
            }
            self.zero_base += 1;
            // A tuple with a nonzero address keeps its zero counter, which
            // means its offset grows with the base.
            for &(k, _) in addresses.nonzero() {
                self.bump_offset(k as usize);
            }
        }
        for &(k, a) in addresses.nonzero() {
            *self.tables[k as usize].entry(a).or_insert(0) += 1;
        }
        Ok(())
    }

    fn bump_offset(&mut self, k: usize) {
        let old = self.zero_offset[k] as usize;
        self.zero_hist[old] -= 1;
        self.zero_offset[k] += 1;
        if self.zero_hist.len() <= old + 1 {
            self.zero_hist.resize(old + 2, 0);
        }
        self.zero_hist[old + 1] += 1;
    }

    /// Number of tuples whose address-0 counter exceeds `bleach`.
    fn zeros_above(&self, bleach: u64) -> usize {
        if self.zero_base <= bleach {
            return 0;
        }
        // zero counter > b  <=>  offset < base - b
        let limit = (self.zero_base - bleach).min(self.zero_hist.len() as u64) as usize;
        self.zero_hist[..limit].iter().sum()
    }

    /// Sparse scoring, equal to [`score`](super::score) on the dense form.
    pub fn score_sparse(&self, addresses: &TupleAddresses, bleach: u64, ignore_zero: bool) -> usize {
        let mut total = 0usize;
        if !ignore_zero {
            total = self.zeros_above(bleach);
            for &(k, _) in addresses.nonzero() {
                if self.counter(k as usize, 0) > bleach {
                    total -= 1;
                }
            }
        }
        for &(k, a) in addresses.nonzero() {
            if self.counter(k as usize, a) > bleach {
                total += 1;
            }
        }
        total
    }

    /// Largest counter value held by any RAM.
    pub fn max_counter(&self) -> u64 {
        let nonzero = self
            .tables
            .iter()
            .flat_map(|t| t.values().copied())
            .max()
            .unwrap_or(0);
        nonzero.max(self.zero_base - self.zero_offset.iter().copied().min().unwrap_or(0))
    }

    /// Every nonzero counter as `(tuple, address, count)`, ascending.
    pub fn entries(&self) -> Vec<(u32, u64, u64)> {
        let mut out = Vec::new();
        for (k, table) in self.tables.iter().enumerate() {
            let zero = self.counter(k, 0);
            if zero > 0 {
                out.push((k as u32, 0, zero));
            }
            let mut row: Vec<(u64, u64)> = table.iter().map(|(&a, &c)| (a, c)).collect();
            row.sort_unstable();
            out.extend(row.into_iter().map(|(a, c)| (k as u32, a, c)));
        }
        out
    }

    /// Rebuilds a discriminator from explicit counters. Entries must be
    /// in range and positive; duplicates are rejected.
    pub(crate) fn from_entries(
        tuple_count: usize,
        bits_per_tuple: u32,
        entries: &[(u32, u64, u64)],
    ) -> Result<Self, WnnError> {
        let mut disc = Self::new(tuple_count);
        let mut zeros = vec![0u64; tuple_count];
        let mut prev: Option<(u32, u64)> = None;
        for &(k, a, c) in entries {
            if (k as usize) >= tuple_count {
                return Err(WnnError::Format(format!("tuple {k} out of range")));
            }
            if bits_per_tuple < 64 && a >> bits_per_tuple != 0 {
                return Err(WnnError::Format(format!("address {a} exceeds {bits_per_tuple} bits")));
            }
            if c == 0 {
                return Err(WnnError::Format("zero counters must be omitted".into()));
            }
            if prev.is_some_and(|p| p >= (k, a)) {
                return Err(WnnError::Format("counter entries not strictly ascending".into()));
            }
            prev = Some((k, a));
            if a == 0 {
                zeros[k as usize] = c;
            } else {
                disc.tables[k as usize].insert(a, c);
            }
        }
        let base = zeros.iter().copied().max().unwrap_or(0);
        disc.zero_base = base;
        disc.zero_hist.clear();
        for (k, z) in zeros.into_iter().enumerate() {
            let off = base - z;
            disc.zero_offset[k] = off;
            let off = usize::try_from(off)
                .map_err(|_| WnnError::Format("counter too large".into()))?;
            if disc.zero_hist.len() <= off {
                // The spread between zero counters is bounded by the number
                // of training writes.
                if off > MAX_ZERO_SPREAD {
                    return Err(WnnError::Format("counter spread too large".into()));
                }
                disc.zero_hist.resize(off + 1, 0);
            }
            disc.zero_hist[off] += 1;
        }
        Ok(disc)
    }
}

/// Equal when every counter is equal, regardless of internal layout.
impl PartialEq for Discriminator {
    fn eq(&self, other: &Self) -> bool {
        self.tuple_count() == other.tuple_count() && self.entries() == other.entries()
    }
}

impl Eq for Discriminator {}
