use super::BenchError;
use crate::encoding::Tag;
use crate::rng::SplitMix64;

/// Training sample (half SP, half NP) and the evaluation remainder.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BalancedSplit<T> {
    /// SP draws in draw order, then NP draws.
    pub train: Vec<(T, Tag)>,
    /// Every item not drawn: SP pool order, then NP pool order.
    pub eval: Vec<(T, Tag)>,
}

impl<T> BalancedSplit<T> {
    /// No traces left to evaluate on.
    pub fn is_degenerate(&self) -> bool {
        self.eval.is_empty()
    }
}

/// Draws `train_size / 2` items without replacement from each pool. SP is
/// drawn before NP from the same stream.
pub fn sample_balanced<T: Clone>(
    sp: &[T],
    np: &[T],
    train_size: usize,
    rng: &mut SplitMix64,
) -> Result<BalancedSplit<T>, BenchError> {
    if train_size < 2 || !train_size.is_multiple_of(2) {
        return Err(BenchError::Sampling(format!(
            "training size {train_size} must be even and at least 2"
        )));
    }
    let half = train_size / 2;
    if half > sp.len() || half > np.len() {
        return Err(BenchError::Sampling(format!(
            "cannot draw {half} per tag from pools of {} SP and {} NP",
            sp.len(),
            np.len()
        )));
    }
    let mut train = Vec::with_capacity(train_size);
    let mut eval = Vec::with_capacity(sp.len() + np.len() - train_size);
    for (pool, tag) in [(sp, Tag::Sp), (np, Tag::Np)] {
        let picked = rng.sample_indices(pool.len(), half);
        let mut taken = vec![false; pool.len()];
        for &i in &picked {
            taken[i] = true;
            train.push((pool[i].clone(), tag));
        }
        eval.extend(
            pool.iter()
                .zip(&taken)
                .filter(|(_, &t)| !t)
                .map(|(item, _)| (item.clone(), tag)),
        );
    }
    Ok(BalancedSplit { train, eval })
}
