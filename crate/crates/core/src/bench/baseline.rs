//! 1-nearest-neighbor comparator over retina Hamming distance. A stand-in
//! comparison curve, not a kernel SVM.

use super::BenchError;
use crate::encoding::Tag;
use crate::wnn::Retina;

/// Tag of the training retina closest in Hamming distance; ties go to the
/// earlier training item.
pub fn baseline_classify(train: &[(Retina, Tag)], eval: &Retina) -> Result<Tag, BenchError> {
    let mut best: Option<(usize, Tag)> = None;
    for (r, tag) in train {
        if r.len() != eval.len() {
            return Err(BenchError::Input(format!(
                "retina lengths differ: {} vs {}",
                r.len(),
                eval.len()
            )));
        }
        let d = r.hamming(eval);
        if best.is_none_or(|(bd, _)| d < bd) {
            best = Some((d, *tag));
        }
    }
    best.map(|(_, t)| t)
        .ok_or_else(|| BenchError::Input("empty training set".into()))
}

/// Same rule over sorted lit-position lists.
pub(crate) fn nearest_sparse(train: &[(&[usize], Tag)], eval: &[usize]) -> Option<Tag> {
    let mut best: Option<(usize, Tag)> = None;
    for &(r, tag) in train {
        let d = sparse_hamming(r, eval);
        if best.is_none_or(|(bd, _)| d < bd) {
            best = Some((d, tag));
        }
    }
    best.map(|(_, t)| t)
}

fn sparse_hamming(a: &[usize], b: &[usize]) -> usize {
    let (mut i, mut j, mut common) = (0, 0, 0);
    while i < a.len() && j < b.len() {
        match a[i].cmp(&b[j]) {
            std::cmp::Ordering::Less => i += 1,
            std::cmp::Ordering::Greater => j += 1,
            std::cmp::Ordering::Equal => {
                common += 1;
                i += 1;
                j += 1;
            }
        }
    }
    a.len() + b.len() - 2 * common
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r(s: &str) -> Retina {
        s.parse().unwrap()
    }

    #[test]
    fn exact_match_wins() {
        let train = vec![(r("1100"), Tag::Sp), (r("0011"), Tag::Np)];
        assert_eq!(baseline_classify(&train, &r("0011")).unwrap(), Tag::Np);
    }

    #[test]
    fn strictly_closer() {
        // d(1111000011110000, 1110000011110000) = 1
        // d(0000111100001111, 1110000011110000) = 15
        let train = vec![(r("0000111100001111"), Tag::Np), (r("1111000011110000"), Tag::Sp)];
        assert_eq!(baseline_classify(&train, &r("1110000011110000")).unwrap(), Tag::Sp);
    }

    #[test]
    fn ties_go_to_earlier_item() {
        let train = vec![(r("1000"), Tag::Np), (r("0001"), Tag::Sp)];
        assert_eq!(baseline_classify(&train, &r("0000")).unwrap(), Tag::Np);
        let swapped = vec![(r("0001"), Tag::Sp), (r("1000"), Tag::Np)];
        assert_eq!(baseline_classify(&swapped, &r("0000")).unwrap(), Tag::Sp);
    }

    #[test]
    fn empty_train_set() {
        assert!(baseline_classify(&[], &r("1")).is_err());
    }

    #[test]
    fn sparse_agrees_with_dense() {
        let a = r("1011001110001011");
        let b = r("0011101010101110");
        let ao: Vec<usize> = a.ones().collect();
        let bo: Vec<usize> = b.ones().collect();
        assert_eq!(sparse_hamming(&ao, &bo), a.hamming(&b));
    }
}
