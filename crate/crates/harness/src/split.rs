//! Stratified train/test splitting.

use crate::error::{Error, Result};
use numcore::{derive_seed, Prng};
use std::collections::BTreeMap;

/// Per class: shuffle, take floor(ratio * count) for training. The two
/// index lists are disjoint, cover 0..n, and are sorted ascending.
pub fn stratified_split(labels: &[i64], ratio: f64, seed: u64) -> Result<(Vec<usize>, Vec<usize>)> {
    if !(ratio > 0.0 && ratio < 1.0) {
        return Err(Error::Contract(format!(
            "split ratio must be in (0, 1), got {ratio}"
        )));
    }
    if labels.is_empty() {
        return Err(Error::Contract("split on empty label list".into()));
    }

    let mut by_class: BTreeMap<i64, Vec<usize>> = BTreeMap::new();
    for (i, &l) in labels.iter().enumerate() {
        by_class.entry(l).or_default().push(i);
    }
    for (label, idx) in &by_class {
        if idx.len() < 2 {
            return Err(Error::Stratification(format!(
                "class {label} has only {} sample(s)",
                idx.len()
            )));
        }
    }

    let mut train = Vec::new();
    let mut test = Vec::new();
    for (label, mut idx) in by_class {
        let mut rng = Prng::seed_from_u64(derive_seed(seed, &[20, label as u64]));
        rng.shuffle(&mut idx);
        let n_train = ((idx.len() as f64) * ratio).floor() as usize;
        train.extend_from_slice(&idx[..n_train]);
        test.extend_from_slice(&idx[n_train..]);
    }
    train.sort_unstable();
    test.sort_unstable();
    Ok((train, test))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn balanced_804_gives_562_train_242_test() {
        let labels: Vec<i64> = (0..804).map(|i| (i % 2) as i64).collect();
        let (train, test) = stratified_split(&labels, 0.7, 1).unwrap();
        assert_eq!(train.len(), 562);
        assert_eq!(test.len(), 242);
    }

    #[test]
    fn same_seed_identical_split() {
        let labels: Vec<i64> = (0..101).map(|i| (i % 3) as i64).collect();
        let a = stratified_split(&labels, 0.7, 9).unwrap();
        let b = stratified_split(&labels, 0.7, 9).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn ratio_one_is_contract_error() {
        let labels = vec![0i64, 0, 1, 1];
        assert!(matches!(
            stratified_split(&labels, 1.0, 0),
            Err(Error::Contract(_))
        ));
    }

    #[test]
    fn tiny_class_is_stratification_error() {
        let labels = vec![0i64, 0, 1];
        assert!(matches!(
            stratified_split(&labels, 0.7, 0),
            Err(Error::Stratification(_))
        ));
    }

    #[test]
    fn disjoint_and_covering() {
        let labels: Vec<i64> = (0..57).map(|i| (i % 2) as i64).collect();
        let (train, test) = stratified_split(&labels, 0.7, 3).unwrap();
        let mut all: Vec<usize> = train.iter().chain(test.iter()).copied().collect();
        all.sort_unstable();
        assert_eq!(all, (0..57).collect::<Vec<_>>());
    }

    #[test]
    fn split_is_stratified_per_class() {
        let labels: Vec<i64> = (0..100).map(|i| if i < 80 { 0 } else { 1 }).collect();
        let (train, _) = stratified_split(&labels, 0.7, 4).unwrap();
        let train_c0 = train.iter().filter(|&&i| labels[i] == 0).count();
        let train_c1 = train.iter().filter(|&&i| labels[i] == 1).count();
        assert_eq!(train_c0, 56); // floor(0.7 * 80)
        assert_eq!(train_c1, 14); // floor(0.7 * 20)
    }
}
