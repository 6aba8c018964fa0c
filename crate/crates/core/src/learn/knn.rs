//! K-nearest-neighbor prediction with Minkowski distances and uniform or
//! inverse-distance vote weighting.

use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum KnnWeighting {
    Uniform,
    Distance,
}

fn minkowski(a: &[f64], b: &[f64], p: u8) -> f64 {
    match p {
        1 => a.iter().zip(b).map(|(x, y)| (x - y).abs()).sum(),
        _ => a
            .iter()
            .zip(b)
            .map(|(x, y)| (x - y) * (x - y))
            .sum::<f64>()
            .sqrt(),
    }
}

/// Predict the label of `x` from its `k` nearest training points.
///
/// Uniform weighting takes a majority vote (ties go to the smallest label);
/// distance weighting votes with 1/d, and an exact match (d = 0) returns that
/// point's label immediately. Neighbor order is made deterministic by
/// breaking distance ties on the training index.
pub fn knn_predict(
    train_x: &[Vec<f64>],
    train_y: &[u8],
    x: &[f64],
    k: usize,
    weighting: KnnWeighting,
    p: u8,
) -> Result<u8> {
    if train_x.is_empty() {
        return Err(Error::EmptyTrainingSet);
    }
    assert_eq!(train_x.len(), train_y.len());
    if k == 0 || k > train_x.len() {
        return Err(Error::KTooLarge { k, n: train_x.len() });
    }
    if p != 1 && p != 2 {
        return Err(Error::BadMinkowskiOrder(p));
    }
    let mut dist: Vec<(f64, usize)> = train_x
        .iter()
        .enumerate()
        .map(|(i, t)| (minkowski(t, x, p), i))
        .collect();
    dist.sort_unstable_by(|a, b| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1)));
    let nearest = &dist[..k];

    let mut votes: Vec<(u8, f64)> = Vec::new();
    let mut add_vote = |label: u8, weight: f64| {
        match votes.iter_mut().find(|(l, _)| *l == label) {
            Some((_, w)) => *w += weight,
            None => votes.push((label, weight)),
        }
    };
    for &(d, idx) in nearest {
        match weighting {
            KnnWeighting::Uniform => add_vote(train_y[idx], 1.0),
            KnnWeighting::Distance => {
                if d == 0.0 {
                    return Ok(train_y[idx]);
                }
                add_vote(train_y[idx], 1.0 / d);
            }
        }
    }
    votes.sort_unstable_by(|a, b| a.0.cmp(&b.0));
    let mut best = votes[0];
    for &(label, weight) in &votes[1..] {
        if weight > best.1 {
            best = (label, weight);
        }
    }
    Ok(best.0)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pts(xs: &[f64]) -> Vec<Vec<f64>> {
        xs.iter().map(|&x| vec![x]).collect()
    }

    #[test]
    fn single_neighbor() {
        let x = pts(&[0.0, 1.0, 10.0]);
        let y = [0, 0, 1];
        assert_eq!(knn_predict(&x, &y, &[0.5], 1, KnnWeighting::Uniform, 2).unwrap(), 0);
    }

    #[test]
    fn majority_vote() {
        let x = pts(&[0.0, 1.0, 10.0]);
        let y = [0, 0, 1];
        assert_eq!(knn_predict(&x, &y, &[0.5], 3, KnnWeighting::Uniform, 2).unwrap(), 0);
    }

    #[test]
    fn distance_weighted_hand_example() {
        // weights 1/0.5 = 2 against 1/1.5 = 2/3
        let x = pts(&[0.0, 2.0]);
        let y = [0, 1];
        assert_eq!(
            knn_predict(&x, &y, &[0.5], 2, KnnWeighting::Distance, 1).unwrap(),
            0
        );
    }

    #[test]
    fn exact_match_short_circuits() {
        let x = pts(&[0.0, 0.5, 2.0]);
        let y = [2, 1, 0];
        assert_eq!(
            knn_predict(&x, &y, &[0.5], 3, KnnWeighting::Distance, 2).unwrap(),
            1
        );
    }

    #[test]
    fn uniform_tie_prefers_smallest_label() {
        let x = pts(&[-1.0, 1.0]);
        let y = [1, 0];
        assert_eq!(
            knn_predict(&x, &y, &[0.0], 2, KnnWeighting::Uniform, 1).unwrap(),
            0
        );
    }

    #[test]
    fn k1_on_training_point_returns_its_label() {
        let x = vec![vec![0.3, -0.4], vec![0.9, 0.1], vec![-0.5, 0.8]];
        let y = [3, 1, 4];
        for (xi, &yi) in x.iter().zip(&y) {
            for weighting in [KnnWeighting::Uniform, KnnWeighting::Distance] {
                assert_eq!(knn_predict(&x, &y, xi, 1, weighting, 2).unwrap(), yi);
            }
        }
    }

    #[test]
    fn argument_errors() {
        let x = pts(&[0.0]);
        let y = [0];
        assert!(matches!(
            knn_predict(&[], &[], &[0.0], 1, KnnWeighting::Uniform, 2),
            Err(Error::EmptyTrainingSet)
        ));
        assert!(matches!(
            knn_predict(&x, &y, &[0.0], 2, KnnWeighting::Uniform, 2),
            Err(Error::KTooLarge { .. })
        ));
        assert!(matches!(
            knn_predict(&x, &y, &[0.0], 1, KnnWeighting::Uniform, 3),
            Err(Error::BadMinkowskiOrder(3))
        ));
    }
}
