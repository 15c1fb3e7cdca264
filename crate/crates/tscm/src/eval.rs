//! Scores mined results against planted ground truth.
//!
//! Two views: `Q` measures community recovery (for every target community,
//! the best F1 any detected community achieves against it, averaged), and
//! `SS` measures subspace recovery (cosine between mined and planted
//! weights).

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::metrics::{subspace_cosine, Subspace};
use crate::netio::NodeId;

/// Scores of one mining run.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct EvalReport {
    /// Cosine between the mined and the planted target subspace.
    pub ss: f64,
    /// Best F1 per target community, in ground-truth order.
    pub qi: Vec<f64>,
    /// Mean of `qi`.
    pub q: f64,
}

/// F1 between a ground-truth set and a detected set, both sorted and
/// deduplicated. An empty truth set is an error; an empty detection scores
/// zero.
pub fn f1(truth: &[NodeId], detected: &[NodeId]) -> Result<f64> {
    if truth.is_empty() {
        return Err(Error::EmptyTruth);
    }
    debug_assert!(truth.windows(2).all(|w| w[0] < w[1]));
    debug_assert!(detected.windows(2).all(|w| w[0] < w[1]));
    if detected.is_empty() {
        return Ok(0.0);
    }
    let mut i = 0;
    let mut j = 0;
    let mut hits = 0usize;
    while i < truth.len() && j < detected.len() {
        match truth[i].cmp(&detected[j]) {
            std::cmp::Ordering::Less => i += 1,
            std::cmp::Ordering::Greater => j += 1,
            std::cmp::Ordering::Equal => {
                hits += 1;
                i += 1;
                j += 1;
            }
        }
    }
    if hits == 0 {
        return Ok(0.0);
    }
    let precision = hits as f64 / detected.len() as f64;
    let recall = hits as f64 / truth.len() as f64;
    Ok(2.0 * precision * recall / (precision + recall))
}

/// Best F1 over all detected communities; zero when none were detected.
pub fn max_f1(truth: &[NodeId], detected: &[Vec<NodeId>]) -> Result<f64> {
    let mut best = 0.0f64;
    for d in detected {
        best = best.max(f1(truth, d)?);
    }
    Ok(best)
}

/// Per-target best F1 and their mean. Only the target communities enter
/// the score; extra detected communities cost nothing unless they displace
/// a better match.
pub fn quality_q(targets: &[Vec<NodeId>], detected: &[Vec<NodeId>]) -> Result<(Vec<f64>, f64)> {
    if targets.is_empty() {
        return Err(Error::EmptyTruth);
    }
    let qi: Vec<f64> = targets
        .iter()
        .map(|t| max_f1(t, detected))
        .collect::<Result<_>>()?;
    let q = qi.iter().sum::<f64>() / qi.len() as f64;
    Ok((qi, q))
}

/// Cosine between mined and planted subspace weights.
pub fn quality_ss(mined: &Subspace, planted: &Subspace) -> Result<f64> {
    subspace_cosine(mined, planted)
}

/// Bundles both scores into a report.
pub fn report(
    mined: &Subspace,
    planted: &Subspace,
    targets: &[Vec<NodeId>],
    detected: &[Vec<NodeId>],
) -> Result<EvalReport> {
    let ss = quality_ss(mined, planted)?;
    let (qi, q) = quality_q(targets, detected)?;
    Ok(EvalReport { ss, qi, q })
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn f1_closed_forms() {
        // |truth| = 10, |detected| = 5, 3 correct: P = 0.6, R = 0.3,
        // F1 = 2 * 0.18 / 0.9 = 0.4.
        let truth: Vec<usize> = (0..10).collect();
        let detected = vec![0, 1, 2, 50, 51];
        assert!((f1(&truth, &detected).unwrap() - 0.4).abs() < 1e-15);

        assert_eq!(f1(&truth, &truth.clone()).unwrap(), 1.0);
        assert_eq!(f1(&truth, &[90, 91]).unwrap(), 0.0);
        assert_eq!(f1(&truth, &[]).unwrap(), 0.0);
        assert!(matches!(f1(&[], &truth), Err(Error::EmptyTruth)));
    }

    #[test]
    fn q_takes_the_best_match_per_target() {
        let targets = vec![vec![0, 1, 2, 3], vec![10, 11, 12, 13]];
        let detected = vec![
            vec![0, 1, 2, 3],
            vec![10, 11],
            vec![10, 11, 12, 13, 14, 15],
        ];
        let (qi, q) = quality_q(&targets, &detected).unwrap();
        assert_eq!(qi[0], 1.0);
        assert!((qi[1] - 0.8).abs() < 1e-15);
        assert!((q - 0.9).abs() < 1e-15);

        // No detections at all: zero across the board.
        let (qi, q) = quality_q(&targets, &[]).unwrap();
        assert_eq!(qi, vec![0.0, 0.0]);
        assert_eq!(q, 0.0);
    }

    #[test]
    fn ss_closed_form_for_uniform_against_focused() {
        // Uniform over 20 against 1/6 on six attributes:
        // cos = sqrt(6 / 20).
        let mined = Subspace::uniform(20);
        let mut raw = vec![0.0; 20];
        for slot in raw.iter_mut().take(6) {
            *slot = 1.0;
        }
        let planted = Subspace::from_unnormalized(&raw).unwrap();
        let ss = quality_ss(&mined, &planted).unwrap();
        assert!((ss - (6.0f64 / 20.0).sqrt()).abs() < 1e-12);
        assert_eq!(quality_ss(&planted, &planted).unwrap(), 1.0);
    }

    #[test]
    fn report_combines_both_scores() {
        let l = Subspace::uniform(4);
        let targets = vec![vec![1, 2, 3]];
        let detected = vec![vec![1, 2, 3]];
        let rep = report(&l, &l, &targets, &detected).unwrap();
        assert_eq!(rep.ss, 1.0);
        assert_eq!(rep.q, 1.0);
        assert_eq!(rep.qi, vec![1.0]);
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(128))]

        #[test]
        fn f1_is_bounded_and_symmetric_in_size(
            a in prop::collection::btree_set(0usize..40, 1..15),
            b in prop::collection::btree_set(0usize..40, 0..15),
        ) {
            let truth: Vec<usize> = a.iter().copied().collect();
            let detected: Vec<usize> = b.iter().copied().collect();
            let score = f1(&truth, &detected).unwrap();
            prop_assert!((0.0..=1.0).contains(&score));
            prop_assert_eq!(score == 1.0, truth == detected);
            if !detected.is_empty() {
                // F1 treats the two sets symmetrically.
                let flipped = f1(&detected, &truth).unwrap();
                prop_assert!((score - flipped).abs() < 1e-12);
            }
        }

        #[test]
        fn q_never_decreases_when_detections_are_added(
            a in prop::collection::btree_set(0usize..30, 1..10),
            extra in prop::collection::btree_set(0usize..30, 1..10),
        ) {
            let targets = vec![a.iter().copied().collect::<Vec<_>>()];
            let base = vec![vec![0, 1, 2]];
            let mut more = base.clone();
            more.push(extra.iter().copied().collect());
            let (_, q_base) = quality_q(&targets, &base).unwrap();
            let (_, q_more) = quality_q(&targets, &more).unwrap();
            prop_assert!(q_more + 1e-12 >= q_base);
        }
    }
}
