//! Agreement between the model orderings induced by different metrics.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Number of positions at which two equally long lists differ.
pub fn hamming<T: PartialEq>(a: &[T], b: &[T]) -> Result<usize> {
    if a.len() != b.len() {
        return Err(Error::RowCountMismatch {
            left: a.len(),
            right: b.len(),
        });
    }
    Ok(a.iter().zip(b).filter(|(x, y)| x != y).count())
}

/// Mean [`hamming`] distance over all unordered pairs of lists.
pub fn mean_hamming<T: PartialEq>(lists: &[Vec<T>]) -> Result<f64> {
    if lists.len() < 2 {
        return Err(Error::BadConfig("need at least two ranking lists".into()));
    }
    let mut total = 0;
    let mut pairs = 0;
    for i in 0..lists.len() {
        for j in i + 1..lists.len() {
            total += hamming(&lists[i], &lists[j])?;
            pairs += 1;
        }
    }
    Ok(total as f64 / pairs as f64)
}

/// Model indices ordered best first (higher score is better); ties keep input order.
pub fn rank_by(scores: &[f64]) -> Vec<usize> {
    let mut order: Vec<usize> = (0..scores.len()).collect();
    order.sort_by(|&a, &b| scores[b].total_cmp(&scores[a]));
    order
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MetricRanking {
    pub metric: String,
    /// Model names, best first.
    pub order: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PairDistance {
    pub a: String,
    pub b: String,
    pub hamming: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RankReport {
    pub models: Vec<String>,
    pub rankings: Vec<MetricRanking>,
    pub pairwise: Vec<PairDistance>,
    pub mean_hamming: f64,
}

/// Ranks `models` (name and report document) under each metric.
///
/// Every metric must be a numeric top-level field of every document.
pub fn rank_models(models: &[(String, serde_json::Value)], metrics: &[String]) -> Result<RankReport> {
    if models.len() < 2 {
        return Err(Error::BadConfig("need at least two models".into()));
    }
    if metrics.len() < 2 {
        return Err(Error::BadConfig("need at least two metrics".into()));
    }
    let mut orders = Vec::with_capacity(metrics.len());
    for metric in metrics {
        let scores = models
            .iter()
            .map(|(name, doc)| {
                doc.get(metric)
                    .and_then(|v| v.as_f64())
                    .ok_or_else(|| Error::BadConfig(format!("{name}: no numeric field {metric:?}")))
            })
            .collect::<Result<Vec<f64>>>()?;
        orders.push(rank_by(&scores));
    }

    let mut pairwise = Vec::new();
    for i in 0..metrics.len() {
        for j in i + 1..metrics.len() {
            pairwise.push(PairDistance {
                a: metrics[i].clone(),
                b: metrics[j].clone(),
                hamming: hamming(&orders[i], &orders[j])?,
            });
        }
    }
    let rankings = metrics
        .iter()
        .zip(&orders)
        .map(|(metric, order)| MetricRanking {
            metric: metric.clone(),
            order: order.iter().map(|&i| models[i].0.clone()).collect(),
        })
        .collect();
    Ok(RankReport {
        models: models.iter().map(|(n, _)| n.clone()).collect(),
        rankings,
        pairwise,
        mean_hamming: mean_hamming(&orders)?,
    })
}
