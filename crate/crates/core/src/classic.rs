//! Classical external validity measures.
//!
//! Four pair-counting indices (Rand, Jaccard, Fowlkes-Mallows, the
//! Hubert-Schultz Gamma statistic) plus the normalized Hamming distance,
//! and the bundle type carrying all seven measure values for one table.

use serde::Serialize;

use crate::error::{Result, ValidityError};
use crate::info;
use crate::tables::{pair_counts_from_table, ContingencyTable, PairCounts};

/// Rand index (a00 + a11) / M.
pub fn rand_index(a: &PairCounts) -> Result<f64> {
    if a.m <= 0.0 {
        return Err(ValidityError::Degenerate(
            "rand index needs at least one pair".into(),
        ));
    }
    Ok((a.a00 + a.a11) / a.m)
}

/// Jaccard index a00 / (a00 + a01 + a10).
pub fn jaccard_index(a: &PairCounts) -> Result<f64> {
    let denom = a.a00 + a.a01 + a.a10;
    if denom <= 0.0 {
        return Err(ValidityError::Degenerate(
            "jaccard index undefined: no pair shares a class or a cluster".into(),
        ));
    }
    Ok(a.a00 / denom)
}

/// Fowlkes-Mallows index a00 / sqrt(a0. * a.0).
pub fn fowlkes_mallows(a: &PairCounts) -> Result<f64> {
    let abar = a.same_class() * a.same_cluster();
    if abar <= 0.0 {
        return Err(ValidityError::Degenerate(
            "fowlkes-mallows undefined: a marginal pair count is zero".into(),
        ));
    }
    Ok(a.a00 / abar.sqrt())
}

/// Hubert-Schultz Gamma statistic
/// (M a00 - a0. a.0) / sqrt(a0. a.0 (M - a0.)(M - a.0)), with M the total
/// pair count.
pub fn hubert_gamma(a: &PairCounts) -> Result<f64> {
    let a0dot = a.same_class();
    let adot0 = a.same_cluster();
    let denom2 = a0dot * adot0 * (a.m - a0dot) * (a.m - adot0);
    if denom2 <= 0.0 {
        return Err(ValidityError::Degenerate(
            "gamma undefined: all pairs share a class or all share a cluster".into(),
        ));
    }
    Ok((a.m * a.a00 - a0dot * adot0) / denom2.sqrt())
}

/// Majority associations between clusters and classes. Ties break toward
/// the lowest index; an all-zero row or column keeps index 0 and sets the
/// degenerate flag.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct HammingAssignments {
    /// For each cluster k, the majority class argmax_c h(c,k).
    pub class_of_cluster: Vec<usize>,
    /// For each class c, the majority cluster argmax_k h(c,k).
    pub cluster_of_class: Vec<usize>,
    pub degenerate: bool,
}

fn argmax_lowest(values: impl Iterator<Item = f64>) -> (usize, f64) {
    let mut best = (0, f64::NEG_INFINITY);
    for (i, v) in values.enumerate() {
        if v > best.1 {
            best = (i, v);
        }
    }
    best
}

pub fn hamming_assignments(table: &ContingencyTable) -> HammingAssignments {
    let mut degenerate = false;
    let mut class_of_cluster = Vec::with_capacity(table.num_clusters());
    for k in 0..table.num_clusters() {
        let (c, max) = argmax_lowest((0..table.num_classes()).map(|c| table.count(c, k)));
        if max <= 0.0 {
            degenerate = true;
        }
        class_of_cluster.push(c);
    }
    let mut cluster_of_class = Vec::with_capacity(table.num_classes());
    for row in table.counts() {
        let (k, max) = argmax_lowest(row.iter().copied());
        if max <= 0.0 {
            degenerate = true;
        }
        cluster_of_class.push(k);
    }
    HammingAssignments {
        class_of_cluster,
        cluster_of_class,
        degenerate,
    }
}

/// Normalized Hamming distance 1 - (D(C;K) + D(K;C)) / 2n, where each
/// directional distance sums the off-majority mass: D(C;K) counts objects
/// outside their cluster's majority class, D(K;C) objects outside their
/// class's majority cluster. Which index wins a tie does not affect the
/// value, only the reported assignment.
pub fn normalized_hamming(table: &ContingencyTable) -> f64 {
    let col = table.col_marginals();
    let d_ck: f64 = (0..table.num_clusters())
        .map(|k| {
            let max = argmax_lowest((0..table.num_classes()).map(|c| table.count(c, k))).1;
            col[k] - max
        })
        .sum();
    let d_kc: f64 = table
        .counts()
        .iter()
        .map(|row| row.iter().sum::<f64>() - argmax_lowest(row.iter().copied()).1)
        .sum();
    1.0 - (d_ck + d_kc) / (2.0 * table.n())
}

/// Identifies one of the seven measures, in the canonical report order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Measure {
    Q0,
    Q2,
    Rand,
    Fowlkes,
    Gamma,
    Jaccard,
    Hamming,
}

impl Measure {
    pub const ALL: [Measure; 7] = [
        Measure::Q0,
        Measure::Q2,
        Measure::Rand,
        Measure::Fowlkes,
        Measure::Gamma,
        Measure::Jaccard,
        Measure::Hamming,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Measure::Q0 => "q0",
            Measure::Q2 => "q2",
            Measure::Rand => "rand",
            Measure::Fowlkes => "fowlkes",
            Measure::Gamma => "gamma",
            Measure::Jaccard => "jaccard",
            Measure::Hamming => "hamming",
        }
    }

    /// q0 is a description length (smaller is better); every other measure
    /// scores quality directly.
    pub fn higher_is_better(self) -> bool {
        !matches!(self, Measure::Q0)
    }
}

impl std::fmt::Display for Measure {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.name())
    }
}

/// All seven measure values for one table. Degenerate components are
/// reported by name and carry the value 0 rather than aborting the vector.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MeasureVector {
    pub q0: f64,
    pub q2: f64,
    pub rand: f64,
    pub fowlkes: f64,
    pub gamma: f64,
    pub jaccard: f64,
    pub hamming: f64,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub degenerate: Vec<String>,
}

impl MeasureVector {
    pub fn value(&self, measure: Measure) -> f64 {
        match measure {
            Measure::Q0 => self.q0,
            Measure::Q2 => self.q2,
            Measure::Rand => self.rand,
            Measure::Fowlkes => self.fowlkes,
            Measure::Gamma => self.gamma,
            Measure::Jaccard => self.jaccard,
            Measure::Hamming => self.hamming,
        }
    }

    pub fn is_degenerate(&self, measure: Measure) -> bool {
        self.degenerate.iter().any(|m| m == measure.name())
    }
}

/// Evaluate all seven measures, deriving the pair table from `table` via the
/// counting identities.
pub fn all_measures(table: &ContingencyTable) -> MeasureVector {
    let pairs = pair_counts_from_table(table).unwrap_or(PairCounts {
        a00: 0.0,
        a01: 0.0,
        a10: 0.0,
        a11: 0.0,
        m: 0.0,
    });
    measures_from_pairs(table, &pairs)
}

/// Evaluate all seven measures with a caller-supplied pair table (the pair
/// counts and the contingency table must describe the same data; the pair
/// convention is the caller's choice).
pub fn measures_from_pairs(table: &ContingencyTable, pairs: &PairCounts) -> MeasureVector {
    let mut degenerate = Vec::new();
    let take = |degenerate: &mut Vec<String>, measure: Measure, r: Result<f64>| match r {
        Ok(v) => v,
        Err(_) => {
            degenerate.push(measure.name().to_string());
            0.0
        }
    };

    let (q0, q2) = match info::q_scores(table) {
        Ok(scores) => (scores.q0.value(), scores.q2),
        Err(_) => {
            degenerate.push(Measure::Q2.name().to_string());
            (info::q0(table).value(), 0.0)
        }
    };
    let rand = take(&mut degenerate, Measure::Rand, rand_index(pairs));
    let fowlkes = take(&mut degenerate, Measure::Fowlkes, fowlkes_mallows(pairs));
    let gamma = take(&mut degenerate, Measure::Gamma, hubert_gamma(pairs));
    let jaccard = take(&mut degenerate, Measure::Jaccard, jaccard_index(pairs));
    let hamming = normalized_hamming(table);

    MeasureVector {
        q0,
        q2,
        rand,
        fowlkes,
        gamma,
        jaccard,
        hamming,
        degenerate,
    }
}
