//! The parametric class-cluster model family.
//!
//! A family member is a joint distribution p(c,k) over class and cluster
//! labels with uniform class marginal p(c) = 1/|C|. Clusters split into a
//! "useful" block correlated with the classes and a "noise" block whose
//! columns are uniform over classes. Two error masses shape the conditional
//! p(k|c): `eps1` spread over unmatched useful clusters and `eps2` spread
//! over noise clusters.

use serde::{Deserialize, Serialize};
use serde::ser::SerializeSeq;

use crate::error::{Result, ValidityError};

/// Parameters identifying one member of the family. `eps = eps1 + eps2` is
/// always derived, never stored, so it cannot go stale.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ModelParams {
    pub num_classes: usize,
    pub useful_clusters: usize,
    pub noise_clusters: usize,
    pub eps1: f64,
    pub eps2: f64,
}

impl ModelParams {
    /// Total error probability.
    pub fn eps(&self) -> f64 {
        self.eps1 + self.eps2
    }

    pub fn num_clusters(&self) -> usize {
        self.useful_clusters + self.noise_clusters
    }

    /// Validity rules for the family. Returns every violated rule; an empty
    /// list means the combination is valid.
    ///
    /// Noise clusters and noise mass must appear together: a combination is
    /// valid only when (noise = 0 and eps2 = 0) or (noise >= 1 and eps2 > 0).
    /// With eps1 > 0, every class must leave at least one useful cluster
    /// unmatched, otherwise the eps1 mass has nowhere to go.
    pub fn validity_errors(&self) -> Vec<String> {
        let mut reasons = Vec::new();
        if self.num_classes == 0 {
            reasons.push("num_classes must be >= 1".to_string());
        }
        if self.useful_clusters == 0 {
            reasons.push("useful_clusters must be >= 1".to_string());
        }
        for (name, v) in [("eps1", self.eps1), ("eps2", self.eps2)] {
            if !v.is_finite() || !(0.0..1.0).contains(&v) {
                reasons.push(format!("{name} must lie in [0, 1), got {v}"));
            }
        }
        if self.eps() >= 1.0 {
            reasons.push(format!(
                "eps1 + eps2 must be < 1, got {}",
                self.eps()
            ));
        }
        if self.noise_clusters == 0 && self.eps2 > 0.0 {
            reasons.push("eps2 > 0 requires at least one noise cluster".to_string());
        }
        if self.noise_clusters >= 1 && self.eps2 == 0.0 {
            reasons.push("noise clusters require eps2 > 0".to_string());
        }
        if self.eps1 > 0.0 && self.num_classes >= 1 && self.useful_clusters >= 1 {
            let assignment = assign(self.num_classes, self.useful_clusters);
            let min_unmatched = assignment
                .clusters_of_class
                .iter()
                .map(|kc| self.useful_clusters - kc.len())
                .min()
                .unwrap_or(0);
            if min_unmatched == 0 {
                reasons.push(
                    "eps1 > 0 requires every class to leave at least one useful cluster unmatched"
                        .to_string(),
                );
            }
        }
        reasons
    }

    pub fn is_valid(&self) -> bool {
        self.validity_errors().is_empty()
    }
}

/// The class/cluster matching: K(c) is the set of useful clusters matched to
/// class c, C(k) the set of classes matched to useful cluster k.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Assignment {
    pub clusters_of_class: Vec<Vec<usize>>,
    pub classes_of_cluster: Vec<Vec<usize>>,
}

/// Greedy ceiling allocation: owner i of `num_owners` receives
/// ceil(remaining_items / remaining_owners) consecutive items.
fn ceiling_partition(num_items: usize, num_owners: usize) -> Vec<usize> {
    let mut sizes = Vec::with_capacity(num_owners);
    let mut remaining = num_items;
    for i in 0..num_owners {
        let take = remaining.div_ceil(num_owners - i);
        sizes.push(take);
        remaining -= take;
    }
    debug_assert_eq!(remaining, 0);
    sizes
}

/// Match useful clusters and classes.
///
/// With |C| <= |K_u| the clusters are dealt out over the classes in index
/// order by the ceiling rule (so |C| = |K_u| gives K(c) = {c}); with
/// |C| > |K_u| the classes are dealt out over the clusters the same way.
pub fn assign(num_classes: usize, useful_clusters: usize) -> Assignment {
    assert!(num_classes >= 1 && useful_clusters >= 1);
    let mut clusters_of_class = vec![Vec::new(); num_classes];
    let mut classes_of_cluster = vec![Vec::new(); useful_clusters];
    if num_classes <= useful_clusters {
        let sizes = ceiling_partition(useful_clusters, num_classes);
        let mut next = 0;
        for (c, size) in sizes.iter().enumerate() {
            for _ in 0..*size {
                clusters_of_class[c].push(next);
                classes_of_cluster[next].push(c);
                next += 1;
            }
        }
    } else {
        let sizes = ceiling_partition(num_classes, useful_clusters);
        let mut next = 0;
        for (k, size) in sizes.iter().enumerate() {
            for _ in 0..*size {
                clusters_of_class[next].push(k);
                classes_of_cluster[k].push(next);
                next += 1;
            }
        }
    }
    Assignment {
        clusters_of_class,
        classes_of_cluster,
    }
}

/// A |C|x|K| joint distribution. Columns are ordered useful clusters first,
/// then noise clusters. Serializes as a bare JSON matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct JointDistribution {
    p: Vec<Vec<f64>>,
    useful_clusters: usize,
}

impl JointDistribution {
    /// Wrap an arbitrary probability matrix (e.g. for tables not generated
    /// by the family). `useful_clusters` records where the noise block
    /// starts; pass the column count when there is none.
    pub fn from_matrix(p: Vec<Vec<f64>>, useful_clusters: usize) -> Result<Self> {
        if p.is_empty() || p[0].is_empty() {
            return Err(ValidityError::Degenerate("empty distribution".into()));
        }
        let cols = p[0].len();
        if p.iter().any(|row| row.len() != cols) || useful_clusters > cols {
            return Err(ValidityError::Inconsistent(
                "malformed distribution matrix".into(),
            ));
        }
        let mut total = 0.0;
        for row in &p {
            for &x in row {
                if !x.is_finite() || x < 0.0 {
                    return Err(ValidityError::Inconsistent(format!(
                        "probabilities must be finite and non-negative, found {x}"
                    )));
                }
                total += x;
            }
        }
        if (total - 1.0).abs() > 1e-9 {
            return Err(ValidityError::Inconsistent(format!(
                "probabilities sum to {total}, expected 1"
            )));
        }
        Ok(JointDistribution {
            p,
            useful_clusters,
        })
    }

    pub fn num_classes(&self) -> usize {
        self.p.len()
    }

    pub fn num_clusters(&self) -> usize {
        self.p[0].len()
    }

    pub fn useful_clusters(&self) -> usize {
        self.useful_clusters
    }

    pub fn noise_clusters(&self) -> usize {
        self.num_clusters() - self.useful_clusters
    }

    pub fn prob(&self, class: usize, cluster: usize) -> f64 {
        self.p[class][cluster]
    }

    pub fn matrix(&self) -> &[Vec<f64>] {
        &self.p
    }
}

impl Serialize for JointDistribution {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let mut seq = serializer.serialize_seq(Some(self.p.len()))?;
        for row in &self.p {
            seq.serialize_element(row)?;
        }
        seq.end()
    }
}

/// Construct the joint distribution for valid parameters.
///
/// p(c,k) = p(k|c)/|C| with the three-case conditional: (1-eps)/|K(c)| on
/// matched useful clusters, eps1/(|K_u|-|K(c)|) on unmatched useful
/// clusters, eps2/|K_n| on noise clusters.
pub fn build_joint(params: &ModelParams) -> Result<JointDistribution> {
    let reasons = params.validity_errors();
    if !reasons.is_empty() {
        return Err(ValidityError::InvalidModel { reasons });
    }
    let assignment = assign(params.num_classes, params.useful_clusters);
    let num_clusters = params.num_clusters();
    let eps = params.eps();
    let p_class = 1.0 / params.num_classes as f64;
    let mut p = vec![vec![0.0; num_clusters]; params.num_classes];
    for (c, row) in p.iter_mut().enumerate() {
        let matched = &assignment.clusters_of_class[c];
        let p_matched = (1.0 - eps) / matched.len() as f64;
        let unmatched = params.useful_clusters - matched.len();
        let p_unmatched = if params.eps1 > 0.0 {
            params.eps1 / unmatched as f64
        } else {
            0.0
        };
        for (k, cell) in row.iter_mut().enumerate().take(params.useful_clusters) {
            *cell = p_class
                * if matched.binary_search(&k).is_ok() {
                    p_matched
                } else {
                    p_unmatched
                };
        }
        if params.noise_clusters > 0 {
            let p_noise = p_class * params.eps2 / params.noise_clusters as f64;
            for cell in row.iter_mut().skip(params.useful_clusters) {
                *cell = p_noise;
            }
        }
    }
    Ok(JointDistribution {
        p,
        useful_clusters: params.useful_clusters,
    })
}
