//! Contingency tables and pair-count tables.
//!
//! A clustering compared against ground truth reduces first to the |C|x|K|
//! contingency table of class-by-cluster object counts, and further to the
//! 2x2 table of object pairs split by same/different class and cluster.
//! Counts are kept as reals: expected tables derived from a distribution are
//! fractional and are never rounded here.

use std::collections::HashMap;
use std::io::Read;

use serde::{Deserialize, Serialize};

use crate::error::{Result, ValidityError};
use crate::model::JointDistribution;

/// Per-object (class, cluster) assignments with ids canonicalized to dense
/// 0-based ranges in order of first appearance.
#[derive(Debug, Clone)]
pub struct Labeling {
    items: Vec<(usize, usize)>,
    class_names: Vec<String>,
    cluster_names: Vec<String>,
}

#[derive(Default)]
struct Interner {
    ids: HashMap<String, usize>,
    names: Vec<String>,
}

impl Interner {
    fn intern(&mut self, name: &str) -> usize {
        if let Some(&id) = self.ids.get(name) {
            return id;
        }
        let id = self.names.len();
        self.ids.insert(name.to_string(), id);
        self.names.push(name.to_string());
        id
    }
}

impl Labeling {
    /// Build a labeling from arbitrary string labels.
    pub fn from_names<I, S>(items: I) -> Result<Self>
    where
        I: IntoIterator<Item = (S, S)>,
        S: AsRef<str>,
    {
        let mut classes = Interner::default();
        let mut clusters = Interner::default();
        let items: Vec<(usize, usize)> = items
            .into_iter()
            .map(|(c, k)| (classes.intern(c.as_ref()), clusters.intern(k.as_ref())))
            .collect();
        if items.is_empty() {
            return Err(ValidityError::EmptyLabeling);
        }
        Ok(Labeling {
            items,
            class_names: classes.names,
            cluster_names: clusters.names,
        })
    }

    /// Build a labeling from numeric ids (canonicalized like any other label).
    pub fn from_ids<I>(items: I) -> Result<Self>
    where
        I: IntoIterator<Item = (u64, u64)>,
    {
        Self::from_names(
            items
                .into_iter()
                .map(|(c, k)| (c.to_string(), k.to_string())),
        )
    }

    /// Parse the label-file format: CSV with header `class,cluster` and one
    /// row per object. Values are arbitrary strings.
    pub fn from_csv<R: Read>(reader: R) -> Result<Self> {
        let mut rdr = csv::ReaderBuilder::new()
            .has_headers(true)
            .flexible(true)
            .from_reader(reader);
        let headers = rdr.headers().map_err(|e| csv_error(&e))?.clone();
        if headers.iter().collect::<Vec<_>>() != ["class", "cluster"] {
            return Err(ValidityError::LabelFile {
                line: 1,
                message: format!(
                    "expected header `class,cluster`, found `{}`",
                    headers.iter().collect::<Vec<_>>().join(",")
                ),
            });
        }
        let mut items = Vec::new();
        for record in rdr.records() {
            let record = record.map_err(|e| csv_error(&e))?;
            let line = record.position().map_or(0, |p| p.line());
            if record.len() != 2 {
                return Err(ValidityError::LabelFile {
                    line,
                    message: format!("expected 2 fields, found {}", record.len()),
                });
            }
            items.push((record[0].to_string(), record[1].to_string()));
        }
        Self::from_names(items)
    }

    pub fn len(&self) -> usize {
        self.items.len()
    }

    pub fn is_empty(&self) -> bool {
        self.items.is_empty()
    }

    pub fn num_classes(&self) -> usize {
        self.class_names.len()
    }

    pub fn num_clusters(&self) -> usize {
        self.cluster_names.len()
    }

    /// Canonicalized (class, cluster) pairs, one per object.
    pub fn items(&self) -> &[(usize, usize)] {
        &self.items
    }

    pub fn class_names(&self) -> &[String] {
        &self.class_names
    }

    pub fn cluster_names(&self) -> &[String] {
        &self.cluster_names
    }
}

fn csv_error(e: &csv::Error) -> ValidityError {
    let line = e.position().map_or(0, |p| p.line());
    ValidityError::LabelFile {
        line,
        message: e.to_string(),
    }
}

/// |C|x|K| table of non-negative real counts with total mass `n`.
///
/// Marginals are recomputed from the stored counts rather than cached, so a
/// table can never disagree with its own marginals.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ContingencyTable {
    n: f64,
    counts: Vec<Vec<f64>>,
    class_labels: Vec<String>,
    cluster_labels: Vec<String>,
}

impl ContingencyTable {
    /// Validate and wrap a count matrix. Rows are classes, columns clusters.
    pub fn new(
        counts: Vec<Vec<f64>>,
        class_labels: Vec<String>,
        cluster_labels: Vec<String>,
    ) -> Result<Self> {
        if counts.is_empty() || counts[0].is_empty() {
            return Err(ValidityError::Inconsistent(
                "table must have at least one row and one column".into(),
            ));
        }
        let cols = counts[0].len();
        if counts.iter().any(|row| row.len() != cols) {
            return Err(ValidityError::Inconsistent(
                "table rows have unequal lengths".into(),
            ));
        }
        if counts.len() != class_labels.len() || cols != cluster_labels.len() {
            return Err(ValidityError::Inconsistent(
                "label vectors do not match table dimensions".into(),
            ));
        }
        let mut n = 0.0;
        for row in &counts {
            for &x in row {
                if !x.is_finite() || x < 0.0 {
                    return Err(ValidityError::Inconsistent(format!(
                        "counts must be finite and non-negative, found {x}"
                    )));
                }
                n += x;
            }
        }
        if n <= 0.0 {
            return Err(ValidityError::Degenerate(
                "table has zero total mass".into(),
            ));
        }
        Ok(ContingencyTable {
            n,
            counts,
            class_labels,
            cluster_labels,
        })
    }

    /// Wrap a count matrix with 1-based numeric labels.
    pub fn from_counts(counts: Vec<Vec<f64>>) -> Result<Self> {
        let rows = counts.len();
        let cols = counts.first().map_or(0, Vec::len);
        Self::new(counts, numeric_labels(rows), numeric_labels(cols))
    }

    pub fn n(&self) -> f64 {
        self.n
    }

    pub fn num_classes(&self) -> usize {
        self.counts.len()
    }

    pub fn num_clusters(&self) -> usize {
        self.counts[0].len()
    }

    pub fn count(&self, class: usize, cluster: usize) -> f64 {
        self.counts[class][cluster]
    }

    pub fn counts(&self) -> &[Vec<f64>] {
        &self.counts
    }

    pub fn class_labels(&self) -> &[String] {
        &self.class_labels
    }

    pub fn cluster_labels(&self) -> &[String] {
        &self.cluster_labels
    }

    /// h(c) = sum_k h(c,k).
    pub fn row_marginals(&self) -> Vec<f64> {
        self.counts.iter().map(|row| row.iter().sum()).collect()
    }

    /// h(k) = sum_c h(c,k).
    pub fn col_marginals(&self) -> Vec<f64> {
        let mut cols = vec![0.0; self.num_clusters()];
        for row in &self.counts {
            for (k, &x) in row.iter().enumerate() {
                cols[k] += x;
            }
        }
        cols
    }
}

fn numeric_labels(len: usize) -> Vec<String> {
    (1..=len).map(|i| i.to_string()).collect()
}

/// The 2x2 pair table: `a00` pairs share class and cluster, `a01` share the
/// class only, `a10` the cluster only, `a11` neither. `m` is the total
/// unordered pair count n(n-1)/2.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PairCounts {
    pub a00: f64,
    pub a01: f64,
    pub a10: f64,
    pub a11: f64,
    pub m: f64,
}

impl PairCounts {
    /// a0. = pairs sharing a class.
    pub fn same_class(&self) -> f64 {
        self.a00 + self.a01
    }

    /// a.0 = pairs sharing a cluster.
    pub fn same_cluster(&self) -> f64 {
        self.a00 + self.a10
    }
}

/// Tally a labeling into its contingency table. Counts are exact integers
/// stored as reals.
pub fn build_contingency(labels: &Labeling) -> ContingencyTable {
    let mut counts = vec![vec![0.0; labels.num_clusters()]; labels.num_classes()];
    for &(c, k) in labels.items() {
        counts[c][k] += 1.0;
    }
    ContingencyTable::new(
        counts,
        labels.class_names().to_vec(),
        labels.cluster_names().to_vec(),
    )
    .expect("labeling always yields a valid table")
}

fn choose2(x: f64) -> f64 {
    x * (x - 1.0) / 2.0
}

/// Derive the pair table from a contingency table via the counting
/// identities, applying the continuous extension x(x-1)/2 verbatim to
/// fractional counts:
///
/// a00 = sum_ck C(h(c,k),2), a0. = sum_c C(h(c),2), a.0 = sum_k C(h(k),2),
/// with the remaining cells fixed by the marginals and M = C(n,2).
pub fn pair_counts_from_table(table: &ContingencyTable) -> Result<PairCounts> {
    let a00: f64 = table
        .counts()
        .iter()
        .flat_map(|row| row.iter())
        .map(|&x| choose2(x))
        .sum();
    let a0dot: f64 = table.row_marginals().iter().map(|&x| choose2(x)).sum();
    let adot0: f64 = table.col_marginals().iter().map(|&x| choose2(x)).sum();
    let m = choose2(table.n());
    let a01 = a0dot - a00;
    let a10 = adot0 - a00;
    let a11 = m - a00 - a01 - a10;
    let tol = 1e-9 * m.max(1.0);
    for (name, v) in [("a00", a00), ("a01", a01), ("a10", a10), ("a11", a11)] {
        if v < -tol {
            return Err(ValidityError::Inconsistent(format!(
                "derived pair count {name} = {v} is negative"
            )));
        }
    }
    Ok(PairCounts {
        a00: a00.max(0.0),
        a01: a01.max(0.0),
        a10: a10.max(0.0),
        a11: a11.max(0.0),
        m,
    })
}

/// Population (expected-value) form of the pair table for a table of
/// expected counts h = n*p: every entry is M times the probability that two
/// independent draws from p agree on the corresponding margin, e.g.
/// a00 = M * sum_ck p(c,k)^2. For a table from a real labeling this is NOT
/// the combinatorial pair count; it is the convention under which the
/// classical identities Gamma(product) = 0 and a00 = a0.a.0/M hold exactly.
pub fn pair_counts_population(table: &ContingencyTable) -> PairCounts {
    let n = table.n();
    let m = choose2(n);
    let sq_sum = |xs: &[f64]| xs.iter().map(|&x| (x / n) * (x / n)).sum::<f64>();
    let a00 = m * table
        .counts()
        .iter()
        .flat_map(|row| row.iter())
        .map(|&x| (x / n) * (x / n))
        .sum::<f64>();
    let a0dot = m * sq_sum(&table.row_marginals());
    let adot0 = m * sq_sum(&table.col_marginals());
    PairCounts {
        a00,
        a01: (a0dot - a00).max(0.0),
        a10: (adot0 - a00).max(0.0),
        a11: (m - a0dot - adot0 + a00).max(0.0),
        m,
    }
}

/// Classify every unordered object pair directly. O(n^2); the oracle the
/// identity-based route is checked against.
pub fn pair_counts_bruteforce(labels: &Labeling) -> PairCounts {
    let items = labels.items();
    let mut a = [[0.0_f64; 2]; 2];
    for i in 0..items.len() {
        for j in (i + 1)..items.len() {
            let same_class = usize::from(items[i].0 != items[j].0);
            let same_cluster = usize::from(items[i].1 != items[j].1);
            a[same_class][same_cluster] += 1.0;
        }
    }
    let n = items.len() as f64;
    PairCounts {
        a00: a[0][0],
        a01: a[0][1],
        a10: a[1][0],
        a11: a[1][1],
        m: choose2(n),
    }
}

/// Expected contingency table h(c,k) = n*p(c,k). Values stay real-valued;
/// they are deliberately not rounded.
pub fn expected_table(p: &JointDistribution, n: u64) -> ContingencyTable {
    let nf = n as f64;
    let counts: Vec<Vec<f64>> = p
        .matrix()
        .iter()
        .map(|row| row.iter().map(|&x| nf * x).collect())
        .collect();
    ContingencyTable::from_counts(counts).expect("joint distribution yields a valid table")
}
