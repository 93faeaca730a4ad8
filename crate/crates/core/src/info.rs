//! The information-theoretic validity measure.
//!
//! The quality of a clustering is scored as the per-object cost, in bits, of
//! encoding the class labels when the cluster labels are shared by encoder
//! and decoder: the empirical conditional entropy of classes given clusters
//! plus the cost of transmitting the contingency table itself under an
//! enumerative code (each column is an index among all non-negative integer
//! columns with its known sum). `q0` is that total; `q2` rescales it into
//! (0, 1] via closed-form bounds so that 1 is best.
//!
//! All logarithms are base 2; quantities are bits throughout. The convention
//! 0 log 0 = 0 applies everywhere, and fractional counts (from expected
//! tables) are handled by the log-gamma continuous extension of the
//! binomial.

use serde::Serialize;
use statrs::function::gamma::ln_gamma;

use crate::error::{Result, ValidityError};
use crate::tables::ContingencyTable;

/// A non-negative quantity measured in bits.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd, Serialize)]
#[serde(transparent)]
pub struct Bits(pub f64);

impl Bits {
    pub fn value(self) -> f64 {
        self.0
    }
}

impl std::ops::Add for Bits {
    type Output = Bits;
    fn add(self, rhs: Bits) -> Bits {
        Bits(self.0 + rhs.0)
    }
}

impl std::ops::Sub for Bits {
    type Output = Bits;
    fn sub(self, rhs: Bits) -> Bits {
        Bits(self.0 - rhs.0)
    }
}

impl std::fmt::Display for Bits {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{} bits", self.0)
    }
}

/// The full measure bundle for one table.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct QScores {
    /// Empirical conditional entropy H(C|K) in bits per object.
    #[serde(rename = "h_cond_bits")]
    pub h_cond: Bits,
    /// Enumerative code length for the table, per object.
    #[serde(rename = "model_cost_bits_per_obj")]
    pub model_cost_per_object: Bits,
    /// q0 = h_cond + model cost per object; lower is better.
    pub q0: Bits,
    /// Exact minimum of q0 over clusterings with this class marginal.
    pub q0_min: Bits,
    /// Upper bound H(C) + log2|C| on q0.
    pub q0_max: Bits,
    /// (q0_max - q0) / (q0_max - q0_min); in (0, 1], higher is better.
    pub q2: f64,
    #[serde(rename = "mutual_information_bits")]
    pub mutual_information: Bits,
}

const LN_2: f64 = std::f64::consts::LN_2;

/// Tolerance within which a count is treated as an exact integer.
const INTEGRAL_TOL: f64 = 1e-9;

fn log2(x: f64) -> f64 {
    x.ln() / LN_2
}

/// Entropy of a non-negative weight vector, 0 for zero total mass.
fn entropy_unchecked(marginal: &[f64]) -> Bits {
    let n: f64 = marginal.iter().sum();
    if n <= 0.0 {
        return Bits(0.0);
    }
    let mut h = 0.0;
    for &x in marginal {
        if x > 0.0 {
            h += x / n * log2(n / x);
        }
    }
    Bits(h.max(0.0))
}

/// Empirical entropy -sum_c (h(c)/n) log2(h(c)/n) of a count vector.
pub fn empirical_entropy(marginal: &[f64]) -> Result<Bits> {
    if marginal.iter().sum::<f64>() <= 0.0 {
        return Err(ValidityError::Degenerate(
            "entropy of an all-zero marginal".into(),
        ));
    }
    Ok(entropy_unchecked(marginal))
}

/// Empirical conditional entropy of classes given clusters:
/// -sum_ck (h(c,k)/n) log2(h(c,k)/h(k)). Zero cells and empty columns
/// contribute nothing.
pub fn empirical_conditional_entropy(table: &ContingencyTable) -> Bits {
    let n = table.n();
    let col = table.col_marginals();
    let mut h = 0.0;
    for row in table.counts() {
        for (k, &x) in row.iter().enumerate() {
            if x > 0.0 {
                h += x / n * log2(col[k] / x);
            }
        }
    }
    Bits(h.max(0.0))
}

/// log2 of the number of |C|-component non-negative integer vectors summing
/// to `h_k`: log2 C(h_k + |C| - 1, |C| - 1).
///
/// Integral sums take the product form of the binomial (exact up to f64
/// rounding); fractional sums use the log-gamma continuous extension.
pub fn column_code_length(h_k: f64, num_classes: usize) -> Bits {
    debug_assert!(h_k >= 0.0 && num_classes >= 1);
    if h_k <= 0.0 || num_classes == 1 {
        return Bits(0.0);
    }
    let r = (num_classes - 1) as f64;
    let rounded = h_k.round();
    let bits = if (h_k - rounded).abs() <= INTEGRAL_TOL {
        // C(m + r, r) = prod_{i=1..r} (m + i) / i
        let mut acc = 0.0;
        for i in 1..num_classes {
            acc += ((rounded + i as f64) / i as f64).ln();
        }
        acc / LN_2
    } else {
        (ln_gamma(h_k + r + 1.0) - ln_gamma(h_k + 1.0) - ln_gamma(r + 1.0)) / LN_2
    };
    Bits(bits.max(0.0))
}

/// Total bits to encode the table given its column sums:
/// sum_k log2 C(h(k) + |C| - 1, |C| - 1).
pub fn table_code_length(table: &ContingencyTable) -> Bits {
    let c = table.num_classes();
    Bits(
        table
            .col_marginals()
            .iter()
            .map(|&h_k| column_code_length(h_k, c).value())
            .sum(),
    )
}

/// The per-object description length q0 = H(C|K) + (1/n) * table code
/// length. The fixed log n cost of transmitting |C| is omitted; it is
/// constant for a given ground truth.
pub fn q0(table: &ContingencyTable) -> Bits {
    empirical_conditional_entropy(table) + Bits(table_code_length(table).value() / table.n())
}

/// Asymptotic form of q0 for large n: h_cond + |K|(|C|-1) log2(n)/n.
pub fn q0_asymptotic(h_cond: Bits, num_clusters: usize, num_classes: usize, n: f64) -> Bits {
    debug_assert!(n >= 2.0);
    h_cond + Bits((num_clusters * (num_classes - 1)) as f64 * log2(n) / n)
}

/// Exact minimum of q0 over clusterings with class marginal `class_marginal`:
/// (1/n) sum_c log2 C(h(c) + |C| - 1, |C| - 1). Attained by the perfect
/// clustering.
pub fn q0_min(class_marginal: &[f64], num_classes: usize, n: f64) -> Bits {
    Bits(
        class_marginal
            .iter()
            .map(|&h_c| column_code_length(h_c, num_classes).value())
            .sum::<f64>()
            / n,
    )
}

/// Upper bound on q0: H(C) + log2 |C|. The true maximum depends on the
/// details of the class marginal; this bound is what q2 normalizes against.
pub fn q0_max(class_marginal: &[f64], num_classes: usize) -> Bits {
    entropy_unchecked(class_marginal) + Bits(log2(num_classes as f64).max(0.0))
}

/// Normalized measure q2 = (q0_max - q0) / (q0_max - q0_min).
pub fn q2(table: &ContingencyTable) -> Result<f64> {
    Ok(q_scores(table)?.q2)
}

/// Mutual information I(C;K) = H(C) - H(C|K), clamped at zero against
/// round-off.
pub fn mutual_information(table: &ContingencyTable) -> Bits {
    let h_class = entropy_unchecked(&table.row_marginals());
    let h_cond = empirical_conditional_entropy(table);
    Bits((h_class.value() - h_cond.value()).max(0.0))
}

/// Compute every score for one table.
///
/// Fails only when the normalization is degenerate (q0_max = q0_min, e.g. a
/// single class), in which case q2 is undefined.
pub fn q_scores(table: &ContingencyTable) -> Result<QScores> {
    let n = table.n();
    let num_classes = table.num_classes();
    let class_marginal = table.row_marginals();
    let h_cond = empirical_conditional_entropy(table);
    let cost = Bits(table_code_length(table).value() / n);
    let q0 = h_cond + cost;
    let q0_min = q0_min(&class_marginal, num_classes, n);
    let q0_max = q0_max(&class_marginal, num_classes);
    let span = q0_max.value() - q0_min.value();
    if span <= 1e-12 {
        return Err(ValidityError::Degenerate(format!(
            "q0_max = q0_min = {}; q2 is undefined (single class?)",
            q0_max.value()
        )));
    }
    Ok(QScores {
        h_cond,
        model_cost_per_object: cost,
        q0,
        q0_min,
        q0_max,
        q2: (q0_max.value() - q0.value()) / span,
        mutual_information: mutual_information(table),
    })
}
