//! External cluster-validity measures.
//!
//! Given a clustering and ground-truth class labels for the same objects,
//! this crate scores how well the cluster labels predict the class labels.
//! The headline measure treats the clustering as a code book: `q0` is the
//! number of bits per object needed to transmit the class labels when both
//! sides know the cluster labels (conditional entropy plus the enumerative
//! cost of the contingency table itself), and `q2` normalizes it into
//! (0, 1]. Because the table cost is part of the score, clusterings with
//! different cluster counts compare on an equal footing.
//!
//! Five classical external measures (Rand, Jaccard, Fowlkes-Mallows, the
//! Hubert-Schultz Gamma statistic, and normalized Hamming distance) are
//! implemented alongside, together with a parametric class-cluster model
//! family and a characterization harness that scores all seven measures
//! over a parameter grid and checks the monotonicity desiderata each
//! measure ought to satisfy.
//!
//! ```
//! use cluster_validity::tables::{build_contingency, Labeling};
//! use cluster_validity::classic::all_measures;
//!
//! let labels = Labeling::from_ids([(0, 0), (0, 0), (1, 1), (1, 1)]).unwrap();
//! let table = build_contingency(&labels);
//! let scores = all_measures(&table);
//! assert_eq!(scores.rand, 1.0);
//! assert_eq!(scores.q2, 1.0);
//! ```

pub mod characterization;
pub mod classic;
pub mod error;
pub mod fmt;
pub mod info;
pub mod model;
pub mod tables;

pub use error::{Result, ValidityError};
