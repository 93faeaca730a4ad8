//! Characterization harness: grid evaluation, desiderata checks, ranks and
//! sweeps.
//!
//! The harness enumerates every valid model-family parameter combination on
//! a grid, scores the expected table of each combination under all seven
//! measures, and checks the three desiderata: a measure should degrade
//! whenever the useful-cluster count moves away from the class count (P1),
//! whenever noise clusters are added (P2), and whenever either error
//! parameter grows (P3). Violations are counted per swept sequence, the unit
//! under which the reference counts are reproducible; the individual
//! offending steps are listed alongside.
//!
//! All comparisons are strict with tolerance [`STRICTNESS_TOL`]: a step
//! whose difference lies within the tolerance counts as zero and therefore
//! fails a strict test. Grid evaluation is parallel over combinations but
//! rows are merged in lexicographic parameter order, so output is
//! deterministic regardless of scheduling.

use std::collections::HashMap;
use std::io::{self, Write};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::classic::{all_measures, measures_from_pairs, Measure, MeasureVector};
use crate::error::{Result, ValidityError};
use crate::fmt::fmt_report;
use crate::model::{build_joint, ModelParams};
use crate::tables::{expected_table, pair_counts_population, ContingencyTable};

/// A difference within this band counts as zero, which fails a strict
/// monotonicity test. Chosen so that exact ties (e.g. Hamming's noise
/// insensitivity) are flagged even under f64 round-off.
pub const STRICTNESS_TOL: f64 = 1e-12;

/// The parameter grid: fixed class count and sample size, value lists for
/// the other four model parameters.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct GridSpec {
    pub num_classes: usize,
    pub n: u64,
    pub useful: Vec<usize>,
    pub noise: Vec<usize>,
    pub eps1: Vec<f64>,
    pub eps2: Vec<f64>,
}

impl Default for GridSpec {
    fn default() -> Self {
        GridSpec {
            num_classes: 5,
            n: 500,
            useful: (2..=11).collect(),
            noise: (0..=6).collect(),
            eps1: vec![0.0, 1.0 / 15.0, 2.0 / 15.0, 0.2],
            eps2: vec![0.0, 0.1, 0.2, 0.3],
        }
    }
}

impl GridSpec {
    /// Check list shapes: non-empty, strictly ascending, inside the model
    /// parameter domains.
    pub fn validate(&self) -> Result<()> {
        let mut reasons = Vec::new();
        if self.num_classes == 0 {
            reasons.push("num_classes must be >= 1".to_string());
        }
        if self.n < 2 {
            reasons.push("n must be >= 2".to_string());
        }
        fn check_ascending<T: PartialOrd + Copy + std::fmt::Debug>(
            name: &str,
            values: &[T],
            reasons: &mut Vec<String>,
        ) {
            if values.is_empty() {
                reasons.push(format!("{name} values must be non-empty"));
            }
            if values.windows(2).any(|w| w[0] >= w[1]) {
                reasons.push(format!("{name} values must be strictly ascending: {values:?}"));
            }
        }
        check_ascending("useful", &self.useful, &mut reasons);
        check_ascending("noise", &self.noise, &mut reasons);
        check_ascending("eps1", &self.eps1, &mut reasons);
        check_ascending("eps2", &self.eps2, &mut reasons);
        if self.useful.first().is_some_and(|&k| k == 0) {
            reasons.push("useful cluster counts must be >= 1".to_string());
        }
        for &e in self.eps1.iter().chain(&self.eps2) {
            if !e.is_finite() || !(0.0..1.0).contains(&e) {
                reasons.push(format!("eps values must lie in [0, 1), got {e}"));
            }
        }
        if reasons.is_empty() {
            Ok(())
        } else {
            Err(ValidityError::InvalidModel { reasons })
        }
    }

    fn params(&self, ku: usize, kn: usize, eps1: f64, eps2: f64) -> ModelParams {
        ModelParams {
            num_classes: self.num_classes,
            useful_clusters: ku,
            noise_clusters: kn,
            eps1,
            eps2,
        }
    }
}

/// How the measures of an expected table are computed.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Convention {
    /// Pair counts from the expected table via the counting identities with
    /// the continuous extension x(x-1)/2 (the default pipeline).
    ContinuousExtension,
    /// Population pair counts E[a] = C(n,2) * sum p^2; the form under which
    /// the classical identities (Gamma of a product table = 0) are exact.
    PopulationPairs,
    /// Expected counts rounded to the nearest integer before measuring.
    RoundedCounts,
}

/// One evaluated combination.
#[derive(Debug, Clone, Serialize)]
pub struct GridRow {
    pub params: ModelParams,
    pub measures: MeasureVector,
}

/// All rows of an evaluated grid, in lexicographic
/// (useful, noise, eps1, eps2) order.
#[derive(Debug, Clone)]
pub struct GridResult {
    pub spec: GridSpec,
    pub convention: Convention,
    pub rows: Vec<GridRow>,
}

/// Enumerate the valid combinations of a grid in lexicographic order.
pub fn enumerate_valid(spec: &GridSpec) -> Result<Vec<ModelParams>> {
    spec.validate()?;
    let mut combos = Vec::new();
    for &ku in &spec.useful {
        for &kn in &spec.noise {
            for &e1 in &spec.eps1 {
                for &e2 in &spec.eps2 {
                    let params = spec.params(ku, kn, e1, e2);
                    if params.is_valid() {
                        combos.push(params);
                    }
                }
            }
        }
    }
    Ok(combos)
}

fn rounded(table: &ContingencyTable) -> ContingencyTable {
    let counts: Vec<Vec<f64>> = table
        .counts()
        .iter()
        .map(|row| row.iter().map(|&x| x.round()).collect())
        .collect();
    ContingencyTable::from_counts(counts).expect("rounded expected table stays valid")
}

fn evaluate_combo(params: &ModelParams, n: u64, convention: Convention) -> Result<MeasureVector> {
    let joint = build_joint(params)?;
    let table = expected_table(&joint, n);
    Ok(match convention {
        Convention::ContinuousExtension => all_measures(&table),
        Convention::PopulationPairs => {
            measures_from_pairs(&table, &pair_counts_population(&table))
        }
        Convention::RoundedCounts => all_measures(&rounded(&table)),
    })
}

/// Evaluate every valid combination under the default convention.
pub fn evaluate_grid(spec: &GridSpec) -> Result<GridResult> {
    evaluate_grid_with(spec, Convention::ContinuousExtension)
}

/// Evaluate every valid combination under an explicit convention. Rows come
/// back in enumeration order whatever the parallel schedule did.
pub fn evaluate_grid_with(spec: &GridSpec, convention: Convention) -> Result<GridResult> {
    let combos = enumerate_valid(spec)?;
    let rows: Result<Vec<GridRow>> = combos
        .par_iter()
        .map(|params| {
            Ok(GridRow {
                params: *params,
                measures: evaluate_combo(params, spec.n, convention)?,
            })
        })
        .collect();
    Ok(GridResult {
        spec: spec.clone(),
        convention,
        rows: rows?,
    })
}

impl GridResult {
    /// Map (useful, noise, eps1-ordinal, eps2-ordinal) to a row index.
    fn index(&self) -> HashMap<(usize, usize, usize, usize), usize> {
        let mut map = HashMap::with_capacity(self.rows.len());
        let mut row = 0;
        for &ku in &self.spec.useful {
            for &kn in &self.spec.noise {
                for (i1, &e1) in self.spec.eps1.iter().enumerate() {
                    for (i2, &e2) in self.spec.eps2.iter().enumerate() {
                        if self.spec.params(ku, kn, e1, e2).is_valid() {
                            map.insert((ku, kn, i1, i2), row);
                            row += 1;
                        }
                    }
                }
            }
        }
        debug_assert_eq!(row, self.rows.len());
        map
    }

    fn value(&self, row: usize, measure: Measure) -> f64 {
        self.rows[row].measures.value(measure)
    }
}

/// True when the step from `prev` to `cur` strictly degrades the measure
/// (worse parameters should make a measure look worse).
fn degrades(measure: Measure, prev: f64, cur: f64) -> bool {
    let d = cur - prev;
    if measure.higher_is_better() {
        d < -STRICTNESS_TOL
    } else {
        d > STRICTNESS_TOL
    }
}

/// True when the step strictly improves the measure.
fn improves(measure: Measure, prev: f64, cur: f64) -> bool {
    let d = cur - prev;
    if measure.higher_is_better() {
        d > STRICTNESS_TOL
    } else {
        d < -STRICTNESS_TOL
    }
}

/// One offending consecutive step in a P1 sequence.
#[derive(Debug, Clone, Serialize)]
pub struct P1Violation {
    pub region: String,
    pub from_useful: usize,
    pub to_useful: usize,
    pub noise: usize,
    pub eps1: f64,
    pub eps2: f64,
    pub delta: f64,
}

/// P1 result for one measure. A sequence here is the sweep over the useful
/// cluster counts with (noise, eps1, eps2) fixed; the P1.1 region (below the
/// class count) and the P1.2 region (at or above it) are scored as separate
/// tests of that sequence.
#[derive(Debug, Clone, Serialize)]
pub struct P1Check {
    pub measure: String,
    /// Sequences violating the increase requirement below |C|.
    pub p1_1: usize,
    /// Sequences violating the decrease requirement at or above |C|.
    pub p1_2: usize,
    /// Total offending consecutive steps across all sequences.
    pub step_instances: usize,
    pub violations: Vec<P1Violation>,
}

/// Measures should peak where the useful-cluster count equals the class
/// count: strictly improve while approaching it from below (P1.1) and
/// strictly degrade beyond it (P1.2).
pub fn check_p1(result: &GridResult) -> Vec<P1Check> {
    let spec = &result.spec;
    let index = result.index();
    Measure::ALL
        .iter()
        .map(|&measure| {
            let mut check = P1Check {
                measure: measure.name().to_string(),
                p1_1: 0,
                p1_2: 0,
                step_instances: 0,
                violations: Vec::new(),
            };
            for &kn in &spec.noise {
                for (i1, &e1) in spec.eps1.iter().enumerate() {
                    for (i2, &e2) in spec.eps2.iter().enumerate() {
                        let rows: Vec<Option<&usize>> = spec
                            .useful
                            .iter()
                            .map(|&ku| index.get(&(ku, kn, i1, i2)))
                            .collect();
                        if rows.iter().any(Option::is_none) {
                            continue; // invalid (kn, e1, e2) combination
                        }
                        let mut bad_p11 = false;
                        let mut bad_p12 = false;
                        for w in spec.useful.windows(2) {
                            let (ku_a, ku_b) = (w[0], w[1]);
                            let a = result.value(index[&(ku_a, kn, i1, i2)], measure);
                            let b = result.value(index[&(ku_b, kn, i1, i2)], measure);
                            // P1.1 applies strictly below the peak, P1.2 at or
                            // beyond it; a step straddling the peak is skipped
                            let (region, ok) = if ku_b <= spec.num_classes {
                                ("P1.1", improves(measure, a, b))
                            } else if ku_a >= spec.num_classes {
                                ("P1.2", degrades(measure, a, b))
                            } else {
                                continue;
                            };
                            if !ok {
                                if region == "P1.1" {
                                    bad_p11 = true;
                                } else {
                                    bad_p12 = true;
                                }
                                check.step_instances += 1;
                                check.violations.push(P1Violation {
                                    region: region.to_string(),
                                    from_useful: ku_a,
                                    to_useful: ku_b,
                                    noise: kn,
                                    eps1: e1,
                                    eps2: e2,
                                    delta: b - a,
                                });
                            }
                        }
                        check.p1_1 += usize::from(bad_p11);
                        check.p1_2 += usize::from(bad_p12);
                    }
                }
            }
            check
        })
        .collect()
}

/// One triple whose noise-cluster sweep failed.
#[derive(Debug, Clone, Serialize)]
pub struct P2Violation {
    pub useful: usize,
    pub eps1: f64,
    pub eps2: f64,
}

/// P2 result for one measure: of the (useful, eps1, eps2 > 0) triples, how
/// many noise-cluster sweeps contained at least one non-decreasing step.
#[derive(Debug, Clone, Serialize)]
pub struct P2Check {
    pub measure: String,
    pub count: usize,
    pub denominator: usize,
    pub violations: Vec<P2Violation>,
}

/// Adding noise clusters at fixed noise mass should strictly degrade every
/// measure. A sweep over the positive noise counts with (useful, eps1, eps2)
/// fixed counts as one violation however many steps fail.
pub fn check_p2(result: &GridResult) -> Vec<P2Check> {
    let spec = &result.spec;
    let index = result.index();
    let positive_noise: Vec<usize> = spec.noise.iter().copied().filter(|&kn| kn >= 1).collect();
    Measure::ALL
        .iter()
        .map(|&measure| {
            let mut check = P2Check {
                measure: measure.name().to_string(),
                count: 0,
                denominator: 0,
                violations: Vec::new(),
            };
            for &ku in &spec.useful {
                for (i1, &e1) in spec.eps1.iter().enumerate() {
                    for (i2, &e2) in spec.eps2.iter().enumerate() {
                        if e2 <= 0.0 {
                            continue;
                        }
                        check.denominator += 1;
                        let bad = positive_noise.windows(2).any(|w| {
                            let a = result.value(index[&(ku, w[0], i1, i2)], measure);
                            let b = result.value(index[&(ku, w[1], i1, i2)], measure);
                            !degrades(measure, a, b)
                        });
                        if bad {
                            check.count += 1;
                            check.violations.push(P2Violation {
                                useful: ku,
                                eps1: e1,
                                eps2: e2,
                            });
                        }
                    }
                }
            }
            check
        })
        .collect()
}

/// One offending consecutive step in an error-parameter sweep.
#[derive(Debug, Clone, Serialize)]
pub struct P3Violation {
    pub useful: usize,
    pub noise: usize,
    /// The error parameter held fixed (eps2 for P3.1, eps1 for P3.2).
    pub other_eps: f64,
    pub from_eps: f64,
    pub to_eps: f64,
    pub delta: f64,
}

/// P3 result for one measure. `sequences` counts sweeps with at least one
/// failing step; `step_instances` counts the failing steps themselves.
#[derive(Debug, Clone, Serialize)]
pub struct P3Check {
    pub measure: String,
    pub sequences: usize,
    pub step_instances: usize,
    pub violations: Vec<P3Violation>,
}

/// Both halves of the P3 check.
#[derive(Debug, Clone, Serialize)]
pub struct P3Checks {
    /// Sweeps over eps1 with everything else fixed.
    pub eps1: Vec<P3Check>,
    /// Sweeps over the valid eps2 values with everything else fixed.
    pub eps2: Vec<P3Check>,
}

/// Raising either error parameter should strictly degrade every measure.
pub fn check_p3(result: &GridResult) -> P3Checks {
    let spec = &result.spec;
    let index = result.index();

    let eps1 = Measure::ALL
        .iter()
        .map(|&measure| {
            let mut check = P3Check {
                measure: measure.name().to_string(),
                sequences: 0,
                step_instances: 0,
                violations: Vec::new(),
            };
            for &ku in &spec.useful {
                for &kn in &spec.noise {
                    for (i2, &e2) in spec.eps2.iter().enumerate() {
                        let mut bad = false;
                        for i1 in 0..spec.eps1.len().saturating_sub(1) {
                            let (Some(&ra), Some(&rb)) = (
                                index.get(&(ku, kn, i1, i2)),
                                index.get(&(ku, kn, i1 + 1, i2)),
                            ) else {
                                continue;
                            };
                            let a = result.value(ra, measure);
                            let b = result.value(rb, measure);
                            if !degrades(measure, a, b) {
                                bad = true;
                                check.step_instances += 1;
                                check.violations.push(P3Violation {
                                    useful: ku,
                                    noise: kn,
                                    other_eps: e2,
                                    from_eps: spec.eps1[i1],
                                    to_eps: spec.eps1[i1 + 1],
                                    delta: b - a,
                                });
                            }
                        }
                        check.sequences += usize::from(bad);
                    }
                }
            }
            check
        })
        .collect();

    let eps2 = Measure::ALL
        .iter()
        .map(|&measure| {
            let mut check = P3Check {
                measure: measure.name().to_string(),
                sequences: 0,
                step_instances: 0,
                violations: Vec::new(),
            };
            for &ku in &spec.useful {
                for &kn in &spec.noise {
                    for (i1, &e1) in spec.eps1.iter().enumerate() {
                        // the valid eps2 values for this noise count
                        let valid: Vec<usize> = (0..spec.eps2.len())
                            .filter(|&i2| index.contains_key(&(ku, kn, i1, i2)))
                            .collect();
                        let mut bad = false;
                        for w in valid.windows(2) {
                            let a = result.value(index[&(ku, kn, i1, w[0])], measure);
                            let b = result.value(index[&(ku, kn, i1, w[1])], measure);
                            if !degrades(measure, a, b) {
                                bad = true;
                                check.step_instances += 1;
                                check.violations.push(P3Violation {
                                    useful: ku,
                                    noise: kn,
                                    other_eps: e1,
                                    from_eps: spec.eps2[w[0]],
                                    to_eps: spec.eps2[w[1]],
                                    delta: b - a,
                                });
                            }
                        }
                        check.sequences += usize::from(bad);
                    }
                }
            }
            check
        })
        .collect();

    P3Checks { eps1, eps2 }
}

/// Per-measure violation count under an alternative convention.
#[derive(Debug, Clone, Serialize)]
pub struct MeasureCount {
    pub measure: String,
    pub count: usize,
}

/// P2 tallies under the two alternative expected-table conventions, kept
/// alongside the primary counts because the published figures are sensitive
/// to the choice.
#[derive(Debug, Clone, Serialize)]
pub struct AltP2Counts {
    pub population_pairs: Vec<MeasureCount>,
    pub rounded_counts: Vec<MeasureCount>,
}

/// The full desiderata report for one grid.
#[derive(Debug, Clone, Serialize)]
pub struct ViolationReport {
    pub combinations: usize,
    pub p1: Vec<P1Check>,
    pub p2: Vec<P2Check>,
    pub p2_alternative_conventions: AltP2Counts,
    pub p3_1: Vec<P3Check>,
    pub p3_2: Vec<P3Check>,
}

impl ViolationReport {
    pub fn p2_count(&self, measure: Measure) -> usize {
        self.p2
            .iter()
            .find(|c| c.measure == measure.name())
            .map_or(0, |c| c.count)
    }
}

/// Run every desiderata check on an evaluated grid, attaching P2 tallies for
/// the two alternative conventions.
pub fn violation_report(spec: &GridSpec) -> Result<ViolationReport> {
    let primary = evaluate_grid(spec)?;
    let population = evaluate_grid_with(spec, Convention::PopulationPairs)?;
    let rounded = evaluate_grid_with(spec, Convention::RoundedCounts)?;
    Ok(violation_report_for(&primary, &population, &rounded))
}

/// Assemble the report from already-evaluated grids.
pub fn violation_report_for(
    primary: &GridResult,
    population: &GridResult,
    rounded: &GridResult,
) -> ViolationReport {
    let p3 = check_p3(primary);
    let counts_of = |result: &GridResult| {
        check_p2(result)
            .into_iter()
            .map(|c| MeasureCount {
                measure: c.measure,
                count: c.count,
            })
            .collect()
    };
    ViolationReport {
        combinations: primary.rows.len(),
        p1: check_p1(primary),
        p2: check_p2(primary),
        p2_alternative_conventions: AltP2Counts {
            population_pairs: counts_of(population),
            rounded_counts: counts_of(rounded),
        },
        p3_1: p3.eps1,
        p3_2: p3.eps2,
    }
}

/// Best-first average ranks: rank 1 is the best value (smallest when
/// `ascending`, largest otherwise); ties share the mean of their positions.
///
/// Values within [`STRICTNESS_TOL`] of their sort neighbour tie. Exact ties
/// of the underlying quantities land around 1e-16 apart in f64 while the
/// smallest genuine gap on the default grid is above 1e-7, so the band
/// recovers the mathematical tie structure.
pub fn average_ranks(values: &[f64], ascending: bool) -> Vec<f64> {
    let mut order: Vec<usize> = (0..values.len()).collect();
    order.sort_by(|&a, &b| {
        let cmp = values[a].total_cmp(&values[b]);
        if ascending {
            cmp
        } else {
            cmp.reverse()
        }
    });
    let mut ranks = vec![0.0; values.len()];
    let mut i = 0;
    while i < order.len() {
        let mut j = i;
        while j + 1 < order.len()
            && (values[order[j + 1]] - values[order[j]]).abs() <= STRICTNESS_TOL
        {
            j += 1;
        }
        let rank = (i + 1 + j + 1) as f64 / 2.0;
        for &idx in &order[i..=j] {
            ranks[idx] = rank;
        }
        i = j + 1;
    }
    ranks
}

/// Spearman rank correlation: the Pearson correlation of two (already
/// tie-averaged) rank vectors.
pub fn spearman(ranks_a: &[f64], ranks_b: &[f64]) -> f64 {
    assert_eq!(ranks_a.len(), ranks_b.len());
    let n = ranks_a.len() as f64;
    let mean_a: f64 = ranks_a.iter().sum::<f64>() / n;
    let mean_b: f64 = ranks_b.iter().sum::<f64>() / n;
    let mut sab = 0.0;
    let mut saa = 0.0;
    let mut sbb = 0.0;
    for (&a, &b) in ranks_a.iter().zip(ranks_b) {
        sab += (a - mean_a) * (b - mean_b);
        saa += (a - mean_a) * (a - mean_a);
        sbb += (b - mean_b) * (b - mean_b);
    }
    sab / (saa * sbb).sqrt()
}

/// Per-measure rank vectors over the rows of a grid, best first.
#[derive(Debug, Clone, Serialize)]
pub struct RankTable {
    pub measures: Vec<String>,
    /// ranks[m][i]: rank of row i under measure m.
    pub ranks: Vec<Vec<f64>>,
}

/// Rank every row under every measure. q0 ranks ascending (a description
/// length), everything else descending.
pub fn rank_table(result: &GridResult) -> RankTable {
    let mut measures = Vec::new();
    let mut ranks = Vec::new();
    for &measure in &Measure::ALL {
        let values: Vec<f64> = result
            .rows
            .iter()
            .map(|row| row.measures.value(measure))
            .collect();
        measures.push(measure.name().to_string());
        ranks.push(average_ranks(&values, !measure.higher_is_better()));
    }
    RankTable { measures, ranks }
}

/// One point of an error-parameter sweep.
#[derive(Debug, Clone, Serialize)]
pub struct SweepPoint {
    pub eps1: f64,
    pub measures: MeasureVector,
}

/// The default sweep sampling: eps1 = 0, 0.05, ..., 0.8.
pub fn default_sweep_eps1() -> Vec<f64> {
    (0..=16).map(|i| f64::from(i) / 20.0).collect()
}

/// Evaluate the measures while eps1 sweeps an ascending list and the other
/// model parameters stay fixed.
pub fn sweep_eps1(
    num_classes: usize,
    useful_clusters: usize,
    noise_clusters: usize,
    eps2: f64,
    eps1_values: &[f64],
    n: u64,
) -> Result<Vec<SweepPoint>> {
    if eps1_values.is_empty() || eps1_values.windows(2).any(|w| w[0] >= w[1]) {
        return Err(ValidityError::InvalidModel {
            reasons: vec!["eps1 sweep values must be non-empty and strictly ascending".into()],
        });
    }
    eps1_values
        .iter()
        .map(|&eps1| {
            let params = ModelParams {
                num_classes,
                useful_clusters,
                noise_clusters,
                eps1,
                eps2,
            };
            Ok(SweepPoint {
                eps1,
                measures: evaluate_combo(&params, n, Convention::ContinuousExtension)?,
            })
        })
        .collect()
}

/// Measure columns shared by the grid and sweep CSV files.
const CSV_MEASURES: [Measure; 7] = [
    Measure::Q0,
    Measure::Q2,
    Measure::Rand,
    Measure::Jaccard,
    Measure::Fowlkes,
    Measure::Gamma,
    Measure::Hamming,
];

const CSV_MEASURE_HEADER: &str = "q0,q2,rand,jaccard,fm,gamma,hamming";

fn write_measure_fields<W: Write>(w: &mut W, m: &MeasureVector) -> io::Result<()> {
    let fields: Vec<String> = CSV_MEASURES
        .iter()
        .map(|&measure| fmt_report(m.value(measure)))
        .collect();
    write!(w, "{}", fields.join(","))
}

/// Grid CSV: one row per combination,
/// `ku,kn,eps1,eps2,q0,q2,rand,jaccard,fm,gamma,hamming`.
pub fn write_grid_csv<W: Write>(w: &mut W, result: &GridResult) -> io::Result<()> {
    writeln!(w, "ku,kn,eps1,eps2,{CSV_MEASURE_HEADER}")?;
    for row in &result.rows {
        write!(
            w,
            "{},{},{},{},",
            row.params.useful_clusters,
            row.params.noise_clusters,
            fmt_report(row.params.eps1),
            fmt_report(row.params.eps2),
        )?;
        write_measure_fields(w, &row.measures)?;
        writeln!(w)?;
    }
    Ok(())
}

/// Ranks CSV: `combo_index,<measure>_rank,...` with combo_index matching the
/// grid CSV row order.
pub fn write_ranks_csv<W: Write>(w: &mut W, table: &RankTable) -> io::Result<()> {
    let header: Vec<String> = table
        .measures
        .iter()
        .map(|m| format!("{m}_rank"))
        .collect();
    writeln!(w, "combo_index,{}", header.join(","))?;
    let rows = table.ranks.first().map_or(0, Vec::len);
    for i in 0..rows {
        let fields: Vec<String> = table.ranks.iter().map(|r| fmt_report(r[i])).collect();
        writeln!(w, "{},{}", i, fields.join(","))?;
    }
    Ok(())
}

/// Sweep CSV: `eps1,q0,q2,rand,jaccard,fm,gamma,hamming`.
pub fn write_sweep_csv<W: Write>(w: &mut W, points: &[SweepPoint]) -> io::Result<()> {
    writeln!(w, "eps1,{CSV_MEASURE_HEADER}")?;
    for point in points {
        write!(w, "{},", fmt_report(point.eps1))?;
        write_measure_fields(w, &point.measures)?;
        writeln!(w)?;
    }
    Ok(())
}
