//! Finite joint distributions and the entropy primitives built on them.
//!
//! All entropies are in bits. Summation is row-major so that every
//! derived quantity is reproducible bit-for-bit across runs.

use std::fmt;
use std::path::Path;

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Tolerance on the total mass of a validated distribution.
pub const SUM_TOLERANCE: f64 = 1e-9;

/// Largest deviation from 1 that is silently renormalized on load.
pub const RENORMALIZE_TOLERANCE: f64 = 1e-6;

#[derive(Debug, Error)]
pub enum DistError {
    #[error("empty matrix")]
    Empty,
    #[error("ragged matrix: row {row} has {found} entries, expected {expected}")]
    Ragged {
        row: usize,
        found: usize,
        expected: usize,
    },
    #[error("negative entry {value} at ({row}, {col})")]
    NegativeEntry { row: usize, col: usize, value: f64 },
    #[error("non-finite entry at ({row}, {col})")]
    NonFinite { row: usize, col: usize },
    #[error("total probability {sum} deviates from 1 by more than {RENORMALIZE_TOLERANCE}")]
    BadSum { sum: f64 },
    #[error("label count mismatch: {axis} has {labels} labels for {symbols} symbols")]
    LabelCount {
        axis: &'static str,
        labels: usize,
        symbols: usize,
    },
    #[error("probability vector: {0}")]
    BadVector(String),
    #[error("probability {0} outside [0, 1]")]
    BadProbability(f64),
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error("json: {0}")]
    Json(#[from] serde_json::Error),
    #[error("io: {0}")]
    Io(#[from] std::io::Error),
}

/// Nonnegative weights summing to one.
#[derive(Debug, Clone, PartialEq)]
pub struct ProbVector(Vec<f64>);

impl ProbVector {
    pub fn new(entries: Vec<f64>) -> Result<Self, DistError> {
        if entries.is_empty() {
            return Err(DistError::BadVector("empty".into()));
        }
        if let Some(p) = entries.iter().find(|p| !p.is_finite() || **p < 0.0) {
            return Err(DistError::BadVector(format!("invalid entry {p}")));
        }
        let sum: f64 = entries.iter().sum();
        if (sum - 1.0).abs() > SUM_TOLERANCE {
            return Err(DistError::BadVector(format!("sum {sum} is not 1")));
        }
        Ok(Self(entries))
    }

    pub fn entries(&self) -> &[f64] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

impl std::ops::Index<usize> for ProbVector {
    type Output = f64;
    fn index(&self, i: usize) -> &f64 {
        &self.0[i]
    }
}

/// Which conditional entropy to evaluate.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Conditioning {
    /// H(X|Y)
    XGivenY,
    /// H(Y|X)
    YGivenX,
}

/// Input format for [`load_distribution`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    MatrixJson,
    Csv,
}

impl Format {
    /// `.csv` files are CSV, everything else is matrix-json.
    pub fn from_path(path: &Path) -> Self {
        match path.extension().and_then(|e| e.to_str()) {
            Some(ext) if ext.eq_ignore_ascii_case("csv") => Format::Csv,
            _ => Format::MatrixJson,
        }
    }
}

#[derive(Debug, Serialize, Deserialize)]
struct MatrixFile {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    x_labels: Option<Vec<String>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    y_labels: Option<Vec<String>>,
    p: Vec<Vec<f64>>,
}

/// A validated joint probability matrix P with `n_x` rows and `n_y` columns.
///
/// No row or column sums to zero; such symbols are removed at construction
/// and their original indices kept in [`JointDistribution::stripped_x`] /
/// [`JointDistribution::stripped_y`].
#[derive(Debug, Clone, PartialEq)]
pub struct JointDistribution {
    n_x: usize,
    n_y: usize,
    p: Vec<f64>,
    x_labels: Vec<String>,
    y_labels: Vec<String>,
    stripped_x: Vec<usize>,
    stripped_y: Vec<usize>,
}

impl JointDistribution {
    /// Builds a distribution from rows, with default 1-based labels.
    pub fn from_rows(rows: Vec<Vec<f64>>) -> Result<Self, DistError> {
        Self::with_labels(rows, None, None)
    }

    pub fn with_labels(
        rows: Vec<Vec<f64>>,
        x_labels: Option<Vec<String>>,
        y_labels: Option<Vec<String>>,
    ) -> Result<Self, DistError> {
        let n_x = rows.len();
        let n_y = rows.first().map_or(0, Vec::len);
        if n_x == 0 || n_y == 0 {
            return Err(DistError::Empty);
        }
        let mut p = Vec::with_capacity(n_x * n_y);
        for (i, row) in rows.iter().enumerate() {
            if row.len() != n_y {
                return Err(DistError::Ragged {
                    row: i,
                    found: row.len(),
                    expected: n_y,
                });
            }
            for (j, &v) in row.iter().enumerate() {
                if !v.is_finite() {
                    return Err(DistError::NonFinite { row: i, col: j });
                }
                if v < 0.0 {
                    return Err(DistError::NegativeEntry {
                        row: i,
                        col: j,
                        value: v,
                    });
                }
            }
            p.extend_from_slice(row);
        }
        let x_labels = x_labels.unwrap_or_else(|| default_labels(n_x));
        let y_labels = y_labels.unwrap_or_else(|| default_labels(n_y));
        if x_labels.len() != n_x {
            return Err(DistError::LabelCount {
                axis: "x",
                labels: x_labels.len(),
                symbols: n_x,
            });
        }
        if y_labels.len() != n_y {
            return Err(DistError::LabelCount {
                axis: "y",
                labels: y_labels.len(),
                symbols: n_y,
            });
        }

        let sum: f64 = p.iter().sum();
        if (sum - 1.0).abs() > RENORMALIZE_TOLERANCE {
            return Err(DistError::BadSum { sum });
        }
        // Already-valid input is kept untouched so that save/load is bit-exact.
        if (sum - 1.0).abs() > SUM_TOLERANCE {
            p.iter_mut().for_each(|v| *v /= sum);
        }

        let row_sum = |i: usize| p[i * n_y..(i + 1) * n_y].iter().sum::<f64>();
        let col_sum = |j: usize| (0..n_x).map(|i| p[i * n_y + j]).sum::<f64>();
        let keep_x: Vec<usize> = (0..n_x).filter(|&i| row_sum(i) > 0.0).collect();
        let keep_y: Vec<usize> = (0..n_y).filter(|&j| col_sum(j) > 0.0).collect();
        let stripped_x: Vec<usize> = (0..n_x).filter(|i| !keep_x.contains(i)).collect();
        let stripped_y: Vec<usize> = (0..n_y).filter(|j| !keep_y.contains(j)).collect();

        let mut kept = Vec::with_capacity(keep_x.len() * keep_y.len());
        for &i in &keep_x {
            for &j in &keep_y {
                kept.push(p[i * n_y + j]);
            }
        }
        Ok(Self {
            n_x: keep_x.len(),
            n_y: keep_y.len(),
            p: kept,
            x_labels: keep_x.iter().map(|&i| x_labels[i].clone()).collect(),
            y_labels: keep_y.iter().map(|&j| y_labels[j].clone()).collect(),
            stripped_x,
            stripped_y,
        })
    }

    pub fn n_x(&self) -> usize {
        self.n_x
    }

    pub fn n_y(&self) -> usize {
        self.n_y
    }

    /// P(i, j).
    #[inline]
    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.p[i * self.n_y + j]
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.p[i * self.n_y..(i + 1) * self.n_y]
    }

    /// Row-major flattened matrix.
    pub fn as_slice(&self) -> &[f64] {
        &self.p
    }

    pub fn rows(&self) -> Vec<Vec<f64>> {
        self.p.chunks(self.n_y).map(<[f64]>::to_vec).collect()
    }

    pub fn x_labels(&self) -> &[String] {
        &self.x_labels
    }

    pub fn y_labels(&self) -> &[String] {
        &self.y_labels
    }

    /// Original indices of x-symbols removed for having zero marginal.
    pub fn stripped_x(&self) -> &[usize] {
        &self.stripped_x
    }

    pub fn stripped_y(&self) -> &[usize] {
        &self.stripped_y
    }

    pub fn row_sums(&self) -> Vec<f64> {
        self.p.chunks(self.n_y).map(|r| r.iter().sum()).collect()
    }

    pub fn col_sums(&self) -> Vec<f64> {
        let mut out = vec![0.0; self.n_y];
        for row in self.p.chunks(self.n_y) {
            for (o, v) in out.iter_mut().zip(row) {
                *o += v;
            }
        }
        out
    }

    /// The transposed distribution, i.e. the roles of X and Y swapped.
    pub fn transpose(&self) -> Self {
        let mut p = Vec::with_capacity(self.p.len());
        for j in 0..self.n_y {
            for i in 0..self.n_x {
                p.push(self.get(i, j));
            }
        }
        Self {
            n_x: self.n_y,
            n_y: self.n_x,
            p,
            x_labels: self.y_labels.clone(),
            y_labels: self.x_labels.clone(),
            stripped_x: self.stripped_y.clone(),
            stripped_y: self.stripped_x.clone(),
        }
    }

    /// Restriction of P to the given rows and columns, renormalized.
    ///
    /// Rows or columns of the restriction that carry no mass are stripped as
    /// usual; the returned index maps give, for each kept row/column of the
    /// result, its index in `self`. Returns `None` when the block has no mass.
    pub fn restrict(&self, rows: &[usize], cols: &[usize]) -> Option<Restriction> {
        let mass: f64 = rows
            .iter()
            .flat_map(|&i| cols.iter().map(move |&j| (i, j)))
            .map(|(i, j)| self.get(i, j))
            .sum();
        if mass <= 0.0 {
            return None;
        }
        let keep_rows: Vec<usize> = rows
            .iter()
            .copied()
            .filter(|&i| cols.iter().any(|&j| self.get(i, j) > 0.0))
            .collect();
        let keep_cols: Vec<usize> = cols
            .iter()
            .copied()
            .filter(|&j| rows.iter().any(|&i| self.get(i, j) > 0.0))
            .collect();
        let mut p = Vec::with_capacity(keep_rows.len() * keep_cols.len());
        for &i in &keep_rows {
            for &j in &keep_cols {
                p.push(self.get(i, j) / mass);
            }
        }
        let dist = Self {
            n_x: keep_rows.len(),
            n_y: keep_cols.len(),
            p,
            x_labels: keep_rows.iter().map(|&i| self.x_labels[i].clone()).collect(),
            y_labels: keep_cols.iter().map(|&j| self.y_labels[j].clone()).collect(),
            stripped_x: Vec::new(),
            stripped_y: Vec::new(),
        };
        Some(Restriction {
            dist,
            rows: keep_rows,
            cols: keep_cols,
            mass,
        })
    }

    /// Serializes as matrix-json. Loading the output yields an identical value.
    pub fn to_json(&self) -> String {
        let file = MatrixFile {
            x_labels: Some(self.x_labels.clone()),
            y_labels: Some(self.y_labels.clone()),
            p: self.rows(),
        };
        serde_json::to_string_pretty(&file).expect("matrix serializes")
    }
}

/// A renormalized sub-block of a larger distribution.
#[derive(Debug, Clone)]
pub struct Restriction {
    pub dist: JointDistribution,
    /// Parent row index of each row of `dist`.
    pub rows: Vec<usize>,
    /// Parent column index of each column of `dist`.
    pub cols: Vec<usize>,
    /// Mass of the block in the parent distribution.
    pub mass: f64,
}

impl fmt::Display for JointDistribution {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for row in self.p.chunks(self.n_y) {
            let cells: Vec<String> = row.iter().map(|v| format!("{v:.6}")).collect();
            writeln!(f, "{}", cells.join(" "))?;
        }
        Ok(())
    }
}

fn default_labels(n: usize) -> Vec<String> {
    (1..=n).map(|i| i.to_string()).collect()
}

/// Parses a distribution from text in the given format.
pub fn parse_distribution(text: &str, format: Format) -> Result<JointDistribution, DistError> {
    match format {
        Format::MatrixJson => {
            let file: MatrixFile = serde_json::from_str(text)?;
            JointDistribution::with_labels(file.p, file.x_labels, file.y_labels)
        }
        Format::Csv => {
            let mut reader = csv::ReaderBuilder::new()
                .has_headers(false)
                .trim(csv::Trim::All)
                .comment(Some(b'#'))
                .from_reader(text.as_bytes());
            let mut rows = Vec::new();
            for record in reader.records() {
                let record = record.map_err(|e| DistError::Parse {
                    line: e.position().map_or(0, |p| p.line() as usize),
                    msg: e.to_string(),
                })?;
                let line = record.position().map_or(0, |p| p.line() as usize);
                if record.iter().all(str::is_empty) {
                    continue;
                }
                let row = record
                    .iter()
                    .map(|cell| {
                        cell.parse::<f64>().map_err(|e| DistError::Parse {
                            line,
                            msg: format!("{cell:?}: {e}"),
                        })
                    })
                    .collect::<Result<Vec<_>, _>>()?;
                rows.push(row);
            }
            JointDistribution::from_rows(rows)
        }
    }
}

/// Loads a distribution from a file; the format follows the extension.
pub fn load_distribution(path: impl AsRef<Path>) -> Result<JointDistribution, DistError> {
    let path = path.as_ref();
    let text = std::fs::read_to_string(path)?;
    parse_distribution(&text, Format::from_path(path))
}

/// Row and column marginals (p_X, p_Y).
pub fn marginals(joint: &JointDistribution) -> (ProbVector, ProbVector) {
    (
        ProbVector(joint.row_sums()),
        ProbVector(joint.col_sums()),
    )
}

/// Shannon entropy in bits of arbitrary nonnegative weights (0 log 0 = 0).
pub fn entropy_of(weights: &[f64]) -> f64 {
    weights
        .iter()
        .filter(|&&p| p > 0.0)
        .map(|&p| -p * p.log2())
        .sum::<f64>()
        .max(0.0)
}

pub fn entropy(p: &ProbVector) -> f64 {
    entropy_of(&p.0)
}

/// h(p) = -p log p - (1-p) log(1-p).
pub fn binary_entropy(p: f64) -> Result<f64, DistError> {
    if !(0.0..=1.0).contains(&p) {
        return Err(DistError::BadProbability(p));
    }
    Ok(binary_entropy_unchecked(p))
}

/// [`binary_entropy`] for callers that already know `p` is a probability.
/// Values a few ulps outside [0, 1] are clamped.
pub fn binary_entropy_unchecked(p: f64) -> f64 {
    let p = p.clamp(0.0, 1.0);
    entropy_of(&[p, 1.0 - p])
}

/// Entropy of the flattened joint, H(X, Y).
pub fn joint_entropy(joint: &JointDistribution) -> f64 {
    entropy_of(joint.as_slice())
}

/// H(X|Y) or H(Y|X), evaluated directly as sum p(x,y) log(p(cond)/p(x,y)).
pub fn conditional_entropy(joint: &JointDistribution, side: Conditioning) -> f64 {
    let rows = joint.row_sums();
    let cols = joint.col_sums();
    let mut h = 0.0;
    for i in 0..joint.n_x() {
        for j in 0..joint.n_y() {
            let p = joint.get(i, j);
            if p > 0.0 {
                let given = match side {
                    Conditioning::XGivenY => cols[j],
                    Conditioning::YGivenX => rows[i],
                };
                h += p * (given / p).log2();
            }
        }
    }
    h.max(0.0)
}

/// Conditional entropy H(A|B) of a dense joint table `table[a][b]`.
pub fn conditional_entropy_table(table: &[Vec<f64>]) -> f64 {
    let n_b = table.first().map_or(0, Vec::len);
    let mut cols = vec![0.0; n_b];
    for row in table {
        for (c, v) in cols.iter_mut().zip(row) {
            *c += v;
        }
    }
    let mut h = 0.0;
    for row in table {
        for (v, c) in row.iter().zip(&cols) {
            if *v > 0.0 {
                h += v * (c / v).log2();
            }
        }
    }
    h.max(0.0)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::examples;

    #[test]
    fn block_example_loads() {
        let j = examples::block();
        assert_eq!((j.n_x(), j.n_y()), (4, 4));
        let (px, py) = marginals(&j);
        for k in 0..4 {
            assert!((px[k] - 0.25).abs() < 1e-15);
            assert!((py[k] - 0.25).abs() < 1e-15);
        }
    }

    #[test]
    fn point_mass_is_valid() {
        let j = JointDistribution::from_rows(vec![vec![1.0]]).unwrap();
        let (px, py) = marginals(&j);
        assert_eq!(px.entries(), &[1.0]);
        assert_eq!(py.entries(), &[1.0]);
        assert_eq!(entropy(&px), 0.0);
    }

    #[test]
    fn rejects_negative_entry() {
        let err = JointDistribution::from_rows(vec![vec![0.6, -0.1], vec![0.25, 0.25]]).unwrap_err();
        assert!(err.to_string().contains("negative entry"), "{err}");
    }

    #[test]
    fn rejects_bad_sum_and_empty() {
        assert!(matches!(
            JointDistribution::from_rows(vec![vec![0.5, 0.4]]),
            Err(DistError::BadSum { .. })
        ));
        assert!(matches!(JointDistribution::from_rows(vec![]), Err(DistError::Empty)));
        assert!(matches!(
            JointDistribution::from_rows(vec![vec![]]),
            Err(DistError::Empty)
        ));
    }

    #[test]
    fn renormalizes_small_deviation() {
        let j = JointDistribution::from_rows(vec![vec![0.5 + 4e-7, 0.5]]).unwrap();
        let total: f64 = j.as_slice().iter().sum();
        assert!((total - 1.0).abs() < 1e-12);
    }

    #[test]
    fn strips_zero_marginals() {
        let j = JointDistribution::from_rows(vec![
            vec![0.5, 0.0, 0.0],
            vec![0.0, 0.0, 0.0],
            vec![0.0, 0.0, 0.5],
        ])
        .unwrap();
        assert_eq!((j.n_x(), j.n_y()), (2, 2));
        assert_eq!(j.stripped_x(), &[1]);
        assert_eq!(j.stripped_y(), &[1]);
        assert_eq!(j.x_labels(), &["1".to_string(), "3".to_string()]);
    }

    #[test]
    fn epsilon_example_marginals() {
        let j = examples::epsilon(0.2);
        let (px, py) = marginals(&j);
        let want = [0.4, 0.2, 0.4];
        for k in 0..3 {
            assert!((px[k] - want[k]).abs() < 1e-12);
        }
        assert!((py[0] - 0.5).abs() < 1e-12);
        assert!((entropy(&px) - 1.521928).abs() < 1e-6);
    }

    #[test]
    fn entropy_values() {
        assert_eq!(entropy(&ProbVector::new(vec![0.5, 0.5]).unwrap()), 1.0);
        assert_eq!(entropy(&ProbVector::new(vec![1.0]).unwrap()), 0.0);
        assert_eq!(binary_entropy(0.5).unwrap(), 1.0);
        assert_eq!(binary_entropy(0.0).unwrap(), 0.0);
        assert_eq!(binary_entropy(1.0).unwrap(), 0.0);
        assert!((binary_entropy(0.0125).unwrap() - 0.096946).abs() < 1e-5);
        assert!(binary_entropy(1.5).is_err());
        assert!(binary_entropy(-0.1).is_err());
    }

    #[test]
    fn conditional_entropy_cases() {
        let indep = examples::independent_uniform();
        assert!((conditional_entropy(&indep, Conditioning::XGivenY) - 1.0).abs() < 1e-12);
        let diag = examples::identity_coupling();
        assert_eq!(conditional_entropy(&diag, Conditioning::XGivenY), 0.0);
        let block = examples::block();
        assert!((conditional_entropy(&block, Conditioning::XGivenY) - 1.0).abs() < 1e-12);
        assert!((conditional_entropy(&block, Conditioning::YGivenX) - 1.0).abs() < 1e-12);
    }

    #[test]
    fn csv_parsing_and_diagnostics() {
        let j = parse_distribution("0.25, 0.25\n0.25,0.25\n", Format::Csv).unwrap();
        assert_eq!(j.x_labels(), &["1".to_string(), "2".to_string()]);
        let err = parse_distribution("0.5,0.25\n0.25,abc\n", Format::Csv).unwrap_err();
        assert!(matches!(err, DistError::Parse { line: 2, .. }), "{err}");
    }

    #[test]
    fn json_round_trip_is_bit_exact() {
        let j = JointDistribution::from_rows(vec![
            vec![0.1 + 3e-7, 0.2, 0.0],
            vec![0.3, 0.0, 0.4],
        ])
        .unwrap();
        let again = parse_distribution(&j.to_json(), Format::MatrixJson).unwrap();
        assert_eq!(j, again);
    }

    #[test]
    fn restriction_renormalizes() {
        let j = examples::delta(0.1);
        let r = j.restrict(&[0, 1], &[0, 1]).unwrap();
        assert_eq!(r.dist.n_x(), 2);
        let total: f64 = r.dist.as_slice().iter().sum();
        assert!((total - 1.0).abs() < 1e-12);
        assert!((r.mass - (4.0 - 0.1) / 8.0).abs() < 1e-12);
        assert!(j.restrict(&[0], &[2, 3]).is_none());
    }
}

#[cfg(test)]
mod proptests {
    use super::*;
    use proptest::prelude::*;

    fn arb_joint() -> impl Strategy<Value = JointDistribution> {
        (1usize..6, 1usize..6).prop_flat_map(|(r, c)| {
            prop::collection::vec(prop_oneof![Just(0.0), 0.01f64..1.0], r * c).prop_filter_map(
                "nonzero",
                move |cells| {
                    let total: f64 = cells.iter().sum();
                    if total <= 0.0 {
                        return None;
                    }
                    let rows = cells
                        .chunks(c)
                        .map(|row| row.iter().map(|v| v / total).collect())
                        .collect();
                    JointDistribution::from_rows(rows).ok()
                },
            )
        })
    }

    proptest! {
        #[test]
        fn entropy_chain_rule(j in arb_joint()) {
            let (px, _) = marginals(&j);
            let lhs = entropy(&px) + conditional_entropy(&j, Conditioning::YGivenX);
            prop_assert!((lhs - joint_entropy(&j)).abs() < 1e-9);
        }

        #[test]
        fn entropy_bounded_by_log_size(j in arb_joint()) {
            let (px, _) = marginals(&j);
            let h = entropy(&px);
            let bound = (px.len() as f64).log2();
            prop_assert!(h <= bound + 1e-9);
            let far_from_uniform = px.entries().iter().any(|p| (p - 1.0 / px.len() as f64).abs() > 1e-3);
            if far_from_uniform {
                prop_assert!(h < bound - 1e-9);
            }
        }

        #[test]
        fn save_load_round_trip(j in arb_joint()) {
            let again = parse_distribution(&j.to_json(), Format::MatrixJson).unwrap();
            prop_assert_eq!(j.as_slice(), again.as_slice());
            prop_assert_eq!(j.x_labels(), again.x_labels());
            let text = j.to_json();
            let again2 = parse_distribution(&again.to_json(), Format::MatrixJson).unwrap();
            prop_assert_eq!(text, again2.to_json());
        }
    }
}
