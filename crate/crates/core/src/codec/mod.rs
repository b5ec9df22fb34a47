//! Zero-error block coding of (X, Y) through a labeling pair.
//!
//! Every scheme samples nothing itself: it takes a [`SampleBlock`], splits it
//! into streams, codes each stream with a static arithmetic coder whose
//! model is derived from the true P, serializes the bundle, parses it back,
//! decodes and checks bit-exact recovery.
//!
//! Streams reaching the terminal:
//!
//! | scheme          | streams                                                   |
//! |-----------------|-----------------------------------------------------------|
//! | gk              | k, y-residual, x-residual                                 |
//! | binary-helper   | y-label, y-residual, helper (e^n), x-residual (X-side)    |
//! |                 | x-label, x-residual, helper (e^n), y-residual (Y-side)    |
//! | general-helper  | y-label, y-residual, helper (phi_X given phi_Y), x-residual |
//! | limited-helper  | as binary X-side; more than two labels add helper-labels  |
//!
//! The limited-helper bundle also carries the helper inputs x-cut and y-cut.

pub mod arith;
pub mod bundle;
pub mod sample;

use rayon::prelude::*;
use thiserror::Error;

pub use arith::{decode_sequence, encode_sequence, BitString, ConditionalModel, FrequencyTable};
pub use bundle::{Corner, EncodedBundle, Scheme, Stream};
pub use sample::{sample, SampleBlock};

use crate::components::gk_labelings;
use crate::dist::{binary_entropy_unchecked, conditional_entropy_table, entropy_of, JointDistribution};
use crate::objectives::{
    collapsed_marginal, cut_sets, disagreement_probability, helper_rate_general, label_joint, label_marginal_x,
    label_marginal_y, residual_entropy_x, residual_entropy_y, LabelError, LabelingPair,
};

#[derive(Debug, Error)]
pub enum CodecError {
    #[error("symbol {symbol} at position {index} has probability zero in context {context}")]
    OutOfModel { index: usize, symbol: usize, context: usize },
    #[error("context {context} at position {index} has probability zero")]
    ImpossibleContext { index: usize, context: usize },
    #[error("decoded pair at position {0} lies outside the support")]
    OutOfSupport(usize),
    #[error("decoded block differs from the original at position {0}")]
    Mismatch(usize),
    #[error("helper error sequence from the cut streams differs from the omniscient one at position {0}")]
    HelperMismatch(usize),
    #[error("missing stream {0:?}")]
    MissingStream(String),
    #[error("bundle: {0}")]
    BadBundle(String),
    #[error("the {0} scheme needs a binary labeling")]
    NotBinary(&'static str),
    #[error("bundle holds a {found} scheme, expected {expected}")]
    WrongScheme { found: &'static str, expected: &'static str },
    #[error(transparent)]
    Labels(#[from] LabelError),
}

/// Empirical and target rate of one stream.
#[derive(Debug, Clone, PartialEq)]
pub struct StreamRate {
    pub name: String,
    pub bits: u64,
    /// bits / n.
    pub rate: f64,
    /// Entropy the stream is coded at, in bits per symbol.
    pub target: f64,
    /// Sent to the helper rather than to the terminal.
    pub helper_input: bool,
}

impl StreamRate {
    /// |rate - target| <= rel * target + abs.
    pub fn within(&self, rel: f64, abs: f64) -> bool {
        (self.rate - self.target).abs() <= rel * self.target + abs
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RateReport {
    pub scheme: Scheme,
    pub n: usize,
    pub streams: Vec<StreamRate>,
    /// Sum of the terminal stream rates.
    pub sum_rate: f64,
    /// Sum of the terminal stream targets.
    pub sum_target: f64,
}

impl RateReport {
    pub fn stream(&self, name: &str) -> Option<&StreamRate> {
        self.streams.iter().find(|s| s.name == name)
    }

    pub fn all_within(&self, rel: f64, abs: f64) -> bool {
        self.streams.iter().all(|s| s.within(rel, abs))
    }
}

#[derive(Debug, Clone)]
pub struct SchemeRun {
    pub bundle: EncodedBundle,
    pub decoded: SampleBlock,
    pub report: RateReport,
}

/// Static models of every stream a scheme may emit, for one labeling pair.
struct Models {
    labels: LabelingPair,
    label_x: ConditionalModel,
    label_y: ConditionalModel,
    residual_x: ConditionalModel,
    residual_y: ConditionalModel,
    helper_general: ConditionalModel,
    error: ConditionalModel,
    helper_labels: ConditionalModel,
    s_x: Vec<usize>,
    s_y: Vec<usize>,
    cut_x: ConditionalModel,
    cut_y: ConditionalModel,
    targets: Targets,
}

struct Targets {
    label_x: f64,
    label_y: f64,
    residual_x: f64,
    residual_y: f64,
    helper_general: f64,
    error: f64,
    helper_labels: f64,
    cut_x: f64,
    cut_y: f64,
}

impl Models {
    fn new(joint: &JointDistribution, labels: &LabelingPair) -> Result<Self, CodecError> {
        labels.check_dims(joint)?;
        let l = labels.num_labels();
        let table = label_joint(joint, labels);
        let p_err = disagreement_probability(joint, labels);
        let off_diagonal: Vec<Vec<f64>> = (0..l)
            .map(|a| (0..l).map(|b| if a == b { 0.0 } else { table[a][b] }).collect())
            .collect();
        // Context is phi_Y, symbol is phi_X.
        let by_y = |t: &[Vec<f64>]| (0..l).map(|b| (0..l).map(|a| t[a][b]).collect()).collect::<Vec<Vec<f64>>>();
        let cuts = cut_sets(joint, labels);
        let in_x: Vec<bool> = (0..joint.n_x()).map(|i| cuts.s_x.contains(&i)).collect();
        let in_y: Vec<bool> = (0..joint.n_y()).map(|j| cuts.s_y.contains(&j)).collect();
        let cut_x = collapsed_marginal(&joint.row_sums(), &in_x);
        let cut_y = collapsed_marginal(&joint.col_sums(), &in_y);
        let label_x = label_marginal_x(joint, labels);
        let label_y = label_marginal_y(joint, labels);
        Ok(Self {
            label_x: ConditionalModel::unconditional(&label_x),
            label_y: ConditionalModel::unconditional(&label_y),
            residual_x: residual_model(&joint.row_sums(), labels.phi_x(), l),
            residual_y: residual_model(&joint.col_sums(), labels.phi_y(), l),
            helper_general: ConditionalModel::new(&by_y(&table)),
            error: ConditionalModel::unconditional(&[1.0 - p_err, p_err]),
            helper_labels: ConditionalModel::new(&by_y(&off_diagonal)),
            cut_x: ConditionalModel::unconditional(&cut_x),
            cut_y: ConditionalModel::unconditional(&cut_y),
            targets: Targets {
                label_x: entropy_of(&label_x),
                label_y: entropy_of(&label_y),
                residual_x: residual_entropy_x(joint, labels),
                residual_y: residual_entropy_y(joint, labels),
                helper_general: helper_rate_general(joint, labels),
                error: binary_entropy_unchecked(p_err),
                helper_labels: conditional_entropy_table(&off_diagonal),
                cut_x: cuts.h_x_cut,
                cut_y: cuts.h_y_cut,
            },
            s_x: cuts.s_x,
            s_y: cuts.s_y,
            labels: labels.clone(),
        })
    }

    fn phi_x(&self, x: &[usize]) -> Vec<usize> {
        x.iter().map(|&i| self.labels.phi_x()[i]).collect()
    }

    fn phi_y(&self, y: &[usize]) -> Vec<usize> {
        y.iter().map(|&j| self.labels.phi_y()[j]).collect()
    }

}

/// Index of each symbol inside its cut set, or the set size for "outside".
/// This is the alphabet of X_cut (or Y_cut) used by [`collapsed_marginal`].
pub fn cut_symbols(set: &[usize], seq: &[usize]) -> Vec<usize> {
    seq.iter().map(|s| set.iter().position(|m| m == s).unwrap_or(set.len())).collect()
}

/// e_i = 1{phi_X(x_i) != phi_Y(y_i)}, as computed by a helper that sees
/// both sources.
pub fn omniscient_error(labels: &LabelingPair, block: &SampleBlock) -> Vec<usize> {
    block
        .x_seq
        .iter()
        .zip(&block.y_seq)
        .map(|(&x, &y)| usize::from(labels.phi_x()[x] != labels.phi_y()[y]))
        .collect()
}

fn residual_model(marginal: &[f64], phi: &[usize], num_labels: usize) -> ConditionalModel {
    let rows: Vec<Vec<f64>> = (0..num_labels)
        .map(|c| marginal.iter().zip(phi).map(|(&p, &l)| if l == c { p } else { 0.0 }).collect())
        .collect();
    ConditionalModel::new(&rows)
}

struct Job<'a> {
    name: &'static str,
    symbols: Vec<usize>,
    contexts: Vec<usize>,
    model: &'a ConditionalModel,
    target: f64,
    helper_input: bool,
}

impl<'a> Job<'a> {
    fn new(name: &'static str, symbols: Vec<usize>, contexts: Vec<usize>, model: &'a ConditionalModel, target: f64) -> Self {
        Self {
            name,
            symbols,
            contexts,
            model,
            target,
            helper_input: false,
        }
    }

    fn unconditional(name: &'static str, symbols: Vec<usize>, model: &'a ConditionalModel, target: f64) -> Self {
        let contexts = vec![0; symbols.len()];
        Self::new(name, symbols, contexts, model, target)
    }
}

/// Encodes all jobs (in parallel) into a bundle plus a rate report.
fn assemble(
    scheme: Scheme,
    corner: Corner,
    block: &SampleBlock,
    jobs: Vec<Job<'_>>,
) -> Result<(EncodedBundle, RateReport), CodecError> {
    let coded: Vec<BitString> = jobs
        .par_iter()
        .map(|j| encode_sequence(&j.symbols, &j.contexts, j.model))
        .collect::<Result<_, _>>()?;
    let n = block.n;
    let streams: Vec<StreamRate> = jobs
        .iter()
        .zip(&coded)
        .map(|(j, bits)| StreamRate {
            name: j.name.to_owned(),
            bits: bits.len(),
            rate: bits.len() as f64 / n as f64,
            target: j.target,
            helper_input: j.helper_input,
        })
        .collect();
    let terminal = streams.iter().filter(|s| !s.helper_input);
    let report = RateReport {
        scheme,
        n,
        sum_rate: terminal.clone().map(|s| s.rate).sum(),
        sum_target: terminal.map(|s| s.target).sum(),
        streams,
    };
    let bundle = EncodedBundle {
        scheme,
        corner,
        n: n as u64,
        seed: block.seed,
        streams: jobs
            .iter()
            .zip(coded)
            .map(|(j, bits)| Stream {
                name: j.name.to_owned(),
                bits,
            })
            .collect(),
    };
    Ok((bundle, report))
}

/// Helper-side error sequence computed from the cut streams only: a pair can
/// disagree only when both symbols lie in their cut sets.
pub fn helper_error_from_cuts(
    labels: &LabelingPair,
    s_x: &[usize],
    s_y: &[usize],
    x_cut: &[usize],
    y_cut: &[usize],
) -> Vec<usize> {
    x_cut
        .iter()
        .zip(y_cut)
        .map(|(&a, &b)| match (s_x.get(a), s_y.get(b)) {
            (Some(&x), Some(&y)) => usize::from(labels.phi_x()[x] != labels.phi_y()[y]),
            _ => 0,
        })
        .collect()
}

fn xor(a: &[usize], e: &[usize]) -> Vec<usize> {
    a.iter().zip(e).map(|(&l, &f)| l ^ f).collect()
}

fn encode(
    joint: &JointDistribution,
    models: &Models,
    scheme: Scheme,
    corner: Corner,
    block: &SampleBlock,
) -> Result<(EncodedBundle, RateReport), CodecError> {
    if let Some(i) = block.first_outside_support(joint) {
        return Err(CodecError::OutOfSupport(i));
    }
    let t = &models.targets;
    let (x, y) = (&block.x_seq, &block.y_seq);
    let ax = models.phi_x(x);
    let by = models.phi_y(y);
    let e = omniscient_error(&models.labels, block);

    let y_in_full = || {
        [
            Job::unconditional("y-label", by.clone(), &models.label_y, t.label_y),
            Job::new("y-residual", y.clone(), by.clone(), &models.residual_y, t.residual_y),
        ]
    };
    let mut jobs = Vec::new();
    match (scheme, corner) {
        (Scheme::Gk, _) => {
            jobs.push(Job::unconditional("k", by.clone(), &models.label_y, t.label_y));
            jobs.push(Job::new("y-residual", y.clone(), by.clone(), &models.residual_y, t.residual_y));
            jobs.push(Job::new("x-residual", x.clone(), ax.clone(), &models.residual_x, t.residual_x));
        }
        (Scheme::BinaryHelper, Corner::XSide) => {
            jobs.extend(y_in_full());
            jobs.push(Job::unconditional("helper", e, &models.error, t.error));
            jobs.push(Job::new("x-residual", x.clone(), ax.clone(), &models.residual_x, t.residual_x));
        }
        (Scheme::BinaryHelper, Corner::YSide) => {
            jobs.push(Job::unconditional("x-label", ax.clone(), &models.label_x, t.label_x));
            jobs.push(Job::new("x-residual", x.clone(), ax.clone(), &models.residual_x, t.residual_x));
            jobs.push(Job::unconditional("helper", e, &models.error, t.error));
            jobs.push(Job::new("y-residual", y.clone(), by.clone(), &models.residual_y, t.residual_y));
        }
        (Scheme::GeneralHelper, _) => {
            jobs.extend(y_in_full());
            jobs.push(Job::new("helper", ax.clone(), by.clone(), &models.helper_general, t.helper_general));
            jobs.push(Job::new("x-residual", x.clone(), ax.clone(), &models.residual_x, t.residual_x));
        }
        (Scheme::LimitedHelper, _) => {
            let x_cut = cut_symbols(&models.s_x, x);
            let y_cut = cut_symbols(&models.s_y, y);
            let helper_e = helper_error_from_cuts(&models.labels, &models.s_x, &models.s_y, &x_cut, &y_cut);
            if let Some(i) = helper_e.iter().zip(&e).position(|(a, b)| a != b) {
                return Err(CodecError::HelperMismatch(i));
            }
            let mut cut_jobs = [
                Job::unconditional("x-cut", x_cut.clone(), &models.cut_x, t.cut_x),
                Job::unconditional("y-cut", y_cut, &models.cut_y, t.cut_y),
            ];
            for j in &mut cut_jobs {
                j.helper_input = true;
            }
            jobs.extend(cut_jobs);
            jobs.extend(y_in_full());
            if models.labels.num_labels() > 2 {
                // The helper learns phi_X(x) from x-cut wherever e = 1.
                let picked: Vec<usize> = (0..block.n).filter(|&i| helper_e[i] == 1).collect();
                let labels: Vec<usize> = picked.iter().map(|&i| models.labels.phi_x()[models.s_x[x_cut[i]]]).collect();
                let ctx: Vec<usize> = picked.iter().map(|&i| by[i]).collect();
                jobs.push(Job::unconditional("helper", helper_e, &models.error, t.error));
                jobs.push(Job::new("helper-labels", labels, ctx, &models.helper_labels, t.helper_labels));
            } else {
                jobs.push(Job::unconditional("helper", helper_e, &models.error, t.error));
            }
            jobs.push(Job::new("x-residual", x.clone(), ax.clone(), &models.residual_x, t.residual_x));
        }
    }
    assemble(scheme, corner, block, jobs)
}

fn stream<'a>(bundle: &'a EncodedBundle, name: &str) -> Result<&'a BitString, CodecError> {
    bundle.stream(name).ok_or_else(|| CodecError::MissingStream(name.to_owned()))
}

fn decode(joint: &JointDistribution, models: &Models, bundle: &EncodedBundle) -> Result<SampleBlock, CodecError> {
    let n = usize::try_from(bundle.n).map_err(|_| CodecError::BadBundle("block length too large".into()))?;
    let zeros = vec![0usize; n];
    let decode_y = |label_stream: &str| -> Result<(Vec<usize>, Vec<usize>), CodecError> {
        let by = decode_sequence(stream(bundle, label_stream)?, &zeros, &models.label_y)?;
        let y = decode_sequence(stream(bundle, "y-residual")?, &by, &models.residual_y)?;
        Ok((by, y))
    };
    let decode_x = |ax: &[usize]| decode_sequence(stream(bundle, "x-residual")?, ax, &models.residual_x);
    let (x, y) = match (bundle.scheme, bundle.corner) {
        (Scheme::Gk, _) => {
            let (by, y) = decode_y("k")?;
            (decode_x(&by)?, y)
        }
        (Scheme::BinaryHelper, Corner::XSide) => {
            let (by, y) = decode_y("y-label")?;
            let e = decode_sequence(stream(bundle, "helper")?, &zeros, &models.error)?;
            (decode_x(&xor(&by, &e))?, y)
        }
        (Scheme::BinaryHelper, Corner::YSide) => {
            let ax = decode_sequence(stream(bundle, "x-label")?, &zeros, &models.label_x)?;
            let x = decode_x(&ax)?;
            let e = decode_sequence(stream(bundle, "helper")?, &zeros, &models.error)?;
            let y = decode_sequence(stream(bundle, "y-residual")?, &xor(&ax, &e), &models.residual_y)?;
            (x, y)
        }
        (Scheme::GeneralHelper, _) => {
            let (by, y) = decode_y("y-label")?;
            let ax = decode_sequence(stream(bundle, "helper")?, &by, &models.helper_general)?;
            (decode_x(&ax)?, y)
        }
        (Scheme::LimitedHelper, _) => {
            let (by, y) = decode_y("y-label")?;
            let e = decode_sequence(stream(bundle, "helper")?, &zeros, &models.error)?;
            let ax = if models.labels.num_labels() > 2 {
                let ctx: Vec<usize> = (0..n).filter(|&i| e[i] == 1).map(|i| by[i]).collect();
                let mut picked =
                    decode_sequence(stream(bundle, "helper-labels")?, &ctx, &models.helper_labels)?.into_iter();
                (0..n).map(|i| if e[i] == 1 { picked.next().expect("one per error") } else { by[i] }).collect()
            } else {
                xor(&by, &e)
            };
            (decode_x(&ax)?, y)
        }
    };
    let block = SampleBlock {
        n,
        seed: bundle.seed,
        x_seq: x,
        y_seq: y,
    };
    match block.first_outside_support(joint) {
        Some(i) => Err(CodecError::OutOfSupport(i)),
        None => Ok(block),
    }
}

fn scheme_labels(joint: &JointDistribution, scheme: Scheme, labels: Option<&LabelingPair>) -> Result<LabelingPair, CodecError> {
    match (scheme, labels) {
        (Scheme::Gk, _) => Ok(gk_labelings(joint)),
        (Scheme::BinaryHelper, Some(l)) if !l.is_binary() => Err(CodecError::NotBinary(scheme.name())),
        (_, Some(l)) => Ok(l.clone()),
        (_, None) => Err(CodecError::BadBundle(format!("the {} scheme needs a labeling", scheme.name()))),
    }
}

/// Decodes a bundle. `labels` is ignored for the gk scheme.
pub fn decode_bundle(
    joint: &JointDistribution,
    labels: Option<&LabelingPair>,
    bundle: &EncodedBundle,
) -> Result<SampleBlock, CodecError> {
    let labels = scheme_labels(joint, bundle.scheme, labels)?;
    decode(joint, &Models::new(joint, &labels)?, bundle)
}

/// Encodes, serializes, parses, decodes and compares with the original.
pub fn run_scheme(
    joint: &JointDistribution,
    labels: Option<&LabelingPair>,
    scheme: Scheme,
    corner: Corner,
    block: &SampleBlock,
) -> Result<SchemeRun, CodecError> {
    let labels = scheme_labels(joint, scheme, labels)?;
    let models = Models::new(joint, &labels)?;
    let (bundle, report) = encode(joint, &models, scheme, corner, block)?;
    let parsed = EncodedBundle::from_bytes(&bundle.to_bytes())?;
    let decoded = decode(joint, &models, &parsed)?;
    if let Some(i) = first_difference(block, &decoded) {
        return Err(CodecError::Mismatch(i));
    }
    Ok(SchemeRun {
        bundle: parsed,
        decoded,
        report,
    })
}

/// First position where two blocks differ, including a length difference.
pub fn first_difference(a: &SampleBlock, b: &SampleBlock) -> Option<usize> {
    let mut pairs = a.x_seq.iter().zip(&a.y_seq).zip(b.x_seq.iter().zip(&b.y_seq));
    pairs
        .position(|(p, q)| p != q)
        .or_else(|| (a.n != b.n || a.x_seq.len() != b.x_seq.len()).then_some(a.n.min(b.n)))
}

/// K, then X and Y each given K.
pub fn run_gk_scheme(joint: &JointDistribution, block: &SampleBlock) -> Result<SchemeRun, CodecError> {
    run_scheme(joint, None, Scheme::Gk, Corner::XSide, block)
}

/// One source in full, the other given its label, and the helper's
/// disagreement indicators e^n.
pub fn run_binary_helper_scheme(
    joint: &JointDistribution,
    labels: &LabelingPair,
    block: &SampleBlock,
    corner: Corner,
) -> Result<SchemeRun, CodecError> {
    run_scheme(joint, Some(labels), Scheme::BinaryHelper, corner, block)
}

/// Y in full, the helper codes phi_X given phi_Y, X given phi_X.
pub fn run_general_helper_scheme(
    joint: &JointDistribution,
    labels: &LabelingPair,
    block: &SampleBlock,
) -> Result<SchemeRun, CodecError> {
    run_scheme(joint, Some(labels), Scheme::GeneralHelper, Corner::XSide, block)
}

/// The helper sees only X_cut and Y_cut. The error sequence it derives is
/// checked against the omniscient one on every symbol.
pub fn run_limited_helper_scheme(
    joint: &JointDistribution,
    labels: &LabelingPair,
    block: &SampleBlock,
) -> Result<SchemeRun, CodecError> {
    run_scheme(joint, Some(labels), Scheme::LimitedHelper, Corner::XSide, block)
}
