//! Fixed-vocabulary AutoEncoder baseline.
//!
//! One model per window size reconstructs windows of one-hot message names
//! plus a per-message TMSI-reuse flag, trained on normal traffic only.
//! Anomalies surface as reconstruction error above a calibrated threshold.
//! Any message name outside the training vocabulary cannot be encoded at
//! all: encoding fails with a typed [`EncodingError`], which the experiment
//! driver treats as fatal for the whole run. That failure mode is the point
//! of the baseline, not an oversight.

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::path::Path;

use ndarray::{Array1, Array2, Axis};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::message::MessageView;
use crate::window::DetectionWindow;

/// Raised when a window contains a message name absent from the fixed
/// vocabulary. Carries the offending stream position and the name's
/// codepoints.
#[derive(Debug, Clone, PartialEq)]
pub struct EncodingError {
    pub seq: u64,
    pub name: String,
    pub codepoints: Vec<char>,
}

impl EncodingError {
    pub fn new(seq: u64, name: &str) -> EncodingError {
        EncodingError {
            seq,
            name: name.to_string(),
            codepoints: name.chars().collect(),
        }
    }
}

impl fmt::Display for EncodingError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "message seq {} cannot be encoded: name {:?} is outside the vocabulary",
            self.seq, self.name
        )?;
        let non_ascii: Vec<String> = self
            .codepoints
            .iter()
            .filter(|c| !c.is_ascii())
            .map(|c| format!("U+{:04X}", *c as u32))
            .collect();
        if !non_ascii.is_empty() {
            write!(f, " (unseen codepoints: {})", non_ascii.join(" "))?;
        }
        Ok(())
    }
}

impl std::error::Error for EncodingError {}

#[derive(Debug)]
pub enum AeError {
    Encoding(EncodingError),
    /// Training produced a non-finite loss.
    Diverged { epoch: usize, loss: f64 },
    BadConfig(String),
    Io(std::io::Error),
    /// Model file unreadable or of an unsupported version.
    Format(String),
}

impl fmt::Display for AeError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            AeError::Encoding(e) => write!(f, "{e}"),
            AeError::Diverged { epoch, loss } => {
                write!(f, "training diverged at epoch {epoch} (loss {loss})")
            }
            AeError::BadConfig(msg) => write!(f, "invalid AE config: {msg}"),
            AeError::Io(e) => write!(f, "model I/O: {e}"),
            AeError::Format(msg) => write!(f, "model file: {msg}"),
        }
    }
}

impl std::error::Error for AeError {}

impl From<EncodingError> for AeError {
    fn from(e: EncodingError) -> Self {
        AeError::Encoding(e)
    }
}

impl From<std::io::Error> for AeError {
    fn from(e: std::io::Error) -> Self {
        AeError::Io(e)
    }
}

/// Bijection between message names observed in training and dense indices.
/// There is deliberately no out-of-vocabulary bucket.
#[derive(Debug, Clone, PartialEq)]
pub struct Vocabulary {
    names: Vec<String>,
    index: BTreeMap<String, usize>,
}

impl Vocabulary {
    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.index.get(name).copied()
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    fn from_names(names: Vec<String>) -> Vocabulary {
        let index = names
            .iter()
            .enumerate()
            .map(|(i, n)| (n.clone(), i))
            .collect();
        Vocabulary { names, index }
    }
}

impl Serialize for Vocabulary {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        self.names.serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for Vocabulary {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        Ok(Vocabulary::from_names(Vec::<String>::deserialize(deserializer)?))
    }
}

/// Deterministic vocabulary over the distinct names in `training`,
/// lexicographically indexed.
pub fn build_vocabulary(training: &[MessageView]) -> Vocabulary {
    let mut names: Vec<String> = training.iter().map(|m| m.name.clone()).collect();
    names.sort_unstable();
    names.dedup();
    Vocabulary::from_names(names)
}

/// Stream-history tracker behind the TMSI-reuse feature: a message is
/// flagged when its TMSI was already seen earlier in the stream under a
/// different ue_id.
#[derive(Debug, Default)]
pub struct TmsiReuseTracker {
    seen: HashMap<u32, Vec<u64>>,
}

impl TmsiReuseTracker {
    pub fn new() -> TmsiReuseTracker {
        TmsiReuseTracker::default()
    }

    /// Flag for this message given everything observed so far, then records
    /// the message.
    pub fn observe(&mut self, view: &MessageView) -> bool {
        let ues = self.seen.entry(view.tmsi.0).or_default();
        let reused = ues.iter().any(|&ue| ue != view.ue_id);
        if !ues.contains(&view.ue_id) {
            ues.push(view.ue_id);
        }
        reused
    }
}

/// Per-seq reuse flags for a whole stream.
pub fn reuse_flags(stream: &[MessageView]) -> Vec<bool> {
    let mut tracker = TmsiReuseTracker::new();
    stream.iter().map(|v| tracker.observe(v)).collect()
}

/// Encodes a window as `w` blocks of `|V|` one-hot name coordinates plus one
/// TMSI-reuse flag each, oldest first; windows shorter than `w` are
/// left-padded with zero blocks. `flags` must hold one entry per included
/// message (context then latest).
pub fn encode_window(
    window: &DetectionWindow,
    vocab: &Vocabulary,
    flags: &[bool],
) -> Result<Vec<f64>, EncodingError> {
    let w = window.window_size;
    let v = vocab.len();
    let block = v + 1;
    let messages: Vec<&MessageView> =
        window.context.iter().chain(std::iter::once(&window.latest)).collect();
    assert_eq!(
        flags.len(),
        messages.len(),
        "one reuse flag per window message required"
    );
    assert!(messages.len() <= w, "window holds more than w messages");

    let mut x = vec![0.0; w * block];
    let pad = w - messages.len();
    for (j, (msg, &flag)) in messages.iter().zip(flags).enumerate() {
        let name_idx = vocab
            .index_of(&msg.name)
            .ok_or_else(|| EncodingError::new(msg.seq, &msg.name))?;
        let base = (pad + j) * block;
        x[base + name_idx] = 1.0;
        x[base + v] = if flag { 1.0 } else { 0.0 };
    }
    Ok(x)
}

/// Layer widths of the mirrored autoencoder for a given input size.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct NetDims {
    pub input: usize,
    pub hidden: usize,
    pub bottleneck: usize,
}

impl NetDims {
    /// input -> ceil(input/2) -> ceil(input/4) -> ceil(input/2) -> input
    pub fn for_input(input: usize) -> NetDims {
        NetDims {
            input,
            hidden: input.div_ceil(2),
            bottleneck: input.div_ceil(4),
        }
    }
}

/// Gradients of the training loss with respect to every parameter.
pub struct Gradients {
    w1: Array2<f64>,
    b1: Array1<f64>,
    w2: Array2<f64>,
    b2: Array1<f64>,
    w3: Array2<f64>,
    b3: Array1<f64>,
    w4: Array2<f64>,
    b4: Array1<f64>,
}

/// The mirrored tanh autoencoder. Weights initialise uniformly in
/// [-0.1, 0.1] from the given seed; biases start at zero.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReconstructionNet {
    dims: NetDims,
    w1: Array2<f64>,
    b1: Array1<f64>,
    w2: Array2<f64>,
    b2: Array1<f64>,
    w3: Array2<f64>,
    b3: Array1<f64>,
    w4: Array2<f64>,
    b4: Array1<f64>,
}

fn init_weights(rng: &mut ChaCha8Rng, rows: usize, cols: usize) -> Array2<f64> {
    Array2::from_shape_fn((rows, cols), |_| rng.gen_range(-0.1..0.1))
}

impl ReconstructionNet {
    pub fn new(dims: NetDims, seed: u64) -> ReconstructionNet {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let (d, h, k) = (dims.input, dims.hidden, dims.bottleneck);
        ReconstructionNet {
            dims,
            w1: init_weights(&mut rng, d, h),
            b1: Array1::zeros(h),
            w2: init_weights(&mut rng, h, k),
            b2: Array1::zeros(k),
            w3: init_weights(&mut rng, k, h),
            b3: Array1::zeros(h),
            w4: init_weights(&mut rng, h, d),
            b4: Array1::zeros(d),
        }
    }

    pub fn dims(&self) -> NetDims {
        self.dims
    }

    fn forward(&self, x: &Array2<f64>) -> (Array2<f64>, Array2<f64>, Array2<f64>, Array2<f64>) {
        let a1 = (x.dot(&self.w1) + &self.b1).mapv(f64::tanh);
        let a2 = (a1.dot(&self.w2) + &self.b2).mapv(f64::tanh);
        let a3 = (a2.dot(&self.w3) + &self.b3).mapv(f64::tanh);
        let y = a3.dot(&self.w4) + &self.b4;
        (a1, a2, a3, y)
    }

    /// Training loss over a batch: squared reconstruction error summed per
    /// sample, averaged over samples.
    pub fn batch_loss(&self, x: &Array2<f64>) -> f64 {
        let (_, _, _, y) = self.forward(x);
        let r = y - x;
        r.mapv(|v| v * v).sum() / x.nrows() as f64
    }

    /// Scoring error for one window: squared reconstruction error averaged
    /// over input coordinates.
    pub fn reconstruction_error(&self, x: &[f64]) -> f64 {
        let x = Array2::from_shape_vec((1, x.len()), x.to_vec()).expect("row vector");
        let (_, _, _, y) = self.forward(&x);
        let r = y - &x;
        r.mapv(|v| v * v).sum() / x.ncols() as f64
    }

    /// Training loss and its analytic gradients on a batch.
    pub fn loss_and_gradients(&self, x: &Array2<f64>) -> (f64, Gradients) {
        let n = x.nrows() as f64;
        let (a1, a2, a3, y) = self.forward(x);
        let r = &y - x;
        let loss = r.mapv(|v| v * v).sum() / n;

        let g = r.mapv(|v| 2.0 * v / n);
        let gw4 = a3.t().dot(&g);
        let gb4 = g.sum_axis(Axis(0));
        let d3 = g.dot(&self.w4.t()) * a3.mapv(|v| 1.0 - v * v);
        let gw3 = a2.t().dot(&d3);
        let gb3 = d3.sum_axis(Axis(0));
        let d2 = d3.dot(&self.w3.t()) * a2.mapv(|v| 1.0 - v * v);
        let gw2 = a1.t().dot(&d2);
        let gb2 = d2.sum_axis(Axis(0));
        let d1 = d2.dot(&self.w2.t()) * a1.mapv(|v| 1.0 - v * v);
        let gw1 = x.t().dot(&d1);
        let gb1 = d1.sum_axis(Axis(0));

        (
            loss,
            Gradients {
                w1: gw1,
                b1: gb1,
                w2: gw2,
                b2: gb2,
                w3: gw3,
                b3: gb3,
                w4: gw4,
                b4: gb4,
            },
        )
    }

    /// One plain gradient-descent update with a fixed step size.
    pub fn step(&mut self, g: &Gradients, lr: f64) {
        self.w1.scaled_add(-lr, &g.w1);
        self.b1.scaled_add(-lr, &g.b1);
        self.w2.scaled_add(-lr, &g.w2);
        self.b2.scaled_add(-lr, &g.b2);
        self.w3.scaled_add(-lr, &g.w3);
        self.b3.scaled_add(-lr, &g.b3);
        self.w4.scaled_add(-lr, &g.w4);
        self.b4.scaled_add(-lr, &g.b4);
    }

    /// All parameters flattened in a fixed order, for gradient verification.
    pub fn param_vector(&self) -> Vec<f64> {
        let mut v = Vec::new();
        for arr in [&self.w1, &self.w2, &self.w3, &self.w4] {
            v.extend(arr.iter().copied());
        }
        for arr in [&self.b1, &self.b2, &self.b3, &self.b4] {
            v.extend(arr.iter().copied());
        }
        v
    }

    /// Restores parameters from a [`param_vector`](Self::param_vector) layout.
    pub fn set_param_vector(&mut self, v: &[f64]) {
        let mut it = v.iter().copied();
        for arr in [&mut self.w1, &mut self.w2, &mut self.w3, &mut self.w4] {
            for p in arr.iter_mut() {
                *p = it.next().expect("param vector too short");
            }
        }
        for arr in [&mut self.b1, &mut self.b2, &mut self.b3, &mut self.b4] {
            for p in arr.iter_mut() {
                *p = it.next().expect("param vector too short");
            }
        }
        assert!(it.next().is_none(), "param vector too long");
    }

    /// Analytic gradients flattened in [`param_vector`](Self::param_vector)
    /// order.
    pub fn gradient_vector(&self, x: &Array2<f64>) -> Vec<f64> {
        let (_, g) = self.loss_and_gradients(x);
        let mut v = Vec::new();
        for arr in [&g.w1, &g.w2, &g.w3, &g.w4] {
            v.extend(arr.iter().copied());
        }
        for arr in [&g.b1, &g.b2, &g.b3, &g.b4] {
            v.extend(arr.iter().copied());
        }
        v
    }
}

/// Gradient-descent hyperparameters.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct TrainParams {
    pub epochs: usize,
    pub learning_rate: f64,
    /// Training stops early once the batch loss falls to this value.
    pub stop_loss: f64,
}

impl Default for TrainParams {
    fn default() -> Self {
        TrainParams {
            epochs: 1500,
            learning_rate: 0.02,
            stop_loss: 1e-9,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AeVerdict {
    Normal,
    Anomalous,
}

/// Outcome of scoring one window.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WindowScore {
    pub error: f64,
    pub verdict: AeVerdict,
}

const MODEL_FORMAT_VERSION: u32 = 1;

/// A trained per-window-size detector: vocabulary, network weights, and the
/// calibrated anomaly threshold.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AeModel {
    format: u32,
    pub window_size: usize,
    pub vocabulary: Vocabulary,
    pub threshold: f64,
    pub final_loss: f64,
    pub epochs_run: usize,
    net: ReconstructionNet,
}

impl AeModel {
    /// Trains one model on a normal-only stream. Windows are taken at every
    /// position with full context (`w-1` predecessors); the threshold is the
    /// 99th percentile of their reconstruction errors. Deterministic given
    /// the seed.
    pub fn train(
        training: &[MessageView],
        window_size: usize,
        params: &TrainParams,
        seed: u64,
    ) -> Result<AeModel, AeError> {
        if !(crate::window::MIN_WINDOW_SIZE..=crate::window::MAX_WINDOW_SIZE)
            .contains(&window_size)
        {
            return Err(AeError::BadConfig(format!(
                "window size {window_size} outside [1, 10]"
            )));
        }
        if training.len() < window_size {
            return Err(AeError::BadConfig(format!(
                "{} training messages cannot fill a window of size {window_size}",
                training.len()
            )));
        }
        for view in training {
            if !view.name.is_ascii() {
                return Err(AeError::Encoding(EncodingError::new(view.seq, &view.name)));
            }
        }

        let vocab = build_vocabulary(training);
        let flags = reuse_flags(training);
        let mut rows: Vec<Vec<f64>> = Vec::with_capacity(training.len() - window_size + 1);
        for i in (window_size - 1)..training.len() {
            let start = i + 1 - window_size;
            let window = DetectionWindow {
                latest: training[i].clone(),
                context: training[start..i].to_vec(),
                ue_previous: None,
                window_size,
            };
            rows.push(encode_window(&window, &vocab, &flags[start..=i])?);
        }
        let dim = window_size * (vocab.len() + 1);
        let n = rows.len();
        let x = Array2::from_shape_vec((n, dim), rows.into_iter().flatten().collect())
            .expect("consistent row lengths");

        let mut net = ReconstructionNet::new(NetDims::for_input(dim), seed.wrapping_add(window_size as u64));
        let mut final_loss = f64::INFINITY;
        let mut first_loss = f64::INFINITY;
        let mut epochs_run = 0;
        for epoch in 0..params.epochs {
            let (loss, grads) = net.loss_and_gradients(&x);
            if !loss.is_finite() {
                return Err(AeError::Diverged { epoch, loss });
            }
            if epoch == 0 {
                first_loss = loss;
            }
            final_loss = loss;
            epochs_run = epoch + 1;
            if loss <= params.stop_loss {
                break;
            }
            net.step(&grads, params.learning_rate);
        }
        debug_assert!(params.epochs == 0 || final_loss <= first_loss);

        let mut errors: Vec<f64> = x
            .rows()
            .into_iter()
            .map(|row| net.reconstruction_error(row.as_slice().expect("contiguous row")))
            .collect();
        let threshold = percentile_99(&mut errors);

        Ok(AeModel {
            format: MODEL_FORMAT_VERSION,
            window_size,
            vocabulary: vocab,
            threshold,
            final_loss,
            epochs_run,
            net,
        })
    }

    /// Scores one window: reconstruction error of its encoding, Anomalous
    /// iff strictly above the threshold.
    pub fn score(
        &self,
        window: &DetectionWindow,
        flags: &[bool],
    ) -> Result<WindowScore, EncodingError> {
        let x = encode_window(window, &self.vocabulary, flags)?;
        let error = self.net.reconstruction_error(&x);
        let verdict = if error > self.threshold {
            AeVerdict::Anomalous
        } else {
            AeVerdict::Normal
        };
        Ok(WindowScore { error, verdict })
    }

    pub fn save(&self, path: &Path) -> Result<(), AeError> {
        let json = serde_json::to_string(self).expect("model serialization is infallible");
        std::fs::write(path, json)?;
        Ok(())
    }

    pub fn load(path: &Path) -> Result<AeModel, AeError> {
        let text = std::fs::read_to_string(path)?;
        let model: AeModel =
            serde_json::from_str(&text).map_err(|e| AeError::Format(e.to_string()))?;
        if model.format != MODEL_FORMAT_VERSION {
            return Err(AeError::Format(format!(
                "unsupported model format {} (expected {MODEL_FORMAT_VERSION})",
                model.format
            )));
        }
        Ok(model)
    }
}

/// Nearest-rank 99th percentile.
fn percentile_99(errors: &mut [f64]) -> f64 {
    assert!(!errors.is_empty());
    errors.sort_unstable_by(|a, b| a.total_cmp(b));
    let n = errors.len();
    let rank = ((0.99 * n as f64).ceil() as usize).clamp(1, n);
    errors[rank - 1]
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hypoglyph::{self, SubstitutionMap};
    use crate::message::{MessageCatalog, Protocol, Tmsi};

    fn benign_stream(n: usize) -> Vec<MessageView> {
        let catalog = MessageCatalog::default();
        let mut out = Vec::new();
        let mut ue = 0;
        while out.len() < n {
            for mut m in catalog.canonical_session(ue, Tmsi(0x100 + ue as u32), 17) {
                if out.len() == n {
                    break;
                }
                m.seq = out.len() as u64;
                out.push(m.view());
            }
            ue += 1;
        }
        out
    }

    fn window_at(stream: &[MessageView], i: usize, w: usize) -> DetectionWindow {
        crate::window::window_for(stream, i, w).unwrap()
    }

    #[test]
    fn vocabulary_covers_catalog() {
        let stream = benign_stream(700);
        let vocab = build_vocabulary(&stream);
        assert_eq!(vocab.len(), 12);
        // deterministic lexicographic order
        let again = build_vocabulary(&stream);
        assert_eq!(vocab, again);
        assert!(vocab.names().windows(2).all(|p| p[0] < p[1]));
    }

    #[test]
    fn single_message_vocabulary() {
        let stream = benign_stream(1);
        assert_eq!(build_vocabulary(&stream).len(), 1);
    }

    #[test]
    fn encoding_dimension_and_padding() {
        let stream = benign_stream(24);
        let vocab = build_vocabulary(&stream);
        let w = 2;
        let x = encode_window(&window_at(&stream, 5, w), &vocab, &[false, false]).unwrap();
        assert_eq!(x.len(), 2 * 12 + 2);
        assert_eq!(x.iter().filter(|&&v| v == 1.0).count(), 2);

        // stream start: 1 of 3 slots filled, leading zero blocks
        let w = 3;
        let x = encode_window(&window_at(&stream, 0, w), &vocab, &[false]).unwrap();
        assert_eq!(x.len(), 3 * 13);
        assert!(x[..2 * 13].iter().all(|&v| v == 0.0));
        assert_eq!(x[2 * 13..].iter().filter(|&&v| v == 1.0).count(), 1);
    }

    #[test]
    fn hypoglyphed_name_fails_encoding_with_seq_and_codepoints() {
        let mut stream = benign_stream(24);
        let vocab = build_vocabulary(&stream);
        stream[10].name = hypoglyph::apply(&stream[10].name, &SubstitutionMap::builtin());
        let err = encode_window(&window_at(&stream, 10, 2), &vocab, &[false, false]).unwrap_err();
        assert_eq!(err.seq, 10);
        assert!(err.codepoints.iter().any(|c| !c.is_ascii()));
        assert!(err.to_string().contains("U+0435"));
    }

    #[test]
    fn reuse_flag_fires_on_cross_ue_tmsi() {
        let mut stream = benign_stream(30);
        // message 25 claims UE 2 but carries UE 0's TMSI
        stream[25].tmsi = stream[0].tmsi;
        let flags = reuse_flags(&stream);
        assert!(flags[25]);
        assert_eq!(flags.iter().filter(|&&f| f).count(), 1);
    }

    #[test]
    fn training_reduces_loss_and_calibrates_threshold() {
        let stream = benign_stream(120);
        let params = TrainParams { epochs: 300, ..TrainParams::default() };
        let model = AeModel::train(&stream, 3, &params, 42).unwrap();
        assert!(model.final_loss.is_finite());
        assert!(model.threshold >= 0.0);

        // at most 1% of training windows score strictly above the threshold
        let flags = reuse_flags(&stream);
        let mut above = 0;
        let mut total = 0;
        for i in 2..stream.len() {
            let w = window_at(&stream, i, 3);
            let score = model.score(&w, &flags[i - 2..=i]).unwrap();
            total += 1;
            if score.error > model.threshold {
                above += 1;
            }
        }
        assert!(above as f64 <= 0.01 * total as f64, "{above}/{total} above threshold");
    }

    #[test]
    fn training_is_deterministic() {
        let stream = benign_stream(120);
        let params = TrainParams { epochs: 200, ..TrainParams::default() };
        let a = AeModel::train(&stream, 2, &params, 9).unwrap();
        let b = AeModel::train(&stream, 2, &params, 9).unwrap();
        assert_eq!(a.threshold, b.threshold);
        assert_eq!(a, b);
    }

    #[test]
    fn hypoglyph_in_training_is_an_encoding_error() {
        let mut stream = benign_stream(60);
        stream[30].name = hypoglyph::apply(&stream[30].name, &SubstitutionMap::builtin());
        match AeModel::train(&stream, 2, &TrainParams::default(), 1) {
            Err(AeError::Encoding(e)) => assert_eq!(e.seq, 30),
            other => panic!("expected encoding error, got {other:?}"),
        }
    }

    #[test]
    fn save_load_round_trip_scores_identically() {
        let stream = benign_stream(120);
        let params = TrainParams { epochs: 150, ..TrainParams::default() };
        let model = AeModel::train(&stream, 4, &params, 5).unwrap();
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("ae_w4.json");
        model.save(&path).unwrap();
        let loaded = AeModel::load(&path).unwrap();
        assert_eq!(loaded.threshold, model.threshold);
        let flags = reuse_flags(&stream);
        for i in 3..stream.len() {
            let w = window_at(&stream, i, 4);
            let a = model.score(&w, &flags[i - 3..=i]).unwrap();
            let b = loaded.score(&w, &flags[i - 3..=i]).unwrap();
            assert_eq!(a.error.to_bits(), b.error.to_bits());
        }
    }

    #[test]
    fn scoring_flags_an_out_of_place_setup_request() {
        let stream = benign_stream(240);
        let params = TrainParams { epochs: 1500, ..TrainParams::default() };
        let model = AeModel::train(&stream, 3, &params, 42).unwrap();

        // inject an RRCSetupRequest mid-session with a reused TMSI
        let mut test = benign_stream(240);
        let injected = MessageView {
            seq: 100,
            ue_id: test[100].ue_id,
            protocol: Protocol::Rrc,
            name: "RRCSetupRequest".into(),
            tmsi: test[0].tmsi,
            rnti: 4321,
            params: Vec::new(),
        };
        test.insert(100, injected);
        for (i, m) in test.iter_mut().enumerate() {
            m.seq = i as u64;
        }
        let flags = reuse_flags(&test);

        let mut benign_errors = Vec::new();
        let mut attack_error = None;
        for i in 2..test.len() {
            let w = window_at(&test, i, 3);
            let score = model.score(&w, &flags[i - 2..=i]).unwrap();
            if i == 100 {
                attack_error = Some(score.error);
            } else if i < 98 || i > 102 {
                benign_errors.push(score.error);
            }
        }
        benign_errors.sort_by(|a, b| a.total_cmp(b));
        let median = benign_errors[benign_errors.len() / 2];
        assert!(attack_error.unwrap() > median);
        assert!(attack_error.unwrap() > model.threshold);
    }

    #[test]
    fn gradients_match_finite_differences() {
        let mut rng = ChaCha8Rng::seed_from_u64(77);
        for case in 0..5 {
            let d = 4 + case * 3;
            let n = 6;
            let x = Array2::from_shape_fn((n, d), |_| rng.gen_range(0.0..1.0));
            let mut net = ReconstructionNet::new(NetDims::for_input(d), 1000 + case as u64);
            let analytic = net.gradient_vector(&x);
            let mut params = net.param_vector();
            let eps = 1e-6;
            for i in (0..params.len()).step_by(7) {
                let orig = params[i];
                params[i] = orig + eps;
                net.set_param_vector(&params);
                let up = net.batch_loss(&x);
                params[i] = orig - eps;
                net.set_param_vector(&params);
                let down = net.batch_loss(&x);
                params[i] = orig;
                net.set_param_vector(&params);
                let numeric = (up - down) / (2.0 * eps);
                let denom = analytic[i].abs().max(numeric.abs()).max(1e-8);
                assert!(
                    (analytic[i] - numeric).abs() / denom <= 1e-4,
                    "param {i}: analytic {} vs numeric {numeric}",
                    analytic[i]
                );
            }
        }
    }

    #[test]
    fn excessive_learning_rate_reports_divergence() {
        let stream = benign_stream(80);
        let params = TrainParams { epochs: 400, learning_rate: 1e6, stop_loss: 0.0 };
        match AeModel::train(&stream, 2, &params, 3) {
            Err(AeError::Diverged { .. }) => {}
            other => panic!("expected divergence, got {other:?}"),
        }
    }
}
