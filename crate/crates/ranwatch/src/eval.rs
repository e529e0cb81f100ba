//! End-to-end experiment harness: runs a detector over a dataset stream,
//! counts the confusion matrix, computes the six metrics, aggregates
//! per-message latency, and writes reports.

use std::collections::VecDeque;
use std::fmt;
use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};
use std::time::{Duration, Instant};

use serde::{Deserialize, Serialize};

use crate::ae::{AeModel, AeVerdict, TmsiReuseTracker};
use crate::config::RunConfig;
use crate::forge::TRAIN_SPLIT;
use crate::llm::{build_prompt, classify, Backend, PromptTemplate, VerdictLabel};
use crate::message::{Label, Layer3Message, MessageView};
use crate::window::{stream_windows, DetectionWindow, WindowError};

/// Messages above this per-call latency get flagged in the report; the
/// Near-RT control loop budget.
pub const LATENCY_BUDGET: Duration = Duration::from_secs(1);

#[derive(Debug)]
pub enum EvalError {
    /// No message received a verdict.
    EmptyEvaluation,
    Config(String),
    Window(WindowError),
    Io(std::io::Error),
}

impl fmt::Display for EvalError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            EvalError::EmptyEvaluation => {
                write!(f, "empty evaluation: no message received a verdict")
            }
            EvalError::Config(msg) => write!(f, "evaluation config: {msg}"),
            EvalError::Window(e) => write!(f, "{e}"),
            EvalError::Io(e) => write!(f, "report I/O: {e}"),
        }
    }
}

impl std::error::Error for EvalError {}

impl From<WindowError> for EvalError {
    fn from(e: WindowError) -> Self {
        EvalError::Window(e)
    }
}

impl From<std::io::Error> for EvalError {
    fn from(e: std::io::Error) -> Self {
        EvalError::Io(e)
    }
}

/// Verdict counts with Anomalous as the positive class and BlindDoS as the
/// positive truth.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConfusionMatrix {
    pub tp: u64,
    pub fp: u64,
    pub tn: u64,
    #[serde(rename = "fn")]
    pub fn_: u64,
}

impl ConfusionMatrix {
    pub fn record(&mut self, truth: Label, predicted_anomalous: bool) {
        match (truth, predicted_anomalous) {
            (Label::BlindDos, true) => self.tp += 1,
            (Label::BlindDos, false) => self.fn_ += 1,
            (Label::Normal, true) => self.fp += 1,
            (Label::Normal, false) => self.tn += 1,
        }
    }

    pub fn total(&self) -> u64 {
        self.tp + self.fp + self.tn + self.fn_
    }
}

/// The six evaluation metrics, all in [0, 1].
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Metrics {
    pub accuracy: f64,
    pub precision: f64,
    pub recall: f64,
    pub f1: f64,
    pub fpr: f64,
    pub fnr: f64,
}

/// Metric definitions over the confusion counts. Zero-denominator cases
/// resolve to 0 so degenerate runs still produce a report.
pub fn compute_metrics(cm: &ConfusionMatrix) -> Result<Metrics, EvalError> {
    let total = cm.total();
    if total == 0 {
        return Err(EvalError::EmptyEvaluation);
    }
    let (tp, fp, tn, fn_) = (cm.tp as f64, cm.fp as f64, cm.tn as f64, cm.fn_ as f64);
    let precision = if tp + fp == 0.0 { 0.0 } else { tp / (tp + fp) };
    let recall = if tp + fn_ == 0.0 { 0.0 } else { tp / (tp + fn_) };
    Ok(Metrics {
        accuracy: (tp + tn) / total as f64,
        precision,
        recall,
        f1: if precision + recall == 0.0 {
            0.0
        } else {
            2.0 * precision * recall / (precision + recall)
        },
        fpr: if fp + tn == 0.0 { 0.0 } else { fp / (fp + tn) },
        fnr: if fn_ + tp == 0.0 { 0.0 } else { fn_ / (fn_ + tp) },
    })
}

/// Everything one experiment run produces.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EvalReport {
    pub detector: String,
    pub window_size: usize,
    pub cm: ConfusionMatrix,
    pub metrics: Option<Metrics>,
    /// Latencies in seconds, rounded to microseconds so repeated
    /// deterministic runs serialize identically.
    pub mean_latency_s: f64,
    pub max_latency_s: f64,
    pub latency_sum_s: f64,
    /// Seqs whose per-message latency exceeded [`LATENCY_BUDGET`].
    pub latency_violations: Vec<u64>,
    pub indeterminate: u64,
    /// Messages that needed transport retries.
    pub retried: u64,
    /// Set when the detector died mid-stream: the seq it choked on.
    pub terminated_early: Option<u64>,
    pub termination_reason: Option<String>,
    pub messages_evaluated: u64,
    pub messages_skipped: u64,
    pub template_version: Option<String>,
    pub seed: Option<u64>,
    pub error: Option<String>,
    pub run_config: Option<RunConfig>,
}

fn round_us(seconds: f64) -> f64 {
    (seconds * 1e6).round() / 1e6
}

struct LatencyStats {
    sum: Duration,
    max: Duration,
    count: u64,
    violations: Vec<u64>,
}

impl LatencyStats {
    fn new() -> LatencyStats {
        LatencyStats { sum: Duration::ZERO, max: Duration::ZERO, count: 0, violations: Vec::new() }
    }

    fn record(&mut self, seq: u64, latency: Duration) {
        self.sum += latency;
        self.max = self.max.max(latency);
        self.count += 1;
        if latency > LATENCY_BUDGET {
            self.violations.push(seq);
        }
    }

    fn mean_s(&self) -> f64 {
        if self.count == 0 {
            0.0
        } else {
            self.sum.as_secs_f64() / self.count as f64
        }
    }
}

/// How a run is split and configured. `ae_eval_from` / `llm_eval_from`
/// choose the first seq that receives a recorded verdict; the defaults
/// mirror the experiment layout (AE judges the test split, the LLM judges
/// the complete stream).
#[derive(Debug, Clone)]
pub struct EvalOptions {
    pub ae_eval_from: u64,
    pub llm_eval_from: u64,
    pub max_retries: u32,
    pub seed: Option<u64>,
    pub run_config: Option<RunConfig>,
}

impl Default for EvalOptions {
    fn default() -> Self {
        EvalOptions {
            ae_eval_from: TRAIN_SPLIT,
            llm_eval_from: 0,
            max_retries: 2,
            seed: None,
            run_config: None,
        }
    }
}

impl EvalOptions {
    /// Evaluate both detectors on the same test split for apples-to-apples
    /// comparisons.
    pub fn aligned() -> EvalOptions {
        EvalOptions { llm_eval_from: TRAIN_SPLIT, ..EvalOptions::default() }
    }
}

/// A detector to drive over the stream.
pub enum Detector<'a> {
    AutoEncoder(&'a AeModel),
    Llm {
        backend: &'a mut dyn Backend,
        template: &'a PromptTemplate,
    },
}

/// Streams the dataset through the detector and collects an [`EvalReport`].
/// For the autoencoder the requested window size must match the model's.
pub fn run_experiment(
    dataset: &[Layer3Message],
    detector: Detector<'_>,
    window_size: usize,
    opts: &EvalOptions,
) -> Result<EvalReport, EvalError> {
    match detector {
        Detector::AutoEncoder(model) => {
            if model.window_size != window_size {
                return Err(EvalError::Config(format!(
                    "model trained for window size {} cannot run at window size {window_size}",
                    model.window_size
                )));
            }
            run_ae_experiment(dataset, model, opts)
        }
        Detector::Llm { backend, template } => {
            run_llm_experiment(dataset, backend, template, window_size, opts)
        }
    }
}

/// AutoEncoder run. Streams every message in seq order, scoring each window;
/// verdicts are recorded for seqs at or past `ae_eval_from`. The first
/// message that fails to encode ends the run with `terminated_early` set.
///
/// Streaming policy: messages the model flags are excluded from later window
/// context, so one detection does not smear across the following windows.
/// The first `w-1` messages after stream start or after a context reset
/// warm the context back up and default to Normal; after `w` consecutive
/// anomalies the context is assumed poisoned and reset.
pub fn run_ae_experiment(
    dataset: &[Layer3Message],
    model: &AeModel,
    opts: &EvalOptions,
) -> Result<EvalReport, EvalError> {
    let eval_from = opts.ae_eval_from;
    let split_size = dataset.iter().filter(|m| m.seq >= eval_from).count() as u64;
    if split_size == 0 {
        return Err(EvalError::EmptyEvaluation);
    }
    let w = model.window_size;
    let mut tracker = TmsiReuseTracker::new();
    let mut context: VecDeque<(MessageView, bool)> = VecDeque::with_capacity(w);
    let mut consecutive_anomalies = 0usize;
    let mut warmup = w - 1;

    let mut cm = ConfusionMatrix::default();
    let mut latency = LatencyStats::new();
    let mut terminated_early = None;
    let mut termination_reason = None;

    for msg in dataset {
        let view = msg.view();
        let flag = tracker.observe(&view);
        let mut flags: Vec<bool> = context.iter().map(|(_, f)| *f).collect();
        flags.push(flag);
        let window = DetectionWindow {
            latest: view.clone(),
            context: context.iter().map(|(v, _)| v.clone()).collect(),
            ue_previous: None,
            window_size: w,
        };
        let start = Instant::now();
        let score = model.score(&window, &flags);
        let elapsed = start.elapsed();
        let anomalous = match score {
            Err(encoding) => {
                terminated_early = Some(encoding.seq);
                termination_reason = Some(encoding.to_string());
                break;
            }
            Ok(s) => {
                if warmup > 0 {
                    warmup -= 1;
                    context.push_back((view.clone(), flag));
                    false
                } else if s.verdict == AeVerdict::Anomalous {
                    consecutive_anomalies += 1;
                    if consecutive_anomalies >= w {
                        context.clear();
                        consecutive_anomalies = 0;
                        warmup = w.saturating_sub(1);
                    }
                    true
                } else {
                    consecutive_anomalies = 0;
                    context.push_back((view.clone(), flag));
                    false
                }
            }
        };
        while context.len() > w.saturating_sub(1) {
            context.pop_front();
        }
        if msg.seq >= eval_from {
            latency.record(msg.seq, elapsed);
            cm.record(msg.label, anomalous);
        }
    }

    let evaluated = cm.total();
    if evaluated == 0 && terminated_early.is_none() {
        return Err(EvalError::EmptyEvaluation);
    }
    Ok(EvalReport {
        detector: "ae".to_string(),
        window_size: w,
        cm,
        metrics: compute_metrics(&cm).ok(),
        mean_latency_s: round_us(latency.mean_s()),
        max_latency_s: round_us(latency.max.as_secs_f64()),
        latency_sum_s: round_us(latency.sum.as_secs_f64()),
        latency_violations: latency.violations,
        indeterminate: 0,
        retried: 0,
        terminated_early,
        termination_reason,
        messages_evaluated: evaluated,
        messages_skipped: split_size - evaluated,
        template_version: None,
        seed: opts.seed,
        error: None,
        run_config: opts.run_config.clone(),
    })
}

/// LLM run. Streams one window per message over the complete dataset (or
/// from `llm_eval_from` when aligned splits are requested — the stream
/// itself always starts at seq 0). Indeterminate verdicts count as Normal
/// in the confusion matrix and separately in the report.
pub fn run_llm_experiment(
    dataset: &[Layer3Message],
    backend: &mut dyn Backend,
    template: &PromptTemplate,
    window_size: usize,
    opts: &EvalOptions,
) -> Result<EvalReport, EvalError> {
    if dataset.is_empty() {
        return Err(EvalError::EmptyEvaluation);
    }
    let views: Vec<MessageView> = dataset.iter().map(|m| m.view()).collect();
    let mut cm = ConfusionMatrix::default();
    let mut latency = LatencyStats::new();
    let mut indeterminate = 0u64;
    let mut retried = 0u64;

    for window in stream_windows(&views, window_size)? {
        let seq = window.latest.seq;
        let truth = dataset[seq as usize].label;
        let prompt = build_prompt(&window, template);
        let verdict = classify(&prompt, backend, opts.max_retries);
        latency.record(seq, verdict.latency);
        if verdict.retries > 0 {
            retried += 1;
        }
        if verdict.label == VerdictLabel::Indeterminate {
            indeterminate += 1;
        }
        if seq >= opts.llm_eval_from {
            cm.record(truth, verdict.label == VerdictLabel::Anomalous);
        }
    }

    Ok(EvalReport {
        detector: format!("llm-{}", backend.id()),
        window_size,
        cm,
        metrics: compute_metrics(&cm).ok(),
        mean_latency_s: round_us(latency.mean_s()),
        max_latency_s: round_us(latency.max.as_secs_f64()),
        latency_sum_s: round_us(latency.sum.as_secs_f64()),
        latency_violations: latency.violations,
        indeterminate,
        retried,
        terminated_early: None,
        termination_reason: None,
        messages_evaluated: cm.total(),
        messages_skipped: 0,
        template_version: Some(template.version.clone()),
        seed: opts.seed,
        error: None,
        run_config: opts.run_config.clone(),
    })
}

fn error_report(detector: &str, window_size: usize, err: &EvalError) -> EvalReport {
    EvalReport {
        detector: detector.to_string(),
        window_size,
        cm: ConfusionMatrix::default(),
        metrics: None,
        mean_latency_s: 0.0,
        max_latency_s: 0.0,
        latency_sum_s: 0.0,
        latency_violations: Vec::new(),
        indeterminate: 0,
        retried: 0,
        terminated_early: None,
        termination_reason: None,
        messages_evaluated: 0,
        messages_skipped: 0,
        template_version: None,
        seed: None,
        error: Some(err.to_string()),
        run_config: None,
    }
}

/// Runs the autoencoder for every provided model; each run's error is
/// recorded in its report and the sweep continues.
pub fn sweep_ae(
    dataset: &[Layer3Message],
    models: &[AeModel],
    opts: &EvalOptions,
) -> Vec<EvalReport> {
    models
        .iter()
        .map(|model| {
            run_ae_experiment(dataset, model, opts)
                .unwrap_or_else(|e| error_report("ae", model.window_size, &e))
        })
        .collect()
}

/// Runs the LLM detector for window sizes 1..=10, constructing a fresh
/// backend per window size.
pub fn sweep_llm(
    dataset: &[Layer3Message],
    template: &PromptTemplate,
    opts: &EvalOptions,
    mut make_backend: impl FnMut(usize) -> Box<dyn Backend>,
) -> Vec<EvalReport> {
    (crate::window::MIN_WINDOW_SIZE..=crate::window::MAX_WINDOW_SIZE)
        .map(|w| {
            let mut backend = make_backend(w);
            run_llm_experiment(dataset, backend.as_mut(), template, w, opts)
                .unwrap_or_else(|e| error_report("llm", w, &e))
        })
        .collect()
}

/// One JSON document per run: `<dir>/report_<detector>_w<w>.json`.
pub fn write_report_json(report: &EvalReport, dir: &Path) -> Result<PathBuf, EvalError> {
    std::fs::create_dir_all(dir)?;
    let path = dir.join(format!("report_{}_w{}.json", report.detector, report.window_size));
    let json = serde_json::to_string_pretty(report).expect("report serialization is infallible");
    std::fs::write(&path, json)?;
    Ok(path)
}

const CSV_HEADER: &str = "detector,window_size,accuracy,precision,recall,f1,fpr,fnr,\
mean_latency_s,max_latency_s,indeterminate,terminated_early";

/// Combined CSV over a sweep, one row per run.
pub fn write_combined_csv(reports: &[EvalReport], path: &Path) -> Result<(), EvalError> {
    let mut out = BufWriter::new(File::create(path)?);
    writeln!(out, "{CSV_HEADER}")?;
    for r in reports {
        let m = r.metrics;
        let metric = |f: fn(&Metrics) -> f64| match &m {
            Some(m) => format!("{:.6}", f(m)),
            None => String::new(),
        };
        writeln!(
            out,
            "{},{},{},{},{},{},{},{},{:.6},{:.6},{},{}",
            r.detector,
            r.window_size,
            metric(|m| m.accuracy),
            metric(|m| m.precision),
            metric(|m| m.recall),
            metric(|m| m.f1),
            metric(|m| m.fpr),
            metric(|m| m.fnr),
            r.mean_latency_s,
            r.max_latency_s,
            r.indeterminate,
            r.terminated_early.map(|s| s.to_string()).unwrap_or_default(),
        )?;
    }
    out.flush()?;
    Ok(())
}

/// Fixed-width text table over a sweep, for terminals and logs.
pub fn render_table(reports: &[EvalReport]) -> String {
    let mut s = String::new();
    s.push_str(&format!(
        "{:<14} {:>2} {:>9} {:>9} {:>7} {:>7} {:>7} {:>7} {:>11} {:>10} {:>6} {:>6}\n",
        "detector", "w", "accuracy", "precision", "recall", "f1", "fpr", "fnr",
        "mean_lat_s", "max_lat_s", "indet", "term"
    ));
    for r in reports {
        let (acc, prec, rec, f1, fpr, fnr) = match &r.metrics {
            Some(m) => (
                format!("{:.4}", m.accuracy),
                format!("{:.4}", m.precision),
                format!("{:.4}", m.recall),
                format!("{:.4}", m.f1),
                format!("{:.4}", m.fpr),
                format!("{:.4}", m.fnr),
            ),
            None => {
                let dash = "-".to_string();
                (dash.clone(), dash.clone(), dash.clone(), dash.clone(), dash.clone(), dash)
            }
        };
        s.push_str(&format!(
            "{:<14} {:>2} {:>9} {:>9} {:>7} {:>7} {:>7} {:>7} {:>11.6} {:>10.6} {:>6} {:>6}\n",
            r.detector,
            r.window_size,
            acc,
            prec,
            rec,
            f1,
            fpr,
            fnr,
            r.mean_latency_s,
            r.max_latency_s,
            r.indeterminate,
            r.terminated_early
                .map(|v| v.to_string())
                .unwrap_or_else(|| if r.error.is_some() { "error".into() } else { "-".into() }),
        ));
    }
    s
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::llm::ScriptedBackend;
    use crate::message::{MessageCatalog, Tmsi};

    fn cm(tp: u64, fp: u64, tn: u64, fn_: u64) -> ConfusionMatrix {
        ConfusionMatrix { tp, fp, tn, fn_ }
    }

    #[test]
    fn perfect_detector_metrics() {
        let m = compute_metrics(&cm(20, 0, 996, 0)).unwrap();
        assert_eq!(m.accuracy, 1.0);
        assert_eq!(m.precision, 1.0);
        assert_eq!(m.recall, 1.0);
        assert_eq!(m.f1, 1.0);
        assert_eq!(m.fpr, 0.0);
        assert_eq!(m.fnr, 0.0);
    }

    #[test]
    fn mixed_counts_match_hand_computation() {
        let m = compute_metrics(&cm(2, 1, 10, 3)).unwrap();
        assert!((m.precision - 2.0 / 3.0).abs() < 1e-15);
        assert!((m.recall - 0.4).abs() < 1e-15);
        assert!((m.f1 - 0.5).abs() < 1e-15);
        assert!((m.fpr - 1.0 / 11.0).abs() < 1e-15);
        assert!((m.fnr - 0.6).abs() < 1e-15);
        assert!((m.accuracy - 12.0 / 16.0).abs() < 1e-15);
    }

    #[test]
    fn degenerate_no_positive_case_uses_conventions() {
        let m = compute_metrics(&cm(0, 0, 5, 0)).unwrap();
        assert_eq!(m.precision, 0.0);
        assert_eq!(m.recall, 0.0);
        assert_eq!(m.f1, 0.0);
        assert_eq!(m.accuracy, 1.0);
        assert_eq!(m.fpr, 0.0);
        assert_eq!(m.fnr, 0.0);
    }

    #[test]
    fn empty_matrix_is_an_error() {
        assert!(matches!(
            compute_metrics(&cm(0, 0, 0, 0)),
            Err(EvalError::EmptyEvaluation)
        ));
    }

    fn tiny_dataset(n: usize) -> Vec<Layer3Message> {
        let catalog = MessageCatalog::default();
        let mut out = Vec::new();
        let mut ue = 0;
        while out.len() < n {
            for mut m in catalog.canonical_session(ue, Tmsi(10 + ue as u32), 5) {
                if out.len() == n {
                    break;
                }
                m.seq = out.len() as u64;
                out.push(m);
            }
            ue += 1;
        }
        out
    }

    #[test]
    fn scripted_all_normal_yields_no_positives() {
        let mut dataset = tiny_dataset(30);
        dataset[7].label = Label::BlindDos;
        dataset[20].label = Label::BlindDos;
        let mut backend = ScriptedBackend::new(vec!["Normal".to_string(); 30]);
        let opts = EvalOptions { llm_eval_from: 0, ..EvalOptions::default() };
        let report =
            run_llm_experiment(&dataset, &mut backend, &PromptTemplate::default(), 3, &opts)
                .unwrap();
        assert_eq!(report.cm.tp, 0);
        assert_eq!(report.cm.fn_, 2);
        assert_eq!(report.cm.fp, 0);
        assert_eq!(report.metrics.unwrap().fpr, 0.0);
        assert_eq!(report.messages_evaluated, 30);
        assert_eq!(report.indeterminate, 0);
    }

    #[test]
    fn fixture_determined_confusion_counts() {
        let mut dataset = tiny_dataset(10);
        dataset[4].label = Label::BlindDos;
        // responses: seq 2 and 4 anomalous, seq 9 garbage (indeterminate)
        let responses: Vec<String> = (0..10)
            .map(|i| match i {
                2 | 4 => "Anomalous".to_string(),
                9 => "???".to_string(),
                _ => "Normal".to_string(),
            })
            .collect();
        let mut backend = ScriptedBackend::new(responses);
        let opts = EvalOptions::default();
        let report =
            run_llm_experiment(&dataset, &mut backend, &PromptTemplate::default(), 2, &opts)
                .unwrap();
        assert_eq!(report.cm, cm(1, 1, 8, 0));
        assert_eq!(report.indeterminate, 1);
        let m = report.metrics.unwrap();
        assert_eq!(m.precision, 0.5);
        assert_eq!(m.recall, 1.0);
        assert!((m.f1 - 2.0 / 3.0).abs() < 1e-15);
    }

    #[test]
    fn empty_dataset_is_empty_evaluation() {
        let mut backend = ScriptedBackend::new(Vec::new());
        let opts = EvalOptions::default();
        assert!(matches!(
            run_llm_experiment(&[], &mut backend, &PromptTemplate::default(), 1, &opts),
            Err(EvalError::EmptyEvaluation)
        ));
    }

    #[test]
    fn sweep_records_errors_and_continues() {
        let template = PromptTemplate::default();
        let opts = EvalOptions::default();
        let reports = sweep_llm(&[], &template, &opts, |_| {
            Box::new(ScriptedBackend::new(Vec::new()))
        });
        assert_eq!(reports.len(), 10);
        for r in &reports {
            assert!(r.error.as_deref().unwrap().contains("empty evaluation"));
            assert!(r.metrics.is_none());
        }
    }

    #[test]
    fn csv_and_table_have_one_row_per_report() {
        let mut dataset = tiny_dataset(12);
        dataset[5].label = Label::BlindDos;
        let opts = EvalOptions { llm_eval_from: 0, ..EvalOptions::default() };
        let reports = sweep_llm(&dataset, &PromptTemplate::default(), &opts, |_| {
            Box::new(ScriptedBackend::new(vec!["Normal".to_string(); 12]))
        });
        let dir = tempfile::tempdir().unwrap();
        let csv_path = dir.path().join("reports.csv");
        write_combined_csv(&reports, &csv_path).unwrap();
        let text = std::fs::read_to_string(&csv_path).unwrap();
        assert_eq!(text.lines().count(), 11);
        assert!(text.lines().next().unwrap().starts_with("detector,window_size"));
        let table = render_table(&reports);
        assert_eq!(table.lines().count(), 11);
    }

    #[test]
    fn report_json_round_trips() {
        let mut dataset = tiny_dataset(12);
        dataset[5].label = Label::BlindDos;
        let mut backend = ScriptedBackend::new(vec!["Normal".to_string(); 12]);
        let opts = EvalOptions::default();
        let report =
            run_llm_experiment(&dataset, &mut backend, &PromptTemplate::default(), 1, &opts)
                .unwrap();
        let dir = tempfile::tempdir().unwrap();
        let path = write_report_json(&report, dir.path()).unwrap();
        let back: EvalReport =
            serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
        assert_eq!(back, report);
    }
}
