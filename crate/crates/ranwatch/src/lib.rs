//! Desk-scale testbed for data-manipulation attacks on O-RAN anomaly
//! detection.
//!
//! A simulated Shared Data Layer ([`sdl`]) holds a stream of 5G Layer-3
//! messages ([`message`]). A malicious writer injects Blind DoS setup
//! requests and rewrites message names with Unicode look-alikes
//! ([`forge`], [`hypoglyph`]). Two detector pipelines consume the stream
//! through overlapping windows ([`window`]): a fixed-vocabulary
//! autoencoder ([`ae`]) that cannot encode manipulated names, and an
//! LLM-backed classifier ([`llm`]) that processes any byte sequence. The
//! harness ([`eval`]) runs both across window sizes 1..=10 and reports
//! detection quality and per-message latency.
//!
//! Start with the `examples/` directory: each example is a runnable tour
//! of one capability, from forging a dataset to the full side-by-side
//! comparison. The `ranwatch` binary wraps the same pipeline for headless
//! use.

pub mod ae;
pub mod cli;
pub mod config;
pub mod dataset;
pub mod eval;
pub mod forge;
pub mod hypoglyph;
pub mod llm;
pub mod message;
pub mod sdl;
pub mod window;

pub use ae::{AeModel, EncodingError, TrainParams, Vocabulary};
pub use config::RunConfig;
pub use eval::{ConfusionMatrix, EvalOptions, EvalReport, Metrics};
pub use forge::{ForgeConfig, ForgedDataset, TRAIN_SPLIT};
pub use hypoglyph::{ConfusableTable, SubstitutionMap};
pub use llm::{Backend, PromptTemplate, Verdict, VerdictLabel};
pub use message::{Label, Layer3Message, MessageCatalog, MessageView, Protocol, Tmsi};
pub use sdl::{SdlCursor, SdlRecord, SdlStore};
pub use window::DetectionWindow;
