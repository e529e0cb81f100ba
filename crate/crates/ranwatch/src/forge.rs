//! Deterministic synthesis of the evaluation dataset: UE-grouped benign
//! sessions, mid-session Blind DoS injections, and hypoglyph target
//! selection.

use std::collections::HashSet;
use std::fmt;

use rand::seq::index::sample;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::hypoglyph::{self, SubstitutionMap};
use crate::message::{Label, Layer3Message, MessageCatalog, Protocol, Tmsi};

/// Stream position splitting AE training data (first 700 normal messages)
/// from the test region. Hypoglyph targets are always selected past this
/// point so the test split contains them.
pub const TRAIN_SPLIT: u64 = 700;

// Distinct deterministic RNG streams per operation, so each forge step is
// reproducible on its own given the same config.
const BENIGN_STREAM: u64 = 0;
const INJECT_STREAM: u64 = 0x626c696e64; // "blind"
const SELECT_STREAM: u64 = 0x6879706f; // "hypo"

#[derive(Debug)]
pub enum ForgeError {
    BadConfig(String),
    InsufficientCandidates {
        kind: &'static str,
        needed: usize,
        available: usize,
    },
}

impl fmt::Display for ForgeError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ForgeError::BadConfig(msg) => write!(f, "invalid forge config: {msg}"),
            ForgeError::InsufficientCandidates { kind, needed, available } => write!(
                f,
                "need {needed} {kind} candidates past seq {TRAIN_SPLIT}, only {available} available"
            ),
        }
    }
}

impl std::error::Error for ForgeError {}

/// Dataset synthesis parameters. The defaults reproduce the experiment
/// counts: 1,016 messages, 20 Blind DoS, 5 hypoglyphed (2 attacks, 3
/// normals).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct ForgeConfig {
    pub seed: u64,
    pub n_ue: u64,
    pub target_total: usize,
    pub n_attacks: usize,
    pub n_hypoglyph_attacks: usize,
    pub n_hypoglyph_normals: usize,
}

impl Default for ForgeConfig {
    fn default() -> Self {
        // 83 UEs x 12-message sessions = 996 benign + 20 injected = 1,016.
        ForgeConfig {
            seed: 42,
            n_ue: 83,
            target_total: 1016,
            n_attacks: 20,
            n_hypoglyph_attacks: 2,
            n_hypoglyph_normals: 3,
        }
    }
}

impl ForgeConfig {
    fn validate(&self, session_len: usize) -> Result<(), ForgeError> {
        if self.n_attacks >= self.target_total {
            return Err(ForgeError::BadConfig(format!(
                "n_attacks {} must be below target_total {}",
                self.n_attacks, self.target_total
            )));
        }
        if self.n_hypoglyph_attacks > self.n_attacks {
            return Err(ForgeError::BadConfig(format!(
                "n_hypoglyph_attacks {} exceeds n_attacks {}",
                self.n_hypoglyph_attacks, self.n_attacks
            )));
        }
        if self.n_ue == 0 {
            return Err(ForgeError::BadConfig("n_ue must be positive".into()));
        }
        let benign = self.target_total - self.n_attacks;
        let ue = self.n_ue as usize;
        // whole sessions for all UEs but the last, which may be truncated
        if benign <= (ue - 1) * session_len || benign > ue * session_len {
            return Err(ForgeError::BadConfig(format!(
                "{benign} benign messages cannot be split over {ue} UEs with \
                 {session_len}-message sessions (one possibly-truncated final session)"
            )));
        }
        Ok(())
    }
}

/// Benign traffic: one session per UE, grouped contiguously by UE, with
/// distinct per-UE TMSIs. Yields `target_total - n_attacks` messages, all
/// Normal, with seq assigned 0..N-1.
pub fn generate_benign(config: &ForgeConfig) -> Result<Vec<Layer3Message>, ForgeError> {
    let catalog = MessageCatalog::default();
    config.validate(catalog.len())?;
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed.wrapping_add(BENIGN_STREAM));
    let benign_count = config.target_total - config.n_attacks;

    let mut used_tmsis = HashSet::new();
    let mut messages = Vec::with_capacity(benign_count);
    for ue in 0..config.n_ue {
        let tmsi = loop {
            let candidate = Tmsi(rng.gen::<u32>());
            if used_tmsis.insert(candidate) {
                break candidate;
            }
        };
        let rnti: u16 = rng.gen_range(1..=u16::MAX);
        for mut msg in catalog.canonical_session(ue, tmsi, rnti) {
            if messages.len() == benign_count {
                break;
            }
            msg.seq = messages.len() as u64;
            messages.push(msg);
        }
    }
    debug_assert_eq!(messages.len(), benign_count);
    Ok(messages)
}

/// Contiguous run of one UE's messages within a benign stream.
struct UeBlock {
    start: usize,
    len: usize,
    ue_id: u64,
    tmsi: Tmsi,
}

fn ue_blocks(benign: &[Layer3Message]) -> Vec<UeBlock> {
    let mut blocks: Vec<UeBlock> = Vec::new();
    for (i, msg) in benign.iter().enumerate() {
        match blocks.last_mut() {
            Some(block) if block.ue_id == msg.ue_id => block.len += 1,
            _ => blocks.push(UeBlock {
                start: i,
                len: 1,
                ue_id: msg.ue_id,
                tmsi: msg.tmsi,
            }),
        }
    }
    blocks
}

/// Injects `n_attacks` Blind DoS messages: each is an `RRCSetupRequest`
/// bearing the TMSI of a UE that already appeared in the stream, a random
/// RNTI, and a position strictly inside a host UE's session (never at a
/// session start). The result is renumbered 0..N-1.
pub fn inject_blind_dos(
    benign: &[Layer3Message],
    config: &ForgeConfig,
) -> Result<Vec<Layer3Message>, ForgeError> {
    if config.n_attacks == 0 {
        return Ok(benign.to_vec());
    }
    if benign.is_empty() {
        return Err(ForgeError::BadConfig(
            "cannot inject attacks into an empty benign stream".into(),
        ));
    }
    let blocks = ue_blocks(benign);
    let hosts: Vec<usize> = (0..blocks.len()).filter(|&b| blocks[b].len >= 2).collect();
    if hosts.is_empty() {
        return Err(ForgeError::BadConfig(
            "no UE session is long enough to host a mid-session injection".into(),
        ));
    }

    let mut rng = ChaCha8Rng::seed_from_u64(config.seed.wrapping_add(INJECT_STREAM));
    // (insertion position in benign indexing, message), kept in draw order
    let mut injections: Vec<(usize, Layer3Message)> = Vec::with_capacity(config.n_attacks);
    for _ in 0..config.n_attacks {
        let host_index = hosts[rng.gen_range(0..hosts.len())];
        let host = &blocks[host_index];
        let offset = rng.gen_range(1..host.len);
        // reuse the TMSI of a UE whose session already ran; the host's own
        // when it is the very first UE
        let victim = if host_index > 0 {
            &blocks[rng.gen_range(0..host_index)]
        } else {
            host
        };
        let rnti: u16 = rng.gen_range(1..=u16::MAX);
        injections.push((
            host.start + offset,
            Layer3Message {
                seq: 0,
                ue_id: host.ue_id,
                protocol: Protocol::Rrc,
                name: "RRCSetupRequest".to_string(),
                tmsi: victim.tmsi,
                rnti,
                params: Vec::new(),
                label: Label::BlindDos,
                manipulated: false,
            },
        ));
    }
    injections.sort_by_key(|(pos, _)| *pos);

    let mut out = Vec::with_capacity(benign.len() + injections.len());
    let mut pending = injections.into_iter().peekable();
    for (i, msg) in benign.iter().enumerate() {
        while pending.peek().is_some_and(|(pos, _)| *pos == i) {
            out.push(pending.next().unwrap().1);
        }
        out.push(msg.clone());
    }
    for (_, msg) in pending {
        out.push(msg);
    }
    for (i, msg) in out.iter_mut().enumerate() {
        msg.seq = i as u64;
    }
    Ok(out)
}

/// Picks which messages the hypoglyph attacker will manipulate:
/// `n_hypoglyph_attacks` Blind DoS seqs and `n_hypoglyph_normals` normal
/// seqs, all past [`TRAIN_SPLIT`]. Returned sorted ascending.
pub fn select_hypoglyph_targets(
    dataset: &[Layer3Message],
    config: &ForgeConfig,
) -> Result<Vec<u64>, ForgeError> {
    let attacks: Vec<u64> = dataset
        .iter()
        .filter(|m| m.label == Label::BlindDos && m.seq > TRAIN_SPLIT)
        .map(|m| m.seq)
        .collect();
    let normals: Vec<u64> = dataset
        .iter()
        .filter(|m| m.label == Label::Normal && m.seq > TRAIN_SPLIT)
        .map(|m| m.seq)
        .collect();
    if attacks.len() < config.n_hypoglyph_attacks {
        return Err(ForgeError::InsufficientCandidates {
            kind: "BlindDoS",
            needed: config.n_hypoglyph_attacks,
            available: attacks.len(),
        });
    }
    if normals.len() < config.n_hypoglyph_normals {
        return Err(ForgeError::InsufficientCandidates {
            kind: "normal",
            needed: config.n_hypoglyph_normals,
            available: normals.len(),
        });
    }
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed.wrapping_add(SELECT_STREAM));
    let mut selected: Vec<u64> = sample(&mut rng, attacks.len(), config.n_hypoglyph_attacks)
        .iter()
        .map(|i| attacks[i])
        .chain(
            sample(&mut rng, normals.len(), config.n_hypoglyph_normals)
                .iter()
                .map(|i| normals[i]),
        )
        .collect();
    selected.sort_unstable();
    Ok(selected)
}

/// A fully forged dataset plus the seqs the hypoglyph attacker touched.
#[derive(Debug, Clone)]
pub struct ForgedDataset {
    pub messages: Vec<Layer3Message>,
    pub hypoglyph_seqs: Vec<u64>,
}

impl ForgedDataset {
    pub fn attack_count(&self) -> usize {
        self.messages.iter().filter(|m| m.label == Label::BlindDos).count()
    }

    pub fn manipulated_count(&self) -> usize {
        self.messages.iter().filter(|m| m.manipulated).count()
    }
}

/// Runs the whole forge pipeline: benign sessions, Blind DoS injection,
/// hypoglyph target selection, and manipulation with the builtin
/// substitution map.
pub fn forge_dataset(config: &ForgeConfig) -> Result<ForgedDataset, ForgeError> {
    let benign = generate_benign(config)?;
    let mut messages = inject_blind_dos(&benign, config)?;
    let hypoglyph_seqs = if config.n_hypoglyph_attacks + config.n_hypoglyph_normals > 0 {
        select_hypoglyph_targets(&messages, config)?
    } else {
        Vec::new()
    };
    let map = SubstitutionMap::builtin();
    for &seq in &hypoglyph_seqs {
        let msg = &mut messages[seq as usize];
        msg.name = hypoglyph::apply(&msg.name, &map);
        msg.manipulated = true;
    }
    Ok(ForgedDataset { messages, hypoglyph_seqs })
}
