//! Simulated O-RAN Shared Data Layer.
//!
//! An ordered in-memory store that producers append to, detectors poll, and
//! any other xApp may mutate in place. There is deliberately no caller
//! identity anywhere in this interface: the absence of authentication on the
//! shared store is the modelled vulnerability.

use std::fmt;
use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::Path;
use std::sync::RwLock;

use serde::Serialize;

use crate::hypoglyph::{self, SubstitutionMap};
use crate::message::{Layer3Message, MessageView};

#[derive(Debug)]
pub enum SdlError {
    /// `append` requires seq to equal the current record count.
    OutOfOrderSeq { expected: u64, found: u64 },
    /// `mutate` targeted a seq that does not exist.
    NotFound { seq: u64 },
}

impl fmt::Display for SdlError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SdlError::OutOfOrderSeq { expected, found } => {
                write!(f, "out-of-order append: expected seq {expected}, got {found}")
            }
            SdlError::NotFound { seq } => write!(f, "no record with seq {seq}"),
        }
    }
}

impl std::error::Error for SdlError {}

/// One SDL entry: the stored message plus a version counter bumped on every
/// mutation.
#[derive(Debug, Clone, PartialEq)]
pub struct SdlRecord {
    pub message: Layer3Message,
    pub version: u32,
}

#[derive(Serialize)]
struct SnapshotRecord<'a> {
    #[serde(flatten)]
    message: &'a Layer3Message,
    version: u32,
}

/// Independent read position of one polling detector.
#[derive(Debug, Default, Clone)]
pub struct SdlCursor {
    next: usize,
}

impl SdlCursor {
    pub fn new() -> SdlCursor {
        SdlCursor::default()
    }

    pub fn position(&self) -> u64 {
        self.next as u64
    }
}

/// The shared store. A single writer appends and mutates; any number of
/// readers poll concurrently, each with its own [`SdlCursor`].
#[derive(Debug, Default)]
pub struct SdlStore {
    records: RwLock<Vec<SdlRecord>>,
}

impl SdlStore {
    pub fn new() -> SdlStore {
        SdlStore::default()
    }

    pub fn len(&self) -> usize {
        self.records.read().unwrap().len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Appends the next message. The message's seq must equal the current
    /// record count; the record becomes visible to all subsequent reads.
    pub fn append(&self, message: Layer3Message) -> Result<(), SdlError> {
        let mut records = self.records.write().unwrap();
        let expected = records.len() as u64;
        if message.seq != expected {
            return Err(SdlError::OutOfOrderSeq { expected, found: message.seq });
        }
        records.push(SdlRecord { message, version: 1 });
        Ok(())
    }

    /// Returns detector views of every record at or past the cursor, in seq
    /// order, and advances the cursor to the current count.
    pub fn poll_new(&self, cursor: &mut SdlCursor) -> Vec<MessageView> {
        let records = self.records.read().unwrap();
        let views = records[cursor.next..]
            .iter()
            .map(|r| r.message.view())
            .collect();
        cursor.next = records.len();
        views
    }

    /// Rewrites the name of the record at `seq` through the substitution map.
    /// Succeeds for any caller; the store performs no authorisation. The
    /// version is bumped unconditionally; `manipulated` is set only when the
    /// name actually changed.
    pub fn mutate(&self, seq: u64, map: &SubstitutionMap) -> Result<(), SdlError> {
        let mut records = self.records.write().unwrap();
        let record = records
            .get_mut(seq as usize)
            .ok_or(SdlError::NotFound { seq })?;
        let new_name = hypoglyph::apply(&record.message.name, map);
        if new_name != record.message.name {
            record.message.name = new_name;
            record.message.manipulated = true;
        }
        record.version += 1;
        Ok(())
    }

    /// Clone of the record at `seq`, mainly for inspection in tests and
    /// examples.
    pub fn record(&self, seq: u64) -> Option<SdlRecord> {
        self.records.read().unwrap().get(seq as usize).cloned()
    }

    /// Writes the store contents in the dataset JSON-lines format with an
    /// additional `version` key per record.
    pub fn snapshot(&self, path: &Path) -> std::io::Result<()> {
        let records = self.records.read().unwrap();
        let mut out = BufWriter::new(File::create(path)?);
        writeln!(out, "{}", crate::dataset::HEADER)?;
        for r in records.iter() {
            let line = serde_json::to_string(&SnapshotRecord {
                message: &r.message,
                version: r.version,
            })
            .expect("record serialization is infallible");
            writeln!(out, "{line}")?;
        }
        out.flush()
    }
}
