//! Overlapping streaming windows over the message stream.
//!
//! Each newly arrived message becomes the `latest` of exactly one window,
//! packaged with its up-to-`w-1` stream predecessors and the most recent
//! earlier message from the same UE. Windows overlap: with window size `w`
//! a message appears in up to `w` successive windows.

use std::collections::HashMap;
use std::fmt;

use crate::message::MessageView;

pub const MIN_WINDOW_SIZE: usize = 1;
pub const MAX_WINDOW_SIZE: usize = 10;

#[derive(Debug, PartialEq, Eq)]
pub enum WindowError {
    /// Window size outside [1, 10].
    WindowSize(usize),
    /// Message index outside the stream.
    IndexOutOfRange { index: usize, len: usize },
}

impl fmt::Display for WindowError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            WindowError::WindowSize(w) => write!(
                f,
                "window size {w} outside [{MIN_WINDOW_SIZE}, {MAX_WINDOW_SIZE}]"
            ),
            WindowError::IndexOutOfRange { index, len } => {
                write!(f, "message index {index} outside stream of length {len}")
            }
        }
    }
}

impl std::error::Error for WindowError {}

/// The unit of detection: one new message plus its context.
#[derive(Debug, Clone, PartialEq)]
pub struct DetectionWindow {
    /// The message to classify.
    pub latest: MessageView,
    /// Up to `window_size - 1` immediately preceding messages, oldest first.
    pub context: Vec<MessageView>,
    /// Most recent earlier message with the same `ue_id` as `latest`, when
    /// one exists. May duplicate a context entry near session interiors.
    pub ue_previous: Option<MessageView>,
    pub window_size: usize,
}

fn check_window_size(w: usize) -> Result<(), WindowError> {
    if !(MIN_WINDOW_SIZE..=MAX_WINDOW_SIZE).contains(&w) {
        return Err(WindowError::WindowSize(w));
    }
    Ok(())
}

/// Builds the window for stream position `i`: context is
/// `stream[max(0, i-w+1)..i]` and `ue_previous` the last earlier same-UE
/// message.
pub fn window_for(
    stream: &[MessageView],
    i: usize,
    w: usize,
) -> Result<DetectionWindow, WindowError> {
    check_window_size(w)?;
    if i >= stream.len() {
        return Err(WindowError::IndexOutOfRange { index: i, len: stream.len() });
    }
    let start = i.saturating_sub(w - 1);
    let latest = stream[i].clone();
    let ue_previous = stream[..i]
        .iter()
        .rev()
        .find(|m| m.ue_id == latest.ue_id)
        .cloned();
    Ok(DetectionWindow {
        latest,
        context: stream[start..i].to_vec(),
        ue_previous,
        window_size: w,
    })
}

/// Streaming iterator over all windows of a stream in seq order, one window
/// per message. The same-UE lookup is incremental, so each window is ready
/// as soon as its latest message arrives.
pub struct WindowStream<'a> {
    stream: &'a [MessageView],
    w: usize,
    next: usize,
    last_seen_by_ue: HashMap<u64, usize>,
}

impl<'a> Iterator for WindowStream<'a> {
    type Item = DetectionWindow;

    fn next(&mut self) -> Option<DetectionWindow> {
        let i = self.next;
        let latest = self.stream.get(i)?.clone();
        self.next += 1;
        let start = i.saturating_sub(self.w - 1);
        let ue_previous = self
            .last_seen_by_ue
            .get(&latest.ue_id)
            .map(|&j| self.stream[j].clone());
        self.last_seen_by_ue.insert(latest.ue_id, i);
        Some(DetectionWindow {
            latest,
            context: self.stream[start..i].to_vec(),
            ue_previous,
            window_size: self.w,
        })
    }

    fn size_hint(&self) -> (usize, Option<usize>) {
        let remaining = self.stream.len() - self.next;
        (remaining, Some(remaining))
    }
}

/// Yields exactly one window per message, in seq order.
pub fn stream_windows<'a>(
    stream: &'a [MessageView],
    w: usize,
) -> Result<WindowStream<'a>, WindowError> {
    check_window_size(w)?;
    Ok(WindowStream {
        stream,
        w,
        next: 0,
        last_seen_by_ue: HashMap::new(),
    })
}
