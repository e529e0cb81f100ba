//! Layer-3 (RRC/NAS) message data model and the benign message catalog.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

/// Layer-3 control-plane protocol of a message.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Protocol {
    #[serde(rename = "RRC")]
    Rrc,
    #[serde(rename = "NAS")]
    Nas,
}

impl fmt::Display for Protocol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Protocol::Rrc => "RRC",
            Protocol::Nas => "NAS",
        })
    }
}

/// Ground-truth label. Never exposed to detectors.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Label {
    Normal,
    #[serde(rename = "BlindDoS")]
    BlindDos,
}

/// Temporary Mobile Subscriber Identity, rendered as 8 lowercase hex digits.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Tmsi(pub u32);

impl fmt::Display for Tmsi {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:08x}", self.0)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TmsiParseError(pub String);

impl fmt::Display for TmsiParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "TMSI must be exactly 8 lowercase hex digits, got {:?}", self.0)
    }
}

impl std::error::Error for TmsiParseError {}

impl FromStr for Tmsi {
    type Err = TmsiParseError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        if s.len() != 8 || !s.bytes().all(|b| matches!(b, b'0'..=b'9' | b'a'..=b'f')) {
            return Err(TmsiParseError(s.to_string()));
        }
        Ok(Tmsi(u32::from_str_radix(s, 16).expect("validated hex")))
    }
}

impl Serialize for Tmsi {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for Tmsi {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// One RRC or NAS message record as stored in the dataset and the SDL.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Layer3Message {
    /// Position in the global stream, 0-based and gap-free per dataset.
    pub seq: u64,
    /// Logical UE index.
    pub ue_id: u64,
    pub protocol: Protocol,
    /// Message name; may contain non-ASCII codepoints after manipulation.
    pub name: String,
    pub tmsi: Tmsi,
    pub rnti: u16,
    /// Auxiliary key/value fields, empty by default.
    #[serde(default)]
    pub params: Vec<(String, String)>,
    /// Ground truth, stripped from detector views.
    pub label: Label,
    /// True iff the hypoglyph attacker altered this record.
    pub manipulated: bool,
}

impl Layer3Message {
    /// The detector-facing view: everything except `label` and `manipulated`.
    pub fn view(&self) -> MessageView {
        MessageView {
            seq: self.seq,
            ue_id: self.ue_id,
            protocol: self.protocol,
            name: self.name.clone(),
            tmsi: self.tmsi,
            rnti: self.rnti,
            params: self.params.clone(),
        }
    }
}

/// What detectors are allowed to see: a [`Layer3Message`] without its
/// ground-truth fields.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MessageView {
    pub seq: u64,
    pub ue_id: u64,
    pub protocol: Protocol,
    pub name: String,
    pub tmsi: Tmsi,
    pub rnti: u16,
    pub params: Vec<(String, String)>,
}

impl MessageView {
    /// One-line rendering used in detection prompts.
    pub fn render(&self) -> String {
        let mut line = format!("{} | {} | {} | {}", self.protocol, self.name, self.tmsi, self.rnti);
        for (k, v) in &self.params {
            line.push_str(&format!(" | {k}={v}"));
        }
        line
    }
}

/// Ordered list of legal benign message types in canonical session order.
#[derive(Debug, Clone)]
pub struct MessageCatalog {
    entries: Vec<(Protocol, &'static str)>,
}

/// The canonical 12-message attach session: RRC connection setup, NAS
/// registration and authentication, RRC security activation, NAS accept,
/// RRC reconfiguration, release.
const DEFAULT_CATALOG: &[(Protocol, &str)] = &[
    (Protocol::Rrc, "RRCSetupRequest"),
    (Protocol::Rrc, "RRCSetup"),
    (Protocol::Rrc, "RRCSetupComplete"),
    (Protocol::Nas, "RegistrationRequest"),
    (Protocol::Nas, "AuthenticationRequest"),
    (Protocol::Nas, "AuthenticationResponse"),
    (Protocol::Rrc, "SecurityModeCommand"),
    (Protocol::Rrc, "SecurityModeComplete"),
    (Protocol::Nas, "RegistrationAccept"),
    (Protocol::Rrc, "RRCReconfiguration"),
    (Protocol::Rrc, "RRCReconfigurationComplete"),
    (Protocol::Rrc, "RRCRelease"),
];

impl Default for MessageCatalog {
    fn default() -> Self {
        let catalog = MessageCatalog {
            entries: DEFAULT_CATALOG.to_vec(),
        };
        debug_assert_eq!(catalog.entries[0].1, "RRCSetupRequest");
        debug_assert!(catalog.entries.iter().all(|(_, n)| n.is_ascii()));
        catalog
    }
}

impl MessageCatalog {
    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn entries(&self) -> &[(Protocol, &'static str)] {
        &self.entries
    }

    pub fn names(&self) -> impl Iterator<Item = &'static str> + '_ {
        self.entries.iter().map(|(_, n)| *n)
    }

    pub fn contains_name(&self, name: &str) -> bool {
        self.entries.iter().any(|(_, n)| *n == name)
    }

    /// One benign session for a UE: the catalog's messages in canonical
    /// order, all Normal and unmanipulated. `seq` is left at zero; it is
    /// assigned when the dataset is assembled.
    pub fn canonical_session(&self, ue_id: u64, tmsi: Tmsi, rnti: u16) -> Vec<Layer3Message> {
        self.entries
            .iter()
            .map(|&(protocol, name)| Layer3Message {
                seq: 0,
                ue_id,
                protocol,
                name: name.to_string(),
                tmsi,
                rnti,
                params: Vec::new(),
                label: Label::Normal,
                manipulated: false,
            })
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn session_starts_with_setup_request() {
        let catalog = MessageCatalog::default();
        let session = catalog.canonical_session(0, Tmsi(1), 17);
        assert_eq!(session[0].name, "RRCSetupRequest");
        assert_eq!(session[0].protocol, Protocol::Rrc);
        assert_eq!(session.len(), 12);
    }

    #[test]
    fn session_messages_are_all_normal() {
        let catalog = MessageCatalog::default();
        for msg in catalog.canonical_session(5, Tmsi(0xdeadbeef), 40000) {
            assert_eq!(msg.label, Label::Normal);
            assert!(!msg.manipulated);
        }
    }

    #[test]
    fn session_propagates_identifiers() {
        let catalog = MessageCatalog::default();
        for msg in catalog.canonical_session(3, Tmsi(0xabc), 99) {
            assert_eq!(msg.ue_id, 3);
            assert_eq!(msg.tmsi, Tmsi(0xabc));
            assert_eq!(msg.rnti, 99);
        }
    }

    #[test]
    fn catalog_names_are_ascii() {
        let catalog = MessageCatalog::default();
        assert!(catalog.names().all(|n| n.is_ascii()));
        assert!(catalog.contains_name("RRCSetupRequest"));
        assert!(!catalog.contains_name("NoSuchMessage"));
    }

    #[test]
    fn tmsi_renders_as_lowercase_hex() {
        assert_eq!(Tmsi(1).to_string(), "00000001");
        assert_eq!(Tmsi(0xdeadbeef).to_string(), "deadbeef");
        assert_eq!("00f0aa01".parse::<Tmsi>().unwrap(), Tmsi(0x00f0aa01));
        assert!("00F0AA01".parse::<Tmsi>().is_err());
        assert!("123".parse::<Tmsi>().is_err());
        assert!("0123456z".parse::<Tmsi>().is_err());
    }

    #[test]
    fn detector_view_strips_ground_truth() {
        let msg = Layer3Message {
            seq: 7,
            ue_id: 2,
            protocol: Protocol::Nas,
            name: "RegistrationRequest".into(),
            tmsi: Tmsi(0x42),
            rnti: 1000,
            params: vec![("cause".into(), "mo-Signalling".into())],
            label: Label::BlindDos,
            manipulated: true,
        };
        let json = serde_json::to_string(&msg.view()).unwrap();
        assert!(!json.contains("label"));
        assert!(!json.contains("manipulated"));
        assert!(json.contains("\"tmsi\":\"00000042\""));
    }

    #[test]
    fn view_render_is_one_line() {
        let msg = Layer3Message {
            seq: 0,
            ue_id: 0,
            protocol: Protocol::Rrc,
            name: "RRCSetup".into(),
            tmsi: Tmsi(0x2a),
            rnti: 17,
            params: Vec::new(),
            label: Label::Normal,
            manipulated: false,
        };
        assert_eq!(msg.view().render(), "RRC | RRCSetup | 0000002a | 17");
    }
}
