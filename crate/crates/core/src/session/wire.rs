use std::fmt;

use serde::{Deserialize, Serialize};

use crate::directive::Directive;
use crate::fusion::InputEvent;
use crate::lexicon::LexiconEntry;
use crate::scene::SceneHash;

pub type ClientId = u64;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Hello {
    pub session_id: String,
    pub client_name: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Welcome {
    pub client_id: ClientId,
    /// Canonical scene JSON, carried as a string so it stays byte-exact.
    pub snapshot: String,
    /// The voice command library, for display.
    pub hud: Vec<LexiconEntry>,
    pub seq: u64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Delta {
    pub seq: u64,
    pub directives: Vec<Directive>,
    pub scene_hash: SceneHash,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ErrorCode {
    BadHello,
    UnknownClient,
    ApplyFailed,
    BadEvent,
    BadMessage,
}

impl ErrorCode {
    pub fn as_str(self) -> &'static str {
        match self {
            ErrorCode::BadHello => "bad_hello",
            ErrorCode::UnknownClient => "unknown_client",
            ErrorCode::ApplyFailed => "apply_failed",
            ErrorCode::BadEvent => "bad_event",
            ErrorCode::BadMessage => "bad_message",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WireError {
    pub code: ErrorCode,
    pub detail: String,
}

impl WireError {
    pub fn new(code: ErrorCode, detail: impl Into<String>) -> Self {
        WireError {
            code,
            detail: detail.into(),
        }
    }
}

impl fmt::Display for WireError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {}", self.code.as_str(), self.detail)
    }
}

impl std::error::Error for WireError {}

/// One JSON text frame on the session socket.
#[allow(clippy::large_enum_variant)]
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type")]
pub enum WireMessage {
    Hello(Hello),
    Welcome(Welcome),
    Event { event: InputEvent },
    Delta(Delta),
    Error(WireError),
}

impl WireMessage {
    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("wire messages always serialize")
    }

    pub fn from_json(text: &str) -> Result<Self, WireError> {
        serde_json::from_str(text).map_err(|e| WireError::new(ErrorCode::BadMessage, e.to_string()))
    }
}

impl From<WireError> for WireMessage {
    fn from(e: WireError) -> Self {
        WireMessage::Error(e)
    }
}
