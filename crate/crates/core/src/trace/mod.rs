//! Recorded sessions: a line-delimited log of transcripts and hand poses,
//! deterministic replay through the full pipeline, and per-session phase
//! and modality metrics.
//!
//! One record per line:
//!
//! ```text
//! {"t":2500,"kind":"transcript","payload":{"text":"create cube"}}
//! {"t":2533,"kind":"landmark","payload":{"hand":"right","points":[[0.5,0.5,0.0], ...]}}
//! ```

mod builder;
mod metrics;
mod replay;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::gesture::{Hand, LandmarkFrame, Landmarks, LANDMARK_COUNT};

pub use builder::{hand_pose, TraceBuilder, FRAME_MS};
pub use metrics::{metrics, ModalityTime, PhaseDurations, SessionMetrics};
pub use replay::{
    directives, replay, ActionRecord, BracketEdge, PinchEdge, ReplayError, ReplayOptions,
    ReplayOutput, StepRecord,
};

#[allow(clippy::large_enum_variant)]
#[derive(Debug, Clone, PartialEq)]
pub enum TraceRecord {
    Transcript { t: u64, text: String },
    Landmark(LandmarkFrame),
}

impl TraceRecord {
    pub fn t(&self) -> u64 {
        match self {
            TraceRecord::Transcript { t, .. } => *t,
            TraceRecord::Landmark(f) => f.t,
        }
    }

    pub fn to_json(&self) -> String {
        #[derive(Serialize)]
        struct Line<'a> {
            t: u64,
            kind: &'static str,
            payload: Body<'a>,
        }
        #[derive(Serialize)]
        #[serde(untagged)]
        enum Body<'a> {
            Text { text: &'a str },
            Pose { hand: Hand, points: &'a Landmarks },
        }
        let line = match self {
            TraceRecord::Transcript { t, text } => Line {
                t: *t,
                kind: "transcript",
                payload: Body::Text { text },
            },
            TraceRecord::Landmark(f) => Line {
                t: f.t,
                kind: "landmark",
                payload: Body::Pose {
                    hand: f.hand,
                    points: &f.points,
                },
            },
        };
        serde_json::to_string(&line).expect("trace records always serialize")
    }
}

#[derive(Debug, Error, PartialEq)]
pub enum TraceError {
    #[error("line {line}: {message}")]
    Malformed { line: usize, message: String },
    #[error("line {line}: t={t} is earlier than the previous record (t={prev})")]
    OutOfOrder { line: usize, t: u64, prev: u64 },
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawRecord {
    t: u64,
    kind: String,
    payload: serde_json::Value,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct TextPayload {
    text: String,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct PosePayload {
    hand: Hand,
    points: Vec<[f64; 3]>,
}

fn parse_line(text: &str) -> Result<TraceRecord, String> {
    let raw: RawRecord = serde_json::from_str(text).map_err(|e| e.to_string())?;
    match raw.kind.as_str() {
        "transcript" => {
            let p: TextPayload = serde_json::from_value(raw.payload)
                .map_err(|e| format!("transcript payload: {e}"))?;
            Ok(TraceRecord::Transcript {
                t: raw.t,
                text: p.text,
            })
        }
        "landmark" => {
            let p: PosePayload = serde_json::from_value(raw.payload)
                .map_err(|e| format!("landmark payload: {e}"))?;
            let n = p.points.len();
            let points: Landmarks = p.points.try_into().map_err(|_| {
                format!("landmark payload: expected {LANDMARK_COUNT} points, got {n}")
            })?;
            LandmarkFrame::new(raw.t, p.hand, points)
                .map(TraceRecord::Landmark)
                .map_err(|e| format!("landmark payload: {e}"))
        }
        other => Err(format!("unknown record kind {other:?}")),
    }
}

/// Parses a JSONL trace. Blank lines are allowed; everything else must be a
/// valid record, and timestamps must not decrease.
pub fn parse_trace(text: &str) -> Result<Vec<TraceRecord>, TraceError> {
    let mut out: Vec<TraceRecord> = Vec::new();
    for (i, line) in text.lines().enumerate() {
        let line_no = i + 1;
        if line.trim().is_empty() {
            continue;
        }
        let rec = parse_line(line).map_err(|message| TraceError::Malformed {
            line: line_no,
            message,
        })?;
        if let Some(prev) = out.last() {
            if rec.t() < prev.t() {
                return Err(TraceError::OutOfOrder {
                    line: line_no,
                    t: rec.t(),
                    prev: prev.t(),
                });
            }
        }
        out.push(rec);
    }
    Ok(out)
}

pub fn to_jsonl(records: &[TraceRecord]) -> String {
    let mut out = String::new();
    for r in records {
        out.push_str(&r.to_json());
        out.push('\n');
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pose_line(t: u64, n: usize) -> String {
        let pts = vec!["[0.5,0.5,0.0]"; n].join(",");
        format!(r#"{{"t":{t},"kind":"landmark","payload":{{"hand":"left","points":[{pts}]}}}}"#)
    }

    #[test]
    fn round_trip() {
        let mut points = [[0.25, 0.5, -0.125]; LANDMARK_COUNT];
        points[3] = [0.1, 0.2, 0.3];
        let recs = vec![
            TraceRecord::Transcript {
                t: 0,
                text: "create cube".into(),
            },
            TraceRecord::Landmark(LandmarkFrame::new(33, Hand::Right, points).unwrap()),
        ];
        let text = to_jsonl(&recs);
        assert!(text.starts_with(r#"{"t":0,"kind":"transcript","payload":{"text":"create cube"}}"#));
        assert_eq!(parse_trace(&text).unwrap(), recs);
    }

    #[test]
    fn errors_carry_line_numbers() {
        let ok = r#"{"t":0,"kind":"transcript","payload":{"text":"scale"}}"#;
        let cases = [
            format!("{ok}\n\nnot json"),
            format!("{ok}\n{}", pose_line(5, 20)),
            format!("{ok}\n{}", r#"{"t":1,"kind":"video","payload":{}}"#),
            format!(
                "{ok}\n{}",
                r#"{"t":1,"kind":"transcript","payload":{"hand":"left"}}"#
            ),
            format!(
                "{ok}\n{}",
                r#"{"t":-1,"kind":"transcript","payload":{"text":"x"}}"#
            ),
        ];
        let lines = [3, 2, 2, 2, 2];
        for (c, want) in cases.iter().zip(lines) {
            match parse_trace(c) {
                Err(TraceError::Malformed { line, .. }) => assert_eq!(line, want, "{c}"),
                other => panic!("{c}: {other:?}"),
            }
        }
        assert_eq!(parse_trace(&pose_line(0, 21)).unwrap().len(), 1);
    }

    #[test]
    fn decreasing_time_is_rejected() {
        let text = format!(
            "{}\n{}\n",
            r#"{"t":10,"kind":"transcript","payload":{"text":"scale"}}"#,
            pose_line(9, 21)
        );
        assert_eq!(
            parse_trace(&text),
            Err(TraceError::OutOfOrder {
                line: 2,
                t: 9,
                prev: 10
            })
        );
    }
}
