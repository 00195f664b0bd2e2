//! Phase and modality timing for one session log.
//!
//! Attribution rules:
//! - warmup runs from the span start to the first Create (the whole span if
//!   there is none); nothing before the first Create counts elsewhere.
//! - an *interval* runs from the previous interval entry (a step with
//!   directives or a bracket change) to the current one. Intervals ending
//!   in a Create count as creation and those ending in a ViewFront count as
//!   navigation, unless a bracket is open.
//! - manipulation is the total time between bracket opens and closes; a
//!   bracket left open is closed at the span end.
//! - each speech step that produced directives or changed the bracket
//!   counts one 2.5 s chunk.
//! - gesture time is the time covered by pinch holds during which some
//!   gesture step produced directives; two hands at once count once.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use super::replay::{BracketEdge, StepRecord};
use crate::directive::Directive;
use crate::fusion::{Source, SPEECH_CHUNK_MS};
use crate::gesture::Hand;

#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct PhaseDurations {
    pub warmup: f64,
    pub creation: f64,
    pub manipulation: f64,
    pub navigation: f64,
}

impl PhaseDurations {
    pub fn total(&self) -> f64 {
        self.warmup + self.creation + self.manipulation + self.navigation
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct ModalityTime {
    pub speech_s: f64,
    pub gesture_s: f64,
}

/// All durations in seconds.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct SessionMetrics {
    pub phase_durations: PhaseDurations,
    pub modality_time: ModalityTime,
    pub per_command_counts: BTreeMap<String, u64>,
}

fn secs(ms: u64) -> f64 {
    ms as f64 / 1000.0
}

/// Computes metrics for a time-ordered log over `[span_start, span_end]`.
pub fn metrics(log: &[StepRecord], span_start: u64, span_end: u64) -> SessionMetrics {
    let span_end = span_end.max(span_start);
    let clip = |t: u64| t.clamp(span_start, span_end);
    let has = |r: &StepRecord, f: fn(&Directive) -> bool| r.directives.iter().any(f);

    let first_create = log
        .iter()
        .position(|r| has(r, |d| matches!(d, Directive::Create { .. })));
    let warmup_end = first_create.map_or(span_end, |i| clip(log[i].t));

    // milliseconds: warmup, creation, manipulation, navigation
    let mut ms = [warmup_end - span_start, 0, 0, 0];
    let mut counts: BTreeMap<String, u64> = BTreeMap::new();
    let mut speech_chunks = 0u64;
    let mut held: Vec<(u64, u64)> = Vec::new();

    let mut prev = span_start;
    let mut open_since: Option<u64> = None;
    let mut holds: BTreeMap<Hand, (u64, bool)> = BTreeMap::new();

    for (i, r) in log.iter().enumerate() {
        let t = clip(r.t);
        if let Some(c) = r.command {
            *counts.entry(c.as_str().to_string()).or_default() += 1;
        }
        let productive = !r.directives.is_empty();
        if r.source == Source::Speech && (productive || r.bracket != BracketEdge::None) {
            speech_chunks += 1;
        }

        let interval_entry = productive || r.bracket != BracketEdge::None;
        if interval_entry {
            let counted = first_create.is_some_and(|f| i > f) && open_since.is_none();
            if counted {
                if has(r, |d| matches!(d, Directive::Create { .. })) {
                    ms[1] += t - prev;
                } else if has(r, |d| matches!(d, Directive::ViewFront)) {
                    ms[3] += t - prev;
                }
            }
            prev = t;
        }
        match r.bracket {
            BracketEdge::Open if open_since.is_none() => {
                open_since = Some(t.max(warmup_end));
            }
            BracketEdge::Close => {
                if let Some(s) = open_since.take() {
                    ms[2] += t.saturating_sub(s);
                }
            }
            _ => {}
        }

        if r.source == Source::Gesture && productive {
            for h in holds.values_mut() {
                h.1 = true;
            }
        }
        if let Some(p) = r.pinch {
            if p.engaged {
                holds.insert(p.hand, (t, productive));
            } else if let Some((s, used)) = holds.remove(&p.hand) {
                if used || productive {
                    held.push((s, t));
                }
            }
        }
    }
    if let Some(s) = open_since {
        ms[2] += span_end.saturating_sub(s);
    }
    for (s, used) in holds.into_values() {
        if used {
            held.push((s, span_end));
        }
    }

    SessionMetrics {
        phase_durations: PhaseDurations {
            warmup: secs(ms[0]),
            creation: secs(ms[1]),
            manipulation: secs(ms[2]),
            navigation: secs(ms[3]),
        },
        modality_time: ModalityTime {
            speech_s: secs(speech_chunks * SPEECH_CHUNK_MS),
            gesture_s: secs(union_length(held)),
        },
        per_command_counts: counts,
    }
}

/// Total length covered by a set of intervals, overlaps counted once.
fn union_length(mut spans: Vec<(u64, u64)>) -> u64 {
    spans.sort_unstable();
    let mut total = 0;
    let mut reach = 0;
    for (a, b) in spans {
        let a = a.max(reach);
        if b > a {
            total += b - a;
            reach = b;
        }
    }
    total
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::directive::{Primitive, Transform, TransformIntent, TransformKind};
    use crate::lexicon::CommandId;
    use crate::trace::PinchEdge;

    fn entry(t_s: u64, source: Source) -> StepRecord {
        StepRecord::new(t_s * 1000, source)
    }

    fn create(t_s: u64) -> StepRecord {
        let mut r = entry(t_s, Source::Speech);
        r.command = Some(CommandId::CreateCube);
        r.directives = vec![Directive::Create {
            primitive: Primitive::Cube,
        }];
        r
    }

    fn open(t_s: u64) -> StepRecord {
        let mut r = entry(t_s, Source::Speech);
        r.command = Some(CommandId::Scale);
        r.bracket = BracketEdge::Open;
        r
    }

    fn number(t_s: u64) -> StepRecord {
        let mut r = entry(t_s, Source::Speech);
        r.directives = vec![Directive::set_transform(
            1,
            Transform::IDENTITY,
            TransformIntent::Numeric {
                kind: TransformKind::Scale,
                axis: None,
                magnitude: 1.0,
            },
        )];
        r
    }

    fn commit(t_s: u64) -> StepRecord {
        let mut r = entry(t_s, Source::Speech);
        r.command = Some(CommandId::Enter);
        r.bracket = BracketEdge::Close;
        r.directives = vec![Directive::Commit { object_id: 1 }];
        r
    }

    #[test]
    fn single_create_is_all_warmup() {
        let m = metrics(&[create(10)], 0, 10_000);
        assert_eq!(m.phase_durations.warmup, 10.0);
        assert_eq!(m.phase_durations.total(), 10.0);
        assert_eq!(m.modality_time.speech_s, 2.5);
        assert_eq!(m.per_command_counts["create_cube"], 1);
    }

    #[test]
    fn no_create_means_warmup_only() {
        let mut front = entry(4, Source::Speech);
        front.directives = vec![Directive::ViewFront];
        let m = metrics(&[front], 0, 9000);
        assert_eq!(m.phase_durations.warmup, 9.0);
        assert_eq!(m.phase_durations.navigation, 0.0);
    }

    #[test]
    fn phases_from_known_spans() {
        let mut front = entry(40, Source::Speech);
        front.directives = vec![Directive::ViewFront];
        let log = vec![
            create(2),
            open(5),
            number(8),
            commit(12), // 7 s bracket
            create(15), // 3 s creation
            open(20),
            commit(30), // 10 s bracket
            front,      // 10 s navigation
        ];
        let m = metrics(&log, 0, 45_000);
        let p = m.phase_durations;
        assert_eq!(p.warmup, 2.0);
        assert_eq!(p.creation, 3.0);
        assert_eq!(p.manipulation, 17.0);
        assert_eq!(p.navigation, 10.0);
        assert_eq!(m.modality_time.speech_s, 8.0 * 2.5);
    }

    #[test]
    fn pinch_holds() {
        let pinch = |t_s, hand, engaged| {
            let mut r = entry(t_s, Source::Gesture);
            r.pinch = Some(PinchEdge { hand, engaged });
            r
        };
        let mut moved = entry(6, Source::Gesture);
        moved.directives = vec![Directive::set_transform(
            1,
            Transform::IDENTITY,
            TransformIntent::Grab {
                x_px: 0.0,
                y_px: 0.0,
            },
        )];
        let log = vec![
            create(1),
            pinch(2, Hand::Right, true), // empty hold: not counted
            pinch(3, Hand::Right, false),
            pinch(4, Hand::Left, true),
            moved,
            pinch(9, Hand::Left, false),
        ];
        let m = metrics(&log, 0, 10_000);
        assert_eq!(m.modality_time.gesture_s, 5.0);
    }

    #[test]
    fn overlapping_spans_count_once() {
        assert_eq!(union_length(vec![(0, 10), (5, 12), (20, 25), (21, 22)]), 17);
        assert_eq!(union_length(vec![]), 0);
    }
}
