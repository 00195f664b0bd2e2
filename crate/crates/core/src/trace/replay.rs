use serde::{Deserialize, Serialize};
use thiserror::Error;

use super::TraceRecord;
use crate::binding::{template_kind, ActionSeq, BindingError, Keymap};
use crate::directive::Directive;
use crate::fusion::{
    merge_streams, FusionConfig, FusionController, FusionError, FusionState, InputEvent, Payload,
    Source,
};
use crate::gesture::{GestureConfig, GestureEngine, GestureError, GestureKind, Hand};
use crate::lexicon::{CommandId, Lexicon};
use crate::scene::{Scene, SceneError};

#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct ReplayOptions {
    pub gesture: GestureConfig,
    pub fusion: FusionConfig,
}

/// Whether a step entered or left a transform/grab bracket.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum BracketEdge {
    #[default]
    None,
    Open,
    Close,
}

impl BracketEdge {
    fn is_none(&self) -> bool {
        *self == BracketEdge::None
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct PinchEdge {
    pub hand: Hand,
    pub engaged: bool,
}

/// One entry of the directive log. Steps with no directives, no command,
/// no pinch transition and no bracket change are not logged.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StepRecord {
    pub t: u64,
    pub source: Source,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub command: Option<CommandId>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub pinch: Option<PinchEdge>,
    #[serde(default, skip_serializing_if = "BracketEdge::is_none")]
    pub bracket: BracketEdge,
    pub directives: Vec<Directive>,
}

impl StepRecord {
    pub fn new(t: u64, source: Source) -> Self {
        StepRecord {
            t,
            source,
            command: None,
            pinch: None,
            bracket: BracketEdge::None,
            directives: Vec::new(),
        }
    }

    fn worth_logging(&self) -> bool {
        !self.directives.is_empty()
            || self.command.is_some()
            || self.pinch.is_some()
            || !self.bracket.is_none()
    }
}

/// The actions one directive lowered to.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ActionRecord {
    pub t: u64,
    pub kind: String,
    pub actions: ActionSeq,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ReplayOutput {
    pub scene: Scene,
    pub log: Vec<StepRecord>,
    pub actions: Vec<ActionRecord>,
    /// First and last record time; `(0, 0)` for an empty trace.
    pub span: (u64, u64),
}

#[derive(Debug, Error)]
pub enum ReplayError {
    #[error("record {index}: {source}")]
    Gesture { index: usize, source: GestureError },
    #[error(transparent)]
    Order(#[from] FusionError),
    #[error("t={t}: {source}")]
    Apply { t: u64, source: SceneError },
    #[error("t={t}: {source}")]
    Binding { t: u64, source: BindingError },
}

/// Runs a trace through gestures, fusion, the scene and the keymap. Output
/// depends only on the inputs.
pub fn replay(
    records: &[TraceRecord],
    lexicon: &Lexicon,
    keymap: &Keymap,
    options: &ReplayOptions,
) -> Result<ReplayOutput, ReplayError> {
    let controller = FusionController::new(lexicon.clone(), options.fusion);
    let mut engine = GestureEngine::new(options.gesture, options.fusion.viewport)
        .map_err(|source| ReplayError::Gesture { index: 0, source })?;

    let mut speech = Vec::new();
    let mut gestures = Vec::new();
    for (i, rec) in records.iter().enumerate() {
        match rec {
            TraceRecord::Transcript { t, text } => {
                speech.push(InputEvent::speech(*t, text.clone()))
            }
            TraceRecord::Landmark(frame) => {
                let events = engine
                    .process(frame)
                    .map_err(|source| ReplayError::Gesture {
                        index: i + 1,
                        source,
                    })?;
                gestures.extend(events.into_iter().map(InputEvent::from));
            }
        }
    }
    let events = merge_streams(&speech, &gestures)?;

    let mut scene = Scene::new();
    let mut state = FusionState::default();
    let mut log = Vec::new();
    let mut actions = Vec::new();
    for ev in &events {
        let step = controller.step(&state, ev, &scene);
        scene
            .apply_all(&step.directives)
            .map_err(|source| ReplayError::Apply { t: ev.t, source })?;
        for d in &step.directives {
            let seq = keymap
                .lower(d)
                .map_err(|source| ReplayError::Binding { t: ev.t, source })?;
            actions.push(ActionRecord {
                t: ev.t,
                kind: template_kind(d),
                actions: seq,
            });
        }

        let mut rec = StepRecord::new(ev.t, ev.source());
        rec.command = step.command;
        rec.pinch = match &ev.payload {
            Payload::Gesture(GestureKind::PinchStart { hand }) => Some(PinchEdge {
                hand: *hand,
                engaged: true,
            }),
            Payload::Gesture(GestureKind::PinchEnd { hand }) => Some(PinchEdge {
                hand: *hand,
                engaged: false,
            }),
            _ => None,
        };
        rec.bracket = match (state.is_idle(), step.state.is_idle()) {
            (true, false) => BracketEdge::Open,
            (false, true) => BracketEdge::Close,
            _ => BracketEdge::None,
        };
        rec.directives = step.directives;
        if rec.worth_logging() {
            log.push(rec);
        }
        state = step.state;
    }

    let span = match (records.first(), records.last()) {
        (Some(a), Some(b)) => (a.t(), b.t()),
        _ => (0, 0),
    };
    Ok(ReplayOutput {
        scene,
        log,
        actions,
        span,
    })
}

/// Directives of a log, flattened in order.
pub fn directives(log: &[StepRecord]) -> impl Iterator<Item = &Directive> {
    log.iter().flat_map(|r| r.directives.iter())
}
