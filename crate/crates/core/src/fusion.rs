//! Speech/gesture stream merge and the modal command state machine.
//!
//! [`FusionController::step`] is a pure function of its inputs. It reads the
//! scene but never mutates it: the caller applies the returned directives.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::directive::{Directive, ObjectId, Primitive, Transform, TransformIntent, TransformKind};
use crate::geom::{Axis, Cursor, Viewport};
use crate::gesture::{GestureEvent, GestureKind, Hand, Landmarks};
use crate::lexicon::{CommandId, Lexicon, Utterance};
use crate::scene::{quantize, Scene};

/// Length of one speech chunk, in milliseconds.
pub const SPEECH_CHUNK_MS: u64 = 2500;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub enum Payload {
    SpeechChunk {
        text: String,
    },
    Gesture(GestureKind),
    /// Raw hand pose. Sessions run these through a [`GestureEngine`]
    /// first; [`FusionController::step`] ignores them.
    ///
    /// [`GestureEngine`]: crate::gesture::GestureEngine
    Landmarks {
        hand: Hand,
        points: Box<Landmarks>,
    },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct InputEvent {
    pub t: u64,
    pub payload: Payload,
}

impl InputEvent {
    pub fn speech(t: u64, text: impl Into<String>) -> Self {
        InputEvent {
            t,
            payload: Payload::SpeechChunk { text: text.into() },
        }
    }

    pub fn gesture(t: u64, kind: GestureKind) -> Self {
        InputEvent {
            t,
            payload: Payload::Gesture(kind),
        }
    }

    pub fn source(&self) -> Source {
        match self.payload {
            Payload::SpeechChunk { .. } => Source::Speech,
            Payload::Gesture(_) | Payload::Landmarks { .. } => Source::Gesture,
        }
    }
}

impl From<GestureEvent> for InputEvent {
    fn from(e: GestureEvent) -> Self {
        InputEvent::gesture(e.t, e.kind)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Source {
    Speech,
    Gesture,
}

#[derive(Debug, Error, PartialEq)]
pub enum FusionError {
    #[error("{stream:?} stream is out of order at t={t}")]
    OutOfOrder { stream: Source, t: u64 },
}

/// Stable merge by timestamp; on equal timestamps gesture events come first.
pub fn merge_streams(
    speech: &[InputEvent],
    gesture: &[InputEvent],
) -> Result<Vec<InputEvent>, FusionError> {
    check_order(speech, Source::Speech)?;
    check_order(gesture, Source::Gesture)?;
    let mut out = Vec::with_capacity(speech.len() + gesture.len());
    let (mut s, mut g) = (speech.iter().peekable(), gesture.iter().peekable());
    loop {
        let next = match (s.peek(), g.peek()) {
            (Some(a), Some(b)) if b.t <= a.t => g.next(),
            (Some(_), _) => s.next(),
            (None, Some(_)) => g.next(),
            (None, None) => break,
        };
        out.extend(next.cloned());
    }
    Ok(out)
}

fn check_order(events: &[InputEvent], stream: Source) -> Result<(), FusionError> {
    match events.windows(2).find(|w| w[1].t < w[0].t) {
        Some(w) => Err(FusionError::OutOfOrder { stream, t: w[1].t }),
        None => Ok(()),
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "mode")]
pub enum Mode {
    Idle,
    Transforming {
        kind: TransformKind,
        axis: Option<Axis>,
        magnitude: Option<f64>,
        object_id: ObjectId,
        snapshot: Transform,
    },
    Grabbing {
        object_id: ObjectId,
        anchor: Cursor,
        snapshot: Transform,
    },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FusionState {
    pub mode: Mode,
    pub cursor: Cursor,
    pub selection: Option<ObjectId>,
}

impl Default for FusionState {
    fn default() -> Self {
        FusionState {
            mode: Mode::Idle,
            cursor: Cursor::default(),
            selection: None,
        }
    }
}

impl FusionState {
    pub fn is_idle(&self) -> bool {
        self.mode == Mode::Idle
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct FusionConfig {
    pub viewport: Viewport,
    /// Scene units per cursor pixel while grabbing.
    pub grab_gain: f64,
    /// Uniform factor for `greater`.
    pub grow_factor: f64,
    /// Uniform factor for `smaller`.
    pub shrink_factor: f64,
    /// Distance along Z for `upwards` / `down`.
    pub nudge: f64,
}

impl Default for FusionConfig {
    fn default() -> Self {
        FusionConfig {
            viewport: Viewport::default(),
            grab_gain: 0.01,
            grow_factor: 1.25,
            shrink_factor: 0.8,
            nudge: 1.0,
        }
    }
}

/// Outcome of one [`FusionController::step`].
#[derive(Debug, Clone, PartialEq)]
pub struct Step {
    pub state: FusionState,
    pub directives: Vec<Directive>,
    /// Lexicon command recognized in a speech chunk, if any.
    pub command: Option<CommandId>,
}

/// Axis rotations use when no constraint was spoken: the front camera looks
/// along +Y.
pub const CAMERA_AXIS: Axis = Axis::Y;
/// Axis translations use when no constraint was spoken: horizontal in the
/// front view plane.
pub const PLANE_AXIS: Axis = Axis::X;

#[derive(Debug, Clone)]
pub struct FusionController {
    lexicon: Lexicon,
    config: FusionConfig,
}

impl FusionController {
    pub fn new(lexicon: Lexicon, config: FusionConfig) -> Self {
        FusionController { lexicon, config }
    }

    pub fn lexicon(&self) -> &Lexicon {
        &self.lexicon
    }

    pub fn config(&self) -> &FusionConfig {
        &self.config
    }

    pub fn step(&self, state: &FusionState, event: &InputEvent, scene: &Scene) -> Step {
        let mut next = state.clone();
        if next.selection.is_some_and(|id| !scene.contains(id)) {
            next.selection = None;
        }
        // someone else removed the object under an open transform
        if let Mode::Transforming { object_id, .. } | Mode::Grabbing { object_id, .. } = next.mode {
            if !scene.contains(object_id) {
                next.mode = Mode::Idle;
            }
        }

        let mut directives = Vec::new();
        let mut command = None;
        match &event.payload {
            Payload::SpeechChunk { text } => match self.lexicon.recognize(text) {
                Utterance::Number(n) => self.on_number(&mut next, n, &mut directives),
                Utterance::Command(c) => {
                    command = Some(c.id);
                    self.on_command(&mut next, c.id, scene, &mut directives);
                }
                Utterance::Unrecognized => {}
            },
            Payload::Gesture(g) => self.on_gesture(&mut next, g, scene, &mut directives),
            Payload::Landmarks { .. } => {}
        }
        Step {
            state: next,
            directives,
            command,
        }
    }

    fn on_number(&self, state: &mut FusionState, n: f64, out: &mut Vec<Directive>) {
        let Mode::Transforming {
            kind,
            axis,
            magnitude,
            object_id,
            snapshot,
        } = &mut state.mode
        else {
            return;
        };
        let Some(t) = numeric_transform(snapshot, *kind, *axis, n) else {
            return;
        };
        *magnitude = Some(n);
        out.push(Directive::set_transform(
            *object_id,
            t,
            TransformIntent::Numeric {
                kind: *kind,
                axis: *axis,
                magnitude: n,
            },
        ));
    }

    fn on_command(
        &self,
        state: &mut FusionState,
        id: CommandId,
        scene: &Scene,
        out: &mut Vec<Directive>,
    ) {
        if state.is_idle() {
            return self.on_idle_command(state, id, scene, out);
        }
        match &mut state.mode {
            Mode::Idle => {}
            Mode::Transforming {
                kind,
                axis,
                magnitude,
                object_id,
                snapshot,
            } => match id {
                CommandId::Lateral | CommandId::Lengthwise | CommandId::Vertical => {
                    *axis = id.axis();
                    if let Some(n) = *magnitude {
                        if let Some(t) = numeric_transform(snapshot, *kind, *axis, n) {
                            out.push(Directive::set_transform(
                                *object_id,
                                t,
                                TransformIntent::Numeric {
                                    kind: *kind,
                                    axis: *axis,
                                    magnitude: n,
                                },
                            ));
                        }
                    }
                }
                CommandId::Enter => {
                    out.push(Directive::Commit {
                        object_id: *object_id,
                    });
                    state.mode = Mode::Idle;
                }
                CommandId::Escape => {
                    out.push(Directive::Cancel {
                        object_id: *object_id,
                        restore: *snapshot,
                    });
                    state.mode = Mode::Idle;
                }
                _ => {}
            },
            Mode::Grabbing {
                object_id,
                snapshot,
                ..
            } => match id {
                CommandId::Enter => {
                    out.push(Directive::Commit {
                        object_id: *object_id,
                    });
                    state.mode = Mode::Idle;
                }
                CommandId::Escape => {
                    out.push(Directive::Cancel {
                        object_id: *object_id,
                        restore: *snapshot,
                    });
                    state.mode = Mode::Idle;
                }
                _ => {}
            },
        }
    }

    fn on_idle_command(
        &self,
        state: &mut FusionState,
        id: CommandId,
        scene: &Scene,
        out: &mut Vec<Directive>,
    ) {
        let selected = state
            .selection
            .and_then(|sel| scene.object(sel).map(|o| (sel, o.transform())));
        match id {
            CommandId::CreateCube | CommandId::CreateCylinder => {
                let primitive = if id == CommandId::CreateCube {
                    Primitive::Cube
                } else {
                    Primitive::Cylinder
                };
                out.push(Directive::Create { primitive });
                state.selection = Some(scene.next_id());
            }
            CommandId::Translate | CommandId::Rotate | CommandId::Scale => {
                if let Some((object_id, snapshot)) = selected {
                    let kind = match id {
                        CommandId::Translate => TransformKind::Translate,
                        CommandId::Rotate => TransformKind::Rotate,
                        _ => TransformKind::Scale,
                    };
                    state.mode = Mode::Transforming {
                        kind,
                        axis: None,
                        magnitude: None,
                        object_id,
                        snapshot,
                    };
                }
            }
            CommandId::Greater | CommandId::Smaller | CommandId::Upwards | CommandId::Down => {
                let Some((object_id, current)) = selected else {
                    return;
                };
                let (kind, axis, magnitude) = match id {
                    CommandId::Greater => (TransformKind::Scale, None, self.config.grow_factor),
                    CommandId::Smaller => (TransformKind::Scale, None, self.config.shrink_factor),
                    CommandId::Upwards => {
                        (TransformKind::Translate, Some(Axis::Z), self.config.nudge)
                    }
                    _ => (TransformKind::Translate, Some(Axis::Z), -self.config.nudge),
                };
                if let Some(t) = numeric_transform(&current, kind, axis, magnitude) {
                    out.push(Directive::set_transform(
                        object_id,
                        t,
                        TransformIntent::Numeric {
                            kind,
                            axis,
                            magnitude,
                        },
                    ));
                    out.push(Directive::Commit { object_id });
                }
            }
            CommandId::Undo => out.push(Directive::Undo),
            CommandId::Front => out.push(Directive::ViewFront),
            CommandId::Enter
            | CommandId::Escape
            | CommandId::Lateral
            | CommandId::Lengthwise
            | CommandId::Vertical => {}
        }
    }

    fn on_gesture(
        &self,
        state: &mut FusionState,
        g: &GestureKind,
        scene: &Scene,
        out: &mut Vec<Directive>,
    ) {
        match (g, &state.mode) {
            (GestureKind::CursorMove { x_px, y_px }, mode) => {
                state.cursor = Cursor::new(*x_px, *y_px);
                if let Mode::Grabbing {
                    object_id,
                    anchor,
                    snapshot,
                } = mode
                {
                    let gain = self.config.grab_gain;
                    let mut t = *snapshot;
                    // screen y grows downward, world Z grows upward
                    t.translation[0] += (x_px - anchor.x_px) * gain;
                    t.translation[2] -= (y_px - anchor.y_px) * gain;
                    out.push(Directive::set_transform(
                        *object_id,
                        t,
                        TransformIntent::Grab {
                            x_px: *x_px,
                            y_px: *y_px,
                        },
                    ));
                }
            }
            (GestureKind::PinchStart { hand: Hand::Right }, Mode::Idle) => {
                let target = scene.pick(state.cursor, self.config.viewport);
                out.push(Directive::SelectAt {
                    x_px: state.cursor.x_px,
                    y_px: state.cursor.y_px,
                    target,
                });
                state.selection = target;
            }
            (GestureKind::PinchStart { hand: Hand::Left }, Mode::Idle) => {
                if let Some(object_id) = state.selection {
                    if let Some(obj) = scene.object(object_id) {
                        state.mode = Mode::Grabbing {
                            object_id,
                            anchor: state.cursor,
                            snapshot: obj.transform(),
                        };
                    }
                }
            }
            (GestureKind::PinchEnd { hand: Hand::Left }, Mode::Grabbing { object_id, .. }) => {
                out.push(Directive::Commit {
                    object_id: *object_id,
                });
                state.mode = Mode::Idle;
            }
            _ => {}
        }
    }
}

/// Transform obtained by applying a spoken magnitude to `base`, or `None`
/// if the result would be degenerate (non-positive scale).
pub fn numeric_transform(
    base: &Transform,
    kind: TransformKind,
    axis: Option<Axis>,
    n: f64,
) -> Option<Transform> {
    let mut t = *base;
    match kind {
        TransformKind::Scale => match axis {
            Some(a) => t.scale[a.index()] *= n,
            None => t.scale.iter_mut().for_each(|s| *s *= n),
        },
        TransformKind::Rotate => t.rotation[axis.unwrap_or(CAMERA_AXIS).index()] += n,
        TransformKind::Translate => t.translation[axis.unwrap_or(PLANE_AXIS).index()] += n,
    }
    let ok = t.is_valid() && t.scale.iter().all(|&s| quantize(s) > 0.0);
    ok.then_some(t)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn controller() -> FusionController {
        FusionController::new(Lexicon::default(), FusionConfig::default())
    }

    /// Runs events through the controller, applying directives to `scene`.
    fn drive(
        fc: &FusionController,
        state: &mut FusionState,
        scene: &mut Scene,
        events: &[InputEvent],
    ) -> Vec<Directive> {
        let mut log = Vec::new();
        for e in events {
            let step = fc.step(state, e, scene);
            scene.apply_all(&step.directives).unwrap();
            *state = step.state;
            log.extend(step.directives);
        }
        log
    }

    fn say(words: &[&str]) -> Vec<InputEvent> {
        words
            .iter()
            .enumerate()
            .map(|(i, w)| InputEvent::speech(i as u64 * 2500, *w))
            .collect()
    }

    fn with_cube() -> (FusionController, FusionState, Scene) {
        let fc = controller();
        let mut state = FusionState::default();
        let mut scene = Scene::new();
        let log = drive(&fc, &mut state, &mut scene, &say(&["create cube"]));
        assert_eq!(
            log,
            vec![Directive::Create {
                primitive: Primitive::Cube
            }]
        );
        assert_eq!(state.selection, Some(1));
        (fc, state, scene)
    }

    #[test]
    fn merge_orders_by_time_with_gestures_first() {
        let s = vec![InputEvent::speech(100, "a")];
        let g = vec![InputEvent::gesture(
            50,
            GestureKind::PinchStart { hand: Hand::Left },
        )];
        let m = merge_streams(&s, &g).unwrap();
        assert_eq!(m.iter().map(|e| e.t).collect::<Vec<_>>(), vec![50, 100]);

        let g = vec![InputEvent::gesture(
            100,
            GestureKind::PinchStart { hand: Hand::Left },
        )];
        let m = merge_streams(&s, &g).unwrap();
        assert_eq!(m[0].source(), Source::Gesture);
        assert_eq!(m[1].source(), Source::Speech);
    }

    #[test]
    fn merge_rejects_unordered_input() {
        let s = vec![InputEvent::speech(100, "a"), InputEvent::speech(90, "b")];
        assert_eq!(
            merge_streams(&s, &[]),
            Err(FusionError::OutOfOrder {
                stream: Source::Speech,
                t: 90
            })
        );
        let g = vec![
            InputEvent::gesture(5, GestureKind::PinchEnd { hand: Hand::Left }),
            InputEvent::gesture(4, GestureKind::PinchEnd { hand: Hand::Left }),
        ];
        assert_eq!(
            merge_streams(&[], &g),
            Err(FusionError::OutOfOrder {
                stream: Source::Gesture,
                t: 4
            })
        );
    }

    #[test]
    fn vertical_scale_two_point_one() {
        let (fc, mut state, mut scene) = with_cube();
        drive(
            &fc,
            &mut state,
            &mut scene,
            &say(&["scale", "vertical", "two point one", "enter"]),
        );
        assert_eq!(scene.object(1).unwrap().scale, [1.0, 1.0, 2.1]);
        assert!(state.is_idle());
        assert_eq!(scene.undo_depth(), 2);
    }

    #[test]
    fn lateral_rotation_forty_five() {
        let (fc, mut state, mut scene) = with_cube();
        drive(
            &fc,
            &mut state,
            &mut scene,
            &say(&["rotate", "lateral", "forty five", "enter"]),
        );
        assert_eq!(scene.object(1).unwrap().rotation, [45.0, 0.0, 0.0]);
    }

    #[test]
    fn escape_restores_snapshot() {
        let (fc, mut state, mut scene) = with_cube();
        let before = scene.object(1).unwrap().transform();
        let log = drive(
            &fc,
            &mut state,
            &mut scene,
            &say(&["scale", "vertical", "three", "escape"]),
        );
        assert!(matches!(log.last(), Some(Directive::Cancel { .. })));
        assert_eq!(scene.object(1).unwrap().transform(), before);
        assert_eq!(scene.undo_depth(), 1);
    }

    #[test]
    fn axis_change_after_number_reapplies() {
        let (fc, mut state, mut scene) = with_cube();
        drive(
            &fc,
            &mut state,
            &mut scene,
            &say(&["scale", "two", "vertical", "enter"]),
        );
        assert_eq!(scene.object(1).unwrap().scale, [1.0, 1.0, 2.0]);
    }

    #[test]
    fn unconstrained_defaults() {
        let (fc, mut state, mut scene) = with_cube();
        drive(
            &fc,
            &mut state,
            &mut scene,
            &say(&["scale", "two", "enter"]),
        );
        assert_eq!(scene.object(1).unwrap().scale, [2.0; 3]);
        drive(
            &fc,
            &mut state,
            &mut scene,
            &say(&["rotate", "thirty", "enter"]),
        );
        assert_eq!(scene.object(1).unwrap().rotation, [0.0, 30.0, 0.0]);
        drive(
            &fc,
            &mut state,
            &mut scene,
            &say(&["translate", "four", "enter"]),
        );
        assert_eq!(scene.object(1).unwrap().translation, [4.0, 0.0, 0.0]);
    }

    #[test]
    fn zero_scale_is_ignored() {
        let (fc, mut state, mut scene) = with_cube();
        let log = drive(&fc, &mut state, &mut scene, &say(&["scale", "zero"]));
        assert!(log.is_empty());
        assert!(matches!(
            state.mode,
            Mode::Transforming {
                magnitude: None,
                ..
            }
        ));
    }

    #[test]
    fn presets() {
        let (fc, mut state, mut scene) = with_cube();
        let log = drive(&fc, &mut state, &mut scene, &say(&["greater"]));
        assert_eq!(log.len(), 2);
        assert!(matches!(log[1], Directive::Commit { object_id: 1 }));
        assert_eq!(scene.object(1).unwrap().scale, [1.25; 3]);
        drive(&fc, &mut state, &mut scene, &say(&["smaller"]));
        assert_eq!(scene.object(1).unwrap().scale, [1.0; 3]);
        drive(
            &fc,
            &mut state,
            &mut scene,
            &say(&["upwards", "upwards", "down"]),
        );
        assert_eq!(scene.object(1).unwrap().translation, [0.0, 0.0, 1.0]);
        assert!(state.is_idle());
        assert_eq!(scene.undo_depth(), 6);
    }

    #[test]
    fn idle_commands_without_selection_do_nothing() {
        let fc = controller();
        let mut state = FusionState::default();
        let mut scene = Scene::new();
        let log = drive(
            &fc,
            &mut state,
            &mut scene,
            &say(&[
                "scale", "greater", "down", "escape", "enter", "lateral", "two",
            ]),
        );
        assert!(log.is_empty());
        assert!(state.is_idle());
    }

    #[test]
    fn undo_front_and_chatter() {
        let (fc, mut state, mut scene) = with_cube();
        let log = drive(
            &fc,
            &mut state,
            &mut scene,
            &say(&["hello there", "trump", "undo"]),
        );
        assert_eq!(log, vec![Directive::ViewFront, Directive::Undo]);
        assert!(scene.objects().is_empty());
        // selection pointed at the undone cube and is dropped
        let step = fc.step(&state, &InputEvent::speech(99_000, "scale"), &scene);
        assert_eq!(step.state.selection, None);
        assert!(step.state.is_idle());
    }

    #[test]
    fn create_is_ignored_mid_transform() {
        let (fc, mut state, mut scene) = with_cube();
        let log = drive(
            &fc,
            &mut state,
            &mut scene,
            &say(&["translate", "create cube", "undo", "front"]),
        );
        assert!(log.is_empty());
        assert!(matches!(state.mode, Mode::Transforming { .. }));
    }

    #[test]
    fn right_pinch_selects_under_cursor() {
        let fc = controller();
        let mut state = FusionState::default();
        let mut scene = Scene::new();
        drive(
            &fc,
            &mut state,
            &mut scene,
            &say(&["create cube", "create cylinder"]),
        );
        assert_eq!(state.selection, Some(2));
        drive(
            &fc,
            &mut state,
            &mut scene,
            &say(&["translate", "lateral", "three", "enter"]),
        );
        let events = [
            InputEvent::gesture(
                1,
                GestureKind::CursorMove {
                    x_px: 962.0,
                    y_px: 541.0,
                },
            ),
            InputEvent::gesture(2, GestureKind::PinchStart { hand: Hand::Right }),
        ];
        let log = drive(&fc, &mut state, &mut scene, &events);
        assert_eq!(
            log,
            vec![Directive::SelectAt {
                x_px: 962.0,
                y_px: 541.0,
                target: Some(1)
            }]
        );
        assert_eq!(state.selection, Some(1));
        assert_eq!(scene.selection(), Some(1));

        // empty spot deselects
        let events = [
            InputEvent::gesture(3, GestureKind::PinchEnd { hand: Hand::Right }),
            InputEvent::gesture(
                4,
                GestureKind::CursorMove {
                    x_px: 10.0,
                    y_px: 10.0,
                },
            ),
            InputEvent::gesture(5, GestureKind::PinchStart { hand: Hand::Right }),
        ];
        drive(&fc, &mut state, &mut scene, &events);
        assert_eq!(state.selection, None);
    }

    #[test]
    fn left_pinch_grabs_and_drops() {
        let (fc, mut state, mut scene) = with_cube();
        let events = [
            InputEvent::gesture(
                1,
                GestureKind::CursorMove {
                    x_px: 500.0,
                    y_px: 500.0,
                },
            ),
            InputEvent::gesture(2, GestureKind::PinchStart { hand: Hand::Left }),
            InputEvent::gesture(
                3,
                GestureKind::CursorMove {
                    x_px: 350.0,
                    y_px: 400.0,
                },
            ),
            InputEvent::gesture(
                4,
                GestureKind::CursorMove {
                    x_px: 650.0,
                    y_px: 300.0,
                },
            ),
            InputEvent::gesture(5, GestureKind::PinchEnd { hand: Hand::Left }),
        ];
        let log = drive(&fc, &mut state, &mut scene, &events);
        assert_eq!(log.len(), 3);
        assert_eq!(log[2], Directive::Commit { object_id: 1 });
        // +150 px right, 200 px up at 0.01 units per pixel
        assert_eq!(scene.object(1).unwrap().translation, [1.5, 0.0, 2.0]);
        assert!(state.is_idle());
        assert_eq!(scene.undo_depth(), 2);
    }

    #[test]
    fn grab_dropped_by_voice_or_cancelled() {
        let (fc, mut state, mut scene) = with_cube();
        let grab = [
            InputEvent::gesture(1, GestureKind::PinchStart { hand: Hand::Left }),
            InputEvent::gesture(
                2,
                GestureKind::CursorMove {
                    x_px: 100.0,
                    y_px: 0.0,
                },
            ),
        ];
        drive(&fc, &mut state, &mut scene, &grab);
        drive(&fc, &mut state, &mut scene, &say(&["enter"]));
        assert!(state.is_idle());
        assert_eq!(scene.object(1).unwrap().translation, [1.0, 0.0, 0.0]);

        let grab = [
            InputEvent::gesture(1, GestureKind::PinchStart { hand: Hand::Left }),
            InputEvent::gesture(
                2,
                GestureKind::CursorMove {
                    x_px: 300.0,
                    y_px: 0.0,
                },
            ),
        ];
        drive(&fc, &mut state, &mut scene, &grab);
        drive(&fc, &mut state, &mut scene, &say(&["escape"]));
        assert_eq!(scene.object(1).unwrap().translation, [1.0, 0.0, 0.0]);
    }

    #[test]
    fn transform_on_vanished_object_aborts_quietly() {
        let (fc, state, _) = with_cube();
        let mut scene = Scene::new();
        scene
            .apply(&Directive::Create {
                primitive: Primitive::Cube,
            })
            .unwrap();
        let step = fc.step(&state, &InputEvent::speech(0, "scale"), &scene);
        assert!(matches!(step.state.mode, Mode::Transforming { .. }));
        let empty = Scene::new();
        let step = fc.step(&step.state, &InputEvent::speech(1, "two"), &empty);
        assert!(step.state.is_idle());
        assert!(step.directives.is_empty());
    }

    #[test]
    fn recognized_command_is_reported() {
        let fc = controller();
        let step = fc.step(
            &FusionState::default(),
            &InputEvent::speech(0, "undo"),
            &Scene::new(),
        );
        assert_eq!(step.command, Some(CommandId::Undo));
        let step = fc.step(
            &FusionState::default(),
            &InputEvent::speech(0, "two"),
            &Scene::new(),
        );
        assert_eq!(step.command, None);
    }
}
