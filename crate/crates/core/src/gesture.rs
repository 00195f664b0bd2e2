//! Hand-landmark frames to cursor and pinch events.
//!
//! Each frame is smoothed with an exponential moving average, then the
//! thumb-tip to index-tip distance drives a two-threshold pinch automaton.
//! The right hand's palm landmark also drives the cursor. Roles are fixed:
//! right pinch selects, left pinch grabs.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::geom::{Cursor, Viewport};

pub const LANDMARK_COUNT: usize = 21;
pub const WRIST: usize = 0;
pub const THUMB_TIP: usize = 4;
pub const INDEX_TIP: usize = 8;
/// Base of the middle finger; used as the palm center.
pub const PALM: usize = 9;

pub type Landmarks = [[f64; 3]; LANDMARK_COUNT];

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Hand {
    Left,
    Right,
}

/// One timestamped hand pose. `x`/`y` are normalized image coordinates in
/// `[0, 1]`; `z` is relative depth.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawFrame")]
pub struct LandmarkFrame {
    pub t: u64,
    pub hand: Hand,
    pub points: Landmarks,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawFrame {
    t: u64,
    hand: Hand,
    points: Vec<[f64; 3]>,
}

impl TryFrom<RawFrame> for LandmarkFrame {
    type Error = GestureError;

    fn try_from(raw: RawFrame) -> Result<Self, Self::Error> {
        let points: Landmarks = raw
            .points
            .try_into()
            .map_err(|v: Vec<_>| GestureError::PointCount(v.len()))?;
        LandmarkFrame::new(raw.t, raw.hand, points)
    }
}

impl LandmarkFrame {
    /// Validates coordinates and clamps `x`/`y` into the unit square.
    pub fn new(t: u64, hand: Hand, mut points: Landmarks) -> Result<Self, GestureError> {
        for p in points.iter_mut() {
            if p.iter().any(|c| !c.is_finite()) {
                return Err(GestureError::NonFinite);
            }
            p[0] = p[0].clamp(0.0, 1.0);
            p[1] = p[1].clamp(0.0, 1.0);
        }
        Ok(LandmarkFrame { t, hand, points })
    }

    /// Planar thumb-tip to index-tip distance. Depth is ignored.
    pub fn pinch_distance(&self) -> f64 {
        let a = self.points[THUMB_TIP];
        let b = self.points[INDEX_TIP];
        (a[0] - b[0]).hypot(a[1] - b[1])
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind")]
pub enum GestureKind {
    CursorMove { x_px: f64, y_px: f64 },
    PinchStart { hand: Hand },
    PinchEnd { hand: Hand },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GestureEvent {
    pub t: u64,
    #[serde(flatten)]
    pub kind: GestureKind,
}

#[derive(Debug, Error, PartialEq)]
pub enum GestureError {
    #[error("expected 21 landmarks, got {0}")]
    PointCount(usize),
    #[error("landmark coordinates must be finite")]
    NonFinite,
    #[error("the left hand never drives the cursor")]
    LeftHandCursor,
    #[error("{hand:?} hand frame at t={t} is older than the previous frame at t={last}")]
    OutOfOrder { hand: Hand, t: u64, last: u64 },
    #[error("invalid gesture configuration: {0}")]
    Config(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct GestureConfig {
    /// Pinch engages when the distance drops strictly below this.
    pub engage: f64,
    /// Pinch releases when the distance rises strictly above this.
    pub release: f64,
    /// EMA weight of the newest frame, in `(0, 1]`.
    pub alpha: f64,
    /// Mirror the cursor horizontally (webcam-style input).
    pub mirror: bool,
}

impl Default for GestureConfig {
    fn default() -> Self {
        GestureConfig {
            engage: 0.06,
            release: 0.08,
            alpha: 0.5,
            mirror: true,
        }
    }
}

impl GestureConfig {
    pub fn validate(&self) -> Result<(), GestureError> {
        if !(self.alpha > 0.0 && self.alpha <= 1.0) {
            return Err(GestureError::Config(format!(
                "alpha {} not in (0, 1]",
                self.alpha
            )));
        }
        if !(self.engage > 0.0 && self.engage <= self.release && self.release.is_finite()) {
            return Err(GestureError::Config(format!(
                "pinch thresholds engage={} release={} must satisfy 0 < engage <= release",
                self.engage, self.release
            )));
        }
        Ok(())
    }
}

/// Per-hand pinch automaton state and smoothing cache.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct PinchState {
    pub engaged: bool,
    pub smoothed: Option<Landmarks>,
}

/// Exponential moving average of every coordinate. The first frame passes
/// through; `alpha = 1` is the identity.
pub fn smooth(frame: &LandmarkFrame, state: &mut PinchState, alpha: f64) -> LandmarkFrame {
    let out = match &state.smoothed {
        None => frame.points,
        Some(prev) => {
            let mut out = frame.points;
            for (o, p) in out.iter_mut().zip(prev) {
                for (c, &q) in o.iter_mut().zip(p) {
                    *c = ema(*c, q, alpha);
                }
            }
            out
        }
    };
    state.smoothed = Some(out);
    LandmarkFrame {
        t: frame.t,
        hand: frame.hand,
        points: out,
    }
}

fn ema(input: f64, prev: f64, alpha: f64) -> f64 {
    if input == prev {
        return input;
    }
    // clamp absorbs rounding so the result stays between the two samples
    (alpha * input + (1.0 - alpha) * prev).clamp(input.min(prev), input.max(prev))
}

/// Advances the pinch automaton for one (already smoothed) frame.
pub fn detect_pinch(
    frame: &LandmarkFrame,
    state: &PinchState,
    config: &GestureConfig,
) -> (PinchState, Option<GestureEvent>) {
    let d = frame.pinch_distance();
    let mut next = state.clone();
    let kind = if !state.engaged && d < config.engage {
        next.engaged = true;
        Some(GestureKind::PinchStart { hand: frame.hand })
    } else if state.engaged && d > config.release {
        next.engaged = false;
        Some(GestureKind::PinchEnd { hand: frame.hand })
    } else {
        None
    };
    (next, kind.map(|kind| GestureEvent { t: frame.t, kind }))
}

/// Maps the right hand's palm landmark to viewport pixels.
pub fn map_cursor(
    frame: &LandmarkFrame,
    viewport: Viewport,
    mirror: bool,
) -> Result<GestureEvent, GestureError> {
    if frame.hand == Hand::Left {
        return Err(GestureError::LeftHandCursor);
    }
    let [x, y, _] = frame.points[PALM];
    let x = if mirror { 1.0 - x } else { x };
    let c = viewport.clamp(Cursor::new(x * viewport.w_px, y * viewport.h_px));
    Ok(GestureEvent {
        t: frame.t,
        kind: GestureKind::CursorMove {
            x_px: c.x_px,
            y_px: c.y_px,
        },
    })
}

#[derive(Debug, Clone, Default)]
struct HandTrack {
    pinch: PinchState,
    last_t: Option<u64>,
}

/// Runs both hands' pipelines. Frames for each hand must arrive in
/// timestamp order; the two hands are independent.
#[derive(Debug, Clone)]
pub struct GestureEngine {
    config: GestureConfig,
    viewport: Viewport,
    left: HandTrack,
    right: HandTrack,
}

impl GestureEngine {
    pub fn new(config: GestureConfig, viewport: Viewport) -> Result<Self, GestureError> {
        config.validate()?;
        if !viewport.is_valid() {
            return Err(GestureError::Config(format!("bad viewport {viewport:?}")));
        }
        Ok(GestureEngine {
            config,
            viewport,
            left: HandTrack::default(),
            right: HandTrack::default(),
        })
    }

    pub fn config(&self) -> &GestureConfig {
        &self.config
    }

    pub fn pinch_state(&self, hand: Hand) -> &PinchState {
        match hand {
            Hand::Left => &self.left.pinch,
            Hand::Right => &self.right.pinch,
        }
    }

    /// Smooths the frame and returns the events it produces: a cursor move
    /// for right-hand frames, then a pinch transition if one occurred.
    pub fn process(&mut self, frame: &LandmarkFrame) -> Result<Vec<GestureEvent>, GestureError> {
        let track = match frame.hand {
            Hand::Left => &mut self.left,
            Hand::Right => &mut self.right,
        };
        if let Some(last) = track.last_t {
            if frame.t < last {
                return Err(GestureError::OutOfOrder {
                    hand: frame.hand,
                    t: frame.t,
                    last,
                });
            }
        }
        track.last_t = Some(frame.t);

        let smoothed = smooth(frame, &mut track.pinch, self.config.alpha);
        let mut events = Vec::with_capacity(2);
        if frame.hand == Hand::Right {
            events.push(map_cursor(&smoothed, self.viewport, self.config.mirror)?);
        }
        let (next, pinch) = detect_pinch(&smoothed, &track.pinch, &self.config);
        track.pinch = next;
        events.extend(pinch);
        Ok(events)
    }
}
