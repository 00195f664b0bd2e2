use super::TraceRecord;
use crate::gesture::{Hand, LandmarkFrame, Landmarks, INDEX_TIP, LANDMARK_COUNT, PALM, THUMB_TIP};

/// Frame period for synthetic hand tracks, in milliseconds.
pub const FRAME_MS: u64 = 33;

/// Writes synthetic traces: transcripts plus simplified hand poses where
/// every landmark sits on the palm except the index tip, which is offset
/// horizontally by the pinch distance.
#[derive(Debug, Clone, Default)]
pub struct TraceBuilder {
    records: Vec<TraceRecord>,
}

pub fn hand_pose(palm: [f64; 2], pinch: f64) -> Landmarks {
    let p = [palm[0], palm[1], 0.0];
    let mut points = [p; LANDMARK_COUNT];
    points[PALM] = p;
    points[THUMB_TIP] = p;
    points[INDEX_TIP] = [palm[0] + pinch, palm[1], 0.0];
    points
}

impl TraceBuilder {
    pub fn new() -> Self {
        TraceBuilder::default()
    }

    pub fn say(mut self, t: u64, text: &str) -> Self {
        self.records.push(TraceRecord::Transcript {
            t,
            text: text.to_string(),
        });
        self
    }

    pub fn pose(mut self, t: u64, hand: Hand, palm: [f64; 2], pinch: f64) -> Self {
        let frame =
            LandmarkFrame::new(t, hand, hand_pose(palm, pinch)).expect("finite synthetic pose");
        self.records.push(TraceRecord::Landmark(frame));
        self
    }

    /// One frame every [`FRAME_MS`] from `from` up to and including `to`.
    pub fn hold(mut self, from: u64, to: u64, hand: Hand, palm: [f64; 2], pinch: f64) -> Self {
        let mut t = from;
        while t <= to {
            self = self.pose(t, hand, palm, pinch);
            t += FRAME_MS;
        }
        self
    }

    /// Records ordered by time; equal times keep insertion order.
    pub fn build(mut self) -> Vec<TraceRecord> {
        self.records.sort_by_key(TraceRecord::t);
        self.records
    }

    /// A full arch session: two uprights and a lintel. The first upright is
    /// moved into place with a left-hand grab, the rest by voice. It ends
    /// with a pinch-select of the first upright, the front view, and a
    /// scale that is undone.
    pub fn arch() -> Vec<TraceRecord> {
        const OPEN: f64 = 0.2;
        const CLOSED: f64 = 0.0;
        let center = [0.5, 0.5];
        // mirrored: palm x 0.578125 puts the cursor at 810 px, 150 px left
        // of center, which the grab gain turns into -1.5 units
        let left_of_center = [0.578125, 0.5];
        // front projection of (-1.5, 0, 0) is (672, 540)
        let over_a = [0.65, 0.5];

        TraceBuilder::new()
            // upright A: stretch by voice
            .say(0, "create cube")
            .say(2500, "scale")
            .say(5000, "vertical")
            .say(7500, "three")
            .say(10000, "enter")
            // grab A with the left hand and drag it with the right
            .hold(11000, 12400, Hand::Right, center, OPEN)
            .pose(12500, Hand::Left, [0.3, 0.5], CLOSED)
            .hold(13000, 16000, Hand::Right, left_of_center, OPEN)
            .pose(16500, Hand::Left, [0.3, 0.5], OPEN)
            // upright B
            .say(17500, "create cube")
            .say(20000, "translate")
            .say(22500, "lateral")
            .say(25000, "one point five")
            .say(27500, "enter")
            .say(30000, "scale")
            .say(32500, "vertical")
            .say(35000, "three")
            .say(37500, "enter")
            // lintel C
            .say(40000, "create cube")
            .say(42500, "translate")
            .say(45000, "vertical")
            .say(47500, "three point five")
            .say(50000, "enter")
            .say(52500, "scale")
            .say(55000, "lateral")
            .say(57500, "four")
            .say(60000, "enter")
            // point at A and pinch to select it
            .hold(61000, 62500, Hand::Right, over_a, OPEN)
            .hold(62533, 63000, Hand::Right, over_a, CLOSED)
            .hold(63033, 63500, Hand::Right, over_a, OPEN)
            .say(65000, "front")
            .say(67500, "greater")
            .say(70000, "undo")
            .build()
    }
}
