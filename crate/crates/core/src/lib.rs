//! Multimodal command inference for 3D modeling.
//!
//! Speech transcripts and hand-landmark frames go in; resolved scene
//! directives, a reference scene, abstract key/mouse action sequences and
//! session metrics come out. Perception models are out of the picture: the
//! engine consumes their outputs as data.

pub mod binding;
pub mod directive;
pub mod fusion;
pub mod geom;
pub mod gesture;
pub mod lexicon;
pub mod scene;
pub mod session;
pub mod trace;

pub use directive::{Directive, ObjectId, Primitive, Transform, TransformIntent, TransformKind};
pub use fusion::{
    merge_streams, FusionConfig, FusionController, FusionState, InputEvent, Mode, Payload, Source,
};
pub use geom::{Axis, Cursor, Viewport};
pub use gesture::{GestureConfig, GestureEngine, GestureEvent, GestureKind, Hand, LandmarkFrame};
pub use lexicon::{CommandId, Lexicon, ScoredCommand};
pub use scene::{Scene, SceneHash};
