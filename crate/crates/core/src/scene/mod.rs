//! Deterministic reference scene: primitives, transforms, selection and an
//! undo history with one step per committed action.
//!
//! All stored coordinates are quantized to six fractional digits on write,
//! which makes the canonical JSON form exact and hashing stable.

mod canonical;

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};
use thiserror::Error;
use tracing::warn;

use crate::directive::{Directive, ObjectId, Primitive, Transform};
use crate::geom::{Cursor, Vec3, Viewport};

pub use canonical::{SceneHash, SceneParseError};

/// Half-width of the front view's world window, in scene units.
pub const VIEW_HALF_EXTENT: f64 = 5.0;
/// Maximum distance, in pixels, between cursor and a projected center for
/// a pick to hit.
pub const PICK_RADIUS_PX: f64 = 40.0;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SceneObject {
    pub id: ObjectId,
    pub primitive: Primitive,
    pub translation: Vec3,
    pub rotation: Vec3,
    pub scale: Vec3,
}

impl SceneObject {
    pub fn transform(&self) -> Transform {
        Transform {
            translation: self.translation,
            rotation: self.rotation,
            scale: self.scale,
        }
    }

    fn set_transform(&mut self, t: &Transform) {
        self.translation = t.translation;
        self.rotation = t.rotation;
        self.scale = t.scale;
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum View {
    #[default]
    Default,
    Front,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "step", rename_all = "snake_case")]
pub enum UndoStep {
    Created {
        object: SceneObject,
    },
    Transformed {
        object_id: ObjectId,
        before: Transform,
        after: Transform,
    },
}

#[derive(Debug, Error, PartialEq)]
pub enum SceneError {
    #[error("object {0} does not exist")]
    UnknownObject(ObjectId),
    #[error("transform for object {0} is not finite or has a non-positive scale")]
    InvalidTransform(ObjectId),
}

/// Result of applying a directive that did not fail.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ApplyOutcome {
    Applied,
    /// Nothing to do, e.g. undo with an empty history.
    Ignored(&'static str),
}

#[derive(Debug, Clone, PartialEq)]
pub struct Scene {
    objects: Vec<SceneObject>,
    selection: Option<ObjectId>,
    view: View,
    next_id: ObjectId,
    undo_stack: Vec<UndoStep>,
    // transform at the first uncommitted SetTransform, per object
    pending: BTreeMap<ObjectId, Transform>,
}

impl Default for Scene {
    fn default() -> Self {
        Scene::new()
    }
}

/// Rounds to six fractional digits, the precision of the canonical form.
pub fn quantize(x: f64) -> f64 {
    let q: f64 = format!("{x:.6}").parse().unwrap_or(x);
    if q == 0.0 {
        0.0
    } else {
        q
    }
}

fn quantize_vec(v: Vec3) -> Vec3 {
    v.map(quantize)
}

fn quantize_transform(t: &Transform) -> Transform {
    Transform {
        translation: quantize_vec(t.translation),
        rotation: quantize_vec(t.rotation),
        scale: quantize_vec(t.scale),
    }
}

impl Scene {
    pub fn new() -> Self {
        Scene {
            objects: Vec::new(),
            selection: None,
            view: View::Default,
            next_id: 1,
            undo_stack: Vec::new(),
            pending: BTreeMap::new(),
        }
    }

    pub fn objects(&self) -> &[SceneObject] {
        &self.objects
    }

    pub fn object(&self, id: ObjectId) -> Option<&SceneObject> {
        self.objects.iter().find(|o| o.id == id)
    }

    pub fn contains(&self, id: ObjectId) -> bool {
        self.object(id).is_some()
    }

    pub fn selection(&self) -> Option<ObjectId> {
        self.selection
    }

    pub fn view(&self) -> View {
        self.view
    }

    /// Id the next `Create` will assign.
    pub fn next_id(&self) -> ObjectId {
        self.next_id
    }

    pub fn undo_depth(&self) -> usize {
        self.undo_stack.len()
    }

    pub fn undo_stack(&self) -> &[UndoStep] {
        &self.undo_stack
    }

    fn object_mut(&mut self, id: ObjectId) -> Result<&mut SceneObject, SceneError> {
        self.objects
            .iter_mut()
            .find(|o| o.id == id)
            .ok_or(SceneError::UnknownObject(id))
    }

    /// Applies one directive. On error the scene is left untouched.
    pub fn apply(&mut self, directive: &Directive) -> Result<ApplyOutcome, SceneError> {
        match directive {
            Directive::Create { primitive } => {
                let object = SceneObject {
                    id: self.next_id,
                    primitive: *primitive,
                    translation: Transform::IDENTITY.translation,
                    rotation: Transform::IDENTITY.rotation,
                    scale: Transform::IDENTITY.scale,
                };
                self.next_id += 1;
                self.selection = Some(object.id);
                self.undo_stack.push(UndoStep::Created {
                    object: object.clone(),
                });
                self.objects.push(object);
            }
            Directive::SetTransform {
                object_id,
                translation,
                rotation,
                scale,
                ..
            } => {
                let id = *object_id;
                let target = Transform {
                    translation: *translation,
                    rotation: *rotation,
                    scale: *scale,
                };
                let target = checked(id, &target)?;
                let obj = self.object_mut(id)?;
                let current = obj.transform();
                obj.set_transform(&target);
                self.pending.entry(id).or_insert(current);
            }
            Directive::Commit { object_id } => {
                let id = *object_id;
                let after = self
                    .object(id)
                    .ok_or(SceneError::UnknownObject(id))?
                    .transform();
                match self.pending.remove(&id) {
                    Some(before) if before != after => {
                        self.undo_stack.push(UndoStep::Transformed {
                            object_id: id,
                            before,
                            after,
                        });
                    }
                    _ => return Ok(ApplyOutcome::Ignored("commit without change")),
                }
            }
            Directive::Cancel { object_id, restore } => {
                let id = *object_id;
                let restore = checked(id, restore)?;
                self.object_mut(id)?.set_transform(&restore);
                self.pending.remove(&id);
            }
            Directive::Undo => return Ok(self.undo()),
            Directive::SelectAt { target, .. } => {
                self.selection = target.filter(|id| self.contains(*id));
            }
            Directive::ViewFront => self.view = View::Front,
        }
        Ok(ApplyOutcome::Applied)
    }

    /// Applies a batch all-or-nothing.
    pub fn apply_all(&mut self, directives: &[Directive]) -> Result<(), SceneError> {
        let mut next = self.clone();
        for d in directives {
            next.apply(d)?;
        }
        *self = next;
        Ok(())
    }

    fn undo(&mut self) -> ApplyOutcome {
        let Some(step) = self.undo_stack.pop() else {
            warn!("undo requested with an empty history");
            return ApplyOutcome::Ignored("undo stack empty");
        };
        match step {
            UndoStep::Created { object } => {
                self.objects.retain(|o| o.id != object.id);
                self.pending.remove(&object.id);
                if self.selection == Some(object.id) {
                    self.selection = None;
                }
            }
            UndoStep::Transformed {
                object_id, before, ..
            } => {
                self.pending.remove(&object_id);
                if let Ok(obj) = self.object_mut(object_id) {
                    obj.set_transform(&before);
                }
            }
        }
        ApplyOutcome::Applied
    }

    /// Projects a world point into the front view: X to the right, Z up,
    /// Y dropped, world window `[-5, 5]` on both axes.
    pub fn project(point: Vec3, viewport: Viewport) -> Cursor {
        let span = 2.0 * VIEW_HALF_EXTENT;
        Cursor::new(
            (point[0] + VIEW_HALF_EXTENT) / span * viewport.w_px,
            (VIEW_HALF_EXTENT - point[2]) / span * viewport.h_px,
        )
    }

    /// Object whose projected center is nearest the cursor, within
    /// [`PICK_RADIUS_PX`]. Ties go to the lower id.
    pub fn pick(&self, cursor: Cursor, viewport: Viewport) -> Option<ObjectId> {
        let mut best: Option<(ObjectId, f64)> = None;
        for obj in &self.objects {
            let d = Scene::project(obj.translation, viewport).distance(&cursor);
            if d > PICK_RADIUS_PX {
                continue;
            }
            match best {
                Some((id, bd)) if bd < d || (bd == d && id < obj.id) => {}
                _ => best = Some((obj.id, d)),
            }
        }
        best.map(|(id, _)| id)
    }

    /// Digest of the canonical serialization.
    pub fn scene_hash(&self) -> SceneHash {
        SceneHash::of(self.to_canonical_json().as_bytes())
    }
}

fn checked(id: ObjectId, t: &Transform) -> Result<Transform, SceneError> {
    if !t.is_valid() {
        return Err(SceneError::InvalidTransform(id));
    }
    let q = quantize_transform(t);
    // a tiny positive scale can round to zero
    if !q.is_valid() {
        return Err(SceneError::InvalidTransform(id));
    }
    Ok(q)
}
