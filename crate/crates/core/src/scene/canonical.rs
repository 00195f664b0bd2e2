//! Canonical scene JSON: fixed field order, objects in id order, every
//! number written with exactly six fractional digits, no whitespace.

use std::collections::BTreeMap;
use std::fmt::{self, Write};

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};
use thiserror::Error;

use super::{quantize_transform, Scene, SceneObject, UndoStep, View};
use crate::directive::{ObjectId, Transform};
use crate::geom::Vec3;

/// Hex SHA-256 of a scene's canonical serialization.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct SceneHash(String);

impl SceneHash {
    pub(crate) fn of(bytes: &[u8]) -> Self {
        let digest = Sha256::digest(bytes);
        let mut hex = String::with_capacity(64);
        for b in digest.iter() {
            let _ = write!(hex, "{b:02x}");
        }
        SceneHash(hex)
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }
}

impl fmt::Display for SceneHash {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

#[derive(Debug, Error)]
pub enum SceneParseError {
    #[error("scene json: {0}")]
    Json(#[from] serde_json::Error),
    #[error("scene file is inconsistent: {0}")]
    Inconsistent(String),
}

fn num(out: &mut String, x: f64) {
    let _ = write!(out, "{x:.6}");
}

fn vec3(out: &mut String, v: &Vec3) {
    out.push('[');
    for (i, c) in v.iter().enumerate() {
        if i > 0 {
            out.push(',');
        }
        num(out, *c);
    }
    out.push(']');
}

fn transform(out: &mut String, t: &Transform) {
    out.push_str("{\"translation\":");
    vec3(out, &t.translation);
    out.push_str(",\"rotation\":");
    vec3(out, &t.rotation);
    out.push_str(",\"scale\":");
    vec3(out, &t.scale);
    out.push('}');
}

fn object(out: &mut String, o: &SceneObject) {
    let _ = write!(
        out,
        "{{\"id\":{},\"primitive\":\"{}\",\"translation\":",
        o.id,
        o.primitive.as_str()
    );
    vec3(out, &o.translation);
    out.push_str(",\"rotation\":");
    vec3(out, &o.rotation);
    out.push_str(",\"scale\":");
    vec3(out, &o.scale);
    out.push('}');
}

fn list<T>(out: &mut String, items: &[T], mut f: impl FnMut(&mut String, &T)) {
    out.push('[');
    for (i, item) in items.iter().enumerate() {
        if i > 0 {
            out.push(',');
        }
        f(out, item);
    }
    out.push(']');
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct SceneFile {
    next_id: ObjectId,
    view: View,
    selection: Option<ObjectId>,
    objects: Vec<SceneObject>,
    undo_stack: Vec<UndoStep>,
    pending: Vec<PendingEntry>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct PendingEntry {
    object_id: ObjectId,
    transform: Transform,
}

impl Scene {
    pub fn to_canonical_json(&self) -> String {
        let mut out = String::with_capacity(128 + 160 * self.objects.len());
        let _ = write!(out, "{{\"next_id\":{},\"view\":\"", self.next_id);
        out.push_str(match self.view {
            View::Default => "default",
            View::Front => "front",
        });
        out.push_str("\",\"selection\":");
        match self.selection {
            Some(id) => {
                let _ = write!(out, "{id}");
            }
            None => out.push_str("null"),
        }
        out.push_str(",\"objects\":");
        list(&mut out, &self.objects, object);
        out.push_str(",\"undo_stack\":");
        list(&mut out, &self.undo_stack, |out, step| match step {
            UndoStep::Created { object: o } => {
                out.push_str("{\"step\":\"created\",\"object\":");
                object(out, o);
                out.push('}');
            }
            UndoStep::Transformed {
                object_id,
                before,
                after,
            } => {
                let _ = write!(
                    out,
                    "{{\"step\":\"transformed\",\"object_id\":{object_id},\"before\":"
                );
                transform(out, before);
                out.push_str(",\"after\":");
                transform(out, after);
                out.push('}');
            }
        });
        out.push_str(",\"pending\":");
        let pending: Vec<_> = self.pending.iter().collect();
        list(&mut out, &pending, |out, (id, t)| {
            let _ = write!(out, "{{\"object_id\":{id},\"transform\":");
            transform(out, t);
            out.push('}');
        });
        out.push('}');
        out
    }

    /// Parses a scene file, re-quantizing numbers and checking consistency.
    pub fn from_canonical_json(text: &str) -> Result<Scene, SceneParseError> {
        let file: SceneFile = serde_json::from_str(text)?;
        let bad = |msg: String| Err(SceneParseError::Inconsistent(msg));

        let mut objects = Vec::with_capacity(file.objects.len());
        let mut last = 0;
        for mut o in file.objects {
            if o.id <= last || o.id >= file.next_id {
                return bad(format!("object id {} out of order or >= next_id", o.id));
            }
            last = o.id;
            let t = quantize_transform(&o.transform());
            if !t.is_valid() {
                return bad(format!("object {} has an invalid transform", o.id));
            }
            o.set_transform(&t);
            objects.push(o);
        }
        let exists = |id: ObjectId| objects.iter().any(|o: &SceneObject| o.id == id);

        if let Some(sel) = file.selection {
            if !exists(sel) {
                return bad(format!("selection {sel} is not an object"));
            }
        }

        let mut undo_stack = Vec::with_capacity(file.undo_stack.len());
        for step in file.undo_stack {
            undo_stack.push(match step {
                UndoStep::Created { mut object } => {
                    if object.id >= file.next_id {
                        return bad(format!("undo step creates id {} >= next_id", object.id));
                    }
                    let t = quantize_transform(&object.transform());
                    object.set_transform(&t);
                    UndoStep::Created { object }
                }
                UndoStep::Transformed {
                    object_id,
                    before,
                    after,
                } => UndoStep::Transformed {
                    object_id,
                    before: quantize_transform(&before),
                    after: quantize_transform(&after),
                },
            });
        }

        let mut pending = BTreeMap::new();
        for p in file.pending {
            if !exists(p.object_id) {
                return bad(format!("pending entry for missing object {}", p.object_id));
            }
            pending.insert(p.object_id, quantize_transform(&p.transform));
        }

        Ok(Scene {
            objects,
            selection: file.selection,
            view: file.view,
            next_id: file.next_id.max(1),
            undo_stack,
            pending,
        })
    }
}
