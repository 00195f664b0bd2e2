use serde::{Deserialize, Serialize};

use crate::geom::{Axis, Vec3};

pub type ObjectId = u64;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Primitive {
    Cube,
    Cylinder,
}

impl Primitive {
    pub fn as_str(self) -> &'static str {
        match self {
            Primitive::Cube => "cube",
            Primitive::Cylinder => "cylinder",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum TransformKind {
    Translate,
    Rotate,
    Scale,
}

impl TransformKind {
    pub fn as_str(self) -> &'static str {
        match self {
            TransformKind::Translate => "translate",
            TransformKind::Rotate => "rotate",
            TransformKind::Scale => "scale",
        }
    }
}

/// Translation (scene units), Euler XYZ rotation (degrees) and scale.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Transform {
    pub translation: Vec3,
    pub rotation: Vec3,
    pub scale: Vec3,
}

impl Transform {
    pub const IDENTITY: Transform = Transform {
        translation: [0.0; 3],
        rotation: [0.0; 3],
        scale: [1.0; 3],
    };

    pub fn is_valid(&self) -> bool {
        let finite = |v: &Vec3| v.iter().all(|c| c.is_finite());
        finite(&self.translation)
            && finite(&self.rotation)
            && finite(&self.scale)
            && self.scale.iter().all(|&s| s > 0.0)
    }
}

impl Default for Transform {
    fn default() -> Self {
        Transform::IDENTITY
    }
}

/// How a [`Directive::SetTransform`] came about; the binding adapter lowers
/// it back into the key presses a modeling tool expects.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "mode", rename_all = "snake_case")]
pub enum TransformIntent {
    Numeric {
        kind: TransformKind,
        axis: Option<Axis>,
        magnitude: f64,
    },
    Grab {
        x_px: f64,
        y_px: f64,
    },
}

/// A fully resolved scene command.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type")]
pub enum Directive {
    Create {
        primitive: Primitive,
    },
    SetTransform {
        object_id: ObjectId,
        translation: Vec3,
        rotation: Vec3,
        scale: Vec3,
        intent: TransformIntent,
    },
    Commit {
        object_id: ObjectId,
    },
    Cancel {
        object_id: ObjectId,
        restore: Transform,
    },
    Undo,
    /// Pointer selection; `target` is the object picked under the cursor
    /// when the directive was resolved, if any.
    SelectAt {
        x_px: f64,
        y_px: f64,
        target: Option<ObjectId>,
    },
    ViewFront,
}

impl Directive {
    pub fn set_transform(object_id: ObjectId, t: Transform, intent: TransformIntent) -> Self {
        Directive::SetTransform {
            object_id,
            translation: t.translation,
            rotation: t.rotation,
            scale: t.scale,
            intent,
        }
    }

    /// Stable kind name, e.g. `create`, `set_transform`, `view_front`.
    pub fn kind_name(&self) -> &'static str {
        match self {
            Directive::Create { .. } => "create",
            Directive::SetTransform { .. } => "set_transform",
            Directive::Commit { .. } => "commit",
            Directive::Cancel { .. } => "cancel",
            Directive::Undo => "undo",
            Directive::SelectAt { .. } => "select_at",
            Directive::ViewFront => "view_front",
        }
    }

    pub fn closes_bracket(&self) -> bool {
        matches!(self, Directive::Commit { .. } | Directive::Cancel { .. })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn wire_shape() {
        let d = Directive::set_transform(
            3,
            Transform::IDENTITY,
            TransformIntent::Numeric {
                kind: TransformKind::Scale,
                axis: Some(Axis::Z),
                magnitude: 2.1,
            },
        );
        let v = serde_json::to_value(&d).unwrap();
        assert_eq!(v["type"], "SetTransform");
        assert_eq!(v["intent"]["mode"], "numeric");
        assert_eq!(v["intent"]["axis"], "z");
        let back: Directive = serde_json::from_value(v).unwrap();
        assert_eq!(back, d);

        assert_eq!(
            serde_json::to_string(&Directive::Undo).unwrap(),
            r#"{"type":"Undo"}"#
        );
    }

    #[test]
    fn transform_validity() {
        assert!(Transform::IDENTITY.is_valid());
        let mut t = Transform::IDENTITY;
        t.scale[1] = 0.0;
        assert!(!t.is_valid());
        t.scale[1] = 1.0;
        t.rotation[0] = f64::NAN;
        assert!(!t.is_valid());
    }
}
