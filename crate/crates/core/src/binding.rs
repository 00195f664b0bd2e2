//! Lowering of directives into abstract keyboard and mouse actions.
//!
//! A [`Keymap`] maps directive kinds (`undo`, `create.cube`,
//! `set_transform.scale.z`, ...) to templates such as `"ctrl+z"` or
//! `"s;z;{number}"`. Tokens are separated by `;`:
//!
//! * `ctrl+shift+z` - a chord; modifiers are pressed and released
//!   explicitly around the key, never typed as text
//! * `{number}` - the spoken magnitude, typed as its shortest decimal form
//! * `move@{cursor}` - pointer move to the directive's cursor position
//! * `click:left@{cursor}` - click at the directive's cursor position
//!
//! The output is plain data; nothing here talks to a window system.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::directive::{Directive, Primitive, TransformIntent, TransformKind};
use crate::geom::Axis;

pub const DEFAULT_KEYMAP_JSON: &str = include_str!("../config/keymap.json");

const MODIFIERS: [&str; 4] = ["ctrl", "shift", "alt", "super"];

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Button {
    Left,
    Right,
    Middle,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "action", rename_all = "snake_case")]
pub enum Action {
    KeyDown { key: String },
    KeyUp { key: String },
    Click { button: Button, x: f64, y: f64 },
    MoveTo { x: f64, y: f64 },
    TypeText { text: String },
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(transparent)]
pub struct ActionSeq(pub Vec<Action>);

impl ActionSeq {
    pub fn actions(&self) -> &[Action] {
        &self.0
    }

    /// Every `key_down` is released later, in reverse press order.
    pub fn is_balanced(&self) -> bool {
        let mut held: Vec<&str> = Vec::new();
        for a in &self.0 {
            match a {
                Action::KeyDown { key } => held.push(key),
                Action::KeyUp { key } if held.pop() != Some(key.as_str()) => return false,
                _ => {}
            }
        }
        held.is_empty()
    }
}

#[derive(Debug, Error, PartialEq)]
pub enum BindingError {
    #[error("keymap json: {0}")]
    Json(String),
    #[error("template for `{kind}`: {message}")]
    Template { kind: String, message: String },
    #[error("no template for directive kind `{0}`")]
    MissingTemplate(String),
    #[error("template for `{kind}` needs {placeholder} which this directive does not carry")]
    MissingValue {
        kind: String,
        placeholder: &'static str,
    },
}

#[derive(Debug, Clone, PartialEq)]
enum Token {
    Chord { modifiers: Vec<String>, key: String },
    Number,
    MoveToCursor,
    ClickAtCursor(Button),
}

#[derive(Debug, Clone, PartialEq)]
pub struct Keymap {
    templates: BTreeMap<String, Vec<Token>>,
}

impl Keymap {
    pub fn from_json(text: &str) -> Result<Self, BindingError> {
        let raw: BTreeMap<String, String> =
            serde_json::from_str(text).map_err(|e| BindingError::Json(e.to_string()))?;
        Keymap::from_templates(raw)
    }

    pub fn from_templates<I, K, V>(templates: I) -> Result<Self, BindingError>
    where
        I: IntoIterator<Item = (K, V)>,
        K: Into<String>,
        V: AsRef<str>,
    {
        let mut parsed = BTreeMap::new();
        for (kind, template) in templates {
            let kind = kind.into();
            let tokens = parse_template(&kind, template.as_ref())?;
            parsed.insert(kind, tokens);
        }
        Ok(Keymap { templates: parsed })
    }

    /// Every kind the fusion controller can emit.
    pub fn required_kinds() -> Vec<String> {
        let mut kinds = vec![
            "create.cube".to_string(),
            "create.cylinder".to_string(),
            "set_transform.grab".to_string(),
            "commit".to_string(),
            "cancel".to_string(),
            "undo".to_string(),
            "select_at".to_string(),
            "view_front".to_string(),
        ];
        for kind in [
            TransformKind::Translate,
            TransformKind::Rotate,
            TransformKind::Scale,
        ] {
            kinds.push(numeric_kind(kind, None));
            for axis in [Axis::X, Axis::Y, Axis::Z] {
                kinds.push(numeric_kind(kind, Some(axis)));
            }
        }
        kinds
    }

    /// Kinds from [`Keymap::required_kinds`] that have no template.
    pub fn missing_kinds(&self) -> Vec<String> {
        Keymap::required_kinds()
            .into_iter()
            .filter(|k| !self.templates.contains_key(k))
            .collect()
    }

    pub fn lower(&self, directive: &Directive) -> Result<ActionSeq, BindingError> {
        let kind = template_kind(directive);
        let tokens = self
            .templates
            .get(&kind)
            .ok_or_else(|| BindingError::MissingTemplate(kind.clone()))?;

        let (number, cursor) = match directive {
            Directive::SetTransform {
                intent: TransformIntent::Numeric { magnitude, .. },
                ..
            } => (Some(*magnitude), None),
            Directive::SetTransform {
                intent: TransformIntent::Grab { x_px, y_px },
                ..
            }
            | Directive::SelectAt { x_px, y_px, .. } => (None, Some((*x_px, *y_px))),
            _ => (None, None),
        };
        let missing = |placeholder| BindingError::MissingValue {
            kind: kind.clone(),
            placeholder,
        };

        let mut out = Vec::new();
        for token in tokens {
            match token {
                Token::Chord { modifiers, key } => {
                    for m in modifiers {
                        out.push(Action::KeyDown { key: m.clone() });
                    }
                    out.push(Action::KeyDown { key: key.clone() });
                    out.push(Action::KeyUp { key: key.clone() });
                    for m in modifiers.iter().rev() {
                        out.push(Action::KeyUp { key: m.clone() });
                    }
                }
                Token::Number => {
                    let n = number.ok_or_else(|| missing("{number}"))?;
                    out.push(Action::TypeText {
                        text: render_number(n),
                    });
                }
                Token::MoveToCursor => {
                    let (x, y) = cursor.ok_or_else(|| missing("{cursor}"))?;
                    out.push(Action::MoveTo { x, y });
                }
                Token::ClickAtCursor(button) => {
                    let (x, y) = cursor.ok_or_else(|| missing("{cursor}"))?;
                    out.push(Action::Click {
                        button: *button,
                        x,
                        y,
                    });
                }
            }
        }
        Ok(ActionSeq(out))
    }
}

impl Default for Keymap {
    fn default() -> Self {
        Keymap::from_json(DEFAULT_KEYMAP_JSON).expect("shipped keymap is valid")
    }
}

fn numeric_kind(kind: TransformKind, axis: Option<Axis>) -> String {
    match axis {
        Some(a) => format!("set_transform.{}.{}", kind.as_str(), a.as_str()),
        None => format!("set_transform.{}", kind.as_str()),
    }
}

/// Keymap key for a directive, e.g. `create.cube` or `set_transform.rotate.x`.
pub fn template_kind(directive: &Directive) -> String {
    match directive {
        Directive::Create { primitive } => match primitive {
            Primitive::Cube => "create.cube".into(),
            Primitive::Cylinder => "create.cylinder".into(),
        },
        Directive::SetTransform { intent, .. } => match intent {
            TransformIntent::Numeric { kind, axis, .. } => numeric_kind(*kind, *axis),
            TransformIntent::Grab { .. } => "set_transform.grab".into(),
        },
        other => other.kind_name().into(),
    }
}

/// Shortest decimal that reads back as the same number.
pub fn render_number(n: f64) -> String {
    if n == 0.0 {
        return "0".into();
    }
    format!("{n}")
}

fn parse_template(kind: &str, template: &str) -> Result<Vec<Token>, BindingError> {
    let err = |message: String| BindingError::Template {
        kind: kind.to_string(),
        message,
    };
    let mut tokens = Vec::new();
    for raw in template.split(';') {
        let tok = raw.trim();
        if tok.is_empty() {
            return Err(err(format!("empty token in {template:?}")));
        }
        if tok == "{number}" {
            tokens.push(Token::Number);
        } else if tok == "move@{cursor}" {
            tokens.push(Token::MoveToCursor);
        } else if let Some(rest) = tok.strip_prefix("click:") {
            let button = match rest.strip_suffix("@{cursor}") {
                Some("left") => Button::Left,
                Some("right") => Button::Right,
                Some("middle") => Button::Middle,
                _ => return Err(err(format!("bad click token {tok:?}"))),
            };
            tokens.push(Token::ClickAtCursor(button));
        } else {
            let mut parts: Vec<&str> = tok.split('+').collect();
            let key = parts.pop().unwrap_or_default();
            if !is_key_name(key) {
                return Err(err(format!(
                    "bad key {key:?}; keys are lowercase names, shifted characters must be spelled as shift+key"
                )));
            }
            if MODIFIERS.contains(&key) && !parts.is_empty() {
                return Err(err(format!("chord {tok:?} ends in a modifier")));
            }
            let mut modifiers = Vec::with_capacity(parts.len());
            for m in parts {
                if !MODIFIERS.contains(&m) || modifiers.iter().any(|x: &String| x == m) {
                    return Err(err(format!("bad modifier {m:?} in {tok:?}")));
                }
                modifiers.push(m.to_string());
            }
            tokens.push(Token::Chord {
                modifiers,
                key: key.to_string(),
            });
        }
    }
    Ok(tokens)
}

fn is_key_name(key: &str) -> bool {
    !key.is_empty()
        && key
            .chars()
            .all(|c| c.is_ascii_lowercase() || c.is_ascii_digit() || c == '_')
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::directive::Transform;

    fn down(k: &str) -> Action {
        Action::KeyDown { key: k.into() }
    }
    fn up(k: &str) -> Action {
        Action::KeyUp { key: k.into() }
    }

    #[test]
    fn undo_chord() {
        let km = Keymap::from_templates([("undo", "ctrl+z")]).unwrap();
        assert_eq!(
            km.lower(&Directive::Undo).unwrap().0,
            vec![down("ctrl"), down("z"), up("z"), up("ctrl")]
        );
    }

    #[test]
    fn vertical_scale_sequence() {
        let d = Directive::set_transform(
            1,
            Transform::IDENTITY,
            TransformIntent::Numeric {
                kind: TransformKind::Scale,
                axis: Some(Axis::Z),
                magnitude: 2.1,
            },
        );
        let seq = Keymap::default().lower(&d).unwrap();
        assert_eq!(
            seq.0,
            vec![
                down("s"),
                up("s"),
                down("z"),
                up("z"),
                Action::TypeText { text: "2.1".into() }
            ]
        );
        assert!(seq.is_balanced());
    }

    #[test]
    fn cancel_and_select() {
        let km = Keymap::default();
        let cancel = Directive::Cancel {
            object_id: 1,
            restore: Transform::IDENTITY,
        };
        assert_eq!(km.lower(&cancel).unwrap().0, vec![down("esc"), up("esc")]);
        let select = Directive::SelectAt {
            x_px: 10.0,
            y_px: 20.5,
            target: None,
        };
        assert_eq!(
            km.lower(&select).unwrap().0,
            vec![Action::Click {
                button: Button::Left,
                x: 10.0,
                y: 20.5
            }]
        );
    }

    #[test]
    fn shifted_create_is_a_chord() {
        let seq = Keymap::default()
            .lower(&Directive::Create {
                primitive: Primitive::Cube,
            })
            .unwrap();
        assert_eq!(
            &seq.0[..4],
            &[down("shift"), down("a"), up("a"), up("shift")]
        );
        assert!(!seq.0.iter().any(|a| matches!(a, Action::TypeText { .. })));
    }

    #[test]
    fn shipped_keymap_is_complete() {
        assert!(Keymap::default().missing_kinds().is_empty());
        assert_eq!(Keymap::required_kinds().len(), 20);
    }

    #[test]
    fn missing_template_names_the_kind() {
        let km = Keymap::from_templates([("undo", "ctrl+z")]).unwrap();
        assert_eq!(
            km.lower(&Directive::ViewFront),
            Err(BindingError::MissingTemplate("view_front".into()))
        );
    }

    #[test]
    fn placeholder_without_value() {
        let km = Keymap::from_templates([("commit", "return;{number}")]).unwrap();
        assert!(matches!(
            km.lower(&Directive::Commit { object_id: 1 }),
            Err(BindingError::MissingValue {
                placeholder: "{number}",
                ..
            })
        ));
    }

    #[test]
    fn template_grammar_errors() {
        for bad in [
            "",
            "A",
            "ctrl+",
            "shift",
            "ctrl+ctrl+z",
            "hyper+z",
            "s;;z",
            "click:left",
            "ctrl+shift",
        ] {
            let r = Keymap::from_templates([("undo", bad)]);
            if bad == "shift" {
                // a bare modifier key is a legal single-key template
                assert!(r.is_ok());
                continue;
            }
            assert!(
                matches!(r, Err(BindingError::Template { .. })),
                "{bad:?} -> {r:?}"
            );
        }
        assert!(Keymap::from_json("[1]").is_err());
    }

    #[test]
    fn numbers_render_shortest() {
        assert_eq!(render_number(2.1), "2.1");
        assert_eq!(render_number(45.0), "45");
        assert_eq!(render_number(-1.0), "-1");
        assert_eq!(render_number(-0.0), "0");
        assert_eq!(render_number(0.1 + 0.2), "0.30000000000000004");
    }

    #[test]
    fn balance_checker() {
        assert!(ActionSeq(vec![down("a"), up("a")]).is_balanced());
        assert!(!ActionSeq(vec![down("a")]).is_balanced());
        assert!(!ActionSeq(vec![down("a"), down("b"), up("a"), up("b")]).is_balanced());
        assert!(!ActionSeq(vec![up("a")]).is_balanced());
    }
}
