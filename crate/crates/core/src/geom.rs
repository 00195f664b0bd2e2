use serde::{Deserialize, Serialize};

/// World-space triple (scene units or degrees, depending on the field).
pub type Vec3 = [f64; 3];

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Axis {
    X,
    Y,
    Z,
}

impl Axis {
    pub fn index(self) -> usize {
        match self {
            Axis::X => 0,
            Axis::Y => 1,
            Axis::Z => 2,
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Axis::X => "x",
            Axis::Y => "y",
            Axis::Z => "z",
        }
    }
}

/// Screen rectangle in pixels.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Viewport {
    pub w_px: f64,
    pub h_px: f64,
}

impl Viewport {
    pub const fn new(w_px: f64, h_px: f64) -> Self {
        Viewport { w_px, h_px }
    }

    pub fn is_valid(&self) -> bool {
        self.w_px > 0.0 && self.h_px > 0.0 && self.w_px.is_finite() && self.h_px.is_finite()
    }

    pub fn clamp(&self, p: Cursor) -> Cursor {
        Cursor {
            x_px: p.x_px.clamp(0.0, self.w_px),
            y_px: p.y_px.clamp(0.0, self.h_px),
        }
    }

    pub fn contains(&self, p: Cursor) -> bool {
        (0.0..=self.w_px).contains(&p.x_px) && (0.0..=self.h_px).contains(&p.y_px)
    }
}

impl Default for Viewport {
    fn default() -> Self {
        Viewport::new(1920.0, 1080.0)
    }
}

/// Pointer position in viewport pixels, origin top-left.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct Cursor {
    pub x_px: f64,
    pub y_px: f64,
}

impl Cursor {
    pub const fn new(x_px: f64, y_px: f64) -> Self {
        Cursor { x_px, y_px }
    }

    pub fn distance(&self, other: &Cursor) -> f64 {
        (self.x_px - other.x_px).hypot(self.y_px - other.y_px)
    }
}
