//! Bundled layouts and norm files, addressable by name from configs.

use std::path::Path;

use ngrl_pacman::{CLASSIC2G_LAYOUT, MINI_LAYOUT};

pub const BENEVOLENT_NORMS: &str = include_str!("../norms/benevolent.norms");
pub const BENEVOLENT_PERMIT_NORMS: &str = include_str!("../norms/benevolent_permit.norms");

pub fn bundled_layout(name: &str) -> Option<&'static str> {
    match name {
        "mini" | "mini.lay" => Some(MINI_LAYOUT),
        "classic2g" | "classic2g.lay" => Some(CLASSIC2G_LAYOUT),
        _ => None,
    }
}

pub fn bundled_norms(name: &str) -> Option<&'static str> {
    match name {
        "none" | "empty" => Some(""),
        "benevolent" | "benevolent.norms" => Some(BENEVOLENT_NORMS),
        "benevolent_permit" | "benevolent_permit.norms" => Some(BENEVOLENT_PERMIT_NORMS),
        _ => None,
    }
}

/// Resolves `name` as a bundled asset first, then as a file relative to `base`.
pub fn load_text(
    name: &str,
    base: &Path,
    bundled: fn(&str) -> Option<&'static str>,
) -> std::io::Result<String> {
    if let Some(text) = bundled(name) {
        return Ok(text.to_string());
    }
    std::fs::read_to_string(base.join(name))
}
