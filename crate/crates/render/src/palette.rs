use std::str::FromStr;

use crate::{RenderError, Result};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Palette {
    pub colors: Vec<String>,
    pub document: String,
    pub reference: String,
}

const DEFAULT: [&str; 10] =
    ["#1f77b4", "#ff7f0e", "#2ca02c", "#d62728", "#9467bd", "#8c564b", "#e377c2", "#7f7f7f", "#bcbd22", "#17becf"];
const MUTED: [&str; 8] = ["#4c72b0", "#dd8452", "#55a868", "#c44e52", "#8172b3", "#937860", "#da8bc3", "#8c8c8c"];
const GRAY: [&str; 5] = ["#222222", "#555555", "#888888", "#aaaaaa", "#cccccc"];

pub fn is_hex_color(s: &str) -> bool {
    s.len() == 7 && s.starts_with('#') && s[1..].chars().all(|c| c.is_ascii_hexdigit())
}

impl Default for Palette {
    fn default() -> Self {
        Palette::from_list(&DEFAULT).expect("built-in palette")
    }
}

impl Palette {
    pub fn new(colors: Vec<String>) -> Result<Self> {
        if colors.is_empty() {
            return Err(RenderError::Usage("palette needs at least one color".into()));
        }
        if let Some(bad) = colors.iter().find(|c| !is_hex_color(c)) {
            return Err(RenderError::Usage(format!("`{bad}` is not a #rrggbb color")));
        }
        Ok(Palette { colors, document: "#1f77b4".into(), reference: "#d62728".into() })
    }

    fn from_list(list: &[&str]) -> Result<Self> {
        Palette::new(list.iter().map(|c| c.to_string()).collect())
    }

    /// Cluster `i` maps to color `i mod len`.
    pub fn color(&self, i: usize) -> &str {
        &self.colors[i % self.colors.len()]
    }
}

/// A built-in name (`default`, `muted`, `gray`) or a comma-separated hex list.
impl FromStr for Palette {
    type Err = RenderError;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "default" => Ok(Palette::default()),
            "muted" => Palette::from_list(&MUTED),
            "gray" | "grey" => Palette::from_list(&GRAY),
            list => Palette::new(list.split(',').map(|c| c.trim().to_lowercase()).collect()),
        }
    }
}
