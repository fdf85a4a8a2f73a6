//! Layout engines and an SVG/HTML emitter for bibliometric figures.

pub mod figures;
pub mod force;
pub mod metrics;
pub mod palette;
pub mod sankey;
pub mod svg;
pub mod treemap;
pub mod view;
pub mod wordcloud;
pub mod worldmap;

pub use figures::{figure, RenderOptions};
pub use force::{layout_force, ForceConfig};
pub use palette::Palette;
pub use sankey::{layout_sankey, SankeyFlow, SankeyLayout};
pub use svg::{emit_html, emit_svg};
pub use treemap::layout_treemap;
pub use view::{Metadata, Primitive, Rect, Shape, Style, ViewSpec};
pub use wordcloud::{layout_wordcloud, WordcloudConfig, WordcloudLayout};

#[derive(Debug, thiserror::Error)]
pub enum RenderError {
    #[error("{0}")]
    Usage(String),
}

pub type Result<T> = std::result::Result<T, RenderError>;
