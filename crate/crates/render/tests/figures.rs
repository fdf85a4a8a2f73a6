#[path = "common/samples.rs"]
mod samples;

use std::path::PathBuf;

use bibx_render::sankey::{layout_sankey, SankeyFlow};
use bibx_render::{emit_html, emit_svg, figure, Rect, RenderOptions};

fn golden_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/data/golden")
}

#[test]
fn every_result_renders_well_formed_and_in_bounds() {
    let c = samples::corpus();
    let opts = RenderOptions::default();
    for r in samples::all_results(&c) {
        let view = figure(&r, &opts).unwrap();
        assert!(view.out_of_bounds().is_empty(), "{}: {:?}", r.kind_name(), view.out_of_bounds());
        let svg = emit_svg(&view);
        let doc = roxmltree::Document::parse(&svg).unwrap_or_else(|e| panic!("{}: {e}", r.kind_name()));
        assert_eq!(doc.root_element().tag_name().name(), "svg");
        assert!(view.elements.len() > 2, "{} drew nothing", r.kind_name());
        assert_eq!(svg, emit_svg(&figure(&r, &opts).unwrap()), "{} not deterministic", r.kind_name());
    }
}

#[test]
fn html_page_wraps_views() {
    let c = samples::corpus();
    let opts = RenderOptions::default();
    let views: Vec<(String, _)> = samples::all_results(&c)
        .iter()
        .take(3)
        .map(|r| (r.kind_name().to_string(), figure(r, &opts).unwrap()))
        .collect();
    let html = emit_html("bibx figures", &views);
    assert_eq!(html.matches("<svg ").count(), 3);
    assert!(html.contains("<h2>report</h2>"));
}

/// Byte-for-byte comparison with stored SVGs; set BIBX_UPDATE_GOLDEN=1 to rewrite them.
#[test]
fn golden_files() {
    let c = samples::corpus();
    let opts = RenderOptions { width: 640.0, height: 420.0, seed: 7, ..RenderOptions::default() };
    let update = std::env::var_os("BIBX_UPDATE_GOLDEN").is_some();
    for r in samples::all_results(&c) {
        let name = match &r {
            bibx_core::result::AnalysisResult::Graph { graph_kind, .. } => {
                format!("graph_{graph_kind:?}").to_lowercase()
            }
            other => other.kind_name().to_string(),
        };
        let path = golden_dir().join(format!("{name}.svg"));
        let svg = emit_svg(&figure(&r, &opts).unwrap());
        if update {
            std::fs::write(&path, &svg).unwrap();
        } else {
            let stored =
                std::fs::read_to_string(&path).unwrap_or_else(|_| panic!("missing golden file {}", path.display()));
            assert!(stored == svg, "{name} differs from {}", path.display());
        }
    }
}

/// Ten flows in which one author appears eight times.
#[test]
fn sankey_author_touching_eight_flows() {
    let countries = ["taiwan", "china", "iran", "turkey", "india", "spain", "poland", "japan"];
    let mut flows: Vec<SankeyFlow> =
        countries.iter().map(|c| SankeyFlow { left: "Chen, T.-Y.".into(), right: c.to_string(), weight: 2 }).collect();
    flows.push(SankeyFlow { left: "Xu, Z.".into(), right: "china".into(), weight: 3 });
    flows.push(SankeyFlow { left: "Wang, J.".into(), right: "taiwan".into(), weight: 1 });
    let l = layout_sankey(&flows, Rect::new(0.0, 0.0, 400.0, 300.0), 10.0, 4.0);
    assert_eq!(l.ribbons.len(), 10);
    let chen = l.left.iter().position(|b| b.label == "Chen, T.-Y.").unwrap();
    assert_eq!(chen, 0, "heaviest node first");
    assert_eq!(l.ribbons.iter().filter(|r| r.left == chen).count(), 8);
}
