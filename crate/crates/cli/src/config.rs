use std::path::{Path, PathBuf};

use bibx_llm::LlmConfig;
use serde::Deserialize;

use crate::CliError;

#[derive(Debug, Clone, Default, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RenderSection {
    pub width: Option<f64>,
    pub height: Option<f64>,
    pub palette: Option<String>,
}

#[derive(Debug, Clone, Default, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct TextSection {
    pub stopwords_path: Option<PathBuf>,
}

#[derive(Debug, Clone, Default, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Config {
    pub llm: LlmConfig,
    pub render: RenderSection,
    pub text: TextSection,
}

impl Config {
    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Data(format!("cannot read config {}: {e}", path.display())))?;
        toml::from_str(&text).map_err(|e| CliError::Usage(format!("invalid config {}: {e}", path.display())))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_sections() {
        let c: Config = toml::from_str(
            "[llm]\nmodel = \"m\"\ntimeout_s = 5\ncontext_budget_chars = 100\n[render]\nwidth = 300\n[text]\nstopwords_path = \"sw.txt\"\n",
        )
        .unwrap();
        assert_eq!(c.llm.model, "m");
        assert_eq!(c.llm.timeout_s, 5.0);
        assert_eq!(c.llm.context_budget_chars, 100);
        assert_eq!(c.render.width, Some(300.0));
        assert_eq!(c.text.stopwords_path.as_deref(), Some(Path::new("sw.txt")));
        assert!(toml::from_str::<Config>("[render]\nbogus = 1\n").is_err());
    }
}
