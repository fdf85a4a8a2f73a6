#![allow(dead_code)]

use std::path::{Path, PathBuf};

pub fn data(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/data").join(name)
}

pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

pub fn bibx(args: &[&str]) -> Outcome {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let argv = std::iter::once("bibx").chain(args.iter().copied());
    let code = bibx_cli::run_with(argv, &mut out, &mut err);
    Outcome { code, stdout: String::from_utf8(out).unwrap(), stderr: String::from_utf8(err).unwrap() }
}

pub fn p(path: &Path) -> &str {
    path.to_str().unwrap()
}

/// Merges the three fixture exports into `dir/corpus.json`.
pub fn merged(dir: &Path) -> PathBuf {
    let out = dir.join("corpus.json");
    let ins = [
        format!("{}:scopus", p(&data("scopus.bib"))),
        format!("{}:wos", p(&data("wos.bib"))),
        format!("{}:pubmed", p(&data("pubmed.txt"))),
    ];
    let r = bibx(&["merge", "--in", &ins[0], "--in", &ins[1], "--in", &ins[2], "-o", p(&out)]);
    assert_eq!(r.code, 0, "{}", r.stderr);
    out
}
