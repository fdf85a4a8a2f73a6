use std::io::Write;
use std::path::{Path, PathBuf};

use bibx_core::corpus::Corpus;
use bibx_core::countries::CountryTable;
use bibx_core::eda::{self, BarKind, CollaborationMode, EdaConfig, Element};
use bibx_core::fuse::{self, Dataset, FilterCriteria, MatchConfig, MergePlan};
use bibx_core::graphs::{self, Graph};
use bibx_core::ingest::{self, SourceDb};
use bibx_core::result::{AnalysisResult, GraphKind};
use bibx_core::summarize::extractive_summary;
use bibx_core::textkit::{self, Stopwords, TextField};
use bibx_core::topics::{fit_topics, topic_summary, TopicConfig};
use bibx_core::vectorlab::{load_vectors, project2d, to_dense, KMeansConfig, ProjectionMethod};
use bibx_render::{emit_html, emit_svg, figure, Palette, RenderOptions};
use serde::{Deserialize, Serialize};

use crate::config::Config;
use crate::{AskResult, Cli, CliError, Collaboration, Command, ExportFormat, ReportFormat, Source};

type Res<T> = Result<T, CliError>;

/// Data file written next to every figure.
#[derive(Debug, Serialize, Deserialize)]
pub struct DataFile {
    pub command: String,
    pub seed: u64,
    pub result: AnalysisResult,
}

struct Ctx<'a> {
    cli: &'a Cli,
    config: Config,
    stopwords: Stopwords,
    out: &'a mut dyn Write,
    err: &'a mut dyn Write,
}

fn io_err(path: &Path, e: std::io::Error) -> CliError {
    CliError::Data(format!("{}: {e}", path.display()))
}

fn read(path: &Path) -> Res<Vec<u8>> {
    std::fs::read(path).map_err(|e| io_err(path, e))
}

fn write(path: &Path, bytes: impl AsRef<[u8]>) -> Res<()> {
    if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
        std::fs::create_dir_all(dir).map_err(|e| io_err(dir, e))?;
    }
    std::fs::write(path, bytes).map_err(|e| io_err(path, e))
}

fn load_corpus(path: &Path) -> Res<Corpus> {
    let bytes = read(path)?;
    let text = String::from_utf8(bytes).map_err(|_| CliError::Data(format!("{}: not UTF-8", path.display())))?;
    Corpus::from_json(&text).map_err(|e| CliError::Data(format!("{}: {e}", path.display())))
}

fn save_corpus(path: &Path, corpus: &Corpus) -> Res<()> {
    write(path, corpus.to_json()?)
}

fn source_db(s: Source) -> SourceDb {
    match s {
        Source::Scopus => SourceDb::Scopus,
        Source::Wos => SourceDb::Wos,
        Source::Pubmed => SourceDb::Pubmed,
    }
}

fn load_export(ctx: &mut Ctx, path: &Path, source: SourceDb) -> Res<Vec<bibx_core::Document>> {
    let bytes = read(path)?;
    let (docs, warnings) =
        ingest::load(&bytes, source).map_err(|e| CliError::Data(format!("{}: {e}", path.display())))?;
    for w in warnings {
        let _ = writeln!(ctx.err, "WARN {}:{} {}", path.display(), w.offset, w.message);
    }
    Ok(docs)
}

impl Ctx<'_> {
    fn render_options(&self) -> Res<RenderOptions> {
        let mut o = RenderOptions { seed: self.cli.seed, ..RenderOptions::default() };
        if let Some(w) = self.cli.width.or(self.config.render.width) {
            o.width = w;
        }
        if let Some(h) = self.cli.height.or(self.config.render.height) {
            o.height = h;
        }
        if !(o.width >= 100.0 && o.height >= 100.0 && o.width.is_finite() && o.height.is_finite()) {
            return Err(CliError::Usage(format!(
                "figure size {}x{} is too small (minimum 100x100)",
                o.width, o.height
            )));
        }
        if let Some(p) = self.cli.palette.as_ref().or(self.config.render.palette.as_ref()) {
            o.palette = p.parse::<Palette>()?;
        }
        Ok(o)
    }

    /// Writes `<stem>.json` (+ CSV or edge list) and the SVG/HTML figure.
    fn emit_figure(&mut self, command: &str, result: AnalysisResult, out: &Option<PathBuf>) -> Res<()> {
        let target = out.clone().unwrap_or_else(|| PathBuf::from(format!("{command}.svg")));
        let opts = self.render_options()?;
        let view = figure(&result, &opts)?;
        let html = target.extension().is_some_and(|e| e.eq_ignore_ascii_case("html"));
        let doc = if html {
            let title = view.title.clone().unwrap_or_else(|| command.to_string());
            emit_html(&title, &[(command.to_string(), view)])
        } else {
            emit_svg(&view)
        };
        let sidecar = |ext: &str| target.with_extension(ext);
        match &result {
            AnalysisResult::Bar(s) | AnalysisResult::Treemap(s) => write(&sidecar("csv"), s.to_csv())?,
            AnalysisResult::Graph { graph, .. } | AnalysisResult::History { graph, .. } => {
                write(&sidecar("tsv"), graph.to_edge_list())?
            }
            _ => {}
        }
        let data = DataFile { command: command.to_string(), seed: self.cli.seed, result };
        let json = serde_json::to_string_pretty(&data).map_err(|e| CliError::Data(e.to_string()))?;
        write(&sidecar("json"), json)?;
        write(&target, doc)?;
        let _ = writeln!(self.out, "wrote {} and {}", target.display(), sidecar("json").display());
        Ok(())
    }

    fn vectors(
        &self,
        corpus: &Corpus,
        field: TextField,
        path: &Option<PathBuf>,
    ) -> Res<(Vec<Vec<f64>>, ProjectionMethod)> {
        match path {
            Some(p) => {
                let text =
                    String::from_utf8(read(p)?).map_err(|_| CliError::Data(format!("{}: not UTF-8", p.display())))?;
                let v =
                    load_vectors(&text, corpus.len()).map_err(|e| CliError::Data(format!("{}: {e}", p.display())))?;
                Ok((v, ProjectionMethod::External))
            }
            None => Ok((textkit::tfidf(corpus, field, &self.stopwords)?.to_dense(), ProjectionMethod::Tsvd)),
        }
    }
}

fn graph_result(kind: GraphKind, graph: Graph) -> AnalysisResult {
    AnalysisResult::Graph { graph_kind: kind, graph }
}

fn default_result(ctx: &Ctx, corpus: &Corpus, which: AskResult) -> Res<AnalysisResult> {
    let cfg = EdaConfig::default();
    Ok(match which {
        AskResult::Report => AnalysisResult::Report(eda::build_report(corpus, &cfg)?),
        AskResult::Wordcloud => AnalysisResult::Wordcloud {
            field: TextField::Abstract,
            words: textkit::word_frequencies(corpus, TextField::Abstract, &ctx.stopwords, 100),
        },
        AskResult::Ngrams => {
            let streams = textkit::corpus_streams(corpus, TextField::Abstract, &ctx.stopwords);
            let mut grams = textkit::ngrams(&streams, 2)?;
            grams.truncate(15);
            AnalysisResult::Ngrams { field: TextField::Abstract, n: 2, grams }
        }
        AskResult::Evolution => AnalysisResult::Evolution {
            element: Element::KeywordPlus,
            series: eda::evolution(corpus, Element::KeywordPlus, None, 5)?,
        },
        AskResult::Treemap => AnalysisResult::Treemap(eda::treemap_data(corpus, Element::KeywordPlus, 15)),
        AskResult::Sankey => AnalysisResult::Sankey {
            left: Element::Author,
            right: Element::Country,
            flows: eda::sankey_flows(corpus, Element::Author, Element::Country, 10)?,
        },
        AskResult::Productivity => AnalysisResult::Productivity(eda::productivity(corpus, 15)),
        AskResult::DocumentsPerYear => AnalysisResult::Bar(eda::bar_series(corpus, BarKind::DocumentsPerYear, &cfg)?),
        AskResult::Network => graph_result(GraphKind::Citation, graphs::citation_network(corpus, 1)),
        AskResult::Similarity => graph_result(GraphKind::SharedReferences, graphs::shared_reference_graph(corpus, 10)),
        AskResult::Collab => graph_result(GraphKind::Collaboration, graphs::coauthorship(corpus)),
        AskResult::Worldmap => {
            graph_result(GraphKind::CountryCollaboration, graphs::country_collab(corpus, CountryTable::embedded()))
        }
    })
}

fn non_empty(v: &[String]) -> Option<std::collections::BTreeSet<String>> {
    (!v.is_empty()).then(|| v.iter().map(|s| s.trim().to_string()).collect())
}

fn documents_csv(corpus: &Corpus) -> String {
    use bibx_core::eda::csv_field;
    let mut out = String::from("id,title,year,source,doc_type,authors,times_cited,doi\n");
    for d in &corpus.documents {
        out.push_str(&format!(
            "{},{},{},{},{},{},{},{}\n",
            d.id,
            csv_field(&d.title),
            d.year.map(|y| y.to_string()).unwrap_or_default(),
            csv_field(&d.source),
            csv_field(&d.doc_type),
            csv_field(&d.authors.join("; ")),
            d.times_cited.map(|c| c.to_string()).unwrap_or_default(),
            csv_field(d.doi.as_deref().unwrap_or("")),
        ));
    }
    out
}

pub fn execute(cli: &Cli, out: &mut dyn Write, err: &mut dyn Write) -> Res<()> {
    let config = match &cli.config {
        Some(p) => Config::load(p)?,
        None => Config::default(),
    };
    let stopwords = match cli.stopwords.as_ref().or(config.text.stopwords_path.as_ref()) {
        Some(p) => {
            let text =
                String::from_utf8(read(p)?).map_err(|_| CliError::Data(format!("{}: not UTF-8", p.display())))?;
            Stopwords::from_text(&text)
        }
        None => Stopwords::english().clone(),
    };
    let mut ctx = Ctx { cli, config, stopwords, out, err };
    let mcfg = MatchConfig::default();
    let seed = cli.seed;

    match &cli.command {
        Command::Ingest { input, source, out } => {
            let docs = load_export(&mut ctx, input, source_db(*source))?;
            let corpus = fuse::label(docs, &mcfg)?;
            save_corpus(out, &corpus)?;
            let _ = writeln!(ctx.out, "{} documents written to {}", corpus.len(), out.display());
        }
        Command::Merge { inputs, out } => {
            let mut datasets = Vec::new();
            for spec in inputs {
                let (path, src) = spec
                    .rsplit_once(':')
                    .ok_or_else(|| CliError::Usage(format!("--in expects path:source, got `{spec}`")))?;
                let source: SourceDb = src.parse()?;
                let docs = load_export(&mut ctx, Path::new(path), source)?;
                datasets.push(Dataset { name: path.to_string(), documents: docs });
            }
            let outcome = fuse::merge(&MergePlan::new(datasets)?, &mcfg)?;
            if outcome.title_fallback_suspicious() {
                let _ = writeln!(
                    ctx.err,
                    "WARN {} of {} duplicates were matched by title only; check for missing DOIs",
                    outcome.title_matches, outcome.duplicates
                );
            }
            save_corpus(out, &outcome.corpus)?;
            let _ = writeln!(
                ctx.out,
                "{} documents ({} duplicates merged) written to {}",
                outcome.corpus.len(),
                outcome.duplicates,
                out.display()
            );
        }
        Command::Filter { corpus, types, years, sources, zones, countries, languages, require_abstract, out } => {
            let c = load_corpus(corpus)?;
            let crit = FilterCriteria {
                doc_types: non_empty(types),
                year_range: *years,
                sources: non_empty(sources),
                bradford_zones: (!zones.is_empty()).then(|| zones.iter().copied().collect()),
                countries: non_empty(countries),
                languages: non_empty(languages),
                require_abstract: *require_abstract,
            };
            let f = fuse::filter(&c, &crit, &mcfg)?;
            save_corpus(out, &f.corpus)?;
            let _ = writeln!(ctx.out, "kept {} of {} documents, written to {}", f.corpus.len(), c.len(), out.display());
        }
        Command::Report { corpus, format, collaboration } => {
            let c = load_corpus(corpus)?;
            let mode = match collaboration {
                Collaboration::DistinctAuthors => CollaborationMode::DistinctAuthors,
                Collaboration::Appearances => CollaborationMode::Appearances,
            };
            let report = eda::build_report(&c, &EdaConfig { collaboration: mode, ..EdaConfig::default() })?;
            let text = match format {
                ReportFormat::Text => report.to_text(),
                ReportFormat::Json => {
                    serde_json::to_string_pretty(&report).map_err(|e| CliError::Data(e.to_string()))? + "\n"
                }
            };
            let _ = write!(ctx.out, "{text}");
        }
        Command::Ngram { corpus, field, n, top, fig } => {
            let c = load_corpus(corpus)?;
            let streams = textkit::corpus_streams(&c, *field, &ctx.stopwords);
            let mut grams = textkit::ngrams(&streams, *n)?;
            grams.truncate(*top);
            for (g, k) in &grams {
                let _ = writeln!(ctx.out, "{g}\t{k}");
            }
            ctx.emit_figure("ngram", AnalysisResult::Ngrams { field: *field, n: *n, grams }, &fig.out)?;
        }
        Command::Wordcloud { corpus, field, top, fig } => {
            let c = load_corpus(corpus)?;
            let words = textkit::word_frequencies(&c, *field, &ctx.stopwords, *top);
            ctx.emit_figure("wordcloud", AnalysisResult::Wordcloud { field: *field, words }, &fig.out)?;
        }
        Command::Project { corpus, field, clusters, vectors, fig } => {
            let c = load_corpus(corpus)?;
            let (v, method) = ctx.vectors(&c, *field, vectors)?;
            let citations: Vec<String> = c.documents.iter().map(|d| d.short_citation()).collect();
            let k = (*clusters > 0).then_some(*clusters);
            let p = project2d(&to_dense(&v), method, &citations, k, seed, &KMeansConfig::default())?;
            ctx.emit_figure("project", AnalysisResult::Projection(p), &fig.out)?;
        }
        Command::Evolution { corpus, element, top, years, fig } => {
            let c = load_corpus(corpus)?;
            let series = eda::evolution(&c, *element, *years, *top)?;
            ctx.emit_figure("evolution", AnalysisResult::Evolution { element: *element, series }, &fig.out)?;
        }
        Command::Treemap { corpus, element, top, fig } => {
            let c = load_corpus(corpus)?;
            ctx.emit_figure("treemap", AnalysisResult::Treemap(eda::treemap_data(&c, *element, *top)), &fig.out)?;
        }
        Command::Sankey { corpus, left, right, top, fig } => {
            let c = load_corpus(corpus)?;
            let flows = eda::sankey_flows(&c, *left, *right, *top)?;
            ctx.emit_figure("sankey", AnalysisResult::Sankey { left: *left, right: *right, flows }, &fig.out)?;
        }
        Command::Productivity { corpus, top, fig } => {
            let c = load_corpus(corpus)?;
            ctx.emit_figure("productivity", AnalysisResult::Productivity(eda::productivity(&c, *top)), &fig.out)?;
        }
        Command::Bar { corpus, kind, top, fig } => {
            let c = load_corpus(corpus)?;
            let s = eda::bar_series(&c, *kind, &EdaConfig { top_n: *top, ..EdaConfig::default() })?;
            ctx.emit_figure("bar", AnalysisResult::Bar(s), &fig.out)?;
        }
        Command::Network { corpus, min_citations, fig } => {
            let c = load_corpus(corpus)?;
            let g = graphs::citation_network(&c, *min_citations);
            ctx.emit_figure("network", graph_result(GraphKind::Citation, g), &fig.out)?;
        }
        Command::History { corpus, doc, fig } => {
            let c = load_corpus(corpus)?;
            let chain = graphs::citation_history(&c, *doc)?;
            for (a, b) in &chain.backward {
                let _ = writeln!(ctx.out, "backward\t{a} -> {b}");
            }
            for (a, b) in &chain.forward {
                let _ = writeln!(ctx.out, "forward\t{a} -> {b}");
            }
            let graph = chain.to_graph(&c);
            ctx.emit_figure("history", AnalysisResult::History { chain, graph }, &fig.out)?;
        }
        Command::Similarity { corpus, min_shared, fig } => {
            let c = load_corpus(corpus)?;
            let g = graphs::shared_reference_graph(&c, *min_shared);
            ctx.emit_figure("similarity", graph_result(GraphKind::SharedReferences, g), &fig.out)?;
        }
        Command::Collab { corpus, ego, depth, fig } => {
            let c = load_corpus(corpus)?;
            let mut g = graphs::coauthorship(&c);
            if let Some(name) = ego {
                g = graphs::ego(&g, name, *depth)?;
            }
            ctx.emit_figure("collab", graph_result(GraphKind::Collaboration, g), &fig.out)?;
        }
        Command::Worldmap { corpus, fig } => {
            let c = load_corpus(corpus)?;
            let g = graphs::country_collab(&c, CountryTable::embedded());
            ctx.emit_figure("worldmap", graph_result(GraphKind::CountryCollaboration, g), &fig.out)?;
        }
        Command::Topics { corpus, k, field, vectors, top_words, fig } => {
            let c = load_corpus(corpus)?;
            let (v, _) = ctx.vectors(&c, *field, vectors)?;
            let cfg = TopicConfig { top_words: *top_words, ..TopicConfig::default() };
            let model = fit_topics(&c, &v, *k, seed, &ctx.stopwords, &cfg)?;
            let rows = topic_summary(&model, &c);
            for r in &rows {
                let _ = writeln!(ctx.out, "{r}");
            }
            ctx.emit_figure("topics", AnalysisResult::Topics { model, rows }, &fig.out)?;
        }
        Command::Summarize { corpus, docs, sentences, out } => {
            let c = load_corpus(corpus)?;
            let s = extractive_summary(&c, docs, *sentences, &ctx.stopwords)?;
            let _ = writeln!(ctx.out, "{}", s.text());
            if let Some(p) = out {
                let data = DataFile { command: "summarize".into(), seed, result: AnalysisResult::Summary(s) };
                write(p, serde_json::to_string_pretty(&data).map_err(|e| CliError::Data(e.to_string()))?)?;
            }
        }
        Command::Ask { corpus, result, from, question, log } => {
            let llm = ctx.config.llm.clone().with_env_key();
            // Fail on a missing key before doing any work.
            if llm.api_key.is_none() {
                return Err(bibx_llm::LlmError::MissingKey.into());
            }
            let r = match (from, result) {
                (Some(p), _) => {
                    let text = String::from_utf8(read(p)?)
                        .map_err(|_| CliError::Data(format!("{}: not UTF-8", p.display())))?;
                    match serde_json::from_str::<DataFile>(&text) {
                        Ok(d) => d.result,
                        Err(_) => AnalysisResult::from_json(&text)
                            .map_err(|e| CliError::Data(format!("{}: {e}", p.display())))?,
                    }
                }
                (None, Some(which)) => default_result(&ctx, &load_corpus(corpus)?, *which)?,
                (None, None) => return Err(CliError::Usage("ask needs --result or --from".into())),
            };
            let exchange = bibx_llm::ask(&r, question, &llm)?;
            let _ = writeln!(ctx.out, "{}", exchange.answer);
            if let Some(p) = log {
                bibx_llm::append_log(p, &exchange)?;
            }
        }
        Command::Export { corpus, format, field, out } => {
            let c = load_corpus(corpus)?;
            match format {
                ExportFormat::Json => save_corpus(out, &c)?,
                ExportFormat::Csv => write(out, documents_csv(&c))?,
                ExportFormat::Tfidf => {
                    let m = textkit::tfidf(&c, *field, &ctx.stopwords)?;
                    write(out, m.to_market())?;
                    write(&out.with_extension("vocab"), m.vocabulary.join("\n") + "\n")?;
                }
            }
            let _ = writeln!(ctx.out, "wrote {}", out.display());
        }
    }
    Ok(())
}
