//! The `bibx` command line: each subcommand reads and/or writes the corpus JSON file.

mod commands;
pub mod config;

pub use commands::DataFile;

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;

use bibx_core::eda::{BarKind, Element};
use bibx_core::textkit::TextField;
use bibx_core::topics::TopicCount;
use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("{0}")]
    Data(String),
    #[error("{0}")]
    Service(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => 1,
            CliError::Data(_) => 2,
            CliError::Service(_) => 3,
        }
    }
}

impl From<bibx_core::Error> for CliError {
    fn from(e: bibx_core::Error) -> Self {
        match e {
            bibx_core::Error::Usage(m) => CliError::Usage(m),
            other => CliError::Data(other.to_string()),
        }
    }
}

impl From<bibx_render::RenderError> for CliError {
    fn from(e: bibx_render::RenderError) -> Self {
        CliError::Usage(e.to_string())
    }
}

impl From<bibx_llm::LlmError> for CliError {
    fn from(e: bibx_llm::LlmError) -> Self {
        use bibx_llm::LlmError as L;
        match e {
            L::MissingKey | L::Config(_) => CliError::Usage(e.to_string()),
            L::Io(_) => CliError::Data(e.to_string()),
            _ => CliError::Service(e.to_string()),
        }
    }
}

#[derive(Debug, Parser)]
#[command(name = "bibx", version, about = "Bibliometric analysis of Scopus, Web of Science and PubMed exports")]
pub struct Cli {
    /// Seed for every randomized step.
    #[arg(long, global = true, default_value_t = 42)]
    pub seed: u64,
    /// TOML config file with [llm], [render] and [text] sections.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    /// Figure width in pixels.
    #[arg(long, global = true)]
    pub width: Option<f64>,
    /// Figure height in pixels.
    #[arg(long, global = true)]
    pub height: Option<f64>,
    /// Palette name (default, muted, gray) or comma-separated #rrggbb colors.
    #[arg(long, global = true)]
    pub palette: Option<String>,
    /// Stopword file, one word per line.
    #[arg(long, global = true)]
    pub stopwords: Option<PathBuf>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Source {
    Scopus,
    Wos,
    Pubmed,
}

#[derive(Debug, Args)]
pub struct FigureOut {
    /// Output SVG (or .html); data files are written next to it.
    #[arg(short, long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Parse one export file into a labelled corpus.
    Ingest {
        input: PathBuf,
        #[arg(long, value_enum)]
        source: Source,
        #[arg(short, long)]
        out: PathBuf,
    },
    /// Merge several exports, earlier files taking precedence.
    Merge {
        /// `path:source`, repeated in precedence order.
        #[arg(long = "in", required = true)]
        inputs: Vec<String>,
        #[arg(short, long)]
        out: PathBuf,
    },
    /// Keep documents matching every given criterion.
    Filter {
        corpus: PathBuf,
        /// Comma-separated document types.
        #[arg(long, value_delimiter = ',')]
        types: Vec<String>,
        /// Inclusive year range `min:max`.
        #[arg(long, value_parser = parse_range)]
        years: Option<(i32, i32)>,
        #[arg(long, value_delimiter = ',')]
        sources: Vec<String>,
        /// Bradford zones to keep (1, 2, 3).
        #[arg(long, value_delimiter = ',')]
        zones: Vec<u8>,
        #[arg(long, value_delimiter = ',')]
        countries: Vec<String>,
        #[arg(long, value_delimiter = ',')]
        languages: Vec<String>,
        #[arg(long)]
        require_abstract: bool,
        #[arg(short, long)]
        out: PathBuf,
    },
    /// Print the main-information report.
    Report {
        corpus: PathBuf,
        #[arg(long, value_enum, default_value = "text")]
        format: ReportFormat,
        /// Collaboration index convention.
        #[arg(long, value_enum, default_value = "distinct-authors")]
        collaboration: Collaboration,
    },
    /// Most frequent n-grams of a text field.
    Ngram {
        corpus: PathBuf,
        #[arg(long, default_value = "abstract")]
        field: TextField,
        #[arg(short, default_value_t = 2)]
        n: usize,
        #[arg(long, default_value_t = 15)]
        top: usize,
        #[command(flatten)]
        fig: FigureOut,
    },
    /// Word cloud of a text field.
    Wordcloud {
        corpus: PathBuf,
        #[arg(long, default_value = "abstract")]
        field: TextField,
        #[arg(long, default_value_t = 100)]
        top: usize,
        #[command(flatten)]
        fig: FigureOut,
    },
    /// 2-D projection of documents, clustered with k-means.
    Project {
        corpus: PathBuf,
        #[arg(long, default_value = "abstract")]
        field: TextField,
        /// Number of k-means clusters (0 disables clustering).
        #[arg(long, default_value_t = 4)]
        clusters: usize,
        /// Precomputed embedding vectors, one row per document.
        #[arg(long)]
        vectors: Option<PathBuf>,
        #[command(flatten)]
        fig: FigureOut,
    },
    /// Yearly evolution of the most frequent values of an element.
    Evolution {
        corpus: PathBuf,
        #[arg(long, default_value = "keyword_plus")]
        element: Element,
        #[arg(long, default_value_t = 5)]
        top: usize,
        #[arg(long, value_parser = parse_range)]
        years: Option<(i32, i32)>,
        #[command(flatten)]
        fig: FigureOut,
    },
    /// Treemap of the most frequent values of an element.
    Treemap {
        corpus: PathBuf,
        #[arg(long, default_value = "keyword_plus")]
        element: Element,
        #[arg(long, default_value_t = 15)]
        top: usize,
        #[command(flatten)]
        fig: FigureOut,
    },
    /// Sankey diagram between two elements.
    Sankey {
        corpus: PathBuf,
        #[arg(long, default_value = "author")]
        left: Element,
        #[arg(long, default_value = "country")]
        right: Element,
        #[arg(long, default_value_t = 10)]
        top: usize,
        #[command(flatten)]
        fig: FigureOut,
    },
    /// Author production per year.
    Productivity {
        corpus: PathBuf,
        #[arg(long, default_value_t = 15)]
        top: usize,
        #[command(flatten)]
        fig: FigureOut,
    },
    /// One of the ranked bar charts.
    Bar {
        corpus: PathBuf,
        #[arg(long, default_value = "documents-per-year")]
        kind: BarKind,
        #[arg(long, default_value_t = 15)]
        top: usize,
        #[command(flatten)]
        fig: FigureOut,
    },
    /// Citation network of documents and cited works.
    Network {
        corpus: PathBuf,
        /// Keep cited works with at least this many citing documents.
        #[arg(long, default_value_t = 1)]
        min_citations: usize,
        #[command(flatten)]
        fig: FigureOut,
    },
    /// Backward and forward citation chains of one document.
    History {
        corpus: PathBuf,
        #[arg(long)]
        doc: usize,
        #[command(flatten)]
        fig: FigureOut,
    },
    /// Documents linked by shared references.
    #[command(alias = "cocitation")]
    Similarity {
        corpus: PathBuf,
        #[arg(long, default_value_t = 10)]
        min_shared: usize,
        #[command(flatten)]
        fig: FigureOut,
    },
    /// Co-authorship network, optionally around one author.
    Collab {
        corpus: PathBuf,
        /// Author whose ego network to draw.
        #[arg(long)]
        ego: Option<String>,
        /// Hops from the ego author (unlimited when absent).
        #[arg(long)]
        depth: Option<usize>,
        #[command(flatten)]
        fig: FigureOut,
    },
    /// Country collaboration on a world map.
    Worldmap {
        corpus: PathBuf,
        #[command(flatten)]
        fig: FigureOut,
    },
    /// Topics from clustered document vectors.
    Topics {
        corpus: PathBuf,
        /// Number of topics, or `auto`.
        #[arg(short, long, default_value = "auto", value_parser = parse_topic_count)]
        k: TopicCount,
        #[arg(long, default_value = "abstract")]
        field: TextField,
        #[arg(long)]
        vectors: Option<PathBuf>,
        #[arg(long, default_value_t = 10)]
        top_words: usize,
        #[command(flatten)]
        fig: FigureOut,
    },
    /// Extractive summary of selected documents' abstracts.
    Summarize {
        corpus: PathBuf,
        /// Comma-separated document ids.
        #[arg(long, value_delimiter = ',', required = true)]
        docs: Vec<usize>,
        #[arg(long, default_value_t = 3)]
        sentences: usize,
        /// Also write the summary as JSON.
        #[arg(short, long)]
        out: Option<PathBuf>,
    },
    /// Ask a chat-completion service about an analysis result.
    Ask {
        corpus: PathBuf,
        /// Result to compute with default settings.
        #[arg(long, value_enum, conflicts_with = "from")]
        result: Option<AskResult>,
        /// Data file written by a figure command.
        #[arg(long)]
        from: Option<PathBuf>,
        /// The question.
        #[arg(long = "q")]
        question: String,
        /// Append the exchange to this JSON-lines log.
        #[arg(long)]
        log: Option<PathBuf>,
    },
    /// Write the corpus or its term matrix in another format.
    Export {
        corpus: PathBuf,
        #[arg(long, value_enum)]
        format: ExportFormat,
        #[arg(long, default_value = "abstract")]
        field: TextField,
        #[arg(short, long)]
        out: PathBuf,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ReportFormat {
    Text,
    Json,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Collaboration {
    DistinctAuthors,
    Appearances,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum AskResult {
    Report,
    Wordcloud,
    Ngrams,
    Evolution,
    Treemap,
    Sankey,
    Productivity,
    DocumentsPerYear,
    Network,
    Similarity,
    Collab,
    Worldmap,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ExportFormat {
    /// Pretty-printed corpus JSON.
    Json,
    /// One row per document.
    Csv,
    /// TF-IDF matrix triplets plus a `.vocab` file.
    Tfidf,
}

fn parse_range(s: &str) -> Result<(i32, i32), String> {
    let (a, b) = s.split_once(':').ok_or_else(|| format!("expected min:max, got `{s}`"))?;
    let a = a.trim().parse().map_err(|_| format!("bad year `{a}`"))?;
    let b = b.trim().parse().map_err(|_| format!("bad year `{b}`"))?;
    Ok((a, b))
}

fn parse_topic_count(s: &str) -> Result<TopicCount, String> {
    if s.eq_ignore_ascii_case("auto") {
        return Ok(TopicCount::Auto);
    }
    match s.parse::<usize>() {
        Ok(k) if k >= 1 => Ok(TopicCount::Fixed(k)),
        _ => Err(format!("expected a positive number or `auto`, got `{s}`")),
    }
}

/// Parses `args` (program name first) and runs the command. Returns the exit code.
pub fn run_with<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let text = e.render().to_string();
            let _ = if code == 0 { write!(stdout, "{text}") } else { write!(stderr, "{text}") };
            return code;
        }
    };
    match commands::execute(&cli, stdout, stderr) {
        Ok(()) => 0,
        Err(e) => {
            let _ = writeln!(stderr, "error: {e}");
            e.exit_code()
        }
    }
}

pub fn run() -> i32 {
    let out = std::io::stdout();
    let err = std::io::stderr();
    run_with(std::env::args_os(), &mut out.lock(), &mut err.lock())
}
