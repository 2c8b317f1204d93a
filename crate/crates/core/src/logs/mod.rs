//! Access-log preprocessing: parse, clean, identify users, split sessions
//! and turn each session into a row of per-URL dwell seconds.

mod clean;
mod entry;
mod session;

pub use clean::{clean_entries, CleanRules};
pub use entry::{parse_log, parse_log_line, LogEntry, LogFormat, RejectedLine};
pub use session::{identify_users, sessionize, vectorize_sessions, Session, SessionEntry, UrlVocabulary, UserId};

use rayon::prelude::*;
use thiserror::Error;

use crate::dataset::{DataError, Dataset};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum LogError {
    #[error("malformed {field}: {detail}")]
    MalformedLine { field: &'static str, detail: String },
    #[error("bad timestamp {0:?}")]
    BadTimestamp(String),
    #[error("bad status {0:?}")]
    BadStatus(String),
    #[error("url {0:?} is not in the vocabulary")]
    UnknownUrl(String),
    #[error(transparent)]
    Data(#[from] DataError),
}

/// The URI without its query string.
pub fn strip_query(uri: &str) -> &str {
    uri.split_once('?').map_or(uri, |(path, _)| path)
}

#[derive(Debug, Clone, PartialEq)]
pub struct PipelineConfig {
    pub clean: CleanRules,
    pub timeout_s: f64,
    pub last_dwell_s: f64,
    pub strip_query: bool,
}

impl Default for PipelineConfig {
    fn default() -> Self {
        PipelineConfig {
            clean: CleanRules::default(),
            timeout_s: 30.0 * 60.0,
            last_dwell_s: 60.0,
            strip_query: true,
        }
    }
}

/// Entry, user and session counts at each pipeline stage.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PipelineSummary {
    pub raw_entries: usize,
    pub cleaned_entries: usize,
    pub users: usize,
    pub sessions: usize,
    pub urls: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Preprocessed {
    pub summary: PipelineSummary,
    pub vocabulary: UrlVocabulary,
    pub sessions: Vec<Session>,
    pub dataset: Dataset,
}

/// Runs the whole pipeline over already-parsed entries. Sessions are
/// ordered by user, then time.
pub fn preprocess(entries: &[LogEntry], config: &PipelineConfig) -> Result<Preprocessed, LogError> {
    let mut cleaned = clean_entries(entries, &config.clean);
    if config.strip_query {
        for e in &mut cleaned {
            let path = strip_query(&e.uri).len();
            e.uri.truncate(path);
        }
    }
    let vocabulary = UrlVocabulary::from_entries(&cleaned);
    let users = identify_users(&cleaned);
    let per_user: Vec<Vec<Session>> = users
        .par_iter()
        .map(|(user, list)| sessionize(user, list, config.timeout_s, config.last_dwell_s))
        .collect();
    let sessions: Vec<Session> = per_user.into_iter().flatten().collect();
    let dataset = vectorize_sessions(&sessions, &vocabulary)?;
    Ok(Preprocessed {
        summary: PipelineSummary {
            raw_entries: entries.len(),
            cleaned_entries: cleaned.len(),
            users: users.len(),
            sessions: sessions.len(),
            urls: vocabulary.len(),
        },
        vocabulary,
        sessions,
        dataset,
    })
}
