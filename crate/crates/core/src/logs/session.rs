use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;

use super::{LogEntry, LogError};
use crate::dataset::Dataset;

/// A user is the pair (remote host, user agent).
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct UserId {
    pub host: String,
    pub user_agent: Option<String>,
}

impl UserId {
    pub fn of(entry: &LogEntry) -> Self {
        UserId {
            host: entry.remote_host.clone(),
            user_agent: entry.user_agent.clone(),
        }
    }
}

impl fmt::Display for UserId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}|{}", self.host, self.user_agent.as_deref().unwrap_or("-"))
    }
}

/// Total order used to sort entries: timestamp first, then the remaining
/// fields so that equal-time entries sort the same way whatever the input
/// order.
fn entry_order(a: &LogEntry, b: &LogEntry) -> std::cmp::Ordering {
    a.timestamp
        .cmp(&b.timestamp)
        .then_with(|| a.uri.cmp(&b.uri))
        .then_with(|| a.method.cmp(&b.method))
        .then_with(|| a.protocol.cmp(&b.protocol))
        .then_with(|| a.status.cmp(&b.status))
        .then_with(|| a.bytes.cmp(&b.bytes))
        .then_with(|| a.referrer.cmp(&b.referrer))
        .then_with(|| {
            a.timestamp
                .offset()
                .local_minus_utc()
                .cmp(&b.timestamp.offset().local_minus_utc())
        })
}

/// Groups entries by user, each list sorted by timestamp.
pub fn identify_users(entries: &[LogEntry]) -> BTreeMap<UserId, Vec<LogEntry>> {
    let mut users: BTreeMap<UserId, Vec<LogEntry>> = BTreeMap::new();
    for e in entries {
        users.entry(UserId::of(e)).or_default().push(e.clone());
    }
    for list in users.values_mut() {
        list.sort_by(entry_order);
    }
    users
}

#[derive(Debug, Clone, PartialEq)]
pub struct SessionEntry {
    pub uri: String,
    pub dwell_seconds: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Session {
    pub user: UserId,
    pub entries: Vec<SessionEntry>,
}

/// Splits one user's entries wherever the gap to the previous entry exceeds
/// `timeout_s`. A page's dwell time is the gap to the next page of the same
/// session; the last page of a session gets `last_dwell_s`.
pub fn sessionize(user: &UserId, entries: &[LogEntry], timeout_s: f64, last_dwell_s: f64) -> Vec<Session> {
    let mut sorted: Vec<&LogEntry> = entries.iter().collect();
    sorted.sort_by(|a, b| entry_order(a, b));

    let mut sessions = Vec::new();
    let mut current: Vec<&LogEntry> = Vec::new();
    let close = |run: &[&LogEntry]| Session {
        user: user.clone(),
        entries: run
            .iter()
            .enumerate()
            .map(|(i, e)| SessionEntry {
                uri: e.uri.clone(),
                dwell_seconds: match run.get(i + 1) {
                    Some(next) => gap_seconds(e, next),
                    None => last_dwell_s,
                },
            })
            .collect(),
    };
    for e in sorted {
        if let Some(prev) = current.last() {
            if gap_seconds(prev, e) > timeout_s {
                sessions.push(close(&current));
                current.clear();
            }
        }
        current.push(e);
    }
    if !current.is_empty() {
        sessions.push(close(&current));
    }
    sessions
}

fn gap_seconds(from: &LogEntry, to: &LogEntry) -> f64 {
    (to.timestamp - from.timestamp).num_milliseconds() as f64 / 1000.0
}

/// Sorted, de-duplicated page URLs; a URL's position is its column.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct UrlVocabulary {
    urls: Vec<String>,
    index: HashMap<String, usize>,
}

impl UrlVocabulary {
    pub fn from_urls<I, S>(urls: I) -> Self
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        let set: BTreeSet<String> = urls.into_iter().map(Into::into).collect();
        let urls: Vec<String> = set.into_iter().collect();
        let index = urls.iter().enumerate().map(|(i, u)| (u.clone(), i)).collect();
        UrlVocabulary { urls, index }
    }

    pub fn from_entries(entries: &[LogEntry]) -> Self {
        Self::from_urls(entries.iter().map(|e| e.uri.as_str()))
    }

    pub fn urls(&self) -> &[String] {
        &self.urls
    }

    pub fn position(&self, url: &str) -> Option<usize> {
        self.index.get(url).copied()
    }

    pub fn len(&self) -> usize {
        self.urls.len()
    }

    pub fn is_empty(&self) -> bool {
        self.urls.is_empty()
    }
}

/// One row per session; column `j` holds the total dwell seconds spent on
/// URL `j` during that session.
pub fn vectorize_sessions(sessions: &[Session], vocab: &UrlVocabulary) -> Result<Dataset, LogError> {
    let n = vocab.len();
    if sessions.is_empty() {
        return Ok(Dataset::empty(n));
    }
    let mut flat = vec![0.0; sessions.len() * n];
    for (row, s) in sessions.iter().enumerate() {
        for e in &s.entries {
            let col = vocab
                .position(&e.uri)
                .ok_or_else(|| LogError::UnknownUrl(e.uri.clone()))?;
            flat[row * n + col] += e.dwell_seconds;
        }
    }
    Dataset::from_flat(flat, sessions.len(), n).map_err(LogError::Data)
}
