use std::ops::RangeInclusive;

use super::LogEntry;

/// Filters applied to raw log entries before user identification.
#[derive(Debug, Clone, PartialEq)]
pub struct CleanRules {
    /// Lower-case URI path suffixes to drop.
    pub drop_suffixes: Vec<String>,
    pub keep_status: RangeInclusive<u16>,
    /// Case-insensitive substrings that mark a user agent as a robot.
    pub robot_patterns: Vec<String>,
}

impl Default for CleanRules {
    fn default() -> Self {
        let owned = |xs: &[&str]| xs.iter().map(|s| s.to_string()).collect();
        CleanRules {
            drop_suffixes: owned(&[".gif", ".jpg", ".jpeg", ".png", ".css", ".js", ".ico"]),
            keep_status: 200..=399,
            robot_patterns: owned(&[
                "bot",
                "crawler",
                "spider",
                "slurp",
                "archiver",
                "feedfetcher",
                "mediapartners",
            ]),
        }
    }
}

impl CleanRules {
    pub fn keeps(&self, entry: &LogEntry) -> bool {
        !self.drops_suffix(&entry.uri) && self.keep_status.contains(&entry.status) && !self.is_robot(entry)
    }

    fn drops_suffix(&self, uri: &str) -> bool {
        let path = super::strip_query(uri).to_ascii_lowercase();
        self.drop_suffixes.iter().any(|s| path.ends_with(s.as_str()))
    }

    fn is_robot(&self, entry: &LogEntry) -> bool {
        let Some(ua) = &entry.user_agent else {
            return false;
        };
        let ua = ua.to_ascii_lowercase();
        self.robot_patterns.iter().any(|p| ua.contains(&p.to_ascii_lowercase()))
    }
}

/// Keeps the entries that pass every rule, in input order.
pub fn clean_entries(entries: &[LogEntry], rules: &CleanRules) -> Vec<LogEntry> {
    entries.iter().filter(|e| rules.keeps(e)).cloned().collect()
}

#[cfg(test)]
mod tests {
    use super::super::{parse_log_line, LogFormat};
    use super::*;

    fn entry(uri: &str, status: u16, ua: &str) -> LogEntry {
        let line = format!(r#"10.0.0.1 - - [01/Feb/2011:10:00:00 +0000] "GET {uri} HTTP/1.1" {status} 100 "-" "{ua}""#);
        parse_log_line(&line, LogFormat::Combined).unwrap()
    }

    #[test]
    fn default_rules() {
        let rules = CleanRules::default();
        assert!(rules.keeps(&entry("/index.html", 200, "Mozilla/5.0")));
        assert!(rules.keeps(&entry("/moved", 302, "Mozilla/5.0")));
        assert!(!rules.keeps(&entry("/logo.gif", 200, "Mozilla/5.0")));
        assert!(!rules.keeps(&entry("/LOGO.PNG?v=2", 200, "Mozilla/5.0")));
        assert!(!rules.keeps(&entry("/index.html", 404, "Mozilla/5.0")));
        assert!(!rules.keeps(&entry("/index.html", 200, "Googlebot/2.1")));
        assert!(!rules.keeps(&entry("/index.html", 200, "Yahoo! Slurp")));
    }

    #[test]
    fn order_is_preserved() {
        let input = vec![
            entry("/a", 200, "x"),
            entry("/b.css", 200, "x"),
            entry("/c", 500, "x"),
            entry("/d", 200, "x"),
        ];
        let kept: Vec<_> = clean_entries(&input, &CleanRules::default())
            .into_iter()
            .map(|e| e.uri)
            .collect();
        assert_eq!(kept, ["/a", "/d"]);
    }
}
