use std::str::FromStr;

use chrono::{DateTime, FixedOffset};

use super::LogError;

const TIME_FORMAT: &str = "%d/%b/%Y:%H:%M:%S %z";

/// NCSA access-log flavours: Common (`%h %l %u [%t] "%r" %>s %b`) and
/// Combined, which appends the quoted referrer and user agent.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum LogFormat {
    Common,
    #[default]
    Combined,
}

impl FromStr for LogFormat {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "common" => Ok(LogFormat::Common),
            "combined" => Ok(LogFormat::Combined),
            other => Err(format!("unknown log format {other:?}")),
        }
    }
}

/// One access-log record. The ident and authuser columns are not kept.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LogEntry {
    pub remote_host: String,
    pub timestamp: DateTime<FixedOffset>,
    pub method: String,
    pub uri: String,
    pub protocol: String,
    pub status: u16,
    pub bytes: u64,
    pub referrer: Option<String>,
    pub user_agent: Option<String>,
}

impl LogEntry {
    /// Serializes the entry as one log line. `-` stands in for absent
    /// optional fields and for ident/authuser.
    pub fn to_line(&self, format: LogFormat) -> String {
        let mut line = format!(
            "{} - - [{}] \"{} {} {}\" {} {}",
            self.remote_host,
            self.timestamp.format(TIME_FORMAT),
            self.method,
            self.uri,
            self.protocol,
            self.status,
            self.bytes
        );
        if format == LogFormat::Combined {
            for field in [&self.referrer, &self.user_agent] {
                line.push_str(" \"");
                match field {
                    Some(v) => escape_into(&mut line, v),
                    None => line.push('-'),
                }
                line.push('"');
            }
        }
        line
    }
}

fn escape_into(out: &mut String, value: &str) {
    for ch in value.chars() {
        if ch == '"' || ch == '\\' {
            out.push('\\');
        }
        out.push(ch);
    }
}

#[derive(Debug, PartialEq)]
enum Token {
    Bare(String),
    Bracketed(String),
    Quoted(String),
}

fn tokenize(line: &str) -> Result<Vec<Token>, LogError> {
    let mut tokens = Vec::new();
    let mut chars = line.trim_end_matches(['\r', '\n']).chars().peekable();
    while let Some(&ch) = chars.peek() {
        match ch {
            ' ' | '\t' => {
                chars.next();
            }
            '[' => {
                chars.next();
                let mut value = String::new();
                loop {
                    match chars.next() {
                        Some(']') => break,
                        Some(c) => value.push(c),
                        None => return Err(malformed("timestamp", "unterminated '['")),
                    }
                }
                tokens.push(Token::Bracketed(value));
            }
            '"' => {
                chars.next();
                let mut value = String::new();
                loop {
                    match chars.next() {
                        Some('"') => break,
                        Some('\\') => match chars.next() {
                            Some(c) => value.push(c),
                            None => return Err(malformed("quote", "dangling escape")),
                        },
                        Some(c) => value.push(c),
                        None => return Err(malformed("quote", "unterminated quoted field")),
                    }
                }
                tokens.push(Token::Quoted(value));
            }
            _ => {
                let mut value = String::new();
                while let Some(&c) = chars.peek() {
                    if c == ' ' || c == '\t' {
                        break;
                    }
                    value.push(c);
                    chars.next();
                }
                tokens.push(Token::Bare(value));
            }
        }
    }
    Ok(tokens)
}

fn malformed(field: &'static str, detail: impl Into<String>) -> LogError {
    LogError::MalformedLine {
        field,
        detail: detail.into(),
    }
}

fn bare(token: Token, field: &'static str) -> Result<String, LogError> {
    match token {
        Token::Bare(v) => Ok(v),
        other => Err(malformed(field, format!("expected a bare field, got {other:?}"))),
    }
}

fn quoted(token: Token, field: &'static str) -> Result<String, LogError> {
    match token {
        Token::Quoted(v) => Ok(v),
        other => Err(malformed(field, format!("expected a quoted field, got {other:?}"))),
    }
}

fn optional(value: String) -> Option<String> {
    (!value.is_empty() && value != "-").then_some(value)
}

/// Parses one Common or Combined log line.
pub fn parse_log_line(line: &str, format: LogFormat) -> Result<LogEntry, LogError> {
    let tokens = tokenize(line)?;
    let expected = match format {
        LogFormat::Common => 7,
        LogFormat::Combined => 9,
    };
    if tokens.len() != expected {
        return Err(malformed(
            "line",
            format!("expected {expected} fields, found {}", tokens.len()),
        ));
    }
    let mut tokens = tokens.into_iter();
    let mut next = || tokens.next().expect("length checked");

    let remote_host = bare(next(), "remote_host")?;
    bare(next(), "ident")?;
    bare(next(), "authuser")?;
    let timestamp = match next() {
        Token::Bracketed(t) => DateTime::parse_from_str(&t, TIME_FORMAT).map_err(|_| LogError::BadTimestamp(t))?,
        other => return Err(malformed("timestamp", format!("expected [..], got {other:?}"))),
    };
    let request = quoted(next(), "request")?;
    let mut parts = request.split_whitespace();
    let (Some(method), Some(uri), Some(protocol), None) = (parts.next(), parts.next(), parts.next(), parts.next())
    else {
        return Err(malformed("request", format!("bad request line {request:?}")));
    };
    let (method, uri, protocol) = (method.to_owned(), uri.to_owned(), protocol.to_owned());

    let status_text = bare(next(), "status")?;
    let status = status_text
        .parse::<u16>()
        .ok()
        .filter(|s| (100..=599).contains(s))
        .ok_or(LogError::BadStatus(status_text))?;
    let bytes_text = bare(next(), "bytes")?;
    let bytes = if bytes_text == "-" {
        0
    } else {
        bytes_text
            .parse::<u64>()
            .map_err(|_| malformed("bytes", bytes_text.clone()))?
    };

    let (referrer, user_agent) = match format {
        LogFormat::Common => (None, None),
        LogFormat::Combined => (
            optional(quoted(next(), "referrer")?),
            optional(quoted(next(), "user_agent")?),
        ),
    };

    Ok(LogEntry {
        remote_host,
        timestamp,
        method,
        uri,
        protocol,
        status,
        bytes,
        referrer,
        user_agent,
    })
}

/// A line that failed to parse, with its 1-based line number.
#[derive(Debug, Clone, PartialEq)]
pub struct RejectedLine {
    pub line: usize,
    pub error: LogError,
}

/// Parses every non-blank line, collecting failures instead of stopping.
pub fn parse_log(text: &str, format: LogFormat) -> (Vec<LogEntry>, Vec<RejectedLine>) {
    let mut entries = Vec::new();
    let mut rejected = Vec::new();
    for (i, line) in text.lines().enumerate() {
        if line.trim().is_empty() {
            continue;
        }
        match parse_log_line(line, format) {
            Ok(e) => entries.push(e),
            Err(error) => rejected.push(RejectedLine { line: i + 1, error }),
        }
    }
    (entries, rejected)
}

impl std::fmt::Display for RejectedLine {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "line {}: {}", self.line, self.error)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const COMBINED: &str =
        r#"127.0.0.1 - - [01/Feb/2011:10:00:00 +0530] "GET /dept/cse.html HTTP/1.1" 200 512 "-" "Mozilla/5.0""#;
    const COMMON: &str = r#"127.0.0.1 - - [01/Feb/2011:10:00:00 +0530] "GET /dept/cse.html HTTP/1.1" 200 512"#;

    #[test]
    fn combined_line() {
        let e = parse_log_line(COMBINED, LogFormat::Combined).unwrap();
        assert_eq!(e.remote_host, "127.0.0.1");
        assert_eq!(e.uri, "/dept/cse.html");
        assert_eq!(e.method, "GET");
        assert_eq!(e.protocol, "HTTP/1.1");
        assert_eq!(e.status, 200);
        assert_eq!(e.bytes, 512);
        assert_eq!(e.referrer, None);
        assert_eq!(e.user_agent.as_deref(), Some("Mozilla/5.0"));
        assert_eq!(e.timestamp.to_rfc3339(), "2011-02-01T10:00:00+05:30");
    }

    #[test]
    fn common_line() {
        let e = parse_log_line(COMMON, LogFormat::Common).unwrap();
        assert_eq!(e.referrer, None);
        assert_eq!(e.user_agent, None);
        assert_eq!(e.bytes, 512);
    }

    #[test]
    fn too_few_fields() {
        let err = parse_log_line("127.0.0.1 - -", LogFormat::Combined).unwrap_err();
        assert!(matches!(err, LogError::MalformedLine { field: "line", .. }));
        let err = parse_log_line(COMMON, LogFormat::Combined).unwrap_err();
        assert!(matches!(err, LogError::MalformedLine { field: "line", .. }));
    }

    #[test]
    fn bad_fields_are_named() {
        let bad_time = COMBINED.replace("01/Feb/2011", "31/Foo/2011");
        assert!(matches!(
            parse_log_line(&bad_time, LogFormat::Combined),
            Err(LogError::BadTimestamp(_))
        ));
        let bad_status = COMBINED.replace(" 200 ", " 42 ");
        assert_eq!(
            parse_log_line(&bad_status, LogFormat::Combined),
            Err(LogError::BadStatus("42".into()))
        );
        let bad_bytes = COMBINED.replace(" 512 ", " lots ");
        assert!(matches!(
            parse_log_line(&bad_bytes, LogFormat::Combined),
            Err(LogError::MalformedLine { field: "bytes", .. })
        ));
        let bad_request = COMBINED.replace("GET /dept/cse.html HTTP/1.1", "-");
        assert!(matches!(
            parse_log_line(&bad_request, LogFormat::Combined),
            Err(LogError::MalformedLine { field: "request", .. })
        ));
        let open_quote = &COMBINED[..COMBINED.len() - 1];
        assert!(matches!(
            parse_log_line(open_quote, LogFormat::Combined),
            Err(LogError::MalformedLine { field: "quote", .. })
        ));
    }

    #[test]
    fn dash_bytes_and_escaped_agent() {
        let line = r#"h - - [01/Feb/2011:10:00:00 +0000] "GET / HTTP/1.0" 304 - "http://x/" "say \"hi\" \\o/""#;
        let e = parse_log_line(line, LogFormat::Combined).unwrap();
        assert_eq!(e.bytes, 0);
        assert_eq!(e.referrer.as_deref(), Some("http://x/"));
        assert_eq!(e.user_agent.as_deref(), Some(r#"say "hi" \o/"#));
        assert_eq!(
            parse_log_line(&e.to_line(LogFormat::Combined), LogFormat::Combined).unwrap(),
            e
        );
    }

    #[test]
    fn parse_log_collects_rejects() {
        let text = format!("{COMBINED}\n\ngarbage\n{COMBINED}\n");
        let (ok, bad) = parse_log(&text, LogFormat::Combined);
        assert_eq!(ok.len(), 2);
        assert_eq!(bad.len(), 1);
        assert_eq!(bad[0].line, 3);
    }
}
