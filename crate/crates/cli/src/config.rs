//! Flat `key = value` configuration files.
//!
//! One pair per line. `#` starts a comment, blank lines are skipped, and a
//! key may appear only once. Keys are the long flag names without the dashes.

use std::fmt;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConfigError {
    pub line: usize,
    pub message: String,
}

impl fmt::Display for ConfigError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "line {}: {}", self.line, self.message)
    }
}

impl std::error::Error for ConfigError {}

pub fn parse(text: &str) -> Result<Vec<(String, String)>, ConfigError> {
    let mut pairs: Vec<(String, String)> = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let content = raw.split('#').next().unwrap_or("").trim();
        if content.is_empty() {
            continue;
        }
        let Some((key, value)) = content.split_once('=') else {
            return Err(ConfigError {
                line,
                message: format!("expected `key = value`, got `{content}`"),
            });
        };
        let (key, value) = (key.trim(), value.trim());
        if key.is_empty() || value.is_empty() {
            return Err(ConfigError {
                line,
                message: "key and value must both be non-empty".into(),
            });
        }
        if pairs.iter().any(|(k, _)| k == key) {
            return Err(ConfigError {
                line,
                message: format!("duplicate key `{key}`"),
            });
        }
        pairs.push((key.to_string(), value.to_string()));
    }
    Ok(pairs)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pairs_comments_and_blanks() {
        let text = "# header\nn = 50\n\nq=2 # trailing\n t-grid = 1,2,3 \n";
        let pairs = parse(text).unwrap();
        assert_eq!(
            pairs,
            vec![
                ("n".into(), "50".into()),
                ("q".into(), "2".into()),
                ("t-grid".into(), "1,2,3".into())
            ]
        );
    }

    #[test]
    fn malformed_lines() {
        assert_eq!(parse("n 50").unwrap_err().line, 1);
        assert_eq!(parse("n = 1\n= 3").unwrap_err().line, 2);
        assert!(parse("n = 1\nn = 2").unwrap_err().message.contains("duplicate"));
        assert!(parse("q =").is_err());
    }
}
