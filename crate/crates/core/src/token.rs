use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Synthetic sentence-start token. It carries appends for sentence-initial
/// insertions and is never emitted by tag application.
pub const START_TOKEN: &str = "$START";

/// A single whitespace-free, non-empty word.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "String", into = "String")]
pub struct Token(String);

impl Token {
    pub fn new(surface: impl Into<String>) -> Result<Self> {
        let surface = surface.into();
        if is_valid_surface(&surface) {
            Ok(Token(surface))
        } else {
            Err(Error::InvalidToken(surface))
        }
    }

    pub fn start() -> Self {
        Token(START_TOKEN.to_string())
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }

    pub fn is_start(&self) -> bool {
        self.0 == START_TOKEN
    }

    pub fn into_string(self) -> String {
        self.0
    }

    /// Build a token from text that is already known to be valid, falling back
    /// to `None` when it is not (empty or containing whitespace).
    pub(crate) fn checked(surface: String) -> Option<Self> {
        is_valid_surface(&surface).then_some(Token(surface))
    }
}

pub(crate) fn is_valid_surface(s: &str) -> bool {
    !s.is_empty() && !s.chars().any(char::is_whitespace)
}

impl TryFrom<String> for Token {
    type Error = Error;

    fn try_from(value: String) -> Result<Self> {
        Token::new(value)
    }
}

impl TryFrom<&str> for Token {
    type Error = Error;

    fn try_from(value: &str) -> Result<Self> {
        Token::new(value)
    }
}

impl From<Token> for String {
    fn from(t: Token) -> Self {
        t.0
    }
}

impl AsRef<str> for Token {
    fn as_ref(&self) -> &str {
        &self.0
    }
}

impl fmt::Display for Token {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl fmt::Debug for Token {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.0)
    }
}

/// Split a whitespace-tokenised line into tokens.
pub fn tokenize(line: &str) -> Vec<Token> {
    line.split_whitespace().map(|w| Token(w.to_string())).collect()
}

/// Build tokens from string slices, rejecting invalid surfaces.
pub fn tokens<S: AsRef<str>>(words: &[S]) -> Result<Vec<Token>> {
    words.iter().map(|w| Token::new(w.as_ref())).collect()
}

/// Join tokens with single spaces.
pub fn detokenize(tokens: &[Token]) -> String {
    let mut out = String::new();
    for (i, t) in tokens.iter().enumerate() {
        if i > 0 {
            out.push(' ');
        }
        out.push_str(t.as_str());
    }
    out
}

/// Uppercase the first character of `s`, leaving the rest untouched.
pub(crate) fn upper_first(s: &str) -> String {
    let mut chars = s.chars();
    match chars.next() {
        Some(c) => c.to_uppercase().chain(chars).collect(),
        None => String::new(),
    }
}

pub(crate) fn starts_uppercase(s: &str) -> bool {
    s.chars().next().is_some_and(char::is_uppercase)
}
