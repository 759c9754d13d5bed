//! Turning raw input into dense token ids.
//!
//! Two alphabets are supported. In [`InputMode::Byte`] every byte is a token and
//! its id is the byte value. In [`InputMode::Token`] the input is split on
//! whitespace and each distinct word is interned to the next free id, in order of
//! first appearance, so the ids of a corpus are reproducible.

use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

/// Dense id of one alphabet symbol.
pub type TokenId = u32;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum InputMode {
    #[default]
    Byte,
    Token,
}

impl FromStr for InputMode {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "byte" => Ok(InputMode::Byte),
            "token" => Ok(InputMode::Token),
            other => Err(format!("unknown input mode {other:?} (expected byte|token)")),
        }
    }
}

impl fmt::Display for InputMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            InputMode::Byte => "byte",
            InputMode::Token => "token",
        })
    }
}

/// Word <-> id table for token mode.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Vocabulary {
    ids: HashMap<String, TokenId>,
    words: Vec<String>,
}

impl Vocabulary {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn intern(&mut self, word: &str) -> TokenId {
        if let Some(&id) = self.ids.get(word) {
            return id;
        }
        let id = self.words.len() as TokenId;
        self.words.push(word.to_owned());
        self.ids.insert(word.to_owned(), id);
        id
    }

    pub fn get(&self, word: &str) -> Option<TokenId> {
        self.ids.get(word).copied()
    }

    pub fn word(&self, id: TokenId) -> Option<&str> {
        self.words.get(id as usize).map(String::as_str)
    }

    pub fn len(&self) -> usize {
        self.words.len()
    }

    pub fn is_empty(&self) -> bool {
        self.words.is_empty()
    }
}

/// A tokenized input string together with the mapping needed to resolve query symbols.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Corpus {
    mode: InputMode,
    tokens: Vec<TokenId>,
    vocab: Vocabulary,
}

impl Corpus {
    pub fn from_bytes(bytes: &[u8]) -> Self {
        Corpus {
            mode: InputMode::Byte,
            tokens: bytes.iter().map(|&b| TokenId::from(b)).collect(),
            vocab: Vocabulary::new(),
        }
    }

    pub fn from_text(text: &str) -> Self {
        let mut vocab = Vocabulary::new();
        let tokens = text.split_whitespace().map(|w| vocab.intern(w)).collect();
        Corpus {
            mode: InputMode::Token,
            tokens,
            vocab,
        }
    }

    /// Tokenizes `raw` according to `mode`. Token mode requires UTF-8.
    pub fn parse(raw: &[u8], mode: InputMode) -> Result<Self, std::str::Utf8Error> {
        match mode {
            InputMode::Byte => Ok(Self::from_bytes(raw)),
            InputMode::Token => Ok(Self::from_text(std::str::from_utf8(raw)?)),
        }
    }

    pub fn mode(&self) -> InputMode {
        self.mode
    }

    pub fn tokens(&self) -> &[TokenId] {
        &self.tokens
    }

    pub fn len(&self) -> usize {
        self.tokens.len()
    }

    pub fn is_empty(&self) -> bool {
        self.tokens.is_empty()
    }

    pub fn vocabulary(&self) -> &Vocabulary {
        &self.vocab
    }

    /// Resolves a query symbol to a token id.
    ///
    /// In byte mode the symbol must be exactly one byte. In token mode a word that
    /// never occurs in the corpus is interned anyway; it simply has no occurrences.
    pub fn resolve(&mut self, symbol: &str) -> Option<TokenId> {
        match self.mode {
            InputMode::Byte => match symbol.as_bytes() {
                [b] => Some(TokenId::from(*b)),
                _ => None,
            },
            InputMode::Token => Some(self.vocab.intern(symbol)),
        }
    }
}

/// SHA-256 over the token ids, each encoded as 4 little-endian bytes.
pub fn token_digest(tokens: &[TokenId]) -> [u8; 32] {
    let mut hasher = Sha256::new();
    for t in tokens {
        hasher.update(t.to_le_bytes());
    }
    hasher.finalize().into()
}
