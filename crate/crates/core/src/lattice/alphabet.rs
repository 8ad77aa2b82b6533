use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Index of a symbol in its alphabet.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Symbol(pub u8);

impl Symbol {
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

/// A finite alphabet with one printable label per symbol.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Alphabet {
    labels: Vec<char>,
}

impl Alphabet {
    pub fn new(labels: &str) -> Result<Self> {
        let labels: Vec<char> = labels.chars().collect();
        if labels.is_empty() {
            return Err(Error::Domain(
                "alphabet must contain at least one symbol".into(),
            ));
        }
        if labels.len() > u8::MAX as usize {
            return Err(Error::Domain("alphabet too large".into()));
        }
        for (i, c) in labels.iter().enumerate() {
            if labels[..i].contains(c) {
                return Err(Error::Domain(format!("duplicate alphabet label '{c}'")));
            }
            if *c == '.' || c.is_whitespace() {
                return Err(Error::Domain(format!("'{c}' cannot be used as a label")));
            }
        }
        Ok(Alphabet { labels })
    }

    /// Spins: `+` is symbol 0 (σ = +1), `-` is symbol 1 (σ = −1).
    pub fn spins() -> Self {
        Alphabet {
            labels: vec!['+', '-'],
        }
    }

    /// Binary digits `0` and `1`.
    pub fn binary() -> Self {
        Alphabet {
            labels: vec!['0', '1'],
        }
    }

    pub fn size(&self) -> usize {
        self.labels.len()
    }

    pub fn labels(&self) -> String {
        self.labels.iter().collect()
    }

    pub fn contains(&self, s: Symbol) -> bool {
        s.index() < self.labels.len()
    }

    pub fn check(&self, s: Symbol) -> Result<Symbol> {
        if self.contains(s) {
            Ok(s)
        } else {
            Err(Error::Domain(format!(
                "symbol {} outside alphabet of size {}",
                s.0,
                self.size()
            )))
        }
    }

    pub fn label(&self, s: Symbol) -> char {
        self.labels[s.index()]
    }

    pub fn symbol(&self, c: char) -> Result<Symbol> {
        self.labels
            .iter()
            .position(|&l| l == c)
            .map(|i| Symbol(i as u8))
            .ok_or_else(|| Error::parse(format!("'{c}' is not in alphabet \"{}\"", self.labels())))
    }

    pub fn parse_word(&self, word: &str) -> Result<Vec<Symbol>> {
        word.chars().map(|c| self.symbol(c)).collect()
    }

    pub fn format_word(&self, word: &[Symbol]) -> String {
        word.iter().map(|&s| self.label(s)).collect()
    }

    /// The next symbol in cyclic order; for binary alphabets, the complement.
    pub fn flip(&self, s: Symbol) -> Symbol {
        Symbol(((s.index() + 1) % self.size()) as u8)
    }
}

impl fmt::Display for Alphabet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.labels())
    }
}
