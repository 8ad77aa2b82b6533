use crate::error::{Error, Result};
use crate::symbolic::{thue_morse_symbol, RotationNumber};

use super::{Alphabet, Symbol};

/// The rule behind a configuration on Z.
#[derive(Clone, Debug, PartialEq)]
pub enum SourceKind {
    /// Two-sided Thue-Morse word, reflected as `X(i) = X(-i-1)` for `i < 0`.
    ThueMorse,
    /// Coding of the rotation by φ against `[0, φ)`.
    Sturmian(RotationNumber),
    /// `word` repeated in both directions, `X(i) = word[i mod len]`.
    Periodic(Vec<Symbol>),
    /// `symbols` placed from `start`, `default` everywhere else.
    Explicit {
        start: i64,
        symbols: Vec<Symbol>,
        default: Symbol,
    },
}

/// A configuration on the whole of Z, evaluated lazily site by site.
#[derive(Clone, Debug, PartialEq)]
pub struct ConfigurationSource {
    kind: SourceKind,
    alphabet: Alphabet,
}

/// Symbols on the interval `[start, start + len)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Window {
    pub start: i64,
    pub symbols: Vec<Symbol>,
}

impl Window {
    pub fn new(start: i64, symbols: Vec<Symbol>) -> Self {
        Window { start, symbols }
    }

    pub fn len(&self) -> usize {
        self.symbols.len()
    }

    pub fn is_empty(&self) -> bool {
        self.symbols.is_empty()
    }

    /// One past the last site.
    pub fn end(&self) -> i64 {
        self.start + self.symbols.len() as i64
    }

    pub fn get(&self, site: i64) -> Option<Symbol> {
        if site < self.start {
            return None;
        }
        self.symbols.get((site - self.start) as usize).copied()
    }
}

impl ConfigurationSource {
    pub fn thue_morse() -> Self {
        ConfigurationSource {
            kind: SourceKind::ThueMorse,
            alphabet: Alphabet::spins(),
        }
    }

    pub fn sturmian(phi: RotationNumber) -> Self {
        ConfigurationSource {
            kind: SourceKind::Sturmian(phi),
            alphabet: Alphabet::binary(),
        }
    }

    pub fn periodic(alphabet: Alphabet, word: Vec<Symbol>) -> Result<Self> {
        if word.is_empty() {
            return Err(Error::Domain("periodic word must be non-empty".into()));
        }
        for &s in &word {
            alphabet.check(s)?;
        }
        Ok(ConfigurationSource {
            kind: SourceKind::Periodic(word),
            alphabet,
        })
    }

    pub fn explicit(
        alphabet: Alphabet,
        start: i64,
        symbols: Vec<Symbol>,
        default: Symbol,
    ) -> Result<Self> {
        for &s in symbols.iter().chain(std::iter::once(&default)) {
            alphabet.check(s)?;
        }
        Ok(ConfigurationSource {
            kind: SourceKind::Explicit {
                start,
                symbols,
                default,
            },
            alphabet,
        })
    }

    /// A constant configuration.
    pub fn constant(alphabet: Alphabet, symbol: Symbol) -> Result<Self> {
        Self::periodic(alphabet, vec![symbol])
    }

    pub fn kind(&self) -> &SourceKind {
        &self.kind
    }

    pub fn alphabet(&self) -> &Alphabet {
        &self.alphabet
    }

    /// Relabel the symbols without changing the configuration.
    pub fn with_alphabet(mut self, alphabet: Alphabet) -> Result<Self> {
        if alphabet.size() != self.alphabet.size() {
            return Err(Error::Domain(
                "relabeling must keep the alphabet size".into(),
            ));
        }
        self.alphabet = alphabet;
        Ok(self)
    }

    /// Smallest period if the source is periodic.
    pub fn period(&self) -> Option<usize> {
        match &self.kind {
            SourceKind::Periodic(w) => Some(w.len()),
            _ => None,
        }
    }

    /// `X_i`. Only decimal rotation numbers can fail, when `{iφ}` falls in
    /// the guard band around an interval endpoint.
    pub fn symbol_at(&self, i: i64) -> Result<Symbol> {
        match &self.kind {
            SourceKind::ThueMorse => Ok(thue_morse_symbol(i)),
            SourceKind::Sturmian(phi) => phi.sturmian_symbol(i),
            SourceKind::Periodic(w) => Ok(w[i.rem_euclid(w.len() as i64) as usize]),
            SourceKind::Explicit {
                start,
                symbols,
                default,
            } => {
                let k = i - start;
                if k >= 0 && (k as usize) < symbols.len() {
                    Ok(symbols[k as usize])
                } else {
                    Ok(*default)
                }
            }
        }
    }

    pub fn window(&self, start: i64, len: usize) -> Result<Window> {
        let symbols = (0..len as i64)
            .map(|k| self.symbol_at(start + k))
            .collect::<Result<Vec<_>>>()?;
        Ok(Window { start, symbols })
    }

    /// `window` rendered with the alphabet labels.
    pub fn render(&self, start: i64, len: usize) -> Result<String> {
        Ok(self.alphabet.format_word(&self.window(start, len)?.symbols))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn thue_morse_prefix_and_reflection() {
        let tm = ConfigurationSource::thue_morse();
        assert_eq!(tm.render(0, 16).unwrap(), "+--+-++--++-+--+");
        assert_eq!(tm.render(-4, 8).unwrap(), "+--++--+");
    }

    #[test]
    fn periodic_repeats_both_ways() {
        let a = Alphabet::binary();
        let src = ConfigurationSource::periodic(a.clone(), a.parse_word("01").unwrap()).unwrap();
        assert_eq!(src.render(0, 5).unwrap(), "01010");
        assert_eq!(src.render(-3, 4).unwrap(), "1010");
        assert!(ConfigurationSource::periodic(a, vec![]).is_err());
    }

    #[test]
    fn explicit_falls_back_to_default() {
        let a = Alphabet::binary();
        let src =
            ConfigurationSource::explicit(a, 2, vec![Symbol(1), Symbol(1)], Symbol(0)).unwrap();
        assert_eq!(src.render(0, 6).unwrap(), "001100");
        let bad = ConfigurationSource::explicit(Alphabet::binary(), 0, vec![Symbol(2)], Symbol(0));
        assert!(matches!(bad, Err(Error::Domain(_))));
    }

    #[test]
    fn window_lookup() {
        let w = ConfigurationSource::thue_morse().window(-2, 4).unwrap();
        assert_eq!(w.end(), 2);
        assert_eq!(w.get(-2), Some(Symbol(1)));
        assert_eq!(w.get(2), None);
        assert_eq!(w.get(-3), None);
    }
}
