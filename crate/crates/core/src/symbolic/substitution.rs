use crate::error::{Error, Result};
use crate::lattice::{Symbol, Window};

/// Longest word a substitution is allowed to produce.
const MAX_WORD: usize = 1 << 28;

/// A substitution `s -> images[s]` over the alphabet `0..images.len()`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SubstitutionRule {
    images: Vec<Vec<Symbol>>,
}

impl SubstitutionRule {
    pub fn new(images: Vec<Vec<Symbol>>) -> Result<Self> {
        let n = images.len();
        if n == 0 {
            return Err(Error::Domain(
                "substitution needs at least one symbol".into(),
            ));
        }
        for (s, img) in images.iter().enumerate() {
            if img.is_empty() {
                return Err(Error::Domain(format!("image of symbol {s} is empty")));
            }
            if let Some(bad) = img.iter().find(|t| t.index() >= n) {
                return Err(Error::Domain(format!(
                    "image of {s} uses unknown symbol {}",
                    bad.0
                )));
            }
        }
        if !images
            .iter()
            .enumerate()
            .any(|(s, img)| img[0].index() == s)
        {
            return Err(Error::Domain(
                "no symbol's image starts with itself; no fixed point".into(),
            ));
        }
        Ok(SubstitutionRule { images })
    }

    /// `0 -> 01, 1 -> 10`, i.e. `+ -> +-, - -> -+`.
    pub fn thue_morse() -> Self {
        SubstitutionRule {
            images: vec![vec![Symbol(0), Symbol(1)], vec![Symbol(1), Symbol(0)]],
        }
    }

    /// `0 -> 01, 1 -> 0`.
    pub fn fibonacci() -> Self {
        SubstitutionRule {
            images: vec![vec![Symbol(0), Symbol(1)], vec![Symbol(0)]],
        }
    }

    pub fn image(&self, s: Symbol) -> &[Symbol] {
        &self.images[s.index()]
    }

    pub fn alphabet_size(&self) -> usize {
        self.images.len()
    }

    pub fn apply(&self, word: &[Symbol]) -> Vec<Symbol> {
        word.iter()
            .flat_map(|&s| self.image(s).iter().copied())
            .collect()
    }

    fn check_seed(&self, seed: Symbol) -> Result<()> {
        if seed.index() >= self.images.len() {
            return Err(Error::Domain(format!(
                "seed {} outside the alphabet",
                seed.0
            )));
        }
        if self.image(seed)[0] != seed {
            return Err(Error::Contract(format!(
                "image of seed {} does not start with the seed",
                seed.0
            )));
        }
        Ok(())
    }

    /// The first `len` symbols of the one-sided fixed point grown from `seed`.
    pub fn fixed_point_prefix(&self, seed: Symbol, len: usize) -> Result<Vec<Symbol>> {
        self.check_seed(seed)?;
        let mut word = vec![seed];
        while word.len() < len {
            let next = self.apply(&word);
            if next.len() == word.len() {
                return Err(Error::Contract(format!(
                    "fixed point from seed {} does not grow",
                    seed.0
                )));
            }
            word = next;
        }
        word.truncate(len);
        Ok(word)
    }
}

/// The `iterations`-fold image of `seed`, anchored at site 0.
pub fn substitution_prefix(
    rule: &SubstitutionRule,
    seed: Symbol,
    iterations: u32,
) -> Result<Window> {
    rule.check_seed(seed)?;
    let mut word = vec![seed];
    for _ in 0..iterations {
        let grown: usize = word.iter().map(|&s| rule.image(s).len()).sum();
        if grown > MAX_WORD {
            return Err(Error::Budget(format!(
                "substitution word would exceed {MAX_WORD} symbols"
            )));
        }
        word = rule.apply(&word);
    }
    Ok(Window::new(0, word))
}

/// Two-sided Thue-Morse symbol: parity of the binary digit sum for `i >= 0`,
/// mirrored by `X(i) = X(-i-1)` on the negative half-line.
#[inline]
pub fn thue_morse_symbol(i: i64) -> Symbol {
    let n = if i >= 0 { i as u64 } else { (-(i + 1)) as u64 };
    Symbol((n.count_ones() & 1) as u8)
}
