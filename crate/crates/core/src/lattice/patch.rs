use std::fmt;

use crate::error::{Error, Result};

use super::{Alphabet, Symbol, Window};

/// A finite pattern on Z: distinct offsets with prescribed symbols, shifted
/// so the smallest offset is 0. Offsets need not be contiguous.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Patch {
    cells: Vec<(i64, Symbol)>,
}

impl Patch {
    pub fn new(cells: impl IntoIterator<Item = (i64, Symbol)>) -> Result<Self> {
        let mut cells: Vec<(i64, Symbol)> = cells.into_iter().collect();
        if cells.is_empty() {
            return Err(Error::Domain("patch must contain at least one cell".into()));
        }
        cells.sort_by_key(|c| c.0);
        if cells.windows(2).any(|w| w[0].0 == w[1].0) {
            return Err(Error::Domain("patch offsets must be distinct".into()));
        }
        let shift = cells[0].0;
        for c in &mut cells {
            c.0 -= shift;
        }
        Ok(Patch { cells })
    }

    /// The contiguous patch spelling `word`.
    pub fn word(word: &[Symbol]) -> Result<Self> {
        Self::new(word.iter().enumerate().map(|(k, &s)| (k as i64, s)))
    }

    pub fn single(symbol: Symbol) -> Self {
        Patch {
            cells: vec![(0, symbol)],
        }
    }

    /// Parse labels with `.` marking unconstrained gaps, e.g. `1.1` for two
    /// ones at distance 2.
    pub fn parse(alphabet: &Alphabet, text: &str) -> Result<Self> {
        let mut cells = Vec::new();
        for (k, c) in text.chars().enumerate() {
            if c != '.' {
                cells.push((k as i64, alphabet.symbol(c)?));
            }
        }
        Self::new(cells)
            .map_err(|_| Error::parse(format!("patch \"{text}\" has no constrained cell")))
    }

    pub fn format(&self, alphabet: &Alphabet) -> String {
        let mut out = vec!['.'; self.diameter() as usize + 1];
        for &(o, s) in &self.cells {
            out[o as usize] = alphabet.label(s);
        }
        out.into_iter().collect()
    }

    pub fn cells(&self) -> &[(i64, Symbol)] {
        &self.cells
    }

    pub fn offsets(&self) -> impl Iterator<Item = i64> + '_ {
        self.cells.iter().map(|c| c.0)
    }

    /// Largest offset (the smallest is 0).
    pub fn diameter(&self) -> i64 {
        self.cells.last().map(|c| c.0).unwrap_or(0)
    }

    pub fn max_symbol(&self) -> Symbol {
        self.cells.iter().map(|c| c.1).max().unwrap_or(Symbol(0))
    }

    /// Number of placements fully inside an interval of `len` sites.
    pub fn placements_in(&self, len: usize) -> usize {
        len.saturating_sub(self.diameter() as usize)
    }

    /// Whether the patch matches `symbols` when anchored at index `at`.
    #[inline]
    pub fn matches_at(&self, symbols: &[Symbol], at: usize) -> bool {
        self.cells
            .iter()
            .all(|&(o, s)| symbols.get(at + o as usize) == Some(&s))
    }

    /// Occurrence indicator for every anchor of `symbols` with a fully
    /// contained placement.
    pub fn occurrences(&self, symbols: &[Symbol]) -> Vec<bool> {
        (0..self.placements_in(symbols.len()))
            .map(|a| self.matches_at(symbols, a))
            .collect()
    }
}

/// `n_ar` on a window: placements fully inside the window that match.
pub fn count_patch(window: &Window, patch: &Patch) -> u64 {
    (0..patch.placements_in(window.len()))
        .filter(|&a| patch.matches_at(&window.symbols, a))
        .count() as u64
}

/// Tile identifier in a Wang tileset.
pub type TileId = u32;

/// A finite pattern of tiles on Z², normalized so the smallest x and the
/// smallest y offsets are both 0.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Patch2d {
    cells: Vec<((i64, i64), TileId)>,
}

impl Patch2d {
    pub fn new(cells: impl IntoIterator<Item = ((i64, i64), TileId)>) -> Result<Self> {
        let mut cells: Vec<((i64, i64), TileId)> = cells.into_iter().collect();
        if cells.is_empty() {
            return Err(Error::Domain("patch must contain at least one cell".into()));
        }
        let min_x = cells.iter().map(|c| c.0 .0).min().unwrap_or(0);
        let min_y = cells.iter().map(|c| c.0 .1).min().unwrap_or(0);
        for c in &mut cells {
            c.0 .0 -= min_x;
            c.0 .1 -= min_y;
        }
        cells.sort();
        if cells.windows(2).any(|w| w[0].0 == w[1].0) {
            return Err(Error::Domain("patch offsets must be distinct".into()));
        }
        Ok(Patch2d { cells })
    }

    pub fn single(tile: TileId) -> Self {
        Patch2d {
            cells: vec![((0, 0), tile)],
        }
    }

    pub fn cells(&self) -> &[((i64, i64), TileId)] {
        &self.cells
    }

    /// Extent minus one along x and y.
    pub fn diameter(&self) -> (i64, i64) {
        let dx = self.cells.iter().map(|c| c.0 .0).max().unwrap_or(0);
        let dy = self.cells.iter().map(|c| c.0 .1).max().unwrap_or(0);
        (dx, dy)
    }

    /// Parse `x,y:tile` cells separated by `;`, e.g. `0,0:1;1,0:2`.
    pub fn parse(text: &str) -> Result<Self> {
        let mut cells = Vec::new();
        for part in text.split(';').map(str::trim).filter(|p| !p.is_empty()) {
            let bad = || Error::parse(format!("bad 2D patch cell \"{part}\" (expected x,y:tile)"));
            let (pos, tile) = part.split_once(':').ok_or_else(bad)?;
            let (x, y) = pos.split_once(',').ok_or_else(bad)?;
            cells.push((
                (
                    x.trim().parse().map_err(|_| bad())?,
                    y.trim().parse().map_err(|_| bad())?,
                ),
                tile.trim().parse().map_err(|_| bad())?,
            ));
        }
        Self::new(cells)
    }
}

impl fmt::Display for Patch2d {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self
            .cells
            .iter()
            .map(|((x, y), t)| format!("{x},{y}:{t}"))
            .collect();
        f.write_str(&parts.join(";"))
    }
}
