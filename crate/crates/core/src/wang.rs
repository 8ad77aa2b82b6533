//! Wang tiles: tileset and grid files, matching-rule energy, backtracking
//! completion of partial tilings and 2D patch census.
//!
//! Tileset lines read `T <id> <north> <east> <south> <west>`; `#` starts a
//! comment. Grid files start with `G <width> <height> <x0> <y0>` followed by
//! `height` rows of tile ids or `.` for holes, northernmost row first. The
//! lower-left cell is `(x0, y0)` and y grows northwards.

use std::collections::BTreeSet;
use std::fmt;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::lattice::{Patch2d, TileId};

/// Default cap on backtracking nodes.
pub const DEFAULT_NODE_BUDGET: u64 = 10_000_000;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct Tile {
    pub id: TileId,
    pub north: u32,
    pub east: u32,
    pub south: u32,
    pub west: u32,
}

/// A non-empty list of tiles with distinct ids, kept in file order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Tileset {
    tiles: Vec<Tile>,
}

impl Tileset {
    pub fn new(tiles: Vec<Tile>) -> Result<Self> {
        if tiles.is_empty() {
            return Err(Error::Domain("tileset is empty".into()));
        }
        let mut seen = BTreeSet::new();
        for t in &tiles {
            if !seen.insert(t.id) {
                return Err(Error::Domain(format!("duplicate tile id {}", t.id)));
            }
        }
        Ok(Tileset { tiles })
    }

    pub fn tiles(&self) -> &[Tile] {
        &self.tiles
    }

    pub fn get(&self, id: TileId) -> Option<&Tile> {
        self.tiles.iter().find(|t| t.id == id)
    }

    /// Number of distinct edge colors.
    pub fn color_count(&self) -> usize {
        self.tiles
            .iter()
            .flat_map(|t| [t.north, t.east, t.south, t.west])
            .collect::<BTreeSet<_>>()
            .len()
    }
}

/// Parse a tileset file.
pub fn load_tileset(text: &str) -> Result<Tileset> {
    let mut tiles = Vec::new();
    let mut seen = BTreeSet::new();
    for (n, raw) in text.lines().enumerate() {
        let line_no = n + 1;
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let fields: Vec<&str> = line.split_whitespace().collect();
        if fields.len() != 6 || fields[0] != "T" {
            return Err(Error::parse_at(
                line_no,
                "expected \"T <id> <north> <east> <south> <west>\"",
            ));
        }
        let num = |s: &str| {
            s.parse::<u32>()
                .map_err(|_| Error::parse_at(line_no, format!("bad number {s}")))
        };
        let tile = Tile {
            id: num(fields[1])?,
            north: num(fields[2])?,
            east: num(fields[3])?,
            south: num(fields[4])?,
            west: num(fields[5])?,
        };
        if !seen.insert(tile.id) {
            return Err(Error::parse_at(
                line_no,
                format!("duplicate tile id {}", tile.id),
            ));
        }
        tiles.push(tile);
    }
    if tiles.is_empty() {
        return Err(Error::parse("tileset has no tiles"));
    }
    Tileset::new(tiles)
}

impl fmt::Display for Tileset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for t in &self.tiles {
            writeln!(
                f,
                "T {} {} {} {} {}",
                t.id, t.north, t.east, t.south, t.west
            )?;
        }
        Ok(())
    }
}

/// A rectangle of cells `[x0, x0 + width) × [y0, y0 + height)`, each a tile
/// id or a hole.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TilingGrid {
    width: usize,
    height: usize,
    x0: i64,
    y0: i64,
    cells: Vec<Option<TileId>>,
}

impl TilingGrid {
    /// A grid of holes.
    pub fn new(width: usize, height: usize, x0: i64, y0: i64) -> Result<Self> {
        let n = width
            .checked_mul(height)
            .filter(|&n| n > 0 && n <= 1 << 26)
            .ok_or_else(|| Error::Domain(format!("bad grid size {width}×{height}")))?;
        Ok(TilingGrid {
            width,
            height,
            x0,
            y0,
            cells: vec![None; n],
        })
    }

    /// A grid filled by `f(x, y)`.
    pub fn from_fn(
        width: usize,
        height: usize,
        x0: i64,
        y0: i64,
        f: impl Fn(i64, i64) -> TileId,
    ) -> Result<Self> {
        let mut g = Self::new(width, height, x0, y0)?;
        for k in 0..g.cells.len() {
            let (x, y) = g.coords(k);
            g.cells[k] = Some(f(x, y));
        }
        Ok(g)
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn height(&self) -> usize {
        self.height
    }

    pub fn origin(&self) -> (i64, i64) {
        (self.x0, self.y0)
    }

    /// Number of cells.
    pub fn area(&self) -> usize {
        self.cells.len()
    }

    /// Boundary length in unit edges, `2(width + height)`.
    pub fn perimeter(&self) -> usize {
        2 * (self.width + self.height)
    }

    fn index(&self, x: i64, y: i64) -> Option<usize> {
        let dx = x - self.x0;
        let dy = y - self.y0;
        if dx < 0 || dy < 0 || dx as usize >= self.width || dy as usize >= self.height {
            return None;
        }
        Some(dy as usize * self.width + dx as usize)
    }

    fn coords(&self, k: usize) -> (i64, i64) {
        (
            self.x0 + (k % self.width) as i64,
            self.y0 + (k / self.width) as i64,
        )
    }

    /// `None` outside the region, `Some(None)` for a hole.
    pub fn get(&self, x: i64, y: i64) -> Option<Option<TileId>> {
        self.index(x, y).map(|k| self.cells[k])
    }

    pub fn set(&mut self, x: i64, y: i64, tile: Option<TileId>) -> Result<()> {
        let k = self
            .index(x, y)
            .ok_or_else(|| Error::Domain(format!("cell ({x}, {y}) outside the grid")))?;
        self.cells[k] = tile;
        Ok(())
    }

    pub fn holes(&self) -> usize {
        self.cells.iter().filter(|c| c.is_none()).count()
    }

    /// The same cells shifted by `(dx, dy)`.
    pub fn translated(&self, dx: i64, dy: i64) -> Self {
        TilingGrid {
            x0: self.x0 + dx,
            y0: self.y0 + dy,
            ..self.clone()
        }
    }

    pub fn parse(text: &str) -> Result<Self> {
        let mut lines = text
            .lines()
            .enumerate()
            .map(|(n, l)| (n + 1, l.split('#').next().unwrap_or("").trim()))
            .filter(|(_, l)| !l.is_empty());
        let (hn, header) = lines
            .next()
            .ok_or_else(|| Error::parse("empty grid file"))?;
        let h: Vec<&str> = header.split_whitespace().collect();
        if h.len() != 5 || h[0] != "G" {
            return Err(Error::parse_at(
                hn,
                "expected \"G <width> <height> <x0> <y0>\"",
            ));
        }
        let bad = |s: &str| Error::parse_at(hn, format!("bad header value {s}"));
        let width: usize = h[1].parse().map_err(|_| bad(h[1]))?;
        let height: usize = h[2].parse().map_err(|_| bad(h[2]))?;
        let x0: i64 = h[3].parse().map_err(|_| bad(h[3]))?;
        let y0: i64 = h[4].parse().map_err(|_| bad(h[4]))?;
        let mut grid =
            Self::new(width, height, x0, y0).map_err(|e| Error::parse_at(hn, e.to_string()))?;
        for row in 0..height {
            let (ln, line) = lines
                .next()
                .ok_or_else(|| Error::parse(format!("grid has {row} rows, expected {height}")))?;
            let tokens: Vec<&str> = line.split_whitespace().collect();
            if tokens.len() != width {
                return Err(Error::parse_at(
                    ln,
                    format!("row has {} cells, expected {width}", tokens.len()),
                ));
            }
            let y = y0 + (height - 1 - row) as i64;
            for (col, tok) in tokens.iter().enumerate() {
                let cell = if *tok == "." {
                    None
                } else {
                    Some(
                        tok.parse()
                            .map_err(|_| Error::parse_at(ln, format!("bad tile id {tok}")))?,
                    )
                };
                let k = grid.index(x0 + col as i64, y).expect("inside grid");
                grid.cells[k] = cell;
            }
        }
        if let Some((ln, _)) = lines.next() {
            return Err(Error::parse_at(ln, "extra rows after the grid"));
        }
        Ok(grid)
    }
}

impl fmt::Display for TilingGrid {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(
            f,
            "G {} {} {} {}",
            self.width, self.height, self.x0, self.y0
        )?;
        for row in (0..self.height).rev() {
            let cells: Vec<String> = self.cells[row * self.width..(row + 1) * self.width]
                .iter()
                .map(|c| c.map_or_else(|| ".".to_string(), |t| t.to_string()))
                .collect();
            writeln!(f, "{}", cells.join(" "))?;
        }
        Ok(())
    }
}

/// A shared edge whose colors disagree. `a` is the west or south cell.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct BrokenBond {
    pub a: (i64, i64),
    pub b: (i64, i64),
    pub horizontal: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TilingReport {
    pub broken: Vec<BrokenBond>,
    /// Matching-rule energy: one per broken bond.
    pub energy: u64,
}

fn tile_of(tileset: &Tileset, id: TileId) -> Result<&Tile> {
    tileset
        .get(id)
        .ok_or_else(|| Error::Domain(format!("tile id {id} is not in the tileset")))
}

/// Every mismatched shared edge inside the grid, each counted once.
pub fn verify_tiling(tileset: &Tileset, grid: &TilingGrid) -> Result<TilingReport> {
    if let Some(k) = grid.cells.iter().position(Option::is_none) {
        let (x, y) = grid.coords(k);
        return Err(Error::Contract(format!(
            "cell ({x}, {y}) is a hole; complete the region first"
        )));
    }
    let mut broken = Vec::new();
    for k in 0..grid.cells.len() {
        let (x, y) = grid.coords(k);
        let here = tile_of(tileset, grid.cells[k].expect("no holes"))?;
        if let Some(Some(e)) = grid.get(x + 1, y) {
            if here.east != tile_of(tileset, e)?.west {
                broken.push(BrokenBond {
                    a: (x, y),
                    b: (x + 1, y),
                    horizontal: true,
                });
            }
        }
        if let Some(Some(n)) = grid.get(x, y + 1) {
            if here.north != tile_of(tileset, n)?.south {
                broken.push(BrokenBond {
                    a: (x, y),
                    b: (x, y + 1),
                    horizontal: false,
                });
            }
        }
    }
    let energy = broken.len() as u64;
    Ok(TilingReport { broken, energy })
}

/// Matching-rule energy minus `ε` for every occurrence of each favored tile.
pub fn tiling_energy(
    tileset: &Tileset,
    grid: &TilingGrid,
    chemical: &[(TileId, f64)],
) -> Result<f64> {
    let report = verify_tiling(tileset, grid)?;
    let mut e = report.energy as f64;
    for &(id, eps) in chemical {
        tile_of(tileset, id)?;
        let n = grid.cells.iter().filter(|c| **c == Some(id)).count();
        e -= eps * n as f64;
    }
    Ok(e)
}

/// Fully-contained translates of `patch` that match the grid.
pub fn count_patch_2d(grid: &TilingGrid, patch: &Patch2d) -> u64 {
    let (dx, dy) = patch.diameter();
    let mut count = 0;
    for by in grid.y0..grid.y0 + grid.height as i64 - dy {
        for bx in grid.x0..grid.x0 + grid.width as i64 - dx {
            if patch
                .cells()
                .iter()
                .all(|&((px, py), t)| grid.get(bx + px, by + py) == Some(Some(t)))
            {
                count += 1;
            }
        }
    }
    count
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Completion {
    Completed(TilingGrid),
    /// Exhaustive search found no matching completion.
    Unsatisfiable,
}

/// Fill every hole so that all matching rules inside the grid hold, or
/// prove that no such filling exists. Cells with the fewest candidate tiles
/// are filled first; candidates are tried in ascending id order.
pub fn complete_region(
    tileset: &Tileset,
    grid: &TilingGrid,
    node_budget: u64,
) -> Result<Completion> {
    for c in grid.cells.iter().flatten() {
        tile_of(tileset, *c)?;
    }
    let mut order: Vec<&Tile> = tileset.tiles.iter().collect();
    order.sort_by_key(|t| t.id);
    let mut solver = Solver {
        tileset,
        order,
        grid: grid.clone(),
        nodes: 0,
        budget: node_budget,
    };
    // Preset cells must agree among themselves.
    if !solver.preset_consistent() {
        return Ok(Completion::Unsatisfiable);
    }
    if solver.search()? {
        Ok(Completion::Completed(solver.grid))
    } else {
        Ok(Completion::Unsatisfiable)
    }
}

struct Solver<'t> {
    tileset: &'t Tileset,
    order: Vec<&'t Tile>,
    grid: TilingGrid,
    nodes: u64,
    budget: u64,
}

impl Solver<'_> {
    fn neighbor(&self, x: i64, y: i64) -> Option<&Tile> {
        match self.grid.get(x, y) {
            Some(Some(id)) => self.tileset.get(id),
            _ => None,
        }
    }

    fn fits(&self, t: &Tile, x: i64, y: i64) -> bool {
        self.neighbor(x + 1, y).is_none_or(|n| n.west == t.east)
            && self.neighbor(x - 1, y).is_none_or(|n| n.east == t.west)
            && self.neighbor(x, y + 1).is_none_or(|n| n.south == t.north)
            && self.neighbor(x, y - 1).is_none_or(|n| n.north == t.south)
    }

    fn preset_consistent(&self) -> bool {
        (0..self.grid.cells.len()).all(|k| {
            let (x, y) = self.grid.coords(k);
            match self.grid.cells[k] {
                Some(id) => self.tileset.get(id).is_some_and(|t| self.fits(t, x, y)),
                None => true,
            }
        })
    }

    fn search(&mut self) -> Result<bool> {
        let mut best: Option<(usize, Vec<TileId>)> = None;
        for k in 0..self.grid.cells.len() {
            if self.grid.cells[k].is_some() {
                continue;
            }
            let (x, y) = self.grid.coords(k);
            let cands: Vec<TileId> = self
                .order
                .iter()
                .filter(|t| self.fits(t, x, y))
                .map(|t| t.id)
                .collect();
            let fewer = best.as_ref().is_none_or(|(_, b)| cands.len() < b.len());
            if fewer {
                let dead = cands.is_empty();
                best = Some((k, cands));
                if dead {
                    break;
                }
            }
        }
        let Some((k, cands)) = best else {
            return Ok(true);
        };
        for id in cands {
            self.nodes += 1;
            if self.nodes > self.budget {
                return Err(Error::Budget(format!(
                    "tiling search exceeded {} nodes",
                    self.budget
                )));
            }
            self.grid.cells[k] = Some(id);
            if self.search()? {
                return Ok(true);
            }
        }
        self.grid.cells[k] = None;
        Ok(false)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const CHECKER: &str = "# checkerboard\nT 0 3 1 4 2\nT 1 4 2 3 1\n";

    fn checkerboard(n: usize) -> TilingGrid {
        TilingGrid::from_fn(n, n, 0, 0, |x, y| ((x + y).rem_euclid(2)) as TileId).unwrap()
    }

    #[test]
    fn tileset_parsing() {
        let t = load_tileset("T 1 0 0 0 0").unwrap();
        assert_eq!(t.tiles().len(), 1);
        let c = load_tileset(CHECKER).unwrap();
        assert_eq!(c.color_count(), 4);
        assert_eq!(c.to_string(), "T 0 3 1 4 2\nT 1 4 2 3 1\n");
        assert_eq!(load_tileset(&c.to_string()).unwrap(), c);
        let dup = load_tileset("T 1 0 0 0 0\n\nT 1 1 1 1 1\n").unwrap_err();
        assert_eq!(
            dup,
            Error::Parse {
                line: Some(3),
                msg: "duplicate tile id 1".into()
            }
        );
        assert!(matches!(
            load_tileset("# nothing\n"),
            Err(Error::Parse { .. })
        ));
        assert!(matches!(
            load_tileset("T 1 0 0 0"),
            Err(Error::Parse { line: Some(1), .. })
        ));
    }

    #[test]
    fn grid_round_trip_and_orientation() {
        let text = "G 3 2 -1 5\n0 1 .\n1 0 1\n";
        let g = TilingGrid::parse(text).unwrap();
        assert_eq!(g.to_string(), text);
        // First row is the northern one.
        assert_eq!(g.get(-1, 6), Some(Some(0)));
        assert_eq!(g.get(1, 6), Some(None));
        assert_eq!(g.get(-1, 5), Some(Some(1)));
        assert_eq!(g.get(2, 5), None);
        assert!(matches!(
            TilingGrid::parse("G 2 2 0 0\n0 0\n"),
            Err(Error::Parse { .. })
        ));
        assert!(matches!(
            TilingGrid::parse("G 2 1 0 0\n0 x\n"),
            Err(Error::Parse { line: Some(2), .. })
        ));
    }

    #[test]
    fn checkerboard_hand_count() {
        let t = load_tileset(CHECKER).unwrap();
        assert_eq!(verify_tiling(&t, &checkerboard(2)).unwrap().energy, 0);
        assert_eq!(verify_tiling(&t, &checkerboard(7)).unwrap().energy, 0);
        let mut g = checkerboard(2);
        g.set(0, 0, Some(1)).unwrap();
        // (0,0) now equals its east and north neighbors.
        assert_eq!(verify_tiling(&t, &g).unwrap().energy, 2);
        assert_eq!(count_patch_2d(&checkerboard(4), &Patch2d::single(0)), 8);
    }

    #[test]
    fn corrupted_cell_in_uniform_grid() {
        let t = load_tileset("T 0 0 0 0 0\nT 1 1 0 0 0\n").unwrap();
        let mut g = TilingGrid::from_fn(10, 10, 0, 0, |_, _| 0).unwrap();
        g.set(4, 4, Some(1)).unwrap();
        let r = verify_tiling(&t, &g).unwrap();
        assert_eq!(r.energy, 1);
        assert_eq!(
            r.broken,
            vec![BrokenBond {
                a: (4, 4),
                b: (4, 5),
                horizontal: false
            }]
        );
        g.set(4, 9, Some(1)).unwrap();
        // The northern neighbor is outside the region.
        assert_eq!(verify_tiling(&t, &g).unwrap().energy, 1);
    }

    #[test]
    fn holes_are_contract_errors() {
        let t = load_tileset("T 0 0 0 0 0").unwrap();
        let g = TilingGrid::new(2, 2, 0, 0).unwrap();
        assert!(matches!(verify_tiling(&t, &g), Err(Error::Contract(_))));
    }

    #[test]
    fn completion() {
        let single = load_tileset("T 7 0 0 0 0").unwrap();
        let Completion::Completed(g) =
            complete_region(&single, &TilingGrid::new(5, 5, 0, 0).unwrap(), 1000).unwrap()
        else {
            panic!("single tile always completes")
        };
        assert_eq!(verify_tiling(&single, &g).unwrap().energy, 0);

        let checker = load_tileset(CHECKER).unwrap();
        let mut partial = TilingGrid::new(3, 3, 0, 0).unwrap();
        partial.set(1, 1, Some(0)).unwrap();
        let Completion::Completed(g) = complete_region(&checker, &partial, 1000).unwrap() else {
            panic!("checkerboard completes")
        };
        assert_eq!(g, checkerboard(3));

        let bad = load_tileset("T 0 1 0 0 0").unwrap();
        for (dx, dy) in [(0, 0), (10, -3)] {
            let column = TilingGrid::new(1, 2, dx, dy).unwrap();
            assert_eq!(
                complete_region(&bad, &column, 1000).unwrap(),
                Completion::Unsatisfiable
            );
        }
        assert!(matches!(
            complete_region(&checker, &TilingGrid::new(30, 30, 0, 0).unwrap(), 10),
            Err(Error::Budget(_))
        ));
    }

    #[test]
    fn chemical_energy() {
        let t = load_tileset(CHECKER).unwrap();
        let g = checkerboard(3);
        assert_eq!(tiling_energy(&t, &g, &[(0, 0.5)]).unwrap(), -2.5);
    }
}
