use std::collections::VecDeque;

use crate::error::MapError;
use crate::ids::{Coord, StateId};
use crate::options::KnownFree;

/// The shipped house layout (plain PGM).
pub const DEFAULT_HOUSE: &str = include_str!("../../assets/house.pgm");

/// Ground-truth occupancy: every cell is free or an obstacle.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OccupancyGrid {
    width: usize,
    height: usize,
    free: Vec<bool>,
    free_count: usize,
}

impl OccupancyGrid {
    /// Validates a free-cell mask: sealed border, at least one free cell,
    /// free space connected.
    pub fn from_mask(width: usize, height: usize, free: Vec<bool>) -> Result<Self, MapError> {
        if width == 0 || height == 0 {
            return Err(MapError::Empty);
        }
        assert_eq!(free.len(), width * height, "mask size");
        for row in 0..height {
            for col in 0..width {
                let border = row == 0 || col == 0 || row + 1 == height || col + 1 == width;
                if border && free[row * width + col] {
                    return Err(MapError::UnsealedBorder(Coord::new(row, col)));
                }
            }
        }
        let free_count = free.iter().filter(|&&f| f).count();
        let Some(first) = free.iter().position(|&f| f) else {
            return Err(MapError::NoFreeCells);
        };
        let grid = OccupancyGrid { width, height, free, free_count };
        let mut seen = vec![false; width * height];
        seen[first] = true;
        let mut queue = VecDeque::from([grid.coord(first)]);
        let mut reached = 1;
        while let Some(c) = queue.pop_front() {
            for n in grid.neighbors(c) {
                let i = grid.index(n);
                if grid.free[i] && !seen[i] {
                    seen[i] = true;
                    reached += 1;
                    queue.push_back(n);
                }
            }
        }
        if reached != free_count {
            return Err(MapError::Disconnected { reached, total: free_count });
        }
        Ok(grid)
    }

    /// ASCII layout: `X` obstacle, space or `.` free, `#` lines are comments.
    pub fn parse_ascii(text: &str) -> Result<Self, MapError> {
        let rows: Vec<&str> = text.lines().filter(|l| !l.starts_with('#')).collect();
        let rows: Vec<&str> = trim_blank(&rows);
        if rows.is_empty() {
            return Err(MapError::Empty);
        }
        let width = rows[0].chars().count();
        let mut free = Vec::with_capacity(width * rows.len());
        for (r, line) in rows.iter().enumerate() {
            let w = line.chars().count();
            if w != width {
                return Err(MapError::NonRectangular { row: r, width: w, expected: width });
            }
            for (c, ch) in line.chars().enumerate() {
                free.push(match ch {
                    'X' => false,
                    ' ' | '.' => true,
                    _ => return Err(MapError::UnknownChar { ch, at: Coord::new(r, c) }),
                });
            }
        }
        Self::from_mask(width, rows.len(), free)
    }

    /// Plain-text PGM (`P2`): 0 is an obstacle, the maximum value is free.
    /// Pixels at or above half the maximum count as free.
    pub fn parse_pgm(text: &str) -> Result<Self, MapError> {
        let mut tokens = text.lines().map(|l| l.split('#').next().unwrap_or("")).flat_map(str::split_whitespace);
        if tokens.next() != Some("P2") {
            return Err(MapError::Pgm("expected P2 magic".into()));
        }
        let mut header = [0usize; 3];
        for (h, name) in header.iter_mut().zip(["width", "height", "maxval"]) {
            let t = tokens.next().ok_or_else(|| MapError::Pgm(format!("missing {name}")))?;
            *h = t.parse().map_err(|_| MapError::Pgm(format!("bad {name} {t:?}")))?;
        }
        let [width, height, maxval] = header;
        if maxval == 0 {
            return Err(MapError::Pgm("maxval must be positive".into()));
        }
        let mut free = Vec::with_capacity(width * height);
        for t in tokens {
            let v: usize = t.parse().map_err(|_| MapError::Pgm(format!("bad pixel {t:?}")))?;
            if v > maxval {
                return Err(MapError::Pgm(format!("pixel {v} above maxval {maxval}")));
            }
            free.push(2 * v >= maxval);
        }
        if free.len() != width * height {
            return Err(MapError::Pgm(format!("expected {} pixels, found {}", width * height, free.len())));
        }
        Self::from_mask(width, height, free)
    }

    /// Picks the parser from the content: `P2` magic means PGM.
    pub fn parse(text: &str) -> Result<Self, MapError> {
        let first = text.lines().find(|l| !l.trim().is_empty() && !l.starts_with('#'));
        match first {
            Some(l) if l.trim_start().starts_with("P2") => Self::parse_pgm(text),
            _ => Self::parse_ascii(text),
        }
    }

    pub fn default_house() -> Self {
        Self::parse_pgm(DEFAULT_HOUSE).expect("shipped house map is valid")
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn height(&self) -> usize {
        self.height
    }

    pub fn free_count(&self) -> usize {
        self.free_count
    }

    pub fn in_bounds(&self, c: Coord) -> bool {
        c.row < self.height && c.col < self.width
    }

    pub fn is_free(&self, c: Coord) -> bool {
        self.in_bounds(c) && self.free[self.index(c)]
    }

    pub fn index(&self, c: Coord) -> usize {
        c.row * self.width + c.col
    }

    pub fn coord(&self, i: usize) -> Coord {
        Coord::new(i / self.width, i % self.width)
    }

    pub fn free_cells(&self) -> impl Iterator<Item = Coord> + '_ {
        (0..self.free.len()).filter(|&i| self.free[i]).map(|i| self.coord(i))
    }

    fn neighbors(&self, c: Coord) -> impl Iterator<Item = Coord> + '_ {
        crate::ids::Action::ALL.into_iter().filter_map(move |a| c.offset(a)).filter(|&n| self.in_bounds(n))
    }
}

fn trim_blank<'a>(rows: &[&'a str]) -> Vec<&'a str> {
    let start = rows.iter().position(|l| !l.trim().is_empty()).unwrap_or(rows.len());
    let end = rows.iter().rposition(|l| !l.trim().is_empty()).map_or(start, |e| e + 1);
    rows[start..end].to_vec()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Belief {
    Unknown,
    Free,
    Obstacle,
}

/// What the robot has observed so far. Cells only ever go from unknown to
/// known, and known cells always agree with the ground truth.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BeliefMap {
    width: usize,
    height: usize,
    cells: Vec<Belief>,
    known: usize,
    known_free: usize,
}

impl BeliefMap {
    pub fn unknown(width: usize, height: usize) -> Self {
        BeliefMap { width, height, cells: vec![Belief::Unknown; width * height], known: 0, known_free: 0 }
    }

    pub fn for_grid(grid: &OccupancyGrid) -> Self {
        Self::unknown(grid.width(), grid.height())
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn height(&self) -> usize {
        self.height
    }

    /// `Unknown` outside the map.
    pub fn get(&self, c: Coord) -> Belief {
        if c.row < self.height && c.col < self.width {
            self.cells[c.row * self.width + c.col]
        } else {
            Belief::Unknown
        }
    }

    /// Records the true state of a cell; returns whether it was unknown.
    pub fn reveal(&mut self, c: Coord, free: bool) -> bool {
        let i = c.row * self.width + c.col;
        if self.cells[i] != Belief::Unknown {
            return false;
        }
        self.cells[i] = if free { Belief::Free } else { Belief::Obstacle };
        self.known += 1;
        self.known_free += free as usize;
        true
    }

    pub fn known_count(&self) -> usize {
        self.known
    }

    pub fn known_free_count(&self) -> usize {
        self.known_free
    }

    /// No known cell disagrees with `grid`.
    pub fn consistent_with(&self, grid: &OccupancyGrid) -> bool {
        self.cells.iter().enumerate().all(|(i, b)| match b {
            Belief::Unknown => true,
            Belief::Free => grid.is_free(grid.coord(i)),
            Belief::Obstacle => !grid.is_free(grid.coord(i)),
        })
    }
}

impl KnownFree for BeliefMap {
    fn known_free(&self, c: Coord) -> bool {
        self.get(c) == Belief::Free
    }

    fn pose_state(&self, c: Coord) -> StateId {
        StateId(c.row * self.width + c.col)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ascii_and_pgm_agree() {
        let ascii = "XXXX\nX  X\nX. X\nXXXX\n";
        let pgm = "P2\n# tiny\n4 4\n255\n0 0 0 0\n0 255 255 0\n0 255 255 0\n0 0 0 0\n";
        let a = OccupancyGrid::parse(ascii).unwrap();
        let b = OccupancyGrid::parse(pgm).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.free_count(), 4);
    }

    #[test]
    fn rejects_bad_maps() {
        assert_eq!(OccupancyGrid::parse_ascii(""), Err(MapError::Empty));
        assert_eq!(OccupancyGrid::parse_ascii("XXX\nX X\nX  \nXXX"), Err(MapError::UnsealedBorder(Coord::new(2, 2))));
        assert_eq!(OccupancyGrid::parse_ascii("XXX\nXXX"), Err(MapError::NoFreeCells));
        assert!(matches!(OccupancyGrid::parse_ascii("XXXXX\nX X X\nXXXXX"), Err(MapError::Disconnected { .. })));
        assert!(matches!(OccupancyGrid::parse_ascii("XXX\nX?X\nXXX"), Err(MapError::UnknownChar { ch: '?', .. })));
        assert!(matches!(OccupancyGrid::parse_ascii("XXX\nX X\nXX"), Err(MapError::NonRectangular { row: 2, .. })));
        assert!(matches!(OccupancyGrid::parse_pgm("P5 1 1 255 0"), Err(MapError::Pgm(_))));
        assert!(matches!(OccupancyGrid::parse_pgm("P2 3 3 255 0 0 0 0 255 0 0 0"), Err(MapError::Pgm(_))));
        assert!(matches!(OccupancyGrid::parse_pgm("P2 1 1 255 300"), Err(MapError::Pgm(_))));
    }

    #[test]
    fn shipped_house_is_valid() {
        let g = OccupancyGrid::default_house();
        assert!(g.free_count() > 100);
    }

    #[test]
    fn belief_reveals_once() {
        let mut b = BeliefMap::unknown(3, 3);
        assert!(b.reveal(Coord::new(1, 1), true));
        assert!(!b.reveal(Coord::new(1, 1), true));
        assert_eq!((b.known_count(), b.known_free_count()), (1, 1));
        assert!(b.known_free(Coord::new(1, 1)));
        assert_eq!(b.get(Coord::new(9, 9)), Belief::Unknown);
    }
}
