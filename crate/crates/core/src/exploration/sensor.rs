use super::grid::{BeliefMap, OccupancyGrid};
use crate::ids::Coord;

pub const DEFAULT_SENSOR_RANGE: usize = 8;

/// Bresenham cells from `from` to `to`, both included.
pub fn ray(from: Coord, to: Coord) -> Ray {
    let (r, c) = (from.row as isize, from.col as isize);
    let (tr, tc) = (to.row as isize, to.col as isize);
    let (dr, dc) = ((tr - r).abs(), -(tc - c).abs());
    Ray { r, c, tr, tc, dr, dc, sr: (tr - r).signum(), sc: (tc - c).signum(), err: dr + dc, finished: false }
}

/// Iterator over the cells of a [`ray`].
#[derive(Debug, Clone)]
pub struct Ray {
    r: isize,
    c: isize,
    tr: isize,
    tc: isize,
    dr: isize,
    dc: isize,
    sr: isize,
    sc: isize,
    err: isize,
    finished: bool,
}

impl Iterator for Ray {
    type Item = Coord;

    fn next(&mut self) -> Option<Coord> {
        if self.finished {
            return None;
        }
        let here = Coord::new(self.r as usize, self.c as usize);
        if self.r == self.tr && self.c == self.tc {
            self.finished = true;
            return Some(here);
        }
        let e2 = 2 * self.err;
        if e2 >= self.dc {
            self.err += self.dc;
            self.r += self.sr;
        }
        if e2 <= self.dr {
            self.err += self.dr;
            self.c += self.sc;
        }
        Some(here)
    }
}

/// Casts a ray to every in-map cell within Chebyshev distance `range` of
/// `pose`, revealing cells up to and including the first obstacle on each.
/// Returns how many cells went from unknown to known.
pub fn sense(grid: &OccupancyGrid, belief: &mut BeliefMap, pose: Coord, range: usize) -> usize {
    let mut revealed = 0;
    let (r0, r1) = (pose.row.saturating_sub(range), (pose.row + range).min(grid.height() - 1));
    let (c0, c1) = (pose.col.saturating_sub(range), (pose.col + range).min(grid.width() - 1));
    for row in r0..=r1 {
        for col in c0..=c1 {
            for cell in ray(pose, Coord::new(row, col)) {
                let free = grid.is_free(cell);
                revealed += belief.reveal(cell, free) as usize;
                if !free {
                    break;
                }
            }
        }
    }
    revealed
}
