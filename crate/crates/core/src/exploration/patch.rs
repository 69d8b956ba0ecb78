use super::grid::{Belief, BeliefMap};
use crate::ids::Coord;
use crate::scalar::Scalar;

pub const PATCH_SIZE: usize = 80;
/// Row and column of the robot inside the patch.
pub const PATCH_CENTER: usize = 40;
const BLOCKS: usize = 8;
const BLOCK: usize = PATCH_SIZE / BLOCKS;
/// 8x8 blocks x 3 fractions + 4 frontier counts + bias.
pub const FEATURE_LEN: usize = BLOCKS * BLOCKS * 3 + 4 + 1;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PatchCell {
    Free,
    Unknown,
    Obstacle,
    Robot,
}

/// 80x80 egocentric window over the belief map, row-major.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PatchObservation {
    cells: Vec<PatchCell>,
}

impl PatchObservation {
    pub fn from_cells(cells: Vec<PatchCell>) -> Self {
        assert_eq!(cells.len(), PATCH_SIZE * PATCH_SIZE, "patch size");
        PatchObservation { cells }
    }

    pub fn get(&self, row: usize, col: usize) -> PatchCell {
        self.cells[row * PATCH_SIZE + col]
    }

    pub fn cells(&self) -> &[PatchCell] {
        &self.cells
    }
}

/// Patch pixel `(i, j)` shows map cell `pose + (i - 40, j - 40)`; cells
/// outside the map are unknown and the center is the robot.
pub fn extract_patch(belief: &BeliefMap, pose: Coord) -> PatchObservation {
    let mut cells = vec![PatchCell::Unknown; PATCH_SIZE * PATCH_SIZE];
    let (width, height) = (belief.width() as isize, belief.height() as isize);
    let left = pose.col as isize - PATCH_CENTER as isize;
    let (j0, j1) = ((-left).max(0), (width - left).min(PATCH_SIZE as isize));
    for i in 0..PATCH_SIZE {
        let r = pose.row as isize + i as isize - PATCH_CENTER as isize;
        if r < 0 || r >= height {
            continue;
        }
        for j in j0..j1 {
            cells[i * PATCH_SIZE + j as usize] = match belief.get(Coord::new(r as usize, (left + j) as usize)) {
                Belief::Free => PatchCell::Free,
                Belief::Unknown => PatchCell::Unknown,
                Belief::Obstacle => PatchCell::Obstacle,
            };
        }
    }
    cells[PATCH_CENTER * PATCH_SIZE + PATCH_CENTER] = PatchCell::Robot;
    PatchObservation { cells }
}

/// Linear features of a patch.
///
/// * `[(br * 8 + bc) * 3 + k]` for block row/column `br, bc` of the 10x10
///   blocks: fraction of the block's pixels that are free (`k = 0`, robot
///   included), unknown (`k = 1`) or obstacle (`k = 2`).
/// * `[192..196]`: frontier pixels (free, with an unknown 4-neighbor inside
///   the patch) lying up, down, left and right of the robot, as raw counts.
///   A pixel belongs to the direction of its dominant offset axis; ties go
///   to the vertical direction. The robot pixel itself is not counted.
/// * `[196]`: constant 1.
pub fn featurize<T: Scalar>(patch: &PatchObservation) -> Vec<T> {
    let mut counts = [0u32; BLOCKS * BLOCKS * 3 + 4];
    let cells = patch.cells();
    let unknown = |i: usize, j: usize| cells[i * PATCH_SIZE + j] == PatchCell::Unknown;
    for i in 0..PATCH_SIZE {
        let block_row = (i / BLOCK) * BLOCKS;
        for (j, &cell) in cells[i * PATCH_SIZE..(i + 1) * PATCH_SIZE].iter().enumerate() {
            let k = match cell {
                PatchCell::Free | PatchCell::Robot => 0,
                PatchCell::Unknown => 1,
                PatchCell::Obstacle => 2,
            };
            counts[(block_row + j / BLOCK) * 3 + k] += 1;
            if cell != PatchCell::Free {
                continue;
            }
            let frontier = (i > 0 && unknown(i - 1, j))
                || (i + 1 < PATCH_SIZE && unknown(i + 1, j))
                || (j > 0 && unknown(i, j - 1))
                || (j + 1 < PATCH_SIZE && unknown(i, j + 1));
            if frontier {
                let (dr, dc) = (i as isize - PATCH_CENTER as isize, j as isize - PATCH_CENTER as isize);
                let dir = if dr.abs() >= dc.abs() {
                    if dr < 0 { 0 } else { 1 }
                } else if dc < 0 {
                    2
                } else {
                    3
                };
                counts[BLOCKS * BLOCKS * 3 + dir] += 1;
            }
        }
    }
    finish(&counts)
}

/// `featurize(&extract_patch(belief, pose))`, visiting only the part of the
/// window that overlaps the map.
pub fn belief_features<T: Scalar>(belief: &BeliefMap, pose: Coord) -> Vec<T> {
    let mut counts = [0u32; BLOCKS * BLOCKS * 3 + 4];
    for b in 0..BLOCKS * BLOCKS {
        counts[b * 3 + 1] = (BLOCK * BLOCK) as u32;
    }
    let center = PATCH_CENTER as isize;
    let (pr, pc) = (pose.row as isize, pose.col as isize);
    let in_patch =
        |r: isize, c: isize| ((r - pr + center) as usize) < PATCH_SIZE && ((c - pc + center) as usize) < PATCH_SIZE;
    let unknown = |r: isize, c: isize| {
        in_patch(r, c)
            && (r, c) != (pr, pc)
            && (r < 0 || c < 0 || belief.get(Coord::new(r as usize, c as usize)) == Belief::Unknown)
    };
    let r0 = (pr - center).max(0);
    let r1 = (pr - center + PATCH_SIZE as isize).min(belief.height() as isize);
    let c0 = (pc - center).max(0);
    let c1 = (pc - center + PATCH_SIZE as isize).min(belief.width() as isize);
    for r in r0..r1 {
        for c in c0..c1 {
            let b = belief.get(Coord::new(r as usize, c as usize));
            let robot = r == pr && c == pc;
            let k = match b {
                Belief::Unknown if !robot => continue,
                Belief::Obstacle if !robot => 2,
                _ => 0,
            };
            let (i, j) = ((r - pr + center) as usize, (c - pc + center) as usize);
            let block = (i / BLOCK) * BLOCKS + j / BLOCK;
            counts[block * 3 + 1] -= 1;
            counts[block * 3 + k] += 1;
            if robot || b != Belief::Free {
                continue;
            }
            if unknown(r - 1, c) || unknown(r + 1, c) || unknown(r, c - 1) || unknown(r, c + 1) {
                let (dr, dc) = (r - pr, c - pc);
                let dir = if dr.abs() >= dc.abs() {
                    if dr < 0 { 0 } else { 1 }
                } else if dc < 0 {
                    2
                } else {
                    3
                };
                counts[BLOCKS * BLOCKS * 3 + dir] += 1;
            }
        }
    }
    finish(&counts)
}

fn finish<T: Scalar>(counts: &[u32; BLOCKS * BLOCKS * 3 + 4]) -> Vec<T> {
    let per_block = T::of_usize(BLOCK * BLOCK);
    let mut out = Vec::with_capacity(FEATURE_LEN);
    out.extend(counts[..BLOCKS * BLOCKS * 3].iter().map(|&n| T::of(n as f64) / per_block));
    out.extend(counts[BLOCKS * BLOCKS * 3..].iter().map(|&n| T::of(n as f64)));
    out.push(T::one());
    out
}
