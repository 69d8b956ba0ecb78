//! Four-rooms navigation: map parsing, slip dynamics and the optional
//! randomly-blocked hallway.

use std::collections::VecDeque;
use std::fmt;
use std::sync::Arc;

use rand::Rng;

use crate::env::{ActionSource, Environment, OptionEnvironment, Transition};
use crate::error::{HrlError, MapError, Result};
use crate::ids::{Action, Coord, OptionId, StateId};
use crate::scalar::Scalar;

/// The shipped 13x13 map (104 free cells, goal at the east hallway).
pub const DEFAULT_MAP: &str = include_str!("../assets/four_rooms.txt");

/// Longest blockage, in environment steps.
pub const MAX_BLOCK_STEPS: u32 = 20;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Hallway {
    North = 0,
    South = 1,
    East = 2,
    West = 3,
}

impl Hallway {
    pub const ALL: [Hallway; 4] = [Hallway::North, Hallway::South, Hallway::East, Hallway::West];

    pub fn label(self) -> char {
        match self {
            Hallway::North => 'N',
            Hallway::South => 'S',
            Hallway::East => 'E',
            Hallway::West => 'W',
        }
    }

    pub fn from_label(c: char) -> Option<Hallway> {
        Self::ALL.into_iter().find(|h| h.label() == c)
    }

    pub fn index(self) -> usize {
        self as usize
    }

    /// Hallway options are numbered by their target hallway.
    pub fn option(self) -> OptionId {
        OptionId(self.index())
    }

    pub fn from_option(w: OptionId) -> Option<Hallway> {
        Self::ALL.get(w.0).copied()
    }
}

impl fmt::Display for Hallway {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Hallway::North => "north",
            Hallway::South => "south",
            Hallway::East => "east",
            Hallway::West => "west",
        })
    }
}

/// Validated four-rooms layout.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GridMap {
    width: usize,
    height: usize,
    free: Vec<bool>,
    hallways: [Coord; 4],
    goal: Hallway,
    free_cells: Vec<Coord>,
    free_index: Vec<Option<usize>>,
    room_of: Vec<Option<usize>>,
    room_hallways: Vec<Vec<Hallway>>,
    hallway_rooms: [[usize; 2]; 4],
}

/// Parses the ASCII map format: `X` wall, space free, `N`/`S`/`E`/`W`
/// hallway cells and `G` marking the goal hallway, whose label is the one
/// letter not otherwise present. Lines starting with `#` are comments.
pub fn load_map(text: &str) -> std::result::Result<GridMap, MapError> {
    let rows: Vec<Vec<char>> = text
        .lines()
        .filter(|l| !l.starts_with('#'))
        .map(|l| l.trim_end_matches('\r').chars().collect())
        .collect::<Vec<_>>();
    let rows: Vec<Vec<char>> = {
        let mut r = rows;
        while r.last().is_some_and(|l| l.is_empty()) {
            r.pop();
        }
        r
    };
    if rows.is_empty() || rows[0].is_empty() {
        return Err(MapError::Empty);
    }
    let width = rows[0].len();
    let height = rows.len();
    for (row, r) in rows.iter().enumerate() {
        if r.len() != width {
            return Err(MapError::NonRectangular { row, width: r.len(), expected: width });
        }
    }

    let mut free = vec![false; width * height];
    let mut labels: [Option<Coord>; 4] = [None; 4];
    let mut goal_cell = None;
    for (row, r) in rows.iter().enumerate() {
        for (col, &ch) in r.iter().enumerate() {
            let at = Coord::new(row, col);
            let is_free = match ch {
                'X' => false,
                ' ' => true,
                'G' => {
                    if goal_cell.replace(at).is_some() {
                        return Err(MapError::DuplicateHallway('G'));
                    }
                    true
                }
                c => match Hallway::from_label(c) {
                    Some(h) => {
                        if labels[h.index()].replace(at).is_some() {
                            return Err(MapError::DuplicateHallway(c));
                        }
                        true
                    }
                    None => return Err(MapError::UnknownChar { ch, at }),
                },
            };
            free[row * width + col] = is_free;
        }
    }

    for row in 0..height {
        for col in 0..width {
            let border = row == 0 || col == 0 || row + 1 == height || col + 1 == width;
            if border && free[row * width + col] {
                return Err(MapError::UnsealedBorder(Coord::new(row, col)));
            }
        }
    }
    if !free.iter().any(|&f| f) {
        return Err(MapError::NoFreeCells);
    }

    let idx = |c: Coord| c.row * width + c.col;
    let neighbors = |c: Coord| {
        Action::ALL
            .into_iter()
            .filter_map(move |a| c.offset(a))
            .filter(move |n| n.row < height && n.col < width)
    };

    let free_cells: Vec<Coord> = (0..height)
        .flat_map(|row| (0..width).map(move |col| Coord::new(row, col)))
        .filter(|&c| free[idx(c)])
        .collect();
    let mut free_index = vec![None; width * height];
    for (i, &c) in free_cells.iter().enumerate() {
        free_index[idx(c)] = Some(i);
    }

    let mut seen = vec![false; width * height];
    let mut queue = VecDeque::from([free_cells[0]]);
    seen[idx(free_cells[0])] = true;
    let mut reached = 1;
    while let Some(c) = queue.pop_front() {
        for n in neighbors(c) {
            if free[idx(n)] && !seen[idx(n)] {
                seen[idx(n)] = true;
                reached += 1;
                queue.push_back(n);
            }
        }
    }
    if reached != free_cells.len() {
        return Err(MapError::Disconnected { reached, total: free_cells.len() });
    }

    let goal_cell = goal_cell.ok_or(MapError::MissingHallway('G'))?;
    let missing: Vec<Hallway> = Hallway::ALL.into_iter().filter(|h| labels[h.index()].is_none()).collect();
    let goal = match missing.as_slice() {
        [h] => *h,
        [] => return Err(MapError::DuplicateHallway('G')),
        [h, ..] => return Err(MapError::MissingHallway(h.label())),
    };
    labels[goal.index()] = Some(goal_cell);
    let hallways = labels.map(|c| c.expect("all hallway labels resolved"));

    // Rooms: connected components of free space with hallway cells removed.
    let is_hall = |c: Coord| hallways.contains(&c);
    let mut room_of = vec![None; width * height];
    let mut room_count = 0;
    for &start in &free_cells {
        if is_hall(start) || room_of[idx(start)].is_some() {
            continue;
        }
        room_of[idx(start)] = Some(room_count);
        let mut queue = VecDeque::from([start]);
        while let Some(c) = queue.pop_front() {
            for n in neighbors(c) {
                if free[idx(n)] && !is_hall(n) && room_of[idx(n)].is_none() {
                    room_of[idx(n)] = Some(room_count);
                    queue.push_back(n);
                }
            }
        }
        room_count += 1;
    }

    let mut room_hallways = vec![Vec::new(); room_count];
    let mut hallway_rooms = [[0usize; 2]; 4];
    for h in Hallway::ALL {
        let at = hallways[h.index()];
        let mut rooms: Vec<usize> = neighbors(at).filter_map(|n| room_of[idx(n)]).collect();
        rooms.sort_unstable();
        rooms.dedup();
        if rooms.len() != 2 {
            return Err(MapError::HallwayRooms { label: h.label(), at, rooms: rooms.len() });
        }
        hallway_rooms[h.index()] = [rooms[0], rooms[1]];
        for r in rooms {
            room_hallways[r].push(h);
        }
    }

    Ok(GridMap {
        width,
        height,
        free,
        hallways,
        goal,
        free_cells,
        free_index,
        room_of,
        room_hallways,
        hallway_rooms,
    })
}

impl GridMap {
    /// The shipped default map.
    pub fn default_map() -> GridMap {
        load_map(DEFAULT_MAP).expect("shipped map is valid")
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn height(&self) -> usize {
        self.height
    }

    pub fn in_bounds(&self, c: Coord) -> bool {
        c.row < self.height && c.col < self.width
    }

    pub fn is_free(&self, c: Coord) -> bool {
        self.in_bounds(c) && self.free[c.row * self.width + c.col]
    }

    pub fn free_cells(&self) -> &[Coord] {
        &self.free_cells
    }

    pub fn free_count(&self) -> usize {
        self.free_cells.len()
    }

    /// Dense index of a free cell; this is the cell's [`StateId`].
    pub fn cell_state(&self, c: Coord) -> Option<StateId> {
        if !self.in_bounds(c) {
            return None;
        }
        self.free_index[c.row * self.width + c.col].map(StateId)
    }

    pub fn cell_of(&self, s: StateId) -> Coord {
        self.free_cells[s.0]
    }

    pub fn hallway(&self, h: Hallway) -> Coord {
        self.hallways[h.index()]
    }

    pub fn hallway_at(&self, c: Coord) -> Option<Hallway> {
        Hallway::ALL.into_iter().find(|h| self.hallways[h.index()] == c)
    }

    pub fn goal(&self) -> Hallway {
        self.goal
    }

    pub fn goal_cell(&self) -> Coord {
        self.hallway(self.goal)
    }

    pub fn room_count(&self) -> usize {
        self.room_hallways.len()
    }

    /// Room containing a non-hallway free cell.
    pub fn room_of(&self, c: Coord) -> Option<usize> {
        if !self.in_bounds(c) {
            return None;
        }
        self.room_of[c.row * self.width + c.col]
    }

    pub fn room_hallways(&self, room: usize) -> &[Hallway] {
        &self.room_hallways[room]
    }

    /// The two rooms a hallway joins.
    pub fn hallway_rooms(&self, h: Hallway) -> [usize; 2] {
        self.hallway_rooms[h.index()]
    }

    /// Free neighbors of `c` in action order.
    pub fn free_neighbors(&self, c: Coord) -> impl Iterator<Item = Coord> + '_ {
        Action::ALL.into_iter().filter_map(move |a| c.offset(a)).filter(|&n| self.is_free(n))
    }

    /// Hallway options available at `cell`: the two hallways of its room, or
    /// at a hallway cell, the hallways of both adjacent rooms other than the
    /// cell itself.
    pub fn available_options(&self, cell: Coord) -> Vec<OptionId> {
        let mut hs: Vec<Hallway> = match self.hallway_at(cell) {
            Some(here) => self
                .hallway_rooms(here)
                .iter()
                .flat_map(|&r| self.room_hallways(r).iter().copied())
                .filter(|&h| h != here)
                .collect(),
            None => match self.room_of(cell) {
                Some(r) => self.room_hallways(r).to_vec(),
                None => Vec::new(),
            },
        };
        hs.sort_unstable();
        hs.dedup();
        hs.into_iter().map(Hallway::option).collect()
    }
}

/// Primitive-move failure model.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SlipModel {
    pub fail_prob: f64,
    /// Draw the slip destination from the empty neighbors other than the
    /// intended one.
    pub exclude_intended: bool,
    /// Whether option-issued moves slip as well as primitive-agent moves.
    pub applies_to_options: bool,
}

impl Default for SlipModel {
    fn default() -> Self {
        SlipModel { fail_prob: 1.0 / 3.0, exclude_intended: false, applies_to_options: false }
    }
}

/// Currently blocked hallway and the steps left until it is resampled.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct BlockState {
    pub blocked: Option<Hallway>,
    pub remaining: u32,
}

impl BlockState {
    pub const NONE: BlockState = BlockState { blocked: None, remaining: 0 };

    /// Fresh blockage: a uniform non-goal hallway for a uniform 1..=20 steps.
    pub fn sample<R: Rng + ?Sized>(goal: Hallway, rng: &mut R) -> BlockState {
        let candidates: Vec<Hallway> = Hallway::ALL.into_iter().filter(|&h| h != goal).collect();
        let blocked = candidates[rng.gen_range(0..candidates.len())];
        let remaining = rng.gen_range(1..=MAX_BLOCK_STEPS);
        BlockState { blocked: Some(blocked), remaining }
    }

    pub fn blocked_cell(&self, map: &GridMap) -> Option<Coord> {
        self.blocked.map(|h| map.hallway(h))
    }
}

/// Counts down the blockage, resampling when it reaches zero.
pub fn advance_block<R: Rng + ?Sized>(block: BlockState, goal: Hallway, rng: &mut R) -> BlockState {
    let remaining = block.remaining.saturating_sub(1);
    if remaining == 0 {
        BlockState::sample(goal, rng)
    } else {
        BlockState { remaining, ..block }
    }
}

/// Outcome of one primitive move.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StepOutcome<T> {
    pub next: Coord,
    pub reward: T,
    pub done: bool,
    pub slipped: bool,
}

/// Moves one cell. With probability `fail_prob` (when `apply_slip`) the
/// destination is a uniformly drawn empty neighbor instead of the intended
/// one. Moving into a wall or the blocked hallway leaves the agent in place.
///
/// Blockage only prevents entry: an agent already standing on a hallway
/// when it becomes blocked may step off it.
#[allow(clippy::too_many_arguments)]
pub fn step<T: Scalar, R: Rng + ?Sized>(
    map: &GridMap,
    block: &BlockState,
    cell: Coord,
    action: Action,
    slip: &SlipModel,
    apply_slip: bool,
    goal_reward: T,
    rng: &mut R,
) -> Result<StepOutcome<T>> {
    if !map.is_free(cell) {
        return Err(HrlError::InvalidCell(cell));
    }
    let blocked = block.blocked_cell(map);
    let open = |c: Coord| map.is_free(c) && Some(c) != blocked;
    let intended = cell.offset(action).filter(|&c| open(c));

    let mut slipped = false;
    let next = if apply_slip && slip.fail_prob > 0.0 && rng.gen::<f64>() < slip.fail_prob {
        slipped = true;
        let candidates: Vec<Coord> = Action::ALL
            .into_iter()
            .filter(|&a| !(slip.exclude_intended && a == action))
            .filter_map(|a| cell.offset(a))
            .filter(|&c| open(c))
            .collect();
        if candidates.is_empty() {
            cell
        } else {
            candidates[rng.gen_range(0..candidates.len())]
        }
    } else {
        intended.unwrap_or(cell)
    };
    let done = next == map.goal_cell();
    let reward = if done { goal_reward } else { T::zero() };
    Ok(StepOutcome { next, reward, done, slipped })
}

#[derive(Debug, Clone, PartialEq)]
pub struct FourRoomsConfig<T> {
    pub slip: SlipModel,
    pub goal_reward: T,
    /// Enables the randomly blocked hallway.
    pub blocking: bool,
    /// Appends the blockage indicator to the learner state.
    pub observe_blockage: bool,
}

impl<T: Scalar> Default for FourRoomsConfig<T> {
    fn default() -> Self {
        FourRoomsConfig { slip: SlipModel::default(), goal_reward: T::one(), blocking: false, observe_blockage: true }
    }
}

impl<T: Scalar> FourRoomsConfig<T> {
    pub fn blocked() -> Self {
        FourRoomsConfig { blocking: true, ..Self::default() }
    }
}

/// Stateful four-rooms episode.
#[derive(Debug, Clone)]
pub struct FourRooms<T> {
    map: Arc<GridMap>,
    config: FourRoomsConfig<T>,
    cell: Coord,
    block: BlockState,
    start_cells: Vec<Coord>,
}

impl<T: Scalar> FourRooms<T> {
    pub fn new(map: Arc<GridMap>, config: FourRoomsConfig<T>) -> Self {
        let goal = map.goal_cell();
        let start_cells: Vec<Coord> = map.free_cells().iter().copied().filter(|&c| c != goal).collect();
        let cell = start_cells[0];
        FourRooms { map, config, cell, block: BlockState::NONE, start_cells }
    }

    pub fn map(&self) -> &GridMap {
        &self.map
    }

    pub fn config(&self) -> &FourRoomsConfig<T> {
        &self.config
    }

    pub fn cell(&self) -> Coord {
        self.cell
    }

    pub fn block(&self) -> BlockState {
        self.block
    }

    /// Places the agent; the cell must be free. Used by tests and tools.
    pub fn set_cell(&mut self, cell: Coord) -> Result<()> {
        if !self.map.is_free(cell) {
            return Err(HrlError::InvalidCell(cell));
        }
        self.cell = cell;
        Ok(())
    }

    pub fn set_block(&mut self, block: BlockState) {
        self.block = block;
    }

    fn observes_blockage(&self) -> bool {
        self.config.blocking && self.config.observe_blockage
    }

    /// Blockage indicator: 0 for none, otherwise 1 + rank among non-goal hallways.
    pub fn blockage_indicator(&self) -> usize {
        match self.block.blocked {
            None => 0,
            Some(h) => {
                1 + Hallway::ALL
                    .into_iter()
                    .filter(|&x| x != self.map.goal())
                    .position(|x| x == h)
                    .expect("goal hallway is never blocked")
            }
        }
    }
}

impl<T: Scalar> Environment<T> for FourRooms<T> {
    fn state_count(&self) -> usize {
        if self.observes_blockage() {
            self.map.free_count() * 4
        } else {
            self.map.free_count()
        }
    }

    fn reset<R: Rng + ?Sized>(&mut self, rng: &mut R) -> StateId {
        self.cell = self.start_cells[rng.gen_range(0..self.start_cells.len())];
        self.block = if self.config.blocking { BlockState::sample(self.map.goal(), rng) } else { BlockState::NONE };
        self.state()
    }

    fn state(&self) -> StateId {
        let base = self.map.cell_state(self.cell).expect("agent on a free cell").0;
        if self.observes_blockage() {
            StateId(base + self.map.free_count() * self.blockage_indicator())
        } else {
            StateId(base)
        }
    }

    fn step<R: Rng + ?Sized>(&mut self, action: Action, source: ActionSource, rng: &mut R) -> Transition<T> {
        let apply_slip = source == ActionSource::Primitive || self.config.slip.applies_to_options;
        let out = step(
            &self.map,
            &self.block,
            self.cell,
            action,
            &self.config.slip,
            apply_slip,
            self.config.goal_reward,
            rng,
        )
        .expect("agent on a free cell");
        self.cell = out.next;
        if self.config.blocking {
            self.block = advance_block(self.block, self.map.goal(), rng);
        }
        Transition { state: self.state(), reward: out.reward, done: out.done }
    }
}

impl<T: Scalar> OptionEnvironment<T> for FourRooms<T> {
    fn option_count(&self) -> usize {
        4
    }

    fn option_state(&self) -> StateId {
        self.map.cell_state(self.cell).expect("agent on a free cell")
    }

    fn available_options(&self) -> Vec<OptionId> {
        self.map.available_options(self.cell)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn rng(seed: u64) -> ChaCha8Rng {
        ChaCha8Rng::seed_from_u64(seed)
    }

    fn body() -> Vec<String> {
        DEFAULT_MAP.lines().filter(|l| !l.starts_with('#')).map(String::from).collect()
    }

    #[test]
    fn default_map_shape() {
        let m = GridMap::default_map();
        assert_eq!((m.width(), m.height()), (13, 13));
        assert_eq!(m.free_count(), 104);
        assert_eq!(m.room_count(), 4);
        assert_eq!(m.goal(), Hallway::East);
        assert_eq!(m.hallway(Hallway::North), Coord::new(3, 6));
        assert_eq!(m.hallway(Hallway::West), Coord::new(6, 2));
        assert_eq!(m.hallway(Hallway::East), Coord::new(7, 9));
        assert_eq!(m.hallway(Hallway::South), Coord::new(10, 6));
        for r in 0..4 {
            assert_eq!(m.room_hallways(r).len(), 2);
        }
    }

    #[test]
    fn unsealed_border_rejected() {
        let text = "XXXXX\nXGX X\n X NX\nXSXWX\nXXXXX\n";
        assert_eq!(load_map(text).unwrap_err(), MapError::UnsealedBorder(Coord::new(2, 0)));
        let mut lines = body();
        lines[5].replace_range(12..13, " ");
        let err = load_map(&lines.join("\n")).unwrap_err();
        assert!(err.to_string().contains("unsealed border"));
    }

    #[test]
    fn all_wall_map_has_no_free_cells() {
        let err = load_map("XXX\nXXX\nXXX").unwrap_err();
        assert_eq!(err, MapError::NoFreeCells);
        assert_eq!(err.to_string(), "no free cells");
    }

    #[test]
    fn malformed_maps() {
        assert!(matches!(load_map("XXXX\nXX\nXXXX"), Err(MapError::NonRectangular { row: 1, .. })));
        assert_eq!(load_map(""), Err(MapError::Empty));
        let text = body().join("\n");
        let dup = text.replacen('S', "N", 1);
        assert_eq!(load_map(&dup), Err(MapError::DuplicateHallway('N')));
        let missing = text.replacen('S', " ", 1);
        assert_eq!(load_map(&missing), Err(MapError::MissingHallway('S')));
        let no_goal = text.replacen('G', " ", 1);
        assert_eq!(load_map(&no_goal), Err(MapError::MissingHallway('G')));
        let bad = text.replacen("XXWXXXX", "XXWXXX?", 1);
        assert!(matches!(load_map(&bad), Err(MapError::UnknownChar { ch: '?', .. })));
    }

    #[test]
    fn disconnected_free_space_rejected() {
        let text = "XXXXXXX\nX X X X\nXXXXXXX";
        assert!(matches!(load_map(text), Err(MapError::Disconnected { .. })));
    }

    #[test]
    fn wall_bump_without_slip_stays_put() {
        let m = GridMap::default_map();
        let cell = Coord::new(1, 1);
        let out = step::<f64, _>(&m, &BlockState::NONE, cell, Action::Up, &SlipModel::default(), false, 1.0, &mut rng(0))
            .unwrap();
        assert_eq!(out.next, cell);
        assert_eq!(out.reward, 0.0);
        assert!(!out.done);
    }

    #[test]
    fn entering_goal_ends_episode() {
        let m = GridMap::default_map();
        // (6, 9) sits directly above the east hallway.
        let out = step::<f64, _>(
            &m,
            &BlockState::NONE,
            Coord::new(6, 9),
            Action::Down,
            &SlipModel::default(),
            false,
            1.0,
            &mut rng(0),
        )
        .unwrap();
        assert_eq!(out.next, m.goal_cell());
        assert_eq!(out.reward, 1.0);
        assert!(out.done);
    }

    #[test]
    fn invalid_cell_is_an_error() {
        let m = GridMap::default_map();
        let r = step::<f64, _>(&m, &BlockState::NONE, Coord::new(0, 0), Action::Up, &SlipModel::default(), true, 1.0, &mut rng(0));
        assert_eq!(r, Err(HrlError::InvalidCell(Coord::new(0, 0))));
    }

    #[test]
    fn slip_frequency_in_open_cell() {
        let m = GridMap::default_map();
        let cell = Coord::new(3, 3);
        let mut r = rng(11);
        let n = 100_000;
        let mut slipped = 0;
        let mut off_target = 0;
        for _ in 0..n {
            let out = step::<f64, _>(&m, &BlockState::NONE, cell, Action::Right, &SlipModel::default(), true, 1.0, &mut r)
                .unwrap();
            slipped += out.slipped as usize;
            off_target += (out.next != Coord::new(3, 4)) as usize;
        }
        let rate = slipped as f64 / n as f64;
        assert!((rate - 1.0 / 3.0).abs() < 0.01, "slip rate {rate}");
        // Uniform over four open neighbors, one of which is the intended cell.
        let off = off_target as f64 / n as f64;
        assert!((off - 0.25).abs() < 0.01, "off-target rate {off}");
    }

    #[test]
    fn slip_excluding_intended() {
        let m = GridMap::default_map();
        let slip = SlipModel { exclude_intended: true, ..SlipModel::default() };
        let mut r = rng(5);
        let n = 60_000;
        let off = (0..n)
            .filter(|_| {
                step::<f64, _>(&m, &BlockState::NONE, Coord::new(3, 3), Action::Right, &slip, true, 1.0, &mut r)
                    .unwrap()
                    .next
                    != Coord::new(3, 4)
            })
            .count();
        assert!((off as f64 / n as f64 - 1.0 / 3.0).abs() < 0.01);
    }

    #[test]
    fn blocked_hallway_is_not_enterable() {
        let m = GridMap::default_map();
        let block = BlockState { blocked: Some(Hallway::North), remaining: 5 };
        let beside = Coord::new(3, 5);
        let out =
            step::<f64, _>(&m, &block, beside, Action::Right, &SlipModel::default(), false, 1.0, &mut rng(0)).unwrap();
        assert_eq!(out.next, beside);
        let mut r = rng(3);
        for _ in 0..2000 {
            let out = step::<f64, _>(&m, &block, beside, Action::Right, &SlipModel::default(), true, 1.0, &mut r).unwrap();
            assert_ne!(out.next, m.hallway(Hallway::North));
        }
    }

    #[test]
    fn block_countdown_and_resample() {
        let mut r = rng(1);
        let b = BlockState { blocked: Some(Hallway::South), remaining: 5 };
        assert_eq!(advance_block(b, Hallway::East, &mut r), BlockState { blocked: Some(Hallway::South), remaining: 4 });
        for _ in 0..200 {
            let b = advance_block(BlockState { blocked: Some(Hallway::South), remaining: 1 }, Hallway::East, &mut r);
            assert!(matches!(b.blocked, Some(Hallway::North | Hallway::South | Hallway::West)));
            assert!((1..=20).contains(&b.remaining));
        }
    }

    #[test]
    fn block_resample_frequencies() {
        let mut r = rng(2);
        let n = 60_000;
        let mut counts = [0usize; 4];
        let mut total = 0u64;
        for _ in 0..n {
            let b = advance_block(BlockState { blocked: Some(Hallway::North), remaining: 1 }, Hallway::East, &mut r);
            counts[b.blocked.unwrap().index()] += 1;
            total += b.remaining as u64;
        }
        assert_eq!(counts[Hallway::East.index()], 0);
        for h in [Hallway::North, Hallway::South, Hallway::West] {
            let f = counts[h.index()] as f64 / n as f64;
            assert!((f - 1.0 / 3.0).abs() < 0.01, "{h}: {f}");
        }
        let mean = total as f64 / n as f64;
        assert!((mean - 10.5).abs() < 0.1, "mean tau {mean}");
    }

    #[test]
    fn room_options_and_hallway_options() {
        let m = GridMap::default_map();
        // top-left room: north and west hallways
        assert_eq!(m.available_options(Coord::new(2, 2)), vec![Hallway::North.option(), Hallway::West.option()]);
        // bottom-right room: south and east hallways
        assert_eq!(m.available_options(Coord::new(10, 10)), vec![Hallway::South.option(), Hallway::East.option()]);
        // at the north hallway: west (top-left) and east (top-right)
        assert_eq!(m.available_options(m.hallway(Hallway::North)), vec![Hallway::East.option(), Hallway::West.option()]);
        for &c in m.free_cells() {
            if m.hallway_at(c).is_none() {
                assert!(m.available_options(c).len() >= 2);
            }
        }
    }

    #[test]
    fn blocking_disabled_matches_plain_env() {
        let m = Arc::new(GridMap::default_map());
        let mut plain = FourRooms::<f64>::new(m.clone(), FourRoomsConfig::default());
        let cfg = FourRoomsConfig { blocking: false, observe_blockage: true, ..FourRoomsConfig::default() };
        let mut other = FourRooms::<f64>::new(m, cfg);
        let (mut r1, mut r2) = (rng(9), rng(9));
        assert_eq!(plain.reset(&mut r1), other.reset(&mut r2));
        for i in 0..5000 {
            let a = Action::ALL[i % 4];
            let t1 = plain.step(a, ActionSource::Primitive, &mut r1);
            let t2 = other.step(a, ActionSource::Primitive, &mut r2);
            assert_eq!(t1, t2);
            if t1.done {
                plain.reset(&mut r1);
                other.reset(&mut r2);
            }
        }
    }

    #[test]
    fn agent_never_on_wall_or_blocked_cell() {
        let m = Arc::new(GridMap::default_map());
        let mut env = FourRooms::<f64>::new(m.clone(), FourRoomsConfig::blocked());
        let mut r = rng(4);
        env.reset(&mut r);
        assert_eq!(env.state_count(), 416);
        for i in 0..20_000 {
            let from = env.cell();
            let blocked = env.block().blocked_cell(&m);
            let t = env.step(Action::ALL[(i * 7) % 4], ActionSource::Primitive, &mut r);
            assert!(m.is_free(env.cell()));
            assert_eq!(env.cell(), m.cell_of(StateId(t.state.0 % 104)));
            if env.cell() != from {
                assert_ne!(Some(env.cell()), blocked);
            }
            if t.done {
                env.reset(&mut r);
            } else {
                assert_eq!(t.reward, 0.0);
            }
        }
    }

    #[test]
    fn uniform_random_walk_mean_length() {
        // Exact capped expectation on this map is 362.2 for an 800-step cap.
        let m = Arc::new(GridMap::default_map());
        let mut env = FourRooms::<f64>::new(m, FourRoomsConfig::default());
        let mut r = rng(21);
        let episodes = 2000;
        let mut total = 0usize;
        for _ in 0..episodes {
            env.reset(&mut r);
            let mut t = 0;
            while t < 800 {
                t += 1;
                let a = Action::ALL[r.gen_range(0..4)];
                if env.step(a, ActionSource::Primitive, &mut r).done {
                    break;
                }
            }
            total += t;
        }
        let mean = total as f64 / episodes as f64;
        assert!((mean - 362.0).abs() < 0.15 * 362.0, "mean length {mean}");
    }
}
