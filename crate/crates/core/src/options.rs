//! Human-designed intra-option policies: shortest-path hallway options for
//! four-rooms and one-step masked moves for exploration.

use std::collections::{BTreeMap, VecDeque};

use crate::error::{HrlError, Result};
use crate::gridworld::{GridMap, Hallway};
use crate::ids::{Action, Coord, OptionId, StateId};

/// When an option finishes on its own.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Completion {
    /// On arrival at this state.
    AtState(StateId),
    /// After a single primitive step.
    AfterOneStep,
}

/// A fixed option: initiation set, deterministic policy and natural
/// completion. The learnable termination lives in the parameter tables.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OptionSpec {
    pub id: OptionId,
    /// Policy over the initiation set; its keys are the initiation set.
    pub policy: BTreeMap<StateId, Action>,
    pub completion: Completion,
}

impl OptionSpec {
    pub fn can_start(&self, s: StateId) -> bool {
        self.policy.contains_key(&s)
    }

    pub fn action(&self, s: StateId) -> Option<Action> {
        self.policy.get(&s).copied()
    }

    pub fn initiation(&self) -> impl Iterator<Item = StateId> + '_ {
        self.policy.keys().copied()
    }

    /// Natural completion test for the state reached after `steps` steps.
    pub fn completes_at(&self, s: StateId, steps: usize) -> bool {
        match self.completion {
            Completion::AtState(target) => s == target,
            Completion::AfterOneStep => steps >= 1,
        }
    }
}

/// BFS distances from `target` over `domain` cells, indexed by free-cell state.
fn bfs_distances(map: &GridMap, domain: &[bool], target: Coord) -> Vec<Option<usize>> {
    let mut dist = vec![None; map.free_count()];
    let t = map.cell_state(target).expect("target is free").0;
    dist[t] = Some(0);
    let mut queue = VecDeque::from([target]);
    while let Some(c) = queue.pop_front() {
        let d = dist[map.cell_state(c).unwrap().0].unwrap();
        for n in map.free_neighbors(c) {
            let ns = map.cell_state(n).unwrap().0;
            if domain[ns] && dist[ns].is_none() {
                dist[ns] = Some(d + 1);
                queue.push_back(n);
            }
        }
    }
    dist
}

/// One option per hallway, in hallway order (north, south, east, west).
///
/// The initiation set holds the two rooms the hallway joins plus those rooms'
/// other hallways. The policy takes the first move, in up/down/left/right
/// priority, that decreases the shortest-path distance to the hallway within
/// that domain.
pub fn build_hallway_options(map: &GridMap) -> Result<Vec<OptionSpec>> {
    let mut out = Vec::with_capacity(4);
    for h in Hallway::ALL {
        let target = map.hallway(h);
        let rooms = map.hallway_rooms(h);
        let mut domain = vec![false; map.free_count()];
        for &c in map.free_cells() {
            let inside = match map.room_of(c) {
                Some(r) => rooms.contains(&r),
                None => map.hallway_at(c).is_some_and(|other| {
                    other == h || rooms.iter().any(|&r| map.room_hallways(r).contains(&other))
                }),
            };
            domain[map.cell_state(c).unwrap().0] = inside;
        }
        let dist = bfs_distances(map, &domain, target);
        let target_state = map.cell_state(target).unwrap();
        let mut policy = BTreeMap::new();
        for &c in map.free_cells() {
            let s = map.cell_state(c).unwrap();
            if !domain[s.0] || s == target_state {
                continue;
            }
            let d = dist[s.0].ok_or_else(|| {
                HrlError::OptionConstruction(format!("{h} hallway unreachable from {c} within its rooms"))
            })?;
            let a = Action::ALL
                .into_iter()
                .find(|&a| {
                    c.offset(a)
                        .and_then(|n| map.cell_state(n))
                        .is_some_and(|n| domain[n.0] && dist[n.0] == Some(d - 1))
                })
                .expect("a BFS predecessor exists");
            policy.insert(s, a);
        }
        out.push(OptionSpec { id: h.option(), policy, completion: Completion::AtState(target_state) });
    }
    Ok(out)
}

/// Anything that can answer "is this cell known to be free".
pub trait KnownFree {
    fn known_free(&self, c: Coord) -> bool;
    /// State key of a pose for a one-step option.
    fn pose_state(&self, c: Coord) -> StateId;
}

/// One-step move options: one per direction whose neighbor is known free.
/// Option ids are the action indices, so at most four options exist.
pub fn build_move_options<B: KnownFree + ?Sized>(belief: &B, pose: Coord) -> Vec<OptionSpec> {
    let s = belief.pose_state(pose);
    Action::ALL
        .into_iter()
        .filter(|&a| pose.offset(a).is_some_and(|n| belief.known_free(n)))
        .map(|a| OptionSpec {
            id: OptionId(a.index()),
            policy: BTreeMap::from([(s, a)]),
            completion: Completion::AfterOneStep,
        })
        .collect()
}
