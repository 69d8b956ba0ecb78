use std::sync::Arc;

use hrl_core::exploration::{
    extract_patch, featurize, sense, Belief, BeliefMap, ExplorationConfig, ExplorationEnv, OccupancyGrid, PatchCell,
    PatchObservation, RewardConfig, PATCH_CENTER, PATCH_SIZE,
};
use hrl_core::options::build_move_options;
use hrl_core::{Action, Coord};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn room(w: usize, h: usize) -> OccupancyGrid {
    let mut text = String::new();
    for r in 0..h {
        for c in 0..w {
            text.push(if r == 0 || c == 0 || r + 1 == h || c + 1 == w { 'X' } else { ' ' });
        }
        text.push('\n');
    }
    OccupancyGrid::parse_ascii(&text).unwrap()
}

#[test]
fn empty_room_is_fully_revealed_from_the_center() {
    let grid = room(9, 9);
    let mut b = BeliefMap::for_grid(&grid);
    assert_eq!(sense(&grid, &mut b, Coord::new(4, 4), 4), 81);
    assert_eq!(sense(&grid, &mut b, Coord::new(4, 4), 4), 0);
    assert!(b.consistent_with(&grid));
}

#[test]
fn patch_matches_belief_under_translation() {
    let grid = room(200, 200);
    let mut b = BeliefMap::for_grid(&grid);
    for r in 0..200 {
        for c in 0..200 {
            b.reveal(Coord::new(r, c), grid.is_free(Coord::new(r, c)));
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for _ in 0..20 {
        let pose = Coord::new(rng.gen_range(1..199), rng.gen_range(1..199));
        let p = extract_patch(&b, pose);
        for i in 0..PATCH_SIZE {
            for j in 0..PATCH_SIZE {
                let (r, c) = ((pose.row + i).checked_sub(PATCH_CENTER), (pose.col + j).checked_sub(PATCH_CENTER));
                let want = match (r, c) {
                    _ if (i, j) == (PATCH_CENTER, PATCH_CENTER) => PatchCell::Robot,
                    (Some(r), Some(c)) if r < 200 && c < 200 => match b.get(Coord::new(r, c)) {
                        Belief::Free => PatchCell::Free,
                        Belief::Obstacle => PatchCell::Obstacle,
                        Belief::Unknown => PatchCell::Unknown,
                    },
                    _ => PatchCell::Unknown,
                };
                assert_eq!(p.get(i, j), want);
            }
        }
    }
}

#[test]
fn swapping_equal_blocks_keeps_the_feature_multiset() {
    let mut cells = vec![PatchCell::Unknown; PATCH_SIZE * PATCH_SIZE];
    // block (0, 0) and block (7, 7) carry the same obstacle pattern
    for (bi, bj) in [(0, 0), (70, 70)] {
        for k in 0..10 {
            cells[(bi + k) * PATCH_SIZE + bj + k] = PatchCell::Obstacle;
        }
    }
    cells[PATCH_CENTER * PATCH_SIZE + PATCH_CENTER] = PatchCell::Robot;
    let sorted = |cells: Vec<PatchCell>| {
        let mut f: Vec<f64> = featurize(&PatchObservation::from_cells(cells));
        f.sort_by(f64::total_cmp);
        f
    };
    let a = sorted(cells.clone());
    let mut swapped = cells.clone();
    for k in 0..10 {
        for l in 0..10 {
            swapped.swap(k * PATCH_SIZE + l, (70 + k) * PATCH_SIZE + 70 + l);
        }
    }
    assert_eq!(sorted(swapped), a);
}

#[test]
fn episode_return_decomposes_and_belief_is_monotone() {
    let grid = Arc::new(OccupancyGrid::default_house());
    let reward = RewardConfig::default();
    let mut env = ExplorationEnv::<f64>::new(grid.clone(), ExplorationConfig { reward, sensor_range: 5 }).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    for _ in 0..5 {
        env.reset(&mut rng);
        let (mut ret, mut revealed, mut moves, mut collisions) = (0.0, 0usize, 0usize, 0usize);
        let mut known = env.belief().known_count();
        let mut success = false;
        for _ in 0..20_000 {
            let a = Action::ALL[rng.gen_range(0..4)];
            let out = env.step(a);
            assert!(env.belief().known_count() >= known);
            known = env.belief().known_count();
            ret += out.reward;
            if out.done {
                success = true;
                assert!(env.explored());
                break;
            }
            revealed += out.revealed;
            moves += !out.collided as usize;
            collisions += out.collided as usize;
        }
        assert!(success);
        let want = reward.c_s * revealed as f64
            + reward.p_time * moves as f64
            + reward.p_collision * collisions as f64
            + reward.r_success;
        assert!((ret - want).abs() < 1e-9, "{ret} vs {want}");
        assert!(env.belief().consistent_with(&grid));
    }
}

#[test]
fn masked_moves_never_collide() {
    let grid = Arc::new(OccupancyGrid::default_house());
    let mut env = ExplorationEnv::<f64>::new(grid, ExplorationConfig::default()).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(10);
    for _ in 0..100 {
        env.reset(&mut rng);
        for _ in 0..200 {
            let opts = build_move_options(env.belief(), env.pose());
            let o = &opts[rng.gen_range(0..opts.len())];
            let out = env.step(Action::ALL[o.id.0]);
            assert!(!out.collided);
            if out.done {
                break;
            }
        }
    }
}
