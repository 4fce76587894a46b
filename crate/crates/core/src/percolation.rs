//! Bootstrap percolation closures and their agreement with greedy build-up
//! on convex starts.

use std::collections::VecDeque;

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::engine::greedy_closure;
use crate::error::{Error, Result};
use crate::grid::{CellId, GridShape};
use crate::latin::random_isotope_hypercube;
use crate::latin::position_from_latin;
use crate::position::Position;

/// Generic monotone chase: `ready(pos, cell)` decides whether a white cell
/// activates. Only neighbours of newly activated cells are re-examined.
fn chase(pos: &Position, ready: impl Fn(&Position, CellId) -> bool) -> Position {
    let shape = pos.shape().clone();
    let mut out = pos.clone();
    let mut queued = vec![false; shape.cell_count()];
    let mut queue = VecDeque::new();
    for c in shape.cells() {
        if !out.is_black(c) && ready(&out, c) {
            queued[c.0] = true;
            queue.push_back(c);
        }
    }
    while let Some(c) = queue.pop_front() {
        queued[c.0] = false;
        if out.is_black(c) || !ready(&out, c) {
            continue;
        }
        out.set_black(c);
        for nb in shape.neighbors(c) {
            if !out.is_black(nb) && !queued[nb.0] && ready(&out, nb) {
                queued[nb.0] = true;
                queue.push_back(nb);
            }
        }
    }
    out
}

/// Least fixed point of "activate with at least `d` active neighbours".
pub fn bootstrap_closure(pos: &Position) -> Position {
    let d = pos.shape().dim();
    chase(pos, |p, c| p.black_degree(c) >= d)
}

fn has_neighbour_on_every_axis(p: &Position, c: CellId) -> bool {
    let shape = p.shape();
    let mut seen = 0u64;
    for nb in shape.neighbors(c) {
        if p.is_black(nb) {
            let axis = shape.adjacency_axis(c, nb).expect("neighbours share an axis");
            seen |= 1 << axis;
        }
    }
    seen.count_ones() as usize == shape.dim()
}

/// Least fixed point of "activate with an active neighbour along every
/// axis".
pub fn modified_bootstrap_closure(pos: &Position) -> Position {
    chase(pos, has_neighbour_on_every_axis)
}

/// For a convex start, greedy build-up, bootstrap and modified bootstrap
/// percolation all end in the same position.
pub fn convex_equivalence_check(pos: &Position) -> Result<bool> {
    if !pos.is_convex() {
        return Err(Error::NotConvex);
    }
    let greedy = greedy_closure(pos);
    Ok(greedy == bootstrap_closure(pos) && greedy == modified_bootstrap_closure(pos))
}

/// A random convex position, drawn from one of several families so that
/// acceptance never vanishes: sparse rejection samples, sub-boxes, Latin
/// positions of hypercubes and subsets of those.
pub fn random_convex_position<R: Rng>(shape: &GridShape, rng: &mut R) -> Position {
    let family = if shape.is_hypercube() {
        rng.gen_range(0..4)
    } else {
        rng.gen_range(0..2)
    };
    match family {
        0 => rejection_sample(shape, rng),
        1 => random_sub_box(shape, rng),
        2 => latin_position(shape, rng),
        _ => {
            let full = latin_position(shape, rng);
            let keep = rng.gen_range(0.3..1.0);
            let cells: Vec<CellId> = full.black_cells().filter(|_| rng.gen_bool(keep)).collect();
            Position::from_cells(shape, cells)
        }
    }
}

fn rejection_sample<R: Rng>(shape: &GridShape, rng: &mut R) -> Position {
    let n = shape.cell_count() as f64;
    loop {
        let expected = rng.gen_range(1.0..6.0);
        let p = (expected / n).min(1.0);
        let cells: Vec<CellId> = shape.cells().filter(|_| rng.gen_bool(p)).collect();
        let pos = Position::from_cells(shape, cells);
        if pos.is_convex() {
            return pos;
        }
    }
}

fn random_sub_box<R: Rng>(shape: &GridShape, rng: &mut R) -> Position {
    let ranges: Vec<(usize, usize)> = shape
        .dims()
        .iter()
        .map(|&n| {
            let a = rng.gen_range(1..=n);
            let b = rng.gen_range(1..=n);
            (a.min(b), a.max(b))
        })
        .collect();
    Position::from_cells(
        shape,
        shape.cells().filter(|&c| {
            ranges
                .iter()
                .enumerate()
                .all(|(axis, &(lo, hi))| (lo..=hi).contains(&shape.component(c, axis)))
        }),
    )
}

fn latin_position<R: Rng>(shape: &GridShape, rng: &mut R) -> Position {
    let n = shape.dims()[0];
    let latin = random_isotope_hypercube(n, shape.dim() - 1, rng.gen());
    position_from_latin(&latin)
}

/// `count` seeded convex positions of `shape`.
pub fn random_convex_positions(shape: &GridShape, count: usize, seed: u64) -> Vec<Position> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count).map(|_| random_convex_position(shape, &mut rng)).collect()
}
