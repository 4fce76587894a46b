//! Moves, traces and the greedy build-up.
//!
//! A build-up move adds a white cell with exactly `d` black neighbours; a
//! dismantling move removes a black cell with exactly `d` black neighbours.
//! Every move is recorded as a [`MoveStar`]: the cell together with the
//! black neighbours it had when the move was made.

use std::collections::VecDeque;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, MoveError, Result};
use crate::grid::{CellId, Coord, GridShape};
use crate::position::{Position, PositionFile};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Direction {
    #[serde(rename = "buildup")]
    BuildUp,
    Dismantling,
}

impl Direction {
    pub fn reverse(self) -> Direction {
        match self {
            Direction::BuildUp => Direction::Dismantling,
            Direction::Dismantling => Direction::BuildUp,
        }
    }
}

/// A move `(v, N(v))`. `nbrs` is kept sorted.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct MoveStar {
    pub cell: Coord,
    pub nbrs: Vec<Coord>,
}

impl MoveStar {
    pub fn new(cell: Coord, mut nbrs: Vec<Coord>) -> Self {
        nbrs.sort();
        MoveStar { cell, nbrs }
    }

    /// The recorded neighbours lie on pairwise different axes through the
    /// cell.
    pub fn is_balanced(&self) -> bool {
        let d = self.cell.dim();
        if self.nbrs.len() != d {
            return false;
        }
        let mut seen = vec![false; d];
        for nb in &self.nbrs {
            let Some(axis) = differing_axis(&self.cell, nb) else {
                return false;
            };
            if std::mem::replace(&mut seen[axis], true) {
                return false;
            }
        }
        true
    }

    fn from_ids(shape: &GridShape, cell: CellId, nbrs: impl Iterator<Item = CellId>) -> Self {
        MoveStar::new(shape.decode(cell), nbrs.map(|x| shape.decode(x)).collect())
    }
}

fn differing_axis(a: &Coord, b: &Coord) -> Option<usize> {
    if a.dim() != b.dim() {
        return None;
    }
    let mut axis = None;
    for (i, (x, y)) in a.0.iter().zip(&b.0).enumerate() {
        match x.abs_diff(*y) {
            0 => {}
            1 if axis.is_none() => axis = Some(i),
            _ => return None,
        }
    }
    axis
}

pub fn is_balanced(mv: &MoveStar) -> bool {
    mv.is_balanced()
}

/// An ordered sequence of moves replayed from `start`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Trace {
    pub start: Position,
    pub direction: Direction,
    pub moves: Vec<MoveStar>,
}

impl Trace {
    pub fn new(start: Position, direction: Direction) -> Self {
        Trace {
            start,
            direction,
            moves: Vec::new(),
        }
    }

    pub fn shape(&self) -> &GridShape {
        self.start.shape()
    }

    pub fn len(&self) -> usize {
        self.moves.len()
    }

    pub fn is_empty(&self) -> bool {
        self.moves.is_empty()
    }

    /// The same moves in the opposite order and direction, starting from
    /// this trace's end position.
    pub fn reversed(&self) -> Result<Trace> {
        let end = verify_trace(self)?;
        Ok(Trace {
            start: end,
            direction: self.direction.reverse(),
            moves: self.moves.iter().rev().cloned().collect(),
        })
    }

    /// Appends the moves of `next`, which must start where this trace ends
    /// and run in the same direction.
    pub fn extend_with(&mut self, next: Trace) -> Result<()> {
        if next.direction != self.direction {
            return Err(Error::InvalidParameter(
                "cannot join traces of different directions".into(),
            ));
        }
        let end = verify_trace(self)?;
        if end != next.start {
            return Err(Error::InvalidParameter(
                "next trace does not start at this trace's end".into(),
            ));
        }
        self.moves.extend(next.moves);
        Ok(())
    }

    pub fn all_balanced(&self) -> bool {
        self.moves.iter().all(MoveStar::is_balanced)
    }

    pub fn to_file(&self) -> TraceFile {
        TraceFile {
            dims: self.shape().dims().to_vec(),
            direction: self.direction,
            start: self.start.to_file(),
            moves: self.moves.clone(),
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(&self.to_file()).expect("trace serializes")
    }

    pub fn from_json(s: &str) -> Result<Trace> {
        let f: TraceFile = serde_json::from_str(s)?;
        f.to_trace()
    }
}

/// JSON trace format.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TraceFile {
    pub dims: Vec<usize>,
    pub direction: Direction,
    pub start: PositionFile,
    pub moves: Vec<MoveStar>,
}

impl TraceFile {
    pub fn to_trace(&self) -> Result<Trace> {
        if self.dims != self.start.dims {
            return Err(Error::ShapeMismatch(format!(
                "trace dims {:?} vs start dims {:?}",
                self.dims, self.start.dims
            )));
        }
        let start = self.start.to_position()?;
        let moves = self
            .moves
            .iter()
            .map(|m| MoveStar::new(m.cell.clone(), m.nbrs.clone()))
            .collect();
        Ok(Trace {
            start,
            direction: self.direction,
            moves,
        })
    }
}

/// White cells with exactly `d` black neighbours.
pub fn buildup_candidates(pos: &Position) -> Vec<Coord> {
    candidates(pos, false)
}

/// Black cells with exactly `d` black neighbours.
pub fn dismantle_candidates(pos: &Position) -> Vec<Coord> {
    candidates(pos, true)
}

fn candidates(pos: &Position, black: bool) -> Vec<Coord> {
    let shape = pos.shape();
    let d = shape.dim();
    shape
        .cells()
        .filter(|&c| pos.is_black(c) == black && pos.black_degree(c) == d)
        .map(|c| shape.decode(c))
        .collect()
}

/// The move that `direction` would make at `cell` in `pos`, if legal.
pub fn move_at(pos: &Position, cell: CellId, direction: Direction) -> Result<MoveStar, MoveError> {
    let shape = pos.shape();
    let want_black = direction == Direction::Dismantling;
    if pos.is_black(cell) != want_black {
        return Err(MoveError::WrongColour {
            cell: shape.decode(cell).to_string(),
        });
    }
    let degree = pos.black_degree(cell);
    if degree != shape.dim() {
        return Err(MoveError::WrongDegree {
            cell: shape.decode(cell).to_string(),
            degree,
            expected: shape.dim(),
        });
    }
    Ok(MoveStar::from_ids(
        shape,
        cell,
        shape.neighbors(cell).filter(|&x| pos.is_black(x)),
    ))
}

/// Applies a recorded move in place after checking it is legal and that its
/// neighbour record matches the current black neighbourhood.
pub fn apply_in_place(
    pos: &mut Position,
    mv: &MoveStar,
    direction: Direction,
) -> Result<(), MoveError> {
    let shape = pos.shape().clone();
    let cell = shape
        .encode(&mv.cell)
        .map_err(|e| MoveError::BadCoordinate(e.to_string()))?;
    let actual = move_at(pos, cell, direction)?;
    if actual.nbrs != mv.nbrs {
        return Err(MoveError::NeighbourMismatch {
            cell: mv.cell.to_string(),
        });
    }
    match direction {
        Direction::BuildUp => pos.set_black(cell),
        Direction::Dismantling => pos.set_white(cell),
    };
    Ok(())
}

pub fn apply(pos: &Position, mv: &MoveStar, direction: Direction) -> Result<Position> {
    let mut next = pos.clone();
    apply_in_place(&mut next, mv, direction)?;
    Ok(next)
}

/// Replays a trace and returns its end position. The first illegal step is
/// reported with its index.
pub fn verify_trace(trace: &Trace) -> Result<Position> {
    verify_trace_with(trace, |_, _| {})
}

/// Like [`verify_trace`], calling `inspect(index, position_after_move)`
/// after every move.
pub fn verify_trace_with<F: FnMut(usize, &Position)>(
    trace: &Trace,
    mut inspect: F,
) -> Result<Position> {
    let mut pos = trace.start.clone();
    for (index, mv) in trace.moves.iter().enumerate() {
        apply_in_place(&mut pos, mv, trace.direction)
            .map_err(|source| Error::TraceStep { index, source })?;
        inspect(index, &pos);
    }
    Ok(pos)
}

/// The two traces consist of the same multiset of moves.
pub fn traces_equivalent(a: &Trace, b: &Trace) -> bool {
    if a.shape() != b.shape() || a.moves.len() != b.moves.len() {
        return false;
    }
    let mut x = a.moves.clone();
    let mut y = b.moves.clone();
    x.sort();
    y.sort();
    x == y
}

/// Greedy build-up: adds white cells of degree exactly `d` until none is
/// left. Cells are scanned in id order and re-queued when their degree
/// reaches `d`.
pub fn greedy_complete(pos: &Position) -> (Position, Trace) {
    let mut cur = pos.clone();
    let mut trace = Trace::new(pos.clone(), Direction::BuildUp);
    greedy_fill(&mut cur, Some(&mut trace.moves));
    (cur, trace)
}

/// The maximal position reached by greedy build-up, without a trace.
pub fn greedy_closure(pos: &Position) -> Position {
    let mut cur = pos.clone();
    greedy_fill(&mut cur, None);
    cur
}

fn greedy_fill(pos: &mut Position, mut record: Option<&mut Vec<MoveStar>>) {
    let shape = pos.shape().clone();
    let d = shape.dim();
    let mut queue: VecDeque<CellId> = shape
        .cells()
        .filter(|&c| !pos.is_black(c) && pos.black_degree(c) == d)
        .collect();
    while let Some(c) = queue.pop_front() {
        if pos.is_black(c) || pos.black_degree(c) != d {
            continue;
        }
        if let Some(moves) = record.as_deref_mut() {
            moves.push(move_at(pos, c, Direction::BuildUp).expect("checked above"));
        }
        pos.set_black(c);
        for nb in shape.neighbors(c) {
            if !pos.is_black(nb) && pos.black_degree(nb) == d {
                queue.push_back(nb);
            }
        }
    }
}

/// Decides whether a base position is a solution: greedy build-up reaches
/// the full box.
pub fn is_solution(pos: &Position) -> Result<bool> {
    if !pos.is_base_position() {
        return Err(Error::NotBasePosition(format!(
            "{} black cells (need {}), independent: {}",
            pos.black_count(),
            crate::position::min_black(pos.shape()),
            pos.is_independent()
        )));
    }
    Ok(greedy_closure(pos).is_full())
}

/// Greedy build-up that picks uniformly among the currently available
/// moves at every step, driven by a seeded generator.
pub fn random_order_buildup(pos: &Position, seed: u64) -> (Position, Trace) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let shape = pos.shape().clone();
    let d = shape.dim();
    let mut cur = pos.clone();
    let mut trace = Trace::new(pos.clone(), Direction::BuildUp);
    let mut pool: Vec<CellId> = shape
        .cells()
        .filter(|&c| !cur.is_black(c) && cur.black_degree(c) == d)
        .collect();
    pool.shuffle(&mut rng);
    let mut in_pool = vec![false; shape.cell_count()];
    for c in &pool {
        in_pool[c.0] = true;
    }
    while !pool.is_empty() {
        let i = rng.gen_range(0..pool.len());
        let c = pool.swap_remove(i);
        in_pool[c.0] = false;
        if cur.is_black(c) || cur.black_degree(c) != d {
            continue;
        }
        let mv = move_at(&cur, c, Direction::BuildUp).expect("checked above");
        cur.set_black(c);
        trace.moves.push(mv);
        for nb in shape.neighbors(c) {
            if !cur.is_black(nb) {
                let ok = cur.black_degree(nb) == d;
                if ok && !in_pool[nb.0] {
                    in_pool[nb.0] = true;
                    pool.push(nb);
                }
            }
        }
    }
    (cur, trace)
}

/// Removes black cells of degree exactly `d` in a seeded random order until
/// none is left.
pub fn random_dismantling(pos: &Position, seed: u64) -> (Position, Trace) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let shape = pos.shape().clone();
    let d = shape.dim();
    let mut cur = pos.clone();
    let mut trace = Trace::new(pos.clone(), Direction::Dismantling);
    loop {
        let cands: Vec<CellId> = cur
            .black_cells()
            .filter(|&c| cur.black_degree(c) == d)
            .collect();
        let Some(&c) = cands.choose(&mut rng) else {
            break;
        };
        let mv = move_at(&cur, c, Direction::Dismantling).expect("candidate is legal");
        cur.set_white(c);
        trace.moves.push(mv);
    }
    (cur, trace)
}
