//! Explicit solutions of `[n]^3` and their dismantling traces.
//!
//! Most objects live on the planes `i + j - k = const`; `plane_value`
//! gives that constant for a cell. The cyclic base is the union of the
//! planes with value `1` and `n + 1`.

use std::collections::BTreeSet;

use crate::engine::{apply_in_place, greedy_complete, move_at, Direction, MoveStar, Trace};
use crate::error::{Error, MoveError, Result};
use crate::grid::{Coord, GridShape};
use crate::position::Position;
use crate::symmetry::{isometry_group, Isometry};

pub fn triangular(m: u64) -> u64 {
    m * (m + 1) / 2
}

pub fn tetrahedral(m: u64) -> u64 {
    m * (m + 1) * (m + 2) / 6
}

/// `H_n + 4 H_{n-1} + H_{n-2} = n^3`.
pub fn counting_identity(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    tetrahedral(n) + 4 * tetrahedral(n - 1) + tetrahedral(n - 2) == n * n * n
}

pub fn plane_value(c: &Coord) -> i64 {
    c[0] as i64 + c[1] as i64 - c[2] as i64
}

fn cube3(n: usize) -> Result<GridShape> {
    if n == 1 {
        GridShape::new(&[1, 1, 1])
    } else {
        GridShape::cube(n, 3)
    }
}

fn coords_where(n: usize, keep: impl Fn(&Coord) -> bool) -> Vec<Coord> {
    let mut out = Vec::new();
    for i in 1..=n {
        for j in 1..=n {
            for k in 1..=n {
                let c = Coord(vec![i, j, k]);
                if keep(&c) {
                    out.push(c);
                }
            }
        }
    }
    out
}

fn position_of(n: usize, coords: &[Coord]) -> Result<Position> {
    Position::from_coords(&cube3(n)?, coords)
}

/// `{(i,j,k) : i + j - k ≡ 1 (mod n)}`.
pub fn cyclic_base(n: usize) -> Result<Position> {
    cc(n, 0)
}

/// The cyclic base with its levels shifted by `s`:
/// `{(i,j,k) : i + j - k ≡ 1 - s (mod n)}`.
pub fn cc(n: usize, s: usize) -> Result<Position> {
    if n == 0 || s >= n {
        return Err(Error::InvalidParameter(format!("cc needs 0 <= s < n, got n={n}, s={s}")));
    }
    let target = (1 - s as i64).rem_euclid(n as i64);
    position_of(n, &coords_where(n, |c| plane_value(c).rem_euclid(n as i64) == target))
}

/// Level `k` of the cyclic base moved to level `perm[k - 1]`.
pub fn level_permuted_cyclic(n: usize, perm: &[usize]) -> Result<Position> {
    let mut seen = vec![false; n + 1];
    if perm.len() != n
        || perm
            .iter()
            .any(|&p| p == 0 || p > n || std::mem::replace(&mut seen[p], true))
    {
        return Err(Error::InvalidParameter(format!("{perm:?} is not a permutation of [1, {n}]")));
    }
    let base = cyclic_base(n)?;
    let moved: Vec<Coord> = base
        .black_coords()
        .into_iter()
        .map(|c| Coord(vec![c[0], c[1], perm[c[2] - 1]]))
        .collect();
    position_of(n, &moved)
}

/// True when every black cell has the same checkerboard colour.
pub fn checkerboard_monochromatic(pos: &Position) -> bool {
    let parities: BTreeSet<usize> = pos
        .black_coords()
        .iter()
        .map(|c| c.0.iter().sum::<usize>() % 2)
        .collect();
    parities.len() <= 1
}

// ---------------------------------------------------------------------------
// boards

/// Plane sections of `[n]^3` used by the constructions. `Nho(m)` is the
/// nested heap of `[m]^3` embedded in the corner box holding `UTB(m)`;
/// `HbCopy { a, b }` is `HB_{a+b-1}^b` in the corner box at the origin.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Board {
    Utb(usize),
    Ltb(usize),
    Ho(usize),
    Nho(usize),
    Hb(usize),
    HbCopy { a: usize, b: usize },
    Dnh(usize),
}

fn nho_local(m: usize) -> Vec<Coord> {
    if m == 0 {
        return Vec::new();
    }
    coords_where(m, |c| {
        let v = plane_value(c);
        if v <= 1 {
            return true;
        }
        // layer TB(m - 2t) sits on the plane 1 + t
        let t = (v - 1) as usize;
        m > 2 * t && c[0] > t && c[1] > t && c[2] + t <= m
    })
}

/// Exact cell set of a board in `[n]^3`, sorted.
pub fn triangular_set(n: usize, board: Board) -> Result<Vec<Coord>> {
    let bad = |what: &str| Err(Error::InvalidParameter(format!("{what} out of range for n={n}")));
    let ni = n as i64;
    let mut out = match board {
        Board::Utb(m) => {
            if m == 0 || m > n {
                return bad("UTB order");
            }
            coords_where(n, |c| plane_value(c) == m as i64 + 1 - ni)
        }
        Board::Ltb(m) => {
            if m == 0 || m >= n {
                return bad("LTB order");
            }
            coords_where(n, |c| plane_value(c) == 2 * ni - m as i64)
        }
        Board::Ho(m) => {
            if m == 0 || m > n {
                return bad("HO order");
            }
            coords_where(n, |c| plane_value(c) <= m as i64 + 1 - ni)
        }
        Board::Nho(m) => {
            if m == 0 || m > n {
                return bad("NHO order");
            }
            nho_local(m)
                .into_iter()
                .map(|c| Coord(vec![c[0], c[1], c[2] + n - m]))
                .collect()
        }
        Board::Hb(s) => {
            if s == 0 || s >= n {
                return bad("HB size");
            }
            coords_where(n, |c| plane_value(c) == ni + 1 - s as i64)
        }
        Board::HbCopy { a, b } => {
            if a == 0 || b == 0 || a + b - 1 > n {
                return bad("HB copy");
            }
            coords_where(a + b - 1, |c| plane_value(c) == a as i64)
        }
        Board::Dnh(s) => {
            if s == 0 || s >= n {
                return bad("DNH size");
            }
            let hb = position_of(n, &triangular_set(n, Board::Hb(s))?)?;
            greedy_complete(&hb).0.black_coords()
        }
    };
    out.sort();
    Ok(out)
}

// ---------------------------------------------------------------------------
// placements

/// A copy of `[size]^3` inside a bigger cube: apply `iso` within the small
/// cube, then add `offset`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Placement {
    pub size: usize,
    pub iso: Isometry,
    pub offset: Vec<usize>,
}

impl Placement {
    pub fn identity(size: usize) -> Self {
        Placement {
            size,
            iso: Isometry::identity(3),
            offset: vec![0; 3],
        }
    }

    pub fn map(&self, c: &Coord) -> Coord {
        let img = self.iso.apply_coord(&[self.size; 3], c);
        Coord(img.0.iter().zip(&self.offset).map(|(a, b)| a + b).collect())
    }

    pub fn map_all(&self, cs: &[Coord]) -> Vec<Coord> {
        let mut out: Vec<Coord> = cs.iter().map(|c| self.map(c)).collect();
        out.sort();
        out
    }

    pub fn map_move(&self, mv: &MoveStar) -> MoveStar {
        MoveStar::new(self.map(&mv.cell), mv.nbrs.iter().map(|c| self.map(c)).collect())
    }
}

/// Placement of `[n-1]^3` in `[n]^3` carrying the local `UTB(n-1)` onto
/// `LTB(n-1)` and keeping the local nested heap clear of `NHO(n)`. Found by
/// search over the isometries and unit offsets.
pub fn rotated_nho_placement(n: usize) -> Result<Placement> {
    if n < 2 {
        return Err(Error::InvalidParameter("needs n >= 2".into()));
    }
    let m = n - 1;
    let local_utb = coords_where(m, |c| plane_value(c) == 1);
    let local_nho = nho_local(m);
    let ltb = triangular_set(n, Board::Ltb(m))?;
    let nho: BTreeSet<Coord> = triangular_set(n, Board::Nho(n))?.into_iter().collect();
    let shape = cube3(m)?;
    for iso in isometry_group(&shape) {
        for mask in 0..8usize {
            let p = Placement {
                size: m,
                iso: iso.clone(),
                offset: (0..3).map(|a| mask >> a & 1).collect(),
            };
            if p.map_all(&local_utb) == ltb && p.map_all(&local_nho).iter().all(|c| !nho.contains(c)) {
                return Ok(p);
            }
        }
    }
    Err(Error::InvalidParameter(format!("no placement of NHO({m}) found in [{n}]^3")))
}

/// `NHO(n)` together with the rotated `NHO(n-1)`: the end of
/// [`theorem_cyc_trace`].
pub fn nested_pair(n: usize) -> Result<Position> {
    let mut cells = triangular_set(n, Board::Nho(n))?;
    if n >= 2 {
        let p = rotated_nho_placement(n)?;
        cells.extend(p.map_all(&nho_local(n - 1)));
    }
    position_of(n, &cells)
}

// ---------------------------------------------------------------------------
// peelings

/// Triangle in a plane through `corner`, spanned by the two signed in-plane
/// directions. A peeling of size `m` removes its diagonals of lengths
/// `1, 2, ..., m` in that order, `m (m + 1) / 2` cells in total.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Peeling {
    pub corner: Coord,
    pub dirs: [(usize, i64); 2],
    pub size: usize,
}

impl Peeling {
    pub fn new(corner: Coord, dirs: [(usize, i64); 2], size: usize) -> Self {
        Peeling { corner, dirs, size }
    }

    /// Cells in removal order, `None` if the triangle leaves the box.
    pub fn cells(&self, n: usize) -> Option<Vec<Coord>> {
        let mut out = Vec::with_capacity(self.size * (self.size + 1) / 2);
        for t in 0..self.size {
            for u in 0..=t {
                let v = t - u;
                let mut c: Vec<i64> = self.corner.0.iter().map(|&x| x as i64).collect();
                c[self.dirs[0].0] += self.dirs[0].1 * u as i64;
                c[self.dirs[1].0] += self.dirs[1].1 * v as i64;
                if c.iter().any(|&x| x < 1 || x > n as i64) {
                    return None;
                }
                out.push(Coord(c.into_iter().map(|x| x as usize).collect()));
            }
        }
        Some(out)
    }

    pub fn removed_count(&self) -> usize {
        self.size * (self.size + 1) / 2
    }
}

/// Removes `cells` one by one from `pos` (dismantling), recording moves.
/// Moves are numbered from `first_index` in errors.
fn remove_in_order(pos: &mut Position, cells: &[Coord], first_index: usize) -> Result<Vec<MoveStar>> {
    let shape = pos.shape().clone();
    let mut moves = Vec::with_capacity(cells.len());
    for (k, c) in cells.iter().enumerate() {
        let step = |source: MoveError| Error::TraceStep {
            index: first_index + k,
            source,
        };
        let id = shape
            .encode(c)
            .map_err(|_| step(MoveError::BadCoordinate(c.to_string())))?;
        let mv = move_at(pos, id, Direction::Dismantling).map_err(step)?;
        apply_in_place(pos, &mv, Direction::Dismantling).map_err(step)?;
        moves.push(mv);
    }
    Ok(moves)
}

fn trace_from(start: &Position, moves: Vec<MoveStar>, direction: Direction) -> Trace {
    let mut t = Trace::new(start.clone(), direction);
    t.moves = moves;
    t
}

/// Dismantling trace of one peeling applied to `context`.
pub fn diagonal_peeling_trace(context: &Position, peeling: &Peeling) -> Result<Trace> {
    let n = context.shape().dims()[0];
    let cells = peeling
        .cells(n)
        .ok_or_else(|| Error::InvalidParameter(format!("peeling {peeling:?} leaves the box")))?;
    let mut pos = context.clone();
    let moves = remove_in_order(&mut pos, &cells, 0)?;
    assert_eq!(moves.len(), peeling.removed_count());
    Ok(trace_from(context, moves, Direction::Dismantling))
}

/// `depth` copies of `peeling` stacked along `(axis, sign)`, removed layer
/// by layer.
pub fn staircase_trace(context: &Position, peeling: &Peeling, depth: usize, along: (usize, i64)) -> Result<Trace> {
    let n = context.shape().dims()[0];
    let mut cells = Vec::new();
    for r in 0..depth {
        let mut corner: Vec<i64> = peeling.corner.0.iter().map(|&x| x as i64).collect();
        corner[along.0] += along.1 * r as i64;
        if corner.iter().any(|&x| x < 1 || x > n as i64) {
            return Err(Error::InvalidParameter("staircase leaves the box".into()));
        }
        let layer = Peeling::new(Coord(corner.into_iter().map(|x| x as usize).collect()), peeling.dirs, peeling.size);
        cells.extend(
            layer
                .cells(n)
                .ok_or_else(|| Error::InvalidParameter("staircase leaves the box".into()))?,
        );
    }
    let mut pos = context.clone();
    let moves = remove_in_order(&mut pos, &cells, 0)?;
    assert_eq!(moves.len(), depth * peeling.removed_count());
    Ok(trace_from(context, moves, Direction::Dismantling))
}

/// The corner peelings of the hull-by-hull schedule, in order.
pub fn theorem_cyc_schedule(n: usize) -> Vec<Peeling> {
    let mut out = Vec::new();
    let (mut a, mut b) = (0usize, 0usize);
    let c = |x: usize, y: usize, z: usize| Coord(vec![x, y, z]);
    loop {
        let mut progressed = false;
        if a + 1 <= n / 2 {
            let m = n - 1 - 2 * a;
            out.push(Peeling::new(c(1 + a, n - a, 1 + a), [(1, -1), (2, 1)], m));
            out.push(Peeling::new(c(n - a, 1 + a, 1 + a), [(0, -1), (2, 1)], m));
            out.push(Peeling::new(c(n - a, n - a, n - a), [(0, -1), (1, -1)], m));
            a += 1;
            progressed = true;
        }
        if b + 2 <= n.div_ceil(2) {
            let m = n - 2 - 2 * b;
            out.push(Peeling::new(c(2 + b, 2 + b, 1 + b), [(0, 1), (1, 1)], m));
            out.push(Peeling::new(c(n - b, 2 + b, n - 1 - b), [(1, 1), (2, -1)], m));
            out.push(Peeling::new(c(2 + b, n - b, n - 1 - b), [(0, 1), (2, -1)], m));
            b += 1;
            progressed = true;
        }
        if !progressed {
            return out;
        }
    }
}

/// Dismantles `[n]^3` to `NHO(n)` plus the rotated `NHO(n-1)` by
/// alternating corner peelings; `(n-1) n (n+1) / 2` moves.
pub fn theorem_cyc_trace(n: usize) -> Result<Trace> {
    if n < 2 {
        return Err(Error::InvalidParameter("needs n >= 2".into()));
    }
    let full = Position::full(&cube3(n)?);
    let mut pos = full.clone();
    let mut moves = Vec::new();
    for peeling in theorem_cyc_schedule(n) {
        let cells = peeling.cells(n).expect("schedule stays in the cube");
        moves.extend(remove_in_order(&mut pos, &cells, moves.len())?);
    }
    let trace = trace_from(&full, moves, Direction::Dismantling);
    debug_assert_eq!(trace.len(), (n - 1) * n * (n + 1) / 2);
    debug_assert_eq!(pos, nested_pair(n)?);
    Ok(trace)
}

/// Layers of the local nested heap of `[m]^3`, outermost first: the
/// stacked triangles from the top down, then the heap from its apex.
fn nho_layers_outside_in(m: usize) -> Vec<Vec<Coord>> {
    let cells = nho_local(m);
    let mut layers = Vec::new();
    let top = cells.iter().map(plane_value).max().unwrap_or(1);
    let bottom = cells.iter().map(plane_value).min().unwrap_or(1);
    for v in (2..=top).rev().chain(bottom..1) {
        layers.push(cells.iter().filter(|c| plane_value(c) == v).cloned().collect());
    }
    layers
}

/// Dismantles `NHO(n)` ∪ rotated `NHO(n-1)` down to the cyclic base by
/// peeling nested layers.
pub fn nested_layer_trace(n: usize) -> Result<Trace> {
    let start = nested_pair(n)?;
    let mut pos = start.clone();
    let mut order: Vec<Coord> = nho_layers_outside_in(n)
        .into_iter()
        .flatten()
        .collect();
    if n >= 2 {
        let p = rotated_nho_placement(n)?;
        order.extend(nho_layers_outside_in(n - 1).into_iter().flatten().map(|c| p.map(&c)));
    }
    let moves = remove_in_order(&mut pos, &order, 0)?;
    debug_assert_eq!(pos, cyclic_base(n)?);
    Ok(trace_from(&start, moves, Direction::Dismantling))
}

/// Full cube to cyclic base: the corner peelings followed by the nested
/// layers.
pub fn cyclic_base_trace(n: usize) -> Result<Trace> {
    let mut t = theorem_cyc_trace(n)?;
    t.extend_with(nested_layer_trace(n)?)?;
    Ok(t)
}

// ---------------------------------------------------------------------------
// shifted cyclic positions

/// Build-up moves of the greedy closure of `cells` taken alone in `[n]^3`.
fn closure_moves(n: usize, cells: &[Coord]) -> Result<Vec<MoveStar>> {
    Ok(greedy_complete(&position_of(n, cells)?).1.moves)
}

/// Finds the isometry of `[size]^3` that lays `local` onto `target`
/// (already translated to the box origin).
fn solve_embedding(size: usize, offset: Vec<usize>, local: &[Coord], target: &[Coord]) -> Option<Placement> {
    let shape = cube3(size).ok()?;
    isometry_group(&shape).into_iter().find_map(|iso| {
        let p = Placement {
            size,
            iso,
            offset: offset.clone(),
        };
        (p.map_all(local) == target).then_some(p)
    })
}

/// The stages of the dismantling of `[n]^3` to `cc(n, s)`.
#[derive(Debug, Clone)]
pub struct CcStages {
    /// Full cube to `F`: corner cubes plus the doubly nested hexagon.
    pub to_f: Trace,
    /// `F` to `M` by the embedded corner-peeling schedules.
    pub to_m: Trace,
    /// `M` to `cc(n, s)` by peeling nested layers.
    pub to_cc: Trace,
    pub placements: Vec<Placement>,
}

impl CcStages {
    pub fn combined(&self) -> Result<Trace> {
        let mut t = self.to_f.clone();
        t.extend_with(self.to_m.clone())?;
        t.extend_with(self.to_cc.clone())?;
        Ok(t)
    }
}

/// Staged dismantling of `[n]^3` to the shifted cyclic position. The three
/// pieces of `cc(n, s)` (two triangles and a hexagonal board) are grown to
/// their closures `M`; the two corner cubes of sides `n - s` and `s - 1`
/// meet `M` in copies of the pair left by [`theorem_cyc_trace`], so those
/// traces embed; the first stage is the reversed greedy build-up from `F`.
pub fn cc_stages(n: usize, s: usize) -> Result<CcStages> {
    if s == 0 || s >= n {
        return Err(Error::InvalidParameter(format!("cc stages need 1 <= s < n, got n={n}, s={s}")));
    }
    let shape = cube3(n)?;
    let target = cc(n, s)?;
    let pieces = [
        triangular_set(n, Board::Utb(n - s))?,
        triangular_set(n, Board::Hb(s))?,
        if s >= 2 {
            triangular_set(n, Board::Ltb(s - 1))?
        } else {
            Vec::new()
        },
    ];
    let mut build = Vec::new();
    for piece in &pieces {
        build.extend(closure_moves(n, piece)?);
    }
    let mut m_pos = target.clone();
    for (k, mv) in build.iter().enumerate() {
        apply_in_place(&mut m_pos, mv, Direction::BuildUp)
            .map_err(|source| Error::TraceStep { index: k, source })?;
    }
    let to_cc = trace_from(&target, build, Direction::BuildUp).reversed()?;

    let m_cells: BTreeSet<Coord> = m_pos.black_coords().into_iter().collect();
    let boxes = [(n - s, vec![0, 0, s]), (s - 1, vec![n - s + 1, n - s + 1, 0])];
    let mut placements = Vec::new();
    let mut f_pos = m_pos.clone();
    for (size, offset) in boxes.iter().cloned() {
        if size < 2 {
            continue;
        }
        let local = nested_pair(size)?.black_coords();
        let inside: Vec<Coord> = m_cells
            .iter()
            .filter(|c| (0..3).all(|a| c[a] > offset[a] && c[a] <= offset[a] + size))
            .cloned()
            .collect();
        let p = solve_embedding(size, offset, &local, &inside).ok_or_else(|| {
            Error::InvalidParameter(format!("no embedding of the corner pair of order {size}"))
        })?;
        for c in coords_where(size, |_| true) {
            f_pos.set_black(shape.encode(&p.map(&c))?);
        }
        placements.push(p);
    }
    let mut pos = f_pos.clone();
    let mut moves = Vec::new();
    for p in &placements {
        for mv in theorem_cyc_trace(p.size)?.moves {
            let g = p.map_move(&mv);
            apply_in_place(&mut pos, &g, Direction::Dismantling).map_err(|source| Error::TraceStep {
                index: moves.len(),
                source,
            })?;
            moves.push(g);
        }
    }
    assert_eq!(pos, m_pos, "embedded schedules end at M");
    let to_m = trace_from(&f_pos, moves, Direction::Dismantling);

    let (top, up) = greedy_complete(&f_pos);
    if !top.is_full() {
        return Err(Error::InvalidParameter(format!("F does not build up to [{n}]^3")));
    }
    let to_f = up.reversed()?;
    Ok(CcStages {
        to_f,
        to_m,
        to_cc,
        placements,
    })
}

/// Full cube to `cc(n, s)`; `s = 0` is the cyclic base.
pub fn cc_solution_trace(n: usize, s: usize) -> Result<Trace> {
    if s == 0 {
        return cyclic_base_trace(n);
    }
    cc_stages(n, s)?.combined()
}

// ---------------------------------------------------------------------------
// corridor

fn corridor_pattern(t: u32) -> Vec<(usize, usize)> {
    // cells of a (2^t - 1)-square, 1-based
    if t == 1 {
        return vec![(1, 1)];
    }
    let half = (1usize << (t - 1)) - 1;
    let inner = corridor_pattern(t - 1);
    let mut out = vec![(half + 1, half + 1)];
    for (du, dv) in [(0, 0), (0, half + 1), (half + 1, 0), (half + 1, half + 1)] {
        out.extend(inner.iter().map(|&(u, v)| (u + du, v + dv)));
    }
    out.sort();
    out
}

/// Solution of `[2^t]^3` whose black cells lie in the three facial
/// sections through `(1,1,1)`.
pub fn corridor(t: u32) -> Result<Position> {
    if t == 0 || t > 10 {
        return Err(Error::InvalidParameter("corridor needs 1 <= t <= 10".into()));
    }
    let n = 1usize << t;
    let mut cells = vec![Coord(vec![1, 1, 1])];
    for (u, v) in corridor_pattern(t) {
        cells.push(Coord(vec![1, 1 + u, 1 + v]));
        cells.push(Coord(vec![1 + u, 1, 1 + v]));
        cells.push(Coord(vec![1 + u, 1 + v, 1]));
    }
    position_of(n, &cells)
}

// ---------------------------------------------------------------------------
// fixtures

/// Imperfect solution of `[4]^3` with four black cells in every section.
pub fn fig3_fixture() -> Position {
    let sections: [[(usize, usize); 4]; 4] = [
        [(1, 2), (2, 1), (2, 4), (4, 3)],
        [(1, 4), (2, 2), (3, 3), (4, 4)],
        [(1, 1), (2, 3), (3, 2), (4, 1)],
        [(1, 2), (3, 1), (3, 4), (4, 3)],
    ];
    let cells: Vec<Coord> = sections
        .iter()
        .enumerate()
        .flat_map(|(a, sec)| sec.iter().map(move |&(r, c)| Coord(vec![a + 1, r, c])))
        .collect();
    position_of(4, &cells).expect("fixture fits [4]^3")
}

/// One solution each of `C(2,2,5)`, `C(2,3,6)` and `C(3,3,4)`.
pub fn cuboid_fixtures() -> Vec<Position> {
    let table: [(&[usize], &[[usize; 3]]); 3] = [
        (&[2, 2, 5], &CUBOID_225),
        (&[2, 3, 6], &CUBOID_236),
        (&[3, 3, 4], &CUBOID_334),
    ];
    table
        .iter()
        .map(|(dims, cells)| {
            let shape = GridShape::new(dims).expect("valid cuboid");
            let coords: Vec<Coord> = cells.iter().map(|c| Coord(c.to_vec())).collect();
            Position::from_coords(&shape, &coords).expect("fixture fits its cuboid")
        })
        .collect()
}

// canonical class representatives from the exhaustive search
#[rustfmt::skip]
const CUBOID_225: [[usize; 3]; 8] = [
    [1, 1, 1], [1, 1, 3], [1, 1, 5], [1, 2, 2], [2, 1, 4], [2, 2, 1], [2, 2, 3], [2, 2, 5],
];
#[rustfmt::skip]
const CUBOID_236: [[usize; 3]; 12] = [
    [1, 1, 1], [1, 1, 3], [1, 1, 5], [1, 2, 4], [1, 2, 6], [1, 3, 1],
    [1, 3, 3], [2, 1, 6], [2, 2, 1], [2, 3, 2], [2, 3, 4], [2, 3, 6],
];
#[rustfmt::skip]
const CUBOID_334: [[usize; 3]; 11] = [
    [1, 1, 1], [1, 1, 3], [1, 2, 2], [1, 2, 4], [1, 3, 1], [2, 1, 4],
    [2, 3, 2], [3, 1, 3], [3, 2, 2], [3, 3, 1], [3, 3, 4],
];

#[cfg(test)]
mod tests {
    use super::*;
    use crate::engine::{is_solution, verify_trace};
    use crate::symmetry::is_isometric;

    fn brute_plane(n: usize, v: i64) -> usize {
        let mut count = 0;
        for i in 1..=n as i64 {
            for j in 1..=n as i64 {
                let k = i + j - v;
                if (1..=n as i64).contains(&k) {
                    count += 1;
                }
            }
        }
        count
    }

    /// Rounds of "add every cell with exactly three neighbours" from
    /// `HO(n)`.
    fn nho_by_rounds(n: usize) -> Position {
        let mut pos = position_of(n, &triangular_set(n, Board::Ho(n)).unwrap()).unwrap();
        loop {
            let fresh: Vec<_> = pos
                .shape()
                .cells()
                .filter(|&c| !pos.is_black(c) && pos.black_degree(c) == 3)
                .collect();
            if fresh.is_empty() {
                return pos;
            }
            for c in fresh {
                pos.set_black(c);
            }
        }
    }

    #[test]
    fn counting_identity_holds() {
        assert!((2..=100).all(counting_identity));
        for n in 2..=20u64 {
            let lhs: u64 = (1..=n).map(triangular).sum();
            assert_eq!(lhs, tetrahedral(n));
        }
    }

    #[test]
    fn board_sizes() {
        for n in 2..=8 {
            for m in 1..=n {
                assert_eq!(triangular_set(n, Board::Utb(m)).unwrap().len(), brute_plane(n, m as i64 + 1 - n as i64));
                assert_eq!(triangular_set(n, Board::Utb(m)).unwrap().len() as u64, triangular(m as u64));
                assert_eq!(triangular_set(n, Board::Ho(m)).unwrap().len() as u64, tetrahedral(m as u64));
            }
            for m in 1..n {
                assert_eq!(triangular_set(n, Board::Ltb(m)).unwrap().len() as u64, triangular(m as u64));
            }
        }
        // the hexagonal boards of [3]^3
        let hb: Vec<usize> = (1..3).map(|s| triangular_set(3, Board::Hb(s)).unwrap().len()).collect();
        assert_eq!(hb, [6, 7]);
        assert_eq!(triangular_set(3, Board::HbCopy { a: 2, b: 2 }).unwrap().len(), 7);
        assert_eq!(triangular_set(3, Board::HbCopy { a: 2, b: 1 }).unwrap().len(), 3);
        assert_eq!(triangular_set(3, Board::HbCopy { a: 1, b: 1 }).unwrap().len(), 1);
        assert!(triangular_set(3, Board::Ltb(3)).is_err());
    }

    #[test]
    fn upper_triangles_stack() {
        for n in 2..=7 {
            for m in 1..n {
                let next = position_of(n, &triangular_set(n, Board::Utb(m + 1)).unwrap()).unwrap();
                let g = next.shape().clone();
                for c in triangular_set(n, Board::Utb(m)).unwrap() {
                    assert_eq!(next.black_degree(g.encode(&c).unwrap()), 3, "n={n} m={m} {c}");
                }
                assert!(position_of(n, &triangular_set(n, Board::Utb(m)).unwrap()).unwrap().is_independent());
            }
        }
    }

    #[test]
    fn nested_heap_three_ways() {
        for n in 1..=8 {
            let nho = position_of(n, &triangular_set(n, Board::Nho(n)).unwrap()).unwrap();
            let mut expected = tetrahedral(n as u64);
            let mut m = n as i64 - 2;
            while m >= 1 {
                expected += triangular(m as u64);
                m -= 2;
            }
            assert_eq!(nho.black_count() as u64, expected, "n={n}");
            assert_eq!(nho, nho_by_rounds(n), "n={n}");
            let utb = position_of(n, &triangular_set(n, Board::Utb(n)).unwrap()).unwrap();
            assert_eq!(greedy_complete(&utb).0, nho, "n={n}");
        }
    }

    #[test]
    fn nested_pair_size() {
        for n in 2..=9u64 {
            let p = nested_pair(n as usize).unwrap();
            assert_eq!(
                p.black_count() as u64,
                tetrahedral(n) + tetrahedral(n - 1) + tetrahedral(n - 2)
            );
            assert!(cyclic_base(n as usize).unwrap().is_subset(&p));
        }
    }

    #[test]
    fn rotated_placement_is_the_half_turn() {
        for n in 2..=7 {
            let p = rotated_nho_placement(n).unwrap();
            for c in coords_where(n - 1, |_| true) {
                assert_eq!(p.map(&c), Coord(vec![n + 1 - c[0], n + 1 - c[1], n - c[2]]));
            }
        }
    }

    #[test]
    fn cyclic_and_shifted_are_solutions() {
        for n in 1..=8 {
            assert!(is_solution(&cyclic_base(n).unwrap()).unwrap(), "n={n}");
            for s in 0..n {
                let p = cc(n, s).unwrap();
                assert_eq!(p.black_count(), n * n);
                assert!(is_solution(&p).unwrap(), "n={n} s={s}");
            }
        }
        assert!(cc(3, 3).is_err());
    }

    #[test]
    fn theorem_cyc_move_counts() {
        for n in 2..=10 {
            let t = theorem_cyc_trace(n).unwrap();
            assert_eq!(t.len(), (n - 1) * n * (n + 1) / 2);
            assert_eq!(verify_trace(&t).unwrap(), nested_pair(n).unwrap());
        }
        let sizes: Vec<usize> = theorem_cyc_schedule(5).iter().map(|p| p.size).collect();
        assert_eq!(sizes, [4, 4, 4, 3, 3, 3, 2, 2, 2, 1, 1, 1]);
    }

    #[test]
    fn cyclic_base_traces() {
        for n in 2..=8 {
            let layers = nested_layer_trace(n).unwrap();
            assert_eq!(layers.len(), (n * n * n + n) / 2 - n * n);
            assert_eq!(verify_trace(&layers).unwrap(), cyclic_base(n).unwrap());
            let full = cyclic_base_trace(n).unwrap();
            assert!(full.start.is_full());
            assert_eq!(full.len(), n * n * n - n * n);
            assert_eq!(verify_trace(&full).unwrap(), cyclic_base(n).unwrap());
        }
    }

    #[test]
    fn shifted_cyclic_traces() {
        for n in 2..=6 {
            for s in 0..n {
                let t = cc_solution_trace(n, s).unwrap();
                assert!(t.start.is_full());
                assert_eq!(verify_trace(&t).unwrap(), cc(n, s).unwrap(), "n={n} s={s}");
            }
        }
        let st = cc_stages(7, 3).unwrap();
        assert_eq!(st.placements.iter().map(|p| p.size).collect::<Vec<_>>(), [4, 2]);
        assert_eq!(st.to_cc.start.black_count(), nested_pair(7).unwrap().black_count());
    }

    #[test]
    fn doubly_nested_hexagon_fills_the_gap() {
        let nho = |m: usize| if m == 0 { 0 } else { nho_local(m).len() };
        for n in 3..=7 {
            for s in 1..n {
                let dnh = triangular_set(n, Board::Dnh(s)).unwrap();
                let hb = triangular_set(n, Board::Hb(s)).unwrap();
                assert!(hb.iter().all(|c| dnh.contains(c)));
                assert_eq!(
                    nho(n - s) + dnh.len() + nho(s - 1),
                    nested_pair(n).unwrap().black_count(),
                    "n={n} s={s}"
                );
            }
        }
    }

    #[test]
    fn staircase_and_single_peeling() {
        let n = 4;
        let full = Position::full(&cube3(n).unwrap());
        let corner = Peeling::new(Coord(vec![1, n, 1]), [(1, -1), (2, 1)], n - 1);
        let t = diagonal_peeling_trace(&full, &corner).unwrap();
        assert_eq!(t.len(), corner.removed_count());
        verify_trace(&t).unwrap();
        let st = staircase_trace(&full, &corner, 2, (0, 1)).unwrap();
        assert_eq!(st.len(), 2 * corner.removed_count());
        verify_trace(&st).unwrap();
        // a peeling from an interior cell has nothing to start on
        let inner = Peeling::new(Coord(vec![2, 2, 2]), [(0, 1), (1, 1)], 2);
        assert!(matches!(diagonal_peeling_trace(&full, &inner), Err(Error::TraceStep { index: 0, .. })));
    }

    #[test]
    fn corridors() {
        for t in 1..=3 {
            let p = corridor(t).unwrap();
            assert_eq!(p.black_count(), 1 << (2 * t));
            assert!(p.is_base_position());
            assert!(is_solution(&p).unwrap(), "t={t}");
        }
    }

    #[test]
    fn fixture_is_imperfect_solution() {
        let p = fig3_fixture();
        assert!(is_solution(&p).unwrap());
        assert!(!p.is_perfect().unwrap());
        for a in 1..=4 {
            assert_eq!(p.section_count(0, a), 4);
        }
    }

    #[test]
    fn cuboid_fixtures_solve() {
        let sizes: Vec<usize> = cuboid_fixtures().iter().map(Position::black_count).collect();
        assert_eq!(sizes, [8, 12, 11]);
        for p in cuboid_fixtures() {
            assert!(p.is_base_position());
            assert!(is_solution(&p).unwrap());
        }
    }

    #[test]
    fn monochromatic_exactly_for_even_orders() {
        for n in 2..=9 {
            assert_eq!(checkerboard_monochromatic(&cyclic_base(n).unwrap()), n % 2 == 0, "n={n}");
        }
    }

    #[test]
    fn level_permutations_of_cyclic() {
        let id: Vec<usize> = (1..=5).collect();
        assert_eq!(level_permuted_cyclic(5, &id).unwrap(), cyclic_base(5).unwrap());
        // a cyclic shift of levels is a shifted cyclic position
        let shift: Vec<usize> = (1..=5).map(|k| k % 5 + 1).collect();
        let p = level_permuted_cyclic(5, &shift).unwrap();
        assert!(is_solution(&p).unwrap());
        assert!((0..5).any(|s| is_isometric(&p, &cc(5, s).unwrap())));
        assert!(level_permuted_cyclic(3, &[1, 1, 2]).is_err());
    }
}
