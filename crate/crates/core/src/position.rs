//! Black/white colourings of a box and their structural predicates.

use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::bitset::BitSet;
use crate::error::{Error, Result};
use crate::grid::{CellId, Coord, GridShape};

/// A set of present (black) cubes in a box, with a cached table of black
/// neighbour counts for every cell.
#[derive(Clone)]
pub struct Position {
    shape: GridShape,
    black: BitSet,
    degree: Vec<u8>,
}

impl PartialEq for Position {
    fn eq(&self, other: &Self) -> bool {
        self.shape == other.shape && self.black == other.black
    }
}
impl Eq for Position {}

impl std::fmt::Debug for Position {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let cells: Vec<String> = self.black_coords().iter().map(|c| c.to_string()).collect();
        write!(f, "Position[{}]{{{}}}", self.shape, cells.join(" "))
    }
}

impl Position {
    pub fn empty(shape: &GridShape) -> Self {
        Position {
            shape: shape.clone(),
            black: BitSet::new(shape.cell_count()),
            degree: vec![0; shape.cell_count()],
        }
    }

    pub fn full(shape: &GridShape) -> Self {
        let degree = shape
            .cells()
            .map(|c| shape.neighbor_slice(c).len() as u8)
            .collect();
        Position {
            shape: shape.clone(),
            black: BitSet::full(shape.cell_count()),
            degree,
        }
    }

    pub fn from_cells<I: IntoIterator<Item = CellId>>(shape: &GridShape, cells: I) -> Self {
        let black = BitSet::from_indices(shape.cell_count(), cells.into_iter().map(|c| c.0));
        Self::from_bitset(shape, black)
    }

    pub fn from_coords<'a, I: IntoIterator<Item = &'a Coord>>(
        shape: &GridShape,
        coords: I,
    ) -> Result<Self> {
        let ids = coords
            .into_iter()
            .map(|c| shape.encode(c))
            .collect::<Result<Vec<_>>>()?;
        Ok(Self::from_cells(shape, ids))
    }

    pub fn from_bitset(shape: &GridShape, black: BitSet) -> Self {
        assert_eq!(black.len(), shape.cell_count(), "bitset length");
        let degree = recompute_degrees(shape, &black);
        Position {
            shape: shape.clone(),
            black,
            degree,
        }
    }

    pub fn shape(&self) -> &GridShape {
        &self.shape
    }

    pub fn bits(&self) -> &BitSet {
        &self.black
    }

    #[inline]
    pub fn is_black(&self, c: CellId) -> bool {
        self.black.contains(c.0)
    }

    pub fn black_count(&self) -> usize {
        self.black.count()
    }

    pub fn white_count(&self) -> usize {
        self.shape.cell_count() - self.black_count()
    }

    pub fn black_cells(&self) -> impl Iterator<Item = CellId> + '_ {
        self.black.iter().map(CellId)
    }

    pub fn black_coords(&self) -> Vec<Coord> {
        self.black_cells().map(|c| self.shape.decode(c)).collect()
    }

    pub fn is_full(&self) -> bool {
        self.black_count() == self.shape.cell_count()
    }

    pub fn is_subset(&self, other: &Position) -> bool {
        self.black.is_subset(&other.black)
    }

    /// Number of black cells among the face neighbours of `c`.
    #[inline]
    pub fn black_degree(&self, c: CellId) -> usize {
        self.degree[c.0] as usize
    }

    /// Colours `c` black. Returns false if it already was.
    pub fn set_black(&mut self, c: CellId) -> bool {
        if !self.black.insert(c.0) {
            return false;
        }
        for &nb in self.shape.neighbor_slice(c) {
            self.degree[nb as usize] += 1;
        }
        self.debug_check_around(c);
        true
    }

    /// Colours `c` white. Returns false if it already was.
    pub fn set_white(&mut self, c: CellId) -> bool {
        if !self.black.remove(c.0) {
            return false;
        }
        for &nb in self.shape.neighbor_slice(c) {
            self.degree[nb as usize] -= 1;
        }
        self.debug_check_around(c);
        true
    }

    #[inline]
    fn debug_check_around(&self, c: CellId) {
        if cfg!(debug_assertions) {
            for &nb in self.shape.neighbor_slice(c) {
                let fresh = self
                    .shape
                    .neighbor_slice(CellId(nb as usize))
                    .iter()
                    .filter(|&&x| self.black.contains(x as usize))
                    .count();
                debug_assert_eq!(fresh, self.degree[nb as usize] as usize);
            }
        }
    }

    /// True when the cached degree table equals a recomputation from scratch.
    pub fn degree_cache_consistent(&self) -> bool {
        recompute_degrees(&self.shape, &self.black) == self.degree
    }

    /// No two black cells are adjacent.
    pub fn is_independent(&self) -> bool {
        self.black_cells().all(|c| self.black_degree(c) == 0)
    }

    /// Independent with exactly [`min_black`] black cells.
    pub fn is_base_position(&self) -> bool {
        self.black_count() == min_black(&self.shape) && self.is_independent()
    }

    /// In every line the black cells form one contiguous run (possibly empty).
    pub fn is_convex(&self) -> bool {
        let shape = &self.shape;
        for axis in 0..shape.dim() {
            let stride = shape.strides()[axis];
            let len = shape.dims()[axis];
            for start in shape.cells().filter(|&c| shape.component(c, axis) == 1) {
                // 0 = before run, 1 = inside run, 2 = after run
                let mut state = 0;
                for t in 0..len {
                    let b = self.black.contains(start.0 + t * stride);
                    state = match (state, b) {
                        (0, true) => 1,
                        (1, false) => 2,
                        (2, true) => return false,
                        (s, _) => s,
                    };
                }
            }
        }
        true
    }

    /// Every coordinate-deleting projection is full. Only defined for base
    /// positions.
    pub fn is_perfect(&self) -> Result<bool> {
        if !self.is_base_position() {
            return Err(Error::NotBasePosition(format!(
                "{} black cells, independent: {}",
                self.black_count(),
                self.is_independent()
            )));
        }
        Ok((0..self.shape.dim()).all(|axis| self.projection(axis).is_full()))
    }

    /// Count of (black cell, face) pairs whose face is not shared with
    /// another black cell. Faces on the boundary of the box count.
    pub fn visible_surface(&self) -> usize {
        let two_d = 2 * self.shape.dim();
        self.black_cells()
            .map(|c| two_d - self.black_degree(c))
            .sum()
    }

    pub fn projection(&self, axis: usize) -> crate::grid::Projection {
        self.shape.project(self.black_cells(), axis)
    }

    pub fn projection_area(&self, axis: usize) -> usize {
        self.projection(axis).len()
    }

    pub fn total_projection_area(&self) -> usize {
        (0..self.shape.dim()).map(|a| self.projection_area(a)).sum()
    }

    /// Number of black cells in a facial section.
    pub fn facial_count(&self, axis: usize, value: usize) -> Result<usize> {
        if !self.shape.is_facial(axis, value)? {
            return Err(Error::NotFacial { axis, value });
        }
        Ok(self.section_count(axis, value))
    }

    /// Number of black cells in any section.
    pub fn section_count(&self, axis: usize, value: usize) -> usize {
        self.black_cells()
            .filter(|&c| self.shape.component(c, axis) == value)
            .count()
    }

    /// Whether every facial section meets the lower bound `n^(d-2)`.
    /// `None` for non-hypercube shapes, where the bound is not asserted.
    pub fn check_facial_bound(&self) -> Option<bool> {
        let bound = facial_lower_bound(&self.shape)?;
        let n = self.shape.dims()[0];
        Some((0..self.shape.dim()).all(|axis| {
            let mut values = vec![1];
            if n > 1 {
                values.push(n);
            }
            values
                .into_iter()
                .all(|v| self.section_count(axis, v) >= bound)
        }))
    }

    /// Whether every projection meets [`projection_lower_bound`]. `None` for
    /// non-hypercube shapes.
    pub fn check_projection_bound(&self) -> Option<bool> {
        let bound = projection_lower_bound(&self.shape)?;
        Some((0..self.shape.dim()).all(|a| self.projection_area(a) >= bound))
    }

    pub fn to_file(&self) -> PositionFile {
        PositionFile {
            dims: self.shape.dims().to_vec(),
            black: self.black_coords().into_iter().map(|c| c.0).collect(),
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(&self.to_file()).expect("position serializes")
    }

    pub fn from_json(s: &str) -> Result<Self> {
        let file: PositionFile = serde_json::from_str(s)?;
        file.to_position()
    }

    /// Layers of a 3-dimensional position side by side, level 1 on the left.
    /// Rows run top to bottom and columns left to right; `#` is black.
    /// Two-dimensional positions print as a single grid.
    pub fn render_ascii(&self) -> Result<String> {
        let dims = self.shape.dims();
        let (rows, cols, levels) = match *dims {
            [r, c] => (r, c, 1),
            [r, c, l] => (r, c, l),
            _ => {
                return Err(Error::InvalidParameter(format!(
                    "ascii rendering needs d = 2 or 3, got {}",
                    dims.len()
                )))
            }
        };
        let mut out = String::new();
        if levels > 1 {
            for k in 1..=levels {
                let label = format!("z={k}");
                let _ = write!(out, "{label:<width$}", width = cols + 2);
            }
            out = out.trim_end().to_string();
            out.push('\n');
        }
        for i in 1..=rows {
            let mut line = String::new();
            for k in 1..=levels {
                for j in 1..=cols {
                    let coord = if levels > 1 || dims.len() == 3 {
                        Coord(vec![i, j, k])
                    } else {
                        Coord(vec![i, j])
                    };
                    let id = self.shape.encode(&coord)?;
                    line.push(if self.is_black(id) { '#' } else { '.' });
                }
                line.push_str("  ");
            }
            out.push_str(line.trim_end());
            out.push('\n');
        }
        Ok(out)
    }
}

fn recompute_degrees(shape: &GridShape, black: &BitSet) -> Vec<u8> {
    shape
        .cells()
        .map(|c| {
            shape
                .neighbor_slice(c)
                .iter()
                .filter(|&&x| black.contains(x as usize))
                .count() as u8
        })
        .collect()
}

/// JSON position format: `{"dims":[...], "black":[[x1,...,xd], ...]}`,
/// coordinates 1-based.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PositionFile {
    pub dims: Vec<usize>,
    pub black: Vec<Vec<usize>>,
}

impl PositionFile {
    pub fn to_position(&self) -> Result<Position> {
        let shape = GridShape::new(&self.dims)?;
        let coords: Vec<Coord> = self.black.iter().map(|c| Coord(c.clone())).collect();
        Position::from_coords(&shape, &coords)
    }
}

/// Least number of cubes that can remain after any dismantling:
/// `ceil(sum over axes of the product of the other sides / d)`.
pub fn min_black(shape: &GridShape) -> usize {
    let dims = shape.dims();
    let total: usize = (0..dims.len())
        .map(|a| {
            dims.iter()
                .enumerate()
                .filter(|&(b, _)| b != a)
                .map(|(_, &x)| x)
                .product::<usize>()
        })
        .sum();
    total.div_ceil(dims.len())
}

/// `n^(d-2)` for `[n]^d`, the least black count of a facial section of a
/// solution.
pub fn facial_lower_bound(shape: &GridShape) -> Option<usize> {
    let n = shape.hypercube_order()?;
    Some(n.pow(shape.dim().saturating_sub(2) as u32))
}

/// `ceil((n^(d-1) + (d-1) n^(d-2)) / d)`, the least area of each projection
/// of a solution in `[n]^d`.
pub fn projection_lower_bound(shape: &GridShape) -> Option<usize> {
    let n = shape.hypercube_order()?;
    let d = shape.dim();
    let num = n.pow(d as u32 - 1) + (d - 1) * n.pow(d.saturating_sub(2) as u32);
    Some(num.div_ceil(d))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct BoundsReport {
    pub dims: Vec<usize>,
    pub min_black: usize,
    /// `None` means not applicable (non-hypercube shape).
    pub facial_min: Option<usize>,
    pub projection_min: Option<usize>,
}

pub fn bounds(shape: &GridShape) -> BoundsReport {
    BoundsReport {
        dims: shape.dims().to_vec(),
        min_black: min_black(shape),
        facial_min: facial_lower_bound(shape),
        projection_min: projection_lower_bound(shape),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cube(n: usize) -> GridShape {
        GridShape::cube(n, 3).unwrap()
    }

    fn pos(shape: &GridShape, cells: &[[usize; 3]]) -> Position {
        let coords: Vec<Coord> = cells.iter().map(|c| Coord(c.to_vec())).collect();
        Position::from_coords(shape, &coords).unwrap()
    }

    fn cyclic(n: usize) -> Position {
        let g = cube(n);
        let cells: Vec<CellId> = g
            .cells()
            .filter(|&c| {
                let s = g.component(c, 0) as i64 + g.component(c, 1) as i64
                    - g.component(c, 2) as i64;
                (s - 1).rem_euclid(n as i64) == 0
            })
            .collect();
        Position::from_cells(&g, cells)
    }

    #[test]
    fn degrees() {
        let g = cube(3);
        let full = Position::full(&g);
        assert_eq!(full.black_degree(CellId(0)), 3);
        let empty = Position::empty(&g);
        assert!(g.cells().all(|c| empty.black_degree(c) == 0));
    }

    #[test]
    fn degree_matches_brute_force_scan() {
        let p = cyclic(5);
        let g = p.shape().clone();
        let target = g.encode(&Coord(vec![1, 1, 2])).unwrap();
        let coord = g.decode(target);
        let brute = p
            .black_coords()
            .iter()
            .filter(|b| {
                b.0.iter()
                    .zip(&coord.0)
                    .map(|(x, y)| x.abs_diff(*y))
                    .sum::<usize>()
                    == 1
            })
            .count();
        assert_eq!(p.black_degree(target), brute);
        assert!(!p.is_black(target));
    }

    #[test]
    fn mutation_keeps_cache() {
        let g = cube(4);
        let mut p = Position::empty(&g);
        for i in (0..64).step_by(3) {
            p.set_black(CellId(i));
        }
        for i in (0..64).step_by(7) {
            p.set_white(CellId(i));
        }
        assert!(p.degree_cache_consistent());
    }

    #[test]
    fn independence_and_base() {
        let p = cyclic(4);
        assert!(p.is_independent());
        assert!(p.is_base_position());
        assert!(!Position::full(&cube(2)).is_independent());
        let single = pos(&cube(3), &[[2, 2, 2]]);
        assert!(single.is_independent());
        assert!(!single.is_base_position());
    }

    #[test]
    fn convexity() {
        assert!(cyclic(5).is_convex());
        assert!(!pos(&cube(3), &[[1, 1, 1], [1, 1, 3]]).is_convex());
        assert!(Position::full(&cube(3)).is_convex());
        assert!(Position::empty(&cube(3)).is_convex());
    }

    #[test]
    fn perfect() {
        assert!(cyclic(5).is_perfect().unwrap());
        assert!(matches!(
            pos(&cube(3), &[[1, 1, 1]]).is_perfect(),
            Err(Error::NotBasePosition(_))
        ));
        // two colour classes of [2]^3
        let even = pos(&cube(2), &[[1, 1, 1], [1, 2, 2], [2, 1, 2], [2, 2, 1]]);
        let odd = pos(&cube(2), &[[2, 2, 2], [2, 1, 1], [1, 2, 1], [1, 1, 2]]);
        assert!(even.is_perfect().unwrap());
        assert!(odd.is_perfect().unwrap());
    }

    #[test]
    fn visible_surface_values() {
        assert_eq!(Position::full(&cube(3)).visible_surface(), 54);
        assert_eq!(
            Position::full(&GridShape::cube(4, 4).unwrap()).visible_surface(),
            2 * 4 * 64
        );
        assert_eq!(pos(&cube(3), &[[2, 2, 2]]).visible_surface(), 6);
        for n in 2..7 {
            assert_eq!(cyclic(n).visible_surface(), 6 * n * n);
        }
    }

    #[test]
    fn min_black_values() {
        assert_eq!(min_black(&cube(4)), 16);
        assert_eq!(min_black(&GridShape::cube(3, 4).unwrap()), 27);
        assert_eq!(min_black(&GridShape::new(&[2, 2, 5]).unwrap()), 8);
        assert_eq!(min_black(&GridShape::new(&[2, 3, 6]).unwrap()), 12);
        assert_eq!(min_black(&cube(1)), 1);
    }

    #[test]
    fn facial_counts() {
        let p = cyclic(6);
        for axis in 0..3 {
            for v in [1, 6] {
                assert_eq!(p.facial_count(axis, v).unwrap(), 6);
            }
        }
        assert!(matches!(p.facial_count(0, 3), Err(Error::NotFacial { .. })));
        assert_eq!(p.check_facial_bound(), Some(true));
        let cuboid = Position::empty(&GridShape::new(&[2, 2, 5]).unwrap());
        assert_eq!(cuboid.check_facial_bound(), None);
    }

    #[test]
    fn projection_bounds() {
        assert_eq!(projection_lower_bound(&cube(5)), Some(12));
        assert_eq!(projection_lower_bound(&cube(4)), Some(8));
        let p = cyclic(5);
        assert_eq!(p.total_projection_area(), 75);
        let r = bounds(&cube(5));
        assert_eq!((r.min_black, r.facial_min, r.projection_min), (25, Some(5), Some(12)));
    }

    #[test]
    fn json_round_trip() {
        let p = cyclic(3);
        let q = Position::from_json(&p.to_json()).unwrap();
        assert_eq!(p, q);
        assert!(Position::from_json(r#"{"dims":[3,3,3],"black":[[4,1,1]]}"#).is_err());
        assert!(Position::from_json(r#"{"dims":[3,3,3],"black":"#).is_err());
    }

    #[test]
    fn ascii_layers() {
        let p = cyclic(3);
        let s = p.render_ascii().unwrap();
        let lines: Vec<&str> = s.lines().collect();
        assert_eq!(lines[0], "z=1  z=2  z=3");
        // level 3 holds the anti-diagonal i + j = 4
        assert_eq!(lines[1], "#..  .#.  ..#");
        assert_eq!(lines.len(), 4);
    }
}
