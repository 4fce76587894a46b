//! Box geometry: mixed-radix cell addressing, face adjacency, lines,
//! sections and coordinate-deleting projections.
//!
//! Cells are addressed by 1-based coordinates. Internally every cell has a
//! dense [`CellId`] obtained by mixed-radix encoding with the **last
//! coordinate varying fastest**. Serialized data always uses coordinates.

use std::collections::BTreeSet;
use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Dense 0-based cell index.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct CellId(pub usize);

impl CellId {
    #[inline]
    pub fn index(self) -> usize {
        self.0
    }
}

/// A 1-based coordinate tuple.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Coord(pub Vec<usize>);

impl Coord {
    pub fn new(components: impl Into<Vec<usize>>) -> Self {
        Coord(components.into())
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    /// Coordinate with `axis` removed.
    pub fn without(&self, axis: usize) -> Coord {
        let mut c = self.0.clone();
        c.remove(axis);
        Coord(c)
    }
}

impl std::ops::Index<usize> for Coord {
    type Output = usize;
    fn index(&self, i: usize) -> &usize {
        &self.0[i]
    }
}

impl fmt::Display for Coord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, x) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{x}")?;
        }
        write!(f, ")")
    }
}

#[derive(Debug)]
struct ShapeData {
    dims: Vec<usize>,
    strides: Vec<usize>,
    cell_count: usize,
    // CSR adjacency
    adj_start: Vec<u32>,
    adj: Vec<u32>,
}

/// Side lengths of a d-dimensional box. Cheap to clone.
#[derive(Clone)]
pub struct GridShape(Arc<ShapeData>);

impl PartialEq for GridShape {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.0, &other.0) || self.0.dims == other.0.dims
    }
}
impl Eq for GridShape {}

impl fmt::Debug for GridShape {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "GridShape{:?}", self.0.dims)
    }
}

impl fmt::Display for GridShape {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.dims.iter().map(|d| d.to_string()).collect();
        write!(f, "{}", parts.join("x"))
    }
}

/// Upper limit on the number of cells, keeps ids inside `u32`.
pub const MAX_CELLS: usize = 1 << 28;

impl GridShape {
    /// Builds a box with the given side lengths.
    ///
    /// Requires `d >= 2` and every side `>= 2`. The single degenerate
    /// exception is the one-cell hypercube `[1]^d`, which is accepted so that
    /// order-1 data (one cube, one Latin square of order 1) is representable.
    pub fn new(dims: &[usize]) -> Result<Self> {
        if dims.len() < 2 {
            return Err(Error::InvalidShape(format!(
                "need at least 2 dimensions, got {}",
                dims.len()
            )));
        }
        let all_one = dims.iter().all(|&x| x == 1);
        if !all_one && dims.iter().any(|&x| x < 2) {
            return Err(Error::InvalidShape(format!(
                "every side length must be at least 2, got {dims:?}"
            )));
        }
        let mut cell_count: usize = 1;
        for &x in dims {
            cell_count = cell_count
                .checked_mul(x)
                .filter(|&c| c <= MAX_CELLS)
                .ok_or_else(|| Error::InvalidShape(format!("{dims:?} has too many cells")))?;
        }
        let d = dims.len();
        let mut strides = vec![1usize; d];
        for i in (0..d - 1).rev() {
            strides[i] = strides[i + 1] * dims[i + 1];
        }
        let mut adj_start = Vec::with_capacity(cell_count + 1);
        let mut adj = Vec::with_capacity(cell_count * 2 * d);
        let mut coord = vec![0usize; d]; // 0-based
        for id in 0..cell_count {
            adj_start.push(adj.len() as u32);
            for axis in 0..d {
                if coord[axis] > 0 {
                    adj.push((id - strides[axis]) as u32);
                }
                if coord[axis] + 1 < dims[axis] {
                    adj.push((id + strides[axis]) as u32);
                }
            }
            for axis in (0..d).rev() {
                coord[axis] += 1;
                if coord[axis] < dims[axis] {
                    break;
                }
                coord[axis] = 0;
            }
        }
        adj_start.push(adj.len() as u32);
        Ok(GridShape(Arc::new(ShapeData {
            dims: dims.to_vec(),
            strides,
            cell_count,
            adj_start,
            adj,
        })))
    }

    /// The hypercube `[n]^d`.
    pub fn cube(n: usize, d: usize) -> Result<Self> {
        GridShape::new(&vec![n; d])
    }

    pub fn dims(&self) -> &[usize] {
        &self.0.dims
    }

    pub fn dim(&self) -> usize {
        self.0.dims.len()
    }

    pub fn cell_count(&self) -> usize {
        self.0.cell_count
    }

    pub fn strides(&self) -> &[usize] {
        &self.0.strides
    }

    /// `Some(n)` when every side equals `n`.
    pub fn hypercube_order(&self) -> Option<usize> {
        let n = self.0.dims[0];
        self.0.dims.iter().all(|&x| x == n).then_some(n)
    }

    pub fn is_hypercube(&self) -> bool {
        self.hypercube_order().is_some()
    }

    pub fn cells(&self) -> impl Iterator<Item = CellId> {
        (0..self.cell_count()).map(CellId)
    }

    pub fn encode(&self, coord: &Coord) -> Result<CellId> {
        if coord.dim() != self.dim() {
            return Err(Error::OutOfBounds(format!(
                "{coord} has {} components, shape {self} needs {}",
                coord.dim(),
                self.dim()
            )));
        }
        let mut id = 0;
        for (axis, (&x, &n)) in coord.0.iter().zip(self.dims()).enumerate() {
            if x < 1 || x > n {
                return Err(Error::OutOfBounds(format!(
                    "{coord}: component {axis} not in [1, {n}]"
                )));
            }
            id += (x - 1) * self.0.strides[axis];
        }
        Ok(CellId(id))
    }

    pub fn decode(&self, id: CellId) -> Coord {
        debug_assert!(id.0 < self.cell_count());
        let mut rest = id.0;
        let c = self
            .0
            .strides
            .iter()
            .map(|&s| {
                let x = rest / s;
                rest %= s;
                x + 1
            })
            .collect();
        Coord(c)
    }

    /// 1-based value of one coordinate of a cell.
    #[inline]
    pub fn component(&self, id: CellId, axis: usize) -> usize {
        (id.0 / self.0.strides[axis]) % self.0.dims[axis] + 1
    }

    /// Face neighbours of a cell.
    #[inline]
    pub fn neighbors(&self, id: CellId) -> impl Iterator<Item = CellId> + '_ {
        self.neighbor_slice(id).iter().map(|&x| CellId(x as usize))
    }

    #[inline]
    pub(crate) fn neighbor_slice(&self, id: CellId) -> &[u32] {
        let s = self.0.adj_start[id.0] as usize;
        let e = self.0.adj_start[id.0 + 1] as usize;
        &self.0.adj[s..e]
    }

    /// Axis along which two adjacent cells differ.
    pub fn adjacency_axis(&self, a: CellId, b: CellId) -> Option<usize> {
        let diff = a.0.abs_diff(b.0);
        let axis = self.0.strides.iter().position(|&s| s == diff)?;
        let mut differing = 0;
        for ax in 0..self.dim() {
            if self.component(a, ax) != self.component(b, ax) {
                differing += 1;
            }
        }
        (differing == 1 && self.component(a, axis).abs_diff(self.component(b, axis)) == 1)
            .then_some(axis)
    }

    pub fn are_adjacent(&self, a: CellId, b: CellId) -> bool {
        self.adjacency_axis(a, b).is_some()
    }

    /// Number of edges of the grid graph.
    pub fn edge_count(&self) -> usize {
        self.0.adj.len() / 2
    }

    /// The cells of one line, in increasing coordinate order along `axis`.
    /// `fixed` lists the other `d-1` coordinates in axis order.
    pub fn line(&self, axis: usize, fixed: &[usize]) -> Result<Vec<CellId>> {
        if axis >= self.dim() || fixed.len() + 1 != self.dim() {
            return Err(Error::OutOfBounds(format!(
                "line axis {axis} with {} fixed coordinates in {self}",
                fixed.len()
            )));
        }
        let mut coord = Vec::with_capacity(self.dim());
        coord.extend_from_slice(&fixed[..axis]);
        coord.push(1);
        coord.extend_from_slice(&fixed[axis..]);
        let start = self.encode(&Coord(coord))?;
        let stride = self.0.strides[axis];
        Ok((0..self.0.dims[axis])
            .map(|t| CellId(start.0 + t * stride))
            .collect())
    }

    /// All lines along `axis`; together they partition the cells.
    pub fn lines(&self, axis: usize) -> Vec<Vec<CellId>> {
        let stride = self.0.strides[axis];
        let len = self.0.dims[axis];
        self.cells()
            .filter(|&c| self.component(c, axis) == 1)
            .map(|start| (0..len).map(|t| CellId(start.0 + t * stride)).collect())
            .collect()
    }

    /// Every line of the box, all axes.
    pub fn all_lines(&self) -> Vec<Vec<CellId>> {
        (0..self.dim()).flat_map(|a| self.lines(a)).collect()
    }

    pub fn section(&self, axis: usize, value: usize) -> Result<Vec<CellId>> {
        self.check_section(axis, value)?;
        Ok(self
            .cells()
            .filter(|&c| self.component(c, axis) == value)
            .collect())
    }

    pub fn is_facial(&self, axis: usize, value: usize) -> Result<bool> {
        self.check_section(axis, value)?;
        Ok(value == 1 || value == self.0.dims[axis])
    }

    fn check_section(&self, axis: usize, value: usize) -> Result<()> {
        if axis >= self.dim() || value < 1 || value > self.0.dims[axis] {
            return Err(Error::OutOfBounds(format!(
                "section axis {axis} value {value} outside {self}"
            )));
        }
        Ok(())
    }

    /// Side lengths after deleting `axis`.
    pub fn reduced_dims(&self, axis: usize) -> Vec<usize> {
        let mut d = self.0.dims.clone();
        d.remove(axis);
        d
    }

    /// Image of a cell set under deletion of `axis`.
    pub fn project<I: IntoIterator<Item = CellId>>(&self, cells: I, axis: usize) -> Projection {
        let dims = self.reduced_dims(axis);
        let inner = self.0.strides[axis];
        let outer = inner * self.0.dims[axis];
        let image = cells
            .into_iter()
            .map(|c| (c.0 / outer) * inner + c.0 % inner)
            .collect();
        Projection { dims, cells: image }
    }
}

/// A set of cells of the reduced box obtained by deleting one axis. Cell
/// indices use the same mixed-radix order as [`GridShape`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Projection {
    pub dims: Vec<usize>,
    pub cells: BTreeSet<usize>,
}

impl Projection {
    pub fn len(&self) -> usize {
        self.cells.len()
    }

    pub fn is_empty(&self) -> bool {
        self.cells.is_empty()
    }

    pub fn full_size(&self) -> usize {
        self.dims.iter().product()
    }

    pub fn is_full(&self) -> bool {
        self.len() == self.full_size()
    }

    /// Reduced coordinates of the projected cells.
    pub fn coords(&self) -> Vec<Coord> {
        self.cells
            .iter()
            .map(|&id| {
                let mut rest = id;
                let mut c = vec![0; self.dims.len()];
                for i in (0..self.dims.len()).rev() {
                    c[i] = rest % self.dims[i] + 1;
                    rest /= self.dims[i];
                }
                Coord(c)
            })
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(v: &[usize]) -> Coord {
        Coord(v.to_vec())
    }

    #[test]
    fn encode_corners() {
        let g = GridShape::cube(3, 3).unwrap();
        assert_eq!(g.encode(&c(&[1, 1, 1])).unwrap(), CellId(0));
        assert_eq!(g.encode(&c(&[3, 3, 3])).unwrap(), CellId(26));
        assert_eq!(g.decode(CellId(26)), c(&[3, 3, 3]));
    }

    #[test]
    fn mixed_radix_round_trip() {
        let g = GridShape::new(&[2, 3, 4]).unwrap();
        // last coordinate fastest: (2,1,3) -> 1*12 + 0*4 + 2
        assert_eq!(g.encode(&c(&[2, 1, 3])).unwrap(), CellId(14));
        let mut seen = BTreeSet::new();
        for x in 1..=2 {
            for y in 1..=3 {
                for z in 1..=4 {
                    let id = g.encode(&c(&[x, y, z])).unwrap();
                    assert_eq!(g.decode(id), c(&[x, y, z]));
                    assert!(seen.insert(id));
                }
            }
        }
        assert_eq!(seen.len(), 24);
    }

    #[test]
    fn out_of_bounds() {
        let g = GridShape::cube(3, 3).unwrap();
        assert!(matches!(g.encode(&c(&[0, 1, 1])), Err(Error::OutOfBounds(_))));
        assert!(matches!(g.encode(&c(&[1, 4, 1])), Err(Error::OutOfBounds(_))));
        assert!(g.encode(&c(&[1, 1])).is_err());
    }

    #[test]
    fn rejects_degenerate_shapes() {
        assert!(GridShape::new(&[3]).is_err());
        assert!(GridShape::new(&[1, 3, 3]).is_err());
        assert!(GridShape::new(&[0, 3]).is_err());
        let one = GridShape::cube(1, 3).unwrap();
        assert_eq!(one.cell_count(), 1);
        assert_eq!(one.neighbors(CellId(0)).count(), 0);
    }

    #[test]
    fn neighbor_counts() {
        let g = GridShape::cube(3, 3).unwrap();
        let corner = g.encode(&c(&[1, 1, 1])).unwrap();
        let mut nb: Vec<Coord> = g.neighbors(corner).map(|x| g.decode(x)).collect();
        nb.sort();
        assert_eq!(nb, vec![c(&[1, 1, 2]), c(&[1, 2, 1]), c(&[2, 1, 1])]);
        let centre = g.encode(&c(&[2, 2, 2])).unwrap();
        assert_eq!(g.neighbors(centre).count(), 6);
        let two = GridShape::cube(2, 3).unwrap();
        assert!(two.cells().all(|x| two.neighbors(x).count() == 3));
    }

    #[test]
    fn adjacency_symmetric_irreflexive() {
        for dims in [vec![3, 3, 3], vec![2, 3, 4], vec![4, 4, 4, 4], vec![2, 2, 5], vec![5, 7]] {
            let g = GridShape::new(&dims).unwrap();
            for a in g.cells() {
                let deg = g.neighbors(a).count();
                assert!(deg >= g.dim() && deg <= 2 * g.dim());
                for b in g.neighbors(a) {
                    assert_ne!(a, b);
                    assert!(g.neighbors(b).any(|x| x == a));
                    let ca = g.decode(a);
                    let cb = g.decode(b);
                    let diff: usize = ca.0.iter().zip(&cb.0).map(|(x, y)| x.abs_diff(*y)).sum();
                    assert_eq!(diff, 1);
                    assert!(g.adjacency_axis(a, b).is_some());
                }
            }
        }
    }

    #[test]
    fn lines_and_counts() {
        let g = GridShape::cube(3, 3).unwrap();
        let l = g.line(2, &[1, 1]).unwrap();
        let coords: Vec<Coord> = l.iter().map(|&x| g.decode(x)).collect();
        assert_eq!(coords, vec![c(&[1, 1, 1]), c(&[1, 1, 2]), c(&[1, 1, 3])]);
        for n in 2..5 {
            for d in 2..5 {
                let g = GridShape::cube(n, d).unwrap();
                for axis in 0..d {
                    assert_eq!(g.lines(axis).len(), n.pow(d as u32 - 1));
                }
            }
        }
        let g = GridShape::new(&[2, 3, 4]).unwrap();
        let ls = g.lines(1);
        assert_eq!(ls.len(), 8);
        assert!(ls.iter().all(|l| l.len() == 3));
    }

    #[test]
    fn lines_and_sections_partition() {
        let g = GridShape::new(&[3, 4, 2]).unwrap();
        for axis in 0..3 {
            let mut hits = vec![0; g.cell_count()];
            for l in g.lines(axis) {
                for c in &l {
                    hits[c.0] += 1;
                }
                for v in 1..=g.dims()[axis] {
                    let sec = g.section(axis, v).unwrap();
                    assert_eq!(l.iter().filter(|c| sec.contains(c)).count(), 1);
                }
                assert_eq!(g.project(l.iter().copied(), axis).len(), 1);
            }
            assert!(hits.iter().all(|&h| h == 1));
            let mut hits = vec![0; g.cell_count()];
            for v in 1..=g.dims()[axis] {
                for c in g.section(axis, v).unwrap() {
                    hits[c.0] += 1;
                }
            }
            assert!(hits.iter().all(|&h| h == 1));
        }
    }

    #[test]
    fn sections() {
        let g = GridShape::cube(4, 3).unwrap();
        assert_eq!(g.section(0, 1).unwrap().len(), 16);
        assert!(g.is_facial(0, 1).unwrap());
        assert!(g.is_facial(0, 4).unwrap());
        assert!(!g.is_facial(0, 2).unwrap());
        assert_eq!(g.section(0, 2).unwrap().len(), 16);
        assert!(g.section(0, 5).is_err());
        let g = GridShape::cube(3, 4).unwrap();
        assert_eq!(g.section(2, 2).unwrap().len(), 27);
    }

    #[test]
    fn projections() {
        let g = GridShape::cube(3, 3).unwrap();
        for axis in 0..3 {
            let p = g.project(g.cells(), axis);
            assert!(p.is_full());
            assert_eq!(p.len(), 9);
        }
        assert!(g.project(std::iter::empty(), 1).is_empty());
        let g = GridShape::cube(2, 3).unwrap();
        let a = g.encode(&c(&[1, 1, 1])).unwrap();
        let b = g.encode(&c(&[1, 1, 2])).unwrap();
        let p = g.project([a, b], 2);
        assert_eq!(p.coords(), vec![c(&[1, 1])]);
    }
}
