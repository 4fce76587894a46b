//! Signed axis permutations of a box, canonical forms and orbit counting.
//!
//! Two positions are isometric when some element of the box's isometry
//! group maps one onto the other. The canonical form of a position is the
//! smallest image over the whole group, where sets are ordered by their
//! sorted cell-id lists (see [`BitSet::cmp_sorted`]). With that order, every
//! prefix (the `k` smallest cells) of a canonical set is itself canonical,
//! which is what lets the enumerators reject non-canonical partial
//! positions early.

use std::cmp::Ordering;
use std::collections::HashSet;

use serde::{Deserialize, Serialize};

use crate::bitset::BitSet;
use crate::error::{Error, Result};
use crate::grid::{Coord, GridShape};
use crate::position::Position;

/// Output axis `i` reads input axis `axis_perm[i]`, reversed when
/// `flips[i]` is set.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Isometry {
    pub axis_perm: Vec<usize>,
    pub flips: Vec<bool>,
}

impl Isometry {
    pub fn identity(d: usize) -> Self {
        Isometry {
            axis_perm: (0..d).collect(),
            flips: vec![false; d],
        }
    }

    pub fn dim(&self) -> usize {
        self.axis_perm.len()
    }

    pub fn is_identity(&self) -> bool {
        self.axis_perm.iter().enumerate().all(|(i, &p)| i == p) && self.flips.iter().all(|f| !f)
    }

    /// Maps every axis to one of equal length.
    pub fn fits(&self, shape: &GridShape) -> bool {
        let dims = shape.dims();
        self.dim() == dims.len()
            && self.flips.len() == dims.len()
            && {
                let mut seen = vec![false; dims.len()];
                self.axis_perm
                    .iter()
                    .all(|&p| p < dims.len() && !std::mem::replace(&mut seen[p], true))
            }
            && self
                .axis_perm
                .iter()
                .enumerate()
                .all(|(i, &p)| dims[i] == dims[p])
    }

    pub fn apply_coord(&self, dims: &[usize], x: &Coord) -> Coord {
        Coord(
            (0..self.dim())
                .map(|i| {
                    let v = x[self.axis_perm[i]];
                    if self.flips[i] {
                        dims[i] + 1 - v
                    } else {
                        v
                    }
                })
                .collect(),
        )
    }

    /// `self ∘ other`: apply `other` first.
    pub fn compose(&self, other: &Isometry) -> Isometry {
        let axis_perm = self.axis_perm.iter().map(|&p| other.axis_perm[p]).collect();
        let flips = (0..self.dim())
            .map(|i| self.flips[i] ^ other.flips[self.axis_perm[i]])
            .collect();
        Isometry { axis_perm, flips }
    }

    pub fn inverse(&self) -> Isometry {
        let d = self.dim();
        let mut axis_perm = vec![0; d];
        let mut flips = vec![false; d];
        for i in 0..d {
            axis_perm[self.axis_perm[i]] = i;
            flips[self.axis_perm[i]] = self.flips[i];
        }
        Isometry { axis_perm, flips }
    }
}

/// All signed axis permutations that map the box onto itself.
pub fn isometry_group(shape: &GridShape) -> Vec<Isometry> {
    let d = shape.dim();
    let dims = shape.dims();
    let mut perms = Vec::new();
    permutations(d, &mut Vec::new(), &mut vec![false; d], &mut |p| {
        if p.iter().enumerate().all(|(i, &q)| dims[i] == dims[q]) {
            perms.push(p.to_vec());
        }
    });
    let mut out = Vec::with_capacity(perms.len() << d);
    for p in perms {
        for mask in 0..(1usize << d) {
            out.push(Isometry {
                axis_perm: p.clone(),
                flips: (0..d).map(|i| mask >> i & 1 == 1).collect(),
            });
        }
    }
    out
}

fn permutations(d: usize, cur: &mut Vec<usize>, used: &mut Vec<bool>, f: &mut impl FnMut(&[usize])) {
    if cur.len() == d {
        f(cur);
        return;
    }
    for i in 0..d {
        if !used[i] {
            used[i] = true;
            cur.push(i);
            permutations(d, cur, used, f);
            cur.pop();
            used[i] = false;
        }
    }
}

pub fn apply_isometry(pos: &Position, g: &Isometry) -> Result<Position> {
    let shape = pos.shape();
    if !g.fits(shape) {
        return Err(Error::ShapeMismatch(format!(
            "isometry {g:?} does not preserve {shape}"
        )));
    }
    let dims = shape.dims();
    let cells = pos
        .black_coords()
        .iter()
        .map(|c| shape.encode(&g.apply_coord(dims, c)))
        .collect::<Result<Vec<_>>>()?;
    Ok(Position::from_cells(shape, cells))
}

/// Canonical key of an isometry class. Keys order by black count first and
/// then by sorted cell-id list.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct CanonicalKey(pub BitSet);

impl Ord for CanonicalKey {
    fn cmp(&self, other: &Self) -> Ordering {
        self.0
            .count()
            .cmp(&other.0.count())
            .then_with(|| self.0.cmp_sorted(&other.0))
    }
}

impl PartialOrd for CanonicalKey {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl CanonicalKey {
    /// Hex string of the key's words, lowest cell first.
    pub fn to_hex(&self) -> String {
        self.0
            .words()
            .iter()
            .map(|w| format!("{w:016x}"))
            .collect::<Vec<_>>()
            .join("")
    }
}

/// Cell permutation tables of the whole isometry group of a shape.
#[derive(Debug, Clone)]
pub struct SymmetryTable {
    shape: GridShape,
    group: Vec<Isometry>,
    maps: Vec<Vec<u32>>,
}

impl SymmetryTable {
    pub fn new(shape: &GridShape) -> Self {
        let group = isometry_group(shape);
        let dims = shape.dims();
        let maps = group
            .iter()
            .map(|g| {
                shape
                    .cells()
                    .map(|c| {
                        let img = g.apply_coord(dims, &shape.decode(c));
                        shape.encode(&img).expect("isometry stays in the box").0 as u32
                    })
                    .collect()
            })
            .collect();
        SymmetryTable {
            shape: shape.clone(),
            group,
            maps,
        }
    }

    pub fn shape(&self) -> &GridShape {
        &self.shape
    }

    pub fn group(&self) -> &[Isometry] {
        &self.group
    }

    pub fn order(&self) -> usize {
        self.group.len()
    }

    pub fn cell_map(&self, g: usize) -> &[u32] {
        &self.maps[g]
    }

    pub fn image(&self, g: usize, bits: &BitSet) -> BitSet {
        let map = &self.maps[g];
        BitSet::from_indices(bits.len(), bits.iter().map(|c| map[c] as usize))
    }

    pub fn image_mask(&self, g: usize, mut mask: u64) -> u64 {
        let map = &self.maps[g];
        let mut out = 0u64;
        while mask != 0 {
            let c = mask.trailing_zeros() as usize;
            mask &= mask - 1;
            out |= 1 << map[c];
        }
        out
    }

    pub fn canonical_form(&self, pos: &Position) -> CanonicalKey {
        let bits = pos.bits();
        let mut best = bits.clone();
        for g in 0..self.order() {
            let img = self.image(g, bits);
            if img.cmp_sorted(&best) == Ordering::Less {
                best = img;
            }
        }
        CanonicalKey(best)
    }

    /// `(orbit size, stabilizer size)`.
    pub fn orbit_and_stabilizer(&self, pos: &Position) -> (usize, usize) {
        let bits = pos.bits();
        let stab = (0..self.order())
            .filter(|&g| &self.image(g, bits) == bits)
            .count();
        (self.order() / stab, stab)
    }

    /// Number of distinct images, counted directly.
    pub fn orbit_size_direct(&self, pos: &Position) -> usize {
        let bits = pos.bits();
        (0..self.order())
            .map(|g| self.image(g, bits))
            .collect::<HashSet<_>>()
            .len()
    }

    /// Masks (≤ 64 cells): true when no group element produces a set that
    /// sorts before `mask`.
    pub fn mask_is_canonical(&self, mask: u64) -> bool {
        (0..self.order()).all(|g| {
            let img = self.image_mask(g, mask);
            let x = img ^ mask;
            // the set holding the lowest differing cell sorts first
            x == 0 || mask & x & x.wrapping_neg() != 0
        })
    }

    pub fn mask_stabilizer(&self, mask: u64) -> usize {
        (0..self.order())
            .filter(|&g| self.image_mask(g, mask) == mask)
            .count()
    }
}

pub fn canonical_form(pos: &Position) -> CanonicalKey {
    SymmetryTable::new(pos.shape()).canonical_form(pos)
}

pub fn orbit_and_stabilizer(pos: &Position) -> (usize, usize) {
    SymmetryTable::new(pos.shape()).orbit_and_stabilizer(pos)
}

pub fn is_isometric(a: &Position, b: &Position) -> bool {
    a.shape() == b.shape() && canonical_form(a) == canonical_form(b)
}
