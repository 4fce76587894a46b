//! Latin hypercubes and their positions, Latin-square enumeration and
//! sampling, and the two-dimensional permutation percolation.

use std::fmt;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use statrs::distribution::{Beta, ContinuousCDF};

use crate::error::{Error, Result};
use crate::grid::{CellId, Coord, GridShape};
use crate::kernel::{GreedyScratch, Mask64};
use crate::percolation::bootstrap_closure;
use crate::position::Position;

/// An array with `dim` indices in `[1, order]` and symbols in `[1, order]`
/// such that every line holds each symbol once. Entries are stored with the
/// last index fastest.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct LatinHypercube {
    order: usize,
    dim: usize,
    entries: Vec<usize>,
}

impl LatinHypercube {
    pub fn new(order: usize, dim: usize, entries: Vec<usize>) -> Result<Self> {
        if order == 0 || dim == 0 {
            return Err(Error::InvalidParameter("order and dimension must be positive".into()));
        }
        if entries.len() != order.pow(dim as u32) {
            return Err(Error::NotLatin(format!(
                "expected {} entries, got {}",
                order.pow(dim as u32),
                entries.len()
            )));
        }
        let l = LatinHypercube { order, dim, entries };
        l.check()?;
        Ok(l)
    }

    pub fn from_rows(rows: &[Vec<usize>]) -> Result<Self> {
        let n = rows.len();
        if rows.iter().any(|r| r.len() != n) {
            return Err(Error::NotLatin("rows must all have length n".into()));
        }
        Self::new(n, 2, rows.concat())
    }

    /// `L(x) = (x_1 + ... + x_dim) mod n + 1` on 0-based indices.
    pub fn cyclic(order: usize, dim: usize) -> Self {
        let entries = (0..order.pow(dim as u32))
            .map(|mut i| {
                let mut s = 0;
                for _ in 0..dim {
                    s += i % order;
                    i /= order;
                }
                s % order + 1
            })
            .collect();
        LatinHypercube { order, dim, entries }
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn entries(&self) -> &[usize] {
        &self.entries
    }

    /// Entry at 1-based indices.
    pub fn get(&self, idx: &[usize]) -> usize {
        self.entries[idx.iter().fold(0, |acc, &x| acc * self.order + (x - 1))]
    }

    pub fn rows(&self) -> Vec<Vec<usize>> {
        self.entries.chunks(self.order).map(|r| r.to_vec()).collect()
    }

    fn check(&self) -> Result<()> {
        let n = self.order;
        if let Some(&bad) = self.entries.iter().find(|&&s| s == 0 || s > n) {
            return Err(Error::NotLatin(format!("symbol {bad} outside [1, {n}]")));
        }
        for axis in 0..self.dim {
            let stride = n.pow((self.dim - 1 - axis) as u32);
            for start in 0..self.entries.len() {
                if (start / stride) % n != 0 {
                    continue;
                }
                let mut seen = vec![false; n + 1];
                for t in 0..n {
                    let s = self.entries[start + t * stride];
                    if std::mem::replace(&mut seen[s], true) {
                        return Err(Error::NotLatin(format!(
                            "symbol {s} repeats along axis {} through index {}",
                            axis + 1,
                            self.index_string(start)
                        )));
                    }
                }
            }
        }
        Ok(())
    }

    fn index_string(&self, mut flat: usize) -> String {
        let mut idx = vec![0; self.dim];
        for slot in idx.iter_mut().rev() {
            *slot = flat % self.order + 1;
            flat /= self.order;
        }
        Coord(idx).to_string()
    }

    pub fn is_latin(&self) -> bool {
        self.check().is_ok()
    }

    /// The six conjugates of a Latin square (row, column and symbol roles
    /// permuted), starting with the square itself.
    pub fn conjugates(&self) -> Result<Vec<LatinHypercube>> {
        if self.dim != 2 {
            return Err(Error::InvalidParameter("conjugates are defined for squares".into()));
        }
        let n = self.order;
        let triples: Vec<[usize; 3]> = (0..n * n)
            .map(|i| [i / n, i % n, self.entries[i] - 1])
            .collect();
        let roles = [[0, 1, 2], [1, 0, 2], [0, 2, 1], [2, 1, 0], [1, 2, 0], [2, 0, 1]];
        Ok(roles
            .iter()
            .map(|r| {
                let mut entries = vec![0; n * n];
                for t in &triples {
                    entries[t[r[0]] * n + t[r[1]]] = t[r[2]] + 1;
                }
                LatinHypercube { order: n, dim: 2, entries }
            })
            .collect())
    }

    pub fn transpose(&self) -> Result<LatinHypercube> {
        Ok(self.conjugates()?.swap_remove(1))
    }

    /// Text format: `n` lines of `n` space-separated symbols.
    pub fn parse_text(text: &str) -> Result<Self> {
        let mut rows = Vec::new();
        for (lineno, line) in text.lines().enumerate() {
            if line.trim().is_empty() {
                continue;
            }
            let row = line
                .split_whitespace()
                .enumerate()
                .map(|(col, tok)| {
                    tok.parse::<usize>().map_err(|_| {
                        Error::Parse(format!("line {}, column {}: bad symbol {tok:?}", lineno + 1, col + 1))
                    })
                })
                .collect::<Result<Vec<_>>>()?;
            rows.push((lineno + 1, row));
        }
        let n = rows.len();
        if n == 0 {
            return Err(Error::Parse("empty Latin square".into()));
        }
        if let Some((lineno, row)) = rows.iter().find(|(_, r)| r.len() != n) {
            return Err(Error::Parse(format!(
                "line {lineno}: expected {n} symbols, found {}",
                row.len()
            )));
        }
        Self::from_rows(&rows.into_iter().map(|(_, r)| r).collect::<Vec<_>>())
    }

    pub fn to_text(&self) -> Result<String> {
        if self.dim != 2 {
            return Err(Error::InvalidParameter("text format holds squares only".into()));
        }
        Ok(self.to_string())
    }
}

impl fmt::Display for LatinHypercube {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for row in self.entries.chunks(self.order) {
            let strs: Vec<String> = row.iter().map(|s| s.to_string()).collect();
            writeln!(f, "{}", strs.join(" "))?;
        }
        Ok(())
    }
}

/// Black cell at `(x_1, ..., x_{d-1}, L(x))` for every index `x`.
pub fn position_from_latin(l: &LatinHypercube) -> Position {
    let d = l.dim + 1;
    let shape = if l.order == 1 {
        GridShape::new(&vec![1; d])
    } else {
        GridShape::cube(l.order, d)
    }
    .expect("Latin order and dimension give a valid box");
    Position::from_cells(&shape, latin_cells(l))
}

fn latin_cells(l: &LatinHypercube) -> impl Iterator<Item = CellId> + '_ {
    l.entries
        .iter()
        .enumerate()
        .map(move |(i, &s)| CellId(i * l.order + (s - 1)))
}

/// Reads a Latin hypercube off a position of `[n]^d`; every line along the
/// last axis must hold exactly one black cell.
pub fn latin_from_position(pos: &Position) -> Result<LatinHypercube> {
    let shape = pos.shape();
    let n = shape.hypercube_order().ok_or_else(|| {
        Error::ShapeMismatch(format!("{shape} is not a hypercube"))
    })?;
    let d = shape.dim();
    let mut entries = Vec::with_capacity(shape.cell_count() / n);
    for base in (0..shape.cell_count()).step_by(n) {
        let black: Vec<usize> = (0..n).filter(|&z| pos.is_black(CellId(base + z))).collect();
        if black.len() != 1 {
            let mut idx = shape.decode(CellId(base)).0;
            idx.pop();
            return Err(Error::NotSingleValued(format!(
                "the line over {} holds {} black cells",
                Coord(idx),
                black.len()
            )));
        }
        entries.push(black[0] + 1);
    }
    LatinHypercube::new(n, d - 1, entries)
}

// ---------------------------------------------------------------------------
// enumeration

/// Largest order `enumerate_latin_squares` accepts without an override.
pub const LATIN_ENUMERATION_CAP: usize = 6;

/// Depth-first, cell-by-cell backtracking over Latin squares of order `n`
/// whose first cells are `prefix` (0-based symbols, row-major). The visitor
/// receives 0-based entries and returns `false` to stop.
pub fn visit_latin_squares(n: usize, prefix: &[usize], mut visit: impl FnMut(&[usize]) -> bool) {
    let cells = n * n;
    let mut grid = vec![usize::MAX; cells];
    let mut row_used = vec![0u32; n];
    let mut col_used = vec![0u32; n];
    for (i, &s) in prefix.iter().enumerate() {
        let (r, c) = (i / n, i % n);
        if s >= n || row_used[r] >> s & 1 == 1 || col_used[c] >> s & 1 == 1 {
            return;
        }
        grid[i] = s;
        row_used[r] |= 1 << s;
        col_used[c] |= 1 << s;
    }
    let start = prefix.len();
    if start == cells {
        visit(&grid);
        return;
    }
    // next symbol to try at each cell
    let mut next = vec![0usize; cells];
    let mut i = start;
    loop {
        let (r, c) = (i / n, i % n);
        if grid[i] != usize::MAX {
            let s = grid[i];
            row_used[r] &= !(1 << s);
            col_used[c] &= !(1 << s);
            grid[i] = usize::MAX;
        }
        let free = !(row_used[r] | col_used[c]) & ((1u32 << n) - 1) & !((1u32 << next[i]) - 1);
        if free == 0 {
            next[i] = 0;
            if i == start {
                return;
            }
            i -= 1;
            continue;
        }
        let s = free.trailing_zeros() as usize;
        grid[i] = s;
        row_used[r] |= 1 << s;
        col_used[c] |= 1 << s;
        next[i] = s + 1;
        if i + 1 == cells {
            if !visit(&grid) {
                return;
            }
            // stay on the last cell to try its next symbol
        } else {
            i += 1;
        }
    }
}

/// All Latin squares of order `n`, lexicographic in row-major order.
pub struct LatinSquares {
    inner: std::vec::IntoIter<LatinHypercube>,
    remaining_roots: std::vec::IntoIter<Vec<usize>>,
    order: usize,
}

impl Iterator for LatinSquares {
    type Item = LatinHypercube;

    fn next(&mut self) -> Option<LatinHypercube> {
        loop {
            if let Some(l) = self.inner.next() {
                return Some(l);
            }
            let root = self.remaining_roots.next()?;
            let n = self.order;
            let mut batch = Vec::new();
            visit_latin_squares(n, &root, |g| {
                batch.push(LatinHypercube {
                    order: n,
                    dim: 2,
                    entries: g.iter().map(|s| s + 1).collect(),
                });
                true
            });
            self.inner = batch.into_iter();
        }
    }
}

/// Streams every Latin square of order `n`, each once. Orders above `cap`
/// are refused.
pub fn enumerate_latin_squares(n: usize, cap: usize) -> Result<LatinSquares> {
    if n == 0 {
        return Err(Error::InvalidParameter("order must be positive".into()));
    }
    if n > cap {
        return Err(Error::CapExceeded(format!(
            "enumerating Latin squares of order {n} exceeds the cap {cap}; raise the cap explicitly"
        )));
    }
    Ok(LatinSquares {
        inner: Vec::new().into_iter(),
        remaining_roots: first_rows(n).into_iter(),
        order: n,
    })
}

/// Every permutation of `0..n` as a row prefix; streams are batched per
/// first row so that memory stays bounded by one batch.
pub fn first_rows(n: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut row: Vec<usize> = (0..n).collect();
    permute(&mut row, 0, &mut out);
    out.sort();
    out
}

fn permute(row: &mut Vec<usize>, k: usize, out: &mut Vec<Vec<usize>>) {
    if k == row.len() {
        out.push(row.clone());
        return;
    }
    for i in k..row.len() {
        row.swap(k, i);
        permute(row, k + 1, out);
        row.swap(k, i);
    }
}

/// Number of Latin squares of order `n`, counted by visiting them.
pub fn count_latin_squares(n: usize) -> u64 {
    let mut count = 0u64;
    visit_latin_squares(n, &[], |_| {
        count += 1;
        true
    });
    count
}

// ---------------------------------------------------------------------------
// sampling

/// Markov chain on Latin squares using the ±1 moves on the incidence cube
/// (proper and improper states). The stationary distribution on proper
/// states is uniform.
pub struct LatinSampler {
    n: usize,
    /// cube[(r*n + c)*n + s] in {-1, 0, 1}
    cube: Vec<i8>,
    improper: Option<(usize, usize, usize)>,
    rng: ChaCha8Rng,
    thinning: usize,
}

impl LatinSampler {
    /// Burn-in and spacing between samples, in chain moves.
    pub fn default_burn_in(n: usize) -> usize {
        20 * n * n * n
    }

    pub fn new(n: usize, seed: u64) -> Result<Self> {
        if n < 2 {
            return Err(Error::InvalidParameter("sampler needs order at least 2".into()));
        }
        let mut cube = vec![0i8; n * n * n];
        for r in 0..n {
            for c in 0..n {
                cube[(r * n + c) * n + (r + c) % n] = 1;
            }
        }
        let mut s = LatinSampler {
            n,
            cube,
            improper: None,
            rng: ChaCha8Rng::seed_from_u64(seed),
            thinning: n * n * n,
        };
        s.run(Self::default_burn_in(n));
        Ok(s)
    }

    fn at(&self, r: usize, c: usize, s: usize) -> i8 {
        self.cube[(r * self.n + c) * self.n + s]
    }

    fn bump(&mut self, r: usize, c: usize, s: usize, delta: i8) {
        self.cube[(r * self.n + c) * self.n + s] += delta;
    }

    /// Random index `x` with `at(x) == 1` along one line of the cube.
    fn pick_one(&mut self, at: impl Fn(&[i8], usize) -> i8) -> usize {
        let hits: Vec<usize> = (0..self.n).filter(|&x| at(&self.cube, x) == 1).collect();
        *hits.choose(&mut self.rng).expect("line holds a positive entry")
    }

    fn step(&mut self) {
        let n = self.n;
        let (r, c, s) = match self.improper {
            Some(t) => t,
            // lazy at proper states, otherwise order 2 alternates forever
            None if self.rng.gen_bool(0.5) => return,
            None => loop {
                let (r, c, s) = (
                    self.rng.gen_range(0..n),
                    self.rng.gen_range(0..n),
                    self.rng.gen_range(0..n),
                );
                if self.at(r, c, s) == 0 {
                    break (r, c, s);
                }
            },
        };
        let r2 = self.pick_one(|cube, x| cube[(x * n + c) * n + s]);
        let c2 = self.pick_one(|cube, x| cube[(r * n + x) * n + s]);
        let s2 = self.pick_one(|cube, x| cube[(r * n + c) * n + x]);
        self.bump(r, c, s, 1);
        self.bump(r, c2, s2, 1);
        self.bump(r2, c, s2, 1);
        self.bump(r2, c2, s, 1);
        self.bump(r, c, s2, -1);
        self.bump(r, c2, s, -1);
        self.bump(r2, c, s, -1);
        self.bump(r2, c2, s2, -1);
        self.improper = (self.at(r2, c2, s2) < 0).then_some((r2, c2, s2));
    }

    /// Runs until `visits` more proper states have been seen. Sampling at a
    /// fixed time and then waiting for a proper state would favour squares
    /// that end long improper excursions; the chain watched only on proper
    /// states is uniform.
    fn run(&mut self, visits: usize) {
        let mut seen = 0;
        while seen < visits || self.improper.is_some() {
            self.step();
            if self.improper.is_none() {
                seen += 1;
            }
        }
    }

    fn current(&self) -> LatinHypercube {
        let n = self.n;
        let entries = (0..n * n)
            .map(|i| (0..n).find(|&s| self.cube[i * n + s] == 1).expect("proper state") + 1)
            .collect();
        LatinHypercube { order: n, dim: 2, entries }
    }

    pub fn next_square(&mut self) -> LatinHypercube {
        self.run(self.thinning);
        self.current()
    }
}

/// A Latin square of order `n` drawn by the ±1-move chain after burn-in.
pub fn random_latin_square(n: usize, seed: u64) -> Result<LatinHypercube> {
    if n == 1 {
        return Ok(LatinHypercube::cyclic(1, 2));
    }
    Ok(LatinSampler::new(n, seed)?.current())
}

/// A random isotope of the cyclic hypercube: each index axis and the
/// symbols are relabelled by independent random permutations.
pub fn random_isotope_hypercube(n: usize, dim: usize, seed: u64) -> LatinHypercube {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut perm = || {
        let mut p: Vec<usize> = (0..n).collect();
        p.shuffle(&mut rng);
        p
    };
    let axes: Vec<Vec<usize>> = (0..dim).map(|_| perm()).collect();
    let symbols = perm();
    let entries = (0..n.pow(dim as u32))
        .map(|flat| {
            let mut rest = flat;
            let mut s = 0;
            for axis in (0..dim).rev() {
                s += axes[axis][rest % n];
                rest /= n;
            }
            symbols[s % n] + 1
        })
        .collect();
    LatinHypercube { order: n, dim, entries }
}

// ---------------------------------------------------------------------------
// two-dimensional permutations

/// True when the bootstrap closure of the permutation matrix
/// `{(i, perm[i])}` (values 1-based) fills `[n]^2`.
pub fn shapiro_stephens_percolates(perm: &[usize]) -> Result<bool> {
    let n = perm.len();
    let mut seen = vec![false; n + 1];
    for &p in perm {
        if p == 0 || p > n || std::mem::replace(&mut seen[p], true) {
            return Err(Error::InvalidParameter(format!("{perm:?} is not a permutation of [1, {n}]")));
        }
    }
    if n == 1 {
        return Ok(true);
    }
    let l = LatinHypercube::new(n, 1, perm.to_vec())?;
    Ok(bootstrap_closure(&position_from_latin(&l)).is_full())
}

// ---------------------------------------------------------------------------
// solution fractions

/// Greedy test for Latin positions of `[n]^3`, with reusable buffers.
pub struct LatinGreedy {
    n: usize,
    mask: Option<Mask64>,
    scratch: GreedyScratch,
    cells: Vec<usize>,
}

impl LatinGreedy {
    pub fn new(n: usize) -> Self {
        let shape = if n == 1 {
            GridShape::new(&[1, 1, 1])
        } else {
            GridShape::cube(n, 3)
        }
        .expect("valid cube");
        LatinGreedy {
            n,
            mask: Mask64::new(&shape),
            scratch: GreedyScratch::new(&shape),
            cells: Vec::with_capacity(n * n),
        }
    }

    /// `entries` holds 0-based symbols, row-major.
    pub fn is_solution(&mut self, entries: &[usize]) -> bool {
        let n = self.n;
        if let Some(m) = &self.mask {
            let mask = entries
                .iter()
                .enumerate()
                .fold(0u64, |acc, (i, &s)| acc | 1 << (i * n + s));
            return m.reaches_full(mask);
        }
        self.cells.clear();
        self.cells.extend(entries.iter().enumerate().map(|(i, &s)| i * n + s));
        let cells = std::mem::take(&mut self.cells);
        let ok = self.scratch.reaches_full(&cells);
        self.cells = cells;
        ok
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FractionReport {
    pub n: usize,
    pub samples: usize,
    pub successes: usize,
    pub fraction: f64,
    /// One-sided 95% Clopper–Pearson upper bound on the true fraction.
    pub upper_95: f64,
    /// `(solutions, squares)` in lowest terms, when the order is small
    /// enough to enumerate.
    pub exact: Option<(u64, u64)>,
}

/// Largest order for which the exact fraction is computed.
pub const EXACT_FRACTION_MAX_ORDER: usize = 5;

/// `(solutions, squares)` over all Latin squares of order `n`, unreduced.
pub fn exact_solution_count(n: usize) -> (u64, u64) {
    let mut greedy = LatinGreedy::new(n);
    let (mut good, mut all) = (0u64, 0u64);
    visit_latin_squares(n, &[], |g| {
        all += 1;
        if greedy.is_solution(g) {
            good += 1;
        }
        true
    });
    (good, all)
}

fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

pub fn reduce(num: u64, den: u64) -> (u64, u64) {
    let g = gcd(num, den).max(1);
    (num / g, den / g)
}

pub fn clopper_pearson_upper(successes: usize, samples: usize, confidence: f64) -> f64 {
    if successes >= samples {
        return 1.0;
    }
    Beta::new(successes as f64 + 1.0, (samples - successes) as f64)
        .expect("positive shape parameters")
        .inverse_cdf(confidence)
}

/// Samples Latin squares of order `n` and reports how many give solutions
/// of `[n]^3`.
pub fn solution_fraction_experiment(n: usize, samples: usize, seed: u64) -> Result<FractionReport> {
    if samples == 0 {
        return Err(Error::InvalidParameter("at least one sample is required".into()));
    }
    let mut greedy = LatinGreedy::new(n);
    let mut successes = 0;
    if n == 1 {
        successes = samples;
    } else {
        let mut sampler = LatinSampler::new(n, seed)?;
        for _ in 0..samples {
            let l = sampler.next_square();
            let zero: Vec<usize> = l.entries.iter().map(|s| s - 1).collect();
            if greedy.is_solution(&zero) {
                successes += 1;
            }
        }
    }
    let exact = (n <= EXACT_FRACTION_MAX_ORDER).then(|| {
        let (a, b) = exact_solution_count(n);
        reduce(a, b)
    });
    Ok(FractionReport {
        n,
        samples,
        successes,
        fraction: successes as f64 / samples as f64,
        upper_95: clopper_pearson_upper(successes, samples, 0.95),
        exact,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::engine::is_solution;
    use std::collections::HashSet;

    fn sq(rows: &[&str]) -> LatinHypercube {
        LatinHypercube::from_rows(
            &rows
                .iter()
                .map(|r| r.bytes().map(|b| (b - b'0') as usize).collect())
                .collect::<Vec<_>>(),
        )
        .unwrap()
    }

    #[test]
    fn validation() {
        assert!(LatinHypercube::new(3, 2, vec![1, 2, 3, 2, 3, 1, 3, 1, 2]).is_ok());
        assert!(matches!(
            LatinHypercube::new(3, 2, vec![1, 2, 3, 2, 3, 1, 3, 2, 1]),
            Err(Error::NotLatin(_))
        ));
        assert!(LatinHypercube::cyclic(5, 3).is_latin());
        assert!(random_isotope_hypercube(4, 3, 1).is_latin());
    }

    #[test]
    fn order_one_is_single_cube() {
        let l = LatinHypercube::new(1, 2, vec![1]).unwrap();
        let p = position_from_latin(&l);
        assert_eq!(p.shape().cell_count(), 1);
        assert!(p.is_full());
    }

    #[test]
    fn bridge_round_trip() {
        for n in 2..=5 {
            for seed in 0..5 {
                let l = random_isotope_hypercube(n, 2, seed);
                let p = position_from_latin(&l);
                assert!(p.is_base_position());
                assert!(p.is_perfect().unwrap());
                assert_eq!(latin_from_position(&p).unwrap(), l);
            }
        }
        let l = random_isotope_hypercube(3, 3, 4);
        assert_eq!(latin_from_position(&position_from_latin(&l)).unwrap(), l);
    }

    #[test]
    fn bridge_diagnostics() {
        let g = GridShape::cube(3, 3).unwrap();
        let err = latin_from_position(&Position::empty(&g)).unwrap_err();
        assert!(matches!(err, Error::NotSingleValued(_)));
        // one cell per vertical line but repeated symbol in a row
        let cells = (0..9).map(|i| CellId(i * 3));
        assert!(matches!(
            latin_from_position(&Position::from_cells(&g, cells)),
            Err(Error::NotLatin(_))
        ));
    }

    #[test]
    fn top_left_square_of_order_four_catalogue_is_perfect_solution() {
        let p = position_from_latin(&sq(&["1234", "2143", "3412", "4321"]));
        assert!(is_solution(&p).unwrap());
        assert!(p.is_perfect().unwrap());
    }

    #[test]
    fn counts() {
        assert_eq!(count_latin_squares(1), 1);
        assert_eq!(count_latin_squares(2), 2);
        assert_eq!(count_latin_squares(3), 12);
        assert_eq!(count_latin_squares(4), 576);
        let all: Vec<_> = enumerate_latin_squares(4, LATIN_ENUMERATION_CAP).unwrap().collect();
        assert_eq!(all.len(), 576);
        assert!(all.iter().all(LatinHypercube::is_latin));
        assert_eq!(all.iter().collect::<HashSet<_>>().len(), 576);
        assert!(matches!(enumerate_latin_squares(7, 6), Err(Error::CapExceeded(_))));
    }

    #[test]
    fn prefix_partition_covers_everything() {
        let total: u64 = first_rows(4)
            .iter()
            .map(|row| {
                let mut k = 0;
                visit_latin_squares(4, row, |_| {
                    k += 1;
                    true
                });
                k
            })
            .sum();
        assert_eq!(total, 576);
    }

    #[test]
    fn text_format() {
        let l = LatinHypercube::parse_text("1 2 3\n2 3 1\n3 1 2\n").unwrap();
        assert_eq!(l.to_text().unwrap(), "1 2 3\n2 3 1\n3 1 2\n");
        let err = LatinHypercube::parse_text("1 2 3\n2 x 1\n3 1 2\n").unwrap_err();
        assert!(err.to_string().contains("line 2, column 2"), "{err}");
        let err = LatinHypercube::parse_text("1 2 3\n2 3\n3 1 2\n").unwrap_err();
        assert!(err.to_string().contains("line 2"), "{err}");
        assert!(matches!(
            LatinHypercube::parse_text("1 2\n1 2\n"),
            Err(Error::NotLatin(_))
        ));
    }

    #[test]
    fn conjugates_are_latin() {
        let l = sq(&["1245673", "2134765", "7321546", "3462157", "4756312", "5673421", "6517234"]);
        let cs = l.conjugates().unwrap();
        assert_eq!(cs[0], l);
        assert!(cs.iter().all(LatinHypercube::is_latin));
        assert_eq!(l.transpose().unwrap().get(&[1, 2]), l.get(&[2, 1]));
    }

    #[test]
    fn sampler_outputs_latin_squares_and_is_seeded() {
        for n in 2..=7 {
            let l = random_latin_square(n, 3).unwrap();
            assert!(l.is_latin());
            assert_eq!(l, random_latin_square(n, 3).unwrap());
        }
    }

    #[test]
    fn sampler_visits_both_order_two_squares() {
        let mut s = LatinSampler::new(2, 5).unwrap();
        let seen: HashSet<_> = (0..50).map(|_| s.next_square()).collect();
        assert_eq!(seen.len(), 2);
    }

    #[test]
    fn sampled_fraction_matches_enumeration() {
        // a plain marginal test misses bias towards particular squares;
        // the solution fraction at order 4 is sensitive to it
        let samples = 20_000;
        let r = solution_fraction_experiment(4, samples, 17).unwrap();
        let p = 4.0 / 9.0;
        let sd = (p * (1.0 - p) / samples as f64).sqrt();
        assert!((r.fraction - p).abs() < 4.0 * sd, "{}", r.fraction);
        assert_eq!(r.exact, Some((4, 9)));
    }

    #[test]
    fn sampler_marginals_are_uniform() {
        // chi-square over cell-symbol counts, 16 cells × 3 degrees of
        // freedom; accept within three standard deviations of the mean
        let mut s = LatinSampler::new(4, 11).unwrap();
        let samples = 10_000;
        let mut counts = [[0f64; 4]; 16];
        for _ in 0..samples {
            let l = s.next_square();
            for (i, &sym) in l.entries().iter().enumerate() {
                counts[i][sym - 1] += 1.0;
            }
        }
        let expected = samples as f64 / 4.0;
        let chi2: f64 = counts
            .iter()
            .flatten()
            .map(|&c| (c - expected).powi(2) / expected)
            .sum();
        let df = 48.0;
        assert!(chi2 < df + 3.0 * (2.0 * df as f64).sqrt(), "chi2 = {chi2}");
    }

    #[test]
    fn permutation_percolation() {
        assert!(shapiro_stephens_percolates(&[1, 2, 3, 4, 5]).unwrap());
        assert!(shapiro_stephens_percolates(&[2, 1]).unwrap());
        assert!(shapiro_stephens_percolates(&[1, 2]).unwrap());
        assert!(shapiro_stephens_percolates(&[1, 1]).is_err());
    }

    #[test]
    fn clopper_pearson() {
        assert!((clopper_pearson_upper(0, 10, 0.95) - (1.0 - 0.05f64.powf(0.1))).abs() < 1e-9);
        assert_eq!(clopper_pearson_upper(5, 5, 0.95), 1.0);
        assert!(clopper_pearson_upper(50, 1000, 0.95) > 0.05);
    }

    #[test]
    fn exact_fraction_order_four() {
        assert_eq!(exact_solution_count(3), (12, 12));
        let (a, b) = exact_solution_count(4);
        assert_eq!((a, b), (256, 576));
        assert_eq!(reduce(a, b), (4, 9));
    }
}
