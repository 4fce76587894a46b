//! Exhaustive searches: perfect solutions via Latin squares, all solutions
//! of small boxes, the level-permutation count and the cuboid scans.

use std::collections::BTreeMap;
use std::sync::atomic::{AtomicU64, Ordering as AtomicOrdering};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::constructions::cyclic_base;
use crate::engine::is_solution;
use crate::error::{Error, Result};
use crate::grid::{CellId, GridShape};
use crate::kernel::{GreedyScratch, Mask64};
use crate::latin::{
    first_rows, position_from_latin, visit_latin_squares, LatinGreedy, LatinHypercube,
    LATIN_ENUMERATION_CAP,
};
use crate::position::{min_black, Position};
use crate::symmetry::SymmetryTable;

/// Default number of black cells after which partial positions stop being
/// screened for canonicity. Any depth gives the same counts.
pub const DEFAULT_SCREENING_DEPTH: usize = 5;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SearchOptions {
    pub screening_depth: usize,
    /// Run the branch tasks on the rayon pool; `false` is the reference
    /// serial mode.
    pub parallel: bool,
    /// Allow the jobs that are gated as long-running.
    pub long_running: bool,
}

impl Default for SearchOptions {
    fn default() -> Self {
        SearchOptions {
            screening_depth: DEFAULT_SCREENING_DEPTH,
            parallel: true,
            long_running: crate::long_running_enabled(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SolutionClass {
    pub representative: Position,
    pub orbit_size: u64,
    pub stabilizer_size: u64,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Catalogue {
    pub shape: GridShape,
    pub perfect_only: bool,
    /// Sorted by canonical key.
    pub classes: Vec<SolutionClass>,
    pub total: u64,
}

impl Catalogue {
    pub fn class_count(&self) -> usize {
        self.classes.len()
    }

    pub fn orbit_sum(&self) -> u64 {
        self.classes.iter().map(|c| c.orbit_size).sum()
    }

    pub fn to_file(&self) -> CatalogueFile {
        CatalogueFile {
            dims: self.shape.dims().to_vec(),
            perfect_only: self.perfect_only,
            total: self.total,
            classes: self.classes.len(),
            representatives: self
                .classes
                .iter()
                .map(|c| ClassEntry {
                    black: c.representative.black_coords().into_iter().map(|x| x.0).collect(),
                    orbit_size: c.orbit_size,
                    stabilizer_size: c.stabilizer_size,
                })
                .collect(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClassEntry {
    pub black: Vec<Vec<usize>>,
    pub orbit_size: u64,
    pub stabilizer_size: u64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CatalogueFile {
    pub dims: Vec<usize>,
    pub perfect_only: bool,
    pub total: u64,
    pub classes: usize,
    pub representatives: Vec<ClassEntry>,
}

fn class_from_mask(shape: &GridShape, table: &SymmetryTable, mask: u64) -> SolutionClass {
    let stab = table.mask_stabilizer(mask) as u64;
    SolutionClass {
        representative: Position::from_cells(
            shape,
            (0..shape.cell_count()).filter(|i| mask >> i & 1 == 1).map(CellId),
        ),
        orbit_size: table.order() as u64 / stab,
        stabilizer_size: stab,
    }
}

fn sort_classes(table: &SymmetryTable, classes: &mut [SolutionClass]) {
    classes.sort_by_cached_key(|c| table.canonical_form(&c.representative));
}

fn long_running_refused(what: &str) -> Error {
    Error::CapExceeded(format!(
        "{what} is long-running; set {}=1 or pass --long-running",
        crate::LONG_RUNNING_ENV
    ))
}

fn cube3(n: usize) -> GridShape {
    if n == 1 {
        GridShape::new(&[1, 1, 1])
    } else {
        GridShape::cube(n, 3)
    }
    .expect("valid cube")
}

// ---------------------------------------------------------------------------
// perfect solutions

/// Largest order searched without the long-running flag.
pub const PERFECT_DEFAULT_MAX_ORDER: usize = 5;

/// Every Latin square of order `n` is tested with greedy build-up; the
/// solutions are grouped into isometry classes of `[n]^3`.
pub fn enumerate_perfect_solutions(n: usize, opts: &SearchOptions) -> Result<Catalogue> {
    if n == 0 || n > LATIN_ENUMERATION_CAP {
        return Err(Error::CapExceeded(format!(
            "perfect solutions are enumerated for orders 1 to {LATIN_ENUMERATION_CAP}, got {n}"
        )));
    }
    if n > PERFECT_DEFAULT_MAX_ORDER && !opts.long_running {
        return Err(long_running_refused(&format!("the order-{n} perfect enumeration")));
    }
    let shape = cube3(n);
    let table = SymmetryTable::new(&shape);
    // one work item per first row
    let run = |root: &Vec<usize>| {
        let mut greedy = LatinGreedy::new(n);
        let mut keys = BTreeMap::new();
        let mut count = 0u64;
        visit_latin_squares(n, root, |g| {
            if greedy.is_solution(g) {
                count += 1;
                let pos = Position::from_cells(&shape, g.iter().enumerate().map(|(i, &s)| CellId(i * n + s)));
                keys.entry(table.canonical_form(&pos)).or_insert(pos);
            }
            true
        });
        (keys, count)
    };
    let roots = first_rows(n);
    let parts: Vec<_> = if opts.parallel {
        roots.par_iter().map(run).collect()
    } else {
        roots.iter().map(run).collect()
    };
    let mut merged = BTreeMap::new();
    let mut direct = 0u64;
    for (keys, count) in parts {
        direct += count;
        merged.extend(keys);
    }
    let classes: Vec<SolutionClass> = merged
        .into_iter()
        .map(|(key, _)| {
            let representative = Position::from_bitset(&shape, key.0);
            let (orbit, stab) = table.orbit_and_stabilizer(&representative);
            SolutionClass {
                representative,
                orbit_size: orbit as u64,
                stabilizer_size: stab as u64,
            }
        })
        .collect();
    let total: u64 = classes.iter().map(|c| c.orbit_size).sum();
    if total != direct {
        return Err(Error::InvalidParameter(format!(
            "orbit sum {total} disagrees with the {direct} solutions visited"
        )));
    }
    Ok(Catalogue {
        shape,
        perfect_only: true,
        classes,
        total,
    })
}

// ---------------------------------------------------------------------------
// all solutions

/// Largest box the exhaustive search accepts.
pub const ALL_SOLUTIONS_MAX_CELLS: usize = 64;

struct Searcher<'a> {
    kernel: &'a Mask64,
    table: &'a SymmetryTable,
    d: usize,
    target: u32,
    depth: usize,
    /// (shift, mask) per axis for counting edges inside a region
    edge_masks: Vec<(u32, u64)>,
    /// free[i]: cells with id ≥ i
    free: Vec<u64>,
}

#[derive(Default)]
struct SearchOut {
    found: Vec<u64>,
    nodes: u64,
}

impl Searcher<'_> {
    fn edges_within(&self, r: u64) -> u32 {
        self.edge_masks
            .iter()
            .map(|&(s, m)| (r & (r >> s) & m).count_ones())
            .sum()
    }

    /// Upper bound on black cells inside `r`: every white cell of a
    /// solution is added with exactly `d` black neighbours, so the edges
    /// inside `r` number at most `d` times its white cells.
    fn capacity(&self, r: u64) -> u32 {
        let e = self.edges_within(r);
        r.count_ones() - e.div_ceil(self.d as u32)
    }

    /// Adds `c` to `black`, returning the new state when it survives the
    /// independence, degree and canonicity checks.
    fn push(&self, black: u64, blocked: u64, planes: [u64; 4], c: usize) -> Option<(u64, u64, [u64; 4])> {
        let nb = self.kernel.neighbors(c);
        let black2 = black | 1 << c;
        let mut planes2 = planes;
        let mut carry = nb;
        for plane in planes2.iter_mut() {
            let t = *plane & carry;
            *plane ^= carry;
            carry = t;
        }
        if self.kernel.count_exceeds(&planes2, self.d) != 0 {
            return None;
        }
        let k = black2.count_ones() as usize;
        if k <= self.depth && !self.table.mask_is_canonical(black2) {
            return None;
        }
        Some((black2, blocked | nb | 1 << c, planes2))
    }

    fn feasible(&self, black: u64, blocked: u64, next: usize) -> bool {
        let need = self.target - black.count_ones();
        need == 0 || self.capacity(self.free[next] & !blocked) >= need
    }

    fn dfs(&self, black: u64, blocked: u64, planes: [u64; 4], next: usize, out: &mut SearchOut) {
        out.nodes += 1;
        if black.count_ones() == self.target {
            self.leaf(black, out);
            return;
        }
        let mut avail = self.free[next] & !blocked;
        while avail != 0 {
            let c = avail.trailing_zeros() as usize;
            avail &= avail - 1;
            if let Some((b2, bl2, p2)) = self.push(black, blocked, planes, c) {
                if self.feasible(b2, bl2, c + 1) {
                    self.dfs(b2, bl2, p2, c + 1, out);
                }
            }
            // every remaining choice skips c
            let rest = self.free[c + 1] & !blocked;
            if self.capacity(rest) < self.target - black.count_ones() {
                break;
            }
        }
    }

    fn leaf(&self, black: u64, out: &mut SearchOut) {
        if black.count_ones() as usize > self.depth && !self.table.mask_is_canonical(black) {
            return;
        }
        if self.kernel.reaches_full(black) {
            out.found.push(black);
        }
    }

    /// Partial states at exactly `k` black cells (or earlier leaves), used
    /// as independent work items.
    fn frontier(&self, k: u32) -> Vec<(u64, u64, [u64; 4], usize)> {
        let mut items = Vec::new();
        let mut stack = vec![(0u64, 0u64, [0u64; 4], 0usize)];
        while let Some((black, blocked, planes, next)) = stack.pop() {
            if black.count_ones() >= k.min(self.target) {
                items.push((black, blocked, planes, next));
                continue;
            }
            let mut avail = self.free[next] & !blocked;
            while avail != 0 {
                let c = avail.trailing_zeros() as usize;
                avail &= avail - 1;
                if let Some((b2, bl2, p2)) = self.push(black, blocked, planes, c) {
                    if self.feasible(b2, bl2, c + 1) {
                        stack.push((b2, bl2, p2, c + 1));
                    }
                }
            }
        }
        items.sort_unstable_by_key(|&(b, ..)| b.reverse_bits());
        items
    }
}

/// Search statistics, useful for tuning.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct SearchStats {
    pub nodes: u64,
    pub work_items: usize,
}

/// All solutions of a box with at most 64 cells, one representative per
/// isometry class, totalled by orbit-stabilizer.
pub fn enumerate_all_solutions(shape: &GridShape, opts: &SearchOptions) -> Result<Catalogue> {
    enumerate_all_solutions_with_stats(shape, opts).map(|(c, _)| c)
}

pub fn enumerate_all_solutions_with_stats(
    shape: &GridShape,
    opts: &SearchOptions,
) -> Result<(Catalogue, SearchStats)> {
    let kernel = Mask64::new(shape).ok_or_else(|| {
        Error::CapExceeded(format!(
            "exhaustive search is limited to boxes with at most {ALL_SOLUTIONS_MAX_CELLS} cells; {shape} has {}",
            shape.cell_count()
        ))
    })?;
    let table = SymmetryTable::new(shape);
    let n = shape.cell_count();
    let d = shape.dim();
    let mut edge_masks = Vec::new();
    for axis in 0..d {
        let stride = shape.strides()[axis];
        let m = shape
            .cells()
            .filter(|&c| shape.component(c, axis) < shape.dims()[axis])
            .fold(0u64, |acc, c| acc | 1 << c.0);
        edge_masks.push((stride as u32, m));
    }
    let free = (0..=n)
        .map(|i| if i >= 64 { 0 } else { kernel.full() & !((1u64 << i) - 1) })
        .collect();
    let searcher = Searcher {
        kernel: &kernel,
        table: &table,
        d,
        target: min_black(shape) as u32,
        depth: opts.screening_depth,
        edge_masks,
        free,
    };
    let mut found = Vec::new();
    let mut stats = SearchStats::default();
    if searcher.feasible(0, 0, 0) {
        let items = searcher.frontier(3);
        stats.work_items = items.len();
        let nodes = AtomicU64::new(0);
        let run = |&(b, bl, p, next): &(u64, u64, [u64; 4], usize)| {
            let mut out = SearchOut::default();
            searcher.dfs(b, bl, p, next, &mut out);
            nodes.fetch_add(out.nodes, AtomicOrdering::Relaxed);
            out.found
        };
        let parts: Vec<Vec<u64>> = if opts.parallel {
            items.par_iter().map(run).collect()
        } else {
            items.iter().map(run).collect()
        };
        found = parts.into_iter().flatten().collect();
        stats.nodes = nodes.into_inner();
    }
    found.sort_unstable();
    found.dedup();
    let mut classes: Vec<SolutionClass> = found
        .iter()
        .map(|&m| class_from_mask(shape, &table, m))
        .collect();
    sort_classes(&table, &mut classes);
    let total = classes.iter().map(|c| c.orbit_size).sum();
    Ok((
        Catalogue {
            shape: shape.clone(),
            perfect_only: false,
            classes,
            total,
        },
        stats,
    ))
}


// ---------------------------------------------------------------------------
// order 7

/// The order-7 square none of whose isotopes gives a solution.
pub fn order7_exception_square() -> LatinHypercube {
    let rows = ["1245673", "2134765", "7321546", "3462157", "4756312", "5673421", "6517234"];
    LatinHypercube::from_rows(
        &rows
            .iter()
            .map(|r| r.bytes().map(|b| (b - b'0') as usize).collect())
            .collect::<Vec<_>>(),
    )
    .expect("the printed square is Latin")
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Order7Report {
    pub representative_solves: bool,
    /// How many of the six conjugates give solutions.
    pub conjugates_solving: usize,
    pub cyclic_solves: bool,
}

impl Order7Report {
    /// The square and its conjugates fail while the cyclic base succeeds.
    pub fn exception_confirmed(&self) -> bool {
        !self.representative_solves && self.conjugates_solving == 0 && self.cyclic_solves
    }
}

pub fn order7_exception_check() -> Result<Order7Report> {
    let l = order7_exception_square();
    let solves = |l: &LatinHypercube| is_solution(&position_from_latin(l));
    let mut conjugates_solving = 0;
    for c in l.conjugates()? {
        if solves(&c)? {
            conjugates_solving += 1;
        }
    }
    Ok(Order7Report {
        representative_solves: solves(&l)?,
        conjugates_solving,
        cyclic_solves: is_solution(&cyclic_base(7)?)?,
    })
}

// ---------------------------------------------------------------------------
// level permutations

pub const LEVEL_PERMUTATION_DEFAULT_MAX: usize = 8;
pub const LEVEL_PERMUTATION_MAX: usize = 10;

/// Number of permutations of the levels `k = 1..n` of the cyclic base that
/// still give a solution.
pub fn level_permutation_table(n: usize, opts: &SearchOptions) -> Result<u64> {
    if n < 2 || n > LEVEL_PERMUTATION_MAX {
        return Err(Error::CapExceeded(format!(
            "level permutations are counted for 2 <= n <= {LEVEL_PERMUTATION_MAX}, got {n}"
        )));
    }
    if n > LEVEL_PERMUTATION_DEFAULT_MAX && !opts.long_running {
        return Err(long_running_refused(&format!("the order-{n} level-permutation count")));
    }
    let shape = cube3(n);
    // base cells grouped by level, as (i, j) offsets
    let base = cyclic_base(n)?;
    let mut by_level: Vec<Vec<usize>> = vec![Vec::new(); n];
    for c in base.black_coords() {
        by_level[c[2] - 1].push(((c[0] - 1) * n + (c[1] - 1)) * n);
    }
    let run = |root: &Vec<usize>| {
        let mut scratch = GreedyScratch::new(&shape);
        let mut cells = Vec::with_capacity(n * n);
        let mut count = 0u64;
        let mut perm = root.clone();
        perm.extend((0..n).filter(|x| !root.contains(x)));
        // the tail starts sorted, so this walks all its permutations
        loop {
            cells.clear();
            for (level, offsets) in by_level.iter().enumerate() {
                cells.extend(offsets.iter().map(|&o| o + perm[level]));
            }
            if scratch.reaches_full(&cells) {
                count += 1;
            }
            if !next_permutation(&mut perm[root.len()..]) {
                break;
            }
        }
        count
    };
    let roots: Vec<Vec<usize>> = (0..n)
        .flat_map(|a| (0..n).filter(move |&b| b != a).map(move |b| vec![a, b]))
        .collect();
    Ok(if opts.parallel {
        roots.par_iter().map(run).sum()
    } else {
        roots.iter().map(run).sum()
    })
}

fn next_permutation(xs: &mut [usize]) -> bool {
    let Some(i) = (1..xs.len()).rev().find(|&i| xs[i - 1] < xs[i]) else {
        return false;
    };
    let j = (i..xs.len()).rev().find(|&j| xs[j] > xs[i - 1]).expect("a larger element exists");
    xs.swap(i - 1, j);
    xs[i..].reverse();
    true
}

// ---------------------------------------------------------------------------
// cuboids

/// Divisibility condition for an independent base position of
/// `C(k,l,m)` to reach the edge-count bound exactly.
pub fn cuboid_feasibility(shape: &GridShape) -> Result<bool> {
    let &[k, l, m] = shape.dims() else {
        return Err(Error::InvalidParameter(format!("cuboids are three-dimensional, got {shape}")));
    };
    Ok((k * l + l * m + m * k) % 3 == 0)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum CuboidFamily {
    /// `C(2,2,k)`
    TwoTwo,
    /// `C(2,3,k)`
    TwoThree,
    /// `C(3,3,k)`
    ThreeThree,
}

impl CuboidFamily {
    pub fn dims(self, k: usize) -> [usize; 3] {
        match self {
            CuboidFamily::TwoTwo => [2, 2, k],
            CuboidFamily::TwoThree => [2, 3, k],
            CuboidFamily::ThreeThree => [3, 3, k],
        }
    }

    /// The conjectured existence pattern.
    pub fn conjectured(self, k: usize) -> bool {
        match self {
            CuboidFamily::TwoTwo => k == 5,
            CuboidFamily::TwoThree => k == 6,
            CuboidFamily::ThreeThree => k % 2 == 1 || k == 4,
        }
    }

    /// Largest `k` whose cuboid fits the exhaustive search.
    pub fn k_limit(self) -> usize {
        let [a, b, _] = self.dims(1);
        ALL_SOLUTIONS_MAX_CELLS / (a * b)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CuboidVerdict {
    pub dims: [usize; 3],
    pub min_black: usize,
    pub feasible: bool,
    pub solutions: u64,
    pub classes: usize,
    pub conjectured: bool,
}

impl CuboidVerdict {
    pub fn exists(&self) -> bool {
        self.solutions > 0
    }

    pub fn agrees(&self) -> bool {
        self.exists() == self.conjectured
    }
}

/// Exhaustive verdicts for `k = 2..=k_max` in one family.
pub fn cuboid_conjecture_scan(family: CuboidFamily, k_max: usize, opts: &SearchOptions) -> Result<Vec<CuboidVerdict>> {
    if k_max > family.k_limit() {
        return Err(Error::CapExceeded(format!(
            "k_max {k_max} exceeds {} for this family",
            family.k_limit()
        )));
    }
    (2..=k_max)
        .map(|k| {
            let dims = family.dims(k);
            let shape = GridShape::new(&dims)?;
            let cat = enumerate_all_solutions(&shape, opts)?;
            Ok(CuboidVerdict {
                dims,
                min_black: min_black(&shape),
                feasible: cuboid_feasibility(&shape)?,
                solutions: cat.total,
                classes: cat.class_count(),
                conjectured: family.conjectured(k),
            })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::symmetry::canonical_form;

    fn serial() -> SearchOptions {
        SearchOptions {
            parallel: false,
            ..SearchOptions::default()
        }
    }

    fn summary(c: &Catalogue) -> (u64, usize) {
        (c.total, c.class_count())
    }

    #[test]
    fn perfect_small_orders() {
        let expect = [(1, 1), (2, 1), (12, 2), (256, 21)];
        for (n, &e) in (1..=4).zip(&expect) {
            let c = enumerate_perfect_solutions(n, &SearchOptions::default()).unwrap();
            assert_eq!(summary(&c), e, "n={n}");
            assert_eq!(c.orbit_sum(), c.total);
        }
    }

    #[test]
    fn perfect_order_six_is_gated() {
        let opts = SearchOptions {
            long_running: false,
            ..SearchOptions::default()
        };
        assert!(matches!(enumerate_perfect_solutions(6, &opts), Err(Error::CapExceeded(_))));
        assert!(matches!(enumerate_perfect_solutions(7, &opts), Err(Error::CapExceeded(_))));
    }

    #[test]
    fn all_solutions_small_cubes() {
        for (n, e) in [(2, (2, 1)), (3, (116, 7))] {
            let c = enumerate_all_solutions(&GridShape::cube(n, 3).unwrap(), &SearchOptions::default()).unwrap();
            assert_eq!(summary(&c), e);
            for class in &c.classes {
                let r = &class.representative;
                assert!(is_solution(r).unwrap());
                assert!(r.is_base_position());
                assert_eq!(canonical_form(r).0, r.bits().clone());
                assert_eq!(r.check_facial_bound(), Some(true));
                assert_eq!(r.check_projection_bound(), Some(true));
            }
        }
        let unit = enumerate_all_solutions(&GridShape::new(&[1, 1, 1]).unwrap(), &serial()).unwrap();
        assert_eq!(summary(&unit), (1, 1));
    }

    #[test]
    fn classes_sorted_by_canonical_key() {
        let c = enumerate_all_solutions(&GridShape::cube(3, 3).unwrap(), &serial()).unwrap();
        let keys: Vec<_> = c.classes.iter().map(|k| canonical_form(&k.representative)).collect();
        assert!(keys.windows(2).all(|w| w[0] < w[1]));
    }

    #[test]
    fn screening_depth_does_not_change_counts() {
        for dims in [vec![3, 3, 3], vec![2, 2, 5], vec![2, 3, 3]] {
            let g = GridShape::new(&dims).unwrap();
            let reference = enumerate_all_solutions(&g, &serial()).unwrap();
            for depth in [0, 1, 3, 8, 64] {
                let opts = SearchOptions {
                    screening_depth: depth,
                    ..serial()
                };
                assert_eq!(enumerate_all_solutions(&g, &opts).unwrap(), reference, "{dims:?} depth {depth}");
            }
        }
    }

    #[test]
    fn serial_and_parallel_agree() {
        let g = GridShape::cube(3, 3).unwrap();
        let par = SearchOptions {
            parallel: true,
            ..serial()
        };
        assert_eq!(enumerate_all_solutions(&g, &serial()).unwrap(), enumerate_all_solutions(&g, &par).unwrap());
        assert_eq!(enumerate_perfect_solutions(4, &serial()).unwrap(), enumerate_perfect_solutions(4, &par).unwrap());
        assert_eq!(level_permutation_table(5, &serial()).unwrap(), level_permutation_table(5, &par).unwrap());
    }

    #[test]
    fn level_permutations() {
        for (n, e) in [(3, 6), (4, 16), (5, 40), (6, 96)] {
            assert_eq!(level_permutation_table(n, &SearchOptions::default()).unwrap(), e);
        }
    }

    #[test]
    fn level_permutation_gate() {
        let opts = SearchOptions {
            long_running: false,
            ..SearchOptions::default()
        };
        assert!(matches!(level_permutation_table(9, &opts), Err(Error::CapExceeded(_))));
        assert!(matches!(level_permutation_table(11, &opts), Err(Error::CapExceeded(_))));
    }

    #[test]
    fn next_permutation_walks_all() {
        let mut xs = vec![0, 1, 2, 3];
        let mut count = 1;
        while next_permutation(&mut xs) {
            count += 1;
        }
        assert_eq!(count, 24);
        assert_eq!(xs, vec![3, 2, 1, 0]);
    }

    #[test]
    fn order_seven_exception() {
        let r = order7_exception_check().unwrap();
        assert!(!r.representative_solves);
        assert_eq!(r.conjugates_solving, 0);
        assert!(r.cyclic_solves);
        assert!(r.exception_confirmed());
    }

    #[test]
    fn feasibility_predicate() {
        let f = |d: [usize; 3]| cuboid_feasibility(&GridShape::new(&d).unwrap()).unwrap();
        assert!(f([2, 2, 5]));
        assert!(!f([2, 2, 4]));
        assert!(f([3, 3, 7]));
        // agrees with the residue formulation
        for k in 2..8 {
            for l in 2..8 {
                for m in 2..8 {
                    let r = [k % 3, l % 3, m % 3];
                    let zeros = r.iter().filter(|&&x| x == 0).count();
                    let residue = zeros >= 2 || (r[0] == r[1] && r[1] == r[2]);
                    assert_eq!(f([k, l, m]), residue, "{k} {l} {m}");
                }
            }
        }
        assert!(cuboid_feasibility(&GridShape::cube(3, 2).unwrap()).is_err());
    }

    #[test]
    fn small_cuboid_scan() {
        let v = cuboid_conjecture_scan(CuboidFamily::TwoTwo, 5, &SearchOptions::default()).unwrap();
        let exists: Vec<bool> = v.iter().map(CuboidVerdict::exists).collect();
        assert_eq!(exists, [true, false, false, true]);
        assert!(v.iter().all(|x| !x.exists() || x.feasible));
        assert!(cuboid_conjecture_scan(CuboidFamily::TwoTwo, 17, &SearchOptions::default()).is_err());
    }

    #[test]
    fn solutions_outside_the_conjectured_pattern() {
        // both reached by the exhaustive scan; checked here with the
        // position-level greedy
        let cases: [(&[usize], &[[usize; 3]]); 2] = [
            (
                &[2, 3, 9],
                &[
                    [1, 1, 1], [1, 1, 3], [1, 1, 5], [1, 1, 7], [1, 1, 9], [1, 2, 4],
                    [1, 2, 6], [1, 3, 1], [1, 3, 3], [1, 3, 7], [1, 3, 9], [2, 1, 2],
                    [2, 2, 1], [2, 2, 9], [2, 3, 4], [2, 3, 6], [2, 3, 8],
                ],
            ),
            (
                &[3, 3, 6],
                &[
                    [1, 1, 1], [1, 1, 3], [1, 1, 5], [1, 2, 2], [1, 2, 4], [1, 2, 6],
                    [1, 3, 1], [2, 1, 6], [2, 3, 2], [2, 3, 4], [3, 1, 1], [3, 1, 5],
                    [3, 2, 2], [3, 3, 3], [3, 3, 6],
                ],
            ),
        ];
        for (dims, cells) in cases {
            let g = GridShape::new(dims).unwrap();
            let coords: Vec<_> = cells.iter().map(|c| crate::grid::Coord(c.to_vec())).collect();
            let p = Position::from_coords(&g, &coords).unwrap();
            assert_eq!(p.black_count(), min_black(&g));
            assert!(is_solution(&p).unwrap(), "{dims:?}");
            let k = dims[2];
            let family = if dims[0] == 2 { CuboidFamily::TwoThree } else { CuboidFamily::ThreeThree };
            assert!(!family.conjectured(k));
        }
    }
}
