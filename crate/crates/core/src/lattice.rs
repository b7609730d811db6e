//! Non-intersecting North/East lattice paths from `a_i = (2i−n, 0)` to
//! `b_j = (0, n−2j)`, `1 ≤ i, j ≤ ⌊n/2⌋`.
//!
//! The number `N(n)` of vertex-disjoint systems `a_i → b_i` satisfies
//! `deg SO(n) = 2^(n−1) N(n)`. It is computed two ways here: by exhaustive
//! backtracking over path systems and by the Gessel–Viennot determinant of
//! pairwise path counts.

use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use crate::arith::{binomial, det_exact, BigInt, IntMatrix};
use crate::Error;

/// Default cap on `n` for exhaustive enumeration.
pub const ENUMERATION_CAP: u32 = 9;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct LatticePoint {
    pub x: i64,
    pub y: i64,
}

impl LatticePoint {
    pub const fn new(x: i64, y: i64) -> Self {
        LatticePoint { x, y }
    }

    fn step(self, s: Step) -> Self {
        match s {
            Step::North => LatticePoint::new(self.x, self.y + 1),
            Step::East => LatticePoint::new(self.x + 1, self.y),
        }
    }
}

impl fmt::Display for LatticePoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.x, self.y)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Step {
    North,
    East,
}

impl Step {
    pub fn as_char(self) -> char {
        match self {
            Step::North => 'N',
            Step::East => 'E',
        }
    }
}

/// A monotone path of unit North/East steps.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct LatticePath {
    pub start: LatticePoint,
    pub end: LatticePoint,
    pub steps: Vec<Step>,
}

impl LatticePath {
    /// Every lattice point the path visits, endpoints included.
    pub fn vertices(&self) -> Vec<LatticePoint> {
        let mut out = Vec::with_capacity(self.steps.len() + 1);
        let mut p = self.start;
        out.push(p);
        for &s in &self.steps {
            p = p.step(s);
            out.push(p);
        }
        out
    }

    /// Whether the steps actually lead from `start` to `end`.
    pub fn is_consistent(&self) -> bool {
        self.steps.iter().fold(self.start, |p, &s| p.step(s)) == self.end
    }

    pub fn step_string(&self) -> String {
        self.steps.iter().map(|s| s.as_char()).collect()
    }
}

/// One path per source, path `i` running from `a_i` to `b_i`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct PathSystem {
    pub paths: Vec<LatticePath>,
}

impl PathSystem {
    /// No lattice point is shared by two paths.
    pub fn is_vertex_disjoint(&self) -> bool {
        let mut seen: Vec<LatticePoint> = self.paths.iter().flat_map(|p| p.vertices()).collect();
        let total = seen.len();
        seen.sort_unstable();
        seen.dedup();
        seen.len() == total
    }

    /// Each path is consistent and joins `a_i` to `b_i` for the given `n`.
    pub fn has_endpoints_for(&self, n: u32) -> bool {
        let (a, b) = endpoints(n);
        self.paths.len() == a.len()
            && self.paths.iter().zip(a.iter().zip(&b)).all(|(p, (s, e))| {
                p.start == *s && p.end == *e && p.is_consistent()
            })
    }

    pub fn step_strings(&self) -> Vec<String> {
        self.paths.iter().map(LatticePath::step_string).collect()
    }
}

/// Sources `A(n)` and sinks `B(n)`.
pub fn endpoints(n: u32) -> (Vec<LatticePoint>, Vec<LatticePoint>) {
    let n = i64::from(n);
    let half = n / 2;
    let a = (1..=half).map(|i| LatticePoint::new(2 * i - n, 0)).collect();
    let b = (1..=half).map(|j| LatticePoint::new(0, n - 2 * j)).collect();
    (a, b)
}

/// Number of North/East paths between two points; zero if `to` is not
/// weakly north-east of `from`.
pub fn paths_between(from: LatticePoint, to: LatticePoint) -> BigInt {
    let dx = to.x - from.x;
    let dy = to.y - from.y;
    if dx < 0 || dy < 0 {
        return BigInt::from(0);
    }
    binomial((dx + dy) as u64, dx)
}

/// `M_{ij}` = number of paths from `a_i` to `b_j`.
pub fn path_count_matrix(n: u32) -> IntMatrix {
    let (a, b) = endpoints(n);
    IntMatrix::from_fn(a.len(), b.len(), |i, j| paths_between(a[i], b[j]))
}

/// `N(n)` by the Gessel–Viennot determinant.
pub fn count_via_determinant(n: u32) -> BigInt {
    det_exact(&path_count_matrix(n)).expect("square by construction")
}

/// Backtracking enumerator of vertex-disjoint systems for a fixed pairing of
/// sources to sinks.
struct Search<'a, F> {
    sources: Vec<LatticePoint>,
    sinks: Vec<LatticePoint>,
    origin: LatticePoint,
    width: i64,
    occupied: Vec<bool>,
    steps: Vec<Vec<Step>>,
    count: u64,
    visit: Option<&'a mut F>,
}

impl<'a, F: FnMut(&PathSystem)> Search<'a, F> {
    fn new(n: u32, pairing: &[usize], visit: Option<&'a mut F>) -> Self {
        let (a, b) = endpoints(n);
        let sinks: Vec<LatticePoint> = pairing.iter().map(|&j| b[j]).collect();
        let min_x = a.iter().map(|p| p.x).min().unwrap_or(0);
        let max_y = b.iter().map(|p| p.y).max().unwrap_or(0);
        let width = 1 - min_x;
        let height = max_y + 1;
        Search {
            steps: vec![Vec::new(); a.len()],
            sources: a,
            sinks,
            origin: LatticePoint::new(min_x, 0),
            width,
            occupied: vec![false; (width * height) as usize],
            count: 0,
            visit,
        }
    }

    fn cell(&self, p: LatticePoint) -> usize {
        ((p.y - self.origin.y) * self.width + (p.x - self.origin.x)) as usize
    }

    fn run_from(&mut self, k: usize) {
        if k == self.sources.len() {
            self.count += 1;
            if let Some(visit) = self.visit.as_mut() {
                let paths = self
                    .steps
                    .iter()
                    .zip(self.sources.iter().zip(&self.sinks))
                    .map(|(s, (&start, &end))| LatticePath {
                        start,
                        end,
                        steps: s.clone(),
                    })
                    .collect();
                visit(&PathSystem { paths });
            }
            return;
        }
        let start = self.sources[k];
        let end = self.sinks[k];
        if end.x < start.x || end.y < start.y {
            return;
        }
        let c = self.cell(start);
        if self.occupied[c] {
            return;
        }
        self.occupied[c] = true;
        self.walk(k, start);
        self.occupied[c] = false;
    }

    fn walk(&mut self, k: usize, at: LatticePoint) {
        let end = self.sinks[k];
        if at == end {
            self.run_from(k + 1);
            return;
        }
        for s in [Step::East, Step::North] {
            let next = at.step(s);
            if next.x > end.x || next.y > end.y {
                continue;
            }
            let c = self.cell(next);
            if self.occupied[c] {
                continue;
            }
            self.occupied[c] = true;
            self.steps[k].push(s);
            self.walk(k, next);
            self.steps[k].pop();
            self.occupied[c] = false;
        }
    }

    /// Fixes path 0 and enumerates the remaining ones.
    fn run_with_first(&mut self, first: &LatticePath) {
        let verts = first.vertices();
        let cells: Vec<usize> = verts.iter().map(|&p| self.cell(p)).collect();
        for &c in &cells {
            self.occupied[c] = true;
        }
        self.steps[0] = first.steps.clone();
        self.run_from(1);
        self.steps[0].clear();
        for &c in &cells {
            self.occupied[c] = false;
        }
    }
}

fn check_n(n: u32, cap: u32) -> Result<(), Error> {
    if n < 2 {
        return Err(Error::OutOfDomain("lattice paths need n >= 2"));
    }
    if n > cap {
        return Err(Error::SizeAboveCap {
            size: n as usize,
            cap: cap as usize,
        });
    }
    Ok(())
}

/// Counts the systems `a_i → b_{pairing[i]}` with no shared vertex.
///
/// `pairing` is a permutation of `0..⌊n/2⌋`.
pub fn count_for_pairing(n: u32, pairing: &[usize], cap: u32) -> Result<u64, Error> {
    check_n(n, cap)?;
    let half = (n / 2) as usize;
    let mut sorted = pairing.to_vec();
    sorted.sort_unstable();
    if sorted != (0..half).collect::<Vec<_>>() {
        return Err(Error::OutOfDomain("pairing must be a permutation of the sinks"));
    }
    let mut search = Search::<fn(&PathSystem)>::new(n, pairing, None);
    search.run_from(0);
    Ok(search.count)
}

/// `N(n)` by exhaustive enumeration, reporting each system to `visit`.
///
/// Paths are laid outermost first, and a partial system is dropped as soon
/// as it reuses a vertex.
pub fn enumerate_nonintersecting<F>(n: u32, visit: Option<&mut F>) -> Result<BigInt, Error>
where
    F: FnMut(&PathSystem),
{
    enumerate_nonintersecting_capped(n, ENUMERATION_CAP, visit)
}

pub fn enumerate_nonintersecting_capped<F>(
    n: u32,
    cap: u32,
    visit: Option<&mut F>,
) -> Result<BigInt, Error>
where
    F: FnMut(&PathSystem),
{
    check_n(n, cap)?;
    let identity: Vec<usize> = (0..(n / 2) as usize).collect();
    let mut search = Search::new(n, &identity, visit);
    search.run_from(0);
    Ok(BigInt::from(search.count))
}

/// Every path from `a_1` to `b_1`; the enumeration splits into one
/// independent task per choice, see [`count_with_first_path`].
pub fn first_path_choices(n: u32) -> Result<Vec<LatticePath>, Error> {
    check_n(n, u32::MAX)?;
    let (a, b) = endpoints(n);
    let (start, end) = (a[0], b[0]);
    let mut out = Vec::new();
    let mut steps = Vec::new();
    fn rec(at: LatticePoint, start: LatticePoint, end: LatticePoint, steps: &mut Vec<Step>, out: &mut Vec<LatticePath>) {
        if at == end {
            out.push(LatticePath {
                start,
                end,
                steps: steps.clone(),
            });
            return;
        }
        for s in [Step::East, Step::North] {
            let next = at.step(s);
            if next.x <= end.x && next.y <= end.y {
                steps.push(s);
                rec(next, start, end, steps, out);
                steps.pop();
            }
        }
    }
    rec(start, start, end, &mut steps, &mut out);
    Ok(out)
}

/// Number of non-intersecting systems whose outermost path is `first`.
pub fn count_with_first_path<F>(
    n: u32,
    first: &LatticePath,
    cap: u32,
    visit: Option<&mut F>,
) -> Result<u64, Error>
where
    F: FnMut(&PathSystem),
{
    check_n(n, cap)?;
    let (a, b) = endpoints(n);
    if first.start != a[0] || first.end != b[0] || !first.is_consistent() {
        return Err(Error::OutOfDomain("first path must join a_1 to b_1"));
    }
    let identity: Vec<usize> = (0..a.len()).collect();
    let mut search = Search::new(n, &identity, visit);
    search.run_with_first(first);
    Ok(search.count)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::{deg_o, deg_so, deg_sp};
    use crate::arith::pow2;

    fn p(x: i64, y: i64) -> LatticePoint {
        LatticePoint::new(x, y)
    }

    #[test]
    fn endpoint_coordinates() {
        assert_eq!(endpoints(2), (vec![p(0, 0)], vec![p(0, 0)]));
        assert_eq!(endpoints(4), (vec![p(-2, 0), p(0, 0)], vec![p(0, 2), p(0, 0)]));
        assert_eq!(endpoints(5), (vec![p(-3, 0), p(-1, 0)], vec![p(0, 3), p(0, 1)]));
    }

    #[test]
    fn path_count_matrices() {
        assert_eq!(path_count_matrix(5), IntMatrix::from_rows(&[[20, 4], [4, 2]]));
        assert_eq!(path_count_matrix(2), IntMatrix::from_rows(&[[1]]));
        assert_eq!(path_count_matrix(3), IntMatrix::from_rows(&[[2]]));
        assert_eq!(path_count_matrix(4), IntMatrix::from_rows(&[[6, 1], [1, 1]]));
    }

    #[test]
    fn determinant_counts() {
        assert_eq!(count_via_determinant(5), BigInt::from(24));
        assert_eq!(count_via_determinant(2), BigInt::from(1));
        assert_eq!(count_via_determinant(9), BigInt::from(769408));
    }

    #[test]
    fn enumeration_small() {
        let none: Option<&mut fn(&PathSystem)> = None;
        assert_eq!(enumerate_nonintersecting(3, none).unwrap(), BigInt::from(2));
        let mut systems = Vec::new();
        let mut collect = |s: &PathSystem| systems.push(s.clone());
        assert_eq!(enumerate_nonintersecting(5, Some(&mut collect)).unwrap(), BigInt::from(24));
        assert_eq!(systems.len(), 24);
        for s in &systems {
            assert!(s.is_vertex_disjoint());
            assert!(s.has_endpoints_for(5));
        }
        let mut sorted: Vec<_> = systems.iter().map(PathSystem::step_strings).collect();
        sorted.sort();
        sorted.dedup();
        assert_eq!(sorted.len(), 24);
    }

    #[test]
    fn enumeration_matches_determinant() {
        for n in 2..=8 {
            let none: Option<&mut fn(&PathSystem)> = None;
            let count = enumerate_nonintersecting(n, none).unwrap();
            assert_eq!(count, count_via_determinant(n), "n = {n}");
            assert_eq!(pow2(u64::from(n - 1)) * &count, deg_so(n));
            assert_eq!(pow2(u64::from(n)) * &count, deg_o(n));
        }
        assert_eq!(count_via_determinant(7), BigInt::from(1744));
        for r in 1..=4 {
            assert_eq!(count_via_determinant(2 * r + 1), deg_sp(r));
        }
    }

    #[test]
    fn empty_path_at_origin() {
        let mut systems = Vec::new();
        let mut collect = |s: &PathSystem| systems.push(s.step_strings());
        enumerate_nonintersecting(2, Some(&mut collect)).unwrap();
        assert_eq!(systems, vec![vec![String::new()]]);
    }

    #[test]
    fn nonidentity_pairings_never_disjoint() {
        for n in 4..=6 {
            let half = (n / 2) as usize;
            let mut perm: Vec<usize> = (0..half).collect();
            // all permutations of a tiny set by repeated next-permutation
            loop {
                let count = count_for_pairing(n, &perm, 9).unwrap();
                let identity = perm.iter().enumerate().all(|(i, &j)| i == j);
                if !identity {
                    assert_eq!(count, 0, "n = {n}, pairing {perm:?}");
                }
                let Some(i) = (0..half.saturating_sub(1)).rev().find(|&i| perm[i] < perm[i + 1]) else {
                    break;
                };
                let j = (i + 1..half).rev().find(|&j| perm[j] > perm[i]).unwrap();
                perm.swap(i, j);
                perm[i + 1..].reverse();
            }
        }
    }

    #[test]
    fn partition_by_first_path_sums_to_total() {
        for n in 3..=7 {
            let total: u64 = first_path_choices(n)
                .unwrap()
                .iter()
                .map(|first| {
                    count_with_first_path::<fn(&PathSystem)>(n, first, 9, None).unwrap()
                })
                .sum();
            assert_eq!(BigInt::from(total), count_via_determinant(n));
        }
    }

    #[test]
    fn caps_and_domain() {
        let none: Option<&mut fn(&PathSystem)> = None;
        assert_eq!(
            enumerate_nonintersecting(10, none),
            Err(Error::SizeAboveCap { size: 10, cap: 9 })
        );
        assert!(count_for_pairing(1, &[], 9).is_err());
        assert!(count_for_pairing(5, &[0, 0], 9).is_err());
    }

    #[test]
    fn disjointness_checker_rejects_shared_vertex() {
        let a = LatticePath {
            start: p(-1, 0),
            end: p(0, 1),
            steps: vec![Step::East, Step::North],
        };
        let b = LatticePath {
            start: p(0, 0),
            end: p(0, 0),
            steps: vec![],
        };
        assert!(!PathSystem { paths: vec![a.clone(), b] }.is_vertex_disjoint());
        assert!(PathSystem { paths: vec![a] }.is_vertex_disjoint());
    }
}
