//! Witness sets for O(n) and SO(n): solving, splitting, monodromy, slice
//! moves and the real-point census.

use std::cmp::Ordering;
use std::collections::BTreeMap;

use log::{debug, warn};
use nalgebra::DMatrix;
use rand::Rng;
use rayon::prelude::*;

use crate::homotopy::{run_total_degree, SliceHomotopy};
use crate::poly::{orthogonality_system, PolySystem};
use crate::rng::{substream, unit_circle, Stream};
use crate::slice::{random_disk_slice_from, random_slice, random_slice_from, Slice};
use crate::tracker::{track, PathStatus, TrackerSettings};
use crate::{Error, C64};

/// Idle monodromy loops after which population stops.
pub const IDLE_LOOPS: usize = 10;
/// Hard cap on monodromy loops.
pub const MAX_LOOPS: usize = 500;
/// Imaginary-part tolerance used when counting real points.
pub const REAL_TOLERANCE: f64 = 1e-3;
/// Points with `||det| − 1|` above this are flagged by [`split_components`].
pub const DET_TOLERANCE: f64 = 0.1;

/// Points of `system ∩ slice`, sorted and pairwise separated.
#[derive(Debug, Clone, PartialEq)]
pub struct WitnessSet {
    pub system: PolySystem,
    pub slice: Slice,
    pub points: Vec<Vec<C64>>,
    pub tolerance: f64,
}

impl WitnessSet {
    /// Witness set on the orthogonality system for `slice`.
    pub fn orthogonal(slice: Slice, points: Vec<Vec<C64>>, tolerance: f64) -> Self {
        WitnessSet {
            system: orthogonality_system(slice.n()),
            slice,
            points,
            tolerance,
        }
    }

    pub fn n(&self) -> usize {
        self.slice.n()
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    /// Max residual of `point` on the system and the slice.
    pub fn residual_at(&self, point: &[C64]) -> f64 {
        self.system.residual(point).max(self.slice.residual(point))
    }

    /// Largest residual over all points; `0` when empty.
    pub fn max_residual(&self) -> f64 {
        self.points
            .iter()
            .map(|p| self.residual_at(p))
            .fold(0.0, f64::max)
    }

    /// Checks both invariants: residuals within `tolerance`, points separated.
    pub fn validate(&self, separation: f64) -> Result<(), Error> {
        let nv = self.n() * self.n();
        if self.points.iter().any(|p| p.len() != nv) {
            return Err(Error::Shape("witness points must have n² coordinates"));
        }
        if self.max_residual() > self.tolerance {
            return Err(Error::Domain("witness point residual above tolerance"));
        }
        if dedupe(self.points.clone(), separation).len() != self.points.len() {
            return Err(Error::Domain("witness points are not separated"));
        }
        Ok(())
    }
}

/// Lexicographic order on coordinates, real part before imaginary part.
pub fn lex_cmp(a: &[C64], b: &[C64]) -> Ordering {
    for (x, y) in a.iter().zip(b) {
        let o = x.re.total_cmp(&y.re).then(x.im.total_cmp(&y.im));
        if o != Ordering::Equal {
            return o;
        }
    }
    a.len().cmp(&b.len())
}

fn distance(a: &[C64], b: &[C64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y).norm()).fold(0.0, f64::max)
}

/// Sorts lexicographically and drops points within `separation` (max-norm)
/// of an earlier kept point.
pub fn dedupe(mut points: Vec<Vec<C64>>, separation: f64) -> Vec<Vec<C64>> {
    points.sort_by(|a, b| lex_cmp(a, b));
    let mut kept: Vec<Vec<C64>> = Vec::with_capacity(points.len());
    for p in points {
        if kept.iter().all(|q| distance(q, &p) > separation) {
            kept.push(p);
        }
    }
    kept
}

/// Result of [`total_degree_solve`].
#[derive(Debug, Clone)]
pub struct SolveReport {
    pub witness: WitnessSet,
    pub paths: usize,
    pub converged: usize,
    pub diverged: usize,
    pub failed: usize,
    /// More than 1% of paths failed.
    pub degraded: bool,
}

/// All points of O(n) ∩ `slice` by a total-degree homotopy.
pub fn total_degree_solve(n: usize, slice: &Slice, settings: &TrackerSettings) -> Result<SolveReport, Error> {
    if !(2..=4).contains(&n) {
        return Err(Error::Domain("total-degree solve supports 2 <= n <= 4"));
    }
    if slice.n() != n {
        return Err(Error::Shape("slice size differs from n"));
    }
    let quadrics = orthogonality_system(n);
    let target = quadrics.clone().join(&slice.as_system())?;
    let run = run_total_degree(&target, settings)?;
    let failed = run.count(PathStatus::TrackingFailed);
    let points = dedupe(run.endpoints(), settings.separation_tolerance);
    debug!("n = {n}: {} paths, {} distinct endpoints", run.paths, points.len());
    Ok(SolveReport {
        paths: run.paths,
        converged: run.count(PathStatus::Converged),
        diverged: run.count(PathStatus::DivergedToInfinity),
        failed,
        degraded: failed * 100 > run.paths,
        witness: WitnessSet {
            system: quadrics,
            slice: slice.clone(),
            points,
            tolerance: settings.endpoint_tolerance,
        },
    })
}

/// Points of a witness set partitioned by the sign of `Re det`.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Components {
    pub so_points: Vec<Vec<C64>>,
    pub other_points: Vec<Vec<C64>>,
    /// Points whose `|det|` is not within [`DET_TOLERANCE`] of 1.
    pub suspect: usize,
}

/// Determinant of a flattened row-major `n × n` matrix.
pub fn determinant(n: usize, point: &[C64]) -> C64 {
    DMatrix::from_row_slice(n, n, point).determinant()
}

/// Splits into SO(n) (`Re det > 0`) and its complement in O(n).
pub fn split_components(ws: &WitnessSet) -> Components {
    let n = ws.n();
    let mut out = Components::default();
    for p in &ws.points {
        let d = determinant(n, p);
        if (d.norm() - 1.0).abs() > DET_TOLERANCE {
            warn!("witness point with |det| = {}", d.norm());
            out.suspect += 1;
        }
        if d.re > 0.0 {
            out.so_points.push(p.clone());
        } else {
            out.other_points.push(p.clone());
        }
    }
    out
}

/// Flattened `n × n` identity.
pub fn identity_point(n: usize) -> Vec<C64> {
    (0..n * n)
        .map(|k| C64::new(if k / n == k % n { 1.0 } else { 0.0 }, 0.0))
        .collect()
}

/// A random slice for `seed`, shifted to pass through the identity.
pub fn slice_through_identity(n: usize, seed: u64) -> Slice {
    random_slice(n, seed, false).through(&identity_point(n))
}

/// Tracks along consecutive slices, dropping a point as soon as it fails.
/// Each segment gets its own `γ` from `rng`.
fn track_chain<R: Rng>(
    quadrics: &PolySystem,
    chain: &[&Slice],
    points: &[Vec<C64>],
    settings: &TrackerSettings,
    rng: &mut R,
) -> Result<Vec<Option<Vec<C64>>>, Error> {
    let h: Vec<SliceHomotopy<'_>> = chain
        .windows(2)
        .map(|w| SliceHomotopy::new(quadrics, w[0], w[1], unit_circle(rng)))
        .collect::<Result<_, _>>()?;
    Ok(points
        .par_iter()
        .map(|p| {
            h.iter().try_fold(p.clone(), |x, seg| track(seg, &x, settings).endpoint)
        })
        .collect())
}

/// Result of [`monodromy_populate`].
#[derive(Debug, Clone)]
pub struct MonodromyReport {
    pub witness: WitnessSet,
    pub loops: usize,
    /// Paths lost to tracking failure over all loops.
    pub failures: usize,
    /// Stopped by the idle rule rather than the loop cap.
    pub settled: bool,
}

/// Populates the SO(n) witness set on `slice` from one known point.
///
/// Each loop tracks every known point around a triangle of slices (base,
/// two fresh random slices, base) and keeps new endpoints. Population stops
/// after [`IDLE_LOOPS`] consecutive loops without a new point.
pub fn monodromy_populate(
    n: usize,
    seed_point: &[C64],
    slice: &Slice,
    settings: &TrackerSettings,
) -> Result<MonodromyReport, Error> {
    settings.validate()?;
    if slice.n() != n || seed_point.len() != n * n {
        return Err(Error::Shape("seed point and slice must match n"));
    }
    let quadrics = orthogonality_system(n);
    let seed_residual = quadrics.residual(seed_point).max(slice.residual(seed_point));
    if seed_residual > settings.endpoint_tolerance.max(1e-8) {
        return Err(Error::Domain("seed point does not lie on SO(n) ∩ slice"));
    }
    let mut points = vec![seed_point.to_vec()];
    let (mut idle, mut loops, mut failures) = (0, 0, 0);
    while idle < IDLE_LOOPS && loops < MAX_LOOPS {
        let mut rng = substream(settings.seed, Stream::Loop, loops as u64);
        let a = random_disk_slice_from(n, &mut rng, settings.seed);
        let b = random_disk_slice_from(n, &mut rng, settings.seed);
        let ends = track_chain(&quadrics, &[slice, &a, &b, slice], &points, settings, &mut rng)?;
        failures += ends.iter().filter(|e| e.is_none()).count();
        let before = points.len();
        points.extend(ends.into_iter().flatten());
        points = dedupe(points, settings.separation_tolerance);
        loops += 1;
        if points.len() > before {
            idle = 0;
        } else {
            idle += 1;
        }
        debug!("monodromy loop {loops}: {} points", points.len());
    }
    Ok(MonodromyReport {
        witness: WitnessSet {
            system: quadrics,
            slice: slice.clone(),
            points,
            tolerance: settings.endpoint_tolerance,
        },
        loops,
        failures,
        settled: idle >= IDLE_LOOPS,
    })
}

/// Result of [`move_slice`].
#[derive(Debug, Clone)]
pub struct MoveReport {
    pub witness: WitnessSet,
    /// Paths that failed or collided with another path.
    pub failures: usize,
}

impl MoveReport {
    pub fn is_clean(&self) -> bool {
        self.failures == 0
    }
}

/// Stable 48-bit digest of a slice, used to pick its detour.
fn slice_digest(s: &Slice) -> u64 {
    let mut h: u64 = 0xcbf2_9ce4_8422_2325;
    for c in s.coefficients() {
        for bits in [c.re.to_bits(), c.im.to_bits()] {
            h ^= bits;
            h = h.wrapping_mul(0x0100_0000_01b3);
        }
    }
    h & ((1 << 48) - 1)
}

/// Moves the witness points to `target`.
///
/// The slice coefficients are interpolated linearly; a real target is
/// reached through a random complex intermediate slice.
pub fn move_slice(ws: &WitnessSet, target: &Slice, settings: &TrackerSettings) -> Result<MoveReport, Error> {
    move_slice_indexed(ws, target, settings, slice_digest(target))
}

fn move_slice_indexed(
    ws: &WitnessSet,
    target: &Slice,
    settings: &TrackerSettings,
    detour_index: u64,
) -> Result<MoveReport, Error> {
    if target.n() != ws.n() {
        return Err(Error::Shape("target slice size differs from witness set"));
    }
    if *target == ws.slice {
        return Ok(MoveReport {
            witness: ws.clone(),
            failures: 0,
        });
    }
    let mut rng = substream(settings.seed, Stream::Detour, detour_index);
    let detour;
    let chain: Vec<&Slice> = if target.is_real() {
        detour = random_slice_from(ws.n(), &mut rng, false, settings.seed);
        vec![&ws.slice, &detour, target]
    } else {
        vec![&ws.slice, target]
    };
    let ends = track_chain(&ws.system, &chain, &ws.points, settings, &mut rng)?;
    let landed: Vec<Vec<C64>> = ends.into_iter().flatten().collect();
    let lost = ws.points.len() - landed.len();
    let points = dedupe(landed, settings.separation_tolerance);
    let collided = ws.points.len() - lost - points.len();
    Ok(MoveReport {
        witness: WitnessSet {
            system: ws.system.clone(),
            slice: target.clone(),
            points,
            tolerance: ws.tolerance,
        },
        failures: lost + collided,
    })
}

/// Points whose every coordinate has `|Im| < tol`.
pub fn real_count(ws: &WitnessSet, tol: f64) -> usize {
    ws.points
        .iter()
        .filter(|p| p.iter().all(|c| c.im.abs() < tol))
        .count()
}

/// Frequency table of real-point counts over random real slices.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CensusReport {
    pub n: usize,
    pub samples: usize,
    /// Points in the base witness set, the largest possible real count.
    pub degree: usize,
    /// real count → number of slices with that count.
    pub histogram: BTreeMap<usize, u64>,
    /// Slices where some path failed.
    pub fails: u64,
}

impl CensusReport {
    pub fn frequency(&self, real: usize) -> u64 {
        self.histogram.get(&real).copied().unwrap_or(0)
    }
}

/// Moves `base` to `samples` random real slices and tallies real points.
///
/// Sample `i` uses the census sub-stream `i` of `seed`, so the histogram
/// does not depend on the number of worker threads.
pub fn real_census(
    n: usize,
    base: &WitnessSet,
    samples: usize,
    seed: u64,
    settings: &TrackerSettings,
) -> Result<CensusReport, Error> {
    if samples == 0 {
        return Err(Error::Domain("census needs at least one sample"));
    }
    if base.n() != n {
        return Err(Error::Shape("base witness set size differs from n"));
    }
    let expected = base.len();
    let outcomes: Vec<Option<usize>> = (0..samples)
        .into_par_iter()
        .map(|i| {
            let mut rng = substream(seed, Stream::Census, i as u64);
            let target = random_slice_from(n, &mut rng, true, seed);
            let moved = move_slice_indexed(base, &target, settings, i as u64).ok()?;
            (moved.is_clean() && moved.witness.len() == expected)
                .then(|| real_count(&moved.witness, REAL_TOLERANCE))
        })
        .collect();
    let mut histogram = BTreeMap::new();
    let mut fails = 0;
    for o in outcomes {
        match o {
            Some(k) => *histogram.entry(k).or_insert(0) += 1,
            None => fails += 1,
        }
    }
    Ok(CensusReport {
        n,
        samples,
        degree: expected,
        histogram,
        fails,
    })
}

/// The SO(n) witness set on a slice through the identity, by monodromy.
pub fn so_witness_by_monodromy(n: usize, seed: u64, settings: &TrackerSettings) -> Result<MonodromyReport, Error> {
    let slice = slice_through_identity(n, seed);
    let settings = settings.clone().with_seed(seed);
    monodromy_populate(n, &identity_point(n), &slice, &settings)
}

/// The SO(n) witness set on a random slice, from a total-degree solve.
pub fn so_witness_by_total_degree(
    n: usize,
    seed: u64,
    settings: &TrackerSettings,
) -> Result<(SolveReport, Components), Error> {
    let slice = random_slice(n, seed, false);
    let report = total_degree_solve(n, &slice, &settings.clone().with_seed(seed))?;
    let parts = split_components(&report.witness);
    Ok((report, parts))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn settings(seed: u64) -> TrackerSettings {
        TrackerSettings::default().with_seed(seed)
    }

    #[test]
    fn dedupe_merges_close_points() {
        let a = vec![C64::new(1.0, 0.0), C64::new(0.0, 1.0)];
        let b = vec![C64::new(1.0 + 1e-9, 0.0), C64::new(0.0, 1.0)];
        let c = vec![C64::new(-1.0, 0.0), C64::new(0.0, 1.0)];
        let out = dedupe(vec![a.clone(), c.clone(), b], 1e-6);
        assert_eq!(out.len(), 2);
        assert_eq!(out[0], c);
    }

    #[test]
    fn real_count_of_fabricated_points() {
        let slice = random_slice(2, 1, false);
        let pts = vec![identity_point(2), vec![C64::new(0.5, 0.0); 4]];
        let ws = WitnessSet::orthogonal(slice, pts.clone(), 1e-9);
        assert_eq!(real_count(&ws, 1e-3), 2);
        let mut pts = pts;
        pts[1][3].im = 0.01;
        let ws = WitnessSet::orthogonal(random_slice(2, 1, false), pts, 1e-9);
        assert_eq!(real_count(&ws, 1e-3), 1);
    }

    #[test]
    fn identity_is_in_so_component() {
        let slice = slice_through_identity(3, 4);
        let ws = WitnessSet::orthogonal(slice, vec![identity_point(3)], 1e-9);
        let parts = split_components(&ws);
        assert_eq!(parts.so_points.len(), 1);
        assert_eq!(parts.suspect, 0);
    }

    #[test]
    fn total_degree_n2() {
        let (report, parts) = so_witness_by_total_degree(2, 3, &TrackerSettings::default()).unwrap();
        assert_eq!(report.paths, 8);
        assert_eq!(report.witness.len(), 4);
        assert_eq!((parts.so_points.len(), parts.other_points.len()), (2, 2));
        assert!(report.witness.max_residual() < 1e-9);
    }

    #[test]
    fn monodromy_n2() {
        let r = so_witness_by_monodromy(2, 5, &TrackerSettings::default()).unwrap();
        assert!(r.settled);
        assert_eq!(r.witness.len(), 2);
    }

    #[test]
    fn move_to_same_slice_is_identity() {
        let r = so_witness_by_monodromy(2, 6, &TrackerSettings::default()).unwrap();
        let moved = move_slice(&r.witness, &r.witness.slice.clone(), &settings(1)).unwrap();
        assert_eq!(moved.witness.points, r.witness.points);
    }

    #[test]
    fn rejects_bad_inputs() {
        let s = random_slice(5, 1, false);
        assert!(total_degree_solve(5, &s, &TrackerSettings::default()).is_err());
        let s = random_slice(2, 1, false);
        assert!(monodromy_populate(2, &identity_point(2), &s, &TrackerSettings::default()).is_err());
        let ws = WitnessSet::orthogonal(s, vec![], 1e-9);
        assert!(real_census(2, &ws, 0, 1, &TrackerSettings::default()).is_err());
    }
}
