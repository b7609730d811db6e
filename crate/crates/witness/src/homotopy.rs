//! Concrete homotopies: the gamma-trick convex homotopy between two
//! polynomial systems, and the parameter homotopy that moves a slice.

use nalgebra::DMatrix;
use rayon::prelude::*;

use crate::poly::{Polynomial, PolySystem};
use crate::rng::{substream, unit_circle, Stream};
use crate::slice::Slice;
use crate::tracker::{track, Homotopy, PathResult, PathStatus, TrackerSettings};
use crate::{Error, C64};

/// `H(x,t) = (1−t)·F(x) + t·γ·G(x)`.
pub struct GammaHomotopy<'a> {
    target: &'a PolySystem,
    start: &'a PolySystem,
    gamma: C64,
}

impl<'a> GammaHomotopy<'a> {
    pub fn new(start: &'a PolySystem, target: &'a PolySystem, gamma: C64) -> Result<Self, Error> {
        if start.nvars() != target.nvars() || start.len() != target.len() {
            return Err(Error::Shape("start and target systems differ in shape"));
        }
        if target.len() != target.nvars() {
            return Err(Error::Shape("homotopy systems must be square"));
        }
        Ok(GammaHomotopy { target, start, gamma })
    }
}

impl Homotopy for GammaHomotopy<'_> {
    fn nvars(&self) -> usize {
        self.target.nvars()
    }

    fn evaluate(&self, x: &[C64], t: f64, value: &mut [C64], jac: &mut DMatrix<C64>, dt: &mut [C64]) {
        let a = C64::new(1.0 - t, 0.0);
        let b = self.gamma * t;
        jac.fill(C64::default());
        // `value` receives F and `dt` receives G before they are combined
        self.target.accumulate(x, a, value, jac);
        self.start.accumulate(x, b, dt, jac);
        for (v, d) in value.iter_mut().zip(dt.iter_mut()) {
            let (f, g) = (*v, *d);
            *v = a * f + b * g;
            *d = self.gamma * g - f;
        }
    }
}

/// Moves the linear part of `[Q(x); L(x)]` from one slice to another:
/// `L_t = γ·t·L_from + (1−t)·L_to`.
///
/// Scaling a form does not move its zero set, so `γ` leaves both ends
/// unchanged while steering the path off the slices where points escape.
pub struct SliceHomotopy<'a> {
    quadrics: &'a PolySystem,
    from: &'a Slice,
    to: &'a Slice,
    gamma: C64,
}

impl<'a> SliceHomotopy<'a> {
    pub fn new(quadrics: &'a PolySystem, from: &'a Slice, to: &'a Slice, gamma: C64) -> Result<Self, Error> {
        let nv = from.n() * from.n();
        if from.n() != to.n() || quadrics.nvars() != nv || quadrics.len() + from.forms() != nv {
            return Err(Error::Shape("slice homotopy needs matching square shapes"));
        }
        Ok(SliceHomotopy {
            quadrics,
            from,
            to,
            gamma,
        })
    }
}

impl Homotopy for SliceHomotopy<'_> {
    fn nvars(&self) -> usize {
        self.quadrics.nvars()
    }

    fn evaluate(&self, x: &[C64], t: f64, value: &mut [C64], jac: &mut DMatrix<C64>, dt: &mut [C64]) {
        let nv = self.nvars();
        let q = self.quadrics.len();
        jac.fill(C64::default());
        self.quadrics.accumulate(x, C64::new(1.0, 0.0), &mut value[..q], jac);
        dt[..q].fill(C64::default());
        let wf = self.gamma * t;
        for k in 0..self.from.forms() {
            let (a, b) = (self.from.row(k), self.to.row(k));
            let mut lf = a[nv];
            let mut lt = b[nv];
            for j in 0..nv {
                lf += a[j] * x[j];
                lt += b[j] * x[j];
                jac[(q + k, j)] = a[j] * wf + b[j] * (1.0 - t);
            }
            value[q + k] = lf * wf + lt * (1.0 - t);
            dt[q + k] = lf * self.gamma - lt;
        }
    }
}

/// `x_i^{d_i} − 1` for each degree.
pub fn total_degree_start(degrees: &[u32]) -> PolySystem {
    let n = degrees.len();
    let polys = degrees
        .iter()
        .enumerate()
        .map(|(i, &d)| {
            let mut e = vec![0u32; n];
            e[i] = d;
            Polynomial::from_terms([(e, C64::new(1.0, 0.0)), (vec![0; n], C64::new(-1.0, 0.0))])
        })
        .collect();
    PolySystem::new(n, polys).expect("consistent by construction")
}

/// Start solution number `index` in mixed radix over the roots of unity.
pub fn total_degree_start_point(degrees: &[u32], mut index: u128) -> Vec<C64> {
    degrees
        .iter()
        .map(|&d| {
            let k = (index % u128::from(d)) as f64;
            index /= u128::from(d);
            C64::from_polar(1.0, std::f64::consts::TAU * k / f64::from(d))
        })
        .collect()
}

/// Outcome of tracking every path of a total-degree homotopy.
#[derive(Debug, Clone)]
pub struct TotalDegreeRun {
    pub paths: usize,
    pub results: Vec<PathResult>,
}

impl TotalDegreeRun {
    pub fn count(&self, status: PathStatus) -> usize {
        self.results.iter().filter(|r| r.status == status).count()
    }

    /// Converged endpoints, in path order.
    pub fn endpoints(&self) -> Vec<Vec<C64>> {
        self.results.iter().filter_map(|r| r.endpoint.clone()).collect()
    }
}

/// Tracks all Bézout-many paths from `x_i^{d_i} = 1` to `target`.
///
/// The start system is multiplied by a random unit complex number drawn from
/// the settings seed.
pub fn run_total_degree(target: &PolySystem, settings: &TrackerSettings) -> Result<TotalDegreeRun, Error> {
    settings.validate()?;
    if target.len() != target.nvars() {
        return Err(Error::Shape("total-degree homotopy needs a square system"));
    }
    let degrees = target.degrees();
    let paths = target.bezout_bound();
    if paths > 1 << 24 {
        return Err(Error::Domain("Bézout bound too large to track"));
    }
    let start = total_degree_start(&degrees);
    let gamma = unit_circle(&mut substream(settings.seed, Stream::Gamma, 0));
    let h = GammaHomotopy::new(&start, target, gamma)?;
    let results: Vec<PathResult> = (0..paths)
        .into_par_iter()
        .map(|k| track(&h, &total_degree_start_point(&degrees, k), settings))
        .collect();
    Ok(TotalDegreeRun {
        paths: paths as usize,
        results,
    })
}
