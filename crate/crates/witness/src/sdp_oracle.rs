//! Numerical count of the critical points of the factorized semidefinite
//! program `min C•RRᵀ` subject to `A_i•RRᵀ = b_i`.
//!
//! The unknowns are the `n × r` entries of `R` (row-major) followed by the
//! `m` multipliers `y`. Critical points solve
//!
//! ```text
//! (C − Σ y_i A_i) R Rᵀ = 0        (n² cubics)
//! A_i • R Rᵀ = b_i                (m quadrics)
//! ```
//!
//! Every solution comes with its orbit `R·O(r)`, a curve once `r ≥ 2`, so
//! `C(r,2)` random affine forms cut the orbits down to finitely many points.
//! The cubics are then replaced by `nr − C(r,2)` random combinations of
//! them to get a square system for the total-degree homotopy; endpoints are
//! kept only if they satisfy every original cubic and `R` has rank `r`.

use log::debug;
use nalgebra::DMatrix;
use rand::Rng;

use crate::homotopy::run_total_degree;
use crate::poly::{Polynomial, PolySystem};
use crate::rng::{substream, unit_disk, Stream};
use crate::tracker::{PathStatus, TrackerSettings};
use crate::witness::dedupe;
use crate::{Error, C64};

/// Largest `nr + m` accepted.
pub const MAX_UNKNOWNS: usize = 10;
/// Residual on the unsquared system below which an endpoint is a solution.
pub const FILTER_TOLERANCE: f64 = 1e-6;

/// A random instance: symmetric rational `C`, `A_i` and a positive rational `b`.
#[derive(Debug, Clone, PartialEq)]
pub struct SdpInstance {
    pub n: usize,
    pub c: Vec<Vec<f64>>,
    pub a: Vec<Vec<Vec<f64>>>,
    pub b: Vec<f64>,
}

/// A rational `p/q` with `|p| ≤ 99` and `1 ≤ q ≤ 16`.
fn rational<R: Rng>(rng: &mut R) -> f64 {
    f64::from(rng.random_range(-99i32..=99)) / f64::from(rng.random_range(1i32..=16))
}

fn symmetric<R: Rng>(n: usize, rng: &mut R) -> Vec<Vec<f64>> {
    let mut m = vec![vec![0.0; n]; n];
    for i in 0..n {
        for j in i..n {
            let v = rational(rng);
            m[i][j] = v;
            m[j][i] = v;
        }
    }
    m
}

impl SdpInstance {
    pub fn random(m: usize, n: usize, seed: u64) -> Self {
        let mut rng = substream(seed, Stream::SdpData, 0);
        let c = symmetric(n, &mut rng);
        let a = (0..m).map(|_| symmetric(n, &mut rng)).collect();
        let b = (0..m)
            .map(|_| f64::from(rng.random_range(1i32..=99)) / f64::from(rng.random_range(1i32..=16)))
            .collect();
        SdpInstance { n, c, a, b }
    }

    pub fn m(&self) -> usize {
        self.a.len()
    }
}

/// Variable layout and polynomial builders for rank `r`.
struct Layout {
    n: usize,
    r: usize,
    m: usize,
}

impl Layout {
    fn nvars(&self) -> usize {
        self.n * self.r + self.m
    }

    fn unit(&self, vars: &[usize]) -> Vec<u32> {
        let mut e = vec![0u32; self.nvars()];
        for &v in vars {
            e[v] += 1;
        }
        e
    }

    fn rv(&self, row: usize, col: usize) -> usize {
        row * self.r + col
    }

    fn yv(&self, l: usize) -> usize {
        self.n * self.r + l
    }

    /// Terms of `(RRᵀ)_{kj} = Σ_s R_ks R_js` times `coeff`, with extra factors.
    fn gram_terms(&self, k: usize, j: usize, coeff: f64, extra: &[usize], out: &mut Vec<(Vec<u32>, C64)>) {
        for s in 0..self.r {
            let mut vars = vec![self.rv(k, s), self.rv(j, s)];
            vars.extend_from_slice(extra);
            out.push((self.unit(&vars), C64::new(coeff, 0.0)));
        }
    }

    /// Entry `(i, j)` of `(C − Σ y_l A_l) R Rᵀ`.
    fn cubic(&self, inst: &SdpInstance, i: usize, j: usize) -> Polynomial {
        let mut terms = Vec::new();
        for k in 0..self.n {
            if inst.c[i][k] != 0.0 {
                self.gram_terms(k, j, inst.c[i][k], &[], &mut terms);
            }
            for (l, a) in inst.a.iter().enumerate() {
                if a[i][k] != 0.0 {
                    self.gram_terms(k, j, -a[i][k], &[self.yv(l)], &mut terms);
                }
            }
        }
        Polynomial::from_terms(terms)
    }

    /// `A_l • R Rᵀ − b_l`.
    fn quadric(&self, inst: &SdpInstance, l: usize) -> Polynomial {
        let mut terms = vec![(self.unit(&[]), C64::new(-inst.b[l], 0.0))];
        for k in 0..self.n {
            for j in 0..self.n {
                if inst.a[l][k][j] != 0.0 {
                    self.gram_terms(j, k, inst.a[l][k][j], &[], &mut terms);
                }
            }
        }
        Polynomial::from_terms(terms)
    }
}

fn combine(polys: &[Polynomial], weights: &[C64]) -> Polynomial {
    Polynomial::from_terms(polys.iter().zip(weights).flat_map(|(p, &w)| {
        p.terms()
            .iter()
            .map(move |t| (t.exponents.clone(), t.coeff * w))
    }))
}

/// Whether the `n × r` block of `point` has full column rank `r`.
fn has_rank(point: &[C64], n: usize, r: usize) -> bool {
    let sv = DMatrix::from_row_slice(n, r, &point[..n * r]).singular_values();
    sv.min() > RANK_TOLERANCE * (1.0 + sv.max())
}

/// Relative singular value below which `R` counts as rank deficient.
pub const RANK_TOLERANCE: f64 = 1e-6;

/// Result of [`sdp_critical_solve`].
#[derive(Debug, Clone)]
pub struct SdpOracleReport {
    pub count: usize,
    pub paths: usize,
    pub converged: usize,
    pub failed: usize,
    /// More than 1% of paths failed.
    pub degraded: bool,
    /// Distinct solutions `(R, y)`, sorted.
    pub solutions: Vec<Vec<C64>>,
}

/// Counts the critical points of a random rank-`r` instance.
pub fn sdp_critical_solve(
    m: usize,
    n: usize,
    r: usize,
    seed: u64,
    settings: &TrackerSettings,
) -> Result<SdpOracleReport, Error> {
    if r == 0 || r > n {
        return Err(Error::Domain("rank must satisfy 1 <= r <= n"));
    }
    if n * r + m > MAX_UNKNOWNS {
        return Err(Error::Domain("oracle supports nr + m <= 10 unknowns"));
    }
    let inst = SdpInstance::random(m, n, seed);
    let layout = Layout { n, r, m };
    let nvars = layout.nvars();
    let cubics: Vec<Polynomial> = (0..n)
        .flat_map(|i| (0..n).map(move |j| (i, j)))
        .map(|(i, j)| layout.cubic(&inst, i, j))
        .collect();
    let quadrics: Vec<Polynomial> = (0..m).map(|l| layout.quadric(&inst, l)).collect();

    let mut rng = substream(seed, Stream::SdpSquaring, 0);
    let fiber_cuts = r * (r - 1) / 2;
    let slices: Vec<Polynomial> = (0..fiber_cuts)
        .map(|_| {
            let coeffs: Vec<C64> = (0..nvars).map(|_| unit_disk(&mut rng)).collect();
            Polynomial::linear(&coeffs, unit_disk(&mut rng))
        })
        .collect();
    let combos: Vec<Polynomial> = (0..n * r - fiber_cuts)
        .map(|_| {
            let w: Vec<C64> = (0..cubics.len()).map(|_| unit_disk(&mut rng)).collect();
            combine(&cubics, &w)
        })
        .collect();

    let square = PolySystem::new(
        nvars,
        combos.into_iter().chain(quadrics.iter().cloned()).chain(slices.iter().cloned()).collect(),
    )?;
    let full = PolySystem::new(nvars, cubics.into_iter().chain(quadrics).chain(slices).collect())?;

    let run = run_total_degree(&square, &settings.clone().with_seed(seed))?;
    let kept: Vec<Vec<C64>> = run
        .endpoints()
        .into_iter()
        .filter(|p| full.residual(p) < FILTER_TOLERANCE && has_rank(p, n, r))
        .collect();
    let solutions = dedupe(kept, settings.separation_tolerance);
    let failed = run.count(PathStatus::TrackingFailed);
    debug!("sdp ({m},{n},{r}): {} paths, {} solutions", run.paths, solutions.len());
    Ok(SdpOracleReport {
        count: solutions.len(),
        paths: run.paths,
        converged: run.count(PathStatus::Converged),
        failed,
        degraded: failed * 100 > run.paths,
        solutions,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn instance_is_symmetric_and_deterministic() {
        let a = SdpInstance::random(2, 3, 9);
        assert_eq!(a, SdpInstance::random(2, 3, 9));
        for mat in std::iter::once(&a.c).chain(&a.a) {
            for i in 0..3 {
                for j in 0..3 {
                    assert_eq!(mat[i][j], mat[j][i]);
                }
            }
        }
        assert!(a.b.iter().all(|&v| v != 0.0));
    }

    #[test]
    fn bezout_bound_of_squared_system() {
        let r = sdp_critical_solve(1, 2, 1, 1, &TrackerSettings::default()).unwrap();
        assert_eq!(r.paths, 18);
    }

    #[test]
    fn small_instance_counts_four() {
        let r = sdp_critical_solve(1, 2, 1, 2, &TrackerSettings::default()).unwrap();
        assert_eq!(r.count, 4);
        // ±R pairs share y
        for s in &r.solutions {
            let neg: Vec<C64> = s[..2].iter().map(|v| -v).chain(s[2..].iter().copied()).collect();
            assert!(r.solutions.iter().any(|t| t.iter().zip(&neg).all(|(a, b)| (a - b).norm() < 1e-6)));
        }
    }

    #[test]
    fn zero_delta_gives_no_points() {
        // δ(0,2,1) = 0
        let r = sdp_critical_solve(0, 2, 1, 3, &TrackerSettings::default()).unwrap();
        assert_eq!(r.count, 0);
    }

    #[test]
    fn rejects_large_instances() {
        assert!(sdp_critical_solve(3, 4, 2, 0, &TrackerSettings::default()).is_err());
        assert!(sdp_critical_solve(1, 2, 0, 0, &TrackerSettings::default()).is_err());
    }
}
