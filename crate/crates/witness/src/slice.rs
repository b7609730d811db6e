//! Affine linear slices of complementary dimension.

use rand::Rng;

use crate::poly::{Polynomial, PolySystem};
use crate::rng::{substream, unit_disk, unit_square, Stream};
use crate::{Error, C64};

/// `C(n,2)` affine forms `Σ_j a_{kj} x_j + a_{k,n²}` on the `n²` matrix
/// entries. Coefficients are stored row by row, constant last, so there are
/// `(n²+1)·C(n,2)` of them.
#[derive(Debug, Clone, PartialEq)]
pub struct Slice {
    n: usize,
    coefficients: Vec<C64>,
    seed: u64,
}

impl Slice {
    pub fn from_coefficients(n: usize, coefficients: Vec<C64>, seed: u64) -> Result<Self, Error> {
        if n < 2 {
            return Err(Error::Domain("slices need n >= 2"));
        }
        if coefficients.len() != Self::coefficient_count(n) {
            return Err(Error::Shape("slice coefficient count must be (n²+1)·C(n,2)"));
        }
        Ok(Slice {
            n,
            coefficients,
            seed,
        })
    }

    pub fn coefficient_count(n: usize) -> usize {
        (n * n + 1) * Self::form_count(n)
    }

    pub fn form_count(n: usize) -> usize {
        n * (n - 1) / 2
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn coefficients(&self) -> &[C64] {
        &self.coefficients
    }

    pub fn forms(&self) -> usize {
        Self::form_count(self.n)
    }

    /// Linear coefficients followed by the constant of form `k`.
    pub fn row(&self, k: usize) -> &[C64] {
        let w = self.n * self.n + 1;
        &self.coefficients[k * w..(k + 1) * w]
    }

    pub fn is_real(&self) -> bool {
        self.coefficients.iter().all(|c| c.im == 0.0)
    }

    /// Form values at `x` into `out`.
    pub fn eval(&self, x: &[C64], out: &mut [C64]) {
        let nv = self.n * self.n;
        for (k, o) in out.iter_mut().enumerate().take(self.forms()) {
            let row = self.row(k);
            *o = row[..nv].iter().zip(x).map(|(a, xv)| a * xv).sum::<C64>() + row[nv];
        }
    }

    pub fn residual(&self, x: &[C64]) -> f64 {
        let mut out = vec![C64::default(); self.forms()];
        self.eval(x, &mut out);
        out.iter().map(|v| v.norm()).fold(0.0, f64::max)
    }

    /// Keeps the linear parts and resets the constants so that `point` lies
    /// on every form.
    pub fn through(mut self, point: &[C64]) -> Self {
        let nv = self.n * self.n;
        let w = nv + 1;
        for k in 0..self.forms() {
            let row = &mut self.coefficients[k * w..(k + 1) * w];
            let value: C64 = row[..nv].iter().zip(point).map(|(a, x)| a * x).sum();
            row[nv] = -value;
        }
        self
    }

    /// The forms as polynomials.
    pub fn as_system(&self) -> PolySystem {
        let nv = self.n * self.n;
        let polys = (0..self.forms())
            .map(|k| {
                let row = self.row(k);
                Polynomial::linear(&row[..nv], row[nv])
            })
            .collect();
        PolySystem::new(nv, polys).expect("consistent by construction")
    }

    /// `(1−s)·self + s·other`, coefficientwise.
    pub fn lerp(&self, other: &Slice, s: f64) -> Slice {
        assert_eq!(self.n, other.n);
        Slice {
            n: self.n,
            coefficients: self
                .coefficients
                .iter()
                .zip(&other.coefficients)
                .map(|(a, b)| a * (1.0 - s) + b * s)
                .collect(),
            seed: self.seed,
        }
    }
}

/// A slice with coefficients drawn from `rng`.
///
/// Linear coefficients and the subtracted constant are uniform on the unit
/// square of the complex plane, or on `[0, 1)` when `real_only` is set.
pub fn random_slice_from<R: Rng>(n: usize, rng: &mut R, real_only: bool, seed: u64) -> Slice {
    assert!(n >= 2, "slices need n >= 2");
    let nv = n * n;
    let draw = |rng: &mut R| {
        if real_only {
            C64::new(rng.random::<f64>(), 0.0)
        } else {
            unit_square(rng)
        }
    };
    let mut coefficients = Vec::with_capacity(Slice::coefficient_count(n));
    for _ in 0..Slice::form_count(n) {
        for _ in 0..nv {
            coefficients.push(draw(rng));
        }
        coefficients.push(-draw(rng));
    }
    Slice {
        n,
        coefficients,
        seed,
    }
}

/// A slice with every coefficient uniform on the unit disk.
///
/// Centered at the origin, so consecutive draws differ in phase as well as
/// size; used for the intermediate nodes of monodromy loops.
pub fn random_disk_slice_from<R: Rng>(n: usize, rng: &mut R, seed: u64) -> Slice {
    assert!(n >= 2, "slices need n >= 2");
    Slice {
        n,
        coefficients: (0..Slice::coefficient_count(n)).map(|_| unit_disk(rng)).collect(),
        seed,
    }
}

/// Deterministic random slice for `seed`.
pub fn random_slice(n: usize, seed: u64, real_only: bool) -> Slice {
    random_slice_from(n, &mut substream(seed, Stream::Slice, 0), real_only, seed)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn deterministic_in_seed() {
        assert_eq!(random_slice(3, 7, false), random_slice(3, 7, false));
        assert_ne!(random_slice(3, 7, false), random_slice(3, 8, false));
    }

    #[test]
    fn coefficient_layout() {
        let s = random_slice(3, 11, false);
        assert_eq!(s.forms(), 3);
        assert_eq!(s.coefficients().len(), 30);
        assert_eq!(s.row(2).len(), 10);
        assert!(!s.is_real());
    }

    #[test]
    fn real_only_has_no_imaginary_parts() {
        let s = random_slice(4, 3, true);
        assert!(s.is_real());
        assert!(s.coefficients().iter().all(|c| c.im == 0.0));
    }

    #[test]
    fn through_point() {
        let p: Vec<C64> = (0..9).map(|k| C64::new(k as f64, -0.5)).collect();
        let s = random_slice(3, 5, false).through(&p);
        assert!(s.residual(&p) < 1e-12);
        let sys = s.as_system();
        assert!(sys.residual(&p) < 1e-12);
    }

    #[test]
    fn rejects_bad_coefficient_count() {
        assert!(Slice::from_coefficients(3, vec![C64::default(); 29], 0).is_err());
        assert!(Slice::from_coefficients(1, vec![], 0).is_err());
    }
}
