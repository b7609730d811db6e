//! Sparse polynomial systems over the complex numbers.

use std::collections::BTreeMap;

use nalgebra::DMatrix;

use crate::{Error, C64};

/// One monomial `coeff · ∏ x_v^{exponents[v]}`.
#[derive(Debug, Clone, PartialEq)]
pub struct Term {
    pub coeff: C64,
    pub exponents: Vec<u32>,
}

impl Term {
    pub fn degree(&self) -> u32 {
        self.exponents.iter().sum()
    }
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct Polynomial {
    terms: Vec<Term>,
    /// Nonzero `(variable, exponent)` pairs of each term, for evaluation.
    sparse: Vec<Vec<(usize, u32)>>,
}

impl Polynomial {
    /// Collects like terms and drops zero coefficients.
    pub fn from_terms<I>(terms: I) -> Self
    where
        I: IntoIterator<Item = (Vec<u32>, C64)>,
    {
        let mut merged: BTreeMap<Vec<u32>, C64> = BTreeMap::new();
        for (exps, c) in terms {
            *merged.entry(exps).or_default() += c;
        }
        let terms: Vec<Term> = merged
            .into_iter()
            .filter(|(_, c)| *c != C64::default())
            .map(|(exponents, coeff)| Term { coeff, exponents })
            .collect();
        let sparse = terms
            .iter()
            .map(|t| {
                t.exponents
                    .iter()
                    .enumerate()
                    .filter(|(_, &e)| e > 0)
                    .map(|(v, &e)| (v, e))
                    .collect()
            })
            .collect();
        Polynomial { terms, sparse }
    }

    /// `Σ coeffs[j] x_j + constant` in `coeffs.len()` variables.
    pub fn linear(coeffs: &[C64], constant: C64) -> Self {
        let nvars = coeffs.len();
        let unit = |j: usize| {
            let mut e = vec![0; nvars];
            e[j] = 1;
            e
        };
        Self::from_terms(
            coeffs
                .iter()
                .enumerate()
                .map(|(j, &c)| (unit(j), c))
                .chain(std::iter::once((vec![0; nvars], constant))),
        )
    }

    pub fn terms(&self) -> &[Term] {
        &self.terms
    }

    pub fn degree(&self) -> u32 {
        self.terms.iter().map(Term::degree).max().unwrap_or(0)
    }

    pub fn eval(&self, x: &[C64]) -> C64 {
        self.terms
            .iter()
            .zip(&self.sparse)
            .map(|(t, sp)| sp.iter().fold(t.coeff, |acc, &(v, e)| acc * x[v].powu(e)))
            .sum()
    }

    /// Value, with the gradient written into `grad`.
    pub fn eval_with_gradient(&self, x: &[C64], grad: &mut [C64]) -> C64 {
        grad.fill(C64::default());
        let mut value = C64::default();
        for (t, sp) in self.terms.iter().zip(&self.sparse) {
            value += sp.iter().fold(t.coeff, |acc, &(v, e)| acc * x[v].powu(e));
            for (k, &(v, e)) in sp.iter().enumerate() {
                let mut d = t.coeff * f64::from(e);
                for (l, &(w, ew)) in sp.iter().enumerate() {
                    let p = if l == k { ew - 1 } else { ew };
                    if p > 0 {
                        d *= x[w].powu(p);
                    }
                }
                grad[v] += d;
            }
        }
        value
    }
}

/// A list of polynomials in a fixed number of variables.
#[derive(Debug, Clone, PartialEq)]
pub struct PolySystem {
    nvars: usize,
    polys: Vec<Polynomial>,
}

impl PolySystem {
    pub fn new(nvars: usize, polys: Vec<Polynomial>) -> Result<Self, Error> {
        for p in &polys {
            if p.terms.iter().any(|t| t.exponents.len() != nvars) {
                return Err(Error::Shape("exponent vector length differs from variable count"));
            }
        }
        Ok(PolySystem { nvars, polys })
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn len(&self) -> usize {
        self.polys.len()
    }

    pub fn is_empty(&self) -> bool {
        self.polys.is_empty()
    }

    pub fn polys(&self) -> &[Polynomial] {
        &self.polys
    }

    pub fn degrees(&self) -> Vec<u32> {
        self.polys.iter().map(Polynomial::degree).collect()
    }

    /// Product of the degrees.
    pub fn bezout_bound(&self) -> u128 {
        self.degrees().iter().map(|&d| u128::from(d)).product()
    }

    /// Concatenates two systems in the same variables.
    pub fn join(mut self, other: &PolySystem) -> Result<Self, Error> {
        if other.nvars != self.nvars {
            return Err(Error::Shape("joined systems must share their variables"));
        }
        self.polys.extend(other.polys.iter().cloned());
        Ok(self)
    }

    pub fn eval(&self, x: &[C64], out: &mut [C64]) {
        for (o, p) in out.iter_mut().zip(&self.polys) {
            *o = p.eval(x);
        }
    }

    /// Values into `out`, Jacobian rows into `jac` (`len × nvars`).
    pub fn eval_jacobian(&self, x: &[C64], out: &mut [C64], jac: &mut DMatrix<C64>) {
        jac.fill(C64::default());
        self.accumulate(x, C64::new(1.0, 0.0), out, jac);
    }

    /// Values into `out`; adds `scale` times the Jacobian to `jac`.
    pub fn accumulate(&self, x: &[C64], scale: C64, out: &mut [C64], jac: &mut DMatrix<C64>) {
        for (i, p) in self.polys.iter().enumerate() {
            let mut value = C64::default();
            for (t, sp) in p.terms.iter().zip(&p.sparse) {
                value += sp.iter().fold(t.coeff, |acc, &(v, e)| acc * x[v].powu(e));
                for (k, &(v, e)) in sp.iter().enumerate() {
                    let mut d = t.coeff * (scale * f64::from(e));
                    for (l, &(w, ew)) in sp.iter().enumerate() {
                        let p = if l == k { ew - 1 } else { ew };
                        if p > 0 {
                            d *= x[w].powu(p);
                        }
                    }
                    jac[(i, v)] += d;
                }
            }
            out[i] = value;
        }
    }

    /// Largest absolute value over the polynomials.
    pub fn residual(&self, x: &[C64]) -> f64 {
        self.polys
            .iter()
            .map(|p| p.eval(x).norm())
            .fold(0.0, f64::max)
    }
}

/// The `n(n+1)/2` quadrics `(M Mᵀ − Id)_{ij}`, `i ≤ j`, in the `n²` entries
/// of `M` (row-major). They cut out O(n); the determinant condition that
/// singles out SO(n) is left out.
pub fn orthogonality_system(n: usize) -> PolySystem {
    let nvars = n * n;
    let mut polys = Vec::with_capacity(n * (n + 1) / 2);
    for i in 0..n {
        for j in i..n {
            let mut terms = Vec::with_capacity(n + 1);
            for k in 0..n {
                let mut e = vec![0u32; nvars];
                e[i * n + k] += 1;
                e[j * n + k] += 1;
                terms.push((e, C64::new(1.0, 0.0)));
            }
            if i == j {
                terms.push((vec![0; nvars], C64::new(-1.0, 0.0)));
            }
            polys.push(Polynomial::from_terms(terms));
        }
    }
    PolySystem::new(nvars, polys).expect("consistent by construction")
}
