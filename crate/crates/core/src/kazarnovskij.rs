//! Degrees recomputed from root data by Kazarnovskij's integral formula.
//!
//! For a connected reductive group of dimension `m` with Weyl group `W`,
//! Coxeter exponents `c_i` and a representation with finite kernel `K`,
//!
//! ```text
//! deg = m! / (|W| · (c_1! ⋯ c_r!)² · |K|) · ∫_{C_V} (∏ coroots)² dv
//! ```
//!
//! where `C_V` is the convex hull of the weights. For the standard
//! representations of SO(2r), SO(2r+1) and Sp(r) the weights are `±e_i`, so
//! `C_V` is the cross-polytope. Its integrand is even in every coordinate,
//! which turns the integral into `2^r` times an integral over the standard
//! simplex, evaluated monomial by monomial in exact rationals.
//!
//! Two evaluations are offered. [`integral_direct`] expands the squared
//! Vandermonde product as a double sum over `S_r × S_r` and integrates each
//! monomial; [`integral_closed`] uses the collapsed factorial determinant.
//! They share nothing beyond factorials, so agreement between them checks the
//! collapse step.

use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use num_traits::{One, Zero};

use crate::arith::{binomial, det_exact, factorial, pow2, rational_to_integer};
use crate::arith::{BigInt, BigRational, IntMatrix};
use crate::Error;

/// Default rank cap for [`integral_direct`]; the double sum has `(r!)²` terms.
pub const DIRECT_RANK_CAP: u32 = 6;

/// The three root-system families with cross-polytope weight hulls.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum RootFamily {
    /// SO(2r), type D.
    SoEven,
    /// SO(2r+1), type B.
    SoOdd,
    /// Sp(r), type C.
    Sp,
}

impl RootFamily {
    /// Family and rank of SO(n); `None` for `n < 2`, which has rank zero.
    pub fn for_so(n: u32) -> Option<(RootFamily, u32)> {
        match n {
            0 | 1 => None,
            n if n % 2 == 0 => Some((RootFamily::SoEven, n / 2)),
            n => Some((RootFamily::SoOdd, n / 2)),
        }
    }
}

impl fmt::Display for RootFamily {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            RootFamily::SoEven => "SO(2r)",
            RootFamily::SoOdd => "SO(2r+1)",
            RootFamily::Sp => "Sp(r)",
        })
    }
}

/// Which evaluation of the integral to use.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Route {
    Direct,
    Closed,
}

/// Root-system invariants entering the integral formula.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RootData {
    pub family: RootFamily,
    pub rank: u32,
    pub dimension: u64,
    pub weyl_order: BigInt,
    pub coxeter_exponents: Vec<u32>,
    /// Scale of the single-coordinate coroot factors in the integrand:
    /// `(2x_i)²` for SO(2r+1), `x_i²` for Sp(r), and none (`0`) for SO(2r).
    pub linear_factor_multiplier: u32,
    pub kernel_order: u32,
}

impl RootData {
    /// `m! / (|W| · (∏ c_i!)² · |K|)`.
    pub fn prefactor(&self) -> BigRational {
        let coxeter: BigInt = self
            .coxeter_exponents
            .iter()
            .map(|&c| factorial(u64::from(c)))
            .product();
        let denom = &self.weyl_order * &coxeter * &coxeter * BigInt::from(self.kernel_order);
        BigRational::new(factorial(self.dimension), denom)
    }
}

pub fn root_data(family: RootFamily, r: u32) -> Result<RootData, Error> {
    if r == 0 {
        return Err(Error::OutOfDomain("rank must be at least 1"));
    }
    let r64 = u64::from(r);
    let odd_exponents: Vec<u32> = (1..=r).map(|k| 2 * k - 1).collect();
    let data = match family {
        RootFamily::SoEven => {
            // 1, 3, …, 2r−3 followed by r−1; SO(2) gets the single exponent 0
            let mut exps: Vec<u32> = (1..r).map(|k| 2 * k - 1).collect();
            exps.push(r - 1);
            RootData {
                family,
                rank: r,
                dimension: r64 * (2 * r64 - 1),
                weyl_order: factorial(r64) * pow2(r64 - 1),
                coxeter_exponents: exps,
                linear_factor_multiplier: 0,
                kernel_order: 1,
            }
        }
        RootFamily::SoOdd => RootData {
            family,
            rank: r,
            dimension: r64 * (2 * r64 + 1),
            weyl_order: factorial(r64) * pow2(r64),
            coxeter_exponents: odd_exponents,
            linear_factor_multiplier: 2,
            kernel_order: 1,
        },
        RootFamily::Sp => RootData {
            family,
            rank: r,
            dimension: r64 * (2 * r64 + 1),
            weyl_order: factorial(r64) * pow2(r64),
            coxeter_exponents: odd_exponents,
            linear_factor_multiplier: 1,
            kernel_order: 1,
        },
    };
    Ok(data)
}

/// Exponents of a monomial `x_1^{a_1} ⋯ x_r^{a_r}`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ExponentVector(pub Vec<u32>);

impl ExponentVector {
    pub fn rank(&self) -> usize {
        self.0.len()
    }

    pub fn total_degree(&self) -> u64 {
        self.0.iter().map(|&a| u64::from(a)).sum()
    }
}

impl From<Vec<u32>> for ExponentVector {
    fn from(v: Vec<u32>) -> Self {
        ExponentVector(v)
    }
}

/// `∫_{Δ_r} x^a dx = (∏ a_i!) / (r + Σ a_i)!` over the standard simplex.
///
/// Zero exponents are allowed.
pub fn simplex_monomial_integral(a: &[u32]) -> BigRational {
    let numer: BigInt = a.iter().map(|&ai| factorial(u64::from(ai))).product();
    let total = a.len() as u64 + a.iter().map(|&ai| u64::from(ai)).sum::<u64>();
    BigRational::new(numer, factorial(total))
}

/// All permutations of `1..=r` with their signs (`true` for even).
fn signed_permutations(r: usize) -> Vec<(Vec<u32>, bool)> {
    // Heap's algorithm: each successive permutation differs by one swap
    let mut perm: Vec<u32> = (1..=r as u32).collect();
    let mut out = vec![(perm.clone(), true)];
    let mut even = true;
    let mut c = vec![0usize; r];
    let mut i = 1;
    while i < r {
        if c[i] < i {
            if i % 2 == 0 {
                perm.swap(0, i);
            } else {
                perm.swap(c[i], i);
            }
            even = !even;
            out.push((perm.clone(), even));
            c[i] += 1;
            i = 1;
        } else {
            c[i] = 0;
            i += 1;
        }
    }
    out
}

/// The integral over the cross-polytope by the `S_r × S_r` expansion.
///
/// Uses [`DIRECT_RANK_CAP`].
pub fn integral_direct(family: RootFamily, r: u32) -> Result<BigRational, Error> {
    integral_direct_capped(family, r, DIRECT_RANK_CAP)
}

pub fn integral_direct_capped(
    family: RootFamily,
    r: u32,
    cap: u32,
) -> Result<BigRational, Error> {
    if r > cap {
        return Err(Error::SizeAboveCap {
            size: r as usize,
            cap: cap as usize,
        });
    }
    let data = root_data(family, r)?;
    let linear = data.linear_factor_multiplier;
    let shift = if linear > 0 { 2 } else { 0 };
    let perms = signed_permutations(r as usize);

    let mut sum = BigRational::zero();
    let mut exps = vec![0u32; r as usize];
    for (sigma, sigma_even) in &perms {
        for (tau, tau_even) in &perms {
            for i in 0..r as usize {
                exps[i] = 2 * sigma[i] + 2 * tau[i] - 4 + shift;
            }
            let term = simplex_monomial_integral(&exps);
            if sigma_even == tau_even {
                sum += term;
            } else {
                sum -= term;
            }
        }
    }
    // (linear · x_i)² contributes linear² per coordinate
    let scalar = if linear > 0 {
        BigInt::from(linear).pow(2 * r)
    } else {
        BigInt::one()
    };
    Ok(sum * BigRational::from_integer(scalar * pow2(u64::from(r))))
}

/// The same integral through the collapsed factorial determinant.
pub fn integral_closed(family: RootFamily, r: u32) -> Result<BigRational, Error> {
    if r == 0 {
        return Err(Error::OutOfDomain("rank must be at least 1"));
    }
    let rr = r as usize;
    let r64 = u64::from(r);
    let value = match family {
        RootFamily::SoEven => {
            let det = det_exact(&IntMatrix::from_fn(rr, rr, |i, j| {
                factorial(2 * (i + j) as u64)
            }))?;
            let dim = binomial(2 * r64, 2);
            closed_form(r64, 1, &dim, det)
        }
        RootFamily::SoOdd | RootFamily::Sp => {
            let det = det_exact(&IntMatrix::from_fn(rr, rr, |i, j| {
                factorial(2 * (i + j) as u64 + 2)
            }))?;
            let dim = binomial(2 * r64 + 1, 2);
            let odd = closed_form(r64, 3, &dim, det);
            if family == RootFamily::Sp {
                // Sp lacks the factor 2² per coordinate
                odd / BigRational::from_integer(pow2(2 * r64))
            } else {
                odd
            }
        }
    };
    Ok(value)
}

/// `r! · 2^{k r} / dim! · det`.
fn closed_form(r: u64, k: u64, dim: &BigInt, det: BigInt) -> BigRational {
    let dim: u64 = dim.try_into().expect("dimension fits in u64");
    BigRational::new(factorial(r) * pow2(k * r) * det, factorial(dim))
}

/// Degree of the family at rank `r` from the integral formula.
///
/// SO(2r) and SO(2r+1) come from [`RootFamily::SoEven`] and
/// [`RootFamily::SoOdd`]; Sp(r) from [`RootFamily::Sp`].
pub fn degree_via_kazarnovskij(family: RootFamily, r: u32, route: Route) -> Result<BigInt, Error> {
    let data = root_data(family, r)?;
    let integral = match route {
        Route::Direct => integral_direct(family, r)?,
        Route::Closed => integral_closed(family, r)?,
    };
    rational_to_integer(&(data.prefactor() * integral))
        .ok_or(Error::Inconsistent("integral formula produced a non-integer degree"))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::{deg_so, deg_sp};
    use num_traits::Signed;

    fn q(n: i64, d: i64) -> BigRational {
        BigRational::new(BigInt::from(n), BigInt::from(d))
    }

    // ∫_0^1 x^a (1−x)^b dx by binomial expansion of (1−x)^b
    fn beta_by_expansion(a: u64, b: u64) -> BigRational {
        (0..=b).fold(BigRational::zero(), |acc, k| {
            let term = BigRational::new(binomial(b, k as i64), BigInt::from(a + k + 1));
            if k % 2 == 0 {
                acc + term
            } else {
                acc - term
            }
        })
    }

    // Iterated integration over the simplex: peel off x_1, rescale the rest.
    fn simplex_oracle(a: &[u32]) -> BigRational {
        match a.split_first() {
            None => BigRational::one(),
            Some((&a1, rest)) => {
                let rest_deg = rest.len() as u64 + rest.iter().map(|&x| u64::from(x)).sum::<u64>();
                beta_by_expansion(u64::from(a1), rest_deg) * simplex_oracle(rest)
            }
        }
    }

    #[test]
    fn root_data_records() {
        let d = root_data(RootFamily::SoOdd, 2).unwrap();
        assert_eq!(d.dimension, 10);
        assert_eq!(d.weyl_order, BigInt::from(8));
        assert_eq!(d.coxeter_exponents, vec![1, 3]);

        let d = root_data(RootFamily::SoEven, 2).unwrap();
        assert_eq!(d.dimension, 6);
        assert_eq!(d.weyl_order, BigInt::from(4));
        assert_eq!(d.coxeter_exponents, vec![1, 1]);

        let d = root_data(RootFamily::Sp, 1).unwrap();
        assert_eq!(d.dimension, 3);
        assert_eq!(d.weyl_order, BigInt::from(2));
        assert_eq!(d.coxeter_exponents, vec![1]);

        assert_eq!(root_data(RootFamily::SoEven, 1).unwrap().coxeter_exponents, vec![0]);
        assert_eq!(
            root_data(RootFamily::SoEven, 4).unwrap().coxeter_exponents,
            vec![1, 3, 5, 3]
        );
        assert!(root_data(RootFamily::Sp, 0).is_err());
    }

    #[test]
    fn simplex_integrals() {
        assert_eq!(simplex_monomial_integral(&[0, 0, 0]), q(1, 6));
        assert_eq!(simplex_monomial_integral(&[2, 2]), q(1, 180));
        assert_eq!(simplex_monomial_integral(&[2]), q(1, 3));
    }

    #[test]
    fn simplex_formula_matches_iterated_integration() {
        let cases: [&[u32]; 7] = [&[0], &[5], &[1, 0], &[2, 2], &[3, 1, 4], &[0, 0, 6], &[2, 0, 2, 1]];
        for a in cases {
            assert_eq!(simplex_monomial_integral(a), simplex_oracle(a), "a = {a:?}");
        }
    }

    #[test]
    fn permutation_signs() {
        let perms = signed_permutations(4);
        assert_eq!(perms.len(), 24);
        for (p, even) in &perms {
            let inversions = (0..4)
                .flat_map(|i| (i + 1..4).map(move |j| (i, j)))
                .filter(|&(i, j)| p[i] > p[j])
                .count();
            assert_eq!(*even, inversions % 2 == 0, "{p:?}");
        }
        assert_eq!(signed_permutations(1), vec![(vec![1], true)]);
    }

    #[test]
    fn direct_integrals() {
        assert_eq!(integral_direct(RootFamily::SoEven, 1).unwrap(), q(2, 1));
        assert_eq!(integral_direct(RootFamily::SoOdd, 1).unwrap(), q(8, 3));
        assert_eq!(integral_direct(RootFamily::SoEven, 2).unwrap(), q(2, 9));
        assert_eq!(integral_direct(RootFamily::Sp, 1).unwrap(), q(2, 3));
    }

    #[test]
    fn closed_integrals() {
        assert_eq!(integral_closed(RootFamily::SoOdd, 1).unwrap(), q(8, 3));
        assert_eq!(integral_closed(RootFamily::SoEven, 2).unwrap(), q(2, 9));
        assert_eq!(integral_closed(RootFamily::Sp, 1).unwrap(), q(2, 3));
    }

    #[test]
    fn direct_rank_cap() {
        assert_eq!(
            integral_direct(RootFamily::SoOdd, 7),
            Err(Error::SizeAboveCap { size: 7, cap: 6 })
        );
        assert!(integral_direct_capped(RootFamily::SoOdd, 3, 2).is_err());
    }

    #[test]
    fn routes_agree_on_integrals() {
        for family in [RootFamily::SoEven, RootFamily::SoOdd, RootFamily::Sp] {
            for r in 1..=4 {
                let direct = integral_direct(family, r).unwrap();
                assert_eq!(direct, integral_closed(family, r).unwrap(), "{family} r = {r}");
                assert!(direct.is_positive());
            }
        }
    }

    #[test]
    fn degrees_from_root_data() {
        assert_eq!(
            degree_via_kazarnovskij(RootFamily::SoOdd, 1, Route::Direct).unwrap(),
            BigInt::from(8)
        );
        assert_eq!(
            degree_via_kazarnovskij(RootFamily::SoEven, 2, Route::Direct).unwrap(),
            BigInt::from(40)
        );
        assert_eq!(
            degree_via_kazarnovskij(RootFamily::Sp, 2, Route::Closed).unwrap(),
            BigInt::from(24)
        );
        assert_eq!(
            degree_via_kazarnovskij(RootFamily::SoEven, 1, Route::Closed).unwrap(),
            BigInt::from(2)
        );
    }

    #[test]
    fn closed_route_matches_formula() {
        for r in 1..=6 {
            assert_eq!(
                degree_via_kazarnovskij(RootFamily::SoEven, r, Route::Closed).unwrap(),
                deg_so(2 * r)
            );
            assert_eq!(
                degree_via_kazarnovskij(RootFamily::SoOdd, r, Route::Closed).unwrap(),
                deg_so(2 * r + 1)
            );
            assert_eq!(
                degree_via_kazarnovskij(RootFamily::Sp, r, Route::Closed).unwrap(),
                deg_sp(r)
            );
        }
    }

    #[test]
    fn family_for_so() {
        assert_eq!(RootFamily::for_so(1), None);
        assert_eq!(RootFamily::for_so(6), Some((RootFamily::SoEven, 3)));
        assert_eq!(RootFamily::for_so(7), Some((RootFamily::SoOdd, 3)));
    }
}
