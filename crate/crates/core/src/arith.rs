//! Exact integer and rational arithmetic shared by every formula route.
//!
//! Big numbers come from `num-bigint` / `num-rational`; the determinant and
//! Pfaffian kernels are written here so that both stay exact at any size.

use alloc::collections::BTreeMap;
use alloc::vec::Vec;
use core::fmt;
use core::ops::{Index, IndexMut};

use num_integer::Integer;
use num_traits::{One, Zero};

use crate::Error;

pub use num_bigint::BigInt;
pub use num_rational::BigRational;

/// `C(n, k)`, and `0` whenever `k` falls outside `0..=n`.
pub fn binomial(n: u64, k: i64) -> BigInt {
    if k < 0 || k as u64 > n {
        return BigInt::zero();
    }
    let k = (k as u64).min(n - k as u64);
    let mut acc = BigInt::one();
    for i in 0..k {
        // acc * (n - i) is divisible by (i + 1) at every step
        acc = acc * BigInt::from(n - i) / BigInt::from(i + 1);
    }
    acc
}

/// `n!`
pub fn factorial(n: u64) -> BigInt {
    (2..=n).fold(BigInt::one(), |acc, i| acc * BigInt::from(i))
}

/// `2^e` as a big integer.
pub fn pow2(e: u64) -> BigInt {
    BigInt::one() << e
}

/// Dense row-major matrix of big integers.
#[derive(Clone, PartialEq, Eq)]
pub struct IntMatrix {
    rows: usize,
    cols: usize,
    data: Vec<BigInt>,
}

impl IntMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        IntMatrix {
            rows,
            cols,
            data: (0..rows * cols).map(|_| BigInt::zero()).collect(),
        }
    }

    pub fn identity(n: usize) -> Self {
        Self::from_fn(n, n, |i, j| if i == j { BigInt::one() } else { BigInt::zero() })
    }

    /// Builds a matrix from a function of the zero-based `(row, col)` index.
    pub fn from_fn<F>(rows: usize, cols: usize, mut f: F) -> Self
    where
        F: FnMut(usize, usize) -> BigInt,
    {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        IntMatrix { rows, cols, data }
    }

    /// Builds a matrix from rows of machine integers.
    pub fn from_rows<R: AsRef<[i64]>>(rows: &[R]) -> Self {
        let nrows = rows.len();
        let ncols = rows.first().map_or(0, |r| r.as_ref().len());
        assert!(
            rows.iter().all(|r| r.as_ref().len() == ncols),
            "ragged rows"
        );
        Self::from_fn(nrows, ncols, |i, j| BigInt::from(rows[i].as_ref()[j]))
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self[(j, i)].clone())
    }

    pub fn is_antisymmetric(&self) -> bool {
        self.is_square()
            && (0..self.rows).all(|i| {
                (i..self.cols).all(|j| self[(i, j)] == -self[(j, i)].clone())
            })
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.data.swap(a * self.cols + j, b * self.cols + j);
        }
    }
}

impl Index<(usize, usize)> for IntMatrix {
    type Output = BigInt;

    fn index(&self, (i, j): (usize, usize)) -> &BigInt {
        assert!(i < self.rows && j < self.cols, "index out of bounds");
        &self.data[i * self.cols + j]
    }
}

impl IndexMut<(usize, usize)> for IntMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut BigInt {
        assert!(i < self.rows && j < self.cols, "index out of bounds");
        &mut self.data[i * self.cols + j]
    }
}

impl fmt::Debug for IntMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut list = f.debug_list();
        for i in 0..self.rows {
            list.entry(&&self.data[i * self.cols..(i + 1) * self.cols]);
        }
        list.finish()
    }
}

/// Exact determinant by fraction-free (Bareiss) elimination.
///
/// Every intermediate division is exact, so no rationals are formed. The
/// empty matrix has determinant one.
pub fn det_exact(m: &IntMatrix) -> Result<BigInt, Error> {
    if !m.is_square() {
        return Err(Error::NotSquare {
            rows: m.rows,
            cols: m.cols,
        });
    }
    let n = m.rows;
    if n == 0 {
        return Ok(BigInt::one());
    }
    let mut a = m.clone();
    let mut negate = false;
    let mut prev_pivot = BigInt::one();
    for k in 0..n - 1 {
        if a[(k, k)].is_zero() {
            match (k + 1..n).find(|&i| !a[(i, k)].is_zero()) {
                Some(i) => {
                    a.swap_rows(k, i);
                    negate = !negate;
                }
                None => return Ok(BigInt::zero()),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let v = &a[(i, j)] * &a[(k, k)] - &a[(i, k)] * &a[(k, j)];
                debug_assert!(v.is_multiple_of(&prev_pivot));
                a[(i, j)] = v / &prev_pivot;
            }
            a[(i, k)] = BigInt::zero();
        }
        prev_pivot = a[(k, k)].clone();
    }
    let det = a[(n - 1, n - 1)].clone();
    Ok(if negate { -det } else { det })
}

/// Exact Pfaffian of an even-dimensional antisymmetric matrix.
///
/// Expands along the first remaining row; sub-Pfaffians are memoized by the
/// set of surviving indices, so repeated minors are evaluated once.
pub fn pfaffian(m: &IntMatrix) -> Result<BigInt, Error> {
    if !m.is_square() {
        return Err(Error::NotSquare {
            rows: m.rows,
            cols: m.cols,
        });
    }
    let n = m.rows;
    if n % 2 == 1 {
        return Err(Error::OddDimension(n));
    }
    if !m.is_antisymmetric() {
        return Err(Error::NotAntisymmetric);
    }
    if n > 64 {
        return Err(Error::SizeAboveCap { size: n, cap: 64 });
    }
    let full = if n == 64 { u64::MAX } else { (1u64 << n) - 1 };
    let mut memo = BTreeMap::new();
    Ok(pfaffian_rec(m, full, &mut memo))
}

fn pfaffian_rec(m: &IntMatrix, mask: u64, memo: &mut BTreeMap<u64, BigInt>) -> BigInt {
    if mask == 0 {
        return BigInt::one();
    }
    if let Some(v) = memo.get(&mask) {
        return v.clone();
    }
    let first = mask.trailing_zeros() as usize;
    let rest = mask & !(1u64 << first);
    let mut acc = BigInt::zero();
    let mut bits = rest;
    let mut positive = true;
    while bits != 0 {
        let j = bits.trailing_zeros() as usize;
        bits &= bits - 1;
        let entry = &m[(first, j)];
        if !entry.is_zero() {
            let term = entry * pfaffian_rec(m, rest & !(1u64 << j), memo);
            if positive {
                acc += term;
            } else {
                acc -= term;
            }
        }
        positive = !positive;
    }
    memo.insert(mask, acc.clone());
    acc
}

/// Converts an integral rational to an integer.
pub fn rational_to_integer(q: &BigRational) -> Option<BigInt> {
    q.is_integer().then(|| q.to_integer())
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::Signed;
    use proptest::prelude::*;

    fn cofactor_det(m: &[Vec<i64>]) -> BigInt {
        let n = m.len();
        if n == 0 {
            return BigInt::one();
        }
        let mut acc = BigInt::zero();
        for j in 0..n {
            let minor: Vec<Vec<i64>> = m[1..]
                .iter()
                .map(|row| {
                    row.iter()
                        .enumerate()
                        .filter(|&(c, _)| c != j)
                        .map(|(_, &v)| v)
                        .collect()
                })
                .collect();
            let term = BigInt::from(m[0][j]) * cofactor_det(&minor);
            if j % 2 == 0 {
                acc += term;
            } else {
                acc -= term;
            }
        }
        acc
    }

    #[test]
    fn binomial_values() {
        assert_eq!(binomial(0, 0), BigInt::from(1));
        assert_eq!(binomial(6, 3), BigInt::from(20));
        assert_eq!(binomial(2, 1), BigInt::from(2));
        assert_eq!(binomial(5, -1), BigInt::zero());
        assert_eq!(binomial(5, 6), BigInt::zero());
        assert_eq!(binomial(60, 30), "118264581564861424".parse::<BigInt>().unwrap());
    }

    #[test]
    fn factorial_values() {
        assert_eq!(factorial(0), BigInt::from(1));
        assert_eq!(factorial(4), BigInt::from(24));
        // C(4, 2)! appears in the even-rank integral at r = 2
        assert_eq!(factorial(6), BigInt::from(720));
    }

    #[test]
    fn determinant_examples() {
        assert_eq!(det_exact(&IntMatrix::identity(3)).unwrap(), BigInt::from(1));
        let m = IntMatrix::from_rows(&[[1, 2], [2, 24]]);
        assert_eq!(det_exact(&m).unwrap(), BigInt::from(20));
        let m = IntMatrix::from_rows(&[[20, 4], [4, 2]]);
        assert_eq!(det_exact(&m).unwrap(), BigInt::from(24));
        assert_eq!(det_exact(&IntMatrix::zeros(0, 0)).unwrap(), BigInt::from(1));
    }

    #[test]
    fn determinant_needs_pivoting() {
        let m = IntMatrix::from_rows(&[[0, 1, 2], [3, 0, 1], [4, 5, 0]]);
        assert_eq!(det_exact(&m).unwrap(), BigInt::from(34));
        let singular = IntMatrix::from_rows(&[[0, 1], [0, 2]]);
        assert_eq!(det_exact(&singular).unwrap(), BigInt::zero());
    }

    #[test]
    fn determinant_rejects_rectangular() {
        let m = IntMatrix::zeros(2, 3);
        assert_eq!(det_exact(&m), Err(Error::NotSquare { rows: 2, cols: 3 }));
    }

    #[test]
    fn pfaffian_small() {
        let m = IntMatrix::from_rows(&[[0, 3], [-3, 0]]);
        assert_eq!(pfaffian(&m).unwrap(), BigInt::from(3));
        let (a12, a13, a14, a23, a24, a34) = (1i64, 3, 5, 7, 11, 13);
        let m = IntMatrix::from_rows(&[
            [0, a12, a13, a14],
            [-a12, 0, a23, a24],
            [-a13, -a23, 0, a34],
            [-a14, -a24, -a34, 0],
        ]);
        assert_eq!(
            pfaffian(&m).unwrap(),
            BigInt::from(a12 * a34 - a13 * a24 + a14 * a23)
        );
        assert_eq!(pfaffian(&IntMatrix::zeros(0, 0)).unwrap(), BigInt::one());
    }

    #[test]
    fn pfaffian_rejects_bad_input() {
        assert_eq!(pfaffian(&IntMatrix::zeros(3, 3)), Err(Error::OddDimension(3)));
        let m = IntMatrix::from_rows(&[[0, 1], [1, 0]]);
        assert_eq!(pfaffian(&m), Err(Error::NotAntisymmetric));
        let m = IntMatrix::from_rows(&[[1, 1], [-1, 0]]);
        assert_eq!(pfaffian(&m), Err(Error::NotAntisymmetric));
    }

    fn square(max: usize) -> impl Strategy<Value = Vec<Vec<i64>>> {
        (0..=max).prop_flat_map(|n| {
            proptest::collection::vec(proptest::collection::vec(-9i64..=9, n), n)
        })
    }

    fn antisymmetric(max_half: usize) -> impl Strategy<Value = IntMatrix> {
        (0..=max_half).prop_flat_map(|h| {
            let n = 2 * h;
            proptest::collection::vec(-20i64..=20, n * n).prop_map(move |v| {
                IntMatrix::from_fn(n, n, |i, j| match i.cmp(&j) {
                    core::cmp::Ordering::Less => BigInt::from(v[i * n + j]),
                    core::cmp::Ordering::Equal => BigInt::zero(),
                    core::cmp::Ordering::Greater => -BigInt::from(v[j * n + i]),
                })
            })
        })
    }

    proptest! {
        #[test]
        fn binomial_symmetry(n in 0u64..80, k in 0i64..80) {
            prop_assume!(k as u64 <= n);
            prop_assert_eq!(binomial(n, k), binomial(n, n as i64 - k));
        }

        #[test]
        fn bareiss_matches_cofactor(rows in square(5)) {
            let m = IntMatrix::from_rows(&rows);
            prop_assert_eq!(det_exact(&m).unwrap(), cofactor_det(&rows));
        }

        #[test]
        fn pfaffian_squares_to_determinant(m in antisymmetric(4)) {
            let pf = pfaffian(&m).unwrap();
            prop_assert_eq!(&pf * &pf, det_exact(&m).unwrap());
        }

        #[test]
        fn rational_reciprocal(a in -1000i64..1000, b in -1000i64..1000) {
            prop_assume!(a != 0 && b != 0);
            let q = BigRational::new(BigInt::from(a), BigInt::from(b));
            let inv = BigRational::new(BigInt::from(b), BigInt::from(a));
            prop_assert_eq!(q * inv, BigRational::one());
        }
    }

    #[test]
    fn rational_is_reduced() {
        let q = BigRational::new(BigInt::from(6), BigInt::from(-4));
        assert_eq!(q.numer(), &BigInt::from(-3));
        assert_eq!(q.denom(), &BigInt::from(2));
        assert!(q.is_negative());
        assert_eq!(rational_to_integer(&(q.clone() * BigInt::from(2))), Some(BigInt::from(-3)));
        assert_eq!(rational_to_integer(&q), None);
    }
}
