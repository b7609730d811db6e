//! Closed determinant formulas for the degrees of SO(n), O(n) and Sp(r).

use core::fmt;
use core::str::FromStr;

use crate::arith::{binomial, det_exact, pow2, BigInt, IntMatrix};
use crate::Error;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum GroupFamily {
    /// Special orthogonal group, parameter `n` (matrix size).
    SO,
    /// Orthogonal group, parameter `n` (matrix size).
    O,
    /// Symplectic group, parameter `r` (matrices of size `2r`).
    Sp,
}

impl GroupFamily {
    pub fn name(self) -> &'static str {
        match self {
            GroupFamily::SO => "SO",
            GroupFamily::O => "O",
            GroupFamily::Sp => "Sp",
        }
    }
}

impl fmt::Display for GroupFamily {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for GroupFamily {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Error> {
        [GroupFamily::SO, GroupFamily::O, GroupFamily::Sp]
            .into_iter()
            .find(|g| g.name().eq_ignore_ascii_case(s))
            .ok_or(Error::OutOfDomain("group family must be one of so, o, sp"))
    }
}

/// A group of one of the three families together with its size parameter.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct GroupId {
    family: GroupFamily,
    parameter: u32,
}

impl GroupId {
    pub fn new(family: GroupFamily, parameter: u32) -> Result<Self, Error> {
        if parameter == 0 {
            return Err(Error::OutOfDomain("group parameter must be at least 1"));
        }
        Ok(GroupId { family, parameter })
    }

    pub fn family(&self) -> GroupFamily {
        self.family
    }

    pub fn parameter(&self) -> u32 {
        self.parameter
    }

    /// Degree by the closed formula.
    pub fn degree(&self) -> BigInt {
        match self.family {
            GroupFamily::SO => deg_so(self.parameter),
            GroupFamily::O => deg_o(self.parameter),
            GroupFamily::Sp => deg_sp(self.parameter),
        }
    }
}

impl fmt::Display for GroupId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}({})", self.family, self.parameter)
    }
}

/// The `⌊n/2⌋ × ⌊n/2⌋` matrix `C(2n−2i−2j, n−2i)` (one-based `i`, `j`).
pub fn so_degree_matrix(n: u32) -> IntMatrix {
    let half = (n / 2) as usize;
    let n = i64::from(n);
    IntMatrix::from_fn(half, half, |i, j| {
        let (i, j) = (i as i64 + 1, j as i64 + 1);
        binomial((2 * n - 2 * i - 2 * j) as u64, n - 2 * i)
    })
}

/// The `r × r` matrix `C(2i+2j−2, 2i−1)` (one-based `i`, `j`).
pub fn sp_degree_matrix(r: u32) -> IntMatrix {
    let r = r as usize;
    IntMatrix::from_fn(r, r, |i, j| {
        let (i, j) = (i as i64 + 1, j as i64 + 1);
        binomial((2 * i + 2 * j - 2) as u64, 2 * i - 1)
    })
}

/// `deg SO(n) = 2^(n−1) · det C(2n−2i−2j, n−2i)`.
///
/// For `n = 1` the matrix is empty and the degree is `1`.
///
/// # Panics
///
/// If `n == 0`.
pub fn deg_so(n: u32) -> BigInt {
    assert!(n >= 1, "SO(n) needs n >= 1");
    let det = det_exact(&so_degree_matrix(n)).expect("square by construction");
    pow2(u64::from(n - 1)) * det
}

/// `deg O(n) = 2 · deg SO(n)`, the two components being translates.
pub fn deg_o(n: u32) -> BigInt {
    deg_so(n) * 2
}

/// `deg Sp(r) = det C(2i+2j−2, 2i−1)`.
///
/// # Panics
///
/// If `r == 0`.
pub fn deg_sp(r: u32) -> BigInt {
    assert!(r >= 1, "Sp(r) needs r >= 1");
    det_exact(&sp_degree_matrix(r)).expect("square by construction")
}
