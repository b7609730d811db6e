//! The algebraic degree of semidefinite programming `δ(m, n, r)` and the
//! number of critical points of its rank-`r` Burer–Monteiro factorization.
//!
//! `δ` is a sum over index sets `I ⊂ {1..n}` of products of Pfaffians built
//! from the numbers
//!
//! ```text
//! ψ_i     = 2^(i−1)
//! ψ_{i,j} = Σ_{k=i}^{j−1} C(i+j−2, k)        (i < j)
//! ```

use alloc::vec::Vec;
use core::fmt;

use num_traits::Zero;

use crate::arith::{binomial, pfaffian, pow2, BigInt, IntMatrix};
use crate::group::deg_so;
use crate::Error;

/// The triple `(m, n, r)`: number of linear constraints, matrix size, rank.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct DeltaQuery {
    pub m: u64,
    pub n: u32,
    pub r: u32,
}

impl DeltaQuery {
    pub fn new(m: u64, n: u32, r: u32) -> Result<Self, Error> {
        if n == 0 {
            return Err(Error::OutOfDomain("matrix size n must be positive"));
        }
        if r > n {
            return Err(Error::OutOfDomain("rank r must satisfy r <= n"));
        }
        Ok(DeltaQuery { m, n, r })
    }
}

impl fmt::Display for DeltaQuery {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {}, {})", self.m, self.n, self.r)
    }
}

/// A strictly increasing sequence of positive indices.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct IndexSeq(Vec<u32>);

impl IndexSeq {
    pub fn new(indices: Vec<u32>) -> Result<Self, Error> {
        if indices.first() == Some(&0) {
            return Err(Error::OutOfDomain("indices start at 1"));
        }
        if indices.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::NotIncreasing);
        }
        Ok(IndexSeq(indices))
    }

    pub fn as_slice(&self) -> &[u32] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Indices of `1..=n` not in `self`.
    pub fn complement(&self, n: u32) -> IndexSeq {
        IndexSeq((1..=n).filter(|i| self.0.binary_search(i).is_err()).collect())
    }
}

/// `ψ_i = 2^(i−1)`.
pub fn psi_single(i: u32) -> BigInt {
    assert!(i >= 1, "psi index starts at 1");
    pow2(u64::from(i - 1))
}

/// `ψ_{i,j} = Σ_{k=i}^{j−1} C(i+j−2, k)` for `1 ≤ i < j`.
pub fn psi_pair(i: u32, j: u32) -> Result<BigInt, Error> {
    if i == 0 || i >= j {
        return Err(Error::OutOfDomain("psi_pair needs 1 <= i < j"));
    }
    let top = u64::from(i + j - 2);
    Ok((i..j).map(|k| binomial(top, i64::from(k))).sum())
}

/// The antisymmetric matrix whose Pfaffian is `ψ_I`.
///
/// For even `|I|` its `(k, l)` entry is `ψ_{i_k, i_l}` above the diagonal;
/// for odd `|I|` an extra leading index `0` is added with `ψ_{0,k} = ψ_{i_k}`.
pub fn psi_matrix(seq: &IndexSeq) -> IntMatrix {
    let idx = seq.as_slice();
    let pad = idx.len() % 2;
    let size = idx.len() + pad;
    // ψ between padded positions; position 0 is the extra index when padded
    let entry = |k: usize, l: usize| -> BigInt {
        match (pad, k) {
            (1, 0) => psi_single(idx[l - 1]),
            _ => psi_pair(idx[k - pad], idx[l - pad]).expect("strictly increasing"),
        }
    };
    IntMatrix::from_fn(size, size, |k, l| match k.cmp(&l) {
        core::cmp::Ordering::Less => entry(k, l),
        core::cmp::Ordering::Equal => BigInt::zero(),
        core::cmp::Ordering::Greater => -entry(l, k),
    })
}

/// `ψ_I`: `1` for empty `I`, `ψ_{i}` for one index, `ψ_{i,j}` for two, and
/// the Pfaffian of [`psi_matrix`] in general.
pub fn psi_seq(seq: &IndexSeq) -> BigInt {
    pfaffian(&psi_matrix(seq)).expect("psi matrix is even and antisymmetric")
}

/// `δ(m, n, r) = Σ_I ψ_I ψ_{I^c}` over `I ⊂ {1..n}` with `|I| = n − r` and
/// `Σ I = m`.
pub fn delta(q: &DeltaQuery) -> BigInt {
    let mut total = BigInt::zero();
    for_each_subset_with_sum(q.n, (q.n - q.r) as usize, q.m, |subset| {
        let seq = IndexSeq(subset.to_vec());
        total += psi_seq(&seq) * psi_seq(&seq.complement(q.n));
    });
    total
}

/// Calls `f` with every strictly increasing `k`-subset of `1..=n` summing to
/// `target`, in lexicographic order.
pub fn for_each_subset_with_sum<F: FnMut(&[u32])>(n: u32, k: usize, target: u64, mut f: F) {
    let mut chosen = Vec::with_capacity(k);
    subset_rec(n, k, target, 1, 0, &mut chosen, &mut f);
}

fn subset_rec<F: FnMut(&[u32])>(
    n: u32,
    k: usize,
    target: u64,
    next: u32,
    sum: u64,
    chosen: &mut Vec<u32>,
    f: &mut F,
) {
    let left = (k - chosen.len()) as u64;
    if left == 0 {
        if sum == target {
            f(chosen);
        }
        return;
    }
    let lo = u64::from(next);
    let hi = u64::from(n);
    if lo + left - 1 > hi {
        return;
    }
    // smallest and largest completions from `next` onward
    let min_rest = left * lo + left * (left - 1) / 2;
    let max_rest = left * hi - left * (left - 1) / 2;
    if sum + min_rest > target || sum + max_rest < target {
        return;
    }
    for v in next..=n {
        chosen.push(v);
        subset_rec(n, k, target, v + 1, sum + u64::from(v), chosen, f);
        chosen.pop();
    }
}

/// `2 · deg SO(r) · δ(m, n, r)`, the number of critical points of the
/// rank-`r` factorized program. Needs `r ≥ 1`.
pub fn critical_count(q: &DeltaQuery) -> Result<BigInt, Error> {
    if q.r == 0 {
        return Err(Error::OutOfDomain("critical count needs rank r >= 1"));
    }
    Ok(deg_so(q.r) * delta(q) * 2)
}
