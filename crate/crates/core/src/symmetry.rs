//! The symmetric-set partition of coefficient-squares and its combinatorics.
//!
//! Coefficient-squares `|ψ_j|²` are grouped by the number of `u₊` bits in the
//! basis index `j`. For every pair of final states, the real part of their
//! overlap splits the squares into a constant group (counted by `R_k`) and a
//! `cos 2θ`-weighted group (counted by `L_k`); those counts determine the
//! orthogonality threshold `T(n)` and the constructions in
//! [`crate::closed_form`].

use num_complex::Complex64;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::qstate::StateVector;
use crate::tolerances as tol;

/// Binomial coefficient with the `C(a, b) = 0` convention outside `0 ≤ b ≤ a`.
fn binomial(a: i64, b: i64) -> usize {
    if b < 0 || b > a || a < 0 {
        return 0;
    }
    let (a, b) = (a as u64, b as u64);
    let b = b.min(a - b);
    let mut acc: u64 = 1;
    for i in 0..b {
        acc = acc * (a - i) / (i + 1);
    }
    acc as usize
}

/// Per-`k` sizes of the symmetric sets together with the `R_k`/`L_k` counts.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PartitionTable {
    n: usize,
    set_sizes: Vec<usize>,
    r_counts: Vec<usize>,
    l_counts: Vec<usize>,
}

impl PartitionTable {
    pub fn n(&self) -> usize {
        self.n
    }

    /// `|S_k| = C(n, k)` for `k = 0..=n`.
    pub fn set_sizes(&self) -> &[usize] {
        &self.set_sizes
    }

    pub fn r_counts(&self) -> &[usize] {
        &self.r_counts
    }

    pub fn l_counts(&self) -> &[usize] {
        &self.l_counts
    }

    pub fn set_size(&self, k: usize) -> usize {
        self.set_sizes[k]
    }

    pub fn r(&self, k: usize) -> usize {
        self.r_counts[k]
    }

    pub fn l(&self, k: usize) -> usize {
        self.l_counts[k]
    }
}

/// `k` such that `|ψ_j|² ∈ S_k`: the number of `u₊` bits of `j`.
pub fn partition_index(j: usize, n: usize) -> Result<usize> {
    let dim = dim_checked(n)?;
    if j >= dim {
        return Err(Error::BasisIndexOutOfRange { index: j, dim });
    }
    Ok(j.count_ones() as usize)
}

/// Whether `|ψ_r|²` sits on the constant (RHS) side of the Real equation for
/// the sensor pair `(i, j)`: bits `i` and `j` of `r` (most-significant first)
/// are equal.
pub fn rhs_membership(r: usize, i: usize, j: usize, n: usize) -> Result<bool> {
    let dim = dim_checked(n)?;
    if i == j {
        return Err(Error::DomainError(format!(
            "sensor pair must be distinct, got ({i}, {i})"
        )));
    }
    if i >= n || j >= n {
        return Err(Error::SensorIndexOutOfRange {
            index: i.max(j),
            n_sensors: n,
        });
    }
    if r >= dim {
        return Err(Error::BasisIndexOutOfRange { index: r, dim });
    }
    let bit_i = (r >> (n - 1 - i)) & 1;
    let bit_j = (r >> (n - 1 - j)) & 1;
    Ok(bit_i == bit_j)
}

fn dim_checked(n: usize) -> Result<usize> {
    if n == 0 || n > tol::MAX_SENSORS {
        return Err(Error::SensorCountOutOfRange(n));
    }
    Ok(1usize << n)
}

/// Builds `|S_k|`, `R_k = C(n−2, k−2) + C(n−2, k)` and `L_k = 2·C(n−2, k−1)`
/// for `k = 0..=n`. Requires `n ≥ 2`.
pub fn build_partition_table(n: usize) -> Result<PartitionTable> {
    if n < 2 {
        return Err(Error::DomainError(format!(
            "partition table requires n >= 2, got {n}"
        )));
    }
    dim_checked(n)?;
    let m = n as i64;
    let set_sizes: Vec<usize> = (0..=m).map(|k| binomial(m, k)).collect();
    let r_counts: Vec<usize> = (0..=m)
        .map(|k| binomial(m - 2, k - 2) + binomial(m - 2, k))
        .collect();
    let l_counts: Vec<usize> = (0..=m).map(|k| 2 * binomial(m - 2, k - 1)).collect();
    debug_assert_eq!(set_sizes.iter().sum::<usize>(), 1usize << n);
    debug_assert!((0..=n).all(|k| r_counts[k] + l_counts[k] == set_sizes[k]));
    Ok(PartitionTable {
        n,
        set_sizes,
        r_counts,
        l_counts,
    })
}

/// Orthogonality threshold `T(n) = ½·arccos(−(⌈n/2⌉−1)/⌈n/2⌉)` in degrees,
/// for `n ≥ 3`. Mutually orthogonal final states exist exactly for
/// `θ ∈ [T, 180−T]`.
pub fn threshold_deg(n: usize) -> Result<f64> {
    if n < 3 {
        return Err(Error::DomainError(format!(
            "threshold is defined for n >= 3, got {n} (the two-sensor case uses T = 45)"
        )));
    }
    dim_checked(n)?;
    Ok(threshold_deg_any(n))
}

/// Same formula without the `n ≥ 3` guard; yields 45° at `n = 2`.
pub(crate) fn threshold_deg_any(n: usize) -> f64 {
    let half = (n as f64 / 2.0).ceil();
    0.5 * (-(half - 1.0) / half).acos().to_degrees()
}

/// `min_{1 ≤ k ≤ n−1} R_k/L_k = (⌈n/2⌉−1)/⌈n/2⌉` with the smallest minimizing
/// `k`, which is `⌊n/2⌋`. Requires `n ≥ 3`.
pub fn min_ratio(n: usize) -> Result<(f64, usize)> {
    if n < 3 {
        return Err(Error::DomainError(format!(
            "min ratio is defined for n >= 3, got {n}"
        )));
    }
    let table = build_partition_table(n)?;
    let mut best: Option<(f64, usize)> = None;
    for k in 1..n {
        let ratio = table.r(k) as f64 / table.l(k) as f64;
        match best {
            Some((r, _)) if ratio >= r => {}
            _ => best = Some((ratio, k)),
        }
    }
    Ok(best.expect("n >= 3 guarantees at least one interior k"))
}

/// Deviation from symmetry of coefficients:
/// `Σ_k Σ_{i<j ∈ S_k} (|ψ_i|² − |ψ_j|²)²`, zero iff within every symmetric
/// set all coefficient-squares agree.
pub fn symmetry_index(psi: &StateVector) -> f64 {
    let n = psi.n_sensors();
    let squares = psi.coefficient_squares();
    let mut groups: Vec<Vec<f64>> = vec![Vec::new(); n + 1];
    for (j, &s) in squares.iter().enumerate() {
        groups[j.count_ones() as usize].push(s);
    }
    let mut total = 0.0;
    for group in &groups {
        for a in 0..group.len() {
            for b in (a + 1)..group.len() {
                let d = group[a] - group[b];
                total += d * d;
            }
        }
    }
    total
}

/// A renumbering of the sensors: a bijection on `{0, …, n−1}`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SensorPermutation {
    n: usize,
    pi: Vec<usize>,
}

impl SensorPermutation {
    /// `pi[i]` is the old label of the sensor that becomes sensor `i`.
    pub fn new(pi: Vec<usize>) -> Result<Self> {
        let n = pi.len();
        dim_checked(n)?;
        let mut seen = vec![false; n];
        for &v in &pi {
            if v >= n || seen[v] {
                return Err(Error::DomainError(format!(
                    "not a bijection on 0..{n}: {pi:?}"
                )));
            }
            seen[v] = true;
        }
        Ok(Self { n, pi })
    }

    pub fn identity(n: usize) -> Result<Self> {
        Self::new((0..n).collect())
    }

    /// Transposition of sensors `a` and `b`.
    pub fn swap(n: usize, a: usize, b: usize) -> Result<Self> {
        if a >= n || b >= n {
            return Err(Error::SensorIndexOutOfRange {
                index: a.max(b),
                n_sensors: n,
            });
        }
        let mut pi: Vec<usize> = (0..n).collect();
        pi.swap(a, b);
        Self::new(pi)
    }

    /// Uniformly random permutation (Fisher–Yates).
    pub fn random<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Result<Self> {
        dim_checked(n)?;
        let mut pi: Vec<usize> = (0..n).collect();
        for i in (1..n).rev() {
            let j = rng.random_range(0..=i);
            pi.swap(i, j);
        }
        Self::new(pi)
    }

    /// All `n!` permutations in lexicographic order. Guarded to `n ≤ 8`.
    pub fn enumerate(n: usize) -> Result<Vec<Self>> {
        if n == 0 || n > 8 {
            return Err(Error::DomainError(format!(
                "permutation enumeration supported for 1 <= n <= 8, got {n}"
            )));
        }
        let mut out = Vec::new();
        let mut current: Vec<usize> = (0..n).collect();
        permute_rec(&mut current, 0, &mut out);
        out.sort_by(|a, b| a.pi.cmp(&b.pi));
        Ok(out)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn pi(&self) -> &[usize] {
        &self.pi
    }

    pub fn is_identity(&self) -> bool {
        self.pi.iter().enumerate().all(|(i, &v)| i == v)
    }

    /// Index map on basis states: bit `i` (most-significant first) of the
    /// result is bit `pi[i]` of `j`.
    pub fn basis_index_map(&self, j: usize) -> usize {
        let n = self.n;
        let mut out = 0usize;
        for (i, &src) in self.pi.iter().enumerate() {
            let bit = (j >> (n - 1 - src)) & 1;
            out |= bit << (n - 1 - i);
        }
        out
    }
}

fn permute_rec(current: &mut Vec<usize>, start: usize, out: &mut Vec<SensorPermutation>) {
    let n = current.len();
    if start == n {
        out.push(SensorPermutation {
            n,
            pi: current.clone(),
        });
        return;
    }
    for i in start..n {
        current.swap(start, i);
        permute_rec(current, start + 1, out);
        current.swap(start, i);
    }
}

/// Renumbers sensors: `ψ'_j = ψ_{Π(j)}` where `Π` permutes the bit positions
/// of `j` by the sensor permutation. Leaves the objective `P` unchanged.
pub fn permute_state(psi: &StateVector, perm: &SensorPermutation) -> Result<StateVector> {
    if perm.n() != psi.n_sensors() {
        return Err(Error::DimensionMismatch {
            left: perm.n(),
            right: psi.n_sensors(),
        });
    }
    let dim = psi.dim();
    let mut amps = vec![Complex64::ZERO; dim];
    for (j, amp) in amps.iter_mut().enumerate() {
        *amp = psi.amp(perm.basis_index_map(j));
    }
    StateVector::new(psi.n_sensors(), amps)
}

/// Coefficient-square average of two states:
/// `ψ_avg,j = √((|a_j|² + |b_j|²)/2)`, non-negative real, unit norm.
/// Input phases are discarded; the objective depends only on the squares.
pub fn average_state(a: &StateVector, b: &StateVector) -> Result<StateVector> {
    if a.dim() != b.dim() {
        return Err(Error::DimensionMismatch {
            left: a.dim(),
            right: b.dim(),
        });
    }
    let amps: Vec<Complex64> = a
        .amps()
        .iter()
        .zip(b.amps())
        .map(|(x, y)| {
            Complex64::new(((x.norm_sqr() + y.norm_sqr()) / 2.0).sqrt(), 0.0)
        })
        .collect();
    StateVector::new(a.n_sensors(), amps)
}
