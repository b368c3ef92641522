//! Linear algebra over F₂ on bit-packed vectors.
//!
//! A [`SigVec`] stores an element of F₂ⁿ as an `n`-bit mask where bit `k` is the
//! coefficient of the standard basis vector `e_k`. The textual form is written
//! most-significant bit first, so `"011"` is `e_0 + e_1`.

pub mod poly;

use std::fmt;
use std::ops::{BitXor, BitXorAssign};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub use poly::{
    find_circular_params, trinomial_is_irreducible, trinomial_is_primitive, trinomial_root_order, Poly2,
    TrinomialParams,
};

/// Largest supported wire count.
pub const MAX_WIRES: usize = 30;

pub(crate) fn check_wires(n: usize) -> Result<()> {
    if n == 0 || n > MAX_WIRES {
        return Err(Error::WireCount(n));
    }
    Ok(())
}

#[inline]
pub(crate) fn parity(x: u32) -> bool {
    x.count_ones() & 1 == 1
}

#[inline]
pub(crate) fn low_mask(n: usize) -> u32 {
    if n >= 32 {
        u32::MAX
    } else {
        (1u32 << n) - 1
    }
}

/// An element of F₂ⁿ.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct SigVec {
    bits: u32,
    n: u8,
}

impl SigVec {
    pub fn new(bits: u32, n: usize) -> Result<Self> {
        check_wires(n)?;
        if bits & !low_mask(n) != 0 {
            return Err(Error::BitsOutOfRange { bits, n });
        }
        Ok(Self { bits, n: n as u8 })
    }

    #[inline]
    pub(crate) fn from_raw(bits: u32, n: usize) -> Self {
        debug_assert!(bits & !low_mask(n) == 0);
        Self { bits, n: n as u8 }
    }

    /// The standard basis vector `e_k`.
    pub fn unit(k: usize, n: usize) -> Result<Self> {
        check_wires(n)?;
        if k >= n {
            return Err(Error::WireOutOfRange { wire: k, n });
        }
        Ok(Self::from_raw(1 << k, n))
    }

    pub fn zero(n: usize) -> Result<Self> {
        Self::new(0, n)
    }

    /// Parses the `i_{n-1} … i_0` shorthand, e.g. `"011"`.
    pub fn parse(s: &str) -> Result<Self> {
        let n = s.len();
        check_wires(n)?;
        let bits = u32::from_str_radix(s, 2).map_err(|e| Error::Invalid(e.to_string()))?;
        Self::new(bits, n)
    }

    #[inline]
    pub fn bits(self) -> u32 {
        self.bits
    }

    #[inline]
    pub fn dim(self) -> usize {
        self.n as usize
    }

    #[inline]
    pub fn is_zero(self) -> bool {
        self.bits == 0
    }

    #[inline]
    pub fn bit(self, k: usize) -> bool {
        (self.bits >> k) & 1 == 1
    }

    pub fn weight(self) -> u32 {
        self.bits.count_ones()
    }

    /// Inner product ⟨self, other⟩ over F₂.
    #[inline]
    pub fn dot(self, other: SigVec) -> bool {
        debug_assert_eq!(self.n, other.n);
        parity(self.bits & other.bits)
    }

    /// Index of the set bit if this is a standard basis vector.
    pub fn as_unit(self) -> Option<usize> {
        (self.bits.count_ones() == 1).then(|| self.bits.trailing_zeros() as usize)
    }
}

impl BitXor for SigVec {
    type Output = SigVec;

    fn bitxor(self, rhs: SigVec) -> SigVec {
        debug_assert_eq!(self.n, rhs.n);
        SigVec { bits: self.bits ^ rhs.bits, n: self.n }
    }
}

impl BitXorAssign for SigVec {
    fn bitxor_assign(&mut self, rhs: SigVec) {
        debug_assert_eq!(self.n, rhs.n);
        self.bits ^= rhs.bits;
    }
}

impl fmt::Display for SigVec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:0width$b}", self.bits, width = self.n as usize)
    }
}

impl fmt::Debug for SigVec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "SigVec({self})")
    }
}

/// Dense matrix over F₂; row `i` is a bit mask over the columns.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct F2Matrix {
    rows: Vec<u32>,
    cols: usize,
}

impl F2Matrix {
    pub fn from_rows(rows: Vec<u32>, cols: usize) -> Result<Self> {
        check_wires(cols)?;
        let mask = low_mask(cols);
        if let Some(&bad) = rows.iter().find(|&&r| r & !mask != 0) {
            return Err(Error::BitsOutOfRange { bits: bad, n: cols });
        }
        Ok(Self { rows, cols })
    }

    pub(crate) fn from_rows_unchecked(rows: Vec<u32>, cols: usize) -> Self {
        Self { rows, cols }
    }

    pub fn from_sigvecs(vs: &[SigVec]) -> Result<Self> {
        let cols = vs.first().map(|v| v.dim()).ok_or(Error::Invalid("empty row list".into()))?;
        if let Some(v) = vs.iter().find(|v| v.dim() != cols) {
            return Err(Error::Dimension { expected: cols, actual: v.dim() });
        }
        Ok(Self { rows: vs.iter().map(|v| v.bits()).collect(), cols })
    }

    pub fn identity(n: usize) -> Self {
        Self { rows: (0..n).map(|i| 1u32 << i).collect(), cols: n }
    }

    pub fn zero(rows: usize, cols: usize) -> Self {
        Self { rows: vec![0; rows], cols }
    }

    pub fn nrows(&self) -> usize {
        self.rows.len()
    }

    pub fn ncols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows.len() == self.cols
    }

    pub fn rows(&self) -> &[u32] {
        &self.rows
    }

    pub fn row(&self, i: usize) -> SigVec {
        SigVec::from_raw(self.rows[i], self.cols)
    }

    pub fn get(&self, i: usize, j: usize) -> bool {
        (self.rows[i] >> j) & 1 == 1
    }

    pub fn set(&mut self, i: usize, j: usize, value: bool) {
        if value {
            self.rows[i] |= 1 << j;
        } else {
            self.rows[i] &= !(1 << j);
        }
    }

    pub fn is_identity(&self) -> bool {
        self.is_square() && self.rows.iter().enumerate().all(|(i, &r)| r == 1 << i)
    }

    pub fn is_zero(&self) -> bool {
        self.rows.iter().all(|&r| r == 0)
    }

    /// Rank over F₂.
    pub fn rank(&self) -> usize {
        let mut rows = self.rows.clone();
        let mut rank = 0;
        for col in 0..self.cols {
            let bit = 1u32 << col;
            let Some(p) = (rank..rows.len()).find(|&r| rows[r] & bit != 0) else {
                continue;
            };
            rows.swap(rank, p);
            let pivot = rows[rank];
            for (r, row) in rows.iter_mut().enumerate() {
                if r != rank && *row & bit != 0 {
                    *row ^= pivot;
                }
            }
            rank += 1;
        }
        rank
    }

    /// Matrix product `self · rhs`.
    pub fn mul(&self, rhs: &F2Matrix) -> Result<F2Matrix> {
        if self.cols != rhs.nrows() {
            return Err(Error::Dimension { expected: self.cols, actual: rhs.nrows() });
        }
        let rows = self
            .rows
            .iter()
            .map(|&r| {
                let mut acc = 0u32;
                let mut bits = r;
                while bits != 0 {
                    let j = bits.trailing_zeros() as usize;
                    acc ^= rhs.rows[j];
                    bits &= bits - 1;
                }
                acc
            })
            .collect();
        Ok(F2Matrix { rows, cols: rhs.cols })
    }

    pub fn add(&self, rhs: &F2Matrix) -> Result<F2Matrix> {
        if self.cols != rhs.cols || self.nrows() != rhs.nrows() {
            return Err(Error::Dimension { expected: self.nrows(), actual: rhs.nrows() });
        }
        let rows = self.rows.iter().zip(&rhs.rows).map(|(a, b)| a ^ b).collect();
        Ok(F2Matrix { rows, cols: self.cols })
    }

    pub fn transpose(&self) -> F2Matrix {
        let mut out = vec![0u32; self.cols];
        for (i, &r) in self.rows.iter().enumerate() {
            for (j, o) in out.iter_mut().enumerate() {
                if (r >> j) & 1 == 1 {
                    *o |= 1 << i;
                }
            }
        }
        F2Matrix { rows: out, cols: self.rows.len() }
    }

    pub fn inverse(&self) -> Result<F2Matrix> {
        if !self.is_square() {
            return Err(Error::Dimension { expected: self.cols, actual: self.nrows() });
        }
        let n = self.cols;
        let mut a = self.rows.clone();
        let mut inv: Vec<u32> = (0..n).map(|i| 1u32 << i).collect();
        for col in 0..n {
            let bit = 1u32 << col;
            let p = (col..n).find(|&r| a[r] & bit != 0).ok_or(Error::Singular)?;
            a.swap(col, p);
            inv.swap(col, p);
            for r in 0..n {
                if r != col && a[r] & bit != 0 {
                    a[r] ^= a[col];
                    inv[r] ^= inv[col];
                }
            }
        }
        Ok(F2Matrix { rows: inv, cols: n })
    }

    /// `self^e` by repeated squaring.
    pub fn pow(&self, mut e: u64) -> Result<F2Matrix> {
        if !self.is_square() {
            return Err(Error::Dimension { expected: self.cols, actual: self.nrows() });
        }
        let mut base = self.clone();
        let mut acc = F2Matrix::identity(self.cols);
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base)?;
            }
            base = base.mul(&base)?;
            e >>= 1;
        }
        Ok(acc)
    }

    /// Applies `CX(control, target)` as a row operation: row `target` += row `control`.
    pub fn add_row(&mut self, control: usize, target: usize) {
        self.rows[target] ^= self.rows[control];
    }
}

impl fmt::Display for F2Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, r) in self.rows.iter().enumerate() {
            if i > 0 {
                writeln!(f)?;
            }
            write!(f, "{:0width$b}", r, width = self.cols)?;
        }
        Ok(())
    }
}

/// `n` linearly independent vectors of F₂ⁿ, ordered by wire.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Basis {
    vectors: Vec<SigVec>,
}

impl Basis {
    pub fn new(vectors: Vec<SigVec>) -> Result<Self> {
        let n = vectors.len();
        check_wires(n)?;
        if let Some(v) = vectors.iter().find(|v| v.dim() != n) {
            return Err(Error::Dimension { expected: n, actual: v.dim() });
        }
        let rank = F2Matrix::from_sigvecs(&vectors)?.rank();
        if rank != n {
            return Err(Error::NotABasis { rank, n });
        }
        Ok(Self { vectors })
    }

    pub fn from_matrix(m: &F2Matrix) -> Result<Self> {
        Self::new((0..m.nrows()).map(|i| m.row(i)).collect())
    }

    pub(crate) fn from_raw_unchecked(rows: &[u32]) -> Self {
        let n = rows.len();
        Self { vectors: rows.iter().map(|&r| SigVec::from_raw(r, n)).collect() }
    }

    pub fn standard(n: usize) -> Result<Self> {
        check_wires(n)?;
        Ok(Self { vectors: (0..n).map(|k| SigVec::from_raw(1 << k, n)).collect() })
    }

    pub fn dim(&self) -> usize {
        self.vectors.len()
    }

    pub fn vectors(&self) -> &[SigVec] {
        &self.vectors
    }

    pub fn to_matrix(&self) -> F2Matrix {
        F2Matrix::from_rows_unchecked(self.vectors.iter().map(|v| v.bits()).collect(), self.dim())
    }

    pub fn is_standard(&self) -> bool {
        self.vectors.iter().enumerate().all(|(k, v)| v.bits() == 1 << k)
    }

    /// `σ` with `v_k = e_σ(k)` when every vector is a standard basis vector.
    pub fn as_permutation(&self) -> Option<Vec<usize>> {
        self.vectors.iter().map(|v| v.as_unit()).collect()
    }
}

/// Rank of a nonempty matrix over F₂.
pub fn rank(m: &F2Matrix) -> usize {
    m.rank()
}

/// Whether `vs` (of length `n`, each in F₂ⁿ) is a basis of F₂ⁿ.
pub fn is_basis(vs: &[SigVec]) -> Result<bool> {
    let n = vs.len();
    check_wires(n)?;
    if let Some(v) = vs.iter().find(|v| v.dim() != n) {
        return Err(Error::Dimension { expected: n, actual: v.dim() });
    }
    Ok(F2Matrix::from_sigvecs(vs)?.rank() == n)
}
