//! Polynomials over F₂ packed into a `u64` and the trinomial machinery used by
//! the circular-topology construction.

use std::fmt;
use std::ops::{Add, Mul, Rem};

use crate::error::{Error, Result};

/// Largest degree for which `2^n - 1` is factored (trial division).
pub const MAX_FACTOR_DEGREE: usize = 24;

/// Largest degree accepted by the irreducibility test (products must fit in 64 bits).
const MAX_POLY_DEGREE: usize = 31;

/// A polynomial over F₂; bit `i` is the coefficient of `x^i`.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Default)]
pub struct Poly2(pub u64);

impl Poly2 {
    pub const ZERO: Poly2 = Poly2(0);
    pub const ONE: Poly2 = Poly2(1);
    pub const X: Poly2 = Poly2(2);

    pub fn trinomial(n: usize, l: usize) -> Poly2 {
        Poly2((1 << n) | (1 << l) | 1)
    }

    pub fn monomial(d: usize) -> Poly2 {
        Poly2(1 << d)
    }

    /// Degree, or `None` for the zero polynomial.
    pub fn degree(self) -> Option<usize> {
        (self.0 != 0).then(|| 63 - self.0.leading_zeros() as usize)
    }

    pub fn is_zero(self) -> bool {
        self.0 == 0
    }

    pub fn gcd(self, rhs: Poly2) -> Poly2 {
        let (mut a, mut b) = (self, rhs);
        while !b.is_zero() {
            let r = a % b;
            a = b;
            b = r;
        }
        a
    }

    pub fn mulmod(self, rhs: Poly2, m: Poly2) -> Poly2 {
        (self * rhs) % m
    }

    pub fn powmod(self, mut e: u64, m: Poly2) -> Poly2 {
        let mut base = self % m;
        let mut acc = Poly2::ONE % m;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mulmod(base, m);
            }
            base = base.mulmod(base, m);
            e >>= 1;
        }
        acc
    }
}

impl Add for Poly2 {
    type Output = Poly2;

    // coefficients live in F₂, so addition is XOR
    #[allow(clippy::suspicious_arithmetic_impl)]
    fn add(self, rhs: Poly2) -> Poly2 {
        Poly2(self.0 ^ rhs.0)
    }
}

impl Mul for Poly2 {
    type Output = Poly2;

    /// Carry-less product. Panics in debug builds if the result would overflow.
    fn mul(self, rhs: Poly2) -> Poly2 {
        if let (Some(a), Some(b)) = (self.degree(), rhs.degree()) {
            debug_assert!(a + b < 64, "product degree {} overflows", a + b);
        }
        let mut acc = 0u64;
        let mut b = rhs.0;
        let mut shift = 0;
        while b != 0 {
            if b & 1 == 1 {
                acc ^= self.0 << shift;
            }
            b >>= 1;
            shift += 1;
        }
        Poly2(acc)
    }
}

impl Rem for Poly2 {
    type Output = Poly2;

    fn rem(self, m: Poly2) -> Poly2 {
        let dm = m.degree().expect("division by zero polynomial");
        let mut r = self.0;
        while r != 0 {
            let dr = 63 - r.leading_zeros() as usize;
            if dr < dm {
                break;
            }
            r ^= m.0 << (dr - dm);
        }
        Poly2(r)
    }
}

impl fmt::Display for Poly2 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0 == 0 {
            return write!(f, "0");
        }
        let mut first = true;
        for d in (0..64).rev().filter(|&d| (self.0 >> d) & 1 == 1) {
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            match d {
                0 => write!(f, "1")?,
                1 => write!(f, "x")?,
                _ => write!(f, "x^{d}")?,
            }
        }
        Ok(())
    }
}

impl fmt::Debug for Poly2 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Poly2({self})")
    }
}

/// Distinct prime factors of `m` by trial division.
pub(crate) fn prime_factors(mut m: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut p = 2u64;
    while p * p <= m {
        if m.is_multiple_of(p) {
            out.push(p);
            while m.is_multiple_of(p) {
                m /= p;
            }
        }
        p += if p == 2 { 1 } else { 2 };
    }
    if m > 1 {
        out.push(m);
    }
    out
}

fn check_trinomial(n: usize, l: usize) -> Result<()> {
    if !(2..=MAX_POLY_DEGREE).contains(&n) || l == 0 || l >= n {
        return Err(Error::TrinomialExponent { n, l });
    }
    Ok(())
}

/// `x^(2^i) mod f` for `i = 0..=n`.
fn frobenius_powers(f: Poly2, n: usize) -> Vec<Poly2> {
    let mut out = Vec::with_capacity(n + 1);
    let mut cur = Poly2::X % f;
    out.push(cur);
    for _ in 0..n {
        cur = cur.mulmod(cur, f);
        out.push(cur);
    }
    out
}

/// Rabin's test: `f` of degree `n` is irreducible iff `x^(2^n) ≡ x (mod f)` and
/// `gcd(x^(2^(n/p)) - x, f) = 1` for every prime `p | n`.
pub fn poly_is_irreducible(f: Poly2) -> bool {
    let Some(n) = f.degree() else { return false };
    if n == 0 {
        return false;
    }
    if n > MAX_POLY_DEGREE {
        panic!("degree {n} exceeds supported maximum {MAX_POLY_DEGREE}");
    }
    let frob = frobenius_powers(f, n);
    let x = Poly2::X % f;
    if frob[n] != x {
        return false;
    }
    prime_factors(n as u64).into_iter().all(|p| {
        let h = frob[n / p as usize] + x;
        h.gcd(f).degree() == Some(0)
    })
}

/// Whether `x^n + x^l + 1` is irreducible over F₂.
pub fn trinomial_is_irreducible(n: usize, l: usize) -> Result<bool> {
    check_trinomial(n, l)?;
    Ok(poly_is_irreducible(Poly2::trinomial(n, l)))
}

/// Multiplicative order of `x` modulo an irreducible `f` of degree `n`.
pub(crate) fn root_order(f: Poly2, n: usize) -> u64 {
    let group = (1u64 << n) - 1;
    let mut r = group;
    for p in prime_factors(group) {
        while r.is_multiple_of(p) && Poly2::X.powmod(r / p, f) == Poly2::ONE {
            r /= p;
        }
    }
    r
}

/// Order of a root of `x^n + x^l + 1` in the multiplicative group of F_{2^n}.
pub fn trinomial_root_order(n: usize, l: usize) -> Result<u64> {
    check_trinomial(n, l)?;
    if n > MAX_FACTOR_DEGREE {
        return Err(Error::DegreeTooLarge { n });
    }
    let f = Poly2::trinomial(n, l);
    if !poly_is_irreducible(f) {
        return Err(Error::Reducible { n, l });
    }
    Ok(root_order(f, n))
}

pub fn trinomial_is_primitive(n: usize, l: usize) -> Result<bool> {
    if !trinomial_is_irreducible(n, l)? {
        return Ok(false);
    }
    Ok(trinomial_root_order(n, l)? == (1u64 << n) - 1)
}

fn gcd(a: usize, b: usize) -> usize {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

/// Parameters of the circular-topology gate stream built from `x^n + x^l + 1`.
#[derive(Clone, Copy, PartialEq, Eq, Debug, serde::Serialize, serde::Deserialize)]
pub struct TrinomialParams {
    n: usize,
    l: usize,
    k: usize,
    r: u64,
    q: u64,
}

impl TrinomialParams {
    /// Validates `(n, l)` and derives `k` (with `k·l ≡ -1 mod n`), `r` and `q`.
    pub fn new(n: usize, l: usize) -> Result<Self> {
        check_trinomial(n, l)?;
        if gcd(n, l) != 1 {
            return Err(Error::Invalid(format!("gcd({n}, {l}) != 1, no stepping constant exists")));
        }
        let r = trinomial_root_order(n, l)?;
        let k = (1..n).find(|&k| (k * l) % n == n - 1).expect("k exists when gcd(n, l) = 1");
        let group = (1u64 << n) - 1;
        Ok(Self { n, l, k, r, q: group / r })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn l(&self) -> usize {
        self.l
    }

    /// Stepping constant `k`.
    pub fn k(&self) -> usize {
        self.k
    }

    /// Order of a root of the trinomial.
    pub fn r(&self) -> u64 {
        self.r
    }

    /// `(2^n - 1) / r`.
    pub fn q(&self) -> u64 {
        self.q
    }

    pub fn is_primitive(&self) -> bool {
        self.q == 1
    }

    pub fn poly(&self) -> Poly2 {
        Poly2::trinomial(self.n, self.l)
    }
}

/// Picks the trinomial driving the circular construction for `n` wires.
///
/// Primitive trinomials are preferred; otherwise an irreducible one is returned
/// with its `(r, q)`. Only `l` coprime to `n` qualify, and ties go to the
/// smallest `l`. `Ok(None)` means no usable irreducible trinomial exists.
pub fn find_circular_params(n: usize) -> Result<Option<TrinomialParams>> {
    if n < 2 {
        return Err(Error::TrinomialExponent { n, l: 0 });
    }
    if n > MAX_FACTOR_DEGREE {
        return Err(Error::DegreeTooLarge { n });
    }
    let candidates: Vec<TrinomialParams> = (1..n)
        .filter(|&l| gcd(n, l) == 1)
        .filter(|&l| poly_is_irreducible(Poly2::trinomial(n, l)))
        .map(|l| TrinomialParams::new(n, l))
        .collect::<Result<_>>()?;
    Ok(candidates.iter().find(|p| p.is_primitive()).or_else(|| candidates.first()).copied())
}
