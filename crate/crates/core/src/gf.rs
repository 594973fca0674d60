//! Arithmetic in `F_q` for `q = p^m <= 2^16`.
//!
//! Elements are encoded as integers in `0..q`. For extension fields the
//! base-`p` digits of the encoding are the coefficients of a polynomial over
//! `F_p` (least significant digit = constant term), reduced modulo the
//! lexicographically smallest monic irreducible polynomial of degree `m`.
//!
//! Multiplication goes through exp/log tables built from a primitive element;
//! prime fields multiply with plain modular arithmetic and produce the same
//! results.

use std::fmt;

use serde::Serialize;

use crate::error::{Error, Result};

/// Largest supported field order.
pub const MAX_ORDER: u64 = 1 << 16;

/// An element of some `F_q`, stored as its integer encoding.
///
/// The value carries no reference to its field; operations go through
/// [`FieldSpec`], which validates encodings on construction.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Default, Serialize)]
#[serde(transparent)]
#[repr(transparent)]
pub struct FieldElement(pub(crate) u16);

impl FieldElement {
    pub const ZERO: FieldElement = FieldElement(0);
    pub const ONE: FieldElement = FieldElement(1);

    #[inline]
    pub fn value(self) -> u32 {
        u32::from(self.0)
    }

    #[inline]
    pub fn is_zero(self) -> bool {
        self.0 == 0
    }
}

impl fmt::Display for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// The field `F_{p^m}` together with its multiplication tables.
#[derive(Clone)]
pub struct FieldSpec {
    p: u32,
    m: u32,
    q: u32,
    /// Monic modulus, coefficients from the constant term up. `[0, 1]` (i.e. `x`)
    /// for prime fields, where it is never used.
    irreducible: Vec<u32>,
    generator: FieldElement,
    /// `exp[i] = g^i`, stored twice over so `log a + log b` needs no reduction.
    exp: Vec<u16>,
    /// `log[a]` for nonzero `a`; `log[0]` is `u32::MAX`.
    log: Vec<u32>,
    inv: Vec<u16>,
}

impl fmt::Debug for FieldSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("FieldSpec")
            .field("p", &self.p)
            .field("m", &self.m)
            .field("q", &self.q)
            .field("irreducible", &self.irreducible)
            .field("generator", &self.generator)
            .finish_non_exhaustive()
    }
}

impl PartialEq for FieldSpec {
    // The modulus is a deterministic function of (p, m).
    fn eq(&self, other: &Self) -> bool {
        self.p == other.p && self.m == other.m
    }
}

impl Eq for FieldSpec {}

impl FieldSpec {
    /// Builds `F_{p^m}`.
    pub fn new(p: u32, m: u32) -> Result<Self> {
        if m == 0 {
            return Err(Error::ZeroDegree);
        }
        if !is_prime(p) {
            return Err(Error::CompositeP(p));
        }
        let q = u64::from(p)
            .checked_pow(m)
            .filter(|&q| q <= MAX_ORDER)
            .ok_or(Error::FieldTooLarge { p, m })? as u32;

        let irreducible = if m == 1 {
            vec![0, 1]
        } else {
            smallest_irreducible(p, m as usize)
        };

        let slow = SlowArith {
            p,
            m: m as usize,
            modulus: &irreducible,
        };
        let generator = find_generator(&slow, q);

        let order = (q - 1) as usize;
        let mut exp = vec![0u16; 2 * order];
        let mut log = vec![u32::MAX; q as usize];
        let mut x = 1u32;
        for i in 0..order {
            exp[i] = x as u16;
            exp[i + order] = x as u16;
            debug_assert_eq!(log[x as usize], u32::MAX, "generator is not primitive");
            log[x as usize] = i as u32;
            x = slow.mul(x, generator);
        }
        debug_assert_eq!(x, 1);

        let mut inv = vec![0u16; q as usize];
        for a in 1..q as usize {
            inv[a] = exp[(order - log[a] as usize) % order];
        }

        Ok(FieldSpec {
            p,
            m,
            q,
            irreducible,
            generator: FieldElement(generator as u16),
            exp,
            log,
            inv,
        })
    }

    /// Builds the prime field `F_p`.
    pub fn prime(p: u32) -> Result<Self> {
        Self::new(p, 1)
    }

    /// Builds `F_q` from its order, splitting `q` into `p^m`.
    pub fn with_order(q: u32) -> Result<Self> {
        let (p, m) = prime_power(q).ok_or(Error::NotPrimePower(q))?;
        Self::new(p, m)
    }

    #[inline]
    pub fn characteristic(&self) -> u32 {
        self.p
    }

    #[inline]
    pub fn degree(&self) -> u32 {
        self.m
    }

    #[inline]
    pub fn order(&self) -> u32 {
        self.q
    }

    /// Coefficients of the modulus polynomial, constant term first.
    pub fn irreducible(&self) -> &[u32] {
        &self.irreducible
    }

    /// The primitive element the exp/log tables are built from.
    pub fn generator(&self) -> FieldElement {
        self.generator
    }

    /// Validates an integer encoding.
    pub fn element(&self, value: u64) -> Result<FieldElement> {
        if value < u64::from(self.q) {
            Ok(FieldElement(value as u16))
        } else {
            Err(Error::InvalidElement { value, q: self.q })
        }
    }

    /// All elements in encoding order.
    pub fn elements(&self) -> impl Iterator<Item = FieldElement> {
        (0..self.q).map(|v| FieldElement(v as u16))
    }

    /// The `q - 1` nonzero elements in encoding order.
    pub fn nonzero_elements(&self) -> impl Iterator<Item = FieldElement> {
        (1..self.q).map(|v| FieldElement(v as u16))
    }

    pub fn add(&self, a: FieldElement, b: FieldElement) -> FieldElement {
        if self.m == 1 {
            FieldElement(((a.value() + b.value()) % self.p) as u16)
        } else if self.p == 2 {
            FieldElement(a.0 ^ b.0)
        } else {
            self.digitwise(a, b, |x, y| (x + y) % self.p)
        }
    }

    pub fn sub(&self, a: FieldElement, b: FieldElement) -> FieldElement {
        self.add(a, self.neg(b))
    }

    pub fn neg(&self, a: FieldElement) -> FieldElement {
        if self.m == 1 {
            FieldElement(((self.p - a.value()) % self.p) as u16)
        } else if self.p == 2 {
            a
        } else {
            self.digitwise(a, FieldElement::ZERO, |x, _| (self.p - x) % self.p)
        }
    }

    #[inline]
    pub fn mul(&self, a: FieldElement, b: FieldElement) -> FieldElement {
        if a.is_zero() || b.is_zero() {
            FieldElement::ZERO
        } else if self.m == 1 {
            FieldElement((a.value() * b.value() % self.p) as u16)
        } else {
            let i = self.log[a.0 as usize] + self.log[b.0 as usize];
            FieldElement(self.exp[i as usize])
        }
    }

    pub fn inv(&self, a: FieldElement) -> Result<FieldElement> {
        if a.is_zero() {
            Err(Error::DivisionByZero)
        } else {
            Ok(FieldElement(self.inv[a.0 as usize]))
        }
    }

    pub fn div(&self, a: FieldElement, b: FieldElement) -> Result<FieldElement> {
        Ok(self.mul(a, self.inv(b)?))
    }

    pub fn pow(&self, a: FieldElement, mut e: u64) -> FieldElement {
        let mut base = a;
        let mut acc = FieldElement::ONE;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            e >>= 1;
        }
        acc
    }

    /// Discrete logarithm to the base [`generator`](Self::generator).
    pub fn log(&self, a: FieldElement) -> Option<u32> {
        (!a.is_zero()).then(|| self.log[a.0 as usize])
    }

    /// `generator^i`.
    pub fn exp(&self, i: u64) -> FieldElement {
        FieldElement(self.exp[(i % u64::from(self.q - 1)) as usize])
    }

    #[inline]
    pub(crate) fn log_table(&self) -> &[u32] {
        &self.log
    }

    #[inline]
    pub(crate) fn exp_table(&self) -> &[u16] {
        &self.exp
    }

    fn digitwise(
        &self,
        a: FieldElement,
        b: FieldElement,
        f: impl Fn(u32, u32) -> u32,
    ) -> FieldElement {
        let (mut a, mut b) = (a.value(), b.value());
        let mut out = 0;
        let mut place = 1;
        for _ in 0..self.m {
            out += f(a % self.p, b % self.p) * place;
            a /= self.p;
            b /= self.p;
            place *= self.p;
        }
        FieldElement(out as u16)
    }
}

/// Polynomial arithmetic modulo the field modulus, used only to build tables.
struct SlowArith<'a> {
    p: u32,
    m: usize,
    modulus: &'a [u32],
}

impl SlowArith<'_> {
    fn mul(&self, a: u32, b: u32) -> u32 {
        if self.m == 1 {
            return a * b % self.p;
        }
        let (a, b) = (digits(a, self.p, self.m), digits(b, self.p, self.m));
        let mut prod = vec![0u32; 2 * self.m - 1];
        for (i, &x) in a.iter().enumerate() {
            for (j, &y) in b.iter().enumerate() {
                prod[i + j] = (prod[i + j] + x * y) % self.p;
            }
        }
        let rem = poly_rem(&prod, self.modulus, self.p);
        undigits(&rem, self.p)
    }

    fn pow(&self, a: u32, mut e: u32) -> u32 {
        let (mut base, mut acc) = (a, 1);
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            e >>= 1;
        }
        acc
    }
}

fn find_generator(slow: &SlowArith<'_>, q: u32) -> u32 {
    let order = q - 1;
    let factors = prime_factors(order);
    (1..q)
        .find(|&g| factors.iter().all(|&r| slow.pow(g, order / r) != 1))
        .expect("the multiplicative group of a finite field is cyclic")
}

/// First monic irreducible of degree `m` over `F_p` in increasing encoded
/// order (encoding = `p^m + sum c_i p^i`).
fn smallest_irreducible(p: u32, m: usize) -> Vec<u32> {
    let span = p.pow(m as u32);
    (0..span)
        .map(|low| monic(low, p, m))
        .find(|f| is_irreducible(f, p))
        .expect("irreducible polynomials exist in every degree")
}

fn is_irreducible(f: &[u32], p: u32) -> bool {
    let m = f.len() - 1;
    (1..=m / 2).all(|deg| {
        (0..p.pow(deg as u32)).all(|low| {
            let g = monic(low, p, deg);
            poly_rem(f, &g, p).iter().any(|&c| c != 0)
        })
    })
}

fn monic(low: u32, p: u32, deg: usize) -> Vec<u32> {
    let mut f = digits(low, p, deg);
    f.push(1);
    f
}

/// Remainder of `a` modulo the monic polynomial `b`.
fn poly_rem(a: &[u32], b: &[u32], p: u32) -> Vec<u32> {
    let db = b.len() - 1;
    let mut r = a.to_vec();
    for top in (db..r.len()).rev() {
        let c = r[top];
        if c == 0 {
            continue;
        }
        let shift = top - db;
        for (i, &bc) in b.iter().enumerate() {
            r[shift + i] = (r[shift + i] + p - c * bc % p) % p;
        }
    }
    r.truncate(db);
    r
}

fn digits(mut x: u32, p: u32, len: usize) -> Vec<u32> {
    let mut out = Vec::with_capacity(len);
    for _ in 0..len {
        out.push(x % p);
        x /= p;
    }
    out
}

fn undigits(d: &[u32], p: u32) -> u32 {
    d.iter().rev().fold(0, |acc, &c| acc * p + c)
}

pub(crate) fn is_prime(n: u32) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2u32;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

fn prime_factors(mut n: u32) -> Vec<u32> {
    let mut out = Vec::new();
    let mut d = 2;
    while d * d <= n {
        if n.is_multiple_of(d) {
            out.push(d);
            while n.is_multiple_of(d) {
                n /= d;
            }
        }
        d += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

/// Splits `q` as `p^m` with `p` prime.
pub fn prime_power(q: u32) -> Option<(u32, u32)> {
    if q < 2 {
        return None;
    }
    let p = (2..=q).find(|d| q.is_multiple_of(*d))?;
    let (mut rest, mut m) = (q, 0);
    while rest % p == 0 {
        rest /= p;
        m += 1;
    }
    (rest == 1).then_some((p, m))
}
