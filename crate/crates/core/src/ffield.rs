//! Prime fields `F_p` and the scalar-field contract shared by every
//! algorithm in the crate.
//!
//! Residues are stored as `u64`. Since `p < 2^31`, a product of two residues
//! fits in 62 bits and is reduced with a single `%`.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use crate::error::{Error, Result};

/// Largest supported modulus.
pub const MAX_MODULUS: u64 = (1 << 31) - 1;

/// The operations an exact scalar domain must provide.
///
/// Implemented by [`FieldSpec`] (the prime field itself) and by
/// [`crate::parametric::RationalFunctionField`] (`F_p(a)`). Both share the
/// characteristic `p`, which also fixes the point set `F_p^n` that polynomial
/// functions are evaluated on.
pub trait ScalarField: Clone + fmt::Debug + PartialEq {
    type Elem: Clone + fmt::Debug + PartialEq;

    fn characteristic(&self) -> u64;
    fn zero(&self) -> Self::Elem;
    fn one(&self) -> Self::Elem;
    /// Embeds the residue `v mod p`.
    fn from_u64(&self, v: u64) -> Self::Elem;
    fn is_zero(&self, a: &Self::Elem) -> bool;
    fn add(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn sub(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn mul(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn neg(&self, a: &Self::Elem) -> Self::Elem;
    /// Multiplicative inverse, `None` for zero.
    fn inv(&self, a: &Self::Elem) -> Option<Self::Elem>;
    /// Text for `a` used as a polynomial coefficient. Compound values come
    /// back parenthesized.
    fn render(&self, a: &Self::Elem) -> String;

    fn is_one(&self, a: &Self::Elem) -> bool {
        *a == self.one()
    }

    fn div(&self, a: &Self::Elem, b: &Self::Elem) -> Option<Self::Elem> {
        self.inv(b).map(|bi| self.mul(a, &bi))
    }
}

/// The prime field `F_p`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct FieldSpec {
    p: u64,
}

impl FieldSpec {
    pub fn new(p: u64) -> Result<Self> {
        if p > MAX_MODULUS {
            return Err(Error::FieldTooLarge(p));
        }
        if !is_prime(p) {
            return Err(Error::NotPrime(p));
        }
        Ok(FieldSpec { p })
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn elem(&self, v: u64) -> FieldElement {
        FieldElement { value: v % self.p, modulus: self.p }
    }

    pub fn elem_i64(&self, v: i64) -> FieldElement {
        self.elem(v.rem_euclid(self.p as i64) as u64)
    }

    /// All elements `0..p` in order.
    pub fn elements(&self) -> impl Iterator<Item = FieldElement> + '_ {
        (0..self.p).map(move |v| self.elem(v))
    }
}

impl fmt::Display for FieldSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "F_{}", self.p)
    }
}

/// A canonical residue in `0..p`, tagged with its modulus.
///
/// The operator impls panic when the moduli differ; the `checked_*` methods
/// report [`Error::FieldMismatch`] instead.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct FieldElement {
    value: u64,
    modulus: u64,
}

impl FieldElement {
    pub fn value(&self) -> u64 {
        self.value
    }

    pub fn field(&self) -> FieldSpec {
        FieldSpec { p: self.modulus }
    }

    pub fn is_zero(&self) -> bool {
        self.value == 0
    }

    fn same_field(&self, other: &Self) -> Result<()> {
        if self.modulus == other.modulus {
            Ok(())
        } else {
            Err(Error::FieldMismatch { left: self.modulus, right: other.modulus })
        }
    }

    pub fn checked_add(self, rhs: Self) -> Result<Self> {
        self.same_field(&rhs)?;
        Ok(self.with(add_mod(self.value, rhs.value, self.modulus)))
    }

    pub fn checked_sub(self, rhs: Self) -> Result<Self> {
        self.same_field(&rhs)?;
        Ok(self.with(sub_mod(self.value, rhs.value, self.modulus)))
    }

    pub fn checked_mul(self, rhs: Self) -> Result<Self> {
        self.same_field(&rhs)?;
        Ok(self.with(mul_mod(self.value, rhs.value, self.modulus)))
    }

    /// Inverse by the extended Euclidean algorithm.
    pub fn inv(self) -> Result<Self> {
        inv_mod(self.value, self.modulus).map(|v| self.with(v)).ok_or(Error::DivisionByZero)
    }

    /// Square-and-multiply; `0^0 = 1`.
    pub fn pow(self, k: u64) -> Self {
        self.with(pow_mod(self.value, k, self.modulus))
    }

    fn with(self, value: u64) -> Self {
        FieldElement { value, modulus: self.modulus }
    }
}

impl fmt::Display for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.value)
    }
}

impl Add for FieldElement {
    type Output = FieldElement;
    fn add(self, rhs: Self) -> Self {
        self.checked_add(rhs).expect("field mismatch in addition")
    }
}

impl Sub for FieldElement {
    type Output = FieldElement;
    fn sub(self, rhs: Self) -> Self {
        self.checked_sub(rhs).expect("field mismatch in subtraction")
    }
}

impl Mul for FieldElement {
    type Output = FieldElement;
    fn mul(self, rhs: Self) -> Self {
        self.checked_mul(rhs).expect("field mismatch in multiplication")
    }
}

impl Neg for FieldElement {
    type Output = FieldElement;
    fn neg(self) -> Self {
        self.with(sub_mod(0, self.value, self.modulus))
    }
}

impl ScalarField for FieldSpec {
    type Elem = FieldElement;

    fn characteristic(&self) -> u64 {
        self.p
    }
    fn zero(&self) -> FieldElement {
        self.elem(0)
    }
    fn one(&self) -> FieldElement {
        self.elem(1)
    }
    fn from_u64(&self, v: u64) -> FieldElement {
        self.elem(v)
    }
    fn is_zero(&self, a: &FieldElement) -> bool {
        a.value == 0
    }
    fn add(&self, a: &FieldElement, b: &FieldElement) -> FieldElement {
        *a + *b
    }
    fn sub(&self, a: &FieldElement, b: &FieldElement) -> FieldElement {
        *a - *b
    }
    fn mul(&self, a: &FieldElement, b: &FieldElement) -> FieldElement {
        *a * *b
    }
    fn neg(&self, a: &FieldElement) -> FieldElement {
        -*a
    }
    fn inv(&self, a: &FieldElement) -> Option<FieldElement> {
        a.inv().ok()
    }
    fn render(&self, a: &FieldElement) -> String {
        a.value.to_string()
    }
}

#[inline]
pub(crate) fn add_mod(a: u64, b: u64, p: u64) -> u64 {
    let s = a + b;
    if s >= p {
        s - p
    } else {
        s
    }
}

#[inline]
pub(crate) fn sub_mod(a: u64, b: u64, p: u64) -> u64 {
    if a >= b {
        a - b
    } else {
        a + p - b
    }
}

#[inline]
pub(crate) fn mul_mod(a: u64, b: u64, p: u64) -> u64 {
    a * b % p
}

pub(crate) fn pow_mod(mut base: u64, mut k: u64, p: u64) -> u64 {
    let mut acc = 1 % p;
    base %= p;
    while k > 0 {
        if k & 1 == 1 {
            acc = mul_mod(acc, base, p);
        }
        base = mul_mod(base, base, p);
        k >>= 1;
    }
    acc
}

pub(crate) fn inv_mod(a: u64, p: u64) -> Option<u64> {
    let a = a % p;
    if a == 0 {
        return None;
    }
    let (mut r0, mut r1) = (p as i64, a as i64);
    let (mut t0, mut t1) = (0i64, 1i64);
    while r1 != 0 {
        let q = r0 / r1;
        (r0, r1) = (r1, r0 - q * r1);
        (t0, t1) = (t1, t0 - q * t1);
    }
    debug_assert_eq!(r0, 1);
    Some(t0.rem_euclid(p as i64) as u64)
}

fn mul_mod_u128(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

fn pow_mod_u128(mut base: u64, mut k: u64, m: u64) -> u64 {
    let mut acc = 1 % m;
    base %= m;
    while k > 0 {
        if k & 1 == 1 {
            acc = mul_mod_u128(acc, base, m);
        }
        base = mul_mod_u128(base, base, m);
        k >>= 1;
    }
    acc
}

/// Deterministic Miller-Rabin; the witness set is exact for all `u64`.
pub fn is_prime(n: u64) -> bool {
    const WITNESSES: [u64; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];
    if n < 2 {
        return false;
    }
    for &w in &WITNESSES {
        if n % w == 0 {
            return n == w;
        }
    }
    let s = (n - 1).trailing_zeros();
    let d = (n - 1) >> s;
    'witness: for &w in &WITNESSES {
        let mut x = pow_mod_u128(w, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul_mod_u128(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}
