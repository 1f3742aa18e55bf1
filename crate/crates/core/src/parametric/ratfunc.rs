//! Univariate polynomials in the parameter `a` over `F_p`, and the rational
//! function field `F_p(a)`.

use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::ffield::{add_mod, inv_mod, mul_mod, sub_mod, FieldElement, FieldSpec, ScalarField};
use crate::polyfunc::reduce_exponent;

/// Dense polynomial in `a` with `F_p` coefficients, lowest degree first.
///
/// Exponents are never reduced implicitly: `a^p` and `a` are different
/// elements here. See [`ParamPoly::reduce_functional`].
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ParamPoly {
    p: u64,
    coeffs: Vec<u64>,
}

impl ParamPoly {
    pub fn zero(field: FieldSpec) -> Self {
        ParamPoly { p: field.p(), coeffs: Vec::new() }
    }

    pub fn one(field: FieldSpec) -> Self {
        Self::constant(field, 1)
    }

    pub fn constant(field: FieldSpec, c: u64) -> Self {
        Self::new(field, vec![c])
    }

    /// The parameter `a` itself.
    pub fn param(field: FieldSpec) -> Self {
        Self::new(field, vec![0, 1])
    }

    pub fn monomial(field: FieldSpec, c: u64, e: usize) -> Self {
        let mut v = vec![0; e + 1];
        v[e] = c;
        Self::new(field, v)
    }

    /// From ascending coefficients (reduced mod `p`).
    pub fn new(field: FieldSpec, coeffs: Vec<u64>) -> Self {
        let p = field.p();
        let mut out = ParamPoly { p, coeffs: coeffs.into_iter().map(|c| c % p).collect() };
        out.trim();
        out
    }

    fn raw(p: u64, coeffs: Vec<u64>) -> Self {
        let mut out = ParamPoly { p, coeffs };
        out.trim();
        out
    }

    fn trim(&mut self) {
        while self.coeffs.last() == Some(&0) {
            self.coeffs.pop();
        }
    }

    pub fn field(&self) -> FieldSpec {
        FieldSpec::new(self.p).expect("modulus was validated on construction")
    }

    pub fn modulus(&self) -> u64 {
        self.p
    }

    pub fn coeffs(&self) -> &[u64] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.coeffs == [1]
    }

    pub fn is_constant(&self) -> bool {
        self.coeffs.len() <= 1
    }

    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn leading(&self) -> u64 {
        self.coeffs.last().copied().unwrap_or(0)
    }

    pub fn constant_term(&self) -> u64 {
        self.coeffs.first().copied().unwrap_or(0)
    }

    /// Horner evaluation at `a = a0`.
    pub fn eval(&self, a0: u64) -> u64 {
        let p = self.p;
        let a0 = a0 % p;
        self.coeffs.iter().rev().fold(0, |acc, &c| add_mod(mul_mod(acc, a0, p), c, p))
    }

    pub fn add(&self, other: &Self) -> Self {
        let n = self.coeffs.len().max(other.coeffs.len());
        let v = (0..n)
            .map(|i| {
                add_mod(
                    self.coeffs.get(i).copied().unwrap_or(0),
                    other.coeffs.get(i).copied().unwrap_or(0),
                    self.p,
                )
            })
            .collect();
        Self::raw(self.p, v)
    }

    pub fn sub(&self, other: &Self) -> Self {
        let n = self.coeffs.len().max(other.coeffs.len());
        let v = (0..n)
            .map(|i| {
                sub_mod(
                    self.coeffs.get(i).copied().unwrap_or(0),
                    other.coeffs.get(i).copied().unwrap_or(0),
                    self.p,
                )
            })
            .collect();
        Self::raw(self.p, v)
    }

    pub fn neg(&self) -> Self {
        Self::raw(self.p, self.coeffs.iter().map(|&c| sub_mod(0, c, self.p)).collect())
    }

    pub fn scale(&self, c: u64) -> Self {
        let c = c % self.p;
        Self::raw(self.p, self.coeffs.iter().map(|&x| mul_mod(x, c, self.p)).collect())
    }

    pub fn mul(&self, other: &Self) -> Self {
        if self.is_zero() || other.is_zero() {
            return Self::raw(self.p, Vec::new());
        }
        let p = self.p;
        let mut out = vec![0u64; self.coeffs.len() + other.coeffs.len() - 1];
        // accumulate unreduced while it is safe: residues are < 2^31
        let bound = u64::MAX / ((p - 1) * (p - 1)).max(1);
        if (other.coeffs.len() as u64) < bound {
            for (i, &a) in self.coeffs.iter().enumerate() {
                if a == 0 {
                    continue;
                }
                for (j, &b) in other.coeffs.iter().enumerate() {
                    out[i + j] += a * b;
                }
                if (i as u64 + 1) % bound == 0 {
                    out.iter_mut().for_each(|o| *o %= p);
                }
            }
            out.iter_mut().for_each(|o| *o %= p);
        } else {
            for (i, &a) in self.coeffs.iter().enumerate() {
                for (j, &b) in other.coeffs.iter().enumerate() {
                    out[i + j] = add_mod(out[i + j], mul_mod(a, b, p), p);
                }
            }
        }
        Self::raw(p, out)
    }

    pub fn pow(&self, mut k: u64) -> Self {
        let mut acc = Self::raw(self.p, vec![1 % self.p]);
        let mut base = self.clone();
        while k > 0 {
            if k & 1 == 1 {
                acc = acc.mul(&base);
            }
            k >>= 1;
            if k > 0 {
                base = base.mul(&base);
            }
        }
        acc
    }

    /// Euclidean division.
    pub fn div_rem(&self, divisor: &Self) -> Result<(Self, Self)> {
        if divisor.is_zero() {
            return Err(Error::DivisionByZero);
        }
        let p = self.p;
        let dd = divisor.coeffs.len() - 1;
        if self.coeffs.len() <= dd {
            return Ok((Self::raw(p, Vec::new()), self.clone()));
        }
        let lead_inv = inv_mod(divisor.leading(), p).expect("nonzero leading coefficient");
        let mut rem = self.coeffs.clone();
        let mut quot = vec![0u64; rem.len() - dd];
        for i in (0..quot.len()).rev() {
            let c = mul_mod(rem[i + dd], lead_inv, p);
            quot[i] = c;
            if c == 0 {
                continue;
            }
            for (j, &d) in divisor.coeffs.iter().enumerate() {
                rem[i + j] = sub_mod(rem[i + j], mul_mod(c, d, p), p);
            }
        }
        rem.truncate(dd);
        Ok((Self::raw(p, quot), Self::raw(p, rem)))
    }

    pub fn rem(&self, divisor: &Self) -> Result<Self> {
        Ok(self.div_rem(divisor)?.1)
    }

    /// Exact quotient; panics if the division leaves a remainder.
    pub fn exact_div(&self, divisor: &Self) -> Self {
        let (q, r) = self.div_rem(divisor).expect("nonzero divisor");
        debug_assert!(r.is_zero(), "inexact division");
        q
    }

    pub fn monic(&self) -> Self {
        match inv_mod(self.leading(), self.p) {
            Some(inv) => self.scale(inv),
            None => self.clone(),
        }
    }

    /// Monic greatest common divisor (zero only if both inputs are zero).
    pub fn gcd(&self, other: &Self) -> Self {
        let (mut a, mut b) = (self.clone(), other.clone());
        while !b.is_zero() {
            let r = a.rem(&b).expect("nonzero divisor");
            a = b;
            b = r;
        }
        a.monic()
    }

    pub fn derivative(&self) -> Self {
        let p = self.p;
        let v = self.coeffs.iter().enumerate().skip(1).map(|(i, &c)| mul_mod(c, i as u64 % p, p)).collect();
        Self::raw(p, v)
    }

    /// `self^e mod m`.
    pub fn pow_mod(&self, mut e: u64, m: &Self) -> Self {
        let mut acc = Self::raw(self.p, vec![1 % self.p]).rem(m).expect("nonzero modulus");
        let mut base = self.rem(m).expect("nonzero modulus");
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base).rem(m).expect("nonzero modulus");
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base).rem(m).expect("nonzero modulus");
            }
        }
        acc
    }

    /// Applies `a^p = a` to every exponent. Preserves the value at every
    /// `a0` in `F_p`, but is not a ring identity in `F_p(a)`.
    pub fn reduce_functional(&self) -> Self {
        let p = self.p;
        let mut out = vec![0u64; self.coeffs.len().min(p as usize)];
        for (e, &c) in self.coeffs.iter().enumerate() {
            if c == 0 {
                continue;
            }
            let r = reduce_exponent(e as u64, p) as usize;
            out[r] = add_mod(out[r], c, p);
        }
        Self::raw(p, out)
    }

    /// Roots in `F_p`, ascending.
    pub fn roots(&self) -> Vec<u64> {
        (0..self.p).filter(|&a| self.eval(a) == 0).collect()
    }

    pub fn render(&self, symbol: &str) -> String {
        if self.is_zero() {
            return "0".into();
        }
        let mut parts = Vec::new();
        for (e, &c) in self.coeffs.iter().enumerate().rev() {
            if c == 0 {
                continue;
            }
            let mono = match e {
                0 => String::new(),
                1 => symbol.to_string(),
                _ => format!("{symbol}^{e}"),
            };
            parts.push(match (e, c) {
                (0, _) => c.to_string(),
                (_, 1) => mono,
                _ => format!("{c}*{mono}"),
            });
        }
        parts.join(" + ")
    }
}

impl fmt::Display for ParamPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.render("a"))
    }
}

/// A normalized element of `F_p(a)`: `gcd(num, den) = 1`, `den` monic.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct RationalFunc {
    num: ParamPoly,
    den: ParamPoly,
}

impl RationalFunc {
    pub fn new(num: ParamPoly, den: ParamPoly) -> Result<Self> {
        if den.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(Self::normalized(num, den))
    }

    pub fn from_poly(num: ParamPoly) -> Self {
        let den = ParamPoly::raw(num.p, vec![1]);
        RationalFunc { num, den }
    }

    fn normalized(num: ParamPoly, den: ParamPoly) -> Self {
        if num.is_zero() {
            return RationalFunc { den: ParamPoly::raw(num.p, vec![1]), num };
        }
        if den.is_constant() {
            let inv = inv_mod(den.leading(), den.p).expect("nonzero denominator");
            return RationalFunc { num: num.scale(inv), den: ParamPoly::raw(den.p, vec![1]) };
        }
        let g = num.gcd(&den);
        let (num, den) = if g.is_one() { (num, den) } else { (num.exact_div(&g), den.exact_div(&g)) };
        let inv = inv_mod(den.leading(), den.p).expect("nonzero denominator");
        RationalFunc { num: num.scale(inv), den: den.scale(inv) }
    }

    pub fn num(&self) -> &ParamPoly {
        &self.num
    }

    pub fn den(&self) -> &ParamPoly {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_polynomial(&self) -> bool {
        self.den.is_one()
    }

    /// `num(a0) / den(a0)`.
    pub fn specialize(&self, a0: u64) -> Result<FieldElement> {
        let p = self.num.p;
        let field = FieldSpec::new(p).expect("modulus was validated on construction");
        let d = self.den.eval(a0);
        let dinv = inv_mod(d, p).ok_or(Error::UndefinedAt(a0 % p))?;
        Ok(field.elem(mul_mod(self.num.eval(a0), dinv, p)))
    }

    pub fn add(&self, other: &Self) -> Self {
        if self.den.is_one() && other.den.is_one() {
            return Self::from_poly(self.num.add(&other.num));
        }
        if self.den == other.den {
            return Self::normalized(self.num.add(&other.num), self.den.clone());
        }
        let num = self.num.mul(&other.den).add(&other.num.mul(&self.den));
        Self::normalized(num, self.den.mul(&other.den))
    }

    pub fn neg(&self) -> Self {
        RationalFunc { num: self.num.neg(), den: self.den.clone() }
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &Self) -> Self {
        if self.is_zero() || other.is_zero() {
            return Self::from_poly(ParamPoly::raw(self.num.p, Vec::new()));
        }
        if self.den.is_one() && other.den.is_one() {
            return Self::from_poly(self.num.mul(&other.num));
        }
        // cross-cancel before multiplying to keep degrees small
        let g1 = self.num.gcd(&other.den);
        let g2 = other.num.gcd(&self.den);
        let n1 = if g1.is_one() { self.num.clone() } else { self.num.exact_div(&g1) };
        let d2 = if g1.is_one() { other.den.clone() } else { other.den.exact_div(&g1) };
        let n2 = if g2.is_one() { other.num.clone() } else { other.num.exact_div(&g2) };
        let d1 = if g2.is_one() { self.den.clone() } else { self.den.exact_div(&g2) };
        let num = n1.mul(&n2);
        let den = d1.mul(&d2);
        let inv = inv_mod(den.leading(), den.p).expect("nonzero denominator");
        RationalFunc { num: num.scale(inv), den: den.scale(inv) }
    }

    pub fn inv(&self) -> Result<Self> {
        if self.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(Self::normalized(self.den.clone(), self.num.clone()))
    }

    pub fn div(&self, other: &Self) -> Result<Self> {
        Ok(self.mul(&other.inv()?))
    }

    /// Numerator and denominator each reduced with `a^p = a`. Only the
    /// values on `F_p` are preserved.
    pub fn reduce_functional(&self) -> (ParamPoly, ParamPoly) {
        (self.num.reduce_functional(), self.den.reduce_functional())
    }

    pub fn render(&self, symbol: &str) -> String {
        if self.den.is_one() {
            self.num.render(symbol)
        } else {
            format!("({})/({})", self.num.render(symbol), self.den.render(symbol))
        }
    }
}

impl fmt::Display for RationalFunc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.render("a"))
    }
}

/// `F_p(a)` as a scalar domain.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RationalFunctionField {
    base: FieldSpec,
    symbol: Arc<str>,
}

impl RationalFunctionField {
    pub fn new(base: FieldSpec) -> Self {
        Self::with_symbol(base, "a")
    }

    pub fn with_symbol(base: FieldSpec, symbol: &str) -> Self {
        RationalFunctionField { base, symbol: symbol.into() }
    }

    pub fn base(&self) -> FieldSpec {
        self.base
    }

    pub fn symbol(&self) -> &str {
        &self.symbol
    }

    pub fn param(&self) -> RationalFunc {
        RationalFunc::from_poly(ParamPoly::param(self.base))
    }

    /// Polynomial in `a` from ascending coefficients.
    pub fn poly(&self, coeffs: &[u64]) -> RationalFunc {
        RationalFunc::from_poly(ParamPoly::new(self.base, coeffs.to_vec()))
    }
}

impl ScalarField for RationalFunctionField {
    type Elem = RationalFunc;

    fn characteristic(&self) -> u64 {
        self.base.p()
    }
    fn zero(&self) -> RationalFunc {
        RationalFunc::from_poly(ParamPoly::zero(self.base))
    }
    fn one(&self) -> RationalFunc {
        RationalFunc::from_poly(ParamPoly::one(self.base))
    }
    fn from_u64(&self, v: u64) -> RationalFunc {
        RationalFunc::from_poly(ParamPoly::constant(self.base, v))
    }
    fn is_zero(&self, a: &RationalFunc) -> bool {
        a.is_zero()
    }
    fn is_one(&self, a: &RationalFunc) -> bool {
        a.num.is_one() && a.den.is_one()
    }
    fn add(&self, a: &RationalFunc, b: &RationalFunc) -> RationalFunc {
        a.add(b)
    }
    fn sub(&self, a: &RationalFunc, b: &RationalFunc) -> RationalFunc {
        a.sub(b)
    }
    fn mul(&self, a: &RationalFunc, b: &RationalFunc) -> RationalFunc {
        a.mul(b)
    }
    fn neg(&self, a: &RationalFunc) -> RationalFunc {
        a.neg()
    }
    fn inv(&self, a: &RationalFunc) -> Option<RationalFunc> {
        a.inv().ok()
    }
    fn render(&self, a: &RationalFunc) -> String {
        if a.den.is_one() && a.num.is_constant() {
            a.num.constant_term().to_string()
        } else if a.den.is_one() {
            format!("({})", a.num.render(&self.symbol))
        } else {
            a.render(&self.symbol)
        }
    }
}
