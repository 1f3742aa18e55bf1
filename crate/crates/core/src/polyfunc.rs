//! Functions `F_p^n -> K` stored as reduced polynomials.
//!
//! Every function on `F_p^n` has exactly one polynomial representative in
//! which each variable has degree `< p`; arithmetic reduces with
//! `x^p = x` after every product so that representative is always what is
//! stored. Two [`Poly`] values are therefore equal as functions iff they
//! compare equal.
//!
//! Monomials are ordered graded-lexicographically with `x1 > x2 > ... > xn`.
//! Coefficient vectors list monomials in ascending order (`1` first), text
//! rendering lists terms in descending order.

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use crate::error::{Error, Result};
use crate::ffield::{FieldElement, FieldSpec, ScalarField};

/// Default cap on `p^n`, the dimension of the ambient function space.
pub const DEFAULT_MAX_SPACE: usize = 1_000_000;

/// Applies `x^p = x` to a single exponent.
///
/// `x^(p-1)` is not `1` at `x = 0`, so exponents never wrap to zero.
pub fn reduce_exponent(e: u64, p: u64) -> u64 {
    if e < p {
        e
    } else {
        (e - 1) % (p - 1) + 1
    }
}

/// Exponent tuple of a reduced monomial.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Monomial(Box<[u32]>);

impl Monomial {
    pub fn new(exponents: Vec<u32>) -> Self {
        Monomial(exponents.into_boxed_slice())
    }

    pub fn one(nvars: usize) -> Self {
        Monomial(vec![0; nvars].into_boxed_slice())
    }

    pub fn var(nvars: usize, i: usize) -> Self {
        let mut e = vec![0; nvars];
        e[i] = 1;
        Monomial::new(e)
    }

    pub fn exponents(&self) -> &[u32] {
        &self.0
    }

    pub fn degree(&self) -> u64 {
        self.0.iter().map(|&e| e as u64).sum()
    }

    pub fn is_one(&self) -> bool {
        self.0.iter().all(|&e| e == 0)
    }

    fn mul_reduced(&self, other: &Monomial, p: u64) -> Monomial {
        Monomial(
            self.0
                .iter()
                .zip(other.0.iter())
                .map(|(&a, &b)| reduce_exponent(a as u64 + b as u64, p) as u32)
                .collect(),
        )
    }

    fn render(&self) -> String {
        let single = self.0.len() == 1;
        let mut parts = Vec::new();
        for (i, &e) in self.0.iter().enumerate() {
            if e == 0 {
                continue;
            }
            let name = if single { "x".to_string() } else { format!("x{}", i + 1) };
            parts.push(if e == 1 { name } else { format!("{name}^{e}") });
        }
        parts.join("*")
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.degree().cmp(&other.degree()).then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

/// Dense indexing of all `p^n` reduced monomials in ascending graded-lex order.
#[derive(Clone, Debug)]
pub struct MonomialIndex {
    monomials: Vec<Monomial>,
    lookup: HashMap<Monomial, usize>,
}

impl MonomialIndex {
    pub fn new(p: u64, nvars: usize, cap: usize) -> Result<Self> {
        let required = space_size(p, nvars);
        if required > cap as u128 {
            return Err(Error::SizeLimit { required, cap });
        }
        let size = required as usize;
        let mut monomials = Vec::with_capacity(size);
        let mut exps = vec![0u32; nvars];
        for _ in 0..size {
            monomials.push(Monomial::new(exps.clone()));
            for e in exps.iter_mut().rev() {
                *e += 1;
                if (*e as u64) < p {
                    break;
                }
                *e = 0;
            }
        }
        monomials.sort();
        let lookup = monomials.iter().cloned().enumerate().map(|(i, m)| (m, i)).collect();
        Ok(MonomialIndex { monomials, lookup })
    }

    pub fn len(&self) -> usize {
        self.monomials.len()
    }

    pub fn is_empty(&self) -> bool {
        self.monomials.is_empty()
    }

    pub fn monomial(&self, i: usize) -> &Monomial {
        &self.monomials[i]
    }

    pub fn position(&self, m: &Monomial) -> Option<usize> {
        self.lookup.get(m).copied()
    }
}

/// `p^n` without overflow.
pub fn space_size(p: u64, nvars: usize) -> u128 {
    let mut acc: u128 = 1;
    for _ in 0..nvars {
        acc = acc.saturating_mul(p as u128);
    }
    acc
}

/// A function `F_p^n -> K` in canonical reduced form.
#[derive(Clone, Debug, PartialEq)]
pub struct Poly<K: ScalarField> {
    field: K,
    nvars: usize,
    terms: BTreeMap<Monomial, K::Elem>,
}

/// A reduced polynomial with coefficients in `F_p`.
pub type ReducedPoly = Poly<FieldSpec>;

impl<K: ScalarField> Poly<K> {
    pub fn zero(field: K, nvars: usize) -> Self {
        Poly { field, nvars, terms: BTreeMap::new() }
    }

    pub fn constant(field: K, nvars: usize, c: K::Elem) -> Self {
        let mut p = Self::zero(field, nvars);
        p.insert(Monomial::one(nvars), c);
        p
    }

    /// The coordinate function `x_{i+1}` (0-based `i`).
    pub fn var(field: K, nvars: usize, i: usize) -> Self {
        assert!(i < nvars, "variable index {i} out of range for {nvars} variables");
        let one = field.one();
        let mut p = Self::zero(field, nvars);
        p.insert(Monomial::var(nvars, i), one);
        p
    }

    /// Builds the reduced form of a polynomial with arbitrary exponents.
    ///
    /// Each exponent `e >= p` becomes `((e - 1) mod (p - 1)) + 1`; like terms
    /// are then summed and zero coefficients dropped.
    pub fn from_terms<I>(field: K, nvars: usize, terms: I) -> Result<Self>
    where
        I: IntoIterator<Item = (Vec<u64>, K::Elem)>,
    {
        let p = field.characteristic();
        let mut out = Self::zero(field, nvars);
        for (exps, c) in terms {
            if exps.len() != nvars {
                return Err(Error::ArityMismatch { expected: nvars, found: exps.len() });
            }
            let m = Monomial::new(exps.iter().map(|&e| reduce_exponent(e, p) as u32).collect());
            out.accumulate(m, &c);
        }
        Ok(out)
    }

    /// Univariate polynomial from ascending coefficients.
    pub fn univariate<I: IntoIterator<Item = K::Elem>>(field: K, coeffs: I) -> Self {
        let terms: Vec<_> = coeffs.into_iter().enumerate().map(|(e, c)| (vec![e as u64], c)).collect();
        Self::from_terms(field, 1, terms).expect("univariate terms have arity 1")
    }

    pub fn field(&self) -> &K {
        &self.field
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Terms in ascending monomial order.
    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&Monomial, &K::Elem)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn coeff(&self, m: &Monomial) -> K::Elem {
        self.terms.get(m).cloned().unwrap_or_else(|| self.field.zero())
    }

    /// Coefficient of `x^e` in a univariate polynomial.
    pub fn coeff_of_degree(&self, e: u32) -> K::Elem {
        assert_eq!(self.nvars, 1, "coeff_of_degree needs a univariate polynomial");
        self.coeff(&Monomial::new(vec![e]))
    }

    pub fn degree(&self) -> Option<u64> {
        self.terms.keys().next_back().map(Monomial::degree)
    }

    fn insert(&mut self, m: Monomial, c: K::Elem) {
        if !self.field.is_zero(&c) {
            self.terms.insert(m, c);
        }
    }

    fn accumulate(&mut self, m: Monomial, c: &K::Elem) {
        if self.field.is_zero(c) {
            return;
        }
        match self.terms.get_mut(&m) {
            Some(existing) => {
                let s = self.field.add(existing, c);
                if self.field.is_zero(&s) {
                    self.terms.remove(&m);
                } else {
                    *existing = s;
                }
            }
            None => {
                self.terms.insert(m, c.clone());
            }
        }
    }

    fn check_compatible(&self, other: &Self) -> Result<()> {
        if self.field != other.field {
            return Err(Error::FieldMismatch {
                left: self.field.characteristic(),
                right: other.field.characteristic(),
            });
        }
        if self.nvars != other.nvars {
            return Err(Error::ArityMismatch { expected: self.nvars, found: other.nvars });
        }
        Ok(())
    }

    pub fn checked_add(&self, other: &Self) -> Result<Self> {
        self.check_compatible(other)?;
        Ok(self.add_impl(other))
    }

    pub fn checked_sub(&self, other: &Self) -> Result<Self> {
        self.check_compatible(other)?;
        Ok(self.add_impl(&other.neg_impl()))
    }

    pub fn checked_mul(&self, other: &Self) -> Result<Self> {
        self.check_compatible(other)?;
        Ok(self.mul_impl(other))
    }

    fn add_impl(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.accumulate(m.clone(), c);
        }
        out
    }

    fn neg_impl(&self) -> Self {
        self.map_terms(|c| self.field.neg(c))
    }

    fn mul_impl(&self, other: &Self) -> Self {
        let p = self.field.characteristic();
        let mut out = Self::zero(self.field.clone(), self.nvars);
        for (m1, c1) in &self.terms {
            for (m2, c2) in &other.terms {
                out.accumulate(m1.mul_reduced(m2, p), &self.field.mul(c1, c2));
            }
        }
        out
    }

    fn map_terms(&self, f: impl Fn(&K::Elem) -> K::Elem) -> Self {
        let mut out = Self::zero(self.field.clone(), self.nvars);
        for (m, c) in &self.terms {
            out.insert(m.clone(), f(c));
        }
        out
    }

    pub fn scale(&self, c: &K::Elem) -> Self {
        if self.field.is_zero(c) {
            return Self::zero(self.field.clone(), self.nvars);
        }
        self.map_terms(|t| self.field.mul(t, c))
    }

    /// Square-and-multiply with reduction after every product.
    pub fn pow(&self, mut k: u64) -> Self {
        let mut acc = Self::constant(self.field.clone(), self.nvars, self.field.one());
        let mut base = self.clone();
        while k > 0 {
            if k & 1 == 1 {
                acc = acc.mul_impl(&base);
            }
            k >>= 1;
            if k > 0 {
                base = base.mul_impl(&base);
            }
        }
        acc
    }

    /// Value at a point given as residues in `0..p`.
    pub fn eval_residues(&self, point: &[u64]) -> Result<K::Elem> {
        if point.len() != self.nvars {
            return Err(Error::ArityMismatch { expected: self.nvars, found: point.len() });
        }
        let p = self.field.characteristic();
        let mut acc = self.field.zero();
        for (m, c) in &self.terms {
            let mut v = 1u64;
            for (&x, &e) in point.iter().zip(m.exponents()) {
                if e > 0 {
                    v = crate::ffield::mul_mod(v, crate::ffield::pow_mod(x, e as u64, p), p);
                }
            }
            if v != 0 {
                acc = self.field.add(&acc, &self.field.mul(c, &self.field.from_u64(v)));
            }
        }
        Ok(acc)
    }

    /// The Koopman action `phi -> phi o F`, reduced.
    pub fn compose(&self, map: &PolyMap<K>) -> Result<Self> {
        if self.field != map.field {
            return Err(Error::FieldMismatch {
                left: self.field.characteristic(),
                right: map.field.characteristic(),
            });
        }
        if self.nvars != map.nvars {
            return Err(Error::ArityMismatch { expected: self.nvars, found: map.nvars });
        }
        let mut powers: HashMap<(usize, u32), Self> = HashMap::new();
        let mut out = Self::zero(self.field.clone(), map.nvars);
        for (m, c) in &self.terms {
            let mut term = Self::constant(self.field.clone(), map.nvars, c.clone());
            for (i, &e) in m.exponents().iter().enumerate() {
                if e == 0 {
                    continue;
                }
                let pw = powers.entry((i, e)).or_insert_with(|| map.components[i].pow(e as u64));
                term = term.mul_impl(pw);
                if term.is_zero() {
                    break;
                }
            }
            for (tm, tc) in term.terms {
                out.accumulate(tm, &tc);
            }
        }
        Ok(out)
    }

    /// Dense coefficients in the ascending monomial basis of `index`.
    pub fn coeff_vector(&self, index: &MonomialIndex) -> Vec<K::Elem> {
        let mut v = vec![self.field.zero(); index.len()];
        for (m, c) in &self.terms {
            let pos = index.position(m).expect("monomial outside the index");
            v[pos] = c.clone();
        }
        v
    }

    pub fn from_coeff_vector(field: K, nvars: usize, index: &MonomialIndex, v: &[K::Elem]) -> Result<Self> {
        if v.len() != index.len() {
            return Err(Error::DimensionMismatch { expected: index.len(), found: v.len() });
        }
        let mut out = Self::zero(field, nvars);
        for (i, c) in v.iter().enumerate() {
            out.insert(index.monomial(i).clone(), c.clone());
        }
        Ok(out)
    }

    /// Linear combination `sum_i coeffs[i] * polys[i]`.
    pub fn linear_combination(field: &K, nvars: usize, coeffs: &[K::Elem], polys: &[Self]) -> Self {
        let mut out = Self::zero(field.clone(), nvars);
        for (c, p) in coeffs.iter().zip(polys) {
            if field.is_zero(c) {
                continue;
            }
            for (m, t) in &p.terms {
                out.accumulate(m.clone(), &field.mul(c, t));
            }
        }
        out
    }

    /// Maps every coefficient into another scalar domain with the same
    /// characteristic.
    pub fn try_map_coeffs<L, E>(&self, target: &L, mut f: impl FnMut(&K::Elem) -> std::result::Result<L::Elem, E>) -> std::result::Result<Poly<L>, E>
    where
        L: ScalarField,
    {
        let mut out = Poly::zero(target.clone(), self.nvars);
        for (m, c) in &self.terms {
            let v = f(c)?;
            out.accumulate(m.clone(), &v);
        }
        Ok(out)
    }

    pub fn map_coeffs<L: ScalarField>(&self, target: &L, mut f: impl FnMut(&K::Elem) -> L::Elem) -> Poly<L> {
        self.try_map_coeffs(target, |c| Ok::<_, std::convert::Infallible>(f(c))).unwrap_or_else(|e| match e {})
    }
}

impl Poly<FieldSpec> {
    /// Value at a point of `F_p^n`.
    pub fn eval(&self, point: &[FieldElement]) -> Result<FieldElement> {
        let mut residues = Vec::with_capacity(point.len());
        for x in point {
            if x.field() != self.field {
                return Err(Error::FieldMismatch { left: self.field.p(), right: x.field().p() });
            }
            residues.push(x.value());
        }
        self.eval_residues(&residues)
    }

    /// Univariate polynomial from ascending integer coefficients.
    pub fn from_u64_coeffs(field: FieldSpec, coeffs: &[u64]) -> Self {
        Self::univariate(field, coeffs.iter().map(|&c| field.elem(c)))
    }
}

impl<K: ScalarField> fmt::Display for Poly<K> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for (m, c) in self.terms.iter().rev() {
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            if m.is_one() {
                write!(f, "{}", self.field.render(c))?;
            } else if self.field.is_one(c) {
                write!(f, "{}", m.render())?;
            } else {
                write!(f, "{}*{}", self.field.render(c), m.render())?;
            }
        }
        Ok(())
    }
}

impl<K: ScalarField> Add for &Poly<K> {
    type Output = Poly<K>;
    fn add(self, rhs: &Poly<K>) -> Poly<K> {
        self.checked_add(rhs).expect("incompatible polynomials in addition")
    }
}

impl<K: ScalarField> Sub for &Poly<K> {
    type Output = Poly<K>;
    fn sub(self, rhs: &Poly<K>) -> Poly<K> {
        self.checked_sub(rhs).expect("incompatible polynomials in subtraction")
    }
}

impl<K: ScalarField> Mul for &Poly<K> {
    type Output = Poly<K>;
    fn mul(self, rhs: &Poly<K>) -> Poly<K> {
        self.checked_mul(rhs).expect("incompatible polynomials in multiplication")
    }
}

impl<K: ScalarField> Neg for &Poly<K> {
    type Output = Poly<K>;
    fn neg(self) -> Poly<K> {
        self.neg_impl()
    }
}

/// A map `F_p^n -> F_p^n` (or into `K^n`), one reduced polynomial per
/// output coordinate.
#[derive(Clone, Debug, PartialEq)]
pub struct PolyMap<K: ScalarField> {
    field: K,
    nvars: usize,
    components: Vec<Poly<K>>,
}

impl<K: ScalarField> PolyMap<K> {
    pub fn new(components: Vec<Poly<K>>) -> Result<Self> {
        let first = components.first().ok_or(Error::ArityMismatch { expected: 1, found: 0 })?;
        let field = first.field.clone();
        let nvars = components.len();
        for c in &components {
            if c.field != field {
                return Err(Error::FieldMismatch {
                    left: field.characteristic(),
                    right: c.field.characteristic(),
                });
            }
            if c.nvars != nvars {
                return Err(Error::ArityMismatch { expected: nvars, found: c.nvars });
            }
        }
        Ok(PolyMap { field, nvars, components })
    }

    pub fn identity(field: K, nvars: usize) -> Self {
        let components = (0..nvars).map(|i| Poly::var(field.clone(), nvars, i)).collect();
        PolyMap { field, nvars, components }
    }

    pub fn field(&self) -> &K {
        &self.field
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn components(&self) -> &[Poly<K>] {
        &self.components
    }

    pub fn component(&self, i: usize) -> &Poly<K> {
        &self.components[i]
    }

    pub fn into_components(self) -> Vec<Poly<K>> {
        self.components
    }

    /// `self o inner`.
    pub fn compose(&self, inner: &PolyMap<K>) -> Result<Self> {
        let components = self.components.iter().map(|c| c.compose(inner)).collect::<Result<Vec<_>>>()?;
        Ok(PolyMap { field: self.field.clone(), nvars: self.nvars, components })
    }

    pub fn eval_residues(&self, point: &[u64]) -> Result<Vec<K::Elem>> {
        self.components.iter().map(|c| c.eval_residues(point)).collect()
    }

    pub fn try_map_coeffs<L, E>(&self, target: &L, mut f: impl FnMut(&K::Elem) -> std::result::Result<L::Elem, E>) -> std::result::Result<PolyMap<L>, E>
    where
        L: ScalarField,
    {
        let components = self
            .components
            .iter()
            .map(|c| c.try_map_coeffs(target, &mut f))
            .collect::<std::result::Result<Vec<_>, E>>()?;
        Ok(PolyMap { field: target.clone(), nvars: self.nvars, components })
    }
}

impl<K: ScalarField> From<Poly<K>> for PolyMap<K> {
    /// A single polynomial as a map; only meaningful for `nvars == 1`.
    fn from(p: Poly<K>) -> Self {
        PolyMap::new(vec![p]).expect("a univariate polynomial is a map of F_p")
    }
}

impl<K: ScalarField> fmt::Display for PolyMap<K> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, c) in self.components.iter().enumerate() {
            if i > 0 {
                write!(f, "; ")?;
            }
            write!(f, "{c}")?;
        }
        Ok(())
    }
}
