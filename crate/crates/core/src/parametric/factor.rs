//! Factorization of polynomials in `F_p[a]` into monic irreducibles.
//!
//! Square-free decomposition, then distinct-degree factorization, then
//! Cantor-Zassenhaus equal-degree splitting driven by a fixed-seed RNG so the
//! output is reproducible.

use std::cmp::Ordering;
use std::fmt;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::ffield::FieldSpec;

use super::ratfunc::ParamPoly;

const SPLIT_SEED: u64 = 0x5eed_f00d;

/// `unit * prod factor^mult`, factors monic irreducible, sorted by degree and
/// then by coefficients from the highest power down.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Factorization {
    pub field: FieldSpec,
    pub unit: u64,
    pub factors: Vec<(ParamPoly, u32)>,
}

impl Factorization {
    /// Multiplies everything back out.
    pub fn product(&self) -> ParamPoly {
        self.factors
            .iter()
            .fold(ParamPoly::constant(self.field, self.unit), |acc, (f, m)| acc.mul(&f.pow(*m as u64)))
    }

    /// Roots in `F_p` from the linear factors, ascending.
    pub fn roots(&self) -> Vec<u64> {
        let mut r: Vec<u64> = self
            .factors
            .iter()
            .filter(|(f, _)| f.degree() == Some(1))
            .map(|(f, _)| (f.modulus() - f.constant_term()) % f.modulus())
            .collect();
        r.sort_unstable();
        r
    }

    /// Factors of degree at least 2.
    pub fn nonlinear(&self) -> impl Iterator<Item = &(ParamPoly, u32)> {
        self.factors.iter().filter(|(f, _)| f.degree().unwrap_or(0) >= 2)
    }

    pub fn render(&self, symbol: &str) -> String {
        let mut out = String::new();
        if self.factors.is_empty() {
            return self.unit.to_string();
        }
        if self.unit != 1 {
            out.push_str(&format!("{}*", self.unit));
        }
        for (f, m) in &self.factors {
            out.push('(');
            out.push_str(&f.render(symbol));
            out.push(')');
            if *m > 1 {
                out.push_str(&format!("^{m}"));
            }
        }
        out
    }
}

impl fmt::Display for Factorization {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.render("a"))
    }
}

fn factor_order(a: &ParamPoly, b: &ParamPoly) -> Ordering {
    a.degree().cmp(&b.degree()).then_with(|| a.coeffs().iter().rev().cmp(b.coeffs().iter().rev()))
}

pub fn factor_univariate(poly: &ParamPoly) -> Result<Factorization> {
    if poly.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    let unit = poly.leading();
    let monic = poly.monic();
    let mut rng = ChaCha8Rng::seed_from_u64(SPLIT_SEED);
    let mut factors = Vec::new();
    for (sqf, mult) in square_free(&monic) {
        for (part, d) in distinct_degree(&sqf) {
            for irr in equal_degree(&part, d, &mut rng) {
                factors.push((irr, mult));
            }
        }
    }
    factors.sort_by(|(a, ma), (b, mb)| factor_order(a, b).then(ma.cmp(mb)));
    Ok(Factorization { field: poly.field(), unit, factors })
}

/// Full irreducibility test: no factor of degree `d < deg f` divides
/// `a^(p^d) - a`.
pub fn is_irreducible(f: &ParamPoly) -> bool {
    let deg = match f.degree() {
        None | Some(0) => return false,
        Some(d) => d,
    };
    let p = f.modulus();
    let x = ParamPoly::param(f.field());
    let mut h = x.clone();
    for _ in 1..deg {
        h = h.pow_mod(p, f);
        if !f.gcd(&h.sub(&x)).is_one() {
            return false;
        }
    }
    true
}

/// Yun-style decomposition of a monic polynomial into pairwise coprime
/// square-free parts with multiplicities.
fn square_free(f: &ParamPoly) -> Vec<(ParamPoly, u32)> {
    let mut out = Vec::new();
    if f.is_constant() {
        return out;
    }
    let p = f.modulus();
    let mut c = f.gcd(&f.derivative());
    let mut w = f.exact_div(&c);
    let mut i = 1u32;
    while !w.is_one() {
        let y = w.gcd(&c);
        let z = w.exact_div(&y);
        if !z.is_one() {
            out.push((z, i));
        }
        i += 1;
        w = y;
        c = c.exact_div(&w);
    }
    if !c.is_one() {
        // what is left is a p-th power; x -> x^(1/p) fixes F_p
        let root: Vec<u64> = c.coeffs().iter().step_by(p as usize).copied().collect();
        let root = ParamPoly::new(c.field(), root);
        for (g, m) in square_free(&root) {
            out.push((g, m * p as u32));
        }
    }
    out
}

/// Splits a square-free monic polynomial into products of irreducibles of
/// equal degree.
fn distinct_degree(f: &ParamPoly) -> Vec<(ParamPoly, usize)> {
    let mut out = Vec::new();
    let p = f.modulus();
    let x = ParamPoly::param(f.field());
    let mut rest = f.clone();
    let mut h = x.clone();
    let mut d = 0;
    while rest.degree().unwrap_or(0) >= 2 * (d + 1) {
        d += 1;
        h = h.pow_mod(p, &rest);
        let g = rest.gcd(&h.sub(&x));
        if !g.is_one() {
            rest = rest.exact_div(&g);
            h = h.rem(&rest).expect("nonzero modulus");
            out.push((g, d));
        }
    }
    if let Some(deg) = rest.degree().filter(|&deg| deg > 0) {
        out.push((rest, deg));
    }
    out
}

fn equal_degree(f: &ParamPoly, d: usize, rng: &mut ChaCha8Rng) -> Vec<ParamPoly> {
    let deg = f.degree().unwrap_or(0);
    if deg <= d {
        return vec![f.clone()];
    }
    let p = f.modulus();
    loop {
        let r: Vec<u64> = (0..deg).map(|_| rng.gen_range(0..p)).collect();
        let r = ParamPoly::new(f.field(), r);
        if r.is_constant() {
            continue;
        }
        let candidate = if p == 2 {
            // trace to F_2: r + r^2 + ... + r^(2^(d-1))
            let mut t = r.rem(f).expect("nonzero modulus");
            let mut s = t.clone();
            for _ in 1..d {
                s = s.mul(&s).rem(f).expect("nonzero modulus");
                t = t.add(&s);
            }
            t
        } else {
            // r^((p^d - 1)/2) = N(r)^((p-1)/2), N(r) = r^(1 + p + ... + p^(d-1))
            let mut s = r.rem(f).expect("nonzero modulus");
            let mut norm = s.clone();
            for _ in 1..d {
                s = s.pow_mod(p, f);
                norm = norm.mul(&s).rem(f).expect("nonzero modulus");
            }
            norm.pow_mod((p - 1) / 2, f).sub(&ParamPoly::one(f.field()))
        };
        let g = f.gcd(&candidate);
        let gd = g.degree().unwrap_or(0);
        if gd > 0 && gd < deg {
            let mut out = equal_degree(&g, d, rng);
            out.extend(equal_degree(&f.exact_div(&g), d, rng));
            return out;
        }
    }
}
