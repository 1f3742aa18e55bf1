//! The Koopman pipeline with a symbolic constant `a`, over `F_p(a)`.
//!
//! The generic computation is only valid off the *degeneration set*: the
//! values `a0` where a denominator in the input, the basis, `M`, `V` or
//! `det M` vanishes. Classification re-runs the concrete pipeline at every
//! `a0` and reports where the two disagree.

mod factor;
mod ratfunc;

pub use factor::{factor_univariate, is_irreducible, Factorization};
pub use ratfunc::{ParamPoly, RationalFunc, RationalFunctionField};

use std::collections::BTreeSet;
use std::fmt;

use crate::error::{Error, Result};
use crate::exactla::Matrix;
use crate::ffield::FieldSpec;
use crate::koopman::{
    build_invariant_subspace, build_invariant_subspace_with_step, invert_companion, invert_decomposition, is_permutation,
    KoopmanDecomposition,
};
use crate::polyfunc::{Poly, PolyMap, DEFAULT_MAX_SPACE};

pub type ParamMap = PolyMap<RationalFunctionField>;
pub type ParamPolyFn = Poly<RationalFunctionField>;

/// Functional reduction `a^p = a` of every exponent.
pub fn param_reduce(p: &ParamPoly) -> ParamPoly {
    p.reduce_functional()
}

/// Substitutes `a = a0` in every coefficient.
pub fn specialize_map(map: &ParamMap, a0: u64) -> Result<PolyMap<FieldSpec>> {
    let base = map.field().base();
    map.try_map_coeffs(&base, |c| c.specialize(a0))
}

pub fn specialize_poly(poly: &ParamPolyFn, a0: u64) -> Result<Poly<FieldSpec>> {
    let base = poly.field().base();
    poly.try_map_coeffs(&base, |c| c.specialize(a0))
}

/// Replaces every coefficient by its reduced numerator over its reduced
/// denominator. Only for display: the result agrees with the input at each
/// `a0` where the input is defined.
pub fn reduce_coefficients(poly: &ParamPolyFn) -> ParamPolyFn {
    let field = poly.field().clone();
    poly.map_coeffs(&field, |c| {
        let (num, den) = c.reduce_functional();
        if den.is_zero() {
            c.clone()
        } else {
            RationalFunc::new(num, den).expect("nonzero denominator")
        }
    })
}

/// A symbolic decomposition with its determinant and degeneration set.
#[derive(Clone, Debug)]
pub struct ParamDecomposition {
    decomposition: KoopmanDecomposition<RationalFunctionField>,
    det: RationalFunc,
    degeneration: Vec<u64>,
}

impl ParamDecomposition {
    pub fn decomposition(&self) -> &KoopmanDecomposition<RationalFunctionField> {
        &self.decomposition
    }

    pub fn field(&self) -> &RationalFunctionField {
        self.decomposition.field()
    }

    pub fn dimension(&self) -> usize {
        self.decomposition.dimension()
    }

    pub fn det(&self) -> &RationalFunc {
        &self.det
    }

    /// Values of `a` where the generic computation does not specialize.
    pub fn degeneration(&self) -> &[u64] {
        &self.degeneration
    }
}

fn collect_roots(set: &mut BTreeSet<u64>, r: &RationalFunc) {
    if !r.den().is_constant() {
        set.extend(r.den().roots());
    }
}

fn collect_poly(set: &mut BTreeSet<u64>, poly: &ParamPolyFn) {
    for (_, c) in poly.terms() {
        collect_roots(set, c);
    }
}

fn collect_matrix(set: &mut BTreeSet<u64>, m: &Matrix<RationalFunctionField>) {
    for c in m.entries() {
        collect_roots(set, c);
    }
}

pub fn param_koopman(map: &ParamMap) -> Result<ParamDecomposition> {
    param_koopman_with_limit(map, DEFAULT_MAX_SPACE)
}

/// Chain elements are kept with `a^p = a` applied to their coefficients, so
/// each one is the canonical form of a function of `(a, x)`. Division only
/// happens afterwards, in the linear algebra over `F_p(a)`.
pub fn param_koopman_with_limit(map: &ParamMap, max_space: usize) -> Result<ParamDecomposition> {
    let decomposition =
        build_invariant_subspace_with_step(map, max_space, |psi| Ok(reduce_coefficients(&psi.compose(map)?)))?;
    let det = decomposition.matrix().determinant()?;
    let mut set = BTreeSet::new();
    for comp in map.components() {
        collect_poly(&mut set, comp);
    }
    for psi in decomposition.basis() {
        collect_poly(&mut set, psi);
    }
    collect_matrix(&mut set, decomposition.matrix());
    collect_matrix(&mut set, decomposition.coords());
    collect_roots(&mut set, &det);
    Ok(ParamDecomposition { decomposition, det, degeneration: set.into_iter().collect() })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Verdict {
    Invertible,
    Singular,
    Undefined,
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Verdict::Invertible => "invertible",
            Verdict::Singular => "singular",
            Verdict::Undefined => "undefined",
        })
    }
}

/// Outcome at one value `a0`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ParamVerdict {
    pub a: u64,
    pub verdict: Verdict,
    /// Result of the concrete pipeline on the specialized map, if the map
    /// itself specializes.
    pub fallback_invertible: Option<bool>,
    /// The generic verdict was overridden by the concrete one.
    pub generic_mismatch: bool,
}

#[derive(Clone, Debug)]
pub struct ParamClassification {
    pub field: FieldSpec,
    pub dimension: usize,
    pub verdicts: Vec<ParamVerdict>,
    pub det: RationalFunc,
    /// Factorizations of the reduced numerator and denominator of `det M`.
    pub det_num_factors: Option<Factorization>,
    pub det_den_factors: Option<Factorization>,
}

impl ParamClassification {
    fn select(&self, v: Verdict) -> Vec<u64> {
        self.verdicts.iter().filter(|x| x.verdict == v).map(|x| x.a).collect()
    }

    pub fn invertible(&self) -> Vec<u64> {
        self.select(Verdict::Invertible)
    }

    pub fn singular(&self) -> Vec<u64> {
        self.select(Verdict::Singular)
    }

    pub fn undefined(&self) -> Vec<u64> {
        self.select(Verdict::Undefined)
    }

    pub fn mismatches(&self) -> Vec<u64> {
        self.verdicts.iter().filter(|x| x.generic_mismatch).map(|x| x.a).collect()
    }

    pub fn verdict(&self, a0: u64) -> Verdict {
        self.verdicts[(a0 % self.field.p()) as usize].verdict
    }

    /// `det M` as factored numerator over factored denominator.
    pub fn render_det(&self, symbol: &str) -> String {
        let num = match &self.det_num_factors {
            Some(f) => f.render(symbol),
            None => "0".into(),
        };
        match &self.det_den_factors {
            Some(f) if !f.factors.is_empty() || f.unit != 1 => format!("{num} / {}", f.render(symbol)),
            _ => num,
        }
    }
}

fn concrete_verdict(map: &PolyMap<FieldSpec>) -> Result<bool> {
    let d = build_invariant_subspace(map)?;
    Ok(is_permutation(&d).invertible)
}

pub fn classify_parameters(d: &ParamDecomposition) -> Result<ParamClassification> {
    let field = d.field().base();
    let p = field.p();
    let map = d.decomposition.map();
    let workers = std::thread::available_parallelism().map_or(1, |n| n.get()).min(p as usize) as u64;
    let check = |a0: u64| specialize_map(map, a0).ok().map(|m| concrete_verdict(&m)).transpose();
    let mut fallback = vec![None; p as usize];
    std::thread::scope(|s| -> Result<()> {
        let handles: Vec<_> = (0..workers)
            .map(|w| {
                s.spawn(move || {
                    (w..p).step_by(workers as usize).map(|a0| Ok((a0, check(a0)?))).collect::<Result<Vec<_>>>()
                })
            })
            .collect();
        for h in handles {
            for (a0, v) in h.join().expect("worker panicked")? {
                fallback[a0 as usize] = v;
            }
        }
        Ok(())
    })?;

    let mut verdicts = Vec::with_capacity(p as usize);
    for (a0, fb) in (0..p).zip(fallback) {
        let generic = if d.degeneration.binary_search(&a0).is_ok() {
            Verdict::Undefined
        } else if d.det.num().eval(a0) == 0 {
            Verdict::Singular
        } else {
            Verdict::Invertible
        };
        let (verdict, mismatch) = match (generic, fb) {
            (Verdict::Undefined, _) | (_, None) => (generic, false),
            (Verdict::Invertible, Some(false)) => (Verdict::Singular, true),
            (Verdict::Singular, Some(true)) => (Verdict::Invertible, true),
            _ => (generic, false),
        };
        verdicts.push(ParamVerdict { a: a0, verdict, fallback_invertible: fb, generic_mismatch: mismatch });
    }

    let (num, den) = d.det.reduce_functional();
    Ok(ParamClassification {
        field,
        dimension: d.dimension(),
        verdicts,
        det: d.det.clone(),
        det_num_factors: factor_univariate(&num).ok(),
        det_den_factors: factor_univariate(&den).ok(),
    })
}

/// A symbolic inverse, valid at every `a0` outside `degeneration` where
/// `det M` does not vanish.
#[derive(Clone, Debug)]
pub struct ParamInverse {
    pub inverse_map: ParamMap,
    /// Coefficients over the basis of `W`, one row per component.
    pub coeffs: Vec<Vec<RationalFunc>>,
    pub degeneration: Vec<u64>,
}

impl ParamInverse {
    pub fn specialize(&self, a0: u64) -> Result<PolyMap<FieldSpec>> {
        specialize_map(&self.inverse_map, a0)
    }

    /// Coefficients shown with `a^p = a` applied to numerators and
    /// denominators.
    pub fn reduced(&self) -> ParamMap {
        let comps = self.inverse_map.components().iter().map(reduce_coefficients).collect();
        PolyMap::new(comps).expect("components share field and arity")
    }
}

pub fn param_invert(d: &ParamDecomposition) -> Result<ParamInverse> {
    if d.det.is_zero() {
        return Err(Error::GenericallySingular);
    }
    let inv = if d.decomposition.chains().len() == 1 {
        invert_companion(&d.decomposition)
    } else {
        invert_decomposition(&d.decomposition)
    }
    .map_err(|e| match e {
        Error::NotPermutation { .. } => Error::GenericallySingular,
        other => other,
    })?;
    let mut set: BTreeSet<u64> = d.degeneration.iter().copied().collect();
    for comp in inv.inverse_map.components() {
        collect_poly(&mut set, comp);
    }
    Ok(ParamInverse { inverse_map: inv.inverse_map, coeffs: inv.coeffs, degeneration: set.into_iter().collect() })
}
