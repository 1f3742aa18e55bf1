//! Permutation testing and closed-form inversion of polynomial maps over
//! prime fields through the reduced Koopman operator.
//!
//! A map `F: F_p^n -> F_p^n` given by reduced polynomials acts on functions by
//! precomposition. Restricting that linear action to the smallest invariant
//! subspace containing the coordinate functions gives a small matrix `M`;
//! `F` is a permutation exactly when `det M != 0`, and then `M^{-1}` yields
//! the inverse map directly.
//!
//! ```
//! use ffkoopman::{invert_univariate, FieldSpec, ReducedPoly};
//!
//! let f5 = FieldSpec::new(5).unwrap();
//! let f = ReducedPoly::from_u64_coeffs(f5, &[3, 3, 2, 1]);
//! let g = invert_univariate(&f).unwrap();
//! assert_eq!(g.inverse_map.to_string(), "x^3 + 3*x^2 + 3*x + 2");
//! ```

pub mod error;
pub mod exactla;
pub mod ffield;
pub mod koopman;
pub mod oracle;
pub mod parametric;
pub mod polyfunc;

pub use error::{Error, Result};
pub use exactla::{IndependenceTracker, Insertion, Matrix};
pub use ffield::{is_prime, FieldElement, FieldSpec, ScalarField};
pub use koopman::{
    build_invariant_subspace, build_invariant_subspace_with_limit, build_invariant_subspace_with_step,
    cyclic_subspace_univariate, inverse_coeffs,
    invert_companion, invert_decomposition, invert_map, invert_univariate, is_permutation, map_power, represent_map,
    Chain, InverseResult, KoopmanDecomposition, PermutationVerdict,
};
pub use parametric::{
    classify_parameters, factor_univariate, param_invert, param_koopman, param_reduce, ParamClassification,
    ParamDecomposition, ParamInverse, ParamMap, ParamPoly, RationalFunc, RationalFunctionField, Verdict,
};
pub use polyfunc::{Monomial, MonomialIndex, Poly, PolyMap, ReducedPoly};
