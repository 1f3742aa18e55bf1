//! The reduced Koopman operator of a polynomial map.
//!
//! For `F: F_p^n -> F_p^n` the dual map `F*(phi) = phi o F` is linear on the
//! space of functions. [`build_invariant_subspace`] grows Krylov chains
//! `chi_i, F* chi_i, (F*)^2 chi_i, ...` from the coordinate functions until
//! every coordinate function is covered and the span `W` is `F*`-invariant.
//! Restricted to `W` the operator is the `N x N` matrix `M`, with the row
//! convention
//!
//! ```text
//! psi_i o F = sum_j M[i][j] psi_j
//! ```
//!
//! and the coordinate functions are `chi_i = V[i] . psi`. Then
//! `F^(k) = V M^k psi` for every `k >= 0`, `F` is a bijection iff `M` is
//! non-singular, and in that case `F^(-1) = V M^(-1) psi`.

use crate::error::{Error, Result};
use crate::exactla::{IndependenceTracker, Insertion, Matrix};
use crate::ffield::ScalarField;
use crate::polyfunc::{MonomialIndex, Poly, PolyMap, DEFAULT_MAX_SPACE};

/// One Krylov chain of the basis.
#[derive(Clone, Debug, PartialEq)]
pub struct Chain<E> {
    /// 0-based index of the coordinate function that seeded the chain.
    pub generator: usize,
    /// Position of the chain's first element in the basis.
    pub start: usize,
    pub len: usize,
    /// Coefficients of the first dependent iterate over the basis built so
    /// far (length `start + len`).
    pub closing: Vec<E>,
}

/// Basis of `W`, the matrix of `F*|W`, and the coordinate rows `V`.
#[derive(Clone, Debug)]
pub struct KoopmanDecomposition<K: ScalarField> {
    map: PolyMap<K>,
    basis: Vec<Poly<K>>,
    matrix: Matrix<K>,
    coords: Matrix<K>,
    chains: Vec<Chain<K::Elem>>,
}

impl<K: ScalarField> KoopmanDecomposition<K> {
    pub fn map(&self) -> &PolyMap<K> {
        &self.map
    }

    pub fn field(&self) -> &K {
        self.map.field()
    }

    /// Dimension `N` of `W`.
    pub fn dimension(&self) -> usize {
        self.basis.len()
    }

    pub fn basis(&self) -> &[Poly<K>] {
        &self.basis
    }

    pub fn matrix(&self) -> &Matrix<K> {
        &self.matrix
    }

    /// The `n x N` matrix `V` with `chi_i = V[i] . psi`.
    pub fn coords(&self) -> &Matrix<K> {
        &self.coords
    }

    pub fn chains(&self) -> &[Chain<K::Elem>] {
        &self.chains
    }

    /// Dependence coefficients `alpha_0..alpha_{N-1}` of the first chain;
    /// for a univariate map these fill the last row of the companion matrix.
    pub fn alpha(&self) -> &[K::Elem] {
        &self.chains[0].closing
    }

    /// `sum_j row[j] * psi_j`.
    pub fn combine(&self, row: &[K::Elem]) -> Poly<K> {
        Poly::linear_combination(self.field(), self.map.nvars(), row, &self.basis)
    }

    fn combine_rows(&self, rows: &Matrix<K>) -> PolyMap<K> {
        let comps = (0..rows.rows()).map(|i| self.combine(rows.row(i))).collect();
        PolyMap::new(comps).expect("components share field and arity")
    }
}

/// The cyclic subspace of `chi` under `f*` for a univariate `f`.
pub fn cyclic_subspace_univariate<K: ScalarField>(f: &Poly<K>) -> Result<KoopmanDecomposition<K>> {
    if f.nvars() != 1 {
        return Err(Error::ArityMismatch { expected: 1, found: f.nvars() });
    }
    build_invariant_subspace(&PolyMap::from(f.clone()))
}

pub fn build_invariant_subspace<K: ScalarField>(map: &PolyMap<K>) -> Result<KoopmanDecomposition<K>> {
    build_invariant_subspace_with_limit(map, DEFAULT_MAX_SPACE)
}

/// Grows chains from `chi_1, chi_2, ...` in index order, skipping
/// coordinate functions already in the span, until all are covered.
pub fn build_invariant_subspace_with_limit<K: ScalarField>(
    map: &PolyMap<K>,
    max_space: usize,
) -> Result<KoopmanDecomposition<K>> {
    build_invariant_subspace_with_step(map, max_space, |psi| psi.compose(map))
}

/// As [`build_invariant_subspace_with_limit`], with `step` producing the next
/// chain element from the current one. `step` must agree with `psi o F` as a
/// function on `F_p^n`.
pub fn build_invariant_subspace_with_step<K, S>(
    map: &PolyMap<K>,
    max_space: usize,
    mut step: S,
) -> Result<KoopmanDecomposition<K>>
where
    K: ScalarField,
    S: FnMut(&Poly<K>) -> Result<Poly<K>>,
{
    let field = map.field().clone();
    let n = map.nvars();
    let index = MonomialIndex::new(field.characteristic(), n, max_space)?;
    let mut tracker = IndependenceTracker::new(field.clone(), index.len());
    let mut basis: Vec<Poly<K>> = Vec::new();
    let mut chains = Vec::new();

    for generator in 0..n {
        let chi = Poly::var(field.clone(), n, generator);
        if tracker.represent(&chi.coeff_vector(&index))?.is_some() {
            continue;
        }
        let start = basis.len();
        let mut current = chi;
        let closing = loop {
            match tracker.insert(&current.coeff_vector(&index))? {
                Insertion::Independent => {
                    let next = step(&current)?;
                    basis.push(current);
                    current = next;
                }
                Insertion::Dependent(coeffs) => break coeffs,
            }
        };
        chains.push(Chain { generator, start, len: basis.len() - start, closing });
    }

    let dim = basis.len();
    let mut matrix = Matrix::zeros(field.clone(), dim, dim);
    for chain in &chains {
        for k in 0..chain.len {
            let row = chain.start + k;
            if k + 1 < chain.len {
                matrix.set(row, row + 1, field.one());
            } else {
                for (j, c) in chain.closing.iter().enumerate() {
                    matrix.set(row, j, c.clone());
                }
            }
        }
    }

    let mut coords = Matrix::zeros(field.clone(), n, dim);
    for i in 0..n {
        let chi = Poly::var(field.clone(), n, i);
        let v = tracker
            .represent(&chi.coeff_vector(&index))?
            .expect("every coordinate function lies in W");
        for (j, c) in v.into_iter().enumerate() {
            coords.set(i, j, c);
        }
    }

    Ok(KoopmanDecomposition { map: map.clone(), basis, matrix, coords, chains })
}

/// Invertibility verdict with `det M` as certificate.
#[derive(Clone, Debug, PartialEq)]
pub struct PermutationVerdict<E> {
    pub invertible: bool,
    pub det: E,
}

pub fn is_permutation<K: ScalarField>(d: &KoopmanDecomposition<K>) -> PermutationVerdict<K::Elem> {
    let det = d.matrix.determinant().expect("M is square");
    PermutationVerdict { invertible: !d.field().is_zero(&det), det }
}

/// Coefficients of the inverse over the chain basis of a companion matrix:
/// `c_i = -alpha_{i+1} / alpha_0` for `i < N-1` and `c_{N-1} = 1 / alpha_0`.
pub fn inverse_coeffs<K: ScalarField>(field: &K, alpha: &[K::Elem]) -> Result<Vec<K::Elem>> {
    let first = alpha.first().ok_or(Error::Singular)?;
    let a0_inv = field.inv(first).ok_or(Error::Singular)?;
    let mut c: Vec<K::Elem> = alpha[1..].iter().map(|a| field.neg(&field.mul(a, &a0_inv))).collect();
    c.push(a0_inv);
    Ok(c)
}

/// An inverse map together with its coefficients over the basis of `W`.
#[derive(Clone, Debug, PartialEq)]
pub struct InverseResult<K: ScalarField> {
    pub inverse_map: PolyMap<K>,
    /// One coefficient row per component.
    pub coeffs: Vec<Vec<K::Elem>>,
}

fn not_permutation<K: ScalarField>(d: &KoopmanDecomposition<K>) -> Error {
    let det = d.matrix.determinant().map(|e| d.field().render(&e)).unwrap_or_default();
    Error::NotPermutation { det }
}

/// Inverts a univariate permutation polynomial from its chain coefficients.
pub fn invert_univariate<K: ScalarField>(f: &Poly<K>) -> Result<InverseResult<K>> {
    let d = cyclic_subspace_univariate(f)?;
    invert_companion(&d)
}

/// Same as [`invert_univariate`] on an existing single-chain decomposition.
pub fn invert_companion<K: ScalarField>(d: &KoopmanDecomposition<K>) -> Result<InverseResult<K>> {
    if d.chains.len() != 1 {
        return Err(Error::ArityMismatch { expected: 1, found: d.map.nvars() });
    }
    let c = inverse_coeffs(d.field(), d.alpha()).map_err(|_| not_permutation(d))?;
    let g = d.combine(&c);
    Ok(InverseResult { inverse_map: PolyMap::from(g), coeffs: vec![c] })
}

/// `g_i = V[i] M^{-1} psi` for every component.
pub fn invert_map<K: ScalarField>(map: &PolyMap<K>) -> Result<InverseResult<K>> {
    let d = build_invariant_subspace(map)?;
    invert_decomposition(&d)
}

pub fn invert_decomposition<K: ScalarField>(d: &KoopmanDecomposition<K>) -> Result<InverseResult<K>> {
    let minv = match d.matrix.inverse() {
        Ok(m) => m,
        Err(Error::Singular) => return Err(not_permutation(d)),
        Err(e) => return Err(e),
    };
    let rows = d.coords.mul(&minv)?;
    Ok(InverseResult { inverse_map: d.combine_rows(&rows), coeffs: rows.to_rows() })
}

/// Reconstructs `F = V M psi`.
pub fn represent_map<K: ScalarField>(d: &KoopmanDecomposition<K>) -> Result<PolyMap<K>> {
    Ok(d.combine_rows(&d.coords.mul(&d.matrix)?))
}

/// `F^(k) = V M^k psi`; negative `k` uses `M^{-1}`.
pub fn map_power<K: ScalarField>(d: &KoopmanDecomposition<K>, k: i64) -> Result<PolyMap<K>> {
    let base = if k < 0 {
        match d.matrix.inverse() {
            Ok(m) => m,
            Err(Error::Singular) => return Err(not_permutation(d)),
            Err(e) => return Err(e),
        }
    } else {
        d.matrix.clone()
    };
    let mk = base.pow(k.unsigned_abs())?;
    Ok(d.combine_rows(&d.coords.mul(&mk)?))
}
