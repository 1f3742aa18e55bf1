//! Dense exact linear algebra over any [`ScalarField`].
//!
//! Elimination always pivots on the first nonzero entry of the column.

use std::fmt;

use crate::error::{Error, Result};
use crate::ffield::ScalarField;

/// Row-major dense matrix.
#[derive(Clone, Debug, PartialEq)]
pub struct Matrix<K: ScalarField> {
    field: K,
    rows: usize,
    cols: usize,
    data: Vec<K::Elem>,
}

impl<K: ScalarField> Matrix<K> {
    pub fn zeros(field: K, rows: usize, cols: usize) -> Self {
        let data = vec![field.zero(); rows * cols];
        Matrix { field, rows, cols, data }
    }

    pub fn identity(field: K, n: usize) -> Self {
        let mut m = Self::zeros(field, n, n);
        for i in 0..n {
            m.data[i * n + i] = m.field.one();
        }
        m
    }

    pub fn from_rows(field: K, rows: Vec<Vec<K::Elem>>) -> Result<Self> {
        let cols = rows.first().map_or(0, Vec::len);
        let nrows = rows.len();
        let mut data = Vec::with_capacity(nrows * cols);
        for r in rows {
            if r.len() != cols {
                return Err(Error::DimensionMismatch { expected: cols, found: r.len() });
            }
            data.extend(r);
        }
        Ok(Matrix { field, rows: nrows, cols, data })
    }

    pub fn field(&self) -> &K {
        &self.field
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &K::Elem {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: K::Elem) {
        self.data[i * self.cols + j] = v;
    }

    pub fn row(&self, i: usize) -> &[K::Elem] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn to_rows(&self) -> Vec<Vec<K::Elem>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn entries(&self) -> impl Iterator<Item = &K::Elem> {
        self.data.iter()
    }

    fn require_square(&self) -> Result<()> {
        if self.is_square() {
            Ok(())
        } else {
            Err(Error::NotSquare { rows: self.rows, cols: self.cols })
        }
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        if self.cols != other.rows {
            return Err(Error::DimensionMismatch { expected: self.cols, found: other.rows });
        }
        let f = &self.field;
        let mut out = Self::zeros(f.clone(), self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if f.is_zero(a) {
                    continue;
                }
                for j in 0..other.cols {
                    let b = other.get(k, j);
                    if f.is_zero(b) {
                        continue;
                    }
                    let idx = i * other.cols + j;
                    out.data[idx] = f.add(&out.data[idx], &f.mul(a, b));
                }
            }
        }
        Ok(out)
    }

    /// Row vector times matrix, `u^T M`.
    pub fn vec_mul(&self, u: &[K::Elem]) -> Result<Vec<K::Elem>> {
        if u.len() != self.rows {
            return Err(Error::DimensionMismatch { expected: self.rows, found: u.len() });
        }
        let f = &self.field;
        let mut out = vec![f.zero(); self.cols];
        for (i, ui) in u.iter().enumerate() {
            if f.is_zero(ui) {
                continue;
            }
            for (j, o) in out.iter_mut().enumerate() {
                let m = self.get(i, j);
                if !f.is_zero(m) {
                    *o = f.add(o, &f.mul(ui, m));
                }
            }
        }
        Ok(out)
    }

    /// Matrix times column vector, `M u`.
    pub fn mul_vec(&self, u: &[K::Elem]) -> Result<Vec<K::Elem>> {
        if u.len() != self.cols {
            return Err(Error::DimensionMismatch { expected: self.cols, found: u.len() });
        }
        let f = &self.field;
        Ok((0..self.rows)
            .map(|i| {
                self.row(i).iter().zip(u).fold(f.zero(), |acc, (m, x)| {
                    if f.is_zero(m) || f.is_zero(x) {
                        acc
                    } else {
                        f.add(&acc, &f.mul(m, x))
                    }
                })
            })
            .collect())
    }

    pub fn transpose(&self) -> Self {
        let mut out = Self::zeros(self.field.clone(), self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                out.set(j, i, self.get(i, j).clone());
            }
        }
        out
    }

    pub fn determinant(&self) -> Result<K::Elem> {
        self.require_square()?;
        let f = &self.field;
        let n = self.rows;
        let mut a = self.to_rows();
        let mut det = f.one();
        for col in 0..n {
            let Some(piv) = (col..n).find(|&r| !f.is_zero(&a[r][col])) else {
                return Ok(f.zero());
            };
            if piv != col {
                a.swap(piv, col);
                det = f.neg(&det);
            }
            let pivot = a[col][col].clone();
            det = f.mul(&det, &pivot);
            let pinv = f.inv(&pivot).expect("pivot is nonzero");
            for r in col + 1..n {
                if f.is_zero(&a[r][col]) {
                    continue;
                }
                let factor = f.mul(&a[r][col], &pinv);
                let (upper, lower) = a.split_at_mut(r);
                let prow = &upper[col];
                for (x, y) in lower[0].iter_mut().zip(prow).skip(col) {
                    if !f.is_zero(y) {
                        *x = f.sub(x, &f.mul(&factor, y));
                    }
                }
            }
        }
        Ok(det)
    }

    /// Gauss-Jordan inverse.
    pub fn inverse(&self) -> Result<Self> {
        self.require_square()?;
        let f = &self.field;
        let n = self.rows;
        let mut a = self.to_rows();
        let mut inv = Self::identity(f.clone(), n).to_rows();
        for col in 0..n {
            let piv = (col..n).find(|&r| !f.is_zero(&a[r][col])).ok_or(Error::Singular)?;
            a.swap(piv, col);
            inv.swap(piv, col);
            let pinv = f.inv(&a[col][col]).expect("pivot is nonzero");
            for x in a[col].iter_mut().chain(inv[col].iter_mut()) {
                *x = f.mul(x, &pinv);
            }
            for r in 0..n {
                if r == col || f.is_zero(&a[r][col]) {
                    continue;
                }
                let factor = a[r][col].clone();
                let (prow_a, prow_i) = (a[col].clone(), inv[col].clone());
                for (x, y) in a[r].iter_mut().zip(&prow_a) {
                    if !f.is_zero(y) {
                        *x = f.sub(x, &f.mul(&factor, y));
                    }
                }
                for (x, y) in inv[r].iter_mut().zip(&prow_i) {
                    if !f.is_zero(y) {
                        *x = f.sub(x, &f.mul(&factor, y));
                    }
                }
            }
        }
        Self::from_rows(f.clone(), inv)
    }

    /// `M^k` by repeated squaring, `M^0 = I`.
    pub fn pow(&self, mut k: u64) -> Result<Self> {
        self.require_square()?;
        let mut acc = Self::identity(self.field.clone(), self.rows);
        let mut base = self.clone();
        while k > 0 {
            if k & 1 == 1 {
                acc = acc.mul(&base)?;
            }
            k >>= 1;
            if k > 0 {
                base = base.mul(&base)?;
            }
        }
        Ok(acc)
    }
}

impl<K: ScalarField> fmt::Display for Matrix<K> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.rows {
            let row: Vec<String> = self.row(i).iter().map(|e| self.field.render(e)).collect();
            writeln!(f, "[{}]", row.join(", "))?;
        }
        Ok(())
    }
}

/// Outcome of [`IndependenceTracker::insert`].
#[derive(Clone, Debug, PartialEq)]
pub enum Insertion<E> {
    Independent,
    /// The vector equals `sum_i coeffs[i] * accepted[i]`.
    Dependent(Vec<E>),
}

/// Incremental echelon form that decides membership in the span of the
/// vectors accepted so far.
///
/// Each echelon row carries its expression in terms of the accepted
/// vectors, so a dependent insertion can be written back over them.
#[derive(Clone, Debug)]
pub struct IndependenceTracker<K: ScalarField> {
    field: K,
    dim: usize,
    // (pivot column, echelon row normalized to pivot 1, row as combination of accepted vectors)
    rows: Vec<(usize, Vec<K::Elem>, Vec<K::Elem>)>,
}

impl<K: ScalarField> IndependenceTracker<K> {
    pub fn new(field: K, dim: usize) -> Self {
        IndependenceTracker { field, dim, rows: Vec::new() }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Number of accepted vectors.
    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    /// Reduces `v` against the echelon rows. Returns the residual and the
    /// combination of accepted vectors that was subtracted.
    fn reduce(&self, v: &[K::Elem]) -> (Vec<K::Elem>, Vec<K::Elem>) {
        let f = &self.field;
        let k = self.rows.len();
        let mut w = v.to_vec();
        let mut comb = vec![f.zero(); k];
        for (pivot, row, row_comb) in &self.rows {
            let lambda = w[*pivot].clone();
            if f.is_zero(&lambda) {
                continue;
            }
            for (x, y) in w.iter_mut().zip(row).skip(*pivot) {
                if !f.is_zero(y) {
                    *x = f.sub(x, &f.mul(&lambda, y));
                }
            }
            for (c, r) in comb.iter_mut().zip(row_comb) {
                if !f.is_zero(r) {
                    *c = f.add(c, &f.mul(&lambda, r));
                }
            }
        }
        (w, comb)
    }

    /// Coefficients expressing `v` over the accepted vectors, if it lies in
    /// their span. Does not modify the tracker.
    pub fn represent(&self, v: &[K::Elem]) -> Result<Option<Vec<K::Elem>>> {
        self.check_len(v)?;
        let (w, comb) = self.reduce(v);
        Ok(w.iter().all(|x| self.field.is_zero(x)).then_some(comb))
    }

    pub fn insert(&mut self, v: &[K::Elem]) -> Result<Insertion<K::Elem>> {
        self.check_len(v)?;
        let f = self.field.clone();
        let (mut w, comb) = self.reduce(v);
        let Some(pivot) = w.iter().position(|x| !f.is_zero(x)) else {
            return Ok(Insertion::Dependent(comb));
        };
        // w = v - sum comb_i * accepted_i, with v the newly accepted vector
        let k = self.rows.len();
        let pinv = f.inv(&w[pivot]).expect("pivot is nonzero");
        for x in w.iter_mut().skip(pivot) {
            *x = f.mul(x, &pinv);
        }
        let mut row_comb: Vec<K::Elem> = comb.iter().map(|c| f.mul(&f.neg(c), &pinv)).collect();
        row_comb.push(pinv);
        for (_, _, rc) in self.rows.iter_mut() {
            rc.push(f.zero());
        }
        debug_assert_eq!(row_comb.len(), k + 1);
        self.rows.push((pivot, w, row_comb));
        Ok(Insertion::Independent)
    }

    fn check_len(&self, v: &[K::Elem]) -> Result<()> {
        if v.len() == self.dim {
            Ok(())
        } else {
            Err(Error::DimensionMismatch { expected: self.dim, found: v.len() })
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ffield::{FieldElement, FieldSpec};
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn mat(f: FieldSpec, rows: &[&[u64]]) -> Matrix<FieldSpec> {
        Matrix::from_rows(f, rows.iter().map(|r| r.iter().map(|&v| f.elem(v)).collect()).collect()).unwrap()
    }

    fn vals(v: &[FieldElement]) -> Vec<u64> {
        v.iter().map(|e| e.value()).collect()
    }

    fn f2_example() -> Matrix<FieldSpec> {
        let f2 = FieldSpec::new(2).unwrap();
        mat(
            f2,
            &[
                &[0, 1, 0, 0, 0, 0],
                &[0, 0, 1, 0, 0, 0],
                &[0, 0, 0, 1, 0, 0],
                &[0, 0, 0, 0, 1, 0],
                &[0, 0, 0, 0, 0, 1],
                &[1, 1, 1, 0, 1, 1],
            ],
        )
    }

    /// Leibniz expansion over all permutations.
    fn leibniz_det(m: &Matrix<FieldSpec>) -> u64 {
        let n = m.rows();
        let p = m.field().p();
        let mut perm: Vec<usize> = (0..n).collect();
        let mut total = 0u64;
        fn heap(k: usize, perm: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
            if k <= 1 {
                out.push(perm.clone());
                return;
            }
            for i in 0..k {
                heap(k - 1, perm, out);
                if k % 2 == 0 {
                    perm.swap(i, k - 1);
                } else {
                    perm.swap(0, k - 1);
                }
            }
        }
        let mut all = Vec::new();
        heap(n, &mut perm, &mut all);
        for s in all {
            let inversions = (0..n).flat_map(|i| (i + 1..n).map(move |j| (i, j))).filter(|&(i, j)| s[i] > s[j]).count();
            let prod = (0..n).fold(1u64, |acc, i| acc * m.get(i, s[i]).value() % p);
            total = if inversions % 2 == 0 { (total + prod) % p } else { (total + p - prod) % p };
        }
        total
    }

    #[test]
    fn determinant_examples() {
        let f5 = FieldSpec::new(5).unwrap();
        let companion = mat(f5, &[&[0, 1, 0], &[0, 0, 1], &[4, 3, 3]]);
        assert_eq!(leibniz_det(&companion), 4);
        assert_eq!(companion.determinant().unwrap().value(), 4);
        let f2 = FieldSpec::new(2).unwrap();
        assert_eq!(Matrix::identity(f2, 6).determinant().unwrap().value(), 1);
        assert_eq!(f2_example().determinant().unwrap().value(), 1);
        let rect = Matrix::zeros(f5, 2, 3);
        assert_eq!(rect.determinant(), Err(Error::NotSquare { rows: 2, cols: 3 }));
    }

    #[test]
    fn inverse_examples() {
        let inv = f2_example().inverse().unwrap();
        let f2 = FieldSpec::new(2).unwrap();
        let reference = mat(
            f2,
            &[
                &[1, 1, 0, 1, 1, 1],
                &[1, 0, 0, 0, 0, 0],
                &[0, 1, 0, 0, 0, 0],
                &[0, 0, 1, 0, 0, 0],
                &[0, 0, 0, 1, 0, 0],
                &[0, 0, 0, 0, 1, 0],
            ],
        );
        assert_eq!(inv, reference);
        assert_eq!(Matrix::identity(f2, 4).inverse().unwrap(), Matrix::identity(f2, 4));
        let f5 = FieldSpec::new(5).unwrap();
        assert_eq!(mat(f5, &[&[1, 1], &[1, 1]]).inverse(), Err(Error::Singular));

        // K^{-1} of the F_5 companion example, in row convention
        let m = mat(f5, &[&[0, 1, 0], &[0, 0, 1], &[4, 3, 3]]);
        assert_eq!(m.inverse().unwrap(), mat(f5, &[&[3, 3, 4], &[1, 0, 0], &[0, 1, 0]]));
    }

    #[test]
    fn power_and_products() {
        let m = f2_example();
        let f2 = *m.field();
        assert_eq!(m.pow(0).unwrap(), Matrix::identity(f2, 6));
        assert_eq!(m.pow(1).unwrap(), m);
        let e1: Vec<_> = (0..6).map(|i| f2.elem((i == 0) as u64)).collect();
        assert_eq!(vals(&m.vec_mul(&e1).unwrap()), vec![0, 1, 0, 0, 0, 0]);
        let u: Vec<_> = [1, 0, 1, 1, 0, 1].iter().map(|&v| f2.elem(v)).collect();
        assert_eq!(Matrix::identity(f2, 6).vec_mul(&u).unwrap(), u);
        let zero = vec![f2.elem(0); 6];
        assert_eq!(m.vec_mul(&zero).unwrap(), zero);
        assert_eq!(m.mul_vec(&zero).unwrap(), zero);
        assert!(matches!(m.vec_mul(&zero[..3]), Err(Error::DimensionMismatch { .. })));
        assert_eq!(m.transpose().mul_vec(&e1).unwrap(), m.vec_mul(&e1).unwrap());
    }

    #[test]
    fn tracker_examples() {
        let f5 = FieldSpec::new(5).unwrap();
        let v = |xs: &[u64]| xs.iter().map(|&x| f5.elem(x)).collect::<Vec<_>>();
        let mut t = IndependenceTracker::new(f5, 5);
        assert_eq!(t.insert(&v(&[0, 1, 0, 0, 0])).unwrap(), Insertion::Independent);
        assert_eq!(t.insert(&v(&[0, 0, 1, 0, 0])).unwrap(), Insertion::Independent);
        assert_eq!(t.insert(&v(&[0, 0, 0, 0, 0])).unwrap(), Insertion::Dependent(v(&[0, 0])));
        assert!(matches!(t.insert(&v(&[1, 2])), Err(Error::DimensionMismatch { expected: 5, found: 2 })));

        // chain of the F_5 example: x, f, f o f, then f o f o f
        let mut t = IndependenceTracker::new(f5, 5);
        for chain in [[0, 1, 0, 0, 0], [3, 3, 2, 1, 0], [2, 4, 3, 2, 0]] {
            assert_eq!(t.insert(&v(&chain)).unwrap(), Insertion::Independent);
        }
        // 4x + 3 f + 3 (f o f)
        let third: Vec<u64> = (0..5).map(|i| (4 * [0, 1, 0, 0, 0][i] + 3 * [3, 3, 2, 1, 0][i] + 3 * [2, 4, 3, 2, 0][i]) % 5).collect();
        assert_eq!(t.insert(&v(&third)).unwrap(), Insertion::Dependent(v(&[4, 3, 3])));
    }

    #[test]
    fn random_matrices_over_f7() {
        let f7 = FieldSpec::new(7).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for trial in 0..200 {
            let n = 1 + trial % 5;
            // bias toward singular matrices with a small value range
            let hi = if trial % 3 == 0 { 2 } else { 7 };
            let rows: Vec<Vec<FieldElement>> =
                (0..n).map(|_| (0..n).map(|_| f7.elem(rng.gen_range(0..hi))).collect()).collect();
            let m = Matrix::from_rows(f7, rows).unwrap();
            let det = m.determinant().unwrap();
            if n <= 4 {
                assert_eq!(det.value(), leibniz_det(&m));
            }
            match m.inverse() {
                Ok(inv) => {
                    assert!(!det.is_zero());
                    assert_eq!(inv.mul(&m).unwrap(), Matrix::identity(f7, n));
                    assert_eq!(m.mul(&inv).unwrap(), Matrix::identity(f7, n));
                }
                Err(Error::Singular) => assert!(det.is_zero()),
                Err(e) => panic!("unexpected {e}"),
            }
            let (i, j) = (trial as u64 % 4, (trial as u64 / 4) % 4);
            assert_eq!(m.pow(i + j).unwrap(), m.pow(i).unwrap().mul(&m.pow(j).unwrap()).unwrap());
        }
    }

    #[test]
    fn tracker_reconstructs_dependents() {
        let f3 = FieldSpec::new(3).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..100 {
            let dim = 6;
            let mut t = IndependenceTracker::new(f3, dim);
            let mut accepted: Vec<Vec<FieldElement>> = Vec::new();
            for _ in 0..10 {
                let v: Vec<_> = (0..dim).map(|_| f3.elem(rng.gen_range(0..3))).collect();
                match t.insert(&v).unwrap() {
                    Insertion::Independent => accepted.push(v),
                    Insertion::Dependent(c) => {
                        assert_eq!(c.len(), accepted.len());
                        let mut sum = vec![f3.elem(0); dim];
                        for (ci, a) in c.iter().zip(&accepted) {
                            for (s, x) in sum.iter_mut().zip(a) {
                                *s = *s + *ci * *x;
                            }
                        }
                        assert_eq!(sum, v);
                    }
                }
            }
            assert_eq!(t.rank(), accepted.len());
            let m = Matrix::from_rows(f3, accepted.clone()).unwrap();
            if m.is_square() {
                assert!(!m.determinant().unwrap().is_zero());
            }
        }
    }
}
