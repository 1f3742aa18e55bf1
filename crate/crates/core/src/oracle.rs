//! Brute-force ground truth by enumerating `F_p^n`.
//!
//! Nothing here touches the Koopman machinery: permutation checks read the
//! value table directly, and inverses are rebuilt by interpolation with the
//! indicator polynomials `prod_j (1 - (x_j - c_j)^(p-1))`.

use std::collections::HashSet;

use crate::error::{Error, Result};
use crate::ffield::{FieldSpec, ScalarField};
use crate::polyfunc::{space_size, PolyMap, ReducedPoly, DEFAULT_MAX_SPACE};

/// Every point of `F_p^n`, in lexicographic order with `x1` most significant.
pub fn points(p: u64, nvars: usize) -> impl Iterator<Item = Vec<u64>> {
    let total = space_size(p, nvars) as u64;
    (0..total).map(move |mut idx| {
        let mut pt = vec![0; nvars];
        for slot in pt.iter_mut().rev() {
            *slot = idx % p;
            idx /= p;
        }
        pt
    })
}

fn point_index(p: u64, pt: &[u64]) -> usize {
    pt.iter().fold(0usize, |acc, &x| acc * p as usize + x as usize)
}

/// The graph of a map, one `(input, output)` pair per point of `F_p^n`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ValueTable {
    field: FieldSpec,
    nvars: usize,
    entries: Vec<(Vec<u64>, Vec<u64>)>,
}

impl ValueTable {
    /// Builds a table, requiring each input point exactly once.
    pub fn new(field: FieldSpec, nvars: usize, entries: Vec<(Vec<u64>, Vec<u64>)>) -> Result<Self> {
        let p = field.p();
        let expected = space_size(p, nvars);
        if entries.len() as u128 != expected {
            return Err(Error::DimensionMismatch { expected: expected as usize, found: entries.len() });
        }
        let mut entries = entries;
        for (x, y) in &entries {
            if x.len() != nvars || y.len() != nvars {
                return Err(Error::ArityMismatch { expected: nvars, found: x.len().max(y.len()) });
            }
        }
        entries.sort();
        entries.dedup_by(|a, b| a.0 == b.0);
        if entries.len() as u128 != expected {
            return Err(Error::NotBijective);
        }
        Ok(ValueTable { field, nvars, entries })
    }

    pub fn field(&self) -> FieldSpec {
        self.field
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn entries(&self) -> &[(Vec<u64>, Vec<u64>)] {
        &self.entries
    }

    /// Output at `x`.
    pub fn lookup(&self, x: &[u64]) -> &[u64] {
        &self.entries[point_index(self.field.p(), x)].1
    }

    pub fn is_bijective(&self) -> bool {
        let outputs: HashSet<&Vec<u64>> = self.entries.iter().map(|(_, y)| y).collect();
        outputs.len() == self.entries.len()
    }
}

pub fn evaluate(map: &PolyMap<FieldSpec>) -> Result<ValueTable> {
    evaluate_with_limit(map, DEFAULT_MAX_SPACE)
}

pub fn evaluate_with_limit(map: &PolyMap<FieldSpec>, max_space: usize) -> Result<ValueTable> {
    let field = *map.field();
    let n = map.nvars();
    let required = space_size(field.p(), n);
    if required > max_space as u128 {
        return Err(Error::SizeLimit { required, cap: max_space });
    }
    let entries = points(field.p(), n)
        .map(|x| {
            let y = map.eval_residues(&x)?.iter().map(|e| e.value()).collect();
            Ok((x, y))
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(ValueTable { field, nvars: n, entries })
}

pub fn perm_check_bruteforce(map: &PolyMap<FieldSpec>) -> Result<bool> {
    Ok(evaluate(map)?.is_bijective())
}

pub fn perm_check_bruteforce_with_limit(map: &PolyMap<FieldSpec>, max_space: usize) -> Result<bool> {
    Ok(evaluate_with_limit(map, max_space)?.is_bijective())
}

/// The table of `F^{-1}`: pairs `(y, x)` with `F(x) = y`.
pub fn inverse_table(map: &PolyMap<FieldSpec>) -> Result<ValueTable> {
    invert_table(&evaluate(map)?)
}

pub fn invert_table(t: &ValueTable) -> Result<ValueTable> {
    if !t.is_bijective() {
        return Err(Error::NotBijective);
    }
    let entries = t.entries.iter().map(|(x, y)| (y.clone(), x.clone())).collect();
    ValueTable::new(t.field, t.nvars, entries)
}

/// The unique reduced polynomial map agreeing with the table everywhere.
pub fn interpolate(t: &ValueTable) -> PolyMap<FieldSpec> {
    let comps = (0..t.nvars)
        .map(|i| {
            let values: Vec<u64> = t.entries.iter().map(|(_, y)| y[i]).collect();
            interpolate_function(t.field, t.nvars, &values)
        })
        .collect();
    PolyMap::new(comps).expect("components share field and arity")
}

/// Interpolates one function from its values listed in [`points`] order.
///
/// Expands `sum_c v(c) prod_j delta_{c_j}(x_j)` one axis at a time, where
/// `delta_c(x) = 1 - (x - c)^(p-1) = [c = 0] - sum_{k>=1} c^(p-1-k) x^k`.
pub fn interpolate_function(field: FieldSpec, nvars: usize, values: &[u64]) -> ReducedPoly {
    let p = field.p();
    let pu = p as usize;
    assert_eq!(values.len() as u128, space_size(p, nvars), "value count must be p^n");
    let mut data: Vec<u64> = values.iter().map(|v| v % p).collect();
    let mut fiber = vec![0u64; pu];
    let mut out = vec![0u64; pu];
    // axis j has stride p^(n-1-j)
    for axis in 0..nvars {
        let stride = pu.pow((nvars - 1 - axis) as u32);
        let block = stride * pu;
        for base in (0..data.len()).step_by(block) {
            for offset in 0..stride {
                for (c, slot) in fiber.iter_mut().enumerate() {
                    *slot = data[base + offset + c * stride];
                }
                out.iter_mut().for_each(|o| *o = 0);
                out[0] = fiber[0];
                for (c, &v) in fiber.iter().enumerate() {
                    if v == 0 {
                        continue;
                    }
                    // walk k downward from p-1 so the power of c grows by one per step
                    let c = c as u64;
                    let mut cpow = 1u64;
                    for k in (1..pu).rev() {
                        let t = v * cpow % p;
                        out[k] = (out[k] + p - t) % p;
                        cpow = cpow * c % p;
                    }
                }
                for (k, &o) in out.iter().enumerate() {
                    data[base + offset + k * stride] = o;
                }
            }
        }
    }
    // data is now indexed by exponent tuples in the same mixed radix
    let terms = data.iter().enumerate().filter(|(_, &c)| c != 0).map(|(idx, &c)| {
        let mut e = vec![0u64; nvars];
        let mut idx = idx as u64;
        for slot in e.iter_mut().rev() {
            *slot = idx % p;
            idx /= p;
        }
        (e, field.elem(c))
    });
    ReducedPoly::from_terms(field, nvars, terms).expect("exponent tuples have the right arity")
}

/// Interpolated inverse of a bijective map.
pub fn bruteforce_inverse(map: &PolyMap<FieldSpec>) -> Result<PolyMap<FieldSpec>> {
    Ok(interpolate(&inverse_table(map)?))
}

/// Equality of two maps as functions.
pub fn compare_functions<K: ScalarField>(a: &PolyMap<K>, b: &PolyMap<K>) -> Result<bool> {
    if a.field() != b.field() {
        return Err(Error::FieldMismatch {
            left: a.field().characteristic(),
            right: b.field().characteristic(),
        });
    }
    if a.nvars() != b.nvars() {
        return Err(Error::ArityMismatch { expected: a.nvars(), found: b.nvars() });
    }
    Ok(a == b)
}

/// Pointwise check that `inner` followed by `outer` is the identity.
pub fn is_left_inverse(outer: &PolyMap<FieldSpec>, inner: &PolyMap<FieldSpec>) -> Result<bool> {
    let p = outer.field().p();
    for x in points(p, inner.nvars()) {
        let y: Vec<u64> = inner.eval_residues(&x)?.iter().map(|e| e.value()).collect();
        let z: Vec<u64> = outer.eval_residues(&y)?.iter().map(|e| e.value()).collect();
        if z != x {
            return Ok(false);
        }
    }
    Ok(true)
}
