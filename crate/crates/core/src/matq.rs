//! Dense square matrices over `F_q`.
//!
//! Matrices act on row vectors from the right: row `i` of `m` is the image
//! `e_i m`. The permutation matrix of `σ` sends `e_i` to `e_{σ(i)}`, so
//! `perm(σ) * perm(τ) = perm(σ then τ)`, agreeing with [`Permutation::compose`].
//!
//! Every index taken or returned by this module's public API is a 1-based
//! basis label, as in `e_1, .., e_n`.

use std::fmt;
use std::ops::Mul;
use std::sync::Arc;

use serde::Serialize;

use crate::error::MatrixError;
use crate::ff::{Field, FieldElement};
use crate::perm::Permutation;

pub const DEFAULT_ORDER_CAP: u64 = 1_000_000;

#[derive(Clone)]
pub struct Matrix {
    n: usize,
    entries: Vec<u64>,
    field: Field,
}

/// A monomial matrix read as `e_i -> coeff_i * e_{target_i}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SignedPermutation {
    targets: Vec<usize>,
    coeffs: Vec<FieldElement>,
}

impl SignedPermutation {
    /// 1-based images.
    pub fn targets(&self) -> Vec<usize> {
        self.targets.iter().map(|t| t + 1).collect()
    }

    pub fn coeffs(&self) -> &[FieldElement] {
        &self.coeffs
    }

    pub fn is_plain(&self) -> bool {
        self.coeffs.iter().all(FieldElement::is_one)
    }

    /// The underlying permutation of basis labels, ignoring coefficients.
    pub fn permutation(&self) -> Permutation {
        Permutation::from_images(self.targets.clone()).expect("targets form a permutation")
    }

    /// The permutation, if every coefficient is 1.
    pub fn plain_permutation(&self) -> Option<Permutation> {
        self.is_plain().then(|| self.permutation())
    }
}

impl fmt::Display for SignedPermutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> =
            self.targets
                .iter()
                .zip(&self.coeffs)
                .enumerate()
                .filter(|(i, (t, c))| *i != **t || !c.is_one())
                .map(|(i, (t, c))| {
                    if c.is_one() {
                        format!("e{}->e{}", i + 1, t + 1)
                    } else {
                        format!("e{}->({})e{}", i + 1, c, t + 1)
                    }
                })
                .collect();
        if parts.is_empty() {
            write!(f, "id")
        } else {
            write!(f, "{}", parts.join(", "))
        }
    }
}

fn check_index(i: usize, n: usize) -> Result<usize, MatrixError> {
    if i >= 1 && i <= n {
        Ok(i - 1)
    } else {
        Err(MatrixError::IndexOutOfRange { index: i, n })
    }
}

impl Matrix {
    pub fn zero(field: &Field, n: usize) -> Self {
        Matrix { n, entries: vec![0; n * n], field: Arc::clone(field) }
    }

    pub fn identity(field: &Field, n: usize) -> Self {
        Self::scalar(field, n, &field.one())
    }

    pub fn scalar(field: &Field, n: usize, c: &FieldElement) -> Self {
        let mut m = Self::zero(field, n);
        for i in 0..n {
            m.entries[i * n + i] = c.code();
        }
        m
    }

    /// `E_{i,j}`: a single 1 at row `i`, column `j`.
    pub fn elementary(field: &Field, n: usize, i: usize, j: usize) -> Result<Self, MatrixError> {
        let (r, c) = (check_index(i, n)?, check_index(j, n)?);
        let mut m = Self::zero(field, n);
        m.entries[r * n + c] = 1;
        Ok(m)
    }

    pub fn diag(field: &Field, diagonal: &[FieldElement]) -> Self {
        let n = diagonal.len();
        let mut m = Self::zero(field, n);
        for (i, d) in diagonal.iter().enumerate() {
            m.entries[i * n + i] = d.code();
        }
        m
    }

    pub fn diag_ints(field: &Field, diagonal: &[i64]) -> Self {
        let elems: Vec<FieldElement> = diagonal.iter().map(|&d| field.from_int(d)).collect();
        Self::diag(field, &elems)
    }

    /// Permutation matrix of the product of disjoint 1-based cycles.
    pub fn perm_matrix(field: &Field, n: usize, cycles: &[&[usize]]) -> Result<Self, MatrixError> {
        for c in cycles {
            for &pt in c.iter() {
                check_index(pt, n)?;
            }
        }
        Ok(Self::from_permutation(field, &Permutation::from_cycles(n, cycles)))
    }

    pub fn from_permutation(field: &Field, perm: &Permutation) -> Self {
        let n = perm.degree();
        let mut m = Self::zero(field, n);
        for (i, j) in perm.images().enumerate() {
            m.entries[i * n + j] = 1;
        }
        m
    }

    /// Rows of integers, embedded as residues mod `p`.
    pub fn from_int_rows(field: &Field, rows: &[Vec<i64>]) -> Result<Self, MatrixError> {
        let n = rows.len();
        let mut m = Self::zero(field, n);
        for (i, row) in rows.iter().enumerate() {
            if row.len() != n {
                return Err(MatrixError::DimensionMismatch(n, row.len()));
            }
            for (j, &v) in row.iter().enumerate() {
                m.entries[i * n + j] = field.int_code(v);
            }
        }
        Ok(m)
    }

    /// Row-major element codes.
    pub fn from_codes(field: &Field, n: usize, entries: Vec<u64>) -> Result<Self, MatrixError> {
        if entries.len() != n * n {
            return Err(MatrixError::DimensionMismatch(n * n, entries.len()));
        }
        assert!(entries.iter().all(|&c| c < field.q()), "entry code out of range");
        Ok(Matrix { n, entries, field: Arc::clone(field) })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    /// Row-major element codes.
    pub fn codes(&self) -> &[u64] {
        &self.entries
    }

    pub fn entry(&self, i: usize, j: usize) -> FieldElement {
        self.field.element(self.entries[(i - 1) * self.n + (j - 1)])
    }

    pub fn set_entry(&mut self, i: usize, j: usize, value: &FieldElement) {
        self.entries[(i - 1) * self.n + (j - 1)] = value.code();
    }

    pub fn is_identity(&self) -> bool {
        let n = self.n;
        self.entries.iter().enumerate().all(|(k, &c)| c == u64::from(k / n == k % n))
    }

    fn compatible(&self, other: &Self) -> Result<(), MatrixError> {
        if self.n != other.n {
            return Err(MatrixError::DimensionMismatch(self.n, other.n));
        }
        if !Arc::ptr_eq(&self.field, &other.field) && *self.field != *other.field {
            return Err(MatrixError::FieldMismatch);
        }
        Ok(())
    }

    pub fn try_mul(&self, other: &Self) -> Result<Self, MatrixError> {
        self.compatible(other)?;
        Ok(self.mul_unchecked(other))
    }

    pub(crate) fn mul_unchecked(&self, other: &Self) -> Self {
        let n = self.n;
        let mut entries = vec![0u64; n * n];
        for i in 0..n {
            self.field.vec_mat(&self.entries[i * n..(i + 1) * n], &other.entries, n, &mut entries[i * n..(i + 1) * n]);
        }
        Matrix { n, entries, field: Arc::clone(&self.field) }
    }

    /// `v * self` for a row vector of element codes.
    pub fn apply_codes(&self, v: &[u64]) -> Vec<u64> {
        let mut out = vec![0; self.n];
        self.field.vec_mat(v, &self.entries, self.n, &mut out);
        out
    }

    pub fn apply(&self, v: &[FieldElement]) -> Vec<FieldElement> {
        let codes: Vec<u64> = v.iter().map(FieldElement::code).collect();
        self.apply_codes(&codes).into_iter().map(|c| self.field.element(c)).collect()
    }

    pub fn transpose(&self) -> Self {
        let n = self.n;
        let mut m = Self::zero(&self.field, n);
        for i in 0..n {
            for j in 0..n {
                m.entries[j * n + i] = self.entries[i * n + j];
            }
        }
        m
    }

    /// Determinant by Gaussian elimination, tracking row swaps.
    pub fn det(&self) -> FieldElement {
        let f = &self.field;
        let n = self.n;
        let mut a = self.entries.clone();
        let mut det = 1u64;
        for col in 0..n {
            let Some(piv) = (col..n).find(|&r| a[r * n + col] != 0) else {
                return f.zero();
            };
            if piv != col {
                for k in 0..n {
                    a.swap(piv * n + k, col * n + k);
                }
                det = f.neg(det);
            }
            let pv = a[col * n + col];
            det = f.mul(det, pv);
            let pinv = f.inv(pv).expect("pivot is nonzero");
            for r in col + 1..n {
                let factor = f.mul(a[r * n + col], pinv);
                if factor == 0 {
                    continue;
                }
                for k in col..n {
                    let sub = f.mul(factor, a[col * n + k]);
                    a[r * n + k] = f.sub(a[r * n + k], sub);
                }
            }
        }
        f.element(det)
    }

    /// Gauss-Jordan inverse.
    pub fn inverse(&self) -> Result<Self, MatrixError> {
        let f = &self.field;
        let n = self.n;
        let mut a = self.entries.clone();
        let mut inv = Self::identity(f, n).entries;
        for col in 0..n {
            let piv = (col..n).find(|&r| a[r * n + col] != 0).ok_or(MatrixError::Singular)?;
            if piv != col {
                for k in 0..n {
                    a.swap(piv * n + k, col * n + k);
                    inv.swap(piv * n + k, col * n + k);
                }
            }
            let pinv = f.inv(a[col * n + col]).expect("pivot is nonzero");
            for k in 0..n {
                a[col * n + k] = f.mul(a[col * n + k], pinv);
                inv[col * n + k] = f.mul(inv[col * n + k], pinv);
            }
            for r in 0..n {
                if r == col {
                    continue;
                }
                let factor = a[r * n + col];
                if factor == 0 {
                    continue;
                }
                for k in 0..n {
                    a[r * n + k] = f.sub(a[r * n + k], f.mul(factor, a[col * n + k]));
                    inv[r * n + k] = f.sub(inv[r * n + k], f.mul(factor, inv[col * n + k]));
                }
            }
        }
        Ok(Matrix { n, entries: inv, field: Arc::clone(f) })
    }

    /// Square-and-multiply.
    pub fn pow(&self, mut e: u128) -> Self {
        let mut base = self.clone();
        let mut acc = Self::identity(&self.field, self.n);
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul_unchecked(&base);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul_unchecked(&base);
            }
        }
        acc
    }

    /// Least `k >= 1` with `self^k = I`.
    pub fn element_order(&self, cap: u64) -> Result<u64, MatrixError> {
        if self.det().is_zero() {
            return Err(MatrixError::Singular);
        }
        let mut power = self.clone();
        for k in 1..=cap {
            if power.is_identity() {
                return Ok(k);
            }
            power = power.mul_unchecked(self);
        }
        Err(MatrixError::OrderExceedsCap(cap))
    }

    /// Reads a monomial matrix as a signed permutation of the basis.
    pub fn as_signed_permutation(&self) -> Result<SignedPermutation, MatrixError> {
        let n = self.n;
        let mut targets = Vec::with_capacity(n);
        let mut coeffs = Vec::with_capacity(n);
        for i in 0..n {
            let row = &self.entries[i * n..(i + 1) * n];
            let mut nz = row.iter().enumerate().filter(|(_, &c)| c != 0);
            match (nz.next(), nz.next()) {
                (Some((j, &c)), None) => {
                    targets.push(j);
                    coeffs.push(self.field.element(c));
                }
                _ => return Err(MatrixError::NotMonomial(i + 1)),
            }
        }
        if Permutation::from_images(targets.clone()).is_none() {
            // two rows hit the same column: singular, hence not monomial
            let mut seen = vec![false; n];
            let bad = targets.iter().position(|&t| std::mem::replace(&mut seen[t], true)).unwrap_or(0);
            return Err(MatrixError::NotMonomial(bad + 1));
        }
        Ok(SignedPermutation { targets, coeffs })
    }

    pub fn is_plain_permutation(&self) -> bool {
        self.as_signed_permutation().map(|s| s.is_plain()).unwrap_or(false)
    }

    /// The block on the coordinate subspace spanned by `indices` (1-based, in
    /// the given order), provided that subspace is invariant.
    pub fn restrict(&self, indices: &[usize]) -> Result<Self, MatrixError> {
        let n = self.n;
        let idx = indices.iter().map(|&i| check_index(i, n)).collect::<Result<Vec<_>, _>>()?;
        let mut inside = vec![false; n];
        for &i in &idx {
            inside[i] = true;
        }
        for &i in &idx {
            if (0..n).any(|j| !inside[j] && self.entries[i * n + j] != 0) {
                return Err(MatrixError::NotInvariant(indices.to_vec()));
            }
        }
        let k = idx.len();
        let mut entries = vec![0; k * k];
        for (r, &i) in idx.iter().enumerate() {
            for (c, &j) in idx.iter().enumerate() {
                entries[r * k + c] = self.entries[i * n + j];
            }
        }
        Ok(Matrix { n: k, entries, field: Arc::clone(&self.field) })
    }

    /// True iff every block of `partition` spans an invariant subspace.
    pub fn block_diagonal_check(&self, partition: &[Vec<usize>]) -> Result<bool, MatrixError> {
        let n = self.n;
        let mut seen = vec![false; n];
        for block in partition {
            for &i in block {
                let i = check_index(i, n).map_err(|_| MatrixError::BadPartition(n))?;
                if std::mem::replace(&mut seen[i], true) {
                    return Err(MatrixError::BadPartition(n));
                }
            }
        }
        if seen.iter().any(|s| !s) {
            return Err(MatrixError::BadPartition(n));
        }
        Ok(partition.iter().all(|b| self.restrict(b).is_ok()))
    }

    /// Reinterprets a matrix whose entries lie in the prime subfield as a
    /// matrix over `target`, a field of the same characteristic.
    pub fn to_field(&self, target: &Field) -> Option<Self> {
        if target.p() != self.field.p() || self.entries.iter().any(|&c| c >= self.field.p()) {
            return None;
        }
        Some(Matrix { n: self.n, entries: self.entries.clone(), field: Arc::clone(target) })
    }

    /// Block-diagonal sum.
    pub fn direct_sum(&self, other: &Self) -> Self {
        let n = self.n + other.n;
        let mut m = Self::zero(&self.field, n);
        for i in 0..self.n {
            for j in 0..self.n {
                m.entries[i * n + j] = self.entries[i * self.n + j];
            }
        }
        for i in 0..other.n {
            for j in 0..other.n {
                m.entries[(self.n + i) * n + self.n + j] = other.entries[i * other.n + j];
            }
        }
        m
    }
}

/// `x^-1 y^-1 x y`.
pub fn commutator(x: &Matrix, y: &Matrix) -> Result<Matrix, MatrixError> {
    x.compatible(y)?;
    let xi = x.inverse()?;
    let yi = y.inverse()?;
    Ok(xi.mul_unchecked(&yi).mul_unchecked(x).mul_unchecked(y))
}

/// `g^h = h^-1 g h`.
pub fn conjugate(g: &Matrix, h: &Matrix) -> Result<Matrix, MatrixError> {
    g.compatible(h)?;
    Ok(h.inverse()?.mul_unchecked(g).mul_unchecked(h))
}

impl PartialEq for Matrix {
    fn eq(&self, other: &Self) -> bool {
        self.n == other.n
            && self.entries == other.entries
            && (Arc::ptr_eq(&self.field, &other.field) || *self.field == *other.field)
    }
}

impl Eq for Matrix {}

impl std::hash::Hash for Matrix {
    fn hash<H: std::hash::Hasher>(&self, state: &mut H) {
        self.n.hash(state);
        self.entries.hash(state);
    }
}

impl Mul for &Matrix {
    type Output = Matrix;
    fn mul(self, rhs: &Matrix) -> Matrix {
        self.try_mul(rhs).expect("incompatible matrices")
    }
}

impl Mul for Matrix {
    type Output = Matrix;
    fn mul(self, rhs: Matrix) -> Matrix {
        &self * &rhs
    }
}

impl fmt::Debug for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "Matrix {}x{} over F_{}", self.n, self.n, self.field.q())?;
        for i in 0..self.n {
            let row: Vec<String> =
                (0..self.n).map(|j| self.field.element(self.entries[i * self.n + j]).to_string()).collect();
            writeln!(f, "  [{}]", row.join(", "))?;
        }
        Ok(())
    }
}

impl Serialize for Matrix {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let rows: Vec<Vec<Vec<u64>>> = (0..self.n)
            .map(|i| (0..self.n).map(|j| self.field.coeffs(self.entries[i * self.n + j])).collect())
            .collect();
        rows.serialize(s)
    }
}
