//! Exact arithmetic in `F_q = F_p[X]/(f)`, `q = p^a`.
//!
//! Elements are stored as a single integer code `c_0 + c_1 p + ... + c_{a-1} p^{a-1}`
//! where `c_i` is the coefficient of `u^i` and `u` is the class of `X`. The code is
//! the canonical form, so element equality is code equality. Integers embed as
//! residues mod `p`.
//!
//! For `1 < q <= 2^16` the field carries Zech-logarithm tables; otherwise
//! products are computed by polynomial multiplication and reduction.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::Arc;

use serde::Serialize;

use crate::error::FieldError;

/// Largest field order for which log/Zech tables are built.
pub const TABLE_LIMIT: u64 = 1 << 16;

/// Largest field order representable by an element code.
pub const MAX_ORDER: u64 = 1 << 62;

/// Shared handle to a validated field description.
pub type Field = Arc<FieldSpec>;

pub struct FieldSpec {
    p: u64,
    a: u32,
    /// Monic modulus, constant term first, length `a + 1`.
    modulus: Vec<u64>,
    q: u64,
    tables: Option<ZechTables>,
}

struct ZechTables {
    /// `exp[k] = g^k` for `0 <= k < 2(q-1)`, doubled to skip a reduction.
    exp: Vec<u64>,
    /// `log[x]` for nonzero `x`; `log[0]` is unused.
    log: Vec<u32>,
    /// `zech[k] = log(1 + g^k)`, or `NONE` when `1 + g^k = 0`.
    zech: Vec<u32>,
}

const NONE: u32 = u32::MAX;

/// Serializable description `{p, a, modulus}`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FieldDescription {
    pub p: u64,
    pub a: u32,
    pub modulus: Vec<u64>,
}

impl fmt::Debug for FieldSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("FieldSpec")
            .field("p", &self.p)
            .field("a", &self.a)
            .field("modulus", &self.modulus)
            .field("tables", &self.tables.is_some())
            .finish()
    }
}

impl PartialEq for FieldSpec {
    fn eq(&self, other: &Self) -> bool {
        self.p == other.p && self.a == other.a && self.modulus == other.modulus
    }
}

impl Eq for FieldSpec {}

/// Builds `F_{p^a}`. Without an explicit modulus the lexicographically least
/// monic irreducible polynomial (constant term compared first) is used.
pub fn make_field(p: u64, a: u32, modulus: Option<&[u64]>) -> Result<Field, FieldError> {
    FieldSpec::new(p, a, modulus, true).map(Arc::new)
}

/// Same as [`make_field`] but never builds log tables; products always go
/// through polynomial reduction.
pub fn make_field_untabled(p: u64, a: u32, modulus: Option<&[u64]>) -> Result<Field, FieldError> {
    FieldSpec::new(p, a, modulus, false).map(Arc::new)
}

impl FieldSpec {
    fn new(p: u64, a: u32, modulus: Option<&[u64]>, tables: bool) -> Result<Self, FieldError> {
        if !is_prime(p) {
            return Err(FieldError::NotPrime(p));
        }
        if p >= 1 << 31 {
            return Err(FieldError::Unsupported(format!("characteristic {p} is not below 2^31")));
        }
        if a == 0 {
            return Err(FieldError::DegreeMismatch { expected: 1, found: 0 });
        }
        let q = checked_pow(p, a)
            .filter(|&q| q <= MAX_ORDER)
            .ok_or_else(|| FieldError::Unsupported(format!("{p}^{a} exceeds the supported field order 2^62")))?;
        let modulus = match modulus {
            Some(m) => {
                if m.len() != a as usize + 1 {
                    return Err(FieldError::DegreeMismatch { expected: a as usize, found: m.len().saturating_sub(1) });
                }
                if m.iter().any(|&c| c >= p) {
                    return Err(FieldError::NotIrreducible(m.to_vec()));
                }
                if m[a as usize] != 1 {
                    return Err(FieldError::NotMonic(m.to_vec()));
                }
                if !poly::is_irreducible(m, p) {
                    return Err(FieldError::NotIrreducible(m.to_vec()));
                }
                m.to_vec()
            }
            None => least_irreducible(p, a),
        };
        let mut spec = FieldSpec { p, a, modulus, q, tables: None };
        if tables && a > 1 && q <= TABLE_LIMIT {
            spec.tables = Some(spec.build_tables());
        }
        Ok(spec)
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn a(&self) -> u32 {
        self.a
    }

    pub fn q(&self) -> u64 {
        self.q
    }

    pub fn modulus(&self) -> &[u64] {
        &self.modulus
    }

    pub fn has_tables(&self) -> bool {
        self.tables.is_some()
    }

    pub fn description(&self) -> FieldDescription {
        FieldDescription { p: self.p, a: self.a, modulus: self.modulus.clone() }
    }

    // ---- element construction ----------------------------------------------

    pub fn zero(self: &Arc<Self>) -> FieldElement {
        self.element(0)
    }

    pub fn one(self: &Arc<Self>) -> FieldElement {
        self.element(1)
    }

    /// Element with the given code. Panics if the code is out of range.
    pub fn element(self: &Arc<Self>, code: u64) -> FieldElement {
        assert!(code < self.q, "element code {code} out of range for q = {}", self.q);
        FieldElement { field: Arc::clone(self), code }
    }

    /// Image of an integer under `Z -> F_p ⊆ F_q`.
    pub fn from_int(self: &Arc<Self>, n: i64) -> FieldElement {
        self.element(self.int_code(n))
    }

    pub fn int_code(&self, n: i64) -> u64 {
        n.rem_euclid(self.p as i64) as u64
    }

    pub fn from_coeffs(self: &Arc<Self>, coeffs: &[u64]) -> Result<FieldElement, FieldError> {
        if coeffs.len() > self.a as usize {
            return Err(FieldError::DegreeMismatch { expected: self.a as usize, found: coeffs.len() });
        }
        if let Some(&c) = coeffs.iter().find(|&&c| c >= self.p) {
            return Err(FieldError::CoefficientRange { value: c, p: self.p });
        }
        Ok(self.element(self.encode(coeffs)))
    }

    /// The class `u` of `X`; equals `0` when `a = 1` and the modulus is `X`.
    pub fn generator_root(self: &Arc<Self>) -> FieldElement {
        if self.a == 1 {
            // X ≡ -c_0 mod (X + c_0)
            self.element((self.p - self.modulus[0]) % self.p)
        } else {
            self.element(self.p)
        }
    }

    /// All elements in code order.
    pub fn elements(self: &Arc<Self>) -> impl Iterator<Item = FieldElement> + '_ {
        (0..self.q).map(move |c| self.element(c))
    }

    pub fn coeffs(&self, code: u64) -> Vec<u64> {
        let mut out = vec![0; self.a as usize];
        self.decode_into(code, &mut out);
        out
    }

    fn decode_into(&self, mut code: u64, out: &mut [u64]) {
        for c in out.iter_mut() {
            *c = code % self.p;
            code /= self.p;
        }
    }

    fn encode(&self, coeffs: &[u64]) -> u64 {
        coeffs.iter().rev().fold(0, |acc, &c| acc * self.p + c)
    }

    // ---- raw arithmetic on codes ---------------------------------------------

    #[inline]
    pub fn add(&self, x: u64, y: u64) -> u64 {
        if self.a == 1 {
            let s = x + y;
            if s >= self.p {
                s - self.p
            } else {
                s
            }
        } else if self.p == 2 {
            x ^ y
        } else if let Some(t) = &self.tables {
            t.add(x, y, self.q)
        } else {
            self.add_digits(x, y)
        }
    }

    fn add_digits(&self, mut x: u64, mut y: u64) -> u64 {
        let mut out = 0;
        let mut place = 1;
        while x > 0 || y > 0 {
            let mut d = x % self.p + y % self.p;
            if d >= self.p {
                d -= self.p;
            }
            out += d * place;
            place *= self.p;
            x /= self.p;
            y /= self.p;
        }
        out
    }

    #[inline]
    pub fn neg(&self, x: u64) -> u64 {
        if x == 0 {
            0
        } else if self.a == 1 {
            self.p - x
        } else if self.p == 2 {
            x
        } else {
            let mut out = 0;
            let mut place = 1;
            let mut x = x;
            while x > 0 {
                let d = x % self.p;
                if d != 0 {
                    out += (self.p - d) * place;
                }
                place *= self.p;
                x /= self.p;
            }
            out
        }
    }

    #[inline]
    pub fn sub(&self, x: u64, y: u64) -> u64 {
        self.add(x, self.neg(y))
    }

    #[inline]
    pub fn mul(&self, x: u64, y: u64) -> u64 {
        if self.a == 1 {
            x * y % self.p
        } else if let Some(t) = &self.tables {
            t.mul(x, y)
        } else {
            self.mul_poly(x, y)
        }
    }

    /// Product by schoolbook multiplication and reduction modulo the modulus.
    pub fn mul_poly(&self, x: u64, y: u64) -> u64 {
        let a = self.a as usize;
        let mut xs = vec![0; a];
        let mut ys = vec![0; a];
        self.decode_into(x, &mut xs);
        self.decode_into(y, &mut ys);
        let prod = poly::mul_mod(&xs, &ys, &self.modulus, self.p);
        self.encode(&prod)
    }

    pub fn inv(&self, x: u64) -> Option<u64> {
        if x == 0 {
            return None;
        }
        if self.a == 1 {
            return Some(mod_pow(x, self.p - 2, self.p));
        }
        if let Some(t) = &self.tables {
            let l = t.log[x as usize] as u64;
            return Some(t.exp[((self.q - 1 - l) % (self.q - 1)) as usize]);
        }
        Some(self.pow(x, (self.q - 2) as u128))
    }

    /// Square-and-multiply.
    pub fn pow(&self, x: u64, mut e: u128) -> u64 {
        let mut base = x;
        let mut acc = 1;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            e >>= 1;
        }
        acc
    }

    pub fn frobenius(&self, x: u64) -> u64 {
        self.pow(x, self.p as u128)
    }

    /// Degree over `F_p` of the minimal polynomial of `x`: the least `d >= 1`
    /// with `x^(p^d) = x`.
    pub fn minimal_degree(&self, x: u64) -> u32 {
        let mut y = self.frobenius(x);
        let mut d = 1;
        while y != x {
            y = self.frobenius(y);
            d += 1;
        }
        d
    }

    /// `out = v * m` for a row vector `v` of length `n` and a row-major `n x n`
    /// matrix `m`.
    pub fn vec_mat(&self, v: &[u64], m: &[u64], n: usize, out: &mut [u64]) {
        debug_assert_eq!(v.len(), n);
        debug_assert_eq!(out.len(), n);
        if self.a == 1 {
            let p = self.p;
            // n terms of size < p^2 fit in a u64 accumulator for small p
            if (n as u128) * ((p - 1) as u128).pow(2) < u64::MAX as u128 {
                out.fill(0);
                for (i, &vi) in v.iter().enumerate() {
                    if vi == 0 {
                        continue;
                    }
                    let row = &m[i * n..(i + 1) * n];
                    for (o, &mij) in out.iter_mut().zip(row) {
                        *o += vi * mij;
                    }
                }
                for o in out.iter_mut() {
                    *o %= p;
                }
            } else {
                out.fill(0);
                for (i, &vi) in v.iter().enumerate() {
                    if vi == 0 {
                        continue;
                    }
                    let row = &m[i * n..(i + 1) * n];
                    for (o, &mij) in out.iter_mut().zip(row) {
                        *o = (*o + vi * mij % p) % p;
                    }
                }
            }
            return;
        }
        out.fill(0);
        for (i, &vi) in v.iter().enumerate() {
            if vi == 0 {
                continue;
            }
            let row = &m[i * n..(i + 1) * n];
            for (o, &mij) in out.iter_mut().zip(row) {
                if mij != 0 {
                    *o = self.add(*o, self.mul(vi, mij));
                }
            }
        }
    }

    fn build_tables(&self) -> ZechTables {
        let q = self.q as usize;
        let g = self.primitive_code();
        let mut exp = vec![0u64; 2 * (q - 1)];
        let mut log = vec![0u32; q];
        let mut x = 1u64;
        for k in 0..q - 1 {
            exp[k] = x;
            exp[k + q - 1] = x;
            log[x as usize] = k as u32;
            x = self.mul_poly(x, g);
        }
        debug_assert_eq!(x, 1);
        let mut zech = vec![NONE; q - 1];
        for (k, z) in zech.iter_mut().enumerate() {
            let s = self.add_digits(exp[k], 1);
            if s != 0 {
                *z = log[s as usize];
            }
        }
        ZechTables { exp, log, zech }
    }

    /// Least code generating the multiplicative group.
    fn primitive_code(&self) -> u64 {
        let order = self.q - 1;
        let factors = prime_factors(order);
        (1..self.q)
            .find(|&g| factors.iter().all(|&r| self.pow_poly(g, order / r) != 1))
            .expect("multiplicative group of a finite field is cyclic")
    }

    fn pow_poly(&self, x: u64, mut e: u64) -> u64 {
        let mut base = x;
        let mut acc = 1;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul_poly(acc, base);
            }
            base = self.mul_poly(base, base);
            e >>= 1;
        }
        acc
    }
}

impl ZechTables {
    #[inline]
    fn mul(&self, x: u64, y: u64) -> u64 {
        if x == 0 || y == 0 {
            0
        } else {
            self.exp[(self.log[x as usize] + self.log[y as usize]) as usize]
        }
    }

    #[inline]
    fn add(&self, x: u64, y: u64, q: u64) -> u64 {
        if x == 0 {
            return y;
        }
        if y == 0 {
            return x;
        }
        let lx = self.log[x as usize] as u64;
        let ly = self.log[y as usize] as u64;
        let d = (ly + q - 1 - lx) % (q - 1);
        match self.zech[d as usize] {
            NONE => 0,
            z => self.exp[(lx + z as u64) as usize],
        }
    }
}

/// An element of a specific field.
#[derive(Clone)]
pub struct FieldElement {
    field: Field,
    code: u64,
}

impl FieldElement {
    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn code(&self) -> u64 {
        self.code
    }

    /// Coefficients in the power basis, constant term first; length `a`.
    pub fn coeffs(&self) -> Vec<u64> {
        self.field.coeffs(self.code)
    }

    pub fn is_zero(&self) -> bool {
        self.code == 0
    }

    pub fn is_one(&self) -> bool {
        self.code == 1
    }

    fn check(&self, other: &Self) -> Result<(), FieldError> {
        if Arc::ptr_eq(&self.field, &other.field) || *self.field == *other.field {
            Ok(())
        } else {
            Err(FieldError::FieldMismatch)
        }
    }

    fn with(&self, code: u64) -> Self {
        FieldElement { field: Arc::clone(&self.field), code }
    }

    pub fn try_add(&self, other: &Self) -> Result<Self, FieldError> {
        self.check(other)?;
        Ok(self.with(self.field.add(self.code, other.code)))
    }

    pub fn try_sub(&self, other: &Self) -> Result<Self, FieldError> {
        self.check(other)?;
        Ok(self.with(self.field.sub(self.code, other.code)))
    }

    pub fn try_mul(&self, other: &Self) -> Result<Self, FieldError> {
        self.check(other)?;
        Ok(self.with(self.field.mul(self.code, other.code)))
    }

    pub fn inv(&self) -> Result<Self, FieldError> {
        self.field.inv(self.code).map(|c| self.with(c)).ok_or(FieldError::DivisionByZero)
    }

    pub fn pow(&self, e: u128) -> Self {
        self.with(self.field.pow(self.code, e))
    }

    /// `x^p == x`.
    pub fn in_prime_subfield(&self) -> bool {
        self.field.frobenius(self.code) == self.code
    }

    pub fn minimal_degree(&self) -> u32 {
        self.field.minimal_degree(self.code)
    }
}

/// True iff the minimal polynomial of `t` over `F_p` has degree `a`, i.e.
/// `F_p(t) = F_q`.
pub fn generates_field(t: &FieldElement, spec: &Field) -> Result<bool, FieldError> {
    if !(Arc::ptr_eq(t.field(), spec) || **t.field() == **spec) {
        return Err(FieldError::FieldMismatch);
    }
    Ok(t.minimal_degree() == spec.a())
}

pub fn in_prime_subfield(x: &FieldElement) -> bool {
    x.in_prime_subfield()
}

impl PartialEq for FieldElement {
    fn eq(&self, other: &Self) -> bool {
        self.code == other.code && self.check(other).is_ok()
    }
}

impl Eq for FieldElement {}

impl std::hash::Hash for FieldElement {
    fn hash<H: std::hash::Hasher>(&self, state: &mut H) {
        self.code.hash(state);
    }
}

impl fmt::Debug for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.field.a() == 1 {
            return write!(f, "{}", self.code);
        }
        let coeffs = self.coeffs();
        let terms: Vec<String> = coeffs
            .iter()
            .enumerate()
            .filter(|(_, &c)| c != 0)
            .map(|(i, &c)| match (i, c) {
                (0, c) => c.to_string(),
                (1, 1) => "u".to_string(),
                (1, c) => format!("{c}u"),
                (i, 1) => format!("u^{i}"),
                (i, c) => format!("{c}u^{i}"),
            })
            .collect();
        if terms.is_empty() {
            write!(f, "0")
        } else {
            write!(f, "{}", terms.join("+"))
        }
    }
}

impl Serialize for FieldElement {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        self.coeffs().serialize(s)
    }
}

macro_rules! binop {
    ($trait:ident, $method:ident, $checked:ident) => {
        impl $trait for &FieldElement {
            type Output = FieldElement;
            fn $method(self, rhs: &FieldElement) -> FieldElement {
                self.$checked(rhs).expect("operands from different fields")
            }
        }
        impl $trait for FieldElement {
            type Output = FieldElement;
            fn $method(self, rhs: FieldElement) -> FieldElement {
                (&self).$checked(&rhs).expect("operands from different fields")
            }
        }
    };
}

binop!(Add, add, try_add);
binop!(Sub, sub, try_sub);
binop!(Mul, mul, try_mul);

impl Neg for &FieldElement {
    type Output = FieldElement;
    fn neg(self) -> FieldElement {
        self.with(self.field.neg(self.code))
    }
}

impl Neg for FieldElement {
    type Output = FieldElement;
    fn neg(self) -> FieldElement {
        -&self
    }
}

// ---- integer helpers -------------------------------------------------------

fn checked_pow(base: u64, exp: u32) -> Option<u64> {
    (0..exp).try_fold(1u64, |acc, _| acc.checked_mul(base))
}

fn mod_mul(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

pub(crate) fn mod_pow(mut b: u64, mut e: u64, m: u64) -> u64 {
    let mut acc = 1 % m;
    b %= m;
    while e > 0 {
        if e & 1 == 1 {
            acc = mod_mul(acc, b, m);
        }
        b = mod_mul(b, b, m);
        e >>= 1;
    }
    acc
}

/// Deterministic Miller-Rabin, exact for all 64-bit inputs.
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    const BASES: [u64; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];
    for &b in &BASES {
        if n.is_multiple_of(b) {
            return n == b;
        }
    }
    let mut d = n - 1;
    let mut s = 0;
    while d.is_multiple_of(2) {
        d /= 2;
        s += 1;
    }
    'witness: for &b in &BASES {
        let mut x = mod_pow(b, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mod_mul(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

/// Distinct prime factors by trial division.
pub(crate) fn prime_factors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut d = 2;
    while d * d <= n {
        if n.is_multiple_of(d) {
            out.push(d);
            while n.is_multiple_of(d) {
                n /= d;
            }
        }
        d += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

/// Lexicographically least monic irreducible of degree `a`, comparing
/// coefficient lists from the constant term upward.
fn least_irreducible(p: u64, a: u32) -> Vec<u64> {
    let a = a as usize;
    let mut lower = vec![0u64; a];
    loop {
        let mut cand = lower.clone();
        cand.push(1);
        if poly::is_irreducible(&cand, p) {
            return cand;
        }
        // odometer with the highest-degree free coefficient spinning fastest
        let mut i = a;
        loop {
            if i == 0 {
                unreachable!("irreducible polynomials exist in every degree");
            }
            i -= 1;
            lower[i] += 1;
            if lower[i] < p {
                break;
            }
            lower[i] = 0;
        }
    }
}

/// Polynomials over `F_p` as coefficient vectors, constant term first.
pub(crate) mod poly {
    use super::mod_pow;

    pub fn trim(mut f: Vec<u64>) -> Vec<u64> {
        while f.last() == Some(&0) {
            f.pop();
        }
        f
    }

    /// `x * y mod f` for monic `f`; inputs have length below `deg f`.
    pub fn mul_mod(x: &[u64], y: &[u64], f: &[u64], p: u64) -> Vec<u64> {
        let mut prod = vec![0u64; x.len() + y.len()];
        for (i, &xi) in x.iter().enumerate() {
            if xi == 0 {
                continue;
            }
            for (j, &yj) in y.iter().enumerate() {
                prod[i + j] = (prod[i + j] + xi * yj) % p;
            }
        }
        reduce(prod, f, p)
    }

    /// Remainder of `g` modulo monic `f`, padded to length `deg f`.
    pub fn reduce(mut g: Vec<u64>, f: &[u64], p: u64) -> Vec<u64> {
        let d = f.len() - 1;
        for k in (d..g.len()).rev() {
            let c = g[k];
            if c == 0 {
                continue;
            }
            for (i, &fi) in f.iter().enumerate() {
                let idx = k - d + i;
                g[idx] = (g[idx] + (p - c) * fi) % p;
            }
        }
        g.resize(d, 0);
        g
    }

    fn rem(g: &[u64], f: &[u64], p: u64) -> Vec<u64> {
        let f = trim(f.to_vec());
        let lead_inv = mod_pow(*f.last().unwrap(), p - 2, p);
        let d = f.len() - 1;
        let mut g = trim(g.to_vec());
        while g.len() > d {
            let k = g.len() - 1;
            let c = g[k] * lead_inv % p;
            for (i, &fi) in f.iter().enumerate() {
                let idx = k - d + i;
                g[idx] = (g[idx] + (p - c) * fi % p) % p;
            }
            g = trim(g);
        }
        g
    }

    pub fn gcd(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
        let mut a = trim(a.to_vec());
        let mut b = trim(b.to_vec());
        while !b.is_empty() {
            let r = rem(&a, &b, p);
            a = b;
            b = r;
        }
        a
    }

    fn pow_mod(base: &[u64], mut e: u64, f: &[u64], p: u64) -> Vec<u64> {
        let d = f.len() - 1;
        let mut acc = vec![0u64; d];
        acc[0] = 1 % p;
        let mut b = reduce(base.to_vec(), f, p);
        while e > 0 {
            if e & 1 == 1 {
                acc = mul_mod(&acc, &b, f, p);
            }
            b = mul_mod(&b, &b, f, p);
            e >>= 1;
        }
        acc
    }

    /// Ben-Or: monic `f` of degree `d` is irreducible iff
    /// `gcd(X^(p^i) - X, f) = 1` for `1 <= i <= d/2`.
    pub fn is_irreducible(f: &[u64], p: u64) -> bool {
        let d = f.len() - 1;
        if d == 0 {
            return false;
        }
        if d == 1 {
            return true;
        }
        if f[0] == 0 {
            return false;
        }
        let mut x = vec![0u64; d];
        x[1] = 1;
        let mut h = x.clone();
        for _ in 0..d / 2 {
            h = pow_mod(&h, p, f, p);
            let mut diff = h.clone();
            diff[1] = (diff[1] + p - 1) % p;
            let g = gcd(f, &diff, p);
            if g.len() != 1 {
                return false;
            }
        }
        true
    }
}
