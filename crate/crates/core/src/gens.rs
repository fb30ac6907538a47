//! The generator pairs `(x, y)` and `(x~, y~)` in `SL_12(q)` and the derived
//! words used to show that they generate.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use serde::Serialize;

use crate::error::{GensError, MatrixError};
use crate::ff::{generates_field, Field, FieldElement};
use crate::matq::{commutator, conjugate, Matrix};

pub const DIM: usize = 12;

/// Doc string for the default choice of `t`, shown by the CLI.
pub const DEFAULT_T_POLICY: &str = "enumerate field elements in a fixed order (integer residues 0..p-1 \
first, then the basis monomials u, u^2, .., u^(a-1), then all remaining elements by code) and pick the \
first t with t != 0, t != 2 and F_p(t) = F_q";

/// Entries of the 3x3 involution acting on `<e_2, e_3, e_4>` in the tilde pair.
pub const X3_ROWS: [[i64; 3]; 3] = [[3, 3, 2], [2, 3, 1], [3, 1, 3]];

pub const ETA1: &str = "(gamma^4 delta^3 gamma^2 delta^2)^2";
pub const ETA2: &str = "(gamma^4 delta^3 gamma^2 delta^2 gamma^2 delta^2)^2";
pub const ETA3: &str = "(delta gamma^2 delta gamma^2 delta gamma^3 delta^4 gamma^2)^2";
pub const U1: &str = "gamma_t delta_t^2";
pub const U2: &str = "gamma_t delta_t gamma_t^3 delta_t^3";

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Variant {
    Standard,
    Tilde,
}

impl fmt::Display for Variant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Variant::Standard => "standard",
            Variant::Tilde => "tilde",
        })
    }
}

impl FromStr for Variant {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "standard" => Ok(Variant::Standard),
            "tilde" => Ok(Variant::Tilde),
            other => Err(format!("unknown variant '{other}' (expected standard or tilde)")),
        }
    }
}

/// An element of order 2 and an element of order 3 in `SL_12(q)`.
#[derive(Debug, Clone)]
pub struct GeneratorPair {
    pub x: Matrix,
    pub y: Matrix,
    pub t: FieldElement,
    pub variant: Variant,
    pub field: Field,
}

impl GeneratorPair {
    /// Builds the pair and checks `x^2 = y^3 = I` and `det x = det y = 1`.
    pub fn new(field: &Field, t: &FieldElement, variant: Variant) -> Result<Self, GensError> {
        let x = match variant {
            Variant::Standard => build_x(field, t)?,
            Variant::Tilde => build_x_tilde(field, t)?,
        };
        let y = build_y(field);
        if !x.pow(2).is_identity() {
            return Err(GensError::Construction("x^2 != I".into()));
        }
        if !y.pow(3).is_identity() {
            return Err(GensError::Construction("y^3 != I".into()));
        }
        if !x.det().is_one() || !y.det().is_one() {
            return Err(GensError::Construction("generator outside SL_12".into()));
        }
        Ok(GeneratorPair { x, y, t: t.clone(), variant, field: field.clone() })
    }
}

/// `y = (e_1,e_2,e_3)(e_4,e_5,e_6)(e_7,e_8,e_9)(e_10,e_11,e_12)`.
pub fn build_y(field: &Field) -> Matrix {
    Matrix::perm_matrix(field, DIM, &[&[1, 2, 3], &[4, 5, 6], &[7, 8, 9], &[10, 11, 12]])
        .expect("indices within 1..=12")
}

/// One row of a matrix given as a sparse image `e_i -> sum c_j e_j`.
type Image = (usize, Vec<(usize, FieldElement)>);

/// Assembles a matrix from per-basis-vector images, requiring that every
/// basis vector is assigned exactly once.
fn from_images(field: &Field, images: &[Image]) -> Result<Matrix, GensError> {
    let mut m = Matrix::zero(field, DIM);
    let mut assigned = [false; DIM];
    for (src, terms) in images {
        if std::mem::replace(&mut assigned[src - 1], true) {
            return Err(GensError::Construction(format!("e_{src} assigned twice")));
        }
        for (dst, c) in terms {
            m.set_entry(*src, *dst, c);
        }
    }
    if let Some(i) = assigned.iter().position(|a| !a) {
        return Err(GensError::Construction(format!("image of e_{} missing", i + 1)));
    }
    Ok(m)
}

fn bottom_block(field: &Field, t: &FieldElement) -> [Image; 2] {
    let one = field.one();
    [(11, vec![(11, one.clone())]), (12, vec![(11, t.clone()), (12, -&one)])]
}

fn check_t(field: &Field, t: &FieldElement) -> Result<(), GensError> {
    if **t.field() != **field {
        return Err(GensError::Field(crate::error::FieldError::FieldMismatch));
    }
    Ok(())
}

/// The order-2 generator: swaps `e_1, e_8`; `e_2 -> -e_2`, `e_5 -> e_5`;
/// swaps `e_3i, e_3i+1` for `i = 1, 2, 3`; acts on `<e_11, e_12>` as
/// `[[1, 0], [t, -1]]`.
pub fn build_x(field: &Field, t: &FieldElement) -> Result<Matrix, GensError> {
    check_t(field, t)?;
    let one = field.one();
    let e = |j: usize| vec![(j, one.clone())];
    let mut images: Vec<Image> = vec![
        (1, e(8)),
        (8, e(1)),
        (2, vec![(2, -&one)]),
        (5, e(5)),
        (3, e(4)),
        (4, e(3)),
        (6, e(7)),
        (7, e(6)),
        (9, e(10)),
        (10, e(9)),
    ];
    images.extend(bottom_block(field, t));
    from_images(field, &images)
}

/// The order-2 generator for characteristic 5: `e_1 -> -e_1`, fixes `e_5, e_8`;
/// swaps `e_6, e_7` and `e_9, e_10`; acts on `<e_2, e_3, e_4>` as `x_3` and on
/// `<e_11, e_12>` as `[[1, 0], [t, -1]]`.
pub fn build_x_tilde(field: &Field, t: &FieldElement) -> Result<Matrix, GensError> {
    if field.p() != 5 {
        return Err(GensError::WrongCharacteristic(field.p()));
    }
    check_t(field, t)?;
    let one = field.one();
    let e = |j: usize| vec![(j, one.clone())];
    let x3_row = |r: usize| -> Vec<(usize, FieldElement)> {
        X3_ROWS[r].iter().enumerate().map(|(c, &v)| (c + 2, field.from_int(v))).collect()
    };
    let mut images: Vec<Image> = vec![
        (1, vec![(1, -&one)]),
        (5, e(5)),
        (8, e(8)),
        (6, e(7)),
        (7, e(6)),
        (9, e(10)),
        (10, e(9)),
        (2, x3_row(0)),
        (3, x3_row(1)),
        (4, x3_row(2)),
    ];
    images.extend(bottom_block(field, t));
    from_images(field, &images)
}

pub fn x3(field: &Field) -> Matrix {
    let rows: Vec<Vec<i64>> = X3_ROWS.iter().map(|r| r.to_vec()).collect();
    Matrix::from_int_rows(field, &rows).expect("3x3 rows")
}

/// Exponent `k` with `gamma = c^k`, by the residue of `p` mod 10.
pub fn gamma_exponent(p: u64) -> Result<u64, GensError> {
    if p == 2 {
        return Ok(12);
    }
    match p % 10 {
        1 => Ok(12 * p),
        3 => Ok(24 * p),
        7 => Ok(6 * p),
        9 => Ok(18 * p),
        _ => Err(GensError::Unsupported(p)),
    }
}

/// Named matrices together with the formulas that produced them.
#[derive(Debug, Clone)]
pub struct Words {
    matrices: BTreeMap<String, Matrix>,
    formulas: BTreeMap<String, String>,
}

impl Words {
    fn new() -> Self {
        Words { matrices: BTreeMap::new(), formulas: BTreeMap::new() }
    }

    fn insert(&mut self, name: &str, formula: impl Into<String>, m: Matrix) {
        self.matrices.insert(name.to_string(), m);
        self.formulas.insert(name.to_string(), formula.into());
    }

    /// Panics on unknown names; the name set is fixed per variant.
    pub fn get(&self, name: &str) -> &Matrix {
        self.matrices.get(name).unwrap_or_else(|| panic!("no word named {name}"))
    }

    pub fn try_get(&self, name: &str) -> Option<&Matrix> {
        self.matrices.get(name)
    }

    pub fn formula(&self, name: &str) -> Option<&str> {
        self.formulas.get(name).map(String::as_str)
    }

    pub fn names(&self) -> impl Iterator<Item = &str> {
        self.matrices.keys().map(String::as_str)
    }

    /// Evaluates `formula` with the stored matrices as letters and records it.
    fn define(&mut self, name: &str, formula: &str) -> Result<(), GensError> {
        let m = eval_word(formula, &self.matrices)?;
        self.insert(name, formula, m);
        Ok(())
    }
}

/// Builds every auxiliary word of the generation argument.
///
/// Standard: `c = [x, y]`, `gamma = c^k`, `delta = gamma^y`, `eta1..eta3`,
/// `g = (e_1, e_4, e_9)` and `g_x = g^x`.
/// Tilde: `c_t = [x~, y~]`, `gamma_t = c_t^12`, `delta_t = gamma_t^(y~^2)`,
/// `u1`, `u2`, `g1 = diag(1, x_3, I_8)`, `g2 = (e_1, .., e_7)`, `g3 = (e_6, e_7, e_8)`
/// and `g3_conj = g3^(y~ g1 x~)`.
pub fn build_words(pair: &GeneratorPair) -> Result<Words, GensError> {
    let f = &pair.field;
    let mut w = Words::new();
    w.insert("x", "x", pair.x.clone());
    w.insert("y", "y", pair.y.clone());
    match pair.variant {
        Variant::Standard => {
            let k = gamma_exponent(f.p())?;
            let c = commutator(&pair.x, &pair.y)?;
            w.insert("c", "x^-1 y^-1 x y", c.clone());
            w.insert("gamma", format!("c^{k}"), c.pow(k as u128));
            let delta = conjugate(w.get("gamma"), &pair.y)?;
            w.insert("delta", "y^-1 gamma y", delta);
            w.define("eta1", ETA1)?;
            w.define("eta2", ETA2)?;
            w.define("eta3", ETA3)?;
            let g = Matrix::perm_matrix(f, DIM, &[&[1, 4, 9]])?;
            let gx = conjugate(&g, &pair.x)?;
            w.insert("g", "(e1,e4,e9)", g);
            w.insert("g_x", "x^-1 g x", gx);
        }
        Variant::Tilde => {
            if f.p() != 5 {
                return Err(GensError::WrongCharacteristic(f.p()));
            }
            let c = commutator(&pair.x, &pair.y)?;
            w.insert("c_t", "x^-1 y^-1 x y", c.clone());
            w.insert("gamma_t", "c_t^12", c.pow(12));
            let y2 = pair.y.pow(2);
            let delta = conjugate(w.get("gamma_t"), &y2)?;
            w.insert("delta_t", "y^-2 gamma_t y^2", delta);
            w.define("u1", U1)?;
            w.define("u2", U2)?;
            let g1 = Matrix::identity(f, 1).direct_sum(&x3(f)).direct_sum(&Matrix::identity(f, 8));
            w.insert("g1", "diag(1, x3, I_8)", g1);
            w.insert("g2", "(e1,e2,e3,e4,e5,e6,e7)", Matrix::perm_matrix(f, DIM, &[&[1, 2, 3, 4, 5, 6, 7]])?);
            w.insert("g3", "(e6,e7,e8)", Matrix::perm_matrix(f, DIM, &[&[6, 7, 8]])?);
            w.define("conj_t", "y g1 x")?;
            let g3c = conjugate(w.get("g3"), w.get("conj_t"))?;
            w.insert("g3_conj", "(y g1 x)^-1 g3 (y g1 x)", g3c);
        }
    }
    Ok(w)
}

/// Evaluates a word such as `(a^4 b^3)^2 c^-1` left to right.
pub fn eval_word(formula: &str, letters: &BTreeMap<String, Matrix>) -> Result<Matrix, GensError> {
    let mut parser = WordParser { src: formula.as_bytes(), pos: 0, letters };
    let m = parser.product()?;
    parser.skip_ws();
    if parser.pos != parser.src.len() {
        return Err(parser.error("trailing input"));
    }
    m.ok_or_else(|| parser.error("empty word"))
}

struct WordParser<'a> {
    src: &'a [u8],
    pos: usize,
    letters: &'a BTreeMap<String, Matrix>,
}

impl WordParser<'_> {
    fn error(&self, msg: &str) -> GensError {
        GensError::Construction(format!("bad word '{}' at {}: {msg}", String::from_utf8_lossy(self.src), self.pos))
    }

    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn product(&mut self) -> Result<Option<Matrix>, GensError> {
        let mut acc: Option<Matrix> = None;
        loop {
            self.skip_ws();
            let Some(&c) = self.src.get(self.pos) else { break };
            let factor = if c == b'(' {
                self.pos += 1;
                let inner = self.product()?.ok_or_else(|| self.error("empty parentheses"))?;
                self.skip_ws();
                if self.src.get(self.pos) != Some(&b')') {
                    return Err(self.error("expected ')'"));
                }
                self.pos += 1;
                inner
            } else if c.is_ascii_alphabetic() {
                let start = self.pos;
                while self.pos < self.src.len()
                    && (self.src[self.pos].is_ascii_alphanumeric() || self.src[self.pos] == b'_')
                {
                    self.pos += 1;
                }
                let name = std::str::from_utf8(&self.src[start..self.pos]).expect("ascii");
                self.letters.get(name).cloned().ok_or_else(|| self.error(&format!("unknown letter {name}")))?
            } else {
                break;
            };
            let factor = self.exponent(factor)?;
            acc = Some(match acc {
                None => factor,
                Some(a) => a.try_mul(&factor)?,
            });
        }
        Ok(acc)
    }

    fn exponent(&mut self, base: Matrix) -> Result<Matrix, GensError> {
        if self.src.get(self.pos) != Some(&b'^') {
            return Ok(base);
        }
        self.pos += 1;
        let negative = self.src.get(self.pos) == Some(&b'-');
        if negative {
            self.pos += 1;
        }
        let start = self.pos;
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        let e: u128 = std::str::from_utf8(&self.src[start..self.pos])
            .expect("ascii")
            .parse()
            .map_err(|_| self.error("expected exponent"))?;
        let base = if negative { base.inverse()? } else { base };
        Ok(base.pow(e))
    }
}

/// Whether `t` satisfies `t != 0`, `t != 2` and `F_p(t) = F_q`; the first
/// violated condition is returned as the error text.
pub fn check_parameter(field: &Field, t: &FieldElement) -> Result<(), String> {
    if t.is_zero() {
        return Err("t = 0".into());
    }
    if t.code() == field.int_code(2) {
        return Err("t = 2".into());
    }
    match generates_field(t, field) {
        Ok(true) => Ok(()),
        Ok(false) => Err(format!("F_p(t) is a proper subfield of F_{}", field.q())),
        Err(e) => Err(e.to_string()),
    }
}

/// All elements in the fixed candidate order used for picking `t`.
pub fn candidate_order(field: &Field) -> impl Iterator<Item = FieldElement> + '_ {
    let p = field.p();
    let a = field.a();
    let ints = 0..p;
    let monomials = (1..a).map(move |k| p.pow(k));
    let rest = (0..field.q()).filter(move |&c| c >= p && !(1..a).any(|k| p.pow(k) == c));
    ints.chain(monomials).chain(rest).map(|c| field.element(c))
}

/// Parameters satisfying [`check_parameter`], in candidate order.
pub fn valid_parameters(field: &Field) -> impl Iterator<Item = FieldElement> + '_ {
    candidate_order(field).filter(|t| check_parameter(field, t).is_ok())
}

pub fn default_t(field: &Field) -> Option<FieldElement> {
    valid_parameters(field).next()
}

/// The 5x5 involution `I_5 - 2 E_{5,5} + t E_{5,4}`, without parameter checks.
pub fn lemma5_involution(field: &Field, t: &FieldElement) -> Matrix {
    let mut w = Matrix::identity(field, 5);
    w.set_entry(5, 5, &field.from_int(-1));
    w.set_entry(5, 4, t);
    w
}

/// [`lemma5_involution`] for a parameter with `t != 0, 2` and `F_p(t) = F_q`.
pub fn build_w_lemma5(field: &Field, t: &FieldElement) -> Result<Matrix, GensError> {
    check_parameter(field, t).map_err(|reason| GensError::InvalidParameter { t: t.to_string(), reason })?;
    let w = lemma5_involution(field, t);
    debug_assert!(w.pow(2).is_identity());
    Ok(w)
}

/// The double transposition `g` with `w = g x` acting on `<e_8, .., e_12>`:
/// `(e_1,e_8)(e_9,e_10)` for the standard pair, `(e_6,e_7)(e_9,e_10)` for the tilde pair.
pub fn build_g_prop(field: &Field, variant: Variant) -> Matrix {
    let cycles: [&[usize]; 2] = match variant {
        Variant::Standard => [&[1, 8], &[9, 10]],
        Variant::Tilde => [&[6, 7], &[9, 10]],
    };
    Matrix::perm_matrix(field, DIM, &cycles).expect("indices within 1..=12")
}

/// `restrict(g x, [8..12])` as a 5x5 matrix.
pub fn prop_block(pair: &GeneratorPair) -> Result<Matrix, MatrixError> {
    let g = build_g_prop(&pair.field, pair.variant);
    g.try_mul(&pair.x)?.restrict(&[8, 9, 10, 11, 12])
}
