//! One certificate per step of the generation argument.
//!
//! Expected values are fixed constants (cycle structures, element orders) or
//! closed formulas (`|SL_n(q)|`, `m!/2`), never the output of the code path
//! being checked. Check failures become verdicts; only structural problems
//! (wrong characteristic, malformed input) are errors.

use std::fmt;
use std::time::Instant;

use crate::action::{
    alt_order, normal_closure, sl_order, ActionSpace, BigCount, ChainOptions, PointSpace, StabilizerChain, VectorSpace,
    Verification, DEFAULT_GUARD, DEFAULT_SEED,
};
use crate::error::{ActionError, CertifyError, GensError};
use crate::ff::{is_prime, make_field, Field, FieldElement};
use crate::gens::{
    build_g_prop, build_words, check_parameter, default_t, lemma5_involution, GeneratorPair, Variant, DIM,
};
use crate::matq::Matrix;
use crate::perm::Permutation;
use crate::report::{CertificateReport, Check, EngineFlags, Params};

/// `e_i -> c e_j` images of `gamma` with `c = +-1`, in the order they chain.
pub const GAMMA_MAP: [(usize, usize, i64); 5] = [(1, 3, -1), (3, 5, 1), (5, 4, 1), (4, 8, -1), (8, 1, 1)];
pub const GAMMA_FIXED: [usize; 7] = [2, 6, 7, 9, 10, 11, 12];

pub const ETA1_CYCLES: &str = "(2,5)(4,8)";
pub const ETA2_CYCLES: &str = "(1,6)(4,9)";
pub const ETA3_CYCLES: &str = "(1,3)(2,8)(4,9)(5,6)";
pub const G_X_CYCLES: &str = "(3,10,8)";
pub const G3_CONJ_CYCLES: &str = "(4,8,10)";
pub const U1_ORDER: u64 = 313;
pub const U2_ORDER: u64 = 19531;

/// `Delta = {e_1, .., e_6, e_8, e_9}`.
pub const DELTA: [usize; 8] = [1, 2, 3, 4, 5, 6, 8, 9];
/// The block decomposition preserved by `gamma~` and `delta~`.
pub const TILDE_BLOCKS: [&[usize]; 5] = [&[1, 2, 3, 4, 5, 6, 7, 8], &[9], &[10], &[11], &[12]];
/// Coordinates carrying the involution `w`.
pub const W_BLOCK: [usize; 5] = [8, 9, 10, 11, 12];

#[derive(Debug, Clone)]
pub struct EngineConfig {
    pub guard: u64,
    pub randomized: bool,
    pub seed: u64,
}

impl Default for EngineConfig {
    fn default() -> Self {
        EngineConfig { guard: DEFAULT_GUARD, randomized: false, seed: DEFAULT_SEED }
    }
}

impl EngineConfig {
    pub fn randomized(mut self, on: bool) -> Self {
        self.randomized = on;
        self
    }

    pub fn flags(&self) -> EngineFlags {
        EngineFlags { guard: self.guard, randomized: self.randomized }
    }

    fn options(&self, bound: Option<BigCount>) -> ChainOptions {
        ChainOptions { randomized: self.randomized, seed: self.seed, order_bound: bound, ..ChainOptions::default() }
    }
}

/// Images of the non-fixed basis vectors under a monomial matrix, and the
/// fixed basis vectors.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GammaActionTable {
    /// `(i, j, c)` meaning `e_i -> c e_j`, sorted by `i`.
    pub mapped: Vec<(usize, usize, FieldElement)>,
    pub fixed: Vec<usize>,
}

impl GammaActionTable {
    pub fn expected(field: &Field) -> Self {
        let mut mapped: Vec<_> = GAMMA_MAP.iter().map(|&(i, j, c)| (i, j, field.from_int(c))).collect();
        mapped.sort_by_key(|m| m.0);
        GammaActionTable { mapped, fixed: GAMMA_FIXED.to_vec() }
    }

    /// Reads the table off a monomial matrix.
    pub fn observe(m: &Matrix) -> Result<Self, crate::error::MatrixError> {
        let sp = m.as_signed_permutation()?;
        let mut mapped = Vec::new();
        let mut fixed = Vec::new();
        for (k, (j, c)) in sp.targets().into_iter().zip(sp.coeffs()).enumerate() {
            let i = k + 1;
            if i == j && c.is_one() {
                fixed.push(i);
            } else {
                mapped.push((i, j, c.clone()));
            }
        }
        Ok(GammaActionTable { mapped, fixed })
    }

    /// Every index `1..=n` appears exactly once as a source.
    pub fn covers(&self, n: usize) -> bool {
        let mut sources: Vec<usize> = self.mapped.iter().map(|m| m.0).chain(self.fixed.iter().copied()).collect();
        sources.sort_unstable();
        sources == (1..=n).collect::<Vec<_>>()
    }
}

impl fmt::Display for GammaActionTable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self
            .mapped
            .iter()
            .map(|(i, j, c)| {
                let minus_one = c.field().from_int(-1);
                if c.is_one() {
                    format!("e{i}->e{j}")
                } else if *c == minus_one {
                    format!("e{i}->-e{j}")
                } else {
                    format!("e{i}->({c})e{j}")
                }
            })
            .collect();
        let fixed: Vec<String> = self.fixed.iter().map(|i| format!("e{i}")).collect();
        write!(f, "{}; fixed {}", parts.join(", "), fixed.join(","))
    }
}

/// The plain permutation of a 0/1 monomial matrix.
fn plain(m: &Matrix) -> Option<Permutation> {
    m.as_signed_permutation().ok()?.plain_permutation()
}

fn plain_label(m: &Matrix) -> String {
    match m.as_signed_permutation() {
        Ok(sp) => match sp.plain_permutation() {
            Some(p) => p.to_string(),
            None => format!("signed permutation {sp}"),
        },
        Err(_) => "not monomial".into(),
    }
}

fn identity_label(m: &Matrix) -> &'static str {
    if m.is_identity() {
        "I"
    } else {
        "not I"
    }
}

/// Row-by-row rendering, e.g. `[[1,0],[2,1]]`.
pub fn render_matrix(m: &Matrix) -> String {
    let n = m.n();
    let rows: Vec<String> = (1..=n)
        .map(|i| {
            let row: Vec<String> = (1..=n).map(|j| m.entry(i, j).to_string()).collect();
            format!("[{}]", row.join(","))
        })
        .collect();
    format!("[{}]", rows.join(","))
}

fn hypothesis_check(field: &Field, t: &FieldElement) -> Check {
    let name = "hypothesis: t != 0, t != 2, F_p(t) = F_q";
    match check_parameter(field, t) {
        Ok(()) => Check::new(name, "holds", "holds", true),
        Err(reason) => Check::infeasible(name, "holds", format!("violated: {reason}")),
    }
}

fn points_label(q: u64, n: usize) -> String {
    let points = (q as u128).checked_pow(n as u32).map(|v| (v - 1).to_string()).unwrap_or_else(|| "huge".into());
    format!("{q}^{n} - 1 = {points} points")
}

fn space(n: usize, field: &Field, engine: &EngineConfig) -> Result<VectorSpace, Check> {
    VectorSpace::new(n, field, engine.guard).map_err(|e| match e {
        ActionError::SpaceTooLarge { guard, .. } => Check::infeasible(
            "action space",
            format!("at most {guard} points"),
            format!("{} exceeds the guard", points_label(field.q(), n)),
        ),
        other => Check::infeasible("action space", "constructible", other.to_string()),
    })
}

fn certificate_check<S: ActionSpace>(chain: &StabilizerChain<S>) -> Check {
    let how = match chain.verification() {
        Some(Verification::SchreierGenerators) => "all Schreier generators sift",
        Some(Verification::OrderBound) => "order meets proven upper bound",
        None => "unverified",
    };
    Check::new("chain certificate", "verified", how, chain.verification().is_some())
}

/// `x^2 = I`, `x != I`, `y^3 = I`, `y != I`, `det x = det y = 1`.
pub fn order_checks(x: &Matrix, y: &Matrix) -> Vec<Check> {
    vec![
        Check::equal("x^2", "I", identity_label(&x.pow(2))),
        Check::equal("x", "not I", identity_label(x)),
        Check::equal("y^3", "I", identity_label(&y.pow(3))),
        Check::equal("y", "not I", identity_label(y)),
        Check::equal("det x", 1, x.det()),
        Check::equal("det y", 1, y.det()),
    ]
}

pub fn verify_orders(pair: &GeneratorPair, engine: &EngineConfig) -> CertificateReport {
    let start = Instant::now();
    let checks = order_checks(&pair.x, &pair.y);
    CertificateReport::new("orders", Params::new(&pair.field, Some(&pair.t)), checks, start, engine.flags())
}

/// `H` contains `Alt(12)` (as permutation matrices), for `p != 5`.
pub fn verify_lemma_alt(
    field: &Field,
    t: &FieldElement,
    engine: &EngineConfig,
) -> Result<CertificateReport, CertifyError> {
    let start = Instant::now();
    if field.p() == 5 {
        return Err(GensError::Unsupported(5).into());
    }
    let pair = GeneratorPair::new(field, t, Variant::Standard)?;
    let words = build_words(&pair)?;
    let mut checks = Vec::new();

    let gamma = words.get("gamma");
    let expected_table = GammaActionTable::expected(field);
    let observed_table = match GammaActionTable::observe(gamma) {
        Ok(table) => table.to_string(),
        Err(e) => format!("gamma is not monomial ({e})"),
    };
    let formula = words.formula("gamma").unwrap_or("gamma");
    checks.push(Check::equal(format!("gamma = {formula} action table"), expected_table, observed_table));

    let etas: Vec<Option<Permutation>> = ["eta1", "eta2", "eta3"].iter().map(|n| plain(words.get(n))).collect();
    for (name, expected) in [("eta1", ETA1_CYCLES), ("eta2", ETA2_CYCLES), ("eta3", ETA3_CYCLES)] {
        checks.push(Check::equal(format!("{name} as permutation"), expected, plain_label(words.get(name))));
    }

    let delta: Vec<usize> = DELTA.iter().map(|i| i - 1).collect();
    let on_delta: Option<Vec<Permutation>> =
        etas.iter().map(|e| e.as_ref().and_then(|e| e.restrict_to(&delta))).collect();
    let name = "order of <eta1, eta2, eta3> on Delta";
    checks.push(match &on_delta {
        Some(gens) => {
            let chain = StabilizerChain::new(&PointSpace::new(8), gens, &engine.options(None))?;
            Check::equal(name, alt_order(8), chain.order())
        }
        None => Check::new(name, alt_order(8).to_string(), "eta elements do not permute Delta", false),
    });

    checks.push(Check::equal("g^x as permutation", G_X_CYCLES, plain_label(words.get("g_x"))));

    let name = "order of <Alt(Delta), g^x, y> on 12 points";
    let mut gens: Vec<Option<Permutation>> = etas.clone();
    gens.push(plain(words.get("g_x")));
    gens.push(plain(&pair.y));
    checks.push(match gens.into_iter().collect::<Option<Vec<_>>>() {
        Some(gens) => {
            let chain = StabilizerChain::new(&PointSpace::new(DIM), &gens, &engine.options(None))?;
            Check::equal(name, alt_order(12), chain.order())
        }
        None => Check::new(name, alt_order(12).to_string(), "some generator is not a plain permutation", false),
    });

    Ok(CertificateReport::new("lemma-alt", Params::new(field, Some(t)), checks, start, engine.flags()))
}

/// The permutation matrices of `(1,2,3)` and `(1,2,3,4,5)`, generating `Alt(5)`.
pub fn alt5_matrices(field: &Field) -> Vec<Matrix> {
    vec![
        Matrix::perm_matrix(field, 5, &[&[1, 2, 3]]).expect("valid cycle"),
        Matrix::perm_matrix(field, 5, &[&[1, 2, 3, 4, 5]]).expect("valid cycle"),
    ]
}

/// `2|SL_5(q)|` for odd `q`, `|SL_5(q)|` in characteristic 2.
pub fn lemma5_target(field: &Field) -> BigCount {
    let sl = sl_order(5, field);
    if field.p() == 2 {
        sl
    } else {
        sl * 2u32
    }
}

/// Order of the normal closure of `lemma5_involution(t)` under `Alt(5)` for
/// any `t`, without hypothesis checks.
pub fn exploratory_closure_order(
    field: &Field,
    t: &FieldElement,
    engine: &EngineConfig,
) -> Result<BigCount, CertifyError> {
    let space = VectorSpace::new(5, field, engine.guard)?;
    let w = lemma5_involution(field, t);
    let chain = normal_closure(&space, &alt5_matrices(field), &[w], &engine.options(None))?;
    Ok(chain.order())
}

fn lemma5_checks(field: &Field, t: &FieldElement, engine: &EngineConfig) -> Result<Vec<Check>, CertifyError> {
    let space = match space(5, field, engine) {
        Ok(s) => s,
        Err(check) => {
            return Ok(vec![Check::infeasible("order of N", lemma5_target(field).to_string(), check.observed)]);
        }
    };
    let w = lemma5_involution(field, t);
    let ambient = alt5_matrices(field);
    let minus_one = field.from_int(-1);
    let mut checks = vec![
        Check::equal("det w", &minus_one, w.det()),
        Check::equal("det of Alt(5) generators", "1, 1", format!("{}, {}", ambient[0].det(), ambient[1].det())),
    ];
    // N lies in the group of determinant +-1, of order lemma5_target
    let bounded = checks.iter().all(|c| c.ok);
    let bound = bounded.then(|| lemma5_target(field));
    let chain = normal_closure(&space, &ambient, &[w], &engine.options(bound))?;
    checks.push(Check::equal("order of N", lemma5_target(field), chain.order()));
    if field.p() != 2 {
        let mut d = vec![1i64; 5];
        d[0] = -1;
        let diag = Matrix::diag_ints(field, &d);
        checks.push(Check::equal("diag(-1,1,1,1,1) in N", true, chain.contains(&diag)));
    }
    checks.push(certificate_check(&chain));
    Ok(checks)
}

/// The normal closure of `w = I_5 - 2E_{5,5} + tE_{5,4}` under `Alt(5)` is
/// `<SL_5(q), diag(-1,1,1,1,1)>`. With `exploratory`, parameters violating
/// the hypothesis still get their closure order reported.
pub fn verify_lemma_5(
    field: &Field,
    t: &FieldElement,
    engine: &EngineConfig,
    exploratory: bool,
) -> Result<CertificateReport, CertifyError> {
    let start = Instant::now();
    let hypothesis = hypothesis_check(field, t);
    let mut checks = vec![hypothesis.clone()];
    if hypothesis.ok {
        checks.extend(lemma5_checks(field, t, engine)?);
    } else if exploratory {
        let observed = match exploratory_closure_order(field, t, engine) {
            Ok(order) => order.to_string(),
            Err(CertifyError::Action(e)) => e.to_string(),
            Err(e) => return Err(e),
        };
        checks.push(Check::new("exploratory: order of closure", "no claim", observed, true));
    }
    Ok(CertificateReport::new("lemma-5", Params::new(field, Some(t)), checks, start, engine.flags()))
}

/// `w = g x` acts on `<e_8, .., e_12>` as the Lemma-5 involution; the closure
/// step follows when the 5-dimensional space fits the guard. For the tilde
/// pair (`p = 5`) the report is the `corollary` claim and also carries the
/// `lemma-alt5` checks.
pub fn verify_prop_steps(
    field: &Field,
    t: &FieldElement,
    variant: Variant,
    engine: &EngineConfig,
) -> Result<CertificateReport, CertifyError> {
    let start = Instant::now();
    let claim = match variant {
        Variant::Standard if field.p() == 5 => return Err(GensError::Unsupported(5).into()),
        Variant::Tilde if field.p() != 5 => return Err(GensError::WrongCharacteristic(field.p()).into()),
        Variant::Standard => "prop-steps",
        Variant::Tilde => "corollary",
    };
    let hypothesis = hypothesis_check(field, t);
    let mut checks = vec![hypothesis.clone()];
    if !hypothesis.ok {
        return Ok(CertificateReport::new(claim, Params::new(field, Some(t)), checks, start, engine.flags()));
    }
    let pair = GeneratorPair::new(field, t, variant)?;
    let g = build_g_prop(field, variant);
    checks.push(Check::equal("g is an involution", "I", identity_label(&g.pow(2))));
    let w = g.try_mul(&pair.x)?;
    let expected = render_matrix(&lemma5_involution(field, t));
    checks.push(match w.restrict(&W_BLOCK) {
        Ok(block) => Check::equal("w = g x on <e8,..,e12>", expected, render_matrix(&block)),
        Err(_) => Check::new("w = g x on <e8,..,e12>", expected, "subspace not invariant", false),
    });
    checks.extend(lemma5_checks(field, t, engine)?.into_iter().map(|c| c.prefixed("lemma-5")));
    if variant == Variant::Tilde {
        checks.extend(lemma_alt5_checks(&pair, engine)?.into_iter().map(|c| c.prefixed("lemma-alt5")));
    }
    Ok(CertificateReport::new(claim, Params::new(field, Some(t)), checks, start, engine.flags()))
}

fn lemma_alt5_checks(pair: &GeneratorPair, engine: &EngineConfig) -> Result<Vec<Check>, CertifyError> {
    let words = build_words(pair)?;
    let f5 = make_field(5, 1, None)?;
    let partition: Vec<Vec<usize>> = TILDE_BLOCKS.iter().map(|b| b.to_vec()).collect();
    let block8 = TILDE_BLOCKS[0];
    let mut checks = Vec::new();

    let mut gens = Vec::new();
    let mut block_ok = true;
    for name in ["gamma_t", "delta_t"] {
        let m = words.get(name);
        let diagonal = m.block_diagonal_check(&partition)?;
        checks.push(Check::equal(format!("{name} block diagonal 8+1+1+1+1"), true, diagonal));
        let block = m.restrict(block8).ok().and_then(|b| b.to_field(&f5));
        match block {
            Some(b) => {
                let det = b.det();
                block_ok &= det.is_one();
                checks.push(Check::equal(format!("{name} 8x8 block over F_5, det"), 1, det));
                gens.push(b);
            }
            None => {
                block_ok = false;
                checks.push(Check::new(format!("{name} 8x8 block over F_5, det"), "1", "entries outside F_5", false));
            }
        }
    }

    for (name, expected) in [("u1", U1_ORDER), ("u2", U2_ORDER)] {
        let formula = words.formula(name).unwrap_or(name).to_string();
        let observed = match words.get(name).element_order(crate::matq::DEFAULT_ORDER_CAP) {
            Ok(o) => o.to_string(),
            Err(e) => e.to_string(),
        };
        checks.push(Check::equal(format!("order of {name} = {formula}"), expected, observed));
    }

    let target = sl_order(8, &f5);
    let mut chain = None;
    let mut out_of_reach = false;
    match space(8, &f5, engine) {
        Err(check) => {
            out_of_reach = true;
            checks.push(Check::infeasible("order of K on F_5^8", target.to_string(), check.observed));
        }
        Ok(_) if gens.len() < 2 => {
            checks.push(Check::new("order of K on F_5^8", target.to_string(), "blocks unavailable", false))
        }
        Ok(space) => {
            // det-1 blocks over F_5 generate a subgroup of SL_8(5)
            let bound = block_ok.then(|| target.clone());
            let k = StabilizerChain::new(&space, &gens, &engine.options(bound))?;
            checks.push(Check::equal("order of K on F_5^8", &target, k.order()));
            checks.push(certificate_check(&k));
            chain = Some(k);
        }
    }

    for name in ["g1", "g2", "g3"] {
        let block = words.get(name).restrict(block8).ok().and_then(|b| b.to_field(&f5));
        let name = format!("{name} block in K");
        checks.push(match (&chain, block) {
            (Some(chain), Some(b)) => Check::equal(name, true, chain.contains(&b)),
            _ if out_of_reach => Check::infeasible(name, "true", "no chain for K"),
            _ => Check::new(name, "true", "no 8x8 block over F_5", false),
        });
    }

    checks.push(Check::equal("g3^(y g1 x) as permutation", G3_CONJ_CYCLES, plain_label(words.get("g3_conj"))));

    let name = "order of <g2, g3^(y g1 x), y> on 12 points";
    let perms: Option<Vec<Permutation>> =
        [words.get("g2"), words.get("g3_conj"), &pair.y].into_iter().map(plain).collect();
    checks.push(match perms {
        Some(perms) => {
            let chain = StabilizerChain::new(&PointSpace::new(DIM), &perms, &engine.options(None))?;
            Check::equal(name, alt_order(12), chain.order())
        }
        None => Check::new(name, alt_order(12).to_string(), "some generator is not a plain permutation", false),
    });
    Ok(checks)
}

/// The tilde pair over `F_{5^a}` yields `Alt(12)` through the `SL_8(5)` block group `K`.
pub fn verify_lemma_alt5(
    field: &Field,
    t: &FieldElement,
    engine: &EngineConfig,
) -> Result<CertificateReport, CertifyError> {
    let start = Instant::now();
    if field.p() != 5 {
        return Err(GensError::WrongCharacteristic(field.p()).into());
    }
    let pair = GeneratorPair::new(field, t, Variant::Tilde)?;
    let checks = lemma_alt5_checks(&pair, engine)?;
    Ok(CertificateReport::new("lemma-alt5", Params::new(field, Some(t)), checks, start, engine.flags()))
}

/// `<x, y> = SL_12(q)` by a stabilizer chain on the nonzero vectors of `F_q^12`.
pub fn certify_full_generation(
    field: &Field,
    t: &FieldElement,
    variant: Variant,
    engine: &EngineConfig,
) -> Result<CertificateReport, CertifyError> {
    let start = Instant::now();
    let params = Params::new(field, Some(t));
    let hypothesis = hypothesis_check(field, t);
    let mut checks = vec![hypothesis.clone()];
    let target = sl_order(DIM as u32, field);
    let space = match space(DIM, field, engine) {
        Ok(s) if hypothesis.ok => s,
        Ok(_) => return Ok(CertificateReport::new("full-generation", params, checks, start, engine.flags())),
        Err(check) => {
            checks.push(Check::infeasible("order of <x, y>", target.to_string(), check.observed));
            return Ok(CertificateReport::new("full-generation", params, checks, start, engine.flags()));
        }
    };
    let pair = GeneratorPair::new(field, t, variant)?;
    checks.push(Check::equal("det x", 1, pair.x.det()));
    checks.push(Check::equal("det y", 1, pair.y.det()));
    // <x, y> <= SL_12(q) once both determinants are 1
    let bound = checks.iter().all(|c| c.ok).then(|| target.clone());
    let chain = StabilizerChain::new(&space, &[pair.x.clone(), pair.y.clone()], &engine.options(bound))?;
    checks.push(Check::equal("order of <x, y>", &target, chain.order()));
    checks.push(certificate_check(&chain));
    Ok(CertificateReport::new("full-generation", params, checks, start, engine.flags()))
}

/// One merged report per `(p, a)` cell with `p <= p_max`: generator orders
/// plus `lemma-alt` (or `lemma-alt5` when `p = 5`), using the default `t`.
pub fn sweep(p_max: u64, a_list: &[u32], engine: &EngineConfig) -> Result<Vec<CertificateReport>, CertifyError> {
    let mut reports = Vec::new();
    for p in (2..=p_max).filter(|&p| is_prime(p)) {
        for &a in a_list {
            reports.push(sweep_cell(p, a, engine)?);
        }
    }
    Ok(reports)
}

fn sweep_cell(p: u64, a: u32, engine: &EngineConfig) -> Result<CertificateReport, CertifyError> {
    let start = Instant::now();
    let field = make_field(p, a, None)?;
    let Some(t) = default_t(&field) else {
        let check = Check::infeasible("parameter t", "exists", "no valid t in this field");
        return Ok(CertificateReport::new("sweep", Params::new(&field, None), vec![check], start, engine.flags()));
    };
    let variant = if p == 5 { Variant::Tilde } else { Variant::Standard };
    let pair = GeneratorPair::new(&field, &t, variant)?;
    let mut checks: Vec<Check> =
        verify_orders(&pair, engine).checks.into_iter().map(|c| c.prefixed("orders")).collect();
    let (claim, lemma) = if p == 5 {
        ("orders+lemma-alt5", verify_lemma_alt5(&field, &t, engine)?)
    } else {
        ("orders+lemma-alt", verify_lemma_alt(&field, &t, engine)?)
    };
    let prefix = lemma.claim.clone();
    checks.extend(lemma.checks.into_iter().map(|c| c.prefixed(&prefix)));
    Ok(CertificateReport::new(claim, Params::new(&field, Some(&t)), checks, start, engine.flags()))
}
