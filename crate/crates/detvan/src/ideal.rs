//! Ideal arithmetic over the rationals: Groebner bases for questions
//! about affine varieties, Mora standard bases for questions about
//! germs at the origin, and the derived quantities the classification
//! pipeline consumes: colengths, dimensions, Milnor numbers, singular
//! loci, polar curves and rational point location.
//!
//! All computations are exact. The global term order is graded
//! reverse lexicographic, the local one its negative-degree variant.
//! Every basis computation is bounded by a degree budget; exceeding
//! it is a resource error, never a silently wrong answer.

use crate::poly::{
    dense_deg, dense_div_exact, dense_gcd, dense_monic, dense_trim, from_univariate,
    rational_roots, Monomial, PolyError, Polynomial, Rational, Vars,
};
use num_traits::{One, Zero};
use std::cmp;
use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum IdealError {
    #[error("degree budget exceeded during {phase}: degree {degree} > {max}")]
    Resource {
        phase: &'static str,
        degree: u64,
        max: u32,
    },
    #[error("generators live over different variable lists")]
    MixedVariables,
    #[error("no generators given")]
    EmptyGenerators,
    #[error("operation requires the {expected} ordering")]
    WrongOrdering { expected: &'static str },
    #[error("Milnor number of a unit is undefined")]
    UnitFunction,
    #[error("function does not vanish at the origin")]
    NotAGerm,
    #[error("not an isolated complete intersection singularity at recursion level {level}")]
    NotIcis { level: usize },
    #[error("ideal is not zero-dimensional (dimension {dimension})")]
    NotZeroDimensional { dimension: u32 },
    #[error("bend vector has length {got}, expected {expected}")]
    BendLength { expected: usize, got: usize },
    #[error(transparent)]
    Poly(#[from] PolyError),
}

/// Degree cap for all basis computations.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Budget {
    pub max_degree: u32,
}

impl Default for Budget {
    fn default() -> Self {
        Budget { max_degree: 24 }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum TermOrder {
    /// Graded reverse lexicographic; leading terms have maximal degree.
    Global,
    /// Negative-degree reverse lexicographic; leading terms have
    /// minimal degree, exposing the tangent cone.
    Local,
}

/// Monomial comparison under the chosen order; `Greater` means closer
/// to the leading position.
pub fn cmp_wrt(order: TermOrder, a: &Monomial, b: &Monomial) -> cmp::Ordering {
    match order {
        TermOrder::Global => a.cmp(b),
        TermOrder::Local => b.degree().cmp(&a.degree()).then_with(|| a.cmp(b)),
    }
}

pub fn leading_wrt(p: &Polynomial, order: TermOrder) -> Option<(Monomial, Rational)> {
    match order {
        TermOrder::Global => p.leading().map(|(m, c)| (m.clone(), c.clone())),
        TermOrder::Local => {
            let mut best: Option<(&Monomial, &Rational)> = None;
            for (m, c) in p.terms() {
                let replace = match best {
                    None => true,
                    Some((bm, _)) => cmp_wrt(order, m, bm) == cmp::Ordering::Greater,
                };
                if replace {
                    best = Some((m, c));
                }
            }
            best.map(|(m, c)| (m.clone(), c.clone()))
        }
    }
}

/// Degree spread between the polynomial and its local leading term;
/// Mora's termination measure.
fn ecart(p: &Polynomial) -> u64 {
    let total = p.total_degree().unwrap_or(0);
    let lead = leading_wrt(p, TermOrder::Local)
        .map(|(m, _)| m.degree())
        .unwrap_or(0);
    total - lead
}

/// A set of generators together with the ring they are meant to
/// generate in: the polynomial ring (global) or its localization at
/// the origin (local).
#[derive(Clone, Debug)]
pub struct Ideal {
    generators: Vec<Polynomial>,
    ordering: TermOrder,
}

impl Ideal {
    pub fn new(generators: Vec<Polynomial>, ordering: TermOrder) -> Result<Self, IdealError> {
        if generators.is_empty() {
            return Err(IdealError::EmptyGenerators);
        }
        let vars = generators[0].vars().clone();
        if generators.iter().any(|g| g.vars() != &vars) {
            return Err(IdealError::MixedVariables);
        }
        Ok(Ideal {
            generators,
            ordering,
        })
    }

    pub fn global(generators: Vec<Polynomial>) -> Result<Self, IdealError> {
        Self::new(generators, TermOrder::Global)
    }

    pub fn local(generators: Vec<Polynomial>) -> Result<Self, IdealError> {
        Self::new(generators, TermOrder::Local)
    }

    pub fn generators(&self) -> &[Polynomial] {
        &self.generators
    }

    pub fn ordering(&self) -> TermOrder {
        self.ordering
    }

    pub fn vars(&self) -> &Vars {
        self.generators[0].vars()
    }
}

/// Completed basis: every S-polynomial has normal form zero.
#[derive(Clone, Debug)]
pub struct StandardBasis {
    pub elements: Vec<Polynomial>,
    pub ordering: TermOrder,
    /// Reduced bases are canonical: monic, pairwise non-divisible
    /// leading terms, tails free of leading monomials. Local bases
    /// are lead-minimal and unit-normalized but keep their tails.
    pub is_reduced: bool,
}

/// Full remainder of `p` on division by `basis` under the global
/// order: no monomial of the result is divisible by any leading
/// monomial of the basis.
pub fn normal_form(p: &Polynomial, basis: &[Polynomial]) -> Polynomial {
    let reducers: Vec<(Monomial, Rational, &Polynomial)> = basis
        .iter()
        .filter(|g| !g.is_zero())
        .map(|g| {
            let (m, c) = g.leading().expect("nonzero polynomial has a leading term");
            (m.clone(), c.clone(), g)
        })
        .collect();
    let mut work = p.clone();
    let mut rem = Polynomial::zero(p.vars());
    'outer: while !work.is_zero() {
        let (lm, lc) = {
            let (m, c) = work.leading().expect("nonzero");
            (m.clone(), c.clone())
        };
        for (gm, gc, g) in &reducers {
            if gm.divides(&lm) {
                let q = lm.div(gm);
                let coef = &lc / gc;
                let sub = g.mul_term(&q, &coef);
                work = work.checked_sub(&sub).expect("same variable context");
                continue 'outer;
            }
        }
        let term = Polynomial::from_terms(p.vars(), [(lm.clone(), lc.clone())]);
        rem = rem.checked_add(&term).expect("same variable context");
        work = work.checked_sub(&term).expect("same variable context");
    }
    rem
}

fn s_polynomial(f: &Polynomial, g: &Polynomial, order: TermOrder) -> Polynomial {
    let (fm, fc) = leading_wrt(f, order).expect("nonzero");
    let (gm, gc) = leading_wrt(g, order).expect("nonzero");
    let l = fm.lcm(&gm);
    let a = f.mul_term(&l.div(&fm), &(Rational::one() / &fc));
    let b = g.mul_term(&l.div(&gm), &(Rational::one() / &gc));
    a.checked_sub(&b).expect("same variable context")
}

/// Mora weak normal form: returns `r` with `u * p = sum + r` for a
/// local unit `u`, the leading term of `r` outside the leading-term
/// ideal of `basis`. Intermediate results join the reducer pool so
/// the ecart argument terminates.
fn mora_reduce(
    p: &Polynomial,
    basis: &[Polynomial],
    budget: &Budget,
) -> Result<Polynomial, IdealError> {
    let mut pool: Vec<Polynomial> = basis.iter().filter(|g| !g.is_zero()).cloned().collect();
    let mut h = p.clone();
    loop {
        if h.is_zero() {
            return Ok(h);
        }
        let (hm, hc) = leading_wrt(&h, TermOrder::Local).expect("nonzero");
        if hm.degree() > budget.max_degree as u64 {
            return Err(IdealError::Resource {
                phase: "local reduction",
                degree: hm.degree(),
                max: budget.max_degree,
            });
        }
        let mut best: Option<(usize, u64)> = None;
        for (idx, g) in pool.iter().enumerate() {
            let (gm, _) = leading_wrt(g, TermOrder::Local).expect("nonzero");
            if gm.divides(&hm) {
                let e = ecart(g);
                if best.map_or(true, |(_, be)| e < be) {
                    best = Some((idx, e));
                }
            }
        }
        let Some((idx, ge)) = best else {
            return Ok(h);
        };
        if ge > ecart(&h) {
            pool.push(h.clone());
        }
        let g = pool[idx].clone();
        let (gm, gc) = leading_wrt(&g, TermOrder::Local).expect("nonzero");
        let coef = &hc / &gc;
        let sub = g.mul_term(&hm.div(&gm), &coef);
        h = h.checked_sub(&sub).expect("same variable context");
    }
}

fn pair_key(i: usize, j: usize) -> (usize, usize) {
    (i.min(j), i.max(j))
}

/// Buchberger completion under either order. The product criterion is
/// sound only globally; the chain criterion applies to both.
fn buchberger(
    gens: &[Polynomial],
    order: TermOrder,
    budget: &Budget,
) -> Result<Vec<Polynomial>, IdealError> {
    let nonzero: Vec<&Polynomial> = gens.iter().filter(|g| !g.is_zero()).collect();
    let Some(first) = nonzero.first() else {
        return Ok(Vec::new());
    };
    let vars = first.vars().clone();
    if nonzero.iter().any(|g| g.vars() != &vars) {
        return Err(IdealError::MixedVariables);
    }
    for g in &nonzero {
        let d = g.total_degree().unwrap_or(0);
        if d > budget.max_degree as u64 {
            return Err(IdealError::Resource {
                phase: "basis input",
                degree: d,
                max: budget.max_degree,
            });
        }
    }
    if nonzero.iter().any(|g| g.is_constant()) {
        return Ok(vec![Polynomial::one(&vars)]);
    }
    let mut basis: Vec<Polynomial> = nonzero.iter().map(|g| g.primitive_integer()).collect();
    let mut pending: Vec<(usize, usize)> = Vec::new();
    let mut done: BTreeSet<(usize, usize)> = BTreeSet::new();
    for i in 0..basis.len() {
        for j in i + 1..basis.len() {
            pending.push((i, j));
        }
    }
    while !pending.is_empty() {
        // Normal strategy: smallest lcm degree first, index tie-break.
        let mut pick = 0;
        let mut pick_score = (u64::MAX, usize::MAX, usize::MAX);
        for (slot, &(i, j)) in pending.iter().enumerate() {
            let (mi, _) = leading_wrt(&basis[i], order).expect("nonzero");
            let (mj, _) = leading_wrt(&basis[j], order).expect("nonzero");
            let score = (mi.lcm(&mj).degree(), i, j);
            if score < pick_score {
                pick_score = score;
                pick = slot;
            }
        }
        let (i, j) = pending.swap_remove(pick);
        done.insert(pair_key(i, j));
        let (mi, _) = leading_wrt(&basis[i], order).expect("nonzero");
        let (mj, _) = leading_wrt(&basis[j], order).expect("nonzero");
        if order == TermOrder::Global && mi.gcd(&mj).is_one() {
            continue;
        }
        let l = mi.lcm(&mj);
        let chained = (0..basis.len()).any(|k| {
            if k == i || k == j {
                return false;
            }
            let (mk, _) = leading_wrt(&basis[k], order).expect("nonzero");
            mk.divides(&l)
                && done.contains(&pair_key(i, k))
                && done.contains(&pair_key(j, k))
        });
        if chained {
            continue;
        }
        let s = s_polynomial(&basis[i], &basis[j], order);
        let nf = match order {
            TermOrder::Global => normal_form(&s, &basis),
            TermOrder::Local => mora_reduce(&s, &basis, budget)?,
        };
        if nf.is_zero() {
            continue;
        }
        let d = nf.total_degree().unwrap_or(0);
        if d > budget.max_degree as u64 {
            return Err(IdealError::Resource {
                phase: "basis completion",
                degree: d,
                max: budget.max_degree,
            });
        }
        let nf = nf.primitive_integer();
        if nf.is_constant() {
            return Ok(vec![Polynomial::one(&vars)]);
        }
        let new = basis.len();
        basis.push(nf);
        for k in 0..new {
            pending.push((k, new));
        }
    }
    Ok(basis)
}

/// Canonical reduced basis: minimal, monic, every tail in normal form
/// with respect to the other elements, sorted by leading monomial.
fn reduce_basis_global(mut basis: Vec<Polynomial>) -> Vec<Polynomial> {
    basis.retain(|g| !g.is_zero());
    basis.sort_by(|a, b| {
        let (ma, _) = a.leading().expect("nonzero");
        let (mb, _) = b.leading().expect("nonzero");
        ma.cmp(mb)
    });
    let mut kept: Vec<Polynomial> = Vec::new();
    for g in basis {
        let (mg, _) = g.leading().expect("nonzero");
        if !kept.iter().any(|h| {
            let (mh, _) = h.leading().expect("nonzero");
            mh.divides(mg)
        }) {
            kept.push(g);
        }
    }
    let mut reduced: Vec<Polynomial> = Vec::new();
    for idx in 0..kept.len() {
        let others: Vec<Polynomial> = kept
            .iter()
            .enumerate()
            .filter(|(k, _)| *k != idx)
            .map(|(_, h)| h.clone())
            .collect();
        let r = normal_form(&kept[idx], &others);
        reduced.push(r.monic().expect("leading term survives reduction"));
    }
    reduced.sort_by(|a, b| {
        let (ma, _) = a.leading().expect("nonzero");
        let (mb, _) = b.leading().expect("nonzero");
        ma.cmp(mb)
    });
    reduced
}

/// Minimal local basis: drop elements whose lead another lead
/// divides, normalize leading coefficients to one, sort leads by the
/// local order with the leading-most (lowest degree) first.
fn minimalize_local(mut basis: Vec<Polynomial>) -> Vec<Polynomial> {
    basis.retain(|g| !g.is_zero());
    basis.sort_by(|a, b| {
        let (ma, _) = leading_wrt(a, TermOrder::Local).expect("nonzero");
        let (mb, _) = leading_wrt(b, TermOrder::Local).expect("nonzero");
        cmp_wrt(TermOrder::Local, &mb, &ma)
    });
    let mut kept: Vec<Polynomial> = Vec::new();
    for g in basis {
        let (mg, _) = leading_wrt(&g, TermOrder::Local).expect("nonzero");
        if !kept.iter().any(|h| {
            let (mh, _) = leading_wrt(h, TermOrder::Local).expect("nonzero");
            mh.divides(&mg)
        }) {
            let (_, lc) = leading_wrt(&g, TermOrder::Local).expect("nonzero");
            kept.push(g.scale(&(Rational::one() / &lc)));
        }
    }
    kept
}

pub fn groebner_basis(ideal: &Ideal, budget: &Budget) -> Result<StandardBasis, IdealError> {
    if ideal.ordering() != TermOrder::Global {
        return Err(IdealError::WrongOrdering { expected: "global" });
    }
    let basis = buchberger(ideal.generators(), TermOrder::Global, budget)?;
    Ok(StandardBasis {
        elements: reduce_basis_global(basis),
        ordering: TermOrder::Global,
        is_reduced: true,
    })
}

pub fn standard_basis_local(ideal: &Ideal, budget: &Budget) -> Result<StandardBasis, IdealError> {
    if ideal.ordering() != TermOrder::Local {
        return Err(IdealError::WrongOrdering { expected: "local" });
    }
    let basis = buchberger(ideal.generators(), TermOrder::Local, budget)?;
    Ok(StandardBasis {
        elements: minimalize_local(basis),
        ordering: TermOrder::Local,
        is_reduced: false,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Colength {
    Finite(u64),
    Infinite,
}

impl fmt::Display for Colength {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Colength::Finite(n) => write!(f, "{n}"),
            Colength::Infinite => write!(f, "infinite"),
        }
    }
}

/// Monomials outside the staircase of the given leading monomials,
/// sorted ascending in the global order; `None` when the quotient is
/// infinite-dimensional.
fn staircase(lms: &[Monomial], nvars: usize) -> Option<Vec<Monomial>> {
    if lms.iter().any(|m| m.is_one()) {
        return Some(Vec::new());
    }
    // A finite staircase needs a pure power of every variable.
    let mut caps: Vec<Option<u32>> = vec![None; nvars];
    for m in lms {
        let support: Vec<usize> = (0..nvars).filter(|&v| m.0[v] > 0).collect();
        if let [v] = support[..] {
            let e = m.0[v];
            caps[v] = Some(caps[v].map_or(e, |old: u32| old.min(e)));
        }
    }
    let caps: Option<Vec<u32>> = caps.into_iter().collect();
    let caps = caps?;
    let mut out: Vec<Monomial> = Vec::new();
    let mut exps = vec![0u32; nvars];
    fn descend(
        depth: usize,
        exps: &mut Vec<u32>,
        caps: &[u32],
        lms: &[Monomial],
        out: &mut Vec<Monomial>,
    ) {
        // Prune on divisors fully supported in the fixed prefix.
        for m in lms {
            let prefix_only = (depth..exps.len()).all(|v| m.0[v] == 0);
            if prefix_only && (0..depth).all(|v| exps[v] >= m.0[v]) {
                return;
            }
        }
        if depth == exps.len() {
            out.push(Monomial(exps.clone()));
            return;
        }
        for e in 0..caps[depth] {
            exps[depth] = e;
            descend(depth + 1, exps, caps, lms, out);
        }
        exps[depth] = 0;
    }
    descend(0, &mut exps, &caps, lms, &mut out);
    out.sort();
    Some(out)
}

fn basis_leads(basis: &[Polynomial], order: TermOrder) -> Vec<Monomial> {
    basis
        .iter()
        .filter(|g| !g.is_zero())
        .map(|g| leading_wrt(g, order).expect("nonzero").0)
        .collect()
}

/// Vector-space dimension of the quotient by the ideal: of the local
/// ring for local ordering, of the polynomial ring for global.
pub fn colength(ideal: &Ideal, budget: &Budget) -> Result<Colength, IdealError> {
    let basis = buchberger(ideal.generators(), ideal.ordering(), budget)?;
    let leads = basis_leads(&basis, ideal.ordering());
    Ok(match staircase(&leads, ideal.vars().len()) {
        Some(monos) => Colength::Finite(monos.len() as u64),
        None => Colength::Infinite,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Dimension {
    /// The ideal is the unit ideal; its vanishing locus is empty.
    Empty,
    Dim(u32),
}

impl fmt::Display for Dimension {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Dimension::Empty => write!(f, "empty"),
            Dimension::Dim(d) => write!(f, "{d}"),
        }
    }
}

/// Krull dimension of the affine vanishing locus, via maximal
/// independent variable subsets of the leading-term ideal.
pub fn ideal_dimension(ideal: &Ideal, budget: &Budget) -> Result<Dimension, IdealError> {
    if ideal.ordering() != TermOrder::Global {
        return Err(IdealError::WrongOrdering { expected: "global" });
    }
    let basis = buchberger(ideal.generators(), TermOrder::Global, budget)?;
    if basis.iter().any(|g| g.is_constant() && !g.is_zero()) {
        return Ok(Dimension::Empty);
    }
    let n = ideal.vars().len();
    assert!(n <= 20, "independent-set search is exponential in variables");
    let supports: Vec<BTreeSet<usize>> = basis_leads(&basis, TermOrder::Global)
        .iter()
        .map(|m| (0..n).filter(|&v| m.0[v] > 0).collect())
        .collect();
    let mut best = 0u32;
    for mask in 0u32..(1u32 << n) {
        let size = mask.count_ones();
        if size <= best {
            continue;
        }
        let independent = supports.iter().all(|sup| {
            // S is dependent as soon as some leading monomial lives
            // entirely inside it.
            !sup.iter().all(|v| mask & (1 << v) != 0)
        });
        if independent {
            best = size;
        }
    }
    Ok(Dimension::Dim(best))
}

/// Rows are the gradients of the given functions.
pub fn jacobian_matrix(fs: &[Polynomial]) -> Vec<Vec<Polynomial>> {
    fs.iter()
        .map(|f| (0..f.vars().len()).map(|v| f.differentiate(v)).collect())
        .collect()
}

fn poly_det(rows: &[&[Polynomial]], cols: &[usize]) -> Polynomial {
    debug_assert_eq!(rows.len(), cols.len());
    if cols.len() == 1 {
        return rows[0][cols[0]].clone();
    }
    let vars = rows[0][cols[0]].vars();
    let mut acc = Polynomial::zero(vars);
    for (pos, &c) in cols.iter().enumerate() {
        let entry = &rows[0][c];
        if entry.is_zero() {
            continue;
        }
        let rest: Vec<usize> = cols
            .iter()
            .copied()
            .filter(|&other| other != c)
            .collect();
        let minor = poly_det(&rows[1..], &rest);
        let signed = if pos % 2 == 0 {
            entry.checked_mul(&minor)
        } else {
            entry.neg().checked_mul(&minor)
        }
        .expect("same variable context");
        acc = acc.checked_add(&signed).expect("same variable context");
    }
    acc
}

fn combinations(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut current: Vec<usize> = Vec::new();
    fn rec(start: usize, n: usize, k: usize, current: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if current.len() == k {
            out.push(current.clone());
            return;
        }
        for i in start..n {
            current.push(i);
            rec(i + 1, n, k, current, out);
            current.pop();
        }
    }
    rec(0, n, k, &mut current, &mut out);
    out
}

/// All `size`-minors of a polynomial matrix, rows and columns chosen
/// in lexicographic order of index sets.
pub fn matrix_minors(matrix: &[Vec<Polynomial>], size: usize) -> Vec<Polynomial> {
    let rows = matrix.len();
    let cols = matrix.first().map(|r| r.len()).unwrap_or(0);
    if size == 0 || size > rows || size > cols {
        return Vec::new();
    }
    let mut out = Vec::new();
    for row_pick in combinations(rows, size) {
        let picked_rows: Vec<&[Polynomial]> =
            row_pick.iter().map(|&r| matrix[r].as_slice()).collect();
        for col_pick in combinations(cols, size) {
            out.push(poly_det(&picked_rows, &col_pick));
        }
    }
    out
}

/// Generators of the singular-locus ideal of a complete intersection:
/// the equations plus the `expected_codim`-minors of their Jacobian.
pub fn singular_locus_ideal(eqs: &[Polynomial], expected_codim: usize) -> Vec<Polynomial> {
    let mut gens: Vec<Polynomial> = eqs.to_vec();
    gens.extend(matrix_minors(&jacobian_matrix(eqs), expected_codim));
    gens
}

/// Milnor number of a hypersurface germ (local) or the total Milnor
/// number of all critical points in affine space (global), as the
/// colength of the Jacobian ideal.
pub fn milnor_hypersurface(
    f: &Polynomial,
    at_origin: bool,
    budget: &Budget,
) -> Result<Colength, IdealError> {
    if f.is_constant() && !f.is_zero() {
        return Err(IdealError::UnitFunction);
    }
    if at_origin && !f.constant_term().is_zero() {
        return Err(IdealError::NotAGerm);
    }
    let partials: Vec<Polynomial> = (0..f.vars().len()).map(|v| f.differentiate(v)).collect();
    let order = if at_origin {
        TermOrder::Local
    } else {
        TermOrder::Global
    };
    colength(&Ideal::new(partials, order)?, budget)
}

/// Milnor number of an isolated complete intersection singularity by
/// the Le-Greuel recursion: mu(f_1..f_k) + mu(f_1..f_{k-1}) equals
/// the colength of (f_1..f_{k-1}) plus the k-minors of the Jacobian
/// of (f_1..f_k). Every level must come out finite.
pub fn milnor_icis_le_greuel(fs: &[Polynomial], budget: &Budget) -> Result<u64, IdealError> {
    let mut mu_prev: i64 = 0;
    for level in 1..=fs.len() {
        let head = &fs[..level];
        let mut gens: Vec<Polynomial> = fs[..level - 1].to_vec();
        gens.extend(matrix_minors(&jacobian_matrix(head), level));
        let c = match colength(&Ideal::new(gens, TermOrder::Local)?, budget)? {
            Colength::Finite(c) => c as i64,
            Colength::Infinite => return Err(IdealError::NotIcis { level }),
        };
        let mu = c - mu_prev;
        if mu < 0 {
            return Err(IdealError::NotIcis { level });
        }
        mu_prev = mu;
    }
    Ok(mu_prev as u64)
}

/// Decides `g` in the radical of the ideal by the auxiliary-variable
/// trick: the radical contains `g` exactly when `1 - u*g` joins the
/// generators into the unit ideal.
pub fn radical_membership(
    g: &Polynomial,
    gens: &[Polynomial],
    budget: &Budget,
) -> Result<bool, IdealError> {
    if g.is_zero() {
        return Ok(true);
    }
    let vars = g.vars();
    let fresh = {
        let mut candidate = "u".to_string();
        let mut counter = 0usize;
        while vars.index_of(&candidate).is_some() {
            counter += 1;
            candidate = format!("u{counter}");
        }
        candidate
    };
    let ext = vars.extended(&[&fresh])?;
    let u = Polynomial::variable(&ext, &fresh)?;
    let mut lifted: Vec<Polynomial> = gens
        .iter()
        .map(|p| p.restrict_vars(&ext))
        .collect::<Result<_, _>>()?;
    let g_ext = g.restrict_vars(&ext)?;
    let witness = Polynomial::one(&ext)
        .checked_sub(&u.checked_mul(&g_ext)?)?;
    lifted.push(witness);
    let basis = buchberger(&lifted, TermOrder::Global, budget)?;
    Ok(basis.iter().any(|p| p.is_constant() && !p.is_zero()))
}

/// Equality of ideals by mutual membership of generators.
pub fn ideals_equal(
    a: &[Polynomial],
    b: &[Polynomial],
    budget: &Budget,
) -> Result<bool, IdealError> {
    let gb_a = buchberger(a, TermOrder::Global, budget)?;
    let gb_b = buchberger(b, TermOrder::Global, budget)?;
    let a_in_b = a.iter().all(|p| normal_form(p, &gb_b).is_zero());
    let b_in_a = b.iter().all(|p| normal_form(p, &gb_a).is_zero());
    Ok(a_in_b && b_in_a)
}

/// Polar locus of `f` under the projection bent by `a`: the linear
/// form `L = x_0 - sum a_i * x_{i+1}` together with the locus where
/// `dL` and `df` become dependent on the variety cut by `ystar_eqs`.
/// The ideal is left unsaturated; its dimension can only overestimate
/// the true polar curve, so a verdict of `is_generic` is safe.
#[derive(Clone, Debug)]
pub struct PolarCurve {
    pub generators: Vec<Polynomial>,
    pub dimension: Dimension,
    pub is_generic: bool,
}

pub fn polar_curve(
    f: &Polynomial,
    ystar_eqs: &[Polynomial],
    bend: &[Rational],
    budget: &Budget,
) -> Result<PolarCurve, IdealError> {
    let vars = f.vars();
    let n = vars.len();
    if bend.len() + 1 != n {
        return Err(IdealError::BendLength {
            expected: n - 1,
            got: bend.len(),
        });
    }
    let mut l = Polynomial::variable(vars, vars.name(0))?;
    for (i, a) in bend.iter().enumerate() {
        let xi = Polynomial::variable(vars, vars.name(i + 1))?;
        l = l.checked_sub(&xi.scale(a))?;
    }
    let mut stacked: Vec<Polynomial> = ystar_eqs.to_vec();
    stacked.push(f.clone());
    stacked.push(l);
    let k = stacked.len();
    let mut gens: Vec<Polynomial> = ystar_eqs.to_vec();
    gens.extend(matrix_minors(&jacobian_matrix(&stacked), k));
    gens.retain(|g| !g.is_zero());
    let dimension = if gens.is_empty() {
        Dimension::Dim(n as u32)
    } else {
        ideal_dimension(&Ideal::global(gens.clone())?, budget)?
    };
    let is_generic = matches!(dimension, Dimension::Empty | Dimension::Dim(0) | Dimension::Dim(1));
    Ok(PolarCurve {
        generators: gens,
        dimension,
        is_generic,
    })
}

/// Monomial basis of the quotient by a zero-dimensional ideal, from
/// its reduced Groebner basis; `None` when infinite-dimensional.
pub fn standard_monomials(gb: &[Polynomial], vars: &Vars) -> Option<Vec<Monomial>> {
    staircase(&basis_leads(gb, TermOrder::Global), vars.len())
}

fn nf_coordinates(
    p: &Polynomial,
    gb: &[Polynomial],
    index: &BTreeMap<Monomial, usize>,
) -> Vec<Rational> {
    let nf = normal_form(p, gb);
    let mut coords = vec![Rational::zero(); index.len()];
    for (m, c) in nf.terms() {
        let slot = index
            .get(m)
            .expect("normal form is supported on standard monomials");
        coords[*slot] = c.clone();
    }
    coords
}

/// Columns of the multiplication-by-`var` operator on the quotient,
/// in the standard monomial basis.
pub fn multiplication_matrix(
    var: usize,
    gb: &[Polynomial],
    monos: &[Monomial],
    vars: &Vars,
) -> Vec<Vec<Rational>> {
    let index: BTreeMap<Monomial, usize> = monos
        .iter()
        .enumerate()
        .map(|(i, m)| (m.clone(), i))
        .collect();
    let xv = Monomial::var(vars.len(), var);
    monos
        .iter()
        .map(|m| {
            let shifted = Polynomial::from_terms(vars, [(m.mul(&xv), Rational::one())]);
            nf_coordinates(&shifted, gb, &index)
        })
        .collect()
}

fn mat_vec(cols: &[Vec<Rational>], v: &[Rational]) -> Vec<Rational> {
    let dim = cols.first().map(|c| c.len()).unwrap_or(0);
    let mut out = vec![Rational::zero(); dim];
    for (j, col) in cols.iter().enumerate() {
        if v[j].is_zero() {
            continue;
        }
        for i in 0..dim {
            out[i] += &col[i] * &v[j];
        }
    }
    out
}

fn dense_mul(a: &[Rational], b: &[Rational]) -> Vec<Rational> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![Rational::zero(); a.len() + b.len() - 1];
    for (i, ai) in a.iter().enumerate() {
        if ai.is_zero() {
            continue;
        }
        for (j, bj) in b.iter().enumerate() {
            out[i + j] += ai * bj;
        }
    }
    dense_trim(&mut out);
    out
}

fn dense_lcm(a: &[Rational], b: &[Rational]) -> Vec<Rational> {
    let g = dense_gcd(a, b);
    let mut out = dense_mul(&dense_div_exact(a, &g), b);
    dense_monic(&mut out);
    out
}

/// Annihilator polynomial of the basis vector `start` under the
/// operator, by exact Krylov iteration: coefficients ascending, monic.
fn krylov_annihilator(cols: &[Vec<Rational>], start: usize, dim: usize) -> Vec<Rational> {
    // Echelon rows with their expressions in the Krylov sequence.
    let mut rows: Vec<(usize, Vec<Rational>, Vec<Rational>)> = Vec::new();
    let mut w: Vec<Rational> = (0..dim)
        .map(|i| {
            if i == start {
                Rational::one()
            } else {
                Rational::zero()
            }
        })
        .collect();
    for d in 0..=dim {
        let mut vec = w.clone();
        let mut combo = vec![Rational::zero(); d + 1];
        combo[d] = Rational::one();
        for (pivot, row_vec, row_combo) in &rows {
            if vec[*pivot].is_zero() {
                continue;
            }
            let factor = vec[*pivot].clone();
            for i in 0..dim {
                let delta = &factor * &row_vec[i];
                vec[i] -= delta;
            }
            for (i, rc) in row_combo.iter().enumerate() {
                let delta = &factor * rc;
                combo[i] -= delta;
            }
        }
        match vec.iter().position(|x| !x.is_zero()) {
            None => {
                dense_trim(&mut combo);
                dense_monic(&mut combo);
                return combo;
            }
            Some(pivot) => {
                let scale = vec[pivot].clone();
                for x in vec.iter_mut() {
                    *x /= &scale;
                }
                let mut combo_scaled = combo;
                for x in combo_scaled.iter_mut() {
                    *x /= &scale;
                }
                combo_scaled.resize(dim + 1, Rational::zero());
                rows.push((pivot, vec, combo_scaled));
            }
        }
        w = mat_vec(cols, &w);
    }
    unreachable!("a vector in dimension {dim} is annihilated by degree {dim}")
}

/// Minimal polynomial of the operator: least common multiple of the
/// annihilators of all basis vectors.
pub fn operator_minpoly(cols: &[Vec<Rational>], dim: usize) -> Vec<Rational> {
    if dim == 0 {
        return vec![Rational::one()];
    }
    let mut acc: Vec<Rational> = vec![Rational::one()];
    for start in 0..dim {
        let ann = krylov_annihilator(cols, start, dim);
        acc = dense_lcm(&acc, &ann);
        if dense_deg(&acc) == Some(dim) {
            break;
        }
    }
    acc
}

#[derive(Clone, Debug)]
pub struct RationalPoint {
    pub coords: Vec<Rational>,
    /// Local intersection multiplicity of the ideal at this point.
    pub multiplicity: u64,
}

#[derive(Clone, Debug)]
pub struct PointSearch {
    pub points: Vec<RationalPoint>,
    pub total_colength: u64,
    /// True when the local multiplicities of the rational points
    /// found account for the whole colength, certifying that no
    /// irrational point exists.
    pub complete: bool,
}

/// Locate the rational points of a zero-dimensional ideal by minimal
/// polynomials of coordinate multiplication operators, coordinate by
/// coordinate. Completeness is certified against the colength.
pub fn rational_points(gens: &[Polynomial], budget: &Budget) -> Result<PointSearch, IdealError> {
    if gens.is_empty() {
        return Err(IdealError::EmptyGenerators);
    }
    let vars = gens[0].vars().clone();
    let ideal = Ideal::global(gens.to_vec())?;
    match ideal_dimension(&ideal, budget)? {
        Dimension::Empty => {
            return Ok(PointSearch {
                points: Vec::new(),
                total_colength: 0,
                complete: true,
            });
        }
        Dimension::Dim(0) => {}
        Dimension::Dim(d) => {
            return Err(IdealError::NotZeroDimensional { dimension: d });
        }
    }
    let gb = buchberger(gens, TermOrder::Global, budget)?;
    let total = staircase(&basis_leads(&gb, TermOrder::Global), vars.len())
        .expect("zero-dimensional ideal has a finite staircase")
        .len() as u64;

    fn locate(
        system: Vec<Polynomial>,
        var: usize,
        partial: &mut Vec<Rational>,
        found: &mut Vec<Vec<Rational>>,
        vars: &Vars,
        budget: &Budget,
    ) -> Result<(), IdealError> {
        let gb = buchberger(&system, TermOrder::Global, budget)?;
        if gb.iter().any(|g| g.is_constant() && !g.is_zero()) {
            return Ok(());
        }
        if var == vars.len() {
            found.push(partial.clone());
            return Ok(());
        }
        let gb = reduce_basis_global(gb);
        let monos = standard_monomials(&gb, vars).ok_or(IdealError::NotZeroDimensional {
            dimension: u32::MAX,
        })?;
        let cols = multiplication_matrix(var, &gb, &monos, vars);
        let minpoly = operator_minpoly(&cols, monos.len());
        let r_vars = Vars::new(&["r"]).expect("fresh context");
        let mp = from_univariate(&r_vars, 0, &minpoly);
        for root in rational_roots(&mp)? {
            let xv = Polynomial::variable(vars, vars.name(var))?;
            let constraint = xv.checked_sub(&Polynomial::constant(vars, root.clone()))?;
            let mut sys2 = system.clone();
            sys2.push(constraint);
            partial.push(root);
            locate(sys2, var + 1, partial, found, vars, budget)?;
            partial.pop();
        }
        Ok(())
    }

    let mut found: Vec<Vec<Rational>> = Vec::new();
    let mut partial: Vec<Rational> = Vec::new();
    locate(gens.to_vec(), 0, &mut partial, &mut found, &vars, budget)?;

    let mut points: Vec<RationalPoint> = Vec::new();
    let mut accounted = 0u64;
    for coords in found {
        let bindings: BTreeMap<String, Polynomial> = (0..vars.len())
            .map(|v| {
                let shift = Polynomial::variable(&vars, vars.name(v))?
                    .checked_add(&Polynomial::constant(&vars, coords[v].clone()))?;
                Ok((vars.name(v).to_string(), shift))
            })
            .collect::<Result<_, PolyError>>()?;
        let shifted: Vec<Polynomial> = gens
            .iter()
            .map(|g| g.substitute(&bindings))
            .collect::<Result<_, _>>()?;
        let mult = match colength(&Ideal::local(shifted)?, budget)? {
            Colength::Finite(m) => m,
            Colength::Infinite => {
                return Err(IdealError::NotZeroDimensional { dimension: u32::MAX })
            }
        };
        accounted += mult;
        points.push(RationalPoint {
            coords,
            multiplicity: mult,
        });
    }
    Ok(PointSearch {
        points,
        total_colength: total,
        complete: accounted == total,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parse::parse_poly;
    use crate::poly::rat;

    fn v(names: &[&str]) -> Vars {
        Vars::new(names).unwrap()
    }

    fn p(src: &str, vars: &Vars) -> Polynomial {
        parse_poly(src, vars).unwrap()
    }

    fn budget() -> Budget {
        Budget::default()
    }

    fn global_basis(gens: &[Polynomial]) -> Vec<Polynomial> {
        groebner_basis(&Ideal::global(gens.to_vec()).unwrap(), &budget())
            .unwrap()
            .elements
    }

    #[test]
    fn groebner_of_linear_pair_is_the_coordinates() {
        let vars = v(&["x", "y"]);
        let basis = global_basis(&[p("x+y", &vars), p("x-y", &vars)]);
        assert_eq!(basis, vec![p("y", &vars), p("x", &vars)]);
    }

    #[test]
    fn groebner_keeps_monomial_ideal() {
        let vars = v(&["x", "y"]);
        let basis = global_basis(&[p("x^2", &vars), p("y^3", &vars)]);
        assert_eq!(basis, vec![p("x^2", &vars), p("y^3", &vars)]);
    }

    #[test]
    fn groebner_satisfies_buchberger_criterion_on_minor_ideal() {
        let vars = v(&["x", "y", "z", "w"]);
        let gens = [
            p("x*z-y^2", &vars),
            p("x*w-y*z", &vars),
            p("y*w-z^2", &vars),
        ];
        let basis = global_basis(&gens);
        assert_eq!(basis.len(), 3, "determinantal ideal basis stays size 3");
        for i in 0..basis.len() {
            for j in i + 1..basis.len() {
                let s = s_polynomial(&basis[i], &basis[j], TermOrder::Global);
                assert!(normal_form(&s, &basis).is_zero(), "S({i},{j}) reduces");
            }
        }
        for g in &gens {
            assert!(normal_form(g, &basis).is_zero());
        }
    }

    #[test]
    fn local_basis_absorbs_higher_order_tail() {
        let vars = v(&["x", "y"]);
        let ideal = Ideal::local(vec![p("x^2+x^3", &vars), p("y", &vars)]).unwrap();
        let basis = standard_basis_local(&ideal, &budget()).unwrap();
        let leads: Vec<Monomial> = basis_leads(&basis.elements, TermOrder::Local);
        assert!(leads.contains(&Monomial(vec![2, 0])));
        assert!(leads.contains(&Monomial(vec![0, 1])));
        assert_eq!(leads.len(), 2);
    }

    #[test]
    fn local_basis_normalizes_units() {
        let vars = v(&["x", "y"]);
        let ideal = Ideal::local(vec![p("2*x", &vars), p("3*y^2", &vars)]).unwrap();
        let basis = standard_basis_local(&ideal, &budget()).unwrap();
        assert_eq!(basis.elements, vec![p("x", &vars), p("y^2", &vars)]);
    }

    #[test]
    fn colength_staircase_counts() {
        let vars = v(&["x", "y"]);
        let c = colength(
            &Ideal::local(vec![p("x^2", &vars), p("y^3", &vars)]).unwrap(),
            &budget(),
        )
        .unwrap();
        assert_eq!(c, Colength::Finite(6));

        let vars3 = v(&["x", "y", "z"]);
        let c = colength(
            &Ideal::local(vec![p("x", &vars3), p("y", &vars3), p("z", &vars3)]).unwrap(),
            &budget(),
        )
        .unwrap();
        assert_eq!(c, Colength::Finite(1));

        let c = colength(
            &Ideal::local(vec![p("x^2-y^3", &vars), p("y^2", &vars)]).unwrap(),
            &budget(),
        )
        .unwrap();
        assert_eq!(c, Colength::Finite(4));

        let c = colength(&Ideal::local(vec![p("x", &vars)]).unwrap(), &budget()).unwrap();
        assert_eq!(c, Colength::Infinite);
    }

    #[test]
    fn dimension_of_basic_ideals() {
        let vars = v(&["x", "y", "z"]);
        let d = ideal_dimension(&Ideal::global(vec![p("x", &vars)]).unwrap(), &budget()).unwrap();
        assert_eq!(d, Dimension::Dim(2));
        let d = ideal_dimension(
            &Ideal::global(vec![p("x", &vars), p("y", &vars), p("z", &vars)]).unwrap(),
            &budget(),
        )
        .unwrap();
        assert_eq!(d, Dimension::Dim(0));
        let one = Polynomial::one(&vars);
        let d = ideal_dimension(&Ideal::global(vec![one]).unwrap(), &budget()).unwrap();
        assert_eq!(d, Dimension::Empty);
    }

    #[test]
    fn dimension_of_determinantal_surface() {
        let vars = v(&["x", "y", "z", "w"]);
        let gens = vec![
            p("x*z-y^2", &vars),
            p("x*w-y*z", &vars),
            p("y*w-z^2", &vars),
        ];
        let d = ideal_dimension(&Ideal::global(gens).unwrap(), &budget()).unwrap();
        assert_eq!(d, Dimension::Dim(2));
    }

    #[test]
    fn milnor_numbers_of_classical_germs() {
        let vars = v(&["x", "y", "z"]);
        let mu = milnor_hypersurface(&p("x^2+y^2+z^2", &vars), true, &budget()).unwrap();
        assert_eq!(mu, Colength::Finite(1));
        let mu = milnor_hypersurface(&p("x^3+y^3+z^3", &vars), true, &budget()).unwrap();
        assert_eq!(mu, Colength::Finite(8));
        let vars2 = v(&["x", "y"]);
        let mu = milnor_hypersurface(&p("x^3+y^2", &vars2), true, &budget()).unwrap();
        assert_eq!(mu, Colength::Finite(2));
    }

    #[test]
    fn milnor_detects_line_singularity() {
        let vars = v(&["x", "y", "z"]);
        let mu = milnor_hypersurface(&p("x*z^2+y^2*z", &vars), true, &budget()).unwrap();
        assert_eq!(mu, Colength::Infinite);
    }

    #[test]
    fn milnor_global_counts_all_critical_points() {
        let vars = v(&["x"]);
        let f = p("x^3-x", &vars);
        assert_eq!(
            milnor_hypersurface(&f, false, &budget()).unwrap(),
            Colength::Finite(2)
        );
        let g = p("x^3-x^2", &vars);
        assert_eq!(
            milnor_hypersurface(&g, true, &budget()).unwrap(),
            Colength::Finite(1)
        );
    }

    #[test]
    fn le_greuel_matches_hand_computations() {
        let vars = v(&["x", "y", "z"]);
        let mu = milnor_icis_le_greuel(&[p("x^2+y^2+z^2", &vars)], &budget()).unwrap();
        assert_eq!(mu, 1);
        // Slicing the cone by x = 0 leaves the plane curve y^2 + z^2.
        let mu = milnor_icis_le_greuel(
            &[p("x^2+y^2+z^2", &vars), p("x", &vars)],
            &budget(),
        )
        .unwrap();
        assert_eq!(mu, 1);
        let vars2 = v(&["x", "y"]);
        let mu = milnor_icis_le_greuel(&[p("x", &vars2), p("y", &vars2)], &budget()).unwrap();
        assert_eq!(mu, 0);
    }

    #[test]
    fn singular_locus_of_smooth_hypersurface_is_empty() {
        let vars = v(&["x", "y"]);
        let gens = singular_locus_ideal(&[p("x", &vars)], 1);
        let d = ideal_dimension(&Ideal::global(gens).unwrap(), &budget()).unwrap();
        assert_eq!(d, Dimension::Empty);
    }

    #[test]
    fn singular_locus_of_cone_is_the_origin() {
        let vars = v(&["x", "y", "z"]);
        let gens = singular_locus_ideal(&[p("x^2+y^2+z^2", &vars)], 1);
        let d = ideal_dimension(&Ideal::global(gens).unwrap(), &budget()).unwrap();
        assert_eq!(d, Dimension::Dim(0));
    }

    #[test]
    fn singular_locus_of_chart_hypersurface_is_the_axis() {
        let vars = v(&["s", "x", "y", "z"]);
        let h = p("s^3*x^2+s^3*y^2-2*x*y+s*z^2", &vars);
        let gens = singular_locus_ideal(&[h], 1);
        let d = ideal_dimension(&Ideal::global(gens.clone()).unwrap(), &budget()).unwrap();
        assert_eq!(d, Dimension::Dim(1));
        for name in ["x", "y", "z"] {
            let g = p(name, &vars);
            assert!(
                radical_membership(&g, &gens, &budget()).unwrap(),
                "{name} vanishes on the singular locus"
            );
        }
        assert!(!radical_membership(&p("s", &vars), &gens, &budget()).unwrap());
    }

    #[test]
    fn radical_membership_basics() {
        let vars = v(&["x", "y"]);
        let gens = [p("x^2", &vars)];
        assert!(radical_membership(&p("x", &vars), &gens, &budget()).unwrap());
        assert!(!radical_membership(&p("y", &vars), &gens, &budget()).unwrap());
    }

    #[test]
    fn polar_curve_of_round_quadric() {
        let vars = v(&["x", "y"]);
        let f = p("x^2+y^2", &vars);
        let out = polar_curve(&f, &[], &[rat(0)], &budget()).unwrap();
        assert!(out.is_generic);
        assert_eq!(out.dimension, Dimension::Dim(1));
        // The single minor is a multiple of y.
        let gb = global_basis(&out.generators);
        assert_eq!(gb, vec![p("y", &vars)]);
    }

    #[test]
    fn polar_curve_with_nonzero_bend_is_empty_for_linear_f() {
        let vars = v(&["x", "y"]);
        let f = p("x", &vars);
        let out = polar_curve(&f, &[], &[rat(1)], &budget()).unwrap();
        assert!(out.is_generic);
        assert_eq!(out.dimension, Dimension::Empty);
    }

    #[test]
    fn standard_monomials_of_box_ideal() {
        let vars = v(&["x", "y"]);
        let gb = global_basis(&[p("x^2", &vars), p("y^3", &vars)]);
        let monos = standard_monomials(&gb, &vars).unwrap();
        assert_eq!(monos.len(), 6);
        assert!(monos.contains(&Monomial(vec![1, 2])));
    }

    #[test]
    fn rational_points_of_split_system() {
        let vars = v(&["x", "y"]);
        let out = rational_points(&[p("x^2-1", &vars), p("y-x", &vars)], &budget()).unwrap();
        assert_eq!(out.total_colength, 2);
        assert!(out.complete);
        let coords: Vec<Vec<Rational>> = out.points.iter().map(|pt| pt.coords.clone()).collect();
        assert!(coords.contains(&vec![rat(1), rat(1)]));
        assert!(coords.contains(&vec![rat(-1), rat(-1)]));
        assert!(out.points.iter().all(|pt| pt.multiplicity == 1));
    }

    #[test]
    fn rational_points_flags_irrational_locus() {
        let vars = v(&["x"]);
        let out = rational_points(&[p("x^2-2", &vars)], &budget()).unwrap();
        assert_eq!(out.total_colength, 2);
        assert!(out.points.is_empty());
        assert!(!out.complete);
    }

    #[test]
    fn rational_points_sees_multiplicity() {
        let vars = v(&["x", "y"]);
        let out = rational_points(&[p("x^2", &vars), p("y", &vars)], &budget()).unwrap();
        assert_eq!(out.total_colength, 2);
        assert!(out.complete);
        assert_eq!(out.points.len(), 1);
        assert_eq!(out.points[0].multiplicity, 2);
        assert_eq!(out.points[0].coords, vec![rat(0), rat(0)]);
    }

    #[test]
    fn budget_rejects_oversized_input() {
        let vars = v(&["x"]);
        let tight = Budget { max_degree: 1 };
        let err = groebner_basis(&Ideal::global(vec![p("x^2", &vars)]).unwrap(), &tight)
            .unwrap_err();
        assert!(matches!(err, IdealError::Resource { .. }));
    }

    #[test]
    fn ideals_equal_detects_reordered_generators() {
        let vars = v(&["x", "y"]);
        let a = [p("x+y", &vars), p("x-y", &vars)];
        let b = [p("x", &vars), p("y", &vars)];
        assert!(ideals_equal(&a, &b, &budget()).unwrap());
        let c = [p("x", &vars)];
        assert!(!ideals_equal(&a, &c, &budget()).unwrap());
    }

    #[test]
    fn operator_minpoly_on_nilpotent_block() {
        // Multiplication by x on k[x]/(x^3): basis 1, x, x^2.
        let vars = v(&["x"]);
        let gb = global_basis(&[p("x^3", &vars)]);
        let monos = standard_monomials(&gb, &vars).unwrap();
        let cols = multiplication_matrix(0, &gb, &monos, &vars);
        let mp = operator_minpoly(&cols, monos.len());
        assert_eq!(mp, vec![rat(0), rat(0), rat(0), rat(1)]);
    }
}
