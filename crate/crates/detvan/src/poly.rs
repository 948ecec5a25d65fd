//! Multivariate polynomials over the rationals.
//!
//! Coefficients are arbitrary-precision rationals and terms live in a
//! sparse map keyed by exponent vectors, so all arithmetic here is
//! exact. Monomials carry the graded reverse lexicographic order; the
//! local orders needed for standard bases are layered on top in
//! [`crate::ideal`] without changing the storage order.
//!
//! Every polynomial knows its ordered variable list. Operations
//! between polynomials require identical lists; mixing contexts is a
//! structural error rather than a silent coercion.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::sync::Arc;
use thiserror::Error;

/// Exact rational scalar used for every coefficient in the crate.
pub type Rational = BigRational;

/// Shorthand for an integer-valued rational.
pub fn rat(n: i64) -> Rational {
    BigRational::from_integer(BigInt::from(n))
}

/// Shorthand for the fraction `n/d`. Panics if `d` is zero.
pub fn ratio(n: i64, d: i64) -> Rational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum PolyError {
    #[error("duplicate variable name `{0}`")]
    DuplicateVariable(String),
    #[error("unknown variable `{0}`")]
    UnknownVariable(String),
    #[error("operands use different variable lists")]
    VariableMismatch,
    #[error("substitution binds `{0}` which is not a variable of the polynomial")]
    UnboundSubstitution(String),
    #[error("binding introduces foreign variable `{0}` colliding with an unbound variable")]
    BindingCollision(String),
    #[error("no value supplied for variable `{0}`")]
    MissingValue(String),
    #[error("polynomial is not univariate")]
    NotUnivariate,
    #[error("{0} is undefined for the zero polynomial")]
    ZeroInput(&'static str),
    #[error("integer factor search overflowed while looking for rational roots")]
    RootSearchOverflow,
}

/// Ordered list of variable names shared by all polynomials of one
/// context. Cloning is cheap; the list itself is immutable.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Vars(Arc<Vec<String>>);

impl Vars {
    pub fn new(names: &[&str]) -> Result<Self, PolyError> {
        Self::from_names(names.iter().map(|s| s.to_string()).collect())
    }

    pub fn from_names(names: Vec<String>) -> Result<Self, PolyError> {
        let mut seen = BTreeSet::new();
        for n in &names {
            if !seen.insert(n.clone()) {
                return Err(PolyError::DuplicateVariable(n.clone()));
            }
        }
        Ok(Vars(Arc::new(names)))
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn names(&self) -> &[String] {
        &self.0
    }

    pub fn name(&self, index: usize) -> &str {
        &self.0[index]
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.0.iter().position(|n| n == name)
    }

    /// New list with `extra` appended. Fails on duplicates.
    pub fn extended(&self, extra: &[&str]) -> Result<Self, PolyError> {
        let mut names: Vec<String> = self.0.as_ref().clone();
        names.extend(extra.iter().map(|s| s.to_string()));
        Self::from_names(names)
    }

    /// New list with the named variables removed, preserving order.
    pub fn without(&self, drop: &[&str]) -> Result<Self, PolyError> {
        for d in drop {
            if self.index_of(d).is_none() {
                return Err(PolyError::UnknownVariable(d.to_string()));
            }
        }
        let names: Vec<String> = self
            .0
            .iter()
            .filter(|n| !drop.contains(&n.as_str()))
            .cloned()
            .collect();
        Self::from_names(names)
    }
}

/// Exponent vector. The `Ord` impl is graded reverse lexicographic
/// (ascending), which makes the term map iterate from the smallest
/// monomial to the leading one.
#[derive(Clone, PartialEq, Eq, Debug, Hash)]
pub struct Monomial(pub Vec<u32>);

impl Monomial {
    pub fn one(arity: usize) -> Self {
        Monomial(vec![0; arity])
    }

    pub fn var(arity: usize, index: usize) -> Self {
        let mut e = vec![0; arity];
        e[index] = 1;
        Monomial(e)
    }

    pub fn degree(&self) -> u64 {
        self.0.iter().map(|&e| e as u64).sum()
    }

    pub fn is_one(&self) -> bool {
        self.0.iter().all(|&e| e == 0)
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        debug_assert_eq!(self.0.len(), other.0.len());
        Monomial(
            self.0
                .iter()
                .zip(&other.0)
                .map(|(a, b)| a.checked_add(*b).expect("exponent overflow"))
                .collect(),
        )
    }

    pub fn divides(&self, other: &Monomial) -> bool {
        self.0.iter().zip(&other.0).all(|(a, b)| a <= b)
    }

    /// Exact quotient; caller must have checked divisibility.
    pub fn div(&self, other: &Monomial) -> Monomial {
        debug_assert!(other.divides(self));
        Monomial(self.0.iter().zip(&other.0).map(|(a, b)| a - b).collect())
    }

    pub fn lcm(&self, other: &Monomial) -> Monomial {
        Monomial(
            self.0
                .iter()
                .zip(&other.0)
                .map(|(a, b)| *a.max(b))
                .collect(),
        )
    }

    pub fn gcd(&self, other: &Monomial) -> Monomial {
        Monomial(
            self.0
                .iter()
                .zip(&other.0)
                .map(|(a, b)| *a.min(b))
                .collect(),
        )
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        use std::cmp::Ordering;
        debug_assert_eq!(self.0.len(), other.0.len());
        match self.degree().cmp(&other.degree()) {
            Ordering::Equal => {}
            ord => return ord,
        }
        // Reverse lexicographic tie break: scanning exponents from the
        // last variable backwards, the monomial with the smaller
        // exponent at the first difference is the larger one.
        for i in (0..self.0.len()).rev() {
            match self.0[i].cmp(&other.0[i]) {
                Ordering::Equal => continue,
                Ordering::Less => return Ordering::Greater,
                Ordering::Greater => return Ordering::Less,
            }
        }
        Ordering::Equal
    }
}

/// Sparse polynomial with rational coefficients. The term map never
/// stores zero coefficients, so `terms.is_empty()` iff the polynomial
/// is zero, and structural equality is semantic equality.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Polynomial {
    vars: Vars,
    terms: BTreeMap<Monomial, Rational>,
}

impl Polynomial {
    pub fn zero(vars: &Vars) -> Self {
        Polynomial {
            vars: vars.clone(),
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(vars: &Vars, c: Rational) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(Monomial::one(vars.len()), c);
        }
        Polynomial {
            vars: vars.clone(),
            terms,
        }
    }

    pub fn one(vars: &Vars) -> Self {
        Self::constant(vars, Rational::one())
    }

    pub fn variable(vars: &Vars, name: &str) -> Result<Self, PolyError> {
        let idx = vars
            .index_of(name)
            .ok_or_else(|| PolyError::UnknownVariable(name.to_string()))?;
        let mut terms = BTreeMap::new();
        terms.insert(Monomial::var(vars.len(), idx), Rational::one());
        Ok(Polynomial {
            vars: vars.clone(),
            terms,
        })
    }

    pub fn from_terms(
        vars: &Vars,
        terms: impl IntoIterator<Item = (Monomial, Rational)>,
    ) -> Self {
        let mut map: BTreeMap<Monomial, Rational> = BTreeMap::new();
        for (m, c) in terms {
            debug_assert_eq!(m.0.len(), vars.len());
            if c.is_zero() {
                continue;
            }
            let entry = map.entry(m).or_insert_with(Rational::zero);
            *entry += c;
        }
        map.retain(|_, c| !c.is_zero());
        Polynomial {
            vars: vars.clone(),
            terms: map,
        }
    }

    pub fn vars(&self) -> &Vars {
        &self.vars
    }

    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&Monomial, &Rational)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_constant(&self) -> bool {
        self.terms.is_empty() || (self.terms.len() == 1 && self.terms.keys().next().unwrap().is_one())
    }

    pub fn constant_value(&self) -> Option<Rational> {
        if self.terms.is_empty() {
            return Some(Rational::zero());
        }
        if self.is_constant() {
            return Some(self.terms.values().next().unwrap().clone());
        }
        None
    }

    /// Constant term of the polynomial (its value at the origin).
    pub fn constant_term(&self) -> Rational {
        self.terms
            .get(&Monomial::one(self.vars.len()))
            .cloned()
            .unwrap_or_else(Rational::zero)
    }

    pub fn coefficient(&self, m: &Monomial) -> Rational {
        self.terms.get(m).cloned().unwrap_or_else(Rational::zero)
    }

    /// Total degree; `None` for the zero polynomial.
    pub fn total_degree(&self) -> Option<u64> {
        self.terms.keys().map(|m| m.degree()).max()
    }

    /// Degree in a single variable; `None` for the zero polynomial.
    pub fn degree_in(&self, var: usize) -> Option<u64> {
        self.terms.keys().map(|m| m.0[var] as u64).max()
    }

    /// Indices of variables occurring with positive exponent.
    pub fn occurring_vars(&self) -> BTreeSet<usize> {
        let mut set = BTreeSet::new();
        for m in self.terms.keys() {
            for (i, &e) in m.0.iter().enumerate() {
                if e > 0 {
                    set.insert(i);
                }
            }
        }
        set
    }

    fn check_same_vars(&self, other: &Polynomial) -> Result<(), PolyError> {
        if self.vars == other.vars {
            Ok(())
        } else {
            Err(PolyError::VariableMismatch)
        }
    }

    pub fn checked_add(&self, other: &Polynomial) -> Result<Polynomial, PolyError> {
        self.check_same_vars(other)?;
        let mut terms = self.terms.clone();
        for (m, c) in &other.terms {
            let entry = terms.entry(m.clone()).or_insert_with(Rational::zero);
            *entry += c;
        }
        terms.retain(|_, c| !c.is_zero());
        Ok(Polynomial {
            vars: self.vars.clone(),
            terms,
        })
    }

    pub fn checked_sub(&self, other: &Polynomial) -> Result<Polynomial, PolyError> {
        self.checked_add(&other.neg())
    }

    pub fn neg(&self) -> Polynomial {
        Polynomial {
            vars: self.vars.clone(),
            terms: self
                .terms
                .iter()
                .map(|(m, c)| (m.clone(), -c.clone()))
                .collect(),
        }
    }

    pub fn scale(&self, c: &Rational) -> Polynomial {
        if c.is_zero() {
            return Polynomial::zero(&self.vars);
        }
        Polynomial {
            vars: self.vars.clone(),
            terms: self
                .terms
                .iter()
                .map(|(m, k)| (m.clone(), k * c))
                .collect(),
        }
    }

    /// Multiply by a single term `c * m`.
    pub fn mul_term(&self, m: &Monomial, c: &Rational) -> Polynomial {
        if c.is_zero() {
            return Polynomial::zero(&self.vars);
        }
        Polynomial {
            vars: self.vars.clone(),
            terms: self
                .terms
                .iter()
                .map(|(k, v)| (k.mul(m), v * c))
                .collect(),
        }
    }

    pub fn checked_mul(&self, other: &Polynomial) -> Result<Polynomial, PolyError> {
        self.check_same_vars(other)?;
        let mut terms: BTreeMap<Monomial, Rational> = BTreeMap::new();
        for (m1, c1) in &self.terms {
            for (m2, c2) in &other.terms {
                let m = m1.mul(m2);
                let entry = terms.entry(m).or_insert_with(Rational::zero);
                *entry += c1 * c2;
            }
        }
        terms.retain(|_, c| !c.is_zero());
        Ok(Polynomial {
            vars: self.vars.clone(),
            terms,
        })
    }

    pub fn pow(&self, e: u32) -> Polynomial {
        let mut acc = Polynomial::one(&self.vars);
        for _ in 0..e {
            acc = acc.checked_mul(self).expect("same context");
        }
        acc
    }

    /// Partial derivative with respect to the variable at `var`.
    pub fn differentiate(&self, var: usize) -> Polynomial {
        let mut terms: BTreeMap<Monomial, Rational> = BTreeMap::new();
        for (m, c) in &self.terms {
            let e = m.0[var];
            if e == 0 {
                continue;
            }
            let mut exps = m.0.clone();
            exps[var] = e - 1;
            let coeff = c * Rational::from_integer(BigInt::from(e));
            let entry = terms.entry(Monomial(exps)).or_insert_with(Rational::zero);
            *entry += coeff;
        }
        terms.retain(|_, c| !c.is_zero());
        Polynomial {
            vars: self.vars.clone(),
            terms,
        }
    }

    pub fn differentiate_name(&self, name: &str) -> Result<Polynomial, PolyError> {
        let idx = self
            .vars
            .index_of(name)
            .ok_or_else(|| PolyError::UnknownVariable(name.to_string()))?;
        Ok(self.differentiate(idx))
    }

    /// Re-express the polynomial over `target`, which must contain
    /// every variable that actually occurs. Variables missing from
    /// `target` may only be dropped if they do not occur.
    pub fn restrict_vars(&self, target: &Vars) -> Result<Polynomial, PolyError> {
        let mut map = Vec::with_capacity(self.vars.len());
        for (i, name) in self.vars.names().iter().enumerate() {
            let slot = target.index_of(name);
            if slot.is_none() {
                let occurs = self.terms.keys().any(|m| m.0[i] > 0);
                if occurs {
                    return Err(PolyError::UnknownVariable(name.clone()));
                }
            }
            map.push(slot);
        }
        let mut terms: BTreeMap<Monomial, Rational> = BTreeMap::new();
        for (m, c) in &self.terms {
            let mut exps = vec![0u32; target.len()];
            for (i, &e) in m.0.iter().enumerate() {
                if e > 0 {
                    exps[map[i].unwrap()] = e;
                }
            }
            terms.insert(Monomial(exps), c.clone());
        }
        Ok(Polynomial {
            vars: target.clone(),
            terms,
        })
    }

    /// Simultaneous substitution of polynomials for variables.
    ///
    /// Bindings whose values share this polynomial's variable list are
    /// identified with it by name. Values from a foreign context may
    /// only mention fresh names: a foreign variable whose name equals
    /// one of this polynomial's variables would silently capture it,
    /// and is rejected instead. The result lives over the original
    /// list extended by whatever fresh names the bindings introduce.
    pub fn substitute(
        &self,
        bindings: &BTreeMap<String, Polynomial>,
    ) -> Result<Polynomial, PolyError> {
        if bindings.is_empty() {
            return Ok(self.clone());
        }
        for name in bindings.keys() {
            if self.vars.index_of(name).is_none() {
                return Err(PolyError::UnboundSubstitution(name.clone()));
            }
        }
        // Collect fresh names introduced by foreign-context values.
        let mut fresh: Vec<String> = Vec::new();
        for value in bindings.values() {
            if value.vars == self.vars {
                continue;
            }
            for &vi in value.occurring_vars().iter() {
                let name = value.vars.name(vi);
                if self.vars.index_of(name).is_some() {
                    return Err(PolyError::BindingCollision(name.to_string()));
                }
                if !fresh.iter().any(|f| f == name) {
                    fresh.push(name.to_string());
                }
            }
        }
        let fresh_refs: Vec<&str> = fresh.iter().map(|s| s.as_str()).collect();
        let target = self.vars.extended(&fresh_refs)?;

        // Image of each variable in the target context.
        let mut images: Vec<Polynomial> = Vec::with_capacity(self.vars.len());
        for name in self.vars.names() {
            let image = match bindings.get(name) {
                Some(value) => value.restrict_vars(&target)?,
                None => Polynomial::variable(&target, name)?,
            };
            images.push(image);
        }

        let mut acc = Polynomial::zero(&target);
        for (m, c) in &self.terms {
            let mut term = Polynomial::constant(&target, c.clone());
            for (i, &e) in m.0.iter().enumerate() {
                if e > 0 {
                    term = term.checked_mul(&images[i].pow(e))?;
                }
            }
            acc = acc.checked_add(&term)?;
        }
        Ok(acc)
    }

    /// Substitute a single variable.
    pub fn substitute_one(&self, name: &str, value: &Polynomial) -> Result<Polynomial, PolyError> {
        let mut b = BTreeMap::new();
        b.insert(name.to_string(), value.clone());
        self.substitute(&b)
    }

    /// Exact evaluation; every variable must receive a value.
    pub fn evaluate(&self, values: &BTreeMap<String, Rational>) -> Result<Rational, PolyError> {
        for name in self.vars.names() {
            if !values.contains_key(name) {
                return Err(PolyError::MissingValue(name.clone()));
            }
        }
        let point: Vec<&Rational> = self
            .vars
            .names()
            .iter()
            .map(|n| values.get(n).unwrap())
            .collect();
        let mut acc = Rational::zero();
        for (m, c) in &self.terms {
            let mut t = c.clone();
            for (i, &e) in m.0.iter().enumerate() {
                for _ in 0..e {
                    t *= point[i];
                }
            }
            acc += t;
        }
        Ok(acc)
    }

    /// Largest term in graded reverse lexicographic order.
    pub fn leading(&self) -> Option<(&Monomial, &Rational)> {
        self.terms.iter().next_back()
    }

    /// Rescale so the graded reverse lexicographic leading coefficient
    /// is one. `None` for the zero polynomial.
    pub fn monic(&self) -> Option<Polynomial> {
        let (_, lc) = self.leading()?;
        let inv = lc.recip();
        Some(self.scale(&inv))
    }

    /// Integer-normalized form: multiplied by the positive rational
    /// that makes all coefficients coprime integers with a positive
    /// leading coefficient. Keeps Groebner arithmetic small.
    pub fn primitive_integer(&self) -> Polynomial {
        if self.is_zero() {
            return self.clone();
        }
        let mut denom_lcm = BigInt::one();
        for c in self.terms.values() {
            denom_lcm = denom_lcm.lcm(c.denom());
        }
        let mut numer_gcd = BigInt::zero();
        for c in self.terms.values() {
            let scaled = c * Rational::from_integer(denom_lcm.clone());
            debug_assert!(scaled.is_integer());
            numer_gcd = numer_gcd.gcd(scaled.numer());
        }
        let mut factor = Rational::new(denom_lcm, numer_gcd);
        if self.leading().map(|(_, c)| c.is_negative()).unwrap_or(false) {
            factor = -factor;
        }
        self.scale(&factor)
    }
}

impl fmt::Display for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for (m, c) in self.terms.iter().rev() {
            let negative = c.is_negative();
            let mag = c.abs();
            if first {
                if negative {
                    write!(f, "-")?;
                }
                first = false;
            } else if negative {
                write!(f, "-")?;
            } else {
                write!(f, "+")?;
            }
            let mut factors: Vec<String> = Vec::new();
            if !mag.is_one() || m.is_one() {
                if mag.is_integer() {
                    factors.push(mag.numer().to_string());
                } else {
                    factors.push(format!("{}/{}", mag.numer(), mag.denom()));
                }
            }
            for (i, &e) in m.0.iter().enumerate() {
                match e {
                    0 => {}
                    1 => factors.push(self.vars.name(i).to_string()),
                    _ => factors.push(format!("{}^{}", self.vars.name(i), e)),
                }
            }
            write!(f, "{}", factors.join("*"))?;
        }
        Ok(())
    }
}

/// Dense ascending coefficient vector of a polynomial that involves no
/// variable other than `var`. Trailing zeros are trimmed.
pub fn to_univariate(p: &Polynomial, var: usize) -> Result<Vec<Rational>, PolyError> {
    let occ = p.occurring_vars();
    if occ.iter().any(|&v| v != var) {
        return Err(PolyError::NotUnivariate);
    }
    let deg = p.degree_in(var).unwrap_or(0) as usize;
    let mut coeffs = vec![Rational::zero(); deg + 1];
    for (m, c) in p.terms() {
        coeffs[m.0[var] as usize] = c.clone();
    }
    while coeffs.last().map(|c| c.is_zero()).unwrap_or(false) {
        coeffs.pop();
    }
    Ok(coeffs)
}

pub fn from_univariate(vars: &Vars, var: usize, coeffs: &[Rational]) -> Polynomial {
    Polynomial::from_terms(
        vars,
        coeffs.iter().enumerate().map(|(i, c)| {
            let mut exps = vec![0u32; vars.len()];
            exps[var] = i as u32;
            (Monomial(exps), c.clone())
        }),
    )
}

/// The variable a univariate polynomial lives in, if it has exactly
/// one occurring variable.
fn sole_var(p: &Polynomial) -> Result<Option<usize>, PolyError> {
    let occ = p.occurring_vars();
    match occ.len() {
        0 => Ok(None),
        1 => Ok(Some(*occ.iter().next().unwrap())),
        _ => Err(PolyError::NotUnivariate),
    }
}

pub(crate) fn dense_deg(c: &[Rational]) -> Option<usize> {
    if c.is_empty() {
        None
    } else {
        Some(c.len() - 1)
    }
}

pub(crate) fn dense_trim(c: &mut Vec<Rational>) {
    while c.last().map(|x| x.is_zero()).unwrap_or(false) {
        c.pop();
    }
}

/// Euclidean remainder of dense univariate polynomials.
pub(crate) fn dense_rem(a: &[Rational], b: &[Rational]) -> Vec<Rational> {
    let db = dense_deg(b).expect("division by zero polynomial");
    let mut r: Vec<Rational> = a.to_vec();
    dense_trim(&mut r);
    let lead = b[db].clone();
    while dense_deg(&r).map(|d| d >= db).unwrap_or(false) {
        let dr = r.len() - 1;
        let q = &r[dr] / &lead;
        let shift = dr - db;
        for i in 0..=db {
            let delta = &q * &b[i];
            r[i + shift] -= delta;
        }
        dense_trim(&mut r);
    }
    r
}

/// Exact quotient of dense univariate polynomials; panics if the
/// division leaves a remainder (internal use only).
pub(crate) fn dense_div_exact(a: &[Rational], b: &[Rational]) -> Vec<Rational> {
    let db = dense_deg(b).expect("division by zero polynomial");
    let mut r: Vec<Rational> = a.to_vec();
    dense_trim(&mut r);
    let mut q = vec![Rational::zero(); r.len().saturating_sub(db)];
    let lead = b[db].clone();
    while dense_deg(&r).map(|d| d >= db).unwrap_or(false) {
        let dr = r.len() - 1;
        let c = &r[dr] / &lead;
        let shift = dr - db;
        q[shift] = c.clone();
        for i in 0..=db {
            let delta = &c * &b[i];
            r[i + shift] -= delta;
        }
        dense_trim(&mut r);
    }
    assert!(r.is_empty(), "inexact univariate division");
    q
}

pub(crate) fn dense_monic(c: &mut [Rational]) {
    if let Some(d) = dense_deg(c) {
        let inv = c[d].recip();
        for x in c.iter_mut() {
            *x *= &inv;
        }
    }
}

pub(crate) fn dense_derivative(c: &[Rational]) -> Vec<Rational> {
    let mut d: Vec<Rational> = c
        .iter()
        .enumerate()
        .skip(1)
        .map(|(i, x)| x * Rational::from_integer(BigInt::from(i)))
        .collect();
    dense_trim(&mut d);
    d
}

pub(crate) fn dense_gcd(a: &[Rational], b: &[Rational]) -> Vec<Rational> {
    let mut x: Vec<Rational> = a.to_vec();
    let mut y: Vec<Rational> = b.to_vec();
    dense_trim(&mut x);
    dense_trim(&mut y);
    while !y.is_empty() {
        let r = dense_rem(&x, &y);
        x = y;
        y = r;
    }
    dense_monic(&mut x);
    x
}

/// Monic greatest common divisor of two univariate polynomials in the
/// same variable. Constants count as univariate in any variable;
/// `gcd(p, 0)` is the monic multiple of `p`. Both inputs zero is a
/// domain error.
pub fn gcd_uni(p: &Polynomial, q: &Polynomial) -> Result<Polynomial, PolyError> {
    if p.vars() != q.vars() {
        return Err(PolyError::VariableMismatch);
    }
    if p.is_zero() && q.is_zero() {
        return Err(PolyError::ZeroInput("gcd"));
    }
    if p.is_zero() {
        return Ok(q.monic().unwrap());
    }
    if q.is_zero() {
        return Ok(p.monic().unwrap());
    }
    let vp = sole_var(p)?;
    let vq = sole_var(q)?;
    let var = match (vp, vq) {
        (Some(a), Some(b)) if a != b => return Err(PolyError::NotUnivariate),
        (Some(a), _) => a,
        (None, Some(b)) => b,
        (None, None) => return Ok(Polynomial::one(p.vars())),
    };
    let a = to_univariate(p, var)?;
    let b = to_univariate(q, var)?;
    let g = dense_gcd(&a, &b);
    Ok(from_univariate(p.vars(), var, &g))
}

/// Squarefree decomposition of a univariate polynomial by Yun's
/// algorithm: returns monic pairwise coprime squarefree factors with
/// multiplicities such that the input equals its leading coefficient
/// times the product of `factor^multiplicity`.
pub fn squarefree_decompose(p: &Polynomial) -> Result<Vec<(Polynomial, u32)>, PolyError> {
    if p.is_zero() {
        return Err(PolyError::ZeroInput("squarefree decomposition"));
    }
    let var = match sole_var(p)? {
        Some(v) => v,
        None => return Ok(Vec::new()), // nonzero constant: unit times empty product
    };
    let mut f = to_univariate(p, var)?;
    dense_monic(&mut f);
    let fp = dense_derivative(&f);
    let g = dense_gcd(&f, &fp);
    let mut result: Vec<(Polynomial, u32)> = Vec::new();
    let mut b = dense_div_exact(&f, &g);
    let c = dense_div_exact(&fp, &g);
    let mut d = {
        let bp = dense_derivative(&b);
        dense_sub(&c, &bp)
    };
    let mut i: u32 = 1;
    while dense_deg(&b).map(|deg| deg > 0).unwrap_or(false) {
        let a = dense_gcd(&b, &d);
        if dense_deg(&a).map(|deg| deg > 0).unwrap_or(false) {
            result.push((from_univariate(p.vars(), var, &a), i));
        }
        b = dense_div_exact(&b, &a);
        let c_next = dense_div_exact(&d, &a);
        let bp = dense_derivative(&b);
        d = dense_sub(&c_next, &bp);
        i += 1;
    }
    Ok(result)
}

pub(crate) fn dense_sub(a: &[Rational], b: &[Rational]) -> Vec<Rational> {
    let n = a.len().max(b.len());
    let mut out = vec![Rational::zero(); n];
    for (i, x) in a.iter().enumerate() {
        out[i] += x;
    }
    for (i, x) in b.iter().enumerate() {
        out[i] -= x;
    }
    dense_trim(&mut out);
    out
}

/// All rational roots of a univariate polynomial, without
/// multiplicities. Errors if the integer factor enumeration would have
/// to walk divisors of an integer above the search bound.
pub fn rational_roots(p: &Polynomial) -> Result<Vec<Rational>, PolyError> {
    if p.is_zero() {
        return Err(PolyError::ZeroInput("root search"));
    }
    let var = match sole_var(p)? {
        Some(v) => v,
        None => return Ok(Vec::new()),
    };
    let coeffs = to_univariate(p, var)?;
    // Clear denominators to a primitive integer polynomial.
    let mut denom_lcm = BigInt::one();
    for c in &coeffs {
        denom_lcm = denom_lcm.lcm(c.denom());
    }
    let ints: Vec<BigInt> = coeffs
        .iter()
        .map(|c| (c * Rational::from_integer(denom_lcm.clone())).to_integer())
        .collect();
    let mut roots: Vec<Rational> = Vec::new();
    // Strip the power of the variable: zero is a root iff it remains.
    let low = ints.iter().position(|c| !c.is_zero()).unwrap();
    if low > 0 {
        roots.push(Rational::zero());
    }
    let reduced = &ints[low..];
    if reduced.len() == 1 {
        return Ok(roots);
    }
    let a0 = reduced[0].magnitude().clone();
    let an = reduced[reduced.len() - 1].magnitude().clone();
    let bound = num_bigint::BigUint::from(10u64).pow(9);
    if a0 > bound || an > bound {
        return Err(PolyError::RootSearchOverflow);
    }
    let ps = small_divisors(u128::try_from(&a0).unwrap());
    let qs = small_divisors(u128::try_from(&an).unwrap());
    for p_div in &ps {
        for q_div in &qs {
            for sign in [1i64, -1] {
                let cand = Rational::new(
                    BigInt::from(*p_div as i128) * BigInt::from(sign),
                    BigInt::from(*q_div as i128),
                );
                if roots.contains(&cand) {
                    continue;
                }
                let mut acc = Rational::zero();
                for c in reduced.iter().rev() {
                    acc = acc * &cand + Rational::from_integer(c.clone());
                }
                if acc.is_zero() {
                    roots.push(cand);
                }
            }
        }
    }
    roots.sort();
    Ok(roots)
}

/// Positive divisors by trial division; inputs come pre-bounded.
fn small_divisors(n: u128) -> Vec<u128> {
    let mut divs = Vec::new();
    let mut d = 1u128;
    while d * d <= n {
        if n % d == 0 {
            divs.push(d);
            if d != n / d {
                divs.push(n / d);
            }
        }
        d += 1;
    }
    divs.sort_unstable();
    divs
}
