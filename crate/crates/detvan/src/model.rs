//! The determinantal model and its geometry: the 3 x 2 matrix, its
//! minors, the two charts of the Tjurina transform, rank-1
//! perturbations, chart reduction to a hypersurface, the quadratic
//! family along the exceptional line, its degeneracy points and the
//! axis point.
//!
//! Everything here is chart-level symbolic geometry; the homology
//! bookkeeping lives in `abelian` and the orchestration in
//! `pipeline`.

use crate::ideal::{
    colength, ideal_dimension, ideals_equal, matrix_minors, singular_locus_ideal, Budget,
    Colength, Dimension, Ideal, IdealError, TermOrder,
};
use crate::parse::ModelFile;
use crate::poly::{
    dense_deg, dense_div_exact, dense_gcd, dense_monic, dense_rem, dense_sub, dense_trim,
    squarefree_decompose, to_univariate, PolyError, Polynomial, Rational, Vars,
};
use num_traits::{One, Zero};
use rand::Rng;
use rand_chacha::{rand_core::SeedableRng, ChaCha8Rng};
use std::collections::BTreeMap;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum ModelError {
    #[error("matrix must be 3 x 2, got {rows} x {cols}")]
    Shape { rows: usize, cols: usize },
    #[error("matrix entry ({row},{col}) does not vanish at the origin")]
    EntryNotVanishing { row: usize, col: usize },
    #[error("vanishing locus of the minors has dimension {got}, expected {expected}")]
    WrongCodimension { expected: u32, got: String },
    #[error("not smoothable: {n} ambient variables is not < 6")]
    NotSmoothable { n: usize },
    #[error("no pair of equations is unit-linear in two distinct variables")]
    NotReducible,
    #[error("elimination changed the chart ideal")]
    ReductionMismatch,
    #[error("hypersurface is not a quadratic form in the transversal variables")]
    NotQuadratic,
    #[error("determinant of the quadratic family vanishes identically")]
    DegenerateFamily,
    #[error("genericity check failed: {reason}")]
    NeedsReseed { reason: String },
    #[error("residual singularity at the axis is not isolated")]
    NonIsolatedAxis,
    #[error("axis Milnor number needs the perturbed equation, which the elimination consumed")]
    AxisDeltaUnavailable,
    #[error(transparent)]
    Ideal(#[from] IdealError),
    #[error(transparent)]
    Poly(#[from] PolyError),
}

/// Chart coordinate names on the exceptional line; reserved by the
/// parser so model variables can never collide with them.
pub const CHART_COORDS: [&str; 2] = ["s", "t"];

/// A 3 x 2 polynomial matrix whose 2 x 2 minors cut out the
/// singularity. All entries vanish at the origin.
#[derive(Clone, Debug, PartialEq)]
pub struct DetModel {
    vars: Vars,
    matrix: Vec<Vec<Polynomial>>,
}

impl DetModel {
    pub fn new(vars: Vars, matrix: Vec<Vec<Polynomial>>) -> Result<Self, ModelError> {
        let rows = matrix.len();
        let cols = matrix.first().map(|r| r.len()).unwrap_or(0);
        if rows != 3 || matrix.iter().any(|r| r.len() != 2) {
            return Err(ModelError::Shape { rows, cols });
        }
        for (i, row) in matrix.iter().enumerate() {
            for (j, entry) in row.iter().enumerate() {
                if !entry.constant_term().is_zero() {
                    return Err(ModelError::EntryNotVanishing { row: i, col: j });
                }
            }
        }
        Ok(DetModel { vars, matrix })
    }

    pub fn from_file(file: &ModelFile) -> Result<Self, ModelError> {
        Self::new(file.vars.clone(), file.matrix.clone())
    }

    pub fn vars(&self) -> &Vars {
        &self.vars
    }

    pub fn matrix(&self) -> &[Vec<Polynomial>] {
        &self.matrix
    }

    pub fn ambient_dim(&self) -> usize {
        self.vars.len()
    }

    /// The three 2 x 2 minors, rows (0,1), (0,2), (1,2).
    pub fn minors(&self) -> Vec<Polynomial> {
        matrix_minors(&self.matrix, 2)
    }

    /// Right multiplication by a constant 2 x 2 matrix: a coordinate
    /// change on the projective line. Scales the minors by the
    /// determinant, so the singularity is unchanged.
    pub fn column_mixed(&self, m: &[[Rational; 2]; 2]) -> DetModel {
        let matrix = self
            .matrix
            .iter()
            .map(|row| {
                (0..2)
                    .map(|j| {
                        let a = row[0].scale(&m[0][j]);
                        let b = row[1].scale(&m[1][j]);
                        a.checked_add(&b).expect("same variable context")
                    })
                    .collect()
            })
            .collect();
        DetModel {
            vars: self.vars.clone(),
            matrix,
        }
    }

    /// Left multiplication by a constant 3 x 3 matrix; for unimodular
    /// factors this is the presentation ambiguity of the ideal.
    pub fn row_mixed(&self, u: &[[Rational; 3]; 3]) -> DetModel {
        let matrix = (0..3)
            .map(|i| {
                (0..2)
                    .map(|j| {
                        let mut acc = Polynomial::zero(&self.vars);
                        for (k, row) in self.matrix.iter().enumerate() {
                            acc = acc
                                .checked_add(&row[j].scale(&u[i][k]))
                                .expect("same variable context");
                        }
                        acc
                    })
                    .collect()
            })
            .collect();
        DetModel {
            vars: self.vars.clone(),
            matrix,
        }
    }
}

/// What model validation measures.
#[derive(Clone, Debug)]
pub struct ValidationReport {
    pub minors: Vec<Polynomial>,
    /// Dimension of the vanishing locus of the minors.
    pub dimension: Dimension,
    pub expected_dimension: u32,
    /// Strict bound: fewer ambient variables than the codimension 6
    /// of the rank-0 stratum of 3 x 2 matrices.
    pub smoothable: bool,
    /// Dimension of the singular locus of the vanishing locus.
    pub singular_dimension: Dimension,
    pub isolated: bool,
}

/// Checks expected codimension, smoothability and isolatedness.
/// Wrong codimension is a hard rejection; the other two verdicts are
/// reported for the caller to act on.
pub fn validate_model(model: &DetModel, budget: &Budget) -> Result<ValidationReport, ModelError> {
    let minors = model.minors();
    let n = model.ambient_dim() as u32;
    let expected = n.saturating_sub(2);
    let dimension = ideal_dimension(&Ideal::global(minors.clone())?, budget)?;
    if dimension != Dimension::Dim(expected) {
        return Err(ModelError::WrongCodimension {
            expected,
            got: dimension.to_string(),
        });
    }
    let sing = singular_locus_ideal(&minors, 2);
    let singular_dimension = ideal_dimension(&Ideal::global(sing)?, budget)?;
    let isolated = matches!(singular_dimension, Dimension::Empty | Dimension::Dim(0));
    Ok(ValidationReport {
        minors,
        dimension,
        expected_dimension: expected,
        smoothable: model.ambient_dim() < 6,
        singular_dimension,
        isolated,
    })
}

/// One affine chart of the Tjurina transform, cut out in the ambient
/// space times the chart coordinate by the matrix-vector equations.
#[derive(Clone, Debug)]
pub struct Chart {
    pub index: u8,
    pub coordinate: String,
    /// Ambient variables extended by the chart coordinate.
    pub vars: Vars,
    pub equations: Vec<Polynomial>,
    /// Present after reduction: the single equation in the variables
    /// that survive elimination.
    pub hypersurface: Option<Polynomial>,
    /// Which original equation the hypersurface came from.
    pub hypersurface_row: Option<usize>,
    /// Eliminated variables, each expressed in the surviving ones.
    pub eliminated: BTreeMap<String, Polynomial>,
}

impl Chart {
    /// The local form of the rank-1 perturbation section over the
    /// reduced variables: constant 1 on chart 0, the coordinate on
    /// chart 1 (the section vanishes at the axis point there).
    pub fn delta_section(&self) -> Result<Option<Polynomial>, ModelError> {
        let Some(h) = &self.hypersurface else {
            return Ok(None);
        };
        let section = if self.index == 0 {
            Polynomial::one(h.vars())
        } else {
            Polynomial::variable(h.vars(), &self.coordinate)?
        };
        Ok(Some(section))
    }
}

/// Chart `index` of the Tjurina transform: the equations
/// `A * (1, s)` for chart 0 and `A * (t, 1)` for chart 1.
pub fn tjurina_chart(model: &DetModel, index: u8) -> Result<Chart, ModelError> {
    assert!(index < 2, "the projective line has two charts");
    let coordinate = CHART_COORDS[index as usize].to_string();
    let vars = model.vars().extended(&[&coordinate])?;
    let coord = Polynomial::variable(&vars, &coordinate)?;
    let equations = model
        .matrix()
        .iter()
        .map(|row| {
            let a = row[0].restrict_vars(&vars)?;
            let b = row[1].restrict_vars(&vars)?;
            if index == 0 {
                a.checked_add(&b.checked_mul(&coord)?)
            } else {
                a.checked_mul(&coord)?.checked_add(&b)
            }
            .map_err(ModelError::from)
        })
        .collect::<Result<Vec<_>, _>>()?;
    Ok(Chart {
        index,
        coordinate,
        vars,
        equations,
        hypersurface: None,
        hypersurface_row: None,
        eliminated: BTreeMap::new(),
    })
}

/// The rank-1 perturbation in its normal form. After the seeded
/// column mix, the perturbing matrix is always the elementary matrix
/// with 1 in position (3,1), so the section vanishes exactly at the
/// axis point, chart-1 coordinate 0: the third chart-0 equation is
/// perturbed by the constant delta, the third chart-1 equation by
/// delta times the coordinate.
#[derive(Clone, Debug, PartialEq)]
pub struct Perturbation {
    /// Coordinate change on the projective line that realized the
    /// normal form; identity on attempt 0.
    pub column_mix: [[Rational; 2]; 2],
    pub attempt: u32,
    pub axis_chart: u8,
    pub axis_value: Rational,
}

fn mix_determinant(m: &[[Rational; 2]; 2]) -> Rational {
    &m[0][0] * &m[1][1] - &m[0][1] * &m[1][0]
}

/// Deterministic per (seed, attempt): attempt 0 keeps the given
/// coordinates, later attempts mix the columns by a seeded invertible
/// integer matrix. Returns the mixed model together with the
/// perturbation record; the caller re-runs the chart analysis on the
/// mixed model and reseeds on collision.
pub fn generic_rank1_perturbation(
    model: &DetModel,
    seed: u64,
    attempt: u32,
) -> (DetModel, Perturbation) {
    let one = Rational::one();
    let zero = Rational::zero();
    let mix: [[Rational; 2]; 2] = if attempt == 0 {
        [[one.clone(), zero.clone()], [zero.clone(), one.clone()]]
    } else {
        let stream = seed ^ (attempt as u64).wrapping_mul(0x9e37_79b9_7f4a_7c15);
        let mut rng = ChaCha8Rng::seed_from_u64(stream);
        loop {
            let draw = |rng: &mut ChaCha8Rng| Rational::from_integer(rng.gen_range(-3i64..=3).into());
            let candidate = [
                [draw(&mut rng), draw(&mut rng)],
                [draw(&mut rng), draw(&mut rng)],
            ];
            if !mix_determinant(&candidate).is_zero() {
                break candidate;
            }
        }
    };
    let mixed = model.column_mixed(&mix);
    (
        mixed,
        Perturbation {
            column_mix: mix,
            attempt,
            axis_chart: 1,
            axis_value: Rational::zero(),
        },
    )
}

/// A seeded invertible combination of the three chart equations,
/// split into the function `f` and the two equations of the ambient
/// complete intersection `Y*`. Attempt 0 is the identity: `f` is the
/// third equation. Genericity demands the singular locus of `Y*`
/// stays of dimension at most 1.
#[derive(Clone, Debug)]
pub struct YstarSplit {
    pub f: Polynomial,
    pub ystar: Vec<Polynomial>,
    pub attempt: u32,
}

pub fn ystar_reduction(
    chart: &Chart,
    seed: u64,
    attempt: u32,
    budget: &Budget,
) -> Result<YstarSplit, ModelError> {
    let eqs = &chart.equations;
    let combined: Vec<Polynomial> = if attempt == 0 {
        eqs.clone()
    } else {
        let stream = seed ^ 0x5851_f42d_4c95_7f2d ^ (attempt as u64).wrapping_mul(0x9e37_79b9_7f4a_7c15);
        let mut rng = ChaCha8Rng::seed_from_u64(stream);
        let u: [[Rational; 3]; 3] = loop {
            let mut candidate = [[Rational::zero(), Rational::zero(), Rational::zero()],
                [Rational::zero(), Rational::zero(), Rational::zero()],
                [Rational::zero(), Rational::zero(), Rational::zero()]];
            for row in candidate.iter_mut() {
                for entry in row.iter_mut() {
                    *entry = Rational::from_integer(rng.gen_range(-3i64..=3).into());
                }
            }
            let det = &candidate[0][0]
                * (&candidate[1][1] * &candidate[2][2] - &candidate[1][2] * &candidate[2][1])
                - &candidate[0][1]
                    * (&candidate[1][0] * &candidate[2][2] - &candidate[1][2] * &candidate[2][0])
                + &candidate[0][2]
                    * (&candidate[1][0] * &candidate[2][1] - &candidate[1][1] * &candidate[2][0]);
            if !det.is_zero() {
                break candidate;
            }
        };
        (0..3)
            .map(|i| {
                let mut acc = Polynomial::zero(&chart.vars);
                for (k, eq) in eqs.iter().enumerate() {
                    acc = acc
                        .checked_add(&eq.scale(&u[i][k]))
                        .expect("same variable context");
                }
                acc
            })
            .collect()
    };
    let ystar = vec![combined[0].clone(), combined[1].clone()];
    let f = combined[2].clone();
    let sing = singular_locus_ideal(&ystar, 2);
    let dim = ideal_dimension(&Ideal::global(sing)?, budget)?;
    match dim {
        Dimension::Empty | Dimension::Dim(0) | Dimension::Dim(1) => Ok(YstarSplit {
            f,
            ystar,
            attempt,
        }),
        Dimension::Dim(d) => Err(ModelError::NeedsReseed {
            reason: format!("singular locus of the ambient intersection has dimension {d}"),
        }),
    }
}

/// Coefficient of the pure first power of `var`, provided the
/// polynomial is linear in `var` and that coefficient is constant.
fn unit_linear_coefficient(p: &Polynomial, var: usize) -> Option<Rational> {
    if p.degree_in(var) != Some(1) {
        return None;
    }
    let vars = p.vars();
    let mut coeff = Polynomial::zero(vars);
    for (m, c) in p.terms() {
        if m.0[var] == 1 {
            let mut reduced = m.clone();
            reduced.0[var] = 0;
            coeff = coeff
                .checked_add(&Polynomial::from_terms(vars, [(reduced, c.clone())]))
                .expect("same variable context");
        }
    }
    match coeff.constant_value() {
        Some(c) if !c.is_zero() => Some(c),
        _ => None,
    }
}

/// Solve a unit-linear equation for `var`: returns the substitution
/// value, over the same variable context, with `var` not occurring.
fn solve_unit_linear(p: &Polynomial, var: usize) -> Option<Polynomial> {
    let c = unit_linear_coefficient(p, var)?;
    let vars = p.vars();
    let x = Polynomial::variable(vars, vars.name(var)).expect("known variable");
    let rest = p
        .checked_sub(&x.scale(&c))
        .expect("same variable context");
    if rest.degree_in(var).unwrap_or(0) > 0 {
        return None;
    }
    Some(rest.scale(&(-Rational::one() / &c)))
}

/// Eliminate two ambient variables from the three chart equations by
/// solving two unit-linear equations, leaving a single hypersurface
/// equation. The chart coordinate itself is never eliminated. The
/// first workable pair in equation-then-variable order wins, and the
/// substitution is verified to preserve the chart ideal.
pub fn reduce_to_hypersurface(chart: &Chart, budget: &Budget) -> Result<Chart, ModelError> {
    let vars = &chart.vars;
    let coord_idx = vars
        .index_of(&chart.coordinate)
        .expect("chart coordinate is a chart variable");
    let candidates: Vec<(usize, usize)> = (0..chart.equations.len())
        .flat_map(|eq| (0..vars.len()).map(move |v| (eq, v)))
        .filter(|&(_, v)| v != coord_idx)
        .collect();
    for &(i, vi) in &candidates {
        let Some(expr_i) = solve_unit_linear(&chart.equations[i], vi) else {
            continue;
        };
        let name_i = vars.name(vi).to_string();
        let bind_i = BTreeMap::from([(name_i.clone(), expr_i.clone())]);
        // Substitute into the remaining two, then look for the second
        // elimination there.
        let rest: Vec<(usize, Polynomial)> = chart
            .equations
            .iter()
            .enumerate()
            .filter(|(k, _)| *k != i)
            .map(|(k, eq)| Ok((k, eq.substitute(&bind_i)?)))
            .collect::<Result<_, PolyError>>()?;
        for &(j, ref eq_j) in &rest {
            for vj in 0..vars.len() {
                if vj == coord_idx || vj == vi {
                    continue;
                }
                let Some(expr_j) = solve_unit_linear(eq_j, vj) else {
                    continue;
                };
                let name_j = vars.name(vj).to_string();
                let bind_j = BTreeMap::from([(name_j.clone(), expr_j.clone())]);
                let (row, remaining) = rest
                    .iter()
                    .find(|entry| entry.0 != j)
                    .map(|entry| (entry.0, entry.1.clone()))
                    .expect("three equations leave one");
                let h_full = remaining.substitute(&bind_j)?;
                let reduced_vars = vars.without(&[&name_i, &name_j])?;
                let h = h_full.restrict_vars(&reduced_vars)?;
                // First elimination value may still mention the second
                // variable; compose to express both over the survivors.
                let expr_i_final = expr_i.substitute(&bind_j)?.restrict_vars(&reduced_vars)?;
                let expr_j_final = expr_j.restrict_vars(&reduced_vars)?;
                let vi_poly = Polynomial::variable(vars, &name_i)?;
                let vj_poly = Polynomial::variable(vars, &name_j)?;
                let relation_i = vi_poly.checked_sub(&expr_i_final.restrict_vars(vars)?)?;
                let relation_j = vj_poly.checked_sub(&expr_j_final.restrict_vars(vars)?)?;
                let rebuilt = vec![h.restrict_vars(vars)?, relation_i, relation_j];
                if !ideals_equal(&chart.equations, &rebuilt, budget)? {
                    return Err(ModelError::ReductionMismatch);
                }
                let mut out = chart.clone();
                out.hypersurface = Some(h);
                out.hypersurface_row = Some(row);
                out.eliminated =
                    BTreeMap::from([(name_i, expr_i_final), (name_j, expr_j_final)]);
                return Ok(out);
            }
        }
    }
    Err(ModelError::NotReducible)
}

/// The hypersurface as a quadratic form in the transversal variables
/// with coefficients polynomial in the chart coordinate.
#[derive(Clone, Debug)]
pub struct QuadraticFamily {
    pub param: String,
    /// Univariate context the matrix entries live in.
    pub param_vars: Vars,
    /// Transversal variable names, in chart order.
    pub transversal: Vec<String>,
    /// Symmetric matrix with `h = x^T Q x` exactly.
    pub q: Vec<Vec<Polynomial>>,
}

impl QuadraticFamily {
    pub fn size(&self) -> usize {
        self.transversal.len()
    }

    pub fn determinant(&self) -> Polynomial {
        matrix_minors(&self.q, self.size())
            .pop()
            .expect("square matrix has one full minor")
    }

    /// Rebuild the quadratic form over the given context; exact
    /// inverse of the extraction.
    pub fn reconstruct(&self, vars: &Vars) -> Result<Polynomial, ModelError> {
        let mut acc = Polynomial::zero(vars);
        for (i, ni) in self.transversal.iter().enumerate() {
            for (j, nj) in self.transversal.iter().enumerate() {
                let entry = self.q[i][j].restrict_vars(vars)?;
                let xi = Polynomial::variable(vars, ni)?;
                let xj = Polynomial::variable(vars, nj)?;
                acc = acc.checked_add(&entry.checked_mul(&xi)?.checked_mul(&xj)?)?;
            }
        }
        Ok(acc)
    }

    /// The matrix specialized at a rational parameter value.
    pub fn at(&self, value: &Rational) -> Vec<Vec<Rational>> {
        let point = BTreeMap::from([(self.param.clone(), value.clone())]);
        self.q
            .iter()
            .map(|row| {
                row.iter()
                    .map(|e| e.evaluate(&point).expect("single parameter"))
                    .collect()
            })
            .collect()
    }
}

/// Interpret the hypersurface as a quadratic form in everything but
/// the parameter. Off-diagonal coefficients split in half across the
/// symmetric pair; any term of transversal degree other than 2 means
/// the family is not quadratic.
pub fn quadratic_family(h: &Polynomial, param: &str) -> Result<QuadraticFamily, ModelError> {
    let vars = h.vars();
    let param_idx = vars
        .index_of(param)
        .ok_or_else(|| PolyError::UnknownVariable(param.to_string()))?;
    let transversal_idx: Vec<usize> = (0..vars.len()).filter(|&v| v != param_idx).collect();
    let transversal: Vec<String> = transversal_idx
        .iter()
        .map(|&v| vars.name(v).to_string())
        .collect();
    let param_vars = Vars::new(&[param]).expect("single fresh name");
    let n = transversal.len();
    let mut coeff: Vec<Vec<BTreeMap<u32, Rational>>> =
        vec![vec![BTreeMap::new(); n]; n];
    for (m, c) in h.terms() {
        let tdeg: u32 = transversal_idx.iter().map(|&v| m.0[v]).sum();
        if tdeg != 2 {
            return Err(ModelError::NotQuadratic);
        }
        let k = m.0[param_idx];
        let involved: Vec<usize> = (0..n).filter(|&a| m.0[transversal_idx[a]] > 0).collect();
        match involved[..] {
            [a] => {
                let slot = coeff[a][a].entry(k).or_insert_with(Rational::zero);
                *slot += c;
            }
            [a, b] => {
                let half = c / Rational::from_integer(2.into());
                let slot = coeff[a][b].entry(k).or_insert_with(Rational::zero);
                *slot += &half;
                let slot = coeff[b][a].entry(k).or_insert_with(Rational::zero);
                *slot += &half;
            }
            _ => unreachable!("transversal degree 2 involves one or two variables"),
        }
    }
    let q: Vec<Vec<Polynomial>> = coeff
        .into_iter()
        .map(|row| {
            row.into_iter()
                .map(|entries| {
                    Polynomial::from_terms(
                        &param_vars,
                        entries
                            .into_iter()
                            .map(|(k, c)| (crate::poly::Monomial(vec![k]), c)),
                    )
                })
                .collect()
        })
        .collect();
    let family = QuadraticFamily {
        param: param.to_string(),
        param_vars,
        transversal,
        q,
    };
    let rebuilt = family.reconstruct(vars)?;
    assert_eq!(&rebuilt, h, "quadratic extraction must be exact");
    Ok(family)
}

/// One packet of degeneracy points of the quadratic family: the
/// points cut out by a squarefree factor of the determinant, with the
/// corank of the matrix over the corresponding extension ring.
#[derive(Clone, Debug)]
pub struct SpecialPointClass {
    /// Monic squarefree polynomial whose roots are the points.
    pub minpoly: Polynomial,
    /// Number of complex points in the packet.
    pub degree: u64,
    /// Multiplicity of the factor in the determinant.
    pub multiplicity: u32,
    /// Corank of the quadratic form at these points.
    pub corank: u32,
    /// Simple degeneracy: multiplicity 1 and corank 1, the Whitney
    /// umbrella transversal type.
    pub dinfty: bool,
}

/// Rank computation over the extension ring modulo `p` by dynamic
/// evaluation: elimination proceeds as if over a field, and any pivot
/// candidate that is a zero divisor splits `p` by its gcd, after
/// which both branches are processed independently.
enum EliminationStep {
    Rank(usize),
    Split(Vec<Rational>),
}

fn ext_inverse(a: &[Rational], p: &[Rational]) -> Option<Vec<Rational>> {
    // Extended Euclid; returns a^{-1} mod p when gcd is constant.
    let mut r0 = p.to_vec();
    let mut r1 = dense_rem(a, p);
    let mut t0: Vec<Rational> = Vec::new();
    let mut t1: Vec<Rational> = vec![Rational::one()];
    while dense_deg(&r1).is_some() {
        if dense_deg(&r1) == Some(0) {
            let inv = Rational::one() / &r1[0];
            let mut out: Vec<Rational> = t1.iter().map(|c| c * &inv).collect();
            dense_trim(&mut out);
            return Some(dense_rem(&out, p));
        }
        let (q, r) = dense_divmod(&r0, &r1);
        let t_next = dense_sub(&t0, &dense_mul_local(&q, &t1));
        r0 = r1;
        r1 = r;
        t0 = t1;
        t1 = t_next;
    }
    None
}

fn dense_divmod(a: &[Rational], b: &[Rational]) -> (Vec<Rational>, Vec<Rational>) {
    let db = dense_deg(b).expect("division by zero polynomial");
    let mut rem = a.to_vec();
    dense_trim(&mut rem);
    let mut quot = vec![Rational::zero(); rem.len().saturating_sub(db)];
    while let Some(da) = dense_deg(&rem) {
        if da < db {
            break;
        }
        let c = &rem[da] / &b[db];
        quot[da - db] = c.clone();
        for k in 0..=db {
            let delta = &c * &b[k];
            rem[da - db + k] -= delta;
        }
        dense_trim(&mut rem);
    }
    dense_trim(&mut quot);
    (quot, rem)
}

fn dense_mul_local(a: &[Rational], b: &[Rational]) -> Vec<Rational> {
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

fn eliminate_mod(mut m: Vec<Vec<Vec<Rational>>>, p: &[Rational]) -> EliminationStep {
    let n = m.len();
    for row in m.iter_mut() {
        for e in row.iter_mut() {
            *e = dense_rem(e, p);
        }
    }
    let mut rank = 0usize;
    let mut row_used = vec![false; n];
    for col in 0..n {
        // First usable pivot in this column, scanning rows in order.
        let mut pivot: Option<usize> = None;
        for (r, used) in row_used.iter().enumerate() {
            if *used || m[r][col].is_empty() {
                continue;
            }
            let g = dense_gcd(&m[r][col], p);
            if dense_deg(&g) == Some(0) {
                pivot = Some(r);
                break;
            }
            // gcds come back monic, so the branch modulus already is.
            return EliminationStep::Split(g);
        }
        let Some(r) = pivot else { continue };
        row_used[r] = true;
        rank += 1;
        let inv = ext_inverse(&m[r][col], p).expect("pivot is invertible");
        for other in 0..n {
            if other == r || m[other][col].is_empty() {
                continue;
            }
            let factor = dense_rem(&dense_mul_local(&m[other][col], &inv), p);
            for c in 0..n {
                let delta = dense_rem(&dense_mul_local(&factor, &m[r][c]), p);
                m[other][c] = dense_rem(&dense_sub(&m[other][c], &delta), p);
            }
        }
    }
    EliminationStep::Rank(rank)
}

/// Coranks of the matrix over the ring modulo each squarefree-factor
/// branch the elimination forces; branch moduli are monic.
fn corank_branches(
    entries: &[Vec<Vec<Rational>>],
    p: Vec<Rational>,
    out: &mut Vec<(Vec<Rational>, u32)>,
) {
    match eliminate_mod(entries.to_vec(), &p) {
        EliminationStep::Rank(rank) => {
            out.push((p.clone(), (entries.len() - rank) as u32));
        }
        EliminationStep::Split(g) => {
            let mut cofactor = dense_div_exact(&p, &g);
            dense_monic(&mut cofactor);
            corank_branches(entries, g, out);
            corank_branches(entries, cofactor, out);
        }
    }
}

/// Degeneracy points of the quadratic family: squarefree factors of
/// the determinant with their point counts, multiplicities and
/// coranks. A factor whose branches all share one corank is reported
/// unsplit.
pub fn special_points(family: &QuadraticFamily) -> Result<Vec<SpecialPointClass>, ModelError> {
    let det = family.determinant();
    if det.is_zero() {
        return Err(ModelError::DegenerateFamily);
    }
    if det.is_constant() {
        return Ok(Vec::new());
    }
    let entries: Vec<Vec<Vec<Rational>>> = family
        .q
        .iter()
        .map(|row| {
            row.iter()
                .map(|e| to_univariate(e, 0).expect("univariate entries"))
                .collect()
        })
        .collect();
    let mut out = Vec::new();
    for (factor, multiplicity) in squarefree_decompose(&det)? {
        let p = to_univariate(&factor, 0)?;
        let mut branches: Vec<(Vec<Rational>, u32)> = Vec::new();
        corank_branches(&entries, p, &mut branches);
        let uniform = branches.windows(2).all(|w| w[0].1 == w[1].1);
        if uniform {
            let corank = branches[0].1;
            out.push(SpecialPointClass {
                degree: dense_deg(&to_univariate(&factor, 0)?).unwrap_or(0) as u64,
                minpoly: factor,
                multiplicity,
                corank,
                dinfty: multiplicity == 1 && corank == 1,
            });
        } else {
            for (modulus, corank) in branches {
                let piece = crate::poly::from_univariate(&family.param_vars, 0, &modulus);
                out.push(SpecialPointClass {
                    degree: dense_deg(&modulus).unwrap_or(0) as u64,
                    minpoly: piece,
                    multiplicity,
                    corank,
                    dinfty: multiplicity == 1 && corank == 1,
                });
            }
        }
    }
    Ok(out)
}

/// The axis verdict: either the transversal family is nondegenerate
/// there and the perturbed transform is smooth near the axis, or an
/// isolated singularity cluster of this total Milnor number remains.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum AxisClass {
    AInfinity,
    Icis { milnor: u64 },
}

fn rank_rational(mut m: Vec<Vec<Rational>>) -> usize {
    let rows = m.len();
    let cols = m.first().map(|r| r.len()).unwrap_or(0);
    let mut rank = 0;
    let mut row = 0;
    for col in 0..cols {
        let Some(pivot) = (row..rows).find(|&r| !m[r][col].is_zero()) else {
            continue;
        };
        m.swap(row, pivot);
        for r in 0..rows {
            if r == row || m[r][col].is_zero() {
                continue;
            }
            let factor = &m[r][col] / &m[row][col];
            for c in 0..cols {
                let delta = &factor * &m[row][c];
                m[r][c] -= delta;
            }
        }
        rank += 1;
        row += 1;
        if row == rows {
            break;
        }
    }
    rank
}

/// Classify the axis point, chart-1 coordinate 0. Nondegenerate
/// transversal form there means the perturbation smooths the axis
/// neighborhood. Otherwise the perturbed equation `h - delta * t`
/// keeps a critical cluster on the axis fiber; its total Milnor
/// number is the colength of the Jacobian ideal plus the axis
/// equation, at delta = 1. An infinite colength means the residual
/// singularity is not isolated and the analysis cannot continue.
pub fn classify_axis(
    family: &QuadraticFamily,
    h: &Polynomial,
    delta_section: Option<&Polynomial>,
    budget: &Budget,
) -> Result<AxisClass, ModelError> {
    let at_zero = family.at(&Rational::zero());
    let corank = family.size() - rank_rational(at_zero);
    if corank == 0 {
        return Ok(AxisClass::AInfinity);
    }
    let Some(section) = delta_section else {
        return Err(ModelError::AxisDeltaUnavailable);
    };
    let g = h.checked_sub(section)?;
    let mut gens: Vec<Polynomial> = (0..h.vars().len()).map(|v| g.differentiate(v)).collect();
    gens.push(Polynomial::variable(h.vars(), &family.param)?);
    match colength(&Ideal::new(gens, TermOrder::Global)?, budget)? {
        Colength::Finite(mu) => Ok(AxisClass::Icis { milnor: mu }),
        Colength::Infinite => Err(ModelError::NonIsolatedAxis),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parse::{parse_model, parse_poly};
    use crate::poly::rat;

    fn paper_model() -> DetModel {
        let text = r#"{
            "variables": ["v", "w", "x", "y", "z"],
            "matrix": [["v", "x"], ["w", "y"], ["-2*x*y", "v^2+w^2+z^2"]]
        }"#;
        DetModel::from_file(&parse_model(text).unwrap()).unwrap()
    }

    fn cone_model() -> DetModel {
        let text = r#"{
            "variables": ["x", "y", "z", "w"],
            "matrix": [["x", "y"], ["y", "z"], ["z", "w"]]
        }"#;
        DetModel::from_file(&parse_model(text).unwrap()).unwrap()
    }

    fn budget() -> Budget {
        Budget::default()
    }

    #[test]
    fn rejects_entry_not_vanishing() {
        let text = r#"{
            "variables": ["x", "y", "z", "w"],
            "matrix": [["x", "y"], ["y", "z"], ["z", "w+1"]]
        }"#;
        let err = DetModel::from_file(&parse_model(text).unwrap()).unwrap_err();
        assert!(matches!(
            err,
            ModelError::EntryNotVanishing { row: 2, col: 1 }
        ));
    }

    #[test]
    fn validates_paper_model() {
        let report = validate_model(&paper_model(), &budget()).unwrap();
        assert_eq!(report.dimension, Dimension::Dim(3));
        assert!(report.smoothable);
        assert!(report.isolated);
        assert_eq!(report.minors.len(), 3);
    }

    #[test]
    fn validates_cone_model() {
        let report = validate_model(&cone_model(), &budget()).unwrap();
        assert_eq!(report.dimension, Dimension::Dim(2));
        assert!(report.smoothable);
        assert!(report.isolated);
    }

    #[test]
    fn rejects_wrong_codimension() {
        // Repeated columns: the minors all vanish, dimension too big.
        let text = r#"{
            "variables": ["x", "y", "z"],
            "matrix": [["x", "x"], ["y", "y"], ["z", "z"]]
        }"#;
        let model = DetModel::from_file(&parse_model(text).unwrap()).unwrap();
        let err = validate_model(&model, &budget()).unwrap_err();
        assert!(matches!(err, ModelError::WrongCodimension { .. }));
    }

    #[test]
    fn paper_chart_equations() {
        let model = paper_model();
        let c0 = tjurina_chart(&model, 0).unwrap();
        assert_eq!(c0.coordinate, "s");
        let expect = |src: &str| parse_poly(src, &c0.vars).unwrap();
        assert_eq!(
            c0.equations,
            vec![
                expect("v+s*x"),
                expect("w+s*y"),
                expect("-2*x*y+s*(v^2+w^2+z^2)"),
            ]
        );
        let c1 = tjurina_chart(&model, 1).unwrap();
        let expect = |src: &str| parse_poly(src, &c1.vars).unwrap();
        assert_eq!(
            c1.equations,
            vec![
                expect("v*t+x"),
                expect("w*t+y"),
                expect("-2*x*y*t+v^2+w^2+z^2"),
            ]
        );
    }

    #[test]
    fn chart_of_zero_column_matrix() {
        let text = r#"{
            "variables": ["x", "y", "z"],
            "matrix": [["x", "0"], ["y", "0"], ["z", "0"]]
        }"#;
        let model = DetModel::from_file(&parse_model(text).unwrap()).unwrap();
        let c0 = tjurina_chart(&model, 0).unwrap();
        let expect = |src: &str| parse_poly(src, &c0.vars).unwrap();
        assert_eq!(c0.equations, vec![expect("x"), expect("y"), expect("z")]);
    }

    #[test]
    fn reduces_paper_chart_zero() {
        let chart = tjurina_chart(&paper_model(), 0).unwrap();
        let reduced = reduce_to_hypersurface(&chart, &budget()).unwrap();
        let h = reduced.hypersurface.as_ref().unwrap();
        let hv = h.vars().clone();
        assert_eq!(hv.names(), ["x", "y", "z", "s"]);
        assert_eq!(h, &parse_poly("s^3*x^2+s^3*y^2-2*x*y+s*z^2", &hv).unwrap());
        assert_eq!(reduced.hypersurface_row, Some(2));
        assert_eq!(
            reduced.eliminated.get("v").unwrap(),
            &parse_poly("-s*x", &hv).unwrap()
        );
        assert_eq!(
            reduced.eliminated.get("w").unwrap(),
            &parse_poly("-s*y", &hv).unwrap()
        );
    }

    #[test]
    fn reduces_paper_chart_one() {
        let chart = tjurina_chart(&paper_model(), 1).unwrap();
        let reduced = reduce_to_hypersurface(&chart, &budget()).unwrap();
        let h = reduced.hypersurface.as_ref().unwrap();
        let hv = h.vars().clone();
        assert_eq!(hv.names(), ["v", "w", "z", "t"]);
        assert_eq!(h, &parse_poly("v^2+w^2-2*t^3*v*w+z^2", &hv).unwrap());
        assert_eq!(
            reduced.eliminated.get("x").unwrap(),
            &parse_poly("-t*v", &hv).unwrap()
        );
        assert_eq!(
            reduced.eliminated.get("y").unwrap(),
            &parse_poly("-t*w", &hv).unwrap()
        );
    }

    #[test]
    fn reduction_requires_unit_linear_pair() {
        let text = r#"{
            "variables": ["x", "y", "z"],
            "matrix": [["x*y", "x"], ["y*z", "y"], ["z*x", "z"]]
        }"#;
        let model = DetModel::from_file(&parse_model(text).unwrap()).unwrap();
        let chart = tjurina_chart(&model, 0).unwrap();
        let err = reduce_to_hypersurface(&chart, &budget()).unwrap_err();
        assert!(matches!(err, ModelError::NotReducible));
    }

    #[test]
    fn quadratic_family_of_paper_charts() {
        let chart = tjurina_chart(&paper_model(), 0).unwrap();
        let reduced = reduce_to_hypersurface(&chart, &budget()).unwrap();
        let family = quadratic_family(reduced.hypersurface.as_ref().unwrap(), "s").unwrap();
        assert_eq!(family.transversal, ["x", "y", "z"]);
        let pv = &family.param_vars;
        let e = |src: &str| parse_poly(src, pv).unwrap();
        assert_eq!(
            family.q,
            vec![
                vec![e("s^3"), e("-1"), e("0")],
                vec![e("-1"), e("s^3"), e("0")],
                vec![e("0"), e("0"), e("s")],
            ]
        );
        assert_eq!(family.determinant(), e("s^7-s"));

        let chart = tjurina_chart(&paper_model(), 1).unwrap();
        let reduced = reduce_to_hypersurface(&chart, &budget()).unwrap();
        let family = quadratic_family(reduced.hypersurface.as_ref().unwrap(), "t").unwrap();
        let pv = &family.param_vars;
        let e = |src: &str| parse_poly(src, pv).unwrap();
        assert_eq!(
            family.q,
            vec![
                vec![e("1"), e("-t^3"), e("0")],
                vec![e("-t^3"), e("1"), e("0")],
                vec![e("0"), e("0"), e("1")],
            ]
        );
        assert_eq!(family.determinant(), e("1-t^6"));
    }

    #[test]
    fn quadratic_family_rejects_cubic_terms() {
        let vars = Vars::new(&["x", "y", "s"]).unwrap();
        let h = parse_poly("x^3+y^2", &vars).unwrap();
        assert!(matches!(
            quadratic_family(&h, "s"),
            Err(ModelError::NotQuadratic)
        ));
    }

    #[test]
    fn special_points_of_paper_chart_zero() {
        let chart = tjurina_chart(&paper_model(), 0).unwrap();
        let reduced = reduce_to_hypersurface(&chart, &budget()).unwrap();
        let family = quadratic_family(reduced.hypersurface.as_ref().unwrap(), "s").unwrap();
        let classes = special_points(&family).unwrap();
        assert_eq!(classes.len(), 1, "one squarefree packet");
        let c = &classes[0];
        assert_eq!(c.degree, 7);
        assert_eq!(c.multiplicity, 1);
        assert_eq!(c.corank, 1);
        assert!(c.dinfty);
        assert_eq!(c.minpoly.to_string(), "s^7-s");
    }

    #[test]
    fn special_points_of_paper_chart_one_miss_the_axis() {
        let chart = tjurina_chart(&paper_model(), 1).unwrap();
        let reduced = reduce_to_hypersurface(&chart, &budget()).unwrap();
        let family = quadratic_family(reduced.hypersurface.as_ref().unwrap(), "t").unwrap();
        let classes = special_points(&family).unwrap();
        assert_eq!(classes.len(), 1);
        let c = &classes[0];
        assert_eq!(c.degree, 6);
        assert!(c.dinfty);
        // The axis value 0 is not a root: the form is nondegenerate there.
        let det = family.determinant();
        let at0 = det
            .evaluate(&BTreeMap::from([("t".to_string(), rat(0))]))
            .unwrap();
        assert_eq!(at0, rat(1));
    }

    #[test]
    fn special_points_flag_non_reduced_discriminant() {
        let pv = Vars::new(&["s"]).unwrap();
        let e = |src: &str| parse_poly(src, &pv).unwrap();
        let family = QuadraticFamily {
            param: "s".to_string(),
            param_vars: pv.clone(),
            transversal: vec!["x".to_string(), "y".to_string()],
            q: vec![vec![e("s^2"), e("0")], vec![e("0"), e("1")]],
        };
        let classes = special_points(&family).unwrap();
        assert_eq!(classes.len(), 1);
        let c = &classes[0];
        assert_eq!((c.degree, c.multiplicity, c.corank), (1, 2, 1));
        assert!(!c.dinfty);
    }

    #[test]
    fn special_points_split_on_mixed_corank() {
        let pv = Vars::new(&["s"]).unwrap();
        let e = |src: &str| parse_poly(src, &pv).unwrap();
        let family = QuadraticFamily {
            param: "s".to_string(),
            param_vars: pv.clone(),
            transversal: vec!["x".to_string(), "y".to_string()],
            q: vec![vec![e("s"), e("0")], vec![e("0"), e("s-1")]],
        };
        // det = s^2 - s, squarefree with two roots of different kernels?
        // No: corank is 1 at both s=0 and s=1, so the factor stays whole.
        let classes = special_points(&family).unwrap();
        assert_eq!(classes.len(), 1);
        assert_eq!(classes[0].degree, 2);
        assert_eq!(classes[0].corank, 1);

        // Rank drops by 2 at s=0 only: the packet must split.
        let family = QuadraticFamily {
            param: "s".to_string(),
            param_vars: pv.clone(),
            transversal: vec!["x".to_string(), "y".to_string()],
            q: vec![vec![e("s"), e("0")], vec![e("0"), e("s^2-s")]],
        };
        let classes = special_points(&family).unwrap();
        assert_eq!(classes.len(), 2);
        let by_deg: BTreeMap<String, u32> = classes
            .iter()
            .map(|c| (c.minpoly.to_string(), c.corank))
            .collect();
        assert_eq!(by_deg.get("s"), Some(&2));
        assert_eq!(by_deg.get("s-1"), Some(&1));
    }

    #[test]
    fn axis_of_paper_model_is_nondegenerate() {
        let chart = tjurina_chart(&paper_model(), 1).unwrap();
        let reduced = reduce_to_hypersurface(&chart, &budget()).unwrap();
        let h = reduced.hypersurface.clone().unwrap();
        let family = quadratic_family(&h, "t").unwrap();
        let section = reduced.delta_section().unwrap().unwrap();
        let class = classify_axis(&family, &h, Some(&section), &budget()).unwrap();
        assert_eq!(class, AxisClass::AInfinity);
    }

    #[test]
    fn degenerate_axis_counts_residual_cluster() {
        // h = v^2 + w^2 + t*z^2 degenerates at t = 0; the perturbed
        // equation h - t keeps two nondegenerate critical points on
        // the axis fiber, at z^2 = 1.
        let vars = Vars::new(&["v", "w", "z", "t"]).unwrap();
        let h = parse_poly("v^2+w^2+t*z^2", &vars).unwrap();
        let family = quadratic_family(&h, "t").unwrap();
        let section = Polynomial::variable(&vars, "t").unwrap();
        let class = classify_axis(&family, &h, Some(&section), &budget()).unwrap();
        assert_eq!(class, AxisClass::Icis { milnor: 2 });
    }

    #[test]
    fn perturbation_attempt_zero_is_identity() {
        let model = paper_model();
        let (mixed, pert) = generic_rank1_perturbation(&model, 1, 0);
        assert_eq!(mixed, model);
        assert_eq!(pert.attempt, 0);
        assert_eq!(pert.axis_chart, 1);
        assert_eq!(pert.axis_value, rat(0));
    }

    #[test]
    fn perturbation_reseeds_deterministically() {
        let model = paper_model();
        let (a, pa) = generic_rank1_perturbation(&model, 7, 3);
        let (b, pb) = generic_rank1_perturbation(&model, 7, 3);
        assert_eq!(a, b);
        assert_eq!(pa, pb);
        let (c, _) = generic_rank1_perturbation(&model, 8, 3);
        assert!(c != a, "different seed mixes differently");
        assert!(!mix_determinant(&pa.column_mix).is_zero());
    }

    #[test]
    fn column_mix_scales_minors() {
        let model = paper_model();
        let mix = [[rat(1), rat(2)], [rat(1), rat(3)]];
        let mixed = model.column_mixed(&mix);
        let det = mix_determinant(&mix);
        for (a, b) in model.minors().iter().zip(mixed.minors().iter()) {
            assert_eq!(&a.scale(&det), b);
        }
    }

    #[test]
    fn ystar_identity_split_is_generic_for_paper_chart() {
        let chart = tjurina_chart(&paper_model(), 0).unwrap();
        let split = ystar_reduction(&chart, 1, 0, &budget()).unwrap();
        assert_eq!(split.f, chart.equations[2]);
        assert_eq!(split.ystar, vec![chart.equations[0].clone(), chart.equations[1].clone()]);
    }

    #[test]
    fn ystar_seeded_split_is_deterministic() {
        let chart = tjurina_chart(&paper_model(), 0).unwrap();
        let a = ystar_reduction(&chart, 5, 2, &budget()).unwrap();
        let b = ystar_reduction(&chart, 5, 2, &budget()).unwrap();
        assert_eq!(a.f, b.f);
        assert_eq!(a.ystar, b.ystar);
    }
}
