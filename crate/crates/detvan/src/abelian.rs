//! Integer matrices, Smith normal form and finitely generated abelian
//! groups, plus the two homology computations built from them: the
//! Wang sequence of a fibered neighborhood boundary and the assembly
//! of the smoothing's homology from its boundary pieces.
//!
//! Everything is exact over arbitrary-precision integers. The Smith
//! normal form is deterministic: pivots are chosen by minimal absolute
//! value with ties broken by lowest row then lowest column, so the
//! accompanying unimodular transforms are reproducible run to run.

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Index, IndexMut};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum AbelianError {
    #[error("monodromy matrix must be square, got {0}x{1}")]
    NonSquareMonodromy(usize, usize),
    #[error("fibration homology needs ambient dimension >= 2, got {0}")]
    BadDimension(u32),
    #[error("boundary piece declares dimension {piece} but the assembly is in dimension {ambient}")]
    PieceDimensionMismatch { piece: u32, ambient: u32 },
    #[error("a simple degeneracy piece must carry a 1x1 vertical monodromy")]
    SimpleDegeneracyShape,
    #[error("simple degeneracy pieces require a rank-1 free transversal homology, got {0}")]
    TransversalMismatch(String),
    #[error("assembly accepts special-point pieces only; found an axis piece in the list")]
    AxisInPieceList,
}

/// Dense integer matrix, row major.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct IntMatrix {
    rows: usize,
    cols: usize,
    data: Vec<BigInt>,
}

impl IntMatrix {
    pub fn zero(rows: usize, cols: usize) -> Self {
        IntMatrix {
            rows,
            cols,
            data: vec![BigInt::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zero(n, n);
        for i in 0..n {
            m[(i, i)] = BigInt::one();
        }
        m
    }

    pub fn from_rows(rows: &[&[i64]]) -> Self {
        let r = rows.len();
        let c = rows.first().map(|row| row.len()).unwrap_or(0);
        let mut m = Self::zero(r, c);
        for (i, row) in rows.iter().enumerate() {
            assert_eq!(row.len(), c, "ragged rows");
            for (j, &x) in row.iter().enumerate() {
                m[(i, j)] = BigInt::from(x);
            }
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn mul(&self, other: &IntMatrix) -> IntMatrix {
        assert_eq!(self.cols, other.rows, "dimension mismatch");
        let mut out = IntMatrix::zero(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                if self[(i, k)].is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let prod = &self[(i, k)] * &other[(k, j)];
                    out[(i, j)] += prod;
                }
            }
        }
        out
    }

    pub fn sub(&self, other: &IntMatrix) -> IntMatrix {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        let mut out = self.clone();
        for i in 0..self.rows {
            for j in 0..self.cols {
                out[(i, j)] -= &other[(i, j)];
            }
        }
        out
    }

    pub fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.data.swap(a * self.cols + j, b * self.cols + j);
        }
    }

    pub fn swap_cols(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for i in 0..self.rows {
            self.data.swap(i * self.cols + a, i * self.cols + b);
        }
    }

    /// row[dst] += k * row[src]
    pub fn add_row_multiple(&mut self, dst: usize, src: usize, k: &BigInt) {
        for j in 0..self.cols {
            let delta = k * &self[(src, j)];
            self[(dst, j)] += delta;
        }
    }

    /// col[dst] += k * col[src]
    pub fn add_col_multiple(&mut self, dst: usize, src: usize, k: &BigInt) {
        for i in 0..self.rows {
            let delta = k * &self[(i, src)];
            self[(i, dst)] += delta;
        }
    }

    pub fn negate_row(&mut self, r: usize) {
        for j in 0..self.cols {
            let v = -self[(r, j)].clone();
            self[(r, j)] = v;
        }
    }

    /// Exact determinant by fraction-free elimination.
    pub fn determinant(&self) -> BigInt {
        assert_eq!(self.rows, self.cols, "determinant of non-square matrix");
        let n = self.rows;
        if n == 0 {
            return BigInt::one();
        }
        let mut a = self.clone();
        let mut sign = false;
        let mut prev = BigInt::one();
        for k in 0..n - 1 {
            if a[(k, k)].is_zero() {
                match (k + 1..n).find(|&i| !a[(i, k)].is_zero()) {
                    Some(i) => {
                        a.swap_rows(k, i);
                        sign = !sign;
                    }
                    None => return BigInt::zero(),
                }
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    let num = &a[(i, j)] * &a[(k, k)] - &a[(i, k)] * &a[(k, j)];
                    a[(i, j)] = num / &prev;
                }
                a[(i, k)] = BigInt::zero();
            }
            prev = a[(k, k)].clone();
        }
        let det = a[(n - 1, n - 1)].clone();
        if sign {
            -det
        } else {
            det
        }
    }
}

impl Index<(usize, usize)> for IntMatrix {
    type Output = BigInt;
    fn index(&self, (i, j): (usize, usize)) -> &BigInt {
        &self.data[i * self.cols + j]
    }
}

impl IndexMut<(usize, usize)> for IntMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut BigInt {
        &mut self.data[i * self.cols + j]
    }
}

impl fmt::Display for IntMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.rows {
            let row: Vec<String> = (0..self.cols).map(|j| self[(i, j)].to_string()).collect();
            writeln!(f, "[{}]", row.join(", "))?;
        }
        Ok(())
    }
}

/// Unimodular decomposition `u * m * v = s` with `s` diagonal and each
/// diagonal entry dividing the next.
#[derive(Clone, Debug)]
pub struct SmithDecomposition {
    pub u: IntMatrix,
    pub s: IntMatrix,
    pub v: IntMatrix,
}

impl SmithDecomposition {
    /// Nonnegative diagonal of `s`, one entry per diagonal slot.
    pub fn diagonal(&self) -> Vec<BigInt> {
        (0..self.s.rows.min(self.s.cols))
            .map(|k| self.s[(k, k)].clone())
            .collect()
    }

    pub fn rank(&self) -> usize {
        self.diagonal().iter().filter(|d| !d.is_zero()).count()
    }
}

/// Nearest-integer quotient, ties rounded toward negative infinity.
/// Keeps remainders at most half the divisor during elimination.
fn div_nearest(a: &BigInt, b: &BigInt) -> BigInt {
    let q0 = a.div_floor(b);
    let r = a - &q0 * b;
    let two_r = &r * BigInt::from(2);
    let round_up = if b.is_positive() {
        two_r > *b
    } else {
        two_r < *b
    };
    if round_up {
        q0 + BigInt::one()
    } else {
        q0
    }
}

/// Smith normal form over the integers.
///
/// Pivot selection is the minimal nonzero absolute value in the
/// remaining submatrix, ties broken by lowest row then lowest column,
/// which makes the decomposition deterministic.
pub fn smith_normal_form(m: &IntMatrix) -> SmithDecomposition {
    let mut s = m.clone();
    let mut u = IntMatrix::identity(m.rows);
    let mut v = IntMatrix::identity(m.cols);
    let bound = m.rows.min(m.cols);
    'diag: for k in 0..bound {
        loop {
            // Minimal nonzero entry of the trailing submatrix.
            let mut best: Option<(usize, usize)> = None;
            for i in k..s.rows {
                for j in k..s.cols {
                    if s[(i, j)].is_zero() {
                        continue;
                    }
                    let better = match best {
                        None => true,
                        Some((bi, bj)) => s[(i, j)].magnitude() < s[(bi, bj)].magnitude(),
                    };
                    if better {
                        best = Some((i, j));
                    }
                }
            }
            let (pi, pj) = match best {
                Some(p) => p,
                None => break 'diag, // trailing submatrix is zero
            };
            if pi != k {
                s.swap_rows(k, pi);
                u.swap_rows(k, pi);
            }
            if pj != k {
                s.swap_cols(k, pj);
                v.swap_cols(k, pj);
            }
            let mut dirty = false;
            for i in k + 1..s.rows {
                if s[(i, k)].is_zero() {
                    continue;
                }
                let q = div_nearest(&s[(i, k)], &s[(k, k)]);
                if !q.is_zero() {
                    let neg = -q;
                    s.add_row_multiple(i, k, &neg);
                    u.add_row_multiple(i, k, &neg);
                }
                if !s[(i, k)].is_zero() {
                    dirty = true;
                }
            }
            for j in k + 1..s.cols {
                if s[(k, j)].is_zero() {
                    continue;
                }
                let q = div_nearest(&s[(k, j)], &s[(k, k)]);
                if !q.is_zero() {
                    let neg = -q;
                    s.add_col_multiple(j, k, &neg);
                    v.add_col_multiple(j, k, &neg);
                }
                if !s[(k, j)].is_zero() {
                    dirty = true;
                }
            }
            if dirty {
                continue;
            }
            // Row and column are clear; the pivot must divide the rest
            // of the submatrix for the divisor chain.
            let pivot = s[(k, k)].clone();
            let mut witness = None;
            'scan: for i in k + 1..s.rows {
                for j in k + 1..s.cols {
                    if !(&s[(i, j)] % &pivot).is_zero() {
                        witness = Some(i);
                        break 'scan;
                    }
                }
            }
            match witness {
                Some(i) => {
                    s.add_row_multiple(k, i, &BigInt::one());
                    u.add_row_multiple(k, i, &BigInt::one());
                }
                None => {
                    if s[(k, k)].is_negative() {
                        s.negate_row(k);
                        u.negate_row(k);
                    }
                    break;
                }
            }
        }
    }
    SmithDecomposition { u, s, v }
}

/// Finitely generated abelian group in invariant-factor form: a free
/// part and a torsion chain `Z/d1 + ... + Z/dk` with `1 < d1 | ... | dk`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct AbelianGroup {
    pub free_rank: usize,
    pub torsion: Vec<BigUint>,
}

impl AbelianGroup {
    pub fn zero() -> Self {
        AbelianGroup {
            free_rank: 0,
            torsion: Vec::new(),
        }
    }

    pub fn free(rank: usize) -> Self {
        AbelianGroup {
            free_rank: rank,
            torsion: Vec::new(),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.free_rank == 0 && self.torsion.is_empty()
    }

    /// Canonical form of a direct sum: free ranks add, torsion factors
    /// are merged back into a single divisor chain.
    pub fn direct_sum(&self, other: &AbelianGroup) -> AbelianGroup {
        let mut factors: Vec<BigUint> = self
            .torsion
            .iter()
            .chain(other.torsion.iter())
            .cloned()
            .collect();
        if factors.len() > 1 {
            let n = factors.len();
            let mut diag = IntMatrix::zero(n, n);
            for (i, d) in factors.iter().enumerate() {
                diag[(i, i)] = BigInt::from(d.clone());
            }
            let snf = smith_normal_form(&diag);
            factors = snf
                .diagonal()
                .into_iter()
                .filter(|d| d.magnitude() > &BigUint::one())
                .map(|d| d.magnitude().clone())
                .collect();
        }
        AbelianGroup {
            free_rank: self.free_rank + other.free_rank,
            torsion: factors,
        }
    }
}

impl fmt::Display for AbelianGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut parts = Vec::new();
        match self.free_rank {
            0 => {}
            1 => parts.push("Z".to_string()),
            r => parts.push(format!("Z^{r}")),
        }
        for d in &self.torsion {
            parts.push(format!("Z/{d}"));
        }
        write!(f, "{}", parts.join(" + "))
    }
}

/// Kernel rank and cokernel of an integer matrix viewed as a map
/// between free modules (columns to rows).
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct KerCoker {
    pub rank: usize,
    pub kernel_rank: usize,
    pub cokernel: AbelianGroup,
}

pub fn ker_coker(m: &IntMatrix) -> KerCoker {
    let snf = smith_normal_form(m);
    let diag = snf.diagonal();
    let rank = diag.iter().filter(|d| !d.is_zero()).count();
    let torsion: Vec<BigUint> = diag
        .iter()
        .filter(|d| d.magnitude() > &BigUint::one())
        .map(|d| d.magnitude().clone())
        .collect();
    KerCoker {
        rank,
        kernel_rank: m.cols() - rank,
        cokernel: AbelianGroup {
            free_rank: m.rows() - rank,
            torsion,
        },
    }
}

/// Homology of the fibered boundary of a neighborhood of the singular
/// line inside the Milnor fiber: a bundle over a circle with fiber the
/// transversal Milnor fiber, whose homology is free of rank `T.rows()`
/// in degree `n - 1`.
///
/// The groups follow from the Wang sequence of the bundle. In every
/// dimension the degree-1 homology contains exactly one distinguished
/// free summand traced out by a section over the circle; for `n == 2`
/// it is the extra `Z` on top of the cokernel.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BoundaryHomology {
    pub groups: BTreeMap<u32, AbelianGroup>,
    /// Degree holding the distinguished vertical summand (always 1).
    pub vertical_degree: u32,
}

pub fn wang_homology(t: &IntMatrix, n: u32) -> Result<BoundaryHomology, AbelianError> {
    if t.rows() != t.cols() {
        return Err(AbelianError::NonSquareMonodromy(t.rows(), t.cols()));
    }
    if n < 2 {
        return Err(AbelianError::BadDimension(n));
    }
    let t_minus_one = t.sub(&IntMatrix::identity(t.rows()));
    let kk = ker_coker(&t_minus_one);
    let mut groups: BTreeMap<u32, AbelianGroup> = BTreeMap::new();
    for d in 0..=n {
        groups.insert(d, AbelianGroup::zero());
    }
    groups.insert(0, AbelianGroup::free(1));
    if n == 2 {
        groups.insert(2, AbelianGroup::free(kk.kernel_rank));
        // Horizontal cokernel plus the vertical section class; the
        // splitting is not canonical but the isomorphism type is.
        groups.insert(1, kk.cokernel.direct_sum(&AbelianGroup::free(1)));
    } else {
        groups.insert(n, AbelianGroup::free(kk.kernel_rank));
        groups.insert(n - 1, kk.cokernel);
        groups.insert(1, AbelianGroup::free(1));
    }
    Ok(BoundaryHomology {
        groups,
        vertical_degree: 1,
    })
}

/// Matrix of the degree-1 comparison map in the Mayer-Vietoris
/// argument gluing the singular-point neighborhoods to the fibered
/// complement: each of the `n` point neighborhoods receives the
/// vertical circle class (first column) and its own boundary class
/// (identity block). Surjective with free kernel of rank one for
/// every `n`, including the degenerate `0 x 1` case.
pub fn iota1_matrix(n: usize) -> IntMatrix {
    let mut m = IntMatrix::zero(n, n + 1);
    for i in 0..n {
        m[(i, 0)] = BigInt::one();
        m[(i, i + 1)] = BigInt::one();
    }
    m
}

/// What a special point on the singular line contributes to the
/// boundary decomposition of the Milnor fiber.
#[derive(Clone, Debug)]
pub struct BoundaryPiece {
    pub kind: PieceKind,
    /// Complex dimension of the smoothing.
    pub n: u32,
    /// Vertical monodromy on the degree `n - 1` transversal homology.
    pub monodromy: IntMatrix,
    /// Simple degeneracy: discriminant root of multiplicity one with
    /// transversal corank one.
    pub dinfty: bool,
    /// Number of conjugate points sharing this local data.
    pub count: usize,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PieceKind {
    SpecialPoint,
    Axis,
}

impl BoundaryPiece {
    /// Piece for a packet of `count` simple degeneracy points. Going
    /// once around such a point reverses the orientation of the
    /// transversal vanishing sphere, so the vertical monodromy is -1.
    pub fn simple_degeneracy(n: u32, count: usize) -> Self {
        let mut m = IntMatrix::zero(1, 1);
        m[(0, 0)] = BigInt::from(-1);
        BoundaryPiece {
            kind: PieceKind::SpecialPoint,
            n,
            monodromy: m,
            dinfty: true,
            count,
        }
    }
}

/// Axis configuration passed to the assembly.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum AxisInput {
    /// The transversal family is nondegenerate at the axis point; the
    /// fiber over it is contractible and the total space smooth there.
    AInfinity,
    /// The smoothing keeps an isolated singularity at the axis point
    /// with this Milnor number.
    Icis { milnor: u64 },
    /// Compute the affine part only, without closing over the axis.
    Removed,
}

/// Facts that remain valid even when no closed form applies.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PartialFacts {
    pub n: u32,
    pub b0: u64,
    pub b1: u64,
    /// Known for threefolds (the vertical class is everything); the
    /// horizontal surface contribution is not determined here.
    pub b2: Option<u64>,
    pub vertical_rank: u64,
    /// Whether the top Betti number is determined by the Euler
    /// characteristic through `b_top = 2 - euler`.
    pub top_from_euler: bool,
}

impl PartialFacts {
    fn for_dimension(n: u32) -> Self {
        PartialFacts {
            n,
            b0: 1,
            b1: 0,
            b2: if n == 3 { Some(1) } else { None },
            vertical_rank: 1,
            top_from_euler: n == 3,
        }
    }
}

#[derive(Clone, Debug)]
pub enum AssemblyOutcome {
    Full {
        groups: BTreeMap<u32, AbelianGroup>,
        vertical_rank: usize,
    },
    Unsupported {
        facts: PartialFacts,
        reason: String,
    },
}

/// Assemble the homology of the smoothing from its boundary pieces.
///
/// Two configurations admit a closed form. With an empty special set
/// the smoothing retracts onto vertical data alone. With every piece a
/// simple degeneracy and a nondegenerate axis, the affine part is a
/// bouquet of `2k - 1` top spheres (k points contribute a sphere each,
/// and their transversal equators can be moved freely along the line,
/// closing k - 1 more), and the contractible axis neighborhood closes
/// one further sphere. Everything else returns the guaranteed partial
/// facts instead of a guess.
pub fn assemble_rank1_homology(
    n: u32,
    pieces: &[BoundaryPiece],
    axis: &AxisInput,
    transversal: &AbelianGroup,
) -> Result<AssemblyOutcome, AbelianError> {
    if n < 2 || n > 3 {
        return Err(AbelianError::BadDimension(n));
    }
    for piece in pieces {
        if piece.kind == PieceKind::Axis {
            return Err(AbelianError::AxisInPieceList);
        }
        if piece.n != n {
            return Err(AbelianError::PieceDimensionMismatch {
                piece: piece.n,
                ambient: n,
            });
        }
        if piece.dinfty {
            if piece.monodromy.rows() != 1 || piece.monodromy.cols() != 1 {
                return Err(AbelianError::SimpleDegeneracyShape);
            }
            if transversal != &AbelianGroup::free(1) {
                return Err(AbelianError::TransversalMismatch(transversal.to_string()));
            }
        }
    }

    let all_simple = pieces.iter().all(|p| p.dinfty);
    let k: usize = pieces.iter().map(|p| p.count).sum();

    if !all_simple {
        return Ok(AssemblyOutcome::Unsupported {
            facts: PartialFacts::for_dimension(n),
            reason: "a special point is not a simple degeneracy; no closed form applies"
                .to_string(),
        });
    }

    let mut groups: BTreeMap<u32, AbelianGroup> = BTreeMap::new();
    for d in 0..=n {
        groups.insert(d, AbelianGroup::zero());
    }
    groups.insert(0, AbelianGroup::free(1));

    match axis {
        AxisInput::Icis { .. } => Ok(AssemblyOutcome::Unsupported {
            facts: PartialFacts::for_dimension(n),
            reason: "the smoothing keeps an isolated singularity at the axis; \
                     its closure contribution has no closed form here"
                .to_string(),
        }),
        AxisInput::AInfinity => {
            // The degree-1 comparison map is onto with kernel of rank
            // one: the vertical class survives in degree 2 and
            // degree-1 homology dies.
            let kk = ker_coker(&iota1_matrix(k));
            debug_assert_eq!(kk.kernel_rank, 1);
            debug_assert!(kk.cokernel.is_zero());
            let vertical = kk.kernel_rank;
            let horizontal_top = if k == 0 { 0 } else { 2 * k };
            if n == 3 {
                groups.insert(2, AbelianGroup::free(vertical));
                groups.insert(3, AbelianGroup::free(horizontal_top));
            } else {
                groups.insert(2, AbelianGroup::free(horizontal_top + vertical));
            }
            Ok(AssemblyOutcome::Full {
                groups,
                vertical_rank: vertical,
            })
        }
        AxisInput::Removed => {
            // Affine part only: a bouquet of 2k - 1 top spheres for
            // k >= 1; with no special points it is a product with a
            // contractible base and retracts onto the transversal
            // fiber.
            if k == 0 {
                groups.insert(n - 1, transversal.clone());
            } else {
                groups.insert(n, AbelianGroup::free(2 * k - 1));
            }
            Ok(AssemblyOutcome::Full {
                groups,
                vertical_rank: 0,
            })
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn check_decomposition(m: &IntMatrix) {
        let snf = smith_normal_form(m);
        let prod = snf.u.mul(m).mul(&snf.v);
        assert_eq!(prod, snf.s, "u*m*v != s");
        assert_eq!(snf.u.determinant().magnitude(), &BigUint::one());
        assert_eq!(snf.v.determinant().magnitude(), &BigUint::one());
        let diag = snf.diagonal();
        for w in diag.windows(2) {
            if !w[0].is_zero() {
                assert!((&w[1] % &w[0]).is_zero(), "divisor chain broken");
            } else {
                assert!(w[1].is_zero(), "zero before nonzero on the diagonal");
            }
            assert!(!w[0].is_negative() && !w[1].is_negative());
        }
    }

    #[test]
    fn snf_rank_one_difference() {
        let m = IntMatrix::from_rows(&[&[-1, 1], &[1, -1]]);
        let snf = smith_normal_form(&m);
        check_decomposition(&m);
        assert_eq!(
            snf.diagonal(),
            vec![BigInt::from(1), BigInt::from(0)]
        );
    }

    #[test]
    fn snf_merges_coprime_diagonal() {
        let m = IntMatrix::from_rows(&[&[2, 0], &[0, 3]]);
        let snf = smith_normal_form(&m);
        check_decomposition(&m);
        assert_eq!(snf.diagonal(), vec![BigInt::from(1), BigInt::from(6)]);
    }

    #[test]
    fn snf_zero_and_identity() {
        check_decomposition(&IntMatrix::zero(3, 2));
        check_decomposition(&IntMatrix::identity(4));
        let z = smith_normal_form(&IntMatrix::zero(3, 2));
        assert_eq!(z.rank(), 0);
    }

    #[test]
    fn determinant_basics() {
        let m = IntMatrix::from_rows(&[&[2, 0], &[0, 3]]);
        assert_eq!(m.determinant(), BigInt::from(6));
        let p = IntMatrix::from_rows(&[&[0, 1], &[1, 0]]);
        assert_eq!(p.determinant(), BigInt::from(-1));
        let s = IntMatrix::from_rows(&[&[4, 6], &[6, 9]]);
        assert_eq!(s.determinant(), BigInt::zero());
    }

    #[test]
    fn cokernel_of_multiplication_by_two() {
        let m = IntMatrix::from_rows(&[&[2]]);
        let kk = ker_coker(&m);
        assert_eq!(kk.kernel_rank, 0);
        assert_eq!(
            kk.cokernel,
            AbelianGroup {
                free_rank: 0,
                torsion: vec![BigUint::from(2u32)]
            }
        );
    }

    #[test]
    fn direct_sum_renormalizes_torsion() {
        let a = AbelianGroup {
            free_rank: 1,
            torsion: vec![BigUint::from(2u32)],
        };
        let b = AbelianGroup {
            free_rank: 0,
            torsion: vec![BigUint::from(3u32)],
        };
        let sum = a.direct_sum(&b);
        assert_eq!(sum.free_rank, 1);
        assert_eq!(sum.torsion, vec![BigUint::from(6u32)]);
    }

    #[test]
    fn iota1_shape_and_kernel() {
        for n in [0usize, 1, 3, 50] {
            let m = iota1_matrix(n);
            assert_eq!((m.rows(), m.cols()), (n, n + 1));
            let kk = ker_coker(&m);
            assert_eq!(kk.kernel_rank, 1, "kernel rank at n = {n}");
            assert!(kk.cokernel.is_zero(), "cokernel at n = {n}");
        }
    }

    #[test]
    fn wang_trivial_monodromy_threefold() {
        let t = IntMatrix::identity(1);
        let h = wang_homology(&t, 3).unwrap();
        assert_eq!(h.groups[&3], AbelianGroup::free(1));
        assert_eq!(h.groups[&2], AbelianGroup::free(1));
        assert_eq!(h.groups[&1], AbelianGroup::free(1));
        assert_eq!(h.groups[&0], AbelianGroup::free(1));
    }

    #[test]
    fn wang_orientation_reversal_threefold() {
        let mut t = IntMatrix::zero(1, 1);
        t[(0, 0)] = BigInt::from(-1);
        let h = wang_homology(&t, 3).unwrap();
        assert_eq!(h.groups[&3], AbelianGroup::zero());
        assert_eq!(
            h.groups[&2],
            AbelianGroup {
                free_rank: 0,
                torsion: vec![BigUint::from(2u32)]
            }
        );
        assert_eq!(h.groups[&1], AbelianGroup::free(1));
    }

    #[test]
    fn wang_surface_keeps_vertical_summand() {
        let t = IntMatrix::identity(1);
        let h = wang_homology(&t, 2).unwrap();
        assert_eq!(h.groups[&2], AbelianGroup::free(1));
        assert_eq!(h.groups[&1], AbelianGroup::free(2));
        assert_eq!(h.groups[&0], AbelianGroup::free(1));
        assert_eq!(h.vertical_degree, 1);
    }

    #[test]
    fn assembly_of_seven_simple_points() {
        let pieces = [BoundaryPiece::simple_degeneracy(3, 7)];
        let out = assemble_rank1_homology(
            3,
            &pieces,
            &AxisInput::AInfinity,
            &AbelianGroup::free(1),
        )
        .unwrap();
        match out {
            AssemblyOutcome::Full {
                groups,
                vertical_rank,
            } => {
                assert_eq!(groups[&0], AbelianGroup::free(1));
                assert_eq!(groups[&1], AbelianGroup::zero());
                assert_eq!(groups[&2], AbelianGroup::free(1));
                assert_eq!(groups[&3], AbelianGroup::free(14));
                assert_eq!(vertical_rank, 1);
            }
            other => panic!("expected full assembly, got {other:?}"),
        }
    }

    #[test]
    fn assembly_affine_part_loses_one_sphere_and_the_vertical_class() {
        let pieces = [BoundaryPiece::simple_degeneracy(3, 7)];
        let out =
            assemble_rank1_homology(3, &pieces, &AxisInput::Removed, &AbelianGroup::free(1))
                .unwrap();
        match out {
            AssemblyOutcome::Full {
                groups,
                vertical_rank,
            } => {
                assert_eq!(groups[&3], AbelianGroup::free(13));
                assert_eq!(groups[&2], AbelianGroup::zero());
                assert_eq!(vertical_rank, 0);
            }
            other => panic!("expected full assembly, got {other:?}"),
        }
    }

    #[test]
    fn assembly_empty_special_set() {
        let out =
            assemble_rank1_homology(3, &[], &AxisInput::AInfinity, &AbelianGroup::free(1))
                .unwrap();
        match out {
            AssemblyOutcome::Full {
                groups,
                vertical_rank,
            } => {
                assert_eq!(groups[&2], AbelianGroup::free(1));
                assert_eq!(groups[&3], AbelianGroup::zero());
                assert_eq!(vertical_rank, 1);
            }
            other => panic!("expected full assembly, got {other:?}"),
        }
    }

    #[test]
    fn assembly_surface_empty_special_set() {
        let out =
            assemble_rank1_homology(2, &[], &AxisInput::AInfinity, &AbelianGroup::free(1))
                .unwrap();
        match out {
            AssemblyOutcome::Full { groups, .. } => {
                assert_eq!(groups[&2], AbelianGroup::free(1));
                assert_eq!(groups[&1], AbelianGroup::zero());
            }
            other => panic!("expected full assembly, got {other:?}"),
        }
    }

    #[test]
    fn assembly_declines_icis_axis() {
        let pieces = [BoundaryPiece::simple_degeneracy(3, 2)];
        let out = assemble_rank1_homology(
            3,
            &pieces,
            &AxisInput::Icis { milnor: 2 },
            &AbelianGroup::free(1),
        )
        .unwrap();
        match out {
            AssemblyOutcome::Unsupported { facts, .. } => {
                assert_eq!(facts.b0, 1);
                assert_eq!(facts.b1, 0);
                assert_eq!(facts.b2, Some(1));
                assert_eq!(facts.vertical_rank, 1);
                assert!(facts.top_from_euler);
            }
            other => panic!("expected partial facts, got {other:?}"),
        }
    }

    #[test]
    fn assembly_declines_general_monodromy() {
        let piece = BoundaryPiece {
            kind: PieceKind::SpecialPoint,
            n: 3,
            monodromy: IntMatrix::identity(2),
            dinfty: false,
            count: 1,
        };
        let out = assemble_rank1_homology(
            3,
            &[piece],
            &AxisInput::AInfinity,
            &AbelianGroup::free(2),
        )
        .unwrap();
        assert!(matches!(out, AssemblyOutcome::Unsupported { .. }));
    }
}
