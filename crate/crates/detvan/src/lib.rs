//! Exact computation of the integer homology of Milnor fibers of
//! space curve and threefold singularities presented by a 3x2 matrix
//! of polynomials.
//!
//! The input is a matrix `A` with polynomial entries vanishing at the
//! origin; its 2x2 minors cut out a codimension-2 Cohen-Macaulay
//! singularity. The toolkit resolves the singularity by the Tjurina
//! transform, perturbs the matrix by a generic rank-1 direction,
//! classifies the resulting line singularity through its transversal
//! quadratic family, and assembles the homology of the smoothing from
//! exact integer linear algebra.
//!
//! All arithmetic is exact: polynomial coefficients are
//! arbitrary-precision rationals and homology groups come out of Smith
//! normal forms over the integers. Randomness only enters through
//! seeded genericity choices, so every run is reproducible.
//!
//! The crate is organized bottom-up:
//!
//! * [`poly`]: multivariate polynomials over the rationals,
//!   derivatives, substitution, univariate gcd and squarefree
//!   decomposition.
//! * [`parse`]: a small expression grammar and the JSON model format.
//! * [`ideal`]: Groebner and local standard bases, colengths,
//!   dimensions, Milnor numbers, singular loci and polar curves.
//! * [`abelian`]: integer matrices, Smith normal form, kernels and
//!   cokernels, boundary fibration homology, homology assembly.
//! * [`model`]: the 3x2 matrix model, Tjurina charts, rank-1
//!   perturbations, quadratic families and their degeneracy points.
//! * [`pipeline`]: the end-to-end analysis and its report.
//! * [`cli`]: the command line interface used by the `detvan` binary.

pub mod abelian;
pub mod cli;
pub mod ideal;
pub mod model;
pub mod parse;
pub mod pipeline;
pub mod poly;
