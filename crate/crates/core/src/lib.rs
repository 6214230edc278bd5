//! Exact Darboux factorizations of banded Hessenberg matrices.
//!
//! A lower Hessenberg matrix `J` with `p` subdiagonals and unit
//! superdiagonal generates monic polynomials `P_n = det(z I_n - J_n)`.
//! For a shift `C` with every `P_n(C) != 0`, `J - C I` splits as
//! `L^(1) ... L^(p) U`; cyclic permutations of the factors give the
//! transforms `J^(j)`, and suitable free entries carry a vector of
//! `p`-orthogonality for `P_n` over to each `P^(j)_n`.
//!
//! All arithmetic is over exact rationals.

#![allow(clippy::needless_range_loop)]

pub mod algebra;
pub mod banded;
pub mod engine;
pub mod factorization;
pub mod functionals;
pub mod harness;
pub mod relations;
