//! Polynomial and dual-sequence identities linking a sequence to its
//! Darboux transforms. Each check compares exact polynomials or exact
//! moment vectors and records the indices where the identity fails.

use crate::algebra::{AlgebraError, Polynomial, Scalar};
use crate::banded::{BidiagonalChain, PolynomialSequence};
use crate::factorization::{g_matrix, transformed_polys, FactorError, GMatrix};
use crate::functionals::{dual_sequence, FunctionalError, LinearFunctional};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Relation {
    /// `(z-C) P^(j+1)_n = P^(j)_{n+1} + sum_s G^(j)(n, n-s) P^(j)_{n-s}`.
    KernelStage,
    /// `(z-C) P^(p)_n = P_{n+1} + u_n P_n`.
    KernelFull,
    /// `u_n = -P_{n+1}(C) / P_n(C)`.
    UpperDiagonal,
    /// `P^(j)_{m+1} = P^(j+1)_{m+1} + sub_{j+1}(m+1) P^(j+1)_m`.
    FactorStep,
    /// `L^(j+1)_n = L^(j)_n + sub_{j+1}(n+1) L^(j)_{n+1}`.
    DualStep,
    /// `(z-C) L^(j)_n = sum_m G^(j)(m, n) L^(j+1)_m`.
    DualShift,
    /// `(z-C) L_n = L^(p)_{n-1} + u_n L^(p)_n`.
    DualKernel,
}

impl Relation {
    pub fn name(self) -> &'static str {
        match self {
            Relation::KernelStage => "kernel_stage",
            Relation::KernelFull => "kernel_full",
            Relation::UpperDiagonal => "upper_diagonal",
            Relation::FactorStep => "factor_step",
            Relation::DualStep => "dual_step",
            Relation::DualShift => "dual_shift",
            Relation::DualKernel => "dual_kernel",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RelationCheck {
    pub relation: Relation,
    /// Transform index `j` for per-stage relations.
    pub stage: Option<usize>,
    pub checked: usize,
    /// Indices `n` where the identity failed.
    pub failures: Vec<usize>,
}

impl RelationCheck {
    fn new(relation: Relation, stage: Option<usize>) -> Self {
        Self {
            relation,
            stage,
            checked: 0,
            failures: Vec::new(),
        }
    }

    fn record(&mut self, n: usize, holds: bool) {
        self.checked += 1;
        if !holds {
            self.failures.push(n);
        }
    }

    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum RelationError {
    #[error(transparent)]
    Factor(#[from] FactorError),
    #[error(transparent)]
    Functional(#[from] FunctionalError),
    #[error("index {index} outside the checkable range 0..={max}")]
    OutOfRange { index: usize, max: usize },
}

/// Largest `n` every relation can be checked at on a size-`N` chain.
pub fn max_checkable(chain: &BidiagonalChain) -> usize {
    chain.size().saturating_sub(2)
}

fn stage_sequences(chain: &BidiagonalChain, nmax: usize) -> Result<Vec<PolynomialSequence>, RelationError> {
    let top = max_checkable(chain);
    if nmax > top {
        return Err(RelationError::OutOfRange { index: nmax, max: top });
    }
    (0..=chain.p())
        .map(|j| Ok(transformed_polys(chain, j, nmax + 1)?))
        .collect()
}

fn g_row_combination(g: &GMatrix, row: usize, polys: &PolynomialSequence, p: usize) -> Polynomial {
    (row.saturating_sub(p - 1)..=row + 1).fold(Polynomial::zero(), |acc, c| acc + polys[c].scale(&g.entry(row, c)))
}

/// Polynomial identities for `n <= nmax`.
pub fn check_polynomial_relations(chain: &BidiagonalChain, nmax: usize) -> Result<Vec<RelationCheck>, RelationError> {
    let p = chain.p();
    let c = chain.shift();
    let seq = stage_sequences(chain, nmax)?;
    let mut out = Vec::new();

    for j in 0..p {
        let g = g_matrix(chain, j)?;
        let mut check = RelationCheck::new(Relation::KernelStage, Some(j));
        for n in 0..=nmax {
            let lhs = seq[j + 1][n].mul_linear(c);
            check.record(n, lhs == g_row_combination(&g, n, &seq[j], p));
        }
        out.push(check);
    }

    let mut full = RelationCheck::new(Relation::KernelFull, None);
    let mut upper = RelationCheck::new(Relation::UpperDiagonal, None);
    for n in 0..=nmax {
        let u = chain.upper().diag(n);
        let rhs = &seq[0][n + 1] + &seq[0][n].scale(u);
        full.record(n, seq[p][n].mul_linear(c) == rhs);
        let ratio = -(seq[0][n + 1].eval(c) / seq[0][n].eval(c));
        upper.record(n, &ratio == u);
    }
    out.push(full);
    out.push(upper);

    for j in 0..p {
        let factor = chain.factor(j + 1);
        let mut check = RelationCheck::new(Relation::FactorStep, Some(j));
        for m in 0..=nmax {
            let rhs = &seq[j + 1][m + 1] + &seq[j + 1][m].scale(factor.sub(m + 1));
            check.record(m, seq[j][m + 1] == rhs);
        }
        out.push(check);
    }
    Ok(out)
}

/// Dual-sequence identities, using the duals of `P^(j)_0..=P^(j)_{nmax+1}`
/// and comparing moments up to the degree both sides know exactly.
pub fn check_dual_relations(chain: &BidiagonalChain, nmax: usize) -> Result<Vec<RelationCheck>, RelationError> {
    let p = chain.p();
    let c = chain.shift();
    let seq = stage_sequences(chain, nmax)?;
    let top = nmax + 1;
    let duals: Vec<Vec<LinearFunctional>> = seq.iter().map(dual_sequence).collect::<Result<_, _>>()?;
    let mut out = Vec::new();

    for j in 0..p {
        let factor = chain.factor(j + 1);
        let mut check = RelationCheck::new(Relation::DualStep, Some(j));
        for n in 0..top {
            let rhs = duals[j][n].add_scaled(factor.sub(n + 1), &duals[j][n + 1]);
            check.record(n, duals[j + 1][n].agrees_up_to(&rhs, top));
        }
        out.push(check);
    }

    for j in 0..p {
        let g = g_matrix(chain, j)?;
        let last_row = top.min(g.valid_rows().saturating_sub(1));
        let mut check = RelationCheck::new(Relation::DualShift, Some(j));
        for n in 0..=top {
            if n + p - 1 > last_row {
                break;
            }
            let lhs = duals[j][n].shift_multiply(c)?;
            let rhs = (n.saturating_sub(1)..n + p).fold(LinearFunctional::zero(top), |acc, m| {
                acc.add_scaled(&g.entry(m, n), &duals[j + 1][m])
            });
            check.record(n, lhs.agrees_up_to(&rhs, top - 1));
        }
        out.push(check);
    }

    let mut kernel = RelationCheck::new(Relation::DualKernel, None);
    for n in 0..top {
        let lhs = duals[0][n].shift_multiply(c)?;
        let base = if n == 0 {
            LinearFunctional::zero(top)
        } else {
            duals[p][n - 1].clone()
        };
        let rhs = base.add_scaled(chain.upper().diag(n), &duals[p][n]);
        kernel.record(n, lhs.agrees_up_to(&rhs, top - 1));
    }
    out.push(kernel);
    Ok(out)
}

/// Classical kernel polynomial
/// `(P_{n+1} - (P_{n+1}(C) / P_n(C)) P_n) / (z - C)`.
pub fn classical_kernel(polys: &PolynomialSequence, c: &Scalar, n: usize) -> Result<Polynomial, AlgebraError> {
    let ratio = polys[n + 1].eval(c) / polys[n].eval(c);
    (&polys[n + 1] - &polys[n].scale(&ratio)).div_linear(c)
}
