//! Darboux transformations of a vector of `p`-orthogonality.
//!
//! Given `(J, C, nu)` whose lambda ladder has nonvanishing `Delta`
//! determinants, the engine picks the free entries of `L^(1), ..., L^(p-1)`
//! stage by stage, assembles the Darboux factorization, and certifies that
//! `nu^(j) = (nu_{j+1}, ..., nu_p, (z-C) nu_1, ..., (z-C) nu_j)` is a vector
//! of `p`-orthogonality for every `P^(j)`.

use num_traits::Zero;
use sha2::{Digest, Sha256};
use thiserror::Error;

use crate::algebra::{format_scalar, DenseMatrix, Scalar};
use crate::banded::{BidiagonalChain, LowerBidiagonalUnit, UnitLowerBanded, UpperBidiagonal};
use crate::factorization::{
    bidiagonal_chain_factor, darboux_transform, peel_stages, shifted_lu, FactorError, FreeEntrySpec, ShiftedInstance,
};
use crate::functionals::{
    delta_det, is_p_orthogonal, lambda_of, moment_budget, FunctionalError, LambdaLadder, LinearFunctional,
    OrthogonalityReport, OrthogonalityVector,
};

/// `L^(1) ... L^(m)` with the unit lower remainder, `J - C I = L^(1) ...
/// L^(m) * remainder * U`, returned when a stage-`m` determinant vanishes.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PartialFactorization {
    pub stages: usize,
    pub factors: Vec<LowerBidiagonalUnit>,
    pub remainder: UnitLowerBanded,
    pub upper: UpperBidiagonal,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum EngineError {
    #[error("hypothesis violated: Delta_{m}^({stage}) = {value}")]
    HypothesisViolated {
        stage: usize,
        m: usize,
        value: String,
        partial: Option<Box<PartialFactorization>>,
    },
    #[error("stage ladder consistency failure at k = {k} (stage {stage})")]
    ConsistencyFailure { stage: usize, k: usize },
    #[error("internal consistency: {0}")]
    Internal(String),
    #[error("{context}: {source}")]
    Factor {
        context: String,
        #[source]
        source: FactorError,
    },
    #[error("{context}: {source}")]
    Functional {
        context: String,
        #[source]
        source: FunctionalError,
    },
}

impl EngineError {
    fn factor(context: impl Into<String>) -> impl FnOnce(FactorError) -> Self {
        let context = context.into();
        move |source| EngineError::Factor { context, source }
    }

    fn functional(context: impl Into<String>) -> impl FnOnce(FunctionalError) -> Self {
        let context = context.into();
        move |source| EngineError::Functional { context, source }
    }
}

/// One `Delta_m^(j)` value.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DeltaValue {
    pub stage: usize,
    pub m: usize,
    pub value: Scalar,
}

/// `Delta_m^(j)` for `j = 0..p`, `m = 1..p-j`, read from the stage-0
/// ladder, without failing on zeros.
pub fn hypothesis_values(ladder: &LambdaLadder, p: usize) -> Result<Vec<DeltaValue>, EngineError> {
    if ladder.num_rows() != p {
        return Err(EngineError::Internal(format!(
            "ladder has {} rows, expected p = {p}",
            ladder.num_rows()
        )));
    }
    let mut out = Vec::new();
    for stage in 0..p {
        for m in 1..p - stage {
            let value = delta_det(ladder, stage, m).map_err(EngineError::functional("delta"))?;
            out.push(DeltaValue { stage, m, value });
        }
    }
    Ok(out)
}

/// All `Delta_m^(j)`, failing on the first zero (ordered by stage, then `m`).
pub fn check_hypotheses(ladder: &LambdaLadder, p: usize) -> Result<Vec<DeltaValue>, EngineError> {
    let values = hypothesis_values(ladder, p)?;
    if let Some(zero) = values.iter().find(|d| d.value.is_zero()) {
        return Err(EngineError::HypothesisViolated {
            stage: zero.stage,
            m: zero.m,
            value: format_scalar(&zero.value),
            partial: None,
        });
    }
    Ok(values)
}

/// `lambda^(j+1)` from `lambda^(j)` and the leading subdiagonal of
/// `L^(j+1)` (`leading_sub[r-1] = sub(r)`).
///
/// Row `k` solves `L^(j+1)_k x = (lambda^(j)(k+1, 0..k))` and must satisfy
/// `lambda^(j)(k+1, k) = sub(k) * x[k-1]`.
pub fn stage_ladder(ladder: &LambdaLadder, leading_sub: &[Scalar]) -> Result<LambdaLadder, EngineError> {
    let rows = ladder.num_rows().saturating_sub(1);
    if leading_sub.len() < rows {
        return Err(EngineError::Internal(format!(
            "stage ladder needs {rows} leading entries, got {}",
            leading_sub.len()
        )));
    }
    let factor = LowerBidiagonalUnit::new(ladder.stage() + 1, leading_sub.to_vec());
    let mut out = Vec::with_capacity(rows);
    for k in 1..=rows {
        let block = factor.leading_dense(k);
        let rhs: Vec<Scalar> = (0..k).map(|s| ladder.get(k + 1, s)).collect();
        let x = block
            .solve_unit_lower_triangular(&rhs)
            .map_err(|e| EngineError::Internal(e.to_string()))?;
        if ladder.get(k + 1, k) != &leading_sub[k - 1] * &x[k - 1] {
            return Err(EngineError::ConsistencyFailure {
                stage: ladder.stage(),
                k,
            });
        }
        out.push(x);
    }
    LambdaLadder::new(ladder.stage() + 1, out).map_err(EngineError::functional("stage ladder"))
}

/// Stage ladders, determinant values and free entries produced by the
/// recursive choice of `L^(1), ..., L^(p-1)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StagePlan {
    /// `lambda^(0), ..., lambda^(p-1)`.
    pub ladders: Vec<LambdaLadder>,
    /// `Delta_m^(j)` computed from `lambda^(j)` (checked against the
    /// stage-0 reading).
    pub deltas: Vec<DeltaValue>,
    /// Free entries of `L^(j+1)`, one list per stage `j = 0..p-1`.
    pub free: Vec<Vec<Scalar>>,
    pub warnings: Vec<String>,
}

struct StageStop {
    stage: usize,
    m: usize,
    value: Scalar,
    free: Vec<Vec<Scalar>>,
}

fn plan(ladder: &LambdaLadder, p: usize) -> Result<Result<StagePlan, StageStop>, EngineError> {
    let mut plan = StagePlan {
        ladders: vec![ladder.clone()],
        deltas: Vec::new(),
        free: Vec::new(),
        warnings: Vec::new(),
    };
    for stage in 0..p.saturating_sub(1) {
        let current = plan.ladders[stage].clone();
        let mut deltas = vec![Scalar::from_integer(1.into())];
        for m in 1..p - stage {
            let direct = delta_det(&current, 0, m).map_err(EngineError::functional("stage delta"))?;
            let via_stage0 = delta_det(ladder, stage, m).map_err(EngineError::functional("delta"))?;
            if direct != via_stage0 {
                return Err(EngineError::Internal(format!(
                    "Delta_{m}^({stage}) is {} from the stage ladder but {} from the stage-0 ladder",
                    format_scalar(&direct),
                    format_scalar(&via_stage0)
                )));
            }
            if direct.is_zero() {
                return Ok(Err(StageStop {
                    stage,
                    m,
                    value: direct,
                    free: plan.free,
                }));
            }
            plan.deltas.push(DeltaValue {
                stage,
                m,
                value: direct.clone(),
            });
            deltas.push(direct);
        }
        let gammas: Vec<Scalar> = (0..p - stage - 1)
            .map(|m| current.get(m + 2, m + 1) * &deltas[m] / &deltas[m + 1])
            .collect();
        for (m, g) in gammas.iter().enumerate() {
            if g.is_zero() {
                plan.warnings.push(format!(
                    "free entry sub({}) of L^({}) is zero; the factor is not regular",
                    m + 1,
                    stage + 1
                ));
            }
        }
        let next = stage_ladder(&current, &gammas)?;
        plan.ladders.push(next);
        plan.free.push(gammas);
    }
    Ok(Ok(plan))
}

/// Recursive choice of free entries
/// `gamma_{m(p+1)+j+2} = lambda^(j)(m+2, m+1) Delta_m^(j) / Delta_{m+1}^(j)`.
pub fn free_entries_from_nu(ladder: &LambdaLadder, p: usize) -> Result<FreeEntrySpec, EngineError> {
    let plan = stage_plan(ladder, p)?;
    FreeEntrySpec::new(p, plan.free).map_err(EngineError::factor("free entries"))
}

/// Full stage plan; a zero determinant is reported as `HypothesisViolated`
/// without a partial factorization.
pub fn stage_plan(ladder: &LambdaLadder, p: usize) -> Result<StagePlan, EngineError> {
    match plan(ladder, p)? {
        Ok(plan) => Ok(plan),
        Err(stop) => Err(EngineError::HypothesisViolated {
            stage: stop.stage,
            m: stop.m,
            value: format_scalar(&stop.value),
            partial: None,
        }),
    }
}

/// `nu^(j) = (nu_{j+1}, ..., nu_p, (z-C) nu_1, ..., (z-C) nu_j)`.
pub fn transformed_nu(nu: &OrthogonalityVector, c: &Scalar, j: usize) -> Result<OrthogonalityVector, EngineError> {
    let p = nu.p();
    if j == 0 || j > p {
        return Err(EngineError::Functional {
            context: "transformed nu".into(),
            source: FunctionalError::IndexOutOfRange { index: j, max: p },
        });
    }
    let mut entries: Vec<LinearFunctional> = (j + 1..=p).map(|r| nu.entry(r).clone()).collect();
    for r in 1..=j {
        entries.push(
            nu.entry(r)
                .shift_multiply(c)
                .map_err(EngineError::functional("transformed nu"))?,
        );
    }
    Ok(OrthogonalityVector::new(entries))
}

/// `L^(1)_s ... L^(j)_s * [lambda^(j) staircase] = [lambda slab]`, with
/// staircase entry `(r, c) = lambda^(j)(c + 2, r)` and slab entry
/// `(r, c) = lambda(j + 2 + c, r)`.
pub fn staircase_identity_holds(
    chain_factors: &[LowerBidiagonalUnit],
    stage_ladder: &LambdaLadder,
    ladder: &LambdaLadder,
    j: usize,
    s: usize,
) -> bool {
    let product = chain_factors[..j]
        .iter()
        .fold(DenseMatrix::identity(s), |acc, f| &acc * &f.leading_dense(s));
    let staircase = DenseMatrix::from_fn(s, s, |r, c| stage_ladder.get(c + 2, r));
    let slab = DenseMatrix::from_fn(s, s, |r, c| ladder.get(j + 2 + c, r));
    &product * &staircase == slab
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StaircaseCheck {
    pub stage: usize,
    pub s: usize,
    pub holds: bool,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StageReport {
    pub j: usize,
    pub report: OrthogonalityReport,
}

/// Everything the engine computed for one instance.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TheoremCertificate {
    pub fingerprint: String,
    pub p: usize,
    pub size: usize,
    pub window: usize,
    pub shift: Scalar,
    pub hypotheses: Vec<DeltaValue>,
    pub ladders: Vec<LambdaLadder>,
    pub stage_deltas: Vec<DeltaValue>,
    pub free: FreeEntrySpec,
    pub chain: BidiagonalChain,
    pub stage_reports: Vec<StageReport>,
    pub staircase_checks: Vec<StaircaseCheck>,
    pub structural_consistency: bool,
    pub warnings: Vec<String>,
}

impl TheoremCertificate {
    pub fn passed(&self) -> bool {
        self.hypotheses.iter().all(|d| !d.value.is_zero())
            && self.stage_reports.iter().all(|r| r.report.passed())
            && self.staircase_checks.iter().all(|c| c.holds)
            && self.structural_consistency
    }
}

/// Stable hash of `(p, N, C, bands, nu moments)`.
pub fn fingerprint(instance: &ShiftedInstance, nu: &OrthogonalityVector) -> String {
    let mut hasher = Sha256::new();
    hasher.update(format!(
        "p={};N={};C={};",
        instance.p(),
        instance.size(),
        format_scalar(instance.shift())
    ));
    for (d, band) in instance.matrix().bands().iter().enumerate() {
        hasher.update(format!("band{d}:"));
        for v in band {
            hasher.update(format_scalar(v));
            hasher.update(",");
        }
    }
    for (r, f) in nu.entries().iter().enumerate() {
        hasher.update(format!("nu{}:", r + 1));
        for m in f.moments() {
            hasher.update(format_scalar(m));
            hasher.update(",");
        }
    }
    hex::encode(&hasher.finalize()[..8])
}

/// Build the Darboux factorization singled out by `nu` and certify every
/// transformed vector on `n <= window`.
pub fn run_theorem(
    instance: &ShiftedInstance,
    nu: &OrthogonalityVector,
    window: usize,
) -> Result<TheoremCertificate, EngineError> {
    let p = instance.p();
    if nu.p() != p {
        return Err(EngineError::Internal(format!(
            "nu has {} entries, expected p = {p}",
            nu.p()
        )));
    }
    if window + 1 >= instance.size() {
        return Err(EngineError::Functional {
            context: "window".into(),
            source: FunctionalError::IndexOutOfRange {
                index: window,
                max: instance.size().saturating_sub(2),
            },
        });
    }
    let budget = moment_budget(window, p);
    let available = nu.max_degree();
    if available < budget {
        return Err(EngineError::Functional {
            context: "moment budget".into(),
            source: FunctionalError::DegreeExceedsMoments {
                degree: budget,
                max: available,
            },
        });
    }
    let ladder = lambda_of(nu, instance.polys()).map_err(EngineError::functional("lambda ladder"))?;
    let hypotheses = hypothesis_values(&ladder, p)?;

    let (lower, upper) = shifted_lu(instance.matrix(), instance.shift()).map_err(EngineError::factor("shifted LU"))?;

    let plan = match plan(&ladder, p)? {
        Ok(plan) => plan,
        Err(stop) => {
            let partial = if stop.stage == 0 {
                None
            } else {
                let mut values = stop.free.clone();
                while values.len() < p - 1 {
                    values.push(vec![Scalar::zero(); p - 1 - values.len()]);
                }
                let free = FreeEntrySpec::new(p, values).map_err(EngineError::factor("partial"))?;
                let (factors, remainder) =
                    peel_stages(&lower, &free, stop.stage).map_err(EngineError::factor("partial factorization"))?;
                Some(Box::new(PartialFactorization {
                    stages: stop.stage,
                    factors,
                    remainder,
                    upper: upper.clone(),
                }))
            };
            return Err(EngineError::HypothesisViolated {
                stage: stop.stage,
                m: stop.m,
                value: format_scalar(&stop.value),
                partial,
            });
        }
    };

    let free = FreeEntrySpec::new(p, plan.free.clone()).map_err(EngineError::factor("free entries"))?;
    let factors = bidiagonal_chain_factor(&lower, &free).map_err(EngineError::factor("bidiagonal chain"))?;
    let chain = BidiagonalChain::new(p, instance.shift().clone(), factors, upper)
        .map_err(|e| EngineError::factor("chain")(e.into()))?;

    let mut stage_reports = Vec::with_capacity(p);
    let mut transformed = vec![nu.clone()];
    for j in 1..=p {
        let polys = darboux_transform(&chain, j)
            .and_then(|m| Ok(m.characteristic_polys(window)?))
            .map_err(EngineError::factor(format!("P^({j})")))?;
        let nu_j = transformed_nu(nu, instance.shift(), j)?;
        let report = is_p_orthogonal(&nu_j, &polys, window)
            .map_err(EngineError::functional(format!("orthogonality of nu^({j})")))?;
        stage_reports.push(StageReport { j, report });
        transformed.push(nu_j);
    }

    let mut staircase_checks = Vec::new();
    for j in 0..p {
        for s in 1..p - j {
            staircase_checks.push(StaircaseCheck {
                stage: j,
                s,
                holds: staircase_identity_holds(chain.factors(), &plan.ladders[j], &ladder, j, s),
            });
        }
    }

    // nu^(j+1) = (nu^(j)_2, ..., nu^(j)_p, (z - C) nu^(j)_1)
    let structural_consistency = (0..p).all(|j| {
        let (prev, next) = (&transformed[j], &transformed[j + 1]);
        let tail_ok = (1..p).all(|r| {
            let a = next.entry(r);
            let b = prev.entry(r + 1);
            a.agrees_up_to(b, a.max_degree().min(b.max_degree()))
        });
        let head = prev.entry(1).shift_multiply(instance.shift());
        let head_ok = head.is_ok_and(|h| {
            let last = next.entry(p);
            last.agrees_up_to(&h, last.max_degree().min(h.max_degree()))
        });
        tail_ok && head_ok
    });

    Ok(TheoremCertificate {
        fingerprint: fingerprint(instance, nu),
        p,
        size: instance.size(),
        window,
        shift: instance.shift().clone(),
        hypotheses,
        ladders: plan.ladders,
        stage_deltas: plan.deltas,
        free,
        chain,
        stage_reports,
        staircase_checks,
        structural_consistency,
        warnings: plan.warnings,
    })
}
