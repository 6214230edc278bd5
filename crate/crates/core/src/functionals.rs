//! Linear functionals on polynomials, stored as truncated moment vectors.
//!
//! A functional knows its moments `m(k) = f[z^k]` for `k = 0..=M` and
//! nothing beyond; applying it to a polynomial of degree above `M` is an
//! error, never an implicit zero.

use num_traits::{One, Zero};
use thiserror::Error;

use crate::algebra::{format_scalar, DenseMatrix, Polynomial, Scalar};
use crate::banded::PolynomialSequence;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FunctionalError {
    #[error("polynomial of degree {degree} exceeds the {max} known moments")]
    DegreeExceedsMoments { degree: usize, max: usize },
    #[error("functional has too few moments for a (z - C) shift")]
    InsufficientMoments,
    #[error("polynomial sequence is not monic with degrees 0, 1, 2, ... (index {0})")]
    NotMonicOrDegreeGap(usize),
    #[error("ladder violation at lambda({i},{k}) = {value}")]
    LadderViolation { i: usize, k: usize, value: String },
    #[error("index {index} out of range (max {max})")]
    IndexOutOfRange { index: usize, max: usize },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LinearFunctional {
    moments: Vec<Scalar>,
}

impl LinearFunctional {
    /// At least one moment is required.
    pub fn new(moments: Vec<Scalar>) -> Self {
        assert!(!moments.is_empty(), "a functional needs at least one moment");
        Self { moments }
    }

    pub fn zero(max_degree: usize) -> Self {
        Self::new(vec![Scalar::zero(); max_degree + 1])
    }

    pub fn max_degree(&self) -> usize {
        self.moments.len() - 1
    }

    pub fn moments(&self) -> &[Scalar] {
        &self.moments
    }

    pub fn moment(&self, k: usize) -> Option<&Scalar> {
        self.moments.get(k)
    }

    pub fn apply(&self, q: &Polynomial) -> Result<Scalar, FunctionalError> {
        let Some(degree) = q.degree() else {
            return Ok(Scalar::zero());
        };
        if degree > self.max_degree() {
            return Err(FunctionalError::DegreeExceedsMoments {
                degree,
                max: self.max_degree(),
            });
        }
        Ok(q.coeffs().iter().zip(&self.moments).map(|(c, m)| c * m).sum())
    }

    /// `f[z^k q]` without forming the shifted polynomial.
    pub fn apply_shifted(&self, k: usize, q: &Polynomial) -> Result<Scalar, FunctionalError> {
        let Some(degree) = q.degree() else {
            return Ok(Scalar::zero());
        };
        if degree + k > self.max_degree() {
            return Err(FunctionalError::DegreeExceedsMoments {
                degree: degree + k,
                max: self.max_degree(),
            });
        }
        Ok(q.coeffs().iter().zip(&self.moments[k..]).map(|(c, m)| c * m).sum())
    }

    /// `(z - C) f`, defined by `((z - C) f)[q] = f[(z - C) q]`; one moment
    /// is consumed.
    pub fn shift_multiply(&self, c: &Scalar) -> Result<Self, FunctionalError> {
        if self.max_degree() == 0 {
            return Err(FunctionalError::InsufficientMoments);
        }
        let moments = self.moments.windows(2).map(|w| &w[1] - c * &w[0]).collect();
        Ok(Self { moments })
    }

    pub fn scale(&self, c: &Scalar) -> Self {
        Self {
            moments: self.moments.iter().map(|m| m * c).collect(),
        }
    }

    pub fn truncated(&self, max_degree: usize) -> Self {
        Self {
            moments: self.moments[..=max_degree.min(self.max_degree())].to_vec(),
        }
    }

    /// `self + c * other` on the common moment range.
    pub fn add_scaled(&self, c: &Scalar, other: &Self) -> Self {
        let n = self.moments.len().min(other.moments.len());
        Self {
            moments: (0..n).map(|k| &self.moments[k] + c * &other.moments[k]).collect(),
        }
    }

    /// Moments `0..=degree` agree; both sides must know them.
    pub fn agrees_up_to(&self, other: &Self, degree: usize) -> bool {
        degree <= self.max_degree()
            && degree <= other.max_degree()
            && self.moments[..=degree] == other.moments[..=degree]
    }
}

/// `(nu_1, ..., nu_p)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OrthogonalityVector {
    entries: Vec<LinearFunctional>,
}

impl OrthogonalityVector {
    pub fn new(entries: Vec<LinearFunctional>) -> Self {
        assert!(!entries.is_empty(), "an orthogonality vector needs p >= 1 entries");
        Self { entries }
    }

    /// First `p` dual functionals `(L_0, ..., L_{p-1})`.
    ///
    /// This always satisfies the orthogonality conditions, but its ladder is
    /// the identity staircase, so `Delta_1^(0) = lambda(2,0) = 0` and the
    /// determinant hypothesis fails whenever `p >= 2`.
    pub fn canonical(duals: &[LinearFunctional], p: usize) -> Result<Self, FunctionalError> {
        if duals.len() < p {
            return Err(FunctionalError::IndexOutOfRange {
                index: p - 1,
                max: duals.len().saturating_sub(1),
            });
        }
        Ok(Self::new(duals[..p].to_vec()))
    }

    pub fn p(&self) -> usize {
        self.entries.len()
    }

    /// `nu_r` for `r = 1..=p`.
    pub fn entry(&self, r: usize) -> &LinearFunctional {
        &self.entries[r - 1]
    }

    pub fn entries(&self) -> &[LinearFunctional] {
        &self.entries
    }

    pub fn max_degree(&self) -> usize {
        self.entries.iter().map(LinearFunctional::max_degree).min().unwrap_or(0)
    }

    pub fn with_entry(&self, r: usize, f: LinearFunctional) -> Self {
        let mut entries = self.entries.clone();
        entries[r - 1] = f;
        Self { entries }
    }
}

/// Coefficients `lambda(i, k)`, `1 <= i <= rows`, `0 <= k < i`, of
/// `nu_i = sum_k lambda(i,k) L_k`. `stage` tags the ladder of a transformed
/// sequence.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LambdaLadder {
    stage: usize,
    rows: Vec<Vec<Scalar>>,
}

impl LambdaLadder {
    /// `rows[i-1]` must have exactly `i` entries.
    pub fn new(stage: usize, rows: Vec<Vec<Scalar>>) -> Result<Self, FunctionalError> {
        for (idx, row) in rows.iter().enumerate() {
            if row.len() != idx + 1 {
                return Err(FunctionalError::IndexOutOfRange {
                    index: row.len(),
                    max: idx + 1,
                });
            }
        }
        Ok(Self { stage, rows })
    }

    /// `lambda(i, k) = delta_{k, i-1}`.
    pub fn identity(p: usize) -> Self {
        let rows = (1..=p)
            .map(|i| {
                (0..i)
                    .map(|k| if k + 1 == i { Scalar::one() } else { Scalar::zero() })
                    .collect()
            })
            .collect();
        Self { stage: 0, rows }
    }

    pub fn stage(&self) -> usize {
        self.stage
    }

    pub fn num_rows(&self) -> usize {
        self.rows.len()
    }

    /// `lambda(i, k)`; zero for `k >= i`.
    pub fn get(&self, i: usize, k: usize) -> Scalar {
        if k >= i {
            Scalar::zero()
        } else {
            self.rows[i - 1][k].clone()
        }
    }

    pub fn row(&self, i: usize) -> &[Scalar] {
        &self.rows[i - 1]
    }

    pub fn rows(&self) -> &[Vec<Scalar>] {
        &self.rows
    }

    /// `lambda(i, i-1) != 0` for every row.
    pub fn is_regular(&self) -> bool {
        self.first_irregular().is_none()
    }

    fn first_irregular(&self) -> Option<usize> {
        (1..=self.rows.len()).find(|&i| self.rows[i - 1][i - 1].is_zero())
    }

    fn require_regular(&self) -> Result<(), FunctionalError> {
        match self.first_irregular() {
            Some(i) => Err(FunctionalError::LadderViolation {
                i,
                k: i - 1,
                value: "0".into(),
            }),
            None => Ok(()),
        }
    }
}

/// Duals `L_0..=L_M` of `P_0..=P_M`, `L_j[P_i] = delta_ij`.
///
/// With `A` the unit lower triangular coefficient matrix of the `P_i`, the
/// moments `L_j[z^k]` form column `j` of `A^{-1}`; each column is one
/// forward substitution.
pub fn dual_sequence(polys: &PolynomialSequence) -> Result<Vec<LinearFunctional>, FunctionalError> {
    for (n, p) in polys.as_slice().iter().enumerate() {
        if p.degree() != Some(n) || !p.is_monic() {
            return Err(FunctionalError::NotMonicOrDegreeGap(n));
        }
    }
    let size = polys.len();
    let coeffs = DenseMatrix::from_fn(size, size, |i, k| polys[i].coeff(k));
    (0..size)
        .map(|j| {
            let e: Vec<Scalar> = (0..size)
                .map(|k| if k == j { Scalar::one() } else { Scalar::zero() })
                .collect();
            let moments = coeffs
                .solve_unit_lower_triangular(&e)
                .expect("monic graded sequence gives a unit triangular system");
            Ok(LinearFunctional::new(moments))
        })
        .collect()
}

/// `lambda(i, k) = nu_i[P_k]`, validating the staircase: zero for
/// `i <= k <= M` and nonzero at `k = i - 1`.
pub fn lambda_of(nu: &OrthogonalityVector, polys: &PolynomialSequence) -> Result<LambdaLadder, FunctionalError> {
    let p = nu.p();
    let mut rows = Vec::with_capacity(p);
    for i in 1..=p {
        let f = nu.entry(i);
        let top = f.max_degree().min(polys.max_index().unwrap_or(0));
        if top + 1 < i {
            return Err(FunctionalError::DegreeExceedsMoments {
                degree: i - 1,
                max: top,
            });
        }
        let row = (0..i).map(|k| f.apply(&polys[k])).collect::<Result<Vec<_>, _>>()?;
        if row[i - 1].is_zero() {
            return Err(FunctionalError::LadderViolation {
                i,
                k: i - 1,
                value: "0".into(),
            });
        }
        for k in i..=top {
            let value = f.apply(&polys[k])?;
            if !value.is_zero() {
                return Err(FunctionalError::LadderViolation {
                    i,
                    k,
                    value: format_scalar(&value),
                });
            }
        }
        rows.push(row);
    }
    Ok(LambdaLadder { stage: 0, rows })
}

/// `nu_i = sum_{k < i} lambda(i, k) L_k`.
pub fn build_nu(ladder: &LambdaLadder, duals: &[LinearFunctional]) -> Result<OrthogonalityVector, FunctionalError> {
    ladder.require_regular()?;
    let p = ladder.num_rows();
    if duals.len() < p {
        return Err(FunctionalError::IndexOutOfRange {
            index: p - 1,
            max: duals.len().saturating_sub(1),
        });
    }
    let entries = (1..=p)
        .map(|i| {
            let zero = LinearFunctional::zero(duals[0].max_degree());
            (0..i).fold(zero, |acc, k| acc.add_scaled(&ladder.get(i, k), &duals[k]))
        })
        .collect();
    Ok(OrthogonalityVector::new(entries))
}

/// `Delta_m^(j)` read from `ladder`: the `m x m` determinant with entry
/// `(r, c) = lambda(j + 1 + c, r)`, `r = 0..m`, `c = 1..=m`, and
/// `Delta_0 = 1`.
///
/// Passing the stage-0 ladder with stage `j` and passing the stage-`j`
/// ladder with `j = 0` give the same value.
pub fn delta_det(ladder: &LambdaLadder, j: usize, m: usize) -> Result<Scalar, FunctionalError> {
    if m == 0 {
        return Ok(Scalar::one());
    }
    if j + m + 1 > ladder.num_rows() {
        return Err(FunctionalError::IndexOutOfRange {
            index: j + m + 1,
            max: ladder.num_rows(),
        });
    }
    let block = DenseMatrix::from_fn(m, m, |r, c| ladder.get(j + 2 + c, r));
    Ok(block.det().expect("square block"))
}

/// Smallest moment degree that lets every orthogonality check up to
/// `window` run, including after one `(z - C)` shift.
pub fn moment_budget(window: usize, p: usize) -> usize {
    window + window.div_ceil(p) + 1
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CheckKind {
    /// `nu_r[z^k P_n] = 0` expected.
    Vanishing,
    /// `nu_r[z^k P_{kp+r-1}] != 0` expected.
    Nonvanishing,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Witness {
    pub r: usize,
    pub k: usize,
    pub n: usize,
    pub kind: CheckKind,
    pub value: Scalar,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OrthogonalityReport {
    pub window: usize,
    pub vanishing_checked: usize,
    pub nonvanishing_checked: usize,
    pub failures: Vec<Witness>,
}

impl OrthogonalityReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

/// Check the `p`-orthogonality conditions of `nu` against `polys` for all
/// `n <= window`.
pub fn is_p_orthogonal(
    nu: &OrthogonalityVector,
    polys: &PolynomialSequence,
    window: usize,
) -> Result<OrthogonalityReport, FunctionalError> {
    let p = nu.p();
    if polys.max_index().is_none_or(|m| m < window) {
        return Err(FunctionalError::IndexOutOfRange {
            index: window,
            max: polys.max_index().unwrap_or(0),
        });
    }
    let mut report = OrthogonalityReport {
        window,
        vanishing_checked: 0,
        nonvanishing_checked: 0,
        failures: Vec::new(),
    };
    for r in 1..=p {
        let f = nu.entry(r);
        for k in 0.. {
            if k * p + r > window + 1 {
                break;
            }
            let anchor = k * p + r - 1;
            let value = f.apply_shifted(k, &polys[anchor])?;
            report.nonvanishing_checked += 1;
            if value.is_zero() {
                report.failures.push(Witness {
                    r,
                    k,
                    n: anchor,
                    kind: CheckKind::Nonvanishing,
                    value,
                });
            }
            for n in anchor + 1..=window {
                let value = f.apply_shifted(k, &polys[n])?;
                report.vanishing_checked += 1;
                if !value.is_zero() {
                    report.failures.push(Witness {
                        r,
                        k,
                        n,
                        kind: CheckKind::Vanishing,
                        value,
                    });
                }
            }
        }
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{int, ratio};
    use crate::banded::BandedHessenberg;
    use proptest::prelude::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn reference_p1(n: usize) -> BandedHessenberg {
        BandedHessenberg::from_recurrence(1, n, |r, c| if r == c { int(2) } else { int(1) }).unwrap()
    }

    fn nonzero(rng: &mut ChaCha8Rng) -> Scalar {
        let mut n = 0;
        while n == 0 {
            n = rng.gen_range(-9..=9);
        }
        ratio(n, rng.gen_range(1..=9))
    }

    fn random_polys(rng: &mut ChaCha8Rng, p: usize, n: usize) -> PolynomialSequence {
        BandedHessenberg::from_recurrence(p, n, |_, _| nonzero(rng))
            .unwrap()
            .characteristic_polys(n)
            .unwrap()
    }

    fn random_ladder(rng: &mut ChaCha8Rng, p: usize) -> LambdaLadder {
        LambdaLadder::new(0, (1..=p).map(|i| (0..i).map(|_| nonzero(rng)).collect()).collect()).unwrap()
    }

    #[test]
    fn apply_examples() {
        let eval0 = LinearFunctional::new(vec![int(1), int(0), int(0)]);
        assert_eq!(eval0.apply(&Polynomial::new(vec![int(-2), int(1)])).unwrap(), int(-2));
        let ones = LinearFunctional::new(vec![int(1); 3]);
        assert_eq!(
            ones.apply(&Polynomial::new(vec![int(-1), int(0), int(1)])).unwrap(),
            int(0)
        );
        assert_eq!(
            ones.apply(&Polynomial::monomial(3)).unwrap_err(),
            FunctionalError::DegreeExceedsMoments { degree: 3, max: 2 }
        );
    }

    #[test]
    fn shift_multiply_examples() {
        let f = LinearFunctional::new(vec![int(1), int(2), int(3)]);
        assert_eq!(f.shift_multiply(&int(0)).unwrap().moments(), &[int(2), int(3)]);
        let g = LinearFunctional::new(vec![int(1); 3]);
        assert_eq!(g.shift_multiply(&int(1)).unwrap().moments(), &[int(0), int(0)]);
        assert_eq!(
            LinearFunctional::new(vec![int(1)]).shift_multiply(&int(0)).unwrap_err(),
            FunctionalError::InsufficientMoments
        );
    }

    #[test]
    fn duals_of_monomials_extract_coefficients() {
        let polys = PolynomialSequence::new((0..5).map(Polynomial::monomial).collect());
        let duals = dual_sequence(&polys).unwrap();
        for (n, d) in duals.iter().enumerate() {
            for k in 0..5 {
                let expected = if k == n { int(1) } else { int(0) };
                assert_eq!(d.moment(k).unwrap(), &expected);
            }
        }
    }

    #[test]
    fn duals_reference_p1() {
        let polys = reference_p1(6).characteristic_polys(6).unwrap();
        let duals = dual_sequence(&polys).unwrap();
        // L_0[P_1] = 0 forces m(1) = 2; L_0[P_2] = 0 forces m(2) = 4*2 - 3 = 5.
        assert_eq!(&duals[0].moments()[..3], &[int(1), int(2), int(5)]);
        assert_eq!(duals[1].apply(&polys[1]).unwrap(), int(1));
        for i in 0..=6 {
            for j in 0..=6 {
                let expected = if i == j { int(1) } else { int(0) };
                assert_eq!(duals[j].apply(&polys[i]).unwrap(), expected);
            }
        }
        let gap = PolynomialSequence::new(vec![Polynomial::one(), Polynomial::monomial(2)]);
        assert_eq!(
            dual_sequence(&gap).unwrap_err(),
            FunctionalError::NotMonicOrDegreeGap(1)
        );
    }

    #[test]
    fn ladder_of_canonical_and_scaled() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let polys = random_polys(&mut rng, 3, 10);
        let duals = dual_sequence(&polys).unwrap();
        let canon = OrthogonalityVector::canonical(&duals, 3).unwrap();
        assert_eq!(lambda_of(&canon, &polys).unwrap(), LambdaLadder::identity(3));

        let scaled = OrthogonalityVector::new(vec![duals[0].scale(&int(3))]);
        assert_eq!(lambda_of(&scaled, &polys).unwrap().get(1, 0), int(3));

        let wrong = OrthogonalityVector::new(vec![duals[1].clone()]);
        assert!(matches!(
            lambda_of(&wrong, &polys),
            Err(FunctionalError::LadderViolation { i: 1, k: 0, .. })
        ));
    }

    #[test]
    fn build_nu_roundtrip_and_orthogonality() {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        for p in 1..=4 {
            let polys = random_polys(&mut rng, p, 16);
            let duals = dual_sequence(&polys).unwrap();
            let ladder = random_ladder(&mut rng, p);
            let nu = build_nu(&ladder, &duals).unwrap();
            assert_eq!(lambda_of(&nu, &polys).unwrap(), ladder);
            let report = is_p_orthogonal(&nu, &polys, 3 * p).unwrap();
            assert!(report.passed(), "{report:?}");
        }
        let identity = build_nu(
            &LambdaLadder::identity(2),
            &dual_sequence(&random_polys(&mut rng, 2, 6)).unwrap(),
        )
        .unwrap();
        assert_eq!(identity.p(), 2);
        let bad = LambdaLadder::new(0, vec![vec![int(0)]]).unwrap();
        assert!(build_nu(&bad, &[LinearFunctional::new(vec![int(1)])]).is_err());
    }

    #[test]
    fn p1_ladder_is_scaling() {
        let polys = reference_p1(6).characteristic_polys(6).unwrap();
        let duals = dual_sequence(&polys).unwrap();
        let ladder = LambdaLadder::new(0, vec![vec![int(7)]]).unwrap();
        let nu = build_nu(&ladder, &duals).unwrap();
        assert_eq!(nu.entry(1), &duals[0].scale(&int(7)));
    }

    fn cofactor(m: &DenseMatrix) -> Scalar {
        let n = m.rows();
        if n == 0 {
            return int(1);
        }
        (0..n)
            .map(|c| {
                let minor = DenseMatrix::from_fn(n - 1, n - 1, |r, cc| {
                    m.get(r + 1, if cc < c { cc } else { cc + 1 }).clone()
                });
                let t = m.get(0, c) * cofactor(&minor);
                if c % 2 == 0 {
                    t
                } else {
                    -t
                }
            })
            .sum()
    }

    #[test]
    fn delta_examples() {
        let canon = LambdaLadder::identity(3);
        for j in 0..3 {
            assert_eq!(delta_det(&canon, j, 0).unwrap(), int(1));
        }
        assert_eq!(delta_det(&canon, 0, 1).unwrap(), int(0));

        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let ladder = random_ladder(&mut rng, 3);
        let block = DenseMatrix::from_rows(vec![
            vec![ladder.get(2, 0), ladder.get(3, 0)],
            vec![ladder.get(2, 1), ladder.get(3, 1)],
        ])
        .unwrap();
        assert_eq!(delta_det(&ladder, 0, 2).unwrap(), cofactor(&block));
        assert_eq!(delta_det(&ladder, 0, 1).unwrap(), ladder.get(2, 0));
        assert_eq!(delta_det(&ladder, 1, 1).unwrap(), ladder.get(3, 0));
        assert!(delta_det(&ladder, 1, 2).is_err());
    }

    #[test]
    fn canonical_is_orthogonal_and_wrong_staircase_fails() {
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        let p = 2;
        let polys = random_polys(&mut rng, p, 14);
        let duals = dual_sequence(&polys).unwrap();
        let canon = OrthogonalityVector::canonical(&duals, p).unwrap();
        assert!(is_p_orthogonal(&canon, &polys, 3 * p).unwrap().passed());

        let wrong = canon.with_entry(1, duals[1].clone());
        let report = is_p_orthogonal(&wrong, &polys, 3 * p).unwrap();
        assert!(!report.passed());
        let first = &report.failures[0];
        assert_eq!(
            (first.r, first.k, first.n, first.kind),
            (1, 0, 0, CheckKind::Nonvanishing)
        );
    }

    #[test]
    fn orthogonality_needs_enough_moments() {
        let polys = reference_p1(10).characteristic_polys(10).unwrap();
        let duals = dual_sequence(&polys).unwrap();
        let nu = OrthogonalityVector::new(vec![duals[0].truncated(4)]);
        assert!(matches!(
            is_p_orthogonal(&nu, &polys, 4),
            Err(FunctionalError::DegreeExceedsMoments { .. })
        ));
        assert_eq!(moment_budget(8, 2), 13);
    }

    fn small_rational() -> impl Strategy<Value = Scalar> {
        (-12i64..=12, 1i64..=6).prop_map(|(n, d)| ratio(n, d))
    }

    proptest! {
        #[test]
        fn shift_multiply_matches_definition(
            moments in prop::collection::vec(small_rational(), 2..8),
            coeffs in prop::collection::vec(small_rational(), 0..6),
            c in small_rational(),
        ) {
            let f = LinearFunctional::new(moments);
            let shifted = f.shift_multiply(&c).unwrap();
            let mut q = Polynomial::new(coeffs);
            if q.degree().is_some_and(|d| d > shifted.max_degree()) {
                q = Polynomial::new(q.coeffs()[..=shifted.max_degree()].to_vec());
            }
            prop_assert_eq!(shifted.apply(&q).unwrap(), f.apply(&q.mul_linear(&c)).unwrap());
        }

        #[test]
        fn scaling_keeps_verdict(seed in 0u64..40, r in 1usize..=3, num in 1i64..9) {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let p = 3;
            let polys = random_polys(&mut rng, p, 14);
            let duals = dual_sequence(&polys).unwrap();
            let nu = build_nu(&random_ladder(&mut rng, p), &duals).unwrap();
            let scaled = nu.with_entry(r, nu.entry(r).scale(&ratio(-num, 2)));
            let a = is_p_orthogonal(&nu, &polys, 2 * p).unwrap().passed();
            let b = is_p_orthogonal(&scaled, &polys, 2 * p).unwrap().passed();
            prop_assert_eq!(a, b);
        }
    }
}
