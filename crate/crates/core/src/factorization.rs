//! Shifted LU, the bidiagonal chain `L = L^(1) ... L^(p)`, and the
//! circular-permutation transforms `J^(j)`.

use num_traits::Zero;
use thiserror::Error;

use crate::algebra::Scalar;
use crate::banded::{
    BandMatrix, BandedError, BandedHessenberg, BidiagonalChain, LowerBidiagonalUnit, PolynomialSequence,
    UnitLowerBanded, UpperBidiagonal,
};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FactorError {
    /// `det(C I_n - J_n) = 0`, i.e. `P_n(C) = 0`.
    #[error("leading minor {0} of J - C I is singular")]
    SingularLeadingMinor(usize),
    #[error("zero pivot while peeling factor L^({stage}) at row {row}")]
    ZeroPeelPivot { stage: usize, row: usize },
    #[error("bad free-entry specification: {0}")]
    BadFreeSpec(String),
    #[error("index {index} out of range (max {max})")]
    IndexOutOfRange { index: usize, max: usize },
    #[error(transparent)]
    Banded(#[from] BandedError),
}

/// `J` together with a shift `C` satisfying `P_n(C) != 0` for every
/// `n = 1..=N`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ShiftedInstance {
    matrix: BandedHessenberg,
    shift: Scalar,
    polys: PolynomialSequence,
}

impl ShiftedInstance {
    pub fn new(matrix: BandedHessenberg, shift: Scalar) -> Result<Self, FactorError> {
        let polys = matrix.characteristic_polys(matrix.size())?;
        if let Some(n) = first_vanishing(&polys, &shift) {
            return Err(FactorError::SingularLeadingMinor(n));
        }
        Ok(Self { matrix, shift, polys })
    }

    pub fn matrix(&self) -> &BandedHessenberg {
        &self.matrix
    }

    pub fn p(&self) -> usize {
        self.matrix.p()
    }

    pub fn size(&self) -> usize {
        self.matrix.size()
    }

    pub fn shift(&self) -> &Scalar {
        &self.shift
    }

    /// `P_0..=P_N`.
    pub fn polys(&self) -> &PolynomialSequence {
        &self.polys
    }
}

/// Smallest `n >= 1` with `P_n(C) = 0`.
pub fn first_vanishing(polys: &PolynomialSequence, c: &Scalar) -> Option<usize> {
    (1..polys.len()).find(|&n| polys[n].eval(c).is_zero())
}

/// Prescribed subdiagonal entries: `value(j, r)` is `sub(r)` of `L^(j)` for
/// `j = 1..p` and `r = 1..=p-j`, `p(p-1)/2` values in total.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FreeEntrySpec {
    p: usize,
    values: Vec<Vec<Scalar>>,
}

impl FreeEntrySpec {
    /// `values[j-1]` holds the `p - j` entries of `L^(j)`.
    pub fn new(p: usize, values: Vec<Vec<Scalar>>) -> Result<Self, FactorError> {
        if p == 0 {
            return Err(FactorError::BadFreeSpec("p must be at least 1".into()));
        }
        if values.len() != p - 1 {
            return Err(FactorError::BadFreeSpec(format!(
                "expected {} factor lists, got {}",
                p - 1,
                values.len()
            )));
        }
        for (i, row) in values.iter().enumerate() {
            let j = i + 1;
            if row.len() != p - j {
                return Err(FactorError::BadFreeSpec(format!(
                    "L^({j}) takes {} free entries, got {}",
                    p - j,
                    row.len()
                )));
            }
        }
        Ok(Self { p, values })
    }

    pub fn filled(p: usize, value: &Scalar) -> Self {
        let values = (1..p).map(|j| vec![value.clone(); p - j]).collect();
        Self { p, values }
    }

    pub fn p(&self) -> usize {
        self.p
    }

    pub fn value(&self, j: usize, r: usize) -> &Scalar {
        &self.values[j - 1][r - 1]
    }

    pub fn values(&self) -> &[Vec<Scalar>] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.values.iter().map(Vec::len).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}

/// `J - C I = L U` with `L` unit lower (`p` subdiagonals) and `U` upper
/// bidiagonal with unit superdiagonal.
///
/// Row `n` gives `L(n, m) = (a(n, m) - L(n, m - 1)) / u_m` for
/// `m = n-p..n`, then `u_n = a(n, n) - C - L(n, n - 1)`.
pub fn shifted_lu(
    matrix: &BandedHessenberg,
    shift: &Scalar,
) -> Result<(UnitLowerBanded, UpperBidiagonal), FactorError> {
    let n = matrix.size();
    let p = matrix.p();
    let mut lower = UnitLowerBanded::identity(n, p);
    let mut diag: Vec<Scalar> = Vec::with_capacity(n);
    for r in 0..n {
        let mut prev = Scalar::zero();
        for m in r.saturating_sub(p)..r {
            let a = matrix.get(r, m);
            let l = (a - &prev) / &diag[m];
            lower.set(r, m, l.clone());
            prev = l;
        }
        let u = matrix.get(r, r) - shift - prev;
        if u.is_zero() {
            return Err(FactorError::SingularLeadingMinor(r + 1));
        }
        diag.push(u);
    }
    Ok((lower, UpperBidiagonal::new(diag)))
}

/// Split `L` into `L^(1) ... L^(p)` by peeling one bidiagonal factor per
/// stage.
pub fn bidiagonal_chain_factor(
    lower: &UnitLowerBanded,
    free: &FreeEntrySpec,
) -> Result<Vec<LowerBidiagonalUnit>, FactorError> {
    let p = free.p();
    let (mut factors, rest) = peel_stages(lower, free, p - 1)?;
    let n = rest.size();
    let last = (1..n).map(|r| rest.get(r, r - 1)).collect();
    factors.push(LowerBidiagonalUnit::new(p, last));
    Ok(factors)
}

/// Peel the first `stages` factors, returning them with the remaining unit
/// lower factor (`p - stages` subdiagonals), so that
/// `L = L^(1) ... L^(stages) * rest` on the full truncation.
///
/// At stage `j` the current remainder `M` has `w = p - j + 1` subdiagonals.
/// Row `r` of `M = L^(j) M'` reads `M(r, c) = M'(r, c) + s_r M'(r - 1, c)`;
/// for `r >= w` the column `r - w` lies outside `M'`, which pins
/// `s_r = M(r, r - w) / M'(r - 1, r - w)`. Rows `r < w` are free. A zero
/// pivot is an error unless the target entry is also zero, in which case
/// the row is undetermined and `s_r = 0` is used.
pub fn peel_stages(
    lower: &UnitLowerBanded,
    free: &FreeEntrySpec,
    stages: usize,
) -> Result<(Vec<LowerBidiagonalUnit>, UnitLowerBanded), FactorError> {
    let p = free.p();
    if lower.bandwidth() != p {
        return Err(FactorError::BadFreeSpec(format!(
            "L has {} subdiagonals but the spec is for p = {p}",
            lower.bandwidth()
        )));
    }
    if stages >= p {
        return Err(FactorError::IndexOutOfRange {
            index: stages,
            max: p - 1,
        });
    }
    let n = lower.size();
    let mut current = lower.clone();
    let mut factors = Vec::with_capacity(stages + 1);
    for j in 1..=stages {
        let w = p - j + 1;
        let mut next = UnitLowerBanded::identity(n, w - 1);
        let mut sub = Vec::with_capacity(n.saturating_sub(1));
        for r in 1..n {
            let s = if r < w {
                free.value(j, r).clone()
            } else {
                let pivot = next.get(r - 1, r - w);
                let target = current.get(r, r - w);
                if pivot.is_zero() {
                    // 0 = s * 0 holds for every s; take s = 0.
                    if !target.is_zero() {
                        return Err(FactorError::ZeroPeelPivot { stage: j, row: r });
                    }
                    Scalar::zero()
                } else {
                    target / pivot
                }
            };
            for c in (r + 1).saturating_sub(w)..r {
                let v = current.get(r, c) - &s * next.get(r - 1, c);
                next.set(r, c, v);
            }
            sub.push(s);
        }
        factors.push(LowerBidiagonalUnit::new(j, sub));
        current = next;
    }
    Ok((factors, current))
}

/// Full Darboux factorization with the given free entries.
pub fn factorize(instance: &ShiftedInstance, free: &FreeEntrySpec) -> Result<BidiagonalChain, FactorError> {
    let (lower, upper) = shifted_lu(instance.matrix(), instance.shift())?;
    let factors = bidiagonal_chain_factor(&lower, free)?;
    Ok(BidiagonalChain::new(
        instance.p(),
        instance.shift().clone(),
        factors,
        upper,
    )?)
}

/// `J^(j) = C I + L^(j+1) ... L^(p) U L^(1) ... L^(j)`; `j = 0` rebuilds
/// `J` itself.
pub fn darboux_transform(chain: &BidiagonalChain, j: usize) -> Result<BandedHessenberg, FactorError> {
    let p = chain.p();
    if j > p {
        return Err(FactorError::IndexOutOfRange { index: j, max: p });
    }
    let left = chain.factor_product(j + 1, p);
    let right = chain.factor_product(1, j);
    let product = left
        .multiply_window(&chain.upper().to_band_matrix())?
        .multiply_window(&right)?
        .add_scalar_identity(chain.shift());
    Ok(BandedHessenberg::from_band_matrix(p, &product)?)
}

/// `G^(j) = L^(j+2) ... L^(p) U L^(1) ... L^(j)` for `j = 0..p`, a
/// Hessenberg matrix with `p - 1` subdiagonals and unit superdiagonal.
///
/// In 0-based indices, `(z - C) P^(j+1)_n = sum_c G(n, c) P^(j)_c`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GMatrix {
    j: usize,
    inner: BandMatrix,
}

impl GMatrix {
    pub fn stage(&self) -> usize {
        self.j
    }

    /// 0-based entry.
    pub fn entry(&self, row: usize, col: usize) -> Scalar {
        self.inner.get(row, col)
    }

    pub fn valid_rows(&self) -> usize {
        self.inner.valid_rows()
    }

    pub fn as_band(&self) -> &BandMatrix {
        &self.inner
    }
}

pub fn g_matrix(chain: &BidiagonalChain, j: usize) -> Result<GMatrix, FactorError> {
    let p = chain.p();
    if j >= p {
        return Err(FactorError::IndexOutOfRange { index: j, max: p - 1 });
    }
    let left = chain.factor_product(j + 2, p);
    let right = chain.factor_product(1, j);
    let inner = left
        .multiply_window(&chain.upper().to_band_matrix())?
        .multiply_window(&right)?;
    Ok(GMatrix { j, inner })
}

/// `P^(j)_0..=P^(j)_nmax` from the recurrence of `J^(j)`.
pub fn transformed_polys(chain: &BidiagonalChain, j: usize, nmax: usize) -> Result<PolynomialSequence, FactorError> {
    Ok(darboux_transform(chain, j)?.characteristic_polys(nmax)?)
}

/// Theorem-style `gamma_{n(p+1)+1} = -P_{n+1}(C) / P_n(C)`.
pub fn upper_diag_from_polys(polys: &PolynomialSequence, c: &Scalar, n: usize) -> Scalar {
    -(polys[n + 1].eval(c) / polys[n].eval(c))
}

/// Whether every subdiagonal of every factor is nonzero.
pub fn chain_is_regular(chain: &BidiagonalChain) -> bool {
    chain.factors().iter().all(LowerBidiagonalUnit::is_regular) && chain.upper().diagonal().iter().all(|u| !u.is_zero())
}

/// Dense `L^(1) ... L^(p)` reconstructed from a chain, mainly for checks.
pub fn chain_lower(chain: &BidiagonalChain) -> Result<UnitLowerBanded, FactorError> {
    Ok(UnitLowerBanded::from_band_matrix(chain.factor_product(1, chain.p()))?)
}

impl FreeEntrySpec {
    /// Entries read back from an existing chain.
    pub fn from_chain(chain: &BidiagonalChain) -> Self {
        let p = chain.p();
        let values = (1..p)
            .map(|j| (1..=p - j).map(|r| chain.factor(j).sub(r).clone()).collect())
            .collect();
        Self { p, values }
    }
}
