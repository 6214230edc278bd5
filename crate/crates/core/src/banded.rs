//! Finite truncations of infinite banded matrices.
//!
//! All indices are 0-based. Row `n` of a truncated product is only trusted
//! when it agrees with row `n` of the infinite product on every visible
//! column; each [`BandMatrix`] carries that bound as `valid_rows` and
//! [`BandMatrix::multiply_window`] propagates it.

use num_traits::{One, Zero};
use thiserror::Error;

use crate::algebra::{DenseMatrix, Polynomial, Scalar};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum BandedError {
    #[error("size mismatch: {left} vs {right}")]
    SizeMismatch { left: usize, right: usize },
    #[error("matrix is not a unit-superdiagonal Hessenberg with {p} subdiagonals: {reason}")]
    NotHessenberg { p: usize, reason: String },
    #[error("requested {requested} rows but only {valid} are valid")]
    WindowExceeded { requested: usize, valid: usize },
    #[error("band parameter p must be at least 1")]
    ZeroBand,
}

/// Generic banded storage with `lower` subdiagonals and `upper`
/// superdiagonals.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BandMatrix {
    size: usize,
    lower: usize,
    upper: usize,
    data: Vec<Scalar>,
    valid_rows: usize,
}

impl BandMatrix {
    pub fn zeros(size: usize, lower: usize, upper: usize) -> Self {
        Self {
            size,
            lower,
            upper,
            data: vec![Scalar::zero(); size * (lower + upper + 1)],
            valid_rows: size,
        }
    }

    pub fn identity(size: usize) -> Self {
        let mut m = Self::zeros(size, 0, 0);
        for n in 0..size {
            m.set(n, n, Scalar::one());
        }
        m
    }

    pub fn size(&self) -> usize {
        self.size
    }

    pub fn lower(&self) -> usize {
        self.lower
    }

    pub fn upper(&self) -> usize {
        self.upper
    }

    /// Rows `0..valid_rows` agree with the infinite matrix.
    pub fn valid_rows(&self) -> usize {
        self.valid_rows
    }

    pub fn with_valid_rows(mut self, valid_rows: usize) -> Self {
        self.valid_rows = valid_rows.min(self.size);
        self
    }

    fn in_band(&self, r: usize, c: usize) -> bool {
        r < self.size && c < self.size && c + self.lower >= r && c <= r + self.upper
    }

    fn slot(&self, r: usize, c: usize) -> usize {
        r * (self.lower + self.upper + 1) + (c + self.lower - r)
    }

    pub fn get(&self, r: usize, c: usize) -> Scalar {
        if self.in_band(r, c) {
            self.data[self.slot(r, c)].clone()
        } else {
            Scalar::zero()
        }
    }

    /// Panics when `(r, c)` lies outside the band.
    pub fn set(&mut self, r: usize, c: usize, v: Scalar) {
        assert!(self.in_band(r, c), "entry ({r},{c}) outside band");
        let slot = self.slot(r, c);
        self.data[slot] = v;
    }

    /// Visible column range of row `r`.
    pub fn row_span(&self, r: usize) -> std::ops::Range<usize> {
        r.saturating_sub(self.lower)..(r + self.upper + 1).min(self.size)
    }

    /// Truncated product `self * other` with its valid-row bound.
    ///
    /// Row `n` is exact when row `n` of `self` is valid, no term from beyond
    /// the truncation can land in a visible column, and the rows of `other`
    /// it reaches are themselves valid.
    pub fn multiply_window(&self, other: &BandMatrix) -> Result<BandMatrix, BandedError> {
        if self.size != other.size {
            return Err(BandedError::SizeMismatch {
                left: self.size,
                right: other.size,
            });
        }
        let n = self.size;
        let mut out = BandMatrix::zeros(n, self.lower + other.lower, self.upper + other.upper);
        for r in 0..n {
            for k in self.row_span(r) {
                let a = &self.data[self.slot(r, k)];
                if a.is_zero() {
                    continue;
                }
                for c in other.row_span(k) {
                    let b = &other.data[other.slot(k, c)];
                    if !b.is_zero() {
                        let slot = out.slot(r, c);
                        out.data[slot] += a * b;
                    }
                }
            }
        }
        // Terms A(r, k) B(k, c) with k >= N only reach visible columns
        // when B has a subdiagonal.
        let edge = if other.lower == 0 {
            n
        } else {
            n.saturating_sub(self.upper)
        };
        let reach = if other.valid_rows >= n {
            n
        } else {
            other.valid_rows.saturating_sub(self.upper)
        };
        out.valid_rows = self.valid_rows.min(edge).min(reach);
        Ok(out)
    }

    pub fn add_scalar_identity(&self, c: &Scalar) -> BandMatrix {
        let mut out = self.clone();
        for n in 0..self.size {
            let slot = out.slot(n, n);
            out.data[slot] += c;
        }
        out
    }

    pub fn to_dense(&self) -> DenseMatrix {
        DenseMatrix::from_fn(self.size, self.size, |r, c| self.get(r, c))
    }

    /// Equality of the entries on rows `0..rows`.
    pub fn rows_equal(&self, other: &BandMatrix, rows: usize) -> bool {
        let span = self.size.min(other.size);
        (0..rows.min(span)).all(|r| (0..span).all(|c| self.get(r, c) == other.get(r, c)))
    }
}

/// `(p+2)`-banded lower Hessenberg truncation: `p` subdiagonals, the
/// diagonal, and an implicit unit superdiagonal that is never stored.
///
/// `bands[d][n - d]` holds `a(n, n - d)` for `n = d..N`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BandedHessenberg {
    p: usize,
    size: usize,
    bands: Vec<Vec<Scalar>>,
    valid_rows: usize,
}

impl BandedHessenberg {
    /// Build from per-band vectors; `bands[d]` must have `N - d` entries.
    pub fn from_bands(p: usize, size: usize, bands: Vec<Vec<Scalar>>) -> Result<Self, BandedError> {
        if p == 0 {
            return Err(BandedError::ZeroBand);
        }
        if bands.len() != p + 1 {
            return Err(BandedError::NotHessenberg {
                p,
                reason: format!("expected {} bands, got {}", p + 1, bands.len()),
            });
        }
        for (d, band) in bands.iter().enumerate() {
            if band.len() != size.saturating_sub(d) {
                return Err(BandedError::NotHessenberg {
                    p,
                    reason: format!(
                        "band -{d} has {} entries, expected {}",
                        band.len(),
                        size.saturating_sub(d)
                    ),
                });
            }
        }
        Ok(Self {
            p,
            size,
            bands,
            valid_rows: size,
        })
    }

    /// Fill every in-band position from `coeff(n, m)`.
    pub fn from_recurrence(
        p: usize,
        size: usize,
        mut coeff: impl FnMut(usize, usize) -> Scalar,
    ) -> Result<Self, BandedError> {
        let bands = (0..=p).map(|d| (d..size).map(|n| coeff(n, n - d)).collect()).collect();
        Self::from_bands(p, size, bands)
    }

    /// Reinterpret a band product as a Hessenberg matrix; the superdiagonal
    /// must be identically one and nothing may sit above it.
    pub fn from_band_matrix(p: usize, m: &BandMatrix) -> Result<Self, BandedError> {
        let n = m.size();
        for r in 0..n {
            for c in m.row_span(r) {
                let v = m.get(r, c);
                if c == r + 1 && !v.is_one() {
                    return Err(BandedError::NotHessenberg {
                        p,
                        reason: format!("superdiagonal entry ({r},{c}) is {v}"),
                    });
                }
                if (c > r + 1 || c + p < r) && !v.is_zero() {
                    return Err(BandedError::NotHessenberg {
                        p,
                        reason: format!("entry ({r},{c}) outside the band is {v}"),
                    });
                }
            }
        }
        let mut h = Self::from_recurrence(p, n, |r, c| m.get(r, c))?;
        h.valid_rows = m.valid_rows();
        Ok(h)
    }

    pub fn p(&self) -> usize {
        self.p
    }

    pub fn size(&self) -> usize {
        self.size
    }

    pub fn valid_rows(&self) -> usize {
        self.valid_rows
    }

    /// `a(n, n - d)`; `None` when outside the band or truncation.
    pub fn band_entry(&self, n: usize, d: usize) -> Option<&Scalar> {
        if d > self.p || n < d || n >= self.size {
            return None;
        }
        Some(&self.bands[d][n - d])
    }

    pub fn bands(&self) -> &[Vec<Scalar>] {
        &self.bands
    }

    /// Full entry lookup including the implicit superdiagonal.
    pub fn get(&self, r: usize, c: usize) -> Scalar {
        if c == r + 1 && c < self.size {
            Scalar::one()
        } else if c <= r {
            self.band_entry(r, r - c).cloned().unwrap_or_else(Scalar::zero)
        } else {
            Scalar::zero()
        }
    }

    /// `a(n, n - p) != 0` for every `n >= p` in the truncation.
    pub fn is_regular(&self) -> bool {
        self.bands[self.p].iter().all(|v| !v.is_zero())
    }

    pub fn to_band_matrix(&self) -> BandMatrix {
        let mut m = BandMatrix::zeros(self.size, self.p, 1);
        for r in 0..self.size {
            for c in m.row_span(r) {
                m.set(r, c, self.get(r, c));
            }
        }
        m.with_valid_rows(self.valid_rows)
    }

    pub fn to_dense(&self) -> DenseMatrix {
        DenseMatrix::from_fn(self.size, self.size, |r, c| self.get(r, c))
    }

    /// `P_0..=P_nmax` from the recurrence
    /// `P_{n+1} = (z - a(n,n)) P_n - sum_{d=1..p} a(n, n-d) P_{n-d}`,
    /// which equals `det(z I_n - J_n)`.
    pub fn characteristic_polys(&self, nmax: usize) -> Result<PolynomialSequence, BandedError> {
        if nmax > self.valid_rows {
            return Err(BandedError::WindowExceeded {
                requested: nmax,
                valid: self.valid_rows,
            });
        }
        let mut polys = Vec::with_capacity(nmax + 1);
        polys.push(Polynomial::one());
        for n in 0..nmax {
            let mut next = polys[n].mul_linear(&self.bands[0][n]);
            for d in 1..=self.p.min(n) {
                next = next - polys[n - d].scale(&self.bands[d][n - d]);
            }
            polys.push(next);
        }
        Ok(PolynomialSequence::new(polys))
    }
}

/// Monic polynomials `P_0, P_1, ...` of one stage.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PolynomialSequence {
    polys: Vec<Polynomial>,
}

impl PolynomialSequence {
    pub fn new(polys: Vec<Polynomial>) -> Self {
        Self { polys }
    }

    pub fn len(&self) -> usize {
        self.polys.len()
    }

    pub fn is_empty(&self) -> bool {
        self.polys.is_empty()
    }

    /// Highest available index.
    pub fn max_index(&self) -> Option<usize> {
        self.polys.len().checked_sub(1)
    }

    pub fn get(&self, n: usize) -> Option<&Polynomial> {
        self.polys.get(n)
    }

    pub fn as_slice(&self) -> &[Polynomial] {
        &self.polys
    }

    pub fn truncated(&self, nmax: usize) -> Self {
        Self::new(self.polys.iter().take(nmax + 1).cloned().collect())
    }

    /// Each `P_n` is monic of exact degree `n`.
    pub fn is_monic_graded(&self) -> bool {
        self.polys
            .iter()
            .enumerate()
            .all(|(n, p)| p.degree() == Some(n) && p.is_monic())
    }
}

impl std::ops::Index<usize> for PolynomialSequence {
    type Output = Polynomial;
    fn index(&self, n: usize) -> &Polynomial {
        &self.polys[n]
    }
}

/// Unit lower triangular matrix with `bandwidth` subdiagonals.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct UnitLowerBanded {
    inner: BandMatrix,
}

impl UnitLowerBanded {
    pub fn identity(size: usize, bandwidth: usize) -> Self {
        let mut inner = BandMatrix::zeros(size, bandwidth, 0);
        for n in 0..size {
            inner.set(n, n, Scalar::one());
        }
        Self { inner }
    }

    pub fn from_band_matrix(m: BandMatrix) -> Result<Self, BandedError> {
        let n = m.size();
        for r in 0..n {
            for c in m.row_span(r) {
                let v = m.get(r, c);
                let ok = match c.cmp(&r) {
                    std::cmp::Ordering::Greater => v.is_zero(),
                    std::cmp::Ordering::Equal => v.is_one(),
                    std::cmp::Ordering::Less => true,
                };
                if !ok {
                    return Err(BandedError::NotHessenberg {
                        p: m.lower(),
                        reason: format!("entry ({r},{c}) = {v} breaks unit lower structure"),
                    });
                }
            }
        }
        let mut narrowed = BandMatrix::zeros(n, m.lower(), 0);
        for r in 0..n {
            for c in narrowed.row_span(r) {
                narrowed.set(r, c, m.get(r, c));
            }
        }
        Ok(Self {
            inner: narrowed.with_valid_rows(m.valid_rows()),
        })
    }

    pub fn size(&self) -> usize {
        self.inner.size()
    }

    pub fn bandwidth(&self) -> usize {
        self.inner.lower()
    }

    pub fn get(&self, r: usize, c: usize) -> Scalar {
        self.inner.get(r, c)
    }

    /// Strictly-lower in-band entries only.
    pub fn set(&mut self, r: usize, c: usize, v: Scalar) {
        assert!(c < r, "unit diagonal is fixed");
        self.inner.set(r, c, v);
    }

    pub fn as_band(&self) -> &BandMatrix {
        &self.inner
    }
}

/// Unit lower bidiagonal factor `L^(j)`; `sub[r - 1]` is the entry at
/// `(r, r - 1)`, which carries the global index `gamma_t` with
/// `t = (r - 1)(p + 1) + j + 1`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LowerBidiagonalUnit {
    j: usize,
    sub: Vec<Scalar>,
}

impl LowerBidiagonalUnit {
    /// `sub` has one entry per row `1..N`.
    pub fn new(j: usize, sub: Vec<Scalar>) -> Self {
        Self { j, sub }
    }

    pub fn index(&self) -> usize {
        self.j
    }

    pub fn size(&self) -> usize {
        self.sub.len() + 1
    }

    /// Subdiagonal entry at row `r >= 1`.
    pub fn sub(&self, r: usize) -> &Scalar {
        &self.sub[r - 1]
    }

    pub fn subs(&self) -> &[Scalar] {
        &self.sub
    }

    pub fn is_regular(&self) -> bool {
        self.sub.iter().all(|v| !v.is_zero())
    }

    pub fn to_band_matrix(&self) -> BandMatrix {
        let n = self.size();
        let mut m = BandMatrix::zeros(n, 1, 0);
        for r in 0..n {
            m.set(r, r, Scalar::one());
            if r > 0 {
                m.set(r, r - 1, self.sub[r - 1].clone());
            }
        }
        m
    }

    /// Leading `s x s` block as a dense matrix.
    pub fn leading_dense(&self, s: usize) -> DenseMatrix {
        DenseMatrix::from_fn(s, s, |r, c| {
            if r == c {
                Scalar::one()
            } else if c + 1 == r {
                self.sub[r - 1].clone()
            } else {
                Scalar::zero()
            }
        })
    }
}

/// Upper bidiagonal `U` with diagonal `gamma_{n(p+1)+1}` and implicit unit
/// superdiagonal.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct UpperBidiagonal {
    diag: Vec<Scalar>,
}

impl UpperBidiagonal {
    pub fn new(diag: Vec<Scalar>) -> Self {
        Self { diag }
    }

    pub fn size(&self) -> usize {
        self.diag.len()
    }

    pub fn diag(&self, n: usize) -> &Scalar {
        &self.diag[n]
    }

    pub fn diagonal(&self) -> &[Scalar] {
        &self.diag
    }

    pub fn to_band_matrix(&self) -> BandMatrix {
        let n = self.size();
        let mut m = BandMatrix::zeros(n, 0, 1);
        for r in 0..n {
            m.set(r, r, self.diag[r].clone());
            if r + 1 < n {
                m.set(r, r + 1, Scalar::one());
            }
        }
        m
    }
}

/// Position of a global `gamma_t` inside a bidiagonal chain.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum GammaSlot {
    /// Diagonal entry `n` of `U`.
    Upper { n: usize },
    /// Subdiagonal row `r` of factor `L^(j)`.
    Factor { j: usize, r: usize },
}

/// Map global index `t >= 1` to its slot; block `n` holds
/// `t = n(p+1)+1 ..= n(p+1)+p+1`.
pub fn gamma_slot(p: usize, t: usize) -> Option<GammaSlot> {
    if t == 0 || p == 0 {
        return None;
    }
    let block = (t - 1) / (p + 1);
    let offset = (t - 1) % (p + 1);
    Some(if offset == 0 {
        GammaSlot::Upper { n: block }
    } else {
        GammaSlot::Factor {
            j: offset,
            r: block + 1,
        }
    })
}

pub fn gamma_index(p: usize, slot: GammaSlot) -> usize {
    match slot {
        GammaSlot::Upper { n } => n * (p + 1) + 1,
        GammaSlot::Factor { j, r } => (r - 1) * (p + 1) + j + 1,
    }
}

/// Darboux factorization `J - C I = L^(1) ... L^(p) U` of a truncation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BidiagonalChain {
    p: usize,
    shift: Scalar,
    factors: Vec<LowerBidiagonalUnit>,
    upper: UpperBidiagonal,
}

impl BidiagonalChain {
    pub fn new(
        p: usize,
        shift: Scalar,
        factors: Vec<LowerBidiagonalUnit>,
        upper: UpperBidiagonal,
    ) -> Result<Self, BandedError> {
        if p == 0 {
            return Err(BandedError::ZeroBand);
        }
        if factors.len() != p {
            return Err(BandedError::SizeMismatch {
                left: factors.len(),
                right: p,
            });
        }
        for f in &factors {
            if f.size() != upper.size() {
                return Err(BandedError::SizeMismatch {
                    left: f.size(),
                    right: upper.size(),
                });
            }
        }
        Ok(Self {
            p,
            shift,
            factors,
            upper,
        })
    }

    pub fn p(&self) -> usize {
        self.p
    }

    pub fn size(&self) -> usize {
        self.upper.size()
    }

    pub fn shift(&self) -> &Scalar {
        &self.shift
    }

    /// `L^(j)` for `j = 1..=p`.
    pub fn factor(&self, j: usize) -> &LowerBidiagonalUnit {
        &self.factors[j - 1]
    }

    pub fn factors(&self) -> &[LowerBidiagonalUnit] {
        &self.factors
    }

    pub fn upper(&self) -> &UpperBidiagonal {
        &self.upper
    }

    /// Global `gamma_t`, `None` outside the truncation.
    pub fn gamma(&self, t: usize) -> Option<&Scalar> {
        match gamma_slot(self.p, t)? {
            GammaSlot::Upper { n } => self.upper.diag.get(n),
            GammaSlot::Factor { j, r } => self.factors[j - 1].sub.get(r - 1),
        }
    }

    /// Product of `L^(from) ... L^(to)` (identity when `from > to`).
    pub fn factor_product(&self, from: usize, to: usize) -> BandMatrix {
        let mut acc = BandMatrix::identity(self.size());
        for j in from..=to {
            acc = acc
                .multiply_window(&self.factors[j - 1].to_band_matrix())
                .expect("chain factors share one size");
        }
        acc
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{int, ratio};
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn reference_p1(n: usize) -> BandedHessenberg {
        BandedHessenberg::from_recurrence(1, n, |r, c| if r == c { int(2) } else { int(1) }).unwrap()
    }

    fn random_unit_lower(rng: &mut ChaCha8Rng, n: usize, w: usize) -> UnitLowerBanded {
        let mut l = UnitLowerBanded::identity(n, w);
        for r in 0..n {
            for c in r.saturating_sub(w)..r {
                l.set(r, c, ratio(rng.gen_range(-9..=9), rng.gen_range(1..=9)));
            }
        }
        l
    }

    #[test]
    fn reference_matrix_matches_dense_construction() {
        let j = reference_p1(3);
        let dense = DenseMatrix::from_rows(vec![
            vec![int(2), int(1), int(0)],
            vec![int(1), int(2), int(1)],
            vec![int(0), int(1), int(2)],
        ])
        .unwrap();
        assert_eq!(j.to_dense(), dense);
        assert!(j.is_regular());
    }

    #[test]
    fn zero_band_is_irregular() {
        let j = BandedHessenberg::from_recurrence(2, 4, |_, _| int(0)).unwrap();
        assert!(!j.is_regular());
        let polys = j.characteristic_polys(4).unwrap();
        for n in 0..=4 {
            assert_eq!(polys[n], Polynomial::monomial(n));
        }
    }

    #[test]
    fn random_nonzero_entries_are_regular() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let j = BandedHessenberg::from_recurrence(3, 8, |_, _| {
            let mut n = 0;
            while n == 0 {
                n = rng.gen_range(-9..=9);
            }
            ratio(n, rng.gen_range(1..=9))
        })
        .unwrap();
        let scan = (3..8).all(|n| !j.get(n, n - 3).is_zero());
        assert_eq!(j.is_regular(), scan);
        assert!(scan);
    }

    #[test]
    fn characteristic_polys_reference() {
        let polys = reference_p1(3).characteristic_polys(3).unwrap();
        assert_eq!(polys[0], Polynomial::one());
        assert_eq!(polys[1], Polynomial::new(vec![int(-2), int(1)]));
        assert_eq!(polys[2], Polynomial::new(vec![int(3), int(-4), int(1)]));
        assert_eq!(polys[3], Polynomial::new(vec![int(-4), int(10), int(-6), int(1)]));
        assert!(polys.is_monic_graded());
        assert!(reference_p1(3).characteristic_polys(4).is_err());
    }

    #[test]
    fn identity_product_keeps_window() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let b = random_unit_lower(&mut rng, 6, 2);
        let prod = BandMatrix::identity(6).multiply_window(b.as_band()).unwrap();
        assert_eq!(prod.to_dense(), b.as_band().to_dense());
        assert_eq!(prod.valid_rows(), 6);
    }

    #[test]
    fn bidiagonal_product_bands() {
        let n = 6;
        let l1 = LowerBidiagonalUnit::new(1, vec![int(1); n - 1]).to_band_matrix();
        let l2 = LowerBidiagonalUnit::new(2, vec![int(2); n - 1]).to_band_matrix();
        let prod = l1.multiply_window(&l2).unwrap();
        let dense = &l1.to_dense() * &l2.to_dense();
        assert_eq!(prod.to_dense(), dense);
        for r in 1..n {
            assert_eq!(prod.get(r, r - 1), int(3));
        }
        for r in 2..n {
            assert_eq!(prod.get(r, r - 2), int(2));
        }
    }

    #[test]
    fn upper_times_lower_loses_last_row() {
        let n = 4;
        let u = UpperBidiagonal::new(vec![int(2), ratio(3, 2), ratio(4, 3), ratio(5, 4)]);
        let l = LowerBidiagonalUnit::new(1, vec![ratio(1, 2), ratio(2, 3), ratio(3, 4)]);
        let prod = u.to_band_matrix().multiply_window(&l.to_band_matrix()).unwrap();
        assert_eq!(
            prod.to_dense(),
            &u.to_band_matrix().to_dense() * &l.to_band_matrix().to_dense()
        );
        assert_eq!(prod.valid_rows(), n - 1);
        assert!(BandedHessenberg::from_band_matrix(1, &prod).is_ok());
    }

    #[test]
    fn band_closure_against_dense() {
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        for (w1, w2) in [(1, 1), (1, 2), (2, 3), (3, 1)] {
            let a = random_unit_lower(&mut rng, 9, w1);
            let b = random_unit_lower(&mut rng, 9, w2);
            let prod = a.as_band().multiply_window(b.as_band()).unwrap();
            assert_eq!(prod.to_dense(), &a.as_band().to_dense() * &b.as_band().to_dense());
            let as_unit = UnitLowerBanded::from_band_matrix(prod).unwrap();
            assert_eq!(as_unit.bandwidth(), w1 + w2);
        }
    }

    #[test]
    fn size_mismatch_is_reported() {
        let err = BandMatrix::identity(3)
            .multiply_window(&BandMatrix::identity(4))
            .unwrap_err();
        assert_eq!(err, BandedError::SizeMismatch { left: 3, right: 4 });
    }

    #[test]
    fn gamma_map_roundtrips() {
        for p in 1..=5 {
            for t in 1..200 {
                let slot = gamma_slot(p, t).unwrap();
                assert_eq!(gamma_index(p, slot), t);
            }
            assert_eq!(gamma_slot(p, 1), Some(GammaSlot::Upper { n: 0 }));
            assert_eq!(gamma_slot(p, 2), Some(GammaSlot::Factor { j: 1, r: 1 }));
            assert_eq!(gamma_slot(p, p + 2), Some(GammaSlot::Upper { n: 1 }));
        }
        assert_eq!(gamma_slot(3, 0), None);
    }
}
