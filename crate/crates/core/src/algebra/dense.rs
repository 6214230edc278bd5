use std::ops::Mul;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};

use super::{AlgebraError, Scalar};

/// Row-major dense matrix of exact rationals. Only used for small blocks
/// (determinant minors, change-of-basis matrices, cross-checks).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DenseMatrix {
    rows: usize,
    cols: usize,
    data: Vec<Scalar>,
}

impl DenseMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            data: vec![Scalar::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        Self::from_fn(n, n, |r, c| if r == c { Scalar::one() } else { Scalar::zero() })
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> Scalar) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for r in 0..rows {
            for c in 0..cols {
                data.push(f(r, c));
            }
        }
        Self { rows, cols, data }
    }

    pub fn from_rows(rows: Vec<Vec<Scalar>>) -> Result<Self, AlgebraError> {
        let cols = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|r| r.len() != cols) {
            return Err(AlgebraError::ShapeMismatch("ragged rows".into()));
        }
        let n = rows.len();
        Ok(Self {
            rows: n,
            cols,
            data: rows.into_iter().flatten().collect(),
        })
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, r: usize, c: usize) -> &Scalar {
        assert!(r < self.rows && c < self.cols, "entry ({r},{c}) out of bounds");
        &self.data[r * self.cols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, v: Scalar) {
        assert!(r < self.rows && c < self.cols, "entry ({r},{c}) out of bounds");
        self.data[r * self.cols + c] = v;
    }

    pub fn row(&self, r: usize) -> &[Scalar] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    /// Leading `n x n` block.
    pub fn leading(&self, n: usize) -> Self {
        Self::from_fn(n, n, |r, c| self.get(r, c).clone())
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |r, c| self.get(c, r).clone())
    }

    pub fn mul_vec(&self, v: &[Scalar]) -> Result<Vec<Scalar>, AlgebraError> {
        if v.len() != self.cols {
            return Err(AlgebraError::ShapeMismatch(format!(
                "{}x{} matrix times vector of length {}",
                self.rows,
                self.cols,
                v.len()
            )));
        }
        Ok((0..self.rows)
            .map(|r| self.row(r).iter().zip(v).map(|(a, b)| a * b).sum())
            .collect())
    }

    /// Exact determinant by Bareiss elimination over the integers. Each row
    /// is first scaled by the lcm of its denominators; the scale factors are
    /// divided back out at the end.
    pub fn det(&self) -> Result<Scalar, AlgebraError> {
        if self.rows != self.cols {
            return Err(AlgebraError::NotSquare {
                rows: self.rows,
                cols: self.cols,
            });
        }
        let n = self.rows;
        if n == 0 {
            return Ok(Scalar::one());
        }
        let mut scale = BigInt::one();
        let mut m: Vec<Vec<BigInt>> = Vec::with_capacity(n);
        for r in 0..n {
            let lcm = self.row(r).iter().fold(BigInt::one(), |acc, x| acc.lcm(x.denom()));
            m.push(self.row(r).iter().map(|x| x.numer() * (&lcm / x.denom())).collect());
            scale *= lcm;
        }

        let mut sign = BigInt::one();
        let mut prev = BigInt::one();
        for k in 0..n - 1 {
            if m[k][k].is_zero() {
                let Some(swap) = (k + 1..n).find(|&i| !m[i][k].is_zero()) else {
                    return Ok(Scalar::zero());
                };
                m.swap(k, swap);
                sign = -sign;
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    let v = &m[i][j] * &m[k][k] - &m[i][k] * &m[k][j];
                    m[i][j] = v / &prev;
                }
                m[i][k] = BigInt::zero();
            }
            prev = m[k][k].clone();
        }
        Ok(Scalar::new(sign * &m[n - 1][n - 1], scale))
    }

    /// Forward substitution for a unit lower triangular system `T x = b`.
    pub fn solve_unit_lower_triangular(&self, b: &[Scalar]) -> Result<Vec<Scalar>, AlgebraError> {
        if self.rows != self.cols || b.len() != self.rows {
            return Err(AlgebraError::ShapeMismatch(format!(
                "{}x{} system with right-hand side of length {}",
                self.rows,
                self.cols,
                b.len()
            )));
        }
        let n = self.rows;
        for r in 0..n {
            if !self.get(r, r).is_one() || (r + 1..n).any(|c| !self.get(r, c).is_zero()) {
                return Err(AlgebraError::ShapeMismatch(format!(
                    "row {r} is not unit lower triangular"
                )));
            }
        }
        let mut x: Vec<Scalar> = Vec::with_capacity(n);
        for r in 0..n {
            let acc: Scalar = (0..r).map(|c| self.get(r, c) * &x[c]).sum();
            x.push(&b[r] - acc);
        }
        Ok(x)
    }
}

impl Mul for &DenseMatrix {
    type Output = DenseMatrix;

    fn mul(self, rhs: &DenseMatrix) -> DenseMatrix {
        assert_eq!(self.cols, rhs.rows, "dense product shape mismatch");
        DenseMatrix::from_fn(self.rows, rhs.cols, |r, c| {
            (0..self.cols).map(|k| self.get(r, k) * rhs.get(k, c)).sum()
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{int, ratio};
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn cofactor_det(m: &DenseMatrix) -> Scalar {
        let n = m.rows();
        if n == 0 {
            return Scalar::one();
        }
        (0..n)
            .map(|c| {
                let minor = DenseMatrix::from_fn(n - 1, n - 1, |r, cc| {
                    m.get(r + 1, if cc < c { cc } else { cc + 1 }).clone()
                });
                let term = m.get(0, c) * cofactor_det(&minor);
                if c % 2 == 0 {
                    term
                } else {
                    -term
                }
            })
            .sum()
    }

    fn random_matrix(rng: &mut ChaCha8Rng, n: usize) -> DenseMatrix {
        DenseMatrix::from_fn(n, n, |_, _| ratio(rng.gen_range(-9..=9), rng.gen_range(1..=9)))
    }

    #[test]
    fn det_examples() {
        assert_eq!(DenseMatrix::identity(3).det().unwrap(), int(1));
        assert_eq!(DenseMatrix::zeros(1, 1).det().unwrap(), int(0));
        // zI_3 - J_3 at z = 0 for the p=1 reference matrix (diag 2, subdiag 1)
        let m = DenseMatrix::from_rows(vec![
            vec![int(-2), int(-1), int(0)],
            vec![int(-1), int(-2), int(-1)],
            vec![int(0), int(-1), int(-2)],
        ])
        .unwrap();
        assert_eq!(cofactor_det(&m), int(-4));
        assert_eq!(m.det().unwrap(), int(-4));
        assert_eq!(
            DenseMatrix::zeros(2, 3).det().unwrap_err(),
            AlgebraError::NotSquare { rows: 2, cols: 3 }
        );
    }

    #[test]
    fn det_needs_pivot_swap() {
        let m = DenseMatrix::from_rows(vec![
            vec![int(0), int(1), int(2)],
            vec![int(3), int(0), int(1)],
            vec![ratio(1, 2), int(4), int(0)],
        ])
        .unwrap();
        assert_eq!(m.det().unwrap(), cofactor_det(&m));
    }

    #[test]
    fn det_matches_cofactor_on_random_rationals() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for n in 1..=6 {
            for _ in 0..5 {
                let m = random_matrix(&mut rng, n);
                assert_eq!(m.det().unwrap(), cofactor_det(&m), "n = {n}");
            }
        }
    }

    #[test]
    fn unit_triangular_det_is_one() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let m = random_matrix(&mut rng, 6);
        let t = DenseMatrix::from_fn(6, 6, |r, c| match r.cmp(&c) {
            std::cmp::Ordering::Equal => int(1),
            std::cmp::Ordering::Greater => m.get(r, c).clone(),
            std::cmp::Ordering::Less => int(0),
        });
        assert_eq!(t.det().unwrap(), int(1));
    }

    #[test]
    fn solve_examples() {
        let b = vec![int(1), int(2), int(3)];
        assert_eq!(DenseMatrix::identity(3).solve_unit_lower_triangular(&b).unwrap(), b);
        let t = DenseMatrix::from_rows(vec![vec![int(1), int(0)], vec![int(5), int(1)]]).unwrap();
        assert_eq!(
            t.solve_unit_lower_triangular(&[int(1), int(0)]).unwrap(),
            vec![int(1), int(-5)]
        );
        assert!(matches!(
            t.solve_unit_lower_triangular(&[int(1)]),
            Err(AlgebraError::ShapeMismatch(_))
        ));
    }

    #[test]
    fn solve_random_multiplies_back() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let m = random_matrix(&mut rng, 6);
        let t = DenseMatrix::from_fn(6, 6, |r, c| {
            if r == c {
                int(1)
            } else if r > c {
                m.get(r, c).clone()
            } else {
                int(0)
            }
        });
        let b: Vec<Scalar> = (0..6)
            .map(|_| ratio(rng.gen_range(-9..=9), rng.gen_range(1..=9)))
            .collect();
        let x = t.solve_unit_lower_triangular(&b).unwrap();
        assert_eq!(t.mul_vec(&x).unwrap(), b);
    }
}
