use std::fmt;
use std::ops::{Deref, DerefMut};

use num_bigint::BigInt;
use num_complex::Complex64;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::One;

use super::scalar::GScalar;
use super::subspace::Subspace;
use super::LinalgError;

/// A coordinate vector over Q(i).
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct GVector(pub Vec<GScalar>);

impl GVector {
    pub fn zeros(dim: usize) -> Self {
        GVector(vec![GScalar::zero(); dim])
    }

    pub fn unit(dim: usize, idx: usize) -> Self {
        let mut v = GVector::zeros(dim);
        v.0[idx] = GScalar::one();
        v
    }

    pub fn from_ints(xs: &[i64]) -> Self {
        GVector(xs.iter().map(|&x| GScalar::from_int(x)).collect())
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(GScalar::is_zero)
    }

    pub fn conj(&self) -> Self {
        GVector(self.0.iter().map(GScalar::conj).collect())
    }

    pub fn scale(&self, s: &GScalar) -> Self {
        GVector(self.0.iter().map(|x| x * s).collect())
    }

    pub fn add(&self, other: &GVector) -> Self {
        debug_assert_eq!(self.dim(), other.dim());
        GVector(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    pub fn sub(&self, other: &GVector) -> Self {
        debug_assert_eq!(self.dim(), other.dim());
        GVector(self.0.iter().zip(&other.0).map(|(a, b)| a - b).collect())
    }

    /// `self += s * other`
    pub fn axpy(&mut self, s: &GScalar, other: &GVector) {
        if s.is_zero() {
            return;
        }
        for (a, b) in self.0.iter_mut().zip(&other.0) {
            if !b.is_zero() {
                *a += &(s * b);
            }
        }
    }

    /// Bilinear (not Hermitian) pairing.
    pub fn dot(&self, other: &GVector) -> GScalar {
        let mut acc = GScalar::zero();
        for (a, b) in self.0.iter().zip(&other.0) {
            if !a.is_zero() && !b.is_zero() {
                acc += &(a * b);
            }
        }
        acc
    }

    pub fn is_real(&self) -> bool {
        self.0.iter().all(GScalar::is_real)
    }

    pub fn to_complex(&self) -> Vec<Complex64> {
        self.0.iter().map(GScalar::to_complex).collect()
    }

    pub fn denominator_lcm(&self) -> BigInt {
        self.0
            .iter()
            .fold(BigInt::one(), |acc, x| acc.lcm(&x.denominator_lcm()))
    }
}

impl Deref for GVector {
    type Target = [GScalar];
    fn deref(&self) -> &[GScalar] {
        &self.0
    }
}

impl DerefMut for GVector {
    fn deref_mut(&mut self) -> &mut [GScalar] {
        &mut self.0
    }
}

impl fmt::Debug for GVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_list().entries(self.0.iter()).finish()
    }
}

impl From<Vec<GScalar>> for GVector {
    fn from(v: Vec<GScalar>) -> Self {
        GVector(v)
    }
}

/// Dense row-major matrix over Q(i). Acts on column vectors.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Matrix {
    rows: usize,
    cols: usize,
    data: Vec<GScalar>,
}

impl Matrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Matrix {
            rows,
            cols,
            data: vec![GScalar::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Matrix::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = GScalar::one();
        }
        m
    }

    pub fn from_rows(rows: &[GVector]) -> Result<Self, LinalgError> {
        let cols = rows.first().map_or(0, GVector::dim);
        if let Some(bad) = rows.iter().find(|r| r.dim() != cols) {
            return Err(LinalgError::DimensionMismatch {
                expected: cols,
                found: bad.dim(),
            });
        }
        Ok(Matrix {
            rows: rows.len(),
            cols,
            data: rows.iter().flat_map(|r| r.0.iter().cloned()).collect(),
        })
    }

    /// Builds a matrix whose columns are the given vectors; `dim` fixes the
    /// row count when the list is empty.
    pub fn from_columns(dim: usize, cols: &[GVector]) -> Result<Self, LinalgError> {
        let mut m = Matrix::zeros(dim, cols.len());
        for (j, c) in cols.iter().enumerate() {
            if c.dim() != dim {
                return Err(LinalgError::DimensionMismatch {
                    expected: dim,
                    found: c.dim(),
                });
            }
            for i in 0..dim {
                m[(i, j)] = c[i].clone();
            }
        }
        Ok(m)
    }

    pub fn from_int_rows(rows: &[Vec<i64>]) -> Result<Self, LinalgError> {
        let vs: Vec<GVector> = rows.iter().map(|r| GVector::from_ints(r)).collect();
        Matrix::from_rows(&vs)
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn row(&self, i: usize) -> GVector {
        GVector(self.data[i * self.cols..(i + 1) * self.cols].to_vec())
    }

    pub fn column(&self, j: usize) -> GVector {
        GVector((0..self.rows).map(|i| self[(i, j)].clone()).collect())
    }

    pub fn row_vectors(&self) -> Vec<GVector> {
        (0..self.rows).map(|i| self.row(i)).collect()
    }

    pub fn column_vectors(&self) -> Vec<GVector> {
        (0..self.cols).map(|j| self.column(j)).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(GScalar::is_zero)
    }

    pub fn is_real(&self) -> bool {
        self.data.iter().all(GScalar::is_real)
    }

    pub fn is_integral(&self) -> bool {
        self.data.iter().all(GScalar::is_gaussian_integer) && self.is_real()
    }

    pub fn transpose(&self) -> Matrix {
        let mut t = Matrix::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t[(j, i)] = self[(i, j)].clone();
            }
        }
        t
    }

    pub fn conj(&self) -> Matrix {
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(GScalar::conj).collect(),
        }
    }

    pub fn scale(&self, s: &GScalar) -> Matrix {
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|x| x * s).collect(),
        }
    }

    pub fn add(&self, other: &Matrix) -> Result<Matrix, LinalgError> {
        self.check_same_shape(other)?;
        Ok(Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self
                .data
                .iter()
                .zip(&other.data)
                .map(|(a, b)| a + b)
                .collect(),
        })
    }

    pub fn sub(&self, other: &Matrix) -> Result<Matrix, LinalgError> {
        self.check_same_shape(other)?;
        Ok(Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self
                .data
                .iter()
                .zip(&other.data)
                .map(|(a, b)| a - b)
                .collect(),
        })
    }

    fn check_same_shape(&self, other: &Matrix) -> Result<(), LinalgError> {
        if self.rows != other.rows || self.cols != other.cols {
            return Err(LinalgError::ShapeMismatch {
                left: (self.rows, self.cols),
                right: (other.rows, other.cols),
            });
        }
        Ok(())
    }

    pub fn mul(&self, other: &Matrix) -> Result<Matrix, LinalgError> {
        if self.cols != other.rows {
            return Err(LinalgError::ShapeMismatch {
                left: (self.rows, self.cols),
                right: (other.rows, other.cols),
            });
        }
        let mut out = Matrix::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = &self[(i, k)];
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let b = &other[(k, j)];
                    if !b.is_zero() {
                        let prod = a * b;
                        out[(i, j)] += &prod;
                    }
                }
            }
        }
        Ok(out)
    }

    pub fn apply(&self, v: &GVector) -> Result<GVector, LinalgError> {
        if v.dim() != self.cols {
            return Err(LinalgError::DimensionMismatch {
                expected: self.cols,
                found: v.dim(),
            });
        }
        Ok(GVector(
            (0..self.rows)
                .map(|i| {
                    let mut acc = GScalar::zero();
                    for j in 0..self.cols {
                        let (a, b) = (&self[(i, j)], &v[j]);
                        if !a.is_zero() && !b.is_zero() {
                            acc += &(a * b);
                        }
                    }
                    acc
                })
                .collect(),
        ))
    }

    pub fn pow(&self, k: u32) -> Result<Matrix, LinalgError> {
        if !self.is_square() {
            return Err(LinalgError::NotSquare(self.rows, self.cols));
        }
        let mut out = Matrix::identity(self.rows);
        for _ in 0..k {
            out = out.mul(self)?;
        }
        Ok(out)
    }

    /// Powers `N^0, N^1, ...` up to the first zero power (exclusive). Returns
    /// `None` if `N^n != 0` for `n = self.rows()`, i.e. `N` is not nilpotent.
    pub fn nilpotent_powers(&self) -> Option<Vec<Matrix>> {
        if !self.is_square() {
            return None;
        }
        let mut powers = vec![Matrix::identity(self.rows)];
        for _ in 0..=self.rows {
            let next = powers.last().unwrap().mul(self).ok()?;
            if next.is_zero() {
                return Some(powers);
            }
            powers.push(next);
        }
        None
    }

    /// Coefficients `N^k / k!` of `exp(zN)` for a nilpotent matrix, in
    /// increasing degree.
    pub fn exp_coefficients(&self) -> Option<Vec<Matrix>> {
        let powers = self.nilpotent_powers()?;
        let mut fact = BigRational::one();
        Some(
            powers
                .iter()
                .enumerate()
                .map(|(k, p)| {
                    if k > 0 {
                        fact *= BigRational::from_integer(BigInt::from(k));
                    }
                    p.scale(&GScalar::from(fact.recip()))
                })
                .collect(),
        )
    }

    /// `exp(N)` for nilpotent `N`.
    pub fn exp_nilpotent(&self) -> Option<Matrix> {
        let coeffs = self.exp_coefficients()?;
        let mut out = Matrix::zeros(self.rows, self.cols);
        for c in &coeffs {
            out = out.add(c).ok()?;
        }
        Some(out)
    }

    /// Exact evaluation of `exp(zN)` at a point `z` of Q(i).
    pub fn exp_at(&self, z: &GScalar) -> Option<Matrix> {
        let coeffs = self.exp_coefficients()?;
        let mut out = Matrix::zeros(self.rows, self.cols);
        let mut zp = GScalar::one();
        for c in &coeffs {
            out = out.add(&c.scale(&zp)).ok()?;
            zp = &zp * z;
        }
        Some(out)
    }

    pub fn rank(&self) -> usize {
        rref(self.row_vectors()).0.len()
    }

    pub fn kernel(&self) -> Subspace {
        Subspace::kernel_of(self)
    }

    pub fn image(&self) -> Subspace {
        Subspace::span_unchecked(self.rows, self.column_vectors())
    }

    /// Canonical particular solution of `self * x = b`: free variables are
    /// zero, pivots are read off the reduced echelon form. `None` if
    /// inconsistent.
    pub fn solve(&self, b: &GVector) -> Result<Option<GVector>, LinalgError> {
        if b.dim() != self.rows {
            return Err(LinalgError::DimensionMismatch {
                expected: self.rows,
                found: b.dim(),
            });
        }
        let augmented: Vec<GVector> = (0..self.rows)
            .map(|i| {
                let mut r = self.row(i);
                r.0.push(b[i].clone());
                r
            })
            .collect();
        let (reduced, pivots) = rref(augmented);
        if pivots.last() == Some(&self.cols) {
            return Ok(None);
        }
        let mut x = GVector::zeros(self.cols);
        for (row, &p) in reduced.iter().zip(&pivots) {
            x[p] = row[self.cols].clone();
        }
        Ok(Some(x))
    }

    pub fn inverse(&self) -> Option<Matrix> {
        if !self.is_square() {
            return None;
        }
        let n = self.rows;
        let augmented: Vec<GVector> = (0..n)
            .map(|i| {
                let mut r = self.row(i);
                r.0.extend(GVector::unit(n, i).0);
                r
            })
            .collect();
        let (reduced, pivots) = rref(augmented);
        if pivots.len() < n || pivots[n - 1] != n - 1 {
            return None;
        }
        let rows: Vec<GVector> = reduced
            .into_iter()
            .map(|r| GVector(r.0[n..].to_vec()))
            .collect();
        Matrix::from_rows(&rows).ok()
    }

    pub fn block_diag(blocks: &[Matrix]) -> Matrix {
        let rows = blocks.iter().map(Matrix::rows).sum();
        let cols = blocks.iter().map(Matrix::cols).sum();
        let mut out = Matrix::zeros(rows, cols);
        let (mut r0, mut c0) = (0, 0);
        for b in blocks {
            for i in 0..b.rows {
                for j in 0..b.cols {
                    out[(r0 + i, c0 + j)] = b[(i, j)].clone();
                }
            }
            r0 += b.rows;
            c0 += b.cols;
        }
        out
    }

    /// Sub-block of rows `rs` and columns `cs`.
    pub fn select(&self, rs: &[usize], cs: &[usize]) -> Matrix {
        let mut out = Matrix::zeros(rs.len(), cs.len());
        for (a, &i) in rs.iter().enumerate() {
            for (b, &j) in cs.iter().enumerate() {
                out[(a, b)] = self[(i, j)].clone();
            }
        }
        out
    }

    pub fn denominator_lcm(&self) -> BigInt {
        self.data
            .iter()
            .fold(BigInt::one(), |acc, x| acc.lcm(&x.denominator_lcm()))
    }

    /// Row-major complex double copy.
    pub fn to_complex(&self) -> Vec<Complex64> {
        self.data.iter().map(GScalar::to_complex).collect()
    }

    pub fn entries(&self) -> &[GScalar] {
        &self.data
    }
}

impl std::ops::Index<(usize, usize)> for Matrix {
    type Output = GScalar;
    fn index(&self, (i, j): (usize, usize)) -> &GScalar {
        &self.data[i * self.cols + j]
    }
}

impl std::ops::IndexMut<(usize, usize)> for Matrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut GScalar {
        &mut self.data[i * self.cols + j]
    }
}

impl fmt::Debug for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "Matrix {}x{} [", self.rows, self.cols)?;
        for i in 0..self.rows {
            writeln!(f, "  {:?}", self.row(i))?;
        }
        write!(f, "]")
    }
}

/// Reduced row echelon form of the given rows. Returns the nonzero reduced
/// rows (pivot entries equal to one, pivots strictly increasing) and their
/// pivot columns.
pub fn rref(mut rows: Vec<GVector>) -> (Vec<GVector>, Vec<usize>) {
    let ncols = rows.first().map_or(0, GVector::dim);
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..ncols {
        if r == rows.len() {
            break;
        }
        let Some(p) = (r..rows.len()).find(|&i| !rows[i][c].is_zero()) else {
            continue;
        };
        rows.swap(r, p);
        let inv = rows[r][c].inv().unwrap();
        if !inv.is_one() {
            rows[r] = rows[r].scale(&inv);
        }
        let pivot_row = rows[r].clone();
        for (i, row) in rows.iter_mut().enumerate() {
            if i != r && !row[c].is_zero() {
                let f = -row[c].clone();
                row.axpy(&f, &pivot_row);
            }
        }
        pivots.push(c);
        r += 1;
    }
    rows.truncate(r);
    (rows, pivots)
}

/// Integer matrix helper: entries as `i64`, `None` when some entry is not an
/// integer or does not fit.
pub fn to_i64_rows(m: &Matrix) -> Option<Vec<Vec<i64>>> {
    use num_traits::ToPrimitive;
    (0..m.rows())
        .map(|i| {
            (0..m.cols())
                .map(|j| {
                    let x = &m[(i, j)];
                    if !x.is_real() || !x.re.is_integer() {
                        return None;
                    }
                    x.re.numer().to_i64()
                })
                .collect()
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn solve_returns_canonical_particular_solution() {
        // x0 + x1 = 2 ; free variable x1 -> 0
        let m = Matrix::from_int_rows(&[vec![1, 1]]).unwrap();
        let x = m.solve(&GVector::from_ints(&[2])).unwrap().unwrap();
        assert_eq!(x, GVector::from_ints(&[2, 0]));
        let inconsistent = Matrix::from_int_rows(&[vec![1, 1], vec![2, 2]]).unwrap();
        assert!(inconsistent
            .solve(&GVector::from_ints(&[1, 3]))
            .unwrap()
            .is_none());
    }

    #[test]
    fn inverse_and_exp() {
        let m = Matrix::from_int_rows(&[vec![2, 1], vec![1, 1]]).unwrap();
        let inv = m.inverse().unwrap();
        assert_eq!(m.mul(&inv).unwrap(), Matrix::identity(2));
        assert!(Matrix::from_int_rows(&[vec![1, 2], vec![2, 4]])
            .unwrap()
            .inverse()
            .is_none());

        // N e0 = e1, N e1 = 2 e2 : exp(N) integral
        let n = Matrix::from_int_rows(&[vec![0, 0, 0], vec![1, 0, 0], vec![0, 2, 0]]).unwrap();
        let e = n.exp_nilpotent().unwrap();
        assert!(e.is_integral());
        assert_eq!(e[(2, 0)], GScalar::one());
        assert!(Matrix::identity(2).nilpotent_powers().is_none());
    }
}
