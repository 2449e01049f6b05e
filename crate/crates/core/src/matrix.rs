//! Dense matrices over [`Rational`].

use std::fmt;
use std::ops::{Add, Mul, Sub};

use crate::rational::Rational;

#[derive(Clone, PartialEq, Eq)]
pub struct Matrix {
    rows: usize,
    cols: usize,
    data: Vec<Rational>,
}

impl Matrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Matrix { rows, cols, data: vec![Rational::ZERO; rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.set(i, i, Rational::ONE);
        }
        m
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> Rational) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for r in 0..rows {
            for c in 0..cols {
                data.push(f(r, c));
            }
        }
        Matrix { rows, cols, data }
    }

    pub fn diagonal(entries: &[Rational]) -> Self {
        let mut m = Self::zeros(entries.len(), entries.len());
        for (i, e) in entries.iter().enumerate() {
            m.set(i, i, e.clone());
        }
        m
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

    pub fn get(&self, r: usize, c: usize) -> &Rational {
        &self.data[r * self.cols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, v: Rational) {
        self.data[r * self.cols + c] = v;
    }

    pub fn row(&self, r: usize) -> &[Rational] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Rational::is_zero)
    }

    pub fn is_symmetric(&self) -> bool {
        self.is_square() && (0..self.rows).all(|r| (0..r).all(|c| self.get(r, c) == self.get(c, r)))
    }

    pub fn transpose(&self) -> Matrix {
        Matrix::from_fn(self.cols, self.rows, |r, c| self.get(c, r).clone())
    }

    pub fn scale(&self, k: &Rational) -> Matrix {
        Matrix { rows: self.rows, cols: self.cols, data: self.data.iter().map(|x| x * k).collect() }
    }

    pub fn pow(&self, exp: u32) -> Matrix {
        assert!(self.is_square());
        let mut acc = Matrix::identity(self.rows);
        for _ in 0..exp {
            acc = &acc * self;
        }
        acc
    }

    /// Characteristic polynomial `det(T I - A)`, constant term first, monic.
    ///
    /// Reduces to upper Hessenberg form by exact elimination similarities,
    /// then expands with the Hessenberg determinant recurrence.
    pub fn charpoly(&self) -> Vec<Rational> {
        assert!(self.is_square(), "charpoly of a non-square matrix");
        let n = self.rows;
        let mut h = self.clone();
        for j in 0..n.saturating_sub(2) {
            let Some(p) = (j + 1..n).find(|&i| !h.get(i, j).is_zero()) else {
                continue;
            };
            if p != j + 1 {
                h.swap_rows(p, j + 1);
                h.swap_cols(p, j + 1);
            }
            let pivot = h.get(j + 1, j).clone();
            for i in j + 2..n {
                if h.get(i, j).is_zero() {
                    continue;
                }
                let factor = h.get(i, j) / &pivot;
                // row_i -= factor * row_{j+1}; col_{j+1} += factor * col_i
                for c in 0..n {
                    let v = h.get(i, c) - &factor * h.get(j + 1, c);
                    h.set(i, c, v);
                }
                for r in 0..n {
                    let v = h.get(r, j + 1) + &factor * h.get(r, i);
                    h.set(r, j + 1, v);
                }
            }
        }

        let mut polys: Vec<Vec<Rational>> = vec![vec![Rational::ONE]];
        for m in 1..=n {
            let prev = &polys[m - 1];
            let mut p = vec![Rational::ZERO; m + 1];
            let diag = h.get(m - 1, m - 1);
            for (d, c) in prev.iter().enumerate() {
                p[d + 1] += c;
                p[d] -= &(c * diag);
            }
            let mut t = Rational::ONE;
            for i in 1..m {
                t = &t * h.get(m - i, m - i - 1);
                if t.is_zero() {
                    break;
                }
                let coef = h.get(m - i - 1, m - 1) * &t;
                if coef.is_zero() {
                    continue;
                }
                for (d, c) in polys[m - i - 1].iter().enumerate() {
                    p[d] -= &(&coef * c);
                }
            }
            polys.push(p);
        }
        polys.pop().expect("at least the constant polynomial")
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        for c in 0..self.cols {
            self.data.swap(a * self.cols + c, b * self.cols + c);
        }
    }

    fn swap_cols(&mut self, a: usize, b: usize) {
        for r in 0..self.rows {
            self.data.swap(r * self.cols + a, r * self.cols + b);
        }
    }
}

impl Mul for &Matrix {
    type Output = Matrix;
    fn mul(self, rhs: &Matrix) -> Matrix {
        assert_eq!(self.cols, rhs.rows, "dimension mismatch in product");
        let mut out = Matrix::zeros(self.rows, rhs.cols);
        for r in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(r, k);
                if a.is_zero() {
                    continue;
                }
                for c in 0..rhs.cols {
                    let b = rhs.get(k, c);
                    if !b.is_zero() {
                        let v = out.get(r, c) + &(a * b);
                        out.set(r, c, v);
                    }
                }
            }
        }
        out
    }
}

impl Add for &Matrix {
    type Output = Matrix;
    fn add(self, rhs: &Matrix) -> Matrix {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols));
        Matrix { rows: self.rows, cols: self.cols, data: self.data.iter().zip(&rhs.data).map(|(a, b)| a + b).collect() }
    }
}

impl Sub for &Matrix {
    type Output = Matrix;
    fn sub(self, rhs: &Matrix) -> Matrix {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols));
        Matrix { rows: self.rows, cols: self.cols, data: self.data.iter().zip(&rhs.data).map(|(a, b)| a - b).collect() }
    }
}

impl fmt::Debug for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "Matrix {}x{} [", self.rows, self.cols)?;
        for r in 0..self.rows {
            let row: Vec<String> = self.row(r).iter().map(|x| x.to_string()).collect();
            writeln!(f, "  {}", row.join(" "))?;
        }
        write!(f, "]")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn int_matrix(rows: &[&[i64]]) -> Matrix {
        Matrix::from_fn(rows.len(), rows[0].len(), |r, c| Rational::from(rows[r][c]))
    }

    fn ints(v: &[i64]) -> Vec<Rational> {
        v.iter().map(|&x| Rational::from(x)).collect()
    }

    #[test]
    fn charpoly_small_cases() {
        // [[2,1],[1,2]]: T^2 - 4T + 3
        assert_eq!(int_matrix(&[&[2, 1], &[1, 2]]).charpoly(), ints(&[3, -4, 1]));
        // Needs a row swap during the Hessenberg reduction.
        let m = int_matrix(&[&[1, 2, 0], &[0, 3, 4], &[5, 0, 6]]);
        // det(T - M) = T^3 - 10T^2 + 27T - 58
        assert_eq!(m.charpoly(), ints(&[-58, 27, -10, 1]));
        assert_eq!(Matrix::zeros(0, 0).charpoly(), ints(&[1]));
    }

    #[test]
    fn product_and_transpose() {
        let a = int_matrix(&[&[1, 2], &[3, 4]]);
        let b = int_matrix(&[&[0, 1], &[1, 0]]);
        assert_eq!(&a * &b, int_matrix(&[&[2, 1], &[4, 3]]));
        assert_eq!(a.transpose(), int_matrix(&[&[1, 3], &[2, 4]]));
        assert_eq!(b.pow(2), Matrix::identity(2));
        assert!(b.is_symmetric());
    }
}
