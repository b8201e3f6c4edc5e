//! Exact integer and rational linear algebra on small dense matrices.
//!
//! Everything is arbitrary precision. Determinants and ranks use fraction-free
//! Bareiss elimination; definiteness is read off the rational pivots of an
//! unpivoted LDLᵀ sweep.

use std::fmt;
use std::ops::{Index, IndexMut};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct IntMatrix {
    rows: usize,
    cols: usize,
    data: Vec<BigInt>,
}

impl IntMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        IntMatrix {
            rows,
            cols,
            data: vec![BigInt::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = BigInt::one();
        }
        m
    }

    /// Panics if the rows are ragged.
    pub fn from_rows<T: Into<BigInt> + Clone>(rows: &[Vec<T>]) -> Self {
        let cols = rows.first().map_or(0, Vec::len);
        let mut data = Vec::with_capacity(rows.len() * cols);
        for row in rows {
            assert_eq!(row.len(), cols, "ragged matrix rows");
            data.extend(row.iter().cloned().map(Into::into));
        }
        IntMatrix {
            rows: rows.len(),
            cols,
            data,
        }
    }

    pub fn nrows(&self) -> usize {
        self.rows
    }

    pub fn ncols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn row(&self, i: usize) -> &[BigInt] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn to_rows(&self) -> Vec<Vec<BigInt>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t[(j, i)] = self[(i, j)].clone();
            }
        }
        t
    }

    /// Panics on a dimension mismatch.
    pub fn mul(&self, other: &IntMatrix) -> IntMatrix {
        assert_eq!(self.cols, other.rows, "dimension mismatch in product");
        let mut out = Self::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = &self[(i, k)];
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let b = &other[(k, j)];
                    if !b.is_zero() {
                        out[(i, j)] += a * b;
                    }
                }
            }
        }
        out
    }

    pub fn is_symmetric(&self) -> bool {
        self.is_square() && (0..self.rows).all(|i| (0..i).all(|j| self[(i, j)] == self[(j, i)]))
    }

    /// Principal submatrix on the given index list.
    pub fn principal_submatrix(&self, idx: &[usize]) -> IntMatrix {
        let mut out = Self::zeros(idx.len(), idx.len());
        for (a, &i) in idx.iter().enumerate() {
            for (b, &j) in idx.iter().enumerate() {
                out[(a, b)] = self[(i, j)].clone();
            }
        }
        out
    }

    pub fn neg(&self) -> IntMatrix {
        IntMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|x| -x).collect(),
        }
    }

    pub fn diagonal(&self) -> Vec<BigInt> {
        (0..self.rows.min(self.cols)).map(|i| self[(i, i)].clone()).collect()
    }
}

impl Index<(usize, usize)> for IntMatrix {
    type Output = BigInt;
    fn index(&self, (i, j): (usize, usize)) -> &BigInt {
        &self.data[i * self.cols + j]
    }
}

impl IndexMut<(usize, usize)> for IntMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut BigInt {
        &mut self.data[i * self.cols + j]
    }
}

impl fmt::Debug for IntMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_list().entries((0..self.rows).map(|i| self.row(i))).finish()
    }
}

impl fmt::Display for IntMatrix {
    /// Row-major, one row per line, single spaces.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.rows {
            let line: Vec<String> = self.row(i).iter().map(BigInt::to_string).collect();
            writeln!(f, "{}", line.join(" "))?;
        }
        Ok(())
    }
}

/// Fraction-free forward elimination with row pivoting. Returns the reduced
/// matrix, the rank and the number of row swaps performed.
fn bareiss(mut a: IntMatrix) -> (IntMatrix, usize, usize) {
    let (n, m) = (a.rows, a.cols);
    let mut prev = BigInt::one();
    let mut rank = 0;
    let mut swaps = 0;
    for col in 0..m {
        if rank == n {
            break;
        }
        let Some(p) = (rank..n).find(|&r| !a[(r, col)].is_zero()) else {
            continue;
        };
        if p != rank {
            for j in 0..m {
                a.data.swap(p * m + j, rank * m + j);
            }
            swaps += 1;
        }
        let pivot = a[(rank, col)].clone();
        for i in rank + 1..n {
            let lead = a[(i, col)].clone();
            for j in col + 1..m {
                let v = (&pivot * &a[(i, j)] - &lead * &a[(rank, j)]) / &prev;
                a[(i, j)] = v;
            }
            a[(i, col)] = BigInt::zero();
        }
        prev = pivot;
        rank += 1;
    }
    (a, rank, swaps)
}

/// Exact determinant. Panics on a non-square matrix.
pub fn det(a: &IntMatrix) -> BigInt {
    assert!(a.is_square(), "determinant of a non-square matrix");
    let n = a.rows;
    if n == 0 {
        return BigInt::one();
    }
    let (r, rank, swaps) = bareiss(a.clone());
    if rank < n {
        return BigInt::zero();
    }
    let d = r[(n - 1, n - 1)].clone();
    if swaps % 2 == 1 {
        -d
    } else {
        d
    }
}

pub fn rank(a: &IntMatrix) -> usize {
    bareiss(a.clone()).1
}

/// Pivots of an unpivoted symmetric elimination, stopping at the first
/// non-positive one. A symmetric matrix is positive definite exactly when
/// every returned pivot is positive and there are `n` of them.
pub fn ldl_pivots(a: &IntMatrix) -> Vec<BigRational> {
    let n = a.rows;
    let mut m: Vec<Vec<BigRational>> = (0..n)
        .map(|i| a.row(i).iter().map(|x| BigRational::from_integer(x.clone())).collect())
        .collect();
    let mut pivots = Vec::with_capacity(n);
    for k in 0..n {
        let p = m[k][k].clone();
        pivots.push(p.clone());
        if !p.is_positive() {
            break;
        }
        for i in k + 1..n {
            if m[i][k].is_zero() {
                continue;
            }
            let f = &m[i][k] / &p;
            let (top, bottom) = m.split_at_mut(i);
            for (x, y) in bottom[0][k..n].iter_mut().zip(&top[k][k..n]) {
                *x -= &f * y;
            }
        }
    }
    pivots
}

pub fn is_positive_definite(a: &IntMatrix) -> bool {
    if !a.is_symmetric() {
        return false;
    }
    let pivots = ldl_pivots(a);
    pivots.len() == a.rows && pivots.iter().all(Signed::is_positive)
}

pub fn is_negative_definite(a: &IntMatrix) -> bool {
    is_positive_definite(&a.neg())
}

/// Unique solution of `a·x = b`, or `None` when `a` is singular.
pub fn solve(a: &IntMatrix, b: &[BigInt]) -> Option<Vec<BigRational>> {
    assert!(a.is_square() && a.rows == b.len(), "solve: shape mismatch");
    let n = a.rows;
    let mut aug = IntMatrix::zeros(n, n + 1);
    for i in 0..n {
        for j in 0..n {
            aug[(i, j)] = a[(i, j)].clone();
        }
        aug[(i, n)] = b[i].clone();
    }
    let (r, rank, _) = bareiss(aug);
    if rank < n || (0..n).any(|i| r[(i, i)].is_zero()) {
        return None;
    }
    let mut x = vec![BigRational::zero(); n];
    for i in (0..n).rev() {
        let mut acc = BigRational::from_integer(r[(i, n)].clone());
        for j in i + 1..n {
            acc -= BigRational::from_integer(r[(i, j)].clone()) * &x[j];
        }
        x[i] = acc / BigRational::from_integer(r[(i, i)].clone());
    }
    Some(x)
}

/// Smith normal form diagonal: nonnegative, each entry dividing the next,
/// `min(rows, cols)` entries (trailing zeros for rank deficiency).
pub fn smith_diagonal(a: &IntMatrix) -> Vec<BigInt> {
    let mut m = a.clone();
    let (n, k) = (m.rows, m.cols);
    let size = n.min(k);
    for t in 0..size {
        loop {
            // smallest nonzero entry of the trailing block
            let mut best: Option<(usize, usize)> = None;
            for i in t..n {
                for j in t..k {
                    let v = &m[(i, j)];
                    if !v.is_zero() && best.is_none_or(|(bi, bj)| v.abs() < m[(bi, bj)].abs()) {
                        best = Some((i, j));
                    }
                }
            }
            let Some((pi, pj)) = best else {
                return finish_smith(m.diagonal());
            };
            swap_rows(&mut m, t, pi);
            swap_cols(&mut m, t, pj);

            let mut clean = true;
            for i in t + 1..n {
                if m[(i, t)].is_zero() {
                    continue;
                }
                let q = m[(i, t)].div_floor(&m[(t, t)]);
                add_row_multiple(&mut m, i, t, &-q);
                if !m[(i, t)].is_zero() {
                    clean = false;
                }
            }
            for j in t + 1..k {
                if m[(t, j)].is_zero() {
                    continue;
                }
                let q = m[(t, j)].div_floor(&m[(t, t)]);
                add_col_multiple(&mut m, j, t, &-q);
                if !m[(t, j)].is_zero() {
                    clean = false;
                }
            }
            if !clean {
                continue;
            }
            // pivot must divide the whole trailing block
            let bad = (t + 1..n)
                .flat_map(|i| (t + 1..k).map(move |j| (i, j)))
                .find(|&(i, j)| !m[(i, j)].is_multiple_of(&m[(t, t)]));
            match bad {
                Some((i, _)) => add_row_multiple(&mut m, t, i, &BigInt::one()),
                None => break,
            }
        }
    }
    finish_smith(m.diagonal())
}

fn finish_smith(diag: Vec<BigInt>) -> Vec<BigInt> {
    let mut d: Vec<BigInt> = diag.into_iter().map(|x| x.abs()).collect();
    // zeros go last; the nonzero part is already a divisor chain
    d.sort_by_key(|x| x.is_zero());
    d
}

fn swap_rows(m: &mut IntMatrix, a: usize, b: usize) {
    if a != b {
        for j in 0..m.cols {
            m.data.swap(a * m.cols + j, b * m.cols + j);
        }
    }
}

fn swap_cols(m: &mut IntMatrix, a: usize, b: usize) {
    if a != b {
        for i in 0..m.rows {
            m.data.swap(i * m.cols + a, i * m.cols + b);
        }
    }
}

/// row[dst] += c · row[src]
fn add_row_multiple(m: &mut IntMatrix, dst: usize, src: usize, c: &BigInt) {
    for j in 0..m.cols {
        let v = c * &m[(src, j)];
        m[(dst, j)] += v;
    }
}

/// col[dst] += c · col[src]
fn add_col_multiple(m: &mut IntMatrix, dst: usize, src: usize, c: &BigInt) {
    for i in 0..m.rows {
        let v = c * &m[(i, src)];
        m[(i, dst)] += v;
    }
}
