//! Dense integer matrices, Smith normal form and row Hermite normal form.
//!
//! Small matrices (homology actions, projections) are stored with `i64`
//! entries. The normal-form routines work over `BigInt` so intermediate
//! growth can never overflow.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub type BigMatrix = Vec<Vec<BigInt>>;

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct IntMatrix {
    rows: usize,
    cols: usize,
    data: Vec<i64>,
}

impl IntMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        IntMatrix {
            rows,
            cols,
            data: vec![0; rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = 1;
        }
        m
    }

    /// Builds a matrix from row vectors. All rows must have length `cols`.
    pub fn from_rows(rows: Vec<Vec<i64>>, cols: usize) -> Self {
        let n = rows.len();
        let mut data = Vec::with_capacity(n * cols);
        for r in rows {
            assert_eq!(r.len(), cols, "ragged matrix rows");
            data.extend(r);
        }
        IntMatrix {
            rows: n,
            cols,
            data,
        }
    }

    pub fn from_columns(columns: &[Vec<i64>], rows: usize) -> Self {
        let mut m = Self::zeros(rows, columns.len());
        for (j, c) in columns.iter().enumerate() {
            for (i, &x) in c.iter().enumerate() {
                m[(i, j)] = x;
            }
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

    pub fn row(&self, i: usize) -> &[i64] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn column(&self, j: usize) -> Vec<i64> {
        (0..self.rows).map(|i| self[(i, j)]).collect()
    }

    pub fn to_rows(&self) -> Vec<Vec<i64>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn to_big(&self) -> BigMatrix {
        (0..self.rows)
            .map(|i| self.row(i).iter().map(|&x| BigInt::from(x)).collect())
            .collect()
    }

    pub fn try_from_big(m: &BigMatrix, cols: usize) -> Result<Self> {
        let rows = m
            .iter()
            .map(|r| {
                r.iter()
                    .map(|x| {
                        x.to_i64()
                            .ok_or_else(|| Error::Invalid("integer entry overflows i64".into()))
                    })
                    .collect::<Result<Vec<_>>>()
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Self::from_rows(rows, cols))
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t[(j, i)] = self[(i, j)];
            }
        }
        t
    }

    pub fn mul(&self, other: &IntMatrix) -> IntMatrix {
        assert_eq!(self.cols, other.rows, "matrix product dimension mismatch");
        let mut out = Self::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self[(i, k)];
                if a == 0 {
                    continue;
                }
                for j in 0..other.cols {
                    out[(i, j)] += a * other[(k, j)];
                }
            }
        }
        out
    }

    pub fn mul_vec(&self, v: &[i64]) -> Vec<i64> {
        assert_eq!(self.cols, v.len(), "matrix-vector dimension mismatch");
        (0..self.rows)
            .map(|i| self.row(i).iter().zip(v).map(|(a, b)| a * b).sum())
            .collect()
    }

    pub fn sub(&self, other: &IntMatrix) -> IntMatrix {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        IntMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&other.data).map(|(a, b)| a - b).collect(),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|&x| x == 0)
    }

    pub fn rank(&self) -> usize {
        smith_normal_form(&self.to_big()).rank
    }

    /// Determinant, computed from the Smith form and the signs of its transforms.
    pub fn determinant(&self) -> BigInt {
        assert!(self.is_square());
        if self.rows == 0 {
            return BigInt::one();
        }
        let snf = smith_normal_form(&self.to_big());
        let mut det: BigInt = snf.diagonal.iter().product();
        let sign = det_unimodular(&snf.left) * det_unimodular(&snf.right);
        det *= sign;
        det
    }
}

impl std::ops::Index<(usize, usize)> for IntMatrix {
    type Output = i64;
    fn index(&self, (i, j): (usize, usize)) -> &i64 {
        &self.data[i * self.cols + j]
    }
}

impl std::ops::IndexMut<(usize, usize)> for IntMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut i64 {
        &mut self.data[i * self.cols + j]
    }
}

/// Row-major text form, e.g. `[[1, 0], [0, 1]]`.
impl fmt::Display for IntMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for i in 0..self.rows {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "[")?;
            for j in 0..self.cols {
                if j > 0 {
                    write!(f, ", ")?;
                }
                write!(f, "{}", self[(i, j)])?;
            }
            write!(f, "]")?;
        }
        write!(f, "]")
    }
}

/// Smith normal form `left * A * right = D` with `D` diagonal, nonnegative
/// and each diagonal entry dividing the next.
#[derive(Clone, Debug)]
pub struct Smith {
    pub diagonal: Vec<BigInt>,
    pub rank: usize,
    pub left: BigMatrix,
    pub right: BigMatrix,
    pub right_inverse: BigMatrix,
}

fn identity_big(n: usize) -> BigMatrix {
    (0..n)
        .map(|i| {
            (0..n)
                .map(|j| if i == j { BigInt::one() } else { BigInt::zero() })
                .collect()
        })
        .collect()
}

fn row_axpy(m: &mut BigMatrix, target: usize, q: &BigInt, source: usize) {
    // row_target -= q * row_source
    if q.is_zero() {
        return;
    }
    let src = m[source].clone();
    for (x, s) in m[target].iter_mut().zip(src.iter()) {
        *x -= q * s;
    }
}

fn col_axpy(m: &mut BigMatrix, target: usize, q: &BigInt, source: usize) {
    // col_target -= q * col_source
    if q.is_zero() {
        return;
    }
    for row in m.iter_mut() {
        let s = row[source].clone();
        row[target] -= q * s;
    }
}

fn swap_cols(m: &mut BigMatrix, a: usize, b: usize) {
    if a == b {
        return;
    }
    for row in m.iter_mut() {
        row.swap(a, b);
    }
}

pub fn smith_normal_form(a: &BigMatrix) -> Smith {
    let m = a.len();
    let n = if m == 0 { 0 } else { a[0].len() };
    let mut a = a.clone();
    let mut left = identity_big(m);
    let mut right = identity_big(n);
    let mut right_inv = identity_big(n);

    let mut t = 0;
    while t < m.min(n) {
        // Smallest nonzero entry in the trailing block becomes the pivot.
        let mut pivot: Option<(usize, usize)> = None;
        for i in t..m {
            for j in t..n {
                if !a[i][j].is_zero()
                    && pivot.is_none_or(|(pi, pj)| a[i][j].abs() < a[pi][pj].abs())
                {
                    pivot = Some((i, j));
                }
            }
        }
        let Some((pi, pj)) = pivot else { break };
        a.swap(t, pi);
        left.swap(t, pi);
        swap_cols(&mut a, t, pj);
        swap_cols(&mut right, t, pj);
        right_inv.swap(t, pj);

        let mut clean = true;
        for i in t + 1..m {
            if !a[i][t].is_zero() {
                let q = a[i][t].div_floor(&a[t][t]);
                row_axpy(&mut a, i, &q, t);
                row_axpy(&mut left, i, &q, t);
                if !a[i][t].is_zero() {
                    clean = false;
                }
            }
        }
        for j in t + 1..n {
            if !a[t][j].is_zero() {
                let q = a[t][j].div_floor(&a[t][t]);
                col_axpy(&mut a, j, &q, t);
                col_axpy(&mut right, j, &q, t);
                // inverse of the column operation is a row operation on right_inv
                let neg = -q.clone();
                row_axpy(&mut right_inv, t, &neg, j);
                if !a[t][j].is_zero() {
                    clean = false;
                }
            }
        }
        if !clean {
            continue;
        }
        let mut bad_row = None;
        'search: for i in t + 1..m {
            for j in t + 1..n {
                if !a[i][j].is_multiple_of(&a[t][t]) {
                    bad_row = Some(i);
                    break 'search;
                }
            }
        }
        if let Some(i) = bad_row {
            let minus_one = -BigInt::one();
            row_axpy(&mut a, t, &minus_one, i);
            row_axpy(&mut left, t, &minus_one, i);
            continue;
        }
        if a[t][t].is_negative() {
            for x in a[t].iter_mut() {
                *x = -x.clone();
            }
            for x in left[t].iter_mut() {
                *x = -x.clone();
            }
        }
        t += 1;
    }
    let diagonal: Vec<BigInt> = (0..m.min(n)).map(|i| a[i][i].clone()).collect();
    let rank = diagonal.iter().filter(|d| !d.is_zero()).count();
    Smith {
        diagonal,
        rank,
        left,
        right,
        right_inverse: right_inv,
    }
}

/// Determinant of a unimodular matrix (±1), by fraction-free elimination.
fn det_unimodular(m: &BigMatrix) -> BigInt {
    let n = m.len();
    if n == 0 {
        return BigInt::one();
    }
    // Bareiss elimination
    let mut a = m.clone();
    let mut sign = BigInt::one();
    let mut prev = BigInt::one();
    for k in 0..n - 1 {
        if a[k][k].is_zero() {
            let Some(r) = (k + 1..n).find(|&r| !a[r][k].is_zero()) else {
                return BigInt::zero();
            };
            a.swap(k, r);
            sign = -sign;
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let v = (&a[i][j] * &a[k][k] - &a[i][k] * &a[k][j]) / &prev;
                a[i][j] = v;
            }
        }
        prev = a[k][k].clone();
    }
    sign * a[n - 1][n - 1].clone()
}

/// Bareiss determinant of a square integer matrix.
pub fn determinant_big(m: &BigMatrix) -> BigInt {
    det_unimodular(m)
}

/// Row-style Hermite normal form of the lattice spanned by `rows`
/// (zero rows dropped, positive pivots, entries above pivots reduced).
pub fn row_hermite(rows: &BigMatrix) -> BigMatrix {
    let m = rows.len();
    if m == 0 {
        return Vec::new();
    }
    let n = rows[0].len();
    let mut a = rows.clone();
    let mut p = 0;
    for col in 0..n {
        if p == m {
            break;
        }
        for i in p + 1..m {
            while !a[i][col].is_zero() {
                if a[p][col].is_zero() {
                    a.swap(p, i);
                    continue;
                }
                let q = a[i][col].div_floor(&a[p][col]);
                row_axpy(&mut a, i, &q, p);
                if !a[i][col].is_zero() {
                    a.swap(p, i);
                }
            }
        }
        if a[p][col].is_zero() {
            continue;
        }
        if a[p][col].is_negative() {
            for x in a[p].iter_mut() {
                *x = -x.clone();
            }
        }
        for r in 0..p {
            let q = a[r][col].div_floor(&a[p][col]);
            row_axpy(&mut a, r, &q, p);
        }
        p += 1;
    }
    a.truncate(p);
    a
}

/// Basis (rows, in Hermite form) of the integer left kernel `{ y : y M = 0 }`.
/// The lattice it spans is saturated.
pub fn integer_left_kernel(m: &IntMatrix) -> Result<IntMatrix> {
    let snf = smith_normal_form(&m.to_big());
    let kernel: BigMatrix = snf.left[snf.rank..].to_vec();
    let hnf = row_hermite(&kernel);
    IntMatrix::try_from_big(&hnf, m.rows())
}
