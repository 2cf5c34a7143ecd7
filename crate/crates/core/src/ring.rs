//! A minimal commutative-ring abstraction with an explicit context, and the
//! matrix routines (products, powers, traces, Berkowitz characteristic
//! polynomial) that only need ring operations.

pub trait Ring {
    type Elem: Clone + PartialEq + std::fmt::Debug;

    fn zero(&self) -> Self::Elem;
    fn one(&self) -> Self::Elem;
    fn add(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn mul(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn neg(&self, a: &Self::Elem) -> Self::Elem;

    fn sub(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem {
        self.add(a, &self.neg(b))
    }

    fn is_zero(&self, a: &Self::Elem) -> bool {
        *a == self.zero()
    }

    fn from_i64(&self, n: i64) -> Self::Elem {
        let one = self.one();
        let mut acc = self.zero();
        for _ in 0..n.unsigned_abs() {
            acc = self.add(&acc, &one);
        }
        if n < 0 {
            self.neg(&acc)
        } else {
            acc
        }
    }
}

pub type Matrix<E> = Vec<Vec<E>>;

pub fn identity<R: Ring>(ring: &R, n: usize) -> Matrix<R::Elem> {
    (0..n)
        .map(|i| {
            (0..n)
                .map(|j| if i == j { ring.one() } else { ring.zero() })
                .collect()
        })
        .collect()
}

pub fn mat_mul<R: Ring>(ring: &R, a: &Matrix<R::Elem>, b: &Matrix<R::Elem>) -> Matrix<R::Elem> {
    let n = a.len();
    let k = b.len();
    let m = b.first().map_or(0, |r| r.len());
    let mut out = vec![vec![ring.zero(); m]; n];
    for i in 0..n {
        for l in 0..k {
            if ring.is_zero(&a[i][l]) {
                continue;
            }
            for j in 0..m {
                if ring.is_zero(&b[l][j]) {
                    continue;
                }
                let p = ring.mul(&a[i][l], &b[l][j]);
                out[i][j] = ring.add(&out[i][j], &p);
            }
        }
    }
    out
}

pub fn mat_vec<R: Ring>(ring: &R, a: &Matrix<R::Elem>, v: &[R::Elem]) -> Vec<R::Elem> {
    a.iter()
        .map(|row| {
            row.iter().zip(v).fold(ring.zero(), |acc, (x, y)| {
                if ring.is_zero(x) || ring.is_zero(y) {
                    acc
                } else {
                    ring.add(&acc, &ring.mul(x, y))
                }
            })
        })
        .collect()
}

pub fn trace<R: Ring>(ring: &R, a: &Matrix<R::Elem>) -> R::Elem {
    (0..a.len()).fold(ring.zero(), |acc, i| ring.add(&acc, &a[i][i]))
}

/// `a^k` by repeated multiplication, for `k >= 1`.
pub fn mat_pow<R: Ring>(ring: &R, a: &Matrix<R::Elem>, k: usize) -> Matrix<R::Elem> {
    let mut p = identity(ring, a.len());
    for _ in 0..k {
        p = mat_mul(ring, &p, a);
    }
    p
}

/// Traces of `a, a^2, ..., a^k`.
pub fn trace_powers<R: Ring>(ring: &R, a: &Matrix<R::Elem>, k: usize) -> Vec<R::Elem> {
    let mut p = identity(ring, a.len());
    let mut out = Vec::with_capacity(k);
    for _ in 0..k {
        p = mat_mul(ring, &p, a);
        out.push(trace(ring, &p));
    }
    out
}

/// Division-free characteristic polynomial `det(xI - a)` (Berkowitz).
/// Coefficients lowest degree first; the leading coefficient is one.
pub fn berkowitz<R: Ring>(ring: &R, a: &Matrix<R::Elem>) -> Vec<R::Elem> {
    let mut v = berkowitz_vector(ring, a);
    v.reverse();
    v
}

// Highest degree first.
fn berkowitz_vector<R: Ring>(ring: &R, a: &Matrix<R::Elem>) -> Vec<R::Elem> {
    let n = a.len();
    if n == 0 {
        return vec![ring.one()];
    }
    if n == 1 {
        return vec![ring.one(), ring.neg(&a[0][0])];
    }
    // a = [[a11, r], [c, sub]]
    let a11 = a[0][0].clone();
    let r: Vec<R::Elem> = a[0][1..].to_vec();
    let c: Vec<R::Elem> = a[1..].iter().map(|row| row[0].clone()).collect();
    let sub: Matrix<R::Elem> = a[1..].iter().map(|row| row[1..].to_vec()).collect();

    let dot = |x: &[R::Elem], y: &[R::Elem]| {
        x.iter()
            .zip(y)
            .fold(ring.zero(), |acc, (p, q)| ring.add(&acc, &ring.mul(p, q)))
    };
    let mut diags = vec![ring.one(), ring.neg(&a11)];
    let mut cur = c;
    for i in 0..n - 1 {
        diags.push(ring.neg(&dot(&r, &cur)));
        if i + 1 < n - 1 {
            cur = mat_vec(ring, &sub, &cur);
        }
    }
    let inner = berkowitz_vector(ring, &sub);
    // Toeplitz (n+1) x n lower-triangular matrix with first column `diags`.
    (0..=n)
        .map(|i| {
            (0..n.min(i + 1)).fold(ring.zero(), |acc, j| {
                ring.add(&acc, &ring.mul(&diags[i - j], &inner[j]))
            })
        })
        .collect()
}

/// The integers as `i64`, for tests and small exact computations.
#[derive(Clone, Copy, Debug, Default)]
pub struct Integers;

impl Ring for Integers {
    type Elem = i64;
    fn zero(&self) -> i64 {
        0
    }
    fn one(&self) -> i64 {
        1
    }
    fn add(&self, a: &i64, b: &i64) -> i64 {
        a + b
    }
    fn mul(&self, a: &i64, b: &i64) -> i64 {
        a * b
    }
    fn neg(&self, a: &i64) -> i64 {
        -a
    }
    fn from_i64(&self, n: i64) -> i64 {
        n
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn berkowitz_small() {
        let a = vec![vec![1, 1], vec![1, 0]];
        assert_eq!(berkowitz(&Integers, &a), vec![-1, -1, 1]);
        let a = vec![vec![2, 0, 1], vec![1, 3, 0], vec![0, 1, 4]];
        // det(xI - A) = x^3 - 9x^2 + 26x - 25
        assert_eq!(berkowitz(&Integers, &a), vec![-25, 26, -9, 1]);
        assert_eq!(berkowitz(&Integers, &vec![]), vec![1]);
    }

    #[test]
    fn trace_powers_match_powers() {
        let a = vec![vec![1, 1], vec![1, 0]];
        assert_eq!(trace_powers(&Integers, &a, 4), vec![1, 3, 4, 7]);
        assert_eq!(trace(&Integers, &mat_pow(&Integers, &a, 5)), 11);
    }
}
