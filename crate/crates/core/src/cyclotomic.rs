//! Exact arithmetic in the cyclotomic field `Q(ζ_n)`.
//!
//! Elements are stored as rational polynomials in `ζ` of degree below
//! `φ(n)`, reduced modulo the cyclotomic polynomial, so equality is
//! structural equality.

use std::cmp::Ordering;

use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::poly::cyclotomic;
use crate::ring::Ring;

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct CycElem {
    coeffs: Vec<BigRational>,
}

impl CycElem {
    pub fn coeffs(&self) -> &[BigRational] {
        &self.coeffs
    }
}

#[derive(Clone, Debug)]
pub struct CyclotomicField {
    n: u64,
    modulus: Vec<BigInt>,
    degree: usize,
}

impl CyclotomicField {
    pub fn new(n: u64) -> Self {
        let modulus = cyclotomic(n.max(1)).coeffs().to_vec();
        let degree = modulus.len() - 1;
        CyclotomicField {
            n: n.max(1),
            modulus,
            degree,
        }
    }

    pub fn order(&self) -> u64 {
        self.n
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    /// Reduces a dense polynomial in `ζ` into canonical form.
    pub fn reduce(&self, mut dense: Vec<BigRational>) -> CycElem {
        let d = self.degree;
        for i in (d..dense.len()).rev() {
            let c = std::mem::take(&mut dense[i]);
            if c.is_zero() {
                continue;
            }
            for (j, m) in self.modulus[..d].iter().enumerate() {
                if !m.is_zero() {
                    dense[i - d + j] -= &c * BigRational::from(m.clone());
                }
            }
        }
        dense.resize(d, BigRational::zero());
        CycElem { coeffs: dense }
    }

    pub fn from_rational(&self, c: BigRational) -> CycElem {
        let mut v = vec![BigRational::zero(); self.degree];
        v[0] = c;
        CycElem { coeffs: v }
    }

    /// `ζ^k` for any integer `k`.
    pub fn zeta_pow(&self, k: i64) -> CycElem {
        let e = k.rem_euclid(self.n as i64) as usize;
        let mut v = vec![BigRational::zero(); e + 1];
        v[e] = BigRational::one();
        self.reduce(v)
    }

    /// Builds `Σ c_k ζ^k` from `(k, c_k)` pairs with arbitrary integer `k`.
    pub fn from_powers<'a>(&self, terms: impl IntoIterator<Item = (i64, &'a BigRational)>) -> CycElem {
        let n = self.n as usize;
        let mut dense = vec![BigRational::zero(); n];
        for (k, c) in terms {
            dense[k.rem_euclid(n as i64) as usize] += c;
        }
        self.reduce(dense)
    }

    pub fn scale(&self, a: &CycElem, c: &BigRational) -> CycElem {
        CycElem {
            coeffs: a.coeffs.iter().map(|x| x * c).collect(),
        }
    }

    /// Complex conjugation `ζ ↦ ζ^{-1}`.
    pub fn conj(&self, a: &CycElem) -> CycElem {
        let n = self.n as usize;
        let mut dense = vec![BigRational::zero(); n];
        for (j, c) in a.coeffs.iter().enumerate() {
            dense[(n - j) % n] += c;
        }
        self.reduce(dense)
    }

    /// `|a|^2 = a * conj(a)`, an element of the real subfield.
    pub fn norm_sq(&self, a: &CycElem) -> CycElem {
        self.mul(a, &self.conj(a))
    }

    /// The rational value of `a` if it lies in `Q`.
    pub fn as_rational(&self, a: &CycElem) -> Option<BigRational> {
        if a.coeffs[1..].iter().all(|c| c.is_zero()) {
            Some(a.coeffs[0].clone())
        } else {
            None
        }
    }

    /// Embedding with `ζ = exp(2πi/n)`.
    pub fn to_complex(&self, a: &CycElem) -> Complex64 {
        let z = Complex64::from_polar(1.0, 2.0 * std::f64::consts::PI / self.n as f64);
        let mut acc = Complex64::new(0.0, 0.0);
        let mut p = Complex64::new(1.0, 0.0);
        for c in &a.coeffs {
            acc += p * c.to_f64().unwrap_or(f64::NAN);
            p *= z;
        }
        acc
    }
}

impl CyclotomicField {
    /// Sign of the real part of `a` under `ζ = exp(2πi/n)`, decided exactly:
    /// zero is detected structurally, otherwise the value is refined with
    /// fixed-point cosines until the error bound separates it from zero.
    pub fn real_sign(&self, a: &CycElem) -> Ordering {
        let twice_re = self.add(a, &self.conj(a));
        if self.is_zero(&twice_re) {
            return Ordering::Equal;
        }
        let l1: BigRational = a.coeffs.iter().map(|c| c.abs()).sum();
        let approx = self.to_complex(a).re;
        if approx.abs() > 1e-9 * (1.0 + l1.to_f64().unwrap_or(f64::INFINITY)) {
            return if approx > 0.0 { Ordering::Greater } else { Ordering::Less };
        }
        let mut bits = 64usize;
        loop {
            let pi = fixed_pi(bits + GUARD_BITS);
            let scale = BigRational::from_integer(BigInt::one() << (bits + GUARD_BITS));
            let mut value = BigRational::zero();
            for (j, c) in a.coeffs.iter().enumerate() {
                if c.is_zero() {
                    continue;
                }
                let theta = (&pi * BigInt::from(2 * j as u64)) / BigInt::from(self.n);
                let cos = fixed_cos(&theta, bits + GUARD_BITS);
                value += c * BigRational::from_integer(cos) / &scale;
            }
            let err = &l1 / BigRational::from_integer(BigInt::one() << bits);
            if value.abs() > err {
                return if value.is_positive() {
                    Ordering::Greater
                } else {
                    Ordering::Less
                };
            }
            bits *= 2;
        }
    }
}

const GUARD_BITS: usize = 32;

/// `π · 2^bits`, truncated (Machin's formula).
fn fixed_pi(bits: usize) -> BigInt {
    fn arctan_inv(x: u64, bits: usize) -> BigInt {
        let x2 = BigInt::from(x * x);
        let mut term = (BigInt::one() << bits) / BigInt::from(x);
        let mut sum = BigInt::zero();
        let mut k = 0u64;
        while !term.is_zero() {
            let t = &term / BigInt::from(2 * k + 1);
            if k.is_multiple_of(2) {
                sum += t;
            } else {
                sum -= t;
            }
            term /= &x2;
            k += 1;
        }
        sum
    }
    arctan_inv(5, bits) * 16 - arctan_inv(239, bits) * 4
}

/// `cos(θ) · 2^bits` for `θ · 2^bits` given, `0 <= θ < 2π`, by Taylor series.
fn fixed_cos(theta: &BigInt, bits: usize) -> BigInt {
    let theta2 = (theta * theta) >> bits;
    let mut term = BigInt::one() << bits;
    let mut sum = term.clone();
    let mut k = 0u64;
    loop {
        term = -((term * &theta2) >> bits) / BigInt::from((2 * k + 1) * (2 * k + 2));
        if term.is_zero() {
            return sum;
        }
        sum += &term;
        k += 1;
    }
}

impl Ring for CyclotomicField {
    type Elem = CycElem;

    fn zero(&self) -> CycElem {
        CycElem {
            coeffs: vec![BigRational::zero(); self.degree],
        }
    }

    fn one(&self) -> CycElem {
        self.from_rational(BigRational::one())
    }

    fn add(&self, a: &CycElem, b: &CycElem) -> CycElem {
        CycElem {
            coeffs: a.coeffs.iter().zip(&b.coeffs).map(|(x, y)| x + y).collect(),
        }
    }

    fn sub(&self, a: &CycElem, b: &CycElem) -> CycElem {
        CycElem {
            coeffs: a.coeffs.iter().zip(&b.coeffs).map(|(x, y)| x - y).collect(),
        }
    }

    fn mul(&self, a: &CycElem, b: &CycElem) -> CycElem {
        let d = self.degree;
        let mut dense = vec![BigRational::zero(); 2 * d - 1];
        for (i, x) in a.coeffs.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            for (j, y) in b.coeffs.iter().enumerate() {
                if !y.is_zero() {
                    dense[i + j] += x * y;
                }
            }
        }
        self.reduce(dense)
    }

    fn neg(&self, a: &CycElem) -> CycElem {
        CycElem {
            coeffs: a.coeffs.iter().map(|x| -x).collect(),
        }
    }

    fn is_zero(&self, a: &CycElem) -> bool {
        a.coeffs.iter().all(|c| c.is_zero())
    }

    fn from_i64(&self, n: i64) -> CycElem {
        self.from_rational(BigRational::from_integer(BigInt::from(n)))
    }
}
