//! The group ring of `Z^d`: Laurent polynomials with exact rational
//! coefficients, characters, finite-index lattices and their annihilators.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_complex::Complex64;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::cyclotomic::{CycElem, CyclotomicField};
use crate::error::{Error, Result};
use crate::intmat::{smith_normal_form, BigMatrix, IntMatrix};
use crate::ring::Ring;

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct LaurentElement {
    dim: usize,
    terms: BTreeMap<Vec<i64>, BigRational>,
}

impl LaurentElement {
    pub fn zero(dim: usize) -> Self {
        LaurentElement {
            dim,
            terms: BTreeMap::new(),
        }
    }

    pub fn one(dim: usize) -> Self {
        Self::constant(dim, BigRational::one())
    }

    pub fn constant(dim: usize, c: BigRational) -> Self {
        Self::monomial(vec![0; dim], c)
    }

    pub fn from_int(dim: usize, c: i64) -> Self {
        Self::constant(dim, BigRational::from_integer(BigInt::from(c)))
    }

    pub fn monomial(exponent: Vec<i64>, c: BigRational) -> Self {
        let dim = exponent.len();
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(exponent, c);
        }
        LaurentElement { dim, terms }
    }

    /// `sign * X^exponent`
    pub fn signed_monomial(exponent: Vec<i64>, sign: i64) -> Self {
        Self::monomial(exponent, BigRational::from_integer(BigInt::from(sign)))
    }

    /// The `i`-th variable `X_{i+1}`.
    pub fn variable(dim: usize, i: usize) -> Self {
        let mut e = vec![0; dim];
        e[i] = 1;
        Self::monomial(e, BigRational::one())
    }

    pub fn from_terms(dim: usize, terms: impl IntoIterator<Item = (Vec<i64>, BigRational)>) -> Result<Self> {
        let mut out = Self::zero(dim);
        for (e, c) in terms {
            if e.len() != dim {
                return Err(Error::DimensionMismatch {
                    expected: dim,
                    found: e.len(),
                });
            }
            out.add_term(e, c);
        }
        Ok(out)
    }

    fn add_term(&mut self, e: Vec<i64>, c: BigRational) {
        if c.is_zero() {
            return;
        }
        let entry = self.terms.entry(e.clone()).or_insert_with(BigRational::zero);
        *entry += c;
        if entry.is_zero() {
            self.terms.remove(&e);
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn terms(&self) -> &BTreeMap<Vec<i64>, BigRational> {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coefficient(&self, e: &[i64]) -> BigRational {
        self.terms.get(e).cloned().unwrap_or_else(BigRational::zero)
    }

    fn check_dim(&self, other: &Self) -> Result<()> {
        if self.dim != other.dim {
            return Err(Error::DimensionMismatch {
                expected: self.dim,
                found: other.dim,
            });
        }
        Ok(())
    }

    pub fn try_add(&self, other: &Self) -> Result<Self> {
        self.check_dim(other)?;
        let mut out = self.clone();
        for (e, c) in &other.terms {
            out.add_term(e.clone(), c.clone());
        }
        Ok(out)
    }

    pub fn try_mul(&self, other: &Self) -> Result<Self> {
        self.check_dim(other)?;
        let mut acc: BTreeMap<Vec<i64>, BigRational> = BTreeMap::new();
        for (e1, c1) in &self.terms {
            for (e2, c2) in &other.terms {
                let e: Vec<i64> = e1.iter().zip(e2).map(|(a, b)| a + b).collect();
                *acc.entry(e).or_insert_with(BigRational::zero) += c1 * c2;
            }
        }
        acc.retain(|_, c| !c.is_zero());
        Ok(LaurentElement {
            dim: self.dim,
            terms: acc,
        })
    }

    pub fn try_sub(&self, other: &Self) -> Result<Self> {
        self.try_add(&other.neg())
    }

    pub fn neg(&self) -> Self {
        LaurentElement {
            dim: self.dim,
            terms: self.terms.iter().map(|(e, c)| (e.clone(), -c)).collect(),
        }
    }

    pub fn scale(&self, c: &BigRational) -> Self {
        if c.is_zero() {
            return Self::zero(self.dim);
        }
        LaurentElement {
            dim: self.dim,
            terms: self.terms.iter().map(|(e, x)| (e.clone(), x * c)).collect(),
        }
    }

    /// Sum of all coefficients (specialization at the trivial character).
    pub fn augmentation(&self) -> BigRational {
        self.terms.values().fold(BigRational::zero(), |a, c| a + c)
    }

    pub fn l2_norm_squared(&self) -> BigRational {
        self.terms.values().fold(BigRational::zero(), |a, c| a + c * c)
    }

    pub fn l2_norm(&self) -> f64 {
        self.l2_norm_squared().to_f64().unwrap_or(f64::NAN).sqrt()
    }

    /// Largest absolute exponent over the support.
    pub fn support_radius(&self) -> i64 {
        self.terms
            .keys()
            .flat_map(|e| e.iter().map(|x| x.abs()))
            .max()
            .unwrap_or(0)
    }

    pub fn as_monomial(&self) -> Option<(&Vec<i64>, &BigRational)> {
        if self.terms.len() == 1 {
            self.terms.iter().next()
        } else {
            None
        }
    }

    pub fn is_integral(&self) -> bool {
        self.terms.values().all(|c| c.is_integer())
    }

    /// Exact value at a root-of-unity character, in `Q(ζ_order)`.
    pub fn specialize(&self, xi: &Character, field: &CyclotomicField) -> Result<CycElem> {
        if xi.exponents.len() != self.dim {
            return Err(Error::DimensionMismatch {
                expected: self.dim,
                found: xi.exponents.len(),
            });
        }
        let scale = field.order() as i64 / xi.order as i64;
        if !field.order().is_multiple_of(xi.order) {
            return Err(Error::Invalid(format!(
                "character of order {} does not live in Q(ζ_{})",
                xi.order,
                field.order()
            )));
        }
        Ok(field.from_powers(self.terms.iter().map(|(e, c)| {
            let k: i64 = e.iter().zip(&xi.exponents).map(|(a, b)| a * b).sum();
            (k * scale, c)
        })))
    }

    /// Numeric value at an arbitrary torus point.
    pub fn specialize_numeric(&self, point: &[Complex64]) -> Result<Complex64> {
        if point.len() != self.dim {
            return Err(Error::DimensionMismatch {
                expected: self.dim,
                found: point.len(),
            });
        }
        Ok(self
            .terms
            .iter()
            .map(|(e, c)| {
                let m = e
                    .iter()
                    .zip(point)
                    .fold(Complex64::new(1.0, 0.0), |acc, (&k, z)| acc * z.powi(k as i32));
                m * c.to_f64().unwrap_or(f64::NAN)
            })
            .sum())
    }

    /// `t(L + w)`: sum of the coefficients supported on the (translated) lattice.
    pub fn lattice_restriction(&self, lattice: &Lattice) -> Result<BigRational> {
        if lattice.dim() != self.dim {
            return Err(Error::DimensionMismatch {
                expected: self.dim,
                found: lattice.dim(),
            });
        }
        let mut acc = BigRational::zero();
        for (e, c) in &self.terms {
            if lattice.contains(e) {
                acc += c;
            }
        }
        Ok(acc)
    }

    /// `(1/|N_L|) Σ_{ξ ∈ N_L} conj(ξ(w)) t(ξ)`, computed exactly.
    pub fn average_over_annihilator(&self, lattice: &Lattice) -> Result<BigRational> {
        let (order, chars) = lattice.annihilator();
        let field = CyclotomicField::new(order);
        let mut sum = field.zero();
        let w = lattice.translate_or_zero();
        for xi in &chars {
            let v = self.specialize(xi, &field)?;
            let shift = -xi.pairing(&w);
            let v = field.mul(&v, &field.zeta_pow(shift * (order / xi.order) as i64));
            sum = field.add(&sum, &v);
        }
        let n = BigRational::from_integer(BigInt::from(chars.len()));
        let avg = field.scale(&sum, &(BigRational::one() / n));
        field
            .as_rational(&avg)
            .ok_or_else(|| Error::Verification("annihilator average is not rational".into()))
    }

    /// Substitutes `X^h ↦ X^{h M}` for an integer `d × d'` matrix `M`.
    pub fn change_coordinates(&self, m: &IntMatrix) -> Result<LaurentElement> {
        if m.rows() != self.dim {
            return Err(Error::DimensionMismatch {
                expected: self.dim,
                found: m.rows(),
            });
        }
        let mut out = LaurentElement::zero(m.cols());
        for (e, c) in &self.terms {
            let img: Vec<i64> = (0..m.cols())
                .map(|j| e.iter().enumerate().map(|(i, x)| x * m[(i, j)]).sum())
                .collect();
            out.add_term(img, c.clone());
        }
        Ok(out)
    }
}

fn fmt_rational(c: &BigRational) -> String {
    if c.is_integer() {
        c.numer().to_string()
    } else {
        format!("{}/{}", c.numer(), c.denom())
    }
}

/// Terms in lexicographic exponent order, e.g. `1 - X1`, `2*X1^-1*X2`.
impl fmt::Display for LaurentElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (idx, (e, c)) in self.terms.iter().enumerate() {
            let neg = c.is_negative();
            let abs = c.abs();
            if idx == 0 {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if neg { "-" } else { "+" })?;
            }
            let vars: Vec<String> = e
                .iter()
                .enumerate()
                .filter(|(_, &k)| k != 0)
                .map(|(i, &k)| {
                    if k == 1 {
                        format!("X{}", i + 1)
                    } else {
                        format!("X{}^{}", i + 1, k)
                    }
                })
                .collect();
            if vars.is_empty() {
                write!(f, "{}", fmt_rational(&abs))?;
            } else if abs.is_one() {
                write!(f, "{}", vars.join("*"))?;
            } else {
                write!(f, "{}*{}", fmt_rational(&abs), vars.join("*"))?;
            }
        }
        Ok(())
    }
}

/// The group ring `Q[Z^d]` as a [`Ring`] context.
#[derive(Clone, Copy, Debug)]
pub struct LaurentRing {
    pub dim: usize,
}

impl Ring for LaurentRing {
    type Elem = LaurentElement;
    fn zero(&self) -> LaurentElement {
        LaurentElement::zero(self.dim)
    }
    fn one(&self) -> LaurentElement {
        LaurentElement::one(self.dim)
    }
    fn add(&self, a: &LaurentElement, b: &LaurentElement) -> LaurentElement {
        a.try_add(b).expect("dimension mismatch in group ring")
    }
    fn mul(&self, a: &LaurentElement, b: &LaurentElement) -> LaurentElement {
        a.try_mul(b).expect("dimension mismatch in group ring")
    }
    fn neg(&self, a: &LaurentElement) -> LaurentElement {
        a.neg()
    }
    fn is_zero(&self, a: &LaurentElement) -> bool {
        a.is_zero()
    }
    fn from_i64(&self, n: i64) -> LaurentElement {
        LaurentElement::from_int(self.dim, n)
    }
}

/// A character `Z^d → C^×` with values `ξ_i = exp(2πi e_i / order)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Character {
    pub order: u64,
    pub exponents: Vec<i64>,
}

impl Character {
    pub fn new(order: u64, exponents: Vec<i64>) -> Self {
        let order = order.max(1);
        let exponents = exponents
            .into_iter()
            .map(|e| e.rem_euclid(order as i64))
            .collect();
        Character { order, exponents }
    }

    pub fn trivial(dim: usize) -> Self {
        Character {
            order: 1,
            exponents: vec![0; dim],
        }
    }

    pub fn dim(&self) -> usize {
        self.exponents.len()
    }

    /// `k` such that `ξ(h) = ζ_order^k`.
    pub fn pairing(&self, h: &[i64]) -> i64 {
        h.iter()
            .zip(&self.exponents)
            .map(|(a, b)| a * b)
            .sum::<i64>()
            .rem_euclid(self.order as i64)
    }

    /// The exact multiplicative order of the character.
    pub fn exact_order(&self) -> u64 {
        let g = self
            .exponents
            .iter()
            .fold(self.order as i64, |g, &e| g.gcd(&e));
        self.order / g as u64
    }

    /// The same character written with the minimal order.
    pub fn normalized(&self) -> Character {
        let o = self.exact_order();
        let f = (self.order / o) as i64;
        Character::new(o, self.exponents.iter().map(|e| e / f).collect())
    }

    pub fn values(&self) -> Vec<Complex64> {
        self.exponents
            .iter()
            .map(|&e| {
                Complex64::from_polar(
                    1.0,
                    2.0 * std::f64::consts::PI * e as f64 / self.order as f64,
                )
            })
            .collect()
    }
}

impl fmt::Display for Character {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self
            .exponents
            .iter()
            .map(|e| format!("{e}/{}", self.order))
            .collect();
        write!(f, "exp(2πi·({}))", parts.join(", "))
    }
}

/// All `q^d` characters with values `q`-th roots of unity, in lexicographic
/// order of exponents.
pub fn character_grid(d: usize, q: u64) -> Vec<Character> {
    let q = q.max(1);
    let total = (q as usize).pow(d as u32);
    (0..total)
        .map(|mut idx| {
            let mut e = vec![0i64; d];
            for slot in e.iter_mut().rev() {
                *slot = (idx % q as usize) as i64;
                idx /= q as usize;
            }
            Character { order: q, exponents: e }
        })
        .collect()
}

/// A finite-index sublattice `L ≤ Z^d` (rows of `basis`) with an optional
/// translate `w`, standing for the coset `L + w`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Lattice {
    basis: IntMatrix,
    translate: Option<Vec<i64>>,
    #[serde(skip)]
    smith: Option<LatticeSmith>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
struct LatticeSmith {
    diagonal: Vec<i64>,
    right: IntMatrix,
}

impl Lattice {
    pub fn new(basis: IntMatrix) -> Result<Self> {
        if !basis.is_square() {
            return Err(Error::DimensionMismatch {
                expected: basis.cols(),
                found: basis.rows(),
            });
        }
        let snf = smith_normal_form(&basis.to_big());
        if snf.rank < basis.rows() {
            return Err(Error::SingularLattice);
        }
        let diagonal = snf
            .diagonal
            .iter()
            .map(|x| x.to_i64().ok_or_else(|| Error::Invalid("lattice index too large".into())))
            .collect::<Result<Vec<_>>>()?;
        let right = IntMatrix::try_from_big(&snf.right, basis.cols())?;
        Ok(Lattice {
            basis,
            translate: None,
            smith: Some(LatticeSmith { diagonal, right }),
        })
    }

    /// `j Z^d`
    pub fn scaled(d: usize, j: i64) -> Result<Self> {
        let mut b = IntMatrix::zeros(d, d);
        for i in 0..d {
            b[(i, i)] = j;
        }
        Self::new(b)
    }

    pub fn with_translate(mut self, w: Vec<i64>) -> Result<Self> {
        if w.len() != self.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                found: w.len(),
            });
        }
        self.translate = if w.iter().all(|&x| x == 0) { None } else { Some(w) };
        Ok(self)
    }

    pub fn dim(&self) -> usize {
        self.basis.cols()
    }

    pub fn basis(&self) -> &IntMatrix {
        &self.basis
    }

    pub fn translate(&self) -> Option<&[i64]> {
        self.translate.as_deref()
    }

    pub fn translate_or_zero(&self) -> Vec<i64> {
        self.translate.clone().unwrap_or_else(|| vec![0; self.dim()])
    }

    fn smith(&self) -> LatticeSmith {
        match &self.smith {
            Some(s) => s.clone(),
            None => Lattice::new(self.basis.clone()).unwrap().smith.unwrap(),
        }
    }

    /// Invariant factors of `Z^d / L`.
    pub fn invariant_factors(&self) -> Vec<i64> {
        self.smith().diagonal
    }

    pub fn index(&self) -> u64 {
        self.smith().diagonal.iter().product::<i64>() as u64
    }

    /// Exact membership of `h` in `L + w`.
    pub fn contains(&self, h: &[i64]) -> bool {
        let s = self.smith();
        let w = self.translate_or_zero();
        let y: Vec<i64> = h.iter().zip(&w).map(|(a, b)| a - b).collect();
        // x B = y is solvable over Z iff (y V)_i is divisible by D_i
        (0..self.dim()).all(|i| {
            let v: i64 = (0..self.dim()).map(|k| y[k] * s.right[(k, i)]).sum();
            v % s.diagonal[i] == 0
        })
    }

    /// The characters trivial on `L`, all written over the common order
    /// `N` (the exponent of `Z^d / L`). Returns `(N, characters)`.
    pub fn annihilator(&self) -> (u64, Vec<Character>) {
        let s = self.smith();
        let d = self.dim();
        let n = s.diagonal.last().copied().unwrap_or(1).max(1);
        let mut out = Vec::new();
        let mut m = vec![0i64; d];
        loop {
            // c = V D^{-1} m, exponents N c mod N
            let e: Vec<i64> = (0..d)
                .map(|j| {
                    (0..d)
                        .map(|i| s.right[(j, i)] * (n / s.diagonal[i]) * m[i])
                        .sum::<i64>()
                })
                .collect();
            out.push(Character::new(n as u64, e));
            let mut i = 0;
            loop {
                if i == d {
                    out.sort();
                    return (n as u64, out);
                }
                m[i] += 1;
                if m[i] < s.diagonal[i] {
                    break;
                }
                m[i] = 0;
                i += 1;
            }
        }
    }
}

/// Row-major exponent matrix as `BigMatrix` (helper for callers working with
/// Smith forms directly).
pub fn to_big_rows(rows: &[Vec<i64>]) -> BigMatrix {
    rows.iter()
        .map(|r| r.iter().map(|&x| BigInt::from(x)).collect())
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64) -> BigRational {
        BigRational::from_integer(BigInt::from(n))
    }

    fn y2() -> LaurentElement {
        LaurentElement::variable(2, 1)
    }

    #[test]
    fn ring_examples() {
        let one = LaurentElement::one(2);
        let a = one.try_add(&y2()).unwrap();
        let b = one.try_sub(&y2()).unwrap();
        let prod = a.try_mul(&b).unwrap();
        let expect = one
            .try_sub(&y2().try_mul(&y2()).unwrap())
            .unwrap();
        assert_eq!(prod, expect);
        let x = LaurentElement::variable(2, 0);
        let xinv = LaurentElement::signed_monomial(vec![-1, 0], 1);
        assert_eq!(x.try_mul(&xinv).unwrap(), one);
        let one_minus_x = one.try_sub(&x).unwrap();
        assert_eq!(one_minus_x.try_add(&x).unwrap(), one);
        assert!(matches!(
            x.try_add(&LaurentElement::one(3)),
            Err(Error::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn display_form() {
        let x = LaurentElement::variable(2, 0);
        let one_minus_x = LaurentElement::one(2).try_sub(&x).unwrap();
        assert_eq!(one_minus_x.to_string(), "1 - X1");
        assert_eq!(y2().to_string(), "X2");
        let t = LaurentElement::from_terms(2, [(vec![-1, 2], q(-3)), (vec![0, 0], q(1))]).unwrap();
        assert_eq!(t.to_string(), "-3*X1^-1*X2^2 + 1");
        assert_eq!(LaurentElement::zero(1).to_string(), "0");
    }

    #[test]
    fn specialization_examples() {
        let t = LaurentElement::one(2).try_add(&y2()).unwrap();
        let f = CyclotomicField::new(2);
        assert_eq!(
            t.specialize(&Character::new(1, vec![0, 0]), &CyclotomicField::new(1))
                .unwrap(),
            CyclotomicField::new(1).from_i64(2)
        );
        assert!(f.is_zero(&t.specialize(&Character::new(2, vec![0, 1]), &f).unwrap()));
        let x = LaurentElement::variable(2, 0);
        let s = LaurentElement::one(2).try_sub(&x).unwrap();
        let f4 = CyclotomicField::new(4);
        let v = s.specialize(&Character::new(4, vec![1, 0]), &f4).unwrap();
        assert!((f4.to_complex(&v) - Complex64::new(1.0, -1.0)).norm() < 1e-12);
    }

    #[test]
    fn l2_examples() {
        let t = LaurentElement::one(2).try_add(&y2()).unwrap();
        assert!((t.l2_norm() - 2f64.sqrt()).abs() < 1e-15);
        assert_eq!(LaurentElement::zero(2).l2_norm(), 0.0);
        let t = LaurentElement::from_terms(2, [(vec![1, 0], q(3)), (vec![0, 1], q(-4))]).unwrap();
        assert_eq!(t.l2_norm(), 5.0);
    }

    #[test]
    fn lattice_examples() {
        let t = LaurentElement::one(2).try_add(&y2()).unwrap();
        let l2 = Lattice::scaled(2, 2).unwrap();
        assert_eq!(t.lattice_restriction(&l2).unwrap(), q(1));
        assert_eq!(t.average_over_annihilator(&l2).unwrap(), q(1));
        let z2 = Lattice::scaled(2, 1).unwrap();
        assert_eq!(t.lattice_restriction(&z2).unwrap(), q(2));
        let t = LaurentElement::from_terms(2, [(vec![2, 0], q(1)), (vec![0, 2], q(1))]).unwrap();
        assert_eq!(t.lattice_restriction(&l2).unwrap(), q(2));
        let x = LaurentElement::variable(2, 0);
        assert_eq!(x.average_over_annihilator(&z2).unwrap(), q(1));
        let shifted = Lattice::scaled(2, 2).unwrap().with_translate(vec![0, 1]).unwrap();
        let t = LaurentElement::one(2).try_add(&y2()).unwrap();
        assert_eq!(t.lattice_restriction(&shifted).unwrap(), q(1));
        assert_eq!(t.average_over_annihilator(&shifted).unwrap(), q(1));
    }

    #[test]
    fn grids() {
        assert_eq!(
            character_grid(1, 2),
            vec![Character::new(2, vec![0]), Character::new(2, vec![1])]
        );
        assert_eq!(character_grid(2, 1), vec![Character::new(1, vec![0, 0])]);
        assert_eq!(character_grid(1, 3).len(), 3);
        assert_eq!(character_grid(3, 4).len(), 64);
    }

    #[test]
    fn annihilator_of_skew_lattice() {
        let b = IntMatrix::from_rows(vec![vec![2, 1], vec![0, 3]], 2);
        let l = Lattice::new(b.clone()).unwrap();
        assert_eq!(l.index(), 6);
        let (n, chars) = l.annihilator();
        assert_eq!(chars.len(), 6);
        for xi in &chars {
            assert_eq!(xi.order, n);
            for r in 0..2 {
                assert_eq!(xi.pairing(b.row(r)), 0);
            }
        }
        let mut dedup = chars.clone();
        dedup.dedup();
        assert_eq!(dedup.len(), 6);
    }
}
