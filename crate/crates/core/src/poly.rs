//! Integer polynomials, exact characteristic polynomials of integer matrices,
//! cyclotomic polynomials and the unit-circle decision procedure.

use std::collections::HashMap;
use std::fmt;
use std::sync::{Mutex, OnceLock};

use num_bigint::BigInt;
use num_complex::Complex64;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::intmat::IntMatrix;

/// Dense polynomial with `BigInt` coefficients, lowest degree first.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct IntPoly {
    coeffs: Vec<BigInt>,
}

impl IntPoly {
    pub fn new(mut coeffs: Vec<BigInt>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        IntPoly { coeffs }
    }

    pub fn from_i64(coeffs: &[i64]) -> Self {
        Self::new(coeffs.iter().map(|&c| BigInt::from(c)).collect())
    }

    pub fn zero() -> Self {
        IntPoly { coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        Self::from_i64(&[1])
    }

    /// `x^k - 1`
    pub fn x_pow_minus_one(k: usize) -> Self {
        let mut c = vec![BigInt::zero(); k + 1];
        c[0] = -BigInt::one();
        c[k] = BigInt::one();
        Self::new(c)
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    pub fn coeff(&self, i: usize) -> BigInt {
        self.coeffs.get(i).cloned().unwrap_or_default()
    }

    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.coeffs.len() == 1 && self.coeffs[0].is_one()
    }

    pub fn is_monic(&self) -> bool {
        self.coeffs.last().is_some_and(|c| c.is_one())
    }

    pub fn add(&self, other: &IntPoly) -> IntPoly {
        let n = self.coeffs.len().max(other.coeffs.len());
        Self::new((0..n).map(|i| self.coeff(i) + other.coeff(i)).collect())
    }

    pub fn sub(&self, other: &IntPoly) -> IntPoly {
        let n = self.coeffs.len().max(other.coeffs.len());
        Self::new((0..n).map(|i| self.coeff(i) - other.coeff(i)).collect())
    }

    pub fn mul(&self, other: &IntPoly) -> IntPoly {
        if self.is_zero() || other.is_zero() {
            return Self::zero();
        }
        let mut out = vec![BigInt::zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                if !b.is_zero() {
                    out[i + j] += a * b;
                }
            }
        }
        Self::new(out)
    }

    /// Division by a monic polynomial: returns `(quotient, remainder)`.
    pub fn divrem_monic(&self, d: &IntPoly) -> (IntPoly, IntPoly) {
        assert!(d.is_monic(), "divisor must be monic");
        let dd = d.degree().unwrap();
        let Some(n) = self.degree() else {
            return (Self::zero(), Self::zero());
        };
        if n < dd {
            return (Self::zero(), self.clone());
        }
        let support: Vec<(usize, &BigInt)> = d.coeffs[..dd]
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .collect();
        let mut r = self.coeffs.clone();
        let mut q = vec![BigInt::zero(); n - dd + 1];
        for i in (0..=n - dd).rev() {
            let c = std::mem::take(&mut r[i + dd]);
            if c.is_zero() {
                continue;
            }
            for &(j, dj) in &support {
                r[i + j] -= &c * dj;
            }
            q[i] = c;
        }
        r.truncate(dd);
        (Self::new(q), Self::new(r))
    }

    pub fn derivative(&self) -> IntPoly {
        Self::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, c)| c * BigInt::from(i))
                .collect(),
        )
    }

    /// `p(x^k)`
    pub fn compose_power(&self, k: usize) -> IntPoly {
        if self.is_zero() {
            return Self::zero();
        }
        let mut c = vec![BigInt::zero(); (self.coeffs.len() - 1) * k + 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            c[i * k] = a.clone();
        }
        Self::new(c)
    }

    pub fn eval_complex(&self, z: Complex64) -> Complex64 {
        self.coeffs
            .iter()
            .rev()
            .fold(Complex64::new(0.0, 0.0), |acc, c| {
                acc * z + Complex64::new(c.to_f64().unwrap_or(f64::NAN), 0.0)
            })
    }

    pub fn to_f64(&self) -> Vec<f64> {
        self.coeffs
            .iter()
            .map(|c| c.to_f64().unwrap_or(f64::NAN))
            .collect()
    }

    /// Numeric roots (with multiplicity).
    pub fn roots(&self) -> Vec<Complex64> {
        let c: Vec<Complex64> = self
            .to_f64()
            .into_iter()
            .map(|x| Complex64::new(x, 0.0))
            .collect();
        polynomial_roots(&c)
    }
}

impl fmt::Display for IntPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let neg = c.is_negative();
            let abs = c.abs();
            if first {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if neg { "-" } else { "+" })?;
            }
            first = false;
            let show_coeff = !abs.is_one() || i == 0;
            if show_coeff {
                write!(f, "{abs}")?;
            }
            match i {
                0 => {}
                1 => write!(f, "x")?,
                _ => write!(f, "x^{i}")?,
            }
        }
        Ok(())
    }
}

// ---------------------------------------------------------------------------
// Modular helpers

fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

fn pow_mod(mut a: u64, mut e: u64, m: u64) -> u64 {
    let mut r = 1 % m;
    a %= m;
    while e > 0 {
        if e & 1 == 1 {
            r = mul_mod(r, a, m);
        }
        a = mul_mod(a, a, m);
        e >>= 1;
    }
    r
}

/// Deterministic Miller-Rabin for 64-bit integers.
pub fn is_prime_u64(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    const BASES: [u64; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];
    for p in BASES {
        if n.is_multiple_of(p) {
            return n == p;
        }
    }
    let mut d = n - 1;
    let mut s = 0;
    while d.is_multiple_of(2) {
        d /= 2;
        s += 1;
    }
    'outer: for a in BASES {
        let mut x = pow_mod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul_mod(x, x, n);
            if x == n - 1 {
                continue 'outer;
            }
        }
        return false;
    }
    true
}

fn prime_factors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut p = 2;
    while p * p <= n {
        if n.is_multiple_of(p) {
            out.push(p);
            while n.is_multiple_of(p) {
                n /= p;
            }
        }
        p += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

fn big_mod(c: &BigInt, m: u64) -> u64 {
    c.mod_floor(&BigInt::from(m)).to_u64().unwrap()
}

fn inv_mod(a: u64, m: u64) -> u64 {
    pow_mod(a, m - 2, m)
}

/// Totients of `0..=n`.
pub fn totient_sieve(n: usize) -> Vec<usize> {
    let mut phi: Vec<usize> = (0..=n).collect();
    for i in 2..=n {
        if phi[i] == i {
            let mut j = i;
            while j <= n {
                phi[j] -= phi[j] / i;
                j += i;
            }
        }
    }
    phi
}

// ---------------------------------------------------------------------------
// Cyclotomic polynomials

fn cyclotomic_cache() -> &'static Mutex<HashMap<u64, IntPoly>> {
    static CACHE: OnceLock<Mutex<HashMap<u64, IntPoly>>> = OnceLock::new();
    CACHE.get_or_init(|| Mutex::new(HashMap::new()))
}

/// The `n`-th cyclotomic polynomial.
pub fn cyclotomic(n: u64) -> IntPoly {
    assert!(n >= 1);
    if let Some(p) = cyclotomic_cache().lock().unwrap().get(&n) {
        return p.clone();
    }
    let primes = prime_factors(n);
    let rad: u64 = primes.iter().product();
    let p = if rad != n {
        cyclotomic(rad).compose_power((n / rad) as usize)
    } else {
        // Phi_{mp}(x) = Phi_m(x^p) / Phi_m(x) for p not dividing m
        let mut cur = IntPoly::from_i64(&[-1, 1]);
        for &q in &primes {
            let (quot, rem) = cur.compose_power(q as usize).divrem_monic(&cur);
            debug_assert!(rem.is_zero());
            cur = quot;
        }
        cur
    };
    cyclotomic_cache().lock().unwrap().insert(n, p.clone());
    p
}

/// Returns a prime `l ≡ 1 (mod n)` above 2^40 and a primitive `n`-th root
/// of unity modulo `l`.
fn root_of_unity_field(n: u64) -> (u64, u64) {
    let start = (1u64 << 40) / n + 1;
    let mut k = start;
    let l = loop {
        let l = k * n + 1;
        if is_prime_u64(l) {
            break l;
        }
        k += 1;
    };
    if n == 1 {
        return (l, 1);
    }
    let qs = prime_factors(n);
    let mut x = 2;
    loop {
        let z = pow_mod(x, (l - 1) / n, l);
        if qs.iter().all(|&q| pow_mod(z, n / q, l) != 1) {
            return (l, z);
        }
        x += 1;
    }
}

/// Necessary condition for `Phi_n | p`: `p` vanishes at a primitive `n`-th
/// root of unity in a prime field.
fn may_vanish_at_root_of_unity(p: &IntPoly, field: (u64, u64)) -> bool {
    let (l, z) = field;
    let mut acc = 0u64;
    for c in p.coeffs.iter().rev() {
        acc = (mul_mod(acc, z, l) + big_mod(c, l)) % l;
    }
    acc == 0
}

// ---------------------------------------------------------------------------
// Unit-circle test

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum CircleTag {
    AllOnUnitCircle,
    OffUnitCircle,
}

#[derive(Clone, Debug, PartialEq)]
pub struct UnitCircleVerdict {
    pub tag: CircleTag,
    /// Multiplicity of the root 0 that was stripped first.
    pub zero_eigenvalues: usize,
    /// `(n, multiplicity)` for each cyclotomic factor divided out.
    pub cyclotomic_factors: Vec<(u64, usize)>,
    /// The non-cyclotomic remainder, present when off the circle.
    pub witness: Option<IntPoly>,
    /// Largest root modulus of the witness.
    pub max_modulus: Option<f64>,
    /// Smallest root modulus of the witness.
    pub min_modulus: Option<f64>,
}

impl UnitCircleVerdict {
    pub fn is_off(&self) -> bool {
        self.tag == CircleTag::OffUnitCircle
    }
}

pub fn unit_circle_test(p: &IntPoly) -> Result<UnitCircleVerdict> {
    if !p.is_monic() {
        return Err(Error::NonMonic);
    }
    let zeros = p.coeffs.iter().take_while(|c| c.is_zero()).count();
    let mut rest = IntPoly::new(p.coeffs[zeros..].to_vec());
    let deg = rest.degree().unwrap();
    let limit = (deg * deg).max(6);
    let phi = totient_sieve(limit);
    let mut factors = Vec::new();
    for n in 1..=limit {
        let d = rest.degree().unwrap();
        if d == 0 {
            break;
        }
        if phi[n] > d {
            continue;
        }
        let field = root_of_unity_field(n as u64);
        let mut mult = 0;
        while rest.degree().unwrap() >= phi[n] && may_vanish_at_root_of_unity(&rest, field) {
            let (q, r) = rest.divrem_monic(&cyclotomic(n as u64));
            if !r.is_zero() {
                break;
            }
            rest = q;
            mult += 1;
        }
        if mult > 0 {
            factors.push((n as u64, mult));
        }
    }
    if rest.is_one() {
        return Ok(UnitCircleVerdict {
            tag: CircleTag::AllOnUnitCircle,
            zero_eigenvalues: zeros,
            cyclotomic_factors: factors,
            witness: None,
            max_modulus: None,
            min_modulus: None,
        });
    }
    let roots = squarefree_roots(&rest);
    let max = roots.iter().map(|z| z.norm()).fold(0.0, f64::max);
    let min = roots.iter().map(|z| z.norm()).fold(f64::INFINITY, f64::min);
    Ok(UnitCircleVerdict {
        tag: CircleTag::OffUnitCircle,
        zero_eigenvalues: zeros,
        cyclotomic_factors: factors,
        witness: Some(rest),
        max_modulus: Some(max),
        min_modulus: Some(min),
    })
}

// ---------------------------------------------------------------------------
// Squarefree part and numeric roots

fn gcd_mod(a: &[u64], b: &[u64], l: u64) -> Vec<u64> {
    fn trim(v: &mut Vec<u64>) {
        while v.last() == Some(&0) {
            v.pop();
        }
    }
    let mut a = a.to_vec();
    let mut b = b.to_vec();
    trim(&mut a);
    trim(&mut b);
    while !b.is_empty() {
        let inv = inv_mod(*b.last().unwrap(), l);
        while a.len() >= b.len() {
            let c = mul_mod(*a.last().unwrap(), inv, l);
            let shift = a.len() - b.len();
            for (j, &bj) in b.iter().enumerate() {
                a[shift + j] = (a[shift + j] + l - mul_mod(c, bj, l)) % l;
            }
            trim(&mut a);
            if a.is_empty() {
                break;
            }
        }
        std::mem::swap(&mut a, &mut b);
    }
    a
}

type RatPoly = Vec<BigRational>;

fn rat_trim(v: &mut RatPoly) {
    while v.last().is_some_and(|c| c.is_zero()) {
        v.pop();
    }
}

fn rat_divrem(a: &RatPoly, b: &RatPoly) -> (RatPoly, RatPoly) {
    let mut r = a.clone();
    rat_trim(&mut r);
    let db = b.len() - 1;
    if r.len() < b.len() {
        return (Vec::new(), r);
    }
    let mut q = vec![BigRational::zero(); r.len() - db];
    let lead = b[db].clone();
    while r.len() >= b.len() {
        let shift = r.len() - b.len();
        let c = r.last().unwrap() / &lead;
        for (j, bj) in b.iter().enumerate() {
            r[shift + j] -= &c * bj;
        }
        q[shift] = c;
        r.pop();
        rat_trim(&mut r);
    }
    (q, r)
}

fn rat_gcd(a: &RatPoly, b: &RatPoly) -> RatPoly {
    let mut a = a.clone();
    let mut b = b.clone();
    rat_trim(&mut a);
    rat_trim(&mut b);
    while !b.is_empty() {
        let (_, r) = rat_divrem(&a, &b);
        a = b;
        b = r;
    }
    a
}

/// Roots of the squarefree part of `p`, each simple root listed once.
fn squarefree_roots(p: &IntPoly) -> Vec<Complex64> {
    let d = p.derivative();
    let l = (1u64 << 61) - 1;
    let pm: Vec<u64> = p.coeffs.iter().map(|c| big_mod(c, l)).collect();
    let dm: Vec<u64> = d.coeffs.iter().map(|c| big_mod(c, l)).collect();
    let squarefree = gcd_mod(&pm, &dm, l).len() <= 1;
    let coeffs: Vec<f64> = if squarefree {
        p.to_f64()
    } else {
        let pr: RatPoly = p.coeffs.iter().map(|c| BigRational::from(c.clone())).collect();
        let dr: RatPoly = d.coeffs.iter().map(|c| BigRational::from(c.clone())).collect();
        let g = rat_gcd(&pr, &dr);
        let (q, _) = rat_divrem(&pr, &g);
        q.iter().map(|c| c.to_f64().unwrap_or(f64::NAN)).collect()
    };
    let c: Vec<Complex64> = coeffs.into_iter().map(|x| Complex64::new(x, 0.0)).collect();
    polynomial_roots(&c)
}

/// All complex roots of a polynomial (coefficients lowest degree first), by
/// Aberth iteration followed by Newton polishing.
pub fn polynomial_roots(coeffs: &[Complex64]) -> Vec<Complex64> {
    let mut c: Vec<Complex64> = coeffs.to_vec();
    while c.last().is_some_and(|z| z.norm() == 0.0) {
        c.pop();
    }
    if c.len() <= 1 {
        return Vec::new();
    }
    let zeros = c.iter().take_while(|z| z.norm() == 0.0).count();
    let mut roots = vec![Complex64::new(0.0, 0.0); zeros];
    let mut c: Vec<Complex64> = c[zeros..].to_vec();
    let lead = *c.last().unwrap();
    for z in c.iter_mut() {
        *z /= lead;
    }
    let n = c.len() - 1;
    if n == 0 {
        return roots;
    }
    let eval = |z: Complex64| -> (Complex64, Complex64) {
        let mut p = Complex64::new(0.0, 0.0);
        let mut dp = Complex64::new(0.0, 0.0);
        for a in c.iter().rev() {
            dp = dp * z + p;
            p = p * z + a;
        }
        (p, dp)
    };
    let radius = c[0].norm().powf(1.0 / n as f64).max(1e-3);
    let mut z: Vec<Complex64> = (0..n)
        .map(|k| {
            let theta = 2.0 * std::f64::consts::PI * k as f64 / n as f64 + 0.4;
            Complex64::from_polar(radius, theta)
        })
        .collect();
    for _ in 0..2000 {
        let mut converged = true;
        for k in 0..n {
            let (p, dp) = eval(z[k]);
            if p.norm() == 0.0 {
                continue;
            }
            let w = if dp.norm() == 0.0 {
                Complex64::new(1e-8, 1e-8)
            } else {
                p / dp
            };
            let s: Complex64 = (0..n)
                .filter(|&j| j != k)
                .map(|j| {
                    let diff = z[k] - z[j];
                    if diff.norm() == 0.0 {
                        Complex64::new(0.0, 0.0)
                    } else {
                        diff.inv()
                    }
                })
                .sum();
            let delta = w / (Complex64::new(1.0, 0.0) - w * s);
            if delta.is_finite() {
                z[k] -= delta;
            }
            if delta.norm() > 1e-15 * (1.0 + z[k].norm()) {
                converged = false;
            }
        }
        if converged {
            break;
        }
    }
    // Newton polishing only for isolated roots; moving members of a cluster
    // independently would break the symmetry that keeps its centroid accurate.
    let snapshot = z.clone();
    for (k, zk) in z.iter_mut().enumerate() {
        let isolated = snapshot
            .iter()
            .enumerate()
            .all(|(j, w)| j == k || (*w - *zk).norm() > 1e-4 * (1.0 + zk.norm()));
        if !isolated {
            continue;
        }
        for _ in 0..3 {
            let (p, dp) = eval(*zk);
            if dp.norm() == 0.0 {
                break;
            }
            let step = p / dp;
            if !step.is_finite() {
                break;
            }
            let cand = *zk - step;
            if eval(cand).0.norm() <= p.norm() {
                *zk = cand;
            } else {
                break;
            }
        }
    }
    recentre_clusters(&c, &mut z);
    roots.extend(z);
    roots
}

/// A cluster of `m` roots approximates an `m`-fold root, which is a simple
/// root of `p^(m-1)`; Newton on that derivative pins the centre, and the
/// cluster is translated onto it.
fn recentre_clusters(c: &[Complex64], z: &mut [Complex64]) {
    let n = z.len();
    let mut cluster = vec![usize::MAX; n];
    let mut groups: Vec<Vec<usize>> = Vec::new();
    for k in 0..n {
        if cluster[k] != usize::MAX {
            continue;
        }
        cluster[k] = groups.len();
        let mut members = vec![k];
        let mut i = 0;
        while i < members.len() {
            let a = z[members[i]];
            for j in 0..n {
                if cluster[j] == usize::MAX && (z[j] - a).norm() < 1e-4 * (1.0 + a.norm()) {
                    cluster[j] = groups.len();
                    members.push(j);
                }
            }
            i += 1;
        }
        groups.push(members);
    }
    for members in groups.into_iter().filter(|g| g.len() > 1) {
        let mut d: Vec<Complex64> = c.to_vec();
        for _ in 1..members.len() {
            d = (1..d.len()).map(|i| d[i] * i as f64).collect();
        }
        let centre = members.iter().map(|&k| z[k]).sum::<Complex64>() / members.len() as f64;
        let spread = members.iter().map(|&k| (z[k] - centre).norm()).fold(0.0, f64::max);
        let mut x = centre;
        for _ in 0..50 {
            let (mut p, mut dp) = (Complex64::new(0.0, 0.0), Complex64::new(0.0, 0.0));
            for a in d.iter().rev() {
                dp = dp * x + p;
                p = p * x + a;
            }
            if dp.norm() == 0.0 {
                break;
            }
            let step = p / dp;
            if !step.is_finite() {
                break;
            }
            x -= step;
            if step.norm() <= 1e-16 * (1.0 + x.norm()) {
                break;
            }
        }
        if x.is_finite() && (x - centre).norm() <= spread + 1e-8 * (1.0 + centre.norm()) {
            for &k in &members {
                z[k] += x - centre;
            }
        }
    }
}

// ---------------------------------------------------------------------------
// Characteristic polynomials

/// Characteristic polynomial `det(xI - A)` modulo a prime `< 2^32`, via
/// reduction to upper Hessenberg form. Coefficients lowest degree first.
fn charpoly_mod(a: &IntMatrix, l: u64) -> Vec<u64> {
    let n = a.rows();
    let mut h: Vec<Vec<u64>> = (0..n)
        .map(|i| {
            a.row(i)
                .iter()
                .map(|&x| x.rem_euclid(l as i64) as u64)
                .collect()
        })
        .collect();
    for c in 0..n.saturating_sub(2) {
        let Some(r) = (c + 1..n).find(|&i| h[i][c] != 0) else {
            continue;
        };
        if r != c + 1 {
            h.swap(r, c + 1);
            for row in h.iter_mut() {
                row.swap(r, c + 1);
            }
        }
        let inv = inv_mod(h[c + 1][c], l);
        for i in c + 2..n {
            let u = h[i][c] * inv % l;
            if u == 0 {
                continue;
            }
            for j in 0..n {
                let s = u * h[c + 1][j] % l;
                h[i][j] = (h[i][j] + l - s) % l;
            }
            for row in h.iter_mut() {
                let s = u * row[i] % l;
                row[c + 1] = (row[c + 1] + s) % l;
            }
        }
    }
    // p_m = (x - h_mm) p_{m-1} - sum_{i<m} h_{i,m} (prod_{j=i+1}^{m} h_{j,j-1}) p_{i-1}
    let mut polys: Vec<Vec<u64>> = vec![vec![1]];
    for m in 0..n {
        let prev = &polys[m];
        let mut next = vec![0u64; m + 2];
        for (k, &c) in prev.iter().enumerate() {
            next[k + 1] = (next[k + 1] + c) % l;
            next[k] = (next[k] + l - c * h[m][m] % l) % l;
        }
        let mut t = 1u64;
        for i in (0..m).rev() {
            t = t * h[i + 1][i] % l;
            if t == 0 {
                break;
            }
            let coef = h[i][m] * t % l;
            if coef == 0 {
                continue;
            }
            for (k, &c) in polys[i].iter().enumerate() {
                next[k] = (next[k] + l - coef * c % l) % l;
            }
        }
        polys.push(next);
    }
    polys.pop().unwrap()
}

fn charpoly_primes(count: usize) -> Vec<u64> {
    let mut out = Vec::with_capacity(count);
    let mut p = (1u64 << 31) - 1;
    while out.len() < count {
        if is_prime_u64(p) {
            out.push(p);
        }
        p -= 2;
    }
    out
}

/// Exact characteristic polynomial `det(xI - A)` of a square integer matrix,
/// by multimodular Hessenberg reduction and Chinese remaindering.
pub fn charpoly(a: &IntMatrix) -> IntPoly {
    assert!(a.is_square(), "charpoly of a non-square matrix");
    let n = a.rows();
    if n == 0 {
        return IntPoly::one();
    }
    // Every coefficient is a signed sum of principal minors, so it is bounded
    // by prod (1 + |row_i|).
    let bits: f64 = (0..n)
        .map(|i| {
            let s: f64 = a.row(i).iter().map(|&x| (x as f64) * (x as f64)).sum();
            (1.0 + s.sqrt()).log2()
        })
        .sum();
    let count = ((bits + 2.0) / 30.0).ceil() as usize + 1;
    let primes = charpoly_primes(count);
    let mut modulus = BigInt::one();
    let mut acc = vec![BigInt::zero(); n + 1];
    for &l in &primes {
        let res = charpoly_mod(a, l);
        let lb = BigInt::from(l);
        if modulus.is_one() {
            acc = res.iter().map(|&r| BigInt::from(r)).collect();
        } else {
            // x = acc + modulus * ((r - acc) * modulus^{-1} mod l)
            let minv = inv_mod(big_mod(&modulus, l), l);
            for (x, &r) in acc.iter_mut().zip(res.iter()) {
                let cur = big_mod(x, l);
                let diff = (r + l - cur) % l;
                let t = mul_mod(diff, minv, l);
                *x += &modulus * BigInt::from(t);
            }
        }
        modulus *= lb;
    }
    let half = &modulus / 2;
    let coeffs = acc
        .into_iter()
        .map(|x| if x > half { x - &modulus } else { x })
        .collect();
    IntPoly::new(coeffs)
}

/// Numeric characteristic polynomial of a complex matrix, via Hessenberg
/// reduction with partial pivoting.
pub fn complex_charpoly(a: &[Vec<Complex64>]) -> Vec<Complex64> {
    let n = a.len();
    let zero = Complex64::new(0.0, 0.0);
    let mut h: Vec<Vec<Complex64>> = a.to_vec();
    for c in 0..n.saturating_sub(2) {
        let (r, best) = (c + 1..n)
            .map(|i| (i, h[i][c].norm()))
            .fold((c + 1, -1.0), |acc, x| if x.1 > acc.1 { x } else { acc });
        if best == 0.0 {
            continue;
        }
        if r != c + 1 {
            h.swap(r, c + 1);
            for row in h.iter_mut() {
                row.swap(r, c + 1);
            }
        }
        let piv = h[c + 1][c];
        for i in c + 2..n {
            let u = h[i][c] / piv;
            if u == zero {
                continue;
            }
            for j in 0..n {
                let s = u * h[c + 1][j];
                h[i][j] -= s;
            }
            for row in h.iter_mut() {
                let s = u * row[i];
                row[c + 1] += s;
            }
        }
    }
    let mut polys: Vec<Vec<Complex64>> = vec![vec![Complex64::new(1.0, 0.0)]];
    for m in 0..n {
        let prev = &polys[m];
        let mut next = vec![zero; m + 2];
        for (k, &c) in prev.iter().enumerate() {
            next[k + 1] += c;
            next[k] -= c * h[m][m];
        }
        let mut t = Complex64::new(1.0, 0.0);
        for i in (0..m).rev() {
            t *= h[i + 1][i];
            let coef = h[i][m] * t;
            for (k, &c) in polys[i].iter().enumerate() {
                next[k] -= coef * c;
            }
        }
        polys.push(next);
    }
    polys.pop().unwrap()
}

/// Spectral radius of an integer matrix. Cyclotomic factors of the exact
/// characteristic polynomial contribute modulus exactly 1.
pub fn spectral_radius(a: &IntMatrix) -> f64 {
    if a.rows() == 0 {
        return 0.0;
    }
    let v = unit_circle_test(&charpoly(a)).expect("characteristic polynomials are monic");
    let unit = if v.cyclotomic_factors.is_empty() { 0.0 } else { 1.0 };
    v.max_modulus.map_or(unit, |m| m.max(unit))
}

/// Numeric spectral radius of a complex matrix.
pub fn spectral_radius_complex(a: &[Vec<Complex64>]) -> f64 {
    polynomial_roots(&complex_charpoly(a))
        .iter()
        .map(|z| z.norm())
        .fold(0.0, f64::max)
}

/// Numeric eigenvalues of a complex matrix.
pub fn eigenvalues_complex(a: &[Vec<Complex64>]) -> Vec<Complex64> {
    polynomial_roots(&complex_charpoly(a))
}
