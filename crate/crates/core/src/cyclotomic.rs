//! Exact arithmetic in the cyclotomic field Q(ω_d).
//!
//! Elements are stored as rational coefficient vectors modulo `x^d - 1`, so a
//! product of two monomials is a single index shift. Zero tests reduce modulo
//! the d-th cyclotomic polynomial Φ_d, which is the only place where field
//! semantics (as opposed to group-ring semantics) enter.
//!
//! [`CyclotomicRing`] is the integer-coefficient view used by the exact rank
//! engine: residues modulo Φ_d with `BigInt` coefficients and precomputed
//! folding tables.

use std::collections::HashMap;
use std::f64::consts::PI;
use std::fmt;
use std::sync::{Arc, Mutex, OnceLock};

use num_bigint::BigInt;
use num_complex::Complex64;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CycError {
    #[error("root of unity order must be positive")]
    ZeroOrder,
    #[error("mismatched cyclotomic orders: {left} vs {right}")]
    OrderMismatch { left: usize, right: usize },
    #[error("coefficient vector has length {got}, expected {expected}")]
    BadLength { expected: usize, got: usize },
}

/// Polynomial with rational coefficients in ascending degree order.
///
/// Trailing zero coefficients are always trimmed, so the zero polynomial has
/// an empty coefficient vector.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct IntPoly {
    coeffs: Vec<BigRational>,
}

impl IntPoly {
    pub fn new(mut coeffs: Vec<BigRational>) -> Self {
        while coeffs.last().is_some_and(Zero::is_zero) {
            coeffs.pop();
        }
        IntPoly { coeffs }
    }

    pub fn from_i64(coeffs: &[i64]) -> Self {
        Self::new(coeffs.iter().map(|&c| BigRational::from_integer(c.into())).collect())
    }

    pub fn zero() -> Self {
        IntPoly { coeffs: Vec::new() }
    }

    /// `x^d - 1`
    pub fn x_pow_minus_one(d: usize) -> Self {
        let mut c = vec![0i64; d + 1];
        c[0] = -1;
        c[d] = 1;
        Self::from_i64(&c)
    }

    pub fn coeffs(&self) -> &[BigRational] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn leading(&self) -> Option<&BigRational> {
        self.coeffs.last()
    }

    pub fn add(&self, other: &IntPoly) -> IntPoly {
        let n = self.coeffs.len().max(other.coeffs.len());
        let zero = BigRational::zero();
        let out = (0..n).map(|k| self.coeffs.get(k).unwrap_or(&zero) + other.coeffs.get(k).unwrap_or(&zero)).collect();
        IntPoly::new(out)
    }

    pub fn sub(&self, other: &IntPoly) -> IntPoly {
        let n = self.coeffs.len().max(other.coeffs.len());
        let zero = BigRational::zero();
        let out = (0..n).map(|k| self.coeffs.get(k).unwrap_or(&zero) - other.coeffs.get(k).unwrap_or(&zero)).collect();
        IntPoly::new(out)
    }

    pub fn mul(&self, other: &IntPoly) -> IntPoly {
        if self.is_zero() || other.is_zero() {
            return IntPoly::zero();
        }
        let mut out = vec![BigRational::zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        IntPoly::new(out)
    }

    /// Euclidean division. Panics if `divisor` is the zero polynomial.
    pub fn div_rem(&self, divisor: &IntPoly) -> (IntPoly, IntPoly) {
        let dd = divisor.degree().expect("division by the zero polynomial");
        let lead = divisor.leading().unwrap().clone();
        let mut rem = self.coeffs.clone();
        if rem.len() <= dd {
            return (IntPoly::zero(), self.clone());
        }
        let mut quot = vec![BigRational::zero(); rem.len() - dd];
        for k in (dd..rem.len()).rev() {
            if rem[k].is_zero() {
                continue;
            }
            let q = &rem[k] / &lead;
            for (j, c) in divisor.coeffs.iter().enumerate() {
                let t = &q * c;
                rem[k - dd + j] -= t;
            }
            quot[k - dd] = q;
        }
        rem.truncate(dd);
        (IntPoly::new(quot), IntPoly::new(rem))
    }

    pub fn rem(&self, divisor: &IntPoly) -> IntPoly {
        self.div_rem(divisor).1
    }

    pub fn eval(&self, z: Complex64) -> Complex64 {
        self.coeffs.iter().rev().fold(Complex64::zero(), |acc, c| acc * z + rational_to_f64(c))
    }

    /// Coefficients as machine integers, if they all are.
    pub fn to_i64_coeffs(&self) -> Option<Vec<i64>> {
        self.coeffs.iter().map(|c| if c.is_integer() { c.to_integer().to_i64() } else { None }).collect()
    }
}

impl fmt::Display for IntPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (k, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let sign = if c.is_negative() { "-" } else { "+" };
            if first {
                if c.is_negative() {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {sign} ")?;
            }
            first = false;
            let a = c.abs();
            match (k, a.is_one()) {
                (0, _) => write!(f, "{a}")?,
                (1, true) => write!(f, "x")?,
                (1, false) => write!(f, "{a}x")?,
                (_, true) => write!(f, "x^{k}")?,
                (_, false) => write!(f, "{a}x^{k}")?,
            }
        }
        Ok(())
    }
}

fn rational_to_f64(r: &BigRational) -> f64 {
    r.to_f64().unwrap_or(f64::NAN)
}

/// Divisors of `n` in ascending order.
pub fn divisors(n: usize) -> Vec<usize> {
    let mut small = Vec::new();
    let mut large = Vec::new();
    let mut i = 1;
    while i * i <= n {
        if n.is_multiple_of(i) {
            small.push(i);
            if i != n / i {
                large.push(n / i);
            }
        }
        i += 1;
    }
    small.extend(large.into_iter().rev());
    small
}

pub fn euler_totient(n: usize) -> usize {
    (1..=n).filter(|&k| k.gcd(&n) == 1).count()
}

fn phi_cache() -> &'static Mutex<HashMap<usize, IntPoly>> {
    static CACHE: OnceLock<Mutex<HashMap<usize, IntPoly>>> = OnceLock::new();
    CACHE.get_or_init(|| Mutex::new(HashMap::new()))
}

/// The d-th cyclotomic polynomial, by exact division of `x^d - 1` by Φ_e for
/// every proper divisor e of d.
pub fn cyclotomic_polynomial(d: usize) -> Result<IntPoly, CycError> {
    if d == 0 {
        return Err(CycError::ZeroOrder);
    }
    if let Some(p) = phi_cache().lock().unwrap().get(&d) {
        return Ok(p.clone());
    }
    let mut acc = IntPoly::x_pow_minus_one(d);
    for e in divisors(d).into_iter().filter(|&e| e != d) {
        let (q, r) = acc.div_rem(&cyclotomic_polynomial(e)?);
        debug_assert!(r.is_zero(), "Φ_{e} does not divide x^{d} - 1 quotient");
        acc = q;
    }
    phi_cache().lock().unwrap().insert(d, acc.clone());
    Ok(acc)
}

/// Element of Q(ω_d), stored as Σ coeffs\[k\]·ω_d^k modulo `x^d - 1`.
///
/// The derived `PartialEq` compares representations, not field values: two
/// different coefficient vectors can denote the same number. Use
/// [`CycNum::field_eq`] for value equality.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct CycNum {
    d: usize,
    coeffs: Vec<BigRational>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ArithOp {
    Add,
    Sub,
    Mul,
    Negate,
}

impl CycNum {
    pub fn new(d: usize, coeffs: Vec<BigRational>) -> Result<Self, CycError> {
        if d == 0 {
            return Err(CycError::ZeroOrder);
        }
        if coeffs.len() != d {
            return Err(CycError::BadLength { expected: d, got: coeffs.len() });
        }
        Ok(CycNum { d, coeffs })
    }

    pub fn zero(d: usize) -> Result<Self, CycError> {
        Self::new(d, vec![BigRational::zero(); d])
    }

    pub fn from_integer(d: usize, value: i64) -> Result<Self, CycError> {
        let mut c = Self::zero(d)?;
        c.coeffs[0] = BigRational::from_integer(value.into());
        Ok(c)
    }

    pub fn one(d: usize) -> Result<Self, CycError> {
        Self::from_integer(d, 1)
    }

    /// Exact ω_d^k; negative exponents wrap.
    pub fn root_power(d: usize, k: i64) -> Result<Self, CycError> {
        let mut c = Self::zero(d)?;
        let idx = k.rem_euclid(d as i64) as usize;
        c.coeffs[idx] = BigRational::one();
        Ok(c)
    }

    pub fn order(&self) -> usize {
        self.d
    }

    pub fn coeffs(&self) -> &[BigRational] {
        &self.coeffs
    }

    fn check_order(&self, other: &CycNum) -> Result<(), CycError> {
        if self.d != other.d {
            return Err(CycError::OrderMismatch { left: self.d, right: other.d });
        }
        Ok(())
    }

    pub fn try_add(&self, other: &CycNum) -> Result<CycNum, CycError> {
        self.check_order(other)?;
        let coeffs = self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| a + b).collect();
        Ok(CycNum { d: self.d, coeffs })
    }

    pub fn try_sub(&self, other: &CycNum) -> Result<CycNum, CycError> {
        self.check_order(other)?;
        let coeffs = self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| a - b).collect();
        Ok(CycNum { d: self.d, coeffs })
    }

    /// Cyclic convolution of the coefficient vectors.
    pub fn try_mul(&self, other: &CycNum) -> Result<CycNum, CycError> {
        self.check_order(other)?;
        let d = self.d;
        let mut out = vec![BigRational::zero(); d];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                if b.is_zero() {
                    continue;
                }
                out[(i + j) % d] += a * b;
            }
        }
        Ok(CycNum { d, coeffs: out })
    }

    pub fn negate(&self) -> CycNum {
        CycNum { d: self.d, coeffs: self.coeffs.iter().map(|c| -c).collect() }
    }

    /// Residue modulo Φ_d, i.e. the canonical field representative.
    pub fn residue(&self) -> IntPoly {
        let phi = cyclotomic_polynomial(self.d).expect("order is positive");
        IntPoly::new(self.coeffs.clone()).rem(&phi)
    }

    pub fn is_zero(&self) -> bool {
        if self.coeffs.iter().all(Zero::is_zero) {
            return true;
        }
        self.residue().is_zero()
    }

    pub fn field_eq(&self, other: &CycNum) -> Result<bool, CycError> {
        Ok(self.try_sub(other)?.is_zero())
    }

    /// Numeric value at ω_d = e^{2πi/d}.
    pub fn to_complex(&self) -> Complex64 {
        self.coeffs
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(k, c)| root_of_unity(self.d, k as i64) * rational_to_f64(c))
            .sum()
    }
}

/// Exact ring operation dispatcher; `Negate` ignores `b` apart from the order check.
pub fn cyc_arith(a: &CycNum, b: &CycNum, op: ArithOp) -> Result<CycNum, CycError> {
    match op {
        ArithOp::Add => a.try_add(b),
        ArithOp::Sub => a.try_sub(b),
        ArithOp::Mul => a.try_mul(b),
        ArithOp::Negate => {
            a.check_order(b)?;
            Ok(a.negate())
        }
    }
}

macro_rules! forward_binop {
    ($tr:ident, $method:ident, $checked:ident) => {
        impl std::ops::$tr<&CycNum> for &CycNum {
            type Output = CycNum;
            fn $method(self, rhs: &CycNum) -> CycNum {
                self.$checked(rhs).unwrap_or_else(|e| panic!("{e}"))
            }
        }
        impl std::ops::$tr<CycNum> for CycNum {
            type Output = CycNum;
            fn $method(self, rhs: CycNum) -> CycNum {
                (&self).$method(&rhs)
            }
        }
    };
}

forward_binop!(Add, add, try_add);
forward_binop!(Sub, sub, try_sub);
forward_binop!(Mul, mul, try_mul);

impl std::ops::Neg for &CycNum {
    type Output = CycNum;
    fn neg(self) -> CycNum {
        self.negate()
    }
}

impl std::ops::Neg for CycNum {
    type Output = CycNum;
    fn neg(self) -> CycNum {
        self.negate()
    }
}

impl fmt::Display for CycNum {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let terms: Vec<String> = self
            .coeffs
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(k, c)| match k {
                0 => format!("{c}"),
                _ if c.is_one() => format!("w^{k}"),
                _ => format!("{c}*w^{k}"),
            })
            .collect();
        if terms.is_empty() {
            write!(f, "0")
        } else {
            write!(f, "{}", terms.join(" + "))
        }
    }
}

/// e^{2πik/d} with the exponent reduced first so large k stay accurate.
pub fn root_of_unity(d: usize, k: i64) -> Complex64 {
    let r = k.rem_euclid(d as i64) as f64;
    Complex64::from_polar(1.0, 2.0 * PI * r / d as f64)
}

/// Residue of an element of Z\[ω_d\], coefficients of 1, x, …, x^{φ(d)-1}.
pub type RingElem = Vec<BigInt>;

/// Integer arithmetic in Z\[x\]/Φ_d with precomputed reduction tables.
///
/// Φ_d is monic with integer coefficients, so integer inputs stay integral
/// under multiplication and reduction.
#[derive(Debug)]
pub struct CyclotomicRing {
    d: usize,
    phi_deg: usize,
    /// `fold[k]` is x^{φ+k} mod Φ_d.
    fold: Vec<Vec<i64>>,
    /// `roots[k]` is ω_d^k mod Φ_d.
    roots: Vec<RingElem>,
}

impl CyclotomicRing {
    pub fn new(d: usize) -> Result<Self, CycError> {
        let phi = cyclotomic_polynomial(d)?;
        let phi_deg = phi.degree().unwrap_or(0);
        let reduce_monomial = |k: usize| -> Vec<i64> {
            let mut c = vec![0i64; k + 1];
            c[k] = 1;
            let r = IntPoly::from_i64(&c).rem(&phi);
            let mut v = r.to_i64_coeffs().expect("Φ_d is monic over Z");
            v.resize(phi_deg, 0);
            v
        };
        let fold = (0..phi_deg.saturating_sub(1)).map(|k| reduce_monomial(phi_deg + k)).collect();
        let roots = (0..d).map(|k| reduce_monomial(k).into_iter().map(BigInt::from).collect()).collect();
        Ok(CyclotomicRing { d, phi_deg, fold, roots })
    }

    /// Shared instance per order.
    pub fn shared(d: usize) -> Result<Arc<Self>, CycError> {
        static CACHE: OnceLock<Mutex<HashMap<usize, Arc<CyclotomicRing>>>> = OnceLock::new();
        let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
        if let Some(r) = cache.lock().unwrap().get(&d) {
            return Ok(r.clone());
        }
        let ring = Arc::new(Self::new(d)?);
        cache.lock().unwrap().insert(d, ring.clone());
        Ok(ring)
    }

    pub fn order(&self) -> usize {
        self.d
    }

    /// Degree of Φ_d, the number of residue coefficients.
    pub fn width(&self) -> usize {
        self.phi_deg
    }

    pub fn zero(&self) -> RingElem {
        vec![BigInt::zero(); self.phi_deg]
    }

    pub fn root(&self, k: usize) -> &RingElem {
        &self.roots[k % self.d]
    }

    pub fn is_zero(&self, a: &[BigInt]) -> bool {
        a.iter().all(Zero::is_zero)
    }

    pub fn mul(&self, a: &[BigInt], b: &[BigInt]) -> RingElem {
        let n = self.phi_deg;
        if n == 0 {
            return Vec::new();
        }
        let mut wide = vec![BigInt::zero(); 2 * n - 1];
        for (i, x) in a.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            for (j, y) in b.iter().enumerate() {
                if !y.is_zero() {
                    wide[i + j] += x * y;
                }
            }
        }
        let (low, high) = wide.split_at_mut(n);
        for (k, c) in high.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            for (slot, &f) in low.iter_mut().zip(&self.fold[k]) {
                if f != 0 {
                    *slot += c * f;
                }
            }
        }
        wide.truncate(n);
        wide
    }

    /// `p·x - f·y`, the division-free elimination update.
    pub fn cross(&self, p: &[BigInt], x: &[BigInt], f: &[BigInt], y: &[BigInt]) -> RingElem {
        let mut a = self.mul(p, x);
        let b = self.mul(f, y);
        for (s, t) in a.iter_mut().zip(b) {
            *s -= t;
        }
        a
    }

    /// Integer residue of `a` scaled by `scale`, which must clear every
    /// denominator of the rational residue.
    pub fn embed_scaled(&self, a: &CycNum, scale: &BigInt) -> RingElem {
        debug_assert_eq!(a.order(), self.d);
        let mut out = self.zero();
        for (k, c) in a.coeffs().iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let scaled = c * BigRational::from_integer(scale.clone());
            debug_assert!(scaled.is_integer());
            let s = scaled.to_integer();
            for (slot, r) in out.iter_mut().zip(&self.roots[k]) {
                if !r.is_zero() {
                    *slot += &s * r;
                }
            }
        }
        out
    }
}

/// Least common multiple of the coefficient denominators of `a`.
pub fn denominator_lcm(a: &CycNum) -> BigInt {
    a.coeffs().iter().fold(BigInt::one(), |acc, c| acc.lcm(c.denom()))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64) -> BigRational {
        BigRational::from_integer(n.into())
    }

    #[test]
    fn root_power_identity_and_reduction() {
        let one = CycNum::root_power(4, 0).unwrap();
        assert_eq!(one.coeffs(), &[q(1), q(0), q(0), q(0)]);
        let w2 = CycNum::root_power(4, 6).unwrap();
        assert_eq!(w2.coeffs(), &[q(0), q(0), q(1), q(0)]);
        let wneg = CycNum::root_power(4, -1).unwrap();
        assert_eq!(wneg.coeffs(), &[q(0), q(0), q(0), q(1)]);
    }

    #[test]
    fn root_power_rejects_zero_order() {
        assert_eq!(CycNum::root_power(0, 1), Err(CycError::ZeroOrder));
    }

    #[test]
    fn half_turn_is_minus_one() {
        let w3 = CycNum::root_power(6, 3).unwrap();
        // numeric oracle first
        assert!((w3.to_complex() - Complex64::new(-1.0, 0.0)).norm() < 1e-12);
        let sum = &w3 + &CycNum::one(6).unwrap();
        assert!(sum.is_zero());
    }

    #[test]
    fn product_of_inverse_roots_is_one() {
        let a = CycNum::root_power(4, 1).unwrap();
        let b = CycNum::root_power(4, 3).unwrap();
        let p = &a * &b;
        assert!(p.field_eq(&CycNum::one(4).unwrap()).unwrap());
        assert_eq!(p.coeffs()[0], q(1));
    }

    #[test]
    fn cube_roots_sum_to_zero() {
        let s = &(&CycNum::root_power(6, 2).unwrap() + &CycNum::root_power(6, 4).unwrap()) + &CycNum::one(6).unwrap();
        assert!(s.to_complex().norm() < 1e-12);
        assert!(s.is_zero());
    }

    #[test]
    fn self_difference_is_zero() {
        let a = CycNum::new(5, vec![q(3), q(-1), q(0), q(7), q(2)]).unwrap();
        let z = &a - &a;
        assert!(z.coeffs().iter().all(Zero::is_zero));
        assert!(z.is_zero());
    }

    #[test]
    fn mismatched_orders_are_rejected() {
        let a = CycNum::one(4).unwrap();
        let b = CycNum::one(6).unwrap();
        assert_eq!(cyc_arith(&a, &b, ArithOp::Add), Err(CycError::OrderMismatch { left: 4, right: 6 }));
        assert!(cyc_arith(&a, &b, ArithOp::Negate).is_err());
    }

    #[test]
    #[should_panic]
    fn operator_panics_on_mismatch() {
        let _ = &CycNum::one(4).unwrap() * &CycNum::one(5).unwrap();
    }

    #[test]
    fn small_cyclotomic_polynomials() {
        assert_eq!(cyclotomic_polynomial(1).unwrap(), IntPoly::from_i64(&[-1, 1]));
        assert_eq!(cyclotomic_polynomial(2).unwrap(), IntPoly::from_i64(&[1, 1]));
        assert_eq!(cyclotomic_polynomial(4).unwrap(), IntPoly::from_i64(&[1, 0, 1]));
        assert_eq!(cyclotomic_polynomial(6).unwrap(), IntPoly::from_i64(&[1, -1, 1]));
        assert_eq!(cyclotomic_polynomial(12).unwrap(), IntPoly::from_i64(&[1, 0, -1, 0, 1]));
        assert_eq!(cyclotomic_polynomial(0), Err(CycError::ZeroOrder));
        assert_eq!(cyclotomic_polynomial(6).unwrap().to_string(), "x^2 - x + 1");
    }

    #[test]
    fn phi_4_by_dividing_out_lower_factors() {
        // x^4 - 1 = Φ_1 Φ_2 Φ_4
        let lower = IntPoly::from_i64(&[-1, 1]).mul(&IntPoly::from_i64(&[1, 1]));
        let (quot, rem) = IntPoly::x_pow_minus_one(4).div_rem(&lower);
        assert!(rem.is_zero());
        assert_eq!(quot, cyclotomic_polynomial(4).unwrap());
    }

    #[test]
    fn degrees_partition_d() {
        for d in 1..=30 {
            let total: usize =
                divisors(d).into_iter().map(|e| cyclotomic_polynomial(e).unwrap().degree().unwrap()).sum();
            assert_eq!(total, d);
            assert_eq!(cyclotomic_polynomial(d).unwrap().degree(), Some(euler_totient(d)));
        }
    }

    #[test]
    fn is_zero_cases() {
        let s = &CycNum::root_power(4, 2).unwrap() + &CycNum::one(4).unwrap();
        assert!(s.is_zero());
        assert!(!CycNum::root_power(5, 1).unwrap().is_zero());
        let mut all = CycNum::zero(6).unwrap();
        for k in 0..6 {
            all = &all + &CycNum::root_power(6, k).unwrap();
        }
        assert!(all.is_zero());
    }

    #[test]
    fn ring_mul_matches_cyclic_convolution() {
        for d in [5usize, 8, 9, 12] {
            let ring = CyclotomicRing::new(d).unwrap();
            for a in 0..d {
                for b in 0..d {
                    let prod = ring.mul(ring.root(a), ring.root(b));
                    assert_eq!(&prod, ring.root(a + b), "d={d} a={a} b={b}");
                }
            }
        }
    }

    #[test]
    fn embed_scaled_clears_denominators() {
        let half = BigRational::new(1.into(), 2.into());
        let third = BigRational::new(1.into(), 3.into());
        let a = CycNum::new(4, vec![half, q(0), third, q(0)]).unwrap();
        let ring = CyclotomicRing::new(4).unwrap();
        let scale = denominator_lcm(&a);
        assert_eq!(scale, BigInt::from(6));
        // (1/2 + 1/3·ω^2)·6 = 3 - 2 = 1
        assert_eq!(ring.embed_scaled(&a, &scale), vec![BigInt::from(1), BigInt::from(0)]);
    }

    #[test]
    fn divisors_sorted() {
        assert_eq!(divisors(12), vec![1, 2, 3, 4, 6, 12]);
        assert_eq!(divisors(1), vec![1]);
        assert_eq!(divisors(9), vec![1, 3, 9]);
    }
}
