//! Arithmetic in F_q for odd prime powers q = p^e.
//!
//! Elements are residues of F_p[X] modulo a monic irreducible polynomial of
//! degree e. An element is stored by its position in the canonical
//! enumeration order: the little-endian coefficient vector `(c0, .., c_{e-1})`
//! read as the base-p number `c0 + c1 p + .. + c_{e-1} p^{e-1}`. Comparing two
//! elements therefore compares their enumeration positions.
//!
//! Multiplication, inversion and powers go through exponent/logarithm tables
//! over the canonical generator ν; the tables are built once from plain
//! polynomial arithmetic when the field is constructed.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Upper limit on q for the table-driven representation.
pub const MAX_FIELD_ORDER: u64 = 1 << 24;

/// An element of F_q, identified by its index in enumeration order.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct FieldElement(u32);

impl FieldElement {
    pub const ZERO: FieldElement = FieldElement(0);
    pub const ONE: FieldElement = FieldElement(1);

    /// Position of this element in [`FieldSpec::enumerate`] order.
    #[inline]
    pub fn index(self) -> u32 {
        self.0
    }

    #[inline]
    pub fn is_zero(self) -> bool {
        self.0 == 0
    }
}

/// Field operations, for callers that dispatch on an operator value.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ArithOp {
    Add,
    Sub,
    Mul,
    Neg,
    Inv,
    Pow(u64),
}

/// Serializable description of a field: enough to rebuild it and to compare
/// results produced under different defaults.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FieldHeader {
    pub p: u32,
    pub e: u32,
    pub q: u32,
    pub modulus: Vec<u32>,
    pub nu: Vec<u32>,
}

/// Arithmetic context for F_q.
#[derive(Clone, Debug)]
pub struct FieldSpec {
    p: u32,
    e: u32,
    q: u32,
    modulus: Vec<u32>,
    nu: FieldElement,
    // exp[k] = index of nu^k for k in 0..q-1
    exp: Vec<u32>,
    // log[a] = k with nu^k = a; log[0] is unused
    log: Vec<u32>,
    neg: Vec<u32>,
}

impl PartialEq for FieldSpec {
    fn eq(&self, other: &Self) -> bool {
        self.p == other.p && self.e == other.e && self.modulus == other.modulus
    }
}

impl Eq for FieldSpec {}

impl FieldSpec {
    /// Builds F_{p^e}. Without an explicit modulus (and e > 1) the smallest
    /// monic irreducible polynomial in enumeration order of its low
    /// coefficients is used.
    pub fn new(p: u32, e: u32, modulus: Option<&[u32]>) -> Result<Self> {
        if p < 3 || !is_prime(p as u64) {
            return Err(Error::NotOddPrime(p as u64));
        }
        if e < 1 {
            return Err(Error::InvalidDegree(e));
        }
        let q = (p as u64)
            .checked_pow(e)
            .filter(|&q| q <= MAX_FIELD_ORDER)
            .ok_or(Error::FieldTooLarge((p as u64).saturating_pow(e)))?;
        let q = q as u32;

        let modulus = match modulus {
            Some(m) => {
                validate_modulus(p, e, m)?;
                if !poly_is_irreducible(m, p) {
                    return Err(Error::ReducibleModulus(m.to_vec()));
                }
                m.to_vec()
            }
            None if e == 1 => vec![0, 1],
            None => default_modulus(p, e),
        };

        let mut field = FieldSpec {
            p,
            e,
            q,
            modulus,
            nu: FieldElement::ZERO,
            exp: Vec::new(),
            log: Vec::new(),
            neg: Vec::new(),
        };
        field.neg = (0..q)
            .map(|a| {
                let mut c = field.digits(a);
                for x in c.iter_mut() {
                    *x = (p - *x) % p;
                }
                field.undigits(&c)
            })
            .collect();
        field.nu = field.find_generator_slow();
        field.build_log_tables();
        Ok(field)
    }

    /// F_p.
    pub fn prime(p: u32) -> Result<Self> {
        Self::new(p, 1, None)
    }

    /// F_q with the default modulus, factoring q as p^e.
    pub fn with_order(q: u64) -> Result<Self> {
        let (p, e) = odd_prime_power(q).ok_or(Error::NotOddPrimePower(q))?;
        Self::new(p, e, None)
    }

    /// F_q with an optional explicit modulus.
    pub fn with_order_and_modulus(q: u64, modulus: Option<&[u32]>) -> Result<Self> {
        let (p, e) = odd_prime_power(q).ok_or(Error::NotOddPrimePower(q))?;
        Self::new(p, e, modulus)
    }

    pub fn p(&self) -> u32 {
        self.p
    }

    pub fn e(&self) -> u32 {
        self.e
    }

    pub fn q(&self) -> u32 {
        self.q
    }

    /// Modulus coefficients, constant term first, monic.
    pub fn modulus(&self) -> &[u32] {
        &self.modulus
    }

    /// The canonical generator ν: the first element in enumeration order
    /// with multiplicative order q - 1.
    pub fn generator(&self) -> FieldElement {
        self.nu
    }

    pub fn header(&self) -> FieldHeader {
        FieldHeader {
            p: self.p,
            e: self.e,
            q: self.q,
            modulus: self.modulus.clone(),
            nu: self.coeffs(self.nu),
        }
    }

    /// All q elements in canonical order: 0, 1, .., p-1, X, 1+X, ...
    pub fn enumerate(&self) -> impl Iterator<Item = FieldElement> + '_ {
        (0..self.q).map(FieldElement)
    }

    /// Element with the given little-endian coefficients. Missing high
    /// coefficients are zero.
    pub fn element(&self, coeffs: &[u32]) -> Result<FieldElement> {
        if coeffs.len() > self.e as usize || coeffs.iter().any(|&c| c >= self.p) {
            return Err(Error::InvalidElement(coeffs.to_vec()));
        }
        Ok(FieldElement(self.undigits(coeffs)))
    }

    /// Element at position `index` of the enumeration.
    pub fn from_index(&self, index: u32) -> Result<FieldElement> {
        if index >= self.q {
            return Err(Error::InvalidElement(vec![index]));
        }
        Ok(FieldElement(index))
    }

    /// Image of an integer in the prime subfield.
    pub fn from_int(&self, n: i64) -> FieldElement {
        FieldElement(n.rem_euclid(self.p as i64) as u32)
    }

    /// Little-endian coefficients of `a`, always of length e.
    pub fn coeffs(&self, a: FieldElement) -> Vec<u32> {
        self.digits(a.0)
    }

    pub fn add(&self, a: FieldElement, b: FieldElement) -> FieldElement {
        if self.e == 1 {
            let s = a.0 + b.0;
            return FieldElement(if s >= self.p { s - self.p } else { s });
        }
        let (mut x, mut y) = (a.0, b.0);
        let (mut out, mut place) = (0u32, 1u32);
        while x > 0 || y > 0 {
            let d = (x % self.p + y % self.p) % self.p;
            out += d * place;
            place *= self.p;
            x /= self.p;
            y /= self.p;
        }
        FieldElement(out)
    }

    #[inline]
    pub fn neg(&self, a: FieldElement) -> FieldElement {
        FieldElement(self.neg[a.0 as usize])
    }

    #[inline]
    pub fn sub(&self, a: FieldElement, b: FieldElement) -> FieldElement {
        self.add(a, self.neg(b))
    }

    #[inline]
    pub fn mul(&self, a: FieldElement, b: FieldElement) -> FieldElement {
        if a.0 == 0 || b.0 == 0 {
            return FieldElement::ZERO;
        }
        let order = self.q - 1;
        let k = self.log[a.0 as usize] + self.log[b.0 as usize];
        FieldElement(self.exp[(if k >= order { k - order } else { k }) as usize])
    }

    pub fn inv(&self, a: FieldElement) -> Result<FieldElement> {
        if a.is_zero() {
            return Err(Error::ZeroInverse);
        }
        let order = self.q - 1;
        let k = self.log[a.0 as usize];
        Ok(FieldElement(self.exp[((order - k) % order) as usize]))
    }

    pub fn div(&self, a: FieldElement, b: FieldElement) -> Result<FieldElement> {
        Ok(self.mul(a, self.inv(b)?))
    }

    /// a^k, with 0^0 = 1.
    pub fn pow(&self, a: FieldElement, k: u64) -> FieldElement {
        if k == 0 {
            return FieldElement::ONE;
        }
        if a.is_zero() {
            return FieldElement::ZERO;
        }
        let order = (self.q - 1) as u64;
        let l = self.log[a.0 as usize] as u64;
        FieldElement(self.exp[((l * (k % order)) % order) as usize])
    }

    /// Applies `op` to `operands` (one operand for `Neg`, `Inv`, `Pow`; two otherwise).
    pub fn apply(&self, op: ArithOp, operands: &[FieldElement]) -> Result<FieldElement> {
        let arity = match op {
            ArithOp::Neg | ArithOp::Inv | ArithOp::Pow(_) => 1,
            _ => 2,
        };
        if operands.len() != arity {
            return Err(Error::DimensionMismatch {
                left: operands.len(),
                right: arity,
            });
        }
        let a = operands[0];
        Ok(match op {
            ArithOp::Add => self.add(a, operands[1]),
            ArithOp::Sub => self.sub(a, operands[1]),
            ArithOp::Mul => self.mul(a, operands[1]),
            ArithOp::Neg => self.neg(a),
            ArithOp::Inv => self.inv(a)?,
            ArithOp::Pow(k) => self.pow(a, k),
        })
    }

    /// Euler's criterion. Zero counts as a square; callers wanting a nonzero
    /// square must also test for zero.
    pub fn is_square(&self, a: FieldElement) -> bool {
        a.is_zero() || self.pow(a, ((self.q - 1) / 2) as u64) == FieldElement::ONE
    }

    /// Some t with t^2 = a, if one exists.
    pub fn sqrt(&self, a: FieldElement) -> Option<FieldElement> {
        if a.is_zero() {
            return Some(FieldElement::ZERO);
        }
        let l = self.log[a.0 as usize];
        l.is_multiple_of(2).then(|| FieldElement(self.exp[(l / 2) as usize]))
    }

    /// k in [0, q-1) with ν^k = a.
    pub fn dlog(&self, a: FieldElement) -> Result<u64> {
        if a.is_zero() {
            return Err(Error::ZeroLog);
        }
        Ok(self.log[a.0 as usize] as u64)
    }

    /// Multiplicative order of a nonzero element.
    pub fn order(&self, a: FieldElement) -> Result<u64> {
        let l = self.dlog(a)?;
        let n = (self.q - 1) as u64;
        Ok(n / gcd(l, n))
    }

    fn digits(&self, mut a: u32) -> Vec<u32> {
        let mut out = vec![0; self.e as usize];
        for c in out.iter_mut() {
            *c = a % self.p;
            a /= self.p;
        }
        out
    }

    fn undigits(&self, c: &[u32]) -> u32 {
        c.iter().rev().fold(0, |acc, &d| acc * self.p + d)
    }

    fn mul_slow(&self, a: u32, b: u32) -> u32 {
        let prod = poly_mul(&self.digits(a), &self.digits(b), self.p);
        let r = poly_rem(&prod, &self.modulus, self.p);
        let mut c = vec![0; self.e as usize];
        for (dst, src) in c.iter_mut().zip(r) {
            *dst = src;
        }
        self.undigits(&c)
    }

    fn pow_slow(&self, a: u32, mut k: u64) -> u32 {
        let (mut base, mut acc) = (a, 1u32);
        while k > 0 {
            if k & 1 == 1 {
                acc = self.mul_slow(acc, base);
            }
            base = self.mul_slow(base, base);
            k >>= 1;
        }
        acc
    }

    fn find_generator_slow(&self) -> FieldElement {
        let n = (self.q - 1) as u64;
        let primes = prime_factors(n);
        (1..self.q)
            .find(|&a| primes.iter().all(|&r| self.pow_slow(a, n / r) != 1))
            .map(FieldElement)
            .expect("the multiplicative group of a finite field is cyclic")
    }

    fn build_log_tables(&mut self) {
        let n = (self.q - 1) as usize;
        self.exp = Vec::with_capacity(n);
        self.log = vec![u32::MAX; self.q as usize];
        let mut x = 1u32;
        for k in 0..n {
            self.exp.push(x);
            self.log[x as usize] = k as u32;
            x = self.mul_slow(x, self.nu.0);
        }
        debug_assert_eq!(x, 1);
    }
}

fn validate_modulus(p: u32, e: u32, m: &[u32]) -> Result<()> {
    if m.len() != e as usize + 1 {
        return Err(Error::InvalidModulus(format!(
            "expected {} coefficients for degree {e}, got {}",
            e + 1,
            m.len()
        )));
    }
    if m[e as usize] != 1 {
        return Err(Error::InvalidModulus("leading coefficient must be 1".into()));
    }
    if m.iter().any(|&c| c >= p) {
        return Err(Error::InvalidModulus(format!("coefficients must lie in [0, {p})")));
    }
    Ok(())
}

fn default_modulus(p: u32, e: u32) -> Vec<u32> {
    let count = (p as u64).pow(e);
    (0..count)
        .map(|mut idx| {
            let mut m: Vec<u32> = (0..e)
                .map(|_| {
                    let d = (idx % p as u64) as u32;
                    idx /= p as u64;
                    d
                })
                .collect();
            m.push(1);
            m
        })
        .find(|m| poly_is_irreducible(m, p))
        .expect("irreducible polynomials exist in every degree")
}

fn trim(mut a: Vec<u32>) -> Vec<u32> {
    while a.last() == Some(&0) {
        a.pop();
    }
    a
}

fn poly_mul(a: &[u32], b: &[u32], p: u32) -> Vec<u32> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let p = p as u64;
    let mut out = vec![0u64; a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        for (j, &y) in b.iter().enumerate() {
            out[i + j] = (out[i + j] + x as u64 * y as u64) % p;
        }
    }
    trim(out.into_iter().map(|c| c as u32).collect())
}

/// Remainder of `a` modulo the monic polynomial `m`.
fn poly_rem(a: &[u32], m: &[u32], p: u32) -> Vec<u32> {
    let mut r = trim(a.to_vec());
    let dm = m.len() - 1;
    while r.len() > dm {
        let lead = *r.last().unwrap();
        let shift = r.len() - 1 - dm;
        for (k, &c) in m.iter().enumerate() {
            let sub = (lead as u64 * c as u64 % p as u64) as u32;
            r[shift + k] = (r[shift + k] + p - sub) % p;
        }
        r = trim(r);
    }
    r
}

/// Exhaustive trial division by every monic polynomial of degree 1..=deg/2.
fn poly_is_irreducible(m: &[u32], p: u32) -> bool {
    let deg = m.len() - 1;
    if deg <= 1 {
        return deg == 1;
    }
    for k in 1..=deg / 2 {
        let count = (p as u64).pow(k as u32);
        for mut idx in 0..count {
            let mut f: Vec<u32> = (0..k)
                .map(|_| {
                    let d = (idx % p as u64) as u32;
                    idx /= p as u64;
                    d
                })
                .collect();
            f.push(1);
            if poly_rem(m, &f, p).is_empty() {
                return false;
            }
        }
    }
    true
}

pub(crate) fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

fn prime_factors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut d = 2;
    while d * d <= n {
        if n.is_multiple_of(d) {
            out.push(d);
            while n.is_multiple_of(d) {
                n /= d;
            }
        }
        d += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

/// Splits q = p^e for an odd prime p.
pub fn odd_prime_power(q: u64) -> Option<(u32, u32)> {
    if q < 3 || q.is_multiple_of(2) {
        return None;
    }
    let p = prime_factors(q);
    if p.len() != 1 || p[0] > u32::MAX as u64 {
        return None;
    }
    let (p, mut rest, mut e) = (p[0], q, 0u32);
    while rest > 1 {
        rest /= p;
        e += 1;
    }
    Some((p as u32, e))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn f9() -> FieldSpec {
        FieldSpec::new(3, 2, Some(&[1, 0, 1])).unwrap()
    }

    #[test]
    fn make_small_fields() {
        let f3 = FieldSpec::prime(3).unwrap();
        assert_eq!(f3.q(), 3);
        assert_eq!(f3.generator(), f3.from_int(2));

        let f9 = f9();
        assert_eq!(f9.q(), 9);
        assert_eq!(f9.coeffs(f9.generator()), vec![1, 1]);
        assert_eq!(f9.order(f9.element(&[0, 1]).unwrap()).unwrap(), 4);
    }

    #[test]
    fn rejects_bad_parameters() {
        assert_eq!(FieldSpec::prime(4).unwrap_err(), Error::NotOddPrime(4));
        assert_eq!(FieldSpec::prime(2).unwrap_err(), Error::NotOddPrime(2));
        assert_eq!(FieldSpec::new(3, 0, None).unwrap_err(), Error::InvalidDegree(0));
        // X^2 + 2 = (X+1)(X+2) over F_3
        assert!(matches!(
            FieldSpec::new(3, 2, Some(&[2, 0, 1])),
            Err(Error::ReducibleModulus(_))
        ));
        assert!(matches!(
            FieldSpec::new(3, 2, Some(&[1, 0, 2])),
            Err(Error::InvalidModulus(_))
        ));
        assert_eq!(FieldSpec::with_order(4).unwrap_err(), Error::NotOddPrimePower(4));
        assert_eq!(FieldSpec::with_order(15).unwrap_err(), Error::NotOddPrimePower(15));
    }

    #[test]
    fn default_modulus_follows_enumeration_order() {
        assert_eq!(FieldSpec::with_order(9).unwrap().modulus(), &[1, 0, 1]);
        // X^2 + 1 splits mod 5 since -1 = 2^2
        assert_eq!(FieldSpec::with_order(25).unwrap().modulus(), &[2, 0, 1]);
        assert_eq!(FieldSpec::with_order(27).unwrap().modulus(), &[1, 2, 0, 1]);
    }

    #[test]
    fn arithmetic_examples() {
        let f5 = FieldSpec::prime(5).unwrap();
        let (two, three) = (f5.from_int(2), f5.from_int(3));
        assert_eq!(f5.mul(two, three), FieldElement::ONE);
        assert_eq!(f5.pow(two, 3), three);
        assert_eq!(f5.apply(ArithOp::Pow(3), &[two]).unwrap(), three);

        let f9 = f9();
        let a = f9.element(&[1, 1]).unwrap();
        assert_eq!(f9.coeffs(f9.mul(a, a)), vec![0, 2]);
        assert_eq!(f9.inv(FieldElement::ZERO).unwrap_err(), Error::ZeroInverse);
    }

    #[test]
    fn squares_and_logs() {
        let f5 = FieldSpec::prime(5).unwrap();
        assert!(f5.is_square(f5.from_int(4)));
        assert!(!f5.is_square(f5.from_int(2)));
        assert!(f5.is_square(FieldElement::ONE));
        assert!(f5.is_square(FieldElement::ZERO));
        assert_eq!(f5.dlog(f5.from_int(3)).unwrap(), 3);
        assert_eq!(f5.dlog(FieldElement::ONE).unwrap(), 0);
        assert_eq!(f5.dlog(f5.from_int(4)).unwrap(), 2);
        assert_eq!(f5.dlog(FieldElement::ZERO).unwrap_err(), Error::ZeroLog);
    }

    #[test]
    fn enumeration_order() {
        let f3 = FieldSpec::prime(3).unwrap();
        let all: Vec<u32> = f3.enumerate().map(|a| a.index()).collect();
        assert_eq!(all, vec![0, 1, 2]);

        let f9 = f9();
        let coeffs: Vec<Vec<u32>> = f9.enumerate().map(|a| f9.coeffs(a)).collect();
        let expected: Vec<Vec<u32>> = vec![
            vec![0, 0],
            vec![1, 0],
            vec![2, 0],
            vec![0, 1],
            vec![1, 1],
            vec![2, 1],
            vec![0, 2],
            vec![1, 2],
            vec![2, 2],
        ];
        assert_eq!(coeffs, expected);
        assert_eq!(FieldSpec::with_order(25).unwrap().enumerate().count(), 25);
    }

    #[test]
    fn prime_power_split() {
        assert_eq!(odd_prime_power(9), Some((3, 2)));
        assert_eq!(odd_prime_power(13), Some((13, 1)));
        assert_eq!(odd_prime_power(1), None);
        assert_eq!(odd_prime_power(45), None);
    }
}
