//! Exact arithmetic in cyclotomic fields `Q_n = Q(ε_n)`.
//!
//! Values are stored in the power basis `1, ε, …, ε^{φ(n)-1}` after
//! reduction modulo the `n`-th cyclotomic polynomial, so equal values have
//! identical representations. Coefficients are exact rationals.

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::{Arc, OnceLock, RwLock};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Serialize, Serializer};

use crate::error::ArithError;
use crate::zmod::{divisors, euler_phi, gcd, lcm, normalize_residue};

/// Integer coefficients of the `n`-th cyclotomic polynomial, lowest degree first.
pub fn cyclotomic_polynomial(n: u32) -> Vec<i64> {
    assert!(n > 0, "cyclotomic polynomial of order 0");
    // x^n - 1 divided by Φ_d for every proper divisor d
    let mut num = vec![0i64; n as usize + 1];
    num[0] = -1;
    num[n as usize] = 1;
    for d in divisors(n as u64) {
        if d == n as u64 {
            continue;
        }
        num = div_monic(&num, &cyclotomic_polynomial(d as u32));
    }
    num
}

fn div_monic(num: &[i64], den: &[i64]) -> Vec<i64> {
    let mut rem = num.to_vec();
    let dd = den.len() - 1;
    let qd = rem.len() - 1 - dd;
    let mut quot = vec![0i64; qd + 1];
    for i in (0..=qd).rev() {
        let c = rem[i + dd];
        quot[i] = c;
        if c != 0 {
            for (j, &dc) in den.iter().enumerate() {
                rem[i + j] -= c * dc;
            }
        }
    }
    debug_assert!(rem.iter().all(|&c| c == 0), "inexact cyclotomic division");
    quot
}

/// Reduction data for one modulus: `ε^k` in the power basis for `0 ≤ k < n`.
#[derive(Debug)]
pub(crate) struct Basis {
    phi: usize,
    powers: Vec<Vec<(u32, i64)>>,
}

impl Basis {
    fn build(n: u32) -> Basis {
        let phi = euler_phi(n as u64) as usize;
        let poly = cyclotomic_polynomial(n);
        let mut powers = Vec::with_capacity(n as usize);
        let mut current = vec![0i64; phi];
        current[0] = 1;
        for k in 0..n as usize {
            if k > 0 {
                // multiply by ε and substitute ε^φ = -(Φ - ε^φ)
                let top = current[phi - 1];
                for i in (1..phi).rev() {
                    current[i] = current[i - 1];
                }
                current[0] = 0;
                if top != 0 {
                    for i in 0..phi {
                        current[i] -= top * poly[i];
                    }
                }
            }
            powers.push(
                current
                    .iter()
                    .enumerate()
                    .filter(|(_, &c)| c != 0)
                    .map(|(i, &c)| (i as u32, c))
                    .collect(),
            );
        }
        Basis { phi, powers }
    }

    pub(crate) fn power(&self, k: usize) -> &[(u32, i64)] {
        &self.powers[k]
    }

    pub(crate) fn phi(&self) -> usize {
        self.phi
    }
}

pub(crate) fn basis(n: u32) -> Arc<Basis> {
    static CACHE: OnceLock<RwLock<HashMap<u32, Arc<Basis>>>> = OnceLock::new();
    let cache = CACHE.get_or_init(|| RwLock::new(HashMap::new()));
    if let Some(b) = cache.read().expect("basis cache poisoned").get(&n) {
        return Arc::clone(b);
    }
    let built = Arc::new(Basis::build(n));
    cache
        .write()
        .expect("basis cache poisoned")
        .entry(n)
        .or_insert(built)
        .clone()
}

/// Reduce an integer combination `Σ c_k ε^k` (exponents taken mod `n`) to the
/// power basis. Returns `None` on `i128` overflow.
pub(crate) fn reduce_integer(n: u32, terms: &[i128]) -> Option<Vec<i128>> {
    let b = basis(n);
    let mut out = vec![0i128; b.phi];
    for (k, &c) in terms.iter().enumerate() {
        if c == 0 {
            continue;
        }
        for &(i, m) in b.power(k % n as usize) {
            let add = c.checked_mul(m as i128)?;
            out[i as usize] = out[i as usize].checked_add(add)?;
        }
    }
    Some(out)
}

/// An element of `Q_n` in canonical power-basis form.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Cyclotomic {
    modulus: u32,
    /// nonzero coefficients, sorted by exponent, exponents `< φ(n)`
    terms: Vec<(u32, BigRational)>,
}

impl Cyclotomic {
    pub fn zero(n: u32) -> Self {
        assert!(n > 0, "cyclotomic modulus must be positive");
        Cyclotomic {
            modulus: n,
            terms: Vec::new(),
        }
    }

    pub fn one(n: u32) -> Self {
        Self::from_integer(n, 1)
    }

    pub fn from_integer(n: u32, c: i64) -> Self {
        Self::from_rational(n, BigRational::from_integer(BigInt::from(c)))
    }

    pub fn from_rational(n: u32, c: BigRational) -> Self {
        let mut x = Self::zero(n);
        if !c.is_zero() {
            x.terms.push((0, c));
        }
        x
    }

    /// `ε_n^k`; negative `k` allowed.
    pub fn root_of_unity(n: u32, k: i64) -> Self {
        let k = normalize_residue(k, n) as usize;
        let mut dense = vec![0i128; n as usize];
        dense[k] = 1;
        Self::from_dense_integer(n, &dense)
    }

    /// `Σ c·ε^k` over `(k, c)` pairs, exponents taken modulo `n`.
    pub fn from_exponent_terms<I>(n: u32, terms: I) -> Self
    where
        I: IntoIterator<Item = (u64, i64)>,
    {
        let mut dense = vec![0i128; n as usize];
        for (k, c) in terms {
            dense[(k % n as u64) as usize] += c as i128;
        }
        Self::from_dense_integer(n, &dense)
    }

    fn from_dense_integer(n: u32, dense: &[i128]) -> Self {
        match reduce_integer(n, dense) {
            Some(coeffs) => Cyclotomic {
                modulus: n,
                terms: coeffs
                    .into_iter()
                    .enumerate()
                    .filter(|(_, c)| *c != 0)
                    .map(|(i, c)| (i as u32, BigRational::from_integer(BigInt::from(c))))
                    .collect(),
            },
            None => {
                let mut acc = BTreeMap::new();
                for (k, &c) in dense.iter().enumerate() {
                    if c != 0 {
                        acc.insert(k as u32, BigRational::from_integer(BigInt::from(c)));
                    }
                }
                Self::reduce_rational(n, acc)
            }
        }
    }

    /// Reduce `Σ c_k ε^k` with `k < n` to canonical form.
    fn reduce_rational(n: u32, unreduced: BTreeMap<u32, BigRational>) -> Self {
        let b = basis(n);
        let mut acc: BTreeMap<u32, BigRational> = BTreeMap::new();
        for (k, c) in unreduced {
            if c.is_zero() {
                continue;
            }
            for &(i, m) in b.power(k as usize) {
                let entry = acc.entry(i).or_insert_with(BigRational::zero);
                *entry += &c * BigRational::from_integer(BigInt::from(m));
            }
        }
        Cyclotomic {
            modulus: n,
            terms: acc.into_iter().filter(|(_, c)| !c.is_zero()).collect(),
        }
    }

    pub fn modulus(&self) -> u32 {
        self.modulus
    }

    /// Nonzero `(exponent, coefficient)` pairs of the canonical form.
    pub fn terms(&self) -> &[(u32, BigRational)] {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_rational(&self) -> bool {
        self.terms.iter().all(|(k, _)| *k == 0)
    }

    pub fn as_rational(&self) -> Option<BigRational> {
        match self.terms.as_slice() {
            [] => Some(BigRational::zero()),
            [(0, c)] => Some(c.clone()),
            _ => None,
        }
    }

    pub fn as_integer(&self) -> Option<i64> {
        let r = self.as_rational()?;
        if r.is_integer() {
            r.to_integer().to_i64()
        } else {
            None
        }
    }

    /// Canonical coefficients as `(exponent, i64)` when all are integers.
    pub fn integer_terms(&self) -> Option<Vec<(u32, i64)>> {
        self.terms
            .iter()
            .map(|(k, c)| {
                if c.is_integer() {
                    c.to_integer().to_i64().map(|v| (*k, v))
                } else {
                    None
                }
            })
            .collect()
    }

    fn check_modulus(&self, other: &Self) -> Result<(), ArithError> {
        if self.modulus != other.modulus {
            return Err(ArithError::ModulusMismatch(self.modulus, other.modulus));
        }
        Ok(())
    }

    pub fn try_add(&self, other: &Self) -> Result<Self, ArithError> {
        self.check_modulus(other)?;
        let mut acc: BTreeMap<u32, BigRational> = self.terms.iter().cloned().collect();
        for (k, c) in &other.terms {
            *acc.entry(*k).or_insert_with(BigRational::zero) += c;
        }
        Ok(Cyclotomic {
            modulus: self.modulus,
            terms: acc.into_iter().filter(|(_, c)| !c.is_zero()).collect(),
        })
    }

    pub fn try_sub(&self, other: &Self) -> Result<Self, ArithError> {
        self.try_add(&-other)
    }

    pub fn try_mul(&self, other: &Self) -> Result<Self, ArithError> {
        self.check_modulus(other)?;
        let n = self.modulus;
        if let (Some(a), Some(b)) = (self.integer_terms(), other.integer_terms()) {
            let mut dense = vec![0i128; n as usize];
            let mut overflow = false;
            for &(i, x) in &a {
                for &(j, y) in &b {
                    let k = ((i + j) % n) as usize;
                    match (x as i128)
                        .checked_mul(y as i128)
                        .and_then(|p| dense[k].checked_add(p))
                    {
                        Some(v) => dense[k] = v,
                        None => overflow = true,
                    }
                }
            }
            if !overflow {
                return Ok(Self::from_dense_integer(n, &dense));
            }
        }
        let mut acc: BTreeMap<u32, BigRational> = BTreeMap::new();
        for (i, x) in &self.terms {
            for (j, y) in &other.terms {
                *acc.entry((i + j) % n).or_insert_with(BigRational::zero) += x * y;
            }
        }
        Ok(Self::reduce_rational(n, acc))
    }

    pub fn scale(&self, c: &BigRational) -> Self {
        if c.is_zero() {
            return Self::zero(self.modulus);
        }
        Cyclotomic {
            modulus: self.modulus,
            terms: self.terms.iter().map(|(k, x)| (*k, x * c)).collect(),
        }
    }

    /// Image under the Galois automorphism `ε ↦ ε^r`.
    pub fn galois_apply(&self, r: i64) -> Result<Self, ArithError> {
        let n = self.modulus;
        let r = normalize_residue(r, n);
        if gcd(r as u64, n as u64) != 1 {
            return Err(ArithError::NonCoprime {
                residue: r as i64,
                modulus: n,
            });
        }
        if let Some(terms) = self.integer_terms() {
            let mut dense = vec![0i128; n as usize];
            for (k, c) in terms {
                dense[((k as u64 * r as u64) % n as u64) as usize] += c as i128;
            }
            return Ok(Self::from_dense_integer(n, &dense));
        }
        let mut acc = BTreeMap::new();
        for (k, c) in &self.terms {
            acc.insert(((*k as u64 * r as u64) % n as u64) as u32, c.clone());
        }
        Ok(Self::reduce_rational(n, acc))
    }

    pub fn complex_conjugate(&self) -> Self {
        self.galois_apply(-1).expect("-1 is a unit")
    }

    /// The same value viewed in `Q_m`, for a multiple `m` of the modulus.
    pub fn embed(&self, m: u32) -> Result<Self, ArithError> {
        if m == 0 || m % self.modulus != 0 {
            return Err(ArithError::ModulusMismatch(self.modulus, m));
        }
        let step = m / self.modulus;
        let mut acc = BTreeMap::new();
        for (k, c) in &self.terms {
            acc.insert(k * step, c.clone());
        }
        Ok(Self::reduce_rational(m, acc))
    }

    /// Equality as complex numbers, across moduli.
    pub fn equals(&self, other: &Self) -> bool {
        if self.modulus == other.modulus {
            return self == other;
        }
        let m = lcm(self.modulus as u64, other.modulus as u64) as u32;
        match (self.embed(m), other.embed(m)) {
            (Ok(a), Ok(b)) => a == b,
            _ => false,
        }
    }
}

impl Neg for &Cyclotomic {
    type Output = Cyclotomic;
    fn neg(self) -> Cyclotomic {
        Cyclotomic {
            modulus: self.modulus,
            terms: self.terms.iter().map(|(k, c)| (*k, -c)).collect(),
        }
    }
}

impl Neg for Cyclotomic {
    type Output = Cyclotomic;
    fn neg(self) -> Cyclotomic {
        -&self
    }
}

// Operator forms panic on modulus mismatch; use the `try_` methods to
// handle it.
impl Add for &Cyclotomic {
    type Output = Cyclotomic;
    fn add(self, rhs: &Cyclotomic) -> Cyclotomic {
        self.try_add(rhs).expect("cyclotomic modulus mismatch")
    }
}

impl Sub for &Cyclotomic {
    type Output = Cyclotomic;
    fn sub(self, rhs: &Cyclotomic) -> Cyclotomic {
        self.try_sub(rhs).expect("cyclotomic modulus mismatch")
    }
}

impl Mul for &Cyclotomic {
    type Output = Cyclotomic;
    fn mul(self, rhs: &Cyclotomic) -> Cyclotomic {
        self.try_mul(rhs).expect("cyclotomic modulus mismatch")
    }
}

impl fmt::Display for Cyclotomic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (idx, (k, c)) in self.terms.iter().enumerate() {
            let magnitude = c.abs();
            let body = if *k == 0 {
                magnitude.to_string()
            } else if magnitude.is_one() {
                format!("E({})^{}", self.modulus, k)
            } else {
                format!("{}*E({})^{}", magnitude, self.modulus, k)
            };
            match (idx, c.is_negative()) {
                (0, false) => write!(f, "{body}")?,
                (0, true) => write!(f, "-{body}")?,
                (_, false) => write!(f, " + {body}")?,
                (_, true) => write!(f, " - {body}")?,
            }
        }
        Ok(())
    }
}

impl Serialize for Cyclotomic {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.serialize_str(&self.to_string())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn e(n: u32, k: i64) -> Cyclotomic {
        Cyclotomic::root_of_unity(n, k)
    }

    #[test]
    fn cyclotomic_polynomials() {
        assert_eq!(cyclotomic_polynomial(1), vec![-1, 1]);
        assert_eq!(cyclotomic_polynomial(3), vec![1, 1, 1]);
        assert_eq!(cyclotomic_polynomial(4), vec![1, 0, 1]);
        assert_eq!(cyclotomic_polynomial(12), vec![1, 0, -1, 0, 1]);
        // Φ_105 is the first with a coefficient of absolute value 2
        assert!(cyclotomic_polynomial(105).iter().any(|&c| c == -2));
    }

    #[test]
    fn root_of_unity_examples() {
        assert_eq!(e(4, 2), Cyclotomic::from_integer(4, -1));
        assert_eq!(&e(3, 1) + &e(3, 2), Cyclotomic::from_integer(3, -1));
        // 2cos(2π/5) is a root of x² + x − 1
        let x = &e(5, 1) + &e(5, 4);
        let lhs = &(&(&x * &x) + &x) - &Cyclotomic::one(5);
        assert!(lhs.is_zero());
    }

    #[test]
    fn galois_apply_examples() {
        let half = BigRational::new(BigInt::from(1), BigInt::from(2));
        let q = Cyclotomic::from_rational(7, half);
        assert_eq!(q.galois_apply(3).unwrap(), q);
        assert_eq!(e(3, 1).galois_apply(2).unwrap(), e(3, 2));
        let x = &e(5, 1) + &e(5, 4);
        assert_eq!(x.galois_apply(2).unwrap(), &e(5, 2) + &e(5, 3));
        assert_eq!(
            e(6, 1).galois_apply(2),
            Err(ArithError::NonCoprime {
                residue: 2,
                modulus: 6
            })
        );
    }

    #[test]
    fn conjugate_of_i() {
        assert_eq!(e(4, 1).complex_conjugate(), -e(4, 1));
        assert_eq!(e(4, 1).galois_apply(1).unwrap(), e(4, 1));
    }

    #[test]
    fn modulus_mismatch() {
        assert_eq!(e(3, 1).try_add(&e(4, 1)), Err(ArithError::ModulusMismatch(3, 4)));
        assert!(e(3, 1).equals(&e(6, 2)));
        assert!(e(4, 1).embed(12).unwrap() == e(12, 3));
    }

    #[test]
    fn rendering() {
        assert_eq!(Cyclotomic::zero(5).to_string(), "0");
        assert_eq!(Cyclotomic::from_integer(5, -3).to_string(), "-3");
        assert_eq!(e(3, 2).to_string(), "-1 - E(3)^1");
        let x = &(&Cyclotomic::from_integer(8, 2) - &e(8, 1)).scale(&BigRational::new(3.into(), 2.into()));
        assert_eq!(x.to_string(), "3 - 3/2*E(8)^1");
    }

    #[test]
    fn rational_multiplication_falls_back_to_bigints() {
        let big = BigRational::from_integer(BigInt::from(i64::MAX));
        let x = Cyclotomic::from_rational(3, big.clone());
        let y = &x * &x;
        assert_eq!(y.as_rational().unwrap(), &big * &big);
    }
}
