//! Unit groups `(Z/nZ)^×`, subfields of cyclotomic fields named by
//! `(conductor, subgroup)` pairs, and the Galois elements acting on them.
//!
//! A subfield `F` of `Q_n` is the fixed field of a subgroup `H` of
//! `Gal(Q_n/Q) ≅ (Z/nZ)^×`. The same field has many such descriptions (one
//! for every multiple of its conductor), so [`FieldKey`] always stores the
//! one with minimal modulus. For modulus 1 the unit group is `{0}`.

use std::collections::{BTreeSet, HashSet};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::ArithError;

pub fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a
}

pub fn lcm(a: u64, b: u64) -> u64 {
    if a == 0 || b == 0 {
        return 0;
    }
    a / gcd(a, b) * b
}

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

/// Prime factorization as `(prime, exponent)` pairs in increasing prime order.
pub fn factorize(mut n: u64) -> Vec<(u64, u32)> {
    let mut out = Vec::new();
    let mut p = 2;
    while p * p <= n {
        if n % p == 0 {
            let mut a = 0;
            while n % p == 0 {
                n /= p;
                a += 1;
            }
            out.push((p, a));
        }
        p += 1;
    }
    if n > 1 {
        out.push((n, 1));
    }
    out
}

pub fn euler_phi(n: u64) -> u64 {
    factorize(n).into_iter().fold(n, |acc, (p, _)| acc / p * (p - 1))
}

pub fn divisors(n: u64) -> Vec<u64> {
    let mut small = Vec::new();
    let mut large = Vec::new();
    let mut d = 1;
    while d * d <= n {
        if n % d == 0 {
            small.push(d);
            if d != n / d {
                large.push(n / d);
            }
        }
        d += 1;
    }
    small.extend(large.into_iter().rev());
    small
}

pub fn mod_pow(mut base: u64, mut exp: u64, m: u64) -> u64 {
    if m == 1 {
        return 0;
    }
    let mut acc = 1u64;
    base %= m;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = ((acc as u128 * base as u128) % m as u128) as u64;
        }
        base = ((base as u128 * base as u128) % m as u128) as u64;
        exp >>= 1;
    }
    acc
}

/// Residue of `r` modulo `n`, accepting negative input.
pub fn normalize_residue(r: i64, n: u32) -> u32 {
    r.rem_euclid(n as i64) as u32
}

/// Sorted residues coprime to `n`; `{0}` for `n = 1`.
pub fn units(n: u32) -> Vec<u32> {
    if n == 1 {
        return vec![0];
    }
    (1..n).filter(|&r| gcd(r as u64, n as u64) == 1).collect()
}

/// Multiplicative order of the unit `r` modulo `n`.
pub fn unit_order(r: u32, n: u32) -> u64 {
    if n == 1 {
        return 1;
    }
    let mut x = r as u64 % n as u64;
    let mut k = 1;
    while x != 1 {
        x = x * r as u64 % n as u64;
        k += 1;
    }
    k
}

/// The unit group `(Z/nZ)^×` as an explicit residue list.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct UnitGroup {
    modulus: u32,
    elements: Vec<u32>,
}

impl UnitGroup {
    pub fn new(modulus: u32) -> Result<Self, ArithError> {
        if modulus == 0 {
            return Err(ArithError::ZeroModulus);
        }
        Ok(UnitGroup {
            modulus,
            elements: units(modulus),
        })
    }

    pub fn modulus(&self) -> u32 {
        self.modulus
    }

    pub fn elements(&self) -> &[u32] {
        &self.elements
    }

    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn identity(&self) -> u32 {
        1 % self.modulus
    }

    pub fn contains(&self, r: u32) -> bool {
        self.elements.binary_search(&(r % self.modulus)).is_ok()
    }

    pub fn mul(&self, a: u32, b: u32) -> u32 {
        ((a as u64 * b as u64) % self.modulus as u64) as u32
    }

    /// True iff `set` is a subgroup of this unit group.
    pub fn is_subgroup(&self, set: &[u32]) -> bool {
        let members: HashSet<u32> = set.iter().map(|&r| r % self.modulus).collect();
        if members.is_empty() || !members.contains(&self.identity()) {
            return false;
        }
        if !members.iter().all(|&r| self.contains(r)) {
            return false;
        }
        // A finite nonempty subset closed under multiplication is a subgroup.
        members
            .iter()
            .all(|&a| members.iter().all(|&b| members.contains(&self.mul(a, b))))
    }

    /// The subgroup generated by `gens`, sorted.
    pub fn generated(&self, gens: &[u32]) -> Vec<u32> {
        let mut members: BTreeSet<u32> = BTreeSet::new();
        members.insert(self.identity());
        let mut frontier = vec![self.identity()];
        while let Some(x) = frontier.pop() {
            for &g in gens {
                let y = self.mul(x, g);
                if members.insert(y) {
                    frontier.push(y);
                }
            }
        }
        members.into_iter().collect()
    }

    /// Image of the reduction map `(Z/nZ)^× → (Z/dZ)^×` applied to `set`.
    pub fn reduce(set: &[u32], d: u32) -> Vec<u32> {
        let image: BTreeSet<u32> = set.iter().map(|&r| r % d).collect();
        image.into_iter().collect()
    }

    /// Kernel of reduction modulo the divisor `d`.
    pub fn reduction_kernel(&self, d: u32) -> Vec<u32> {
        let one = 1 % d;
        self.elements.iter().copied().filter(|&u| u % d == one).collect()
    }

    /// Preimage of `set ⊆ (Z/dZ)^×` under reduction, for `d | modulus`.
    pub fn preimage(&self, set: &[u32], d: u32) -> Vec<u32> {
        self.elements
            .iter()
            .copied()
            .filter(|&u| set.contains(&(u % d)))
            .collect()
    }

    /// Every subgroup, as sorted residue lists. Subgroups are found by
    /// closing the set of cyclic subgroups under joins.
    pub fn subgroups(&self) -> Vec<Vec<u32>> {
        let n = self.modulus;
        let mut seen_generator = vec![false; n as usize];
        // (generators, members)
        let mut all: Vec<(Vec<u32>, Vec<u32>)> = Vec::new();
        let mut found: BTreeSet<Vec<u32>> = BTreeSet::new();
        for &g in &self.elements {
            if seen_generator[g as usize] {
                continue;
            }
            let cyclic = self.generated(&[g]);
            let ord = cyclic.len() as u64;
            // mark every generator of <g> so it is not expanded again
            let mut x = 1 % n;
            for k in 1..=ord {
                x = self.mul(x, g);
                if gcd(k, ord) == 1 {
                    seen_generator[x as usize] = true;
                }
            }
            if found.insert(cyclic.clone()) {
                all.push((vec![g], cyclic));
            }
        }
        let mut frontier: Vec<usize> = (0..all.len()).collect();
        while !frontier.is_empty() {
            let mut next = Vec::new();
            for &a in &frontier {
                for b in 0..all.len() {
                    let (ga, ha) = &all[a];
                    let (gb, hb) = &all[b];
                    if is_sorted_subset(ha, hb) || is_sorted_subset(hb, ha) {
                        continue;
                    }
                    let gens: Vec<u32> = ga.iter().chain(gb.iter()).copied().collect();
                    let joined = self.generated(&gens);
                    if found.insert(joined.clone()) {
                        next.push((gens, joined));
                    }
                }
            }
            let start = all.len();
            all.extend(next);
            frontier = (start..all.len()).collect();
        }
        found.into_iter().collect()
    }
}

fn is_sorted_subset(small: &[u32], big: &[u32]) -> bool {
    small.len() <= big.len() && small.iter().all(|x| big.binary_search(x).is_ok())
}

/// Canonical name of a subfield of a cyclotomic field: the fixed field of
/// `subgroup ≤ (Z/cZ)^×` inside `Q_c`, where `c` is the conductor.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct FieldKey {
    conductor: u32,
    subgroup: Vec<u32>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum FieldSignature {
    Rational,
    Real,
    Imaginary,
}

impl FieldKey {
    pub fn rational() -> Self {
        FieldKey {
            conductor: 1,
            subgroup: vec![0],
        }
    }

    /// The full cyclotomic field `Q_n`.
    pub fn cyclotomic(n: u32) -> Result<Self, ArithError> {
        Self::canonicalize(n, &[1 % n.max(1)])
    }

    /// Minimal-conductor description of the fixed field of `h` acting on `Q_n`.
    pub fn canonicalize(n: u32, h: &[u32]) -> Result<Self, ArithError> {
        let units = UnitGroup::new(n)?;
        if !units.is_subgroup(h) {
            return Err(ArithError::NotASubgroup { modulus: n });
        }
        let h: BTreeSet<u32> = h.iter().map(|&r| r % n).collect();
        let h: Vec<u32> = h.into_iter().collect();
        for d in divisors(n as u64) {
            let d = d as u32;
            let kernel = units.reduction_kernel(d);
            if kernel.iter().all(|k| h.binary_search(k).is_ok()) {
                return Ok(FieldKey {
                    conductor: d,
                    subgroup: UnitGroup::reduce(&h, d),
                });
            }
        }
        unreachable!("the reduction kernel modulo n itself is trivial")
    }

    pub fn conductor(&self) -> u32 {
        self.conductor
    }

    pub fn subgroup(&self) -> &[u32] {
        &self.subgroup
    }

    pub fn degree(&self) -> u64 {
        euler_phi(self.conductor as u64) / self.subgroup.len() as u64
    }

    pub fn is_rational(&self) -> bool {
        self.conductor == 1
    }

    /// True iff `self ⊆ other`.
    pub fn is_subfield_of(&self, other: &FieldKey) -> bool {
        field_contains(self, other)
    }

    /// `Gal(Q_n/F)` as a subgroup of `(Z/nZ)^×`, for a multiple `n` of the conductor.
    pub fn galois_subgroup_in(&self, n: u32) -> Option<Vec<u32>> {
        if n % self.conductor != 0 {
            return None;
        }
        let units = UnitGroup::new(n).ok()?;
        Some(units.preimage(&self.subgroup, self.conductor))
    }

    pub fn signature(&self) -> FieldSignature {
        if self.conductor == 1 {
            FieldSignature::Rational
        } else if self.subgroup.contains(&(self.conductor - 1)) {
            FieldSignature::Real
        } else {
            FieldSignature::Imaginary
        }
    }

    pub fn is_imaginary_quadratic(&self) -> bool {
        self.degree() == 2 && self.signature() == FieldSignature::Imaginary
    }
}

impl fmt::Display for FieldKey {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.conductor == 1 {
            return write!(f, "Q");
        }
        let residues: Vec<String> = self.subgroup.iter().map(u32::to_string).collect();
        write!(f, "F(c={}; H={{{}}})", self.conductor, residues.join(","))
    }
}

/// `F1 ⊆ F2` for canonical keys: the conductor of `F1` divides that of
/// `F2`, and `H2` reduces into `H1`.
pub fn field_contains(f1: &FieldKey, f2: &FieldKey) -> bool {
    if f2.conductor % f1.conductor != 0 {
        return false;
    }
    f2.subgroup
        .iter()
        .all(|&r| f1.subgroup.binary_search(&(r % f1.conductor)).is_ok())
}

/// Signature together with the imaginary-quadratic test.
pub fn field_signature(f: &FieldKey) -> (FieldSignature, bool) {
    (f.signature(), f.is_imaginary_quadratic())
}

/// An abelian group given by the orders of its cyclic factors; the empty
/// list is the trivial group.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GaloisStructure {
    pub cyclic_factors: Vec<u64>,
}

impl GaloisStructure {
    pub fn order(&self) -> u64 {
        self.cyclic_factors.iter().product()
    }

    pub fn is_cyclic(&self) -> bool {
        self.cyclic_factors.len() <= 1
    }
}

impl fmt::Display for GaloisStructure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.cyclic_factors.is_empty() {
            return write!(f, "1");
        }
        let parts: Vec<String> = self.cyclic_factors.iter().map(|m| format!("C{m}")).collect();
        write!(f, "{}", parts.join(" x "))
    }
}

/// Structure of `Gal(Q_{p^a}/Q)`.
pub fn galois_structure(p: u64, a: u32) -> Result<GaloisStructure, ArithError> {
    if !is_prime(p) {
        return Err(ArithError::NotPrime(p));
    }
    let cyclic_factors = match (p, a) {
        (_, 0) => vec![],
        (2, 1) => vec![],
        (2, 2) => vec![2],
        (2, a) => vec![1u64 << (a - 2), 2],
        (p, a) => vec![p.pow(a - 1) * (p - 1)],
    };
    Ok(GaloisStructure { cyclic_factors })
}

/// Number of fields `Q ⊆ F ⊆ Q_{p^a}` with `[F:Q] ≤ d`, i.e. subgroups of
/// `(Z/p^aZ)^×` of index at most `d`.
pub fn count_bounded_subfields(p: u64, a: u32, d: u64) -> Result<usize, ArithError> {
    if !is_prime(p) {
        return Err(ArithError::NotPrime(p));
    }
    let n = p.pow(a) as u32;
    let units = UnitGroup::new(n)?;
    let order = units.order() as u64;
    Ok(units
        .subgroups()
        .iter()
        .filter(|h| order / h.len() as u64 <= d)
        .count())
}

/// An element of `Gal(Q_n/Q)`, acting by `ε ↦ ε^r`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct GaloisElement {
    pub modulus: u32,
    pub residue: u32,
}

impl GaloisElement {
    pub fn new(modulus: u32, residue: i64) -> Result<Self, ArithError> {
        if modulus == 0 {
            return Err(ArithError::ZeroModulus);
        }
        let r = normalize_residue(residue, modulus);
        if gcd(r as u64, modulus as u64) != 1 {
            return Err(ArithError::NonCoprime { residue, modulus });
        }
        Ok(GaloisElement { modulus, residue: r })
    }

    /// Restriction to `Q_d` for a divisor `d` of the modulus.
    pub fn restrict(&self, d: u32) -> GaloisElement {
        GaloisElement {
            modulus: d,
            residue: self.residue % d,
        }
    }
}

/// Chinese remaindering of `(modulus, residue)` components into one Galois element.
pub fn crt_assemble(components: &[(u32, u32)]) -> Result<GaloisElement, ArithError> {
    let mut modulus: u64 = 1;
    let mut residue: u64 = 0;
    for &(m, r) in components {
        if m == 0 {
            return Err(ArithError::ZeroModulus);
        }
        if gcd(modulus, m as u64) != 1 {
            return Err(ArithError::NonCoprimeModuli(modulus as u32, m));
        }
        if gcd(r as u64 % m as u64, m as u64) != 1 {
            return Err(ArithError::NonCoprime {
                residue: r as i64,
                modulus: m,
            });
        }
        // find x ≡ residue (mod modulus), x ≡ r (mod m)
        let m64 = m as u64;
        let inv = mod_inverse(modulus % m64, m64).expect("coprime moduli");
        let diff = (r as u64 % m64 + m64 - residue % m64) % m64;
        let t = diff * inv % m64;
        residue += modulus * t;
        modulus *= m64;
        residue %= modulus;
    }
    GaloisElement::new(modulus as u32, residue as i64)
}

pub fn mod_inverse(a: u64, m: u64) -> Option<u64> {
    if m == 1 {
        return Some(0);
    }
    let (mut old_r, mut r) = (a as i128, m as i128);
    let (mut old_s, mut s) = (1i128, 0i128);
    while r != 0 {
        let q = old_r / r;
        (old_r, r) = (r, old_r - q * r);
        (old_s, s) = (s, old_s - q * s);
    }
    if old_r != 1 {
        return None;
    }
    Some(old_s.rem_euclid(m as i128) as u64)
}

/// Smallest residue generating the cyclic subgroup `set` of `(Z/nZ)^×`, if cyclic.
pub fn cyclic_generator(set: &[u32], n: u32) -> Option<u32> {
    let units = UnitGroup::new(n).ok()?;
    let mut sorted = set.to_vec();
    sorted.sort_unstable();
    sorted
        .iter()
        .copied()
        .find(|&g| units.generated(&[g]).len() == sorted.len())
}
