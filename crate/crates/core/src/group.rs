//! Permutation groups small enough to enumerate: closure from generators,
//! conjugacy classes with power maps, centralizers and normalizers of
//! cyclic subgroups, class multiplication coefficients, solvability.

use std::collections::{HashMap, HashSet, VecDeque};
use std::fmt;

use crate::error::GroupError;
use crate::zmod::{lcm, units};

pub const DEFAULT_ORDER_CAP: usize = 20_000;

/// A bijection of `{0, …, degree-1}`. Products compose left to right:
/// `(a * b)(i) = b(a(i))`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct Permutation {
    images: Vec<u32>,
}

impl Permutation {
    pub fn new(images: Vec<u32>) -> Result<Self, GroupError> {
        let n = images.len();
        let mut seen = vec![false; n];
        for &i in &images {
            let i = i as usize;
            if i >= n {
                return Err(GroupError::InvalidPermutation(format!(
                    "image {i} out of range for degree {n}"
                )));
            }
            if seen[i] {
                return Err(GroupError::InvalidPermutation(format!("image {i} repeated")));
            }
            seen[i] = true;
        }
        Ok(Permutation { images })
    }

    pub fn identity(degree: usize) -> Self {
        Permutation {
            images: (0..degree as u32).collect(),
        }
    }

    /// Build from disjoint cycles on `degree` points.
    pub fn from_cycles(degree: usize, cycles: &[&[u32]]) -> Result<Self, GroupError> {
        let mut images: Vec<u32> = (0..degree as u32).collect();
        for cycle in cycles {
            for (i, &a) in cycle.iter().enumerate() {
                let b = cycle[(i + 1) % cycle.len()];
                if a as usize >= degree || b as usize >= degree {
                    return Err(GroupError::InvalidPermutation(format!(
                        "cycle point out of range for degree {degree}"
                    )));
                }
                images[a as usize] = b;
            }
        }
        Permutation::new(images)
    }

    pub fn degree(&self) -> usize {
        self.images.len()
    }

    pub fn images(&self) -> &[u32] {
        &self.images
    }

    pub fn apply(&self, point: u32) -> u32 {
        self.images[point as usize]
    }

    pub fn is_identity(&self) -> bool {
        self.images.iter().enumerate().all(|(i, &x)| i as u32 == x)
    }

    pub fn compose(&self, other: &Permutation) -> Permutation {
        debug_assert_eq!(self.degree(), other.degree());
        Permutation {
            images: self.images.iter().map(|&i| other.images[i as usize]).collect(),
        }
    }

    pub fn inverse(&self) -> Permutation {
        let mut images = vec![0u32; self.images.len()];
        for (i, &x) in self.images.iter().enumerate() {
            images[x as usize] = i as u32;
        }
        Permutation { images }
    }

    pub fn pow(&self, mut k: u64) -> Permutation {
        let mut base = self.clone();
        let mut acc = Permutation::identity(self.degree());
        while k > 0 {
            if k & 1 == 1 {
                acc = acc.compose(&base);
            }
            base = base.compose(&base);
            k >>= 1;
        }
        acc
    }

    /// `x^-1 * self * x`
    pub fn conjugate_by(&self, x: &Permutation) -> Permutation {
        x.inverse().compose(self).compose(x)
    }

    pub fn cycles(&self) -> Vec<Vec<u32>> {
        let mut seen = vec![false; self.images.len()];
        let mut out = Vec::new();
        for start in 0..self.images.len() {
            if seen[start] {
                continue;
            }
            let mut cycle = vec![start as u32];
            seen[start] = true;
            let mut x = self.images[start];
            while x as usize != start {
                seen[x as usize] = true;
                cycle.push(x);
                x = self.images[x as usize];
            }
            if cycle.len() > 1 {
                out.push(cycle);
            }
        }
        out
    }

    pub fn order(&self) -> u64 {
        self.cycles().iter().fold(1, |acc, c| lcm(acc, c.len() as u64))
    }
}

impl fmt::Display for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let cycles = self.cycles();
        if cycles.is_empty() {
            return write!(f, "()");
        }
        for c in cycles {
            let pts: Vec<String> = c.iter().map(u32::to_string).collect();
            write!(f, "({})", pts.join(","))?;
        }
        Ok(())
    }
}

/// A fully enumerated permutation group. Element 0 is the identity;
/// elements appear in breadth-first order over the generator list.
#[derive(Clone, Debug)]
pub struct PermGroup {
    degree: usize,
    generators: Vec<Permutation>,
    elements: Vec<Permutation>,
    index: HashMap<Permutation, usize>,
    orders: Vec<u64>,
    exponent: u64,
}

impl PermGroup {
    pub fn from_generators(
        degree: usize,
        generators: Vec<Permutation>,
        cap: usize,
    ) -> Result<Self, GroupError> {
        for (i, g) in generators.iter().enumerate() {
            if g.degree() != degree {
                return Err(GroupError::DegreeMismatch {
                    index: i,
                    found: g.degree(),
                    expected: degree,
                });
            }
        }
        let identity = Permutation::identity(degree);
        let mut elements = vec![identity.clone()];
        let mut index = HashMap::from([(identity, 0usize)]);
        let mut cursor = 0;
        while cursor < elements.len() {
            for g in &generators {
                let y = elements[cursor].compose(g);
                if !index.contains_key(&y) {
                    if elements.len() >= cap {
                        return Err(GroupError::OrderCapExceeded { cap });
                    }
                    index.insert(y.clone(), elements.len());
                    elements.push(y);
                }
            }
            cursor += 1;
        }
        let orders: Vec<u64> = elements.iter().map(Permutation::order).collect();
        let exponent = orders.iter().fold(1, |acc, &o| lcm(acc, o));
        Ok(PermGroup {
            degree,
            generators,
            elements,
            index,
            orders,
            exponent,
        })
    }

    pub fn trivial(degree: usize) -> Self {
        Self::from_generators(degree, Vec::new(), 1).expect("trivial group fits any cap")
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn generators(&self) -> &[Permutation] {
        &self.generators
    }

    pub fn elements(&self) -> &[Permutation] {
        &self.elements
    }

    pub fn element(&self, i: usize) -> &Permutation {
        &self.elements[i]
    }

    pub fn order(&self) -> u64 {
        self.elements.len() as u64
    }

    pub fn exponent(&self) -> u64 {
        self.exponent
    }

    pub fn index_of(&self, p: &Permutation) -> Option<usize> {
        self.index.get(p).copied()
    }

    pub fn contains(&self, p: &Permutation) -> bool {
        self.index.contains_key(p)
    }

    pub fn element_order(&self, i: usize) -> u64 {
        self.orders[i]
    }

    /// Index of `elements[a] * elements[b]`.
    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.index[&self.elements[a].compose(&self.elements[b])]
    }

    pub fn inverse_index(&self, a: usize) -> usize {
        self.index[&self.elements[a].inverse()]
    }

    pub fn is_abelian(&self) -> bool {
        self.generators
            .iter()
            .all(|a| self.generators.iter().all(|b| a.compose(b) == b.compose(a)))
    }

    pub fn prime_divisors(&self) -> Vec<u64> {
        crate::zmod::factorize(self.order())
            .into_iter()
            .map(|(p, _)| p)
            .collect()
    }

    /// Indices of the cyclic subgroup generated by `g`.
    pub fn cyclic_subgroup(&self, g: &Permutation) -> Result<Vec<usize>, GroupError> {
        let gi = self.index_of(g).ok_or(GroupError::NotAnElement)?;
        let mut out = vec![0usize];
        let mut x = gi;
        while x != 0 {
            out.push(x);
            x = self.mul(x, gi);
        }
        Ok(out)
    }

    pub fn centralizer_order(&self, g: &Permutation) -> Result<u64, GroupError> {
        if !self.contains(g) {
            return Err(GroupError::NotAnElement);
        }
        Ok(self
            .elements
            .iter()
            .filter(|x| x.compose(g) == g.compose(x))
            .count() as u64)
    }

    /// `|N_G(<g>)|`, by testing whether each element conjugates `g` into `<g>`.
    pub fn cyclic_normalizer_order(&self, g: &Permutation) -> Result<u64, GroupError> {
        let cyclic: HashSet<usize> = self.cyclic_subgroup(g)?.into_iter().collect();
        Ok(self
            .elements
            .iter()
            .filter(|x| {
                let c = g.conjugate_by(x);
                cyclic.contains(&self.index[&c])
            })
            .count() as u64)
    }

    /// `|B_G(g)| = |N_G(<g>)| / |C_G(g)|`.
    pub fn bg_order(&self, g: &Permutation) -> Result<u64, GroupError> {
        Ok(self.cyclic_normalizer_order(g)? / self.centralizer_order(g)?)
    }

    /// The derived subgroup: normal closure of the generator commutators.
    pub fn derived_subgroup(&self) -> PermGroup {
        let mut gens: Vec<Permutation> = Vec::new();
        for a in &self.generators {
            for b in &self.generators {
                let c = a.inverse().compose(&b.inverse()).compose(a).compose(b);
                if !c.is_identity() && !gens.contains(&c) {
                    gens.push(c);
                }
            }
        }
        let cap = self.elements.len();
        let mut sub = PermGroup::from_generators(self.degree, gens.clone(), cap)
            .expect("subgroup fits inside the parent");
        loop {
            let mut extra = None;
            'search: for c in &gens {
                for g in &self.generators {
                    let conj = c.conjugate_by(g);
                    if !sub.contains(&conj) {
                        extra = Some(conj);
                        break 'search;
                    }
                }
            }
            match extra {
                Some(c) => {
                    gens.push(c);
                    sub = PermGroup::from_generators(self.degree, gens.clone(), cap)
                        .expect("subgroup fits inside the parent");
                }
                None => return sub,
            }
        }
    }

    pub fn is_solvable(&self) -> bool {
        let mut current = self.clone();
        loop {
            if current.order() == 1 {
                return true;
            }
            let derived = current.derived_subgroup();
            if derived.order() == current.order() {
                return false;
            }
            current = derived;
        }
    }
}

/// One conjugacy class. Members are element indices in increasing order.
#[derive(Clone, Debug)]
pub struct ConjugacyClass {
    pub representative: usize,
    pub members: Vec<usize>,
    pub element_order: u64,
}

impl ConjugacyClass {
    pub fn size(&self) -> u64 {
        self.members.len() as u64
    }
}

/// Conjugacy classes sorted by `(element order, size, representative)`,
/// together with their power maps.
#[derive(Clone, Debug)]
pub struct ClassData {
    classes: Vec<ConjugacyClass>,
    class_of: Vec<usize>,
    /// `powers[k][j]` = class of `rep_k^j`, for `j < |rep_k|`
    powers: Vec<Vec<usize>>,
    group_order: u64,
    exponent: u64,
}

impl ClassData {
    pub fn compute(group: &PermGroup) -> Self {
        let n = group.elements.len();
        let mut assigned = vec![false; n];
        let mut orbits: Vec<Vec<usize>> = Vec::new();
        let gen_inverses: Vec<Permutation> = group.generators.iter().map(|g| g.inverse()).collect();
        for start in 0..n {
            if assigned[start] {
                continue;
            }
            assigned[start] = true;
            let mut orbit = vec![start];
            let mut queue = VecDeque::from([start]);
            while let Some(x) = queue.pop_front() {
                for (g, ginv) in group.generators.iter().zip(&gen_inverses) {
                    let y = ginv.compose(&group.elements[x]).compose(g);
                    let yi = group.index[&y];
                    if !assigned[yi] {
                        assigned[yi] = true;
                        orbit.push(yi);
                        queue.push_back(yi);
                    }
                }
            }
            orbit.sort_unstable();
            orbits.push(orbit);
        }
        let mut classes: Vec<ConjugacyClass> = orbits
            .into_iter()
            .map(|members| ConjugacyClass {
                representative: members[0],
                element_order: group.orders[members[0]],
                members,
            })
            .collect();
        classes.sort_by_key(|c| (c.element_order, c.members.len(), c.representative));

        let mut class_of = vec![0usize; n];
        for (k, c) in classes.iter().enumerate() {
            for &m in &c.members {
                class_of[m] = k;
            }
        }
        let powers = classes
            .iter()
            .map(|c| {
                let g = c.representative;
                let mut out = Vec::with_capacity(c.element_order as usize);
                let mut x = 0usize;
                for _ in 0..c.element_order {
                    out.push(class_of[x]);
                    x = group.mul(x, g);
                }
                out
            })
            .collect();
        ClassData {
            classes,
            class_of,
            powers,
            group_order: group.order(),
            exponent: group.exponent(),
        }
    }

    pub fn len(&self) -> usize {
        self.classes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.classes.is_empty()
    }

    pub fn classes(&self) -> &[ConjugacyClass] {
        &self.classes
    }

    pub fn class(&self, k: usize) -> &ConjugacyClass {
        &self.classes[k]
    }

    pub fn class_of(&self, element: usize) -> usize {
        self.class_of[element]
    }

    pub fn group_order(&self) -> u64 {
        self.group_order
    }

    pub fn exponent(&self) -> u64 {
        self.exponent
    }

    /// Class of `g^j` for `g` in class `k`; any integer `j`.
    pub fn power(&self, k: usize, j: i64) -> usize {
        let o = self.classes[k].element_order as i64;
        self.powers[k][j.rem_euclid(o) as usize]
    }

    /// The power map `π_j` on all classes.
    pub fn power_map(&self, j: i64) -> Vec<usize> {
        (0..self.classes.len()).map(|k| self.power(k, j)).collect()
    }

    pub fn inverse_class(&self, k: usize) -> usize {
        self.power(k, -1)
    }

    /// `R(g) = {r mod |g| : gcd(r,|g|) = 1, g^r ~ g}` for the representative `g` of class `k`.
    pub fn rationality_stabilizer(&self, k: usize) -> Vec<u32> {
        let o = self.classes[k].element_order as u32;
        units(o)
            .into_iter()
            .filter(|&r| self.power(k, r as i64) == k)
            .collect()
    }

    /// True iff every element of class `k` has prime-power order `p^a` (including 1).
    pub fn is_p_class(&self, k: usize, p: u64) -> bool {
        let mut o = self.classes[k].element_order;
        while o % p == 0 {
            o /= p;
        }
        o == 1
    }

    /// `a[i][j][k]` = number of pairs `(x, y) ∈ K_i × K_j` with `xy = z_k`.
    pub fn class_mult_coefficients(&self, group: &PermGroup) -> ClassMultTensor {
        let k = self.classes.len();
        let mut data = vec![0u32; k * k * k];
        let inverses: Vec<usize> = (0..group.elements.len())
            .map(|i| group.inverse_index(i))
            .collect();
        for (kk, class) in self.classes.iter().enumerate() {
            let z = class.representative;
            for x in 0..group.elements.len() {
                // y = x^-1 z
                let y = group.mul(inverses[x], z);
                let (i, j) = (self.class_of[x], self.class_of[y]);
                data[(i * k + j) * k + kk] += 1;
            }
        }
        ClassMultTensor { classes: k, data }
    }
}

/// Dense `k × k × k` structure constants of the class algebra.
#[derive(Clone, Debug)]
pub struct ClassMultTensor {
    classes: usize,
    data: Vec<u32>,
}

impl ClassMultTensor {
    pub fn get(&self, i: usize, j: usize, k: usize) -> u32 {
        self.data[(i * self.classes + j) * self.classes + k]
    }

    pub fn classes(&self) -> usize {
        self.classes
    }
}
