//! Fields of values of classes and characters, and the invariants built on them.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use serde::Serialize;

use crate::character_table::{CharacterTable, ValueIndex};
use crate::group::ClassData;
use crate::zmod::{euler_phi, factorize, units, FieldKey, FieldSignature};

/// `Q(K)` as the fixed field of `R(g)` on `Q_{|g|}`.
pub fn class_field(classes: &ClassData, k: usize) -> FieldKey {
    let o = classes.class(k).element_order as u32;
    FieldKey::canonicalize(o, &classes.rationality_stabilizer(k))
        .expect("rationality stabilizer is a subgroup")
}

/// `Q(K)` read off the table: the residues fixing every value in column `k`.
pub fn class_field_from_table(table: &CharacterTable, k: usize) -> FieldKey {
    let e = table.modulus();
    let stabilizer: Vec<u32> = units(e)
        .into_iter()
        .filter(|&r| {
            table.rows().iter().all(|row| {
                let x = &row[k];
                x.is_rational() || x.galois_apply(r as i64).is_ok_and(|y| &y == x)
            })
        })
        .collect();
    FieldKey::canonicalize(e, &stabilizer).expect("column stabilizer is a subgroup")
}

/// [`class_field_from_table`] for every column at once.
pub fn class_fields_from_table(table: &CharacterTable) -> Vec<FieldKey> {
    let e = table.modulus();
    let index = ValueIndex::new(table);
    let residues = units(e);
    // fixed[v][i]: residue i fixes value v
    let mut fixed = vec![vec![true; residues.len()]; index.values().len()];
    for (i, &r) in residues.iter().enumerate() {
        for (v, image) in index.galois_images(r as i64).into_iter().enumerate() {
            fixed[v][i] = image == Some(v as u32);
        }
    }
    (0..table.len())
        .map(|k| {
            let stabilizer: Vec<u32> = residues
                .iter()
                .enumerate()
                .filter(|&(i, _)| index.ids().iter().all(|row| fixed[row[k] as usize][i]))
                .map(|(_, &r)| r)
                .collect();
            FieldKey::canonicalize(e, &stabilizer).expect("column stabilizer is a subgroup")
        })
        .collect()
}

/// Residues `r` with `χ ∘ π_r = χ`.
pub fn character_stabilizer(table: &CharacterTable, classes: &ClassData, row: usize) -> Vec<u32> {
    let values = table.row(row);
    units(table.modulus())
        .into_iter()
        .filter(|&r| (0..classes.len()).all(|k| values[classes.power(k, r as i64)] == values[k]))
        .collect()
}

/// `Q(χ)`, using `χ^σ_r(g) = χ(g^r)`.
pub fn character_field(table: &CharacterTable, classes: &ClassData, row: usize) -> FieldKey {
    FieldKey::canonicalize(table.modulus(), &character_stabilizer(table, classes, row))
        .expect("row stabilizer is a subgroup")
}

/// Rationality flags of a group.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RationalityFlags {
    pub rational: bool,
    pub semi_rational: bool,
    pub inverse_semi_rational: bool,
    pub quadratic_rational: bool,
    /// Largest `[Q(g):Q]`; the group is `1/k`-rational for every `k` at least this.
    pub k_rational_degree_max: u64,
}

impl fmt::Display for RationalityFlags {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.rational {
            return write!(f, "rational");
        }
        let mut parts = Vec::new();
        if self.inverse_semi_rational {
            parts.push("inverse-semi-rational".to_string());
        }
        if self.semi_rational {
            parts.push("semi-rational".to_string());
        }
        if self.quadratic_rational {
            parts.push("quadratic-rational".to_string());
        }
        parts.push(format!("1/{}-rational", self.k_rational_degree_max));
        write!(f, "{}", parts.join(","))
    }
}

/// Every generator of `⟨g⟩` is conjugate to `g` or `g^{-1}`.
pub fn is_inverse_semi_rational_class(classes: &ClassData, k: usize) -> bool {
    let inv = classes.inverse_class(k);
    let o = classes.class(k).element_order as u32;
    units(o).into_iter().all(|r| {
        let c = classes.power(k, r as i64);
        c == k || c == inv
    })
}

pub fn classify_rationality(
    classes: &ClassData,
    class_fields: &[FieldKey],
    character_fields: &[FieldKey],
) -> RationalityFlags {
    let degree_max = class_fields.iter().map(FieldKey::degree).max().unwrap_or(1);
    RationalityFlags {
        rational: degree_max == 1,
        semi_rational: degree_max <= 2,
        inverse_semi_rational: (0..classes.len()).all(|k| is_inverse_semi_rational_class(classes, k)),
        quadratic_rational: character_fields.iter().all(|f| f.degree() <= 2),
        k_rational_degree_max: degree_max,
    }
}

/// `{|g| : Q(g) = Q}`.
pub fn rational_element_orders(classes: &ClassData, class_fields: &[FieldKey]) -> BTreeSet<u64> {
    class_fields
        .iter()
        .enumerate()
        .filter(|(_, f)| f.is_rational())
        .map(|(k, _)| classes.class(k).element_order)
        .collect()
}

/// Smallest prime `p` with `F ⊆ Q_{p^3}`, if any.
pub fn witness_prime(field: &FieldKey) -> Option<u64> {
    let c = field.conductor() as u64;
    if c == 1 {
        return Some(2);
    }
    match factorize(c).as_slice() {
        [(p, a)] if *a <= 3 => Some(*p),
        _ => None,
    }
}

/// For each class, the smallest prime `p` with `Q(K) ⊆ Q_{p^3}`.
pub fn class_field_prime_bound(class_fields: &[FieldKey]) -> Vec<Option<u64>> {
    class_fields.iter().map(witness_prime).collect()
}

/// Number of classes whose elements are `p`-elements, identity included.
pub fn k_p(classes: &ClassData, p: u64) -> usize {
    (0..classes.len()).filter(|&k| classes.is_p_class(k, p)).count()
}

fn multiplicities(fields: &[FieldKey]) -> BTreeMap<String, usize> {
    let mut out = BTreeMap::new();
    for f in fields {
        *out.entry(f.to_string()).or_insert(0) += 1;
    }
    out
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct InvariantProfile {
    pub order: u64,
    pub class_count: usize,
    pub h: usize,
    pub f: usize,
    pub cl_q: usize,
    pub irr_q: usize,
    pub cl_r: usize,
    pub irr_r: usize,
    pub k_p: BTreeMap<u64, usize>,
    pub n_inv: usize,
    pub q_of_g: FieldKey,
    pub per_field_class_multiplicity: BTreeMap<String, usize>,
    pub per_field_char_multiplicity: BTreeMap<String, usize>,
    pub flags: RationalityFlags,
}

impl InvariantProfile {
    /// `<name> <order> h=<h> f=<f> clQ=<n> irrQ=<n> <flags>`
    pub fn summary_line(&self, name: &str) -> String {
        format!(
            "{} {} h={} f={} clQ={} irrQ={} {}",
            name, self.order, self.h, self.f, self.cl_q, self.irr_q, self.flags
        )
    }
}

pub fn invariant_profile(
    classes: &ClassData,
    table: &CharacterTable,
    class_fields: &[FieldKey],
    character_fields: &[FieldKey],
) -> InvariantProfile {
    let per_class = multiplicities(class_fields);
    let per_char = multiplicities(character_fields);
    let order = classes.group_order();
    let k_p: BTreeMap<u64, usize> = factorize(order)
        .into_iter()
        .map(|(p, _)| (p, k_p(classes, p)))
        .collect();
    let real = |f: &&FieldKey| f.signature() != FieldSignature::Imaginary;

    // Q(G) is the fixed field of the intersection of all row stabilizers.
    let mut common: BTreeSet<u32> = units(table.modulus()).into_iter().collect();
    for row in 0..table.len() {
        let stab: BTreeSet<u32> = character_stabilizer(table, classes, row).into_iter().collect();
        common = common.intersection(&stab).copied().collect();
    }
    let common: Vec<u32> = common.into_iter().collect();
    let q_of_g = FieldKey::canonicalize(table.modulus(), &common).expect("intersection of subgroups");

    InvariantProfile {
        order,
        class_count: classes.len(),
        h: per_class.values().copied().max().unwrap_or(0),
        f: per_char.values().copied().max().unwrap_or(0),
        cl_q: class_fields.iter().filter(|f| f.is_rational()).count(),
        irr_q: character_fields.iter().filter(|f| f.is_rational()).count(),
        cl_r: class_fields.iter().filter(real).count(),
        irr_r: character_fields.iter().filter(real).count(),
        n_inv: k_p.values().copied().max().unwrap_or(0),
        k_p,
        q_of_g,
        per_field_class_multiplicity: per_class,
        per_field_char_multiplicity: per_char,
        flags: classify_rationality(classes, class_fields, character_fields),
    }
}

/// `φ(|g|) / |R(g)|`, the degree predicted by the normalizer-centralizer quotient.
pub fn bg_degree(classes: &ClassData, k: usize) -> u64 {
    euler_phi(classes.class(k).element_order) / classes.rationality_stabilizer(k).len() as u64
}
