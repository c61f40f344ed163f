//! The actions of `Gal(Q_e/Q) ≅ (Z/eZ)^×` on classes and on characters.

use std::collections::{BTreeMap, HashMap};

use serde::Serialize;

use crate::analysis::GroupAnalysis;
use crate::character_table::{CharacterTable, ValueIndex};
use crate::error::ActionError;
use crate::fields::witness_prime;
use crate::group::ClassData;
use crate::zmod::{
    crt_assemble, cyclic_generator, factorize, mod_inverse, units, FieldKey, GaloisElement, UnitGroup,
};

/// For each residue `r`, the class permutation `π_r` and the character
/// permutation `χ ↦ χ ∘ π_r`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ActionTable {
    modulus: u32,
    residues: Vec<u32>,
    class_perms: Vec<Vec<usize>>,
    char_perms: Vec<Vec<usize>>,
}

impl ActionTable {
    pub fn modulus(&self) -> u32 {
        self.modulus
    }

    pub fn residues(&self) -> &[u32] {
        &self.residues
    }

    fn position(&self, r: u32) -> Option<usize> {
        self.residues.binary_search(&(r % self.modulus.max(1))).ok()
    }

    pub fn class_perm(&self, r: u32) -> Option<&[usize]> {
        self.position(r).map(|i| self.class_perms[i].as_slice())
    }

    pub fn char_perm(&self, r: u32) -> Option<&[usize]> {
        self.position(r).map(|i| self.char_perms[i].as_slice())
    }

    pub fn class_count(&self) -> usize {
        self.class_perms.first().map_or(0, Vec::len)
    }

    /// Orbits on classes (`characters = false`) or on characters.
    pub fn orbits(&self, characters: bool) -> Vec<Vec<usize>> {
        let perms = if characters {
            &self.char_perms
        } else {
            &self.class_perms
        };
        let n = self.class_count();
        let mut seen = vec![false; n];
        let mut out = Vec::new();
        for start in 0..n {
            if seen[start] {
                continue;
            }
            let mut orbit: Vec<usize> = perms.iter().map(|p| p[start]).collect();
            orbit.push(start);
            orbit.sort_unstable();
            orbit.dedup();
            for &x in &orbit {
                seen[x] = true;
            }
            out.push(orbit);
        }
        out
    }

    /// Residues fixing point `x`.
    pub fn stabilizer(&self, x: usize, characters: bool) -> Vec<u32> {
        let perms = if characters {
            &self.char_perms
        } else {
            &self.class_perms
        };
        self.residues
            .iter()
            .zip(perms)
            .filter(|(_, p)| p[x] == x)
            .map(|(&r, _)| r)
            .collect()
    }
}

/// Build both actions. The character permutation is found by locating the
/// row `χ ∘ π_r` among the rows of the table.
pub fn build_actions(table: &CharacterTable, classes: &ClassData) -> Result<ActionTable, ActionError> {
    let e = table.modulus();
    let residues = units(e);
    let index = ValueIndex::new(table);
    let lookup: HashMap<&[u32], usize> = index
        .ids()
        .iter()
        .enumerate()
        .map(|(i, r)| (r.as_slice(), i))
        .collect();
    let mut class_perms = Vec::with_capacity(residues.len());
    let mut char_perms = Vec::with_capacity(residues.len());
    let mut image = Vec::with_capacity(classes.len());
    for &r in &residues {
        let pi = classes.power_map(r as i64);
        let mut perm = Vec::with_capacity(table.len());
        for (i, row) in index.ids().iter().enumerate() {
            image.clear();
            image.extend(pi.iter().map(|&k| row[k]));
            let j = lookup
                .get(image.as_slice())
                .ok_or(ActionError::RowMatchFailure { row: i, residue: r })?;
            perm.push(*j);
        }
        class_perms.push(pi);
        char_perms.push(perm);
    }
    Ok(ActionTable {
        modulus: e,
        residues,
        class_perms,
        char_perms,
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FixedCounts {
    pub residue: u32,
    pub classes: usize,
    pub characters: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BrauerReport {
    pub per_residue: Vec<FixedCounts>,
    pub class_orbits: usize,
    pub character_orbits: usize,
}

impl BrauerReport {
    pub fn passed(&self) -> bool {
        self.class_orbits == self.character_orbits
            && self.per_residue.iter().all(|c| c.classes == c.characters)
    }

    pub fn violations(&self) -> Vec<&FixedCounts> {
        self.per_residue
            .iter()
            .filter(|c| c.classes != c.characters)
            .collect()
    }
}

/// Fixed-point counts per residue and orbit counts on both sides.
pub fn brauer_check(actions: &ActionTable) -> BrauerReport {
    let per_residue = actions
        .residues
        .iter()
        .enumerate()
        .map(|(i, &r)| FixedCounts {
            residue: r,
            classes: fixed_points(&actions.class_perms[i]),
            characters: fixed_points(&actions.char_perms[i]),
        })
        .collect();
    BrauerReport {
        per_residue,
        class_orbits: actions.orbits(false).len(),
        character_orbits: actions.orbits(true).len(),
    }
}

fn fixed_points(perm: &[usize]) -> usize {
    perm.iter().enumerate().filter(|&(i, &j)| i == j).count()
}

/// Orbits with equal stabilizers, paired: `(class orbit, character orbit)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct OrbitPairing {
    pub pairs: Vec<(Vec<usize>, Vec<usize>)>,
}

/// The group is abelian, so two actions are permutation isomorphic exactly
/// when their point stabilizers agree as multisets. Returns a pairing of
/// orbits when they do.
pub fn permutation_isomorphic(actions: &ActionTable) -> Option<OrbitPairing> {
    let mut by_stabilizer: BTreeMap<Vec<u32>, Vec<Vec<usize>>> = BTreeMap::new();
    for orbit in actions.orbits(true) {
        by_stabilizer
            .entry(actions.stabilizer(orbit[0], true))
            .or_default()
            .push(orbit);
    }
    let mut pairs = Vec::new();
    for orbit in actions.orbits(false) {
        let stab = actions.stabilizer(orbit[0], false);
        let partner = by_stabilizer.get_mut(&stab).and_then(Vec::pop)?;
        pairs.push((orbit, partner));
    }
    if by_stabilizer.values().any(|v| !v.is_empty()) {
        return None;
    }
    Some(OrbitPairing { pairs })
}

/// `σ` for a class field `F`, with the fixed sets it produces and the sets
/// predicted for it.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SigmaConstruction {
    pub field: FieldKey,
    pub prime: u64,
    pub sigma: GaloisElement,
    pub fixed_classes: Vec<usize>,
    pub fixed_characters: Vec<usize>,
    pub expected_classes: Vec<usize>,
    pub expected_characters: Vec<usize>,
}

impl SigmaConstruction {
    pub fn identity_holds(&self) -> bool {
        self.fixed_classes == self.expected_classes && self.fixed_characters == self.expected_characters
    }
}

/// Assemble `σ` modulo `e = Exp(G)` from prime-power components.
///
/// On the component of the witness prime `p`, `τ` is the smallest generator
/// of `Gal(Q_{p^m}/F)` with `p^m = gcd(p^3, e_p)` (for `p = 2`, `m ≤ 3` keeps
/// this cyclic). Every other odd component gets its smallest primitive root;
/// the 2-component is the identity when `p` is odd.
pub fn construct_sigma_for_field(
    analysis: &GroupAnalysis,
    field: &FieldKey,
) -> Result<SigmaConstruction, ActionError> {
    let profile = analysis.profile();
    let not_met = |why: &str| Err(ActionError::HypothesesNotMet(why.to_string()));
    if field.is_rational() {
        return not_met("field is rational");
    }
    if !analysis.class_fields().contains(field) {
        return not_met("field is not the field of values of a class");
    }
    if profile.order % 2 == 1 {
        return not_met("group order is odd");
    }
    if profile.h > 3 {
        return not_met("h(G) > 3");
    }
    let Some(p) = witness_prime(field) else {
        return not_met("no prime p with F inside Q_{p^3}");
    };

    let e = analysis.table().modulus();
    let mut components = Vec::new();
    for (q, a) in factorize(e as u64) {
        let m = q.pow(a) as u32;
        let residue = if q == p {
            let small = q.pow(a.min(3)) as u32;
            let gal = field
                .galois_subgroup_in(small)
                .ok_or(ActionError::HypothesesNotMet(
                    "conductor does not divide the exponent".into(),
                ))?;
            cyclic_generator(&gal, small).ok_or(ActionError::HypothesesNotMet(
                "Gal(Q_{p^3}/F) is not cyclic".into(),
            ))?
        } else if q == 2 {
            1
        } else {
            let units = UnitGroup::new(m).expect("positive modulus");
            cyclic_generator(units.elements(), m).expect("odd prime powers have primitive roots")
        };
        components.push((m, residue));
    }
    let sigma = crt_assemble(&components).expect("prime-power components are coprime");

    let classes = analysis.classes();
    let table = analysis.table();
    let r = sigma.residue as i64;
    let fixed_classes: Vec<usize> = (0..classes.len()).filter(|&k| classes.power(k, r) == k).collect();
    let fixed_characters: Vec<usize> = (0..table.len())
        .filter(|&i| {
            let row = table.row(i);
            (0..classes.len()).all(|k| row[classes.power(k, r)] == row[k])
        })
        .collect();

    let class_fields = analysis.class_fields();
    let char_fields = analysis.character_fields();
    let (expected_classes, expected_characters) = if p == 2 {
        (
            (0..classes.len())
                .filter(|&k| class_fields[k].is_rational() || &class_fields[k] == field)
                .collect(),
            (0..table.len())
                .filter(|&i| char_fields[i].is_rational() || &char_fields[i] == field)
                .collect(),
        )
    } else {
        let q8 = FieldKey::cyclotomic(8).expect("8 is a valid modulus");
        (
            (0..classes.len())
                .filter(|&k| class_fields[k].is_subfield_of(&q8) || &class_fields[k] == field)
                .collect(),
            (0..table.len())
                .filter(|&i| char_fields[i].is_subfield_of(&q8) || field.is_subfield_of(&char_fields[i]))
                .collect(),
        )
    };
    Ok(SigmaConstruction {
        field: field.clone(),
        prime: p,
        sigma,
        fixed_classes,
        fixed_characters,
        expected_classes,
        expected_characters,
    })
}

/// `T[χ^σ][K'] = T[χ][K]` with `K' = π_{r^{-1}}(K)`, for every `r`, `χ`, `K`.
///
/// With `χ^σ = χ ∘ π_r` the class action pairing with it is by the inverse
/// residue; fixed-point counts are the same for `r` and `r^{-1}`.
pub fn compatibility_holds(actions: &ActionTable, table: &CharacterTable) -> bool {
    let e = actions.modulus.max(1) as u64;
    let ids = ValueIndex::new(table);
    let ids = ids.ids();
    actions.residues.iter().enumerate().all(|(idx, &r)| {
        let r_inv = mod_inverse(r as u64, e).unwrap_or(0) as u32;
        let Some(class_inv) = actions.class_perm(r_inv) else {
            return false;
        };
        let chars = &actions.char_perms[idx];
        (0..ids.len()).all(|i| (0..class_inv.len()).all(|k| ids[chars[i]][class_inv[k]] == ids[i][k]))
    })
}

/// Both actions respect products of residues.
pub fn homomorphism_holds(actions: &ActionTable) -> bool {
    let e = actions.modulus.max(1);
    let n = actions.class_count();
    actions.residues.iter().enumerate().all(|(i, &r)| {
        actions.residues.iter().enumerate().all(|(j, &s)| {
            let rs = ((r as u64 * s as u64) % e as u64) as u32;
            let Some(k) = actions.position(rs) else {
                return false;
            };
            (0..n).all(|x| {
                actions.class_perms[k][x] == actions.class_perms[j][actions.class_perms[i][x]]
                    && actions.char_perms[k][x] == actions.char_perms[j][actions.char_perms[i][x]]
            })
        })
    })
}

/// Row matching agrees with applying `ε ↦ ε^r` entry-wise.
pub fn galois_rows_agree(actions: &ActionTable, table: &CharacterTable) -> bool {
    let index = ValueIndex::new(table);
    let ids = index.ids();
    actions.residues.iter().enumerate().all(|(idx, &r)| {
        let images = index.galois_images(r as i64);
        (0..ids.len()).all(|i| {
            let target = &ids[actions.char_perms[idx][i]];
            ids[i]
                .iter()
                .zip(target)
                .all(|(&x, &y)| images[x as usize] == Some(y))
        })
    })
}
