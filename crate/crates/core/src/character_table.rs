//! Exact character tables by the Dixon–Schneider method.
//!
//! The class sums span the centre of the group algebra, and the central
//! characters `ω_χ(K) = |K| χ(g_K) / χ(1)` are the common eigenvectors of
//! the class matrices `(M_i)_{jk} = a_{ijk}`. Working modulo a prime
//! `p ≡ 1 (mod e)` with `p > 2√|G|`, the common eigenspaces split into lines
//! and each line gives one character modulo `p`. Every value `χ(g)` is a sum
//! of `|g|`-th roots of unity, and the multiplicity of each root is recovered
//! by a discrete Fourier transform over `F_p` and lifted to an integer in
//! `[0, χ(1)]`.

use std::collections::HashMap;
use std::fmt::Write as _;

use serde::Serialize;

use crate::cyclotomic::{basis, reduce_integer, Cyclotomic};
use crate::error::TableError;
use crate::group::{ClassData, ClassMultTensor, PermGroup};
use crate::modp::{
    echelon_basis, hessenberg, hessenberg_charpoly, hessenberg_eigenvector, is_unreduced, nullspace,
    roots_with_multiplicity, Matrix, PrimeField,
};
use crate::zmod::{is_prime, mod_inverse, units};

const MAX_PRIME_ATTEMPTS: usize = 32;

/// Smallest prime `p ≡ 1 (mod e)` with `p > 2√order`.
pub fn dixon_prime(exponent: u64, order: u64) -> u64 {
    next_dixon_prime(exponent, order, 0)
}

/// Smallest admissible prime strictly greater than `after`.
pub fn next_dixon_prime(exponent: u64, order: u64, after: u64) -> u64 {
    let e = exponent.max(1);
    let mut p = (after / e) * e + 1;
    while p <= after {
        p += e;
    }
    loop {
        if p * p > 4 * order && is_prime(p) {
            return p;
        }
        p += e;
    }
}

/// Irreducible characters as rows, classes as columns, all values in `Q_e`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CharacterTable {
    group_order: u64,
    modulus: u32,
    prime: u64,
    degrees: Vec<u64>,
    rows: Vec<Vec<Cyclotomic>>,
}

impl CharacterTable {
    /// Assemble a table from explicit rows; degrees are read from column 0.
    pub fn from_rows(group_order: u64, modulus: u32, rows: Vec<Vec<Cyclotomic>>) -> Self {
        let degrees = rows
            .iter()
            .map(|r| r[0].as_integer().unwrap_or(0).max(0) as u64)
            .collect();
        CharacterTable {
            group_order,
            modulus,
            prime: 0,
            degrees,
            rows,
        }
    }

    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    pub fn group_order(&self) -> u64 {
        self.group_order
    }

    /// The exponent `e`; every entry lies in `Q_e`.
    pub fn modulus(&self) -> u32 {
        self.modulus
    }

    /// The prime the table was computed with (0 for hand-built tables).
    pub fn prime(&self) -> u64 {
        self.prime
    }

    pub fn degrees(&self) -> &[u64] {
        &self.degrees
    }

    pub fn rows(&self) -> &[Vec<Cyclotomic>] {
        &self.rows
    }

    pub fn row(&self, i: usize) -> &[Cyclotomic] {
        &self.rows[i]
    }

    pub fn entry(&self, row: usize, class: usize) -> &Cyclotomic {
        &self.rows[row][class]
    }

    pub fn replace_entry(&mut self, row: usize, class: usize, value: Cyclotomic) {
        self.rows[row][class] = value;
    }

    /// Text dump: header, one line per class, one line per character.
    pub fn dump(&self, group: &PermGroup, classes: &ClassData) -> String {
        let mut out = String::new();
        writeln!(
            out,
            "order={} exponent={} classes={}",
            group.order(),
            group.exponent(),
            classes.len()
        )
        .unwrap();
        for (k, c) in classes.classes().iter().enumerate() {
            writeln!(
                out,
                "K{} {} size={} order={}",
                k,
                group.element(c.representative),
                c.size(),
                c.element_order
            )
            .unwrap();
        }
        for (i, row) in self.rows.iter().enumerate() {
            let cells: Vec<String> = row.iter().map(Cyclotomic::to_string).collect();
            writeln!(out, "X{}: {}", i, cells.join(" | ")).unwrap();
        }
        out
    }
}

/// The distinct entries of a table, with every row rewritten as value ids.
/// Comparing ids is much cheaper than comparing cyclotomics.
#[derive(Clone, Debug)]
pub struct ValueIndex {
    values: Vec<Cyclotomic>,
    lookup: HashMap<Cyclotomic, u32>,
    ids: Vec<Vec<u32>>,
}

impl ValueIndex {
    pub fn new(table: &CharacterTable) -> Self {
        let mut values = Vec::new();
        let mut lookup = HashMap::new();
        let ids = table
            .rows()
            .iter()
            .map(|row| {
                row.iter()
                    .map(|x| {
                        *lookup.entry(x.clone()).or_insert_with(|| {
                            values.push(x.clone());
                            (values.len() - 1) as u32
                        })
                    })
                    .collect()
            })
            .collect();
        ValueIndex { values, lookup, ids }
    }

    pub fn values(&self) -> &[Cyclotomic] {
        &self.values
    }

    pub fn ids(&self) -> &[Vec<u32>] {
        &self.ids
    }

    pub fn id_of(&self, x: &Cyclotomic) -> Option<u32> {
        self.lookup.get(x).copied()
    }

    /// For each value, the id of its image under `ε ↦ ε^r`, if that image occurs in the table.
    pub fn galois_images(&self, r: i64) -> Vec<Option<u32>> {
        self.values
            .iter()
            .map(|x| x.galois_apply(r).ok().and_then(|y| self.id_of(&y)))
            .collect()
    }
}

/// Compute `Irr(G)` exactly. On a degenerate prime the next admissible one is tried.
pub fn character_table(group: &PermGroup, classes: &ClassData) -> Result<CharacterTable, TableError> {
    let tensor = classes.class_mult_coefficients(group);
    let mut p = dixon_prime(group.exponent(), group.order());
    for _ in 0..MAX_PRIME_ATTEMPTS {
        match table_mod_prime(group, classes, &tensor, p) {
            Err(TableError::EigenspaceSplitFailure { .. }) => {
                p = next_dixon_prime(group.exponent(), group.order(), p);
            }
            other => return other,
        }
    }
    Err(TableError::NoAdmissiblePrime {
        attempts: MAX_PRIME_ATTEMPTS,
    })
}

fn class_matrix(f: &PrimeField, tensor: &ClassMultTensor, i: usize) -> Matrix {
    let k = tensor.classes();
    (0..k)
        .map(|j| (0..k).map(|l| tensor.get(i, j, l) as u64 % f.modulus()).collect())
        .collect()
}

/// Split the space `span(basis)` into eigenspaces of `m`.
fn split_space(f: &PrimeField, m: &Matrix, basis: &[Vec<u64>]) -> Result<Vec<Vec<Vec<u64>>>, TableError> {
    let failure = TableError::EigenspaceSplitFailure { prime: f.modulus() };
    let (vs, pivots) = echelon_basis(f, basis);
    let d = vs.len();
    let k = m.len();
    // restriction: M v_b = Σ_a A[a][b] v_a, read off at the pivot rows
    let restricted: Matrix = pivots
        .iter()
        .map(|&row| vs.iter().map(|v| f.dot(&m[row], v)).collect())
        .collect();
    let (hess, transform) = hessenberg(f, &restricted);
    let roots = roots_with_multiplicity(f, &hessenberg_charpoly(f, &hess));
    if roots.iter().map(|&(_, m)| m).sum::<usize>() != d {
        return Err(failure);
    }
    let combine = |c: &[u64]| -> Vec<u64> {
        let mut v = vec![0u64; k];
        for (coef, basis_vec) in c.iter().zip(&vs) {
            if *coef == 0 {
                continue;
            }
            for (x, &y) in v.iter_mut().zip(basis_vec) {
                *x = f.add(*x, f.mul(*coef, y));
            }
        }
        v
    };
    if let [(lambda, _)] = roots.as_slice() {
        // a diagonalizable map with one eigenvalue is scalar and splits nothing
        let scalar = (0..d).all(|a| (0..d).all(|b| restricted[a][b] == if a == b { *lambda } else { 0 }));
        return if scalar { Ok(vec![vs]) } else { Err(failure) };
    }
    let mut out = Vec::with_capacity(roots.len());
    if is_unreduced(&hess) {
        // every eigenspace is a line; read eigenvectors off the Hessenberg form
        for (lambda, mult) in roots {
            if mult != 1 {
                return Err(failure);
            }
            let x = hessenberg_eigenvector(f, &hess, lambda).ok_or(failure.clone())?;
            let c: Vec<u64> = (0..d)
                .map(|a| (0..d).fold(0u64, |acc, b| f.add(acc, f.mul(transform[a][b], x[b]))))
                .collect();
            out.push(vec![combine(&c)]);
        }
        return Ok(out);
    }
    for (lambda, mult) in roots {
        let mut shifted = restricted.clone();
        for (a, row) in shifted.iter_mut().enumerate() {
            row[a] = f.sub(row[a], lambda);
        }
        let kernel = nullspace(f, &shifted, d);
        if kernel.len() != mult {
            return Err(failure);
        }
        out.push(kernel.iter().map(|c| combine(c)).collect());
    }
    Ok(out)
}

/// For each class `c`, a class `c0` and `r^{-1} mod |g|` with `c = c0^r`, `c0`
/// the first class generating a conjugate of the same cyclic subgroup.
fn galois_conjugates(classes: &ClassData) -> Vec<(usize, u64)> {
    let mut out: Vec<Option<(usize, u64)>> = vec![None; classes.len()];
    for c0 in 0..classes.len() {
        if out[c0].is_some() {
            continue;
        }
        let o = classes.class(c0).element_order;
        for r in units(o as u32) {
            let c = classes.power(c0, r as i64);
            if out[c].is_none() {
                let r_inv = mod_inverse(r as u64, o).expect("unit");
                out[c] = Some((c0, r_inv));
            }
        }
    }
    out.into_iter()
        .map(|x| x.expect("every class is reached"))
        .collect()
}

fn table_mod_prime(
    group: &PermGroup,
    classes: &ClassData,
    tensor: &ClassMultTensor,
    p: u64,
) -> Result<CharacterTable, TableError> {
    let f = PrimeField::new(p);
    let failure = TableError::EigenspaceSplitFailure { prime: p };
    let k = classes.len();
    let order = group.order();
    let e = group.exponent();

    let identity: Vec<Vec<u64>> = (0..k)
        .map(|i| (0..k).map(|j| u64::from(i == j)).collect())
        .collect();
    let mut spaces = vec![identity];
    for i in 0..k {
        if spaces.iter().all(|s| s.len() == 1) {
            break;
        }
        let m = class_matrix(&f, tensor, i);
        let mut next = Vec::with_capacity(spaces.len());
        for space in spaces {
            if space.len() == 1 {
                next.push(space);
            } else {
                next.extend(split_space(&f, &m, &space)?);
            }
        }
        spaces = next;
    }
    if spaces.len() != k || spaces.iter().any(|s| s.len() != 1) {
        return Err(failure);
    }

    let sizes: Vec<u64> = classes.classes().iter().map(|c| c.size() % p).collect();
    let inverse_class: Vec<usize> = (0..k).map(|c| classes.inverse_class(c)).collect();
    let root = f.pow(f.primitive_root(), (p - 1) / e);
    let conjugates = galois_conjugates(classes);

    let mut rows: Vec<(u64, Vec<Cyclotomic>)> = Vec::with_capacity(k);
    for space in spaces {
        let v = &space[0];
        if v[0] == 0 {
            return Err(failure);
        }
        let scale = f.inv(v[0]);
        let omega: Vec<u64> = v.iter().map(|&x| f.mul(x, scale)).collect();
        // Σ_K ω_K ω_{K*} / |K| = |G| / χ(1)²
        let s = (0..k).fold(0u64, |acc, c| {
            f.add(
                acc,
                f.mul(f.mul(omega[c], omega[inverse_class[c]]), f.inv(sizes[c])),
            )
        });
        if s == 0 {
            return Err(failure);
        }
        let degree_sq = f.mul(order % p, f.inv(s));
        let degree = f.small_sqrt(degree_sq).ok_or(failure.clone())?;
        let values: Vec<u64> = (0..k)
            .map(|c| f.mul(f.mul(omega[c], degree), f.inv(sizes[c])))
            .collect();

        // Multiplicities of each eigenvalue of the representation on <g>; for
        // g = g0^r they are those of g0 with t replaced by t/r.
        let mut mults: Vec<Option<Vec<u64>>> = vec![None; k];
        let mut row = Vec::with_capacity(k);
        for (c, class) in classes.classes().iter().enumerate() {
            let o = class.element_order;
            let (c0, r_inv) = conjugates[c];
            if mults[c0].is_none() {
                let zeta_inv = f.inv(f.pow(root, e / o));
                let zeta_pows: Vec<u64> = (0..o)
                    .scan(1u64, |z, _| {
                        let out = *z;
                        *z = f.mul(*z, zeta_inv);
                        Some(out)
                    })
                    .collect();
                let along: Vec<u64> = (0..o).map(|s| values[classes.power(c0, s as i64)]).collect();
                let o_inv = f.inv(o % p);
                let mut m = Vec::with_capacity(o as usize);
                let mut total = 0u64;
                for t in 0..o {
                    // m_t = (1/o) Σ_s χ(g^s) ζ^{-ts}
                    let acc = (0..o).fold(0u64, |acc, s| {
                        f.add(acc, f.mul(along[s as usize], zeta_pows[((t * s) % o) as usize]))
                    });
                    let mult = f.mul(acc, o_inv);
                    if mult > degree {
                        return Err(TableError::LiftOutOfRange {
                            value: mult,
                            degree,
                            prime: p,
                        });
                    }
                    total += mult;
                    m.push(mult);
                }
                if total != degree {
                    return Err(TableError::LiftOutOfRange {
                        value: total,
                        degree,
                        prime: p,
                    });
                }
                mults[c0] = Some(m);
            }
            let m = mults[c0].as_ref().expect("filled above");
            let step = e / o;
            let terms = (0..o).filter_map(|t| {
                let mult = m[((t * r_inv) % o) as usize];
                (mult > 0).then_some((t * step, mult as i64))
            });
            row.push(Cyclotomic::from_exponent_terms(e as u32, terms));
        }
        rows.push((degree, row));
    }

    let mut keyed: Vec<(u64, Vec<String>, Vec<Cyclotomic>)> = rows
        .into_iter()
        .map(|(d, row)| (d, row.iter().map(Cyclotomic::to_string).collect(), row))
        .collect();
    keyed.sort_by(|a, b| (a.0, &a.1).cmp(&(b.0, &b.1)));
    Ok(CharacterTable {
        group_order: order,
        modulus: e as u32,
        prime: p,
        degrees: keyed.iter().map(|r| r.0).collect(),
        rows: keyed.into_iter().map(|r| r.2).collect(),
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub enum OrthogonalityViolation {
    Shape { rows: usize, classes: usize },
    NonIntegral { row: usize, class: usize },
    Overflow,
    DegreeMismatch { row: usize },
    DegreeSquareSum { sum: u64, order: u64 },
    DegreeDivisibility { row: usize, degree: u64 },
    RowRelation { first: usize, second: usize },
    ColumnRelation { first: usize, second: usize },
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct OrthogonalityReport {
    pub violations: Vec<OrthogonalityViolation>,
}

impl OrthogonalityReport {
    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Exact check of both orthogonality relations and `Σ χ(1)² = |G|`.
///
/// Entries are lifted to `Z[x]/(x^e - 1)`, where complex conjugation is
/// `x ↦ x^{e-1}`; each inner product is accumulated there and reduced
/// modulo `Φ_e` once.
pub fn verify_orthogonality(table: &CharacterTable, classes: &ClassData) -> OrthogonalityReport {
    use OrthogonalityViolation as V;
    let mut violations = Vec::new();
    let k = classes.len();
    if table.len() != k || table.rows.iter().any(|r| r.len() != k) {
        violations.push(V::Shape {
            rows: table.len(),
            classes: k,
        });
        return OrthogonalityReport { violations };
    }
    let e = table.modulus;
    let order = classes.group_order();

    let mut lifted: Vec<Vec<Vec<(u32, i64)>>> = Vec::with_capacity(k);
    for (i, row) in table.rows.iter().enumerate() {
        let mut out = Vec::with_capacity(k);
        for (c, x) in row.iter().enumerate() {
            match x.integer_terms() {
                Some(t) if x.modulus() == e => out.push(t),
                _ => {
                    violations.push(V::NonIntegral { row: i, class: c });
                    out.push(Vec::new());
                }
            }
        }
        lifted.push(out);
    }
    if !violations.is_empty() {
        return OrthogonalityReport { violations };
    }
    let conj =
        |terms: &[(u32, i64)]| -> Vec<(u32, i64)> { terms.iter().map(|&(i, c)| ((e - i) % e, c)).collect() };
    let conjugated: Vec<Vec<Vec<(u32, i64)>>> = lifted
        .iter()
        .map(|row| row.iter().map(|t| conj(t)).collect())
        .collect();

    let mut square_sum = 0u64;
    for (i, row) in table.rows.iter().enumerate() {
        let d = table.degrees[i];
        if row[0].as_integer() != Some(d as i64) {
            violations.push(V::DegreeMismatch { row: i });
        }
        if d == 0 || order % d != 0 {
            violations.push(V::DegreeDivisibility { row: i, degree: d });
        }
        square_sum += d * d;
    }
    if square_sum != order {
        violations.push(V::DegreeSquareSum {
            sum: square_sum,
            order,
        });
    }

    let phi = basis(e).phi();
    let expect = |value: i128| -> Vec<i128> {
        let mut v = vec![0i128; phi];
        v[0] = value;
        v
    };
    let mut acc = vec![0i128; e as usize];
    let mut accumulate =
        |pairs: &mut dyn Iterator<Item = (i128, &Vec<(u32, i64)>, &Vec<(u32, i64)>)>| -> Option<Vec<i128>> {
            acc.iter_mut().for_each(|x| *x = 0);
            for (weight, a, b) in pairs {
                for &(i, x) in a {
                    for &(j, y) in b {
                        let slot = &mut acc[((i + j) % e) as usize];
                        *slot = slot.checked_add(weight.checked_mul(x as i128)?.checked_mul(y as i128)?)?;
                    }
                }
            }
            reduce_integer(e, &acc)
        };

    let sizes: Vec<i128> = classes.classes().iter().map(|c| c.size() as i128).collect();
    for a in 0..k {
        for b in a..k {
            let mut pairs = (0..k).map(|c| (sizes[c], &lifted[a][c], &conjugated[b][c]));
            match accumulate(&mut pairs) {
                None => violations.push(V::Overflow),
                Some(v) => {
                    let target = if a == b { order as i128 } else { 0 };
                    if v != expect(target) {
                        violations.push(V::RowRelation { first: a, second: b });
                    }
                }
            }
        }
    }
    for c in 0..k {
        for l in c..k {
            let mut pairs = (0..k).map(|i| (1i128, &lifted[i][c], &conjugated[i][l]));
            match accumulate(&mut pairs) {
                None => violations.push(V::Overflow),
                Some(v) => {
                    let target = if c == l {
                        (order / sizes[c] as u64) as i128
                    } else {
                        0
                    };
                    if v != expect(target) {
                        violations.push(V::ColumnRelation { first: c, second: l });
                    }
                }
            }
        }
    }
    OrthogonalityReport { violations }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::Permutation;

    fn perm(images: &[u32]) -> Permutation {
        Permutation::new(images.to_vec()).unwrap()
    }

    fn table_of(degree: usize, gens: &[&[u32]]) -> (PermGroup, ClassData, CharacterTable) {
        let g = PermGroup::from_generators(degree, gens.iter().map(|x| perm(x)).collect(), 10_000).unwrap();
        let c = ClassData::compute(&g);
        let t = character_table(&g, &c).unwrap();
        (g, c, t)
    }

    #[test]
    fn dixon_prime_examples() {
        assert_eq!(dixon_prime(1, 1), 3);
        assert_eq!(dixon_prime(6, 6), 7);
        assert_eq!(dixon_prime(4, 8), 13);
        assert_eq!(next_dixon_prime(4, 8, 13), 17);
    }

    #[test]
    fn trivial_table() {
        let (_, c, t) = table_of(1, &[]);
        assert_eq!(t.rows(), &[vec![Cyclotomic::one(1)]]);
        assert!(verify_orthogonality(&t, &c).passed());
    }

    #[test]
    fn s3_table() {
        let (_, c, t) = table_of(3, &[&[1, 0, 2], &[1, 2, 0]]);
        let mut degrees = t.degrees().to_vec();
        degrees.sort();
        assert_eq!(degrees, vec![1, 1, 2]);
        assert!(t.rows().iter().flatten().all(Cyclotomic::is_rational));
        let two = t.rows().iter().find(|r| r[0].as_integer() == Some(2)).unwrap();
        let values: Vec<i64> = two.iter().map(|x| x.as_integer().unwrap()).collect();
        assert_eq!(values, vec![2, 0, -1]);
        assert!(verify_orthogonality(&t, &c).passed());
    }

    #[test]
    fn c3_table() {
        let (_, c, t) = table_of(3, &[&[1, 2, 0]]);
        assert_eq!(t.degrees(), &[1, 1, 1]);
        let e1 = Cyclotomic::root_of_unity(3, 1);
        let e2 = Cyclotomic::root_of_unity(3, 2);
        let mut generator_values: Vec<&Cyclotomic> = t.rows().iter().map(|r| &r[1]).collect();
        generator_values.retain(|x| !x.is_rational());
        assert_eq!(generator_values.len(), 2);
        assert!(generator_values.contains(&&e1) && generator_values.contains(&&e2));
        assert!(verify_orthogonality(&t, &c).passed());
    }

    #[test]
    fn perturbed_entry_is_located() {
        let (_, c, mut t) = table_of(3, &[&[1, 0, 2], &[1, 2, 0]]);
        let bumped = &t.entry(2, 1).clone() + &Cyclotomic::one(t.modulus());
        t.replace_entry(2, 1, bumped);
        let report = verify_orthogonality(&t, &c);
        assert!(!report.passed());
        assert!(report
            .violations
            .iter()
            .any(|v| matches!(v, OrthogonalityViolation::RowRelation { first: 2, second: 2 })));
        assert!(report
            .violations
            .iter()
            .any(|v| matches!(v, OrthogonalityViolation::ColumnRelation { first: 1, second: 1 })));
    }
}
