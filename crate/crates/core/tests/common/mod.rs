//! Strategies and property checks shared by the property tests and the
//! acceptance run.
#![allow(dead_code)]

use fov_core::fields::{class_field, class_field_from_table};
use fov_core::zmod::{
    count_bounded_subfields, euler_phi, field_contains, galois_structure, units, UnitGroup,
};
use fov_core::{Cyclotomic, FieldKey, FieldSignature, GroupAnalysis, PermGroup, Permutation};
use num_bigint::BigInt;
use num_rational::BigRational;
use proptest::prelude::*;
use proptest::test_runner::TestCaseError;

pub fn config() -> ProptestConfig {
    ProptestConfig::with_cases(1000)
}

pub fn coprime(r: i64, n: u32) -> bool {
    fov_core::zmod::gcd(r.rem_euclid(n as i64) as u64, n as u64) == 1
}

/// A modulus, a value with small integer coefficients, and a rational scale.
pub fn cyclotomic(n: u32) -> impl Strategy<Value = Cyclotomic> {
    (
        prop::collection::vec((0..n as u64, -3i64..=3), 0..6),
        -4i64..=4,
        1i64..=3,
    )
        .prop_map(move |(terms, num, den)| {
            let x = Cyclotomic::from_exponent_terms(n, terms);
            if num == den {
                x
            } else {
                x.scale(&BigRational::new(BigInt::from(num), BigInt::from(den)))
            }
        })
}

pub fn pair_with_unit() -> impl Strategy<Value = (Cyclotomic, Cyclotomic, i64, i64)> {
    (1u32..=24).prop_flat_map(|n| {
        let unit = (0..n as i64).prop_filter("unit", move |&r| coprime(r, n));
        (cyclotomic(n), cyclotomic(n), unit.clone(), unit)
    })
}

/// A subgroup of `(Z/nZ)^×` generated by a few random residues.
pub fn unit_subgroup() -> impl Strategy<Value = (u32, Vec<u32>)> {
    (1u32..=72).prop_flat_map(|n| {
        let u = units(n);
        (Just(n), prop::collection::vec(prop::sample::select(u), 0..3)).prop_map(|(n, gens)| {
            let group = UnitGroup::new(n).unwrap();
            (n, group.generated(&gens))
        })
    })
}

pub fn field() -> impl Strategy<Value = FieldKey> {
    unit_subgroup().prop_map(|(n, h)| FieldKey::canonicalize(n, &h).unwrap())
}

/// A permutation group on at most 5 points from up to three random generators.
pub fn small_group() -> impl Strategy<Value = PermGroup> {
    (1usize..=5).prop_flat_map(|d| {
        let perm = Just((0..d as u32).collect::<Vec<u32>>()).prop_shuffle();
        prop::collection::vec(perm, 0..=3).prop_map(move |gens| {
            let gens = gens.into_iter().map(|g| Permutation::new(g).unwrap()).collect();
            PermGroup::from_generators(d, gens, 200).unwrap()
        })
    })
}

pub fn galois_is_a_ring_automorphism(x: &Cyclotomic, y: &Cyclotomic, r: i64) -> Result<(), TestCaseError> {
    let sum = (x + y).galois_apply(r).unwrap();
    prop_assert_eq!(sum, &x.galois_apply(r).unwrap() + &y.galois_apply(r).unwrap());
    let prod = (x * y).galois_apply(r).unwrap();
    prop_assert_eq!(prod, &x.galois_apply(r).unwrap() * &y.galois_apply(r).unwrap());
    Ok(())
}

pub fn galois_composition(x: &Cyclotomic, r: i64, s: i64) -> Result<(), TestCaseError> {
    let n = x.modulus() as i64;
    let twice = x.galois_apply(r).unwrap().galois_apply(s).unwrap();
    prop_assert_eq!(twice, x.galois_apply((r * s).rem_euclid(n)).unwrap());
    Ok(())
}

pub fn trace_and_norm_are_real(x: &Cyclotomic) -> Result<(), TestCaseError> {
    let c = x.complex_conjugate();
    let trace = x + &c;
    let norm = x * &c;
    prop_assert_eq!(trace.complex_conjugate(), trace);
    prop_assert_eq!(norm.complex_conjugate(), norm);
    Ok(())
}

pub fn canonicalization_is_idempotent(n: u32, h: &[u32]) -> Result<(), TestCaseError> {
    let key = FieldKey::canonicalize(n, h).unwrap();
    let again = FieldKey::canonicalize(key.conductor(), key.subgroup()).unwrap();
    prop_assert_eq!(&again, &key);
    prop_assert_eq!(euler_phi(n as u64) / h.len() as u64, key.degree());
    prop_assert_eq!(
        euler_phi(key.conductor() as u64) / key.subgroup().len() as u64,
        key.degree()
    );
    prop_assert!(key.conductor() % 4 != 2);
    Ok(())
}

pub fn containment_is_a_partial_order(a: &FieldKey, b: &FieldKey, c: &FieldKey) -> Result<(), TestCaseError> {
    prop_assert!(field_contains(a, a));
    prop_assert!(field_contains(&FieldKey::rational(), a));
    if field_contains(a, b) && field_contains(b, a) {
        prop_assert_eq!(a, b);
    }
    if field_contains(a, b) && field_contains(b, c) {
        prop_assert!(field_contains(a, c));
    }
    if field_contains(a, b) {
        prop_assert_eq!(b.degree() % a.degree(), 0);
    }
    Ok(())
}

pub fn prime_power_cyclotomics(p: u64, a: u32, d: u64) -> Result<(), TestCaseError> {
    if p.pow(a) > 1024 {
        return Ok(());
    }
    prop_assert_eq!(galois_structure(p, a).unwrap().order(), euler_phi(p.pow(a)));
    let count = count_bounded_subfields(p, a, d).unwrap() as u64;
    if p == 2 {
        prop_assert!(count <= 3 * d);
    } else {
        prop_assert!(count <= d);
    }
    Ok(())
}

/// Field Cont, the krational bound, `|Cl_R| = |Irr_R|` and the counting facts
/// behind them, on one group.
pub fn field_invariants(g: PermGroup) -> Result<(), TestCaseError> {
    let a = GroupAnalysis::new(g).unwrap();
    let classes = a.classes();
    let profile = a.profile();
    for k in 0..classes.len() {
        let f = &a.class_fields()[k];
        prop_assert_eq!(f, &class_field(classes, k));
        prop_assert_eq!(f, &class_field_from_table(a.table(), k));
        // Q(g^j) ⊆ Q(g)
        for j in 1..=classes.class(k).element_order as i64 {
            let sub = &a.class_fields()[classes.power(k, j)];
            prop_assert!(field_contains(sub, f), "class {} power {}", k, j);
        }
        prop_assert!(f.degree() <= profile.h as u64);
    }
    let real = |fs: &[FieldKey]| {
        fs.iter()
            .filter(|f| f.signature() != FieldSignature::Imaginary)
            .count()
    };
    prop_assert_eq!(real(a.class_fields()), real(a.character_fields()));
    prop_assert_eq!(profile.cl_r, profile.irr_r);
    prop_assert_eq!(
        profile.per_field_class_multiplicity.values().sum::<usize>(),
        classes.len()
    );
    prop_assert_eq!(
        profile.per_field_char_multiplicity.values().sum::<usize>(),
        classes.len()
    );
    for f in a.class_fields() {
        let count = a.class_fields().iter().filter(|x| *x == f).count() as u64;
        prop_assert_eq!(count % f.degree(), 0);
    }
    Ok(())
}
