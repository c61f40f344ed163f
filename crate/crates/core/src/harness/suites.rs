use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::action::{
    brauer_check, compatibility_holds, construct_sigma_for_field, galois_rows_agree, homomorphism_holds,
    permutation_isomorphic,
};
use crate::analysis::GroupAnalysis;
use crate::character_table::verify_orthogonality;
use crate::error::{ActionError, HarnessError};
use crate::fields::{bg_degree, class_field_prime_bound, class_fields_from_table, rational_element_orders};
use crate::zmod::{is_prime, FieldKey};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum SuiteId {
    ThmA,
    ThmB,
    H1,
    NumRat,
    FieldCont,
    KRat,
    RatOrd,
    ClField,
    Cut,
    Main,
    QuadSemi,
    Odd,
    Brauer,
    Gow,
    Cd,
    Tent,
    Bg,
    Sigma,
    Orth,
}

impl SuiteId {
    pub const ALL: [SuiteId; 19] = [
        SuiteId::ThmA,
        SuiteId::ThmB,
        SuiteId::H1,
        SuiteId::NumRat,
        SuiteId::FieldCont,
        SuiteId::KRat,
        SuiteId::RatOrd,
        SuiteId::ClField,
        SuiteId::Cut,
        SuiteId::Main,
        SuiteId::QuadSemi,
        SuiteId::Odd,
        SuiteId::Brauer,
        SuiteId::Gow,
        SuiteId::Cd,
        SuiteId::Tent,
        SuiteId::Bg,
        SuiteId::Sigma,
        SuiteId::Orth,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            SuiteId::ThmA => "S-THMA",
            SuiteId::ThmB => "S-THMB",
            SuiteId::H1 => "S-H1",
            SuiteId::NumRat => "S-NUMRAT",
            SuiteId::FieldCont => "S-FIELDCONT",
            SuiteId::KRat => "S-KRAT",
            SuiteId::RatOrd => "S-RATORD",
            SuiteId::ClField => "S-CLFIELD",
            SuiteId::Cut => "S-CUT",
            SuiteId::Main => "S-MAIN",
            SuiteId::QuadSemi => "S-QUADSEMI",
            SuiteId::Odd => "S-ODD",
            SuiteId::Brauer => "S-BRAUER",
            SuiteId::Gow => "S-GOW",
            SuiteId::Cd => "S-CD",
            SuiteId::Tent => "S-TENT",
            SuiteId::Bg => "S-BG",
            SuiteId::Sigma => "S-SIGMA",
            SuiteId::Orth => "S-ORTH",
        }
    }

    /// `all` expands to every suite.
    pub fn parse_list(s: &str) -> Result<Vec<SuiteId>, HarnessError> {
        if s.eq_ignore_ascii_case("all") {
            return Ok(SuiteId::ALL.to_vec());
        }
        s.split(',').map(|x| x.trim().parse()).collect()
    }
}

impl FromStr for SuiteId {
    type Err = HarnessError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        SuiteId::ALL
            .iter()
            .copied()
            .find(|id| id.as_str().eq_ignore_ascii_case(s))
            .ok_or_else(|| HarnessError::UnknownSuite(s.to_string()))
    }
}

impl fmt::Display for SuiteId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum Verdict {
    Pass,
    Fail,
    NotApplicable,
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Verdict::Pass => "PASS",
            Verdict::Fail => "FAIL",
            Verdict::NotApplicable => "NOT_APPLICABLE",
        })
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Outcome {
    pub verdict: Verdict,
    pub witness: Value,
}

impl Outcome {
    fn na(reason: &str) -> Self {
        Outcome {
            verdict: Verdict::NotApplicable,
            witness: json!({ "reason": reason }),
        }
    }

    fn check(ok: bool, witness: Value) -> Self {
        Outcome {
            verdict: if ok { Verdict::Pass } else { Verdict::Fail },
            witness,
        }
    }
}

fn primes_within(a: &GroupAnalysis, allowed: &[u64]) -> Outcome {
    let primes = a.group().prime_divisors();
    let outside: Vec<u64> = primes.iter().copied().filter(|p| !allowed.contains(p)).collect();
    Outcome::check(
        outside.is_empty(),
        json!({ "primes": primes, "outside": outside }),
    )
}

fn field_strings(fields: &[FieldKey]) -> Vec<String> {
    fields.iter().map(FieldKey::to_string).collect()
}

/// Evaluate one suite on an analysed group.
pub fn evaluate(suite: SuiteId, a: &GroupAnalysis) -> Outcome {
    let p = a.profile();
    let classes = a.classes();
    let even = p.order % 2 == 0;
    match suite {
        SuiteId::ThmA => Outcome::check(
            p.n_inv <= 3 * p.h * p.h,
            json!({ "n": p.n_inv, "h": p.h, "k_p": p.k_p }),
        ),
        SuiteId::ThmB => {
            if p.h > 3 {
                return Outcome::na("h(G) > 3");
            }
            Outcome::check(p.f == p.h, json!({ "h": p.h, "f": p.f }))
        }
        SuiteId::H1 => Outcome::check(
            (p.h == 1) == (p.order == 1),
            json!({ "h": p.h, "order": p.order }),
        ),
        SuiteId::NumRat => {
            let odd = p.order % 2 == 1;
            let i = (p.cl_q == 1) == odd && (p.irr_q == 1) == odd;
            let ii = (p.cl_q == 2) == (p.irr_q == 2);
            let iii = p.cl_q != 3 || p.irr_q == 3;
            Outcome::check(
                i && ii && iii,
                json!({ "cl_Q": p.cl_q, "irr_Q": p.irr_q, "odd": odd, "parts": [i, ii, iii] }),
            )
        }
        SuiteId::FieldCont => {
            let fields = a.class_fields();
            for k in 0..classes.len() {
                let o = classes.class(k).element_order as i64;
                for j in 1..o {
                    let kj = classes.power(k, j);
                    if !fields[kj].is_subfield_of(&fields[k]) {
                        return Outcome::check(
                            false,
                            json!({ "class": k, "j": j, "power_field": fields[kj].to_string(), "field": fields[k].to_string() }),
                        );
                    }
                }
            }
            Outcome::check(true, Value::Null)
        }
        SuiteId::KRat => {
            let fields = a.class_fields();
            if let Some(k) = (0..fields.len()).find(|&k| fields[k].degree() as usize > p.h) {
                return Outcome::check(
                    false,
                    json!({ "class": k, "degree": fields[k].degree(), "h": p.h }),
                );
            }
            let mut counts: BTreeMap<&FieldKey, usize> = BTreeMap::new();
            for f in fields {
                *counts.entry(f).or_insert(0) += 1;
            }
            let bad: Vec<String> = counts
                .iter()
                .filter(|(f, &c)| c % f.degree() as usize != 0)
                .map(|(f, c)| format!("{f}: {c}"))
                .collect();
            Outcome::check(bad.is_empty(), json!({ "orbit_count_violations": bad }))
        }
        SuiteId::RatOrd => {
            if p.cl_q != 2 && p.cl_q != 3 {
                return Outcome::na("|Cl_Q(G)| not in {2, 3}");
            }
            let orders: Vec<u64> = rational_element_orders(classes, a.class_fields())
                .into_iter()
                .collect();
            let ok = match orders.as_slice() {
                [1, 2] | [1, 2, 4] => true,
                [1, 2, q] => *q % 2 == 1 && is_prime(*q),
                _ => false,
            };
            Outcome::check(ok, json!({ "orders": orders }))
        }
        SuiteId::ClField => {
            if p.h > 3 || !even {
                return Outcome::na("needs h(G) <= 3 and |G| even");
            }
            let bounds = class_field_prime_bound(a.class_fields());
            let missing: Vec<usize> = (0..bounds.len()).filter(|&k| bounds[k].is_none()).collect();
            Outcome::check(
                missing.is_empty(),
                json!({ "primes": bounds, "missing": missing, "fields": field_strings(a.class_fields()) }),
            )
        }
        SuiteId::Cut => {
            let small = |f: &FieldKey| f.is_rational() || f.is_imaginary_quadratic();
            let isr = p.flags.inverse_semi_rational;
            let by_classes = a.class_fields().iter().all(small);
            let by_chars = a.character_fields().iter().all(small);
            let consequences = !isr || (p.flags.quadratic_rational && p.flags.semi_rational);
            Outcome::check(
                isr == by_classes && isr == by_chars && consequences,
                json!({ "inverse_semi_rational": isr, "class_fields": by_classes, "character_fields": by_chars }),
            )
        }
        SuiteId::Main => {
            if p.cl_q != p.irr_q {
                return Outcome::na("|Irr_Q(G)| != |Cl_Q(G)|");
            }
            let quad = p.flags.quadratic_rational;
            let semi = p.flags.semi_rational;
            let iso = !semi || permutation_isomorphic(a.actions()).is_some();
            Outcome::check(
                quad == semi && iso,
                json!({ "quadratic_rational": quad, "semi_rational": semi, "isomorphic": iso }),
            )
        }
        SuiteId::QuadSemi => {
            if !(p.flags.quadratic_rational && p.flags.semi_rational) {
                return Outcome::na("not quadratic rational and semi-rational");
            }
            let iso = permutation_isomorphic(a.actions());
            Outcome::check(iso.is_some(), json!({ "pairing": iso }))
        }
        SuiteId::Odd => {
            if p.h > 3 || p.cl_q != 1 {
                return Outcome::na("needs h(G) <= 3 and |Cl_Q(G)| = 1");
            }
            let iso = permutation_isomorphic(a.actions()).is_some();
            Outcome::check(
                iso && p.f == p.h,
                json!({ "isomorphic": iso, "h": p.h, "f": p.f }),
            )
        }
        SuiteId::Brauer => {
            let report = brauer_check(a.actions());
            let compatible = compatibility_holds(a.actions(), a.table());
            let homomorphic = homomorphism_holds(a.actions());
            let galois = galois_rows_agree(a.actions(), a.table());
            let real = p.cl_r == p.irr_r;
            Outcome::check(
                report.passed() && compatible && homomorphic && galois && real,
                json!({
                    "fixed_point_violations": report.violations(),
                    "class_orbits": report.class_orbits,
                    "character_orbits": report.character_orbits,
                    "compatible": compatible,
                    "homomorphic": homomorphic,
                    "galois_rows_agree": galois,
                    "cl_R": p.cl_r,
                    "irr_R": p.irr_r,
                }),
            )
        }
        SuiteId::Gow => {
            if !(p.flags.rational && a.group().is_solvable()) {
                return Outcome::na("not a solvable rational group");
            }
            primes_within(a, &[2, 3, 5])
        }
        SuiteId::Cd => {
            if !(p.flags.semi_rational && a.group().is_solvable()) {
                return Outcome::na("not a solvable semi-rational group");
            }
            primes_within(a, &[2, 3, 5, 7, 13, 17])
        }
        SuiteId::Tent => {
            if !(p.flags.quadratic_rational && a.group().is_solvable()) {
                return Outcome::na("not a solvable quadratic rational group");
            }
            primes_within(a, &[2, 3, 5, 7, 13])
        }
        SuiteId::Bg => {
            let group = a.group();
            let from_table = class_fields_from_table(a.table());
            for k in 0..classes.len() {
                let rep = group.element(classes.class(k).representative);
                let stab = classes.rationality_stabilizer(k).len() as u64;
                let bg = group.bg_order(rep).unwrap_or(0);
                let field = &a.class_fields()[k];
                if bg != stab || bg_degree(classes, k) != field.degree() || &from_table[k] != field {
                    return Outcome::check(
                        false,
                        json!({
                            "class": k,
                            "bg_order": bg,
                            "stabilizer_order": stab,
                            "field": field.to_string(),
                            "field_from_table": from_table[k].to_string(),
                        }),
                    );
                }
            }
            Outcome::check(true, Value::Null)
        }
        SuiteId::Sigma => {
            let targets: BTreeSet<&FieldKey> = a.class_fields().iter().filter(|f| !f.is_rational()).collect();
            if p.h > 3 || !even || targets.is_empty() {
                return Outcome::na("needs h(G) <= 3, |G| even and a non-rational class field");
            }
            let mut checked = Vec::new();
            for field in targets {
                match construct_sigma_for_field(a, field) {
                    Ok(s) if s.identity_holds() => checked.push(json!({
                        "field": field.to_string(),
                        "sigma": s.sigma.residue,
                        "modulus": s.sigma.modulus,
                    })),
                    Ok(s) => return Outcome::check(false, json!(s)),
                    Err(ActionError::HypothesesNotMet(why)) => {
                        return Outcome::check(false, json!({ "field": field.to_string(), "error": why }))
                    }
                    Err(e) => return Outcome::check(false, json!({ "error": e.to_string() })),
                }
            }
            Outcome::check(true, json!({ "fields": checked }))
        }
        SuiteId::Orth => {
            let report = verify_orthogonality(a.table(), classes);
            Outcome::check(report.passed(), json!({ "violations": report.violations }))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::{PermGroup, Permutation};

    fn analysis(degree: usize, gens: &[&[u32]]) -> GroupAnalysis {
        let gens = gens
            .iter()
            .map(|g| Permutation::new(g.to_vec()).unwrap())
            .collect();
        GroupAnalysis::new(PermGroup::from_generators(degree, gens, 10_000).unwrap()).unwrap()
    }

    #[test]
    fn suite_ids_round_trip() {
        for id in SuiteId::ALL {
            assert_eq!(id.as_str().parse::<SuiteId>().unwrap(), id);
        }
        assert!(matches!(
            "S-NOPE".parse::<SuiteId>(),
            Err(HarnessError::UnknownSuite(_))
        ));
        assert_eq!(SuiteId::parse_list("all").unwrap().len(), 19);
    }

    #[test]
    fn spec_examples() {
        let s3 = analysis(3, &[&[1, 0, 2], &[1, 2, 0]]);
        assert_eq!(evaluate(SuiteId::ThmB, &s3).verdict, Verdict::Pass);
        let c5 = analysis(5, &[&[1, 2, 3, 4, 0]]);
        assert_eq!(evaluate(SuiteId::RatOrd, &c5).verdict, Verdict::NotApplicable);
        let s4 = analysis(4, &[&[1, 0, 2, 3], &[1, 2, 3, 0]]);
        assert_eq!(evaluate(SuiteId::Gow, &s4).verdict, Verdict::Pass);
    }

    #[test]
    fn every_suite_holds_on_small_groups() {
        let groups = [
            analysis(1, &[]),
            analysis(3, &[&[1, 2, 0]]),
            analysis(5, &[&[1, 2, 3, 4, 0], &[0, 4, 3, 2, 1]]),
            analysis(4, &[&[1, 0, 2, 3], &[1, 2, 3, 0]]),
        ];
        for a in &groups {
            for id in SuiteId::ALL {
                let out = evaluate(id, a);
                assert_ne!(out.verdict, Verdict::Fail, "{id}: {}", out.witness);
            }
        }
    }
}
