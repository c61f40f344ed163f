use std::collections::BTreeMap;

use super::spec::GroupSpec;

/// A family member before it becomes a spec.
#[derive(Clone)]
struct Base {
    name: String,
    order: u64,
    degree: usize,
    generators: Vec<Vec<u32>>,
    abelian: bool,
}

fn cycle_on(degree: usize, points: &[u32]) -> Vec<u32> {
    let mut images: Vec<u32> = (0..degree as u32).collect();
    for (i, &p) in points.iter().enumerate() {
        images[p as usize] = points[(i + 1) % points.len()];
    }
    images
}

fn cyclic(n: u64) -> Base {
    let degree = n as usize;
    let generators = if n == 1 {
        Vec::new()
    } else {
        vec![cycle_on(degree, &(0..n as u32).collect::<Vec<_>>())]
    };
    Base {
        name: format!("C{n}"),
        order: n,
        degree,
        generators,
        abelian: true,
    }
}

/// Direct product on disjoint point sets.
fn product(a: &Base, b: &Base, name: String, abelian: bool) -> Base {
    let degree = a.degree + b.degree;
    let shift = a.degree as u32;
    let mut generators: Vec<Vec<u32>> = a
        .generators
        .iter()
        .map(|g| g.iter().copied().chain(shift..shift + b.degree as u32).collect())
        .collect();
    generators.extend(b.generators.iter().map(|g| {
        (0..shift)
            .chain(g.iter().map(|&x| x + shift))
            .collect::<Vec<u32>>()
    }));
    Base {
        name,
        order: a.order * b.order,
        degree,
        generators,
        abelian,
    }
}

/// Lists `d_1 | d_2 | … | d_k` with `k ≥ 2`, every `d_i ≥ 2`, product at most `max`.
fn invariant_factor_lists(max: u64) -> Vec<Vec<u64>> {
    fn extend(current: &mut Vec<u64>, product: u64, max: u64, out: &mut Vec<Vec<u64>>) {
        if current.len() >= 2 {
            out.push(current.clone());
        }
        let last = *current.last().unwrap();
        let mut next = last;
        while product * next <= max {
            current.push(next);
            extend(current, product * next, max, out);
            current.pop();
            next += last;
        }
    }
    let mut out = Vec::new();
    for d in 2..=max {
        extend(&mut vec![d], d, max, &mut out);
    }
    out
}

fn abelian(factors: &[u64]) -> Base {
    let mut acc = cyclic(factors[0]);
    for &d in &factors[1..] {
        let name = format!("{}x{}", acc.name, cyclic(d).name);
        acc = product(&acc, &cyclic(d), name, true);
    }
    acc
}

/// Symmetries of the regular `n`-gon, acting on its `n` vertices.
fn dihedral(n: u64) -> Base {
    let degree = n as usize;
    let rotation = cycle_on(degree, &(0..n as u32).collect::<Vec<_>>());
    let reflection: Vec<u32> = (0..n).map(|i| ((n - i) % n) as u32).collect();
    Base {
        name: format!("D{n}"),
        order: 2 * n,
        degree,
        generators: vec![rotation, reflection],
        abelian: false,
    }
}

/// `⟨a, x | a^{2n} = 1, x^2 = a^n, x a x^{-1} = a^{-1}⟩` in its right regular representation.
fn dicyclic(n: u64) -> Base {
    let m = 2 * n;
    let index = |i: u64, j: u64| (i % m + m * j) as u32;
    // (a^i x^j)(a^k x^l)
    let mul = |(i, j): (u64, u64), (k, l): (u64, u64)| -> (u64, u64) {
        if j == 0 {
            ((i + k) % m, l)
        } else {
            let base = (i + m - k % m) % m;
            if l == 0 {
                (base, 1)
            } else {
                ((base + n) % m, 0)
            }
        }
    };
    let right = |s: (u64, u64)| -> Vec<u32> {
        (0..2)
            .flat_map(|j| (0..m).map(move |i| (i, j)))
            .map(|g| {
                let (i, j) = mul(g, s);
                index(i, j)
            })
            .collect()
    };
    Base {
        name: format!("Q{}", 4 * n),
        order: 4 * n,
        degree: (4 * n) as usize,
        generators: vec![right((1, 0)), right((0, 1))],
        abelian: false,
    }
}

fn factorial(n: u64) -> u64 {
    (1..=n).product()
}

fn symmetric(n: u64) -> Base {
    let degree = n as usize;
    Base {
        name: format!("S{n}"),
        order: factorial(n),
        degree,
        generators: vec![
            cycle_on(degree, &[0, 1]),
            cycle_on(degree, &(0..n as u32).collect::<Vec<_>>()),
        ],
        abelian: false,
    }
}

fn alternating(n: u64) -> Base {
    let degree = n as usize;
    let long: Vec<u32> = if n % 2 == 1 {
        (0..n as u32).collect()
    } else {
        (1..n as u32).collect()
    };
    Base {
        name: format!("A{n}"),
        order: factorial(n) / 2,
        degree,
        generators: vec![cycle_on(degree, &[0, 1, 2]), cycle_on(degree, &long)],
        abelian: false,
    }
}

/// Built-in families up to `max_order`: cyclic, abelian (invariant factors),
/// dihedral, dicyclic, symmetric and alternating of degree at most 6, and
/// direct products of two of these with a non-abelian factor.
pub fn builtin_corpus(max_order: u64) -> Vec<GroupSpec> {
    let mut bases: Vec<Base> = (1..=max_order).map(cyclic).collect();
    bases.extend(invariant_factor_lists(max_order).iter().map(|f| abelian(f)));
    bases.extend((3..).take_while(|n| 2 * n <= max_order).map(dihedral));
    bases.extend((2..).take_while(|n| 4 * n <= max_order).map(dicyclic));
    bases.extend((3..=6).map(symmetric).filter(|b| b.order <= max_order));
    bases.extend((4..=6).map(alternating).filter(|b| b.order <= max_order));

    let mut products = Vec::new();
    for (i, a) in bases.iter().enumerate() {
        for b in &bases[i..] {
            if a.order == 1 || b.order == 1 || (a.abelian && b.abelian) || a.order * b.order > max_order {
                continue;
            }
            // keep the non-abelian factor first for readable names
            let (x, y) = if a.abelian { (b, a) } else { (a, b) };
            products.push(product(x, y, format!("{}x{}", x.name, y.name), false));
        }
    }
    bases.extend(products);

    let mut unique: BTreeMap<(u64, String), Base> = BTreeMap::new();
    for b in bases {
        unique.entry((b.order, b.name.clone())).or_insert(b);
    }
    unique
        .into_values()
        .map(|b| GroupSpec::builtin(b.name, b.degree, b.generators))
        .collect()
}
