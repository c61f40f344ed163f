//! Dense linear algebra over a prime field `F_p` with `p < 2^32`.

use crate::zmod::{factorize, mod_pow};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct PrimeField {
    p: u64,
}

impl PrimeField {
    pub fn new(p: u64) -> Self {
        debug_assert!(p < (1 << 32));
        PrimeField { p }
    }

    pub fn modulus(&self) -> u64 {
        self.p
    }

    #[inline]
    pub fn add(&self, a: u64, b: u64) -> u64 {
        let s = a + b;
        if s >= self.p {
            s - self.p
        } else {
            s
        }
    }

    #[inline]
    pub fn sub(&self, a: u64, b: u64) -> u64 {
        if a >= b {
            a - b
        } else {
            a + self.p - b
        }
    }

    #[inline]
    pub fn mul(&self, a: u64, b: u64) -> u64 {
        a * b % self.p
    }

    pub fn neg(&self, a: u64) -> u64 {
        if a == 0 {
            0
        } else {
            self.p - a
        }
    }

    pub fn pow(&self, a: u64, e: u64) -> u64 {
        mod_pow(a, e, self.p)
    }

    pub fn inv(&self, a: u64) -> u64 {
        debug_assert!(a % self.p != 0, "inverse of zero");
        self.pow(a, self.p - 2)
    }

    pub fn from_i64(&self, a: i64) -> u64 {
        a.rem_euclid(self.p as i64) as u64
    }

    /// Smallest generator of the multiplicative group.
    /// `Σ a_i b_i`, reducing only when the running sum could overflow.
    pub fn dot(&self, a: &[u64], b: &[u64]) -> u64 {
        let p = self.modulus();
        let bound = u64::MAX - (p - 1) * (p - 1);
        let mut acc = 0u64;
        for (&x, &y) in a.iter().zip(b) {
            if acc > bound {
                acc %= p;
            }
            acc += x * y;
        }
        acc % p
    }

    pub fn primitive_root(&self) -> u64 {
        let factors = factorize(self.p - 1);
        (2..self.p)
            .find(|&g| factors.iter().all(|&(q, _)| self.pow(g, (self.p - 1) / q) != 1))
            .unwrap_or(1)
    }

    /// The root `x` of `x^2 = a` with `0 < x < p/2`, if any.
    pub fn small_sqrt(&self, a: u64) -> Option<u64> {
        (1..=self.p / 2).find(|&x| self.mul(x, x) == a % self.p)
    }
}

/// Row-major dense matrix.
pub type Matrix = Vec<Vec<u64>>;

/// Basis of the right null space `{v : M v = 0}` of a `rows × cols` matrix.
pub fn nullspace(f: &PrimeField, m: &Matrix, cols: usize) -> Vec<Vec<u64>> {
    let mut a: Matrix = m.clone();
    let rows = a.len();
    let mut pivot_cols = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let Some(pr) = (r..rows).find(|&i| a[i][c] != 0) else {
            continue;
        };
        a.swap(r, pr);
        let inv = f.inv(a[r][c]);
        for x in a[r].iter_mut() {
            *x = f.mul(*x, inv);
        }
        for i in 0..rows {
            if i != r && a[i][c] != 0 {
                let factor = a[i][c];
                let (pivot_row, row) = if i < r {
                    let (lo, hi) = a.split_at_mut(r);
                    (&hi[0], &mut lo[i])
                } else {
                    let (lo, hi) = a.split_at_mut(i);
                    (&lo[r], &mut hi[0])
                };
                for (x, &y) in row.iter_mut().zip(pivot_row.iter()).skip(c) {
                    *x = f.sub(*x, f.mul(factor, y));
                }
            }
        }
        pivot_cols.push(c);
        r += 1;
    }
    let mut is_pivot = vec![false; cols];
    for &c in &pivot_cols {
        is_pivot[c] = true;
    }
    let mut basis = Vec::new();
    for free in (0..cols).filter(|&c| !is_pivot[c]) {
        let mut v = vec![0u64; cols];
        v[free] = 1;
        for (row, &pc) in pivot_cols.iter().enumerate() {
            v[pc] = f.neg(a[row][free]);
        }
        basis.push(v);
    }
    basis
}

/// Column-echelon form of a basis: returns `(basis', pivots)` with
/// `basis'[b][pivots[a]] = δ_ab` spanning the same space.
pub fn echelon_basis(f: &PrimeField, basis: &[Vec<u64>]) -> (Vec<Vec<u64>>, Vec<usize>) {
    let mut vs: Vec<Vec<u64>> = basis.to_vec();
    let len = vs.first().map_or(0, Vec::len);
    let mut pivots = Vec::new();
    let mut done = 0;
    for pos in 0..len {
        if done == vs.len() {
            break;
        }
        let Some(sel) = (done..vs.len()).find(|&b| vs[b][pos] != 0) else {
            continue;
        };
        vs.swap(done, sel);
        let inv = f.inv(vs[done][pos]);
        for x in vs[done].iter_mut() {
            *x = f.mul(*x, inv);
        }
        let pivot = vs[done].clone();
        for (b, v) in vs.iter_mut().enumerate() {
            if b != done && v[pos] != 0 {
                let factor = v[pos];
                for (x, &y) in v.iter_mut().zip(pivot.iter()) {
                    *x = f.sub(*x, f.mul(factor, y));
                }
            }
        }
        pivots.push(pos);
        done += 1;
    }
    (vs, pivots)
}

/// Upper Hessenberg form `H = S^{-1} A S` together with the transform `S`.
pub fn hessenberg(f: &PrimeField, m: &Matrix) -> (Matrix, Matrix) {
    let n = m.len();
    let mut a = m.clone();
    let mut s: Matrix = (0..n)
        .map(|i| (0..n).map(|j| u64::from(i == j)).collect())
        .collect();
    for col in 0..n.saturating_sub(2) {
        let Some(piv) = (col + 1..n).find(|&i| a[i][col] != 0) else {
            continue;
        };
        if piv != col + 1 {
            a.swap(piv, col + 1);
            for row in a.iter_mut() {
                row.swap(piv, col + 1);
            }
            for row in s.iter_mut() {
                row.swap(piv, col + 1);
            }
        }
        let inv = f.inv(a[col + 1][col]);
        for i in col + 2..n {
            if a[i][col] == 0 {
                continue;
            }
            let t = f.mul(a[i][col], inv);
            // row_i -= t * row_{col+1}
            let (upper, lower) = a.split_at_mut(i);
            let pivot_row = &upper[col + 1];
            for (x, &y) in lower[0].iter_mut().zip(pivot_row.iter()) {
                *x = f.sub(*x, f.mul(t, y));
            }
            // column_{col+1} += t * column_i, in both A and S
            for row in a.iter_mut().chain(s.iter_mut()) {
                let v = f.mul(t, row[i]);
                row[col + 1] = f.add(row[col + 1], v);
            }
        }
    }
    (a, s)
}

/// Characteristic polynomial of an upper Hessenberg matrix, lowest degree first.
pub fn hessenberg_charpoly(f: &PrimeField, a: &Matrix) -> Vec<u64> {
    let n = a.len();
    let mut polys: Vec<Vec<u64>> = vec![vec![1]];
    for k in 0..n {
        // p_{k+1} = (x - a_kk) p_k - Σ_{i<k} a_ik (Π_{j=i+1..k} a_{j,j-1}) p_i
        let mut next = vec![0u64; k + 2];
        for (d, &c) in polys[k].iter().enumerate() {
            next[d + 1] = f.add(next[d + 1], c);
            next[d] = f.sub(next[d], f.mul(a[k][k], c));
        }
        let mut prod = 1u64;
        for i in (0..k).rev() {
            prod = f.mul(prod, a[i + 1][i]);
            if prod == 0 {
                break;
            }
            let coeff = f.mul(a[i][k], prod);
            if coeff == 0 {
                continue;
            }
            for (d, &c) in polys[i].iter().enumerate() {
                next[d] = f.sub(next[d], f.mul(coeff, c));
            }
        }
        polys.push(next);
    }
    polys.pop().unwrap()
}

/// Characteristic polynomial `det(xI - A)` of a square matrix, lowest
/// degree first, via reduction to Hessenberg form.
pub fn charpoly(f: &PrimeField, m: &Matrix) -> Vec<u64> {
    hessenberg_charpoly(f, &hessenberg(f, m).0)
}

/// True iff no subdiagonal entry of a Hessenberg matrix vanishes; then every
/// eigenvalue has a one-dimensional eigenspace.
pub fn is_unreduced(h: &Matrix) -> bool {
    (1..h.len()).all(|i| h[i][i - 1] != 0)
}

/// Eigenvector of an unreduced Hessenberg matrix for the eigenvalue `lambda`,
/// by back substitution from the last coordinate. `None` if `lambda` is not
/// an eigenvalue.
pub fn hessenberg_eigenvector(f: &PrimeField, h: &Matrix, lambda: u64) -> Option<Vec<u64>> {
    let n = h.len();
    let mut x = vec![0u64; n];
    x[n - 1] = 1;
    let entry = |i: usize, j: usize| if i == j { f.sub(h[i][j], lambda) } else { h[i][j] };
    for i in (1..n).rev() {
        let mut acc = 0u64;
        for j in i..n {
            acc = f.add(acc, f.mul(entry(i, j), x[j]));
        }
        x[i - 1] = f.mul(f.neg(acc), f.inv(h[i][i - 1]));
    }
    let first = (0..n).fold(0u64, |acc, j| f.add(acc, f.mul(entry(0, j), x[j])));
    (first == 0).then_some(x)
}

/// Distinct roots of a polynomial in `F_p`, each with its multiplicity.
pub fn roots_with_multiplicity(f: &PrimeField, poly: &[u64]) -> Vec<(u64, usize)> {
    let mut out = Vec::new();
    let mut current = poly.to_vec();
    for x in 0..f.modulus() {
        let mut mult = 0;
        loop {
            if current.len() <= 1 {
                break;
            }
            let (q, r) = divide_linear(f, &current, x);
            if r != 0 {
                break;
            }
            current = q;
            mult += 1;
        }
        if mult > 0 {
            out.push((x, mult));
        }
        if current.len() <= 1 {
            break;
        }
    }
    out
}

/// Synthetic division by `(t - x)`: returns quotient and remainder.
fn divide_linear(f: &PrimeField, poly: &[u64], x: u64) -> (Vec<u64>, u64) {
    let deg = poly.len() - 1;
    let mut q = vec![0u64; deg];
    let mut carry = 0u64;
    for d in (0..=deg).rev() {
        let v = f.add(poly[d], f.mul(carry, x));
        if d == 0 {
            return (q, v);
        }
        q[d - 1] = v;
        carry = v;
    }
    unreachable!()
}
