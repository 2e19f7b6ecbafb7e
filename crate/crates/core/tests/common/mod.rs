//! Independent oracles: dense linear algebra modulo a large prime on
//! monomial truncations, written from the definitions and sharing nothing
//! with the crate's engines beyond polynomial storage.

#![allow(dead_code)]

use matgerm::family::{Kind, MatrixFamily, PolyMatrix};
use matgerm::ring::{roster, Monomial, Poly, Rational};
use num_bigint::BigInt;
use num_traits::ToPrimitive;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

pub const P: u64 = 2_147_483_647;

pub fn modp(c: &Rational) -> u64 {
    let red = |x: &BigInt| (x % BigInt::from(P)).to_i64().unwrap().rem_euclid(P as i64) as u64;
    red(c.numer()) * pow(red(c.denom()), P - 2) % P
}

pub fn pow(mut b: u64, mut e: u64) -> u64 {
    let mut r = 1;
    b %= P;
    while e > 0 {
        if e & 1 == 1 {
            r = r * b % P;
        }
        b = b * b % P;
        e >>= 1;
    }
    r
}

pub fn rank(mut m: Vec<Vec<u64>>) -> usize {
    let cols = m.first().map_or(0, Vec::len);
    let mut r = 0;
    for c in 0..cols {
        let Some(p) = (r..m.len()).find(|&i| m[i][c] != 0) else {
            continue;
        };
        m.swap(r, p);
        let inv = pow(m[r][c], P - 2);
        for x in m[r].iter_mut() {
            *x = *x * inv % P;
        }
        let pivot = m[r].clone();
        for (i, row) in m.iter_mut().enumerate() {
            if i != r && row[c] != 0 {
                let f = row[c];
                for (x, y) in row.iter_mut().zip(&pivot) {
                    *x = (*x + P - f * y % P) % P;
                }
            }
        }
        r += 1;
    }
    r
}

fn components(kind: Kind, n: usize) -> Vec<(usize, usize)> {
    (0..n)
        .flat_map(|i| (0..n).map(move |j| (i, j)))
        .filter(|&(i, j)| match kind {
            Kind::Sq => true,
            Kind::Sym => i <= j,
            Kind::Sk => i < j,
        })
        .collect()
}

/// Generators of the extended tangent space, straight from the definition.
fn tangent_vectors(m: &MatrixFamily) -> Vec<Vec<Poly>> {
    let n = m.size();
    let comps = components(m.kind(), n);
    let zero = Poly::zero(m.vars());
    let mut gens = Vec::new();
    for v in 0..m.nvars() {
        gens.push(comps.iter().map(|&(i, j)| m.entry(i, j).derivative(v)).collect());
    }
    for a in 0..n {
        for b in 0..n {
            match m.kind() {
                Kind::Sq => {
                    // E_ab M: row a becomes row b of M
                    gens.push(
                        comps
                            .iter()
                            .map(|&(i, j)| if i == a { m.entry(b, j).clone() } else { zero.clone() })
                            .collect(),
                    );
                    // M E_ab: column b becomes column a of M
                    gens.push(
                        comps
                            .iter()
                            .map(|&(i, j)| if j == b { m.entry(i, a).clone() } else { zero.clone() })
                            .collect(),
                    );
                }
                _ => {
                    // Bᵀ M + M B with B = E_ab
                    gens.push(
                        comps
                            .iter()
                            .map(|&(i, j)| {
                                let mut p = zero.clone();
                                if i == b {
                                    p = p + m.entry(a, j);
                                }
                                if j == b {
                                    p = p + m.entry(i, a);
                                }
                                p
                            })
                            .collect(),
                    );
                }
            }
        }
    }
    gens
}

/// `dim O^N / (T + m^{d+1} O^N)` for the module generated by `gens`.
pub fn truncated_codim(gens: &[Vec<Poly>], nvars: usize, d: u32) -> usize {
    let rank_n = gens.first().map_or(0, Vec::len);
    let mut monos = Vec::new();
    for k in 0..=d {
        monos.extend(Monomial::all_of_degree(nvars, k));
    }
    let index = |mo: &Monomial| monos.iter().position(|x| x == mo).unwrap();
    let ncols = rank_n * monos.len();
    let mut rows = Vec::new();
    for g in gens {
        for mo in &monos {
            let mut row = vec![0u64; ncols];
            let mut any = false;
            for (c, p) in g.iter().enumerate() {
                for (t, coef) in p.terms() {
                    let mm = t.mul(mo);
                    if mm.degree() <= d {
                        let k = rank_n * index(&mm) + c;
                        row[k] = (row[k] + modp(coef)) % P;
                        any = true;
                    }
                }
            }
            if any {
                rows.push(row);
            }
        }
    }
    ncols - rank(rows)
}

/// Codimension of a submodule of finite codimension: the truncations grow
/// until two consecutive ones agree, after which Nakayama gives equality.
/// `None` when no stabilization happens up to `max_d`.
pub fn module_codim(gens: &[Vec<Poly>], nvars: usize, max_d: u32) -> Option<usize> {
    let mut prev = truncated_codim(gens, nvars, 0);
    for d in 1..=max_d {
        let cur = truncated_codim(gens, nvars, d);
        if cur == prev {
            return Some(cur);
        }
        prev = cur;
    }
    None
}

pub fn oracle_tau(m: &MatrixFamily, max_d: u32) -> Option<usize> {
    module_codim(&tangent_vectors(m), m.nvars(), max_d)
}

pub fn oracle_milnor(f: &Poly, max_d: u32) -> Option<usize> {
    let gens: Vec<Vec<Poly>> = (0..f.nvars()).map(|v| vec![f.derivative(v)]).collect();
    module_codim(&gens, f.nvars(), max_d)
}

pub fn eval_modp(p: &Poly, point: &[u64]) -> u64 {
    let mut acc = 0;
    for (mono, c) in p.terms() {
        let mut t = modp(c);
        for (x, &e) in point.iter().zip(mono.exponents()) {
            t = t * pow(*x, e as u64) % P;
        }
        acc = (acc + t) % P;
    }
    acc
}

pub fn det_modp(mut a: Vec<Vec<u64>>) -> u64 {
    let n = a.len();
    let mut det = 1;
    for c in 0..n {
        let Some(p) = (c..n).find(|&i| a[i][c] != 0) else {
            return 0;
        };
        if p != c {
            a.swap(p, c);
            det = (P - det) % P;
        }
        det = det * a[c][c] % P;
        let inv = pow(a[c][c], P - 2);
        for i in c + 1..n {
            let f = a[i][c] * inv % P;
            for j in c..n {
                a[i][j] = (a[i][j] + P - f * a[c][j] % P) % P;
            }
        }
    }
    det
}

/// Expansion along the first row.
pub fn pf_modp(a: &[Vec<u64>]) -> u64 {
    let n = a.len();
    if n == 0 {
        return 1;
    }
    let mut acc = 0;
    for j in 1..n {
        if a[0][j] == 0 {
            continue;
        }
        let keep: Vec<usize> = (1..n).filter(|&k| k != j).collect();
        let minor: Vec<Vec<u64>> = keep.iter().map(|&r| keep.iter().map(|&c| a[r][c]).collect()).collect();
        let term = a[0][j] * pf_modp(&minor) % P;
        acc = if j % 2 == 1 { (acc + term) % P } else { (acc + P - term) % P };
    }
    acc
}

pub fn eval_matrix(m: &PolyMatrix, point: &[u64]) -> Vec<Vec<u64>> {
    m.rows().iter().map(|row| row.iter().map(|p| eval_modp(p, point)).collect()).collect()
}

/// Sparse random polynomial with small integer coefficients and degree at
/// most `max_deg`, optionally without constant term.
pub fn random_poly(rng: &mut ChaCha8Rng, vars: &[&str], max_deg: u32, terms: usize, constant: bool) -> Poly {
    let r = roster(vars);
    let mut p = Poly::zero(&r);
    for _ in 0..terms {
        let deg = rng.gen_range(if constant { 0 } else { 1 }..=max_deg);
        let mut e = vec![0u32; vars.len()];
        for _ in 0..deg {
            e[rng.gen_range(0..vars.len())] += 1;
        }
        let c: i64 = rng.gen_range(-3..=3);
        p.add_term(Monomial::from_exponents(e), Rational::from_integer(c.into()));
    }
    p
}

/// Random invertible integer matrix with small entries.
pub fn random_invertible(rng: &mut ChaCha8Rng, n: usize) -> Vec<Vec<i64>> {
    loop {
        let a: Vec<Vec<i64>> = (0..n).map(|_| (0..n).map(|_| rng.gen_range(-2..=2)).collect()).collect();
        let m: Vec<Vec<u64>> = a
            .iter()
            .map(|r| r.iter().map(|&x| x.rem_euclid(P as i64) as u64).collect())
            .collect();
        if det_modp(m) != 0 {
            return a;
        }
    }
}

pub fn const_matrix(vars: &matgerm::ring::Roster, a: &[Vec<i64>]) -> PolyMatrix {
    PolyMatrix::from_fn(vars, a.len(), |i, j| Poly::int(vars, a[i][j]))
}
