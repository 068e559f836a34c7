//! Naive oracles shared by the integration tests. Each one works from the
//! multiplication table alone and shares no code with the library routes.
#![allow(dead_code)]

use commprob::FiniteGroup;

pub fn commute(g: &FiniteGroup, x: u32, y: u32) -> bool {
    g.mul(x, y) == g.mul(y, x)
}

/// `|Comm_r|` by walking all of `G^r` and checking every pair.
pub fn naive_comm_count(g: &FiniteGroup, r: u32) -> u128 {
    fn rec(g: &FiniteGroup, r: usize, tuple: &mut Vec<u32>) -> u128 {
        if tuple.len() == r {
            return 1;
        }
        let mut total = 0;
        for x in 0..g.order() as u32 {
            if tuple.iter().all(|&y| commute(g, x, y)) {
                tuple.push(x);
                total += rec(g, r, tuple);
                tuple.pop();
            }
        }
        total
    }
    rec(g, r as usize, &mut Vec::new())
}

pub fn naive_centralizer(g: &FiniteGroup, xs: &[u32]) -> Vec<u32> {
    (0..g.order() as u32)
        .filter(|&y| xs.iter().all(|&x| commute(g, x, y)))
        .collect()
}

pub fn naive_center_order(g: &FiniteGroup) -> usize {
    let all: Vec<u32> = (0..g.order() as u32).collect();
    naive_centralizer(g, &all).len()
}

pub fn conj(g: &FiniteGroup, x: u32, h: u32) -> u32 {
    let hinv = (0..g.order() as u32).find(|&y| g.mul(h, y) == 0).unwrap();
    g.mul(g.mul(h, x), hinv)
}

/// Conjugacy classes as sorted member lists, in order of smallest member.
pub fn naive_classes(g: &FiniteGroup) -> Vec<Vec<u32>> {
    let n = g.order() as u32;
    let mut seen = vec![false; n as usize];
    let mut out = Vec::new();
    for x in 0..n {
        if seen[x as usize] {
            continue;
        }
        let mut class: Vec<u32> = (0..n).map(|h| conj(g, x, h)).collect();
        class.sort();
        class.dedup();
        for &y in &class {
            seen[y as usize] = true;
        }
        out.push(class);
    }
    out
}

/// Orbits of diagonal conjugation on commuting `r`-tuples, counted by
/// choosing the lexicographically least conjugate of each tuple.
pub fn naive_orbit_count(g: &FiniteGroup, r: u32) -> u128 {
    fn rec(g: &FiniteGroup, r: usize, tuple: &mut Vec<u32>, count: &mut u128) {
        if tuple.len() == r {
            let least = (0..g.order() as u32)
                .map(|h| tuple.iter().map(|&x| conj(g, x, h)).collect::<Vec<_>>())
                .min()
                .unwrap();
            if least == *tuple {
                *count += 1;
            }
            return;
        }
        for x in 0..g.order() as u32 {
            if tuple.iter().all(|&y| commute(g, x, y)) {
                tuple.push(x);
                rec(g, r, tuple, count);
                tuple.pop();
            }
        }
    }
    let mut count = 0;
    rec(g, r as usize, &mut Vec::new(), &mut count);
    count
}

/// `S_n` as a Cayley table over permutations of `0..n` in lexicographic
/// order, composed right to left.
pub fn symmetric_table(n: usize) -> Vec<Vec<usize>> {
    fn perms(n: usize) -> Vec<Vec<usize>> {
        if n == 0 {
            return vec![vec![]];
        }
        let mut out = Vec::new();
        for p in perms(n - 1) {
            for pos in 0..n {
                let mut q = p.clone();
                q.insert(pos, n - 1);
                out.push(q);
            }
        }
        out.sort();
        out
    }
    let ps = perms(n);
    let index = |p: &Vec<usize>| ps.iter().position(|q| q == p).unwrap();
    ps.iter()
        .map(|a| {
            ps.iter()
                .map(|b| index(&(0..n).map(|i| a[b[i]]).collect()))
                .collect()
        })
        .collect()
}

/// `C_n` by addition mod `n`.
pub fn cyclic_table(n: usize) -> Vec<Vec<usize>> {
    (0..n)
        .map(|a| (0..n).map(|b| (a + b) % n).collect())
        .collect()
}

/// Dihedral group of order `2n`: `(i, s)` is `r^i s^s`, index `i + n·s`.
pub fn dihedral_table(n: usize) -> Vec<Vec<usize>> {
    let enc = |i: usize, s: usize| i % n + n * s;
    let mut t = vec![vec![0; 2 * n]; 2 * n];
    for a in 0..2 * n {
        for b in 0..2 * n {
            let (i, s) = (a % n, a / n);
            let (j, u) = (b % n, b / n);
            let k = if s == 0 { i + j } else { i + n - j };
            t[a][b] = enc(k, s ^ u);
        }
    }
    t
}

pub fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

/// `small_catalog(max)` built once per test binary.
pub fn catalog(max: usize) -> &'static [FiniteGroup] {
    use std::collections::HashMap;
    use std::sync::{Mutex, OnceLock};
    static CACHE: OnceLock<Mutex<HashMap<usize, &'static [FiniteGroup]>>> = OnceLock::new();
    let mut cache = CACHE.get_or_init(Default::default).lock().unwrap();
    cache
        .entry(max)
        .or_insert_with(|| Box::leak(commprob::catalog::small_catalog(max).into_boxed_slice()))
}
