//! Group families by construction, and the `family:key=value,...` spec
//! strings the CLI accepts. Element orderings are documented per builder
//! and in `docs/catalog.md`.

mod spec;

use crate::error::{Error, Result};
use crate::group::{from_permutation_generators, FiniteGroup, Validation, DEFAULT_CLOSURE_CAP};
use crate::numtheory::{gcd, is_prime, pow_mod};
use crate::symplectic::FqField;

pub use spec::{build_from_str, CatalogSpec, Family, GroupExpr};

/// Largest group any constructor will build (tables are `n²` entries).
pub const MAX_CATALOG_ORDER: usize = 4096;

fn check_size(order: u128) -> Result<usize> {
    if order > MAX_CATALOG_ORDER as u128 {
        return Err(Error::InvalidParameters(format!(
            "order {order} exceeds the construction cap {MAX_CATALOG_ORDER}"
        )));
    }
    Ok(order as usize)
}

fn from_rule(n: usize, name: String, mul: impl Fn(usize, usize) -> usize) -> FiniteGroup {
    let mut flat = Vec::with_capacity(n * n);
    for a in 0..n {
        for b in 0..n {
            flat.push(mul(a, b) as u32);
        }
    }
    FiniteGroup::from_flat_table(flat, n, name, Validation::Auto)
        .expect("catalog constructions are groups")
}

/// `C_n`, element `i` is `i mod n`.
pub fn cyclic(n: usize) -> Result<FiniteGroup> {
    if n == 0 {
        return Err(Error::InvalidParameters("cyclic group needs n ≥ 1".into()));
    }
    let n = check_size(n as u128)?;
    Ok(from_rule(n, format!("C{n}"), |a, b| (a + b) % n))
}

/// `C_a ⋊ C_m` with `t a t⁻¹ = a^u`; element `a^i t^j` has index `i + a·j`.
pub fn semidirect_cyclic(a: usize, u: i64, m: usize) -> Result<FiniteGroup> {
    if a == 0 || m == 0 {
        return Err(Error::InvalidParameters("semidirect needs a, m ≥ 1".into()));
    }
    let order = check_size(a as u128 * m as u128)?;
    let u = u.rem_euclid(a as i64) as u64;
    if a > 1 && gcd(u, a as u64) != 1 {
        return Err(Error::InvalidParameters(format!(
            "u = {u} is not a unit mod {a}"
        )));
    }
    if a > 1 && pow_mod(u, m as u64, a as u64) != 1 {
        return Err(Error::InvalidParameters(format!(
            "u^m = {u}^{m} is not 1 mod {a}, so t has no valid action"
        )));
    }
    // upow[j] = u^j mod a
    let upow: Vec<usize> = (0..m)
        .map(|j| pow_mod(u, j as u64, a as u64) as usize)
        .collect();
    let name = format!("C{a}:C{m}(u={u})");
    Ok(from_rule(order, name, |x, y| {
        let (i, j) = (x % a, x / a);
        let (k, l) = (y % a, y / a);
        (i + upow[j] * k) % a + a * ((j + l) % m)
    }))
}

/// Dihedral group of order `2n`, as `C_n ⋊ C_2` by inversion: rotation
/// `r^i` is index `i`, reflection `r^i s` is `i + n`.
pub fn dihedral(n: usize) -> Result<FiniteGroup> {
    Ok(semidirect_cyclic(n, -1, 2)?.with_name(format!("D{}", 2 * n)))
}

/// `Q_8 = ⟨a, b | a⁴, b² = a², bab⁻¹ = a⁻¹⟩`; `a^i b^j` is `i + 4j`.
pub fn quaternion8() -> FiniteGroup {
    from_rule(8, "Q8".into(), |x, y| {
        let (i, j) = (x % 4, x / 4);
        let (k, l) = (y % 4, y / 4);
        let sign_k = if j == 1 { (4 - k) % 4 } else { k };
        let extra = if j == 1 && l == 1 { 2 } else { 0 };
        (i + sign_k + extra) % 4 + 4 * ((j + l) % 2)
    })
}

/// `S_n` generated by `(1 2)` and `(1 2 … n)`, in breadth-first order.
pub fn symmetric(n: usize) -> Result<FiniteGroup> {
    if n == 0 {
        return Err(Error::InvalidParameters(
            "symmetric group needs n ≥ 1".into(),
        ));
    }
    let order: u128 = (1..=n as u128).product();
    check_size(order)?;
    let mut gens = Vec::new();
    if n >= 2 {
        gens.push(vec![vec![1, 2]]);
    }
    if n >= 3 {
        gens.push(vec![(1..=n).collect()]);
    }
    from_permutation_generators(n, &gens, DEFAULT_CLOSURE_CAP, format!("S{n}"))
}

/// Direct product of cyclic groups, in mixed radix with the last factor
/// varying fastest.
pub fn abelian(factors: &[usize]) -> Result<FiniteGroup> {
    let order: u128 = factors.iter().map(|&f| f as u128).product();
    check_size(order)?;
    let mut g = FiniteGroup::trivial();
    let mut names = Vec::new();
    for &f in factors {
        let c = cyclic(f)?;
        names.push(c.name().to_string());
        g = if names.len() == 1 {
            c
        } else {
            g.direct_product(&c)
        };
    }
    if names.is_empty() {
        return Ok(g);
    }
    Ok(g.with_name(names.join("x")))
}

pub fn elementary_abelian(p: u64, k: u32) -> Result<FiniteGroup> {
    if !is_prime(p) {
        return Err(Error::InvalidParameters(format!("{p} is not prime")));
    }
    abelian(&vec![p as usize; k as usize])
}

/// `C_{p^e} ⋊ C_p` with `t a t⁻¹ = a^{1+p^{e-1}}`, for `e ≥ 2`.
pub fn modular_pe(p: u64, e: u32) -> Result<FiniteGroup> {
    if !is_prime(p) || e < 2 {
        return Err(Error::InvalidParameters(
            "modular_pe needs prime p and e ≥ 2".into(),
        ));
    }
    let a = p
        .checked_pow(e)
        .filter(|&a| a as u128 * p as u128 <= MAX_CATALOG_ORDER as u128);
    let a = a.ok_or_else(|| Error::InvalidParameters("modular_pe order too large".into()))?;
    let u = 1 + p.pow(e - 1);
    Ok(semidirect_cyclic(a as usize, u as i64, p as usize)?.with_name(format!("M(p={p},e={e})")))
}

/// `F_p^{2d} ⋊ C_p`, the generator acting by `d` Jordan blocks
/// `(x, y) ↦ (x + y, y)`. Element `(v, j)` has index `enc(v) + p^{2d}·j`,
/// where `enc(v) = Σ v_i p^i` and block `b` occupies coordinates `2b, 2b+1`.
pub fn build_jordan_semidirect(p: u64, d: u32) -> Result<FiniteGroup> {
    if !is_prime(p) || d == 0 {
        return Err(Error::InvalidParameters(
            "jordan needs prime p and d ≥ 1".into(),
        ));
    }
    let order = check_size((p as u128).pow(2 * d + 1))?;
    let p = p as usize;
    let vsize = order / p;
    let dim = 2 * d as usize;
    let digits = |mut x: usize| -> Vec<usize> {
        let mut v = vec![0; dim];
        for c in v.iter_mut() {
            *c = x % p;
            x /= p;
        }
        v
    };
    let enc = |v: &[usize]| v.iter().rev().fold(0, |acc, &c| acc * p + c);
    let vecs: Vec<Vec<usize>> = (0..vsize).map(digits).collect();
    // act[j][w] = J^j w
    let act: Vec<Vec<usize>> = (0..p)
        .map(|j| {
            vecs.iter()
                .map(|w| {
                    let mut out = w.clone();
                    for b in 0..d as usize {
                        out[2 * b] = (w[2 * b] + j * w[2 * b + 1]) % p;
                    }
                    enc(&out)
                })
                .collect()
        })
        .collect();
    let name = format!("Jordan(p={p},d={d})");
    Ok(from_rule(order, name, |x, y| {
        let (v, j) = (x % vsize, x / vsize);
        let (w, k) = (y % vsize, y / vsize);
        let jw = &vecs[act[j][w]];
        let sum: Vec<usize> = vecs[v].iter().zip(jw).map(|(a, b)| (a + b) % p).collect();
        enc(&sum) + vsize * ((j + k) % p)
    }))
}

/// The `F_q`-Heisenberg group of rank `n`, `q = p^m` with `p` odd: pairs
/// `(v, z) ∈ F_q^{2n} × F_q` with `(v,z)(w,z') = (v+w, z+z'+½β(v,w))` and
/// `β(v,w) = Σ_i (v_i w_{n+i} - v_{n+i} w_i)`. Index is
/// `Σ_i v_i q^i + z q^{2n}`, field elements encoded as in [`FqField`].
pub fn build_heisenberg(p: u64, m: u32, n: u32) -> Result<FiniteGroup> {
    if !is_prime(p) || p == 2 {
        return Err(Error::InvalidParameters(
            "heisenberg needs an odd prime p (exponent 2 forces abelian)".into(),
        ));
    }
    if m == 0 || n == 0 {
        return Err(Error::InvalidParameters(
            "heisenberg needs m ≥ 1 and n ≥ 1".into(),
        ));
    }
    let q = (p as u128).pow(m);
    let order = check_size(q.pow(2 * n + 1))?;
    let field = FqField::new(q as u64)?;
    let half = field.half().expect("odd characteristic");
    let q = q as usize;
    let nn = n as usize;
    let vsize = order / q;
    let vecs: Vec<Vec<u32>> = (0..vsize)
        .map(|mut x| {
            let mut v = Vec::with_capacity(2 * nn);
            for _ in 0..2 * nn {
                v.push((x % q) as u32);
                x /= q;
            }
            v
        })
        .collect();
    let enc = |v: &[u32]| v.iter().rev().fold(0usize, |acc, &c| acc * q + c as usize);
    let name = if m == 1 {
        format!("Heis(p={p},n={n})")
    } else {
        format!("Heis(q={q},n={n})")
    };
    Ok(from_rule(order, name, |x, y| {
        let (v, z) = (&vecs[x % vsize], (x / vsize) as u32);
        let (w, zz) = (&vecs[y % vsize], (y / vsize) as u32);
        let mut beta = 0;
        for i in 0..nn {
            beta = field.add(beta, field.mul(v[i], w[nn + i]));
            beta = field.sub(beta, field.mul(v[nn + i], w[i]));
        }
        let sum: Vec<u32> = v.iter().zip(w).map(|(&a, &b)| field.add(a, b)).collect();
        let zsum = field.add(field.add(z, zz), field.mul(half, beta));
        enc(&sum) + vsize * zsum as usize
    }))
}

/// The Frobenius group of order 20, `C_5 ⋊ C_4` with `u = 2`.
pub fn frobenius20() -> FiniteGroup {
    semidirect_cyclic(5, 2, 4).expect("valid").with_name("F20")
}

pub fn s3_times_cm(m: usize) -> Result<FiniteGroup> {
    let s3 = dihedral(3)?.with_name("S3");
    let c = cyclic(m)?;
    check_size(6 * m as u128)?;
    Ok(s3.direct_product(&c))
}

/// Invariant-factor lists `n_1 | n_2 | … | n_k` (each ≥ 2, `k ≥ 2`) with
/// product `order`; each is a distinct non-cyclic abelian group.
fn noncyclic_abelian_types(order: usize) -> Vec<Vec<usize>> {
    fn rec(rest: usize, min_div: usize, prefix: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if rest == 1 {
            if prefix.len() >= 2 {
                out.push(prefix.clone());
            }
            return;
        }
        for d in 2..=rest {
            if !rest.is_multiple_of(d) {
                continue;
            }
            if let Some(&last) = prefix.last() {
                if d % last != 0 {
                    continue;
                }
            }
            if d < min_div {
                continue;
            }
            prefix.push(d);
            rec(rest / d, d, prefix, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    rec(order, 2, &mut Vec::new(), &mut out);
    out
}

/// A deterministic test corpus of groups of order at most `max_order`. Not a
/// census: it covers the cyclic, dihedral and abelian groups, `Q_8`, `S_4`,
/// metacyclic `C_a ⋊ C_m`, the modular, Jordan and Heisenberg families, and
/// a few direct products with cyclic factors.
pub fn small_catalog(max_order: usize) -> Vec<FiniteGroup> {
    let max = max_order.min(MAX_CATALOG_ORDER);
    let mut out: Vec<FiniteGroup> = Vec::new();
    let mut push = |g: Result<FiniteGroup>| {
        if let Ok(g) = g {
            if g.order() <= max && !out.iter().any(|h| h.name() == g.name()) {
                out.push(g);
            }
        }
    };
    for n in 1..=max {
        push(cyclic(n));
    }
    for n in 3..=max / 2 {
        push(dihedral(n));
    }
    for order in 4..=max {
        for factors in noncyclic_abelian_types(order) {
            push(abelian(&factors));
        }
    }
    if max >= 8 {
        push(Ok(quaternion8()));
    }
    if max >= 24 {
        push(symmetric(4));
    }
    // C_a ⋊ C_m, one u per cyclic subgroup ⟨u⟩ of units, skipping the
    // trivial action and the dihedral case.
    for a in 3..=max {
        for m in 2..=max / a {
            let mut seen: Vec<Vec<u64>> = Vec::new();
            for u in 2..a as u64 {
                if gcd(u, a as u64) != 1 || pow_mod(u, m as u64, a as u64) != 1 {
                    continue;
                }
                if m == 2 && u == a as u64 - 1 {
                    continue;
                }
                let mut sub: Vec<u64> = (0..m as u64).map(|j| pow_mod(u, j, a as u64)).collect();
                sub.sort_unstable();
                sub.dedup();
                if seen.contains(&sub) {
                    continue;
                }
                seen.push(sub);
                push(semidirect_cyclic(a, u as i64, m));
            }
        }
    }
    for p in [2u64, 3, 5, 7] {
        for e in 2..8 {
            if (p as usize).pow(e + 1) <= max && !(p == 2 && e == 2) {
                push(modular_pe(p, e));
            }
        }
        for d in 1..4 {
            if (p as usize).pow(2 * d + 1) <= max {
                push(build_jordan_semidirect(p, d));
            }
        }
    }
    for p in [3u64, 5, 7] {
        for m in 1..4 {
            for n in 1..4 {
                if ((p as usize).pow(m)).pow(2 * n + 1) <= max {
                    push(build_heisenberg(p, m, n));
                }
            }
        }
    }
    for m in 2..=max / 6 {
        push(s3_times_cm(m));
    }
    let d8 = dihedral(4).expect("valid");
    let q8 = quaternion8();
    for k in 2..=max / 8 {
        let c = cyclic(k).expect("valid");
        push(Ok(d8.direct_product(&c)));
        push(Ok(q8.direct_product(&c)));
    }
    if max >= 54 {
        let h = build_heisenberg(3, 1, 1).expect("valid");
        for k in 2..=max / 27 {
            push(Ok(h.direct_product(&cyclic(k).expect("valid"))));
        }
    }
    out
}
