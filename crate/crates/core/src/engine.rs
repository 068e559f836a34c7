//! `|Comm_r(G)|`, `P_r(G)` and `κ_r(G)` by independent routes.
//!
//! The routes share only the group table and its single-element centralizer
//! bitsets: brute force walks commuting tuples, the κ recursion sums over
//! classes of nested centralizers, the class formulas are the explicit double
//! and triple sums, and [`orbit_count_direct`] partitions tuples into
//! conjugation orbits.

use std::collections::HashMap;

use num_bigint::BigUint;
use num_integer::Integer;
use num_traits::{One, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::group::{center, ElementSet, FiniteGroup, SubgroupView};
use crate::rational::ExactRational;

/// Default cap on estimated elementary operations for enumeration routes.
pub const DEFAULT_BUDGET: u128 = 100_000_000;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Default, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Method {
    Bruteforce,
    #[default]
    KappaRecursion,
    ClassFormula,
}

impl std::str::FromStr for Method {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "bruteforce" => Ok(Method::Bruteforce),
            "kappa" | "kappa_recursion" | "kappa-recursion" => Ok(Method::KappaRecursion),
            "class_formula" | "class-formula" => Ok(Method::ClassFormula),
            _ => Err(Error::Parse(format!("unknown method {s:?}"))),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ProbResult {
    pub r: u32,
    #[serde(serialize_with = "crate::bigser::one")]
    pub comm_count: BigUint,
    pub p_r: ExactRational,
    /// `κ_{r-1} = |G|^{r-1} P_r`.
    #[serde(serialize_with = "crate::bigser::one")]
    pub kappa_prev: BigUint,
    pub method: Method,
}

fn group_power(n: usize, r: u32) -> BigUint {
    num_traits::pow(BigUint::from(n), r as usize)
}

fn brute_estimate(g: &FiniteGroup, r: u32) -> u128 {
    let n = g.order() as u128;
    let words = (g.order() as u128).div_ceil(64);
    let pairs: u128 = g.centralizer_sets().iter().map(|c| c.count() as u128).sum();
    let tuples = match r {
        0 | 1 => 1,
        2 => n,
        _ => pairs.saturating_mul(n.saturating_pow(r - 3)),
    };
    tuples.saturating_mul(words)
}

/// `|Comm_r(G)|` by enumeration: the `i`-th coordinate runs over the joint
/// centralizer of the first `i-1`, and the last is counted by popcount.
pub fn comm_count_bruteforce(g: &FiniteGroup, r: u32) -> Result<BigUint> {
    comm_count_bruteforce_with_budget(g, r, DEFAULT_BUDGET)
}

pub fn comm_count_bruteforce_with_budget(g: &FiniteGroup, r: u32, budget: u128) -> Result<BigUint> {
    if r == 0 {
        return Ok(BigUint::one());
    }
    let estimated = brute_estimate(g, r);
    if estimated > budget {
        return Err(Error::BudgetExceeded { estimated, budget });
    }
    let cents = g.centralizer_sets();
    fn walk(allowed: &ElementSet, k: u32, cents: &[ElementSet]) -> u128 {
        if k == 1 {
            return allowed.count() as u128;
        }
        allowed
            .iter()
            .map(|x| walk(&allowed.intersection(&cents[x as usize]), k - 1, cents))
            .sum()
    }
    Ok(BigUint::from(walk(&ElementSet::full(g.order()), r, cents)))
}

fn is_abelian_set(g: &FiniteGroup, h: &ElementSet) -> bool {
    let cents = g.centralizer_sets();
    h.iter().all(|x| h.is_subset(&cents[x as usize]))
}

/// `κ_r(H)` for a subgroup `H` of `g` given as an element set.
fn kappa_of(g: &FiniteGroup, h: &ElementSet, r: u32) -> BigUint {
    if r == 0 {
        return BigUint::one();
    }
    if is_abelian_set(g, h) {
        return group_power(h.count(), r);
    }
    let cents = g.centralizer_sets();
    if r == 1 {
        // k(H) = Σ_{x∈H} |C_H(x)| / |H|
        let fixed: usize = h
            .iter()
            .map(|x| h.intersection_count(&cents[x as usize]))
            .sum();
        return BigUint::from(fixed / h.count());
    }
    let key = (h.clone(), r);
    if let Some(v) = g.kappa_memo().lock().expect("memo lock").get(&key) {
        return v.clone();
    }
    // Σ_{[x]} κ_{r-1}(C_H(x)) = Σ_{x∈H} |C_H(x)| κ_{r-1}(C_H(x)) / |H|,
    // grouping x by its centralizer.
    let mut by_cent: HashMap<ElementSet, usize> = HashMap::new();
    for x in h.iter() {
        *by_cent
            .entry(h.intersection(&cents[x as usize]))
            .or_default() += 1;
    }
    let mut total = BigUint::zero();
    for (c, mult) in by_cent {
        let weight = BigUint::from(mult * c.count());
        total += kappa_of(g, &c, r - 1) * weight;
    }
    let total = total / h.count();
    // Values are deterministic, so a concurrent duplicate insert is harmless.
    g.kappa_memo()
        .lock()
        .expect("memo lock")
        .insert(key, total.clone());
    total
}

/// `κ_r(G)` by `κ_r(G) = Σ_{[g]} κ_{r-1}(C_G(g))`, `κ_0 = 1`, `κ_1 = k(G)`.
/// Memoized per group on the exact element set of each nested centralizer.
pub fn kappa(g: &FiniteGroup, r: u32) -> BigUint {
    kappa_of(g, &ElementSet::full(g.order()), r)
}

/// `κ_r` of a subgroup, sharing the parent's memo.
pub fn kappa_subgroup(h: &SubgroupView<'_>, r: u32) -> BigUint {
    kappa_of(h.parent(), h.set(), r)
}

fn result_from_count(g: &FiniteGroup, r: u32, comm_count: BigUint, method: Method) -> ProbResult {
    let n = BigUint::from(g.order());
    let (kappa_prev, rem) = comm_count.div_rem(&n);
    assert!(rem.is_zero(), "|Comm_r| must be divisible by |G|");
    let p_r = ExactRational::from_biguint_ratio(&comm_count, &group_power(g.order(), r));
    ProbResult {
        r,
        comm_count,
        p_r,
        kappa_prev,
        method,
    }
}

/// `P_r(G)` with its count and `κ_{r-1}`. The class-formula route covers
/// `r = 2, 3, 4`.
pub fn p_r(g: &FiniteGroup, r: u32, method: Method) -> Result<ProbResult> {
    if r == 0 {
        return Err(Error::InvalidParameters("r must be at least 1".into()));
    }
    let n = BigUint::from(g.order());
    let count = match method {
        Method::Bruteforce => comm_count_bruteforce(g, r)?,
        Method::KappaRecursion => kappa(g, r - 1) * &n,
        Method::ClassFormula => match r {
            1 => n.clone(),
            2 => BigUint::from(SubgroupView::whole(g).class_count()) * &n,
            3 => kappa2_class_formula(g) * &n,
            4 => kappa3_pairs_formula(g) * &n,
            _ => {
                return Err(Error::InvalidParameters(format!(
                    "no class formula for r = {r}; use 2, 3 or 4"
                )))
            }
        },
    };
    Ok(result_from_count(g, r, count, method))
}

/// `Σ_{[g]} k(C_G(g))`.
pub fn kappa2_class_formula(g: &FiniteGroup) -> BigUint {
    let whole = SubgroupView::whole(g);
    whole
        .class_representatives()
        .into_iter()
        .map(|x| BigUint::from(whole.centralizer_of(&[x]).class_count()))
        .sum()
}

/// `Σ_{[g]} Σ_{[h] ⊆ C_G(g)} k(C_G(g, h))`.
pub fn kappa3_pairs_formula(g: &FiniteGroup) -> BigUint {
    let whole = SubgroupView::whole(g);
    let mut total = BigUint::zero();
    for x in whole.class_representatives() {
        let cx = whole.centralizer_of(&[x]);
        for y in cx.class_representatives() {
            total += BigUint::from(cx.centralizer_of(&[y]).class_count());
        }
    }
    total
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SimpleCount {
    pub r: u32,
    /// `κ_{r-1}(G)`.
    #[serde(serialize_with = "crate::bigser::one")]
    pub count: BigUint,
    pub meaning: String,
}

/// Number of simple modules of the loop-groupoid algebra `C[Λ^{r-2}G]`,
/// which is `κ_{r-1}(G) = |G|^{r-1} P_r(G)`.
pub fn loop_groupoid_simple_count(g: &FiniteGroup, r: u32) -> Result<SimpleCount> {
    if r < 2 {
        return Err(Error::InvalidParameters("r must be at least 2".into()));
    }
    let meaning = match r {
        2 => "irreducible representations of G (conjugacy classes)".to_string(),
        3 => "simple modules of the Drinfeld double D(G)".to_string(),
        4 => "simple modules of the quantum triple C[Λ²G]; equals the untwisted torus invariant Z(T⁴)"
            .to_string(),
        _ => format!("simple modules of the loop groupoid algebra C[Λ^{}G]", r - 2),
    };
    Ok(SimpleCount {
        r,
        count: kappa(g, r - 1),
        meaning,
    })
}

/// Number of diagonal-conjugation orbits on `Comm_r(G)`, found by marking
/// every tuple's orbit in a visited bitset over all `|G|^r` index tuples.
pub fn orbit_count_direct(g: &FiniteGroup, r: u32) -> Result<BigUint> {
    orbit_count_direct_with_budget(g, r, DEFAULT_BUDGET)
}

pub fn orbit_count_direct_with_budget(g: &FiniteGroup, r: u32, budget: u128) -> Result<BigUint> {
    if r == 0 {
        return Ok(BigUint::one());
    }
    let n = g.order();
    let space = (n as u128).checked_pow(r).unwrap_or(u128::MAX);
    let z = center(g);
    // Conjugating by central elements does nothing, so a transversal of
    // G/Z(G) suffices.
    let mut transversal = Vec::new();
    let mut covered = ElementSet::empty(n);
    for x in g.elements() {
        if !covered.contains(x) {
            transversal.push(x);
            for &c in z.elements() {
                covered.insert(g.mul(x, c));
            }
        }
    }
    let estimated = brute_estimate(g, r)
        .saturating_add(space / 64)
        .saturating_add(
            brute_estimate(g, r).saturating_mul(transversal.len() as u128 * r as u128)
                / g.order() as u128,
        );
    if estimated > budget || space > (1u128 << 36) {
        return Err(Error::BudgetExceeded { estimated, budget });
    }
    let space = space as usize;
    let mut visited = vec![0u64; space.div_ceil(64)];
    let cents = g.centralizer_sets();
    let mut tuple = vec![0u32; r as usize];
    let mut orbits: u64 = 0;

    let encode = |t: &[u32]| t.iter().fold(0usize, |acc, &x| acc * n + x as usize);
    fn walk(
        depth: usize,
        allowed: &ElementSet,
        tuple: &mut Vec<u32>,
        visit: &mut dyn FnMut(&[u32]),
        cents: &[ElementSet],
    ) {
        for x in allowed.iter() {
            tuple[depth] = x;
            if depth + 1 == tuple.len() {
                visit(tuple);
            } else {
                let next = allowed.intersection(&cents[x as usize]);
                walk(depth + 1, &next, tuple, visit, cents);
            }
        }
    }
    let mut image = vec![0u32; r as usize];
    let mut visit = |t: &[u32]| {
        let idx = encode(t);
        if visited[idx / 64] >> (idx % 64) & 1 == 1 {
            return;
        }
        orbits += 1;
        for &h in &transversal {
            for (dst, &src) in image.iter_mut().zip(t) {
                *dst = g.conjugate(src, h);
            }
            let j = encode(&image);
            visited[j / 64] |= 1 << (j % 64);
        }
    };
    walk(0, &ElementSet::full(n), &mut tuple, &mut visit, cents);
    Ok(BigUint::from(orbits))
}

/// Convenience: `P_r` via the default route.
pub fn prob(g: &FiniteGroup, r: u32) -> ExactRational {
    p_r(g, r, Method::KappaRecursion)
        .expect("kappa recursion has no budget")
        .p_r
}
