use std::collections::HashMap;

use num_bigint::BigUint;
use num_traits::Zero;

use super::FqField;
use crate::error::{Error, Result};
use crate::group::ElementSet;

/// Default cap on elementary operations for direct enumeration.
pub const DEFAULT_ENUMERATION_BUDGET: u128 = 100_000_000;

/// Counts pairwise-orthogonal `r`-tuples in `F_q^{2n}` under
/// `⟨u,v⟩ = Σ_i (u_i v_{n+i} - u_{n+i} v_i)` by walking the tuples: the
/// `i`-th vector ranges over the joint perp of its predecessors.
pub fn isotropic_tuples_enumerate(field: &FqField, n: u32, r: u32) -> Result<BigUint> {
    isotropic_tuples_enumerate_with_budget(field, n, r, DEFAULT_ENUMERATION_BUDGET)
}

pub fn isotropic_tuples_enumerate_with_budget(
    field: &FqField,
    n: u32,
    r: u32,
    budget: u128,
) -> Result<BigUint> {
    if r == 0 {
        return Err(Error::Domain("r must be at least 1".into()));
    }
    let dim = 2 * n as usize;
    let q = field.q() as u128;
    let size = q.checked_pow(dim as u32).unwrap_or(u128::MAX);
    // Building the orthogonality table costs |V|²·2n.
    let estimated = size.saturating_mul(size).saturating_mul(dim.max(1) as u128);
    if estimated > budget {
        return Err(Error::BudgetExceeded { estimated, budget });
    }
    let size = size as usize;

    let coords: Vec<Vec<u32>> = (0..size)
        .map(|mut v| {
            let mut c = Vec::with_capacity(dim);
            for _ in 0..dim {
                c.push((v % q as usize) as u32);
                v /= q as usize;
            }
            c
        })
        .collect();
    let nn = n as usize;
    let form = |u: &[u32], v: &[u32]| -> u32 {
        let mut acc = 0;
        for i in 0..nn {
            acc = field.add(acc, field.mul(u[i], v[nn + i]));
            acc = field.sub(acc, field.mul(u[nn + i], v[i]));
        }
        acc
    };
    let perps: Vec<ElementSet> = (0..size)
        .map(|u| {
            ElementSet::from_indices(
                size,
                (0..size as u32).filter(|&v| form(&coords[u], &coords[v as usize]) == 0),
            )
        })
        .collect();

    // Joint perps are subspaces, and many prefixes share one; memoize on it.
    let mut memo: HashMap<(ElementSet, u32), BigUint> = HashMap::new();
    Ok(count(&ElementSet::full(size), r, &perps, &mut memo))
}

fn count(
    allowed: &ElementSet,
    k: u32,
    perps: &[ElementSet],
    memo: &mut HashMap<(ElementSet, u32), BigUint>,
) -> BigUint {
    if k == 1 {
        return BigUint::from(allowed.count());
    }
    let key = (allowed.clone(), k);
    if let Some(v) = memo.get(&key) {
        return v.clone();
    }
    let mut total = BigUint::zero();
    for x in allowed.iter() {
        let next = allowed.intersection(&perps[x as usize]);
        total += count(&next, k - 1, perps, memo);
    }
    memo.insert(key, total.clone());
    total
}
