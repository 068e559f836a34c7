use std::collections::{BTreeSet, HashSet};

use super::subgroup::closure;
use super::{ElementSet, FiniteGroup, SubgroupView, Validation};
use crate::error::Result;
use crate::numtheory::lcm;

/// Conjugacy class partition. Class ids follow the order of each class's
/// smallest element, which is also its representative.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConjugacyData {
    pub class_of: Vec<u32>,
    pub representatives: Vec<u32>,
    pub class_sizes: Vec<usize>,
}

impl ConjugacyData {
    pub fn class_count(&self) -> usize {
        self.representatives.len()
    }

    pub fn members(&self, class: usize) -> impl Iterator<Item = u32> + '_ {
        self.class_of
            .iter()
            .enumerate()
            .filter(move |(_, &c)| c as usize == class)
            .map(|(g, _)| g as u32)
    }
}

pub fn conjugacy_classes(g: &FiniteGroup) -> &ConjugacyData {
    g.classes_cell().get_or_init(|| {
        let n = g.order();
        let mut class_of = vec![u32::MAX; n];
        let mut representatives = Vec::new();
        let mut class_sizes = Vec::new();
        for x in 0..n as u32 {
            if class_of[x as usize] != u32::MAX {
                continue;
            }
            let id = representatives.len() as u32;
            representatives.push(x);
            let mut size = 0;
            for h in 0..n as u32 {
                let y = g.conjugate(x, h) as usize;
                if class_of[y] == u32::MAX {
                    class_of[y] = id;
                    size += 1;
                }
            }
            class_sizes.push(size);
        }
        ConjugacyData {
            class_of,
            representatives,
            class_sizes,
        }
    })
}

/// Joint centralizer of `xs` (the whole group when `xs` is empty).
pub fn centralizer<'g>(g: &'g FiniteGroup, xs: &[u32]) -> SubgroupView<'g> {
    SubgroupView::whole(g).centralizer_of(xs)
}

pub fn center(g: &FiniteGroup) -> SubgroupView<'_> {
    let n = g.order();
    let cents = g.centralizer_sets();
    let set =
        ElementSet::from_indices(n, (0..n as u32).filter(|&x| cents[x as usize].count() == n));
    SubgroupView::from_set_unchecked(g, set)
}

pub fn derived_subgroup(g: &FiniteGroup) -> SubgroupView<'_> {
    let n = g.order();
    let mut comms = ElementSet::empty(n);
    for x in g.elements() {
        for y in g.elements() {
            comms.insert(g.commutator(x, y));
        }
    }
    let gens = comms.to_vec();
    SubgroupView::from_set_unchecked(g, closure(g, ElementSet::from_indices(n, [0]), &gens))
}

pub fn is_abelian(g: &FiniteGroup) -> bool {
    let n = g.order();
    (0..n as u32).all(|x| (x..n as u32).all(|y| g.commutes(x, y)))
}

pub fn exponent(g: &FiniteGroup) -> u64 {
    g.elements().map(|x| g.element_order(x)).fold(1, lcm)
}

/// True when `G' ≤ Z(G)`.
pub fn nilpotency_class_le2(g: &FiniteGroup) -> bool {
    derived_subgroup(g).set().is_subset(center(g).set())
}

/// `G/N` for normal `N`. Cosets are labelled in order of their smallest
/// element, so the identity coset is 0.
pub fn quotient(g: &FiniteGroup, n: &SubgroupView<'_>) -> Result<FiniteGroup> {
    n.check_normal()?;
    let size = g.order();
    let mut coset_of = vec![u32::MAX; size];
    let mut reps = Vec::new();
    for x in g.elements() {
        if coset_of[x as usize] != u32::MAX {
            continue;
        }
        let id = reps.len() as u32;
        reps.push(x);
        for &m in n.elements() {
            coset_of[g.mul(x, m) as usize] = id;
        }
    }
    let k = reps.len();
    let mut flat = Vec::with_capacity(k * k);
    for &a in &reps {
        for &b in &reps {
            flat.push(coset_of[g.mul(a, b) as usize]);
        }
    }
    FiniteGroup::from_flat_table(flat, k, format!("{}/N", g.name()), Validation::Auto)
}

/// Maximal abelian subgroups, i.e. the sets `S` with `C_G(S) = S`.
///
/// Branches from `K = C_G(T)` for commuting sets `T`: an abelian `K` is a
/// self-centralizing subgroup; otherwise every maximal abelian subgroup
/// inside `K` contains `Z(K)` and some `x ∈ K \ Z(K)`, so recurse on
/// `K ∩ C_G(x)`. Visited `K` are memoized. Intended for `|G| ≤ 2000`.
pub fn maximal_abelian_subgroups(
    g: &FiniteGroup,
    require_contains_center: bool,
) -> Vec<SubgroupView<'_>> {
    let cents = g.centralizer_sets();
    let mut visited: HashSet<ElementSet> = HashSet::new();
    let mut found: BTreeSet<Vec<u32>> = BTreeSet::new();
    let mut stack = vec![ElementSet::full(g.order())];
    while let Some(k) = stack.pop() {
        if !visited.insert(k.clone()) {
            continue;
        }
        let mut zk = k.clone();
        for x in k.iter() {
            zk.intersect_with(&cents[x as usize]);
        }
        if zk == k {
            found.insert(k.to_vec());
            continue;
        }
        for x in k.iter().filter(|&x| !zk.contains(x)) {
            let child = k.intersection(&cents[x as usize]);
            if !visited.contains(&child) {
                stack.push(child);
            }
        }
    }
    let z = center(g);
    found
        .into_iter()
        .map(|els| ElementSet::from_indices(g.order(), els))
        .filter(|s| !require_contains_center || z.set().is_subset(s))
        .map(|s| SubgroupView::from_set_unchecked(g, s))
        .collect()
}

/// Every subgroup, by closing `H ∪ {x}` from the trivial group outward.
/// Brute force; only for small groups (tests cross-check searches with it).
pub fn all_subgroups(g: &FiniteGroup) -> Vec<SubgroupView<'_>> {
    let n = g.order();
    let mut seen: HashSet<ElementSet> = HashSet::new();
    let trivial = ElementSet::from_indices(n, [0]);
    seen.insert(trivial.clone());
    let mut frontier = vec![trivial];
    while let Some(h) = frontier.pop() {
        for x in g.elements() {
            if h.contains(x) {
                continue;
            }
            let bigger = closure(g, h.clone(), &[x]);
            if seen.insert(bigger.clone()) {
                frontier.push(bigger);
            }
        }
    }
    let mut out: Vec<ElementSet> = seen.into_iter().collect();
    out.sort_by(|a, b| {
        a.count()
            .cmp(&b.count())
            .then_with(|| a.to_vec().cmp(&b.to_vec()))
    });
    out.into_iter()
        .map(|s| SubgroupView::from_set_unchecked(g, s))
        .collect()
}
