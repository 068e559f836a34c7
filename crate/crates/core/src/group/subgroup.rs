use std::collections::VecDeque;

use super::{ElementSet, FiniteGroup, Validation};
use crate::error::{Error, Result};

/// A subgroup of a parent group, sharing the parent's table.
#[derive(Clone)]
pub struct SubgroupView<'g> {
    parent: &'g FiniteGroup,
    set: ElementSet,
    elements: Vec<u32>,
}

impl<'g> std::fmt::Debug for SubgroupView<'g> {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("SubgroupView")
            .field("parent", &self.parent.name())
            .field("order", &self.order())
            .field("elements", &self.elements)
            .finish()
    }
}

impl<'g> PartialEq for SubgroupView<'g> {
    fn eq(&self, other: &Self) -> bool {
        std::ptr::eq(self.parent, other.parent) && self.set == other.set
    }
}

impl<'g> Eq for SubgroupView<'g> {}

impl<'g> SubgroupView<'g> {
    /// Wraps a set already known to be a subgroup.
    pub(crate) fn from_set_unchecked(parent: &'g FiniteGroup, set: ElementSet) -> Self {
        let elements = set.to_vec();
        SubgroupView {
            parent,
            set,
            elements,
        }
    }

    /// Checks closure and membership of the identity before wrapping.
    pub fn from_set(parent: &'g FiniteGroup, set: ElementSet) -> Result<Self> {
        if set.universe() != parent.order() {
            return Err(Error::InvalidParameters(
                "set universe does not match group".into(),
            ));
        }
        if !set.contains(0) {
            return Err(Error::InvalidParameters(
                "subset does not contain the identity".into(),
            ));
        }
        for a in set.iter() {
            if !set.contains(parent.inv(a)) {
                return Err(Error::InvalidParameters(format!(
                    "not closed under inverse at {a}"
                )));
            }
            for b in set.iter() {
                if !set.contains(parent.mul(a, b)) {
                    return Err(Error::InvalidParameters(format!(
                        "not closed: {a}·{b} leaves the subset"
                    )));
                }
            }
        }
        Ok(Self::from_set_unchecked(parent, set))
    }

    pub fn whole(parent: &'g FiniteGroup) -> Self {
        Self::from_set_unchecked(parent, ElementSet::full(parent.order()))
    }

    pub fn trivial(parent: &'g FiniteGroup) -> Self {
        Self::from_set_unchecked(parent, ElementSet::from_indices(parent.order(), [0]))
    }

    /// The subgroup generated by `gens`.
    pub fn generated_by(parent: &'g FiniteGroup, gens: &[u32]) -> Self {
        let set = closure(parent, ElementSet::from_indices(parent.order(), [0]), gens);
        Self::from_set_unchecked(parent, set)
    }

    pub fn parent(&self) -> &'g FiniteGroup {
        self.parent
    }

    pub fn order(&self) -> usize {
        self.elements.len()
    }

    /// Sorted parent indices.
    pub fn elements(&self) -> &[u32] {
        &self.elements
    }

    pub fn set(&self) -> &ElementSet {
        &self.set
    }

    pub fn into_set(self) -> ElementSet {
        self.set
    }

    pub fn contains(&self, g: u32) -> bool {
        self.set.contains(g)
    }

    /// Local index of a parent element, if it belongs to the subgroup.
    pub fn index_of(&self, g: u32) -> Option<usize> {
        self.elements.binary_search(&g).ok()
    }

    pub fn fingerprint(&self) -> u64 {
        self.set.fingerprint()
    }

    pub fn is_abelian(&self) -> bool {
        let cents = self.parent.centralizer_sets();
        self.elements
            .iter()
            .all(|&x| self.set.is_subset(&cents[x as usize]))
    }

    /// Elements of the subgroup commuting with all of `xs`.
    pub fn centralizer_of(&self, xs: &[u32]) -> SubgroupView<'g> {
        let mut s = self.set.clone();
        for &x in xs {
            s.intersect_with(self.parent.centralizer_set(x));
        }
        Self::from_set_unchecked(self.parent, s)
    }

    pub fn center(&self) -> SubgroupView<'g> {
        self.centralizer_of(&self.elements)
    }

    /// `Ok(())` if normal in the parent, else a witness `(n, g)` with `g·n·g⁻¹ ∉ self`.
    pub fn check_normal(&self) -> Result<()> {
        for g in self.parent.elements() {
            for &x in &self.elements {
                if !self.set.contains(self.parent.conjugate(x, g)) {
                    return Err(Error::NotNormal {
                        conjugator: x,
                        by: g,
                    });
                }
            }
        }
        Ok(())
    }

    pub fn is_normal(&self) -> bool {
        self.check_normal().is_ok()
    }

    /// Standalone group on local indices; the identity stays at index 0.
    pub fn to_group(&self) -> FiniteGroup {
        let k = self.order();
        let mut flat = Vec::with_capacity(k * k);
        for &a in &self.elements {
            for &b in &self.elements {
                let local = self
                    .index_of(self.parent.mul(a, b))
                    .expect("subgroup closed under multiplication");
                flat.push(local as u32);
            }
        }
        FiniteGroup::from_flat_table(
            flat,
            k,
            format!("subgroup of {}", self.parent.name()),
            Validation::Auto,
        )
        .expect("a subgroup of a group is a group")
    }

    /// Representatives (smallest element) of the conjugacy classes of this
    /// subgroup, under conjugation by its own elements.
    pub fn class_representatives(&self) -> Vec<u32> {
        let mut seen = ElementSet::empty(self.parent.order());
        let mut reps = Vec::new();
        for &x in &self.elements {
            if seen.contains(x) {
                continue;
            }
            reps.push(x);
            for &h in &self.elements {
                seen.insert(self.parent.conjugate(x, h));
            }
        }
        reps
    }

    pub fn class_count(&self) -> usize {
        if self.is_abelian() {
            self.order()
        } else {
            self.class_representatives().len()
        }
    }
}

/// Closure of `start ∪ gens` under multiplication (finite, so a subgroup).
pub(crate) fn closure(g: &FiniteGroup, start: ElementSet, gens: &[u32]) -> ElementSet {
    let mut set = start;
    let mut gens: Vec<u32> = gens.to_vec();
    gens.extend(set.iter());
    gens.sort_unstable();
    gens.dedup();
    gens.retain(|&x| x != 0);
    set.insert(0);
    let mut queue: VecDeque<u32> = set.iter().collect();
    while let Some(x) = queue.pop_front() {
        for &s in &gens {
            let y = g.mul(x, s);
            if set.insert(y) {
                queue.push_back(y);
            }
        }
    }
    set
}
