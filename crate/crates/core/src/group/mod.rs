//! Finite groups as validated multiplication tables, plus the structural
//! primitives the rest of the crate consumes.
//!
//! Element `0` is always the identity; ingestion relabels when needed.

mod io;
mod perm;
mod set;
mod structure;
mod subgroup;

use std::collections::HashMap;
use std::fmt;
use std::sync::{Mutex, OnceLock};

use num_bigint::BigUint;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};

pub use io::{load_group_file, parse_group_json, CayleyFile, GroupFile, PermutationFile};
pub use perm::{from_permutation_generators, Permutation, DEFAULT_CLOSURE_CAP};
pub use set::ElementSet;
pub use structure::{
    all_subgroups, center, centralizer, conjugacy_classes, derived_subgroup, exponent, is_abelian,
    maximal_abelian_subgroups, nilpotency_class_le2, quotient, ConjugacyData,
};
pub(crate) use subgroup::closure;
pub use subgroup::SubgroupView;

/// Orders at or below this are checked for associativity on every triple.
pub const EXHAUSTIVE_ASSOCIATIVITY_LIMIT: usize = 256;

const ASSOCIATIVITY_SEED: u64 = 0x5eed_cafe;
const SAMPLED_TRIPLES_CAP: usize = 1 << 22;

/// How thoroughly [`FiniteGroup::from_cayley_table_with`] checks associativity.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum Validation {
    /// Exhaustive up to [`EXHAUSTIVE_ASSOCIATIVITY_LIMIT`], otherwise `min(10·n², 2^22)` sampled triples.
    #[default]
    Auto,
    Exhaustive,
}

pub(crate) type KappaMemo = Mutex<HashMap<(ElementSet, u32), BigUint>>;

/// A finite group given by its Cayley table.
pub struct FiniteGroup {
    name: String,
    order: usize,
    /// Row-major: `table[g * order + h] = g·h`.
    table: Vec<u32>,
    inverse: Vec<u32>,
    centralizers: OnceLock<Vec<ElementSet>>,
    classes: OnceLock<ConjugacyData>,
    /// `κ_r` of subgroups, keyed by element set; filled by the engine.
    kappa_memo: KappaMemo,
}

impl Clone for FiniteGroup {
    fn clone(&self) -> Self {
        FiniteGroup {
            name: self.name.clone(),
            order: self.order,
            table: self.table.clone(),
            inverse: self.inverse.clone(),
            centralizers: self.centralizers.clone(),
            classes: self.classes.clone(),
            kappa_memo: Mutex::new(HashMap::new()),
        }
    }
}

impl fmt::Debug for FiniteGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("FiniteGroup")
            .field("name", &self.name)
            .field("order", &self.order)
            .finish()
    }
}

impl FiniteGroup {
    /// Validates a Cayley table given as rows.
    pub fn from_cayley_table(table: &[Vec<usize>], name: impl Into<String>) -> Result<Self> {
        Self::from_cayley_table_with(table, name, Validation::Auto)
    }

    pub fn from_cayley_table_with(
        table: &[Vec<usize>],
        name: impl Into<String>,
        validation: Validation,
    ) -> Result<Self> {
        let n = table.len();
        if n == 0 {
            return Err(Error::NotAGroup("empty table".into()));
        }
        let mut flat = Vec::with_capacity(n * n);
        for (g, row) in table.iter().enumerate() {
            if row.len() != n {
                return Err(Error::NotAGroup(format!(
                    "row {g} has length {} but the table has {n} rows",
                    row.len()
                )));
            }
            for (h, &v) in row.iter().enumerate() {
                if v >= n {
                    return Err(Error::NotAGroup(format!(
                        "entry ({g},{h}) = {v} is out of range"
                    )));
                }
                flat.push(v as u32);
            }
        }
        Self::from_flat_table(flat, n, name, validation)
    }

    /// Validates a row-major table of length `n*n`.
    pub(crate) fn from_flat_table(
        flat: Vec<u32>,
        n: usize,
        name: impl Into<String>,
        validation: Validation,
    ) -> Result<Self> {
        debug_assert_eq!(flat.len(), n * n);
        let at = |g: usize, h: usize| flat[g * n + h] as usize;

        let identity = (0..n)
            .find(|&e| (0..n).all(|h| at(e, h) == h && at(h, e) == h))
            .ok_or_else(|| Error::NotAGroup("no two-sided identity".into()))?;

        let flat = if identity == 0 {
            flat
        } else {
            // Swap labels 0 and `identity`.
            let relabel = |x: usize| -> usize {
                if x == 0 {
                    identity
                } else if x == identity {
                    0
                } else {
                    x
                }
            };
            let mut out = vec![0u32; n * n];
            for g in 0..n {
                for h in 0..n {
                    out[relabel(g) * n + relabel(h)] = relabel(at(g, h)) as u32;
                }
            }
            out
        };
        let at = |g: usize, h: usize| flat[g * n + h] as usize;

        let mut inverse = vec![0u32; n];
        for g in 0..n {
            let mut found = None;
            for h in 0..n {
                if at(g, h) == 0 {
                    if found.is_some() {
                        return Err(Error::NotAGroup(format!(
                            "element {g} has more than one right inverse"
                        )));
                    }
                    found = Some(h);
                }
            }
            match found {
                Some(h) if at(h, g) == 0 => inverse[g] = h as u32,
                Some(h) => {
                    return Err(Error::NotAGroup(format!(
                        "element {g} has right inverse {h} which is not a left inverse"
                    )))
                }
                None => return Err(Error::NotAGroup(format!("element {g} has no inverse"))),
            }
        }

        let check = |a: usize, b: usize, c: usize| -> Result<()> {
            if at(at(a, b), c) != at(a, at(b, c)) {
                Err(Error::NotAGroup(format!(
                    "associativity fails for ({a}, {b}, {c})"
                )))
            } else {
                Ok(())
            }
        };
        if validation == Validation::Exhaustive || n <= EXHAUSTIVE_ASSOCIATIVITY_LIMIT {
            for a in 0..n {
                for b in 0..n {
                    for c in 0..n {
                        check(a, b, c)?;
                    }
                }
            }
        } else {
            let mut rng = ChaCha8Rng::seed_from_u64(ASSOCIATIVITY_SEED);
            for _ in 0..(10 * n * n).min(SAMPLED_TRIPLES_CAP) {
                check(
                    rng.gen_range(0..n),
                    rng.gen_range(0..n),
                    rng.gen_range(0..n),
                )?;
            }
        }

        Ok(FiniteGroup {
            name: name.into(),
            order: n,
            table: flat,
            inverse,
            centralizers: OnceLock::new(),
            classes: OnceLock::new(),
            kappa_memo: Mutex::new(HashMap::new()),
        })
    }

    pub fn trivial() -> Self {
        Self::from_flat_table(vec![0], 1, "C1", Validation::Auto).expect("trivial group")
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn with_name(mut self, name: impl Into<String>) -> Self {
        self.name = name.into();
        self
    }

    pub fn order(&self) -> usize {
        self.order
    }

    #[inline]
    pub fn mul(&self, g: u32, h: u32) -> u32 {
        self.table[g as usize * self.order + h as usize]
    }

    #[inline]
    pub fn inv(&self, g: u32) -> u32 {
        self.inverse[g as usize]
    }

    /// `h·g·h⁻¹`.
    #[inline]
    pub fn conjugate(&self, g: u32, h: u32) -> u32 {
        self.mul(self.mul(h, g), self.inv(h))
    }

    /// `[x, y] = x⁻¹·y⁻¹·x·y`.
    #[inline]
    pub fn commutator(&self, x: u32, y: u32) -> u32 {
        self.mul(self.mul(self.inv(x), self.inv(y)), self.mul(x, y))
    }

    pub fn pow(&self, g: u32, k: u64) -> u32 {
        let mut acc = 0;
        for _ in 0..k {
            acc = self.mul(acc, g);
        }
        acc
    }

    pub fn element_order(&self, g: u32) -> u64 {
        let mut x = g;
        let mut k = 1;
        while x != 0 {
            x = self.mul(x, g);
            k += 1;
        }
        k
    }

    pub fn elements(&self) -> impl Iterator<Item = u32> {
        0..self.order as u32
    }

    pub fn rows(&self) -> Vec<Vec<usize>> {
        self.table
            .chunks(self.order)
            .map(|r| r.iter().map(|&v| v as usize).collect())
            .collect()
    }

    pub fn commutes(&self, g: u32, h: u32) -> bool {
        self.mul(g, h) == self.mul(h, g)
    }

    /// Centralizer bitsets of every single element, computed once.
    pub fn centralizer_sets(&self) -> &[ElementSet] {
        self.centralizers.get_or_init(|| {
            let n = self.order;
            let mut sets: Vec<ElementSet> = (0..n).map(|_| ElementSet::empty(n)).collect();
            for g in 0..n as u32 {
                for h in g..n as u32 {
                    if self.commutes(g, h) {
                        sets[g as usize].insert(h);
                        sets[h as usize].insert(g);
                    }
                }
            }
            sets
        })
    }

    pub fn centralizer_set(&self, g: u32) -> &ElementSet {
        &self.centralizer_sets()[g as usize]
    }

    pub(crate) fn classes_cell(&self) -> &OnceLock<ConjugacyData> {
        &self.classes
    }

    pub(crate) fn kappa_memo(&self) -> &KappaMemo {
        &self.kappa_memo
    }

    /// Direct product `self × other`, elements ordered as `a * |other| + b`.
    pub fn direct_product(&self, other: &FiniteGroup) -> FiniteGroup {
        let (n1, n2) = (self.order, other.order);
        let n = n1 * n2;
        let mut flat = vec![0u32; n * n];
        for a in 0..n1 as u32 {
            for b in 0..n2 as u32 {
                let x = a as usize * n2 + b as usize;
                for c in 0..n1 as u32 {
                    for d in 0..n2 as u32 {
                        let y = c as usize * n2 + d as usize;
                        flat[x * n + y] =
                            (self.mul(a, c) as usize * n2 + other.mul(b, d) as usize) as u32;
                    }
                }
            }
        }
        let mut inverse = vec![0u32; n];
        for a in 0..n1 as u32 {
            for b in 0..n2 as u32 {
                inverse[a as usize * n2 + b as usize] =
                    (self.inv(a) as usize * n2 + other.inv(b) as usize) as u32;
            }
        }
        FiniteGroup {
            name: format!("{}x{}", self.name, other.name),
            order: n,
            table: flat,
            inverse,
            centralizers: OnceLock::new(),
            classes: OnceLock::new(),
            kappa_memo: Mutex::new(HashMap::new()),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn s3_table() -> Vec<Vec<usize>> {
        // Elements as permutations of {0,1,2} in the order below; composition
        // "apply left factor first".
        let perms: Vec<[usize; 3]> = vec![
            [0, 1, 2],
            [1, 0, 2],
            [0, 2, 1],
            [2, 1, 0],
            [1, 2, 0],
            [2, 0, 1],
        ];
        let idx = |p: [usize; 3]| perms.iter().position(|q| *q == p).unwrap();
        perms
            .iter()
            .map(|a| {
                perms
                    .iter()
                    .map(|b| idx([b[a[0]], b[a[1]], b[a[2]]]))
                    .collect()
            })
            .collect()
    }

    #[test]
    fn trivial_group() {
        let g = FiniteGroup::from_cayley_table(&[vec![0]], "C1").unwrap();
        assert_eq!(g.order(), 1);
        assert_eq!(conjugacy_classes(&g).class_count(), 1);
    }

    #[test]
    fn s3_from_table() {
        let g = FiniteGroup::from_cayley_table(&s3_table(), "S3").unwrap();
        assert_eq!(g.order(), 6);
        assert_eq!(conjugacy_classes(&g).class_count(), 3);
    }

    #[test]
    fn missing_inverse_rejected() {
        let err = FiniteGroup::from_cayley_table(&[vec![0, 1], vec![1, 1]], "bad").unwrap_err();
        assert!(
            matches!(err, Error::NotAGroup(ref m) if m.contains("no inverse")),
            "{err}"
        );
    }

    #[test]
    fn identity_relabelled_to_zero() {
        // C3 with identity stored at index 2.
        let t = vec![vec![1, 2, 0], vec![2, 0, 1], vec![0, 1, 2]];
        let g = FiniteGroup::from_cayley_table(&t, "C3").unwrap();
        for h in g.elements() {
            assert_eq!(g.mul(0, h), h);
            assert_eq!(g.mul(h, 0), h);
        }
        assert_eq!(g.element_order(1), 3);
    }

    #[test]
    fn associativity_witness() {
        // Latin square with identity 0 and unique inverses, not associative.
        let t = vec![
            vec![0, 1, 2, 3, 4],
            vec![1, 0, 3, 4, 2],
            vec![2, 4, 0, 1, 3],
            vec![3, 2, 4, 0, 1],
            vec![4, 3, 1, 2, 0],
        ];
        let err = FiniteGroup::from_cayley_table(&t, "loop").unwrap_err();
        assert!(
            matches!(err, Error::NotAGroup(ref m) if m.contains("associativity")),
            "{err}"
        );
    }

    #[test]
    fn ragged_and_out_of_range_rejected() {
        assert!(FiniteGroup::from_cayley_table(&[vec![0, 1], vec![1]], "x").is_err());
        assert!(FiniteGroup::from_cayley_table(&[vec![0, 2], vec![1, 0]], "x").is_err());
    }
}
