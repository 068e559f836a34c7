use std::collections::HashMap;

use super::{FiniteGroup, Validation};
use crate::error::{Error, Result};

pub const DEFAULT_CLOSURE_CAP: usize = 100_000;

/// A permutation of `0..degree`, stored as its image list.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Permutation(Vec<u32>);

impl Permutation {
    pub fn identity(degree: usize) -> Self {
        Permutation((0..degree as u32).collect())
    }

    /// Builds from cycles over points `1..=degree`.
    pub fn from_cycles(degree: usize, cycles: &[Vec<usize>]) -> Result<Self> {
        let mut img: Vec<u32> = (0..degree as u32).collect();
        let mut touched = vec![false; degree];
        for cycle in cycles {
            for &pt in cycle {
                if pt == 0 || pt > degree {
                    return Err(Error::InvalidParameters(format!(
                        "point {pt} outside 1..={degree}"
                    )));
                }
                if touched[pt - 1] {
                    return Err(Error::InvalidParameters(format!(
                        "point {pt} appears twice in one generator"
                    )));
                }
                touched[pt - 1] = true;
            }
            for (i, &pt) in cycle.iter().enumerate() {
                let next = cycle[(i + 1) % cycle.len()];
                img[pt - 1] = (next - 1) as u32;
            }
        }
        Ok(Permutation(img))
    }

    pub fn degree(&self) -> usize {
        self.0.len()
    }

    pub fn image(&self, x: u32) -> u32 {
        self.0[x as usize]
    }

    /// `self` then `other`: `x ↦ other(self(x))`.
    pub fn then(&self, other: &Permutation) -> Permutation {
        Permutation(self.0.iter().map(|&x| other.0[x as usize]).collect())
    }

    pub fn is_identity(&self) -> bool {
        self.0.iter().enumerate().all(|(i, &x)| i as u32 == x)
    }
}

/// Breadth-first closure of `⟨generators⟩ ≤ Sym(degree)`; element 0 is the
/// identity and elements appear in BFS order. The product `g·h` in the
/// resulting table means "apply g, then h".
pub fn from_permutation_generators(
    degree: usize,
    generators: &[Vec<Vec<usize>>],
    cap: usize,
    name: impl Into<String>,
) -> Result<FiniteGroup> {
    let gens = generators
        .iter()
        .map(|c| Permutation::from_cycles(degree, c))
        .collect::<Result<Vec<_>>>()?;
    let mut elements = vec![Permutation::identity(degree)];
    let mut index: HashMap<Permutation, u32> = HashMap::new();
    index.insert(elements[0].clone(), 0);
    // right[g][s] = index of elements[g]·gens[s]
    let mut right: Vec<Vec<u32>> = Vec::new();
    let mut head = 0;
    while head < elements.len() {
        let mut row = Vec::with_capacity(gens.len());
        for s in &gens {
            let y = elements[head].then(s);
            let id = match index.get(&y) {
                Some(&id) => id,
                None => {
                    if elements.len() >= cap {
                        return Err(Error::ClosureExceedsCap { cap });
                    }
                    let id = elements.len() as u32;
                    index.insert(y.clone(), id);
                    elements.push(y);
                    id
                }
            };
            row.push(id);
        }
        right.push(row);
        head += 1;
    }
    if elements.len() > cap {
        return Err(Error::ClosureExceedsCap { cap });
    }

    // Each element is reached from its BFS parent by one generator, so
    // `g·h` is `g` multiplied on the right by the word spelling `h`.
    let n = elements.len();
    let mut word_parent = vec![(0u32, 0usize); n];
    let mut seen = vec![false; n];
    seen[0] = true;
    for g in 0..n {
        for (s, &y) in right[g].iter().enumerate() {
            if !seen[y as usize] {
                seen[y as usize] = true;
                word_parent[y as usize] = (g as u32, s);
            }
        }
    }
    let mut flat = vec![0u32; n * n];
    for g in 0..n {
        flat[g * n] = g as u32;
    }
    // Elements are in BFS order, so a parent's column is filled first.
    for h in 1..n {
        let (parent, s) = word_parent[h];
        for g in 0..n {
            let gp = flat[g * n + parent as usize];
            flat[g * n + h] = right[gp as usize][s];
        }
    }
    FiniteGroup::from_flat_table(flat, n, name, Validation::Auto)
}
