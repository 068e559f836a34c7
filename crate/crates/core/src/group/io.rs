//! JSON group files. See `docs/formats.md` for the exact layout.

use std::path::Path;

use serde::{Deserialize, Serialize};

use super::{from_permutation_generators, FiniteGroup, DEFAULT_CLOSURE_CAP};
use crate::error::{Error, Result};

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
#[serde(deny_unknown_fields)]
pub struct CayleyFile {
    pub name: String,
    pub order: usize,
    pub table: Vec<Vec<usize>>,
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
#[serde(deny_unknown_fields)]
pub struct PermutationFile {
    pub name: String,
    pub degree: usize,
    pub generators: Vec<Vec<Vec<usize>>>,
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
#[serde(untagged)]
pub enum GroupFile {
    Cayley(CayleyFile),
    Permutation(PermutationFile),
}

impl GroupFile {
    pub fn build(&self) -> Result<FiniteGroup> {
        match self {
            GroupFile::Cayley(c) => {
                if c.table.len() != c.order {
                    return Err(Error::NotAGroup(format!(
                        "declared order {} but table has {} rows",
                        c.order,
                        c.table.len()
                    )));
                }
                FiniteGroup::from_cayley_table(&c.table, c.name.clone())
            }
            GroupFile::Permutation(p) => from_permutation_generators(
                p.degree,
                &p.generators,
                DEFAULT_CLOSURE_CAP,
                p.name.clone(),
            ),
        }
    }
}

impl From<&FiniteGroup> for CayleyFile {
    fn from(g: &FiniteGroup) -> Self {
        CayleyFile {
            name: g.name().to_string(),
            order: g.order(),
            table: g.rows(),
        }
    }
}

pub fn parse_group_json(text: &str) -> Result<FiniteGroup> {
    let file: GroupFile = serde_json::from_str(text)
        .map_err(|e| Error::Parse(format!("not a Cayley-table or permutation file: {e}")))?;
    file.build()
}

pub fn load_group_file(path: impl AsRef<Path>) -> Result<FiniteGroup> {
    let text = std::fs::read_to_string(path.as_ref())?;
    parse_group_json(&text)
}
