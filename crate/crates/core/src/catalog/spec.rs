use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use super::*;
use crate::error::{Error, Result};
use crate::group::FiniteGroup;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Family {
    Cyclic,
    Dihedral,
    Quaternion8,
    Symmetric,
    ElementaryAbelian,
    DirectProduct,
    SemidirectCyclic,
    SemidirectMatrix,
    Heisenberg,
    ModularPe,
    Frobenius20,
    S3TimesCm,
}

impl Family {
    pub fn parse(s: &str) -> Result<Family> {
        Ok(match s {
            "cyclic" => Family::Cyclic,
            "dihedral" => Family::Dihedral,
            "quaternion8" | "q8" => Family::Quaternion8,
            "symmetric" => Family::Symmetric,
            "elementary_abelian" => Family::ElementaryAbelian,
            "direct_product" | "abelian" => Family::DirectProduct,
            "semidirect_cyclic" | "semidirect" => Family::SemidirectCyclic,
            "semidirect_matrix" | "jordan" => Family::SemidirectMatrix,
            "heisenberg" => Family::Heisenberg,
            "modular_pe" => Family::ModularPe,
            "frobenius20" => Family::Frobenius20,
            "s3_times_cm" => Family::S3TimesCm,
            other => return Err(Error::Parse(format!("unknown family {other:?}"))),
        })
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Family::Cyclic => "cyclic",
            Family::Dihedral => "dihedral",
            Family::Quaternion8 => "quaternion8",
            Family::Symmetric => "symmetric",
            Family::ElementaryAbelian => "elementary_abelian",
            Family::DirectProduct => "direct_product",
            Family::SemidirectCyclic => "semidirect_cyclic",
            Family::SemidirectMatrix => "semidirect_matrix",
            Family::Heisenberg => "heisenberg",
            Family::ModularPe => "modular_pe",
            Family::Frobenius20 => "frobenius20",
            Family::S3TimesCm => "s3_times_cm",
        }
    }

    /// Required keys and optional keys with defaults.
    fn keys(self) -> (&'static [&'static str], &'static [(&'static str, i64)]) {
        match self {
            Family::Cyclic | Family::Dihedral | Family::Symmetric => (&["n"], &[]),
            Family::Quaternion8 | Family::Frobenius20 => (&[], &[]),
            Family::ElementaryAbelian => (&["p", "k"], &[]),
            Family::DirectProduct => (&[], &[]),
            Family::SemidirectCyclic => (&["a", "u", "m"], &[]),
            Family::SemidirectMatrix => (&["p", "d"], &[]),
            Family::Heisenberg => (&["p", "n"], &[("m", 1)]),
            Family::ModularPe => (&["p", "e"], &[]),
            Family::S3TimesCm => (&["m"], &[]),
        }
    }
}

/// One family with its integer parameters, e.g. `heisenberg:p=3,m=1,n=2`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CatalogSpec {
    pub family: Family,
    pub params: BTreeMap<String, i64>,
}

/// A `*`-separated direct product of specs.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GroupExpr(pub Vec<CatalogSpec>);

fn parse_int(key: &str, v: &str) -> Result<i64> {
    v.trim()
        .parse::<i64>()
        .map_err(|_| Error::Parse(format!("value of {key:?} is not an integer: {v:?}")))
}

/// `n1, n2, …` keys of `direct_product`, in numeric order.
fn factor_keys(params: &BTreeMap<String, i64>) -> Result<Vec<usize>> {
    let mut keyed = Vec::new();
    for (k, &v) in params {
        let idx = k
            .strip_prefix('n')
            .and_then(|s| s.parse::<u32>().ok())
            .ok_or_else(|| Error::Parse(format!("direct_product keys are n1, n2, …; got {k:?}")))?;
        if v < 1 {
            return Err(Error::InvalidParameters(format!("{k} = {v} must be ≥ 1")));
        }
        keyed.push((idx, v as usize));
    }
    keyed.sort();
    Ok(keyed.into_iter().map(|(_, v)| v).collect())
}

impl FromStr for CatalogSpec {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let (fam, rest) = match s.split_once(':') {
            Some((f, r)) => (f.trim(), r.trim()),
            None => (s, ""),
        };
        let family = Family::parse(fam)?;
        let mut params = BTreeMap::new();
        for item in rest.split(',').map(str::trim).filter(|x| !x.is_empty()) {
            let (k, v) = item
                .split_once('=')
                .ok_or_else(|| Error::Parse(format!("expected key=value, got {item:?}")))?;
            let k = k.trim().to_string();
            let v = parse_int(&k, v)?;
            if params.insert(k.clone(), v).is_some() {
                return Err(Error::Parse(format!("duplicate key {k:?}")));
            }
        }
        let (required, optional) = family.keys();
        if family == Family::DirectProduct {
            factor_keys(&params)?;
        } else {
            for key in params.keys() {
                if !required.contains(&key.as_str()) && !optional.iter().any(|(k, _)| k == key) {
                    return Err(Error::Parse(format!(
                        "unknown key {key:?} for family {}",
                        family.as_str()
                    )));
                }
            }
            for key in required {
                if !params.contains_key(*key) {
                    return Err(Error::Parse(format!(
                        "family {} requires key {key:?}",
                        family.as_str()
                    )));
                }
            }
            for (k, d) in optional {
                params.entry(k.to_string()).or_insert(*d);
            }
        }
        Ok(CatalogSpec { family, params })
    }
}

impl fmt::Display for CatalogSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.family.as_str())?;
        let mut entries: Vec<(&String, &i64)> = self.params.iter().collect();
        if self.family == Family::DirectProduct {
            entries.sort_by_key(|(k, _)| k[1..].parse::<u32>().unwrap_or(u32::MAX));
        }
        for (i, (k, v)) in entries.iter().enumerate() {
            write!(f, "{}{k}={v}", if i == 0 { ':' } else { ',' })?;
        }
        Ok(())
    }
}

fn nonneg(params: &BTreeMap<String, i64>, key: &str) -> Result<u64> {
    let v = params[key];
    if v < 0 {
        return Err(Error::InvalidParameters(format!(
            "{key} = {v} must be non-negative"
        )));
    }
    Ok(v as u64)
}

impl CatalogSpec {
    pub fn build(&self) -> Result<FiniteGroup> {
        let p = &self.params;
        let get = |k: &str| nonneg(p, k);
        match self.family {
            Family::Cyclic => cyclic(get("n")? as usize),
            Family::Dihedral => {
                let n = get("n")? as usize;
                if n == 0 {
                    return Err(Error::InvalidParameters("dihedral needs n ≥ 1".into()));
                }
                dihedral(n)
            }
            Family::Quaternion8 => Ok(quaternion8()),
            Family::Symmetric => symmetric(get("n")? as usize),
            Family::ElementaryAbelian => elementary_abelian(get("p")?, get("k")? as u32),
            Family::DirectProduct => abelian(&factor_keys(p)?),
            Family::SemidirectCyclic => {
                semidirect_cyclic(get("a")? as usize, p["u"], get("m")? as usize)
            }
            Family::SemidirectMatrix => build_jordan_semidirect(get("p")?, get("d")? as u32),
            Family::Heisenberg => build_heisenberg(get("p")?, get("m")? as u32, get("n")? as u32),
            Family::ModularPe => modular_pe(get("p")?, get("e")? as u32),
            Family::Frobenius20 => Ok(frobenius20()),
            Family::S3TimesCm => s3_times_cm(get("m")? as usize),
        }
    }
}

impl FromStr for GroupExpr {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let parts = s
            .split('*')
            .map(str::parse)
            .collect::<Result<Vec<CatalogSpec>>>()?;
        Ok(GroupExpr(parts))
    }
}

impl fmt::Display for GroupExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, s) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str("*")?;
            }
            write!(f, "{s}")?;
        }
        Ok(())
    }
}

impl GroupExpr {
    pub fn build(&self) -> Result<FiniteGroup> {
        let mut order: u128 = 1;
        let mut acc: Option<FiniteGroup> = None;
        for spec in &self.0 {
            let g = spec.build()?;
            order *= g.order() as u128;
            if order > MAX_CATALOG_ORDER as u128 {
                return Err(Error::InvalidParameters(format!(
                    "product order {order} exceeds the construction cap {MAX_CATALOG_ORDER}"
                )));
            }
            acc = Some(match acc {
                None => g,
                Some(a) => a.direct_product(&g),
            });
        }
        acc.ok_or_else(|| Error::Parse("empty group expression".into()))
    }
}

/// Parses and builds a catalog expression such as `dihedral:n=4` or
/// `heisenberg:p=3,n=1*cyclic:n=9`.
pub fn build_from_str(s: &str) -> Result<FiniteGroup> {
    s.parse::<GroupExpr>()?.build()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_and_build() {
        let g = build_from_str("dihedral:n=12").unwrap();
        assert_eq!(g.order(), 24);
        let s: CatalogSpec = "heisenberg:p=3,n=2".parse().unwrap();
        assert_eq!(s.params["m"], 1);
        assert_eq!(s.to_string(), "heisenberg:m=1,n=2,p=3");
        assert_eq!(s.build().unwrap().order(), 243);
        let g = build_from_str("semidirect:a=5,u=-1,m=4").unwrap();
        assert_eq!(g.order(), 20);
        let g = build_from_str("heisenberg:p=3,m=1,n=1*cyclic:n=9").unwrap();
        assert_eq!(g.order(), 243);
        let g = build_from_str("direct_product:n1=2,n2=4").unwrap();
        assert_eq!(g.name(), "C2xC4");
        assert_eq!(build_from_str("quaternion8").unwrap().order(), 8);
    }

    #[test]
    fn parse_errors() {
        assert!(matches!(build_from_str("nope:n=3"), Err(Error::Parse(_))));
        assert!(matches!(build_from_str("cyclic"), Err(Error::Parse(_))));
        assert!(matches!(build_from_str("cyclic:n=x"), Err(Error::Parse(_))));
        assert!(matches!(
            build_from_str("cyclic:n=3,q=2"),
            Err(Error::Parse(_))
        ));
        assert!(matches!(
            build_from_str("heisenberg:p=2,n=1"),
            Err(Error::InvalidParameters(_))
        ));
        assert!(matches!(
            build_from_str("cyclic:n=-3"),
            Err(Error::InvalidParameters(_))
        ));
    }
}
