//! The commutator tensor `β: V × V → W` of a class-2 group with elementary
//! abelian `V = G/Z(G)` and `W = G'`, and `P_r` computed from it.

use std::collections::HashMap;

use num_bigint::BigUint;
use num_traits::Zero;
use serde::Serialize;

use crate::engine::prob;
use crate::error::{Error, Result};
use crate::group::{center, closure, derived_subgroup, exponent, ElementSet, FiniteGroup};
use crate::numtheory::prime_power;
use crate::rational::ExactRational;
use crate::symplectic::p_r_q;

/// Default cap on elementary operations for tensor enumerations.
pub const DEFAULT_TENSOR_BUDGET: u128 = 100_000_000;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CommutatorTensor {
    pub p: u64,
    pub dim_v: usize,
    pub dim_w: usize,
    /// `beta[i][j]` is the coordinate vector of `[b_i, b_j]` in `F_p^m`.
    pub beta: Vec<Vec<Vec<u32>>>,
    /// Group element chosen for each basis vector of `V`.
    pub basis_lift: Vec<u32>,
    /// Group element chosen for each basis vector of `W`.
    pub w_basis: Vec<u32>,
}

/// Greedy basis of the elementary abelian section `H/K` (with `K ≤ H`
/// normal, `H/K` elementary abelian): scan `H` in element order and keep each
/// element outside the span so far. Returns the lifts and the coordinates of
/// every element of `H`.
fn section_basis(
    g: &FiniteGroup,
    h: &ElementSet,
    k: &ElementSet,
    p: u64,
) -> (Vec<u32>, HashMap<u32, Vec<u32>>) {
    let mut span = k.clone();
    let mut lifts = Vec::new();
    for x in h.iter() {
        if !span.contains(x) {
            lifts.push(x);
            span = closure(g, span, &[x]);
        }
    }
    let d = lifts.len();
    let mut coords = HashMap::new();
    let size = (p as usize).pow(d as u32);
    for code in 0..size {
        let mut c = Vec::with_capacity(d);
        let mut rest = code;
        let mut y = 0;
        for &b in &lifts {
            let e = (rest % p as usize) as u32;
            rest /= p as usize;
            c.push(e);
            y = g.mul(y, g.pow(b, e as u64));
        }
        for z in k.iter() {
            coords.insert(g.mul(y, z), c.clone());
        }
    }
    (lifts, coords)
}

/// Extracts `β` with greedy bases of `V` and `W`. Accepts abelian groups
/// (`d = 0`), `p`-groups of class ≤ 2 and exponent `p`, and groups with
/// `|G'| = p`.
pub fn extract_tensor(g: &FiniteGroup) -> Result<CommutatorTensor> {
    let n = g.order();
    let z = center(g);
    let dg = derived_subgroup(g);
    let p = if z.order() == n {
        crate::bounds::smallest_prime(g)
    } else {
        prime_power(n as u64)
            .ok_or_else(|| Error::NotClass2ExponentP(format!("|G| = {n} is not a prime power")))?
            .0
    };
    if !dg.set().is_subset(z.set()) {
        return Err(Error::NotClass2ExponentP(
            "G' is not central (class > 2)".into(),
        ));
    }
    let small_derived = dg.order() as u64 == p;
    if z.order() != n && !small_derived && exponent(g) != p {
        return Err(Error::NotClass2ExponentP(format!(
            "exponent is {} rather than {p}, and |G'| = {} ≠ p",
            exponent(g),
            dg.order()
        )));
    }
    if g.elements().any(|x| !z.contains(g.pow(x, p))) {
        return Err(Error::NotClass2ExponentP(format!(
            "G/Z(G) is not elementary abelian of exponent {p}"
        )));
    }

    let (basis_lift, _) = section_basis(g, &ElementSet::full(n), z.set(), p);
    let trivial = ElementSet::from_indices(n, [0]);
    let (w_basis, w_coords) = section_basis(g, dg.set(), &trivial, p);
    let d = basis_lift.len();
    let m = w_basis.len();
    let mut beta = vec![vec![vec![0u32; m]; d]; d];
    for i in 0..d {
        for j in 0..d {
            let c = g.commutator(basis_lift[i], basis_lift[j]);
            beta[i][j] = w_coords[&c].clone();
        }
    }
    Ok(CommutatorTensor {
        p,
        dim_v: d,
        dim_w: m,
        beta,
        basis_lift,
        w_basis,
    })
}

impl CommutatorTensor {
    pub fn v_size(&self) -> usize {
        (self.p as usize).pow(self.dim_v as u32)
    }

    fn decode(&self, mut code: usize) -> Vec<u32> {
        let p = self.p as usize;
        (0..self.dim_v)
            .map(|_| {
                let c = (code % p) as u32;
                code /= p;
                c
            })
            .collect()
    }

    /// The matrix of `u ↦ β(v, u)`, one row per coordinate of `W`.
    pub fn contraction(&self, v: &[u32]) -> Vec<Vec<u32>> {
        let p = self.p as u32;
        let mut rows = vec![vec![0u32; self.dim_v]; self.dim_w];
        for (i, &vi) in v.iter().enumerate() {
            if vi == 0 {
                continue;
            }
            for (j, col) in self.beta[i].iter().enumerate() {
                for (l, &b) in col.iter().enumerate() {
                    rows[l][j] = (rows[l][j] + vi * b) % p;
                }
            }
        }
        rows
    }

    /// `β(u, v)` in `F_p^m`.
    pub fn form(&self, u: &[u32], v: &[u32]) -> Vec<u32> {
        let p = self.p as u32;
        let mut out = vec![0u32; self.dim_w];
        for (i, &ui) in u.iter().enumerate() {
            if ui == 0 {
                continue;
            }
            for (j, &vj) in v.iter().enumerate() {
                if vj == 0 {
                    continue;
                }
                for (l, o) in out.iter_mut().enumerate() {
                    *o = (*o + ui * vj * self.beta[i][j][l]) % p;
                }
            }
        }
        out
    }

    pub fn is_alternating(&self) -> bool {
        let p = self.p as u32;
        (0..self.dim_v).all(|i| {
            self.beta[i][i].iter().all(|&x| x == 0)
                && (0..self.dim_v).all(|j| {
                    (0..self.dim_w).all(|l| (self.beta[i][j][l] + self.beta[j][i][l]).is_multiple_of(p))
                })
        })
    }

    /// No nonzero `v` with `β(v, ·) = 0`.
    pub fn is_nondegenerate(&self) -> bool {
        (1..self.v_size()).all(|c| rank_mod_p(self.contraction(&self.decode(c)), self.p) > 0)
    }
}

/// Rank over `F_p` by row reduction.
pub fn rank_mod_p(mut rows: Vec<Vec<u32>>, p: u64) -> usize {
    let cols = rows.first().map_or(0, Vec::len);
    let mut rank = 0;
    for c in 0..cols {
        let Some(pivot) = (rank..rows.len()).find(|&r| rows[r][c] != 0) else {
            continue;
        };
        rows.swap(rank, pivot);
        let inv = crate::numtheory::pow_mod(rows[rank][c] as u64, p - 2, p);
        for x in rows[rank].iter_mut() {
            *x = ((*x as u64 * inv) % p) as u32;
        }
        for r in 0..rows.len() {
            if r != rank && rows[r][c] != 0 {
                let factor = rows[r][c] as u64;
                for k in 0..cols {
                    let sub = (factor * rows[rank][k] as u64) % p;
                    rows[r][k] = ((rows[r][k] as u64 + p - sub) % p) as u32;
                }
            }
        }
        rank += 1;
    }
    rank
}

/// `N_r(V, β)`: pairwise `β`-orthogonal `r`-tuples, walked over joint perps
/// with memoization.
pub fn isotropic_count_tensor(t: &CommutatorTensor, r: u32) -> Result<BigUint> {
    isotropic_count_tensor_with_budget(t, r, DEFAULT_TENSOR_BUDGET)
}

pub fn isotropic_count_tensor_with_budget(
    t: &CommutatorTensor,
    r: u32,
    budget: u128,
) -> Result<BigUint> {
    if r == 0 {
        return Ok(BigUint::from(1u32));
    }
    let size = t.v_size();
    let estimated = (size as u128)
        .saturating_mul(size as u128)
        .saturating_mul((t.dim_v * t.dim_w).max(1) as u128);
    if estimated > budget {
        return Err(Error::BudgetExceeded { estimated, budget });
    }
    let vecs: Vec<Vec<u32>> = (0..size).map(|c| t.decode(c)).collect();
    let perps: Vec<ElementSet> = vecs
        .iter()
        .map(|u| {
            ElementSet::from_indices(
                size,
                (0..size as u32).filter(|&v| t.form(u, &vecs[v as usize]).iter().all(|&x| x == 0)),
            )
        })
        .collect();
    let mut memo = HashMap::new();
    Ok(walk(&ElementSet::full(size), r, &perps, &mut memo))
}

fn walk(
    allowed: &ElementSet,
    k: u32,
    perps: &[ElementSet],
    memo: &mut HashMap<(ElementSet, u32), BigUint>,
) -> BigUint {
    if k == 1 {
        return BigUint::from(allowed.count());
    }
    if let Some(v) = memo.get(&(allowed.clone(), k)) {
        return v.clone();
    }
    let mut total = BigUint::zero();
    for x in allowed.iter() {
        total += walk(
            &allowed.intersection(&perps[x as usize]),
            k - 1,
            perps,
            memo,
        );
    }
    memo.insert((allowed.clone(), k), total.clone());
    total
}

/// `N_{r+1} = Σ_{isotropic (v_1..v_r)} |⟨v_1..v_r⟩^⊥|`, with each perp size
/// read off the rank of the stacked contractions.
pub fn isotropic_span_count(t: &CommutatorTensor, r: u32) -> Result<BigUint> {
    isotropic_span_count_with_budget(t, r, DEFAULT_TENSOR_BUDGET)
}

pub fn isotropic_span_count_with_budget(
    t: &CommutatorTensor,
    r: u32,
    budget: u128,
) -> Result<BigUint> {
    let size = t.v_size();
    let estimated = (size as u128)
        .saturating_pow(r.max(1))
        .saturating_mul((t.dim_v * t.dim_v * t.dim_w).max(1) as u128);
    if estimated > budget {
        return Err(Error::BudgetExceeded { estimated, budget });
    }
    let vecs: Vec<Vec<u32>> = (0..size).map(|c| t.decode(c)).collect();
    let mut prefix: Vec<usize> = Vec::new();
    let mut total = BigUint::zero();
    span_walk(t, &vecs, r as usize, &mut prefix, &mut total);
    Ok(total)
}

fn span_walk(
    t: &CommutatorTensor,
    vecs: &[Vec<u32>],
    r: usize,
    prefix: &mut Vec<usize>,
    total: &mut BigUint,
) {
    if prefix.len() == r {
        let rows: Vec<Vec<u32>> = prefix
            .iter()
            .flat_map(|&i| t.contraction(&vecs[i]))
            .collect();
        let rank = if rows.is_empty() {
            0
        } else {
            rank_mod_p(rows, t.p)
        };
        *total += num_traits::pow(BigUint::from(t.p), t.dim_v - rank);
        return;
    }
    for (c, v) in vecs.iter().enumerate() {
        if prefix
            .iter()
            .all(|&i| t.form(&vecs[i], v).iter().all(|&x| x == 0))
        {
            prefix.push(c);
            span_walk(t, vecs, r, prefix, total);
            prefix.pop();
        }
    }
}

/// `P_2 = E_v[p^{−rk β_v}]`.
pub fn p2_rank_distribution(t: &CommutatorTensor) -> ExactRational {
    let size = t.v_size();
    let mut acc = ExactRational::zero();
    for c in 0..size {
        let rk = rank_mod_p(t.contraction(&t.decode(c)), t.p);
        acc = acc + ExactRational::inv_pow(t.p, rk as u32);
    }
    acc / ExactRational::from_integer(size as u64)
}

/// Whether every nonzero `β_v` is onto `W`; if so, also
/// `P_2 = p^{−d} + (1 − p^{−d}) p^{−m}`.
pub fn full_contraction_check(t: &CommutatorTensor) -> (bool, Option<ExactRational>) {
    let holds = (1..t.v_size()).all(|c| rank_mod_p(t.contraction(&t.decode(c)), t.p) == t.dim_w);
    if !holds {
        return (false, None);
    }
    let pd = ExactRational::inv_pow(t.p, t.dim_v as u32);
    let p2 = &pd + (ExactRational::one() - &pd) * ExactRational::inv_pow(t.p, t.dim_w as u32);
    (true, Some(p2))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FullContractionReport {
    pub p: u64,
    pub dim_v: usize,
    pub dim_w: usize,
    pub holds: bool,
    pub p2_formula: Option<ExactRational>,
    pub p2_engine: ExactRational,
    /// Every noncentral `x` has `|G : C_G(x)| = p^m`; checked when `holds`.
    pub uniform_centralizers: Option<bool>,
}

/// [`full_contraction_check`] on the tensor of `G`, with the formula and
/// the centralizer indices compared against the group itself.
pub fn check_full_contraction(g: &FiniteGroup) -> Result<FullContractionReport> {
    let t = extract_tensor(g)?;
    let (holds, p2_formula) = full_contraction_check(&t);
    let p2_engine = prob(g, 2);
    let uniform_centralizers = holds.then(|| {
        let target = (t.p as usize).pow(t.dim_w as u32);
        let z = center(g);
        g.elements()
            .filter(|&x| !z.contains(x))
            .all(|x| g.order() / g.centralizer_set(x).count() == target)
    });
    let report = FullContractionReport {
        p: t.p,
        dim_v: t.dim_v,
        dim_w: t.dim_w,
        holds,
        p2_formula,
        p2_engine,
        uniform_centralizers,
    };
    let formula_ok = report
        .p2_formula
        .as_ref()
        .is_none_or(|f| *f == report.p2_engine);
    if !formula_ok || report.uniform_centralizers == Some(false) {
        return Err(Error::Violation(format!("{}: {report:?}", g.name())));
    }
    Ok(report)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ReductionRow {
    pub r: u32,
    pub engine: ExactRational,
    pub symplectic: ExactRational,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SymplecticReductionReport {
    pub p: u64,
    pub n: u32,
    pub nondegenerate: bool,
    pub rows: Vec<ReductionRow>,
}

/// For `|G'| = p`: `β` is a nondegenerate symplectic form on `V ≅ F_p^{2n}`
/// and `P_r(G) = P_r^{(p)}(n)` for `r = 2..4`.
pub fn verify_symplectic_reduction(g: &FiniteGroup) -> Result<SymplecticReductionReport> {
    let dg = derived_subgroup(g);
    let order = dg.order() as u64;
    if prime_power(order).map(|x| x.1) != Some(1) {
        return Err(Error::HypothesisNotMet(format!(
            "|G'| = {order} is not prime"
        )));
    }
    let t = extract_tensor(g).map_err(|e| Error::HypothesisNotMet(e.to_string()))?;
    let nondegenerate = t.is_nondegenerate();
    if !nondegenerate || t.dim_v % 2 != 0 || !t.is_alternating() {
        return Err(Error::Violation(format!(
            "{}: form on V of dimension {} is not nondegenerate alternating",
            g.name(),
            t.dim_v
        )));
    }
    let n = (t.dim_v / 2) as u32;
    let mut rows = Vec::new();
    for r in 2..=4 {
        let engine = prob(g, r);
        let symplectic = p_r_q(t.p, n, r)?;
        if engine != symplectic {
            return Err(Error::Violation(format!(
                "{}: P_{r} engine {engine} vs symplectic {symplectic}",
                g.name()
            )));
        }
        rows.push(ReductionRow {
            r,
            engine,
            symplectic,
        });
    }
    Ok(SymplecticReductionReport {
        p: t.p,
        n,
        nondegenerate,
        rows,
    })
}

/// State of the `F_q`-linearity condition in a Heisenberg-type check.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum LinearityStatus {
    /// The group came from the `F_q` construction.
    ByConstruction,
    NotVerified,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct HeisenbergTypeReport {
    pub q: u64,
    pub derived_equals_center: bool,
    pub derived_order_is_q: bool,
    pub full_contraction: bool,
    pub fq_linearity: LinearityStatus,
}

impl HeisenbergTypeReport {
    pub fn necessary_conditions_hold(&self) -> bool {
        self.derived_equals_center && self.derived_order_is_q && self.full_contraction
    }
}

/// Necessary conditions for `F_q`-Heisenberg type. `constructed_over` is the
/// field order when the caller built the group over `F_q`; otherwise the
/// linearity condition is reported as not verified.
pub fn heisenberg_type_check(
    g: &FiniteGroup,
    q: u64,
    constructed_over: Option<u64>,
) -> Result<HeisenbergTypeReport> {
    let t = extract_tensor(g)?;
    let z = center(g);
    let dg = derived_subgroup(g);
    Ok(HeisenbergTypeReport {
        q,
        derived_equals_center: dg.set() == z.set(),
        derived_order_is_q: dg.order() as u64 == q,
        full_contraction: full_contraction_check(&t).0,
        fq_linearity: if constructed_over == Some(q) {
            LinearityStatus::ByConstruction
        } else {
            LinearityStatus::NotVerified
        },
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog::*;
    use crate::rational::rat;

    #[test]
    fn heisenberg_tensor() {
        let h = build_heisenberg(3, 1, 1).unwrap();
        let t = extract_tensor(&h).unwrap();
        assert_eq!((t.p, t.dim_v, t.dim_w), (3, 2, 1));
        assert!(t.beta[0][1][0] != 0 && t.is_alternating());
        assert_eq!(isotropic_count_tensor(&t, 2).unwrap(), BigUint::from(33u32));
        assert_eq!(
            isotropic_span_count(&t, 2).unwrap(),
            isotropic_count_tensor(&t, 3).unwrap()
        );
        assert_eq!(p2_rank_distribution(&t), rat(11, 27));
    }

    #[test]
    fn dihedral_tensor() {
        let d8 = dihedral(4).unwrap();
        let t = extract_tensor(&d8).unwrap();
        assert_eq!((t.p, t.dim_v, t.dim_w), (2, 2, 1));
        assert_eq!(isotropic_count_tensor(&t, 2).unwrap(), BigUint::from(10u32));
        assert_eq!(isotropic_span_count(&t, 1).unwrap(), BigUint::from(10u32));
        assert_eq!(isotropic_span_count(&t, 0).unwrap(), BigUint::from(4u32));
    }

    #[test]
    fn abelian_and_rejections() {
        let c = cyclic(9).unwrap();
        let t = extract_tensor(&c).unwrap();
        assert_eq!(t.dim_v, 0);
        assert_eq!(isotropic_count_tensor(&t, 3).unwrap(), BigUint::from(1u32));
        assert_eq!(p2_rank_distribution(&t), ExactRational::one());
        assert!(matches!(
            extract_tensor(&symmetric(3).unwrap()),
            Err(Error::NotClass2ExponentP(_))
        ));
        assert!(matches!(
            extract_tensor(&symmetric(4).unwrap()),
            Err(Error::NotClass2ExponentP(_))
        ));
    }

    #[test]
    fn full_contraction() {
        let h9 = build_heisenberg(3, 2, 1).unwrap();
        let r = check_full_contraction(&h9).unwrap();
        assert_eq!((r.dim_v, r.dim_w), (4, 2));
        assert_eq!(r.p2_formula, Some(rat(1, 81) + rat(80, 81) * rat(1, 9)));
        assert_eq!(r.uniform_centralizers, Some(true));
        let t = extract_tensor(&h9).unwrap();
        assert_eq!(
            p2_rank_distribution(&t),
            rat(1, 81) * (rat(1, 1) + rat(80, 9))
        );

        let g = build_heisenberg(3, 1, 1)
            .unwrap()
            .direct_product(&cyclic(3).unwrap());
        let r = check_full_contraction(&g).unwrap();
        assert!(r.holds && r.dim_v == 2 && r.dim_w == 1);
    }

    #[test]
    fn symplectic_reduction() {
        let r = verify_symplectic_reduction(&dihedral(4).unwrap()).unwrap();
        assert_eq!((r.p, r.n), (2, 1));
        let g = build_heisenberg(3, 1, 1)
            .unwrap()
            .direct_product(&cyclic(9).unwrap());
        assert_eq!(verify_symplectic_reduction(&g).unwrap().n, 1);
        assert!(matches!(
            verify_symplectic_reduction(&cyclic(5).unwrap()),
            Err(Error::HypothesisNotMet(_))
        ));
    }

    #[test]
    fn heisenberg_type() {
        let h = build_heisenberg(3, 2, 1).unwrap();
        let r = heisenberg_type_check(&h, 9, Some(9)).unwrap();
        assert!(r.necessary_conditions_hold());
        assert_eq!(r.fq_linearity, LinearityStatus::ByConstruction);
        let r = heisenberg_type_check(&h, 9, None).unwrap();
        assert_eq!(r.fq_linearity, LinearityStatus::NotVerified);
    }
}
