//! Closed formulas for groups with a normal abelian subgroup of cyclic
//! index, the sharp `P_r` bound and the inequalities around it, and
//! validators that compare each statement with engine values on concrete
//! groups.

use std::collections::HashSet;

use num_bigint::BigUint;
use serde::Serialize;

use crate::engine::prob;
use crate::error::{Error, Result};
use crate::group::{
    center, closure, conjugacy_classes, is_abelian, maximal_abelian_subgroups, ElementSet,
    FiniteGroup, SubgroupView,
};
use crate::numtheory::{is_prime, smallest_prime_divisor};
use crate::rational::ExactRational;

fn pow_u(base: u64, exp: u32) -> BigUint {
    num_traits::pow(BigUint::from(base), exp as usize)
}

fn ratio(num: &BigUint, den: &BigUint) -> ExactRational {
    ExactRational::from_biguint_ratio(num, den)
}

/// Smallest prime dividing `|G|`; 2 for the trivial group, where every
/// formula below has `α = 1` and the prime drops out.
pub fn smallest_prime(g: &FiniteGroup) -> u64 {
    smallest_prime_divisor(g.order() as u64).unwrap_or(2)
}

/// `|Z(G)| / |G|`.
pub fn alpha(g: &FiniteGroup) -> ExactRational {
    ExactRational::new(center(g).order() as u64, g.order() as u64)
}

// ---------------------------------------------------------------------------
// Normal abelian subgroups of cyclic index

/// A normal abelian `A` with `G/A = ⟨tA⟩` cyclic of order `omega`.
#[derive(Clone, Debug)]
pub struct CyclicIndexData<'g> {
    pub a: SubgroupView<'g>,
    pub t: u32,
    pub omega: u64,
    pub n: u64,
    pub f: u64,
    /// `C_A(t^j) = A ∩ Z(G)` for every `1 ≤ j < omega`.
    pub hypothesis_holds: bool,
    /// First `(j, |C_A(t^j)|)` breaking the hypothesis.
    pub failure_witness: Option<(u64, usize)>,
}

impl<'g> CyclicIndexData<'g> {
    pub fn p_r(&self, r: u32) -> Result<ExactRational> {
        p_r_cyclic_index(self.omega, self.n, self.f, r)
    }

    pub fn comm_count(&self, r: u32) -> Result<BigUint> {
        comm_count_cyclic_index(self.omega, self.n, self.f, r)
    }

    /// `f / n`.
    pub fn alpha(&self) -> ExactRational {
        ExactRational::new(self.f, self.n)
    }
}

/// Every normal abelian subgroup. Each one is a union of conjugacy classes,
/// so growing `H` by whole classes lying in `C_G(H)` that commute among
/// themselves reaches all of them.
pub fn normal_abelian_subgroups(g: &FiniteGroup) -> Vec<SubgroupView<'_>> {
    let n = g.order();
    let cents = g.centralizer_sets();
    let cls = conjugacy_classes(g);
    let classes: Vec<Vec<u32>> = (0..cls.class_count())
        .map(|c| cls.members(c).collect())
        .collect();
    let commuting: Vec<bool> = classes
        .iter()
        .map(|c| c.iter().all(|&x| c.iter().all(|&y| g.commutes(x, y))))
        .collect();

    let start = ElementSet::from_indices(n, [0]);
    let mut seen: HashSet<ElementSet> = HashSet::new();
    seen.insert(start.clone());
    let mut frontier = vec![start];
    while let Some(h) = frontier.pop() {
        let mut ch = ElementSet::full(n);
        for x in h.iter() {
            ch.intersect_with(&cents[x as usize]);
        }
        for (c, members) in classes.iter().enumerate() {
            if !commuting[c] || h.contains(members[0]) {
                continue;
            }
            if !members.iter().all(|&x| ch.contains(x)) {
                continue;
            }
            let bigger = closure(g, h.clone(), members);
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

/// Order of `xA` in `G/A`.
fn coset_order(g: &FiniteGroup, a: &SubgroupView<'_>, x: u32) -> u64 {
    let mut k = 1;
    let mut y = x;
    while !a.contains(y) {
        y = g.mul(y, x);
        k += 1;
    }
    k
}

fn evaluate_candidate<'g>(g: &'g FiniteGroup, a: SubgroupView<'g>) -> Option<CyclicIndexData<'g>> {
    let omega = (g.order() / a.order()) as u64;
    let t = g.elements().find(|&x| coset_order(g, &a, x) == omega)?;
    let z = center(g);
    let fixed = a.set().intersection(z.set());
    let cents = g.centralizer_sets();
    let mut failure_witness = None;
    let mut tj = 0;
    for j in 1..omega {
        tj = g.mul(tj, t);
        let c = a.set().intersection(&cents[tj as usize]);
        if c != fixed {
            failure_witness = Some((j, c.count()));
            break;
        }
    }
    Some(CyclicIndexData {
        n: a.order() as u64,
        f: fixed.count() as u64,
        a,
        t,
        omega,
        hypothesis_holds: failure_witness.is_none(),
        failure_witness,
    })
}

/// All normal abelian subgroups with cyclic quotient, largest first, ties in
/// lexicographic order of their sorted element lists.
pub fn all_cyclic_index_data(g: &FiniteGroup) -> Vec<CyclicIndexData<'_>> {
    let mut subs = normal_abelian_subgroups(g);
    subs.reverse();
    subs.sort_by(|a, b| {
        b.order()
            .cmp(&a.order())
            .then_with(|| a.elements().cmp(b.elements()))
    });
    subs.into_iter()
        .filter_map(|a| evaluate_candidate(g, a))
        .collect()
}

/// The largest normal abelian subgroup with cyclic quotient, with the
/// hypothesis evaluated. `None` if there is no candidate, as for `S4`.
pub fn find_cyclic_index_data(g: &FiniteGroup) -> Option<CyclicIndexData<'_>> {
    all_cyclic_index_data(g).into_iter().next()
}

/// Data for a caller-chosen `A`.
pub fn cyclic_index_data_for<'g>(
    g: &'g FiniteGroup,
    a: &SubgroupView<'g>,
) -> Result<CyclicIndexData<'g>> {
    if !a.is_abelian() {
        return Err(Error::HypothesisNotMet("A is not abelian".into()));
    }
    if !a.is_normal() {
        return Err(Error::HypothesisNotMet("A is not normal".into()));
    }
    evaluate_candidate(g, a.clone())
        .ok_or_else(|| Error::HypothesisNotMet("G/A is not cyclic".into()))
}

// ---------------------------------------------------------------------------
// Closed formulas

/// `n^r + (ω^r − 1)·n·f^{r−1}`.
pub fn comm_count_cyclic_index(omega: u64, n: u64, f: u64, r: u32) -> Result<BigUint> {
    if omega == 0 || n == 0 || f == 0 || r == 0 {
        return Err(Error::Domain("omega, n, f, r must be positive".into()));
    }
    if !n.is_multiple_of(f) {
        return Err(Error::Domain(format!("f = {f} does not divide n = {n}")));
    }
    let wr = pow_u(omega, r);
    Ok(pow_u(n, r) + (wr - 1u32) * n * pow_u(f, r - 1))
}

/// `ω^{−r} + (1 − ω^{−r})(f/n)^{r−1}`.
pub fn p_r_cyclic_index(omega: u64, n: u64, f: u64, r: u32) -> Result<ExactRational> {
    let count = comm_count_cyclic_index(omega, n, f, r)?;
    Ok(ratio(&count, &pow_u(omega * n, r)))
}

/// Dihedral group of order `2n`.
pub fn p_r_dihedral(n: u64, r: u32) -> Result<ExactRational> {
    if n == 0 {
        return Err(Error::Domain("dihedral needs n ≥ 1".into()));
    }
    let f = if n.is_multiple_of(2) { 2.min(n) } else { 1 };
    p_r_cyclic_index(2, n, f, r)
}

/// Non-abelian group of order `pq`, `p < q`, `p | q − 1`.
pub fn p_r_order_pq(p: u64, q: u64, r: u32) -> Result<ExactRational> {
    if !is_prime(p) || !is_prime(q) || p >= q || !(q - 1).is_multiple_of(p) {
        return Err(Error::Domain(format!(
            "need primes p < q with p | q − 1; got p={p}, q={q}"
        )));
    }
    p_r_cyclic_index(p, q, 1, r)
}

/// `sign = −1`: order `p(p−1)` with `A = C_p`; `sign = +1`: order `p(p+1)`
/// with `A` normal abelian of order `p+1`.
pub fn p_r_metacyclic_pm1(p: u64, r: u32, sign: i32) -> Result<ExactRational> {
    if !is_prime(p) {
        return Err(Error::Domain(format!("{p} is not prime")));
    }
    match sign {
        -1 if p >= 3 => p_r_cyclic_index(p - 1, p, 1, r),
        1 => p_r_cyclic_index(p, p + 1, 1, r),
        -1 => Err(Error::Domain("order p(p−1) needs p ≥ 3".into())),
        _ => Err(Error::Domain(format!("sign must be ±1, got {sign}"))),
    }
}

/// `α^{r−1} = (P − ω^{−r}) / (1 − ω^{−r})`.
pub fn recover_alpha(p: &ExactRational, omega: u64, r: u32) -> Result<ExactRational> {
    if omega < 2 || r == 0 {
        return Err(Error::Domain("need omega ≥ 2 and r ≥ 1".into()));
    }
    let w = ExactRational::inv_pow(omega, r);
    if *p <= w {
        return Err(Error::Domain(format!("P = {p} is not above ω^(-r) = {w}")));
    }
    Ok((p - &w) / (ExactRational::one() - w))
}

/// `(p^r + p^{r−1} − 1) / p^{2r−1}`.
pub fn sharp_bound(p: u64, r: u32) -> ExactRational {
    assert!(r >= 1, "r must be at least 1");
    let num = pow_u(p, r) + pow_u(p, r - 1) - 1u32;
    ratio(&num, &pow_u(p, 2 * r - 1))
}

pub fn universal_bound(r: u32) -> ExactRational {
    sharp_bound(2, r)
}

// ---------------------------------------------------------------------------
// Sharp bound and inequalities

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BoundReport {
    pub r: u32,
    pub p: u64,
    pub value: ExactRational,
    pub bound: ExactRational,
    pub is_equal: bool,
    /// `G/Z ≅ C_p × C_p`.
    pub extremal_structure: bool,
}

/// `|G:Z| = p²` and `G/Z` has no element of order `p²`.
pub fn central_quotient_is_cp2(g: &FiniteGroup, p: u64) -> bool {
    let z = center(g);
    if (g.order() / z.order()) as u64 != p * p {
        return false;
    }
    g.elements().all(|x| coset_order(g, &z, x) != p * p)
}

pub fn check_sharp_bound(g: &FiniteGroup, r: u32) -> Result<BoundReport> {
    if is_abelian(g) {
        return Err(Error::AbelianInput);
    }
    let p = smallest_prime(g);
    let value = prob(g, r);
    let bound = sharp_bound(p, r);
    let report = BoundReport {
        r,
        p,
        is_equal: value == bound,
        extremal_structure: central_quotient_is_cp2(g, p),
        value,
        bound,
    };
    if report.value > report.bound || report.is_equal != report.extremal_structure {
        return Err(Error::Violation(format!("{}: {report:?}", g.name())));
    }
    Ok(report)
}

/// `α·P_{r−1} + (1 − α)/p^{r−1}`.
pub fn one_step_bound(g: &FiniteGroup, r: u32) -> ExactRational {
    assert!(r >= 2, "one-step bound needs r ≥ 2");
    let a = alpha(g);
    let p = smallest_prime(g);
    &a * prob(g, r - 1) + (ExactRational::one() - &a) * ExactRational::inv_pow(p, r - 1)
}

/// `(α^n P_m, α^n P_m + (P_n − α^n)/p^m)`, bracketing `P_{n+m}`.
pub fn two_block_bounds(g: &FiniteGroup, n: u32, m: u32) -> (ExactRational, ExactRational) {
    let an = alpha(g).pow(n as i32);
    let lower = &an * prob(g, m);
    let upper = &lower + expcentral_bound(g, n, m);
    (lower, upper)
}

/// `(P_n − α^n)/p^m`, bounding `|P_{n+m} − α^n P_m|`.
pub fn expcentral_bound(g: &FiniteGroup, n: u32, m: u32) -> ExactRational {
    let an = alpha(g).pow(n as i32);
    (prob(g, n) - an) * ExactRational::inv_pow(smallest_prime(g), m)
}

/// `(1/p² − α)(p^{r−1} − 1)/p^{2r−3}`, a lower bound for
/// `sharp_bound(p, r) − P_r(G)`.
pub fn deficit_lower_bound(g: &FiniteGroup, r: u32) -> Result<ExactRational> {
    if is_abelian(g) {
        return Err(Error::AbelianInput);
    }
    assert!(r >= 2, "deficit bound needs r ≥ 2");
    let p = smallest_prime(g);
    let a = alpha(g);
    let gap = ExactRational::inv_pow(p, 2) - a;
    let num = pow_u(p, r - 1) - 1u32;
    Ok(gap * ratio(&num, &pow_u(p, 2 * r - 3)))
}

/// `1/4 + α/4 + α²/2`, and whether `P_3 > 11/36`.
pub fn gap_p3(g: &FiniteGroup) -> Result<(ExactRational, bool)> {
    if is_abelian(g) {
        return Err(Error::AbelianInput);
    }
    let a = alpha(g);
    let bound = ExactRational::new(1, 4)
        + &a * ExactRational::new(1, 4)
        + a.pow(2) * ExactRational::new(1, 2);
    let triggered = prob(g, 3) > ExactRational::new(11, 36);
    Ok((bound, triggered))
}

/// `U_{p,r}(d) = p^{−(r−1)} + (p−1) Σ_{j=1}^{r−1} p^{−(r+(d−1)j)}`.
pub fn pgroup_ladder(p: u64, r: u32, d: u32) -> ExactRational {
    assert!(r >= 1 && d >= 1, "ladder needs r, d ≥ 1");
    let mut acc = ExactRational::zero();
    for j in 1..r {
        acc = acc + ExactRational::inv_pow(p, r + (d - 1) * j);
    }
    ExactRational::inv_pow(p, r - 1) + ExactRational::from_integer(p - 1) * acc
}

/// `B_{p,r} = U_{p,r}(3)`, checked against
/// `sharp_bound(p, r) − (p^r − 1)(p^{r−1} − 1)/((p+1) p^{3r−2})`.
pub fn pgroup_window(p: u64, r: u32) -> ExactRational {
    assert!(r >= 2, "window needs r ≥ 2");
    let u = pgroup_ladder(p, r, 3);
    let num = (pow_u(p, r) - 1u32) * (pow_u(p, r - 1) - 1u32);
    let den = pow_u(p, 3 * r - 2) * (p + 1);
    let alt = sharp_bound(p, r) - ratio(&num, &den);
    assert_eq!(u, alt, "two forms of the window constant disagree");
    u
}

// ---------------------------------------------------------------------------
// Abelian subgroups of prime index

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PrimeIndexReport {
    pub p: u64,
    /// `|A|`.
    pub n: u64,
    /// `|A ∩ Z(G)|`.
    pub f: u64,
    pub a_is_normal: bool,
    pub f_equals_n_over_p: bool,
    /// Equality in the sharp bound at `r = 2` and `r = 3`.
    pub sharp_equality: bool,
    pub central_quotient_cp2: bool,
    pub max_abelian_containing_center: usize,
    pub max_abelian_count_is_p_plus_1: bool,
}

impl PrimeIndexReport {
    pub fn conditions(&self) -> [bool; 4] {
        [
            self.f_equals_n_over_p,
            self.sharp_equality,
            self.central_quotient_cp2,
            self.max_abelian_count_is_p_plus_1,
        ]
    }

    pub fn agree(&self) -> bool {
        let c = self.conditions();
        c.iter().all(|&x| x == c[0])
    }
}

/// Locates an abelian subgroup of index `p` (the smallest prime) and runs
/// [`prime_index_equivalences_for`]. Such a subgroup is maximal abelian, so
/// only those are searched.
pub fn prime_index_equivalences(g: &FiniteGroup) -> Result<PrimeIndexReport> {
    if is_abelian(g) {
        return Err(Error::AbelianInput);
    }
    let p = smallest_prime(g) as usize;
    let a = maximal_abelian_subgroups(g, false)
        .into_iter()
        .find(|a| a.order() * p == g.order())
        .ok_or_else(|| {
            Error::HypothesisNotMet(format!("{} has no abelian subgroup of index {p}", g.name()))
        })?;
    prime_index_equivalences_for(g, &a)
}

pub fn prime_index_equivalences_for(
    g: &FiniteGroup,
    a: &SubgroupView<'_>,
) -> Result<PrimeIndexReport> {
    if is_abelian(g) {
        return Err(Error::AbelianInput);
    }
    let p = smallest_prime(g);
    if !a.is_abelian() {
        return Err(Error::HypothesisNotMet("A is not abelian".into()));
    }
    let index = (g.order() / a.order()) as u64;
    if index != p {
        return Err(Error::HypothesisNotMet(format!(
            "A has index {index}, not the smallest prime {p} (normal: {})",
            a.is_normal()
        )));
    }
    let a_is_normal = a.is_normal();
    let z = center(g);
    let n = a.order() as u64;
    let f = a.set().intersection_count(z.set()) as u64;
    let sharp_equality = (2..=3).all(|r| prob(g, r) == sharp_bound(p, r));
    let max_ab = maximal_abelian_subgroups(g, true).len();
    let report = PrimeIndexReport {
        p,
        n,
        f,
        a_is_normal,
        f_equals_n_over_p: f * p == n,
        sharp_equality,
        central_quotient_cp2: central_quotient_is_cp2(g, p),
        max_abelian_containing_center: max_ab,
        max_abelian_count_is_p_plus_1: max_ab as u64 == p + 1,
    };
    if !a_is_normal || !report.agree() {
        return Err(Error::Violation(format!("{}: {report:?}", g.name())));
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog::*;
    use crate::rational::rat;

    #[test]
    fn closed_formula_values() {
        assert_eq!(p_r_cyclic_index(2, 6, 2, 3).unwrap(), rat(2, 9));
        assert_eq!(p_r_cyclic_index(4, 5, 1, 2).unwrap(), rat(1, 4));
        assert!(matches!(
            p_r_cyclic_index(2, 6, 4, 2),
            Err(Error::Domain(_))
        ));
        assert_eq!(p_r_order_pq(2, 3, 2).unwrap(), rat(1, 2));
        assert!(p_r_order_pq(3, 5, 2).is_err());
        let c: Vec<_> = (2..=5).map(|r| p_r_dihedral(4, r).unwrap()).collect();
        assert_eq!(c, vec![rat(5, 8), rat(11, 32), rat(23, 128), rat(47, 512)]);
        assert_eq!(p_r_metacyclic_pm1(5, 2, -1).unwrap(), rat(1, 4));
        assert_eq!(p_r_metacyclic_pm1(3, 2, 1).unwrap(), rat(1, 3));
    }

    #[test]
    fn alpha_recovery() {
        assert_eq!(recover_alpha(&rat(5, 8), 2, 2).unwrap(), rat(1, 2));
        assert_eq!(recover_alpha(&rat(1, 2), 2, 2).unwrap(), rat(1, 3));
        assert!(matches!(
            recover_alpha(&rat(1, 4), 2, 2),
            Err(Error::Domain(_))
        ));
    }

    #[test]
    fn bounds_constants() {
        assert_eq!(sharp_bound(2, 3), rat(11, 32));
        assert_eq!(sharp_bound(3, 2), rat(11, 27));
        assert_eq!(universal_bound(4), rat(23, 128));
        assert_eq!(pgroup_ladder(2, 3, 3), rat(37, 128));
        assert_eq!(pgroup_window(2, 2), rat(9, 16));
        let tail = pgroup_ladder(2, 3, 50) - rat(1, 4);
        assert!(tail.is_positive() && tail < ExactRational::inv_pow(2, 50));
    }

    #[test]
    fn cyclic_index_search() {
        let d12 = dihedral(6).unwrap();
        let d = find_cyclic_index_data(&d12).unwrap();
        assert_eq!((d.omega, d.n, d.f, d.hypothesis_holds), (2, 6, 2, true));
        assert_eq!(d.a.elements(), &[0, 1, 2, 3, 4, 5]);

        let c6 = cyclic(6).unwrap();
        let d = find_cyclic_index_data(&c6).unwrap();
        assert_eq!((d.omega, d.n), (1, 6));
        assert_eq!(d.p_r(4).unwrap(), ExactRational::one());

        // a ↦ a^{-1}, so t² is central.
        let g = semidirect_cyclic(5, -1, 4).unwrap();
        let a = SubgroupView::generated_by(&g, &[1]);
        let d = cyclic_index_data_for(&g, &a).unwrap();
        assert_eq!((d.omega, d.n, d.f), (4, 5, 1));
        assert_eq!(d.failure_witness, Some((2, 5)));
        assert_eq!(d.p_r(2).unwrap(), rat(1, 4));
        assert_eq!(prob(&g, 2), rat(2, 5));

        assert!(find_cyclic_index_data(&symmetric(4).unwrap()).is_none());
    }

    #[test]
    fn sharp_bound_reports() {
        let d8 = dihedral(4).unwrap();
        let r = check_sharp_bound(&d8, 3).unwrap();
        assert!(r.is_equal && r.extremal_structure);
        let s3 = symmetric(3).unwrap();
        let r = check_sharp_bound(&s3, 2).unwrap();
        assert_eq!(r.value, rat(1, 2));
        assert!(!r.is_equal && !r.extremal_structure);
        let h = build_heisenberg(3, 1, 1).unwrap();
        let r = check_sharp_bound(&h, 2).unwrap();
        assert_eq!(r.value, rat(11, 27));
        assert!(r.is_equal);
        assert_eq!(
            check_sharp_bound(&cyclic(4).unwrap(), 2),
            Err(Error::AbelianInput)
        );
    }

    #[test]
    fn inequality_examples() {
        let s3 = symmetric(3).unwrap();
        assert_eq!(two_block_bounds(&s3, 1, 2), (rat(1, 12), rat(7, 24)));
        assert_eq!(one_step_bound(&dihedral(4).unwrap(), 3), rat(11, 32));
        assert_eq!(deficit_lower_bound(&s3, 2).unwrap(), rat(1, 24));
        assert_eq!(deficit_lower_bound(&s3, 3).unwrap(), rat(1, 32));
        assert!(deficit_lower_bound(&quaternion8(), 4).unwrap().is_zero());
        let c = cyclic(5).unwrap();
        let (lo, hi) = two_block_bounds(&c, 2, 2);
        assert_eq!((lo, hi), (ExactRational::one(), ExactRational::one()));
        assert!(!gap_p3(&s3).unwrap().1);
        assert!(gap_p3(&quaternion8()).unwrap().1);
    }

    #[test]
    fn prime_index() {
        let d8 = dihedral(4).unwrap();
        let r = prime_index_equivalences(&d8).unwrap();
        assert_eq!(r.conditions(), [true; 4]);
        assert_eq!(r.max_abelian_containing_center, 3);
        let d12 = dihedral(6).unwrap();
        let r = prime_index_equivalences(&d12).unwrap();
        assert_eq!(r.conditions(), [false; 4]);
        let s3 = symmetric(3).unwrap();
        let t = (1..6).find(|&x| s3.element_order(x) == 2).unwrap();
        let a = SubgroupView::generated_by(&s3, &[t]);
        assert!(matches!(
            prime_index_equivalences_for(&s3, &a),
            Err(Error::HypothesisNotMet(_))
        ));
    }
}
