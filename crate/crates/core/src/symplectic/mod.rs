//! Pairwise-orthogonal tuples in symplectic spaces `F_q^{2n}` and the
//! commuting probabilities of the `F_q`-Heisenberg family.
//!
//! Counting functions take `q` as a plain integer: the formulas make sense
//! for any prime power, including `q = 2^m` where no exponent-`p` group
//! realizes them. Only [`isotropic_tuples_enumerate`] needs a field.

mod enumerate;
mod field;

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::numtheory::prime_power;
use crate::rational::ExactRational;

pub use enumerate::{isotropic_tuples_enumerate, isotropic_tuples_enumerate_with_budget};
pub use field::{is_irreducible, FqField, MAX_FIELD_ORDER};

fn big(q: u64) -> BigUint {
    BigUint::from(q)
}

fn qpow(q: u64, e: u64) -> BigUint {
    num_traits::pow(big(q), e as usize)
}

fn check_q(q: u64) -> Result<()> {
    if prime_power(q).is_none() {
        return Err(Error::Domain(format!("q = {q} is not a prime power")));
    }
    Ok(())
}

/// Number of `k`-dimensional totally isotropic subspaces of `F_q^{2n}`:
/// `L_{n,k}(q) = Π_{i<k} (q^{2n-2i} - 1)/(q^{k-i} - 1)`.
pub fn isotropic_subspace_count(n: u32, k: u32, q: u64) -> Result<BigUint> {
    if k > n {
        return Err(Error::Domain(format!("k = {k} exceeds n = {n}")));
    }
    if q < 2 {
        return Err(Error::Domain(format!("q = {q} must be at least 2")));
    }
    let one = BigUint::one();
    let mut num = BigUint::one();
    let mut den = BigUint::one();
    for i in 0..k {
        num *= qpow(q, 2 * (n - i) as u64) - &one;
        den *= qpow(q, (k - i) as u64) - &one;
    }
    let (quot, rem) = num.div_rem(&den);
    assert!(rem.is_zero(), "L_{{{n},{k}}}({q}) is not an integer");
    Ok(quot)
}

/// `I_r(n)` by `I_r(n) = I_{r-1}(n) + (q^{2n} - 1) q^{r-1} I_{r-1}(n-1)`,
/// with `I_r(0) = 1` and `I_1(n) = q^{2n}`.
pub fn isotropic_tuples_recursive(q: u64, n: u32, r: u32) -> Result<BigUint> {
    check_q(q)?;
    if r == 0 {
        return Err(Error::Domain("r must be at least 1".into()));
    }
    let n = n as usize;
    // row[j] = I_{level}(j)
    let mut row: Vec<BigUint> = (0..=n).map(|j| qpow(q, 2 * j as u64)).collect();
    for level in 2..=r {
        let mut next = vec![BigUint::one(); n + 1];
        for j in 1..=n {
            next[j] = &row[j]
                + (qpow(q, 2 * j as u64) - 1u32) * qpow(q, (level - 1) as u64) * &row[j - 1];
        }
        row = next;
    }
    Ok(row.swap_remove(n))
}

/// `I_r(n) = Σ_{k ≤ min(n,r)} L_{n,k}(q) Π_{i<k} (q^r - q^i)`.
pub fn isotropic_tuples_closed(q: u64, n: u32, r: u32) -> Result<BigUint> {
    check_q(q)?;
    if r == 0 {
        return Err(Error::Domain("r must be at least 1".into()));
    }
    let qr = qpow(q, r as u64);
    let mut total = BigUint::zero();
    for k in 0..=n.min(r) {
        let mut prod = BigUint::one();
        for i in 0..k {
            prod *= &qr - qpow(q, i as u64);
        }
        total += isotropic_subspace_count(n, k, q)? * prod;
    }
    Ok(total)
}

/// `P_r = I_r(n) / q^{2nr}`.
pub fn p_r_q(q: u64, n: u32, r: u32) -> Result<ExactRational> {
    let count = isotropic_tuples_closed(q, n, r)?;
    Ok(ExactRational::from_biguint_ratio(
        &count,
        &qpow(q, 2 * n as u64 * r as u64),
    ))
}

/// The low-rank closed forms for `P_2`, `P_3`, `P_4`.
pub fn p2_p3_p4_closed(q: u64, n: u32) -> Result<(ExactRational, ExactRational, ExactRational)> {
    check_q(q)?;
    let qi = q as i64;
    let qq = ExactRational::from_integer(qi);
    let one = ExactRational::one();
    let t = ExactRational::inv_pow(q, 2 * n); // q^{-2n}
    let p2 = qq.recip() + (&one - qq.recip()) * &t;
    let p3 = ExactRational::from_biguint_ratio(
        &(qpow(q, 2 * n as u64) + qpow(q, 3) - 1u32),
        &qpow(q, 2 * n as u64 + 3),
    );
    let q2 = qi * qi;
    let q3 = q2 * qi;
    let q4 = q3 * qi;
    let q5 = q4 * qi;
    let p4 = ExactRational::inv_pow(q, 6)
        + ExactRational::new(q5 + q3 - q2 - 1, q4 * q2) * &t
        + ExactRational::new(q4 - q3 - qi + 1, q4) * &t * &t;
    Ok((p2, p3, p4))
}

#[derive(Clone, Debug, Serialize)]
pub struct AsymptoticRow {
    pub n: u32,
    pub p_r: ExactRational,
    pub difference: ExactRational,
    pub envelope: ExactRational,
}

#[derive(Clone, Debug, Serialize)]
pub struct AsymptoticReport {
    pub q: u64,
    pub r: u32,
    pub limit: ExactRational,
    pub rows: Vec<AsymptoticRow>,
    pub strictly_decreasing: bool,
    pub within_envelope: bool,
}

impl AsymptoticReport {
    pub fn holds(&self) -> bool {
        self.strictly_decreasing && self.within_envelope
    }
}

/// `|P_r(n) - q^{-r(r-1)/2}|` for `n = 1..=n_max`, checked to be strictly
/// decreasing and below `q^{-2n+r²}`. For `r = 1` every difference is zero,
/// and "decreasing" is read as "identically zero".
pub fn asymptotic_check(q: u64, r: u32, n_max: u32) -> Result<AsymptoticReport> {
    let limit = ExactRational::inv_pow(q, r * (r - 1) / 2);
    let mut rows = Vec::new();
    for n in 1..=n_max {
        let p = p_r_q(q, n, r)?;
        let difference = (&p - &limit).abs();
        let envelope =
            ExactRational::from_integer(q as i64).pow(r as i32 * r as i32 - 2 * n as i32);
        rows.push(AsymptoticRow {
            n,
            p_r: p,
            difference,
            envelope,
        });
    }
    let strictly_decreasing = if r == 1 {
        rows.iter().all(|row| row.difference.is_zero())
    } else {
        rows.windows(2).all(|w| w[1].difference < w[0].difference)
    };
    let within_envelope = rows.iter().all(|row| row.difference < row.envelope);
    Ok(AsymptoticReport {
        q,
        r,
        limit,
        rows,
        strictly_decreasing,
        within_envelope,
    })
}

fn exact_sqrt(x: &BigInt) -> Option<BigInt> {
    if x.is_negative() {
        return None;
    }
    let s = x.sqrt();
    (&s * &s == *x).then_some(s)
}

/// If `r = num/den` is a positive integer power `q^e` (returning `e`).
fn int_log(value: &ExactRational, q: u64) -> Option<u32> {
    if !value.is_integer() || !value.is_positive() {
        return None;
    }
    let mut v = value.numer().clone();
    let q = BigInt::from(q);
    let mut e = 0;
    while v > BigInt::one() {
        let (quot, rem) = v.div_rem(&q);
        if !rem.is_zero() {
            return None;
        }
        v = quot;
        e += 1;
    }
    Some(e)
}

/// Recovers `(q, n)` from `(P_2, P_3)` of an `F_q`-Heisenberg group of rank
/// `n ≥ 1`, or `None` if the data is not of that form.
///
/// `q` is the positive root of `(P_2-P_3)X² + (P_2-1)X + (P_2-1) = 0`, and
/// `q^{-2n} = (qP_2 - 1)/(q - 1)`.
pub fn identify_heisenberg(p2: &ExactRational, p3: &ExactRational) -> Option<(u64, u32)> {
    let one = ExactRational::one();
    let a = p2 - p3;
    let b = p2 - &one;
    if !a.is_positive() {
        return None;
    }
    // disc = b² - 4ab, since c = b.
    let disc = &b * &b - ExactRational::from_integer(4) * &a * &b;
    let num = exact_sqrt(disc.numer())?;
    let den = exact_sqrt(disc.denom())?;
    let root = ExactRational::new(num, den);
    let x = (root - &b) / (ExactRational::from_integer(2) * &a);
    if !x.is_integer() {
        return None;
    }
    let q = x.numer().to_u64()?;
    if q < 2 || prime_power(q).is_none() {
        return None;
    }
    let t = (ExactRational::from_integer(q as i64) * p2 - &one)
        / ExactRational::from_integer(q as i64 - 1);
    if !t.is_positive() {
        return None;
    }
    let e = int_log(&t.recip(), q)?;
    if e == 0 || e % 2 != 0 {
        return None;
    }
    let n = e / 2;
    let (c2, c3, _) = p2_p3_p4_closed(q, n).ok()?;
    (c2 == *p2 && c3 == *p3).then_some((q, n))
}

/// For `|G'| = p`: recovers `n` from `p^{2n} = (p-1)/(pP_2 - 1)`.
pub fn rank1_identify(p: u64, p2: &ExactRational) -> Result<Option<u32>> {
    let pr = ExactRational::from_integer(p as i64);
    let denom = &pr * p2 - ExactRational::one();
    if !denom.is_positive() {
        return Err(Error::Domain(format!(
            "p·P_2 = {} ≤ 1, so (p-1)/(p·P_2-1) is undefined or negative",
            &pr * p2
        )));
    }
    let v = ExactRational::from_integer(p as i64 - 1) / denom;
    Ok(match int_log(&v, p) {
        Some(e) if e > 0 && e % 2 == 0 => Some(e / 2),
        _ => None,
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct SeriesData {
    pub q: u64,
    pub n: u32,
    /// `c_j` for `j = 0..=n`; `P_r = Σ_j c_j q^{-(2n-j)r}`.
    pub coefficients: Vec<ExactRational>,
    /// `q^n, ..., q^{2n}`, in increasing order.
    #[serde(serialize_with = "crate::bigser::many")]
    pub pole_candidates: Vec<BigUint>,
    /// Candidates whose coefficient is nonzero.
    #[serde(serialize_with = "crate::bigser::many")]
    pub poles: Vec<BigUint>,
    #[serde(serialize_with = "crate::bigser::one")]
    pub leading_isotropic_coeff: BigUint,
}

impl SeriesData {
    pub fn evaluate(&self, r: u32) -> ExactRational {
        self.coefficients
            .iter()
            .enumerate()
            .map(|(j, c)| c * ExactRational::inv_pow(self.q, (2 * self.n - j as u32) * r))
            .sum()
    }
}

/// Multiplies out `Π_{i<k} (X - q^i)` for each `k` and collects the
/// coefficient of `X^j = q^{rj}`.
pub fn series_data(q: u64, n: u32) -> Result<SeriesData> {
    check_q(q)?;
    let nn = n as usize;
    let mut c = vec![BigInt::zero(); nn + 1];
    // poly = Π_{i<k}(X - q^i), low degree first
    let mut poly = vec![BigInt::one()];
    for k in 0..=n {
        let l = BigInt::from(isotropic_subspace_count(n, k, q)?);
        for (j, e) in poly.iter().enumerate() {
            c[j] += &l * e;
        }
        let root = BigInt::from(qpow(q, k as u64));
        let mut next = vec![BigInt::zero(); poly.len() + 1];
        for (j, e) in poly.iter().enumerate() {
            next[j + 1] += e;
            next[j] -= &root * e;
        }
        poly = next;
    }
    let leading = isotropic_subspace_count(n, n, q)?;
    assert_eq!(
        c[nn],
        BigInt::from(leading.clone()),
        "c_n must equal L_{{n,n}}"
    );
    let pole_candidates: Vec<BigUint> = (n..=2 * n).map(|e| qpow(q, e as u64)).collect();
    // c_j ↔ pole q^{2n-j}
    let mut poles: Vec<BigUint> = (0..=nn)
        .filter(|&j| !c[j].is_zero())
        .map(|j| qpow(q, (2 * nn - j) as u64))
        .collect();
    poles.sort();
    Ok(SeriesData {
        q,
        n,
        coefficients: c.into_iter().map(ExactRational::from).collect(),
        pole_candidates,
        poles,
        leading_isotropic_coeff: leading,
    })
}

/// `(m(G), N_max(G)) = (q^{n+1}, L_{n,n}(q))`: the largest abelian
/// subgroup order and the number of abelian subgroups of that order.
pub fn max_abelian_constants(q: u64, n: u32) -> Result<(BigUint, BigUint)> {
    Ok((qpow(q, n as u64 + 1), isotropic_subspace_count(n, n, q)?))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::rat;

    #[test]
    fn subspace_counts() {
        assert_eq!(isotropic_subspace_count(1, 1, 3).unwrap(), big(4));
        assert_eq!(isotropic_subspace_count(2, 2, 2).unwrap(), big(15));
        assert_eq!(isotropic_subspace_count(2, 2, 3).unwrap(), big(40));
        assert_eq!(isotropic_subspace_count(5, 0, 7).unwrap(), big(1));
        assert!(isotropic_subspace_count(1, 2, 3).is_err());
    }

    #[test]
    fn products_of_q_power_plus_one() {
        for q in [2u64, 3, 4, 5] {
            for n in 0..6u32 {
                let expect: BigUint = (1..=n).map(|i| qpow(q, i as u64) + 1u32).product();
                assert_eq!(isotropic_subspace_count(n, n, q).unwrap(), expect);
            }
        }
    }

    #[test]
    fn small_tuple_counts() {
        assert_eq!(isotropic_tuples_recursive(2, 1, 2).unwrap(), big(10));
        assert_eq!(isotropic_tuples_recursive(2, 1, 3).unwrap(), big(22));
        assert_eq!(isotropic_tuples_closed(2, 1, 3).unwrap(), big(22));
        assert_eq!(isotropic_tuples_closed(7, 0, 5).unwrap(), big(1));
        assert_eq!(isotropic_tuples_recursive(7, 0, 5).unwrap(), big(1));
        assert_eq!(isotropic_tuples_closed(3, 2, 1).unwrap(), big(81));
    }

    #[test]
    fn closed_low_rank_values() {
        let (p2, p3, p4) = p2_p3_p4_closed(3, 1).unwrap();
        assert_eq!(p2, rat(11, 27));
        assert_eq!(p3, rat(35, 243));
        assert_eq!(p4, rat(107, 2187));
        assert_eq!(p4, rat(81 + 27 - 1, 2187));
        assert_eq!(p_r_q(2, 1, 2).unwrap(), rat(5, 8));
        for r in 1..6 {
            assert_eq!(p_r_q(5, 0, r).unwrap(), ExactRational::one());
        }
    }

    #[test]
    fn asymptotics() {
        let rep = asymptotic_check(3, 2, 10).unwrap();
        assert!(rep.holds());
        let last = rep.rows.last().unwrap();
        assert_eq!(last.difference, rat(2, 3) * ExactRational::inv_pow(3, 20));
        assert!(asymptotic_check(2, 3, 8).unwrap().holds());
        assert!(asymptotic_check(2, 1, 5).unwrap().holds());
    }

    #[test]
    fn identification() {
        assert_eq!(
            identify_heisenberg(&rat(11, 27), &rat(35, 243)),
            Some((3, 1))
        );
        assert_eq!(identify_heisenberg(&rat(5, 8), &rat(11, 32)), Some((2, 1)));
        assert_eq!(identify_heisenberg(&rat(1, 2), &rat(2, 9)), None);
        assert_eq!(rank1_identify(2, &rat(5, 8)).unwrap(), Some(1));
        assert_eq!(rank1_identify(3, &rat(11, 27)).unwrap(), Some(1));
        assert!(matches!(
            rank1_identify(2, &rat(1, 2)),
            Err(Error::Domain(_))
        ));
        assert_eq!(rank1_identify(2, &rat(7, 12)).unwrap(), None);
    }

    #[test]
    fn series_small_cases() {
        let s = series_data(5, 1).unwrap();
        assert_eq!(
            s.coefficients,
            vec![
                ExactRational::from_integer(-5),
                ExactRational::from_integer(6)
            ]
        );
        assert_eq!(s.pole_candidates, vec![big(5), big(25)]);
        let s = series_data(3, 2).unwrap();
        assert_eq!(s.leading_isotropic_coeff, big(40));
        let s = series_data(4, 0).unwrap();
        assert_eq!(s.coefficients, vec![ExactRational::one()]);
        assert_eq!(s.poles, vec![big(1)]);
    }

    #[test]
    fn max_abelian() {
        assert_eq!(max_abelian_constants(3, 1).unwrap(), (big(9), big(4)));
        assert_eq!(max_abelian_constants(2, 2).unwrap(), (big(8), big(15)));
        assert_eq!(max_abelian_constants(7, 0).unwrap(), (big(7), big(1)));
    }
}
