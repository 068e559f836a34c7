use clap::ValueEnum;
use commprob::bounds::*;
use commprob::engine::prob;
use commprob::group::{center, derived_subgroup, is_abelian};
use commprob::tensor::*;
use commprob::{Error, ExactRational, FiniteGroup, Result};
use num_bigint::BigUint;

use crate::report::{Assertion, Report, ResultEntry};

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Suite {
    Bounds,
    CyclicIndex,
    Inequalities,
    Gap,
    PrimeIndex,
    Class2,
}

impl Suite {
    pub fn default_rmax(self) -> u32 {
        match self {
            Suite::Bounds => 4,
            Suite::CyclicIndex | Suite::Inequalities => 5,
            Suite::Gap | Suite::PrimeIndex => 3,
            Suite::Class2 => 3,
        }
    }
}

/// Runs `suite`, appending to `rep`. Validator violations become failed
/// assertions; hypothesis and budget errors propagate.
pub fn run(suite: Suite, g: &FiniteGroup, rmax: u32, rep: &mut Report) -> Result<()> {
    match suite {
        Suite::Bounds => bounds(g, rmax, rep),
        Suite::CyclicIndex => cyclic_index(g, rmax, rep),
        Suite::Inequalities => inequalities(g, rmax, rep),
        Suite::Gap => gap(g, rep),
        Suite::PrimeIndex => prime_index(g, rep),
        Suite::Class2 => class2(g, rmax, rep),
    }
}

fn violation_or<T>(res: Result<T>, name: &str, rep: &mut Report) -> Result<Option<T>> {
    match res {
        Ok(v) => Ok(Some(v)),
        Err(Error::Violation(w)) => {
            rep.assertions.push(Assertion::check(name, false, w));
            Ok(None)
        }
        Err(e) => Err(e),
    }
}

fn bounds(g: &FiniteGroup, rmax: u32, rep: &mut Report) -> Result<()> {
    if is_abelian(g) {
        return Err(Error::AbelianInput);
    }
    let mut equal_at = Vec::new();
    let mut structure = false;
    for r in 2..=rmax {
        let name = format!("sharp bound r={r}");
        let Some(b) = violation_or(check_sharp_bound(g, r), &name, rep)? else {
            continue;
        };
        rep.results
            .push(ResultEntry::new(format!("P_{r}"), b.value.clone()));
        rep.results
            .push(ResultEntry::new(format!("bound_{r}"), b.bound.clone()));
        rep.assertions.push(Assertion::check(
            name,
            b.value <= b.bound,
            format!("P_{r} = {}, bound = {} (p = {})", b.value, b.bound, b.p),
        ));
        rep.assertions.push(Assertion::check(
            format!("equality iff G/Z = C{p} x C{p}, r={r}", p = b.p),
            b.is_equal == b.extremal_structure,
            format!(
                "equal = {}, G/Z = C{p} x C{p}: {}",
                b.is_equal,
                b.extremal_structure,
                p = b.p
            ),
        ));
        if b.is_equal {
            equal_at.push(r);
        }
        structure = b.extremal_structure;
    }
    rep.summary = Some(if equal_at.len() as u32 == rmax - 1 {
        format!("equality at all r = 2..{rmax}; G/Z = Cp x Cp: {structure}")
    } else {
        format!("equality at r in {equal_at:?}; G/Z = Cp x Cp: {structure}")
    });
    Ok(())
}

fn cyclic_index(g: &FiniteGroup, rmax: u32, rep: &mut Report) -> Result<()> {
    let data = all_cyclic_index_data(g);
    if data.is_empty() {
        return Err(Error::HypothesisNotMet(format!(
            "{} has no normal abelian subgroup with cyclic quotient",
            g.name()
        )));
    }
    let engine: Vec<ExactRational> = (2..=rmax).map(|r| prob(g, r)).collect();
    for (r, v) in (2..).zip(&engine) {
        rep.results
            .push(ResultEntry::new(format!("P_{r}"), v.clone()));
    }
    let mut negatives = 0;
    for (i, d) in data.iter().enumerate() {
        let base = format!("A{i} (|A| = {}, |G:A| = {}, |A∩Z| = {})", d.n, d.omega, d.f);
        let formula = (2..=rmax).map(|r| d.p_r(r)).collect::<Result<Vec<_>>>()?;
        if d.hypothesis_holds {
            for (r, (f, e)) in (2..).zip(formula.iter().zip(&engine)) {
                rep.assertions.push(Assertion::check(
                    format!("{base}: formula = engine at r={r}"),
                    f == e,
                    format!("formula {f}, engine {e}"),
                ));
            }
            continue;
        }
        let (j, size) = d.failure_witness.expect("failing hypothesis has a witness");
        let mismatch = (2..)
            .zip(formula.iter().zip(&engine))
            .find(|(_, (f, e))| f != e);
        match mismatch {
            Some((r, (f, e))) => {
                negatives += 1;
                rep.assertions.push(Assertion::expected_fail(
                    format!("{base}: formula without hypothesis"),
                    true,
                    format!(
                        "hypothesis fails at j={j} (|C_A(t^{j})| = {size}, |A∩Z| = {}); formula {f} vs engine {e} at r={r}",
                        d.f
                    ),
                ));
            }
            None => rep.warnings.push(format!(
                "{base}: hypothesis fails at j={j} but the formula agrees for r = 2..{rmax}"
            )),
        }
    }
    let holds = data.iter().filter(|d| d.hypothesis_holds).count();
    rep.summary = Some(format!(
        "{} candidate subgroups: {holds} satisfy the hypothesis, {negatives} negative controls",
        data.len()
    ));
    Ok(())
}

fn inequalities(g: &FiniteGroup, rmax: u32, rep: &mut Report) -> Result<()> {
    rep.results.push(ResultEntry::new("alpha", alpha(g)));
    for r in 2..=rmax {
        let (v, b) = (prob(g, r), one_step_bound(g, r));
        rep.assertions.push(Assertion::check(
            format!("one-step r={r}"),
            v <= b,
            format!("P_{r} = {v}, bound = {b}"),
        ));
    }
    for n in 1..rmax {
        for m in 1..=(rmax - n) {
            let (lo, hi) = two_block_bounds(g, n, m);
            let v = prob(g, n + m);
            rep.assertions.push(Assertion::check(
                format!("two-block n={n} m={m}"),
                lo <= v && v <= hi,
                format!("{lo} <= P_{} = {v} <= {hi}", n + m),
            ));
        }
    }
    if is_abelian(g) {
        rep.warnings
            .push("deficit bound skipped: abelian input".into());
        return Ok(());
    }
    let p = smallest_prime(g);
    for r in 2..=rmax {
        let deficit = sharp_bound(p, r) - prob(g, r);
        let lower = deficit_lower_bound(g, r)?;
        rep.assertions.push(Assertion::check(
            format!("deficit r={r}"),
            deficit >= lower,
            format!("deficit {deficit}, lower bound {lower}"),
        ));
    }
    Ok(())
}

fn gap(g: &FiniteGroup, rep: &mut Report) -> Result<()> {
    let (bound, triggered) = gap_p3(g)?;
    let p3 = prob(g, 3);
    let index = g.order() / center(g).order();
    rep.results.push(ResultEntry::new("P_3", p3.clone()));
    rep.results
        .push(ResultEntry::new("quadratic bound", bound.clone()));
    rep.assertions.push(Assertion::check(
        "P_3 <= 1/4 + alpha/4 + alpha^2/2",
        p3 <= bound,
        format!("P_3 = {p3}, bound = {bound}"),
    ));
    rep.assertions.push(Assertion::check(
        "P_3 > 11/36 implies |G:Z| = 4",
        !triggered || index == 4,
        format!("P_3 > 11/36: {triggered}, |G:Z| = {index}"),
    ));
    rep.summary = Some(format!("above 11/36: {triggered}"));
    Ok(())
}

fn prime_index(g: &FiniteGroup, rep: &mut Report) -> Result<()> {
    let Some(r) = violation_or(prime_index_equivalences(g), "prime-index equivalence", rep)? else {
        return Ok(());
    };
    rep.assertions.push(Assertion::check(
        "A is normal",
        r.a_is_normal,
        format!("|A| = {}, index {}", r.n, r.p),
    ));
    let c = r.conditions();
    rep.assertions.push(Assertion::check(
        "four conditions agree",
        r.agree(),
        format!(
            "|A∩Z| = |A|/p: {}, sharp equality at r=2,3: {}, G/Z = Cp x Cp: {}, {} maximal abelian subgroups containing Z (p+1: {})",
            c[0], c[1], c[2], r.max_abelian_containing_center, c[3]
        ),
    ));
    rep.summary = Some(format!(
        "all four conditions {}",
        if c[0] { "hold" } else { "fail" }
    ));
    Ok(())
}

fn class2(g: &FiniteGroup, rmax: u32, rep: &mut Report) -> Result<()> {
    let t = extract_tensor(g)?;
    rep.results
        .push(ResultEntry::integer("dim V", t.dim_v as u64));
    rep.results
        .push(ResultEntry::integer("dim W", t.dim_w as u64));
    rep.assertions.push(Assertion::check(
        "tensor is alternating",
        t.is_alternating(),
        "",
    ));
    let (dist, p2) = (p2_rank_distribution(&t), prob(g, 2));
    rep.assertions.push(Assertion::check(
        "rank distribution = P_2",
        dist == p2,
        format!("E[p^-rank] = {dist}, engine {p2}"),
    ));
    let z = BigUint::from(center(g).order());
    for r in 1..=rmax {
        let n = isotropic_count_tensor(&t, r)?;
        let engine =
            commprob::engine::p_r(g, r, commprob::engine::Method::KappaRecursion)?.comm_count;
        let scaled = &n * z.pow(r);
        rep.assertions.push(Assertion::check(
            format!("|Z|^{r} N_{r} = |Comm_{r}|"),
            scaled == engine,
            format!("N_{r} = {n}, |Comm_{r}| = {engine}"),
        ));
        let span = isotropic_span_count(&t, r - 1)?;
        rep.assertions.push(Assertion::check(
            format!("span recursion = direct, N_{r}"),
            span == n,
            format!("span {span}, direct {n}"),
        ));
    }
    if let Some(fc) = violation_or(check_full_contraction(g), "full contraction", rep)? {
        if fc.holds {
            let f = fc
                .p2_formula
                .clone()
                .expect("formula present when full contraction holds");
            rep.assertions.push(Assertion::check(
                "full-contraction P_2 formula",
                f == fc.p2_engine && fc.uniform_centralizers == Some(true),
                format!("formula {f}, engine {}", fc.p2_engine),
            ));
        }
        rep.summary = Some(format!("full contraction: {}", fc.holds));
    }
    if derived_subgroup(g).order() as u64 == t.p && t.dim_v > 0 {
        if let Some(s) = violation_or(verify_symplectic_reduction(g), "symplectic reduction", rep)?
        {
            rep.assertions.push(Assertion::check(
                "symplectic reduction r=2..4",
                true,
                format!("F_{}^{}, nondegenerate", s.p, 2 * s.n),
            ));
        }
    }
    Ok(())
}
