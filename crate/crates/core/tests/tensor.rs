mod common;

use commprob::catalog::*;
use commprob::engine::{p_r, prob, Method};
use commprob::group::center;
use commprob::rational::rat;
use commprob::symplectic::{isotropic_tuples_closed, p2_p3_p4_closed};
use commprob::tensor::*;
use commprob::{Error, ExactRational, FiniteGroup};
use num_bigint::BigUint;

use common::*;

fn class2_corpus() -> Vec<FiniteGroup> {
    let h3 = build_heisenberg(3, 1, 1).unwrap();
    let c3 = cyclic(3).unwrap();
    vec![
        h3.clone(),
        build_jordan_semidirect(3, 1).unwrap(),
        h3.direct_product(&c3),
        h3.direct_product(&elementary_abelian(3, 2).unwrap()),
        build_heisenberg(3, 1, 2).unwrap(),
        build_heisenberg(5, 1, 1).unwrap(),
        h3.direct_product(&h3),
        build_heisenberg(3, 2, 1).unwrap(),
        elementary_abelian(3, 3).unwrap(),
    ]
}

#[test]
fn isotropic_counts_reproduce_engine() {
    for g in class2_corpus() {
        let t = extract_tensor(&g).unwrap();
        assert!(t.is_alternating());
        let z = BigUint::from(center(&g).order());
        for r in 1..=3 {
            let n = isotropic_count_tensor(&t, r).unwrap();
            let engine = p_r(&g, r, Method::KappaRecursion).unwrap().comm_count;
            assert_eq!(
                n * num_traits::pow(z.clone(), r as usize),
                engine,
                "{} r={r}",
                g.name()
            );
        }
    }
}

#[test]
fn rank_distribution_matches_engine() {
    for g in class2_corpus() {
        let t = extract_tensor(&g).unwrap();
        assert_eq!(p2_rank_distribution(&t), prob(&g, 2), "{}", g.name());
    }
}

#[test]
fn span_recursion_matches_direct() {
    for g in class2_corpus() {
        let t = extract_tensor(&g).unwrap();
        for r in 0..=2 {
            match isotropic_span_count(&t, r) {
                Ok(n) => assert_eq!(
                    n,
                    isotropic_count_tensor(&t, r + 1).unwrap(),
                    "{} r={r}",
                    g.name()
                ),
                Err(Error::BudgetExceeded { .. }) => {}
                Err(e) => panic!("{e}"),
            }
        }
    }
}

#[test]
fn full_contraction_cases() {
    for g in class2_corpus() {
        let rep = check_full_contraction(&g).unwrap();
        if rep.holds {
            assert_eq!(rep.p2_formula.as_ref(), Some(&rep.p2_engine));
            assert_eq!(rep.uniform_centralizers, Some(true));
        }
    }
    let h9 = build_heisenberg(3, 2, 1).unwrap();
    let (holds, p2) = full_contraction_check(&extract_tensor(&h9).unwrap());
    assert!(holds);
    assert_eq!(
        p2.unwrap(),
        ExactRational::inv_pow(3, 4) + rat(80, 81) * ExactRational::inv_pow(3, 2)
    );

    let h32 = build_heisenberg(3, 1, 2).unwrap();
    let (holds, p2) = full_contraction_check(&extract_tensor(&h32).unwrap());
    assert!(holds);
    assert_eq!(
        p2.unwrap(),
        ExactRational::inv_pow(3, 4) + rat(80, 81) * rat(1, 3)
    );

    let g = build_heisenberg(3, 1, 1)
        .unwrap()
        .direct_product(&cyclic(3).unwrap());
    let t = extract_tensor(&g).unwrap();
    assert_eq!((t.dim_v, t.dim_w), (2, 1));
    assert!(full_contraction_check(&t).0);

    let h3 = build_heisenberg(3, 1, 1).unwrap();
    let t = extract_tensor(&h3.direct_product(&h3)).unwrap();
    assert_eq!((t.dim_v, t.dim_w), (4, 2));
    assert_eq!(full_contraction_check(&t), (false, None));
}

#[test]
fn tensor_examples() {
    let h = build_heisenberg(3, 1, 1).unwrap();
    let t = extract_tensor(&h).unwrap();
    assert_eq!((t.dim_v, t.dim_w), (2, 1));
    assert_ne!(t.beta[0][1][0], 0);
    assert_eq!(t.beta[0][1][0] + t.beta[1][0][0], 3);
    assert_eq!(isotropic_count_tensor(&t, 2).unwrap(), BigUint::from(33u32));
    assert_eq!(
        rat(11, 27) * ExactRational::from_integer(81),
        ExactRational::from_integer(33)
    );
    assert_eq!(
        isotropic_span_count(&t, 2).unwrap(),
        isotropic_count_tensor(&t, 3).unwrap()
    );
    assert_eq!(isotropic_span_count(&t, 0).unwrap(), BigUint::from(9u32));

    let d8 = dihedral(4).unwrap();
    let t = extract_tensor(&d8).unwrap();
    assert_eq!((t.p, t.dim_v, t.dim_w), (2, 2, 1));
    assert_eq!(
        isotropic_count_tensor(&t, 2).unwrap(),
        isotropic_tuples_closed(2, 1, 2).unwrap()
    );
    assert_eq!(isotropic_span_count(&t, 1).unwrap(), BigUint::from(10u32));

    let c = abelian(&[3, 9]).unwrap();
    let t = extract_tensor(&c).unwrap();
    assert_eq!(t.dim_v, 0);
    assert_eq!(isotropic_count_tensor(&t, 4).unwrap(), BigUint::from(1u32));
    assert_eq!(p2_rank_distribution(&t), ExactRational::one());
}

#[test]
fn rejections() {
    for g in [
        symmetric(3).unwrap(),
        build_jordan_semidirect(2, 2).unwrap(),
        modular_pe(3, 3)
            .unwrap()
            .direct_product(&modular_pe(3, 2).unwrap()),
    ] {
        assert!(
            matches!(extract_tensor(&g), Err(Error::NotClass2ExponentP(_))),
            "{}",
            g.name()
        );
    }
    assert!(isotropic_count_tensor_with_budget(
        &extract_tensor(&build_heisenberg(3, 2, 1).unwrap()).unwrap(),
        2,
        100
    )
    .is_err());
}

#[test]
fn symplectic_reduction() {
    let r = verify_symplectic_reduction(&dihedral(4).unwrap()).unwrap();
    assert_eq!((r.p, r.n), (2, 1));
    let r = verify_symplectic_reduction(&quaternion8()).unwrap();
    assert_eq!((r.p, r.n), (2, 1));
    let h = build_heisenberg(3, 1, 1).unwrap();
    let a = verify_symplectic_reduction(&h).unwrap();
    let b = verify_symplectic_reduction(&h.direct_product(&cyclic(9).unwrap())).unwrap();
    assert_eq!((b.p, b.n), (3, 1));
    assert_eq!(a.rows, b.rows);
    let r = verify_symplectic_reduction(&build_heisenberg(3, 1, 2).unwrap()).unwrap();
    assert_eq!(r.n, 2);
    for g in [cyclic(4).unwrap(), build_heisenberg(3, 2, 1).unwrap()] {
        assert!(matches!(
            verify_symplectic_reduction(&g),
            Err(Error::HypothesisNotMet(_))
        ));
    }
}

#[test]
fn rank_one_closed_forms() {
    for g in catalog(64) {
        let Ok(rep) = verify_symplectic_reduction(g) else {
            continue;
        };
        let (p2, p3, _) = p2_p3_p4_closed(rep.p, rep.n).unwrap();
        assert_eq!(prob(g, 2), p2, "{}", g.name());
        assert_eq!(prob(g, 3), p3, "{}", g.name());
        let low = ExactRational::new(1, rep.p)
            + ExactRational::new(rep.p - 1, rep.p) * ExactRational::inv_pow(rep.p, 2 * rep.n);
        assert_eq!(p2, low);
    }
}

#[test]
fn rank_helper() {
    assert_eq!(rank_mod_p(vec![vec![1, 2], vec![2, 4]], 5), 1);
    assert_eq!(rank_mod_p(vec![vec![1, 2], vec![2, 1]], 3), 1);
    assert_eq!(rank_mod_p(vec![vec![1, 2], vec![2, 1]], 5), 2);
    assert_eq!(rank_mod_p(vec![], 5), 0);
    let naive_p2 = |g: &FiniteGroup| {
        rat(
            naive_comm_count(g, 2) as i64,
            (g.order() * g.order()) as i64,
        )
    };
    let h = build_heisenberg(3, 1, 1).unwrap();
    assert_eq!(
        p2_rank_distribution(&extract_tensor(&h).unwrap()),
        naive_p2(&h)
    );
}
