mod common;

use commprob::catalog::*;
use commprob::group::*;
use commprob::{Error, FiniteGroup};
use proptest::prelude::*;

use common::*;

#[test]
fn cayley_ingestion() {
    let g = FiniteGroup::from_cayley_table(&[vec![0]], "C1").unwrap();
    assert_eq!(g.order(), 1);

    let s3 = FiniteGroup::from_cayley_table(&symmetric_table(3), "S3").unwrap();
    assert_eq!(
        conjugacy_classes(&s3).class_count(),
        naive_classes(&s3).len()
    );
    assert_eq!(naive_classes(&s3).len(), 3);

    let bad = FiniteGroup::from_cayley_table(&[vec![0, 1], vec![1, 1]], "bad");
    assert!(matches!(bad, Err(Error::NotAGroup(_))));
}

#[test]
fn non_associative_loop_rejected() {
    let table = vec![
        vec![0, 1, 2, 3, 4],
        vec![1, 0, 3, 4, 2],
        vec![2, 4, 0, 1, 3],
        vec![3, 2, 4, 0, 1],
        vec![4, 3, 1, 2, 0],
    ];
    match FiniteGroup::from_cayley_table(&table, "loop") {
        Err(Error::NotAGroup(msg)) => assert!(msg.contains("associativ"), "{msg}"),
        other => panic!("expected NotAGroup, got {other:?}"),
    }
}

#[test]
fn identity_is_relabelled_to_zero() {
    // C3 with the identity stored at label 2.
    let relabel = [2usize, 0, 1];
    let c3 = cyclic_table(3);
    let mut t = vec![vec![0; 3]; 3];
    for a in 0..3 {
        for b in 0..3 {
            t[relabel[a]][relabel[b]] = relabel[c3[a][b]];
        }
    }
    let g = FiniteGroup::from_cayley_table(&t, "C3").unwrap();
    for x in 0..3 {
        assert_eq!(g.mul(0, x), x);
        assert_eq!(g.mul(x, 0), x);
        assert_eq!(g.mul(x, g.inv(x)), 0);
    }
}

#[test]
fn permutation_generators() {
    let s3 = from_permutation_generators(3, &[vec![vec![1, 2]], vec![vec![1, 2, 3]]], 100, "S3")
        .unwrap();
    assert_eq!(s3.order(), 6);
    let c4 = from_permutation_generators(4, &[vec![vec![1, 2, 3, 4]]], 100, "C4").unwrap();
    assert_eq!(c4.order(), 4);
    assert!(is_abelian(&c4));
    let capped = from_permutation_generators(2, &[vec![vec![1, 2]]], 1, "C2");
    assert!(matches!(capped, Err(Error::ClosureExceedsCap { cap: 1 })));
}

#[test]
fn group_files() {
    let text = r#"{"name": "C3", "order": 3, "table": [[0,1,2],[1,2,0],[2,0,1]]}"#;
    assert_eq!(parse_group_json(text).unwrap().order(), 3);
    let text = r#"{"name": "S3", "degree": 3, "generators": [[[1,2]], [[1,2,3]]]}"#;
    assert_eq!(parse_group_json(text).unwrap().order(), 6);
    let text = r#"{"name": "C3", "order": 4, "table": [[0,1,2],[1,2,0],[2,0,1]]}"#;
    assert!(parse_group_json(text).is_err());
    assert!(matches!(parse_group_json("{"), Err(Error::Parse(_))));

    let d8 = dihedral(4).unwrap();
    let json = serde_json::to_string(&CayleyFile::from(&d8)).unwrap();
    let back = parse_group_json(&json).unwrap();
    assert_eq!(back.rows(), d8.rows());
}

#[test]
fn classes_examples() {
    let s3 = symmetric(3).unwrap();
    let mut sizes = conjugacy_classes(&s3).class_sizes.clone();
    sizes.sort();
    assert_eq!(sizes, vec![1, 2, 3]);
    assert_eq!(
        conjugacy_classes(&cyclic(4).unwrap()).class_sizes,
        vec![1; 4]
    );
    let d8 = FiniteGroup::from_cayley_table(&dihedral_table(4), "D8").unwrap();
    assert_eq!(conjugacy_classes(&d8).class_count(), 5);
}

#[test]
fn centralizer_examples() {
    let s3 = FiniteGroup::from_cayley_table(&symmetric_table(3), "S3").unwrap();
    let t = (0..6).find(|&x| s3.element_order(x) == 2).unwrap();
    assert_eq!(centralizer(&s3, &[t]).order(), 2);
    assert_eq!(centralizer(&s3, &[0]).order(), 6);

    // r = 1, s = 4 in the dihedral labelling.
    let d8 = FiniteGroup::from_cayley_table(&dihedral_table(4), "D8").unwrap();
    let c = centralizer(&d8, &[1, 4]);
    assert_eq!(c.order(), 2);
    assert_eq!(c, center(&d8));
}

#[test]
fn structure_examples() {
    let d8 = dihedral(4).unwrap();
    let z = center(&d8);
    assert_eq!(z.order(), 2);
    let q = quotient(&d8, &z).unwrap();
    assert_eq!(q.order(), 4);
    assert!(q.elements().all(|x| q.element_order(x) <= 2));

    let s3 = symmetric(3).unwrap();
    assert_eq!(derived_subgroup(&s3).order(), 3);
    let t = (0..6).find(|&x| s3.element_order(x) == 2).unwrap();
    let h = SubgroupView::generated_by(&s3, &[t]);
    assert!(matches!(quotient(&s3, &h), Err(Error::NotNormal { .. })));

    let h27 = build_heisenberg(3, 1, 1).unwrap();
    assert_eq!(exponent(&h27), 3);
    assert!(nilpotency_class_le2(&h27));
    assert!(!nilpotency_class_le2(&symmetric(3).unwrap()));
}

#[test]
fn maximal_abelian_examples() {
    let d8 = dihedral(4).unwrap();
    let m = maximal_abelian_subgroups(&d8, true);
    assert_eq!(m.len(), 3);
    let mut orders: Vec<usize> = m.iter().map(|s| s.order()).collect();
    orders.sort();
    assert_eq!(orders, vec![4, 4, 4]);
    assert_eq!(
        m.iter()
            .filter(|s| s.elements().iter().any(|&x| d8.element_order(x) == 4))
            .count(),
        1
    );

    let c6 = cyclic(6).unwrap();
    let m = maximal_abelian_subgroups(&c6, false);
    assert_eq!(m.len(), 1);
    assert_eq!(m[0].order(), 6);

    let h = build_heisenberg(3, 1, 1).unwrap();
    let m = maximal_abelian_subgroups(&h, true);
    assert_eq!(m.len(), 4);
    assert!(m.iter().all(|s| s.order() == 9));
}

/// Maximal abelian subgroups by brute force: abelian subgroups not strictly
/// contained in another abelian subgroup.
fn naive_maximal_abelian(g: &FiniteGroup) -> Vec<Vec<u32>> {
    let abelian: Vec<Vec<u32>> = all_subgroups(g)
        .into_iter()
        .filter(|s| s.is_abelian())
        .map(|s| s.elements().to_vec())
        .collect();
    let mut out: Vec<Vec<u32>> = abelian
        .iter()
        .filter(|a| {
            !abelian
                .iter()
                .any(|b| b.len() > a.len() && a.iter().all(|x| b.contains(x)))
        })
        .cloned()
        .collect();
    out.sort();
    out
}

#[test]
fn maximal_abelian_matches_brute_force() {
    for g in small_catalog(32) {
        let mut fast: Vec<Vec<u32>> = maximal_abelian_subgroups(&g, false)
            .iter()
            .map(|s| s.elements().to_vec())
            .collect();
        fast.sort();
        assert_eq!(fast, naive_maximal_abelian(&g), "{}", g.name());
    }
}

#[test]
fn central_quotient_cyclic_iff_abelian() {
    for g in small_catalog(64) {
        let z = center(&g);
        let q = quotient(&g, &z).unwrap();
        let cyclic = q.elements().any(|x| q.element_order(x) == q.order() as u64);
        assert_eq!(cyclic, is_abelian(&g), "{}", g.name());
    }
}

fn corpus() -> &'static [FiniteGroup] {
    catalog(64)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn class_partition(idx in 0usize..1000) {
        let groups = corpus();
        let g = &groups[idx % groups.len()];
        let data = conjugacy_classes(g);
        prop_assert_eq!(data.class_sizes.iter().sum::<usize>(), g.order());
        prop_assert!(data.class_sizes.iter().all(|s| g.order().is_multiple_of(*s)));
        let naive = naive_classes(g);
        prop_assert_eq!(data.class_count(), naive.len());
        for (c, members) in naive.iter().enumerate() {
            prop_assert_eq!(data.representatives[c], members[0]);
            prop_assert_eq!(data.class_sizes[c], members.len());
        }
    }

    #[test]
    fn orbit_stabilizer(idx in 0usize..1000, x in 0u32..1000) {
        let groups = corpus();
        let g = &groups[idx % groups.len()];
        let x = x % g.order() as u32;
        let data = conjugacy_classes(g);
        let size = data.class_sizes[data.class_of[x as usize] as usize];
        let c = centralizer(g, &[x]);
        prop_assert_eq!(c.order() * size, g.order());
        prop_assert_eq!(c.elements().to_vec(), naive_centralizer(g, &[x]));
    }

    #[test]
    fn center_is_intersection(idx in 0usize..1000) {
        let groups = corpus();
        let g = &groups[idx % groups.len()];
        let z = center(g);
        prop_assert_eq!(z.order(), naive_center_order(g));
        let all: Vec<u32> = g.elements().collect();
        prop_assert_eq!(z.clone(), centralizer(g, &all));
    }

    #[test]
    fn maximal_abelian_fixpoints(idx in 0usize..1000) {
        let groups = catalog(48);
        let g = &groups[idx % groups.len()];
        let m = maximal_abelian_subgroups(g, false);
        let mut covered = vec![false; g.order()];
        for (i, s) in m.iter().enumerate() {
            prop_assert_eq!(naive_centralizer(g, s.elements()), s.elements().to_vec());
            for t in &m[i + 1..] {
                prop_assert!(s != t);
            }
            for &x in s.elements() {
                covered[x as usize] = true;
            }
        }
        prop_assert!(covered.iter().all(|&c| c));
    }

    #[test]
    fn relabelling_preserves_invariants(idx in 0usize..1000, seed in any::<u64>()) {
        use rand::seq::SliceRandom;
        use rand::SeedableRng;
        let groups = catalog(32);
        let g = &groups[idx % groups.len()];
        let n = g.order();
        let mut perm: Vec<usize> = (0..n).collect();
        perm.shuffle(&mut rand_chacha::ChaCha8Rng::seed_from_u64(seed));
        let rows = g.rows();
        let mut t = vec![vec![0; n]; n];
        for a in 0..n {
            for b in 0..n {
                t[perm[a]][perm[b]] = perm[rows[a][b]];
            }
        }
        let h = FiniteGroup::from_cayley_table(&t, "relabelled").unwrap();
        prop_assert_eq!(conjugacy_classes(&h).class_count(), conjugacy_classes(g).class_count());
        prop_assert_eq!(center(&h).order(), center(g).order());
        prop_assert_eq!(derived_subgroup(&h).order(), derived_subgroup(g).order());
        prop_assert_eq!(exponent(&h), exponent(g));
    }

    #[test]
    fn subgroup_views_materialize(idx in 0usize..1000, x in 0u32..1000, y in 0u32..1000) {
        let groups = corpus();
        let g = &groups[idx % groups.len()];
        let n = g.order() as u32;
        let h = SubgroupView::generated_by(g, &[x % n, y % n]);
        prop_assert!(h.contains(0));
        for &a in h.elements() {
            prop_assert!(h.contains(g.inv(a)));
            for &b in h.elements() {
                prop_assert!(h.contains(g.mul(a, b)));
            }
        }
        let m = h.to_group();
        prop_assert_eq!(m.order(), h.order());
        prop_assert_eq!(g.order() % h.order(), 0);
    }
}
