use std::collections::BTreeSet;

use plumbob::contfrac::{hj_evaluate, hj_expand, LensParams};
use plumbob::gen::{enumerate_trees, random_tree, RandomTreeParams};
use plumbob::intform::{congruence_transform, determinant, smith_normal_form, IntMatrix};
use plumbob::legendrian::{self, c1_vector, conjugate_plan, run_plan};
use plumbob::openbook::{
    canonical_form, compose_from_edges, isomorphic, laminar_forest, openbook_from_decomposition,
    openbook_from_tree, PlanarOpenBook,
};
use plumbob::render::{page_layout, CircleKind};
use plumbob::rollup::{
    chain_decomposition_with, handle_slide_oracle_with, rolled_link_with, DecompositionOptions,
};
use plumbob::PlumbingTree;
use proptest::prelude::*;
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn tree_from_seed(seed: u64) -> PlumbingTree {
    random_tree(&mut ChaCha8Rng::seed_from_u64(seed), RandomTreeParams::default())
}

fn small_tree_from_seed(seed: u64) -> PlumbingTree {
    let params = RandomTreeParams {
        max_vertices: 4,
        min_euler: -4,
        ..RandomTreeParams::default()
    };
    random_tree(&mut ChaCha8Rng::seed_from_u64(seed), params)
}

/// Every decomposition choice: each ordered pair of distinct leaves as root
/// endpoints, with both tie-break directions.
fn decomposition_choices(t: &PlumbingTree) -> Vec<DecompositionOptions> {
    let leaves: Vec<usize> = (0..t.len()).filter(|&i| t.is_leaf(i)).collect();
    let mut out = vec![DecompositionOptions::default()];
    for &a in &leaves {
        for &b in &leaves {
            if a != b {
                for reverse_ties in [false, true] {
                    out.push(DecompositionOptions { root: Some((a, b)), reverse_ties });
                }
            }
        }
    }
    out
}

fn relabel(book: &PlanarOpenBook, seed: u64) -> PlanarOpenBook {
    let labels: Vec<&String> = book.boundaries().iter().collect();
    let mut fresh: Vec<String> = (0..labels.len()).map(|i| format!("z{i}")).collect();
    fresh.shuffle(&mut ChaCha8Rng::seed_from_u64(seed));
    let map = |l: &String| fresh[labels.iter().position(|x| *x == l).unwrap()].clone();
    PlanarOpenBook::new(
        labels.iter().map(|l| map(l)),
        book.curves().iter().map(|s| s.iter().map(map).collect::<Vec<_>>()),
    )
    .unwrap()
}

/// Isomorphism by trying every bijection of boundary labels.
fn brute_force_isomorphic(a: &PlanarOpenBook, b: &PlanarOpenBook) -> bool {
    if a.boundary_count() != b.boundary_count() || a.twist_count() != b.twist_count() {
        return false;
    }
    let la: Vec<&String> = a.boundaries().iter().collect();
    let lb: Vec<String> = b.boundaries().iter().cloned().collect();
    let mut perm: Vec<usize> = (0..la.len()).collect();
    loop {
        let image = PlanarOpenBook::new(
            lb.clone(),
            a.curves().iter().map(|s| {
                s.iter()
                    .map(|l| lb[perm[la.iter().position(|x| *x == l).unwrap()]].clone())
                    .collect::<Vec<_>>()
            }),
        )
        .unwrap();
        if image == *b {
            return true;
        }
        if !next_permutation(&mut perm) {
            return false;
        }
    }
}

fn next_permutation(p: &mut [usize]) -> bool {
    let Some(i) = (1..p.len()).rev().find(|&i| p[i - 1] < p[i]) else {
        return false;
    };
    let j = (i..p.len()).rev().find(|&j| p[j] > p[i - 1]).unwrap();
    p.swap(i - 1, j);
    p[i..].reverse();
    true
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn serialize_round_trips(seed in any::<u64>()) {
        let t = tree_from_seed(seed);
        let text = t.serialize();
        let back = PlumbingTree::parse(&text).unwrap();
        prop_assert_eq!(&back, &t);
        prop_assert_eq!(back.serialize(), text);
        let json = t.to_json().to_string();
        prop_assert_eq!(PlumbingTree::from_json(&json).unwrap(), t);
    }

    #[test]
    fn lens_round_trip(p in 2i64..5000, q in 1i64..5000) {
        prop_assume!(q < p);
        if let Ok(params) = LensParams::new(p, q) {
            let e = hj_expand(params);
            prop_assert!(e.coefficients().iter().all(|&c| c <= -2));
            prop_assert_eq!(hj_evaluate(&e).unwrap(), (p, q));
        }
    }

    #[test]
    fn congruence_under_every_decomposition(seed in any::<u64>()) {
        let t = tree_from_seed(seed);
        let a = t.intersection_matrix();
        let det = determinant(&a);
        for opts in decomposition_choices(&t).into_iter().take(12) {
            let l = rolled_link_with(&t, opts).unwrap();
            prop_assert_eq!(&congruence_transform(&a, &l.p).unwrap(), &l.q);
            prop_assert_eq!(&handle_slide_oracle_with(&t, opts).unwrap(), &l.q);
            prop_assert_eq!(determinant(&l.q).magnitude().clone(), det.magnitude().clone());
        }
    }

    #[test]
    fn books_do_not_depend_on_decomposition(seed in any::<u64>()) {
        let t = tree_from_seed(seed);
        let reference = canonical_form(&openbook_from_tree(&t).unwrap()).code;
        for opts in decomposition_choices(&t).into_iter().take(12) {
            let dec = chain_decomposition_with(&t, opts).unwrap();
            let direct = openbook_from_decomposition(&t, &dec).unwrap();
            prop_assert_eq!(&canonical_form(&direct).code, &reference);
            let plan = legendrian::plan_for_link(&t, rolled_link_with(&t, opts).unwrap());
            let ran = run_plan(&plan.moves).unwrap();
            prop_assert_eq!(&canonical_form(&ran).code, &reference);
        }
    }

    #[test]
    fn canonical_form_ignores_labels(seed in any::<u64>(), shuffle in any::<u64>()) {
        let b = openbook_from_tree(&tree_from_seed(seed)).unwrap();
        let r = relabel(&b, shuffle);
        prop_assert_eq!(canonical_form(&b).code, canonical_form(&r).code);
    }

    #[test]
    fn isomorphism_matches_brute_force(s1 in any::<u64>(), s2 in any::<u64>(), shuffle in any::<u64>()) {
        let a = compose_from_edges(&small_tree_from_seed(s1)).unwrap();
        let b = openbook_from_tree(&small_tree_from_seed(s2)).unwrap();
        prop_assume!(a.boundary_count() <= 7);
        prop_assert_eq!(isomorphic(&a, &b), brute_force_isomorphic(&a, &b));
        let r = relabel(&a, shuffle);
        prop_assert!(isomorphic(&a, &r));
        prop_assert!(brute_force_isomorphic(&a, &r));
    }

    #[test]
    fn conjugation_negates_c1(seed in any::<u64>()) {
        let p = legendrian::plan(&tree_from_seed(seed)).unwrap();
        let c = c1_vector(&p);
        let conj = conjugate_plan(&p);
        let n = c1_vector(&conj);
        prop_assert!(c.per_component.iter().zip(&n.per_component).all(|(a, b)| *a == -b));
        prop_assert!(c.per_vertex.iter().zip(&n.per_vertex).all(|(a, b)| *a == -b));
        prop_assert_eq!(conjugate_plan(&conj), p);
    }

    #[test]
    fn milnor_implies_non_positive(seed in any::<u64>()) {
        let params = RandomTreeParams { non_positive: false, ..RandomTreeParams::default() };
        let t = random_tree(&mut ChaCha8Rng::seed_from_u64(seed), params);
        let r = t.validate();
        prop_assert!(!r.milnor_criterion || r.non_positive);
        if r.non_positive {
            prop_assert!(r.negative_definite);
        }
    }

    #[test]
    fn smith_form_is_certified(entries in proptest::collection::vec(-6i64..6, 16)) {
        let rows: Vec<Vec<i64>> = entries.chunks(4).map(<[i64]>::to_vec).collect();
        let m = IntMatrix::from_rows(&rows);
        let snf = smith_normal_form(&m);
        prop_assert!(snf.verify(&m));
        let prod = snf.d.iter().fold(num_bigint::BigInt::from(1), |acc, d| acc * d);
        prop_assert_eq!(prod.magnitude().clone(), determinant(&m).magnitude().clone());
    }

    #[test]
    fn page_drawing_nests_like_the_forest(seed in any::<u64>()) {
        let b = openbook_from_tree(&tree_from_seed(seed)).unwrap();
        let layout = page_layout(&b);
        let forest = laminar_forest(&b, &layout.root).unwrap();
        prop_assert_eq!(forest.root.as_str(), layout.root.as_str());
        let outer = &layout.circles[0];
        let holes: Vec<_> = layout
            .circles
            .iter()
            .filter(|c| matches!(&c.kind, CircleKind::Binding { outer: false, .. }))
            .collect();
        prop_assert_eq!(holes.len() + 1, b.boundary_count());
        for c in &layout.circles[1..] {
            prop_assert!(outer.contains(c));
            if let CircleKind::Twist { side, .. } = &c.kind {
                let inside: BTreeSet<String> = holes
                    .iter()
                    .filter(|h| c.contains(h))
                    .map(|h| match &h.kind {
                        CircleKind::Binding { label, .. } => label.clone(),
                        CircleKind::Twist { .. } => unreachable!(),
                    })
                    .collect();
                prop_assert_eq!(&inside, side);
            }
        }
        // siblings and unrelated curves never overlap
        for (i, x) in layout.circles.iter().enumerate().skip(1) {
            for y in &layout.circles[i + 1..] {
                let d = ((x.cx - y.cx).powi(2) + (x.cy - y.cy).powi(2)).sqrt();
                let nested = x.contains(y) || y.contains(x);
                prop_assert!(nested || d >= x.r + y.r - 1e-9);
            }
        }
    }
}

#[test]
fn full_enumeration_routes_agree() {
    let trees = enumerate_trees(6, &[-2, -3, -4, -5]);
    assert_eq!(trees.len(), 8137);
    for t in &trees {
        let direct = canonical_form(&openbook_from_tree(t).unwrap()).code;
        assert_eq!(canonical_form(&compose_from_edges(t).unwrap()).code, direct, "{t}");
        let ran = run_plan(&legendrian::plan(t).unwrap().moves).unwrap();
        assert_eq!(canonical_form(&ran).code, direct, "{t}");
    }
}
