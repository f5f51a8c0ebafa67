//! Randomized invariants checked against the oracles in `common`.

mod common;

use std::collections::BTreeSet;

use flagrig::classify::{replay, Classifier};
use flagrig::free_lie::hall_basis;
use flagrig::json::{algebra_from_json, algebra_to_json, verdict_from_json, verdict_to_json};
use flagrig::linalg::SVec;
use flagrig::prolongation::tower_dims;
use flagrig::serre::parabolic_nilradical;
use flagrig::splitting::distribution_splitting;
use flagrig::{GradedLieAlgebra, MarkedDiagram, Root, RootSystem};
use proptest::prelude::*;

use common::*;

/// `(type, rank, 1-based marks)` for simple ADE diagrams up to `max_rank`.
fn marked_ade(max_rank: usize) -> impl Strategy<Value = (char, usize, Vec<usize>)> {
    prop::sample::select(ade_list(max_rank)).prop_flat_map(|(t, n)| {
        prop::sample::select(all_subsets(n)).prop_map(move |m| (t, n, m))
    })
}

fn any_type(max_rank: usize) -> impl Strategy<Value = (char, usize)> {
    let mut all = ade_list(max_rank);
    all.extend([('B', 2), ('B', 3), ('B', 4), ('C', 3), ('C', 4)]);
    prop::sample::select(all)
}

/// Rebuilds `g` with its basis reordered by `perm` (old index -> new index).
fn permuted(g: &GradedLieAlgebra, perm: &[usize]) -> GradedLieAlgebra {
    let n = g.dim();
    let mut labels = vec![String::new(); n];
    let mut degrees = vec![0; n];
    for i in 0..n {
        labels[perm[i]] = g.label(i).to_string();
        degrees[perm[i]] = g.degree(i);
    }
    let mut entries = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            let v = g.bracket_basis(i, j);
            if !v.is_zero() {
                let moved = SVec::from_pairs(v.iter().map(|(k, c)| (perm[*k], c.clone())));
                entries.push((perm[i], perm[j], moved));
            }
        }
    }
    GradedLieAlgebra::from_table(labels, degrees, None, entries).unwrap()
}

/// Random permutation preserving each degree block.
fn block_shuffle(g: &GradedLieAlgebra, seed: u64) -> Vec<usize> {
    use rand::seq::SliceRandom;
    use rand::SeedableRng;
    let mut rng = rand::rngs::StdRng::seed_from_u64(seed);
    let mut perm = vec![0; g.dim()];
    for k in 1..=g.depth() {
        let block = g.basis_of_degree(k);
        let mut target = block.clone();
        target.shuffle(&mut rng);
        for (a, b) in block.iter().zip(target) {
            perm[*a] = b;
        }
    }
    perm
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn hall_basis_counts_match_witt(q in 1usize..=4, k in 1usize..=7) {
        prop_assert_eq!(hall_basis(q, k)[k - 1], witt(q, k));
    }

    #[test]
    fn nilradicals_satisfy_jacobi((t, n, m) in marked_ade(5)) {
        let s = spec(t, n, &m);
        let g = parabolic_nilradical(&MarkedDiagram::parse(&s).unwrap()).unwrap().algebra;
        prop_assert!(jacobi_exhaustive(&g));
        prop_assert_eq!(g.dims(), oracle_dims(&s));
    }

    #[test]
    fn root_sums_agree_with_oracle((t, n) in any_type(7)) {
        let rs = RootSystem::new(letter(t), n).unwrap();
        let oracle = oracle_roots(t, n);
        prop_assert_eq!(root_set(&rs), oracle.clone());
        for a in &oracle {
            for b in &oracle {
                let s: Vec<i64> = a.iter().zip(b).map(|(x, y)| x + y).collect();
                prop_assert_eq!(rs.is_root(&Root(s.clone())), oracle.contains(&s));
            }
        }
    }

    #[test]
    fn verdicts_replay_and_are_deterministic((t, n, m) in marked_ade(6)) {
        let md = MarkedDiagram::parse(&spec(t, n, &m)).unwrap();
        let v = Classifier::new(1024).classify(&md).unwrap();
        prop_assert_eq!(replay(&v).unwrap(), v.status);
        prop_assert_eq!(Classifier::new(0).classify(&md).unwrap(), v);
    }

    #[test]
    fn verdicts_invariant_under_automorphisms((t, n, m) in marked_ade(6), pick in any::<prop::sample::Index>()) {
        let autos = automorphisms(t, n);
        let p = &autos[pick.index(autos.len())];
        let moved: Vec<usize> = m.iter().map(|&x| p[x - 1] + 1).collect::<BTreeSet<_>>().into_iter().collect();
        let k = Classifier::new(0);
        let a = k.classify(&MarkedDiagram::parse(&spec(t, n, &m)).unwrap()).unwrap();
        let b = k.classify(&MarkedDiagram::parse(&spec(t, n, &moved)).unwrap()).unwrap();
        prop_assert_eq!(a.status, b.status);
        prop_assert_eq!(a.canonical_form, b.canonical_form);
    }

    #[test]
    fn json_round_trips((t, n, m) in marked_ade(5)) {
        let md = MarkedDiagram::parse(&spec(t, n, &m)).unwrap();
        let g = parabolic_nilradical(&md).unwrap().algebra;
        let back = algebra_from_json(&algebra_to_json(&g)).unwrap();
        prop_assert_eq!(back.labels(), g.labels());
        prop_assert_eq!(back.degrees(), g.degrees());
        for i in 0..g.dim() {
            for j in 0..g.dim() {
                prop_assert_eq!(back.bracket_basis(i, j), g.bracket_basis(i, j));
            }
        }
        let v = Classifier::new(0).classify(&md).unwrap();
        prop_assert_eq!(verdict_from_json(&verdict_to_json(&v)).unwrap(), v);
    }

    #[test]
    fn splitting_matches_orthonormal_pairings(n in 2usize..=6, marks in prop::collection::btree_set(0usize..6, 1..=3), b in 0usize..6, a in 0usize..6) {
        let marks: Vec<usize> = marks.into_iter().filter(|&x| x < n).collect();
        prop_assume!(!marks.is_empty());
        let beta = marks[b % marks.len()];
        let alpha = marks[a % marks.len()];
        let one_based: Vec<usize> = marks.iter().map(|x| x + 1).collect();
        let md = MarkedDiagram::parse(&spec('A', n, &one_based)).unwrap();
        let st = distribution_splitting(&md, beta, 1, alpha).unwrap();
        let oracle = oracle_first_layer_splitting('A', n, &marks, beta, alpha);
        prop_assert_eq!(st.total, oracle.iter().sum::<i64>());
        prop_assert_eq!(&st.degrees, &oracle);
        // the simple root itself lies in the first layer and pairs to 2
        let own = distribution_splitting(&md, beta, 1, beta).unwrap();
        prop_assert!(own.degrees.contains(&2));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    #[test]
    fn prolongation_ignores_basis_order(spec_str in prop::sample::select(vec!["A3[1,2]", "A3[1,3]", "A4[2,3]", "D4[2]", "A4[1,2,4]", "D4[1,3,4]"]), seed in any::<u64>()) {
        let g = parabolic_nilradical(&MarkedDiagram::parse(spec_str).unwrap()).unwrap().algebra;
        let h = permuted(&g, &block_shuffle(&g, seed));
        prop_assert!(jacobi_exhaustive(&h));
        prop_assert_eq!(tower_dims(&g, 1).unwrap(), tower_dims(&h, 1).unwrap());
    }
}
