mod common;

use cofsat::allsat::{gather, solve_all_leaves};
use cofsat::cnf::{CnfFormula, PartialAssignment, Reduced};
use cofsat::decompose::{
    choose_var_subset, clause_pivot_tree, enumerate_c1_assignments, partition,
    var_partition_decompose, DecompositionTree, NodeStatus,
};
use proptest::prelude::*;
use rand::rngs::StdRng;
use rand::seq::SliceRandom;
use rand::SeedableRng;

fn formula(seed: u64, n: usize, m: usize) -> (Vec<Vec<i64>>, CnfFormula) {
    let mut rng = StdRng::seed_from_u64(seed);
    let clauses = common::random_3cnf(&mut rng, n, m);
    let f = common::to_formula(&clauses, n);
    (clauses, f)
}

/// No completion of `prefix` satisfies `f`.
fn dead_below(f: &CnfFormula, prefix: &PartialAssignment) -> bool {
    match f.substitute(prefix) {
        Reduced::Unsat => true,
        Reduced::Formula(r) => cofsat::allsat::all_solutions(&r).unwrap().is_empty(),
    }
}

fn check_tree(tree: &DecompositionTree, f: &CnfFormula, n0: usize) {
    for leaf in tree.leaves() {
        match leaf.status {
            NodeStatus::Solvable | NodeStatus::Trivial => {
                let g = leaf.item.formula.formula().unwrap();
                assert!(
                    g.num_vars() <= n0,
                    "leaf {} has {} vars",
                    leaf.id,
                    g.num_vars()
                );
            }
            NodeStatus::Unsat => assert!(dead_below(f, &leaf.item.prefix)),
            NodeStatus::Internal(_) => unreachable!(),
        }
    }
    for node in tree.nodes() {
        if let Some(p) = node.parent {
            assert!(tree
                .node(p)
                .unwrap()
                .item
                .prefix
                .is_subset(&node.item.prefix));
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn var_partition_is_exact(seed in any::<u64>(), n in 4usize..=12, ratio in 1usize..=5, n0 in 2usize..=6) {
        let (clauses, f) = formula(seed, n, ratio * n);
        let tree = var_partition_decompose(&f, n0).unwrap();
        check_tree(&tree, &f, n0);
        let got = gather(&tree, &solve_all_leaves(&tree).unwrap()).unwrap();
        prop_assert_eq!(got, common::brute_force(&clauses, n));
    }

    #[test]
    fn clause_pivot_is_exact(seed in any::<u64>(), n in 4usize..=12, ratio in 1usize..=5, n0 in 2usize..=6, root in any::<prop::sample::Index>()) {
        let (clauses, f) = formula(seed, n, ratio * n);
        let tree = clause_pivot_tree(&f, Some(root.index(f.clauses().len())), n0).unwrap();
        check_tree(&tree, &f, n0);
        let got = gather(&tree, &solve_all_leaves(&tree).unwrap()).unwrap();
        prop_assert_eq!(got, common::brute_force(&clauses, n));
    }

    #[test]
    fn gather_ignores_result_order(seed in any::<u64>(), n in 6usize..=10, n0 in 2usize..=4) {
        let (_, f) = formula(seed, n, 3 * n);
        for tree in [var_partition_decompose(&f, n0).unwrap(), clause_pivot_tree(&f, None, n0).unwrap()] {
            let mut results = solve_all_leaves(&tree).unwrap();
            let expected = gather(&tree, &results).unwrap();
            results.shuffle(&mut StdRng::seed_from_u64(seed));
            prop_assert_eq!(gather(&tree, &results).unwrap(), expected);
        }
    }

    #[test]
    fn tree_text_round_trips(seed in any::<u64>(), n in 4usize..=10, n0 in 2usize..=4, pivot in any::<bool>()) {
        let (_, f) = formula(seed, n, 3 * n);
        let tree = if pivot {
            clause_pivot_tree(&f, None, n0).unwrap()
        } else {
            var_partition_decompose(&f, n0).unwrap()
        };
        let text = tree.to_text();
        let back = DecompositionTree::from_text(&text).unwrap();
        prop_assert_eq!(back.to_text(), text);
        prop_assert_eq!(back, tree);
    }

    #[test]
    fn block_assignments_satisfy_c1(seed in any::<u64>(), n in 4usize..=12, n0 in 1usize..=6) {
        let (_, f) = formula(seed, n, 3 * n);
        let x1 = choose_var_subset(&f, n0).unwrap();
        prop_assert_eq!(x1.len(), n0.min(f.formula_vars().len()));
        let part = partition(&f, &x1).unwrap();
        prop_assert_eq!(part.c1.len() + part.c2.len() + part.c3.len(), f.clauses().len());
        let l = enumerate_c1_assignments(&part.c1, &part.x1).unwrap();
        // brute force over the block
        let mut expected = 0;
        for p in 0u64..1 << x1.len() {
            let q = PartialAssignment::from_pairs(
                x1.iter().enumerate().map(|(j, &v)| (v, p >> j & 1 == 1)),
            )
            .unwrap();
            if part.c1.iter().all(|c| c.eval(&q) == Some(true)) {
                expected += 1;
                prop_assert!(l.contains(&q));
            }
        }
        prop_assert_eq!(l.len(), expected);
    }
}

#[test]
fn unsat_formula_gives_no_solutions() {
    let f = CnfFormula::from_dimacs_clauses(&[&[1, 2], &[1, -2], &[-1, 2], &[-1, -2], &[3, 4]])
        .unwrap();
    for tree in [
        var_partition_decompose(&f, 2).unwrap(),
        clause_pivot_tree(&f, Some(0), 1).unwrap(),
    ] {
        check_tree(&tree, &f, 2);
        assert!(gather(&tree, &solve_all_leaves(&tree).unwrap())
            .unwrap()
            .is_empty());
    }
}
