//! Brute-force cross-checks of enumeration, degeneracy and braid phases.

use std::collections::BTreeSet;
use std::sync::Arc;

use gbl_core::boundary::{build_ground_space, enumerate_lagrangians, GroundSpace, LagrangianAlgebra};
use gbl_core::braid::{braid_squared, BraidGenerator};
use gbl_core::theory::{build_theory, AnyonLabel, TheoryData};
use gbl_core::Cyclotomic;

/// Raw (a1, a2) pairs of every label, independent of the library's label type.
fn pairs(n: u32) -> Vec<(u32, u32)> {
    (0..n).flat_map(|a| (0..n).map(move |b| (a, b))).collect()
}

/// Subgroups of Z_N × Z_N of order N with every twist ω^{a1 a2} trivial, by scanning
/// every N-element subset.
fn lagrangian_subsets(n: u32) -> BTreeSet<BTreeSet<(u32, u32)>> {
    let all = pairs(n);
    let k = n as usize;
    let mut out = BTreeSet::new();
    let mut pick: Vec<usize> = (0..k).collect();
    loop {
        let set: BTreeSet<(u32, u32)> = pick.iter().map(|&i| all[i]).collect();
        let closed = set
            .iter()
            .all(|a| set.iter().all(|b| set.contains(&((a.0 + b.0) % n, (a.1 + b.1) % n))));
        let bosonic = set.iter().all(|a| (a.0 * a.1) % n == 0);
        if set.contains(&(0, 0)) && closed && bosonic {
            out.insert(set);
        }
        let Some(i) = (0..k).rev().find(|&i| pick[i] != i + all.len() - k) else {
            return out;
        };
        pick[i] += 1;
        for j in i + 1..k {
            pick[j] = pick[j - 1] + 1;
        }
    }
}

fn as_pairs(a: &AnyonLabel) -> (u32, u32) {
    let [x, y]: [u32; 2] = serde_json::from_value(serde_json::to_value(a).unwrap()).unwrap();
    (x, y)
}

#[test]
fn lagrangians_match_subset_scan() {
    for n in 2..=5 {
        let t = Arc::new(build_theory(n).unwrap());
        let found: BTreeSet<BTreeSet<(u32, u32)>> = enumerate_lagrangians(&t)
            .iter()
            .map(|a| a.condensed().iter().map(as_pairs).collect())
            .collect();
        assert_eq!(found, lagrangian_subsets(n), "N = {n}");
    }
}

#[test]
fn lagrangian_counts() {
    let counts: Vec<usize> = (2..=5)
        .map(|n| enumerate_lagrangians(&Arc::new(build_theory(n).unwrap())).len())
        .collect();
    assert_eq!(counts, [2, 2, 3, 2]);
}

fn assignments(t: &Arc<TheoryData>, holes: usize) -> Vec<Vec<LagrangianAlgebra>> {
    let algebras = enumerate_lagrangians(t);
    let k = algebras.len();
    (0..k.pow(holes as u32))
        .map(|code| (0..holes).map(|h| algebras[code / k.pow(h as u32) % k].clone()).collect())
        .collect()
}

/// Counts labelings with vacuum total charge directly on raw pairs.
fn vacuum_labelings(n: u32, sets: &[Vec<(u32, u32)>]) -> usize {
    let mut sums = vec![(0u32, 0u32)];
    for s in sets {
        sums = sums
            .iter()
            .flat_map(|acc| s.iter().map(move |a| ((acc.0 + a.0) % n, (acc.1 + a.1) % n)))
            .collect();
    }
    sums.iter().filter(|&&x| x == (0, 0)).count()
}

#[test]
fn ground_space_dimension_matches_labeling_count() {
    for n in 2..=4 {
        let t = Arc::new(build_theory(n).unwrap());
        for holes in 1..=4 {
            for pick in assignments(&t, holes) {
                let gs = build_ground_space(&pick).unwrap();
                let sets: Vec<Vec<(u32, u32)>> = pick.iter().map(|a| a.condensed().iter().map(as_pairs).collect()).collect();
                assert_eq!(gs.dim(), vacuum_labelings(n, &sets), "N = {n}, {:?}", gs.descriptor().boundaries);
                let unique: BTreeSet<_> = gs.basis().iter().collect();
                assert_eq!(unique.len(), gs.dim());
            }
        }
    }
}

#[test]
fn named_degeneracies() {
    let t = Arc::new(build_theory(3).unwrap());
    let dim = |names: &[&str]| GroundSpace::from_names(&t, names).unwrap().dim();
    assert_eq!(dim(&["e", "e"]), 3);
    assert_eq!(dim(&["e", "e", "m", "m"]), 9);
    assert_eq!(dim(&["e", "m"]), 1);
    assert_eq!(dim(&["e", "e", "e", "e"]), 27);
}

/// Closed form of the full braid phase: ω^{-(a_i,1 a_j,2 + a_i,2 a_j,1)}.
#[test]
fn braid_phases_match_closed_form() {
    for n in 2..=5 {
        let t = Arc::new(build_theory(n).unwrap());
        for pick in assignments(&t, 4) {
            let gs = Arc::new(build_ground_space(&pick).unwrap());
            for i in 1..=4 {
                for j in i + 1..=4 {
                    let m = braid_squared(&gs, BraidGenerator::new(i, j).unwrap()).unwrap().matrix;
                    assert!(m.is_diagonal());
                    for (k, labels) in gs.basis().iter().enumerate() {
                        let (a, b) = (as_pairs(&labels[i - 1]), as_pairs(&labels[j - 1]));
                        let exp = -((a.0 * b.1 + a.1 * b.0) as i64);
                        assert_eq!(*m.get(k, k), Cyclotomic::root_of_unity(n, exp), "N = {n} ({i},{j}) {labels:?}");
                    }
                }
            }
        }
    }
}
