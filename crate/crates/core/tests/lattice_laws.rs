//! Lattice laws on random lattices built as closure systems: families of
//! subsets of a small ground set that are closed under intersection and
//! contain the ground set, ordered by inclusion.

use std::collections::BTreeSet;

use jordan_lattice::fixtures::{boolean_lattice, chain_lattice};
use jordan_lattice::{FiniteLattice, Verdict};
use proptest::prelude::*;

fn closure_system(ground: u32, seeds: &[u32]) -> Vec<u32> {
    let full = (1u32 << ground) - 1;
    let mut family: BTreeSet<u32> = seeds.iter().map(|s| s & full).collect();
    family.insert(full);
    loop {
        let sets: Vec<u32> = family.iter().copied().collect();
        let before = family.len();
        for &a in &sets {
            for &b in &sets {
                family.insert(a & b);
            }
        }
        if family.len() == before {
            return sets;
        }
    }
}

/// The closure-system lattice, with every strict inclusion passed as a
/// cover so the constructor has to reduce them.
fn build(sets: &[u32]) -> FiniteLattice {
    let labels = sets.iter().map(|s| format!("{s:b}")).collect();
    let mut pairs = Vec::new();
    for (i, &a) in sets.iter().enumerate() {
        for (j, &b) in sets.iter().enumerate() {
            if a != b && a & b == a {
                pairs.push((i, j));
            }
        }
    }
    FiniteLattice::from_cover_indices(labels, &pairs).unwrap()
}

fn laws(l: &FiniteLattice) {
    let n = l.len();
    for x in 0..n {
        assert!(l.leq(l.bottom(), x) && l.leq(x, l.top()));
        assert_eq!(l.join(x, x), x);
        assert_eq!(l.meet(x, x), x);
        for y in 0..n {
            let (j, m) = (l.join(x, y), l.meet(x, y));
            assert_eq!(j, l.join(y, x));
            assert_eq!(m, l.meet(y, x));
            assert_eq!(l.join(x, m), x, "absorption");
            assert_eq!(l.meet(x, j), x, "absorption");
            assert_eq!(l.leq(x, y), j == y);
            assert_eq!(l.leq(x, y), m == x);
            for z in 0..n {
                assert_eq!(l.join(j, z), l.join(x, l.join(y, z)));
                assert_eq!(l.meet(m, z), l.meet(x, l.meet(y, z)));
            }
        }
    }
    for (x, y) in l.cover_pairs() {
        assert!(l.lt(x, y));
        assert!(!(0..n).any(|m| l.lt(x, m) && l.lt(m, y)), "cover pairs are minimal");
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(120))]

    #[test]
    fn closure_systems_are_lattices(ground in 1u32..=5, seeds in prop::collection::vec(any::<u32>(), 0..8)) {
        let sets = closure_system(ground, &seeds);
        let l = build(&sets);
        prop_assert_eq!(l.len(), sets.len());
        laws(&l);
        // Meet is intersection.
        for (i, &a) in sets.iter().enumerate() {
            for (j, &b) in sets.iter().enumerate() {
                prop_assert_eq!(sets[l.meet(i, j)], a & b);
            }
        }
    }

    #[test]
    fn atomistic_verdict_matches_definition(ground in 1u32..=5, seeds in prop::collection::vec(any::<u32>(), 0..8)) {
        let l = build(&closure_system(ground, &seeds));
        let failing: Vec<usize> = (0..l.len())
            .filter(|&x| l.join_many(l.atoms().iter().copied().filter(|&a| l.leq(a, x))) != x)
            .collect();
        match l.is_atomistic() {
            Verdict::Holds => prop_assert!(failing.is_empty()),
            Verdict::Fails(w) => prop_assert_eq!(Some(w), failing.first().copied()),
        }
    }

    #[test]
    fn intervals_are_sublattices(ground in 1u32..=4, seeds in prop::collection::vec(any::<u32>(), 0..6)) {
        let l = build(&closure_system(ground, &seeds));
        for x in 0..l.len() {
            for y in l.above(x).collect::<Vec<_>>() {
                let iv = l.interval(x, y).unwrap();
                laws(&iv.sub);
                for a in 0..iv.sub.len() {
                    for b in 0..iv.sub.len() {
                        prop_assert_eq!(iv.parent_of(iv.sub.join(a, b)), l.join(iv.parent_of(a), iv.parent_of(b)));
                        prop_assert_eq!(iv.parent_of(iv.sub.meet(a, b)), l.meet(iv.parent_of(a), iv.parent_of(b)));
                    }
                }
            }
        }
    }
}

#[test]
fn fixture_lattices_obey_laws() {
    for dim in 0..=4 {
        let l = boolean_lattice(dim).unwrap();
        laws(&l);
        assert_eq!(l.len(), 1 << dim);
        assert_eq!(l.height(), dim);
        assert!(l.is_atomistic().holds());
        assert!(l.has_atomic_cover_property().holds());
        assert!(l.has_graded_chains().holds());
    }
    for len in 0..=5 {
        let l = chain_lattice(len).unwrap();
        laws(&l);
        assert_eq!(l.height(), len);
        assert_eq!(l.is_atomistic().holds(), len <= 1);
    }
}
