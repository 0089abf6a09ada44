//! The condition checkers against direct brute-force readings of the
//! definitions, on random join-homomorphisms of boolean and subspace
//! lattices.

use std::sync::Arc;

use jordan_lattice::fixtures::{boolean_lattice, random_matrix};
use jordan_lattice::lattice_map::{check_jnb2, check_jnb3};
use jordan_lattice::{FiniteLattice, JoinHom, SubspaceLatticeModel, Verdict};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// `λ(S) = ⋁ λ(a)` over the atoms `a ≤ S`, from arbitrary atom images.
fn boolean_hom(l: &Arc<FiniteLattice>, atom_images: &[usize]) -> JoinHom {
    let values = (0..l.len())
        .map(|x| {
            let images = l.atoms().iter().zip(atom_images).filter(|(&a, _)| l.leq(a, x)).map(|(_, &v)| v);
            l.join_many(images)
        })
        .collect();
    JoinHom::new(l.clone(), values).expect("atom images extend to a join-homomorphism")
}

/// For every `x ≤ y` with `λx = λy` there is `u` with `y = x ∨ u` and
/// `λu = 0`; `u` ranges over the whole lattice.
fn brute_jnb2(h: &JoinHom) -> bool {
    let l = h.lattice();
    let n = l.len();
    (0..n).all(|x| {
        (0..n).filter(|&y| l.leq(x, y) && h.apply(x) == h.apply(y)).all(|y| {
            (0..n).any(|u| l.join(x, u) == y && h.apply(u) == l.bottom())
        })
    })
}

/// `λ` maps `[0, x]` onto `[0, λx]` for every `x`.
fn brute_jnb3(h: &JoinHom) -> bool {
    let l = h.lattice();
    (0..l.len()).all(|x| {
        (0..l.len())
            .filter(|&t| l.leq(t, h.apply(x)))
            .all(|t| (0..l.len()).any(|s| l.leq(s, x) && h.apply(s) == t))
    })
}

fn check_witnesses(h: &JoinHom) {
    let l = h.lattice();
    if let Verdict::Fails((x, y)) = check_jnb2(h) {
        assert!(l.leq(x, y) && h.apply(x) == h.apply(y));
        assert!(!(0..l.len()).any(|u| l.join(x, u) == y && h.apply(u) == l.bottom()));
    }
    if let Verdict::Fails((x, t)) = check_jnb3(h) {
        assert!(l.leq(t, h.apply(x)));
        assert!(!(0..l.len()).any(|s| l.leq(s, x) && h.apply(s) == t));
    }
}

fn hom_invariants(h: &JoinHom) {
    let l = h.lattice();
    let (w, z) = (h.image(), h.kernel());
    for x in 0..l.len() {
        assert!(l.leq(h.apply(x), w));
        assert_eq!(h.apply(x) == l.bottom(), l.leq(x, z));
        for y in 0..l.len() {
            if l.leq(x, y) {
                assert!(l.leq(h.apply(x), h.apply(y)), "monotone");
            }
        }
        if h.is_nilpotent() && l.leq(x, h.apply(x)) {
            assert_eq!(x, l.bottom(), "x ≤ λx forces x = 0 for nilpotent λ");
        }
    }
    if let Some(k) = h.nilpotency_index() {
        assert_eq!(h.apply_power(l.top(), k), l.bottom());
        assert!(k == 1 || h.apply_power(l.top(), k - 1) != l.bottom());
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn boolean_checkers_match_brute_force(dim in 1usize..=4, seed in any::<u64>()) {
        let l = Arc::new(boolean_lattice(dim).unwrap());
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let images: Vec<usize> = (0..dim).map(|_| rand::Rng::gen_range(&mut rng, 0..l.len())).collect();
        let h = boolean_hom(&l, &images);
        prop_assert_eq!(check_jnb2(&h).holds(), brute_jnb2(&h));
        prop_assert_eq!(check_jnb3(&h).holds(), brute_jnb3(&h));
        check_witnesses(&h);
        hom_invariants(&h);
    }

    #[test]
    fn boolean_atom_to_atom_maps(dim in 1usize..=4, seed in any::<u64>()) {
        // Atoms go to atoms or 0, which covers the maps most likely to
        // satisfy all three conditions.
        let l = Arc::new(boolean_lattice(dim).unwrap());
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut targets = vec![l.bottom()];
        targets.extend_from_slice(l.atoms());
        let images: Vec<usize> = (0..dim).map(|_| targets[rand::Rng::gen_range(&mut rng, 0..targets.len())]).collect();
        let h = boolean_hom(&l, &images);
        prop_assert_eq!(check_jnb2(&h).holds(), brute_jnb2(&h));
        prop_assert_eq!(check_jnb3(&h).holds(), brute_jnb3(&h));
        check_witnesses(&h);
        hom_invariants(&h);
    }
}

#[test]
fn subspace_maps_satisfy_jnb2_and_jnb3() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for (p, n) in [(2, 2), (2, 3), (3, 2)] {
        let model = SubspaceLatticeModel::enumerate(p, n).unwrap();
        for _ in 0..20 {
            let a = random_matrix(p, n, n, &mut rng);
            let h = model.induced_join_hom(&a).unwrap();
            assert!(brute_jnb2(&h) && brute_jnb3(&h));
            assert!(check_jnb2(&h).holds() && check_jnb3(&h).holds());
            hom_invariants(&h);
        }
    }
}
