mod common;

use default_bilattices::algebra::{congruence_generated_by, congruence_lattice, product, quotient, Congruence, FiniteAlgebra};
use default_bilattices::duality::{alter_ego, check_duality};
use default_bilattices::json;
use default_bilattices::kn::build_kn;
use default_bilattices::lattice::{dual_space, find_lattice_isomorphism, is_lattice_hom, preimage_hom, up_set_lattice};
use default_bilattices::poset::{find_poset_isomorphism, restricted_linear_sum, MonotoneMap, Poset};
use default_bilattices::product::{build_product, check_transport, product_representation, DefaultSequence};
use proptest::prelude::*;
use std::collections::BTreeSet;
use std::sync::OnceLock;

/// A poset on 0..size whose order extends the natural order, from a bit
/// per pair x < y saying whether to add x ≤ y before closing.
fn poset_strategy(max: usize) -> impl Strategy<Value = Poset> {
    (0..=max).prop_flat_map(|size| {
        prop::collection::vec(any::<bool>(), size * size.saturating_sub(1) / 2).prop_map(move |bits| {
            let mut pairs = Vec::new();
            let mut k = 0;
            for x in 0..size {
                for y in x + 1..size {
                    if bits[k] {
                        pairs.push((x, y));
                    }
                    k += 1;
                }
            }
            Poset::from_pairs(size, pairs).unwrap()
        })
    })
}

fn big_product() -> &'static FiniteAlgebra {
    static P: OnceLock<FiniteAlgebra> = OnceLock::new();
    P.get_or_init(|| {
        let ks: Vec<_> = (0..3).map(|n| build_kn(n).into_algebra()).collect();
        product(&[&ks[0], &ks[1], &ks[2]], usize::MAX).unwrap()
    })
}

fn subalgebra_strategy() -> impl Strategy<Value = FiniteAlgebra> {
    prop::collection::vec(0..big_product().size(), 1..=3).prop_map(|gens| {
        let p = big_product();
        p.subalgebra(&p.generate(&gens)).unwrap().0
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn birkhoff_round_trip(p in poset_strategy(7)) {
        let k = up_set_lattice(&p);
        let back = dual_space(&k.lattice).poset;
        prop_assert!(find_poset_isomorphism(&p, &back).is_some());
        prop_assert_eq!(p.count_up_sets(), Some(common::brute_up_set_count(p.size(), &|a, b| p.leq(a, b)) as u128));
    }

    #[test]
    fn poset_json_round_trip(p in poset_strategy(6)) {
        prop_assert_eq!(json::poset_from_str(&json::poset_to_string(&p)).unwrap(), p);
    }

    #[test]
    fn preimages_of_monotone_maps_are_lattice_homs(p in poset_strategy(4), q in poset_strategy(4), seed in any::<u64>()) {
        prop_assume!(p.size() > 0);
        // a monotone q → p via a linear extension of q and a monotone walk up p
        let ext = q.linear_extension();
        let mut table = vec![0; q.size()];
        let mut s = seed;
        for &x in &ext {
            let lower: Vec<usize> = (0..q.size()).filter(|&y| q.lt(y, x)).map(|y| table[y]).collect();
            let candidates: Vec<usize> = (0..p.size()).filter(|&v| lower.iter().all(|&u| p.leq(u, v))).collect();
            s = s.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            prop_assume!(!candidates.is_empty());
            table[x] = candidates[(s >> 33) as usize % candidates.len()];
        }
        let psi = MonotoneMap::new(q.clone(), p.clone(), table).unwrap();
        let (kp, kq) = (up_set_lattice(&p), up_set_lattice(&q));
        let f = preimage_hom(&psi, &kp, &kq).unwrap();
        prop_assert!(is_lattice_hom(&kp.lattice, &kq.lattice, f.table()));
    }

    #[test]
    fn restricted_sum_bounds(s in poset_strategy(4), t in poset_strategy(4), seed in any::<u64>()) {
        prop_assume!(s.size() > 0 && t.size() > 0);
        let mut table = vec![0; t.size()];
        for (k, comp) in t.order_components().iter().enumerate() {
            let target = (seed >> (k % 16 * 4)) as usize % s.size();
            for &x in comp {
                table[x] = target;
            }
        }
        let phi = MonotoneMap::new(t.clone(), s.clone(), table).unwrap();
        let sum = restricted_linear_sum(&s, &t, &phi).unwrap();
        let (us, ut, u) = (s.count_up_sets().unwrap(), t.count_up_sets().unwrap(), sum.count_up_sets().unwrap());
        prop_assert!(us + ut - 1 <= u && u <= us * ut);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn generated_subalgebras_are_bilattices(a in subalgebra_strategy()) {
        prop_assert!(common::negation_laws(&a));
        prop_assert_eq!(json::algebra_from_str(&json::algebra_to_string(&a)).unwrap(), a);
    }

    #[test]
    fn duality_on_generated_subalgebras(a in subalgebra_strategy()) {
        let check = check_duality(&a, &alter_ego(2), 10_000).unwrap();
        prop_assert!(check.is_isomorphism);
    }

    #[test]
    fn product_representation_on_generated_subalgebras(a in subalgebra_strategy()) {
        let r = product_representation(&a, 2, 10_000).unwrap();
        prop_assert!(r.is_isomorphism);
        prop_assert!(common::is_iso(&a, &r.product.algebra, &r.iso));
        prop_assert!(check_transport(&r.product, 10_000).unwrap().passed());
    }

    #[test]
    fn congruences_match_all_principal_joins(a in subalgebra_strategy()) {
        prop_assume!(a.size() <= 80);
        let n = a.size();
        let mut all: BTreeSet<Congruence> = BTreeSet::new();
        all.insert(Congruence::identity(n));
        for x in 0..n {
            for y in x + 1..n {
                all.insert(congruence_generated_by(&a, &[(x, y)]));
            }
        }
        loop {
            let current: Vec<Congruence> = all.iter().cloned().collect();
            let before = all.len();
            for p in &current {
                for q in &current {
                    all.insert(p.join(q));
                }
            }
            if all.len() == before {
                break;
            }
        }
        let found: BTreeSet<Congruence> = congruence_lattice(&a).into_iter().collect();
        prop_assert_eq!(found, all);
    }

    #[test]
    fn quotients_stay_in_the_variety(a in subalgebra_strategy()) {
        let ego = alter_ego(2);
        for theta in congruence_lattice(&a) {
            let q = quotient(&a, &theta).unwrap();
            prop_assert!(common::negation_laws(&q));
            if q.size() > 1 {
                prop_assert!(check_duality(&q, &ego, 10_000).unwrap().is_isomorphism);
            }
        }
    }
}

#[test]
fn knowledge_reduct_of_all_two_products() {
    for n in 0..=4 {
        let p = build_product(&DefaultSequence::all_two(n), 10_000).unwrap();
        let k = build_kn(n).into_algebra();
        let (lp, lk) = (p.algebra.knowledge_lattice().unwrap(), k.knowledge_lattice().unwrap());
        assert!(find_lattice_isomorphism(&lp, &lk).is_some(), "n={n}");
    }
}
