use proptest::prelude::*;
use sodeg_core::kazarnovskij::{degree_via_kazarnovskij, RootFamily, Route, DIRECT_RANK_CAP};
use sodeg_core::lattice::{count_via_determinant, enumerate_nonintersecting, PathSystem};
use sodeg_core::sdp::{critical_count, delta, DeltaQuery};
use sodeg_core::{deg_o, deg_so, deg_sp, BigInt, GroupFamily, GroupId};

#[test]
fn exact_routes_agree_for_so() {
    for n in 2..=2 * DIRECT_RANK_CAP + 1 {
        let (family, r) = RootFamily::for_so(n).unwrap();
        let formula = deg_so(n);
        assert_eq!(degree_via_kazarnovskij(family, r, Route::Direct).unwrap(), formula, "n = {n}");
        assert_eq!(degree_via_kazarnovskij(family, r, Route::Closed).unwrap(), formula, "n = {n}");
    }
}

#[test]
fn exact_routes_agree_for_sp() {
    for r in 1..=DIRECT_RANK_CAP {
        let formula = deg_sp(r);
        assert_eq!(degree_via_kazarnovskij(RootFamily::Sp, r, Route::Direct).unwrap(), formula);
        assert_eq!(degree_via_kazarnovskij(RootFamily::Sp, r, Route::Closed).unwrap(), formula);
    }
}

#[test]
fn closed_route_beyond_direct_cap() {
    for n in 14..=30 {
        let (family, r) = RootFamily::for_so(n).unwrap();
        assert!(degree_via_kazarnovskij(family, r, Route::Direct).is_err());
        assert_eq!(degree_via_kazarnovskij(family, r, Route::Closed).unwrap(), deg_so(n));
    }
}

#[test]
fn every_enumerated_system_is_disjoint() {
    let mut seen = 0u64;
    let mut visit = |s: &PathSystem| {
        assert!(s.is_vertex_disjoint() && s.has_endpoints_for(9));
        seen += 1;
    };
    let total = enumerate_nonintersecting(9, Some(&mut visit)).unwrap();
    assert_eq!(total, BigInt::from(seen));
    assert_eq!(total, count_via_determinant(9));
    assert_eq!(total * 256, deg_so(9));
}

#[test]
fn symplectic_lattice_route() {
    for r in 1..=4 {
        assert_eq!(count_via_determinant(2 * r + 1), deg_sp(r));
    }
}

#[test]
fn group_ids_report_family_degrees() {
    assert_eq!(GroupId::new(GroupFamily::O, 6).unwrap().degree(), deg_o(6));
    assert_eq!(GroupId::new(GroupFamily::Sp, 3).unwrap().degree(), BigInt::from(1744));
    assert!(GroupId::new(GroupFamily::SO, 0).is_err());
}

proptest! {
    #[test]
    fn orthogonal_is_twice_special(n in 1u32..40) {
        prop_assert_eq!(deg_o(n), deg_so(n) * 2);
    }

    #[test]
    fn delta_is_nonnegative(m in 0u64..40, n in 1u32..=8, r in 0u32..=8) {
        prop_assume!(r <= n);
        let q = DeltaQuery::new(m, n, r).unwrap();
        let d = delta(&q);
        prop_assert!(d >= BigInt::from(0));
        if r == n {
            prop_assert_eq!(d, BigInt::from(u8::from(m == 0)));
        }
        if r > 0 {
            prop_assert_eq!(critical_count(&q).unwrap(), deg_so(r) * 2 * delta(&q));
        }
    }
}
