use hecke_core::modp_forms::{
    basis, commutation_check, commutation_check_with, delta, delta_mod_p, dim_mk, filtration,
    rank_mod_p, theta_cycle, QExpansion, QExpansionDoc, ThetaCycle,
};
use hecke_core::oracle;
use num_rational::BigRational;

#[test]
fn delta_agrees_with_its_product_expansion() {
    let n = 60;
    let ours = delta(n);
    for (i, c) in oracle::delta_product(n).into_iter().enumerate() {
        assert_eq!(ours.rational_coeff(i).unwrap(), &BigRational::from_integer(c));
    }
}

#[test]
fn delta_mod_5_theta_cycle_matches_fixture() {
    let fixture: ThetaCycle =
        serde_json::from_str(include_str!("fixtures/delta5_theta_cycle.json")).unwrap();
    let cycle = theta_cycle(&delta_mod_p(5, 120).unwrap(), 6).unwrap();
    assert_eq!(cycle, fixture);
}

#[test]
fn commutation_example() {
    let d = delta_mod_p(5, 100).unwrap();
    assert!(commutation_check(&d, 2, 50).unwrap());
}

#[test]
fn unshifted_theta_weight_breaks_commutation() {
    let d = delta_mod_p(5, 200).unwrap();
    assert!(!commutation_check_with(&d, 2, 50, Some(12)).unwrap());
    assert!(commutation_check_with(&d, 2, 50, Some(12 + 5 + 1)).unwrap());
    // 11^2 = 1 mod 5, so the missing shift is invisible.
    assert!(commutation_check_with(&d, 11, 10, Some(12)).unwrap());
}

#[test]
fn reductions_span_the_full_space() {
    for p in [5u64, 7, 11, 13] {
        for k in (0..=60).step_by(2) {
            let len = k as usize / 12 + 2;
            let b = basis(k, p, len).unwrap();
            assert_eq!(rank_mod_p(&b, len).unwrap(), dim_mk(k), "p={p} k={k}");
        }
    }
}

#[test]
fn filtration_of_delta() {
    assert_eq!(filtration(&delta_mod_p(5, 20).unwrap()).unwrap(), 12);
    assert_eq!(filtration(&delta_mod_p(7, 20).unwrap()).unwrap(), 12);
}

#[test]
fn json_round_trip() {
    let f = delta(8);
    let doc = f.to_doc();
    assert_eq!(doc.ring, "Q");
    assert_eq!(doc.coeffs[2], "-24");
    let text = serde_json::to_string(&doc).unwrap();
    let back = QExpansion::from_doc(&serde_json::from_str::<QExpansionDoc>(&text).unwrap()).unwrap();
    assert_eq!(back, f);
    let g = f.reduce(7).unwrap();
    assert_eq!(QExpansion::from_doc(&g.to_doc()).unwrap(), g);
    assert_eq!(g.coeffs_mod_p()[2], 4);
}
