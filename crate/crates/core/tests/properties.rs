use hecke_core::automorphic_weights::{
    dominant_tuples, is_admissible_characterized, weight_shift, AutWeight, SignatureData,
};
use hecke_core::field::FiniteField;
use hecke_core::galois_twist::{char_value, twist_point, TorusPoint};
use hecke_core::modp_forms::{basis, filtration, hasse, theta, QExpansion};
use hecke_core::oracle;
use hecke_core::rep_ring::{dimension, multiply, weight_multiplicities, VirtualCharacter};
use hecke_core::root_data::{RootDatum, Weight};
use hecke_core::satake::{lusztig_q_analog, q_kostant, HeckeElement, SatakeMatrices};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn gl3_dominant() -> impl Strategy<Value = Weight> {
    (-2i64..=3, 0i64..=2, 0i64..=2).prop_map(|(c, a, b)| Weight::from(vec![c + a + b, c + b, c]))
}

fn gsp4_dominant() -> impl Strategy<Value = Weight> {
    (-1i64..=2, 0i64..=2, 0i64..=3).prop_map(|(e2, a, b)| Weight::from(vec![2 * e2 - b, e2 + a, e2]))
}

fn gl2_effective() -> impl Strategy<Value = (i64, i64)> {
    (0i64..=2, 0i64..=2).prop_map(|(d, a)| (d + a, d))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn tensor_products_have_the_right_dimension(a in gl3_dominant(), b in gl3_dominant()) {
        let gl3 = RootDatum::gl(3).unwrap();
        let xa = VirtualCharacter::irreducible(a.clone());
        let xb = VirtualCharacter::irreducible(b.clone());
        let ab = multiply(&gl3, &xa, &xb).unwrap();
        let ba = multiply(&gl3, &xb, &xa).unwrap();
        prop_assert_eq!(&ab, &ba);
        let dims = dimension(&gl3, &a).unwrap() * dimension(&gl3, &b).unwrap();
        prop_assert_eq!(ab.virtual_dimension(&gl3).unwrap(), dims as i64);
        prop_assert!(ab.terms.values().all(|&c| c > 0));
    }

    #[test]
    fn tensor_products_associate(a in gsp4_dominant(), b in gsp4_dominant(), c in gsp4_dominant()) {
        let gsp4 = RootDatum::gsp(4).unwrap();
        let x = |w: &Weight| VirtualCharacter::irreducible(w.clone());
        let left = multiply(&gsp4, &multiply(&gsp4, &x(&a), &x(&b)).unwrap(), &x(&c)).unwrap();
        let right = multiply(&gsp4, &x(&a), &multiply(&gsp4, &x(&b), &x(&c)).unwrap()).unwrap();
        prop_assert_eq!(left, right);
    }

    #[test]
    fn freudenthal_matches_the_weyl_character(l in gsp4_dominant()) {
        let gsp4 = RootDatum::gsp(4).unwrap();
        let ours: std::collections::BTreeMap<Weight, i64> = weight_multiplicities(&gsp4, &l)
            .unwrap()
            .all_weights(&gsp4)
            .into_iter()
            .map(|(w, m)| (w, m as i64))
            .collect();
        prop_assert_eq!(ours, oracle::weyl_character(&gsp4, &l).unwrap());
    }

    #[test]
    fn kostant_table_matches_enumeration(l in gl3_dominant(), m in gl3_dominant()) {
        let gl3 = RootDatum::gl(3).unwrap();
        let beta = l.sub(&m);
        if beta.coords.iter().sum::<i64>() == 0 {
            prop_assert_eq!(
                q_kostant(&gl3, &beta.coords).unwrap(),
                oracle::kostant_exhaustive(&gl3, &beta.coords)
            );
        }
        if gl3.leq(&m, &l).unwrap() {
            prop_assert_eq!(
                lusztig_q_analog(&gl3, &l, &m).unwrap(),
                oracle::lusztig_exhaustive(&gl3, &l, &m).unwrap()
            );
        }
    }

    #[test]
    fn gsp4_lusztig_matches_enumeration(l in gsp4_dominant(), m in gsp4_dominant()) {
        let gsp4 = RootDatum::gsp(4).unwrap();
        if gsp4.leq(&m, &l).unwrap() {
            prop_assert_eq!(
                lusztig_q_analog(&gsp4, &l, &m).unwrap(),
                oracle::lusztig_exhaustive(&gsp4, &l, &m).unwrap()
            );
        }
    }

    #[test]
    fn gl2_products_match_coset_counts(a in gl2_effective(), b in gl2_effective(), q in 2u64..=3) {
        let gl2 = RootDatum::gl(2).unwrap();
        let mut m = SatakeMatrices::new(&gl2);
        let h = m
            .hecke_multiply(
                &HeckeElement::basis(&gl2, Weight::from(vec![a.0, a.1])),
                &HeckeElement::basis(&gl2, Weight::from(vec![b.0, b.1])),
            )
            .unwrap();
        let ours: std::collections::BTreeMap<(i64, i64), i64> = h
            .combination
            .terms
            .iter()
            .map(|(w, c)| ((w.coords[0], w.coords[1]), c.eval_q(q as i64).unwrap()))
            .filter(|(_, c)| *c != 0)
            .collect();
        prop_assert_eq!(ours, oracle::gl2_convolution(q, a, b));
    }

    #[test]
    fn hecke_product_is_commutative_and_associative(a in gl3_dominant(), b in gl3_dominant(), c in gl3_dominant()) {
        let gl3 = RootDatum::gl(3).unwrap();
        let mut m = SatakeMatrices::new(&gl3);
        let h = |w: &Weight| HeckeElement::basis(&gl3, w.clone());
        let ab = m.hecke_multiply(&h(&a), &h(&b)).unwrap();
        let ba = m.hecke_multiply(&h(&b), &h(&a)).unwrap();
        prop_assert_eq!(&ab, &ba);
        let left = m.hecke_multiply(&ab, &h(&c)).unwrap();
        let bc = m.hecke_multiply(&h(&b), &h(&c)).unwrap();
        let right = m.hecke_multiply(&h(&a), &bc).unwrap();
        prop_assert_eq!(left, right);
    }

    #[test]
    fn central_twist_scales_characters(l in gsp4_dominant(), seed in any::<u64>(), p in prop::sample::select(vec![5u64, 7, 11]), k in 1usize..=2) {
        let gsp4 = RootDatum::gsp(4).unwrap();
        let field = FiniteField::new(p, k).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let s = TorusPoint::random(&gsp4, &field, &mut rng);
        let t = TorusPoint::random(&gsp4, &field, &mut rng).coords[0].clone();
        let nu = gsp4.character("nu").unwrap();
        let lhs = char_value(&gsp4, &twist_point(&s, &nu, &t).unwrap(), &l).unwrap();
        let e = gsp4.pairing(&nu.coords, &l).unwrap();
        let rhs = &t.pow_i(e).unwrap() * &char_value(&gsp4, &s, &l).unwrap();
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn central_characters_are_constant_below(l in gl3_dominant()) {
        let gl3 = RootDatum::gl(3).unwrap();
        let det = gl3.character("det").unwrap();
        let target = gl3.pairing(&det.coords, &l).unwrap();
        for mu in gl3.dominant_weights_below(&l).unwrap() {
            prop_assert_eq!(gl3.pairing(&det.coords, &mu).unwrap(), target);
        }
        for c in gl3.simple_coroots() {
            prop_assert_eq!(gl3.pairing(&det.coords, &Weight::new(c.clone())).unwrap(), 0);
        }
    }

    #[test]
    fn finite_field_axioms(p in prop::sample::select(vec![2u64, 3, 5, 7, 11]), k in 1usize..=3, a in any::<u64>(), b in any::<u64>()) {
        let f = FiniteField::new(p, k).unwrap();
        let x = f.element(a % f.size());
        let y = f.element(b % f.size());
        prop_assert_eq!((&x + &y).frobenius(), &x.frobenius() + &y.frobenius());
        prop_assert_eq!((&x * &y).frobenius(), &x.frobenius() * &y.frobenius());
        if !x.is_zero() {
            prop_assert!(x.pow(u128::from(f.size() - 1)).is_one());
            prop_assert!((&x * &x.inv().unwrap()).is_one());
        }
    }

    #[test]
    fn theta_is_a_derivation(p in prop::sample::select(vec![5u64, 7, 11]), a in prop::collection::vec(0i64..100, 12), b in prop::collection::vec(0i64..100, 12)) {
        let f = QExpansion::mod_p(p, 4, &a).unwrap();
        let g = QExpansion::mod_p(p, 6, &b).unwrap();
        let lhs = theta(&f.mul(&g).unwrap()).unwrap();
        let rhs = theta(&f).unwrap().mul(&g).unwrap().add(&f.mul(&theta(&g).unwrap()).unwrap()).unwrap();
        prop_assert_eq!(lhs.coeffs_mod_p(), rhs.coeffs_mod_p());
    }

    #[test]
    fn hasse_multiplication_keeps_the_filtration(p in prop::sample::select(vec![5u64, 7, 11, 13]), k in 2i64..=12, cs in prop::collection::vec(0i64..13, 4)) {
        let k = 2 * k;
        let trunc = 60;
        let b = basis(k, p, trunc).unwrap();
        prop_assume!(!b.is_empty());
        let mut f = b[0].scale(cs[0]).unwrap();
        for (g, c) in b.iter().zip(&cs).skip(1) {
            f = f.add(&g.scale(*c).unwrap()).unwrap();
        }
        prop_assume!(!f.is_zero());
        let w = filtration(&f).unwrap();
        prop_assert!(w <= k);
        let e = hasse(p, trunc).unwrap();
        prop_assert_eq!(filtration(&f.mul(&e).unwrap()).unwrap(), w);
        let tf = theta(&f).unwrap();
        if !tf.is_zero() {
            prop_assert!(filtration(&tf).unwrap() <= w + p as i64 + 1);
        }
    }

    #[test]
    fn weight_shift_keeps_dominance(g in 1usize..=3, k_idx in any::<prop::sample::Index>(), l_idx in any::<prop::sample::Index>(), p in prop::sample::select(vec![5u64, 7])) {
        let sig = SignatureData::siegel(g).unwrap();
        let kappas = dominant_tuples(g, -3, 5);
        let lambdas: Vec<Vec<i64>> = dominant_tuples(g, 0, 6)
            .into_iter()
            .filter(|t| is_admissible_characterized(&sig, &AutWeight::single(t)).unwrap())
            .collect();
        let kappa = AutWeight::single(k_idx.get(&kappas));
        let lambda = AutWeight::single(l_idx.get(&lambdas));
        let out = weight_shift(&sig, &kappa, &lambda, p).unwrap();
        prop_assert!(sig.validate_weight(&out).is_ok());
        let n = g as i64;
        let expected = kappa.abs_weight() + lambda.abs_weight() + n * (p as i64 - 1) * lambda.abs_weight() / 2;
        prop_assert_eq!(out.abs_weight(), expected);
    }
}
