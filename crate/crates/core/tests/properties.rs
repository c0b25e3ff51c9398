use proptest::prelude::*;
use tamegamma::doc::RepDocument;
use tamegamma::factors::{conjugate, epsilon0_field, gamma_field, gauss_sum, l_factor};
use tamegamma::family::{det_t, fractions_agree, thm61_check};
use tamegamma::ring::{cyclotomic_automorphism, galois_action};
use tamegamma::sample::Sampler;
use tamegamma::{AdditiveCharacter, Elem, LocalFieldData, Ring, SFraction};

fn cyc_elem(ring: &Ring, m: u64, coeffs: &[i64]) -> Elem {
    let z = ring.root_of_unity(m).unwrap();
    coeffs.iter().rev().fold(ring.zero(), |acc, &c| &acc * &z + ring.from_int(c))
}

fn cyclotomic_case() -> impl Strategy<Value = (u64, Vec<i64>, Vec<i64>)> {
    prop_oneof![Just(3u64), Just(4), Just(5), Just(7), Just(8), Just(9), Just(12), Just(15)].prop_flat_map(|m| {
        (Just(m), prop::collection::vec(-9i64..=9, 1..8), prop::collection::vec(-9i64..=9, 1..8))
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn cyclotomic_field_axioms((m, a, b) in cyclotomic_case()) {
        let ring = Ring::cyclotomic(m).unwrap();
        let (x, y) = (cyc_elem(&ring, m, &a), cyc_elem(&ring, m, &b));
        prop_assert_eq!(&x * &y, &y * &x);
        prop_assert_eq!(&(&x + &y) * &y, &(&x * &y) + &(&y * &y));
        if !x.is_zero() {
            prop_assert!((&x * &x.inverse().unwrap()).is_one());
        }
    }

    #[test]
    fn galois_action_is_the_automorphism((m, a, _b) in cyclotomic_case(), k in 1u64..60) {
        let ring = Ring::cyclotomic(m).unwrap();
        let l = ring.root_order();
        let k = (1..=l).cycle().skip(k as usize).find(|j| num_integer::gcd(*j, l) == 1).unwrap();
        let x = cyc_elem(&ring, m, &a);
        let direct = galois_action(&x, k).unwrap();
        let via_hom = cyclotomic_automorphism(&ring, k).unwrap().apply(&x).unwrap();
        prop_assert_eq!(direct, via_hom);
    }

    #[test]
    fn finite_field_inverses(ell in prop_oneof![Just(2u64), Just(3), Just(5), Just(7), Just(13)], r in 1u32..4, k in 1i64..1000) {
        let ring = Ring::finite_field(ell, r).unwrap();
        let x = ring.root_of_unity(ring.root_order()).unwrap().pow(k as u64) + ring.from_int(k);
        if !x.is_zero() {
            prop_assert!((&x * &x.inverse().unwrap()).is_one());
        }
    }

    #[test]
    fn fraction_display_round_trips(num in prop::collection::vec(-20i64..=20, 1..5), den in prop::collection::vec(-20i64..=20, 0..4), shift in -3i64..3) {
        let q = Ring::rationals();
        let poly = |c: &[i64], lead: i64| -> String {
            let mut terms: Vec<String> = c.iter().enumerate().map(|(i, a)| format!("({a})*X^{i}")).collect();
            terms.push(format!("({lead})*X^{}", c.len()));
            terms.join(" + ")
        };
        let text = format!("({})*X^{shift} / (1 + {})", poly(&num, 1), poly(&den, 3));
        let f = SFraction::parse(&q, &text).unwrap();
        let again = SFraction::parse(&q, &f.to_string()).unwrap();
        prop_assert!(again.equals(&f));
        prop_assert!(f.normalized().equals(&f));
    }

    #[test]
    fn gauss_sum_norm(choice in 0usize..5, j in 1u64..80) {
        let (p, f, d) = [(3, 1, 1), (3, 1, 2), (5, 1, 1), (7, 1, 1), (3, 2, 1)][choice];
        let field = LocalFieldData::new(p, f, 11).unwrap();
        let qd = field.extension(d).unwrap().q();
        let j = 1 + j % (qd - 2);
        let g = gauss_sum(&field, d, j, &AdditiveCharacter::default()).unwrap();
        prop_assert!((&g * &conjugate(&g).unwrap()).equals_int(qd as i64));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn semisimple_tame_identities(seed in any::<u64>()) {
        let rep = Sampler::new(seed, 0, 9, 4).tame_semisimple().unwrap();
        prop_assert!(thm61_check(&rep));
        let (_, inv) = rep.inertia_invariants().unwrap();
        prop_assert!(det_t(&rep).unwrap().equals_int((rep.field().q() as i64).pow(inv as u32)));
    }

    #[test]
    fn epsilon0_and_gamma_are_additive(seed in any::<u64>(), u in 1i64..5) {
        let a = Sampler::new(seed, 1, 7, 3).tame_semisimple().unwrap();
        let b = a.twist_unramified(&a.ring().from_int(-u)).unwrap();
        let sum = a.direct_sum(&b).unwrap();
        let psi = AdditiveCharacter::default();
        let (ea, eb, es) = (epsilon0_field(&a, &psi).unwrap(), epsilon0_field(&b, &psi).unwrap(), epsilon0_field(&sum, &psi).unwrap());
        prop_assert_eq!(es, ea * eb);
        let (ga, gb) = (gamma_field(&a, &psi).unwrap(), gamma_field(&b, &psi).unwrap());
        prop_assert!(fractions_agree(&gamma_field(&sum, &psi).unwrap(), &ga.mul(&gb)).unwrap());
        prop_assert!(fractions_agree(&l_factor(&sum).unwrap(), &l_factor(&a).unwrap().mul(&l_factor(&b).unwrap())).unwrap());
    }

    #[test]
    fn gamma_is_conjugation_invariant(seed in any::<u64>()) {
        let mut s = Sampler::new(seed, 2, 9, 3);
        let rep = s.tame_semisimple().unwrap();
        let p = s.unimodular(rep.ring(), rep.dim());
        let psi = AdditiveCharacter::new(0, 1);
        let g = gamma_field(&rep, &psi).unwrap();
        let h = gamma_field(&rep.conjugate(&p).unwrap(), &psi).unwrap();
        prop_assert!(fractions_agree(&g, &h).unwrap());
    }

    #[test]
    fn documents_round_trip(seed in any::<u64>()) {
        let wd = Sampler::new(seed, 3, 9, 4).wd().unwrap();
        let psi = AdditiveCharacter::new(1, 1);
        let doc = RepDocument::from_wd(&wd, &psi);
        let parsed = RepDocument::from_json(&doc.to_json()).unwrap().parse().unwrap();
        prop_assert_eq!(&parsed.wd, &wd);
        prop_assert_eq!(parsed.psi, psi);
    }
}
