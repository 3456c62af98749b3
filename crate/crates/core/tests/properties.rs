use cequant::codec::{decode_endo, decode_poly, encode_endo, encode_poly, from_json, to_json};
use cequant::diff_op::OperatorSymbol;
use cequant::harmonic::decompose;
use cequant::jet::TaylorJet;
use cequant::lie::{conformal_generators, operator_lie, operator_lie_endo, symbol_lie};
use cequant::quantizer::{i_hbar, Quantizer};
use cequant::{Rational, Signature, SymbolPolynomial, Weights};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn signature() -> impl Strategy<Value = Signature> {
    prop_oneof![Just((2, 0)), Just((1, 1)), Just((3, 0)), Just((2, 1))].prop_map(|(p, q)| Signature::new(p, q).unwrap())
}

fn rational() -> impl Strategy<Value = Rational> {
    (-6i64..=6, 1i64..=5).prop_map(|(a, b)| Rational::new(a, b))
}

fn poly(rng: &mut ChaCha8Rng, n: usize, xi: u32, x: u32) -> SymbolPolynomial {
    SymbolPolynomial::random(rng, n, xi, x, 4, false)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn composition_is_associative(s in signature(), seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let n = s.n();
        let [a, b, c] = [0; 3].map(|_| OperatorSymbol::new(poly(&mut rng, n, 2, 2)));
        prop_assert_eq!(a.compose(&b).compose(&c), a.compose(&b.compose(&c)));
    }

    #[test]
    fn adjoint_is_an_anti_involution(s in signature(), seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let n = s.n();
        let a = OperatorSymbol::new(poly(&mut rng, n, 2, 2));
        let b = OperatorSymbol::new(poly(&mut rng, n, 2, 2));
        prop_assert_eq!(a.adjoint().adjoint(), a.clone());
        prop_assert_eq!(a.compose(&b).adjoint(), b.adjoint().compose(&a.adjoint()));
    }

    #[test]
    fn operator_action_matches_its_normal_form(
        s in signature(), seed in any::<u64>(), l in rational(), m in rational(), g in 0usize..20,
    ) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let basis = conformal_generators(&s).unwrap();
        let x = &basis.generators()[g % basis.len()];
        let w = Weights::new(l, m);
        let a = OperatorSymbol::new(poly(&mut rng, s.n(), 3, 2));
        prop_assert_eq!(operator_lie_endo(x, &w).apply(a.body()), operator_lie(x, &a, &w).into_body());
    }

    #[test]
    fn quantization_is_equivariant(
        s in signature(), seed in any::<u64>(), l in rational(), g in 0usize..20,
    ) {
        // λ = 1/3 + l/7 with δ fixed at 3/4 stays clear of resonances
        let lambda = &Rational::new(1, 3) + &(&l * &Rational::new(1, 7));
        let w = Weights::from_delta(lambda, Rational::new(3, 4));
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let basis = conformal_generators(&s).unwrap();
        let x = &basis.generators()[g % basis.len()];
        let quant = Quantizer::new(&s, &w);
        let p = poly(&mut rng, s.n(), 3, 2);
        let lhs = operator_lie(x, &quant.quantize(&p).unwrap(), &w);
        let rhs = quant.quantize(&symbol_lie(x, &p, w.delta())).unwrap();
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn decomposition_sums_back(s in signature(), seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let p = poly(&mut rng, s.n(), 5, 2);
        let mut sum = SymbolPolynomial::zero(s.n());
        for c in decompose(&p, &s) {
            let again = decompose(&c.part, &s);
            prop_assert_eq!(again.len(), 1);
            prop_assert_eq!((again[0].k, again[0].s), (c.k, c.s));
            sum.add_assign(&c.part);
        }
        prop_assert_eq!(sum, p);
    }

    #[test]
    fn hbar_grading_inverts(s in signature(), seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let p = poly(&mut rng, s.n(), 5, 2);
        prop_assert_eq!(i_hbar(&i_hbar(&p, false).unwrap(), true).unwrap(), p);
    }

    #[test]
    fn codec_round_trips(s in signature(), seed in any::<u64>(), g in 0usize..20) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let p = i_hbar(&poly(&mut rng, s.n(), 3, 3), false).unwrap();
        let text = to_json(&encode_poly(&p, &s, None));
        let (back, s2) = decode_poly(&from_json(&text).unwrap()).unwrap();
        prop_assert_eq!(&back, &p);
        prop_assert_eq!(s2, s);
        let basis = conformal_generators(&s).unwrap();
        let e = operator_lie_endo(&basis.generators()[g % basis.len()], &Weights::equal(Rational::new(1, 3)));
        let (eb, _) = decode_endo(&from_json(&to_json(&encode_endo(&e, &s))).unwrap()).unwrap();
        prop_assert_eq!(eb, e);
    }

    #[test]
    fn jet_inverse_and_powers(n in 2usize..=4, seed in any::<u64>(), a in rational(), b in rational()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let f = TaylorJet::random_unit(&mut rng, n, 4, false);
        prop_assert_eq!(f.inv().unwrap().mul(&f), TaylorJet::one(n, 4));
        let lhs = f.pow(&a).unwrap().mul(&f.pow(&b).unwrap());
        prop_assert_eq!(lhs, f.pow(&(&a + &b)).unwrap());
    }
}
