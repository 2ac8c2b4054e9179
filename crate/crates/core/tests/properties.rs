use gkverify_core::arith::q;
use gkverify_core::gkmodule::{self, ModuleParams, Sign, TruncatedElement};
use gkverify_core::liealg::{self, pbw_normal_form, pbw_normal_form_with, CasimirKind};
use gkverify_core::symsq::{self, SymSquareTensor};
use gkverify_core::{
    Block, EnvelopingElement, Flavor, GaussianRational as GR, LieElement, Monomial, MultiPoly, Signature,
    VariableSpace, WeylOperator,
};
use proptest::prelude::*;

fn gr() -> impl Strategy<Value = GR> {
    (-6i64..=6, 1i64..=5, -6i64..=6, 1i64..=5).prop_map(|(a, b, c, d)| GR::complex((a, b), (c, d)))
}

fn nonzero_gr() -> impl Strategy<Value = GR> {
    gr().prop_filter("nonzero", |x| !x.is_zero())
}

const SPACE: VariableSpace = VariableSpace { p: 2, q: 2 };

fn poly(max_terms: usize, max_exp: u16) -> impl Strategy<Value = MultiPoly> {
    prop::collection::vec((prop::collection::vec(0..=max_exp, 4), gr()), 0..max_terms).prop_map(|terms| {
        MultiPoly::from_terms(SPACE, terms.into_iter().map(|(e, c)| (Monomial::from_exps(e), c)))
    })
}

fn operator() -> impl Strategy<Value = WeylOperator> {
    prop::collection::vec((0usize..4, 0usize..4, 0u8..3, gr()), 1..4).prop_map(|parts| {
        let mut op = WeylOperator::zero(SPACE);
        for (a, b, kind, c) in parts {
            let piece = match kind {
                0 => &WeylOperator::var(SPACE, a) * &WeylOperator::partial(SPACE, b),
                1 => &WeylOperator::partial(SPACE, a) * &WeylOperator::partial(SPACE, b),
                _ => &WeylOperator::var(SPACE, a) * &WeylOperator::var(SPACE, b),
            };
            op = &op + &piece.scale(&c);
        }
        op
    })
}

fn lie_element(sig: Signature) -> impl Strategy<Value = LieElement> {
    let dim = sig.n() * (sig.n() - 1) / 2;
    prop::collection::vec(gr(), dim).prop_map(move |c| {
        let v = c.into_iter().enumerate().filter(|(_, x)| !x.is_zero()).collect();
        LieElement::from_coords(sig, Flavor::G, &v)
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn field_axioms(a in gr(), b in gr(), c in gr()) {
        prop_assert_eq!(&a + &b, &b + &a);
        prop_assert_eq!(&a * &b, &b * &a);
        prop_assert_eq!(&(&a + &b) + &c, &a + &(&b + &c));
        prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
        prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
        prop_assert_eq!(&a - &a, GR::zero());
        prop_assert!(a.is_reduced());
        prop_assert_eq!(a.mul_i(), &a * &GR::i());
    }

    #[test]
    fn inverse(a in nonzero_gr()) {
        prop_assert_eq!(&a * &a.inv().unwrap(), GR::one());
        prop_assert_eq!(a.conj().conj(), a.clone());
    }

    #[test]
    fn polynomial_ring(f in poly(5, 2), g in poly(5, 2), h in poly(4, 2)) {
        prop_assert_eq!(&f * &g, &g * &f);
        prop_assert_eq!(&f * &(&g + &h), &(&f * &g) + &(&f * &h));
        prop_assert_eq!(&(&f - &g) + &g, f.clone());
        // Leibniz rule for each variable.
        for v in 0..4 {
            prop_assert_eq!((&f * &g).partial(v), &(&f.partial(v) * &g) + &(&f * &g.partial(v)));
        }
    }

    #[test]
    fn compose_matches_sequential_application(a in operator(), b in operator(), f in poly(5, 3)) {
        let ab = a.compose(&b).unwrap();
        prop_assert_eq!(ab.apply(&f).unwrap(), a.apply(&b.apply(&f).unwrap()).unwrap());
    }

    #[test]
    fn compose_is_associative(a in operator(), b in operator(), c in operator()) {
        let left = a.compose(&b).unwrap().compose(&c).unwrap();
        let right = a.compose(&b.compose(&c).unwrap()).unwrap();
        prop_assert_eq!(left, right);
    }

    #[test]
    fn truncated_application_is_exact_below_validity(a in operator(), f in poly(6, 3), v in 4i64..10) {
        let t = TruncatedElement::new(f.clone(), v);
        let out = gkmodule::apply_operator(&a, &t).unwrap();
        prop_assert_eq!(out.validity, v - a.degree_drop() as i64);
        // Terms of `f` above `v` cannot reach degree ≤ validity of the result.
        let exact = a.apply(&f).unwrap().truncate(out.validity);
        prop_assert_eq!(out.expansion, exact);
    }

    #[test]
    fn jacobi_and_pi_homomorphism(x in lie_element(Signature::new(2, 2)), y in lie_element(Signature::new(2, 2)), z in lie_element(Signature::new(2, 2))) {
        let j = x.bracket(&y.bracket(&z).unwrap()).unwrap()
            .add(&y.bracket(&z.bracket(&x).unwrap()).unwrap()).unwrap()
            .add(&z.bracket(&x.bracket(&y).unwrap()).unwrap()).unwrap();
        prop_assert!(j.is_zero());
        let lhs = liealg::pi_lie(&x).unwrap().commutator(&liealg::pi_lie(&y).unwrap()).unwrap();
        prop_assert_eq!(lhs, liealg::pi_lie(&x.bracket(&y).unwrap()).unwrap());
        let phi = x.bracket(&y).unwrap().phi().unwrap();
        prop_assert_eq!(phi, x.phi().unwrap().bracket(&y.phi().unwrap()).unwrap());
    }

    #[test]
    fn pbw_confluence(word in prop::collection::vec(0u16..10, 2..5), picks in prop::collection::vec(0usize..8, 32)) {
        let sig = Signature::new(3, 2);
        let u = EnvelopingElement::from_word(sig, word, GR::one());
        let mut k = 0;
        let chosen = pbw_normal_form_with(&u, &mut |_: &[u16], _: &[usize]| { k += 1; picks[k % picks.len()] });
        let nf = pbw_normal_form(&u);
        prop_assert!(nf.is_normal());
        prop_assert_eq!(chosen, nf.clone());
        // π of a word equals π of its normal form.
        prop_assert_eq!(liealg::pi(&u), liealg::pi(&nf));
    }

    #[test]
    fn sym_coords_roundtrip(x in lie_element(Signature::new(2, 3)), y in lie_element(Signature::new(2, 3))) {
        let t = SymSquareTensor::outer(&x, &y).unwrap();
        let sym = t.plus(&t.transpose()).unwrap();
        let coords = sym.sym_coords().unwrap();
        prop_assert_eq!(SymSquareTensor::from_sym_coords(Signature::new(2, 3), Flavor::G, &coords), sym.clone());
        prop_assert_eq!(sym.phi().unwrap().phi_inv().unwrap(), sym);
    }

    #[test]
    fn casimir_commutes_with_pi(x in lie_element(Signature::new(3, 1))) {
        let sig = Signature::new(3, 1);
        let omega = gkmodule::casimir_image(CasimirKind::G, sig).unwrap();
        prop_assert!(omega.commutator(&liealg::pi_lie(&x).unwrap()).unwrap().is_zero());
    }

    #[test]
    fn adjoint_action_fixes_q(x in lie_element(Signature::new(2, 2))) {
        let qt = symsq::build_q(Flavor::G, Signature::new(2, 2));
        prop_assert!(symsq::adjoint_action(&x, &qt).unwrap().is_zero());
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn typical_elements_are_members(k in 0usize..3, l in 0usize..3, m in 0usize..2, plus in any::<bool>()) {
        let sign = if plus { Sign::Plus } else { Sign::Minus };
        let params = ModuleParams::new(4, 4, m, sign);
        let s = params.space();
        let kt = params.ktype(k, l);
        let h1 = gkverify_core::poly::harmonic_basis(s, Block::X, k).elements.pop().unwrap();
        let h2 = gkverify_core::poly::harmonic_basis(s, Block::Y, l).elements.pop().unwrap();
        match gkmodule::typical_element(&params, &h1, &h2, 12) {
            Ok(f) => {
                prop_assert!(params.admits(&kt));
                prop_assert!(gkmodule::verify_membership(&params, &f).unwrap().passed());
                prop_assert!(gkmodule::xi_eigenvalue_check(&params, &kt, &f).unwrap().passed);
            }
            Err(_) => prop_assert!(!params.admits(&kt)),
        }
    }

    #[test]
    fn psi_recurrence(num in -20i64..20, den in 1i64..4, cutoff in 0i64..24) {
        let alpha = q(num, den);
        match gkmodule::psi_series(&alpha, cutoff) {
            Ok(s) => {
                let c: Vec<_> = s.coeffs.values().collect();
                prop_assert!(c[0].is_one());
                prop_assert_eq!(c.len() as i64, cutoff / 4 + 1);
                for j in 0..c.len() - 1 {
                    let f = &GR::from_int(j as i64 + 1) * &(&alpha + &GR::from_int(j as i64));
                    prop_assert!((&(c[j + 1] * &f) + c[j]).is_zero());
                }
            }
            Err(_) => prop_assert!(num % den == 0 && num / den <= 0),
        }
    }
}
