//! Property tests over generated signatures; each case is driven by a seed.

use idpath_core::cat::{Fibration, Morphism};
use idpath_core::checker::check;
use idpath_core::defeq::defeq_terms;
use idpath_core::gen::{self, Judgment, Shape};
use idpath_core::pathtools::{build_py, EquivRelWitness, Env};
use idpath_core::surface::{parse_with_globals, print_directive, Directive};
use idpath_core::{Signature, Telescope, Tm};
use proptest::prelude::*;
use rand::rngs::StdRng;
use rand::SeedableRng;

fn setup(seed: u64, sums: bool) -> (StdRng, Signature) {
    let mut rng = StdRng::seed_from_u64(seed);
    let sig = gen::signature(&mut rng, Shape { strong_sums: sums, ..Shape::default() });
    (rng, sig)
}

fn accepted(sig: &Signature, j: &Judgment) -> bool {
    check(sig, &j.ctx, &j.tm, &j.ty).accepted()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn generated_judgments_are_accepted(seed in any::<u64>(), sums in any::<bool>()) {
        let (mut rng, sig) = setup(seed, sums);
        if let Some(j) = gen::judgment(&mut rng, &sig) {
            prop_assert!(accepted(&sig, &j), "{j:?}");
        }
    }

    #[test]
    fn weakening_preserves_acceptance(seed in any::<u64>(), sums in any::<bool>()) {
        let (mut rng, sig) = setup(seed, sums);
        if let Some(j) = gen::judgment(&mut rng, &sig) {
            if let Some(w) = gen::weaken(&mut rng, &sig, &j) {
                prop_assert!(accepted(&sig, &w), "{w:?}");
            }
        }
    }

    #[test]
    fn substitution_preserves_acceptance(seed in any::<u64>(), sums in any::<bool>()) {
        let (mut rng, sig) = setup(seed, sums);
        if let Some(j) = gen::judgment(&mut rng, &sig) {
            if let Some(s) = gen::substitute(&mut rng, &sig, &j) {
                prop_assert!(accepted(&sig, &s), "{s:?}");
            }
        }
    }

    #[test]
    fn shifting_then_substituting_is_the_identity(seed in any::<u64>(), cut in 0usize..3) {
        let (mut rng, sig) = setup(seed, false);
        if let Some(j) = gen::judgment(&mut rng, &sig) {
            let back = j.tm.shift(cut, 1).subst(&[Tm::Star], cut);
            prop_assert_eq!(back, j.tm.clone());
            let back = j.ty.shift(cut, 1).subst(&[Tm::Star], cut);
            prop_assert_eq!(back, j.ty);
        }
    }

    #[test]
    fn definitional_equality_is_reflexive_and_symmetric(seed in any::<u64>()) {
        let (mut rng, sig) = setup(seed, true);
        if let Some(j) = gen::judgment(&mut rng, &sig) {
            prop_assert!(defeq_terms(&sig, &j.ctx, &j.ty, &j.tm, &j.tm));
            if let Some(other) = gen::term(&mut rng, &sig, &j.ctx, &j.ty, 2) {
                prop_assert_eq!(
                    defeq_terms(&sig, &j.ctx, &j.ty, &j.tm, &other),
                    defeq_terms(&sig, &j.ctx, &j.ty, &other, &j.tm)
                );
            }
        }
    }

    #[test]
    fn printed_judgments_parse_back(seed in any::<u64>(), sums in any::<bool>()) {
        let (mut rng, sig) = setup(seed, sums);
        if let Some(j) = gen::judgment(&mut rng, &sig) {
            let d = Directive::CheckTerm { ctx: j.ctx.clone(), tm: j.tm.clone(), ty: j.ty.clone() };
            let text = print_directive(&d);
            let names = sig.decls().iter().map(|d| d.name().to_string()).collect();
            let file = parse_with_globals(&text, names).unwrap();
            prop_assert_eq!(&file.directives[0].1, &d, "{}", text);
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn py_is_an_equivalence_relation_over_its_diagonal(seed in any::<u64>(), n in 0usize..=3) {
        let (mut rng, sig) = setup(seed, false);
        let Some(ctx) = gen::telescope(&mut rng, &sig, &Telescope::new(), n) else { return Ok(()) };
        let mut env = Env::new(&sig);
        let ps = build_py(&mut env, &Fibration::over_empty(ctx.clone())).unwrap();
        let diag = Morphism::identity(&ctx).push(&ctx.shift(0, n), ctx.vars(0));
        prop_assert!(ps.st().after(&ps.r()).equal(&env.sig, &diag));
        prop_assert_eq!(ps.ext.len(), n);
        prop_assert_eq!(&ps.st().terms, &Morphism::projection(&ps.total(), 2 * n).terms);
        EquivRelWitness::of(&ps).check(&mut env).unwrap();
    }
}
