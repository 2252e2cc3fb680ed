use proptest::prelude::*;

use fibercheck::corpus::{random_functor, random_pseudofunctor, DEFAULT_BUDGET};
use fibercheck::fibered::OverContext;
use fibercheck::grothendieck::check_lattice_characterization;
use fibercheck::mask::Bound;
use fibercheck::model::{self, ModelFile};
use fibercheck::topological::{classify, self_duality_check};

fn model_of(seed: u64) -> ModelFile {
    let mut m = ModelFile::default();
    m.add_functor(&random_functor(seed, DEFAULT_BUDGET).1);
    m.add_pseudofunctor(&random_pseudofunctor(seed));
    m
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn printing_then_parsing_is_the_identity(seed in 0u64..100_000) {
        let m = model_of(seed);
        let text = m.to_string();
        let back = model::parse(&text).unwrap();
        prop_assert_eq!(&back, &m);
        prop_assert_eq!(back.to_string(), text);
    }

    #[test]
    fn generated_models_are_valid(seed in 0u64..100_000) {
        let r = model_of(seed).resolve().unwrap();
        for (kind, name, rep) in r.validate() {
            prop_assert!(rep.is_valid(), "{} {}: {:?}", kind, name, rep.violations);
        }
    }

    #[test]
    fn dropping_a_composite_is_detected(seed in 0u64..100_000, pick in any::<prop::sample::Index>()) {
        let mut m = ModelFile::default();
        m.add_functor(&random_functor(seed, DEFAULT_BUDGET).1);
        let cs = &mut m.categories[0].compositions;
        cs.remove(pick.index(cs.len()));
        let r = m.resolve().unwrap();
        prop_assert!(!r.categories[0].validate().is_valid());
    }

    #[test]
    fn opposite_is_an_involution(seed in 0u64..100_000) {
        let u = random_functor(seed, DEFAULT_BUDGET).1;
        prop_assert_eq!(&u.source.opposite().opposite(), &*u.source);
        let w = u.opposite().opposite();
        prop_assert_eq!(&w.name, &u.name);
        prop_assert_eq!(&*w.source, &*u.source);
        prop_assert_eq!(&*w.target, &*u.target);
        prop_assert_eq!(&w.obj_map, &u.obj_map);
        prop_assert_eq!(&w.arr_map, &u.arr_map);
    }

    #[test]
    fn classification_respects_the_implications(seed in 0u64..100_000) {
        let ctx = OverContext::new(random_functor(seed, DEFAULT_BUDGET).1).unwrap();
        let c = classify(&ctx, Bound::Auto).unwrap();
        prop_assert!(c.inconsistencies().is_empty(), "{:?}", c.inconsistencies());
        prop_assert!(c.topological.agree() && c.pretopological.agree());
        prop_assert!(!c.is_topological() || c.is_pretopological());
        prop_assert!(!c.is_pretopological() || c.faithful);
        prop_assert!(!c.is_topological() || c.is_fibration());
        prop_assert!(!c.is_fibration() || c.prefibration());
        let (a, b) = self_duality_check(&ctx, Bound::Auto).unwrap();
        prop_assert_eq!(a, b);
    }

    #[test]
    fn lattice_characterization_agrees(seed in 0u64..100_000) {
        let ch = check_lattice_characterization(&random_pseudofunctor(seed)).unwrap();
        prop_assert!(ch.agree(), "topological {} lattice condition {}", ch.lhs(), ch.rhs());
    }

    #[test]
    fn parser_rejects_garbage_without_panicking(s in "\\PC{0,200}") {
        let _ = model::parse(&s);
    }

    #[test]
    fn parser_survives_truncated_models(seed in 0u64..1000, cut in any::<prop::sample::Index>()) {
        let text = model_of(seed).to_string();
        let mut end = cut.index(text.len() + 1);
        while !text.is_char_boundary(end) {
            end -= 1;
        }
        if let Ok(m) = model::parse(&text[..end]) {
            let _ = m.resolve();
        }
    }
}
