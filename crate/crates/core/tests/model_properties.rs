use itertools::Itertools;
use proptest::prelude::*;

use ness_core::harness::{generate_model, rewrite_equivalent, Generated, GeneratorConfig};
use ness_core::model::{CausalFormula, CausalModel, Context, Formula, Literal};

fn config() -> impl Strategy<Value = GeneratorConfig> {
    (any::<u64>(), 1usize..=6, 0usize..=4, 2usize..=3, 0usize..=2).prop_map(
        |(seed, n_endogenous, max_parents, domain_size, n_exogenous)| GeneratorConfig {
            seed,
            n_endogenous,
            max_parents,
            domain_size,
            n_exogenous,
        },
    )
}

fn generated() -> impl Strategy<Value = Generated> {
    config().prop_map(|cfg| generate_model(&cfg).unwrap())
}

fn all_contexts(model: &CausalModel) -> Vec<Context> {
    let sig = model.signature();
    sig.exogenous()
        .map(|u| (0..sig.domain(u).len()).map(move |v| (u, v)))
        .multi_cartesian_product()
        .map(|pairs| Context::new(sig, pairs).unwrap())
        .collect::<Vec<_>>()
        .into_iter()
        .chain(
            sig.exogenous()
                .next()
                .is_none()
                .then(|| Context::new(sig, []).unwrap()),
        )
        .collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn solve_and_satisfaction_agree(g in generated()) {
        let sig = g.model.signature();
        let sol = g.model.solve(&g.context);
        for v in sig.endogenous() {
            for x in 0..sig.domain(v).len() {
                let lit = Literal::new(v, x);
                let f = CausalFormula::plain(Formula::lit(lit));
                prop_assert_eq!(g.model.evaluate(&g.context, &f).unwrap(), sol.get(v) == x);
            }
        }
    }

    #[test]
    fn solving_is_repeatable(g in generated()) {
        prop_assert_eq!(g.model.solve(&g.context), g.model.solve(&g.context));
    }

    #[test]
    fn interventions_compose_and_are_idempotent(g in generated(), pick in any::<prop::sample::Index>(), val in any::<prop::sample::Index>()) {
        let sig = g.model.signature();
        let endo: Vec<_> = sig.endogenous().collect();
        let v = endo[pick.index(endo.len())];
        let lit = Literal::new(v, val.index(sig.domain(v).len()));
        let once = g.model.intervene_one(lit).unwrap();
        let twice = once.intervene_one(lit).unwrap();
        prop_assert!(once == twice);
        for ctx in all_contexts(&g.model) {
            prop_assert!(once.solve(&ctx).holds(lit));
        }
    }

    #[test]
    fn equivalent_mechanisms_behave_identically(g in generated()) {
        let r = rewrite_equivalent(&g.model);
        let sig = g.model.signature();
        for v in sig.endogenous() {
            prop_assert_eq!(g.model.parents(v).unwrap(), r.parents(v).unwrap());
        }
        for ctx in all_contexts(&g.model) {
            prop_assert_eq!(g.model.solve(&ctx), r.solve(&ctx));
        }
    }
}
