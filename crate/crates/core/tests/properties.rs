//! Invariants checked on randomly drawn curves and matrices.

use proptest::prelude::*;

use syzcurve::graded::ModuleSlices;
use syzcurve::harness::sweep::{run_job, SweepConfig, SweepJob};
use syzcurve::koszul::{betti_table, ActionModule, KoszulComplex};
use syzcurve::matrix::{kernel_basis, rank};
use syzcurve::{
    build_canonical_curve, build_paracanonical_curve, project_generic, BettiOptions, CurveKind, Error, FieldContext,
    Flavor, FpMatrix, NodalCurveModel, Strategy,
};

/// Admits levels 2 and 3.
const PRIME: u32 = 10009;

fn flavor() -> impl proptest::strategy::Strategy<Value = Flavor> {
    prop_oneof![Just(Flavor::Full), Just(Flavor::S), Just(Flavor::Tilde)]
}

fn strategy() -> impl proptest::strategy::Strategy<Value = Strategy> {
    prop_oneof![Just(Strategy::Direct), Just(Strategy::HyperplaneSection)]
}

fn model(ctx: &FieldContext, genus: usize, level: Option<u32>, seed: u64) -> NodalCurveModel {
    match level {
        None => build_canonical_curve(genus, ctx, seed).unwrap(),
        Some(l) => build_paracanonical_curve(genus, l, ctx, seed).unwrap(),
    }
}

fn level() -> impl proptest::strategy::Strategy<Value = Option<u32>> {
    prop_oneof![Just(None), Just(Some(2)), Just(Some(3))]
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 8, failure_persistence: None, ..ProptestConfig::default() })]

    #[test]
    fn differentials_compose_to_zero(
        genus in 6usize..=7,
        level in level(),
        seed in any::<u64>(),
        flavor in flavor(),
        route in strategy(),
    ) {
        let ctx = FieldContext::new(PRIME).unwrap();
        let model = model(&ctx, genus, level, seed);
        let space = project_generic(&model, seed).unwrap().v;
        let slices = ModuleSlices::build(&ctx, &model, &space, flavor, 4);
        let module = ActionModule::build(&ctx, &slices, route).unwrap();
        prop_assert!(module.actions_commute(&ctx));
        let complex = KoszulComplex::new(&ctx, module);
        for i in 1..=complex.module().acting_dim() {
            for j in 0..=2 {
                prop_assert!(complex.composition_vanishes(i, j), "d∘d at ({i},{j})");
            }
        }
    }

    #[test]
    fn euler_identity_holds(
        genus in 6usize..=8,
        level in level(),
        seed in any::<u64>(),
        flavor in flavor(),
    ) {
        let ctx = FieldContext::new(PRIME).unwrap();
        let model = model(&ctx, genus, level, seed);
        let space = project_generic(&model, seed).unwrap().v;
        let opts = BettiOptions::default();
        let table = match betti_table(&ctx, &model, &space, flavor, &opts) {
            Err(Error::DegenerateSample(_)) => return Ok(()),
            other => other.unwrap(),
        };
        let hilbert = ModuleSlices::build(&ctx, &model, &space, flavor, opts.j_max + 1).hilbert_function();
        let sums = table.euler_sums(&hilbert);
        prop_assert_eq!(sums.len(), opts.j_max + 1);
        for (d, lhs, rhs) in sums {
            prop_assert_eq!(lhs, rhs, "degree {}", d);
        }
    }

    #[test]
    fn routes_agree_on_betti_tables(genus in 6usize..=8, seed in any::<u64>(), flavor in flavor()) {
        let ctx = FieldContext::new(PRIME).unwrap();
        let model = build_canonical_curve(genus, &ctx, seed).unwrap();
        let space = project_generic(&model, seed).unwrap().v;
        let table = |strategy| {
            betti_table(&ctx, &model, &space, flavor, &BettiOptions { strategy, j_max: 3, ..BettiOptions::default() })
                .unwrap()
        };
        let (direct, section) = (table(Strategy::Direct), table(Strategy::HyperplaneSection));
        prop_assert_eq!(direct.cells(), section.cells());
    }

    #[test]
    fn rank_nullity(rows in 0usize..12, cols in 0usize..12, entries in proptest::collection::vec(0u32..PRIME, 144), sparse in any::<bool>()) {
        let ctx = FieldContext::new(PRIME).unwrap();
        let data: Vec<u32> = entries
            .iter()
            .take(rows * cols)
            .enumerate()
            .map(|(k, &v)| if sparse && k % 3 != 0 { 0 } else { v })
            .collect();
        let m = FpMatrix::from_vec(rows, cols, data);
        let kernel = kernel_basis(&ctx, &m);
        prop_assert_eq!(rank(&ctx, &m) + kernel.cols(), cols);
        prop_assert_eq!(rank(&ctx, &kernel), kernel.cols());
        prop_assert!(m.mul(&ctx, &kernel).is_zero());
        prop_assert_eq!(rank(&ctx, &m), rank(&ctx, &m.transpose()));
    }

    #[test]
    fn records_are_deterministic(genus in 6usize..=8, seed in any::<u64>(), paracanonical in any::<bool>()) {
        let (kind, level) = if paracanonical { (CurveKind::Paracanonical, Some(3)) } else { (CurveKind::Canonical, None) };
        let job = SweepJob { kind, genus, level, seed };
        let config = SweepConfig {
            levels: vec![3],
            options: BettiOptions { j_max: 3, ..BettiOptions::default() },
            ..SweepConfig::default()
        };
        let first = match run_job(&job, &config) {
            Err(Error::DegenerateSample(_)) => return Ok(()),
            other => other.unwrap(),
        };
        let second = run_job(&job, &config).unwrap();
        prop_assert_eq!(first.content_json(), second.content_json());
    }
}
