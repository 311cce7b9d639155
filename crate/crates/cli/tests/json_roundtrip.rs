use gek_cli::output::{to_canonical_json, RecordDocument, SolveDocument};
use proptest::prelude::*;

fn finite() -> impl Strategy<Value = f64> {
    prop_oneof![
        any::<f64>().prop_filter("finite", |v| v.is_finite()),
        Just(0.0),
        Just(-0.0),
        Just(f64::MIN_POSITIVE),
        Just(5e-324),
        Just(f64::MAX),
    ]
}

fn record(m: usize) -> impl Strategy<Value = RecordDocument> {
    (
        0usize..100,
        proptest::collection::vec((finite(), finite()).prop_map(|(a, b)| [a, b]), m),
        proptest::collection::vec(finite(), m),
        proptest::option::of(proptest::collection::vec(finite(), m)),
        proptest::collection::vec(any::<bool>(), m),
    )
        .prop_map(
            |(k, approximations, residuals, steps, frozen)| RecordDocument {
                k,
                approximations,
                residuals,
                steps,
                frozen,
            },
        )
}

fn document() -> impl Strategy<Value = SolveDocument> {
    (1usize..5).prop_flat_map(|m| {
        (
            prop::sample::select(vec!["Converged", "MaxIterations", "Collision"]),
            0usize..100,
            proptest::collection::vec((finite(), finite()).prop_map(|(a, b)| [a, b]), m),
            proptest::collection::vec(record(m), 1..4),
        )
            .prop_map(|(status, iterations_used, final_approximations, trace)| {
                SolveDocument {
                    status: status.to_owned(),
                    iterations_used,
                    final_approximations,
                    trace,
                }
            })
    })
}

proptest! {
    #[test]
    fn canonical_json_is_a_fixed_point(doc in document()) {
        let first = to_canonical_json(&doc);
        let parsed: SolveDocument = serde_json::from_str(&first).unwrap();
        prop_assert_eq!(to_canonical_json(&parsed), first);
        for (a, b) in parsed.final_approximations.iter().zip(&doc.final_approximations) {
            prop_assert_eq!(a[0].to_bits(), b[0].to_bits());
            prop_assert_eq!(a[1].to_bits(), b[1].to_bits());
        }
    }
}
