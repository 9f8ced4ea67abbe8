mod common;

use common::small_instance;
use multiband_core::model::io::{parse_instance, parse_vector, write_instance, write_vector};
use multiband_core::reformulate::CompactCounterpart;
use multiband_core::{build_compact, canonicalize, CanonicalizeMode, CompactOptions};
use proptest::prelude::*;

#[test]
fn comments_and_unknown_sections_survive_parsing() {
    let text = "# fixture\n[lp]\nsense maximize\nvariables 1\nobjective 1\nrow 0 <= 10  # cap\n0 0 1\n[notes]\nfree text\n";
    let inst = parse_instance(text).unwrap();
    assert_eq!(inst.lp.rhs, vec![10.0]);
    assert!(inst.uncertainty.is_empty());
    assert_eq!(inst.extra["notes"], vec![(9, "free text".to_string())]);
}

#[test]
fn parse_errors_name_the_line() {
    let e = parse_instance("[lp]\nsense maximize\nvariables 1\nobjective x\n").unwrap_err();
    assert_eq!(e.line, 4);
}

#[test]
fn counterpart_file_round_trips() {
    for seed in 0..20 {
        let (lp, u) = small_instance(seed, 3, 4, 0.5);
        let canon = canonicalize(&lp, &u, CanonicalizeMode::SplitEqualities).unwrap();
        let cc = build_compact(&canon.lp, &canon.uncertainty, CompactOptions::default()).unwrap();
        let back = CompactCounterpart::parse(&cc.write()).unwrap();
        assert_eq!(back.rlp, cc.rlp);
        assert_eq!(back.write(), cc.write());
    }
}

proptest! {
    #[test]
    fn instances_round_trip(seed in 0u64..100_000, rows in 1usize..6, cols in 1usize..7, ge in 0.0f64..1.0) {
        let (lp, u) = small_instance(seed, rows, cols, ge);
        let text = write_instance(&lp, &u);
        let inst = parse_instance(&text).unwrap();
        prop_assert_eq!(&inst.lp, &lp);
        prop_assert_eq!(&inst.uncertainty.deviations, &u.deviations);
        prop_assert_eq!(write_instance(&inst.lp, &inst.uncertainty), text);
    }

    #[test]
    fn vectors_round_trip_bit_for_bit(x in prop::collection::vec(-1e6f64..1e6, 0..20)) {
        prop_assert_eq!(parse_vector(&write_vector(&x)).unwrap(), x);
    }
}
