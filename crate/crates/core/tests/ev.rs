use std::time::Instant;

use catv_core::comma::{build_comma_on, section_to_transformation, transformation_to_section};
use catv_core::fixtures::ev::ev_example;
use catv_core::natural::{check_heuristic_naturality, first_naturality_failure};
use catv_core::Cap;

#[test]
fn ev_is_natural_and_every_mutation_is_caught() {
    let start = Instant::now();
    let ex = ev_example(Cap::default()).unwrap();
    let span = &ex.partition.span;
    let full = check_heuristic_naturality(&ex.f, &ex.g, span, &ex.eta, None).unwrap();
    assert!(full.is_natural());
    assert_eq!(full.checked, 56 * 56);
    let gens = ex.partition.single_class_generators();
    assert!(
        check_heuristic_naturality(&ex.f, &ex.g, span, &ex.eta, Some(&gens))
            .unwrap()
            .is_natural()
    );

    let mutations = ex.mutations();
    assert_eq!(mutations.len(), 238);
    for m in mutations {
        let bad = ex.mutated(m);
        let witness =
            first_naturality_failure(&ex.f, &ex.g, span, &bad, Some(&ex.touching(m.component)))
                .unwrap()
                .unwrap_or_else(|| panic!("{m:?} was not caught"));
        assert!(witness.upper != witness.lower);
    }
    assert!(start.elapsed().as_secs() < 30);
}

#[test]
fn ev_section_of_the_comma_category() {
    let ex = ev_example(Cap::default()).unwrap();
    let span = &ex.partition.span;
    let candidates = ex.eta.iter().map(|e| vec![e.clone()]).collect();
    let cc = build_comma_on(&ex.f, &ex.g, span, candidates, Cap::default()).unwrap();
    assert!(cc.forgetful().is_faithful());
    let s = transformation_to_section(&cc, &ex.eta).unwrap();
    assert_eq!(section_to_transformation(&cc, &s).unwrap(), ex.eta);
    let m = ex.mutations()[17];
    let bad = ex.mutated(m);
    let candidates = bad.iter().map(|e| vec![e.clone()]).collect();
    let cc = build_comma_on(&ex.f, &ex.g, span, candidates, Cap::default()).unwrap();
    assert!(transformation_to_section(&cc, &bad).is_err());
}
