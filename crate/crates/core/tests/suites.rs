use prophet_core::suites::{median_deviation_example, run_suite, SUITES};

#[test]
fn every_property_suite_holds() {
    for id in SUITES {
        let r = run_suite(id).unwrap();
        assert!(r.holds(), "{id}: {:?}", r.failures());
    }
    assert!(run_suite("nope").is_err());
}

#[test]
fn median_pooling_is_beaten_when_box_one_high_mass_is_small() {
    let (won, best) = median_deviation_example().unwrap();
    assert!(best > won + 1e-3, "pooling at B_M wins {won}, grid best {best}");
}
