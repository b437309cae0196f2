mod common;

use nonscatter::media::Host;

#[test]
fn single_mode_densities_match_wave_functions() {
    let err = common::calibration_error(4, 5, &Host::new(2.0, 1.5).unwrap(), 1.3);
    assert!(err < 1e-8, "{err:e}");
}

#[test]
fn calibration_up_to_degree_ten() {
    let err = common::calibration_error(10, 20, &Host::vacuum(), 2.0);
    assert!(err < 1e-8, "{err:e}");
}
