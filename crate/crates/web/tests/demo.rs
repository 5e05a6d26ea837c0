use polariton_web::{field_from_nanowatts, preset_cfl, spacetime, MEV_PER_PS_PER_NW};

#[test]
fn spacetime_raster_shape() {
    let st = spacetime("cnrp2", 1.132, 0.5, 1.0, 10).unwrap();
    assert_eq!(st.field, "psi");
    assert_eq!(st.xs.len(), 201);
    assert_eq!(st.times.len(), 11);
    assert_eq!(st.density.len(), 11 * 201);
    assert!((st.times[10] - 1.0).abs() < 1e-12);
    assert!(st.density.iter().all(|d| d.is_finite() && *d >= 0.0));
    // Dirichlet ends stay empty
    assert_eq!(st.density[10 * 201], 0.0);
}

#[test]
fn coupled_model_shows_photons() {
    let st = spacetime("cnrp1", 10.0, 0.5, 0.5, 5).unwrap();
    assert_eq!(st.field, "psi_c");
    assert_eq!(st.times.len(), 6);
    // the empty cavity fills under the drive
    assert!(st.density[5 * 201..].iter().sum::<f64>() > 0.0);
    assert!(spacetime("cnrp1_spin", 1.0, 0.5, 0.5, 5).is_err());
    assert!(spacetime("cnrp2", 1.0, 0.5, 0.5, 0).is_err());
}

#[test]
fn cfl_of_presets() {
    assert!((preset_cfl("table2", 0.001).unwrap() - 0.0232).abs() < 5e-5);
    assert!((preset_cfl("table1_2d", 0.001).unwrap() - 0.3117).abs() < 5e-5);
    assert!(preset_cfl("nope", 0.001).is_err());
}

#[test]
fn laser_power_conversion() {
    let f = field_from_nanowatts(10.0, 100.0, false).unwrap();
    let expect = (2.0 * 10.0 * MEV_PER_PS_PER_NW / (300.0 * 55.2635e-3 * 100.0)).sqrt();
    assert!((f - expect).abs() < 1e-15);
    // 10 nW is 62.4 meV/ps to three figures
    assert!(((10.0 * MEV_PER_PS_PER_NW) - 62.4).abs() < 0.05);
    let f2 = field_from_nanowatts(10.0, 24.0, true).unwrap();
    assert!((f2 - 0.1143).abs() < 1e-3);
}
