use fwa_channel::metrics::{
    angular_profile, best_on_average_angle, compute_path_gain, doppler_spectrum,
    effective_azimuth_gain, estimate_k_factor_mom, nominal_azimuth_gain, EmpiricalCdf,
    TemporalSeries,
};
use fwa_channel::scan::{
    synthesize_scan_record, Sample, ScanRecord, Scenario, SceneTruth, SounderConfig,
};
use proptest::prelude::*;

fn record_from_powers(powers: &[(f64, f64)]) -> ScanRecord {
    ScanRecord {
        link_id: "p".into(),
        street_id: "p".into(),
        scenario: Scenario::SameStreet,
        distance_m: 50.0,
        samples: powers
            .iter()
            .enumerate()
            .map(|(i, &(az, p))| Sample {
                time_s: i as f64 * 1e-3,
                azimuth_deg: az,
                power_dbm: p,
                turn_index: 0,
            })
            .collect(),
    }
}

fn arb_scan() -> impl Strategy<Value = Vec<(f64, f64)>> {
    prop::collection::vec((0.0f64..360.0, -120.0f64..-40.0), 1..400)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn effective_gain_ignores_power_offset(scan in arb_scan(), offset in -30.0f64..30.0) {
        let a = effective_azimuth_gain(&angular_profile(&record_from_powers(&scan)).unwrap()).unwrap();
        let shifted: Vec<_> = scan.iter().map(|&(az, p)| (az, p + offset)).collect();
        let b = effective_azimuth_gain(&angular_profile(&record_from_powers(&shifted)).unwrap()).unwrap();
        prop_assert!((a - b).abs() < 1e-9);
        prop_assert!(a >= 0.0);
    }

    #[test]
    fn best_angle_ignores_scaling(scan in arb_scan(), offset in -30.0f64..30.0) {
        let a = best_on_average_angle(&angular_profile(&record_from_powers(&scan)).unwrap()).unwrap();
        let shifted: Vec<_> = scan.iter().map(|&(az, p)| (az, p + offset)).collect();
        let b = best_on_average_angle(&angular_profile(&record_from_powers(&shifted)).unwrap()).unwrap();
        prop_assert_eq!(a, b);
    }

    #[test]
    fn doppler_integrates_to_variance(
        wobble in prop::collection::vec(-1.0f64..1.0, 512..2048),
        depth in 0.05f64..0.5,
        dt in 0.05f64..1.0,
    ) {
        let vals = wobble.iter().map(|u| 20.0 * (1.0 + depth * u).log10() - 60.0).collect();
        let s = TemporalSeries::new(vals, dt).unwrap();
        let d = doppler_spectrum(&s).unwrap();
        let amp: Vec<f64> = s.linear_mw().iter().map(|p| p.sqrt()).collect();
        let m = amp.iter().sum::<f64>() / amp.len() as f64;
        let var = amp.iter().map(|a| (a - m).powi(2)).sum::<f64>() / amp.len() as f64;
        let ratio = d.total_power() / var;
        prop_assert!((ratio - 1.0).abs() < 0.1, "ratio {}", ratio);
        prop_assert!(d.psd.iter().all(|&p| p >= 0.0));
    }

    #[test]
    fn k_factor_ignores_power_offset(
        vals in prop::collection::vec(-90.0f64..-50.0, 2..100),
        offset in -20.0f64..20.0,
    ) {
        let a = estimate_k_factor_mom(&TemporalSeries::new(vals.clone(), 0.2).unwrap()).unwrap();
        let shifted: Vec<f64> = vals.iter().map(|v| v + offset).collect();
        let b = estimate_k_factor_mom(&TemporalSeries::new(shifted, 0.2).unwrap()).unwrap();
        prop_assert!(a.k_db == b.k_db || (a.k_db - b.k_db).abs() < 1e-6);
        prop_assert!((b.omega_dbm - a.omega_dbm - offset).abs() < 1e-9);
    }

    #[test]
    fn cdf_quantile_is_an_inverse(vals in prop::collection::vec(-50.0f64..50.0, 1..200), p in 0.001f64..1.0) {
        let cdf = EmpiricalCdf::new(vals).unwrap();
        let q = cdf.quantile(p);
        prop_assert!(cdf.cdf(q) >= p - 1e-12);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn path_gain_recovers_scene_truth(
        pg in -100.0f64..-60.0,
        paths in prop::collection::vec((0.0f64..360.0, -12.0f64..0.0), 1..4),
        diffuse in prop::option::of(-15.0f64..0.0),
        seed in any::<u64>(),
    ) {
        let sounder = SounderConfig::reference_28ghz();
        let mut truth = SceneTruth::new(pg, 2).with_seed(seed);
        for (az, rel) in paths {
            truth = truth.with_path(az, rel);
        }
        if let Some(d) = diffuse {
            truth = truth.with_diffuse(d);
        }
        let rec = synthesize_scan_record(&truth, &sounder).unwrap();
        let measured = compute_path_gain(&rec, &sounder).unwrap();
        prop_assert!((measured - pg).abs() < 0.15, "measured {} truth {}", measured, pg);
    }

    #[test]
    fn effective_gain_bounded_by_nominal(
        paths in prop::collection::vec((0.0f64..360.0, -12.0f64..0.0), 1..4),
        diffuse in prop::option::of(-25.0f64..5.0),
        k_db in prop::option::of(0.0f64..20.0),
        seed in any::<u64>(),
    ) {
        let sounder = SounderConfig::reference_28ghz();
        let mut truth = SceneTruth::new(-80.0, 3).with_seed(seed);
        for (az, rel) in paths {
            truth = truth.with_path(az, rel);
        }
        if let Some(d) = diffuse {
            truth = truth.with_diffuse(d);
        }
        if let Some(k) = k_db {
            truth = truth.with_k_factor(k);
        }
        let rec = synthesize_scan_record(&truth, &sounder).unwrap();
        let eff = effective_azimuth_gain(&angular_profile(&rec).unwrap()).unwrap();
        let nominal = nominal_azimuth_gain(&sounder.rx_azimuth_pattern);
        prop_assert!(eff <= nominal + 0.3, "eff {} nominal {}", eff, nominal);
    }
}
