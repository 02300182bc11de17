use fwa_channel::metrics::compute_path_gain;
use fwa_channel::scan::{
    read_scan_dataset, synthesize_scan_record, write_scan_dataset, Sample, ScanFormat, ScanRecord,
    Scenario, SceneTruth, SounderConfig,
};
use fwa_channel::units::{db_to_linear, linear_to_db};
use proptest::prelude::*;

fn arb_record() -> impl Strategy<Value = ScanRecord> {
    let samples = prop::collection::vec(
        (1e-6f64..1.0, 0.0f64..360.0, -160.0f64..0.0, 0i64..2),
        1..60,
    )
    .prop_map(|raw| {
        let mut t = 0.0;
        let mut turn = 0;
        raw.into_iter()
            .map(|(dt, az, p, dturn)| {
                t += dt;
                turn += dturn;
                Sample {
                    time_s: t,
                    azimuth_deg: az,
                    power_dbm: p,
                    turn_index: turn,
                }
            })
            .collect::<Vec<_>>()
    });
    (
        "[a-z0-9_-]{1,12}",
        "[a-z ]{0,10}",
        prop::sample::select(Scenario::ALL.to_vec()),
        1e-3f64..1e4,
        samples,
    )
        .prop_map(
            |(link_id, street_id, scenario, distance_m, samples)| ScanRecord {
                link_id,
                street_id,
                scenario,
                distance_m,
                samples,
            },
        )
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn csv_round_trip_is_exact(records in prop::collection::vec(arb_record(), 1..4)) {
        let mut buf = Vec::new();
        write_scan_dataset(&mut buf, &records, ScanFormat::Csv).unwrap();
        let back = read_scan_dataset(buf.as_slice(), ScanFormat::Csv).unwrap();
        prop_assert_eq!(back.len(), records.len());
        for (a, b) in records.iter().zip(&back) {
            prop_assert_eq!(&a.link_id, &b.link_id);
            prop_assert_eq!(a.distance_m.to_bits(), b.distance_m.to_bits());
            prop_assert_eq!(a.samples.len(), b.samples.len());
            for (x, y) in a.samples.iter().zip(&b.samples) {
                prop_assert_eq!(x.time_s.to_bits(), y.time_s.to_bits());
                prop_assert_eq!(x.azimuth_deg.to_bits(), y.azimuth_deg.to_bits());
                prop_assert_eq!(x.power_dbm.to_bits(), y.power_dbm.to_bits());
                prop_assert_eq!(x.turn_index, y.turn_index);
            }
        }
    }

    #[test]
    fn json_round_trip_is_exact(records in prop::collection::vec(arb_record(), 1..3)) {
        let mut buf = Vec::new();
        write_scan_dataset(&mut buf, &records, ScanFormat::Json).unwrap();
        let back = read_scan_dataset(buf.as_slice(), ScanFormat::Json).unwrap();
        prop_assert_eq!(back, records);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    #[test]
    fn synthesis_is_deterministic(seed in any::<u64>(), k_db in 0.0f64..20.0) {
        let sounder = SounderConfig::reference_28ghz();
        let truth = SceneTruth::new(-100.0, 4)
            .with_path(30.0, 0.0)
            .with_path(250.0, -4.0)
            .with_diffuse(-12.0)
            .with_k_factor(k_db)
            .with_seed(seed);
        let a = synthesize_scan_record(&truth, &sounder).unwrap();
        let b = synthesize_scan_record(&truth, &sounder).unwrap();
        prop_assert_eq!(a, b);
    }

    #[test]
    fn omni_mean_matches_link_budget_without_fading(
        pg in -110.0f64..-60.0,
        paths in prop::collection::vec((0.0f64..360.0, -15.0f64..0.0), 1..4),
        diffuse in prop::option::of(-20.0f64..0.0),
        seed in any::<u64>(),
    ) {
        let sounder = SounderConfig::reference_28ghz();
        let mut truth = SceneTruth::new(pg, 3).with_seed(seed);
        for (az, rel) in paths {
            truth = truth.with_path(az, rel);
        }
        if let Some(d) = diffuse {
            truth = truth.with_diffuse(d);
        }
        let rec = synthesize_scan_record(&truth, &sounder).unwrap();
        let measured = compute_path_gain(&rec, &sounder).unwrap();
        // the synthesizer adds receiver noise on top of the signal
        let noise = db_to_linear(sounder.noise_floor_dbm);
        let expected_omni = linear_to_db(db_to_linear(truth.omni_power_dbm(&sounder)) + noise);
        let expected = expected_omni - (truth.omni_power_dbm(&sounder) - pg);
        prop_assert!((measured - expected).abs() < 0.1, "measured {} expected {}", measured, expected);
    }
}
