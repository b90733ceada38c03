use num_complex::Complex64 as C64;
use proptest::prelude::*;

use effdyn::chain::{build_effective_basis, Model};
use effdyn::observables::{ObservableSpec, Spin};
use effdyn::profile::CouplingProfile;
use effdyn::scenarios::config::ScenarioConfig;
use effdyn::scenarios::series::TimeSeries;
use effdyn::scenarios::{execute, run_itc, run_qd_defect, run_qd_mixed, DefectDistribution, DefectEngine, ItcEngine};

fn couplings(n: std::ops::RangeInclusive<usize>) -> impl Strategy<Value = Vec<f64>> {
    n.prop_flat_map(|k| prop::collection::vec(0.1f64..1.5, k))
}

fn grid(end: f64, k: usize) -> Vec<f64> {
    (0..k).map(|i| end * i as f64 / (k - 1) as f64).collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn chain_bases_are_orthonormal(g in couplings(2..=7), rows in 1usize..5) {
        let p = CouplingProfile::explicit(g.clone()).unwrap();
        let b = build_effective_basis(&p, Model::Itc, g.len(), rows).unwrap();
        prop_assert!(b.orthonormality_defect() < 1e-11);
        prop_assert!(b.labels().iter().all(|l| l.row <= rows));
    }

    #[test]
    fn untruncated_cavity_chain_is_exact(g in couplings(2..=5), nbar in 0.1f64..1.5) {
        let p = CouplingProfile::explicit(g).unwrap();
        let obs = [ObservableSpec::ground(), ObservableSpec::QuadratureVariance];
        let t = grid(12.0, 13);
        let ex = run_itc(&p, nbar, Some(6), ItcEngine::Exact, &obs, &t).unwrap();
        let ef = run_itc(&p, nbar, Some(6), ItcEngine::Effective { max_row: 64, max_col: None }, &obs, &t).unwrap();
        for name in ["P0", "dX1_sq"] {
            for (a, b) in ex.series.column(name).unwrap().iter().zip(ef.series.column(name).unwrap()) {
                prop_assert!((a - b).abs() < 1e-8, "{name}: {a} vs {b}");
            }
        }
    }

    #[test]
    fn full_depth_chain_beats_single_row(g in couplings(3..=5)) {
        // the deepest chain is exact, so its error bounds every shallower one
        let p = CouplingProfile::explicit(g).unwrap();
        let obs = [ObservableSpec::ground()];
        let t = grid(8.0, 9);
        let ex = run_itc(&p, 1.0, Some(5), ItcEngine::Exact, &obs, &t).unwrap();
        let deep = run_itc(&p, 1.0, Some(5), ItcEngine::Effective { max_row: 64, max_col: None }, &obs, &t).unwrap();
        let err = |r: &effdyn::scenarios::ItcRun| {
            r.series.column("P0").unwrap().iter().zip(ex.series.column("P0").unwrap()).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max)
        };
        let shallow = run_itc(&p, 1.0, Some(5), ItcEngine::Effective { max_row: 1, max_col: None }, &obs, &t).unwrap();
        prop_assert!(err(&deep) <= err(&shallow) + 1e-12);
    }

    #[test]
    fn electron_population_is_a_probability(g in couplings(3..=6), j0 in 1usize..=3, u in 0.0f64..1.0) {
        let p = CouplingProfile::explicit(g.iter().map(|x| x / 4.0).collect()).unwrap();
        let d = DefectDistribution::Lorentzian { j0, gamma: 1.5 };
        let v = (1.0 - u * u).sqrt();
        let obs = [ObservableSpec::ElectronPopulation { spin: Spin::Up }, ObservableSpec::Tangle];
        let t = grid(30.0, 16);
        let r = run_qd_defect(&p, &d, (C64::new(u, 0.0), C64::new(0.0, v)), DefectEngine::Effective { max_row: 8 }, &obs, &t, 8).unwrap();
        for x in r.series.column("P_up").unwrap() {
            prop_assert!((-1e-12..=1.0 + 1e-12).contains(x));
        }
        for x in r.series.column("tangle").unwrap() {
            prop_assert!((-1e-12..=1.0 + 1e-12).contains(x));
        }
    }

    #[test]
    fn mixtures_are_linear_in_weights(g in couplings(3..=8), lam in 0.0f64..1.0) {
        let n = g.len();
        let p = CouplingProfile::explicit(g).unwrap();
        let w1 = DefectDistribution::Uniform.weights(n).unwrap();
        let w2 = DefectDistribution::SingleSite { j0: n }.weights(n).unwrap();
        let mix: Vec<f64> = w1.iter().zip(&w2).map(|(a, b)| lam * a + (1.0 - lam) * b).collect();
        let e = (C64::new(0.8, 0.0), C64::new(0.6, 0.0));
        let t = grid(20.0, 11);
        let r = |w: &[f64]| run_qd_mixed(&p, w, e, &t).unwrap().column("P_up").unwrap().to_vec();
        let (a, b, m) = (r(&w1), r(&w2), r(&mix));
        for i in 0..t.len() {
            prop_assert!((m[i] - (lam * a[i] + (1.0 - lam) * b[i])).abs() < 1e-12);
        }
    }

    #[test]
    fn csv_round_trips_exactly(vals in prop::collection::vec(-1e6f64..1e6, 1..20)) {
        let times: Vec<f64> = (0..vals.len()).map(|i| i as f64 * 0.1).collect();
        let mut s = TimeSeries::new(times.clone()).unwrap();
        s.push("x", vals.clone()).unwrap();
        let csv = s.to_csv_string();
        for (line, (t, v)) in csv.lines().skip(1).zip(times.iter().zip(&vals)) {
            let mut f = line.split(',').map(|x| x.parse::<f64>().unwrap());
            prop_assert_eq!(f.next().unwrap().to_bits(), t.to_bits());
            prop_assert_eq!(f.next().unwrap().to_bits(), v.to_bits());
        }
    }
}

#[test]
fn runs_are_deterministic() {
    let cfg = ScenarioConfig::from_json(
        r#"{ "schema_version": 1,
             "scenario": { "kind": "qd_defect",
               "profile": { "kind": "gaussian_dot", "n": 200, "params": { "A": 1.0, "r0": 1.0 } },
               "defect": { "kind": "lorentzian", "j0": 150, "Gamma": 20.0 },
               "electron": { "u": [0.6, 0.0], "v": [0.0, 0.8] },
               "engine": { "kind": "effective", "max_row": 4 },
               "observables": [ { "kind": "tangle" }, { "kind": "electron_population", "spin": "up" } ] },
             "time": { "end": 2.0, "points": 40, "unit": "transfer_time" } }"#,
    )
    .unwrap();
    let a = execute(&cfg).unwrap().series.to_csv_string();
    let b = execute(&cfg).unwrap().series.to_csv_string();
    assert_eq!(a, b);
}
