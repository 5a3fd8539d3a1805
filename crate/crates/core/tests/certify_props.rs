use hkbound_core::bounds::{h_bound, BoundSpec};
use hkbound_core::certify::{cover_range, rational_witness, search_and_certify, spot_check, CoverageInterval};
use hkbound_core::proof::{prove_dimension, ProofParams};
use hkbound_core::rational::{frac, int, to_f64, Rational};
use hkbound_core::report::{surface_grid, NamedValue, Payload, ReportDocument};
use hkbound_core::search::{optimize_bound, Objective, SearchParams};
use hkbound_core::series::verify_quadric_identities;
use hkbound_core::tables::{table1, table2_printed, Table2};
use hkbound_core::envelope::phi_envelope;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn pool(threads: usize) -> rayon::ThreadPool {
    rayon::ThreadPoolBuilder::new().num_threads(threads).build().unwrap()
}

#[test]
fn deterministic_across_thread_counts() {
    let params = SearchParams::for_dim(7);
    let objective = Objective::HBound { dim: 7, e: int(7) };
    let target = frac(71, 67);
    let run = || {
        (
            optimize_bound(&objective, &params).unwrap(),
            cover_range(7, 1, 13, 400, &target, &params).unwrap(),
        )
    };
    let single = pool(1).install(run);
    let many = pool(8).install(run);
    assert_eq!(single.0.s.to_bits(), many.0.s.to_bits());
    assert_eq!(single.0.t.to_bits(), many.0.t.to_bits());
    assert_eq!(single.0.value.to_bits(), many.0.value.to_bits());
    assert_eq!(single.1, many.1);
    assert_eq!(run().1, single.1);
}

#[test]
fn search_value_close_to_exact_witness() {
    for e in 6..=12 {
        for objective in [
            Objective::HBound { dim: 7, e: int(e) },
            Objective::MuSmall { dim: 7, e: int(e), mu: 2 },
            Objective::RangeMin { dim: 7, k: 1, e_lo: int(e), e_hi: int(3 * e) },
        ] {
            let params = SearchParams::for_dim(7);
            let candidate = optimize_bound(&objective, &params).unwrap();
            let (s, t) = rational_witness(&candidate, &params).unwrap();
            let exact = to_f64(&objective.eval_exact(&s, &t).unwrap());
            assert!(candidate.value <= exact + 1e-9, "{objective:?}: {} vs {exact}", candidate.value);
        }
    }
}

#[test]
fn certificates_recheck() {
    let params = SearchParams::for_dim(7);
    let target = frac(71, 67);
    for row in table1(&target, &params).unwrap() {
        assert!(row.certificate.verdict);
        assert!(row.certificate.recheck().unwrap());
    }
    let (_, cert) = search_and_certify(&Objective::HBound { dim: 7, e: int(9) }, &params, &target).unwrap();
    let mut forged = cert.clone();
    forged.value += frac(1, 1_000_000);
    assert!(!forged.recheck().unwrap());
}

#[test]
fn coverage_is_sound() {
    let mut rng = ChaCha8Rng::seed_from_u64(99);
    let target = frac(71, 67);
    let plan = cover_range(7, 1, 6, 5340, &target, &SearchParams::for_dim(7)).unwrap();
    assert!(plan.is_complete());
    assert!(plan.verify().unwrap());
    assert_eq!(plan.covered_count(), 5340 - 6 + 1);
    for iv in &plan.intervals {
        let es: Vec<u64> = if iv.e2 - iv.e1 <= 50 {
            (iv.e1..=iv.e2).collect()
        } else {
            (0..20).map(|_| rng.gen_range(iv.e1..=iv.e2)).chain([iv.e1, iv.e2]).collect()
        };
        assert!(spot_check(iv, es.iter().copied()));
        for e in es {
            let exact = h_bound(&int(e as i64), 7, &iv.s0, &iv.t0).unwrap();
            assert!(exact >= iv.certified_min && exact > target);
        }
    }
    let mut broken = plan.clone();
    broken.intervals[0].certified_min = int(5);
    assert!(!broken.verify().unwrap());
}

#[test]
fn printed_table2_recertifies_offline() {
    let target = frac(71, 67);
    let rows = table2_printed(&target).unwrap();
    let json = serde_json::to_string(&rows).unwrap();
    let parsed: Vec<hkbound_core::tables::Table2Row> = serde_json::from_str(&json).unwrap();
    for row in parsed {
        let iv = CoverageInterval::new(7, 1, row.e1, row.e2, row.s0.clone(), row.t0.clone());
        assert_eq!(iv.certified_min, row.min);
        assert!(row.min > target && row.certifies);
    }
}

#[test]
fn surface_matches_optimizer() {
    let spec = BoundSpec::worst_case(7, 7, 1).unwrap();
    let grid = surface_grid(&spec, (200, 100), (0.0, 8.0), (0.0, 1.0)).unwrap();
    let params = SearchParams {
        rounds: 0,
        ..SearchParams::for_dim(7)
    };
    let opt = optimize_bound(&Objective::General { spec: spec.clone() }, &params).unwrap();
    assert!((grid.max.value - opt.value).abs() <= 1e-6);
    assert!(grid.max.value >= 1.06046, "{}", grid.max.value);

    let spec8 = BoundSpec::new(8, int(21), 19, 4).unwrap();
    let grid8 = surface_grid(&spec8, (200, 100), (0.0, 9.0), (0.0, 1.0)).unwrap();
    assert!(grid8.max.value >= 1.03535, "{}", grid8.max.value);

    let flat = surface_grid(&spec, (2, 2), (0.0, 0.0), (0.0, 0.0)).unwrap();
    assert!(flat.values.iter().all(|&v| v == 1.0));
}

fn roundtrip(doc: ReportDocument) {
    let json = doc.to_json().unwrap();
    let back = ReportDocument::from_json(&json).unwrap();
    assert_eq!(back, doc);
    assert_eq!(back.to_json().unwrap(), json);
}

#[test]
fn every_payload_kind_roundtrips() {
    let params = SearchParams::for_dim(7).with_grid(40, 20);
    let target = frac(71, 67);
    let p = serde_json::json!({"dim": 7});
    let objective = Objective::HBound { dim: 7, e: int(7) };
    let (candidate, certificate) = search_and_certify(&objective, &params, &target).unwrap();
    let plan = cover_range(7, 1, 13, 300, &target, &params).unwrap();
    let spec = BoundSpec::worst_case(7, 7, 1).unwrap();
    let payloads = vec![
        Payload::Values {
            values: vec![NamedValue::new("nu", frac(7, 8)), NamedValue::new("neg", frac(-3, 10))],
        },
        Payload::Optimum { candidate, certificate },
        Payload::Envelope {
            points: vec![phi_envelope(&frac(1, 2), &int(7), &[Rational::from_integer(1.into())], 7, &params).unwrap()],
        },
        Payload::Quadric {
            values: vec![NamedValue::new("p=3", frac(71, 67))],
            identities: verify_quadric_identities(),
        },
        Payload::Table1 {
            rows: table1(&target, &params).unwrap(),
        },
        Payload::Table2(Table2 {
            printed: table2_printed(&target).unwrap(),
            plan: plan.clone(),
        }),
        Payload::Coverage(plan),
        Payload::Proof(prove_dimension(7, 1, &ProofParams::for_dim(7)).unwrap()),
        Payload::Surface(surface_grid(&spec, (7, 5), (0.0, 8.0), (0.0, 1.0)).unwrap()),
    ];
    for payload in payloads {
        let mut doc = ReportDocument::new("test", p.clone(), payload);
        roundtrip(doc.clone());
        doc.timestamp = Some(1_700_000_000);
        roundtrip(doc);
    }
}

#[test]
fn non_reduced_exact_strings_are_rejected() {
    let good = serde_json::json!({"name": "x", "value": {"exact": "1/2", "float": 0.5}});
    assert!(serde_json::from_value::<NamedValue>(good).is_ok());
    let bad = serde_json::json!({"name": "x", "value": {"exact": "2/4", "float": 0.5}});
    assert!(serde_json::from_value::<NamedValue>(bad).is_err());
}
