use num_rational::Ratio;
use proptest::prelude::*;

use qdist::amp_est::{
    ae_outcome_pmf, est_prob, estimate_for_outcome, unitary_reference_pmf, ReferenceCaps,
};
use qdist::dist::{
    generators, inner, io, l1_distance, l1_distance_exact, make_oracle, moment,
    random_permutation, Distribution, OracleTable, QueryLedger,
};
use qdist::lower_bounds::{
    build_collision_oracles, corollary_report, fingerprint_of, matching_parity_distance,
    CollisionFunction,
};
use qdist::rng;
use qdist::testers::{est_dist, relative_difference, StatDiffParams};

fn counts(len: std::ops::Range<usize>) -> impl Strategy<Value = Vec<u64>> {
    prop::collection::vec(0u64..12, len).prop_filter("nonzero", |v| v.iter().any(|&c| c > 0))
}

fn dist_triple() -> impl Strategy<Value = (Distribution, Distribution, Distribution)> {
    (1usize..16).prop_flat_map(|n| {
        (counts(n..n + 1), counts(n..n + 1), counts(n..n + 1)).prop_map(|(a, b, c)| {
            (
                Distribution::from_counts(a).unwrap(),
                Distribution::from_counts(b).unwrap(),
                Distribution::from_counts(c).unwrap(),
            )
        })
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn l1_is_a_metric((p, q, r) in dist_triple()) {
        let pq = l1_distance_exact(&p, &q).unwrap();
        prop_assert_eq!(pq, l1_distance_exact(&q, &p).unwrap());
        prop_assert_eq!(pq == Ratio::from_integer(0), p == q);
        prop_assert!(pq <= Ratio::from_integer(2));
        let pr = l1_distance_exact(&p, &r).unwrap();
        let rq = l1_distance_exact(&r, &q).unwrap();
        prop_assert!(pq <= pr + rq);
    }

    #[test]
    fn distance_to_uniform_is_bounded_by_collision_excess(c in counts(1..40)) {
        let p = Distribution::from_counts(c).unwrap();
        let n = p.n() as f64;
        let u = generators::uniform(p.n()).unwrap().p;
        let lhs = l1_distance(&p, &u).unwrap();
        let excess = (inner(&p, &p).unwrap() - 1.0 / n).max(0.0);
        prop_assert!(lhs <= n.sqrt() * excess.sqrt() + 1e-12);
    }

    #[test]
    fn moments_dominate_uniform(c in counts(1..40), k in 1u32..6) {
        let p = Distribution::from_counts(c).unwrap();
        let n = p.n() as f64;
        let floor = n.powi(1 - k as i32);
        let m = moment(&p, k);
        prop_assert!(m >= floor * (1.0 - 1e-12));
        if k >= 2 && !p.is_uniform() {
            prop_assert!(m > floor * (1.0 + 1e-12));
        }
    }

    #[test]
    fn relabelling_inputs_preserves_the_distribution(c in counts(1..20), seed in any::<u64>()) {
        let p = Distribution::from_counts(c).unwrap();
        let mut r = rng::from_seed(seed);
        let o = make_oracle(&p, p.denom() * 2, &mut r).unwrap();
        prop_assert_eq!(o.distribution(), p.clone());
        let sigma = random_permutation(o.table().len(), &mut r);
        prop_assert_eq!(o.compose(&sigma).unwrap().distribution(), p);
    }

    #[test]
    fn oracle_files_round_trip(n in 1usize..30, table in prop::collection::vec(0u32..1000, 1..60)) {
        let table: Vec<u32> = table.into_iter().map(|v| v % n as u32).collect();
        let o = OracleTable::new(n, table).unwrap();
        let mut buf = Vec::new();
        io::write_oracle(&o, &mut buf).unwrap();
        prop_assert_eq!(io::read_oracle(buf.as_slice()).unwrap(), o);
    }

    #[test]
    fn collision_files_round_trip(half in 1usize..20, two in any::<bool>(), seed in any::<u64>()) {
        let mut r = rng::from_seed(seed);
        let h = if two {
            CollisionFunction::random_two_to_one(2 * half, &mut r).unwrap()
        } else {
            CollisionFunction::random_one_to_one(2 * half, &mut r).unwrap()
        };
        prop_assert_eq!(CollisionFunction::parse(&h.to_text()).unwrap(), h);
    }

    #[test]
    fn relative_difference_error_propagates_linearly(
        p in 1e-6f64..1.0,
        q in 1e-6f64..1.0,
        delta in 0.0f64..0.2,
        a in -1.0f64..1.0,
        b in -1.0f64..1.0,
    ) {
        let s = p + q;
        let pt = p + a * delta * s;
        let qt = q + b * delta * s;
        prop_assume!(pt > 0.0 && qt > 0.0);
        let err = (relative_difference(p, q) - relative_difference(pt, qt)).abs();
        prop_assert!(err <= 5.0 * delta + 1e-12, "err {} > 5δ = {}", err, 5.0 * delta);
    }

    #[test]
    fn fingerprint_weights_sum_to_sample_size(samples in prop::collection::vec(0u32..50, 0..200)) {
        let f = fingerprint_of(&samples);
        prop_assert_eq!(f.iter().map(|(r, c)| r * c).sum::<u64>(), samples.len() as u64);
        prop_assert_eq!(f.sample_size(), samples.len() as u64);
    }

    #[test]
    fn est_prob_charges_exactly_m_and_reports_grid_values(
        c in counts(1..12),
        m in 1u64..500,
        seed in any::<u64>(),
        mask in any::<u16>(),
    ) {
        let p = Distribution::from_counts(c).unwrap();
        let mut r = rng::from_seed(seed);
        let o = make_oracle(&p, p.denom(), &mut r).unwrap();
        let target: Vec<u32> = (0..p.n() as u32).filter(|i| mask >> i & 1 == 1).collect();
        let mut ledger = QueryLedger::new();
        let e = est_prob(&o, &target, m, &mut r, &mut ledger).unwrap();
        prop_assert_eq!(ledger.quantum_applications(), m);
        prop_assert_eq!(ledger.classical_samples(), 0);
        prop_assert!(e.raw_outcome < m);
        prop_assert_eq!(e.estimate, estimate_for_outcome(e.raw_outcome, m));
    }

    #[test]
    fn est_dist_terms_lie_in_unit_interval(
        a in counts(2..10),
        seed in any::<u64>(),
    ) {
        let n = a.len();
        let p = Distribution::from_counts(a).unwrap();
        let q = generators::uniform(n).unwrap().p;
        let mut r = rng::from_seed(seed);
        let op = make_oracle(&p, p.denom(), &mut r).unwrap();
        let oq = make_oracle(&q, q.denom(), &mut r).unwrap();
        let params = StatDiffParams { n: 20, m_inner: 16, ..StatDiffParams::practical(n, 0.5, 0.5).unwrap() };
        let rep = est_dist(&op, &oq, &params, &mut r).unwrap();
        prop_assert!((0.0..=1.0).contains(&rep.estimate));
        prop_assert!(rep.terms.iter().all(|x| (0.0..=1.0).contains(x)));
        prop_assert_eq!(rep.total_queries(), 20 + 2 * 20 * 16);
    }

    #[test]
    fn parity_formula_matches_direct_distance(half in 1usize..64, seed in any::<u64>()) {
        let n = 2 * half;
        let mut r = rng::from_seed(seed);
        let h = CollisionFunction::random_two_to_one(n, &mut r).unwrap();
        let sigma = random_permutation(n, &mut r);
        let (op, oq) = build_collision_oracles(&h, &sigma).unwrap();
        prop_assert_eq!(
            matching_parity_distance(&h, &sigma).unwrap(),
            l1_distance_exact(&op.distribution(), &oq.distribution()).unwrap()
        );
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn outcome_law_matches_dense_simulation(
        s in 1u64..=64,
        m in 1u64..=32,
        seed in any::<u64>(),
        density in 0.0f64..1.0,
    ) {
        let mut r = rng::from_seed(seed);
        let n = s.min(16) as usize;
        let table: Vec<u32> = (0..s).map(|_| rand::Rng::random_range(&mut r, 0..n as u32)).collect();
        let o = OracleTable::new(n, table).unwrap();
        let target: Vec<u32> = (0..n as u32).filter(|_| rand::Rng::random_bool(&mut r, density)).collect();
        let a = o.preimage_count(&target) as f64 / s as f64;
        let exact = unitary_reference_pmf(&o, &target, m, ReferenceCaps::default()).unwrap();
        let law = ae_outcome_pmf(a, m);
        let tv: f64 = exact.iter().zip(&law).map(|(x, y)| (x - y).abs()).sum::<f64>() / 2.0;
        prop_assert!(tv < 1e-9, "S={} m={} a={} tv={}", s, m, a, tv);
    }
}

#[test]
fn corollary_bound_does_not_grow_with_a() {
    let delta = Ratio::new(1, 10_000);
    let mut last = None;
    for a in 5..=16 {
        let rep = corollary_report(1_000_000, a, delta).unwrap();
        if let Some((chain, series)) = last {
            assert!(rep.chain_bound <= chain);
            assert!(rep.series_bound <= series + 1e-15);
        }
        last = Some((rep.chain_bound, rep.series_bound));
    }
}
