//! Acceptance run: one pass/fail line per criterion, nonzero exit on any
//! failure. Every check uses fixed seeds.

use std::fs;
use std::process::ExitCode;
use std::time::Instant;

use num_rational::Ratio;
use rand::Rng;
use rayon::prelude::*;

use qdist::amp_est::{
    ae_outcome_pmf, est_prob, queries_for, unitary_reference_pmf, ReferenceCaps, CALIBRATED_C,
    DEFAULT_GRID,
};
use qdist::dist::{
    generators, l1_distance, l1_distance_exact, make_oracle, random_permutation, OracleTable,
    QueryLedger,
};
use qdist::harness::stats::rate_at_least;
use qdist::harness::{run, run_scaling, Command, ExperimentSpec, ScalingConfig, ScalingTester};
use qdist::lower_bounds::{
    build_collision_oracles, corollary_report, empirical_fingerprint_tv,
    matching_parity_distance, parse_decimal, poisson_goodness_of_fit, valiant_bound,
    CollisionFunction, PoissonizedSampler,
};
use qdist::rng;
use qdist::testers::{
    est_dist, cube_root_sample_count, orthogonality_test, otest, overlap_floor, sample_mass,
    uniformity_test, OrthogonalityParams, StatDiffParams, UniformityParams,
};

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn check(ok: bool, detail: String) -> Outcome {
    if ok {
        Ok(detail)
    } else {
        Err(detail)
    }
}

fn criterion_1() -> Outcome {
    let mut r = rng::from_seed(101);
    let mut worst = 0.0f64;
    let cases = 240;
    for _ in 0..cases {
        let s = r.random_range(1..=64u64);
        let m = r.random_range(1..=32u64);
        let n = r.random_range(1..=s.min(20)) as usize;
        let table: Vec<u32> = (0..s).map(|_| r.random_range(0..n as u32)).collect();
        let o = OracleTable::new(n, table).unwrap();
        let target: Vec<u32> = (0..n as u32).filter(|_| r.random_bool(0.4)).collect();
        let a = o.preimage_count(&target) as f64 / s as f64;
        let exact = unitary_reference_pmf(&o, &target, m, ReferenceCaps::default()).unwrap();
        let law = ae_outcome_pmf(a, m);
        let tv = exact.iter().zip(&law).map(|(x, y)| (x - y).abs()).sum::<f64>() / 2.0;
        worst = worst.max(tv);
    }
    check(worst < 1e-9, format!("{cases} cases, max TV {worst:.2e} (< 1e-9)"))
}

fn criterion_2() -> Outcome {
    let n = 100;
    let u = generators::uniform(n).unwrap();
    let o = make_oracle(&u.p, u.s, &mut rng::from_seed(201)).unwrap();
    let trials = 10_000u64;
    let results: Vec<(f64, f64, f64, u64, bool)> = DEFAULT_GRID
        .par_iter()
        .enumerate()
        .map(|(i, cell)| {
            let target: Vec<u32> = (0..(cell.pa * n as f64).round() as u32).collect();
            let m = queries_for(cell.delta, cell.omega, cell.pa, CALIBRATED_C);
            let mut r = rng::stream(202, "criterion-2", i as u64);
            let mut ledger = QueryLedger::new();
            let hits = (0..trials)
                .filter(|_| {
                    let e = est_prob(&o, &target, m, &mut r, &mut ledger).unwrap();
                    (e.estimate - cell.pa).abs() <= cell.delta
                })
                .count() as u64;
            let pass = rate_at_least(hits, trials, 1.0 - cell.omega, 0.01);
            (cell.pa, cell.delta, cell.omega, hits, pass)
        })
        .collect();
    let failed: Vec<String> = results
        .iter()
        .filter(|x| !x.4)
        .map(|x| format!("(p_A={}, δ={}, ω={}: {}/{trials})", x.0, x.1, x.2, x.3))
        .collect();
    let worst_margin = results
        .iter()
        .map(|x| x.3 as f64 / trials as f64 - (1.0 - x.2))
        .fold(f64::INFINITY, f64::min);

    // Half-support puts zero mass on the upper half of [N].
    let h = generators::half_support(n).unwrap();
    let oh = make_oracle(&h.p, h.s, &mut rng::from_seed(204)).unwrap();
    let zero_target: Vec<u32> = (n as u32 / 2..n as u32).collect();
    let nonzero = (0..1_000_000u64)
        .into_par_iter()
        .filter(|&t| {
            let mut r = rng::stream(203, "criterion-2-zero", t);
            est_prob(&oh, &zero_target, 97, &mut r, &mut QueryLedger::new()).unwrap().estimate != 0.0
        })
        .count();
    check(
        failed.is_empty() && nonzero == 0,
        format!(
            "c = {CALIBRATED_C}; 27 cells × {trials}: {} failing {:?}, min coverage − (1−ω) = {worst_margin:+.4}; p_A=0: {nonzero} nonzero of 10^6",
            failed.len(),
            failed
        ),
    )
}

fn criterion_3() -> Outcome {
    let n = 1000usize;
    let mut r = rng::from_seed(301);
    let u = generators::uniform(n).unwrap();
    let b = generators::biased_pair(n, 0.5).unwrap();
    let ov = generators::overlapping_pair(n, 0.5).unwrap();
    let dj = generators::disjoint_pair(n).unwrap();
    let mut pairs = vec![(
        make_oracle(&u.p, u.s, &mut r).unwrap(),
        make_oracle(&u.p, u.s, &mut r).unwrap(),
    )];
    for g in [&b, &ov, &dj] {
        pairs.push((make_oracle(&g.p, g.s, &mut r).unwrap(), make_oracle(&g.q, g.s, &mut r).unwrap()));
    }
    let params = StatDiffParams::practical(n, 0.1, 0.1).unwrap();
    // Queries are 2·n·m_inner with m_inner = ⌈4√N/ε⌉ ≤ (4/ε + 1)√N.
    let c_bound = 2.0 * params.n as f64 * (4.0 / params.epsilon + 1.0);
    let mut lines = Vec::new();
    let mut ok = true;
    for (i, (op, oq)) in pairs.iter().enumerate() {
        let d = l1_distance(&op.distribution(), &oq.distribution()).unwrap();
        let reps: Vec<_> = (0..200u64)
            .into_par_iter()
            .map(|t| est_dist(op, oq, &params, &mut rng::stream(302, "criterion-3", (i as u64) << 32 | t)).unwrap())
            .collect();
        let good = reps.iter().filter(|x| (x.estimate - d / 2.0).abs() < 0.1).count();
        let max_quantum = reps
            .iter()
            .map(|x| x.ledgers[0].quantum_applications() + x.ledgers[1].quantum_applications())
            .max()
            .unwrap();
        ok &= good as f64 / 200.0 >= 0.9 && max_quantum as f64 <= c_bound * (n as f64).sqrt();
        lines.push(format!("d={d}: {good}/200"));
        if i == 3 {
            lines.push(format!(
                "max quantum queries {max_quantum} = {:.0}·√N, C = {c_bound:.0}",
                max_quantum as f64 / (n as f64).sqrt()
            ));
        }
    }
    check(ok, lines.join(", "))
}

fn rate(o: &OracleTable, params: &UniformityParams, label: &str) -> f64 {
    (0..200u64)
        .into_par_iter()
        .filter(|&t| uniformity_test(o, params, &mut rng::stream(401, label, t)).unwrap().decision.is_reject())
        .count() as f64
        / 200.0
}

fn criterion_4() -> Outcome {
    let n = 100_000;
    let mut r = rng::from_seed(402);
    let u = generators::uniform(n).unwrap();
    let b = generators::biased_pair(n, 0.5).unwrap();
    let ou = make_oracle(&u.p, u.s, &mut r).unwrap();
    let ob = make_oracle(&b.p, b.s, &mut r).unwrap();
    let params = UniformityParams::practical(n, 0.5).unwrap();
    let accept_u = 1.0 - rate(&ou, &params, "uniform");
    let reject_b = rate(&ob, &params, "biased");

    let base = ScalingConfig {
        n_values: vec![1_000, 10_000, 100_000, 1_000_000],
        seed: 403,
        ..ScalingConfig::default()
    };
    let q = run_scaling(&ScalingConfig { tester: ScalingTester::Uniformity, ..base.clone() });
    let c = run_scaling(&ScalingConfig { tester: ScalingTester::BaselineUniformity, ..base });
    let (q, c) = match (q, c) {
        (Ok(q), Ok(c)) => (q, c),
        (q, c) => return Err(format!("scaling failed: {:?} / {:?}", q.err(), c.err())),
    };
    let ok = accept_u >= 2.0 / 3.0
        && reject_b >= 2.0 / 3.0
        && (q.fit.slope - 1.0 / 3.0).abs() <= 0.1
        && (c.fit.slope - 0.5).abs() <= 0.1;
    check(
        ok,
        format!(
            "N=1e5: accept uniform {accept_u:.3}, reject biased {reject_b:.3}; quantum slope {:.3} ± {:.3}, classical slope {:.3} ± {:.3}",
            q.fit.slope, q.fit.slope_se, c.fit.slope, c.fit.slope_se
        ),
    )
}

fn criterion_5() -> Outcome {
    let n = 100_000;
    let eps = 0.5;
    let b = generators::biased_pair(n, eps).unwrap();
    let o = make_oracle(&b.p, b.s, &mut rng::from_seed(501)).unwrap();
    let m = cube_root_sample_count(n, eps);
    let cut = (1.0 + eps * eps / 2.0) * m as f64 / n as f64;
    let trials = 1000u64;
    let hits = (0..trials)
        .into_par_iter()
        .filter(|&t| {
            let mut r = rng::stream(502, "criterion-5", t);
            let s = o.sample_many(m as usize, &mut r, &mut QueryLedger::new());
            sample_mass(&b.p, &s) >= cut
        })
        .count();
    let f = hits as f64 / trials as f64;
    check(f >= 0.7, format!("M={m}: Pr[p_S ≥ (1+ε²/2)M/N] = {f:.3} (≥ 0.7)"))
}

fn criterion_6() -> Outcome {
    let n = 10_000;
    let eps = 0.5;
    let mut r = rng::from_seed(601);
    let d = generators::disjoint_pair(n).unwrap();
    let ov = generators::overlapping_pair(n, eps).unwrap();
    let (dp, dq) = (make_oracle(&d.p, d.s, &mut r).unwrap(), make_oracle(&d.q, d.s, &mut r).unwrap());
    let (op, oq) = (make_oracle(&ov.p, ov.s, &mut r).unwrap(), make_oracle(&ov.q, ov.s, &mut r).unwrap());
    let mut params = OrthogonalityParams::paper(n, eps, CALIBRATED_C).unwrap();
    params.rounds = 1000;
    let false_rejects: usize = (0..100u64)
        .into_par_iter()
        .map(|t| {
            let v = orthogonality_test(&dp, &dq, &params, &mut rng::stream(602, "criterion-6-orth", t)).unwrap();
            v.rounds.iter().filter(|x| x.decision.is_reject()).count()
        })
        .sum();
    let rounds: Vec<_> = (0..500u64)
        .into_par_iter()
        .map(|t| {
            let mut ledgers = [QueryLedger::new(), QueryLedger::new()];
            otest(&op, &oq, &params, 0, &mut rng::stream(603, "criterion-6-overlap", t), &mut ledgers).unwrap()
        })
        .collect();
    let reject = rounds.iter().filter(|x| x.decision.is_reject()).count() as f64 / 500.0;
    let floor = overlap_floor(eps, params.m_samples, n);
    let event = rounds.iter().filter(|x| x.true_value >= floor).count() as f64 / 500.0;
    let big_m = params.m_samples as f64 >= 512.0 / (eps * eps);
    check(
        false_rejects == 0 && reject >= 0.2 && event >= 0.45 && big_m,
        format!(
            "M=K={}: orthogonal rejections {false_rejects}/10^5 rounds; overlapping single-round reject {reject:.3}; Pr[q_A ≥ ε³M/(2¹¹N)] = {event:.3}",
            params.m_samples
        ),
    )
}

fn criterion_7() -> Outcome {
    let n = 1024;
    let trials = 1000u64;
    let limit = Ratio::new(7u128, 4);
    let two = Ratio::from_integer(2u128);
    let rows: Vec<(bool, bool, bool)> = (0..trials)
        .into_par_iter()
        .map(|t| {
            let mut r = rng::stream(701, "criterion-7", t);
            let h = CollisionFunction::random_two_to_one(n, &mut r).unwrap();
            let sigma = random_permutation(n, &mut r);
            let (op, oq) = build_collision_oracles(&h, &sigma).unwrap();
            let exact = l1_distance_exact(&op.distribution(), &oq.distribution()).unwrap();
            let agrees = matching_parity_distance(&h, &sigma).unwrap() == exact;
            let g = CollisionFunction::random_one_to_one(n, &mut r).unwrap();
            let (gp, gq) = build_collision_oracles(&g, &sigma).unwrap();
            let orth = l1_distance_exact(&gp.distribution(), &gq.distribution()).unwrap() == two;
            (exact <= limit, agrees, orth)
        })
        .collect();
    let close = rows.iter().filter(|x| x.0).count();
    let agree = rows.iter().filter(|x| x.1).count();
    let orth = rows.iter().filter(|x| x.2).count();
    check(
        close as f64 / trials as f64 >= 0.5 && agree as u64 == trials && orth as u64 == trials,
        format!("N=2^10: ‖p−q‖₁ ≤ 7/4 in {close}/{trials}; formula agrees {agree}/{trials}; one-to-one at distance 2 {orth}/{trials}"),
    )
}

fn criterion_8() -> Outcome {
    let rep = corollary_report(1_000_000, 5, parse_decimal("1e-4").unwrap()).unwrap();
    let expected = Ratio::new(657i128, 8000);
    let mut uniform_exact = true;
    for n in [10usize, 1000, 1_000_000] {
        let u = generators::uniform(n).unwrap().p;
        for delta in [1e-4, 0.01, 0.3] {
            let m = delta * n as f64 / 2.0;
            uniform_exact &= valiant_bound(&u, m, delta).unwrap() == 40.0 * delta;
        }
    }
    check(
        rep.chain_bound == expected && rep.certified && rep.chain_bound < Ratio::new(1, 12) && uniform_exact,
        format!(
            "chain bound {} = 0.082125 < 1/12, certified {}; valiant_bound(u) == 40δ exactly: {uniform_exact}",
            rep.chain_bound, rep.certified
        ),
    )
}

fn criterion_9() -> Outcome {
    let n = 100;
    let u = generators::uniform(n).unwrap().p;
    let sampler = PoissonizedSampler::new(&u, 200.0).unwrap();
    let mut r = rng::stream(901, "criterion-9", 0);
    let mut obs = Vec::with_capacity(n * 10_000);
    for _ in 0..10_000 {
        obs.extend(sampler.counts(&mut r));
    }
    let gof = poisson_goodness_of_fit(&obs, 2.0).unwrap();
    let rate = 5.0 * (n as f64).sqrt() / 32.0;
    let fd = empirical_fingerprint_tv(&u, &u, rate, 10_000, &mut rng::stream(901, "criterion-9", 1)).unwrap();
    check(
        gof.p_value >= 0.01 && fd.tv < 0.05,
        format!(
            "GOF χ²={:.2} on {} dof, p={:.3} (≥ 0.01); fingerprint TV(p=u) at M={rate} = {:.4} (< 0.05)",
            gof.statistic, gof.dof, gof.p_value, fd.tv
        ),
    )
}

fn criterion_10() -> Outcome {
    let dir = std::env::temp_dir().join(format!("qdist-acceptance-{}", std::process::id()));
    fs::create_dir_all(&dir).map_err(|e| e.to_string())?;
    let mut checked = Vec::new();
    for command in Command::ALL {
        let mut spec = ExperimentSpec::new();
        spec.set("experiment", "command", command.as_str()).unwrap();
        spec.set("experiment", "seed", "1001").unwrap();
        spec.set("experiment", "diagnostics", "on").unwrap();
        let extra: &[&str] = match command {
            Command::EstProb => &["experiment.trials=2000", "instance.n=1000", "instance.target_size=30"],
            Command::EstDist | Command::BaselineStatDiff => &["experiment.trials=50", "instance.n=1000", "instance.generator=overlapping"],
            Command::Uniformity | Command::BaselineUniformity => &["experiment.trials=100", "instance.n=100000", "instance.generator=biased"],
            Command::Orthogonality | Command::BaselineOrthogonality => &["experiment.trials=100", "instance.n=10000", "instance.generator=disjoint"],
            Command::Scaling => &["scaling.tester=uniformity", "scaling.n_values=1e3..1e6", "scaling.trials=50"],
            Command::Calibrate => &["scaling.tester=uniformity", "instance.n=10000", "scaling.trials=50"],
            Command::LbCollision => &["experiment.trials=100", "instance.n=1024"],
            Command::LbFingerprint => &["experiment.trials=1000"],
            Command::Corollary | Command::Instance => &[],
        };
        for e in extra {
            spec.set_dotted(e).unwrap();
        }
        let mut bytes = Vec::new();
        for k in 0..2 {
            let out = run(&spec).map_err(|e| format!("{command}: {e}"))?;
            let s = dir.join(format!("{command}-{k}.csv"));
            let d = dir.join(format!("{command}-{k}-diag.csv"));
            out.write_files(&s, Some(&d)).map_err(|e| e.to_string())?;
            let mut b = fs::read(&s).unwrap();
            if let Ok(extra) = fs::read(&d) {
                b.extend(extra);
            }
            b.extend(out.text.unwrap_or_default().into_bytes());
            bytes.push(b);
        }
        if bytes[0] != bytes[1] {
            let _ = fs::remove_dir_all(&dir);
            return Err(format!("{command}: outputs differ"));
        }
        checked.push(command.as_str());
    }
    let _ = fs::remove_dir_all(&dir);
    check(true, format!("{} commands byte-identical across reruns", checked.len()))
}

fn main() -> ExitCode {
    let criteria: [Criterion; 10] = [
        ("AE oracle equivalence", criterion_1),
        ("EstProb contract", criterion_2),
        ("statistical difference", criterion_3),
        ("uniformity and scaling", criterion_4),
        ("sample-mass surrogate", criterion_5),
        ("orthogonality", criterion_6),
        ("collision reduction", criterion_7),
        ("corollary arithmetic", criterion_8),
        ("fingerprint machinery", criterion_9),
        ("determinism", criterion_10),
    ];
    let mut failures = 0;
    for (i, (name, f)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = f();
        let secs = start.elapsed().as_secs_f64();
        match outcome {
            Ok(detail) => println!("criterion {:>2} PASS  {name}: {detail} [{secs:.1}s]", i + 1),
            Err(detail) => {
                failures += 1;
                println!("criterion {:>2} FAIL  {name}: {detail} [{secs:.1}s]", i + 1)
            }
        }
    }
    println!("acceptance: {} passed, {failures} failed", criteria.len() - failures);
    if failures == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
