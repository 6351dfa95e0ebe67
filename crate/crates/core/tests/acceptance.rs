//! Acceptance criteria 1-11, one PASS/FAIL line each. Runs without the
//! libtest harness so the table is always printed.

use std::process::Command;
use std::time::Instant;

use gksl_kit::evolution::{cocycle_check, exp_generator, halving_study, propagate, GeneratorSchedule};
use gksl_kit::falsify::{monotone_falsifier, SearchBudget};
use gksl_kit::filtration::{diverging_diagonal_sequence, projective_reconstruction, truncation_study, Filtration};
use gksl_kit::gksl::{
    lindblad_trick_average, lindblad_trick_average_mc, lindblad_trick_prediction, minimal_presentation,
    trace_condition, TraceClass,
};
use gksl_kit::random::{
    random_cp_map, random_density_matrix, random_minimal_presentation, random_superoperator,
    random_tni_presentation, rng_from_seed,
};
use gksl_kit::{
    euler_limit_exp, fixtures, hs_inner, is_cp, jamiolkowski_transform, kraus_assemble, kraus_extract, Error,
    Operator64 as Op, SuperOperator64 as Sop, Tolerance64,
};

type Criterion = (&'static str, fn() -> Outcome);

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: String) -> Outcome {
    Outcome { pass, detail }
}

fn tol() -> Tolerance64 {
    Tolerance64::default()
}

fn vec_of(op: &Op) -> nalgebra::DVector<gksl_kit::C<f64>> {
    op.vec_col()
}

fn choi_vec_omega(psi: &Sop) -> f64 {
    let d = psi.dim_in();
    (psi.choi().matrix() * vec_of(&Op::identity(d))).norm()
}

fn criterion_1() -> Outcome {
    let lam = fixtures::transpose_map::<f64>(2);
    let t = Op::from_real_rows(2, 2, &[0.0, 1.0, -1.0, 0.0]);
    let value = hs_inner(&t, &lam.apply(&t)).unwrap();
    let value_ok = (value.re + 2.0).abs() <= 1e-12 && value.im.abs() <= 1e-12;
    let cp = is_cp(&lam, &tol());
    let eig_ok = !cp.psd && (cp.min_eigenvalue + 1.0).abs() <= 1e-12;
    let search = monotone_falsifier(&lam, SearchBudget { restarts: 10_000, steps: 2 }, 1, &tol());
    let mono_ok = search.witness.is_none();
    outcome(
        value_ok && eig_ok && mono_ok,
        format!(
            "<T,LT> = {:+.3e}{:+.3e}i, cp = {}, choi min eig = {:+.15}, monotone witness after 1e4 restarts: {} (best {:.3e})",
            value.re, value.im, cp.psd, cp.min_eigenvalue, search.witness.is_some(), search.best_value
        ),
    )
}

fn criterion_2() -> Outcome {
    let mut rng = rng_from_seed(2);
    let (mut worst_inv, mut worst_ip) = (0.0f64, 0.0f64);
    for k in 0..100 {
        let d = 2 + k % 3;
        let a = random_superoperator::<f64>(d, d, &mut rng);
        let b = random_superoperator::<f64>(d, d, &mut rng);
        let ja = jamiolkowski_transform(&a).unwrap();
        let jb = jamiolkowski_transform(&b).unwrap();
        let back = jamiolkowski_transform(&ja).unwrap();
        worst_inv = worst_inv.max(back.distance(&a) / a.frobenius_norm());
        let before = a.matrix().dotc(b.matrix());
        let after = ja.matrix().dotc(jb.matrix());
        worst_ip = worst_ip.max((before - after).norm() / (a.frobenius_norm() * b.frobenius_norm()));
    }
    outcome(
        worst_inv <= 1e-12 && worst_ip <= 1e-12,
        format!("max ||J(JL)-L||/||L|| = {worst_inv:.2e}, max inner-product defect = {worst_ip:.2e}"),
    )
}

fn criterion_3() -> Outcome {
    let mut rng = rng_from_seed(3);
    let (mut worst, mut max_excess) = (0.0f64, 0i64);
    for k in 0..100 {
        let d = 2 + k % 2;
        let count = 1 + k % (d * d + 2);
        let lam = random_cp_map::<f64>(d, d, count, &mut rng);
        let fam = kraus_extract(&lam, &tol()).unwrap().family;
        worst = worst.max(kraus_assemble(&fam).distance(&lam) / lam.frobenius_norm());
        max_excess = max_excess.max(fam.len() as i64 - (d * d) as i64);
    }
    outcome(
        worst <= 1e-10 && max_excess <= 0,
        format!("max relative residual = {worst:.2e}, max (Kraus count - d^2) = {max_excess}"),
    )
}

fn criterion_4() -> Outcome {
    let mut rng = rng_from_seed(4);
    let mut worst = f64::INFINITY;
    let mut worst_at = (0, 0.0);
    for k in 0..100 {
        let d = 2 + k % 2;
        let jumps = 1 + k % 4;
        let l = random_minimal_presentation::<f64>(d, jumps, &mut rng).generator();
        for t in [0.01, 0.1, 1.0, 10.0] {
            let m = is_cp(&exp_generator(&l, t), &tol()).min_eigenvalue;
            if m < worst {
                worst = m;
                worst_at = (k, t);
            }
        }
    }
    outcome(
        worst >= -1e-9,
        format!(
            "min Choi eigenvalue of exp(tL) over 100 triples x 4 times = {worst:+.2e} (triple {}, t = {})",
            worst_at.0, worst_at.1
        ),
    )
}

fn criterion_5() -> Outcome {
    let mut rng = rng_from_seed(5);
    let (mut res, mut tr_h, mut omega) = (0.0f64, 0.0f64, 0.0f64);
    for k in 0..100 {
        let d = 2 + k % 3;
        let l = random_minimal_presentation::<f64>(d, 1 + k % 3, &mut rng).generator();
        let p = minimal_presentation(&l, &tol()).unwrap();
        res = res.max(p.generator().distance(&l) / l.frobenius_norm());
        tr_h = tr_h.max(p.h.trace().norm());
        omega = omega.max(choi_vec_omega(&p.psi));
    }
    outcome(
        res <= 1e-10 && tr_h <= 1e-12 && omega <= 1e-10,
        format!("max residual = {res:.2e}, max |Tr H| = {tr_h:.2e}, max ||Choi(Psi) vec(Id)|| = {omega:.2e}"),
    )
}

fn criterion_6() -> Outcome {
    let mut fixtures_tp: Vec<(String, Sop)> = vec![
        ("amplitude damping".into(), fixtures::amplitude_damping_generator(0.7)),
        ("depolarizing".into(), fixtures::depolarizing_generator(3, 0.5)),
        ("dephasing".into(), fixtures::dephasing_generator(3, 1.5)),
        ("commutator".into(), fixtures::commutator_generator(&fixtures::pauli(2))),
    ];
    for seed in 0..4 {
        let p = fixtures::random_tp_presentation::<f64>(2 + seed as usize % 3, 2, seed);
        fixtures_tp.push((format!("random tp {seed}"), p.generator()));
    }
    let mut rng = rng_from_seed(6);
    let mut worst_drift = 0.0f64;
    let mut all_tp = true;
    for (_, l) in &fixtures_tp {
        let p = minimal_presentation(l, &tol()).unwrap();
        all_tp &= trace_condition(&p, &tol()).class == TraceClass::Preserving;
        let d = l.dim_in();
        for _ in 0..3 {
            let rho = random_density_matrix::<f64>(d, &mut rng);
            for t in [0.1, 1.0, 5.0, 10.0] {
                let out = exp_generator(l, t).apply(&rho);
                worst_drift = worst_drift.max((out.trace().re - 1.0).abs().max(out.trace().im.abs()));
            }
        }
    }
    let mut shifted_ok = true;
    let mut shifted_count = 0;
    for (_, l) in &fixtures_tp {
        let p = minimal_presentation(l, &tol()).unwrap();
        let q = p.shifted(0.25);
        shifted_ok &= trace_condition(&q, &tol()).class == TraceClass::NonIncreasing;
        let lq = q.generator();
        let rho = random_density_matrix::<f64>(l.dim_in(), &mut rng);
        let traces: Vec<f64> = [0.0, 0.5, 1.0, 2.0, 4.0]
            .iter()
            .map(|&t| exp_generator(&lq, t).apply(&rho).trace().re)
            .collect();
        shifted_ok &= traces.windows(2).all(|w| w[1] < w[0]);
        shifted_count += 1;
    }
    outcome(
        all_tp && worst_drift <= 1e-9 && shifted_ok,
        format!(
            "{} preserving fixtures classified preserving: {all_tp}, max |Tr - 1| = {worst_drift:.2e}; {shifted_count} shifted generators nonincreasing with strictly decreasing trace: {shifted_ok}",
            fixtures_tp.len()
        ),
    )
}

fn criterion_7() -> Outcome {
    let mut rng = rng_from_seed(7);
    let (mut worst, mut mc_fail, mut worst_z) = (0.0f64, 0, 0.0f64);
    for k in 0..50 {
        let d = 2 + k % 3;
        let p = random_tni_presentation::<f64>(d, 1 + k % 3, k % 2, &mut rng);
        let exact = lindblad_trick_average(&p).unwrap();
        let pred = lindblad_trick_prediction(&p);
        worst = worst.max(exact.distance(&pred) / pred.frobenius_norm().max(1.0));
        let mc = lindblad_trick_average_mc(&p, 10_000, 700 + k as u64).unwrap();
        worst_z = worst_z.max(mc.deviation(&exact) / mc.sigma);
        if !mc.within_sigmas(&exact, 3.0) {
            mc_fail += 1;
        }
    }
    outcome(
        worst <= 1e-10 && mc_fail == 0,
        format!(
            "max closed-form deviation = {worst:.2e}; Monte-Carlo outside 3 sigma: {mc_fail}/50 (max deviation {worst_z:.2} sigma)"
        ),
    )
}

fn criterion_8() -> Outcome {
    let l = fixtures::amplitude_damping_generator::<f64>(1.0);
    let exact = exp_generator(&l, 1.0);
    let mut errs = Vec::new();
    let mut n = 16;
    while n <= 1024 {
        let e = euler_limit_exp(&l, n, &tol()).unwrap();
        errs.push((n, e.map.distance(&exact)));
        n *= 2;
    }
    let decreasing = errs.windows(2).all(|w| w[1].1 < w[0].1);
    let orders: Vec<f64> = errs.windows(2).map(|w| (w[0].1 / w[1].1).log2()).collect();
    let order_ok = orders.iter().all(|o| (o - 1.0).abs() <= 0.3);
    let factor = euler_limit_exp(&l, 16, &tol()).unwrap().factor;
    let factor_cp = is_cp(&factor, &tol()).psd;
    outcome(
        decreasing && order_ok && factor_cp,
        format!(
            "errors {:?}; empirical orders {:?}; factor at n=16 CP: {factor_cp}",
            errs.iter().map(|(n, e)| format!("{n}:{e:.2e}")).collect::<Vec<_>>(),
            orders.iter().map(|o| format!("{o:.3}")).collect::<Vec<_>>()
        ),
    )
}

fn criterion_9() -> Outcome {
    let sch = fixtures::driven_qubit_schedule::<f64>();
    let (rows, _) = halving_study(&sch, 0.0, 1.0, 0.05, 4).unwrap();
    let ratios: Vec<f64> = rows.iter().filter_map(|r| r.ratio).collect();
    let ratio_ok = ratios.len() == 4 && ratios.iter().all(|r| (1.6..=2.4).contains(r));

    let eps = 1.0 / 64.0;
    let p1 = propagate(&sch, 0.5, 1.25, eps).unwrap();
    let p2 = propagate(&sch, 0.0, 0.5, eps).unwrap();
    let p3 = propagate(&sch, 0.0, 1.25, eps).unwrap();
    let cocycle = cocycle_check(&p1, &p2, &p3, &tol()).unwrap();

    let mut const_err = 0.0f64;
    for l in [
        fixtures::amplitude_damping_generator::<f64>(0.8),
        fixtures::random_dcp(3, 2, 9),
        fixtures::depolarizing_generator(2, 1.0),
    ] {
        let c = GeneratorSchedule::constant(l.clone(), 0.0, 2.0).unwrap();
        let prop = propagate(&c, 0.0, 2.0, 0.1).unwrap();
        let semi = exp_generator(&l, 2.0);
        const_err = const_err.max(prop.map.distance(&semi) / semi.frobenius_norm().max(1.0));
    }
    outcome(
        ratio_ok && cocycle.defect <= 1e-10 && const_err <= 1e-12,
        format!(
            "halving ratios {:?}; cocycle defect = {:.2e}; constant-schedule deviation = {const_err:.2e}",
            ratios.iter().map(|r| format!("{r:.3}")).collect::<Vec<_>>(),
            cocycle.defect
        ),
    )
}

fn criterion_10() -> Outcome {
    let big_d = 16;
    let l = fixtures::random_tp_presentation::<f64>(big_d, 3, 10).generator();
    let f = Filtration::standard(big_d, (1..=big_d).collect()).unwrap();
    let mut rng = rng_from_seed(10);
    let rho = random_density_matrix::<f64>(big_d, &mut rng);
    let rows = truncation_study(&l, &f, 1.0, &rho, &tol()).unwrap();
    let e = |n: usize| rows.iter().find(|r| r.n == n).unwrap().error;
    let final_ok = e(big_d) <= 1e-10;
    let coarse_ok = (8..=big_d).all(|n| e(n) <= e(4));
    let all_cp = rows.iter().all(|r| r.truncated_cp);
    let seq = diverging_diagonal_sequence::<f64>(big_d).unwrap();
    let rejected = matches!(projective_reconstruction(&seq, 10.0, &tol()), Err(Error::NormBoundViolated { .. }));
    outcome(
        final_ok && coarse_ok && all_cp && rejected,
        format!(
            "e_4 = {:.3e}, e_8 = {:.3e}, e_12 = {:.3e}, e_16 = {:.2e}; e_n <= e_4 for n >= 8: {coarse_ok}; all truncations CP: {all_cp}; diverging diagonal rejected: {rejected}",
            e(4),
            e(8),
            e(12),
            e(16)
        ),
    )
}

fn run_cli(args: &[&str], seed: &str) -> (i32, Vec<u8>) {
    let out = Command::new(env!("CARGO_BIN_EXE_gksl-kit"))
        .args(args)
        .env("GKSL_KIT_SEED", seed)
        .output()
        .expect("binary runs");
    (out.status.code().unwrap_or(-1), out.stdout)
}

fn criterion_11() -> Outcome {
    let dir = tempfile::tempdir().unwrap();
    let emit = dir.path().join("p.json");
    let emit = emit.to_str().unwrap();
    let cases: Vec<(Vec<&str>, i32)> = vec![
        (vec!["check-cp", "builtin:transpose"], 1),
        (vec!["check-cp", "builtin:transpose?d=3"], 1),
        (vec!["check-cp", "builtin:identity"], 0),
        (vec!["check-cp", "builtin:depolarizing?d=3&p=0.4"], 0),
        (vec!["check-cp", "builtin:dephasing"], 0),
        (vec!["check-cp", "builtin:amplitude-damping?gamma=0.3"], 0),
        (vec!["check-cp", "builtin:random-cp?d=3&kraus=2&seed=4"], 0),
        (vec!["check-cp", "builtin:zero"], 0),
        (vec!["kraus", "builtin:identity"], 0),
        (vec!["kraus", "builtin:dephasing"], 0),
        (vec!["kraus", "builtin:random-cp"], 0),
        (vec!["kraus", "builtin:transpose"], 1),
        (vec!["check-generator", "builtin:amplitude-damping?gamma=0.3"], 0),
        (vec!["check-generator", "builtin:depolarizing?d=3"], 0),
        (vec!["check-generator", "builtin:dephasing"], 0),
        (vec!["check-generator", "builtin:commutator"], 0),
        (vec!["check-generator", "builtin:random-dcp", "--norm-bounds"], 0),
        (vec!["check-generator", "builtin:block-dcp"], 0),
        (vec!["check-generator", "builtin:zero"], 0),
        (vec!["check-generator", "builtin:transpose-minus-identity"], 1),
        (vec!["minimal-form", "builtin:random-dcp?d=4", "--emit", emit], 0),
        (vec!["evolve", "builtin:driven-qubit", "--halvings", "2", "--certificates"], 0),
        (vec!["evolve", "builtin:amplitude-damping", "--rho", "builtin:basis-state?k=1"], 0),
        (vec!["truncate-study", "builtin:block-dcp", "--dims", "2,3,5"], 0),
        (vec!["truncate-study", "builtin:random-dcp?d=6", "--dims", "2,4"], 0),
        (vec!["truncate-study", "builtin:transpose-minus-identity", "--dims", "1"], 1),
        (vec!["check-cp", "builtin:no-such-map"], 2),
        (vec!["check-cp", "builtin:amplitude-damping?gamma=7"], 2),
        (vec!["evolve", "builtin:driven-qubit", "--t0", "2", "--t1", "1"], 2),
        (vec!["truncate-study", "builtin:block-dcp", "--dims", "4,2"], 2),
        (vec!["check-cp", "/nonexistent/file.json"], 2),
    ];
    let mut failures = Vec::new();
    for (args, expected) in &cases {
        let (c1, o1) = run_cli(args, "17");
        let (c2, o2) = run_cli(args, "17");
        if c1 != *expected || c2 != *expected {
            failures.push(format!("{args:?}: exit {c1}/{c2}, expected {expected}"));
        } else if o1 != o2 {
            failures.push(format!("{args:?}: report bytes differ between runs"));
        }
    }
    outcome(
        failures.is_empty(),
        if failures.is_empty() {
            format!("{} fixture commands replayed byte-identically with the expected exit codes", cases.len())
        } else {
            failures.join("; ")
        },
    )
}

fn main() {
    let criteria: Vec<Criterion> = vec![
        ("transpose counterexample", criterion_1),
        ("Jamiolkowski involution and unitarity", criterion_2),
        ("Choi-Kraus round trip", criterion_3),
        ("generation, forward", criterion_4),
        ("generation, reverse", criterion_5),
        ("trace conditions", criterion_6),
        ("Haar-averaged generator identity", criterion_7),
        ("Euler limit", criterion_8),
        ("propagator splicing", criterion_9),
        ("filtration convergence", criterion_10),
        ("CLI replay and exit codes", criterion_11),
    ];
    let start = Instant::now();
    let mut failed = 0;
    for (k, (name, f)) in criteria.iter().enumerate() {
        let t = Instant::now();
        let o = f();
        let status = if o.pass { "PASS" } else { "FAIL" };
        println!(
            "criterion {:>2} [{status}] {name} ({:.2}s): {}",
            k + 1,
            t.elapsed().as_secs_f64(),
            o.detail
        );
        if !o.pass {
            failed += 1;
        }
    }
    println!(
        "acceptance: {}/{} criteria passed in {:.1}s",
        criteria.len() - failed,
        criteria.len(),
        start.elapsed().as_secs_f64()
    );
    if failed > 0 {
        std::process::exit(1);
    }
}
