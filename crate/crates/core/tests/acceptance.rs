//! Acceptance criteria 1-10. Runs without the libtest harness so that every
//! criterion prints exactly one PASS/FAIL line; exits nonzero on any FAIL.

use std::time::{Duration, Instant};

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use frame_certify::certify::{
    cardinality_precheck, certify_complex, complement_property, estimate_a0, injectivity_sampling_oracle,
    lemma2_iii_check, rank_kernel_check, ray_distance, A0Options, CertifyOptions, Method, Verdict,
};
use frame_certify::constructions::{
    bodmann_hammen, connect_frames, path_eval, r3_example, random_frame, trivial_non_retrievable, AngleVariant,
    BodmannHammenParams,
};
use frame_certify::frame::{frame_bounds, gram_squared, ComplexFrame};
use frame_certify::hmw_lower_bound;
use frame_certify::lift::{apply_j, RealifiedFrame};
use frame_certify::linalg::{complex_gaussian, real_rank, sym_eigenvalues, unit_sphere, CVector};
use frame_certify::stability::{l_matrix_gap_audit, perturb_frame, stability_experiment, stability_radius};

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: impl Into<String>) -> Outcome {
    Outcome {
        pass,
        detail: detail.into(),
    }
}

fn timed(limit: Option<Duration>, f: impl FnOnce() -> Outcome) -> (Outcome, Duration) {
    let start = Instant::now();
    let mut out = f();
    let took = start.elapsed();
    if let Some(limit) = limit {
        if took >= limit {
            out.pass = false;
            out.detail.push_str(&format!("; runtime {took:?} exceeds {limit:?}"));
        }
    }
    (out, took)
}

fn scalar_frame() -> ComplexFrame {
    ComplexFrame::new(1, vec![CVector::from_vec(vec![Complex64::new(1.0, 0.0)])]).unwrap()
}

fn bh(n: usize, variant: AngleVariant) -> ComplexFrame {
    bodmann_hammen(&BodmannHammenParams {
        variant,
        ..BodmannHammenParams::new(n, 1.0)
    })
    .unwrap()
}

fn criterion_1() -> Outcome {
    let expected: [[f64; 6]; 6] = [
        [1., 0., 0., 1., 1., 0.],
        [0., 1., 0., 1., 0., 1.],
        [0., 0., 1., 0., 1., 1.],
        [1., 1., 0., 4., 1., 1.],
        [1., 0., 1., 1., 4., 1.],
        [0., 1., 1., 1., 1., 4.],
    ];
    let g = gram_squared(&r3_example());
    let exact = (0..6).all(|i| (0..6).all(|j| g[(i, j)] == expected[i][j]));
    let det = g.clone().determinant();
    outcome(exact && (det - 8.0).abs() <= 1e-9, format!("entries exact: {exact}, det = {det}"))
}

fn criterion_2() -> Outcome {
    let fr = r3_example();
    let full = complement_property(&fr).unwrap();
    if !full.holds {
        return outcome(false, "complement property fails on the full example");
    }
    for drop in 0..6 {
        let keep: Vec<usize> = (0..6).filter(|&k| k != drop).collect();
        let sub = fr.select(&keep).unwrap();
        let res = complement_property(&sub).unwrap();
        let Some(part) = res.failing_partition.filter(|_| !res.holds) else {
            return outcome(false, format!("subset without f{} passes", drop + 1));
        };
        let side_rank = |flag: bool| {
            let cols: Vec<DVector<f64>> = (0..5)
                .filter(|&k| part[k] == flag)
                .map(|k| sub.vector(k).map(|c| c.re))
                .collect();
            let refs: Vec<&DVector<f64>> = cols.iter().collect();
            real_rank(3, &refs, 1e-9)
        };
        let (flagged, other) = (side_rank(true), side_rank(false));
        if flagged >= 3 && other >= 3 {
            return outcome(false, format!("subset without f{}: witness spans on both sides", drop + 1));
        }
    }
    outcome(true, "holds on 6 vectors; all six 5-subsets fail with a rank-deficient side")
}

fn criterion_3() -> Outcome {
    let fr = scalar_frame();
    let est = estimate_a0(&RealifiedFrame::new(&fr), &A0Options::default());
    let rho = stability_radius(&fr, est.a0).unwrap().rho;
    let expected = 1.0f64.min(1.0 / (4.0 * 5f64.powf(1.5)));
    outcome(
        (est.a0 - 1.0).abs() <= 1e-8 && (rho - expected).abs() <= 1e-12,
        format!("a0 = {:.12}, rho = {rho:.12} (expected {expected:.12})", est.a0),
    )
}

fn criterion_4() -> Outcome {
    let opts = CertifyOptions::default();
    let mut pass = true;
    let mut parts = Vec::new();
    for n in 2..=4 {
        let mut any = false;
        for variant in [AngleVariant::TwoPi, AngleVariant::Verbatim] {
            let fr = bh(n, variant);
            let rep = certify_complex(&fr, &opts);
            any |= fr.m() == 4 * n - 4 && rep.verdict == Verdict::Retrievable && rep.a0_estimate > 1e-6;
            parts.push(format!("n={n} {variant:?}: {} a0={:.3e}", rep.verdict, rep.a0_estimate));
        }
        pass &= any;
    }
    outcome(pass, parts.join("; "))
}

fn criterion_5() -> Outcome {
    let fr = bh(2, AngleVariant::TwoPi);
    let rep = match stability_experiment(&fr, 100, 0.99, 42, &CertifyOptions::default()) {
        Ok(r) => r,
        Err(e) => return outcome(false, e.to_string()),
    };
    let bound = rep.b_prime_bound + 1e-9;
    let b_ok = rep.records.iter().all(|r| r.b_prime <= bound);
    outcome(
        rep.passed() && b_ok && rep.records.len() == 100,
        format!(
            "rho = {:.6e}, failures = {}, max B' = {:.6} <= {:.6}",
            rep.stability.rho,
            rep.failures.len(),
            rep.b_prime_max,
            rep.b_prime_bound
        ),
    )
}

fn criterion_6() -> Outcome {
    let fr = bh(2, AngleVariant::TwoPi);
    let rep = certify_complex(&fr, &CertifyOptions::default());
    let stab = stability_radius(&fr, rep.a0_estimate).unwrap();
    let mut worst_ratio = 0.0f64;
    let mut min_l = f64::INFINITY;
    for p in 0..20u64 {
        let other = perturb_frame(&fr, 0.99 * stab.rho, 1000 + p);
        let audit = l_matrix_gap_audit(&fr, &other, 200, 2000 + p).unwrap();
        if !audit.within_bound() {
            return outcome(false, format!("pair {p}: gap {} > bound {}", audit.max_gap, audit.bound));
        }
        worst_ratio = worst_ratio.max(audit.max_gap / audit.bound);
        min_l = min_l.min(audit.min_l_prime);
    }
    let floor = stab.a1 / 2.0 - 1e-8;
    outcome(
        min_l >= floor,
        format!("max gap/bound = {worst_ratio:.3e}, min lambda_min(L') = {min_l:.6e} >= {floor:.6e}"),
    )
}

fn lemma2_suite(name: &str, fr: &ComplexFrame, a0: f64, seed: u64) -> Result<(), String> {
    let n = fr.n();
    let rf = RealifiedFrame::new(fr);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);

    for _ in 0..1000 {
        let xi = unit_sphere(&mut rng, 2 * n);
        let v = rf.r_matrix(&xi) * apply_j(&xi);
        if v.norm() > 1e-10 {
            return Err(format!("{name}: |R(xi) J xi| = {:e}", v.norm()));
        }
    }
    for _ in 0..1000 {
        let x = complex_gaussian(&mut rng, n);
        let y = complex_gaussian(&mut rng, n);
        if !lemma2_iii_check(fr, a0, &x, &y) {
            return Err(format!("{name}: magnitude-difference inequality violated"));
        }
    }
    for _ in 0..100 {
        let xi = unit_sphere(&mut rng, 2 * n);
        let jx = apply_j(&xi);
        let proj = DMatrix::identity(2 * n, 2 * n) - &jx * jx.transpose() / jx.norm_squared();
        let diff = rf.r_matrix(&xi) - proj * (a0 * xi.norm_squared());
        let low = sym_eigenvalues(&diff)[0];
        if low < -1e-8 {
            return Err(format!("{name}: projection inequality off by {low:e}"));
        }
    }
    for _ in 0..100 {
        let xi = unit_sphere(&mut rng, 2 * n);
        let k = rank_kernel_check(&rf, &xi, 1e-9).unwrap();
        if k.rank != 2 * n - 1 || !k.kernel_is_span_jxi {
            return Err(format!("{name}: rank {} at a random xi", k.rank));
        }
    }
    Ok(())
}

fn criterion_7() -> Outcome {
    let opts = CertifyOptions::default();
    let mut frames: Vec<(String, ComplexFrame)> = vec![("scalar n=1".into(), scalar_frame())];
    for n in 2..=4 {
        for variant in [AngleVariant::TwoPi, AngleVariant::Verbatim] {
            frames.push((format!("BH n={n} {variant:?}"), bh(n, variant)));
        }
    }
    frames.push(("random n=2 m=6".into(), random_frame(2, 6, 7).unwrap()));
    frames.push(("random n=3 m=10".into(), random_frame(3, 10, 7).unwrap()));

    let mut tested = 0;
    for (i, (name, fr)) in frames.iter().enumerate() {
        let rep = certify_complex(fr, &opts);
        if rep.verdict != Verdict::Retrievable {
            continue;
        }
        tested += 1;
        if let Err(msg) = lemma2_suite(name, fr, rep.a0_estimate, 500 + i as u64) {
            return outcome(false, msg);
        }
    }
    outcome(tested >= 4, format!("{tested} retrievable reference frames pass (a)-(d)"))
}

fn criterion_8() -> Outcome {
    let opts = CertifyOptions::default();
    let mut parts = Vec::new();
    for n in 2..=3 {
        let fr = trivial_non_retrievable(n, 4 * n - 4).unwrap();
        let rep = certify_complex(&fr, &opts);
        let Some(xi) = rep.kernel_excess.clone() else {
            return outcome(false, format!("n={n}: no kernel-excess witness ({})", rep.verdict));
        };
        let rf = RealifiedFrame::new(&fr);
        let dim = rank_kernel_check(&rf, &DVector::from_vec(xi), 1e-9).unwrap().kernel_dim();
        if rep.verdict != Verdict::NotRetrievable || dim < 2 {
            return outcome(false, format!("n={n}: {} with kernel dim {dim}", rep.verdict));
        }
        let Some(ce) = injectivity_sampling_oracle(&fr, 20, 9) else {
            return outcome(false, format!("n={n}: oracle found no pair"));
        };
        let mx = fr.squared_magnitudes(&ce.x);
        let my = fr.squared_magnitudes(&ce.y);
        let residual = mx.iter().zip(&my).map(|(a, b)| (a - b).powi(2)).sum::<f64>().sqrt();
        let dist = ray_distance(&ce.x, &ce.y);
        if residual > 1e-8 || dist < 1e-4 {
            return outcome(false, format!("n={n}: counterexample residual {residual:e}, distance {dist:e}"));
        }
        parts.push(format!("n={n}: a0={:.1e}, ker dim {dim}, pair dist {dist:.3}", rep.a0_estimate));
    }
    outcome(true, parts.join("; "))
}

fn criterion_9() -> Outcome {
    let hand = [(2, 4), (3, 8), (4, 10)];
    let hand_ok = hand.iter().all(|&(n, v)| hmw_lower_bound(n).hmw_lower == v);
    let cap_ok = (1..=64).all(|n| hmw_lower_bound(n).hmw_lower <= 4 * n - 2);
    let opts = CertifyOptions::default();
    let short = [(2, 3), (3, 5), (4, 7)].iter().all(|&(n, m)| {
        let fr = random_frame(n, m, 1).unwrap();
        let rep = certify_complex(&fr, &opts);
        cardinality_precheck(n, m) && rep.verdict == Verdict::NotRetrievable && rep.method == Method::Cardinality
    });
    outcome(
        hand_ok && cap_ok && short,
        format!("hand values {hand_ok}, <= 4n-2 for n <= 64 {cap_ok}, m < 2n short-circuit {short}"),
    )
}

fn criterion_10() -> Outcome {
    let mut min_lower = f64::INFINITY;
    for (n, m) in [(2, 4), (3, 6)] {
        for p in 0..20u64 {
            let f1 = random_frame(n, m, 3000 + 2 * p).unwrap();
            let f2 = random_frame(n, m, 3001 + 2 * p).unwrap();
            let path = match connect_frames(&f1, &f2) {
                Ok(p) => p,
                Err(e) => return outcome(false, e.to_string()),
            };
            if path_eval(&path, -1.0).unwrap() != f1 || path_eval(&path, 1.0).unwrap() != f2 {
                return outcome(false, format!("n={n} pair {p}: endpoints not recovered exactly"));
            }
            for s in 0..41 {
                let t = -1.0 + s as f64 / 20.0;
                let lower = frame_bounds(&path_eval(&path, t).unwrap()).lower;
                min_lower = min_lower.min(lower);
            }
        }
    }
    outcome(min_lower > 1e-8, format!("40 paths, min lower frame bound on grid = {min_lower:.3e}"))
}

fn main() {
    let criteria: [(&str, Option<Duration>, fn() -> Outcome); 10] = [
        ("gram-squared exactness", Some(Duration::from_millis(1)), criterion_1),
        ("real-case complement verdicts", Some(Duration::from_millis(10)), criterion_2),
        ("closed-form n=1", Some(Duration::from_secs(1)), criterion_3),
        ("Bodmann-Hammen certification", Some(Duration::from_secs(60)), criterion_4),
        ("perturbation validation", Some(Duration::from_secs(120)), criterion_5),
        ("L-matrix gap audit", None, criterion_6),
        ("retrievability property suite", None, criterion_7),
        ("non-retrievable detection", Some(Duration::from_secs(30)), criterion_8),
        ("cardinality formulas", None, criterion_9),
        ("frame path", Some(Duration::from_secs(5)), criterion_10),
    ];
    let mut failed = 0;
    for (i, (name, limit, run)) in criteria.iter().enumerate() {
        let (out, took) = timed(*limit, run);
        let tag = if out.pass { "PASS" } else { "FAIL" };
        println!("criterion {:>2} {tag} [{name}] ({took:.2?}) {}", i + 1, out.detail);
        failed += usize::from(!out.pass);
    }
    println!("acceptance: {} passed, {failed} failed", criteria.len() - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
