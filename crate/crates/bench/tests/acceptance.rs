//! Acceptance checks. Each criterion prints one PASS/FAIL line; the process
//! exits non-zero if any criterion fails.

use std::path::Path;
use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crackbench::{run_benchmark_detailed, write_synthetic_dataset, Method, RunConfig, RunOutput};
use crackseg::metrics::{bpm_counts, confusion, scores, BpmConfig, EvalCounts};
use crackseg::qi::{
    density_from_states, eigendecompose_symmetric, symmetric_eigen, DensityKind,
    LatticeHamiltonian, DEFAULT_SIGMA,
};
use crackseg::qseg::{
    anneal, build_grid_graph, build_grid_graph_with, maxcut_qubo, maxcut_to_qubo, AnnealSchedule,
    WeightOffset,
};
use crackseg::{BinaryMask, GrayPatch, SynthConfig};

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: String) -> Outcome {
    Outcome { pass, detail }
}

fn random_patch(rng: &mut ChaCha8Rng, w: usize, h: usize) -> GrayPatch {
    GrayPatch::new(w, h, (0..w * h).map(|_| rng.random::<f64>()).collect()).unwrap()
}

fn random_mask(rng: &mut ChaCha8Rng, w: usize, h: usize, density: f64) -> BinaryMask {
    BinaryMask::new(w, h, (0..w * h).map(|_| rng.random_bool(density)).collect()).unwrap()
}

fn assignments(n: usize) -> impl Iterator<Item = Vec<bool>> {
    (0u64..1 << n).map(move |bits| (0..n).map(|i| bits >> i & 1 == 1).collect())
}

fn oracle_optimality() -> Outcome {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(101);
    let mut hits = 0;
    for k in 0..50u64 {
        let p = random_patch(&mut rng, 4, 4);
        let q = maxcut_to_qubo(&build_grid_graph(&p));
        let best = assignments(16)
            .map(|x| q.energy(&x))
            .fold(f64::INFINITY, f64::min);
        let r = anneal(&q, &AnnealSchedule::for_model(&q, k)).unwrap();
        if (r.energy - best).abs() <= 1e-9 * best.abs().max(1.0) {
            hits += 1;
        }
    }
    let secs = start.elapsed().as_secs_f64();
    outcome(
        hits >= 48 && secs < 60.0,
        format!("{hits}/50 patches at the exhaustive optimum (need >= 48), {secs:.2} s"),
    )
}

fn qubo_cut_equivalence() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(202);
    let mut mismatches = 0;
    let mut checked = 0u64;
    for g in 0..100 {
        let (n, edges) = if g % 2 == 0 {
            let n = rng.random_range(2..=12);
            let mut edges = Vec::new();
            for i in 0..n {
                for j in i + 1..n {
                    if rng.random_bool(0.4) {
                        edges.push((i, j, rng.random_range(-5i32..=5) as f64));
                    }
                }
            }
            (n, edges)
        } else {
            // Lattice graphs with intensities k/4 and a dyadic offset keep
            // every weight exactly representable.
            let (w, h) = [(1, 12), (2, 6), (3, 4), (4, 3), (2, 5), (3, 3)][rng.random_range(0..6)];
            let data = (0..w * h)
                .map(|_| rng.random_range(0..=4) as f64 / 4.0)
                .collect();
            let p = GrayPatch::new(w, h, data).unwrap();
            let offset = WeightOffset::Fixed(rng.random_range(0..=4) as f64 / 16.0);
            let graph = build_grid_graph_with(&p, offset);
            (w * h, graph.edges().to_vec())
        };
        let q = maxcut_qubo(n, &edges).unwrap();
        for x in assignments(n) {
            let cut: f64 = edges.iter().filter(|e| x[e.0] != x[e.1]).map(|e| e.2).sum();
            checked += 1;
            if q.energy(&x) != -cut {
                mismatches += 1;
            }
        }
    }
    outcome(
        mismatches == 0,
        format!("{checked} assignments over 100 graphs, {mismatches} with E(x) != -cut(x)"),
    )
}

fn eigensolver_correctness() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(303);
    let mut worst_res = 0.0f64;
    let mut worst_orth = 0.0f64;
    let mut check = |a: &[f64], n: usize| {
        let es = symmetric_eigen(a, n).unwrap();
        let norm = (0..n)
            .map(|i| a[i * n..(i + 1) * n].iter().map(|v| v.abs()).sum::<f64>())
            .fold(0.0, f64::max);
        worst_res = worst_res.max(es.max_residual(a) / norm.max(1.0));
        worst_orth = worst_orth.max(es.max_orthonormality_error());
    };
    for _ in 0..100 {
        let n = rng.random_range(1..=64);
        let mut a = vec![0.0; n * n];
        for i in 0..n {
            for j in i..n {
                let v = rng.random_range(-1.0..1.0);
                a[i * n + j] = v;
                a[j * n + i] = v;
            }
        }
        check(&a, n);
    }
    for _ in 0..20 {
        let h = LatticeHamiltonian::from_patch(&random_patch(&mut rng, 8, 8), DEFAULT_SIGMA);
        check(&h.to_dense(), 64);
    }
    let c4 = LatticeHamiltonian::from_patch(&GrayPatch::new(2, 2, vec![0.5; 4]).unwrap(), 1.0);
    let es = eigendecompose_symmetric(&c4).unwrap();
    let cycle_err = es
        .eigenvalues()
        .iter()
        .zip([-1.5, 0.5, 0.5, 2.5])
        .map(|(a, b)| (a - b).abs())
        .fold(0.0, f64::max);
    outcome(
        worst_res <= 1e-8 && worst_orth <= 1e-8 && cycle_err <= 1e-10,
        format!(
            "scaled residual {worst_res:.2e}, orthonormality {worst_orth:.2e} (<= 1e-8); \
             4-cycle error {cycle_err:.2e} (<= 1e-10)"
        ),
    )
}

fn completeness() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(404);
    let mut worst_site = 0.0f64;
    let mut worst_trace = 0.0f64;
    let (synth, _) = crackseg::synth_generate(&SynthConfig::default()).unwrap();
    let mut patches: Vec<GrayPatch> = (0..10).map(|_| random_patch(&mut rng, 8, 8)).collect();
    patches.push(synth);
    for p in &patches {
        let h = LatticeHamiltonian::from_patch(p, DEFAULT_SIGMA);
        let es = eigendecompose_symmetric(&h).unwrap();
        let all = density_from_states(&es, p.width(), p.height(), DensityKind::Squared, |_, _| {
            true
        });
        worst_site = all
            .data
            .iter()
            .map(|d| (d - 1.0).abs())
            .fold(worst_site, f64::max);
        let trace: f64 = p.data().iter().sum();
        let sum: f64 = es.eigenvalues().iter().sum();
        worst_trace = worst_trace.max((trace - sum).abs());
    }
    outcome(
        worst_site <= 1e-8 && worst_trace <= 1e-8,
        format!(
            "all-state density error {worst_site:.2e}, trace error {worst_trace:.2e} (<= 1e-8)"
        ),
    )
}

fn qi_invariants() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(505);
    let mut energy_err = 0.0f64;
    let mut monotone = true;
    let mut in_range = true;
    let mut sparsity = true;
    for _ in 0..10 {
        let (w, h) = (rng.random_range(2..=9), rng.random_range(2..=9));
        let p = random_patch(&mut rng, w, h);
        let ham = LatticeHamiltonian::from_patch(&p, DEFAULT_SIGMA);
        sparsity &= ham.couplings().len() == h * (w - 1) + w * (h - 1);
        let es = eigendecompose_symmetric(&ham).unwrap();
        let dense = ham.to_dense();
        let n = w * h;
        let negative: Vec<usize> = (0..n).filter(|&k| es.eigenvalues()[k] < 0.0).collect();
        let lambda_sum: f64 = negative.iter().map(|&k| es.eigenvalues()[k]).sum();
        let projected: f64 = negative
            .iter()
            .map(|&k| {
                let v = es.eigenvector(k);
                (0..n)
                    .map(|i| v[i] * (0..n).map(|j| dense[i * n + j] * v[j]).sum::<f64>())
                    .sum::<f64>()
            })
            .sum();
        energy_err = energy_err.max((lambda_sum - projected).abs());
        let mut prev: Option<Vec<f64>> = None;
        for keep in (0..=negative.len()).rev() {
            let d =
                density_from_states(&es, w, h, DensityKind::Squared, |k, l| l < 0.0 && k < keep);
            in_range &= d.data.iter().all(|&v| (0.0..=1.0 + 1e-12).contains(&v));
            if let Some(prev) = &prev {
                monotone &= d.data.iter().zip(prev).all(|(a, b)| *a <= *b + 1e-15);
            }
            prev = Some(d.data);
        }
    }
    outcome(
        energy_err <= 1e-8 && monotone && in_range && sparsity,
        format!(
            "energy identity error {energy_err:.2e}, density monotone {monotone}, \
             in [0,1] {in_range}, pair count exact {sparsity}"
        ),
    )
}

fn metric_identities() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(606);
    let mut rational_ok = true;
    let mut rounding_ok = true;
    let mut float_gap = 0.0f64;
    for _ in 0..1000 {
        let c = EvalCounts {
            tp: rng.random_range(0..500),
            fp: rng.random_range(0..500),
            fn_: rng.random_range(0..500),
            tn: rng.random_range(0..500),
        };
        let s = scores(&c);
        let (tp, fp, fn_) = (c.tp as u128, c.fp as u128, c.fn_ as u128);
        if tp + fp + fn_ == 0 {
            rational_ok &= s.f1 == 1.0 && s.iou == 1.0;
            continue;
        }
        // IoU = tp/u with u = tp+fp+fn, so 2·IoU/(1+IoU) = 2tp/(u+tp): compare
        // F1 = 2tp/(2tp+fp+fn) as exact fractions by cross-multiplication.
        let u = tp + fp + fn_;
        rational_ok &= 2 * tp * (u + tp) == 2 * tp * (2 * tp + fp + fn_);
        rounding_ok &= s.f1 == (2 * tp) as f64 / (2 * tp + fp + fn_) as f64;
        rounding_ok &= s.iou == tp as f64 / u as f64;
        float_gap = float_gap.max((s.f1 - 2.0 * s.iou / (1.0 + s.iou)).abs());
    }
    let mut partition_ok = true;
    let mut monotone_ok = true;
    for _ in 0..100 {
        let (w, h) = (rng.random_range(4..=24), rng.random_range(4..=24));
        let (dp, dt) = (rng.random_range(0.05..0.5), rng.random_range(0.05..0.5));
        let pred = random_mask(&mut rng, w, h, dp);
        let truth = random_mask(&mut rng, w, h, dt);
        partition_ok &= confusion(&pred, &truth).unwrap().total() == (w * h) as u64;
        let mut prev: Option<(EvalCounts, f64)> = None;
        for r in 0..=3 {
            let c = bpm_counts(&pred, &truth, &BpmConfig { radius: r }).unwrap();
            partition_ok &= c.total() == (w * h) as u64;
            let f1 = scores(&c).f1;
            if let Some((p, pf1)) = prev {
                monotone_ok &= c.tp >= p.tp && c.fp <= p.fp && c.fn_ <= p.fn_ && f1 >= pf1;
            }
            prev = Some((c, f1));
        }
    }
    outcome(
        rational_ok && rounding_ok && float_gap <= 1e-12 && partition_ok && monotone_ok,
        format!(
            "F1 = 2·IoU/(1+IoU) exact as fractions {rational_ok}, scores correctly rounded \
             {rounding_ok}, float gap {float_gap:.1e}; totals partition {partition_ok}; \
             BPM monotone in r {monotone_ok}"
        ),
    )
}

fn bpm_leniency() -> Outcome {
    // A bent one-pixel curve: down column 4, across row 9, down column 11.
    let on_curve = |x: usize, y: usize| {
        (x == 4 && (2..=9).contains(&y))
            || (y == 9 && (4..=11).contains(&x))
            || (x == 11 && (9..=13).contains(&y))
    };
    let truth = BinaryMask::from_fn(16, 16, on_curve);
    let pred = BinaryMask::from_fn(16, 16, |x, y| x >= 1 && on_curve(x - 1, y));
    // Set-arithmetic oracle: every shifted pixel sits at distance 1 from the
    // curve and vice versa, so nothing falls outside a radius-2 band.
    let near = |a: &BinaryMask, x: usize, y: usize| {
        (0..16).any(|v| {
            (0..16).any(|u| {
                a.get(u, v) && (u as i64 - x as i64).pow(2) + (v as i64 - y as i64).pow(2) <= 4
            })
        })
    };
    let oracle_clean = (0..16).all(|y| {
        (0..16).all(|x| {
            (!pred.get(x, y) || near(&truth, x, y)) && (!truth.get(x, y) || near(&pred, x, y))
        })
    });
    let plain = scores(&confusion(&pred, &truth).unwrap()).f1;
    let bpm = scores(&bpm_counts(&pred, &truth, &BpmConfig { radius: 2 }).unwrap()).f1;
    outcome(
        oracle_clean && plain < 1.0 && bpm == 1.0,
        format!("plain F1 {plain:.4} (< 1), BPM F1 at r=2 {bpm:.4} (= 1), oracle band clean {oracle_clean}"),
    )
}

struct EndToEnd {
    first: RunOutput,
    second: RunOutput,
    dirs: (std::path::PathBuf, std::path::PathBuf),
    secs: f64,
    _tmp: tempfile::TempDir,
}

fn end_to_end() -> EndToEnd {
    let tmp = tempfile::tempdir().unwrap();
    let base = SynthConfig {
        size: 32,
        crack_depth: 0.6,
        noise_sigma: 0.05,
        ..SynthConfig::default()
    };
    let manifest = write_synthetic_dataset(tmp.path().join("data"), 30, 1, &base).unwrap();
    let methods = vec![Method::Mgm, Method::Qi, Method::Qseg];
    let run = |name: &str| {
        let cfg = RunConfig::new(&manifest, methods.clone(), tmp.path().join(name));
        let start = Instant::now();
        let out = run_benchmark_detailed(&cfg).unwrap();
        (out, start.elapsed().as_secs_f64())
    };
    let (first, secs) = run("first");
    let (second, _) = run("second");
    EndToEnd {
        first,
        second,
        dirs: (tmp.path().join("first"), tmp.path().join("second")),
        secs,
        _tmp: tmp,
    }
}

fn designed_target(e: &EndToEnd) -> Outcome {
    let mut pass = e.secs < 600.0;
    let mut parts = Vec::new();
    for row in &e.first.rows {
        let ok = row.avg_f1_bpm >= 0.80 && row.avg_f1_bpm >= row.avg_f1;
        pass &= ok;
        parts.push(format!(
            "{} BPM-F1 {:.3} / F1 {:.3}{}",
            row.method,
            row.avg_f1_bpm,
            row.avg_f1,
            if ok { "" } else { " (short)" }
        ));
    }
    outcome(
        pass,
        format!("{}; run {:.1} s (< 600)", parts.join(", "), e.secs),
    )
}

fn median(mut v: Vec<f64>) -> f64 {
    v.sort_by(f64::total_cmp);
    let n = v.len();
    if n % 2 == 1 {
        v[n / 2]
    } else {
        (v[n / 2 - 1] + v[n / 2]) / 2.0
    }
}

fn timing_order(e: &EndToEnd) -> Outcome {
    let med = |label: &str| {
        median(
            e.first
                .records
                .iter()
                .filter(|r| r.method == label)
                .map(|r| r.time_s)
                .collect(),
        )
    };
    let (mgm, qseg, qi) = (med("mgm"), med("qseg-sa"), med("qi"));
    outcome(
        mgm < qseg && qseg < qi,
        format!("median seconds: mgm {mgm:.2e} < qseg {qseg:.2e} < qi {qi:.2e}"),
    )
}

fn same_files(a: &Path, b: &Path) -> (usize, usize) {
    let mut total = 0;
    let mut differ = 0;
    for method in std::fs::read_dir(a).unwrap() {
        let method = method.unwrap().path();
        for f in std::fs::read_dir(&method).unwrap() {
            let f = f.unwrap().path();
            let other = b
                .join(method.file_name().unwrap())
                .join(f.file_name().unwrap());
            total += 1;
            if std::fs::read(&f).ok() != std::fs::read(&other).ok() {
                differ += 1;
            }
        }
    }
    (total, differ)
}

fn determinism(e: &EndToEnd) -> Outcome {
    let (total, differ) = same_files(&e.dirs.0.join("masks"), &e.dirs.1.join("masks"));
    let score_fields = |o: &RunOutput| {
        o.records
            .iter()
            .map(|r| {
                (
                    r.method.clone(),
                    r.patch.clone(),
                    r.plain,
                    r.bpm,
                    r.iou.to_bits(),
                    r.f1.to_bits(),
                    r.iou_bpm.to_bits(),
                    r.f1_bpm.to_bits(),
                )
            })
            .collect::<Vec<_>>()
    };
    let scores_equal = score_fields(&e.first) == score_fields(&e.second);
    outcome(
        total == 90 && differ == 0 && scores_equal,
        format!("{total} masks compared, {differ} differ; score fields identical {scores_equal}"),
    )
}

fn main() {
    let mut results: Vec<(&str, Outcome)> = vec![
        ("C1 oracle optimality", oracle_optimality()),
        ("C2 QUBO/max-cut equivalence", qubo_cut_equivalence()),
        ("C3 eigensolver correctness", eigensolver_correctness()),
        ("C4 completeness and trace", completeness()),
        (
            "   QI energy, density and sparsity invariants",
            qi_invariants(),
        ),
        ("C5 metric identities", metric_identities()),
        ("C6 BPM leniency fixture", bpm_leniency()),
    ];
    let e = end_to_end();
    results.push(("C7 end-to-end designed target", designed_target(&e)));
    results.push(("C8 timing order", timing_order(&e)));
    results.push(("C9 determinism", determinism(&e)));
    for row in &e.first.rows {
        println!(
            "   {:8} F1 {:.3} ± {:.3}  IoU {:.3} ± {:.3}  BPM-F1 {:.3} ± {:.3}  BPM-IoU {:.3} ± {:.3}  time {:.4} s",
            row.method, row.avg_f1, row.std_f1, row.avg_iou, row.std_iou, row.avg_f1_bpm,
            row.std_f1_bpm, row.avg_iou_bpm, row.std_iou_bpm, row.time_mean_s
        );
    }

    let mut failed = 0;
    for (name, o) in &results {
        println!(
            "[{}] {name}: {}",
            if o.pass { "PASS" } else { "FAIL" },
            o.detail
        );
        failed += usize::from(!o.pass);
    }
    println!(
        "{} of {} checks passed",
        results.len() - failed,
        results.len()
    );
    if failed > 0 {
        std::process::exit(1);
    }
}
