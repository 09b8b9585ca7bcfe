//! Acceptance suite. Prints one PASS/FAIL line per criterion and exits
//! nonzero if any criterion fails or exceeds its time limit.

mod common;

use std::f64::consts::PI;
use std::fs;
use std::process::Command;
use std::time::{Duration, Instant};

use common::{anchors_plus_random, instance, rel_close, rng, rows, Oracle};
use lipext::analysis::{self, GrowthConfig, SampleRule};
use lipext::cli_io::{emit_instance, Instance, Mode};
use lipext::gauss::{max_square_mc, Dependence};
use lipext::jl_ext::{self, AnchorSet};
use lipext::matrix::euclidean;
use lipext::metric::{euclidean_metric, QuerySet};
use lipext::scalar_ext::{lip_const, ScalarExtension};
use rand::seq::SliceRandom;
use rand::Rng;

type Check = fn() -> Result<String, String>;

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn err<E: std::fmt::Display>(e: E) -> String {
    e.to_string()
}

/// The 50 instances shared by criteria 1 and 2: n ≤ 64, p ≤ 16, m = 64p.
fn exactness_instances() -> Vec<(u64, AnchorSet, usize)> {
    let mut r = rng(1001);
    (0..50)
        .map(|i| {
            let n = r.random_range(1..=64);
            let p = r.random_range(1..=16);
            let dim = r.random_range(1..=5);
            let seed = 10_000 + i;
            (seed, instance(seed, n, dim, p), 64 * p)
        })
        .collect()
}

fn ac1_extension_exactness() -> Result<String, String> {
    let mut worst = 0.0_f64;
    for (seed, anchors, m) in exactness_instances() {
        let op = jl_ext::build(&anchors, seed, m).map_err(err)?;
        let res = jl_ext::exactness_check(&op, &anchors).map_err(err)?;
        ensure(res <= 1e-8, || {
            format!("seed {seed} (n={}, p={}): residual {res:e}", anchors.n(), anchors.p())
        })?;
        worst = worst.max(res);
    }
    Ok(format!("50 instances, max anchor residual {worst:.3e} <= 1e-8"))
}

fn ac2_certified_dominance() -> Result<String, String> {
    let mut r = rng(2002);
    let mut worst_ratio = 0.0_f64;
    for (seed, anchors, m) in exactness_instances() {
        let op = jl_ext::build(&anchors, seed, m).map_err(err)?;
        let bound = jl_ext::certificate(&op).bound;
        let pts = anchors_plus_random(&anchors, &mut r, 60);
        let qs = QuerySet::euclidean(pts.clone());
        let fx = jl_ext::evaluate(&op, &anchors, &qs).map_err(err)?;
        for _ in 0..1000 {
            let i = r.random_range(0..pts.rows());
            let mut j = r.random_range(0..pts.rows() - 1);
            if j >= i {
                j += 1;
            }
            let d = euclidean(pts.row(i), pts.row(j));
            let df = euclidean(fx.row(i), fx.row(j));
            ensure(df <= bound * d * (1.0 + 1e-9), || {
                format!("seed {seed}: ‖ΔF‖ = {df:e} > {bound:e} · {d:e}")
            })?;
            if bound > 0.0 {
                worst_ratio = worst_ratio.max(df / (bound * d));
            }
        }
    }
    Ok(format!(
        "50 instances × 1000 pairs, max empirical/certified = {worst_ratio:.4}"
    ))
}

fn ac3_max_square() -> Result<String, String> {
    let mut lines = Vec::new();
    for &m in &[2usize, 10, 100, 1000] {
        let deps = [
            Dependence::Independent,
            Dependence::random_pair_differences(42, m, 4).map_err(err)?,
        ];
        for dep in &deps {
            let rep = max_square_mc(42, m, 100_000, dep).map_err(err)?;
            let limit = 2.0 * (m as f64).ln() + 4.0 + 3.0 * rep.std_error;
            ensure(rep.estimate <= limit, || {
                format!("m={m} {}: estimate {} > {limit}", rep.dependence, rep.estimate)
            })?;
            lines.push(format!(
                "m={m}/{}: {:.4}±{:.4} <= {:.4}",
                &rep.dependence[..3],
                rep.estimate,
                rep.std_error,
                rep.bound
            ));
            if m == 2 && matches!(dep, Dependence::Independent) {
                let target = 1.0 + 2.0 / PI;
                ensure((rep.estimate - target).abs() <= 3.0 * rep.std_error, || {
                    format!(
                        "m=2 independent: {} not within 3·SE ({}) of 1+2/π = {target}",
                        rep.estimate, rep.std_error
                    )
                })?;
                lines.push(format!("m=2 vs 1+2/π: |Δ| = {:.4}", (rep.estimate - target).abs()));
            }
        }
    }
    Ok(lines.join("; "))
}

fn ac4_growth() -> Result<String, String> {
    let cfg = GrowthConfig {
        n_list: vec![16, 64, 256],
        m_rule: SampleRule::PerAnchor(64),
        seeds: vec![42],
        ..GrowthConfig::default()
    };
    let report = analysis::growth_experiment(&cfg).map_err(err)?;
    let mut parts = Vec::new();
    for row in &report.rows {
        ensure((row.lip_f - 1.0).abs() < 1e-12, || format!("n={}: lip_f {}", row.n, row.lip_f))?;
        let limit = 1.15 * (2.0 * ((row.n * (row.n - 1)) as f64).ln() + 4.0).sqrt() / row.s_min;
        ensure(row.bound <= limit, || {
            format!("n={}: bound {} > 1.15·ref/s_min = {limit}", row.n, row.bound)
        })?;
        ensure(row.empirical_lip <= row.bound * (1.0 + 1e-9), || {
            format!("n={}: empirical {} > bound {}", row.n, row.empirical_lip, row.bound)
        })?;
        parts.push(format!("n={}: bound {:.4} (limit {:.4})", row.n, row.bound, limit));
    }
    let b16 = report.rows[0].bound;
    let b256 = report.rows[2].bound;
    let ratio = b256 / b16;
    ensure(ratio <= 2.0, || format!("bound(256)/bound(16) = {ratio} > 2"))?;
    parts.push(format!("ratio(256/16) = {ratio:.4} <= 2"));
    Ok(parts.join("; "))
}

fn ac5_oracle_equivalence() -> Result<String, String> {
    let mut r = rng(5005);
    let mut worst = 0.0_f64;
    for i in 0..200u64 {
        let n = r.random_range(1..=16);
        let p = r.random_range(1..=16);
        let m = r.random_range(p..=16);
        let dim = r.random_range(1..=4);
        let anchors = instance(50_000 + i, n, dim, p);
        let op = jl_ext::build(&anchors, i, m).map_err(err)?;
        let oracle = Oracle::build(
            &rows(anchors.metric().distances()),
            &rows(anchors.values()),
            &rows(op.embedding().matrix()),
        );
        let img_scale = op.anchor_images().max_abs();
        for w in 0..m {
            for t in 0..n {
                let (a, b) = (op.anchor_images().get(w, t), oracle.images[w][t]);
                ensure(rel_close(a, b, 1e-10, img_scale), || {
                    format!("instance {i}: V[{w}][{t}] {a} vs {b}")
                })?;
            }
        }
        let lip_scale = oracle.lips.iter().fold(0.0_f64, |a, &b| a.max(b));
        for (w, (&a, &b)) in op.sample_lips().iter().zip(&oracle.lips).enumerate() {
            ensure(rel_close(a, b, 1e-10, lip_scale), || {
                format!("instance {i}: λ[{w}] {a} vs {b}")
            })?;
        }
        ensure(rel_close(op.s_min(), oracle.s_min, 1e-10, 0.0), || {
            format!("instance {i}: s_min {} vs {}", op.s_min(), oracle.s_min)
        })?;
        let cert = jl_ext::certificate(&op);
        ensure(rel_close(cert.rms_sample_lip, oracle.rms_lip(), 1e-10, 0.0), || {
            format!("instance {i}: B {} vs {}", cert.rms_sample_lip, oracle.rms_lip())
        })?;

        let pts = anchors_plus_random(&anchors, &mut r, 5);
        let qs = QuerySet::euclidean(pts.clone());
        let fx = jl_ext::evaluate(&op, &anchors, &qs).map_err(err)?;
        let ac = anchors.metric().coords().unwrap();
        let expected: Vec<Vec<f64>> = (0..pts.rows())
            .map(|k| {
                let d: Vec<f64> = (0..n).map(|t| euclidean(pts.row(k), ac.row(t))).collect();
                oracle.evaluate(&d)
            })
            .collect();
        let scale = expected.iter().flatten().fold(0.0_f64, |a, &b| a.max(b.abs()));
        for (k, e) in expected.iter().enumerate() {
            for (j, &b) in e.iter().enumerate() {
                let a = fx.get(k, j);
                ensure(rel_close(a, b, 1e-10, scale), || {
                    format!("instance {i} (n={n}, p={p}, m={m}): F[{k}][{j}] {a} vs {b}")
                })?;
                if scale > 0.0 {
                    worst = worst.max((a - b).abs() / scale);
                }
            }
        }
    }
    Ok(format!("200 instances with n,p,m <= 16, max relative deviation {worst:.2e}"))
}

fn ac6_mcshane_suite() -> Result<String, String> {
    let mut r = rng(6006);
    let mut pairs_checked = 0usize;
    for i in 0..500 {
        let n = r.random_range(1..=20);
        let dim = r.random_range(1..=4);
        let pts = common::random_points(&mut r, n, dim, 0.0, 1.0);
        let metric = euclidean_metric(pts.clone()).map_err(err)?;
        let values: Vec<f64> = (0..n).map(|_| r.random_range(-3.0..3.0)).collect();
        let base = lip_const(&values, &metric);
        let lip = if i % 2 == 0 { base } else { base * r.random_range(1.0..2.0) + 0.1 };
        let ext = ScalarExtension::with_lip(values.clone(), lip, &metric).map_err(err)?;

        let queries = common::random_points(&mut r, 20, dim, -0.5, 1.5);
        let mut all = pts.to_rows();
        all.extend(queries.to_rows());
        let dists = |x: &[f64]| -> Vec<f64> { (0..n).map(|t| euclidean(x, pts.row(t))).collect() };
        let upper: Vec<f64> = all.iter().map(|x| ext.mcshane_min(&dists(x)).unwrap()).collect();
        let lower: Vec<f64> = all.iter().map(|x| ext.mcshane_max(&dists(x)).unwrap()).collect();
        let diam = all
            .iter()
            .flat_map(|a| all.iter().map(move |b| euclidean(a, b)))
            .fold(0.0_f64, f64::max);
        let scale = values.iter().fold(0.0_f64, |a, v| a.max(v.abs())) + lip * diam;
        let tol = 1e-12 * scale.max(1.0);

        for t in 0..n {
            ensure(upper[t] == values[t] && lower[t] == values[t], || {
                format!("instance {i}: anchor {t} gives {} / {} vs {}", upper[t], lower[t], values[t])
            })?;
        }
        for k in 0..all.len() {
            ensure(lower[k] <= upper[k] + tol, || {
                format!("instance {i}: sandwich fails at {k}: {} > {}", lower[k], upper[k])
            })?;
        }
        for _ in 0..20 {
            let a = r.random_range(0..all.len());
            let b = r.random_range(0..all.len());
            let d = euclidean(&all[a], &all[b]);
            for (form, vals) in [("min", &upper), ("max", &lower)] {
                ensure((vals[a] - vals[b]).abs() <= lip * d + tol, || {
                    format!("instance {i}: {form}-form Lipschitz fails on ({a},{b})")
                })?;
            }
            pairs_checked += 1;
        }
    }
    Ok(format!(
        "500 instances: anchors exact, sandwich holds, {pairs_checked} Lipschitz pairs"
    ))
}

fn ac7_determinism() -> Result<String, String> {
    let dir = tempfile::tempdir().map_err(err)?;
    let anchors = instance(77, 24, 3, 5);
    let mut r = rng(7007);
    let inst = Instance {
        mode: Mode::Euclidean,
        queries: QuerySet::euclidean(common::random_points(&mut r, 30, 3, -0.5, 1.5)),
        anchors,
        seed: Some(7),
        samples: Some(512),
    };
    let input = dir.path().join("instance.json");
    fs::write(&input, emit_instance(&inst)).map_err(err)?;
    let mut outputs = Vec::new();
    for threads in ["1", "8"] {
        for run in 0..2 {
            let out = dir.path().join(format!("result-{threads}-{run}.json"));
            let status = Command::new(env!("CARGO_BIN_EXE_lipext"))
                .env("LIPEXT_THREADS", threads)
                .args(["extend", "--baseline", "--input"])
                .arg(&input)
                .arg("--output")
                .arg(&out)
                .status()
                .map_err(err)?;
            ensure(status.success(), || format!("extend exited with {status}"))?;
            outputs.push(fs::read(&out).map_err(err)?);
        }
    }
    ensure(outputs.windows(2).all(|w| w[0] == w[1]), || {
        "result files differ between runs".to_string()
    })?;
    Ok(format!(
        "4 runs (LIPEXT_THREADS=1,8 × 2) byte-identical, {} bytes",
        outputs[0].len()
    ))
}

fn ac8_invariance() -> Result<String, String> {
    let mut r = rng(8008);
    let (mut hom, mut tr, mut perm_dev) = (0.0_f64, 0.0_f64, 0.0_f64);
    for i in 0..50u64 {
        let n = r.random_range(2..=32);
        let p = r.random_range(1..=8);
        let dim = r.random_range(1..=4);
        let m = (64 * p).max(256);
        let anchors = instance(80_000 + i, n, dim, p);
        let qs = QuerySet::euclidean(common::random_points(&mut r, 20, dim, -0.5, 1.5));
        let op = jl_ext::build(&anchors, i, m).map_err(err)?;
        let fx = jl_ext::evaluate(&op, &anchors, &qs).map_err(err)?;
        let cert = jl_ext::certificate(&op);
        let scale = fx.max_abs();

        // positive homogeneity: exact for powers of two, tight otherwise
        let c2 = 2f64.powi(r.random_range(-3..=3));
        let a2 = anchors.scaled(c2).map_err(err)?;
        let op2 = jl_ext::build(&a2, i, m).map_err(err)?;
        let f2 = jl_ext::evaluate(&op2, &a2, &qs).map_err(err)?;
        ensure(f2 == fx.map(|v| v * c2), || format!("instance {i}: F not scaled exactly by {c2}"))?;
        ensure(jl_ext::certificate(&op2).rms_sample_lip == c2 * cert.rms_sample_lip, || {
            format!("instance {i}: B not scaled exactly by {c2}")
        })?;
        let c = r.random_range(0.1..10.0);
        let ac = anchors.scaled(c).map_err(err)?;
        let opc = jl_ext::build(&ac, i, m).map_err(err)?;
        let fc = jl_ext::evaluate(&opc, &ac, &qs).map_err(err)?;
        for (a, b) in fc.as_slice().iter().zip(fx.as_slice()) {
            let dev = (a - c * b).abs() / (c * scale.max(1e-300));
            hom = hom.max(dev);
            ensure(dev <= 1e-10, || format!("instance {i}: homogeneity deviation {dev:e}"))?;
        }
        let bc = jl_ext::certificate(&opc).rms_sample_lip;
        ensure(rel_close(bc, c * cert.rms_sample_lip, 1e-12, 0.0), || {
            format!("instance {i}: B_c {bc} vs {}", c * cert.rms_sample_lip)
        })?;

        // translation covariance
        let v: Vec<f64> = (0..p).map(|_| r.random_range(-5.0..5.0)).collect();
        let mut shifted = anchors.values().clone();
        for t in 0..n {
            for (x, dv) in shifted.row_mut(t).iter_mut().zip(&v) {
                *x += dv;
            }
        }
        let at = AnchorSet::new(anchors.metric().clone(), shifted).map_err(err)?;
        let opt = jl_ext::build(&at, i, m).map_err(err)?;
        let ft = jl_ext::evaluate(&opt, &at, &qs).map_err(err)?;
        let vnorm = v.iter().map(|x| x * x).sum::<f64>().sqrt();
        for k in 0..qs.len() {
            for j in 0..p {
                let dev = (ft.get(k, j) - fx.get(k, j) - v[j]).abs() / (1.0 + scale + vnorm);
                tr = tr.max(dev);
                ensure(dev <= 1e-9, || format!("instance {i}: translation deviation {dev:e}"))?;
            }
        }

        // anchor permutation
        let mut perm: Vec<usize> = (0..n).collect();
        perm.shuffle(&mut r);
        let ap = anchors.permuted(&perm).map_err(err)?;
        let opp = jl_ext::build(&ap, i, m).map_err(err)?;
        let fp = jl_ext::evaluate(&opp, &ap, &qs).map_err(err)?;
        for (a, b) in fp.as_slice().iter().zip(fx.as_slice()) {
            let dev = (a - b).abs();
            perm_dev = perm_dev.max(dev);
            ensure(dev <= 1e-12 * (1.0 + scale), || format!("instance {i}: permutation deviation {dev:e}"))?;
        }
    }
    Ok(format!(
        "50 instances: homogeneity {hom:.1e}, translation {tr:.1e}, permutation {perm_dev:.1e}"
    ))
}

fn main() {
    let criteria: [(&str, &str, Check, u64); 8] = [
        ("AC1", "extension exactness", ac1_extension_exactness, 10),
        ("AC2", "certified dominance", ac2_certified_dominance, 30),
        ("AC3", "max of squared Gaussians", ac3_max_square, 60),
        ("AC4", "sqrt(log n) growth", ac4_growth, 180),
        ("AC5", "oracle equivalence", ac5_oracle_equivalence, 10),
        ("AC6", "McShane properties", ac6_mcshane_suite, 5),
        ("AC7", "determinism across thread counts", ac7_determinism, 120),
        ("AC8", "invariances", ac8_invariance, 120),
    ];
    let mut failed = 0;
    for (id, name, check, limit) in criteria {
        let start = Instant::now();
        let outcome = check();
        let elapsed = start.elapsed();
        let in_time = elapsed <= Duration::from_secs(limit);
        let (tag, detail) = match (&outcome, in_time) {
            (Ok(d), true) => ("PASS", d.clone()),
            (Ok(d), false) => ("FAIL", format!("{d} [over time limit]")),
            (Err(e), _) => ("FAIL", e.clone()),
        };
        if tag == "FAIL" {
            failed += 1;
        }
        println!(
            "[{tag}] {id} {name}: {detail} ({:.2}s, limit {limit}s)",
            elapsed.as_secs_f64()
        );
    }
    if failed > 0 {
        eprintln!("{failed} acceptance criteria failed");
        std::process::exit(1);
    }
}
