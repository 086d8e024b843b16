//! Acceptance run: one PASS/FAIL line per criterion, non-zero exit if any fails.

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::process::ExitCode;
use std::time::Instant;

use rotkit::bench::{
    self, batch_efficiency, double_cover_check, double_cover_check_with, fixtures, gimbal_susceptibility,
    robustness_suite, stability_suite, summarize_interpolation, time_composition, BenchConfig,
    BenchReport,
};
use rotkit::convert::quat_to_matrix;
use rotkit::interp::InterpMethod;
use rotkit::probdist::{bingham_log_density_unnorm, fisher_log_density_unnorm, fisher_mode, Bingham, MatrixFisher};
use rotkit::registration::{horn_align, icp, PointSet, RigidTransform};
use rotkit::repr::Registry;
use rotkit::so3::{geodesic_distance, sample_uniform};
use rotkit::{Mat3, Mat4, Rng, UnitQuaternion, Vec3, Vec4};

type Verdict = Result<String, String>;

fn require(ok: bool, detail: String) -> Verdict {
    if ok {
        Ok(detail)
    } else {
        Err(detail)
    }
}

fn cfg() -> BenchConfig {
    BenchConfig::with_seed(42)
}

const NON_PROBABILISTIC: [&str; 6] = ["euler", "axis-angle", "quaternion", "matrix", "exp-map", "6d"];

fn round_trip_stability() -> Verdict {
    let c = cfg();
    let start = Instant::now();
    let mut worst = 0.0f64;
    let mut parts = Vec::new();
    for tag in NON_PROBABILISTIC {
        let s = stability_suite(tag, &c).map_err(|e| e.to_string())?;
        if s.samples != 1000 || s.failures != 0 {
            return Err(format!("{tag}: {} samples, {} failures", s.samples, s.failures));
        }
        worst = worst.max(s.eps_stab);
        parts.push(format!("{tag}={:.1e}", s.eps_stab));
    }
    let secs = start.elapsed().as_secs_f64();
    require(worst < 1e-10 && secs < 5.0, format!("{} in {secs:.2}s", parts.join(" ")))
}

fn double_cover() -> Verdict {
    let c = BenchConfig { m_singularity: 5000, ..cfg() };
    let clean = double_cover_check(&c).map_err(|e| e.to_string())?;
    let mutated = double_cover_check_with(&c, &mut Rng::new(c.seed), fixtures::sign_sensitive_quat_to_matrix);
    require(clean == 0.0 && mutated == 1.0, format!("S_double={clean}, mutated={mutated}"))
}

fn gimbal_lock() -> Verdict {
    let c = BenchConfig { perturbation_norm: 1e-6, tau: 1e-3, ..cfg() };
    let e = gimbal_susceptibility("euler", &c).map_err(|e| e.to_string())?;
    let q = gimbal_susceptibility("quaternion", &c).map_err(|e| e.to_string())?;
    let m = gimbal_susceptibility("matrix", &c).map_err(|e| e.to_string())?;
    require(e > 0.1 && q < 1e-3 && m < 1e-3, format!("euler={e:.4} quaternion={q:e} matrix={m:e}"))
}

fn geodesic_interpolation() -> Verdict {
    let c = cfg();
    let pairs = bench::shared_pairs(&c);
    let s = summarize_interpolation(InterpMethod::Slerp, &pairs, &c).map_err(|e| e.to_string())?;
    let g = summarize_interpolation(InterpMethod::MatrixGeodesic, &pairs, &c).map_err(|e| e.to_string())?;
    let mut gap = 0.0f64;
    for (r1, r2) in &pairs {
        let a = InterpMethod::Slerp.build(r1, r2).map_err(|e| e.to_string())?;
        let b = InterpMethod::MatrixGeodesic.build(r1, r2).map_err(|e| e.to_string())?;
        for k in 0..c.k_path {
            let t = k as f64 / (c.k_path - 1) as f64;
            let (ra, rb) = (a.eval(t).map_err(|e| e.to_string())?, b.eval(t).map_err(|e| e.to_string())?);
            gap = gap.max(geodesic_distance(&ra, &rb));
        }
    }
    require(
        pairs.len() == 100 && s.eps_geo < 1e-6 && g.eps_geo < 1e-6 && s.sigma_deriv < 1e-6 && g.sigma_deriv < 1e-6 && gap < 1e-9,
        format!(
            "slerp eps_geo={:.1e} sigma={:.1e}; matrix-geodesic eps_geo={:.1e} sigma={:.1e}; max point gap={gap:.1e}",
            s.eps_geo, s.sigma_deriv, g.eps_geo, g.sigma_deriv
        ),
    )
}

fn interpolation_ordering() -> Verdict {
    let c = cfg();
    let pairs = bench::shared_pairs(&c);
    let run = |m: InterpMethod| summarize_interpolation(m, &pairs, &c).map_err(|e| e.to_string());
    let slerp = run(InterpMethod::Slerp)?;
    let rv = run(InterpMethod::LinearRotationVector)?;
    let six = run(InterpMethod::LinearSixd)?;
    let geo = slerp.geodesic_length;
    let lengths = six.path_length > rv.path_length && rv.path_length >= geo;
    let sigmas = slerp.sigma_deriv < rv.sigma_deriv && rv.sigma_deriv < six.sigma_deriv && six.sigma_deriv > 0.5;
    require(
        lengths && sigmas,
        format!(
            "L_path sixd={:.4} rotvec={:.4} geodesic={geo:.4} (sixd/geodesic={:.3}); sigma slerp={:.1e} rotvec={:.4} sixd={:.4}",
            six.path_length,
            rv.path_length,
            six.path_length / geo,
            slerp.sigma_deriv,
            rv.sigma_deriv,
            six.sigma_deriv
        ),
    )
}

fn timing_ordering() -> Verdict {
    let c = cfg();
    let mut held = 0;
    let mut last = String::new();
    for run in 1..=3 {
        let mut comp = Vec::new();
        for tag in NON_PROBABILISTIC {
            let t = time_composition(tag, &c).map_err(|e| e.to_string())?.ok_or(format!("{tag} untimed"))?;
            comp.push((tag, t.micros));
        }
        let batch = |tag: &str| -> Result<f64, String> {
            Ok(batch_efficiency(tag, &c).map_err(|e| e.to_string())?.ok_or(format!("{tag} untimed"))?.micros)
        };
        let (qb, mb) = (batch("quaternion")?, batch("matrix")?);
        let get = |tag: &str| comp.iter().find(|(t, _)| *t == tag).unwrap().1;
        let slowest = comp.iter().cloned().fold(("", f64::MIN), |a, b| if b.1 > a.1 { b } else { a });
        let ok = get("quaternion") < get("matrix") && qb < mb && slowest.0 == "6d";
        held += ok as usize;
        last = format!(
            "run {run}: t_comp {}; t_batch quaternion={qb:.4} matrix={mb:.4}; slowest={}",
            comp.iter().map(|(t, v)| format!("{t}={v:.4}")).collect::<Vec<_>>().join(" "),
            slowest.0
        );
    }
    require(held == 3, format!("{held}/3 runs held; {last}"))
}

fn robustness() -> Verdict {
    let c = BenchConfig { n_edge: 200, failure_threshold: 0.1, ..cfg() };
    let mut parts = Vec::new();
    let mut ok = true;
    for tag in ["quaternion", "exp-map"] {
        let r = robustness_suite(tag, &c).map_err(|e| e.to_string())?;
        let max = r.eps_max.unwrap_or(f64::INFINITY);
        ok &= r.cases == 200 && r.f_rate == 0.0 && max < 1e-9;
        parts.push(format!("{tag}: F_rate={} eps_max={max:.1e} over {}", r.f_rate, r.cases));
    }
    require(ok, parts.join("; "))
}

fn random_cloud(rng: &mut Rng, n: usize) -> PointSet {
    PointSet::new((0..n).map(|_| Vec3::new(rng.uniform_range(-1.0, 1.0), rng.uniform_range(-1.0, 1.0), rng.uniform_range(-1.0, 1.0))).collect()).unwrap()
}

fn registration() -> Verdict {
    let mut rng = Rng::new(42);
    let (mut rot_err, mut trans_err, mut resid) = (0.0f64, 0.0f64, 0.0f64);
    for _ in 0..100 {
        let src = random_cloud(&mut rng, 50);
        let g = RigidTransform {
            rotation: quat_to_matrix(&sample_uniform(&mut rng)),
            translation: Vec3::new(rng.uniform_range(-5.0, 5.0), rng.uniform_range(-5.0, 5.0), rng.uniform_range(-5.0, 5.0)),
        };
        let a = horn_align(&src, &src.transformed(&g)).map_err(|e| e.to_string())?;
        rot_err = rot_err.max(geodesic_distance(&a.transform.rotation, &g.rotation));
        trans_err = trans_err.max((a.transform.translation - g.translation).norm());
        resid = resid.max(a.rms);
    }
    let horn_ok = rot_err < 1e-9 && trans_err < 1e-9 && resid < 1e-12;

    let src = random_cloud(&mut rng, 200);
    let axis = rng.unit_vector();
    let (s, c) = (2.5f64.to_radians()).sin_cos();
    let q = UnitQuaternion::new(c, axis.x * s, axis.y * s, axis.z * s).unwrap();
    let g = RigidTransform { rotation: quat_to_matrix(&q), translation: Vec3::new(0.01, -0.02, 0.015) };
    let mut moved = src.transformed(&g).points().to_vec();
    for i in (1..moved.len()).rev() {
        let j = (rng.next_u64() % (i as u64 + 1)) as usize;
        moved.swap(i, j);
    }
    let r = icp(&src, &PointSet::new(moved).unwrap(), 100, 1e-10).map_err(|e| e.to_string())?;
    let icp_err = geodesic_distance(&r.transform.rotation, &g.rotation);
    let monotone = r.rms_history.windows(2).all(|w| w[1] <= w[0]);
    let icp_ok = icp_err < 1e-6 && r.iterations <= 20 && monotone;
    require(
        horn_ok && icp_ok,
        format!(
            "horn rot={rot_err:.1e} trans={trans_err:.1e} rms={resid:.1e}; icp err={icp_err:.1e} in {} iterations, monotone={monotone}",
            r.iterations
        ),
    )
}

fn random_orthogonal4(rng: &mut Rng) -> Mat4 {
    let m = Mat4::from_fn(|_, _| rng.standard_normal());
    m.qr().q()
}

fn probabilistic() -> Verdict {
    let mut rng = Rng::new(42);
    let b = Bingham::new(random_orthogonal4(&mut rng), Vec4::new(0.0, -1.0, -4.0, -20.0)).map_err(|e| e.to_string())?;
    let mut asym = 0usize;
    for _ in 0..10_000 {
        let q = sample_uniform(&mut rng);
        if bingham_log_density_unnorm(&b, &q) != bingham_log_density_unnorm(&b, &q.negate()) {
            asym += 1;
        }
    }

    let mut mode_err = 0.0f64;
    for _ in 0..100 {
        let r0 = quat_to_matrix(&sample_uniform(&mut rng));
        let f = MatrixFisher::new(r0.matrix() * 5.0).map_err(|e| e.to_string())?;
        let m = fisher_mode(&f).map_err(|e| e.to_string())?;
        mode_err = mode_err.max((m.matrix() - r0.matrix()).abs().max());
    }

    let f = MatrixFisher::new(Mat3::from_fn(|_, _| rng.standard_normal() * 3.0)).map_err(|e| e.to_string())?;
    let mode = fisher_mode(&f).map_err(|e| e.to_string())?;
    let peak = fisher_log_density_unnorm(&f, &mode).exp();
    let mut excess = f64::MIN;
    for _ in 0..10_000 {
        let r = quat_to_matrix(&sample_uniform(&mut rng));
        excess = excess.max(fisher_log_density_unnorm(&f, &r).exp() - peak);
    }
    require(
        asym == 0 && mode_err < 1e-12 && excess <= 1e-9,
        format!("antipodal mismatches={asym}; fisher mode err={mode_err:.1e}; best sample minus mode={excess:.1e}"),
    )
}

fn heuristic_table() -> Verdict {
    let expect: [(&str, usize, f64, Option<f64>, Option<f64>); 7] = [
        ("euler", 24, 0.9, Some(0.6), Some(0.3)),
        ("axis-angle", 24, 0.9, Some(0.8), Some(0.7)),
        ("quaternion", 32, 1.0, Some(0.9), Some(0.8)),
        ("matrix", 72, 0.3, Some(0.7), Some(0.6)),
        ("exp-map", 24, 0.9, Some(0.6), Some(0.7)),
        ("6d", 48, 0.7, Some(0.5), Some(0.9)),
        ("fisher", 72, 0.3, None, None),
    ];
    let reg = Registry::builtin();
    let got: Vec<_> = reg
        .iter()
        .map(|r| {
            let h = bench::heuristics_of(r);
            (r.tag(), r.storage_bytes(), h.a_mem, h.h_opt, h.c_ml)
        })
        .collect();
    let case = [(8, 0.5), (24, 0.9), (32, 1.0), (48, 0.7), (72, 0.3), (96, 0.5)]
        .iter()
        .all(|&(b, v)| bench::a_mem(b) == v);
    require(got == expect && case, format!("{got:?}"))
}

fn bench_csv_without_timing(seed: &str) -> Result<String, String> {
    let (mut out, mut err) = (Vec::new(), Vec::new());
    let code = rotkit_cli::run(["rotkit", "bench", "--suite", "all", "--seed", seed], &mut out, &mut err);
    if code != 0 {
        return Err(String::from_utf8_lossy(&err).into_owned());
    }
    let text = String::from_utf8(out).map_err(|e| e.to_string())?;
    let header: Vec<&str> = BenchReport::FIELDS.to_vec();
    let keep: Vec<bool> = header.iter().map(|f| !BenchReport::TIMING_FIELDS.contains(f)).collect();
    Ok(text
        .lines()
        .map(|l| l.split(',').zip(&keep).filter(|(_, k)| **k).map(|(v, _)| v).collect::<Vec<_>>().join(","))
        .collect::<Vec<_>>()
        .join("\n"))
}

fn determinism() -> Verdict {
    let a = bench_csv_without_timing("42")?;
    let b = bench_csv_without_timing("42")?;
    require(a == b && a.lines().count() == 8, format!("{} bytes of non-timing fields, identical={}", a.len(), a == b))
}

fn main() -> ExitCode {
    let criteria: [(&str, fn() -> Verdict); 11] = [
        ("round-trip stability", round_trip_stability),
        ("double cover", double_cover),
        ("gimbal lock", gimbal_lock),
        ("geodesic interpolation", geodesic_interpolation),
        ("interpolation ordering", interpolation_ordering),
        ("timing ordering", timing_ordering),
        ("robustness", robustness),
        ("registration", registration),
        ("probabilistic module", probabilistic),
        ("heuristic table", heuristic_table),
        ("determinism", determinism),
    ];
    let mut failed = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        let verdict = catch_unwind(AssertUnwindSafe(check)).unwrap_or_else(|p| {
            Err(p.downcast_ref::<String>().cloned().or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string())).unwrap_or_default())
        });
        let (tag, detail) = match verdict {
            Ok(d) => ("PASS", d),
            Err(d) => {
                failed += 1;
                ("FAIL", d)
            }
        };
        println!("{tag} {:>2} {name}: {detail}", i + 1);
    }
    println!("{} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
