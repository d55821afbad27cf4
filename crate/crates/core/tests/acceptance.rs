//! Acceptance suite. Each test prints one `criterion N: PASS|FAIL` line;
//! run with `--nocapture` to see them.

use momentlab::builtin::parse_rep;
use momentlab::cli::{run, Command, Format, RunConfig};
use momentlab::moment::sphere_image_sample;
use momentlab::report::{fmt_f64, CheckReport};
use momentlab::suite::{self, SuiteConfig};
use momentlab::UnitaryRep;

const REPS: [&str; 8] = [
    "su2:spin=1/2",
    "su2:spin=1",
    "su2:spin=3/2",
    "su2:spin=2",
    "sum(su2:spin=1/2,su2:spin=1)",
    "tensor(su2:spin=1/2,su2:spin=1/2)",
    "torus:dim=2,weights=[[1,0],[0,1],[1,1]]",
    "torus:dim=1,weights=[[1],[-2],[3]]",
];

fn reps() -> Vec<(&'static str, UnitaryRep)> {
    REPS.iter().map(|&n| (n, parse_rep(n).expect(n))).collect()
}

/// Runs `f` on every rep, prints each report, then the criterion line.
fn criterion<F>(n: u32, wanted: &[&str], f: F)
where
    F: Fn(&UnitaryRep, &SuiteConfig) -> Vec<CheckReport>,
{
    let cfg = SuiteConfig::default();
    let mut ok = true;
    for (name, rep) in reps() {
        for r in f(&rep, &cfg) {
            if !wanted.contains(&r.check.as_str()) {
                continue;
            }
            println!(
                "  [{n}] {name:<42} {:<28} defect {} tol {} {}",
                r.check,
                fmt_f64(r.defect),
                fmt_f64(r.tolerance),
                if r.pass { "ok" } else { "FAIL" }
            );
            if !r.pass {
                println!("      witness {}", serde_json::Value::Object(r.witness.clone()));
            }
            ok &= r.pass;
        }
    }
    finish(n, ok);
}

fn finish(n: u32, ok: bool) {
    println!("criterion {n}: {}", if ok { "PASS" } else { "FAIL" });
    assert!(ok, "criterion {n} failed");
}

#[test]
fn criterion_01_gradient_identity() {
    criterion(1, &[suite::GRAD_SIGMA_EXACT, suite::GRAD_SIGMA_FD], |r, c| {
        suite::gradient_checks(r, c).unwrap()
    });
}

#[test]
fn criterion_02_sigma_homomorphism() {
    criterion(2, &[suite::SIGMA_HOMOMORPHISM], |r, c| {
        vec![suite::homomorphism_check(r, c).unwrap()]
    });
}

#[test]
fn criterion_03_d_moment_closed_form() {
    criterion(3, &[suite::D_MOMENT_FD], |r, c| vec![suite::d_moment_check(r, c).unwrap()]);
}

#[test]
fn criterion_04_image_is_annihilator_of_isotropy() {
    criterion(4, &[suite::IMAGE_ANNIHILATOR], |r, c| suite::annihilator_checks(r, c).unwrap());
}

#[test]
fn criterion_05_kernel_is_symplectic_complement() {
    criterion(5, &[suite::KERNEL_ANNIHILATOR], |r, c| suite::annihilator_checks(r, c).unwrap());
}

#[test]
fn criterion_06_equivariance() {
    criterion(6, &[suite::EQUIVARIANCE], |r, c| vec![suite::equivariance_check(r, c).unwrap()]);
}

#[test]
fn criterion_07_poisson_morphism() {
    criterion(7, &[suite::POISSON_LINEAR, suite::POISSON_QUADRATIC], |r, c| {
        suite::poisson_checks(r, c).unwrap()
    });
}

#[test]
fn criterion_08_flow_consistency() {
    criterion(8, &[suite::FLOW, suite::FLOW_ENERGY], |r, c| suite::flow_checks(r, c).unwrap());
}

#[test]
fn criterion_09_sphere_image() {
    let cfg = SuiteConfig::default();
    assert_eq!((cfg.samples.sphere, cfg.samples.directions), (100_000, 50));
    let mut ok = true;
    for name in ["su2:spin=1/2", "su2:spin=1"] {
        let rep = parse_rep(name).unwrap();
        for r in suite::sphere_checks(&rep, &cfg, None).unwrap() {
            println!(
                "  [9] {name:<14} {:<20} worst {} tol {} {}",
                r.check,
                fmt_f64(r.defect),
                fmt_f64(r.tolerance),
                if r.pass { "ok" } else { "FAIL" }
            );
            if !r.pass {
                let w = &r.witness;
                println!("      worst direction {}", w.get("support").cloned().unwrap_or_default());
            }
            ok &= r.pass;
        }
        if name == "su2:spin=1/2" {
            let worst = sphere_image_sample(&rep, cfg.samples.sphere, cfg.seed)
                .unwrap()
                .iter()
                .map(|m| m.norm())
                .fold(0.0f64, f64::max);
            let bounded = worst <= 0.25 + 1e-12;
            println!("  [9] {name:<14} max |mu|             {} bound 2.5e-1 {}", fmt_f64(worst), if bounded { "ok" } else { "FAIL" });
            ok &= bounded;
        }
    }
    finish(9, ok);
}

fn capture(cfg: &RunConfig, threads: usize) -> (i32, Vec<u8>) {
    let pool = rayon::ThreadPoolBuilder::new().num_threads(threads).build().unwrap();
    pool.install(|| {
        let mut out = Vec::new();
        let mut err = Vec::new();
        let code = run(cfg, &mut out, &mut err);
        (code, out)
    })
}

#[test]
fn criterion_10_determinism() {
    let mut ok = true;
    let mut runs: Vec<RunConfig> = REPS.iter().map(|r| RunConfig::new(Command::Checks, r)).collect();
    for (rep, format) in [("su2:spin=1/2", Format::Json), ("su2:spin=1", Format::Csv)] {
        let mut c = RunConfig::new(Command::SphereSample, rep);
        c.format = format;
        runs.push(c);
    }
    let mut c = RunConfig::new(Command::MomentEval, "su2:spin=3/2");
    c.format = Format::Csv;
    c.samples = Some(50);
    runs.push(c);
    for cfg in &runs {
        let (c1, a) = capture(cfg, 1);
        let (c2, b) = capture(cfg, 1);
        let (c3, d) = capture(cfg, 4);
        let same = a == b && a == d && c1 == c2 && c1 == c3 && !a.is_empty();
        println!(
            "  [10] {:<14} {:<42} {} bytes, exit {c1}, {}",
            format!("{:?}", cfg.command),
            format!("{:?}", cfg.rep_source),
            a.len(),
            if same { "identical" } else { "DIFFERENT" }
        );
        ok &= same;
    }
    finish(10, ok);
}
