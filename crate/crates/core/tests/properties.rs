use momentlab::lie::{ad_group_apply, bracket, coadjoint, LieAlgebra};
use momentlab::linalg::{C64, CMatrix};
use momentlab::moment::{moment, sigma};
use momentlab::rep::su2_spin;
use momentlab::symplectic::{inner, omega, omega_flat, omega_sharp};
use momentlab::{AlgebraElement, StateVector, UnitaryRep};
use proptest::prelude::*;

fn coords(n: usize) -> impl Strategy<Value = Vec<f64>> {
    prop::collection::vec(-2.0..2.0f64, n)
}

fn su2_elem(c: Vec<f64>) -> AlgebraElement {
    LieAlgebra::su2().element(c).unwrap()
}

fn spin() -> impl Strategy<Value = UnitaryRep> {
    prop::sample::select(vec![0.5, 1.0, 1.5]).prop_map(|j| su2_spin(j).unwrap())
}

fn state_in(rep: &UnitaryRep, v: &[f64]) -> StateVector {
    let n = rep.dim();
    rep.space()
        .state((0..n).map(|k| C64::new(v[2 * k], v[2 * k + 1])).collect())
        .unwrap()
}

fn close(a: f64, b: f64, tol: f64) -> bool {
    (a - b).abs() <= tol * (1.0 + a.abs().max(b.abs()))
}

proptest! {
    #[test]
    fn bracket_is_antisymmetric(x in coords(3), y in coords(3)) {
        let (x, y) = (su2_elem(x), su2_elem(y));
        let a = bracket(&x, &y).unwrap();
        let b = bracket(&y, &x).unwrap();
        prop_assert!(a.add(&b).unwrap().norm() < 1e-14);
    }

    #[test]
    fn jacobi_identity(x in coords(3), y in coords(3), z in coords(3)) {
        let (x, y, z) = (su2_elem(x), su2_elem(y), su2_elem(z));
        let t1 = bracket(&x, &bracket(&y, &z).unwrap()).unwrap();
        let t2 = bracket(&y, &bracket(&z, &x).unwrap()).unwrap();
        let t3 = bracket(&z, &bracket(&x, &y).unwrap()).unwrap();
        prop_assert!(t1.add(&t2).unwrap().add(&t3).unwrap().norm() < 1e-12);
    }

    #[test]
    fn group_adjoint_is_an_automorphism(g in coords(3), x in coords(3), y in coords(3)) {
        let (g, x, y) = (su2_elem(g), su2_elem(x), su2_elem(y));
        let lhs = ad_group_apply(&g, &bracket(&x, &y).unwrap()).unwrap();
        let rhs = bracket(&ad_group_apply(&g, &x).unwrap(), &ad_group_apply(&g, &y).unwrap()).unwrap();
        prop_assert!(lhs.add(&rhs.neg()).unwrap().norm() < 1e-10 * (1.0 + lhs.norm()));
    }

    #[test]
    fn coadjoint_preserves_pairing(g in coords(3), a in coords(3), x in coords(3)) {
        let su2 = LieAlgebra::su2();
        let (g, x) = (su2_elem(g), su2_elem(x));
        let alpha = su2.dual(a).unwrap();
        let lhs = coadjoint(&g, &alpha).unwrap().pair(&ad_group_apply(&g, &x).unwrap()).unwrap();
        let rhs = alpha.pair(&x).unwrap();
        prop_assert!(close(lhs, rhs, 1e-10));
    }

    #[test]
    fn omega_identities(v in coords(4), w in coords(4)) {
        let rep = su2_spin(0.5).unwrap();
        let (x, y) = (state_in(&rep, &v), state_in(&rep, &w));
        let i = C64::new(0.0, 1.0);
        prop_assert!((omega(&x, &y).unwrap() + omega(&y, &x).unwrap()).abs() < 1e-14);
        let ix = x.scale_complex(i);
        let iy = y.scale_complex(i);
        prop_assert!(close(omega(&ix, &iy).unwrap(), omega(&x, &y).unwrap(), 1e-14));
        prop_assert!(close(inner(&x, &y).unwrap().re, omega(&ix, &y).unwrap(), 1e-14));
        let back = omega_sharp(&omega_flat(&x));
        prop_assert!(back.sub(&x).unwrap().norm() < 1e-14);
    }

    #[test]
    fn moment_is_quadratic_and_phase_invariant(rep in spin(), v in coords(8), lam in -3.0..3.0f64, th in 0.0..6.3f64) {
        let x = state_in(&rep, &v);
        let mu = moment(&rep, &x).unwrap();
        let scaled = moment(&rep, &x.scale(lam)).unwrap();
        let phased = moment(&rep, &x.scale_complex(C64::from_polar(1.0, th))).unwrap();
        let tol = 1e-12 * (1.0 + x.norm_squared() * (1.0 + lam * lam));
        for k in 0..3 {
            prop_assert!((scaled.coords()[k] - lam * lam * mu.coords()[k]).abs() < tol);
            prop_assert!((phased.coords()[k] - mu.coords()[k]).abs() < tol);
        }
    }

    #[test]
    fn sigma_is_linear_in_the_algebra(rep in spin(), v in coords(8), a in coords(3), b in coords(3), s in -2.0..2.0f64) {
        let x = state_in(&rep, &v);
        let (a, b) = (su2_elem(a), su2_elem(b));
        let combo = a.add(&b.scale(s)).unwrap();
        let lhs = sigma(&rep, &combo, &x).unwrap();
        let rhs = sigma(&rep, &a, &x).unwrap() + s * sigma(&rep, &b, &x).unwrap();
        prop_assert!((lhs - rhs).abs() < 1e-12 * (1.0 + x.norm_squared()) * 10.0);
    }

    #[test]
    fn group_action_is_unitary(rep in spin(), g in coords(3)) {
        let u = rep.rho(&su2_elem(g)).unwrap();
        let n = u.nrows();
        let defect = (u.adjoint() * &u - CMatrix::identity(n, n)).iter().map(|z| z.norm()).fold(0.0, f64::max);
        prop_assert!(defect < 1e-12);
    }

    #[test]
    fn moment_norm_on_sphere_is_bounded(rep in spin(), v in coords(8)) {
        let x = state_in(&rep, &v);
        prop_assume!(x.norm() > 1e-3);
        let unit = x.scale(1.0 / x.norm());
        // the largest weight of spin j gives |μ| ≤ j/2 on the unit sphere
        let j = (rep.dim() as f64 - 1.0) / 2.0;
        prop_assert!(moment(&rep, &unit).unwrap().norm() <= 0.5 * j + 1e-12);
    }
}
