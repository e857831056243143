use hjaf::filter::{blend, filter};
use hjaf::hamiltonian::{Eikonal, Transport};
use hjaf::indicators2d::{quadrant_pair, BetaForm, Patch, Quadrant};
use hjaf::monotone::monotone_step;
use hjaf::par::{set_execution, Execution};
use hjaf::{BoundaryCondition, Field2D, Grid2D, MonotoneScheme};
use proptest::prelude::*;

fn field(n: usize, values: Vec<f64>) -> Field2D {
    let g = Grid2D::new(0.0, 0.0, 0.1, 0.1, n, n).unwrap();
    Field2D::new(g, BoundaryCondition::Periodic, values).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn blend_stays_within_eps_dt_of_monotone(
        pairs in prop::collection::vec((-5.0f64..5.0, -5.0f64..5.0, 0.0f64..=1.0), 1..50),
        eps in 0.0f64..3.0,
        dt in 1e-3f64..0.5,
    ) {
        let sm: Vec<f64> = pairs.iter().map(|t| t.0).collect();
        let sa: Vec<f64> = pairs.iter().map(|t| t.1).collect();
        let phi: Vec<f64> = pairs.iter().map(|t| t.2).collect();
        let out = blend(&sm, &sa, &phi, eps, dt);
        for k in 0..sm.len() {
            prop_assert!((out[k] - sm[k]).abs() <= eps * dt * (1.0 + 1e-12) + 1e-15);
        }
    }

    #[test]
    fn filter_is_bounded(r in -1e6f64..1e6) {
        prop_assert!(filter(r).abs() <= 1.0);
    }

    #[test]
    fn betas_are_nonnegative_and_shift_invariant(
        data in prop::collection::vec(-10.0f64..10.0, 25),
        shift in -100.0f64..100.0,
        dx in 0.01f64..1.0,
        dy in 0.01f64..1.0,
    ) {
        let p: Patch = std::array::from_fn(|b| std::array::from_fn(|a| data[5 * b + a]));
        let ps: Patch = p.map(|row| row.map(|v| v + shift));
        for q in Quadrant::ALL {
            for form in [BetaForm::Full, BetaForm::Partial] {
                let b = quadrant_pair(&p, dx, dy, q, form);
                let bs = quadrant_pair(&ps, dx, dy, q, form);
                for k in 0..2 {
                    prop_assert!(b[k] >= 0.0);
                    prop_assert!((b[k] - bs[k]).abs() <= 1e-8 * (1.0 + b[k]));
                }
            }
        }
    }

    #[test]
    fn eikonal_monotone_step_preserves_order(
        u in prop::collection::vec(-1.0f64..1.0, 64),
        bump in prop::collection::vec(0.0f64..1.0, 64),
    ) {
        let v: Vec<f64> = u.iter().zip(&bump).map(|(a, b)| a + b).collect();
        let su = monotone_step(&field(8, u), MonotoneScheme::Eikonal, &Eikonal, 0.025).unwrap();
        let sv = monotone_step(&field(8, v), MonotoneScheme::Eikonal, &Eikonal, 0.025).unwrap();
        for (a, b) in su.values().iter().zip(sv.values()) {
            prop_assert!(*a <= *b + 1e-12);
        }
    }

    #[test]
    fn monotone_step_commutes_with_constant_shift(
        u in prop::collection::vec(-1.0f64..1.0, 64),
        c in -10.0f64..10.0,
    ) {
        let h = Transport { a: 1.0, b: -0.5 };
        let s = monotone_step(&field(8, u.clone()), MonotoneScheme::LocalLaxFriedrichs, &h, 0.04).unwrap();
        let shifted: Vec<f64> = u.iter().map(|x| x + c).collect();
        let t = monotone_step(&field(8, shifted), MonotoneScheme::LocalLaxFriedrichs, &h, 0.04).unwrap();
        for (a, b) in s.values().iter().zip(t.values()) {
            prop_assert!((a + c - b).abs() <= 1e-12 * (1.0 + c.abs()));
        }
    }
}

#[test]
fn sequential_and_parallel_steps_agree() {
    let g = Grid2D::new(-1.0, -1.0, 0.02, 0.02, 100, 100).unwrap();
    let u = Field2D::from_fn(g, BoundaryCondition::Periodic, |x, y| (x * y).sin() + x.abs()).unwrap();
    let h = Transport { a: 0.3, b: 0.8 };
    let par = monotone_step(&u, MonotoneScheme::LocalLaxFriedrichs, &h, 0.01).unwrap();
    set_execution(Execution::Sequential);
    let seq = monotone_step(&u, MonotoneScheme::LocalLaxFriedrichs, &h, 0.01).unwrap();
    set_execution(Execution::Parallel);
    assert_eq!(par.values(), seq.values());
}
