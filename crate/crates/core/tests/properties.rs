use proptest::prelude::*;
use smooth_transitions::flat_ends::{
    affine_transform, change_of_interval, fd_flatness, jet_flatness, monotonicity_check,
    product, symmetry_check, to_staircase, AffineMap,
};
use smooth_transitions::hermite::{hermite_interpolant, hermite_oracle, EndpointJet, HermiteSpec};
use smooth_transitions::jets::{jet_compose, jet_div, jet_mul, Jet};
use smooth_transitions::numerics::finite_diff::{finite_difference_jet, FdContext};
use smooth_transitions::numerics::{integrate, QuadratureRule};
use smooth_transitions::scalar::pairwise_sum;
use smooth_transitions::operators::{apply, complement, BlendOperator, Direction};
use smooth_transitions::step_functions::*;
use smooth_transitions::transitions::{transition_from_blends, transition_from_single};
use smooth_transitions::{Interval, SmoothFunction, StepOrders};

fn config() -> ProptestConfig {
    ProptestConfig {
        cases: 48,
        ..ProptestConfig::default()
    }
}

fn coeffs(n: usize) -> impl Strategy<Value = Vec<f64>> {
    prop::collection::vec(-2.0..2.0f64, n)
}

fn close(a: &[f64], b: &[f64], tol: f64) -> bool {
    a.iter()
        .zip(b)
        .all(|(x, y)| (x - y).abs() <= tol * (1.0 + x.abs().max(y.abs())))
}

proptest! {
    #![proptest_config(config())]

    #[test]
    fn jet_product_commutes_and_associates(a in coeffs(6), b in coeffs(6), c in coeffs(6)) {
        let (a, b, c) = (Jet::from_coeffs(0.3, a), Jet::from_coeffs(0.3, b), Jet::from_coeffs(0.3, c));
        let ab = jet_mul(&a, &b).unwrap();
        let ba = jet_mul(&b, &a).unwrap();
        prop_assert!(close(ab.coeffs(), ba.coeffs(), 1e-15));
        let left = jet_mul(&ab, &c).unwrap();
        let right = jet_mul(&a, &jet_mul(&b, &c).unwrap()).unwrap();
        prop_assert!(close(left.coeffs(), right.coeffs(), 1e-12));
    }

    #[test]
    fn jet_division_recovers_factor(a in coeffs(7), mut b in coeffs(7)) {
        b[0] = if b[0] >= 0.0 { b[0] + 0.5 } else { b[0] - 0.5 };
        let (a, b) = (Jet::from_coeffs(1.0, a), Jet::from_coeffs(1.0, b));
        let q = jet_div(&jet_mul(&a, &b).unwrap(), &b).unwrap();
        prop_assert!(close(q.coeffs(), a.coeffs(), 1e-9));
    }

    #[test]
    fn composed_jets_match_finite_differences(p in coeffs(4), w in 0.5..4.0f64, x in 0.2..0.8f64) {
        // p(sin(w x)) against finite differences of its values
        let inner = Jet::affine(x, w, 0.0, 4).sin();
        let outer = {
            let mut acc = Jet::zero(inner.value(), 4);
            let v = Jet::variable(inner.value(), 4);
            for &c in p.iter().rev() {
                acc = (&acc * &v).add_scalar(c);
            }
            acc
        };
        let got = jet_compose(&outer, &inner).unwrap().derivatives();
        let f = |t: f64| p.iter().rev().fold(0.0, |acc, &c| acc * t + c);
        let h = |y: f64| f((w * y).sin());
        let (fd, _) = finite_difference_jet(&h, Interval::unit(), x, 4, 1.0).unwrap();
        for k in 0..=4 {
            let mag = p.iter().map(|c| c.abs()).sum::<f64>();
            let tol = fd_tolerance_for(k) * (1.0 + mag + got[k].abs()) * w.max(1.0).powi(k as i32);
            prop_assert!((got[k] - fd[k]).abs() <= tol, "k={} jet={} fd={}", k, got[k], fd[k]);
        }
    }

    #[test]
    fn beta_closed_form_matches_quadrature(l in 0u32..=6, r in 0u32..=6, x in 0.0..1.0f64) {
        let w = |t: f64| t.powi(l as i32) * (1.0 - t).powi(r as i32);
        let num = integrate(w, Interval::new(0.0, x.max(1e-300)).unwrap(), QuadratureRule::default()).unwrap();
        let den = integrate(w, Interval::unit(), QuadratureRule::default()).unwrap();
        prop_assert!((beta_value(l, r, x) - num / den).abs() < 1e-10);
    }

    #[test]
    fn declared_flatness_holds(l in 0u32..=5, r in 0u32..=5, m in 0u32..=2) {
        let b = beta_step_lr::<f64>(l, r);
        prop_assert!(jet_flatness(&b, l as usize, r as usize, 1e-8).unwrap().passed());
        let rb = rational_step_lr::<f64>(l, r);
        prop_assert!(jet_flatness(&rb, l as usize, r as usize, 1e-8).unwrap().passed());
        let t = trig_step::<f64>(m).unwrap();
        let o = 2 * m as usize + 1;
        prop_assert!(jet_flatness(&t, o, o, 1e-8).unwrap().passed());
        // inclusion: passing at (ℓ+1, r) implies passing at (ℓ, r)
        let b2 = beta_step_lr::<f64>(l + 1, r);
        prop_assert!(jet_flatness(&b2, l as usize + 1, r as usize, 1e-8).unwrap().passed());
        prop_assert!(jet_flatness(&b2, l as usize, r as usize, 1e-8).unwrap().passed());
    }

    #[test]
    fn endpoints_and_value_jet_agreement(l in 0u32..=6, r in 0u32..=6, x in 0.0..1.0f64) {
        for f in [beta_step_lr::<f64>(l, r), rational_step_lr(l, r), expo_rational_step()] {
            prop_assert!(f.value(0.0).abs() <= 1e-12);
            prop_assert!((f.value(1.0) - 1.0).abs() <= 1e-12);
            let j = f.jet(x, 0).unwrap().value();
            prop_assert!((f.value(x) - j).abs() <= 1e-14);
        }
    }

    #[test]
    fn hermite_reproduces_endpoint_jets(
        l in 0usize..=5, r in 0usize..=5,
        a in -3.0..3.0f64, len in 0.5..3.0f64,
        seed in any::<u64>(),
    ) {
        let mut s = seed;
        let mut next = move || {
            s = s.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            ((s >> 11) as f64 / (1u64 << 53) as f64) * 2.0 - 1.0
        };
        let fa: Vec<f64> = (0..=l).map(|_| next()).collect();
        let gb: Vec<f64> = (0..=r).map(|_| next()).collect();
        let spec = HermiteSpec::new(EndpointJet::new(a, fa.clone()), EndpointJet::new(a + len, gb.clone())).unwrap();
        let h = hermite_interpolant(&spec);
        let left = h.derivatives(a, l).unwrap();
        let right = h.derivatives(a + len, r).unwrap();
        let mag = fa.iter().chain(&gb).fold(1.0f64, |m, v| m.max(v.abs()));
        let scale = mag * len.powi(-((l + r + 1) as i32)).max(1.0);
        prop_assert!(close(&left, &fa, 1e-9 * scale));
        prop_assert!(close(&right, &gb, 1e-9 * scale));
        // degree ℓ + r + 1: the next derivative vanishes identically
        let top = l + r + 2;
        for x in [a, a + 0.37 * len, a + len] {
            let d = h.derivatives(x, top).unwrap();
            prop_assert!(d[top].abs() <= 1e-7 * scale * len.powi(-(top as i32)).max(1.0));
        }
        let o = hermite_oracle(&spec).unwrap();
        for i in 1..=20 {
            let x = a + len * i as f64 / 21.0;
            prop_assert!((o.value(x) - h.value(x)).abs() <= 1e-8 * mag);
        }
    }

    #[test]
    fn hermite_reproduces_polynomials(p in coeffs(6), l in 2usize..=4, a in -1.0..1.0f64, len in 0.5..2.0f64) {
        let r = 5 - l; // ℓ + r + 1 = 6 ≥ deg p = 5
        let d = Interval::new(a - 1.0, a + len + 1.0).unwrap();
        let poly = SmoothFunction::polynomial(d, p);
        let spec = HermiteSpec::new(
            EndpointJet::of(&poly, a, l).unwrap(),
            EndpointJet::of(&poly, a + len, r).unwrap(),
        ).unwrap();
        let h = hermite_interpolant(&spec);
        for i in 0..20 {
            let x = a + len * (i as f64 + 0.5) / 20.0;
            prop_assert!((h.value(x) - poly.value(x)).abs() < 1e-9 * (1.0 + poly.value(x).abs()));
        }
    }

    #[test]
    fn products_of_steps_stay_flat(l in 0u32..=4, r in 0u32..=4, pick in 0usize..3, pick2 in 0usize..3) {
        let make = |i: usize| match i {
            0 => beta_step_lr::<f64>(l, r),
            1 => rational_step_lr(l, r),
            _ => trig_step((l.max(r)) / 2).unwrap(),
        };
        let p = product(&make(pick), &make(pick2)).unwrap();
        prop_assert_eq!(p.value(0.0), 0.0);
        prop_assert!((p.value(1.0) - 1.0).abs() < 1e-12);
        prop_assert!(jet_flatness(&p, l as usize, r as usize, 1e-8).unwrap().passed());
        prop_assert!(monotonicity_check(&p, 2000).passed());
    }

    #[test]
    fn symmetric_compositions_stay_symmetric(m in 0u32..=3, k in 0u32..=4) {
        let u = trig_step::<f64>(m).unwrap();
        let v = beta_step_lr::<f64>(k, k);
        prop_assume!(symmetry_check(&u, 1001).unwrap().max_defect < 1e-12);
        prop_assume!(symmetry_check(&v, 1001).unwrap().max_defect < 1e-12);
        let uv = change_of_interval(&u, &v).unwrap();
        prop_assert!(symmetry_check(&uv, 1001).unwrap().max_defect < 1e-10);
    }

    #[test]
    fn reflected_staircase_decreases(l in 0u32..=4, r in 0u32..=4, a in -2.0..2.0f64) {
        let src = Interval::new(a, a + 1.5).unwrap();
        let s = to_staircase(&beta_step_lr::<f64>(l, r), src, Interval::new(1.0, 3.0).unwrap()).unwrap();
        let refl = affine_transform(&s, AffineMap::reflect_y()).unwrap();
        prop_assert_eq!(refl.flat_orders(), StepOrders::finite(r, l));
        let xs = refl.domain().grid(500);
        for w in xs.windows(2) {
            prop_assert!(refl.value(w[1]) <= refl.value(w[0]));
        }
        prop_assert!(jet_flatness(&refl, r as usize, l as usize, 1e-8).unwrap().passed());
    }

    #[test]
    fn operator_plus_complement_is_identity(l in 0u32..=4, r in 0u32..=4, w in 0.5..5.0f64, kind in 0usize..3) {
        let d = Interval::new(2.0, 4.0).unwrap();
        let op = match kind {
            0 => BlendOperator::hermite(Direction::Leftward, StepOrders::finite(l, r), d).unwrap(),
            1 => BlendOperator::from_step(Direction::Leftward, &rational_step_lr(l, r), d).unwrap(),
            _ => BlendOperator::from_step(Direction::Rightward, &beta_step_lr(l, r), d).unwrap(),
        };
        let f = SmoothFunction::sine(d, 1.0, w, 0.3);
        let (a, b) = (apply(&op, &f).unwrap(), apply(&complement(&op), &f).unwrap());
        for x in d.grid(4096) {
            prop_assert!((a.value(x) + b.value(x) - f.value(x)).abs() < 1e-13);
        }
    }

    #[test]
    fn hermite_blend_of_flat_jet_is_zero(l in 0u32..=4, r in 0u32..=4) {
        let d = Interval::new(0.0, 2.0).unwrap();
        // g = (x - 2)^(r+1) has a zero jet of order r at b₀ = 2
        let mut c = vec![0.0f64; r as usize + 2];
        c[r as usize + 1] = 1.0;
        let g = SmoothFunction::polynomial(Interval::new(-10.0, 10.0).unwrap(), vec![0.0; 1]);
        let shifted = affine_transform(
            &SmoothFunction::polynomial(Interval::new(-12.0, 8.0).unwrap(), c),
            AffineMap::horizontal(1.0, 2.0),
        ).unwrap();
        let op = BlendOperator::hermite(Direction::Leftward, StepOrders::finite(l, r), d).unwrap();
        for h in [g, shifted] {
            let out = apply(&op, &h).unwrap();
            for x in d.grid(50) {
                prop_assert!(out.value(x).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn single_operator_transition_matches_pair(l in 0u32..=3, r in 0u32..=3, w in 0.5..4.0f64) {
        let outer = Interval::new(-1.0, 2.0).unwrap();
        let inner = Interval::new(0.0, 1.0).unwrap();
        let f = SmoothFunction::cosine(outer, 1.0, w, 0.0);
        let g = SmoothFunction::exponential(outer, 0.5, 1.0);
        let op = BlendOperator::from_step(Direction::Leftward, &trig_step(2).unwrap(), inner).unwrap();
        let op = BlendOperator::multiplicative(Direction::Leftward, StepOrders::finite(l, r), match op.kind() {
            smooth_transitions::operators::BlendKind::Multiplicative { carrier } => carrier.clone(),
            _ => unreachable!(),
        }).unwrap();
        let t1 = transition_from_single(&op, &f, &g).unwrap();
        let t2 = transition_from_blends(&op, &complement(&op), &f, &g).unwrap();
        for x in outer.grid(997) {
            prop_assert!((t1.value(x) - t2.value(x)).abs() < 1e-14);
        }
    }
}

fn fd_tolerance_for(k: usize) -> f64 {
    smooth_transitions::numerics::fd_tolerance(k, FdContext::Interior)
}

#[test]
fn monotone_on_fine_grid_for_every_family() {
    let fab = fabius(1e-10, 1 << 12).unwrap();
    let fams = vec![
        beta_step_lr::<f64>(3, 2),
        rational_step_lr(4, 2),
        expo_rational_step(),
        trig_step(3).unwrap(),
        fab,
    ];
    for f in &fams {
        let rep = monotonicity_check(f, 10_000);
        assert!(rep.passed(), "{}: {:?}", f.label(), &rep.violations[..rep.violations.len().min(5)]);
    }
}

#[test]
fn fd_flatness_for_non_polynomial_families() {
    for (l, r) in [(1, 1), (4, 2), (2, 3)] {
        let f = rational_step_lr::<f64>(l, r);
        assert!(fd_flatness(&f, l as usize, r as usize, FdContext::OneSided).unwrap().passed());
    }
    let e = expo_rational_step::<f64>();
    let rep = fd_flatness(&e, 4, 4, FdContext::ExpoRational).unwrap();
    assert!(rep.passed(), "{rep:?}");
    let fab = fabius::<f64>(1e-10, 1 << 12).unwrap();
    let rep = fd_flatness(&fab, 2, 2, FdContext::ExpoRational).unwrap();
    assert!(rep.passed(), "{rep:?}");
}

proptest! {
    #![proptest_config(config())]

    #[test]
    fn pairwise_sum_tracks_exact_sum(xs in prop::collection::vec(-1.0e3..1.0e3f64, 1..400)) {
        // Σ of f64 terms, accumulated exactly as integers of 2^-30 units
        let q: Vec<f64> = xs.iter().map(|x| (x * (1u64 << 30) as f64).round() / (1u64 << 30) as f64).collect();
        let exact: i128 = q.iter().map(|x| (x * (1u64 << 30) as f64) as i128).sum();
        let exact = exact as f64 / (1u64 << 30) as f64;
        let bound = 1e-13 * q.iter().map(|x| x.abs()).sum::<f64>().max(1.0);
        prop_assert!((pairwise_sum(&q) - exact).abs() <= bound);
    }
}

#[test]
fn fd_error_shrinks_with_scale() {
    let f = |x: f64| (3.0 * x).sin();
    let exact = 3.0 * (3.6f64).cos();
    let d = Interval::new(0.0, 3.0).unwrap();
    let errs: Vec<f64> = [4.0, 2.0, 1.0]
        .iter()
        .map(|&s| (finite_difference_jet(&f, d, 1.2, 1, s).unwrap().0[1] - exact).abs())
        .collect();
    assert!(errs[1] < errs[0] && errs[2] < errs[1], "{errs:?}");
}

#[test]
fn single_precision_instantiation() {
    let b = beta_step_lr::<f32>(2, 2);
    assert!((b.value(0.5) - 0.5).abs() < 1e-6);
    let t = trig_step::<f32>(1).unwrap();
    assert!((t.value(0.25) - 0.058_058_3).abs() < 1e-5);
    let e = expo_rational_step::<f32>();
    assert!(e.jet(0.01, 3).unwrap().is_finite());
    let d = Interval::<f32>::new(0.0, 1.0).unwrap();
    let op = BlendOperator::hermite(Direction::Leftward, StepOrders::finite(1, 1), d).unwrap();
    let out = apply(&op, &SmoothFunction::identity(d)).unwrap();
    assert!((out.value(0.5) - 0.375).abs() < 1e-6);
}
