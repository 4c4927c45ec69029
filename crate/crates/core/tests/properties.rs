use fracnambu::dynamics::{conservation_report, integrate_s_time};
use fracnambu::fractal::{CantorSpec, Staircase};
use fracnambu::nambu::{
    liouville_divergence, nambu_bracket, verify_bracket_axiom, Axiom, PhasePoint, ScalarField,
};
use fracnambu::systems::{
    euler_top, nahm, random_points, random_polynomial, random_polynomial_field, NahmScale,
};
use proptest::prelude::*;

fn fields(seed: u64, n: usize, count: usize) -> Vec<ScalarField> {
    (0..count)
        .map(|k| {
            random_polynomial_field(seed.wrapping_mul(31).wrapping_add(k as u64), n, 3).unwrap()
        })
        .collect()
}

fn cross(a: &[f64], b: &[f64]) -> [f64; 3] {
    [
        a[1] * b[2] - a[2] * b[1],
        a[2] * b[0] - a[0] * b[2],
        a[0] * b[1] - a[1] * b[0],
    ]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn adjacent_swap_flips_sign(seed in any::<u64>(), n in 2usize..=4, slot in 0usize..3, p in prop::collection::vec(-1.0f64..1.0, 4)) {
        let slot = slot % (n - 1);
        let fs = fields(seed, n, n);
        let mut swapped = fs.clone();
        swapped.swap(slot, slot + 1);
        let a = nambu_bracket(&fs, &p[..n]).unwrap();
        let b = nambu_bracket(&swapped, &p[..n]).unwrap();
        prop_assert!((a + b).abs() <= 1e-12 * (1.0 + a.abs()));
    }

    #[test]
    fn repeated_argument_vanishes(seed in any::<u64>(), n in 2usize..=4, p in prop::collection::vec(-1.0f64..1.0, 4)) {
        let mut fs = fields(seed, n, n);
        fs[n - 1] = fs[0].clone();
        prop_assert!(nambu_bracket(&fs, &p[..n]).unwrap().abs() < 1e-12);
    }

    #[test]
    fn linear_in_each_slot(seed in any::<u64>(), a in -2.0f64..2.0, b in -2.0f64..2.0, p in prop::collection::vec(-1.0f64..1.0, 3)) {
        let fs = fields(seed, 3, 4);
        let combo = fs[0].linear_combination(a, &fs[3], b);
        let lhs = nambu_bracket(&[fs[1].clone(), combo, fs[2].clone()], &p).unwrap();
        let r1 = nambu_bracket(&[fs[1].clone(), fs[0].clone(), fs[2].clone()], &p).unwrap();
        let r2 = nambu_bracket(&[fs[1].clone(), fs[3].clone(), fs[2].clone()], &p).unwrap();
        let rhs = a * r1 + b * r2;
        prop_assert!((lhs - rhs).abs() <= 1e-10 * (1.0 + rhs.abs()));
    }

    #[test]
    fn order_three_bracket_is_triple_product(seed in any::<u64>(), p in prop::collection::vec(-1.0f64..1.0, 3)) {
        let fs = fields(seed, 3, 3);
        let g: Vec<Vec<f64>> = fs.iter().map(|f| f.grad(&p)).collect();
        let c = cross(&g[1], &g[2]);
        let triple: f64 = (0..3).map(|i| g[0][i] * c[i]).sum();
        let br = nambu_bracket(&fs, &p).unwrap();
        prop_assert!((br - triple).abs() <= 1e-12 * (1.0 + triple.abs()));
    }

    #[test]
    fn nambu_flow_is_divergence_free(a in prop::array::uniform3(-1.0f64..1.0), p in prop::collection::vec(-2.0f64..2.0, 3)) {
        let sys = nahm(a[0], a[1], a[2], NahmScale::DeterminantFaithful).unwrap();
        prop_assert!(liouville_divergence(&sys, &p).unwrap().abs() < 1e-9);
    }

    #[test]
    fn staircase_is_monotone(eps in 0.05f64..0.9, x in 0.0f64..1.0, y in 0.0f64..1.0) {
        let st = Staircase::at_dimension(CantorSpec::new(0.0, 1.0, eps).unwrap(), 20).unwrap();
        let (lo, hi) = if x <= y { (x, y) } else { (y, x) };
        prop_assert!(st.eval(lo).unwrap() <= st.eval(hi).unwrap());
    }

    #[test]
    fn staircase_self_similar(eps in 0.05f64..0.9, x in 0.0f64..1.0) {
        let spec = CantorSpec::new(0.0, 1.0, eps).unwrap();
        let r = spec.ratio();
        let st = Staircase::at_dimension(spec, 30).unwrap();
        let lhs = st.eval(r * x).unwrap();
        let rhs = 0.5 * st.eval(x).unwrap();
        prop_assert!((lhs - rhs).abs() < 1e-9, "{} vs {}", lhs, rhs);
    }

    #[test]
    fn generalized_inverse_round_trip(eps in 0.05f64..0.9, u in 0.0f64..1.0) {
        let spec = CantorSpec::new(-1.0, 3.0, eps).unwrap().with_reference(1.0).unwrap();
        // Keep depth-level cells far above the spacing of representable x.
        let depth = ((1e-6f64).ln() / spec.ratio().ln()).floor().min(20.0) as u32;
        let st = Staircase::at_dimension(spec, depth).unwrap();
        let (lo, hi) = st.range();
        let s = lo + u * (hi - lo);
        let x = st.inverse(s).unwrap();
        let back = st.eval(x).unwrap();
        prop_assert!((back - s).abs() <= 1e-12 * (hi - lo), "S(S^-1({})) = {}", s, back);
    }

    #[test]
    fn polynomial_gradient_matches_differences(seed in any::<u64>(), p in prop::collection::vec(-1.0f64..1.0, 3)) {
        let poly = random_polynomial(seed, 3, 3).unwrap();
        let field = poly.clone().into_field("f");
        let fd = fracnambu::nambu::gradient(&field, &p, fracnambu::nambu::GradientScheme::CentralDiff).unwrap();
        for (a, b) in poly.grad(&p).iter().zip(&fd) {
            prop_assert!((a - b).abs() < 1e-6);
        }
    }
}

#[test]
fn skew_symmetry_at_a_hundred_points() {
    let fs = fields(7, 4, 4);
    for p in random_points(7, 4, 100, 1.0) {
        for perm in [vec![1, 0, 2, 3], vec![3, 2, 1, 0], vec![1, 2, 3, 0]] {
            assert!(verify_bracket_axiom(&Axiom::Skew(perm), &fs, &p).unwrap() < 1e-12);
        }
    }
}

#[test]
fn invariants_conserved_along_flow() {
    for sys in [
        euler_top(1.0, 2.0, 3.0).unwrap(),
        nahm(0.3, -0.7, 0.2, NahmScale::PaperFaithful).unwrap(),
    ] {
        for p in random_points(11, 3, 5, 1.0) {
            let path = integrate_s_time(&sys, &PhasePoint::new(p).unwrap(), 5.0, 1e-3).unwrap();
            assert!(conservation_report(&path.to_trajectory(), &sys).max_drift() < 1e-10);
        }
    }
}
