use dbar_kernels::analysis::{check_exponent, holder_on_points, holder_seminorm};
use dbar_kernels::{Error, Result};
use num_complex::Complex64;
use proptest::prelude::*;

type C = Complex64;

fn sqrt_abs(x: &[f64]) -> Result<Vec<C>> {
    Ok(vec![C::new(x[0].abs().sqrt(), 0.0)])
}

fn pairs_from(raw: &[(f64, f64)]) -> Vec<(Vec<f64>, Vec<f64>)> {
    raw.iter().map(|&(x, y)| (vec![x], vec![y])).collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn estimate_grows_with_the_pair_set(raw in prop::collection::vec((-1.0f64..1.0, -1.0f64..1.0), 2..60), cut in 1usize..60) {
        let pairs = pairs_from(&raw);
        let cut = cut.min(pairs.len());
        let sub = holder_seminorm(&sqrt_abs, 0.5, &pairs[..cut], 1e-5).unwrap();
        let all = holder_seminorm(&sqrt_abs, 0.5, &pairs, 1e-5).unwrap();
        prop_assert!(sub.seminorm <= all.seminorm);
        // |sqrt|x| - sqrt|y|| <= sqrt(2) |x - y|^{1/2} on the line
        prop_assert!(all.seminorm <= 2f64.sqrt() + 1e-12);
    }

    #[test]
    fn cloud_estimate_grows_with_the_cloud(xs in prop::collection::vec(-1.0f64..1.0, 3..30), a in 0.1f64..0.9) {
        let points: Vec<Vec<f64>> = xs.iter().map(|&x| vec![x]).collect();
        let values: Vec<Vec<C>> = xs.iter().map(|&x| vec![C::new(x.abs().powf(a), 0.0)]).collect();
        let head = holder_on_points(&points[..2], &values[..2], a).unwrap();
        let full = holder_on_points(&points, &values, a).unwrap();
        prop_assert!(head.seminorm <= full.seminorm);
    }
}

#[test]
fn integer_and_out_of_range_exponents_are_rejected() {
    for a in [0.0, 1.0, 2.0, -0.5, 2.5] {
        assert!(matches!(check_exponent(a), Err(Error::UnsupportedExponent(_))), "{a}");
    }
    for a in [0.25, 0.5, 1.5] {
        check_exponent(a).unwrap();
    }
}
