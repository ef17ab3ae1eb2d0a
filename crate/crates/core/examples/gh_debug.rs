use waverobe_core::asympvar::{cov_u, cov_u_cl_closed_form, cov_v, CovParams};
use waverobe_core::estimator::default_weights;
use waverobe_core::wavelet::daubechies_spec;
use waverobe_core::EstimatorKind;

fn main() {
    let spec = daubechies_spec::<f64>(2).unwrap();
    let w = default_weights::<f64>(5).unwrap();
    let p64 = CovParams::default();
    let p192 = CovParams { l_max: 192, ..p64 };
    let a = cov_v(0.2, 5, EstimatorKind::Cl, &spec, &p64).unwrap().quadratic_form(&w);
    let b = cov_v(0.2, 5, EstimatorKind::Cl, &spec, &p192).unwrap().quadratic_form(&w);
    println!("w'Vw l_max 64 vs 192: {a:.8} {b:.8} rel diff {:.2e}", (a - b).abs() / b);

    // Remark-1 closed form vs generic p-sum for U_CL
    for &d in &[0.0, 0.2, 1.2] {
        let gen = cov_u(d, 5, EstimatorKind::Cl, 1.0, &spec, &p64).unwrap();
        let closed = cov_u_cl_closed_form(d, 5, 1.0, &spec, &p64).unwrap();
        let mut worst = 0.0f64;
        for i in 0..=5 {
            for j in 0..=5 {
                let rel = ((gen.get(i, j) - closed.get(i, j)) / closed.get(i, j)).abs();
                worst = worst.max(rel);
            }
        }
        println!("d={d}: worst relative gap generic vs closed form = {worst:.2e}");
    }
    // efficiency lower bound on the diagonal
    for &d in &[0.0, 0.2, 1.2] {
        for kind in [EstimatorKind::Mad, EstimatorKind::Cr] {
            let ucl = cov_u(d, 3, EstimatorKind::Cl, 1.0, &spec, &p64).unwrap();
            let ust = cov_u(d, 3, kind, 1.0, &spec, &p64).unwrap();
            let eif2 = waverobe_core::scale::if_second_moment::<f64>(kind).unwrap();
            for i in 0..=3 {
                let ratio = ucl.get(i, i) / ust.get(i, i);
                assert!(ratio >= 0.5 / eif2 - 1e-3, "d={d} {kind} i={i}: {ratio} < {}", 0.5 / eif2);
            }
        }
    }
    println!("efficiency lower bounds hold");
}
