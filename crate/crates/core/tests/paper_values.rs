//! Worked examples with externally verified reference values: a system of
//! Diophantine equations reduced to minimizing a sum of squares with p = 6,
//! and a real-variety enclosure with p = 2.

use polymin::poly::Polynomial;
use polymin::sos::{convergence_sweep, sphere_min_bound, SosOptions};

fn diophantine_objective() -> Polynomial {
    let g1 = Polynomial::parse(
        "-3*x1^3 + x1^2*x2 - x1^2 + 2*x1*x2 + x1 - 2*x2^2 - 2*x2 + 4",
        2,
    )
    .unwrap();
    let g2 = Polynomial::parse("2*x2^3 + x1*x2^2 + 4*x2 - 5", 2).unwrap();
    g1.square().add(&g2.square())
}

#[test]
fn diophantine_leading_form_bound_on_six_sphere() {
    let f = diophantine_objective();
    let f6 = f.leading_form().unwrap();
    let b = sphere_min_bound(&f6, 6, 8, &SosOptions::default()).unwrap();
    assert!(b.is_optimal(), "status {:?}", b.status);
    assert!((b.value - 2.59).abs() < 0.1, "c6 = {}", b.value);
}

#[test]
fn diophantine_linear_component_sweep() {
    let f = diophantine_objective();
    let f1 = f.homogeneous_components()[1].clone();
    let sweep = convergence_sweep(&f1, 6, &[6, 8], &SosOptions::default()).unwrap();
    assert!(sweep.iter().all(|b| b.is_optimal()));
    assert!(
        sweep[1].value >= sweep[0].value - 1e-7,
        "sweep not monotone: {} then {}",
        sweep[0].value,
        sweep[1].value
    );
    assert!(
        (sweep[1].value + 60.49).abs() < 0.5,
        "c1 = {}",
        sweep[1].value
    );
}
