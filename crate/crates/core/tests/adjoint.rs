//! Decimation / zero-insertion adjoint identity: <Dx, y> == <x, D^T y>.
//!
//! This is the algebra the solver's error back-projection rests on — if it
//! drifts, corrections land on the wrong pixels with the wrong mass.

use superres::degrade::decimate;
use superres::ibp::zero_insert;
use superres::synth::random_uniform;
use superres::Image;

fn dot(a: &Image, b: &Image) -> f64 {
    assert_eq!(a.dims(), b.dims());
    a.data().iter().zip(b.data()).map(|(x, y)| x * y).sum()
}

#[test]
fn zero_insertion_is_the_decimation_adjoint() {
    let mut checked = 0usize;
    for d in [2usize, 3] {
        for pair in 0..50u64 {
            let x = random_uniform(8 * d, 6 * d, 255.0, 1000 + pair);
            let y = random_uniform(8, 6, 255.0, 2000 + pair);
            let dx = decimate(&x, d).unwrap();
            let dty = zero_insert(&y, d);
            let lhs = dot(&dx, &y);
            let rhs = dot(&x, &dty);
            let scale = lhs.abs().max(rhs.abs()).max(1.0);
            assert!(
                (lhs - rhs).abs() / scale < 1e-9,
                "d={d} pair={pair}: {lhs} vs {rhs}"
            );
            checked += 1;
        }
    }
    assert_eq!(checked, 100);
}

#[test]
fn adjoint_identity_survives_degenerate_factor_one() {
    let x = random_uniform(8, 6, 255.0, 3);
    let y = random_uniform(8, 6, 255.0, 4);
    let lhs = dot(&decimate(&x, 1).unwrap(), &y);
    let rhs = dot(&x, &zero_insert(&y, 1));
    assert_eq!(lhs, rhs);
}
