//! Seeded random fixtures for tests and verification harnesses.

use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha12Rng;

use crate::qla::{DenseOperator, DenseState};

pub fn rng(seed: u64) -> ChaCha12Rng {
    ChaCha12Rng::seed_from_u64(seed)
}

pub fn random_state(n: usize, rng: &mut ChaCha12Rng) -> DenseState {
    let dim = 1usize << n;
    let amps: Vec<Complex64> = (0..dim)
        .map(|_| Complex64::new(rng.random::<f64>() - 0.5, rng.random::<f64>() - 0.5))
        .collect();
    DenseState::from_amplitudes(n, &amps)
        .unwrap()
        .normalized()
        .unwrap()
}

/// Mixture of a few random pure states; full rank is not guaranteed.
pub fn random_density(n: usize, rng: &mut ChaCha12Rng) -> DenseOperator {
    let mut weights = [0.0f64; 3];
    let mut total = 0.0;
    for w in weights.iter_mut() {
        *w = rng.random::<f64>() + 0.1;
        total += *w;
    }
    let mut acc = DenseOperator::zeros(n);
    for &w in &weights {
        let psi = random_state(n, rng);
        acc = acc
            .add(&psi.density().unwrap().scale(Complex64::new(w / total, 0.0)))
            .unwrap();
    }
    acc
}

/// Haar-ish random unitary from the QR decomposition of a random matrix.
pub fn random_unitary(n: usize, rng: &mut ChaCha12Rng) -> DenseOperator {
    let dim = 1usize << n;
    let raw = DMatrix::from_fn(dim, dim, |_, _| {
        Complex64::new(rng.random::<f64>() - 0.5, rng.random::<f64>() - 0.5)
    });
    let qr = raw.qr();
    DenseOperator::from_matrix(n, qr.q()).unwrap()
}
