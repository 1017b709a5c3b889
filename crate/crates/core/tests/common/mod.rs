#![allow(dead_code)]

use contextuality::{Complex, Matrix, State};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn gaussian_matrix(rng: &mut impl Rng, dim: usize) -> Matrix {
    let entries = (0..dim * dim)
        .map(|_| Complex::new(rng.sample(StandardNormal), rng.sample(StandardNormal)))
        .collect();
    Matrix::new(dim, entries).unwrap()
}

/// Random full-rank normalized two-qubit state.
pub fn random_state(rng: &mut impl Rng) -> State {
    State::from_factor(&gaussian_matrix(rng, 4)).unwrap()
}

/// Random normalized product of two pure qubit states.
pub fn random_pure_qubit(rng: &mut impl Rng) -> [Complex<f64>; 2] {
    let v: Vec<Complex<f64>> = (0..2)
        .map(|_| Complex::new(rng.sample(StandardNormal), rng.sample(StandardNormal)))
        .collect();
    let n = (v[0].norm_sqr() + v[1].norm_sqr()).sqrt();
    [v[0] / n, v[1] / n]
}

fn matrix_from(values: Vec<f64>, dim: usize) -> Matrix {
    let entries = values.chunks(2).map(|c| Complex::new(c[0], c[1])).collect();
    Matrix::new(dim, entries).unwrap()
}

pub fn arb_matrix(dim: usize) -> impl Strategy<Value = Matrix> {
    prop::collection::vec(-1.0f64..1.0, 2 * dim * dim).prop_map(move |v| matrix_from(v, dim))
}

/// Random subnormalized valid state: `t · G G† / Tr`, possibly low rank.
pub fn arb_state() -> impl Strategy<Value = State> {
    (arb_matrix(4), 0.0f64..=1.0, 0usize..4).prop_filter_map(
        "nonzero factor",
        |(mut g, t, drop_cols)| {
            for row in 0..4 {
                for col in 0..drop_cols {
                    g.set(row, col, Complex::new(0.0, 0.0));
                }
            }
            let s = State::from_factor(&g).ok()?;
            State::new(s.matrix().scale_real(t)).ok()
        },
    )
}
