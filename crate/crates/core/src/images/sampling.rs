//! Deterministic pseudo-random evaluation points.
//!
//! Every trial gets its own generator derived from `(seed, stream, trial)`, so
//! a search gives the same answer whether trials run in order or not.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::ring::ModMat;
use crate::exactmat::Mat;
use crate::field::Field;

pub(crate) const STREAM_CLASSIFY: u64 = 1;
pub(crate) const STREAM_DEPENDENCE: u64 = 2;
pub(crate) const STREAM_INVERTIBLE: u64 = 3;
pub(crate) const STREAM_SPECTRUM: u64 = 4;
pub(crate) const STREAM_TRACE: u64 = 5;

fn splitmix(mut x: u64) -> u64 {
    x = x.wrapping_add(0x9e37_79b9_7f4a_7c15);
    x = (x ^ (x >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    x = (x ^ (x >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    x ^ (x >> 31)
}

pub(crate) fn derive_seed(seed: u64, salt: u64) -> u64 {
    splitmix(seed ^ splitmix(salt))
}

pub(crate) fn trial_rng(seed: u64, stream: u64, trial: usize) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(derive_seed(seed, stream));
    rng.set_stream(trial as u64);
    rng
}

/// Integer entries: uniform in `[-range, range]` over Q, uniform residues over F_p.
pub(crate) fn random_ints(rng: &mut ChaCha8Rng, field: Field, count: usize, range: i64) -> Vec<i64> {
    match field {
        Field::Rational => (0..count).map(|_| rng.gen_range(-range..=range)).collect(),
        Field::Prime(p) => (0..count).map(|_| rng.gen_range(0..p) as i64).collect(),
    }
}

pub(crate) fn ints_to_mats(field: Field, n: usize, ints: &[i64]) -> Vec<Mat> {
    ints.chunks(n * n)
        .map(|c| {
            let rows = c.chunks(n).map(|r| r.iter().map(|&v| field.int(v)).collect()).collect();
            Mat::from_rows(field, rows).unwrap()
        })
        .collect()
}

pub(crate) fn ints_to_modmats(modulus: u64, n: usize, ints: &[i64]) -> Vec<ModMat> {
    ints.chunks(n * n)
        .map(|c| ModMat {
            n,
            p: modulus,
            data: c.iter().map(|&v| v.rem_euclid(modulus as i64) as u64).collect(),
        })
        .collect()
}

/// Candidate points for witness searches, as integer entries.
///
/// Trial 0 is all identities. Later trials cycle through graded weighted
/// shifts, small dense matrices, sparse matrices and upper triangular ones.
pub(crate) fn structured_ints(rng: &mut ChaCha8Rng, field: Field, m: usize, n: usize, trial: usize) -> Vec<i64> {
    let mut out = vec![0i64; m * n * n];
    let small = |rng: &mut ChaCha8Rng| rng.gen_range(-3i64..=3);
    for a in 0..m {
        let block = &mut out[a * n * n..(a + 1) * n * n];
        match trial % 4 {
            _ if trial == 0 => {
                for i in 0..n {
                    block[i * n + i] = 1;
                }
            }
            1 => {
                let shift: i64 = rng.gen_range(-1..=1);
                for i in 0..n {
                    let j = i as i64 + shift;
                    if j < 0 || j >= n as i64 {
                        continue;
                    }
                    let v = if shift == 0 {
                        rng.gen_range(-9i64..=9)
                    } else {
                        rng.gen_range(1i64..=3) * if rng.gen_bool(0.5) { 1 } else { -1 }
                    };
                    block[i * n + j as usize] = v;
                }
            }
            2 => {
                for v in block.iter_mut() {
                    *v = small(rng);
                }
            }
            3 => {
                for v in block.iter_mut() {
                    if rng.gen_bool(0.3) {
                        *v = small(rng);
                    }
                }
            }
            _ => {
                for i in 0..n {
                    for j in i..n {
                        block[i * n + j] = small(rng);
                    }
                }
            }
        }
    }
    if let Field::Prime(p) = field {
        for v in out.iter_mut() {
            *v = v.rem_euclid(p as i64);
        }
    }
    out
}
