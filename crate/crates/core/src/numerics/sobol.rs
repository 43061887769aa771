use std::sync::OnceLock;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};

/// Number of dimensions covered by the bundled direction numbers.
pub const SOBOL_MAX_DIM: usize = 1111;

const BITS: usize = 32;

// Joe & Kuo primitive polynomials and initial direction numbers, one line per
// dimension from 2 onwards: `d s a m_1 .. m_s`.
const JOE_KUO: &str = include_str!("joe_kuo_d6.txt");

fn direction_table() -> &'static [[u32; BITS]] {
    static TABLE: OnceLock<Vec<[u32; BITS]>> = OnceLock::new();
    TABLE.get_or_init(|| {
        let mut table = Vec::with_capacity(SOBOL_MAX_DIM);
        let mut first = [0u32; BITS];
        for (k, v) in first.iter_mut().enumerate() {
            *v = 1 << (BITS - 1 - k);
        }
        table.push(first);
        for line in JOE_KUO.lines().skip(1) {
            let fields: Vec<u32> = line
                .split_whitespace()
                .map(|t| t.parse().expect("malformed direction-number table"))
                .collect();
            let s = fields[1] as usize;
            let a = fields[2];
            let m = &fields[3..3 + s];
            let mut v = [0u32; BITS];
            for k in 0..BITS {
                v[k] = if k < s {
                    m[k] << (BITS - 1 - k)
                } else {
                    let mut x = v[k - s] ^ (v[k - s] >> s);
                    for i in 1..s {
                        if (a >> (s - 1 - i)) & 1 == 1 {
                            x ^= v[k - i];
                        }
                    }
                    x
                };
            }
            table.push(v);
        }
        debug_assert_eq!(table.len(), SOBOL_MAX_DIM);
        table
    })
}

/// First `n` points of the `d`-dimensional Sobol sequence, in Gray-code order.
///
/// With `scramble` set, every coordinate is XOR-ed with a random 32-bit digital
/// shift drawn from `seed`; this keeps the (t, m, s)-net structure. Without it
/// the canonical sequence (starting at the origin) is returned and `seed` is
/// ignored.
pub fn sobol_sequence(n: usize, d: usize, seed: u64, scramble: bool) -> Result<Vec<Vec<f64>>> {
    if d > SOBOL_MAX_DIM {
        return Err(Error::DimensionUnsupported {
            requested: d,
            supported: SOBOL_MAX_DIM,
        });
    }
    if n as u64 > 1u64 << BITS {
        return Err(Error::InvalidInput(format!("{n} sobol points exceed 2^32")));
    }
    let table = direction_table();
    let mut state: Vec<u32> = if scramble {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        (0..d).map(|_| rng.random::<u32>()).collect()
    } else {
        vec![0; d]
    };
    let scale = 1.0 / (1u64 << BITS) as f64;
    let mut points = Vec::with_capacity(n);
    for i in 0..n {
        points.push(state.iter().map(|&s| s as f64 * scale).collect());
        // flip the direction number at the lowest zero bit of i
        let c = (!i).trailing_zeros() as usize;
        if c < BITS {
            for (s, dirs) in state.iter_mut().zip(table) {
                *s ^= dirs[c];
            }
        }
    }
    Ok(points)
}
