use nalgebra::{Cholesky, DMatrix, DVector, Dyn};

use crate::error::{Error, Result};

/// Jitter used for unit-variance kernel matrices.
pub const DEFAULT_JITTER: f64 = 1e-6;
/// Largest jitter tried before giving up.
pub const MAX_JITTER: f64 = 1e-2;

/// Lower Cholesky factor of `A + jitter_used * I` together with its log-determinant.
#[derive(Debug, Clone)]
pub struct CholFactor {
    chol: Cholesky<f64, Dyn>,
    pub log_det: f64,
    pub jitter_used: f64,
}

impl CholFactor {
    pub fn lower_triangular(&self) -> DMatrix<f64> {
        self.chol.l()
    }

    pub fn l(&self) -> &DMatrix<f64> {
        self.chol.l_dirty()
    }

    pub fn dim(&self) -> usize {
        self.chol.l_dirty().nrows()
    }

    /// Solves `(A + jitter I) x = b`.
    pub fn solve(&self, b: &DVector<f64>) -> DVector<f64> {
        self.chol.solve(b)
    }

    /// Solves `L v = b` for the lower factor only.
    pub fn solve_lower(&self, b: &DVector<f64>) -> DVector<f64> {
        let mut v = b.clone();
        self.chol.l_dirty().solve_lower_triangular_mut(&mut v);
        v
    }

    /// Solves `Lᵀ x = v`.
    pub fn solve_upper(&self, v: &DVector<f64>) -> DVector<f64> {
        let mut x = v.clone();
        self.chol.l_dirty().tr_solve_lower_triangular_mut(&mut x);
        x
    }

    /// `(LLᵀ)⁻¹`, formed as `L⁻ᵀ L⁻¹` from the triangular inverse.
    pub fn inverse(&self) -> DMatrix<f64> {
        let l = self.chol.l_dirty();
        let n = l.nrows();
        let ls = l.as_slice();
        // columns of M = L⁻¹ by forward substitution on unit vectors
        let mut m = vec![0.0; n * n];
        for j in 0..n {
            let col = &mut m[j * n..(j + 1) * n];
            col[j] = 1.0;
            for k in j..n {
                let xk = col[k] / ls[k * n + k];
                col[k] = xk;
                if xk != 0.0 {
                    let lk = &ls[k * n..(k + 1) * n];
                    for (c, lv) in col[k + 1..].iter_mut().zip(&lk[k + 1..]) {
                        *c -= lv * xk;
                    }
                }
            }
        }
        let mut inv = DMatrix::<f64>::zeros(n, n);
        for j in 0..n {
            let cj = &m[j * n..(j + 1) * n];
            for i in j..n {
                let ci = &m[i * n..(i + 1) * n];
                let v: f64 = ci[i..].iter().zip(&cj[i..]).map(|(a, b)| a * b).sum();
                inv[(i, j)] = v;
                inv[(j, i)] = v;
            }
        }
        inv
    }

    /// Log-determinant of the leading `n × n` block, read straight off the factor.
    pub fn leading_log_det(&self, n: usize) -> f64 {
        let l = self.chol.l_dirty();
        2.0 * (0..n).map(|i| l[(i, i)].ln()).sum::<f64>()
    }
}

/// Factors a symmetric matrix, escalating diagonal jitter by factors of ten
/// (starting at `base_jitter`, up to [`MAX_JITTER`]) until it succeeds.
pub fn cholesky_logdet(a: &DMatrix<f64>, base_jitter: f64) -> Result<CholFactor> {
    if !a.is_square() {
        return Err(Error::InvalidInput(format!(
            "cholesky of a {}x{} matrix",
            a.nrows(),
            a.ncols()
        )));
    }
    if !(base_jitter >= 0.0) {
        return Err(Error::InvalidInput(format!("negative jitter {base_jitter}")));
    }
    let mut jitter = base_jitter;
    loop {
        if let Some(f) = try_factor(a, jitter) {
            return Ok(f);
        }
        jitter = if jitter == 0.0 { DEFAULT_JITTER } else { 10.0 * jitter };
        if jitter > MAX_JITTER * (1.0 + 1e-12) {
            return Err(Error::NotPositiveDefinite { jitter: jitter / 10.0 });
        }
    }
}

fn try_factor(a: &DMatrix<f64>, jitter: f64) -> Option<CholFactor> {
    let mut m = a.clone();
    if jitter > 0.0 {
        for i in 0..m.nrows() {
            m[(i, i)] += jitter;
        }
    }
    let chol = Cholesky::new(m)?;
    let l = chol.l_dirty();
    let mut log_det = 0.0;
    for i in 0..l.nrows() {
        let d = l[(i, i)];
        if !(d > 0.0) || !d.is_finite() {
            return None;
        }
        log_det += d.ln();
    }
    Some(CholFactor {
        chol,
        log_det: 2.0 * log_det,
        jitter_used: jitter,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn identity_factor() {
        let f = cholesky_logdet(&DMatrix::identity(3, 3), 0.0).unwrap();
        assert_eq!(f.lower_triangular(), DMatrix::identity(3, 3));
        assert_eq!(f.log_det, 0.0);
        assert_eq!(f.jitter_used, 0.0);
    }

    #[test]
    fn diagonal_log_det() {
        let a = DMatrix::from_row_slice(2, 2, &[4.0, 0.0, 0.0, 9.0]);
        let f = cholesky_logdet(&a, 0.0).unwrap();
        assert!((f.log_det - 3.583_518_938_456_11).abs() < 1e-12);
    }

    #[test]
    fn rank_deficient_takes_base_jitter() {
        let a = DMatrix::from_element(2, 2, 1.0);
        let f = cholesky_logdet(&a, 1e-6).unwrap();
        assert_eq!(f.jitter_used, 1e-6);
        assert!((f.log_det - (-13.122_362_877_404_45)).abs() < 1e-6);
    }

    #[test]
    fn rank_deficient_without_jitter_escalates() {
        let a = DMatrix::from_element(3, 3, 1.0);
        let f = cholesky_logdet(&a, 0.0).unwrap();
        assert!(f.jitter_used >= DEFAULT_JITTER);
    }

    #[test]
    fn inverse_matches_nalgebra() {
        let a = random_spd(40, 3);
        let f = cholesky_logdet(&a, 0.0).unwrap();
        let ours = f.inverse();
        let reference = a.clone().cholesky().unwrap().inverse();
        assert!((ours - reference).amax() < 1e-8);
    }

    #[test]
    fn indefinite_matrix_fails() {
        let a = DMatrix::from_row_slice(2, 2, &[1.0, 0.0, 0.0, -1.0]);
        assert!(matches!(
            cholesky_logdet(&a, 1e-6),
            Err(Error::NotPositiveDefinite { .. })
        ));
    }

    fn random_spd(n: usize, seed: u64) -> DMatrix<f64> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let b = DMatrix::from_fn(n, n, |_, _| rng.random::<f64>() - 0.5);
        &b * b.transpose() + DMatrix::identity(n, n) * 1e-3
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(24))]
        #[test]
        fn reconstructs_random_spd(n in 1usize..=256, seed in any::<u64>()) {
            let a = random_spd(n, seed);
            let f = cholesky_logdet(&a, 0.0).unwrap();
            let l = f.lower_triangular();
            let mut target = a.clone();
            for i in 0..n { target[(i, i)] += f.jitter_used; }
            let err = (&l * l.transpose() - &target).norm() / target.norm();
            prop_assert!(err < 1e-8);
            let diag_sum: f64 = (0..n).map(|i| l[(i, i)].ln()).sum();
            prop_assert!((f.log_det - 2.0 * diag_sum).abs() < 1e-9 * (1.0 + f.log_det.abs()));
        }
    }
}
