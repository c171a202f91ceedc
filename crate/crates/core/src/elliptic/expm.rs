use num_complex::Complex64;

use crate::linalg::CsrMatrix;

/// `e^{−tM} v` by Taylor series on `s` substeps with `t‖M‖_∞ / s ≤ 1`.
pub fn expm_action(m: &CsrMatrix<Complex64>, t: f64, v: &[Complex64]) -> Vec<Complex64> {
    let norm = (0..m.nrows())
        .map(|i| m.row(i).map(|(_, a)| a.norm()).sum::<f64>())
        .fold(0.0, f64::max);
    let steps = ((t * norm).ceil() as usize).max(1);
    let tau = t / steps as f64;
    let sup = |w: &[Complex64]| w.iter().fold(0.0f64, |a, z| a.max(z.norm()));
    let mut x = v.to_vec();
    for _ in 0..steps {
        let mut term = x.clone();
        let mut sum = x.clone();
        for k in 1..=100 {
            term = m.mul_vec(&term);
            let f = -tau / k as f64;
            for z in term.iter_mut() {
                *z *= f;
            }
            for (s, z) in sum.iter_mut().zip(&term) {
                *s += z;
            }
            if k >= 2 && sup(&term) <= 1e-18 * sup(&sum) {
                break;
            }
        }
        x = sum;
    }
    x
}
