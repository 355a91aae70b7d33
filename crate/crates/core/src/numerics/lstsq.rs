use super::{NumericsError, Result};

/// Linear least squares `min |A x - y|` for a tall design matrix given by
/// rows, solved by modified Gram-Schmidt QR on the columns.
pub fn least_squares<const K: usize>(rows: &[[f64; K]], y: &[f64]) -> Result<[f64; K]> {
    let n = rows.len();
    if n != y.len() || n < K || K == 0 {
        return Err(NumericsError::DimensionMismatch(format!(
            "{n} rows, {} observations, {K} unknowns",
            y.len()
        )));
    }
    let mut q: Vec<Vec<f64>> = (0..K).map(|j| rows.iter().map(|r| r[j]).collect()).collect();
    let mut r = [[0.0; K]; K];
    let mut qty = [0.0; K];
    let mut resid = y.to_vec();
    for j in 0..K {
        let norm = q[j].iter().map(|v| v * v).sum::<f64>().sqrt();
        if !(norm > 0.0 && norm.is_finite()) {
            return Err(NumericsError::DomainError { x: norm });
        }
        q[j].iter_mut().for_each(|v| *v /= norm);
        r[j][j] = norm;
        let (head, tail) = q.split_at_mut(j + 1);
        let qj = &head[j];
        for (k, col) in tail.iter_mut().enumerate() {
            let dot: f64 = qj.iter().zip(col.iter()).map(|(a, b)| a * b).sum();
            r[j][j + 1 + k] = dot;
            col.iter_mut().zip(qj).for_each(|(v, w)| *v -= dot * w);
        }
        let dot: f64 = qj.iter().zip(&resid).map(|(a, b)| a * b).sum();
        qty[j] = dot;
        resid.iter_mut().zip(qj).for_each(|(v, w)| *v -= dot * w);
    }
    let mut x = [0.0; K];
    for j in (0..K).rev() {
        let mut v = qty[j];
        for k in j + 1..K {
            v -= r[j][k] * x[k];
        }
        x[j] = v / r[j][j];
    }
    Ok(x)
}
