use super::BiberError;

/// Cosine similarity clamped to `[-1, 1]`.
pub fn cosine(a: &[f64], b: &[f64]) -> Result<f64, BiberError> {
    if a.len() != b.len() {
        return Err(BiberError::LengthMismatch {
            expected: a.len(),
            found: b.len(),
        });
    }
    let na = a.iter().map(|x| x * x).sum::<f64>().sqrt();
    let nb = b.iter().map(|x| x * x).sum::<f64>().sqrt();
    if na == 0.0 || nb == 0.0 || !na.is_finite() || !nb.is_finite() {
        return Err(BiberError::ZeroVector);
    }
    let dot: f64 = a.iter().zip(b).map(|(x, y)| x * y).sum();
    Ok((dot / (na * nb)).clamp(-1.0, 1.0))
}

/// Away = (1 - cos(rewritten, input)) / 2 and Towards = (1 + cos(rewritten, target)) / 2.
///
/// Works in any embedding space; both values lie in `[0, 1]`.
pub fn away_towards(rewritten: &[f64], input: &[f64], target: &[f64]) -> Result<(f64, f64), BiberError> {
    let away = (1.0 - cosine(rewritten, input)?) / 2.0;
    let towards = (1.0 + cosine(rewritten, target)?) / 2.0;
    Ok((away, towards))
}
