use super::MetricError;
use crate::textproc::Document;

fn counts(doc: &Document) -> Result<(f64, f64), MetricError> {
    if doc.is_empty() {
        return Err(MetricError::EmptyDocument);
    }
    Ok((doc.word_count() as f64, doc.sentences().len() as f64))
}

/// Flesch-Kincaid grade level: `0.39 * words/sentences + 11.8 * syllables/words - 15.59`.
pub fn fkgl(doc: &Document) -> Result<f64, MetricError> {
    let (words, sentences) = counts(doc)?;
    let syllables = doc.syllable_count() as f64;
    Ok(0.39 * (words / sentences) + 11.8 * (syllables / words) - 15.59)
}

/// Automated readability index: `4.71 * chars/words + 0.5 * words/sentences - 21.43`.
pub fn ari(doc: &Document) -> Result<f64, MetricError> {
    let (words, sentences) = counts(doc)?;
    let chars = doc.char_count() as f64;
    Ok(4.71 * (chars / words) + 0.5 * (words / sentences) - 21.43)
}
