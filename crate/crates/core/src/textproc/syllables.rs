fn is_vowel(c: char) -> bool {
    matches!(c, 'a' | 'e' | 'i' | 'o' | 'u' | 'y')
}

/// Heuristic syllable count used by the readability formulas.
///
/// Counts maximal runs of `a e i o u y`, then drops one for a silent final
/// `e` (but not for a consonant + `le` ending such as "table", and never below
/// one). Any word containing a letter has at least one syllable; input with no
/// letters yields 0.
pub fn count_syllables(word: &str) -> usize {
    let lower: Vec<char> = word
        .chars()
        .flat_map(char::to_lowercase)
        .filter(|c| c.is_alphabetic())
        .collect();
    if lower.is_empty() {
        return 0;
    }
    let mut groups = 0;
    let mut in_group = false;
    for &c in &lower {
        let v = is_vowel(c);
        if v && !in_group {
            groups += 1;
        }
        in_group = v;
    }
    let n = lower.len();
    if groups > 1 && lower[n - 1] == 'e' {
        let consonant_le = n >= 3 && lower[n - 2] == 'l' && !is_vowel(lower[n - 3]);
        let vowel_before = is_vowel(lower[n - 2]);
        if !consonant_le && !vowel_before {
            groups -= 1;
        }
    }
    groups.max(1)
}
