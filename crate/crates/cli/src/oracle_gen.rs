//! Regenerates the metric fixture from the brute-force reference
//! implementations.

use regstyle::textproc::stem;
use regstyle_oracle::cases::random_cases;
use serde::{Deserialize, Serialize};

pub const DEFAULT_SEED: u64 = 20_241_016;
pub const DEFAULT_COUNT: usize = 200;
pub const DEFAULT_MAX_LEN: u64 = 8;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Expected {
    pub rouge1: f64,
    pub rouge2: f64,
    #[serde(rename = "rougeL")]
    pub rouge_l: f64,
    pub bleu: f64,
    pub sari: f64,
    pub meteor: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FixtureCase {
    pub name: String,
    pub input: String,
    pub candidate: String,
    pub references: Vec<String>,
    pub expected: Expected,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Fixture {
    pub generator: String,
    pub seed: u64,
    pub cases: Vec<FixtureCase>,
}

fn split(s: &str) -> Vec<&str> {
    s.split_whitespace().collect()
}

fn expected(input: &str, candidate: &str, references: &[String]) -> Expected {
    let (inp, cand) = (split(input), split(candidate));
    let refs: Vec<Vec<&str>> = references.iter().map(|r| split(r)).collect();
    let r0 = &refs[0];
    let cs: Vec<String> = cand.iter().map(|t| stem(t)).collect();
    let rs: Vec<String> = r0.iter().map(|t| stem(t)).collect();
    let cs: Vec<&str> = cs.iter().map(String::as_str).collect();
    let rs: Vec<&str> = rs.iter().map(String::as_str).collect();
    Expected {
        rouge1: regstyle_oracle::rouge_n(&cand, r0, 1),
        rouge2: regstyle_oracle::rouge_n(&cand, r0, 2),
        rouge_l: regstyle_oracle::rouge_l(&cand, r0),
        bleu: regstyle_oracle::bleu(&cand, &refs),
        sari: regstyle_oracle::sari(&inp, &cand, &refs),
        meteor: regstyle_oracle::meteor(&cand, r0, &cs, &rs),
    }
}

/// Hand-picked triples followed by `count` random ones. Texts are
/// lowercase space-separated words so tokenization is the identity.
pub fn generate(seed: u64, count: usize) -> Fixture {
    let hand: [(&str, &str, &str, &[&str]); 5] = [
        ("stem_match", "cat runs", "cats run", &["cat runs"]),
        ("one_edit", "the cat sat", "the dog sat", &["the dog sat"]),
        ("identity", "a b c d", "a b c d", &["a b c d"]),
        ("disjoint", "x y", "p q r", &["s t"]),
        ("two_refs", "the old man walked home", "the man walked home", &["an old man went home", "the man walked home slowly"]),
    ];
    let mut cases: Vec<FixtureCase> = hand
        .iter()
        .map(|&(name, input, candidate, refs)| {
            let references: Vec<String> = refs.iter().map(|r| r.to_string()).collect();
            FixtureCase {
                name: name.into(),
                input: input.into(),
                candidate: candidate.into(),
                expected: expected(input, candidate, &references),
                references,
            }
        })
        .collect();
    for (i, c) in random_cases(seed, count, DEFAULT_MAX_LEN).into_iter().enumerate() {
        let input = c.input.join(" ");
        let candidate = c.candidate.join(" ");
        let references: Vec<String> = c.references.iter().map(|r| r.join(" ")).collect();
        cases.push(FixtureCase {
            name: format!("random_{i:03}"),
            expected: expected(&input, &candidate, &references),
            input,
            candidate,
            references,
        });
    }
    Fixture {
        generator: "regstyle-oracle".into(),
        seed,
        cases,
    }
}
