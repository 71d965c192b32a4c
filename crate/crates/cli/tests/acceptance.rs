//! Acceptance suite: one line per criterion, `PASS`, `FAIL` or `SKIP`,
//! with the measured runtime against its budget.

use std::collections::{BTreeMap, BTreeSet};
use std::path::{Path, PathBuf};
use std::process::{Command, Output, Stdio};
use std::time::{Duration, Instant};

use nalgebra::{DMatrix, SymmetricEigen};
use rand_core::{RngCore, SeedableRng};
use rand_xoshiro::SplitMix64;
use regstyle::analysis::{frontier_indices, SystemPoint};
use regstyle::biber::{away_towards, extract_features, fit_mda, DimensionRule, FeatureCatalog, FeatureVector, MdaFitConfig, Rotation};
use regstyle::datasets::{
    build_mud_cases, build_plan, load_corpus, select_mud_authors, Corpus, MudRecord, PlanOptions, Schema, Variant,
};
use regstyle::metrics::{ari, bleu, fkgl, formality_accuracy, meteor, overlap_rouge, rouge_l, rouge_n, sari, Formality};
use regstyle::mock::{MockConfig, MockServer};
use regstyle::pipeline::{run_naive, templates, CaseMeta, System, Task, TransferCase, PLACEHOLDERS};
use regstyle::providers::{ScorerKind, ScorerRequest, SidecarClient, SidecarConfig};
use regstyle::textproc::stem;
use regstyle::Document;
use regstyle_oracle::cases::random_cases;
use serde_json::Value;

const BIN: &str = env!("CARGO_BIN_EXE_regstyle");
const PROMPT_TABLE: &str = include_str!("../../core/tests/fixtures/prompt_table.tsv");

type Check = Result<Vec<String>, String>;

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn close(got: f64, want: f64, tol: f64, what: &str) -> Result<(), String> {
    ensure((got - want).abs() <= tol, || format!("{what}: {got} vs {want} (tol {tol:e})"))
}

fn uniform(rng: &mut SplitMix64) -> f64 {
    (rng.next_u64() >> 11) as f64 / (1u64 << 53) as f64
}

fn below(rng: &mut SplitMix64, n: usize) -> usize {
    (rng.next_u64() % n as u64) as usize
}

fn fixture(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/fixtures").join(name)
}

// ---------------------------------------------------------------- away/towards

const WORDS: [&str; 24] = [
    "i", "you", "the", "of", "we", "really", "think", "administration", "in", "can't", "development", "maybe",
    "must", "not", "river", "quickly", "always", "because", "however", "she", "was", "walked", "is", "very",
];

fn random_text(rng: &mut SplitMix64, vocab: &[&str], len: usize) -> String {
    let mut words: Vec<&str> = (0..len).map(|_| vocab[below(rng, vocab.len())]).collect();
    words.push(if rng.next_u64().is_multiple_of(4) { "?" } else { "." });
    words.join(" ")
}

fn identities(vectors: &[Vec<f64>], rng: &mut SplitMix64, what: &str) -> Result<(), String> {
    for (i, v) in vectors.iter().enumerate() {
        let (away, towards) = away_towards(v, v, v).map_err(|e| format!("{what} {i}: {e}"))?;
        close(away, 0.0, 1e-12, &format!("{what} away(x,x) #{i}"))?;
        close(towards, 1.0, 1e-12, &format!("{what} towards(x,x) #{i}"))?;
        let (a, b) = (&vectors[(i + 1) % vectors.len()], &vectors[(i + 7) % vectors.len()]);
        let base = away_towards(v, a, b).map_err(|e| e.to_string())?;
        let scale = |x: &[f64], s: f64| x.iter().map(|y| y * s).collect::<Vec<_>>();
        let (s1, s2, s3) = (0.01 + 100.0 * uniform(rng), 0.01 + 100.0 * uniform(rng), 0.01 + 100.0 * uniform(rng));
        let scaled = away_towards(&scale(v, s1), &scale(a, s2), &scale(b, s3)).map_err(|e| e.to_string())?;
        close(scaled.0, base.0, 1e-12, &format!("{what} away scale #{i}"))?;
        close(scaled.1, base.1, 1e-12, &format!("{what} towards scale #{i}"))?;
    }
    Ok(())
}

fn away_towards_identities() -> Check {
    let mut rng = SplitMix64::seed_from_u64(1);
    let catalog = FeatureCatalog::builtin();
    let texts: Vec<String> = (0..1000)
        .map(|_| {
            let len = 12 + below(&mut rng, 20);
            random_text(&mut rng, &WORDS, len)
        })
        .collect();
    let fvs: Vec<FeatureVector> = texts
        .iter()
        .map(|t| extract_features(&Document::new(t.as_str()), &catalog).map_err(|e| e.to_string()))
        .collect::<Result<_, _>>()?;
    let model = fit_mda(&fvs, &catalog, &MdaFitConfig::default()).map_err(|e| e.to_string())?;
    let biber: Vec<Vec<f64>> = fvs
        .iter()
        .map(|fv| model.project(fv).map(|e| e.scores).map_err(|e| e.to_string()))
        .collect::<Result<_, _>>()?;
    identities(&biber, &mut rng, "biber")?;

    let server = MockServer::start(MockConfig::default()).map_err(|e| e.to_string())?;
    let client = SidecarClient::new(&SidecarConfig {
        base_url: server.url(),
        ..Default::default()
    });
    let provider = client
        .embed(&ScorerRequest::texts(ScorerKind::EmbedLuar, texts))
        .map_err(|e| e.to_string())?;
    ensure(provider.len() == 1000, || format!("{} provider vectors", provider.len()))?;
    identities(&provider, &mut rng, "provider")?;
    Ok(vec!["1000 biber + 1000 provider vectors".into()])
}

// ---------------------------------------------------------------- readability

/// Text, words, sentences, syllables, letters, FKGL, ARI. Counts are by hand;
/// the two scores follow from them by hand arithmetic, rounded to 0.01.
const READABILITY: [(&str, usize, usize, usize, usize, f64, f64); 10] = [
    ("The happy children ran to the big garden and shouted.", 10, 1, 14, 43, 4.83, 3.82),
    ("a", 1, 1, 1, 1, -3.40, -16.22),
    ("The cat sat on the mat.", 6, 1, 6, 17, -1.45, -5.09),
    ("I like tea. You like coffee.", 6, 2, 7, 21, -0.65, -3.45),
    ("Dogs bark. Birds sing. Fish swim.", 6, 3, 6, 25, -3.01, -0.80),
    ("Information technology transforms modern education.", 5, 1, 16, 46, 24.12, 24.40),
    ("We went home after the long meeting ended.", 8, 1, 11, 34, 3.76, 2.59),
    ("Is it raining? Yes, it is raining heavily today!", 9, 2, 14, 37, 4.52, 0.18),
    ("My brother has 3 dogs.", 4, 1, 5, 16, 0.72, -0.59),
    (
        "Beautiful butterflies flutter over colorful meadows. Children watch them silently.",
        10,
        2,
        22,
        71,
        12.32,
        14.51,
    ),
];

fn readability() -> Check {
    for (text, words, sentences, syllables, letters, want_fkgl, want_ari) in READABILITY {
        let doc = Document::new(text);
        let counts = (doc.word_count(), doc.sentences().len(), doc.syllable_count(), doc.char_count());
        ensure(counts == (words, sentences, syllables, letters), || {
            format!("{text:?}: counts {counts:?} vs {:?}", (words, sentences, syllables, letters))
        })?;
        close(fkgl(&doc).map_err(|e| e.to_string())?, want_fkgl, 0.01, &format!("fkgl {text:?}"))?;
        close(ari(&doc).map_err(|e| e.to_string())?, want_ari, 0.01, &format!("ari {text:?}"))?;
    }
    Ok(vec![format!("{} fixtures", READABILITY.len())])
}

// ---------------------------------------------------------------- overlap oracle

fn strs(v: &[String]) -> Vec<&str> {
    v.iter().map(String::as_str).collect()
}

fn overlap_oracle() -> Check {
    let cases = random_cases(20_241_016, 200, 8);
    for (k, case) in cases.iter().enumerate() {
        let (s, c) = (strs(&case.input), strs(&case.candidate));
        let refs: Vec<Vec<&str>> = case.references.iter().map(|r| strs(r)).collect();
        let r0 = &refs[0];
        let (cd, sd) = (Document::new(c.join(" ")), Document::new(s.join(" ")));
        let rd: Vec<Document> = refs.iter().map(|r| Document::new(r.join(" "))).collect();
        let cs: Vec<String> = c.iter().map(|t| stem(t)).collect();
        let rs: Vec<String> = r0.iter().map(|t| stem(t)).collect();
        let checks = [
            ("rouge1", rouge_n(&cd, &rd[0], 1), regstyle_oracle::rouge_n(&c, r0, 1)),
            ("rouge2", rouge_n(&cd, &rd[0], 2), regstyle_oracle::rouge_n(&c, r0, 2)),
            ("rougeL", rouge_l(&cd, &rd[0]), regstyle_oracle::rouge_l(&c, r0)),
            ("bleu", bleu(&cd, &rd).map_err(|e| e.to_string())?, regstyle_oracle::bleu(&c, &refs)),
            ("sari", sari(&sd, &cd, &rd).map_err(|e| e.to_string())?, regstyle_oracle::sari(&s, &c, &refs)),
            ("meteor", meteor(&cd, &rd[0]), regstyle_oracle::meteor(&c, r0, &strs(&cs), &strs(&rs))),
        ];
        for (name, got, want) in checks {
            close(got, want, 1e-9, &format!("case {k} {name}"))?;
        }
    }
    Ok(vec!["200 cases, 6 metrics".into()])
}

/// Candidate = reference. Returns the METEOR values separately: its
/// fragmentation penalty keeps a perfect single-chunk match at 1 - 0.5/m^3.
fn identity_scores() -> Result<Vec<(usize, f64)>, String> {
    let mut meteor_values = Vec::new();
    for case in random_cases(7, 200, 8) {
        if case.candidate.len() < 2 {
            continue;
        }
        let d = Document::new(case.candidate.join(" "));
        let refs = [d.clone()];
        for (name, v) in [
            ("bleu", bleu(&d, &refs).map_err(|e| e.to_string())?),
            ("rouge1", rouge_n(&d, &d, 1)),
            ("rouge2", rouge_n(&d, &d, 2)),
            ("rougeL", rouge_l(&d, &d)),
            ("sari", sari(&d, &d, &refs).map_err(|e| e.to_string())?),
        ] {
            close(v, 1.0, 1e-12, &format!("{name} identity {:?}", case.candidate))?;
        }
        meteor_values.push((case.candidate.len(), meteor(&d, &d)));
    }
    Ok(meteor_values)
}

fn overlap_identity() -> Check {
    identity_scores()?;
    Ok(vec!["bleu, rouge1/2/L, sari = 1.0".into()])
}

fn meteor_identity() -> Check {
    let values = identity_scores()?;
    let worst = values.iter().map(|&(_, v)| v).fold(f64::INFINITY, f64::min);
    for &(m, v) in &values {
        let m = m as f64;
        close(v, 1.0 - 0.5 / (m * m * m), 1e-12, "meteor identity formula")?;
    }
    close(worst, 1.0, 1e-12, "meteor(x, x)")?;
    Ok(vec![])
}

// ---------------------------------------------------------------- target baseline

fn target_baseline() -> Check {
    let case = TransferCase {
        id: "t".into(),
        task: Task::Mud,
        input_text: "ok so i finally tried it and honestly it was fine".into(),
        style_exemplar: "The committee reviewed the proposal.\nIts recommendations were adopted unanimously.".into(),
        gold_refs: None,
        meta: CaseMeta::default(),
    };
    let run = run_naive(&case, System::Target, 0).map_err(|e| e.to_string())?;
    let got = overlap_rouge(&Document::new(run.output_text.as_str()), &Document::new(case.style_exemplar.as_str()));
    ensure(got == (1.0, 1.0, 1.0), || format!("overlap_rouge {got:?}"))?;
    Ok(vec![])
}

// ---------------------------------------------------------------- MDA

const CONVERSATIONAL: [&str; 14] = [
    "i", "you", "we", "don't", "can't", "think", "feel", "know", "really", "maybe", "well", "oh", "yeah", "me",
];
const INFORMATIONAL: [&str; 14] = [
    "administration", "implementation", "regulation", "development", "management", "of", "in", "with", "within",
    "according", "national", "organization", "assessment", "requirement",
];
const NEUTRAL: [&str; 8] = ["table", "house", "river", "green", "seven", "window", "garden", "road"];

fn register_text(rng: &mut SplitMix64, lexicon: &[&str]) -> String {
    let len = 30 + below(rng, 20);
    let words: Vec<&str> = (0..len)
        .map(|_| {
            if uniform(rng) < 0.6 {
                lexicon[below(rng, lexicon.len())]
            } else {
                NEUTRAL[below(rng, NEUTRAL.len())]
            }
        })
        .collect();
    format!("{}.", words.join(" "))
}

fn sample_var(xs: &[f64]) -> f64 {
    let n = xs.len() as f64;
    let mean = xs.iter().sum::<f64>() / n;
    xs.iter().map(|x| (x - mean) * (x - mean)).sum::<f64>() / (n - 1.0)
}

fn two_registers() -> Result<String, String> {
    let mut rng = SplitMix64::seed_from_u64(42);
    let catalog = FeatureCatalog::builtin();
    let mut make = |lexicon: &[&str], n: usize| -> Result<Vec<FeatureVector>, String> {
        (0..n)
            .map(|_| extract_features(&Document::new(register_text(&mut rng, lexicon)), &catalog).map_err(|e| e.to_string()))
            .collect()
    };
    let (train_a, train_b) = (make(&CONVERSATIONAL, 200)?, make(&INFORMATIONAL, 200)?);
    let (test_a, test_b) = (make(&CONVERSATIONAL, 100)?, make(&INFORMATIONAL, 100)?);
    let train: Vec<FeatureVector> = train_a.iter().chain(&train_b).cloned().collect();
    let config = MdaFitConfig {
        dimensions: DimensionRule::Fixed(4),
        rotation: Rotation::None,
    };
    let model = fit_mda(&train, &catalog, &config).map_err(|e| e.to_string())?;
    let dim1 = |fv: &FeatureVector| model.project(fv).map(|e| e.scores[0]).map_err(|e| e.to_string());

    let mean = |vs: &[FeatureVector]| -> Result<f64, String> {
        Ok(vs.iter().map(dim1).collect::<Result<Vec<_>, _>>()?.iter().sum::<f64>() / vs.len() as f64)
    };
    let (ma, mb) = (mean(&train_a)?, mean(&train_b)?);
    let mid = (ma + mb) / 2.0;
    let orient = (ma - mb).signum();
    let mut correct = 0;
    for fv in &test_a {
        correct += usize::from((dim1(fv)? - mid) * orient > 0.0);
    }
    for fv in &test_b {
        correct += usize::from((dim1(fv)? - mid) * orient < 0.0);
    }
    let accuracy = correct as f64 / 200.0;
    ensure(accuracy >= 0.9, || format!("held-out dimension-1 accuracy {accuracy}"))?;

    for j in 0..model.dimensions {
        let scores: Vec<f64> = train
            .iter()
            .map(|fv| model.project(fv).map(|e| e.scores[j]).map_err(|e| e.to_string()))
            .collect::<Result<_, _>>()?;
        let var = sample_var(&scores);
        close(var, model.eigenvalues[j], 1e-6, &format!("score variance, dimension {}", j + 1))?;
        close(var, model.explained_variance[j], 1e-6, &format!("explained variance, dimension {}", j + 1))?;
    }
    Ok(format!("held-out accuracy {accuracy:.3}"))
}

fn toy_catalog(p: usize) -> FeatureCatalog {
    let features: Vec<String> = (0..p)
        .map(|i| format!(r#"{{"name":"f{i}","matcher":{{"kind":"mean_word_length"}},"normalization":"raw"}}"#))
        .collect();
    FeatureCatalog::from_json(&format!(r#"{{"version":"toy","features":[{}]}}"#, features.join(","))).unwrap()
}

fn gaussian(rng: &mut SplitMix64) -> f64 {
    (0..12).map(|_| uniform(rng)).sum::<f64>() - 6.0
}

fn block_fixture() -> Result<(), String> {
    let mut rng = SplitMix64::seed_from_u64(5);
    let n = 400;
    let scales = [1.0, 3.0, 0.2, 10.0, 0.5];
    let rows: Vec<Vec<f64>> = (0..n)
        .map(|_| {
            let (u, v) = (gaussian(&mut rng), gaussian(&mut rng));
            (0..5)
                .map(|f| {
                    let latent = if f < 3 { u } else { v };
                    scales[f] * (latent + 0.4 * gaussian(&mut rng)) + f as f64
                })
                .collect()
        })
        .collect();
    let corpus: Vec<FeatureVector> = rows
        .iter()
        .map(|r| FeatureVector {
            catalog_version: "toy".into(),
            rates: r.clone(),
            doc_words: 10,
        })
        .collect();
    let config = MdaFitConfig {
        dimensions: DimensionRule::Fixed(2),
        rotation: Rotation::None,
    };
    let model = fit_mda(&corpus, &toy_catalog(5), &config).map_err(|e| e.to_string())?;

    // independent correlation matrix and eigensolver
    let x = DMatrix::from_fn(n, 5, |i, j| rows[i][j]);
    let mut z = x.clone();
    for j in 0..5 {
        let col = x.column(j);
        let mean = col.mean();
        let sd = (col.iter().map(|v| (v - mean) * (v - mean)).sum::<f64>() / (n - 1) as f64).sqrt();
        for i in 0..n {
            z[(i, j)] = (x[(i, j)] - mean) / sd;
        }
    }
    let corr = z.transpose() * &z / (n - 1) as f64;
    let eig = SymmetricEigen::new(corr);
    let mut order: Vec<usize> = (0..5).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[b].total_cmp(&eig.eigenvalues[a]));
    for (k, &idx) in order.iter().enumerate() {
        close(model.eigenvalues[k], eig.eigenvalues[idx], 1e-8, &format!("eigenvalue {}", k + 1))?;
    }
    for (k, &idx) in order.iter().take(2).enumerate() {
        let reference = eig.eigenvectors.column(idx);
        let sign = (0..5).map(|i| model.loadings[i][k] * reference[i]).sum::<f64>().signum();
        for i in 0..5 {
            close(model.loadings[i][k], sign * reference[i], 1e-8, &format!("loading f{i} dim {}", k + 1))?;
        }
    }
    let blocks = [[0usize, 1, 2].as_slice(), [3usize, 4].as_slice()];
    for (k, block) in blocks.iter().enumerate() {
        for i in 0..5 {
            let w = model.loadings[i][k].abs();
            if block.contains(&i) {
                ensure(w > 0.5, || format!("dimension {} should load on f{i}: {w}", k + 1))?;
            } else {
                ensure(w < 0.15, || format!("dimension {} should not load on f{i}: {w}", k + 1))?;
            }
        }
    }
    Ok(())
}

fn mda_pipeline() -> Check {
    let accuracy = two_registers()?;
    block_fixture()?;
    Ok(vec![accuracy, "5-feature block fixture matches nalgebra".into()])
}

// ---------------------------------------------------------------- pareto

fn pareto() -> Check {
    let mut rng = SplitMix64::seed_from_u64(11);
    for set in 0..500 {
        let n = below(&mut rng, 65);
        let grid = set % 2 == 0;
        let coord = |rng: &mut SplitMix64| if grid { below(rng, 6) as f64 / 5.0 } else { uniform(rng) };
        let raw: Vec<(f64, f64)> = (0..n).map(|_| (coord(&mut rng), coord(&mut rng))).collect();
        let points: Vec<SystemPoint> = raw.iter().enumerate().map(|(i, &(x, y))| SystemPoint::new(format!("s{i}"), x, y, 1)).collect();
        let got: BTreeSet<usize> = frontier_indices(&points).into_iter().collect();
        let want: BTreeSet<usize> = regstyle_oracle::pareto_indices(&raw).into_iter().collect();
        ensure(got == want, || format!("set {set}: {got:?} vs {want:?} for {raw:?}"))?;
    }
    let fixture: Vec<SystemPoint> = [(1.0, 0.0), (0.0, 1.0), (0.3, 0.3), (0.4, 0.4)]
        .iter()
        .enumerate()
        .map(|(i, &(x, y))| SystemPoint::new(format!("p{i}"), x, y, 1))
        .collect();
    let kept: BTreeSet<usize> = frontier_indices(&fixture).into_iter().collect();
    ensure(kept == BTreeSet::from([0, 1, 3]), || format!("fixture kept {kept:?}"))?;
    Ok(vec!["500 random sets".into()])
}

// ---------------------------------------------------------------- prompts

fn bracket_name(placeholder: &str) -> &'static str {
    match placeholder {
        "source_text" => "[source text]",
        "target_text" => "[target text]",
        "neutral_paraphrase" => "[neural paraphrase]",
        "style_comparisons" => "[style comparisons]",
        "style_analysis" => "[style analysis]",
        "style_descriptors" => "[style descriptors]",
        "input_text" => "[input text]",
        _ => "[?]",
    }
}

fn prompt_fidelity() -> Check {
    let bindings: BTreeMap<&str, &str> = PLACEHOLDERS.iter().map(|p| (*p, bracket_name(p))).collect();
    let mut diffs = Vec::new();
    let mut rows = 0;
    for line in PROMPT_TABLE.lines().filter(|l| !l.is_empty()) {
        let cols: Vec<&str> = line.splitn(3, '\t').collect();
        let system: System = cols[0].parse()?;
        let step: usize = cols[1].parse().map_err(|e| format!("{e}"))?;
        let rendered = templates(system)
            .get(step - 1)
            .ok_or_else(|| format!("{system} has no step {step}"))?
            .render(&bindings)
            .map_err(|e| e.to_string())?;
        if rendered != cols[2] {
            diffs.push(format!("{} step {step}", cols[0]));
        }
        rows += 1;
    }
    ensure(diffs.is_empty(), || format!("golden diff: {diffs:?}"))?;
    let systems: BTreeSet<&str> = PROMPT_TABLE.lines().filter_map(|l| l.split('\t').next()).collect();
    ensure(systems.len() == 4 && rows == 10, || format!("{rows} rows over {systems:?}"))?;
    Ok(vec![format!("{rows} templates")])
}

// ---------------------------------------------------------------- target construction

fn full_scale_mud() -> Vec<MudRecord> {
    let mut out = Vec::new();
    for (side, split) in ["test_queries", "test_targets"].iter().enumerate() {
        for a in 0..18 {
            for p in 0..16 {
                out.push(MudRecord {
                    author_id: format!("{side}-{a:02}"),
                    text: format!("post {p} by author {a} on side {side}"),
                    subreddit: format!("r{}", (a + p) % 14),
                    split: Some(split.to_string()),
                });
            }
        }
    }
    out
}

fn target_construction() -> Check {
    let sel = select_mud_authors(&full_scale_mud(), Variant::Random, 3, 15).map_err(|e| e.to_string())?;
    let full = build_mud_cases(&sel, Variant::Random, 3);
    ensure(full.cases.len() == 3600, || format!("full-scale MUD plan has {} cases", full.cases.len()))?;

    let mud = load_corpus(&fixture("mud_small.jsonl"), Schema::Mud).map_err(|e| e.to_string())?;
    let opts = PlanOptions {
        count: 2,
        ..PlanOptions::new(Variant::Random, 9)
    };
    let plan = build_plan(&mud, opts).map_err(|e| e.to_string())?;
    ensure(plan.cases.len() == 16 * 2 * 2, || format!("fixture MUD plan has {} cases", plan.cases.len()))?;
    ensure(build_plan(&mud, opts).map_err(|e| e.to_string())?.digest() == plan.digest(), || "MUD replan digest differs".into())?;

    let gyafc = load_corpus(&fixture("gyafc_em.jsonl"), Schema::Gyafc).map_err(|e| e.to_string())?;
    let Corpus::Gyafc(records) = &gyafc else { unreachable!() };
    let pool: BTreeSet<&str> = records
        .iter()
        .filter(|r| r.split == "train" && r.domain == "em" && r.formality == Formality::Formal)
        .map(|r| r.text.as_str())
        .collect();
    let opts = PlanOptions::new(Variant::EmI2f, 9);
    let plan = build_plan(&gyafc, opts).map_err(|e| e.to_string())?;
    ensure(plan.cases.len() == 20, || format!("GYAFC plan has {} cases", plan.cases.len()))?;
    for case in &plan.cases {
        let segments: Vec<&str> = case.style_exemplar.split('\n').collect();
        ensure(segments.len() == 16, || format!("{}: {} segments", case.id, segments.len()))?;
        ensure(segments.iter().all(|s| pool.contains(s)), || format!("{}: segment outside the pool", case.id))?;
        for gold in case.gold_refs.iter().flatten() {
            ensure(gold != &case.style_exemplar && !segments.contains(&gold.as_str()), || {
                format!("{}: exemplar exposes gold {gold:?}", case.id)
            })?;
        }
    }
    ensure(build_plan(&gyafc, opts).map_err(|e| e.to_string())?.digest() == plan.digest(), || "GYAFC replan digest differs".into())?;
    Ok(vec!["3600 full-scale MUD cases, 64 fixture MUD cases, 20 GYAFC cases with K=16".into()])
}

// ---------------------------------------------------------------- end to end

fn regstyle(args: &[&str]) -> Result<Output, String> {
    Command::new(BIN).args(args).env_remove("REGSTYLE_API_KEY").output().map_err(|e| e.to_string())
}

fn ok_json(out: Output, what: &str) -> Result<Value, String> {
    ensure(out.status.success(), || {
        format!("{what} exited {:?}: {}", out.status.code(), String::from_utf8_lossy(&out.stderr))
    })?;
    serde_json::from_slice(&out.stdout).map_err(|e| format!("{what}: {e}"))
}

fn index_lines(run_dir: &Path) -> usize {
    std::fs::read_to_string(run_dir.join("index.jsonl"))
        .map(|t| t.lines().filter(|l| !l.trim().is_empty()).count())
        .unwrap_or(0)
}

fn mock_script() -> Result<MockConfig, String> {
    let text = std::fs::read_to_string(fixture("mock_script.json")).map_err(|e| e.to_string())?;
    serde_json::from_str(&text).map_err(|e| e.to_string())
}

fn end_to_end() -> Check {
    let dir = tempfile::tempdir().map_err(|e| e.to_string())?;
    let p = |name: &str| dir.path().join(name).to_string_lossy().into_owned();
    let corpus = fixture("gyafc_em.jsonl").to_string_lossy().into_owned();
    let (plan, model, run_dir) = (p("plan.json"), p("mda.json"), dir.path().join("run"));
    let run_dir_s = run_dir.to_string_lossy().into_owned();

    let v = ok_json(regstyle(&["plan", "--variant", "em_i2f", "--corpus", &corpus, "--plan", &plan])?, "plan")?;
    ensure(v["cases"] == 20, || format!("plan: {v}"))?;
    ok_json(
        regstyle(&["mda-fit", "--variant", "em_i2f", "--corpus", &corpus, "--mda-model", &model])?,
        "mda-fit",
    )?;

    let server = MockServer::start(mock_script()?).map_err(|e| e.to_string())?;
    let url = server.url();
    let v = ok_json(
        regstyle(&[
            "run", "--plan", &plan, "--run-dir", &run_dir_s, "--mda-model", &model, "--endpoint-url", &url,
            "--sidecar-url", &url,
        ])?,
        "run",
    )?;
    ensure(v["summary"]["executed"] == 140 && v["summary"]["degraded"] == 0, || format!("run: {v}"))?;

    let out = regstyle(&["report", "--plan", &plan, "--run-dir", &run_dir_s])?;
    ensure(out.status.success(), || format!("report: {}", String::from_utf8_lossy(&out.stderr)))?;
    let report = run_dir.join("report");
    for f in ["report.txt", "report.csv", "report.json", "frontier.csv", "frontier.svg", "descriptors.csv", "examples.csv"] {
        ensure(report.join(f).is_file(), || format!("missing {f}"))?;
    }
    let text = std::fs::read_to_string(report.join("report.txt")).map_err(|e| e.to_string())?;
    for system in System::ALL {
        ensure(text.contains(system.as_str()), || format!("{system} missing from report"))?;
    }
    let frontier = std::fs::read_to_string(report.join("frontier.csv")).map_err(|e| e.to_string())?;
    ensure(frontier.lines().count() == 8, || format!("frontier.csv:\n{frontier}"))?;
    let svg = std::fs::read_to_string(report.join("frontier.svg")).map_err(|e| e.to_string())?;
    ensure(svg.contains("<svg") && svg.matches("<circle").count() == 7, || "frontier.svg".into())?;
    let descriptors = std::fs::read_to_string(report.join("descriptors.csv")).map_err(|e| e.to_string())?;
    ensure(descriptors.lines().count() > 1, || "empty descriptor table".into())?;

    // kill mid-run, then resume
    let slow = MockServer::start(MockConfig {
        delay_ms: 40,
        ..mock_script()?
    })
    .map_err(|e| e.to_string())?;
    let slow_url = slow.url();
    let resume_dir = dir.path().join("resume");
    let resume_s = resume_dir.to_string_lossy().into_owned();
    let args = ["run", "--plan", &plan, "--run-dir", &resume_s, "--endpoint-url", &slow_url, "--systems", "simple,rg", "--threads", "2"];
    let mut child = Command::new(BIN)
        .args(args)
        .stdout(Stdio::null())
        .stderr(Stdio::null())
        .spawn()
        .map_err(|e| e.to_string())?;
    let start = Instant::now();
    while index_lines(&resume_dir) < 6 {
        if start.elapsed() > Duration::from_secs(30) {
            let _ = child.kill();
            return Err("interrupted run made no progress".into());
        }
        std::thread::sleep(Duration::from_millis(10));
    }
    child.kill().map_err(|e| e.to_string())?;
    child.wait().map_err(|e| e.to_string())?;
    let done = index_lines(&resume_dir);
    ensure(done < 40, || "run finished before the kill".into())?;
    let requests_before = slow.chat_requests();
    let v = ok_json(regstyle(&args)?, "resumed run")?;
    ensure(v["summary"]["skipped"] == done && v["summary"]["executed"] == 40 - done, || format!("resume: {v}"))?;
    ensure(index_lines(&resume_dir) == 40, || "resume left pairs missing".into())?;
    let requests = slow.chat_requests() - requests_before;
    Ok(vec![format!("killed after {done}/40 pairs; resume ran {} pairs, {requests} requests", 40 - done)])
}

// ---------------------------------------------------------------- data-gated

fn gyafc_formality_ordering() -> Check {
    let (Ok(path), Ok(url)) = (std::env::var("REGSTYLE_GYAFC_PATH"), std::env::var("REGSTYLE_SIDECAR_URL")) else {
        return Err("SKIP: set REGSTYLE_GYAFC_PATH and REGSTYLE_SIDECAR_URL".into());
    };
    let corpus = load_corpus(Path::new(&path), Schema::Gyafc).map_err(|e| e.to_string())?;
    let client = SidecarClient::new(&SidecarConfig {
        base_url: url,
        ..Default::default()
    });
    let mut notes = Vec::new();
    for variant in [Variant::EmI2f, Variant::EmF2i, Variant::FrI2f, Variant::FrF2i] {
        let plan = match build_plan(&corpus, PlanOptions::new(variant, 0)) {
            Ok(p) if !p.cases.is_empty() => p,
            _ => continue,
        };
        let accuracy = |outputs: Vec<String>| -> Result<f64, String> {
            let probs = client
                .score(&ScorerRequest::texts(ScorerKind::ClassifyFormality, outputs))
                .map_err(|e| e.to_string())?;
            let mut hits = 0;
            for (case, p) in plan.cases.iter().zip(probs) {
                let want = case.meta.target_formality.ok_or("case without target formality")?;
                hits += usize::from(formality_accuracy(p, want).map_err(|e| e.to_string())?);
            }
            Ok(hits as f64 / plan.cases.len() as f64)
        };
        let copy = accuracy(plan.cases.iter().map(|c| c.input_text.clone()).collect())?;
        let target = accuracy(plan.cases.iter().map(|c| c.style_exemplar.clone()).collect())?;
        ensure(copy < target, || format!("{variant}: copy {copy} is not below target {target}"))?;
        notes.push(format!("{variant}: copy {copy:.3} < target {target:.3}"));
    }
    ensure(!notes.is_empty(), || "no GYAFC direction could be planned".into())?;
    Ok(notes)
}

fn sidecar_conformance() -> Check {
    let Ok(url) = std::env::var("REGSTYLE_SIDECAR_URL") else {
        return Err("SKIP: set REGSTYLE_SIDECAR_URL".into());
    };
    let client = SidecarClient::new(&SidecarConfig {
        base_url: url,
        ..Default::default()
    });
    let health = client.health().map_err(|e| e.to_string())?;
    ensure(!health.kinds.is_empty(), || "/health advertises no kinds".into())?;
    let advertised = |k: ScorerKind| health.kinds.iter().any(|s| s == k.as_str());
    let texts = vec![
        "The meeting is scheduled for Tuesday.".to_string(),
        "The meeting is scheduled for Tuesday.".to_string(),
        "lol no way that's hilarious".to_string(),
    ];
    for kind in ScorerKind::ALL.into_iter().filter(|k| k.is_embedding() && advertised(*k)) {
        let vs = client.embed(&ScorerRequest::texts(kind, texts.clone())).map_err(|e| e.to_string())?;
        for v in &vs {
            let norm = v.iter().map(|x| x * x).sum::<f64>().sqrt();
            close(norm, 1.0, 1e-5, &format!("{} norm", kind.as_str()))?;
        }
        ensure(vs[0] == vs[1], || format!("{}: duplicate inputs differ", kind.as_str()))?;
    }
    if advertised(ScorerKind::ScoreMis) {
        let x = texts[0].clone();
        let s = client
            .score(&ScorerRequest::pairs(ScorerKind::ScoreMis, vec![(x.clone(), x.clone()), (x, texts[2].clone())]))
            .map_err(|e| e.to_string())?;
        ensure(s[0] >= s[1], || format!("MIS(x,x) {} < MIS(x,unrelated) {}", s[0], s[1]))?;
    }
    if advertised(ScorerKind::ScoreCola) {
        client.score(&ScorerRequest::texts(ScorerKind::ScoreCola, texts.clone())).map_err(|e| e.to_string())?;
    }
    if advertised(ScorerKind::ClassifyFormality) {
        let s = client
            .score(&ScorerRequest::texts(
                ScorerKind::ClassifyFormality,
                vec!["I would be grateful if you could reply at your earliest convenience.".into(), "gimme a sec lol".into()],
            ))
            .map_err(|e| e.to_string())?;
        ensure(s[0] > s[1], || format!("formality ordering {s:?}"))?;
    }
    Ok(vec![format!("kinds {:?}", health.kinds)])
}

// ---------------------------------------------------------------- runner

struct Criterion {
    name: &'static str,
    budget: Duration,
    check: fn() -> Check,
    /// The stated target contradicts a formula pinned elsewhere; the
    /// measured outcome is reported but does not fail the suite.
    conflict: Option<&'static str>,
}

#[test]
fn acceptance() {
    let criteria = [
        Criterion { name: "away/towards identities and scale invariance", budget: Duration::from_secs(1), check: away_towards_identities, conflict: None },
        Criterion { name: "readability formulas on 10 fixtures", budget: Duration::from_secs(1), check: readability, conflict: None },
        Criterion { name: "overlap metrics match the brute-force oracle", budget: Duration::from_secs(10), check: overlap_oracle, conflict: None },
        Criterion { name: "overlap metrics score 1.0 on candidate = reference", budget: Duration::from_secs(10), check: overlap_identity, conflict: None },
        Criterion {
            name: "METEOR scores 1.0 on candidate = reference",
            budget: Duration::from_secs(10),
            check: meteor_identity,
            conflict: Some("the fragmentation penalty gives 1 - 0.5/m^3 for a perfect m-term match; the oracle and the formula agree on that value"),
        },
        Criterion { name: "target baseline overlap is (1, 1, 1)", budget: Duration::from_secs(1), check: target_baseline, conflict: None },
        Criterion { name: "MDA separation, variances and block fixture", budget: Duration::from_secs(30), check: mda_pipeline, conflict: None },
        Criterion { name: "Pareto frontier matches brute force", budget: Duration::from_secs(5), check: pareto, conflict: None },
        Criterion { name: "prompt templates match the golden table", budget: Duration::from_secs(1), check: prompt_fidelity, conflict: None },
        Criterion { name: "target construction", budget: Duration::from_secs(5), check: target_construction, conflict: None },
        Criterion { name: "end-to-end mock run with kill and resume", budget: Duration::from_secs(60), check: end_to_end, conflict: None },
        Criterion { name: "GYAFC formality ordering (data-gated)", budget: Duration::from_secs(600), check: gyafc_formality_ordering, conflict: None },
        Criterion { name: "sidecar conformance (secondary, live sidecar)", budget: Duration::from_secs(120), check: sidecar_conformance, conflict: None },
    ];
    let mut failures = Vec::new();
    for c in &criteria {
        let start = Instant::now();
        let outcome = (c.check)();
        let elapsed = start.elapsed();
        let timing = format!("{:.3}s / {}s", elapsed.as_secs_f64(), c.budget.as_secs());
        match outcome {
            Err(msg) if msg.starts_with("SKIP") => println!("SKIP  {} ({})", c.name, &msg[6..]),
            Ok(notes) if elapsed <= c.budget => println!("PASS  {} [{timing}] {}", c.name, notes.join("; ")),
            Ok(_) => {
                println!("FAIL  {} [{timing}] over budget", c.name);
                failures.push(c.name);
            }
            Err(msg) => match c.conflict {
                Some(why) => println!("FAIL  {} [{timing}] known conflict: {msg}; {why}", c.name),
                None => {
                    println!("FAIL  {} [{timing}] {msg}", c.name);
                    failures.push(c.name);
                }
            },
        }
    }
    assert!(failures.is_empty(), "failed criteria: {failures:?}");
}
