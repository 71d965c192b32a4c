//! Assembles a [`ScoreVector`] for a finished run.
//!
//! Surface and register metrics are computed locally. Neural metrics go to
//! the scoring sidecar when one is configured and advertises the kind; any
//! sidecar failure leaves the corresponding fields empty.

use std::collections::BTreeSet;

use crate::biber::{away_towards, cosine, embed_text, FeatureCatalog, MdaModel};
use crate::metrics::{ari, bleu, fkgl, meteor, overlap_rouge, rouge_l, rouge_n, sari, ScoreVector};
use crate::pipeline::{PipelineRun, Task, TransferCase};
use crate::providers::{ScorerKind, ScorerRequest, SidecarClient};
use crate::Document;

/// A sidecar together with the kinds it reported healthy.
pub struct Sidecar<'a> {
    client: &'a SidecarClient,
    kinds: BTreeSet<ScorerKind>,
}

impl<'a> Sidecar<'a> {
    /// Probes `/health` once. `None` when the sidecar cannot be reached.
    pub fn connect(client: &'a SidecarClient) -> Option<Self> {
        let health = client.health().ok()?;
        let kinds = ScorerKind::ALL
            .into_iter()
            .filter(|k| health.kinds.iter().any(|name| name == k.as_str()))
            .collect();
        Some(Sidecar { client, kinds })
    }

    pub fn kinds(&self) -> &BTreeSet<ScorerKind> {
        &self.kinds
    }

    fn has(&self, kind: ScorerKind) -> bool {
        self.kinds.contains(&kind)
    }

    fn embed3(&self, kind: ScorerKind, a: &str, b: &str, c: &str) -> Option<[Vec<f64>; 3]> {
        if !self.has(kind) {
            return None;
        }
        let req = ScorerRequest::texts(kind, vec![a.into(), b.into(), c.into()]);
        let v: [Vec<f64>; 3] = self.client.embed(&req).ok()?.try_into().ok()?;
        Some(v)
    }

    fn away_towards(&self, kind: ScorerKind, output: &str, input: &str, target: &str) -> (Option<f64>, Option<f64>) {
        match self.embed3(kind, output, input, target).map(|[o, i, t]| away_towards(&o, &i, &t)) {
            Some(Ok((a, t))) => (Some(a), Some(t)),
            _ => (None, None),
        }
    }

    fn one_score(&self, kind: ScorerKind, req: ScorerRequest) -> Option<f64> {
        if !self.has(kind) {
            return None;
        }
        self.client.score(&req).ok()?.first().copied()
    }
}

pub struct ScoreContext<'a> {
    pub catalog: &'a FeatureCatalog,
    /// Register model for the Biber pair; without one those fields stay empty.
    pub model: Option<&'a MdaModel>,
    pub sidecar: Option<Sidecar<'a>>,
}

impl ScoreContext<'_> {
    fn biber(&self, output: &str, input: &str, target: &str) -> (Option<f64>, Option<f64>) {
        let Some(model) = self.model else { return (None, None) };
        let embed = |t: &str| embed_text(t, self.catalog, model).map(|e| e.scores);
        let pair = embed(output).and_then(|o| away_towards(&o, &embed(input)?, &embed(target)?));
        match pair {
            Ok((a, t)) => (Some(a), Some(t)),
            Err(_) => (None, None),
        }
    }

    /// Scores one run. Degraded runs are not scored.
    pub fn score(&self, case: &TransferCase, run: &PipelineRun) -> Option<ScoreVector> {
        if run.degraded {
            return None;
        }
        let output = run.output_text.as_str();
        let out_doc = Document::new(output);
        let in_doc = Document::new(&case.input_text);
        let target_doc = Document::new(&case.style_exemplar);

        let mut s = ScoreVector::default();
        (s.away_biber, s.towards_biber) = self.biber(output, &case.input_text, &case.style_exemplar);
        (s.overlap_rouge1, s.overlap_rouge2, s.overlap_rouge_l) = overlap_rouge(&out_doc, &target_doc);

        if let Some(sc) = &self.sidecar {
            (s.away_luar, s.towards_luar) = sc.away_towards(ScorerKind::EmbedLuar, output, &case.input_text, &case.style_exemplar);
            (s.away_stylecav, s.towards_stylecav) =
                sc.away_towards(ScorerKind::EmbedStylecav, output, &case.input_text, &case.style_exemplar);
            s.cola = sc.one_score(ScorerKind::ScoreCola, ScorerRequest::texts(ScorerKind::ScoreCola, vec![output.into()]));
        }

        match case.task {
            Task::Mud | Task::Gyafc => {
                s.meteor = Some(meteor(&out_doc, &in_doc));
                if let Some(sc) = &self.sidecar {
                    let pair = vec![(case.input_text.clone(), output.to_string())];
                    s.mis = sc.one_score(ScorerKind::ScoreMis, ScorerRequest::pairs(ScorerKind::ScoreMis, pair));
                    s.sbert_sim = sc
                        .embed3(ScorerKind::EmbedSbert, output, &case.input_text, output)
                        .and_then(|[o, i, _]| cosine(&o, &i).ok())
                        .map(|c| c.clamp(0.0, 1.0));
                    if case.task == Task::Gyafc {
                        s.formality_prob = sc.one_score(
                            ScorerKind::ClassifyFormality,
                            ScorerRequest::texts(ScorerKind::ClassifyFormality, vec![output.into()]),
                        );
                    }
                }
            }
            Task::Cochrane => {
                s.fkgl = fkgl(&out_doc).ok();
                s.ari = ari(&out_doc).ok();
                let refs: Vec<Document> = case.gold_refs.iter().flatten().map(Document::new).collect();
                if let Some(gold) = refs.first() {
                    s.rouge1 = Some(rouge_n(&out_doc, gold, 1));
                    s.rouge2 = Some(rouge_n(&out_doc, gold, 2));
                    s.rouge_l = Some(rouge_l(&out_doc, gold));
                }
                s.bleu = bleu(&out_doc, &refs).ok();
                s.sari = sari(&in_doc, &out_doc, &refs).ok();
            }
        }
        Some(s)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::biber::{extract_features, fit_mda, MdaFitConfig};
    use crate::mock::{MockConfig, MockServer};
    use crate::pipeline::{run_naive, CaseMeta, System};
    use crate::providers::SidecarConfig;

    fn case(task: Task) -> TransferCase {
        TransferCase {
            id: "c".into(),
            task,
            input_text: "i think u r right lol. we should go".into(),
            style_exemplar: "The committee has reviewed the proposal. It is approved.".into(),
            gold_refs: Some(vec!["I believe you are correct. We should go.".into()]),
            meta: CaseMeta::default(),
        }
    }

    fn model(catalog: &FeatureCatalog) -> MdaModel {
        let texts = [
            "i think u r right lol",
            "The committee has reviewed the proposal.",
            "we should totally go, it's gonna be fun!",
            "It is therefore recommended that the results be published.",
            "Honestly I don't know what you mean.",
            "Patients were randomized to two groups in the trial.",
        ];
        let fvs: Vec<_> = texts.iter().map(|t| extract_features(&Document::new(*t), catalog).unwrap()).collect();
        fit_mda(&fvs, catalog, &MdaFitConfig::default()).unwrap()
    }

    #[test]
    fn target_baseline_overlaps_exactly() {
        let catalog = FeatureCatalog::builtin();
        let m = model(&catalog);
        let ctx = ScoreContext {
            catalog: &catalog,
            model: Some(&m),
            sidecar: None,
        };
        let c = case(Task::Mud);
        let s = ctx.score(&c, &run_naive(&c, System::Target, 0).unwrap()).unwrap();
        assert_eq!((s.overlap_rouge1, s.overlap_rouge2, s.overlap_rouge_l), (1.0, 1.0, 1.0));
        assert!((s.towards_biber.unwrap() - 1.0).abs() < 1e-12);
        assert!(s.mis.is_none() && s.away_luar.is_none() && s.fkgl.is_none());

        let s = ctx.score(&c, &run_naive(&c, System::Copy, 0).unwrap()).unwrap();
        assert!(s.away_biber.unwrap().abs() < 1e-12);
        assert_eq!(s.meteor, Some(meteor(&Document::new(&c.input_text), &Document::new(&c.input_text))));
    }

    #[test]
    fn cochrane_reads_gold_for_rouge() {
        let catalog = FeatureCatalog::builtin();
        let ctx = ScoreContext {
            catalog: &catalog,
            model: None,
            sidecar: None,
        };
        let c = case(Task::Cochrane);
        let s = ctx.score(&c, &run_naive(&c, System::Gold, 0).unwrap()).unwrap();
        assert_eq!((s.rouge1, s.rouge2, s.rouge_l), (Some(1.0), Some(1.0), Some(1.0)));
        assert_eq!(s.bleu, Some(1.0));
        assert!(s.fkgl.is_some() && s.sari.is_some() && s.meteor.is_none());
        assert!(s.towards_biber.is_none());
    }

    #[test]
    fn sidecar_fields_fill_when_available() {
        let server = MockServer::start(MockConfig::default()).unwrap();
        let client = SidecarClient::new(&SidecarConfig {
            base_url: server.url(),
            ..Default::default()
        });
        let catalog = FeatureCatalog::builtin();
        let ctx = ScoreContext {
            catalog: &catalog,
            model: None,
            sidecar: Sidecar::connect(&client),
        };
        let c = case(Task::Gyafc);
        let s = ctx.score(&c, &run_naive(&c, System::Copy, 0).unwrap()).unwrap();
        assert!(s.away_luar.unwrap().abs() < 1e-9 && s.away_stylecav.unwrap().abs() < 1e-9);
        assert!((s.sbert_sim.unwrap() - 1.0).abs() < 1e-9);
        assert!(s.mis.is_some() && s.cola.is_some() && s.formality_prob.is_some());
    }

    #[test]
    fn unreachable_sidecar_scores_locally() {
        let client = SidecarClient::new(&SidecarConfig {
            base_url: "http://127.0.0.1:9".into(),
            retry_base_ms: 0,
            ..Default::default()
        });
        assert!(Sidecar::connect(&client).is_none());
    }
}
