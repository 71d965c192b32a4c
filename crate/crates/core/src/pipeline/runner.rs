use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use super::case::{System, Task, TransferCase};
use super::parse::{is_suspect, parse_descriptors, trim_response};
use super::templates::{PromptTemplate, RG, RG_CONTRASTIVE, SIMPLE, STYLL};
use super::PipelineError;
use crate::datasets::rng::{derive_seed, rng, uniform_below};
use crate::providers::{ChatClient, ChatRequest};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct StepOutput {
    pub prompt: String,
    pub response: String,
}

/// One system's rewrite of one case with every intermediate artifact.
///
/// Runs carry no timestamps, so replaying a case against the response cache
/// reproduces the record byte for byte.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PipelineRun {
    pub case_id: String,
    pub task: Task,
    pub system: System,
    pub step_outputs: Vec<StepOutput>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub descriptors: Option<Vec<String>>,
    pub output_text: String,
    pub degraded: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
    /// Some response repeated its own prompt verbatim.
    #[serde(default)]
    pub suspect: bool,
    /// Degraded because the chat endpoint failed rather than because of
    /// what it returned.
    #[serde(default, skip_serializing_if = "std::ops::Not::not")]
    pub provider_failure: bool,
}

impl PipelineRun {
    fn new(case: &TransferCase, system: System) -> Self {
        PipelineRun {
            case_id: case.id.clone(),
            task: case.task,
            system,
            step_outputs: Vec::new(),
            descriptors: None,
            output_text: String::new(),
            degraded: false,
            error: None,
            suspect: false,
            provider_failure: false,
        }
    }

    fn degrade(mut self, why: impl Into<String>) -> Self {
        self.degraded = true;
        self.output_text.clear();
        self.error = Some(why.into());
        self
    }
}

/// Copy, Target or Gold. Gold draws one reference uniformly with a stream
/// derived from `seed` and the case id, so the choice does not depend on
/// execution order.
pub fn run_naive(case: &TransferCase, system: System, seed: u64) -> Result<PipelineRun, PipelineError> {
    let mut run = PipelineRun::new(case, system);
    run.output_text = match system {
        System::Copy => case.input_text.clone(),
        System::Target => case.style_exemplar.clone(),
        System::Gold => {
            let refs = case
                .gold_refs
                .as_ref()
                .filter(|r| !r.is_empty())
                .ok_or_else(|| PipelineError::NoGoldReference(case.id.clone()))?;
            let mut r = rng(derive_seed(seed, &format!("gold/{}", case.id)));
            refs[uniform_below(&mut r, refs.len())].clone()
        }
        other => return Err(PipelineError::NotNaive(other)),
    };
    Ok(run)
}

/// Prompting systems over a chat client. Each prompt goes out as a single
/// user message with default decoding.
pub struct Pipeline<'a> {
    chat: &'a ChatClient,
    model: String,
    seed: u64,
}

type Bindings<'b> = BTreeMap<&'static str, &'b str>;

impl<'a> Pipeline<'a> {
    pub fn new(chat: &'a ChatClient, model: impl Into<String>, seed: u64) -> Self {
        Pipeline {
            chat,
            model: model.into(),
            seed,
        }
    }

    pub fn run(&self, case: &TransferCase, system: System) -> Result<PipelineRun, PipelineError> {
        Ok(match system {
            System::Simple => self.run_simple(case),
            System::Styll => self.run_styll(case),
            System::Rg => self.run_rg(case),
            System::RgContrastive => self.run_rg_contrastive(case),
            naive => return run_naive(case, naive, self.seed),
        })
    }

    /// Renders, sends and records one step. `Err` carries the degraded run.
    fn step(&self, run: &mut PipelineRun, t: &PromptTemplate, b: &Bindings) -> Result<String, String> {
        let prompt = t.render(b).map_err(|e| e.to_string())?;
        let response = match self.chat.chat(&ChatRequest::user(self.model.clone(), prompt.clone())) {
            Ok(r) => r,
            Err(e) => {
                run.provider_failure = true;
                return Err(format!("step {}: {e}", t.step));
            }
        };
        run.suspect |= is_suspect(&response, &prompt);
        run.step_outputs.push(StepOutput {
            prompt,
            response: response.clone(),
        });
        Ok(response)
    }

    fn finish(mut run: PipelineRun, response: &str) -> PipelineRun {
        let out = trim_response(response);
        if out.is_empty() {
            return run.degrade("rewrite is empty after trimming");
        }
        run.output_text = out;
        run
    }

    pub fn run_simple(&self, case: &TransferCase) -> PipelineRun {
        let mut run = PipelineRun::new(case, System::Simple);
        let b = Bindings::from([("input_text", case.input_text.as_str()), ("target_text", case.style_exemplar.as_str())]);
        match self.step(&mut run, &SIMPLE, &b) {
            Ok(resp) => Self::finish(run, &resp),
            Err(e) => run.degrade(e),
        }
    }

    /// Shared three-step shape: a first-step text, a descriptor listing
    /// (given the first-step text as `analysis_key` when set), then a rewrite
    /// of `rewrite_source`, or of the first-step text when that is `None`.
    #[allow(clippy::too_many_arguments)]
    fn three_step(
        &self,
        case: &TransferCase,
        system: System,
        templates: &[PromptTemplate; 3],
        first: Bindings,
        analysis_key: Option<&'static str>,
        rewrite_key: &'static str,
        rewrite_source: Option<&str>,
    ) -> PipelineRun {
        let mut run = PipelineRun::new(case, system);
        let first_out = match self.step(&mut run, &templates[0], &first) {
            Ok(r) => r.trim().to_string(),
            Err(e) => return run.degrade(e),
        };
        let mut b2 = Bindings::from([("target_text", case.style_exemplar.as_str())]);
        if let Some(key) = analysis_key {
            b2.insert(key, first_out.as_str());
        }
        let listing = match self.step(&mut run, &templates[1], &b2) {
            Ok(r) => r,
            Err(e) => return run.degrade(e),
        };
        let descriptors = parse_descriptors(&listing);
        run.descriptors = Some(descriptors.clone());
        if descriptors.is_empty() {
            return run.degrade("no style descriptors in step 2 response");
        }
        let joined = descriptors.join(", ");
        let source = rewrite_source.unwrap_or(&first_out);
        let b3 = Bindings::from([(rewrite_key, source), ("style_descriptors", joined.as_str())]);
        match self.step(&mut run, &templates[2], &b3) {
            Ok(resp) => Self::finish(run, &resp),
            Err(e) => run.degrade(e),
        }
    }

    pub fn run_styll(&self, case: &TransferCase) -> PipelineRun {
        self.three_step(
            case,
            System::Styll,
            &STYLL,
            Bindings::from([("source_text", case.input_text.as_str())]),
            None,
            "neutral_paraphrase",
            None,
        )
    }

    pub fn run_rg(&self, case: &TransferCase) -> PipelineRun {
        self.three_step(
            case,
            System::Rg,
            &RG,
            Bindings::from([("target_text", case.style_exemplar.as_str())]),
            Some("style_analysis"),
            "source_text",
            Some(&case.input_text),
        )
    }

    pub fn run_rg_contrastive(&self, case: &TransferCase) -> PipelineRun {
        self.three_step(
            case,
            System::RgContrastive,
            &RG_CONTRASTIVE,
            Bindings::from([
                ("source_text", case.input_text.as_str()),
                ("target_text", case.style_exemplar.as_str()),
            ]),
            Some("style_comparisons"),
            "source_text",
            Some(&case.input_text),
        )
    }
}
