use std::collections::BTreeMap;

use super::case::System;
use super::PipelineError;

/// A prompt body with `{name}` placeholders.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PromptTemplate {
    pub system: System,
    pub step: u8,
    pub body: &'static str,
}

pub const PLACEHOLDERS: [&str; 7] = [
    "source_text",
    "target_text",
    "neutral_paraphrase",
    "style_comparisons",
    "style_analysis",
    "style_descriptors",
    "input_text",
];

const REWRITE_TO_BE_MORE: &str = "Here is a text: {source_text} Rewrite the text to be more {style_descriptors}. Strictly output only the rewritten text without any other content.";

pub const SIMPLE: PromptTemplate = PromptTemplate {
    system: System::Simple,
    step: 1,
    body: "Here is the target text {target_text} Rewrite {input_text} into the authorship style of the target text. Strictly output only the rewritten text without any other content.",
};

pub const STYLL: [PromptTemplate; 3] = [
    PromptTemplate {
        system: System::Styll,
        step: 1,
        body: "Source text: Passage: {source_text} Paraphrase the passage in a simple neutral style.",
    },
    PromptTemplate {
        system: System::Styll,
        step: 2,
        body: "Passage: {target_text} List some adjectives, comma-separated, that describe the writing style of the author of this passage. Strictly output only the style descriptors without any other content.",
    },
    PromptTemplate {
        system: System::Styll,
        step: 3,
        body: "Here is a text: {neutral_paraphrase} Here is a rewrite of the text that is more {style_descriptors}. Strictly output only the rewritten text without any other content.",
    },
];

pub const RG_CONTRASTIVE: [PromptTemplate; 3] = [
    PromptTemplate {
        system: System::RgContrastive,
        step: 1,
        body: "Source text: {source_text} Target text: {target_text} How does the target text differ from the source text in authorship style in terms of dimensions of register variation according to Douglas Biber?",
    },
    PromptTemplate {
        system: System::RgContrastive,
        step: 2,
        body: "Style comparisons: {style_comparisons} List some adjectives, comma-separated, that describe the writing style of the author of the target text. Strictly output only the style descriptors without any other content.",
    },
    PromptTemplate {
        system: System::RgContrastive,
        step: 3,
        body: REWRITE_TO_BE_MORE,
    },
];

pub const RG: [PromptTemplate; 3] = [
    PromptTemplate {
        system: System::Rg,
        step: 1,
        body: "Passage: {target_text} Analyze the authorship style of this passage in terms of dimensions of register variation according to Douglas Biber.",
    },
    PromptTemplate {
        system: System::Rg,
        step: 2,
        body: "Style analysis: {style_analysis} List some adjectives, comma-separated, that describe the writing style of the author of the target text. Strictly output only the style descriptors without any other content.",
    },
    PromptTemplate {
        system: System::Rg,
        step: 3,
        body: REWRITE_TO_BE_MORE,
    },
];

/// All templates of a prompting system, in step order.
pub fn templates(system: System) -> &'static [PromptTemplate] {
    match system {
        System::Simple => std::slice::from_ref(&SIMPLE),
        System::Styll => &STYLL,
        System::Rg => &RG,
        System::RgContrastive => &RG_CONTRASTIVE,
        System::Copy | System::Target | System::Gold => &[],
    }
}

enum Piece<'a> {
    Text(&'a str),
    Slot(&'a str),
}

/// Splits a body into literal text and `{name}` slots. Braces that do not
/// enclose a known placeholder name are literal.
fn pieces(body: &str) -> Vec<Piece<'_>> {
    let mut out = Vec::new();
    let mut rest = body;
    let mut lit_start = 0;
    let mut offset = 0;
    while let Some(open) = rest.find('{') {
        let after = &rest[open + 1..];
        match after.find('}') {
            Some(close) if PLACEHOLDERS.contains(&&after[..close]) => {
                let abs = offset + open;
                out.push(Piece::Text(&body[lit_start..abs]));
                out.push(Piece::Slot(&after[..close]));
                offset = abs + close + 2;
                lit_start = offset;
                rest = &body[offset..];
            }
            _ => {
                offset += open + 1;
                rest = &body[offset..];
            }
        }
    }
    out.push(Piece::Text(&body[lit_start..]));
    out
}

impl PromptTemplate {
    /// Placeholder names in order of appearance.
    pub fn placeholders(&self) -> Vec<&'static str> {
        pieces(self.body)
            .into_iter()
            .filter_map(|p| match p {
                Piece::Slot(s) => Some(s),
                Piece::Text(_) => None,
            })
            .collect()
    }

    /// Substitutes every placeholder in one pass; bound values are inserted
    /// verbatim and never re-scanned.
    pub fn render(&self, bindings: &BTreeMap<&str, &str>) -> Result<String, PipelineError> {
        let mut out = String::with_capacity(self.body.len());
        for p in pieces(self.body) {
            match p {
                Piece::Text(t) => out.push_str(t),
                Piece::Slot(name) => out.push_str(
                    bindings
                        .get(name)
                        .ok_or_else(|| PipelineError::MissingBinding(name.to_string()))?,
                ),
            }
        }
        Ok(out)
    }

    /// Recovers bindings from a rendered prompt by matching the literal text
    /// between placeholders (first occurrence). Returns `None` if `rendered`
    /// does not fit.
    pub fn extract(&self, rendered: &str) -> Option<BTreeMap<String, String>> {
        let ps = pieces(self.body);
        let mut out = BTreeMap::new();
        let mut rest = rendered;
        let mut i = 0;
        while i < ps.len() {
            match ps[i] {
                Piece::Text(t) => rest = rest.strip_prefix(t)?,
                Piece::Slot(name) => {
                    let next = match ps.get(i + 1) {
                        Some(Piece::Text(t)) => *t,
                        _ => "",
                    };
                    let end = if next.is_empty() {
                        rest.len()
                    } else {
                        rest.find(next)?
                    };
                    out.insert(name.to_string(), rest[..end].to_string());
                    rest = &rest[end..];
                }
            }
            i += 1;
        }
        rest.is_empty().then_some(out)
    }
}

/// Renders `template` against named bindings.
pub fn render_prompt(template: &PromptTemplate, bindings: &BTreeMap<&str, &str>) -> Result<String, PipelineError> {
    template.render(bindings)
}
