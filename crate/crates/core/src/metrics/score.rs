use serde::{Deserialize, Serialize};

/// Every metric recorded for one rewrite.
///
/// Optional fields are `None` when their scorer was unreachable or the metric
/// does not apply to the task. The Biber pair is optional only because a
/// rewrite without any words cannot be projected.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct ScoreVector {
    pub away_biber: Option<f64>,
    pub towards_biber: Option<f64>,
    pub away_stylecav: Option<f64>,
    pub towards_stylecav: Option<f64>,
    pub away_luar: Option<f64>,
    pub towards_luar: Option<f64>,
    pub mis: Option<f64>,
    pub sbert_sim: Option<f64>,
    pub meteor: Option<f64>,
    pub cola: Option<f64>,
    pub formality_prob: Option<f64>,
    pub fkgl: Option<f64>,
    pub ari: Option<f64>,
    pub rouge1: Option<f64>,
    pub rouge2: Option<f64>,
    #[serde(rename = "rougeL")]
    pub rouge_l: Option<f64>,
    pub bleu: Option<f64>,
    pub sari: Option<f64>,
    pub overlap_rouge1: f64,
    pub overlap_rouge2: f64,
    #[serde(rename = "overlap_rougeL")]
    pub overlap_rouge_l: f64,
}

impl ScoreVector {
    /// Column names in report order.
    pub const COLUMNS: [&'static str; 21] = [
        "away_biber",
        "towards_biber",
        "away_stylecav",
        "towards_stylecav",
        "away_luar",
        "towards_luar",
        "mis",
        "sbert_sim",
        "meteor",
        "cola",
        "formality_prob",
        "fkgl",
        "ari",
        "rouge1",
        "rouge2",
        "rougeL",
        "bleu",
        "sari",
        "overlap_rouge1",
        "overlap_rouge2",
        "overlap_rougeL",
    ];

    /// Values aligned with [`ScoreVector::COLUMNS`].
    pub fn values(&self) -> [Option<f64>; 21] {
        [
            self.away_biber,
            self.towards_biber,
            self.away_stylecav,
            self.towards_stylecav,
            self.away_luar,
            self.towards_luar,
            self.mis,
            self.sbert_sim,
            self.meteor,
            self.cola,
            self.formality_prob,
            self.fkgl,
            self.ari,
            self.rouge1,
            self.rouge2,
            self.rouge_l,
            self.bleu,
            self.sari,
            Some(self.overlap_rouge1),
            Some(self.overlap_rouge2),
            Some(self.overlap_rouge_l),
        ]
    }

    pub fn get(&self, column: &str) -> Option<f64> {
        let i = Self::COLUMNS.iter().position(|c| *c == column)?;
        self.values()[i]
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn json_names() {
        let s = ScoreVector {
            rouge_l: Some(0.5),
            overlap_rouge1: 1.0,
            ..Default::default()
        };
        let v = serde_json::to_value(&s).unwrap();
        assert_eq!(v["rougeL"], 0.5);
        assert_eq!(v["overlap_rougeL"], 0.0);
        let back: ScoreVector = serde_json::from_value(v).unwrap();
        assert_eq!(back, s);
        assert_eq!(s.get("rougeL"), Some(0.5));
        assert_eq!(s.get("mis"), None);
        assert_eq!(s.get("overlap_rouge1"), Some(1.0));
    }
}
