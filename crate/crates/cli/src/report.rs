use serde::Serialize;
use serde_json::Value;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Pass,
    Fail,
    /// Computed and reported, with nothing to pass or fail.
    Info,
}

#[derive(Clone, Debug, Serialize)]
pub struct Stage {
    pub name: String,
    pub verdict: Verdict,
    pub data: Value,
    /// Earlier stages whose results this verdict relies on.
    pub citations: Vec<String>,
}

/// A fact the report relies on without computing it.
#[derive(Clone, Debug, Serialize)]
pub struct RecordedAssumption {
    pub name: String,
    pub statement: String,
    pub used_by: Vec<String>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Outcome {
    Passed,
    VerificationFailed,
    PreconditionFailed,
}

#[derive(Clone, Debug, Serialize)]
pub struct Report {
    pub mode: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub banner: Option<String>,
    pub config: Value,
    pub stages: Vec<Stage>,
    pub assumptions: Vec<RecordedAssumption>,
    pub outcome: Outcome,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub stopped_at: Option<String>,
}

impl Report {
    pub fn new(mode: &str, banner: Option<String>, config: Value) -> Self {
        Report {
            mode: mode.into(),
            banner,
            config,
            stages: Vec::new(),
            assumptions: Vec::new(),
            outcome: Outcome::Passed,
            stopped_at: None,
        }
    }

    /// Appends a stage. Citations must name stages that already ran.
    pub fn push(&mut self, name: &str, verdict: Verdict, data: impl Serialize, citations: &[&str]) {
        for c in citations {
            assert!(self.has_stage(c), "stage {name} cites {c}, which has not run");
        }
        self.stages.push(Stage {
            name: name.into(),
            verdict,
            data: serde_json::to_value(data).expect("stage data serializes"),
            citations: citations.iter().map(|c| c.to_string()).collect(),
        });
        if verdict == Verdict::Fail && self.outcome == Outcome::Passed {
            self.outcome = Outcome::VerificationFailed;
            self.stopped_at = Some(name.into());
        }
    }

    /// Records a failed precondition and stops.
    pub fn refuse(&mut self, name: &str, reason: String, citations: &[&str]) {
        self.push(name, Verdict::Fail, serde_json::json!({ "error": reason }), citations);
        self.outcome = Outcome::PreconditionFailed;
    }

    pub fn assume(&mut self, name: &str, statement: &str, used_by: &[&str]) {
        self.assumptions.push(RecordedAssumption {
            name: name.into(),
            statement: statement.into(),
            used_by: used_by.iter().map(|s| s.to_string()).collect(),
        });
    }

    pub fn has_stage(&self, name: &str) -> bool {
        self.stages.iter().any(|s| s.name == name)
    }

    pub fn stage(&self, name: &str) -> Option<&Stage> {
        self.stages.iter().find(|s| s.name == name)
    }

    pub fn halted(&self) -> bool {
        self.outcome != Outcome::Passed
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("plain data serializes")
    }
}
