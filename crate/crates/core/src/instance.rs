//! A compiled determinacy instance: views grouped as good/bad/ugly, the query `Q0`,
//! the lifted constraint set and the colored `Q0` automata.

use std::sync::Arc;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::automata::{parse_regex, Alphabet, AutomataError, Color, Nfa, Regex};
use crate::constraints::{ConstraintError, ConstraintSet};
use crate::graphs::{GraphError, LabeledGraph, VertexId};
use crate::rpq;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum InstanceError {
    #[error(transparent)]
    Automata(#[from] AutomataError),
    #[error(transparent)]
    Constraint(#[from] ConstraintError),
    #[error("malformed instance file: {0}")]
    Malformed(String),
}

/// View languages in declaration order. Constraint ids follow good, then bad, then ugly.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Views {
    pub good: Vec<Regex>,
    pub bad: Vec<Regex>,
    pub ugly: Vec<Regex>,
}

impl Views {
    pub fn all(&self) -> impl Iterator<Item = &Regex> {
        self.good.iter().chain(&self.bad).chain(&self.ugly)
    }

    pub fn len(&self) -> usize {
        self.good.len() + self.bad.len() + self.ugly.len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// `good3`, `bad1`, ... for the `i`-th view overall (1-based within its group).
    pub fn name(&self, i: usize) -> String {
        let (g, b) = (self.good.len(), self.bad.len());
        if i < g {
            format!("good{}", i + 1)
        } else if i < g + b {
            format!("bad{}", i - g + 1)
        } else {
            format!("ugly{}", i - g - b + 1)
        }
    }
}

/// On-disk form shared by the reduction output and hand-written instances.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct InstanceFile {
    pub alphabet: Vec<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub q_start: Option<String>,
    pub q0: String,
    pub views: ViewsFile,
}

#[derive(Debug, Clone, Default, Serialize, Deserialize)]
pub struct ViewsFile {
    #[serde(default)]
    pub good: Vec<String>,
    #[serde(default)]
    pub bad: Vec<String>,
    #[serde(default)]
    pub ugly: Vec<String>,
}

#[derive(Debug, Clone)]
pub struct Instance {
    alphabet: Arc<Alphabet>,
    views: Views,
    q_start: Option<Regex>,
    q0: Regex,
    constraints: ConstraintSet,
    q0_nfa: Nfa,
    green_q0: Nfa,
    red_q0: Nfa,
}

impl Instance {
    /// `alphabet` is the base (uncolored) alphabet; all languages are over it.
    pub fn new(
        alphabet: Alphabet,
        views: Views,
        q_start: Option<Regex>,
        q0: Regex,
    ) -> Result<Instance, InstanceError> {
        let all: Vec<Regex> = views.all().cloned().collect();
        let constraints = ConstraintSet::from_views(&all, &alphabet)?;
        let colored = constraints.alphabet().clone();
        let alphabet = Arc::new(alphabet);
        let q0_nfa = Nfa::compile(&q0, alphabet.clone())?;
        let green_q0 = Nfa::compile(&q0.recolor(Color::Green), colored.clone())?;
        let red_q0 = Nfa::compile(&q0.recolor(Color::Red), colored)?;
        Ok(Instance {
            alphabet,
            views,
            q_start,
            q0,
            constraints,
            q0_nfa,
            green_q0,
            red_q0,
        })
    }

    pub fn from_file(file: &InstanceFile) -> Result<Instance, InstanceError> {
        let alphabet = Alphabet::from_tokens(&file.alphabet)?;
        let parse_all = |texts: &[String]| {
            texts
                .iter()
                .map(|t| parse_regex(t, &alphabet))
                .collect::<Result<Vec<_>, _>>()
        };
        let views = Views {
            good: parse_all(&file.views.good)?,
            bad: parse_all(&file.views.bad)?,
            ugly: parse_all(&file.views.ugly)?,
        };
        let q_start = file
            .q_start
            .as_deref()
            .map(|t| parse_regex(t, &alphabet))
            .transpose()?;
        let q0 = parse_regex(&file.q0, &alphabet)?;
        Instance::new(alphabet, views, q_start, q0)
    }

    pub fn from_json(text: &str) -> Result<Instance, InstanceError> {
        let file: InstanceFile =
            serde_json::from_str(text).map_err(|e| InstanceError::Malformed(e.to_string()))?;
        Instance::from_file(&file)
    }

    pub fn to_file(&self) -> InstanceFile {
        let a = &self.alphabet;
        let texts = |rs: &[Regex]| rs.iter().map(|r| r.to_text(a)).collect();
        InstanceFile {
            alphabet: a.symbols().iter().map(|s| s.name().to_string()).collect(),
            q_start: self.q_start.as_ref().map(|r| r.to_text(a)),
            q0: self.q0.to_text(a),
            views: ViewsFile {
                good: texts(&self.views.good),
                bad: texts(&self.views.bad),
                ugly: texts(&self.views.ugly),
            },
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&self.to_file()).expect("plain data")
    }

    pub fn alphabet(&self) -> &Arc<Alphabet> {
        &self.alphabet
    }

    pub fn colored_alphabet(&self) -> &Arc<Alphabet> {
        self.constraints.alphabet()
    }

    pub fn views(&self) -> &Views {
        &self.views
    }

    pub fn q_start(&self) -> Option<&Regex> {
        self.q_start.as_ref()
    }

    pub fn q0(&self) -> &Regex {
        &self.q0
    }

    pub fn constraints(&self) -> &ConstraintSet {
        &self.constraints
    }

    /// `Q0` over the base alphabet; its words are the possible initial chains.
    pub fn q0_nfa(&self) -> &Nfa {
        &self.q0_nfa
    }

    pub fn green_q0(&self) -> &Nfa {
        &self.green_q0
    }

    pub fn red_q0(&self) -> &Nfa {
        &self.red_q0
    }

    /// `good3->` for the forward arrow of the third good view, `good3<-` for the backward one.
    pub fn constraint_name(&self, id: usize) -> String {
        let arrow = if id.is_multiple_of(2) { "->" } else { "<-" };
        format!("{}{}", self.views.name(id / 2), arrow)
    }

    /// Whether `R(Q0)(a, b)` holds, i.e. the play is lost.
    pub fn is_lost(&self, g: &LabeledGraph, a: VertexId, b: VertexId) -> Result<bool, GraphError> {
        rpq::holds(&self.red_q0, g, a, b)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const TOY: &str = r#"{
        "alphabet": ["alpha", "beta", "omega"],
        "q0": "alpha omega + beta beta omega",
        "views": {"good": ["alpha + beta", "omega"], "ugly": ["beta beta omega"]}
    }"#;

    #[test]
    fn hand_written_instance_loads() {
        let inst = Instance::from_json(TOY).unwrap();
        assert_eq!(inst.views().len(), 3);
        assert_eq!(inst.constraints().len(), 6);
        assert_eq!(inst.constraint_name(5), "ugly1<-");
        assert_eq!(inst.constraint_name(2), "good2->");
        assert!(inst.q_start().is_none());
        assert_eq!(inst.red_q0().shortest_word().unwrap().to_string(), "R:alpha R:omega");
    }

    #[test]
    fn file_round_trip() {
        let inst = Instance::from_json(TOY).unwrap();
        let again = Instance::from_json(&inst.to_json()).unwrap();
        assert_eq!(again.views(), inst.views());
        assert_eq!(again.q0(), inst.q0());
        assert_eq!(again.to_json(), inst.to_json());
    }

    #[test]
    fn malformed_files_are_reported() {
        assert!(matches!(Instance::from_json("{"), Err(InstanceError::Malformed(_))));
        let bad = r#"{"alphabet":["alpha"],"q0":"gamma","views":{}}"#;
        assert!(matches!(
            Instance::from_json(bad),
            Err(InstanceError::Automata(AutomataError::UnknownSymbol { .. }))
        ));
    }
}
