//! Verbal question records.
//!
//! Questions are stored as JSON Lines. `candidates` is either one list or a
//! list of two lists (Analogy-II); `answer` is a word or, for Analogy-II, a
//! pair of words. The stem depends on the type:
//!
//! | type           | stem        | candidates |
//! |----------------|-------------|------------|
//! | AnalogyI       | `[A, B, C]` | one list   |
//! | AnalogyII      | `[A, C]`    | two lists  |
//! | Classification | `[]`        | one list   |
//! | Synonym        | `[w]`       | one list   |
//! | Antonym        | `[w]`       | one list   |

use std::fmt;
use std::path::Path;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::jsonl::{read_jsonl, write_jsonl};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum QuestionType {
    #[serde(alias = "analogy-i", alias = "analogy1")]
    AnalogyI,
    #[serde(alias = "analogy-ii", alias = "analogy2")]
    AnalogyII,
    #[serde(alias = "classification")]
    Classification,
    #[serde(alias = "synonym")]
    Synonym,
    #[serde(alias = "antonym")]
    Antonym,
}

impl QuestionType {
    /// Fixed order, also used to break score ties.
    pub const ALL: [QuestionType; 5] = [
        QuestionType::AnalogyI,
        QuestionType::AnalogyII,
        QuestionType::Classification,
        QuestionType::Synonym,
        QuestionType::Antonym,
    ];

    pub fn index(self) -> usize {
        self as usize
    }

    pub fn name(self) -> &'static str {
        match self {
            QuestionType::AnalogyI => "AnalogyI",
            QuestionType::AnalogyII => "AnalogyII",
            QuestionType::Classification => "Classification",
            QuestionType::Synonym => "Synonym",
            QuestionType::Antonym => "Antonym",
        }
    }
}

impl fmt::Display for QuestionType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for QuestionType {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let key: String = s.chars().filter(|c| c.is_alphanumeric()).collect::<String>().to_lowercase();
        Ok(match key.as_str() {
            "analogyi" | "analogy1" => QuestionType::AnalogyI,
            "analogyii" | "analogy2" => QuestionType::AnalogyII,
            "classification" => QuestionType::Classification,
            "synonym" => QuestionType::Synonym,
            "antonym" => QuestionType::Antonym,
            _ => return Err(Error::InvalidConfig(format!("unknown question type `{s}`"))),
        })
    }
}

#[derive(Serialize, Deserialize)]
#[serde(untagged)]
enum ListsRepr {
    One(Vec<String>),
    Many(Vec<Vec<String>>),
}

/// One or more candidate lists.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(from = "ListsRepr", into = "ListsRepr")]
pub struct Candidates(pub Vec<Vec<String>>);

impl From<ListsRepr> for Candidates {
    fn from(r: ListsRepr) -> Self {
        match r {
            ListsRepr::One(v) => Candidates(vec![v]),
            ListsRepr::Many(v) => Candidates(v),
        }
    }
}

impl From<Candidates> for ListsRepr {
    fn from(c: Candidates) -> Self {
        match <[Vec<String>; 1]>::try_from(c.0) {
            Ok([one]) => ListsRepr::One(one),
            Err(many) => ListsRepr::Many(many),
        }
    }
}

#[derive(Serialize, Deserialize)]
#[serde(untagged)]
enum AnswerRepr {
    One(String),
    Many(Vec<String>),
}

/// Gold or predicted answer: one word per candidate list.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(from = "AnswerRepr", into = "AnswerRepr")]
pub struct Answer(pub Vec<String>);

impl From<AnswerRepr> for Answer {
    fn from(r: AnswerRepr) -> Self {
        match r {
            AnswerRepr::One(w) => Answer(vec![w]),
            AnswerRepr::Many(v) => Answer(v),
        }
    }
}

impl From<Answer> for AnswerRepr {
    fn from(a: Answer) -> Self {
        match <[String; 1]>::try_from(a.0) {
            Ok([one]) => AnswerRepr::One(one),
            Err(many) => AnswerRepr::Many(many),
        }
    }
}

impl Answer {
    pub fn single(word: impl Into<String>) -> Self {
        Answer(vec![word.into()])
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Question {
    #[serde(deserialize_with = "crate::jsonl::string_or_number")]
    pub id: String,
    #[serde(rename = "type", default, skip_serializing_if = "Option::is_none")]
    pub qtype: Option<QuestionType>,
    /// Raw question prose, as seen by the type classifier.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub text: Option<String>,
    #[serde(default)]
    pub stem: Vec<String>,
    pub candidates: Candidates,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub answer: Option<Answer>,
}

impl Question {
    pub fn candidate_lists(&self) -> &[Vec<String>] {
        &self.candidates.0
    }

    /// Candidate lists are nonempty and gold answers are drawn from them.
    pub fn validate(&self) -> Result<()> {
        let lists = self.candidate_lists();
        if lists.is_empty() || lists.iter().any(Vec::is_empty) {
            return Err(Error::InvalidConfig(format!("question {}: empty candidate list", self.id)));
        }
        if let Some(Answer(gold)) = &self.answer {
            if gold.len() != lists.len() {
                return Err(Error::InvalidConfig(format!(
                    "question {}: {} answer words for {} candidate lists",
                    self.id,
                    gold.len(),
                    lists.len()
                )));
            }
            for (g, list) in gold.iter().zip(lists) {
                if !list.contains(g) {
                    return Err(Error::InvalidConfig(format!(
                        "question {}: answer `{g}` is not a candidate",
                        self.id
                    )));
                }
            }
        }
        Ok(())
    }
}

pub fn load_questions(path: &Path) -> Result<Vec<Question>> {
    let qs: Vec<Question> = read_jsonl(path)?;
    for q in &qs {
        q.validate()?;
    }
    Ok(qs)
}

pub fn save_questions(questions: &[Question], path: &Path) -> Result<()> {
    write_jsonl(questions, path)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_one_and_two_lists() {
        let q: Question = serde_json::from_str(
            r#"{"id":1,"type":"analogy-ii","stem":["chapter","act"],"candidates":[["book","verse","read"],["stage","audience","play"]],"answer":["book","play"]}"#,
        )
        .unwrap();
        assert_eq!(q.id, "1");
        assert_eq!(q.qtype, Some(QuestionType::AnalogyII));
        assert_eq!(q.candidate_lists().len(), 2);
        q.validate().unwrap();

        let q: Question = serde_json::from_str(
            r#"{"id":"s1","type":"Synonym","stem":["irrational"],"candidates":["lost","nonsensical"],"answer":"nonsensical"}"#,
        )
        .unwrap();
        assert_eq!(q.answer, Some(Answer::single("nonsensical")));
        let back = serde_json::to_string(&q).unwrap();
        assert!(back.contains(r#""candidates":["lost","nonsensical"]"#));
        assert!(back.contains(r#""answer":"nonsensical""#));
    }

    #[test]
    fn rejects_foreign_answers() {
        let q: Question =
            serde_json::from_str(r#"{"id":"x","candidates":["a","b"],"answer":"c"}"#).unwrap();
        assert!(q.validate().is_err());
        let q: Question = serde_json::from_str(r#"{"id":"x","candidates":[]}"#).unwrap();
        assert!(q.validate().is_err());
    }

    #[test]
    fn type_names() {
        for t in QuestionType::ALL {
            assert_eq!(t.name().parse::<QuestionType>().unwrap(), t);
        }
        assert_eq!("analogy-ii".parse::<QuestionType>().unwrap(), QuestionType::AnalogyII);
        assert!("riddle".parse::<QuestionType>().is_err());
    }
}
