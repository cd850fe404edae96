//! A hand-built embedding whose geometry encodes the gold answers of the
//! five example questions from the published question taxonomy.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::embedding::{EmbeddingTable, SenseKey};
use crate::joint::{RelationModel, ANTONYM, SYNONYM};
use crate::question::{Answer, Candidates, Question, QuestionType};

pub const FIXTURE_DIM: usize = 8;

pub struct Table1Fixture {
    pub embeddings: EmbeddingTable,
    pub relations: RelationModel,
    pub questions: Vec<Question>,
}

fn words(ws: &[&str]) -> Vec<String> {
    ws.iter().map(|w| w.to_string()).collect()
}

fn question(id: &str, qtype: QuestionType, text: &str, stem: &[&str], lists: &[&[&str]], gold: &[&str]) -> Question {
    Question {
        id: id.to_string(),
        qtype: Some(qtype),
        text: Some(text.to_string()),
        stem: words(stem),
        candidates: Candidates(lists.iter().map(|l| words(l)).collect()),
        answer: Some(Answer(words(gold))),
    }
}

pub fn table1_questions() -> Vec<Question> {
    vec![
        question(
            "analogy-i",
            QuestionType::AnalogyI,
            "Isotherm is to temperature as isobar is to? (i) atmosphere, (ii) wind, (iii) pressure, (iv) latitude, (v) current.",
            &["isotherm", "temperature", "isobar"],
            &[&["atmosphere", "wind", "pressure", "latitude", "current"]],
            &["pressure"],
        ),
        question(
            "analogy-ii",
            QuestionType::AnalogyII,
            "Identify two words (one from each set of brackets) that form a connection (analogy) when paired with the words in capitals: CHAPTER (book, verse, read), ACT (stage, audience, play).",
            &["chapter", "act"],
            &[&["book", "verse", "read"], &["stage", "audience", "play"]],
            &["book", "play"],
        ),
        question(
            "classification",
            QuestionType::Classification,
            "Which is the odd one out? (i) calm, (ii) quiet, (iii) relaxed, (iv) serene, (v) unruffled.",
            &[],
            &[&["calm", "quiet", "relaxed", "serene", "unruffled"]],
            &["quiet"],
        ),
        question(
            "synonym",
            QuestionType::Synonym,
            "Which word is closest to IRRATIONAL? (i) intransigent, (ii) irredeemable, (iii) unsafe, (iv) lost, (v) nonsensical.",
            &["irrational"],
            &[&["intransigent", "irredeemable", "unsafe", "lost", "nonsensical"]],
            &["nonsensical"],
        ),
        question(
            "antonym",
            QuestionType::Antonym,
            "Which word is most opposite to MUSICAL? (i) discordant, (ii) loud, (iii) lyrical, (iv) verbal, (v) euphonious.",
            &["musical"],
            &[&["discordant", "loud", "lyrical", "verbal", "euphonious"]],
            &["discordant"],
        ),
    ]
}

/// Latent values whose bounded relation vector is `r`.
fn latent_for(r: &[f64]) -> Vec<f64> {
    r.iter().map(|v| 2.0 * v.atanh()).collect()
}

pub fn table1() -> Table1Fixture {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let mut random = |scale: f64| -> Vec<f64> { (0..FIXTURE_DIM).map(|_| scale * rng.random_range(-1.0..1.0)).collect() };
    let add = |a: &[f64], b: &[f64]| -> Vec<f64> { a.iter().zip(b).map(|(x, y)| x + y).collect() };
    let sub = |a: &[f64], b: &[f64]| -> Vec<f64> { a.iter().zip(b).map(|(x, y)| x - y).collect() };

    let r_syn = random(0.4);
    let r_ant = random(0.4);
    let relations = RelationModel::from_latent(
        vec![SYNONYM.to_string(), ANTONYM.to_string()],
        FIXTURE_DIM,
        [latent_for(&r_syn), latent_for(&r_ant)].concat(),
    )
    .expect("two relations of the fixture dimension");
    let r_syn = relations.vector_named(SYNONYM).expect("present");
    let r_ant = relations.vector_named(ANTONYM).expect("present");

    let mut rows: Vec<(&str, u32, Vec<f64>)> = Vec::new();
    for w in ["isotherm", "temperature", "isobar", "atmosphere", "wind", "latitude", "current"] {
        rows.push((w, 1, random(1.0)));
    }
    rows.push(("current", 2, random(1.0)));
    let offset = sub(&rows[1].2, &rows[0].2);
    rows.push(("pressure", 1, add(&rows[2].2, &offset)));

    for w in ["chapter", "act", "book", "verse", "read", "stage", "audience"] {
        rows.push((w, 1, random(1.0)));
    }
    let book = rows.iter().find(|r| r.0 == "book").expect("book").2.clone();
    let chapter = rows.iter().find(|r| r.0 == "chapter").expect("chapter").2.clone();
    let act = rows.iter().find(|r| r.0 == "act").expect("act").2.clone();
    rows.push(("play", 1, add(&sub(&book, &chapter), &act)));
    rows.push(("play", 2, random(1.0)));

    let mood = random(1.0);
    for w in ["calm", "relaxed", "serene", "unruffled"] {
        rows.push((w, 1, add(&mood, &random(0.05))));
    }
    rows.push(("quiet", 1, random(1.0)));

    rows.push(("irrational", 1, random(1.0)));
    for w in ["intransigent", "irredeemable", "unsafe", "lost"] {
        rows.push((w, 1, random(1.0)));
    }
    let irrational = rows.iter().find(|r| r.0 == "irrational").expect("irrational").2.clone();
    rows.push(("nonsensical", 1, add(&irrational, &r_syn)));

    rows.push(("musical", 1, random(1.0)));
    for w in ["loud", "lyrical", "verbal", "euphonious"] {
        rows.push((w, 1, random(1.0)));
    }
    let musical = rows.iter().find(|r| r.0 == "musical").expect("musical").2.clone();
    rows.push(("discordant", 1, add(&musical, &r_ant)));

    let mut embeddings = EmbeddingTable::new(FIXTURE_DIM);
    for (w, s, v) in rows {
        embeddings.push(SenseKey::new(w, s), &v).expect("fixture keys are unique");
    }
    Table1Fixture {
        embeddings,
        relations,
        questions: table1_questions(),
    }
}
