//! Question prose templates, used to train the type classifier and to give
//! generated questions a textual form.

use rand::seq::{IndexedRandom, SliceRandom};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::question::{Question, QuestionType};

/// Phrasings per type. Slots: `{A}`, `{B}`, `{C}`, `{W}` for stem words,
/// `{L}` for the candidate list and `{L1}`, `{L2}` for the two lists.
pub fn phrasings(qtype: QuestionType) -> &'static [&'static str] {
    match qtype {
        QuestionType::AnalogyI => &[
            "{A} is to {B} as {C} is to? {L}",
            "{A} is to {B} as {C} is to which word? {L}",
            "Complete the analogy: {A} is to {B} as {C} is to ... {L}",
            "{A} : {B} :: {C} : ? Choose from {L}",
            "Which word completes the analogy {A} is to {B} as {C} is to? {L}",
            "Fill in the blank: {A} relates to {B} in the same way that {C} relates to what? {L}",
        ],
        QuestionType::AnalogyII => &[
            "Identify two words (one from each set of brackets) that form a connection (analogy) when paired with the words in capitals: {A} ({L1}), {C} ({L2}).",
            "Choose one word from each set of brackets to complete the analogy: {A} is to ({L1}) as {C} is to ({L2}).",
            "Pick two words, one from each group, that pair with {A} and {C} in the same way: ({L1}) ({L2})",
            "Find the pair of words, one from each set of brackets, that forms an analogy with the words in capitals: {A} ({L1}), {C} ({L2}).",
            "{A} is to ({L1}) as {C} is to ({L2}). Select one word from each bracket.",
            "Which two words, one from each set of brackets, best complete the connection? {A} ({L1}) {C} ({L2})",
        ],
        QuestionType::Classification => &[
            "Which is the odd one out? {L}",
            "Which word does not belong with the others? {L}",
            "Identify the word that is different from the rest: {L}",
            "Find the odd one out: {L}",
            "One of these words is not like the others. Which one? {L}",
            "Which word is the odd one out in this group? {L}",
        ],
        QuestionType::Synonym => &[
            "Which word is closest to {W}? {L}",
            "Which word is closest in meaning to {W}? {L}",
            "Choose the word that means the same as {W}: {L}",
            "Which word is most similar in meaning to {W}? {L}",
            "Select the word with the same meaning as {W}: {L}",
            "{W} most nearly means which word? {L}",
        ],
        QuestionType::Antonym => &[
            "Which word is most opposite to {W}? {L}",
            "Which word is most opposite in meaning to {W}? {L}",
            "Choose the word that means the opposite of {W}: {L}",
            "Select the word with the opposite meaning to {W}: {L}",
            "Which word is the opposite of {W}? {L}",
            "{W} is most nearly opposite to which word? {L}",
        ],
    }
}

const NUMERALS: [&str; 5] = ["i", "ii", "iii", "iv", "v"];

/// Filler words for classifier training questions.
pub const TRAIN_WORDS: &[&str] = &[
    "brave", "timid", "lamp", "river", "glad", "sorrow", "quick", "slow", "hammer", "nail", "cloud", "stone",
    "bright", "dim", "ancient", "modern", "tiny", "huge", "silent", "noisy", "wealth", "poverty", "eager",
    "reluctant", "garden", "forest", "candle", "window", "mirror", "bottle", "ladder", "feather", "copper",
    "silver", "velvet", "marble", "thunder", "meadow", "canyon", "valley", "harbor", "castle", "bridge",
    "tunnel", "engine", "wheel", "anchor", "compass", "lantern", "basket",
];

/// Disjoint filler words for held-out questions.
pub const HELD_OUT_WORDS: &[&str] = &[
    "humble", "proud", "fragile", "sturdy", "vivid", "pale", "generous", "stingy", "calm", "frantic",
    "pencil", "blanket", "saddle", "kettle", "orchard", "glacier", "desert", "jungle", "prairie", "summit",
    "shallow", "deep", "rough", "smooth", "hollow", "solid", "gentle", "harsh", "loyal", "fickle", "cabin",
    "palace", "violet", "scarlet", "crimson", "amber", "falcon", "sparrow", "walrus", "badger", "cedar",
    "maple", "willow", "thistle", "pebble", "boulder", "puddle", "canal", "lagoon", "quarry",
];

fn list_text<R: Rng + ?Sized>(words: &[String], rng: &mut R) -> String {
    if rng.random_bool(0.5) {
        words
            .iter()
            .enumerate()
            .map(|(i, w)| format!("({}) {w}", NUMERALS.get(i).copied().unwrap_or("vi")))
            .collect::<Vec<_>>()
            .join(", ")
            + "."
    } else {
        words.join(", ")
    }
}

fn shout<R: Rng + ?Sized>(word: &str, rng: &mut R) -> String {
    if rng.random_bool(0.5) {
        word.to_uppercase()
    } else {
        word.to_string()
    }
}

/// Renders a structured question with the given phrasing.
pub fn render_with<R: Rng + ?Sized>(question: &Question, qtype: QuestionType, phrasing: &str, rng: &mut R) -> String {
    let mut stem = |i: usize| question.stem.get(i).map(|w| shout(w, rng)).unwrap_or_default();
    let (a, b, c) = match qtype {
        QuestionType::AnalogyII => (stem(0), String::new(), stem(1)),
        _ => (stem(0), stem(1), stem(2)),
    };
    let lists = question.candidate_lists();
    let l = lists.first().map(|l| list_text(l, rng)).unwrap_or_default();
    let l1 = lists.first().map(|l| l.join(", ")).unwrap_or_default();
    let l2 = lists.get(1).map(|l| l.join(", ")).unwrap_or_default();
    phrasing
        .replace("{A}", &a)
        .replace("{B}", &b)
        .replace("{C}", &c)
        .replace("{W}", &a)
        .replace("{L1}", &l1)
        .replace("{L2}", &l2)
        .replace("{L}", &l)
}

/// Renders with a random phrasing of `qtype`.
pub fn render<R: Rng + ?Sized>(question: &Question, qtype: QuestionType, rng: &mut R) -> String {
    let phrasing = *phrasings(qtype).choose(rng).expect("every type has phrasings");
    render_with(question, qtype, phrasing, rng)
}

/// Text the classifier sees: the question's own text when present, otherwise
/// a rendering under its labelled type, otherwise the bare words.
pub fn question_text(question: &Question) -> String {
    if let Some(t) = &question.text {
        return t.clone();
    }
    match question.qtype {
        Some(q) => {
            let mut rng = ChaCha8Rng::seed_from_u64(0);
            render_with(question, q, phrasings(q)[0], &mut rng)
        }
        None => {
            let mut words = question.stem.clone();
            for list in question.candidate_lists() {
                words.extend(list.iter().cloned());
            }
            words.join(" ")
        }
    }
}

fn filler_question<R: Rng + ?Sized>(qtype: QuestionType, pool: &[&str], rng: &mut R) -> Question {
    let mut words: Vec<String> = pool.choose_multiple(rng, 13).map(|w| w.to_string()).collect();
    words.shuffle(rng);
    let (stem, candidates) = match qtype {
        QuestionType::AnalogyI => (words[..3].to_vec(), vec![words[3..8].to_vec()]),
        QuestionType::AnalogyII => (words[..2].to_vec(), vec![words[2..5].to_vec(), words[5..8].to_vec()]),
        QuestionType::Classification => (Vec::new(), vec![words[..5].to_vec()]),
        QuestionType::Synonym | QuestionType::Antonym => (words[..1].to_vec(), vec![words[1..6].to_vec()]),
    };
    Question {
        id: String::new(),
        qtype: Some(qtype),
        text: None,
        stem,
        candidates: crate::question::Candidates(candidates),
        answer: None,
    }
}

/// `per_type` questions for every type with rendered text, cycling through
/// the phrasings and filling slots from `pool`.
pub fn labeled_questions(per_type: usize, pool: &[&str], seed: u64) -> Vec<Question> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::with_capacity(per_type * 5);
    for qtype in QuestionType::ALL {
        let ps = phrasings(qtype);
        for i in 0..per_type {
            let mut q = filler_question(qtype, pool, &mut rng);
            q.id = format!("{}-{}", qtype.name().to_lowercase(), i + 1);
            q.text = Some(render_with(&q, qtype, ps[i % ps.len()], &mut rng));
            out.push(q);
        }
    }
    out
}

/// Text and type of labelled questions.
pub fn labeled_texts(questions: &[Question]) -> Vec<(String, QuestionType)> {
    questions
        .iter()
        .filter_map(|q| q.qtype.map(|t| (question_text(q), t)))
        .collect()
}

/// 30 questions per type from the training word pool.
pub fn classifier_training_set(seed: u64) -> Vec<Question> {
    labeled_questions(30, TRAIN_WORDS, seed)
}

/// 20 questions per type from the disjoint held-out word pool.
pub fn classifier_held_out_set(seed: u64) -> Vec<Question> {
    labeled_questions(20, HELD_OUT_WORDS, seed ^ 0xA5A5_A5A5)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn renders_every_slot() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for qtype in QuestionType::ALL {
            let q = filler_question(qtype, TRAIN_WORDS, &mut rng);
            for p in phrasings(qtype) {
                let text = render_with(&q, qtype, p, &mut rng);
                assert!(!text.contains('{'), "{text}");
            }
        }
    }

    #[test]
    fn sets_are_balanced_and_reproducible() {
        let a = classifier_training_set(3);
        assert_eq!(a.len(), 150);
        for qtype in QuestionType::ALL {
            assert_eq!(a.iter().filter(|q| q.qtype == Some(qtype)).count(), 30);
        }
        assert_eq!(a, classifier_training_set(3));
        assert_eq!(classifier_held_out_set(3).len(), 100);
        assert!(TRAIN_WORDS.iter().all(|w| !HELD_OUT_WORDS.contains(w)));
    }
}
