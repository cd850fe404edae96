//! A synthetic topical world with planted structure: a generated corpus,
//! relation triples between words of unrelated topics, an optional
//! pseudoword made by merging two words, and a question generator whose
//! gold answers follow from the planted structure.

use std::collections::{BTreeSet, HashSet};

use rand::seq::{IndexedRandom, SliceRandom};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::embedding::SenseKey;
use crate::error::{Error, Result};
use crate::joint::{RawTriple, ANTONYM, SYNONYM};
use crate::question::{Answer, Candidates, Question, QuestionType};
use crate::senses::{DictionaryEntry, Sense, SenseInventory};

use super::templates;

pub const TOPICS: &[(&str, &[&str])] = &[
    ("food", &[
        "apple", "bread", "cheese", "butter", "soup", "rice", "pepper", "onion", "garlic", "honey", "sugar", "flour",
        "noodle", "salad", "kitchen", "oven", "recipe", "dinner", "lunch", "breakfast", "carrot", "potato", "tomato", "cream",
    ]),
    ("music", &[
        "piano", "guitar", "violin", "drum", "melody", "rhythm", "chord", "song", "choir", "concert", "orchestra", "tune",
        "harmony", "lyric", "singer", "band", "trumpet", "flute", "opera", "tempo", "chorus", "note", "album", "jazz",
    ]),
    ("weather", &[
        "rain", "snow", "wind", "storm", "cloud", "thunder", "lightning", "fog", "frost", "drizzle", "hail", "breeze",
        "forecast", "humidity", "sunshine", "rainbow", "blizzard", "drought", "climate", "temperature", "pressure",
        "monsoon", "gust", "mist",
    ]),
    ("ocean", &[
        "wave", "tide", "shore", "beach", "coral", "reef", "whale", "shark", "dolphin", "sailor", "harbor", "ship",
        "anchor", "island", "current", "salt", "sand", "seaweed", "lighthouse", "voyage", "fish", "crab", "pearl", "lagoon",
    ]),
    ("sport", &[
        "soccer", "tennis", "goal", "referee", "stadium", "athlete", "coach", "team", "score", "match", "league",
        "trophy", "racket", "ball", "sprint", "marathon", "umpire", "tournament", "player", "season", "jersey", "pitch",
        "medal", "helmet",
    ]),
    ("law", &[
        "court", "judge", "jury", "lawyer", "verdict", "trial", "statute", "crime", "evidence", "witness", "appeal",
        "sentence", "prison", "attorney", "justice", "contract", "lawsuit", "testimony", "prosecutor", "defendant",
        "bail", "parole", "warrant", "plaintiff",
    ]),
    ("medicine", &[
        "doctor", "nurse", "hospital", "patient", "surgery", "fever", "vaccine", "clinic", "disease", "diagnosis",
        "pill", "therapy", "symptom", "infection", "injury", "bandage", "surgeon", "pharmacy", "virus", "wound",
        "recovery", "medicine", "illness", "ambulance",
    ]),
    ("space", &[
        "planet", "star", "galaxy", "orbit", "rocket", "astronaut", "comet", "moon", "telescope", "asteroid", "nebula",
        "satellite", "cosmos", "meteor", "launch", "gravity", "universe", "eclipse", "crater", "shuttle", "spacecraft",
        "solar", "lunar", "observatory",
    ]),
    ("farm", &[
        "tractor", "barn", "cow", "sheep", "harvest", "wheat", "farmer", "plow", "hay", "pig", "goat", "chicken",
        "field", "crop", "orchard", "pasture", "fence", "seed", "cattle", "stable", "corn", "dairy", "horse", "soil",
    ]),
    ("school", &[
        "teacher", "student", "lesson", "classroom", "homework", "exam", "pencil", "textbook", "library", "principal",
        "grade", "semester", "lecture", "essay", "chalk", "desk", "tutor", "quiz", "diploma", "curriculum", "notebook",
        "campus", "pupil", "professor",
    ]),
    ("finance", &[
        "bank", "money", "loan", "interest", "credit", "debt", "investor", "stock", "market", "profit", "budget", "tax",
        "income", "salary", "wealth", "currency", "mortgage", "dividend", "inflation", "fund", "savings", "cash",
        "account", "price",
    ]),
    ("war", &[
        "soldier", "army", "battle", "weapon", "general", "tank", "enemy", "fortress", "sword", "cannon", "siege",
        "troop", "victory", "defeat", "invasion", "rifle", "navy", "armor", "trench", "ally", "bomb", "retreat",
        "campaign", "spy",
    ]),
];

pub const FUNCTION_WORDS: &[&str] = &[
    "the", "of", "and", "a", "to", "in", "is", "was", "for", "on", "with", "as", "by", "at", "from", "it", "that",
    "this", "are", "be", "an", "or", "his", "her", "their", "its", "they", "we", "he", "she", "very", "often",
    "then", "there", "some", "many", "which", "when", "also", "near",
];

/// Names of the planted relations used for analogy questions.
pub const ANALOGY_RELATIONS: &[&str] = &["linked", "paired", "bonded", "coupled"];

/// Reuse limit for a planted pair across synonym or antonym questions.
pub const MAX_PAIR_REUSE: usize = 3;

/// Question counts in the proportions of the published test set.
pub const TABLE2_COUNTS: [usize; 5] = [50, 29, 53, 51, 49];

#[derive(Debug, Clone, PartialEq)]
pub struct SynthConfig {
    /// Number of topics used, at most `TOPICS.len()`.
    pub topics: usize,
    pub tokens: usize,
    /// Probability that a token is a topic word rather than a function word.
    pub topic_rate: f64,
    pub synonym_pairs: usize,
    pub antonym_pairs: usize,
    pub analogy_relations: usize,
    pub pairs_per_analogy_relation: usize,
    /// Merge two words of different topics into one pseudoword.
    pub pseudoword: bool,
    /// Occurrences kept of each merged word.
    pub pseudoword_occurrences: usize,
    pub seed: u64,
}

impl Default for SynthConfig {
    fn default() -> Self {
        SynthConfig {
            topics: TOPICS.len(),
            tokens: 300_000,
            topic_rate: 0.6,
            synonym_pairs: 20,
            antonym_pairs: 20,
            analogy_relations: 2,
            pairs_per_analogy_relation: 10,
            pseudoword: false,
            pseudoword_occurrences: 500,
            seed: 1,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Pseudoword {
    pub word: String,
    /// The merged words; origin `i` in [`SyntheticCorpus::origins`] is `parts[i]`.
    pub parts: [String; 2],
    pub topics: [usize; 2],
}

#[derive(Debug, Clone, PartialEq)]
pub struct SyntheticWorld {
    pub config: SynthConfig,
    /// `(name, words)` per topic in use.
    pub topics: Vec<(String, Vec<String>)>,
    pub triples: Vec<RawTriple>,
    pub pseudoword: Option<Pseudoword>,
    pub dictionary: SenseInventory,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SyntheticCorpus {
    pub tokens: Vec<String>,
    /// For pseudoword positions, the index of the original word.
    pub origins: Vec<Option<u8>>,
}

fn topic_of(topics: &[(String, Vec<String>)], word: &str) -> Option<usize> {
    topics.iter().position(|(_, ws)| ws.iter().any(|w| w == word))
}

impl SyntheticWorld {
    pub fn new(config: SynthConfig) -> Result<Self> {
        if config.topics < 2 || config.topics > TOPICS.len() {
            return Err(Error::InvalidConfig(format!("topics must lie in 2..={}", TOPICS.len())));
        }
        if !(0.0..=1.0).contains(&config.topic_rate) {
            return Err(Error::InvalidConfig("topic rate must lie in [0, 1]".into()));
        }
        if config.analogy_relations > ANALOGY_RELATIONS.len() {
            return Err(Error::InvalidConfig(format!(
                "at most {} analogy relations",
                ANALOGY_RELATIONS.len()
            )));
        }
        let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
        let topics: Vec<(String, Vec<String>)> = TOPICS[..config.topics]
            .iter()
            .map(|(n, ws)| (n.to_string(), ws.iter().map(|w| w.to_string()).collect()))
            .collect();

        let mut taken: HashSet<String> = HashSet::new();
        let pseudoword = if config.pseudoword {
            let (t0, t1) = (0, 1);
            let parts = [topics[t0].1[0].clone(), topics[t1].1[0].clone()];
            taken.extend(parts.iter().cloned());
            Some(Pseudoword {
                word: format!("{}{}", parts[0], parts[1]),
                parts,
                topics: [t0, t1],
            })
        } else {
            None
        };

        let mut free: Vec<Vec<String>> = topics
            .iter()
            .map(|(_, ws)| ws.iter().filter(|w| !taken.contains(*w)).cloned().collect())
            .collect();
        for ws in &mut free {
            ws.shuffle(&mut rng);
        }
        let mut draw_pair = |rng: &mut ChaCha8Rng| -> Result<(String, String)> {
            let nonempty: Vec<usize> = (0..free.len()).filter(|&t| !free[t].is_empty()).collect();
            if nonempty.len() < 2 {
                return Err(Error::InsufficientStructure("not enough topic words for the planted pairs".into()));
            }
            let pick: Vec<usize> = nonempty.choose_multiple(rng, 2).copied().collect();
            let h = free[pick[0]].pop().expect("nonempty");
            let t = free[pick[1]].pop().expect("nonempty");
            Ok((h, t))
        };
        let key = |w: &str| SenseKey::new(w, 1);
        let mut triples = Vec::new();
        let mut plant = |rng: &mut ChaCha8Rng, relation: &str, n: usize| -> Result<()> {
            for _ in 0..n {
                let (h, t) = draw_pair(rng)?;
                triples.push(RawTriple {
                    head: key(&h),
                    relation: relation.to_string(),
                    tail: key(&t),
                });
            }
            Ok(())
        };
        plant(&mut rng, SYNONYM, config.synonym_pairs)?;
        plant(&mut rng, ANTONYM, config.antonym_pairs)?;
        for name in &ANALOGY_RELATIONS[..config.analogy_relations] {
            plant(&mut rng, name, config.pairs_per_analogy_relation)?;
        }

        let mut entries = Vec::new();
        if let Some(p) = &pseudoword {
            let senses = (0..2)
                .map(|i| {
                    let words = &topics[p.topics[i]].1;
                    let gloss: Vec<&str> = words[1..].choose_multiple(&mut rng, 8).map(String::as_str).collect();
                    let example: Vec<&str> = words[1..].choose_multiple(&mut rng, 5).map(String::as_str).collect();
                    Sense {
                        id: (i + 1).to_string(),
                        gloss: format!("a thing of {}", gloss.join(" and ")),
                        examples: vec![format!("the {} near the {}", example.join(" and "), p.parts[i])],
                    }
                })
                .collect();
            entries.push(DictionaryEntry {
                word: p.word.clone(),
                senses,
            });
        }
        let dictionary = SenseInventory::from_entries(entries)?;
        Ok(SyntheticWorld {
            config,
            topics,
            triples,
            pseudoword,
            dictionary,
        })
    }

    /// Words that take part in a planted triple or the pseudoword.
    pub fn planted_words(&self) -> BTreeSet<String> {
        let mut out: BTreeSet<String> = self
            .triples
            .iter()
            .flat_map(|t| [t.head.word.clone(), t.tail.word.clone()])
            .collect();
        if let Some(p) = &self.pseudoword {
            out.extend(p.parts.iter().cloned());
        }
        out
    }

    /// Topic words outside all planted structure.
    pub fn unrelated_words(&self) -> Vec<String> {
        let planted = self.planted_words();
        self.topics
            .iter()
            .flat_map(|(_, ws)| ws.iter())
            .filter(|w| !planted.contains(*w))
            .cloned()
            .collect()
    }

    pub fn triples_of(&self, relation: &str) -> Vec<(String, String)> {
        self.triples
            .iter()
            .filter(|t| t.relation == relation)
            .map(|t| (t.head.word.clone(), t.tail.word.clone()))
            .collect()
    }

    /// Paragraphs of topic words and function words; each paragraph keeps to
    /// one topic.
    pub fn generate_corpus(&self) -> SyntheticCorpus {
        let cfg = &self.config;
        let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed ^ 0xC0_4B05);
        let mut tokens = Vec::with_capacity(cfg.tokens);
        let mut topic_of_token: Vec<usize> = Vec::with_capacity(cfg.tokens);
        while tokens.len() < cfg.tokens {
            let t = rng.random_range(0..self.topics.len());
            let sentences = rng.random_range(3..=6);
            for _ in 0..sentences {
                let len = rng.random_range(8..=14);
                for _ in 0..len {
                    let w = if rng.random_bool(cfg.topic_rate) {
                        self.topics[t].1.choose(&mut rng).expect("topics are nonempty")
                    } else {
                        *FUNCTION_WORDS.choose(&mut rng).expect("function words are nonempty")
                    };
                    tokens.push(w.to_string());
                    topic_of_token.push(t);
                }
            }
        }
        tokens.truncate(cfg.tokens);
        let mut origins = vec![None; tokens.len()];
        if let Some(p) = &self.pseudoword {
            for (i, part) in p.parts.iter().enumerate() {
                let topic = &self.topics[p.topics[i]].1;
                let mut kept = 0;
                for (pos, tok) in tokens.iter_mut().enumerate() {
                    if tok != part {
                        continue;
                    }
                    if kept < cfg.pseudoword_occurrences {
                        *tok = p.word.clone();
                        origins[pos] = Some(i as u8);
                        kept += 1;
                    } else {
                        loop {
                            let w = topic.choose(&mut rng).expect("topics are nonempty");
                            if !p.parts.contains(w) {
                                *tok = w.clone();
                                break;
                            }
                        }
                    }
                }
            }
        }
        SyntheticCorpus { tokens, origins }
    }

    /// Questions with gold answers from the planted structure, in type order.
    pub fn generate_questions(&self, counts: [usize; 5], seed: u64) -> Result<Vec<Question>> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let pool = self.unrelated_words();
        let shortfall = self.shortfall(counts, &pool);
        if !shortfall.is_empty() {
            let parts: Vec<String> = shortfall.iter().map(|(q, n)| format!("{q} short by {n}")).collect();
            return Err(Error::InsufficientStructure(parts.join(", ")));
        }
        let mut out = Vec::new();
        for qtype in QuestionType::ALL {
            let n = counts[qtype.index()];
            let made = match qtype {
                QuestionType::AnalogyI | QuestionType::AnalogyII => self.analogies(qtype, n, &pool, &mut rng),
                QuestionType::Classification => self.odd_one_out(n, &mut rng),
                QuestionType::Synonym => self.pair_questions(qtype, SYNONYM, n, &pool, &mut rng),
                QuestionType::Antonym => self.pair_questions(qtype, ANTONYM, n, &pool, &mut rng),
            };
            for (i, mut q) in made.into_iter().enumerate() {
                q.id = format!("{}-{}", qtype.name().to_lowercase(), i + 1);
                q.text = Some(templates::render(&q, qtype, &mut rng));
                out.push(q);
            }
        }
        Ok(out)
    }

    fn quadruples(&self) -> Vec<(String, String, String, String)> {
        let mut out = Vec::new();
        for name in &ANALOGY_RELATIONS[..self.config.analogy_relations] {
            let pairs = self.triples_of(name);
            for (i, (a, b)) in pairs.iter().enumerate() {
                for (j, (c, d)) in pairs.iter().enumerate() {
                    if i != j {
                        out.push((a.clone(), b.clone(), c.clone(), d.clone()));
                    }
                }
            }
        }
        out
    }

    fn shortfall(&self, counts: [usize; 5], pool: &[String]) -> Vec<(QuestionType, usize)> {
        let quads = self.quadruples().len();
        let usable_topics = self.topics.iter().filter(|(_, ws)| ws.iter().filter(|w| pool.contains(w)).count() >= 4);
        let odd = if usable_topics.count() >= 2 && pool.len() >= 5 { usize::MAX } else { 0 };
        let capacity = [
            if pool.len() >= 4 { quads } else { 0 },
            if pool.len() >= 4 { quads } else { 0 },
            odd,
            if pool.len() >= 4 { self.triples_of(SYNONYM).len() * MAX_PAIR_REUSE } else { 0 },
            if pool.len() >= 4 { self.triples_of(ANTONYM).len() * MAX_PAIR_REUSE } else { 0 },
        ];
        QuestionType::ALL
            .into_iter()
            .filter(|q| counts[q.index()] > capacity[q.index()])
            .map(|q| (q, counts[q.index()] - capacity[q.index()]))
            .collect()
    }

    fn distractors<R: Rng + ?Sized>(pool: &[String], exclude: &[&String], n: usize, rng: &mut R) -> Vec<String> {
        let allowed: Vec<&String> = pool.iter().filter(|w| !exclude.contains(w)).collect();
        allowed.choose_multiple(rng, n).map(|w| (*w).clone()).collect()
    }

    fn analogies<R: Rng + ?Sized>(&self, qtype: QuestionType, n: usize, pool: &[String], rng: &mut R) -> Vec<Question> {
        let mut quads = self.quadruples();
        quads.shuffle(rng);
        quads
            .into_iter()
            .take(n)
            .map(|(a, b, c, d)| {
                let exclude = [&a, &b, &c, &d];
                if qtype == QuestionType::AnalogyI {
                    let mut list = Self::distractors(pool, &exclude, 4, rng);
                    list.push(d.clone());
                    list.shuffle(rng);
                    question(qtype, vec![a, b, c], vec![list], vec![d])
                } else {
                    let mut extra = Self::distractors(pool, &exclude, 4, rng);
                    let mut first = extra.split_off(2);
                    let mut second = extra;
                    first.push(b.clone());
                    second.push(d.clone());
                    first.shuffle(rng);
                    second.shuffle(rng);
                    question(qtype, vec![a, c], vec![first, second], vec![b, d])
                }
            })
            .collect()
    }

    fn odd_one_out<R: Rng + ?Sized>(&self, n: usize, rng: &mut R) -> Vec<Question> {
        let planted = self.planted_words();
        let free: Vec<Vec<&String>> = self
            .topics
            .iter()
            .map(|(_, ws)| ws.iter().filter(|w| !planted.contains(*w)).collect())
            .collect();
        let usable: Vec<usize> = (0..free.len()).filter(|&t| free[t].len() >= 4).collect();
        (0..n)
            .map(|_| {
                let pick: Vec<usize> = usable.choose_multiple(rng, 2).copied().collect();
                let mut list: Vec<String> = free[pick[0]].choose_multiple(rng, 4).map(|w| (*w).clone()).collect();
                let odd = (*free[pick[1]].choose(rng).expect("usable topics are nonempty")).clone();
                list.push(odd.clone());
                list.shuffle(rng);
                question(QuestionType::Classification, Vec::new(), vec![list], vec![odd])
            })
            .collect()
    }

    fn pair_questions<R: Rng + ?Sized>(
        &self,
        qtype: QuestionType,
        relation: &str,
        n: usize,
        pool: &[String],
        rng: &mut R,
    ) -> Vec<Question> {
        let mut pairs = self.triples_of(relation);
        pairs.shuffle(rng);
        (0..n)
            .map(|i| {
                let (h, t) = &pairs[i % pairs.len()];
                let mut list = Self::distractors(pool, &[h, t], 4, rng);
                list.push(t.clone());
                list.shuffle(rng);
                question(qtype, vec![h.clone()], vec![list], vec![t.clone()])
            })
            .collect()
    }
}

fn question(qtype: QuestionType, stem: Vec<String>, lists: Vec<Vec<String>>, answer: Vec<String>) -> Question {
    Question {
        id: String::new(),
        qtype: Some(qtype),
        text: None,
        stem,
        candidates: Candidates(lists),
        answer: Some(Answer(answer)),
    }
}

/// Fraction of tagged pseudoword occurrences whose sense agrees with the
/// majority origin of that sense.
pub fn sense_purity(origins: &[Option<u8>], senses: &[u32]) -> f64 {
    let mut table: std::collections::BTreeMap<u32, [usize; 2]> = Default::default();
    for (o, &s) in origins.iter().zip(senses) {
        if let Some(o) = o {
            table.entry(s).or_default()[*o as usize] += 1;
        }
    }
    let total: usize = table.values().map(|c| c[0] + c[1]).sum();
    if total == 0 {
        return 0.0;
    }
    table.values().map(|c| c[0].max(c[1])).sum::<usize>() as f64 / total as f64
}

/// Topic index of a word, if it is a topic word of this world.
pub fn word_topic(world: &SyntheticWorld, word: &str) -> Option<usize> {
    topic_of(&world.topics, word)
}
