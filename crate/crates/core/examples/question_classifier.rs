//! Train the one-vs-rest question-type classifier on templated questions and
//! type a few free-text questions.

use verbaliq::classifier::{classify, train_ovr, Hyper};
use verbaliq::harness::templates::{classifier_held_out_set, classifier_training_set, labeled_texts};

fn main() -> verbaliq::Result<()> {
    let train = labeled_texts(&classifier_training_set(1));
    let model = train_ovr(&train, Hyper::default())?;
    let held_out = labeled_texts(&classifier_held_out_set(1));
    let right = held_out.iter().filter(|(t, q)| classify(t, &model).map(|p| p.qtype == *q).unwrap_or(false)).count();
    println!("held-out {right}/{}", held_out.len());

    for text in [
        "Isotherm is to temperature as isobar is to? (i) atmosphere, (ii) wind, (iii) pressure, (iv) latitude, (v) current.",
        "Identify the two words that best complete the analogy: chapter is to (i) book (ii) verse (iii) read as act is to (i) stage (ii) audience (iii) play.",
        "Which is the odd one out? (i) calm, (ii) quiet, (iii) relaxed, (iv) serene, (v) unruffled.",
        "Which word is closest to IRRATIONAL? (i) intransigent, (ii) irredeemable, (iii) unsafe, (iv) lost, (v) nonsensical.",
        "Which word is most opposite to MUSICAL? (i) discordant, (ii) loud, (iii) lyrical, (iv) verbal, (v) euphonious.",
    ] {
        let p = classify(text, &model)?;
        println!("{:<15} {}", format!("{:?}", p.qtype), &text[..60]);
    }
    Ok(())
}
