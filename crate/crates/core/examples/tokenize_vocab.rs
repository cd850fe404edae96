//! Normalize raw text, build a frequency-ordered vocabulary and the
//! window-as-document idf table.

use verbaliq::corpus::{build_vocabulary, normalize_tokenize, window_tfidf};

fn main() -> verbaliq::Result<()> {
    let raw = "The bill came to 42 dollars. The second bill came to 7 dollars, paid in cash.";
    let tokens = normalize_tokenize(raw);
    println!("tokens: {}", tokens.join(" "));

    let vocab = build_vocabulary(&tokens, 1)?;
    let ids = vocab.encode(&tokens);
    let tfidf = window_tfidf(&ids, &vocab, 2)?;
    println!("{} types, {} windows", vocab.len(), tfidf.windows());
    for (id, word) in vocab.words().iter().enumerate().take(8) {
        println!("{word:>8}  count {}  idf {:.3}", vocab.count(id as u32), tfidf.idf(id as u32).unwrap());
    }
    Ok(())
}
