//! Independent reference implementations used as test oracles.
#![allow(dead_code)]

use std::collections::BTreeMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use verbaliq::embedding::{EmbeddingTable, SenseKey};
use verbaliq::joint::{energy_gradient, margin, relational_energy, RelationModel, RelationTriple};
use verbaliq::skipgram::SkipGramModel;

/// Word -> sense vectors, ordered by sense.
pub type Senses = BTreeMap<String, Vec<Vec<f64>>>;

pub fn table_of(senses: &Senses) -> EmbeddingTable {
    let dim = senses.values().next().map(|v| v[0].len()).unwrap_or(1);
    let mut t = EmbeddingTable::new(dim);
    for (w, vs) in senses {
        for (i, v) in vs.iter().enumerate() {
            t.push(SenseKey::new(w.clone(), i as u32 + 1), v).unwrap();
        }
    }
    t
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    let mut s = 0.0;
    for i in 0..a.len() {
        s += a[i] * b[i];
    }
    s
}

pub fn cos(a: &[f64], b: &[f64]) -> f64 {
    let na = dot(a, a).sqrt();
    let nb = dot(b, b).sqrt();
    if na == 0.0 || nb == 0.0 {
        0.0
    } else {
        dot(a, b) / (na * nb)
    }
}

pub fn dist(a: &[f64], b: &[f64]) -> f64 {
    let mut s = 0.0;
    for i in 0..a.len() {
        s += (a[i] - b[i]) * (a[i] - b[i]);
    }
    s.sqrt()
}

/// Index of the first maximal score.
fn first_argmax(scores: &[f64]) -> usize {
    let mut best = 0;
    for i in 0..scores.len() {
        if scores[i] > scores[best] {
            best = i;
        }
    }
    best
}

fn first_argmin(scores: &[f64]) -> usize {
    let neg: Vec<f64> = scores.iter().map(|s| -s).collect();
    first_argmax(&neg)
}

pub fn oracle_analogy1(e: &Senses, a: &str, b: &str, c: &str, cands: &[String]) -> String {
    let mut scores = Vec::new();
    for d in cands {
        let mut best = f64::NEG_INFINITY;
        for va in &e[a] {
            for vb in &e[b] {
                for vc in &e[c] {
                    let q: Vec<f64> = (0..va.len()).map(|i| vb[i] - va[i] + vc[i]).collect();
                    for vd in &e[d] {
                        best = best.max(cos(&q, vd));
                    }
                }
            }
        }
        scores.push(best);
    }
    cands[first_argmax(&scores)].clone()
}

pub fn oracle_analogy2(e: &Senses, a: &str, c: &str, t1: &[String], t2: &[String]) -> (String, String) {
    let mut pairs = Vec::new();
    let mut scores = Vec::new();
    for b in t1 {
        for d in t2 {
            let mut best = f64::NEG_INFINITY;
            for va in &e[a] {
                for vb in &e[b.as_str()] {
                    for vc in &e[c] {
                        let q: Vec<f64> = (0..va.len()).map(|i| vb[i] - va[i] + vc[i]).collect();
                        for vd in &e[d.as_str()] {
                            best = best.max(cos(&q, vd));
                        }
                    }
                }
            }
            pairs.push((b.clone(), d.clone()));
            scores.push(best);
        }
    }
    pairs[first_argmax(&scores)].clone()
}

/// All sense-index combinations, built recursively.
fn combinations(sizes: &[usize]) -> Vec<Vec<usize>> {
    if sizes.is_empty() {
        return vec![Vec::new()];
    }
    let rest = combinations(&sizes[1..]);
    let mut out = Vec::new();
    for i in 0..sizes[0] {
        for r in &rest {
            let mut v = vec![i];
            v.extend(r);
            out.push(v);
        }
    }
    out
}

pub fn oracle_classification(e: &Senses, cands: &[String]) -> String {
    let vecs: Vec<&Vec<Vec<f64>>> = cands.iter().map(|w| &e[w.as_str()]).collect();
    let dim = vecs[0][0].len();
    let sizes: Vec<usize> = vecs.iter().map(|v| v.len()).collect();
    let means: Vec<Vec<f64>> = combinations(&sizes)
        .into_iter()
        .map(|combo| {
            let mut m = vec![0.0; dim];
            for (j, &i) in combo.iter().enumerate() {
                for k in 0..dim {
                    m[k] += vecs[j][i][k];
                }
            }
            m.iter().map(|x| x / cands.len() as f64).collect()
        })
        .collect();
    let scores: Vec<f64> = vecs
        .iter()
        .map(|senses| {
            let mut best = f64::INFINITY;
            for s in senses.iter() {
                for m in &means {
                    best = best.min(dist(s, m));
                }
            }
            best
        })
        .collect();
    cands[first_argmax(&scores)].clone()
}

/// `relation = None` is the distance solver; otherwise the offset solver,
/// with `absolute` selecting the elementwise-absolute offset.
pub fn oracle_pair(e: &Senses, q: &str, cands: &[String], relation: Option<&[f64]>, absolute: bool) -> String {
    let scores: Vec<f64> = cands
        .iter()
        .map(|w| {
            let mut best = f64::INFINITY;
            for vq in &e[q] {
                for vw in &e[w.as_str()] {
                    let s = match relation {
                        None => dist(vw, vq),
                        Some(r) => {
                            let off: Vec<f64> = (0..vq.len())
                                .map(|i| {
                                    let d = vw[i] - vq[i];
                                    (if absolute { d.abs() } else { d }) - r[i]
                                })
                                .collect();
                            dot(&off, &off).sqrt()
                        }
                    };
                    best = best.min(s);
                }
            }
            best
        })
        .collect();
    cands[first_argmin(&scores)].clone()
}

/// Step-by-step greedy matching: scan all remaining (row, col) pairs in
/// row-major order, take the strictly smallest, remove both, repeat.
pub fn oracle_greedy(dist: &[Vec<f64>]) -> Vec<usize> {
    let k = dist.len();
    let mut rows: Vec<usize> = (0..k).collect();
    let mut cols: Vec<usize> = (0..k).collect();
    let mut out = vec![0; k];
    while !rows.is_empty() {
        let (mut bi, mut bj) = (0, 0);
        for (ii, &i) in rows.iter().enumerate() {
            for (jj, &j) in cols.iter().enumerate() {
                if dist[i][j] < dist[rows[bi]][cols[bj]] {
                    bi = ii;
                    bj = jj;
                }
            }
        }
        out[rows[bi]] = cols[bj];
        rows.remove(bi);
        cols.remove(bj);
    }
    out
}

/// Random multi-sense fixture: `words` words with 1..=max_senses senses each.
pub fn random_senses(rng: &mut ChaCha8Rng, words: usize, max_senses: usize, dim: usize) -> Senses {
    let mut e = Senses::new();
    for i in 0..words {
        let k = rng.random_range(1..=max_senses);
        let vs = (0..k)
            .map(|_| (0..dim).map(|_| rng.random_range(-1.0..1.0)).collect())
            .collect();
        e.insert(format!("w{i}"), vs);
    }
    e
}

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Central finite-difference relative error between an analytic gradient and
/// `f`, measured as `‖g − g_fd‖ / max(‖g‖, ‖g_fd‖, 1e-12)`.
pub fn fd_relative_error(x: &[f64], analytic: &[f64], f: impl Fn(&[f64]) -> f64) -> f64 {
    let h = 1e-6;
    let mut xp = x.to_vec();
    let mut num = Vec::with_capacity(x.len());
    for i in 0..x.len() {
        let orig = xp[i];
        xp[i] = orig + h;
        let fp = f(&xp);
        xp[i] = orig - h;
        let fm = f(&xp);
        xp[i] = orig;
        num.push((fp - fm) / (2.0 * h));
    }
    let diff: f64 = analytic.iter().zip(&num).map(|(a, b)| (a - b) * (a - b)).sum::<f64>().sqrt();
    let na = dot(analytic, analytic).sqrt();
    let nn = dot(&num, &num).sqrt();
    diff / na.max(nn).max(1e-12)
}


fn uniform(rng: &mut ChaCha8Rng, n: usize, scale: f64) -> Vec<f64> {
    (0..n).map(|_| rng.random_range(-scale..scale)).collect()
}

/// One random skip-gram instance: relative error of the center and output
/// gradients of one pair loss against central differences.
pub fn skipgram_fd_instance(rng: &mut ChaCha8Rng, dim: usize) -> f64 {
    let units = 8;
    let input = uniform(rng, units * dim, 1.0);
    let output = uniform(rng, units * dim, 1.0);
    let center = rng.random_range(0..units as u32);
    let context = rng.random_range(0..units as u32);
    let negs: Vec<u32> = (0..rng.random_range(1..=3)).map(|_| rng.random_range(0..units as u32)).collect();
    let model = SkipGramModel::from_parts(dim, input.clone(), output.clone());
    let g = model.pair_gradient(center, context, &negs);

    // dense gradient over (input row of center, whole output table)
    let mut analytic = g.center.clone();
    let mut out_grad = vec![0.0; units * dim];
    for (u, gu) in &g.outputs {
        for k in 0..dim {
            out_grad[*u as usize * dim + k] += gu[k];
        }
    }
    analytic.extend(&out_grad);
    let c = center as usize * dim;
    let mut x = input[c..c + dim].to_vec();
    x.extend(&output);
    fd_relative_error(&x, &analytic, |x| {
        let mut inp = input.clone();
        inp[c..c + dim].copy_from_slice(&x[..dim]);
        SkipGramModel::from_parts(dim, inp, x[dim..].to_vec()).pair_loss(center, context, &negs)
    })
}

pub fn random_pairs(rng: &mut ChaCha8Rng, units: u32, relations: u32, n: usize) -> Vec<(RelationTriple, RelationTriple)> {
    let side = |rng: &mut ChaCha8Rng| {
        let head = rng.random_range(0..units);
        let mut tail = rng.random_range(0..units);
        while tail == head {
            tail = rng.random_range(0..units);
        }
        (head, tail)
    };
    (0..n)
        .map(|_| {
            let relation = rng.random_range(0..relations);
            let (h, t) = side(rng);
            let (h2, t2) = side(rng);
            (
                RelationTriple { head: h, relation, tail: t },
                RelationTriple { head: h2, relation, tail: t2 },
            )
        })
        .collect()
}

/// One random relational-energy instance; `None` when a margin sits within
/// 1e-6 of the hinge kink.
pub fn energy_fd_instance(rng: &mut ChaCha8Rng, dim: usize) -> Option<f64> {
    let (units, rels) = (6u32, 2u32);
    let emb = uniform(rng, units as usize * dim, 1.0);
    let latent = uniform(rng, rels as usize * dim, 2.0);
    let names = vec!["synonym".to_string(), "antonym".to_string()];
    let model = RelationModel::from_latent(names.clone(), dim, latent.clone()).unwrap();
    let pairs = random_pairs(rng, units, rels, 4);
    let gamma = rng.random_range(0.2..2.0);
    if pairs.iter().any(|(p, c)| margin(&emb, &model, p, c, gamma).abs() < 1e-6) {
        return None;
    }
    let g = energy_gradient(&pairs, &emb, &model, gamma);
    let mut analytic = vec![0.0; emb.len() + latent.len()];
    for (u, gu) in &g.units {
        for k in 0..dim {
            analytic[*u as usize * dim + k] += gu[k];
        }
    }
    for (r, gr) in &g.latent {
        for k in 0..dim {
            analytic[emb.len() + *r as usize * dim + k] += gr[k];
        }
    }
    let x: Vec<f64> = emb.iter().chain(&latent).copied().collect();
    Some(fd_relative_error(&x, &analytic, |x| {
        let (e, l) = x.split_at(emb.len());
        let m = RelationModel::from_latent(names.clone(), dim, l.to_vec()).unwrap();
        relational_energy(&pairs, e, &m, gamma)
    }))
}

/// Energy recomputed from scratch: `Σ max(0, γ + ‖h+r−t‖ − ‖h'+r−t'‖)` with
/// `r = tanh(x/2)`, which equals `2σ(x) − 1`.
pub fn oracle_energy(pairs: &[(RelationTriple, RelationTriple)], emb: &[f64], latent: &[f64], dim: usize, gamma: f64) -> f64 {
    let mut total = 0.0;
    for (p, c) in pairs {
        let r: Vec<f64> = latent[p.relation as usize * dim..][..dim].iter().map(|x| (x / 2.0).tanh()).collect();
        let d = |t: &RelationTriple| {
            let h = &emb[t.head as usize * dim..][..dim];
            let tl = &emb[t.tail as usize * dim..][..dim];
            (0..dim).map(|k| (h[k] + r[k] - tl[k]).powi(2)).sum::<f64>().sqrt()
        };
        let m = gamma + d(p) - d(c);
        if m > 0.0 {
            total += m;
        }
    }
    total
}

/// Builds one random multi-sense fixture (at most 5 candidates per list, 4
/// senses per word, dimension 16) and checks every solver against the
/// enumeration oracles. Returns a description of the first disagreement.
pub fn check_random_fixture(rng: &mut ChaCha8Rng) -> Result<(), String> {
    use rand::seq::SliceRandom;
    use verbaliq::joint::{ANTONYM, SYNONYM};
    use verbaliq::solvers::{
        solve_analogy1, solve_analogy2, solve_antonym, solve_classification, solve_synonym, OffsetKind, PairMode,
        SolverConfig,
    };

    let dim = rng.random_range(1..=16);
    let e = random_senses(rng, 16, 4, dim);
    let table = table_of(&e);
    let latent = uniform(rng, 2 * dim, 3.0);
    let rels = RelationModel::from_latent(vec![SYNONYM.into(), ANTONYM.into()], dim, latent).unwrap();
    let mut names: Vec<String> = e.keys().cloned().collect();
    names.shuffle(rng);
    let take = |names: &[String], from: usize, n: usize| names[from..from + n].to_vec();
    let ensure = |ok: bool, what: &str| if ok { Ok(()) } else { Err(format!("{what} (dim {dim})")) };

    let n = rng.random_range(1..=5);
    let cands = take(&names, 3, n);
    let got = solve_analogy1(&names[0], &names[1], &names[2], &cands, &table).map_err(|e| e.to_string())?;
    ensure(got.answer == oracle_analogy1(&e, &names[0], &names[1], &names[2], &cands), "analogy-i")?;
    ensure(cands.contains(&got.answer), "analogy-i membership")?;

    let (n1, n2) = (rng.random_range(1..=5), rng.random_range(1..=5));
    let (t1, t2) = (take(&names, 2, n1), take(&names, 2 + n1, n2));
    let got = solve_analogy2(&names[0], &names[1], &t1, &t2, &table).map_err(|e| e.to_string())?;
    ensure(got.answer == oracle_analogy2(&e, &names[0], &names[1], &t1, &t2), "analogy-ii")?;
    ensure(t1.contains(&got.answer.0) && t2.contains(&got.answer.1), "analogy-ii membership")?;

    let cands = take(&names, 0, rng.random_range(3..=5));
    let got = solve_classification(&cands, &table).map_err(|e| e.to_string())?;
    ensure(got.answer == oracle_classification(&e, &cands), "classification")?;
    ensure(cands.contains(&got.answer), "classification membership")?;

    let cands = take(&names, 1, rng.random_range(1..=5));
    let configs = [
        (SolverConfig::mode(PairMode::Distance), false, false),
        (SolverConfig::mode(PairMode::RelationOffset), true, false),
        (
            SolverConfig { mode: PairMode::RelationOffset, offset: OffsetKind::ElementwiseAbsolute },
            true,
            true,
        ),
    ];
    for (config, uses_relation, absolute) in configs {
        let syn = rels.vector_named(SYNONYM).unwrap();
        let ant = rels.vector_named(ANTONYM).unwrap();
        let got = solve_synonym(&names[0], &cands, &table, Some(&rels), config).map_err(|e| e.to_string())?;
        let want = oracle_pair(&e, &names[0], &cands, uses_relation.then_some(&syn[..]), absolute);
        ensure(got.answer == want, &format!("synonym {config:?}"))?;
        let got = solve_antonym(&names[0], &cands, &table, Some(&rels), config).map_err(|e| e.to_string())?;
        let want = oracle_pair(&e, &names[0], &cands, uses_relation.then_some(&ant[..]), absolute);
        ensure(got.answer == want, &format!("antonym {config:?}"))?;
        ensure(cands.contains(&got.answer), "pair membership")?;
    }
    Ok(())
}
