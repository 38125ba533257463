//! Independent reference implementations and data generators shared by the
//! integration suites. Nothing here calls into the code paths it checks.

#![allow(dead_code, clippy::needless_range_loop, clippy::type_complexity)]

use nlixy::embedstore::{EmbeddingRecord, EmbeddingStore};
use nlixy::synthesis::{NliXyExample, Split};
use nlixy::{compose, ConceptRelation, EntailmentLabel, Monotonicity};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};

// ---- set-model semantics of single-step natural logic ----

const UNIVERSE: u8 = 3;
const SUBSETS: u8 = 1 << UNIVERSE;

fn subset_of(a: u8, b: u8) -> bool {
    a & !b == 0
}

fn monotone_contexts(mon: Monotonicity) -> Vec<u16> {
    // a context is a truth assignment to each of the 8 subsets, packed in a u16
    (0u16..(1 << SUBSETS))
        .filter(|f| {
            (0..SUBSETS).all(|x| {
                (0..SUBSETS).all(|y| {
                    if !subset_of(x, y) {
                        return true;
                    }
                    let (fx, fy) = ((f >> x) & 1, (f >> y) & 1);
                    match mon {
                        Monotonicity::Up => fx <= fy,
                        Monotonicity::Down => fx >= fy,
                    }
                })
            })
        })
        .collect()
}

fn related(rel: ConceptRelation, x: u8, y: u8) -> bool {
    match rel {
        ConceptRelation::Equivalence => x == y,
        ConceptRelation::ForwardInclusion => x != y && subset_of(x, y),
        ConceptRelation::ReverseInclusion => x != y && subset_of(y, x),
        ConceptRelation::NoRelation => !subset_of(x, y) && !subset_of(y, x),
    }
}

/// Entailment iff `f(X) -> f(Y)` holds for every monotone context of the
/// given direction and every concept pair standing in `rel`.
pub fn set_model_compose(mon: Monotonicity, rel: ConceptRelation) -> EntailmentLabel {
    let contexts = monotone_contexts(mon);
    let pairs: Vec<(u8, u8)> =
        (0..SUBSETS).flat_map(|x| (0..SUBSETS).map(move |y| (x, y))).filter(|&(x, y)| related(rel, x, y)).collect();
    assert!(!pairs.is_empty(), "relation {rel} has a witness pair");
    let forced = contexts.iter().all(|f| pairs.iter().all(|&(x, y)| (f >> x) & 1 == 0 || (f >> y) & 1 == 1));
    if forced {
        EntailmentLabel::Entailment
    } else {
        EntailmentLabel::NonEntailment
    }
}

// ---- one-sided Jacobi SVD ----

/// Singular values of a row-major `rows x cols` matrix by Hestenes'
/// one-sided Jacobi rotations, sorted descending.
pub fn jacobi_singular_values(data: &[f64], rows: usize, cols: usize) -> Vec<f64> {
    // work on the orientation with fewer columns
    let (m, n, get): (usize, usize, Box<dyn Fn(usize, usize) -> f64>) = if cols <= rows {
        (rows, cols, Box::new(move |i, j| data[i * cols + j]))
    } else {
        (cols, rows, Box::new(move |i, j| data[j * cols + i]))
    };
    let mut a: Vec<Vec<f64>> = (0..n).map(|j| (0..m).map(|i| get(i, j)).collect()).collect();
    for _sweep in 0..100 {
        let mut off = 0.0f64;
        for p in 0..n {
            for q in (p + 1)..n {
                let alpha: f64 = a[p].iter().map(|v| v * v).sum();
                let beta: f64 = a[q].iter().map(|v| v * v).sum();
                let gamma: f64 = a[p].iter().zip(&a[q]).map(|(x, y)| x * y).sum();
                if gamma == 0.0 || gamma.abs() <= 1e-15 * (alpha * beta).sqrt() {
                    continue;
                }
                off = off.max(gamma.abs() / (alpha * beta).sqrt());
                let zeta = (beta - alpha) / (2.0 * gamma);
                let t = zeta.signum() / (zeta.abs() + (1.0 + zeta * zeta).sqrt());
                let t = if zeta == 0.0 { 1.0 } else { t };
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = c * t;
                for i in 0..m {
                    let (ap, aq) = (a[p][i], a[q][i]);
                    a[p][i] = c * ap - s * aq;
                    a[q][i] = s * ap + c * aq;
                }
            }
        }
        if off < 1e-15 {
            break;
        }
    }
    let mut sv: Vec<f64> = a.iter().map(|col| col.iter().map(|v| v * v).sum::<f64>().sqrt()).collect();
    sv.sort_by(|x, y| y.total_cmp(x));
    sv
}

pub fn jacobi_nuclear_norm(data: &[f64], rows: usize, cols: usize) -> f64 {
    jacobi_singular_values(data, rows, cols).iter().sum()
}

pub fn random_matrix(rng: &mut ChaCha8Rng, rows: usize, cols: usize) -> Vec<f64> {
    let normal = Normal::new(0.0, 1.0).unwrap();
    (0..rows * cols).map(|_| normal.sample(rng)).collect()
}

// ---- synthetic embedding stores ----

fn example(i: usize, split: Split, mon: Monotonicity, rel: ConceptRelation) -> NliXyExample {
    let ctx = format!("{}-ctx{:03}", split.as_str(), i % 80);
    let pair = format!("{}-pair{:03}", split.as_str(), i % 60);
    NliXyExample {
        example_id: format!("{ctx}:{pair}:{i}"),
        context_id: ctx,
        pair_id: pair,
        premise: String::new(),
        hypothesis: String::new(),
        monotonicity: mon,
        relation: rel,
        gold_label: compose(mon, rel),
        split,
    }
}

/// `n_train + n_test` examples whose monotonicity is a property of their
/// context and whose relation is a property of their pair.
pub fn synthetic_examples(n_train: usize, n_test: usize) -> Vec<NliXyExample> {
    let rels = [ConceptRelation::ForwardInclusion, ConceptRelation::ReverseInclusion, ConceptRelation::NoRelation];
    let mut out = Vec::with_capacity(n_train + n_test);
    for (split, n) in [(Split::Train, n_train), (Split::Test, n_test)] {
        for i in 0..n {
            let mon = if (i % 80) % 2 == 0 { Monotonicity::Up } else { Monotonicity::Down };
            out.push(example(out.len(), split, mon, rels[(i % 60) % 3]));
        }
    }
    out
}

/// Store with monotonicity planted as a `+offset / -offset` shift in
/// `planted` dimensions on top of isotropic Gaussian noise of scale `sigma`.
pub fn planted_store(
    examples: &[NliXyExample],
    dim: usize,
    planted: &[usize],
    offset: f32,
    sigma: f32,
    seed: u64,
) -> EmbeddingStore {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let noise = Normal::new(0.0f32, sigma).unwrap();
    let records = examples
        .iter()
        .map(|ex| {
            let mut v: Vec<f32> = (0..dim).map(|_| noise.sample(&mut rng)).collect();
            let shift = if ex.monotonicity == Monotonicity::Up { offset } else { -offset };
            for &d in planted {
                v[d] += shift;
            }
            EmbeddingRecord {
                example_id: ex.example_id.clone(),
                vector: v,
                predicted_label: if rng.random_bool(0.5) {
                    EntailmentLabel::Entailment
                } else {
                    EntailmentLabel::NonEntailment
                },
            }
        })
        .collect();
    EmbeddingStore::new("synthetic-planted", dim, records).unwrap()
}

pub fn noise_store(examples: &[NliXyExample], dim: usize, seed: u64) -> EmbeddingStore {
    planted_store(examples, dim, &[], 0.0, 1.0, seed)
}
