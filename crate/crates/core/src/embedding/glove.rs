//! Weighted least-squares factorization of the co-occurrence table with
//! per-parameter adaptive-gradient updates, following the reference GloVe
//! training loop: cost per entry is
//! `0.5 * f(X_ij) * (w_i . w~_j + b_i + b~_j - ln X_ij)^2`
//! with `f(x) = (x / x_max)^alpha` capped at 1.

use std::sync::atomic::{AtomicU64, Ordering};

use super::{init_vector, CooccurrenceTable, EmbeddingMatrix, Method, TrainConfig};
use crate::error::{Error, Result};
use crate::rng::Rng;
use crate::sync::AtomicF64Slice;

/// Mean weighted squared error recorded after each pass over the table.
#[derive(Clone, Debug, Default)]
pub struct GloveStats {
    pub iteration_loss: Vec<f64>,
}

struct GloveParams {
    // Word vectors, context vectors, and the two bias sets, with matching
    // squared-gradient accumulators (initialized to 1 so the first step uses
    // the plain learning rate).
    w: AtomicF64Slice,
    wt: AtomicF64Slice,
    b: AtomicF64Slice,
    bt: AtomicF64Slice,
    gw: AtomicF64Slice,
    gwt: AtomicF64Slice,
    gb: AtomicF64Slice,
    gbt: AtomicF64Slice,
}

pub fn train_glove(
    cooc: &CooccurrenceTable,
    cfg: &TrainConfig,
    seed: u64,
) -> Result<(EmbeddingMatrix, GloveStats)> {
    cfg.validate()?;
    if cooc.is_empty() {
        return Err(Error::Config(
            "cannot train GloVe on an empty co-occurrence table".into(),
        ));
    }

    let n = cooc.vocab_size();
    let dim = cfg.dim;
    let mut rng = Rng::seed_from(seed);

    let params = GloveParams {
        w: AtomicF64Slice::from_vec(init_vector(&mut rng, dim, n * dim)),
        wt: AtomicF64Slice::from_vec(init_vector(&mut rng, dim, n * dim)),
        b: AtomicF64Slice::from_vec(vec![0.0; n]),
        bt: AtomicF64Slice::from_vec(vec![0.0; n]),
        gw: AtomicF64Slice::from_vec(vec![1.0; n * dim]),
        gwt: AtomicF64Slice::from_vec(vec![1.0; n * dim]),
        gb: AtomicF64Slice::from_vec(vec![1.0; n]),
        gbt: AtomicF64Slice::from_vec(vec![1.0; n]),
    };

    // One shuffle up front; every iteration then walks the same order, like
    // the reference tool's pre-shuffled input.
    let mut order: Vec<u32> = (0..cooc.len() as u32).collect();
    rng.shuffle(&mut order);

    let threads = cfg.threads.min(order.len().max(1));
    let mut stats = GloveStats::default();

    for _ in 0..cfg.glove_iters {
        let total_cost = if threads <= 1 {
            train_slice(cooc, &order, &params, cfg)
        } else {
            let chunk = order.len().div_ceil(threads);
            let costs: Vec<AtomicU64> = (0..threads).map(|_| AtomicU64::new(0)).collect();
            std::thread::scope(|scope| {
                for (worker, slice) in order.chunks(chunk).enumerate() {
                    let params = &params;
                    let cost_cell = &costs[worker];
                    scope.spawn(move || {
                        let c = train_slice(cooc, slice, params, cfg);
                        cost_cell.store(c.to_bits(), Ordering::Relaxed);
                    });
                }
            });
            costs
                .iter()
                .map(|c| f64::from_bits(c.load(Ordering::Relaxed)))
                .sum()
        };
        stats.iteration_loss.push(total_cost / cooc.len() as f64);
    }

    // Reference-tool output convention: word vector plus context vector.
    let mut data = Vec::with_capacity(n * dim);
    for i in 0..n * dim {
        data.push((params.w.get(i) + params.wt.get(i)) as f32);
    }
    let matrix = EmbeddingMatrix::from_flat(dim, data, Method::Glove)?;
    matrix.validate_finite()?;
    Ok((matrix, stats))
}

fn train_slice(
    cooc: &CooccurrenceTable,
    order: &[u32],
    p: &GloveParams,
    cfg: &TrainConfig,
) -> f64 {
    let dim = cfg.dim;
    let entries = cooc.entries();
    let mut cost = 0.0f64;
    let mut upd1 = vec![0.0f64; dim];
    let mut upd2 = vec![0.0f64; dim];

    for &idx in order {
        let e = entries[idx as usize];
        let l1 = e.word as usize * dim;
        let l2 = e.context as usize * dim;

        let mut dot = 0.0f64;
        for d in 0..dim {
            dot += p.w.get(l1 + d) * p.wt.get(l2 + d);
        }
        let diff = dot + p.b.get(e.word as usize) + p.bt.get(e.context as usize) - e.weight.ln();
        let mut fdiff = if e.weight > cfg.glove_x_max {
            diff
        } else {
            (e.weight / cfg.glove_x_max).powf(cfg.glove_alpha) * diff
        };
        if !diff.is_finite() || !fdiff.is_finite() {
            continue;
        }
        cost += 0.5 * fdiff * diff;

        fdiff *= cfg.glove_eta;
        let mut sum1 = 0.0f64;
        let mut sum2 = 0.0f64;
        for d in 0..dim {
            let temp1 = fdiff * p.wt.get(l2 + d);
            let temp2 = fdiff * p.w.get(l1 + d);
            upd1[d] = temp1 / p.gw.get(l1 + d).sqrt();
            upd2[d] = temp2 / p.gwt.get(l2 + d).sqrt();
            p.gw.set(l1 + d, p.gw.get(l1 + d) + temp1 * temp1);
            p.gwt.set(l2 + d, p.gwt.get(l2 + d) + temp2 * temp2);
            sum1 += upd1[d];
            sum2 += upd2[d];
        }
        if sum1.is_finite() && sum2.is_finite() {
            for d in 0..dim {
                p.w.set(l1 + d, p.w.get(l1 + d) - upd1[d]);
                p.wt.set(l2 + d, p.wt.get(l2 + d) - upd2[d]);
            }
        }

        let bi = e.word as usize;
        let bj = e.context as usize;
        let db1 = fdiff / p.gb.get(bi).sqrt();
        let db2 = fdiff / p.gbt.get(bj).sqrt();
        if db1.is_finite() {
            p.b.set(bi, p.b.get(bi) - db1);
        }
        if db2.is_finite() {
            p.bt.set(bj, p.bt.get(bj) - db2);
        }
        let fsq = fdiff * fdiff;
        p.gb.set(bi, p.gb.get(bi) + fsq);
        p.gbt.set(bj, p.gbt.get(bj) + fsq);
    }
    cost
}
