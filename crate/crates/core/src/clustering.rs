//! Spherical k-means over embedding vectors (cosine similarity, normalized
//! centroids) and the size-matched random partition used as the baseline.

use std::io::{BufRead, Write};

use crate::embedding::EmbeddingMatrix;
use crate::error::{Error, Result};
use crate::rng::Rng;

/// How a partition was produced.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Provenance {
    EmbeddingBased,
    Random,
}

/// A partition of all vocabulary ids into k clusters.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Clustering {
    k: usize,
    assignment: Vec<u32>,
    members: Vec<Vec<u32>>,
    provenance: Provenance,
}

impl Clustering {
    /// Builds the members lists from an assignment vector and checks the
    /// partition invariants.
    pub fn from_assignment(
        k: usize,
        assignment: Vec<u32>,
        provenance: Provenance,
    ) -> Result<Clustering> {
        let mut members: Vec<Vec<u32>> = vec![Vec::new(); k];
        for (id, &c) in assignment.iter().enumerate() {
            if c as usize >= k {
                return Err(Error::Internal(format!(
                    "word {id} assigned to cluster {c} but k = {k}"
                )));
            }
            members[c as usize].push(id as u32);
        }
        Ok(Clustering {
            k,
            assignment,
            members,
            provenance,
        })
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn len(&self) -> usize {
        self.assignment.len()
    }

    pub fn is_empty(&self) -> bool {
        self.assignment.is_empty()
    }

    pub fn provenance(&self) -> Provenance {
        self.provenance
    }

    pub fn assignment(&self) -> &[u32] {
        &self.assignment
    }

    pub fn cluster_of(&self, id: u32) -> u32 {
        self.assignment[id as usize]
    }

    pub fn members(&self, cluster: usize) -> &[u32] {
        &self.members[cluster]
    }

    pub fn size_profile(&self) -> Vec<usize> {
        self.members.iter().map(|m| m.len()).collect()
    }

    /// Persists as CSV, one `word,cluster_index` row per word in id order.
    pub fn write_csv<W: Write>(&self, words: &[String], out: &mut W) -> Result<()> {
        if words.len() != self.assignment.len() {
            return Err(Error::Internal(format!(
                "{} words for {} assignments",
                words.len(),
                self.assignment.len()
            )));
        }
        writeln!(out, "word,cluster_index")?;
        for (word, c) in words.iter().zip(&self.assignment) {
            writeln!(out, "{word},{c}")?;
        }
        Ok(())
    }

    /// Reads the CSV form back, returning words in id order alongside the
    /// partition.
    pub fn read_csv<R: BufRead>(reader: R, provenance: Provenance) -> Result<(Vec<String>, Clustering)> {
        let mut words = Vec::new();
        let mut assignment = Vec::new();
        let mut max_c = 0u32;
        for (lineno, line) in reader.lines().enumerate() {
            let line = line?;
            if lineno == 0 && line == "word,cluster_index" {
                continue;
            }
            if line.is_empty() {
                continue;
            }
            let (word, c) = line.split_once(',').ok_or_else(|| {
                Error::Data(format!("malformed clustering row on line {}", lineno + 1))
            })?;
            let c: u32 = c.parse().map_err(|_| {
                Error::Data(format!(
                    "bad cluster index {:?} on line {}",
                    c,
                    lineno + 1
                ))
            })?;
            max_c = max_c.max(c);
            words.push(word.to_string());
            assignment.push(c);
        }
        if assignment.is_empty() {
            return Err(Error::Data("empty clustering file".into()));
        }
        let clustering = Clustering::from_assignment(max_c as usize + 1, assignment, provenance)?;
        Ok((words, clustering))
    }
}

/// Result of a k-means run, with the per-iteration objective (sum of
/// member-to-centroid cosines) for monotonicity checks.
#[derive(Clone, Debug)]
pub struct KmeansOutcome {
    pub clustering: Clustering,
    pub objective_per_iter: Vec<f64>,
    pub converged: bool,
    /// Final centroids, L2-normalized, row-major k x dim.
    pub centroids: Vec<f64>,
    pub dim: usize,
}

/// Spherical k-means: k-means++ seeding adapted to cosine distance, argmax
/// cosine assignment with lowest-index tie-breaking, normalized-mean centroid
/// updates, and empty-cluster repair by reseeding with the worst-fit point.
pub fn kmeans_cosine(
    emb: &EmbeddingMatrix,
    words: &[String],
    k: usize,
    max_iters: usize,
    seed: u64,
    threads: usize,
) -> Result<KmeansOutcome> {
    let n = emb.len();
    let dim = emb.dim();
    if k == 0 {
        return Err(Error::Config("k must be at least 1".into()));
    }
    if k > n {
        return Err(Error::Config(format!(
            "k = {k} exceeds the vocabulary size {n}"
        )));
    }
    if max_iters == 0 {
        return Err(Error::Config("max_iters must be at least 1".into()));
    }

    // Normalize every vector once; cosine then reduces to a dot product.
    let mut points = vec![0.0f64; n * dim];
    for id in 0..n {
        let v = emb.vector(id as u32);
        let norm: f64 = v.iter().map(|&x| (x as f64) * (x as f64)).sum::<f64>().sqrt();
        if norm == 0.0 {
            let word = words
                .get(id)
                .cloned()
                .unwrap_or_else(|| format!("#{id}"));
            return Err(Error::ZeroVector { word });
        }
        for (d, &x) in v.iter().enumerate() {
            points[id * dim + d] = x as f64 / norm;
        }
    }

    let mut rng = Rng::seed_from(seed);
    let mut centroids = init_centroids(&points, n, dim, k, &mut rng);

    let mut assignment: Vec<u32> = vec![0; n];
    let mut best_sim: Vec<f64> = vec![-2.0; n];
    let mut prev_assignment: Vec<u32> = Vec::new();
    let mut objective_per_iter = Vec::new();
    let mut converged = false;

    for _ in 0..max_iters {
        assign_points(&points, &centroids, dim, k, threads, &mut assignment, &mut best_sim);
        repair_empty_clusters(&points, dim, k, &mut assignment, &mut best_sim, &mut centroids);
        update_centroids(&points, &assignment, dim, k, &mut centroids);

        let objective: f64 = (0..n)
            .map(|i| dot(&points[i * dim..(i + 1) * dim], centroid(&centroids, dim, assignment[i] as usize)))
            .sum();
        objective_per_iter.push(objective);

        if prev_assignment == assignment {
            converged = true;
            break;
        }
        prev_assignment.clone_from(&assignment);
    }

    let clustering = Clustering::from_assignment(k, assignment, Provenance::EmbeddingBased)?;
    Ok(KmeansOutcome {
        clustering,
        objective_per_iter,
        converged,
        centroids,
        dim,
    })
}

#[inline]
fn dot(a: &[f64], b: &[f64]) -> f64 {
    // Four-way unrolled to keep the reduction pipelined.
    let mut acc = [0.0f64; 4];
    let chunks = a.len() / 4;
    for c in 0..chunks {
        let i = c * 4;
        acc[0] += a[i] * b[i];
        acc[1] += a[i + 1] * b[i + 1];
        acc[2] += a[i + 2] * b[i + 2];
        acc[3] += a[i + 3] * b[i + 3];
    }
    let mut tail = 0.0;
    for i in chunks * 4..a.len() {
        tail += a[i] * b[i];
    }
    acc[0] + acc[1] + acc[2] + acc[3] + tail
}

#[inline]
fn centroid(centroids: &[f64], dim: usize, c: usize) -> &[f64] {
    &centroids[c * dim..(c + 1) * dim]
}

/// k-means++ adapted to cosine: selection probability proportional to
/// (1 - cosine) to the nearest already-chosen center.
fn init_centroids(points: &[f64], n: usize, dim: usize, k: usize, rng: &mut Rng) -> Vec<f64> {
    let mut centroids = vec![0.0f64; k * dim];
    let first = rng.below(n as u64) as usize;
    centroids[..dim].copy_from_slice(&points[first * dim..(first + 1) * dim]);

    let mut nearest: Vec<f64> = (0..n)
        .map(|i| dot(&points[i * dim..(i + 1) * dim], &centroids[..dim]))
        .collect();

    for c in 1..k {
        let weights: Vec<f64> = nearest.iter().map(|&s| (1.0 - s).max(0.0)).collect();
        let total: f64 = weights.iter().sum();
        let chosen = if total > 0.0 {
            let r = rng.next_f64() * total;
            let mut cum = 0.0;
            let mut pick = n - 1;
            for (i, &w) in weights.iter().enumerate() {
                cum += w;
                if r < cum {
                    pick = i;
                    break;
                }
            }
            pick
        } else {
            // Every point coincides with a chosen center; any choice works.
            rng.below(n as u64) as usize
        };
        let row = &points[chosen * dim..(chosen + 1) * dim];
        centroids[c * dim..(c + 1) * dim].copy_from_slice(row);
        for i in 0..n {
            let s = dot(&points[i * dim..(i + 1) * dim], row);
            if s > nearest[i] {
                nearest[i] = s;
            }
        }
    }
    centroids
}

fn assign_points(
    points: &[f64],
    centroids: &[f64],
    dim: usize,
    k: usize,
    threads: usize,
    assignment: &mut [u32],
    best_sim: &mut [f64],
) {
    let n = assignment.len();
    let assign_range = |range: std::ops::Range<usize>, out_a: &mut [u32], out_s: &mut [f64]| {
        for (off, i) in range.enumerate() {
            let p = &points[i * dim..(i + 1) * dim];
            let mut best = f64::NEG_INFINITY;
            let mut best_c = 0u32;
            for c in 0..k {
                let s = dot(p, centroid(centroids, dim, c));
                if s > best {
                    best = s;
                    best_c = c as u32;
                }
            }
            out_a[off] = best_c;
            out_s[off] = best;
        }
    };

    let threads = threads.max(1).min(n);
    if threads == 1 {
        assign_range(0..n, assignment, best_sim);
        return;
    }
    let chunk = n.div_ceil(threads);
    std::thread::scope(|scope| {
        let mut rest_a = assignment;
        let mut rest_s = best_sim;
        let mut start = 0;
        while start < n {
            let len = chunk.min(n - start);
            let (a, ra) = rest_a.split_at_mut(len);
            let (s, rs) = rest_s.split_at_mut(len);
            rest_a = ra;
            rest_s = rs;
            let range = start..start + len;
            let assign_range = &assign_range;
            scope.spawn(move || assign_range(range, a, s));
            start += len;
        }
    });
}

/// Reseeds every empty cluster with the point that currently fits its own
/// centroid worst, never stealing from a singleton.
fn repair_empty_clusters(
    points: &[f64],
    dim: usize,
    k: usize,
    assignment: &mut [u32],
    best_sim: &mut [f64],
    centroids: &mut [f64],
) {
    let mut sizes = vec![0usize; k];
    for &c in assignment.iter() {
        sizes[c as usize] += 1;
    }
    for c in 0..k {
        if sizes[c] != 0 {
            continue;
        }
        let mut worst: Option<usize> = None;
        for i in 0..assignment.len() {
            if sizes[assignment[i] as usize] < 2 {
                continue;
            }
            if worst.map_or(true, |w| best_sim[i] < best_sim[w]) {
                worst = Some(i);
            }
        }
        let Some(i) = worst else { break };
        sizes[assignment[i] as usize] -= 1;
        sizes[c] += 1;
        assignment[i] = c as u32;
        let p = &points[i * dim..(i + 1) * dim];
        centroids[c * dim..(c + 1) * dim].copy_from_slice(p);
        best_sim[i] = dot(p, p);
    }
}

/// Normalized-mean update, accumulating members in word-id order so the
/// reduction is deterministic. A cluster whose members cancel exactly keeps
/// its previous centroid.
fn update_centroids(
    points: &[f64],
    assignment: &[u32],
    dim: usize,
    k: usize,
    centroids: &mut [f64],
) {
    let mut sums = vec![0.0f64; k * dim];
    for (i, &c) in assignment.iter().enumerate() {
        let p = &points[i * dim..(i + 1) * dim];
        let row = &mut sums[c as usize * dim..(c as usize + 1) * dim];
        for (s, &x) in row.iter_mut().zip(p) {
            *s += x;
        }
    }
    for c in 0..k {
        let row = &sums[c * dim..(c + 1) * dim];
        let norm = dot(row, row).sqrt();
        if norm > 0.0 {
            for d in 0..dim {
                centroids[c * dim + d] = row[d] / norm;
            }
        }
    }
}

/// Uniformly random permutation of all word ids, sliced into clusters of
/// exactly the given sizes.
pub fn random_clustering(
    vocab_size: usize,
    size_profile: &[usize],
    seed: u64,
) -> Result<Clustering> {
    let total: usize = size_profile.iter().sum();
    if total != vocab_size {
        return Err(Error::Config(format!(
            "size profile sums to {total} but the vocabulary has {vocab_size} words"
        )));
    }
    let mut ids: Vec<u32> = (0..vocab_size as u32).collect();
    let mut rng = Rng::seed_from(seed);
    rng.shuffle(&mut ids);

    let mut assignment = vec![0u32; vocab_size];
    let mut offset = 0;
    for (c, &size) in size_profile.iter().enumerate() {
        for &id in &ids[offset..offset + size] {
            assignment[id as usize] = c as u32;
        }
        offset += size;
    }
    Clustering::from_assignment(size_profile.len(), assignment, Provenance::Random)
}
