//! SimHash near-duplicate detection.
//!
//! Fingerprints are 64-bit SimHashes of character trigrams. Pairs within a
//! Hamming radius are found by splitting the fingerprint into `radius + 1`
//! bands: two fingerprints that differ in at most `radius` bits must agree
//! exactly on at least one band, so bucketing by band value finds every pair.

use std::collections::HashMap;
use std::fmt::Write as _;
use std::io::{BufRead, BufReader, Write};
use std::path::Path;

use chrono::{DateTime, Utc};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::hash::stable_hash;

/// Similarity threshold 0.7 over 64 bits: at most 19 differing bits.
pub const DEFAULT_MAX_DISTANCE: u32 = 19;

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Fingerprint {
    pub bits: u64,
    pub doc_id: String,
}

impl Fingerprint {
    pub fn hex(&self) -> String {
        format!("{:016x}", self.bits)
    }
}

fn normalize(text: &str) -> String {
    let mut out = String::with_capacity(text.len());
    for word in text.split_whitespace() {
        if !out.is_empty() {
            out.push(' ');
        }
        for c in word.chars().flat_map(char::to_lowercase) {
            out.push(c);
        }
    }
    out
}

/// 64-bit SimHash over the character trigrams of the lowercased,
/// whitespace-collapsed text. Every trigram occurrence votes once; ties
/// give a zero bit, so text without trigrams hashes to 0.
pub fn simhash_bits(text: &str) -> u64 {
    let normalized = normalize(text);
    let chars: Vec<(usize, char)> = normalized.char_indices().collect();
    if chars.len() < 3 {
        return 0;
    }
    let mut counts: HashMap<&str, i64> = HashMap::new();
    for i in 0..chars.len() - 2 {
        let start = chars[i].0;
        let end = chars.get(i + 3).map_or(normalized.len(), |c| c.0);
        *counts.entry(&normalized[start..end]).or_insert(0) += 1;
    }
    let mut acc = [0i64; 64];
    for (gram, count) in counts {
        let h = stable_hash(gram.as_bytes());
        for (bit, slot) in acc.iter_mut().enumerate() {
            if h >> bit & 1 == 1 {
                *slot += count;
            } else {
                *slot -= count;
            }
        }
    }
    acc.iter()
        .enumerate()
        .filter(|(_, &v)| v > 0)
        .fold(0u64, |bits, (i, _)| bits | 1 << i)
}

pub fn simhash(text: &str, doc_id: impl Into<String>) -> Fingerprint {
    Fingerprint {
        bits: simhash_bits(text),
        doc_id: doc_id.into(),
    }
}

pub fn hamming(a: u64, b: u64) -> u32 {
    (a ^ b).count_ones()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct DuplicatePair {
    /// Index of the earlier fingerprint; always `a < b`.
    pub a: usize,
    pub b: usize,
    pub distance: u32,
}

/// Bit masks splitting 64 bits into `count` contiguous bands of near-equal
/// width.
fn band_masks(count: usize) -> Vec<u64> {
    let base = 64 / count;
    let extra = 64 % count;
    let mut masks = Vec::with_capacity(count);
    let mut start = 0;
    for i in 0..count {
        let width = base + usize::from(i < extra);
        let mask = if width == 64 { u64::MAX } else { ((1u64 << width) - 1) << start };
        masks.push(mask);
        start += width;
    }
    masks
}

/// Every pair of fingerprints within `max_distance` bits, sorted.
pub fn find_duplicates(bits: &[u64], max_distance: u32) -> Vec<DuplicatePair> {
    let mut pairs = Vec::new();
    if max_distance >= 63 {
        for a in 0..bits.len() {
            for b in a + 1..bits.len() {
                let distance = hamming(bits[a], bits[b]);
                if distance <= max_distance {
                    pairs.push(DuplicatePair { a, b, distance });
                }
            }
        }
        return pairs;
    }
    let masks = band_masks(max_distance as usize + 1);
    for (band, &mask) in masks.iter().enumerate() {
        let mut buckets: HashMap<u64, Vec<usize>> = HashMap::new();
        for (i, &fp) in bits.iter().enumerate() {
            buckets.entry(fp & mask).or_default().push(i);
        }
        for members in buckets.values() {
            for (x, &a) in members.iter().enumerate() {
                for &b in &members[x + 1..] {
                    let diff = bits[a] ^ bits[b];
                    // Report each pair from the first band it agrees on.
                    if masks[..band].iter().any(|&m| diff & m == 0) {
                        continue;
                    }
                    let distance = diff.count_ones();
                    if distance <= max_distance {
                        pairs.push(DuplicatePair { a, b, distance });
                    }
                }
            }
        }
    }
    pairs.sort_unstable();
    pairs
}

struct UnionFind {
    parent: Vec<usize>,
    rank: Vec<u8>,
}

impl UnionFind {
    fn new(n: usize) -> Self {
        Self {
            parent: (0..n).collect(),
            rank: vec![0; n],
        }
    }

    fn find(&mut self, mut x: usize) -> usize {
        let mut root = x;
        while self.parent[root] != root {
            root = self.parent[root];
        }
        while self.parent[x] != root {
            let next = self.parent[x];
            self.parent[x] = root;
            x = next;
        }
        root
    }

    fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra == rb {
            return;
        }
        match self.rank[ra].cmp(&self.rank[rb]) {
            std::cmp::Ordering::Less => self.parent[ra] = rb,
            std::cmp::Ordering::Greater => self.parent[rb] = ra,
            std::cmp::Ordering::Equal => {
                self.parent[rb] = ra;
                self.rank[ra] += 1;
            }
        }
    }
}

/// What dedup needs to know about a document.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DedupEntry {
    pub bits: u64,
    pub fetch_time: DateTime<Utc>,
    pub url: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Cluster {
    /// Clusters are numbered by the input position of their representative.
    pub id: usize,
    pub representative: usize,
    /// Input indices, ascending.
    pub members: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DedupOutcome {
    /// Parallel to the input: whether each document survives.
    pub keep: Vec<bool>,
    /// Parallel to the input: the cluster of each document with duplicates.
    pub cluster_of: Vec<Option<usize>>,
    /// Only clusters with two or more members, ordered by id.
    pub clusters: Vec<Cluster>,
    pub pairs: usize,
}

impl DedupOutcome {
    pub fn kept(&self) -> usize {
        self.keep.iter().filter(|&&k| k).count()
    }
}

/// Cluster near-duplicates transitively and keep one document per cluster:
/// the earliest fetch, ties broken by the smallest URL.
pub fn dedup_corpus(entries: &[DedupEntry], max_distance: u32) -> DedupOutcome {
    let bits: Vec<u64> = entries.iter().map(|e| e.bits).collect();
    let pairs = find_duplicates(&bits, max_distance);
    let mut uf = UnionFind::new(entries.len());
    for p in &pairs {
        uf.union(p.a, p.b);
    }
    let mut groups: HashMap<usize, Vec<usize>> = HashMap::new();
    for i in 0..entries.len() {
        let root = uf.find(i);
        groups.entry(root).or_default().push(i);
    }
    let mut keep = vec![true; entries.len()];
    let mut cluster_of = vec![None; entries.len()];
    let mut clusters: Vec<Cluster> = groups
        .into_values()
        .filter(|m| m.len() > 1)
        .map(|mut members| {
            members.sort_unstable();
            let representative = *members
                .iter()
                .min_by(|&&x, &&y| {
                    (entries[x].fetch_time, &entries[x].url).cmp(&(entries[y].fetch_time, &entries[y].url))
                })
                .expect("non-empty cluster");
            Cluster {
                id: representative,
                representative,
                members,
            }
        })
        .collect();
    clusters.sort_by_key(|c| c.id);
    for cluster in &clusters {
        for &m in &cluster.members {
            cluster_of[m] = Some(cluster.id);
            keep[m] = m == cluster.representative;
        }
    }
    DedupOutcome {
        keep,
        cluster_of,
        clusters,
        pairs: pairs.len(),
    }
}

/// `doc_id TAB 16-hex-digit fingerprint`, one per line.
pub fn write_sidecar<W: Write>(mut w: W, fingerprints: &[Fingerprint]) -> Result<()> {
    let mut buf = String::new();
    for fp in fingerprints {
        if fp.doc_id.contains(['\t', '\n']) {
            return Err(Error::InvalidArgument(format!("doc id {:?} contains a tab or newline", fp.doc_id)));
        }
        let _ = writeln!(buf, "{}\t{:016x}", fp.doc_id, fp.bits);
    }
    w.write_all(buf.as_bytes())?;
    Ok(())
}

pub fn read_sidecar<R: BufRead>(reader: R) -> Result<Vec<Fingerprint>> {
    let mut out = Vec::new();
    for (i, line) in reader.lines().enumerate() {
        let line = line?;
        if line.trim().is_empty() {
            continue;
        }
        let (id, hex) = line
            .rsplit_once('\t')
            .ok_or_else(|| Error::InvalidArgument(format!("sidecar line {}: missing tab", i + 1)))?;
        if hex.len() != 16 {
            return Err(Error::InvalidArgument(format!("sidecar line {}: expected 16 hex digits", i + 1)));
        }
        let bits = u64::from_str_radix(hex, 16)
            .map_err(|_| Error::InvalidArgument(format!("sidecar line {}: bad hex {hex:?}", i + 1)))?;
        out.push(Fingerprint {
            bits,
            doc_id: id.to_owned(),
        });
    }
    Ok(out)
}

pub fn load_sidecar(path: &Path) -> Result<Vec<Fingerprint>> {
    let file = std::fs::File::open(path).map_err(|source| Error::Open {
        path: path.to_path_buf(),
        source,
    })?;
    read_sidecar(BufReader::new(file))
}
