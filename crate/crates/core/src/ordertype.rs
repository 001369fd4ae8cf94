//! Labeled order types: triple-orientation signatures, λ-matrices and
//! fixed-length digests used as deduplication keys.

use std::collections::BTreeMap;
use std::fmt;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::geometry::{orientation, Orientation, Point, PointSet};
use crate::{Error, Result};

/// Orientation sign of every triple `i < j < k`, in lexicographic order.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct OrderTypeSignature {
    n: usize,
    signs: Vec<i8>,
}

impl OrderTypeSignature {
    pub fn n(&self) -> usize {
        self.n
    }

    /// One entry per triple, each `+1` or `−1`.
    pub fn signs(&self) -> &[i8] {
        &self.signs
    }

    /// Sign of the triple `(i, j, k)`, `i < j < k`.
    pub fn get(&self, i: usize, j: usize, k: usize) -> i8 {
        assert!(i < j && j < k && k < self.n);
        self.signs[triple_index(self.n, i, j, k)]
    }

    /// Canonical bytes: `n` as 8-byte big-endian, then `0x01` for `+1` and
    /// `0x02` for `−1`, one byte per triple.
    pub fn encode(&self) -> Vec<u8> {
        let mut out = Vec::with_capacity(8 + self.signs.len());
        out.extend_from_slice(&(self.n as u64).to_be_bytes());
        out.extend(self.signs.iter().map(|&s| if s > 0 { 0x01 } else { 0x02 }));
        out
    }
}

fn binom3(n: usize) -> usize {
    if n < 3 {
        0
    } else {
        n * (n - 1) * (n - 2) / 6
    }
}

/// Position of `(i, j, k)` in the lexicographic list of 3-subsets of `0..n`.
fn triple_index(n: usize, i: usize, j: usize, k: usize) -> usize {
    // Triples starting before i, then pairs (j', k') with i < j' < j, then k.
    let before_i = binom3(n) - binom3(n - i);
    let m = n - i - 1; // elements after i
    let a = j - i - 1; // rank of j among them
    let before_j = a * m - a * (a + 1) / 2;
    before_i + before_j + (k - j - 1)
}

/// Orientation signature of a general-position point set.
///
/// Fails with [`Error::Degenerate`] on the lexicographically first collinear
/// triple.
pub fn signature(s: &PointSet) -> Result<OrderTypeSignature> {
    signature_of(s.points())
}

/// Signature from precomputed lexicographic triple signs.
pub(crate) fn signature_from_signs(n: usize, signs: Vec<i8>) -> OrderTypeSignature {
    debug_assert_eq!(signs.len(), binom3(n));
    OrderTypeSignature { n, signs }
}

pub(crate) fn signature_of(p: &[Point]) -> Result<OrderTypeSignature> {
    let n = p.len();
    let mut signs = Vec::with_capacity(binom3(n));
    for i in 0..n {
        for j in i + 1..n {
            for k in j + 1..n {
                match orientation(&p[i], &p[j], &p[k]) {
                    Orientation::Collinear => return Err(Error::Degenerate([i, j, k])),
                    o => signs.push(o.sign()),
                }
            }
        }
    }
    Ok(OrderTypeSignature { n, signs })
}

/// `entries[i][j]` = number of points strictly left of the directed line `p_i → p_j`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct LambdaMatrix {
    n: usize,
    entries: Vec<u32>,
}

impl LambdaMatrix {
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn get(&self, i: usize, j: usize) -> u32 {
        self.entries[i * self.n + j]
    }

    pub fn row(&self, i: usize) -> &[u32] {
        &self.entries[i * self.n..(i + 1) * self.n]
    }

    /// `n`, then `n` rows of space-separated entries.
    pub fn to_text(&self) -> String {
        let mut out = format!("{}\n", self.n);
        for i in 0..self.n {
            let row: Vec<String> = self.row(i).iter().map(u32::to_string).collect();
            out.push_str(&row.join(" "));
            out.push('\n');
        }
        out
    }

    pub fn from_text(text: &str) -> Result<Self> {
        let mut lines = text.lines();
        let n: usize = lines
            .next()
            .and_then(|l| l.parse().ok())
            .ok_or_else(|| Error::Parse("missing λ-matrix size".into()))?;
        let mut entries = Vec::with_capacity(n * n);
        for i in 0..n {
            let line = lines
                .next()
                .ok_or_else(|| Error::Parse(format!("missing row {i}")))?;
            let row: Vec<u32> = line
                .split(' ')
                .map(|t| t.parse().map_err(|_| Error::Parse(format!("row {i}: bad entry {t:?}"))))
                .collect::<Result<_>>()?;
            if row.len() != n {
                return Err(Error::Parse(format!("row {i} has {} entries", row.len())));
            }
            entries.extend(row);
        }
        Ok(LambdaMatrix { n, entries })
    }
}

impl fmt::Display for LambdaMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_text())
    }
}

pub fn lambda_matrix(s: &PointSet) -> Result<LambdaMatrix> {
    let p = s.points();
    let n = p.len();
    let mut entries = vec![0u32; n * n];
    for i in 0..n {
        for j in i + 1..n {
            for k in 0..n {
                if k == i || k == j {
                    continue;
                }
                match orientation(&p[i], &p[j], &p[k]) {
                    Orientation::Collinear => {
                        let mut t = [i, j, k];
                        t.sort_unstable();
                        return Err(Error::Degenerate(t));
                    }
                    Orientation::CounterClockwise => entries[i * n + j] += 1,
                    Orientation::Clockwise => entries[j * n + i] += 1,
                }
            }
        }
    }
    Ok(LambdaMatrix { n, entries })
}

/// SHA-256 of [`OrderTypeSignature::encode`].
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SignatureDigest([u8; 32]);

impl SignatureDigest {
    pub fn as_bytes(&self) -> &[u8; 32] {
        &self.0
    }

    pub fn from_hex(s: &str) -> Result<Self> {
        let bytes = hex::decode(s).map_err(|e| Error::Parse(format!("digest: {e}")))?;
        let arr: [u8; 32] = bytes
            .try_into()
            .map_err(|_| Error::Parse("digest must be 32 bytes".into()))?;
        Ok(SignatureDigest(arr))
    }
}

impl fmt::Display for SignatureDigest {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&hex::encode(self.0))
    }
}

impl fmt::Debug for SignatureDigest {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "SignatureDigest({self})")
    }
}

impl Serialize for SignatureDigest {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for SignatureDigest {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        SignatureDigest::from_hex(&s).map_err(serde::de::Error::custom)
    }
}

pub fn signature_digest(sig: &OrderTypeSignature) -> SignatureDigest {
    SignatureDigest(Sha256::digest(sig.encode()).into())
}

/// Signature digest of a point set in one step.
pub fn digest_of(s: &PointSet) -> Result<SignatureDigest> {
    Ok(signature_digest(&signature(s)?))
}

/// A bijection on `0..n`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Permutation(Vec<usize>);

impl Permutation {
    pub fn new(map: Vec<usize>) -> Result<Self> {
        let mut seen = vec![false; map.len()];
        for &v in &map {
            if v >= map.len() {
                return Err(Error::InvalidPermutation(format!(
                    "image {v} out of range 0..{}",
                    map.len()
                )));
            }
            if std::mem::replace(&mut seen[v], true) {
                return Err(Error::InvalidPermutation(format!("image {v} repeated")));
            }
        }
        Ok(Permutation(map))
    }

    pub fn identity(n: usize) -> Self {
        Permutation((0..n).collect())
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn apply(&self, i: usize) -> usize {
        self.0[i]
    }

    /// `self ∘ other`: `i ↦ self(other(i))`.
    pub fn compose(&self, other: &Permutation) -> Permutation {
        assert_eq!(self.len(), other.len());
        Permutation(other.0.iter().map(|&i| self.0[i]).collect())
    }

    pub fn as_slice(&self) -> &[usize] {
        &self.0
    }
}

/// Relabel: the point at new label `i` is the old point at `perm(i)`.
///
/// With this convention `permute_labels(permute_labels(s, τ), σ)` equals
/// `permute_labels(s, τ ∘ σ)`.
pub fn permute_labels(s: &PointSet, perm: &Permutation) -> Result<PointSet> {
    if perm.len() != s.len() {
        return Err(Error::InvalidPermutation(format!(
            "permutation of {} labels applied to {} points",
            perm.len(),
            s.len()
        )));
    }
    PointSet::new(perm.0.iter().map(|&i| s[i].clone()).collect())
}

/// Every permutation of `0..n` in lexicographic order.
pub fn all_permutations(n: usize) -> impl Iterator<Item = Permutation> {
    let mut next: Option<Vec<usize>> = Some((0..n).collect());
    std::iter::from_fn(move || {
        let cur = next.take()?;
        let mut a = cur.clone();
        if let Some(i) = (0..a.len().saturating_sub(1)).rev().find(|&i| a[i] < a[i + 1]) {
            let j = (i + 1..a.len()).rev().find(|&j| a[j] > a[i]).unwrap();
            a.swap(i, j);
            a[i + 1..].reverse();
            next = Some(a);
        }
        Some(Permutation(cur))
    })
}

/// Number of distinct labeled order types over all `n!` relabelings of `s`.
pub fn relabeling_order_types(s: &PointSet) -> Result<usize> {
    let perms: Vec<Permutation> = all_permutations(s.len()).collect();
    let digests = perms
        .par_iter()
        .map(|p| digest_of(&permute_labels(s, p)?))
        .collect::<Result<std::collections::BTreeSet<_>>>()?;
    Ok(digests.len())
}

/// Outcome of [`count_distinct`].
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DistinctReport {
    pub total: usize,
    pub distinct: usize,
    /// Digests that occur more than once, with the input positions holding them.
    pub duplicates: Vec<DuplicateGroup>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DuplicateGroup {
    pub digest: SignatureDigest,
    pub members: Vec<usize>,
}

/// Count distinct signature digests among equally sized point sets.
pub fn count_distinct(sets: &[PointSet]) -> Result<DistinctReport> {
    if let Some(first) = sets.first() {
        if let Some((i, s)) = sets.iter().enumerate().find(|(_, s)| s.len() != first.len()) {
            return Err(Error::InvalidInput(format!(
                "set {i} has {} points, set 0 has {}",
                s.len(),
                first.len()
            )));
        }
    }
    let digests: Vec<SignatureDigest> = sets.par_iter().map(digest_of).collect::<Result<_>>()?;
    Ok(report_from_digests(&digests))
}

pub(crate) fn report_from_digests(digests: &[SignatureDigest]) -> DistinctReport {
    let mut groups: BTreeMap<SignatureDigest, Vec<usize>> = BTreeMap::new();
    for (i, d) in digests.iter().enumerate() {
        groups.entry(*d).or_default().push(i);
    }
    DistinctReport {
        total: digests.len(),
        distinct: groups.len(),
        duplicates: groups
            .into_iter()
            .filter(|(_, m)| m.len() > 1)
            .map(|(digest, members)| DuplicateGroup { digest, members })
            .collect(),
    }
}
