//! Reduced words in the free group on `N` generators with the word metric
//! `d(g, h) = |h⁻¹g|`. The Haagerup embedding sends group elements into the
//! free integer span of oriented Cayley-graph edges.
//!
//! The embedding sends a reduced word `g = g₁⋯gₙ` with prefixes
//! `f₀ = e, f_ℓ = g₁⋯g_ℓ` to the sum of prefix edges `e_(f_{ℓ−1}, f_ℓ)`.
//! Edges are stored under a positively oriented key `(base, j)` standing for
//! `base → base·a_j`; an edge traversed against its orientation contributes
//! `−1` on the key of its reversal. With this normalization all arithmetic is
//! exact and `‖Φ(g) − Φ(h)‖² = |h⁻¹g|` holds as an integer identity.

use std::collections::BTreeMap;
use std::fmt;

use rand::Rng;
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};

/// Largest supported alphabet.
pub const MAX_RANK: usize = 64;
/// Longest supported reduced word.
pub const MAX_WORD_LEN: usize = 10_000;

/// A generator `a_j` or its inverse. Generator indices are 1-based.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Letter {
    generator: u8,
    inverse: bool,
}

impl Letter {
    pub fn new(generator: usize, inverse: bool) -> Result<Self> {
        if generator == 0 || generator > MAX_RANK {
            return Err(Error::IndexOutOfRange {
                index: generator,
                rank: MAX_RANK,
            });
        }
        Ok(Self {
            generator: generator as u8,
            inverse,
        })
    }

    pub fn generator(self) -> usize {
        self.generator as usize
    }

    pub fn is_inverse(self) -> bool {
        self.inverse
    }

    pub fn inv(self) -> Self {
        Self {
            generator: self.generator,
            inverse: !self.inverse,
        }
    }
}

impl fmt::Display for Letter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "a{}", self.generator)?;
        if self.inverse {
            f.write_str("'")?;
        }
        Ok(())
    }
}

/// A reduced word over a fixed alphabet. The empty word is the identity.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct GroupWord {
    rank: u8,
    letters: Vec<Letter>,
}

fn check_rank(rank: usize) -> Result<()> {
    if rank == 0 || rank > MAX_RANK {
        return Err(Error::InvalidParameter(format!(
            "alphabet size {rank} outside 1..={MAX_RANK}"
        )));
    }
    Ok(())
}

fn check_same_rank(g: &GroupWord, h: &GroupWord) -> Result<()> {
    if g.rank != h.rank {
        return Err(Error::AlphabetMismatch {
            left: g.rank(),
            right: h.rank(),
        });
    }
    Ok(())
}

impl GroupWord {
    pub fn identity(rank: usize) -> Result<Self> {
        check_rank(rank)?;
        Ok(Self {
            rank: rank as u8,
            letters: Vec::new(),
        })
    }

    /// The single-letter word `a_j` (or `a_j⁻¹`).
    pub fn generator(rank: usize, j: usize, inverse: bool) -> Result<Self> {
        Self::reduce(rank, [Letter::new(j, inverse)?])
    }

    /// Freely reduces an arbitrary letter sequence.
    pub fn reduce(rank: usize, letters: impl IntoIterator<Item = Letter>) -> Result<Self> {
        check_rank(rank)?;
        let mut stack: Vec<Letter> = Vec::new();
        for letter in letters {
            if letter.generator() > rank {
                return Err(Error::IndexOutOfRange {
                    index: letter.generator(),
                    rank,
                });
            }
            if stack.last() == Some(&letter.inv()) {
                stack.pop();
            } else {
                stack.push(letter);
            }
        }
        if stack.len() > MAX_WORD_LEN {
            return Err(Error::WordTooLong(stack.len()));
        }
        Ok(Self {
            rank: rank as u8,
            letters: stack,
        })
    }

    pub fn rank(&self) -> usize {
        self.rank as usize
    }

    pub fn letters(&self) -> &[Letter] {
        &self.letters
    }

    /// Word length `|g|`.
    #[allow(clippy::len_without_is_empty)] // the empty word is `is_identity`
    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_identity(&self) -> bool {
        self.letters.is_empty()
    }

    pub fn inv(&self) -> Self {
        Self {
            rank: self.rank,
            letters: self.letters.iter().rev().map(|l| l.inv()).collect(),
        }
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        check_same_rank(self, other)?;
        Self::reduce(
            self.rank(),
            self.letters.iter().chain(other.letters.iter()).copied(),
        )
    }

    /// Word metric `d(self, other) = |other⁻¹ · self|`.
    pub fn distance(&self, other: &Self) -> Result<usize> {
        Ok(other.inv().mul(self)?.len())
    }

    /// Prefix `g₁⋯g_ℓ` of a reduced word (itself reduced).
    fn prefix(&self, len: usize) -> Self {
        Self {
            rank: self.rank,
            letters: self.letters[..len].to_vec(),
        }
    }
}

impl fmt::Display for GroupWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.letters.is_empty() {
            return f.write_str("e");
        }
        for (i, letter) in self.letters.iter().enumerate() {
            if i > 0 {
                f.write_str(" ")?;
            }
            write!(f, "{letter}")?;
        }
        Ok(())
    }
}

impl Serialize for GroupWord {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

/// Parses `"a1 a2' a1"` style text: whitespace-separated tokens `a<k>` or
/// `a<k>'`, with `'` marking the inverse. The empty string and `"e"` denote
/// the identity.
pub fn parse_word(text: &str, rank: usize) -> Result<GroupWord> {
    check_rank(rank)?;
    let text = text.trim();
    if text.is_empty() || text == "e" {
        return GroupWord::identity(rank);
    }
    let mut letters = Vec::new();
    for token in text.split_whitespace() {
        let body = token
            .strip_prefix('a')
            .ok_or_else(|| Error::Parse(format!("bad token {token:?}")))?;
        let (digits, inverse) = match body.strip_suffix('\'') {
            Some(d) => (d, true),
            None => (body, false),
        };
        if digits.is_empty() || !digits.bytes().all(|b| b.is_ascii_digit()) {
            return Err(Error::Parse(format!("bad token {token:?}")));
        }
        let index: usize = digits
            .parse()
            .map_err(|_| Error::Parse(format!("bad token {token:?}")))?;
        if index == 0 || index > rank {
            return Err(Error::IndexOutOfRange { index, rank });
        }
        letters.push(Letter::new(index, inverse)?);
    }
    GroupWord::reduce(rank, letters)
}

/// Canonical key of the oriented edge `base → base·a_generator`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct EdgeKey {
    pub base: GroupWord,
    pub generator: usize,
}

/// Sparse integer vector over canonical edge keys. Zero coefficients are
/// never stored.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EdgeVector {
    rank: usize,
    entries: BTreeMap<EdgeKey, i64>,
}

impl EdgeVector {
    pub fn zero(rank: usize) -> Self {
        Self {
            rank,
            entries: BTreeMap::new(),
        }
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn entries(&self) -> &BTreeMap<EdgeKey, i64> {
        &self.entries
    }

    pub fn nnz(&self) -> usize {
        self.entries.len()
    }

    pub fn is_zero(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn get(&self, key: &EdgeKey) -> i64 {
        self.entries.get(key).copied().unwrap_or(0)
    }

    fn add_term(&mut self, key: EdgeKey, coefficient: i64) {
        let slot = self.entries.entry(key.clone()).or_insert(0);
        *slot += coefficient;
        if *slot == 0 {
            self.entries.remove(&key);
        }
    }

    fn check_rank(&self, other: &Self) -> Result<()> {
        if self.rank != other.rank {
            return Err(Error::AlphabetMismatch {
                left: self.rank,
                right: other.rank,
            });
        }
        Ok(())
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.check_rank(other)?;
        let mut out = self.clone();
        for (key, &c) in &other.entries {
            out.add_term(key.clone(), -c);
        }
        Ok(out)
    }

    pub fn norm_sq(&self) -> i64 {
        self.entries.values().map(|c| c * c).sum()
    }
}

/// Haagerup embedding `Φ(g)`: one `±1` entry per letter of the reduced word.
pub fn haagerup_embed(g: &GroupWord) -> EdgeVector {
    let mut out = EdgeVector::zero(g.rank());
    for (ell, letter) in g.letters.iter().enumerate() {
        let (key, sign) = if letter.is_inverse() {
            // f_{ℓ-1}⁻¹ f_ℓ = a_j⁻¹, so store −e_(f_ℓ, f_ℓ·a_j).
            (
                EdgeKey {
                    base: g.prefix(ell + 1),
                    generator: letter.generator(),
                },
                -1,
            )
        } else {
            (
                EdgeKey {
                    base: g.prefix(ell),
                    generator: letter.generator(),
                },
                1,
            )
        };
        out.add_term(key, sign);
    }
    out
}

/// Integer dot product over canonical keys.
pub fn edge_inner(u: &EdgeVector, v: &EdgeVector) -> Result<i64> {
    u.check_rank(v)?;
    let (small, large) = if u.nnz() <= v.nnz() { (u, v) } else { (v, u) };
    Ok(small
        .entries
        .iter()
        .map(|(key, c)| c * large.get(key))
        .sum())
}

/// `‖Φ(g) − Φ(h)‖²`, computed from the embeddings.
pub fn edge_dist_sq(g: &GroupWord, h: &GroupWord) -> Result<i64> {
    check_same_rank(g, h)?;
    let diff = haagerup_embed(g).sub(&haagerup_embed(h))?;
    edge_inner(&diff, &diff)
}

/// All reduced words of length at most `max_len`, ordered by length and then
/// by letter sequence.
pub fn enumerate_words(rank: usize, max_len: usize) -> Result<Vec<GroupWord>> {
    let mut all = vec![GroupWord::identity(rank)?];
    let mut frontier = all.clone();
    let alphabet: Vec<Letter> = (1..=rank)
        .flat_map(|j| [Letter::new(j, false), Letter::new(j, true)])
        .collect::<Result<_>>()?;
    for _ in 0..max_len {
        let mut next = Vec::new();
        for word in &frontier {
            for &letter in &alphabet {
                if word.letters.last() == Some(&letter.inv()) {
                    continue;
                }
                let mut letters = word.letters.clone();
                letters.push(letter);
                next.push(GroupWord {
                    rank: word.rank,
                    letters,
                });
            }
        }
        all.extend(next.iter().cloned());
        frontier = next;
    }
    Ok(all)
}

/// A uniformly random reduced word whose length is uniform in `0..=max_len`.
pub fn random_word<R: Rng + ?Sized>(rng: &mut R, rank: usize, max_len: usize) -> Result<GroupWord> {
    check_rank(rank)?;
    if max_len > MAX_WORD_LEN {
        return Err(Error::WordTooLong(max_len));
    }
    let len = rng.random_range(0..=max_len);
    let mut letters: Vec<Letter> = Vec::with_capacity(len);
    while letters.len() < len {
        let letter = Letter::new(rng.random_range(1..=rank), rng.random_bool(0.5))?;
        if letters.last() == Some(&letter.inv()) {
            continue;
        }
        letters.push(letter);
    }
    Ok(GroupWord {
        rank: rank as u8,
        letters,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn w(text: &str) -> GroupWord {
        parse_word(text, 3).unwrap()
    }

    #[test]
    fn parse_identity_and_cancellation() {
        assert!(parse_word("", 2).unwrap().is_identity());
        assert!(parse_word("e", 2).unwrap().is_identity());
        assert!(parse_word("a1 a1'", 2).unwrap().is_identity());
        assert!(parse_word("a2 a1 a1' a2'", 2).unwrap().is_identity());
    }

    #[test]
    fn parse_keeps_reduced_word() {
        let g = parse_word("a1 a2' a2' a1", 2).unwrap();
        assert_eq!(g.len(), 4);
        assert_eq!(g.to_string(), "a1 a2' a2' a1");
    }

    #[test]
    fn parse_errors() {
        assert!(matches!(parse_word("b1", 2), Err(Error::Parse(_))));
        assert!(matches!(parse_word("a", 2), Err(Error::Parse(_))));
        assert!(matches!(parse_word("a1''", 2), Err(Error::Parse(_))));
        assert!(matches!(
            parse_word("a3", 2),
            Err(Error::IndexOutOfRange { index: 3, rank: 2 })
        ));
        assert!(matches!(
            parse_word("a0", 2),
            Err(Error::IndexOutOfRange { .. })
        ));
        assert!(parse_word("a1", 0).is_err());
        assert!(parse_word("a1", 65).is_err());
    }

    #[test]
    fn group_operations() {
        let g = w("a1 a2");
        assert!(g.mul(&g.inv()).unwrap().is_identity());
        assert!(g.inv().mul(&g).unwrap().is_identity());
        assert_eq!(GroupWord::identity(3).unwrap().len(), 0);
        assert_eq!(g.inv().to_string(), "a2' a1'");
        assert_eq!(w("a1 a2").mul(&w("a2' a3")).unwrap(), w("a1 a3"));
    }

    #[test]
    fn alphabet_mismatch() {
        let g = parse_word("a1", 2).unwrap();
        let h = parse_word("a1", 3).unwrap();
        assert!(matches!(g.mul(&h), Err(Error::AlphabetMismatch { .. })));
        assert!(matches!(
            edge_dist_sq(&g, &h),
            Err(Error::AlphabetMismatch { .. })
        ));
    }

    #[test]
    fn embedding_examples() {
        let e = GroupWord::identity(3).unwrap();
        assert!(haagerup_embed(&e).is_zero());

        let a1 = haagerup_embed(&w("a1"));
        assert_eq!(a1.nnz(), 1);
        assert_eq!(
            a1.get(&EdgeKey {
                base: e.clone(),
                generator: 1
            }),
            1
        );

        let a1_inv = haagerup_embed(&w("a1'"));
        assert_eq!(a1_inv.nnz(), 1);
        assert_eq!(
            a1_inv.get(&EdgeKey {
                base: w("a1'"),
                generator: 1
            }),
            -1
        );
    }

    #[test]
    fn distance_examples() {
        let e = GroupWord::identity(3).unwrap();
        let g = w("a1 a2' a3");
        assert_eq!(edge_dist_sq(&g, &g).unwrap(), 0);
        assert_eq!(edge_dist_sq(&w("a1"), &e).unwrap(), 1);
        assert_eq!(edge_dist_sq(&w("a1 a2"), &w("a1 a3")).unwrap(), 2);
        assert_eq!(w("a1 a2").distance(&w("a1 a3")).unwrap(), 2);
    }

    #[test]
    fn enumeration_count() {
        // 1 + 4 + 4·3 + 4·3² + 4·3³
        assert_eq!(enumerate_words(2, 4).unwrap().len(), 161);
        assert_eq!(enumerate_words(3, 2).unwrap().len(), 1 + 6 + 30);
    }

    #[test]
    fn embeddings_injective_on_short_words() {
        let words = enumerate_words(2, 4).unwrap();
        let mut seen = std::collections::BTreeSet::new();
        for g in &words {
            let emb: Vec<_> = haagerup_embed(g).entries().clone().into_iter().collect();
            assert!(seen.insert(emb), "duplicate embedding for {g}");
        }
    }

    #[test]
    fn metric_axioms_exhaustive() {
        let words = enumerate_words(2, 2).unwrap();
        for g in &words {
            for h in &words {
                let dgh = g.distance(h).unwrap();
                assert_eq!(dgh, h.distance(g).unwrap());
                assert_eq!(dgh == 0, g == h);
                for k in &words {
                    assert!(dgh <= g.distance(k).unwrap() + k.distance(h).unwrap());
                }
            }
        }
    }

    #[test]
    fn random_words_are_reduced() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..200 {
            let g = random_word(&mut rng, 3, 20).unwrap();
            assert!(g.len() <= 20);
            let again = GroupWord::reduce(3, g.letters().iter().copied()).unwrap();
            assert_eq!(again, g);
        }
    }

    #[test]
    fn word_length_cap() {
        let letters = std::iter::repeat_n(Letter::new(1, false).unwrap(), MAX_WORD_LEN + 1);
        assert!(matches!(
            GroupWord::reduce(1, letters),
            Err(Error::WordTooLong(_))
        ));
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        fn letters(rank: usize, max_len: usize) -> impl Strategy<Value = Vec<Letter>> {
            prop::collection::vec(
                (1..=rank, any::<bool>()).prop_map(|(j, inv)| Letter::new(j, inv).unwrap()),
                0..=max_len,
            )
        }

        proptest! {
            #[test]
            fn reduce_is_idempotent(raw in letters(3, 30)) {
                let g = GroupWord::reduce(3, raw).unwrap();
                let again = GroupWord::reduce(3, g.letters().iter().copied()).unwrap();
                prop_assert_eq!(again, g);
            }

            #[test]
            fn haagerup_identity(a in letters(3, 20), b in letters(3, 20)) {
                let g = GroupWord::reduce(3, a).unwrap();
                let h = GroupWord::reduce(3, b).unwrap();
                let lhs = edge_dist_sq(&g, &h).unwrap();
                prop_assert_eq!(lhs, h.inv().mul(&g).unwrap().len() as i64);
                prop_assert_eq!(haagerup_embed(&g).norm_sq(), g.len() as i64);
            }

            #[test]
            fn length_laws(a in letters(2, 20), b in letters(2, 20)) {
                let g = GroupWord::reduce(2, a).unwrap();
                let h = GroupWord::reduce(2, b).unwrap();
                prop_assert_eq!(g.inv().len(), g.len());
                prop_assert!(g.mul(&h).unwrap().len() <= g.len() + h.len());
                prop_assert!(g.mul(&g.inv()).unwrap().is_identity());
            }
        }
    }
}
