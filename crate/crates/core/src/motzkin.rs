//! Reduced Motzkin words and their level structure.
//!
//! A reduced Motzkin word of length `n` is a sequence of positive
//! integers `j_1 ... j_n` with `j_1 = j_n = 1` in which consecutive
//! letters differ by at most one. Reading the letters as heights turns
//! the word into a lattice path with rise, fall, and level steps; words
//! of length `n` correspond to Motzkin paths with `n - 1` steps, so the
//! single-letter word `1` stands for the empty path.
//!
//! The module provides:
//!
//! * validation and enumeration of words,
//! * the level return partition, a noncrossing set partition of the
//!   positions obtained by linking returns to each level,
//! * weak local maxima, which are exactly the singleton blocks,
//! * adaptedness of a label tuple to a word, the compatibility condition
//!   under which the word contributes to a mixed moment,
//! * classification of the path shapes (flat, pyramid, pyramid followed
//!   by a flat run) that survive centering, and
//! * counting of words by their number of local maxima.

use crate::error::Error;
use crate::Label;
use std::fmt;

/// A reduced Motzkin word: letters are positive levels, the endpoints sit
/// at level 1, and consecutive letters differ by at most one.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct MotzkinWord {
    letters: Vec<u32>,
}

impl MotzkinWord {
    /// Validates a letter sequence and wraps it. The scan runs left to
    /// right and reports the first violated constraint.
    pub fn new(letters: Vec<u32>) -> Result<Self, Error> {
        if letters.is_empty() {
            return Err(Error::EmptyWord);
        }
        for (idx, &letter) in letters.iter().enumerate() {
            let position = idx + 1;
            if letter == 0 {
                return Err(Error::NonPositiveLetter { position });
            }
            if idx == 0 {
                if letter != 1 {
                    return Err(Error::BadEndpoint { position, letter });
                }
            } else {
                let prev = letters[idx - 1];
                if letter.abs_diff(prev) > 1 {
                    return Err(Error::BadStep { position });
                }
            }
        }
        let last = *letters.last().expect("nonempty");
        if last != 1 {
            return Err(Error::BadEndpoint {
                position: letters.len(),
                letter: last,
            });
        }
        Ok(MotzkinWord { letters })
    }

    /// Letters of the word, 0-indexed.
    pub fn letters(&self) -> &[u32] {
        &self.letters
    }

    /// Letter at 1-indexed position `k`.
    pub fn letter(&self, k: usize) -> u32 {
        self.letters[k - 1]
    }

    /// Number of letters.
    pub fn len(&self) -> usize {
        self.letters.len()
    }

    /// A word always has at least one letter, but clippy likes the pair.
    pub fn is_empty(&self) -> bool {
        false
    }

    /// Maximal letter, i.e. the height of the path.
    pub fn height(&self) -> u32 {
        *self.letters.iter().max().expect("nonempty")
    }

    /// Positions (1-indexed, ascending) of the weak local maxima: `k` is
    /// one when `j_{k-1} <= j_k >= j_{k+1}` with the out-of-range
    /// comparisons dropped at the boundary. The single-letter word has
    /// the one local maximum `1`.
    pub fn local_maxima(&self) -> Vec<usize> {
        let n = self.letters.len();
        (1..=n)
            .filter(|&k| {
                let left_ok = k == 1 || self.letters[k - 2] <= self.letters[k - 1];
                let right_ok = k == n || self.letters[k - 1] >= self.letters[k];
                left_ok && right_ok
            })
            .collect()
    }

    /// The level return partition of the positions `1..=n`.
    ///
    /// For each level `j`, scan the positions at that level in ascending
    /// order and link two neighbours in the scan exactly when they are
    /// not adjacent in the word and every position strictly between them
    /// sits at a level above `j`. Maximal runs of linked positions form
    /// the blocks. The result is noncrossing, and its singleton blocks
    /// are exactly the weak local maxima.
    pub fn level_return_partition(&self) -> LevelReturnPartition {
        let n = self.letters.len();
        let mut blocks: Vec<Block> = Vec::new();
        for level in 1..=self.height() {
            let at_level: Vec<usize> = (1..=n).filter(|&k| self.letter(k) == level).collect();
            let mut current: Vec<usize> = Vec::new();
            for &k in &at_level {
                if let Some(&prev) = current.last() {
                    let gap = k - prev > 1;
                    let returns = (prev + 1..k).all(|r| self.letter(r) > level);
                    if gap && returns {
                        current.push(k);
                        continue;
                    }
                    blocks.push(Block {
                        level,
                        positions: std::mem::take(&mut current),
                    });
                }
                current.push(k);
            }
            if !current.is_empty() {
                blocks.push(Block {
                    level,
                    positions: current,
                });
            }
        }
        blocks.sort_by_key(|b| b.positions[0]);
        LevelReturnPartition {
            word_length: n,
            blocks,
        }
    }

    /// Checks whether a label tuple is adapted to this word.
    ///
    /// Adaptedness requires labels to be constant on every block of the
    /// level return partition, and for every pair of consecutive
    /// positions `p < q` inside a block at level `j`, every block one
    /// level up that lies strictly between `p` and `q` must carry a
    /// different label. The tuple itself must alternate (no two adjacent
    /// labels equal) and match the word length.
    pub fn is_adapted(&self, labels: &LabelTuple) -> Result<AdaptednessReport, Error> {
        if labels.len() != self.len() {
            return Err(Error::LengthMismatch {
                expected: self.len(),
                got: labels.len(),
            });
        }
        let partition = self.level_return_partition();
        for block in partition.blocks() {
            let first = block.positions[0];
            for &p in &block.positions[1..] {
                if labels.get(p) != labels.get(first) {
                    return Ok(AdaptednessReport::rejected(
                        AdaptednessViolation::LabelMismatch {
                            block: block.positions.clone(),
                            position_a: first,
                            position_b: p,
                        },
                    ));
                }
            }
        }
        for outer in partition.blocks() {
            for pair in outer.positions.windows(2) {
                let (p, q) = (pair[0], pair[1]);
                for inner in partition.blocks() {
                    if inner.level != outer.level + 1 {
                        continue;
                    }
                    if inner.positions[0] <= p || *inner.positions.last().unwrap() >= q {
                        continue;
                    }
                    if labels.get(inner.positions[0]) == labels.get(outer.positions[0]) {
                        return Ok(AdaptednessReport::rejected(
                            AdaptednessViolation::NestedAlternation {
                                outer: outer.positions.clone(),
                                inner: inner.positions.clone(),
                            },
                        ));
                    }
                }
            }
        }
        Ok(AdaptednessReport::adapted())
    }

    /// Classifies the path shape. Only flat words, pyramids, and pyramids
    /// followed by a flat run are distinguished; everything else is
    /// lumped into [`PathKind::Other`] because it cannot contribute to a
    /// first-order derivative of a centered product.
    pub fn classify(&self) -> PathClass {
        let n = self.letters.len();
        if n == 1 {
            // The empty path counts as both flat and (degenerate) pyramid;
            // the apex marker records the pyramid reading.
            return PathClass {
                kind: PathKind::Flat,
                middle: Some(1),
                split: None,
            };
        }
        if self.letters.iter().all(|&j| j == 1) {
            return PathClass {
                kind: PathKind::Flat,
                middle: None,
                split: None,
            };
        }
        // Longest strictly ascending prefix 1, 2, ..., m.
        let mut m = 1usize;
        while m < n && self.letters[m] == self.letters[m - 1] + 1 {
            m += 1;
        }
        // A pyramid of height m occupies positions 1..=2m-1 and must
        // descend strictly back to level 1.
        let pyramid_len = 2 * m - 1;
        if m >= 2 && pyramid_len <= n {
            let descends =
                (m..pyramid_len).all(|idx| self.letters[idx] == self.letters[idx - 1] - 1);
            if descends {
                if pyramid_len == n {
                    return PathClass {
                        kind: PathKind::Pyramid,
                        middle: Some(m),
                        split: None,
                    };
                }
                let tail_flat = self.letters[pyramid_len..].iter().all(|&j| j == 1);
                if tail_flat {
                    return PathClass {
                        kind: PathKind::PyramidThenFlat,
                        middle: Some(m),
                        split: Some(pyramid_len + 1),
                    };
                }
            }
        }
        PathClass {
            kind: PathKind::Other,
            middle: None,
            split: None,
        }
    }
}

impl fmt::Display for MotzkinWord {
    /// Letters are shown as a digit string while they fit, and
    /// comma-separated otherwise.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.height() <= 9 {
            for &j in &self.letters {
                write!(f, "{j}")?;
            }
            Ok(())
        } else {
            let parts: Vec<String> = self.letters.iter().map(|j| j.to_string()).collect();
            f.write_str(&parts.join(","))
        }
    }
}

/// One block of a level return partition: the level it lives on and its
/// positions in ascending order.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Block {
    pub level: u32,
    pub positions: Vec<usize>,
}

impl Block {
    pub fn is_singleton(&self) -> bool {
        self.positions.len() == 1
    }
}

/// The level return partition of a word, blocks ordered by their first
/// position.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct LevelReturnPartition {
    word_length: usize,
    blocks: Vec<Block>,
}

impl LevelReturnPartition {
    pub fn blocks(&self) -> &[Block] {
        &self.blocks
    }

    pub fn word_length(&self) -> usize {
        self.word_length
    }

    /// Positions of the singleton blocks, ascending.
    pub fn singletons(&self) -> Vec<usize> {
        let mut out: Vec<usize> = self
            .blocks
            .iter()
            .filter(|b| b.is_singleton())
            .map(|b| b.positions[0])
            .collect();
        out.sort_unstable();
        out
    }

    /// Blocks as plain position sets, for comparisons in tests.
    pub fn position_sets(&self) -> Vec<Vec<usize>> {
        self.blocks.iter().map(|b| b.positions.clone()).collect()
    }

    /// Two blocks cross when they interleave as p1 < q1 < p2 < q2 with
    /// the p's in one block and the q's in the other. The level return
    /// partition never crosses; the check is exposed for the test suites.
    pub fn is_noncrossing(&self) -> bool {
        for (i, a) in self.blocks.iter().enumerate() {
            for b in &self.blocks[i + 1..] {
                for pa in a.positions.windows(2) {
                    for &qb in &b.positions {
                        if pa[0] < qb && qb < pa[1] {
                            // b has a position inside a gap of a; all of b
                            // must then stay inside that gap.
                            if b.positions.iter().any(|&q| q < pa[0] || q > pa[1]) {
                                return false;
                            }
                        }
                    }
                }
            }
        }
        true
    }
}

/// Tuple of algebra labels attached to the positions of a word. Adjacent
/// labels must differ, mirroring an alternating product.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct LabelTuple {
    labels: Vec<Label>,
}

impl LabelTuple {
    pub fn new(labels: Vec<Label>) -> Result<Self, Error> {
        if labels.is_empty() {
            return Err(Error::EmptyTuple);
        }
        for (idx, pair) in labels.windows(2).enumerate() {
            if pair[0] == pair[1] {
                return Err(Error::AdjacentLabels { position: idx + 1 });
            }
        }
        Ok(LabelTuple { labels })
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    /// Label at 1-indexed position `k`.
    pub fn get(&self, k: usize) -> &Label {
        &self.labels[k - 1]
    }

    pub fn labels(&self) -> &[Label] {
        &self.labels
    }
}

/// Outcome of an adaptedness check. When the tuple is not adapted the
/// report carries the first violation found.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct AdaptednessReport {
    violation: Option<AdaptednessViolation>,
}

impl AdaptednessReport {
    fn adapted() -> Self {
        AdaptednessReport { violation: None }
    }

    fn rejected(v: AdaptednessViolation) -> Self {
        AdaptednessReport { violation: Some(v) }
    }

    pub fn is_adapted(&self) -> bool {
        self.violation.is_none()
    }

    pub fn violation(&self) -> Option<&AdaptednessViolation> {
        self.violation.as_ref()
    }
}

/// Why a label tuple fails to be adapted.
#[derive(Clone, PartialEq, Eq, Debug)]
pub enum AdaptednessViolation {
    /// Two positions of one block carry different labels.
    LabelMismatch {
        block: Vec<usize>,
        position_a: usize,
        position_b: usize,
    },
    /// A block nested directly inside a gap of another block repeats the
    /// outer label.
    NestedAlternation {
        outer: Vec<usize>,
        inner: Vec<usize>,
    },
}

impl fmt::Display for AdaptednessViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            AdaptednessViolation::LabelMismatch {
                block,
                position_a,
                position_b,
            } => write!(
                f,
                "labels at positions {position_a} and {position_b} of block {block:?} differ"
            ),
            AdaptednessViolation::NestedAlternation { outer, inner } => write!(
                f,
                "block {inner:?} repeats the label of the enclosing block {outer:?}"
            ),
        }
    }
}

/// Shape of a path, as far as derivative formulas care.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum PathKind {
    /// All letters equal to 1.
    Flat,
    /// Strictly up to a single apex and strictly back down; odd length.
    Pyramid,
    /// A pyramid of length at least 3 followed by a nonempty flat run.
    PyramidThenFlat,
    /// Any other shape.
    Other,
}

impl fmt::Display for PathKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let name = match self {
            PathKind::Flat => "flat",
            PathKind::Pyramid => "pyramid",
            PathKind::PyramidThenFlat => "pyramid_then_flat",
            PathKind::Other => "other",
        };
        f.write_str(name)
    }
}

/// Classification result. `middle` is the apex position of the pyramid
/// part when there is one; for the single-letter word it marks the
/// degenerate pyramid reading of the flat classification. `split` is the
/// first position of the flat tail for [`PathKind::PyramidThenFlat`].
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct PathClass {
    pub kind: PathKind,
    pub middle: Option<usize>,
    pub split: Option<usize>,
}

impl PathClass {
    /// True for genuine pyramids and for the single-letter word, which
    /// behaves as the degenerate pyramid in the derivative formulas.
    pub fn pyramid_compatible(&self) -> bool {
        matches!(self.kind, PathKind::Pyramid)
            || (matches!(self.kind, PathKind::Flat) && self.middle == Some(1))
    }
}

/// Enumerates all reduced Motzkin words of length `n` in lexicographic
/// order of their letter sequences. The count is the Motzkin number of
/// `n - 1` steps.
pub fn enumerate_words(n: usize) -> Result<Vec<MotzkinWord>, Error> {
    if n == 0 {
        return Err(Error::EmptyWord);
    }
    let mut out = Vec::new();
    let mut prefix: Vec<u32> = vec![1];
    extend(&mut prefix, n, &mut out);
    Ok(out)
}

fn extend(prefix: &mut Vec<u32>, n: usize, out: &mut Vec<MotzkinWord>) {
    let level = *prefix.last().expect("prefix starts nonempty");
    let remaining = n - prefix.len();
    if remaining == 0 {
        if level == 1 {
            out.push(MotzkinWord {
                letters: prefix.clone(),
            });
        }
        return;
    }
    // Candidates in ascending order keep the enumeration lexicographic;
    // a branch is viable only if the path can still descend to 1.
    for next in [level - 1, level, level + 1] {
        if next < 1 {
            continue;
        }
        if (next - 1) as usize > remaining - 1 {
            continue;
        }
        prefix.push(next);
        extend(prefix, n, out);
        prefix.pop();
    }
}

/// Number of words of length `n` with exactly `k` weak local maxima,
/// computed by enumeration.
pub fn count_by_local_maxima(n: usize, k: usize) -> Result<u64, Error> {
    let words = enumerate_words(n)?;
    Ok(words.iter().filter(|w| w.local_maxima().len() == k).count() as u64)
}
