//! Single-pass discovery of minimal co-occurrences.
//!
//! A window `[start, end]` (1-based, inclusive) is a *co-occurrence* when it holds
//! every member of the query set, and *minimal* when dropping either endpoint breaks
//! that. The scanner keeps the query members in a move-to-front list ordered by
//! last occurrence; the back of the list is the member seen longest ago, so the
//! shortest co-occurrence ending at the current position (`lm`) is read off in
//! constant time. A minimal co-occurrence ends at `j` exactly when `lm(j)` is not
//! `lm(j - 1) + 1`.

use std::collections::HashMap;

use ahash::RandomState;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::text::TokenId;

/// Seed used when the caller does not pick one.
pub const DEFAULT_SEED: u64 = 0x5eed_c0c0;

/// The query set `Q`, as dense token ids.
#[derive(Debug, Clone)]
pub struct QueryProfile {
    members: Vec<TokenId>,
    slots: HashMap<TokenId, usize, RandomState>,
    seed: u64,
}

impl QueryProfile {
    /// Deduplicates `members` and rejects sets with fewer than two distinct ids.
    pub fn new(members: impl IntoIterator<Item = TokenId>) -> Result<Self> {
        Self::with_seed(members, DEFAULT_SEED)
    }

    pub fn with_seed(members: impl IntoIterator<Item = TokenId>, seed: u64) -> Result<Self> {
        let mut members: Vec<TokenId> = members.into_iter().collect();
        members.sort_unstable();
        members.dedup();
        if members.len() < 2 {
            return Err(Error::InvalidQuery(members.len()));
        }
        let hasher = RandomState::with_seeds(seed, seed.rotate_left(17), !seed, seed ^ 0x9e37_79b9_7f4a_7c15);
        let mut slots = HashMap::with_capacity_and_hasher(members.len(), hasher);
        for (slot, &m) in members.iter().enumerate() {
            slots.insert(m, slot);
        }
        Ok(QueryProfile {
            members,
            slots,
            seed,
        })
    }

    /// Number of distinct members, `q`.
    pub fn q(&self) -> usize {
        self.members.len()
    }

    /// Members in ascending id order.
    pub fn members(&self) -> &[TokenId] {
        &self.members
    }

    pub fn contains(&self, token: TokenId) -> bool {
        self.slots.contains_key(&token)
    }

    /// Dense slot in `0..q` for a member.
    pub fn slot(&self, token: TokenId) -> Option<usize> {
        self.slots.get(&token).copied()
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }
}

/// A minimal co-occurrence `[start, end]`, 1-based and inclusive.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct MinimalCooccurrence {
    pub start: usize,
    pub end: usize,
}

impl MinimalCooccurrence {
    pub fn new(start: usize, end: usize) -> Self {
        MinimalCooccurrence { start, end }
    }

    pub fn len(&self) -> usize {
        self.end - self.start + 1
    }

    pub fn is_empty(&self) -> bool {
        false
    }
}

const NIL: usize = usize::MAX;

#[derive(Debug, Clone, Copy)]
struct Node {
    prev: usize,
    next: usize,
    /// 1-based position of the last occurrence, 0 while unseen.
    last: usize,
}

/// Query members ordered by recency of their last occurrence, most recent first.
///
/// Nodes live in a `q`-sized arena indexed by the member's slot; unseen members are
/// not linked into the list.
#[derive(Debug, Clone)]
pub struct RecencyList {
    nodes: Vec<Node>,
    head: usize,
    tail: usize,
    seen: usize,
}

impl RecencyList {
    pub fn new(q: usize) -> Self {
        RecencyList {
            nodes: vec![
                Node {
                    prev: NIL,
                    next: NIL,
                    last: 0
                };
                q
            ],
            head: NIL,
            tail: NIL,
            seen: 0,
        }
    }

    /// Number of arena entries; always `q`.
    pub fn capacity(&self) -> usize {
        self.nodes.len()
    }

    /// Distinct members seen so far.
    pub fn seen_count(&self) -> usize {
        self.seen
    }

    /// Records an occurrence of the member in `slot` at `pos` and moves it to the front.
    pub fn touch(&mut self, slot: usize, pos: usize) {
        if self.nodes[slot].last == 0 {
            self.seen += 1;
        } else if self.head == slot {
            self.nodes[slot].last = pos;
            return;
        } else {
            self.unlink(slot);
        }
        self.nodes[slot].last = pos;
        self.push_front(slot);
    }

    fn unlink(&mut self, slot: usize) {
        let Node { prev, next, .. } = self.nodes[slot];
        if prev != NIL {
            self.nodes[prev].next = next;
        } else {
            self.head = next;
        }
        if next != NIL {
            self.nodes[next].prev = prev;
        } else {
            self.tail = prev;
        }
    }

    fn push_front(&mut self, slot: usize) {
        self.nodes[slot].prev = NIL;
        self.nodes[slot].next = self.head;
        if self.head != NIL {
            self.nodes[self.head].prev = slot;
        } else {
            self.tail = slot;
        }
        self.head = slot;
    }

    /// Slots from most to least recently seen.
    pub fn order(&self) -> Vec<usize> {
        let mut out = Vec::with_capacity(self.seen);
        let mut cur = self.head;
        while cur != NIL {
            out.push(cur);
            cur = self.nodes[cur].next;
        }
        out
    }

    /// Last occurrence of the member at the back of the list.
    pub fn oldest_position(&self) -> Option<usize> {
        (self.tail != NIL).then(|| self.nodes[self.tail].last)
    }

    /// `lm(j)`: length of the shortest co-occurrence ending at `j`, if every member
    /// has been seen.
    pub fn lm(&self, j: usize) -> Option<usize> {
        if self.seen < self.nodes.len() {
            return None;
        }
        self.oldest_position().map(|p| j - p + 1)
    }
}

/// Streaming scanner over one input. Feed tokens with [`Scanner::push`].
#[derive(Debug, Clone)]
pub struct Scanner<'q> {
    profile: &'q QueryProfile,
    list: RecencyList,
    pos: usize,
    lm: Option<usize>,
}

impl<'q> Scanner<'q> {
    pub fn new(profile: &'q QueryProfile) -> Self {
        Scanner {
            profile,
            list: RecencyList::new(profile.q()),
            pos: 0,
            lm: None,
        }
    }

    /// Consumes the next token; returns the minimal co-occurrence ending here, if any.
    pub fn push(&mut self, token: TokenId) -> Option<MinimalCooccurrence> {
        self.pos += 1;
        if let Some(slot) = self.profile.slot(token) {
            self.list.touch(slot, self.pos);
        }
        let lm = self.list.lm(self.pos);
        let emitted = match (lm, self.lm) {
            (Some(cur), Some(prev)) if cur == prev + 1 => None,
            (Some(cur), _) => Some(MinimalCooccurrence::new(self.pos - cur + 1, self.pos)),
            (None, _) => None,
        };
        self.lm = lm;
        emitted
    }

    /// `lm` at the current position.
    pub fn lm(&self) -> Option<usize> {
        self.lm
    }

    /// Tokens consumed so far (the current 1-based position).
    pub fn position(&self) -> usize {
        self.pos
    }

    pub fn recency(&self) -> &RecencyList {
        &self.list
    }
}

/// All minimal co-occurrences of `profile` in `tokens`, ordered by end position.
pub fn scan_minimal(tokens: &[TokenId], profile: &QueryProfile) -> Vec<MinimalCooccurrence> {
    let mut scanner = Scanner::new(profile);
    tokens.iter().filter_map(|&t| scanner.push(t)).collect()
}

/// Largest number of intervals in `mins` covering a single position.
pub fn coverage_depth(mins: &[MinimalCooccurrence]) -> usize {
    // Starts and ends are both increasing, so a two-pointer sweep over events works.
    let mut best = 0;
    let mut open = 0usize;
    let mut closed = 0usize;
    for m in mins {
        while closed < open && mins[closed].end < m.start {
            closed += 1;
        }
        open += 1;
        best = best.max(open - closed);
    }
    best
}

/// Whether starts and ends are both strictly increasing.
pub fn is_properly_ordered(mins: &[MinimalCooccurrence]) -> bool {
    mins.windows(2)
        .all(|w| w[0].start < w[1].start && w[0].end < w[1].end)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn profile(s: &str) -> QueryProfile {
        QueryProfile::new(s.bytes().map(TokenId::from)).unwrap()
    }

    fn toks(s: &str) -> Vec<TokenId> {
        s.bytes().map(TokenId::from).collect()
    }

    #[test]
    fn worked_example() {
        let got = scan_minimal(&toks("----BC-ACCB--"), &profile("ABC"));
        assert_eq!(got, vec![MinimalCooccurrence::new(5, 8), MinimalCooccurrence::new(8, 11)]);
    }

    #[test]
    fn whole_string_is_the_only_window() {
        assert_eq!(scan_minimal(&toks("AB"), &profile("AB")), vec![MinimalCooccurrence::new(1, 2)]);
    }

    #[test]
    fn absent_member_yields_nothing() {
        assert!(scan_minimal(&toks("AAAA"), &profile("AB")).is_empty());
        assert!(scan_minimal(&[], &profile("AB")).is_empty());
    }

    #[test]
    fn lm_values_along_worked_example() {
        let p = profile("ABC");
        let mut sc = Scanner::new(&p);
        let mut lms = Vec::new();
        for t in toks("----BC-ACCB--") {
            sc.push(t);
            lms.push(sc.lm());
        }
        assert_eq!(lms[7], Some(4));
        assert_eq!(lms[8], Some(5));
        assert!(lms[..7].iter().all(Option::is_none));
        // lm(11) drops back to len(8, 11)
        assert_eq!(lms[10], Some(4));
        assert_eq!(lms[12], Some(6));
    }

    #[test]
    fn lm_undefined_until_all_seen() {
        let p = profile("AB");
        let mut sc = Scanner::new(&p);
        sc.push(b'A'.into());
        assert_eq!(sc.lm(), None);
        sc.push(b'B'.into());
        assert_eq!(sc.lm(), Some(2));
    }

    #[test]
    fn rejects_small_query_sets() {
        assert!(matches!(QueryProfile::new([7]), Err(Error::InvalidQuery(1))));
        assert!(matches!(QueryProfile::new([7, 7, 7]), Err(Error::InvalidQuery(1))));
        assert!(matches!(QueryProfile::new([]), Err(Error::InvalidQuery(0))));
        assert_eq!(QueryProfile::new([3, 1, 3]).unwrap().members(), &[1, 3]);
    }

    #[test]
    fn recency_list_moves_to_front() {
        let mut l = RecencyList::new(3);
        l.touch(0, 1);
        l.touch(1, 2);
        l.touch(2, 3);
        assert_eq!(l.order(), vec![2, 1, 0]);
        l.touch(0, 4);
        assert_eq!(l.order(), vec![0, 2, 1]);
        l.touch(0, 5);
        assert_eq!(l.order(), vec![0, 2, 1]);
        assert_eq!(l.oldest_position(), Some(2));
        assert_eq!(l.lm(5), Some(4));
        l.touch(1, 6);
        assert_eq!(l.order(), vec![1, 0, 2]);
        assert_eq!(l.capacity(), 3);
    }

    #[test]
    fn structures_stay_q_sized() {
        let p = profile("ACGT");
        let mut sc = Scanner::new(&p);
        for t in toks(&"ACGTTGCAXX".repeat(500)) {
            sc.push(t);
        }
        assert_eq!(sc.recency().capacity(), 4);
        assert_eq!(sc.recency().order().len(), 4);
    }

    #[test]
    fn coverage_depth_counts_overlaps() {
        let m = |a, b| MinimalCooccurrence::new(a, b);
        assert_eq!(coverage_depth(&[]), 0);
        assert_eq!(coverage_depth(&[m(1, 2)]), 1);
        assert_eq!(coverage_depth(&[m(1, 3), m(2, 4), m(3, 5), m(6, 7)]), 3);
        assert_eq!(coverage_depth(&[m(1, 2), m(3, 4)]), 1);
    }

    #[test]
    fn seed_does_not_change_output() {
        let s = toks("ABCABBCAACBBBACAC");
        let a = scan_minimal(&s, &QueryProfile::with_seed(toks("ABC"), 1).unwrap());
        let b = scan_minimal(&s, &QueryProfile::with_seed(toks("ABC"), 99).unwrap());
        assert_eq!(a, b);
    }
}
